//! Measurement counts: multinomial sampling of a probability table and the
//! text format used to exchange counts.
//!
//! ```text
//! # d=2 N=2
//! 00,500
//! 11,500
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::entropy::ProbabilityTable;
use crate::error::{Error, Result};
use crate::hilbert::{dits_to_index, index_to_dits, Boundary, DitString, LatticeSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    num_sites: usize,
    local_dim: usize,
    /// Ditstring text to count; only nonzero counts are stored.
    counts: BTreeMap<String, u64>,
}

impl CountsTable {
    pub fn new(num_sites: usize, local_dim: usize, counts: BTreeMap<String, u64>) -> Result<Self> {
        let spec = LatticeSpec::new(num_sites, local_dim, Boundary::Periodic)?;
        for text in counts.keys() {
            DitString::parse_text(text, &spec)?;
        }
        let counts: BTreeMap<String, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        if counts.is_empty() {
            return Err(Error::InvalidProbabilities(
                "counts total zero shots".into(),
            ));
        }
        Ok(Self {
            num_sites,
            local_dim,
            counts,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Counts divided by the total number of shots.
    pub fn to_probabilities(&self) -> Result<ProbabilityTable> {
        let spec = LatticeSpec::new(self.num_sites, self.local_dim, Boundary::Periodic)?;
        let mut weights = vec![0.0; spec.dim()];
        for (text, &c) in &self.counts {
            let index = dits_to_index(&DitString::parse_text(text, &spec)?, &spec)?;
            weights[index] = c as f64;
        }
        ProbabilityTable::from_weights(self.num_sites, self.local_dim, weights)
    }

    /// The counts-file text, header included, entries in ditstring order.
    pub fn to_text(&self) -> String {
        let mut out = format!("# d={} N={}\n", self.local_dim, self.num_sites);
        for (text, c) in &self.counts {
            let _ = writeln!(out, "{text},{c}");
        }
        out
    }
}

/// Draws `shots` outcomes from `p` as a sequence of conditional binomials,
/// so the result depends only on the table, `shots` and `seed`.
pub fn sample_counts(p: &ProbabilityTable, shots: u64, seed: u64) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::InvalidParameters("shots must be positive".into()));
    }
    let spec = LatticeSpec::new(p.num_sites(), p.local_dim(), Boundary::Periodic)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = p.probs().iter().rposition(|&x| x > 0.0).unwrap_or(0);
    let mut remaining = shots;
    let mut mass = 1.0;
    let mut counts = BTreeMap::new();
    for (index, &prob) in p.probs().iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if prob <= 0.0 {
            continue;
        }
        let k = if index == last {
            remaining
        } else {
            let q = (prob / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .map_err(|e| Error::InvalidProbabilities(e.to_string()))?
                .sample(&mut rng)
        };
        mass -= prob;
        if k > 0 {
            counts.insert(index_to_dits(index, &spec)?.to_text(spec.local_dim())?, k);
            remaining -= k;
        }
    }
    CountsTable::new(p.num_sites(), p.local_dim(), counts)
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix('#')?;
    let (mut d, mut n) = (None, None);
    for token in rest.split_whitespace() {
        match token.split_once('=') {
            Some(("d", v)) => d = v.parse().ok(),
            Some(("N", v)) => n = v.parse().ok(),
            _ => return None,
        }
    }
    Some((d?, n?))
}

/// Parses a counts file. The first non-blank line must be the
/// `# d=<d> N=<N>` header; later `#` lines are comments and repeated
/// ditstrings are summed.
pub fn parse_counts(text: &str) -> Result<CountsTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_no, header) = lines.next().ok_or(Error::CountsFormat {
        line: 1,
        message: "empty counts file".into(),
    })?;
    let (d, n) = parse_header(header.trim()).ok_or_else(|| Error::CountsFormat {
        line: header_no + 1,
        message: format!("expected '# d=<d> N=<N>', got '{}'", header.trim()),
    })?;
    let spec = LatticeSpec::new(n, d, Boundary::Periodic).map_err(|e| Error::CountsFormat {
        line: header_no + 1,
        message: e.to_string(),
    })?;
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (k, raw) in lines {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        let fail = |message: String| Error::CountsFormat {
            line: k + 1,
            message,
        };
        let (dits, count) = line
            .split_once(',')
            .ok_or_else(|| fail(format!("expected 'ditstring,count', got '{line}'")))?;
        let dits = dits.trim();
        DitString::parse_text(dits, &spec).map_err(|e| fail(e.to_string()))?;
        let count: u64 = count.trim().parse().map_err(|_| {
            fail(format!(
                "count '{}' is not a nonnegative integer",
                count.trim()
            ))
        })?;
        *counts.entry(dits.to_string()).or_default() += count;
    }
    CountsTable::new(n, d, counts).map_err(|e| match e {
        Error::InvalidProbabilities(m) => Error::CountsFormat {
            line: 0,
            message: m,
        },
        other => other,
    })
}

/// Probability table estimated from a counts file.
pub fn ingest_counts(text: &str) -> Result<ProbabilityTable> {
    parse_counts(text)?.to_probabilities()
}
