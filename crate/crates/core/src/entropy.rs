//! Entanglement and information quantities: reduced density matrices, von
//! Neumann entropies, Shannon entropies of ditstring probabilities, mutual
//! information and the composite combinations `S_weak`, `S_strong` and
//! `S_Δ`.
//!
//! All entropies are in nats.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{checked_dim, Label, LabelSet, Partition};
use crate::solver::PureState;

/// Eigenvalues at or below this are treated as zero before taking logs.
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Probability distribution over the ditstrings of `num_sites` qudits, stored
/// densely by basis index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    num_sites: usize,
    local_dim: usize,
    probs: Vec<f64>,
}

impl ProbabilityTable {
    /// Validates nonnegativity and normalization to within `1e-9`.
    pub fn new(num_sites: usize, local_dim: usize, probs: Vec<f64>) -> Result<Self> {
        let dim = checked_dim(num_sites, local_dim)?;
        if probs.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidProbabilities(format!(
                "entry {p} is not a nonnegative number"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProbabilities(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Self {
            num_sites,
            local_dim,
            probs,
        })
    }

    /// Divides nonnegative weights by their sum.
    pub fn from_weights(num_sites: usize, local_dim: usize, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidProbabilities(format!(
                "weights sum to {total}"
            )));
        }
        Self::new(
            num_sites,
            local_dim,
            weights.into_iter().map(|w| w / total).collect(),
        )
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of outcomes with nonzero probability.
    pub fn support(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }

    pub fn max_probability(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }
}

/// `p_n = |c_n|²`.
pub fn probabilities(state: &PureState) -> ProbabilityTable {
    let lattice = state.lattice();
    ProbabilityTable {
        num_sites: lattice.num_sites(),
        local_dim: lattice.local_dim(),
        probs: state.amplitudes().iter().map(|c| c.norm_sqr()).collect(),
    }
}

/// `-Σ p ln p`.
pub fn shannon(p: &ProbabilityTable) -> f64 {
    entropy_of(p.probs.iter().copied())
}

fn entropy_of(values: impl Iterator<Item = f64>) -> f64 {
    -values.filter(|&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>()
}

fn validate_subset(subset: &[usize], num_sites: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidRegion(
            "subset must contain at least one site".into(),
        ));
    }
    let mut seen = vec![false; num_sites];
    for &s in subset {
        if s >= num_sites {
            return Err(Error::InvalidRegion(format!(
                "site {s} outside a chain of {num_sites}"
            )));
        }
        if std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidRegion(format!("site {s} listed twice")));
        }
    }
    Ok(())
}

fn complement_of(subset: &[usize], num_sites: usize) -> Vec<usize> {
    (0..num_sites).filter(|s| !subset.contains(s)).collect()
}

/// For every full basis index, the index of its sub-ditstring on `subset`
/// (digits taken in `subset` order, first most significant).
fn sub_indices(num_sites: usize, local_dim: usize, subset: &[usize]) -> Vec<usize> {
    let dim = local_dim.pow(num_sites as u32);
    let strides: Vec<usize> = subset
        .iter()
        .map(|&s| local_dim.pow((num_sites - 1 - s) as u32))
        .collect();
    (0..dim)
        .map(|k| {
            strides
                .iter()
                .fold(0, |acc, &stride| acc * local_dim + (k / stride) % local_dim)
        })
        .collect()
}

/// Marginal distribution on `subset`, summing over the other sites.
pub fn reduce_probabilities(p: &ProbabilityTable, subset: &[usize]) -> Result<ProbabilityTable> {
    validate_subset(subset, p.num_sites)?;
    let map = sub_indices(p.num_sites, p.local_dim, subset);
    let mut out = vec![0.0; p.local_dim.pow(subset.len() as u32)];
    for (k, &prob) in p.probs.iter().enumerate() {
        out[map[k]] += prob;
    }
    Ok(ProbabilityTable {
        num_sites: subset.len(),
        local_dim: p.local_dim,
        probs: out,
    })
}

/// Shannon entropy of the marginal on `subset`; zero for an empty subset.
pub fn marginal_shannon(p: &ProbabilityTable, subset: &[usize]) -> Result<f64> {
    if subset.is_empty() {
        return Ok(0.0);
    }
    reduce_probabilities(p, subset).map(|m| shannon(&m))
}

/// `I = H_R + H_{R̄} - H` for a region and its implicit complement.
pub fn mutual_information(p: &ProbabilityTable, region: &[usize]) -> Result<f64> {
    validate_subset(region, p.num_sites)?;
    if region.len() == p.num_sites {
        return Err(Error::InvalidRegion("region covers the whole chain".into()));
    }
    let complement = complement_of(region, p.num_sites);
    Ok(marginal_shannon(p, region)? + marginal_shannon(p, &complement)? - shannon(p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    subset: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl ReducedDensityMatrix {
    pub fn new(subset: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensityMatrix("matrix is not square".into()));
        }
        Ok(Self { subset, matrix })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = if self.matrix.iter().all(|c| c.im == 0.0) {
            self.matrix
                .map(|c| c.re)
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .collect()
        } else {
            self.matrix
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .collect()
        };
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// `ρ_R = Tr_{R̄} |ψ><ψ|`, computed from the amplitude matrix reshaped to
/// `(R, R̄)` as `M M†`.
pub fn reduced_density_matrix(state: &PureState, subset: &[usize]) -> Result<ReducedDensityMatrix> {
    let lattice = state.lattice();
    let n = lattice.num_sites();
    let d = lattice.local_dim();
    validate_subset(subset, n)?;
    if subset.len() == n {
        return Err(Error::InvalidRegion("subset covers the whole chain".into()));
    }
    let complement = complement_of(subset, n);
    let m = amplitude_matrix(state, subset, &complement);
    let rho = &m * m.adjoint();
    debug_assert_eq!(rho.nrows(), d.pow(subset.len() as u32));
    Ok(ReducedDensityMatrix {
        subset: subset.to_vec(),
        matrix: rho,
    })
}

/// Amplitudes arranged with `rows` sites as the row index and `cols` sites as
/// the column index.
pub fn amplitude_matrix(state: &PureState, rows: &[usize], cols: &[usize]) -> DMatrix<Complex64> {
    let lattice = state.lattice();
    let (n, d) = (lattice.num_sites(), lattice.local_dim());
    let r = sub_indices(n, d, rows);
    let c = sub_indices(n, d, cols);
    let mut m = DMatrix::zeros(d.pow(rows.len() as u32), d.pow(cols.len() as u32));
    for (k, amp) in state.amplitudes().iter().enumerate() {
        m[(r[k], c[k])] = *amp;
    }
    m
}

/// `-Σ λ ln λ` over the eigenvalues of `ρ`.
pub fn von_neumann(rho: &ReducedDensityMatrix) -> Result<f64> {
    let trace = rho.trace();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace is {trace}, not 1"
        )));
    }
    Ok(entropy_of(rho.eigenvalues().into_iter().map(|l| {
        if l <= EIGENVALUE_CUTOFF {
            0.0
        } else {
            l.min(1.0)
        }
    })))
}

/// Entanglement entropy of `subset` with the rest of the chain; zero when the
/// subset is the whole chain.
pub fn entanglement_entropy(state: &PureState, subset: &[usize]) -> Result<f64> {
    if subset.len() == state.lattice().num_sites() {
        validate_subset(subset, subset.len())?;
        return Ok(0.0);
    }
    von_neumann(&reduced_density_matrix(state, subset)?)
}

/// Regions entering the composite quantities, plus the disjoint union `AC`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    A,
    B,
    C,
    AB,
    BC,
    AC,
    ABC,
}

impl Region {
    pub const ALL: [Region; 7] = [
        Region::A,
        Region::B,
        Region::C,
        Region::AB,
        Region::BC,
        Region::AC,
        Region::ABC,
    ];

    pub fn labels(self) -> LabelSet {
        use Label::*;
        match self {
            Region::A => LabelSet::of(&[A]),
            Region::B => LabelSet::of(&[B]),
            Region::C => LabelSet::of(&[C]),
            Region::AB => LabelSet::of(&[A, B]),
            Region::BC => LabelSet::of(&[B, C]),
            Region::AC => LabelSet::of(&[A, C]),
            Region::ABC => LabelSet::of(&[A, B, C]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::A => "A",
            Region::B => "B",
            Region::C => "C",
            Region::AB => "AB",
            Region::BC => "BC",
            Region::AC => "AC",
            Region::ABC => "ABC",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Region::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidRegion(format!("unknown region '{s}'")))
    }
}

/// Cross-ratio `(x2-x1)(x4-x3) / ((x3-x1)(x4-x2))` of the partition edges.
pub fn eta(partition: &Partition) -> f64 {
    let [x1, x2, x3, x4] = partition.edges().map(|x| x as f64);
    (x2 - x1) * (x4 - x3) / ((x3 - x1) * (x4 - x2))
}

/// `S_weak`, `S_strong` and `S_Δ` built from one set of region values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Composites {
    pub weak: f64,
    pub strong: f64,
    pub delta: f64,
}

impl Composites {
    /// `weak = X_AB + X_BC - X_A - X_C`,
    /// `strong = X_AB + X_BC - X_B - X_ABC`,
    /// `delta = X_AB + X_BC - η (X_A + X_C) - (1-η)(X_B + X_ABC)`.
    pub fn from_regions(value: impl Fn(Region) -> f64, eta: f64) -> Self {
        let pair = value(Region::AB) + value(Region::BC);
        let outer = value(Region::A) + value(Region::C);
        let inner = value(Region::B) + value(Region::ABC);
        Self {
            weak: pair - outer,
            strong: pair - inner,
            delta: pair - eta * outer - (1.0 - eta) * inner,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompositeKind {
    Weak,
    Strong,
    Delta,
}

impl CompositeKind {
    pub fn pick(self, c: &Composites) -> f64 {
        match self {
            CompositeKind::Weak => c.weak,
            CompositeKind::Strong => c.strong,
            CompositeKind::Delta => c.delta,
        }
    }
}

impl FromStr for CompositeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', '-'], "").as_str() {
            "weak" | "sweak" => Ok(CompositeKind::Weak),
            "strong" | "sstrong" => Ok(CompositeKind::Strong),
            "delta" | "sdelta" => Ok(CompositeKind::Delta),
            _ => Err(Error::InvalidParameters(format!(
                "unknown composite quantity '{s}'"
            ))),
        }
    }
}

/// Entropies of one region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionEntropy {
    /// von Neumann entropy.
    pub s: f64,
    /// Shannon entropy of the marginal.
    pub h: f64,
    /// Mutual information with the complement.
    pub i: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    regions: [RegionEntropy; 7],
    pub eta: f64,
    /// Composites of the von Neumann entropies.
    pub exact: Composites,
    /// The same combinations with mutual informations in place of entropies.
    pub mutual: Composites,
}

impl EntropyReport {
    pub fn region(&self, r: Region) -> &RegionEntropy {
        &self.regions[r.slot()]
    }
}

/// Shannon entropy of a region's marginal and its mutual information with
/// the complement, from a full-chain table with total entropy `total`.
fn region_information(p: &ProbabilityTable, sites: &[usize], total: f64) -> Result<(f64, f64)> {
    let h = marginal_shannon(p, sites)?;
    let complement = complement_of(sites, p.num_sites);
    let i = h + marginal_shannon(p, &complement)? - total;
    Ok((h, i))
}

/// Mutual-information composites evaluated on a probability table.
pub fn mutual_composites(p: &ProbabilityTable, partition: &Partition) -> Result<Composites> {
    if p.num_sites != partition.num_sites() {
        return Err(Error::DimensionMismatch {
            expected: partition.num_sites(),
            got: p.num_sites,
        });
    }
    let total = shannon(p);
    let mut info = [0.0; 7];
    for r in Region::ALL {
        let sites = partition.subset_sites(r.labels())?;
        info[r.slot()] = region_information(p, &sites, total)?.1;
    }
    Ok(Composites::from_regions(|r| info[r.slot()], eta(partition)))
}

pub fn composite_report(state: &PureState, partition: &Partition) -> Result<EntropyReport> {
    let n = state.lattice().num_sites();
    if n != partition.num_sites() {
        return Err(Error::DimensionMismatch {
            expected: partition.num_sites(),
            got: n,
        });
    }
    let p = probabilities(state);
    let total = shannon(&p);
    let mut regions = [RegionEntropy {
        s: 0.0,
        h: 0.0,
        i: 0.0,
    }; 7];
    for r in Region::ALL {
        let sites = partition.subset_sites(r.labels())?;
        let s = entanglement_entropy(state, &sites)?;
        let (h, i) = region_information(&p, &sites, total)?;
        regions[r.slot()] = RegionEntropy { s, h, i };
    }
    let eta = eta(partition);
    Ok(EntropyReport {
        regions,
        eta,
        exact: Composites::from_regions(|r| regions[r.slot()].s, eta),
        mutual: Composites::from_regions(|r| regions[r.slot()].i, eta),
    })
}
