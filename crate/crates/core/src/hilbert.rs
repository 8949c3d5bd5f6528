//! Qudit computational basis, ditstring indexing and multipartitions of a
//! one-dimensional chain.
//!
//! Basis states are labelled by ditstrings `n_0 n_1 ... n_{N-1}` with digit
//! `n_0` the most significant, so that `index = sum_j n_j d^(N-1-j)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest Hilbert-space dimension accepted anywhere in the crate.
pub const MAX_DIM: usize = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    Periodic,
    Open,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Periodic => write!(f, "pbc"),
            Boundary::Open => write!(f, "obc"),
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pbc" | "periodic" => Ok(Boundary::Periodic),
            "obc" | "open" => Ok(Boundary::Open),
            other => Err(Error::InvalidLattice(format!(
                "unknown boundary condition '{other}'"
            ))),
        }
    }
}

/// A chain of `num_sites` qudits with `local_dim` levels each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    num_sites: usize,
    local_dim: usize,
    boundary: Boundary,
}

impl LatticeSpec {
    pub fn new(num_sites: usize, local_dim: usize, boundary: Boundary) -> Result<Self> {
        if num_sites == 0 {
            return Err(Error::InvalidLattice(
                "at least one site is required".into(),
            ));
        }
        if local_dim < 2 {
            return Err(Error::InvalidLattice(format!(
                "local dimension must be at least 2, got {local_dim}"
            )));
        }
        checked_dim(num_sites, local_dim)?;
        Ok(Self {
            num_sites,
            local_dim,
            boundary,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn with_boundary(self, boundary: Boundary) -> Self {
        Self { boundary, ..self }
    }

    /// Hilbert-space dimension `d^N`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.num_sites as u32)
    }

    /// Basis-state digit of `site` within `index`.
    #[inline]
    pub fn digit(&self, index: usize, site: usize) -> usize {
        (index / self.stride(site)) % self.local_dim
    }

    /// Place value `d^(N-1-site)` of a site's digit.
    #[inline]
    pub fn stride(&self, site: usize) -> usize {
        self.local_dim.pow((self.num_sites - 1 - site) as u32)
    }
}

/// `d^N`, rejecting anything above [`MAX_DIM`].
pub(crate) fn checked_dim(num_sites: usize, local_dim: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..num_sites {
        dim = dim.checked_mul(local_dim).filter(|&d| d <= MAX_DIM).ok_or(
            Error::HilbertSpaceTooLarge {
                num_sites,
                local_dim,
            },
        )?;
    }
    Ok(dim)
}

/// Computational-basis label: one digit in `0..d` per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DitString(Vec<usize>);

impl DitString {
    pub fn new(digits: Vec<usize>, spec: &LatticeSpec) -> Result<Self> {
        if digits.len() != spec.num_sites() {
            return Err(Error::LengthMismatch {
                expected: spec.num_sites(),
                got: digits.len(),
            });
        }
        validate_digits(&digits, spec.local_dim())?;
        Ok(Self(digits))
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenated decimal digits, e.g. `"010211"`.
    pub fn to_text(&self, local_dim: usize) -> Result<String> {
        if local_dim > 10 {
            return Err(Error::InvalidLattice(format!(
                "text ditstrings need local dimension <= 10, got {local_dim}"
            )));
        }
        Ok(self
            .0
            .iter()
            .map(|&n| char::from_digit(n as u32, 10).expect("digit below 10"))
            .collect())
    }

    /// Inverse of [`DitString::to_text`].
    pub fn parse_text(text: &str, spec: &LatticeSpec) -> Result<Self> {
        if spec.local_dim() > 10 {
            return Err(Error::InvalidLattice(format!(
                "text ditstrings need local dimension <= 10, got {}",
                spec.local_dim()
            )));
        }
        let digits = text
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|n| n as usize)
                    .ok_or_else(|| Error::InvalidLattice(format!("'{c}' is not a decimal digit")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(digits, spec)
    }
}

fn validate_digits(digits: &[usize], local_dim: usize) -> Result<()> {
    match digits.iter().position(|&n| n >= local_dim) {
        Some(site) => Err(Error::DigitOutOfRange {
            site,
            digit: digits[site],
            local_dim,
        }),
        None => Ok(()),
    }
}

pub fn index_to_dits(index: usize, spec: &LatticeSpec) -> Result<DitString> {
    let dim = spec.dim();
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    let d = spec.local_dim();
    let mut digits = vec![0; spec.num_sites()];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % d;
        rest /= d;
    }
    Ok(DitString(digits))
}

pub fn dits_to_index(dits: &DitString, spec: &LatticeSpec) -> Result<usize> {
    if dits.len() != spec.num_sites() {
        return Err(Error::LengthMismatch {
            expected: spec.num_sites(),
            got: dits.len(),
        });
    }
    validate_digits(dits.digits(), spec.local_dim())?;
    Ok(dits
        .digits()
        .iter()
        .fold(0, |acc, &n| acc * spec.local_dim() + n))
}

/// Block label of a site in a four-part split of the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    C,
    D,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::A, Label::B, Label::C, Label::D];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'A' => Some(Label::A),
            'B' => Some(Label::B),
            'C' => Some(Label::C),
            'D' => Some(Label::D),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Label::A => 'A',
            Label::B => 'B',
            Label::C => 'C',
            Label::D => 'D',
        }
    }
}

/// A set of block labels, e.g. `AB` or `ABC`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct LabelSet(u8);

impl LabelSet {
    pub const fn empty() -> Self {
        LabelSet(0)
    }

    pub fn of(labels: &[Label]) -> Self {
        LabelSet(labels.iter().fold(0, |acc, l| acc | l.bit()))
    }

    pub fn contains(self, label: Label) -> bool {
        self.0 & label.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The labels not in this set.
    pub fn complement(self) -> Self {
        LabelSet(!self.0 & 0b1111)
    }

    pub fn labels(self) -> impl Iterator<Item = Label> {
        Label::ALL.into_iter().filter(move |&l| self.contains(l))
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.labels() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for LabelSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                Label::from_char(c.to_ascii_uppercase())
                    .ok_or_else(|| Error::InvalidRegion(format!("unknown block label '{c}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(|ls| LabelSet::of(&ls))
    }
}

/// Four contiguous blocks `A B C D` around a ring.
///
/// `edges = (x1, x2, x3, x4)` are block boundaries measured in a frame that
/// starts at the original index of the first `A` site and increases around
/// the ring: `A = [x1, x2)`, `B = [x2, x3)`, `C = [x3, x4)` and
/// `D = [x4, x1 + N)`, all taken modulo `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<Label>,
    edges: [usize; 4],
}

impl Partition {
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn num_sites(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> [usize; 4] {
        self.edges
    }

    pub fn block_size(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Sites carrying any label in `region`, ascending.
    pub fn subset_sites(&self, region: LabelSet) -> Result<Vec<usize>> {
        if region.is_empty() {
            return Err(Error::InvalidRegion(
                "region must name at least one block".into(),
            ));
        }
        Ok(self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| region.contains(l))
            .map(|(i, _)| i)
            .collect())
    }

    pub fn pattern(&self) -> String {
        self.labels.iter().map(|l| l.as_char()).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pattern())
    }
}

/// Parse a pattern such as `"DDAABBBBCCDD"`; all four blocks must be present.
pub fn parse_partition(pattern: &str, spec: &LatticeSpec) -> Result<Partition> {
    parse_partition_with(pattern, spec, false)
}

/// Like [`parse_partition`], optionally accepting a three-part split with no
/// `D` sites.
pub fn parse_partition_with(
    pattern: &str,
    spec: &LatticeSpec,
    allow_empty_d: bool,
) -> Result<Partition> {
    let labels = pattern
        .chars()
        .map(|c| {
            Label::from_char(c).ok_or_else(|| {
                Error::InvalidPartition(format!("illegal character '{c}' in '{pattern}'"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = spec.num_sites();
    if labels.len() != n {
        return Err(Error::InvalidPartition(format!(
            "pattern '{pattern}' has {} sites, lattice has {n}",
            labels.len()
        )));
    }

    let count = |l: Label| labels.iter().filter(|&&x| x == l).count();
    let sizes = Label::ALL.map(count);
    for (label, &size) in Label::ALL.iter().zip(&sizes).take(3) {
        if size == 0 {
            return Err(Error::InvalidPartition(format!(
                "block {} is empty in '{pattern}'",
                label.as_char()
            )));
        }
    }
    if sizes[3] == 0 && !allow_empty_d {
        return Err(Error::InvalidPartition(format!(
            "block D is empty in '{pattern}'"
        )));
    }

    // A is nonempty and not the whole ring, so some A site follows a non-A site.
    let starts: Vec<usize> = (0..n)
        .filter(|&i| labels[i] == Label::A && labels[(i + n - 1) % n] != Label::A)
        .collect();
    if starts.len() != 1 {
        return Err(Error::InvalidPartition(format!(
            "block A is not contiguous in '{pattern}'"
        )));
    }
    let x1 = starts[0];
    let expected = Label::ALL
        .iter()
        .zip(&sizes)
        .flat_map(|(&l, &size)| std::iter::repeat_n(l, size));
    for (offset, want) in expected.enumerate() {
        if labels[(x1 + offset) % n] != want {
            return Err(Error::InvalidPartition(format!(
                "'{pattern}' is not contiguous blocks A, B, C, D around the ring"
            )));
        }
    }

    let x2 = x1 + sizes[0];
    let x3 = x2 + sizes[1];
    let x4 = x3 + sizes[2];
    Ok(Partition {
        labels,
        edges: [x1, x2, x3, x4],
    })
}
