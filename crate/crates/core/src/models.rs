//! Sparse Hamiltonians for the transverse-field Ising chain, the truncated
//! lattice phi^4 chain and the Rydberg atom chain.
//!
//! Every model is a sum of one-site operators and two-site products. Terms
//! are applied directly to basis states, so `U^{⊗N}`-sized Kronecker products
//! are never formed.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Boundary, LatticeSpec};

/// Hermitian matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian {
    lattice: LatticeSpec,
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
    hermitian: bool,
}

impl SparseHamiltonian {
    /// Assemble from `(row, col, value)` triplets. Duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        lattice: LatticeSpec,
        mut triplets: Vec<(usize, usize, Complex64)>,
    ) -> Result<Self> {
        let dim = lattice.dim();
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::IndexOutOfRange {
                index: r.max(c),
                dim,
            });
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));

        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|&(_, _, v)| v != Complex64::new(0.0, 0.0));

        let mut row_ptr = vec![0; dim + 1];
        for &(r, _, _) in &merged {
            row_ptr[r + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = merged.iter().map(|&(_, c, _)| c).collect();
        let values = merged.iter().map(|&(_, _, v)| v).collect();

        let mut h = Self {
            lattice,
            dim,
            row_ptr,
            col_idx,
            values,
            hermitian: false,
        };
        h.hermitian = h.hermitian_deviation() == 0.0;
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lattice whose basis indexes the rows and columns.
    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// True when `H = H†` holds exactly.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// True when every stored entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    /// Entry `(row, col)`, zero when not stored.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let span = &self.col_idx[self.row_ptr[row]..self.row_ptr[row + 1]];
        match span.binary_search(&col) {
            Ok(k) => self.values[self.row_ptr[row] + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// `max |H_rc - conj(H_cr)|` over stored entries.
    pub fn hermitian_deviation(&self) -> f64 {
        self.entries()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *out = acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }

    /// Real part as a dense matrix; meaningful when [`is_real`](Self::is_real).
    pub fn to_dense_real(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v.re;
        }
        m
    }
}

/// Which representation of the Ising chain to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsingBasis {
    /// `-h Σ σᶻ - J Σ σˣσˣ`
    Z,
    /// `-h Σ σˣ - J Σ σᶻσᶻ`
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub h: f64,
    pub j: f64,
    pub basis: IsingBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phi4Params {
    pub omega: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub n_max: usize,
    /// Field operator is `phi_scale * (a + a†)`.
    pub phi_scale: f64,
}

impl Phi4Params {
    /// Parameters with the conventional `phi = (a + a†)/√2`.
    pub fn new(omega: f64, lambda: f64, kappa: f64, n_max: usize) -> Self {
        Self {
            omega,
            lambda,
            kappa,
            n_max,
            phi_scale: FRAC_1_SQRT_2,
        }
    }
}

/// Rydberg chain parameters in units of the Rabi frequency.
///
/// The van der Waals coupling is `V_ij = (R_b / r_ij)^6` in the same energy
/// unit, independent of the drive amplitude `rabi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RydbergParams {
    pub rabi: f64,
    pub detuning: f64,
    /// `R_b / a`.
    pub blockade_ratio: f64,
    /// Lattice spacing `a`.
    pub spacing: f64,
}

impl RydbergParams {
    pub fn new(rabi: f64, detuning: f64, blockade_ratio: f64) -> Self {
        Self {
            rabi,
            detuning,
            blockade_ratio,
            spacing: 1.0,
        }
    }

    /// Laboratory values: Ω = 2.5×2π MHz, Δ = 3.5 Ω and R_b = 8.375 μm.
    /// The spacing is chosen so that `R_b / a = blockade_ratio`; the returned
    /// spacing is in μm and energies are in units of Ω.
    pub fn lab_defaults(blockade_ratio: f64) -> Self {
        Self {
            rabi: 1.0,
            detuning: 3.5,
            blockade_ratio,
            spacing: LAB_BLOCKADE_RADIUS_UM / blockade_ratio,
        }
    }
}

/// Rabi angular frequency of the laboratory preset, in rad/μs.
pub const LAB_RABI_RAD_PER_US: f64 = 2.5 * 2.0 * std::f64::consts::PI;
/// Blockade radius of the laboratory preset, in μm.
pub const LAB_BLOCKADE_RADIUS_UM: f64 = 8.375;

/// Nearest-neighbour bonds. The periodic wrap bond is only distinct for N > 2.
pub fn bonds(spec: &LatticeSpec) -> Vec<(usize, usize)> {
    let n = spec.num_sites();
    let mut out: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if spec.boundary() == Boundary::Periodic && n > 2 {
        out.push((n - 1, 0));
    }
    out
}

pub fn pauli_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

/// `σᶻ = diag(+1, -1)`, so digit 0 is spin up.
pub fn pauli_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Truncated annihilation operator, `a|n> = √n |n-1>` on `n_max` levels.
pub fn annihilation(n_max: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n_max, n_max, |r, c| {
        if c == r + 1 {
            (c as f64).sqrt()
        } else {
            0.0
        }
    })
}

pub fn creation(n_max: usize) -> DMatrix<f64> {
    annihilation(n_max).transpose()
}

/// Truncated field operator `scale * (a + a†)`.
pub fn field_operator(n_max: usize, scale: f64) -> DMatrix<f64> {
    (annihilation(n_max) + creation(n_max)) * scale
}

/// `coeff * op_i ⊗ op_j` on sites `(i, j)`.
type PairTerm = (usize, usize, f64, DMatrix<f64>, DMatrix<f64>);

/// Sum of one-site and two-site operator products, applied basis state by
/// basis state.
struct TermSum<'a> {
    spec: &'a LatticeSpec,
    onsite: Vec<(usize, DMatrix<f64>)>,
    pairs: Vec<PairTerm>,
}

impl<'a> TermSum<'a> {
    fn new(spec: &'a LatticeSpec) -> Self {
        Self {
            spec,
            onsite: Vec::new(),
            pairs: Vec::new(),
        }
    }

    fn onsite(&mut self, site: usize, op: DMatrix<f64>) {
        self.onsite.push((site, op));
    }

    fn pair(&mut self, i: usize, j: usize, coeff: f64, op_i: DMatrix<f64>, op_j: DMatrix<f64>) {
        self.pairs.push((i, j, coeff, op_i, op_j));
    }

    fn build(self) -> Result<SparseHamiltonian> {
        let spec = self.spec;
        let d = spec.local_dim();
        let dim = spec.dim();
        let mut triplets = Vec::new();
        for k in 0..dim {
            for (site, op) in &self.onsite {
                let n = spec.digit(k, *site);
                let stride = spec.stride(*site);
                for m in 0..d {
                    let v = op[(m, n)];
                    if v != 0.0 {
                        let target = k + m * stride - n * stride;
                        triplets.push((target, k, Complex64::new(v, 0.0)));
                    }
                }
            }
            for (i, j, coeff, op_i, op_j) in &self.pairs {
                let (ni, nj) = (spec.digit(k, *i), spec.digit(k, *j));
                let (si, sj) = (spec.stride(*i), spec.stride(*j));
                for mi in 0..d {
                    let vi = op_i[(mi, ni)];
                    if vi == 0.0 {
                        continue;
                    }
                    for mj in 0..d {
                        let v = coeff * vi * op_j[(mj, nj)];
                        if v != 0.0 {
                            let target = k + mi * si + mj * sj - ni * si - nj * sj;
                            triplets.push((target, k, Complex64::new(v, 0.0)));
                        }
                    }
                }
            }
        }
        SparseHamiltonian::from_triplets(*spec, triplets)
    }
}

fn require_dim(spec: &LatticeSpec, d: usize, model: &str) -> Result<()> {
    if spec.local_dim() != d {
        return Err(Error::InvalidParameters(format!(
            "{model} needs local dimension {d}, lattice has {}",
            spec.local_dim()
        )));
    }
    Ok(())
}

fn require_finite(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !v.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "{name} must be finite, got {v}"
            )));
        }
    }
    Ok(())
}

pub fn build_ising(spec: &LatticeSpec, params: &IsingParams) -> Result<SparseHamiltonian> {
    require_dim(spec, 2, "Ising chain")?;
    require_finite(&[("h", params.h), ("J", params.j)])?;
    let (field, coupling) = match params.basis {
        IsingBasis::Z => (pauli_z(), pauli_x()),
        IsingBasis::X => (pauli_x(), pauli_z()),
    };
    let mut terms = TermSum::new(spec);
    for site in 0..spec.num_sites() {
        terms.onsite(site, &field * -params.h);
    }
    for (i, j) in bonds(spec) {
        terms.pair(i, j, -params.j, coupling.clone(), coupling.clone());
    }
    terms.build()
}

pub fn build_phi4(spec: &LatticeSpec, params: &Phi4Params) -> Result<SparseHamiltonian> {
    if params.n_max < 2 {
        return Err(Error::InvalidParameters(format!(
            "n_max must be at least 2, got {}",
            params.n_max
        )));
    }
    require_dim(spec, params.n_max, "phi^4 chain")?;
    require_finite(&[
        ("omega", params.omega),
        ("lambda", params.lambda),
        ("kappa", params.kappa),
        ("phi_scale", params.phi_scale),
    ])?;
    let n_max = params.n_max;
    let phi = field_operator(n_max, params.phi_scale);
    let phi2 = &phi * &phi;
    let phi4 = &phi2 * &phi2;
    let number = creation(n_max) * annihilation(n_max);
    let local =
        (number + DMatrix::identity(n_max, n_max) * 0.5) * params.omega + phi4 * params.lambda;

    let mut terms = TermSum::new(spec);
    for site in 0..spec.num_sites() {
        terms.onsite(site, local.clone());
    }
    for (i, j) in bonds(spec) {
        terms.pair(i, j, -2.0 * params.kappa, phi.clone(), phi.clone());
    }
    terms.build()
}

/// Ring or chain separation of two sites, in lattice units.
pub fn separation(spec: &LatticeSpec, i: usize, j: usize) -> usize {
    let gap = i.abs_diff(j);
    match spec.boundary() {
        Boundary::Periodic => gap.min(spec.num_sites() - gap),
        Boundary::Open => gap,
    }
}

pub fn build_rydberg(spec: &LatticeSpec, params: &RydbergParams) -> Result<SparseHamiltonian> {
    require_dim(spec, 2, "Rydberg chain")?;
    require_finite(&[
        ("rabi", params.rabi),
        ("detuning", params.detuning),
        ("blockade_ratio", params.blockade_ratio),
        ("spacing", params.spacing),
    ])?;
    if params.blockade_ratio <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "blockade ratio must be positive, got {}",
            params.blockade_ratio
        )));
    }
    if params.spacing <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "spacing must be positive, got {}",
            params.spacing
        )));
    }
    let n = spec.num_sites();
    let occupation = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
    let local = pauli_x() * (params.rabi / 2.0) - &occupation * params.detuning;
    let blockade_radius = params.blockade_ratio * params.spacing;

    let mut terms = TermSum::new(spec);
    for site in 0..n {
        terms.onsite(site, local.clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            let r = params.spacing * separation(spec, i, j) as f64;
            let v = (blockade_radius / r).powi(6);
            terms.pair(i, j, v, occupation.clone(), occupation.clone());
        }
    }
    terms.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::SymmetricEigen;

    fn lattice(n: usize, d: usize, bc: Boundary) -> LatticeSpec {
        LatticeSpec::new(n, d, bc).unwrap()
    }

    fn sorted_spectrum(h: &SparseHamiltonian) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(h.to_dense_real())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    fn assert_dense_eq(h: &SparseHamiltonian, expected: &[f64]) {
        let dense = h.to_dense_real();
        let n = h.dim();
        assert_eq!(expected.len(), n * n);
        for r in 0..n {
            for c in 0..n {
                assert_relative_eq!(dense[(r, c)], expected[r * n + c], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn ising_single_site() {
        let h = build_ising(
            &lattice(1, 2, Boundary::Periodic),
            &IsingParams {
                h: 1.0,
                j: 0.0,
                basis: IsingBasis::Z,
            },
        )
        .unwrap();
        assert_dense_eq(&h, &[-1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn ising_decoupled_pair() {
        let h = build_ising(
            &lattice(2, 2, Boundary::Open),
            &IsingParams {
                h: 1.0,
                j: 0.0,
                basis: IsingBasis::Z,
            },
        )
        .unwrap();
        assert_relative_eq!(sorted_spectrum(&h)[0], -2.0, epsilon = 1e-12);
    }

    #[test]
    fn ising_x_basis_coupling_is_diagonal() {
        let h = build_ising(
            &lattice(2, 2, Boundary::Open),
            &IsingParams {
                h: 0.0,
                j: 1.0,
                basis: IsingBasis::X,
            },
        )
        .unwrap();
        assert_dense_eq(
            &h,
            &[
                -1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0,
            ],
        );
    }

    #[test]
    fn rejects_wrong_local_dim() {
        let s = lattice(2, 3, Boundary::Open);
        assert!(build_ising(
            &s,
            &IsingParams {
                h: 1.0,
                j: 1.0,
                basis: IsingBasis::Z
            }
        )
        .is_err());
        assert!(build_rydberg(&s, &RydbergParams::new(1.0, 1.0, 1.0)).is_err());
        assert!(build_phi4(
            &lattice(2, 2, Boundary::Open),
            &Phi4Params::new(1.0, 1.0, 1.0, 3)
        )
        .is_err());
        assert!(build_phi4(
            &lattice(2, 2, Boundary::Open),
            &Phi4Params::new(1.0, 1.0, 1.0, 1)
        )
        .is_err());
    }

    #[test]
    fn phi4_harmonic_limit() {
        let h = build_phi4(
            &lattice(1, 3, Boundary::Periodic),
            &Phi4Params::new(1.0, 0.0, 0.0, 3),
        )
        .unwrap();
        assert_dense_eq(&h, &[0.5, 0.0, 0.0, 0.0, 1.5, 0.0, 0.0, 0.0, 2.5]);
        let h = build_phi4(
            &lattice(2, 3, Boundary::Periodic),
            &Phi4Params::new(1.0, 0.0, 0.0, 3),
        )
        .unwrap();
        assert_relative_eq!(sorted_spectrum(&h)[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn phi4_two_level_quartic_is_quarter_identity() {
        // phi = σˣ/√2 on two levels, so phi^4 = I/4.
        let h = build_phi4(
            &lattice(1, 2, Boundary::Open),
            &Phi4Params::new(0.0, 1.0, 0.0, 2),
        )
        .unwrap();
        assert_dense_eq(&h, &[0.25, 0.0, 0.0, 0.25]);
    }

    #[test]
    fn truncated_commutator() {
        for n_max in 2..=6 {
            let a = annihilation(n_max);
            let ad = creation(n_max);
            let comm = &a * &ad - &ad * &a;
            let mut expected = DMatrix::<f64>::identity(n_max, n_max);
            expected[(n_max - 1, n_max - 1)] -= n_max as f64;
            assert!((comm - expected).amax() <= 1e-14);
        }
    }

    #[test]
    fn rydberg_single_site_detuning() {
        let h = build_rydberg(
            &lattice(1, 2, Boundary::Periodic),
            &RydbergParams::new(0.0, 1.0, 1.0),
        )
        .unwrap();
        assert_dense_eq(&h, &[0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn rydberg_pair_interaction() {
        let h = build_rydberg(
            &lattice(2, 2, Boundary::Open),
            &RydbergParams::new(0.0, 1.0, 0.5),
        )
        .unwrap();
        let v = 0.5f64.powi(6);
        let dense = h.to_dense_real();
        let diag: Vec<f64> = (0..4).map(|k| dense[(k, k)]).collect();
        assert_relative_eq!(diag[0], 0.0);
        assert_relative_eq!(diag[1], -1.0);
        assert_relative_eq!(diag[2], -1.0);
        assert_relative_eq!(diag[3], -2.0 + v, epsilon = 1e-15);
        assert_eq!(h.nnz(), 3);
    }

    #[test]
    fn rydberg_weak_blockade_fills_every_site() {
        let h = build_rydberg(
            &lattice(3, 2, Boundary::Periodic),
            &RydbergParams::new(0.0, 2.0, 1e-3),
        )
        .unwrap();
        let dense = h.to_dense_real();
        let (k, e) = (0..8)
            .map(|k| (k, dense[(k, k)]))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert_eq!(k, 0b111);
        assert_relative_eq!(e, -6.0, epsilon = 1e-12);
    }

    #[test]
    fn rydberg_rejects_nonpositive_ratio() {
        let s = lattice(3, 2, Boundary::Open);
        assert!(build_rydberg(&s, &RydbergParams::new(1.0, 1.0, 0.0)).is_err());
        assert!(build_rydberg(&s, &RydbergParams::new(1.0, 1.0, -1.0)).is_err());
    }

    #[test]
    fn periodic_distances_use_ring_separation() {
        let s = lattice(6, 2, Boundary::Periodic);
        assert_eq!(separation(&s, 0, 5), 1);
        assert_eq!(separation(&s, 0, 3), 3);
        assert_eq!(separation(&s.with_boundary(Boundary::Open), 0, 5), 5);
    }

    #[test]
    fn bonds_per_boundary() {
        assert_eq!(
            bonds(&lattice(4, 2, Boundary::Open)),
            vec![(0, 1), (1, 2), (2, 3)]
        );
        assert_eq!(bonds(&lattice(4, 2, Boundary::Periodic)).len(), 4);
        assert_eq!(bonds(&lattice(2, 2, Boundary::Periodic)), vec![(0, 1)]);
        assert!(bonds(&lattice(1, 2, Boundary::Periodic)).is_empty());
    }

    fn all_models(n: usize, bc: Boundary) -> Vec<SparseHamiltonian> {
        vec![
            build_ising(
                &lattice(n, 2, bc),
                &IsingParams {
                    h: 0.7,
                    j: 1.3,
                    basis: IsingBasis::Z,
                },
            )
            .unwrap(),
            build_ising(
                &lattice(n, 2, bc),
                &IsingParams {
                    h: 0.7,
                    j: 1.3,
                    basis: IsingBasis::X,
                },
            )
            .unwrap(),
            build_phi4(&lattice(n, 3, bc), &Phi4Params::new(1.0, 0.4, 0.6, 3)).unwrap(),
            build_rydberg(&lattice(n, 2, bc), &RydbergParams::new(1.0, 2.5, 1.5)).unwrap(),
        ]
    }

    #[test]
    fn hamiltonians_are_hermitian_and_real() {
        for bc in [Boundary::Periodic, Boundary::Open] {
            for h in all_models(5, bc) {
                assert!(h.is_hermitian());
                assert!(h.is_real());
                assert_eq!(h.hermitian_deviation(), 0.0);
            }
        }
    }

    /// `T|n_0 ... n_{N-1}> = |n_{N-1} n_0 ... n_{N-2}>`.
    fn shift(spec: &LatticeSpec, k: usize) -> usize {
        let d = spec.local_dim();
        let last = k % d;
        k / d + last * spec.stride(0)
    }

    #[test]
    fn periodic_models_commute_with_translation() {
        let specs = [
            lattice(5, 2, Boundary::Periodic),
            lattice(5, 2, Boundary::Periodic),
            lattice(5, 3, Boundary::Periodic),
            lattice(5, 2, Boundary::Periodic),
        ];
        for (h, spec) in all_models(5, Boundary::Periodic).iter().zip(&specs) {
            let dim = h.dim();
            let mut worst: f64 = 0.0;
            let perm: Vec<usize> = (0..dim).map(|k| shift(spec, k)).collect();
            for (r, c, v) in h.entries() {
                // (T H T†)_{T r, T c} = H_{r c}
                let moved = h.get(perm[r], perm[c]);
                worst = worst.max((moved - v).norm());
            }
            assert!(worst <= 1e-12, "translation deviation {worst}");
        }
    }

    #[test]
    fn open_chain_breaks_translation() {
        let spec = lattice(5, 2, Boundary::Open);
        let h = build_ising(
            &spec,
            &IsingParams {
                h: 0.7,
                j: 1.3,
                basis: IsingBasis::Z,
            },
        )
        .unwrap();
        let perm: Vec<usize> = (0..h.dim()).map(|k| shift(&spec, k)).collect();
        let worst = h
            .entries()
            .map(|(r, c, v)| (h.get(perm[r], perm[c]) - v).norm())
            .fold(0.0, f64::max);
        assert!(worst > 0.1);
    }

    #[test]
    fn ising_bases_share_a_spectrum() {
        for n in 2..=8 {
            for ratio in [0.3, 1.0, 1.7] {
                let spec = lattice(n, 2, Boundary::Periodic);
                let z = build_ising(
                    &spec,
                    &IsingParams {
                        h: 1.0,
                        j: ratio,
                        basis: IsingBasis::Z,
                    },
                )
                .unwrap();
                let x = build_ising(
                    &spec,
                    &IsingParams {
                        h: 1.0,
                        j: ratio,
                        basis: IsingBasis::X,
                    },
                )
                .unwrap();
                for (a, b) in sorted_spectrum(&z).iter().zip(sorted_spectrum(&x)) {
                    assert!((a - b).abs() <= 1e-10, "n={n} J/h={ratio}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let one = Complex64::new(1.0, 0.0);
        let site = lattice(1, 2, Boundary::Open);
        let h = SparseHamiltonian::from_triplets(
            site,
            vec![(0, 0, one), (0, 0, one), (1, 0, one), (1, 0, -one)],
        )
        .unwrap();
        assert_eq!(h.nnz(), 1);
        assert_eq!(h.get(0, 0), Complex64::new(2.0, 0.0));
        assert!(SparseHamiltonian::from_triplets(site, vec![(2, 0, one)]).is_err());
        let skew = SparseHamiltonian::from_triplets(site, vec![(0, 1, one)]).unwrap();
        assert!(!skew.is_hermitian());
    }
}
