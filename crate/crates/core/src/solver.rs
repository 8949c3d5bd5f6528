//! Ground states of sparse Hermitian Hamiltonians and critical points from the
//! curvature of the ground-state energy.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::LatticeSpec;
use crate::models::SparseHamiltonian;

/// Normalized state vector over the `d^N` computational basis.
///
/// The global phase is fixed so that the largest-magnitude amplitude (the
/// first one, on ties) is real and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    lattice: LatticeSpec,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Normalizes and phase-fixes `amplitudes`.
    pub fn new(lattice: LatticeSpec, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != lattice.dim() {
            return Err(Error::DimensionMismatch {
                expected: lattice.dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidProbabilities(
                "state has zero or non-finite norm".into(),
            ));
        }
        let mut lead = 0;
        let mut lead_mag = 0.0;
        for (k, c) in amplitudes.iter().enumerate() {
            let m = c.norm();
            if m > lead_mag {
                lead_mag = m;
                lead = k;
            }
        }
        let phase = amplitudes[lead].conj() / amplitudes[lead].norm();
        for c in &mut amplitudes {
            *c = *c * phase / norm;
        }
        amplitudes[lead] = Complex64::new(amplitudes[lead].re, 0.0);
        Ok(Self {
            lattice,
            amplitudes,
        })
    }

    pub fn from_real(lattice: LatticeSpec, amplitudes: &[f64]) -> Result<Self> {
        Self::new(
            lattice,
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Computational basis state `|index>`.
    pub fn basis(lattice: LatticeSpec, index: usize) -> Result<Self> {
        let dim = lattice.dim();
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(lattice, amps)
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `<psi|H|psi>`.
    pub fn expectation(&self, h: &SparseHamiltonian) -> f64 {
        let mut hpsi = vec![Complex64::new(0.0, 0.0); self.dim()];
        h.apply(&self.amplitudes, &mut hpsi);
        dot(&self.amplitudes, &hpsi).re
    }

    /// `‖H psi - e psi‖₂`.
    pub fn residual(&self, h: &SparseHamiltonian, energy: f64) -> f64 {
        let mut hpsi = vec![Complex64::new(0.0, 0.0); self.dim()];
        h.apply(&self.amplitudes, &mut hpsi);
        residual_norm(&hpsi, &self.amplitudes, energy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Largest dimension handed to the dense eigensolver.
    pub dense_max_dim: usize,
    /// Cap on Hamiltonian applications in the Krylov solver.
    pub max_iterations: usize,
    /// Krylov basis size before a restart.
    pub krylov_dim: usize,
    pub residual_tol: f64,
    /// Relative gap below which the ground state is flagged as degenerate.
    pub degeneracy_tol: f64,
    /// Seed of the Krylov start vector.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dense_max_dim: 1024,
            max_iterations: 20_000,
            krylov_dim: 300,
            residual_tol: 1e-9,
            degeneracy_tol: 1e-8,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    Dense,
    Krylov,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub state: PureState,
    pub energy: f64,
    /// `E1 - E0`; `None` for a one-dimensional space. The Krylov value is the
    /// Ritz estimate at convergence.
    pub gap: Option<f64>,
    /// Set when the gap is below `degeneracy_tol * max(1, |E0|)`.
    pub degenerate: bool,
    pub residual: f64,
    pub iterations: usize,
    pub method: SolveMethod,
}

pub fn ground_state(h: &SparseHamiltonian) -> Result<GroundState> {
    ground_state_with(h, &SolverConfig::default())
}

pub fn ground_state_with(h: &SparseHamiltonian, config: &SolverConfig) -> Result<GroundState> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian(h.hermitian_deviation()));
    }
    if h.dim() <= config.dense_max_dim {
        dense_ground_state(h, config)
    } else {
        krylov_ground_state(h, config)
    }
}

fn finish(
    h: &SparseHamiltonian,
    config: &SolverConfig,
    amplitudes: Vec<Complex64>,
    energy: f64,
    gap: Option<f64>,
    iterations: usize,
    method: SolveMethod,
) -> Result<GroundState> {
    let state = PureState::new(*h.lattice(), amplitudes)?;
    let residual = state.residual(h, energy);
    let degenerate = gap.is_some_and(|g| g < config.degeneracy_tol * energy.abs().max(1.0));
    Ok(GroundState {
        state,
        energy,
        gap,
        degenerate,
        residual,
        iterations,
        method,
    })
}

/// Full diagonalization; exact up to rounding.
pub fn dense_ground_state(h: &SparseHamiltonian, config: &SolverConfig) -> Result<GroundState> {
    let (values, ground): (Vec<f64>, Vec<Complex64>) = if h.is_real() {
        let eig = SymmetricEigen::new(h.to_dense_real());
        let k = argmin(eig.eigenvalues.as_slice());
        let v = eig
            .eigenvectors
            .column(k)
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        (eig.eigenvalues.iter().copied().collect(), v)
    } else {
        let eig = SymmetricEigen::new(h.to_dense());
        let k = argmin(eig.eigenvalues.as_slice());
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.column(k).iter().copied().collect(),
        )
    };
    let mut sorted = values;
    sorted.sort_by(f64::total_cmp);
    let gap = (sorted.len() > 1).then(|| sorted[1] - sorted[0]);
    finish(h, config, ground, sorted[0], gap, 0, SolveMethod::Dense)
}

/// Lanczos with full reorthogonalization, restarted from the current Ritz
/// vector whenever the Krylov basis fills up.
pub fn krylov_ground_state(h: &SparseHamiltonian, config: &SolverConfig) -> Result<GroundState> {
    let n = h.dim();
    let m = config.krylov_dim.clamp(2, n.max(2)).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut start: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, 0.0))
        .collect();
    normalize(&mut start);

    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let mut applications = 0;
    let mut last_residual = f64::INFINITY;

    loop {
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alpha: Vec<f64> = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        let mut ritz = start.clone();
        let mut stalled = false;

        for j in 0..m {
            h.apply(&basis[j], &mut w);
            applications += 1;
            let a = dot(&basis[j], &w).re;
            axpy(&mut w, -a, &basis[j]);
            if j > 0 {
                axpy(&mut w, -beta[j - 1], &basis[j - 1]);
            }
            // Two Gram-Schmidt passes keep the basis orthogonal to rounding.
            for _ in 0..2 {
                for v in &basis {
                    let proj = dot(v, &w);
                    for (wi, vi) in w.iter_mut().zip(v) {
                        *wi -= proj * vi;
                    }
                }
            }
            alpha.push(a);
            let b = norm(&w);
            let scale = alpha
                .iter()
                .chain(&beta)
                .fold(1.0f64, |acc, x| acc.max(x.abs()));
            let breakdown = b <= 1e-12 * scale;
            let last = j + 1 == m;

            if (j + 1) % 8 == 0 || breakdown || last {
                let (theta, coeffs) = tridiagonal_eigen(&alpha, &beta);
                let k0 = argmin(&theta);
                let estimate = b * coeffs[(j, k0)].abs();
                if estimate <= 0.5 * config.residual_tol || breakdown || last {
                    ritz.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
                    for (i, v) in basis.iter().enumerate() {
                        axpy(&mut ritz, coeffs[(i, k0)], v);
                    }
                    normalize(&mut ritz);
                    h.apply(&ritz, &mut scratch);
                    applications += 1;
                    let energy = dot(&ritz, &scratch).re;
                    last_residual = residual_norm(&scratch, &ritz, energy);
                    if last_residual <= config.residual_tol {
                        let mut sorted = theta.clone();
                        sorted.sort_by(f64::total_cmp);
                        let gap = (sorted.len() > 1).then(|| sorted[1] - sorted[0]);
                        return finish(
                            h,
                            config,
                            ritz,
                            energy,
                            gap,
                            applications,
                            SolveMethod::Krylov,
                        );
                    }
                    if breakdown || last {
                        stalled = breakdown;
                        break;
                    }
                }
            }
            if applications >= config.max_iterations {
                return Err(Error::NotConverged {
                    iterations: applications,
                    residual: last_residual,
                });
            }
            beta.push(b);
            let mut next = w.clone();
            next.iter_mut().for_each(|x| *x /= b);
            basis.push(next);
        }

        if applications >= config.max_iterations {
            return Err(Error::NotConverged {
                iterations: applications,
                residual: last_residual,
            });
        }
        start = ritz;
        if stalled {
            // The Krylov space closed without converging: leave the invariant
            // subspace with a seeded kick.
            for x in &mut start {
                *x += Complex64::new(1e-3 * (rng.random::<f64>() - 0.5), 0.0);
            }
        }
        normalize(&mut start);
    }
}

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`.
fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("nonempty spectrum")
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(a: &mut [Complex64]) {
    let n = norm(a);
    a.iter_mut().for_each(|x| *x /= n);
}

fn axpy(y: &mut [Complex64], a: f64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += xi * a;
    }
}

fn residual_norm(hpsi: &[Complex64], psi: &[Complex64], energy: f64) -> f64 {
    hpsi.iter()
        .zip(psi)
        .map(|(a, b)| (a - b * energy).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Ground-state energies along an ascending parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyCurve {
    params: Vec<f64>,
    energies: Vec<f64>,
}

impl EnergyCurve {
    pub fn new(params: Vec<f64>, energies: Vec<f64>) -> Result<Self> {
        if params.len() != energies.len() {
            return Err(Error::InvalidGrid(format!(
                "{} parameter values but {} energies",
                params.len(),
                energies.len()
            )));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "parameter grid must be strictly increasing".into(),
            ));
        }
        Ok(Self { params, energies })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Grid points at which [`second_derivative`] is evaluated.
    pub fn interior(&self) -> &[f64] {
        match self.params.len() {
            0..=2 => &[],
            n => &self.params[1..n - 1],
        }
    }
}

/// Central second differences `(E_{k+1} - 2E_k + E_{k-1}) / step²` at the
/// interior points of a uniform grid.
pub fn second_derivative(curve: &EnergyCurve) -> Result<Vec<f64>> {
    let p = curve.params();
    if p.len() < 3 {
        return Err(Error::InvalidGrid(format!(
            "second derivative needs at least 3 points, got {}",
            p.len()
        )));
    }
    let step = (p[p.len() - 1] - p[0]) / (p.len() - 1) as f64;
    if p.windows(2)
        .any(|w| ((w[1] - w[0]) - step).abs() > 1e-6 * step)
    {
        return Err(Error::InvalidGrid(
            "second derivative needs a uniform grid".into(),
        ));
    }
    let e = curve.energies();
    Ok(e.windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]) / (step * step))
        .collect())
}

/// Location of the largest jump in the second derivative.
///
/// Finds the adjacent interior pair with the largest `|Δ(d²E)|` and returns
/// whichever of the two points carries the larger `|d²E|`. Ties go to the
/// smaller parameter. Jumps below `1e-6 * max(1, max |d²E|)` count as no
/// discontinuity.
pub fn locate_discontinuity(second_derivs: &[f64], interior_grid: &[f64]) -> Result<f64> {
    if second_derivs.len() != interior_grid.len() {
        return Err(Error::InvalidGrid(format!(
            "{} second derivatives but {} grid points",
            second_derivs.len(),
            interior_grid.len()
        )));
    }
    let mut best: Option<(usize, f64)> = None;
    for (k, w) in second_derivs.windows(2).enumerate() {
        let jump = (w[1] - w[0]).abs();
        if best.is_none_or(|(_, b)| jump > b) {
            best = Some((k, jump));
        }
    }
    let scale = second_derivs.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    match best {
        Some((k, jump)) if jump > 1e-6 * scale => {
            let pick = if second_derivs[k + 1].abs() > second_derivs[k].abs() {
                k + 1
            } else {
                k
            };
            Ok(interior_grid[pick])
        }
        _ => Err(Error::NoDiscontinuity),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Boundary;
    use crate::models::{build_ising, build_phi4, IsingBasis, IsingParams, Phi4Params};
    use approx::assert_relative_eq;

    fn ising(n: usize, h: f64, j: f64, bc: Boundary) -> SparseHamiltonian {
        build_ising(
            &LatticeSpec::new(n, 2, bc).unwrap(),
            &IsingParams {
                h,
                j,
                basis: IsingBasis::Z,
            },
        )
        .unwrap()
    }

    #[test]
    fn decoupled_sites_ground_state() {
        let gs = ground_state(&ising(2, 1.0, 0.0, Boundary::Open)).unwrap();
        assert_relative_eq!(gs.energy, -2.0, epsilon = 1e-12);
        assert_relative_eq!(gs.state.amplitudes()[0].re, 1.0, epsilon = 1e-12);
        assert!(!gs.degenerate);
    }

    #[test]
    fn two_site_ising_matches_closed_form() {
        // H on span{|00>, |11>} is [[-2, -1], [-1, 2]], so E0 = -√5.
        let gs = ground_state(&ising(2, 1.0, 1.0, Boundary::Open)).unwrap();
        assert_relative_eq!(gs.energy, -(5.0f64).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn harmonic_phi4_ground_energy() {
        let h = build_phi4(
            &LatticeSpec::new(2, 3, Boundary::Periodic).unwrap(),
            &Phi4Params::new(1.0, 0.0, 0.0, 3),
        )
        .unwrap();
        let gs = ground_state(&h).unwrap();
        assert_relative_eq!(gs.energy, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn krylov_agrees_with_dense() {
        let h = ising(8, 1.0, 0.9, Boundary::Periodic);
        let cfg = SolverConfig::default();
        let dense = dense_ground_state(&h, &cfg).unwrap();
        let krylov = krylov_ground_state(&h, &cfg).unwrap();
        assert_eq!(krylov.method, SolveMethod::Krylov);
        assert!((dense.energy - krylov.energy).abs() <= 1e-9);
        assert!((dense.state.inner(&krylov.state).norm() - 1.0).abs() <= 1e-6);
        assert!(krylov.residual <= 1e-9);
        assert_relative_eq!(dense.gap.unwrap(), krylov.gap.unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn krylov_restarts_when_basis_is_small() {
        let h = ising(8, 1.0, 1.1, Boundary::Periodic);
        let cfg = SolverConfig {
            krylov_dim: 12,
            ..SolverConfig::default()
        };
        let dense = dense_ground_state(&h, &cfg).unwrap();
        let krylov = krylov_ground_state(&h, &cfg).unwrap();
        assert!((dense.energy - krylov.energy).abs() <= 1e-9);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let h = ising(8, 1.0, 1.0, Boundary::Periodic);
        let cfg = SolverConfig {
            max_iterations: 5,
            dense_max_dim: 0,
            ..SolverConfig::default()
        };
        assert!(matches!(
            ground_state_with(&h, &cfg),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn rejects_non_hermitian() {
        let one = Complex64::new(1.0, 0.0);
        let h = SparseHamiltonian::from_triplets(
            LatticeSpec::new(1, 2, Boundary::Open).unwrap(),
            vec![(0, 1, one)],
        )
        .unwrap();
        assert!(matches!(ground_state(&h), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn degenerate_ground_state_is_flagged() {
        // Classical ferromagnet: |00..0> and |11..1> are exactly degenerate.
        let h = build_ising(
            &LatticeSpec::new(4, 2, Boundary::Periodic).unwrap(),
            &IsingParams {
                h: 0.0,
                j: 1.0,
                basis: IsingBasis::X,
            },
        )
        .unwrap();
        let gs = ground_state(&h).unwrap();
        assert!(gs.degenerate);
        assert_relative_eq!(gs.energy, -4.0, epsilon = 1e-12);
    }

    #[test]
    fn rayleigh_quotient_matches_energy() {
        for ratio in [0.2, 1.0, 1.8] {
            let h = ising(7, 1.0, ratio, Boundary::Periodic);
            let gs = ground_state(&h).unwrap();
            assert!((gs.state.expectation(&h) - gs.energy).abs() <= 1e-10);
            let k = krylov_ground_state(&h, &SolverConfig::default()).unwrap();
            assert!((k.state.expectation(&h) - k.energy).abs() <= 1e-10);
        }
    }

    #[test]
    fn solves_are_deterministic() {
        let h = ising(10, 1.0, 1.0, Boundary::Periodic);
        let cfg = SolverConfig {
            dense_max_dim: 0,
            ..SolverConfig::default()
        };
        let a = ground_state_with(&h, &cfg).unwrap();
        let b = ground_state_with(&h, &cfg).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.state, b.state);
    }

    #[test]
    fn phase_is_fixed() {
        let spec = LatticeSpec::new(1, 2, Boundary::Open).unwrap();
        let s = PureState::new(
            spec,
            vec![Complex64::new(0.0, -0.6), Complex64::new(0.8, 0.0)],
        )
        .unwrap();
        assert_relative_eq!(s.amplitudes()[1].re, 0.8, epsilon = 1e-15);
        assert_eq!(s.amplitudes()[1].im, 0.0);
        assert_relative_eq!(s.amplitudes()[0].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(s.amplitudes()[0].im, -0.6, epsilon = 1e-15);
        assert!(PureState::new(spec, vec![Complex64::new(0.0, 0.0); 2]).is_err());
        assert!(PureState::new(spec, vec![Complex64::new(1.0, 0.0); 3]).is_err());
    }

    fn uniform_grid(start: f64, step: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| start + step * k as f64).collect()
    }

    #[test]
    fn second_derivative_of_quadratic() {
        let grid = uniform_grid(-1.0, 0.1, 21);
        let e = grid.iter().map(|x| x * x).collect();
        let curve = EnergyCurve::new(grid, e).unwrap();
        for v in second_derivative(&curve).unwrap() {
            assert_relative_eq!(v, 2.0, epsilon = 1e-9);
        }
        let sd = second_derivative(&curve).unwrap();
        assert!(matches!(
            locate_discontinuity(&sd, curve.interior()),
            Err(Error::NoDiscontinuity)
        ));
    }

    #[test]
    fn second_derivative_of_constant() {
        let grid = uniform_grid(0.0, 0.25, 5);
        let curve = EnergyCurve::new(grid, vec![3.0; 5]).unwrap();
        let sd = second_derivative(&curve).unwrap();
        assert!(sd.iter().all(|&v| v == 0.0));
        assert!(matches!(
            locate_discontinuity(&sd, curve.interior()),
            Err(Error::NoDiscontinuity)
        ));
    }

    #[test]
    fn kink_is_located() {
        let grid = uniform_grid(0.0, 0.1, 11);
        let e = grid.iter().map(|x| (x - 0.5f64).abs()).collect();
        let curve = EnergyCurve::new(grid, e).unwrap();
        let sd = second_derivative(&curve).unwrap();
        for (x, v) in curve.interior().iter().zip(&sd) {
            if (x - 0.5).abs() < 1e-9 {
                assert_relative_eq!(*v, 20.0, epsilon = 1e-9);
            } else {
                assert!(v.abs() < 1e-9);
            }
        }
        let at = locate_discontinuity(&sd, curve.interior()).unwrap();
        assert_relative_eq!(at, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(EnergyCurve::new(vec![0.0, 1.0], vec![0.0]).is_err());
        assert!(EnergyCurve::new(vec![0.0, 0.0, 1.0], vec![0.0; 3]).is_err());
        let short = EnergyCurve::new(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(second_derivative(&short).is_err());
        let uneven = EnergyCurve::new(vec![0.0, 0.1, 0.3], vec![0.0; 3]).unwrap();
        assert!(second_derivative(&uneven).is_err());
    }
}
