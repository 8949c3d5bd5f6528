//! Uniform per-site spin-y rotations, used to study how the measurement
//! basis changes the mutual information while leaving entanglement intact.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::{entanglement_entropy, mutual_information, probabilities};
use crate::error::{Error, Result};
use crate::solver::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub angle: f64,
    pub local_dim: usize,
}

/// Spin `s = (d-1)/2` representation of `S_y`, basis index `n` carrying
/// `S_z = s - n`. For `d = 2` this is `σʸ/2`.
pub fn spin_y_matrix(d: usize) -> Result<DMatrix<Complex64>> {
    if d < 2 {
        return Err(Error::InvalidParameters(format!(
            "spin matrices need d >= 2, got {d}"
        )));
    }
    let s = (d as f64 - 1.0) / 2.0;
    let mut m = DMatrix::zeros(d, d);
    for n in 0..d - 1 {
        let mz = s - n as f64;
        // <m | S+ | m-1> = sqrt(s(s+1) - m(m-1))
        let ladder = (s * (s + 1.0) - mz * (mz - 1.0)).sqrt();
        m[(n, n + 1)] = Complex64::new(0.0, -ladder / 2.0);
        m[(n + 1, n)] = Complex64::new(0.0, ladder / 2.0);
    }
    Ok(m)
}

/// Single-site `exp(i S_y φ)`.
pub fn rotation_matrix(spec: &RotationSpec) -> Result<DMatrix<Complex64>> {
    let sy = spin_y_matrix(spec.local_dim)?;
    let eig = SymmetricEigen::new(sy);
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|e| Complex64::from_polar(1.0, e * spec.angle)),
    );
    Ok(&eig.eigenvectors * phases * eig.eigenvectors.adjoint())
}

/// Applies `U^{⊗N}` one site at a time.
pub fn rotate_state(state: &PureState, spec: &RotationSpec) -> Result<PureState> {
    let lattice = *state.lattice();
    if lattice.local_dim() != spec.local_dim {
        return Err(Error::DimensionMismatch {
            expected: lattice.local_dim(),
            got: spec.local_dim,
        });
    }
    let u = rotation_matrix(spec)?;
    let d = spec.local_dim;
    let mut amps = state.amplitudes().to_vec();
    let mut next = vec![Complex64::new(0.0, 0.0); amps.len()];
    for site in 0..lattice.num_sites() {
        let stride = lattice.stride(site);
        for (k, out) in next.iter_mut().enumerate() {
            let n = lattice.digit(k, site);
            let base = k - n * stride;
            *out = (0..d).map(|m| u[(n, m)] * amps[base + m * stride]).sum();
        }
        std::mem::swap(&mut amps, &mut next);
    }
    PureState::new(lattice, amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationPoint {
    pub angle: f64,
    pub mutual_information: f64,
    pub entropy: f64,
}

/// `steps + 1` evenly spaced angles from 0 to π inclusive.
pub fn half_turn_grid(steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|k| std::f64::consts::PI * k as f64 / steps.max(1) as f64)
        .collect()
}

/// Mutual information and entanglement entropy of `region` after rotating
/// every site by each angle.
pub fn rotation_sweep(
    state: &PureState,
    region: &[usize],
    angles: &[f64],
) -> Result<Vec<RotationPoint>> {
    let d = state.lattice().local_dim();
    angles
        .iter()
        .map(|&angle| {
            let rotated = rotate_state(
                state,
                &RotationSpec {
                    angle,
                    local_dim: d,
                },
            )?;
            Ok(RotationPoint {
                angle,
                mutual_information: mutual_information(&probabilities(&rotated), region)?,
                entropy: entanglement_entropy(&rotated, region)?,
            })
        })
        .collect()
}
