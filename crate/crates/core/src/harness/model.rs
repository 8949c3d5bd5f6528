use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::LatticeSpec;
use crate::models::{
    build_ising, build_phi4, build_rydberg, IsingBasis, IsingParams, Phi4Params, RydbergParams,
    SparseHamiltonian,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ising,
    Phi4,
    Rydberg,
}

impl ModelKind {
    /// Names accepted by [`Model::set`]. Ratios such as `J/h` scale the
    /// numerator by the current denominator.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Ising => &["J", "h", "J/h"],
            ModelKind::Phi4 => &["omega", "lambda", "kappa"],
            ModelKind::Rydberg => &["rabi", "detuning", "rb-ratio", "detuning/rabi"],
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Ising => "ising",
            ModelKind::Phi4 => "phi4",
            ModelKind::Rydberg => "rydberg",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ising" => Ok(ModelKind::Ising),
            "phi4" => Ok(ModelKind::Phi4),
            "rydberg" => Ok(ModelKind::Rydberg),
            _ => Err(Error::InvalidPlan(format!("unknown model '{s}'"))),
        }
    }
}

/// A model together with one full set of parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Model {
    Ising(IsingParams),
    Phi4(Phi4Params),
    Rydberg(RydbergParams),
}

impl Model {
    /// `h = 1, J = 1` in the Z basis; `ω = 1, λ = 0, κ = 0` with `d = 3`;
    /// `Ω = 1, Δ = 0, R_b/a = 1`.
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Ising => Model::Ising(IsingParams {
                h: 1.0,
                j: 1.0,
                basis: IsingBasis::Z,
            }),
            ModelKind::Phi4 => Model::Phi4(Phi4Params::new(1.0, 0.0, 0.0, 3)),
            ModelKind::Rydberg => Model::Rydberg(RydbergParams::new(1.0, 0.0, 1.0)),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Ising(_) => ModelKind::Ising,
            Model::Phi4(_) => ModelKind::Phi4,
            Model::Rydberg(_) => ModelKind::Rydberg,
        }
    }

    pub fn local_dim(&self) -> usize {
        match self {
            Model::Phi4(p) => p.n_max,
            _ => 2,
        }
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let kind = self.kind();
        match (self, name) {
            (Model::Ising(p), "J") => p.j = value,
            (Model::Ising(p), "h") => p.h = value,
            (Model::Ising(p), "J/h") => p.j = value * p.h,
            (Model::Phi4(p), "omega") => p.omega = value,
            (Model::Phi4(p), "lambda") => p.lambda = value,
            (Model::Phi4(p), "kappa") => p.kappa = value,
            (Model::Rydberg(p), "rabi") => p.rabi = value,
            (Model::Rydberg(p), "detuning") => p.detuning = value,
            (Model::Rydberg(p), "detuning/rabi") => p.detuning = value * p.rabi,
            (Model::Rydberg(p), "rb-ratio") => p.blockade_ratio = value,
            _ => {
                return Err(Error::InvalidPlan(format!(
                    "'{name}' is not a parameter of the {kind} model (expected one of {})",
                    kind.parameter_names().join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn build(&self, spec: &LatticeSpec) -> Result<SparseHamiltonian> {
        match self {
            Model::Ising(p) => build_ising(spec, p),
            Model::Phi4(p) => build_phi4(spec, p),
            Model::Rydberg(p) => build_rydberg(spec, p),
        }
    }
}
