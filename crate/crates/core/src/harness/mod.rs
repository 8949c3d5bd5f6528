//! Parameter sweeps over the model families, peak finding, shot sampling and
//! tabular output.
//!
//! Sweeps evaluate grid points concurrently (with the `parallel` feature) but
//! always assemble rows in grid order, so output is reproducible.

mod counts;
mod model;
mod output;

use std::fmt;
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{composite_report, EntropyReport, Region};
use crate::error::{Error, Result};
use crate::hilbert::{parse_partition, Boundary, LatticeSpec};
use crate::solver::{
    ground_state_with, locate_discontinuity, second_derivative, EnergyCurve, SolverConfig,
};

pub use counts::{ingest_counts, parse_counts, sample_counts, CountsTable};
pub use model::{Model, ModelKind};
pub use output::{format_value, write_csv, write_records, write_rows};

/// Uniform grid `start, start + step, ...` up to and including `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, step: f64) -> Result<Self> {
        let axis = Self {
            name: name.to_string(),
            start,
            stop,
            step,
        };
        axis.validate()?;
        Ok(axis)
    }

    /// Parses `name=start:stop:step`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidPlan(format!("expected name=start:stop:step, got '{text}'"));
        let (name, range) = text.split_once('=').ok_or_else(bad)?;
        let parts: Vec<f64> = range
            .split(':')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        Self::new(name.trim(), start, stop, step)
    }

    fn validate(&self) -> Result<()> {
        let finite = self.start.is_finite() && self.stop.is_finite() && self.step.is_finite();
        if !finite || self.step <= 0.0 || self.stop < self.start {
            return Err(Error::InvalidPlan(format!(
                "axis {} needs finite start <= stop and step > 0",
                self.name
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| snap(self.start + k as f64 * self.step))
            .collect()
    }
}

/// Rounds to 12 significant digits so grid points print as typed.
fn snap(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryMode {
    Single(Boundary),
    /// Every point solved with both boundary conditions, emitted as paired
    /// columns.
    Both,
}

impl BoundaryMode {
    pub fn boundaries(self) -> Vec<Boundary> {
        match self {
            BoundaryMode::Single(b) => vec![b],
            BoundaryMode::Both => vec![Boundary::Periodic, Boundary::Open],
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryMode::Single(b) => b.fmt(f),
            BoundaryMode::Both => f.write_str("both"),
        }
    }
}

impl FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("both") {
            Ok(BoundaryMode::Both)
        } else {
            s.parse().map(BoundaryMode::Single)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    /// Values of the parameters that are not swept.
    pub model: Model,
    pub sites: usize,
    pub boundary: BoundaryMode,
    pub partition: String,
    /// Zero axes give a single point, two give a row-major 2D grid with the
    /// first axis outermost.
    pub axes: Vec<Axis>,
    pub solver: SolverConfig,
}

impl SweepPlan {
    pub fn new(model: Model, sites: usize, boundary: BoundaryMode, partition: &str) -> Self {
        Self {
            model,
            sites,
            boundary,
            partition: partition.to_string(),
            axes: Vec::new(),
            solver: SolverConfig::default(),
        }
    }

    pub fn with_axis(mut self, axis: Axis) -> Self {
        self.axes.push(axis);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.len() > 2 {
            return Err(Error::InvalidPlan(format!(
                "at most two swept axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::InvalidPlan(format!(
                "axis {} listed twice",
                self.axes[0].name
            )));
        }
        for axis in &self.axes {
            axis.validate()?;
            self.model.clone().set(&axis.name, axis.start)?;
        }
        for b in self.boundary.boundaries() {
            let spec = LatticeSpec::new(self.sites, self.model.local_dim(), b)?;
            parse_partition(&self.partition, &spec)?;
        }
        Ok(())
    }

    /// Grid points in row-major order.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        self.axes.iter().fold(vec![Vec::new()], |acc, axis| {
            acc.iter()
                .flat_map(|prefix| {
                    axis.values().into_iter().map(move |v| {
                        let mut point = prefix.clone();
                        point.push(v);
                        point
                    })
                })
                .collect()
        })
    }

    pub fn model_at(&self, point: &[f64]) -> Result<Model> {
        let mut model = self.model;
        for (axis, &v) in self.axes.iter().zip(point) {
            model.set(&axis.name, v)?;
        }
        Ok(model)
    }
}

/// Result of one successful solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub energy: f64,
    pub gap: Option<f64>,
    pub degenerate: bool,
    pub report: EntropyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Vec<f64>,
    /// One entry per boundary condition of the plan; failures keep their
    /// message.
    pub points: Vec<std::result::Result<PointResult, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis_names: Vec<String>,
    pub boundaries: Vec<Boundary>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub params: Vec<f64>,
    pub boundary: Boundary,
    pub message: String,
}

const COMPOSITES: [&str; 3] = ["weak", "strong", "delta"];

fn value_columns() -> Vec<String> {
    let mut cols = vec!["E0".to_string(), "gap".to_string()];
    for prefix in ["S", "H", "I"] {
        cols.extend(Region::ALL.iter().map(|r| format!("{prefix}_{r}")));
    }
    for prefix in ["S", "I"] {
        cols.extend(COMPOSITES.iter().map(|c| format!("{prefix}_{c}")));
    }
    cols.push("eta".to_string());
    cols
}

fn point_values(point: &std::result::Result<PointResult, String>) -> Vec<f64> {
    let Ok(p) = point else {
        return vec![f64::NAN; value_columns().len()];
    };
    let r = &p.report;
    let mut v = vec![p.energy, p.gap.unwrap_or(f64::NAN)];
    v.extend(Region::ALL.iter().map(|&g| r.region(g).s));
    v.extend(Region::ALL.iter().map(|&g| r.region(g).h));
    v.extend(Region::ALL.iter().map(|&g| r.region(g).i));
    for c in [&r.exact, &r.mutual] {
        v.extend([c.weak, c.strong, c.delta]);
    }
    v.push(r.eta);
    v
}

impl SweepTable {
    /// Parameter columns followed by the value columns, suffixed `_pbc` and
    /// `_obc` when both boundary conditions were run.
    pub fn header(&self) -> Vec<String> {
        let mut header = self.axis_names.clone();
        let paired = self.boundaries.len() > 1;
        for b in &self.boundaries {
            for c in value_columns() {
                header.push(if paired { format!("{c}_{b}") } else { c });
            }
        }
        header
    }

    pub fn row_values(&self, row: &SweepRow) -> Vec<f64> {
        let mut values = row.params.clone();
        for point in &row.points {
            values.extend(point_values(point));
        }
        values
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self
            .header()
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::InvalidPlan(format!("no column named '{name}'")))?;
        Ok(self
            .rows
            .iter()
            .map(|row| self.row_values(row)[k])
            .collect())
    }

    pub fn failures(&self) -> Vec<PointFailure> {
        self.rows
            .iter()
            .flat_map(|row| {
                row.points
                    .iter()
                    .zip(&self.boundaries)
                    .filter_map(|(p, &boundary)| {
                        p.as_ref().err().map(|message| PointFailure {
                            params: row.params.clone(),
                            boundary,
                            message: message.clone(),
                        })
                    })
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Ground state and entropy report at one parameter point.
pub fn solve_point(
    model: &Model,
    spec: &LatticeSpec,
    pattern: &str,
    solver: &SolverConfig,
) -> Result<PointResult> {
    let partition = parse_partition(pattern, spec)?;
    let h = model.build(spec)?;
    let gs = ground_state_with(&h, solver)?;
    Ok(PointResult {
        energy: gs.energy,
        gap: gs.gap,
        degenerate: gs.degenerate,
        report: composite_report(&gs.state, &partition)?,
    })
}

/// Solves every grid point of the plan. Plan errors abort; solver failures
/// are recorded in the affected row and the sweep continues.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepTable> {
    plan.validate()?;
    let boundaries = plan.boundary.boundaries();
    let grid = plan.grid();
    let evaluate = |point: &Vec<f64>| -> SweepRow {
        let points = boundaries
            .iter()
            .map(|&b| {
                let spec = LatticeSpec::new(plan.sites, plan.model.local_dim(), b)
                    .map_err(|e| e.to_string())?;
                let model = plan.model_at(point).map_err(|e| e.to_string())?;
                solve_point(&model, &spec, &plan.partition, &plan.solver).map_err(|e| e.to_string())
            })
            .collect();
        SweepRow {
            params: point.clone(),
            points,
        }
    };
    #[cfg(feature = "parallel")]
    let rows = grid.par_iter().map(evaluate).collect();
    #[cfg(not(feature = "parallel"))]
    let rows = grid.iter().map(evaluate).collect();
    Ok(SweepTable {
        axis_names: plan.axes.iter().map(|a| a.name.clone()).collect(),
        boundaries,
        rows,
    })
}

fn single_axis(table: &SweepTable) -> Result<Vec<f64>> {
    if table.axis_names.len() != 1 {
        return Err(Error::InvalidPlan(format!(
            "peak finding needs a 1D sweep, got {} axes",
            table.axis_names.len()
        )));
    }
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(table.rows.iter().map(|r| r.params[0]).collect())
}

/// Grid point at which `column` is largest; ties go to the smaller
/// parameter and failed points are skipped.
pub fn peak_location(table: &SweepTable, column: &str) -> Result<f64> {
    let grid = single_axis(table)?;
    let values = table.column(column)?;
    let mut best: Option<(f64, f64)> = None;
    for (&x, &v) in grid.iter().zip(&values) {
        if v.is_nan() {
            continue;
        }
        let better = match best {
            None => true,
            Some((bx, bv)) => v > bv || (v == bv && x < bx),
        };
        if better {
            best = Some((x, v));
        }
    }
    best.map(|(x, _)| x).ok_or(Error::EmptyTable)
}

/// A critical-point estimate from a 1D sweep; both locations carry the grid
/// step as their uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub peak: f64,
    /// Location of the jump in `d²E0/dx²`, when one is found.
    pub discontinuity: Option<f64>,
    pub step: f64,
}

pub fn critical_point(
    table: &SweepTable,
    column: &str,
    energy_column: &str,
) -> Result<CriticalPoint> {
    let grid = single_axis(table)?;
    let peak = peak_location(table, column)?;
    let step = if grid.len() > 1 {
        snap(grid[1] - grid[0])
    } else {
        0.0
    };
    let energies = table.column(energy_column)?;
    let discontinuity = if grid.len() >= 5 && energies.iter().all(|e| e.is_finite()) {
        let curve = EnergyCurve::new(grid, energies)?;
        let sd = second_derivative(&curve)?;
        match locate_discontinuity(&sd, curve.interior()) {
            Ok(x) => Some(x),
            Err(Error::NoDiscontinuity) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(CriticalPoint {
        peak,
        discontinuity,
        step,
    })
}
