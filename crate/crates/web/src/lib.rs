//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes a JSON request and returns a JSON curve, so the page
//! only needs `JSON.parse` and a canvas. The `*_json` functions hold the
//! logic and also run natively.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use ditent::entropy::{mutual_composites, probabilities, CompositeKind};
use ditent::filter::{default_levels, filter_sweep};
use ditent::harness::{peak_location, run_sweep, Axis, BoundaryMode, Model, ModelKind, SweepPlan};
use ditent::hilbert::{parse_partition, Boundary, LabelSet, LatticeSpec};
use ditent::rotate::{half_turn_grid, rotation_sweep};
use ditent::solver::{ground_state_with, PureState, SolverConfig};

/// Largest chain dimension the page may request; keeps a sweep interactive.
const MAX_DIM: usize = 1 << 12;

#[derive(Deserialize)]
struct System {
    model: ModelKind,
    sites: usize,
    partition: String,
    #[serde(default)]
    open: bool,
    /// Parameter values applied on top of the model defaults.
    #[serde(default)]
    fixed: BTreeMap<String, f64>,
}

impl System {
    fn model(&self) -> Result<Model, String> {
        let mut model = Model::default_for(self.model);
        for (name, &v) in &self.fixed {
            model.set(name, v).map_err(|e| e.to_string())?;
        }
        Ok(model)
    }

    fn boundary(&self) -> Boundary {
        if self.open {
            Boundary::Open
        } else {
            Boundary::Periodic
        }
    }

    fn lattice(&self, model: &Model) -> Result<LatticeSpec, String> {
        let spec = LatticeSpec::new(self.sites, model.local_dim(), self.boundary())
            .map_err(|e| e.to_string())?;
        if spec.dim() > MAX_DIM {
            return Err(format!(
                "dimension {} is too large for the demo",
                spec.dim()
            ));
        }
        Ok(spec)
    }

    fn ground_state(&self) -> Result<PureState, String> {
        let model = self.model()?;
        let spec = self.lattice(&model)?;
        let h = model.build(&spec).map_err(|e| e.to_string())?;
        ground_state_with(&h, &demo_solver())
            .map(|g| g.state)
            .map_err(|e| e.to_string())
    }
}

/// Dense diagonalization is far slower than Lanczos in the browser.
fn demo_solver() -> SolverConfig {
    SolverConfig {
        dense_max_dim: 64,
        ..SolverConfig::default()
    }
}

fn parse<'a, T: Deserialize<'a>>(request: &'a str) -> Result<T, String> {
    serde_json::from_str(request).map_err(|e| format!("bad request: {e}"))
}

#[derive(Deserialize)]
struct SweepRequest {
    #[serde(flatten)]
    system: System,
    param: String,
    start: f64,
    stop: f64,
    step: f64,
}

const SWEEP_COLUMNS: [&str; 7] = [
    "E0", "S_weak", "S_strong", "S_delta", "I_weak", "I_strong", "I_delta",
];

/// Composite curves along one parameter, with the peak of `S_delta` and
/// `I_delta`.
pub fn sweep_curve_json(request: &str) -> Result<String, String> {
    let req: SweepRequest = parse(request)?;
    let model = req.system.model()?;
    req.system.lattice(&model)?;
    let axis = Axis::new(&req.param, req.start, req.stop, req.step).map_err(|e| e.to_string())?;
    if axis.values().len() > 401 {
        return Err("at most 401 grid points".into());
    }
    let mut plan = SweepPlan::new(
        model,
        req.system.sites,
        BoundaryMode::Single(req.system.boundary()),
        &req.system.partition,
    )
    .with_axis(axis);
    plan.solver = demo_solver();
    let table = run_sweep(&plan).map_err(|e| e.to_string())?;
    let mut columns = serde_json::Map::new();
    for name in SWEEP_COLUMNS {
        let values = table.column(name).map_err(|e| e.to_string())?;
        columns.insert(name.to_string(), json!(values));
    }
    let peak = |c| peak_location(&table, c).ok();
    Ok(json!({
        "x": table.rows.iter().map(|r| r.params[0]).collect::<Vec<_>>(),
        "param": req.param,
        "columns": columns,
        "peaks": { "S_delta": peak("S_delta"), "I_delta": peak("I_delta") },
        "failures": table.failures().len(),
    })
    .to_string())
}

#[derive(Deserialize)]
struct FilterRequest {
    #[serde(flatten)]
    system: System,
    #[serde(default = "weak")]
    quantity: String,
}

fn weak() -> String {
    "weak".into()
}

/// Filtered mutual-information composite over the default cutoff grid.
pub fn filter_curve_json(request: &str) -> Result<String, String> {
    let req: FilterRequest = parse(request)?;
    let kind: CompositeKind = req
        .quantity
        .parse()
        .map_err(|e: ditent::Error| e.to_string())?;
    let state = req.system.ground_state()?;
    let partition =
        parse_partition(&req.system.partition, state.lattice()).map_err(|e| e.to_string())?;
    let p = probabilities(&state);
    let unfiltered = mutual_composites(&p, &partition).map_err(|e| e.to_string())?;
    let sweep = filter_sweep(&p, &partition, kind, &default_levels()).map_err(|e| e.to_string())?;
    Ok(json!({
        "levels": sweep.levels,
        "values": sweep.values,
        "survivors": sweep.survivors,
        "unfiltered": kind.pick(&unfiltered),
        "max_probability": p.max_probability(),
    })
    .to_string())
}

#[derive(Deserialize)]
struct RotationRequest {
    #[serde(flatten)]
    system: System,
    #[serde(default = "region_a")]
    region: String,
    #[serde(default = "default_steps")]
    steps: usize,
}

fn region_a() -> String {
    "A".into()
}

fn default_steps() -> usize {
    32
}

/// Mutual information and entanglement entropy of a region as every site
/// is rotated about y by angles in `[0, π]`.
pub fn rotation_curve_json(request: &str) -> Result<String, String> {
    let req: RotationRequest = parse(request)?;
    if req.steps == 0 || req.steps > 256 {
        return Err("steps must be between 1 and 256".into());
    }
    let region: LabelSet = req
        .region
        .parse()
        .map_err(|e: ditent::Error| e.to_string())?;
    let state = req.system.ground_state()?;
    let partition =
        parse_partition(&req.system.partition, state.lattice()).map_err(|e| e.to_string())?;
    let sites = partition.subset_sites(region).map_err(|e| e.to_string())?;
    let points =
        rotation_sweep(&state, &sites, &half_turn_grid(req.steps)).map_err(|e| e.to_string())?;
    Ok(json!({
        "angles": points.iter().map(|p| p.angle).collect::<Vec<_>>(),
        "mutual": points.iter().map(|p| p.mutual_information).collect::<Vec<_>>(),
        "entropy": points.iter().map(|p| p.entropy).collect::<Vec<_>>(),
    })
    .to_string())
}

fn to_js(result: Result<String, String>) -> Result<String, JsError> {
    result.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep_curve(request: &str) -> Result<String, JsError> {
    to_js(sweep_curve_json(request))
}

#[wasm_bindgen]
pub fn filter_curve(request: &str) -> Result<String, JsError> {
    to_js(filter_curve_json(request))
}

#[wasm_bindgen]
pub fn rotation_curve(request: &str) -> Result<String, JsError> {
    to_js(rotation_curve_json(request))
}

/// Parameter names accepted for `model`, as a JSON array.
#[wasm_bindgen]
pub fn parameter_names(model: &str) -> Result<String, JsError> {
    to_js(
        model
            .parse::<ModelKind>()
            .map(|k| Value::from(k.parameter_names().to_vec()).to_string())
            .map_err(|e| e.to_string()),
    )
}
