use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ditent::entropy::{
    mutual_composites, probabilities, shannon, CompositeKind, ProbabilityTable, Region,
};
use ditent::filter::{default_levels, filter_sweep, log_levels};
use ditent::harness::{
    critical_point, format_value, parse_counts, run_sweep, sample_counts, write_csv, write_records,
    write_rows, Axis, BoundaryMode, Model, ModelKind, SweepPlan, SweepTable,
};
use ditent::hilbert::{parse_partition, Boundary, LabelSet, LatticeSpec};
use ditent::models::{IsingBasis, RydbergParams};
use ditent::rotate::{half_turn_grid, rotation_sweep};
use ditent::solver::{ground_state_with, PureState, SolverConfig};
use ditent::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ditent",
    version,
    about = "Multipartite entanglement and mutual information of qudit chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve over a 1D or 2D parameter grid and tabulate every entropy column.
    Sweep(SweepArgs),
    /// One parameter point, same columns as `sweep`.
    Report(PointArgs),
    /// Filtered mutual-information composite over a range of cutoffs.
    FilterSweep(FilterArgs),
    /// Mutual information and entropy of a region under a uniform spin-y rotation.
    RotateSweep(RotateArgs),
    /// Emulate measurement shots on a ground state and write a counts file.
    Sample(SampleArgs),
    /// Mutual-information composites from a counts file.
    Ingest(IngestArgs),
    /// Peak of a column and the E0 curvature jump along a 1D sweep.
    CriticalPoint(CriticalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Z,
    X,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "ising")]
    model: ModelKind,
    /// Chain length; required unless probabilities come from a counts file.
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long, default_value = "pbc")]
    bc: BoundaryMode,
    #[arg(long = "J")]
    j: Option<f64>,
    #[arg(long = "h")]
    h: Option<f64>,
    /// Representation of the Ising chain.
    #[arg(long, value_enum, default_value = "z")]
    basis: BasisArg,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Levels kept per site for phi^4.
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    rabi: Option<f64>,
    #[arg(long)]
    detuning: Option<f64>,
    #[arg(long = "rb-ratio")]
    rb_ratio: Option<f64>,
    /// Rydberg laboratory preset: Ω = 2.5×2π MHz, Δ = 3.5 Ω, R_b = 8.375 μm.
    #[arg(long)]
    lab_defaults: bool,
    /// Largest dimension solved by dense diagonalization.
    #[arg(long, default_value_t = SolverConfig::default().dense_max_dim)]
    dense_max_dim: usize,
}

impl ModelArgs {
    fn model(&self) -> Result<Model> {
        let mut model = Model::default_for(self.model);
        if self.lab_defaults {
            let Model::Rydberg(p) = &mut model else {
                return Err(Error::InvalidPlan(
                    "--lab-defaults applies to the rydberg model".into(),
                ));
            };
            *p = RydbergParams::lab_defaults(self.rb_ratio.unwrap_or(p.blockade_ratio));
        }
        match (&mut model, self.nmax) {
            (Model::Phi4(p), Some(n)) => p.n_max = n,
            (_, Some(_)) => {
                return Err(Error::InvalidPlan(
                    "--nmax applies to the phi4 model".into(),
                ))
            }
            _ => {}
        }
        if let Model::Ising(p) = &mut model {
            p.basis = match self.basis {
                BasisArg::Z => IsingBasis::Z,
                BasisArg::X => IsingBasis::X,
            };
        }
        let given = [
            ("J", self.j),
            ("h", self.h),
            ("omega", self.omega),
            ("lambda", self.lambda),
            ("kappa", self.kappa),
            ("rabi", self.rabi),
            ("detuning", self.detuning),
            ("rb-ratio", self.rb_ratio),
        ];
        for (name, value) in given {
            if let Some(v) = value {
                model.set(name, v)?;
            }
        }
        Ok(model)
    }

    fn solver(&self) -> SolverConfig {
        SolverConfig {
            dense_max_dim: self.dense_max_dim,
            ..SolverConfig::default()
        }
    }

    fn sites(&self) -> Result<usize> {
        self.sites
            .ok_or_else(|| Error::InvalidPlan("--sites is required".into()))
    }

    fn single_boundary(&self) -> Result<Boundary> {
        match self.bc {
            BoundaryMode::Single(b) => Ok(b),
            BoundaryMode::Both => Err(Error::InvalidPlan(
                "--bc both is only available for sweep".into(),
            )),
        }
    }

    fn lattice(&self, model: &Model) -> Result<LatticeSpec> {
        LatticeSpec::new(self.sites()?, model.local_dim(), self.single_boundary()?)
    }

    fn ground_state(&self) -> Result<PureState> {
        let model = self.model()?;
        let spec = self.lattice(&model)?;
        let gs = ground_state_with(&model.build(&spec)?, &self.solver())?;
        if gs.degenerate {
            eprintln!("warning: near-degenerate ground state (gap {:?})", gs.gap);
        }
        Ok(gs.state)
    }

    fn plan(&self, partition: &str, params: &[String]) -> Result<SweepPlan> {
        let mut plan = SweepPlan::new(self.model()?, self.sites()?, self.bc, partition);
        plan.solver = self.solver();
        for p in params {
            plan = plan.with_axis(Axis::parse(p)?);
        }
        Ok(plan)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

impl OutputArgs {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(io::BufWriter::new(fs::File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    partition: String,
    /// `name=start:stop:step`; give twice for a 2D grid.
    #[arg(long = "param", required = true)]
    params: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    partition: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CriticalArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    partition: String,
    #[arg(long = "param")]
    param: String,
    /// Column whose maximum marks the critical point.
    #[arg(long, default_value = "S_delta")]
    quantity: String,
}

#[derive(Args)]
struct FilterArgs {
    /// Model flags are ignored when a counts file is given.
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    partition: String,
    /// Take probabilities from a counts file instead of a ground state.
    #[arg(long)]
    counts: Option<PathBuf>,
    #[arg(long, default_value = "weak")]
    quantity: CompositeKind,
    /// `lo:hi:count`, log spaced; defaults to 60 levels from 1e-8 to 1.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RotateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    partition: String,
    /// Labels making up the region, e.g. `A` or `AB`.
    #[arg(long, default_value = "A")]
    region: LabelSet,
    /// Angles 0, π/steps, ..., π.
    #[arg(long, default_value_t = 32)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    counts: PathBuf,
    #[arg(long)]
    partition: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn open(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    OutputArgs {
        out: out.clone(),
        format: Format::Csv,
    }
    .writer()
}

/// Writes the table and reports failed points; returns whether all
/// points succeeded.
fn emit_table(table: &SweepTable, output: &OutputArgs) -> Result<bool> {
    let mut w = output.writer()?;
    match output.format {
        Format::Csv => write_csv(&mut w, table)?,
        Format::Records => write_records(&mut w, table)?,
    }
    w.flush()?;
    let failures = table.failures();
    for f in &failures {
        let at: Vec<String> = f.params.iter().map(|&v| format_value(v)).collect();
        eprintln!(
            "failed at [{}] ({}): {}",
            at.join(", "),
            f.boundary,
            f.message
        );
    }
    if !failures.is_empty() {
        eprintln!(
            "{} of {} points failed",
            failures.len(),
            table.len() * table.boundaries.len()
        );
    }
    Ok(failures.is_empty())
}

fn sweep(args: &SweepArgs) -> Result<bool> {
    let table = run_sweep(&args.model.plan(&args.partition, &args.params)?)?;
    emit_table(&table, &args.output)
}

fn report(args: &PointArgs) -> Result<bool> {
    let table = run_sweep(&args.model.plan(&args.partition, &[])?)?;
    emit_table(&table, &args.output)
}

fn critical(args: &CriticalArgs) -> Result<bool> {
    let table = run_sweep(
        &args
            .model
            .plan(&args.partition, std::slice::from_ref(&args.param))?,
    )?;
    let paired = table.boundaries.len() > 1;
    for b in table.boundaries.clone() {
        let suffix = if paired {
            format!("_{b}")
        } else {
            String::new()
        };
        let cp = critical_point(
            &table,
            &format!("{}{suffix}", args.quantity),
            &format!("E0{suffix}"),
        )?;
        println!(
            "{b}: {} peak at {} ± {}",
            args.quantity,
            format_value(cp.peak),
            format_value(cp.step)
        );
        match cp.discontinuity {
            Some(x) => println!(
                "{b}: largest jump in d2E0 at {} ± {}",
                format_value(x),
                format_value(cp.step)
            ),
            None => println!("{b}: no jump in d2E0 found"),
        }
    }
    for f in table.failures() {
        eprintln!("failed at {:?} ({}): {}", f.params, f.boundary, f.message);
    }
    Ok(table.failures().is_empty())
}

fn parse_levels(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidGrid(format!("expected lo:hi:count, got '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(bad());
    };
    log_levels(
        lo.parse().map_err(|_| bad())?,
        hi.parse().map_err(|_| bad())?,
        count.parse().map_err(|_| bad())?,
    )
}

fn filter(args: &FilterArgs) -> Result<bool> {
    let table: ProbabilityTable = match &args.counts {
        Some(path) => parse_counts(&fs::read_to_string(path)?)?.to_probabilities()?,
        None => probabilities(&args.model.ground_state()?),
    };
    let spec = LatticeSpec::new(table.num_sites(), table.local_dim(), Boundary::Periodic)?;
    let partition = parse_partition(&args.partition, &spec)?;
    let levels = match &args.levels {
        Some(text) => parse_levels(text)?,
        None => default_levels(),
    };
    let sweep = filter_sweep(&table, &partition, args.quantity, &levels)?;
    let rows: Vec<Vec<f64>> = (0..sweep.len())
        .map(|k| vec![sweep.levels[k], sweep.values[k], sweep.survivors[k] as f64])
        .collect();
    let mut w = open(&args.out)?;
    write_rows(&mut w, &["level", "value", "survivors"], &rows)?;
    w.flush()?;
    Ok(true)
}

fn rotate(args: &RotateArgs) -> Result<bool> {
    let state = args.model.ground_state()?;
    let partition = parse_partition(&args.partition, state.lattice())?;
    let sites = partition.subset_sites(args.region)?;
    let points = rotation_sweep(&state, &sites, &half_turn_grid(args.steps))?;
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| vec![p.angle, p.mutual_information, p.entropy])
        .collect();
    let mut w = open(&args.out)?;
    write_rows(&mut w, &["phi", "I", "S"], &rows)?;
    w.flush()?;
    Ok(true)
}

fn sample(args: &SampleArgs) -> Result<bool> {
    let state = args.model.ground_state()?;
    let counts = sample_counts(&probabilities(&state), args.shots, args.seed)?;
    let mut w = open(&args.out)?;
    w.write_all(counts.to_text().as_bytes())?;
    w.flush()?;
    Ok(true)
}

fn ingest(args: &IngestArgs) -> Result<bool> {
    let counts = parse_counts(&fs::read_to_string(&args.counts)?)?;
    let table = counts.to_probabilities()?;
    let spec = LatticeSpec::new(table.num_sites(), table.local_dim(), Boundary::Periodic)?;
    let partition = parse_partition(&args.partition, &spec)?;
    let mut header = vec!["shots".to_string(), "H".to_string()];
    let mut row = vec![counts.total() as f64, shannon(&table)];
    for r in Region::ALL {
        let sites = partition.subset_sites(r.labels())?;
        header.push(format!("I_{r}"));
        row.push(ditent::entropy::mutual_information(&table, &sites)?);
    }
    let c = mutual_composites(&table, &partition)?;
    header.extend(["I_weak", "I_strong", "I_delta", "eta"].map(String::from));
    row.extend([c.weak, c.strong, c.delta, ditent::entropy::eta(&partition)]);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut w = open(&args.out)?;
    write_rows(&mut w, &header, &[row])?;
    w.flush()?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Report(a) => report(a),
        Command::FilterSweep(a) => filter(a),
        Command::RotateSweep(a) => rotate(a),
        Command::Sample(a) => sample(a),
        Command::Ingest(a) => ingest(a),
        Command::CriticalPoint(a) => critical(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
