//! `kashaev-lab`: command-line experiments with Kashaev's invariant.
//!
//! Exit status: 0 ok, 1 identity check failed, 2 bad input, 3 workload
//! refused, 4 solver did not converge.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kashaev_core::asymptotics::{
    conjecture_report, fit_samples, samples_to_csv, volume_sequence, ClosedForm, ConjectureReport, GrowthFit,
    VolumeSample,
};
use kashaev_core::hypergeo::{
    figure_eight_gluing_system, newton_solve, volume, GluingSystem, NewtonOptions, ShapeAssignment,
};
use kashaev_core::tangle::{state_sum_with, ContractionOptions, InvariantRecord, Strategy, TangleDiagram};
use kashaev_core::yang_baxter::{check_ybe, YbeReport, DEFAULT_DENSE_BOUND};
use kashaev_core::{ComplexValue, Error, QContext};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "kashaev-lab",
    version,
    about = "Kashaev's knot invariant and the volume conjecture"
)]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "KASHAEV_LAB_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// State-sum invariant of a tangle diagram.
    Invariant(InvariantArgs),
    /// Dense residuals of the enhanced Yang-Baxter identities.
    CheckYbe(CheckYbeArgs),
    /// Fit the growth of a closed-form invariant against the hyperbolic volume.
    VolumeFit(VolumeFitArgs),
    /// Newton solve of a gluing system, then the volume of the solution.
    GluingSolve(GluingArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EngineArg {
    Eliminate,
    Sweep,
}

#[derive(Args, Debug)]
struct Range {
    /// Single N.
    #[arg(long = "N", conflicts_with_all = ["n_min", "n_max"])]
    n: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, default_value_t = 1)]
    step: usize,
}

impl Range {
    fn values(&self) -> Result<Vec<usize>, Error> {
        let (lo, hi) = match (self.n, self.n_min, self.n_max) {
            (Some(n), _, _) => (n, n),
            (None, Some(a), Some(b)) => (a, b),
            (None, Some(a), None) => (a, a),
            (None, None, Some(b)) => (b, b),
            (None, None, None) => return Err(Error::InvalidInput("give --N or --n-min/--n-max".into())),
        };
        if lo < 2 {
            return Err(Error::InvalidInput(format!("N must be at least 2, got {lo}")));
        }
        if hi < lo || self.step == 0 {
            return Err(Error::InvalidInput(format!(
                "empty range {lo}..{hi} step {}",
                self.step
            )));
        }
        Ok((lo..=hi).step_by(self.step).collect())
    }
}

#[derive(Args, Debug)]
struct InvariantArgs {
    #[command(flatten)]
    range: Range,
    /// figure-eight, trefoil, unknot or kink.
    #[arg(long, conflicts_with = "diagram")]
    builtin: Option<String>,
    /// JSON diagram file.
    #[arg(long)]
    diagram: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_enum, default_value_t = EngineArg::Eliminate)]
    engine: EngineArg,
    /// Largest intermediate table, in entries.
    #[arg(long, default_value_t = 50_000_000)]
    max_entries: usize,
}

#[derive(Args, Debug)]
struct CheckYbeArgs {
    #[command(flatten)]
    range: Range,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Largest N the dense check accepts.
    #[arg(long, default_value_t = DEFAULT_DENSE_BOUND)]
    bound: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct VolumeFitArgs {
    /// figure-eight or trefoil.
    #[arg(long, default_value = "figure-eight")]
    builtin: String,
    /// Defaults to n_max / 10.
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    n_max: usize,
    /// Defaults to about 45 samples over the range.
    #[arg(long)]
    step: Option<usize>,
    /// Fit without the log N term.
    #[arg(long)]
    no_log_term: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct GluingArgs {
    /// Only figure-eight is built in.
    #[arg(long, conflicts_with = "system")]
    builtin: Option<String>,
    /// JSON gluing system file.
    #[arg(long)]
    system: Option<PathBuf>,
    /// Comma-separated starting shapes, e.g. 0.4+1.2i,0.7+0.8i.
    #[arg(long, allow_hyphen_values = true)]
    initial: Option<String>,
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BudgetExceeded { .. } | Error::DenseBoundExceeded { .. } => 3,
            Error::NonConvergence { .. } | Error::DegenerateShape(_) => 4,
            _ => 2,
        };
        let mut message = e.to_string();
        if let Error::NonConvergence { trace, .. } = &e {
            for t in trace {
                message.push_str("\n  ");
                message.push_str(t);
            }
        }
        Failure { code, message }
    }
}

fn input_failure(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes());
    if !s.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("records serialize")
}

fn read_file(p: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| input_failure(format!("cannot read {}: {e}", p.display())))
}

#[derive(Serialize)]
struct InvariantOutput<'a> {
    diagram: &'a str,
    crossings: usize,
    writhe: i64,
    records: Vec<InvariantRecord>,
}

fn cmd_invariant(a: &InvariantArgs) -> CmdResult {
    let d = match (&a.builtin, &a.diagram) {
        (Some(name), None) => TangleDiagram::builtin(name)?,
        (None, Some(p)) => TangleDiagram::from_json(&read_file(p)?)?,
        _ => return Err(input_failure("give exactly one of --builtin or --diagram")),
    };
    let opts = ContractionOptions {
        strategy: match a.engine {
            EngineArg::Eliminate => Strategy::Eliminate,
            EngineArg::Sweep => Strategy::Sweep,
        },
        max_entries: a.max_entries,
    };
    let mut records = Vec::new();
    for n in a.range.values()? {
        records.push(InvariantRecord::new(
            n,
            state_sum_with(&QContext::new(n)?, &d, &opts)?,
        ));
    }
    match a.format {
        Format::Json => emit(&to_json(&InvariantOutput {
            diagram: &d.name,
            crossings: d.crossing_count(),
            writhe: d.writhe(),
            records,
        })),
        Format::Csv => {
            let mut s = String::from("N,re,im,modulus,log_modulus\n");
            for r in &records {
                s.push_str(&format!(
                    "{},{:e},{:e},{:e},{:e}\n",
                    r.n, r.value.re, r.value.im, r.modulus, r.log_modulus
                ));
            }
            emit(&s);
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct YbeRow {
    #[serde(flatten)]
    report: YbeReport,
    max_residual: f64,
    pass: bool,
}

fn cmd_check_ybe(a: &CheckYbeArgs) -> CmdResult {
    let mut rows = Vec::new();
    for n in a.range.values()? {
        let report = check_ybe(&QContext::new(n)?, a.bound)?;
        rows.push(YbeRow {
            report,
            max_residual: report.max_residual(),
            pass: report.passes(a.tol),
        });
    }
    let all = rows.iter().all(|r| r.pass);
    match a.format {
        Format::Json => emit(&to_json(&rows)),
        Format::Csv => {
            let mut s = String::from("N,inverse,braid,mu_commutation,trace_positive,trace_negative,pass\n");
            for r in &rows {
                let p = &r.report;
                s.push_str(&format!(
                    "{},{:e},{:e},{:e},{:e},{:e},{}\n",
                    p.n, p.inverse, p.braid, p.mu_commutation, p.trace_positive, p.trace_negative, r.pass
                ));
            }
            emit(&s);
        }
    }
    Ok(if all { 0 } else { 1 })
}

#[derive(Serialize)]
struct VolumeFitOutput {
    knot: ClosedForm,
    report: ConjectureReport,
    /// Same samples fitted with the other model, for comparison.
    alternative_fit: Option<GrowthFit>,
    samples: Vec<VolumeSample>,
}

fn figure_eight_volume() -> Result<f64, Error> {
    let sol = newton_solve(
        &figure_eight_gluing_system(),
        &ShapeAssignment::parse("i,i")?,
        &NewtonOptions::default(),
    )?;
    volume(&sol.shapes)
}

fn cmd_volume_fit(a: &VolumeFitArgs) -> CmdResult {
    let form = match a.builtin.as_str() {
        "figure-eight" | "4_1" => ClosedForm::FigureEight,
        "trefoil" | "3_1" => ClosedForm::Trefoil,
        other => {
            return Err(input_failure(format!(
                "no closed form for {other:?}; use figure-eight or trefoil"
            )))
        }
    };
    let n_max = a.n_max;
    let n_min = a.n_min.unwrap_or((n_max / 10).max(2));
    if n_max < n_min {
        return Err(input_failure(format!("empty range {n_min}..{n_max}")));
    }
    let step = a.step.unwrap_or(((n_max - n_min) / 45).max(1));
    let samples = volume_sequence(form, n_min, n_max, step)?;
    if a.format == Format::Csv {
        emit(&samples_to_csv(&samples));
        return Ok(0);
    }
    let fit = fit_samples(&samples, !a.no_log_term)?;
    let alternative_fit = fit_samples(&samples, a.no_log_term).ok();
    let geometric = match form {
        ClosedForm::FigureEight => figure_eight_volume()?,
        ClosedForm::Trefoil => form.geometric_volume(),
    };
    emit(&to_json(&VolumeFitOutput {
        knot: form,
        report: conjecture_report(&fit, geometric),
        alternative_fit,
        samples,
    }));
    Ok(0)
}

#[derive(Serialize)]
struct EquationResidual {
    name: String,
    value: ComplexValue,
    residual: f64,
}

#[derive(Serialize)]
struct GluingOutput {
    shapes: Vec<ComplexValue>,
    iterations: usize,
    residual: f64,
    equations: Vec<EquationResidual>,
    volume: f64,
    history: Vec<f64>,
}

fn cmd_gluing_solve(a: &GluingArgs) -> CmdResult {
    let system = match (&a.builtin, &a.system) {
        (None, None) => figure_eight_gluing_system(),
        (Some(b), None) if b == "figure-eight" || b == "4_1" => figure_eight_gluing_system(),
        (Some(b), None) => return Err(input_failure(format!("no built-in gluing system {b:?}"))),
        (None, Some(p)) => GluingSystem::from_json(&read_file(p)?)?,
        _ => return Err(input_failure("give at most one of --builtin or --system")),
    };
    let initial = match &a.initial {
        Some(s) => ShapeAssignment::parse(s)?,
        None => ShapeAssignment::parse(&vec!["i"; system.shape_count()].join(","))?,
    };
    let opts = NewtonOptions {
        tol: a.tol,
        max_iter: a.max_iter,
        ..NewtonOptions::default()
    };
    let sol = newton_solve(&system, &initial, &opts)?;
    let z = sol.shapes.values();
    let equations = system
        .evaluate(&z)
        .into_iter()
        .enumerate()
        .map(|(j, v)| EquationResidual {
            name: system.name(j),
            value: v.into(),
            residual: (v - 1.0).norm(),
        })
        .collect();
    emit(&to_json(&GluingOutput {
        volume: volume(&sol.shapes)?,
        shapes: sol.shapes.shapes,
        iterations: sol.iterations,
        residual: sol.residual,
        equations,
        history: sol.history,
    }));
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("global pool is configured once");
    }
    let r = match &cli.command {
        Command::Invariant(a) => cmd_invariant(a),
        Command::CheckYbe(a) => cmd_check_ybe(a),
        Command::VolumeFit(a) => cmd_volume_fit(a),
        Command::GluingSolve(a) => cmd_gluing_solve(a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
