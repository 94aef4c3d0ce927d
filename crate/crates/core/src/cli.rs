//! Command-line interface.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage, 3 breakdown,
//! 4 verification tolerance exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::chevalley::LieAlgebra;
use crate::error::{Error, Result};
use crate::grading::{certify_nilpotency, Grading};
use crate::reduction::{emit_symbolic, plan_hierarchy, Hierarchy, Mode};
use crate::rootsys::RootSystem;
use crate::solver::{compare, oracle_adjoint, solve, CoefficientPath, ErrorReport, SolveOptions, Status, DEFAULT_THRESHOLD};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BREAKDOWN: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "weinorman", version, about = "Wei-Norman factorization on reductive Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the root system of a group.
    Roots {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the Chevalley structure constants as JSON.
    Structure {
        #[arg(long)]
        group: String,
    },
    /// Print the grading induced by a set of nodes (1-based, comma separated).
    Grading {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the planned stage list.
    Hierarchy {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Cominuscule)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the explicit stage equations.
    Emit {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Cominuscule)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the hierarchy and write the trajectory.
    Solve(RunArgs),
    /// Integrate, run the adjoint oracle and compare.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Number of random cases, seeds `seed, seed+1, ...`.
        #[arg(long, default_value_t = 1)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Double one structure constant in the hierarchy (negative control).
        #[arg(long)]
        corrupt: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Cominuscule)]
    mode: ModeArg,
    /// Input path as inline JSON or a file; zero input when neither this nor --seed is given.
    #[arg(long)]
    input: Option<String>,
    /// Seed for random sinusoidal input.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Format {
    Json,
    Text,
    Latex,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Cominuscule,
    Contact,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Cominuscule => Mode::Cominuscule,
            ModeArg::Contact => Mode::Contact,
        }
    }
}

/// Failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::InvalidDynkin(_)
            | Error::InvalidSigma(_)
            | Error::EmptySigma
            | Error::ExcludedType(_)
            | Error::RankOneContact(_)
            | Error::InvalidPath(_)
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. }
            | Error::Io(_)
            | Error::Json(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: msg.into(),
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}

fn algebra(group: &str) -> Result<Arc<LieAlgebra>> {
    Ok(Arc::new(LieAlgebra::from_spec(group)?))
}

fn dispatch(cmd: Command) -> std::result::Result<i32, Failure> {
    match cmd {
        Command::Roots { group, format } => {
            let rs = RootSystem::from_spec(&group)?;
            match format {
                Format::Json => emit(&pretty(&rs.to_json()), None)?,
                Format::Text => emit(&roots_text(&rs), None)?,
                f => return Err(usage(format!("roots supports json or text, not {:?}", f))),
            }
            Ok(EXIT_OK)
        }
        Command::Structure { group } => {
            let alg = algebra(&group)?;
            emit(&pretty(&alg.structure_json()), None)?;
            Ok(EXIT_OK)
        }
        Command::Grading { group, sigma, seed } => {
            let alg = algebra(&group)?;
            if sigma.iter().any(|&i| i == 0) {
                return Err(usage("nodes are numbered from 1"));
            }
            let nodes: Vec<usize> = sigma.iter().map(|i| i - 1).collect();
            let g = Grading::from_sigma(&alg, &nodes)?;
            let mut v = g.to_json(&alg);
            v["nilpotency"] = serde_json::to_value(certify_nilpotency(&g, &alg, 4, seed)?).map_err(Error::from)?;
            emit(&pretty(&v), None)?;
            Ok(EXIT_OK)
        }
        Command::Hierarchy { group, mode, format } => {
            let h = plan_hierarchy(algebra(&group)?, mode.into())?;
            match format {
                Format::Json => emit(&pretty(&h.to_json()), None)?,
                Format::Text => emit(&hierarchy_text(&h), None)?,
                f => return Err(usage(format!("hierarchy supports json or text, not {:?}", f))),
            }
            Ok(EXIT_OK)
        }
        Command::Emit { group, mode, format, out } => {
            let h = plan_hierarchy(algebra(&group)?, mode.into())?;
            let doc = emit_symbolic(&h)?;
            let text = match format {
                Format::Json => pretty(&doc.to_json()),
                Format::Text => doc.to_text(),
                Format::Latex => doc.to_latex(),
                Format::Csv => return Err(usage("emit supports json, text or latex")),
            };
            emit(&text, out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify {
            run,
            tol,
            cases,
            jobs,
            corrupt,
        } => cmd_verify(&run, tol, cases, jobs, corrupt),
    }
}

fn roots_text(rs: &RootSystem) -> String {
    let mut s = format!(
        "{}: rank {}, {} positive roots, torus dim {}\n",
        rs.dynkin(),
        rs.rank(),
        rs.positive_roots().len(),
        rs.dynkin().torus
    );
    for r in rs.positive_roots() {
        s.push_str(&format!("  {}  height {}\n", crate::chevalley::root_label(r), r.height()));
    }
    s
}

fn hierarchy_text(h: &Hierarchy) -> String {
    let alg = h.algebra();
    let mut s = format!(
        "{} ({} mode): r = {} (bound {})\n",
        alg.root_system().dynkin(),
        h.mode(),
        h.factor_count(),
        h.factor_bound()
    );
    let mut factor = 0;
    for (i, st) in h.stages().iter().enumerate() {
        let level = st.level().map_or(String::new(), |l| format!(" level {}", l));
        if st.is_factor() {
            factor += 1;
            let labels: Vec<&str> = h.unknowns(i).iter().map(|&k| alg.label(k)).collect();
            s.push_str(&format!("  xi{} {}{}: {}\n", factor, st.kind(), level, labels.join(" ")));
        } else if let crate::reduction::Stage::LeviDescent { levi, .. } = st {
            s.push_str(&format!("  -> {}{}: Levi {}\n", st.kind(), level, levi));
        }
    }
    s
}

fn load_path(alg: &LieAlgebra, args: &RunArgs, seed: Option<u64>) -> Result<CoefficientPath> {
    match (&args.input, seed) {
        (Some(_), Some(_)) => Err(Error::InvalidArgument("use either --input or --seed".into())),
        (Some(src), None) => {
            let text = if src.trim_start().starts_with('{') {
                src.clone()
            } else {
                fs::read_to_string(src).map_err(|e| Error::InvalidPath(format!("{}: {}", src, e)))?
            };
            let value: serde_json::Value = serde_json::from_str(&text)?;
            CoefficientPath::from_json(alg, &value, args.horizon)
        }
        (None, Some(s)) => CoefficientPath::random_sinusoidal(alg, s, args.horizon),
        (None, None) => CoefficientPath::new(alg, args.horizon),
    }
}

fn options(args: &RunArgs) -> std::result::Result<SolveOptions, Failure> {
    if !(args.step > 0.0) || !(args.horizon > 0.0) || !(args.threshold > 0.0) {
        return Err(usage("--step, --horizon and --threshold must be positive"));
    }
    Ok(SolveOptions {
        step: args.step,
        horizon: args.horizon,
        threshold: args.threshold,
    })
}

fn cmd_solve(args: &RunArgs) -> std::result::Result<i32, Failure> {
    let alg = algebra(&args.group)?;
    let opts = options(args)?;
    let h = Arc::new(plan_hierarchy(alg.clone(), args.mode.into())?);
    let x = load_path(&alg, args, args.seed)?;
    let tr = solve(h, &x, &opts)?;
    let text = match args.format {
        Format::Csv => tr.to_csv(),
        Format::Json => pretty(&tr.to_json()),
        f => return Err(usage(format!("solve writes csv or json, not {:?}", f))),
    };
    emit(&text, args.out.as_deref())?;
    match tr.status() {
        Status::Completed => {
            eprintln!("completed: {} points, r = {}", tr.times().len(), tr.factors().len());
            Ok(EXIT_OK)
        }
        Status::Breakdown { time, stage } => {
            eprintln!("breakdown at t* = {} in stage {}", time, stage);
            Ok(EXIT_BREAKDOWN)
        }
    }
}

fn verify_case(args: &RunArgs, seed: Option<u64>, corrupt: bool) -> Result<ErrorReport> {
    let alg = algebra(&args.group)?;
    let opts = SolveOptions {
        step: args.step,
        horizon: args.horizon,
        threshold: args.threshold,
    };
    let used = if corrupt { Arc::new(alg.corrupted()) } else { alg.clone() };
    let h = Arc::new(plan_hierarchy(used, args.mode.into())?);
    let x = load_path(&alg, args, seed)?;
    let tr = solve(h, &x, &opts)?;
    let oracle = oracle_adjoint(&alg, &x, args.step, args.horizon)?;
    compare(&tr, &oracle)
}

fn cmd_verify(args: &RunArgs, tol: f64, cases: u64, jobs: usize, corrupt: bool) -> std::result::Result<i32, Failure> {
    options(args)?;
    if cases == 0 {
        return Err(usage("--cases must be at least 1"));
    }
    if cases > 1 && args.input.is_some() {
        return Err(usage("--cases > 1 needs random input (--seed)"));
    }
    let seeds: Vec<Option<u64>> = match args.seed {
        Some(s) => (0..cases).map(|k| Some(s + k)).collect(),
        None if cases > 1 => (0..cases).map(Some).collect(),
        None => vec![None],
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| usage(e.to_string()))?;
    let results: Vec<Result<ErrorReport>> =
        pool.install(|| seeds.par_iter().map(|&s| verify_case(args, s, corrupt)).collect());

    let mut reports = Vec::new();
    let mut code = EXIT_OK;
    for (seed, r) in seeds.iter().zip(results) {
        let rep = r?;
        let worst = rep.worst();
        let case_code = match rep.status {
            Status::Breakdown { .. } => EXIT_BREAKDOWN,
            _ if !(worst <= tol) => EXIT_TOLERANCE,
            _ => EXIT_OK,
        };
        eprintln!(
            "{}{}: sup error {:.3e} (center {:.3e}), tol {:.1e} -> {}",
            args.group,
            seed.map_or(String::new(), |s| format!(" seed {}", s)),
            rep.sup_error,
            rep.center_error,
            tol,
            if case_code == EXIT_OK { "ok" } else { "FAIL" }
        );
        code = code.max(case_code);
        reports.push(json!({
            "seed": seed,
            "sup_error": rep.sup_error,
            "sup_time": rep.sup_time,
            "center_error": rep.center_error,
            "compared_points": rep.compared_points,
            "status": rep.status,
            "pass": case_code == EXIT_OK,
        }));
    }
    let doc = json!({
        "group": args.group,
        "mode": Mode::from(args.mode),
        "step": args.step,
        "horizon": args.horizon,
        "tol": tol,
        "corrupted": corrupt,
        "cases": reports,
    });
    emit(&pretty(&doc), args.out.as_deref())?;
    Ok(code)
}
