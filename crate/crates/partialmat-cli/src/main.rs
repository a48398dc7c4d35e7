//! Command-line front end: generate PSD block matrices, run individual
//! inequality checks on matrix files, or run the whole suite and emit a
//! machine-readable report.
//!
//! Exit codes: 0 pass, 1 check/suite failure, 2 usage or input errors,
//! 3 non-PSD input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use partialmat::block::{BlockMat, Side};
use partialmat::catalog::{
    check_choi, check_fiedler_markham, check_fischer, check_mean_bounds, check_partial_det_three,
    check_partial_det_three_common, check_superadd_partial_det, check_tensor_three,
    check_tensor_two_common, check_thompson, report_to_csv, run_suite, standard_specs, CheckError,
    CheckResult, MeanBound, Report,
};
use partialmat::psd::{generate, Ensemble, GenSpec};
use partialmat::tol::{DEFAULT_TOL_ABS, DEFAULT_TOL_REL};
use partialmat::Tolerance;

use partialmat_cli::io::{read_block, MatrixFile};

const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_NOT_PSD: i32 = 3;

#[derive(Parser)]
#[command(
    name = "partialmat",
    version,
    about = "Verify determinantal inequalities on positive semidefinite block matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a PSD block matrix and write it as a matrix file
    Gen(GenArgs),
    /// Run one inequality check on matrix files
    Check(CheckArgs),
    /// Run the full check catalog over generated inputs
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnsembleArg {
    Ginibre,
    WishartRankR,
    KronStructured,
    EqualityCase,
    DiagRandom,
}

impl From<EnsembleArg> for Ensemble {
    fn from(e: EnsembleArg) -> Ensemble {
        match e {
            EnsembleArg::Ginibre => Ensemble::Ginibre,
            EnsembleArg::WishartRankR => Ensemble::WishartRankR,
            EnsembleArg::KronStructured => Ensemble::KronStructured,
            EnsembleArg::EqualityCase => Ensemble::EqualityCase,
            EnsembleArg::DiagRandom => Ensemble::DiagRandom,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    ensemble: EnsembleArg,
    /// Outer block count (at least 1)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Inner block size (at least 1)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Factor rank for wishart-rank-r (defaults to nk - 1)
    #[arg(long)]
    rank: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    Fischer,
    Thompson,
    FiedlerMarkham,
    Choi,
    MeanBounds,
    Superadd,
    TensorThree,
    TensorTwoCommon,
    DetThree,
    DetThreeCommon,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeanKind {
    FanKy,
    AmGm,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    name: CheckName,
    /// Side 1 or 2 where the check distinguishes them
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    side: Option<u8>,
    /// For fischer: use the realigned diagonal blocks
    #[arg(long)]
    realigned: bool,
    /// For mean-bounds: which bound
    #[arg(long, value_enum)]
    which: Option<MeanKind>,
    /// Tensor power order for the tensor checks
    #[arg(long)]
    r: Option<u32>,
    /// Input matrix file(s)
    #[arg(long = "in", num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    tol_abs: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated block dims, e.g. 2x2,3x2
    #[arg(long, default_value = "2x2,3x2,2x3,2x4,4x2")]
    dims: String,
    /// Comma-separated ensemble names
    #[arg(
        long,
        default_value = "ginibre,wishart-rank-r,kron-structured,equality-case,diag-random"
    )]
    ensembles: String,
    /// Report path; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    tol_abs: Option<f64>,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Check(args) => cmd_check(args),
        Command::Suite(args) => cmd_suite(args),
    };
    std::process::exit(code);
}

/// Defaults, overridden by PARTIALMAT_TOL_ABS / PARTIALMAT_TOL_REL, overridden
/// by the command-line flags.
fn resolve_tol(tol_abs: Option<f64>, tol_rel: Option<f64>) -> Result<Tolerance, String> {
    let mut tol = Tolerance::new(DEFAULT_TOL_ABS, DEFAULT_TOL_REL);
    if let Ok(v) = std::env::var("PARTIALMAT_TOL_ABS") {
        tol.absolute = v
            .parse()
            .map_err(|e| format!("bad PARTIALMAT_TOL_ABS {v:?}: {e}"))?;
    }
    if let Ok(v) = std::env::var("PARTIALMAT_TOL_REL") {
        tol.relative = v
            .parse()
            .map_err(|e| format!("bad PARTIALMAT_TOL_REL {v:?}: {e}"))?;
    }
    if let Some(v) = tol_abs {
        tol.absolute = v;
    }
    if let Some(v) = tol_rel {
        tol.relative = v;
    }
    Ok(tol)
}

fn cmd_gen(args: GenArgs) -> i32 {
    let n = args.n as usize;
    let k = args.k as usize;
    let ensemble: Ensemble = args.ensemble.into();
    let mut spec = GenSpec::new(ensemble, n, k, args.seed);
    if let Some(rank) = args.rank {
        spec = spec.with_rank(rank as usize);
    } else if ensemble == Ensemble::WishartRankR {
        let d = n * k;
        spec = spec.with_rank(if d > 1 { d - 1 } else { 1 });
    }
    let h = match generate(&spec) {
        Ok(h) => h,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = serde_json::to_string(&MatrixFile::from_block(&h)).expect("matrix serializes");
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => println!("{text}"),
    }
    0
}

fn side_arg(side: Option<u8>, name: &str) -> Result<Side, String> {
    let v = side.ok_or_else(|| format!("{name} requires --side 1|2"))?;
    Side::from_u8(v).ok_or_else(|| format!("--side must be 1 or 2, got {v}"))
}

/// Flags that do not apply to the chosen check are an error, not a no-op:
/// e.g. `fischer --side 1` would otherwise look like it selects the
/// realigned form while doing nothing.
fn reject_stray_flags(args: &CheckArgs) -> Result<(), String> {
    let takes_side = matches!(
        args.name,
        CheckName::Thompson
            | CheckName::FiedlerMarkham
            | CheckName::Choi
            | CheckName::Superadd
            | CheckName::DetThree
            | CheckName::DetThreeCommon
    );
    if args.side.is_some() && !takes_side {
        return Err("--side does not apply to this check".into());
    }
    if args.realigned && args.name != CheckName::Fischer {
        return Err("--realigned only applies to fischer".into());
    }
    if args.which.is_some() && args.name != CheckName::MeanBounds {
        return Err("--which only applies to mean-bounds".into());
    }
    let takes_r = matches!(
        args.name,
        CheckName::TensorThree | CheckName::TensorTwoCommon
    );
    if args.r.is_some() && !takes_r {
        return Err("--r only applies to the tensor checks".into());
    }
    Ok(())
}

fn expected_inputs(name: CheckName) -> usize {
    match name {
        CheckName::Superadd => 2,
        CheckName::TensorThree
        | CheckName::TensorTwoCommon
        | CheckName::DetThree
        | CheckName::DetThreeCommon => 3,
        _ => 1,
    }
}

fn cmd_check(args: CheckArgs) -> i32 {
    let tol = match resolve_tol(args.tol_abs, args.tol_rel) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let want = expected_inputs(args.name);
    if args.inputs.len() != want {
        eprintln!(
            "error: this check takes exactly {want} input file(s), got {}",
            args.inputs.len()
        );
        return EXIT_USAGE;
    }
    let mut blocks: Vec<BlockMat> = Vec::with_capacity(want);
    for path in &args.inputs {
        match read_block(path) {
            Ok(b) => blocks.push(b),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    }

    let run: Result<CheckResult, CheckFailure> = (|| {
        reject_stray_flags(&args)?;
        let res = match args.name {
            CheckName::Fischer => check_fischer(&blocks[0], args.realigned, &tol),
            CheckName::Thompson => {
                check_thompson(&blocks[0], side_arg(args.side, "thompson")?, &tol)
            }
            CheckName::FiedlerMarkham => {
                check_fiedler_markham(&blocks[0], side_arg(args.side, "fiedler-markham")?, &tol)
            }
            CheckName::Choi => check_choi(&blocks[0], side_arg(args.side, "choi")?, &tol),
            CheckName::MeanBounds => {
                let which = match args.which {
                    Some(MeanKind::FanKy) => MeanBound::FanKy,
                    Some(MeanKind::AmGm) => MeanBound::AmGm,
                    None => return Err("mean-bounds requires --which fan-ky|am-gm".into()),
                };
                check_mean_bounds(&blocks[0], which, &tol)
            }
            CheckName::Superadd => check_superadd_partial_det(
                &blocks[0],
                &blocks[1],
                side_arg(args.side, "superadd")?,
                &tol,
            ),
            CheckName::TensorThree | CheckName::TensorTwoCommon => {
                let r = args.r.ok_or("tensor checks require --r")? as usize;
                let (a, b, c) = (blocks[0].mat(), blocks[1].mat(), blocks[2].mat());
                if args.name == CheckName::TensorThree {
                    check_tensor_three(a, b, c, r, &tol)
                } else {
                    check_tensor_two_common(a, b, c, r, &tol)
                }
            }
            CheckName::DetThree => check_partial_det_three(
                &blocks[0],
                &blocks[1],
                &blocks[2],
                side_arg(args.side, "det-three")?,
                &tol,
            ),
            CheckName::DetThreeCommon => check_partial_det_three_common(
                &blocks[0],
                &blocks[1],
                &blocks[2],
                side_arg(args.side, "det-three-common")?,
                &tol,
            ),
        };
        res.map_err(|e| e.into_message())
    })();

    match run {
        Ok(result) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&result).expect("result serializes")
            );
            if result.pass {
                0
            } else {
                EXIT_FAIL
            }
        }
        Err(msg) => {
            eprintln!("error: {}", msg.text);
            msg.code
        }
    }
}

struct CheckFailure {
    text: String,
    code: i32,
}

trait IntoMessage {
    fn into_message(self) -> CheckFailure;
}

impl IntoMessage for CheckError {
    fn into_message(self) -> CheckFailure {
        let code = match self {
            CheckError::NotPsd { .. } | CheckError::NotHermitian { .. } => EXIT_NOT_PSD,
            _ => EXIT_USAGE,
        };
        CheckFailure {
            text: self.to_string(),
            code,
        }
    }
}

impl From<String> for CheckFailure {
    fn from(text: String) -> Self {
        CheckFailure {
            text,
            code: EXIT_USAGE,
        }
    }
}

impl From<&str> for CheckFailure {
    fn from(text: &str) -> Self {
        String::from(text).into()
    }
}

fn parse_dims(s: &str) -> Result<Vec<(usize, usize)>, String> {
    let mut dims = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let (n, k) = part
            .split_once('x')
            .ok_or_else(|| format!("bad dims entry {part:?}, expected NxK"))?;
        let n: usize = n.parse().map_err(|_| format!("bad dims entry {part:?}"))?;
        let k: usize = k.parse().map_err(|_| format!("bad dims entry {part:?}"))?;
        if n == 0 || k == 0 {
            return Err(format!("dims must be at least 1x1, got {part:?}"));
        }
        dims.push((n, k));
    }
    if dims.is_empty() {
        return Err("empty dims list".into());
    }
    Ok(dims)
}

fn parse_ensembles(s: &str) -> Result<Vec<Ensemble>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let ens = Ensemble::ALL
            .into_iter()
            .find(|e| e.name() == part)
            .ok_or_else(|| format!("unknown ensemble {part:?}"))?;
        out.push(ens);
    }
    if out.is_empty() {
        return Err("empty ensemble list".into());
    }
    Ok(out)
}

fn cmd_suite(args: SuiteArgs) -> i32 {
    let tol = match resolve_tol(args.tol_abs, args.tol_rel) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let dims = match parse_dims(&args.dims) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let ensembles = match parse_ensembles(&args.ensembles) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    let specs = standard_specs(&dims, &ensembles, args.seed);
    let report = run_suite(&specs, args.trials, &tol);

    if let Err(e) = write_report(&report, args.format, args.out.as_deref()) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }

    // one summary line per check; keep stdout clean when it carries the report
    let to_stdout = args.out.is_some();
    let emit = |line: String| {
        if to_stdout {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    for s in &report.summary {
        emit(format!(
            "{:<26} side={} count={:>6} min_margin={:+.3e} {}",
            s.check,
            s.side.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
            s.count,
            s.min_margin,
            if s.failures == 0 { "OK" } else { "FAIL" }
        ));
    }
    emit(format!(
        "total={} passed={} failed={} duration={:.2}s",
        report.meta.total, report.meta.passed, report.meta.failed, report.meta.duration_seconds
    ));

    if report.all_pass() {
        0
    } else {
        EXIT_FAIL
    }
}

fn write_report(
    report: &Report,
    format: OutputFormat,
    out: Option<&std::path::Path>,
) -> Result<(), String> {
    match out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            let mut w = std::io::BufWriter::new(file);
            write_report_to(report, format, &mut w)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            write_report_to(report, format, &mut w).map_err(|e| format!("cannot write report: {e}"))
        }
    }
}

fn write_report_to(
    report: &Report,
    format: OutputFormat,
    w: &mut impl Write,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer(&mut *w, report)?;
            writeln!(w)
        }
        OutputFormat::Csv => w.write_all(report_to_csv(report).as_bytes()),
    }
}
