//! `wavesets` command-line front end.
//!
//! Every subcommand writes compact JSON (or CSV for plot tables) to stdout or
//! `--out`. Exit status: 0 success, 1 negative answer from a predicate, 2 bad
//! input. Errors go to stderr as `{"error": code, "message": text}`.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use wavesets::analysis::{gram_window, time_samples, wavelet_identity_deviation, FrequencySymbol};
use wavesets::congruence::is_wavelet_set_by;
use wavesets::frames::{
    disjointness_defect, etf_construct, frame_bounds, multiplex_roundtrip, naimark_complement, naimark_defect,
    parseval_deviation, projection_decomposition, tightness_defect, weighted_decomposition, FrameMatrix,
    RankOneDecomposition,
};
use wavesets::interpolation::{
    build_sigma, check_measure_preserving, coefficient_report, interpolated_symbol, torsion_order,
    CoefficientFamilySpec,
};
use wavesets::lab::{
    commutant, cyclic_table, interpolation_pair_test, interpolation_unitary, is_complete_wandering, is_wandering,
    local_commutant, parseval_frame_vector_check, regular_representation, riesz_combination_check, separates,
    vector_to_pairs, UnitarySystem, UnitarySystemJson,
};
use wavesets::linalg::{matrix_to_json, CMatrix};
use wavesets::pi::parse_rational;
use wavesets::suite::{run_criterion, run_suite, SuiteConfig, CRITERION_COUNT};
use wavesets::{families, tol, PiSet};

use io::{emit, read_json, read_matrix, read_numbers, read_vector, CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "wavesets",
    version,
    about = "Wavelet sets, interpolation maps and finite frames"
)]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,

    /// Override the numeric tolerance of threshold-based verdicts.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a set is a wavelet set and print the witnesses.
    Verify {
        #[arg(long, short = 's')]
        set: PathBuf,
        /// Dilation factor `p/q` (default 2).
        #[arg(long)]
        d: Option<String>,
    },
    /// Build a member of a named family.
    Family {
        /// shannon, shannon-path, journe-path, subset-ext or d-dilation.
        #[arg(long)]
        name: String,
        /// `p/q` (coefficient of π for the path families).
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
        /// Subset A for subset-ext.
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Interpolation map between two wavelet sets, or the coefficient criterion.
    Interp(InterpArgs),
    /// Gram window of the dilation/translation system.
    Gram {
        #[command(flatten)]
        symbol: SymbolSource,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long, default_value_t = 6)]
        l: i64,
    },
    /// Time-domain samples as CSV `t,re,im`.
    Sample {
        #[command(flatten)]
        symbol: SymbolSource,
        /// CSV of sample times.
        #[arg(long)]
        grid: PathBuf,
    },
    /// Finite unitary systems.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Frames, Naimark complements and multiplexing.
    #[command(subcommand)]
    Frames(FramesCommand),
    /// Rank-one decompositions of a positive matrix.
    Decompose(DecomposeArgs),
    /// Run the acceptance battery.
    Suite {
        /// Report elapsed time per criterion.
        #[arg(long)]
        timings: bool,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["e", "criterion"])))]
struct InterpArgs {
    #[arg(long, short = 'e', requires = "f")]
    e: Option<PathBuf>,
    #[arg(long, short = 'f', requires = "e")]
    f: Option<PathBuf>,
    /// Largest power tried when looking for the torsion order.
    #[arg(long, default_value_t = 4)]
    kmax: usize,
    /// Coefficient family file `{e, f, coefficients}`.
    #[arg(long)]
    criterion: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SymbolSource {
    /// Frequency symbol JSON.
    #[arg(long)]
    symbol: Option<PathBuf>,
    /// Set E, read as the symbol (2π)^{-1/2}·χ_E.
    #[arg(long)]
    set: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LabCommand {
    /// Left regular representation of a Cayley table.
    Regular {
        #[arg(long, conflicts_with = "cyclic", required_unless_present = "cyclic")]
        table: Option<PathBuf>,
        /// Use the cyclic group of this order.
        #[arg(long)]
        cyclic: Option<usize>,
    },
    /// Wandering and complete-wandering tests.
    Wandering {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Local commutant at a vector.
    LocalCommutant {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        vector: PathBuf,
    },
    /// Commutant of the system.
    Commutant {
        #[arg(long)]
        system: PathBuf,
    },
    /// Unitary in the local commutant taking psi to eta.
    InterpUnitary {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        eta: PathBuf,
    },
    /// Whether psi1 + lambda·psi2 has a Riesz orbit.
    Riesz {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        psi1: PathBuf,
        #[arg(long)]
        psi2: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        lambda_im: f64,
    },
    /// cos(α)ψ + i·sin(α)η wandering versus V² = I.
    PairTest {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        eta: PathBuf,
        #[arg(long)]
        alpha: f64,
    },
    /// Classify x against a complete wandering vector psi.
    FrameVector {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        x: PathBuf,
    },
}

#[derive(Subcommand)]
enum FramesCommand {
    /// Optimal frame bounds.
    Bounds {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Parseval test.
    Parseval {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Naimark complement of a Parseval frame.
    Naimark {
        #[arg(long)]
        frame: PathBuf,
    },
    /// Strong disjointness of two Parseval frames.
    Disjoint {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Encode two signals into one coefficient sequence and decode both.
    Multiplex {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Frame vectors as CSV.
    Csv {
        #[arg(long)]
        frame: PathBuf,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("target").required(true).args(["weights", "projections", "etf"])))]
struct DecomposeArgs {
    /// Positive matrix B (or T for --etf).
    #[arg(long)]
    matrix: PathBuf,
    /// CSV of target weights.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Sum of k rank-one projections.
    #[arg(long)]
    projections: Option<usize>,
    /// Tight frame of k vectors on the ellipsoid T·S.
    #[arg(long)]
    etf: Option<usize>,
}

/// Result of a subcommand: the text to emit and whether the answer was positive.
struct Outcome {
    text: String,
    positive: bool,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, positive: bool) -> CliResult<Self> {
        let mut text = serde_json::to_string(value).map_err(wavesets::Error::from)?;
        text.push('\n');
        Ok(Outcome { text, positive })
    }

    fn ok<T: Serialize>(value: &T) -> CliResult<Self> {
        Self::json(value, true)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            report(&json!({"error": "usage", "message": e.to_string().trim()}));
            return ExitCode::from(2);
        }
    };
    match run(&cli).and_then(|o| emit(cli.out.as_deref(), &o.text).map(|_| o.positive)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            report(&json!({"error": e.code(), "message": e.to_string()}));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn report(v: &Value) {
    eprintln!("{v}");
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Verify { set, d } => verify(set, d.as_deref()),
        Command::Family { name, param, set } => family(name, param.as_deref(), set.as_deref()),
        Command::Interp(args) => interp(args),
        Command::Gram { symbol, n, l } => gram(symbol, *n, *l, cli.tol.unwrap_or(tol::ALGEBRAIC)),
        Command::Sample { symbol, grid } => sample(symbol, grid),
        Command::Lab(cmd) => lab(cmd),
        Command::Frames(cmd) => frames(cmd, cli.tol.unwrap_or(tol::ALGEBRAIC)),
        Command::Decompose(args) => decompose(args),
        Command::Suite { timings, criterion } => suite(cli.seed, *timings, *criterion),
    }
}

fn verify(set: &Path, d: Option<&str>) -> CliResult<Outcome> {
    let e: PiSet = read_json(set)?;
    let d = parse_rational(d.unwrap_or("2"))?;
    let verdict = is_wavelet_set_by(&e, &d);
    Outcome::json(&verdict, verdict.is_wavelet_set)
}

fn family(name: &str, param: Option<&str>, set: Option<&Path>) -> CliResult<Outcome> {
    let param = match param {
        // The path families take a multiple of π; accept `pi` markers there.
        Some(p) if name != "d-dilation" => Some(p.parse::<wavesets::PiRational>()?.into_coeff()),
        Some(p) => Some(parse_rational(p)?),
        None => None,
    };
    let subset: Option<PiSet> = set.map(read_json).transpose()?;
    let e = families::build(name, param.as_ref(), subset.as_ref())?;
    Outcome::ok(&e)
}

fn interp(args: &InterpArgs) -> CliResult<Outcome> {
    if let Some(path) = &args.criterion {
        let spec: CoefficientFamilySpec = read_json(path)?;
        let fam = spec.build()?;
        let report = coefficient_report(&fam)?;
        let symbol = if report.unitary {
            let sym = interpolated_symbol(&fam)?;
            let (translation, calderon) = wavelet_identity_deviation(&sym)?;
            Some(json!({
                "symbol": sym,
                "modulus_deviation": sym.modulus_deviation(),
                "translation_deviation": translation,
                "calderon_deviation": calderon,
            }))
        } else {
            None
        };
        let unitary = report.unitary;
        return Outcome::json(&json!({"report": report, "interpolated": symbol}), unitary);
    }
    let (Some(e), Some(f)) = (&args.e, &args.f) else {
        return Err(CliError::Usage("interp needs --e and --f, or --criterion".into()));
    };
    let e: PiSet = read_json(e)?;
    let f: PiSet = read_json(f)?;
    let sigma = build_sigma(&e, &f)?;
    let torsion = torsion_order(&sigma, args.kmax);
    Outcome::ok(&json!({
        "map": sigma,
        "kmax": args.kmax,
        "torsion": torsion,
        "involution": torsion.is_some_and(|k| k <= 2),
        "integral_shifts": sigma.has_integral_shifts(),
        "measure_preserving": check_measure_preserving(&sigma),
    }))
}

fn load_symbol(src: &SymbolSource) -> CliResult<FrequencySymbol> {
    match (&src.symbol, &src.set) {
        (Some(p), _) => read_json(p),
        (None, Some(p)) => Ok(FrequencySymbol::indicator(&read_json::<PiSet>(p)?)),
        (None, None) => Err(CliError::Usage("need --symbol or --set".into())),
    }
}

fn gram(src: &SymbolSource, n: i64, l: i64, tol: f64) -> CliResult<Outcome> {
    if n < 0 || l < 0 {
        return Err(CliError::Usage("--n and --l must be non-negative".into()));
    }
    let sym = load_symbol(src)?;
    let g = gram_window(&sym, n, l);
    let orthonormal = g.deviation <= tol;
    Outcome::json(
        &json!({
            "size": g.size(),
            "deviation": g.deviation,
            "tolerance": tol,
            "orthonormal": orthonormal,
            "hermitian": g.is_hermitian(tol::RAW),
            "window": g,
        }),
        orthonormal,
    )
}

fn sample(src: &SymbolSource, grid: &Path) -> CliResult<Outcome> {
    let sym = load_symbol(src)?;
    let ts = read_numbers(grid)?;
    let mut text = String::from("t,re,im\n");
    for (t, v) in ts.iter().zip(time_samples(&sym, &ts)) {
        text.push_str(&format!("{t:?},{:?},{:?}\n", v.re, v.im));
    }
    Ok(Outcome { text, positive: true })
}

fn load_system(path: &Path) -> CliResult<UnitarySystem> {
    let j: UnitarySystemJson = read_json(path)?;
    Ok(UnitarySystem::try_from(j)?)
}

fn lab(cmd: &LabCommand) -> CliResult<Outcome> {
    match cmd {
        LabCommand::Regular { table, cyclic } => {
            let table: Vec<Vec<usize>> = match (table, cyclic) {
                (Some(p), _) => read_json(p)?,
                (None, Some(n)) => cyclic_table(*n),
                (None, None) => return Err(CliError::Usage("need --table or --cyclic".into())),
            };
            Outcome::ok(&regular_representation(&table)?.to_json())
        }
        LabCommand::Wandering { system, vector } => {
            let u = load_system(system)?;
            let x = read_vector(vector)?;
            check_dim(&u, x.len())?;
            let wandering = is_wandering(&u, &x);
            Outcome::json(
                &json!({"wandering": wandering, "complete": is_complete_wandering(&u, &x)}),
                wandering,
            )
        }
        LabCommand::LocalCommutant { system, vector } => {
            let u = load_system(system)?;
            let x = read_vector(vector)?;
            check_dim(&u, x.len())?;
            let local = local_commutant(&u, &x);
            let comm = commutant(&u);
            Outcome::ok(&json!({
                "dim": local.len(),
                "commutant_dim": comm.len(),
                "separating": separates(&local, &x),
                "basis": local.to_json(),
            }))
        }
        LabCommand::Commutant { system } => {
            let comm = commutant(&load_system(system)?);
            Outcome::ok(&json!({"dim": comm.len(), "basis": comm.to_json()}))
        }
        LabCommand::InterpUnitary { system, psi, eta } => {
            let u = load_system(system)?;
            let (psi, eta) = (read_vector(psi)?, read_vector(eta)?);
            check_dim(&u, psi.len())?;
            check_dim(&u, eta.len())?;
            Outcome::ok(&matrix_to_json(&interpolation_unitary(&u, &psi, &eta)?))
        }
        LabCommand::Riesz {
            system,
            psi1,
            psi2,
            lambda,
            lambda_im,
        } => {
            let u = load_system(system)?;
            let (a, b) = (read_vector(psi1)?, read_vector(psi2)?);
            check_dim(&u, a.len())?;
            check_dim(&u, b.len())?;
            let riesz = riesz_combination_check(&u, &a, &b, Complex64::new(*lambda, *lambda_im));
            Outcome::json(&json!({"riesz": riesz}), riesz)
        }
        LabCommand::PairTest {
            system,
            psi,
            eta,
            alpha,
        } => {
            let u = load_system(system)?;
            let (psi, eta) = (read_vector(psi)?, read_vector(eta)?);
            check_dim(&u, psi.len())?;
            check_dim(&u, eta.len())?;
            Outcome::ok(&interpolation_pair_test(&u, &psi, &eta, *alpha)?)
        }
        LabCommand::FrameVector { system, psi, x } => {
            let u = load_system(system)?;
            let (psi, x) = (read_vector(psi)?, read_vector(x)?);
            check_dim(&u, psi.len())?;
            check_dim(&u, x.len())?;
            let r = parseval_frame_vector_check(&u, &psi, &x)?;
            let positive = r.factor.is_some();
            Outcome::json(
                &json!({
                    "class": r.class,
                    "factor": r.factor.as_ref().map(matrix_to_json),
                    "factor_checked": r.factor_checked,
                }),
                positive,
            )
        }
    }
}

fn check_dim(u: &UnitarySystem, n: usize) -> CliResult<()> {
    if u.dim() != n {
        return Err(wavesets::Error::DimensionMismatch(format!(
            "vector has length {n}, system acts on dimension {}",
            u.dim()
        ))
        .into());
    }
    Ok(())
}

fn load_frame(path: &Path) -> CliResult<FrameMatrix> {
    Ok(FrameMatrix::new(read_matrix(path)?)?)
}

fn frames(cmd: &FramesCommand, tol: f64) -> CliResult<Outcome> {
    match cmd {
        FramesCommand::Bounds { frame } => {
            let b = frame_bounds(&load_frame(frame)?)?;
            Outcome::json(&b, b.is_frame)
        }
        FramesCommand::Parseval { frame } => {
            let dev = parseval_deviation(&load_frame(frame)?);
            Outcome::json(&json!({"deviation": dev, "parseval": dev <= tol}), dev <= tol)
        }
        FramesCommand::Naimark { frame } => {
            let f = load_frame(frame)?;
            let g = naimark_complement(&f)?;
            Outcome::ok(&json!({"complement": matrix_to_json(&g), "defect": naimark_defect(&f, &g)}))
        }
        FramesCommand::Disjoint { frame, other } => {
            let d = disjointness_defect(&load_frame(frame)?, &load_frame(other)?)?;
            Outcome::json(&json!({"defect": d, "strongly_disjoint": d <= tol}), d <= tol)
        }
        FramesCommand::Multiplex { frame, other, x, y } => {
            let (f, g) = (load_frame(frame)?, load_frame(other)?);
            let (x, y) = (read_vector(x)?, read_vector(y)?);
            let (xr, yr) = multiplex_roundtrip(&f, &g, &x, &y)?;
            let error = (&xr - &x).norm().max((&yr - &y).norm());
            Outcome::json(
                &json!({"x": vector_to_pairs(&xr), "y": vector_to_pairs(&yr), "error": error}),
                error <= tol,
            )
        }
        FramesCommand::Csv { frame } => Ok(Outcome {
            text: load_frame(frame)?.to_csv(),
            positive: true,
        }),
    }
}

fn decomposition_json(d: &RankOneDecomposition, b: &CMatrix) -> CliResult<Value> {
    Ok(json!({
        "weights": d.weights,
        "units": d.as_frame()?.to_json(),
        "residual": d.residual(b),
        "norm_defect": d.norm_defect(),
    }))
}

fn decompose(args: &DecomposeArgs) -> CliResult<Outcome> {
    let b = read_matrix(&args.matrix)?;
    if let Some(path) = &args.weights {
        let w = read_numbers(path)?;
        let d = weighted_decomposition(&b, &w)?;
        return Outcome::ok(&decomposition_json(&d, &b)?);
    }
    if let Some(k) = args.projections {
        let d = projection_decomposition(&b, k)?;
        return Outcome::ok(&decomposition_json(&d, &b)?);
    }
    if let Some(k) = args.etf {
        let etf = etf_construct(&b, k)?;
        return Outcome::ok(&json!({
            "frame": etf.frame.to_json(),
            "bound": etf.bound,
            "tightness_defect": tightness_defect(&etf.frame, etf.bound),
        }));
    }
    Err(CliError::Usage("need --weights, --projections or --etf".into()))
}

fn suite(seed: u64, timings: bool, criterion: Option<u8>) -> CliResult<Outcome> {
    let cfg = SuiteConfig { seed, timings };
    match criterion {
        Some(id) if !(1..=CRITERION_COUNT).contains(&id) => {
            Err(CliError::Usage(format!("criterion must be in 1..={CRITERION_COUNT}")))
        }
        Some(id) => {
            let outcome = run_criterion(id, &cfg);
            let passed = outcome.passed;
            Outcome::json(&outcome, passed)
        }
        None => {
            let report = run_suite(&cfg);
            let passed = report.all_passed;
            Outcome::json(&report, passed)
        }
    }
}
