//! Command-line front end for `axc-core`.
//!
//! Every command produces a [`Report`]: a JSON body, optional CSV side
//! files, and an exit code from a fixed contract (0 success, 1 input error,
//! 2 unsolvable with a certificate).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use axc_core::douglas::{self, SolvabilityReport};
use axc_core::matcore::{self, Scale};
use axc_core::oracle::{self, RankPolicy, TrialSpec, DEFAULT_SEED};
use axc_core::projpair::{self, Grid, NonexistenceCertificate};
use axc_core::verify::{self, VerifyReport};
use axc_core::{ComplexMatrix, Error, ToleranceConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Attempts the randomized search makes before `solve --mode positive`
/// reports that it found nothing.
pub const SEARCH_BUDGET: usize = 10_000;
/// Largest equation residual `perturb` accepts as a solution.
pub const PERTURB_RESIDUAL_MAX: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    InputError = 1,
    Unsolvable = 2,
}

impl From<Exit> for ExitCode {
    fn from(exit: Exit) -> Self {
        ExitCode::from(exit as u8)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

/// What a command hands back to the process boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub exit: Exit,
    pub json: String,
    /// `(path, contents)` pairs to write next to the JSON output.
    pub csv: Vec<(PathBuf, String)>,
}

impl Report {
    fn new(exit: Exit, body: &impl Serialize) -> Self {
        Self {
            exit,
            json: to_json(body),
            csv: Vec::new(),
        }
    }
}

fn to_json(body: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(body).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Debug, Parser)]
#[command(name = "axc", version, about = "Solve AX = C for complex matrices and audit the answer")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true, default_value = "1e-10")]
    pub rank_rtol: f64,
    /// Eigenvalue floor for PSD tests, relative to max(1, ||M||).
    #[arg(long, global = true, default_value = "1e-10")]
    pub psd_atol: f64,
    /// Residual bound for equation checks, relative to max(1, ||rhs||).
    #[arg(long, global = true, default_value = "1e-9")]
    pub residual_atol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl GlobalOpts {
    pub fn tolerances(&self) -> Result<ToleranceConfig, Error> {
        ToleranceConfig::new(self.rank_rtol, self.psd_atol, self.residual_atol)
    }
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Matrix JSON file for A.
    #[arg(long = "a", value_name = "FILE")]
    pub a: PathBuf,
    /// Matrix JSON file for C.
    #[arg(long = "c", value_name = "FILE")]
    pub c: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// X = D + (I - P) Y for any Y.
    General,
    /// X = D + (I - P) D* + (I - P) Y (I - P) for Hermitian Y.
    Hermitian,
    /// X = X0 + (I - P) Z (I - P) for PSD Z.
    Positive,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Produce a solution of the requested kind.
    Solve {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = Mode::General)]
        mode: Mode,
        /// Parameter Y for general and hermitian modes (defaults to 0).
        #[arg(long, value_name = "FILE", conflicts_with = "z")]
        y: Option<PathBuf>,
        /// PSD parameter Z for positive mode (defaults to 0). It enters as
        /// (I - P) Z (I - P), so only its block on N(A) matters.
        #[arg(long, value_name = "FILE")]
        z: Option<PathBuf>,
    },
    /// Full solvability report with t_min and the T_n diagnostic.
    Check {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Least mu with CC* <= mu AA*, cross-checked against ||A†C||^2.
    Majorize {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Certificate that (P+Q)^{1/2} X = P has no solution in the algebra.
    Twoproj {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// CSV of the pointwise solution X(t).
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Perturb Q by a flat start on [0, eps] and solve in the algebra.
    Perturb {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        eps: f64,
        /// CSV of the perturbed projection Q'(t).
        #[arg(long, value_name = "FILE")]
        csv_q: Option<PathBuf>,
        /// CSV of the solution X(t).
        #[arg(long, value_name = "FILE")]
        csv_x: Option<PathBuf>,
    },
    /// Seeded randomized comparison of the solver against the oracle.
    Verify {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        min_dim: usize,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
        #[arg(long, value_enum, default_value_t = RankArg::Random)]
        rank_policy: RankArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RankArg {
    Full,
    Deficient,
    Random,
}

impl From<RankArg> for RankPolicy {
    fn from(r: RankArg) -> Self {
        match r {
            RankArg::Full => RankPolicy::Full,
            RankArg::Deficient => RankPolicy::Deficient,
            RankArg::Random => RankPolicy::Random,
        }
    }
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    ComplexMatrix::from_json_str(&text).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub mode: Mode,
    pub x: ComplexMatrix,
    /// `||AX - C||`.
    pub residual: f64,
}

/// Body of a negative `solve` answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveFailure {
    pub mode: Mode,
    pub error: String,
    /// Present when `A` and `C` are square of the same size.
    pub report: Option<SolvabilityReport>,
    /// Outcome of the oracle's randomized search, positive mode only.
    pub search: Option<String>,
}

fn is_unsolvable(e: &Error) -> bool {
    matches!(
        e,
        Error::NotSolvable { .. } | Error::NotSolvableHermitian { .. } | Error::NotSolvablePositive { .. }
    )
}

pub fn cmd_solve(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    mode: Mode,
    param: Option<&ComplexMatrix>,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let zeros = ComplexMatrix::zeros(a.cols(), c.cols());
    let param = param.unwrap_or(&zeros);
    let solved = match mode {
        Mode::General => douglas::general_solution(a, c, param, tol),
        Mode::Hermitian => douglas::hermitian_solution(a, c, param, tol),
        Mode::Positive => douglas::positive_solution(a, c, param, tol),
    };
    match solved {
        Ok(x) => {
            let residual = (&(a * &x) - c).op_norm();
            Ok(Report::new(Exit::Success, &SolveOutput { mode, x, residual }))
        }
        Err(e) if is_unsolvable(&e) => {
            let square = a.is_square() && a.shape() == c.shape();
            let report = if square {
                Some(douglas::positive_solvability(a, c, tol)?)
            } else {
                None
            };
            let search = (mode == Mode::Positive && square).then(|| {
                match oracle::positive_search(a, c, SEARCH_BUDGET, DEFAULT_SEED) {
                    Some(_) => format!("search found a PSD solution (budget {SEARCH_BUDGET})"),
                    None => format!("no PSD solution found (budget {SEARCH_BUDGET})"),
                }
            });
            let body = SolveFailure {
                mode,
                error: e.to_string(),
                report,
                search,
            };
            Ok(Report::new(Exit::Unsolvable, &body))
        }
        Err(e) => Err(e.into()),
    }
}

/// Exits 0 whenever the inputs parse; the verdict is in the body.
pub fn cmd_check(a: &ComplexMatrix, c: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Report, CliError> {
    let report = douglas::positive_solvability(a, c, tol)?;
    Ok(Report::new(Exit::Success, &report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizeOutput {
    pub finite: bool,
    pub mu_star: Scale,
    /// `||A†C||^2`, when `R(C) ⊆ R(A)`.
    pub reduced_norm_squared: Option<f64>,
    /// `|‖D‖² − mu*| / max(1, mu*)`, when both sides exist.
    pub identity_error: Option<f64>,
}

pub fn cmd_majorize(a: &ComplexMatrix, c: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Report, CliError> {
    let result = matcore::min_majorization_scale(a, c, tol)?;
    let reduced_norm_squared = match douglas::reduced_solution(a, c, tol) {
        Ok(d) => Some(d.op_norm().powi(2)),
        Err(Error::NotSolvable { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let identity_error = match (reduced_norm_squared, result.mu_star) {
        (Some(n2), Scale::Finite(mu)) => Some((n2 - mu).abs() / mu.max(1.0)),
        _ => None,
    };
    let body = MajorizeOutput {
        finite: result.finite,
        mu_star: result.mu_star,
        reduced_norm_squared,
        identity_error,
    };
    Ok(Report::new(Exit::Success, &body))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoprojOutput {
    pub certificate: NonexistenceCertificate,
    /// Largest jump between neighbouring nodes of the pointwise solution.
    pub max_jump: f64,
}

/// The certificate is the answer, so a produced certificate exits 0. The
/// CSV is the pointwise solution `X(t)`, with `t = 0` absent.
pub fn cmd_twoproj(n: usize, csv: Option<&Path>) -> Result<Report, CliError> {
    let grid = Grid::uniform(n)?;
    let certificate = projpair::nonexistence_certificate(grid)?;
    let x = projpair::pointwise_solution(grid);
    let body = TwoprojOutput {
        certificate,
        max_jump: x.max_jump(),
    };
    let mut report = Report::new(Exit::Success, &body);
    if let Some(path) = csv {
        report.csv.push((path.to_owned(), x.to_csv()));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbOutput {
    pub eps_requested: f64,
    pub eps: f64,
    pub eps_node: usize,
    /// Grid sup of `||Q(t) - Q'(t)||`.
    pub distance: f64,
    /// Max over the grid of `||(P + Q')^{1/2} X - P||`.
    pub residual_max: f64,
    /// Whether `X` is diagonal at both endpoints.
    pub membership: bool,
}

/// Exits 0 when `X` lies in the algebra and solves the perturbed equation
/// to within [`PERTURB_RESIDUAL_MAX`], 2 otherwise.
pub fn cmd_perturb(
    n: usize,
    eps: f64,
    csv_q: Option<&Path>,
    csv_x: Option<&Path>,
    tol: &ToleranceConfig,
) -> Result<Report, CliError> {
    let grid = Grid::uniform(n)?;
    let pert = projpair::perturb_q(grid, eps)?;
    let x = projpair::perturbed_solution(grid, eps)?;
    let (p, _) = projpair::canonical_pair(grid);
    let residual_max = projpair::equation_residuals(&p, &pert.q, &x, tol)?
        .into_iter()
        .fold(0.0, f64::max);
    let membership = projpair::algebra_membership(&x, tol);
    let body = PerturbOutput {
        eps_requested: pert.eps_requested,
        eps: pert.eps,
        eps_node: pert.eps_node,
        distance: pert.distance,
        residual_max,
        membership,
    };
    let exit = if membership && residual_max < PERTURB_RESIDUAL_MAX {
        Exit::Success
    } else {
        Exit::Unsolvable
    };
    let mut report = Report::new(exit, &body);
    if let Some(path) = csv_q {
        report.csv.push((path.to_owned(), pert.q.to_csv()));
    }
    if let Some(path) = csv_x {
        report.csv.push((path.to_owned(), x.to_csv()));
    }
    Ok(report)
}

/// Exits 0 iff no property was violated.
pub fn cmd_verify(spec: &TrialSpec, tol: &ToleranceConfig) -> Report {
    let report: VerifyReport = verify::run_verify(spec, tol);
    let exit = if report.passed() {
        Exit::Success
    } else {
        Exit::Unsolvable
    };
    Report::new(exit, &report)
}

/// Runs a parsed command without touching stdout or the output file.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let tol = cli.global.tolerances()?;
    match &cli.command {
        Command::Solve { pair, mode, y, z } => {
            let (a, c) = (read_matrix(&pair.a)?, read_matrix(&pair.c)?);
            let param = match (mode, y, z) {
                (Mode::Positive, _, Some(path)) | (Mode::General | Mode::Hermitian, Some(path), _) => {
                    Some(read_matrix(path)?)
                }
                (Mode::Positive, Some(_), None) => {
                    return Err(Error::PreconditionFailed("positive mode takes --z, not --y".into()).into())
                }
                (_, None, Some(_)) => {
                    return Err(Error::PreconditionFailed(
                        "--z applies to positive mode only; use --y".into(),
                    )
                    .into())
                }
                _ => None,
            };
            cmd_solve(&a, &c, *mode, param.as_ref(), &tol)
        }
        Command::Check { pair } => cmd_check(&read_matrix(&pair.a)?, &read_matrix(&pair.c)?, &tol),
        Command::Majorize { pair } => cmd_majorize(&read_matrix(&pair.a)?, &read_matrix(&pair.c)?, &tol),
        Command::Twoproj { n, csv } => cmd_twoproj(*n, csv.as_deref()),
        Command::Perturb { n, eps, csv_q, csv_x } => {
            cmd_perturb(*n, *eps, csv_q.as_deref(), csv_x.as_deref(), &tol)
        }
        Command::Verify {
            trials,
            seed,
            min_dim,
            max_dim,
            rank_policy,
        } => {
            let spec = TrialSpec::new(*min_dim, *max_dim, (*rank_policy).into(), *trials, *seed)?;
            Ok(cmd_verify(&spec, &tol))
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    for (path, contents) in &report.csv {
        write_file(path, contents)?;
    }
    match out {
        Some(path) => write_file(path, &report.json),
        None => std::io::stdout()
            .write_all(report.json.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

/// Full process behaviour: parse, run, write, and map to an exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Exit::InputError.into()
            } else {
                Exit::Success.into()
            };
        }
    };
    let outcome = execute(&cli).and_then(|report| {
        emit(&report, cli.global.out.as_deref())?;
        Ok(report.exit)
    });
    match outcome {
        Ok(exit) => exit.into(),
        Err(e) => {
            eprintln!("axc: {e}");
            Exit::InputError.into()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use axc_core::douglas::Verdict;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn rank_one_pair() -> (ComplexMatrix, ComplexMatrix) {
        (real(&[&[1.0, 0.0], &[0.0, 0.0]]), real(&[&[2.0, 1.0], &[0.0, 0.0]]))
    }

    fn three_by_three_pair() -> (ComplexMatrix, ComplexMatrix) {
        (
            ComplexMatrix::from_diagonal(&[1.0, 1.0, 0.0]),
            real(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]),
        )
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn positive_solve_returns_x_zero() {
        let (a, c) = rank_one_pair();
        let r = cmd_solve(&a, &c, Mode::Positive, None, &tol()).unwrap();
        assert_eq!(r.exit, Exit::Success);
        let out: SolveOutput = serde_json::from_str(&r.json).unwrap();
        assert!(out.x.max_abs_diff(&real(&[&[2.0, 1.0], &[1.0, 0.5]])) < 1e-12);
    }

    #[test]
    fn general_solve_defaults_to_reduced_solution() {
        let (a, c) = rank_one_pair();
        let r = cmd_solve(&a, &c, Mode::General, None, &tol()).unwrap();
        let out: SolveOutput = serde_json::from_str(&r.json).unwrap();
        assert!(out.x.max_abs_diff(&c) < 1e-12);
        assert!(out.residual < 1e-12);
    }

    #[test]
    fn positive_solve_without_solution_carries_certificate() {
        let (a, c) = three_by_three_pair();
        let r = cmd_solve(&a, &c, Mode::Positive, None, &tol()).unwrap();
        assert_eq!(r.exit, Exit::Unsolvable);
        let out: SolveFailure = serde_json::from_str(&r.json).unwrap();
        let report = out.report.unwrap();
        assert_eq!(report.dp_range_eq, Some(false));
        assert_eq!(report.verdict, Verdict::SolvableHermitian);
        assert_eq!(out.search.as_deref(), Some("no PSD solution found (budget 10000)"));
    }

    #[test]
    fn bad_parameter_is_an_input_error() {
        let (a, c) = rank_one_pair();
        let z = ComplexMatrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(
            cmd_solve(&a, &c, Mode::Positive, Some(&z), &tol()),
            Err(CliError::Core(Error::ParameterNotPsd { .. }))
        ));
    }

    #[test]
    fn check_reports_t_min_and_verdict() {
        let (a, c) = rank_one_pair();
        let r = cmd_check(&a, &c, &tol()).unwrap();
        let report: SolvabilityReport = serde_json::from_str(&r.json).unwrap();
        assert_eq!(report.verdict, Verdict::SolvablePositive);
        assert!((report.t_min.unwrap().value().unwrap() - 2.5).abs() < 1e-12);

        let zero = ComplexMatrix::zeros(2, 2);
        let r = cmd_check(&a, &zero, &tol()).unwrap();
        let report: SolvabilityReport = serde_json::from_str(&r.json).unwrap();
        assert_eq!(report.t_min, Some(Scale::Finite(0.0)));
    }

    #[test]
    fn majorize_examples() {
        let (a, c) = rank_one_pair();
        let out: MajorizeOutput =
            serde_json::from_str(&cmd_majorize(&a, &c, &tol()).unwrap().json).unwrap();
        assert!((out.mu_star.value().unwrap() - 5.0).abs() < 1e-12);
        assert!((out.reduced_norm_squared.unwrap() - 5.0).abs() < 1e-12);

        let a = real(&[&[1.0, 2.0], &[0.0, 1.0]]);
        let out: MajorizeOutput =
            serde_json::from_str(&cmd_majorize(&a, &a, &tol()).unwrap().json).unwrap();
        assert!((out.mu_star.value().unwrap() - 1.0).abs() < 1e-12);

        let a = ComplexMatrix::from_diagonal(&[1.0, 0.0]);
        let c = ComplexMatrix::from_diagonal(&[0.0, 1.0]);
        let out: MajorizeOutput =
            serde_json::from_str(&cmd_majorize(&a, &c, &tol()).unwrap().json).unwrap();
        assert!(!out.finite);
        assert_eq!(out.reduced_norm_squared, None);
    }

    #[test]
    fn twoproj_gap_and_grid_floor() {
        let out: TwoprojOutput = serde_json::from_str(&cmd_twoproj(100, None).unwrap().json).unwrap();
        assert!(out.certificate.gap >= 0.69);
        assert!(matches!(
            cmd_twoproj(50, None),
            Err(CliError::Core(Error::BadGridSize { .. }))
        ));
    }

    #[test]
    fn perturb_distance_shrinks_with_eps() {
        let run = |eps| -> PerturbOutput {
            let r = cmd_perturb(1000, eps, None, None, &tol()).unwrap();
            assert_eq!(r.exit, Exit::Success);
            serde_json::from_str(&r.json).unwrap()
        };
        let wide = run(0.1);
        assert!((wide.distance - 0.156).abs() < 5e-3);
        assert!(run(0.05).distance < wide.distance);
        assert!(run(0.9999).distance > 0.9);
        assert!(matches!(
            cmd_perturb(1000, 1.0, None, None, &tol()),
            Err(CliError::Core(Error::BadEpsilon(_)))
        ));
    }

    #[test]
    fn verify_scalar_run_passes() {
        let spec = TrialSpec::new(1, 1, RankPolicy::Random, 24, 5).unwrap();
        assert_eq!(cmd_verify(&spec, &tol()).exit, Exit::Success);
    }

    #[test]
    fn default_flags_match_default_tolerances() {
        let cli = Cli::try_parse_from(["axc", "twoproj"]).unwrap();
        assert_eq!(cli.global.tolerances().unwrap(), ToleranceConfig::default());
    }

    #[test]
    fn tolerance_flags_are_validated() {
        let cli = Cli::try_parse_from(["axc", "twoproj", "--rank-rtol=-1"]).unwrap();
        assert!(matches!(execute(&cli), Err(CliError::Core(Error::InvalidTolerance(_)))));
        assert!(Cli::try_parse_from(["axc", "twoproj", "--bogus"]).is_err());
    }
}
