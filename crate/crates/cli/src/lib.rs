//! Command-line front end: loads operator files, dispatches to the library
//! and emits a JSON (or plain text) report.

pub mod io;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use entnorm::criteria::{detect_schmidt_number, weak_realignment};
use entnorm::dualnorms::{self, OracleConfig, SnVerdict};
use entnorm::interval::Method;
use entnorm::kyfan::{k2_dual, k2_norm};
use entnorm::linalg::{self, BipartiteOperator};
use entnorm::schmidt::{self, PureState, DEFAULT_RANK_TOL};
use entnorm::sknorm::{self, BlockVerdict, SeeSawOptions};
use entnorm::states::{self, EnsembleKind, EnsembleSpec, Generated};
use entnorm::symmetry::invariance_suite;
use entnorm::Error;

use io::{FileError, FileKind, Loaded, LoadedFile};
use report::{InputDigest, Report, ResultBody, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "entnorm", version, about = "Schmidt-rank entanglement norms, bounds and certificates")]
pub struct Cli {
    /// Margin for detections and certificates.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// See-saw restarts.
    #[arg(long, global = true, default_value_t = 32)]
    pub restarts: usize,
    /// See-saw iteration cap per restart.
    #[arg(long = "max-iter", global = true, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report destination (for `gen`, the generated operator file).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with code 3 when a verdict is undecided.
    #[arg(long = "require-decision", global = true)]
    pub require_decision: bool,
    /// Makes every SVD and eigensolver call fail.
    #[arg(long = "force-kernel-failure", global = true, hide = true)]
    pub force_kernel_failure: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Sk,
    Gamma,
    Radius,
    Robustness,
    K2,
    K2dual,
    SkDualVec,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schmidt coefficients and rank of a state vector.
    Schmidt { file: PathBuf },
    /// Value or certified interval of one norm.
    Norm {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Realignment test for Schmidt number greater than k.
    Detect {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        filter: bool,
        #[arg(long)]
        weak: bool,
        file: PathBuf,
    },
    /// k-block positivity of a Hermitian operator.
    Blockpos {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Best structured witness for the projective tensor norm.
    Witness {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Linear-program upper bound on the projective tensor norm.
    Oracle {
        #[arg(long)]
        k: usize,
        /// Random generators (default 4·(mn)²).
        #[arg(long)]
        budget: Option<usize>,
        file: PathBuf,
    },
    /// Compare 2γ,k − 1 with the robustness interval of a pure state.
    ProbeConjecture {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Decide whether a density has Schmidt number at most k.
    Certify {
        #[arg(long)]
        k: usize,
        /// Also run the decomposition linear program.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        budget: Option<usize>,
        file: PathBuf,
    },
    /// Write a seeded random state or density to `--out`.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Invariance checks under local unitaries, swap, conjugation and partial transpose.
    Invariance {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

/// What a run printed and how it ended.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Input(e.0)
    }
}

struct Ctx {
    opts: SeeSawOptions,
    tol: f64,
    inputs: Vec<InputDigest>,
    warnings: Vec<String>,
    undecided: bool,
}

impl Ctx {
    fn load(&mut self, path: &Path) -> Result<LoadedFile, Failure> {
        let f = io::load_operator(path)?;
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: f.sha256.clone() });
        self.warnings.extend(f.warnings.iter().map(|w| format!("{}: {w}", path.display())));
        Ok(f)
    }

    /// State inputs become their projectors.
    fn load_op(&mut self, path: &Path) -> Result<BipartiteOperator, Failure> {
        Ok(match self.load(path)?.value {
            Loaded::State(v) => v.projector(),
            Loaded::Operator { op, .. } => op,
        })
    }

    fn load_state(&mut self, path: &Path) -> Result<PureState, Failure> {
        match self.load(path)?.value {
            Loaded::State(v) => Ok(v),
            Loaded::Operator { .. } => Err(Failure::Input(format!("{}: expected a state_vector file", path.display()))),
        }
    }

    /// A density matrix, renormalizing (with a warning) files whose trace or
    /// norm is off by no more than the load tolerance.
    fn load_density(&mut self, path: &Path) -> Result<BipartiteOperator, Failure> {
        let op = match self.load(path)?.value {
            Loaded::State(v) => {
                let norm = v.norm();
                if !io::within_load_tol((norm - 1.0).abs()) {
                    return Err(Failure::Input(format!("{}: state norm {norm} is not 1", path.display())));
                }
                PureState::normalized_from(v.amplitudes().clone(), v.dim_a(), v.dim_b())?.projector()
            }
            Loaded::Operator { op, .. } => {
                let tr = op.trace();
                let gap = (tr.re - 1.0).abs().max(tr.im.abs());
                if gap > io::DENSITY_QUIET_TOL && io::within_load_tol(gap) && op.is_hermitian() {
                    self.warnings.push(format!("{}: trace renormalized from {}", path.display(), tr.re));
                    op.symmetrized().scaled(1.0 / tr.re)
                } else {
                    op
                }
            }
        };
        op.require_density(io::DENSITY_QUIET_TOL)?;
        Ok(op)
    }
}

fn default_budget(op: &BipartiteOperator) -> usize {
    4 * op.side() * op.side()
}

fn interval(norm: &str, iv: entnorm::interval::NormInterval) -> ResultBody {
    ResultBody::Interval {
        norm: norm.to_string(),
        lower: iv.lower,
        upper: iv.upper,
        lower_method: iv.lower_method,
        upper_method: iv.upper_method,
        exact: iv.exact,
        width: iv.width(),
    }
}

fn scalar(norm: &str, value: f64) -> ResultBody {
    ResultBody::Scalar { norm: norm.to_string(), value, method: Method::ExactFormula }
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Result<(Option<usize>, ResultBody), Failure> {
    let opts = ctx.opts;
    Ok(match &cli.command {
        Command::Schmidt { file } => {
            let v = ctx.load_state(file)?;
            let coefficients = schmidt::schmidt_coefficients(&v)?;
            let rank = schmidt::schmidt_rank(&v, DEFAULT_RANK_TOL)?;
            (None, ResultBody::Schmidt { dims: [v.dim_a(), v.dim_b()], coefficients, rank, norm: v.norm() })
        }
        Command::Norm { which, k, file } => {
            let k = *k;
            let body = match which {
                Which::Sk => interval("sk", sknorm::sk_bounds(&ctx.load_op(file)?, k, &opts)?),
                Which::Gamma => interval("gamma", dualnorms::gamma_bounds(&ctx.load_op(file)?, k)?),
                Which::Radius => interval("radius", sknorm::prod_radius_bounds(&ctx.load_op(file)?, k, &opts)?),
                Which::Robustness => {
                    let an = dualnorms::robustness_analysis(&ctx.load_op(file)?, k)?;
                    let (e_lower, e_upper) = an.entanglement_robustness();
                    let iv = an.interval;
                    ResultBody::Robustness {
                        lower: iv.lower,
                        upper: iv.upper,
                        lower_method: iv.lower_method,
                        upper_method: iv.upper_method,
                        exact: iv.exact,
                        e_lower,
                        e_upper,
                    }
                }
                Which::K2 | Which::K2dual => {
                    let mat = match ctx.load(file)?.value {
                        Loaded::State(v) => v.coefficient_matrix(),
                        Loaded::Operator { op, .. } => op.into_mat(),
                    };
                    if *which == Which::K2 {
                        scalar("k2", k2_norm(&mat, k)?)
                    } else {
                        scalar("k2dual", k2_dual(&mat, k)?)
                    }
                }
                Which::SkDualVec => scalar("sk_dual_vec", schmidt::s_k_dual(&ctx.load_state(file)?, k)?),
            };
            (Some(k), body)
        }
        Command::Detect { k, filter, weak, file } => {
            let rho = ctx.load_density(file)?;
            let rep = if *weak {
                weak_realignment(&rho, *k, ctx.tol)?
            } else {
                detect_schmidt_number(&rho, *k, *filter, ctx.tol)?
            };
            (Some(*k), ResultBody::Detection(rep))
        }
        Command::Blockpos { k, file } => {
            let y = ctx.load_op(file)?;
            let bp = sknorm::block_positivity_check(&y, *k, &opts)?;
            ctx.undecided = bp.verdict == BlockVerdict::Undecided;
            let witness = bp.witness.as_ref().map(|v| io::state_file(v, Default::default()).data);
            (
                Some(*k),
                ResultBody::BlockPositivity {
                    verdict: bp.verdict,
                    c: bp.c,
                    lower: bp.interval.lower,
                    upper: bp.interval.upper,
                    witness_value: bp.witness_value,
                    witness,
                    tol: bp.tol,
                },
            )
        }
        Command::Witness { k, file } => {
            let x = ctx.load_op(file)?;
            let w = dualnorms::gamma_witness(&x, *k)?
                .ok_or_else(|| Failure::Lib(Error::DegenerateInput("no witness for the zero operator".into())))?;
            (
                Some(*k),
                ResultBody::Witness {
                    label: w.label.to_string(),
                    target: w.target,
                    pairing: w.pairing,
                    dual_upper: w.dual_upper,
                    lower_bound: w.lower_bound(),
                    operator: io::matrix_data(w.w.mat()),
                },
            )
        }
        Command::Oracle { k, budget, file } => {
            let x = ctx.load_op(file)?;
            let budget = budget.unwrap_or_else(|| default_budget(&x));
            let res = dualnorms::decomposition_oracle(&x, *k, budget, opts.seed)?;
            (
                Some(*k),
                ResultBody::Oracle {
                    upper: res.upper,
                    lp_value: res.lp_value,
                    terms: res.decomposition.coefficients.len(),
                    residual: res.decomposition.residual,
                    generators_tried: res.generators_tried,
                    retried: res.retried,
                    budget,
                },
            )
        }
        Command::ProbeConjecture { k, file } => {
            let v = ctx.load_state(file)?;
            (Some(*k), ResultBody::Conjecture(dualnorms::conjecture_probe(&v, *k)?))
        }
        Command::Certify { k, oracle, budget, file } => {
            let rho = ctx.load_density(file)?;
            let cfg = oracle.then(|| OracleConfig { budget: budget.unwrap_or_else(|| default_budget(&rho)), seed: opts.seed });
            let cert = dualnorms::sn_certify(&rho, *k, cfg, ctx.tol)?;
            ctx.undecided = cert.verdict == SnVerdict::Undecided;
            let evidence = match &cert.evidence {
                dualnorms::SnEvidence::Eigen(_) => "eigen_decomposition",
                dualnorms::SnEvidence::Oracle(_) => "lp_decomposition",
                dualnorms::SnEvidence::LowerBound { .. } => "lower_bound",
                dualnorms::SnEvidence::None => "none",
            };
            (
                Some(*k),
                ResultBody::Certificate {
                    verdict: cert.verdict,
                    lower: cert.gamma.lower,
                    upper: cert.gamma.upper,
                    lower_method: cert.gamma.lower_method,
                    upper_method: cert.gamma.upper_method,
                    evidence: evidence.to_string(),
                    tol: cert.tol,
                },
            )
        }
        Command::Gen { kind, m, n, k, p, terms, rank } => {
            let kind_v = EnsembleKind::parse(kind).ok_or_else(|| {
                let names: Vec<_> = EnsembleKind::ALL.iter().map(|k| k.name()).collect();
                Failure::Input(format!("unknown kind `{kind}`; expected one of {}", names.join(", ")))
            })?;
            let out = cli.out.as_ref().ok_or_else(|| Failure::Input("gen needs --out FILE".into()))?;
            let spec = EnsembleSpec { kind: kind_v, dim_a: *m, dim_b: *n, k: *k, p: *p, rank: *rank, terms: *terms, seed: opts.seed };
            let mut meta = std::collections::BTreeMap::new();
            meta.insert("kind".to_string(), kind_v.name().to_string());
            meta.insert("seed".to_string(), opts.seed.to_string());
            let file = match states::generate(&spec)? {
                Generated::Pure(v) => io::state_file(&v, meta),
                Generated::Operator(op) => io::operator_file(&op, FileKind::Density, meta),
            };
            let bytes = io::to_json_bytes(&file);
            std::fs::write(out, &bytes).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            (
                *k,
                ResultBody::Generated {
                    kind: kind_v,
                    dims: [*m, *n],
                    file_kind: file.kind,
                    path: out.display().to_string(),
                    sha256: io::sha256_hex(&bytes),
                },
            )
        }
        Command::Invariance { k, trials, m, n } => {
            (Some(*k), ResultBody::Invariance(invariance_suite(*k, *trials, opts.seed, *m, *n)?))
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Schmidt { .. } => "schmidt",
        Command::Norm { .. } => "norm",
        Command::Detect { .. } => "detect",
        Command::Blockpos { .. } => "blockpos",
        Command::Witness { .. } => "witness",
        Command::Oracle { .. } => "oracle",
        Command::ProbeConjecture { .. } => "probe-conjecture",
        Command::Certify { .. } => "certify",
        Command::Gen { .. } => "gen",
        Command::Invariance { .. } => "invariance",
    }
}

/// Parses `argv` (program name first) and runs one command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new(), report: None }
                }
                _ => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text, report: None },
            };
        }
    };
    if cli.force_kernel_failure {
        linalg::set_kernel_fault(true);
    }
    let outcome = execute(&cli);
    if cli.force_kernel_failure {
        linalg::set_kernel_fault(false);
    }
    outcome
}

fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let opts = SeeSawOptions { restarts: cli.restarts, max_iter: cli.max_iter, seed: cli.seed, ..Default::default() };
    let mut ctx = Ctx { opts, tol: cli.tol, inputs: Vec::new(), warnings: Vec::new(), undecided: false };
    let fail = |code, msg: String| Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n"), report: None };
    if !(cli.tol >= 0.0) {
        return fail(EXIT_INPUT, "--tol must be nonnegative".into());
    }
    let (k, result) = match dispatch(cli, &mut ctx) {
        Ok(r) => r,
        Err(Failure::Input(msg)) => return fail(EXIT_INPUT, msg),
        Err(Failure::Lib(e)) => {
            let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INPUT };
            return fail(code, e.to_string());
        }
    };
    let report = Report {
        command: command_name(&cli.command).to_string(),
        inputs: ctx.inputs,
        k,
        result,
        tolerances: Tolerances {
            tol: cli.tol,
            seesaw_tol: opts.tol,
            restarts: opts.restarts,
            max_iter: opts.max_iter,
        },
        seed: cli.seed,
        warnings: ctx.warnings,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    let rendered = match cli.format {
        Format::Json => report::to_json(&report),
        Format::Text => report::to_text(&report),
    };
    let mut stderr: String = report.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    let mut stdout = String::new();
    let report_path = cli.out.as_ref().filter(|_| !matches!(cli.command, Command::Gen { .. }));
    match report_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                return fail(EXIT_INPUT, format!("{}: {e}", path.display()));
            }
        }
        None => stdout = rendered,
    }
    let code = if cli.require_decision && ctx.undecided {
        stderr.push_str("undecided verdict with --require-decision\n");
        EXIT_UNDECIDED
    } else {
        EXIT_OK
    };
    Outcome { code, stdout, stderr, report: Some(report) }
}
