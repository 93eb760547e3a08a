//! `haarspec` — spectra, distances, oracle suites, scans, and imaginarity
//! experiments with reproducible seeds and machine-readable output.
//!
//! Exit codes: 0 success, 2 precondition/domain violation, 3 resource cap,
//! 4 verification failure. Errors are emitted as JSON on stderr.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use haarspec::applications::{
    copies_to_distinguish, design_epsilon_floor, imaginarity_mean, ks_critical_1pct, ks_statistic,
    sample_imaginarity, tester_copy_lower_bound, BoundParameter, BoundReport, ImaginarityModel,
};
use haarspec::combinatorics::{rat, rat_to_f64};
use haarspec::distances::{
    asymptotic_trace_distance, binary_phase_trace_distance, closed_form_condition,
    closed_form_condition_f64, closed_form_trace_distance, closed_form_trace_distance_f64,
    schatten_distance_real_vs_complex, DistanceReport, Method, PNorm,
};
use haarspec::moments::{
    build_binary_phase_matrix, build_real_moment_matrix, build_sym_projector,
    estimate_moment_operator, Ensemble, RatMatrix,
};
use haarspec::spectra::{binary_phase_spectrum, complex_haar_spectrum, real_haar_spectrum};
use haarspec::verify::{self, VerifyConfig};
use haarspec::{Error, Rat};

/// Problems exceeding this dimension switch the distance command from exact
/// rationals to the log-gamma float path.
const EXACT_DISTANCE_LIMIT: u64 = 10_000;

const SEED_ENV: &str = "HAARSPEC_SEED";

fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0xC0FFEE)
}

#[derive(Parser)]
#[command(name = "haarspec", version, about = "Exact spectra and distances of t-copy Haar moment operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    Real,
    Complex,
    BinaryPhase,
}

impl From<EnsembleArg> for Ensemble {
    fn from(e: EnsembleArg) -> Ensemble {
        match e {
            EnsembleArg::Real => Ensemble::RealHaar,
            EnsembleArg::Complex => Ensemble::ComplexHaar,
            EnsembleArg::BinaryPhase => Ensemble::BinaryPhase,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    SpectralSum,
    ClosedForm,
    Asymptotic,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Exact,
    Montecarlo,
    All,
}

#[derive(Args)]
struct CommonDims {
    /// Hilbert space dimension d (>= 2)
    #[arg(long)]
    d: u64,
    /// Number of copies t (>= 1)
    #[arg(long)]
    t: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the spectrum of a t-copy moment operator as JSON
    Spectrum {
        #[command(flatten)]
        dims: CommonDims,
        #[arg(long, value_enum, default_value = "real")]
        ensemble: EnsembleArg,
    },
    /// Schatten distance between the real (or binary-phase) and complex
    /// moment operators
    Distance {
        #[command(flatten)]
        dims: CommonDims,
        /// Schatten order: a number >= 1 or "inf"
        #[arg(long, default_value = "1")]
        p: String,
        #[arg(long, value_enum, default_value = "real")]
        ensemble: EnsembleArg,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Run the exact-oracle and/or Monte Carlo verification suites
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Densest exact matrix side the exact suite may build
        #[arg(long, default_value_t = 256)]
        max_dim: usize,
        #[arg(long, default_value_t = default_seed())]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 4)]
        workers: u64,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputArg,
    },
    /// Empirical moment matrix vs the exact one: deviation table or summary
    Montecarlo {
        #[command(flatten)]
        dims: CommonDims,
        #[arg(long, value_enum, default_value = "real")]
        ensemble: EnsembleArg,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = default_seed())]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        workers: u64,
        #[arg(long, default_value_t = haarspec::DEFAULT_MATRIX_CAP)]
        max_dim: usize,
        /// Entry tolerance as a multiple of 1/sqrt(samples)
        #[arg(long, default_value_t = 5.0)]
        tolerance_factor: f64,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputArg,
    },
    /// Sample the imaginarity of complex-Haar states and test the power law
    Imaginarity {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = default_seed())]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        workers: u64,
        /// Write raw samples as CSV (one value per line) to this file
        #[arg(long)]
        dump: Option<std::path::PathBuf>,
    },
    /// Design ε floor, distinguishing copy count, or imaginarity-tester bound
    DesignBound {
        #[arg(long)]
        d: u64,
        /// Copies, for the exact ε floor
        #[arg(long)]
        t: Option<u64>,
        /// Target success probability in (1/2, 1) for the copy count
        #[arg(long, conflicts_with = "delta")]
        p: Option<f64>,
        /// Imaginarity threshold for the tester lower bound
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Sweep a (d, t) grid and emit distance rows as CSV
    Scan {
        #[arg(long, default_value_t = 2)]
        d_min: u64,
        #[arg(long)]
        d_max: u64,
        #[arg(long, default_value_t = 1)]
        t_min: u64,
        #[arg(long)]
        t_max: u64,
        #[arg(long, default_value = "1")]
        p: String,
    },
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    kind: &'a str,
    message: String,
    exit: i32,
}

fn fail(err: Error) -> ExitCode {
    let kind = match err {
        Error::Domain(_) => "domain",
        Error::Precondition(_) => "precondition",
        Error::UnsupportedRegime(_) => "unsupported_regime",
        Error::ResourceCap { .. } => "resource_cap",
    };
    let exit = err.exit_code();
    let payload = ErrorJson { kind, message: err.to_string(), exit };
    eprintln!("{}", serde_json::to_string(&payload).unwrap());
    ExitCode::from(exit as u8)
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).unwrap());
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Spectrum { dims, ensemble } => {
            match Ensemble::from(ensemble) {
                Ensemble::RealHaar => emit(&real_haar_spectrum(dims.d, dims.t)?.to_json()),
                Ensemble::ComplexHaar => emit(&complex_haar_spectrum(dims.d, dims.t)?.to_json()),
                Ensemble::BinaryPhase => emit(&binary_phase_spectrum(dims.d, dims.t)?.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Distance { dims, p, ensemble, method } => {
            let p: PNorm = p.parse()?;
            let report = distance_report(dims.d, dims.t, p, ensemble.into(), method)?;
            emit(&report.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, max_dim, seed, samples, workers, output } => {
            let cfg = VerifyConfig { max_dim, seed, mc_samples: samples, workers };
            let (exact, mc) = match suite {
                SuiteArg::Exact => (true, false),
                SuiteArg::Montecarlo => (false, true),
                SuiteArg::All => (true, true),
            };
            let outcomes = verify::run(&cfg, exact, mc);
            let all_passed = outcomes.iter().all(|o| o.passed);
            match output {
                OutputArg::Json => emit(&outcomes),
                OutputArg::Csv => {
                    println!("name,passed,detail");
                    for o in &outcomes {
                        println!("{},{},{}", o.name, o.passed, o.detail.replace(',', ";"));
                    }
                }
            }
            for o in &outcomes {
                eprintln!("{} {} — {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
            }
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(4) })
        }
        Command::Montecarlo {
            dims,
            ensemble,
            samples,
            seed,
            workers,
            max_dim,
            tolerance_factor,
            output,
        } => {
            let ens = Ensemble::from(ensemble);
            let exact = exact_moment_matrix(dims.d, dims.t, ens, max_dim)?;
            let est =
                estimate_moment_operator(dims.d, dims.t, samples, seed, workers, ens, max_dim)?;
            let tolerance = tolerance_factor / (samples as f64).sqrt();
            let deviation = est.max_abs_deviation(&exact);
            let within = deviation <= tolerance;
            match output {
                OutputArg::Json => {
                    #[derive(Serialize)]
                    struct McJson<'a> {
                        d: u64,
                        t: u64,
                        ensemble: &'a str,
                        samples: u64,
                        seed: u64,
                        workers: u64,
                        rng: &'a str,
                        max_abs_deviation: f64,
                        tolerance: f64,
                        within_tolerance: bool,
                    }
                    emit(&McJson {
                        d: dims.d,
                        t: dims.t,
                        ensemble: ens.name(),
                        samples,
                        seed,
                        workers,
                        rng: haarspec::RNG_ALGORITHM,
                        max_abs_deviation: deviation,
                        tolerance,
                        within_tolerance: within,
                    });
                }
                OutputArg::Csv => {
                    let out = std::io::stdout();
                    let mut w = out.lock();
                    writeln!(w, "row,col,exact,empirical,abs_dev").unwrap();
                    for i in 0..est.n {
                        for j in 0..est.n {
                            let e = rat_to_f64(exact.at(i, j));
                            let v = est.at(i, j);
                            writeln!(w, "{i},{j},{e},{v},{}", (v - e).abs()).unwrap();
                        }
                    }
                }
            }
            Ok(if within { ExitCode::SUCCESS } else { ExitCode::from(4) })
        }
        Command::Imaginarity { d, samples, seed, workers, dump } => {
            let model = ImaginarityModel::new(d)?;
            let raw = sample_imaginarity(d, samples, seed, workers)?;
            if let Some(path) = dump {
                let mut body = String::with_capacity(raw.len() * 20 + 16);
                body.push_str("imaginarity\n");
                for v in &raw {
                    body.push_str(&format!("{v}\n"));
                }
                std::fs::write(&path, body)
                    .map_err(|e| Error::Precondition(format!("cannot write {path:?}: {e}")))?;
            }
            let mut sorted = raw.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ks = ks_statistic(&sorted, |x| model.cdf(x))?;
            let critical = ks_critical_1pct(sorted.len());
            let mean: f64 = raw.iter().sum::<f64>() / raw.len() as f64;
            let expected = imaginarity_mean(d);
            let sigma = (model.variance() / raw.len() as f64).sqrt();
            let mean_ok = (mean - rat_to_f64(&expected)).abs() <= 4.0 * sigma;
            let ks_ok = ks < critical;
            #[derive(Serialize)]
            struct ImaginarityJson<'a> {
                d: u64,
                samples: u64,
                seed: u64,
                workers: u64,
                rng: &'a str,
                mean: f64,
                expected_mean: [String; 2],
                mean_std_error: f64,
                ks_statistic: f64,
                ks_critical_1pct: f64,
                passes: bool,
            }
            emit(&ImaginarityJson {
                d,
                samples,
                seed,
                workers,
                rng: haarspec::RNG_ALGORITHM,
                mean,
                expected_mean: [expected.numer().to_string(), expected.denom().to_string()],
                mean_std_error: sigma,
                ks_statistic: ks,
                ks_critical_1pct: critical,
                passes: ks_ok && mean_ok,
            });
            Ok(if ks_ok && mean_ok { ExitCode::SUCCESS } else { ExitCode::from(4) })
        }
        Command::DesignBound { d, t, p, delta } => {
            let mut notes = Vec::new();
            let epsilon_floor = match t {
                Some(t) => {
                    notes.push(
                        "epsilon_floor is the exact half trace norm ||rho_R - rho_C||_1/2; any \
                         real-valued t-design has epsilon at least this"
                            .to_string(),
                    );
                    Some(design_epsilon_floor(d, t)?)
                }
                None => None,
            };
            let (parameter, copies) = match (p, delta) {
                (Some(p), None) => {
                    notes.push("copies is an asymptotic estimate from the constant regime".into());
                    (Some(BoundParameter::SuccessProbability(p)), Some(copies_to_distinguish(d, p)?))
                }
                (None, Some(delta)) => {
                    notes.push(
                        "copies is the asymptotic imaginarity-tester lower bound; the proof \
                         threshold delta < 3^(-2/(d-1)) is enforced"
                            .into(),
                    );
                    (
                        Some(BoundParameter::ImaginarityThreshold(delta)),
                        Some(tester_copy_lower_bound(d, delta)?),
                    )
                }
                (None, None) => (None, None),
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            if t.is_none() && parameter.is_none() {
                return Err(Error::Precondition(
                    "design-bound needs --t (epsilon floor), --p (copy count), or --delta \
                     (tester bound)"
                        .into(),
                ));
            }
            let report = BoundReport { d, t, parameter, copies, epsilon_floor, notes };
            emit(&report.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { d_min, d_max, t_min, t_max, p } => {
            let p: PNorm = p.parse()?;
            if d_min < 2 || t_min < 1 || d_max < d_min || t_max < t_min {
                return Err(Error::Precondition("empty or degenerate scan grid".into()));
            }
            let grid: Vec<(u64, u64)> = (d_min..=d_max)
                .flat_map(|d| (t_min..=t_max).map(move |t| (d, t)))
                .collect();
            let rows: Vec<String> = grid
                .par_iter()
                .map(|&(d, t)| {
                    match distance_report(d, t, p, Ensemble::RealHaar, MethodArg::Auto) {
                        Ok(r) => {
                            let (num, den) = r
                                .exact
                                .as_ref()
                                .map(|e| (e.numer().to_string(), e.denom().to_string()))
                                .unwrap_or_default();
                            let regime = r.regime.map(|g| g.name()).unwrap_or("");
                            format!(
                                "{d},{t},{},{num},{den},{},{},{regime}",
                                r.p.label(),
                                r.float,
                                r.method.name()
                            )
                        }
                        Err(e) => format!("{d},{t},{},,,,error: {e},", p.label()),
                    }
                })
                .collect();
            println!("d,t,p,exact_num,exact_den,float,method,regime");
            for row in rows {
                println!("{row}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Exact moment matrix for an ensemble; the complex one is μ times the
/// symmetric projector.
fn exact_moment_matrix(d: u64, t: u64, ensemble: Ensemble, cap: usize) -> Result<RatMatrix, Error> {
    match ensemble {
        Ensemble::RealHaar => build_real_moment_matrix(d, t, cap),
        Ensemble::BinaryPhase => build_binary_phase_matrix(d, t, cap),
        Ensemble::ComplexHaar => {
            let mut pi = build_sym_projector(d, t, cap)?;
            let mu = haarspec::spectra::complex_haar_eigenvalue(d, t);
            for i in 0..pi.n() {
                for j in 0..pi.n() {
                    let v = pi.at(i, j) * &mu;
                    *pi.at_mut(i, j) = v;
                }
            }
            Ok(pi)
        }
    }
}

/// Distance with method auto-selection. When both the spectral sum and the
/// closed form apply they are asserted equal before emission; the closed form
/// never changes the value, only the provenance tag.
fn distance_report(
    d: u64,
    t: u64,
    p: PNorm,
    ensemble: Ensemble,
    method: MethodArg,
) -> Result<DistanceReport, Error> {
    if let Ensemble::BinaryPhase = ensemble {
        if !matches!(p, PNorm::Finite(v) if v == 1.0) {
            return Err(Error::Precondition(
                "binary-phase distances are only available for p = 1".into(),
            ));
        }
        let half = binary_phase_trace_distance(d, t)?;
        let norm: Rat = &half * rat(2, 1);
        let float = rat_to_f64(&norm);
        return Ok(DistanceReport {
            d,
            t,
            p,
            exact: Some(norm),
            float,
            method: Method::ClosedForm,
            regime: None,
        });
    }
    if let Ensemble::ComplexHaar = ensemble {
        return Err(Error::Precondition(
            "distance compares an ensemble against the complex-Haar operator; pick real or \
             binary-phase"
                .into(),
        ));
    }
    let is_p1 = matches!(p, PNorm::Finite(v) if v == 1.0);
    let exact_feasible = d <= EXACT_DISTANCE_LIMIT;
    match method {
        MethodArg::SpectralSum => schatten_distance_real_vs_complex(d, t, p),
        MethodArg::ClosedForm => {
            if !is_p1 {
                return Err(Error::Precondition("the closed form is a p = 1 result".into()));
            }
            if exact_feasible {
                if !closed_form_condition(d, t) {
                    return Err(Error::Precondition(format!(
                        "closed-form condition fails at d = {d}, t = {t}; use the spectral sum"
                    )));
                }
                let mut report = schatten_distance_real_vs_complex(d, t, p)?;
                let closed = closed_form_trace_distance(d, t)?;
                assert_eq!(
                    &closed * rat(2, 1),
                    report.exact.clone().unwrap(),
                    "closed form and spectral sum disagree"
                );
                report.method = Method::ClosedForm;
                Ok(report)
            } else {
                if !closed_form_condition_f64(d, t) {
                    return Err(Error::Precondition(format!(
                        "closed-form condition fails at d = {d}, t = {t}"
                    )));
                }
                Ok(DistanceReport {
                    d,
                    t,
                    p,
                    exact: None,
                    float: 2.0 * closed_form_trace_distance_f64(d, t),
                    method: Method::ClosedForm,
                    regime: None,
                })
            }
        }
        MethodArg::Asymptotic => {
            if !is_p1 {
                return Err(Error::Precondition("asymptotics cover the trace norm only".into()));
            }
            let (value, regime) = asymptotic_trace_distance(d, t)?;
            Ok(DistanceReport {
                d,
                t,
                p,
                exact: None,
                float: 2.0 * value,
                method: Method::Asymptotic,
                regime: Some(regime),
            })
        }
        MethodArg::Auto => {
            if exact_feasible {
                let mut report = schatten_distance_real_vs_complex(d, t, p)?;
                if is_p1 && closed_form_condition(d, t) {
                    let closed = closed_form_trace_distance(d, t)?;
                    assert_eq!(
                        &closed * rat(2, 1),
                        report.exact.clone().unwrap(),
                        "closed form and spectral sum disagree"
                    );
                    report.method = Method::ClosedForm;
                }
                Ok(report)
            } else if is_p1 && closed_form_condition_f64(d, t) {
                Ok(DistanceReport {
                    d,
                    t,
                    p,
                    exact: None,
                    float: 2.0 * closed_form_trace_distance_f64(d, t),
                    method: Method::ClosedForm,
                    regime: None,
                })
            } else if is_p1 {
                let (value, regime) = asymptotic_trace_distance(d, t)?;
                Ok(DistanceReport {
                    d,
                    t,
                    p,
                    exact: None,
                    float: 2.0 * value,
                    method: Method::Asymptotic,
                    regime: Some(regime),
                })
            } else {
                Err(Error::ResourceCap { requested: d.to_usize().unwrap_or(usize::MAX), cap: EXACT_DISTANCE_LIMIT as usize })
            }
        }
    }
}
