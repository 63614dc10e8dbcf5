//! `gaudin-lab`: build operators, run verification suites and compute with
//! spaces of quasi-exponentials.
//!
//! Exit codes: 0 when every check passes, 1 on a violated check, a dependent
//! basis or a numerical failure, 2 on usage errors and invalid inputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use gaudin_lab::combinatorics::Partition;
use gaudin_lab::gaudin::{build_beta, build_t_definitional, build_t_jacobi_trudi, build_t_partial_trace};
use gaudin_lab::quasiexp::{dual_space, limit_family_report, poly_limit_family, QuasiExp, QuasiExpSpace};
use gaudin_lab::suites::{run_suite, Backend, RunConfig, Suite};
use gaudin_lab::{Error, Execution};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gaudin-lab", version, about)]
struct Cli {
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured backend.
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Dump an operator polynomial T_λ(u) or β_λ(u).
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        /// Partition such as "2,1"; overrides the configured one.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Run a verification suite and write its report.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Exact computations on a space file.
    Space {
        #[arg(value_enum)]
        action: SpaceAction,
        /// JSON list of basis functions, each a list of {exponent, coeffs} terms.
        file: PathBuf,
        /// Ambient dimension M for `dual`.
        #[arg(long)]
        m: Option<usize>,
        /// Parameter k for `limit-family`.
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    #[value(name = "T-definitional")]
    TDefinitional,
    #[value(name = "T-trace")]
    TTrace,
    #[value(name = "T-jt")]
    TJt,
    #[value(name = "beta")]
    Beta,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceAction {
    Wronskian,
    Plucker,
    Translate,
    Dual,
    LimitFamily,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        let code = match err.downcast_ref::<Error>() {
            Some(
                Error::IdentityViolation(_)
                | Error::DependentBasis(_)
                | Error::RankDeficient { .. }
                | Error::Genericity(_)
                | Error::Instability(_),
            ) => 1,
            _ => 2,
        };
        Failure { code, err }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        anyhow::Error::new(err).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))
                .map_err(|err| Failure { code: 2, err })?;
            RunConfig::from_json(&text).map_err(|e| Failure { code: 2, err: e.into() })?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(b) = cli.backend {
        cfg.backend = match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        };
    }
    if let Some(out) = &cli.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = load_config(&cli)?;
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match &cli.command {
        Command::Build { kind, lambda } => {
            let lambda: Partition = match lambda {
                Some(s) => s.parse()?,
                None => cfg.lambda.clone(),
            };
            let inst = &cfg.instance;
            let (name, poly) = match kind {
                BuildKind::TDefinitional => ("T-definitional", build_t_definitional(&lambda, inst, exec)?),
                BuildKind::TTrace => ("T-trace", build_t_partial_trace(&lambda, inst, cfg.m, exec)?),
                BuildKind::TJt => ("T-jt", build_t_jacobi_trudi(&lambda, inst, exec)?),
                BuildKind::Beta => ("beta", build_beta(&lambda, inst)?),
            };
            let coeffs = match cfg.backend {
                Backend::Exact => poly.to_dump(),
                Backend::Float => poly.to_float().to_dump(),
            };
            let doc = json!({
                "kind": name,
                "lambda": lambda,
                "instance": inst,
                "backend": cfg.backend,
                "factors": poly.factors(),
                "degree": poly.degree(),
                "coefficients": coeffs,
            });
            write_output(&cfg, &doc, &format!("built {name} for λ = {lambda}, {} coefficients", poly.coeffs().len()))?;
            Ok(0)
        }
        Command::Verify { suite } => {
            let mut report = run_suite(*suite, &cfg, exec)?;
            if cfg.backend == Backend::Float && suite.is_exact() {
                report.warn(format!("backend float ignored: suite {suite} is decided in exact arithmetic"));
            }
            // the output path is left out so reports do not depend on where they are written
            let echoed = RunConfig { output: None, ..cfg.clone() };
            let doc = json!({
                "suite": suite.name(),
                "seed": cfg.seed,
                "backend": cfg.backend,
                "config": echoed,
                "passed": report.passed(),
                "report": report,
            });
            write_output(&cfg, &doc, &report.summary())?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Space { action, file, m, k } => {
            let v = load_space(file)?;
            let (doc, summary, code) = space_action(*action, &v, &cfg, *m, *k)?;
            write_output(&cfg, &doc, &summary)?;
            Ok(code)
        }
    }
}

fn load_space(path: &Path) -> Result<QuasiExpSpace, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading space file {}", path.display()))
        .map_err(|err| Failure { code: 2, err })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure { code: 2, err: e.into() })?;
    Ok(QuasiExpSpace::from_dump(&value)?)
}

fn space_action(
    action: SpaceAction,
    v: &QuasiExpSpace,
    cfg: &RunConfig,
    m: Option<usize>,
    k: usize,
) -> Result<(Value, String, u8), Failure> {
    Ok(match action {
        SpaceAction::Wronskian => {
            let w = v.wronskian();
            let text = format_function(&w.function);
            let doc = json!({
                "wronskian": text,
                "terms": w.function.to_dump(),
                "exponent": w.exponent.as_ref().map(|c| c.to_string()),
                "degree": w.degree(),
            });
            (doc, text, 0)
        }
        SpaceAction::Plucker => {
            let p = v.plucker_vector(&cfg.t, cfg.bound);
            let doc = json!({
                "t": cfg.t.to_string(),
                "bound": cfg.bound,
                "plucker": p.to_dump(|x| Value::String(x.to_string())),
            });
            let nonzero = p.values().filter(|x| !num_traits::Zero::is_zero(*x)).count();
            (doc, format!("{} coordinates, {nonzero} nonzero", p.entries().len()), 0)
        }
        SpaceAction::Translate => {
            let doc = json!({ "t": cfg.t.to_string(), "space": v.translate(&cfg.t).to_dump() });
            (doc, format!("translated by {}", cfg.t), 0)
        }
        SpaceAction::Dual => {
            let top =
                v.basis().iter().filter_map(|f| f.as_rational_polynomial().and_then(|p| p.degree())).max().unwrap_or(0);
            let m = m.unwrap_or((top + 1).max(v.dim() + 1));
            let d = dual_space(v, m)?;
            let doc = json!({ "M": m, "space": d.to_dump() });
            (doc, format!("dual in degree < {m} has dimension {}", d.dim()), 0)
        }
        SpaceAction::LimitFamily => {
            let vk = poly_limit_family(v, k)?;
            let report = limit_family_report(v, k)?;
            let code = if report.passed() { 0 } else { 1 };
            let doc = json!({ "k": k, "space": vk.to_dump(), "report": report });
            (doc, report.summary(), code)
        }
    })
}

/// `"2"`, `"(1 + 2u)·exp(3u)"` and so on.
fn format_function(f: &QuasiExp) -> String {
    if num_traits::Zero::is_zero(f) {
        return "0".into();
    }
    let parts: Vec<String> = f
        .terms()
        .iter()
        .map(|(c, p)| {
            let poly: Vec<String> = p
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, a)| !num_traits::Zero::is_zero(*a))
                .map(|(i, a)| match i {
                    0 => format!("{a}"),
                    1 => format!("({a})u"),
                    _ => format!("({a})u^{i}"),
                })
                .collect();
            let poly = if poly.len() == 1 && p.degree() == Some(0) { poly[0].clone() } else { poly.join(" + ") };
            if num_traits::Zero::is_zero(c) {
                poly
            } else {
                format!("[{poly}]·exp({c}u)")
            }
        })
        .collect();
    parts.join(" + ")
}

fn write_output(cfg: &RunConfig, doc: &Value, summary: &str) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| Failure { code: 2, err: e.into() })? + "\n";
    match &cfg.output {
        Some(path) => {
            fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))
                .map_err(|err| Failure { code: 2, err })?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}
