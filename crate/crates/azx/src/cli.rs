//! The `zx` command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use azx_core::bp::{
    diagrammatic_report, monte_carlo_report, sim9_bound, sim9_bound_check, Ansatz, PauliHamiltonian,
    VarianceMethod, VarianceReport,
};
use azx_core::diff::{differentiate, differentiate_at, finite_difference};
use azx_core::integrate::{integrate_eval, integrate_uniform, quadrature_oracle};
use azx_core::label::{Binding, FuncRegistry, Param};
use azx_core::rules::{catalog, check_rule, RuleFamily, RuleReport};
use azx_core::{evaluate, Diagram, ZxError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::circuit::parse_circuit;
use crate::json::{diagram_to_string, parse_diagram, tensor_to_value, ParseError};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "zx", about = "Algebraic ZX-calculus: evaluate, differentiate and average diagrams")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Emit machine-readable JSON reports
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for sampling loops [default: available parallelism]
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Random seed [default: $ZX_SEED, else 42]
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,
    /// Include wall-clock timings in reports
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a diagram to a matrix
    Eval {
        diagram: PathBuf,
        /// Parameter value, as NAME=VALUE (repeatable)
        #[arg(long = "bind", value_name = "NAME=VALUE")]
        binds: Vec<String>,
        /// Write the matrix here instead of standard output
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Build the derivative diagram with respect to a parameter
    Diff {
        diagram: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Compare the derivative diagram with central finite differences
    GradCheck {
        diagram: PathBuf,
        #[arg(long)]
        param: String,
        /// Number of random parameter points
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Finite-difference step
        #[arg(long, default_value_t = 1e-5)]
        step: f64,
        /// Largest allowed entrywise deviation
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Average a diagram over a uniformly distributed phase parameter
    Integrate {
        diagram: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Compare the averaged diagram with trapezoidal quadrature
    IntCheck {
        diagram: PathBuf,
        #[arg(long)]
        param: String,
        /// Quadrature nodes
        #[arg(long, default_value_t = 1024)]
        nodes: usize,
        /// Number of random points for the remaining parameters
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Variance of the cost gradient of a circuit
    Variance {
        circuit: PathBuf,
        /// Observable, e.g. `ZZ` or `0.5*XZ - IY` [default: Z on every qubit]
        #[arg(long, value_name = "PAULIS")]
        ham: Option<String>,
        /// Parameter to report (repeatable) [default: all]
        #[arg(long = "param", value_name = "NAME")]
        params: Vec<String>,
        /// Estimate by Monte Carlo with this many samples instead of diagrammatically
        #[arg(long, value_name = "SAMPLES")]
        mc: Option<usize>,
    },
    /// Gradient variances of a standard ansatz across qubit counts, as CSV
    BpScan {
        #[arg(long, value_enum, default_value_t = AnsatzName::Sim9)]
        ansatz: AnsatzName,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Largest qubit count accepted
        #[arg(long, default_value_t = 8)]
        max_qubits: usize,
    },
    /// Check every rewrite rule by evaluating both sides
    VerifyRules {
        /// Check only the named rule (repeatable)
        #[arg(long, value_name = "NAME")]
        only: Vec<String>,
        /// Label assignments per rule
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnsatzName {
    Sim9,
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(ZxError),
}

impl From<ZxError> for Failure {
    fn from(e: ZxError) -> Self {
        Failure::Core(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Ctx {
    global: GlobalOpts,
    seed: u64,
    out: String,
    passed: bool,
}

/// Runs the command line `args` (program name first). `env_seed` is the value of `ZX_SEED`.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let seed = match (cli.global.seed, env_seed) {
        (Some(s), _) => s,
        (None, Some(v)) => match v.trim().parse() {
            Ok(s) => s,
            Err(_) => return usage(format!("ZX_SEED must be an unsigned integer, found `{v}`")),
        },
        (None, None) => DEFAULT_SEED,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return usage("--threads must be at least 1".into());
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return usage(format!("cannot start worker threads: {e}")),
    };
    let mut ctx = Ctx {
        global: cli.global,
        seed,
        out: String::new(),
        passed: true,
    };
    let result = pool.install(|| dispatch(&mut ctx, cli.command));
    match result {
        Ok(()) => Outcome {
            code: if ctx.passed { 0 } else { 1 },
            stdout: ctx.out,
            stderr: String::new(),
        },
        Err(Failure::Usage(m)) => usage(m),
        Err(Failure::Core(e)) => usage(e.to_string()),
    }
}

fn usage(message: String) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {message}\n"),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    parse_diagram(&read(path)?, &FuncRegistry::with_builtins())
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(ctx: &mut Ctx, text: String, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            ctx.out.push_str(&text);
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn parse_binding(binds: &[String]) -> Result<Binding, Failure> {
    let mut b = Binding::new();
    for raw in binds {
        for item in raw.split(',').filter(|s| !s.is_empty()) {
            let Some((name, value)) = item.split_once('=') else {
                return Err(Failure::Usage(format!("--bind expects NAME=VALUE, found `{item}`")));
            };
            let Some(x) = crate::circuit::parse_angle(value.trim()) else {
                return Err(Failure::Usage(format!("--bind {name}: `{value}` is not a number")));
            };
            b.set(name.trim(), x);
        }
    }
    Ok(b)
}

/// Parameters of a diagram, sorted by name.
fn diagram_params(d: &Diagram) -> Vec<Param> {
    let mut ps: Vec<Param> = d.vertices().filter_map(|(_, k)| k.label()?.param().cloned()).collect();
    ps.sort();
    ps.dedup();
    ps
}

/// `samples` bindings drawn uniformly from `[-pi, pi)` for every parameter, in a fixed order.
fn random_bindings(params: &[Param], samples: usize, seed: u64) -> Vec<Binding> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let mut b = Binding::new();
            for p in params {
                b.set(p.clone(), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
            }
            b
        })
        .collect()
}

fn require_param(d: &Diagram, param: &str) -> Result<(), Failure> {
    if diagram_params(d).iter().any(|p| p.as_str() == param) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("parameter `{param}` does not occur in the diagram")))
    }
}

fn dispatch(ctx: &mut Ctx, cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Eval { diagram, binds, out } => {
            let d = load_diagram(&diagram)?;
            let t = evaluate(&d, &parse_binding(&binds)?)?;
            emit(ctx, pretty(&tensor_to_value(&t)), out.as_deref())
        }
        Command::Diff { diagram, param, out } => {
            let d = load_diagram(&diagram)?;
            require_param(&d, &param)?;
            emit(ctx, diagram_to_string(&differentiate(&d, &param)?), out.as_deref())
        }
        Command::Integrate { diagram, param, out } => {
            let d = load_diagram(&diagram)?;
            require_param(&d, &param)?;
            emit(ctx, diagram_to_string(&integrate_uniform(&d, &param)?), out.as_deref())
        }
        Command::GradCheck { diagram, param, samples, step, tol } => {
            grad_check(ctx, &load_diagram(&diagram)?, &param, samples, step, tol)
        }
        Command::IntCheck { diagram, param, nodes, samples, tol } => {
            int_check(ctx, &load_diagram(&diagram)?, &param, nodes, samples, tol)
        }
        Command::Variance { circuit, ham, params, mc } => {
            let path = circuit.display().to_string();
            let a = parse_circuit(&read(&circuit)?).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            variance(ctx, &a, ham.as_deref(), &params, mc)
        }
        Command::BpScan { ansatz: AnsatzName::Sim9, n_min, n_max, max_qubits } => {
            bp_scan(ctx, n_min, n_max, max_qubits)
        }
        Command::VerifyRules { only, samples } => verify_rules(ctx, &only, samples),
    }
}

fn grad_check(ctx: &mut Ctx, d: &Diagram, param: &str, samples: usize, step: f64, tol: f64) -> Result<(), Failure> {
    require_param(d, param)?;
    let global = match differentiate(d, param) {
        Ok(dd) => Some(dd),
        Err(ZxError::VanishingFunction(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let points = random_bindings(&diagram_params(d), samples, ctx.seed);
    let devs = points
        .par_iter()
        .map(|b| {
            let exact = match &global {
                Some(dd) => evaluate(dd, b)?,
                None => differentiate_at(d, param, b.get(param).expect("drawn"), b)?,
            };
            Ok(exact.max_abs_diff(&finite_difference(d, param, b, step)?))
        })
        .collect::<Result<Vec<f64>, ZxError>>()?;
    let worst = devs.iter().copied().fold(0.0, f64::max);
    let passed = worst <= tol;
    ctx.passed &= passed;
    let report = json!({
        "param": param,
        "samples": samples,
        "seed": ctx.seed,
        "step": step,
        "tolerance": tol,
        "pointwise": global.is_none(),
        "max_abs_diff": worst,
        "passed": passed,
    });
    let text = if ctx.global.json {
        pretty(&report)
    } else {
        format!(
            "grad-check {param}: samples={samples} max_abs_diff={worst:e} tol={tol:e} {}\n",
            verdict(passed)
        )
    };
    emit(ctx, text, None)
}

fn int_check(ctx: &mut Ctx, d: &Diagram, param: &str, nodes: usize, samples: usize, tol: f64) -> Result<(), Failure> {
    require_param(d, param)?;
    let others: Vec<Param> = diagram_params(d).into_iter().filter(|p| p.as_str() != param).collect();
    let points = if others.is_empty() {
        vec![Binding::new()]
    } else {
        random_bindings(&others, samples, ctx.seed)
    };
    let rows = points
        .par_iter()
        .map(|b| {
            let (exact, gadget) = integrate_eval(d, param, b)?;
            Ok((exact.max_abs_diff(&quadrature_oracle(d, param, b, nodes)?), gadget))
        })
        .collect::<Result<Vec<(f64, bool)>, ZxError>>()?;
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let gadget = rows.iter().all(|r| r.1);
    let passed = worst <= tol;
    ctx.passed &= passed;
    let report = json!({
        "param": param,
        "nodes": nodes,
        "samples": points.len(),
        "seed": ctx.seed,
        "tolerance": tol,
        "diagrammatic": gadget,
        "max_abs_diff": worst,
        "passed": passed,
    });
    let text = if ctx.global.json {
        pretty(&report)
    } else {
        let how = if gadget { "gadget" } else { "numeric" };
        format!(
            "int-check {param}: {how} nodes={nodes} samples={} max_abs_diff={worst:e} tol={tol:e} {}\n",
            points.len(),
            verdict(passed)
        )
    };
    emit(ctx, text, None)
}

fn verdict(passed: bool) -> &'static str {
    if passed { "PASS" } else { "FAIL" }
}

fn variance(ctx: &mut Ctx, a: &Ansatz, ham: Option<&str>, params: &[String], mc: Option<usize>) -> Result<(), Failure> {
    let h = match ham {
        Some(s) => PauliHamiltonian::parse(s).map_err(|e| Failure::Usage(format!("--ham: {e}")))?,
        None => PauliHamiltonian::all_z(a.n_qubits()),
    };
    if h.n_qubits() != a.n_qubits() {
        return Err(Failure::Usage(format!(
            "--ham acts on {} qubits but the circuit has {}",
            h.n_qubits(),
            a.n_qubits()
        )));
    }
    let known = a.params();
    let chosen: Vec<Param> = if params.is_empty() { known.clone() } else { params.iter().map(Param::new).collect() };
    for p in &chosen {
        if !known.contains(p) {
            return Err(Failure::Usage(format!("--param: `{p}` is not a circuit parameter")));
        }
    }
    if let Some(s) = mc {
        if s < 100 {
            return Err(Failure::Usage("--mc needs at least 100 samples".into()));
        }
    }
    let start = Instant::now();
    let per_param = chosen
        .par_iter()
        .map(|p| {
            let one = std::slice::from_ref(p);
            match mc {
                Some(s) => monte_carlo_report(a, &h, one, s, ctx.seed),
                None => diagrammatic_report(a, &h, one),
            }
        })
        .collect::<Result<Vec<VarianceReport>, ZxError>>()?;
    let mut report = VarianceReport {
        n_qubits: a.n_qubits(),
        method: match mc {
            Some(samples) => VarianceMethod::MonteCarlo { samples, seed: ctx.seed },
            None => VarianceMethod::Diagrammatic,
        },
        rows: per_param.into_iter().flat_map(|r| r.rows).collect(),
        runtime_secs: None,
    };
    if ctx.global.timing {
        report.runtime_secs = Some(start.elapsed().as_secs_f64());
    }
    let text = if ctx.global.json {
        pretty(&variance_json(&report))
    } else {
        variance_csv(&report)
    };
    emit(ctx, text, None)
}

pub fn variance_json(r: &VarianceReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|p| {
            json!({
                "param": p.param.as_str(),
                "mean": p.mean,
                "variance": p.variance,
                "std_error": p.std_error,
            })
        })
        .collect();
    let mut v = json!({ "n_qubits": r.n_qubits, "rows": rows });
    match &r.method {
        VarianceMethod::Diagrammatic => v["method"] = json!("diagram"),
        VarianceMethod::MonteCarlo { samples, seed } => {
            v["method"] = json!("monte-carlo");
            v["samples"] = json!(samples);
            v["seed"] = json!(seed);
        }
    }
    if let Some(t) = r.runtime_secs {
        v["runtime_secs"] = json!(t);
    }
    v
}

pub fn variance_csv(r: &VarianceReport) -> String {
    let method = match r.method {
        VarianceMethod::Diagrammatic => "diagram",
        VarianceMethod::MonteCarlo { .. } => "monte-carlo",
    };
    let mut s = String::from("param,mean,variance,std_error,method\n");
    for p in &r.rows {
        let se = p.std_error.map(|e| e.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{}", p.param, p.mean, p.variance, se, method);
    }
    if let Some(t) = r.runtime_secs {
        let _ = writeln!(s, "# runtime_secs={t}");
    }
    s
}

fn bp_scan(ctx: &mut Ctx, n_min: usize, n_max: usize, max_qubits: usize) -> Result<(), Failure> {
    if n_min < 2 || n_min > n_max {
        return Err(Failure::Usage(format!("need 2 <= --n-min <= --n-max, found {n_min}..{n_max}")));
    }
    if n_max > max_qubits {
        return Err(Failure::Usage(format!("--n-max {n_max} exceeds --max-qubits {max_qubits}")));
    }
    let start = Instant::now();
    let checks = (n_min..=n_max)
        .into_par_iter()
        .map(sim9_bound_check)
        .collect::<Result<Vec<_>, ZxError>>()?;
    ctx.passed &= checks.iter().all(|c| c.within_bound);
    let mut rows = Vec::new();
    for c in &checks {
        for (j, (_, v)) in c.variances.iter().enumerate() {
            rows.push((c.n, j + 1, *v, sim9_bound(c.n)));
        }
    }
    let text = if ctx.global.json {
        let rs: Vec<Value> = rows
            .iter()
            .map(|(n, j, v, b)| json!({ "n": n, "j": j, "variance": v, "bound": b, "within_bound": *v <= b + 1e-9 }))
            .collect();
        let mut v = json!({ "ansatz": "sim9", "rows": rs });
        if ctx.global.timing {
            v["runtime_secs"] = json!(start.elapsed().as_secs_f64());
        }
        pretty(&v)
    } else {
        let mut s = String::from("n,j,variance,bound\n");
        for (n, j, v, b) in &rows {
            let _ = writeln!(s, "{n},{j},{v},{b}");
        }
        if ctx.global.timing {
            let _ = writeln!(s, "# runtime_secs={}", start.elapsed().as_secs_f64());
        }
        s
    };
    emit(ctx, text, None)
}

fn family(f: RuleFamily) -> &'static str {
    match f {
        RuleFamily::Axiom => "axiom",
        RuleFamily::Lemma => "lemma",
        RuleFamily::Supplementary => "supplementary",
    }
}

fn verify_rules(ctx: &mut Ctx, only: &[String], samples: usize) -> Result<(), Failure> {
    let all = catalog();
    for name in only {
        if !all.iter().any(|r| &r.name == name) {
            return Err(Failure::Usage(format!("--only: no rule named `{name}`")));
        }
    }
    let chosen: Vec<_> = all.into_iter().filter(|r| only.is_empty() || only.contains(&r.name)).collect();
    let start = Instant::now();
    let reports = chosen
        .par_iter()
        .map(|r| check_rule(r, samples, ctx.seed).map(|rep| (family(r.family), rep)))
        .collect::<Result<Vec<(&str, RuleReport)>, ZxError>>()?;
    let failed = reports.iter().filter(|(_, r)| !r.passed).count();
    ctx.passed &= failed == 0;
    let text = if ctx.global.json {
        let rows: Vec<Value> = reports
            .iter()
            .map(|(f, r)| {
                json!({
                    "name": r.name,
                    "family": f,
                    "samples": r.samples,
                    "max_deviation": r.max_deviation,
                    "passed": r.passed,
                })
            })
            .collect();
        let mut v = json!({ "seed": ctx.seed, "rules": rows, "failed": failed });
        if ctx.global.timing {
            v["runtime_secs"] = json!(start.elapsed().as_secs_f64());
        }
        pretty(&v)
    } else {
        let width = reports.iter().map(|(_, r)| r.name.len()).max().unwrap_or(4).max(4);
        let mut s = format!("{:<width$}  {:<13}  {:>7}  {:>13}  result\n", "rule", "family", "samples", "max_dev");
        for (f, r) in &reports {
            let _ = writeln!(
                s,
                "{:<width$}  {:<13}  {:>7}  {:>13.3e}  {}",
                r.name,
                f,
                r.samples,
                r.max_deviation,
                verdict(r.passed)
            );
        }
        let _ = writeln!(s, "{} rules, {} failed", reports.len(), failed);
        if ctx.global.timing {
            let _ = writeln!(s, "runtime_secs={}", start.elapsed().as_secs_f64());
        }
        s
    };
    emit(ctx, text, None)
}
