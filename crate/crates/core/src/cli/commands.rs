//! Subcommands. Checks print a JSON list of reports; computations print a
//! JSON object with the resulting expressions.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser as ClapParser, Subcommand, ValueEnum};
use serde_json::json;

use super::config::Settings;
use super::parser::SystemFile;
use crate::corpus::{default_dir, run_corpus};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::finder::{find_characteristics, find_cosymmetries, AnsatzBasis};
use crate::jet::Characteristic;
use crate::numeval::{
    critical_point_check, functional_drift, integrate_mol, GridState, MolOptions, NumericConfig,
};
use crate::systems::{
    check_adjoint_symmetry, check_characteristic, check_conservation_law, check_cosymmetry, check_subsymmetry,
    check_symmetry, check_variational_symmetry, noether_flux, system_lagrange_fluxes, tuple_string,
    verify_quasi_lagrangian, CheckConfig, CheckReport, ResidualSummary, Verdict, VerifyMode,
};
use crate::variational::{euler_all, frechet, FluxVector};

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// System file in the DSL.
    #[arg(long, global = true)]
    system: Option<PathBuf>,
    /// Seed for numeric sampling (default 42).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Numeric zero tolerance (default 1e-8).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Numeric mode accepts a sampled zero as verified.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Report `time_ms` as 0 so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Args, Debug, Clone, Default)]
struct Subjects {
    /// Expression(s), inline or a file name.
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    /// Characteristic components.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Cosymmetry components.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Flux components in the order of the independent variables.
    #[arg(long, allow_hyphen_values = true)]
    flux: Option<String>,
    /// Operator rows written with placeholders `_` or `_1, _2, ...`.
    #[arg(long, allow_hyphen_values = true)]
    operator: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Euler operators of --expr for every dependent variable.
    Euler {
        #[command(flatten)]
        s: Subjects,
    },
    /// Frechet derivative of the system (or of --expr).
    Frechet {
        #[command(flatten)]
        s: Subjects,
    },
    /// Adjoint of the Frechet derivative (or of the --operator).
    Adjoint {
        #[command(flatten)]
        s: Subjects,
    },
    /// One verification: exit 0 verified, 1 refuted, 2 inconclusive.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[command(flatten)]
        s: Subjects,
    },
    /// Conservation-law fluxes from a cosymmetry and a characteristic.
    Flux {
        #[arg(value_enum)]
        kind: FluxKind,
        #[command(flatten)]
        s: Subjects,
    },
    /// Linear search over a basis.
    Find {
        #[arg(value_enum)]
        kind: FindKind,
        /// A basis file (one element per line, `#` comments) or inline
        /// elements separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        basis: String,
    },
    /// Numeric residual of --expr, or a closed-form critical-point check.
    Numcheck {
        #[command(flatten)]
        s: Subjects,
        #[arg(long)]
        critical: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Relative drift of the integral of --expr along a periodic MOL run.
    Drift {
        #[command(flatten)]
        s: Subjects,
        /// Initial data, one expression in the space variable per field.
        #[arg(long, allow_hyphen_values = true)]
        initial: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long)]
        length: f64,
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        t_end: f64,
        /// Constant values, `name=value`.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long, default_value_t = 1e-6)]
        max_drift: f64,
    },
    /// Runs corpus claims; exits 1 if any verdict differs from its expectation.
    Corpus {
        #[arg(value_enum)]
        action: CorpusAction,
        /// Item identifier pattern with `*` and `?`.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckKind {
    Symmetry,
    Cosymmetry,
    Characteristic,
    AdjointSymmetry,
    Claw,
    Varsym,
    Subsym,
    Quasilagrangian,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FluxKind {
    Noether,
    Lagrange,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FindKind {
    Cosymmetry,
    Characteristic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CorpusAction {
    Run,
}

/// What a command printed and how it should exit.
enum Output {
    Reports(Vec<CheckReport>),
    /// Corpus outcomes, judged against their expectations.
    Corpus(Vec<crate::corpus::ClaimOutcome>),
    Value(serde_json::Value, Vec<CheckReport>),
}

/// Exit code for a list of verdicts.
pub fn exit_code(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    let mut code = EXIT_VERIFIED;
    for v in verdicts {
        match v {
            Verdict::Refuted => return EXIT_REFUTED,
            Verdict::Inconclusive => code = EXIT_INCONCLUSIVE,
            Verdict::Verified => {}
        }
    }
    code
}

/// Parses `args` (without the program name), runs the command, writes JSON
/// to `out` and returns the exit code. Diagnostics go to standard error.
pub fn run_command(args: &[String], out: &mut dyn Write) -> i32 {
    let argv = std::iter::once("qnoether".to_string()).chain(args.iter().cloned());
    let (cli, common) = match parse_args(argv) {
        Ok(x) => x,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_VERIFIED };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, &common, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn parse_args(argv: impl IntoIterator<Item = String>) -> std::result::Result<(Command, Common), clap::Error> {
    #[derive(ClapParser, Debug)]
    #[command(name = "qnoether", version, about = "Verify symmetries, cosymmetries and conservation laws of PDE systems")]
    struct Full {
        #[command(flatten)]
        common: Common,
        #[command(subcommand)]
        command: Command,
    }
    let f = Full::try_parse_from(argv)?;
    Ok((f.command, f.common))
}

fn execute(cmd: Command, common: &Common, out: &mut dyn Write) -> Result<i32> {
    let file = match &common.system {
        Some(p) => Some(load_system(p)?),
        None => None,
    };
    let mut cfg = CheckConfig::default();
    if let Some(p) = &common.system {
        Settings::beside(p)?.apply(&mut cfg.numeric);
    }
    if let Some(s) = common.seed {
        cfg.numeric.seed = s;
    }
    if let Some(t) = common.tol {
        cfg.numeric.tol = t;
    }
    if let Some(m) = common.mode {
        cfg.mode = match m {
            ModeArg::Exact => VerifyMode::Exact,
            ModeArg::Numeric => VerifyMode::Numeric,
        };
    }
    let need = |what: &str| -> Result<&SystemFile> {
        file.as_ref().ok_or_else(|| Error::Invalid(format!("{what} needs --system <file>")))
    };
    let output = match cmd {
        Command::Euler { s } => {
            let f = need("euler")?;
            let l = single(f, "--expr", s.expr.as_deref())?;
            let e = euler_all(&l, f.system().deps());
            Output::Value(json!({ "command": "euler", "input": l.to_string(), "result": strings(&e) }), vec![])
        }
        Command::Frechet { s } => {
            let f = need("frechet")?;
            let delta = match &s.expr {
                Some(_) => exprs(f, "--expr", s.expr.as_deref())?,
                None => f.system().residuals(),
            };
            let op = frechet(&delta, f.system().deps());
            Output::Value(json!({ "command": "frechet", "result": lines(&op.to_string()) }), vec![])
        }
        Command::Adjoint { s } => {
            let f = need("adjoint")?;
            let op = match &s.operator {
                Some(_) => f.operator(&exprs(f, "--operator", s.operator.as_deref())?)?,
                None => frechet(&f.system().residuals(), f.system().deps()),
            };
            Output::Value(json!({ "command": "adjoint", "result": lines(&op.adjoint().to_string()) }), vec![])
        }
        Command::Check { kind, s } => {
            let f = need("check")?;
            Output::Reports(vec![check(f, kind, &s, &cfg)?])
        }
        Command::Flux { kind, s } => {
            let f = need("flux")?;
            let sys = f.system();
            let beta = exprs(f, "--beta", s.beta.as_deref())?;
            let alpha = exprs(f, "--alpha", s.alpha.as_deref())?;
            match kind {
                FluxKind::Noether => {
                    let o = noether_flux(sys, &beta, &Characteristic::new(sys.deps().to_vec(), alpha)?, &cfg)?;
                    let mut reports = vec![o.cosymmetry, o.symmetry];
                    let (flux, triv) = match o.law {
                        Some(law) => {
                            let flux = strings(&law.flux.comps);
                            reports.push(law.report);
                            (json!(flux), json!(o.triviality))
                        }
                        None => (json!(null), json!(null)),
                    };
                    Output::Value(
                        json!({ "command": "flux noether", "result": flux, "triviality": triv,
                                "reports": reports.clone() }),
                        reports,
                    )
                }
                FluxKind::Lagrange => {
                    let q = system_lagrange_fluxes(sys, &alpha, &beta)?;
                    Output::Value(json!({ "command": "flux lagrange", "result": strings(&q.comps) }), vec![])
                }
            }
        }
        Command::Find { kind, basis } => {
            let f = need("find")?;
            let elems = basis_elements(f, &basis)?;
            let basis = AnsatzBasis::new(elems)?;
            let t0 = std::time::Instant::now();
            let (name, space) = match kind {
                FindKind::Cosymmetry => ("find-cosymmetry", find_cosymmetries(f.system(), &basis)?),
                FindKind::Characteristic => ("find-characteristic", find_characteristics(f.system(), &basis)?),
            };
            let found: Vec<String> = space.multipliers().iter().map(|m| tuple_string(m)).collect();
            let mut r = CheckReport::from_residuals(name, format!("span{{{}}}", found.join(", ")), vec![], &cfg, t0);
            if space.is_empty() {
                r.verdict = Verdict::Refuted;
            }
            Output::Reports(vec![r])
        }
        Command::Numcheck { s, critical, trials } => {
            let mut c = cfg.clone();
            c.mode = VerifyMode::Numeric;
            c.numeric.trials = trials;
            match (critical, &s.expr) {
                (Some(id), None) => Output::Reports(vec![critical_point_check(&id, &c)?]),
                (None, Some(_)) => {
                    let f = need("numcheck --expr")?;
                    let es = exprs(f, "--expr", s.expr.as_deref())?;
                    let t0 = std::time::Instant::now();
                    Output::Reports(vec![CheckReport::from_residuals("numcheck", tuple_string(&es), es, &c, t0)])
                }
                _ => return Err(Error::Invalid("numcheck needs exactly one of --expr and --critical".into())),
            }
        }
        Command::Drift { s, initial, x0, length, n, dt, t_end, params, max_drift } => {
            let f = need("drift")?;
            let density = single(f, "--expr", s.expr.as_deref())?;
            let init = exprs(f, "--initial", Some(&initial))?;
            let params = parse_params(&params)?;
            let report = drift(f, &density, &init, &params, (x0, length, n, dt, t_end), max_drift, &cfg.numeric)?;
            Output::Reports(vec![report])
        }
        Command::Corpus { action: CorpusAction::Run, filter, dir } => {
            let dir = dir.unwrap_or_else(default_dir);
            Output::Corpus(run_corpus(&dir, filter.as_deref(), &cfg)?)
        }
    };
    let (value, code) = match output {
        Output::Reports(mut rs) => {
            if common.no_timing {
                rs.iter_mut().for_each(|r| r.time_ms = 0);
            }
            let code = exit_code(rs.iter().map(|r| r.verdict));
            for r in &rs {
                eprintln!("{r}");
            }
            (serde_json::to_value(&rs).expect("reports serialize"), code)
        }
        Output::Corpus(mut os) => {
            if common.no_timing {
                os.iter_mut().for_each(|o| o.report.time_ms = 0);
            }
            let mut code = EXIT_VERIFIED;
            for o in &os {
                let mark = if o.matches() { "ok" } else { "MISMATCH" };
                eprintln!("{mark} (expected {}) {}", o.expected, o.report);
                if !o.matches() {
                    code = EXIT_REFUTED;
                }
            }
            (serde_json::to_value(&os).expect("outcomes serialize"), code)
        }
        Output::Value(mut v, rs) => {
            if common.no_timing {
                if let Some(list) = v.get_mut("reports").and_then(|r| r.as_array_mut()) {
                    for r in list {
                        r["time_ms"] = json!(0);
                    }
                }
            }
            (v, exit_code(rs.iter().map(|r| r.verdict)))
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("json") + "\n";
    out.write_all(text.as_bytes())?;
    if let Some(p) = &common.json {
        std::fs::write(p, &text)?;
    }
    Ok(code)
}

/// Reads a system file; item files are accepted and their claims ignored.
fn load_system(p: &Path) -> Result<SystemFile> {
    let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    crate::corpus::parse_item_file(&text, p).map(|(f, _)| (*f).clone()).map_err(|e| match e {
        Error::Parse { line, col, msg } => Error::Parse { line, col, msg: format!("{}: {msg}", p.display()) },
        other => other,
    })
}

/// Text of a subject flag: a file's contents when the value names a file.
/// A value that is both an existing file and a valid expression is refused.
fn subject_text(f: &SystemFile, flag: &str, value: Option<&str>) -> Result<String> {
    let v = value.ok_or_else(|| Error::Invalid(format!("missing {flag}")))?;
    let path = Path::new(v);
    if path.is_file() {
        if f.parse_exprs(v).is_ok() {
            return Err(Error::Invalid(format!(
                "{flag} {v}: names a file and is also an expression; write ./{v} for the file"
            )));
        }
        return Ok(std::fs::read_to_string(path)?);
    }
    Ok(v.to_string())
}

fn exprs(f: &SystemFile, flag: &str, value: Option<&str>) -> Result<Vec<Expr>> {
    f.parse_exprs(subject_text(f, flag, value)?.trim())
}

fn single(f: &SystemFile, flag: &str, value: Option<&str>) -> Result<Expr> {
    let es = exprs(f, flag, value)?;
    match <[Expr; 1]>::try_from(es) {
        Ok([e]) => Ok(e),
        Err(es) => Err(Error::Invalid(format!("{flag} takes one expression, got {}", es.len()))),
    }
}

fn basis_elements(f: &SystemFile, raw: &str) -> Result<Vec<Vec<Expr>>> {
    let text = subject_text(f, "--basis", Some(raw))?;
    let pieces: Vec<&str> = if Path::new(raw).is_file() {
        text.lines().map(|l| l.split('#').next().unwrap_or("")).collect()
    } else {
        text.split(';').collect()
    };
    pieces.into_iter().filter(|p| !p.trim().is_empty()).map(|p| f.parse_exprs(p.trim())).collect()
}

fn strings(es: &[Expr]) -> Vec<String> {
    es.iter().map(Expr::to_string).collect()
}

fn lines(s: &str) -> Vec<String> {
    s.lines().map(str::to_string).collect()
}

fn check(f: &SystemFile, kind: CheckKind, s: &Subjects, cfg: &CheckConfig) -> Result<CheckReport> {
    let sys = f.system();
    let alpha = || -> Result<Characteristic> {
        Characteristic::new(sys.deps().to_vec(), exprs(f, "--alpha", s.alpha.as_deref())?)
    };
    let beta = || exprs(f, "--beta", s.beta.as_deref());
    let op = || -> Result<_> { f.operator(&exprs(f, "--operator", s.operator.as_deref())?) };
    Ok(match kind {
        CheckKind::Symmetry => check_symmetry(sys, &alpha()?, cfg)?,
        CheckKind::Cosymmetry => check_cosymmetry(sys, &beta()?, cfg)?,
        CheckKind::Characteristic => check_characteristic(sys, &beta()?, cfg)?,
        CheckKind::AdjointSymmetry => check_adjoint_symmetry(sys, &beta()?, cfg)?,
        CheckKind::Claw => {
            let k = FluxVector::new(sys.indeps(), exprs(f, "--flux", s.flux.as_deref())?)?;
            let law = check_conservation_law(sys, &k, cfg)?;
            let mut r = law.report;
            if let Some(ch) = law.characteristic {
                r.subject = format!("{}, characteristic {}", r.subject, tuple_string(&ch));
            }
            r
        }
        CheckKind::Varsym => {
            check_variational_symmetry(sys, &single(f, "--expr", s.expr.as_deref())?, &alpha()?, cfg)?.report
        }
        CheckKind::Subsym => check_subsymmetry(sys, &alpha()?, &op()?, cfg)?,
        CheckKind::Quasilagrangian => {
            verify_quasi_lagrangian(sys, &single(f, "--expr", s.expr.as_deref())?, &op()?, cfg)?
        }
    })
}

fn parse_params(raw: &[String]) -> Result<HashMap<String, f64>> {
    raw.iter()
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("--param {p}: expected name=value")))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Invalid(format!("--param {p}: not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn drift(
    f: &SystemFile,
    density: &Expr,
    init: &[Expr],
    params: &HashMap<String, f64>,
    (x0, length, n, dt, t_end): (f64, f64, usize, f64, f64),
    max_drift: f64,
    numeric: &NumericConfig,
) -> Result<CheckReport> {
    let started = std::time::Instant::now();
    let sys = f.system();
    if init.len() != sys.deps().len() {
        return Err(Error::Dimension(format!("{} initial fields for {} dependent variables", init.len(), sys.deps().len())));
    }
    let (time, space) = match sys.indeps() {
        [t, x] => (t.clone(), x.clone()),
        _ => return Err(Error::Invalid("drift needs a system in two independent variables".into())),
    };
    let compiled: Vec<crate::numeval::mol::GridExpr> = init
        .iter()
        .map(|e| crate::numeval::mol::GridExpr::new(e, &time, &space, &[], params))
        .collect::<Result<_>>()?;
    // evaluate the initial data on a jet-free grid
    let probe = GridState::sample(x0, length, n, 0.0, 1, |_, _| 0.0)?;
    let mut fields = Vec::new();
    for c in &compiled {
        fields.push(c.eval(&probe, &crate::numeval::Boundary::Periodic)?);
    }
    let u0 = GridState { x0, h: probe.h, t: 0.0, fields };
    let mut opts = MolOptions::new(dt, t_end);
    opts.params = params.clone();
    opts.sample_every = ((t_end / dt / 100.0).round() as usize).max(1);
    let traj = integrate_mol(sys, u0, &opts)?;
    let subject = format!("int {density} d{space}, t in [0, {t_end}]");
    let mut r = CheckReport {
        check: "drift".into(),
        subject,
        verdict: Verdict::Verified,
        residual: ResidualSummary { symbolic_terms: 0, numeric_max: None },
        seed: numeric.seed,
        time_ms: 0,
        residuals: vec![],
        notes: vec![],
    };
    if let Some(why) = &traj.aborted {
        r.verdict = Verdict::Inconclusive;
        r.notes.push(why.clone());
    } else {
        let d = functional_drift(&traj, density)?;
        r.residual.numeric_max = Some(d);
        if d > max_drift {
            r.verdict = Verdict::Refuted;
        }
    }
    r.time_ms = started.elapsed().as_millis() as u64;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "indep t,x; dep u; func f(t);\n\
        eq ex1: u[t] = 3*u[x,x]*u[x,x,x]/u[x] - u[x,x]^3/u[x]^2 + f;\n";

    fn run(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let code = run_command(&args, &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    fn system_file(text: &str) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("s.sys"), text).unwrap();
        dir
    }

    #[test]
    fn exit_codes_follow_verdicts() {
        let dir = system_file(EX1);
        let sys = dir.path().join("s.sys");
        let sys = sys.to_str().unwrap();
        let (code, out) = run(&["check", "cosymmetry", "--system", sys, "--beta", "u[x]"]);
        assert_eq!(code, EXIT_VERIFIED, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["verdict"], "verified");
        assert_eq!(v[0]["seed"], 42);
        let (code, _) = run(&["check", "symmetry", "--system", sys, "--alpha", "u[t]"]);
        assert_eq!(code, EXIT_REFUTED);
        let (code, _) = run(&["check", "symmetry", "--system", sys, "--alpha", "u[y]"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _) = run(&["check", "bogus"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn json_is_stable_without_timing() {
        let dir = system_file(EX1);
        let sys = dir.path().join("s.sys");
        let args = ["check", "cosymmetry", "--system", sys.to_str().unwrap(), "--beta", "u[x]", "--no-timing"];
        assert_eq!(run(&args), run(&args));
        let path = dir.path().join("r.json");
        let mut with_file = args.to_vec();
        with_file.extend(["--json", path.to_str().unwrap()]);
        let (_, out) = run(&with_file);
        assert_eq!(std::fs::read_to_string(path).unwrap(), out);
    }

    #[test]
    fn ambiguous_subject_is_refused() {
        let dir = system_file(EX1);
        std::fs::write(dir.path().join("beta.txt"), "u[x]").unwrap();
        let sys = dir.path().join("s.sys");
        let beta = dir.path().join("beta.txt");
        let (code, _) = run(&["check", "cosymmetry", "--system", sys.to_str().unwrap(), "--beta", beta.to_str().unwrap()]);
        assert_eq!(code, EXIT_VERIFIED);
        // a file in the working directory whose name is also a bound name
        let f = crate::cli::parse_system(&format!("{EX1}let qn_probe_name = u[x];")).unwrap();
        std::fs::write("qn_probe_name", "u[x]").unwrap();
        let res = subject_text(&f, "--beta", Some("qn_probe_name"));
        let via_path = subject_text(&f, "--beta", Some("./qn_probe_name"));
        std::fs::remove_file("qn_probe_name").unwrap();
        assert!(res.is_err());
        assert_eq!(via_path.unwrap(), "u[x]");
    }

    #[test]
    fn computations_print_expressions() {
        let dir = system_file("indep t,x; dep u; eq kdv: u[t] = -u*u[x] - u[x,x,x];");
        let sys = dir.path().join("s.sys");
        let (code, out) = run(&["euler", "--system", sys.to_str().unwrap(), "--expr", "u[x]^2/2 - u^3/6"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"][0], "-1/2*u^2 - u[x,x]");
    }

    #[test]
    fn basis_files_hold_one_element_per_line() {
        let dir = system_file("indep t,x; dep u; eq burgers: u[t] = u*u[x] + u[x,x];");
        std::fs::write(dir.path().join("basis"), "# degree one\n1\nx\nt\nu\n").unwrap();
        let sys = dir.path().join("s.sys");
        let basis = dir.path().join("basis");
        let (code, out) =
            run(&["find", "cosymmetry", "--system", sys.to_str().unwrap(), "--basis", basis.to_str().unwrap()]);
        assert_eq!(code, EXIT_VERIFIED);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["subject"], "span{(1)}");
    }

    #[test]
    fn config_file_sets_the_seed() {
        let dir = system_file(EX1);
        std::fs::write(dir.path().join("qnoether.conf"), "seed = 7\n").unwrap();
        let sys = dir.path().join("s.sys");
        let (_, out) = run(&["check", "cosymmetry", "--system", sys.to_str().unwrap(), "--beta", "u[x]"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v[0]["seed"], 7);
    }
}
