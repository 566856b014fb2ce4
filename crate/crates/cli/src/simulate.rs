use std::path::PathBuf;
use std::time::Instant;

use bihv_core::odesim::io::{write_csv_file, InitDoc, Resolved};
use bihv_core::odesim::{
    constant_solutions, integrate_with, odetau_residuals, residuals_with, ClosedFormFamily, IntegrateOptions, Member,
    OdeError, PkEvaluator, Residuals, SimMode, SystemSpec, TauZeroConstants, Trajectory,
};
use bihv_core::poly::rational::{parse_rational, to_f64};
use clap::Args;
use serde_json::json;

use crate::output::{RunDir, RunReport};
use crate::{CliError, CliResult, Common};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Initial condition as JSON (see docs/simulate-io.md).
    #[arg(long, conflicts_with_all = ["family", "constant"])]
    init: Option<PathBuf>,
    /// Curvature constant; an integer or `a/b` is kept exact for `--const`.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<String>,
    #[arg(long)]
    n1: Option<u32>,
    /// Explicit family: `k0`, `k1` or `km1`.
    #[arg(long, conflicts_with = "constant")]
    family: Option<String>,
    /// Family amplitudes, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "family")]
    a: Vec<f64>,
    /// Family shifts, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "family")]
    c: Vec<f64>,
    /// Start from the constant solutions with tau != 0.
    #[arg(long = "const")]
    constant: bool,
    #[arg(long, allow_negative_numbers = true)]
    t0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t1: Option<f64>,
    /// Residual threshold. Integration runs at a hundredth of it.
    #[arg(long)]
    tol: Option<f64>,
    /// Highest P_k evaluated along the trajectory (full mode).
    #[arg(long)]
    kmax: Option<usize>,
}

const DEFAULT_TOL: f64 = 1e-8;
const DEFAULT_KMAX: usize = 2;

struct Settings {
    t0: f64,
    t1: f64,
    tol: f64,
    kmax: usize,
}

fn usage(e: OdeError) -> CliError {
    CliError::Usage(e.to_string())
}

fn parse_k(s: &str) -> Result<f64, CliError> {
    match parse_rational(s) {
        Some(r) => Ok(to_f64(&r)),
        None => s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Usage(format!("cannot read K = `{s}`"))),
    }
}

/// Builds the runs requested on the command line.
fn plan(args: &SimulateArgs) -> Result<(Vec<(String, Resolved)>, Settings), CliError> {
    let mut settings = Settings {
        t0: args.t0.unwrap_or(0.0),
        t1: args.t1.unwrap_or(1.0),
        tol: args.tol.unwrap_or(DEFAULT_TOL),
        kmax: args.kmax.unwrap_or(DEFAULT_KMAX),
    };
    if let Some(path) = &args.init {
        let doc = InitDoc::load(path).map_err(usage)?;
        if let Some(k) = &args.k {
            if parse_k(k)? != doc.k {
                return Err(CliError::Usage(format!("--k {k} disagrees with K = {} in {}", doc.k, path.display())));
            }
        }
        let mut doc = doc;
        match (doc.n1, args.n1) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Usage(format!("--n1 {b} disagrees with n1 = {a} in {}", path.display())))
            }
            (None, b) => doc.n1 = b,
            _ => {}
        }
        settings.t0 = args.t0.or(doc.t0).unwrap_or(0.0);
        settings.t1 = args.t1.or(doc.t1).unwrap_or(1.0);
        settings.tol = args.tol.or(doc.tol).unwrap_or(DEFAULT_TOL);
        settings.kmax = args.kmax.or(doc.kmax).unwrap_or(DEFAULT_KMAX);
        let resolved = doc.resolve(settings.t0).map_err(usage)?;
        return Ok((vec![("trajectory".into(), resolved)], settings));
    }
    if let Some(name) = &args.family {
        let k = match name.as_str() {
            "k0" => 0,
            "k1" => 1,
            "km1" | "k-1" => -1,
            other => return Err(CliError::Usage(format!("unknown family `{other}`; use k0, k1 or km1"))),
        };
        if let Some(given) = &args.k {
            if parse_k(given)? != k as f64 {
                return Err(CliError::Usage(format!("--k {given} does not match family {name}")));
            }
        }
        if args.a.len() != args.c.len() || args.a.is_empty() {
            return Err(CliError::Usage("--a and --c need the same, nonzero number of entries".into()));
        }
        if args.n1.is_some_and(|n| n as usize != args.a.len()) {
            return Err(CliError::Usage("--n1 differs from the number of family members".into()));
        }
        let members = args.a.iter().zip(&args.c).map(|(a, c)| Member::regular(*a, *c)).collect();
        let family = ClosedFormFamily::new(k, members).map_err(usage)?;
        let init = family.state(settings.t0).map_err(usage)?;
        let resolved = Resolved {
            spec: family.spec(),
            init,
            family: Some(family),
        };
        return Ok((vec![("trajectory".into(), resolved)], settings));
    }
    if args.constant {
        let n1 = args.n1.ok_or_else(|| CliError::Usage("--const needs --n1".into()))?;
        let k_text = args.k.as_deref().ok_or_else(|| CliError::Usage("--const needs --k".into()))?;
        let k = parse_rational(k_text).ok_or_else(|| CliError::Usage("--const needs an exact K (integer or a/b)".into()))?;
        if n1 == 0 {
            return Err(CliError::Usage("--n1 must be at least 1".into()));
        }
        let sols = constant_solutions(n1, &k);
        let spec = SystemSpec::full(n1, to_f64(&k)).map_err(usage)?;
        let runs = sols
            .nonminimal
            .iter()
            .enumerate()
            .map(|(i, s)| {
                println!("constant solution {}: {s}", i + 1);
                (format!("const-{}", i + 1), Resolved { spec, init: s.to_f64(), family: None })
            })
            .collect::<Vec<_>>();
        if runs.is_empty() {
            let note = match sols.tau_zero {
                TauZeroConstants::ZeroMuZeroSum => "tau = 0 constants: m = 0 with sum l = 0".to_string(),
                TauZeroConstants::ZeroLambda { mu_abs } => format!("tau = 0 constants: l = 0, m_i = ±{mu_abs}"),
                TauZeroConstants::Empty => "no tau = 0 constants either".to_string(),
            };
            println!("no constant solution with tau != 0 for n1 = {n1}, K = {k_text}; {note}");
        }
        return Ok((runs, settings));
    }
    Err(CliError::Usage("give one of --init, --family, --const".into()))
}

fn residuals_for(traj: &Trajectory, kmax: usize, eval: Option<&PkEvaluator>) -> Result<Residuals, CliError> {
    match (traj.spec.mode, eval) {
        (SimMode::Full, Some(e)) => residuals_with(traj, e, kmax).map_err(|e| CliError::Aborted(e.to_string())),
        _ => Ok(odetau_residuals(traj)),
    }
}

pub fn run(args: &SimulateArgs, common: &Common) -> CliResult {
    let (runs, s) = plan(args)?;
    if s.tol.is_nan() || s.tol <= 0.0 || s.t0.is_nan() || s.t1.is_nan() || s.t1 <= s.t0 {
        return Err(CliError::Usage("need tol > 0 and t1 > t0".into()));
    }
    let dir = RunDir::create(common, "simulate")?;
    let mut report = RunReport::new(
        "simulate",
        json!({
            "init": args.init.as_ref().map(|p| p.display().to_string()),
            "family": args.family, "a": args.a, "c": args.c, "const": args.constant,
            "k": args.k, "n1": args.n1,
            "t0": s.t0, "t1": s.t1, "tol": s.tol, "kmax": s.kmax,
        }),
    );
    if runs.is_empty() {
        report.check("initial states", false, "nothing to integrate");
        return report.finish(&dir);
    }
    let opts = IntegrateOptions::with_tol((s.tol * 1e-2).max(1e-13));
    let mut aborted = None;
    for (name, r) in &runs {
        let eval = match r.spec.mode {
            SimMode::Full => Some(PkEvaluator::new(r.spec.n1, s.kmax).map_err(|e| CliError::Aborted(e.to_string()))?),
            SimMode::Linear => None,
        };
        let start = Instant::now();
        let traj = match integrate_with(&r.spec, &r.init, s.t0, s.t1, &opts) {
            Ok(t) => t,
            Err(e @ OdeError::InvalidSpec(_)) => return Err(usage(e)),
            Err(e) => return Err(CliError::Aborted(format!("{name}: {e}"))),
        };
        report.timings.push((format!("{name} integrate"), start.elapsed()));
        let res = residuals_for(&traj, s.kmax, eval.as_ref())?;
        let csv = format!("{name}.csv");
        write_csv_file(&dir.file(&csv), &traj, &res).map_err(|e| CliError::Aborted(e.to_string()))?;
        report.artifacts.push(csv);
        println!("{name}: {} points, step {:e}", traj.len(), traj.step);

        if let Some(t) = traj.blow_up {
            aborted = Some(format!("{name}: state exceeded {:e} at t = {t}", opts.blow_up));
            report.check(format!("{name} blow-up"), false, format!("t = {t}"));
            break;
        }
        for k in 0..res.p.len() {
            let m = res.max_p(k);
            println!("  max |P{k}|     {m:.3e}");
            report.check(format!("{name} P{k}"), m < s.tol, format!("{m:e}"));
        }
        let m = res.max_odetau();
        println!("  max |odetau|  {m:.3e}");
        report.check(format!("{name} odetau"), m < s.tol, format!("{m:e}"));
        if let Some(f) = &r.family {
            let mut dev = 0.0f64;
            for (t, y) in traj.times.iter().zip(&traj.states) {
                if let Ok(exact) = f.state(*t) {
                    dev = y.iter().zip(&exact).fold(dev, |m, (a, b)| m.max((a - b).abs()));
                }
            }
            println!("  closed form   {dev:.3e}");
            report.check(format!("{name} closed form"), dev < s.tol, format!("{dev:e}"));
        }
    }
    match aborted {
        Some(msg) => {
            report.finish(&dir).ok();
            Err(CliError::Aborted(msg))
        }
        None => report.finish(&dir),
    }
}
