//! Batch front end: validated run configuration and the four subcommands,
//! each producing a JSON report and a pass flag.
//!
//! Exit codes: `0` every check passed, `1` some check failed, `2` usage or
//! input error.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::chern::{
    chern_residual, compute_rs, compute_rs_with_coframe, family_coframe, index_from_h, metric_reconstruction,
    omega_reconstruction, residual_free_sweep, verdict_line, CandidateJ, FAMILIES,
};
use crate::compat::standard_omega;
use crate::dga::{
    frobenius_set, verify_closed_system, verify_d_squared, verify_invariant_form_identities, StructureRules,
};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Field, RealField, Q};
use crate::form::Form;
use crate::g2::{adapted_frame_at, AdaptedFrame, DEFAULT_TOL};
use crate::json::{
    check_document_mode, form_from_json_in, form_to_json, matrix_from_json, matrix_to_json, read_document,
    vector_from_json, vector_to_json, write_report, JsonScalar,
};
use crate::matrix::{unit_vector, Matrix};
use crate::sampling::Sample;
use crate::sphere::{
    d_omega_ambient, d_omega_defect_at, nijenhuis, nijenhuis_sweep, verify_d_omega_pointwise, SpherePoint, StereoChart,
};
use crate::symplectic::{sphere_elliptic_sweep, sphere_point_check};
use crate::threeform::{classify_3form, recover_upsilon, RecoveredJ};

/// Default float tolerance when `--tol` is absent.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-10;
/// Step size for finite-difference Nijenhuis tensors.
pub const NIJENHUIS_STEP: f64 = 1e-3;
/// Allowed relative change of the Nijenhuis tensor under step halving.
pub const NIJENHUIS_REL_TOL: f64 = 0.05;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Usage(format!("unknown mode {other:?}; expected exact or float"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyStructure,
    Classify3Form,
    SphereSuite,
    Chern,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyStructure => "verify-structure",
            Command::Classify3Form => "classify-3form",
            Command::SphereSuite => "sphere-suite",
            Command::Chern => "chern",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub mode: Mode,
    pub tol: Option<f64>,
    pub samples: usize,
    pub seed: Option<u64>,
    pub report: Option<PathBuf>,
    pub threads: usize,
    pub mutate: Option<String>,
    pub family: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            mode: Mode::Exact,
            tol: None,
            samples: 0,
            seed: None,
            report: None,
            threads: 1,
            mutate: None,
            family: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tol {
            if self.mode == Mode::Exact {
                return Err(Error::Usage("--tol is only meaningful with --mode float".into()));
            }
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Usage(format!("--tol must be a non-negative number, got {t}")));
            }
        }
        if self.samples > 0 && self.seed.is_none() {
            return Err(Error::Usage("--seed is required when --samples > 0".into()));
        }
        if self.threads == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        if self.mutate.is_some() && self.command != Command::VerifyStructure {
            return Err(Error::Usage("--mutate only applies to verify-structure".into()));
        }
        if self.family.is_some() && self.command != Command::Chern {
            return Err(Error::Usage("--family only applies to chern".into()));
        }
        match self.command {
            Command::VerifyStructure if self.mode == Mode::Float => {
                Err(Error::Usage("verify-structure is symbolic and runs in exact mode only".into()))
            }
            Command::Classify3Form if self.input.is_none() => Err(Error::Usage("classify-3form needs --input".into())),
            Command::Chern if self.input.is_some() && self.family.is_some() => {
                Err(Error::Usage("give either --input or --family, not both".into()))
            }
            _ => Ok(()),
        }
    }

    /// `0` in exact mode, `--tol` or [`DEFAULT_FLOAT_TOL`] in float mode.
    pub fn tolerance(&self) -> f64 {
        match self.mode {
            Mode::Exact => 0.0,
            Mode::Float => self.tol.unwrap_or(DEFAULT_FLOAT_TOL),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
    /// Human-readable summary lines.
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Exit code for a failed run: always `2`.
pub fn error_exit_code(_: &Error) -> i32 {
    2
}

/// Validates `config`, runs the command on a pool of `config.threads`
/// workers and writes the report when a path was given.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    let outcome = pool.install(|| match config.command {
        Command::VerifyStructure => cmd_verify_structure(config),
        Command::Classify3Form => cmd_classify_3form(config),
        Command::SphereSuite => cmd_sphere_suite(config),
        Command::Chern => cmd_chern(config),
    })?;
    if let Some(path) = &config.report {
        write_report(path, &outcome.report)?;
    }
    Ok(outcome)
}

fn check_entry(name: &str, pass: bool, extra: Value) -> Value {
    let mut v = json!({ "check": name, "pass": pass });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

fn all_pass(checks: &[Value]) -> bool {
    checks.iter().all(|c| c["pass"] == Value::Bool(true))
}

pub fn cmd_verify_structure(config: &RunConfig) -> Result<Outcome> {
    let rules = match &config.mutate {
        Some(name) => StructureRules::mutated(name)?,
        None => StructureRules::standard(),
    };
    let mut checks = verify_d_squared(&rules);
    checks.extend(verify_invariant_form_identities(&rules));
    checks.extend(verify_closed_system(&rules, &frobenius_set()));
    let pass = checks.iter().all(|c| c.pass);
    let failed: Vec<String> =
        checks.iter().filter(|c| !c.pass).map(|c| format!("{} {}", c.check, c.generator)).collect();
    let mut lines = vec![format!("{} checks, {} failed", checks.len(), failed.len())];
    lines.extend(failed.into_iter().map(|f| format!("FAIL {f}")));
    let report = json!({
        "command": config.command.name(),
        "mutation": config.mutate,
        "checks": serde_json::to_value(&checks)?,
        "pass": pass,
    });
    Ok(Outcome { report, pass, lines })
}

pub fn cmd_classify_3form(config: &RunConfig) -> Result<Outcome> {
    let path = config.input.as_ref().ok_or_else(|| Error::Usage("classify-3form needs --input".into()))?;
    let doc = read_document(path)?;
    match config.mode {
        Mode::Exact => classify_document::<Q>(&doc, config),
        Mode::Float => classify_document::<f64>(&doc, config),
    }
}

fn classify_document<F>(doc: &Value, config: &RunConfig) -> Result<Outcome>
where
    F: RealField + JsonScalar,
    F::Complex: JsonScalar,
{
    let tol = config.tolerance();
    let (form_v, vol_v) = if doc.get("terms").is_some() {
        (doc, doc.get("vol"))
    } else {
        (doc.get("form").ok_or_else(|| Error::Parse("expected a form or {\"form\": …}".into()))?, doc.get("vol"))
    };
    let rho: Form<F> = form_from_json_in(form_v, doc)?;
    let vol: Form<F> = match vol_v {
        Some(v) => form_from_json_in(v, doc)?,
        None => Form::basis(6, &[1, 2, 3, 4, 5, 6])?,
    };
    let class = classify_3form(&rho, &vol, tol)?;
    let (j, upsilon) = match &class.j {
        None => (Value::Null, Value::Null),
        Some(RecoveredJ::Exact(j)) => (matrix_to_json(j.matrix()), form_to_json(&recover_upsilon(&rho, j, tol)?)),
        Some(RecoveredJ::Float(j)) => {
            let rho_f = rho.map_coeffs(|x| x.to_f64());
            (matrix_to_json(j.matrix()), form_to_json(&recover_upsilon(&rho_f, j, DEFAULT_FLOAT_TOL)?))
        }
    };
    let exact_j = matches!(class.j, Some(RecoveredJ::Exact(_)));
    let lines = vec![format!("tag {}", class.tag.as_str())];
    let report = json!({
        "command": config.command.name(),
        "mode": config.mode,
        "tag": class.tag,
        "lambda": class.lambda.to_json(),
        "J": j,
        "J_exact": exact_j,
        "upsilon": upsilon,
        "pass": true,
    });
    Ok(Outcome { report, pass: true, lines })
}

pub fn cmd_sphere_suite(config: &RunConfig) -> Result<Outcome> {
    match config.mode {
        Mode::Exact => sphere_suite::<Q>(config),
        Mode::Float => sphere_suite::<f64>(config),
    }
}

fn read_point<F: RealField + JsonScalar>(config: &RunConfig) -> Result<(Vec<F>, Option<Value>)> {
    match &config.input {
        None => Ok((unit_vector(7, 0), None)),
        Some(path) => {
            let doc = read_document(path)?;
            check_document_mode::<F>(&doc)?;
            let p = doc.get("point").ok_or_else(|| Error::Parse("input needs a \"point\"".into()))?;
            Ok((vector_from_json(p)?, Some(doc)))
        }
    }
}

fn sphere_suite<F: Sample + JsonScalar>(config: &RunConfig) -> Result<Outcome> {
    let tol = config.tolerance();
    let d_omega = d_omega_ambient();
    let mut checks = Vec::new();
    let seed = config.seed.unwrap_or(0);
    if config.samples == 0 {
        let (u, _) = read_point::<F>(config)?;
        let point = SpherePoint::new(u.clone())?;
        let frame = adapted_frame_at(point.coords(), DEFAULT_TOL)?;
        let defect = d_omega_defect_at(&frame, &d_omega, F::from_i64(8));
        checks.push(check_entry("d_omega", within::<F>(defect, tol), json!({ "max_defect": defect })));
        let (definite, defect) = sphere_point_check(&frame, tol)?;
        checks.push(check_entry(
            "elliptic_definite",
            definite && within::<F>(defect, tol),
            json!({ "max_defect": defect }),
        ));
        let uf: Vec<f64> = u.iter().map(|x| x.to_f64()).collect();
        let ff: AdaptedFrame<f64> = AdaptedFrame::from_matrix(frame.matrix().map(|x| x.to_f64()), 1e-9)?;
        let chart = StereoChart::new(&uf)?;
        let field = |x: &[f64]| crate::sphere::standard_j_matrix(x);
        let n = nijenhuis(&field, &chart, &uf, &ff.column(2), &ff.column(4), NIJENHUIS_STEP)?;
        let rel = n.step_change / n.norm.max(f64::MIN_POSITIVE);
        checks.push(check_entry(
            "nijenhuis",
            n.norm > 1e-6 && rel < NIJENHUIS_REL_TOL,
            json!({ "norm": n.norm, "relative_step_change": rel }),
        ));
    } else {
        let d = verify_d_omega_pointwise::<F>(config.samples, seed, tol, F::from_i64(8))?;
        checks.push(check_entry("d_omega", d.pass, json!({ "max_defect": d.max_defect })));
        let e = sphere_elliptic_sweep::<F>(config.samples, seed, tol)?;
        checks.push(check_entry(
            "elliptic_definite",
            e.pass,
            json!({ "max_defect": e.max_defect, "definite": e.definite }),
        ));
        let n = nijenhuis_sweep(config.samples, seed, NIJENHUIS_STEP, NIJENHUIS_REL_TOL)?;
        checks.push(check_entry(
            "nijenhuis",
            n.pass,
            json!({ "min_norm": n.min_norm, "relative_step_change": n.max_relative_step_change }),
        ));
    }
    let max_defect = checks.iter().filter_map(|c| c.get("max_defect").and_then(Value::as_f64)).fold(0.0, f64::max);
    let pass = all_pass(&checks);
    let lines = checks
        .iter()
        .map(|c| format!("{} {}", if c["pass"] == true { "PASS" } else { "FAIL" }, c["check"].as_str().unwrap_or("")))
        .collect();
    let report = json!({
        "command": config.command.name(),
        "mode": config.mode,
        "samples": config.samples,
        "seed": config.seed,
        "max_defect": max_defect,
        "checks": checks,
        "pass": pass,
    });
    Ok(Outcome { report, pass, lines })
}

fn within<F: Field>(x: f64, tol: f64) -> bool {
    if F::EXACT {
        x == 0.0
    } else {
        x <= tol
    }
}

pub fn cmd_chern(config: &RunConfig) -> Result<Outcome> {
    match config.mode {
        Mode::Exact => chern::<Q>(config),
        Mode::Float => chern::<f64>(config),
    }
}

fn chern<F>(config: &RunConfig) -> Result<Outcome>
where
    F: Sample + JsonScalar,
    F::Complex: JsonScalar,
{
    let tol = config.tolerance();
    let (u, doc) = read_point::<F>(config)?;
    let point = SpherePoint::new(u)?;
    let frame = adapted_frame_at(point.coords(), DEFAULT_TOL)?;
    let family = match (&config.family, &doc) {
        (Some(f), _) => Some(f.clone()),
        (None, Some(d)) => d.get("family").and_then(Value::as_str).map(str::to_owned),
        (None, None) => Some("standard".to_owned()),
    };
    let cand = match (&family, &doc) {
        (Some(name), _) => CandidateJ::family(name, &frame)?,
        (None, Some(d)) => {
            let j: Matrix<F> =
                matrix_from_json(d.get("J").ok_or_else(|| Error::Parse("input needs \"J\" or \"family\"".into()))?)?;
            CandidateJ::new(point.clone(), j, tol.max(if F::EXACT { 0.0 } else { DEFAULT_FLOAT_TOL }))?
        }
        (None, None) => unreachable!("defaults to the standard family"),
    };
    let data = match &family {
        Some(name) => compute_rs_with_coframe(&cand, &frame, &family_coframe(name)?, tol)?,
        None => compute_rs(&cand, &frame, tol)?,
    };
    let residual = chern_residual(&data);
    let h = index_from_h(&data, tol);
    let verdict = verdict_line(&data, tol);
    let close = |x: f64| within::<F>(x, tol.max(if F::EXACT { 0.0 } else { DEFAULT_FLOAT_TOL }));
    let omega = standard_omega::<F>(3).complexify();
    let omega_ok = close(omega_reconstruction(&data)?.sub(&omega)?.max_abs());
    let metric_ok = close(metric_reconstruction(&data)?.sub(&Matrix::identity(6)).max_abs());
    let orientation_ok = data.orientation() == cand.orientation(tol.max(DEFAULT_TOL))?;
    let det_ok = close((data.p.det() - F::Complex::from_real(data.r.det().norm_sqr())).magnitude())
        && close((data.q.det() - F::Complex::from_real(data.s.det().norm_sqr())).magnitude());
    let mut checks = vec![
        check_entry("omega_reconstruction", omega_ok, json!({})),
        check_entry("metric_reconstruction", metric_ok, json!({})),
        check_entry("orientation", orientation_ok, json!({})),
        check_entry("determinants", det_ok, json!({})),
    ];
    let (nre, nim) = data.normalized_residual();
    let mut report = json!({
        "command": config.command.name(),
        "mode": config.mode,
        "family": family,
        "point": vector_to_json(point.coords()),
        "r": matrix_to_json(&data.r),
        "s": matrix_to_json(&data.s),
        "residual": residual.to_json(),
        "normalized_residual": { "re": nre, "im": nim },
        "H_signature": h.as_ref().ok().map(|x| [x.index.p, x.index.q]),
        "orientation": if data.orientation() > 0 { "+1" } else { "-1" },
        "verdict": verdict,
    });
    let mut lines = vec![verdict];
    if let Ok(hi) = &h {
        checks.push(check_entry("no_definite_zero_residual", !hi.contradiction, json!({})));
    }
    if config.samples > 0 {
        let seed = config.seed.unwrap_or(0);
        let sweep = residual_free_sweep::<F>(config.samples, seed, &frame, tol.max(if F::EXACT { 0.0 } else { 1e-8 }));
        lines.push(format!(
            "residual-free sweep: {} valid, {} of index (2,1), {} of index (1,2), {} definite",
            sweep.valid, sweep.index_2_1, sweep.index_1_2, sweep.definite
        ));
        checks.push(check_entry("residual_free_sweep", sweep.pass, serde_json::to_value(&sweep)?));
    }
    let pass = all_pass(&checks);
    if let Value::Object(m) = &mut report {
        m.insert("checks".into(), Value::Array(checks));
        m.insert("pass".into(), Value::Bool(pass));
    }
    Ok(Outcome { report, pass, lines })
}

/// Names accepted by `--family`.
pub fn families() -> &'static [&'static str] {
    &FAMILIES
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut c = RunConfig::new(Command::SphereSuite);
        assert!(c.validate().is_ok());
        c.tol = Some(1e-8);
        assert!(matches!(c.validate(), Err(Error::Usage(_))));
        c.mode = Mode::Float;
        assert!(c.validate().is_ok());
        c.samples = 3;
        assert!(matches!(c.validate(), Err(Error::Usage(_))));
        c.seed = Some(1);
        assert!(c.validate().is_ok());
        c.mutate = Some("dkappa-coeff".into());
        assert!(c.validate().is_err());
        assert!("exact".parse::<Mode>().is_ok() && "fast".parse::<Mode>().is_err());
    }

    #[test]
    fn verify_structure_and_mutation() {
        let c = RunConfig::new(Command::VerifyStructure);
        let o = run(&c).unwrap();
        assert!(o.pass && o.exit_code() == 0);
        let mut m = c.clone();
        m.mutate = Some("dkappa-coeff".into());
        assert_eq!(run(&m).unwrap().exit_code(), 1);
        m.mutate = Some("nonsense".into());
        assert!(run(&m).is_err());
    }

    #[test]
    fn chern_families_at_e1() {
        let mut c = RunConfig::new(Command::Chern);
        c.family = Some("standard".into());
        let o = run(&c).unwrap();
        assert!(o.pass, "{:?}", o.report);
        assert_eq!(o.report["residual"], json!({"re": "-1", "im": "0"}));
        assert!(o.lines[0].starts_with("residual nonzero"));
        c.family = Some("remark1".into());
        let o = run(&c).unwrap();
        assert_eq!(o.report["H_signature"], json!([1, 2]));
        assert_eq!(o.report["residual"], json!({"re": "0", "im": "0"}));
        assert_eq!(o.lines[0], "residual zero: passes Chern's necessary condition, index (1,2)");
        c.family = Some("minus-standard".into());
        assert_eq!(run(&c).unwrap().report["orientation"], "-1");
    }

    #[test]
    fn sphere_suite_exact_point() {
        let o = run(&RunConfig::new(Command::SphereSuite)).unwrap();
        assert!(o.pass, "{:?}", o.report);
        assert_eq!(o.report["max_defect"], 0.0);
    }
}
