//! Subcommand implementations.
//!
//! Exit-code contract: 0 success, 2 runtime/config error (with a
//! machine-readable JSON object on stderr), 3 identity failure.

use crate::config::RunConfig;
use num_complex::Complex64;
use painleve3::classical::{self, BesselKind, BesselTauSpec, ShiftOp};
use painleve3::corners::{self, CornerLabel, SignCorruption};
use painleve3::identities::{self, IdentityReport};
use painleve3::integrator::{integrate, IntegrateError, PiiiTrajectory};
use painleve3::pii;
use painleve3::system::{hamiltonian, CanonicalState, ParameterPoint};
use painleve3::weyl::{
    apply_generator, apply_word, generator_params, pushforward_check, Generator, GeneratorWord,
};
use serde::Serialize;

pub struct AppError {
    pub kind: String,
    pub message: String,
}

impl AppError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        AppError {
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        AppError::new("ConfigError", message)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            error: &'a str,
            message: &'a str,
        }
        serde_json::to_string(&Wire {
            error: &self.kind,
            message: &self.message,
        })
        .unwrap()
    }
}

impl From<IntegrateError> for AppError {
    fn from(e: IntegrateError) -> Self {
        let kind = match e {
            IntegrateError::PoleEncountered { .. } => "PoleEncountered",
            IntegrateError::SegmentThroughOrigin => "SegmentThroughOrigin",
            IntegrateError::StepSizeUnderflow { .. } => "StepSizeUnderflow",
            IntegrateError::BadConfig => "BadConfig",
            IntegrateError::OutsideSegment { .. } => "OutsideSegment",
        };
        AppError::new(kind, e.to_string())
    }
}

impl From<corners::CornerError> for AppError {
    fn from(e: corners::CornerError) -> Self {
        let kind = match e {
            corners::CornerError::InvalidParams => "InvalidParams",
            corners::CornerError::ZeroDenominator => "ZeroDenominator",
            corners::CornerError::DegenerateLocus => "DegenerateLocus",
            corners::CornerError::AmbiguousBranch { .. } => "AmbiguousBranch",
            corners::CornerError::SingularStage { .. } => "SingularStage",
            corners::CornerError::System(_) => "SingularPoint",
            corners::CornerError::Trajectory(_) => "TrajectoryError",
        };
        AppError::new(kind, e.to_string())
    }
}

fn write_out(out: Option<&str>, content: &str) -> Result<(), AppError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| AppError::new("IoError", format!("cannot write {path}: {e}"))),
    }
}

fn csv_row(cols: &[f64]) -> String {
    cols.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

const STATE_HEADER: &str = "t_re,t_im,q_re,q_im,p_re,p_im,H_re,H_im";

// --- integrate ---

pub fn cmd_integrate(cfg: &RunConfig, out: Option<&str>) -> Result<i32, AppError> {
    cfg.validate().map_err(AppError::config)?;
    let mut csv = String::from(STATE_HEADER);
    csv.push('\n');
    if cfg.system == "pii" {
        let s = &cfg.pii;
        let v1 = s.v1.to_c64();
        let tr = pii::integrate_pii(
            v1,
            s.t0.to_c64(),
            s.q0.to_c64(),
            s.p0.to_c64(),
            s.t_end.to_c64(),
            cfg.integration(),
        )?;
        for k in 0..tr.len() {
            let t = tr.node_t(k);
            let [q, p] = tr.node_y(k);
            let h = pii::pii_hamiltonian(t, q, p, v1);
            csv.push_str(&csv_row(&[t.re, t.im, q.re, q.im, p.re, p.im, h.re, h.im]));
            csv.push('\n');
        }
    } else {
        let v = cfg.params();
        let tr = integrate(v, cfg.initial_state(), cfg.t_end.to_c64(), cfg.integration())?;
        for k in 0..tr.len() {
            let s = tr.node_state(k);
            let h = hamiltonian(s, v).map_err(|e| AppError::new("SingularPoint", e.to_string()))?;
            csv.push_str(&csv_row(&[
                s.t.re, s.t.im, s.q.re, s.q.im, s.p.re, s.p.im, h.re, h.im,
            ]));
            csv.push('\n');
        }
    }
    write_out(out, &csv)?;
    Ok(0)
}

// --- transform ---

fn parse_corner(name: &str) -> Result<CornerLabel, AppError> {
    match name.to_ascii_uppercase().as_str() {
        "W" => Ok(CornerLabel::W),
        "S" => Ok(CornerLabel::S),
        "E" => Ok(CornerLabel::E),
        "N" => Ok(CornerLabel::N),
        other => Err(AppError::config(format!("unknown corner '{other}'"))),
    }
}

pub fn cmd_transform(
    cfg: &RunConfig,
    corner: Option<&str>,
    out: Option<&str>,
) -> Result<i32, AppError> {
    cfg.validate().map_err(AppError::config)?;
    let corner = corner
        .map(Ok)
        .or_else(|| cfg.corner.as_deref().map(Ok))
        .unwrap_or_else(|| Err(AppError::config("transform needs --corner W|S|E|N")))?;
    let corner = parse_corner(corner)?;
    let v = cfg.params();
    if v != ParameterPoint::origin() {
        return Err(AppError::config("corner transformations act at v = (0,0)"));
    }
    let tr = integrate(v, cfg.initial_state(), cfg.t_end.to_c64(), cfg.integration())?;
    let branched = corners::branch_continue(&tr)?;
    let target = corner.target_params();
    let mut csv = String::from(STATE_HEADER);
    csv.push('\n');
    for bs in &branched {
        let s = corners::to_corner(corner, bs, v)?;
        let h = hamiltonian(s, target).map_err(|e| AppError::new("SingularPoint", e.to_string()))?;
        csv.push_str(&csv_row(&[
            s.t.re, s.t.im, s.q.re, s.q.im, s.p.re, s.p.im, h.re, h.im,
        ]));
        csv.push('\n');
    }
    write_out(out, &csv)?;
    Ok(0)
}

// --- verify ---

#[derive(Serialize)]
struct VerifyEntry {
    #[serde(flatten)]
    report: IdentityReport,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    tol: f64,
    pass: bool,
    reports: Vec<VerifyEntry>,
}

pub fn parse_corruption(name: &str) -> Result<SignCorruption, AppError> {
    match name.to_ascii_lowercase().as_str() {
        "qw" => Ok(SignCorruption::QW),
        "pw" => Ok(SignCorruption::PW),
        "qs" => Ok(SignCorruption::QS),
        "ps" => Ok(SignCorruption::PS),
        "qe" => Ok(SignCorruption::QE),
        "pe" => Ok(SignCorruption::PE),
        "qn" => Ok(SignCorruption::QN),
        "pn" => Ok(SignCorruption::PN),
        other => Err(AppError::config(format!(
            "unknown corruption '{other}' (expected one of qw,pw,qs,ps,qe,pe,qn,pn)"
        ))),
    }
}

struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }

    fn complex(&mut self, lo: f64, hi: f64) -> Complex64 {
        Complex64::new(self.uniform(lo, hi), self.uniform(lo, hi))
    }
}

/// Involutions, shift actions, parameter relations, and a T1 pushforward,
/// folded into one residual.
fn weyl_residual(tr: &PiiiTrajectory) -> Result<f64, AppError> {
    let mut rng = SplitMix(0x5eed_cafe_f00d_0001);
    let mut worst: f64 = 0.0;
    let mut produced = 0usize;
    while produced < 100 {
        let v = ParameterPoint::new(rng.complex(-1.5, 1.5), rng.complex(-1.5, 1.5));
        let s = CanonicalState::new(
            rng.complex(1.0, 2.0),
            rng.complex(-1.5, 1.5),
            rng.complex(-1.5, 1.5),
        );
        if s.q.norm() < 0.1 || (s.p - Complex64::new(1.0, 0.0)).norm() < 0.1 {
            continue;
        }
        produced += 1;
        for g in [Generator::S0, Generator::S1, Generator::S2] {
            let once = apply_generator(g, v, s)
                .map_err(|e| AppError::new("SingularPoint", e.to_string()))?;
            let twice = apply_generator(g, once.params_out, once.state_out)
                .map_err(|e| AppError::new("SingularPoint", e.to_string()))?;
            worst = worst
                .max((twice.state_out.q - s.q).norm())
                .max((twice.state_out.p - s.p).norm())
                .max((twice.state_out.t - s.t).norm())
                .max((twice.params_out.v1 - v.v1).norm())
                .max((twice.params_out.v2 - v.v2).norm());
        }
    }

    // shift actions on parameters are exact
    let v = ParameterPoint::real(0.25, -0.75);
    let s = CanonicalState::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.7, 0.1),
        Complex64::new(0.3, 0.5),
    );
    let r1 = apply_word(&GeneratorWord::t1(), v, s)
        .map_err(|e| AppError::new("SingularPoint", e.to_string()))?;
    worst = worst
        .max((r1.params_out.v1 - (v.v1 + 1.0)).norm())
        .max((r1.params_out.v2 - (v.v2 + 1.0)).norm());
    let r2 = apply_word(&GeneratorWord::t2(), v, s)
        .map_err(|e| AppError::new("SingularPoint", e.to_string()))?;
    worst = worst
        .max((r2.params_out.v1 - (v.v1 + 1.0)).norm())
        .max((r2.params_out.v2 - (v.v2 - 1.0)).norm());

    // (s1 s2)^4 = id and (s0 s1)^2 = id on parameters
    let mut w = v;
    for _ in 0..4 {
        w = generator_params(Generator::S1, generator_params(Generator::S2, w));
    }
    worst = worst.max((w.v1 - v.v1).norm()).max((w.v2 - v.v2).norm());
    let mut w = v;
    for _ in 0..2 {
        w = generator_params(Generator::S0, generator_params(Generator::S1, w));
    }
    worst = worst.max((w.v1 - v.v1).norm()).max((w.v2 - v.v2).norm());

    // T1 pushforward along the trajectory
    for k in 0..tr.len() {
        let r = pushforward_check(&GeneratorWord::t1(), tr.params(), tr.node_state(k))
            .map_err(|e| AppError::new("SingularPoint", e.to_string()))?;
        worst = worst.max(r);
    }
    Ok(worst)
}

fn manual_report(identity: &str, tr: &PiiiTrajectory, residual: f64) -> IdentityReport {
    let (a, b) = tr.t_range();
    IdentityReport {
        identity: identity.to_string(),
        window: [[a.re, a.im], [b.re, b.im]],
        max_residual: residual,
        drift: None,
        branch_diagnostic: String::new(),
    }
}

pub fn cmd_verify(
    cfg: &RunConfig,
    identities_flag: Option<&str>,
    tol_flag: Option<f64>,
    corrupt: Option<&str>,
    out: Option<&str>,
) -> Result<i32, AppError> {
    cfg.validate().map_err(AppError::config)?;
    let tol = tol_flag.unwrap_or(cfg.tol);
    let corrupt = corrupt.map(parse_corruption).transpose()?;
    let names: Vec<String> = match identities_flag {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
        None => cfg.identities.clone(),
    };
    let known = ["hsum", "psum", "tau", "roundtrip", "weyl", "chain", "pii"];
    for n in &names {
        if !known.contains(&n.as_str()) {
            return Err(AppError::config(format!(
                "unknown identity '{n}' (expected a subset of {})",
                known.join(",")
            )));
        }
    }

    let v = cfg.params();
    if v != ParameterPoint::origin() {
        return Err(AppError::config("identity verification runs at v = (0,0)"));
    }
    let tr = integrate(v, cfg.initial_state(), cfg.t_end.to_c64(), cfg.integration())?;

    let mut reports = Vec::new();
    for name in &names {
        let report = match name.as_str() {
            "hsum" => identities::hamiltonian_sum_check_with(&tr, corrupt)?,
            "tau" => identities::tau_product_check_with(&tr, corrupt)?,
            "psum" => {
                let branched = corners::branch_continue(&tr)?;
                let mut worst: f64 = 0.0;
                for bs in &branched {
                    worst = worst.max(identities::momentum_sum_check_with(bs, corrupt)?.norm());
                }
                let mut r = manual_report("momentum-sum", &tr, worst);
                r.branch_diagnostic = "continued".to_string();
                r
            }
            "roundtrip" => manual_report("w-roundtrip", &tr, corners::roundtrip_check(&tr)?),
            "weyl" => manual_report("weyl-group", &tr, weyl_residual(&tr)?),
            "chain" => {
                let rep = corners::verify_proof_chain(&tr)?;
                let worst = rep
                    .stage_residuals
                    .iter()
                    .cloned()
                    .fold(0.0f64, f64::max)
                    .max(rep.direct_match);
                manual_report("transformation-chain", &tr, worst)
            }
            "pii" => {
                let s = &cfg.pii;
                let tr2 = pii::integrate_pii(
                    s.v1.to_c64(),
                    s.t0.to_c64(),
                    s.q0.to_c64(),
                    s.p0.to_c64(),
                    s.t_end.to_c64(),
                    cfg.integration(),
                )?;
                identities::pii_identities_check(&tr2)?
            }
            _ => unreachable!(),
        };
        reports.push(report);
    }

    let entries: Vec<VerifyEntry> = reports
        .into_iter()
        .map(|report| {
            let pass = report.max_residual < tol && report.drift.is_none_or(|d| d < tol);
            VerifyEntry { report, pass }
        })
        .collect();
    let all_pass = entries.iter().all(|e| e.pass);
    let output = VerifyOutput {
        tol,
        pass: all_pass,
        reports: entries,
    };
    let mut json = serde_json::to_string_pretty(&output).unwrap();
    json.push('\n');
    write_out(out, &json)?;
    Ok(if all_pass { 0 } else { 3 })
}

// --- classify ---

fn parse_real(text: &str) -> Result<f64, AppError> {
    if let Some((num, den)) = text.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| AppError::config(format!("bad number '{text}'")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| AppError::config(format!("bad number '{text}'")))?;
        if d == 0.0 {
            return Err(AppError::config("zero denominator"));
        }
        Ok(n / d)
    } else {
        text.trim()
            .parse()
            .map_err(|_| AppError::config(format!("bad number '{text}'")))
    }
}

pub fn cmd_classify(v1: &str, v2: &str, out: Option<&str>) -> Result<i32, AppError> {
    let v1 = parse_real(v1)?;
    let v2 = parse_real(v2)?;
    let r = classical::classify(ParameterPoint::real(v1, v2))
        .map_err(|e| AppError::new("ClassifyError", e.to_string()))?;
    #[derive(Serialize)]
    struct Wire {
        v1: f64,
        v2: f64,
        class: classical::SolutionClass,
        mixed_parity: bool,
    }
    let mut json = serde_json::to_string(&Wire {
        v1,
        v2,
        class: r.class,
        mixed_parity: r.mixed_parity,
    })
    .unwrap();
    json.push('\n');
    write_out(out, &json)?;
    Ok(0)
}

// --- rational ---

pub fn cmd_rational(k: u32, out: Option<&str>) -> Result<i32, AppError> {
    let mut sol = classical::rational_seed();
    for _ in 0..k {
        sol = classical::rational_step(&sol, ShiftOp::T1)
            .map_err(|e| AppError::new("IdenticallySingular", e.to_string()))?;
    }
    let (rq, rp) = classical::eom_residual_exact(&sol);
    #[derive(Serialize)]
    struct Wire {
        k: u32,
        residual_is_zero: bool,
        solution: classical::RationalSolution,
    }
    let mut json = serde_json::to_string_pretty(&Wire {
        k,
        residual_is_zero: rq.is_zero() && rp.is_zero(),
        solution: sol,
    })
    .unwrap();
    json.push('\n');
    write_out(out, &json)?;
    Ok(0)
}

// --- bessel-tau ---

#[allow(clippy::too_many_arguments)]
pub fn cmd_bessel_tau(
    n: usize,
    nu: f64,
    nu_im: f64,
    c: f64,
    c_im: f64,
    kind: &str,
    t: f64,
    t_max: Option<f64>,
    points: usize,
    out: Option<&str>,
) -> Result<i32, AppError> {
    let kind = match kind.to_ascii_lowercase().as_str() {
        "ik" => BesselKind::IK,
        "jy" => BesselKind::JY,
        other => return Err(AppError::config(format!("unknown kind '{other}' (ik|jy)"))),
    };
    let spec = BesselTauSpec {
        n,
        nu: Complex64::new(nu, nu_im),
        c: Complex64::new(c, c_im),
        kind,
    };
    let grid: Vec<f64> = match t_max {
        None => vec![t],
        Some(tm) => {
            if points < 2 {
                return Err(AppError::config("--points must be at least 2 for a grid"));
            }
            (0..points)
                .map(|k| t + (tm - t) * k as f64 / (points - 1) as f64)
                .collect()
        }
    };
    let mut csv = String::from("t_re,t_im,tau_re,tau_im\n");
    for tv in grid {
        let val = classical::bessel_tau(&spec, Complex64::new(tv, 0.0))
            .map_err(|e| AppError::new("BesselTauError", e.to_string()))?;
        csv.push_str(&csv_row(&[tv, 0.0, val.re, val.im]));
        csv.push('\n');
    }
    write_out(out, &csv)?;
    Ok(0)
}
