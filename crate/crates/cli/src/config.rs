//! JSON run configuration.
//!
//! Complex numbers appear as two-element arrays `[re, im]`; plain numbers
//! are accepted as shorthand for a real value. Every field has a default,
//! so `p3 verify` runs bare on the standard v = (0,0) window.

use num_complex::Complex64;
use painleve3::integrator::IntegrationConfig;
use painleve3::system::{CanonicalState, ParameterPoint};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum ComplexIn {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexIn {
    pub fn to_c64(self) -> Complex64 {
        match self {
            ComplexIn::Real(x) => Complex64::new(x, 0.0),
            ComplexIn::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

fn real(x: f64) -> ComplexIn {
    ComplexIn::Real(x)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiiSection {
    #[serde(default = "PiiSection::default_v1")]
    pub v1: ComplexIn,
    #[serde(default = "PiiSection::default_t0")]
    pub t0: ComplexIn,
    #[serde(default = "PiiSection::default_q0")]
    pub q0: ComplexIn,
    #[serde(default = "PiiSection::default_p0")]
    pub p0: ComplexIn,
    #[serde(default = "PiiSection::default_t_end")]
    pub t_end: ComplexIn,
}

impl PiiSection {
    fn default_v1() -> ComplexIn {
        real(0.0)
    }
    fn default_t0() -> ComplexIn {
        real(0.5)
    }
    fn default_q0() -> ComplexIn {
        real(0.3)
    }
    fn default_p0() -> ComplexIn {
        ComplexIn::Pair([0.8, 0.3])
    }
    fn default_t_end() -> ComplexIn {
        real(1.5)
    }
}

impl Default for PiiSection {
    fn default() -> Self {
        PiiSection {
            v1: Self::default_v1(),
            t0: Self::default_t0(),
            q0: Self::default_q0(),
            p0: Self::default_p0(),
            t_end: Self::default_t_end(),
        }
    }
}

/// On-disk configuration; see the README for the schema.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// "piii" (the III′ system) or "pii".
    #[serde(default = "RunConfig::default_system")]
    pub system: String,
    #[serde(default = "RunConfig::default_v")]
    pub v1: ComplexIn,
    #[serde(default = "RunConfig::default_v")]
    pub v2: ComplexIn,
    #[serde(default = "RunConfig::default_t0")]
    pub t0: ComplexIn,
    #[serde(default = "RunConfig::default_q0")]
    pub q0: ComplexIn,
    #[serde(default = "RunConfig::default_p0")]
    pub p0: ComplexIn,
    #[serde(default = "RunConfig::default_t_end")]
    pub t_end: ComplexIn,
    #[serde(default = "RunConfig::default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "RunConfig::default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default)]
    pub max_step: Option<f64>,
    #[serde(default = "RunConfig::default_pole_guard")]
    pub pole_guard: f64,
    /// Identity selection for `verify`; defaults to all of them.
    #[serde(default = "RunConfig::default_identities")]
    pub identities: Vec<String>,
    /// Pass/fail tolerance for `verify`.
    #[serde(default = "RunConfig::default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub corner: Option<String>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub pii: PiiSection,
}

impl RunConfig {
    fn default_system() -> String {
        "piii".to_string()
    }
    fn default_v() -> ComplexIn {
        real(0.0)
    }
    fn default_t0() -> ComplexIn {
        real(1.0)
    }
    fn default_q0() -> ComplexIn {
        real(0.5)
    }
    fn default_p0() -> ComplexIn {
        ComplexIn::Pair([0.3, 0.4])
    }
    fn default_t_end() -> ComplexIn {
        real(2.0)
    }
    fn default_rel_tol() -> f64 {
        1e-10
    }
    fn default_abs_tol() -> f64 {
        1e-12
    }
    fn default_pole_guard() -> f64 {
        1e6
    }
    fn default_identities() -> Vec<String> {
        ["hsum", "psum", "tau", "roundtrip", "weyl", "chain", "pii"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }
    fn default_tol() -> f64 {
        1e-8
    }

    pub fn params(&self) -> ParameterPoint {
        ParameterPoint::new(self.v1.to_c64(), self.v2.to_c64())
    }

    pub fn initial_state(&self) -> CanonicalState {
        CanonicalState::new(self.t0.to_c64(), self.q0.to_c64(), self.p0.to_c64())
    }

    pub fn integration(&self) -> IntegrationConfig {
        IntegrationConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step.unwrap_or(f64::INFINITY),
            pole_guard: self.pole_guard,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.system != "piii" && self.system != "pii" {
            return Err(format!("unknown system '{}'; use \"piii\" or \"pii\"", self.system));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err("tolerances must be positive".to_string());
        }
        if self.pole_guard <= 1.0 {
            return Err("pole_guard must exceed 1".to_string());
        }
        if self.system == "piii" && self.t0.to_c64() == Complex64::new(0.0, 0.0) {
            return Err("t0 must be nonzero".to_string());
        }
        Ok(())
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config deserialises")
    }
}

pub fn load(path: Option<&str>) -> Result<RunConfig, String> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read {p}: {e}"))?;
            let cfg: RunConfig =
                serde_json::from_str(&text).map_err(|e| format!("bad config {p}: {e}"))?;
            Ok(cfg)
        }
    }
}
