//! Verifiers for the additive and multiplicative identities induced by the
//! corner transformations.
//!
//! With `h` the Hamiltonian at the origin and `H_c` the four corner
//! Hamiltonians (all at `T = t/4`):
//!
//! ```text
//! T·H_W + T·H_S + T·H_E + T·H_N = t·h(t) − ¼          (Hamiltonian sum)
//! P_W + P_S + P_E + P_N = 4p                           (momentum sum)
//! T^{1/4} τ_W τ_S τ_E τ_N = τ(t)                       (τ product)
//! ```
//!
//! τ-functions are never materialised: τ is defined only through
//! `H = d/dt log τ`, so the product identity is verified in logarithmic-
//! derivative form, `1/(4t) + ¼ ΣH_c(T) = h(t)`, pointwise plus an
//! integrated drift over the window. The same policy applies to the PII
//! φ-factor product, which in log-derivative form is the additive relation
//! `H₀ + t²/8 = −2^{−1/3}(H_{1/2} + H_{−1/2})` with `H_{−1/2} = H_{1/2} + Q`.

use crate::corners::{
    self, corner_qp_jets, BranchedState, CornerError, CornerLabel, SignCorruption,
};
use crate::integrator::{PiiTrajectory, PiiiTrajectory};
use crate::jet::Jet2;
use crate::pii::{continue_sqrt_p, gambier_forward, pii_hamiltonian};
use crate::system::{hamiltonian, CanonicalState, ParameterPoint};
use crate::I;
use num_complex::Complex64;
use serde::Serialize;

/// Outcome of one identity check over a trajectory window.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    /// t-range of the window as two [re, im] pairs.
    pub window: [[f64; 2]; 2],
    /// Maximum pointwise residual magnitude over the window.
    pub max_residual: f64,
    /// Magnitude of the integrated residual (product identities).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<f64>,
    /// Which closed-form corner Hamiltonian each branch assignment realises.
    pub branch_diagnostic: String,
}

impl IdentityReport {
    fn new(identity: &str, window: (Complex64, Complex64)) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            window: [[window.0.re, window.0.im], [window.1.re, window.1.im]],
            max_residual: 0.0,
            drift: None,
            branch_diagnostic: String::new(),
        }
    }
}

fn bracket(c: CornerLabel, q: Complex64, a: Complex64, b: Complex64, r: Complex64) -> Complex64 {
    let qab = q * a * b;
    let half = Complex64::new(0.5, 0.0);
    match c {
        CornerLabel::W => -half - qab + I * r * (a - b),
        CornerLabel::S => half + qab - I * r * (a + b),
        CornerLabel::E => -half - qab - I * r * (a - b),
        CornerLabel::N => half + qab + I * r * (a + b),
    }
}

/// Closed form of a corner Hamiltonian: returns `T·H_c` given the source
/// Hamiltonian value `h`, with √t taken on the principal branch.
///
/// ```text
/// T·H_c = ¼ t h − 1/16 + ¼ [±½ ± q√p√(p−1) ± i√t(√p ∓ √(p−1))]
/// ```
pub fn corner_hamiltonian_closed_form(
    c: CornerLabel,
    bs: &BranchedState,
    h: Complex64,
) -> Complex64 {
    let t = bs.base.t;
    let r = t.sqrt();
    0.25 * t * h - Complex64::new(1.0 / 16.0, 0.0)
        + 0.25 * bracket(c, bs.base.q, bs.sqrt_p, bs.sqrt_pm1, r)
}

/// Structural cancellation: the four closed forms sum to `t·h − ¼` for any
/// state whatsoever. Returns the residual (rounding-level).
pub fn closed_form_sum_residual(bs: &BranchedState, h: Complex64) -> Complex64 {
    let total: Complex64 = CornerLabel::ALL
        .iter()
        .map(|c| corner_hamiltonian_closed_form(*c, bs, h))
        .sum();
    total - (bs.base.t * h - 0.25)
}

/// `P_W + P_S + P_E + P_N − 4p` for one branched state; rounding-level for
/// any consistent branch assignment.
pub fn momentum_sum_check(bs: &BranchedState) -> Result<Complex64, CornerError> {
    momentum_sum_check_with(bs, None)
}

/// [`momentum_sum_check`] with an optional sign corruption.
pub fn momentum_sum_check_with(
    bs: &BranchedState,
    corrupt: Option<SignCorruption>,
) -> Result<Complex64, CornerError> {
    let r = bs.base.t.sqrt();
    let mut sum = Complex64::new(0.0, 0.0);
    for c in CornerLabel::ALL {
        let (_, pp) = corner_qp_jets(
            c,
            Jet2::constant(bs.base.q),
            Jet2::constant(bs.sqrt_p),
            Jet2::constant(bs.sqrt_pm1),
            Jet2::constant(r),
            corrupt,
        )?;
        sum += pp.v;
    }
    Ok(sum - 4.0 * bs.base.p)
}

/// Transformed corner states at one node, with branch-continued radicals.
fn corner_states_at(
    bs: &BranchedState,
    sqrt_t: Complex64,
    corrupt: Option<SignCorruption>,
) -> Result<[CanonicalState; 4], CornerError> {
    let mut out = [CanonicalState::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 4];
    for (i, c) in CornerLabel::ALL.iter().enumerate() {
        let (qq, pp) = corner_qp_jets(
            *c,
            Jet2::constant(bs.base.q),
            Jet2::constant(bs.sqrt_p),
            Jet2::constant(bs.sqrt_pm1),
            Jet2::constant(sqrt_t),
            corrupt,
        )?;
        out[i] = CanonicalState::new(bs.base.t / 4.0, qq.v, pp.v);
    }
    Ok(out)
}

/// Identify which closed-form corner Hamiltonian each transformed state
/// realises under the current branch assignment. The closed forms are
/// anchored to the principal branch, so a flipped or wandered branch shows
/// up as a permutation of the corners.
fn branch_diagnostic(bs: &BranchedState, states: &[CanonicalState; 4], h: Complex64) -> String {
    let principal = corners::branch_init(bs.base);
    let mut parts = Vec::with_capacity(4);
    for (i, c) in CornerLabel::ALL.iter().enumerate() {
        let th = hamiltonian(states[i], c.target_params())
            .map(|hc| states[i].t * hc)
            .unwrap_or(Complex64::new(f64::NAN, 0.0));
        let best = CornerLabel::ALL
            .iter()
            .min_by(|x, y| {
                let dx = (corner_hamiltonian_closed_form(**x, &principal, h) - th).norm();
                let dy = (corner_hamiltonian_closed_form(**y, &principal, h) - th).norm();
                dx.partial_cmp(&dy).unwrap()
            })
            .unwrap();
        parts.push(format!("{}->{}", c.name(), best.name()));
    }
    parts.join(",")
}

/// Collects the realised corner assignment at the window's first and last
/// nodes; they differ when the continued branches crossed a cut.
#[derive(Default)]
struct BranchDiagnostic {
    first: String,
    last: String,
}

impl BranchDiagnostic {
    fn observe(
        &mut self,
        k: usize,
        total: usize,
        bs: &BranchedState,
        states: &[CanonicalState; 4],
        h: Complex64,
    ) {
        if k == 0 {
            self.first = branch_diagnostic(bs, states, h);
        }
        if k + 1 == total {
            self.last = branch_diagnostic(bs, states, h);
        }
    }

    fn finish(self) -> String {
        if self.last.is_empty() || self.first == self.last {
            self.first
        } else {
            format!("start {}; end {}", self.first, self.last)
        }
    }
}

/// Verify the Hamiltonian sum along a `v = (0,0)` trajectory, with each
/// `H_c` computed from the transformed states through the Hamiltonian; the
/// closed forms serve as an independent cross-check, never as the data.
pub fn hamiltonian_sum_check(tr: &PiiiTrajectory) -> Result<IdentityReport, CornerError> {
    hamiltonian_sum_check_with(tr, None)
}

/// [`hamiltonian_sum_check`] with an optional sign corruption.
pub fn hamiltonian_sum_check_with(
    tr: &PiiiTrajectory,
    corrupt: Option<SignCorruption>,
) -> Result<IdentityReport, CornerError> {
    if tr.params() != ParameterPoint::origin() {
        return Err(CornerError::InvalidParams);
    }
    let rads = corners::continued_radicals(tr)?;
    let mut report = IdentityReport::new("hamiltonian-sum", tr.t_range());
    let mut diag = BranchDiagnostic::default();
    for (k, bs) in rads.branched.iter().enumerate() {
        let h = hamiltonian(bs.base, ParameterPoint::origin())?;
        let states = corner_states_at(bs, rads.sqrt_t[k], corrupt)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, c) in CornerLabel::ALL.iter().enumerate() {
            let hc = hamiltonian(states[i], c.target_params())?;
            sum += states[i].t * hc;
        }
        let resid = (sum - (bs.base.t * h - 0.25)).norm();
        report.max_residual = report.max_residual.max(resid);
        diag.observe(k, rads.branched.len(), bs, &states, h);
    }
    report.branch_diagnostic = diag.finish();
    Ok(report)
}

/// Verify the τ product in log-derivative form along a `v = (0,0)`
/// trajectory: pointwise `|1/(4t) + ¼ ΣH_c(T) − h(t)|` plus integrated
/// drift over the window.
pub fn tau_product_check(tr: &PiiiTrajectory) -> Result<IdentityReport, CornerError> {
    tau_product_check_with(tr, None)
}

/// [`tau_product_check`] with an optional sign corruption.
pub fn tau_product_check_with(
    tr: &PiiiTrajectory,
    corrupt: Option<SignCorruption>,
) -> Result<IdentityReport, CornerError> {
    if tr.params() != ParameterPoint::origin() {
        return Err(CornerError::InvalidParams);
    }
    let rads = corners::continued_radicals(tr)?;
    let mut report = IdentityReport::new("tau-product", tr.t_range());
    let mut drift = Complex64::new(0.0, 0.0);
    let mut prev: Option<(Complex64, Complex64)> = None;
    let mut diag = BranchDiagnostic::default();
    for (k, bs) in rads.branched.iter().enumerate() {
        let h = hamiltonian(bs.base, ParameterPoint::origin())?;
        let states = corner_states_at(bs, rads.sqrt_t[k], corrupt)?;
        let mut sum_h = Complex64::new(0.0, 0.0);
        for (i, c) in CornerLabel::ALL.iter().enumerate() {
            sum_h += hamiltonian(states[i], c.target_params())?;
        }
        let t = bs.base.t;
        let resid = 0.25 / t + 0.25 * sum_h - h;
        report.max_residual = report.max_residual.max(resid.norm());
        if let Some((t_prev, r_prev)) = prev {
            drift += 0.5 * (r_prev + resid) * (t - t_prev);
        }
        prev = Some((t, resid));
        diag.observe(k, rads.branched.len(), bs, &states, h);
    }
    report.drift = Some(drift.norm());
    report.branch_diagnostic = diag.finish();
    Ok(report)
}

/// Verify the PII additive relation (equivalently the φ-factor product in
/// log-derivative form) along a `v1 = 0` trajectory:
///
/// ```text
/// H₀ + t²/8 + 2^{−1/3}(H_{1/2} + H_{−1/2}) = 0,    H_{−1/2} = H_{1/2} + Q.
/// ```
pub fn pii_identities_check(tr: &PiiTrajectory) -> Result<IdentityReport, CornerError> {
    let inv_cbrt2 = 1.0 / crate::pii::CBRT2;
    let roots = continue_sqrt_p(tr)?;
    let mut report = IdentityReport::new("pii-additive", tr.t_range());
    report.branch_diagnostic = "gambier-sqrt-p".to_string();
    let mut drift = Complex64::new(0.0, 0.0);
    let mut prev: Option<(Complex64, Complex64)> = None;
    for (k, root) in roots.iter().enumerate() {
        let t = tr.node_t(k);
        let [q, p] = tr.node_y(k);
        let h0 = pii_hamiltonian(t, q, p, Complex64::new(0.0, 0.0));
        let (t_cap, q_cap, p_cap) = gambier_forward(t, q, p, *root);
        let h_half = pii_hamiltonian(t_cap, q_cap, p_cap, Complex64::new(0.5, 0.0));
        let h_mhalf = h_half + q_cap;
        let resid = h0 + t * t / 8.0 + inv_cbrt2 * (h_half + h_mhalf);
        report.max_residual = report.max_residual.max(resid.norm());
        if let Some((t_prev, r_prev)) = prev {
            drift += 0.5 * (r_prev + resid) * (t - t_prev);
        }
        prev = Some((t, resid));
    }
    report.drift = Some(drift.norm());
    Ok(report)
}
