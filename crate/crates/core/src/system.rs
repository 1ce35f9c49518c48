//! Domain types and the Painlevé III′ Hamiltonian system.
//!
//! Conventions: the parameter lattice is coordinatised by `v = (v1, v2)` with
//! the two scale constants η₀ = η∞ = 1 fixed throughout, so the scalar ODE
//! parameters are always `(α, β, γ, δ) = (-4 v2, 4 (v1 + 1), 4, -4)`.
//! The Hamiltonian is
//!
//! ```text
//! t H = q²p² − (q² + v1 q − t) p + ½ (v1 + v2) q
//! ```
//!
//! with equations of motion
//!
//! ```text
//! t q' =  2q²p − q² − v1 q + t
//! t p' = −2qp² + (2q + v1) p − ½ (v1 + v2)
//! ```
//!
//! Eliminating `p` from the flow reproduces the III′ scalar equation, which
//! is what [`piii_prime_residual`] measures on a jet `(q, q', q'')`. The
//! standard scalar forms of P_V and P_III used by the transformation-chain
//! checks live here too, as residual functionals on jets.

use num_complex::Complex64;
use thiserror::Error;

/// Both scale constants of the III′ system are pinned to unity.
pub const ETA_0: f64 = 1.0;
/// See [`ETA_0`].
pub const ETA_INF: f64 = 1.0;

/// A point `(v1, v2)` on the B₂ parameter lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterPoint {
    pub v1: Complex64,
    pub v2: Complex64,
}

impl ParameterPoint {
    pub fn new(v1: Complex64, v2: Complex64) -> Self {
        ParameterPoint { v1, v2 }
    }

    /// Parameter point with real coordinates.
    pub fn real(v1: f64, v2: f64) -> Self {
        ParameterPoint::new(Complex64::new(v1, 0.0), Complex64::new(v2, 0.0))
    }

    pub fn origin() -> Self {
        ParameterPoint::real(0.0, 0.0)
    }
}

/// A phase-space point `(t, q, p)` of the Hamiltonian system; `t ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalState {
    pub t: Complex64,
    pub q: Complex64,
    pub p: Complex64,
}

impl CanonicalState {
    pub fn new(t: Complex64, q: Complex64, p: Complex64) -> Self {
        CanonicalState { t, q, p }
    }

    pub fn real(t: f64, q: f64, p: f64) -> Self {
        CanonicalState::new(
            Complex64::new(t, 0.0),
            Complex64::new(q, 0.0),
            Complex64::new(p, 0.0),
        )
    }
}

/// Scalar ODE parameters `(α, β, γ, δ)`.
///
/// Values produced by [`scalar_params`] always have γ = 4 and δ = −4; the
/// free constructor exists because the transformation-chain verifications
/// pass through scalar P_III/III′ forms at other parameter values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl ScalarParams {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Self {
        ScalarParams {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        ScalarParams::new(
            Complex64::new(alpha, 0.0),
            Complex64::new(beta, 0.0),
            Complex64::new(gamma, 0.0),
            Complex64::new(delta, 0.0),
        )
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum SystemError {
    #[error("invalid state: t = 0")]
    ZeroT,
    #[error("singular evaluation point: q = 0")]
    ZeroQ,
    #[error("singular evaluation point: y in {{0, 1}}")]
    SingularY,
    #[error("singular evaluation point: w = 0")]
    ZeroW,
}

/// Scalar ODE parameters attached to a lattice point:
/// `(α, β, γ, δ) = (−4 v2, 4 (v1 + 1), 4, −4)`.
pub fn scalar_params(v: ParameterPoint) -> ScalarParams {
    ScalarParams::new(-4.0 * v.v2, 4.0 * (v.v1 + 1.0), Complex64::new(4.0, 0.0), Complex64::new(-4.0, 0.0))
}

/// The Hamiltonian `H` with `tH = q²p² − (q² + v1 q − t)p + ½(v1+v2)q`.
pub fn hamiltonian(s: CanonicalState, v: ParameterPoint) -> Result<Complex64, SystemError> {
    if s.t == Complex64::new(0.0, 0.0) {
        return Err(SystemError::ZeroT);
    }
    let th = s.q * s.q * s.p * s.p - (s.q * s.q + v.v1 * s.q - s.t) * s.p
        + 0.5 * (v.v1 + v.v2) * s.q;
    Ok(th / s.t)
}

/// Right-hand side `(q', p')` of the Hamilton equations.
pub fn eom_rhs(s: CanonicalState, v: ParameterPoint) -> Result<(Complex64, Complex64), SystemError> {
    if s.t == Complex64::new(0.0, 0.0) {
        return Err(SystemError::ZeroT);
    }
    Ok(eom_rhs_unchecked(s.t, s.q, s.p, v))
}

pub(crate) fn eom_rhs_unchecked(
    t: Complex64,
    q: Complex64,
    p: Complex64,
    v: ParameterPoint,
) -> (Complex64, Complex64) {
    let qd = (2.0 * q * q * p - q * q - v.v1 * q + t) / t;
    let pd = (-2.0 * q * p * p + (2.0 * q + v.v1) * p - 0.5 * (v.v1 + v.v2)) / t;
    (qd, pd)
}

/// Second derivatives `(q'', p'')` along the flow, by differentiating the
/// equations of motion analytically (no finite differences).
pub fn eom_second(
    t: Complex64,
    q: Complex64,
    p: Complex64,
    qd: Complex64,
    pd: Complex64,
    v: ParameterPoint,
) -> (Complex64, Complex64) {
    // t q' = F, t p' = G; then q'' = (F' - q')/t with F' the total derivative.
    let fd = (4.0 * q * p - 2.0 * q - v.v1) * qd + 2.0 * q * q * pd + 1.0;
    let gd = (-2.0 * p * p + 2.0 * p) * qd + (-4.0 * q * p + 2.0 * q + v.v1) * pd;
    ((fd - qd) / t, (gd - pd) / t)
}

/// Residual of the III′ scalar equation on the jet `(q, q', q'')` at `t`:
///
/// ```text
/// q'' − [ q'²/q − q'/t + q²(γq + α)/(4t²) + β/(4t) + δ/(4q) ]
/// ```
pub fn piii_prime_residual(
    t: Complex64,
    q: Complex64,
    qd: Complex64,
    qdd: Complex64,
    sp: ScalarParams,
) -> Result<Complex64, SystemError> {
    if t == Complex64::new(0.0, 0.0) {
        return Err(SystemError::ZeroT);
    }
    if q == Complex64::new(0.0, 0.0) {
        return Err(SystemError::ZeroQ);
    }
    let rhs = qd * qd / q - qd / t + q * q * (sp.gamma * q + sp.alpha) / (4.0 * t * t)
        + sp.beta / (4.0 * t)
        + sp.delta / (4.0 * q);
    Ok(qdd - rhs)
}

/// Residual of the standard P_V scalar form on the jet `(y, y', y'')`:
///
/// ```text
/// y'' = (1/(2y) + 1/(y−1)) y'² − y'/t + (y−1)²(αy + β/y)/t² + γy/t + δy(y+1)/(y−1)
/// ```
#[allow(clippy::too_many_arguments)]
pub fn pv_residual(
    t: Complex64,
    y: Complex64,
    yd: Complex64,
    ydd: Complex64,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
) -> Result<Complex64, SystemError> {
    if t == Complex64::new(0.0, 0.0) {
        return Err(SystemError::ZeroT);
    }
    let one = Complex64::new(1.0, 0.0);
    if y == Complex64::new(0.0, 0.0) || y == one {
        return Err(SystemError::SingularY);
    }
    let rhs = (0.5 / y + 1.0 / (y - one)) * yd * yd - yd / t
        + (y - one) * (y - one) * (alpha * y + beta / y) / (t * t)
        + gamma * y / t
        + delta * y * (y + one) / (y - one);
    Ok(ydd - rhs)
}

/// Residual of the standard P_III scalar form on the jet `(w, w', w'')`:
///
/// ```text
/// w'' = w'²/w − w'/t + (αw² + β)/t + γw³ + δ/w
/// ```
#[allow(clippy::too_many_arguments)]
pub fn piii_residual(
    t: Complex64,
    w: Complex64,
    wd: Complex64,
    wdd: Complex64,
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
) -> Result<Complex64, SystemError> {
    if t == Complex64::new(0.0, 0.0) {
        return Err(SystemError::ZeroT);
    }
    if w == Complex64::new(0.0, 0.0) {
        return Err(SystemError::ZeroW);
    }
    let rhs = wd * wd / w - wd / t + (alpha * w * w + beta) / t + gamma * w * w * w + delta / w;
    Ok(wdd - rhs)
}
