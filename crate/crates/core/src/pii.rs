//! The Painlevé II companion system and the Gambier half-shift.
//!
//! Parameters are coordinatised by `v1 = α + ½`, so the scalar equation
//! `q'' = 2q³ + tq + α` carries `α = v1 − ½`. The Hamiltonian convention is
//!
//! ```text
//! H = ½p² − (q² + t/2)p − v1 q,
//! q' = p − q² − t/2,   p' = 2qp + v1,
//! ```
//!
//! chosen so that eliminating p reproduces the scalar equation with
//! `α = v1 − ½` and the transformed Hamiltonian satisfies
//! `H₀ = −2^{−1/3}[P² − 2(Q² + T/2)P + T²/4] = −2^{−1/3}[2H_{1/2} + Q + T²/4]`
//! under the Gambier map — an algebraic cross-check carried in the test
//! suite, so a wrong convention cannot pass silently.
//!
//! The Gambier transformation relates solutions at `v1 = 0` and `v1 = ½`
//! with the variable scaling `T = −2^{−1/3} t`; in canonical variables:
//!
//! ```text
//! Q = 2^{−1/6} √p,   P = −2^{−1/3} [t/2 − p + q√(2p)].
//! ```

use crate::corners::{continue_roots, CornerError};
use crate::integrator::{integrate_field, IntegrateError, IntegrationConfig, PiiField, PiiTrajectory};
use num_complex::Complex64;
use thiserror::Error;

/// PII lattice parameter `v1 = α + ½`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiiParameter {
    pub v1: Complex64,
}

impl PiiParameter {
    pub fn new(v1: Complex64) -> Self {
        PiiParameter { v1 }
    }

    /// The scalar ODE parameter `α = v1 − ½`.
    pub fn alpha(self) -> Complex64 {
        self.v1 - 0.5
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum PiiError {
    #[error("inverse Gambier map needs Q ≠ 0")]
    ZeroQ,
}

pub(crate) const CBRT2: f64 = 1.2599210498948732; // 2^(1/3)
const INV_CBRT2: f64 = 0.7937005259840998; // 2^(-1/3)
const INV_SIXTH_ROOT2: f64 = 0.8908987181403393; // 2^(-1/6)

/// Residual of `q'' = 2q³ + tq + α` on the jet `(q, q'')`.
pub fn pii_residual(t: Complex64, q: Complex64, qdd: Complex64, alpha: Complex64) -> Complex64 {
    qdd - (2.0 * q * q * q + t * q + alpha)
}

/// The PII Hamiltonian `H = ½p² − (q² + t/2)p − v1 q`.
pub fn pii_hamiltonian(t: Complex64, q: Complex64, p: Complex64, v1: Complex64) -> Complex64 {
    0.5 * p * p - (q * q + 0.5 * t) * p - v1 * q
}

/// Right-hand side of the PII Hamilton equations.
pub fn pii_eom_rhs(t: Complex64, q: Complex64, p: Complex64, v1: Complex64) -> (Complex64, Complex64) {
    (p - q * q - 0.5 * t, 2.0 * q * p + v1)
}

/// Gambier map in canonical variables, `v1 = 0 → v1 = ½`, with an explicit
/// branch for √p.
pub fn gambier_forward(
    t: Complex64,
    q: Complex64,
    p: Complex64,
    sqrt_p: Complex64,
) -> (Complex64, Complex64, Complex64) {
    let _ = p;
    let t_cap = -INV_CBRT2 * t;
    let q_cap = INV_SIXTH_ROOT2 * sqrt_p;
    let sqrt2 = std::f64::consts::SQRT_2;
    let p_cap = -INV_CBRT2 * (0.5 * t - sqrt_p * sqrt_p + q * sqrt2 * sqrt_p);
    (t_cap, q_cap, p_cap)
}

/// Inverse Gambier map, `v1 = ½ → v1 = 0`.
pub fn gambier_inverse(
    t_cap: Complex64,
    q_cap: Complex64,
    p_cap: Complex64,
) -> Result<(Complex64, Complex64, Complex64), PiiError> {
    if q_cap == Complex64::new(0.0, 0.0) {
        return Err(PiiError::ZeroQ);
    }
    let t = -CBRT2 * t_cap;
    let q = -INV_CBRT2 * (p_cap - q_cap * q_cap - 0.5 * t_cap) / q_cap;
    let p = CBRT2 * q_cap * q_cap;
    Ok((t, q, p))
}

/// Branch-free derivative form of the Gambier map: returns `(T, Q²)` with
/// `2^{1/3} Q² = q' + q² + t/2`.
pub fn gambier_q_form(t: Complex64, q: Complex64, qd: Complex64) -> (Complex64, Complex64) {
    let t_cap = -INV_CBRT2 * t;
    let q_cap_sq = INV_CBRT2 * (qd + q * q + 0.5 * t);
    (t_cap, q_cap_sq)
}

/// Integrate the PII flow at parameter `v1` from `(t0, q0, p0)` to `t_end`.
///
/// The field is entire in t, but the shared stepper still rejects segments
/// through the origin; route around 0 if a window needs to cross it.
pub fn integrate_pii(
    v1: Complex64,
    t0: Complex64,
    q0: Complex64,
    p0: Complex64,
    t_end: Complex64,
    cfg: IntegrationConfig,
) -> Result<PiiTrajectory, IntegrateError> {
    integrate_field(PiiField { v1 }, t0, [q0, p0], t_end, cfg)
}

/// Branch-continued √p along the nodes of a PII trajectory.
pub fn continue_sqrt_p(tr: &PiiTrajectory) -> Result<Vec<Complex64>, CornerError> {
    let ps: Vec<Complex64> = (0..tr.len()).map(|k| tr.node_y(k)[1]).collect();
    continue_roots(&ps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::VectorField;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pii_residual_zero_solution() {
        assert_eq!(
            pii_residual(c(1.7, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
            c(0.0, 0.0)
        );
        let r0 = pii_residual(c(1.0, 0.0), c(0.5, 0.0), c(0.3, 0.0), c(0.2, 0.0));
        let r1 = pii_residual(c(1.0, 0.0), c(0.5, 0.0), c(1.3, 0.0), c(0.2, 0.0));
        assert!((r1 - r0 - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn airy_series_oracle() {
        // q = y'/y where y'' = -(t/2) y; q solves PII with α = -½ (v1 = 0).
        // Maclaurin series for y with y(0) = 1, y'(0) = 0.
        let n = 40;
        let mut a = vec![0.0f64; n];
        a[0] = 1.0;
        a[1] = 0.0;
        // y'' = -(t/2) y  =>  (k+2)(k+1) a_{k+2} = -(1/2) a_{k-1}
        for k in 1..n - 2 {
            a[k + 2] = -0.5 * a[k - 1] / (((k + 2) * (k + 1)) as f64);
        }
        let eval = |t: f64, order: usize| -> f64 {
            // order-th derivative of the series at t
            let mut s = 0.0;
            for (k, ak) in a.iter().enumerate().skip(order) {
                let mut coef = *ak;
                for j in 0..order {
                    coef *= (k - j) as f64;
                }
                s += coef * t.powi((k - order) as i32);
            }
            s
        };
        for t in [0.3, 0.7, 1.1] {
            let y = eval(t, 0);
            let yd = eval(t, 1);
            let ydd = eval(t, 2);
            let yddd = eval(t, 3);
            let q = yd / y;
            let qd = ydd / y - q * q;
            let qdd = yddd / y - 3.0 * ydd * yd / (y * y) + 2.0 * q * q * q;
            let _ = qd;
            let r = pii_residual(c(t, 0.0), c(q, 0.0), c(qdd, 0.0), c(-0.5, 0.0));
            assert!(r.norm() < 1e-9, "residual {} at t = {t}", r.norm());
        }
    }

    #[test]
    fn hamiltonian_convention() {
        // v1 = 0, p = 0 → H = 0 for all q, t.
        assert_eq!(
            pii_hamiltonian(c(3.0, 0.5), c(-2.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)),
            c(0.0, 0.0)
        );
        // eliminating p: q'' from the two flow equations equals 2q³+tq+(v1−½)
        let (t, q, p, v1) = (c(1.2, 0.3), c(0.7, -0.2), c(0.9, 0.4), c(0.37, 0.0));
        let (qd, pd) = pii_eom_rhs(t, q, p, v1);
        // q'' = p' − 2 q q' − ½
        let qdd = pd - 2.0 * q * qd - 0.5;
        let r = pii_residual(t, q, qdd, v1 - 0.5);
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn pii_field_second_derivatives() {
        let f = PiiField { v1: c(0.3, 0.0) };
        let (t, q, p) = (c(1.0, 0.2), c(0.4, 0.1), c(0.8, -0.5));
        let dy = f.rhs(t, [q, p]);
        let ddy = f.second(t, [q, p], dy);
        // compare with a finite difference of the rhs along the flow
        let h = 1e-6;
        let th = t + h;
        let qh = q + h * dy[0];
        let ph = p + h * dy[1];
        let dyh = f.rhs(th, [qh, ph]);
        assert!(((dyh[0] - dy[0]) / h - ddy[0]).norm() < 1e-4);
        assert!(((dyh[1] - dy[1]) / h - ddy[1]).norm() < 1e-4);
    }

    #[test]
    fn gambier_hand_values() {
        // p = 0: Q = 0, P = −2^{−1/3} t/2, T = −2^{−1/3} t.
        let (t_cap, q_cap, p_cap) = gambier_forward(c(1.0, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(q_cap, c(0.0, 0.0));
        assert!((t_cap - c(-INV_CBRT2, 0.0)).norm() < 1e-15);
        assert!((p_cap - c(-INV_CBRT2 * 0.5, 0.0)).norm() < 1e-15);

        // (t=1, q=1, p=2): T = −2^{−1/3}, Q = 2^{1/3}, P = −2^{−4/3}
        let (t_cap, q_cap, p_cap) =
            gambier_forward(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(2f64.sqrt(), 0.0));
        assert!((t_cap - c(-INV_CBRT2, 0.0)).norm() < 1e-15);
        assert!((q_cap - c(CBRT2, 0.0)).norm() < 1e-14);
        assert!((p_cap - c(-INV_CBRT2 / 2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gambier_roundtrip() {
        let (t, q, p) = (c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0));
        let (t_cap, q_cap, p_cap) = gambier_forward(t, q, p, p.sqrt());
        let (t2, q2, p2) = gambier_inverse(t_cap, q_cap, p_cap).unwrap();
        assert!((t2 - t).norm() < 1e-14);
        assert!((q2 - q).norm() < 1e-14);
        assert!((p2 - p).norm() < 1e-14);
    }

    #[test]
    fn gambier_inverse_hand_values() {
        // P = Q² + T/2 → q = 0
        let (t_cap, q_cap) = (c(0.8, 0.0), c(0.6, 0.0));
        let p_cap = q_cap * q_cap + 0.5 * t_cap;
        let (_, q, _) = gambier_inverse(t_cap, q_cap, p_cap).unwrap();
        assert_eq!(q, c(0.0, 0.0));
        assert_eq!(
            gambier_inverse(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
            Err(PiiError::ZeroQ)
        );
    }

    #[test]
    fn gambier_q_form_consistency() {
        // 2^{1/3} Q² = q' + q² + t/2 = p on flow-consistent jets
        let (t, q, p, v1) = (c(1.1, 0.4), c(0.5, -0.3), c(0.7, 0.2), c(0.0, 0.0));
        let (qd, _) = pii_eom_rhs(t, q, p, v1);
        let (_, q_cap_sq) = gambier_q_form(t, q, qd);
        assert!((CBRT2 * q_cap_sq - p).norm() < 1e-14);
        // hand value: (t=1, q=1, q') = ½ → Q² = 2^{-1/3}·2 = 2^{2/3}
        let (_, q_cap_sq) = gambier_q_form(c(1.0, 0.0), c(1.0, 0.0), c(0.5, 0.0));
        assert!((q_cap_sq - c(2f64.powf(2.0 / 3.0), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn gambier_transport() {
        // integrate at v1 = 0 and push through the map: the image satisfies
        // PII at α = 0 (residual via the image flow at v1 = ½).
        let tr = integrate_pii(
            c(0.0, 0.0),
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.8, 0.3),
            c(1.5, 0.0),
            IntegrationConfig::default(),
        )
        .unwrap();
        let roots = continue_sqrt_p(&tr).unwrap();
        for (k, root) in roots.iter().enumerate() {
            let t = tr.node_t(k);
            let [q, p] = tr.node_y(k);
            let (t_cap, q_cap, p_cap) = gambier_forward(t, q, p, *root);
            // Q' and Q'' from the target flow at v1 = ½
            let (qd_cap, pd_cap) = pii_eom_rhs(t_cap, q_cap, p_cap, c(0.5, 0.0));
            let qdd_cap = pd_cap - 2.0 * q_cap * qd_cap - 0.5;
            let r = pii_residual(t_cap, q_cap, qdd_cap, c(0.0, 0.0));
            assert!(r.norm() < 1e-7, "transported residual {} at node {k}", r.norm());
        }
    }

    #[test]
    fn airy_riccati_source_maps_to_zero() {
        // p0 = 0 at v1 = 0 stays exactly 0 along the flow; Q ≡ 0.
        let tr = integrate_pii(
            c(0.0, 0.0),
            c(0.5, 0.0),
            c(0.3, 0.0),
            c(0.0, 0.0),
            c(1.5, 0.0),
            IntegrationConfig::default(),
        )
        .unwrap();
        for k in 0..tr.len() {
            let [_, p] = tr.node_y(k);
            assert_eq!(p, c(0.0, 0.0));
            let (_, q_cap, _) = gambier_forward(tr.node_t(k), tr.node_y(k)[0], p, p.sqrt());
            assert_eq!(q_cap, c(0.0, 0.0));
        }
    }
}
