//! Adaptive integration of the Hamiltonian flows in the complex t-plane.
//!
//! The stepper is the classic Dormand–Prince 5(4) embedded pair with the
//! fourth-order continuous extension, marching along a straight segment
//! `t(τ) = t0 + τ (t1 − t0)`, `τ ∈ [0, 1]`, in the real segment parameter.
//! One stepper drives two vector fields: the III′ flow and the companion
//! P_II flow (see [`crate::pii`]). Movable poles are handled by a magnitude
//! guard: when `|q|` or `|p|` exceeds `pole_guard` the run aborts with
//! [`IntegrateError::PoleEncountered`] — there is no pole continuation.

use crate::system::{self, CanonicalState, ParameterPoint};
use num_complex::Complex64;
use thiserror::Error;

/// Tolerances and guards for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct IntegrationConfig {
    /// Relative tolerance per step (default 1e-10).
    pub rel_tol: f64,
    /// Absolute tolerance per step (default 1e-12).
    pub abs_tol: f64,
    /// Upper bound on the step in the segment parameter τ ∈ [0, 1], measured
    /// in t-units (default: unbounded).
    pub max_step: f64,
    /// Magnitude bound on |q|, |p| beyond which a movable singularity is
    /// reported (default 1e6).
    pub pole_guard: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            pole_guard: 1e6,
        }
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum IntegrateError {
    #[error("movable singularity: |q| or |p| exceeded the pole guard near t = {t}")]
    PoleEncountered { t: Complex64 },
    #[error("integration segment passes through t = 0")]
    SegmentThroughOrigin,
    #[error("step size underflow near t = {t}")]
    StepSizeUnderflow { t: Complex64 },
    #[error("invalid integration configuration")]
    BadConfig,
    #[error("t = {t} is outside the trajectory segment")]
    OutsideSegment { t: Complex64 },
}

/// A first-order complex 2-system `y' = f(t, y)` with analytically supplied
/// second derivatives (used for jets; never finite differences).
pub trait VectorField: Clone {
    fn rhs(&self, t: Complex64, y: [Complex64; 2]) -> [Complex64; 2];
    /// `(y1'', y2'')` given the state and the first derivatives.
    fn second(&self, t: Complex64, y: [Complex64; 2], dy: [Complex64; 2]) -> [Complex64; 2];
}

/// The Painlevé III′ Hamiltonian flow at a fixed parameter point.
#[derive(Debug, Clone, Copy)]
pub struct PiiiField {
    pub v: ParameterPoint,
}

impl VectorField for PiiiField {
    fn rhs(&self, t: Complex64, y: [Complex64; 2]) -> [Complex64; 2] {
        let (qd, pd) = system::eom_rhs_unchecked(t, y[0], y[1], self.v);
        [qd, pd]
    }

    fn second(&self, t: Complex64, y: [Complex64; 2], dy: [Complex64; 2]) -> [Complex64; 2] {
        let (qdd, pdd) = system::eom_second(t, y[0], y[1], dy[0], dy[1], self.v);
        [qdd, pdd]
    }
}

/// The companion P_II Hamiltonian flow: `q' = p − q² − t/2`, `p' = 2qp + v1`.
#[derive(Debug, Clone, Copy)]
pub struct PiiField {
    pub v1: Complex64,
}

impl VectorField for PiiField {
    fn rhs(&self, t: Complex64, y: [Complex64; 2]) -> [Complex64; 2] {
        let (q, p) = (y[0], y[1]);
        [p - q * q - 0.5 * t, 2.0 * q * p + self.v1]
    }

    fn second(&self, t: Complex64, y: [Complex64; 2], dy: [Complex64; 2]) -> [Complex64; 2] {
        let _ = t;
        let (q, p) = (y[0], y[1]);
        let (qd, pd) = (dy[0], dy[1]);
        [pd - 2.0 * q * qd - 0.5, 2.0 * (qd * p + q * pd)]
    }
}

// Dormand–Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// Error coefficients (5th-order minus embedded 4th-order weights).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output coefficients for the fourth-order continuous extension.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone)]
struct DenseStep {
    tau0: f64,
    h: f64,
    // rcont[component][coefficient]
    rcont: [[Complex64; 5]; 2],
}

/// The result of an [`integrate`] run: accepted nodes plus per-step dense
/// output, all parameterised on the straight segment from `t_start` to
/// `t_end`. Immutable once constructed.
#[derive(Debug, Clone)]
pub struct Trajectory<F: VectorField> {
    field: F,
    t_start: Complex64,
    t_end: Complex64,
    taus: Vec<f64>,
    states: Vec<[Complex64; 2]>,
    steps: Vec<DenseStep>,
}

/// Trajectory of the III′ flow.
pub type PiiiTrajectory = Trajectory<PiiiField>;
/// Trajectory of the companion P_II flow.
pub type PiiTrajectory = Trajectory<PiiField>;

/// Value and first two derivatives of both canonical coordinates at a point
/// of a trajectory. `qdd`/`pdd` come from differentiating the equations of
/// motion, not from the interpolant.
#[derive(Debug, Clone, Copy)]
pub struct StateJet {
    pub t: Complex64,
    pub q: Complex64,
    pub qd: Complex64,
    pub qdd: Complex64,
    pub p: Complex64,
    pub pd: Complex64,
    pub pdd: Complex64,
}

impl<F: VectorField> Trajectory<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn t_range(&self) -> (Complex64, Complex64) {
        (self.t_start, self.t_end)
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    fn t_of_tau(&self, tau: f64) -> Complex64 {
        self.t_start + tau * (self.t_end - self.t_start)
    }

    pub fn node_t(&self, k: usize) -> Complex64 {
        self.t_of_tau(self.taus[k])
    }

    pub fn node_y(&self, k: usize) -> [Complex64; 2] {
        self.states[k]
    }

    /// Iterate `(t, [q, p])` over the accepted nodes.
    pub fn nodes(&self) -> impl Iterator<Item = (Complex64, [Complex64; 2])> + '_ {
        (0..self.len()).map(move |k| (self.node_t(k), self.states[k]))
    }

    fn tau_of_t(&self, t: Complex64) -> Result<f64, IntegrateError> {
        let dir = self.t_end - self.t_start;
        if dir == Complex64::new(0.0, 0.0) {
            return if (t - self.t_start).norm() <= 1e-12 * (1.0 + self.t_start.norm()) {
                Ok(0.0)
            } else {
                Err(IntegrateError::OutsideSegment { t })
            };
        }
        let z = (t - self.t_start) / dir;
        let slack = 1e-9;
        if z.im.abs() > slack * (1.0 + z.re.abs()) || z.re < -slack || z.re > 1.0 + slack {
            return Err(IntegrateError::OutsideSegment { t });
        }
        Ok(z.re.clamp(0.0, 1.0))
    }

    /// Dense-output interpolation; exact at the nodes.
    pub fn sample_y(&self, t: Complex64) -> Result<[Complex64; 2], IntegrateError> {
        let tau = self.tau_of_t(t)?;
        if self.steps.is_empty() {
            return Ok(self.states[0]);
        }
        // Locate the step containing tau (taus are strictly increasing).
        let k = match self
            .taus
            .binary_search_by(|a| a.partial_cmp(&tau).unwrap())
        {
            Ok(i) => i.min(self.steps.len()),
            Err(i) => i,
        };
        // Snap to a node when the t → τ roundtrip lands within rounding of
        // one; node spacing is many orders above this window.
        for j in [k.saturating_sub(1), k, (k + 1).min(self.taus.len() - 1)] {
            if (self.taus[j] - tau).abs() <= 1e-14 {
                return Ok(self.states[j]);
            }
        }
        if k == 0 {
            return Ok(self.states[0]);
        }
        let step = &self.steps[k - 1];
        let theta = ((tau - step.tau0) / step.h).clamp(0.0, 1.0);
        let th1 = 1.0 - theta;
        let mut y = [Complex64::new(0.0, 0.0); 2];
        for (i, yi) in y.iter_mut().enumerate() {
            let rc = &step.rcont[i];
            *yi = rc[0] + theta * (rc[1] + th1 * (rc[2] + theta * (rc[3] + th1 * rc[4])));
        }
        Ok(y)
    }

    /// State and first two derivatives at `t`; derivatives analytic from the
    /// vector field.
    pub fn jet_y(&self, t: Complex64) -> Result<StateJet, IntegrateError> {
        let y = self.sample_y(t)?;
        let dy = self.field.rhs(t, y);
        let ddy = self.field.second(t, y, dy);
        Ok(StateJet {
            t,
            q: y[0],
            qd: dy[0],
            qdd: ddy[0],
            p: y[1],
            pd: dy[1],
            pdd: ddy[1],
        })
    }
}

impl Trajectory<PiiiField> {
    /// Lattice parameters this trajectory solves.
    pub fn params(&self) -> ParameterPoint {
        self.field.v
    }

    pub fn node_state(&self, k: usize) -> CanonicalState {
        let y = self.states[k];
        CanonicalState::new(self.node_t(k), y[0], y[1])
    }

    pub fn sample(&self, t: Complex64) -> Result<CanonicalState, IntegrateError> {
        let y = self.sample_y(t)?;
        Ok(CanonicalState::new(t, y[0], y[1]))
    }

    /// Jet `(t, q, q', q'', p, p', p'')` at `t` on the segment.
    pub fn jet(&self, t: Complex64) -> Result<StateJet, IntegrateError> {
        self.jet_y(t)
    }
}

/// Shortest distance from the origin to the segment `[t0, t1]`.
fn segment_origin_distance(t0: Complex64, t1: Complex64) -> f64 {
    let d = t1 - t0;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return t0.norm();
    }
    // Projection of -t0 onto d, clamped to the segment.
    let s = (-(t0.re * d.re + t0.im * d.im) / len2).clamp(0.0, 1.0);
    (t0 + s * d).norm()
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end` along the straight segment.
pub fn integrate_field<F: VectorField>(
    field: F,
    t0: Complex64,
    y0: [Complex64; 2],
    t_end: Complex64,
    cfg: IntegrationConfig,
) -> Result<Trajectory<F>, IntegrateError> {
    if !(cfg.rel_tol > 0.0 && cfg.abs_tol > 0.0 && cfg.pole_guard > 1.0) {
        return Err(IntegrateError::BadConfig);
    }
    let dir = t_end - t0;
    if segment_origin_distance(t0, t_end) < 1e-12 * (t0.norm() + t_end.norm()).max(1e-300) {
        return Err(IntegrateError::SegmentThroughOrigin);
    }

    let mut tr = Trajectory {
        field: field.clone(),
        t_start: t0,
        t_end,
        taus: vec![0.0],
        states: vec![y0],
        steps: Vec::new(),
    };
    if dir == Complex64::new(0.0, 0.0) {
        // Empty integration: a single-node trajectory.
        return Ok(tr);
    }

    let seg_len = dir.norm();
    let h_cap = (cfg.max_step / seg_len).min(1.0);
    // RHS in the segment parameter: dy/dτ = dir · f(t(τ), y).
    let f = |tau: f64, y: [Complex64; 2]| -> [Complex64; 2] {
        let t = t0 + tau * dir;
        let dy = field.rhs(t, y);
        [dir * dy[0], dir * dy[1]]
    };

    let mut tau = 0.0f64;
    let mut y = y0;
    let mut k1 = f(tau, y);
    let mut h = (0.01f64).min(h_cap);
    let h_floor = 1e-14;
    let mut facmax = 10.0;
    let mut steps_taken = 0usize;

    while tau < 1.0 {
        if steps_taken > 1_000_000 {
            return Err(IntegrateError::StepSizeUnderflow { t: t0 + tau * dir });
        }
        if h < h_floor {
            return Err(IntegrateError::StepSizeUnderflow { t: t0 + tau * dir });
        }
        if tau + h > 1.0 {
            h = 1.0 - tau;
        }

        // Stages.
        let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
        k[0] = k1;
        for s in 1..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s - 1][j];
                if a != 0.0 {
                    ys[0] += h * a * kj[0];
                    ys[1] += h * a * kj[1];
                }
            }
            k[s] = f(tau + C[s - 1] * h, ys);
        }
        // 5th-order solution (row 6 of A is the b-vector; FSAL).
        let mut y1 = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[5][j];
            if a != 0.0 {
                y1[0] += h * a * kj[0];
                y1[1] += h * a * kj[1];
            }
        }
        k[6] = f(tau + h, y1);

        // Error estimate.
        let mut err_sq = 0.0f64;
        for i in 0..2 {
            let mut e = Complex64::new(0.0, 0.0);
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += E[j] * kj[i];
                }
            }
            e *= h;
            let sk = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y1[i].norm());
            let r = e.norm() / sk;
            err_sq += r * r;
        }
        let err = (err_sq / 2.0).sqrt();

        if !err.is_finite() {
            // Overflow inside the step: treat as a pole hit.
            return Err(IntegrateError::PoleEncountered { t: t0 + tau * dir });
        }

        if err <= 1.0 {
            // Accept; build dense output.
            let mut rcont = [[Complex64::new(0.0, 0.0); 5]; 2];
            for i in 0..2 {
                let ydiff = y1[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                let mut dsum = Complex64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate() {
                    if D[j] != 0.0 {
                        dsum += D[j] * kj[i];
                    }
                }
                rcont[i] = [
                    y[i],
                    ydiff,
                    bspl,
                    ydiff - h * k[6][i] - bspl,
                    h * dsum,
                ];
            }
            tr.steps.push(DenseStep {
                tau0: tau,
                h,
                rcont,
            });
            tau += h;
            y = y1;
            k1 = k[6];
            tr.taus.push(tau.min(1.0));
            tr.states.push(y);
            steps_taken += 1;

            if y[0].norm() > cfg.pole_guard || y[1].norm() > cfg.pole_guard {
                return Err(IntegrateError::PoleEncountered { t: t0 + tau * dir });
            }

            let fac = 0.9 * err.powf(-0.2);
            h = (h * fac.clamp(0.2, facmax)).min(h_cap);
            facmax = 10.0;
        } else {
            let fac = 0.9 * err.powf(-0.2);
            h *= fac.clamp(0.2, 1.0);
            facmax = 1.0;
        }
    }
    // Pin the final node exactly at τ = 1.
    if let Some(last) = tr.taus.last_mut() {
        *last = 1.0;
    }
    Ok(tr)
}

/// Integrate the III′ flow at lattice parameters `v` from state `s0` to
/// `t_end`.
pub fn integrate(
    v: ParameterPoint,
    s0: CanonicalState,
    t_end: Complex64,
    cfg: IntegrationConfig,
) -> Result<PiiiTrajectory, IntegrateError> {
    integrate_field(PiiiField { v }, s0.t, [s0.q, s0.p], t_end, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> IntegrationConfig {
        IntegrationConfig::default()
    }

    #[test]
    fn rational_seed_closed_form() {
        // v = (0,1): q = √t, p = 1/(4√t) is an exact solution.
        let v = ParameterPoint::real(0.0, 1.0);
        let s0 = CanonicalState::real(1.0, 1.0, 0.25);
        let tr = integrate(v, s0, c(4.0, 0.0), cfg()).unwrap();
        for (t, y) in tr.nodes() {
            let rt = t.sqrt();
            assert!((y[0] - rt).norm() < 1e-9, "q mismatch at t = {t}");
            assert!((y[1] - 0.25 / rt).norm() < 1e-9, "p mismatch at t = {t}");
        }
    }

    #[test]
    fn dense_sample_of_rational_seed() {
        let v = ParameterPoint::real(0.0, 1.0);
        let s0 = CanonicalState::real(1.0, 1.0, 0.25);
        let mut config = cfg();
        config.max_step = 0.1;
        let tr = integrate(v, s0, c(4.0, 0.0), config).unwrap();
        let s = tr.sample(c(2.25, 0.0)).unwrap();
        assert!((s.q - c(1.5, 0.0)).norm() < 1e-9);
        assert!((s.p - c(1.0 / 6.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn sample_at_node_is_exact() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::new(c(1.0, 0.0), c(0.5, 0.0), c(0.3, 0.4));
        let tr = integrate(v, s0, c(2.0, 0.0), cfg()).unwrap();
        for k in 0..tr.len() {
            let t = tr.node_t(k);
            let y = tr.sample_y(t).unwrap();
            assert_eq!(y, tr.node_y(k));
        }
    }

    #[test]
    fn empty_integration_single_node() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::new(c(1.0, 0.0), c(0.5, 0.0), c(0.3, 0.4));
        let tr = integrate(v, s0, s0.t, cfg()).unwrap();
        assert_eq!(tr.len(), 1);
        let s = tr.sample(s0.t).unwrap();
        assert_eq!((s.q, s.p), (s0.q, s0.p));
    }

    #[test]
    fn residual_scan_along_trajectory() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::new(c(1.0, 0.0), c(0.5, 0.0), c(0.3, 0.4));
        let tr = integrate(v, s0, c(2.0, 0.0), cfg()).unwrap();
        let sp = crate::system::scalar_params(v);
        let mut max_r: f64 = 0.0;
        for k in 0..tr.len() {
            let j = tr.jet(tr.node_t(k)).unwrap();
            let r = crate::system::piii_prime_residual(j.t, j.q, j.qd, j.qdd, sp).unwrap();
            max_r = max_r.max(r.norm());
        }
        assert!(max_r < 1e-6, "residual scan {max_r}");
    }

    #[test]
    fn jet_closed_form_values() {
        let v = ParameterPoint::real(0.0, 1.0);
        let s0 = CanonicalState::real(1.0, 1.0, 0.25);
        let tr = integrate(v, s0, c(4.0, 0.0), cfg()).unwrap();
        let j = tr.jet(c(1.0, 0.0)).unwrap();
        assert!((j.q - c(1.0, 0.0)).norm() < 1e-12);
        assert!((j.qd - c(0.5, 0.0)).norm() < 1e-12);
        assert!((j.qdd - c(-0.25, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn jet_degenerate_qd_zero() {
        // If q' = 0 then t·q'' = d/dt(2q²p − q² − v1 q + t) at the point.
        let v = ParameterPoint::real(0.3, -0.2);
        let (t, q) = (c(1.7, 0.0), c(0.8, 0.0));
        // choose p so that 2q²p − q² − v1 q + t = 0
        let p = (q * q + v.v1 * q - t) / (2.0 * q * q);
        let s = CanonicalState::new(t, q, p);
        let (qd, pd) = crate::system::eom_rhs(s, v).unwrap();
        assert!(qd.norm() < 1e-15);
        let (qdd, _) = crate::system::eom_second(t, q, p, qd, pd, v);
        let fd = (4.0 * q * p - 2.0 * q - v.v1) * qd + 2.0 * q * q * pd + 1.0;
        assert!((t * qdd - fd).norm() < 1e-14);
    }

    #[test]
    fn reversibility() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::new(c(1.0, 0.0), c(0.5, 0.0), c(0.3, 0.4));
        let tr = integrate(v, s0, c(2.0, 0.0), cfg()).unwrap();
        let end = tr.node_state(tr.len() - 1);
        let back = integrate(v, end, s0.t, cfg()).unwrap();
        let s = back.node_state(back.len() - 1);
        assert!((s.q - s0.q).norm() < 10.0 * cfg().rel_tol);
        assert!((s.p - s0.p).norm() < 10.0 * cfg().rel_tol);
    }

    #[test]
    fn tolerance_monotonicity() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::new(c(1.0, 0.0), c(0.5, 0.0), c(0.3, 0.4));
        let reference = {
            let mut tight = cfg();
            tight.rel_tol = 1e-13;
            tight.abs_tol = 1e-14;
            let tr = integrate(v, s0, c(2.0, 0.0), tight).unwrap();
            tr.node_y(tr.len() - 1)
        };
        let mut prev_err = f64::INFINITY;
        for rel in [1e-6, 1e-7, 1e-8, 1e-9, 1e-10] {
            let mut config = cfg();
            config.rel_tol = rel;
            config.abs_tol = rel * 1e-2;
            let tr = integrate(v, s0, c(2.0, 0.0), config).unwrap();
            let y = tr.node_y(tr.len() - 1);
            let err = (y[0] - reference[0]).norm() + (y[1] - reference[1]).norm();
            assert!(
                err <= prev_err * 1.5 + 1e-15,
                "error grew when tightening tolerance: {err} vs {prev_err}"
            );
            prev_err = prev_err.min(err);
        }
    }

    #[test]
    fn midpoint_sample_vs_reintegration() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::new(c(1.0, 0.0), c(0.5, 0.0), c(0.3, 0.4));
        let tr = integrate(v, s0, c(2.0, 0.0), cfg()).unwrap();
        // midpoint of the first step
        let t_mid = 0.5 * (tr.node_t(0) + tr.node_t(1));
        let s_interp = tr.sample(t_mid).unwrap();
        let re = integrate(v, s0, t_mid, cfg()).unwrap();
        let s_direct = re.node_state(re.len() - 1);
        assert!((s_interp.q - s_direct.q).norm() < 1e-9);
        assert!((s_interp.p - s_direct.p).norm() < 1e-9);
    }

    #[test]
    fn pole_guard_reports() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::real(1.0, 2.0, 2.0);
        let err = integrate(v, s0, c(2.0, 0.0), cfg()).unwrap_err();
        assert!(matches!(err, IntegrateError::PoleEncountered { .. }), "{err:?}");
    }

    #[test]
    fn segment_through_origin_rejected() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::real(-1.0, 0.5, 0.5);
        let err = integrate(v, s0, c(1.0, 0.0), cfg()).unwrap_err();
        assert_eq!(err, IntegrateError::SegmentThroughOrigin);
    }

    #[test]
    fn sample_outside_segment_rejected() {
        let v = ParameterPoint::origin();
        let s0 = CanonicalState::new(c(1.0, 0.0), c(0.5, 0.0), c(0.3, 0.4));
        let tr = integrate(v, s0, c(2.0, 0.0), cfg()).unwrap();
        assert!(matches!(
            tr.sample(c(3.0, 0.0)),
            Err(IntegrateError::OutsideSegment { .. })
        ));
        assert!(matches!(
            tr.sample(c(1.5, 0.7)),
            Err(IntegrateError::OutsideSegment { .. })
        ));
    }

    #[test]
    fn complex_segment() {
        // March along a tilted segment; the residual scan still holds.
        let v = ParameterPoint::real(0.5, 0.5);
        let s0 = CanonicalState::new(c(1.0, 0.5), c(0.4, 0.3), c(0.2, -0.6));
        let tr = integrate(v, s0, c(2.0, -0.5), cfg()).unwrap();
        let sp = crate::system::scalar_params(v);
        for k in 0..tr.len() {
            let j = tr.jet(tr.node_t(k)).unwrap();
            let r = crate::system::piii_prime_residual(j.t, j.q, j.qd, j.qdd, sp).unwrap();
            assert!(r.norm() < 1e-6);
        }
    }
}
