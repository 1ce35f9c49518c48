//! The corner canonical transformations: half-unit shifts on the parameter
//! lattice that scale the independent variable.
//!
//! The primary map (the "W" transformation) sends the system at the origin
//! `v = (0,0)` to the system at `v = (−1,0)` with `T = t/4`:
//!
//! ```text
//! Q = (i√t/2)(√p + √(p−1))
//! P = (i/√t) (½ + q√p√(p−1) − i√t√p) / (√p + √(p−1))
//! ```
//!
//! Composing with the shift operators T1, T2 produces the analogous maps to
//! the other three lattice neighbours (0,−1), (1,0), (0,1) — labelled by the
//! compass corners S, E, N — all sharing `T = t/4`. The inverse of W is
//! rational; its q-component degenerates exactly on the images of p ∈ {0,1}
//! (where `Q² = ±T`).
//!
//! Branch policy: the radicals √p, √(p−1), √t start on principal branches
//! and are continued node-to-node by nearest-root selection, each radical
//! independently. Flipping both state radicals permutes the corners, so
//! every identity in [`crate::identities`] is branch-assignment invariant.

use crate::integrator::PiiiTrajectory;
use crate::jet::Jet2;
use crate::system::{
    self, piii_prime_residual, piii_residual, pv_residual, CanonicalState, ParameterPoint,
    ScalarParams,
};
use crate::I;
use num_complex::Complex64;
use thiserror::Error;

/// The four lattice neighbours of the origin reachable by one corner map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerLabel {
    W,
    S,
    E,
    N,
}

impl CornerLabel {
    pub const ALL: [CornerLabel; 4] = [CornerLabel::W, CornerLabel::S, CornerLabel::E, CornerLabel::N];

    /// Target parameters of the corner system.
    pub fn target_params(self) -> ParameterPoint {
        match self {
            CornerLabel::W => ParameterPoint::real(-1.0, 0.0),
            CornerLabel::S => ParameterPoint::real(0.0, -1.0),
            CornerLabel::E => ParameterPoint::real(1.0, 0.0),
            CornerLabel::N => ParameterPoint::real(0.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CornerLabel::W => "W",
            CornerLabel::S => "S",
            CornerLabel::E => "E",
            CornerLabel::N => "N",
        }
    }
}

/// A canonical state together with a branch choice for √p and √(p−1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedState {
    pub base: CanonicalState,
    pub sqrt_p: Complex64,
    pub sqrt_pm1: Complex64,
}

impl BranchedState {
    /// Flip the sign of both radicals (permutes the corner images W↔E, S↔N).
    pub fn flip(self) -> Self {
        BranchedState {
            base: self.base,
            sqrt_p: -self.sqrt_p,
            sqrt_pm1: -self.sqrt_pm1,
        }
    }
}

/// Flip the sign of one corner-map output component; used as a deliberate
/// negative control by the verification front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignCorruption {
    QW,
    PW,
    QS,
    PS,
    QE,
    PE,
    QN,
    PN,
}

impl SignCorruption {
    fn applies(self) -> (CornerLabel, bool) {
        match self {
            SignCorruption::QW => (CornerLabel::W, true),
            SignCorruption::PW => (CornerLabel::W, false),
            SignCorruption::QS => (CornerLabel::S, true),
            SignCorruption::PS => (CornerLabel::S, false),
            SignCorruption::QE => (CornerLabel::E, true),
            SignCorruption::PE => (CornerLabel::E, false),
            SignCorruption::QN => (CornerLabel::N, true),
            SignCorruption::PN => (CornerLabel::N, false),
        }
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum CornerError {
    #[error("corner transformations are defined at v = (0,0)")]
    InvalidParams,
    #[error("zero denominator in a corner formula")]
    ZeroDenominator,
    #[error("degenerate locus: Q² = ±T (image of p ∈ {{0,1}}; q-information lost)")]
    DegenerateLocus,
    #[error("ambiguous branch continuation at node {index}")]
    AmbiguousBranch { index: usize },
    #[error("stage {stage} of the transformation chain hit a singular point")]
    SingularStage { stage: usize },
    #[error(transparent)]
    System(#[from] system::SystemError),
    #[error("trajectory error: {0}")]
    Trajectory(#[from] crate::integrator::IntegrateError),
}

/// Principal-branch radicals for a state.
///
/// `Complex64::sqrt` takes the branch cut along the negative real axis with
/// nonnegative real part, and positive imaginary part on the cut, which is
/// exactly the convention wanted here.
pub fn branch_init(s: CanonicalState) -> BranchedState {
    BranchedState {
        base: s,
        sqrt_p: s.p.sqrt(),
        sqrt_pm1: (s.p - 1.0).sqrt(),
    }
}

/// Continue a square root through a list of radicands by nearest-root
/// selection, starting from the principal branch.
pub(crate) fn continue_roots(radicands: &[Complex64]) -> Result<Vec<Complex64>, CornerError> {
    let mut out = Vec::with_capacity(radicands.len());
    for (k, z) in radicands.iter().enumerate() {
        let principal = z.sqrt();
        if k == 0 {
            out.push(principal);
            continue;
        }
        if principal == Complex64::new(0.0, 0.0) {
            out.push(principal);
            continue;
        }
        let prev = out[k - 1];
        let d_plus = (principal - prev).norm();
        let d_minus = (-principal - prev).norm();
        if (d_plus - d_minus).abs() <= 1e-12 {
            return Err(CornerError::AmbiguousBranch { index: k });
        }
        out.push(if d_plus < d_minus { principal } else { -principal });
    }
    Ok(out)
}

/// Branch-continued radicals along the nodes of a trajectory.
pub fn branch_continue(tr: &PiiiTrajectory) -> Result<Vec<BranchedState>, CornerError> {
    let ps: Vec<Complex64> = (0..tr.len()).map(|k| tr.node_y(k)[1]).collect();
    let pm1s: Vec<Complex64> = ps.iter().map(|p| p - 1.0).collect();
    let roots_p = continue_roots(&ps)?;
    let roots_pm1 = continue_roots(&pm1s)?;
    Ok((0..tr.len())
        .map(|k| BranchedState {
            base: tr.node_state(k),
            sqrt_p: roots_p[k],
            sqrt_pm1: roots_pm1[k],
        })
        .collect())
}

pub(crate) struct NodeRadicals {
    pub branched: Vec<BranchedState>,
    pub sqrt_t: Vec<Complex64>,
}

pub(crate) fn continued_radicals(tr: &PiiiTrajectory) -> Result<NodeRadicals, CornerError> {
    let branched = branch_continue(tr)?;
    let ts: Vec<Complex64> = (0..tr.len()).map(|k| tr.node_t(k)).collect();
    let sqrt_t = continue_roots(&ts)?;
    Ok(NodeRadicals { branched, sqrt_t })
}

fn nonzero(j: Jet2) -> Result<Jet2, CornerError> {
    if j.v == Complex64::new(0.0, 0.0) {
        Err(CornerError::ZeroDenominator)
    } else {
        Ok(j)
    }
}

/// The corner map on jets of `(q, p)` with radical jets `a = √p`, `b = √(p−1)`,
/// `r = √t`; the single source of truth for all four displayed formulas.
/// Jets are with respect to the source variable t.
pub(crate) fn corner_qp_jets(
    c: CornerLabel,
    q: Jet2,
    a: Jet2,
    b: Jet2,
    r: Jet2,
    corrupt: Option<SignCorruption>,
) -> Result<(Jet2, Jet2), CornerError> {
    let half = Complex64::new(0.5, 0.0);
    let sum = nonzero(a + b)?;
    let qab = q * a * b;
    let ea = I * r * a; // i√t√p
    let eb = I * r * b; // i√t√(p−1)
    let i_half_r = I * r * 0.5; // i√t/2
    let i_over_r = Jet2::constant(I) / r;

    let (qq, pp) = match c {
        CornerLabel::W => {
            let qq = i_half_r * sum;
            let pp = i_over_r * ((qab + half - ea) / sum);
            (qq, pp)
        }
        CornerLabel::S => {
            let den = nonzero(-qab + half + eb)?;
            let qq = i_half_r * ((qab + half - eb) / den) / sum;
            let pp = -(i_over_r * sum * (-qab + half + ea));
            (qq, pp)
        }
        CornerLabel::E => {
            let d1 = nonzero(qab + half - eb)?;
            let d2 = nonzero(qab + half + ea)?;
            let brace = Jet2::real_constant(1.0) - 1.0 / d1 - 1.0 / d2;
            let qq = -(i_half_r * sum * brace);
            let pp = -(i_over_r * ((qab + half + ea) / sum));
            (qq, pp)
        }
        CornerLabel::N => {
            let den = nonzero(-qab + half - ea)?;
            let diff = nonzero(a - b)?;
            let qq = -(i_half_r * ((qab + half + ea) / den) / sum);
            let pp = i_over_r * ((-qab + half - ea) / diff);
            (qq, pp)
        }
    };
    match corrupt.map(SignCorruption::applies) {
        Some((label, is_q)) if label == c => {
            if is_q {
                Ok((-qq, pp))
            } else {
                Ok((qq, -pp))
            }
        }
        _ => Ok((qq, pp)),
    }
}

/// Apply the corner map `c` to a branched state at `v = (0,0)`.
///
/// Returns the image state at `c.target_params()` with `T = t/4`; √t is the
/// principal root, used consistently across Q and P.
pub fn to_corner(
    c: CornerLabel,
    bs: &BranchedState,
    v: ParameterPoint,
) -> Result<CanonicalState, CornerError> {
    to_corner_with(c, bs, v, None)
}

/// [`to_corner`] with an optional deliberate sign corruption (negative
/// controls only).
pub fn to_corner_with(
    c: CornerLabel,
    bs: &BranchedState,
    v: ParameterPoint,
    corrupt: Option<SignCorruption>,
) -> Result<CanonicalState, CornerError> {
    if v != ParameterPoint::origin() {
        return Err(CornerError::InvalidParams);
    }
    let (qq, pp) = corner_qp_jets(
        c,
        Jet2::constant(bs.base.q),
        Jet2::constant(bs.sqrt_p),
        Jet2::constant(bs.sqrt_pm1),
        Jet2::constant(bs.base.t.sqrt()),
        corrupt,
    )?;
    Ok(CanonicalState::new(bs.base.t / 4.0, qq.v, pp.v))
}

/// Momentum component of the inverse W map: `p = −(Q²−T)²/(4TQ²)`.
pub fn from_w_momentum(t_cap: Complex64, q_cap: Complex64) -> Complex64 {
    let d = q_cap * q_cap - t_cap;
    -(d * d) / (4.0 * t_cap * q_cap * q_cap)
}

/// Inverse of the W transformation: a state at `v = (−1,0)` maps back to
/// `v = (0,0)` with `t = 4T`.
///
/// Fails with [`CornerError::DegenerateLocus`] when `Q² = ±T`: these are the
/// images of p ∈ {0,1}, where the q-information is lost.
pub fn from_w(s: CanonicalState) -> Result<CanonicalState, CornerError> {
    let (t_cap, q_cap, p_cap) = (s.t, s.q, s.p);
    let zero = Complex64::new(0.0, 0.0);
    if q_cap == zero || t_cap == zero {
        return Err(CornerError::ZeroDenominator);
    }
    let q2 = q_cap * q_cap;
    let scale = q2.norm() + t_cap.norm();
    if (q2 - t_cap).norm() < 1e-12 * scale || (q2 + t_cap).norm() < 1e-12 * scale {
        return Err(CornerError::DegenerateLocus);
    }
    let t = 4.0 * t_cap;
    let q = -2.0 * t_cap * q_cap * (2.0 * q2 - 4.0 * q2 * p_cap - q_cap - 2.0 * t_cap)
        / ((q2 + t_cap) * (q2 - t_cap));
    let p = from_w_momentum(t_cap, q_cap);
    Ok(CanonicalState::new(t, q, p))
}

fn nearest_sqrt(z: Complex64, target: Complex64) -> Complex64 {
    let root = z.sqrt();
    if (root - target).norm() <= (-root - target).norm() {
        root
    } else {
        -root
    }
}

/// Derivative-only form of the W map: `(T, Q)` from `(t, q, q')` alone.
///
/// The two radicands equal `q²(p−1)` and `q²p` on flow-consistent jets; the
/// `branch` pair `(√p, √(p−1))` selects the matching roots.
pub fn q_only_w(
    t: Complex64,
    q: Complex64,
    qd: Complex64,
    branch: (Complex64, Complex64),
) -> Result<(Complex64, Complex64), CornerError> {
    let zero = Complex64::new(0.0, 0.0);
    if t == zero || q == zero {
        return Err(CornerError::ZeroDenominator);
    }
    let rad_minus = (t * qd - q * q - t) / 2.0; // q²(p−1)
    let rad_plus = (t * qd + q * q - t) / 2.0; // q²p
    let root_minus = nearest_sqrt(rad_minus, q * branch.1);
    let root_plus = nearest_sqrt(rad_plus, q * branch.0);
    let q_cap = I * t.sqrt() / (2.0 * q) * (root_minus + root_plus);
    Ok((t / 4.0, q_cap))
}

/// The W transformation in standard P_III variables: `μ(s)` with scalar
/// parameters (0, 4, 4, −4) maps to `M(S)` with (0, 0, 4, −4), `S = s/2`.
pub fn piii_form_transform(
    s: Complex64,
    mu: Complex64,
    mud: Complex64,
) -> Result<(Complex64, Complex64), CornerError> {
    let zero = Complex64::new(0.0, 0.0);
    if s == zero || mu == zero {
        return Err(CornerError::ZeroDenominator);
    }
    let rad_a = mu + s * mud + 2.0 * s * (mu * mu - 1.0);
    let rad_b = mu + s * mud - 2.0 * s * (mu * mu + 1.0);
    let m = I / (2.0 * s.sqrt() * mu) * (rad_a.sqrt() + rad_b.sqrt());
    Ok((s / 2.0, m))
}

/// Inverse of the standard-form map: `μ = M M′ / ((M²+1)(M²−1))`.
pub fn piii_form_inverse(
    _s_cap: Complex64,
    m: Complex64,
    md: Complex64,
) -> Result<Complex64, CornerError> {
    let m2 = m * m;
    let den = (m2 + 1.0) * (m2 - 1.0);
    if den == Complex64::new(0.0, 0.0) {
        return Err(CornerError::ZeroDenominator);
    }
    Ok(m * md / den)
}

/// Jet of a quantity known as a function of t, re-expressed as a function of
/// z with t = z².
fn jet_in_sqrt_base(x: Jet2, z: Complex64) -> Jet2 {
    Jet2::new(x.v, 2.0 * z * x.d1, 2.0 * x.d1 + 4.0 * z * z * x.d2)
}

/// Residual of the p-equation obtained by eliminating q from the flow:
///
/// ```text
/// p'' = ½(1/p + 1/(p−1)) p'² − p'/t + (2/t) p(1−p)
///       + [(v1+v2)²(2p−1) − 4 v1 v2 p²] / (8 t² p (1−p))
/// ```
pub fn pv_dual_residual(
    t: Complex64,
    p: Complex64,
    pd: Complex64,
    pdd: Complex64,
    v: ParameterPoint,
) -> Result<Complex64, CornerError> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if t == zero {
        return Err(system::SystemError::ZeroT.into());
    }
    if p == zero || p == one {
        return Err(CornerError::ZeroDenominator);
    }
    let vsum = v.v1 + v.v2;
    let rhs = 0.5 * (1.0 / p + 1.0 / (p - one)) * pd * pd - pd / t + 2.0 / t * p * (one - p)
        + (vsum * vsum * (2.0 * p - one) - 4.0 * v.v1 * v.v2 * p * p)
            / (8.0 * t * t * p * (one - p));
    Ok(pdd - rhs)
}

/// Per-node radical jets along a trajectory; everything downstream of the
/// branch continuation works on these.
struct RadicalJets {
    t: Jet2,
    q: Jet2,
    p: Jet2,
    a: Jet2,
    b: Jet2,
    r: Jet2,
}

fn radical_jets_at_nodes(tr: &PiiiTrajectory) -> Result<Vec<RadicalJets>, CornerError> {
    let rads = continued_radicals(tr)?;
    let mut out = Vec::with_capacity(tr.len());
    for k in 0..tr.len() {
        let t = tr.node_t(k);
        let jet = tr.jet(t)?;
        let tj = Jet2::variable(t);
        let qj = Jet2::new(jet.q, jet.qd, jet.qdd);
        let pj = Jet2::new(jet.p, jet.pd, jet.pdd);
        out.push(RadicalJets {
            t: tj,
            q: qj,
            p: pj,
            a: pj.sqrt_with_branch(rads.branched[k].sqrt_p),
            b: (pj - 1.0).sqrt_with_branch(rads.branched[k].sqrt_pm1),
            r: tj.sqrt_with_branch(rads.sqrt_t[k]),
        });
    }
    Ok(out)
}

/// Residuals of a corner transport along a trajectory at `v = (0,0)`.
#[derive(Debug, Clone, Copy)]
pub struct TransportReport {
    /// Max magnitude of the target Hamilton-equations residual (chain rule).
    pub max_eom_residual: f64,
    /// Max magnitude of the scalar III′ residual of the image jets.
    pub max_scalar_residual: f64,
}

/// Verify that the image of a trajectory under the corner map `c` solves the
/// target system pointwise.
pub fn transport_check(tr: &PiiiTrajectory, c: CornerLabel) -> Result<TransportReport, CornerError> {
    transport_check_with(tr, c, None)
}

/// [`transport_check`] with an optional sign corruption (negative controls).
pub fn transport_check_with(
    tr: &PiiiTrajectory,
    c: CornerLabel,
    corrupt: Option<SignCorruption>,
) -> Result<TransportReport, CornerError> {
    if tr.params() != ParameterPoint::origin() {
        return Err(CornerError::InvalidParams);
    }
    let target = c.target_params();
    let sp = system::scalar_params(target);
    let jets = radical_jets_at_nodes(tr)?;
    let mut max_eom: f64 = 0.0;
    let mut max_scalar: f64 = 0.0;
    for rj in &jets {
        let (qq_t, pp_t) = corner_qp_jets(c, rj.q, rj.a, rj.b, rj.r, corrupt)?;
        // Re-express in T = t/4 (so t = 4T, d/dT = 4 d/dt).
        let four = Complex64::new(4.0, 0.0);
        let qq = qq_t.rescale_base(four);
        let pp = pp_t.rescale_base(four);
        let t_cap = rj.t.v / 4.0;
        let rq = t_cap * qq.d1
            - (2.0 * qq.v * qq.v * pp.v - qq.v * qq.v - target.v1 * qq.v + t_cap);
        let rp = t_cap * pp.d1
            - (-2.0 * qq.v * pp.v * pp.v + (2.0 * qq.v + target.v1) * pp.v
                - 0.5 * (target.v1 + target.v2));
        max_eom = max_eom.max(rq.norm()).max(rp.norm());
        let rs = piii_prime_residual(t_cap, qq.v, qq.d1, qq.d2, sp)?;
        max_scalar = max_scalar.max(rs.norm());
    }
    Ok(TransportReport {
        max_eom_residual: max_eom,
        max_scalar_residual: max_scalar,
    })
}

/// Max roundtrip error of `from_w ∘ to_corner(W)` along a trajectory.
pub fn roundtrip_check(tr: &PiiiTrajectory) -> Result<f64, CornerError> {
    if tr.params() != ParameterPoint::origin() {
        return Err(CornerError::InvalidParams);
    }
    let rads = continued_radicals(tr)?;
    let mut worst: f64 = 0.0;
    for (k, bs) in rads.branched.iter().enumerate() {
        let (qq, pp) = corner_qp_jets(
            CornerLabel::W,
            Jet2::constant(bs.base.q),
            Jet2::constant(bs.sqrt_p),
            Jet2::constant(bs.sqrt_pm1),
            Jet2::constant(rads.sqrt_t[k]),
            None,
        )?;
        let image = CanonicalState::new(bs.base.t / 4.0, qq.v, pp.v);
        let back = from_w(image)?;
        worst = worst
            .max((back.t - bs.base.t).norm())
            .max((back.q - bs.base.q).norm())
            .max((back.p - bs.base.p).norm());
    }
    Ok(worst)
}

/// Residual report of the transformation chain that factors the W map
/// through the dual p-equation, P_V, and the standard P_III forms.
#[derive(Debug, Clone, Copy)]
pub struct ProofChainReport {
    /// Stage residuals:
    /// 0: p satisfies the dual p-equation;
    /// 1: y = p/(p−1) satisfies P_V(0, 0, 2, 0);
    /// 2: v(z) = √p + √(p−1), t = z², satisfies P_III(0, 0, −1, 1);
    /// 3: w(x) = z·v(z), x = z², satisfies III′(0, 0, −1, 1);
    /// 4: W(T) = (i/2)·w(4T) satisfies III′(0, 0, 4, −4).
    pub stage_residuals: [f64; 5],
    /// Max deviation of the chain's final W(T) from the directly mapped Q.
    pub direct_match: f64,
    /// Scalar parameters of the final stage.
    pub final_params: ScalarParams,
}

/// Run the five-stage transformation chain along a `v = (0,0)` trajectory
/// and report the max residual of every stage.
pub fn verify_proof_chain(tr: &PiiiTrajectory) -> Result<ProofChainReport, CornerError> {
    if tr.params() != ParameterPoint::origin() {
        return Err(CornerError::InvalidParams);
    }
    let origin = ParameterPoint::origin();
    let jets = radical_jets_at_nodes(tr)?;
    let mut stages = [0.0f64; 5];
    let mut direct: f64 = 0.0;
    let half_i = 0.5 * I;
    let zero = Complex64::new(0.0, 0.0);
    for rj in &jets {
        let t = rj.t.v;
        // (i) dual p-equation
        let r0 = pv_dual_residual(t, rj.p.v, rj.p.d1, rj.p.d2, origin)
            .map_err(|_| CornerError::SingularStage { stage: 1 })?;
        stages[0] = stages[0].max(r0.norm());

        // (ii) y = p/(p−1) solves PV(0,0,2,0)
        let y = rj.p / (rj.p - 1.0);
        let r1 = pv_residual(t, y.v, y.d1, y.d2, zero, zero, Complex64::new(2.0, 0.0), zero)
            .map_err(|_| CornerError::SingularStage { stage: 2 })?;
        stages[1] = stages[1].max(r1.norm());

        // (iii) v(z) = √p + √(p−1) with t = z² solves PIII(0,0,−1,1)
        let z = rj.r.v;
        let v_jet = jet_in_sqrt_base(rj.a + rj.b, z);
        let r2 = piii_residual(z, v_jet.v, v_jet.d1, v_jet.d2, zero, zero, -Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
            .map_err(|_| CornerError::SingularStage { stage: 3 })?;
        stages[2] = stages[2].max(r2.norm());

        // (iv) w(x) = z v(z), x = z² = t solves III′(0,0,−1,1)
        let w = rj.r * (rj.a + rj.b);
        let sp_nonstd = ScalarParams::real(0.0, 0.0, -1.0, 1.0);
        let r3 = piii_prime_residual(t, w.v, w.d1, w.d2, sp_nonstd)
            .map_err(|_| CornerError::SingularStage { stage: 4 })?;
        stages[3] = stages[3].max(r3.norm());

        // (v) W(T) = (i/2) w(4T) solves III′(0,0,4,−4); T = t/4
        let w_cap = (w * half_i).rescale_base(Complex64::new(4.0, 0.0));
        let t_cap = t / 4.0;
        let sp_final = ScalarParams::real(0.0, 0.0, 4.0, -4.0);
        let r4 = piii_prime_residual(t_cap, w_cap.v, w_cap.d1, w_cap.d2, sp_final)
            .map_err(|_| CornerError::SingularStage { stage: 5 })?;
        stages[4] = stages[4].max(r4.norm());

        // the chain's endpoint is the direct W image
        let (qq, _) = corner_qp_jets(CornerLabel::W, rj.q, rj.a, rj.b, rj.r, None)?;
        direct = direct.max((w_cap.v - qq.v).norm());
    }
    Ok(ProofChainReport {
        stage_residuals: stages,
        direct_match: direct,
        final_params: ScalarParams::real(0.0, 0.0, 4.0, -4.0),
    })
}

/// Check the derivative-only (Riccati-degenerate) form of the inverse map
/// along a `v = (0,0)` trajectory: with `(T, Q, P)` the W image and `Q′`
/// taken from the target equations of motion,
///
/// ```text
/// q(4T) = −2TQ(Q − 2TQ′) / ((Q²+T)(Q²−T))
/// ```
pub fn riccati_form_check(tr: &PiiiTrajectory) -> Result<f64, CornerError> {
    if tr.params() != ParameterPoint::origin() {
        return Err(CornerError::InvalidParams);
    }
    let jets = radical_jets_at_nodes(tr)?;
    let mut worst: f64 = 0.0;
    for rj in &jets {
        let (qq, pp) = corner_qp_jets(CornerLabel::W, rj.q, rj.a, rj.b, rj.r, None)?;
        let t_cap = rj.t.v / 4.0;
        let (q_cap, p_cap) = (qq.v, pp.v);
        let q2 = q_cap * q_cap;
        let scale = q2.norm() + t_cap.norm();
        if (q2 - t_cap).norm() < 1e-12 * scale || (q2 + t_cap).norm() < 1e-12 * scale {
            return Err(CornerError::DegenerateLocus);
        }
        // Q' from the target flow at v = (−1, 0): T Q' = 2Q²P − Q² + Q + T.
        let qd_cap = (2.0 * q2 * p_cap - q2 + q_cap + t_cap) / t_cap;
        let q_rec =
            -2.0 * t_cap * q_cap * (q_cap - 2.0 * t_cap * qd_cap) / ((q2 + t_cap) * (q2 - t_cap));
        worst = worst.max((q_rec - rj.q.v).norm());
    }
    Ok(worst)
}
