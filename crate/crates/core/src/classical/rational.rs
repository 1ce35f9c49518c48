//! Exact rational solutions in s = √t.
//!
//! Zero-parameter solutions admit exact verification, so everything here is
//! computed over ℚ(i): Gaussian-rational coefficients with arbitrary-size
//! integers, rational functions of the variable s where t = s², and the
//! shift-operator recurrences applied with no floating point at all. The
//! sign flip t → −t induced by s2 is realised as the formal substitution
//! s → i·s.
//!
//! The seed is `(q, p) = (s, 1/(4s))` at parameters `(0, 1)`; its flow
//! residual is the zero rational function, exactly, and every generated
//! solution keeps that property (checked after each step).

use crate::weyl::Generator;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalError {
    #[error("generator {0} is identically singular on this solution")]
    IdenticallySingular(Generator),
    #[error("division by the zero rational function")]
    DivisionByZero,
}

/// An element of ℚ(i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }

    /// i^k, exact.
    pub fn i_pow(k: usize) -> Self {
        match k % 4 {
            0 => GaussianRational::from_int(1),
            1 => GaussianRational::i(),
            2 => GaussianRational::from_int(-1),
            _ => -GaussianRational::i(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        fn f(r: &BigRational) -> f64 {
            // exact-to-nearest conversion through i128 when possible
            let num = r.numer();
            let den = r.denom();
            match (i128::try_from(num), i128::try_from(den)) {
                (Ok(n), Ok(d)) => n as f64 / d as f64,
                _ => {
                    // fall back to string round-trip for very large entries
                    let s = r.to_string();
                    let mut parts = s.splitn(2, '/');
                    let n: f64 = parts.next().unwrap().parse().unwrap_or(f64::NAN);
                    let d: f64 = parts.next().map(|x| x.parse().unwrap_or(f64::NAN)).unwrap_or(1.0);
                    n / d
                }
            }
        }
        Complex64::new(f(&self.re), f(&self.im))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}*i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}*i", self.re, self.im)
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for GaussianRational {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)] // division is multiplication by the inverse
    fn div(self, o: Self) -> Self {
        self * o.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

/// Dense polynomial over ℚ(i) in the variable s; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<GaussianRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: GaussianRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn one() -> Self {
        Poly::constant(GaussianRational::from_int(1))
    }

    /// c·s^k
    pub fn monomial(c: GaussianRational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![GaussianRational::from_int(0); k + 1];
        v[k] = c;
        Poly(v)
    }

    pub fn from_coeffs(coeffs: Vec<GaussianRational>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.0
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(GaussianRational::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.0.last()
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| GaussianRational::from_int((k + 1) as i64) * c.clone())
                .collect(),
        )
    }

    /// Formal substitution s → i·s: multiplies coefficient k by i^k.
    pub fn substitute_is(&self) -> Poly {
        Poly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .map(|(k, c)| GaussianRational::i_pow(k) * c.clone())
                .collect(),
        )
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|x| c.clone() * x.clone()).collect())
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.0.iter().rev() {
            acc = acc * s + c.to_complex();
        }
        acc
    }

    /// Euclidean division: (quotient, remainder).
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![GaussianRational::from_int(0); self.0.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap().clone() * lead_inv.clone();
            let shift = rd - dd;
            quot[shift] = factor.clone();
            // rem -= factor · s^shift · d
            let mut new_coeffs = rem.0.clone();
            for (k, c) in d.0.iter().enumerate() {
                let idx = k + shift;
                new_coeffs[idx] = new_coeffs[idx].clone() - factor.clone() * c.clone();
            }
            rem = Poly::from_coeffs(new_coeffs);
        }
        (Poly::from_coeffs(quot), rem)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading() {
            let inv = lead.inv().unwrap();
            a = a.scale(&inv);
        }
        a
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_else(|| GaussianRational::from_int(0));
            let b = o.0.get(k).cloned().unwrap_or_else(|| GaussianRational::from_int(0));
            v.push(a + b);
        }
        Poly::from_coeffs(v)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        self + (-o)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.0.into_iter().map(|c| -c).collect())
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![GaussianRational::from_int(0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(v)
    }
}

/// A reduced rational function num/den over ℚ(i); den is monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, RationalError> {
        if den.is_zero() {
            return Err(RationalError::DivisionByZero);
        }
        let mut rf = RatFn { num, den };
        rf.reduce();
        Ok(rf)
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    /// The variable s.
    pub fn s() -> Self {
        RatFn::from_poly(Poly::monomial(GaussianRational::from_int(1), 1))
    }

    /// t = s².
    pub fn t() -> Self {
        RatFn::from_poly(Poly::monomial(GaussianRational::from_int(1), 2))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree().unwrap_or(0) > 0 {
            self.num = self.num.divrem(&g).0;
            self.den = self.den.divrem(&g).0;
        }
        // make the denominator monic
        let lead = self.den.leading().unwrap().clone();
        if lead != GaussianRational::from_int(1) {
            let inv = lead.inv().unwrap();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn derivative(&self) -> RatFn {
        // (n/d)' = (n'd − nd')/d²
        let n = self.num.derivative() * self.den.clone() - self.num.clone() * self.den.derivative();
        let d = self.den.clone() * self.den.clone();
        RatFn::new(n, d).expect("denominator square is nonzero")
    }

    pub fn substitute_is(&self) -> RatFn {
        RatFn::new(self.num.substitute_is(), self.den.substitute_is())
            .expect("substitution preserves nonzero denominators")
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    pub fn inv(&self) -> Result<RatFn, RationalError> {
        if self.is_zero() {
            return Err(RationalError::DivisionByZero);
        }
        RatFn::new(self.den.clone(), self.num.clone())
    }
}

impl Add for RatFn {
    type Output = RatFn;
    fn add(self, o: RatFn) -> RatFn {
        let num = self.num.clone() * o.den.clone() + o.num.clone() * self.den.clone();
        let den = self.den * o.den;
        RatFn::new(num, den).expect("product of nonzero denominators")
    }
}

impl Sub for RatFn {
    type Output = RatFn;
    fn sub(self, o: RatFn) -> RatFn {
        self + (-o)
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for RatFn {
    type Output = RatFn;
    fn mul(self, o: RatFn) -> RatFn {
        RatFn::new(self.num * o.num, self.den * o.den).expect("nonzero denominators")
    }
}

impl Div for RatFn {
    type Output = RatFn;
    fn div(self, o: RatFn) -> RatFn {
        assert!(!o.is_zero(), "division by the zero rational function");
        RatFn::new(self.num * o.den, self.den * o.num).expect("nonzero numerator checked")
    }
}

/// An exact rational solution: lattice parameters plus `(q, p)` as rational
/// functions of s = √t.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSolution {
    pub v1: BigRational,
    pub v2: BigRational,
    pub q: RatFn,
    pub p: RatFn,
}

/// Which shift operator to apply in [`rational_step`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftOp {
    T1,
    T2,
}

/// The seed solution `(q, p) = (s, 1/(4s))` at parameters `(0, 1)`.
pub fn rational_seed() -> RationalSolution {
    RationalSolution {
        v1: BigRational::zero(),
        v2: BigRational::one(),
        q: RatFn::s(),
        p: RatFn::new(Poly::one(), Poly::monomial(GaussianRational::from_int(4), 1)).unwrap(),
    }
}

fn half(x: BigRational) -> GaussianRational {
    GaussianRational::from_rational(x / BigRational::from_integer(BigInt::from(2)))
}

fn apply_generator_exact(
    g: Generator,
    sol: &RationalSolution,
) -> Result<RationalSolution, RationalError> {
    let (v1, v2) = (sol.v1.clone(), sol.v2.clone());
    let one = RatFn::constant(GaussianRational::from_int(1));
    match g {
        Generator::S0 => {
            if sol.q.is_zero() {
                return Err(RationalError::IdenticallySingular(g));
            }
            let t = RatFn::t();
            let q_new = -(t.clone() / sol.q.clone());
            let shift = RatFn::constant(half(&v1 - &v2));
            let p_new = (sol.q.clone() / t)
                * (sol.q.clone() * (sol.p.clone() - one.clone()) - shift)
                + one;
            Ok(RationalSolution {
                v1: -BigRational::one() - v2,
                v2: -BigRational::one() - v1,
                q: q_new,
                p: p_new,
            })
        }
        Generator::S1 => {
            let pm1 = sol.p.clone() - one;
            if pm1.is_zero() {
                return Err(RationalError::IdenticallySingular(g));
            }
            let q_new = sol.q.clone() + RatFn::constant(half(&v2 - &v1)) / pm1;
            Ok(RationalSolution {
                v1: v2,
                v2: v1,
                q: q_new,
                p: sol.p.clone(),
            })
        }
        Generator::S2 => Ok(RationalSolution {
            v1,
            v2: -v2,
            q: -sol.q.substitute_is(),
            p: RatFn::constant(GaussianRational::from_int(1)) - sol.p.substitute_is(),
        }),
    }
}

/// Flow residual of a candidate solution, as a pair of rational functions.
/// Both are identically zero exactly when `(q, p)` solves the system at
/// `(v1, v2)`. Uses d/dt = (1/2s)·d/ds with t = s².
pub fn eom_residual_exact(sol: &RationalSolution) -> (RatFn, RatFn) {
    let t = RatFn::t();
    let s_half = RatFn::new(
        Poly::monomial(GaussianRational::from_ratio(1, 2), 1),
        Poly::one(),
    )
    .unwrap();
    let v1 = RatFn::constant(GaussianRational::from_rational(sol.v1.clone()));
    let vsum = RatFn::constant(half(&sol.v1 + &sol.v2));
    let two = RatFn::constant(GaussianRational::from_int(2));

    // t q' = 2q²p − q² − v1 q + t, with t q' = (s/2) dq/ds
    let q2 = sol.q.clone() * sol.q.clone();
    let rq = s_half.clone() * sol.q.derivative()
        - (two.clone() * q2.clone() * sol.p.clone() - q2.clone() - v1.clone() * sol.q.clone()
            + t);
    // t p' = −2qp² + (2q + v1)p − ½(v1+v2)
    let p2 = sol.p.clone() * sol.p.clone();
    let rp = s_half * sol.p.derivative()
        - (-(two.clone() * sol.q.clone() * p2)
            + (two * sol.q.clone() + v1) * sol.p.clone()
            - vsum);
    (rq, rp)
}

/// Apply a shift operator in exact arithmetic. The word is applied with the
/// rightmost letter acting first, exactly as in [`crate::weyl`].
pub fn rational_step(
    sol: &RationalSolution,
    op: ShiftOp,
) -> Result<RationalSolution, RationalError> {
    let word = match op {
        ShiftOp::T1 => crate::weyl::GeneratorWord::t1(),
        ShiftOp::T2 => crate::weyl::GeneratorWord::t2(),
    };
    let mut cur = sol.clone();
    for g in word.0.iter().rev() {
        cur = apply_generator_exact(*g, &cur)?;
    }
    Ok(cur)
}

/// Evaluate `(q, p)` numerically at complex t through the principal √t.
pub fn eval_solution(sol: &RationalSolution, t: Complex64) -> (Complex64, Complex64) {
    let s = t.sqrt();
    (sol.q.eval(s), sol.p.eval(s))
}

// --- serialization: coefficient lists with exact "num/den" strings ---

fn rational_to_string(r: &BigRational) -> String {
    r.to_string()
}

fn coeff_strings(p: &Poly) -> Vec<[String; 2]> {
    p.coeffs()
        .iter()
        .map(|c| [rational_to_string(&c.re), rational_to_string(&c.im)])
        .collect()
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.parse::<BigRational>().map_err(|e| format!("bad rational '{s}': {e}"))
}

fn coeffs_from_strings(v: &[[String; 2]]) -> Result<Poly, String> {
    let mut coeffs = Vec::with_capacity(v.len());
    for [re, im] in v {
        coeffs.push(GaussianRational::new(parse_rational(re)?, parse_rational(im)?));
    }
    Ok(Poly::from_coeffs(coeffs))
}

#[derive(Serialize, Deserialize)]
struct RatFnWire {
    num: Vec<[String; 2]>,
    den: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
struct RationalSolutionWire {
    v1: String,
    v2: String,
    q: RatFnWire,
    p: RatFnWire,
}

impl Serialize for RationalSolution {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        RationalSolutionWire {
            v1: rational_to_string(&self.v1),
            v2: rational_to_string(&self.v2),
            q: RatFnWire {
                num: coeff_strings(self.q.num()),
                den: coeff_strings(self.q.den()),
            },
            p: RatFnWire {
                num: coeff_strings(self.p.num()),
                den: coeff_strings(self.p.den()),
            },
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RationalSolution {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = RationalSolutionWire::deserialize(de)?;
        let q = RatFn::new(
            coeffs_from_strings(&wire.q.num).map_err(D::Error::custom)?,
            coeffs_from_strings(&wire.q.den).map_err(D::Error::custom)?,
        )
        .map_err(|e| D::Error::custom(e.to_string()))?;
        let p = RatFn::new(
            coeffs_from_strings(&wire.p.num).map_err(D::Error::custom)?,
            coeffs_from_strings(&wire.p.den).map_err(D::Error::custom)?,
        )
        .map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(RationalSolution {
            v1: parse_rational(&wire.v1).map_err(D::Error::custom)?,
            v2: parse_rational(&wire.v2).map_err(D::Error::custom)?,
            q,
            p,
        })
    }
}
