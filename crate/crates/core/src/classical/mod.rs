//! Classical solutions: parity classification, Bessel-Toeplitz τ
//! determinants, and exact rational solutions by shift-operator recurrences.
//!
//! One-parameter (Riccati/Bessel) solutions exist exactly when both
//! `v2 + v1` and `v2 − v1` are even integers; rational (zero-parameter)
//! solutions exactly when both are odd. Their τ-functions take Toeplitz
//! determinant form with Bessel entries,
//!
//! ```text
//! det[ I_{ν+j−k}(√t) + c K_{ν+j−k}(√t) ]   or
//! det[ J_{ν+j−k}(√t) + c Y_{ν+j−k}(√t) ],   0 ≤ j, k ≤ n.
//! ```
//!
//! The determinant is exposed for evaluation and log-derivative smoothness
//! checks; recovering `(q, p)` from a τ value alone is out of scope.

pub mod bessel;
pub mod rational;

pub use rational::{
    eom_residual_exact, eval_solution, rational_seed, rational_step, RationalError,
    RationalSolution, ShiftOp,
};

use crate::system::ParameterPoint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("classification needs real parameters")]
    NonRealParameters,
    #[error("τ determinant evaluation needs t ≠ 0")]
    ZeroT,
    #[error("K_ν needs Re √t > 0 (t off the negative real axis)")]
    InvalidDomain,
    #[error("τ determinant evaluation overflowed the validated range")]
    EvaluationOverflow,
}

/// Parity class of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionClass {
    /// Both v2 ± v1 even: one-parameter (Riccati/Bessel) solutions exist.
    OneParameter,
    /// Both v2 ± v1 odd: rational solutions exist.
    Rational,
    /// Neither condition holds.
    Generic,
}

/// Classification result; `mixed_parity` flags the case where v2 + v1 and
/// v2 − v1 are integers of opposite parity (neither displayed condition
/// holds for both signs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: SolutionClass,
    pub mixed_parity: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Parity {
    Even,
    Odd,
}

fn parity(x: f64) -> Option<Parity> {
    let r = x.rem_euclid(2.0);
    if r == 0.0 {
        Some(Parity::Even)
    } else if r == 1.0 {
        Some(Parity::Odd)
    } else {
        None
    }
}

/// Classify a real parameter point by the parity of v2 ± v1 (exact float
/// integer tests; no tolerance).
pub fn classify(v: ParameterPoint) -> Result<Classification, ClassicalError> {
    if v.v1.im != 0.0 || v.v2.im != 0.0 {
        return Err(ClassicalError::NonRealParameters);
    }
    let plus = parity(v.v2.re + v.v1.re);
    let minus = parity(v.v2.re - v.v1.re);
    Ok(match (plus, minus) {
        (Some(Parity::Even), Some(Parity::Even)) => Classification {
            class: SolutionClass::OneParameter,
            mixed_parity: false,
        },
        (Some(Parity::Odd), Some(Parity::Odd)) => Classification {
            class: SolutionClass::Rational,
            mixed_parity: false,
        },
        (Some(_), Some(_)) => Classification {
            class: SolutionClass::Generic,
            mixed_parity: true,
        },
        _ => Classification {
            class: SolutionClass::Generic,
            mixed_parity: false,
        },
    })
}

/// Which Bessel pair fills the Toeplitz entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BesselKind {
    IK,
    JY,
}

/// Specification of a Bessel-Toeplitz τ determinant of size (n+1)×(n+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselTauSpec {
    pub n: usize,
    pub nu: Complex64,
    pub c: Complex64,
    pub kind: BesselKind,
}

/// Entry of order ν+m for the chosen kind.
fn entry(kind: BesselKind, nu: Complex64, c: Complex64, x: Complex64) -> Option<Complex64> {
    let val = match kind {
        BesselKind::IK => {
            let i = bessel::bessel_i(nu, x);
            if c == Complex64::new(0.0, 0.0) {
                i
            } else {
                i + c * bessel::bessel_k(nu, x)?
            }
        }
        BesselKind::JY => {
            let j = bessel::bessel_j(nu, x);
            if c == Complex64::new(0.0, 0.0) {
                j
            } else {
                j + c * bessel::bessel_y(nu, x)
            }
        }
    };
    Some(val)
}

/// Determinant by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn det_complex(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let (pivot, _) = (col..n)
            .map(|r| (r, m[r][col].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if m[pivot][col] == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for k in col..n {
                let sub = f * m[col][k];
                m[r][k] -= sub;
            }
        }
    }
    det
}

/// Evaluate the Bessel-Toeplitz τ determinant at t.
///
/// Entry (j,k) depends only on j−k (Toeplitz): the 2n+1 distinct orders are
/// evaluated once and placed along the diagonals.
pub fn bessel_tau(spec: &BesselTauSpec, t: Complex64) -> Result<Complex64, ClassicalError> {
    if t == Complex64::new(0.0, 0.0) {
        return Err(ClassicalError::ZeroT);
    }
    let x = t.sqrt();
    if spec.kind == BesselKind::IK && spec.c != Complex64::new(0.0, 0.0) && x.re <= 0.0 {
        return Err(ClassicalError::InvalidDomain);
    }
    let n = spec.n;
    // orders ν + m for m ∈ [−n, n]
    let mut diag = Vec::with_capacity(2 * n + 1);
    for m in -(n as i64)..=(n as i64) {
        let nu = spec.nu + m as f64;
        let e = entry(spec.kind, nu, spec.c, x).ok_or(ClassicalError::InvalidDomain)?;
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(ClassicalError::EvaluationOverflow);
        }
        diag.push(e);
    }
    let matrix: Vec<Vec<Complex64>> = (0..=n)
        .map(|j| {
            (0..=n)
                .map(|k| diag[(j as i64 - k as i64 + n as i64) as usize])
                .collect()
        })
        .collect();
    let d = det_complex(matrix);
    if !d.re.is_finite() || !d.im.is_finite() {
        return Err(ClassicalError::EvaluationOverflow);
    }
    Ok(d)
}
