//! In-repo Bessel functions of complex order for the Toeplitz τ determinants.
//!
//! Methods and validated envelope (relative accuracy on real argument
//! `0 < x ≤ 20`, order `|ν| ≤ 10`):
//!
//! - `I_ν`: ascending series with term-ratio recursion, negative-integer
//!   orders folded through `I_{−n} = I_n`. ~1e−13.
//! - `J_ν`: ascending series for `|z| < 13`, Hankel asymptotic expansion
//!   beyond; `J_{−n} = (−1)^n J_n`. ~1e−12, worst ~1e−11 near the crossover.
//! - `K_ν`: trapezoidal quadrature of `∫₀^∞ e^{−z cosh u} cosh(νu) du`
//!   (requires `Re z > 0`), with step-halving until two refinements agree.
//!   ~1e−13.
//! - `Y_ν`: reflection through `J_{±ν}` for non-integer orders; the
//!   logarithmic ascending series at integer orders; Hankel asymptotics for
//!   `|z| ≥ 13`. ~1e−12, worst ~1e−11 near the crossover.
//!
//! Complex arguments are accepted (K needs `Re z > 0`); accuracy is
//! validated on the real axis, which is where the τ determinants live.

use num_complex::Complex64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Lanczos approximation, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal branch of log Γ(z).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1−z) = π / sin(πz)
        let pi = Complex64::new(PI, 0.0);
        return (pi / (PI * z).sin()).ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

fn near_integer(nu: Complex64, tol: f64) -> Option<i64> {
    if nu.im.abs() < tol && (nu.re - nu.re.round()).abs() < tol {
        Some(nu.re.round() as i64)
    } else {
        None
    }
}

/// Modified Bessel function of the first kind, ascending series.
pub fn bessel_i(nu: Complex64, z: Complex64) -> Complex64 {
    if let Some(n) = near_integer(nu, 1e-12) {
        if n < 0 {
            return bessel_i(Complex64::new((-n) as f64, 0.0), z);
        }
    }
    series_sum(nu, z, false)
}

/// Bessel function of the first kind: series below |z| = 13, Hankel
/// asymptotics beyond.
pub fn bessel_j(nu: Complex64, z: Complex64) -> Complex64 {
    if let Some(n) = near_integer(nu, 1e-12) {
        if n < 0 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            return sign * bessel_j(Complex64::new((-n) as f64, 0.0), z);
        }
    }
    if z.norm() >= 13.0 {
        hankel_jy(nu, z).0
    } else {
        series_sum(nu, z, true)
    }
}

/// Σ_m (±1)^m (z/2)^{ν+2m} / (m! Γ(ν+m+1)); `alternating` selects J over I.
fn series_sum(nu: Complex64, z: Complex64, alternating: bool) -> Complex64 {
    let half_z = 0.5 * z;
    let mut term = (nu * half_z.ln() - ln_gamma(nu + 1.0)).exp();
    let z2 = half_z * half_z * if alternating { -1.0 } else { 1.0 };
    let mut sum = term;
    let mut max_mag = term.norm();
    for m in 0..400 {
        term = term * z2 / ((m as f64 + 1.0) * (nu + m as f64 + 1.0));
        sum += term;
        max_mag = max_mag.max(term.norm());
        if term.norm() < 1e-18 * max_mag.max(sum.norm()) {
            break;
        }
    }
    sum
}

/// Hankel large-argument expansion; returns (J, Y).
fn hankel_jy(nu: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let mu = 4.0 * nu * nu;
    let omega = z - (0.5 * nu + 0.25) * PI;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut a = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..40 {
        let kf = k as f64;
        a = a * (mu - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (kf * 8.0 * z);
        if a.norm() > prev {
            break; // asymptotic tail started to diverge
        }
        prev = a.norm();
        // signs follow the period-4 pattern +, -, -, + on (Q, P, Q, P)
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if a.norm() < 1e-17 {
            break;
        }
    }
    let amp = (2.0 / (PI * z)).sqrt();
    let (s, c) = (omega.sin(), omega.cos());
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// Modified Bessel function of the second kind via the cosh-integral
/// representation; requires `Re z > 0`.
pub fn bessel_k(nu: Complex64, z: Complex64) -> Option<Complex64> {
    if z.re <= 0.0 {
        return None;
    }
    let mut h = 0.1f64.min(0.4 / z.norm().sqrt().max(1.0));
    let mut value = k_trapezoid(nu, z, h);
    for _ in 0..3 {
        let refined = k_trapezoid(nu, z, h / 2.0);
        if (refined - value).norm() <= 1e-14 * refined.norm().max(1e-300) {
            return Some(refined);
        }
        value = refined;
        h /= 2.0;
    }
    Some(value)
}

fn k_trapezoid(nu: Complex64, z: Complex64, h: f64) -> Complex64 {
    let f = |u: f64| (-z * u.cosh() + nu * u).exp() * 0.5 + (-z * u.cosh() - nu * u).exp() * 0.5;
    let mut sum = 0.5 * f(0.0);
    let mut max_mag = sum.norm();
    let mut k = 1usize;
    loop {
        let u = k as f64 * h;
        let term = f(u);
        sum += term;
        max_mag = max_mag.max(term.norm());
        // the integrand is unimodal past its peak; stop once negligible
        if (term.norm() < 1e-18 * max_mag.max(1e-300) && u > 3.0) || u > 120.0 {
            break;
        }
        k += 1;
        if k > 200_000 {
            break;
        }
    }
    h * sum
}

/// Bessel function of the second kind.
pub fn bessel_y(nu: Complex64, z: Complex64) -> Complex64 {
    if z.norm() >= 13.0 {
        return hankel_jy(nu, z).1;
    }
    if let Some(n) = near_integer(nu, 1e-9) {
        let y = bessel_y_int(n.unsigned_abs() as usize, z);
        return if n < 0 && n % 2 != 0 { -y } else { y };
    }
    let nupi = nu * PI;
    (bessel_j(nu, z) * nupi.cos() - bessel_j(-nu, z)) / nupi.sin()
}

fn digamma_int(m: usize) -> f64 {
    // ψ(m) = −γ + Σ_{j=1}^{m−1} 1/j
    let mut s = -EULER_GAMMA;
    for j in 1..m {
        s += 1.0 / j as f64;
    }
    s
}

/// Logarithmic ascending series for integer order n ≥ 0.
fn bessel_y_int(n: usize, z: Complex64) -> Complex64 {
    let half_z = 0.5 * z;
    let ln_half_z = half_z.ln();
    let jn = bessel_j(Complex64::new(n as f64, 0.0), z);

    // finite sum with factorials
    let mut finite = Complex64::new(0.0, 0.0);
    if n > 0 {
        let z2 = half_z * half_z;
        // (n−k−1)!/k! (z/2)^{2k−n}
        let mut fact_nk = (1..n).product::<usize>() as f64; // (n-1)!
        let mut fact_k = 1.0;
        let mut pow = (-(n as f64) * ln_half_z).exp(); // (z/2)^{-n}
        for k in 0..n {
            finite += fact_nk / fact_k * pow;
            pow *= z2;
            if k + 1 < n {
                fact_nk /= (n - k - 1) as f64;
                fact_k *= (k + 1) as f64;
            }
        }
    }

    // series with digamma weights
    let mut series = Complex64::new(0.0, 0.0);
    let mut term = ((n as f64) * ln_half_z).exp() / (1..=n).product::<usize>().max(1) as f64;
    let z2 = half_z * half_z;
    let mut max_mag: f64 = 0.0;
    for k in 0..400 {
        let weight = digamma_int(k + 1) + digamma_int(n + k + 1);
        let contrib = weight * term;
        series += contrib;
        max_mag = max_mag.max(contrib.norm());
        if contrib.norm() < 1e-18 * max_mag.max(series.norm()) && k > 2 {
            break;
        }
        term = term * (-z2) / ((k as f64 + 1.0) * (n + k + 1) as f64);
    }

    (2.0 * ln_half_z * jn - finite - series) / PI
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_rel(actual: Complex64, expect: Complex64, tol: f64, what: &str) {
        let denom = expect.norm().max(1e-300);
        let rel = (actual - expect).norm() / denom;
        assert!(rel < tol, "{what}: got {actual}, want {expect} (rel {rel:.2e})");
    }

    #[test]
    fn ln_gamma_values() {
        // Γ(5) = 24, Γ(1/2) = √π
        assert_rel(ln_gamma(c(5.0, 0.0)).exp(), c(24.0, 0.0), 1e-13, "gamma(5)");
        assert_rel(
            ln_gamma(c(0.5, 0.0)).exp(),
            c(PI.sqrt(), 0.0),
            1e-13,
            "gamma(1/2)",
        );
        // reflection side: Γ(−1.5) = 4√π/3
        assert_rel(
            ln_gamma(c(-1.5, 0.0)).exp(),
            c(4.0 * PI.sqrt() / 3.0, 0.0),
            1e-12,
            "gamma(-3/2)",
        );
    }

    #[test]
    fn bessel_i_reference_values() {
        assert_rel(bessel_i(c(0.0, 0.0), c(1.0, 0.0)), c(1.2660658777520083356, 0.0), 1e-13, "I0(1)");
        assert_rel(bessel_i(c(1.0, 0.0), c(1.0, 0.0)), c(0.56515910399248502721, 0.0), 1e-13, "I1(1)");
        assert_rel(bessel_i(c(0.5, 0.0), c(1.3, 0.0)), c(1.188512833397274823, 0.0), 1e-13, "I(.5,1.3)");
        assert_rel(bessel_i(c(-2.3, 0.0), c(0.7, 0.0)), c(3.1124081779981514467, 0.0), 1e-13, "I(-2.3,.7)");
        assert_rel(bessel_i(c(3.0, 0.0), c(20.0, 0.0)), c(34592416.340919618931, 0.0), 1e-13, "I(3,20)");
        assert_rel(bessel_i(c(-4.0, 0.0), c(2.0, 0.0)), c(0.050728569979180238238, 0.0), 1e-13, "I(-4,2)");
        assert_rel(
            bessel_i(c(0.5, 0.2), c(1.3, 0.0)),
            c(1.1964027330066783847, -0.15266661735145748943),
            1e-13,
            "I(.5+.2i,1.3)",
        );
        assert_rel(
            bessel_i(c(1.5, 0.0), c(2.0, 1.0)),
            c(0.5866920484027926689, 1.0553049312656891883),
            1e-13,
            "I(1.5,2+i)",
        );
    }

    #[test]
    fn bessel_k_reference_values() {
        assert_rel(bessel_k(c(0.0, 0.0), c(1.0, 0.0)).unwrap(), c(0.42102443824070833334, 0.0), 1e-12, "K0(1)");
        assert_rel(bessel_k(c(0.0, 0.0), c(0.5, 0.0)).unwrap(), c(0.92441907122766586178, 0.0), 1e-12, "K0(.5)");
        assert_rel(bessel_k(c(1.0, 0.0), c(2.5, 0.0)).unwrap(), c(0.073890816347747063649, 0.0), 1e-12, "K1(2.5)");
        assert_rel(bessel_k(c(0.3, 0.0), c(7.0, 0.0)).unwrap(), c(4.2736373082278935604e-4, 0.0), 1e-12, "K(.3,7)");
        assert_rel(
            bessel_k(c(2.7, 0.0), c(19.5, 0.0)).unwrap(),
            c(1.1499461782517212643e-9, 0.0),
            1e-12,
            "K(2.7,19.5)",
        );
        assert_rel(
            bessel_k(c(0.5, 0.2), c(1.3, 0.0)).unwrap(),
            c(0.29561204081280707146, 0.017435617019085544171),
            1e-12,
            "K(.5+.2i,1.3)",
        );
        assert_rel(
            bessel_k(c(0.0, 0.0), c(2.0, 1.0)).unwrap(),
            c(0.037987722915986459255, -0.1017135754613908733),
            1e-12,
            "K(0,2+i)",
        );
        assert!(bessel_k(c(0.0, 0.0), c(-1.0, 0.0)).is_none());
    }

    #[test]
    fn bessel_j_reference_values() {
        assert_rel(bessel_j(c(0.0, 0.0), c(2.0, 0.0)), c(0.22389077914123566805, 0.0), 1e-12, "J0(2)");
        assert_rel(bessel_j(c(1.0, 0.0), c(5.0, 0.0)), c(-0.32757913759146522204, 0.0), 1e-12, "J1(5)");
        assert_rel(bessel_j(c(0.5, 0.0), c(3.0, 0.0)), c(0.065008182877375778114, 0.0), 1e-12, "J(.5,3)");
        assert_rel(bessel_j(c(-1.7, 0.0), c(4.2, 0.0)), c(0.40148496847776505598, 0.0), 1e-12, "J(-1.7,4.2)");
        assert_rel(bessel_j(c(2.0, 0.0), c(18.0, 0.0)), c(-0.0075325148878013995603, 0.0), 1e-11, "J(2,18)");
        assert_rel(bessel_j(c(-3.0, 0.0), c(1.1, 0.0)), c(-0.025694528612463281747, 0.0), 1e-12, "J(-3,1.1)");
        assert_rel(
            bessel_j(c(0.7, 0.1), c(2.4, 0.0)),
            c(0.44357713823651735739, 0.0381865925076511807),
            1e-12,
            "J(.7+.1i,2.4)",
        );
    }

    #[test]
    fn bessel_y_reference_values() {
        assert_rel(bessel_y(c(0.0, 0.0), c(2.0, 0.0)), c(0.5103756726497451196, 0.0), 1e-12, "Y0(2)");
        assert_rel(bessel_y(c(1.0, 0.0), c(3.5, 0.0)), c(0.41018841788751188287, 0.0), 1e-12, "Y1(3.5)");
        assert_rel(bessel_y(c(0.4, 0.0), c(2.0, 0.0)), c(0.30105220360467575079, 0.0), 1e-12, "Y(.4,2)");
        assert_rel(bessel_y(c(5.0, 0.0), c(16.0, 0.0)), c(0.19632958325308617198, 0.0), 1e-11, "Y(5,16)");
        assert_rel(bessel_y(c(-2.5, 0.0), c(6.0, 0.0)), c(-0.072949745907826789685, 0.0), 1e-12, "Y(-2.5,6)");
        assert_rel(bessel_y(c(3.0, 0.0), c(0.8, 0.0)), c(-10.814646633575593765, 0.0), 1e-12, "Y(3,0.8)");
        assert_rel(
            bessel_y(c(0.7, 0.1), c(2.4, 0.0)),
            c(0.27849811963254089454, -0.055779222474670885825),
            1e-12,
            "Y(.7+.1i,2.4)",
        );
    }

    #[test]
    fn wronskian_like_relation() {
        // I_ν K_{ν+1} + I_{ν+1} K_ν = 1/z on a grid
        for x in [0.5, 1.0, 2.0, 5.0, 11.0, 19.0] {
            for nu in [0.0, 0.5, 1.0, 2.25, 5.0] {
                let z = c(x, 0.0);
                let nu = c(nu, 0.0);
                let lhs = bessel_i(nu, z) * bessel_k(nu + 1.0, z).unwrap()
                    + bessel_i(nu + 1.0, z) * bessel_k(nu, z).unwrap();
                assert_rel(lhs, 1.0 / z, 1e-11, "IK wronskian");
            }
        }
    }

    #[test]
    fn jy_wronskian() {
        // J_{ν+1} Y_ν − J_ν Y_{ν+1} = 2/(πz)
        for x in [0.7, 2.0, 6.0, 12.0, 15.0] {
            for nu in [0.0, 0.3, 1.0, 4.5] {
                let z = c(x, 0.0);
                let nu = c(nu, 0.0);
                let lhs = bessel_j(nu + 1.0, z) * bessel_y(nu, z)
                    - bessel_j(nu, z) * bessel_y(nu + 1.0, z);
                assert_rel(lhs, c(2.0 / (PI * x), 0.0), 1e-10, "JY wronskian");
            }
        }
    }
}
