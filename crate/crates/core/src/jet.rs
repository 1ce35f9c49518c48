//! Second-order jets (value, first and second derivative) over `Complex64`.
//!
//! All chain-rule residual checks in this crate propagate derivatives
//! analytically through the transformation formulas instead of re-deriving
//! each derivative by hand or falling back to finite differences. A [`Jet2`]
//! carries a function value together with its first two derivatives with
//! respect to a single (complex) base variable; the arithmetic below is the
//! usual truncated Taylor algebra.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl Jet2 {
    pub fn new(v: Complex64, d1: Complex64, d2: Complex64) -> Self {
        Jet2 { v, d1, d2 }
    }

    /// A constant: both derivatives vanish.
    pub fn constant(v: Complex64) -> Self {
        Jet2::new(v, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn real_constant(v: f64) -> Self {
        Jet2::constant(Complex64::new(v, 0.0))
    }

    /// The base variable itself: d/dx x = 1.
    pub fn variable(v: Complex64) -> Self {
        Jet2::new(v, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Square root with an explicitly chosen branch for the value.
    ///
    /// `root` must square to `self.v`; the derivatives follow from
    /// s' = f'/(2s) and s'' = (f'' - 2 s'^2)/(2s).
    pub fn sqrt_with_branch(self, root: Complex64) -> Jet2 {
        let d1 = 0.5 * self.d1 / root;
        let d2 = (self.d2 - 2.0 * d1 * d1) / (2.0 * root);
        Jet2::new(root, d1, d2)
    }

    /// Principal-branch square root.
    pub fn sqrt(self) -> Jet2 {
        self.sqrt_with_branch(self.v.sqrt())
    }

    pub fn powi2(self) -> Jet2 {
        self * self
    }

    /// Rescale the base variable: if `self` is a jet in x, return the jet of
    /// the same quantity in u where x = c·u (so d/du = c·d/dx).
    pub fn rescale_base(self, c: Complex64) -> Jet2 {
        Jet2::new(self.v, c * self.d1, c * c * self.d2)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        // h = f/g: solve f = h g order by order.
        let v = self.v / o.v;
        let d1 = (self.d1 - v * o.d1) / o.v;
        let d2 = (self.d2 - 2.0 * d1 * o.d1 - v * o.d2) / o.v;
        Jet2::new(v, d1, d2)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.v, -self.d1, -self.d2)
    }
}

impl Add<Complex64> for Jet2 {
    type Output = Jet2;
    fn add(self, c: Complex64) -> Jet2 {
        Jet2::new(self.v + c, self.d1, self.d2)
    }
}

impl Sub<Complex64> for Jet2 {
    type Output = Jet2;
    fn sub(self, c: Complex64) -> Jet2 {
        Jet2::new(self.v - c, self.d1, self.d2)
    }
}

impl Mul<Complex64> for Jet2 {
    type Output = Jet2;
    fn mul(self, c: Complex64) -> Jet2 {
        Jet2::new(self.v * c, self.d1 * c, self.d2 * c)
    }
}

impl Mul<Jet2> for Complex64 {
    type Output = Jet2;
    fn mul(self, j: Jet2) -> Jet2 {
        j * self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, c: f64) -> Jet2 {
        Jet2::new(self.v * c, self.d1 * c, self.d2 * c)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, c: f64) -> Jet2 {
        self + Complex64::new(c, 0.0)
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, c: f64) -> Jet2 {
        self - Complex64::new(c, 0.0)
    }
}

impl Div<Jet2> for f64 {
    type Output = Jet2;
    fn div(self, j: Jet2) -> Jet2 {
        Jet2::real_constant(self) / j
    }
}
