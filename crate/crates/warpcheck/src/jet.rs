//! Second-order forward-mode scalars.
//!
//! A [`Jet2`] carries a value together with its first and second derivative
//! with respect to one parameter. Writing a profile as ordinary arithmetic on
//! jets makes its derivative triple exact, which is what the closed-form
//! solution families need.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub d: f64,
    pub dd: f64,
}

impl Jet2 {
    pub const fn new(v: f64, d: f64, dd: f64) -> Self {
        Self { v, d, dd }
    }

    pub const fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0)
    }

    /// The independent variable seeded at `x`.
    pub const fn variable(x: f64) -> Self {
        Self::new(x, 1.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d.is_finite() && self.dd.is_finite()
    }

    /// Composes a univariate function given `(f, f', f'')` at `self.v`.
    pub fn compose(self, f: f64, df: f64, ddf: f64) -> Self {
        Self::new(f, df * self.d, ddf * self.d * self.d + df * self.dd)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.compose(e, e, e)
    }

    pub fn ln(self) -> Self {
        self.compose(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }

    pub fn powf(self, s: f64) -> Self {
        self.compose(
            self.v.powf(s),
            s * self.v.powf(s - 1.0),
            s * (s - 1.0) * self.v.powf(s - 2.0),
        )
    }

    pub fn powi(self, k: i32) -> Self {
        self.compose(
            self.v.powi(k),
            f64::from(k) * self.v.powi(k - 1),
            f64::from(k) * f64::from(k - 1) * self.v.powi(k - 2),
        )
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(self) -> Self {
        let v = self.v;
        Self::new(
            1.0 / v,
            -self.d / (v * v),
            (2.0 * self.d * self.d - v * self.dd) / (v * v * v),
        )
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v + o.v, self.d + o.d, self.dd + o.dd)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v - o.v, self.d - o.d, self.dd - o.dd)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.v * o.v,
            self.d * o.v + self.v * o.d,
            self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)] // a/b computed as a * b^-1
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.v, -self.d, -self.dd)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, c: f64) -> Jet2 {
        Jet2::new(self.v + c, self.d, self.dd)
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, c: f64) -> Jet2 {
        Jet2::new(self.v - c, self.d, self.dd)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, c: f64) -> Jet2 {
        Jet2::new(self.v * c, self.d * c, self.dd * c)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, c: f64) -> Jet2 {
        Jet2::new(self.v / c, self.d / c, self.dd / c)
    }
}

impl Add<Jet2> for f64 {
    type Output = Jet2;
    fn add(self, j: Jet2) -> Jet2 {
        j + self
    }
}

impl Sub<Jet2> for f64 {
    type Output = Jet2;
    fn sub(self, j: Jet2) -> Jet2 {
        Jet2::new(self - j.v, -j.d, -j.dd)
    }
}

impl Mul<Jet2> for f64 {
    type Output = Jet2;
    fn mul(self, j: Jet2) -> Jet2 {
        j * self
    }
}

impl Div<Jet2> for f64 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)] // c/b computed as b^-1 * c
    fn div(self, j: Jet2) -> Jet2 {
        j.recip() * self
    }
}
