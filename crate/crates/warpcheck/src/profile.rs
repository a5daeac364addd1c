//! One-dimensional profiles of the translation invariant `xi = sum alpha_i x_i`.

use std::fmt;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::jet::Jet2;

/// Open interval, possibly unbounded on either side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn open(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn all() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    /// `(-inf, hi)`
    pub fn below(hi: f64) -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi,
        }
    }

    /// `(lo, inf)`
    pub fn above(lo: f64) -> Self {
        Self {
            lo,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// A bounded closed sampling window inside the interval: length at most
    /// `len`, kept away from any finite endpoint by `margin_frac * len`.
    pub fn sampling_window(&self, len: f64, margin_frac: f64) -> (f64, f64) {
        let margin = margin_frac * len;
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (false, false) => (-0.5 * len, 0.5 * len),
            (false, true) => (self.hi - len, self.hi - margin),
            (true, false) => (self.lo + margin, self.lo + len),
            (true, true) => {
                let w = self.hi - self.lo;
                let m = margin_frac * w;
                (self.lo + m, self.hi - m)
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

type ProfileFn = dyn Fn(f64) -> Jet2 + Send + Sync;

/// A scalar profile of `xi` with exact first and second derivatives,
/// defined on an open interval.
#[derive(Clone)]
pub struct Profile {
    domain: Interval,
    eval: Arc<ProfileFn>,
}

impl Profile {
    pub fn new(domain: Interval, eval: impl Fn(f64) -> Jet2 + Send + Sync + 'static) -> Self {
        Self {
            domain,
            eval: Arc::new(eval),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(Interval::all(), move |_| Jet2::constant(c))
    }

    /// Polynomial `sum coeffs[j] xi^j`, globally defined.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let coeffs = coeffs.to_vec();
        Self::new(Interval::all(), move |xi| {
            let x = Jet2::variable(xi);
            let mut acc = Jet2::constant(0.0);
            for &c in coeffs.iter().rev() {
                acc = acc * x + c;
            }
            acc
        })
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn at(&self, xi: f64) -> Result<Jet2> {
        if !self.domain.contains(xi) {
            return Err(GeomError::OutsideDomain {
                xi,
                domain: self.domain.to_string(),
            });
        }
        let jet = (self.eval)(xi);
        if !jet.is_finite() {
            return Err(GeomError::NonFinite { point: vec![xi] });
        }
        Ok(jet)
    }
}

/// The pair `(phi, f)` of conformal factor and warping profiles.
///
/// Evaluation enforces `f > 0` and `phi != 0`; the shared domain is the
/// intersection of the two profile domains.
#[derive(Clone)]
pub struct ProfilePair {
    pub phi: Profile,
    pub f: Profile,
}

impl ProfilePair {
    pub fn new(phi: Profile, f: Profile) -> Self {
        Self { phi, f }
    }

    pub fn domain(&self) -> Interval {
        self.phi.domain().intersect(&self.f.domain())
    }

    /// Evaluates both derivative triples at `xi`.
    pub fn at(&self, xi: f64) -> Result<(Jet2, Jet2)> {
        let phi = self.phi.at(xi)?;
        let f = self.f.at(xi)?;
        if f.v <= 0.0 {
            return Err(GeomError::NonPositiveWarping {
                point: vec![xi],
                value: f.v,
            });
        }
        if phi.v == 0.0 {
            return Err(GeomError::VanishingConformalFactor { point: vec![xi] });
        }
        Ok((phi, f))
    }
}
