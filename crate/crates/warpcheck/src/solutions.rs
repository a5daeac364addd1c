//! The explicit Ricci-flat solution families and the null-direction
//! construction.
//!
//! The two closed-form families (`thm13` for a line fiber, `thm14` for a
//! Ricci-flat fiber of dimension >= 2) are power laws of a linear function of
//! `xi`, defined on a half-line; their derivative triples come from jet
//! arithmetic and are exact. Along a null direction any positive warping
//! profile works; the conformal factor then solves a linear second-order
//! equation integrated here with a classical fourth-order one-step method.

use crate::error::{GeomError, Result};
use crate::jet::Jet2;
use crate::profile::{Interval, Profile, ProfilePair};

/// Parameters of the line-fiber family (`m = 1`):
/// `phi = [2 / ((2-n) k1 xi + k2)]^{2/(n-2)}`,
/// `f = 2k / ((2-n) k1 xi + k2)`,
/// valid on `xi < k2 / ((n-2) k1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm13Params {
    pub n: usize,
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Thm13Params {
    pub fn new(n: usize, k: f64, k1: f64, k2: f64) -> Result<Self> {
        if n < 3 {
            return Err(GeomError::InvalidParameter("n must be >= 3".into()));
        }
        if k.is_nan() || k <= 0.0 || k1.is_nan() || k1 <= 0.0 {
            return Err(GeomError::InvalidParameter("k and k1 must be > 0".into()));
        }
        Ok(Self { n, k, k1, k2 })
    }

    /// Half-line on which the shared denominator stays positive.
    pub fn domain(&self) -> Interval {
        Interval::below(self.k2 / ((self.n as f64 - 2.0) * self.k1))
    }

    pub fn profiles(&self) -> ProfilePair {
        let &Self { n, k, k1, k2 } = self;
        let nf = n as f64;
        let dom = self.domain();
        let denom = move |xi: f64| Jet2::variable(xi) * ((2.0 - nf) * k1) + k2;
        let phi = Profile::new(dom, move |xi| {
            (2.0 / denom(xi)).powf(2.0 / (nf - 2.0))
        });
        let f = Profile::new(dom, move |xi| 2.0 * k / denom(xi));
        ProfilePair::new(phi, f)
    }
}

/// Which half-line (and exponent sign pairing) of the power-law family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Base `-beta (k1 xi + k2)`, exponents `-1/beta` and `-alpha/beta`,
    /// defined on `xi < -k2/k1`; the warping blows up at the boundary.
    Minus,
    /// Base `beta (k1 xi + k2)`, exponents `1/beta` and `alpha/beta`,
    /// defined on `xi > -k2/k1`.
    Plus,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Minus => "minus",
            Branch::Plus => "plus",
        }
    }
}

/// The two admissible values of the exponent ratio `alpha` with
/// `phi = k f^alpha`: `(m +- beta) / (n - 2)`.
pub fn alpha_exponents(n: usize, m: usize) -> (f64, f64) {
    let b = beta(n, m);
    let nf = n as f64;
    let mf = m as f64;
    ((mf + b) / (nf - 2.0), (mf - b) / (nf - 2.0))
}

/// `beta = sqrt(m (n-1) (m+n-2)) / (n-1)`.
pub fn beta(n: usize, m: usize) -> f64 {
    let nf = n as f64;
    let mf = m as f64;
    (mf * (nf - 1.0) * (mf + nf - 2.0)).sqrt() / (nf - 1.0)
}

/// Parameters of the power-law family with fiber dimension `m >= 2`:
/// `f = [-+ beta (k1 xi + k2)]^{-+ 1/beta}`,
/// `phi = k [-+ beta (k1 xi + k2)]^{-+ alpha/beta}`.
///
/// The minus branch pairs with `alpha = (m + beta)/(n-2)` and the plus branch
/// with `alpha = (m - beta)/(n-2)`; each pairing is forced by the residuals
/// of the reduced system and is covered by the tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm14Params {
    pub n: usize,
    pub m: usize,
    pub branch: Branch,
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
}

impl Thm14Params {
    pub fn new(n: usize, m: usize, branch: Branch, k: f64, k1: f64, k2: f64) -> Result<Self> {
        if n < 3 {
            return Err(GeomError::InvalidParameter("n must be >= 3".into()));
        }
        if m < 2 {
            return Err(GeomError::InvalidParameter(
                "the power-law family needs a fiber of dimension >= 2".into(),
            ));
        }
        if k.is_nan() || k <= 0.0 || k1.is_nan() || k1 <= 0.0 {
            return Err(GeomError::InvalidParameter("k and k1 must be > 0".into()));
        }
        Ok(Self {
            n,
            m,
            branch,
            k,
            k1,
            k2,
        })
    }

    pub fn beta(&self) -> f64 {
        beta(self.n, self.m)
    }

    /// The branch-paired exponent ratio.
    pub fn alpha_exponent(&self) -> f64 {
        let (plus, minus) = alpha_exponents(self.n, self.m);
        match self.branch {
            Branch::Minus => plus,
            Branch::Plus => minus,
        }
    }

    pub fn domain(&self) -> Interval {
        let boundary = -self.k2 / self.k1;
        match self.branch {
            Branch::Minus => Interval::below(boundary),
            Branch::Plus => Interval::above(boundary),
        }
    }

    pub fn profiles(&self) -> ProfilePair {
        let &Self {
            branch, k, k1, k2, ..
        } = self;
        let b = self.beta();
        let alpha = self.alpha_exponent();
        let dom = self.domain();
        let sign = match branch {
            Branch::Minus => -1.0,
            Branch::Plus => 1.0,
        };
        let base = move |xi: f64| (Jet2::variable(xi) * k1 + k2) * (sign * b);
        let f = Profile::new(dom, move |xi| base(xi).powf(sign / b));
        let phi = Profile::new(dom, move |xi| base(xi).powf(sign * alpha / b) * k);
        ProfilePair::new(phi, f)
    }
}

/// Roots of the characteristic equation `(n-2) r^2 - 2 m A r - m A^2 = 0`
/// governing exponential conformal factors over `f = k e^{A xi}` in the
/// null-direction equation. Returned as `(larger, smaller)`.
pub fn characteristic_roots(n: usize, m: usize, a: f64) -> (f64, f64) {
    let nf = n as f64;
    let mf = m as f64;
    let s = a.abs() * (mf * (mf + nf - 2.0)).sqrt();
    let r1 = (mf * a + s) / (nf - 2.0);
    let r2 = (mf * a - s) / (nf - 2.0);
    (r1.max(r2), r1.min(r2))
}

/// Exponents of the form `A (m +- sqrt(m (n-1))) / (n-2)`. They agree with
/// [`characteristic_roots`] exactly when `m = 1` and fail the profile
/// equation otherwise; kept so reports can surface the discrepancy.
pub fn m1_form_roots(n: usize, m: usize, a: f64) -> (f64, f64) {
    let nf = n as f64;
    let mf = m as f64;
    let s = a.abs() * (mf * (nf - 1.0)).sqrt();
    let r1 = (mf * a + s) / (nf - 2.0);
    let r2 = (mf * a - s) / (nf - 2.0);
    (r1.max(r2), r1.min(r2))
}

/// The exponential example over a null direction: `f = k e^{A xi}` admits
/// `phi = c1 e^{r+ xi} + c2 e^{r- xi}` with the characteristic roots as
/// exponents. Positive `c1, c2` give a globally defined positive `phi`.
#[derive(Clone)]
pub struct ExpExample {
    pub n: usize,
    pub m: usize,
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub roots: (f64, f64),
}

impl ExpExample {
    pub fn new(n: usize, m: usize, a: f64, c1: f64, c2: f64) -> Result<Self> {
        if n < 3 || m < 1 {
            return Err(GeomError::InvalidParameter("need n >= 3 and m >= 1".into()));
        }
        if a == 0.0 {
            return Err(GeomError::InvalidParameter("A must be nonzero".into()));
        }
        if c1 == 0.0 && c2 == 0.0 {
            return Err(GeomError::InvalidParameter(
                "c1 = c2 = 0 gives phi identically zero, which is not a conformal factor".into(),
            ));
        }
        Ok(Self {
            n,
            m,
            a,
            c1,
            c2,
            roots: characteristic_roots(n, m, a),
        })
    }

    pub fn phi_profile(&self) -> Profile {
        Self::mode_sum(self.c1, self.roots.0, self.c2, self.roots.1)
    }

    /// Same mode coefficients but with the `m = 1` exponent form; satisfies
    /// the profile equation only when `m = 1`.
    pub fn phi_profile_m1_form(&self) -> Profile {
        let r = m1_form_roots(self.n, self.m, self.a);
        Self::mode_sum(self.c1, r.0, self.c2, r.1)
    }

    pub fn f_profile(&self, k: f64) -> Result<Profile> {
        if k.is_nan() || k <= 0.0 {
            return Err(GeomError::InvalidParameter("k must be > 0".into()));
        }
        let a = self.a;
        Ok(Profile::new(Interval::all(), move |xi| {
            (Jet2::variable(xi) * a).exp() * k
        }))
    }

    fn mode_sum(c1: f64, r1: f64, c2: f64, r2: f64) -> Profile {
        Profile::new(Interval::all(), move |xi| {
            (Jet2::variable(xi) * r1).exp() * c1 + (Jet2::variable(xi) * r2).exp() * c2
        })
    }
}

/// A conformal-factor profile obtained by numerical integration of the
/// null-direction equation for a given positive warping profile: values,
/// first and second derivatives at uniformly spaced grid nodes.
#[derive(Clone)]
pub struct NullProfile {
    nodes: Vec<f64>,
    phi: Vec<[f64; 3]>,
    f: Profile,
    n: usize,
    m: usize,
    step: f64,
}

impl NullProfile {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn f_profile(&self) -> &Profile {
        &self.f
    }

    pub fn phi_at_node(&self, idx: usize) -> Jet2 {
        let [v, d, dd] = self.phi[idx];
        Jet2::new(v, d, dd)
    }

    /// Residual of the profile equation at a grid node.
    pub fn residual_at_node(&self, idx: usize) -> Result<f64> {
        let fj = self.f.at(self.nodes[idx])?;
        let phi = self.phi_at_node(idx);
        let nf = self.n as f64;
        let mf = self.m as f64;
        Ok((nf - 2.0) * fj.v * phi.dd - mf * phi.v * fj.dd - 2.0 * mf * phi.d * fj.d)
    }

    /// Grid values as a continuum [`Profile`]. Queries within `step * 1e-6`
    /// of a node return the stored triple; points in between use cubic
    /// Hermite interpolation of `(phi, phi')`.
    pub fn as_profile(&self) -> Profile {
        let nodes = self.nodes.clone();
        let phi = self.phi.clone();
        let step = self.step;
        let lo = nodes[0];
        let hi = *nodes.last().unwrap();
        // Domain is closed at the grid ends; widen by half a step so the end
        // nodes stay queryable through the open-interval check.
        let dom = Interval::open(lo - 0.5 * step, hi + 0.5 * step);
        Profile::new(dom, move |xi| {
            let idx = ((xi - lo) / step).round() as isize;
            let idx = idx.clamp(0, nodes.len() as isize - 1) as usize;
            if (nodes[idx] - xi).abs() < step * 1e-6 {
                let [v, d, dd] = phi[idx];
                return Jet2::new(v, d, dd);
            }
            let i0 = (((xi - lo) / step).floor() as isize)
                .clamp(0, nodes.len() as isize - 2) as usize;
            hermite(nodes[i0], step, phi[i0], phi[i0 + 1], xi)
        })
    }

    pub fn into_profile_pair(self) -> ProfilePair {
        let phi = self.as_profile();
        let f = self.f.clone();
        ProfilePair::new(phi, f)
    }
}

fn hermite(x0: f64, h: f64, a: [f64; 3], b: [f64; 3], xi: f64) -> Jet2 {
    let t = (xi - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let v = h00 * a[0] + h10 * h * a[1] + h01 * b[0] + h11 * h * b[1];
    let dh00 = 6.0 * t2 - 6.0 * t;
    let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    let dh01 = -6.0 * t2 + 6.0 * t;
    let dh11 = 3.0 * t2 - 2.0 * t;
    let d = (dh00 * a[0] + dh10 * h * a[1] + dh01 * b[0] + dh11 * h * b[1]) / h;
    let ddh00 = 12.0 * t - 6.0;
    let ddh10 = 6.0 * t - 4.0;
    let ddh01 = -12.0 * t + 6.0;
    let ddh11 = 6.0 * t - 2.0;
    let dd = (ddh00 * a[0] + ddh10 * h * a[1] + ddh01 * b[0] + ddh11 * h * b[1]) / (h * h);
    Jet2::new(v, d, dd)
}

/// Integrates the null-direction profile equation
/// `phi'' = [m phi f'' + 2 m phi' f'] / ((n-2) f)`
/// with classical fourth-order Runge-Kutta steps of fixed size, from the
/// initial data `(phi0, dphi0)` at `xi0`, covering `span` in both directions.
#[allow(clippy::too_many_arguments)]
pub fn integrate_null_profile(
    f: &Profile,
    n: usize,
    m: usize,
    xi0: f64,
    phi0: f64,
    dphi0: f64,
    step: f64,
    span: (f64, f64),
) -> Result<NullProfile> {
    if n < 3 || m < 1 {
        return Err(GeomError::InvalidParameter("need n >= 3 and m >= 1".into()));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(GeomError::InvalidParameter("step must be > 0".into()));
    }
    if !(span.0 <= xi0 && xi0 <= span.1) {
        return Err(GeomError::InvalidParameter(format!(
            "xi0 = {xi0} must lie inside the span [{}, {}]",
            span.0, span.1
        )));
    }

    let nf = n as f64;
    let mf = m as f64;
    let rhs = |xi: f64, y: [f64; 2]| -> Result<[f64; 2]> {
        let fj = f.at(xi)?;
        if fj.v <= 0.0 {
            return Err(GeomError::NonPositiveWarping {
                point: vec![xi],
                value: fj.v,
            });
        }
        Ok([y[1], (mf * fj.dd * y[0] + 2.0 * mf * fj.d * y[1]) / ((nf - 2.0) * fj.v)])
    };

    let march = |dir: f64, count: usize| -> Result<Vec<(f64, [f64; 2])>> {
        let h = dir * step;
        let mut out = Vec::with_capacity(count);
        let mut xi = xi0;
        let mut y = [phi0, dphi0];
        for j in 0..count {
            let k1 = rhs(xi, y)?;
            let k2 = rhs(xi + 0.5 * h, add(y, scale(k1, 0.5 * h)))?;
            let k3 = rhs(xi + 0.5 * h, add(y, scale(k2, 0.5 * h)))?;
            let k4 = rhs(xi + h, add(y, scale(k3, h)))?;
            y = [
                y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            ];
            xi = xi0 + (j as f64 + 1.0) * h;
            if !y[0].is_finite() || !y[1].is_finite() {
                return Err(GeomError::IntegrationBlowUp { xi });
            }
            out.push((xi, y));
        }
        Ok(out)
    };

    let fwd_count = ((span.1 - xi0) / step + 1e-9).floor() as usize;
    let bwd_count = ((xi0 - span.0) / step + 1e-9).floor() as usize;
    let forward = march(1.0, fwd_count)?;
    let backward = march(-1.0, bwd_count)?;

    let mut states: Vec<(f64, [f64; 2])> = backward.into_iter().rev().collect();
    states.push((xi0, [phi0, dphi0]));
    states.extend(forward);

    let mut nodes = Vec::with_capacity(states.len());
    let mut phi = Vec::with_capacity(states.len());
    for (xi, y) in states {
        let d2 = rhs(xi, y)?[1];
        nodes.push(xi);
        phi.push([y[0], y[1], d2]);
    }

    Ok(NullProfile {
        nodes,
        phi,
        f: f.clone(),
        n,
        m,
        step,
    })
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn scale(a: [f64; 2], s: f64) -> [f64; 2] {
    [a[0] * s, a[1] * s]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::einstein::{ode_residual_null, ode_residuals_nonnull};

    #[test]
    fn thm13_point_values_and_domain() {
        let p = Thm13Params::new(4, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(p.domain(), Interval::below(1.0));
        let pair = p.profiles();
        let (phi, f) = pair.at(0.0).unwrap();
        assert!((phi.v - 1.0).abs() < 1e-15);
        assert!((f.v - 1.0).abs() < 1e-15);
        assert!(pair.at(1.5).is_err());
    }

    #[test]
    fn thm13_satisfies_its_scaling_relation() {
        // f = k phi^{(n-2)/2} across the domain
        for n in [3usize, 5, 6] {
            let k = 1.7;
            let p = Thm13Params::new(n, k, 0.8, 2.0).unwrap();
            let pair = p.profiles();
            let (w0, w1) = p.domain().sampling_window(2.0, 0.01);
            for j in 0..100 {
                let xi = w0 + (w1 - w0) * (j as f64) / 99.0;
                let (phi, f) = pair.at(xi).unwrap();
                let expected = k * phi.v.powf((n as f64 - 2.0) / 2.0);
                assert!(
                    (f.v - expected).abs() < 1e-10 * expected.abs().max(1.0),
                    "n={n} xi={xi}"
                );
            }
        }
    }

    #[test]
    fn thm13_profiles_solve_the_reduced_system() {
        let p = Thm13Params::new(4, 1.0, 1.0, 2.0).unwrap();
        let pair = p.profiles();
        let r = ode_residuals_nonnull(&pair, 4, 1, 0.0, 0.0, 1, 0.0).unwrap();
        assert!(r.max_abs() < 1e-10, "{r:?}");
        // both causal signs work for the Ricci-flat case
        let r = ode_residuals_nonnull(&pair, 4, 1, 0.0, 0.0, -1, -0.7).unwrap();
        assert!(r.max_abs() < 1e-10);
    }

    #[test]
    fn thm14_parameter_values() {
        let p = Thm14Params::new(4, 2, Branch::Minus, 1.0, 1.0, 2.0).unwrap();
        assert!((p.beta() - 1.632_993_161_855_452).abs() < 1e-12);
        assert!((p.alpha_exponent() - 1.816_496_580_927_726).abs() < 1e-12);
        assert_eq!(p.domain(), Interval::below(-2.0));
        let plus = Thm14Params::new(4, 2, Branch::Plus, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(plus.domain(), Interval::above(-2.0));
        assert!(Thm14Params::new(4, 1, Branch::Plus, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn thm14_profiles_solve_the_reduced_system_on_both_branches() {
        for (n, m) in [(4usize, 2usize), (5, 3)] {
            for branch in [Branch::Minus, Branch::Plus] {
                let p = Thm14Params::new(n, m, branch, 1.3, 1.0, 2.0).unwrap();
                let pair = p.profiles();
                let (w0, w1) = p.domain().sampling_window(2.0, 0.2);
                for j in 0..25 {
                    let xi = w0 + (w1 - w0) * (j as f64) / 24.0;
                    let r = ode_residuals_nonnull(&pair, n, m, 0.0, 0.0, 1, xi).unwrap();
                    assert!(
                        r.max_abs() < 1e-8,
                        "n={n} m={m} {branch:?} xi={xi}: {r:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn thm14_scaling_relation_phi_equals_k_f_alpha() {
        let k = 2.1;
        for branch in [Branch::Minus, Branch::Plus] {
            let p = Thm14Params::new(5, 3, branch, k, 0.9, 1.4).unwrap();
            let pair = p.profiles();
            let alpha = p.alpha_exponent();
            let (w0, w1) = p.domain().sampling_window(2.0, 0.01);
            for j in 0..100 {
                let xi = w0 + (w1 - w0) * (j as f64) / 99.0;
                let (phi, f) = pair.at(xi).unwrap();
                let expected = k * f.v.powf(alpha);
                assert!((phi.v - expected).abs() < 1e-9 * expected.abs().max(1.0));
            }
        }
    }

    #[test]
    fn proof_level_alpha_matches_branch_exponent() {
        // (m(n-1) +- sqrt(m(n-1)(m+n-2))) / ((n-1)(n-2)) equals (m +- beta)/(n-2)
        for (n, m) in [(4usize, 2usize), (5, 3), (6, 2)] {
            let nf = n as f64;
            let mf = m as f64;
            let s = (mf * (nf - 1.0) * (mf + nf - 2.0)).sqrt();
            let proof_plus = (mf * (nf - 1.0) + s) / ((nf - 1.0) * (nf - 2.0));
            let proof_minus = (mf * (nf - 1.0) - s) / ((nf - 1.0) * (nf - 2.0));
            let (plus, minus) = alpha_exponents(n, m);
            assert!((proof_plus - plus).abs() < 1e-13);
            assert!((proof_minus - minus).abs() < 1e-13);
        }
    }

    #[test]
    fn minus_branch_warping_blows_up_at_the_boundary() {
        let p13 = Thm13Params::new(4, 1.0, 1.0, 2.0).unwrap();
        let p14 = Thm14Params::new(4, 2, Branch::Minus, 1.0, 1.0, 2.0).unwrap();
        for (pair, hi) in [
            (p13.profiles(), p13.domain().hi),
            (p14.profiles(), p14.domain().hi),
        ] {
            let mut last = 0.0;
            for j in 1..=24 {
                let xi = hi - 2.0_f64.powi(-j);
                let (_, f) = pair.at(xi).unwrap();
                assert!(f.v > last, "f must grow monotonically toward the boundary");
                last = f.v;
            }
            assert!(last > 1e3, "f should exceed any bound, got {last}");
        }
    }

    #[test]
    fn characteristic_roots_match_m1_form_only_for_line_fibers() {
        let (r1, r2) = characteristic_roots(3, 1, 1.0);
        assert!((r1 - (1.0 + 2.0_f64.sqrt())).abs() < 1e-14);
        assert!((r2 - (1.0 - 2.0_f64.sqrt())).abs() < 1e-14);
        let m1 = m1_form_roots(3, 1, 1.0);
        assert!((r1 - m1.0).abs() < 1e-14 && (r2 - m1.1).abs() < 1e-14);

        let (c1, c2) = characteristic_roots(4, 2, 1.0);
        assert!((c1 - (1.0 + 2.0_f64.sqrt())).abs() < 1e-14);
        assert!((c2 - (1.0 - 2.0_f64.sqrt())).abs() < 1e-14);
        let m1 = m1_form_roots(4, 2, 1.0);
        assert!((c1 - m1.0).abs() > 0.1, "the forms must differ for m > 1");
    }

    #[test]
    fn exp_example_solves_the_null_equation() {
        let ex = ExpExample::new(3, 1, 1.0, 1.0, 1.0).unwrap();
        let pair = ProfilePair::new(ex.phi_profile(), ex.f_profile(1.0).unwrap());
        for j in 0..50 {
            let xi = -1.0 + 2.0 * (j as f64) / 49.0;
            let r = ode_residual_null(&pair, 3, 1, 0.0, 0.0, xi).unwrap();
            assert!(r.residual.abs() < 1e-10, "xi={xi}: {}", r.residual);
        }
    }

    #[test]
    fn exp_example_m1_form_fails_for_fat_fibers() {
        let ex = ExpExample::new(4, 2, 1.0, 1.0, 1.0).unwrap();
        let pair = ProfilePair::new(ex.phi_profile_m1_form(), ex.f_profile(1.0).unwrap());
        let r = ode_residual_null(&pair, 4, 2, 0.0, 0.0, 0.0).unwrap();
        assert!(
            r.residual.abs() > 0.1,
            "the alternate exponents must leave a visible residual, got {}",
            r.residual
        );
    }

    #[test]
    fn exp_example_validation_and_positivity() {
        assert!(ExpExample::new(3, 1, 0.0, 1.0, 1.0).is_err());
        assert!(ExpExample::new(3, 1, 1.0, 0.0, 0.0).is_err());
        let ex = ExpExample::new(4, 2, -0.7, 0.3, 2.0).unwrap();
        let phi = ex.phi_profile();
        for j in 0..100 {
            let xi = -10.0 + 20.0 * (j as f64) / 99.0;
            assert!(phi.at(xi).unwrap().v > 0.0);
        }
    }

    #[test]
    fn integrator_reproduces_linear_solutions_exactly() {
        // constant warping makes the equation phi'' = 0
        let f = Profile::constant(1.0);
        let np = integrate_null_profile(&f, 4, 2, 0.0, 2.0, 0.5, 1e-2, (-1.0, 1.0)).unwrap();
        assert_eq!(np.nodes().len(), 201);
        for (idx, &xi) in np.nodes().iter().enumerate() {
            let expected = 2.0 + 0.5 * xi;
            assert!((np.phi_at_node(idx).v - expected).abs() < 1e-12);
            assert!(np.residual_at_node(idx).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn integrator_matches_pure_mode_solutions() {
        // f = e^xi, n = 3, m = 1: pure mode with r = 1 + sqrt(2)
        let f = Profile::new(Interval::all(), |xi| Jet2::variable(xi).exp());
        let r = 1.0 + 2.0_f64.sqrt();
        let np = integrate_null_profile(&f, 3, 1, 0.0, 1.0, r, 1e-3, (0.0, 1.0)).unwrap();
        for (idx, &xi) in np.nodes().iter().enumerate() {
            let expected = (r * xi).exp();
            assert!(
                (np.phi_at_node(idx).v - expected).abs() < 1e-6,
                "xi={xi}: {} vs {expected}",
                np.phi_at_node(idx).v
            );
        }
    }

    #[test]
    fn integrator_is_linear_in_the_initial_data() {
        let f = Profile::new(Interval::all(), |xi| (Jet2::variable(xi) * 0.8).exp() * 1.3);
        let run = |phi0: f64, dphi0: f64| {
            integrate_null_profile(&f, 4, 2, 0.0, phi0, dphi0, 1e-3, (-0.5, 0.5)).unwrap()
        };
        let a = run(1.0, 0.0);
        let b = run(0.0, 1.0);
        let c = run(2.0, -3.0);
        for idx in 0..a.nodes().len() {
            let combo = 2.0 * a.phi_at_node(idx).v - 3.0 * b.phi_at_node(idx).v;
            assert!((combo - c.phi_at_node(idx).v).abs() < 1e-9);
        }
    }

    #[test]
    fn integrator_rejects_nonpositive_warping() {
        let f = Profile::polynomial(&[0.5, 1.0]); // crosses zero at xi = -0.5
        let err = integrate_null_profile(&f, 3, 1, 0.0, 1.0, 0.0, 1e-2, (-2.0, 0.5));
        assert!(matches!(err, Err(GeomError::NonPositiveWarping { .. })));
    }

    #[test]
    fn grid_profile_view_returns_stored_triples_at_nodes() {
        let f = Profile::new(Interval::all(), |xi| Jet2::variable(xi).exp());
        let np = integrate_null_profile(&f, 3, 1, 0.0, 1.0, 0.3, 1e-2, (-0.3, 0.8)).unwrap();
        let prof = np.as_profile();
        for (idx, &xi) in np.nodes().iter().enumerate() {
            let a = np.phi_at_node(idx);
            let b = prof.at(xi).unwrap();
            assert_eq!(a.v, b.v);
            assert_eq!(a.d, b.d);
            assert_eq!(a.dd, b.dd);
        }
        // off-node queries interpolate smoothly
        let mid = prof.at(0.005).unwrap();
        assert!((mid.v - np.phi_at_node(0).v).abs() < 1.0);
    }
}
