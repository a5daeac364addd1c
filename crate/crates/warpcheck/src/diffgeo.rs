//! Pseudo-Euclidean primitives, scalar-field derivative engines, and the
//! generic metric -> Christoffel -> Ricci -> scalar-curvature pipeline.
//!
//! The generic pipeline works from the raw component arrays `g`, `dg`, `d2g`
//! of an arbitrary metric field and serves as the independent oracle against
//! which every closed curvature formula in [`crate::warped`] is checked.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

/// Diagonal signs of a pseudo-Euclidean metric, `g_ij = delta_ij eps_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    eps: Vec<i8>,
}

impl Signature {
    /// Base-space signature; the constructions here need at least three
    /// dimensions.
    pub fn new(entries: &[i8]) -> Result<Self> {
        if entries.len() < 3 {
            return Err(GeomError::InvalidParameter(format!(
                "base signature needs at least 3 entries, got {}",
                entries.len()
            )));
        }
        Self::fiber(entries)
    }

    /// Fiber signature; any length >= 1 is allowed.
    pub fn fiber(entries: &[i8]) -> Result<Self> {
        if entries.is_empty() {
            return Err(GeomError::InvalidParameter(
                "signature needs at least 1 entry".into(),
            ));
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(GeomError::InvalidParameter(
                "signature entries must be +1 or -1".into(),
            ));
        }
        Ok(Self {
            eps: entries.to_vec(),
        })
    }

    /// Parses a sign string such as `"+++-"` as a base signature.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(&Self::signs_from_str(s)?)
    }

    /// Parses a sign string of any length >= 1 (fiber use).
    pub fn parse_fiber(s: &str) -> Result<Self> {
        Self::fiber(&Self::signs_from_str(s)?)
    }

    fn signs_from_str(s: &str) -> Result<Vec<i8>> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(GeomError::InvalidParameter(format!(
                    "signature string may only contain '+' and '-', got {c:?}"
                ))),
            })
            .collect()
    }

    /// All-plus signature of dimension `n >= 3`.
    pub fn riemannian(n: usize) -> Self {
        assert!(n >= 3);
        Self { eps: vec![1; n] }
    }

    pub fn dim(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self, i: usize) -> f64 {
        f64::from(self.eps[i])
    }

    pub fn entries(&self) -> &[i8] {
        &self.eps
    }

    pub fn to_string_signs(&self) -> String {
        self.eps.iter().map(|&e| if e > 0 { '+' } else { '-' }).collect()
    }
}

/// A point of the (pseudo-Euclidean) coordinate space.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Concatenates base and fiber coordinates into a product-space point.
    pub fn concat(&self, other: &Point) -> Point {
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Point::new(coords)
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

impl From<&[f64]> for Point {
    fn from(coords: &[f64]) -> Self {
        Self::new(coords.to_vec())
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// Value, gradient, and Hessian of a scalar field at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl FieldJet {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|v| v.is_finite())
            && self.hess.iter().all(|v| v.is_finite())
    }
}

type FieldEvalFn = dyn Fn(&Point) -> Result<FieldJet> + Send + Sync;

/// A twice-differentiable scalar function of the base coordinates, queryable
/// for value, gradient, and Hessian at a point.
///
/// Closed-form derivative triples are the first-class construction; central
/// finite differences ([`finite_difference_field`]) are the fallback for
/// fields only available as a value function. Returned Hessians are always
/// symmetric.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    eval: Arc<FieldEvalFn>,
}

impl ScalarField {
    pub fn from_eval(
        dim: usize,
        eval: impl Fn(&Point) -> Result<FieldJet> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            eval: Arc::new(eval),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &Point) -> Result<FieldJet> {
        if p.dim() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        let jet = (self.eval)(p)?;
        if !jet.is_finite() {
            return Err(GeomError::NonFinite {
                point: p.coords().to_vec(),
            });
        }
        Ok(jet)
    }

    pub fn value_at(&self, p: &Point) -> Result<f64> {
        Ok(self.eval(p)?.value)
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_eval(dim, move |_| {
            Ok(FieldJet {
                value: c,
                grad: DVector::zeros(dim),
                hess: DMatrix::zeros(dim, dim),
            })
        })
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        Self::from_eval(dim, move |p| {
            let mut grad = DVector::zeros(dim);
            grad[i] = 1.0;
            Ok(FieldJet {
                value: p[i],
                grad,
                hess: DMatrix::zeros(dim, dim),
            })
        })
    }

    /// Quadratic polynomial `c0 + l . x + x^T Q x` with exact derivatives.
    /// `quad` is symmetrized on construction.
    pub fn quadratic(c0: f64, lin: DVector<f64>, quad: DMatrix<f64>) -> Self {
        let dim = lin.len();
        assert_eq!(quad.nrows(), dim);
        assert_eq!(quad.ncols(), dim);
        let q = (quad.clone() + quad.transpose()) * 0.5;
        Self::from_eval(dim, move |p| {
            let x = DVector::from_column_slice(p.coords());
            let qx = &q * &x;
            Ok(FieldJet {
                value: c0 + lin.dot(&x) + x.dot(&qx),
                grad: &lin + qx * 2.0,
                hess: &q * 2.0,
            })
        })
    }
}

/// Builds a [`ScalarField`] from a bare value function by second-order
/// central differences: O(h^2) gradient, second-order Hessian stencil,
/// symmetrized as (H + H^T)/2.
///
/// A non-finite value at any stencil point surfaces as an evaluation error
/// carrying the offending point.
pub fn finite_difference_field(
    dim: usize,
    value_fn: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    step: f64,
) -> ScalarField {
    assert!(step > 0.0, "finite-difference step must be positive");
    ScalarField::from_eval(dim, move |p| {
        let probe = |coords: Vec<f64>| -> Result<f64> {
            let q = Point::new(coords);
            let v = value_fn(&q);
            if !v.is_finite() {
                return Err(GeomError::NonFinite {
                    point: q.coords().to_vec(),
                });
            }
            Ok(v)
        };
        let x = p.coords();
        let shifted = |i: usize, si: f64, j: usize, sj: f64| -> Vec<f64> {
            let mut c = x.to_vec();
            c[i] += si * step;
            c[j] += sj * step;
            c
        };

        let v0 = probe(x.to_vec())?;
        let mut grad = DVector::zeros(dim);
        let mut hess = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let vp = probe(shifted(i, 1.0, i, 0.0))?;
            let vm = probe(shifted(i, -1.0, i, 0.0))?;
            grad[i] = (vp - vm) / (2.0 * step);
            hess[(i, i)] = (vp - 2.0 * v0 + vm) / (step * step);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let vpp = probe(shifted(i, 1.0, j, 1.0))?;
                let vpm = probe(shifted(i, 1.0, j, -1.0))?;
                let vmp = probe(shifted(i, -1.0, j, 1.0))?;
                let vmm = probe(shifted(i, -1.0, j, -1.0))?;
                let hij = (vpp - vpm - vmp + vmm) / (4.0 * step * step);
                hess[(i, j)] = hij;
                hess[(j, i)] = hij;
            }
        }
        let hess = (hess.clone() + hess.transpose()) * 0.5;
        Ok(FieldJet {
            value: v0,
            grad,
            hess,
        })
    })
}

/// Metric components together with their first and second coordinate
/// derivatives at one point.
///
/// `dg[k][(i, j)] = d_k g_ij` and `d2g[k][l][(i, j)] = d_k d_l g_ij`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub g: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
    pub d2g: Vec<Vec<DMatrix<f64>>>,
}

type MetricEvalFn = dyn Fn(&Point) -> Result<MetricJet> + Send + Sync;

/// A metric field: symmetric invertible matrix plus derivative arrays at
/// every queried point. Derivative arrays may be supplied analytically or by
/// central finite differences of the component functions.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    singular_det: f64,
    eval: Arc<MetricEvalFn>,
}

impl MetricField {
    pub fn from_eval(
        dim: usize,
        eval: impl Fn(&Point) -> Result<MetricJet> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            singular_det: 1e-10,
            eval: Arc::new(eval),
        }
    }

    /// Overrides the |det g| threshold below which the metric is treated as
    /// singular rather than inverted.
    pub fn with_singular_threshold(mut self, threshold: f64) -> Self {
        self.singular_det = threshold;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn singular_threshold(&self) -> f64 {
        self.singular_det
    }

    pub fn at(&self, p: &Point) -> Result<MetricJet> {
        if p.dim() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        (self.eval)(p)
    }

    /// Constant flat metric `diag(eps)`.
    pub fn flat(sig: &Signature) -> Self {
        let n = sig.dim();
        let g = DMatrix::from_diagonal(&DVector::from_iterator(n, (0..n).map(|i| sig.eps(i))));
        Self::from_eval(n, move |_| {
            Ok(MetricJet {
                g: g.clone(),
                dg: vec![DMatrix::zeros(n, n); n],
                d2g: vec![vec![DMatrix::zeros(n, n); n]; n],
            })
        })
    }

    /// Conformally flat metric `phi^-2 diag(eps)` with analytic derivative
    /// arrays assembled from the derivative triple of `phi`.
    pub fn conformal(sig: &Signature, phi: &ScalarField) -> Result<Self> {
        let n = sig.dim();
        if phi.dim() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                got: phi.dim(),
            });
        }
        let sig = sig.clone();
        let phi = phi.clone();
        Ok(Self::from_eval(n, move |p| {
            let pj = phi.eval(p)?;
            if pj.value == 0.0 {
                return Err(GeomError::VanishingConformalFactor {
                    point: p.coords().to_vec(),
                });
            }
            let (w, dw, d2w) = inverse_square_jet(&pj);
            let mut jet = MetricJet {
                g: DMatrix::zeros(n, n),
                dg: vec![DMatrix::zeros(n, n); n],
                d2g: vec![vec![DMatrix::zeros(n, n); n]; n],
            };
            for i in 0..n {
                jet.g[(i, i)] = sig.eps(i) * w;
                for k in 0..n {
                    jet.dg[k][(i, i)] = sig.eps(i) * dw[k];
                    for l in 0..n {
                        jet.d2g[k][l][(i, i)] = sig.eps(i) * d2w[(k, l)];
                    }
                }
            }
            Ok(jet)
        }))
    }

    /// Full product metric `diag(phi^-2 eps_i, f^2 eta_a)` on the
    /// (n+m)-dimensional product space. `phi` and `f` live on the first `n`
    /// coordinates; all fiber derivatives vanish.
    pub fn warped_product(
        base: &Signature,
        phi: &ScalarField,
        f: &ScalarField,
        fiber: &Signature,
    ) -> Result<Self> {
        let n = base.dim();
        let m = fiber.dim();
        if phi.dim() != n || f.dim() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                got: phi.dim().max(f.dim()),
            });
        }
        let total = n + m;
        let base = base.clone();
        let fiber = fiber.clone();
        let phi = phi.clone();
        let f = f.clone();
        Ok(Self::from_eval(total, move |p| {
            let bp = Point::new(p.coords()[..n].to_vec());
            let pj = phi.eval(&bp)?;
            let fj = f.eval(&bp)?;
            if pj.value == 0.0 {
                return Err(GeomError::VanishingConformalFactor {
                    point: p.coords().to_vec(),
                });
            }
            if fj.value <= 0.0 {
                return Err(GeomError::NonPositiveWarping {
                    point: p.coords().to_vec(),
                    value: fj.value,
                });
            }
            let (w, dw, d2w) = inverse_square_jet(&pj);
            // s = f^2 and its base derivatives.
            let s = fj.value * fj.value;
            let ds = &fj.grad * (2.0 * fj.value);
            let d2s = (&fj.grad * fj.grad.transpose() + fj.value * &fj.hess) * 2.0;

            let mut jet = MetricJet {
                g: DMatrix::zeros(total, total),
                dg: vec![DMatrix::zeros(total, total); total],
                d2g: vec![vec![DMatrix::zeros(total, total); total]; total],
            };
            for i in 0..n {
                jet.g[(i, i)] = base.eps(i) * w;
                for k in 0..n {
                    jet.dg[k][(i, i)] = base.eps(i) * dw[k];
                    for l in 0..n {
                        jet.d2g[k][l][(i, i)] = base.eps(i) * d2w[(k, l)];
                    }
                }
            }
            for a in 0..m {
                let i = n + a;
                jet.g[(i, i)] = fiber.eps(a) * s;
                for k in 0..n {
                    jet.dg[k][(i, i)] = fiber.eps(a) * ds[k];
                    for l in 0..n {
                        jet.d2g[k][l][(i, i)] = fiber.eps(a) * d2s[(k, l)];
                    }
                }
            }
            Ok(jet)
        }))
    }

    /// Builds derivative arrays by central finite differences of the metric
    /// component function. Used to exercise the generic pipeline without
    /// analytic derivative input.
    pub fn from_value_fn(
        dim: usize,
        g_fn: impl Fn(&Point) -> DMatrix<f64> + Send + Sync + 'static,
        step: f64,
    ) -> Self {
        assert!(step > 0.0);
        let g_fn = Arc::new(g_fn);
        Self::from_eval(dim, move |p| {
            let x = p.coords();
            let eval = |coords: Vec<f64>| -> Result<DMatrix<f64>> {
                let q = Point::new(coords);
                let g = g_fn(&q);
                if g.iter().any(|v| !v.is_finite()) {
                    return Err(GeomError::NonFinite {
                        point: q.coords().to_vec(),
                    });
                }
                Ok(g)
            };
            let shifted = |i: usize, si: f64, j: usize, sj: f64| -> Vec<f64> {
                let mut c = x.to_vec();
                c[i] += si * step;
                c[j] += sj * step;
                c
            };
            let g0 = eval(x.to_vec())?;
            let mut dg = vec![DMatrix::zeros(dim, dim); dim];
            let mut d2g = vec![vec![DMatrix::zeros(dim, dim); dim]; dim];
            for k in 0..dim {
                let gp = eval(shifted(k, 1.0, k, 0.0))?;
                let gm = eval(shifted(k, -1.0, k, 0.0))?;
                dg[k] = (&gp - &gm) / (2.0 * step);
                d2g[k][k] = (&gp - &g0 * 2.0 + &gm) / (step * step);
            }
            #[allow(clippy::needless_range_loop)] // triangular fill of both (k,l) and (l,k)
            for k in 0..dim {
                for l in (k + 1)..dim {
                    let gpp = eval(shifted(k, 1.0, l, 1.0))?;
                    let gpm = eval(shifted(k, 1.0, l, -1.0))?;
                    let gmp = eval(shifted(k, -1.0, l, 1.0))?;
                    let gmm = eval(shifted(k, -1.0, l, -1.0))?;
                    let mixed = (gpp - gpm - gmp + gmm) / (4.0 * step * step);
                    d2g[k][l] = mixed.clone();
                    d2g[l][k] = mixed;
                }
            }
            Ok(MetricJet { g: g0, dg, d2g })
        })
    }
}

/// Derivative arrays of `w = phi^-2` from the derivative triple of `phi`.
fn inverse_square_jet(pj: &FieldJet) -> (f64, DVector<f64>, DMatrix<f64>) {
    let phi = pj.value;
    let w = 1.0 / (phi * phi);
    let dw = &pj.grad * (-2.0 / (phi * phi * phi));
    let d2w = &pj.grad * pj.grad.transpose() * (6.0 / phi.powi(4))
        - &pj.hess * (2.0 / phi.powi(3));
    (w, dw, d2w)
}

/// Christoffel symbols of the second kind at one point, one matrix per upper
/// index: `gamma[k][(i, j)]`.
#[derive(Debug, Clone)]
pub struct Christoffel {
    pub gamma: Vec<DMatrix<f64>>,
}

/// Curvature data of a metric at one point.
#[derive(Debug, Clone)]
pub struct CurvatureAtPoint {
    pub christoffel: Christoffel,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
}

fn inverse_checked(jet: &MetricJet, metric: &MetricField, p: &Point) -> Result<DMatrix<f64>> {
    let det = jet.g.determinant();
    if det.abs() < metric.singular_threshold() {
        return Err(GeomError::SingularMetric {
            point: p.coords().to_vec(),
            det,
        });
    }
    jet.g
        .clone()
        .try_inverse()
        .ok_or_else(|| GeomError::SingularMetric {
            point: p.coords().to_vec(),
            det,
        })
}

fn christoffel_from_jet(jet: &MetricJet, ginv: &DMatrix<f64>) -> Christoffel {
    let d = jet.g.nrows();
    let mut gamma = vec![DMatrix::zeros(d, d); d];
    for k in 0..d {
        for i in 0..d {
            for j in i..d {
                let mut s = 0.0;
                for l in 0..d {
                    s += ginv[(k, l)]
                        * (jet.dg[i][(j, l)] + jet.dg[j][(i, l)] - jet.dg[l][(i, j)]);
                }
                let v = 0.5 * s;
                gamma[k][(i, j)] = v;
                gamma[k][(j, i)] = v;
            }
        }
    }
    Christoffel { gamma }
}

/// Christoffel symbols `Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)`,
/// symmetric in the lower indices.
pub fn christoffel(metric: &MetricField, p: &Point) -> Result<Christoffel> {
    let jet = metric.at(p)?;
    let ginv = inverse_checked(&jet, metric, p)?;
    Ok(christoffel_from_jet(&jet, &ginv))
}

/// Ricci tensor, Christoffel symbols, and scalar curvature via the standard
/// contraction `R_ij = d_k Gamma^k_ij - d_j Gamma^k_ik + Gamma^k_kp Gamma^p_ij -
/// Gamma^k_jp Gamma^p_ik`. The result is symmetrized so stencil asymmetry
/// cannot leak into downstream residuals.
pub fn ricci_generic(metric: &MetricField, p: &Point) -> Result<CurvatureAtPoint> {
    let jet = metric.at(p)?;
    let ginv = inverse_checked(&jet, metric, p)?;
    let chr = christoffel_from_jet(&jet, &ginv);
    let d = metric.dim();

    // d_l g^{km} = -(g^-1 dg_l g^-1)^{km}
    let dginv: Vec<DMatrix<f64>> = (0..d).map(|l| -(&ginv * &jet.dg[l] * &ginv)).collect();

    // dgamma[l][k][(i, j)] = d_l Gamma^k_ij
    let mut dgamma = vec![vec![DMatrix::zeros(d, d); d]; d];
    for l in 0..d {
        for k in 0..d {
            for i in 0..d {
                for j in i..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += dginv[l][(k, m)]
                            * (jet.dg[i][(j, m)] + jet.dg[j][(i, m)] - jet.dg[m][(i, j)]);
                        s += ginv[(k, m)]
                            * (jet.d2g[i][l][(j, m)] + jet.d2g[j][l][(i, m)]
                                - jet.d2g[m][l][(i, j)]);
                    }
                    let v = 0.5 * s;
                    dgamma[l][k][(i, j)] = v;
                    dgamma[l][k][(j, i)] = v;
                }
            }
        }
    }

    let mut ricci = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut r = 0.0;
            for k in 0..d {
                r += dgamma[k][k][(i, j)] - dgamma[j][k][(i, k)];
            }
            for k in 0..d {
                for q in 0..d {
                    r += chr.gamma[k][(k, q)] * chr.gamma[q][(i, j)]
                        - chr.gamma[k][(j, q)] * chr.gamma[q][(i, k)];
                }
            }
            ricci[(i, j)] = r;
        }
    }
    let ricci = (ricci.clone() + ricci.transpose()) * 0.5;

    let mut scalar = 0.0;
    for i in 0..d {
        for j in 0..d {
            scalar += ginv[(i, j)] * ricci[(i, j)];
        }
    }

    Ok(CurvatureAtPoint {
        christoffel: chr,
        ricci,
        scalar,
    })
}

/// Residual of the Einstein condition: `Ric(p) - lambda g(p)`.
pub fn einstein_residual_generic(
    metric: &MetricField,
    lambda: f64,
    p: &Point,
) -> Result<DMatrix<f64>> {
    let curv = ricci_generic(metric, p)?;
    let jet = metric.at(p)?;
    Ok(curv.ricci - jet.g * lambda)
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}
