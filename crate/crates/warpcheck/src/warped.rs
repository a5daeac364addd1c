//! Closed-form curvature of the two metrics under study: the conformally
//! flat base `gbar = phi^-2 g` and the warped product `gbar + f^2 g_F`.
//!
//! Everything here has an independent check: the conformal Ricci against the
//! generic pipeline on the same metric, and the warped Ricci blocks against
//! the full product metric with a concrete flat fiber.

use nalgebra::DMatrix;

use crate::diffgeo::{
    max_abs, ricci_generic, FieldJet, MetricField, Point, ScalarField, Signature,
};
use crate::error::{GeomError, Result};

/// The bundle `(n, eps, phi, f, m, lambda_F)` defining the warped metric
/// `phi^-2 g + f^2 g_F` over a pseudo-Euclidean base.
///
/// The fiber enters only through its dimension `m >= 1` and Einstein constant
/// `lambda_F`; a one-dimensional fiber forces `lambda_F = 0`.
#[derive(Clone)]
pub struct WarpedGeometry {
    base_sig: Signature,
    phi: ScalarField,
    f: ScalarField,
    fiber_dim: usize,
    lambda_fiber: f64,
}

impl WarpedGeometry {
    pub fn new(
        base_sig: Signature,
        phi: ScalarField,
        f: ScalarField,
        fiber_dim: usize,
        lambda_fiber: f64,
    ) -> Result<Self> {
        let n = base_sig.dim();
        if phi.dim() != n || f.dim() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                got: phi.dim().max(f.dim()),
            });
        }
        if fiber_dim == 0 {
            return Err(GeomError::InvalidParameter(
                "fiber dimension must be >= 1".into(),
            ));
        }
        if fiber_dim == 1 && lambda_fiber != 0.0 {
            return Err(GeomError::InvalidParameter(
                "a one-dimensional fiber is flat, so lambda_F must be 0".into(),
            ));
        }
        Ok(Self {
            base_sig,
            phi,
            f,
            fiber_dim,
            lambda_fiber,
        })
    }

    pub fn base_dim(&self) -> usize {
        self.base_sig.dim()
    }

    pub fn signature(&self) -> &Signature {
        &self.base_sig
    }

    pub fn phi(&self) -> &ScalarField {
        &self.phi
    }

    pub fn warping(&self) -> &ScalarField {
        &self.f
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn lambda_fiber(&self) -> f64 {
        self.lambda_fiber
    }

    /// Evaluates `phi` at `p`, rejecting a vanishing conformal factor.
    pub(crate) fn phi_jet(&self, p: &Point) -> Result<FieldJet> {
        let jet = self.phi.eval(p)?;
        if jet.value == 0.0 {
            return Err(GeomError::VanishingConformalFactor {
                point: p.coords().to_vec(),
            });
        }
        Ok(jet)
    }

    /// Evaluates `f` at `p`, rejecting non-positive warping values.
    pub(crate) fn f_jet(&self, p: &Point) -> Result<FieldJet> {
        let jet = self.f.eval(p)?;
        if jet.value <= 0.0 {
            return Err(GeomError::NonPositiveWarping {
                point: p.coords().to_vec(),
                value: jet.value,
            });
        }
        Ok(jet)
    }
}

/// Ricci tensor of the warped metric split along the product structure.
#[derive(Debug, Clone)]
pub struct WarpedRicciComponents {
    /// `Ric(X_i, X_j)` over base directions.
    pub base_base: DMatrix<f64>,
    /// The mixed base-fiber components vanish identically for a warped
    /// product; this flag records the assertion.
    pub mixed_zero: bool,
    /// `gamma` with `Ric(Y_i, Y_j) = gamma g_F(Y_i, Y_j)` over fiber
    /// directions.
    pub fiber_coefficient: f64,
}

fn conformal_ricci_from_jet(sig: &Signature, pj: &FieldJet) -> DMatrix<f64> {
    let n = sig.dim();
    let phi = pj.value;
    let lap: f64 = (0..n).map(|k| sig.eps(k) * pj.hess[(k, k)]).sum();
    let grad_sq: f64 = (0..n).map(|k| sig.eps(k) * pj.grad[k] * pj.grad[k]).sum();
    let nf = n as f64;
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            ((nf - 2.0) * pj.hess[(i, i)] + sig.eps(i) * lap) / phi
                - (nf - 1.0) * sig.eps(i) * grad_sq / (phi * phi)
        } else {
            (nf - 2.0) * pj.hess[(i, j)] / phi
        }
    })
}

fn conformal_hessian_from_jets(sig: &Signature, pj: &FieldJet, fj: &FieldJet) -> DMatrix<f64> {
    let n = sig.dim();
    let phi = pj.value;
    let cross: f64 = (0..n)
        .map(|k| sig.eps(k) * pj.grad[k] * fj.grad[k])
        .sum();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            fj.hess[(i, i)] + 2.0 * pj.grad[i] * fj.grad[i] / phi - sig.eps(i) * cross / phi
        } else {
            fj.hess[(i, j)] + (pj.grad[j] * fj.grad[i] + pj.grad[i] * fj.grad[j]) / phi
        }
    })
}

/// Ricci tensor of the conformal base metric `phi^-2 g` in closed form:
/// off-diagonal `(n-2) phi_,ij / phi`, diagonal
/// `[(n-2) phi_,ii + eps_i sum_k eps_k phi_,kk] / phi
///  - (n-1) eps_i sum_k eps_k phi_,k^2 / phi^2`.
pub fn conformal_ricci(geom: &WarpedGeometry, p: &Point) -> Result<DMatrix<f64>> {
    let pj = geom.phi_jet(p)?;
    Ok(conformal_ricci_from_jet(geom.signature(), &pj))
}

/// Hessian of `f` with respect to the conformal base metric, assembled from
/// the conformal Christoffel symbols.
pub fn conformal_hessian(geom: &WarpedGeometry, p: &Point) -> Result<DMatrix<f64>> {
    let pj = geom.phi_jet(p)?;
    let fj = geom.f.eval(p)?;
    Ok(conformal_hessian_from_jets(geom.signature(), &pj, &fj))
}

/// Laplacian of `f` with respect to the conformal base metric:
/// `phi^2 sum eps_k f_,kk - (n-2) phi sum eps_k phi_,k f_,k`.
fn conformal_laplacian(sig: &Signature, pj: &FieldJet, fj: &FieldJet) -> f64 {
    let n = sig.dim();
    let phi = pj.value;
    let lap_f: f64 = (0..n).map(|k| sig.eps(k) * fj.hess[(k, k)]).sum();
    let cross: f64 = (0..n)
        .map(|k| sig.eps(k) * pj.grad[k] * fj.grad[k])
        .sum();
    phi * phi * lap_f - (n as f64 - 2.0) * phi * cross
}

/// Ricci tensor of the warped metric in closed form.
///
/// The base block is `Ric_conformal - (m/f) Hess_conformal(f)`; the fiber
/// block is `gamma g_F` with
/// `gamma = lambda_F - f phi^2 sum eps_k f_,kk
///        + (n-2) f phi sum eps_k phi_,k f_,k
///        - (m-1) phi^2 sum eps_k f_,k^2`.
/// For a one-dimensional fiber the reduced form `gamma = -f lap_conformal(f)`
/// is used.
pub fn warped_ricci(geom: &WarpedGeometry, p: &Point) -> Result<WarpedRicciComponents> {
    let sig = geom.signature();
    let n = geom.base_dim();
    let m = geom.fiber_dim() as f64;
    let pj = geom.phi_jet(p)?;
    let fj = geom.f_jet(p)?;

    let ric = conformal_ricci_from_jet(sig, &pj);
    let hess = conformal_hessian_from_jets(sig, &pj, &fj);
    let base_base = ric - hess * (m / fj.value);

    let fiber_coefficient = if geom.fiber_dim() == 1 {
        -fj.value * conformal_laplacian(sig, &pj, &fj)
    } else {
        let phi = pj.value;
        let f = fj.value;
        let lap_f: f64 = (0..n).map(|k| sig.eps(k) * fj.hess[(k, k)]).sum();
        let cross: f64 = (0..n)
            .map(|k| sig.eps(k) * pj.grad[k] * fj.grad[k])
            .sum();
        let grad_f_sq: f64 = (0..n)
            .map(|k| sig.eps(k) * fj.grad[k] * fj.grad[k])
            .sum();
        geom.lambda_fiber() - f * phi * phi * lap_f + (n as f64 - 2.0) * f * phi * cross
            - (m - 1.0) * phi * phi * grad_f_sq
    };

    Ok(WarpedRicciComponents {
        base_base,
        mixed_zero: true,
        fiber_coefficient,
    })
}

/// Brute-force check of the warped Ricci formulas: realizes the fiber as a
/// concrete flat pseudo-Euclidean factor (valid when `lambda_F = 0`), builds
/// the full `(n+m)`-dimensional product metric, and runs the generic pipeline
/// on it. Returns the full Ricci matrix at the product point `(p, q)`.
pub fn flat_fiber_oracle(
    geom: &WarpedGeometry,
    fiber_eps: &Signature,
    p: &Point,
    q: &Point,
) -> Result<DMatrix<f64>> {
    if geom.lambda_fiber() != 0.0 {
        return Err(GeomError::InvalidParameter(
            "the flat-fiber oracle realizes lambda_F = 0 only".into(),
        ));
    }
    if fiber_eps.dim() != geom.fiber_dim() {
        return Err(GeomError::DimensionMismatch {
            expected: geom.fiber_dim(),
            got: fiber_eps.dim(),
        });
    }
    if q.dim() != geom.fiber_dim() {
        return Err(GeomError::DimensionMismatch {
            expected: geom.fiber_dim(),
            got: q.dim(),
        });
    }
    let metric = MetricField::warped_product(geom.signature(), &geom.phi, &geom.f, fiber_eps)?;
    let curv = ricci_generic(&metric, &p.concat(q))?;
    Ok(curv.ricci)
}

/// Block-wise gaps between the closed warped Ricci and the flat-fiber oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleBlockGaps {
    /// max |closed base block - oracle base block|
    pub base: f64,
    /// max |oracle mixed block| (the closed form asserts zero)
    pub mixed: f64,
    /// max |gamma g_F - oracle fiber block|
    pub fiber: f64,
}

impl OracleBlockGaps {
    pub fn max(&self) -> f64 {
        self.base.max(self.mixed).max(self.fiber)
    }
}

/// Evaluates both curvature routes at `(p, q)` and compares them block by
/// block. The fiber block of the full Ricci equals `gamma diag(fiber_eps)`
/// in fiber coordinates.
pub fn oracle_block_gaps(
    geom: &WarpedGeometry,
    fiber_eps: &Signature,
    p: &Point,
    q: &Point,
) -> Result<OracleBlockGaps> {
    let n = geom.base_dim();
    let m = geom.fiber_dim();
    let closed = warped_ricci(geom, p)?;
    let full = flat_fiber_oracle(geom, fiber_eps, p, q)?;

    let mut base = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            base = base.max((full[(i, j)] - closed.base_base[(i, j)]).abs());
        }
    }
    let mut mixed = 0.0_f64;
    for i in 0..n {
        for a in 0..m {
            mixed = mixed.max(full[(i, n + a)].abs());
        }
    }
    let mut fiber = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            let expected = if a == b {
                closed.fiber_coefficient * fiber_eps.eps(a)
            } else {
                0.0
            };
            fiber = fiber.max((full[(n + a, n + b)] - expected).abs());
        }
    }
    Ok(OracleBlockGaps { base, mixed, fiber })
}

/// max |entry| helper re-exported for tests and report assembly.
pub fn matrix_max_abs(m: &DMatrix<f64>) -> f64 {
    max_abs(m)
}
