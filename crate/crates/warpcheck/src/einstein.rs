//! Residual evaluation of the characterizing equations: the second-order PDE
//! system over the base, its translation-invariant reductions to ordinary
//! differential equations along a direction `alpha`, and the modified Ricci
//! residual of a warped base.
//!
//! All residuals are reported per equation so a failure localizes.

use nalgebra::DMatrix;

use crate::diffgeo::{christoffel, ricci_generic, MetricField, Point, ScalarField, Signature};
use crate::error::{GeomError, Result};
use crate::jet::Jet2;
use crate::profile::ProfilePair;
use crate::warped::WarpedGeometry;

/// Causal class of a direction under the base signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    /// `sum eps_i alpha_i^2 = 0`
    Null,
    /// `sum eps_i alpha_i^2 = sign` after normalization, `sign = +-1`
    Unit { sign: i8 },
}

/// A nonzero direction `alpha` with its causal norm and class.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    alpha: Vec<f64>,
    causal_norm: f64,
    class: CausalClass,
}

impl Direction {
    /// Classifies `alpha`: null when `|sum eps_i alpha_i^2| < null_tol`,
    /// otherwise rescaled so the causal norm becomes exactly +-1 (a vector
    /// already within `null_tol` of unit norm is kept as supplied, which
    /// makes classification idempotent).
    pub fn classify(alpha: &[f64], sig: &Signature, null_tol: f64) -> Result<Direction> {
        if alpha.len() != sig.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: sig.dim(),
                got: alpha.len(),
            });
        }
        if alpha.iter().all(|&a| a == 0.0) {
            return Err(GeomError::ZeroDirection);
        }
        let norm = causal_norm(alpha, sig);
        if norm.abs() < null_tol {
            return Ok(Direction {
                alpha: alpha.to_vec(),
                causal_norm: norm,
                class: CausalClass::Null,
            });
        }
        let sign = if norm > 0.0 { 1 } else { -1 };
        if (norm.abs() - 1.0).abs() < null_tol {
            return Ok(Direction {
                alpha: alpha.to_vec(),
                causal_norm: norm,
                class: CausalClass::Unit { sign },
            });
        }
        let scale = 1.0 / norm.abs().sqrt();
        let alpha: Vec<f64> = alpha.iter().map(|a| a * scale).collect();
        let causal_norm = causal_norm(&alpha, sig);
        Ok(Direction {
            alpha,
            causal_norm,
            class: CausalClass::Unit { sign },
        })
    }

    /// Builds a null direction whose nullity was established exactly by the
    /// caller (e.g. from rational coordinates), bypassing the tolerance test.
    pub fn exact_null(alpha: &[f64], sig: &Signature) -> Result<Direction> {
        if alpha.len() != sig.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: sig.dim(),
                got: alpha.len(),
            });
        }
        if alpha.iter().all(|&a| a == 0.0) {
            return Err(GeomError::ZeroDirection);
        }
        Ok(Direction {
            causal_norm: causal_norm(alpha, sig),
            alpha: alpha.to_vec(),
            class: CausalClass::Null,
        })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn causal_norm(&self) -> f64 {
        self.causal_norm
    }

    pub fn class(&self) -> CausalClass {
        self.class
    }

    pub fn is_null(&self) -> bool {
        matches!(self.class, CausalClass::Null)
    }

    pub fn unit_sign(&self) -> Option<i8> {
        match self.class {
            CausalClass::Unit { sign } => Some(sign),
            CausalClass::Null => None,
        }
    }

    /// The invariant `xi = sum alpha_i x_i` at a point.
    pub fn xi(&self, p: &Point) -> f64 {
        self.alpha
            .iter()
            .zip(p.coords())
            .map(|(a, x)| a * x)
            .sum()
    }
}

fn causal_norm(alpha: &[f64], sig: &Signature) -> f64 {
    alpha
        .iter()
        .enumerate()
        .map(|(i, a)| sig.eps(i) * a * a)
        .sum()
}

/// See [`Direction::classify`].
pub fn classify_direction(alpha: &[f64], sig: &Signature, null_tol: f64) -> Result<Direction> {
    Direction::classify(alpha, sig, null_tol)
}

/// Per-equation residuals of the second-order system characterizing the
/// Einstein condition of the warped metric at one base point.
#[derive(Debug, Clone)]
pub struct PdeResiduals {
    /// One residual per unordered pair `i < j` of distinct base directions.
    pub off_diag: Vec<(usize, usize, f64)>,
    /// One residual per base direction `i`.
    pub diag: Vec<f64>,
    /// The single fiber-direction residual.
    pub fiber: f64,
}

impl PdeResiduals {
    pub fn max_off_diag(&self) -> f64 {
        self.off_diag
            .iter()
            .fold(0.0_f64, |acc, &(_, _, r)| acc.max(r.abs()))
    }

    pub fn max_diag(&self) -> f64 {
        self.diag.iter().fold(0.0_f64, |acc, r| acc.max(r.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.max_off_diag().max(self.max_diag()).max(self.fiber.abs())
    }
}

/// Evaluates the three equation families at `p`. All residuals vanish at a
/// point if and only if the warped metric is Einstein with constant `lambda`
/// there.
///
/// Off-diagonal (`i != j`):
/// `(n-2) f phi_,ij - m phi f_,ij - m phi_,i f_,j - m phi_,j f_,i`.
///
/// Diagonal (`i`):
/// `phi [(n-2) f phi_,ii - m phi f_,ii - 2m phi_,i f_,i]
/// + eps_i [f phi sum_k eps_k phi_,kk - (n-1) f sum_k eps_k phi_,k^2
/// + m phi sum_k eps_k phi_,k f_,k] - eps_i lambda f`.
///
/// Fiber: `-f phi^2 sum_k eps_k f_,kk + (n-2) f phi sum_k eps_k f_,k phi_,k -
/// (m-1) phi^2 sum_k eps_k f_,k^2 - (lambda f^2 - lambda_F)`, with the
/// reduced form (no `(m-1)` term, `lambda_F = 0`) for a one-dimensional
/// fiber.
pub fn pde_residuals(geom: &WarpedGeometry, lambda: f64, p: &Point) -> Result<PdeResiduals> {
    let sig = geom.signature();
    let n = geom.base_dim();
    let nf = n as f64;
    let m = geom.fiber_dim() as f64;
    let pj = geom.phi_jet(p)?;
    let fj = geom.f_jet(p)?;
    let phi = pj.value;
    let f = fj.value;

    let lap_phi: f64 = (0..n).map(|k| sig.eps(k) * pj.hess[(k, k)]).sum();
    let grad_phi_sq: f64 = (0..n).map(|k| sig.eps(k) * pj.grad[k] * pj.grad[k]).sum();
    let cross: f64 = (0..n)
        .map(|k| sig.eps(k) * pj.grad[k] * fj.grad[k])
        .sum();
    let lap_f: f64 = (0..n).map(|k| sig.eps(k) * fj.hess[(k, k)]).sum();
    let grad_f_sq: f64 = (0..n).map(|k| sig.eps(k) * fj.grad[k] * fj.grad[k]).sum();

    let mut off_diag = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let r = (nf - 2.0) * f * pj.hess[(i, j)]
                - m * phi * fj.hess[(i, j)]
                - m * pj.grad[i] * fj.grad[j]
                - m * pj.grad[j] * fj.grad[i];
            off_diag.push((i, j, r));
        }
    }

    let shared = f * phi * lap_phi - (nf - 1.0) * f * grad_phi_sq + m * phi * cross;
    let diag = (0..n)
        .map(|i| {
            phi * ((nf - 2.0) * f * pj.hess[(i, i)]
                - m * phi * fj.hess[(i, i)]
                - 2.0 * m * pj.grad[i] * fj.grad[i])
                + sig.eps(i) * shared
                - sig.eps(i) * lambda * f
        })
        .collect();

    let fiber = if geom.fiber_dim() == 1 {
        -f * phi * phi * lap_f + (nf - 2.0) * f * phi * cross - lambda * f * f
    } else {
        -f * phi * phi * lap_f + (nf - 2.0) * f * phi * cross - (m - 1.0) * phi * phi * grad_f_sq
            - (lambda * f * f - geom.lambda_fiber())
    };

    Ok(PdeResiduals {
        off_diag,
        diag,
        fiber,
    })
}

/// Residuals of the reduced system along a non-null direction
/// (`sum eps_k alpha_k^2 = eps_i0 = +-1`).
#[derive(Debug, Clone, Copy)]
pub struct OdeResiduals {
    /// `(n-2) f phi'' - m phi f'' - 2m phi' f'`
    pub first: f64,
    /// `eps_i0 [f phi phi'' - (n-1) f phi'^2 + m phi phi' f'] - lambda f`
    pub second: f64,
    /// `eps_i0 [-f phi^2 f'' + (n-2) f phi phi' f' - (m-1) phi^2 f'^2]
    ///  - (lambda f^2 - lambda_F)`, reduced form for m = 1.
    pub third: f64,
}

impl OdeResiduals {
    pub fn max_abs(&self) -> f64 {
        self.first.abs().max(self.second.abs()).max(self.third.abs())
    }
}

pub fn ode_residuals_nonnull(
    pair: &ProfilePair,
    n: usize,
    m: usize,
    lambda: f64,
    lambda_f: f64,
    eps_i0: i8,
    xi: f64,
) -> Result<OdeResiduals> {
    let (phi, f) = pair.at(xi)?;
    let nf = n as f64;
    let mf = m as f64;
    let s = f64::from(eps_i0);

    let first = (nf - 2.0) * f.v * phi.dd - mf * phi.v * f.dd - 2.0 * mf * phi.d * f.d;
    let second = s * (f.v * phi.v * phi.dd - (nf - 1.0) * f.v * phi.d * phi.d
        + mf * phi.v * phi.d * f.d)
        - lambda * f.v;
    let third = if m == 1 {
        s * (-f.v * phi.v * phi.v * f.dd + (nf - 2.0) * f.v * phi.v * phi.d * f.d)
            - lambda * f.v * f.v
    } else {
        s * (-f.v * phi.v * phi.v * f.dd + (nf - 2.0) * f.v * phi.v * phi.d * f.d
            - (mf - 1.0) * phi.v * phi.v * f.d * f.d)
            - (lambda * f.v * f.v - lambda_f)
    };

    Ok(OdeResiduals {
        first,
        second,
        third,
    })
}

/// Residual of the single profile equation surviving along a null direction,
/// plus the rigidity constraints: an Einstein structure along a null
/// direction forces `lambda = lambda_F = 0`, so nonzero supplied constants
/// are flagged together with the residual magnitudes they would leave behind.
#[derive(Debug, Clone, Copy)]
pub struct NullOdeResidual {
    /// `(n-2) f phi'' - m phi f'' - 2m phi' f'`
    pub residual: f64,
    pub lambda_flag: bool,
    pub lambda_f_flag: bool,
    /// `|lambda f|`
    pub lambda_residual: f64,
    /// `|lambda f^2 - lambda_F|`
    pub lambda_f_residual: f64,
}

pub fn ode_residual_null(
    pair: &ProfilePair,
    n: usize,
    m: usize,
    lambda: f64,
    lambda_f: f64,
    xi: f64,
) -> Result<NullOdeResidual> {
    let (phi, f) = pair.at(xi)?;
    let nf = n as f64;
    let mf = m as f64;
    Ok(NullOdeResidual {
        residual: (nf - 2.0) * f.v * phi.dd - mf * phi.v * f.dd - 2.0 * mf * phi.d * f.d,
        lambda_flag: lambda != 0.0,
        lambda_f_flag: lambda_f != 0.0,
        lambda_residual: (lambda * f.v).abs(),
        lambda_f_residual: (lambda * f.v * f.v - lambda_f).abs(),
    })
}

/// Lifts a profile pair to scalar fields on the base through the chain rule:
/// `grad_i = p' alpha_i`, `hess_ij = p'' alpha_i alpha_j`.
pub fn lift_profiles(pair: &ProfilePair, direction: &Direction) -> (ScalarField, ScalarField) {
    (
        lift_profile(&pair.phi, direction),
        lift_profile(&pair.f, direction),
    )
}

fn lift_profile(profile: &crate::profile::Profile, direction: &Direction) -> ScalarField {
    let alpha = direction.alpha().to_vec();
    let dim = alpha.len();
    let profile = profile.clone();
    ScalarField::from_eval(dim, move |p| {
        let xi: f64 = alpha.iter().zip(p.coords()).map(|(a, x)| a * x).sum();
        let jet = profile.at(xi)?;
        Ok(jet_to_field(&alpha, jet))
    })
}

fn jet_to_field(alpha: &[f64], jet: Jet2) -> crate::diffgeo::FieldJet {
    let dim = alpha.len();
    let grad = nalgebra::DVector::from_iterator(dim, alpha.iter().map(|a| jet.d * a));
    let hess = nalgebra::DMatrix::from_fn(dim, dim, |i, j| jet.dd * alpha[i] * alpha[j]);
    crate::diffgeo::FieldJet {
        value: jet.v,
        grad,
        hess,
    }
}

/// Gaps of the exact chain-rule identities tying the PDE residuals of lifted
/// profiles to the reduced residuals at `xi = alpha . x`:
///
/// * off-diagonal: `R_ij = alpha_i alpha_j R1`
/// * diagonal:     `R_i  = phi alpha_i^2 R1 + eps_i R2`
/// * fiber:        `R    = R3`
///
/// These hold for any profile pair, solution or not.
#[derive(Debug, Clone, Copy)]
pub struct ReductionGaps {
    pub off_diag: f64,
    pub diag: f64,
    pub fiber: f64,
}

impl ReductionGaps {
    pub fn max(&self) -> f64 {
        self.off_diag.max(self.diag).max(self.fiber)
    }
}

pub fn reduction_gaps(
    pair: &ProfilePair,
    direction: &Direction,
    sig: &Signature,
    m: usize,
    lambda: f64,
    lambda_f: f64,
    p: &Point,
) -> Result<ReductionGaps> {
    let sign = direction.unit_sign().ok_or_else(|| {
        GeomError::InvalidParameter("reduction identities need a unit direction".into())
    })?;
    let n = sig.dim();
    let xi = direction.xi(p);
    let ode = ode_residuals_nonnull(pair, n, m, lambda, lambda_f, sign, xi)?;
    let (phi, _) = pair.at(xi)?;

    let (phi_field, f_field) = lift_profiles(pair, direction);
    let geom = WarpedGeometry::new(sig.clone(), phi_field, f_field, m, lambda_f)?;
    let pde = pde_residuals(&geom, lambda, p)?;

    let alpha = direction.alpha();
    let mut off_diag = 0.0_f64;
    for &(i, j, r) in &pde.off_diag {
        off_diag = off_diag.max((r - alpha[i] * alpha[j] * ode.first).abs());
    }
    let mut diag = 0.0_f64;
    for (i, &r) in pde.diag.iter().enumerate() {
        let expected = phi.v * alpha[i] * alpha[i] * ode.first + sig.eps(i) * ode.second;
        diag = diag.max((r - expected).abs());
    }
    let fiber = (pde.fiber - ode.third).abs();

    Ok(ReductionGaps {
        off_diag,
        diag,
        fiber,
    })
}

/// Residual of the modified Ricci condition of a warped base:
/// `Ric_g + Hess_g(f) - (1/m) df (x) df - lambda g` at `p`, where the Hessian
/// is taken with respect to the supplied metric. Implemented literally as
/// stated; no reconciliation with the product-metric route is asserted.
pub fn bakry_emery_residual(
    metric: &MetricField,
    f_warp: &ScalarField,
    m: usize,
    lambda: f64,
    p: &Point,
) -> Result<DMatrix<f64>> {
    assert!(m >= 1);
    let curv = ricci_generic(metric, p)?;
    let chr = christoffel(metric, p)?;
    let fj = f_warp.eval(p)?;
    let d = metric.dim();

    let mut hess = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut corr = 0.0;
            for k in 0..d {
                corr += chr.gamma[k][(i, j)] * fj.grad[k];
            }
            hess[(i, j)] = fj.hess[(i, j)] - corr;
        }
    }
    let outer = &fj.grad * fj.grad.transpose();
    let g = metric.at(p)?.g;
    Ok(curv.ricci + hess - outer / (m as f64) - g * lambda)
}
