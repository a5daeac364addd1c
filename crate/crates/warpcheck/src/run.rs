//! Verification, sampling, and oracle suites behind the command-line
//! front end.
//!
//! Everything here is deterministic given the run configuration: sample
//! points are drawn up front from the seeded generator, batch evaluation
//! preserves input order, and maxima are reduced in index order, so the
//! emitted reports are byte-identical across runs and worker counts.

use crate::batch;
use crate::diffgeo::{einstein_residual_generic, MetricField, Point, Signature};
use crate::einstein::{
    lift_profiles, ode_residual_null, ode_residuals_nonnull, pde_residuals, Direction,
};
use crate::error::{GeomError, Result as GeomResult};
use crate::profile::{Interval, Profile, ProfilePair};
use crate::report::{ConfigValue, ResidualReport};
use crate::sample::{point_with_xi, random_positive_quadratic, SampleRng};
use crate::solutions::{integrate_null_profile, Branch, ExpExample, Thm13Params, Thm14Params};
use crate::warped::{oracle_block_gaps, WarpedGeometry};

/// Length of the bounded window used to sample `xi` inside a half-line
/// domain, and the fractional margin kept from a finite boundary. The
/// families steepen fast toward the boundary; a 20% margin keeps the terms
/// far below the magnitudes where f64 cancellation noise would drown the
/// identities being verified.
pub const XI_WINDOW_LEN: f64 = 2.0;
pub const XI_WINDOW_MARGIN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Thm13,
    Thm14,
    Thm15,
    ExpExample,
    Custom,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Thm13 => "thm13",
            Family::Thm14 => "thm14",
            Family::Thm15 => "thm15",
            Family::ExpExample => "exp-example",
            Family::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "thm13" => Some(Family::Thm13),
            "thm14" => Some(Family::Thm14),
            "thm15" => Some(Family::Thm15),
            "exp-example" => Some(Family::ExpExample),
            "custom" => Some(Family::Custom),
            _ => None,
        }
    }

    /// Families constructed over a null direction.
    pub fn is_null_family(&self) -> bool {
        matches!(self, Family::Thm15 | Family::ExpExample)
    }
}

/// Errors out of a run: configuration problems (usage) versus evaluation
/// failures (domain violations and numerics).
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

pub type RunResult<T> = std::result::Result<T, RunError>;

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

/// Full configuration of one run. The CLI builds this from flags and an
/// optional flat config file; defaults come from [`RunSpec::for_family`].
#[derive(Clone)]
pub struct RunSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub eps: Signature,
    pub fiber_eps: Signature,
    pub branch: Branch,
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub lambda: f64,
    pub lambda_f: f64,
    pub alpha: Vec<f64>,
    /// Set when the caller established nullity of `alpha` exactly (rational
    /// input); classification then bypasses the tolerance test.
    pub alpha_exact_null: bool,
    pub phi_poly: Vec<f64>,
    pub f_poly: Vec<f64>,
    pub tol: f64,
    pub fd_step: f64,
    pub ode_step: f64,
    pub null_tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub xi0: f64,
    pub phi0: f64,
    pub dphi0: f64,
    pub span: (f64, f64),
    pub grid: Option<(f64, f64, f64)>,
}

impl RunSpec {
    /// Family-aware defaults: all-plus signature with the first coordinate
    /// direction for the closed-form families, a Lorentz signature with an
    /// exactly null direction for the null families.
    pub fn for_family(family: Family, n: usize) -> Self {
        let m = match family {
            Family::Thm14 => 2,
            _ => 1,
        };
        let (eps, alpha, exact_null) = if family.is_null_family() {
            let mut signs = vec![1i8; n];
            signs[0] = -1;
            let mut alpha = vec![0.0; n];
            alpha[0] = 1.0;
            alpha[1] = 1.0;
            (Signature::new(&signs).unwrap(), alpha, true)
        } else {
            let mut alpha = vec![0.0; n];
            alpha[0] = 1.0;
            (Signature::riemannian(n), alpha, false)
        };
        Self {
            family,
            n,
            m,
            eps,
            fiber_eps: Signature::fiber(&vec![1i8; m]).unwrap(),
            branch: Branch::Minus,
            k: 1.0,
            k1: 1.0,
            k2: 2.0,
            a: 1.0,
            c1: 1.0,
            c2: 1.0,
            lambda: 0.0,
            lambda_f: 0.0,
            alpha,
            alpha_exact_null: exact_null,
            phi_poly: vec![1.0],
            f_poly: vec![1.0],
            tol: 1e-6,
            fd_step: 1e-4,
            ode_step: 1e-3,
            null_tol: 1e-12,
            samples: 100,
            seed: 42,
            xi0: 0.0,
            phi0: 1.0,
            dphi0: 0.0,
            span: (-1.0, 1.0),
            grid: None,
        }
    }

    fn validate(&self) -> RunResult<()> {
        if self.n < 3 {
            return Err(usage("n must be >= 3"));
        }
        if self.eps.dim() != self.n {
            return Err(usage(format!(
                "signature {} has length {}, expected n = {}",
                self.eps.to_string_signs(),
                self.eps.dim(),
                self.n
            )));
        }
        if self.alpha.len() != self.n {
            return Err(usage(format!(
                "alpha has {} entries, expected n = {}",
                self.alpha.len(),
                self.n
            )));
        }
        if self.m < 1 {
            return Err(usage("m must be >= 1"));
        }
        if self.fiber_eps.dim() != self.m {
            return Err(usage(format!(
                "fiber signature has length {}, expected m = {}",
                self.fiber_eps.dim(),
                self.m
            )));
        }
        if self.family == Family::Thm13 && self.m != 1 {
            return Err(usage("family thm13 has a one-dimensional fiber (m = 1)"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(usage("tol must be > 0"));
        }
        if !self.ode_step.is_finite()
            || self.ode_step <= 0.0
            || !self.fd_step.is_finite()
            || self.fd_step <= 0.0
        {
            return Err(usage("steps must be > 0"));
        }
        Ok(())
    }

    fn direction(&self) -> RunResult<Direction> {
        let dir = if self.alpha_exact_null {
            Direction::exact_null(&self.alpha, &self.eps)
        } else {
            Direction::classify(&self.alpha, &self.eps, self.null_tol)
        }
        .map_err(|e| usage(e.to_string()))?;

        match self.family {
            Family::Thm13 | Family::Thm14 if dir.is_null() => Err(usage(
                "families thm13/thm14 need a non-null (unit) direction",
            )),
            Family::Thm15 | Family::ExpExample if !dir.is_null() => Err(usage(
                "families thm15/exp-example need a null direction",
            )),
            _ => Ok(dir),
        }
    }

    /// Report skeleton carrying only the echoed configuration; the CLI uses
    /// it to emit a diagnosable artifact when evaluation fails mid-run.
    pub fn empty_report(&self, command: &str) -> ResidualReport {
        ResidualReport::new(self.config_entries(command), self.tol, self.samples)
    }

    fn config_entries(&self, command: &str) -> Vec<(String, ConfigValue)> {
        let mut entries = vec![
            ("command".to_string(), ConfigValue::Str(command.into())),
            (
                "family".to_string(),
                ConfigValue::Str(self.family.as_str().into()),
            ),
            ("n".to_string(), ConfigValue::Int(self.n as i64)),
            ("m".to_string(), ConfigValue::Int(self.m as i64)),
            (
                "eps".to_string(),
                ConfigValue::Str(self.eps.to_string_signs()),
            ),
            (
                "fiberEps".to_string(),
                ConfigValue::Str(self.fiber_eps.to_string_signs()),
            ),
            (
                "branch".to_string(),
                ConfigValue::Str(self.branch.as_str().into()),
            ),
            ("k".to_string(), ConfigValue::Float(self.k)),
            ("k1".to_string(), ConfigValue::Float(self.k1)),
            ("k2".to_string(), ConfigValue::Float(self.k2)),
            ("A".to_string(), ConfigValue::Float(self.a)),
            ("c1".to_string(), ConfigValue::Float(self.c1)),
            ("c2".to_string(), ConfigValue::Float(self.c2)),
            ("lambda".to_string(), ConfigValue::Float(self.lambda)),
            ("lambdaF".to_string(), ConfigValue::Float(self.lambda_f)),
            (
                "alpha".to_string(),
                ConfigValue::FloatList(self.alpha.clone()),
            ),
        ];
        if self.family == Family::Custom {
            entries.push((
                "phiPoly".to_string(),
                ConfigValue::FloatList(self.phi_poly.clone()),
            ));
            entries.push((
                "fPoly".to_string(),
                ConfigValue::FloatList(self.f_poly.clone()),
            ));
        }
        entries.push(("fdStep".to_string(), ConfigValue::Float(self.fd_step)));
        entries.push(("odeStep".to_string(), ConfigValue::Float(self.ode_step)));
        entries.push(("seed".to_string(), ConfigValue::Int(self.seed as i64)));
        entries
    }

    /// Profile pair of the configured family plus the `xi` sampling source.
    fn build_profiles(&self) -> RunResult<(ProfilePair, XiSource, Option<ProfilePair>)> {
        match self.family {
            Family::Thm13 => {
                let params = Thm13Params::new(self.n, self.k, self.k1, self.k2)
                    .map_err(|e| usage(e.to_string()))?;
                let pair = params.profiles();
                let window = pair.domain();
                Ok((pair, XiSource::Window(window), None))
            }
            Family::Thm14 => {
                let params =
                    Thm14Params::new(self.n, self.m, self.branch, self.k, self.k1, self.k2)
                        .map_err(|e| usage(e.to_string()))?;
                let pair = params.profiles();
                let window = pair.domain();
                Ok((pair, XiSource::Window(window), None))
            }
            Family::ExpExample => {
                let ex = ExpExample::new(self.n, self.m, self.a, self.c1, self.c2)
                    .map_err(|e| usage(e.to_string()))?;
                let f = ex.f_profile(self.k).map_err(|e| usage(e.to_string()))?;
                let alt = ProfilePair::new(ex.phi_profile_m1_form(), f.clone());
                let pair = ProfilePair::new(ex.phi_profile(), f);
                Ok((pair, XiSource::Window(Interval::all()), Some(alt)))
            }
            Family::Thm15 => {
                let ex = ExpExample::new(self.n, self.m, self.a, 1.0, 1.0)
                    .map_err(|e| usage(e.to_string()))?;
                let f = ex.f_profile(self.k).map_err(|e| usage(e.to_string()))?;
                let span = (self.span.0.min(self.xi0), self.span.1.max(self.xi0));
                let profile = integrate_null_profile(
                    &f, self.n, self.m, self.xi0, self.phi0, self.dphi0, self.ode_step, span,
                )?;
                let nodes = profile.nodes().to_vec();
                Ok((profile.into_profile_pair(), XiSource::Nodes(nodes), None))
            }
            Family::Custom => {
                if self.phi_poly.is_empty() || self.f_poly.is_empty() {
                    return Err(usage("custom profiles need phi and f coefficients"));
                }
                let pair = ProfilePair::new(
                    Profile::polynomial(&self.phi_poly),
                    Profile::polynomial(&self.f_poly),
                );
                Ok((pair, XiSource::Window(Interval::all()), None))
            }
        }
    }
}

enum XiSource {
    Window(Interval),
    Nodes(Vec<f64>),
}

impl XiSource {
    fn draw(&self, count: usize, rng: &mut SampleRng) -> Vec<f64> {
        match self {
            XiSource::Window(interval) => {
                let (lo, hi) = interval.sampling_window(XI_WINDOW_LEN, XI_WINDOW_MARGIN);
                (0..count).map(|_| rng.uniform(lo, hi)).collect()
            }
            XiSource::Nodes(nodes) => (0..count)
                .map(|_| nodes[rng.uniform(0.0, nodes.len() as f64).floor() as usize % nodes.len()])
                .collect(),
        }
    }
}

fn try_map<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> GeomResult<U> + Send + Sync,
) -> GeomResult<Vec<U>> {
    batch::map_collect(items, f).into_iter().collect()
}

fn push_max(
    report: &mut ResidualReport,
    label: &str,
    values: &[f64],
    argmax: impl Fn(usize) -> Vec<f64>,
) {
    if let Some((idx, max)) = batch::max_abs_indexed(values) {
        report.push(label, max, argmax(idx));
    }
}

/// Builds the requested family, evaluates the reduced equations at seeded
/// `xi` samples, the full second-order system and the flat-fiber curvature at
/// lifted base points, and assembles the pass/fail report.
pub fn verify_report(spec: &RunSpec) -> RunResult<(ResidualReport, Vec<String>)> {
    spec.validate()?;
    let direction = spec.direction()?;
    let (pair, xi_source, alt_pair) = spec.build_profiles()?;

    let mut warnings = Vec::new();
    let mut rng = SampleRng::new(spec.seed);
    let xis = xi_source.draw(spec.samples, &mut rng);
    let points: Vec<Point> = xis
        .iter()
        .map(|&xi| point_with_xi(direction.alpha(), xi, 1.0, &mut rng))
        .collect();
    let fiber_points: Vec<Point> = points
        .iter()
        .map(|_| rng.box_point(spec.m, 1.0))
        .collect();

    let mut report = ResidualReport::new(spec.config_entries("verify"), spec.tol, spec.samples);

    // Reduced (profile) equations at the xi samples.
    if direction.is_null() {
        let null_res = try_map(&xis, |&xi| {
            ode_residual_null(&pair, spec.n, spec.m, spec.lambda, spec.lambda_f, xi)
        })?;
        let eq: Vec<f64> = null_res.iter().map(|r| r.residual).collect();
        let l_res: Vec<f64> = null_res.iter().map(|r| r.lambda_residual).collect();
        let lf_res: Vec<f64> = null_res.iter().map(|r| r.lambda_f_residual).collect();
        push_max(&mut report, "ode-null", &eq, |i| vec![xis[i]]);
        push_max(&mut report, "null-lambda", &l_res, |i| vec![xis[i]]);
        push_max(&mut report, "null-lambda-fiber", &lf_res, |i| vec![xis[i]]);
        if let Some(alt) = &alt_pair {
            let alt_res = try_map(&xis, |&xi| {
                Ok(ode_residual_null(alt, spec.n, spec.m, 0.0, 0.0, xi)?.residual)
            })?;
            if let Some((idx, max)) = batch::max_abs_indexed(&alt_res) {
                report.push_informational("ode-null-m1-form", max, vec![xis[idx]]);
            }
        }
    } else {
        let sign = direction.unit_sign().expect("non-null direction");
        let ode = try_map(&xis, |&xi| {
            ode_residuals_nonnull(&pair, spec.n, spec.m, spec.lambda, spec.lambda_f, sign, xi)
        })?;
        let firsts: Vec<f64> = ode.iter().map(|r| r.first).collect();
        let seconds: Vec<f64> = ode.iter().map(|r| r.second).collect();
        let thirds: Vec<f64> = ode.iter().map(|r| r.third).collect();
        push_max(&mut report, "ode-offdiag", &firsts, |i| vec![xis[i]]);
        push_max(&mut report, "ode-diag", &seconds, |i| vec![xis[i]]);
        push_max(&mut report, "ode-fiber", &thirds, |i| vec![xis[i]]);
    }

    // Full second-order system and flat-fiber curvature at lifted points.
    let geometry_ok = !(spec.m == 1 && spec.lambda_f != 0.0);
    if geometry_ok {
        let (phi_field, f_field) = lift_profiles(&pair, &direction);
        let geom = WarpedGeometry::new(
            spec.eps.clone(),
            phi_field.clone(),
            f_field.clone(),
            spec.m,
            spec.lambda_f,
        )?;
        let pde = try_map(&points, |p| pde_residuals(&geom, spec.lambda, p))?;
        let offs: Vec<f64> = pde.iter().map(|r| r.max_off_diag()).collect();
        let diags: Vec<f64> = pde.iter().map(|r| r.max_diag()).collect();
        let fibers: Vec<f64> = pde.iter().map(|r| r.fiber).collect();
        let coords = |i: usize| points[i].coords().to_vec();
        push_max(&mut report, "pde-offdiag", &offs, coords);
        push_max(&mut report, "pde-diag", &diags, coords);
        push_max(&mut report, "pde-fiber", &fibers, coords);

        if spec.lambda_f == 0.0 {
            let metric =
                MetricField::warped_product(&spec.eps, &phi_field, &f_field, &spec.fiber_eps)?;
            let indexed: Vec<usize> = (0..points.len()).collect();
            let blocks = try_map(&indexed, |&i| {
                let full = points[i].concat(&fiber_points[i]);
                let res = einstein_residual_generic(&metric, spec.lambda, &full)?;
                let n = spec.n;
                let mut base = 0.0_f64;
                let mut mixed = 0.0_f64;
                let mut fiber = 0.0_f64;
                for r in 0..res.nrows() {
                    for c in 0..res.ncols() {
                        let v = res[(r, c)].abs();
                        match (r < n, c < n) {
                            (true, true) => base = base.max(v),
                            (false, false) => fiber = fiber.max(v),
                            _ => mixed = mixed.max(v),
                        }
                    }
                }
                Ok((base, mixed, fiber))
            })?;
            let bases: Vec<f64> = blocks.iter().map(|b| b.0).collect();
            let mixeds: Vec<f64> = blocks.iter().map(|b| b.1).collect();
            let fibs: Vec<f64> = blocks.iter().map(|b| b.2).collect();
            push_max(&mut report, "ricci-base", &bases, coords);
            push_max(&mut report, "ricci-mixed", &mixeds, coords);
            push_max(&mut report, "ricci-fiber", &fibs, coords);
        } else {
            warnings.push(
                "flat-fiber curvature check skipped: it realizes lambdaF = 0 only".to_string(),
            );
        }
    } else {
        warnings.push(
            "geometry checks skipped: a one-dimensional fiber forces lambdaF = 0; \
             reporting profile-equation residuals only"
                .to_string(),
        );
    }

    report.finalize();
    Ok((report, warnings))
}

/// One output row of the sampling command.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub xi: f64,
    pub values: Option<SampleValues>,
    pub warning: String,
}

/// Derivative triples and residuals at one grid value of `xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleValues {
    pub phi: [f64; 3],
    pub f: [f64; 3],
    pub res: [f64; 3],
}

/// Tabulates the family profiles over an evenly spaced grid: derivative
/// triples of `phi` and `f` plus the residuals of the reduced equations.
/// Grid values outside the profile domain produce clipped rows carrying a
/// warning instead of numbers.
pub fn sample_rows(spec: &RunSpec) -> RunResult<(Vec<SampleRow>, Vec<String>)> {
    spec.validate()?;
    let direction = spec.direction()?;
    let (pair, xi_source, _) = spec.build_profiles()?;
    let mut warnings = Vec::new();

    let xis: Vec<f64> = match (&xi_source, spec.grid) {
        (XiSource::Nodes(nodes), grid) => {
            let (lo, hi) = match grid {
                Some((g0, g1, _)) => (g0, g1),
                None => (spec.span.0, spec.span.1),
            };
            if grid.map(|g| g.2) != Some(spec.ode_step) && grid.is_some() {
                warnings.push(format!(
                    "integrated profiles are tabulated on the integration grid (step {})",
                    spec.ode_step
                ));
            }
            nodes
                .iter()
                .copied()
                .filter(|&x| x >= lo - 1e-12 && x <= hi + 1e-12)
                .collect()
        }
        (XiSource::Window(interval), grid) => {
            let (g0, g1, step) = match grid {
                Some(g) => g,
                None => {
                    let (lo, hi) = interval.sampling_window(XI_WINDOW_LEN, XI_WINDOW_MARGIN);
                    (lo, hi, (hi - lo) / 200.0)
                }
            };
            if step.is_nan() || step <= 0.0 || g1 < g0 {
                return Err(usage("grid must satisfy min <= max and step > 0"));
            }
            let count = ((g1 - g0) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|j| g0 + step * j as f64).collect()
        }
    };

    let domain = pair.domain();
    let mut clipped = 0usize;
    let mut rows = Vec::with_capacity(xis.len());
    for &xi in &xis {
        if !domain.contains(xi) {
            clipped += 1;
            rows.push(SampleRow {
                xi,
                values: None,
                warning: "clipped: xi outside the profile domain".to_string(),
            });
            continue;
        }
        let (phi, f) = pair.at(xi)?;
        let res = if direction.is_null() {
            let r = ode_residual_null(&pair, spec.n, spec.m, spec.lambda, spec.lambda_f, xi)?;
            [r.residual, r.lambda_residual, r.lambda_f_residual]
        } else {
            let sign = direction.unit_sign().expect("non-null direction");
            let r = ode_residuals_nonnull(
                &pair,
                spec.n,
                spec.m,
                spec.lambda,
                spec.lambda_f,
                sign,
                xi,
            )?;
            [r.first, r.second, r.third]
        };
        rows.push(SampleRow {
            xi,
            values: Some(SampleValues {
                phi: [phi.v, phi.d, phi.dd],
                f: [f.v, f.d, f.dd],
                res,
            }),
            warning: String::new(),
        });
    }
    if clipped > 0 {
        warnings.push(format!(
            "{clipped} grid row(s) clipped: outside the profile domain {domain}"
        ));
    }
    Ok((rows, warnings))
}

/// Randomized equivalence suite: closed conformal Ricci against the generic
/// pipeline, and the closed warped Ricci blocks against the full flat-fiber
/// product metric, over seeded random smooth `(phi, f)` trials.
pub fn oracle_report(spec: &RunSpec) -> RunResult<(ResidualReport, Vec<String>)> {
    spec.validate()?;
    if spec.lambda_f != 0.0 {
        return Err(usage("the full-product oracle needs lambdaF = 0"));
    }
    let mut warnings = Vec::new();
    let mut report = ResidualReport::new(spec.config_entries("oracle"), spec.tol, spec.samples);
    if spec.samples == 0 {
        warnings.push("no trials requested; report is empty and passes".to_string());
        report.finalize();
        return Ok((report, warnings));
    }

    let margin = 0.2;
    let mut rng = SampleRng::new(spec.seed);
    struct Trial {
        geom: WarpedGeometry,
        p: Point,
        q: Point,
    }
    let mut trials = Vec::with_capacity(spec.samples);
    for _ in 0..spec.samples {
        let phi = random_positive_quadratic(spec.n, margin, &mut rng);
        let f = random_positive_quadratic(spec.n, margin, &mut rng);
        let geom = WarpedGeometry::new(spec.eps.clone(), phi, f, spec.m, 0.0)?;
        let mut p = rng.box_point(spec.n, 1.0);
        for _ in 0..100 {
            let phi_ok = geom.phi().value_at(&p)?.abs() > margin;
            let f_ok = geom.warping().value_at(&p)? > margin;
            if phi_ok && f_ok {
                break;
            }
            p = rng.box_point(spec.n, 1.0);
        }
        let q = rng.box_point(spec.m, 1.0);
        trials.push(Trial { geom, p, q });
    }

    let gaps = try_map(&trials, |t| {
        let conformal = crate::warped::conformal_ricci(&t.geom, &t.p)?;
        let metric = MetricField::conformal(t.geom.signature(), t.geom.phi())?;
        let generic = crate::diffgeo::ricci_generic(&metric, &t.p)?;
        let conf_gap = crate::warped::matrix_max_abs(&(conformal - generic.ricci));
        let blocks = oracle_block_gaps(&t.geom, &spec.fiber_eps, &t.p, &t.q)?;
        Ok((conf_gap, blocks))
    })?;

    let coords = |i: usize| trials[i].p.coords().to_vec();
    let confs: Vec<f64> = gaps.iter().map(|g| g.0).collect();
    let bases: Vec<f64> = gaps.iter().map(|g| g.1.base).collect();
    let mixeds: Vec<f64> = gaps.iter().map(|g| g.1.mixed).collect();
    let fibers: Vec<f64> = gaps.iter().map(|g| g.1.fiber).collect();
    push_max(&mut report, "conformal-vs-generic", &confs, coords);
    push_max(&mut report, "oracle-base", &bases, coords);
    push_max(&mut report, "oracle-mixed", &mixeds, coords);
    push_max(&mut report, "oracle-fiber", &fibers, coords);

    report.finalize();
    Ok((report, warnings))
}
