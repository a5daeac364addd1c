//! Property tests for the symmetry contracts, the closed-formula/oracle
//! agreements, and the classification invariants.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use warpcheck::sample::SampleRng;
use warpcheck::{
    christoffel, conformal_hessian, conformal_ricci, einstein_residual_generic,
    finite_difference_field, lift_profiles, oracle_block_gaps, pde_residuals, ricci_generic,
    warped_ricci, Direction, Interval, MetricField, Point, Profile, ProfilePair, ScalarField,
    Signature, Thm13Params, WarpedGeometry,
};

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

fn signature(signs: &[bool]) -> Signature {
    let entries: Vec<i8> = signs.iter().map(|&b| if b { 1 } else { -1 }).collect();
    Signature::new(&entries).unwrap()
}

/// Quadratic field with a comfortable positive floor on [-1, 1]^n.
fn quadratic_field(c0: f64, lin: &[f64], quad: &[f64]) -> ScalarField {
    let n = lin.len();
    let lin = DVector::from_column_slice(lin);
    let quad = DMatrix::from_fn(n, n, |i, j| quad[i * n + j] * 0.02);
    ScalarField::quadratic(c0, lin, quad)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn christoffel_and_ricci_symmetry(
        signs in prop::collection::vec(any::<bool>(), 4),
        c0 in 1.2f64..2.0,
        lin in prop::collection::vec(-0.1f64..0.1, 4),
        quad in prop::collection::vec(-1.0f64..1.0, 16),
        coords in prop::collection::vec(-0.5f64..0.5, 4),
    ) {
        let sig = signature(&signs);
        let phi = quadratic_field(c0, &lin, &quad);
        let metric = MetricField::conformal(&sig, &phi).unwrap();
        let p = Point::new(coords);
        let curv = ricci_generic(&metric, &p).unwrap();
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert_eq!(
                        curv.christoffel.gamma[k][(i, j)],
                        curv.christoffel.gamma[k][(j, i)]
                    );
                }
            }
        }
        prop_assert_eq!(max_abs(&(curv.ricci.clone() - curv.ricci.transpose())), 0.0);
    }

    #[test]
    fn conformal_ricci_matches_generic_pipeline(
        c0 in 1.2f64..2.0,
        lin in prop::collection::vec(-0.1f64..0.1, 4),
        quad in prop::collection::vec(-1.0f64..1.0, 16),
        coords in prop::collection::vec(-0.5f64..0.5, 4),
        signs in prop::collection::vec(any::<bool>(), 4),
    ) {
        let sig = signature(&signs);
        let phi = quadratic_field(c0, &lin, &quad);
        let p = Point::new(coords);
        prop_assume!(phi.value_at(&p).unwrap() > 0.2);
        let geom = WarpedGeometry::new(
            sig.clone(),
            phi.clone(),
            ScalarField::constant(4, 1.0),
            1,
            0.0,
        )
        .unwrap();
        let closed = conformal_ricci(&geom, &p).unwrap();
        let metric = MetricField::conformal(&sig, &phi).unwrap();
        let generic = ricci_generic(&metric, &p).unwrap();
        prop_assert!(max_abs(&(closed - generic.ricci)) < 1e-6);
    }

    #[test]
    fn conformal_hessian_matches_christoffel_assembly(
        c0 in 1.2f64..2.0,
        lin_p in prop::collection::vec(-0.1f64..0.1, 4),
        quad_p in prop::collection::vec(-1.0f64..1.0, 16),
        lin_f in prop::collection::vec(-0.1f64..0.1, 4),
        quad_f in prop::collection::vec(-1.0f64..1.0, 16),
        coords in prop::collection::vec(-0.5f64..0.5, 4),
        signs in prop::collection::vec(any::<bool>(), 4),
    ) {
        let sig = signature(&signs);
        let phi = quadratic_field(c0, &lin_p, &quad_p);
        let f = quadratic_field(1.5, &lin_f, &quad_f);
        let p = Point::new(coords);
        let geom = WarpedGeometry::new(sig.clone(), phi.clone(), f.clone(), 1, 0.0).unwrap();
        let closed = conformal_hessian(&geom, &p).unwrap();

        let metric = MetricField::conformal(&sig, &phi).unwrap();
        let chr = christoffel(&metric, &p).unwrap();
        let fj = f.eval(&p).unwrap();
        let mut assembled = fj.hess.clone();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assembled[(i, j)] -= chr.gamma[k][(i, j)] * fj.grad[k];
                }
            }
        }
        prop_assert!(max_abs(&(closed - assembled)) < 1e-6);
    }

    #[test]
    fn warped_blocks_match_flat_fiber_oracle(
        c0 in 1.2f64..1.8,
        lin_p in prop::collection::vec(-0.1f64..0.1, 3),
        quad_p in prop::collection::vec(-1.0f64..1.0, 9),
        lin_f in prop::collection::vec(-0.1f64..0.1, 3),
        quad_f in prop::collection::vec(-1.0f64..1.0, 9),
        coords in prop::collection::vec(-0.5f64..0.5, 3),
        fiber_coords in prop::collection::vec(-0.5f64..0.5, 2),
        fiber_sign in any::<bool>(),
    ) {
        let sig = Signature::riemannian(3);
        let phi = quadratic_field(c0, &lin_p, &quad_p);
        let f = quadratic_field(1.4, &lin_f, &quad_f);
        let geom = WarpedGeometry::new(sig, phi, f, 2, 0.0).unwrap();
        let fiber = Signature::parse_fiber(if fiber_sign { "++" } else { "-+" }).unwrap();
        let p = Point::new(coords);
        let q = Point::new(fiber_coords);
        let gaps = oracle_block_gaps(&geom, &fiber, &p, &q).unwrap();
        prop_assert!(gaps.base < 1e-5, "base gap {}", gaps.base);
        prop_assert!(gaps.mixed < 1e-6, "mixed block {}", gaps.mixed);
        prop_assert!(gaps.fiber < 1e-5, "fiber gap {}", gaps.fiber);
    }

    #[test]
    fn base_block_ignores_constant_warping_rescale(
        scale in 0.2f64..5.0,
        lin_f in prop::collection::vec(-0.1f64..0.1, 3),
        coords in prop::collection::vec(-0.5f64..0.5, 3),
    ) {
        let sig = Signature::riemannian(3);
        let phi = quadratic_field(1.5, &[0.05, -0.03, 0.08], &[0.5; 9]);
        let f = quadratic_field(1.4, &lin_f, &[0.3; 9]);
        let scaled = {
            let f = f.clone();
            ScalarField::from_eval(3, move |p| {
                let mut jet = f.eval(p)?;
                jet.value *= scale;
                jet.grad *= scale;
                jet.hess *= scale;
                Ok(jet)
            })
        };
        let p = Point::new(coords);
        let a = warped_ricci(&WarpedGeometry::new(sig.clone(), phi.clone(), f, 2, 0.0).unwrap(), &p).unwrap();
        let b = warped_ricci(&WarpedGeometry::new(sig, phi, scaled, 2, 0.0).unwrap(), &p).unwrap();
        prop_assert!(max_abs(&(a.base_base - b.base_base)) < 1e-10);
    }

    #[test]
    fn direction_classification_invariants(
        alpha in prop::collection::vec(-2.0f64..2.0, 4),
        signs in prop::collection::vec(any::<bool>(), 4),
        scale in 0.1f64..10.0,
    ) {
        prop_assume!(alpha.iter().any(|a| a.abs() > 1e-3));
        let sig = signature(&signs);
        let d = Direction::classify(&alpha, &sig, 1e-12).unwrap();

        // idempotence is exact
        let d2 = Direction::classify(d.alpha(), &sig, 1e-12).unwrap();
        prop_assert_eq!(&d, &d2);

        // positive rescaling lands on the same normalized direction
        let scaled: Vec<f64> = alpha.iter().map(|a| a * scale).collect();
        let d3 = Direction::classify(&scaled, &sig, 1e-12).unwrap();
        prop_assert_eq!(d.class(), d3.class());
        if !d.is_null() {
            for (a, b) in d.alpha().iter().zip(d3.alpha()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lifted_profile_reduction_identities(
        phi_coeffs in prop::collection::vec(-0.3f64..0.3, 2),
        f_coeffs in prop::collection::vec(-0.3f64..0.3, 2),
        coords in prop::collection::vec(-0.4f64..0.4, 4),
        lambda in -1.0f64..1.0,
    ) {
        let pair = ProfilePair::new(
            Profile::polynomial(&[1.2, phi_coeffs[0], phi_coeffs[1]]),
            Profile::polynomial(&[1.2, f_coeffs[0], f_coeffs[1]]),
        );
        let sig = Signature::riemannian(4);
        let dir = Direction::classify(&[0.6, 0.8, 0.0, 0.0], &sig, 1e-12).unwrap();
        let p = Point::new(coords);
        let gaps = warpcheck::reduction_gaps(&pair, &dir, &sig, 2, lambda, 0.0, &p).unwrap();
        prop_assert!(gaps.max() < 1e-10, "gap {}", gaps.max());
    }
}

/// Finite differences reproduce analytic gradients and Hessians of smooth
/// fields at 100 seeded points.
#[test]
fn finite_differences_match_analytic_fields() {
    let mut rng = SampleRng::new(11);
    for n in [3usize, 4] {
        let lin = DVector::from_iterator(n, (0..n).map(|_| rng.uniform(-0.3, 0.3)));
        let mut quad = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                quad[(i, j)] = rng.uniform(-0.2, 0.2);
            }
        }
        let analytic = ScalarField::quadratic(1.0, lin.clone(), quad.clone());
        let value = {
            let analytic = analytic.clone();
            move |p: &Point| analytic.value_at(p).unwrap()
        };
        let fd = finite_difference_field(n, value, 1e-4);
        for _ in 0..100 {
            let p = rng.box_point(n, 1.0);
            let a = analytic.eval(&p).unwrap();
            let b = fd.eval(&p).unwrap();
            assert!((a.value - b.value).abs() < 1e-12);
            assert!((&a.grad - &b.grad).amax() < 1e-5);
            assert!(max_abs(&(&a.hess - &b.hess)) < 1e-5);
        }
    }
}

/// The profile-level derivative triples agree with finite differences of the
/// profile values.
#[test]
fn profile_triples_are_internally_consistent() {
    let h = 1e-5;
    let families: Vec<(Profile, Interval)> = {
        let p13 = Thm13Params::new(4, 1.0, 1.0, 2.0).unwrap();
        let pair13 = p13.profiles();
        let p14 = warpcheck::Thm14Params::new(4, 2, warpcheck::Branch::Plus, 1.0, 1.0, 2.0)
            .unwrap();
        let pair14 = p14.profiles();
        vec![
            (pair13.phi.clone(), p13.domain()),
            (pair13.f.clone(), p13.domain()),
            (pair14.phi.clone(), p14.domain()),
            (pair14.f.clone(), p14.domain()),
        ]
    };
    for (profile, domain) in families {
        let (lo, hi) = domain.sampling_window(2.0, 0.2);
        for j in 0..40 {
            let xi = lo + (hi - lo) * (j as f64) / 39.0;
            let jet = profile.at(xi).unwrap();
            let vp = profile.at(xi + h).unwrap().v;
            let vm = profile.at(xi - h).unwrap().v;
            let d_fd = (vp - vm) / (2.0 * h);
            let dd_fd = (vp - 2.0 * jet.v + vm) / (h * h);
            assert!((jet.d - d_fd).abs() < 1e-5 * (1.0 + jet.d.abs()));
            assert!((jet.dd - dd_fd).abs() < 1e-4 * (1.0 + jet.dd.abs()));
        }
    }
}

/// The Einstein condition holds through the full product metric exactly when
/// the residual system vanishes: both are tiny on a solution family and both
/// are visibly nonzero on a perturbed pair.
#[test]
fn pde_residuals_vanish_iff_full_ricci_vanishes() {
    let n = 4;
    let sig = Signature::riemannian(n);
    let dir = Direction::classify(&[0.6, 0.8, 0.0, 0.0], &sig, 1e-12).unwrap();
    let fiber = Signature::parse_fiber("+").unwrap();
    let mut rng = SampleRng::new(23);

    let solution = Thm13Params::new(n, 1.0, 1.0, 2.0).unwrap();
    let perturbed = ProfilePair::new(
        Profile::polynomial(&[1.0, 0.0, 1.0]),
        Profile::constant(1.0),
    );

    for (pair, domain, expect_solution) in [
        (solution.profiles(), solution.domain(), true),
        (perturbed.clone(), Interval::all(), false),
    ] {
        let (lo, hi) = domain.sampling_window(2.0, 0.2);
        let (phi_field, f_field) = lift_profiles(&pair, &dir);
        let geom =
            WarpedGeometry::new(sig.clone(), phi_field.clone(), f_field.clone(), 1, 0.0).unwrap();
        let metric = MetricField::warped_product(&sig, &phi_field, &f_field, &fiber).unwrap();
        for _ in 0..20 {
            let xi = rng.uniform(lo, hi);
            let p = warpcheck::sample::point_with_xi(dir.alpha(), xi, 1.0, &mut rng);
            let q = rng.box_point(1, 1.0);
            let pde = pde_residuals(&geom, 0.0, &p).unwrap().max_abs();
            let full = p.concat(&q);
            let einstein = max_abs(&einstein_residual_generic(&metric, 0.0, &full).unwrap());
            if expect_solution {
                assert!(pde < 1e-9 && einstein < 1e-9, "pde {pde}, ricci {einstein}");
            } else {
                assert!(
                    pde > 1e-2 && einstein > 1e-3,
                    "both routes must flag the non-solution: pde {pde}, ricci {einstein}"
                );
            }
        }
    }
}
