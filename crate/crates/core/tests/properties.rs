use std::f64::consts::PI;
use std::path::PathBuf;

use proptest::prelude::*;

use genhyp::complex::TriangulatedSurface;
use genhyp::coords::{a_from_theta, l_from_w, r_from_u, theta_from_a, u_from_r, w_from_l};
use genhyp::packing::{curvature_tilde, eps0_constant, PackingConfig, PackingTriangle};
use genhyp::pattern::{f_gradient, f_hessian, QuadParams};
use genhyp::penner::{ideal_angles, radius_invariants, triangle_hessian};
use genhyp::trig::{law_angles_from_lengths, law_length_from_angles, law_sas, rho, rho_prime, tau, tau_prime};
use genhyp::{GeneralizedTriangle, TriangleType, VertexType};

fn vertex_type() -> impl Strategy<Value = VertexType> {
    prop_oneof![
        Just(VertexType::Hyperideal),
        Just(VertexType::Ideal),
        Just(VertexType::Interior)
    ]
}

fn sign() -> impl Strategy<Value = i8> {
    prop_oneof![Just(-1i8), Just(0i8), Just(1i8)]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn tetrahedron() -> TriangulatedSurface {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/tetrahedron.json");
    TriangulatedSurface::from_path(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rho_tau_identities(eps in vertex_type(), s in sign(), x in 0.01f64..3.0) {
        let theta = if eps == VertexType::Interior { x.min(PI - 0.01) } else { x };
        let e = f64::from(eps.eps());
        prop_assert!((rho_prime(eps, theta).powi(2) + e * rho(eps, theta).powi(2) - 1.0).abs() <= 1e-12);
        let t = tau(s, x);
        prop_assert!((tau_prime(s, x).powi(2) - t * t - f64::from(s)).abs() <= 1e-12 * t.abs().max(1.0).powi(2));
    }

    #[test]
    fn laws_round_trip(
        types in (vertex_type(), vertex_type(), vertex_type()),
        seed in prop::array::uniform3(0.0f64..1.0),
    ) {
        let ttype = TriangleType::new(types.0, types.1, types.2);
        let angles: [f64; 3] = [0, 1, 2].map(|i| {
            let (lo, hi) = match ttype.vertex(i) {
                VertexType::Interior => (0.05, PI - 0.05),
                VertexType::Ideal => (0.1, 4.0),
                VertexType::Hyperideal => (0.1, 3.0),
            };
            lo + seed[i] * (hi - lo)
        });
        let Ok(lengths) = law_length_from_angles(ttype, angles) else {
            return Err(TestCaseError::reject("not a triangle"));
        };
        prop_assume!(lengths.iter().all(|l| (0.05..=3.0).contains(&l.abs())));
        let back = law_angles_from_lengths(ttype, lengths).unwrap();
        for i in 0..3 {
            prop_assert!(rel(back[i], angles[i]) <= 1e-9, "{ttype} {angles:?} -> {back:?}");
        }
        let tri = GeneralizedTriangle { ttype, angles, lengths };
        let r = tri.sine_ratios();
        let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        prop_assert!((hi - lo) / hi <= 1e-10);
    }

    #[test]
    fn interior_sas_matches_cosine_law(l1 in 0.05f64..3.0, l2 in 0.05f64..3.0, theta in 0.05f64..PI - 0.05) {
        let sol = law_sas(VertexType::Interior, VertexType::Interior, l1, l2, theta).unwrap();
        let c = l1.cosh() * l2.cosh() - l1.sinh() * l2.sinh() * theta.cos();
        prop_assert!(rel(sol.third.cosh(), c) <= 1e-12);
        let tri = sol.triangle.unwrap();
        prop_assert_eq!(tri.angles[2], theta);
    }

    #[test]
    fn u_coordinate_inverts(s in sign(), r in 0.01f64..20.0) {
        let u = u_from_r(s, r).unwrap();
        prop_assert!(u < 0.0);
        prop_assert!(rel(r_from_u(s, u).unwrap(), r) <= 1e-12);
    }

    #[test]
    fn w_coordinate_inverts(s in sign(), h in prop_oneof![Just(-1.0), Just(0.0), Just(0.5), Just(1.0), Just(2.0)], l in 0.05f64..4.0) {
        let w = w_from_l(h, s, l).unwrap();
        prop_assert!(rel(l_from_w(h, s, w).unwrap(), l) <= 1e-10, "h={} s={} l={} w={}", h, s, l, w);
    }

    #[test]
    fn a_coordinate_inverts(eps in vertex_type(), h in prop_oneof![Just(-1.0), Just(0.0), Just(0.5), Just(1.0), Just(2.0)], x in 0.05f64..3.0) {
        let theta = if eps == VertexType::Interior { x.min(PI - 0.05) } else { x };
        let a = a_from_theta(h, eps, theta).unwrap();
        prop_assert!(rel(theta_from_a(h, eps, a).unwrap(), theta) <= 1e-10);
    }

    #[test]
    fn penner_triangle_invariants(l in prop::array::uniform3(-3.0f64..3.0)) {
        let th = ideal_angles(l).unwrap();
        let x = radius_invariants(l).unwrap();
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            prop_assert!((x[j] + x[k] - th[i]).abs() <= 1e-12 * th[i].max(1.0));
        }
        let h = triangle_hessian(l).unwrap();
        prop_assert!((h - h.transpose()).amax() <= 1e-12 * h.amax());
        prop_assert!(h.symmetric_eigen().eigenvalues.max() < 0.0);
    }

    #[test]
    fn packing_jacobian_symmetric_negative(
        delta in vertex_type(),
        phi in prop::array::uniform3(PI / 2.0..PI),
        r in prop::array::uniform3(0.2f64..3.0),
    ) {
        let s = -delta.eps();
        let Ok(t) = PackingTriangle::new(VertexType::Hyperideal, delta, phi, r) else {
            return Err(TestCaseError::reject("outside the domain"));
        };
        let a = t.jacobian(s, r).unwrap();
        prop_assert!((a - a.transpose()).amax() <= 1e-10 * a.amax().max(1.0));
        prop_assert!(a.symmetric_eigen().eigenvalues.max() < 0.0);
    }

    #[test]
    fn ideal_packing_scales_with_radius(r in prop::collection::vec(-2.0f64..2.0, 4), phi in 0.5f64..3.0) {
        let s = tetrahedron();
        let cfg = PackingConfig::uniform(&s, VertexType::Ideal, VertexType::Ideal, phi).unwrap();
        let k = curvature_tilde(&cfg, &s, &r).unwrap();
        let c = eps0_constant(&cfg, &s).unwrap();
        for v in 0..4 {
            prop_assert!(rel(k[v] * r[v].exp(), c[v]) <= 1e-12);
        }
    }

    #[test]
    fn pattern_f_hessian_symmetric(
        eps in prop_oneof![Just(VertexType::Ideal), Just(VertexType::Interior)],
        h in prop_oneof![Just(-1.0), Just(0.0), Just(0.5), Just(1.0), Just(2.0)],
        w in prop::array::uniform2(-0.5f64..0.5),
    ) {
        let p = QuadParams { eps, delta: VertexType::Interior, h, theta: PI / 2.0 };
        let Ok(hm) = f_hessian(p, w[0], w[1]) else {
            return Err(TestCaseError::reject("outside the domain"));
        };
        prop_assert!((hm[(0, 1)] - hm[(1, 0)]).abs() <= 1e-10 * hm.amax().max(1.0));
        prop_assert!(hm.symmetric_eigen().eigenvalues.max() < 0.0);
        let g = f_gradient(p, w[0], w[1]).unwrap();
        prop_assert!(g.iter().all(|x| x.is_finite()));
    }
}
