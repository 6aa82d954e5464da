use std::path::PathBuf;

use genhyp::complex::{enumerate_edge_cycles, TriangulatedSurface, DEFAULT_CYCLE_CAP};
use genhyp::penner::{
    edge_cycle_sums, energy_by_path_integral, ideal_angles, polytope_check, psi_map, psi_solve, radius_invariants,
    total_energy, triangle_energy, triangle_hessian, PsiSolveOptions,
};
use genhyp::rng::SplitMix64;
use genhyp::Error;

fn tri(name: &str) -> TriangulatedSurface {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    TriangulatedSurface::from_path(p).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn ideal_angle_examples() {
    assert_eq!(ideal_angles([0.0; 3]).unwrap(), [2.0; 3]);
    let th = ideal_angles([2.0 * 2f64.ln(), 0.0, 0.0]).unwrap();
    assert!(close(&th, &[4.0, 1.0, 1.0], 1e-14), "{th:?}");
    let x = radius_invariants([2.0 * 2f64.ln(), 0.0, 0.0]).unwrap();
    assert!(close(&x, &[-1.0, 2.0, 2.0], 1e-14), "{x:?}");
    assert_eq!(radius_invariants([0.0; 3]).unwrap(), [1.0; 3]);
}

#[test]
fn ideal_angle_identities_on_random_lengths() {
    let mut rng = SplitMix64::new(3);
    for _ in 0..500 {
        let l = [0, 1, 2].map(|_| rng.uniform(-3.0, 3.0));
        let th = ideal_angles(l).unwrap();
        let x = radius_invariants(l).unwrap();
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let prod = l[i].exp() * th[j] * th[k] / 2.0;
            assert!((prod - 2.0).abs() <= 1e-12 * 2.0, "{prod}");
            assert!((x[j] + x[k] - th[i]).abs() <= 1e-12 * th[i].max(1.0));
        }
    }
}

#[test]
fn overflow_is_reported() {
    assert!(matches!(ideal_angles([2000.0, -2000.0, 0.0]), Err(Error::Overflow(_))));
}

#[test]
fn energy_closed_form_matches_quadrature() {
    assert_eq!(triangle_energy([0.0; 3]).unwrap(), 0.0);
    let l = [0.3, -0.2, 0.5];
    let w = triangle_energy(l).unwrap();
    let th = ideal_angles(l).unwrap();
    assert!((w - (6.0 - th.iter().sum::<f64>())).abs() < 1e-15);
    assert!((w - energy_by_path_integral(l, 1e-13).unwrap()).abs() <= 1e-10);
}

#[test]
fn hessian_at_origin_negative_definite() {
    let h = triangle_hessian([0.0; 3]).unwrap();
    let eig = h.symmetric_eigen().eigenvalues;
    assert!(eig.iter().all(|&e| e < 0.0), "{eig}");
}

#[test]
fn torus_map_and_solve() {
    let s = tri("punctured_torus.json");
    assert_eq!(psi_map(&s, &[0.0; 3]).unwrap(), vec![2.0; 3]);
    let sol = psi_solve(&s, &[2.0; 3], PsiSolveOptions::default()).unwrap();
    assert!(sol.lengths.iter().all(|x| x.abs() <= 1e-10), "{:?}", sol.lengths);
}

#[test]
fn scaling_law() {
    // l − 2 ln λ on every edge multiplies every θ, hence Ψ, by λ.
    let s = tri("thrice_punctured_sphere.json");
    let mut rng = SplitMix64::new(5);
    let l: Vec<f64> = (0..s.edge_count()).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let shifted: Vec<f64> = l.iter().map(|x| x - 2.0 * 2f64.ln()).collect();
    let (a, b) = (psi_map(&s, &l).unwrap(), psi_map(&s, &shifted).unwrap());
    for (x, y) in a.iter().zip(&b) {
        assert!((2.0 * x - y).abs() <= 1e-13 * y.abs().max(1.0), "{x} {y}");
    }
}

#[test]
fn psi_is_gradient_of_total_energy() {
    let s = tri("punctured_torus.json");
    let mut rng = SplitMix64::new(9);
    let h = 1e-6;
    for _ in 0..20 {
        let l: Vec<f64> = (0..s.edge_count()).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let g = psi_map(&s, &l).unwrap();
        for e in 0..s.edge_count() {
            let (mut p, mut q) = (l.clone(), l.clone());
            p[e] += h;
            q[e] -= h;
            let fd = (total_energy(&s, &p).unwrap() - total_energy(&s, &q).unwrap()) / (2.0 * h);
            assert!((fd - g[e]).abs() <= 1e-6 * g[e].abs().max(1.0), "{fd} vs {}", g[e]);
        }
    }
}

#[test]
fn polytope_examples() {
    let s = tri("punctured_torus.json");
    assert!(polytope_check(&s, &[2.0; 3], DEFAULT_CYCLE_CAP).unwrap().feasible);
    let zero = polytope_check(&s, &[0.0; 3], DEFAULT_CYCLE_CAP).unwrap();
    assert!(!zero.feasible);
    assert_eq!(zero.witness.expect("witness").len(), 2);

    let mut rng = SplitMix64::new(11);
    for name in ["punctured_torus.json", "thrice_punctured_sphere.json"] {
        let s = tri(name);
        for _ in 0..10 {
            let l: Vec<f64> = (0..s.edge_count()).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let check = polytope_check(&s, &psi_map(&s, &l).unwrap(), DEFAULT_CYCLE_CAP).unwrap();
            assert!(check.feasible && check.min_sum > 0.0);
        }
    }
}

#[test]
fn round_trip_random_lengths() {
    let mut rng = SplitMix64::new(13);
    for name in ["punctured_torus.json", "thrice_punctured_sphere.json"] {
        let s = tri(name);
        for _ in 0..20 {
            let l: Vec<f64> = (0..s.edge_count()).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let sol = psi_solve(&s, &psi_map(&s, &l).unwrap(), PsiSolveOptions::default()).unwrap();
            assert!(close(&sol.lengths, &l, 1e-8), "{:?} vs {l:?}", sol.lengths);
            assert!(sol.iterations <= 30);
        }
    }
}

#[test]
fn negative_cycle_sum_is_infeasible() {
    let s = tri("punctured_torus.json");
    match psi_solve(&s, &[1.0, -3.0, 1.0], PsiSolveOptions::default()) {
        Err(Error::Infeasible { witness: Some(w), .. }) => assert!(!w.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn cycle_identity() {
    let s = tri("punctured_torus.json");
    let cycles = enumerate_edge_cycles(&s, 2, DEFAULT_CYCLE_CAP).unwrap();
    let two = cycles.iter().find(|c| c.len() == 2).expect("length-2 cycle");
    let (lhs, rhs) = edge_cycle_sums(&s, &[0.0; 3], two).unwrap();
    assert!((lhs - 4.0).abs() < 1e-14 && (rhs - 4.0).abs() < 1e-14, "{lhs} {rhs}");

    let mut rng = SplitMix64::new(17);
    for name in ["punctured_torus.json", "thrice_punctured_sphere.json", "tetrahedron.json"] {
        let s = tri(name);
        let cycles = enumerate_edge_cycles(&s, 2, DEFAULT_CYCLE_CAP).unwrap();
        let l: Vec<f64> = (0..s.edge_count()).map(|_| rng.uniform(-1.0, 1.0)).collect();
        for c in &cycles {
            let (lhs, rhs) = edge_cycle_sums(&s, &l, c).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{name} {}: {lhs} {rhs}", c.describe(&s));
            assert!(rhs > 0.0);
        }
    }
}

#[test]
fn length_mismatch_is_input_error() {
    let s = tri("punctured_torus.json");
    assert!(matches!(psi_map(&s, &[0.0; 2]), Err(Error::Input(_))));
    assert!(matches!(psi_map(&s, &[0.0, f64::NAN, 0.0]), Err(Error::Input(_))));
}
