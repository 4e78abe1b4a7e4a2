mod common;

use common::*;
use proptest::prelude::*;
use secrecy_core::linalg::{self, re};
use secrecy_core::projections::simplex_threshold;
use secrecy_core::{project_simplex, project_spectrahedron};

fn vec_strategy() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (prop::collection::vec(-5.0f64..5.0, 1..10), 0.0f64..8.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn simplex_projection_is_feasible_and_idempotent((v, p) in vec_strategy()) {
        let t = project_simplex(&v, p).unwrap();
        prop_assert!(t.iter().all(|x| *x >= 0.0));
        prop_assert!(t.iter().sum::<f64>() <= p + 1e-12 * p.max(1.0));
        let again = project_simplex(&t, p).unwrap();
        prop_assert!(dist(&t, &again) <= 1e-12 * p.max(1.0));
    }

    #[test]
    fn simplex_projection_is_nonexpansive((v, p) in vec_strategy(), shift in prop::collection::vec(-3.0f64..3.0, 10)) {
        let w: Vec<f64> = v.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let pv = project_simplex(&v, p).unwrap();
        let pw = project_simplex(&w, p).unwrap();
        prop_assert!(dist(&pv, &pw) <= dist(&v, &w) + 1e-12);
    }

    #[test]
    fn threshold_matches_bisection((v, p) in vec_strategy()) {
        let clamped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
        match (simplex_threshold(&v, p), bisect_tau(&clamped, p)) {
            (None, None) => {}
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{a} vs {b}"),
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn spectrahedron_projection_is_feasible_and_idempotent(seed in any::<u64>(), n in 1usize..6, p in 0.0f64..8.0) {
        let mut r = rng(seed);
        let xbar = random_hermitian(&mut r, n) * re(3.0);
        let x = project_spectrahedron(&xbar, p).unwrap();
        prop_assert!(linalg::min_eigenvalue(x.matrix()) >= -1e-12);
        prop_assert!(x.trace() <= p + 1e-10 * p.max(1.0));
        let again = project_spectrahedron(x.matrix(), p).unwrap();
        prop_assert!(linalg::frob(&(again.matrix() - x.matrix())) <= 1e-10 * p.max(1.0));
    }

    #[test]
    fn spectrahedron_projection_is_nonexpansive(seed in any::<u64>(), n in 1usize..6, p in 0.1f64..8.0) {
        let mut r = rng(seed);
        let a = random_hermitian(&mut r, n) * re(3.0);
        let b = random_hermitian(&mut r, n) * re(3.0);
        let pa = project_spectrahedron(&a, p).unwrap();
        let pb = project_spectrahedron(&b, p).unwrap();
        prop_assert!(linalg::frob(&(pa.matrix() - pb.matrix())) <= linalg::frob(&(a - b)) + 1e-10);
    }

    #[test]
    fn spectrahedron_projection_of_feasible_point_is_identity(seed in any::<u64>(), n in 1usize..6, p in 0.1f64..8.0) {
        let mut r = rng(seed);
        let x = sample_spectrahedron(&mut r, n, p);
        let px = project_spectrahedron(&x, p).unwrap();
        prop_assert!(linalg::frob(&(px.matrix() - &x)) <= 1e-10 * p.max(1.0));
    }
}

#[test]
fn simplex_projection_beats_sampled_points() {
    let mut r = rng(11);
    for _ in 0..200 {
        let n = 1 + (r.uniform() * 8.0) as usize;
        let p = uniform(&mut r, 0.0, 5.0);
        let v: Vec<f64> = (0..n).map(|_| uniform(&mut r, -4.0, 4.0)).collect();
        let t = project_simplex(&v, p).unwrap();
        let d = dist(&v, &t);
        for _ in 0..200 {
            let s = sample_simplex(&mut r, n, p);
            assert!(dist(&v, &s) >= d - 1e-10);
        }
    }
}

#[test]
fn spectrahedron_projection_beats_sampled_points() {
    let mut r = rng(12);
    for _ in 0..100 {
        let n = 1 + (r.uniform() * 4.0) as usize;
        let p = uniform(&mut r, 0.0, 5.0);
        let xbar = random_hermitian(&mut r, n) * re(2.0);
        let x = project_spectrahedron(&xbar, p).unwrap();
        let d = linalg::frob(&(&xbar - x.matrix()));
        for _ in 0..200 {
            let s = sample_spectrahedron(&mut r, n, p);
            assert!(linalg::frob(&(&xbar - s)) >= d - 1e-10);
        }
    }
}

#[test]
fn zero_budget_projects_to_origin() {
    assert_eq!(project_simplex(&[1.0, -2.0, 3.0], 0.0).unwrap(), vec![0.0, 0.0, 0.0]);
    let mut r = rng(3);
    let x = project_spectrahedron(&random_hermitian(&mut r, 3), 0.0).unwrap();
    assert!(linalg::frob(x.matrix()) == 0.0);
}
