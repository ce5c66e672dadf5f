use conika::catalog::conical_catalogue;
use conika::certify::{certify, DEFAULT_TOL};
use conika::designs::sic_povm;
use conika::random::{random_mixed_state, rng_for};
use conika::witness::{
    detect_linear, detect_quadratic, quadratic_criterion, werner_scan, werner_state, witness_report, DensityMatrix,
    SeesawConfig,
};

#[test]
fn bounds_are_ordered_with_seesaw_inside() {
    for d in [2usize, 3, 5] {
        for povm in conical_catalogue(d) {
            let cert = certify(&povm, DEFAULT_TOL);
            let r = witness_report(&cert, d, SeesawConfig { restarts: 8, iters: 200, seed: 3 }).unwrap();
            let eps = 1e-12;
            assert!(r.e_minus_n <= r.s_minus_n + eps && r.s_minus_n <= r.s_plus_n + eps && r.s_plus_n <= r.e_plus_n + eps);
            assert!(
                r.e_minus_npt <= r.s_minus_npt + eps
                    && r.s_minus_npt <= r.s_plus_npt + eps
                    && r.s_plus_npt <= r.e_plus_npt + eps
            );
            for (x, lo, hi) in [
                (r.numeric_s_minus_n, r.e_minus_n, r.e_plus_n),
                (r.numeric_s_plus_n, r.e_minus_n, r.e_plus_n),
                (r.numeric_s_minus_npt, r.e_minus_npt, r.e_plus_npt),
                (r.numeric_s_plus_npt, r.e_minus_npt, r.e_plus_npt),
            ] {
                assert!(x >= lo - 1e-9 && x <= hi + 1e-9, "{}: {x} outside [{lo}, {hi}]", povm.label());
            }
            // N detects only from below, N^PT only from above
            assert!(r.e_minus_n < r.s_minus_n && r.e_plus_n == r.s_plus_n);
            assert!(r.e_plus_npt > r.s_plus_npt && r.e_minus_npt == r.s_minus_npt);
        }
    }
}

#[test]
fn werner_scan_first_detections_qutrit() {
    let cert = certify(&sic_povm(3).unwrap(), DEFAULT_TOL);
    let rows = werner_scan(3, &cert, 0.01).unwrap();
    assert_eq!(rows.len(), 101);
    let first_below = rows.iter().find(|r| r.below).unwrap().p;
    let first_quad = rows.iter().find(|r| r.detected).unwrap().p;
    assert_eq!(first_below, 0.51);
    assert_eq!(first_quad, 0.67);
    // once detected, stays detected
    assert!(rows.iter().skip_while(|r| !r.below).all(|r| r.below));
    assert!(rows.iter().skip_while(|r| !r.detected).all(|r| r.detected));
}

#[test]
fn werner_at_threshold_is_not_flagged() {
    for d in [2usize, 3] {
        let cert = certify(&sic_povm(d).unwrap(), DEFAULT_TOL);
        let half = werner_state(d, 0.5).unwrap();
        assert!(!detect_linear(&half, &cert, d).unwrap().below);
        let edge = werner_state(d, (d as f64 - 1.0) / d as f64).unwrap();
        assert!(!detect_quadratic(&edge, &cert, d).unwrap());
    }
}

#[test]
fn quadratic_bound_holds_on_products() {
    let mut rng = rng_for(12, 0);
    for d in [2usize, 3] {
        let cert = certify(&sic_povm(d).unwrap(), DEFAULT_TOL);
        for _ in 0..200 {
            let a = random_mixed_state(d, 2, &mut rng);
            let b = random_mixed_state(d, 2, &mut rng);
            let rho = DensityMatrix::new(conika::tensor_product(&a, &b)).unwrap();
            let q = quadratic_criterion(&rho, &cert, d).unwrap();
            assert!(q.lhs() <= 1e-12, "product state gives lhs {}", q.lhs());
            assert!(!q.detected());
        }
    }
}
