use std::f64::consts::PI;

use lattice_scatter::analysis::difference_defect;
use lattice_scatter::verify::random_tridiagonal_window;
use lattice_scatter::{
    build_pt_delta_pair, build_ultralocal, closed_form, residual, solve_matching,
    solve_transfer_matrix, InteractionWindow, ModelFamily, PhiAngle,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn phi() -> impl Strategy<Value = PhiAngle> {
    (0.05..PI - 0.05).prop_map(|p| PhiAngle::new(p).unwrap())
}

fn coupling() -> impl Strategy<Value = f64> {
    prop_oneof![-0.95..0.95f64, 1.05..3.0f64, -3.0..-1.05f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pt_pair_conserves_probability(m in 1u32..=10, x in coupling(), p in phi()) {
        let win = build_pt_delta_pair(m, x).unwrap();
        let a = solve_matching(&win, p).unwrap();
        let b = solve_transfer_matrix(&win, p).unwrap();
        prop_assert!(a.amplitudes.defect().abs() < 1e-9);
        prop_assert!(a.amplitudes.max_delta(&b.amplitudes) < 1e-8);
        prop_assert!(difference_defect(&a.amplitudes).abs() < 1e-9);
    }

    #[test]
    fn pt_pair_is_even_in_coupling(m in 1u32..=8, x in coupling(), p in phi()) {
        let a = solve_matching(&build_pt_delta_pair(m, x).unwrap(), p).unwrap().amplitudes;
        let b = solve_matching(&build_pt_delta_pair(m, -x).unwrap(), p).unwrap().amplitudes;
        prop_assert!(a.max_delta(&b) < 1e-9);
    }

    #[test]
    fn closed_forms_match_solver(m in 1u32..=3, x in -0.95..0.95f64, p in phi()) {
        let model = ModelFamily::pt_delta_pair(m, x).unwrap();
        let exact = closed_form(&model, p).unwrap();
        let num = solve_matching(&model.window(), p).unwrap().amplitudes;
        prop_assert!(exact.max_delta(&num) < 1e-10);
    }

    #[test]
    fn zero_coupling_is_free(m in 1u32..=8, p in phi()) {
        for win in [build_pt_delta_pair(m, 0.0).unwrap(), build_ultralocal(0.0)] {
            let a = solve_matching(&win, p).unwrap().amplitudes;
            prop_assert!(a.r().norm() < 1e-12);
            prop_assert!((a.t() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn ultralocal_sign_follows_coupling(a in prop_oneof![-0.9..-1e-3f64, 1e-3..0.9f64], p in phi()) {
        let rep = solve_matching(&build_ultralocal(a), p).unwrap();
        prop_assert_eq!(rep.amplitudes.defect().signum(), -a.signum());
    }

    #[test]
    fn random_windows_agree(seed in any::<u64>(), width in 2usize..=15, p in phi()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let win = random_tridiagonal_window(&mut rng, width);
        let a = solve_matching(&win, p).unwrap();
        let b = solve_transfer_matrix(&win, p).unwrap();
        prop_assert!(a.amplitudes.max_delta(&b.amplitudes) < 1e-9);
        prop_assert!(residual(&win, p, &a) < 1e-10);
        prop_assert!(residual(&win, p, &b) < 1e-10);
    }

    #[test]
    fn hermitian_windows_conserve_probability(
        seed in any::<u64>(),
        width in 1usize..=10,
        p in phi(),
    ) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lo = rng.gen_range(-5i64..=5);
        let hi = lo + width as i64 - 1;
        let mut win = InteractionWindow::new(lo, hi).unwrap();
        for i in lo..=hi {
            win.set(i, i, Complex64::new(rng.gen_range(-0.8..0.8), 0.0)).unwrap();
            for j in (i + 1)..=hi {
                let w = Complex64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
                win.set(i, j, w).unwrap();
                win.set(j, i, w.conj()).unwrap();
            }
        }
        if let Ok(rep) = solve_matching(&win, p) {
            prop_assert!(rep.amplitudes.defect().abs() < 1e-9);
        }
    }
}
