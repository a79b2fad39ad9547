// The antisymmetric two-site block is not PT-symmetric: flux is lost for
// a > 0 and gained for a < 0.

use std::f64::consts::FRAC_PI_2;

use lattice_scatter::{
    cf_ultralocal_prob_sum, is_pt_symmetric, solve_matching, ModelFamily, PhiAngle,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let phi = PhiAngle::new(FRAC_PI_2)?;
    for a in [-0.5, -0.25, 0.0, 0.25, 0.5] {
        let model = ModelFamily::ultralocal(a)?;
        let win = model.window();
        let rep = solve_matching(&win, phi)?;
        let formula = cf_ultralocal_prob_sum(a, phi)?;
        println!(
            "a = {a:>5}: pt-symmetric {:<5} |R|^2+|T|^2 = {:.6} (formula {:.6}), defect {:+.6}",
            is_pt_symmetric(&win),
            rep.amplitudes.prob_sum(),
            formula,
            rep.amplitudes.defect()
        );
        assert!((formula - rep.amplitudes.prob_sum()).abs() < 1e-12);
        if a != 0.0 {
            assert_eq!(rep.amplitudes.defect().signum(), -a.signum());
        }
    }

    // a = 1 cuts the lattice in one direction
    let cut = ModelFamily::ultralocal(1.0)?;
    let err = solve_matching(&cut.window(), phi).unwrap_err();
    println!("a = 1: {err}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
