// Exact amplitudes of the PT pair for M = 1, 2, 3 next to the numerical solver.

use lattice_scatter::{closed_form, solve_matching, ModelFamily, PhiAngle};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let phi = PhiAngle::new(0.9)?;
    println!(
        "{:>3} {:>6} {:>24} {:>24} {:>10}",
        "M", "x", "R (closed form)", "T (closed form)", "delta"
    );
    let mut worst: f64 = 0.0;
    for m in 1..=3 {
        for x in [-0.7, -0.2, 0.3, 0.8] {
            let model = ModelFamily::pt_delta_pair(m, x)?;
            let exact = closed_form(&model, phi)?;
            let numeric = solve_matching(&model.window(), phi)?.amplitudes;
            let d = exact.max_delta(&numeric);
            worst = worst.max(d);
            println!(
                "{m:>3} {x:>6.2} {:>24.6} {:>24.6} {d:>10.1e}",
                exact.r(),
                exact.t()
            );
        }
    }
    println!("worst |closed form - solver| = {worst:.1e}");
    assert!(worst < 1e-12);

    // no exact formula is known beyond M = 3
    let far = ModelFamily::pt_delta_pair(4, 0.5)?;
    assert!(closed_form(&far, phi).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
