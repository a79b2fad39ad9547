// Cross-check closed forms, the matching solver and the transfer-matrix solver
// over the default grids.

use lattice_scatter::analysis::cross_validate;
use lattice_scatter::verify::{run_suite, Suite};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cv = cross_validate(6, 1e-9);
    println!(
        "{} points: closed form delta {:.1e}, solver delta {:.1e}, max |defect| {:.1e}, {} singular",
        cv.points,
        cv.worst_closed_form_delta,
        cv.worst_solver_delta,
        cv.max_abs_defect,
        cv.singular.len()
    );
    assert!(cv.passed, "{:?}", cv.failures);

    for line in run_suite(Suite::Unitarity, 4, 1e-9) {
        println!("{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
