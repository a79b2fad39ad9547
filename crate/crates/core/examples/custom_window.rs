// Build an interaction by hand, check PT symmetry, round-trip it through the
// JSON window format and scatter off it.

use lattice_scatter::cli::window_file::CustomWindowFile;
use lattice_scatter::{is_pt_symmetric, pt_violation, solve_matching, InteractionWindow, PhiAngle};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // balanced gain/loss on sites -1 and 1
    let gain_loss = InteractionWindow::new(-1, 1)?
        .with(-1, -1, Complex64::new(0.0, 0.4))?
        .with(1, 1, Complex64::new(0.0, -0.4))?
        .with(0, 0, 0.3)?;
    println!(
        "gain/loss pair: pt-symmetric = {}",
        is_pt_symmetric(&gain_loss)
    );

    let text = CustomWindowFile::from_window(&gain_loss).to_json();
    println!("{text}");
    let back = CustomWindowFile::parse(&text)?.to_window()?;
    assert_eq!(back, gain_loss);

    let phi = PhiAngle::new(1.3)?;
    let rep = solve_matching(&back, phi)?;
    // PT symmetry alone does not force |R|^2+|T|^2 = 1
    println!("|R|^2+|T|^2 = {:.6}", rep.amplitudes.prob_sum());
    assert!(is_pt_symmetric(&back));

    // moving the loss to the wrong side breaks the symmetry
    let lopsided = gain_loss.with(1, 1, Complex64::new(0.0, 0.4))?;
    assert!(!is_pt_symmetric(&lopsided));
    if let Some(v) = pt_violation(&lopsided) {
        println!(
            "lopsided: W[{}][{}] = {} but its mirror is {}",
            v.i, v.j, v.entry, v.mirror
        );
    }
    let rep = solve_matching(&lopsided, phi)?;
    println!("lopsided |R|^2+|T|^2 = {:.6}", rep.amplitudes.prob_sum());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
