// Solve one scattering point with both numerical solvers.
//
// ```bash
// cargo run -p lattice-scatter --example solve_point
// ```

use lattice_scatter::{
    energy_from_phi, solve_matching, solve_transfer_matrix, LatticeConvention, ModelFamily,
    PhiAngle,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let model = ModelFamily::pt_delta_pair(2, 0.4)?;
    let phi = PhiAngle::new(1.1)?;
    let win = model.window();

    let matching = solve_matching(&win, phi)?;
    let transfer = solve_transfer_matrix(&win, phi)?;

    println!("{model} at phi = {}", phi.value());
    println!(
        "E (unshifted) = {:.6}",
        energy_from_phi(phi, LatticeConvention::default())
    );
    println!(
        "E (shifted)   = {:.6}",
        energy_from_phi(phi, LatticeConvention::shifted(1.0)?)
    );
    for rep in [&matching, &transfer] {
        let a = rep.amplitudes;
        println!(
            "{:>9}: R = {:.6}, T = {:.6}, |R|^2+|T|^2 = {:.15}, residual {:.1e}",
            rep.solver.tag(),
            a.r(),
            a.t(),
            a.prob_sum(),
            rep.residual_max
        );
    }

    let gap = matching.amplitudes.max_delta(&transfer.amplitudes);
    println!("solvers agree to {gap:.1e}");
    assert!(gap < 1e-10);
    assert!(matching.amplitudes.defect().abs() < 1e-10);

    // wave function on the matched sites, free plane waves outside
    for (m, psi) in matching.wavefunction.iter() {
        println!("  psi[{m:>2}] = {psi:.5}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
