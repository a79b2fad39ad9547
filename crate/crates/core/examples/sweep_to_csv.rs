// Parameter sweep over M, x and phi, written as CSV.
//
// Pass a path to keep the file; otherwise it goes to the temp directory.

use std::fs::File;
use std::io::BufWriter;

use lattice_scatter::analysis::{run_sweep, unitarity_report, ModelTemplate, SweepSpec};
use lattice_scatter::{PhiAngle, SolverKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = SweepSpec::new(ModelTemplate::PtDeltaPair);
    spec.m_list = vec![1, 2, 3, 4];
    spec.couplings = vec![-0.6, -0.3, 0.3, 0.6];
    spec.phis = PhiAngle::linspace(0.2, 2.9, 10)?;
    spec.solvers = vec![
        SolverKind::ClosedForm,
        SolverKind::Matching,
        SolverKind::Transfer,
    ];

    let table = run_sweep(&spec)?;
    let path = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("pt_pair_sweep.csv"));
    table.write_csv(BufWriter::new(File::create(&path)?))?;

    // closed forms stop at M = 3, so M = 4 closed-form points are reported as errors
    println!(
        "{} rows, {} skipped points -> {}",
        table.rows.len(),
        table.errors.len(),
        path.display()
    );
    let report = unitarity_report(&table, 1e-10);
    for (model, u) in &report.models {
        println!(
            "{model}: {} rows, max |defect| {:.1e}, {} violations",
            u.rows, u.max_abs_defect, u.violations
        );
    }
    assert_eq!(report.total_violations(), 0);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
