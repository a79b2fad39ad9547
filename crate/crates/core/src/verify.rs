//! Self-check suites behind `scatter verify`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{cross_validate, default_coupling_grid, default_phi_grid, difference_defect};
use crate::closed_form::{cf_ultralocal_at, cf_ultralocal_prob_sum, closed_form};
use crate::error::Error;
use crate::lattice::PhiAngle;
use crate::model::{build_ultralocal, ModelFamily, ULTRALOCAL_LO};
use crate::solver::{solve, solve_matching, solve_transfer_matrix, SolverKind};
use crate::window::InteractionWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    Unitarity,
    Oracles,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForms => "closed-forms",
            Suite::Unitarity => "unitarity",
            Suite::Oracles => "oracles",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closed-forms" => Ok(Suite::ClosedForms),
            "unitarity" => Ok(Suite::Unitarity),
            "oracles" => Ok(Suite::Oracles),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub suite: &'static str,
    pub name: String,
    /// Worst deviation seen, or a mismatch count for counting checks.
    pub worst: f64,
    pub tol: f64,
    pub points: usize,
    pub skipped_singular: usize,
    pub passed: bool,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: worst {:.3e} (tol {:.1e}, {} points",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.worst,
            self.tol,
            self.points
        )?;
        if self.skipped_singular > 0 {
            write!(f, ", {} singular skipped", self.skipped_singular)?;
        }
        write!(f, ")")
    }
}

/// Running worst-case tracker for one check.
struct Tally {
    worst: f64,
    points: usize,
    singular: usize,
    failed: bool,
}

impl Tally {
    fn new() -> Self {
        Tally {
            worst: 0.0,
            points: 0,
            singular: 0,
            failed: false,
        }
    }

    fn record(&mut self, v: f64) {
        self.points += 1;
        if v.is_nan() || v > self.worst {
            self.worst = v;
        }
    }

    fn error(&mut self, e: &Error) {
        if e.is_singular() {
            self.singular += 1;
        } else {
            self.failed = true;
        }
    }

    fn line(self, suite: &'static str, name: impl Into<String>, tol: f64) -> CheckLine {
        CheckLine {
            suite,
            name: name.into(),
            passed: !self.failed && self.worst <= tol,
            worst: self.worst,
            tol,
            points: self.points,
            skipped_singular: self.singular,
        }
    }
}

fn pt_grid(m: u32) -> impl Iterator<Item = (ModelFamily, f64, PhiAngle)> {
    let phis = default_phi_grid();
    default_coupling_grid().into_iter().flat_map(move |x| {
        let model = ModelFamily::pt_delta_pair(m, x).expect("M >= 1");
        phis.clone().into_iter().map(move |p| (model.clone(), x, p))
    })
}

fn closed_forms(m_max: u32, tol: f64) -> Vec<CheckLine> {
    const S: &str = "closed-forms";
    let mut lines = Vec::new();
    for m in 1..=m_max.min(3) {
        for kind in [SolverKind::Matching, SolverKind::Transfer] {
            let mut t = Tally::new();
            for (model, _, phi) in pt_grid(m) {
                match closed_form(&model, phi).and_then(|cf| {
                    solve(&model.window(), phi, kind).map(|rep| cf.max_delta(&rep.amplitudes))
                }) {
                    Ok(d) => t.record(d),
                    Err(e) => t.error(&e),
                }
            }
            lines.push(t.line(S, format!("pt-pair M={m} closed form vs {kind}"), tol));
        }
    }

    let mut vs_solver = Tally::new();
    let mut sum_formula = Tally::new();
    for a in default_coupling_grid() {
        for phi in default_phi_grid() {
            match cf_ultralocal_at(a, phi, ULTRALOCAL_LO).and_then(|cf| {
                solve_matching(&build_ultralocal(a), phi).map(|rep| (cf, rep.amplitudes))
            }) {
                Ok((cf, num)) => {
                    vs_solver.record(cf.max_delta(&num));
                    match cf_ultralocal_prob_sum(a, phi) {
                        Ok(s) => sum_formula.record((s - num.prob_sum()).abs()),
                        Err(e) => sum_formula.error(&e),
                    }
                }
                Err(e) => vs_solver.error(&e),
            }
        }
    }
    lines.push(vs_solver.line(S, "ultralocal closed form vs matching", tol));
    lines.push(sum_formula.line(S, "ultralocal probability-sum formula vs |R|^2+|T|^2", tol));
    lines
}

fn unitarity(m_max: u32, tol: f64) -> Vec<CheckLine> {
    const S: &str = "unitarity";
    let mut defect = [Tally::new(), Tally::new()];
    let mut unimodular = Tally::new();
    let mut evenness = Tally::new();
    for m in 1..=m_max {
        for (model, x, phi) in pt_grid(m) {
            let win = model.window();
            for (k, kind) in [SolverKind::Matching, SolverKind::Transfer]
                .into_iter()
                .enumerate()
            {
                match solve(&win, phi, kind) {
                    Ok(rep) => {
                        defect[k].record(rep.amplitudes.defect().abs());
                        if k == 0 {
                            unimodular.record(difference_defect(&rep.amplitudes).abs());
                        }
                    }
                    Err(e) => defect[k].error(&e),
                }
            }
            if x > 0.0 {
                let mirror = ModelFamily::pt_delta_pair(m, -x).expect("M >= 1").window();
                match solve_matching(&win, phi).and_then(|a| {
                    solve_matching(&mirror, phi).map(|b| a.amplitudes.max_delta(&b.amplitudes))
                }) {
                    Ok(d) => evenness.record(d),
                    Err(e) => evenness.error(&e),
                }
            }
        }
    }
    let [dm, dt] = defect;
    let mut lines = vec![
        dm.line(S, format!("pt-pair |defect|, matching, M<={m_max}"), tol),
        dt.line(S, format!("pt-pair |defect|, transfer, M<={m_max}"), tol),
        unimodular.line(S, format!("pt-pair ||T-R| - 1|, M<={m_max}"), tol),
        evenness.line(S, format!("pt-pair R, T even in x, M<={m_max}"), tol),
    ];

    // ultralocal: loss for a > 0, gain for a < 0
    let mut mismatches = Tally::new();
    for a in default_coupling_grid().into_iter().filter(|a| *a != 0.0) {
        for phi in default_phi_grid() {
            match solve_matching(&build_ultralocal(a), phi) {
                Ok(rep) => {
                    let d = rep.amplitudes.defect();
                    mismatches.record(0.0);
                    if d.signum() != -a.signum() {
                        mismatches.worst += 1.0;
                    }
                }
                Err(e) => mismatches.error(&e),
            }
        }
    }
    lines.push(mismatches.line(S, "ultralocal sign(defect) = -sign(a), mismatch count", 0.0));
    lines
}

/// Random real nearest-neighbour window with entries in `[-0.9, 0.9]`.
pub fn random_tridiagonal_window(rng: &mut impl Rng, width: usize) -> InteractionWindow {
    let lo = rng.gen_range(-8..=8);
    let hi = lo + width as i64 - 1;
    let mut w = InteractionWindow::new(lo, hi).expect("width >= 1");
    for i in lo..=hi {
        for j in (i - 1).max(lo)..=(i + 1).min(hi) {
            w.set(i, j, Complex64::new(rng.gen_range(-0.9..=0.9), 0.0))
                .expect("inside window");
        }
    }
    w
}

fn oracles(m_max: u32, tol: f64) -> Vec<CheckLine> {
    const S: &str = "oracles";
    let cv = cross_validate(m_max, tol);
    let mut lines = vec![
        CheckLine {
            suite: S,
            name: format!("pt-pair matching vs transfer, M<={m_max}"),
            worst: cv.worst_solver_delta,
            tol,
            points: cv.points,
            skipped_singular: cv.singular.len(),
            passed: cv.failures.is_empty() && cv.worst_solver_delta <= tol,
        },
        CheckLine {
            suite: S,
            name: format!("pt-pair closed form vs solvers, M<={}", m_max.min(3)),
            worst: cv.worst_closed_form_delta,
            tol,
            points: cv.points,
            skipped_singular: cv.singular.len(),
            passed: cv.failures.is_empty() && cv.worst_closed_form_delta <= tol,
        },
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca7);
    let mut t = Tally::new();
    for _ in 0..200 {
        let width = rng.gen_range(2..=15);
        let win = random_tridiagonal_window(&mut rng, width);
        for _ in 0..10 {
            let phi =
                PhiAngle::new(rng.gen_range(0.05..std::f64::consts::PI - 0.05)).expect("in band");
            match solve_matching(&win, phi).and_then(|a| {
                solve_transfer_matrix(&win, phi).map(|b| a.amplitudes.max_delta(&b.amplitudes))
            }) {
                Ok(d) => t.record(d),
                Err(e) => t.error(&e),
            }
        }
    }
    lines.push(t.line(S, "random tridiagonal windows, matching vs transfer", tol));
    lines
}

/// Runs `suite` and returns one line per check.
pub fn run_suite(suite: Suite, m_max: u32, tol: f64) -> Vec<CheckLine> {
    match suite {
        Suite::ClosedForms => closed_forms(m_max, tol),
        Suite::Unitarity => unitarity(m_max, tol),
        Suite::Oracles => oracles(m_max, tol),
        Suite::All => [Suite::ClosedForms, Suite::Unitarity, Suite::Oracles]
            .into_iter()
            .flat_map(|s| run_suite(s, m_max, tol))
            .collect(),
    }
}
