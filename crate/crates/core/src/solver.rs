//! Scattering solvers for an arbitrary interaction window.
//!
//! Both solvers work with the rows of `(H0 + W - E) psi = 0` written as
//!
//! ```text
//! -psi[m-1] + 2 cos(phi) psi[m] - psi[m+1] + sum_j W[m][j] psi[j] = 0
//! ```
//!
//! with the plane-wave ansatz `psi[m] = e^{i m phi} + R e^{-i m phi}` for
//! `m <= lo` and `psi[m] = T e^{i m phi}` for `m >= hi`. The matching solver
//! turns rows `lo..=hi` into one square system for `R`, the interior values and
//! `T`. The transfer solver starts from a unit outgoing wave on the right and
//! runs the rows backwards, which only works for nearest-neighbour windows.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{ScatteringAmplitudes, WaveFunctionWindow};
use crate::error::{Error, Result};
use crate::lattice::PhiAngle;
use crate::linalg::{condition_inf, ComplexMatrix, LuFactors};
use crate::window::InteractionWindow;

/// Success threshold on the row residual, relative to `1 + max|W|`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// A total hopping smaller than this in modulus counts as zero.
pub const HOPPING_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Matching,
    Transfer,
    ClosedForm,
}

impl SolverKind {
    pub fn tag(self) -> &'static str {
        match self {
            SolverKind::Matching => "matching",
            SolverKind::Transfer => "transfer",
            SolverKind::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "matching" => Ok(SolverKind::Matching),
            "transfer" => Ok(SolverKind::Transfer),
            "closed-form" | "closed_form" => Ok(SolverKind::ClosedForm),
            other => Err(format!("unknown solver '{other}'")),
        }
    }
}

/// Result of a numerical solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub amplitudes: ScatteringAmplitudes,
    /// `psi[m]` on `lo-2..=hi+2` of the anchored window.
    pub wavefunction: WaveFunctionWindow,
    /// Largest row residual over every row whose stencil fits in `wavefunction`.
    pub residual_max: f64,
    /// Infinity-norm condition number for the matching solver; product of
    /// step-matrix norms for the transfer solver.
    pub condition_estimate: f64,
    pub solver: SolverKind,
}

/// Coefficients of `psi[j]` in row `m`, merged and sorted by `j`.
pub fn row_coefficients(win: &InteractionWindow, m: i64, phi: PhiAngle) -> Vec<(i64, Complex64)> {
    let mut row: BTreeMap<i64, Complex64> = BTreeMap::new();
    row.insert(m - 1, Complex64::new(-1.0, 0.0));
    row.insert(m, Complex64::new(phi.two_cos(), 0.0));
    row.insert(m + 1, Complex64::new(-1.0, 0.0));
    for (j, w) in win.row(m) {
        *row.entry(j).or_default() += w;
    }
    row.into_iter().collect()
}

fn coefficient(row: &[(i64, Complex64)], j: i64) -> Complex64 {
    row.iter()
        .find(|(k, _)| *k == j)
        .map(|(_, c)| *c)
        .unwrap_or_default()
}

/// The window used for anchoring the ansatz: at least two sites wide.
///
/// A one-site window gains a free site on its right; the extra row is
/// satisfied by the outgoing wave, so `R` and `T` do not change.
pub fn anchored(win: &InteractionWindow) -> InteractionWindow {
    if win.lo() == win.hi() {
        win.extended(win.lo(), win.hi() + 1)
            .expect("extension contains window")
    } else {
        win.clone()
    }
}

#[inline]
fn plane(m: i64, phi: PhiAngle) -> Complex64 {
    Complex64::from_polar(1.0, m as f64 * phi.value())
}

/// First vanishing nearest-neighbour hopping of the total Hamiltonian.
fn zero_hopping(win: &InteractionWindow, phi: PhiAngle) -> Option<(i64, i64)> {
    (win.lo()..=win.hi()).find_map(|m| {
        let row = row_coefficients(win, m, phi);
        [m - 1, m + 1]
            .into_iter()
            .find(|&nb| coefficient(&row, nb).norm() < HOPPING_TOL)
            .map(|nb| (m, nb))
    })
}

/// Square system for the unknowns `[R, psi[lo+1], ..., psi[hi-1], T]`.
#[derive(Debug, Clone)]
pub struct MatchingSystem {
    lo: i64,
    hi: i64,
    pub matrix: ComplexMatrix,
    pub rhs: Vec<Complex64>,
}

impl MatchingSystem {
    /// Panics if `win` is narrower than two sites; pass it through [`anchored`] first.
    pub fn build(win: &InteractionWindow, phi: PhiAngle) -> Self {
        let (lo, hi) = (win.lo(), win.hi());
        assert!(hi > lo, "matching needs at least two sites");
        let n = (hi - lo + 1) as usize;
        let mut matrix = ComplexMatrix::zeros(n);
        let mut rhs = vec![Complex64::default(); n];
        for (r, m) in (lo..=hi).enumerate() {
            for (k, c) in row_coefficients(win, m, phi) {
                if k <= lo {
                    // e^{ik phi} is known, R multiplies e^{-ik phi}
                    matrix[(r, 0)] += c * plane(-k, phi);
                    rhs[r] -= c * plane(k, phi);
                } else if k >= hi {
                    matrix[(r, n - 1)] += c * plane(k, phi);
                } else {
                    matrix[(r, (k - lo) as usize)] += c;
                }
            }
        }
        MatchingSystem {
            lo,
            hi,
            matrix,
            rhs,
        }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.dim()
    }

    pub fn labels(&self) -> Vec<String> {
        std::iter::once("R".to_string())
            .chain((self.lo + 1..self.hi).map(|m| format!("psi[{m}]")))
            .chain(std::iter::once("T".to_string()))
            .collect()
    }
}

/// Values of `psi` on `lo-2..=hi+2` from the amplitudes and interior values.
fn assemble_wavefunction(
    lo: i64,
    hi: i64,
    phi: PhiAngle,
    amps: &ScatteringAmplitudes,
    interior: impl Fn(i64) -> Complex64,
) -> WaveFunctionWindow {
    let values = (lo - 2..=hi + 2)
        .map(|m| {
            if m <= lo {
                plane(m, phi) + amps.r() * plane(-m, phi)
            } else if m >= hi {
                amps.t() * plane(m, phi)
            } else {
                interior(m)
            }
        })
        .collect();
    WaveFunctionWindow::new(lo - 2, values)
}

fn finish(
    win: &InteractionWindow,
    phi: PhiAngle,
    amps: ScatteringAmplitudes,
    wavefunction: WaveFunctionWindow,
    condition_estimate: f64,
    solver: SolverKind,
) -> Result<SolveReport> {
    let mut report = SolveReport {
        amplitudes: amps,
        wavefunction,
        residual_max: 0.0,
        condition_estimate,
        solver,
    };
    report.residual_max = residual(win, phi, &report);
    let limit = RESIDUAL_TOL * (1.0 + win.max_abs());
    if report.residual_max.is_nan() || report.residual_max > limit {
        return Err(Error::SingularSystem(format!(
            "{solver} residual {:.3e} exceeds {limit:.1e}",
            report.residual_max
        )));
    }
    Ok(report)
}

/// Solves the matching conditions on rows `lo..=hi` as one dense system.
pub fn solve_matching(win: &InteractionWindow, phi: PhiAngle) -> Result<SolveReport> {
    let win = anchored(win);
    if win.is_tridiagonal() {
        if let Some((m, nb)) = zero_hopping(&win, phi) {
            return Err(Error::SingularSystem(format!(
                "hopping between sites {m} and {nb} vanishes"
            )));
        }
    }
    let sys = MatchingSystem::build(&win, phi);
    let lu = LuFactors::factor(&sys.matrix)?;
    let x = lu.solve(&sys.rhs);
    let n = x.len();
    let amps = ScatteringAmplitudes::new(x[0], x[n - 1]);
    let lo = win.lo();
    let psi = assemble_wavefunction(lo, win.hi(), phi, &amps, |m| x[(m - lo) as usize]);
    finish(
        &win,
        phi,
        amps,
        psi,
        condition_inf(&sys.matrix, &lu),
        SolverKind::Matching,
    )
}

/// Backward recursion through the rows of a nearest-neighbour window.
pub fn solve_transfer_matrix(win: &InteractionWindow, phi: PhiAngle) -> Result<SolveReport> {
    if let Some((i, j)) = win.long_range_entry() {
        return Err(Error::NotTridiagonal { i, j });
    }
    let win = anchored(win);
    if let Some((from, to)) = zero_hopping(&win, phi) {
        return Err(Error::ZeroHopping { from, to });
    }
    let (lo, hi) = (win.lo(), win.hi());

    // psi on lo-2..=hi+1, filled from the right with T = 1
    let len = (hi - lo + 4) as usize;
    let idx = |m: i64| (m - (lo - 2)) as usize;
    let mut psi = vec![Complex64::default(); len];
    psi[idx(hi + 1)] = plane(hi + 1, phi);
    psi[idx(hi)] = plane(hi, phi);
    let mut growth = 1.0;
    for m in (lo - 1..=hi).rev() {
        let row = row_coefficients(&win, m, phi);
        let sub = coefficient(&row, m - 1);
        let diag = coefficient(&row, m);
        let sup = coefficient(&row, m + 1);
        psi[idx(m - 1)] = -(diag * psi[idx(m)] + sup * psi[idx(m + 1)]) / sub;
        growth *= ((diag.norm() + sup.norm()) / sub.norm()).max(1.0);
    }

    // psi[m] = alpha e^{i m phi} + beta e^{-i m phi} on the free left side
    let (a, b) = (psi[idx(lo - 1)], psi[idx(lo - 2)]);
    let det = Complex64::new(0.0, 2.0 * phi.value().sin());
    let alpha = (a * plane(-(lo - 2), phi) - b * plane(-(lo - 1), phi)) / det;
    let beta = (b * plane(lo - 1, phi) - a * plane(lo - 2, phi)) / det;
    let scale = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if alpha.norm().is_nan() || alpha.norm() <= 1e-14 * scale {
        return Err(Error::SingularSystem(
            "incoming amplitude vanishes (spectral singularity)".into(),
        ));
    }
    let amps = ScatteringAmplitudes::new(beta / alpha, alpha.inv());
    let wf = assemble_wavefunction(lo, hi, phi, &amps, |m| psi[idx(m)] / alpha);
    finish(&win, phi, amps, wf, growth, SolverKind::Transfer)
}

/// Dispatches to the numerical solver named by `kind`.
///
/// `ClosedForm` is not a window solver and yields [`Error::NoClosedForm`].
pub fn solve(win: &InteractionWindow, phi: PhiAngle, kind: SolverKind) -> Result<SolveReport> {
    match kind {
        SolverKind::Matching => solve_matching(win, phi),
        SolverKind::Transfer => solve_transfer_matrix(win, phi),
        SolverKind::ClosedForm => Err(Error::NoClosedForm("an arbitrary window".into())),
    }
}

/// Largest absolute row residual of `report` over rows `lo-1..=hi+1`.
///
/// Outside the window `psi` is rebuilt from the report's `R` and `T`; interior
/// values come from the stored wave function.
pub fn residual(win: &InteractionWindow, phi: PhiAngle, report: &SolveReport) -> f64 {
    let win = anchored(win);
    let (lo, hi) = (win.lo(), win.hi());
    let amps = &report.amplitudes;
    let wf = &report.wavefunction;
    let psi = |m: i64| -> Complex64 {
        if m <= lo {
            plane(m, phi) + amps.r() * plane(-m, phi)
        } else if m >= hi {
            amps.t() * plane(m, phi)
        } else {
            wf.get(m).expect("wave function covers the window interior")
        }
    };
    (lo - 1..=hi + 1)
        .map(|m| {
            row_coefficients(&win, m, phi)
                .into_iter()
                .map(|(j, c)| c * psi(j))
                .sum::<Complex64>()
                .norm()
        })
        .fold(0.0, f64::max)
}
