//! Parameter sweeps, unitarity summaries and solver cross-checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitudes::ScatteringAmplitudes;
use crate::closed_form::closed_form;
use crate::error::{Error, Result};
use crate::lattice::{energy_from_phi, LatticeConvention, PhiAngle};
use crate::linalg::PIVOT_TOL;
use crate::model::ModelFamily;
use crate::solver::{solve, SolverKind, RESIDUAL_TOL};
use crate::window::InteractionWindow;

/// Column names of the sweep table, in order.
pub const CSV_HEADER: [&str; 13] = [
    "model", "M", "coupling", "phi", "E", "reR", "imR", "reT", "imT", "prob_sum", "defect",
    "solver", "residual",
];

/// Couplings `-0.9, -0.8, ..., 0.9`.
pub fn default_coupling_grid() -> Vec<f64> {
    (-9..=9).map(|k| k as f64 / 10.0).collect()
}

/// 50 angles evenly spread over `[0.05, pi - 0.05]`.
pub fn default_phi_grid() -> Vec<PhiAngle> {
    PhiAngle::linspace(0.05, PI - 0.05, 50).expect("grid inside (0, pi)")
}

/// Which family a sweep runs over. Couplings enter as `x`, `a`, or as a scale
/// factor on a custom window.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelTemplate {
    PtDeltaPair,
    Ultralocal,
    Custom(InteractionWindow),
}

impl ModelTemplate {
    pub fn tag(&self) -> &'static str {
        match self {
            ModelTemplate::PtDeltaPair => "pt-pair",
            ModelTemplate::Ultralocal => "ultralocal",
            ModelTemplate::Custom(_) => "custom",
        }
    }

    fn instantiate(&self, m: u32, coupling: f64) -> Result<ModelFamily> {
        match self {
            ModelTemplate::PtDeltaPair => ModelFamily::pt_delta_pair(m, coupling),
            ModelTemplate::Ultralocal => ModelFamily::ultralocal(coupling),
            ModelTemplate::Custom(w) => Ok(ModelFamily::Custom(w.scaled(coupling))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: ModelTemplate,
    pub couplings: Vec<f64>,
    pub phis: Vec<PhiAngle>,
    /// Distances `M`; only read for the PT pair.
    pub m_list: Vec<u32>,
    pub solvers: Vec<SolverKind>,
    pub convention: LatticeConvention,
}

impl SweepSpec {
    pub fn new(model: ModelTemplate) -> Self {
        SweepSpec {
            model,
            couplings: Vec::new(),
            phis: Vec::new(),
            m_list: Vec::new(),
            solvers: vec![SolverKind::Matching],
            convention: LatticeConvention::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidModel(msg.to_string()));
        if self.couplings.is_empty() {
            return bad("coupling grid is empty");
        }
        if self.couplings.iter().any(|c| !c.is_finite()) {
            return bad("coupling grid contains a non-finite value");
        }
        if self.phis.is_empty() {
            return bad("phi grid is empty");
        }
        if self.solvers.is_empty() {
            return bad("no solver selected");
        }
        if self.model == ModelTemplate::PtDeltaPair {
            if self.m_list.is_empty() {
                return bad("M list is empty");
            }
            if self.m_list.contains(&0) {
                return bad("M must be at least 1");
            }
        }
        Ok(())
    }

    fn distances(&self) -> Vec<u32> {
        match self.model {
            ModelTemplate::PtDeltaPair => self.m_list.clone(),
            _ => vec![0],
        }
    }

    /// Number of (grid point, solver) pairs.
    pub fn len(&self) -> usize {
        self.distances().len() * self.couplings.len() * self.phis.len() * self.solvers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub model: &'static str,
    pub m: u32,
    pub coupling: f64,
    pub phi: f64,
    pub energy: f64,
    pub amplitudes: ScatteringAmplitudes,
    pub solver: SolverKind,
    /// `None` for closed-form rows, which carry no wave function.
    pub residual: Option<f64>,
}

impl SweepRow {
    pub fn defect(&self) -> f64 {
        self.amplitudes.defect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepError {
    pub model: String,
    #[serde(rename = "M")]
    pub m: u32,
    pub coupling: f64,
    pub phi: f64,
    pub solver: SolverKind,
    pub singular: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub tool_version: String,
    pub convention: LatticeConvention,
    pub residual_tol: f64,
    pub pivot_tol: f64,
}

impl SweepMeta {
    fn new(convention: LatticeConvention) -> Self {
        SweepMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            convention,
            residual_tol: RESIDUAL_TOL,
            pivot_tol: PIVOT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub meta: SweepMeta,
    pub rows: Vec<SweepRow>,
    pub errors: Vec<SweepError>,
}

/// One CSV/JSON record. Field names are the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRecord {
    pub model: String,
    #[serde(rename = "M")]
    pub m: u32,
    pub coupling: f64,
    pub phi: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "reR")]
    pub re_r: f64,
    #[serde(rename = "imR")]
    pub im_r: f64,
    #[serde(rename = "reT")]
    pub re_t: f64,
    #[serde(rename = "imT")]
    pub im_t: f64,
    pub prob_sum: f64,
    pub defect: f64,
    pub solver: SolverKind,
    pub residual: Option<f64>,
}

impl From<&SweepRow> for SweepRecord {
    fn from(row: &SweepRow) -> Self {
        let a = &row.amplitudes;
        SweepRecord {
            model: row.model.to_string(),
            m: row.m,
            coupling: row.coupling,
            phi: row.phi,
            energy: row.energy,
            re_r: a.r().re,
            im_r: a.r().im,
            re_t: a.t().re,
            im_t: a.t().im,
            prob_sum: a.prob_sum(),
            defect: a.defect(),
            solver: row.solver,
            residual: row.residual,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
struct JsonTable<'a> {
    meta: &'a SweepMeta,
    rows: Vec<SweepRecord>,
    errors: &'a [SweepError],
}

impl SweepTable {
    pub fn records(&self) -> Vec<SweepRecord> {
        self.rows.iter().map(SweepRecord::from).collect()
    }

    /// Writes the header and one line per row. Dot decimals, LF endings.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            let a = &row.amplitudes;
            w.write_record([
                row.model.to_string(),
                row.m.to_string(),
                format_float(row.coupling),
                format_float(row.phi),
                format_float(row.energy),
                format_float(a.r().re),
                format_float(a.r().im),
                format_float(a.t().re),
                format_float(a.t().im),
                format_float(a.prob_sum()),
                format_float(a.defect()),
                row.solver.tag().to_string(),
                row.residual.map(format_float).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> serde_json::Result<()> {
        let doc = JsonTable {
            meta: &self.meta,
            rows: self.records(),
            errors: &self.errors,
        };
        serde_json::to_writer_pretty(out, &doc)
    }

    pub fn max_abs_defect(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.defect().abs())
            .fold(0.0, f64::max)
    }
}

fn evaluate(
    model: &ModelFamily,
    phi: PhiAngle,
    kind: SolverKind,
) -> Result<(ScatteringAmplitudes, Option<f64>)> {
    match kind {
        SolverKind::ClosedForm => closed_form(model, phi).map(|a| (a, None)),
        _ => solve(&model.window(), phi, kind).map(|rep| (rep.amplitudes, Some(rep.residual_max))),
    }
}

/// Runs every (M, coupling, phi, solver) combination of `spec`.
///
/// Points are evaluated in parallel on the current rayon pool; rows come back
/// in grid order. Failed points land in `errors` instead of `rows`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mut points = Vec::with_capacity(spec.len());
    for m in spec.distances() {
        for &coupling in &spec.couplings {
            for &phi in &spec.phis {
                for &solver in &spec.solvers {
                    points.push((m, coupling, phi, solver));
                }
            }
        }
    }
    let tag = spec.model.tag();
    let outcomes: Vec<std::result::Result<SweepRow, SweepError>> = points
        .par_iter()
        .map(|&(m, coupling, phi, solver)| {
            let res = spec
                .model
                .instantiate(m, coupling)
                .and_then(|model| evaluate(&model, phi, solver));
            match res {
                Ok((amplitudes, residual)) => Ok(SweepRow {
                    model: tag,
                    m,
                    coupling,
                    phi: phi.value(),
                    energy: energy_from_phi(phi, spec.convention),
                    amplitudes,
                    solver,
                    residual,
                }),
                Err(e) => Err(SweepError {
                    model: tag.to_string(),
                    m,
                    coupling,
                    phi: phi.value(),
                    solver,
                    singular: e.is_singular(),
                    reason: e.to_string(),
                }),
            }
        })
        .collect();

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => rows.push(r),
            Err(e) => errors.push(e),
        }
    }
    Ok(SweepTable {
        meta: SweepMeta::new(spec.convention),
        rows,
        errors,
    })
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepTable> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidModel(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep(spec))
}

/// Counts of `sign(defect)` against `sign(coupling)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern {
    /// Defect and coupling of opposite sign: gain for negative coupling, loss for positive.
    pub opposite: usize,
    pub same: usize,
    /// Zero coupling or `|defect| <= tol`.
    pub neutral: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelUnitarity {
    pub rows: usize,
    pub max_abs_defect: f64,
    pub mean_abs_defect: f64,
    pub violations: usize,
    pub sign_pattern: SignPattern,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub tol: f64,
    pub models: BTreeMap<String, ModelUnitarity>,
}

impl UnitarityReport {
    pub fn total_violations(&self) -> usize {
        self.models.values().map(|m| m.violations).sum()
    }
}

/// Per-model defect statistics; a row violates when `|defect| > tol`.
pub fn unitarity_report(table: &SweepTable, tol: f64) -> UnitarityReport {
    let mut models: BTreeMap<String, ModelUnitarity> = BTreeMap::new();
    for row in &table.rows {
        let e = models
            .entry(row.model.to_string())
            .or_insert(ModelUnitarity {
                rows: 0,
                max_abs_defect: 0.0,
                mean_abs_defect: 0.0,
                violations: 0,
                sign_pattern: SignPattern::default(),
            });
        let d = row.defect();
        e.rows += 1;
        e.max_abs_defect = e.max_abs_defect.max(d.abs());
        e.mean_abs_defect += d.abs();
        if d.abs() > tol {
            e.violations += 1;
        }
        let p = &mut e.sign_pattern;
        if row.coupling == 0.0 || d.abs() <= tol {
            p.neutral += 1;
        } else if (d > 0.0) != (row.coupling > 0.0) {
            p.opposite += 1;
        } else {
            p.same += 1;
        }
    }
    for m in models.values_mut() {
        m.mean_abs_defect /= m.rows as f64;
    }
    UnitarityReport { tol, models }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    #[serde(rename = "M")]
    pub m: u32,
    pub x: f64,
    pub phi: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub passed: bool,
    pub tol: f64,
    pub points: usize,
    /// Closed form against either solver, `M <= 3`.
    pub worst_closed_form_delta: f64,
    /// Matching against transfer.
    pub worst_solver_delta: f64,
    pub max_abs_defect: f64,
    pub singular: Vec<SingularPoint>,
    pub failures: Vec<String>,
}

/// [`cross_validate_on`] over the default coupling and angle grids.
pub fn cross_validate(m_max: u32, tol: f64) -> CrossValidation {
    cross_validate_on(m_max, tol, &default_coupling_grid(), &default_phi_grid())
}

/// Compares closed forms, the matching solver and the transfer solver on the
/// PT pair for every `M` in `1..=m_max`.
///
/// Closed forms take part for `M <= 3`; above that the two solvers are
/// compared with each other and the defect is checked. Singular points are
/// listed and left out of the verdict.
pub fn cross_validate_on(
    m_max: u32,
    tol: f64,
    couplings: &[f64],
    phis: &[PhiAngle],
) -> CrossValidation {
    let mut grid = Vec::new();
    for m in 1..=m_max {
        for &x in couplings {
            for &phi in phis {
                grid.push((m, x, phi));
            }
        }
    }

    enum Outcome {
        Checked { cf: f64, solvers: f64, defect: f64 },
        Singular(SingularPoint),
        Failed(String),
    }

    let outcomes: Vec<Outcome> = grid
        .par_iter()
        .map(|&(m, x, phi)| {
            let model = match ModelFamily::pt_delta_pair(m, x) {
                Ok(model) => model,
                Err(e) => return Outcome::Failed(e.to_string()),
            };
            let win = model.window();
            let mut found = Vec::with_capacity(3);
            for kind in [SolverKind::Matching, SolverKind::Transfer] {
                match solve(&win, phi, kind) {
                    Ok(rep) => found.push(rep.amplitudes),
                    Err(e) if e.is_singular() => {
                        return Outcome::Singular(SingularPoint {
                            m,
                            x,
                            phi: phi.value(),
                            reason: e.to_string(),
                        })
                    }
                    Err(e) => {
                        return Outcome::Failed(format!("M={m} x={x} phi={}: {e}", phi.value()))
                    }
                }
            }
            let solvers = found[0].max_delta(&found[1]);
            let defect = found[0].defect().abs().max(found[1].defect().abs());
            let cf = if m <= 3 {
                match closed_form(&model, phi) {
                    Ok(c) => c.max_delta(&found[0]).max(c.max_delta(&found[1])),
                    Err(e) if e.is_singular() => {
                        return Outcome::Singular(SingularPoint {
                            m,
                            x,
                            phi: phi.value(),
                            reason: e.to_string(),
                        })
                    }
                    Err(e) => return Outcome::Failed(e.to_string()),
                }
            } else {
                0.0
            };
            Outcome::Checked {
                cf,
                solvers,
                defect,
            }
        })
        .collect();

    let mut cv = CrossValidation {
        passed: true,
        tol,
        points: 0,
        worst_closed_form_delta: 0.0,
        worst_solver_delta: 0.0,
        max_abs_defect: 0.0,
        singular: Vec::new(),
        failures: Vec::new(),
    };
    for o in outcomes {
        match o {
            Outcome::Checked {
                cf,
                solvers,
                defect,
            } => {
                cv.points += 1;
                cv.worst_closed_form_delta = cv.worst_closed_form_delta.max(cf);
                cv.worst_solver_delta = cv.worst_solver_delta.max(solvers);
                cv.max_abs_defect = cv.max_abs_defect.max(defect);
            }
            Outcome::Singular(p) => cv.singular.push(p),
            Outcome::Failed(msg) => cv.failures.push(msg),
        }
    }
    cv.passed = cv.failures.is_empty()
        && cv.worst_closed_form_delta <= tol
        && cv.worst_solver_delta <= tol
        && cv.max_abs_defect <= tol;
    cv
}

/// `|T - R| - 1`, zero for a unimodular difference.
pub fn difference_defect(a: &ScatteringAmplitudes) -> f64 {
    (a.t() - a.r()).norm() - 1.0
}
