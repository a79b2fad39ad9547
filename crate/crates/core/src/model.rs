//! Parametric interaction families.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::window::InteractionWindow;

/// PT-symmetric pair of point interactions a distance `2m` apart.
///
/// Four off-diagonal entries with coupling `x`:
/// `W[1-m][-m] = W[m-1][m] = x` and `W[-m][1-m] = W[m][m-1] = -x`, on the
/// sites `-m..=m`. Zero coupling gives an empty window.
pub fn build_pt_delta_pair(m: u32, x: f64) -> Result<InteractionWindow> {
    if m == 0 {
        return Err(Error::InvalidModel("PT pair needs M >= 1".into()));
    }
    let m = i64::from(m);
    let mut w = InteractionWindow::new(-m, m)?;
    if x != 0.0 {
        let x = Complex64::new(x, 0.0);
        w.set(1 - m, -m, x)?;
        w.set(m - 1, m, x)?;
        w.set(-m, 1 - m, -x)?;
        w.set(m, m - 1, -x)?;
    }
    Ok(w)
}

/// Two-site antisymmetric coupling `[[0, -a], [a, 0]]` on the sites `0` and `1`.
///
/// Not PT-symmetric for `a != 0`. Moving the block by `d` sites multiplies the
/// reflection amplitude by `e^{2 i d phi}` and leaves the transmission alone.
pub fn build_ultralocal(a: f64) -> InteractionWindow {
    let mut w = InteractionWindow::new(0, 1).expect("valid range");
    if a != 0.0 {
        w.set(0, 1, Complex64::new(-a, 0.0)).expect("in range");
        w.set(1, 0, Complex64::new(a, 0.0)).expect("in range");
    }
    w
}

/// Site of the left end of the window produced by [`build_ultralocal`].
pub const ULTRALOCAL_LO: i64 = 0;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelFamily {
    PtDeltaPair { m: u32, x: f64 },
    Ultralocal { a: f64 },
    Custom(InteractionWindow),
}

impl ModelFamily {
    pub fn pt_delta_pair(m: u32, x: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidModel("PT pair needs M >= 1".into()));
        }
        if !x.is_finite() {
            return Err(Error::InvalidModel(format!(
                "coupling x = {x} is not finite"
            )));
        }
        Ok(ModelFamily::PtDeltaPair { m, x })
    }

    pub fn ultralocal(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidModel(format!(
                "coupling a = {a} is not finite"
            )));
        }
        Ok(ModelFamily::Ultralocal { a })
    }

    pub fn window(&self) -> InteractionWindow {
        match self {
            ModelFamily::PtDeltaPair { m, x } => {
                build_pt_delta_pair(*m, *x).expect("constructor checked M")
            }
            ModelFamily::Ultralocal { a } => build_ultralocal(*a),
            ModelFamily::Custom(w) => w.clone(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ModelFamily::PtDeltaPair { .. } => "pt-pair",
            ModelFamily::Ultralocal { .. } => "ultralocal",
            ModelFamily::Custom(_) => "custom",
        }
    }

    /// `M` for the PT pair, 0 otherwise.
    pub fn distance(&self) -> u32 {
        match self {
            ModelFamily::PtDeltaPair { m, .. } => *m,
            _ => 0,
        }
    }

    /// The real coupling, or 1 for a custom window.
    pub fn coupling(&self) -> f64 {
        match self {
            ModelFamily::PtDeltaPair { x, .. } => *x,
            ModelFamily::Ultralocal { a } => *a,
            ModelFamily::Custom(_) => 1.0,
        }
    }

    /// Couplings at which a hopping of the total Hamiltonian vanishes.
    ///
    /// `|x| = 1` for the PT pair; `|a| = 1` for the ultralocal block, where
    /// `a = 1` also zeroes the denominator of the closed-form probability sum.
    pub fn is_flagged_singular(&self) -> bool {
        match self {
            ModelFamily::PtDeltaPair { x, .. } => x.abs() == 1.0,
            ModelFamily::Ultralocal { a } => a.abs() == 1.0,
            ModelFamily::Custom(_) => false,
        }
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelFamily::PtDeltaPair { m, x } => write!(f, "pt-pair(M={m}, x={x})"),
            ModelFamily::Ultralocal { a } => write!(f, "ultralocal(a={a})"),
            ModelFamily::Custom(w) => write!(f, "custom[{}, {}]", w.lo(), w.hi()),
        }
    }
}
