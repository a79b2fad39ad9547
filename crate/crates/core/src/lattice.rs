//! Energy parametrisation of lattice plane waves.
//!
//! A plane wave `e^{i m phi}` solves the free lattice equation at
//! `E = (2 - 2 cos phi) / h^2` when the kinetic term carries the `2/h^2`
//! diagonal, and at `E = -2 cos phi / h^2` without it. Both forms describe the
//! same physics and differ by a constant shift.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance from 0 and pi below which an angle is rejected. The incoming and
/// reflected plane waves become linearly dependent at the band edges.
pub const PHI_GUARD: f64 = 1e-8;

/// Energy parameter `phi` in the open interval `(0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PhiAngle(f64);

impl PhiAngle {
    pub fn new(phi: f64) -> Result<Self> {
        if phi.is_finite() && phi > PHI_GUARD && phi < PI - PHI_GUARD {
            Ok(PhiAngle(phi))
        } else {
            Err(Error::InvalidPhi(phi))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `2 cos phi`, the diagonal of every matching row.
    #[inline]
    pub fn two_cos(self) -> f64 {
        2.0 * self.0.cos()
    }

    /// `n` angles evenly spread over `[lo, hi]`, both ends included.
    pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<PhiAngle>> {
        match n {
            0 => Ok(Vec::new()),
            1 => Ok(vec![PhiAngle::new(lo)?]),
            _ => (0..n)
                .map(|k| PhiAngle::new(lo + (hi - lo) * k as f64 / (n - 1) as f64))
                .collect(),
        }
    }
}

impl<'de> Deserialize<'de> for PhiAngle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        PhiAngle::new(v).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<f64> for PhiAngle {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        PhiAngle::new(v)
    }
}

/// Lattice stepsize and choice of kinetic-energy diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeConvention {
    h: f64,
    /// `true` selects the kinetic matrix with `2/h^2` on the diagonal.
    diagonal_shift: bool,
}

impl Default for LatticeConvention {
    fn default() -> Self {
        LatticeConvention {
            h: 1.0,
            diagonal_shift: false,
        }
    }
}

impl LatticeConvention {
    pub fn new(h: f64, diagonal_shift: bool) -> Result<Self> {
        if h.is_finite() && h > 0.0 {
            Ok(LatticeConvention { h, diagonal_shift })
        } else {
            Err(Error::InvalidLattice(format!(
                "stepsize h = {h} must be positive"
            )))
        }
    }

    /// Zero-diagonal kinetic term.
    pub fn unshifted(h: f64) -> Result<Self> {
        Self::new(h, false)
    }

    /// Kinetic term with `2/h^2` on the diagonal.
    pub fn shifted(h: f64) -> Result<Self> {
        Self::new(h, true)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn diagonal_shift(&self) -> bool {
        self.diagonal_shift
    }

    /// Open interval of energies reachable by real `phi`.
    pub fn band(&self) -> (f64, f64) {
        let h2 = self.h * self.h;
        if self.diagonal_shift {
            (0.0, 4.0 / h2)
        } else {
            (-2.0 / h2, 2.0 / h2)
        }
    }

    pub fn label(&self) -> &'static str {
        if self.diagonal_shift {
            "shifted"
        } else {
            "unshifted"
        }
    }
}

pub fn energy_from_phi(phi: PhiAngle, conv: LatticeConvention) -> f64 {
    let shift = if conv.diagonal_shift { 2.0 } else { 0.0 };
    (shift - phi.two_cos()) / (conv.h * conv.h)
}
