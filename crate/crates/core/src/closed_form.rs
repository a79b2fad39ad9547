//! Exact amplitude formulas for the small PT pairs and the ultralocal block.
//!
//! The PT-pair forms are ratios of complex conjugates, `(1 - i t)/(1 + i t)`
//! with real `t`, so they are unimodular by construction. They serve as ground
//! truth for the numerical solvers.
//!
//! For `M = 2` the sum and difference of the amplitudes are
//! `T + R = f(alpha)`, `T - R = f(lambda)` with
//! `lambda = x^2 sin 2phi / (1 + x^2 cos 2phi)`. The same `lambda` is exposed as
//! `beta`: it is the rate that makes `R` vanish at zero coupling.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitudes::ScatteringAmplitudes;
use crate::error::{Error, Result};
use crate::lattice::PhiAngle;
use crate::model::{ModelFamily, ULTRALOCAL_LO};

/// Denominators smaller than this in modulus are treated as zero.
const DENOM_TOL: f64 = 1e-14;

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// `(1 - i t)/(1 + i t)`.
fn cayley(t: f64) -> Complex64 {
    Complex64::new(1.0, -t) / Complex64::new(1.0, t)
}

fn nonzero(d: f64, what: &str) -> Result<f64> {
    if d.abs() < DENOM_TOL || !d.is_finite() {
        Err(Error::SingularCoupling(format!("{what} vanishes")))
    } else {
        Ok(d)
    }
}

fn nonzero_c(d: Complex64, what: &str) -> Result<Complex64> {
    if d.norm() < DENOM_TOL || !d.is_finite() {
        Err(Error::SingularCoupling(format!("{what} vanishes")))
    } else {
        Ok(d)
    }
}

/// Real rates appearing in the closed forms, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormParams {
    /// `x^2/(1-x^2) cot phi` (M = 1).
    pub a: Option<f64>,
    /// `x^2 sin 2phi / (1 + x^2 cos 2phi)` (M = 2, `T - R`).
    pub lambda: Option<f64>,
    /// `x^2 cos 2phi cot phi / (1 - 2 x^2 cos^2 phi)` (M = 2, `T + R`).
    pub alpha: Option<f64>,
    /// Equal to `lambda`.
    pub beta: Option<f64>,
    /// `2 x^2 sin 3phi cos phi / (1 + 2 x^2 cos 3phi cos phi)` (M = 3, `T - R`).
    pub gamma: Option<f64>,
    /// `a^4 / (2 (1-a)(1 - cos 2phi))` with `a = x` (ultralocal probability sum).
    pub u: Option<f64>,
}

impl ClosedFormParams {
    /// Each rate is `None` where its denominator vanishes.
    pub fn new(x: f64, phi: PhiAngle) -> Self {
        let p = phi.value();
        let x2 = x * x;
        let cot = p.cos() / p.sin();
        let lambda = nonzero(1.0 + x2 * (2.0 * p).cos(), "")
            .ok()
            .map(|d| x2 * (2.0 * p).sin() / d);
        ClosedFormParams {
            a: nonzero(1.0 - x2, "").ok().map(|d| x2 / d * cot),
            lambda,
            alpha: nonzero(1.0 - 2.0 * x2 * p.cos().powi(2), "")
                .ok()
                .map(|d| x2 * (2.0 * p).cos() * cot / d),
            beta: lambda,
            gamma: nonzero(1.0 + 2.0 * x2 * (3.0 * p).cos() * p.cos(), "")
                .ok()
                .map(|d| 2.0 * x2 * (3.0 * p).sin() * p.cos() / d),
            u: ultralocal_u(x, phi).ok(),
        }
    }
}

/// PT pair at `M = 1`: `T = 1/(1 + iA)`, `R = -iA/(1 + iA)`.
pub fn cf_m1(x: f64, phi: PhiAngle) -> Result<ScatteringAmplitudes> {
    let p = phi.value();
    let a = x * x / nonzero(1.0 - x * x, "1 - x^2")? * (p.cos() / p.sin());
    let den = Complex64::new(1.0, a);
    Ok(ScatteringAmplitudes::new(-i() * a / den, den.inv()))
}

/// PT pair at `M = 2`: `2R = f(alpha) - f(beta)`, `2T = f(alpha) + f(beta)`.
pub fn cf_m2(x: f64, phi: PhiAngle) -> Result<ScatteringAmplitudes> {
    let p = phi.value();
    let x2 = x * x;
    let alpha = x2 * (2.0 * p).cos() * (p.cos() / p.sin())
        / nonzero(1.0 - 2.0 * x2 * p.cos().powi(2), "1 - 2x^2 cos^2 phi")?;
    let beta = x2 * (2.0 * p).sin() / nonzero(1.0 + x2 * (2.0 * p).cos(), "1 + x^2 cos 2phi")?;
    let (fa, fb) = (cayley(alpha), cayley(beta));
    Ok(ScatteringAmplitudes::new((fa - fb) / 2.0, (fa + fb) / 2.0))
}

/// PT pair at `M = 3`, from the displayed ratios for `T - R` and `T + R`.
pub fn cf_m3(x: f64, phi: PhiAngle) -> Result<ScatteringAmplitudes> {
    let p = phi.value();
    let x2 = x * x;
    let c = p.cos();
    let diff = (1.0 + 2.0 * x2 * cis(-3.0 * p) * c)
        / nonzero_c(
            1.0 + 2.0 * x2 * cis(3.0 * p) * c,
            "1 + 2x^2 e^{3i phi} cos phi",
        )?;
    let num = 1.0 - cis(p) * c - x2 * cis(-2.0 * p) * (2.0 * p).cos();
    let den = 1.0 - cis(-p) * c - x2 * cis(2.0 * p) * (2.0 * p).cos();
    let sum = -cis(-2.0 * p) * num / nonzero_c(den, "T + R denominator")?;
    Ok(ScatteringAmplitudes::new(
        (sum - diff) / 2.0,
        (sum + diff) / 2.0,
    ))
}

/// Ultralocal block with its left site at `-1`:
/// `R = -a^2/D`, `T = (1-a)(1 - e^{2i phi})/D`, `D = 1 - (1-a^2) e^{2i phi}`.
pub fn cf_ultralocal(a: f64, phi: PhiAngle) -> Result<ScatteringAmplitudes> {
    let e2 = cis(2.0 * phi.value());
    let delta = nonzero_c(1.0 - (1.0 - a * a) * e2, "Delta")?;
    Ok(ScatteringAmplitudes::new(
        Complex64::new(-a * a, 0.0) / delta,
        (1.0 - a) * (1.0 - e2) / delta,
    ))
}

/// [`cf_ultralocal`] for the block placed on the sites `lo` and `lo + 1`.
///
/// Shifting by `d` sites multiplies `R` by `e^{2 i d phi}`.
pub fn cf_ultralocal_at(a: f64, phi: PhiAngle, lo: i64) -> Result<ScatteringAmplitudes> {
    let base = cf_ultralocal(a, phi)?;
    let shift = cis(2.0 * (lo + 1) as f64 * phi.value());
    Ok(ScatteringAmplitudes::new(base.r() * shift, base.t()))
}

fn ultralocal_u(a: f64, phi: PhiAngle) -> Result<f64> {
    let d = 2.0 * nonzero(1.0 - a, "1 - a")? * (1.0 - (2.0 * phi.value()).cos());
    Ok(a.powi(4) / nonzero(d, "1 - cos 2phi")?)
}

/// `|R|^2 + |T|^2` for the ultralocal block, `(1 - q)/(1 + q)` with `q = a/(1 + U)`.
pub fn cf_ultralocal_prob_sum(a: f64, phi: PhiAngle) -> Result<f64> {
    let u = ultralocal_u(a, phi)?;
    let q = a / nonzero(1.0 + u, "1 + U")?;
    Ok((1.0 - q) / nonzero(1.0 + q, "1 + a/(1+U)")?)
}

/// Closed form for `model`, in the placement used by [`ModelFamily::window`].
pub fn closed_form(model: &ModelFamily, phi: PhiAngle) -> Result<ScatteringAmplitudes> {
    if model.is_flagged_singular() {
        return Err(Error::SingularCoupling(model.to_string()));
    }
    match model {
        ModelFamily::PtDeltaPair { m: 1, x } => cf_m1(*x, phi),
        ModelFamily::PtDeltaPair { m: 2, x } => cf_m2(*x, phi),
        ModelFamily::PtDeltaPair { m: 3, x } => cf_m3(*x, phi),
        ModelFamily::Ultralocal { a } => cf_ultralocal_at(*a, phi, ULTRALOCAL_LO),
        other => Err(Error::NoClosedForm(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn phi(v: f64) -> PhiAngle {
        PhiAngle::new(v).unwrap()
    }

    fn near(z: Complex64, re: f64, im: f64, tol: f64) -> bool {
        (z - Complex64::new(re, im)).norm() < tol
    }

    #[test]
    fn m1_examples() {
        let s = cf_m1(0.0, phi(0.8)).unwrap();
        assert_eq!(s.r(), Complex64::default());
        assert_eq!(s.t(), Complex64::new(1.0, 0.0));

        let s = cf_m1(0.5, phi(PI / 2.0)).unwrap();
        assert!(s.r().norm() < 1e-16);
        assert!(near(s.t(), 1.0, 0.0, 1e-16));

        // A = (1/3)(1/sqrt 3), T = (1 - iA)/(1 + A^2)
        let a = 1.0 / (3.0 * 3f64.sqrt());
        let p = ClosedFormParams::new(0.5, phi(PI / 3.0));
        assert!((p.a.unwrap() - a).abs() < 1e-15);
        let s = cf_m1(0.5, phi(PI / 3.0)).unwrap();
        assert!(near(s.t(), 0.9642857142857143, -0.18557687223952257, 1e-12));
        assert!(near(
            s.r(),
            -0.03571428571428571,
            -0.18557687223952257,
            1e-12
        ));
        assert!(s.defect().abs() < 1e-15);
    }

    #[test]
    fn m1_singular_at_unit_coupling() {
        assert!(matches!(
            cf_m1(1.0, phi(0.3)),
            Err(Error::SingularCoupling(_))
        ));
        assert!(matches!(
            cf_m1(-1.0, phi(0.3)),
            Err(Error::SingularCoupling(_))
        ));
    }

    #[test]
    fn m2_zero_coupling_is_free() {
        let s = cf_m2(0.0, phi(1.0)).unwrap();
        assert!(s.r().norm() < 1e-15);
        assert!(near(s.t(), 1.0, 0.0, 1e-15));
    }

    #[test]
    fn m2_conserves_probability() {
        let s = cf_m2(0.4, phi(1.1)).unwrap();
        assert!(s.defect().abs() < 1e-14);
        assert!(((s.t() - s.r()).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn m2_singular_denominator() {
        // 1 - 2 x^2 cos^2 phi = 0 at x^2 = 1/(2 cos^2 phi)
        let p = phi(0.5);
        let x = (0.5 / p.value().cos().powi(2)).sqrt();
        assert!(matches!(cf_m2(x, p), Err(Error::SingularCoupling(_))));
    }

    #[test]
    fn m3_examples() {
        let s = cf_m3(0.0, phi(1.3)).unwrap();
        assert!(((s.t() - s.r()).norm() - 1.0).abs() < 1e-15);
        assert!(s.defect().abs() < 1e-14);
        let s = cf_m3(0.6, phi(0.9)).unwrap();
        assert!(s.defect().abs() < 1e-13);
    }

    #[test]
    fn gamma_matches_difference_ratio() {
        let (x, p) = (0.6, phi(0.9));
        let s = cf_m3(x, p).unwrap();
        let g = ClosedFormParams::new(x, p).gamma.unwrap();
        assert!((s.t() - s.r() - cayley(g)).norm() < 1e-14);
    }

    #[test]
    fn ultralocal_examples() {
        let s = cf_ultralocal(0.0, phi(0.9)).unwrap();
        assert_eq!(s.r(), Complex64::default());
        assert!(near(s.t(), 1.0, 0.0, 1e-15));

        // Delta = 1 + 0.75 = 1.75
        let s = cf_ultralocal(0.5, phi(PI / 2.0)).unwrap();
        assert!(near(s.r(), -1.0 / 7.0, 0.0, 1e-15));
        assert!(near(s.t(), 4.0 / 7.0, 0.0, 1e-15));
        assert!((s.prob_sum() - 17.0 / 49.0).abs() < 1e-15);

        // Delta = 1.75, R = -1/7, T = 1.5 * 2 / 1.75 = 12/7
        let s = cf_ultralocal(-0.5, phi(PI / 2.0)).unwrap();
        assert!((s.prob_sum() - 145.0 / 49.0).abs() < 1e-14);
    }

    #[test]
    fn ultralocal_sum_formula_examples() {
        assert_eq!(cf_ultralocal_prob_sum(0.0, phi(0.7)).unwrap(), 1.0);
        let p = phi(PI / 2.0);
        assert!((ClosedFormParams::new(0.5, p).u.unwrap() - 0.03125).abs() < 1e-16);
        assert!((cf_ultralocal_prob_sum(0.5, p).unwrap() - 17.0 / 49.0).abs() < 1e-14);
        assert!((cf_ultralocal_prob_sum(-0.5, p).unwrap() - 145.0 / 49.0).abs() < 1e-13);
        assert!(matches!(
            cf_ultralocal_prob_sum(1.0, p),
            Err(Error::SingularCoupling(_))
        ));
    }

    #[test]
    fn placement_phase() {
        let p = phi(1.0);
        let base = cf_ultralocal(0.3, p).unwrap();
        let at = cf_ultralocal_at(0.3, p, -1).unwrap();
        assert_eq!(base, at);
        let at0 = cf_ultralocal_at(0.3, p, 0).unwrap();
        assert!((at0.r() - base.r() * cis(2.0)).norm() < 1e-15);
        assert_eq!(at0.t(), base.t());
    }

    #[test]
    fn dispatch() {
        let p = phi(1.0);
        assert!(closed_form(&ModelFamily::pt_delta_pair(2, 0.3).unwrap(), p).is_ok());
        assert!(matches!(
            closed_form(&ModelFamily::pt_delta_pair(4, 0.3).unwrap(), p),
            Err(Error::NoClosedForm(_))
        ));
    }
}
