//! Finite interaction windows and the PT operator.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance used when comparing an entry with its PT mirror.
const PT_TOL: f64 = 1e-12;

/// Interaction matrix `W` supported on the sites `lo..=hi`.
///
/// Entries are stored sparsely; an absent pair reads as zero. Explicit zero
/// entries are kept as given.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionWindow {
    lo: i64,
    hi: i64,
    entries: BTreeMap<(i64, i64), Complex64>,
}

impl InteractionWindow {
    /// Empty window on `lo..=hi`.
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow(format!("lo = {lo} exceeds hi = {hi}")));
        }
        Ok(InteractionWindow {
            lo,
            hi,
            entries: BTreeMap::new(),
        })
    }

    pub fn from_entries<I>(lo: i64, hi: i64, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((i64, i64), Complex64)>,
    {
        let mut w = Self::new(lo, hi)?;
        for ((i, j), v) in entries {
            w.set(i, j, v)?;
        }
        Ok(w)
    }

    /// Sets `W[i][j]`, overwriting any previous value.
    pub fn set(&mut self, i: i64, j: i64, value: Complex64) -> Result<()> {
        if !self.contains(i) || !self.contains(j) {
            return Err(Error::InvalidWindow(format!(
                "entry ({i}, {j}) lies outside [{}, {}]",
                self.lo, self.hi
            )));
        }
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::InvalidWindow(format!(
                "entry ({i}, {j}) is not finite"
            )));
        }
        self.entries.insert((i, j), value);
        Ok(())
    }

    pub fn with(mut self, i: i64, j: i64, value: impl Into<Complex64>) -> Result<Self> {
        self.set(i, j, value.into())?;
        Ok(self)
    }

    #[inline]
    pub fn lo(&self) -> i64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Number of sites covered.
    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    #[inline]
    pub fn contains(&self, site: i64) -> bool {
        self.lo <= site && site <= self.hi
    }

    #[inline]
    pub fn get(&self, i: i64, j: i64) -> Complex64 {
        self.entries.get(&(i, j)).copied().unwrap_or_default()
    }

    /// Stored entries in `(i, j)` order, including explicit zeros.
    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Entries of row `i`.
    pub fn row(&self, i: i64) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries
            .range((i, i64::MIN)..=(i, i64::MAX))
            .map(|(&(_, j), &v)| (j, v))
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries
            .values()
            .filter(|v| **v != Complex64::default())
            .count()
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count() == 0
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// First stored nonzero entry with `|i - j| > 1`, if any.
    pub fn long_range_entry(&self) -> Option<(i64, i64)> {
        self.entries
            .iter()
            .find(|(&(i, j), v)| (i - j).abs() > 1 && **v != Complex64::default())
            .map(|(&k, _)| k)
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.long_range_entry().is_none()
    }

    /// `g * W` on the same support.
    pub fn scaled(&self, g: f64) -> Self {
        InteractionWindow {
            lo: self.lo,
            hi: self.hi,
            entries: self.entries.iter().map(|(&k, &v)| (k, v * g)).collect(),
        }
    }

    /// Same entries on a wider support.
    pub fn extended(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > self.lo || hi < self.hi {
            return Err(Error::InvalidWindow(format!(
                "[{lo}, {hi}] does not contain [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(InteractionWindow {
            lo,
            hi,
            entries: self.entries.clone(),
        })
    }

    /// Half-width of the smallest parity-symmetric range `[-N, N]` containing the window.
    pub fn symmetric_extent(&self) -> i64 {
        self.lo.abs().max(self.hi.abs())
    }
}

/// Antilinear PT operator on the symmetric site range `[-n, n]`.
///
/// Acts on vectors as `(PT psi)_k = conj(psi_{-k})`, i.e. the antidiagonal unit
/// matrix followed by complex conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PtOperator {
    n: i64,
}

impl PtOperator {
    pub fn new(n: i64) -> Self {
        PtOperator { n: n.abs() }
    }

    /// Operator on the symmetric hull of `win`.
    pub fn for_window(win: &InteractionWindow) -> Self {
        Self::new(win.symmetric_extent())
    }

    pub fn extent(&self) -> i64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        (2 * self.n + 1) as usize
    }

    /// Applies PT to `psi` indexed from `-n` to `n`.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(psi.len(), self.dim(), "vector length must be 2n+1");
        psi.iter().rev().map(|z| z.conj()).collect()
    }

    /// Conjugates the window by PT: the result has entries `conj(W[-i][-j])`.
    pub fn conjugate(&self, win: &InteractionWindow) -> InteractionWindow {
        let mut out = InteractionWindow::new(-self.n, self.n).expect("symmetric range");
        for ((i, j), v) in win.entries() {
            out.set(-i, -j, v.conj())
                .expect("mirror stays inside symmetric range");
        }
        out
    }
}

/// A pair `(i, j)` where `W` and its PT mirror disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtViolation {
    pub i: i64,
    pub j: i64,
    /// `W[i][j]`.
    pub entry: Complex64,
    /// `conj(W[-i][-j])`.
    pub mirror: Complex64,
}

/// First stored entry, in `(i, j)` order, that differs from its PT mirror.
pub fn pt_violation(win: &InteractionWindow) -> Option<PtViolation> {
    let scale = 1.0 + win.max_abs();
    win.entries().find_map(|((i, j), entry)| {
        let mirror = win.get(-i, -j).conj();
        ((entry - mirror).norm() > PT_TOL * scale).then_some(PtViolation {
            i,
            j,
            entry,
            mirror,
        })
    })
}

/// Whether `W` commutes with PT on its symmetric hull.
pub fn is_pt_symmetric(win: &InteractionWindow) -> bool {
    pt_violation(win).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(InteractionWindow::new(2, 1).is_err());
        let mut w = InteractionWindow::new(0, 2).unwrap();
        assert!(w.set(0, 3, c(1.0)).is_err());
        assert!(w.set(-1, 0, c(1.0)).is_err());
        assert!(w.set(0, 0, Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn absent_entries_read_zero() {
        let w = InteractionWindow::new(-1, 1)
            .unwrap()
            .with(0, 1, 2.0)
            .unwrap();
        assert_eq!(w.get(0, 1), c(2.0));
        assert_eq!(w.get(1, 0), c(0.0));
        assert_eq!(w.get(5, 5), c(0.0));
        assert_eq!(w.row(0).collect::<Vec<_>>(), vec![(1, c(2.0))]);
    }

    #[test]
    fn tridiagonal_detection() {
        let w = InteractionWindow::new(0, 2)
            .unwrap()
            .with(0, 2, 1.0)
            .unwrap();
        assert_eq!(w.long_range_entry(), Some((0, 2)));
        let w = InteractionWindow::new(0, 2)
            .unwrap()
            .with(0, 2, 0.0)
            .unwrap();
        assert!(w.is_tridiagonal());
    }

    #[test]
    fn pt_squared_is_identity() {
        let pt = PtOperator::new(3);
        let psi: Vec<Complex64> = (0..7)
            .map(|k| Complex64::new(k as f64 * 0.3 - 1.0, (k * k) as f64 * 0.1))
            .collect();
        assert_eq!(pt.apply(&pt.apply(&psi)), psi);

        let w = InteractionWindow::new(-2, 1)
            .unwrap()
            .with(-2, 1, Complex64::new(0.3, -0.4))
            .unwrap()
            .with(0, 0, 1.5)
            .unwrap();
        let pt = PtOperator::for_window(&w);
        let back = pt.conjugate(&pt.conjugate(&w));
        for ((i, j), v) in w.entries() {
            assert_eq!(back.get(i, j), v);
        }
    }

    #[test]
    fn empty_window_is_symmetric() {
        assert!(is_pt_symmetric(&InteractionWindow::new(-3, 5).unwrap()));
    }

    #[test]
    fn real_diagonal_at_origin_is_symmetric() {
        let w = InteractionWindow::new(0, 0)
            .unwrap()
            .with(0, 0, 0.8)
            .unwrap();
        assert!(is_pt_symmetric(&w));
        let w = InteractionWindow::new(0, 0)
            .unwrap()
            .with(0, 0, Complex64::new(0.8, 0.1))
            .unwrap();
        assert!(!is_pt_symmetric(&w));
    }

    #[test]
    fn imaginary_antisymmetric_potential_is_symmetric() {
        // V_k = i k gamma is the classic PT-symmetric on-site potential.
        let mut w = InteractionWindow::new(-2, 2).unwrap();
        for k in -2..=2 {
            w.set(k, k, Complex64::new(0.0, 0.3 * k as f64)).unwrap();
        }
        assert!(is_pt_symmetric(&w));
    }

    #[test]
    fn off_center_window_compares_against_zero_mirror() {
        let w = InteractionWindow::new(2, 3)
            .unwrap()
            .with(2, 3, 1.0)
            .unwrap();
        let v = pt_violation(&w).unwrap();
        assert_eq!((v.i, v.j), (2, 3));
        assert_eq!(v.mirror, c(0.0));
    }
}
