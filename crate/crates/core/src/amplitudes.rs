use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Reflection and transmission amplitudes for left incidence.
///
/// Far left the wave is `e^{i m phi} + R e^{-i m phi}`, far right `T e^{i m phi}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringAmplitudes {
    r: Complex64,
    t: Complex64,
    prob_sum: f64,
    defect: f64,
}

impl ScatteringAmplitudes {
    pub fn new(r: Complex64, t: Complex64) -> Self {
        let prob_sum = r.norm_sqr() + t.norm_sqr();
        ScatteringAmplitudes {
            r,
            t,
            prob_sum,
            defect: prob_sum - 1.0,
        }
    }

    #[inline]
    pub fn r(&self) -> Complex64 {
        self.r
    }

    #[inline]
    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn reflectance(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn transmittance(&self) -> f64 {
        self.t.norm_sqr()
    }

    /// `|R|^2 + |T|^2`.
    pub fn prob_sum(&self) -> f64 {
        self.prob_sum
    }

    /// `|R|^2 + |T|^2 - 1`; zero when probability is conserved.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// Largest componentwise distance to `other` in R and T.
    pub fn max_delta(&self, other: &ScatteringAmplitudes) -> f64 {
        (self.r - other.r).norm().max((self.t - other.t).norm())
    }
}

/// Wave function values on `lo_ext..=hi_ext`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunctionWindow {
    lo_ext: i64,
    hi_ext: i64,
    values: Vec<Complex64>,
}

impl WaveFunctionWindow {
    /// Panics if `values.len() != hi_ext - lo_ext + 1`.
    pub fn new(lo_ext: i64, values: Vec<Complex64>) -> Self {
        assert!(!values.is_empty(), "wave function window cannot be empty");
        let hi_ext = lo_ext + values.len() as i64 - 1;
        WaveFunctionWindow {
            lo_ext,
            hi_ext,
            values,
        }
    }

    pub fn lo_ext(&self) -> i64 {
        self.lo_ext
    }

    pub fn hi_ext(&self) -> i64 {
        self.hi_ext
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, m: i64) -> Option<Complex64> {
        if m < self.lo_ext || m > self.hi_ext {
            None
        } else {
            Some(self.values[(m - self.lo_ext) as usize])
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        (self.lo_ext..).zip(self.values.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn free_amplitudes() {
        let a = ScatteringAmplitudes::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        assert_eq!(a.prob_sum(), 1.0);
        assert_eq!(a.defect(), 0.0);
    }

    #[test]
    fn window_lookup() {
        let w = WaveFunctionWindow::new(-2, vec![Complex64::new(1.0, 0.0); 5]);
        assert_eq!(w.hi_ext(), 2);
        assert!(w.get(-3).is_none());
        assert!(w.get(2).is_some());
        assert_eq!(w.iter().count(), 5);
    }

    proptest! {
        #[test]
        fn defect_is_prob_sum_minus_one(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0) {
            let s = ScatteringAmplitudes::new(Complex64::new(a, b), Complex64::new(c, d));
            prop_assert!(s.prob_sum() >= 0.0);
            prop_assert_eq!(s.defect(), s.prob_sum() - 1.0);
        }
    }
}
