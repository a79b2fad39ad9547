//! Dense complex LU factorisation with scaled partial pivoting.
//!
//! The matching systems are small (a few dozen unknowns at most), so a plain
//! row-major dense factorisation is all that is needed.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A pivot smaller than this fraction of its row scale marks the system singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![Complex64::default(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Panics unless every row has length `rows.len()`.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend_from_slice(row);
        }
        ComplexMatrix { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// `P A = L U` with unit-diagonal `L` stored below the diagonal of `lu`.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    min_pivot_ratio: f64,
}

impl LuFactors {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        let n = a.dim();
        if n == 0 {
            return Err(Error::SingularSystem("empty matrix".into()));
        }
        let scale: Vec<f64> = (0..n)
            .map(|i| a.row(i).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .collect();
        if let Some(i) = scale.iter().position(|&s| s == 0.0 || !s.is_finite()) {
            return Err(Error::SingularSystem(format!(
                "row {i} is zero or not finite"
            )));
        }

        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot_ratio = f64::INFINITY;

        for k in 0..n {
            let (p, ratio) = (k..n)
                .map(|i| (i, lu[(i, k)].norm() / scale[perm[i]]))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if ratio.is_nan() || ratio < PIVOT_TOL {
                return Err(Error::SingularSystem(format!(
                    "pivot {ratio:.3e} of row scale in column {k}"
                )));
            }
            min_pivot_ratio = min_pivot_ratio.min(ratio);
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != Complex64::default() {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= f * u;
                    }
                }
            }
        }
        Ok(LuFactors {
            lu,
            perm,
            min_pivot_ratio,
        })
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        assert_eq!(rhs.len(), n, "rhs length must match matrix dimension");
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let s: Complex64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: Complex64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    /// Smallest accepted pivot relative to its row scale.
    pub fn min_pivot_ratio(&self) -> f64 {
        self.min_pivot_ratio
    }

    /// `||A^{-1}||_inf`, from the columns of the explicit inverse.
    pub fn inverse_norm_inf(&self) -> f64 {
        let n = self.lu.dim();
        let mut row_sums = vec![0.0; n];
        let mut e = vec![Complex64::default(); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            for (acc, z) in row_sums.iter_mut().zip(self.solve(&e)) {
                *acc += z.norm();
            }
            e[j] = Complex64::default();
        }
        row_sums.into_iter().fold(0.0, f64::max)
    }
}

/// Solves `A x = b` by Gaussian elimination with scaled partial pivoting.
pub fn solve_complex_linear(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if b.len() != a.dim() {
        return Err(Error::SingularSystem(format!(
            "rhs has {} entries for a {}x{} matrix",
            b.len(),
            a.dim(),
            a.dim()
        )));
    }
    Ok(LuFactors::factor(a)?.solve(b))
}

/// `||A||_inf ||A^{-1}||_inf`.
pub fn condition_inf(a: &ComplexMatrix, lu: &LuFactors) -> f64 {
    a.norm_inf() * lu.inverse_norm_inf()
}
