//! Dense direct solves with a cheap conditioning estimate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Above this estimated condition number a warning is logged.
pub const CONDITION_WARNING: f64 = 1e12;

/// LU-factored square matrix.
pub struct DenseSolver {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    norm1: f64,
    n: usize,
}

impl DenseSolver {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::SolveFailure(format!(
                "matrix is {}x{}, not square",
                a.nrows(),
                a.ncols()
            )));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::SolveFailure("matrix has non-finite entries".into()));
        }
        let n = a.nrows();
        let norm1 = (0..n).map(|j| a.column(j).abs().sum()).fold(0.0, f64::max);
        Ok(Self { lu: a.lu(), norm1, n })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let b = DVector::from_column_slice(rhs);
        let x = self
            .lu
            .solve(&b)
            .ok_or_else(|| Error::SolveFailure("matrix is singular".into()))?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SolveFailure("solution has non-finite entries".into()));
        }
        Ok(x.as_slice().to_vec())
    }

    /// Lower-bound estimate of the 1-norm condition number from a few
    /// probe solves (the supplied solutions plus two fixed sign patterns).
    pub fn condition_estimate(&self, solved: &[(&[f64], &[f64])]) -> f64 {
        let mut inv_norm: f64 = 0.0;
        let l1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
        for (b, x) in solved {
            let nb = l1(b);
            if nb > 0.0 {
                inv_norm = inv_norm.max(l1(x) / nb);
            }
        }
        for pattern in 0..2 {
            let probe: Vec<f64> = (0..self.n)
                .map(|i| {
                    let s = if pattern == 0 { i % 2 } else { (i * 7 / 3) % 2 };
                    if s == 0 { 1.0 } else { -1.0 }
                })
                .collect();
            if let Ok(x) = self.solve(&probe) {
                inv_norm = inv_norm.max(l1(&x) / self.n as f64);
            } else {
                return f64::INFINITY;
            }
        }
        self.norm1 * inv_norm
    }
}

/// 2-norm condition number via singular values; for small systems only.
pub fn condition_number_svd(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 { f64::INFINITY } else { max / min }
}

/// Least-squares solve of an overdetermined system via SVD.
pub fn least_squares(a: DMatrix<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let rhs = DVector::from_column_slice(b);
    let svd = a.svd(true, true);
    let x = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::SolveFailure(e.to_string()))?;
    Ok(x.as_slice().to_vec())
}

pub(crate) fn log_if_ill_conditioned(cond: f64, what: &str) {
    if cond > CONDITION_WARNING {
        log::warn!("{what}: estimated condition number {cond:e} exceeds {CONDITION_WARNING:e}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let s = DenseSolver::new(a).unwrap();
        let x = s.solve(&[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let s = DenseSolver::new(a).unwrap();
        assert!(matches!(s.solve(&[1.0, 0.0]), Err(Error::SolveFailure(_))) || {
            // partial pivoting may leave a tiny pivot instead of an exact zero
            s.condition_estimate(&[]) > 1e12
        });
    }
}
