//! Dense complex matrices over either backend: products, inverses,
//! rank-revealing solves, and small-matrix eigenvalues for reports.

use crate::scalar::Coeff;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("singular matrix")]
    Singular,
    #[error("inconsistent linear system, residual {0:.3e}")]
    Inconsistent(f64),
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    Shape(usize, usize, usize, usize),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<K: Coeff> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<K>,
}

impl<K: Coeff> Mat<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for j in 0..n {
            m.set(j, j, K::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, o: &Mat<K>) -> Mat<K> {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Mat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j).add(&a.mul(o.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[K]) -> Vec<K> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for j in 0..self.cols {
                    acc = acc.add(&self.get(i, j).mul(&x[j]));
                }
                acc
            })
            .collect()
    }

    pub fn conj(&self) -> Mat<K> {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = v.conj();
        }
        out
    }

    pub fn transpose(&self) -> Mat<K> {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Gauss-Jordan inverse. Exact pivots on the exact backend, partial
    /// pivoting with a relative tolerance on floats.
    pub fn inverse(&self) -> Result<Mat<K>, LinalgError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        let tol = pivot_tol::<K>(self.max_abs());
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| {
                    a.get(i, col)
                        .abs()
                        .partial_cmp(&a.get(j, col).abs())
                        .unwrap()
                })
                .unwrap();
            if a.get(piv, col).is_zero() || a.get(piv, col).abs() <= tol {
                return Err(LinalgError::Singular);
            }
            if piv != col {
                for j in 0..n {
                    let t = a.get(col, j).clone();
                    a.set(col, j, a.get(piv, j).clone());
                    a.set(piv, j, t);
                    let t = inv.get(col, j).clone();
                    inv.set(col, j, inv.get(piv, j).clone());
                    inv.set(piv, j, t);
                }
            }
            let d = a.get(col, col).inv().ok_or(LinalgError::Singular)?;
            for j in 0..n {
                a.set(col, j, a.get(col, j).mul(&d));
                inv.set(col, j, inv.get(col, j).mul(&d));
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    let v = a.get(i, j).sub(&f.mul(a.get(col, j)));
                    a.set(i, j, v);
                    let v = inv.get(i, j).sub(&f.mul(inv.get(col, j)));
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    pub fn to_c64(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_c64()).collect())
            .collect()
    }
}

fn pivot_tol<K: Coeff>(scale: f64) -> f64 {
    if K::EXACT {
        0.0
    } else {
        1e-12 * scale.max(1.0)
    }
}

/// Row-reduce `[a | b]` and solve. Returns the solution with free variables
/// set to zero plus the residual max-modulus; inconsistency beyond the rank
/// tolerance is an error carrying that residual.
pub fn solve_least_squares<K: Coeff>(
    a: &Mat<K>,
    b: &[Vec<K>],
    rank_tol: f64,
) -> Result<(Vec<Vec<K>>, f64), LinalgError> {
    let rows = a.rows;
    let cols = a.cols;
    let nrhs = b.len();
    for rhs in b {
        if rhs.len() != rows {
            return Err(LinalgError::Shape(rows, 1, rhs.len(), 1));
        }
    }
    let mut m = Mat::<K>::zero(rows, cols + nrhs);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, a.get(i, j).clone());
        }
        for (k, rhs) in b.iter().enumerate() {
            m.set(i, cols + k, rhs[i].clone());
        }
    }
    let tol = if K::EXACT { 0.0 } else { rank_tol.max(1e-300) };
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        // pick the largest pivot in this column
        let mut best = row;
        for i in row..rows {
            if m.get(i, col).abs() > m.get(best, col).abs() {
                best = i;
            }
        }
        if row >= rows || m.get(best, col).is_zero() || m.get(best, col).abs() <= tol {
            continue;
        }
        if best != row {
            for j in 0..cols + nrhs {
                let t = m.get(row, j).clone();
                m.set(row, j, m.get(best, j).clone());
                m.set(best, j, t);
            }
        }
        let d = m.get(row, col).inv().ok_or(LinalgError::Singular)?;
        for j in 0..cols + nrhs {
            m.set(row, j, m.get(row, j).mul(&d));
        }
        for i in 0..rows {
            if i == row || m.get(i, col).is_zero() {
                continue;
            }
            let f = m.get(i, col).clone();
            for j in 0..cols + nrhs {
                let v = m.get(i, j).sub(&f.mul(m.get(row, j)));
                m.set(i, j, v);
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == rows {
            break;
        }
    }
    // rows below the rank must have zero right-hand sides
    let mut residual = 0.0f64;
    for i in row..rows {
        for k in 0..nrhs {
            residual = residual.max(m.get(i, cols + k).abs());
        }
    }
    if residual > tol && (K::EXACT || residual > rank_tol) {
        return Err(LinalgError::Inconsistent(residual));
    }
    let mut sols = vec![vec![K::zero(); cols]; nrhs];
    for &(r, c) in &pivots {
        for k in 0..nrhs {
            sols[k][c] = m.get(r, cols + k).clone();
        }
    }
    Ok((sols, residual))
}

/// Eigenvalues of a small complex matrix: characteristic polynomial by
/// Faddeev-LeVerrier, roots by Durand-Kerner. Report quality only.
pub fn eigenvalues_c64(a: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = a.len();
    if n == 0 {
        return vec![];
    }
    // char poly coefficients c[0..=n], monic: c[n] = 1
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    for k in 1..=n {
        let am = mat_mul_c64(a, &m);
        let tr: Complex64 = (0..n).map(|i| am[i][i]).sum();
        let ck = -tr / (k as f64);
        for i in 0..n {
            for j in 0..n {
                m[i][j] = am[i][j];
            }
            m[i][i] += ck;
        }
        coeffs[n - k] = ck;
    }
    durand_kerner(&coeffs)
}

fn mat_mul_c64(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let v = a[i][k];
            if v.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += v * b[k][j];
            }
        }
    }
    out
}

/// Roots of a monic polynomial `sum coeffs[k] z^k` (coeffs[n] = 1).
fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return vec![];
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| radius * seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                roots[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * radius.max(1.0) {
            break;
        }
    }
    roots.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{C64, ExactC};

    #[test]
    fn exact_inverse() {
        let m = Mat::from_rows(vec![
            vec![ExactC::from_int(1), ExactC::from_int(2)],
            vec![ExactC::from_int(3), ExactC::from_int(5)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
    }

    #[test]
    fn singular_detected() {
        let m = Mat::from_rows(vec![
            vec![ExactC::from_int(1), ExactC::from_int(2)],
            vec![ExactC::from_int(2), ExactC::from_int(4)],
        ]);
        assert!(m.inverse().is_err());
    }

    #[test]
    fn solve_overdetermined_consistent() {
        // x = 3 from two consistent equations
        let a = Mat::from_rows(vec![vec![ExactC::from_int(1)], vec![ExactC::from_int(2)]]);
        let b = vec![vec![ExactC::from_int(3), ExactC::from_int(6)]];
        let (sol, res) = solve_least_squares(&a, &b, 0.0).unwrap();
        assert_eq!(sol[0][0], ExactC::from_int(3));
        assert_eq!(res, 0.0);
    }

    #[test]
    fn solve_inconsistent_reports() {
        let a = Mat::from_rows(vec![vec![ExactC::from_int(1)], vec![ExactC::from_int(1)]]);
        let b = vec![vec![ExactC::from_int(1), ExactC::from_int(2)]];
        assert!(solve_least_squares(&a, &b, 0.0).is_err());
    }

    #[test]
    fn eigenvalues_diag() {
        let m = Mat::from_rows(vec![
            vec![C64::from_int(4), C64::zero()],
            vec![C64::zero(), C64::from_ratio(1, 4)],
        ]);
        let ev = eigenvalues_c64(&m.to_c64());
        let mut mags: Vec<f64> = ev.iter().map(|z| z.norm()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((mags[0] - 0.25).abs() < 1e-10);
        assert!((mags[1] - 4.0).abs() < 1e-10);
    }
}
