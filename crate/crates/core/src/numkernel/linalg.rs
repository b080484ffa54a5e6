//! Small dense linear algebra at working precision.

use super::real::{tol, BigReal};
use crate::error::{Error, Result};

/// Dense row-major square-or-rectangular matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigReal>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigReal::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigReal::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigReal) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, x: &[BigReal]) -> Vec<BigReal> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> BigReal {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).abs()).sum::<BigReal>())
            .fold(BigReal::zero(), BigReal::max)
    }
}

/// Symmetric matrix with a single physical store (packed lower triangle),
/// so `get(i, j)` and `get(j, i)` read the same cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    order: usize,
    packed: Vec<BigReal>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        SymMatrix {
            order,
            packed: vec![BigReal::zero(); order * (order + 1) / 2],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = SymMatrix::zeros(order);
        for i in 0..order {
            m.set(i, i, BigReal::one());
        }
        m
    }

    /// Builds from `f(i, j)` evaluated on the lower triangle only.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        let mut m = SymMatrix::zeros(order);
        for i in 0..order {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    fn index(i: usize, j: usize) -> usize {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        hi * (hi + 1) / 2 + lo
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        &self.packed[Self::index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigReal) {
        self.packed[Self::index(i, j)] = v;
    }

    pub fn trace(&self) -> BigReal {
        (0..self.order).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn frobenius(&self) -> BigReal {
        let mut s = BigReal::zero();
        for i in 0..self.order {
            for j in 0..self.order {
                s += self.get(i, j).square();
            }
        }
        s.sqrt()
    }

    /// Principal submatrix on the given (sorted or unsorted) index set.
    pub fn principal(&self, keep: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(keep.len(), |i, j| self.get(keep[i], keep[j]).clone())
    }

    pub fn to_dense(&self) -> Matrix {
        Matrix::from_fn(self.order, self.order, |i, j| self.get(i, j).clone())
    }

    pub fn mul_vec(&self, x: &[BigReal]) -> Vec<BigReal> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }
}

/// Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &Matrix, b: &[BigReal]) -> Result<Vec<BigReal>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::DegenerateInput(format!(
            "solve_dense: {}x{} matrix with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let threshold = BigReal::epsilon() * (64 * n.max(1) as i64) * a.norm_inf();
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                m.get(i, col)
                    .abs()
                    .partial_cmp(&m.get(j, col).abs())
                    .expect("finite matrix entries")
            })
            .expect("non-empty range");
        let pivot = m.get(pivot_row, col).clone();
        if pivot.abs() <= threshold {
            return Err(Error::SingularSystem {
                column: col,
                pivot: pivot.to_decimal_digits(6),
            });
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m.get(col, j).clone();
                m.set(col, j, m.get(pivot_row, j).clone());
                m.set(pivot_row, j, tmp);
            }
            rhs.swap(col, pivot_row);
        }
        for i in col + 1..n {
            let factor = m.get(i, col) / &pivot;
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = m.get(i, j) - &factor * m.get(col, j);
                m.set(i, j, v);
            }
            let v = &rhs[i] - &factor * &rhs[col];
            rhs[i] = v;
        }
    }
    let mut x = vec![BigReal::zero(); n];
    for i in (0..n).rev() {
        let mut s = rhs[i].clone();
        for j in i + 1..n {
            s -= m.get(i, j) * &x[j];
        }
        x[i] = s / m.get(i, i);
    }
    Ok(x)
}

/// `true` iff the Cholesky factorisation of `m` has only positive pivots.
pub fn cholesky_pd(m: &SymMatrix) -> bool {
    let n = m.order();
    let mut l = vec![BigReal::zero(); n * n];
    for j in 0..n {
        let mut diag = m.get(j, j).clone();
        for k in 0..j {
            diag -= l[j * n + k].square();
        }
        if !diag.is_positive() {
            return false;
        }
        let ljj = diag.sqrt();
        for i in j + 1..n {
            let mut s = m.get(i, j).clone();
            for k in 0..j {
                s -= &l[i * n + k] * &l[j * n + k];
            }
            l[i * n + j] = s / &ljj;
        }
        l[j * n + j] = ljj;
    }
    true
}

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigen(m: &SymMatrix) -> Result<Vec<BigReal>> {
    Ok(sym_eigen_vectors(m)?.0)
}

/// Eigenpairs by cyclic Jacobi rotations. Values ascending; `vectors[k]` is
/// the unit eigenvector belonging to `values[k]`.
pub fn sym_eigen_vectors(m: &SymMatrix) -> Result<(Vec<BigReal>, Vec<Vec<BigReal>>)> {
    let n = m.order();
    let mut a: Vec<BigReal> = (0..n * n).map(|k| m.get(k / n, k % n).clone()).collect();
    let mut v: Vec<BigReal> = (0..n * n)
        .map(|k| if k / n == k % n { BigReal::one() } else { BigReal::zero() })
        .collect();
    let target = tol(2) * m.frobenius();

    let off = |a: &[BigReal]| -> BigReal {
        let mut s = BigReal::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].square();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenFailure { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q].clone();
                if apq.is_zero() {
                    continue;
                }
                let theta = (&a[q * n + q] - &a[p * n + p]) / (&apq * 2);
                let t = {
                    let denom = theta.abs() + (theta.square() + 1).sqrt();
                    let t = denom.recip();
                    if theta.is_negative() {
                        -t
                    } else {
                        t
                    }
                };
                let c = (t.square() + 1).sqrt().recip();
                let s = &t * &c;
                for k in 0..n {
                    let akp = a[k * n + p].clone();
                    let akq = a[k * n + q].clone();
                    a[k * n + p] = &c * &akp - &s * &akq;
                    a[k * n + q] = &s * &akp + &c * &akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k].clone();
                    let aqk = a[q * n + k].clone();
                    a[p * n + k] = &c * &apk - &s * &aqk;
                    a[q * n + k] = &s * &apk + &c * &aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p].clone();
                    let vkq = v[k * n + q].clone();
                    v[k * n + p] = &c * &vkp - &s * &vkq;
                    v[k * n + q] = &s * &vkp + &c * &vkq;
                }
            }
        }
        converged = off(&a) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| a[i * n + i].clone()).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..n).map(|k| v[k * n + col].clone()).collect())
        .collect();
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym2(a: i64, b: i64, c: i64) -> SymMatrix {
        SymMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => BigReal::from(a),
            (1, 1) => BigReal::from(c),
            _ => BigReal::from(b),
        })
    }

    #[test]
    fn single_store_symmetry() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 2, BigReal::from(7));
        assert_eq!(m.get(2, 0), &BigReal::from(7));
    }

    #[test]
    fn identity_spectrum() {
        let e = sym_eigen(&SymMatrix::identity(3)).unwrap();
        assert!(e.iter().all(|x| *x == 1));
    }

    #[test]
    fn two_by_two_spectrum() {
        let e = sym_eigen(&sym2(2, 1, 2)).unwrap();
        assert!((&e[0] - BigReal::one()).abs() < tol(2));
        assert!((&e[1] - BigReal::from(3)).abs() < tol(2));
    }

    #[test]
    fn identity_solve() {
        let b: Vec<BigReal> = [3, -1, 4].iter().map(|&v| BigReal::from(v)).collect();
        let x = solve_dense(&Matrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn singular_solve() {
        let a = Matrix::from_fn(2, 2, |_, _| BigReal::one());
        let b = vec![BigReal::one(), BigReal::one()];
        assert!(matches!(solve_dense(&a, &b), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn cholesky_verdicts() {
        assert!(cholesky_pd(&sym2(2, 1, 2)));
        assert!(!cholesky_pd(&sym2(1, 2, 1)));
    }

    #[test]
    fn eigenvectors_are_eigen() {
        let m = SymMatrix::from_fn(4, |i, j| BigReal::from(((i + 1) * (j + 2)) as i64 % 5) - 2);
        let (vals, vecs) = sym_eigen_vectors(&m).unwrap();
        for (lam, v) in vals.iter().zip(&vecs) {
            let mv = m.mul_vec(v);
            for (a, b) in mv.iter().zip(v) {
                assert!((a - lam * b).abs() < tol(3));
            }
        }
    }
}
