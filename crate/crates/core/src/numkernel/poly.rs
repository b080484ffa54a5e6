//! Dense real polynomials in the monomial basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::complex::Complex;
use super::real::{tol, BigReal};
use crate::error::{Error, Result};

/// Dense polynomial, coefficients in ascending order.
///
/// The highest stored coefficient is nonzero; the zero polynomial stores no
/// coefficients and has no degree.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<BigReal>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigReal::one())
    }

    pub fn constant(c: BigReal) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![BigReal::zero(), BigReal::one()])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: BigReal) -> Self {
        let mut coeffs = vec![BigReal::zero(); k];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    /// `x - root`.
    pub fn linear_factor(root: &BigReal) -> Self {
        Poly::from_coeffs(vec![-root, BigReal::one()])
    }

    /// `1 - x^2`.
    pub fn one_minus_x2() -> Self {
        Poly::from_coeffs(vec![BigReal::one(), BigReal::zero(), BigReal::from(-1)])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigReal>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigReal::from(c)).collect())
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[BigReal]) -> Self {
        roots
            .iter()
            .fold(Poly::one(), |acc, r| &acc * &Poly::linear_factor(r))
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigReal {
        self.coeffs.get(i).cloned().unwrap_or_else(BigReal::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigReal {
        self.coeffs.last().cloned().unwrap_or_else(BigReal::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| *c == 1)
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> BigReal {
        self.coeffs
            .iter()
            .fold(BigReal::zero(), |m, c| m.max(c.abs()))
    }

    /// Degree after discarding top coefficients below `rel * norm_inf`.
    pub fn effective_degree(&self, rel: &BigReal) -> Option<usize> {
        let floor = self.norm_inf() * rel;
        self.coeffs.iter().rposition(|c| c.abs() > floor)
    }

    /// Copy with every coefficient below `rel * norm_inf` set to zero.
    pub fn chop(&self, rel: &BigReal) -> Poly {
        let floor = self.norm_inf() * rel;
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| if c.abs() <= floor { BigReal::zero() } else { c.clone() })
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigReal) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn eval(&self, x: &BigReal) -> BigReal {
        let mut acc = BigReal::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let mut acc = Complex::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc.re += c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * (i as i64))
                .collect(),
        )
    }

    pub fn derivative_n(&self, k: usize) -> Poly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Taylor coefficients `f^(v)(y) / v!` for `v = 0..=k`, by repeated
    /// synthetic division.
    pub fn taylor_coeffs(&self, y: &BigReal, k: usize) -> Vec<BigReal> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(k + 1);
        for _ in 0..=k {
            if work.is_empty() {
                out.push(BigReal::zero());
                continue;
            }
            let mut acc = BigReal::zero();
            let mut quotient = vec![BigReal::zero(); work.len() - 1];
            for i in (0..work.len()).rev() {
                acc = acc * y + &work[i];
                if i > 0 {
                    quotient[i - 1] = acc.clone();
                }
            }
            out.push(acc);
            work = quotient;
        }
        out
    }

    /// Complex analogue of [`Poly::taylor_coeffs`].
    pub fn taylor_coeffs_complex(&self, z: &Complex, k: usize) -> Vec<Complex> {
        let mut work: Vec<Complex> = self.coeffs.iter().cloned().map(Complex::real).collect();
        let mut out = Vec::with_capacity(k + 1);
        for _ in 0..=k {
            if work.is_empty() {
                out.push(Complex::zero());
                continue;
            }
            let mut acc = Complex::zero();
            let mut quotient = vec![Complex::zero(); work.len() - 1];
            for i in (0..work.len()).rev() {
                acc = &(&acc * z) + &work[i];
                if i > 0 {
                    quotient[i - 1] = acc.clone();
                }
            }
            out.push(acc);
            work = quotient;
        }
        out
    }

    /// `f^(k)(y)`.
    pub fn eval_derivative(&self, k: usize, y: &BigReal) -> BigReal {
        let t = self.taylor_coeffs(y, k);
        &t[k] * BigReal::factorial(k as u32)
    }

    /// Taylor polynomial of degree `k` of `self` centred at `y`, expanded in
    /// powers of `x`.
    pub fn taylor_poly(&self, y: &BigReal, k: usize) -> Poly {
        let t = self.taylor_coeffs(y, k);
        let shift = Poly::linear_factor(y);
        // Horner in (x - y).
        let mut acc = Poly::zero();
        for c in t.iter().rev() {
            acc = &(&acc * &shift) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division: `self = divisor * quotient + remainder` with
    /// `deg remainder < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dq = divisor.degree().ok_or(Error::DegenerateDivisor)?;
        let Some(dp) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if dp < dq {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigReal::zero(); dp - dq + 1];
        for i in (0..=dp - dq).rev() {
            let q = &rem[i + dq] / &lead;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * dc;
            }
            rem[i + dq] = BigReal::zero();
            quot[i] = q;
        }
        rem.truncate(dq);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Division that is expected to be exact. The remainder must be below
    /// `tol(3) * norm_inf(self)`, otherwise a structure error naming
    /// `invariant` is returned.
    pub fn exact_div(&self, divisor: &Poly, invariant: &str) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        let scale = self.norm_inf();
        if r.norm_inf() > tol(3) * &scale {
            return Err(Error::structure(
                invariant,
                format!(
                    "remainder {:?} exceeds tolerance relative to {:?}",
                    r.norm_inf(),
                    scale
                ),
            ));
        }
        Ok(q)
    }

    /// Largest coefficientwise difference divided by the larger coefficient
    /// norm of the two operands.
    pub fn rel_distance(&self, other: &Poly) -> BigReal {
        let n = self.coeffs.len().max(other.coeffs.len());
        let scale = self.norm_inf().max(other.norm_inf());
        if scale.is_zero() {
            return BigReal::zero();
        }
        let diff = (0..n).fold(BigReal::zero(), |m, i| {
            m.max((self.coeff(i) - other.coeff(i)).abs())
        });
        diff / scale
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigReal::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_factorization() {
        let p = Poly::from_i64(&[-1, 0, 1]);
        let q = Poly::from_i64(&[-1, 1]);
        let (s, r) = p.divrem(&q).unwrap();
        assert_eq!(s, Poly::from_i64(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divide_by_zero_poly() {
        let p = Poly::from_i64(&[1, 2]);
        assert_eq!(p.divrem(&Poly::zero()), Err(Error::DegenerateDivisor));
    }

    fn s3() -> Poly {
        Poly::from_coeffs(vec![
            BigReal::zero(),
            BigReal::ratio(-183, 20),
            BigReal::zero(),
            BigReal::one(),
        ])
    }

    #[test]
    fn derivative_power_rule() {
        let d = s3().derivative();
        let want = Poly::from_coeffs(vec![
            BigReal::ratio(-183, 20),
            BigReal::zero(),
            BigReal::from(3),
        ]);
        assert_eq!(d, want);
    }

    #[test]
    fn horner_eval() {
        let v = s3().eval(&BigReal::from(2));
        let want = BigReal::ratio(-103, 10);
        assert!((v - want).abs() < tol(2));
    }

    #[test]
    fn taylor_zeroth_order_is_value() {
        let f = s3();
        let y = BigReal::ratio(3, 7);
        let t = f.taylor_poly(&y, 0);
        assert_eq!(t.degree(), Some(0));
        assert!((t.coeff(0) - f.eval(&y)).abs() < tol(2));
    }

    #[test]
    fn taylor_of_cube_at_one() {
        // 1 + 3(x-1) + 3(x-1)^2 = 3x^2 - 3x + 1
        let t = Poly::from_i64(&[0, 0, 0, 1]).taylor_poly(&BigReal::one(), 2);
        assert_eq!(t, Poly::from_i64(&[1, -3, 3]));
    }

    #[test]
    fn taylor_full_order_is_identity() {
        let f = s3();
        let t = f.taylor_poly(&BigReal::ratio(-5, 3), 3);
        assert!(t.rel_distance(&f) < tol(2));
    }

    #[test]
    fn eval_derivative_matches_symbolic() {
        let f = Poly::from_i64(&[3, -1, 4, 1, -5, 9]);
        let y = BigReal::ratio(2, 3);
        for k in 0..7 {
            let a = f.eval_derivative(k, &y);
            let b = f.derivative_n(k).eval(&y);
            assert!((a - b).abs() < tol(2) * 1000);
        }
    }

    #[test]
    fn exact_div_flags_inexact() {
        let p = Poly::from_i64(&[1, 0, 1]);
        let q = Poly::from_i64(&[-1, 1]);
        assert!(matches!(
            p.exact_div(&q, "test"),
            Err(Error::StructureError { .. })
        ));
    }

    #[test]
    fn effective_degree_ignores_noise() {
        let p = Poly::from_coeffs(vec![
            BigReal::one(),
            BigReal::from(2),
            BigReal::parse("1e-60").unwrap(),
        ]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.effective_degree(&tol(2)), Some(1));
    }
}
