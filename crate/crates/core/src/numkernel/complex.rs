use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::BigReal;

/// Complex value over [`BigReal`]; only used for root outputs and for
/// evaluating real polynomials at complex points.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: BigReal,
    pub im: BigReal,
}

impl Complex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Complex { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        Complex {
            re,
            im: BigReal::zero(),
        }
    }

    pub fn zero() -> Self {
        Complex::real(BigReal::zero())
    }

    pub fn one() -> Self {
        Complex::real(BigReal::one())
    }

    pub fn from_polar_f64(r: f64, theta: f64) -> Self {
        Complex::new(
            BigReal::from_f64(r * theta.cos()),
            BigReal::from_f64(r * theta.sin()),
        )
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        Complex::new(&self.re * s, &self.im * s)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let den = rhs.norm_sqr();
        Complex::new(
            (&self.re * &rhs.re + &self.im * &rhs.im) / &den,
            (&self.im * &rhs.re - &self.re * &rhs.im) / &den,
        )
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        &self + &rhs
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        &self - &rhs
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        &self * &rhs
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        &self / &rhs
    }
}
