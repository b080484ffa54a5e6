//! All roots of a real polynomial.
//!
//! Simultaneous Aberth–Ehrlich iteration (a Newton–Durand–Kerner variant)
//! from perturbed points on a circle enclosing the roots, followed by a
//! Newton polish of each root against the original polynomial.

use std::cmp::Ordering;

use super::complex::Complex;
use super::poly::Poly;
use super::real::{precision_digits, tol, working_precision, BigReal};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 2000;
const POLISH_STEPS: usize = 8;

/// Imaginary parts below `root_snap_tol() * (1 + |re|)` are snapped to zero.
/// Equals `1e-20` at the default 256-bit precision.
pub fn root_snap_tol() -> BigReal {
    BigReal::from(10).powi(-((precision_digits() / 4 + 1) as i32))
}

/// Roots sorted by real part, then imaginary part.
pub fn poly_roots(p: &Poly) -> Result<Vec<Complex>> {
    let degree = match p.degree() {
        None => return Err(Error::DegenerateInput("roots of the zero polynomial".into())),
        Some(0) => {
            return Err(Error::DegenerateInput(
                "roots of a nonzero constant".into(),
            ))
        }
        Some(d) => d,
    };

    // Exact zero roots come off first.
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let reduced = Poly::from_coeffs(p.coeffs()[zeros..].to_vec()).monic();
    let mut roots: Vec<Complex> = vec![Complex::zero(); zeros];

    if reduced.degree().unwrap_or(0) > 0 {
        let mut found = aberth(&reduced)?;
        for z in &mut found {
            polish(&reduced, z);
        }
        roots.extend(found);
    }
    debug_assert_eq!(roots.len(), degree);

    let snap = root_snap_tol();
    for z in &mut roots {
        if z.im.abs() < &snap * (z.re.abs() + 1) {
            z.im = BigReal::zero();
        }
    }
    sort_roots(&mut roots);
    Ok(roots)
}

pub fn sort_roots(roots: &mut [Complex]) {
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
    });
}

/// Real parts of those roots whose imaginary part was snapped to zero.
pub fn real_roots(roots: &[Complex]) -> Vec<BigReal> {
    roots
        .iter()
        .filter(|z| z.is_real())
        .map(|z| z.re.clone())
        .collect()
}

/// Expands `prod (x - z)` and returns its real part.
pub fn expand_roots(roots: &[Complex]) -> Poly {
    let mut coeffs = vec![Complex::one()];
    for z in roots {
        let mut next = vec![Complex::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * z);
        }
        coeffs = next;
    }
    Poly::from_coeffs(coeffs.into_iter().map(|c| c.re).collect())
}

/// Fujiwara bound on the root moduli of a monic polynomial.
fn root_radius(p: &Poly) -> f64 {
    let n = p.degree().expect("nonzero");
    let mut r = 0.0f64;
    for i in 0..n {
        let c = p.coeff(i).abs();
        if c.is_zero() {
            continue;
        }
        let mut e = (c.ln() / ((n - i) as i64)).exp().to_f64();
        if i == 0 {
            e *= 0.5f64.powf(1.0 / n as f64);
        }
        r = r.max(e);
    }
    2.0 * r.max(f64::MIN_POSITIVE)
}

fn eval_with_derivative(p: &Poly, z: &Complex) -> (Complex, Complex) {
    let mut value = Complex::zero();
    let mut deriv = Complex::zero();
    for c in p.coeffs().iter().rev() {
        deriv = &(&deriv * z) + &value;
        value = &value * z;
        value.re += c;
    }
    (value, deriv)
}

fn aberth(p: &Poly) -> Result<Vec<Complex>> {
    let n = p.degree().expect("nonzero");
    if n == 1 {
        return Ok(vec![Complex::real(-p.coeff(0))]);
    }
    let radius = root_radius(p) * 0.5;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * (k as f64) / (n as f64) + 0.4;
            let r = radius * (1.0 + 0.05 * ((k % 3) as f64));
            Complex::from_polar_f64(r, theta)
        })
        .collect();

    let step_target = {
        let one = BigReal::one();
        let bits = working_precision() as i32 - 12;
        one / BigReal::from(2).powi(bits)
    };
    let mut last_step = BigReal::from(1);
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = BigReal::zero();
        for k in 0..n {
            let (value, deriv) = eval_with_derivative(p, &z[k]);
            if value.re.is_zero() && value.im.is_zero() {
                continue;
            }
            let newton = &value / &deriv;
            let mut repulsion = Complex::zero();
            for j in 0..n {
                if j != k {
                    let diff = &z[k] - &z[j];
                    repulsion = &repulsion + &(&Complex::one() / &diff);
                }
            }
            let denom = &Complex::one() - &(&newton * &repulsion);
            let step = &newton / &denom;
            let rel = step.abs() / (z[k].abs() + 1);
            max_step = max_step.max(rel);
            z[k] = &z[k] - &step;
        }
        last_step = max_step;
        if last_step <= step_target {
            break;
        }
    }
    if last_step > tol(4) {
        return Err(Error::DegenerateInput(format!(
            "root iteration stalled with relative step {last_step:?}"
        )));
    }
    Ok(z)
}

fn polish(p: &Poly, z: &mut Complex) {
    let (mut value, _) = eval_with_derivative(p, z);
    for _ in 0..POLISH_STEPS {
        let (v, d) = eval_with_derivative(p, z);
        if d.abs().is_zero() {
            return;
        }
        let candidate = &*z - &(&v / &d);
        let (cv, _) = eval_with_derivative(p, &candidate);
        if cv.abs() < value.abs() {
            *z = candidate;
            value = cv;
        } else {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_x2_minus_1() {
        let r = poly_roots(&Poly::from_i64(&[-1, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|z| z.is_real()));
        assert!((&r[0].re + BigReal::one()).abs() < tol(2));
        assert!((&r[1].re - BigReal::one()).abs() < tol(2));
    }

    #[test]
    fn roots_of_sobolev_cubic() {
        let p = Poly::from_coeffs(vec![
            BigReal::zero(),
            BigReal::ratio(-183, 20),
            BigReal::zero(),
            BigReal::one(),
        ]);
        let r = poly_roots(&p).unwrap();
        let s = BigReal::ratio(183, 20).sqrt();
        assert!((s.to_f64() - 3.0249).abs() < 1e-4);
        assert!((&r[0].re + &s).abs() < tol(2));
        assert!(r[1].re.is_zero());
        assert!((&r[2].re - &s).abs() < tol(2));
    }

    #[test]
    fn complex_pair_from_quadratic() {
        let p = Poly::from_coeffs(vec![
            BigReal::parse("3.76606").unwrap(),
            BigReal::parse("-3.8812").unwrap(),
            BigReal::one(),
        ]);
        let disc = p.coeff(1).square() - p.coeff(0) * 4;
        assert!(disc.is_negative());
        let r = poly_roots(&p).unwrap();
        assert!(!r[0].is_real() && !r[1].is_real());
        assert!(r[0].im.is_negative());
        assert!((&r[0].re - &r[1].re).abs() < tol(2));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(poly_roots(&Poly::zero()), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn double_root_is_found() {
        // (x - 1/3)^2 (x + 2)
        let third = BigReal::ratio(1, 3);
        let p = Poly::from_roots(&[third.clone(), third.clone(), BigReal::from(-2)]);
        let r = poly_roots(&p).unwrap();
        assert!((&r[1].re - &third).abs() < tol(4));
        assert!((&r[2].re - &third).abs() < tol(4));
    }
}
