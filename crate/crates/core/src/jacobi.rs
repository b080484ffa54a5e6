//! Monic Jacobi polynomials `P_n^{(α,β)}` for the weight
//! `(1 - x)^α (1 + x)^β` on `[-1, 1]`.

use crate::error::{Error, Result};
use crate::numkernel::{BigReal, Poly};

/// Validated `(α, β)` with `α, β > -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiParams {
    alpha: BigReal,
    beta: BigReal,
}

impl JacobiParams {
    pub fn new(alpha: BigReal, beta: BigReal) -> Result<Self> {
        if alpha <= -1 || !alpha.is_finite() {
            return Err(Error::InvalidMeasure(format!("alpha = {alpha:?} must exceed -1")));
        }
        if beta <= -1 || !beta.is_finite() {
            return Err(Error::InvalidMeasure(format!("beta = {beta:?} must exceed -1")));
        }
        Ok(JacobiParams { alpha, beta })
    }

    /// Legendre weight, `α = β = 0`.
    pub fn legendre() -> Self {
        JacobiParams {
            alpha: BigReal::zero(),
            beta: BigReal::zero(),
        }
    }

    pub fn alpha(&self) -> &BigReal {
        &self.alpha
    }

    pub fn beta(&self) -> &BigReal {
        &self.beta
    }

    fn ab(&self) -> BigReal {
        &self.alpha + &self.beta
    }

    /// `2n + α + β`.
    fn s(&self, n: usize) -> BigReal {
        self.ab() + (2 * n) as i64
    }

    /// Recurrence coefficient `γ_{1,n}`.
    pub fn gamma1(&self, n: usize) -> BigReal {
        if n == 0 {
            // Limit of the general formula; avoids 0/0 when α + β = 0.
            return (&self.beta - &self.alpha) / (self.ab() + 2);
        }
        let s = self.s(n);
        (self.beta.square() - self.alpha.square()) / (&s * (&s + 2))
    }

    /// Recurrence coefficient `γ_{2,n} = h_n / h_{n-1}`; zero for `n = 0`.
    pub fn gamma2(&self, n: usize) -> BigReal {
        match n {
            0 => BigReal::zero(),
            1 => {
                // (n + α + β) cancels against (2n + α + β - 1).
                let s = self.s(1);
                (self.alpha.clone() + 1) * (self.beta.clone() + 1) * 4 / (s.square() * (s + 1))
            }
            _ => {
                let nn = n as i64;
                let s = self.s(n);
                (self.alpha.clone() + nn) * (self.beta.clone() + nn) * (self.ab() + nn) * (4 * nn)
                    / (s.square() * (s.square() - 1))
            }
        }
    }

    /// `ln h_n` from the Γ-ratio closed form.
    pub fn ln_norm(&self, n: usize) -> BigReal {
        let ln2 = BigReal::from(2).ln();
        let a1 = self.alpha.clone() + 1;
        let b1 = self.beta.clone() + 1;
        if n == 0 {
            return (self.ab() + 1) * &ln2 + a1.ln_gamma() + b1.ln_gamma()
                - (self.ab() + 2).ln_gamma();
        }
        let nn = n as i64;
        let s = self.s(n);
        (&s + 1) * &ln2 + BigReal::from(nn + 1).ln_gamma() + (a1 + nn).ln_gamma()
            + (b1 + nn).ln_gamma()
            + (self.ab() + (nn + 1)).ln_gamma()
            - (&s + 2).ln_gamma()
            - (&s + 1).ln_gamma()
    }

    /// `h_n = ‖P_n‖²`.
    pub fn norm(&self, n: usize) -> BigReal {
        self.ln_norm(n).exp()
    }

    /// Closed form of `P_n(1)`.
    pub fn value_at_one(&self, n: usize) -> BigReal {
        if n == 0 {
            return BigReal::one();
        }
        let nn = n as i64;
        let ln2 = BigReal::from(2).ln();
        let a1 = self.alpha.clone() + 1;
        let ln = ln2 * nn + (a1.clone() + nn).ln_gamma() + (self.ab() + (nn + 1)).ln_gamma()
            - a1.ln_gamma()
            - (self.s(n) + 1).ln_gamma();
        ln.exp()
    }

    /// `b̂_n / γ_{2,n} = 2n + α + β + 1`, regular also at `n = 0`.
    pub fn bhat_over_gamma2(&self, n: usize) -> BigReal {
        self.s(n) + 1
    }
}

/// Classical ladder data: `(1-x²)P_n' = â_n P_n + b̂_n P_{n-1}` and
/// `(1-x²)P_{n-1}' = ĉ_n P_{n-1} + d̂_n P_n`.
#[derive(Clone, Debug)]
pub struct JacobiLadder {
    pub a: Poly,
    pub b: BigReal,
    pub c: Poly,
    pub d: BigReal,
}

impl JacobiLadder {
    /// Lowering operator applied to `p`: `(-â p + (1-x²) p') / b̂`.
    pub fn lower(&self, p: &Poly) -> Poly {
        let num = &(-&(&self.a * p)) + &(&Poly::one_minus_x2() * &p.derivative());
        num.scale(&self.b.recip())
    }

    /// Raising operator applied to `p`: `(-ĉ p + (1-x²) p') / d̂`.
    pub fn raise(&self, p: &Poly) -> Poly {
        let num = &(-&(&self.c * p)) + &(&Poly::one_minus_x2() * &p.derivative());
        num.scale(&self.d.recip())
    }
}

/// Ladder coefficients `(â_n, b̂_n, ĉ_n, d̂_n)` for `n >= 1`.
pub fn ladder_coeffs(params: &JacobiParams, n: usize) -> Result<JacobiLadder> {
    if n == 0 {
        return Err(Error::NotApplicable("ladder coefficients need n >= 1".into()));
    }
    let nn = n as i64;
    let s = params.s(n);
    let ba = &params.beta - &params.alpha;
    let a = Poly::from_coeffs(vec![-(&ba * nn) / &s, BigReal::from(-nn)]);
    let b = if n == 1 {
        (params.alpha.clone() + 1) * (params.beta.clone() + 1) * 4 / s.square()
    } else {
        (params.alpha.clone() + nn) * (params.beta.clone() + nn) * (params.ab() + nn) * (4 * nn)
            / (s.square() * (&s - 1))
    };
    let nab = params.ab() + nn;
    let c = Poly::from_coeffs(vec![-(&nab * &ba) / &s, nab.clone()]);
    let d = -(&s - 1);
    Ok(JacobiLadder { a, b, c, d })
}

/// Monic Jacobi polynomials, norms and recurrence coefficients through a
/// given degree. Grows append-only.
#[derive(Clone, Debug)]
pub struct JacobiCache {
    params: JacobiParams,
    polys: Vec<Poly>,
    norms: Vec<BigReal>,
    gamma1: Vec<BigReal>,
    gamma2: Vec<BigReal>,
}

impl JacobiCache {
    pub fn build(params: JacobiParams, n: usize) -> Self {
        let mut cache = JacobiCache {
            polys: vec![Poly::one()],
            norms: vec![params.norm(0)],
            gamma1: vec![params.gamma1(0)],
            gamma2: vec![params.gamma2(0)],
            params,
        };
        cache.extend_to(n);
        cache
    }

    /// Extends the cache through degree `n`; a no-op if already there.
    pub fn extend_to(&mut self, n: usize) {
        while self.degree() < n {
            let k = self.degree();
            let shift = Poly::from_coeffs(vec![-&self.gamma1[k], BigReal::one()]);
            let mut next = &shift * &self.polys[k];
            if k > 0 {
                next = &next - &self.polys[k - 1].scale(&self.gamma2[k]);
            }
            self.polys.push(next);
            self.norms.push(self.params.norm(k + 1));
            self.gamma1.push(self.params.gamma1(k + 1));
            self.gamma2.push(self.params.gamma2(k + 1));
        }
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    /// Highest cached degree.
    pub fn degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, k: usize) -> &Poly {
        &self.polys[k]
    }

    pub fn norm(&self, k: usize) -> &BigReal {
        &self.norms[k]
    }

    pub fn gamma1(&self, k: usize) -> &BigReal {
        &self.gamma1[k]
    }

    pub fn gamma2(&self, k: usize) -> &BigReal {
        &self.gamma2[k]
    }
}

pub fn build_jacobi(params: JacobiParams, n: usize) -> JacobiCache {
    JacobiCache::build(params, n)
}

/// `P_n(1)` by the Γ-ratio closed form.
pub fn jacobi_at_one(params: &JacobiParams, n: usize) -> BigReal {
    params.value_at_one(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::tol;

    fn params(a: i64, b: i64) -> JacobiParams {
        JacobiParams::new(BigReal::from(a), BigReal::from(b)).unwrap()
    }

    #[test]
    fn rejects_invalid_measures() {
        assert!(matches!(
            JacobiParams::new(BigReal::from(-1), BigReal::zero()),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(matches!(
            JacobiParams::new(BigReal::zero(), BigReal::parse("-1.5").unwrap()),
            Err(Error::InvalidMeasure(_))
        ));
    }

    #[test]
    fn legendre_low_degrees() {
        let cache = JacobiCache::build(JacobiParams::legendre(), 2);
        assert_eq!(cache.poly(1), &Poly::x());
        let want = Poly::from_coeffs(vec![BigReal::ratio(-1, 3), BigReal::zero(), BigReal::one()]);
        assert!(cache.poly(2).rel_distance(&want) < tol(2));
    }

    #[test]
    fn symmetric_weights_have_zero_gamma1() {
        let p = params(3, 3);
        for n in 0..10 {
            assert!(p.gamma1(n).is_zero());
        }
    }

    #[test]
    fn legendre_h1() {
        let p = JacobiParams::legendre();
        assert!((p.norm(1) - BigReal::ratio(2, 3)).abs() < tol(2));
        assert!((p.norm(0) - BigReal::from(2)).abs() < tol(2));
    }

    #[test]
    fn norms_follow_gamma2_ratio() {
        let p = JacobiParams::new(BigReal::parse("0.5").unwrap(), BigReal::from(110)).unwrap();
        for n in 1..12 {
            let r = p.norm(n) / p.norm(n - 1);
            assert!((r / p.gamma2(n) - BigReal::one()).abs() < tol(2));
        }
    }

    #[test]
    fn bhat_for_legendre_n1() {
        let l = ladder_coeffs(&JacobiParams::legendre(), 1).unwrap();
        assert!((l.b - BigReal::one()).abs() < tol(2));
        assert!((l.d + BigReal::one()).abs() < tol(2));
    }

    #[test]
    fn ahat_leading_is_minus_n() {
        let p = params(2, 7);
        for n in 1..8 {
            let l = ladder_coeffs(&p, n).unwrap();
            assert_eq!(l.a.leading(), BigReal::from(-(n as i64)));
        }
    }

    #[test]
    fn lowering_and_raising() {
        let p = JacobiParams::new(BigReal::parse("-0.5").unwrap(), BigReal::from(4)).unwrap();
        let cache = JacobiCache::build(p.clone(), 9);
        for n in 1..=9 {
            let l = ladder_coeffs(&p, n).unwrap();
            let down = l.lower(cache.poly(n));
            assert!(down.rel_distance(cache.poly(n - 1)) < tol(2));
            let up = l.raise(cache.poly(n - 1));
            assert!(up.rel_distance(cache.poly(n)) < tol(2));
            assert!(l.raise(&down).rel_distance(cache.poly(n)) < tol(2));
        }
    }

    #[test]
    fn value_at_one_closed_form() {
        assert_eq!(JacobiParams::legendre().value_at_one(0), BigReal::one());
        let cache = JacobiCache::build(JacobiParams::legendre(), 2);
        let v = JacobiParams::legendre().value_at_one(2);
        assert!((&v - BigReal::ratio(2, 3)).abs() < tol(2));
        assert!((v - cache.poly(2).eval(&BigReal::one())).abs() < tol(2));

        let p = params(0, 100);
        let cache = JacobiCache::build(p.clone(), 6);
        for n in 0..=6 {
            let closed = p.value_at_one(n);
            let direct = cache.poly(n).eval(&BigReal::one());
            assert!(((closed / direct) - BigReal::one()).abs() < tol(2));
        }
    }

    #[test]
    fn cache_extension_is_append_only() {
        let mut cache = JacobiCache::build(params(1, 2), 3);
        let p3 = cache.poly(3).clone();
        cache.extend_to(2);
        assert_eq!(cache.degree(), 3);
        cache.extend_to(6);
        assert_eq!(cache.poly(3), &p3);
        assert!(cache.poly(6).is_monic());
    }
}
