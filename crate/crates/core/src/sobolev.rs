//! Discrete Sobolev inner products over a Jacobi measure and their monic
//! orthogonal polynomials `S_n`.
//!
//! `S_n` comes from the Christoffel–Darboux kernel representation
//!
//! ```text
//! S_n(x) = P_n(x) - Σ_b λ_b S_n^{(k_b)}(c_b) K_{n-1}^{(0,k_b)}(x, c_b)
//! ```
//!
//! whose derivative vector at the mass points solves `(I + K L) s = p`.
//! The connection polynomials `A_2`, `B_2` with `ρ S_n = A_2 P_n + B_2 P_{n-1}`
//! are stored alongside.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::jacobi::{JacobiCache, JacobiParams};
use crate::numkernel::{
    cholesky_pd, poly_roots, real_roots, solve_dense, tol, BigReal, Complex, Matrix, Poly,
    SymMatrix,
};

/// A mass point `c` with its active derivative orders and masses.
#[derive(Clone, Debug, PartialEq)]
pub struct MassPoint {
    c: BigReal,
    terms: Vec<(usize, BigReal)>,
}

impl MassPoint {
    /// Sorts the terms by order and drops zero masses. Fails when `|c| < 1`,
    /// a mass is negative, an order repeats, or no mass is positive.
    pub fn new(c: BigReal, terms: Vec<(usize, BigReal)>) -> Result<Self> {
        if !c.is_finite() || c.abs() < 1 {
            return Err(Error::InvalidMassPoint(format!("|c| = |{c:?}| must be at least 1")));
        }
        let mut kept = Vec::with_capacity(terms.len());
        for (k, lambda) in terms {
            if lambda.is_negative() || !lambda.is_finite() {
                return Err(Error::InvalidMassPoint(format!(
                    "mass {lambda:?} on order {k} at c = {c:?} must be nonnegative"
                )));
            }
            if !lambda.is_zero() {
                kept.push((k, lambda));
            }
        }
        kept.sort_by_key(|t| t.0);
        if kept.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMassPoint(format!(
                "repeated derivative order at c = {c:?}"
            )));
        }
        if kept.is_empty() {
            return Err(Error::InvalidMassPoint(format!("no positive mass at c = {c:?}")));
        }
        Ok(MassPoint { c, terms: kept })
    }

    pub fn c(&self) -> &BigReal {
        &self.c
    }

    /// `(k, λ_k)` with `λ_k > 0`, orders increasing.
    pub fn terms(&self) -> &[(usize, BigReal)] {
        &self.terms
    }

    /// Maximal active derivative order `d_j`.
    pub fn max_order(&self) -> usize {
        self.terms.last().map(|t| t.0).expect("nonempty by construction")
    }
}

/// One active term `λ f^{(k)}(c_j) g^{(k)}(c_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActiveTerm {
    pub point: usize,
    pub c: BigReal,
    pub k: usize,
    pub lambda: BigReal,
}

/// Jacobi measure plus mass points sorted by location.
#[derive(Clone, Debug, PartialEq)]
pub struct SobolevProduct {
    jacobi: JacobiParams,
    points: Vec<MassPoint>,
}

impl SobolevProduct {
    pub fn new(jacobi: JacobiParams, mut points: Vec<MassPoint>) -> Result<Self> {
        points.sort_by(|a, b| a.c.partial_cmp(&b.c).unwrap_or(Ordering::Equal));
        if points.windows(2).any(|w| w[0].c == w[1].c) {
            return Err(Error::InvalidMassPoint("mass point locations must be distinct".into()));
        }
        Ok(SobolevProduct { jacobi, points })
    }

    /// The plain Jacobi inner product.
    pub fn classical(jacobi: JacobiParams) -> Self {
        SobolevProduct {
            jacobi,
            points: Vec::new(),
        }
    }

    pub fn jacobi(&self) -> &JacobiParams {
        &self.jacobi
    }

    pub fn points(&self) -> &[MassPoint] {
        &self.points
    }

    /// Number of mass points `N`.
    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    /// `d = Σ (d_j + 1)`.
    pub fn d(&self) -> usize {
        self.points.iter().map(|p| p.max_order() + 1).sum()
    }

    /// `d* = |I₊|`.
    pub fn d_star(&self) -> usize {
        self.points.iter().map(|p| p.terms.len()).sum()
    }

    /// Active terms, points in location order then orders increasing.
    pub fn active_terms(&self) -> Vec<ActiveTerm> {
        self.points
            .iter()
            .enumerate()
            .flat_map(|(j, p)| {
                p.terms.iter().map(move |(k, lambda)| ActiveTerm {
                    point: j,
                    c: p.c.clone(),
                    k: *k,
                    lambda: lambda.clone(),
                })
            })
            .collect()
    }

    /// `ρ = Π (x - c_j)^{d_j + 1}`.
    pub fn rho(&self) -> Poly {
        self.points.iter().fold(Poly::one(), |acc, p| {
            &acc * &Poly::linear_factor(&p.c).pow(p.max_order() as u32 + 1)
        })
    }

    /// `ρ / (x - c_j)^{k + 1}`.
    pub fn rho_partial(&self, j: usize, k: usize) -> Poly {
        self.points.iter().enumerate().fold(Poly::one(), |acc, (i, p)| {
            let e = if i == j {
                p.max_order() - k
            } else {
                p.max_order() + 1
            };
            &acc * &Poly::linear_factor(&p.c).pow(e as u32)
        })
    }

    /// `ρ_N = Π (x - c_j)`.
    pub fn rho_n(&self) -> Poly {
        self.points
            .iter()
            .fold(Poly::one(), |acc, p| &acc * &Poly::linear_factor(&p.c))
    }

    /// `ρ_{d-N} = Π (x - c_j)^{d_j}`.
    pub fn rho_d_minus_n(&self) -> Poly {
        self.points.iter().fold(Poly::one(), |acc, p| {
            &acc * &Poly::linear_factor(&p.c).pow(p.max_order() as u32)
        })
    }

    /// `ρ̂ = Π ±(x - c_j)^{d_j + 1}`, oriented to be positive on `(-1, 1)`.
    pub fn rho_hat(&self) -> Poly {
        self.points.iter().fold(Poly::one(), |acc, p| {
            let factor = if p.c.is_negative() {
                Poly::linear_factor(&p.c)
            } else {
                -&Poly::linear_factor(&p.c)
            };
            &acc * &factor.pow(p.max_order() as u32 + 1)
        })
    }
}

/// `∫ x^k dμ` for `k = 0..=kmax`, via the Jacobi-basis expansion of `x^k`.
pub fn moments(params: &JacobiParams, kmax: usize) -> Vec<BigReal> {
    let g1: Vec<BigReal> = (0..=kmax).map(|j| params.gamma1(j)).collect();
    let g2: Vec<BigReal> = (0..=kmax + 1).map(|j| params.gamma2(j)).collect();
    let h0 = params.norm(0);
    // coef[j] is the coefficient of P_j in x^k.
    let mut coef = vec![BigReal::one()];
    let mut out = vec![h0.clone()];
    for _ in 0..kmax {
        let mut next = vec![BigReal::zero(); coef.len() + 1];
        for (j, c) in coef.iter().enumerate() {
            next[j + 1] += c;
            next[j] += c * &g1[j];
            if j > 0 {
                next[j - 1] += c * &g2[j];
            }
        }
        coef = next;
        out.push(&coef[0] * &h0);
    }
    out
}

/// `∫ f g dμ`, exact up to working precision.
pub fn inner_mu(f: &Poly, g: &Poly, params: &JacobiParams) -> BigReal {
    let fg = f * g;
    let Some(deg) = fg.degree() else {
        return BigReal::zero();
    };
    let m = moments(params, deg);
    fg.coeffs().iter().zip(&m).map(|(a, b)| a * b).sum()
}

/// `⟨f, g⟩_μ + Σ λ f^{(k)}(c_j) g^{(k)}(c_j)`.
pub fn inner_sobolev(f: &Poly, g: &Poly, product: &SobolevProduct) -> BigReal {
    let mut acc = inner_mu(f, g, product.jacobi());
    for t in product.active_terms() {
        acc += &t.lambda * f.eval_derivative(t.k, &t.c) * g.eval_derivative(t.k, &t.c);
    }
    acc
}

/// `K_{n-1}^{(ℓ,k)}(x, y) = Σ_{ν<n} P_ν^{(ℓ)}(x) P_ν^{(k)}(y) / h_ν` by direct
/// summation. Requires `cache.degree() >= n - 1`.
pub fn kernel_dk(cache: &JacobiCache, n: usize, ell: usize, k: usize, x: &BigReal, y: &BigReal) -> BigReal {
    (0..n)
        .map(|nu| {
            let p = cache.poly(nu);
            p.eval_derivative(ell, x) * p.eval_derivative(k, y) / cache.norm(nu)
        })
        .sum()
}

/// Christoffel–Darboux closed form of `K_{n-1}^{(0,k)}(x, y)`, valid for
/// `x != y` and `n >= 1`. Requires `cache.degree() >= n`.
pub fn kernel_cd(cache: &JacobiCache, n: usize, k: usize, x: &BigReal, y: &BigReal) -> BigReal {
    let pn = cache.poly(n);
    let pm = cache.poly(n - 1);
    let bracket = pm.taylor_poly(y, k).eval(x) * pn.eval(x) - pn.taylor_poly(y, k).eval(x) * pm.eval(x);
    let denom = cache.norm(n - 1) * (x - y).powi(k as i32 + 1);
    BigReal::factorial(k as u32) * bracket / denom
}

/// `x ↦ K_{n-1}^{(0,k)}(x, y)` as a polynomial.
pub fn kernel_poly(cache: &JacobiCache, n: usize, k: usize, y: &BigReal) -> Poly {
    (0..n).fold(Poly::zero(), |acc, nu| {
        let p = cache.poly(nu);
        &acc + &p.scale(&(p.eval_derivative(k, y) / cache.norm(nu)))
    })
}

/// Per-degree data of the family.
#[derive(Clone, Debug)]
struct Entry {
    s: Poly,
    deriv: Vec<BigReal>,
    a2: Poly,
    b2_reg: Poly,
    kernel_pd: bool,
}

/// `S_0..S_n` with their derivative vectors and connection polynomials.
#[derive(Clone, Debug)]
pub struct SobolevFamily {
    product: SobolevProduct,
    cache: JacobiCache,
    terms: Vec<ActiveTerm>,
    entries: Vec<Entry>,
}

/// Builds `S_0..S_n` from the kernel system.
pub fn build_family(product: &SobolevProduct, n: usize) -> Result<SobolevFamily> {
    let cache = JacobiCache::build(product.jacobi().clone(), n);
    let terms = product.active_terms();
    let rho = product.rho();
    let mut entries = Vec::with_capacity(n + 1);
    for m in 0..=n {
        entries.push(build_entry(product, &cache, &terms, &rho, m)?);
    }
    Ok(SobolevFamily {
        product: product.clone(),
        cache,
        terms,
        entries,
    })
}

fn build_entry(
    product: &SobolevProduct,
    cache: &JacobiCache,
    terms: &[ActiveTerm],
    rho: &Poly,
    m: usize,
) -> Result<Entry> {
    let ds = terms.len();
    let pm = cache.poly(m);
    let p_vec: Vec<BigReal> = terms.iter().map(|t| pm.eval_derivative(t.k, &t.c)).collect();
    if m == 0 {
        return Ok(Entry {
            s: Poly::one(),
            deriv: p_vec,
            a2: rho.clone(),
            b2_reg: Poly::zero(),
            kernel_pd: true,
        });
    }

    let kmat = SymMatrix::from_fn(ds, |a, b| {
        kernel_dk(cache, m, terms[a].k, terms[b].k, &terms[a].c, &terms[b].c)
    });
    let mut shifted = kmat.clone();
    for (a, t) in terms.iter().enumerate() {
        shifted.set(a, a, kmat.get(a, a) + t.lambda.recip());
    }
    let kernel_pd = cholesky_pd(&shifted);

    let system = Matrix::from_fn(ds, ds, |a, b| {
        let v = kmat.get(a, b) * &terms[b].lambda;
        if a == b {
            v + 1
        } else {
            v
        }
    });
    let deriv = solve_dense(&system, &p_vec).map_err(|e| {
        Error::InternalContradiction(format!("kernel system for S_{m} is singular: {e}"))
    })?;

    let mut s = pm.clone();
    for (t, sv) in terms.iter().zip(&deriv) {
        let w = &t.lambda * sv;
        s = &s - &kernel_poly(cache, m, t.k, &t.c).scale(&w);
    }

    let mut a2 = rho.clone();
    let mut b2_reg = Poly::zero();
    for (t, sv) in terms.iter().zip(&deriv) {
        let w = BigReal::factorial(t.k as u32) * &t.lambda * sv;
        let rp = product.rho_partial(t.point, t.k);
        let qa = &cache.poly(m - 1).taylor_poly(&t.c, t.k) * &rp;
        let qb = &pm.taylor_poly(&t.c, t.k) * &rp;
        a2 = &a2 - &qa.scale(&(&w / cache.norm(m - 1)));
        b2_reg = &b2_reg + &qb.scale(&(&w / cache.norm(m)));
    }

    Ok(Entry {
        s,
        deriv,
        a2,
        b2_reg,
        kernel_pd,
    })
}

impl SobolevFamily {
    pub fn product(&self) -> &SobolevProduct {
        &self.product
    }

    pub fn cache(&self) -> &JacobiCache {
        &self.cache
    }

    /// Active terms in the order used for derivative vectors.
    pub fn terms(&self) -> &[ActiveTerm] {
        &self.terms
    }

    /// Highest built degree.
    pub fn degree(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn s(&self, m: usize) -> &Poly {
        &self.entries[m].s
    }

    /// Solved `S_m^{(k)}(c_j)` over the active terms.
    pub fn deriv_vector(&self, m: usize) -> &[BigReal] {
        &self.entries[m].deriv
    }

    /// `P_m^{(k)}(c_j)` over the active terms.
    pub fn jacobi_vector(&self, m: usize) -> Vec<BigReal> {
        let p = self.cache.poly(m);
        self.terms.iter().map(|t| p.eval_derivative(t.k, &t.c)).collect()
    }

    /// `A_{2,m}` in `ρ S_m = A_{2,m} P_m + B_{2,m} P_{m-1}`.
    pub fn a2(&self, m: usize) -> &Poly {
        &self.entries[m].a2
    }

    /// `B_{2,m} / γ_{2,m}`, regular also at `m = 0` where it vanishes.
    pub fn b2_reg(&self, m: usize) -> &Poly {
        &self.entries[m].b2_reg
    }

    /// `B_{2,m}`.
    pub fn b2(&self, m: usize) -> Poly {
        self.entries[m].b2_reg.scale(self.cache.gamma2(m))
    }

    /// Whether `L⁻¹ + K_{m-1}(C, C)` passed the Cholesky test.
    pub fn kernel_pd(&self, m: usize) -> bool {
        self.entries[m].kernel_pd
    }

    /// `Λ_m = 𝒮_m(C)ᵀ L 𝒫_m(C)`.
    pub fn lambda(&self, m: usize) -> BigReal {
        let p = self.jacobi_vector(m);
        self.terms
            .iter()
            .zip(self.deriv_vector(m))
            .zip(&p)
            .map(|((t, s), p)| &t.lambda * s * p)
            .sum()
    }

    /// `(A_{2,m} P_m + B_{2,m} P_{m-1}) / ρ`, which must reproduce `S_m`.
    pub fn connection_reconstruct(&self, m: usize) -> Result<Poly> {
        let mut num = self.a2(m) * self.cache.poly(m);
        if m > 0 {
            num = &num + &(&self.b2(m) * self.cache.poly(m - 1));
        }
        num.exact_div(&self.product.rho(), "connection formula division by rho")
    }
}

/// Witness that the active pairs are sequentially ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct SequentialOrder {
    pub ordered: bool,
    /// `(c, k)` in admissible order; empty when not ordered.
    pub witness: Vec<(BigReal, usize)>,
}

/// Whether the active pairs `(c_j, k)` admit an arrangement with
/// nondecreasing orders in which each location lies outside the open hull
/// of `(-1, 1)` and the earlier locations. A location carrying more than
/// one active order is never ordered.
pub fn is_sequentially_ordered(product: &SobolevProduct) -> SequentialOrder {
    let not = SequentialOrder {
        ordered: false,
        witness: Vec::new(),
    };
    if product.points().iter().any(|p| p.terms().len() > 1) {
        return not;
    }
    let mut pairs: Vec<(BigReal, usize)> = product
        .points()
        .iter()
        .map(|p| (p.c().clone(), p.terms()[0].0))
        .collect();
    pairs.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal)));

    let mut lo = BigReal::from(-1);
    let mut hi = BigReal::one();
    let mut witness = Vec::with_capacity(pairs.len());
    let mut start = 0;
    while start < pairs.len() {
        let k = pairs[start].1;
        let end = start + pairs[start..].iter().take_while(|p| p.1 == k).count();
        let group = &pairs[start..end];
        let right: Vec<_> = group.iter().filter(|p| p.0 >= hi).cloned().collect();
        let mut left: Vec<_> = group.iter().filter(|p| p.0 <= lo).cloned().collect();
        if right.len() + left.len() != group.len() {
            return not;
        }
        left.reverse();
        for p in right {
            hi = p.0.clone();
            witness.push(p);
        }
        for p in left {
            lo = p.0.clone();
            witness.push(p);
        }
        start = end;
    }
    SequentialOrder {
        ordered: true,
        witness,
    }
}

/// Largest `|⟨S_n, ρ̂ x^i⟩_μ|` over `i <= n - d - 1`, with the matching
/// Cauchy–Schwarz scale `‖S_n‖_μ ‖ρ̂ x^i‖_μ`.
#[derive(Clone, Debug)]
pub struct QuasiOrthogonality {
    pub violation: BigReal,
    pub scale: BigReal,
}

pub fn quasi_orthogonality_check(family: &SobolevFamily, n: usize) -> Result<QuasiOrthogonality> {
    let d = family.product().d();
    if n <= d {
        return Err(Error::NotApplicable(format!("quasi-orthogonality needs n = {n} > d = {d}")));
    }
    let params = family.product().jacobi();
    let s = family.s(n);
    let s_norm = inner_mu(s, s, params).sqrt();
    let rho_hat = family.product().rho_hat();
    let mut violation = BigReal::zero();
    let mut scale = BigReal::zero();
    for i in 0..n - d {
        let f = &rho_hat * &Poly::monomial(i, BigReal::one());
        violation = violation.max(inner_mu(s, &f, params).abs());
        scale = scale.max(&s_norm * inner_mu(&f, &f, params).sqrt());
    }
    Ok(QuasiOrthogonality { violation, scale })
}

/// Zeros of `S_n` and their location with respect to `(-1, 1)`.
#[derive(Clone, Debug)]
pub struct ZeroReport {
    /// All roots, sorted by real then imaginary part.
    pub roots: Vec<Complex>,
    /// Real roots, ascending.
    pub real: Vec<BigReal>,
    /// Roots with a nonzero imaginary part after snapping.
    pub complex: Vec<Complex>,
    /// Real roots in `(-1, 1)`.
    pub inside: usize,
    /// Sign changes of `S_n` across `(-1, 1)`.
    pub sign_changes: usize,
    /// Per mass point, the real root outside `(-1, 1)` nearest to it.
    pub nearest_outside: Vec<Option<BigReal>>,
}

pub fn zeros_of(family: &SobolevFamily, n: usize) -> Result<ZeroReport> {
    if n == 0 {
        return Err(Error::NotApplicable("S_0 has no zeros".into()));
    }
    let s = family.s(n);
    let roots = poly_roots(s)?;
    let real = real_roots(&roots);
    let complex: Vec<Complex> = roots.iter().filter(|z| !z.is_real()).cloned().collect();
    let one = BigReal::one();
    let minus_one = BigReal::from(-1);
    let interior: Vec<&BigReal> = real.iter().filter(|x| **x > minus_one && **x < one).collect();

    let mut knots = vec![minus_one.clone()];
    knots.extend(interior.iter().map(|x| (*x).clone()));
    knots.push(one.clone());
    let signs: Vec<i32> = knots
        .windows(2)
        .map(|w| s.eval(&((&w[0] + &w[1]) / 2)).signum())
        .filter(|v| *v != 0)
        .collect();
    let sign_changes = signs.windows(2).filter(|w| w[0] != w[1]).count();

    let nearest_outside = family
        .product()
        .points()
        .iter()
        .map(|p| {
            real.iter()
                .filter(|x| **x <= minus_one || **x >= one)
                .min_by(|a, b| {
                    (*a - p.c()).abs().partial_cmp(&(*b - p.c()).abs()).unwrap_or(Ordering::Equal)
                })
                .cloned()
        })
        .collect();

    Ok(ZeroReport {
        inside: interior.len(),
        roots,
        real,
        complex,
        sign_changes,
        nearest_outside,
    })
}

/// Modified Gram–Schmidt on `1, x, …, x^n` under `⟨·,·⟩_S`. Independent of
/// the kernel construction; used as an oracle.
pub fn gram_schmidt(product: &SobolevProduct, n: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::with_capacity(n + 1);
    let mut norms: Vec<BigReal> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut v = Poly::monomial(m, BigReal::one());
        for (q, nq) in out.iter().zip(&norms) {
            let c = inner_sobolev(&v, q, product) / nq;
            v = &v - &q.scale(&c);
        }
        norms.push(inner_sobolev(&v, &v, product));
        out.push(v);
    }
    out
}

/// Largest `|⟨x^i, S_n⟩_S|` for `i < n`, relative to `⟨S_n, S_n⟩_S`.
pub fn orthogonality_defect(family: &SobolevFamily, n: usize) -> BigReal {
    let product = family.product();
    let s = family.s(n);
    let norm = inner_sobolev(s, s, product);
    (0..n)
        .map(|i| inner_sobolev(&Poly::monomial(i, BigReal::one()), s, product).abs())
        .fold(BigReal::zero(), BigReal::max)
        / norm
}

/// Relative tolerance for orthogonality and connection checks.
pub fn family_tol() -> BigReal {
    tol(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre() -> JacobiParams {
        JacobiParams::legendre()
    }

    fn intro_product() -> SobolevProduct {
        let pts = vec![
            MassPoint::new(BigReal::from(-2), vec![(1, BigReal::one())]).unwrap(),
            MassPoint::new(BigReal::from(2), vec![(1, BigReal::one())]).unwrap(),
        ];
        SobolevProduct::new(legendre(), pts).unwrap()
    }

    #[test]
    fn mass_point_validation() {
        assert!(matches!(
            MassPoint::new(BigReal::ratio(1, 2), vec![(0, BigReal::one())]),
            Err(Error::InvalidMassPoint(_))
        ));
        assert!(matches!(
            MassPoint::new(BigReal::from(2), vec![(0, BigReal::from(-1))]),
            Err(Error::InvalidMassPoint(_))
        ));
        let p = MassPoint::new(BigReal::from(2), vec![(2, BigReal::one()), (0, BigReal::zero())])
            .unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.max_order(), 2);
    }

    #[test]
    fn product_counts() {
        let p = intro_product();
        assert_eq!((p.n_points(), p.d(), p.d_star()), (2, 4, 2));
        assert_eq!(p.rho().degree(), Some(4));
        assert_eq!(p.rho_d_minus_n().degree(), Some(2));
    }

    #[test]
    fn inner_mu_examples() {
        let one = Poly::one();
        assert!((inner_mu(&one, &one, &legendre()) - BigReal::from(2)).abs() < tol(2));
        let x = Poly::x();
        assert!((inner_mu(&x, &x, &legendre()) - BigReal::ratio(2, 3)).abs() < tol(2));
        let params = JacobiParams::new(BigReal::parse("0.5").unwrap(), BigReal::from(7)).unwrap();
        let cache = JacobiCache::build(params.clone(), 8);
        for i in 0..=8 {
            for j in 0..=8 {
                let v = inner_mu(cache.poly(i), cache.poly(j), &params);
                if i == j {
                    assert!((v / cache.norm(i) - BigReal::one()).abs() < tol(3));
                } else {
                    assert!(v.abs() < tol(3) * cache.norm(i).sqrt() * cache.norm(j).sqrt());
                }
            }
        }
    }

    #[test]
    fn inner_sobolev_intro() {
        let x = Poly::x();
        let v = inner_sobolev(&x, &x, &intro_product());
        assert!((v - BigReal::ratio(8, 3)).abs() < tol(2));
    }

    #[test]
    fn kernel_examples() {
        let cache = JacobiCache::build(legendre(), 3);
        let x = BigReal::ratio(1, 3);
        let y = BigReal::ratio(-5, 7);
        let k0 = kernel_dk(&cache, 1, 0, 0, &x, &y);
        assert!((k0 - BigReal::ratio(1, 2)).abs() < tol(2));
        let k1 = kernel_dk(&cache, 2, 0, 0, &x, &y);
        let want = BigReal::ratio(1, 2) + BigReal::ratio(3, 2) * &x * &y;
        assert!((k1 - want).abs() < tol(2));
        let k01 = kernel_dk(&cache, 2, 0, 1, &x, &y);
        assert!((k01 - BigReal::ratio(3, 2) * &x).abs() < tol(2));
    }

    #[test]
    fn kernel_cd_agrees_with_sum() {
        let params = JacobiParams::new(BigReal::zero(), BigReal::from(100)).unwrap();
        let cache = JacobiCache::build(params, 10);
        let x = BigReal::parse("0.3").unwrap();
        let y = BigReal::from(2);
        for n in 1..=10 {
            for k in 0..=2 {
                let a = kernel_dk(&cache, n, 0, k, &x, &y);
                let b = kernel_cd(&cache, n, k, &x, &y);
                assert!((&a - &b).abs() <= tol(3) * a.abs().max(BigReal::one()), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn intro_s3() {
        let fam = build_family(&intro_product(), 3).unwrap();
        let want = Poly::from_coeffs(vec![
            BigReal::zero(),
            BigReal::ratio(-183, 20),
            BigReal::zero(),
            BigReal::one(),
        ]);
        assert!(fam.s(3).rel_distance(&want) < tol(2));
        assert_eq!(fam.s(0), &Poly::one());
        for m in 0..=3 {
            assert!(fam.kernel_pd(m));
            assert!(fam.connection_reconstruct(m).unwrap().rel_distance(fam.s(m)) < tol(3));
            for (t, v) in fam.terms().iter().zip(fam.deriv_vector(m)) {
                assert!((fam.s(m).eval_derivative(t.k, &t.c) - v).abs() < tol(3));
            }
        }
        assert!(orthogonality_defect(&fam, 3) < tol(3));
    }

    #[test]
    fn sequential_order_examples() {
        assert!(is_sequentially_ordered(&intro_product()).ordered);
        let ex2 = SobolevProduct::new(
            JacobiParams::new(BigReal::zero(), BigReal::from(110)).unwrap(),
            vec![
                MassPoint::new(BigReal::one(), vec![(1, BigReal::one())]).unwrap(),
                MassPoint::new(BigReal::from(2), vec![(2, BigReal::one())]).unwrap(),
            ],
        )
        .unwrap();
        let w = is_sequentially_ordered(&ex2);
        assert!(w.ordered);
        assert_eq!(w.witness[0], (BigReal::one(), 1));
        let double = SobolevProduct::new(
            legendre(),
            vec![MassPoint::new(BigReal::from(2), vec![(0, BigReal::one()), (1, BigReal::one())])
                .unwrap()],
        )
        .unwrap();
        assert!(!is_sequentially_ordered(&double).ordered);
        // Lower order further out shadows a higher order closer in.
        let shadowed = SobolevProduct::new(
            legendre(),
            vec![
                MassPoint::new(BigReal::from(3), vec![(0, BigReal::one())]).unwrap(),
                MassPoint::new(BigReal::from(2), vec![(1, BigReal::one())]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!is_sequentially_ordered(&shadowed).ordered);
    }

    #[test]
    fn quasi_orthogonality() {
        let fam = build_family(&intro_product(), 6).unwrap();
        let q = quasi_orthogonality_check(&fam, 6).unwrap();
        assert!(q.violation <= tol(3) * &q.scale);
        assert!(matches!(quasi_orthogonality_check(&fam, 4), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn classical_zeros_inside() {
        let fam = build_family(&SobolevProduct::classical(legendre()), 5).unwrap();
        let z = zeros_of(&fam, 5).unwrap();
        assert_eq!(z.inside, 5);
        assert_eq!(z.sign_changes, 5);
        for i in 0..5 {
            assert!((&z.real[i] + &z.real[4 - i]).abs() < tol(3));
        }
    }

    #[test]
    fn intro_zeros() {
        let fam = build_family(&intro_product(), 3).unwrap();
        let z = zeros_of(&fam, 3).unwrap();
        assert_eq!(z.real.len(), 3);
        assert_eq!(z.inside, 1);
        assert!(z.sign_changes >= 1);
        assert!((z.real[2].to_f64() - 3.0249).abs() < 1e-4);
    }

    #[test]
    fn gram_schmidt_matches_kernel() {
        let prod = intro_product();
        let fam = build_family(&prod, 6).unwrap();
        let gs = gram_schmidt(&prod, 6);
        for m in 0..=6 {
            assert!(gs[m].rel_distance(fam.s(m)) < tol(4), "m={m}");
        }
    }

    #[test]
    fn lambda_positive() {
        let fam = build_family(&intro_product(), 6).unwrap();
        for m in 1..=6 {
            assert!(fam.lambda(m).is_positive());
        }
    }
}
