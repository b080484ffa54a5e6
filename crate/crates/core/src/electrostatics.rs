//! Electrostatic model of the zeros of `S_n`.
//!
//! The logarithmic derivative field `𝔓_1/𝔓_2` splits into simple poles
//!
//! ```text
//! 𝔓_1/𝔓_2 = Σ_p w_p / (x - p)
//! ```
//!
//! at `±1`, the mass points, the zeros `u_j` of `δ_n` and the zeros `e_j` of
//! `φ_{1,n}`. Each pole becomes a fixed charge of strength `w_p / 2`; the
//! zeros of `S_n` are a critical point of
//!
//! ```text
//! E(ω) = -Σ_{i<j} log|ω_i - ω_j| - ½ Σ_k Σ_p w_p log|ω_k - p|
//! ```
//!
//! Conjugate pairs of complex poles are merged into the real term
//! `-½ w log((ω - a)² + b²)`. Weights of the `e_j` are negative, so those
//! charges attract.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::ladder::LadderData;
use crate::numkernel::{
    cholesky_pd, poly_roots, sym_eigen_vectors, tol, BigReal, Complex, Poly, SymMatrix,
};
use crate::sobolev::{zeros_of, SobolevFamily};

/// Where a pole of `𝔓_1/𝔓_2` came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoleSource {
    /// `x = 1`.
    Right,
    /// `x = -1`.
    Left,
    /// Mass point `c_j`.
    MassPoint(usize),
    /// Zero of `δ_n`.
    DeltaZero,
    /// Zero of `φ_{1,n}`.
    Attractor,
}

/// A pole `p` (or conjugate pair `a ± ib`) with weight `w` per pole.
#[derive(Clone, Debug)]
pub struct Charge {
    /// Pole location; for a pair, the member with positive imaginary part.
    pub location: Complex,
    pub weight: BigReal,
    /// Residue of `ψ_1/ψ_2` at the location.
    pub residue: Complex,
    /// All sources merged at this location.
    pub sources: Vec<PoleSource>,
}

impl Charge {
    pub fn is_pair(&self) -> bool {
        !self.location.is_real()
    }
}

/// Partial-fraction form of `𝔓_1/𝔓_2`.
#[derive(Clone, Debug)]
pub struct FieldDecomposition {
    /// Merged charges with non-negligible weight, sorted by location.
    pub charges: Vec<Charge>,
    /// Weight at `1`, including any mass point located there.
    pub ell1: BigReal,
    /// Weight at `-1`, including any mass point located there.
    pub ell2: BigReal,
    /// Weight at each `c_j`.
    pub ell3: Vec<BigReal>,
    /// Zeros `u_j` of `δ_n` with their weights.
    pub u: Vec<(Complex, BigReal)>,
    /// Zeros `e_j` of `φ_{1,n}` with multiplicities.
    pub e: Vec<(Complex, usize)>,
    /// Residues `r(1)`, `r(-1)` and `r(c_j)`.
    pub r_right: BigReal,
    pub r_left: BigReal,
    pub r_points: Vec<BigReal>,
    /// Assumption violations; the formulas remain evaluable.
    pub warnings: Vec<String>,
    ode_num: Poly,
    ode_den: Poly,
}

/// Roots closer than this (relative) are treated as one location.
fn cluster_tol() -> BigReal {
    tol(6)
}

fn same_location(a: &Complex, b: &Complex) -> bool {
    (a - b).abs() <= cluster_tol() * (a.abs() + 1)
}

/// Taylor coefficients of `p` at `z` up to order `k`.
fn series(p: &Poly, z: &Complex, k: usize) -> Vec<Complex> {
    let mut t = p.taylor_coeffs_complex(z, k);
    t.resize(k + 1, Complex::zero());
    t
}

/// Laurent coefficients `(x-z)^{-m}..(x-z)^{-1}` of `num/den` outside a
/// cluster of `m` zeros of `den` around `z`. The `m` lowest Taylor
/// coefficients of `den` at `z` are treated as zero.
fn principal_part(num: &Poly, den: &Poly, z: &Complex, m: usize) -> Vec<Complex> {
    if m == 0 {
        return Vec::new();
    }
    let s = series(num, z, m - 1);
    let g: Vec<Complex> = series(den, z, 2 * m - 1)[m..].to_vec();
    let mut h: Vec<Complex> = Vec::with_capacity(m);
    for i in 0..m {
        let mut acc = s[i].clone();
        for j in 0..i {
            acc = &acc - &(&h[j] * &g[i - j]);
        }
        h.push(&acc / &g[0]);
    }
    h
}

/// A structural zero of `𝔓_2`.
struct Site {
    z: Complex,
    /// Multiplicity in `𝔓_2 = q_1 q_0²`.
    order: usize,
    /// Log-derivative weight before the `ψ_1/ψ_2` residue.
    base: i64,
    /// `±1` and mass points are exact locations.
    exact: bool,
    source: PoleSource,
}

struct Cluster {
    center: Complex,
    order: usize,
    base: i64,
    sources: Vec<PoleSource>,
    attractors: usize,
}

/// Single-linkage clusters of sites closer than [`cluster_tol`]. The
/// center is an exact member if present, else the mean.
fn cluster_sites(sites: Vec<Site>) -> Vec<Cluster> {
    let n = sites.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if same_location(&sites[i].z, &sites[j].z) {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == a {
                        *l = b;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for i in 0..n {
        if seen.contains(&label[i]) {
            continue;
        }
        seen.push(label[i]);
        let members: Vec<&Site> = (0..n).filter(|&k| label[k] == label[i]).map(|k| &sites[k]).collect();
        let center = match members.iter().find(|s| s.exact) {
            Some(s) => s.z.clone(),
            None => {
                let sum = members.iter().fold(Complex::zero(), |acc, s| &acc + &s.z);
                sum.scale(&BigReal::from(members.len()).recip())
            }
        };
        out.push(Cluster {
            center,
            order: members.iter().map(|s| s.order).sum(),
            base: members.iter().map(|s| s.base).sum(),
            sources: members.iter().map(|s| s.source.clone()).collect(),
            attractors: members.iter().filter(|s| s.source == PoleSource::Attractor).count(),
        });
    }
    out
}

/// Splits `𝔓_1/𝔓_2` into weighted simple poles. Zeros of `𝔓_2` closer than
/// [`cluster_tol`] are merged and carry the total residue of the cluster.
pub fn decompose_field(ld: &LadderData, family: &SobolevFamily) -> Result<FieldDecomposition> {
    let product = family.product();
    let mut warnings = Vec::new();

    let mut sites = vec![
        Site { z: Complex::real(BigReal::one()), order: 2, base: 1, exact: true, source: PoleSource::Right },
        Site { z: Complex::real(BigReal::from(-1)), order: 2, base: 1, exact: true, source: PoleSource::Left },
    ];
    for (j, p) in product.points().iter().enumerate() {
        let dj = p.max_order();
        sites.push(Site {
            z: Complex::real(p.c().clone()),
            order: 3 * dj + 2,
            base: 2 * dj as i64 + 3,
            exact: true,
            source: PoleSource::MassPoint(j),
        });
    }
    let u_roots = if ld.delta.degree().unwrap_or(0) > 0 { poly_roots(&ld.delta)? } else { Vec::new() };
    for z in &u_roots {
        sites.push(Site { z: z.clone(), order: 2, base: 1, exact: false, source: PoleSource::DeltaZero });
    }
    let e_roots = if ld.phi[0].degree().unwrap_or(0) > 0 { poly_roots(&ld.phi[0])? } else { Vec::new() };
    for z in &e_roots {
        sites.push(Site { z: z.clone(), order: 1, base: -1, exact: false, source: PoleSource::Attractor });
    }

    let mut clusters = cluster_sites(sites);
    for c in &mut clusters {
        if c.center.im.abs() <= cluster_tol() * (c.center.abs() + 1) {
            c.center.im = BigReal::zero();
        }
    }
    clusters.retain(|c| !c.center.im.is_negative());

    let mut charges = Vec::with_capacity(clusters.len());
    let mut e = Vec::new();
    for c in clusters {
        let pp = principal_part(&ld.p1, &ld.p2, &c.center, c.order);
        let total = pp.last().cloned().unwrap_or_else(Complex::zero);
        let scale = total.abs() + 1;
        for (i, h) in pp.iter().take(pp.len().saturating_sub(1)).enumerate() {
            if h.abs() > tol(4) * &scale {
                return Err(Error::AssumptionViolated {
                    pole: format!("{:?}", c.center),
                    detail: format!("pole of order {} with coefficient {h:?}", c.order - i),
                });
            }
        }
        let structural = c.sources.len() - c.sources.iter().filter(|s| **s == PoleSource::Attractor).count();
        if structural > 1 || (structural > 0 && c.attractors > 0) {
            warnings.push(format!("coincident poles at {:?} ({:?}) merged", c.center, c.sources));
        }
        if total.im.abs() > tol(4) * &scale {
            warnings.push(format!("complex residue {total:?} at {:?}", c.center));
        }
        if c.attractors > 0 {
            e.push((c.center.clone(), c.attractors));
        }
        let residue = Complex::new(&total.re - BigReal::from(c.base), total.im.clone());
        charges.push(Charge {
            location: c.center,
            weight: total.re,
            residue,
            sources: c.sources,
        });
    }

    for z in &u_roots {
        if !z.is_real() {
            warnings.push(format!("zero {z:?} of delta is not real"));
        }
    }
    let find = |src: &PoleSource| charges.iter().find(|c| c.sources.contains(src)).expect("source present");
    let ell1 = find(&PoleSource::Right).weight.clone();
    let ell2 = find(&PoleSource::Left).weight.clone();
    let r_right = find(&PoleSource::Right).residue.re.clone();
    let r_left = find(&PoleSource::Left).residue.re.clone();
    let mut ell3 = Vec::new();
    let mut r_points = Vec::new();
    for j in 0..product.n_points() {
        let ch = find(&PoleSource::MassPoint(j));
        ell3.push(ch.weight.clone());
        r_points.push(ch.residue.re.clone());
    }
    let u: Vec<(Complex, BigReal)> = charges
        .iter()
        .filter(|c| c.sources.contains(&PoleSource::DeltaZero))
        .map(|c| (c.location.clone(), c.weight.clone()))
        .collect();

    let negligible = tol(4);
    for (name, v) in [("ell1", &ell1), ("ell2", &ell2)] {
        if v.is_negative() && v.abs() > negligible {
            warnings.push(format!("{name} = {v:?} is negative"));
        }
    }
    for (j, v) in ell3.iter().enumerate() {
        if v.is_negative() && v.abs() > negligible {
            warnings.push(format!("ell3 at mass point {j} = {v:?} is negative"));
        }
    }
    for (z, v) in &u {
        if v.is_negative() && v.abs() > negligible {
            warnings.push(format!("ell4 at {z:?} = {v:?} is negative"));
        }
    }
    let s_roots = poly_roots(family.s(ld.n))?;
    for z in &u_roots {
        if s_roots.iter().any(|s| same_location(s, z)) {
            warnings.push(format!("zero {z:?} of delta is also a zero of S_n"));
        }
    }
    let mut hull_lo = BigReal::from(-1);
    let mut hull_hi = BigReal::one();
    for p in product.points() {
        hull_lo = hull_lo.min(p.c().clone());
        hull_hi = hull_hi.max(p.c().clone());
    }
    for (z, _) in &e {
        if z.is_real() && z.re > hull_lo && z.re < hull_hi {
            if z.re > -1 && z.re < 1 {
                warnings.push(format!("attractor {z:?} lies inside (-1, 1)"));
            } else {
                warnings.push(format!("attractor {z:?} lies inside the hull of [-1, 1] and the mass points"));
            }
        }
    }

    charges.retain(|c| c.weight.abs() > negligible);
    charges.sort_by(|a, b| {
        a.location
            .re
            .partial_cmp(&b.location.re)
            .unwrap_or(Ordering::Equal)
            .then(a.location.im.partial_cmp(&b.location.im).unwrap_or(Ordering::Equal))
    });

    Ok(FieldDecomposition {
        charges,
        ell1,
        ell2,
        ell3,
        u,
        e,
        r_right,
        r_left,
        r_points,
        warnings,
        ode_num: ld.p1.clone(),
        ode_den: ld.p2.clone(),
    })
}

impl FieldDecomposition {
    /// `Σ w / (x - p)` from the charges.
    pub fn field(&self, x: &BigReal) -> BigReal {
        self.charges
            .iter()
            .map(|c| {
                let a = x - &c.location.re;
                if c.is_pair() {
                    &c.weight * &a * 2 / (a.square() + c.location.im.square())
                } else {
                    &c.weight / a
                }
            })
            .sum()
    }

    /// `𝔓_1(x) / 𝔓_2(x)` by direct evaluation.
    pub fn ode_ratio(&self, x: &BigReal) -> BigReal {
        self.ode_num.eval(x) / self.ode_den.eval(x)
    }

    /// Largest relative mismatch between [`Self::field`] and
    /// [`Self::ode_ratio`] over 50 points of `(-1, 1)` away from poles.
    pub fn reconstruction_defect(&self) -> BigReal {
        let mut worst = BigReal::zero();
        let mut taken = 0;
        let mut i = 0u32;
        let guard = BigReal::parse("1e-3").expect("literal");
        while taken < 50 && i < 1000 {
            i += 1;
            let t = ((i as f64) * 0.618_033_988_749_895).fract() * 2.0 - 1.0;
            let x = BigReal::from_f64(t);
            let near = self
                .charges
                .iter()
                .any(|c| (&x - &c.location.re).abs() < guard && c.location.im.abs() < guard);
            if near || (&x.abs() - BigReal::one()).abs() < guard || self.ode_den.eval(&x).is_zero() {
                continue;
            }
            taken += 1;
            let a = self.field(&x);
            let b = self.ode_ratio(&x);
            let scale = a.abs().max(b.abs()).max(BigReal::one());
            worst = worst.max((a - b).abs() / scale);
        }
        worst
    }

    /// Real charges `(location, weight)`.
    pub fn real_charges(&self) -> impl Iterator<Item = &Charge> {
        self.charges.iter().filter(|c| !c.is_pair())
    }

    /// Pole weights that enter the external potential for ω inside the
    /// real line.
    pub fn check_configuration(&self, omega: &[BigReal]) -> Result<()> {
        for (i, a) in omega.iter().enumerate() {
            for b in &omega[i + 1..] {
                if a == b {
                    return Err(Error::SingularConfiguration(format!("coincident points at {a:?}")));
                }
            }
            for c in self.real_charges() {
                if *a == c.location.re {
                    return Err(Error::SingularConfiguration(format!("point {a:?} sits on a pole")));
                }
            }
        }
        Ok(())
    }
}

/// `E(ω)` with merged conjugate pairs.
pub fn energy(fd: &FieldDecomposition, omega: &[BigReal]) -> Result<BigReal> {
    fd.check_configuration(omega)?;
    let mut e = BigReal::zero();
    for (i, a) in omega.iter().enumerate() {
        for b in &omega[i + 1..] {
            e -= (a - b).abs().ln();
        }
        for c in &fd.charges {
            let d = a - &c.location.re;
            let log = if c.is_pair() {
                (d.square() + c.location.im.square()).ln()
            } else {
                d.abs().ln()
            };
            e -= &c.weight * log / 2;
        }
    }
    Ok(e)
}

/// `E(ω)` summing each conjugate pole separately through complex moduli.
pub fn energy_unmerged(fd: &FieldDecomposition, omega: &[BigReal]) -> Result<BigReal> {
    fd.check_configuration(omega)?;
    let mut e = BigReal::zero();
    for (i, a) in omega.iter().enumerate() {
        for b in &omega[i + 1..] {
            e -= (a - b).abs().ln();
        }
        let z = Complex::real(a.clone());
        for c in &fd.charges {
            e -= &c.weight * (&z - &c.location).abs().ln() / 2;
            if c.is_pair() {
                e -= &c.weight * (&z - &c.location.conj()).abs().ln() / 2;
            }
        }
    }
    Ok(e)
}

/// `∂E/∂ω_k`.
pub fn gradient(fd: &FieldDecomposition, omega: &[BigReal]) -> Result<Vec<BigReal>> {
    fd.check_configuration(omega)?;
    Ok((0..omega.len())
        .map(|k| {
            let mut g = BigReal::zero();
            for (i, b) in omega.iter().enumerate() {
                if i != k {
                    g -= (&omega[k] - b).recip();
                }
            }
            g - fd.field(&omega[k]) / 2
        })
        .collect())
}

/// External curvature `∂²V/∂ω_k²` of the field part alone.
fn field_curvature(fd: &FieldDecomposition, x: &BigReal) -> BigReal {
    fd.charges
        .iter()
        .map(|c| {
            let a = x - &c.location.re;
            if c.is_pair() {
                let b2 = c.location.im.square();
                let den = &a.square() + &b2;
                -(&c.weight * (b2 - a.square())) / den.square()
            } else {
                &c.weight / a.square() / 2
            }
        })
        .sum()
}

/// `∇²E`.
pub fn hessian(fd: &FieldDecomposition, omega: &[BigReal]) -> Result<SymMatrix> {
    fd.check_configuration(omega)?;
    let n = omega.len();
    let mut h = SymMatrix::zeros(n);
    for k in 0..n {
        let mut diag = field_curvature(fd, &omega[k]);
        for i in 0..n {
            if i != k {
                let inv2 = (&omega[k] - &omega[i]).square().recip();
                diag += &inv2;
                if i < k {
                    h.set(k, i, -inv2);
                }
            }
        }
        h.set(k, k, diag);
    }
    Ok(h)
}

/// Per-`k` external curvatures; all positive is sufficient for a minimum.
pub fn gershgorin_sufficient(fd: &FieldDecomposition, omega: &[BigReal]) -> Result<Vec<BigReal>> {
    fd.check_configuration(omega)?;
    Ok(omega.iter().map(|x| field_curvature(fd, x)).collect())
}

/// `max_k |2 Σ_{i≠k} 1/(x_k - x_i) + 𝔓_1(x_k)/𝔓_2(x_k)|` relative to the
/// larger of the two terms, evaluated from the ODE coefficients directly.
pub fn crit_point_defect(ld: &LadderData, zeros: &[BigReal]) -> BigReal {
    zeros
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let mut s = BigReal::zero();
            for (i, y) in zeros.iter().enumerate() {
                if i != k {
                    s += (x - y).recip() * 2;
                }
            }
            let r = ld.p1.eval(x) / ld.p2.eval(x);
            let scale = s.abs().max(r.abs()).max(BigReal::one());
            (s + r).abs() / scale
        })
        .fold(BigReal::zero(), BigReal::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    LocalMinimum,
    SaddlePoint,
    LocalMaximum,
    Degenerate,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::LocalMinimum => "LocalMinimum",
            Classification::SaddlePoint => "SaddlePoint",
            Classification::LocalMaximum => "LocalMaximum",
            Classification::Degenerate => "Degenerate",
        };
        f.write_str(s)
    }
}

/// Classification from eigenvalues against `tol(4) * hnorm`.
pub fn classify_spectrum(eigs: &[BigReal], hnorm: &BigReal) -> Classification {
    let floor = tol(4) * hnorm;
    if eigs.iter().any(|e| e.abs() < floor) {
        Classification::Degenerate
    } else if eigs.iter().all(|e| e.is_positive()) {
        Classification::LocalMinimum
    } else if eigs.iter().all(|e| e.is_negative()) {
        Classification::LocalMaximum
    } else {
        Classification::SaddlePoint
    }
}

#[derive(Clone, Debug)]
pub struct ElectroReport {
    pub n: usize,
    pub zeros: Vec<BigReal>,
    pub gradient: Vec<BigReal>,
    pub grad_norm: BigReal,
    pub hessian: SymMatrix,
    pub hessian_eigs: Vec<BigReal>,
    pub classification: Classification,
    pub curvatures: Vec<BigReal>,
    /// Coordinates fixed for the truncated Hessian (the set `𝓔`).
    pub negative_index_set: Vec<usize>,
    /// Eigenvalues of the Hessian with `𝓔` removed; empty unless a saddle.
    pub truncated_eigs: Vec<BigReal>,
    pub truncated_hessian_pd: bool,
    pub crit_point_defect: BigReal,
    pub energy: BigReal,
    pub warnings: Vec<String>,
}

/// Evaluates the model at the zeros of `S_n` and classifies them.
pub fn classify(fd: &FieldDecomposition, ld: &LadderData, family: &SobolevFamily, n: usize) -> Result<ElectroReport> {
    let zr = zeros_of(family, n)?;
    if !zr.complex.is_empty() {
        return Err(Error::ZerosNotSimple(format!("{} complex zeros", zr.complex.len())));
    }
    let zeros = zr.real;
    let sep = tol(4);
    if zeros.windows(2).any(|w| (&w[1] - &w[0]).abs() <= &sep * (w[0].abs() + 1)) {
        return Err(Error::ZerosNotSimple("repeated real zero".into()));
    }

    let grad = gradient(fd, &zeros)?;
    let grad_norm = grad.iter().map(BigReal::abs).fold(BigReal::zero(), BigReal::max);
    let h = hessian(fd, &zeros)?;
    let (eigs, vecs) = sym_eigen_vectors(&h)?;
    let classification = classify_spectrum(&eigs, &h.frobenius());
    let curvatures = gershgorin_sufficient(fd, &zeros)?;

    let mut fixed = Vec::new();
    let mut truncated_eigs = Vec::new();
    let mut truncated_hessian_pd = false;
    if classification == Classification::SaddlePoint {
        let n_neg = eigs.iter().filter(|e| e.is_negative()).count();
        let mut by_curv: Vec<usize> = (0..zeros.len()).filter(|&k| !curvatures[k].is_positive()).collect();
        by_curv.sort_by(|&a, &b| curvatures[a].partial_cmp(&curvatures[b]).unwrap_or(Ordering::Equal));
        by_curv.truncate(n_neg);
        fixed = by_curv;
        if fixed.len() < n_neg {
            let dominant = BigReal::parse("0.9").expect("literal");
            for (e, v) in eigs.iter().zip(&vecs) {
                if !e.is_negative() {
                    continue;
                }
                for (k, comp) in v.iter().enumerate() {
                    if comp.abs() > dominant && !fixed.contains(&k) {
                        fixed.push(k);
                    }
                }
            }
        }
        fixed.sort_unstable();
        let keep: Vec<usize> = (0..zeros.len()).filter(|k| !fixed.contains(k)).collect();
        let sub = h.principal(&keep);
        truncated_hessian_pd = cholesky_pd(&sub);
        truncated_eigs = crate::numkernel::sym_eigen(&sub)?;
    }

    let mut warnings = fd.warnings.clone();
    let curv_pos = curvatures.iter().all(BigReal::is_positive);
    if curv_pos && classification != Classification::LocalMinimum {
        warnings.push("positive curvatures but Hessian not positive definite".into());
    }
    let energy = energy(fd, &zeros)?;
    Ok(ElectroReport {
        n,
        crit_point_defect: crit_point_defect(ld, &zeros),
        zeros,
        gradient: grad,
        grad_norm,
        hessian: h,
        hessian_eigs: eigs,
        classification,
        curvatures,
        negative_index_set: fixed,
        truncated_eigs,
        truncated_hessian_pd,
        energy,
        warnings,
    })
}
