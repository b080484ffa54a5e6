use proptest::prelude::*;
use sobolev_core::jacobi::{build_jacobi, JacobiParams};
use sobolev_core::ladder::relative_residual;
use sobolev_core::numkernel::{poly_roots, tol, BigReal, Poly};
use sobolev_core::sobolev::inner_mu;

fn params(a: i64, b: i64) -> JacobiParams {
    JacobiParams::new(BigReal::ratio(a, 4), BigReal::ratio(b, 4)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn orthogonal_with_recorded_norms(a in -3i64..=80, b in -3i64..=80) {
        let cache = build_jacobi(params(a, b), 8);
        for i in 0..=8 {
            for j in 0..=i {
                let ip = inner_mu(cache.poly(i), cache.poly(j), cache.params());
                let scale = (cache.norm(i) * cache.norm(j)).sqrt();
                if i == j {
                    prop_assert!(((&ip - cache.norm(i)) / cache.norm(i)).abs() <= tol(3));
                } else {
                    prop_assert!(ip.abs() <= tol(3) * scale);
                }
            }
        }
    }

    #[test]
    fn classical_ode_holds(a in -3i64..=80, b in -3i64..=80, n in 1usize..=12) {
        let p = params(a, b);
        let cache = build_jacobi(p.clone(), n);
        let pn = cache.poly(n);
        let first = Poly::from_coeffs(vec![p.beta() - p.alpha(), -(p.alpha() + p.beta() + 2)]);
        let eig = BigReal::from(n) * (p.alpha() + p.beta() + BigReal::from(n + 1));
        let r = relative_residual(&[
            &Poly::one_minus_x2() * &pn.derivative_n(2),
            &first * &pn.derivative(),
            pn.scale(&eig),
        ]);
        prop_assert!(r <= tol(4));
    }

    #[test]
    fn zeros_inside_and_simple(a in -3i64..=80, b in -3i64..=80, n in 1usize..=12) {
        let cache = build_jacobi(params(a, b), n);
        let roots = poly_roots(cache.poly(n)).unwrap();
        prop_assert!(roots.iter().all(|z| z.is_real()));
        let mut xs: Vec<BigReal> = roots.into_iter().map(|z| z.re).collect();
        xs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        prop_assert!(xs.iter().all(|x| x.abs() < BigReal::one()));
        for w in xs.windows(2) {
            prop_assert!(&w[1] - &w[0] > tol(4));
        }
    }
}
