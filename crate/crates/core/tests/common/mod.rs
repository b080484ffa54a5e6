#![allow(dead_code)]

use sobolev_core::jacobi::JacobiParams;
use sobolev_core::numkernel::BigReal;
use sobolev_core::sobolev::{MassPoint, SobolevProduct};

pub fn real(s: &str) -> BigReal {
    BigReal::parse(s).unwrap()
}

pub fn product(alpha: i64, beta: i64, points: &[(i64, &[(usize, i64)])]) -> SobolevProduct {
    let params = JacobiParams::new(BigReal::from(alpha), BigReal::from(beta)).unwrap();
    let pts = points
        .iter()
        .map(|(c, terms)| {
            MassPoint::new(
                BigReal::from(*c),
                terms.iter().map(|(k, l)| (*k, BigReal::from(*l))).collect(),
            )
            .unwrap()
        })
        .collect();
    SobolevProduct::new(params, pts).unwrap()
}

/// Mass points at ±2 on first derivatives, Legendre weight.
pub fn intro() -> SobolevProduct {
    product(0, 0, &[(-2, &[(1, 1)]), (2, &[(1, 1)])])
}

/// α = 0, β = 100, λ = 1 on f'(2).
pub fn example1() -> SobolevProduct {
    product(0, 100, &[(2, &[(1, 1)])])
}

/// α = 0, β = 110, λ = 1 on f'(1) and on f''(2).
pub fn example2() -> SobolevProduct {
    product(0, 110, &[(1, &[(1, 1)]), (2, &[(2, 1)])])
}

/// Legendre weight, λ = 1 on f'(2).
pub fn example3() -> SobolevProduct {
    product(0, 0, &[(2, &[(1, 1)])])
}

/// Random products with rational parameters: α, β in quarter steps of
/// `[-0.75, 5]`, one or two mass points outside `(-1, 1)`, orders up to 2.
pub fn arb_product() -> impl proptest::strategy::Strategy<Value = SobolevProduct> {
    use proptest::prelude::*;
    let point = (prop::sample::select(vec![-12i64, -8, -6, -4, 4, 6, 8, 12]), 0usize..=2, 1i64..=16);
    (-3i64..=20, -3i64..=20, prop::collection::vec(point, 1..=2)).prop_filter_map(
        "mass locations must be distinct",
        |(a, b, pts)| {
            if pts.len() == 2 && pts[0].0 == pts[1].0 {
                return None;
            }
            let params = JacobiParams::new(BigReal::ratio(a, 4), BigReal::ratio(b, 4)).ok()?;
            let pts = pts
                .into_iter()
                .map(|(c, k, l)| MassPoint::new(BigReal::ratio(c, 4), vec![(k, BigReal::ratio(l, 4))]).unwrap())
                .collect();
            SobolevProduct::new(params, pts).ok()
        },
    )
}
