//! Reference products shared by the exit-criteria suite.

use sobolev_core::jacobi::JacobiParams;
use sobolev_core::numkernel::BigReal;
use sobolev_core::sobolev::{MassPoint, SobolevProduct};

/// Integer exponents and masses; `points` lists `(c, [(k, λ)])`.
pub fn product(alpha: i64, beta: i64, points: &[(i64, &[(usize, i64)])]) -> SobolevProduct {
    let params = JacobiParams::new(BigReal::from(alpha), BigReal::from(beta)).expect("valid exponents");
    let pts = points
        .iter()
        .map(|(c, terms)| {
            MassPoint::new(BigReal::from(*c), terms.iter().map(|(k, l)| (*k, BigReal::from(*l))).collect())
                .expect("valid mass point")
        })
        .collect();
    SobolevProduct::new(params, pts).expect("distinct locations")
}

/// Legendre weight, λ = 1 on f'(±2).
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

pub fn all() -> Vec<(&'static str, SobolevProduct)> {
    vec![("intro", intro()), ("example1", example1()), ("example2", example2()), ("example3", example3())]
}
