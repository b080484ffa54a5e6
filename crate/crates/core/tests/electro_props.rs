mod common;

use proptest::prelude::*;
use sobolev_core::electrostatics::{crit_point_defect, decompose_field, energy, energy_unmerged, PoleSource};
use sobolev_core::ladder::build_ladder;
use sobolev_core::numkernel::{rel_diff, tol, BigReal};
use sobolev_core::sobolev::{build_family, zeros_of, SobolevProduct};

fn check_product(p: &SobolevProduct, n: usize) -> Result<(), TestCaseError> {
    let fam = build_family(p, n).unwrap();
    let ld = build_ladder(&fam, n).unwrap();
    let fd = decompose_field(&ld, &fam).unwrap();
    prop_assert!(fd.reconstruction_defect() <= tol(4));
    let z = zeros_of(&fam, n).unwrap();
    if z.complex.is_empty() {
        prop_assert!(crit_point_defect(&ld, &z.real) <= tol(4));
        // Shift off the zeros so the configuration differs from the critical point.
        let omega: Vec<BigReal> = z.real.iter().map(|x| x + BigReal::from_f64(1e-7)).collect();
        if let (Ok(a), Ok(b)) = (energy(&fd, &omega), energy_unmerged(&fd, &omega)) {
            prop_assert!(rel_diff(&a, &b, &BigReal::one()) <= tol(3));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn decomposition_invariants(product in common::arb_product(), n in 2usize..=8) {
        check_product(&product, n)?;
    }
}

#[test]
fn examples_at_degree_twelve() {
    for p in [common::intro(), common::example1(), common::example2(), common::example3()] {
        check_product(&p, 12).unwrap();
    }
}

#[test]
fn endpoints_carry_exponent_weights() {
    // Example 3 has α = β = 0 and its mass point away from 1: both endpoint weights are 1.
    let p = common::example3();
    let fam = build_family(&p, 12).unwrap();
    let fd = decompose_field(&build_ladder(&fam, 12).unwrap(), &fam).unwrap();
    for src in [PoleSource::Right, PoleSource::Left] {
        let c = fd.charges.iter().find(|c| c.sources.contains(&src)).unwrap();
        assert!((&c.weight - BigReal::one()).abs() <= tol(4));
    }
    let ex1 = common::example1();
    let fam = build_family(&ex1, 12).unwrap();
    let fd = decompose_field(&build_ladder(&fam, 12).unwrap(), &fam).unwrap();
    assert!((&fd.ell2 - BigReal::from(101)).abs() <= tol(4));
    assert!((&fd.ell1 - BigReal::one()).abs() <= tol(4));
}

#[test]
fn external_curvatures_agree_with_the_spectrum() {
    use sobolev_core::electrostatics::{classify, Classification};
    let run = |p: SobolevProduct| {
        let fam = build_family(&p, 12).unwrap();
        let ld = build_ladder(&fam, 12).unwrap();
        let fd = decompose_field(&ld, &fam).unwrap();
        classify(&fd, &ld, &fam, 12).unwrap()
    };
    let ex1 = run(common::example1());
    assert!(ex1.curvatures.iter().all(BigReal::is_positive));
    assert_eq!(ex1.classification, Classification::LocalMinimum);
    let ex3 = run(common::example3());
    assert!(!ex3.curvatures[11].is_positive());
    assert_eq!(ex3.negative_index_set, vec![11]);
}
