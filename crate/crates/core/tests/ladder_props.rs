mod common;

use proptest::prelude::*;
use sobolev_core::ladder::{
    build_ladder, ladder_residuals, leading_coefficient_law, ode_residual, q_cross_check, recurrence_check,
    structure_relation_defect,
};
use sobolev_core::numkernel::{rel_diff, tol, BigReal};
use sobolev_core::sobolev::build_family;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ladder_invariants(product in common::arb_product()) {
        let fam = build_family(&product, 9).unwrap();
        let d = product.d();
        let big_n = product.n_points();
        let rdn = product.rho_d_minus_n();
        for n in 2..=8 {
            let ld = build_ladder(&fam, n).unwrap();
            prop_assert_eq!(ld.big_delta.degree(), Some(2 * d));
            let bounds = [d + big_n, d + big_n + 1, d + big_n + 1];
            for (i, (di, phi)) in ld.delta_i.iter().zip(&ld.phi).enumerate() {
                let (_, r) = di.divrem(&rdn).unwrap();
                prop_assert!(r.norm_inf() <= tol(3) * di.norm_inf(), "Delta_{} remainder", i + 1);
                prop_assert!(phi.degree() <= Some(bounds[i]));
            }
            let (actual, predicted) = leading_coefficient_law(&ld, &fam);
            prop_assert!(rel_diff(&actual, &predicted, &BigReal::one()) <= tol(4));
            let (dq1, dq4) = q_cross_check(&ld, &fam).unwrap();
            prop_assert!(dq1 <= tol(4) && dq4 <= tol(4));
            prop_assert!(structure_relation_defect(&ld, &fam) <= tol(4));
            let (lower, raise) = ladder_residuals(&ld, &fam);
            prop_assert!(lower <= tol(4) && raise <= tol(4));
            prop_assert!(ode_residual(&ld, fam.s(n)) <= tol(4));
            prop_assert!(recurrence_check(&fam, n).unwrap().with_q1_n <= tol(4));
        }
    }
}

#[test]
fn recurrence_variants_on_examples() {
    for p in [common::intro(), common::example1(), common::example2(), common::example3()] {
        let fam = build_family(&p, 12).unwrap();
        for n in 2..12 {
            let rc = recurrence_check(&fam, n).unwrap();
            assert!(rc.with_q1_n <= tol(4), "n = {n}: {:?}", rc.with_q1_n);
            // The variant with the next q1 in the last coefficient does not hold.
            assert!(rc.with_q1_next > tol(4));
        }
    }
}
