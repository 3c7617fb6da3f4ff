mod common;

use common::props::*;
use common::*;
use paracoh::exterior::{
    boundary, boundary_matrix, cdiff, diff_matrix, pairing, wedge, Multivector,
};
use paracoh::lie::{validate_jacobi, CsFlag, LieAlgebra};
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(200)
}

#[test]
fn triangular_generator_hits_both_outcomes() {
    let valid = (0..200u64)
        .filter(|&s| validate_jacobi(&raw_diffs(5, s)).is_ok())
        .count();
    assert!(valid > 20 && valid < 180, "{valid}");
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn d_squared_iff_jacobi_holds(n in 3usize..=5, seed in any::<u64>()) {
        d_squared_iff_jacobi(n, seed)?;
    }

    #[test]
    fn triangular_algebras_are_nilpotent(n in 3usize..=6, seed in any::<u64>()) {
        let Ok(g) = LieAlgebra::new(raw_diffs(n, seed)) else { return Ok(()) };
        let step = g.lower_central_series().step.unwrap();
        prop_assert!(step <= n);
        prop_assert!(g.is_solvable());
        prop_assert_eq!(g.completely_solvable_flag(), CsFlag::Nilpotent);
        prop_assert!(g.unimodular_by_top_differential());
        for l in 0..n {
            let d = diff_matrix(&g, l);
            prop_assert!(diff_matrix(&g, l + 1).mul(&d).is_zero());
        }
    }

    #[test]
    fn unimodular_criteria_agree(a in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 3)) {
        unimodular_criteria(&a)?;
    }

    #[test]
    fn leibniz_rule(idx in 0usize..19, p in 0usize..=3, q in 0usize..=3, seed in any::<u64>()) {
        let g = &fixture_algebras()[idx];
        let n = g.dim();
        let (p, q) = (p.min(n), q.min(n));
        let a = random_form(n, p, seed);
        let b = random_form(n, q, seed ^ 0x5a5a);
        let lhs = cdiff(g, &wedge(&a, &b).unwrap());
        let sign = if p % 2 == 0 { r(1) } else { r(-1) };
        let rhs = wedge(&cdiff(g, &a), &b).unwrap().add(&wedge(&a, &cdiff(g, &b)).unwrap().scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_is_adjoint_of_d(idx in 0usize..19, l in 1usize..=6, seed in any::<u64>()) {
        let g = &fixture_algebras()[idx];
        let n = g.dim();
        let l = l.min(n);
        let a = random_form(n, l - 1, seed);
        let v = Multivector(random_form(n, l, seed ^ 0xabc));
        prop_assert_eq!(pairing(&a, &boundary(g, &v)), pairing(&cdiff(g, &a), &v));
        prop_assert!(boundary(g, &boundary(g, &v)).0.is_zero());
        prop_assert_eq!(boundary_matrix(g, l), diff_matrix(g, l - 1).transpose());
    }

    #[test]
    fn poincare_duality_for_unimodular(a in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 2), pick in 0usize..30) {
        poincare_duality(&a, pick)?;
    }

    #[test]
    fn cup_is_well_defined_on_classes(idx in 0usize..19, p in 1usize..=3, q in 1usize..=3, seed in any::<u64>()) {
        cup_well_defined(idx, p, q, seed)?;
    }
}
