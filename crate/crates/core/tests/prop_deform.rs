mod common;

use common::*;
use paracoh::catalog::{catalog_all, catalog_get, parse_algebra};
use paracoh::deform::{generic_dims, sample_row};
use paracoh::dkahler::{
    dkahler_decide, generic_top_power, grid_values, is_dkahler_form, power, DKahlerStatus, TopPower,
};
use paracoh::exterior::{basis, Form};
use paracoh::linalg::Subspace;
use paracoh::paracomplex::random_paracomplex;
use paracoh::scalar::{rat, Rational};
use proptest::prelude::*;
use rand::Rng;

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(200)
}

fn families() -> Vec<paracoh::deform::DeformationFamily> {
    catalog_all()
        .iter()
        .flat_map(|e| {
            e.structure_names()
                .filter_map(|s| e.family(s).ok())
                .collect::<Vec<_>>()
        })
        .collect()
}

fn all_grid_points(k: usize, n: usize) -> Vec<Vec<i64>> {
    let vals = grid_values(n);
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| vals.iter().map(move |&v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn generic_dims_hold_at_most_sample_points(seed in any::<u64>()) {
        let mut rng = rng(seed);
        for f in families() {
            let generic = generic_dims(&f, 2).unwrap();
            let mut agree = 0;
            for _ in 0..10 {
                let d = rng.gen_range(2i64..1000);
                let t = rat(rng.gen_range(1..d), d);
                if let Ok(row) = sample_row(&f, &t, 2) {
                    if row.dims() == generic.dims() {
                        agree += 1;
                    }
                }
            }
            prop_assert!(agree >= 8, "{} of 10 agree", agree);
        }
    }

    #[test]
    fn returned_witnesses_verify(which in 0usize..3, seed in any::<u64>()) {
        let g = parse_algebra(NILPOTENT_4[which]).unwrap();
        let (ps, _) = random_paracomplex(&g, seed, true, 100_000).unwrap();
        let v = dkahler_decide(&g, &ps).unwrap();
        match v.status {
            DKahlerStatus::Witness => prop_assert!(is_dkahler_form(&g, &ps, v.witness.as_ref().unwrap())),
            _ => prop_assert!(v.witness.is_none()),
        }
    }

    #[test]
    fn degeneracy_certificate_matches_grid(k in 1usize..=3, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let monos = basis(4, 2);
        let vecs: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..monos.len()).map(|_| if rng.gen_bool(0.3) { r(rng.gen_range(-2..=2)) } else { r(0) }).collect())
            .collect();
        let space = Subspace::span(monos.len(), vecs);
        let forms: Vec<Form<Rational>> = space.basis().iter().map(|v| Form::from_vector(4, 2, v)).collect();
        let grid_hit = all_grid_points(forms.len(), 2).into_iter().any(|x| {
            let mut w = Form::zero(4);
            for (f, &c) in forms.iter().zip(&x) {
                w = w.add(&f.scale(&r(c)));
            }
            !power(&w, 2).is_zero()
        });
        match generic_top_power(&space, 2) {
            TopPower::IdenticallyZero => prop_assert!(!grid_hit),
            TopPower::NonzeroWithWitness(w) => {
                prop_assert!(grid_hit);
                prop_assert!(!power(&w, 2).is_zero());
            }
        }
    }
}

#[test]
fn semicontinuity_patterns() {
    let dims = |entry: &str, t: Option<(i64, i64)>| {
        let f = catalog_get(entry).unwrap().family("K_t").unwrap();
        match t {
            None => generic_dims(&f, 2).unwrap().dims(),
            Some((a, b)) => sample_row(&f, &rat(a, b), 2).unwrap().dims(),
        }
    };
    let (gp, gm) = dims("ex2.17", None);
    let (p0, m0) = dims("ex2.17", Some((0, 1)));
    assert!(p0 <= gp && m0 >= gm);

    // both dimensions drop or stay at the special points
    let g = dims("jump-sci", None);
    for t in [(0, 1), (1, 1)] {
        let s = dims("jump-sci", Some(t));
        assert!(s.0 <= g.0 && s.1 <= g.1);
        assert_ne!(s, g);
    }
    // both dimensions rise or stay
    let g = dims("jump-scs", None);
    for t in [(0, 1), (1, 1)] {
        let s = dims("jump-scs", Some(t));
        assert!(s.0 >= g.0 && s.1 >= g.1);
        assert_ne!(s, g);
    }
}

#[test]
fn verdicts_change_along_family() {
    let f = catalog_get("ex2.17").unwrap().family("K_t").unwrap();
    let at0 = sample_row(&f, &rat(0, 1), 2).unwrap();
    let generic = generic_dims(&f, 2).unwrap();
    assert!(at0.pure && at0.full);
    assert!(!generic.pure && !generic.full);
}
