//! Property bodies shared by the proptest suites and the acceptance runner.

use super::*;
use paracoh::catalog::{catalog_all, parse_algebra};
use paracoh::cohomology::{
    betti, betti_numbers, cochain_slice, cup, homology_subgroups, is_exact, subgroup_dims,
};
use paracoh::exterior::{basis, cdiff, cdiff_with, Form};
use paracoh::lie::{validate_jacobi, LieAlgebra};
use paracoh::linalg::Subspace;
use paracoh::paracomplex::{
    diagonal_k, is_abelian, is_integrable, random_paracomplex, ParaStructure,
};
use paracoh::scalar::{Field, Rational};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::Rng;

pub type PropResult = Result<(), TestCaseError>;

/// Strictly triangular structure equations with coefficients in {-1, 0, 1}.
pub fn raw_diffs(n: usize, seed: u64) -> Vec<Form<Rational>> {
    let mut rng = rng(seed);
    (0..n)
        .map(|k| {
            let mut f = Form::zero(n);
            for i in 0..k {
                for j in i + 1..k {
                    if rng.gen_bool(0.3) {
                        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
                        f.add_term(&[i as u8, j as u8], r(c));
                    }
                }
            }
            f
        })
        .collect()
}

// brackets straight from the structure constants
pub fn bracket_jacobi_holds(diffs: &[Form<Rational>]) -> bool {
    let n = diffs.len();
    let br = |l: usize, m: usize| -> Vec<Rational> {
        (0..n)
            .map(|k| {
                if l == m {
                    return r(0);
                }
                let (a, b, s) = if l < m { (l, m, 1) } else { (m, l, -1) };
                -diffs[k].coeff(&[a as u8, b as u8]) * r(s)
            })
            .collect()
    };
    let br_vec = |x: &[Rational], m: usize| -> Vec<Rational> {
        let mut out = vec![r(0); n];
        for (l, c) in x.iter().enumerate() {
            if Field::is_zero(c) {
                continue;
            }
            for (k, v) in br(l, m).into_iter().enumerate() {
                out[k] = out[k].clone() + c.clone() * v;
            }
        }
        out
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let t1 = br_vec(&br(a, b), c);
                let t2 = br_vec(&br(b, c), a);
                let t3 = br_vec(&br(c, a), b);
                if (0..n).any(|k| !Field::is_zero(&(t1[k].clone() + t2[k].clone() + t3[k].clone())))
                {
                    return false;
                }
            }
        }
    }
    true
}

pub fn d_squared_vanishes(diffs: &[Form<Rational>]) -> bool {
    let n = diffs.len();
    (0..=n).all(|l| {
        basis(n, l).monomials().iter().all(|m| {
            let a = Form::monomial(n, m, r(1));
            cdiff_with(diffs, &cdiff_with(diffs, &a)).is_zero()
        })
    })
}

pub fn random_form(n: usize, degree: usize, seed: u64) -> Form<Rational> {
    let mut rng = rng(seed);
    let mut f = Form::zero(n);
    for m in basis(n, degree).monomials() {
        if rng.gen_bool(0.4) {
            f.add_term(m, r(rng.gen_range(-3..=3)));
        }
    }
    f
}

pub fn fixture_algebras() -> Vec<LieAlgebra> {
    let mut v: Vec<LieAlgebra> = catalog_all().into_iter().map(|e| e.algebra).collect();
    v.extend(NILPOTENT_6.iter().map(|s| parse_algebra(s).unwrap()));
    v
}

/// Integrable sample: seeded rejection sampling in dimension 4, a rebased
/// diagonal structure in dimension 6.
pub fn nilpotent_sample(pick: usize, seed: u64) -> (LieAlgebra, ParaStructure<Rational>) {
    if pick % 2 == 0 {
        let g = parse_algebra(NILPOTENT_4[pick / 2 % 3]).unwrap();
        let (ps, _) = random_paracomplex(&g, seed, true, 100_000).unwrap();
        (g, ps)
    } else {
        rebased_sample(NILPOTENT_6[pick / 2 % NILPOTENT_6.len()], seed).unwrap()
    }
}

pub fn d_squared_iff_jacobi(n: usize, seed: u64) -> PropResult {
    let diffs = raw_diffs(n, seed);
    let by_validator = validate_jacobi(&diffs).is_ok();
    prop_assert_eq!(by_validator, bracket_jacobi_holds(&diffs));
    prop_assert_eq!(by_validator, d_squared_vanishes(&diffs));
    prop_assert_eq!(by_validator, LieAlgebra::new(diffs).is_ok());
    Ok(())
}

pub fn unimodular_criteria(a: &[Vec<i64>]) -> PropResult {
    let g = semidirect(a);
    let trace: i64 = (0..a.len()).map(|i| a[i][i]).sum();
    prop_assert_eq!(g.unimodular_by_traces(), trace == 0);
    prop_assert_eq!(g.unimodular_by_top_differential(), trace == 0);
    Ok(())
}

pub fn extreme_bidegrees_closed(pick: usize, seed: u64) -> PropResult {
    let (g, ps) = nilpotent_sample(pick, seed);
    if !(g.is_unimodular() && is_abelian(&ps, &g)) {
        return Err(TestCaseError::reject("not unimodular and Abelian"));
    }
    let n = g.dim() / 2;
    let bg = ps.bigrading(n);
    for space in [bg.pq_space(n, 0), bg.pq_space(0, n)] {
        for v in space.basis() {
            prop_assert!(cdiff(&g, &Form::from_vector(g.dim(), n, v)).is_zero());
        }
    }
    Ok(())
}

pub fn step_bounds(pick: usize, seed: u64) -> PropResult {
    let (g, ps) = nilpotent_sample(pick, seed);
    let n = g.dim() / 2;
    for h in [ps.g_plus(), ps.g_minus()] {
        let s = g.lower_central_series_of(h).step.unwrap();
        prop_assert!(1 <= s && s <= n - 1, "step {} on {}", s, g);
    }
    Ok(())
}

/// Every (catalog structure, stage) pair on unimodular algebras.
pub fn implication_diagram_on_catalog() -> PropResult {
    for e in catalog_all() {
        let g = &e.algebra;
        if !g.is_unimodular() {
            continue;
        }
        for s in e.structure_names() {
            let Ok(ps) = e.structure(s) else { continue };
            implication_diagram(g, &ps)?;
        }
    }
    Ok(())
}

pub fn implication_diagram(g: &LieAlgebra, ps: &ParaStructure<Rational>) -> PropResult {
    let dim = g.dim();
    for l in 0..=dim {
        let c = subgroup_dims(g, ps, l).unwrap();
        let h = homology_subgroups(g, ps, l).unwrap();
        let h_dual = homology_subgroups(g, ps, dim - l).unwrap();
        let c_dual = subgroup_dims(g, ps, dim - l).unwrap();
        if c.full {
            prop_assert!(h.pure, "{} stage {}: full but homology not pure", g, l);
            prop_assert!(
                h_dual.full,
                "{} stage {}: full but homology not full at {}",
                g,
                l,
                dim - l
            );
            prop_assert!(
                c_dual.pure,
                "{} stage {}: full but not pure at {}",
                g,
                l,
                dim - l
            );
        }
        if h_dual.full {
            prop_assert!(
                c_dual.pure,
                "{} stage {}: homology full but not pure",
                g,
                dim - l
            );
        }
    }
    Ok(())
}

pub const SMALL: [&str; 6] = [
    "(0,0)",
    "(0,12)",
    "(0,0,12)",
    "(0,0,0)",
    "(0,13,-12)",
    "(0,0,12,13)",
];

pub fn products_pure_and_full(a: usize, b: usize) -> PropResult {
    let g1 = parse_algebra(SMALL[a]).unwrap();
    let g2 = parse_algebra(SMALL[b]).unwrap();
    if g1.dim() != g2.dim() {
        return Err(TestCaseError::reject("factor dimensions differ"));
    }
    let g = g1.direct_sum(&g2).unwrap();
    let m = g1.dim();
    let signs: Vec<bool> = (0..2 * m).map(|i| i < m).collect();
    let ps = ParaStructure::<Rational>::validate(diagonal_k(&signs), 2 * m).unwrap();
    prop_assert!(is_integrable(&ps, &g));
    for l in 0..=g.dim() {
        let r = subgroup_dims(&g, &ps, l).unwrap();
        prop_assert!(r.pure_and_full, "{} stage {}", g, l);
    }
    prop_assert_eq!(betti(&g, 1), betti(&g1, 1) + betti(&g2, 1));
    Ok(())
}

pub fn abelian_pure_at_stage_two(pick: usize, seed: u64) -> PropResult {
    let (g, ps) = nilpotent_sample(pick, seed);
    if !is_abelian(&ps, &g) {
        return Err(TestCaseError::reject("not Abelian"));
    }
    prop_assert!(subgroup_dims(&g, &ps, 2).unwrap().pure);
    Ok(())
}

/// `a` supplies the first two rows of a traceless 3×3 block.
pub fn poincare_duality(a: &[Vec<i64>], pick: usize) -> PropResult {
    let mut m = vec![a[0].clone(), a[1].clone(), vec![1, -1, 0]];
    m[2][2] = -(m[0][0] + m[1][1]);
    let mut fixtures: Vec<LieAlgebra> = fixture_algebras()
        .into_iter()
        .filter(|g| g.is_unimodular())
        .collect();
    fixtures.push(semidirect(&m));
    let g = &fixtures[pick % fixtures.len()];
    prop_assert!(g.is_unimodular());
    let b = betti_numbers(g);
    let n = g.dim();
    for l in 0..=n {
        prop_assert_eq!(b[l], b[n - l]);
    }
    let sd = semidirect(&m);
    for l in 0..=4 {
        prop_assert_eq!(betti(&sd, l), betti(&sd, 4 - l));
    }
    Ok(())
}

pub fn cup_well_defined(idx: usize, p: usize, q: usize, seed: u64) -> PropResult {
    let fixtures = fixture_algebras();
    let g = &fixtures[idx % fixtures.len()];
    let n = g.dim();
    let (p, q) = (p.min(n - 1), q.min(n - p.min(n - 1)));
    let slice_a = cochain_slice::<Rational>(g, p);
    let slice_b = cochain_slice::<Rational>(g, q);
    let mut rng = rng(seed);
    let mut pick = |z: &Subspace<Rational>| {
        let mut v = vec![r(0); z.ambient()];
        for b in z.basis() {
            let c = r(rng.gen_range(-2..=2));
            for (x, y) in v.iter_mut().zip(b) {
                *x = x.clone() + c.clone() * y.clone();
            }
        }
        v
    };
    let a = Form::from_vector(n, p, &pick(&slice_a.z));
    let b = Form::from_vector(n, q, &pick(&slice_b.z));
    // shift each representative by an exact form
    let da = cdiff(g, &random_form(n, p - 1, seed ^ 1));
    let db = cdiff(g, &random_form(n, q - 1, seed ^ 2));
    let c1 = cup(g, &a, &b).unwrap();
    let c2 = cup(g, &a.add(&da), &b.add(&db)).unwrap();
    prop_assert!(is_exact(g, &c2.sub(&c1)));
    Ok(())
}
