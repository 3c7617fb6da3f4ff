#![allow(dead_code)]

use paracoh::catalog::parse_algebra;
use paracoh::exterior::Form;
use paracoh::lie::LieAlgebra;
use paracoh::linalg::Matrix;
use paracoh::paracomplex::{diagonal_k, is_integrable, ParaStructure};
use paracoh::scalar::{Field, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn r(n: i64) -> Rational {
    Rational::from_i64(n)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const NILPOTENT_4: [&str; 3] = ["(0,0,0,0)", "(0,0,12,0)", "(0,0,12,13)"];

pub const NILPOTENT_6: [&str; 8] = [
    "(0,0,0,0,0,0)",
    "(0,0,0,0,12,13)",
    "(0,0,0,12,13,24)",
    "(0,0,12,0,0,45)",
    "(0,0,0,0,0,12)",
    "(0,0,0,0,12,34)",
    "(0,0,12,13,14,15)",
    "(0,0,0,12,13,23)",
];

/// Algebra in the basis given by the columns of `a`, and `K` transported along.
pub fn rebase(
    g: &LieAlgebra,
    k: &Matrix<Rational>,
    a: &Matrix<Rational>,
) -> (LieAlgebra, Matrix<Rational>) {
    let n = g.dim();
    let a_inv = a.inverse().unwrap();
    let mut diffs: Vec<Form<Rational>> = (0..n).map(|_| Form::zero(n)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let br = a_inv.apply(&g.bracket(&a.column(i), &a.column(j)));
            for (kk, c) in br.iter().enumerate() {
                if !Field::is_zero(c) {
                    diffs[kk].add_term(&[i as u8, j as u8], -c.clone());
                }
            }
        }
    }
    let g2 = LieAlgebra::new(diffs).unwrap();
    (g2, a_inv.mul(k).mul(a))
}

/// Random unipotent lower-triangular matrix with entries in `{-1, 0, 1}`.
pub fn unipotent(n: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            m.set(i, j, r(rng.gen_range(-1..=1)));
        }
    }
    m
}

/// Sign patterns with equal numbers of `+` and `-`.
pub fn balanced_patterns(n: usize) -> Vec<Vec<bool>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == n / 2)
        .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Integrable diagonal structures on `g`.
pub fn integrable_patterns(g: &LieAlgebra) -> Vec<ParaStructure<Rational>> {
    balanced_patterns(g.dim())
        .into_iter()
        .map(|s| ParaStructure::validate(diagonal_k(&s), g.dim()).unwrap())
        .filter(|ps| is_integrable(ps, g))
        .collect()
}

/// An integrable pair isomorphic to a diagonal one, written in a random basis.
pub fn rebased_sample(algebra: &str, seed: u64) -> Option<(LieAlgebra, ParaStructure<Rational>)> {
    let g = parse_algebra(algebra).unwrap();
    let pats = integrable_patterns(&g);
    if pats.is_empty() {
        return None;
    }
    let mut rng = rng(seed);
    let ps = &pats[rng.gen_range(0..pats.len())];
    let a = unipotent(g.dim(), &mut rng);
    let (g2, k2) = rebase(&g, ps.k_matrix(), &a);
    let ps2 = ParaStructure::validate(k2, g.dim()).unwrap();
    Some((g2, ps2))
}

/// `ℝ ⋉_A ℝ^m`: `d e^{k} = Σ_j A_{kj} e^{1j}` for `k, j ≥ 2`.
pub fn semidirect(a: &[Vec<i64>]) -> LieAlgebra {
    let m = a.len();
    let n = m + 1;
    let mut diffs: Vec<Form<Rational>> = vec![Form::zero(n)];
    for row in a {
        let mut f = Form::zero(n);
        for (j, &c) in row.iter().enumerate() {
            if c != 0 {
                f.add_term(&[0, (j + 1) as u8], r(c));
            }
        }
        diffs.push(f);
    }
    LieAlgebra::new(diffs).unwrap()
}
pub mod props;
