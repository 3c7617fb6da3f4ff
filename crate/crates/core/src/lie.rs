//! Lie algebras given by structure constants.
//!
//! Convention: `d e^k = Σ_{l<m} c^k_{lm} e^{lm}` and `dα = −α([·,·])`, hence
//! `[e_l, e_m] = −Σ_k c^k_{lm} e_k`. The sign flip happens only in
//! [`LieAlgebra::new`], which builds the bracket table from the differentials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exterior::{basis, cdiff_with, diff_matrix, Form};
use crate::linalg::char_poly;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::{sturm_real_root_count, Bound, Field, Rational};

pub const MAX_DIM: usize = 9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    Dimension(usize),
    #[error("d e^{k} must be a 2-form over {n} generators")]
    NotTwoForm { k: usize, n: usize },
    #[error("Jacobi identity fails: d(d e^{k}) = {witness} != 0")]
    Jacobi { k: usize, witness: String },
}

/// Lie algebra with exact rational structure constants.
#[derive(Clone, PartialEq)]
pub struct LieAlgebra {
    n: usize,
    diffs: Vec<Form<Rational>>,
    // brackets[l][m] = coordinates of [e_l, e_m]
    brackets: Vec<Vec<Vec<Rational>>>,
}

/// First generator (1-based) with `d² e^k ≠ 0`, with the offending 3-form.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiViolation {
    pub k: usize,
    pub d2: Form<Rational>,
}

/// Checks `d(d e^k) = 0` for every generator, in order.
pub fn validate_jacobi(diffs: &[Form<Rational>]) -> Result<(), JacobiViolation> {
    for (k, dk) in diffs.iter().enumerate() {
        let d2 = cdiff_with(diffs, dk);
        if !d2.is_zero() {
            return Err(JacobiViolation { k: k + 1, d2 });
        }
    }
    Ok(())
}

impl LieAlgebra {
    /// Builds the algebra from `d e^1, …, d e^n`, validating Jacobi.
    pub fn new(diffs: Vec<Form<Rational>>) -> Result<Self, LieError> {
        let n = diffs.len();
        if n == 0 || n > MAX_DIM {
            return Err(LieError::Dimension(n));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.n() != n || !d.is_homogeneous_of(2) {
                return Err(LieError::NotTwoForm { k: k + 1, n });
            }
        }
        if let Err(v) = validate_jacobi(&diffs) {
            return Err(LieError::Jacobi {
                k: v.k,
                witness: v.d2.render(),
            });
        }
        let zero = Rational::from_i64(0);
        let mut brackets = vec![vec![vec![zero.clone(); n]; n]; n];
        for (k, d) in diffs.iter().enumerate() {
            for (pair, c) in d.terms() {
                let (l, m) = (pair[0] as usize, pair[1] as usize);
                brackets[l][m][k] = brackets[l][m][k].clone() - c.clone();
                brackets[m][l][k] = brackets[m][l][k].clone() + c.clone();
            }
        }
        Ok(LieAlgebra { n, diffs, brackets })
    }

    pub fn abelian(n: usize) -> Self {
        Self::new(vec![Form::zero(n); n]).expect("abelian algebra is valid")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generator_diffs(&self) -> &[Form<Rational>] {
        &self.diffs
    }

    /// `c^k_{lm}` for 0-based `l < m`.
    pub fn structure_constant(&self, l: usize, m: usize, k: usize) -> Rational {
        self.diffs[k].coeff(&[l as u8, m as u8])
    }

    /// Coordinates of `[e_l, e_m]`.
    pub fn bracket_basis(&self, l: usize, m: usize) -> &[Rational] {
        &self.brackets[l][m]
    }

    pub fn bracket<F: Field>(&self, x: &[F], y: &[F]) -> Vec<F> {
        let n = self.n;
        let mut out = vec![F::zero(); n];
        for l in 0..n {
            if x[l].is_zero() {
                continue;
            }
            for m in 0..n {
                if l == m || y[m].is_zero() {
                    continue;
                }
                let xy = x[l].clone() * y[m].clone();
                for (k, c) in self.brackets[l][m].iter().enumerate() {
                    if !Field::is_zero(c) {
                        out[k] = out[k].clone() + xy.clone() * F::from_rational(c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad_{e_i}`; column `j` is `[e_i, e_j]`.
    pub fn ad_matrix(&self, i: usize) -> Matrix<Rational> {
        Matrix::from_columns(self.n, &self.brackets[i])
    }

    /// `[a, b]` as the span of brackets of basis vectors.
    pub fn bracket_span<F: Field>(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        let mut vecs = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                vecs.push(self.bracket(x, y));
            }
        }
        Subspace::span(self.n, vecs)
    }

    pub fn is_abelian(&self) -> bool {
        self.diffs.iter().all(Form::is_zero)
    }

    pub fn lower_central_series(&self) -> LcsReport {
        self.lower_central_series_of(&Subspace::full(self.n))
    }

    /// Lower central series `h⁰ = h`, `h^{k+1} = [h^k, h]` of a subalgebra.
    pub fn lower_central_series_of(&self, h: &Subspace<Rational>) -> LcsReport {
        series(h.clone(), |cur| self.bracket_span(cur, h))
    }

    pub fn derived_series(&self) -> LcsReport {
        series(Subspace::full(self.n), |cur| self.bracket_span(cur, cur))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().step.is_some()
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().step.is_some()
    }

    /// `trace ad_{e_i} = 0` for every `i`.
    pub fn unimodular_by_traces(&self) -> bool {
        (0..self.n).all(|i| Field::is_zero(&self.ad_matrix(i).trace()))
    }

    /// `d` vanishes on `Λ^{n−1}`.
    pub fn unimodular_by_top_differential(&self) -> bool {
        self.n == 0 || diff_matrix(self, self.n - 1).is_zero()
    }

    /// Both criteria; they agree for every Lie algebra.
    pub fn is_unimodular(&self) -> bool {
        let a = self.unimodular_by_traces();
        debug_assert_eq!(a, self.unimodular_by_top_differential());
        a
    }

    /// Necessary condition for complete solvability: `ad_{e_i}` has only
    /// real eigenvalues for every basis vector.
    pub fn completely_solvable_flag(&self) -> CsFlag {
        if self.is_nilpotent() {
            return CsFlag::Nilpotent;
        }
        if !self.is_solvable() {
            return CsFlag::NotSolvable;
        }
        let all_real = (0..self.n).all(|i| {
            let p = char_poly(&self.ad_matrix(i));
            let sf = p.squarefree_part();
            let deg = sf.degree().unwrap_or(0);
            sturm_real_root_count(&sf, &Bound::NegInf, &Bound::PosInf).expect("nonzero") == deg
        });
        if all_real {
            CsFlag::SolvableRealSpectrum
        } else {
            CsFlag::SolvableUnknown
        }
    }

    /// Block direct sum; generators of `other` are shifted past `self`.
    pub fn direct_sum(&self, other: &LieAlgebra) -> Result<LieAlgebra, LieError> {
        let n = self.n + other.n;
        if n > MAX_DIM {
            return Err(LieError::Dimension(n));
        }
        let shift = self.n as u8;
        let mut diffs = Vec::with_capacity(n);
        for d in &self.diffs {
            let mut f = Form::zero(n);
            for (k, c) in d.terms() {
                f.add_term(k, c.clone());
            }
            diffs.push(f);
        }
        for d in &other.diffs {
            let mut f = Form::zero(n);
            for (k, c) in d.terms() {
                let shifted: Vec<u8> = k.iter().map(|i| i + shift).collect();
                f.add_term(&shifted, c.clone());
            }
            diffs.push(f);
        }
        LieAlgebra::new(diffs)
    }

    /// Compact structure-equation notation, e.g. `(0,0,12,13)`.
    pub fn salamon(&self) -> String {
        let entries: Vec<String> = self.diffs.iter().map(render_entry).collect();
        format!("({})", entries.join(","))
    }

    /// `dim Λ^ℓ`.
    pub fn exterior_dim(&self, degree: usize) -> usize {
        basis(self.n, degree).len()
    }
}

fn render_entry(d: &Form<Rational>) -> String {
    if d.is_zero() {
        return "0".into();
    }
    let one = Rational::from_i64(1);
    let zero = Rational::from_i64(0);
    let mut out = String::new();
    for (k, c) in d.terms() {
        let neg = *c < zero;
        let mag = if neg { -c.clone() } else { c.clone() };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if mag != one {
            out.push_str(&format!("{mag}*"));
        }
        for &i in k {
            out.push(char::from(b'1' + i));
        }
    }
    out
}

fn series(
    start: Subspace<Rational>,
    next: impl Fn(&Subspace<Rational>) -> Subspace<Rational>,
) -> LcsReport {
    let mut out = vec![start];
    loop {
        let cur = out.last().expect("nonempty");
        if cur.is_zero() {
            break;
        }
        let nxt = next(cur);
        if nxt.dim() == cur.dim() {
            break;
        }
        out.push(nxt);
    }
    let step = out
        .last()
        .expect("nonempty")
        .is_zero()
        .then(|| out.len() - 1);
    LcsReport { series: out, step }
}

/// A descending series `h⁰ ⊇ h¹ ⊇ …`; `step = inf{k : h^k = 0}` when finite.
#[derive(Debug, Clone)]
pub struct LcsReport {
    pub series: Vec<Subspace<Rational>>,
    pub step: Option<usize>,
}

impl LcsReport {
    pub fn dims(&self) -> Vec<usize> {
        self.series.iter().map(Subspace::dim).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CsFlag {
    Nilpotent,
    SolvableRealSpectrum,
    SolvableUnknown,
    NotSolvable,
}

impl CsFlag {
    /// Whether invariant cohomology computes the cohomology of the
    /// corresponding compact quotient.
    pub fn transfers_to_manifold(self) -> bool {
        matches!(self, CsFlag::Nilpotent | CsFlag::SolvableRealSpectrum)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CsFlag::Nilpotent => "nilpotent",
            CsFlag::SolvableRealSpectrum => "solvable_real_spectrum",
            CsFlag::SolvableUnknown => "solvable_unknown",
            CsFlag::NotSolvable => "not_solvable",
        }
    }
}

impl fmt::Display for CsFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.salamon())
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra{}", self.salamon())
    }
}
