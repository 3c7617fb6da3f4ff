//! Invariant D-Kähler forms: closed, K-anti-invariant, nondegenerate 2-forms.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cohomology::{applicability, cochain_slice, greedy_reps};
use crate::exterior::{cdiff, wedge, Form};
use crate::lie::LieAlgebra;
use crate::linalg::Subspace;
use crate::paracomplex::{is_integrable, ParaError, ParaStructure};
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DKahlerStatus {
    Witness,
    NoInvariantCandidate,
    GenericDegenerate,
    CohomologicallyObstructedTopSquare,
}

impl DKahlerStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DKahlerStatus::Witness => "witness",
            DKahlerStatus::NoInvariantCandidate => "no_invariant_candidate",
            DKahlerStatus::GenericDegenerate => "generic_degenerate",
            DKahlerStatus::CohomologicallyObstructedTopSquare => {
                "cohomologically_obstructed_top_square"
            }
        }
    }
}

impl fmt::Display for DKahlerStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct DKahlerVerdict {
    pub status: DKahlerStatus,
    pub witness: Option<Form<Rational>>,
    pub candidate_space_dim: usize,
    /// `ωⁿ` vanishes identically on the candidate space.
    pub generic_degenerate: bool,
    /// Every class in `H^{2−}` has vanishing `n`-th power (only tested when
    /// invariant cohomology computes the cohomology of the quotient).
    pub obstructed: Option<bool>,
    pub obstruction_note: String,
}

/// `Z² ∩ Λ^{2−}` in the monomial basis of `Λ²`.
pub fn anti_invariant_closed_2forms(
    g: &LieAlgebra,
    ps: &ParaStructure<Rational>,
) -> Subspace<Rational> {
    let z = cochain_slice::<Rational>(g, 2).z;
    let (_, wm) = ps.form_sign_spaces(2);
    z.intersect(&wm).expect("same ambient")
}

#[derive(Debug, Clone, PartialEq)]
pub enum TopPower {
    NonzeroWithWitness(Form<Rational>),
    IdenticallyZero,
}

/// `(Σ x_i w_i)^n` as a polynomial in `x`, with coefficients measured
/// against `e^{1…2n}`. Keys are exponent vectors.
pub fn top_power_polynomial(forms: &[Form<Rational>], n: usize) -> BTreeMap<Vec<u32>, Rational> {
    let k = forms.len();
    let mut out = BTreeMap::new();
    if k == 0 {
        return out;
    }
    let dim = forms[0].n();
    let top: Vec<u8> = (0..dim as u8).collect();
    // nondecreasing index tuples of length n
    let mut idx = vec![0usize; n];
    loop {
        let mut exps = vec![0u32; k];
        for &i in &idx {
            exps[i] += 1;
        }
        let mut prod = Form::constant(dim, Rational::from_i64(1));
        for &i in &idx {
            prod = wedge(&prod, &forms[i]).expect("same ambient");
            if prod.is_zero() {
                break;
            }
        }
        let c = prod.coeff(&top);
        if !Field::is_zero(&c) {
            let coef = c * multinomial(n, &exps);
            let entry = out.entry(exps).or_insert_with(|| Rational::from_i64(0));
            *entry = entry.clone() + coef;
        }
        // next nondecreasing tuple
        let mut pos = n;
        loop {
            if pos == 0 {
                out.retain(|_, v| !Field::is_zero(v));
                return out;
            }
            pos -= 1;
            if idx[pos] + 1 < k {
                let v = idx[pos] + 1;
                for slot in idx.iter_mut().skip(pos) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

fn multinomial(n: usize, exps: &[u32]) -> Rational {
    let fact = |m: u64| (1..=m).product::<u64>();
    let denom: u64 = exps.iter().map(|&e| fact(e as u64)).product();
    Rational::from_i64((fact(n as u64) / denom) as i64)
}

fn eval_poly(p: &BTreeMap<Vec<u32>, Rational>, x: &[i64]) -> Rational {
    let mut acc = Rational::from_i64(0);
    for (exps, c) in p {
        let mut term = c.clone();
        for (&xi, &e) in x.iter().zip(exps) {
            if e > 0 {
                term = term * Rational::from_i64(xi.pow(e));
            }
        }
        acc = acc + term;
    }
    acc
}

/// Grid values `0, 1, −1, 2, −2, …, n, −n`.
pub fn grid_values(n: usize) -> Vec<i64> {
    let mut v = vec![0];
    for i in 1..=n as i64 {
        v.push(i);
        v.push(-i);
    }
    v
}

/// First grid point (odometer order, last coordinate fastest) where the
/// polynomial is nonzero.
pub fn grid_search(p: &BTreeMap<Vec<u32>, Rational>, k: usize, n: usize) -> Option<Vec<i64>> {
    let vals = grid_values(n);
    let mut digits = vec![0usize; k];
    loop {
        let x: Vec<i64> = digits.iter().map(|&d| vals[d]).collect();
        if !Field::is_zero(&eval_poly(p, &x)) {
            return Some(x);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < vals.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Decides whether some element of `space ⊆ Λ²` (ambient dimension `2n`)
/// has nonzero `n`-th power.
pub fn generic_top_power(space: &Subspace<Rational>, n_half: usize) -> TopPower {
    let dim = 2 * n_half;
    let forms: Vec<Form<Rational>> = space
        .basis()
        .iter()
        .map(|v| Form::from_vector(dim, 2, v))
        .collect();
    top_power_of_forms(&forms, n_half)
}

fn top_power_of_forms(forms: &[Form<Rational>], n_half: usize) -> TopPower {
    let p = top_power_polynomial(forms, n_half);
    if p.is_empty() {
        return TopPower::IdenticallyZero;
    }
    let x = grid_search(&p, forms.len(), n_half).expect("grid exceeds the per-variable degree");
    let dim = forms[0].n();
    let mut w = Form::zero(dim);
    for (f, &xi) in forms.iter().zip(&x) {
        w = w.add(&f.scale(&Rational::from_i64(xi)));
    }
    TopPower::NonzeroWithWitness(w)
}

/// `ωⁿ`.
pub fn power(w: &Form<Rational>, n: usize) -> Form<Rational> {
    let mut acc = Form::constant(w.n(), Rational::from_i64(1));
    for _ in 0..n {
        acc = wedge(&acc, w).expect("same ambient");
    }
    acc
}

/// `dω = 0`, `Kω = −ω` and `ωⁿ ≠ 0`.
pub fn is_dkahler_form(g: &LieAlgebra, ps: &ParaStructure<Rational>, w: &Form<Rational>) -> bool {
    cdiff(g, w).is_zero()
        && ps.act_on_form(w) == w.scale(&Rational::from_i64(-1))
        && !power(w, g.dim() / 2).is_zero()
}

/// Witness if one exists; otherwise the strongest nonexistence statement
/// available. Precedence: witness, then the class-level obstruction, then
/// `no_invariant_candidate` / `generic_degenerate`.
pub fn dkahler_decide(
    g: &LieAlgebra,
    ps: &ParaStructure<Rational>,
) -> Result<DKahlerVerdict, ParaError> {
    if !is_integrable(ps, g) {
        return Err(ParaError::NotIntegrable);
    }
    let n_half = g.dim() / 2;
    let space = anti_invariant_closed_2forms(g, ps);
    let dim = space.dim();
    let top = if dim == 0 {
        TopPower::IdenticallyZero
    } else {
        generic_top_power(&space, n_half)
    };

    let app = applicability(g);
    let obstructed = if app.completely_solvable_flag.transfers_to_manifold() && g.is_unimodular() {
        // ∫ αⁿ depends only on [α] since B^{2n} = 0 for unimodular g
        let slice = cochain_slice::<Rational>(g, 2);
        let class_reps: Vec<Form<Rational>> = greedy_reps(&space, &slice.b)
            .iter()
            .map(|v| Form::from_vector(g.dim(), 2, v))
            .collect();
        Some(
            class_reps.is_empty()
                || top_power_of_forms(&class_reps, n_half) == TopPower::IdenticallyZero,
        )
    } else {
        None
    };

    let (status, witness, note) = match (&top, obstructed) {
        (TopPower::NonzeroWithWitness(w), _) => {
            (DKahlerStatus::Witness, Some(w.clone()), String::new())
        }
        (TopPower::IdenticallyZero, Some(true)) if dim > 0 => (
            DKahlerStatus::CohomologicallyObstructedTopSquare,
            None,
            format!(
                "every class in H^2- has vanishing {n_half}-th power against the fundamental class"
            ),
        ),
        (TopPower::IdenticallyZero, _) if dim == 0 => (
            DKahlerStatus::NoInvariantCandidate,
            None,
            "no closed anti-invariant 2-form".to_string(),
        ),
        (TopPower::IdenticallyZero, _) => (
            DKahlerStatus::GenericDegenerate,
            None,
            "every closed anti-invariant 2-form is degenerate".to_string(),
        ),
    };
    Ok(DKahlerVerdict {
        status,
        witness,
        candidate_space_dim: dim,
        generic_degenerate: top == TopPower::IdenticallyZero,
        obstructed,
        obstruction_note: note,
    })
}
