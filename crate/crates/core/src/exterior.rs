//! Exterior algebra Λ•(g*) of invariant forms, its dual Λ•(g) of
//! multivectors, the Chevalley–Eilenberg differential and its dual boundary.
//!
//! Basis monomials are strictly increasing index tuples (0-based internally,
//! rendered 1-based: `[0, 3]` is `e14`). Within a degree they are ordered
//! lexicographically; that order is the coordinate order of every matrix and
//! vector in the crate and is part of the report format.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::scalar::{Field, Rational};

pub type Monomial = Vec<u8>;

/// Parity of the permutation sorting `idx`, or `None` on a repeated index.
pub fn sort_sign(idx: &mut [u8]) -> Option<bool> {
    // insertion sort, counting transpositions
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(odd)
}

/// Lexicographically ordered monomial basis of Λ^ℓ on `n` generators.
#[derive(Debug)]
pub struct MonomialBasis {
    pub n: usize,
    pub degree: usize,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    fn build(n: usize, degree: usize) -> Self {
        let mut monos = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..=n - left {
                cur.push(i as u8);
                rec(i + 1, n, left - 1, cur, out);
                cur.pop();
            }
        }
        if degree <= n {
            rec(0, n, degree, &mut cur, &mut monos);
        }
        let index = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            n,
            degree,
            monos,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn index_of(&self, m: &[u8]) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Shared, cached monomial basis.
pub fn basis(n: usize, degree: usize) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<MonomialBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("basis cache poisoned");
    guard
        .entry((n, degree))
        .or_insert_with(|| Arc::new(MonomialBasis::build(n, degree)))
        .clone()
}

/// Element of Λ•(g*) with coefficients in `F`.
#[derive(Clone, PartialEq)]
pub struct Form<F> {
    n: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Form<F> {
    pub fn zero(n: usize) -> Self {
        Form {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: F) -> Self {
        Self::monomial(n, &[], c)
    }

    /// `c · e^{i1} ∧ … ∧ e^{ik}` for 0-based indices in any order.
    pub fn monomial(n: usize, idx: &[u8], c: F) -> Self {
        let mut out = Self::zero(n);
        out.add_term(idx, c);
        out
    }

    /// The generator `e^{i+1}`.
    pub fn generator(n: usize, i: usize) -> Self {
        Self::monomial(n, &[i as u8], F::one())
    }

    /// Adds `c · e^{idx}`, reordering `idx` with the Koszul sign.
    pub fn add_term(&mut self, idx: &[u8], c: F) {
        assert!(
            idx.iter().all(|&i| (i as usize) < self.n),
            "index out of range"
        );
        let mut key = idx.to_vec();
        let Some(odd) = sort_sign(&mut key) else {
            return;
        };
        let c = if odd { -c } else { c };
        self.add_sorted(key, c);
    }

    fn add_sorted(&mut self, key: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(cur) => {
                let v = cur.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *cur = v;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u8]) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Common degree of all terms; `None` for mixed degrees. The zero form is
    /// homogeneous of every degree and reports `Some(0)`.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    pub fn is_homogeneous_of(&self, degree: usize) -> bool {
        self.terms.keys().all(|k| k.len() == degree)
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "ambient dimension mismatch");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_sorted(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Form<G> {
        let mut out = Form::zero(self.n);
        for (k, v) in &self.terms {
            out.add_sorted(k.clone(), f(v));
        }
        out
    }

    /// Coordinates in the lexicographic monomial basis of Λ^degree. Terms of
    /// other degrees are rejected.
    pub fn to_vector(&self, degree: usize) -> Option<Vec<F>> {
        let b = basis(self.n, degree);
        let mut v = vec![F::zero(); b.len()];
        for (k, c) in &self.terms {
            v[b.index_of(k)?] = c.clone();
        }
        Some(v)
    }

    pub fn from_vector(n: usize, degree: usize, v: &[F]) -> Self {
        let b = basis(n, degree);
        assert_eq!(v.len(), b.len(), "coordinate vector length mismatch");
        let mut out = Self::zero(n);
        for (m, c) in b.monomials().iter().zip(v) {
            out.add_sorted(m.clone(), c.clone());
        }
        out
    }

    pub fn render(&self) -> String {
        render_terms(self.terms.iter(), "e")
    }
}

/// Exterior product with the Koszul sign.
pub fn wedge<F: Field>(a: &Form<F>, b: &Form<F>) -> Result<Form<F>, ExteriorError> {
    if a.n != b.n {
        return Err(ExteriorError::AmbientMismatch(a.n, b.n));
    }
    let mut out = Form::zero(a.n);
    for (ka, va) in &a.terms {
        for (kb, vb) in &b.terms {
            let mut idx = ka.clone();
            idx.extend_from_slice(kb);
            if let Some(odd) = sort_sign(&mut idx) {
                let c = va.clone() * vb.clone();
                out.add_sorted(idx, if odd { -c } else { c });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExteriorError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
}

/// `d` on an arbitrary form, given `d e^k` for every generator. The
/// differential is extended as an antiderivation:
/// `d(e^{i1…iℓ}) = Σ_j (−1)^j e^{i1} ∧ … ∧ d e^{ij} ∧ … ∧ e^{iℓ}`.
pub fn cdiff_with<F: Field>(generator_diffs: &[Form<Rational>], a: &Form<F>) -> Form<F> {
    let n = a.n;
    let mut out = Form::zero(n);
    for (key, c) in &a.terms {
        for (pos, &k) in key.iter().enumerate() {
            let dk = &generator_diffs[k as usize];
            for (pair, coef) in dk.terms() {
                // e^{i1..i_{pos-1}} ∧ (coef e^{pair}) ∧ e^{i_{pos+1}..}
                let mut idx = Vec::with_capacity(key.len() + 1);
                idx.extend_from_slice(&key[..pos]);
                idx.extend_from_slice(pair);
                idx.extend_from_slice(&key[pos + 1..]);
                if let Some(odd) = sort_sign(&mut idx) {
                    let mut v = c.clone() * F::from_rational(coef);
                    if odd ^ (pos % 2 == 1) {
                        v = -v;
                    }
                    out.add_sorted(idx, v);
                }
            }
        }
    }
    out
}

/// Chevalley–Eilenberg differential of `g`.
pub fn cdiff<F: Field>(g: &LieAlgebra, a: &Form<F>) -> Form<F> {
    assert_eq!(a.n, g.dim(), "form over the wrong dimension");
    cdiff_with(g.generator_diffs(), a)
}

/// Matrix of `d: Λ^ℓ → Λ^{ℓ+1}` (columns are images of basis monomials).
pub fn diff_matrix(g: &LieAlgebra, degree: usize) -> Matrix<Rational> {
    let n = g.dim();
    let src = basis(n, degree);
    let dst = basis(n, degree + 1);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (j, mono) in src.monomials().iter().enumerate() {
        let image = cdiff(g, &Form::monomial(n, mono, Rational::from_i64(1)));
        for (k, c) in image.terms() {
            let i = dst.index_of(k).expect("homogeneous image");
            m.set(i, j, c.clone());
        }
    }
    m
}

/// Element of Λ•(g), sharing the representation of [`Form`]: the key
/// `[0, 1]` stands for `e_1 ∧ e_2`.
#[derive(Clone, PartialEq)]
pub struct Multivector<F>(pub Form<F>);

impl<F: Field> Multivector<F> {
    pub fn zero(n: usize) -> Self {
        Multivector(Form::zero(n))
    }

    pub fn monomial(n: usize, idx: &[u8], c: F) -> Self {
        Multivector(Form::monomial(n, idx, c))
    }

    /// `x_1 ∧ … ∧ x_k` for vectors given in the basis `{e_i}`.
    pub fn wedge_of_vectors(vectors: &[Vec<F>]) -> Self {
        let n = vectors.first().map_or(0, Vec::len);
        let mut acc = Form::constant(n, F::one());
        for v in vectors {
            let mut f = Form::zero(n);
            for (i, c) in v.iter().enumerate() {
                f.add_term(&[i as u8], c.clone());
            }
            acc = wedge(&acc, &f).expect("same ambient");
        }
        Multivector(acc)
    }

    pub fn render(&self) -> String {
        render_terms(self.0.terms.iter(), "e_")
    }
}

/// Monomial pairing `⟨e^I, e_J⟩ = δ_IJ`.
pub fn pairing<F: Field>(a: &Form<F>, v: &Multivector<F>) -> F {
    a.terms
        .iter()
        .filter_map(|(k, c)| v.0.terms.get(k).map(|w| c.clone() * w.clone()))
        .fold(F::zero(), |acc, x| acc + x)
}

/// Chevalley–Eilenberg boundary
/// `∂(x_1 ∧ … ∧ x_k) = Σ_{i<j} (−1)^{i+j} [x_i, x_j] ∧ x_1 ∧ … x̂_i … x̂_j … ∧ x_k`,
/// the transpose of [`cdiff`] under the monomial pairing.
pub fn boundary<F: Field>(g: &LieAlgebra, v: &Multivector<F>) -> Multivector<F> {
    let n = g.dim();
    assert_eq!(v.0.n, n, "multivector over the wrong dimension");
    let mut out = Form::zero(n);
    for (key, c) in &v.0.terms {
        let k = key.len();
        for i in 0..k {
            for j in i + 1..k {
                let br = g.bracket_basis(key[i] as usize, key[j] as usize);
                let sign_odd = (i + j) % 2 == 1;
                let rest: Vec<u8> = key
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != i && p != j)
                    .map(|(_, &x)| x)
                    .collect();
                for (m, bc) in br.iter().enumerate() {
                    if bc.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(k - 1);
                    idx.push(m as u8);
                    idx.extend_from_slice(&rest);
                    if let Some(odd) = sort_sign(&mut idx) {
                        let mut val = c.clone() * F::from_rational(bc);
                        if odd ^ sign_odd {
                            val = -val;
                        }
                        out.add_sorted(idx, val);
                    }
                }
            }
        }
    }
    Multivector(out)
}

/// Matrix of `∂: Λ_ℓ → Λ_{ℓ−1}`, equal to the transpose of `d: Λ^{ℓ−1} → Λ^ℓ`.
pub fn boundary_matrix(g: &LieAlgebra, degree: usize) -> Matrix<Rational> {
    let n = g.dim();
    if degree == 0 {
        return Matrix::zeros(0, 1);
    }
    let src = basis(n, degree);
    let dst = basis(n, degree - 1);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (j, mono) in src.monomials().iter().enumerate() {
        let image = boundary(g, &Multivector::monomial(n, mono, Rational::from_i64(1)));
        for (k, c) in image.0.terms() {
            m.set(dst.index_of(k).expect("homogeneous image"), j, c.clone());
        }
    }
    m
}

fn render_coeff<F: Field>(c: &F) -> (bool, String) {
    match c.as_rational() {
        Some(r) => {
            let neg = r < Rational::from_i64(0);
            let mag = if neg { -r } else { r };
            if mag == Rational::from_i64(1) {
                (neg, String::new())
            } else {
                (neg, format!("{mag}*"))
            }
        }
        None => (false, format!("({c})*")),
    }
}

fn render_terms<'a, F: Field + 'a>(
    terms: impl Iterator<Item = (&'a Monomial, &'a F)>,
    prefix: &str,
) -> String {
    let mut out = String::new();
    for (k, c) in terms {
        let (neg, coeff) = render_coeff(c);
        let mono = if k.is_empty() {
            String::new()
        } else {
            let digits: String = k.iter().map(|&i| char::from(b'1' + i)).collect();
            format!("{prefix}{digits}")
        };
        let body = match (coeff.is_empty(), mono.is_empty()) {
            (_, true) => {
                // constant term: print the full coefficient
                match c.as_rational() {
                    Some(r) => {
                        let r = if neg { -r } else { r };
                        r.to_string()
                    }
                    None => format!("({c})"),
                }
            }
            (true, false) => mono,
            (false, false) => format!("{coeff}{mono}"),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

impl<F: Field> fmt::Display for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<F: Field> fmt::Debug for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({})", self.render())
    }
}

impl<F: Field> fmt::Display for Multivector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<F: Field> fmt::Debug for Multivector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector({})", self.render())
    }
}
