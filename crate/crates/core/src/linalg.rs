//! Exact dense linear algebra over any [`Field`].
//!
//! Vectors are plain `Vec<F>`. A [`Matrix`] represents a linear map acting on
//! column vectors; [`Subspace`]s keep their basis in reduced row-echelon form
//! so that equal subspaces compare equal structurally.
//!
//! Pivot selection is positional (first nonzero entry in the leftmost
//! remaining column), never by magnitude, so elimination behaves identically
//! over ℚ and ℚ(t).

use std::fmt;

use thiserror::Error;

use crate::scalar::{Field, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("inclusion violated: boundaries are not contained in cycles")]
    InclusionViolated,
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<F>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        Matrix {
            rows: nrows,
            cols,
            data,
        }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn diagonal(entries: Vec<F>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn rref(&self) -> Rref<F> {
        rref(self)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Null space `{x : self · x = 0}`.
    pub fn kernel(&self) -> Subspace<F> {
        let r = rref(self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !r.pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &p) in r.pivots.iter().enumerate() {
                    v[p] = -r.echelon.get(row, f).clone();
                }
                v
            })
            .collect();
        Subspace::span(self.cols, basis)
    }

    /// Column space.
    pub fn image(&self) -> Subspace<F> {
        Subspace::span(self.rows, self.transpose().row_vecs())
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.echelon.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> fmt::Debug for Rref<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rref")
            .field("echelon", &self.echelon)
            .field("rank", &self.rank)
            .field("pivots", &self.pivots)
            .finish()
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(Field::is_zero)
}

/// Result of reduced row-echelon elimination.
#[derive(Clone, PartialEq)]
pub struct Rref<F> {
    pub echelon: Matrix<F>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination. For each column left to right, the first row at
/// or below the current pivot row with a nonzero entry becomes the pivot.
pub fn rref<F: Field>(m: &Matrix<F>) -> Rref<F> {
    let mut rows = m.row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x = x.clone() * inv.clone();
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    Rref {
        echelon: Matrix::from_rows(m.cols, rows),
        rank,
        pivots,
    }
}

/// A linear subspace of `F^ambient`, stored as the nonzero rows of a reduced
/// row-echelon basis matrix.
#[derive(Clone, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, Matrix::<F>::identity(ambient).row_vecs())
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let r = rref(&Matrix::from_rows(ambient, vectors));
        let basis = (0..r.rank).map(|i| r.echelon.row(i).to_vec()).collect();
        Subspace {
            ambient,
            basis,
            pivots: r.pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            Err(LinalgError::AmbientMismatch(self.ambient, other.ambient))
        } else {
            Ok(())
        }
    }

    /// Reduces `v` against the echelon basis: the result has zeros in every
    /// pivot column and is zero iff `v` lies in the subspace. This is a
    /// canonical representative of `v` modulo the subspace.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        is_zero_vec(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check(other)?;
        Ok(other.basis.iter().all(|v| self.contains(v)))
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check(other)?;
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Ok(Self::span(self.ambient, vs))
    }

    /// Intersection by the Zassenhaus construction: row-reduce
    /// `[[A, A], [B, 0]]`; rows whose left half vanishes carry a basis of
    /// `A ∩ B` in their right half.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        let n = self.ambient;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for a in &self.basis {
            let mut r = a.clone();
            r.extend(a.iter().cloned());
            rows.push(r);
        }
        for b in &other.basis {
            let mut r = b.clone();
            r.extend(std::iter::repeat_n(F::zero(), n));
            rows.push(r);
        }
        let red = rref(&Matrix::from_rows(2 * n, rows));
        let vs = (0..red.rank)
            .filter(|&i| red.pivots[i] >= n)
            .map(|i| red.echelon.row(i)[n..].to_vec())
            .collect();
        Ok(Self::span(n, vs))
    }
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(ambient {}, dim {}) ",
            self.ambient,
            self.basis.len()
        )?;
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "{{{}}}", rows.join(", "))
    }
}

/// `dim(z ∩ w) − dim(b ∩ w)`: the dimension of the image of `z ∩ w` in the
/// quotient `z / b`.
pub fn quotient_image_dim<F: Field>(
    z: &Subspace<F>,
    b: &Subspace<F>,
    w: &Subspace<F>,
) -> Result<usize, LinalgError> {
    z.check(b)?;
    z.check(w)?;
    if !z.contains_subspace(b)? {
        return Err(LinalgError::InclusionViolated);
    }
    Ok(z.intersect(w)?.dim() - b.intersect(w)?.dim())
}

/// Characteristic polynomial `det(x·I − m)` by the Faddeev–LeVerrier
/// recurrence (exact over ℚ).
pub fn char_poly(m: &Matrix<Rational>) -> Polynomial {
    let n = m.rows();
    assert_eq!(
        n,
        m.cols(),
        "characteristic polynomial of a non-square matrix"
    );
    // coefficients c_n = 1, c_{n-k} from M_k = A·M_{k-1} + c_{n-k+1}·I
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = Matrix::<Rational>::zeros(n, n);
    for k in 1..=n {
        let prev_c = coeffs[n - k + 1].clone();
        mk = m.mul(&mk).add(&Matrix::identity(n).scale(&prev_c));
        let am = m.mul(&mk);
        coeffs[n - k] = -am.trace() / Rational::from_integer((k as i64).into());
    }
    Polynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| q(r)).collect())
    }

    #[test]
    fn rref_examples() {
        let r = Matrix::<Rational>::identity(3).rref();
        assert_eq!(r.rank, 3);
        let r = mat(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn kernel_and_image() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 2);
        for v in k.basis() {
            assert!(is_zero_vec(&m.apply(v)));
        }
        assert_eq!(m.image().dim(), 1);
        assert!(m.image().contains(&q(&[1, 2])));
    }

    #[test]
    fn intersections() {
        let a = Subspace::span(2, vec![q(&[1, 0])]);
        let b = Subspace::span(2, vec![q(&[0, 1])]);
        assert!(a.intersect(&b).unwrap().is_zero());
        let full = Subspace::span(2, vec![q(&[1, 0]), q(&[0, 1])]);
        let diag = Subspace::span(2, vec![q(&[1, 1])]);
        assert_eq!(full.intersect(&diag).unwrap(), diag);
        // Λ²ℝ⁴ in lexicographic order e12,e13,e14,e23,e24,e34
        let e12_e34 = Subspace::span(6, vec![q(&[1, 0, 0, 0, 0, 0]), q(&[0, 0, 0, 0, 0, 1])]);
        let sum = Subspace::span(6, vec![q(&[1, 0, 0, 0, 0, 1])]);
        assert_eq!(e12_e34.intersect(&sum).unwrap(), sum);
        let c = Subspace::<Rational>::zero(3);
        assert_eq!(a.intersect(&c), Err(LinalgError::AmbientMismatch(2, 3)));
    }

    #[test]
    fn quotient_image_examples() {
        let z = Subspace::span(3, vec![q(&[1, 0, 0]), q(&[0, 1, 0])]);
        let zero = Subspace::zero(3);
        assert_eq!(quotient_image_dim(&z, &zero, &z).unwrap(), 2);
        let b = Subspace::span(3, vec![q(&[1, 0, 0])]);
        assert_eq!(quotient_image_dim(&z, &b, &b).unwrap(), 0);
        let outside = Subspace::span(3, vec![q(&[0, 0, 1])]);
        assert_eq!(
            quotient_image_dim(&z, &outside, &z),
            Err(LinalgError::InclusionViolated)
        );
    }

    #[test]
    fn inverse_and_char_poly() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert_eq!(
            mat(&[&[1, 2], &[2, 4]]).inverse(),
            Err(LinalgError::Singular)
        );
        // ad_{e2} of (0,0,23,-24): diag(0,0,-1,1)
        let ad = Matrix::diagonal(q(&[0, 0, -1, 1]));
        assert_eq!(char_poly(&ad), Polynomial::from_i64(&[0, 0, -1, 0, 1]));
        let rot = mat(&[&[0, -1], &[1, 0]]);
        assert_eq!(char_poly(&rot), Polynomial::from_i64(&[1, 0, 1]));
    }

    fn arb_vecs(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
        prop::collection::vec(prop::collection::vec(-2i64..3, n), 0..4)
            .prop_map(|vs| vs.into_iter().map(|v| q(&v)).collect())
    }

    proptest! {
        #[test]
        fn grassmann_identity(a in arb_vecs(4), b in arb_vecs(4)) {
            let a = Subspace::span(4, a);
            let b = Subspace::span(4, b);
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
            prop_assert!(a.contains_subspace(&i).unwrap());
            prop_assert!(b.contains_subspace(&i).unwrap());
        }

        #[test]
        fn rref_idempotent_and_permutation_invariant(rows in arb_vecs(4), seed in 0usize..24) {
            prop_assume!(!rows.is_empty());
            let m = Matrix::from_rows(4, rows.clone());
            let r = m.rref();
            prop_assert_eq!(r.echelon.rref().echelon, r.echelon.clone());
            let mut perm = rows;
            let len = perm.len();
            perm.rotate_left(seed % len);
            perm.reverse();
            let r2 = Matrix::from_rows(4, perm).rref();
            prop_assert_eq!(r2.rank, r.rank);
            prop_assert_eq!(r2.echelon, r.echelon);
        }

        #[test]
        fn quotient_image_bounded(z in arb_vecs(4), extra in arb_vecs(4), w in arb_vecs(4)) {
            let zs = Subspace::span(4, z.iter().cloned().chain(extra).collect());
            let b = Subspace::span(4, z);
            let w = Subspace::span(4, w);
            let d = quotient_image_dim(&zs, &b, &w).unwrap();
            prop_assert!(d <= (zs.dim() - b.dim()).min(w.dim()));
            // second route: dim((z ∩ w) + b) − dim b
            let alt = zs.intersect(&w).unwrap().sum(&b).unwrap().dim() - b.dim();
            prop_assert_eq!(d, alt);
        }
    }
}
