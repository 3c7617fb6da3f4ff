//! Almost D-complex structures: involutions `K` of `g` with equidimensional
//! eigenspaces, their adapted coframe and the induced bigrading `Λ^{p,q}`.
//!
//! `K` acts on vectors by its matrix (columns are images of `e_i`) and on
//! 1-forms by the transpose. The adapted coframe is the dual basis to the
//! eigenbasis `(p_1, …, p_m | p_{m+1}, …, p_{2m})`, plus vectors first.

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{basis, cdiff, wedge, Form, Multivector};
use crate::lie::LieAlgebra;
use crate::linalg::{is_zero_vec, Matrix, Subspace};
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParaError {
    #[error("K must be a {expected}x{expected} matrix, got {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("K is not an involution: K^2 != I")]
    NotInvolution,
    #[error("eigenspaces have dimensions {plus} (+1) and {minus} (-1); they must both be n/2")]
    EigenspaceImbalance { plus: usize, minus: usize },
    #[error("eigenvectors do not form a basis")]
    NotABasis,
    #[error("K is not integrable")]
    NotIntegrable,
    #[error("form is not of pure bidegree")]
    NotPureType,
    #[error("no structure found after {0} attempts")]
    NotFound(usize),
    #[error("dimension {0} is odd")]
    OddDimension(usize),
}

/// Change of basis between the monomials `e^I` and the adapted monomials
/// `f^I` of one degree.
#[derive(Clone)]
pub struct Bigrading<F> {
    pub degree: usize,
    /// Column `j` is the adapted monomial `f^{I_j}` in `e`-coordinates.
    pub to_e: Matrix<F>,
    /// Column `j` is `e^{I_j}` in `f`-coordinates.
    pub to_f: Matrix<F>,
    /// `(p, q)` of each adapted monomial, in lexicographic order.
    pub bidegrees: Vec<(usize, usize)>,
}

impl<F: Field> Bigrading<F> {
    pub fn pq_space(&self, p: usize, q: usize) -> Subspace<F> {
        let cols: Vec<Vec<F>> = self
            .bidegrees
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == (p, q))
            .map(|(j, _)| self.to_e.column(j))
            .collect();
        Subspace::span(self.to_e.rows(), cols)
    }

    /// `Λ^{ℓ+}` (q even) or `Λ^{ℓ−}` (q odd).
    pub fn sign_space(&self, plus: bool) -> Subspace<F> {
        let cols: Vec<Vec<F>> = self
            .bidegrees
            .iter()
            .enumerate()
            .filter(|(_, &(_, q))| (q % 2 == 0) == plus)
            .map(|(j, _)| self.to_e.column(j))
            .collect();
        Subspace::span(self.to_e.rows(), cols)
    }

    /// Coordinates of an `e`-coordinate vector in the adapted basis.
    pub fn adapted_coords(&self, v: &[F]) -> Vec<F> {
        self.to_f.apply(v)
    }

    /// Action of `K` on `Λ^ℓ` in `e`-coordinates.
    pub fn k_action(&self) -> Matrix<F> {
        let signs: Vec<F> = self
            .bidegrees
            .iter()
            .map(|&(_, q)| if q % 2 == 0 { F::one() } else { -F::one() })
            .collect();
        self.to_e.mul(&Matrix::diagonal(signs)).mul(&self.to_f)
    }
}

/// A validated almost D-complex structure.
#[derive(Clone)]
pub struct ParaStructure<F> {
    k: Matrix<F>,
    g_plus: Subspace<F>,
    g_minus: Subspace<F>,
    /// Columns: eigenbasis, plus vectors first.
    eigenbasis: Matrix<F>,
    /// Rows: adapted coframe `f^1, …, f^n` in `e`-coordinates.
    coframe: Matrix<F>,
    gradings: Vec<OnceLock<Arc<Bigrading<F>>>>,
}

impl<F: Field> ParaStructure<F> {
    /// Validates a raw matrix on an `n`-dimensional algebra.
    pub fn validate(k: Matrix<F>, n: usize) -> Result<Self, ParaError> {
        if k.rows() != n || k.cols() != n {
            return Err(ParaError::Shape {
                expected: n,
                rows: k.rows(),
                cols: k.cols(),
            });
        }
        if k.mul(&k) != Matrix::identity(n) {
            return Err(ParaError::NotInvolution);
        }
        let id = Matrix::identity(n);
        let g_plus = k.sub(&id).kernel();
        let g_minus = k.add(&id).kernel();
        if g_plus.dim() != g_minus.dim() {
            return Err(ParaError::EigenspaceImbalance {
                plus: g_plus.dim(),
                minus: g_minus.dim(),
            });
        }
        let cols: Vec<Vec<F>> = g_plus
            .basis()
            .iter()
            .chain(g_minus.basis())
            .cloned()
            .collect();
        Self::assemble(k, g_plus, g_minus, Matrix::from_columns(n, &cols))
    }

    /// Builds `K` from explicit eigenvectors. The given vectors are kept as
    /// the eigenbasis, so the adapted coframe is dual to them.
    pub fn from_eigenspaces(plus: &[Vec<F>], minus: &[Vec<F>]) -> Result<Self, ParaError> {
        let n = plus.len() + minus.len();
        if plus.len() != minus.len() {
            return Err(ParaError::EigenspaceImbalance {
                plus: plus.len(),
                minus: minus.len(),
            });
        }
        if plus.iter().chain(minus).any(|v| v.len() != n) {
            return Err(ParaError::NotABasis);
        }
        let cols: Vec<Vec<F>> = plus.iter().chain(minus).cloned().collect();
        let p = Matrix::from_columns(n, &cols);
        let p_inv = p.inverse().map_err(|_| ParaError::NotABasis)?;
        let m = n / 2;
        let signs = (0..n)
            .map(|i| if i < m { F::one() } else { -F::one() })
            .collect();
        let k = p.mul(&Matrix::diagonal(signs)).mul(&p_inv);
        let g_plus = Subspace::span(n, plus.to_vec());
        let g_minus = Subspace::span(n, minus.to_vec());
        Self::assemble(k, g_plus, g_minus, p)
    }

    fn assemble(
        k: Matrix<F>,
        g_plus: Subspace<F>,
        g_minus: Subspace<F>,
        eigenbasis: Matrix<F>,
    ) -> Result<Self, ParaError> {
        let coframe = eigenbasis.inverse().map_err(|_| ParaError::NotABasis)?;
        let n = k.rows();
        Ok(ParaStructure {
            k,
            g_plus,
            g_minus,
            eigenbasis,
            coframe,
            gradings: (0..=n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.k.rows()
    }

    pub fn half_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn k_matrix(&self) -> &Matrix<F> {
        &self.k
    }

    pub fn g_plus(&self) -> &Subspace<F> {
        &self.g_plus
    }

    pub fn g_minus(&self) -> &Subspace<F> {
        &self.g_minus
    }

    pub fn eigenbasis(&self) -> &Matrix<F> {
        &self.eigenbasis
    }

    pub fn plus_vectors(&self) -> Vec<Vec<F>> {
        (0..self.half_dim())
            .map(|j| self.eigenbasis.column(j))
            .collect()
    }

    pub fn minus_vectors(&self) -> Vec<Vec<F>> {
        (self.half_dim()..self.dim())
            .map(|j| self.eigenbasis.column(j))
            .collect()
    }

    /// Adapted coframe, rows in `e`-coordinates: `f^1..f^m` annihilate `g⁻`,
    /// `f^{m+1}..f^{2m}` annihilate `g⁺`.
    pub fn coframe(&self) -> &Matrix<F> {
        &self.coframe
    }

    pub fn coframe_plus(&self) -> Vec<Vec<F>> {
        (0..self.half_dim())
            .map(|i| self.coframe.row(i).to_vec())
            .collect()
    }

    pub fn coframe_minus(&self) -> Vec<Vec<F>> {
        (self.half_dim()..self.dim())
            .map(|i| self.coframe.row(i).to_vec())
            .collect()
    }

    pub fn bigrading(&self, degree: usize) -> Arc<Bigrading<F>> {
        self.gradings[degree]
            .get_or_init(|| Arc::new(self.build_bigrading(degree)))
            .clone()
    }

    fn build_bigrading(&self, degree: usize) -> Bigrading<F> {
        let n = self.dim();
        let m = self.half_dim();
        let b = basis(n, degree);
        let one_forms = |rows: &Matrix<F>| -> Vec<Form<F>> {
            (0..n)
                .map(|i| {
                    let mut f = Form::zero(n);
                    for (j, c) in rows.row(i).iter().enumerate() {
                        f.add_term(&[j as u8], c.clone());
                    }
                    f
                })
                .collect()
        };
        // f^i in e-coordinates, and e^j = Σ_i P[j][i] f^i in f-coordinates
        let f_in_e = one_forms(&self.coframe);
        let e_in_f = one_forms(&self.eigenbasis);
        let wedge_columns = |gens: &[Form<F>]| -> Matrix<F> {
            let cols: Vec<Vec<F>> = b
                .monomials()
                .iter()
                .map(|mono| {
                    let mut acc = Form::constant(n, F::one());
                    for &i in mono {
                        acc = wedge(&acc, &gens[i as usize]).expect("same ambient");
                    }
                    acc.to_vector(degree).expect("homogeneous")
                })
                .collect();
            Matrix::from_columns(b.len(), &cols)
        };
        let bidegrees = b
            .monomials()
            .iter()
            .map(|mono| {
                let p = mono.iter().filter(|&&i| (i as usize) < m).count();
                (p, degree - p)
            })
            .collect();
        Bigrading {
            degree,
            to_e: wedge_columns(&f_in_e),
            to_f: wedge_columns(&e_in_f),
            bidegrees,
        }
    }

    /// `Λ^{ℓ+}` and `Λ^{ℓ−}` as subspaces of `Λ^ℓ` in `e`-coordinates.
    pub fn form_sign_spaces(&self, degree: usize) -> (Subspace<F>, Subspace<F>) {
        let b = self.bigrading(degree);
        (b.sign_space(true), b.sign_space(false))
    }

    /// ±1-eigenspaces of `∧^ℓ K` on multivectors `Λ_ℓ g`, spanned by wedges
    /// of eigenvectors.
    pub fn multivector_sign_spaces(&self, degree: usize) -> (Subspace<F>, Subspace<F>) {
        let n = self.dim();
        let m = self.half_dim();
        let b = basis(n, degree);
        let vecs: Vec<Vec<F>> = (0..n).map(|j| self.eigenbasis.column(j)).collect();
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for mono in b.monomials() {
            let sel: Vec<Vec<F>> = mono.iter().map(|&i| vecs[i as usize].clone()).collect();
            let mv = if sel.is_empty() {
                Multivector::monomial(n, &[], F::one())
            } else {
                Multivector::wedge_of_vectors(&sel)
            };
            let v = mv.0.to_vector(degree).expect("homogeneous");
            let q = mono.iter().filter(|&&i| (i as usize) >= m).count();
            if q % 2 == 0 {
                plus.push(v);
            } else {
                minus.push(v);
            }
        }
        (
            Subspace::span(b.len(), plus),
            Subspace::span(b.len(), minus),
        )
    }

    /// `K` applied to a form: `(Kα)(x_1, …) = α(Kx_1, …)`.
    pub fn act_on_form(&self, a: &Form<F>) -> Form<F> {
        let n = self.dim();
        let kt = self.k.transpose();
        let images: Vec<Form<F>> = (0..n)
            .map(|j| {
                let mut f = Form::zero(n);
                for (i, c) in kt.column(j).iter().enumerate() {
                    f.add_term(&[i as u8], c.clone());
                }
                f
            })
            .collect();
        let mut out = Form::zero(n);
        for (mono, c) in a.terms() {
            let mut acc = Form::constant(n, c.clone());
            for &i in mono {
                acc = wedge(&acc, &images[i as usize]).expect("same ambient");
            }
            out = out.add(&acc);
        }
        out
    }

    /// Bidegree of a form of pure type, `None` otherwise (or for zero).
    pub fn bidegree_of(&self, a: &Form<F>) -> Option<(usize, usize)> {
        let degree = a.degree()?;
        if a.is_zero() {
            return None;
        }
        let b = self.bigrading(degree);
        let coords = b.adapted_coords(&a.to_vector(degree)?);
        let mut found = None;
        for (c, &bd) in coords.iter().zip(&b.bidegrees) {
            if c.is_zero() {
                continue;
            }
            match found {
                None => found = Some(bd),
                Some(prev) if prev != bd => return None,
                _ => {}
            }
        }
        found
    }

    /// Component of `a` in `Λ^{p,q}`.
    pub fn project(&self, a: &Form<F>, p: usize, q: usize) -> Form<F> {
        let degree = p + q;
        let b = self.bigrading(degree);
        let Some(v) = a.to_vector(degree) else {
            return Form::zero(self.dim());
        };
        let coords: Vec<F> = b
            .adapted_coords(&v)
            .into_iter()
            .zip(&b.bidegrees)
            .map(|(c, &bd)| if bd == (p, q) { c } else { F::zero() })
            .collect();
        Form::from_vector(self.dim(), degree, &b.to_e.apply(&coords))
    }
}

impl<F: Field> std::fmt::Debug for Bigrading<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bigrading")
            .field("degree", &self.degree)
            .field("bidegrees", &self.bidegrees)
            .finish()
    }
}

impl<F: Field> std::fmt::Debug for ParaStructure<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParaStructure")
            .field("k", &self.k)
            .field("g_plus", &self.g_plus)
            .field("g_minus", &self.g_minus)
            .finish()
    }
}

/// `N_K(x,y) = [x,y] + [Kx,Ky] − K[Kx,y] − K[x,Ky]`.
pub fn nijenhuis<F: Field>(ps: &ParaStructure<F>, g: &LieAlgebra, x: &[F], y: &[F]) -> Vec<F> {
    let k = ps.k_matrix();
    let kx = k.apply(x);
    let ky = k.apply(y);
    let a = g.bracket(x, y);
    let b = g.bracket(&kx, &ky);
    let c = k.apply(&g.bracket(&kx, y));
    let d = k.apply(&g.bracket(x, &ky));
    (0..x.len())
        .map(|i| a[i].clone() + b[i].clone() - c[i].clone() - d[i].clone())
        .collect()
}

/// A bracket of eigenvectors leaving their eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketWitness<F> {
    pub plus_side: bool,
    pub x: Vec<F>,
    pub y: Vec<F>,
    pub bracket: Vec<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrabilityReport<F> {
    pub plus_closed: bool,
    pub minus_closed: bool,
    pub nijenhuis_zero: bool,
    pub witness: Option<BracketWitness<F>>,
}

impl<F> IntegrabilityReport<F> {
    pub fn integrable(&self) -> bool {
        self.plus_closed && self.minus_closed
    }

    pub fn consistent(&self) -> bool {
        self.integrable() == self.nijenhuis_zero
    }
}

fn closure_witness<F: Field>(
    g: &LieAlgebra,
    vecs: &[Vec<F>],
    space: &Subspace<F>,
    plus_side: bool,
) -> Option<BracketWitness<F>> {
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            let br = g.bracket(&vecs[i], &vecs[j]);
            if !space.contains(&br) {
                return Some(BracketWitness {
                    plus_side,
                    x: vecs[i].clone(),
                    y: vecs[j].clone(),
                    bracket: br,
                });
            }
        }
    }
    None
}

/// Subalgebra closure of both eigenspaces and vanishing of `N_K` on basis
/// pairs; the two criteria are computed independently.
pub fn integrability<F: Field>(ps: &ParaStructure<F>, g: &LieAlgebra) -> IntegrabilityReport<F> {
    let n = g.dim();
    let wp = closure_witness(g, &ps.plus_vectors(), ps.g_plus(), true);
    let wm = closure_witness(g, &ps.minus_vectors(), ps.g_minus(), false);
    let unit = |i: usize| -> Vec<F> {
        (0..n)
            .map(|j| if i == j { F::one() } else { F::zero() })
            .collect()
    };
    let nijenhuis_zero =
        (0..n).all(|i| (i + 1..n).all(|j| is_zero_vec(&nijenhuis(ps, g, &unit(i), &unit(j)))));
    IntegrabilityReport {
        plus_closed: wp.is_none(),
        minus_closed: wm.is_none(),
        nijenhuis_zero,
        witness: wp.or(wm),
    }
}

/// Subalgebra closure only, the cheap test used for rejection sampling.
pub fn is_integrable<F: Field>(ps: &ParaStructure<F>, g: &LieAlgebra) -> bool {
    closure_witness(g, &ps.plus_vectors(), ps.g_plus(), true).is_none()
        && closure_witness(g, &ps.minus_vectors(), ps.g_minus(), false).is_none()
}

/// `[g⁺, g⁺] = 0 = [g⁻, g⁻]`.
pub fn is_abelian<F: Field>(ps: &ParaStructure<F>, g: &LieAlgebra) -> bool {
    [ps.plus_vectors(), ps.minus_vectors()].iter().all(|vecs| {
        (0..vecs.len())
            .all(|i| (i + 1..vecs.len()).all(|j| is_zero_vec(&g.bracket(&vecs[i], &vecs[j]))))
    })
}

/// `da = ∂₊a + ∂₋a` for `a` of pure bidegree `(p,q)`, with
/// `∂₊a ∈ Λ^{p+1,q}` and `∂₋a ∈ Λ^{p,q+1}`.
pub fn dee_split<F: Field>(
    ps: &ParaStructure<F>,
    g: &LieAlgebra,
    a: &Form<F>,
) -> Result<(Form<F>, Form<F>), ParaError> {
    if !is_integrable(ps, g) {
        return Err(ParaError::NotIntegrable);
    }
    let n = g.dim();
    if a.is_zero() {
        return Ok((Form::zero(n), Form::zero(n)));
    }
    let (p, q) = ps.bidegree_of(a).ok_or(ParaError::NotPureType)?;
    let da = cdiff(g, a);
    let plus = ps.project(&da, p + 1, q);
    let minus = ps.project(&da, p, q + 1);
    if da != plus.add(&minus) {
        return Err(ParaError::NotIntegrable);
    }
    Ok((plus, minus))
}

/// Seeded random structure: conjugates `diag(+I, −I)` by a random integer
/// matrix with entries in `[-2, 2]`, rejection-sampling for integrability
/// when asked. Returns the structure and the number of attempts used.
pub fn random_paracomplex(
    g: &LieAlgebra,
    seed: u64,
    require_integrable: bool,
    max_attempts: usize,
) -> Result<(ParaStructure<Rational>, usize), ParaError> {
    let n = g.dim();
    if n % 2 == 1 {
        return Err(ParaError::OddDimension(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = n / 2;
    for attempt in 1..=max_attempts {
        // singular draws are redrawn and do not count as attempts
        let ps = loop {
            let cols: Vec<Vec<Rational>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| Rational::from_i64(rng.gen_range(-2..=2)))
                        .collect()
                })
                .collect();
            if let Ok(ps) = ParaStructure::from_eigenspaces(&cols[..m], &cols[m..]) {
                break ps;
            }
        };
        if !require_integrable || is_integrable(&ps, g) {
            return Ok((ps, attempt));
        }
    }
    Err(ParaError::NotFound(max_attempts))
}

/// Diagonal `K` from a sign pattern (`true` = +1).
pub fn diagonal_k<F: Field>(signs: &[bool]) -> Matrix<F> {
    Matrix::diagonal(
        signs
            .iter()
            .map(|&s| if s { F::one() } else { -F::one() })
            .collect(),
    )
}
