//! Invariant cohomology `H^ℓ(g)` and homology `H_ℓ(g)` with their
//! K-invariant / anti-invariant subgroups.
//!
//! `dim H^{ℓ±} = dim(Z ∩ W±) − dim(B ∩ W±)` where `W± = Λ^{ℓ±}`; every
//! dimension is also recomputed through normal forms modulo `B` and the two
//! routes must agree.

use std::fmt;

use serde::Serialize;

use crate::exterior::{boundary, boundary_matrix, cdiff, diff_matrix, wedge, Form, Multivector};
use crate::lie::{CsFlag, LieAlgebra};
use crate::linalg::{quotient_image_dim, Matrix, Subspace};
use crate::paracomplex::{is_integrable, ParaError, ParaStructure};
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CohomologyError {
    #[error("form is not closed")]
    NotClosed,
    #[error("degree {degree} outside 0..={n}")]
    Degree { degree: usize, n: usize },
    #[error(transparent)]
    Para(#[from] ParaError),
    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Cohomology,
    Homology,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Cohomology => "cohomology",
            Side::Homology => "homology",
        })
    }
}

/// Cocycles and coboundaries (or cycles and boundaries) in one degree.
#[derive(Debug, Clone)]
pub struct ComplexSlice<F: Field> {
    pub degree: usize,
    pub side: Side,
    pub z: Subspace<F>,
    pub b: Subspace<F>,
}

impl<F: Field> ComplexSlice<F> {
    pub fn betti(&self) -> usize {
        self.z.dim() - self.b.dim()
    }

    /// Whether `v` is a cocycle whose class lies in the image of `z ∩ w`.
    pub fn class_in(&self, w: &Subspace<F>, v: &[F]) -> bool {
        let zw = self.z.intersect(w).expect("same ambient");
        self.z.contains(v) && zw.sum(&self.b).expect("same ambient").contains(v)
    }

    /// `v − u ∈ B`.
    pub fn same_class(&self, u: &[F], v: &[F]) -> bool {
        let diff: Vec<F> = u
            .iter()
            .zip(v)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        self.b.contains(&diff)
    }

    /// Whether the classes of `vectors` span exactly the image of `z ∩ w`.
    pub fn classes_span(&self, w: &Subspace<F>, vectors: &[Vec<F>]) -> bool {
        if !vectors.iter().all(|v| self.z.contains(v)) {
            return false;
        }
        let target = self
            .z
            .intersect(w)
            .and_then(|zw| zw.sum(&self.b))
            .expect("same ambient");
        let got = Subspace::span(self.z.ambient(), vectors.to_vec())
            .sum(&self.b)
            .expect("same ambient");
        got == target
    }

    /// Representatives of a basis of `z / b`, chosen greedily from the
    /// echelon basis of `z`.
    pub fn basis_reps(&self) -> Vec<Vec<F>> {
        greedy_reps(&self.z, &self.b)
    }
}

fn to_field<F: Field>(m: &Matrix<Rational>) -> Matrix<F> {
    m.map(F::from_rational)
}

/// `Z^ℓ = ker d_ℓ` and `B^ℓ = im d_{ℓ−1}`.
pub fn cochain_slice<F: Field>(g: &LieAlgebra, degree: usize) -> ComplexSlice<F> {
    let z = to_field::<F>(&diff_matrix(g, degree)).kernel();
    let b = if degree == 0 {
        Subspace::zero(z.ambient())
    } else {
        to_field::<F>(&diff_matrix(g, degree - 1)).image()
    };
    ComplexSlice {
        degree,
        side: Side::Cohomology,
        z,
        b,
    }
}

/// `Z_ℓ = ker ∂_ℓ` and `B_ℓ = im ∂_{ℓ+1}`.
pub fn chain_slice<F: Field>(g: &LieAlgebra, degree: usize) -> ComplexSlice<F> {
    let n = g.dim();
    let z = if degree == 0 {
        Subspace::full(1)
    } else {
        to_field::<F>(&boundary_matrix(g, degree)).kernel()
    };
    let b = if degree == n {
        Subspace::zero(z.ambient())
    } else {
        to_field::<F>(&boundary_matrix(g, degree + 1)).image()
    };
    ComplexSlice {
        degree,
        side: Side::Homology,
        z,
        b,
    }
}

pub fn betti(g: &LieAlgebra, degree: usize) -> usize {
    cochain_slice::<Rational>(g, degree).betti()
}

pub fn betti_numbers(g: &LieAlgebra) -> Vec<usize> {
    (0..=g.dim()).map(|l| betti(g, l)).collect()
}

/// Basis of `space` modulo `modulo`, picked greedily from the echelon basis.
pub fn greedy_reps<F: Field>(space: &Subspace<F>, modulo: &Subspace<F>) -> Vec<Vec<F>> {
    let mut acc = modulo.clone();
    let mut out = Vec::new();
    for v in space.basis() {
        if !acc.contains(v) {
            acc = acc
                .sum(&Subspace::span(acc.ambient(), vec![v.clone()]))
                .expect("same ambient");
            out.push(v.clone());
        }
    }
    out
}

/// Dimensions, representatives and verdicts for one stage.
#[derive(Debug, Clone)]
pub struct SubgroupReport<F: Field> {
    pub stage: usize,
    pub side: Side,
    pub betti: usize,
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub intersection_dim: usize,
    pub plus_reps: Vec<Form<F>>,
    pub minus_reps: Vec<Form<F>>,
    pub pure: bool,
    pub full: bool,
    pub pure_and_full: bool,
}

impl<F: Field> SubgroupReport<F> {
    pub fn render_reps(&self, reps: &[Form<F>]) -> Vec<String> {
        reps.iter()
            .map(|r| match self.side {
                Side::Cohomology => r.render(),
                Side::Homology => Multivector(r.clone()).render(),
            })
            .collect()
    }
}

/// Core computation shared by both sides.
pub fn subgroups_in_slice<F: Field>(
    slice: &ComplexSlice<F>,
    w_plus: &Subspace<F>,
    w_minus: &Subspace<F>,
    n: usize,
) -> Result<SubgroupReport<F>, CohomologyError> {
    let (z, b) = (&slice.z, &slice.b);
    let breach =
        |what: &str| CohomologyError::InvariantBreach(format!("{what} (stage {})", slice.degree));
    let zp = z
        .intersect(w_plus)
        .map_err(|_| breach("ambient mismatch"))?;
    let zm = z
        .intersect(w_minus)
        .map_err(|_| breach("ambient mismatch"))?;
    let qp = zp.sum(b).expect("same ambient");
    let qm = zm.sum(b).expect("same ambient");

    let dim_plus = quotient_image_dim(z, b, w_plus).map_err(|_| breach("B not inside Z"))?;
    let dim_minus = quotient_image_dim(z, b, w_minus).map_err(|_| breach("B not inside Z"))?;
    let intersection_dim = qp.intersect(&qm).expect("same ambient").dim() - b.dim();

    // second route: normal forms modulo B
    let nf = |s: &Subspace<F>| {
        Subspace::span(z.ambient(), s.basis().iter().map(|v| b.reduce(v)).collect())
    };
    let (np, nm) = (nf(&zp), nf(&zm));
    if np.dim() != dim_plus || nm.dim() != dim_minus {
        return Err(breach("subgroup dimension routes disagree"));
    }
    if np.intersect(&nm).expect("same ambient").dim() != intersection_dim {
        return Err(breach("intersection routes disagree"));
    }
    let betti = slice.betti();
    let spanned = dim_plus + dim_minus - intersection_dim;
    if spanned > betti {
        return Err(breach("subgroups exceed the Betti number"));
    }
    let pure = intersection_dim == 0;
    let full = spanned == betti;
    let as_forms = |vs: Vec<Vec<F>>| -> Vec<Form<F>> {
        vs.iter()
            .map(|v| Form::from_vector(n, slice.degree, v))
            .collect()
    };
    Ok(SubgroupReport {
        stage: slice.degree,
        side: slice.side,
        betti,
        dim_plus,
        dim_minus,
        intersection_dim,
        plus_reps: as_forms(greedy_reps(&zp, b)),
        minus_reps: as_forms(greedy_reps(&zm, b)),
        pure,
        full,
        pure_and_full: pure && full,
    })
}

fn check_degree(g: &LieAlgebra, degree: usize) -> Result<(), CohomologyError> {
    if degree > g.dim() {
        return Err(CohomologyError::Degree { degree, n: g.dim() });
    }
    Ok(())
}

/// `H^{ℓ±}_K` on the form complex; valid for almost structures too.
pub fn subgroup_dims<F: Field>(
    g: &LieAlgebra,
    ps: &ParaStructure<F>,
    degree: usize,
) -> Result<SubgroupReport<F>, CohomologyError> {
    check_degree(g, degree)?;
    let slice = cochain_slice::<F>(g, degree);
    let (wp, wm) = ps.form_sign_spaces(degree);
    subgroups_in_slice(&slice, &wp, &wm, g.dim())
}

/// `H_{ℓ±}^K` on the multivector complex `(Λ_•g, ∂)`.
pub fn homology_subgroups<F: Field>(
    g: &LieAlgebra,
    ps: &ParaStructure<F>,
    degree: usize,
) -> Result<SubgroupReport<F>, CohomologyError> {
    check_degree(g, degree)?;
    let slice = chain_slice::<F>(g, degree);
    let (wp, wm) = ps.multivector_sign_spaces(degree);
    subgroups_in_slice(&slice, &wp, &wm, g.dim())
}

/// `H^{(p,q)}_K`: dimension and representatives.
pub fn pq_subgroup<F: Field>(
    g: &LieAlgebra,
    ps: &ParaStructure<F>,
    p: usize,
    q: usize,
) -> Result<(usize, Vec<Form<F>>), CohomologyError> {
    if !is_integrable(ps, g) {
        return Err(ParaError::NotIntegrable.into());
    }
    let degree = p + q;
    check_degree(g, degree)?;
    let slice = cochain_slice::<F>(g, degree);
    let w = ps.bigrading(degree).pq_space(p, q);
    let zw = slice.z.intersect(&w).expect("same ambient");
    let reps = greedy_reps(&zw, &slice.b);
    let forms = reps
        .iter()
        .map(|v| Form::from_vector(g.dim(), degree, v))
        .collect();
    Ok((reps.len(), forms))
}

pub fn is_closed<F: Field>(g: &LieAlgebra, a: &Form<F>) -> bool {
    cdiff(g, a).is_zero()
}

/// Whether a homogeneous form is `d`-exact.
pub fn is_exact<F: Field>(g: &LieAlgebra, a: &Form<F>) -> bool {
    let Some(degree) = a.degree() else {
        return false;
    };
    if a.is_zero() {
        return true;
    }
    let slice = cochain_slice::<F>(g, degree);
    slice.b.contains(&a.to_vector(degree).expect("homogeneous"))
}

/// Representative of `[a] ∪ [b]`.
pub fn cup<F: Field>(g: &LieAlgebra, a: &Form<F>, b: &Form<F>) -> Result<Form<F>, CohomologyError> {
    if !is_closed(g, a) || !is_closed(g, b) {
        return Err(CohomologyError::NotClosed);
    }
    Ok(wedge(a, b).expect("same ambient"))
}

/// `⟨[α], [v]⟩` for a closed form and a cycle of the same degree.
pub fn top_pairing<F: Field>(
    g: &LieAlgebra,
    a: &Form<F>,
    v: &Multivector<F>,
) -> Result<F, CohomologyError> {
    if !is_closed(g, a) || !boundary(g, v).0.is_zero() {
        return Err(CohomologyError::NotClosed);
    }
    Ok(crate::exterior::pairing(a, v))
}

/// Pairing matrix between representatives of bases of `H^ℓ` and `H_ℓ`.
pub fn pairing_matrix(g: &LieAlgebra, degree: usize) -> Matrix<Rational> {
    let co = cochain_slice::<Rational>(g, degree).basis_reps();
    let ho = chain_slice::<Rational>(g, degree).basis_reps();
    let rows: Vec<Vec<Rational>> = co
        .iter()
        .map(|a| ho.iter().map(|v| crate::linalg::dot(a, v)).collect())
        .collect();
    Matrix::from_rows(ho.len(), rows)
}

/// Whether verdicts at the Lie-algebra level transfer to the compact quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Applicability {
    pub nilpotent: bool,
    pub completely_solvable_flag: CsFlag,
    pub level: ApplicabilityLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ApplicabilityLevel {
    Manifold,
    LieAlgebraOnly,
}

pub fn applicability(g: &LieAlgebra) -> Applicability {
    let flag = g.completely_solvable_flag();
    Applicability {
        nilpotent: flag == CsFlag::Nilpotent,
        completely_solvable_flag: flag,
        level: if flag.transfers_to_manifold() {
            ApplicabilityLevel::Manifold
        } else {
            ApplicabilityLevel::LieAlgebraOnly
        },
    }
}

/// Report record in the stable JSON schema.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    pub algebra: String,
    pub k: String,
    pub stage: usize,
    pub betti: usize,
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub intersection_dim: usize,
    pub pure: bool,
    pub full: bool,
    pub pure_and_full: bool,
    pub plus_reps: Vec<String>,
    pub minus_reps: Vec<String>,
    pub side: Side,
    pub applicability: Applicability,
}

impl ReportRecord {
    pub fn new<F: Field>(
        algebra: &LieAlgebra,
        k: &str,
        report: &SubgroupReport<F>,
        applicability: Applicability,
    ) -> Self {
        ReportRecord {
            algebra: algebra.salamon(),
            k: k.to_string(),
            stage: report.stage,
            betti: report.betti,
            dim_plus: report.dim_plus,
            dim_minus: report.dim_minus,
            intersection_dim: report.intersection_dim,
            pure: report.pure,
            full: report.full,
            pure_and_full: report.pure_and_full,
            plus_reps: report.render_reps(&report.plus_reps),
            minus_reps: report.render_reps(&report.minus_reps),
            side: report.side,
            applicability,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_get, parse_algebra, parse_form};
    use crate::scalar::rat;

    #[test]
    fn betti_numbers_of_small_algebras() {
        let b = |s: &str| betti_numbers(&parse_algebra(s).unwrap());
        assert_eq!(b("(0,0,0,0)"), [1, 4, 6, 4, 1]);
        assert_eq!(b("(0,0,12)"), [1, 2, 2, 1]);
        assert_eq!(b("(0,0,12,0)"), [1, 3, 4, 3, 1]);
        assert_eq!(b("(0,0,12,13)"), [1, 2, 2, 2, 1]);
        // non-unimodular: top cohomology vanishes
        assert_eq!(b("(0,12)"), [1, 1, 0]);
    }

    #[test]
    fn homology_matches_cohomology() {
        for s in ["(0,0,12,13)", "(0,0,0,12,13,24)", "(0,12)", "(0,0,0,13+34)"] {
            let g = parse_algebra(s).unwrap();
            for l in 0..=g.dim() {
                assert_eq!(
                    chain_slice::<Rational>(&g, l).betti(),
                    betti(&g, l),
                    "{s} {l}"
                );
                let m = pairing_matrix(&g, l);
                assert_eq!(m.rank(), betti(&g, l), "{s} {l}");
            }
        }
    }

    #[test]
    fn subgroups_on_torus() {
        let g = LieAlgebra::abelian(4);
        let ps = ParaStructure::<Rational>::validate(
            crate::paracomplex::diagonal_k(&[true, true, false, false]),
            4,
        )
        .unwrap();
        let r = subgroup_dims(&g, &ps, 2).unwrap();
        assert_eq!(
            (r.betti, r.dim_plus, r.dim_minus, r.intersection_dim),
            (6, 2, 4, 0)
        );
        assert!(r.pure_and_full);
        assert_eq!(r.render_reps(&r.plus_reps), ["e12", "e34"]);
        let (d11, _) = pq_subgroup(&g, &ps, 1, 1).unwrap();
        assert_eq!(d11, 4);
        assert!(matches!(
            subgroup_dims(&g, &ps, 5),
            Err(CohomologyError::Degree { .. })
        ));
    }

    // image of Z ∩ W in Z / B by ranks, with ∂ taken as the transpose of d
    fn homology_oracle(g: &LieAlgebra, ps: &ParaStructure<Rational>, l: usize) -> (usize, usize) {
        let del = diff_matrix(g, l - 1).transpose();
        let z = del.kernel();
        let b = if l == g.dim() {
            Subspace::zero(z.ambient())
        } else {
            diff_matrix(g, l).transpose().image()
        };
        let (wp, wm) = ps.multivector_sign_spaces(l);
        let image_dim = |w: &Subspace<Rational>| {
            let zw = z.intersect(w).unwrap();
            let rows: Vec<Vec<Rational>> = zw.basis().iter().chain(b.basis()).cloned().collect();
            Matrix::from_rows(z.ambient(), rows).rank() - b.dim()
        };
        (image_dim(&wp), image_dim(&wm))
    }

    #[test]
    fn catalog_reference_values() {
        let e = catalog_get("ex2.5").unwrap();
        let ps = e.structure("K").unwrap();
        let r = subgroup_dims(&e.algebra, &ps, 2).unwrap();
        assert_eq!((r.betti, r.dim_plus, r.dim_minus), (9, 4, 4));
        assert!(r.pure && !r.full);
        let h = homology_subgroups(&e.algebra, &ps, 2).unwrap();
        assert_eq!(
            (h.dim_plus, h.dim_minus),
            homology_oracle(&e.algebra, &ps, 2)
        );
        assert!(h
            .render_reps(&h.plus_reps)
            .iter()
            .all(|s| s.starts_with("e_")));
    }

    #[test]
    fn exactness_and_cup() {
        let g = parse_algebra("(0,0,12,13)").unwrap();
        let e12 = parse_form("e12", 4).unwrap();
        let e14 = parse_form("e14", 4).unwrap();
        let e3 = parse_form("e3", 4).unwrap();
        assert!(is_exact(&g, &e12));
        assert!(!is_exact(&g, &e14));
        assert!(is_closed(&g, &e14));
        assert!(matches!(
            cup(&g, &e3, &e14),
            Err(CohomologyError::NotClosed)
        ));
        let e1 = parse_form("e1", 4).unwrap();
        assert_eq!(cup(&g, &e1, &e14).unwrap(), Form::zero(4));
        let e2 = parse_form("e2", 4).unwrap();
        assert_eq!(cup(&g, &e1, &e2).unwrap().coeff(&[0, 1]), rat(1, 1));
    }

    #[test]
    fn applicability_levels() {
        assert_eq!(
            applicability(&parse_algebra("(0,0,12,13)").unwrap()).level,
            ApplicabilityLevel::Manifold
        );
        assert_eq!(
            applicability(&parse_algebra("(0,13,-12)").unwrap()).level,
            ApplicabilityLevel::LieAlgebraOnly
        );
    }
}
