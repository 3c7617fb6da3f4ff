//! One-parameter families `K_t` with entries in ℚ(t).

use std::fmt;

use crate::cohomology::{subgroup_dims, CohomologyError, SubgroupReport};
use crate::lie::LieAlgebra;
use crate::linalg::Matrix;
use crate::paracomplex::{is_integrable, ParaError, ParaStructure};
use crate::scalar::{Field, Rational, RationalFunction, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeformError {
    #[error("K_t^2 != I in Q(t): entry ({row}, {col}) of K_t^2 - I is {entry}")]
    InvolutionFailsInField {
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("K_t has a pole at t = {0}")]
    Pole(Rational),
    #[error("at t = {t}: {source}")]
    AtPoint { t: Rational, source: ParaError },
    #[error(transparent)]
    Para(#[from] ParaError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

#[derive(Debug, Clone)]
pub struct DeformationFamily {
    pub g: LieAlgebra,
    pub k: Matrix<RationalFunction>,
    pub domain_note: String,
}

/// Validation outcome for a family.
#[derive(Debug, Clone)]
pub struct FamilyInfo {
    pub generic: ParaStructure<RationalFunction>,
    /// Both eigenspaces are subalgebras over ℚ(t).
    pub integrable: bool,
}

/// `K_t² = I` identically in `t`, with balanced eigenspaces over ℚ(t).
pub fn validate_family(f: &DeformationFamily) -> Result<FamilyInfo, DeformError> {
    let n = f.g.dim();
    let sq = f.k.mul(&f.k).sub(&Matrix::identity(n));
    for i in 0..n {
        for j in 0..n {
            if !sq.get(i, j).is_zero() {
                return Err(DeformError::InvolutionFailsInField {
                    row: i + 1,
                    col: j + 1,
                    entry: sq.get(i, j).to_string(),
                });
            }
        }
    }
    let generic = ParaStructure::validate(f.k.clone(), n)?;
    let integrable = is_integrable(&generic, &f.g);
    Ok(FamilyInfo {
        generic,
        integrable,
    })
}

/// `K_{t₀}` as a rational matrix.
pub fn eval_at(f: &DeformationFamily, t: &Rational) -> Result<Matrix<Rational>, DeformError> {
    let n = f.k.rows();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = f.k.get(i, j).eval(t).map_err(|e| match e {
                ScalarError::Pole(p) => DeformError::Pole(p),
                _ => DeformError::Pole(t.clone()),
            })?;
            m.set(i, j, v);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TValue {
    Generic,
    At(Rational),
}

impl fmt::Display for TValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TValue::Generic => f.write_str("generic"),
            TValue::At(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub t: TValue,
    pub betti: usize,
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub pure: bool,
    pub full: bool,
    pub integrable: bool,
}

pub const CSV_HEADER: &str = "t,betti,dim_plus,dim_minus,pure,full,integrable";

impl ScanRow {
    fn from_report<F: Field>(t: TValue, r: &SubgroupReport<F>, integrable: bool) -> Self {
        ScanRow {
            t,
            betti: r.betti,
            dim_plus: r.dim_plus,
            dim_minus: r.dim_minus,
            pure: r.pure,
            full: r.full,
            integrable,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_plus, self.dim_minus)
    }

    pub fn pure_and_full(&self) -> bool {
        self.pure && self.full
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.t,
            self.betti,
            self.dim_plus,
            self.dim_minus,
            self.pure,
            self.full,
            self.integrable
        )
    }
}

/// Subgroup dimensions over the function field ℚ(t).
pub fn generic_dims(f: &DeformationFamily, stage: usize) -> Result<ScanRow, DeformError> {
    let info = validate_family(f)?;
    let r = subgroup_dims(&f.g, &info.generic, stage)?;
    Ok(ScanRow::from_report(TValue::Generic, &r, info.integrable))
}

/// The structure `K_{t₀}`.
pub fn structure_at(
    f: &DeformationFamily,
    t: &Rational,
) -> Result<ParaStructure<Rational>, DeformError> {
    let k = eval_at(f, t)?;
    ParaStructure::validate(k, f.g.dim()).map_err(|source| DeformError::AtPoint {
        t: t.clone(),
        source,
    })
}

pub fn sample_row(
    f: &DeformationFamily,
    t: &Rational,
    stage: usize,
) -> Result<ScanRow, DeformError> {
    let ps = structure_at(f, t)?;
    let r = subgroup_dims(&f.g, &ps, stage)?;
    Ok(ScanRow::from_report(
        TValue::At(t.clone()),
        &r,
        is_integrable(&ps, &f.g),
    ))
}

/// Exact evaluation at each `t`, in input order.
pub fn sample_scan(
    f: &DeformationFamily,
    ts: &[Rational],
    stage: usize,
) -> Vec<Result<ScanRow, DeformError>> {
    ts.iter().map(|t| sample_row(f, t, stage)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jump {
    pub t: Rational,
    pub generic: (usize, usize),
    pub sampled: (usize, usize),
}

/// Sampled points whose dimensions differ from the generic ones; points
/// that fail to evaluate are skipped.
pub fn jump_report(
    f: &DeformationFamily,
    ts: &[Rational],
    stage: usize,
) -> Result<Vec<Jump>, DeformError> {
    let generic = generic_dims(f, stage)?;
    Ok(jumps_from_rows(&generic, &sample_scan(f, ts, stage)))
}

pub fn jumps_from_rows(generic: &ScanRow, rows: &[Result<ScanRow, DeformError>]) -> Vec<Jump> {
    rows.iter()
        .filter_map(|r| r.as_ref().ok())
        .filter(|r| r.dims() != generic.dims())
        .filter_map(|r| match &r.t {
            TValue::At(t) => Some(Jump {
                t: t.clone(),
                generic: generic.dims(),
                sampled: r.dims(),
            }),
            TValue::Generic => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_get, parse_family_matrix};
    use crate::scalar::rat;

    fn family(entry: &str) -> DeformationFamily {
        catalog_get(entry).unwrap().family("K_t").unwrap()
    }

    #[test]
    fn generic_and_special_points() {
        let f = family("ex2.17");
        let info = validate_family(&f).unwrap();
        assert!(info.integrable);
        let g = generic_dims(&f, 2).unwrap();
        assert_eq!(
            (g.betti, g.dims(), g.pure, g.full),
            (2, (1, 1), false, false)
        );
        let z = sample_row(&f, &rat(0, 1), 2).unwrap();
        assert_eq!(z.dims(), (0, 2));
        assert!(z.pure_and_full());
        assert_eq!(z.csv(), "0,2,0,2,true,true,true");
        assert_eq!(g.csv(), "generic,2,1,1,false,false,true");
    }

    #[test]
    fn jumps_on_grid() {
        let ts: Vec<Rational> = [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]
            .iter()
            .map(|&(a, b)| rat(a, b))
            .collect();
        let sci = jump_report(&family("jump-sci"), &ts, 2).unwrap();
        assert_eq!(
            sci,
            [
                Jump {
                    t: rat(0, 1),
                    generic: (4, 3),
                    sampled: (3, 3)
                },
                Jump {
                    t: rat(1, 1),
                    generic: (4, 3),
                    sampled: (4, 2)
                },
            ]
        );
        let scs = jump_report(&family("jump-scs"), &ts, 2).unwrap();
        let pts: Vec<_> = scs.iter().map(|j| (j.t.clone(), j.sampled)).collect();
        assert_eq!(pts, [(rat(0, 1), (4, 2)), (rat(1, 1), (3, 2))]);
    }

    #[test]
    fn invalid_families() {
        let g = catalog_get("torus4").unwrap().algebra;
        let bad = DeformationFamily {
            g: g.clone(),
            k: parse_family_matrix("1,t,0,0; 0,1,0,0; 0,0,-1,0; 0,0,0,-1").unwrap(),
            domain_note: String::new(),
        };
        match validate_family(&bad) {
            Err(DeformError::InvolutionFailsInField { row, col, entry }) => {
                assert_eq!((row, col), (1, 2));
                assert_eq!(entry, "2*t");
            }
            other => panic!("{other:?}"),
        }
        let pole = DeformationFamily {
            g,
            k: parse_family_matrix("1,0,0,0; 1/t,-1,0,0; 0,0,1,0; 0,0,0,-1").unwrap(),
            domain_note: String::new(),
        };
        validate_family(&pole).unwrap();
        assert!(matches!(
            eval_at(&pole, &rat(0, 1)),
            Err(DeformError::Pole(_))
        ));
        let rows = sample_scan(&pole, &[rat(0, 1), rat(1, 1)], 2);
        assert!(rows[0].is_err() && rows[1].is_ok());
    }
}
