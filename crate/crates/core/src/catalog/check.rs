//! Recomputes a catalog entry and compares with its stored expectations.

use std::fmt;

use super::{parse_form, CatalogEntry, CatalogError, ExpectedKey, Point};
use crate::cohomology::{cochain_slice, subgroup_dims};
use crate::deform::{generic_dims, structure_at};
use crate::dkahler::{dkahler_decide, is_dkahler_form};
use crate::paracomplex::{is_abelian, is_integrable, ParaStructure};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub key: String,
    pub field: &'static str,
    pub expected: String,
    pub computed: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: expected {}, computed {}",
            self.key, self.field, self.expected, self.computed
        )
    }
}

struct Recorder<'a> {
    key: &'a str,
    out: Vec<Mismatch>,
}

impl Recorder<'_> {
    fn cmp<T: PartialEq + fmt::Display>(
        &mut self,
        field: &'static str,
        expected: Option<T>,
        computed: T,
    ) {
        if let Some(e) = expected {
            if e != computed {
                self.out.push(Mismatch {
                    key: self.key.to_string(),
                    field,
                    expected: e.to_string(),
                    computed: computed.to_string(),
                });
            }
        }
    }

    fn fail(&mut self, field: &'static str, expected: String, computed: String) {
        self.out.push(Mismatch {
            key: self.key.to_string(),
            field,
            expected,
            computed,
        });
    }
}

fn key_string(k: &ExpectedKey) -> String {
    match &k.point {
        None => format!("{}/{}", k.structure, k.stage),
        Some(Point::Generic) => format!("{}@generic/{}", k.structure, k.stage),
        Some(Point::At(t)) => format!("{}@{}/{}", k.structure, t, k.stage),
    }
}

/// All disagreements between stored and recomputed values.
pub fn check_entry(entry: &CatalogEntry) -> Result<Vec<Mismatch>, CatalogError> {
    let g = &entry.algebra;
    let n = g.dim();
    let mut all = Vec::new();
    for (key, exp) in &entry.expected {
        let ks = key_string(key);
        let mut rec = Recorder {
            key: &ks,
            out: Vec::new(),
        };
        rec.cmp("unimodular", exp.unimodular, g.is_unimodular());

        if key.point == Some(Point::Generic) {
            let fam = entry.family(&key.structure)?;
            let row =
                generic_dims(&fam, key.stage).map_err(|e| CatalogError::Document(e.to_string()))?;
            rec.cmp("betti", exp.betti, row.betti);
            rec.cmp("dim_plus", exp.dim_plus, row.dim_plus);
            rec.cmp("dim_minus", exp.dim_minus, row.dim_minus);
            rec.cmp("pure", exp.pure, row.pure);
            rec.cmp("full", exp.full, row.full);
            rec.cmp("pure_and_full", exp.pure_and_full, row.pure_and_full());
            rec.cmp("integrable", exp.integrable, row.integrable);
            if let Some(a) = exp.abelian {
                let info = crate::deform::validate_family(&fam)
                    .map_err(|e| CatalogError::Document(e.to_string()))?;
                rec.cmp("abelian", Some(a), is_abelian(&info.generic, g));
            }
            all.extend(rec.out);
            continue;
        }

        let ps: ParaStructure<Rational> = match &key.point {
            None => entry.structure(&key.structure)?,
            Some(Point::At(t)) => structure_at(&entry.family(&key.structure)?, t)
                .map_err(|e| CatalogError::Document(e.to_string()))?,
            Some(Point::Generic) => unreachable!(),
        };
        let r =
            subgroup_dims(g, &ps, key.stage).map_err(|e| CatalogError::Document(e.to_string()))?;
        rec.cmp("betti", exp.betti, r.betti);
        rec.cmp("dim_plus", exp.dim_plus, r.dim_plus);
        rec.cmp("dim_minus", exp.dim_minus, r.dim_minus);
        rec.cmp("intersection_dim", exp.intersection_dim, r.intersection_dim);
        rec.cmp("pure", exp.pure, r.pure);
        rec.cmp("full", exp.full, r.full);
        rec.cmp("pure_and_full", exp.pure_and_full, r.pure_and_full);
        let integrable = is_integrable(&ps, g);
        rec.cmp("integrable", exp.integrable, integrable);
        rec.cmp("abelian", exp.abelian, is_abelian(&ps, g));

        let slice = cochain_slice::<Rational>(g, key.stage);
        let (wp, wm) = ps.form_sign_spaces(key.stage);
        for (field, span, w) in [
            ("plus_span", &exp.plus_span, &wp),
            ("minus_span", &exp.minus_span, &wm),
        ] {
            if let Some(span) = span {
                let mut vecs = Vec::new();
                for s in span {
                    let f = parse_form(s, n)?;
                    vecs.push(f.to_vector(key.stage).ok_or_else(|| {
                        CatalogError::Document(format!("'{s}' is not a {}-form", key.stage))
                    })?);
                }
                if !slice.classes_span(w, &vecs) {
                    let computed = if field == "plus_span" {
                        r.render_reps(&r.plus_reps)
                    } else {
                        r.render_reps(&r.minus_reps)
                    };
                    rec.fail(field, format!("{span:?}"), format!("{computed:?}"));
                }
            }
        }

        if exp.dkahler.is_some() || exp.dkahler_witness.is_some() {
            match dkahler_decide(g, &ps) {
                Ok(v) => {
                    rec.cmp(
                        "dkahler",
                        exp.dkahler.clone(),
                        v.status.as_str().to_string(),
                    );
                    if let Some(w) = &exp.dkahler_witness {
                        let form = parse_form(w, n)?;
                        if !is_dkahler_form(g, &ps, &form) {
                            rec.fail("dkahler_witness", w.clone(), "not a D-Kähler form".into());
                        }
                    }
                }
                Err(e) => rec.fail("dkahler", format!("{:?}", exp.dkahler), e.to_string()),
            }
        }
        all.extend(rec.out);
    }
    Ok(all)
}
