use std::fmt::Write as _;

use paracoh::catalog::{
    catalog_all, catalog_get, check_entry, parse_algebra, parse_family_matrix, parse_k_for,
    render_algebra, CatalogEntry, CatalogError, StructureKind,
};
use paracoh::cohomology::{
    applicability, homology_subgroups, subgroup_dims, Applicability, CohomologyError, ReportRecord,
    SubgroupReport,
};
use paracoh::deform::{
    generic_dims, jumps_from_rows, sample_row, structure_at, DeformError, DeformationFamily,
    ScanRow, CSV_HEADER,
};
use paracoh::dkahler::dkahler_decide;
use paracoh::lie::LieAlgebra;
use paracoh::linalg::Matrix;
use paracoh::paracomplex::{
    is_abelian, is_integrable, random_paracomplex, ParaError, ParaStructure,
};
use paracoh::scalar::{parse_rational, Rational};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{
    AnalyzeArgs, CatalogAction, CliError, Command, DeformArgs, DkahlerArgs, Format, Outcome,
    RandomCheckArgs, SideArg, Source,
};

type CliResult<T> = Result<T, CliError>;

pub fn pool() -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("PARACOH_THREADS") {
        let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::input(format!(
                "PARACOH_THREADS must be a positive integer, got '{v}'"
            ))
        })?;
        b = b.num_threads(n);
    }
    b.build().map_err(CliError::breach)
}

pub fn run(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::Analyze(a) => analyze(a),
        Command::Deform(a) => deform(a),
        Command::Dkahler(a) => dkahler(a),
        Command::RandomCheck(a) => random_check(a),
        Command::Catalog(a) => match &a.action {
            CatalogAction::List => catalog_list(),
            CatalogAction::Show { name, format } => catalog_show(name, *format),
            CatalogAction::Check { name } => catalog_check(name.as_deref()),
        },
    }
}

fn ok(text: String) -> CliResult<Outcome> {
    Ok(Outcome { text, code: 0 })
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        CliError::input(e)
    }
}

impl From<ParaError> for CliError {
    fn from(e: ParaError) -> Self {
        CliError::input(e)
    }
}

impl From<CohomologyError> for CliError {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::InvariantBreach(_) => CliError::breach(e),
            _ => CliError::input(e),
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        match e {
            DeformError::Cohomology(c) => c.into(),
            _ => CliError::input(e),
        }
    }
}

fn parse_t(s: &str) -> CliResult<Rational> {
    parse_rational(s.trim())
        .ok_or_else(|| CliError::input(format!("invalid rational t value '{s}'")))
}

fn entry(source: &Source) -> CliResult<Option<CatalogEntry>> {
    source
        .catalog
        .as_deref()
        .map(catalog_get)
        .transpose()
        .map_err(Into::into)
}

fn algebra_of(source: &Source) -> CliResult<(LieAlgebra, Option<CatalogEntry>)> {
    match (&source.algebra, entry(source)?) {
        (Some(a), None) => Ok((parse_algebra(a)?, None)),
        (None, Some(e)) => Ok((e.algebra.clone(), Some(e))),
        _ => Err(CliError::input(
            "give exactly one of --algebra or --catalog",
        )),
    }
}

/// A fixed structure from inline input, a catalog structure, or a catalog
/// family evaluated at `--at`.
fn fixed_pair(
    source: &Source,
    k: Option<&str>,
    at: Option<&str>,
) -> CliResult<(LieAlgebra, ParaStructure<Rational>, String)> {
    let (g, e) = algebra_of(source)?;
    let Some(e) = e else {
        let k = k.ok_or_else(|| CliError::input("--k is required with --algebra"))?;
        if at.is_some() {
            return Err(CliError::input("--at applies to catalog families only"));
        }
        let ps = ParaStructure::validate(parse_k_for(k, g.dim())?, g.dim())?;
        return Ok((g, ps, k.to_string()));
    };
    let name = match (&source.structure, at) {
        (Some(s), _) => s.clone(),
        (None, Some(_)) => e
            .default_family()
            .ok_or_else(|| CliError::input(format!("entry '{}' has no family", e.name)))?
            .to_string(),
        (None, None) => e
            .default_structure()
            .map(|(n, _)| n.to_string())
            .ok_or_else(|| {
                CliError::input(format!("entry '{}' has only families; pass --at", e.name))
            })?,
    };
    let spec = e.structure_spec(&name)?;
    match (spec.kind, at) {
        (StructureKind::Family, Some(t)) => {
            let t = parse_t(t)?;
            let ps = structure_at(&e.family(&name)?, &t)?;
            Ok((g, ps, format!("{name}@{t}")))
        }
        (StructureKind::Family, None) => Err(CliError::input(format!(
            "structure '{name}' is a family; pass --at"
        ))),
        (_, Some(_)) => Err(CliError::input(format!(
            "structure '{name}' is not a family"
        ))),
        (_, None) => Ok((g, e.structure(&name)?, spec.value.clone())),
    }
}

fn report_text(out: &mut String, r: &SubgroupReport<Rational>) {
    let _ = writeln!(
        out,
        "stage {} {}: betti {}  dim+ {}  dim- {}  intersection {}  pure {}  full {}  pure_and_full {}",
        r.stage, r.side, r.betti, r.dim_plus, r.dim_minus, r.intersection_dim, r.pure, r.full, r.pure_and_full
    );
    let _ = writeln!(out, "  H+  {}", join_or_zero(&r.render_reps(&r.plus_reps)));
    let _ = writeln!(out, "  H-  {}", join_or_zero(&r.render_reps(&r.minus_reps)));
}

fn join_or_zero(v: &[String]) -> String {
    if v.is_empty() {
        "0".into()
    } else {
        v.join(", ")
    }
}

fn applicability_text(app: &Applicability) -> String {
    let level = match app.level {
        paracoh::cohomology::ApplicabilityLevel::Manifold => "transfers to compact quotients",
        paracoh::cohomology::ApplicabilityLevel::LieAlgebraOnly => "Lie algebra level only",
    };
    format!("{} ({level})", app.completely_solvable_flag)
}

fn analyze(a: &AnalyzeArgs) -> CliResult<Outcome> {
    let (g, ps, k_label) = fixed_pair(&a.source, a.k.as_deref(), a.at.as_deref())?;
    let n = g.dim();
    let stages: Vec<usize> = if a.stage.is_empty() {
        (0..=n).collect()
    } else {
        a.stage.clone()
    };
    if let Some(&bad) = stages.iter().find(|&&l| l > n) {
        return Err(CliError::input(format!("stage {bad} outside [0, {n}]")));
    }
    let sides: Vec<bool> = match a.side {
        SideArg::Cohomology => vec![false],
        SideArg::Homology => vec![true],
        SideArg::Both => vec![false, true],
    };
    let jobs: Vec<(usize, bool)> = stages
        .iter()
        .flat_map(|&l| sides.iter().map(move |&h| (l, h)))
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(l, homology)| {
            if homology {
                homology_subgroups(&g, &ps, l)
            } else {
                subgroup_dims(&g, &ps, l)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let app = applicability(&g);
    let mut out = String::new();
    match a.format {
        Format::Json => {
            for r in &reports {
                let rec = ReportRecord::new(&g, &k_label, r, app);
                out.push_str(&serde_json::to_string(&rec).expect("serializable"));
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(
                "stage,side,betti,dim_plus,dim_minus,intersection_dim,pure,full,pure_and_full\n",
            );
            for r in &reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.stage,
                    r.side,
                    r.betti,
                    r.dim_plus,
                    r.dim_minus,
                    r.intersection_dim,
                    r.pure,
                    r.full,
                    r.pure_and_full
                );
            }
        }
        Format::Text => {
            let _ = writeln!(out, "algebra        {}", render_algebra(&g));
            let _ = writeln!(out, "K              {k_label}");
            let _ = writeln!(
                out,
                "integrable     {}\nabelian        {}\nunimodular     {}",
                is_integrable(&ps, &g),
                is_abelian(&ps, &g),
                g.is_unimodular()
            );
            let _ = writeln!(out, "applicability  {}", applicability_text(&app));
            for r in &reports {
                report_text(&mut out, r);
            }
        }
    }
    ok(out)
}

fn family_of(a: &DeformArgs) -> CliResult<(DeformationFamily, String)> {
    let (g, e) = algebra_of(&a.source)?;
    match e {
        None => {
            let m = a
                .family
                .as_deref()
                .ok_or_else(|| CliError::input("--family is required with --algebra"))?;
            let k = parse_family_matrix(m)?;
            if k.rows() != g.dim() || k.cols() != g.dim() {
                return Err(CatalogError::Length {
                    expected: g.dim(),
                    got: k.rows(),
                }
                .into());
            }
            Ok((
                DeformationFamily {
                    g,
                    k,
                    domain_note: String::new(),
                },
                m.to_string(),
            ))
        }
        Some(e) => {
            let name = match &a.source.structure {
                Some(s) => s.clone(),
                None => e
                    .default_family()
                    .ok_or_else(|| CliError::input(format!("entry '{}' has no family", e.name)))?
                    .to_string(),
            };
            Ok((e.family(&name)?, name))
        }
    }
}

fn row_json(r: &ScanRow) -> Value {
    json!({
        "t": r.t.to_string(),
        "betti": r.betti,
        "dim_plus": r.dim_plus,
        "dim_minus": r.dim_minus,
        "pure": r.pure,
        "full": r.full,
        "integrable": r.integrable,
    })
}

fn deform(a: &DeformArgs) -> CliResult<Outcome> {
    let (f, label) = family_of(a)?;
    if a.stage > f.g.dim() {
        return Err(CliError::input(format!(
            "stage {} outside [0, {}]",
            a.stage,
            f.g.dim()
        )));
    }
    let ts =
        a.t.iter()
            .map(|s| parse_t(s))
            .collect::<CliResult<Vec<_>>>()?;
    let generic = generic_dims(&f, a.stage)?;
    let rows: Vec<Result<ScanRow, DeformError>> =
        ts.par_iter().map(|t| sample_row(&f, t, a.stage)).collect();
    if let Some(Err(e @ DeformError::Cohomology(CohomologyError::InvariantBreach(_)))) =
        rows.iter().find(|r| {
            matches!(
                r,
                Err(DeformError::Cohomology(CohomologyError::InvariantBreach(_)))
            )
        })
    {
        return Err(CliError::breach(e));
    }
    let jumps = jumps_from_rows(&generic, &rows);
    let mut out = String::new();
    match a.format {
        Format::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            out.push_str(&generic.csv());
            out.push('\n');
            for (t, r) in ts.iter().zip(&rows) {
                match r {
                    Ok(r) => out.push_str(&r.csv()),
                    Err(e) => {
                        eprintln!("t = {t}: {e}");
                        let _ = write!(out, "{t},,,,,,");
                    }
                }
                out.push('\n');
            }
        }
        Format::Json => {
            let rows_json: Vec<Value> = ts
                .iter()
                .zip(&rows)
                .map(|(t, r)| match r {
                    Ok(r) => row_json(r),
                    Err(e) => json!({"t": t.to_string(), "error": e.to_string()}),
                })
                .collect();
            let jumps_json: Vec<Value> = jumps
                .iter()
                .map(|j| json!({"t": j.t.to_string(), "generic": [j.generic.0, j.generic.1], "sampled": [j.sampled.0, j.sampled.1]}))
                .collect();
            let v = json!({
                "algebra": render_algebra(&f.g),
                "family": label,
                "stage": a.stage,
                "generic": row_json(&generic),
                "rows": rows_json,
                "jumps": jumps_json,
            });
            out = serde_json::to_string_pretty(&v).expect("serializable");
            out.push('\n');
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "algebra  {}\nfamily   {label}\nstage    {}",
                render_algebra(&f.g),
                a.stage
            );
            let _ = writeln!(
                out,
                "{:>10}  {:>5}  {:>4}  {:>4}  {:>5}  {:>5}  integrable",
                "t", "betti", "dim+", "dim-", "pure", "full"
            );
            let line = |out: &mut String, r: &ScanRow| {
                let _ = writeln!(
                    out,
                    "{:>10}  {:>5}  {:>4}  {:>4}  {:>5}  {:>5}  {}",
                    r.t.to_string(),
                    r.betti,
                    r.dim_plus,
                    r.dim_minus,
                    r.pure,
                    r.full,
                    r.integrable
                );
            };
            line(&mut out, &generic);
            for (t, r) in ts.iter().zip(&rows) {
                match r {
                    Ok(r) => line(&mut out, r),
                    Err(e) => {
                        let _ = writeln!(out, "{:>10}  error: {e}", t.to_string());
                    }
                }
            }
            if jumps.is_empty() {
                out.push_str("jumps    none\n");
            }
            for j in &jumps {
                let _ = writeln!(
                    out,
                    "jump     t = {}: generic ({}, {}) sampled ({}, {})",
                    j.t, j.generic.0, j.generic.1, j.sampled.0, j.sampled.1
                );
            }
        }
    }
    let code = if rows.is_empty() || rows.iter().any(|r| r.is_ok()) {
        0
    } else {
        2
    };
    Ok(Outcome { text: out, code })
}

fn dkahler(a: &DkahlerArgs) -> CliResult<Outcome> {
    let (g, ps, k_label) = fixed_pair(&a.source, a.k.as_deref(), a.at.as_deref())?;
    let v = dkahler_decide(&g, &ps)?;
    let app = applicability(&g);
    let witness = v.witness.as_ref().map(|w| w.render());
    let mut out = String::new();
    match a.format {
        Format::Json | Format::Csv => {
            let j = json!({
                "algebra": render_algebra(&g),
                "k": k_label,
                "status": v.status.as_str(),
                "witness": witness,
                "candidate_space_dim": v.candidate_space_dim,
                "generic_degenerate": v.generic_degenerate,
                "obstructed": v.obstructed,
                "obstruction_note": v.obstruction_note,
                "applicability": app,
            });
            out = serde_json::to_string_pretty(&j).expect("serializable");
            out.push('\n');
        }
        Format::Text => {
            let _ = writeln!(out, "algebra              {}", render_algebra(&g));
            let _ = writeln!(out, "K                    {k_label}");
            let _ = writeln!(out, "status               {}", v.status);
            let _ = writeln!(
                out,
                "witness              {}",
                witness.as_deref().unwrap_or("none")
            );
            let _ = writeln!(out, "candidate space dim  {}", v.candidate_space_dim);
            let obstructed = match v.obstructed {
                Some(b) => b.to_string(),
                None => "not evaluated".into(),
            };
            let _ = writeln!(out, "class obstruction    {obstructed}");
            if !v.obstruction_note.is_empty() {
                let _ = writeln!(out, "note                 {}", v.obstruction_note);
            }
            let _ = writeln!(out, "applicability        {}", applicability_text(&app));
        }
    }
    ok(out)
}

fn matrix_rows(m: &Matrix<Rational>) -> String {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

struct Trial {
    index: usize,
    seed: u64,
    attempts: usize,
    k: Option<Matrix<Rational>>,
    abelian: bool,
    pure_and_full: bool,
    dims: (usize, usize),
    betti: usize,
}

fn random_check(a: &RandomCheckArgs) -> CliResult<Outcome> {
    if a.trials == 0 {
        return Err(CliError::input("--trials must be at least 1"));
    }
    let (g, _) = algebra_of(&a.source)?;
    if g.dim() % 2 == 1 {
        return Err(CliError::input(format!("odd dimension {}", g.dim())));
    }
    let theorem = g.dim() == 4 && g.is_nilpotent();
    let trials = (0..a.trials)
        .into_par_iter()
        .map(|i| {
            let seed = a.seed.wrapping_add(i as u64);
            match random_paracomplex(&g, seed, true, a.max_attempts) {
                Ok((ps, attempts)) => {
                    let r = subgroup_dims(&g, &ps, 2)?;
                    Ok(Trial {
                        index: i,
                        seed,
                        attempts,
                        abelian: is_abelian(&ps, &g),
                        pure_and_full: r.pure_and_full,
                        dims: (r.dim_plus, r.dim_minus),
                        betti: r.betti,
                        k: Some(ps.k_matrix().clone()),
                    })
                }
                Err(ParaError::NotFound(n)) => Ok(Trial {
                    index: i,
                    seed,
                    attempts: n,
                    k: None,
                    abelian: false,
                    pure_and_full: false,
                    dims: (0, 0),
                    betti: 0,
                }),
                Err(e) => Err(CliError::from(e)),
            }
        })
        .collect::<CliResult<Vec<Trial>>>()?;
    let found: Vec<&Trial> = trials.iter().filter(|t| t.k.is_some()).collect();
    let attempts: usize = trials.iter().map(|t| t.attempts).sum();
    let abelian = found.iter().filter(|t| t.abelian).count();
    let paf = found.iter().filter(|t| t.pure_and_full).count();
    let counterexamples: Vec<&&Trial> = if theorem {
        found
            .iter()
            .filter(|t| !t.pure_and_full || !t.abelian)
            .collect()
    } else {
        Vec::new()
    };
    let mut out = String::new();
    match a.format {
        Format::Json | Format::Csv => {
            let ce: Vec<Value> = counterexamples
                .iter()
                .map(|t| {
                    json!({
                        "trial": t.index,
                        "seed": t.seed,
                        "k": matrix_rows(t.k.as_ref().expect("found")),
                        "abelian": t.abelian,
                        "pure_and_full": t.pure_and_full,
                        "dim_plus": t.dims.0,
                        "dim_minus": t.dims.1,
                        "betti": t.betti,
                    })
                })
                .collect();
            let v = json!({
                "algebra": render_algebra(&g),
                "trials": a.trials,
                "seed": a.seed,
                "theorem_applies": theorem,
                "samples": found.len(),
                "not_found": trials.len() - found.len(),
                "attempts": attempts,
                "abelian": abelian,
                "pure_and_full": paf,
                "counterexamples": ce,
            });
            out = serde_json::to_string_pretty(&v).expect("serializable");
            out.push('\n');
        }
        Format::Text => {
            let _ = writeln!(out, "algebra          {}", render_algebra(&g));
            let _ = writeln!(out, "trials           {} (seed {})", a.trials, a.seed);
            let _ = writeln!(
                out,
                "samples          {} ({} not found)",
                found.len(),
                trials.len() - found.len()
            );
            let rate = if attempts == 0 {
                0.0
            } else {
                found.len() as f64 / attempts as f64
            };
            let _ = writeln!(out, "attempts         {attempts} (acceptance {rate:.4})");
            let _ = writeln!(out, "abelian          {abelian}/{}", found.len());
            let _ = writeln!(out, "pure_and_full    {paf}/{} at stage 2", found.len());
            if theorem {
                let _ = writeln!(out, "counterexamples  {}", counterexamples.len());
            } else {
                out.push_str("counterexamples  n/a (not a 4-dimensional nilpotent algebra)\n");
            }
            for t in &counterexamples {
                let _ = writeln!(
                    out,
                    "  trial {} seed {}: K = {}  abelian {}  pure_and_full {}  dims ({}, {}) b2 {}",
                    t.index,
                    t.seed,
                    matrix_rows(t.k.as_ref().expect("found")),
                    t.abelian,
                    t.pure_and_full,
                    t.dims.0,
                    t.dims.1,
                    t.betti
                );
            }
        }
    }
    let code = if counterexamples.is_empty() { 0 } else { 4 };
    Ok(Outcome { text: out, code })
}

fn catalog_list() -> CliResult<Outcome> {
    let mut out = String::new();
    for e in catalog_all() {
        let structures: Vec<&str> = e.structure_names().map(String::as_str).collect();
        let _ = writeln!(
            out,
            "{:<12} {:<22} {}",
            e.name,
            render_algebra(&e.algebra),
            structures.join(", ")
        );
    }
    ok(out)
}

fn catalog_show(name: &str, format: Format) -> CliResult<Outcome> {
    let e = catalog_get(name)?;
    let mut out = match format {
        Format::Text => {
            let mut s = format!(
                "name     {}\nalgebra  {}\n",
                e.name,
                render_algebra(&e.algebra)
            );
            for n in e.structure_names() {
                let spec = e.structure_spec(n)?;
                let _ = writeln!(s, "{n:<8} {:?} {}", spec.kind, spec.value);
            }
            if !e.notes().is_empty() {
                let _ = writeln!(s, "notes    {}", e.notes());
            }
            s
        }
        _ => e.to_json(),
    };
    if !out.ends_with('\n') {
        out.push('\n');
    }
    ok(out)
}

fn catalog_check(name: Option<&str>) -> CliResult<Outcome> {
    let entries = match name {
        Some(n) => vec![catalog_get(n)?],
        None => catalog_all(),
    };
    let mut out = String::new();
    let mut bad = 0;
    for e in &entries {
        let m = check_entry(e)?;
        if m.is_empty() {
            let _ = writeln!(out, "ok        {}", e.name);
        } else {
            bad += 1;
            let _ = writeln!(out, "mismatch  {}", e.name);
            for x in m {
                let _ = writeln!(out, "  {x}");
            }
        }
    }
    Ok(Outcome {
        text: out,
        code: if bad == 0 { 0 } else { 4 },
    })
}
