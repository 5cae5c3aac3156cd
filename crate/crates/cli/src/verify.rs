use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use eig_core::graph::{
    self, build_join_construction, check_divisor_conjugate_iso, check_field_product_psi, predicted_similarity_blocks,
    squarefree_distance, DistanceMatrix, IdealGraph,
};
use eig_core::ideals::{class_partition, gcd_lemma_holds, ClassPartition};
use eig_core::metricdim::{self, certify_dimension, dim_bruteforce, finiteness_bound_check};
use eig_core::zagreb::{self, LevelPartition, ZagrebReport, CSV_HEADER};
use eig_core::{factor, Caps, Error, FactoredInteger};

use crate::render::{header, Ctx};
use crate::{CliError, Format};

const VERIFY_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    All,
    Adjacency,
    Distances,
    Partition,
    Join,
    Dim,
    Zagreb,
    Iso,
    Bounds,
}

pub const CATEGORIES: [Check; 8] = [
    Check::Adjacency,
    Check::Distances,
    Check::Partition,
    Check::Join,
    Check::Dim,
    Check::Zagreb,
    Check::Iso,
    Check::Bounds,
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub run: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub n: u64,
    pub category: Check,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub range: [u64; 2],
    pub composite_count: usize,
    pub categories: BTreeMap<Check, Tally>,
    pub failures: Vec<Finding>,
    /// Expected, documented differences that do not count as failures.
    pub informational: Vec<Finding>,
    pub skipped: Vec<Finding>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Outcome = Result<(), String>;

#[derive(Default)]
struct PerN {
    results: Vec<(Check, Outcome)>,
    informational: Vec<(Check, String)>,
    skipped: Vec<(Check, String)>,
    zagreb_row: Option<String>,
}

struct Instance<'a> {
    f: &'a FactoredInteger,
    g: &'a IdealGraph,
    classes: &'a ClassPartition,
    dist: &'a DistanceMatrix,
    caps: &'a Caps,
    budget: u64,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_adjacency(x: &Instance) -> Outcome {
    let (f, g) = (x.f, x.g);
    let vs = g.vertices();
    for a in 0..vs.len() {
        for b in (a + 1)..vs.len() {
            let expected = vs[a].sum(&vs[b]).is_essential(f);
            ensure(g.has_edge(a, b) == expected, || {
                format!(
                    "<{}> ~ <{}> is {}, ideal sum says {expected}",
                    vs[a].generator(),
                    vs[b].generator(),
                    !expected
                )
            })?;
        }
    }
    for (v, ideal) in vs.iter().enumerate() {
        ensure(g.degree(v) == x.classes.class_degree(ideal.xi()), || {
            format!(
                "deg <{}> = {}, class law gives {}",
                ideal.generator(),
                g.degree(v),
                x.classes.class_degree(ideal.xi())
            )
        })?;
    }
    let aig = graph::build_aig(f, x.caps).map_err(|e| e.to_string())?;
    let n = u128::from(f.n());
    for (a, b) in (0..vs.len()).flat_map(|a| ((a + 1)..vs.len()).map(move |b| (a, b))) {
        let product = u128::from(aig.generator(a)) * u128::from(aig.generator(b));
        ensure(aig.has_edge(a, b) == (product % n == 0), || {
            format!(
                "AIG adjacency of <{}>, <{}> disagrees with n | ab",
                aig.generator(a),
                aig.generator(b)
            )
        })?;
    }
    if f.is_squarefree() {
        for a in 0..vs.len() {
            for b in (a + 1)..vs.len() {
                let ok = gcd_lemma_holds(f, vs[a].generator(), vs[b].generator()).map_err(|e| e.to_string())?;
                ensure(ok, || {
                    format!(
                        "gcd biconditional fails for {}, {}",
                        vs[a].generator(),
                        vs[b].generator()
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn check_distances(x: &Instance) -> Outcome {
    let t = x.g.order();
    let diam = x.dist.max();
    ensure(diam <= 3, || format!("diameter {diam} exceeds 3"))?;
    if t >= 2 {
        let complete = x.g.graph().is_complete();
        ensure((diam == 1) == complete, || {
            format!("diameter {diam} but complete = {complete}")
        })?;
    }
    if x.f.is_squarefree() {
        let vs = x.g.vertices();
        for a in 0..t {
            for b in (a + 1)..t {
                let closed = squarefree_distance(x.f, &vs[a], &vs[b]).map_err(|e| e.to_string())?;
                ensure(closed == x.dist.get(a, b), || {
                    format!(
                        "d(<{}>, <{}>) = {}, closed form gives {closed}",
                        vs[a].generator(),
                        vs[b].generator(),
                        x.dist.get(a, b)
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn check_partition(x: &Instance, info: &mut Vec<(Check, String)>) -> Outcome {
    let actual = x.g.distance_similar_partition();
    let predicted = predicted_similarity_blocks(x.classes);
    ensure(actual == predicted, || {
        format!(
            "similarity blocks {:?} differ from prediction {:?}",
            actual.sizes(),
            predicted.sizes()
        )
    })?;
    let exps: Vec<u32> = x.f.exponents().collect();
    for (xi, members) in x.classes.classes() {
        let size: u64 = (0..exps.len())
            .filter(|&i| !xi.contains(i))
            .map(|i| u64::from(exps[i]))
            .product();
        ensure(members.len() as u64 == size, || {
            format!("class {xi} has {} members, expected {size}", members.len())
        })?;
    }
    if x.classes.m() > 0 {
        let raw = x.classes.classes().len() + 1;
        if actual.len() != raw {
            info.push((
                Check::Partition,
                format!(
                    "{} similarity blocks against {raw} classes: universal vertices merge",
                    actual.len()
                ),
            ));
        }
    }
    Ok(())
}

fn check_join(x: &Instance) -> Outcome {
    let joined = build_join_construction(x.f, x.caps).map_err(|e| e.to_string())?;
    ensure(
        joined.vertices() == x.g.vertices() && joined.graph() == x.g.graph(),
        || {
            format!(
                "join construction has {} edges, direct has {}",
                joined.edge_count(),
                x.g.edge_count()
            )
        },
    )
}

fn check_dim(x: &Instance, info: &mut Vec<(Check, String)>, skipped: &mut Vec<(Check, String)>) -> Outcome {
    let cert = certify_dimension(x.g, x.dist, x.classes, x.budget).map_err(|e| e.to_string())?;
    ensure(cert.certified, || {
        format!(
            "constructed set size {} against closed form {}",
            cert.constructive.dim, cert.formula.dim
        )
    })?;
    if !cert.formula.exact {
        info.push((
            Check::Dim,
            format!("dim <= {} recorded as an upper bound", cert.formula.dim),
        ));
        return Ok(());
    }
    if cert.formula.degenerate {
        return Ok(());
    }
    let brute = dim_bruteforce(x.g, x.dist, &x.g.distance_similar_partition(), x.budget).map_err(|e| e.to_string())?;
    if !brute.exact {
        skipped.push((
            Check::Dim,
            format!(
                "exact search over budget, dim in [{}, {}]",
                brute.lower_bound, brute.dim
            ),
        ));
        return Ok(());
    }
    ensure(brute.dim == cert.formula.dim, || {
        format!("search gives {}, closed form {}", brute.dim, cert.formula.dim)
    })
}

fn check_zagreb(x: &Instance, info: &mut Vec<(Check, String)>, row: &mut Option<String>) -> Outcome {
    let r = ZagrebReport::compute(x.g).map_err(|e| e.to_string())?;
    *row = Some(r.csv_row());
    ensure(r.flags.all_agree(), || {
        format!(
            "definition ({}, {}) against closed form ({}, {})",
            r.m1_definition, r.m2_definition, r.m1_closed, r.m2_closed
        )
    })?;
    ensure((r.m2_definition == 0) == (x.g.edge_count() == 0), || {
        "M2 = 0 does not match an edgeless graph".into()
    })?;
    if x.f.is_squarefree() && x.f.k() >= 2 {
        let z = zagreb::zagreb_squarefree_closed(x.f.k() as u32).map_err(|e| e.to_string())?;
        ensure(z.m2_paper_convention - z.m2_edge_once == z.within_level, || {
            "paper convention does not exceed the edge-once value by the within-level sum".into()
        })?;
        let levels = LevelPartition::new(x.g).map_err(|e| e.to_string())?;
        ensure(levels.degree_law_holds(x.g), || "level degree law fails".into())?;
        if r.flags.paper_convention_agrees == Some(false) {
            info.push((
                Check::Zagreb,
                format!(
                    "paper-convention M2 = {} differs from edge-once {}",
                    z.m2_paper_convention, r.m2_definition
                ),
            ));
        }
    }
    if x.f.k() == 2 && !x.f.is_squarefree() {
        let two = zagreb::zagreb_two_prime(x.f).map_err(|e| e.to_string())?;
        ensure(two == (r.m1_closed, r.m2_closed), || {
            "two-prime closed form disagrees".into()
        })?;
    }
    Ok(())
}

fn check_iso(x: &Instance, info: &mut Vec<(Check, String)>) -> Outcome {
    let iso = check_divisor_conjugate_iso(x.f, x.caps).map_err(|e| e.to_string())?;
    let expected = x.f.is_squarefree() || x.g.order() <= 2;
    ensure(iso.isomorphic == expected, || {
        format!("d -> n/d isomorphic = {}, expected {expected}", iso.isomorphic)
    })?;
    if iso.isomorphic && !x.f.is_squarefree() {
        info.push((
            Check::Iso,
            format!("d -> n/d is an isomorphism on the {}-vertex graph", x.g.order()),
        ));
    }
    if x.f.is_squarefree() && (2..=10).contains(&x.f.k()) {
        let psi = check_field_product_psi(x.f, x.caps).map_err(|e| e.to_string())?;
        ensure(psi.isomorphic, || format!("psi fails at {:?}", psi.mismatch))?;
    }
    Ok(())
}

fn check_bounds(x: &Instance) -> Outcome {
    ensure(x.g.order() as u64 == x.f.vertex_count(), || {
        "vertex count disagrees with the divisor count".into()
    })?;
    ensure(x.classes.m() as u64 == x.f.essential_count(), || {
        "essential count disagrees with the exponents".into()
    })?;
    let formula = metricdim::dim_formula(x.f).map_err(|e| e.to_string())?;
    if formula.degenerate {
        return Ok(());
    }
    ensure(formula.lower_bound <= formula.dim, || {
        "class lower bound exceeds dimension".into()
    })?;
    if formula.exact {
        let sim = metricdim::dim_lower_bound(&x.g.distance_similar_partition(), x.g.order());
        ensure(sim <= formula.dim, || {
            format!("similarity lower bound {sim} exceeds dim {}", formula.dim)
        })?;
        ensure(finiteness_bound_check(formula.dim, x.g.order()), || {
            format!("T = {} exceeds 4^dim + dim with dim = {}", x.g.order(), formula.dim)
        })?;
    }
    Ok(())
}

fn check_one(n: u64, checks: &BTreeSet<Check>, caps: &Caps, budget: u64) -> Option<PerN> {
    let f = match factor(n) {
        Ok(f) if !f.is_prime() => f,
        _ => return None,
    };
    let mut out = PerN::default();
    let prepared = (|| -> Result<_, Error> {
        let g = graph::build_essential_graph(&f, caps)?;
        let classes = class_partition(&f, g.vertices());
        let dist = g.all_pairs_distances()?;
        Ok((g, classes, dist))
    })();
    let (g, classes, dist) = match prepared {
        Ok(p) => p,
        Err(e) if e.is_input_error() => {
            out.skipped.push((Check::All, e.to_string()));
            return Some(out);
        }
        Err(e) => {
            for &c in checks {
                out.results.push((c, Err(e.to_string())));
            }
            return Some(out);
        }
    };
    let x = Instance {
        f: &f,
        g: &g,
        classes: &classes,
        dist: &dist,
        caps,
        budget,
    };
    for &c in checks {
        let outcome = match c {
            Check::Adjacency => check_adjacency(&x),
            Check::Distances => check_distances(&x),
            Check::Partition => check_partition(&x, &mut out.informational),
            Check::Join => check_join(&x),
            Check::Dim => check_dim(&x, &mut out.informational, &mut out.skipped),
            Check::Zagreb => check_zagreb(&x, &mut out.informational, &mut out.zagreb_row),
            Check::Iso => check_iso(&x, &mut out.informational),
            Check::Bounds => check_bounds(&x),
            Check::All => continue,
        };
        out.results.push((c, outcome));
    }
    Some(out)
}

/// Runs the selected checks on every composite `n` in `lo..=hi`.
///
/// Per-`n` work is independent, and results are merged in `n` order, so the
/// summary does not depend on the number of worker threads.
pub fn sweep(lo: u64, hi: u64, checks: &[Check], caps: &Caps, budget: u64) -> (VerifySummary, Vec<String>) {
    let selected: BTreeSet<Check> = if checks.contains(&Check::All) {
        CATEGORIES.into_iter().collect()
    } else {
        checks.iter().copied().collect()
    };
    let per_n: Vec<(u64, PerN)> = (lo..=hi)
        .into_par_iter()
        .filter_map(|n| check_one(n, &selected, caps, budget).map(|r| (n, r)))
        .collect();

    let mut summary = VerifySummary {
        range: [lo, hi],
        composite_count: per_n.len(),
        categories: selected.iter().map(|&c| (c, Tally::default())).collect(),
        failures: Vec::new(),
        informational: Vec::new(),
        skipped: Vec::new(),
    };
    let mut rows = Vec::new();
    for (n, r) in per_n {
        for (category, outcome) in r.results {
            let tally = summary.categories.get_mut(&category).expect("selected category");
            tally.run += 1;
            match outcome {
                Ok(()) => tally.passed += 1,
                Err(detail) => {
                    tally.failed += 1;
                    summary.failures.push(Finding { n, category, detail });
                }
            }
        }
        let to_findings = |v: Vec<(Check, String)>| {
            v.into_iter()
                .map(move |(category, detail)| Finding { n, category, detail })
        };
        summary.informational.extend(to_findings(r.informational));
        summary.skipped.extend(to_findings(r.skipped));
        rows.extend(r.zagreb_row);
    }
    (summary, rows)
}

fn write_summary_text(out: &mut dyn Write, s: &VerifySummary) -> std::io::Result<()> {
    writeln!(
        out,
        "range {}..={}: {} composite values",
        s.range[0], s.range[1], s.composite_count
    )?;
    writeln!(out, "{:<10} {:>8} {:>8} {:>8}", "category", "run", "passed", "failed")?;
    for (c, t) in &s.categories {
        let name = serde_json::to_value(c).unwrap();
        writeln!(
            out,
            "{:<10} {:>8} {:>8} {:>8}",
            name.as_str().unwrap(),
            t.run,
            t.passed,
            t.failed
        )?;
    }
    let counts = |v: &[Finding]| {
        let mut by: BTreeMap<Check, usize> = BTreeMap::new();
        for f in v {
            *by.entry(f.category).or_default() += 1;
        }
        by.into_iter()
            .map(|(c, k)| format!("{}: {k}", serde_json::to_value(c).unwrap().as_str().unwrap()))
            .collect::<Vec<_>>()
            .join(", ")
    };
    if !s.informational.is_empty() {
        writeln!(out, "informational ({})", counts(&s.informational))?;
    }
    if !s.skipped.is_empty() {
        writeln!(out, "skipped ({})", counts(&s.skipped))?;
    }
    for f in &s.failures {
        let name = serde_json::to_value(f.category).unwrap();
        writeln!(out, "FAIL n = {} [{}]: {}", f.n, name.as_str().unwrap(), f.detail)?;
    }
    writeln!(
        out,
        "{}",
        if s.all_passed() {
            "all checks passed"
        } else {
            "verification FAILED"
        }
    )
}

pub fn run(ctx: &Ctx, out: &mut dyn Write, lo: u64, hi: u64, checks: &[Check]) -> Result<(), CliError> {
    if lo > hi {
        return Err(CliError::Usage(format!("empty range {lo}..={hi}")));
    }
    let budget = ctx.budget.unwrap_or(VERIFY_BUDGET);
    let (summary, rows) = sweep(lo, hi, checks, &ctx.caps, budget);
    match ctx.format {
        Format::Text => {
            header(out)?;
            write_summary_text(out, &summary)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &summary).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in &rows {
                writeln!(out, "{r}")?;
            }
            write_summary_text(&mut std::io::stderr().lock(), &summary)?;
        }
        Format::Dot => return Err(CliError::Usage("`verify` does not support --format dot".into())),
    }
    if summary.all_passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} check(s) failed",
            summary.failures.len()
        )))
    }
}
