use std::io::Write;

use serde_json::json;

use eig_core::graph::{self, check_divisor_conjugate_iso, IdealGraph};
use eig_core::ideals::{class_partition, ClassPartition, IndexSet};
use eig_core::metricdim::{self, DimReport, DEFAULT_SEARCH_BUDGET};
use eig_core::zagreb::{ZagrebReport, CSV_HEADER};
use eig_core::{factor, Caps, FactoredInteger};

use crate::{CliError, Format, Method};

pub struct Ctx {
    pub format: Format,
    pub caps: Caps,
    pub budget: Option<u64>,
    pub to_file: bool,
}

type Out<'a> = &'a mut dyn Write;

pub fn header(out: Out) -> Result<(), CliError> {
    writeln!(out, "eig {}", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Usage(format!("`{command}` does not support --format {format:?}").to_lowercase())
}

fn write_json(out: Out, value: &impl serde::Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn build(ctx: &Ctx, n: u64) -> Result<(FactoredInteger, IdealGraph), CliError> {
    let f = factor(n)?;
    let g = graph::build_essential_graph(&f, &ctx.caps)?;
    Ok((f, g))
}

fn factors_json(f: &FactoredInteger) -> serde_json::Value {
    json!(f.factors().iter().map(|&(p, m)| [p, u64::from(m)]).collect::<Vec<_>>())
}

pub fn factor_cmd(ctx: &Ctx, out: Out, n: u64) -> Result<(), CliError> {
    let f = factor(n)?;
    match ctx.format {
        Format::Text => {
            header(out)?;
            writeln!(out, "n = {}", f.n())?;
            writeln!(out, "factorization = {}", f.pretty())?;
            writeln!(out, "k = {}", f.k())?;
            writeln!(out, "T = {}", f.vertex_count())?;
            writeln!(out, "m = {}", f.essential_count())?;
            writeln!(out, "squarefree = {}", f.is_squarefree())?;
        }
        Format::Json => write_json(
            out,
            &json!({
                "n": f.n(),
                "factors": factors_json(&f),
                "k": f.k(),
                "T": f.vertex_count(),
                "m": f.essential_count(),
                "squarefree": f.is_squarefree(),
            }),
        )?,
        other => return Err(unsupported("factor", other)),
    }
    Ok(())
}

fn key_label(xi: IndexSet) -> String {
    if xi.is_empty() {
        "X".to_string()
    } else {
        format!("X{xi}")
    }
}

fn class_sizes_line(c: &ClassPartition) -> String {
    std::iter::once(format!("X:{}", c.m()))
        .chain(
            c.ordered_keys()
                .into_iter()
                .map(|xi| format!("{}:{}", key_label(xi), c.class(xi).len())),
        )
        .collect::<Vec<_>>()
        .join(" ")
}

fn graph_summary(out: Out, g: &IdealGraph, c: &ClassPartition) -> Result<(), CliError> {
    let f = g.factored();
    writeln!(out, "n = {} ({})", f.n(), f.pretty())?;
    writeln!(
        out,
        "kind = {}",
        serde_json::to_value(g.kind()).unwrap().as_str().unwrap()
    )?;
    writeln!(out, "k = {}, T = {}, m = {}", f.k(), g.order(), c.m())?;
    writeln!(out, "class sizes: {}", class_sizes_line(c))?;
    writeln!(out, "edges = {}", g.edge_count())?;
    Ok(())
}

pub fn graph(ctx: &Ctx, out: Out, n: u64, aig: bool) -> Result<(), CliError> {
    let f = factor(n)?;
    let g = if aig {
        graph::build_aig(&f, &ctx.caps)?
    } else {
        graph::build_essential_graph(&f, &ctx.caps)?
    };
    let c = class_partition(&f, g.vertices());
    let iso = if aig {
        Some(check_divisor_conjugate_iso(&f, &ctx.caps)?)
    } else {
        None
    };
    match ctx.format {
        Format::Text => {
            header(out)?;
            graph_summary(out, &g, &c)?;
            if let Some(iso) = &iso {
                writeln!(
                    out,
                    "d -> n/d maps E(Z_n) onto this graph: {} ({} vs {} edges)",
                    if iso.isomorphic { "yes" } else { "no" },
                    iso.source_edges,
                    iso.target_edges
                )?;
            }
            for (a, b) in g.generator_edges() {
                writeln!(out, "<{a}> -- <{b}>")?;
            }
        }
        Format::Json | Format::Dot => {
            if ctx.format == Format::Json {
                out.write_all(graph::to_json(&g).as_bytes())?;
                writeln!(out)?;
            } else {
                out.write_all(graph::to_dot(&g).as_bytes())?;
            }
            let mut err = std::io::stderr().lock();
            graph_summary(&mut err, &g, &c)?;
            if ctx.to_file {
                writeln!(err, "wrote {} vertices and {} edges", g.order(), g.edge_count())?;
            }
        }
        Format::Csv => return Err(unsupported(if aig { "aig" } else { "graph" }, Format::Csv)),
    }
    Ok(())
}

pub fn classes(ctx: &Ctx, out: Out, n: u64) -> Result<(), CliError> {
    let (f, g) = build(ctx, n)?;
    let c = class_partition(&f, g.vertices());
    let keys: Vec<IndexSet> = std::iter::once(IndexSet::EMPTY).chain(c.ordered_keys()).collect();
    let members = |xi: IndexSet| c.class(xi).iter().map(|&v| g.generator(v)).collect::<Vec<_>>();
    match ctx.format {
        Format::Text => {
            header(out)?;
            writeln!(out, "n = {} ({}), T = {}, m = {}", f.n(), f.pretty(), c.t(), c.m())?;
            for xi in keys {
                let ds = members(xi)
                    .iter()
                    .map(|d| format!("<{d}>"))
                    .collect::<Vec<_>>()
                    .join(" ");
                writeln!(
                    out,
                    "{:<10} size {:<5} degree {:<5} {}",
                    key_label(xi),
                    c.class(xi).len(),
                    c.class_degree(xi),
                    ds
                )?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = keys
                .into_iter()
                .map(|xi| {
                    json!({
                        "xi": xi.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "size": c.class(xi).len(),
                        "degree": c.class_degree(xi),
                        "members": members(xi),
                    })
                })
                .collect();
            write_json(
                out,
                &json!({"n": f.n(), "factors": factors_json(&f), "T": c.t(), "m": c.m(), "classes": rows}),
            )?;
        }
        other => return Err(unsupported("classes", other)),
    }
    Ok(())
}

pub fn distances(ctx: &Ctx, out: Out, n: u64) -> Result<(), CliError> {
    let (f, g) = build(ctx, n)?;
    let d = g.all_pairs_distances()?;
    let labels: Vec<u64> = (0..g.order()).map(|v| g.generator(v)).collect();
    match ctx.format {
        Format::Text => {
            header(out)?;
            writeln!(
                out,
                "n = {} ({}), T = {}, diameter = {}",
                f.n(),
                f.pretty(),
                g.order(),
                d.max()
            )?;
            let w = labels.iter().map(|l| l.to_string().len()).max().unwrap_or(1).max(2);
            write!(out, "{:>w$}", "")?;
            for l in &labels {
                write!(out, " {l:>w$}")?;
            }
            writeln!(out)?;
            for (v, l) in labels.iter().enumerate() {
                write!(out, "{l:>w$}")?;
                for x in d.row(v) {
                    write!(out, " {x:>w$}")?;
                }
                writeln!(out)?;
            }
        }
        Format::Csv => {
            write!(out, "d")?;
            for l in &labels {
                write!(out, ",{l}")?;
            }
            writeln!(out)?;
            for (v, l) in labels.iter().enumerate() {
                write!(out, "{l}")?;
                for x in d.row(v) {
                    write!(out, ",{x}")?;
                }
                writeln!(out)?;
            }
        }
        Format::Json => {
            let rows: Vec<&[u8]> = (0..g.order()).map(|v| d.row(v)).collect();
            write_json(
                out,
                &json!({"n": f.n(), "vertices": labels, "diameter": d.max(), "distances": rows}),
            )?;
        }
        Format::Dot => return Err(unsupported("distances", Format::Dot)),
    }
    Ok(())
}

fn dim_text(out: Out, r: &DimReport) -> Result<(), CliError> {
    writeln!(out, "n = {}, T = {}", r.n, r.t)?;
    let method = serde_json::to_value(r.method).unwrap();
    let status = if r.degenerate {
        "degenerate single vertex"
    } else if r.exact {
        "exact"
    } else {
        "upper bound"
    };
    writeln!(out, "dim = {} ({status}, {})", r.dim, method.as_str().unwrap())?;
    writeln!(out, "lower bound = {}", r.lower_bound)?;
    if let Some(w) = &r.witness_generators {
        let w = w.iter().map(|d| format!("<{d}>")).collect::<Vec<_>>().join(" ");
        writeln!(out, "witness = {w}")?;
    }
    Ok(())
}

fn representations_text(out: Out, r: &DimReport) -> Result<(), CliError> {
    for (d, rep) in &r.representations {
        let rep = rep.iter().map(u8::to_string).collect::<Vec<_>>().join(", ");
        writeln!(out, "  r(<{d}>|W) = ({rep})")?;
    }
    Ok(())
}

pub fn dim(ctx: &Ctx, out: Out, n: u64, method: Method, set: Option<Vec<u64>>) -> Result<(), CliError> {
    let budget = ctx.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    if !matches!(ctx.format, Format::Text | Format::Json) {
        return Err(unsupported("dim", ctx.format));
    }
    let (f, g) = build(ctx, n)?;

    if let Some(set) = set {
        let d = g.all_pairs_distances()?;
        let w = set
            .iter()
            .map(|&x| g.index_of(x).ok_or(eig_core::Error::NotAVertex(x)))
            .collect::<Result<Vec<_>, _>>()?;
        let res = metricdim::is_resolving(&d, &w)?;
        let collision = res.collision.map(|(u, v)| [g.generator(u), g.generator(v)]);
        if ctx.format == Format::Json {
            let reps: serde_json::Map<String, serde_json::Value> = res
                .representations
                .iter()
                .map(|(v, r)| (g.generator(*v).to_string(), json!(r)))
                .collect();
            write_json(
                out,
                &json!({"n": n, "set": set, "resolving": res.resolving, "collision": collision, "representations": reps}),
            )?;
        } else {
            header(out)?;
            writeln!(out, "n = {n}, W = {set:?}")?;
            writeln!(out, "resolving = {}", res.resolving)?;
            if let Some([a, b]) = collision {
                writeln!(out, "<{a}> and <{b}> share a representation")?;
            }
        }
        return Ok(());
    }

    let d = g.all_pairs_distances()?;
    let c = class_partition(&f, g.vertices());
    match method {
        Method::Auto => {
            let cert = metricdim::certify_dimension(&g, &d, &c, budget)?;
            let mut report = cert.formula.clone();
            report.lower_bound = report.lower_bound.max(cert.constructive.lower_bound);
            report.witness = cert.constructive.witness.clone();
            report.witness_generators = cert.constructive.witness_generators.clone();
            report.representations = cert.constructive.representations.clone();
            if ctx.format == Format::Json {
                let mut v = serde_json::to_value(&report).unwrap();
                v["certified"] = json!(cert.certified);
                v["lower_bound_tight"] = json!(cert.lower_bound_tight);
                v["complete"] = json!(cert.complete);
                write_json(out, &v)?;
            } else {
                header(out)?;
                dim_text(out, &report)?;
                writeln!(out, "certified = {}", if cert.certified { "yes" } else { "no" })?;
                if cert.lower_bound_tight {
                    writeln!(out, "minimality: similarity lower bound equals the value")?;
                }
                if cert.complete {
                    writeln!(out, "graph is complete: dim = T - 1")?;
                }
                representations_text(out, &report)?;
            }
            if !cert.certified {
                return Err(CliError::Verification(format!(
                    "certification failed for n = {n}: constructed set has size {}, closed form gives {}",
                    cert.constructive.dim, cert.formula.dim
                )));
            }
        }
        _ => {
            let report = match method {
                Method::Formula => metricdim::dim_formula(&f)?,
                Method::Brute => metricdim::dim_bruteforce(&g, &d, &g.distance_similar_partition(), budget)?,
                _ => metricdim::constructive_resolving_set(&g, &d, &c, budget)?,
            };
            if ctx.format == Format::Json {
                write_json(out, &report)?;
            } else {
                header(out)?;
                dim_text(out, &report)?;
                representations_text(out, &report)?;
            }
        }
    }
    Ok(())
}

pub fn zagreb(ctx: &Ctx, out: Out, n: u64) -> Result<(), CliError> {
    let (_, g) = build(ctx, n)?;
    let r = ZagrebReport::compute(&g)?;
    match ctx.format {
        Format::Text => {
            header(out)?;
            writeln!(out, "n = {}, k = {}, T = {}", r.n, r.k, r.t)?;
            writeln!(out, "M1 = {}", r.m1_definition)?;
            writeln!(out, "M2 = {}", r.m2_definition)?;
            let form = serde_json::to_value(r.closed_form).unwrap();
            writeln!(
                out,
                "closed form ({}): M1 = {}, M2 = {}",
                form.as_str().unwrap(),
                r.m1_closed,
                r.m2_closed
            )?;
            if let Some(p) = r.m2_paper_convention {
                let note = if p == r.m2_definition {
                    "agrees"
                } else {
                    "differs, informational"
                };
                writeln!(out, "paper-convention M2 = {p} ({note})")?;
            }
            writeln!(
                out,
                "{}",
                if r.flags.all_agree() {
                    "all-agree"
                } else {
                    "DISAGREEMENT"
                }
            )?;
        }
        Format::Json => write_json(out, &r)?,
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            writeln!(out, "{}", r.csv_row())?;
        }
        Format::Dot => return Err(unsupported("zagreb", Format::Dot)),
    }
    if !r.flags.all_agree() {
        return Err(CliError::Verification(format!(
            "closed form disagrees with the definition for n = {n}"
        )));
    }
    Ok(())
}
