use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use sklab::causal::{causal_graph, evolve_with_copies, CopyPolicy};
use sklab::compile::{
    boolean_verify, church_add, church_decode, church_encode, church_times, compile_closed, minimal_forms,
    objects_census, program_search, Encoding, Flavor, ProgramStats, TruthTable,
};
use sklab::dag::{distinct_subterms, DagEvolver};
use sklab::enumerate::{s_only, sk, TermSpace};
use sklab::metrics::metrics;
use sklab::models::{discriminate_with, search_exact_models, Model};
use sklab::multiway::{
    ball_growth, branchial_graph, build_multiway, dimension_estimate, joinable, JoinLimits, Joinability,
    MultiwayLimits,
};
use sklab::rewrite::{census, census_records};
use sklab::{evolve, parse, parse_auto, print, Atom, Limits, Notation, Strategy, Term};

use crate::output::{csv_field, Sink};
use crate::{Cli, Command, Format, Global};

const DEFAULT_MAX_NODES: usize = 100_000;
const DEFAULT_MAX_DEPTH: u32 = 1_000;

pub enum Status {
    Complete,
    Truncated,
}

impl Status {
    fn from_truncated(truncated: bool) -> Status {
        if truncated {
            Status::Truncated
        } else {
            Status::Complete
        }
    }
}

struct Ctx<'a> {
    g: &'a Global,
    sink: Sink,
    seeds: Vec<String>,
}

impl Ctx<'_> {
    fn term(&mut self, text: &str) -> Result<Term> {
        let t = match &self.g.notation {
            Some(n) => parse(text, n.parse::<Notation>()?)?,
            None => parse_auto(text)?,
        };
        self.seeds.push(t.to_string());
        Ok(t)
    }

    fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            max_steps: self.g.max_steps.unwrap_or(d.max_steps),
            max_size: self.g.max_size.unwrap_or(d.max_size),
        }
    }

    fn multiway_limits(&self) -> MultiwayLimits {
        MultiwayLimits {
            max_depth: self.g.max_depth.unwrap_or(DEFAULT_MAX_DEPTH),
            max_nodes: self.g.max_nodes.unwrap_or(DEFAULT_MAX_NODES),
        }
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.g.format.unwrap_or(default);
        if !allowed.contains(&f) && f != default {
            bail!("format {f:?} is not available for this command");
        }
        Ok(f)
    }
}

pub fn run(cli: &Cli) -> Result<Status> {
    if let Some(n) = cli.global.jobs {
        configure_threads(n)?;
    }
    let mut ctx = Ctx {
        g: &cli.global,
        sink: Sink::open(cli.global.out.as_deref())?,
        seeds: Vec::new(),
    };
    let status = dispatch(&mut ctx, &cli.command)?;
    let Ctx { sink, seeds, .. } = ctx;
    sink.finish()?;
    if let Some(path) = &cli.global.manifest {
        write_manifest(path, cli, seeds, &status)?;
    }
    Ok(status)
}

#[cfg(feature = "parallel")]
fn configure_threads(n: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring worker threads")
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_: usize) -> Result<()> {
    Ok(())
}

fn write_manifest(path: &Path, cli: &Cli, seeds: Vec<String>, status: &Status) -> Result<()> {
    let g = &cli.global;
    let d = Limits::default();
    let outputs: Vec<Value> = g
        .out
        .iter()
        .map(|p| {
            let bytes = std::fs::metadata(p).map(|m| m.len()).ok();
            json!({ "path": p.display().to_string(), "bytes": bytes })
        })
        .collect();
    let manifest = json!({
        "command": command_name(&cli.command),
        "argv": std::env::args().skip(1).collect::<Vec<_>>(),
        "parameters": format!("{:?}", cli.command),
        "limits": {
            "maxSteps": g.max_steps.unwrap_or(d.max_steps),
            "maxSize": g.max_size.unwrap_or(d.max_size),
            "maxNodes": g.max_nodes.unwrap_or(DEFAULT_MAX_NODES),
            "maxDepth": g.max_depth.unwrap_or(DEFAULT_MAX_DEPTH),
        },
        "seeds": seeds,
        "outputs": outputs,
        "truncated": matches!(status, Status::Truncated),
        "parallel": sklab::par::is_parallel(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    let text = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse { .. } => "parse",
        Command::Print { .. } => "print",
        Command::Evolve { .. } => "evolve",
        Command::Census { .. } => "census",
        Command::Multiway { .. } => "multiway",
        Command::Join { .. } => "join",
        Command::Causal { .. } => "causal",
        Command::Branchial { .. } => "branchial",
        Command::DagSeries { .. } => "dag-series",
        Command::Models { .. } => "models",
        Command::Discriminate { .. } => "discriminate",
        Command::Compile { .. } => "compile",
        Command::Church { .. } => "church",
        Command::Boolean { .. } => "boolean",
        Command::Programs { .. } => "programs",
        Command::Objects { .. } => "objects",
    }
}

fn dispatch(ctx: &mut Ctx, c: &Command) -> Result<Status> {
    match c {
        Command::Parse { term, to } => cmd_parse(ctx, term, to),
        Command::Print { term } => cmd_print(ctx, term),
        Command::Evolve { term, strategy, dag } => cmd_evolve(ctx, term, strategy, *dag),
        Command::Census {
            alphabet,
            size,
            strategy,
            classify,
        } => cmd_census(ctx, alphabet, *size, strategy, *classify),
        Command::Multiway { term } => cmd_multiway(ctx, term),
        Command::Join { a, b } => cmd_join(ctx, a, b),
        Command::Causal { term, strategy, copies } => cmd_causal(ctx, term, strategy, copies),
        Command::Branchial { term, layer } => cmd_branchial(ctx, term, *layer),
        Command::DagSeries { term, strategy } => cmd_dag_series(ctx, term, strategy),
        Command::Models { k, atoms, count } => cmd_models(ctx, *k, atoms, *count),
        Command::Discriminate { model, up_to } => cmd_discriminate(ctx, model, *up_to),
        Command::Compile { term, vars, flavor } => cmd_compile(ctx, term, vars.as_deref(), flavor),
        Command::Church {
            encode,
            decode,
            add,
            times,
        } => cmd_church(ctx, *encode, decode.as_deref(), add.as_deref(), times.as_deref()),
        Command::Boolean {
            term,
            table,
            minimal,
            swapped,
        } => cmd_boolean(ctx, term.as_deref(), *table, *minimal, *swapped),
        Command::Programs { target, up_to } => cmd_programs(ctx, target, *up_to),
        Command::Objects { size } => cmd_objects(ctx, *size),
    }
}

fn strategy(s: &str) -> Result<Strategy> {
    s.parse::<Strategy>().map_err(|e| anyhow!("{e}"))
}

fn alphabet(s: &str) -> Result<Vec<Atom>> {
    match s {
        "sk" => Ok(sk()),
        "s" => Ok(s_only()),
        other => bail!("unknown alphabet {other:?} (expected sk or s)"),
    }
}

fn cmd_parse(ctx: &mut Ctx, text: &str, to: &str) -> Result<Status> {
    let t = ctx.term(text)?;
    let to: Notation = to.parse()?;
    match ctx.format(Format::Text, &[Format::Jsonl])? {
        Format::Jsonl => ctx.sink.json(&json!({ "term": print(&t, to), "notation": to, "size": t.size() }))?,
        _ => ctx.sink.line(&print(&t, to))?,
    }
    Ok(Status::Complete)
}

fn cmd_print(ctx: &mut Ctx, text: &str) -> Result<Status> {
    let t = ctx.term(text)?;
    match ctx.format(Format::Text, &[Format::Jsonl])? {
        Format::Jsonl => {
            let forms: serde_json::Map<String, Value> = Notation::ALL
                .iter()
                .map(|n| (n.name().to_string(), Value::String(print(&t, *n))))
                .collect();
            ctx.sink.json(&json!({ "forms": forms, "metrics": metrics(&t) }))?;
        }
        _ => {
            for n in Notation::ALL {
                ctx.sink.line(&format!("{}: {}", n.name(), print(&t, n)))?;
            }
            let m = metrics(&t);
            ctx.sink.line(&format!("size: {}", m.size))?;
            ctx.sink.line(&format!("depth: {}", m.depth))?;
        }
    }
    Ok(Status::Complete)
}

fn cmd_evolve(ctx: &mut Ctx, text: &str, strat: &str, dag: bool) -> Result<Status> {
    let t = ctx.term(text)?;
    let limits = ctx.limits();
    if dag {
        if strategy(strat)? != Strategy::LEFTMOST_OUTERMOST {
            bail!("--dag supports only the leftmost-outermost strategy");
        }
        let r = DagEvolver::new(&t)?.run(limits)?;
        ctx.format(Format::Jsonl, &[])?;
        ctx.sink.json(&r)?;
        return Ok(Status::from_truncated(r.outcome.is_truncated()));
    }
    let trace = evolve(&t, strategy(strat)?, limits);
    match ctx.format(Format::Csv, &[Format::Jsonl, Format::Text])? {
        Format::Jsonl => {
            for (i, term) in trace.terms.iter().enumerate() {
                let events = if i == 0 { 0 } else { trace.events[i - 1].len() };
                ctx.sink.json(&json!({ "step": i, "size": trace.sizes[i], "events": events, "term": term }))?;
            }
            ctx.sink.json(&json!({ "outcome": trace.outcome }))?;
        }
        Format::Text => {
            for term in &trace.terms {
                ctx.sink.line(&print(term, Notation::CompactLeft))?;
            }
        }
        _ => {
            ctx.sink.line("step,size")?;
            for (i, size) in trace.sizes.iter().enumerate() {
                ctx.sink.line(&format!("{i},{size}"))?;
            }
        }
    }
    eprintln!("outcome: {}", trace.outcome.label());
    Ok(Status::from_truncated(trace.outcome.is_truncated()))
}

fn cmd_census(ctx: &mut Ctx, alpha: &str, size: usize, strat: &str, classify: bool) -> Result<Status> {
    let space = TermSpace::new(size, &alphabet(alpha)?)?;
    let strat = strategy(strat)?;
    let limits = ctx.limits();
    match ctx.format(Format::Jsonl, &[Format::Csv])? {
        Format::Csv => {
            let records = census_records(&space, strat, limits);
            ctx.sink.line("index,term,outcome,steps,max_size,final_size")?;
            for r in &records {
                ctx.sink.line(&format!(
                    "{},{},{},{},{},{}",
                    r.index,
                    csv_field(&r.term),
                    r.outcome.label(),
                    r.steps,
                    r.max_size,
                    r.final_size
                ))?;
            }
            Ok(Status::from_truncated(records.iter().any(|r| r.outcome.is_truncated())))
        }
        _ => {
            let report = census(&space, strat, limits);
            let mut summary = json!({
                "size": size,
                "alphabet": alpha,
                "strategy": strat.to_string(),
                "total": report.total,
                "terminating": report.terminating,
                "presumedNonterminating": report.nonterminating_count(),
                "truncated": report.truncated,
                "championSteps": report.champion_steps,
                "champions": report.champions,
                "maxIntermediateSize": report.max_intermediate_size,
                "haltingTimes": report.halting_times,
                "finalSizes": report.final_sizes,
            });
            if classify {
                summary["nonterminating"] = json!(report.nonterminating);
            }
            ctx.sink.json(&summary)?;
            // A census always classifies every term; hitting a cap is the classification.
            Ok(Status::Complete)
        }
    }
}

fn cmd_multiway(ctx: &mut Ctx, text: &str) -> Result<Status> {
    let t = ctx.term(text)?;
    let g = build_multiway(&[t], ctx.multiway_limits());
    match ctx.format(Format::Json, &[Format::Dot, Format::Csv])? {
        Format::Dot => ctx.sink.raw(&g.to_dot())?,
        Format::Csv => {
            ctx.sink.line("layer,states")?;
            for (i, n) in g.layer_counts().iter().enumerate() {
                ctx.sink.line(&format!("{i},{n}"))?;
            }
        }
        _ => ctx.sink.json(&g.to_json())?,
    }
    Ok(Status::from_truncated(!g.is_complete()))
}

fn cmd_join(ctx: &mut Ctx, a: &str, b: &str) -> Result<Status> {
    let (a, b) = (ctx.term(a)?, ctx.term(b)?);
    let d = JoinLimits::default();
    let limits = JoinLimits {
        max_depth: ctx.g.max_depth.unwrap_or(d.max_depth),
        max_nodes: ctx.g.max_nodes.unwrap_or(d.max_nodes),
    };
    let j = joinable(&a, &b, limits);
    ctx.format(Format::Jsonl, &[])?;
    ctx.sink.json(&j)?;
    Ok(Status::from_truncated(matches!(j, Joinability::Unknown)))
}

fn cmd_causal(ctx: &mut Ctx, text: &str, strat: &str, copies: &str) -> Result<Status> {
    let t = ctx.term(text)?;
    let copies = match copies {
        "share" => CopyPolicy::Share,
        "fresh" => CopyPolicy::Fresh,
        other => bail!("unknown copy policy {other:?} (expected share or fresh)"),
    };
    let log = evolve_with_copies(&t, strategy(strat)?, ctx.limits(), copies);
    let g = causal_graph(&log);
    match ctx.format(Format::Dot, &[Format::Json, Format::Csv])? {
        Format::Json => ctx.sink.json(&g.to_json())?,
        Format::Csv => ctx.sink.raw(&g.widths_csv())?,
        _ => ctx.sink.raw(&g.to_dot())?,
    }
    Ok(Status::from_truncated(log.outcome.is_truncated()))
}

fn cmd_branchial(ctx: &mut Ctx, text: &str, layer: u32) -> Result<Status> {
    let t = ctx.term(text)?;
    let mut limits = ctx.multiway_limits();
    limits.max_depth = layer;
    let g = build_multiway(&[t], limits);
    let truncated = g.frontier.iter().any(|&v| g.layers[v] < layer);
    let b = branchial_graph(&g, layer);
    match ctx.format(Format::Jsonl, &[Format::Dot])? {
        Format::Dot => {
            let mut dot = String::from("graph branchial {\n");
            for &v in &b.nodes {
                dot.push_str(&format!("  {v} [label=\"{}\"];\n", g.nodes[v]));
            }
            for &(x, y) in &b.edges {
                dot.push_str(&format!("  {} -- {};\n", b.nodes[x], b.nodes[y]));
            }
            dot.push_str("}\n");
            ctx.sink.raw(&dot)?;
        }
        _ => {
            let comps = b.components();
            let largest = b.largest_component();
            let center = largest.central_vertex();
            let (diameter, volumes, dimension) = match center {
                Some(c) => {
                    let diameter = largest.diameter_estimate(c);
                    let volumes = ball_growth(&largest, c, diameter);
                    let dim = dimension_estimate(&volumes, diameter as usize);
                    (Some(diameter), volumes, dim)
                }
                None => (None, Vec::new(), None),
            };
            ctx.sink.json(&json!({
                "layer": layer,
                "states": b.len(),
                "edges": b.edges.len(),
                "components": comps.len(),
                "largestComponent": largest.len(),
                "diameterEstimate": diameter,
                "ballVolumes": volumes,
                "dimensionEstimate": dimension,
            }))?;
        }
    }
    Ok(Status::from_truncated(truncated))
}

fn cmd_dag_series(ctx: &mut Ctx, text: &str, strat: &str) -> Result<Status> {
    let t = ctx.term(text)?;
    let trace = evolve(&t, strategy(strat)?, ctx.limits());
    let fmt = ctx.format(Format::Csv, &[Format::Jsonl])?;
    if fmt == Format::Csv {
        ctx.sink.line("step,size,distinct")?;
    }
    for (i, term) in trace.terms.iter().enumerate() {
        let (size, distinct) = (trace.sizes[i], distinct_subterms(term));
        match fmt {
            Format::Jsonl => ctx.sink.json(&json!({ "step": i, "size": size, "distinct": distinct }))?,
            _ => ctx.sink.line(&format!("{i},{size},{distinct}"))?,
        }
    }
    eprintln!("outcome: {}", trace.outcome.label());
    Ok(Status::from_truncated(trace.outcome.is_truncated()))
}

fn cmd_models(ctx: &mut Ctx, k: u8, atoms: &str, count: bool) -> Result<Status> {
    let atoms: Vec<Atom> = atoms.split(',').map(|a| Atom::var(a.trim())).collect();
    let models = search_exact_models(k, &atoms)?;
    let fmt = ctx.format(Format::Jsonl, &[Format::Csv])?;
    if count {
        ctx.sink.json(&json!({ "k": k, "models": models.len() }))?;
        return Ok(Status::Complete);
    }
    for m in &models {
        match fmt {
            Format::Csv => ctx.sink.raw(&format!("{}\n", m.to_csv()))?,
            _ => ctx.sink.json(m)?,
        }
    }
    Ok(Status::Complete)
}

fn cmd_discriminate(ctx: &mut Ctx, path: &Path, up_to: usize) -> Result<Status> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let model = Model::from_csv(&text)?;
    let limits = ctx.limits();
    ctx.format(Format::Jsonl, &[])?;
    let mut lines = Vec::new();
    let found = discriminate_with(up_to, &model, limits, |scan| {
        lines.push(json!({
            "size": scan.size,
            "scanned": scan.scanned,
            "skipped": scan.skipped,
            "classes": scan.classes,
        }));
    })?;
    for l in &lines {
        ctx.sink.json(l)?;
    }
    ctx.sink.json(&json!({ "discrepancy": found }))?;
    Ok(Status::Complete)
}

fn cmd_compile(ctx: &mut Ctx, text: &str, vars: Option<&str>, flavor: &str) -> Result<Status> {
    let t = ctx.term(text)?;
    let flavor: Flavor = flavor.parse()?;
    let order: Vec<Atom> = match vars {
        Some(v) => v.split(',').map(|a| Atom::var(a.trim())).collect(),
        None => t.atoms().into_iter().filter(|a| !matches!(a, Atom::S | Atom::K)).collect(),
    };
    let p = compile_closed(&t, &order, flavor)?;
    match ctx.format(Format::Text, &[Format::Jsonl])? {
        Format::Jsonl => ctx.sink.json(&json!({
            "program": p.body,
            "compact": print(&p.body, Notation::CompactLeft),
            "size": p.body.size(),
            "arity": p.arity,
            "vars": order.iter().map(|a| a.name().to_string()).collect::<Vec<_>>(),
        }))?,
        _ => ctx.sink.line(&p.body.to_string())?,
    }
    Ok(Status::Complete)
}

fn cmd_church(
    ctx: &mut Ctx,
    encode: Option<u64>,
    decode: Option<&str>,
    add: Option<&[u64]>,
    times: Option<&[u64]>,
) -> Result<Status> {
    let limits = ctx.limits();
    ctx.format(Format::Jsonl, &[])?;
    let value = if let Some(n) = encode {
        let t = church_encode(n);
        json!({ "n": n, "term": t, "size": t.size() })
    } else if let Some(text) = decode {
        let t = ctx.term(text)?;
        json!({ "term": t, "n": church_decode(&t, limits) })
    } else if let Some([a, b]) = add {
        let t = church_add().apply([church_encode(*a), church_encode(*b)]);
        json!({ "op": "add", "a": a, "b": b, "result": church_decode(&t, limits) })
    } else if let Some([a, b]) = times {
        let t = church_times().apply([church_encode(*a), church_encode(*b)]);
        json!({ "op": "times", "a": a, "b": b, "result": church_decode(&t, limits) })
    } else {
        bail!("one of --encode, --decode, --add or --times is required");
    };
    ctx.sink.json(&value)?;
    Ok(Status::Complete)
}

fn cmd_boolean(
    ctx: &mut Ctx,
    term: Option<&str>,
    table: Option<u8>,
    minimal: Option<usize>,
    swapped: bool,
) -> Result<Status> {
    let enc = if swapped {
        Encoding::default().swapped()
    } else {
        Encoding::default()
    };
    let limits = ctx.limits();
    ctx.format(Format::Jsonl, &[])?;
    match (term, table, minimal) {
        (Some(text), Some(table), None) => {
            if table > 15 {
                bail!("truth table index must be below 16");
            }
            let t = ctx.term(text)?;
            let v = boolean_verify(&t, TruthTable(table), &enc, limits);
            ctx.sink.json(&json!({
                "term": t,
                "table": table,
                "name": TruthTable(table).name(),
                "verification": v,
            }))?;
        }
        (None, None, Some(size)) => {
            let forms = minimal_forms(size, &enc, limits)?;
            for (i, f) in forms.iter().enumerate() {
                let tt = TruthTable(i as u8);
                ctx.sink.json(&json!({
                    "table": i,
                    "bits": tt.to_string(),
                    "name": tt.name(),
                    "term": f,
                    "size": f.as_ref().map(Term::size),
                }))?;
            }
        }
        _ => bail!("give either a term with --table, or --minimal alone"),
    }
    Ok(Status::Complete)
}

fn cmd_programs(ctx: &mut Ctx, target: &str, up_to: usize) -> Result<Status> {
    let target = ctx.term(target)?;
    let found = program_search(&target, up_to, ctx.limits())?;
    match ctx.format(Format::Jsonl, &[Format::Csv])? {
        Format::Csv => {
            ctx.sink
                .line("size,programs,min_time,min_memory,max_time,max_memory,median_time,median_memory")?;
            for s in ProgramStats::table(&found) {
                ctx.sink.line(&format!(
                    "{},{},{},{},{},{},{},{}",
                    s.size,
                    s.programs,
                    s.min_time,
                    s.min_memory,
                    s.max_time,
                    s.max_memory,
                    s.median_time,
                    s.median_memory
                ))?;
            }
        }
        _ => {
            for f in &found {
                ctx.sink.json(f)?;
            }
        }
    }
    Ok(Status::Complete)
}

fn cmd_objects(ctx: &mut Ctx, size: usize) -> Result<Status> {
    let objects = objects_census(size, ctx.limits())?;
    match ctx.format(Format::Csv, &[Format::Jsonl])? {
        Format::Jsonl => {
            for (t, n) in &objects {
                ctx.sink.json(&json!({ "object": t, "size": t.size(), "programs": n }))?;
            }
        }
        _ => {
            ctx.sink.line("object,size,programs")?;
            for (t, n) in &objects {
                ctx.sink.line(&format!("{},{},{n}", csv_field(&t.to_string()), t.size()))?;
            }
        }
    }
    Ok(Status::Complete)
}
