//! Command-line drivers: algebra checking, simple-minded system
//! verification/mutation/orbits, and the Okuyama tilting commands.
//!
//! Exit codes: 0 success, 1 input error, 2 verified negative, 3 inconclusive.
//! Reports are deterministic for fixed inputs and seed; pass --no-timing to
//! omit the one nondeterministic field.

use crate::error::{Error, Result};
use crate::io::{
    self, algebra_to_doc, complex_to_doc, doc_to_rep, fixtures, rep_to_doc, AlgebraDoc, ReportDoc,
    SmsDoc,
};
use crate::rep::{self, Rep};
use crate::rng::DetRng;
use crate::sms::{
    self, is_sms, mutate, nu_shift_stable, verify_orthogonal_bricks, MutationSign, SmsCandidate,
    SmsVerdict, StripStatus,
};
use crate::tilt;
use crate::{algebra::BasicAlgebra, endo::is_isomorphic};
use serde_json::{json, Value};
use std::sync::Arc;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut out = std::io::stdout();
    std::process::exit(run(&args, &mut out));
}

struct Opts {
    algebra: Option<String>,
    sms: Option<String>,
    at: Option<String>,
    sign: MutationSign,
    seed: u64,
    cap: usize,
    max_nodes: usize,
    max_path_len: Option<usize>,
    format: String,
    strict: bool,
    timing: bool,
}

fn parse_opts(args: &[String]) -> std::result::Result<Opts, String> {
    let mut o = Opts {
        algebra: None,
        sms: None,
        at: None,
        sign: MutationSign::Plus,
        seed: std::env::var("SMS_FORGE_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0),
        cap: 0,
        max_nodes: 64,
        max_path_len: None,
        format: "json".into(),
        strict: false,
        timing: true,
    };
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let mut grab = |name: &str| -> std::result::Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("missing value for {name}"))
        };
        match a.as_str() {
            "--algebra" => o.algebra = Some(grab("--algebra")?),
            "--sms" => o.sms = Some(grab("--sms")?),
            "--at" => o.at = Some(grab("--at")?),
            "--sign" => {
                o.sign = match grab("--sign")?.as_str() {
                    "plus" | "+" => MutationSign::Plus,
                    "minus" | "-" => MutationSign::Minus,
                    other => return Err(format!("unknown sign '{other}'")),
                }
            }
            "--seed" => {
                o.seed = grab("--seed")?
                    .parse()
                    .map_err(|e| format!("bad seed: {e}"))?
            }
            "--cap" => {
                o.cap = grab("--cap")?
                    .parse()
                    .map_err(|e| format!("bad cap: {e}"))?
            }
            "--max-nodes" => {
                o.max_nodes = grab("--max-nodes")?
                    .parse()
                    .map_err(|e| format!("bad max-nodes: {e}"))?
            }
            "--max-path-len" => {
                o.max_path_len = Some(
                    grab("--max-path-len")?
                        .parse()
                        .map_err(|e| format!("bad max-path-len: {e}"))?,
                )
            }
            "--format" => o.format = grab("--format")?,
            "--strict" => o.strict = true,
            "--no-timing" => o.timing = false,
            other => return Err(format!("unknown flag '{other}'")),
        }
    }
    Ok(o)
}

pub fn run(args: &[String], out: &mut dyn std::io::Write) -> i32 {
    match dispatch(args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            match e {
                Error::CapExceeded { .. } | Error::DecompositionInconclusive => EXIT_INCONCLUSIVE,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn dispatch(args: &[String], out: &mut dyn std::io::Write) -> Result<i32> {
    let usage = "usage: sms-forge <algebra-check | sms <verify|mutate|orbit> | okuyama <build|check|mutate-eq> | fixtures <name>> [flags]";
    let Some(cmd) = args.first() else {
        return Err(Error::InvalidInput(usage.into()));
    };
    match cmd.as_str() {
        "algebra-check" => cmd_algebra_check(&args[1..], args, out),
        "sms" => {
            let Some(sub) = args.get(1) else {
                return Err(Error::InvalidInput(
                    "sms needs a subcommand: verify | mutate | orbit".into(),
                ));
            };
            match sub.as_str() {
                "verify" => cmd_sms_verify(&args[2..], args, out),
                "mutate" => cmd_sms_mutate(&args[2..], args, out),
                "orbit" => cmd_sms_orbit(&args[2..], args, out),
                other => Err(Error::InvalidInput(format!(
                    "unknown sms subcommand '{other}'"
                ))),
            }
        }
        "okuyama" => {
            let Some(sub) = args.get(1) else {
                return Err(Error::InvalidInput(
                    "okuyama needs a subcommand: build | check | mutate-eq".into(),
                ));
            };
            match sub.as_str() {
                "build" => cmd_okuyama(&args[2..], args, out, OkuyamaMode::Build),
                "check" => cmd_okuyama(&args[2..], args, out, OkuyamaMode::Check),
                "mutate-eq" => cmd_okuyama(&args[2..], args, out, OkuyamaMode::MutateEq),
                other => Err(Error::InvalidInput(format!(
                    "unknown okuyama subcommand '{other}'"
                ))),
            }
        }
        "fixtures" => cmd_fixtures(&args[1..], out),
        _ => Err(Error::InvalidInput(usage.into())),
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

struct LoadedAlgebra {
    id: String,
    algebra: Arc<BasicAlgebra>,
    fixture: Option<io::Fixture>,
}

fn load_algebra(opts: &Opts) -> Result<LoadedAlgebra> {
    let spec = opts
        .algebra
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("--algebra is required".into()))?;
    if let Ok(fx) = fixtures::by_name(spec) {
        return Ok(LoadedAlgebra {
            id: fx.name.clone(),
            algebra: fx.algebra.clone(),
            fixture: Some(fx),
        });
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::InvalidInput(format!("cannot read algebra file '{spec}': {e}")))?;
    let mut doc: AlgebraDoc = serde_json::from_str(&text)?;
    if let Some(mpl) = opts.max_path_len {
        doc.max_path_len = Some(mpl);
    }
    let algebra = doc.build()?;
    Ok(LoadedAlgebra {
        id: spec.to_string(),
        algebra,
        fixture: None,
    })
}

fn load_members(la: &LoadedAlgebra, spec: &str) -> Result<Vec<(String, Rep)>> {
    if spec == "simples" {
        let alg = &la.algebra;
        return Ok((0..alg.n_vertices())
            .map(|v| (format!("S{}", alg.vertex_name(v)), rep::simple(alg, v)))
            .collect());
    }
    if std::path::Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| Error::InvalidInput(format!("cannot read sms file '{spec}': {e}")))?;
        let doc: SmsDoc = serde_json::from_str(&text)?;
        let mut members = Vec::new();
        for m in &doc.members {
            members.push((m.name.clone(), doc_to_rep(&m.module, &la.algebra)?));
        }
        return Ok(members);
    }
    // comma-separated builtin module names
    let Some(fx) = &la.fixture else {
        return Err(Error::InvalidInput(format!(
            "'{spec}' is neither a file nor 'simples'; named members need a builtin algebra"
        )));
    };
    let mut members = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let rep = fx.module(name).ok_or_else(|| {
            Error::InvalidInput(format!(
                "unknown builtin module '{name}' (have: {})",
                fx.module_names().join(", ")
            ))
        })?;
        members.push((name.to_string(), rep.clone()));
    }
    if members.is_empty() {
        return Err(Error::InvalidInput("--sms selected no members".into()));
    }
    Ok(members)
}

fn parse_at_labels(opts: &Opts) -> Result<Vec<String>> {
    let at = opts
        .at
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("--at is required".into()))?;
    Ok(at
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect())
}

/// Match a module against the simples and the named fixture modules, for
/// readable labels in reports.
fn identify(la: &LoadedAlgebra, m: &Rep, rng: &mut DetRng) -> Option<String> {
    let alg = &la.algebra;
    for v in 0..alg.n_vertices() {
        if is_isomorphic(m, &rep::simple(alg, v), rng).is_some() {
            return Some(format!("S{}", alg.vertex_name(v)));
        }
    }
    if let Some(fx) = &la.fixture {
        for (name, rep) in &fx.modules {
            if m.dims() == rep.dims() && is_isomorphic(m, rep, rng).is_some() {
                return Some(name.clone());
            }
        }
    }
    None
}

fn dims_label(alg: &BasicAlgebra, m: &Rep) -> String {
    let parts: Vec<String> = m
        .dims()
        .iter()
        .enumerate()
        .map(|(v, d)| format!("{}:{}", alg.vertex_name(v), d))
        .collect();
    format!("[{}]", parts.join(" "))
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

fn emit(out: &mut dyn std::io::Write, opts: &Opts, report: &ReportDoc, text: &str) -> Result<()> {
    match opts.format.as_str() {
        "json" => writeln!(out, "{}", serde_json::to_string_pretty(report)?)?,
        "text" => writeln!(out, "{text}")?,
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown format '{other}' (expected json or text)"
            )))
        }
    }
    Ok(())
}

fn make_report(
    full_args: &[String],
    opts: &Opts,
    algebra_id: &str,
    verdicts: Value,
    certificates: Value,
    started: Instant,
) -> ReportDoc {
    ReportDoc {
        command: full_args.join(" "),
        seed: opts.seed,
        algebra: algebra_id.to_string(),
        verdicts,
        certificates,
        timing_ms: opts
            .timing
            .then(|| started.elapsed().as_secs_f64() * 1000.0),
    }
}

// ---------------------------------------------------------------------------
// algebra-check
// ---------------------------------------------------------------------------

fn cmd_algebra_check(
    args: &[String],
    full_args: &[String],
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let started = Instant::now();
    let opts = parse_opts(args).map_err(Error::InvalidInput)?;
    let la = load_algebra(&opts)?;
    let alg = &la.algebra;
    let cartan = alg.cartan_matrix();
    let si = rep::self_injective_check(alg);
    let (verdict, sigma, code) = match &si {
        Ok(nd) => {
            let names: Vec<String> = nd
                .permutation
                .iter()
                .map(|&j| alg.vertex_name(j).to_string())
                .collect();
            (json!({"self_injective": true}), json!(names), EXIT_OK)
        }
        Err(Error::NotSelfInjective { vertex }) => (
            json!({"self_injective": false, "offending_vertex": vertex}),
            Value::Null,
            EXIT_NEGATIVE,
        ),
        Err(e) => return Err(Error::InvalidInput(e.to_string())),
    };
    let certificates = json!({
        "dim": alg.dim(),
        "vertices": alg.presentation.vertices,
        "cartan_matrix": cartan,
        "nakayama_permutation": sigma,
    });
    let report = make_report(full_args, &opts, &la.id, verdict, certificates, started);
    let text = match &si {
        Ok(nd) => format!(
            "algebra {}: dim {}, self-injective, Nakayama permutation {:?}",
            la.id,
            alg.dim(),
            nd.permutation
                .iter()
                .map(|&j| alg.vertex_name(j))
                .collect::<Vec<_>>()
        ),
        Err(_) => format!("algebra {}: dim {}, NOT self-injective", la.id, alg.dim()),
    };
    emit(out, &opts, &report, &text)?;
    Ok(code)
}

// ---------------------------------------------------------------------------
// sms verify / mutate / orbit
// ---------------------------------------------------------------------------

fn strip_trace_json(t: &sms::StripTrace) -> Value {
    json!({
        "status": match t.status {
            StripStatus::Reached0 => "reached0",
            StripStatus::Stuck => "stuck",
            StripStatus::CapExceeded => "cap-exceeded",
        },
        "length": t.length(),
        "steps": t.steps.iter().map(|s| json!({
            "member": s.member_index,
            "remainder_dims": s.remainder_dims,
        })).collect::<Vec<_>>(),
    })
}

fn stable_end_dim(m: &Rep) -> Result<usize> {
    crate::stable::stable_hom(m, m).map(|s| s.dim())
}

fn cmd_sms_verify(
    args: &[String],
    full_args: &[String],
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let started = Instant::now();
    let opts = parse_opts(args).map_err(Error::InvalidInput)?;
    let la = load_algebra(&opts)?;
    let members = load_members(
        &la,
        opts.sms
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("--sms is required".into()))?,
    )?;
    let mut rng = DetRng::new(opts.seed);
    let labels: Vec<String> = members.iter().map(|(n, _)| n.clone()).collect();
    let candidate = match verify_orthogonal_bricks(members) {
        Ok(c) => c,
        Err(e @ (Error::NotABrick(_) | Error::NotOrthogonal(_, _))) => {
            let verdicts = json!({"sms": false, "reason": e.to_string()});
            let report = make_report(
                full_args,
                &opts,
                &la.id,
                verdicts,
                json!({"members": labels}),
                started,
            );
            emit(
                out,
                &opts,
                &report,
                &format!("not a simple-minded system: {e}"),
            )?;
            return Ok(if opts.strict { EXIT_NEGATIVE } else { EXIT_OK });
        }
        Err(e) => return Err(e),
    };
    let nu = nu_shift_stable(&candidate.reps(), &mut rng)?;
    let report_data = is_sms(&candidate, opts.cap)?;
    let (verdict_json, text, code) = match report_data.verdict {
        SmsVerdict::Sms => (
            json!({"sms": true, "nu_stable": nu}),
            "simple-minded system: verified".to_string(),
            EXIT_OK,
        ),
        SmsVerdict::NotSms { stuck_vertex } => (
            json!({"sms": false, "stuck_simple": la.algebra.vertex_name(stuck_vertex), "nu_stable": nu}),
            format!(
                "not a simple-minded system: the simple at vertex {} does not strip to zero",
                la.algebra.vertex_name(stuck_vertex)
            ),
            if opts.strict { EXIT_NEGATIVE } else { EXIT_OK },
        ),
        SmsVerdict::Inconclusive { vertex } => (
            json!({"sms": "inconclusive", "cap_vertex": la.algebra.vertex_name(vertex), "nu_stable": nu}),
            format!(
                "inconclusive: stripping the simple at vertex {} exceeded the cap",
                la.algebra.vertex_name(vertex)
            ),
            EXIT_INCONCLUSIVE,
        ),
    };
    let member_json: Result<Vec<Value>> = candidate
        .members
        .iter()
        .map(|m| {
            Ok(json!({
                "label": m.label,
                "dims": m.rep.dims(),
                "stable_end_dim": stable_end_dim(&m.rep)?,
            }))
        })
        .collect();
    let certificates = json!({
        "members": member_json?,
        "orthogonality": candidate.orthogonality,
        "strip_traces": report_data.traces.iter().map(strip_trace_json).collect::<Vec<_>>(),
    });
    let report = make_report(
        full_args,
        &opts,
        &la.id,
        verdict_json,
        certificates,
        started,
    );
    emit(out, &opts, &report, &text)?;
    Ok(code)
}

fn cmd_sms_mutate(
    args: &[String],
    full_args: &[String],
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let started = Instant::now();
    let opts = parse_opts(args).map_err(Error::InvalidInput)?;
    let la = load_algebra(&opts)?;
    let members = load_members(
        &la,
        opts.sms
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("--sms is required".into()))?,
    )?;
    let candidate = verify_orthogonal_bricks(members)?;
    let at = parse_at_labels(&opts)?;
    let mut indices = Vec::new();
    for label in &at {
        let idx = candidate.member_index(label).ok_or_else(|| {
            Error::InvalidInput(format!(
                "--at label '{label}' is not a member (have: {})",
                candidate
                    .members
                    .iter()
                    .map(|m| m.label.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })?;
        indices.push(idx);
    }
    let mut rng = DetRng::new(opts.seed);
    let result = mutate(&candidate, &indices, opts.sign, opts.cap, &mut rng)?;
    let sign_str = match opts.sign {
        MutationSign::Plus => "mu+",
        MutationSign::Minus => "mu-",
    };
    let out_members: Vec<Value> = result
        .output
        .members
        .iter()
        .map(|m| {
            json!({
                "label": m.label,
                "iso": identify(&la, &m.rep, &mut rng),
                "dims": m.rep.dims(),
                "module": rep_to_doc(&m.rep, &la.id),
            })
        })
        .collect();
    let steps: Vec<Value> = result
        .steps
        .iter()
        .map(|s| {
            json!({
                "member": s.original_label,
                "mutated_iso": identify(&la, &s.mutated, &mut rng),
                "triangle_dims": {
                    "first": s.triangle_dims.0,
                    "middle": s.triangle_dims.1,
                    "second": s.triangle_dims.2,
                },
                "companion_dims": s.companion.dims(),
                "companion_loewy": rep::loewy_layers(&s.companion),
            })
        })
        .collect();
    let verdicts = json!({
        "mutation": sign_str,
        "at": at,
        "nu_stable_subset": result.nu_stable_subset,
        "nu_stable_system": result.nu_stable_system,
        "output_orthogonal_bricks": true,
    });
    let certificates = json!({"members": out_members, "steps": steps});
    let text = {
        let names: Vec<String> = result
            .output
            .members
            .iter()
            .map(|m| {
                identify(&la, &m.rep, &mut rng)
                    .map(|i| format!("{} (= {})", m.label, i))
                    .unwrap_or_else(|| format!("{} {}", m.label, dims_label(&la.algebra, &m.rep)))
            })
            .collect();
        format!(
            "{sign_str} at {{{}}} -> {{{}}}",
            at.join(", "),
            names.join(", ")
        )
    };
    let report = make_report(full_args, &opts, &la.id, verdicts, certificates, started);
    emit(out, &opts, &report, &text)?;
    Ok(EXIT_OK)
}

fn cmd_sms_orbit(
    args: &[String],
    full_args: &[String],
    out: &mut dyn std::io::Write,
) -> Result<i32> {
    let started = Instant::now();
    let opts = parse_opts(args).map_err(Error::InvalidInput)?;
    let la = load_algebra(&opts)?;
    let members = load_members(
        &la,
        opts.sms
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("--sms is required".into()))?,
    )?;
    let root = verify_orthogonal_bricks(members)?;
    let mut rng = DetRng::new(opts.seed);

    struct Node {
        candidate: SmsCandidate,
        label: String,
    }
    let node_label = |alg: &BasicAlgebra, c: &SmsCandidate| -> String {
        let mut dims: Vec<String> = c.members.iter().map(|m| dims_label(alg, &m.rep)).collect();
        dims.sort();
        dims.join(" + ")
    };
    let mut nodes: Vec<Node> = vec![Node {
        label: node_label(&la.algebra, &root),
        candidate: root,
    }];
    let mut edges: Vec<(usize, usize, String)> = Vec::new();
    let mut frontier = vec![0usize];
    let mut truncated = false;
    while let Some(at) = frontier.pop() {
        let n_members = nodes[at].candidate.members.len();
        // all nonempty Nakayama-stable subsets, both mutation signs
        for mask in 1u32..(1 << n_members) {
            let indices: Vec<usize> = (0..n_members).filter(|&i| mask & (1 << i) != 0).collect();
            let subset: Vec<Rep> = indices
                .iter()
                .map(|&i| nodes[at].candidate.members[i].rep.clone())
                .collect();
            if !nu_shift_stable(&subset, &mut rng)? {
                continue;
            }
            let subset_labels: Vec<String> = indices
                .iter()
                .map(|&i| nodes[at].candidate.members[i].label.clone())
                .collect();
            for sign in [MutationSign::Plus, MutationSign::Minus] {
                let result = mutate(&nodes[at].candidate, &indices, sign, opts.cap, &mut rng)?;
                // find or insert the target node up to stable isomorphism
                let mut target = None;
                for (i, node) in nodes.iter().enumerate() {
                    if sms::same_system(&node.candidate, &result.output, &mut rng) {
                        target = Some(i);
                        break;
                    }
                }
                let target = match target {
                    Some(i) => i,
                    None => {
                        if nodes.len() >= opts.max_nodes {
                            truncated = true;
                            continue;
                        }
                        let label = node_label(&la.algebra, &result.output);
                        nodes.push(Node {
                            candidate: result.output,
                            label,
                        });
                        frontier.push(nodes.len() - 1);
                        nodes.len() - 1
                    }
                };
                let sign_str = if sign == MutationSign::Plus {
                    "mu+"
                } else {
                    "mu-"
                };
                edges.push((
                    at,
                    target,
                    format!("{sign_str}{{{}}}", subset_labels.join(",")),
                ));
            }
        }
    }
    edges.sort();
    edges.dedup();

    if opts.format == "dot" {
        let mut dot = String::from("digraph sms_orbit {\n");
        for (i, n) in nodes.iter().enumerate() {
            dot.push_str(&format!("  n{} [label=\"{}\"];\n", i, n.label));
        }
        for (a, b, l) in &edges {
            dot.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", a, b, l));
        }
        dot.push_str("}\n");
        writeln!(out, "{dot}")?;
        return Ok(EXIT_OK);
    }
    let verdicts = json!({
        "nodes": nodes.len(),
        "edges": edges.len(),
        "truncated": truncated,
    });
    let certificates = json!({
        "nodes": nodes.iter().enumerate().map(|(i, n)| json!({
            "id": i,
            "label": n.label,
            "members": n.candidate.members.iter().map(|m| m.label.clone()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "edges": edges.iter().map(|(a, b, l)| json!({
            "from": a, "to": b, "mutation": l,
        })).collect::<Vec<_>>(),
    });
    let text = format!(
        "orbit: {} node(s), {} edge(s){}",
        nodes.len(),
        edges.len(),
        if truncated { " (truncated)" } else { "" }
    );
    let report = make_report(full_args, &opts, &la.id, verdicts, certificates, started);
    emit(out, &opts, &report, &text)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// okuyama build / check / mutate-eq
// ---------------------------------------------------------------------------

enum OkuyamaMode {
    Build,
    Check,
    MutateEq,
}

fn cmd_okuyama(
    args: &[String],
    full_args: &[String],
    out: &mut dyn std::io::Write,
    mode: OkuyamaMode,
) -> Result<i32> {
    let started = Instant::now();
    let opts = parse_opts(args).map_err(Error::InvalidInput)?;
    let la = load_algebra(&opts)?;
    let alg = &la.algebra;
    let at: Vec<String> = match opts.at.as_deref() {
        Some("all") => (0..alg.n_vertices())
            .map(|v| alg.vertex_name(v).to_string())
            .collect(),
        Some("none") => vec![],
        Some(_) => parse_at_labels(&opts)?,
        None => {
            return Err(Error::InvalidInput(
                "--at is required (comma-separated vertex names, 'all', or 'none')".into(),
            ))
        }
    };
    let mut u_vertices = Vec::new();
    for name in &at {
        let v = alg
            .presentation
            .vertices
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex '{name}' in --at")))?;
        u_vertices.push(v);
    }
    let mut rng = DetRng::new(opts.seed);
    // Nakayama stability of the chosen simples (reported, not enforced)
    let simples: Vec<Rep> = u_vertices.iter().map(|&v| rep::simple(alg, v)).collect();
    let nu_stable = if simples.is_empty() {
        true
    } else {
        nu_shift_stable(&simples, &mut rng)?
    };
    let t = tilt::build_okuyama(alg, &u_vertices, &mut rng)?;
    match mode {
        OkuyamaMode::Build => {
            let doc = complex_to_doc(&t, &la.id);
            let verdicts = json!({"nu_stable_subset": nu_stable});
            let certificates = json!({"complex": doc});
            let text = format!(
                "okuyama complex at {{{}}}: degree 0 summands {:?}, degree 1 summands {:?}",
                at.join(","),
                t.deg0
                    .iter()
                    .map(|&v| alg.vertex_name(v))
                    .collect::<Vec<_>>(),
                t.deg1
                    .iter()
                    .map(|&v| alg.vertex_name(v))
                    .collect::<Vec<_>>(),
            );
            let report = make_report(full_args, &opts, &la.id, verdicts, certificates, started);
            emit(out, &opts, &report, &text)?;
            Ok(EXIT_OK)
        }
        OkuyamaMode::Check => {
            let verdict = tilt::is_tilting(&t, &mut rng)?;
            let et = tilt::end_table(&t)?;
            let verdicts = json!({
                "tilting": verdict.tilting,
                "nu_stable_subset": nu_stable,
                "self_ext_plus": verdict.self_ext_plus,
                "self_ext_minus": verdict.self_ext_minus,
                "indec_summands": verdict.indec_summands,
                "expected_summands": verdict.expected_summands,
                "nakayama_stable_complex": verdict.nakayama_stable,
            });
            let certificates = json!({
                "end_dim": et.dim,
                "end_associative": et.associative,
                "end_has_identity": et.has_identity,
            });
            let text = format!(
                "okuyama complex at {{{}}}: tilting = {}, dim End = {}",
                at.join(","),
                verdict.tilting,
                et.dim
            );
            let code = if verdict.tilting {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            let report = make_report(full_args, &opts, &la.id, verdicts, certificates, started);
            emit(out, &opts, &report, &text)?;
            Ok(code)
        }
        OkuyamaMode::MutateEq => {
            let s = tilt::silting_mutate_regular(alg, &u_vertices, &mut rng)?;
            let agree = tilt::homotopy_isomorphic(&t, &s, &mut rng)?;
            let verdicts = json!({
                "equation_holds": agree,
                "nu_stable_subset": nu_stable,
            });
            let certificates = json!({
                "okuyama": complex_to_doc(&t, &la.id),
                "silting_mutation": complex_to_doc(&s, &la.id),
            });
            let text = format!(
                "silting mutation of the regular module at {{{}}} {} the okuyama complex",
                at.join(","),
                if agree { "matches" } else { "DOES NOT match" }
            );
            let code = if agree { EXIT_OK } else { EXIT_NEGATIVE };
            let report = make_report(full_args, &opts, &la.id, verdicts, certificates, started);
            emit(out, &opts, &report, &text)?;
            Ok(code)
        }
    }
}

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

fn cmd_fixtures(args: &[String], out: &mut dyn std::io::Write) -> Result<i32> {
    let Some(name) = args.first() else {
        return Err(Error::InvalidInput(
            "usage: sms-forge fixtures <example3|example4|example5>".into(),
        ));
    };
    let fx = fixtures::by_name(name)?;
    let modules: Vec<Value> = fx
        .modules
        .iter()
        .map(|(n, m)| json!({"name": n, "module": rep_to_doc(m, &fx.name)}))
        .collect();
    let payload = json!({
        "algebra": algebra_to_doc(&fx.algebra, None),
        "modules": modules,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&payload)?)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let mut buf: Vec<u8> = Vec::new();
        let code = run(&args, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn algebra_check_builtins() {
        let (code, out) =
            run_capture(&["algebra-check", "--algebra", "example3", "--format", "text"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("dim 9"));
        let (code, out) =
            run_capture(&["algebra-check", "--algebra", "example5", "--format", "text"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("dim 36"));
    }

    #[test]
    fn verify_builtin_sets() {
        let (code, out) = run_capture(&[
            "sms",
            "verify",
            "--algebra",
            "example5",
            "--sms",
            "Z0,Z1,Z2,Z3",
            "--format",
            "text",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verified"));

        let (code, _) = run_capture(&[
            "sms",
            "verify",
            "--algebra",
            "example4",
            "--sms",
            "L",
            "--format",
            "text",
        ]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn mutate_example5_to_partial_simples() {
        let (code, out) = run_capture(&[
            "sms",
            "mutate",
            "--algebra",
            "example5",
            "--sms",
            "Z0,Z1,Z2,Z3",
            "--at",
            "Z0,Z2",
            "--format",
            "text",
        ]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("S1"), "{out}");
        assert!(out.contains("S3"), "{out}");
    }

    #[test]
    fn orbit_of_endotrivial_singleton() {
        let (code, out) = run_capture(&[
            "sms",
            "orbit",
            "--algebra",
            "example4",
            "--sms",
            "L",
            "--format",
            "text",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("1 node(s)"), "{out}");
    }

    #[test]
    fn okuyama_commands() {
        let (code, out) = run_capture(&[
            "okuyama",
            "check",
            "--algebra",
            "example5",
            "--at",
            "k,1,3",
            "--format",
            "text",
        ]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("tilting = true"));
        assert!(out.contains("dim End = 36"));

        let (code, out) = run_capture(&[
            "okuyama",
            "mutate-eq",
            "--algebra",
            "example5",
            "--at",
            "k,1,3",
            "--format",
            "text",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("matches"));

        let (code, _) = run_capture(&["okuyama", "build", "--algebra", "example3", "--at", "all"]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn bad_inputs_exit_one() {
        let (code, _) = run_capture(&["algebra-check"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _) = run_capture(&["algebra-check", "--algebra", "/nonexistent.json"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn deterministic_reports_without_timing() {
        let args = [
            "sms",
            "verify",
            "--algebra",
            "example3",
            "--sms",
            "simples",
            "--no-timing",
        ];
        let (c1, out1) = run_capture(&args);
        let (c2, out2) = run_capture(&args);
        assert_eq!(c1, EXIT_OK);
        assert_eq!(c1, c2);
        assert_eq!(out1, out2);
    }
}
