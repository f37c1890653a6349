//! Command-line front end.
//!
//! Seven subcommands cover the pipeline: `classify` (the full contact
//! classification), `hf` (the lattice basis census), `twist` (twisting
//! numbers with arithmetic certificates), `lspace`, `graph`, `tau`, and
//! `check` (the seeded self-validation corpus). All commands write data to
//! stdout and diagnostics to stderr, and identical invocations produce
//! byte-identical output, with or without `--parallel`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::contact::{self, ClassifyOptions, TwistingSet};
use crate::error::{Error, Result};
use crate::lattice::{is_l_space, FullPath, Lattice, TauSide};
use crate::plumbing::{
    decomposition_labels, intersection_form, parse_manifold, s3_subgraph, standard_graph,
    torus_bundle_models, type_ab, S3Kind, SeifertInvariants, StarGraph, TypeAB,
};
use crate::report::{self, ReportDocument};
use crate::selftest;

const DEFAULT_WINDOW: usize = 8;
const DEFAULT_SEED: u64 = 7;
const WINDOW_ENV: &str = "SEIFERT_FLOER_WINDOW";

#[derive(Parser)]
#[command(
    name = "seifert-floer",
    version,
    about = "Exact classification of negative-twisting tight contact structures on Seifert fibred spaces",
    long_about = None,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the negative-twisting tight structures of a manifold.
    Classify {
        /// Manifold: `M(e0; p/q, ...)`, `[-]Sigma(a,...)`, or `Surgery(T(d2,[-]d1), p/q)`.
        #[arg(allow_hyphen_values = true)]
        manifold: String,
        #[command(flatten)]
        common: Common,
    },
    /// List the full-path basis classes of the lattice (census).
    Hf {
        #[arg(allow_hyphen_values = true)]
        manifold: String,
        #[command(flatten)]
        common: Common,
    },
    /// Twisting numbers with their per-q approximation certificates.
    Twist {
        #[arg(allow_hyphen_values = true)]
        manifold: String,
        #[command(flatten)]
        common: Common,
    },
    /// L-space verdict with the canonical-vector walk summary.
    Lspace {
        #[arg(allow_hyphen_values = true)]
        manifold: String,
        #[command(flatten)]
        common: Common,
    },
    /// Plumbing data: standard and dual graphs, blow-down subgraph, type, labels.
    Graph {
        #[arg(allow_hyphen_values = true)]
        manifold: String,
        #[command(flatten)]
        common: Common,
    },
    /// Tau invariants of the loop-free basis classes.
    Tau {
        #[arg(allow_hyphen_values = true)]
        manifold: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the seeded self-validation suites on a random corpus.
    Check {
        /// Number of random manifolds to add to the worked examples.
        #[arg(default_value_t = 30)]
        corpus: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Output format; csv applies to classify only.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Restrict hf/tau output to one Spin^c label, e.g. "[1/2,3/4]".
    #[arg(long)]
    spinc: Option<String>,
    /// Cap on infinite twisting families (default: SEIFERT_FLOER_WINDOW or 8).
    #[arg(long)]
    window: Option<usize>,
    /// Worker threads for the classification stage (default 1, serial).
    #[arg(long)]
    parallel: Option<usize>,
    /// RNG seed for the check corpus (default 7).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

/// Entry point used by `main`; collects std streams and process args.
pub fn run_main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&refs, &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including argv[0]), dispatches, and returns the exit code.
/// Data goes to `out`, diagnostics to `err`.
pub fn run(args: &[&str], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    let produced = match &cli.cmd {
        Cmd::Classify { manifold, common } => cmd_classify(manifold, common),
        Cmd::Hf { manifold, common } => cmd_hf(manifold, common),
        Cmd::Twist { manifold, common } => cmd_twist(manifold, common),
        Cmd::Lspace { manifold, common } => cmd_lspace(manifold, common),
        Cmd::Graph { manifold, common } => cmd_graph(manifold, common),
        Cmd::Tau { manifold, common } => cmd_tau(manifold, common),
        Cmd::Check { corpus, common } => cmd_check(*corpus, common),
    };
    match produced {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() || out.flush().is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn resolve_window(flag: Option<usize>) -> Result<usize> {
    let w = match flag {
        Some(w) => w,
        None => match std::env::var(WINDOW_ENV) {
            Ok(raw) => raw.trim().parse().map_err(|_| {
                Error::Parse(format!("{WINDOW_ENV} must be a positive integer, got {raw:?}"))
            })?,
            Err(_) => DEFAULT_WINDOW,
        },
    };
    if w == 0 {
        return Err(Error::Parse("window must be at least 1".into()));
    }
    Ok(w)
}

fn invariants_of(manifold: &str) -> Result<SeifertInvariants> {
    parse_manifold(manifold)?.invariants()
}

fn reject_csv(fmt: Format, command: &str) -> Result<()> {
    if fmt == Format::Csv {
        return Err(Error::Parse(format!(
            "csv format applies to classify only, not {command}"
        )));
    }
    Ok(())
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn cmd_classify(manifold: &str, common: &Common) -> Result<String> {
    let s = invariants_of(manifold)?;
    let window = resolve_window(common.window)?;
    let threads = common.parallel.unwrap_or(1);
    let opts = ClassifyOptions {
        window,
        parallel: threads > 1,
    };
    let rep = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Unsupported(format!("worker pool: {e}")))?;
        pool.install(|| contact::classify(&s, &opts))?
    } else {
        contact::classify(&s, &opts)?
    };
    let doc = ReportDocument::from_classification(&rep);
    Ok(match common.format {
        Format::Table => report::to_table(&doc),
        Format::Json => report::to_json(&doc),
        Format::Csv => report::to_csv(&doc),
    })
}

fn walk_target(fp: &FullPath) -> String {
    match (&fp.terminal, fp.has_loop) {
        (Some(t), _) => t.to_string(),
        (None, true) => format!("cycle at {}", fp.representative),
        (None, false) => "outside the box".to_string(),
    }
}

fn cmd_hf(manifold: &str, common: &Common) -> Result<String> {
    reject_csv(common.format, "hf")?;
    let s = invariants_of(manifold)?;
    let lat = Lattice::from_invariants(&s)?;
    let classes = lat.enumerate_basis(None)?;
    let invertible = lat.form().qinv().is_some();
    let mut rows = Vec::new();
    for fp in &classes {
        let label = fp.spinc.to_string();
        if let Some(filter) = &common.spinc {
            if &label != filter {
                continue;
            }
        }
        // F is the fibre filtration; its span needs the inverse form
        let f_range = if invertible {
            Some((
                lat.alexander(&fp.min_alex_vector)?,
                lat.alexander(&fp.max_alex_vector)?,
            ))
        } else {
            None
        };
        rows.push((fp, label, f_range));
    }
    if common.format == Format::Json {
        let classes_json: Vec<serde_json::Value> = rows
            .iter()
            .map(|(fp, label, f_range)| {
                json!({
                    "initial": fp.initial.coords(),
                    "walks_to": walk_target(fp),
                    "terminal": fp.terminal.as_ref().map(|t| t.coords().to_vec()),
                    "loop": fp.has_loop,
                    "visited": fp.visited_count,
                    "central_steps": fp.central_steps,
                    "maslov": fp.maslov.as_ref().map(|m| m.to_string()),
                    "f_range": f_range.as_ref().map(|(a, b)| vec![a.to_string(), b.to_string()]),
                    "spinc": label,
                })
            })
            .collect();
        let doc = json!({
            "manifold": s.to_string(),
            "basis_classes": classes_json,
        });
        return Ok(pretty(&doc));
    }
    let form = lat.form();
    let mut out = String::new();
    let _ = writeln!(out, "manifold: {s}");
    let _ = writeln!(
        out,
        "vertices: {} | det Q = {} | {}",
        lat.size(),
        form.det(),
        form.definiteness()
    );
    let _ = writeln!(out, "basis classes: {}", rows.len());
    for (i, (fp, label, f_range)) in rows.iter().enumerate() {
        let mut line = format!("C{}: {} -> {}", i + 1, fp.initial, walk_target(fp));
        let _ = write!(line, " | spinc = {label}");
        match &fp.maslov {
            Some(m) => {
                let _ = write!(line, " | M = {m}");
            }
            None => {
                let _ = write!(line, " | M = -");
            }
        }
        match f_range {
            Some((a, b)) => {
                let _ = write!(line, " | F = [{a}, {b}]");
            }
            None => {
                let _ = write!(line, " | F = -");
            }
        }
        let _ = write!(line, " | visited {}", fp.visited_count);
        if fp.has_loop {
            let _ = write!(line, " | loop");
        }
        let _ = writeln!(out, "{line}");
    }
    Ok(out)
}

fn twisting_lines(set: &TwistingSet) -> Vec<String> {
    let mut lines = Vec::new();
    if set.values.is_empty() {
        lines.push("twisting numbers: none".to_string());
    } else {
        let mut line = format!("twisting numbers: {}", join(&set.values, ", "));
        if set.truncated {
            line.push_str(", ... (infinite family");
            if let Some(p) = set.period {
                let _ = write!(line, ", period {p}");
            }
            line.push(')');
        }
        lines.push(line);
    }
    for cert in &set.certificates {
        lines.push(format!(
            "certificate q = {}: p = ({})",
            cert.q,
            join(&cert.numerators, ", ")
        ));
    }
    for note in &set.notes {
        lines.push(format!("note: {note}"));
    }
    lines
}

fn cmd_twist(manifold: &str, common: &Common) -> Result<String> {
    reject_csv(common.format, "twist")?;
    let s = invariants_of(manifold)?;
    let window = resolve_window(common.window)?;
    let set = contact::ghiggini_massot(&s, window)?;
    if common.format == Format::Json {
        let certs: Vec<serde_json::Value> = set
            .certificates
            .iter()
            .map(|c| {
                json!({
                    "q": c.q,
                    "numerators": c.numerators.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = json!({
            "manifold": s.to_string(),
            "values": set.values,
            "truncated": set.truncated,
            "period": set.period,
            "certificates": certs,
            "notes": set.notes,
        });
        return Ok(pretty(&doc));
    }
    let mut out = String::new();
    let _ = writeln!(out, "manifold: {s}");
    for line in twisting_lines(&set) {
        let _ = writeln!(out, "{line}");
    }
    Ok(out)
}

fn cmd_lspace(manifold: &str, common: &Common) -> Result<String> {
    reject_csv(common.format, "lspace")?;
    let s = invariants_of(manifold)?;
    let rep = is_l_space(&s)?;
    let verdict = if rep.verdict { "yes" } else { "no" };
    let walk = rep.vcan_path.as_ref().map(|fp| {
        if fp.ends_correctly {
            format!(
                "V_can walk ends correctly after {} central pushes (reduced homology present)",
                fp.central_steps
            )
        } else {
            format!(
                "V_can walk fails after visiting {} vectors (no reduced homology)",
                fp.visited_count
            )
        }
    });
    if common.format == Format::Json {
        let doc = json!({
            "manifold": s.to_string(),
            "l_space": rep.verdict,
            "tested_on": rep.oriented.to_string(),
            "orientation_reversed": rep.dualized,
            "euler_zero": rep.euler_zero,
            "e0_shortcut": rep.e0_shortcut,
            "vcan_walk": walk,
        });
        return Ok(pretty(&doc));
    }
    let mut out = String::new();
    let _ = writeln!(out, "manifold: {s}");
    let _ = writeln!(out, "L-space: {verdict}");
    if rep.dualized {
        let _ = writeln!(out, "tested on the reversed orientation: {}", rep.oriented);
    }
    if rep.euler_zero {
        let _ = writeln!(out, "euler number 0: positive first Betti number, never an L-space");
    } else if rep.e0_shortcut {
        let _ = writeln!(out, "normalised centre weight >= 0: L-space without running the walk");
    } else if let Some(line) = walk {
        let _ = writeln!(out, "{line}");
    }
    Ok(out)
}

fn graph_lines(g: &StarGraph) -> Vec<String> {
    let mut lines = vec![format!("  centre: {}", g.center_framing())];
    for (i, leg) in g.legs().iter().enumerate() {
        lines.push(format!("  leg {}: {}", i + 1, join(leg, ", ")));
    }
    lines
}

fn s3_kind_str(kind: &S3Kind) -> &'static str {
    match kind {
        S3Kind::Empty => "empty",
        S3Kind::CenterOnly => "centre only",
        S3Kind::OneLeg => "centre plus one leg prefix",
        S3Kind::TwoLegs => "centre plus two leg prefixes",
    }
}

fn cmd_graph(manifold: &str, common: &Common) -> Result<String> {
    reject_csv(common.format, "graph")?;
    let s = invariants_of(manifold)?;
    let g = standard_graph(&s)?;
    let form = intersection_form(&g)?;
    let dual = s.dual();
    let dual_graph = standard_graph(&dual)?;
    let sub = s3_subgraph(&g)?;
    let labels = decomposition_labels(&g, &sub);
    let kind = type_ab(&g);
    let type_str = match kind {
        TypeAB::A => "A".to_string(),
        TypeAB::B { model, exact } => {
            let name = torus_bundle_models()[model].name;
            if exact {
                format!("B (torus bundle {name})")
            } else {
                format!("B (contains torus-bundle model {name})")
            }
        }
    };
    if common.format == Format::Json {
        let doc = json!({
            "manifold": s.to_string(),
            "euler": s.euler_number().to_string(),
            "standard": {
                "centre": g.center_framing(),
                "legs": g.legs(),
            },
            "vertices": g.vertex_count(),
            "det": form.det().to_string(),
            "definiteness": form.definiteness().to_string(),
            "dual": {
                "manifold": dual.to_string(),
                "centre": dual_graph.center_framing(),
                "legs": dual_graph.legs(),
            },
            "s3_subgraph": {
                "kind": s3_kind_str(&sub.kind),
                "members": sub.members.iter().copied().collect::<Vec<_>>(),
                "torus_knot": [sub.d2, sub.d1],
                "unique": sub.unique,
                "prefixes": sub.prefixes,
            },
            "type": type_str,
            "labels": {
                "gpp": labels.gpp.iter().copied().collect::<Vec<_>>(),
                "gpp1": labels.gpp1,
                "gpp2": labels.gpp2,
                "t_count": labels.t_count,
                "lspace_shortcut": labels.lspace_shortcut,
                "convention_warning": labels.convention_warning,
            },
        });
        return Ok(pretty(&doc));
    }
    let mut out = String::new();
    let _ = writeln!(out, "manifold: {s}");
    let _ = writeln!(out, "euler number: {}", s.euler_number());
    let _ = writeln!(out, "standard graph:");
    for line in graph_lines(&g) {
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(
        out,
        "vertices: {} | det Q = {} | {}",
        g.vertex_count(),
        form.det(),
        form.definiteness()
    );
    let _ = writeln!(out, "dual graph (reversed orientation): {dual}");
    for line in graph_lines(&dual_graph) {
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(
        out,
        "S3 subgraph: {} | members {{{}}} | torus knot ({}, {}) | unique: {}",
        s3_kind_str(&sub.kind),
        join(&sub.members, ", "),
        sub.d2,
        sub.d1,
        if sub.unique { "yes" } else { "no" }
    );
    for (leg, len, den) in &sub.prefixes {
        let _ = writeln!(
            out,
            "  prefix: leg {} length {} (denominator {})",
            leg + 1,
            len,
            den
        );
    }
    let _ = writeln!(out, "type: {type_str}");
    let _ = writeln!(
        out,
        "labels: gpp = {{{}}} | gpp1 = {} | gpp2 = {} | T = {}",
        join(&labels.gpp, ", "),
        labels
            .gpp1
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".to_string()),
        labels
            .gpp2
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".to_string()),
        labels.t_count
    );
    if labels.lspace_shortcut {
        let _ = writeln!(out, "flag: two maximal blow-down subgraphs (L-space shortcut)");
    }
    if labels.convention_warning {
        let _ = writeln!(out, "flag: convention-sensitive leg order");
    }
    Ok(out)
}

fn cmd_tau(manifold: &str, common: &Common) -> Result<String> {
    reject_csv(common.format, "tau")?;
    let s = invariants_of(manifold)?;
    let lat = Lattice::from_invariants(&s)?;
    if lat.form().qinv().is_none() {
        return Err(Error::Unsupported(
            "tau needs an invertible intersection form; torus-bundle detail is out of scope".into(),
        ));
    }
    let classes = lat.enumerate_basis(None)?;
    // a basis class of the graded theory is a (Spin^c, M)-homogeneous group
    // of loop-free walks
    let mut groups: BTreeMap<(String, String), Vec<&FullPath>> = BTreeMap::new();
    for fp in &classes {
        if fp.has_loop {
            continue;
        }
        let label = fp.spinc.to_string();
        if let Some(filter) = &common.spinc {
            if &label != filter {
                continue;
            }
        }
        let grading = match &fp.maslov {
            Some(m) => m.to_string(),
            None => continue,
        };
        groups.entry((label, grading)).or_default().push(fp);
    }
    if groups.is_empty() {
        return Err(Error::Unsupported(match &common.spinc {
            Some(filter) => format!("no loop-free basis class with spinc = {filter}"),
            None => "no loop-free basis classes".to_string(),
        }));
    }
    let mut rows = Vec::new();
    for ((label, grading), members) in &groups {
        let tau_graph = lat.tau(members, TauSide::Graph)?;
        let tau_dual = lat.tau(members, TauSide::DualFunctional)?;
        rows.push((label, grading, members.len(), tau_graph, tau_dual));
    }
    if common.format == Format::Json {
        let rows_json: Vec<serde_json::Value> = rows
            .iter()
            .map(|(label, grading, size, tg, td)| {
                json!({
                    "spinc": label,
                    "maslov": grading,
                    "members": size,
                    "tau_graph": tg.to_string(),
                    "tau_dual": td.to_string(),
                })
            })
            .collect();
        let doc = json!({
            "manifold": s.to_string(),
            "classes": rows_json,
        });
        return Ok(pretty(&doc));
    }
    let mut out = String::new();
    let _ = writeln!(out, "manifold: {s}");
    for (label, grading, size, tg, td) in rows {
        let _ = writeln!(
            out,
            "class spinc = {label}, M = {grading} ({size} member{}): tau = {tg} (graph) / {td} (dual)",
            if size == 1 { "" } else { "s" }
        );
    }
    Ok(out)
}

fn cmd_check(corpus: usize, common: &Common) -> Result<String> {
    reject_csv(common.format, "check")?;
    let seed = common.seed.unwrap_or(DEFAULT_SEED);
    let run = selftest::run_check(seed, corpus)?;
    if common.format == Format::Json {
        let suites: Vec<serde_json::Value> = run
            .outcomes
            .iter()
            .map(|o| json!({"suite": o.name, "cases": o.cases}))
            .collect();
        let doc = json!({
            "seed": run.seed,
            "corpus_size": run.corpus_size,
            "suites": suites,
        });
        return Ok(pretty(&doc));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "self-validation corpus: seed {}, {} random manifolds plus the worked examples",
        run.seed, run.corpus_size
    );
    for o in &run.outcomes {
        let _ = writeln!(out, "suite {}: ok ({} cases)", o.name, o.cases);
    }
    let _ = writeln!(out, "check: {} suites passed", run.outcomes.len());
    Ok(out)
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).expect("stdout utf8"),
            String::from_utf8(err).expect("stderr utf8"),
        )
    }

    #[test]
    fn worked_example_classify_table() {
        let (code, out, _) = capture(&[
            "seifert-floer",
            "classify",
            "Surgery(T(3,4), 1/4)",
            "--format",
            "table",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("structures: 16"), "{out}");
        assert!(out.contains("tw = -7, -223"), "{out}");
    }

    #[test]
    fn worked_example_lspace() {
        let (code, out, _) = capture(&["seifert-floer", "lspace", "-Sigma(2,3,5)"]);
        assert_eq!(code, 0);
        assert!(out.contains("L-space: yes"), "{out}");
        let (code, out, _) = capture(&["seifert-floer", "lspace", "-Sigma(2,3,7)"]);
        assert_eq!(code, 0);
        assert!(out.contains("L-space: no"), "{out}");
        assert!(out.contains("V_can walk ends correctly"), "{out}");
    }

    #[test]
    fn worked_example_twist_certificates() {
        let (code, out, _) = capture(&["seifert-floer", "twist", "M(-2; 1/2,1/2,4/7,6/11)"]);
        assert_eq!(code, 0);
        assert!(out.contains("twisting numbers: -1, -3, -5"), "{out}");
        assert!(out.contains("certificate q = "), "{out}");
    }

    #[test]
    fn parse_and_scope_exit_codes() {
        let (code, _, err) = capture(&["seifert-floer", "classify", "M(-1 1/2, 1/3)"]);
        assert_eq!(code, 2, "{err}");
        let (code, _, err) = capture(&["seifert-floer", "classify", "M(-1; 1/2, 1/3)"]);
        assert_eq!(code, 3, "{err}");
        assert!(err.contains("unsupported"), "{err}");
        let (code, _, err) = capture(&["seifert-floer", "classify", "Surgery(T(3,4), 12)"]);
        assert_eq!(code, 3, "{err}");
        let (code, _, _) = capture(&["seifert-floer", "classify", "M(-1; 1/2, 1/3)", "--bogus"]);
        assert_eq!(code, 2);
        let (code, _, err) = capture(&["seifert-floer", "hf", "x", "--format", "csv"]);
        assert_eq!(code, 2);
        assert!(err.contains("csv"), "{err}");
    }

    #[test]
    fn tau_on_torus_bundle_is_out_of_scope() {
        let (code, _, err) = capture(&["seifert-floer", "tau", "M(-1; 1/2, 1/3, 1/6)"]);
        assert_eq!(code, 3, "{err}");
        assert!(err.contains("torus-bundle"), "{err}");
    }

    #[test]
    fn tau_reports_both_sides() {
        let (code, out, _) = capture(&["seifert-floer", "tau", "-Sigma(2,3,7)"]);
        assert_eq!(code, 0);
        assert!(out.contains("tau = "), "{out}");
        assert!(out.contains("(graph) /"), "{out}");
    }

    #[test]
    fn hf_census_lists_loops_and_gradings() {
        let (code, out, _) = capture(&["seifert-floer", "hf", "M(-1; 1/2, 1/3, 1/6)"]);
        assert_eq!(code, 0);
        assert!(out.contains("M = -1/2"), "{out}");
        assert!(out.contains("singular"), "{out}");
        // the four-legged bundle has cycle classes with no terminal vector
        let (code, out, _) = capture(&["seifert-floer", "hf", "M(-2; 1/2, 1/2, 1/2, 1/2)"]);
        assert_eq!(code, 0);
        assert!(out.contains("| loop"), "{out}");
        assert!(out.contains("cycle at "), "{out}");
        assert!(out.contains("M = 1/2"), "{out}");
    }

    #[test]
    fn hf_spinc_filter_narrows_rows() {
        // |det Q| = 4, so the census spreads over four labels
        let manifold = "M(-2; 1/2, 1/2, 1/2)";
        let (code, full, _) = capture(&["seifert-floer", "hf", manifold]);
        assert_eq!(code, 0);
        let first_label = full
            .lines()
            .find_map(|l| l.split("spinc = ").nth(1))
            .expect("a row")
            .split(" |")
            .next()
            .expect("label")
            .to_string();
        let (code, narrowed, _) =
            capture(&["seifert-floer", "hf", manifold, "--spinc", &first_label]);
        assert_eq!(code, 0);
        assert!(narrowed.lines().count() < full.lines().count());
        assert!(narrowed.contains(&first_label));
    }

    #[test]
    fn window_flag_truncates_bundle_rays() {
        let (code, out, _) = capture(&[
            "seifert-floer",
            "twist",
            "M(-1; 1/2, 1/3, 1/6)",
            "--window",
            "3",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("infinite family"), "{out}");
        let values = out
            .lines()
            .find(|l| l.starts_with("twisting numbers:"))
            .expect("values line")
            .matches('-')
            .count();
        assert!(values >= 3, "{out}");
    }

    #[test]
    fn graph_describes_decomposition() {
        let (code, out, _) = capture(&["seifert-floer", "graph", "M(-2; 1/2,1/2,4/7,6/11)"]);
        assert_eq!(code, 0);
        assert!(out.contains("standard graph:"), "{out}");
        assert!(out.contains("dual graph"), "{out}");
        assert!(out.contains("type: B"), "{out}");
        assert!(out.contains("det Q = "), "{out}");
        let (code, out, _) = capture(&["seifert-floer", "graph", "Surgery(T(3,4), 1/4)"]);
        assert_eq!(code, 0);
        assert!(out.contains("type: A"), "{out}");
        assert!(out.contains("torus knot (3, 4)"), "{out}");
    }

    #[test]
    fn classify_is_byte_deterministic_and_parallel_safe() {
        let args = ["seifert-floer", "classify", "Surgery(T(3,4), 1/4)"];
        let (c1, first, _) = capture(&args);
        let (c2, second, _) = capture(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(first, second);
        let (c3, parallel, _) = capture(&[
            "seifert-floer",
            "classify",
            "Surgery(T(3,4), 1/4)",
            "--parallel",
            "3",
        ]);
        assert_eq!(c3, 0);
        assert_eq!(first, parallel);
    }

    #[test]
    fn json_formats_are_versioned_or_structured() {
        let (code, out, _) = capture(&[
            "seifert-floer",
            "classify",
            "-Sigma(2,3,7)",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        let doc = report::from_json(&out).expect("round trip");
        assert_eq!(doc.schema_version, report::SCHEMA_VERSION);
        // -Sigma(2,3,7) normalises with centre weight -2: its set is {-1}
        let (code, out, _) = capture(&["seifert-floer", "twist", "-Sigma(2,3,7)", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).expect("twist json");
        assert_eq!(v["values"], serde_json::json!([-1]));
    }

    #[test]
    fn check_runs_every_suite_on_a_small_corpus() {
        let (code, out, _) = capture(&["seifert-floer", "check", "1", "--seed", "7"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("check: 9 suites passed"), "{out}");
        assert!(out.contains("suite twisting-routes: ok"), "{out}");
    }
}
