//! Table, JSON, and CSV views of classification results, plus the embedded
//! golden fixtures that back the regression and acceptance suites.
//!
//! Every rational renders as an exact `p/q` string. Serialization is
//! deterministic byte-for-byte for a given report: orderings are inherited
//! from the classification (already sorted) and formatting never depends on
//! ambient state.

use std::fmt::Write as _;

use num_rational::BigRational as Rational;
use serde::{Deserialize, Serialize};

use crate::contact::{ClassificationReport, ManifoldClass, StructureFlags, StructureKind};
use crate::error::{Error, Result};
use crate::numtheory::{fmt_rational, rat, rat_int};
use crate::plumbing::torus_bundle_models;

/// Tag embedded in every JSON document; `from_json` rejects any other value.
pub const SCHEMA_VERSION: &str = "1";

/// One vertex of the canonical star graph: flat index, owning leg and depth
/// (the centre has neither), and framing. Lets a reader translate vector
/// coordinates into any other printing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLegend {
    pub index: usize,
    pub leg: Option<usize>,
    /// Distance from the centre, 1 at the vertex adjacent to it; 0 for the
    /// centre.
    pub depth: usize,
    pub framing: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub center: i64,
    /// Framings per leg, root-first.
    pub legs: Vec<Vec<i64>>,
    pub legend: Vec<VertexLegend>,
}

/// One (Spin^c, d3) class of realised vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    /// Residue label, e.g. `[1/2,5/36]`; `*` marks a non-torsion class.
    pub spinc: String,
    /// Exact fraction string; absent on non-torsion classes.
    pub d3: Option<String>,
    /// Indices into `realised`, Alexander-increasing.
    pub members: Vec<usize>,
    pub combined_height: Option<i64>,
    /// Distinct twisting numbers among the class's structures, descending.
    pub twisting: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub spinc: String,
    pub d3: Option<String>,
    pub tw: i64,
    /// `blow-down(Vi)`, `pair(Vi,Vj)` (indices into `realised`, 1-based), or
    /// `pyramid(i,j;k)` (ranks inside the class of size k).
    pub kind: String,
    /// Indices into `realised` carrying the contact invariant.
    pub coords: Vec<usize>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub q: u64,
    /// Leg numerators as decimal strings; they sum to `-e0*q + n - 2`.
    pub numerators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistingDoc {
    pub values: Vec<i64>,
    pub truncated: bool,
    pub period: Option<i64>,
    pub certificates: Vec<CertificateDoc>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountDoc {
    pub tw: i64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    /// `pass` or `skipped`; failures abort the run and never reach a report.
    pub status: String,
    pub detail: String,
}

/// Flat, versioned view of a [`ClassificationReport`]. Round-trips through
/// JSON without loss; all rationals are `p/q` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub manifold: String,
    pub class: String,
    pub tw_bar: Option<i64>,
    pub graph: GraphDoc,
    pub spin_c_classes: Vec<GroupDoc>,
    /// Realised vectors in canonical vertex order (see `graph.legend`).
    pub realised: Vec<Vec<i64>>,
    pub structures: Vec<StructureDoc>,
    pub twisting_set: TwistingDoc,
    pub counts: Vec<CountDoc>,
    pub checks: Vec<CheckDoc>,
    pub notes: Vec<String>,
}

fn class_string(class: &ManifoldClass) -> String {
    match class {
        ManifoldClass::NegDefinite => "negative-definite".into(),
        ManifoldClass::TypeA => "type-A".into(),
        ManifoldClass::TypeB { model } => {
            format!("type-B({})", torus_bundle_models()[*model].name)
        }
        ManifoldClass::Singular => "singular".into(),
        ManifoldClass::SingularTorusBundle { model } => {
            format!("torus-bundle({})", torus_bundle_models()[*model].name)
        }
        ManifoldClass::LSpace => "L-space".into(),
    }
}

fn kind_string(kind: &StructureKind) -> String {
    match kind {
        StructureKind::BlowDown { vector } => format!("blow-down(V{})", vector + 1),
        StructureKind::PairA { first, last } => format!("pair(V{},V{})", first + 1, last + 1),
        StructureKind::Pyramid { i, j, k } => format!("pyramid({i},{j};{k})"),
    }
}

fn flag_strings(flags: &StructureFlags) -> Vec<String> {
    let mut out = Vec::new();
    if flags.pyramidion {
        out.push("pyramidion".to_string());
    }
    if flags.casing_stone {
        out.push("casing-stone".to_string());
    }
    if flags.self_conjugate {
        out.push("self-conjugate".to_string());
    }
    if flags.stein_obstructed {
        out.push("stein-obstructed".to_string());
    }
    if flags.stein_fillable {
        out.push("stein-fillable".to_string());
    }
    out
}

impl ReportDocument {
    pub fn from_classification(rep: &ClassificationReport) -> ReportDocument {
        let framings = rep.graph.framings();
        let legend = (0..rep.graph.vertex_count())
            .map(|i| {
                let (leg, depth) = match rep.graph.vertex_leg(i) {
                    Some((leg, depth)) => (Some(leg), depth),
                    None => (None, 0),
                };
                VertexLegend {
                    index: i,
                    leg,
                    depth,
                    framing: framings[i],
                }
            })
            .collect();
        let spin_c_classes = rep
            .groups
            .iter()
            .map(|g| {
                let mut twisting: Vec<i64> = rep
                    .structures
                    .iter()
                    .filter(|st| st.spinc == g.spinc && st.d3 == g.d3)
                    .map(|st| st.tw)
                    .collect();
                twisting.sort_unstable_by(|a, b| b.cmp(a));
                twisting.dedup();
                GroupDoc {
                    spinc: g.spinc.to_string(),
                    d3: g.d3.as_ref().map(fmt_rational),
                    members: g.members.clone(),
                    combined_height: g.combined_height,
                    twisting,
                }
            })
            .collect();
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            manifold: rep.manifold.to_string(),
            class: class_string(&rep.class),
            tw_bar: rep.tw_bar,
            graph: GraphDoc {
                center: rep.graph.center_framing(),
                legs: rep.graph.legs().to_vec(),
                legend,
            },
            spin_c_classes,
            realised: rep
                .realised
                .iter()
                .map(|rv| rv.vector.coords().to_vec())
                .collect(),
            structures: rep
                .structures
                .iter()
                .map(|st| StructureDoc {
                    spinc: st.spinc.to_string(),
                    d3: st.d3.as_ref().map(fmt_rational),
                    tw: st.tw,
                    kind: kind_string(&st.kind),
                    coords: st.cplus_coords.clone(),
                    flags: flag_strings(&st.flags),
                })
                .collect(),
            twisting_set: TwistingDoc {
                values: rep.twisting_set.values.clone(),
                truncated: rep.twisting_set.truncated,
                period: rep.twisting_set.period,
                certificates: rep
                    .twisting_set
                    .certificates
                    .iter()
                    .map(|c| CertificateDoc {
                        q: c.q,
                        numerators: c.numerators.iter().map(|p| p.to_string()).collect(),
                    })
                    .collect(),
                notes: rep.twisting_set.notes.clone(),
            },
            counts: rep
                .counts_by_tw
                .iter()
                .map(|(&tw, &count)| CountDoc { tw, count })
                .collect(),
            checks: rep
                .checks
                .iter()
                .map(|c| CheckDoc {
                    name: c.name.clone(),
                    status: match c.status {
                        crate::contact::CheckStatus::Pass => "pass".to_string(),
                        crate::contact::CheckStatus::Skipped => "skipped".to_string(),
                    },
                    detail: c.detail.clone(),
                })
                .collect(),
            notes: rep.notes.clone(),
        }
    }
}

fn fmt_vector(v: &[i64]) -> String {
    let body: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", body.join(","))
}

fn fmt_i64_list(xs: &[i64]) -> String {
    let body: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    body.join(", ")
}

/// Renders one block per Spin^c class, one row per grading inside it, with
/// the realised vectors, the combined height, and the twisting numbers.
pub fn to_table(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "manifold: {}", doc.manifold);
    let _ = writeln!(out, "class: {}", doc.class);
    if let Some(tb) = doc.tw_bar {
        let _ = writeln!(out, "maximal twisting: {tb}");
    }
    if doc.class == "L-space" {
        let _ = writeln!(out, "L-space: yes; no tight structure twists negatively");
        for note in &doc.notes {
            let _ = writeln!(out, "note: {note}");
        }
        return out;
    }
    if !doc.twisting_set.values.is_empty() {
        let mut line = format!("twisting numbers: {}", fmt_i64_list(&doc.twisting_set.values));
        if doc.twisting_set.truncated {
            let _ = write!(line, ", ... (infinite family");
            if let Some(p) = doc.twisting_set.period {
                let _ = write!(line, ", period {p}");
            }
            let _ = write!(line, ")");
        }
        let _ = writeln!(out, "{line}");
    }

    let mut block: Option<&str> = None;
    for g in &doc.spin_c_classes {
        if block != Some(g.spinc.as_str()) {
            let _ = writeln!(out, "\nSpin^c {}", g.spinc);
            block = Some(g.spinc.as_str());
        }
        let d3 = g.d3.as_deref().unwrap_or("-");
        let vectors: Vec<String> = g
            .members
            .iter()
            .map(|&i| format!("V{}={}", i + 1, fmt_vector(&doc.realised[i])))
            .collect();
        let height = g
            .combined_height
            .map_or_else(|| "-".to_string(), |h| h.to_string());
        let _ = writeln!(
            out,
            "  d3 = {d3} | {} | height = {height} | tw = {}",
            vectors.join(" "),
            fmt_i64_list(&g.twisting)
        );
    }

    if !doc.structures.is_empty() {
        let _ = writeln!(out, "\nstructures: {}", doc.structures.len());
        for c in &doc.counts {
            let _ = writeln!(out, "  tw = {}: {}", c.tw, c.count);
        }
    }
    for chk in &doc.checks {
        let _ = writeln!(out, "check {}: {} ({})", chk.name, chk.status, chk.detail);
    }
    for note in &doc.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json(doc: &ReportDocument) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
    text.push('\n');
    text
}

pub fn from_json(text: &str) -> Result<ReportDocument> {
    let doc: ReportDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report JSON: {e}")))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "report schema version {} not supported; this build reads version {}",
            doc.schema_version, SCHEMA_VERSION
        )));
    }
    Ok(doc)
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One row per structure; multi-valued cells join with `;`.
pub fn to_csv(doc: &ReportDocument) -> String {
    let mut out = String::from("manifold,spinc,d3,tw,kind,coords,flags\n");
    for st in &doc.structures {
        let coords: Vec<String> = st.coords.iter().map(|c| c.to_string()).collect();
        let row = [
            csv_field(&doc.manifold),
            csv_field(&st.spinc),
            csv_field(st.d3.as_deref().unwrap_or("")),
            st.tw.to_string(),
            csv_field(&st.kind),
            csv_field(&coords.join(";")),
            csv_field(&st.flags.join(";")),
        ];
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// One grading row of a published classification table, vectors in canonical
/// vertex order.
#[derive(Debug, Clone)]
pub struct GoldenRow {
    pub d3: Rational,
    pub vectors: Vec<Vec<i64>>,
    pub combined_height: i64,
    pub twisting: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct GoldenTable {
    /// Input expression for `parse_manifold`.
    pub manifold: &'static str,
    pub spin_c_blocks: usize,
    pub structures: usize,
    pub rows: Vec<GoldenRow>,
}

/// Published full-path data for one flat torus-bundle model.
#[derive(Debug, Clone)]
pub struct HomologyRow {
    pub manifold: &'static str,
    /// Path starts with their absolute gradings; the first is the canonical
    /// vector and names the only loop-free torsion class.
    pub vectors: Vec<(Vec<i64>, Rational)>,
    /// Rank of the hat homology per grading on the torsion label.
    pub hat_ranks: Vec<(Rational, u32)>,
}

#[derive(Debug, Clone)]
pub struct PyramidFixture {
    pub manifold: &'static str,
    pub realised: Vec<Vec<i64>>,
    /// (twisting number, multiplicity), descending.
    pub tw_multiset: Vec<(i64, usize)>,
}

/// Leg numerators witnessing one arithmetic twisting value `-q`.
#[derive(Debug, Clone)]
pub struct CertFixture {
    pub manifold: &'static str,
    pub q: u64,
    pub numerators: Vec<i64>,
}

/// Published structure-count product at one twisting level.
#[derive(Debug, Clone)]
pub struct CountFixture {
    pub manifold: &'static str,
    pub q: u64,
    /// Per-leg factors when published; empty if only the total is known.
    pub leg_factors: Vec<i64>,
    pub total: i64,
}

#[derive(Debug, Clone)]
pub struct GoldenFixtures {
    pub table1: GoldenTable,
    pub table2: GoldenTable,
    pub homology: Vec<HomologyRow>,
    pub pyramid_2323: PyramidFixture,
    pub certificates: Vec<CertFixture>,
    pub counts: Vec<CountFixture>,
}

/// Machine-readable copies of the published tables the suites compare
/// against. Vector lists are multisets: consumers must not rely on row or
/// member order beyond what the docs themselves sort.
pub fn golden_fixtures() -> GoldenFixtures {
    let table1 = GoldenTable {
        manifold: "-Sigma(3,4,47)",
        spin_c_blocks: 1,
        structures: 16,
        rows: vec![
            GoldenRow {
                d3: rat_int(19),
                vectors: vec![vec![1, 0, 0, -2, -10, -2], vec![1, 0, 0, -2, -2, 2]],
                combined_height: 222,
                twisting: vec![-7, -223],
            },
            GoldenRow {
                d3: rat_int(15),
                vectors: vec![vec![1, 0, 0, -2, -10, 0], vec![1, 0, 0, -2, -2, 0]],
                combined_height: 198,
                twisting: vec![-7],
            },
            GoldenRow {
                d3: rat_int(11),
                vectors: vec![vec![1, 0, 0, -2, -10, 2], vec![1, 0, 0, -2, -2, -2]],
                combined_height: 174,
                twisting: vec![-7],
            },
            GoldenRow {
                d3: rat_int(5),
                vectors: vec![vec![1, 0, 0, -2, -8, -2], vec![1, 0, 0, -2, -4, 2]],
                combined_height: 126,
                twisting: vec![-7],
            },
            GoldenRow {
                d3: rat_int(3),
                vectors: vec![vec![1, 0, 0, -2, -8, 0], vec![1, 0, 0, -2, -4, 0]],
                combined_height: 102,
                twisting: vec![-7],
            },
            GoldenRow {
                d3: rat_int(1),
                vectors: vec![vec![1, 0, 0, -2, -8, 2], vec![1, 0, 0, -2, -4, -2]],
                combined_height: 78,
                twisting: vec![-7],
            },
            GoldenRow {
                d3: rat_int(-1),
                vectors: vec![
                    vec![1, 0, 0, -2, -6, -2],
                    vec![1, 0, 0, -2, -6, 0],
                    vec![1, 0, 0, -2, -6, 2],
                ],
                combined_height: 30,
                twisting: vec![-7],
            },
        ],
    };

    let table2 = GoldenTable {
        manifold: "M(-2; 1/2, 1/2, 4/7, 6/11)",
        spin_c_blocks: 7,
        structures: 26,
        rows: vec![
            GoldenRow {
                d3: rat(5, 36),
                vectors: vec![
                    vec![0, 0, 0, 0, -2, 0, -4],
                    vec![0, 0, 0, 0, 0, 0, -2],
                    vec![0, 0, 0, 0, 2, 0, 0],
                ],
                combined_height: 4,
                twisting: vec![-1, -3, -5],
            },
            GoldenRow {
                d3: rat(5, 36),
                vectors: vec![
                    vec![0, 0, 0, 0, -2, 0, 0],
                    vec![0, 0, 0, 0, 0, 0, 2],
                    vec![0, 0, 0, 0, 2, 0, 4],
                ],
                combined_height: 4,
                twisting: vec![-1, -3, -5],
            },
            GoldenRow {
                d3: rat(1, 4),
                vectors: vec![
                    vec![0, 0, 0, 0, -2, 0, -2],
                    vec![0, 0, 0, 0, 0, 0, 0],
                    vec![0, 0, 0, 0, 2, 0, 2],
                ],
                combined_height: 4,
                twisting: vec![-1, -3, -5],
            },
            GoldenRow {
                d3: rat(-7, 36),
                vectors: vec![vec![0, 0, 0, 0, -2, 0, 2], vec![0, 0, 0, 0, 0, 0, 4]],
                combined_height: 2,
                twisting: vec![-1, -3],
            },
            GoldenRow {
                d3: rat(-7, 36),
                vectors: vec![vec![0, 0, 0, 0, 0, 0, -4], vec![0, 0, 0, 0, 2, 0, -2]],
                combined_height: 2,
                twisting: vec![-1, -3],
            },
            GoldenRow {
                d3: rat(-3, 4),
                vectors: vec![vec![0, 0, 0, 0, -2, 0, 4]],
                combined_height: 0,
                twisting: vec![-1],
            },
            GoldenRow {
                d3: rat(-3, 4),
                vectors: vec![vec![0, 0, 0, 0, 2, 0, -4]],
                combined_height: 0,
                twisting: vec![-1],
            },
        ],
    };

    let homology = vec![
        HomologyRow {
            manifold: "M(-1; 1/2, 1/3, 1/6)",
            vectors: vec![(vec![1, 0, -1, -4], rat(-1, 2))],
            hat_ranks: vec![(rat(-1, 2), 1), (rat(-3, 2), 1)],
        },
        HomologyRow {
            manifold: "M(-2; 1/2, 2/3, 5/6)",
            vectors: vec![(vec![0; 9], rat(3, 2))],
            hat_ranks: vec![(rat(3, 2), 1), (rat(1, 2), 1)],
        },
        HomologyRow {
            manifold: "M(-1; 1/2, 1/4, 1/4)",
            vectors: vec![
                (vec![1, 0, -2, -2], rat(-1, 4)),
                (vec![-1, 0, 0, 4], rat(-3, 4)),
            ],
            hat_ranks: vec![
                (rat(1, 4), 1),
                (rat(-1, 4), 1),
                (rat(-3, 4), 1),
                (rat(-5, 4), 1),
            ],
        },
        HomologyRow {
            manifold: "M(-2; 1/2, 3/4, 3/4)",
            vectors: vec![
                (vec![0; 8], rat(5, 4)),
                (vec![-2, 0, 0, 0, 2, 2, 0, 0], rat(-1, 4)),
            ],
            hat_ranks: vec![
                (rat(5, 4), 1),
                (rat(3, 4), 1),
                (rat(1, 4), 1),
                (rat(-1, 4), 1),
            ],
        },
        HomologyRow {
            manifold: "M(-1; 1/3, 1/3, 1/3)",
            vectors: vec![
                (vec![1, -1, -1, -1], rat_int(0)),
                (vec![-1, 3, 1, -1], rat(-2, 3)),
                (vec![-1, 3, -1, 1], rat(-2, 3)),
            ],
            hat_ranks: vec![
                (rat(1, 3), 2),
                (rat_int(0), 1),
                (rat(-2, 3), 2),
                (rat_int(-1), 1),
            ],
        },
        HomologyRow {
            manifold: "M(-2; 2/3, 2/3, 2/3)",
            vectors: vec![
                (vec![0; 7], rat_int(1)),
                (vec![-2, 0, 0, 0, 2, 2, 0], rat(-1, 3)),
                (vec![-2, 0, 2, 0, 0, 2, 0], rat(-1, 3)),
            ],
            hat_ranks: vec![
                (rat_int(1), 1),
                (rat(2, 3), 2),
                (rat_int(0), 1),
                (rat(-1, 3), 2),
            ],
        },
        HomologyRow {
            manifold: "M(-2; 1/2, 1/2, 1/2, 1/2)",
            vectors: vec![
                (vec![0; 5], rat(1, 2)),
                (vec![-2, 2, 2, 0, 0], rat(-1, 2)),
                (vec![-2, 2, 0, 2, 0], rat(-1, 2)),
                (vec![-2, 2, 0, 0, 2], rat(-1, 2)),
            ],
            hat_ranks: vec![(rat(1, 2), 4), (rat(-1, 2), 4)],
        },
    ];

    let pyramid_2323 = PyramidFixture {
        manifold: "-Sigma(2,3,23)",
        realised: vec![
            vec![1, 0, -1, -4, -2],
            vec![1, 0, -1, -4, 0],
            vec![1, 0, -1, -4, 2],
        ],
        tw_multiset: vec![(-5, 3), (-11, 2), (-17, 1)],
    };

    let certificates = vec![
        CertFixture {
            manifold: "-Sigma(3,4,47)",
            q: 7,
            numerators: vec![5, 2, 1],
        },
        CertFixture {
            manifold: "-Sigma(3,4,47)",
            q: 223,
            numerators: vec![149, 56, 19],
        },
    ];

    let counts = vec![
        CountFixture {
            manifold: "-Sigma(3,4,47)",
            q: 7,
            leg_factors: vec![1, 1, 15],
            total: 15,
        },
        CountFixture {
            manifold: "-Sigma(3,4,47)",
            q: 223,
            leg_factors: vec![1, 1, 1],
            total: 1,
        },
        CountFixture {
            manifold: "M(-2; 1/2, 1/2, 4/7, 6/11)",
            q: 1,
            leg_factors: vec![],
            total: 15,
        },
        CountFixture {
            manifold: "M(-2; 1/2, 1/2, 4/7, 6/11)",
            q: 3,
            leg_factors: vec![],
            total: 8,
        },
        CountFixture {
            manifold: "M(-2; 1/2, 1/2, 4/7, 6/11)",
            q: 5,
            leg_factors: vec![],
            total: 3,
        },
    ];

    GoldenFixtures {
        table1,
        table2,
        homology,
        pyramid_2323,
        certificates,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    use num_bigint::BigInt;

    use crate::contact::{classify, count_formula, ghiggini_massot, ClassifyOptions};
    use crate::lattice::{CharVector, Lattice};
    use crate::plumbing::parse_manifold;

    fn classify_expr(expr: &str) -> ClassificationReport {
        let s = parse_manifold(expr).unwrap().invariants().unwrap();
        classify(&s, &ClassifyOptions::default()).unwrap()
    }

    /// (d3, sorted vectors, height, twisting) per group, as a sortable key.
    fn row_keys_from_doc(doc: &ReportDocument) -> Vec<(String, Vec<Vec<i64>>, i64, Vec<i64>)> {
        let mut keys: Vec<_> = doc
            .spin_c_classes
            .iter()
            .map(|g| {
                let mut vectors: Vec<Vec<i64>> = g
                    .members
                    .iter()
                    .map(|&i| doc.realised[i].clone())
                    .collect();
                vectors.sort();
                (
                    g.d3.clone().unwrap_or_default(),
                    vectors,
                    g.combined_height.unwrap(),
                    g.twisting.clone(),
                )
            })
            .collect();
        keys.sort();
        keys
    }

    fn row_keys_from_fixture(t: &GoldenTable) -> Vec<(String, Vec<Vec<i64>>, i64, Vec<i64>)> {
        let mut keys: Vec<_> = t
            .rows
            .iter()
            .map(|r| {
                let mut vectors = r.vectors.clone();
                vectors.sort();
                (
                    fmt_rational(&r.d3),
                    vectors,
                    r.combined_height,
                    r.twisting.clone(),
                )
            })
            .collect();
        keys.sort();
        keys
    }

    fn doc_blocks(doc: &ReportDocument) -> usize {
        doc.spin_c_classes
            .iter()
            .map(|g| g.spinc.clone())
            .collect::<BTreeSet<_>>()
            .len()
    }

    #[test]
    fn table1_fixture_matches_classification() {
        let fx = golden_fixtures().table1;
        let doc = ReportDocument::from_classification(&classify_expr(fx.manifold));
        assert_eq!(doc_blocks(&doc), fx.spin_c_blocks);
        assert_eq!(doc.structures.len(), fx.structures);
        assert_eq!(row_keys_from_doc(&doc), row_keys_from_fixture(&fx));
        assert_eq!(doc.class, "type-A");
        assert_eq!(doc.tw_bar, Some(-7));
    }

    #[test]
    fn table2_fixture_matches_classification() {
        let fx = golden_fixtures().table2;
        let doc = ReportDocument::from_classification(&classify_expr(fx.manifold));
        assert_eq!(doc_blocks(&doc), fx.spin_c_blocks);
        assert_eq!(doc.structures.len(), fx.structures);
        assert_eq!(row_keys_from_doc(&doc), row_keys_from_fixture(&fx));
    }

    #[test]
    fn pyramid_fixture_matches_classification() {
        let fx = golden_fixtures().pyramid_2323;
        let doc = ReportDocument::from_classification(&classify_expr(fx.manifold));
        let mut realised = doc.realised.clone();
        realised.sort();
        let mut want = fx.realised.clone();
        want.sort();
        assert_eq!(realised, want);
        let counts: Vec<(i64, usize)> = {
            let mut by_tw = std::collections::BTreeMap::new();
            for st in &doc.structures {
                *by_tw.entry(st.tw).or_insert(0usize) += 1;
            }
            by_tw.into_iter().rev().collect()
        };
        assert_eq!(counts, fx.tw_multiset);
    }

    #[test]
    fn homology_fixture_matches_walks() {
        for row in golden_fixtures().homology {
            let s = parse_manifold(row.manifold).unwrap().invariants().unwrap();
            let lat = Lattice::from_invariants(&s).unwrap();
            for (pos, (coords, grading)) in row.vectors.iter().enumerate() {
                let fp = lat.full_path(&CharVector::new(coords.clone())).unwrap();
                assert!(fp.ends_correctly, "{} vector {pos}", row.manifold);
                assert_eq!(fp.maslov.as_ref(), Some(grading), "{}", row.manifold);
                assert_eq!(fp.has_loop, pos > 0, "{} vector {pos}", row.manifold);
            }
            // the torsion label carries exactly the listed classes, and only
            // the canonical one walks loop-free
            let torsion: Vec<_> = lat
                .enumerate_basis(None)
                .unwrap()
                .into_iter()
                .filter(|fp| fp.spinc.is_torsion())
                .collect();
            assert_eq!(torsion.len(), row.vectors.len(), "{}", row.manifold);
            assert_eq!(
                torsion.iter().filter(|fp| !fp.has_loop).count(),
                1,
                "{}",
                row.manifold
            );
        }
    }

    #[test]
    fn certificate_fixture_matches_arithmetic_scan() {
        for cert in golden_fixtures().certificates {
            let s = parse_manifold(cert.manifold).unwrap().invariants().unwrap();
            let set = ghiggini_massot(&s, 8).unwrap();
            assert!(set.values.contains(&-(cert.q as i64)));
            let found = set
                .certificates
                .iter()
                .find(|c| c.q == cert.q)
                .expect("certificate present");
            let want: Vec<BigInt> = cert.numerators.iter().map(|&p| BigInt::from(p)).collect();
            assert_eq!(found.numerators, want);
        }
    }

    #[test]
    fn count_fixture_matches_formula() {
        for row in golden_fixtures().counts {
            let s = parse_manifold(row.manifold).unwrap().invariants().unwrap();
            assert_eq!(count_formula(&s, row.q).unwrap(), BigInt::from(row.total));
            if !row.leg_factors.is_empty() {
                let product: i64 = row.leg_factors.iter().product();
                assert_eq!(product, row.total);
            }
        }
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let doc = ReportDocument::from_classification(&classify_expr("-Sigma(3,4,47)"));
        let text = to_json(&doc);
        let back = from_json(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn json_rejects_other_schema_versions() {
        let mut doc = ReportDocument::from_classification(&classify_expr("-Sigma(2,3,23)"));
        doc.schema_version = "0".to_string();
        let err = from_json(&to_json(&doc)).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        assert!(err.to_string().contains("schema version"));
    }

    #[test]
    fn json_never_contains_floats() {
        let doc = ReportDocument::from_classification(&classify_expr(
            "M(-2; 1/2, 1/2, 4/7, 6/11)",
        ));
        let text = to_json(&doc);
        assert!(text.contains("\"5/36\""));
        assert!(!text.contains("0.13"));
    }

    #[test]
    fn csv_has_one_row_per_structure() {
        let doc1 = ReportDocument::from_classification(&classify_expr("-Sigma(3,4,47)"));
        let csv1 = to_csv(&doc1);
        let lines1: Vec<&str> = csv1.lines().collect();
        assert_eq!(lines1[0], "manifold,spinc,d3,tw,kind,coords,flags");
        assert_eq!(lines1.len(), 1 + 16);

        let doc2 = ReportDocument::from_classification(&classify_expr(
            "M(-2; 1/2, 1/2, 4/7, 6/11)",
        ));
        let csv2 = to_csv(&doc2);
        assert_eq!(csv2.lines().count(), 1 + 26);
        // spinc labels carry commas and must arrive quoted
        assert!(csv2.lines().nth(1).unwrap().contains('"'));
    }

    #[test]
    fn table_layout_matches_published_shape() {
        let doc1 = ReportDocument::from_classification(&classify_expr("-Sigma(3,4,47)"));
        let text1 = to_table(&doc1);
        assert_eq!(text1.matches("Spin^c ").count(), 1);
        assert_eq!(text1.matches("d3 = ").count(), 7);
        assert!(text1.contains("height = 222"));
        assert!(text1.contains("tw = -7, -223"));

        let doc2 = ReportDocument::from_classification(&classify_expr(
            "M(-2; 1/2, 1/2, 4/7, 6/11)",
        ));
        let text2 = to_table(&doc2);
        assert_eq!(text2.matches("Spin^c ").count(), 7);
        assert!(text2.contains("d3 = 5/36"));

        let ls = ReportDocument::from_classification(&classify_expr("-Sigma(2,3,5)"));
        let text3 = to_table(&ls);
        assert!(text3.contains("L-space: yes"));
        assert!(!text3.contains("d3 = "));
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = ReportDocument::from_classification(&classify_expr("-Sigma(3,4,47)"));
        let b = ReportDocument::from_classification(&classify_expr("-Sigma(3,4,47)"));
        assert_eq!(to_json(&a), to_json(&b));
        assert_eq!(to_table(&a), to_table(&b));
        assert_eq!(to_csv(&a), to_csv(&b));
    }
}
