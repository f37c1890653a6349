//! Seeded self-validation corpus behind the `check` command.
//!
//! Each suite confronts one computation route with an independent one on a
//! reproducible random corpus plus the worked examples. Any disagreement
//! surfaces as a consistency error carrying both witnesses; the suites never
//! weaken a comparison to keep a case.

use std::collections::BTreeMap;

use num_rational::BigRational as Rational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contact::{
    classify, count_formula, ghiggini_massot, predict_torus_surgery, tw_bar,
    twisting_numbers_via_heights, ClassificationReport, ClassifyOptions, ManifoldClass,
};
use crate::error::{Error, Result};
use crate::lattice::{CharVector, FullPath, Lattice, TauSide};
use crate::numtheory::{big_to_i64, fmt_rational, rat, rat_int};
use crate::plumbing::{
    brieskorn, s3_subgraph, torus_bundle_models, torus_knot_surgery, Definiteness,
    SeifertInvariants, StarGraph,
};

/// One suite's name and how many randomized cases it exercised.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
}

/// Result of a full `check` run. Present only when every suite passed; a
/// failing comparison aborts with both witnesses in the error.
#[derive(Debug, Clone)]
pub struct CheckRun {
    pub seed: u64,
    pub corpus_size: usize,
    pub outcomes: Vec<SuiteOutcome>,
}

struct Case {
    s: SeifertInvariants,
    lat: Lattice,
    report: ClassificationReport,
}

const ORBIT_CAP: usize = 6000;

fn random_invariants(rng: &mut ChaCha8Rng) -> Option<SeifertInvariants> {
    let n = rng.gen_range(3..=4usize);
    let e0 = rng.gen_range(-3..=0i64);
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        let den = rng.gen_range(2..=30i64);
        let num = rng.gen_range(1..den);
        coeffs.push(rat(num, den));
    }
    SeifertInvariants::new(e0, coeffs).ok()
}

/// Draws invertible manifolds the whole pipeline accepts. Euler number zero
/// (loop classes) and slow positive-Euler scans are rejected up front;
/// classification errors other than `Unsupported` are real failures and
/// propagate.
fn build_corpus(rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Case>> {
    let opts = ClassifyOptions::default();
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 400 * count.max(1) {
            return Err(Error::Contract(format!(
                "corpus generation stalled after {attempts} attempts"
            )));
        }
        let Some(s) = random_invariants(rng) else {
            continue;
        };
        let e = s.euler_number();
        if e.is_zero() {
            continue;
        }
        if e > Rational::zero() {
            let bound = (rat_int(s.arity() as i64 - 2) / &e).ceil();
            if bound > rat_int(300) {
                continue;
            }
        }
        match classify(&s, &opts) {
            Ok(report) => {
                let lat = Lattice::from_invariants(&s)?;
                out.push(Case { s, lat, report });
            }
            Err(Error::Unsupported(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    for s in example_invariants() {
        let report = classify(&s, &opts)?;
        let lat = Lattice::from_invariants(&s)?;
        out.push(Case { s, lat, report });
    }
    Ok(out)
}

/// Worked examples every applicable suite folds in next to the random draws.
fn example_invariants() -> Vec<SeifertInvariants> {
    let m = |e0: i64, r: &[(i64, i64)]| {
        SeifertInvariants::new(e0, r.iter().map(|&(p, q)| rat(p, q)).collect()).expect("example")
    };
    vec![
        m(-1, &[(2, 3), (1, 4), (4, 47)]),
        m(-2, &[(1, 2), (1, 2), (4, 7), (6, 11)]),
        m(-1, &[(1, 2), (2, 3), (19, 23)]),
        brieskorn(&[2, 3, 5], false).expect("example"),
        brieskorn(&[2, 3, 7], false).expect("example"),
        brieskorn(&[2, 3, 7], true).expect("example"),
        brieskorn(&[2, 3, 11], true).expect("example"),
        brieskorn(&[2, 3, 23], true).expect("example"),
        brieskorn(&[2, 3, 29], true).expect("example"),
    ]
}

/// Independent re-derivation of one full-path orbit: repeatedly add twice
/// the Q-column of the smallest vertex sitting at -m(i). Returns the visited
/// vectors up to the terminal one, or None when the cap is hit.
fn raw_orbit(lat: &Lattice, start: &CharVector, cap: usize) -> Result<Option<Vec<CharVector>>> {
    let q = lat.form().q();
    let m = lat.graph().framings();
    let mut z: Vec<i64> = start.coords().to_vec();
    let mut orbit = vec![CharVector::new(z.clone())];
    for _ in 0..cap {
        let Some(i) = (0..z.len()).find(|&i| z[i] == -m[i]) else {
            return Ok(Some(orbit));
        };
        for (j, slot) in z.iter_mut().enumerate() {
            *slot += 2 * big_to_i64(&q[i][j])?;
        }
        orbit.push(CharVector::new(z.clone()));
    }
    Ok(None)
}

fn fibre_functional(lat: &Lattice) -> Result<Vec<Rational>> {
    let inv = lat.form().qinv().ok_or_else(|| {
        Error::Contract("fibre functional needs an invertible intersection form".into())
    })?;
    Ok(inv[0].clone())
}

fn dot_row(row: &[Rational], v: &CharVector) -> Rational {
    row.iter()
        .zip(v.coords())
        .map(|(r, &z)| r * rat_int(z))
        .sum()
}

// counted from the framings so huge boxes are never materialized
fn initial_box_size(lat: &Lattice) -> u128 {
    lat.graph()
        .framings()
        .iter()
        .map(|&m| if m < 0 { (-m) as u128 } else { 0 })
        .fold(1u128, u128::saturating_mul)
}

/// Suite (a): arithmetic scan versus walk heights on every manifold where
/// both routes are defined.
fn suite_twisting_routes(corpus: &[Case]) -> Result<usize> {
    let mut cases = 0usize;
    for case in corpus {
        let arithmetic = ghiggini_massot(&case.s, 8)?;
        match case.report.class {
            ManifoldClass::TypeA | ManifoldClass::TypeB { .. } => {
                let heights = twisting_numbers_via_heights(
                    &case.lat,
                    &case.report.realised,
                    &case.report.groups,
                )?;
                if heights != arithmetic.values {
                    return Err(Error::Consistency(format!(
                        "{}: heights route {heights:?} vs arithmetic route {:?}",
                        case.s, arithmetic.values
                    )));
                }
            }
            ManifoldClass::NegDefinite => {
                let sub = s3_subgraph(case.lat.graph())?;
                let walk = tw_bar(&case.lat, &sub)?;
                if arithmetic.values != vec![walk] {
                    return Err(Error::Consistency(format!(
                        "{}: walk route [{walk}] vs arithmetic route {:?}",
                        case.s, arithmetic.values
                    )));
                }
            }
            ManifoldClass::LSpace => {
                // the walk route (canonical vector leaving the box) found no
                // structures, so the arithmetic route must come back empty
                if !arithmetic.values.is_empty() {
                    return Err(Error::Consistency(format!(
                        "{}: L-space with arithmetic twisting {:?}",
                        case.s, arithmetic.values
                    )));
                }
                if !case.report.realised.is_empty() || !case.report.structures.is_empty() {
                    return Err(Error::Consistency(format!(
                        "{}: L-space report carries realised vectors",
                        case.s
                    )));
                }
            }
            _ => continue,
        }
        cases += 1;
    }
    Ok(cases)
}

/// Suite (b): per-level structure counts versus the closed product formula.
fn suite_counts(corpus: &[Case]) -> Result<usize> {
    let mut cases = 0usize;
    for case in corpus {
        for (&tw, &count) in &case.report.counts_by_tw {
            match count_formula(&case.s, (-tw) as u64) {
                Ok(formula) => {
                    if formula != count.into() {
                        return Err(Error::Consistency(format!(
                            "{}: {count} structures at tw {tw} but the product formula gives {formula}",
                            case.s
                        )));
                    }
                    cases += 1;
                }
                Err(Error::Unsupported(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(cases)
}

/// Suite (c): every height call recomputes the spread through the pair
/// functional internally; exercise it on stored groups and random pairs.
fn suite_height_forms(corpus: &[Case], rng: &mut ChaCha8Rng) -> Result<usize> {
    let mut cases = 0usize;
    for case in corpus {
        for g in &case.report.groups {
            let paths: Vec<&FullPath> =
                g.members.iter().map(|&i| &case.report.realised[i].path).collect();
            if paths.is_empty() {
                continue;
            }
            let single = case.lat.height(&[paths[0]])?;
            if single < 0 {
                return Err(Error::Consistency(format!(
                    "{}: negative height {single}",
                    case.s
                )));
            }
            cases += 1;
            if paths.len() >= 2 {
                let spread = case.lat.height(&[paths[0], paths[paths.len() - 1]])?;
                if Some(spread) != g.combined_height {
                    return Err(Error::Consistency(format!(
                        "{}: stored combined height {:?} vs recomputed {spread}",
                        case.s, g.combined_height
                    )));
                }
                cases += 1;
                let i = rng.gen_range(0..paths.len());
                let j = rng.gen_range(0..paths.len());
                case.lat.height(&[paths[i], paths[j]])?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn random_initial(lat: &Lattice, rng: &mut ChaCha8Rng) -> CharVector {
    let m = lat.graph().framings();
    let coords = m
        .iter()
        .map(|&mi| {
            let slots = (-mi) as i64; // values m+2, m+4, ..., -m
            if slots == 0 {
                // zero framing pins the coordinate: the box is {0}
                0
            } else {
                mi + 2 * rng.gen_range(1..=slots)
            }
        })
        .collect();
    CharVector::new(coords)
}

/// Suite (d): the walk's verdict and terminal data do not depend on the
/// order admissible vertices are pushed.
fn suite_order_invariance(corpus: &[Case], rng: &mut ChaCha8Rng) -> Result<usize> {
    let mut cases = 0usize;
    let mut lattices: Vec<(String, Lattice)> = corpus
        .iter()
        .map(|c| (c.s.to_string(), Lattice::from_invariants(&c.s)))
        .map(|(name, lat)| lat.map(|l| (name, l)))
        .collect::<Result<_>>()?;
    for model in torus_bundle_models() {
        let graph = StarGraph::new(model.e0, model.legs.clone())?;
        lattices.push((model.name.to_string(), Lattice::new(graph)?));
    }
    for (name, lat) in &lattices {
        // a zero centre framing (always an L-space) puts V_can outside the
        // box, where the walk is undefined; random starts stay valid
        let mut starts = Vec::new();
        if lat.in_box(&lat.canonical_vector()) {
            starts.push(lat.canonical_vector());
        }
        for _ in 0..2 {
            starts.push(random_initial(lat, rng));
        }
        for start in starts {
            let plain = lat.full_path(&start)?;
            let mut order_rng = ChaCha8Rng::seed_from_u64(rng.gen());
            let shuffled =
                lat.full_path_with(&start, |open| order_rng.gen_range(0..open.len()))?;
            let agree = plain.ends_correctly == shuffled.ends_correctly
                && plain.terminal == shuffled.terminal
                && (!plain.ends_correctly
                    || plain.has_loop
                    || (plain.min_alex_vector == shuffled.min_alex_vector
                        && plain.max_alex_vector == shuffled.max_alex_vector
                        && plain.maslov == shuffled.maslov
                        && plain.central_steps == shuffled.central_steps));
            if !agree {
                return Err(Error::Consistency(format!(
                    "{name}: walk from {start} depends on push order ({:?} vs {:?})",
                    plain.terminal, shuffled.terminal
                )));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Suite (e): the Maslov grading is constant along an independently
/// re-derived orbit, and conjugation is an M-preserving involution that
/// negates labels.
fn suite_maslov_conjugation(corpus: &[Case]) -> Result<usize> {
    let mut cases = 0usize;
    for case in corpus {
        for rv in &case.report.realised {
            let p = &rv.path;
            if p.has_loop || p.visited_count > ORBIT_CAP {
                continue;
            }
            let Some(orbit) = raw_orbit(&case.lat, &p.initial, ORBIT_CAP)? else {
                continue;
            };
            if orbit.len() != p.visited_count {
                return Err(Error::Consistency(format!(
                    "{}: walk visited {} vectors, independent orbit has {}",
                    case.s,
                    p.visited_count,
                    orbit.len()
                )));
            }
            if Some(orbit.last().expect("nonempty")) != p.terminal.as_ref() {
                return Err(Error::Consistency(format!(
                    "{}: terminal {:?} vs independent orbit end {}",
                    case.s,
                    p.terminal,
                    orbit.last().expect("nonempty")
                )));
            }
            let m0 = case.lat.maslov(&orbit[0])?;
            for z in &orbit[1..] {
                let mz = case.lat.maslov(z)?;
                if mz != m0 {
                    return Err(Error::Consistency(format!(
                        "{}: Maslov drifts along the orbit, {} at {} vs {} at start",
                        case.s,
                        fmt_rational(&mz),
                        z,
                        fmt_rational(&m0)
                    )));
                }
            }
            let conj_start = p.conjugate_initial()?;
            let conj = case.lat.full_path(&conj_start)?;
            if !conj.ends_correctly || conj.maslov != p.maslov {
                return Err(Error::Consistency(format!(
                    "{}: conjugate of {} has maslov {:?}, original {:?}",
                    case.s, p.initial, conj.maslov, p.maslov
                )));
            }
            if conj.conjugate_initial()? != p.initial {
                return Err(Error::Consistency(format!(
                    "{}: conjugation fails to be an involution at {}",
                    case.s, p.initial
                )));
            }
            if !case.lat.same_spin_c(&conj_start, &p.initial.negated())? {
                return Err(Error::Consistency(format!(
                    "{}: conjugate label of {} is not the negated label",
                    case.s, p.initial
                )));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Suite (f): the fibre functional's signs follow the definiteness, and the
/// canonical vector is Alexander-extremal among sampled initial vectors.
fn suite_functional_signs(corpus: &[Case], rng: &mut ChaCha8Rng) -> Result<usize> {
    let mut cases = 0usize;
    for case in corpus {
        let row0 = fibre_functional(&case.lat)?;
        let definiteness = case.lat.form().definiteness();
        let sign_ok = match definiteness {
            Definiteness::NegativeDefinite => row0.iter().all(|x| x < &Rational::zero()),
            Definiteness::Indefinite => row0.iter().all(|x| x > &Rational::zero()),
            Definiteness::Singular => {
                return Err(Error::Contract("singular lattice in the invertible corpus".into()))
            }
        };
        if !sign_ok {
            return Err(Error::Consistency(format!(
                "{}: fibre functional signs disagree with {definiteness:?}",
                case.s
            )));
        }
        let can = case.lat.canonical_vector();
        if !case.lat.in_box(&can) {
            // zero centre framing: the canonical vector leaves the box and
            // bounds nothing there
            cases += 1;
            continue;
        }
        let f_can = case.lat.alexander(&can)?;
        for _ in 0..40 {
            let v = random_initial(&case.lat, rng);
            if v == can {
                continue;
            }
            let f = case.lat.alexander(&v)?;
            let extremal = match definiteness {
                Definiteness::NegativeDefinite => f_can > f,
                _ => f_can < f,
            };
            if !extremal {
                return Err(Error::Consistency(format!(
                    "{}: F(canonical) = {} is not extremal against F({v}) = {}",
                    case.s,
                    fmt_rational(&f_can),
                    fmt_rational(&f)
                )));
            }
        }
        cases += 1;
    }
    Ok(cases)
}

/// Suite (g): both closed tau formulas against a brute-force functional scan
/// over independently re-derived orbits.
fn suite_tau_orbits(corpus: &[Case]) -> Result<usize> {
    let mut cases = 0usize;
    for case in corpus {
        if initial_box_size(&case.lat) > 3000 {
            continue;
        }
        let row0 = fibre_functional(&case.lat)?;
        let lead = row0[0].abs();
        let value = |z: &CharVector| (lead.clone() + dot_row(&row0, z)) / rat_int(2);
        let basis = case.lat.enumerate_basis(None)?;
        let mut classes: BTreeMap<(String, String), Vec<&FullPath>> = BTreeMap::new();
        for p in &basis {
            let key = (
                p.spinc.to_string(),
                p.maslov.as_ref().map(fmt_rational).unwrap_or_default(),
            );
            classes.entry(key).or_default().push(p);
        }
        for members in classes.values().take(8) {
            if members.iter().any(|p| p.has_loop || p.visited_count > ORBIT_CAP) {
                continue;
            }
            let mut per_member_min = Vec::new();
            for p in members {
                let Some(orbit) = raw_orbit(&case.lat, &p.initial, ORBIT_CAP)? else {
                    continue;
                };
                let values: Vec<Rational> = orbit.iter().map(&value).collect();
                let vmin = values.iter().min().expect("nonempty").clone();
                let vmax = values.iter().max().expect("nonempty").clone();
                if values[0] != vmin || values[values.len() - 1] != vmax {
                    return Err(Error::Consistency(format!(
                        "{}: functional is not monotone along the orbit of {}",
                        case.s, p.initial
                    )));
                }
                per_member_min.push(vmin);
            }
            if per_member_min.len() != members.len() {
                continue;
            }
            let graph_tau = case.lat.tau(members, TauSide::Graph)?;
            let dual_tau = case.lat.tau(members, TauSide::DualFunctional)?;
            let brute_graph = per_member_min.iter().max().expect("nonempty").clone();
            let brute_dual = -per_member_min.iter().min().expect("nonempty").clone();
            if graph_tau != brute_graph || dual_tau != brute_dual {
                return Err(Error::Consistency(format!(
                    "{}: tau formulas ({}, {}) vs orbit scan ({}, {})",
                    case.s,
                    fmt_rational(&graph_tau),
                    fmt_rational(&dual_tau),
                    fmt_rational(&brute_graph),
                    fmt_rational(&brute_dual)
                )));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Suite (h): inside every pyramid class the realised vectors form an
/// arithmetic progression, with one step vector for the whole manifold.
fn suite_pyramid_steps(corpus: &[Case]) -> Result<usize> {
    let opts = ClassifyOptions::default();
    let mut reports: Vec<(String, ClassificationReport)> = Vec::new();
    for case in corpus {
        if matches!(case.report.class, ManifoldClass::TypeB { .. }) {
            reports.push((case.s.to_string(), case.report.clone()));
        }
    }
    let table2 =
        SeifertInvariants::new(-2, vec![rat(1, 2), rat(1, 2), rat(4, 7), rat(6, 11)])?;
    reports.push(("table2".into(), classify(&table2, &opts)?));
    for m in [13i64, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47, 49] {
        let s = brieskorn(&[2, 3, m], true)?;
        let report = classify(&s, &opts)?;
        if !matches!(report.class, ManifoldClass::TypeB { .. }) {
            return Err(Error::Consistency(format!(
                "Brieskorn (2,3,{m}) reversed classified as {:?}",
                report.class
            )));
        }
        reports.push((s.to_string(), report));
    }

    let mut cases = 0usize;
    for (name, report) in &reports {
        let mut manifold_step: Option<Vec<i64>> = None;
        for g in &report.groups {
            for pair in g.members.windows(2) {
                let a = report.realised[pair[0]].vector.coords();
                let b = report.realised[pair[1]].vector.coords();
                let diff: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
                match &manifold_step {
                    None => manifold_step = Some(diff),
                    Some(step) if step == &diff => {}
                    Some(step) => {
                        return Err(Error::Consistency(format!(
                            "{name}: pyramid steps differ, {step:?} vs {diff:?}"
                        )));
                    }
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// Suite (i): the closed-form surgery prediction against the full pipeline
/// on a seeded slope grid for four torus knots.
fn suite_surgery_prediction(rng: &mut ChaCha8Rng) -> Result<usize> {
    let opts = ClassifyOptions::default();
    let mut cases = 0usize;
    for (d2, d1, positive) in [
        (3i64, 4i64, true),
        (2, 3, true),
        (2, 3, false),
        (3, 4, false),
        (2, 5, true),
        (2, 5, false),
        (3, 5, true),
        (3, 5, false),
    ] {
        let mut compared = 0usize;
        let mut attempts = 0usize;
        let mut seen = std::collections::BTreeSet::new();
        while compared < 20 {
            attempts += 1;
            if attempts > 600 {
                return Err(Error::Contract(format!(
                    "slope grid starved for ({d2},{d1},{positive})"
                )));
            }
            let den = rng.gen_range(1..=5i64);
            let num = rng.gen_range(-3 * d1 * d2 * den..=3 * d1 * d2 * den);
            let r = rat(num, den);
            if r.clone().abs() == rat_int(d1 * d2) || !seen.insert((num, den)) {
                continue;
            }
            let s = match torus_knot_surgery(d2, d1, positive, &r) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let predicted = predict_torus_surgery(d2, d1, positive, &r, 8)?;
            let pipeline = match classify(&s, &opts) {
                Ok(report) => report.twisting_set,
                Err(Error::Unsupported(_)) => continue,
                Err(e) => return Err(e),
            };
            if predicted.values != pipeline.values
                || predicted.truncated != pipeline.truncated
                || predicted.period != pipeline.period
            {
                return Err(Error::Consistency(format!(
                    "surgery {r} on ({d2},{d1},{positive}): prediction {:?} vs pipeline {:?}",
                    predicted.values, pipeline.values
                )));
            }
            compared += 1;
            cases += 1;
        }
    }
    Ok(cases)
}

/// Runs all nine suites over a fresh corpus of `corpus_size` random
/// manifolds. Deterministic for a fixed `(seed, corpus_size)` pair.
pub fn run_check(seed: u64, corpus_size: usize) -> Result<CheckRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus = build_corpus(&mut rng, corpus_size)?;
    let mut outcomes = Vec::new();
    outcomes.push(SuiteOutcome {
        name: "twisting-routes",
        cases: suite_twisting_routes(&corpus)?,
    });
    outcomes.push(SuiteOutcome {
        name: "count-products",
        cases: suite_counts(&corpus)?,
    });
    outcomes.push(SuiteOutcome {
        name: "height-forms",
        cases: suite_height_forms(&corpus, &mut rng)?,
    });
    outcomes.push(SuiteOutcome {
        name: "order-invariance",
        cases: suite_order_invariance(&corpus, &mut rng)?,
    });
    outcomes.push(SuiteOutcome {
        name: "maslov-conjugation",
        cases: suite_maslov_conjugation(&corpus)?,
    });
    outcomes.push(SuiteOutcome {
        name: "functional-signs",
        cases: suite_functional_signs(&corpus, &mut rng)?,
    });
    outcomes.push(SuiteOutcome {
        name: "tau-orbits",
        cases: suite_tau_orbits(&corpus)?,
    });
    outcomes.push(SuiteOutcome {
        name: "pyramid-steps",
        cases: suite_pyramid_steps(&corpus)?,
    });
    outcomes.push(SuiteOutcome {
        name: "surgery-prediction",
        cases: suite_surgery_prediction(&mut rng)?,
    });
    Ok(CheckRun {
        seed,
        corpus_size,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_run_is_deterministic_and_covers_every_suite() {
        let run = run_check(7, 6).unwrap();
        assert_eq!(run.outcomes.len(), 9);
        for outcome in &run.outcomes {
            assert!(outcome.cases > 0, "{} ran no cases", outcome.name);
        }
        let again = run_check(7, 6).unwrap();
        let counts: Vec<usize> = run.outcomes.iter().map(|o| o.cases).collect();
        let counts_again: Vec<usize> = again.outcomes.iter().map(|o| o.cases).collect();
        assert_eq!(counts, counts_again);
    }
}
