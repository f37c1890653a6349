//! Acceptance gate: one test per published claim the artifact must reproduce,
//! so the harness prints one pass/fail line for each.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use seifert_floer::contact::{
    classify, count_formula, ghiggini_massot, ClassificationReport, ClassifyOptions,
};
use seifert_floer::lattice::{is_l_space, CharVector, Lattice};
use seifert_floer::plumbing::{intersection_form, parse_manifold, SeifertInvariants};
use seifert_floer::report::{golden_fixtures, ReportDocument};
use seifert_floer::selftest::run_check;

fn invariants(expr: &str) -> SeifertInvariants {
    parse_manifold(expr)
        .expect("manifold grammar")
        .invariants()
        .expect("in-scope manifold")
}

fn classify_str(expr: &str) -> ClassificationReport {
    classify(&invariants(expr), &ClassifyOptions::default()).expect("classification")
}

fn tw_multiset(doc: &ReportDocument) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for s in &doc.structures {
        *out.entry(s.tw).or_insert(0) += 1;
    }
    out
}

#[test]
fn criterion_1_table_one_from_both_presentations() {
    let t0 = Instant::now();
    let surgery = classify_str("Surgery(T(3,4), 1/4)");
    let brieskorn = classify_str("-Sigma(3,4,47)");
    let elapsed = t0.elapsed();

    let doc_s = ReportDocument::from_classification(&surgery);
    let doc_b = ReportDocument::from_classification(&brieskorn);
    assert_eq!(doc_s, doc_b, "surgery and Brieskorn presentations disagree");

    assert_eq!(doc_s.realised.len(), 15);
    for v in &doc_s.realised {
        assert_eq!(&v[..4], &[1, 0, 0, -2], "realised vector prefix {v:?}");
    }
    assert_eq!(doc_s.structures.len(), 16);
    assert_eq!(
        tw_multiset(&doc_s),
        BTreeMap::from([(-7, 15), (-223, 1)]),
        "twisting multiset"
    );

    let first_label = &doc_s.spin_c_classes[0].spinc;
    assert!(
        doc_s.spin_c_classes.iter().all(|g| &g.spinc == first_label),
        "expected a single Spin^c class"
    );
    let mut groups: Vec<(String, usize, Option<i64>)> = doc_s
        .spin_c_classes
        .iter()
        .map(|g| {
            (
                g.d3.clone().expect("torsion grading"),
                g.members.len(),
                g.combined_height,
            )
        })
        .collect();
    groups.sort();
    let mut expected = vec![
        ("19".to_string(), 2, Some(222)),
        ("15".to_string(), 2, Some(198)),
        ("11".to_string(), 2, Some(174)),
        ("5".to_string(), 2, Some(126)),
        ("3".to_string(), 2, Some(102)),
        ("1".to_string(), 2, Some(78)),
        ("-1".to_string(), 3, Some(30)),
    ];
    expected.sort();
    assert_eq!(groups, expected, "(d3, size, combined height) per group");

    assert!(
        elapsed < Duration::from_secs(10),
        "both classifications took {elapsed:?}, budget 10 s single-threaded"
    );
}

#[test]
fn criterion_2_table_two_reproduction() {
    let s = invariants("M(-2; 1/2, 1/2, 4/7, 6/11)");
    let t0 = Instant::now();
    let rep = classify(&s, &ClassifyOptions::default()).expect("classification");
    let elapsed = t0.elapsed();
    let doc = ReportDocument::from_classification(&rep);

    let form = intersection_form(&rep.graph).expect("form");
    assert_eq!(form.det().magnitude().to_string(), "36", "|det Q|");

    assert_eq!(doc.spin_c_classes.len(), 7, "Spin^c classes with realised vectors");
    assert!(doc.spin_c_classes.iter().all(|g| !g.members.is_empty()));
    assert_eq!(doc.structures.len(), 26);

    for (q, expected) in [(1u64, 15i64), (3, 8), (5, 3)] {
        let count = count_formula(&s, q).expect("count formula");
        assert_eq!(count, BigInt::from(expected), "count at q = {q}");
    }

    let mut sizes: Vec<usize> = doc.spin_c_classes.iter().map(|g| g.members.len()).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(sizes, vec![3, 3, 3, 2, 2, 1, 1], "pyramid sizes");

    let mut d3s: Vec<String> = doc
        .spin_c_classes
        .iter()
        .map(|g| g.d3.clone().expect("torsion grading"))
        .collect();
    d3s.sort();
    let mut expected_d3: Vec<String> = ["5/36", "5/36", "1/4", "-7/36", "-7/36", "-3/4", "-3/4"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    expected_d3.sort();
    assert_eq!(d3s, expected_d3, "exact d3 fractions");

    assert!(
        elapsed < Duration::from_secs(10),
        "classification took {elapsed:?}, budget 10 s"
    );
}

#[test]
fn criterion_3_small_brieskorn_pyramid() {
    let doc = ReportDocument::from_classification(&classify_str("-Sigma(2,3,23)"));

    let mut realised = doc.realised.clone();
    realised.sort();
    assert_eq!(
        realised,
        vec![
            vec![1, 0, -1, -4, -2],
            vec![1, 0, -1, -4, 0],
            vec![1, 0, -1, -4, 2],
        ]
    );

    assert_eq!(doc.spin_c_classes.len(), 1, "one pyramid");
    assert_eq!(doc.spin_c_classes[0].members.len(), 3, "of size 3");
    assert_eq!(
        tw_multiset(&doc),
        BTreeMap::from([(-5, 3), (-11, 2), (-17, 1)])
    );

    // the deepest structure pairs the two outer vectors
    let apex: Vec<_> = doc
        .structures
        .iter()
        .filter(|s| s.kind == "pyramid(1,3;3)")
        .collect();
    assert_eq!(apex.len(), 1);
    assert_eq!(apex[0].coords, vec![0, 2], "contact invariant carried by V1, V3");
    assert_eq!(apex[0].tw, -17);
}

#[test]
fn criterion_4_torus_bundle_homology_fixtures() {
    for row in golden_fixtures().homology {
        let lat = Lattice::from_invariants(&invariants(row.manifold)).expect("lattice");
        for (i, (coords, grading)) in row.vectors.iter().enumerate() {
            let fp = lat
                .full_path(&CharVector::new(coords.clone()))
                .expect("walk");
            assert!(fp.ends_correctly, "{}: {coords:?} must end correctly", row.manifold);
            assert_eq!(
                fp.maslov.as_ref(),
                Some(grading),
                "{}: grading of {coords:?}",
                row.manifold
            );
            assert_eq!(
                fp.has_loop,
                i > 0,
                "{}: loop flag of {coords:?}",
                row.manifold
            );
        }
        let census = lat.enumerate_basis(None).expect("census");
        let torsion: Vec<_> = census
            .iter()
            .filter(|fp| fp.ends_correctly && fp.spinc.is_torsion())
            .collect();
        assert_eq!(
            torsion.len(),
            row.vectors.len(),
            "{}: torsion census size",
            row.manifold
        );
        assert_eq!(
            torsion.iter().filter(|fp| !fp.has_loop).count(),
            1,
            "{}: every class but the canonical one carries a loop",
            row.manifold
        );
    }
}

#[test]
fn criterion_5_l_space_verdicts() {
    let cases = [
        ("-Sigma(2,3,5)", true),
        ("-Sigma(2,3,7)", false),
        ("-Sigma(2,3,11)", false),
        ("-Sigma(3,4,47)", false),
        ("M(-2; 1/2, 1/2, 4/7, 6/11)", false),
        ("Surgery(T(3,4), 5)", true),
        ("Surgery(T(3,4), 49/10)", false),
    ];
    for (expr, expected) in cases {
        let rep = is_l_space(&invariants(expr)).expect("verdict");
        assert_eq!(rep.verdict, expected, "{expr}");
    }
}

#[test]
fn criterion_6_unique_and_absent_structures() {
    let cases = [
        ("Sigma(2,3,5)", 1usize),
        ("-Sigma(2,3,7)", 1),
        ("-Sigma(2,3,11)", 1),
        ("-Sigma(2,3,5)", 0),
    ];
    for (expr, expected) in cases {
        let rep = classify_str(expr);
        assert_eq!(rep.structures.len(), expected, "{expr}");
    }
}

#[test]
fn criterion_7_approximation_certificates() {
    let s = invariants("-Sigma(3,4,47)");
    let set = ghiggini_massot(&s, 8).expect("scan");
    assert_eq!(set.values, vec![-7, -223]);
    for (q, numerators) in [(7u64, [5i64, 2, 1]), (223, [149, 56, 19])] {
        let cert = set
            .certificates
            .iter()
            .find(|c| c.q == q)
            .unwrap_or_else(|| panic!("certificate at q = {q}"));
        let expected: Vec<BigInt> = numerators.iter().map(|&p| BigInt::from(p)).collect();
        assert_eq!(cert.numerators, expected, "numerators at q = {q}");
    }
    assert_eq!(count_formula(&s, 7).expect("count"), BigInt::from(15));
    assert_eq!(count_formula(&s, 223).expect("count"), BigInt::from(1));
}

#[test]
fn criterion_8_property_suites() {
    let t0 = Instant::now();
    let run = run_check(7, 30).expect("all property suites");
    let elapsed = t0.elapsed();
    assert_eq!(run.outcomes.len(), 9);
    for o in &run.outcomes {
        assert!(
            o.cases >= 30,
            "suite {} covered only {} cases",
            o.name,
            o.cases
        );
    }
    assert!(
        elapsed < Duration::from_secs(120),
        "suites took {elapsed:?}, budget 120 s"
    );
}
