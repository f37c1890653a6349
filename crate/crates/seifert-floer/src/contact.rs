//! Negative-twisting tight contact structures on small Seifert fibred
//! spaces: realised characteristic vectors, twisting numbers by two
//! independent routes, and the full classification report with structure
//! kinds, homotopy data, and fillability flags.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{is_l_space, CharVector, FullPath, Lattice, SpinCLabel};
use crate::numtheory::{
    best_upper_approx, big_to_i64, fmt_rational, rat_int, Rational,
};
use crate::plumbing::{
    s3_subgraph, torus_bundle_match, type_ab, DecompositionLabels, Definiteness, S3Kind,
    S3Subgraph, SeifertInvariants, StarGraph, TypeAB,
};

/// One vector admitted by the per-vertex coordinate ranges, together with
/// its walk and gradings.
#[derive(Debug, Clone)]
pub struct RealisedVector {
    pub vector: CharVector,
    pub path: FullPath,
    pub spinc: SpinCLabel,
    /// Absolute grading; absent exactly on non-torsion classes of singular
    /// lattices.
    pub maslov: Option<Rational>,
    /// Alexander value of the vector itself; needs an invertible form.
    pub alex: Option<Rational>,
    /// Index of the conjugate vector within the realised list.
    pub conj_partner: usize,
}

/// Realised vectors sharing a Spin^c label and an absolute grading, listed
/// in increasing Alexander order. The pair determines the homotopy type of
/// the corresponding structures.
#[derive(Debug, Clone)]
pub struct HomotopyClass {
    pub spinc: SpinCLabel,
    pub d3: Option<Rational>,
    /// Indices into the realised list, Alexander-increasing.
    pub members: Vec<usize>,
    /// Largest height of any pair of members (the extremal pair realises
    /// it); the class's own spread for singletons. Absent on singular
    /// lattices.
    pub combined_height: Option<i64>,
}

/// How a structure is presented. Indices under `BlowDown`/`PairA` point
/// into the realised list; `Pyramid` positions are 1-based within the
/// homotopy class of size `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureKind {
    BlowDown { vector: usize },
    PairA { first: usize, last: usize },
    Pyramid { i: usize, j: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureFlags {
    /// Apex of its homotopy class: the extremal pair (1, k).
    pub pyramidion: bool,
    /// Pyramid face pair: i = 1 < j < k or 1 < i < j = k.
    pub casing_stone: bool,
    /// Spin label and a coordinate set fixed by conjugation.
    pub self_conjugate: bool,
    /// Self-conjugate below the maximal twisting number.
    pub stein_obstructed: bool,
    pub stein_fillable: bool,
}

/// One tight contact structure with negative twisting number.
#[derive(Debug, Clone)]
pub struct ContactStructure {
    pub spinc: SpinCLabel,
    /// Absolute grading of the coordinate vectors.
    pub d3: Option<Rational>,
    pub tw: i64,
    pub kind: StructureKind,
    /// Realised-vector indices carrying the contact invariant.
    pub cplus_coords: Vec<usize>,
    pub flags: StructureFlags,
}

/// Coarse class of the classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldClass {
    NegDefinite,
    TypeA,
    TypeB { model: usize },
    Singular,
    SingularTorusBundle { model: usize },
    LSpace,
}

/// Per-q witness of the arithmetic twisting criterion: the leg numerators
/// that sum to -e0*q + n - 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwCertificate {
    pub q: u64,
    pub numerators: Vec<BigInt>,
}

/// Set of negative twisting numbers, sorted from closest to zero. Infinite
/// families are reported through a window with the continuation period.
#[derive(Debug, Clone, Default)]
pub struct TwistingSet {
    pub values: Vec<i64>,
    pub truncated: bool,
    pub period: Option<i64>,
    pub certificates: Vec<TwCertificate>,
    pub notes: Vec<String>,
}

impl TwistingSet {
    fn finite(mut values: Vec<i64>, certificates: Vec<TwCertificate>) -> TwistingSet {
        values.sort_unstable_by(|a, b| b.cmp(a));
        values.dedup();
        TwistingSet {
            values,
            truncated: false,
            period: None,
            certificates,
            notes: Vec::new(),
        }
    }

    /// Membership, extending a truncated window along its period.
    pub fn contains(&self, tw: i64) -> bool {
        if self.values.contains(&tw) {
            return true;
        }
        if !self.truncated {
            return false;
        }
        let (Some(period), Some(&deepest)) = (self.period, self.values.iter().min()) else {
            return false;
        };
        tw < deepest && (deepest - tw) % period == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Skipped,
}

/// One self-validation outcome embedded in the report. Failures never get
/// this far: they abort with a consistency error carrying both witnesses.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Knobs for `classify`.
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// How many members of an infinite twisting family to report.
    pub window: usize,
    /// Build per-class structures on a thread pool; output is identical.
    pub parallel: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            window: 8,
            parallel: false,
        }
    }
}

/// Everything the classification produced, ready for serialization.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub manifold: SeifertInvariants,
    pub graph: StarGraph,
    pub class: ManifoldClass,
    /// Maximal twisting number; absent for L-spaces and torus bundles.
    pub tw_bar: Option<i64>,
    pub realised: Vec<RealisedVector>,
    pub groups: Vec<HomotopyClass>,
    pub twisting_set: TwistingSet,
    pub structures: Vec<ContactStructure>,
    pub counts_by_tw: BTreeMap<i64, usize>,
    pub checks: Vec<CheckItem>,
    pub notes: Vec<String>,
}

/// Per-vertex coordinate windows for realised vectors. The pinned set, the
/// two designated continuation vertices, and the leg starts next to a -1
/// centre each get their own upper bound; everything else stays inside
/// [m+2, -m-2].
fn vertex_ranges(lat: &Lattice, sub: &S3Subgraph, labels: &DecompositionLabels) -> Vec<(i64, i64)> {
    let m = lat.framings();
    (0..lat.size())
        .map(|j| {
            let lo = m[j] + 2;
            let hi = if sub.members.contains(&j) {
                m[j] + 2
            } else if labels.gpp1 == Some(j) {
                -m[j] - 4
            } else if labels.gpp2 == Some(j) {
                -m[j] - 6 - 2 * labels.t_count as i64
            } else if labels.gpp.contains(&j) {
                -m[j] - 2 * sub.d1 - 2 * sub.d2
            } else {
                -m[j] - 2
            };
            (lo, hi)
        })
        .collect()
}

/// Enumerates the Cartesian product of the per-vertex ranges (step 2),
/// walks every vector, and annotates it with gradings and its conjugate
/// partner. Any of these vectors failing to end correctly is a bug or an
/// L-space leak, so it aborts. Empty ranges give an empty list.
pub fn realised_vectors(
    lat: &Lattice,
    sub: &S3Subgraph,
    labels: &DecompositionLabels,
) -> Result<Vec<RealisedVector>> {
    let ranges = vertex_ranges(lat, sub, labels);
    if ranges.iter().any(|&(lo, hi)| hi < lo) {
        return Ok(Vec::new());
    }
    let invertible = lat.form().qinv().is_some();
    let mut realised = Vec::new();
    let mut cursor: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
    loop {
        let vector = CharVector::new(cursor.clone());
        let path = lat.full_path(&vector)?;
        if !path.ends_correctly {
            return Err(Error::Consistency(format!(
                "range vector {vector} does not end correctly; ranges {ranges:?}"
            )));
        }
        let alex = if invertible {
            Some(lat.alexander(&vector)?)
        } else {
            None
        };
        realised.push(RealisedVector {
            spinc: path.spinc.clone(),
            maslov: path.maslov.clone(),
            alex,
            conj_partner: usize::MAX,
            vector,
            path,
        });
        // odometer over the ranges
        let mut j = ranges.len();
        loop {
            if j == 0 {
                break;
            }
            j -= 1;
            if cursor[j] + 2 <= ranges[j].1 {
                cursor[j] += 2;
                break;
            }
            cursor[j] = ranges[j].0;
            if j == 0 {
                j = usize::MAX;
                break;
            }
        }
        if j == usize::MAX {
            break;
        }
    }
    realised.sort_by(|a, b| {
        a.spinc
            .cmp(&b.spinc)
            .then_with(|| b.maslov.cmp(&a.maslov))
            .then_with(|| a.alex.cmp(&b.alex))
            .then_with(|| a.vector.cmp(&b.vector))
    });
    assign_conjugates(lat, &mut realised, invertible)?;
    Ok(realised)
}

/// Fills `conj_partner`: on invertible lattices the conjugate vector is the
/// negated terminal of the walk; on singular ones classes are matched by
/// the representative of the walk started at the negated vector.
fn assign_conjugates(lat: &Lattice, realised: &mut [RealisedVector], invertible: bool) -> Result<()> {
    if invertible {
        let by_vector: HashMap<&CharVector, usize> = realised
            .iter()
            .enumerate()
            .map(|(i, rv)| (&rv.vector, i))
            .collect();
        let mut partners = Vec::with_capacity(realised.len());
        for rv in realised.iter() {
            let conj = rv.path.conjugate_initial()?;
            let &j = by_vector.get(&conj).ok_or_else(|| {
                Error::Consistency(format!(
                    "realised set is not closed under conjugation: {} maps to {conj}",
                    rv.vector
                ))
            })?;
            partners.push(j);
        }
        for (rv, j) in realised.iter_mut().zip(partners) {
            rv.conj_partner = j;
        }
        for (i, rv) in realised.iter().enumerate() {
            if realised[rv.conj_partner].conj_partner != i {
                return Err(Error::Consistency(format!(
                    "conjugation is not an involution at {}",
                    rv.vector
                )));
            }
        }
    } else {
        let by_rep: HashMap<CharVector, usize> = realised
            .iter()
            .enumerate()
            .map(|(i, rv)| (rv.path.representative.clone(), i))
            .collect();
        let mut partners = Vec::with_capacity(realised.len());
        for rv in realised.iter() {
            let neg = lat.full_path(&rv.vector.negated())?;
            let &j = by_rep.get(&neg.representative).ok_or_else(|| {
                Error::Consistency(format!(
                    "realised set is not closed under conjugation: {} has no class partner",
                    rv.vector
                ))
            })?;
            partners.push(j);
        }
        for (rv, j) in realised.iter_mut().zip(partners) {
            rv.conj_partner = j;
        }
    }
    Ok(())
}

/// Splits the (sorted) realised list into homotopy classes keyed by
/// Spin^c label and grading.
fn group_realised(realised: &[RealisedVector]) -> Vec<HomotopyClass> {
    let mut groups: Vec<HomotopyClass> = Vec::new();
    for (i, rv) in realised.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if g.spinc == rv.spinc && g.d3 == rv.maslov => g.members.push(i),
            _ => groups.push(HomotopyClass {
                spinc: rv.spinc.clone(),
                d3: rv.maslov.clone(),
                members: vec![i],
                combined_height: None,
            }),
        }
    }
    groups
}

/// Maximal twisting number: -d1-d2 when the blow-downable subgraph carries
/// a torus-knot fibration, -1 when it is empty. Cross-asserted against the
/// canonical walk (its height, or its centre-push count when the form is
/// singular).
pub fn tw_bar(lat: &Lattice, sub: &S3Subgraph) -> Result<i64> {
    let graph_side = match sub.kind {
        S3Kind::Empty => -1,
        _ => -(sub.d1 + sub.d2),
    };
    let pcan = lat.full_path(&lat.canonical_vector())?;
    if !pcan.ends_correctly {
        return Err(Error::Contract(
            "maximal twisting number of an L-space (canonical walk fails)".into(),
        ));
    }
    let walk_side = match lat.form().definiteness() {
        Definiteness::Singular => -1 - i64::try_from(pcan.central_steps).unwrap_or(i64::MAX),
        _ => -1 - lat.height(&[&pcan])?,
    };
    if graph_side != walk_side {
        return Err(Error::Consistency(format!(
            "maximal twisting number mismatch: subgraph gives {graph_side}, canonical walk gives {walk_side}"
        )));
    }
    Ok(graph_side)
}

/// Leg numerators certifying q, when every leg admits a best upper
/// approximation and they sum to -e0*q + n - 2.
fn gm_hit(s: &SeifertInvariants, q: u64) -> Result<Option<Vec<BigInt>>> {
    let mut sum = BigInt::zero();
    let mut numerators = Vec::with_capacity(s.arity());
    for r in s.coefficients() {
        match best_upper_approx(r, q)? {
            Some(p) => {
                sum += &p;
                numerators.push(p);
            }
            None => return Ok(None),
        }
    }
    let needed = BigInt::from(-s.e0()) * BigInt::from(q) + BigInt::from(s.arity() as i64 - 2);
    Ok((sum == needed).then_some(numerators))
}

fn coefficient_denominators(s: &SeifertInvariants) -> Result<Vec<i64>> {
    s.coefficients().iter().map(|r| big_to_i64(r.denom())).collect()
}

/// Twisting numbers by the arithmetic criterion: scan q >= 2 for legs whose
/// best upper approximations sum to -e0*q + n - 2, and add -1 exactly when
/// e0 <= -2. Negative-definite inputs return their unique maximal twisting
/// number directly; Euler number zero is scanned to a finite cap, with
/// torus-bundle rays reported through `window` and their period.
pub fn ghiggini_massot(s: &SeifertInvariants, window: usize) -> Result<TwistingSet> {
    let e = s.euler_number();
    let n = s.arity();
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "{n} exceptional fibres; the twisting criterion needs at least three"
        )));
    }
    if e.is_negative() {
        let lat = Lattice::from_invariants(s)?;
        let sub = s3_subgraph(lat.graph())?;
        let tb = tw_bar(&lat, &sub)?;
        let mut set = TwistingSet::finite(vec![tb], Vec::new());
        if tb <= -2 {
            match gm_hit(s, (-tb) as u64)? {
                Some(numerators) => set.certificates.push(TwCertificate {
                    q: (-tb) as u64,
                    numerators,
                }),
                None => set.notes.push(format!(
                    "negative-definite: no per-leg certificate at q = {}",
                    -tb
                )),
            }
        } else {
            set.notes.push("negative-definite: -1 by the centre-framing rule".into());
        }
        return Ok(set);
    }

    let minus_one = (s.e0() <= -2).then_some(-1i64);
    if e.is_zero() {
        let denoms = coefficient_denominators(s)?;
        let modulus = denoms.iter().fold(1i64, |acc, &d| acc.lcm(&d));
        let cap = 2 * modulus + denoms.iter().max().copied().unwrap_or(1);
        let graph = crate::plumbing::standard_graph(s)?;
        let mut hits = Vec::new();
        let mut certificates = Vec::new();
        for q in 2..=(cap as u64) {
            if let Some(numerators) = gm_hit(s, q)? {
                hits.push(q as i64);
                certificates.push(TwCertificate { q, numerators });
            }
        }
        if torus_bundle_match(&graph).is_some() {
            let Some(&q0) = hits.first() else {
                return Err(Error::Consistency(
                    "torus-bundle graph without an arithmetic twisting ray".into(),
                ));
            };
            if hits.iter().enumerate().any(|(k, &q)| q != q0 + (k as i64) * modulus) {
                return Err(Error::Consistency(format!(
                    "torus-bundle hits {hits:?} are not the ray {q0} + {modulus}k"
                )));
            }
            let mut values: Vec<i64> = minus_one.into_iter().collect();
            let mut certificates = Vec::new();
            for k in 0..window as i64 {
                let q = (q0 + k * modulus) as u64;
                let Some(numerators) = gm_hit(s, q)? else {
                    return Err(Error::Consistency(format!(
                        "twisting ray member q = {q} fails the sum condition"
                    )));
                };
                values.push(-(q as i64));
                certificates.push(TwCertificate { q, numerators });
            }
            return Ok(TwistingSet {
                values,
                truncated: true,
                period: Some(modulus),
                certificates,
                notes: vec!["infinite family: window truncated".into()],
            });
        }
        if hits.len() > 1 {
            return Err(Error::Consistency(format!(
                "singular non-bundle graph with several twisting hits {hits:?}"
            )));
        }
        let mut values: Vec<i64> = minus_one.into_iter().collect();
        values.extend(hits.iter().map(|&q| -q));
        return Ok(TwistingSet::finite(values, certificates));
    }

    // e > 0: q < (n - 2)/e bounds the scan.
    let bound = (rat_int(n as i64 - 2) / e).ceil().to_integer();
    let bound = big_to_i64(&bound)?;
    let mut values: Vec<i64> = minus_one.into_iter().collect();
    let mut certificates = Vec::new();
    for q in 2..bound.max(2) as u64 {
        if let Some(numerators) = gm_hit(s, q)? {
            values.push(-(q as i64));
            certificates.push(TwCertificate { q, numerators });
        }
    }
    Ok(TwistingSet::finite(values, certificates))
}

/// Twisting numbers from walk heights: the canonical class gives the
/// maximum, and each other member of its homotopy class contributes
/// -1 - height of the combined pair.
pub fn twisting_numbers_via_heights(
    lat: &Lattice,
    realised: &[RealisedVector],
    groups: &[HomotopyClass],
) -> Result<Vec<i64>> {
    if realised.is_empty() {
        return Ok(Vec::new());
    }
    let can = lat.canonical_vector();
    let can_idx = realised
        .iter()
        .position(|rv| rv.vector == can)
        .ok_or_else(|| {
            Error::Consistency(format!("canonical vector {can} is not in the realised set"))
        })?;
    let pcan = &realised[can_idx].path;
    let mut out = vec![-1 - lat.height(&[pcan])?];
    let group = groups
        .iter()
        .find(|g| g.members.contains(&can_idx))
        .expect("every realised index lies in a group");
    for &l in &group.members {
        if l == can_idx {
            continue;
        }
        out.push(-1 - lat.height(&[pcan, &realised[l].path])?);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out.dedup();
    Ok(out)
}

/// C(n, k) parity by digit domination.
fn binom_odd(n: usize, k: usize) -> bool {
    n & k == k
}

fn push_check(checks: &mut Vec<CheckItem>, name: &str, status: CheckStatus, detail: String) {
    checks.push(CheckItem {
        name: name.to_string(),
        status,
        detail,
    });
}

/// Flags shared by every structure kind.
fn structure_flags(
    is_blowdown: bool,
    pyramidion: bool,
    casing_stone: bool,
    tw: i64,
    tb: i64,
    spin: bool,
    coords: &[usize],
    realised: &[RealisedVector],
) -> StructureFlags {
    let set: BTreeSet<usize> = coords.iter().copied().collect();
    let mapped: BTreeSet<usize> = coords.iter().map(|&c| realised[c].conj_partner).collect();
    let self_conjugate = spin && set == mapped;
    StructureFlags {
        pyramidion,
        casing_stone,
        self_conjugate,
        stein_obstructed: tw < tb && self_conjugate,
        stein_fillable: is_blowdown,
    }
}

fn blowdown_structures(
    realised: &[RealisedVector],
    lat: &Lattice,
    tb: i64,
) -> Result<Vec<ContactStructure>> {
    realised
        .iter()
        .enumerate()
        .map(|(i, rv)| {
            let spin = lat.is_spin(&rv.vector)?;
            Ok(ContactStructure {
                spinc: rv.spinc.clone(),
                d3: rv.maslov.clone(),
                tw: tb,
                kind: StructureKind::BlowDown { vector: i },
                cplus_coords: vec![i],
                flags: structure_flags(true, false, false, tb, tb, spin, &[i], realised),
            })
        })
        .collect()
}

/// Extra structures of one homotopy class on a type A manifold: at most the
/// extremal pair, and only when its height lands on a twisting number below
/// the maximum.
fn type_a_group(
    lat: &Lattice,
    realised: &[RealisedVector],
    group: &HomotopyClass,
    spin: bool,
    tb: i64,
    set: &TwistingSet,
) -> Result<Vec<ContactStructure>> {
    let k = group.members.len();
    if k < 2 {
        return Ok(Vec::new());
    }
    let first = group.members[0];
    let last = group.members[k - 1];
    let tw = -1 - lat.height(&[&realised[first].path, &realised[last].path])?;
    if !(tw < tb && set.contains(tw)) {
        return Ok(Vec::new());
    }
    let coords = vec![first, last];
    Ok(vec![ContactStructure {
        spinc: group.spinc.clone(),
        d3: group.d3.clone(),
        tw,
        kind: StructureKind::PairA { first, last },
        flags: structure_flags(false, true, false, tw, tb, spin, &coords, realised),
        cplus_coords: coords,
    }])
}

/// Extra structures of one homotopy class on a type B manifold: every pair
/// i < j forms a pyramid member whose coordinates follow binomial parity.
fn type_b_group(
    lat: &Lattice,
    realised: &[RealisedVector],
    group: &HomotopyClass,
    spin: bool,
    tb: i64,
) -> Result<Vec<ContactStructure>> {
    let k = group.members.len();
    if k >= 2 {
        // consecutive members differ by one constant vector
        let step: Vec<i64> = diff(realised, group.members[1], group.members[0]);
        for w in group.members.windows(2).skip(1) {
            if diff(realised, w[1], w[0]) != step {
                return Err(Error::Consistency(format!(
                    "homotopy class members are not an arithmetic progression: {} vs {}",
                    realised[w[1]].vector, realised[w[0]].vector
                )));
            }
        }
    }
    let mut out = Vec::new();
    for i in 1..=k {
        for j in (i + 1)..=k {
            let vi = group.members[i - 1];
            let vj = group.members[j - 1];
            let tw = -1 - lat.height(&[&realised[vi].path, &realised[vj].path])?;
            let coords: Vec<usize> = (i..=j)
                .filter(|&l| binom_odd(j - i, l - i))
                .map(|l| group.members[l - 1])
                .collect();
            let pyramidion = (i, j) == (1, k);
            let casing = (i == 1 && 1 < j && j < k) || (1 < i && j == k && i < k);
            out.push(ContactStructure {
                spinc: group.spinc.clone(),
                d3: group.d3.clone(),
                tw,
                kind: StructureKind::Pyramid { i, j, k },
                flags: structure_flags(false, pyramidion, casing, tw, tb, spin, &coords, realised),
                cplus_coords: coords,
            });
        }
    }
    // twisting numbers drop strictly as pairs spread apart
    for a in &out {
        for b in &out {
            let (StructureKind::Pyramid { i, j, .. }, StructureKind::Pyramid { i: i2, j: j2, .. }) =
                (&a.kind, &b.kind)
            else {
                unreachable!()
            };
            if j - i < j2 - i2 && a.tw <= b.tw {
                return Err(Error::Consistency(format!(
                    "pyramid twisting numbers are not monotone: ({i},{j}) at {} vs ({i2},{j2}) at {}",
                    a.tw, b.tw
                )));
            }
        }
    }
    Ok(out)
}

fn diff(realised: &[RealisedVector], a: usize, b: usize) -> Vec<i64> {
    realised[a]
        .vector
        .coords()
        .iter()
        .zip(realised[b].vector.coords())
        .map(|(x, y)| x - y)
        .collect()
}

/// Structure list must map to itself under conjugation of coordinates.
fn check_conjugation_symmetry(
    structures: &[ContactStructure],
    realised: &[RealisedVector],
) -> Result<()> {
    for s in structures {
        let mapped: BTreeSet<usize> = s
            .cplus_coords
            .iter()
            .map(|&c| realised[c].conj_partner)
            .collect();
        let found = structures.iter().any(|t| {
            t.tw == s.tw && t.cplus_coords.iter().copied().collect::<BTreeSet<_>>() == mapped
        });
        if !found {
            return Err(Error::Consistency(format!(
                "structure list is not conjugation symmetric at tw {} coords {:?}",
                s.tw, s.cplus_coords
            )));
        }
    }
    Ok(())
}

/// Count check at every finite twisting number of the report.
fn check_counts(
    s: &SeifertInvariants,
    graph: &StarGraph,
    counts: &BTreeMap<i64, usize>,
    checks: &mut Vec<CheckItem>,
) -> Result<()> {
    for (&tw, &n) in counts {
        let q = (-tw) as u64;
        match count_inner(s, graph, q)? {
            Some(expected) => {
                if expected != BigInt::from(n) {
                    return Err(Error::Consistency(format!(
                        "count mismatch at q = {q}: formula gives {expected}, classification lists {n}"
                    )));
                }
                push_check(
                    checks,
                    &format!("count-q{q}"),
                    CheckStatus::Pass,
                    format!("{n} structures"),
                );
            }
            None => push_check(
                checks,
                &format!("count-q{q}"),
                CheckStatus::Skipped,
                "no per-leg upper approximation at this q".into(),
            ),
        }
    }
    Ok(())
}

/// Full classification pipeline.
pub fn classify(s: &SeifertInvariants, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    if s.arity() < 3 {
        return Err(Error::Unsupported(format!(
            "{} exceptional fibres normalize below three; lens spaces and simpler are out of scope",
            s.arity()
        )));
    }
    let lat = Lattice::from_invariants(s)?;
    let graph = lat.graph().clone();
    let sub = s3_subgraph(&graph)?;
    let labels = crate::plumbing::decomposition_labels(&graph, &sub);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    if labels.convention_warning {
        notes.push("convention-sensitive ranges (degenerate first/second leg)".into());
    }
    let lsr = is_l_space(s)?;
    let definiteness = lat.form().definiteness();

    if definiteness == Definiteness::Indefinite && lsr.verdict {
        push_check(
            &mut checks,
            "l-space",
            CheckStatus::Pass,
            "canonical walk leaves the box; no negative-twisting structures".into(),
        );
        return Ok(ClassificationReport {
            manifold: s.clone(),
            graph,
            class: ManifoldClass::LSpace,
            tw_bar: None,
            realised: Vec::new(),
            groups: Vec::new(),
            twisting_set: TwistingSet::default(),
            structures: Vec::new(),
            counts_by_tw: BTreeMap::new(),
            checks,
            notes,
        });
    }

    let realised = realised_vectors(&lat, &sub, &labels)?;
    let mut groups = group_realised(&realised);
    push_check(
        &mut checks,
        "realised-walks",
        CheckStatus::Pass,
        format!("{} vectors end correctly", realised.len()),
    );
    let total: usize = groups.iter().map(|g| g.members.len()).sum();
    if total != realised.len() {
        return Err(Error::Consistency(format!(
            "group partition covers {total} of {} realised vectors",
            realised.len()
        )));
    }
    if lat.form().qinv().is_some() {
        // within a group the Alexander order is total, so the extremal pair
        // realises the largest pairwise height
        for g in &mut groups {
            let first = &realised[g.members[0]].path;
            let paths = match g.members.len() {
                1 => vec![first],
                _ => vec![first, &realised[*g.members.last().unwrap()].path],
            };
            g.combined_height = Some(lat.height(&paths)?);
        }
    }

    let (class, tb, twisting_set, structures) = match definiteness {
        Definiteness::NegativeDefinite => {
            let tb = tw_bar(&lat, &sub)?;
            let set = ghiggini_massot(s, opts.window)?;
            if set.values != vec![tb] {
                return Err(Error::Consistency(format!(
                    "negative-definite twisting sets disagree: {:?} vs [{tb}]",
                    set.values
                )));
            }
            let structures = blowdown_structures(&realised, &lat, tb)?;
            (ManifoldClass::NegDefinite, Some(tb), set, structures)
        }
        Definiteness::Singular => {
            if let Some(model) = torus_bundle_match(&graph) {
                let set = ghiggini_massot(s, opts.window)?;
                notes.push(
                    "torus bundle: unbounded torsion family, structures out of scope".into(),
                );
                push_check(
                    &mut checks,
                    "twisting-ray",
                    CheckStatus::Pass,
                    format!("period {:?}, window {:?}", set.period, set.values),
                );
                (
                    ManifoldClass::SingularTorusBundle { model },
                    None,
                    set,
                    Vec::new(),
                )
            } else {
                let tb = tw_bar(&lat, &sub)?;
                let set = ghiggini_massot(s, opts.window)?;
                if set.values != vec![tb] {
                    return Err(Error::Consistency(format!(
                        "singular twisting sets disagree: arithmetic {:?} vs walk [{tb}]",
                        set.values
                    )));
                }
                push_check(
                    &mut checks,
                    "twisting-agreement",
                    CheckStatus::Pass,
                    format!("both routes give [{tb}]"),
                );
                let structures = blowdown_structures(&realised, &lat, tb)?;
                (ManifoldClass::Singular, Some(tb), set, structures)
            }
        }
        Definiteness::Indefinite => {
            let tb = tw_bar(&lat, &sub)?;
            let set = ghiggini_massot(s, opts.window)?;
            let heights = twisting_numbers_via_heights(&lat, &realised, &groups)?;
            if heights != set.values {
                return Err(Error::Consistency(format!(
                    "twisting sets disagree: heights give {heights:?}, arithmetic scan gives {:?}",
                    set.values
                )));
            }
            push_check(
                &mut checks,
                "twisting-agreement",
                CheckStatus::Pass,
                format!("both routes give {heights:?}"),
            );
            let can = lat.canonical_vector();
            if lat.is_spin(&can)? {
                let can_rv = realised
                    .iter()
                    .find(|rv| rv.vector == can)
                    .expect("canonical vector realised on a non-L-space");
                let fibre_pairing = rat_int(2) * can_rv.alex.clone().expect("invertible")
                    + s.euler_number().recip();
                let expected = rat_int(-1) + fibre_pairing;
                let deepest = rat_int(*heights.last().expect("nonempty"));
                if deepest != expected {
                    return Err(Error::Consistency(format!(
                        "spin minimum mismatch: walks give {deepest}, pairing gives {}",
                        fmt_rational(&expected)
                    )));
                }
                push_check(
                    &mut checks,
                    "spin-minimum",
                    CheckStatus::Pass,
                    format!("{deepest}"),
                );
            }
            let mut structures = blowdown_structures(&realised, &lat, tb)?;
            let spins: Vec<bool> = groups
                .iter()
                .map(|g| lat.is_spin(&realised[g.members[0]].vector))
                .collect::<Result<_>>()?;
            let ab = type_ab(&graph);
            let build = |(g, &spin): (&HomotopyClass, &bool)| match ab {
                TypeAB::A => type_a_group(&lat, &realised, g, spin, tb, &set),
                TypeAB::B { .. } => type_b_group(&lat, &realised, g, spin, tb),
            };
            let extras: Vec<Vec<ContactStructure>> = if opts.parallel {
                groups
                    .par_iter()
                    .zip(spins.par_iter())
                    .map(build)
                    .collect::<Result<_>>()?
            } else {
                groups
                    .iter()
                    .zip(spins.iter())
                    .map(build)
                    .collect::<Result<_>>()?
            };
            structures.extend(extras.into_iter().flatten());
            let class = match ab {
                TypeAB::A => ManifoldClass::TypeA,
                TypeAB::B { model, .. } => ManifoldClass::TypeB { model },
            };
            (class, Some(tb), set, structures)
        }
    };

    let mut structures = structures;
    structures.sort_by(|a, b| {
        b.tw.cmp(&a.tw)
            .then_with(|| a.spinc.cmp(&b.spinc))
            .then_with(|| b.d3.cmp(&a.d3))
            .then_with(|| a.cplus_coords.cmp(&b.cplus_coords))
    });
    let mut counts_by_tw = BTreeMap::new();
    for st in &structures {
        *counts_by_tw.entry(st.tw).or_insert(0usize) += 1;
    }
    if !matches!(class, ManifoldClass::SingularTorusBundle { .. } | ManifoldClass::LSpace) {
        let tb = tb.expect("finite classes carry a maximal twisting number");
        let at_tb = counts_by_tw.get(&tb).copied().unwrap_or(0);
        if at_tb != realised.len() {
            return Err(Error::Consistency(format!(
                "{at_tb} structures at the maximal twisting number, {} realised vectors",
                realised.len()
            )));
        }
        check_conjugation_symmetry(&structures, &realised)?;
        push_check(
            &mut checks,
            "conjugation-symmetry",
            CheckStatus::Pass,
            format!("{} structures closed under conjugation", structures.len()),
        );
        check_counts(s, &graph, &counts_by_tw, &mut checks)?;
    }

    Ok(ClassificationReport {
        manifold: s.clone(),
        graph,
        class,
        tw_bar: tb,
        realised,
        groups,
        twisting_set,
        structures,
        counts_by_tw,
        checks,
        notes,
    })
}

/// Chain expansion of any rational x <= -1 by the same recursion as the
/// Hirzebruch-Jung case but admitting -1 terms, used for comparison
/// sequences of reducible fractions.
fn general_chain(x: &Rational) -> Result<Vec<i64>> {
    let mut terms = Vec::new();
    let mut x = x.clone();
    loop {
        if x.is_integer() {
            terms.push(big_to_i64(x.numer())?);
            return Ok(terms);
        }
        let fl = x.floor();
        terms.push(big_to_i64(fl.numer())?);
        // x = m - 1/y with m - x in (-1, 0)
        x = (fl - x).recip();
    }
}

/// One leg's factor in the q >= 2 count: compare the leg chain against the
/// chain of -q/p and multiply the tail of the leg chain past the first
/// difference.
fn leg_factor(leg_terms: &[i64], q: u64, p: &BigInt) -> Result<BigInt> {
    let value = -Rational::new(BigInt::from(q), p.clone());
    let other = general_chain(&value)?;
    for (h, &m) in leg_terms.iter().enumerate() {
        let Some(&n) = other.get(h) else {
            return Err(Error::Consistency(format!(
                "comparison chain {other:?} is a strict prefix of the leg {leg_terms:?}"
            )));
        };
        if n != m {
            let mut t = BigInt::from((n - m).abs());
            for &mj in &leg_terms[h + 1..] {
                t *= BigInt::from((mj + 1).abs());
            }
            return Ok(t);
        }
    }
    Ok(BigInt::one())
}

/// Count at one q without the membership precondition; `None` when some leg
/// has no best upper approximation (never the case for scan-certified q).
fn count_inner(s: &SeifertInvariants, graph: &StarGraph, q: u64) -> Result<Option<BigInt>> {
    if q == 1 {
        let mut total = BigInt::from((s.e0() + 1).abs());
        for leg in graph.legs() {
            for &m in leg {
                total *= BigInt::from((m + 1).abs());
            }
        }
        return Ok(Some(total));
    }
    let mut total = BigInt::one();
    for (r, leg) in s.coefficients().iter().zip(graph.legs()) {
        match best_upper_approx(r, q)? {
            Some(p) => total *= leg_factor(leg, q, &p)?,
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// Upper-bound count of structures at twisting number -q, by the per-leg
/// continued-fraction comparison (q >= 2) or the framing product (q = 1).
pub fn count_formula(s: &SeifertInvariants, q: u64) -> Result<BigInt> {
    let set = ghiggini_massot(s, 8)?;
    if q == 0 || !set.contains(-(q as i64)) {
        return Err(Error::Contract(format!(
            "-{q} is not a twisting number of {s}; the count formula only applies on the twisting set"
        )));
    }
    let graph = crate::plumbing::standard_graph(s)?;
    count_inner(s, &graph, q)?.ok_or_else(|| {
        Error::Unsupported(format!(
            "no per-leg upper approximation at q = {q}; count unavailable"
        ))
    })
}

/// Closed-form twisting prediction for surgeries on torus knots, used as an
/// oracle against `classify`. Positive knots: nothing at or above
/// d1*d2 - d1 - d2; otherwise -d2-d1, plus -(d1+d2+s*d1*d2) for every s > 0
/// whose ray value admits the matching best upper approximation on the
/// third coefficient. The (2,3) knot at r = 0 yields the infinite -5-6s
/// ray. Negative knots at r >= 0: -1, plus -(t*d1*d2-d1-d2) for every
/// t >= 2 below the Euler bound whose level admits the matching best upper
/// approximation on 1 - 1/(d1*d2+r); the (2,3) knot at r = 0 hits every
/// level and yields the infinite -7-6s ray.
pub fn predict_torus_surgery(
    d2: i64,
    d1: i64,
    positive: bool,
    r: &Rational,
    window: usize,
) -> Result<TwistingSet> {
    if !(1 < d2 && d2 < d1) || d2.gcd(&d1) != 1 {
        return Err(Error::Parse(format!(
            "torus knot parameters need coprime 1 < d2 < d1, got ({d2}, {d1})"
        )));
    }
    let product = rat_int(d1 * d2);
    let gap = d1 * d2 - d1 - d2;
    if positive {
        if r == &product {
            return Err(Error::Unsupported(
                "exceptional slope: connected sum of lens spaces".into(),
            ));
        }
        if *r > product {
            // past the exceptional slope the normalised form has e0 <= -2 and a
            // negative-definite graph, so the blow-down value -1 is the whole set
            return Ok(TwistingSet::finite(vec![-1], Vec::new()));
        }
        if *r >= rat_int(gap) {
            // indefinite L-space range (e0 = -1): nothing twists negatively
            return Ok(TwistingSet::finite(Vec::new(), Vec::new()));
        }
        let base = -d1 - d2;
        if r.is_zero() {
            if (d2, d1) == (2, 3) {
                let values: Vec<i64> = (0..window as i64).map(|s| base - 6 * s).collect();
                return Ok(TwistingSet {
                    values,
                    truncated: true,
                    period: Some(6),
                    certificates: Vec::new(),
                    notes: vec!["infinite family: window truncated".into()],
                });
            }
            // along the ray the third-leg interval has constant determinant
            // d1*d2-d1-d2 >= 2, so an interloper of denominator <= q always
            // rejects the approximation
            return Ok(TwistingSet::finite(vec![base], Vec::new()));
        }
        if r.is_negative() {
            // negative-definite side: the unique twisting number
            return Ok(TwistingSet::finite(vec![base], Vec::new()));
        }
        let third = (product.clone() - r).recip();
        let one_over_e = (third.clone() - product.recip()).recip();
        let mut values = vec![base];
        let mut s = 1i64;
        loop {
            let q = d1 + d2 + s * d1 * d2;
            if rat_int(q) >= one_over_e {
                break;
            }
            if best_upper_approx(&third, q as u64)? == Some(BigInt::from(s + 1)) {
                values.push(-q);
            }
            s += 1;
        }
        return Ok(TwistingSet::finite(values, Vec::new()));
    }

    // negative knot
    if *r <= -product.clone() {
        if r == &(-product) {
            return Err(Error::Unsupported(
                "exceptional slope: connected sum of lens spaces".into(),
            ));
        }
        return Ok(TwistingSet::finite(Vec::new(), Vec::new()));
    }
    if r.is_negative() {
        // negative-definite side
        return Ok(TwistingSet::finite(vec![-1], Vec::new()));
    }
    // r >= 0: the normalised form keeps e0 = -2, so -1 is always present,
    // and the first two legs admit their approximations exactly at the
    // levels q = t*d1*d2 - d1 - d2 with forced third numerator q - t + 1
    let mut values = vec![-1i64];
    if r.is_zero() {
        if (d2, d1) == (2, 3) {
            let ray: Vec<i64> = (0..window as i64).map(|k| -7 - 6 * k).collect();
            values.extend(ray);
            return Ok(TwistingSet {
                values,
                truncated: true,
                period: Some(6),
                certificates: Vec::new(),
                notes: vec!["infinite family: window truncated".into()],
            });
        }
        // lower approximations of 1/(d1*d2) sit at denominators 1 mod
        // d1*d2, off the level progression whenever (d1-1)(d2-1) > 2
        return Ok(TwistingSet::finite(values, Vec::new()));
    }
    let m = product.clone() + r;
    let third = Rational::one() - m.recip();
    let one_over_e = (product.recip() - m.recip()).recip();
    let mut t = 2i64;
    loop {
        let q = t * d1 * d2 - d1 - d2;
        if rat_int(q) >= one_over_e {
            break;
        }
        if best_upper_approx(&third, q as u64)? == Some(BigInt::from(q - t + 1)) {
            values.push(-q);
        }
        t += 1;
    }
    Ok(TwistingSet::finite(values, Vec::new()))
}

/// Expectations attached to a Brieskorn sphere and checked against its
/// classification.
#[derive(Debug, Clone)]
pub struct BrieskornSummary {
    pub manifold: SeifertInvariants,
    pub expected_class: ManifoldClass,
    /// Largest homotopy-class size when pyramids are expected.
    pub expected_pyramid_size: Option<usize>,
    /// The manifold is one of the three with a unique tight structure.
    pub expected_unique: bool,
    pub report: ClassificationReport,
}

/// Classifies a Brieskorn sphere and asserts the published expectations:
/// reversed (2,3,m) inputs form pyramids (or are the tight-less m = 5
/// case), other reversed inputs have at most lone extra structures, and
/// non-reversed inputs are negative definite.
pub fn brieskorn_summary(
    multiplicities: &[i64],
    reversed: bool,
    opts: &ClassifyOptions,
) -> Result<BrieskornSummary> {
    let s = crate::plumbing::brieskorn(multiplicities, reversed)?;
    let report = classify(&s, opts)?;
    let mut sorted = multiplicities.to_vec();
    sorted.sort_unstable();
    let trefoil_family = sorted.len() == 3 && sorted[0] == 2 && sorted[1] == 3;
    let (expected_class, expected_pyramid_size, expected_unique);
    if !reversed {
        expected_class = ManifoldClass::NegDefinite;
        expected_pyramid_size = None;
        expected_unique = sorted == [2, 3, 5];
        if report.class != expected_class {
            return Err(Error::Consistency(format!(
                "Brieskorn orientation expected a negative-definite report, got {:?}",
                report.class
            )));
        }
    } else if trefoil_family {
        let m = sorted[2];
        let size = if m % 6 == 5 {
            ((m + 1) / 6 - 1) as usize
        } else {
            ((m - 1) / 6) as usize
        };
        expected_pyramid_size = Some(size);
        expected_unique = m == 7 || m == 11;
        if size == 0 {
            expected_class = ManifoldClass::LSpace;
            if report.class != ManifoldClass::LSpace || !report.structures.is_empty() {
                return Err(Error::Consistency(format!(
                    "reversed (2,3,5) expected no tight structures, got {:?}",
                    report.class
                )));
            }
        } else {
            expected_class = report.class;
            if !matches!(report.class, ManifoldClass::TypeB { .. }) {
                return Err(Error::Consistency(format!(
                    "reversed (2,3,{m}) expected pyramids, got {:?}",
                    report.class
                )));
            }
            let largest = report.groups.iter().map(|g| g.members.len()).max().unwrap_or(0);
            if largest != size {
                return Err(Error::Consistency(format!(
                    "reversed (2,3,{m}) expected pyramids of size {size}, found {largest}"
                )));
            }
        }
    } else {
        expected_class = ManifoldClass::TypeA;
        expected_pyramid_size = None;
        expected_unique = false;
        if !matches!(report.class, ManifoldClass::TypeA | ManifoldClass::LSpace) {
            return Err(Error::Consistency(format!(
                "reversed Brieskorn outside the (2,3,m) family expected type A, got {:?}",
                report.class
            )));
        }
    }
    if expected_unique && report.structures.len() != 1 {
        return Err(Error::Consistency(format!(
            "expected a unique tight structure, classification lists {}",
            report.structures.len()
        )));
    }
    Ok(BrieskornSummary {
        manifold: s,
        expected_class,
        expected_pyramid_size,
        expected_unique,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::rat;
    use crate::plumbing::{decomposition_labels, parse_manifold, torus_knot_surgery};

    fn m(e0: i64, fracs: &[(i64, i64)]) -> SeifertInvariants {
        SeifertInvariants::new(e0, fracs.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn setup(s: &SeifertInvariants) -> (Lattice, S3Subgraph, DecompositionLabels) {
        let lat = Lattice::from_invariants(s).unwrap();
        let sub = s3_subgraph(lat.graph()).unwrap();
        let labels = decomposition_labels(lat.graph(), &sub);
        (lat, sub, labels)
    }

    fn table1() -> SeifertInvariants {
        m(-1, &[(2, 3), (1, 4), (4, 47)])
    }

    fn table2() -> SeifertInvariants {
        m(-2, &[(1, 2), (1, 2), (4, 7), (6, 11)])
    }

    fn sphere_2_3_23() -> SeifertInvariants {
        parse_manifold("-Sigma(2,3,23)").unwrap().invariants().unwrap()
    }

    #[test]
    fn realised_vectors_match_published_windows() {
        let s = table1();
        let (lat, sub, labels) = setup(&s);
        let realised = realised_vectors(&lat, &sub, &labels).unwrap();
        assert_eq!(realised.len(), 15);
        let mut seen = BTreeSet::new();
        for rv in &realised {
            let c = rv.vector.coords();
            assert_eq!(&c[..4], &[1, 0, 0, -2]);
            assert!([-10, -8, -6, -4, -2].contains(&c[4]), "{}", rv.vector);
            assert!([-2, 0, 2].contains(&c[5]), "{}", rv.vector);
            seen.insert((c[4], c[5]));
            assert_eq!(realised[rv.conj_partner].conj_partner, seen.len() - 1);
        }
        assert_eq!(seen.len(), 15);

        let s = table2();
        let (lat, sub, labels) = setup(&s);
        let realised = realised_vectors(&lat, &sub, &labels).unwrap();
        assert_eq!(realised.len(), 15);
        for rv in &realised {
            let c = rv.vector.coords();
            assert_eq!((c[0], c[1], c[2], c[3], c[5]), (0, 0, 0, 0, 0));
            assert!([-2, 0, 2].contains(&c[4]));
            assert!(c[6].abs() <= 4);
        }

        let s = sphere_2_3_23();
        let (lat, sub, labels) = setup(&s);
        let realised = realised_vectors(&lat, &sub, &labels).unwrap();
        let got: BTreeSet<Vec<i64>> =
            realised.iter().map(|rv| rv.vector.coords().to_vec()).collect();
        let want: BTreeSet<Vec<i64>> = (1..=3).map(|i| vec![1, 0, -1, -4, -4 + 2 * i]).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn tw_bar_matches_published_values() {
        for (s, expected) in [(table1(), -7), (table2(), -1), (sphere_2_3_23(), -5)] {
            let (lat, sub, _) = setup(&s);
            assert_eq!(tw_bar(&lat, &sub).unwrap(), expected, "{s}");
        }
    }

    #[test]
    fn arithmetic_twisting_sets_match_tables() {
        let set = ghiggini_massot(&table1(), 8).unwrap();
        assert_eq!(set.values, vec![-7, -223]);
        assert!(!set.truncated);
        let certs: Vec<(u64, Vec<i64>)> = set
            .certificates
            .iter()
            .map(|c| {
                (
                    c.q,
                    c.numerators.iter().map(|p| big_to_i64(p).unwrap()).collect(),
                )
            })
            .collect();
        assert_eq!(certs, vec![(7, vec![5, 2, 1]), (223, vec![149, 56, 19])]);

        assert_eq!(ghiggini_massot(&table2(), 8).unwrap().values, vec![-1, -3, -5]);

        let ray = ghiggini_massot(&m(-1, &[(1, 2), (1, 3), (1, 6)]), 4).unwrap();
        assert_eq!(ray.values, vec![-5, -11, -17, -23]);
        assert!(ray.truncated);
        assert_eq!(ray.period, Some(6));
        assert!(ray.contains(-5 - 6 * 20));
        assert!(!ray.contains(-6));
        assert!(!ray.contains(-4));

        // 0-surgery on the (3,4) knot: singular but not a torus bundle
        let s = torus_knot_surgery(3, 4, true, &rat_int(0)).unwrap();
        let set = ghiggini_massot(&s, 8).unwrap();
        assert_eq!(set.values, vec![-7]);
        assert!(!set.truncated);
    }

    #[test]
    fn height_route_agrees_with_arithmetic_route() {
        for s in [table1(), table2(), sphere_2_3_23()] {
            let (lat, sub, labels) = setup(&s);
            let realised = realised_vectors(&lat, &sub, &labels).unwrap();
            let groups = group_realised(&realised);
            let heights = twisting_numbers_via_heights(&lat, &realised, &groups).unwrap();
            assert_eq!(heights, ghiggini_massot(&s, 8).unwrap().values, "{s}");
        }
    }

    #[test]
    fn classify_type_a_table() {
        let report = classify(&table1(), &ClassifyOptions::default()).unwrap();
        assert_eq!(report.class, ManifoldClass::TypeA);
        assert_eq!(report.tw_bar, Some(-7));
        assert_eq!(report.structures.len(), 16);
        assert_eq!(
            report.counts_by_tw,
            BTreeMap::from([(-7, 15), (-223, 1)])
        );
        let pair = report
            .structures
            .iter()
            .find(|st| st.tw == -223)
            .expect("deep structure");
        assert!(matches!(pair.kind, StructureKind::PairA { .. }));
        let coords: BTreeSet<Vec<i64>> = pair
            .cplus_coords
            .iter()
            .map(|&i| report.realised[i].vector.coords().to_vec())
            .collect();
        let want: BTreeSet<Vec<i64>> = [
            vec![1, 0, 0, -2, -10, -2],
            vec![1, 0, 0, -2, -2, 2],
        ]
        .into_iter()
        .collect();
        assert_eq!(coords, want);
        assert!(pair.flags.pyramidion);
        assert!(pair.flags.self_conjugate);
        assert!(pair.flags.stein_obstructed);
        assert!(!pair.flags.stein_fillable);
        assert!(!pair.flags.casing_stone);
        for st in report.structures.iter().filter(|st| st.tw == -7) {
            assert!(matches!(st.kind, StructureKind::BlowDown { .. }));
            assert!(st.flags.stein_fillable);
            assert!(!st.flags.stein_obstructed);
        }
        let heights: Vec<i64> = report
            .groups
            .iter()
            .map(|g| g.combined_height.unwrap())
            .collect();
        assert_eq!(heights, vec![222, 198, 174, 126, 102, 78, 30]);
        // same manifold through the surgery expression
        let s2 = parse_manifold("Surgery(T(3,4), 1/4)").unwrap().invariants().unwrap();
        assert_eq!(s2, table1());
    }

    #[test]
    fn classify_type_b_table() {
        let report = classify(&table2(), &ClassifyOptions::default()).unwrap();
        assert!(matches!(report.class, ManifoldClass::TypeB { .. }));
        assert_eq!(report.tw_bar, Some(-1));
        assert_eq!(report.structures.len(), 26);
        assert_eq!(
            report.counts_by_tw,
            BTreeMap::from([(-1, 15), (-3, 8), (-5, 3)])
        );
        let mut sizes: Vec<usize> = report.groups.iter().map(|g| g.members.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(sizes, vec![3, 3, 3, 2, 2, 1, 1]);
        // the canonical class sits in grading 5/36
        let can_group = report
            .groups
            .iter()
            .find(|g| {
                g.members
                    .iter()
                    .any(|&i| report.realised[i].vector == CharVector::new(vec![0, 0, 0, 0, -2, 0, -4]))
            })
            .unwrap();
        assert_eq!(can_group.d3, Some(rat(5, 36)));
        assert_eq!(can_group.members.len(), 3);
        let mut heights: Vec<i64> = report
            .groups
            .iter()
            .map(|g| g.combined_height.unwrap())
            .collect();
        heights.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(heights, vec![4, 4, 4, 2, 2, 0, 0]);
    }

    #[test]
    fn classify_single_pyramid() {
        let report = classify(&sphere_2_3_23(), &ClassifyOptions::default()).unwrap();
        assert!(matches!(report.class, ManifoldClass::TypeB { .. }));
        assert_eq!(report.structures.len(), 6);
        assert_eq!(
            report.counts_by_tw,
            BTreeMap::from([(-5, 3), (-11, 2), (-17, 1)])
        );
        assert_eq!(report.groups.len(), 1);
        let apex = report
            .structures
            .iter()
            .find(|st| st.kind == StructureKind::Pyramid { i: 1, j: 3, k: 3 })
            .unwrap();
        assert_eq!(apex.tw, -17);
        // binomials (1, 0, 1): endpoints only
        assert_eq!(apex.cplus_coords.len(), 2);
        assert!(apex.flags.pyramidion && !apex.flags.casing_stone);
        assert!(apex.flags.self_conjugate && apex.flags.stein_obstructed);
        for (i, j) in [(1usize, 2usize), (2, 3)] {
            let st = report
                .structures
                .iter()
                .find(|st| st.kind == StructureKind::Pyramid { i, j, k: 3 })
                .unwrap();
            assert_eq!(st.tw, -11);
            assert!(st.flags.casing_stone && !st.flags.pyramidion);
        }
    }

    #[test]
    fn classify_negative_definite() {
        let e8 = parse_manifold("Sigma(2,3,5)").unwrap().invariants().unwrap();
        let report = classify(&e8, &ClassifyOptions::default()).unwrap();
        assert_eq!(report.class, ManifoldClass::NegDefinite);
        assert_eq!(report.structures.len(), 1);
        assert_eq!(report.tw_bar, Some(-1));
        assert!(report.structures[0].flags.stein_fillable);

        let report = classify(&m(-1, &[(1, 5), (1, 5), (1, 5)]), &ClassifyOptions::default()).unwrap();
        assert_eq!(report.class, ManifoldClass::NegDefinite);
        assert_eq!(report.tw_bar, Some(-2));
        assert_eq!(report.structures.len(), 27);

        let report = classify(&m(-1, &[(1, 2), (1, 3), (1, 7)]), &ClassifyOptions::default()).unwrap();
        assert_eq!(report.tw_bar, Some(-5));
        assert_eq!(report.structures.len(), 2);
    }

    #[test]
    fn classify_l_spaces() {
        for text in ["-Sigma(2,3,5)", "Surgery(T(2,3), 2)"] {
            let s = parse_manifold(text).unwrap().invariants().unwrap();
            let report = classify(&s, &ClassifyOptions::default()).unwrap();
            assert_eq!(report.class, ManifoldClass::LSpace, "{text}");
            assert!(report.structures.is_empty());
            assert!(report.realised.is_empty());
            assert!(report.twisting_set.values.is_empty());
        }
    }

    #[test]
    fn classify_singular_inputs() {
        let s = torus_knot_surgery(3, 4, true, &rat_int(0)).unwrap();
        let report = classify(&s, &ClassifyOptions::default()).unwrap();
        assert_eq!(report.class, ManifoldClass::Singular);
        assert_eq!(report.tw_bar, Some(-7));
        assert_eq!(report.structures.len(), 5);
        assert!(report.structures.iter().all(|st| st.tw == -7));

        let s = m(-1, &[(1, 2), (1, 3), (1, 6)]);
        let report = classify(&s, &ClassifyOptions::default()).unwrap();
        assert_eq!(report.class, ManifoldClass::SingularTorusBundle { model: 0 });
        assert!(report.structures.is_empty());
        assert!(report.twisting_set.truncated);
        assert_eq!(report.tw_bar, None);
        assert!(!report.realised.is_empty());
    }

    #[test]
    fn count_formula_matches_published_products() {
        assert_eq!(count_formula(&table1(), 7).unwrap(), BigInt::from(15));
        assert_eq!(count_formula(&table1(), 223).unwrap(), BigInt::from(1));
        assert_eq!(count_formula(&table2(), 1).unwrap(), BigInt::from(15));
        assert_eq!(count_formula(&table2(), 3).unwrap(), BigInt::from(8));
        assert_eq!(count_formula(&table2(), 5).unwrap(), BigInt::from(3));
        assert!(matches!(
            count_formula(&table1(), 5),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn prediction_matches_worked_slopes() {
        let p = |d2, d1, pos, r: Rational| {
            predict_torus_surgery(d2, d1, pos, &r, 4).unwrap().values
        };
        assert_eq!(p(3, 4, true, rat(1, 4)), vec![-7, -223]);
        assert_eq!(p(3, 4, true, rat_int(2)), vec![-7, -19]);
        assert_eq!(p(2, 3, true, rat(1, 2)), vec![-5]);
        assert_eq!(p(2, 3, true, rat(1, 3)), vec![-5, -11]);
        assert_eq!(p(2, 3, true, rat_int(2)), Vec::<i64>::new());
        assert_eq!(p(2, 3, true, rat_int(1)), Vec::<i64>::new());
        assert_eq!(p(2, 3, false, rat(1, 2)), vec![-1, -7]);
        assert_eq!(p(2, 3, false, rat_int(2)), vec![-1]);
        assert_eq!(p(2, 3, false, rat_int(-1)), vec![-1]);
        assert_eq!(p(3, 4, false, rat_int(2)), vec![-1, -29]);
        assert_eq!(p(3, 4, false, rat_int(0)), vec![-1]);
        assert_eq!(p(2, 5, true, rat(1, 2)), vec![-7, -47]);

        let ray = predict_torus_surgery(2, 3, true, &rat_int(0), 4).unwrap();
        assert_eq!(ray.values, vec![-5, -11, -17, -23]);
        assert_eq!(ray.period, Some(6));
        let ray = predict_torus_surgery(2, 3, false, &rat_int(0), 4).unwrap();
        assert_eq!(ray.values[..2], [-1, -7]);
        assert_eq!(ray.period, Some(6));
    }

    #[test]
    fn prediction_agrees_with_the_arithmetic_scan() {
        for (d2, d1, positive, r) in [
            (3i64, 4i64, true, rat(1, 4)),
            (3, 4, true, rat_int(2)),
            (3, 4, false, rat_int(2)),
            (2, 5, true, rat(1, 2)),
            (2, 3, false, rat(1, 2)),
        ] {
            let s = torus_knot_surgery(d2, d1, positive, &r).unwrap();
            let scanned = ghiggini_massot(&s, 8).unwrap();
            let predicted = predict_torus_surgery(d2, d1, positive, &r, 8).unwrap();
            assert_eq!(
                predicted.values,
                scanned.values,
                "T({d2},{}) at {}",
                if positive { d1 } else { -d1 },
                fmt_rational(&r)
            );
        }
    }

    #[test]
    fn brieskorn_expectations_hold() {
        let summary = brieskorn_summary(&[2, 3, 13], true, &ClassifyOptions::default()).unwrap();
        assert_eq!(summary.expected_pyramid_size, Some(2));
        assert!(matches!(summary.report.class, ManifoldClass::TypeB { .. }));
        assert_eq!(summary.report.structures.len(), 3);

        let summary = brieskorn_summary(&[2, 3, 11], true, &ClassifyOptions::default()).unwrap();
        assert!(summary.expected_unique);
        assert_eq!(summary.report.structures.len(), 1);

        let summary = brieskorn_summary(&[2, 3, 7], true, &ClassifyOptions::default()).unwrap();
        assert!(summary.expected_unique);
        assert_eq!(summary.report.structures.len(), 1);

        let summary = brieskorn_summary(&[2, 3, 5], true, &ClassifyOptions::default()).unwrap();
        assert_eq!(summary.report.class, ManifoldClass::LSpace);

        let summary = brieskorn_summary(&[2, 3, 5], false, &ClassifyOptions::default()).unwrap();
        assert!(summary.expected_unique);
        assert_eq!(summary.report.structures.len(), 1);

        let summary = brieskorn_summary(&[2, 5, 9], true, &ClassifyOptions::default()).unwrap();
        assert_eq!(summary.report.class, ManifoldClass::TypeA);
    }

    #[test]
    fn parallel_classification_is_identical() {
        let serial = classify(&table2(), &ClassifyOptions::default()).unwrap();
        let parallel = classify(
            &table2(),
            &ClassifyOptions {
                parallel: true,
                ..ClassifyOptions::default()
            },
        )
        .unwrap();
        assert_eq!(serial.structures.len(), parallel.structures.len());
        for (a, b) in serial.structures.iter().zip(&parallel.structures) {
            assert_eq!(a.tw, b.tw);
            assert_eq!(a.kind, b.kind);
            assert_eq!(a.cplus_coords, b.cplus_coords);
            assert_eq!(a.flags, b.flags);
        }
    }
}
