//! Seifert invariants over the two-sphere, star-shaped plumbing graphs, and
//! the exact intersection-form data the lattice walk consumes.
//!
//! A manifold is encoded as `M(e0; r1, ..., rn)` with `e0` an integer and
//! every `ri` in `(0,1)`. Its standard plumbing graph is a star: one centre
//! vertex framed `e0` and one leg per `ri` framed by the negative continued
//! fraction of `-1/ri`. Vertex order is fixed once and for all: centre
//! first, then the legs in input order, each walked outward from the centre.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::numtheory::{
    big_to_i64, eval_cont_frac, fmt_rational, neg_cont_frac, parse_rational, Rational,
};

/// Normalized Seifert invariants: `e0` integral, every coefficient in
/// `(0,1)`, at least three exceptional fibres.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertInvariants {
    e0: i64,
    r: Vec<Rational>,
}

impl SeifertInvariants {
    /// Validates an already-normalized tuple.
    pub fn new(e0: i64, r: Vec<Rational>) -> Result<Self> {
        if r.len() < 3 {
            return Err(Error::Unsupported(format!(
                "{} exceptional fibres after normalization; lens spaces and S3 are out of scope",
                r.len()
            )));
        }
        for x in &r {
            if !(x > &Rational::zero() && x < &Rational::one()) {
                return Err(Error::Contract(format!(
                    "coefficient {} outside (0,1)",
                    fmt_rational(x)
                )));
            }
        }
        Ok(SeifertInvariants { e0, r })
    }

    pub fn e0(&self) -> i64 {
        self.e0
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.r
    }

    pub fn arity(&self) -> usize {
        self.r.len()
    }

    /// Orientation reversal: `M(-e0-n; 1-r1, ..., 1-rn)`. An involution that
    /// negates the Euler number.
    pub fn dual(&self) -> SeifertInvariants {
        let e0 = -self.e0 - self.r.len() as i64;
        let r = self.r.iter().map(|x| Rational::one() - x).collect();
        SeifertInvariants { e0, r }
    }

    /// Euler number `e(M) = e0 + r1 + ... + rn`; its sign drives the
    /// definiteness trichotomy of the intersection form.
    pub fn euler_number(&self) -> Rational {
        let mut e = Rational::from_integer(BigInt::from(self.e0));
        for x in &self.r {
            e += x;
        }
        e
    }
}

impl fmt::Display for SeifertInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({}; ", self.e0)?;
        for (i, x) in self.r.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rational(x))?;
        }
        write!(f, ")")
    }
}

/// Shifts arbitrary rational coefficients into `(0,1)`, absorbing the integer
/// parts into `e0`. Integral coefficients disappear entirely; fewer than
/// three fibres afterwards is unsupported (the manifold is a lens space).
pub fn normalize(e0_raw: i64, fractions: &[Rational]) -> Result<SeifertInvariants> {
    let mut e0 = BigInt::from(e0_raw);
    let mut r = Vec::new();
    for x in fractions {
        let fl = x.floor();
        e0 += fl.numer();
        let frac = x - fl;
        if !frac.is_zero() {
            r.push(frac);
        }
    }
    SeifertInvariants::new(big_to_i64(&e0)?, r)
}

/// Star-shaped plumbing tree: centre plus chains. Framings on legs are
/// always at most -2; the centre framing is unconstrained here (lattice
/// operations require it to be at most -1 and check that themselves).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarGraph {
    center_framing: i64,
    legs: Vec<Vec<i64>>,
}

impl StarGraph {
    pub fn new(center_framing: i64, legs: Vec<Vec<i64>>) -> Result<Self> {
        for leg in &legs {
            if leg.is_empty() {
                return Err(Error::Contract("empty leg in star graph".into()));
            }
            if let Some(bad) = leg.iter().find(|&&m| m > -2) {
                return Err(Error::Contract(format!("leg framing {bad} exceeds -2")));
            }
        }
        Ok(StarGraph {
            center_framing,
            legs,
        })
    }

    pub fn center_framing(&self) -> i64 {
        self.center_framing
    }

    pub fn legs(&self) -> &[Vec<i64>] {
        &self.legs
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.legs.iter().map(Vec::len).sum::<usize>()
    }

    /// Global index of the first vertex of a leg (depth 1).
    pub fn leg_start(&self, leg: usize) -> usize {
        1 + self.legs[..leg].iter().map(Vec::len).sum::<usize>()
    }

    /// Maps a vertex index to `(leg, depth)` with depth 1 adjacent to the
    /// centre; `None` for the centre itself.
    pub fn vertex_leg(&self, idx: usize) -> Option<(usize, usize)> {
        if idx == 0 {
            return None;
        }
        let mut offset = 1;
        for (leg, framings) in self.legs.iter().enumerate() {
            if idx < offset + framings.len() {
                return Some((leg, idx - offset + 1));
            }
            offset += framings.len();
        }
        None
    }

    /// Framings in vertex order: centre, then each leg outward.
    pub fn framings(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.vertex_count());
        out.push(self.center_framing);
        for leg in &self.legs {
            out.extend_from_slice(leg);
        }
        out
    }

    pub fn neighbors(&self, idx: usize) -> Vec<usize> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        if idx == 0 {
            for leg in 0..self.legs.len() {
                out.push(self.leg_start(leg));
            }
            return out;
        }
        let (leg, depth) = self.vertex_leg(idx).expect("vertex in range");
        if depth == 1 {
            out.push(0);
        } else {
            out.push(idx - 1);
        }
        if depth < self.legs[leg].len() {
            out.push(idx + 1);
        }
        debug_assert!(out.iter().all(|&v| v < n));
        out
    }

    /// Recovers the Seifert coefficients: `ri = -1/[leg i]`.
    pub fn seifert_invariants(&self) -> Result<SeifertInvariants> {
        let mut r = Vec::new();
        for leg in &self.legs {
            let value = eval_cont_frac(leg)?;
            r.push(-value.recip());
        }
        SeifertInvariants::new(self.center_framing, r)
    }

    pub fn euler_number(&self) -> Result<Rational> {
        let mut e = Rational::from_integer(BigInt::from(self.center_framing));
        for leg in &self.legs {
            e -= eval_cont_frac(leg)?.recip();
        }
        Ok(e)
    }
}

/// Builds the standard graph of a normalized manifold.
///
/// # Examples
///
/// ```
/// use seifert_floer::numtheory::rat;
/// use seifert_floer::plumbing::{normalize, standard_graph};
/// let m = normalize(-1, &[rat(2, 3), rat(1, 4), rat(4, 47)]).unwrap();
/// let g = standard_graph(&m).unwrap();
/// assert_eq!(g.center_framing(), -1);
/// assert_eq!(g.legs(), &[vec![-2, -2], vec![-4], vec![-12, -4]]);
/// ```
pub fn standard_graph(s: &SeifertInvariants) -> Result<StarGraph> {
    let mut legs = Vec::with_capacity(s.arity());
    for r in s.coefficients() {
        legs.push(neg_cont_frac(r)?.terms().to_vec());
    }
    StarGraph::new(s.e0(), legs)
}

/// Sign trichotomy of the intersection form, locked to the sign of the Euler
/// number and cross-checked against the exact determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    NegativeDefinite,
    Indefinite,
    Singular,
}

impl fmt::Display for Definiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Definiteness::NegativeDefinite => "negative-definite",
            Definiteness::Indefinite => "indefinite",
            Definiteness::Singular => "singular",
        };
        f.write_str(s)
    }
}

/// Smith normal form bookkeeping for `Q`: the row transform `u` and the
/// diagonal `d` of `d = u * q * v`, with the factorisation verified against
/// the unimodular `v` at construction. Drives homology sizes and Spin^c
/// residue labels.
#[derive(Debug, Clone)]
pub struct SmithData {
    pub(crate) u: IntMatrix,
    pub(crate) d: IntMatrix,
}

/// The plumbing intersection form with every derived exact quantity the
/// rest of the pipeline needs.
#[derive(Debug, Clone)]
pub struct IntersectionForm {
    q: IntMatrix,
    det: BigInt,
    qinv: Option<Vec<Vec<Rational>>>,
    definiteness: Definiteness,
    smith: SmithData,
}

impl IntersectionForm {
    pub fn size(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// Exact inverse, present exactly when `det != 0`.
    pub fn qinv(&self) -> Option<&Vec<Vec<Rational>>> {
        self.qinv.as_ref()
    }

    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    pub fn smith(&self) -> &SmithData {
        &self.smith
    }

    /// `Q x` for an integer vector.
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        linalg::mat_vec(&self.q, x)
    }
}

/// Assembles `Q`, its determinant, exact inverse, Smith form, and the
/// definiteness verdict. The verdict comes from the sign of `e(M)` and must
/// agree with the determinant both in sign and through the exact factor
/// identity `det Q = e(M) * det(Q with the centre deleted)`; disagreement is
/// an internal consistency failure, never silently patched.
pub fn intersection_form(g: &StarGraph) -> Result<IntersectionForm> {
    let n = g.vertex_count();
    let framings = g.framings();
    let mut q: IntMatrix = vec![vec![BigInt::zero(); n]; n];
    for (i, &m) in framings.iter().enumerate() {
        q[i][i] = BigInt::from(m);
    }
    for i in 0..n {
        for j in g.neighbors(i) {
            q[i][j] = BigInt::one();
        }
    }

    let det = linalg::det_bareiss(&q);
    let e = g.euler_number()?;
    let definiteness = match e.numer().sign() {
        num_bigint::Sign::Minus => Definiteness::NegativeDefinite,
        num_bigint::Sign::NoSign => Definiteness::Singular,
        num_bigint::Sign::Plus => Definiteness::Indefinite,
    };

    // Centre-deleted minor: block sum of the leg chains, negative definite
    // because every leg framing is at most -2.
    let minor: IntMatrix = (1..n)
        .map(|i| (1..n).map(|j| q[i][j].clone()).collect())
        .collect();
    let minor_det = linalg::det_bareiss(&minor);
    let expected_minor_sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
    let factor_ok = Rational::from_integer(det.clone())
        == &e * Rational::from_integer(minor_det.clone());
    let sign_ok = match definiteness {
        Definiteness::NegativeDefinite => det.sign() == sign_of(n, -1),
        Definiteness::Indefinite => det.sign() == sign_of(n - 1, -1),
        Definiteness::Singular => det.is_zero(),
    };
    if !factor_ok || !sign_ok || minor_det.sign() != sign_of(n - 1, expected_minor_sign.signum())
    {
        return Err(Error::Consistency(format!(
            "definiteness cross-check failed: e(M) = {}, det Q = {}, centre-deleted det = {}",
            fmt_rational(&e),
            det,
            minor_det
        )));
    }

    let qinv = linalg::inverse_rational(&q);
    if det.is_zero() != qinv.is_none() {
        return Err(Error::Consistency(format!(
            "determinant {det} disagrees with invertibility"
        )));
    }
    if let Some(inv) = &qinv {
        // The centre-centre entry of the inverse is exactly 1/e(M).
        if inv[0][0] != e.recip() {
            return Err(Error::Consistency(format!(
                "(Q^-1)[1][1] = {} but 1/e(M) = {}",
                fmt_rational(&inv[0][0]),
                fmt_rational(&e.recip())
            )));
        }
    }

    let (u, d, v) = linalg::smith_normal_form(&q);
    if linalg::mat_mul(&linalg::mat_mul(&u, &q), &v) != d {
        return Err(Error::Consistency(
            "Smith factorisation does not reproduce Q".into(),
        ));
    }
    Ok(IntersectionForm {
        q,
        det,
        qinv,
        definiteness,
        smith: SmithData { u, d },
    })
}

fn sign_of(exponent: usize, base: i32) -> num_bigint::Sign {
    let s = if base >= 0 || exponent % 2 == 0 { 1 } else { -1 };
    if s > 0 {
        num_bigint::Sign::Plus
    } else {
        num_bigint::Sign::Minus
    }
}

/// Seifert invariants of the Brieskorn sphere with the given pairwise
/// coprime multiplicities; `reversed` returns the opposite orientation.
/// The canonical orientation satisfies `e(M) = -1/(a1*...*an)` exactly.
pub fn brieskorn(multiplicities: &[i64], reversed: bool) -> Result<SeifertInvariants> {
    if multiplicities.len() < 3 {
        return Err(Error::Unsupported(format!(
            "{} multiplicities; Brieskorn spheres here need at least three",
            multiplicities.len()
        )));
    }
    for (i, &a) in multiplicities.iter().enumerate() {
        if a < 2 {
            return Err(Error::Parse(format!("multiplicity {a} is below 2")));
        }
        for &b in &multiplicities[..i] {
            if b.gcd(&a) != 1 {
                return Err(Error::Parse(format!(
                    "multiplicities {b} and {a} are not coprime"
                )));
            }
        }
    }
    let product: BigInt = multiplicities.iter().map(|&a| BigInt::from(a)).product();
    let mut shift_sum = BigInt::zero();
    let mut fractions = Vec::new();
    for &a in multiplicities {
        let a_big = BigInt::from(a);
        let cofactor = &product / &a_big;
        // b * cofactor = -1 mod a, with b in (0, a).
        let gcd = cofactor.extended_gcd(&a_big);
        debug_assert!(gcd.gcd.is_one());
        let mut b = (-gcd.x) % &a_big;
        if b.sign() != num_bigint::Sign::Plus {
            b += &a_big;
        }
        shift_sum += &b * &cofactor;
        fractions.push(Rational::new(b, a_big));
    }
    let e0_num = -BigInt::one() - shift_sum;
    let (e0_big, rem) = e0_num.div_rem(&product);
    if !rem.is_zero() {
        return Err(Error::Consistency(format!(
            "Brieskorn centre framing {e0_num}/{product} is not integral"
        )));
    }
    let m = SeifertInvariants::new(big_to_i64(&e0_big)?, fractions)?;
    let expect_e = -Rational::new(BigInt::one(), product);
    if m.euler_number() != expect_e {
        return Err(Error::Consistency(format!(
            "Brieskorn Euler number {} differs from {}",
            fmt_rational(&m.euler_number()),
            fmt_rational(&expect_e)
        )));
    }
    Ok(if reversed { m.dual() } else { m })
}

/// Seifert invariants of `r`-surgery on the `(d2, d1)` torus knot, positive
/// or negative (`T(d2, d1)` versus `T(d2, -d1)`).
///
/// The positive knot fibres over the disc with two exceptional fibres of
/// orders `d1` and `d2`; filling the slope `r` adds the third fibre:
/// `M(-1; y/d2, x/d1, 1/(d1*d2 - r))` where `x*d2 + y*d1 = d1*d2 - 1` with
/// `0 < x < d1`, `0 < y < d2`. The negative knot is the mirror, realized by
/// reversing orientation and negating the slope. Surgery at the exceptional
/// slope (`r = d1*d2` on the positive knot, `-d1*d2` on the negative one)
/// gives a connected sum of lens spaces and is rejected, as are slopes whose
/// result drops below three exceptional fibres.
pub fn torus_knot_surgery(d2: i64, d1: i64, positive: bool, r: &Rational) -> Result<SeifertInvariants> {
    if !(1 < d2 && d2 < d1) {
        return Err(Error::Parse(format!(
            "torus knot parameters need 1 < d2 < d1, got ({d2}, {d1})"
        )));
    }
    if d2.gcd(&d1) != 1 {
        return Err(Error::Parse(format!(
            "torus knot parameters ({d2}, {d1}) are not coprime"
        )));
    }
    let product = Rational::from_integer(BigInt::from(d1 * d2));
    let exceptional = if positive { product.clone() } else { -product.clone() };
    if r == &exceptional {
        return Err(Error::Unsupported(format!(
            "surgery coefficient {} is the exceptional slope; the result is a connected sum of lens spaces",
            fmt_rational(r)
        )));
    }
    // x*d2 = -1 mod d1 with 0 < x < d1; then y is forced.
    let gcd = BigInt::from(d2).extended_gcd(&BigInt::from(d1));
    debug_assert!(gcd.gcd.is_one());
    let mut x = (-gcd.x) % BigInt::from(d1);
    if x.sign() != num_bigint::Sign::Plus {
        x += BigInt::from(d1);
    }
    let x = big_to_i64(&x)?;
    let y = (d1 * d2 - 1 - x * d2) / d1;
    debug_assert!(0 < x && x < d1);
    debug_assert!(0 < y && y < d2);
    debug_assert_eq!(x * d2 + y * d1, d1 * d2 - 1);

    let r1 = Rational::new(BigInt::from(y), BigInt::from(d2));
    let r2 = Rational::new(BigInt::from(x), BigInt::from(d1));
    if positive {
        let third = (product - r).recip();
        normalize(-1, &[r1, r2, third])
    } else {
        let third = Rational::one() - (product + r).recip();
        normalize(-2, &[Rational::one() - r1, Rational::one() - r2, third])
    }
}

/// Simulates blowing down a linear chain of framed unknots: repeatedly
/// remove the leftmost `-1`, add `+1` to its (former) neighbours, and splice.
/// Returns whether the chain disappears completely.
///
/// # Examples
///
/// ```
/// use seifert_floer::plumbing::chain_blowdown;
/// assert!(chain_blowdown(&[-1]));
/// assert!(chain_blowdown(&[-2, -2, -1, -4]));
/// assert!(!chain_blowdown(&[-2, -1, -2]));
/// ```
pub fn chain_blowdown(framings: &[i64]) -> bool {
    let mut chain = framings.to_vec();
    while let Some(k) = chain.iter().position(|&m| m == -1) {
        if k > 0 {
            chain[k - 1] += 1;
        }
        if k + 1 < chain.len() {
            chain[k + 1] += 1;
        }
        chain.remove(k);
    }
    chain.is_empty()
}

/// Determinant of the tridiagonal intersection matrix of a chain, by the
/// continuant recursion.
pub(crate) fn chain_det(framings: &[i64]) -> BigInt {
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for &m in framings {
        let next = BigInt::from(m) * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Kind of the maximal blow-downable subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum S3Kind {
    /// Centre framed below -1; nothing blows down.
    Empty,
    /// Just the centre (an unknot).
    CenterOnly,
    /// Centre plus a prefix of one leg.
    OneLeg,
    /// Centre plus prefixes of two legs; the subgraph is a surgery
    /// presentation of the `(d2, d1)` torus knot complement.
    TwoLegs,
}

/// Maximal subgraph of the star that blows down to nothing. Encodes the
/// torus-knot fibration the manifold is surgery on.
#[derive(Debug, Clone)]
pub struct S3Subgraph {
    pub kind: S3Kind,
    /// Vertex indices of the subgraph (empty for `Empty`).
    pub members: BTreeSet<usize>,
    /// Fibration orders, `d2 <= d1`, degenerate legs contributing 1.
    pub d1: i64,
    pub d2: i64,
    /// False when two distinct maximal member sets exist (the manifold is
    /// then an L-space and classification short-circuits).
    pub unique: bool,
    /// `(leg index, prefix length, denominator)` for each leg carrying a
    /// nonempty prefix, sorted so the larger denominator comes first
    /// (ties broken by lower leg index).
    pub prefixes: Vec<(usize, usize, i64)>,
}

/// Finds the maximal blow-downable subgraph. The search space is small by
/// design: prefixes of at most two legs joined through the centre.
pub fn s3_subgraph(g: &StarGraph) -> Result<S3Subgraph> {
    if g.center_framing() != -1 {
        return Ok(S3Subgraph {
            kind: S3Kind::Empty,
            members: BTreeSet::new(),
            d1: 1,
            d2: 1,
            unique: true,
            prefixes: Vec::new(),
        });
    }
    let legs = g.legs();
    let mut passing: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    // Centre alone always blows down (it is a -1-framed unknot).
    passing.insert(BTreeSet::from([0]));
    for i in 0..legs.len() {
        for j in i + 1..legs.len() {
            for a in 0..=legs[i].len() {
                for b in 0..=legs[j].len() {
                    let mut chain: Vec<i64> = legs[i][..a].iter().rev().copied().collect();
                    chain.push(-1);
                    chain.extend_from_slice(&legs[j][..b]);
                    if !chain_blowdown(&chain) {
                        continue;
                    }
                    debug_assert!(chain_det(&chain).abs().is_one());
                    let mut members = BTreeSet::from([0]);
                    members.extend((0..a).map(|t| g.leg_start(i) + t));
                    members.extend((0..b).map(|t| g.leg_start(j) + t));
                    passing.insert(members);
                }
            }
        }
    }
    let best_len = passing.iter().map(BTreeSet::len).max().expect("nonempty");
    let maximal: Vec<&BTreeSet<usize>> =
        passing.iter().filter(|s| s.len() == best_len).collect();
    let unique = maximal.len() == 1;
    let members = maximal[0].clone();

    let mut prefixes = Vec::new();
    for (leg, framings) in legs.iter().enumerate() {
        let start = g.leg_start(leg);
        let len = (0..framings.len())
            .take_while(|&t| members.contains(&(start + t)))
            .count();
        debug_assert!((0..framings.len()).all(|t| members.contains(&(start + t)) == (t < len)));
        if len == 0 {
            continue;
        }
        let value = eval_cont_frac(&framings[..len])?;
        let d = big_to_i64(&value.numer().abs())?;
        prefixes.push((leg, len, d));
    }
    prefixes.sort_by_key(|&(leg, _, d)| (std::cmp::Reverse(d), leg));
    let kind = match prefixes.len() {
        0 => S3Kind::CenterOnly,
        1 => S3Kind::OneLeg,
        2 => S3Kind::TwoLegs,
        more => {
            return Err(Error::Consistency(format!(
                "blow-downable subgraph spans {more} legs"
            )))
        }
    };
    let d1 = prefixes.first().map_or(1, |&(_, _, d)| d);
    let d2 = prefixes.get(1).map_or(1, |&(_, _, d)| d);
    debug_assert!(d2 <= d1);
    debug_assert_eq!(d1.gcd(&d2), 1);
    Ok(S3Subgraph {
        kind,
        members,
        d1,
        d2,
        unique,
        prefixes,
    })
}

/// Vertex labels for the complement decomposition of the graph that the
/// realised-vector ranges consume.
#[derive(Debug, Clone)]
pub struct DecompositionLabels {
    /// Leg-start vertices adjacent to the centre but outside the subgraph;
    /// populated only when the centre is framed -1.
    pub gpp: BTreeSet<usize>,
    /// First vertex past the subgraph prefix on the designated first leg.
    pub gpp1: Option<usize>,
    /// Same for the second leg.
    pub gpp2: Option<usize>,
    /// Number of consecutive -2 framings immediately past the prefix on the
    /// first leg.
    pub t_count: usize,
    /// Set when the subgraph is not unique; the manifold is an L-space and
    /// classification stops early.
    pub lspace_shortcut: bool,
    /// Set on inputs whose classification depends on the first/second-leg
    /// convention, which the published tables never exercise.
    pub convention_warning: bool,
}

/// Computes the labels for `sub = s3_subgraph(g)`. The "first" leg is the
/// one whose prefix realizes the larger denominator, ties going to the lower
/// input index.
pub fn decomposition_labels(g: &StarGraph, sub: &S3Subgraph) -> DecompositionLabels {
    let mut labels = DecompositionLabels {
        gpp: BTreeSet::new(),
        gpp1: None,
        gpp2: None,
        t_count: 0,
        lspace_shortcut: !sub.unique,
        convention_warning: false,
    };
    if g.center_framing() != -1 {
        return labels;
    }
    for (leg, framings) in g.legs().iter().enumerate() {
        let prefix = sub.prefixes.iter().position(|&(l, _, _)| l == leg);
        match prefix {
            None => {
                labels.gpp.insert(g.leg_start(leg));
            }
            Some(rank) => {
                let (_, len, _) = sub.prefixes[rank];
                if len < framings.len() {
                    let beyond = g.leg_start(leg) + len;
                    if rank == 0 {
                        labels.gpp1 = Some(beyond);
                    } else {
                        labels.gpp2 = Some(beyond);
                    }
                }
                if rank == 0 {
                    labels.t_count = framings[len..]
                        .iter()
                        .take_while(|&&m| m == -2)
                        .count();
                }
            }
        }
    }
    labels.convention_warning = labels.gpp2.is_some() || labels.t_count > 0;
    labels
}

/// One of the seven plumbing graphs presenting torus bundles with zero
/// Euler number; these are exactly the subgraphs whose presence makes an
/// indefinite manifold "type B".
#[derive(Debug, Clone)]
pub struct TorusBundleModel {
    pub name: &'static str,
    pub e0: i64,
    pub legs: Vec<Vec<i64>>,
}

/// The seven models, in a fixed published order; matching picks the first
/// hit, which keeps reports deterministic.
pub fn torus_bundle_models() -> Vec<TorusBundleModel> {
    vec![
        TorusBundleModel {
            name: "M(-1; 1/2, 1/3, 1/6)",
            e0: -1,
            legs: vec![vec![-2], vec![-3], vec![-6]],
        },
        TorusBundleModel {
            name: "M(-2; 1/2, 2/3, 5/6)",
            e0: -2,
            legs: vec![vec![-2], vec![-2, -2], vec![-2, -2, -2, -2, -2]],
        },
        TorusBundleModel {
            name: "M(-1; 1/2, 1/4, 1/4)",
            e0: -1,
            legs: vec![vec![-2], vec![-4], vec![-4]],
        },
        TorusBundleModel {
            name: "M(-2; 1/2, 3/4, 3/4)",
            e0: -2,
            legs: vec![vec![-2], vec![-2, -2, -2], vec![-2, -2, -2]],
        },
        TorusBundleModel {
            name: "M(-1; 1/3, 1/3, 1/3)",
            e0: -1,
            legs: vec![vec![-3], vec![-3], vec![-3]],
        },
        TorusBundleModel {
            name: "M(-2; 2/3, 2/3, 2/3)",
            e0: -2,
            legs: vec![vec![-2, -2], vec![-2, -2], vec![-2, -2]],
        },
        TorusBundleModel {
            name: "M(-2; 1/2, 1/2, 1/2, 1/2)",
            e0: -2,
            legs: vec![vec![-2], vec![-2], vec![-2], vec![-2]],
        },
    ]
}

/// Index into `torus_bundle_models()` when the graph is one of the models
/// up to leg order, i.e. the manifold itself is one of the torus bundles.
pub fn torus_bundle_match(g: &StarGraph) -> Option<usize> {
    let mut host: Vec<Vec<i64>> = g.legs().to_vec();
    host.sort();
    torus_bundle_models().iter().position(|m| {
        if m.e0 != g.center_framing() {
            return false;
        }
        let mut model = m.legs.clone();
        model.sort();
        model == host
    })
}

/// Type split of an indefinite manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeAB {
    A,
    B {
        /// Index into `torus_bundle_models()`.
        model: usize,
        /// The graph equals the model (the manifold is the torus bundle).
        exact: bool,
    },
}

/// Type B holds exactly when some model's centre framing equals the host's
/// and the model legs inject into distinct host legs as exact framing
/// prefixes.
pub fn type_ab(g: &StarGraph) -> TypeAB {
    for (idx, model) in torus_bundle_models().iter().enumerate() {
        if model.e0 != g.center_framing() {
            continue;
        }
        if inject_prefixes(&model.legs, g.legs(), 0, &mut vec![false; g.legs().len()]) {
            let exact = torus_bundle_match(g) == Some(idx);
            return TypeAB::B { model: idx, exact };
        }
    }
    TypeAB::A
}

fn inject_prefixes(model: &[Vec<i64>], host: &[Vec<i64>], at: usize, used: &mut Vec<bool>) -> bool {
    if at == model.len() {
        return true;
    }
    let needle = &model[at];
    for (h, leg) in host.iter().enumerate() {
        if used[h] || leg.len() < needle.len() || &leg[..needle.len()] != needle.as_slice() {
            continue;
        }
        used[h] = true;
        if inject_prefixes(model, host, at + 1, used) {
            used[h] = false;
            return true;
        }
        used[h] = false;
    }
    false
}

/// A manifold description in the shared input grammar.
#[derive(Debug, Clone, PartialEq)]
pub enum ManifoldExpr {
    Seifert { e0: i64, coefficients: Vec<Rational> },
    Brieskorn { multiplicities: Vec<i64>, reversed: bool },
    TorusSurgery { d2: i64, d1: i64, positive: bool, slope: Rational },
}

impl ManifoldExpr {
    /// Resolves the expression to normalized Seifert invariants.
    pub fn invariants(&self) -> Result<SeifertInvariants> {
        match self {
            ManifoldExpr::Seifert { e0, coefficients } => normalize(*e0, coefficients),
            ManifoldExpr::Brieskorn {
                multiplicities,
                reversed,
            } => brieskorn(multiplicities, *reversed),
            ManifoldExpr::TorusSurgery {
                d2,
                d1,
                positive,
                slope,
            } => torus_knot_surgery(*d2, *d1, *positive, slope),
        }
    }
}

/// Parses the manifold grammar shared with the command line:
/// `M(e0; p1/q1, ..., pn/qn)`, `Sigma(a1,...,an)`, `-Sigma(a1,...,an)`,
/// `Surgery(T(d2,d1), p/q)`, `Surgery(T(d2,-d1), p/q)`.
pub fn parse_manifold(input: &str) -> Result<ManifoldExpr> {
    let s = input.trim();
    if let Some(body) = delimited(s, "M(", ")") {
        let (head, tail) = body.split_once(';').ok_or_else(|| {
            Error::Parse(format!("expected `M(e0; r1, ..., rn)` in `{s}`"))
        })?;
        let e0: i64 = head
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid centre framing `{}`", head.trim())))?;
        let coefficients = tail
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if coefficients.is_empty() {
            return Err(Error::Parse("no Seifert coefficients given".into()));
        }
        return Ok(ManifoldExpr::Seifert { e0, coefficients });
    }
    for (prefix, reversed) in [("Sigma(", false), ("-Sigma(", true)] {
        if let Some(body) = delimited(s, prefix, ")") {
            let multiplicities = body
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("invalid multiplicity `{}`", t.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(ManifoldExpr::Brieskorn {
                multiplicities,
                reversed,
            });
        }
    }
    if let Some(body) = delimited(s, "Surgery(", ")") {
        let inner = body.trim();
        let Some(rest) = inner.strip_prefix("T(") else {
            return Err(Error::Parse(format!(
                "expected `Surgery(T(d2,d1), r)` in `{s}`"
            )));
        };
        let Some((knot, slope_part)) = rest.split_once(')') else {
            return Err(Error::Parse(format!("unclosed `T(` in `{s}`")));
        };
        let Some((d2_s, d1_s)) = knot.split_once(',') else {
            return Err(Error::Parse(format!("expected two torus-knot parameters in `{s}`")));
        };
        let d2: i64 = d2_s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid torus-knot parameter `{}`", d2_s.trim())))?;
        let d1_signed: i64 = d1_s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid torus-knot parameter `{}`", d1_s.trim())))?;
        let slope_s = slope_part.trim_start().strip_prefix(',').ok_or_else(|| {
            Error::Parse(format!("missing surgery coefficient in `{s}`"))
        })?;
        let slope = parse_rational(slope_s)?;
        return Ok(ManifoldExpr::TorusSurgery {
            d2,
            d1: d1_signed.abs(),
            positive: d1_signed > 0,
            slope,
        });
    }
    Err(Error::Parse(format!(
        "unrecognized manifold `{s}`; expected M(e0; ...), Sigma(...), -Sigma(...), or Surgery(T(d2,d1), r)"
    )))
}

fn delimited<'a>(s: &'a str, prefix: &str, suffix: &str) -> Option<&'a str> {
    s.strip_prefix(prefix)?.strip_suffix(suffix)
}
