//! Greedy walk on characteristic vectors of a plumbing lattice and the
//! graded data read off it: ends-correctly detection (with loop classes on
//! singular forms), Maslov and Alexander gradings, Spin^c labels, heights,
//! tau invariants, the L-space test, and the basis census.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{mat_vec, solve_rational};
use crate::numtheory::{big_to_i64, fmt_rational, rat_int, Rational};
use crate::plumbing::{
    intersection_form, standard_graph, Definiteness, IntersectionForm, SeifertInvariants,
    StarGraph,
};

/// Integer vector indexed by the vertices of a star graph, centre first.
/// Carries the parity constraint v_i = m(i) mod 2 of its host lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharVector {
    coords: Vec<i64>,
}

impl CharVector {
    pub fn new(coords: Vec<i64>) -> Self {
        CharVector { coords }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn negated(&self) -> CharVector {
        CharVector::new(self.coords.iter().map(|&v| -v).collect())
    }

    fn to_rationals(&self) -> Vec<Rational> {
        self.coords.iter().map(|&v| rat_int(v)).collect()
    }

    fn to_bigints(&self) -> Vec<BigInt> {
        self.coords.iter().map(|&v| BigInt::from(v)).collect()
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.coords.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Canonical name for the Spin^c structure a characteristic vector induces
/// on the plumbed boundary. Two vectors get equal labels exactly when the
/// difference of their Q-preimages is even (invertible case) or when they
/// agree modulo the column lattice of 2Q (singular case).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinCLabel {
    residues: Vec<Rational>,
    torsion: bool,
}

impl SpinCLabel {
    pub fn residues(&self) -> &[Rational] {
        &self.residues
    }

    /// False only on singular lattices, for vectors outside the rational
    /// column space of Q; such classes carry no absolute grading.
    pub fn is_torsion(&self) -> bool {
        self.torsion
    }
}

impl fmt::Display for SpinCLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.residues.iter().map(fmt_rational).collect();
        write!(f, "[{}]{}", body.join(","), if self.torsion { "" } else { "*" })
    }
}

/// Outcome of the greedy walk started at one in-box characteristic vector.
#[derive(Debug, Clone)]
pub struct FullPath {
    /// Where the walk started. Initial in the range sense whenever the
    /// start was taken from the initial box; mid-class starts (used by the
    /// singular census) keep their own start vector here.
    pub initial: CharVector,
    /// Reached endpoint with every coordinate in [m(i), -m(i)-2]; absent
    /// for failed walks and for loop classes.
    pub terminal: Option<CharVector>,
    /// True when the walk never left the box: it reached a terminal vector
    /// or, on a singular lattice, revisited a vector.
    pub ends_correctly: bool,
    /// Singular lattices only: the walk closed up on itself.
    pub has_loop: bool,
    /// Number of distinct vectors seen.
    pub visited_count: usize,
    /// Alexander-minimal vector over the visited orbit (the start, since F
    /// never decreases along pushes).
    pub min_alex_vector: CharVector,
    /// Alexander-maximal visited vector (the last one before stopping).
    pub max_alex_vector: CharVector,
    /// Pushes applied at the centre. On invertible lattices this equals the
    /// F-spread of the walk.
    pub central_steps: u64,
    /// Absolute grading, constant along the walk; absent exactly for
    /// non-torsion classes of singular lattices.
    pub maslov: Option<Rational>,
    pub spinc: SpinCLabel,
    /// Dedup key: the unique initial vector (invertible case), the unique
    /// terminal vector (singular, no loop), or the least cycle vector.
    pub representative: CharVector,
}

impl FullPath {
    /// Initial vector of the conjugate class. Defined only for loop-free
    /// ending-correctly walks, where the terminal vector is unique.
    pub fn conjugate_initial(&self) -> Result<CharVector> {
        if !self.ends_correctly {
            return Err(Error::Contract(
                "conjugate initial of a walk that does not end correctly".into(),
            ));
        }
        match (&self.terminal, self.has_loop) {
            (Some(t), false) => Ok(t.negated()),
            _ => Err(Error::Unsupported(
                "conjugate initial of a loop class; use its cycle representative".into(),
            )),
        }
    }
}

/// Which of the two tau formulas to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauSide {
    /// Value of the class itself: 1/2 (1/|e| + e1^T Q^-1 Z) minimized over
    /// the F-maximal member class (attained at its initial vector).
    Graph,
    /// Pairing side: minus the minimum of the singleton Graph values,
    /// attained at the F-minimal member class.
    DualFunctional,
}

/// A star graph together with its intersection form and the cached data the
/// walk needs.
#[derive(Debug, Clone)]
pub struct Lattice {
    graph: StarGraph,
    form: IntersectionForm,
    m: Vec<i64>,
    adj: Vec<Vec<usize>>,
    /// First row of Q^-1 (the regular-fibre functional); None when singular.
    row0: Option<Vec<Rational>>,
}

impl Lattice {
    pub fn new(graph: StarGraph) -> Result<Self> {
        let form = intersection_form(&graph)?;
        let m = graph.framings();
        let adj: Vec<Vec<usize>> = (0..graph.vertex_count()).map(|i| graph.neighbors(i)).collect();
        let row0 = form.qinv().map(|qi| qi[0].clone());
        Ok(Lattice {
            graph,
            form,
            m,
            adj,
            row0,
        })
    }

    pub fn from_invariants(s: &SeifertInvariants) -> Result<Self> {
        Lattice::new(standard_graph(s)?)
    }

    pub fn graph(&self) -> &StarGraph {
        &self.graph
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    pub fn size(&self) -> usize {
        self.m.len()
    }

    pub fn framings(&self) -> &[i64] {
        &self.m
    }

    fn row0(&self) -> Result<&[Rational]> {
        self.row0.as_deref().ok_or_else(|| {
            Error::Unsupported("Alexander data needs an invertible intersection form".into())
        })
    }

    fn check_vector(&self, v: &CharVector) -> Result<()> {
        if v.len() != self.size() {
            return Err(Error::Contract(format!(
                "vector length {} on a {}-vertex lattice",
                v.len(),
                self.size()
            )));
        }
        if !self.is_characteristic(v) {
            return Err(Error::Contract(format!("{v} is not characteristic")));
        }
        Ok(())
    }

    pub fn canonical_vector(&self) -> CharVector {
        CharVector::new(self.m.iter().map(|&m| m + 2).collect())
    }

    pub fn is_characteristic(&self, v: &CharVector) -> bool {
        v.len() == self.size()
            && v.coords().iter().zip(&self.m).all(|(&vi, &mi)| (vi - mi).rem_euclid(2) == 0)
    }

    /// All coordinates in [m(i)+2, -m(i)]: a legal walk start for a class.
    pub fn is_initial(&self, v: &CharVector) -> bool {
        self.is_characteristic(v)
            && v.coords()
                .iter()
                .zip(&self.m)
                .all(|(&vi, &mi)| mi + 2 <= vi && vi <= -mi)
    }

    /// All coordinates in [m(i), -m(i)-2]: a legal walk endpoint.
    pub fn is_terminal(&self, v: &CharVector) -> bool {
        self.is_characteristic(v)
            && v.coords()
                .iter()
                .zip(&self.m)
                .all(|(&vi, &mi)| mi <= vi && vi <= -mi - 2)
    }

    /// The walk's box: |v_i| <= -m(i) for every vertex.
    pub fn in_box(&self, v: &CharVector) -> bool {
        v.coords().iter().zip(&self.m).all(|(&vi, &mi)| vi.abs() <= -mi)
    }

    /// V + 2 Q e_i: the pushed coordinate drops to m(i), each neighbour
    /// gains 2. Only admissible where v_i = -m(i).
    pub fn push_step(&self, v: &CharVector, i: usize) -> Result<CharVector> {
        self.check_vector(v)?;
        if i >= self.size() || v.coords()[i] != -self.m[i] {
            return Err(Error::Contract(format!(
                "push at vertex {i} of {v} needs coordinate {}",
                -self.m.get(i).copied().unwrap_or(0)
            )));
        }
        let mut out = v.coords().to_vec();
        out[i] += 2 * self.m[i];
        for &nb in &self.adj[i] {
            out[nb] += 2;
        }
        Ok(CharVector::new(out))
    }

    /// Runs the greedy walk (always the lowest admissible vertex) from any
    /// in-box characteristic vector. The verdict and endpoint are properties
    /// of the class, not of the order; mid-class starts are accepted so that
    /// singular classes without any initial vector can still be walked.
    pub fn full_path(&self, start: &CharVector) -> Result<FullPath> {
        self.walk(start, |v, m| (0..v.len()).find(|&i| v[i] == -m[i]))
    }

    /// Same walk with a caller-chosen admissible-vertex selector; exposed
    /// for the order-independence suite.
    pub fn full_path_with<F>(&self, start: &CharVector, mut pick: F) -> Result<FullPath>
    where
        F: FnMut(&[usize]) -> usize,
    {
        self.walk(start, |v, m| {
            let open: Vec<usize> = (0..v.len()).filter(|&i| v[i] == -m[i]).collect();
            if open.is_empty() {
                None
            } else {
                let k = pick(&open);
                Some(open[k % open.len()])
            }
        })
    }

    fn walk<F>(&self, start: &CharVector, mut next: F) -> Result<FullPath>
    where
        F: FnMut(&[i64], &[i64]) -> Option<usize>,
    {
        self.check_vector(start)?;
        if !self.in_box(start) {
            return Err(Error::Contract(format!("walk start {start} is outside the box")));
        }
        let singular = self.form.definiteness() == Definiteness::Singular;
        let mut cur = start.clone();
        let mut order: Vec<CharVector> = vec![cur.clone()];
        let mut seen: HashSet<CharVector> = HashSet::from([cur.clone()]);
        let mut central: u64 = 0;

        loop {
            let Some(i) = next(cur.coords(), &self.m) else {
                // No admissible vertex and still inside the box: with the
                // characteristic parity this is exactly the terminal range.
                debug_assert!(self.is_terminal(&cur));
                return self.finish(start, order, Some(cur), false, central);
            };
            cur = self.push_step(&cur, i)?;
            if i == 0 {
                central += 1;
            }
            if !self.in_box(&cur) {
                let mut path = self.finish(start, order, None, false, central)?;
                path.ends_correctly = false;
                return Ok(path);
            }
            if !seen.insert(cur.clone()) {
                if !singular {
                    return Err(Error::Consistency(format!(
                        "walk from {start} revisited {cur} on an invertible lattice"
                    )));
                }
                let at = order.iter().position(|z| z == &cur).expect("revisited");
                let cycle_min = order[at..].iter().min().expect("cycle").clone();
                return self.finish_loop(start, order, central, cycle_min);
            }
            order.push(cur.clone());
        }
    }

    fn finish(
        &self,
        start: &CharVector,
        order: Vec<CharVector>,
        terminal: Option<CharVector>,
        has_loop: bool,
        central: u64,
    ) -> Result<FullPath> {
        let last = order.last().expect("nonempty walk").clone();
        let spinc = self.spin_c_label(start)?;
        let maslov = self.maslov_opt(start)?;
        let representative = match &terminal {
            Some(t) if self.form.definiteness() == Definiteness::Singular => t.clone(),
            Some(_) => start.clone(),
            None => start.clone(),
        };
        let ends = terminal.is_some();
        if let (Some(t), Ok(row0)) = (&terminal, self.row0()) {
            // Each centre push raises F by exactly 1
            // and every other push fixes it.
            let spread = (dot(row0, t) - dot(row0, start)) / rat_int(2);
            debug_assert_eq!(spread, rat_int(central as i64));
        }
        Ok(FullPath {
            initial: start.clone(),
            terminal,
            ends_correctly: ends,
            has_loop,
            visited_count: order.len(),
            min_alex_vector: order.first().expect("nonempty walk").clone(),
            max_alex_vector: last,
            central_steps: central,
            maslov,
            spinc,
            representative,
        })
    }

    fn finish_loop(
        &self,
        start: &CharVector,
        order: Vec<CharVector>,
        central: u64,
        cycle_min: CharVector,
    ) -> Result<FullPath> {
        let spinc = self.spin_c_label(start)?;
        let maslov = self.maslov_opt(start)?;
        Ok(FullPath {
            initial: start.clone(),
            terminal: None,
            ends_correctly: true,
            has_loop: true,
            visited_count: order.len(),
            min_alex_vector: order.first().expect("nonempty walk").clone(),
            max_alex_vector: order.last().expect("nonempty walk").clone(),
            central_steps: central,
            maslov,
            spinc,
            representative: cycle_min,
        })
    }

    /// Absolute grading of the class of V. Fails on singular lattices when
    /// the class is non-torsion.
    pub fn maslov(&self, v: &CharVector) -> Result<Rational> {
        self.maslov_opt(v)?.ok_or_else(|| {
            Error::Unsupported("grading undefined for a non-torsion class".into())
        })
    }

    fn maslov_opt(&self, v: &CharVector) -> Result<Option<Rational>> {
        self.check_vector(v)?;
        let n = rat_int(self.size() as i64);
        let four = rat_int(4);
        match self.form.definiteness() {
            Definiteness::NegativeDefinite => {
                let qi = self.form.qinv().expect("invertible");
                let vq = quad_form(qi, v);
                Ok(Some((vq + n) / four))
            }
            Definiteness::Indefinite => {
                let qi = self.form.qinv().expect("invertible");
                let vq = quad_form(qi, v);
                Ok(Some((vq + n - rat_int(6)) / four))
            }
            Definiteness::Singular => {
                let rhs = v.to_rationals();
                match solve_rational(self.form.q(), &rhs) {
                    None => Ok(None),
                    Some(b) => {
                        // B^T Q B = B^T V for any rational solution of QB=V;
                        // the value does not depend on the choice.
                        let btv: Rational =
                            b.iter().zip(v.coords()).map(|(bi, &vi)| bi * rat_int(vi)).sum();
                        Ok(Some((btv + n - rat_int(3)) / four))
                    }
                }
            }
        }
    }

    /// F(V) = (-e1^T Q^-1 e1 + e1^T Q^-1 V) / 2, the filtration level the
    /// regular fibre assigns to V. Needs an invertible form.
    pub fn alexander(&self, v: &CharVector) -> Result<Rational> {
        self.check_vector(v)?;
        let row0 = self.row0()?;
        Ok((dot(row0, v) - row0[0].clone()) / rat_int(2))
    }

    pub fn spin_c_label(&self, v: &CharVector) -> Result<SpinCLabel> {
        self.check_vector(v)?;
        match self.form.qinv() {
            Some(qi) => {
                let two = rat_int(2);
                let residues = (0..self.size())
                    .map(|i| {
                        let yi = dot(&qi[i], v);
                        let r = &yi - two.clone() * (yi.clone() / two.clone()).floor();
                        r
                    })
                    .collect();
                Ok(SpinCLabel {
                    residues,
                    torsion: true,
                })
            }
            None => {
                let smith = self.form.smith();
                let w = mat_vec(&smith.u, &v.to_bigints());
                let residues = (0..self.size())
                    .map(|i| {
                        let step = &smith.d[i][i] * BigInt::from(2);
                        let wi = if step.is_zero() {
                            w[i].clone()
                        } else {
                            ((&w[i] % &step) + &step) % &step
                        };
                        Rational::from(wi)
                    })
                    .collect();
                let torsion = solve_rational(self.form.q(), &v.to_rationals()).is_some();
                Ok(SpinCLabel { residues, torsion })
            }
        }
    }

    pub fn same_spin_c(&self, v: &CharVector, w: &CharVector) -> Result<bool> {
        Ok(self.spin_c_label(v)? == self.spin_c_label(w)?)
    }

    /// Whether the induced Spin^c structure is spin: Q^-1 V integral
    /// (invertible case) or V an integer combination of columns of Q.
    pub fn is_spin(&self, v: &CharVector) -> Result<bool> {
        self.check_vector(v)?;
        match self.form.qinv() {
            Some(qi) => Ok((0..self.size()).all(|i| dot(&qi[i], v).is_integer())),
            None => Ok(crate::linalg::solve_integer(self.form.q(), &v.to_bigints()).is_some()),
        }
    }

    /// Combined F-spread of one or more finished walks in a single homotopy
    /// class: max F over terminals minus min F over initials. Evaluated both
    /// as an F-difference and through the conjugate-pair functional, which
    /// must agree.
    pub fn height(&self, paths: &[&FullPath]) -> Result<i64> {
        if paths.is_empty() {
            return Err(Error::Contract("height of an empty class list".into()));
        }
        for p in paths {
            if !p.ends_correctly || p.has_loop || p.terminal.is_none() {
                return Err(Error::Contract(
                    "height needs loop-free walks that end correctly".into(),
                ));
            }
            if p.spinc != paths[0].spinc || p.maslov != paths[0].maslov {
                return Err(Error::Contract(
                    "height needs classes in one Spin^c structure and grading".into(),
                ));
            }
        }
        let row0 = self.row0()?;
        let f_init = |p: &FullPath| (dot(row0, &p.initial) - row0[0].clone()) / rat_int(2);
        let f_term =
            |p: &FullPath| (dot(row0, p.terminal.as_ref().expect("checked")) - row0[0].clone()) / rat_int(2);
        let fmin = paths.iter().map(|p| f_init(p)).min().expect("nonempty");
        let fmax_path = paths
            .iter()
            .max_by_key(|p| f_term(p))
            .expect("nonempty");
        let fmax = f_term(fmax_path);
        let spread = fmax - fmin.clone();

        // Same number through the pair functional: -e1^T Q^-1 (Z1 + Z'k)/2
        // with Z1 the F-minimal initial and Z'k the negated F-maximal
        // terminal.
        let z1 = paths
            .iter()
            .min_by_key(|p| f_init(p))
            .expect("nonempty")
            .initial
            .clone();
        let zk = fmax_path.terminal.as_ref().expect("checked").negated();
        let pair_sum: Vec<Rational> = z1
            .coords()
            .iter()
            .zip(zk.coords())
            .map(|(&a, &b)| (rat_int(a) + rat_int(b)) / rat_int(2))
            .collect();
        let dual: Rational = -row0
            .iter()
            .zip(&pair_sum)
            .map(|(r, s)| r * s)
            .sum::<Rational>();
        if dual != spread {
            return Err(Error::Consistency(format!(
                "height forms disagree: F-spread {} vs pair functional {}",
                fmt_rational(&spread),
                fmt_rational(&dual)
            )));
        }
        if !spread.is_integer() || spread < Rational::zero() {
            return Err(Error::Consistency(format!(
                "height {} is not a nonnegative integer",
                fmt_rational(&spread)
            )));
        }
        big_to_i64(spread.numer())
    }

    /// Every vector of the initial box, in odometer order.
    pub fn initial_vectors(&self) -> Vec<CharVector> {
        self.box_vectors(|m| (m + 2, -m))
    }

    fn box_vectors(&self, range: impl Fn(i64) -> (i64, i64)) -> Vec<CharVector> {
        let spans: Vec<(i64, i64)> = self.m.iter().map(|&m| range(m)).collect();
        if spans.iter().any(|&(lo, hi)| lo > hi) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur: Vec<i64> = spans.iter().map(|&(lo, _)| lo).collect();
        loop {
            out.push(CharVector::new(cur.clone()));
            let mut k = spans.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                cur[k] += 2;
                if cur[k] <= spans[k].1 {
                    break;
                }
                cur[k] = spans[k].0;
            }
        }
    }

    /// All ending-correctly classes, one walk per class. Invertible forms
    /// are scanned over the initial box, where every class has a unique
    /// initial vector. Singular forms are scanned over the whole box,
    /// because loop classes need not contain any initial vector; walks are
    /// then deduplicated by endpoint or cycle representative.
    pub fn enumerate_basis(&self, filter: Option<&SpinCLabel>) -> Result<Vec<FullPath>> {
        let singular = self.form.definiteness() == Definiteness::Singular;
        let starts = if singular {
            self.box_vectors(|m| (m, -m))
        } else {
            self.initial_vectors()
        };
        let mut classes: BTreeMap<CharVector, FullPath> = BTreeMap::new();
        let mut initial_of: HashMap<CharVector, CharVector> = HashMap::new();
        for start in &starts {
            let path = self.full_path(start)?;
            if !path.ends_correctly {
                continue;
            }
            if let Some(label) = filter {
                if &path.spinc != label {
                    continue;
                }
            }
            if !singular {
                if let Some(other) = initial_of.insert(
                    path.terminal.clone().expect("invertible walks terminate"),
                    start.clone(),
                ) {
                    return Err(Error::Consistency(format!(
                        "initial vectors {other} and {start} share one class"
                    )));
                }
            }
            let keep_over = |old: &FullPath, new: &FullPath| {
                // Prefer a walk started at a true initial vector, then the
                // shortest trace, for a stable census on singular forms.
                (self.is_initial(&new.initial), std::cmp::Reverse(new.visited_count), )
                    > (self.is_initial(&old.initial), std::cmp::Reverse(old.visited_count))
            };
            match classes.entry(path.representative.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(path);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    if keep_over(e.get(), &path) {
                        e.insert(path);
                    }
                }
            }
        }
        let mut decorated: Vec<(Option<Rational>, FullPath)> = classes
            .into_values()
            .map(|p| (self.row0.as_ref().map(|r| dot(r, &p.initial)), p))
            .collect();
        decorated.sort_by(|a, b| {
            (&a.1.spinc, &a.0, &a.1.representative).cmp(&(&b.1.spinc, &b.0, &b.1.representative))
        });
        Ok(decorated.into_iter().map(|t| t.1).collect())
    }

    /// Tau invariant of a homogeneous class list against the regular fibre.
    pub fn tau(&self, class: &[&FullPath], side: TauSide) -> Result<Rational> {
        if class.is_empty() {
            return Err(Error::Contract("tau of an empty class list".into()));
        }
        for p in class {
            if !p.ends_correctly || p.has_loop {
                return Err(Error::Contract("tau needs loop-free ending-correctly classes".into()));
            }
            if p.spinc != class[0].spinc || p.maslov != class[0].maslov {
                return Err(Error::Contract("tau needs a homogeneous class list".into()));
            }
        }
        let row0 = self.row0()?;
        // 1/|e|: the regular-fibre self-pairing enters with the sign that
        // makes both definiteness cases positive.
        let lead = row0[0].abs();
        let value = |p: &FullPath| (lead.clone() + dot(row0, &p.initial)) / rat_int(2);
        let f_init = |p: &FullPath| dot(row0, &p.initial);
        match side {
            TauSide::Graph => {
                let top = class.iter().max_by_key(|p| f_init(p)).expect("nonempty");
                Ok(value(top))
            }
            TauSide::DualFunctional => {
                let low = class.iter().min_by_key(|p| f_init(p)).expect("nonempty");
                Ok(-value(low))
            }
        }
    }

    /// Genus of the regular fibre, from the canonical class of a
    /// negative-definite graph.
    pub fn seifert_genus(&self) -> Result<Rational> {
        if self.form.definiteness() != Definiteness::NegativeDefinite {
            return Err(Error::Contract(
                "fibre genus is computed on the negative-definite side".into(),
            ));
        }
        let row0 = self.row0()?;
        let w = self.canonical_vector();
        let formula = (-row0[0].clone() + dot(row0, &w)) / rat_int(2);
        let path = self.full_path(&w)?;
        if !path.ends_correctly {
            return Err(Error::Consistency(
                "canonical class fails to end correctly on a negative-definite graph".into(),
            ));
        }
        let other = self.tau(&[&path], TauSide::Graph)?;
        if other != formula {
            return Err(Error::Consistency(format!(
                "fibre genus {} disagrees with tau {}",
                fmt_rational(&formula),
                fmt_rational(&other)
            )));
        }
        Ok(formula)
    }
}

fn dot(row: &[Rational], v: &CharVector) -> Rational {
    row.iter().zip(v.coords()).map(|(r, &x)| r * rat_int(x)).sum()
}

fn quad_form(qinv: &[Vec<Rational>], v: &CharVector) -> Rational {
    let mut total = Rational::zero();
    for (i, &vi) in v.coords().iter().enumerate() {
        total += rat_int(vi) * dot(&qinv[i], v);
    }
    total
}

/// L-space verdict for a Seifert fibred space, orientation-normalized so the
/// walk runs on the side with positive Euler number.
#[derive(Debug, Clone)]
pub struct LSpaceReport {
    pub verdict: bool,
    /// The orientation the test ran on.
    pub oriented: SeifertInvariants,
    pub dualized: bool,
    /// Zero Euler number: first Betti number one, never an L-space.
    pub euler_zero: bool,
    /// Centre weight nonnegative after normalization: always an L-space.
    pub e0_shortcut: bool,
    pub vcan_path: Option<FullPath>,
}

/// Rank test for the Heegaard Floer homology: the manifold is an L-space
/// exactly when the canonical vector fails to end correctly on the
/// positive-Euler-number orientation. Orientation reversal preserves the
/// verdict, so inputs with negative Euler number are dualized first.
pub fn is_l_space(s: &SeifertInvariants) -> Result<LSpaceReport> {
    let e = s.euler_number();
    if e.is_zero() {
        return Ok(LSpaceReport {
            verdict: false,
            oriented: s.clone(),
            dualized: false,
            euler_zero: true,
            e0_shortcut: false,
            vcan_path: None,
        });
    }
    let dualized = e < Rational::zero();
    let oriented = if dualized { s.dual() } else { s.clone() };
    if oriented.e0() >= 0 {
        return Ok(LSpaceReport {
            verdict: true,
            oriented,
            dualized,
            euler_zero: false,
            e0_shortcut: true,
            vcan_path: None,
        });
    }
    let lattice = Lattice::from_invariants(&oriented)?;
    let path = lattice.full_path(&lattice.canonical_vector())?;
    Ok(LSpaceReport {
        verdict: !path.ends_correctly,
        oriented,
        dualized,
        euler_zero: false,
        e0_shortcut: false,
        vcan_path: Some(path),
    })
}
