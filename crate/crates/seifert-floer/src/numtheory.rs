//! Exact rationals, negative continued fractions, and best upper
//! approximations located through the Stern–Brocot tree.
//!
//! All arithmetic in this crate is exact. `Rational` is an arbitrary
//! precision fraction kept reduced with a positive denominator; floating
//! point is banned everywhere in the artifact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced, denominator always positive.
pub type Rational = num_rational::BigRational;

/// Builds a rational from machine integers. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders a rational as `p/q`, or `p` when the value is an integer.
/// This is the only formatting used anywhere in reports; no floats.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or `p` with an optional sign. Zero denominators are a parse
/// error, not a panic.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let mk_err = || Error::Parse(format!("invalid rational `{s}`"));
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_s.parse().map_err(|_| mk_err())?;
    let den: BigInt = den_s.parse().map_err(|_| mk_err())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// A negative (Hirzebruch–Jung) continued fraction `[m1,...,mk]`,
/// every term at most -2. Encodes `-1/r` for `r` in `(0,1)`: the value of
/// `[m1,...,mk]` is `m1` when `k = 1` and `m1 - 1/[m2,...,mk]` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegContFrac {
    terms: Vec<i64>,
}

impl NegContFrac {
    /// Wraps validated terms; every term must be at most -2 and the list
    /// nonempty.
    pub fn new(terms: Vec<i64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Contract("empty continued fraction".into()));
        }
        if let Some(bad) = terms.iter().find(|&&m| m > -2) {
            return Err(Error::Contract(format!(
                "continued-fraction term {bad} exceeds -2"
            )));
        }
        Ok(NegContFrac { terms })
    }

    pub fn terms(&self) -> &[i64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Expands `r` in `(0,1)` into the negative continued fraction of `-1/r`.
///
/// Step: with `x = -1/r`, emit `floor(x)` and continue on `-1/(x - floor(x))`
/// until `x` is an integer. Every emitted term is at most -2.
///
/// # Examples
///
/// ```
/// use seifert_floer::numtheory::{neg_cont_frac, rat};
/// assert_eq!(neg_cont_frac(&rat(1, 2)).unwrap().terms(), &[-2]);
/// assert_eq!(neg_cont_frac(&rat(4, 47)).unwrap().terms(), &[-12, -4]);
/// ```
pub fn neg_cont_frac(r: &Rational) -> Result<NegContFrac> {
    if !(r > &Rational::zero() && r < &Rational::one()) {
        return Err(Error::Contract(format!(
            "continued-fraction argument {} outside (0,1)",
            fmt_rational(r)
        )));
    }
    let mut x = -r.recip();
    let mut terms = Vec::new();
    loop {
        if x.is_integer() {
            terms.push(big_to_i64(x.numer())?);
            break;
        }
        let fl = x.floor();
        terms.push(big_to_i64(fl.numer())?);
        x = -(x - fl).recip();
    }
    NegContFrac::new(terms)
}

/// Evaluates an arbitrary integer chain by the same recursion
/// (`[m1,...,mk] = m1 - 1/[m2,...,mk]`). Accepts terms outside the
/// Hirzebruch–Jung range for internal comparisons; a division by zero during
/// the fold signals a zero-determinant chain to the caller.
pub fn eval_cont_frac(terms: &[i64]) -> Result<Rational> {
    let mut iter = terms.iter().rev();
    let last = iter
        .next()
        .ok_or_else(|| Error::Contract("empty continued fraction".into()))?;
    let mut value = rat_int(*last);
    for &m in iter {
        if value.is_zero() {
            return Err(Error::Contract(
                "zero-determinant chain in continued-fraction evaluation".into(),
            ));
        }
        value = rat_int(m) - value.recip();
    }
    Ok(value)
}

/// The unique fraction of minimal denominator strictly inside `(lo, hi)`;
/// ties at denominator 1 are broken by the minimal numerator (the smallest
/// integer in the interval). Denominator ties cannot occur past 1.
///
/// # Examples
///
/// ```
/// use seifert_floer::numtheory::{simplest_fraction_in, rat};
/// assert_eq!(simplest_fraction_in(&rat(1, 2), &rat(3, 4)).unwrap(), rat(2, 3));
/// assert_eq!(simplest_fraction_in(&rat(0, 1), &rat(1, 1)).unwrap(), rat(1, 2));
/// assert_eq!(simplest_fraction_in(&rat(2, 3), &rat(5, 7)).unwrap(), rat(7, 10));
/// ```
pub fn simplest_fraction_in(lo: &Rational, hi: &Rational) -> Result<Rational> {
    if lo >= hi {
        return Err(Error::Contract(format!(
            "empty interval ({}, {})",
            fmt_rational(lo),
            fmt_rational(hi)
        )));
    }
    Ok(simplest_rec(lo.clone(), hi.clone()))
}

/// Recursive Stern–Brocot descent. Each level either finds an integer in the
/// open interval or strips the integer part and recurses on the reciprocal
/// interval; denominators shrink strictly, so the recursion terminates.
fn simplest_rec(lo: Rational, hi: Rational) -> Rational {
    let fl = lo.floor();
    let candidate = &fl + Rational::one();
    if candidate < hi {
        return candidate;
    }
    // No integer inside: (lo, hi) sits within [fl, fl + 1].
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    if lo_f.is_zero() {
        // Interval (0, hi_f) shifted by fl: the simplest inhabitant is 1/q
        // for the least q with 1/q < hi_f.
        let q = hi_f.recip().floor() + Rational::one();
        return fl + q.recip();
    }
    fl + simplest_rec(hi_f.recip(), lo_f.recip()).recip()
}

/// Best upper approximation of `r` in `(0,1)` at denominator exactly `q >= 2`:
/// the numerator `p = floor(q*r) + 1` is accepted when no fraction with
/// denominator at most `q` lies strictly between `r` and `p/q`, which holds
/// exactly when the simplest fraction in that interval has denominator
/// greater than `q`. Returns `None` when the candidate is beaten.
///
/// # Examples
///
/// ```
/// use num_bigint::BigInt;
/// use seifert_floer::numtheory::{best_upper_approx, rat};
/// assert_eq!(best_upper_approx(&rat(2, 3), 7).unwrap(), Some(BigInt::from(5)));
/// assert_eq!(best_upper_approx(&rat(1, 2), 4).unwrap(), None);
/// ```
pub fn best_upper_approx(r: &Rational, q: u64) -> Result<Option<BigInt>> {
    if q < 2 {
        return Err(Error::Contract(format!(
            "best upper approximation needs q >= 2, got {q}"
        )));
    }
    if !(r > &Rational::zero() && r < &Rational::one()) {
        return Err(Error::Contract(format!(
            "best-upper-approximation argument {} outside (0,1)",
            fmt_rational(r)
        )));
    }
    let qr = Rational::from_integer(BigInt::from(q)) * r;
    let p = qr.floor().numer() + BigInt::one();
    // the approximation must sit at denominator exactly q: an unreduced
    // candidate (including p = q, the fraction 1) belongs to a smaller level
    if p.gcd(&BigInt::from(q)) != BigInt::one() {
        return Ok(None);
    }
    let hi = Rational::new(p.clone(), BigInt::from(q));
    let simplest = simplest_fraction_in(r, &hi)?;
    if simplest.denom() > &BigInt::from(q) {
        Ok(Some(p))
    } else {
        Ok(None)
    }
}

/// Checked narrowing used when continued-fraction terms become graph
/// framings; exact inputs from the supported grammar never overflow.
pub(crate) fn big_to_i64(n: &BigInt) -> Result<i64> {
    n.to_i64().ok_or_else(|| {
        Error::Unsupported(format!("integer {n} exceeds the supported framing range"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive reference for `best_upper_approx`: take the smallest
    /// reduced fraction `p/q` inside `(r, 1)`, then scan every fraction
    /// `k/h` with `1 <= h <= q` for interlopers. A larger reduced numerator
    /// can never win instead, because the smaller one interlopes for it.
    pub(crate) fn best_upper_brute(r: &Rational, q: u64) -> Option<BigInt> {
        let qr = Rational::from_integer(BigInt::from(q)) * r;
        let mut p = qr.floor().numer() + BigInt::one();
        while p < BigInt::from(q) && p.gcd(&BigInt::from(q)) != BigInt::one() {
            p += 1;
        }
        if p >= BigInt::from(q) {
            return None;
        }
        let hi = Rational::new(p.clone(), BigInt::from(q));
        for h in 1..=q {
            let mut k = BigInt::one();
            loop {
                let f = Rational::new(k.clone(), BigInt::from(h));
                if f >= hi {
                    break;
                }
                if &f > r {
                    return None;
                }
                k += 1;
            }
        }
        Some(p)
    }

    /// Exhaustive reference for `simplest_fraction_in`: try denominators
    /// upward until some fraction lands strictly inside.
    fn simplest_brute(lo: &Rational, hi: &Rational) -> Rational {
        for den in 1u64.. {
            let d = BigInt::from(den);
            let lo_scaled = lo * Rational::from_integer(d.clone());
            let mut num = lo_scaled.floor().numer() + BigInt::one();
            if &lo_scaled == &Rational::from_integer(lo_scaled.floor().numer().clone()) {
                // lo*den integral: first strictly-greater numerator is that +1,
                // which floor()+1 already is.
            }
            loop {
                let f = Rational::new(num.clone(), d.clone());
                if &f >= hi {
                    break;
                }
                if &f > lo {
                    return f;
                }
                num += 1;
            }
        }
        unreachable!()
    }

    #[test]
    fn neg_cont_frac_examples() {
        assert_eq!(neg_cont_frac(&rat(1, 2)).unwrap().terms(), &[-2]);
        assert_eq!(neg_cont_frac(&rat(4, 47)).unwrap().terms(), &[-12, -4]);
        assert_eq!(neg_cont_frac(&rat(4, 7)).unwrap().terms(), &[-2, -4]);
        assert_eq!(neg_cont_frac(&rat(6, 11)).unwrap().terms(), &[-2, -6]);
        assert!(neg_cont_frac(&rat(3, 2)).is_err());
        assert!(neg_cont_frac(&rat(0, 1)).is_err());
    }

    #[test]
    fn eval_cont_frac_examples() {
        assert_eq!(eval_cont_frac(&[-2]).unwrap(), rat_int(-2));
        assert_eq!(eval_cont_frac(&[-12, -4]).unwrap(), rat(-47, 4));
        // Hand recursion: -2 - 1/(-2) = -3/2.
        assert_eq!(eval_cont_frac(&[-2, -2]).unwrap(), rat(-3, 2));
        assert!(eval_cont_frac(&[]).is_err());
    }

    #[test]
    fn round_trip_small_denominators() {
        for den in 2..=60i64 {
            for num in 1..den {
                let r = rat(num, den);
                let cf = neg_cont_frac(&r).unwrap();
                assert_eq!(eval_cont_frac(cf.terms()).unwrap(), -r.recip(), "r = {num}/{den}");
            }
        }
    }

    #[test]
    fn simplest_fraction_examples() {
        assert_eq!(simplest_fraction_in(&rat(1, 2), &rat(3, 4)).unwrap(), rat(2, 3));
        assert_eq!(simplest_fraction_in(&rat(0, 1), &rat(1, 1)).unwrap(), rat(1, 2));
        assert_eq!(simplest_fraction_in(&rat(2, 3), &rat(5, 7)).unwrap(), rat(7, 10));
        // Smallest integer wins the denominator-1 tie.
        assert_eq!(simplest_fraction_in(&rat(-3, 2), &rat(1, 2)).unwrap(), rat_int(-1));
        assert!(simplest_fraction_in(&rat(1, 2), &rat(1, 2)).is_err());
    }

    #[test]
    fn simplest_fraction_matches_exhaustive_search() {
        let mut checked = 0;
        for den_lo in 1..=13i64 {
            for num_lo in -13..=13i64 {
                let lo = rat(num_lo, den_lo);
                for den_hi in 1..=13i64 {
                    for num_hi in -13..=13i64 {
                        let hi = rat(num_hi, den_hi);
                        if lo >= hi {
                            continue;
                        }
                        checked += 1;
                        assert_eq!(
                            simplest_fraction_in(&lo, &hi).unwrap(),
                            simplest_brute(&lo, &hi),
                            "interval ({num_lo}/{den_lo}, {num_hi}/{den_hi})"
                        );
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn best_upper_examples() {
        let cases = [
            ((2, 3), 7, Some(5)),
            ((1, 4), 7, Some(2)),
            ((4, 47), 7, Some(1)),
            ((2, 3), 223, Some(149)),
            ((1, 4), 223, Some(56)),
            ((4, 47), 223, Some(19)),
            ((1, 2), 4, None),
        ];
        for ((n, d), q, expect) in cases {
            assert_eq!(
                best_upper_approx(&rat(n, d), q).unwrap(),
                expect.map(BigInt::from),
                "r = {n}/{d}, q = {q}"
            );
        }
    }

    #[test]
    fn best_upper_matches_brute_force() {
        for den in 2..=30i64 {
            for num in 1..den {
                let r = rat(num, den);
                for q in 2..=60u64 {
                    assert_eq!(
                        best_upper_approx(&r, q).unwrap(),
                        best_upper_brute(&r, q),
                        "r = {num}/{den}, q = {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn best_upper_candidate_identity() {
        // The candidate numerator is always (q*b + c)/a for r = b/a, with c
        // the representative of -q*b mod a inside [1, a]; acceptance never
        // changes the numerator, only whether it is reported.
        for den in 2..=40i64 {
            for num in 1..den {
                let r = rat(num, den);
                let a = r.denom().clone();
                let b = r.numer().clone();
                for q in 2..=40u64 {
                    let qb = &b * BigInt::from(q);
                    let mut c = (-&qb) % &a;
                    if c <= BigInt::zero() {
                        c += &a;
                    }
                    let p_candidate = (&qb + &c) / &a;
                    let qr = Rational::from_integer(BigInt::from(q)) * &r;
                    assert_eq!(p_candidate, qr.floor().numer() + BigInt::one());
                    if let Some(p) = best_upper_approx(&r, q).unwrap() {
                        assert_eq!(p, p_candidate, "r = {num}/{den}, q = {q}");
                        assert!(Rational::new(p, BigInt::from(q)) > r);
                    }
                }
            }
        }
    }
}
