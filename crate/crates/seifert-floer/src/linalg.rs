//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything here is sized for plumbing intersection forms (tens of rows,
//! not thousands), so clarity wins over asymptotics: Gauss-Jordan over
//! rationals, fraction-free Bareiss for determinants, and a textbook Smith
//! normal form over the integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numtheory::Rational;

pub(crate) type IntMatrix = Vec<Vec<BigInt>>;

pub(crate) fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub(crate) fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub(crate) fn mat_vec(a: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum())
        .collect()
}

/// Determinant by fraction-free Bareiss elimination; all intermediate
/// divisions are exact.
pub(crate) fn det_bareiss(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Inverse over the rationals; `None` when singular.
pub(crate) fn inverse_rational(a: &IntMatrix) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut work: Vec<Vec<Rational>> = a
        .iter()
        .map(|row| row.iter().map(|c| Rational::from_integer(c.clone())).collect())
        .collect();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = work[col][col].clone();
        for j in 0..n {
            work[col][j] = &work[col][j] / &pivot;
            inv[col][j] = &inv[col][j] / &pivot;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for j in 0..n {
                let w = &work[col][j] * &factor;
                work[r][j] = &work[r][j] - w;
                let v = &inv[col][j] * &factor;
                inv[r][j] = &inv[r][j] - v;
            }
        }
    }
    Some(inv)
}

/// One rational solution of `A x = b` for square, possibly singular `A`;
/// free variables are pinned to zero. `None` means inconsistent.
pub(crate) fn solve_rational(a: &IntMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .map(|c| Rational::from_integer(c.clone()))
                .chain(std::iter::once(rhs.clone()))
                .collect()
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, pr);
        let pivot = aug[row][col].clone();
        for j in col..=n {
            aug[row][j] = &aug[row][j] / &pivot;
        }
        for r in 0..n {
            if r == row || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for j in col..=n {
                let v = &aug[row][j] * &factor;
                aug[r][j] = &aug[r][j] - v;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    // Zero rows must carry zero right-hand sides.
    for r in row..n {
        if !aug[r][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = aug[r][n].clone();
    }
    Some(x)
}

/// Smith normal form: returns `(u, d, v)` with `d = u * a * v`, `u` and `v`
/// unimodular, `d` diagonal with nonnegative entries and `d[i] | d[i+1]`.
pub(crate) fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut d = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Pull a nonzero pivot into (t, t), preferring small magnitude to
        // keep coefficients tame.
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if d[i][j].is_zero() {
                    continue;
                }
                let better = match &pivot {
                    None => true,
                    Some((pi, pj)) => {
                        let (pi, pj): (&usize, &usize) = (pi, pj);
                        d[i][j].abs() < d[*pi][*pj].abs()
                    }
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            d.swap(t, pi);
            u.swap(t, pi);
        }
        if pj != t {
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }

        loop {
            let mut dirty = false;
            // Clear column t below and above with row operations.
            for i in 0..rows {
                if i == t || d[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&d[i][t], &d[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let w = &d[t][j] * &q;
                        d[i][j] = &d[i][j] - w;
                    }
                    for j in 0..rows {
                        let w = &u[t][j] * &q;
                        u[i][j] = &u[i][j] - w;
                    }
                }
                if !d[i][t].is_zero() {
                    // Remainder smaller than the pivot: swap it up and restart.
                    d.swap(t, i);
                    u.swap(t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Clear row t with column operations.
            for j in 0..cols {
                if j == t || d[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&d[t][j], &d[t][t]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let w = &d[i][t] * &q;
                        d[i][j] = &d[i][j] - w;
                    }
                    for i in 0..cols {
                        let w = &v[i][t] * &q;
                        v[i][j] = &v[i][j] - w;
                    }
                }
                if !d[t][j].is_zero() {
                    for row in d.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Pivot must divide the remaining block; if not, fold the offending
        // row in and redo the pivot step.
        let mut retry = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if (&d[i][j] % &d[t][t]).is_zero() {
                    continue;
                }
                for jj in 0..cols {
                    let w = d[i][jj].clone();
                    d[t][jj] = &d[t][jj] + w;
                }
                for jj in 0..rows {
                    let w = u[i][jj].clone();
                    u[t][jj] = &u[t][jj] + w;
                }
                retry = true;
                break 'scan;
            }
        }
        if retry {
            continue;
        }

        if d[t][t].is_negative() {
            for j in 0..cols {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    (u, d, v)
}

/// Quotient rounding toward the nearest integer, which keeps SNF remainders
/// at most half the pivot.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if &r.abs() * &two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + BigInt::one()
        } else {
            q - BigInt::one()
        }
    } else {
        q
    }
}

/// One integer solution of `A x = b`, via Smith normal form; `None` when no
/// integral solution exists.
pub(crate) fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let (u, d, v) = smith_normal_form(a);
    let c = mat_vec(&u, b);
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let di = if i < cols { d[i][i].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !c[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = num_integer::Integer::div_rem(&c[i], &di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(mat_vec(&v, &y))
}
