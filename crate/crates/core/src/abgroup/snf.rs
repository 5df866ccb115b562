//! Smith normal form over the integers.
//!
//! Pivoting: at every stage the pivot is a nonzero entry of smallest absolute
//! value in the remaining block, and rows and columns are cleared by
//! Euclidean division against it. When a remainder survives, the smallest
//! remainder becomes the new pivot. This keeps entries of the working matrix
//! bounded by the magnitude of the input, and keeps the transforms from
//! blowing up on the desk-scale matrices this crate deals with.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `u * a * v == d`, with `d` diagonal and `d[i,i] | d[i+1,i+1]`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, tracked alongside it.
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries, all positive, in divisibility order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Returns `(U, D, V)` with `U·A·V = D`.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith(a);
    (s.u, s.d, s.v)
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (rows, cols) = a.shape();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&d, t, t) else { break };
        move_pivot(&mut d, &mut u, &mut v, &mut v_inv, t, pi, pj);

        loop {
            // Clear column t below the pivot and row t right of it.
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                col_op(&mut d, &mut v, &mut v_inv, j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                let (pi, pj) = min_in_cross(&d, t);
                move_pivot(&mut d, &mut u, &mut v, &mut v_inv, t, pi, pj);
                continue;
            }
            // Pivot must divide the whole remaining block; otherwise fold an
            // offending row in and reduce again.
            let piv = d[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    Smith { u, d, v, v_inv, rank: t }
}

/// col[dst] += c * col[src] on `d` and `v`, with the inverse row operation on `v_inv`.
fn col_op(d: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    d.add_col_multiple(dst, src, c);
    v.add_col_multiple(dst, src, c);
    let neg = -c;
    v_inv.add_row_multiple(src, dst, &neg);
}

fn move_pivot(
    d: &mut IntMatrix,
    u: &mut IntMatrix,
    v: &mut IntMatrix,
    v_inv: &mut IntMatrix,
    t: usize,
    pi: usize,
    pj: usize,
) {
    d.swap_rows(t, pi);
    u.swap_rows(t, pi);
    d.swap_cols(t, pj);
    v.swap_cols(t, pj);
    v_inv.swap_rows(t, pj);
}

fn min_abs_entry(d: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in r0..d.rows() {
        for j in c0..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_in_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let consider = |i: usize, j: usize, best: &mut (usize, usize)| {
        let x = &d[(i, j)];
        if !x.is_zero() && x.abs() < d[*best].abs() {
            *best = (i, j);
        }
    };
    for i in t + 1..d.rows() {
        consider(i, t, &mut best);
    }
    for j in t + 1..d.cols() {
        consider(t, j, &mut best);
    }
    best
}

/// Solves `a · x = b` over the integers.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let s = smith(a);
    solve_with(&s, b)
}

/// Same as [`solve`] with a precomputed decomposition of `a`.
pub fn solve_with(s: &Smith, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let c = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); s.v.rows()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ci.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Basis of the integer null space `{x : a·x = 0}`, as columns.
pub fn null_space(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let idx: Vec<usize> = (s.rank..a.cols()).collect();
    s.v.select_cols(&idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn m(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows)
    }

    fn check(a: &IntMatrix) -> Smith {
        let s = smith(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        for i in 1..s.rank {
            assert!(s.d[(i, i)].is_multiple_of(&s.d[(i - 1, i - 1)]));
        }
        s
    }

    #[test]
    fn zero_one_by_one() {
        let (u, d, v) = smith_normal_form(&m(1, &[vec![0]]));
        assert_eq!(d, m(1, &[vec![0]]));
        assert_eq!(u, IntMatrix::identity(1));
        assert_eq!(v, IntMatrix::identity(1));
    }

    #[test]
    fn two_by_two_hand_reduction() {
        // gcd of entries is 2 and |det| = 8, so diag(2, 4).
        let s = check(&m(2, &[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn divisibility_needs_row_folding() {
        // diag(2, 3) is not in normal form; the answer is diag(1, 6).
        let s = check(&m(2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let s = check(&m(3, &[vec![1, 2, 3], vec![2, 4, 6]]));
        assert_eq!(s.rank, 1);
        let s = check(&m(2, &[vec![4, 6], vec![6, 9], vec![2, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::one()]);
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
    }

    #[test]
    fn solve_and_null_space() {
        let a = m(2, &[vec![2, 4], vec![6, 8]]);
        let x = solve(&a, &[BigInt::from(6), BigInt::from(14)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![BigInt::from(6), BigInt::from(14)]);
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(0)]).is_none());

        let k = null_space(&m(3, &[vec![1, 1, 1]]));
        assert_eq!(k.cols(), 2);
        assert!(m(3, &[vec![1, 1, 1]]).mul(&k).is_zero());
    }
}
