//! Dense Gaussian elimination over a [`FieldCtx`].

use super::field::{FieldCtx, FieldElem};

pub type Matrix = Vec<Vec<FieldElem>>;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows are moved to the bottom.
pub fn rref(ctx: &FieldCtx, rows: &mut Matrix) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *x = ctx.sub(*x, ctx.mul(factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(ctx: &FieldCtx, rows: &[Vec<FieldElem>]) -> usize {
    let mut m = rows.to_vec();
    rank_in_place(ctx, &mut m)
}

/// Row-echelon rank without back substitution; destroys `rows`.
pub fn rank_in_place(ctx: &FieldCtx, rows: &mut [Vec<FieldElem>]) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][c]).unwrap();
        for i in r + 1..nrows {
            if rows[i][c].is_zero() {
                continue;
            }
            let factor = ctx.mul(rows[i][c], inv);
            for j in c..ncols {
                let pv = rows[r][j];
                if !pv.is_zero() {
                    rows[i][j] = ctx.sub(rows[i][j], ctx.mul(factor, pv));
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right kernel {x : A x = 0}, one vector per free column in
/// increasing column order.
pub fn null_space(ctx: &FieldCtx, a: &[Vec<FieldElem>], ncols: usize) -> Matrix {
    let mut m = a.to_vec();
    let pivots = rref(ctx, &mut m);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElem::ZERO; ncols];
        v[free] = FieldElem::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = ctx.neg(m[r][free]);
        }
        out.push(v);
    }
    out
}

pub fn det(ctx: &FieldCtx, a: &[Vec<FieldElem>]) -> FieldElem {
    let mut m = a.to_vec();
    det_in_place(ctx, &mut m)
}

pub fn det_in_place(ctx: &FieldCtx, m: &mut [Vec<FieldElem>]) -> FieldElem {
    let n = m.len();
    let mut d = FieldElem::ONE;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return FieldElem::ZERO;
        };
        if pr != c {
            m.swap(pr, c);
            d = ctx.neg(d);
        }
        let pivot = m[c][c];
        d = ctx.mul(d, pivot);
        let inv = ctx.inv(pivot).unwrap();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = ctx.mul(m[i][c], inv);
            for j in c..n {
                let pv = m[c][j];
                if !pv.is_zero() {
                    m[i][j] = ctx.sub(m[i][j], ctx.mul(factor, pv));
                }
            }
        }
    }
    d
}

/// Rank of a GF(2) matrix given as row bitmasks; destroys `rows`.
pub fn rank_gf2(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field::DEFAULT_MAX_FIELD_ORDER;

    fn e(v: &[u32]) -> Vec<FieldElem> {
        v.iter().map(|&x| FieldElem(x)).collect()
    }

    #[test]
    fn rank_and_kernel_over_gf3() {
        let f = FieldCtx::new(3, 1, DEFAULT_MAX_FIELD_ORDER).unwrap();
        let a = vec![e(&[1, 2, 0]), e(&[2, 1, 0]), e(&[0, 0, 1])];
        // second row = 2 * first row
        assert_eq!(rank(&f, &a), 2);
        let ker = null_space(&f, &a, 3);
        assert_eq!(ker.len(), 1);
        for row in &a {
            let dot = f.sum(row.iter().zip(&ker[0]).map(|(&x, &y)| f.mul(x, y)));
            assert!(dot.is_zero());
        }
        assert_eq!(det(&f, &a), FieldElem::ZERO);
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let f = FieldCtx::new(2, 3, DEFAULT_MAX_FIELD_ORDER).unwrap();
        let a = vec![e(&[1, 3, 5]), e(&[2, 7, 6]), e(&[4, 1, 3])];
        let m = |i: usize, j: usize| a[i][j];
        let term = |x: FieldElem, y: FieldElem, z: FieldElem| f.mul(f.mul(x, y), z);
        // characteristic 2: signs vanish
        let expected = f.sum([
            term(m(0, 0), m(1, 1), m(2, 2)),
            term(m(0, 0), m(1, 2), m(2, 1)),
            term(m(0, 1), m(1, 0), m(2, 2)),
            term(m(0, 1), m(1, 2), m(2, 0)),
            term(m(0, 2), m(1, 0), m(2, 1)),
            term(m(0, 2), m(1, 1), m(2, 0)),
        ]);
        assert_eq!(det(&f, &a), expected);
    }

    #[test]
    fn gf2_bit_rank() {
        let mut rows = [0b011, 0b110, 0b101, 0b000];
        assert_eq!(rank_gf2(&mut rows), 2);
        let mut rows = [0b001, 0b010, 0b100];
        assert_eq!(rank_gf2(&mut rows), 3);
    }
}
