//! Integer and rational linear algebra on short dense vectors: Hermite normal
//! form, integer kernels, and exact rational solves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type IntVec = Vec<BigInt>;

fn axpy(target: &mut [BigInt], factor: &BigInt, source: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= factor * s;
    }
}

/// Row-echelon form by unimodular row operations over the first `ncols`
/// columns. Returns the number of pivot rows; rows below that are zero in
/// those columns. Pivots are positive and, when `reduce` is set, entries
/// above each pivot lie in `[0, pivot)`.
fn echelon(rows: &mut [IntVec], ncols: usize, reduce: bool) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                axpy(&mut tail[0], &q, &head[r]);
                if !rows[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for v in rows[r].iter_mut() {
                *v = -&*v;
            }
        }
        if reduce {
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if !q.is_zero() {
                    let (head, tail) = rows.split_at_mut(r);
                    axpy(&mut head[i], &q, &tail[0]);
                }
            }
        }
        r += 1;
    }
    r
}

/// Hermite normal form of the lattice spanned by `rows`, zero rows dropped.
pub fn hnf(mut rows: Vec<IntVec>) -> Vec<IntVec> {
    let Some(ncols) = rows.first().map(|r| r.len()) else { return rows };
    let rank = echelon(&mut rows, ncols, true);
    rows.truncate(rank);
    rows
}

/// Z-basis (in Hermite normal form) of `{v ∈ Z^n : M v = 0}` where `M` is
/// given by its rows.
pub fn integer_kernel(matrix: &[IntVec], n: usize) -> Vec<IntVec> {
    let m = matrix.len();
    // Row i of the augmented system is (column i of M | e_i).
    let mut rows: Vec<IntVec> = (0..n)
        .map(|i| {
            let mut row: IntVec = matrix.iter().map(|r| r[i].clone()).collect();
            row.extend((0..n).map(|j| BigInt::from((i == j) as i64)));
            row
        })
        .collect();
    let rank = echelon(&mut rows, m, false);
    let kernel: Vec<IntVec> = rows[rank..].iter().map(|r| r[m..].to_vec()).collect();
    if kernel.is_empty() {
        kernel
    } else {
        hnf(kernel)
    }
}

/// Unimodular `U` with `U · rows = [H; 0]`, returned with the rank.
pub fn hnf_with_transform(rows: &[IntVec]) -> (Vec<IntVec>, Vec<IntVec>, usize) {
    let k = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut aug: Vec<IntVec> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| BigInt::from((i == j) as i64)));
            row
        })
        .collect();
    let rank = echelon(&mut aug, ncols, true);
    let h = aug.iter().map(|r| r[..ncols].to_vec()).collect();
    let u = aug.iter().map(|r| r[ncols..].to_vec()).collect();
    (h, u, rank)
}

/// Solve `Σ x_j · columns[j] = rhs` exactly. `None` if inconsistent or if the
/// columns are dependent (solution not unique).
pub fn solve_rational(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = columns.len();
    let m = rhs.len();
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut r = 0;
    let mut pivots = Vec::with_capacity(k);
    for c in 0..k {
        let p = (r..m).find(|&i| !a[i][c].is_zero())?;
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (v, p) in a[i].iter_mut().zip(&pivot_row).take(k + 1) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&p| a[p][k].clone()).collect())
}

/// Solve `Σ x_j · rows[j] = target` over Z for independent `rows`.
pub fn integer_coordinates(rows: &[IntVec], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let to_q = |v: &IntVec| v.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>();
    let cols: Vec<Vec<BigRational>> = rows.iter().map(to_q).collect();
    let sol = solve_rational(&cols, &to_q(&target.to_vec()))?;
    sol.into_iter().map(|q| q.is_integer().then(|| q.to_integer())).collect()
}

/// Determinant of a small square integer matrix by fraction-free elimination.
pub fn det(rows: &[IntVec]) -> BigInt {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
