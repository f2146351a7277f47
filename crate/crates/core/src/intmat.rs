//! Integer row reduction: lower-triangular Hermite form and Smith form.
//!
//! Matrices are `Vec` of rows. Only the first `pivot_cols` columns take part
//! in pivoting; trailing columns ride along, which is how unimodular
//! transforms are recovered.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn axpy_row(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // target -= q * src
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Result of [`hnf_rows`]: pivot rows (row `i` has its pivot in column `i`)
/// and the remaining rows, which are zero on the pivot columns.
pub struct Echelon {
    pub pivots: Vec<Vec<BigInt>>,
    pub rest: Vec<Vec<BigInt>>,
}

/// Lower-triangular row Hermite normal form on the first `pivot_cols`
/// columns. Returns `None` when those columns have rank below `pivot_cols`.
pub fn hnf_rows(rows: IntMat, pivot_cols: usize) -> Option<Echelon> {
    let mut active: Vec<Vec<BigInt>> = rows;
    let mut pivots: Vec<Option<Vec<BigInt>>> = vec![None; pivot_cols];
    for col in (0..pivot_cols).rev() {
        loop {
            // smallest nonzero entry in this column among active rows
            let mut best: Option<usize> = None;
            let mut nonzero = 0;
            for (i, r) in active.iter().enumerate() {
                if r[col].is_zero() {
                    continue;
                }
                nonzero += 1;
                match best {
                    Some(b) if active[b][col].abs() <= r[col].abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(b) = best else { return None };
            if nonzero == 1 {
                let mut row = active.swap_remove(b);
                if row[col].is_negative() {
                    for x in row.iter_mut() {
                        *x = -&*x;
                    }
                }
                pivots[col] = Some(row);
                break;
            }
            let pivot_row = active[b].clone();
            let p = pivot_row[col].clone();
            for (i, r) in active.iter_mut().enumerate() {
                if i == b || r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&p);
                axpy_row(r, &q, &pivot_row);
            }
        }
    }
    let mut pivots: Vec<Vec<BigInt>> = pivots.into_iter().map(|p| p.unwrap()).collect();
    // reduce entries left of each pivot into [0, pivot)
    for j in 0..pivot_cols {
        for c in (0..j).rev() {
            let p = pivots[c][c].clone();
            let q = pivots[j][c].div_floor(&p);
            if !q.is_zero() {
                let src = pivots[c].clone();
                axpy_row(&mut pivots[j], &q, &src);
            }
        }
    }
    Some(Echelon { pivots, rest: active })
}

/// Left kernel of `m` (rows x with x * m = 0), as a Z-basis.
pub fn left_kernel(m: &IntMat, ncols: usize) -> Option<IntMat> {
    let k = m.len();
    let aug: IntMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let ech = hnf_rows(aug, ncols)?;
    Some(ech.rest.into_iter().map(|r| r[ncols..].to_vec()).collect())
}

/// Smith normal form of a square nonsingular matrix: returns (d, u, v) with
/// u * m * v = diag(d), d[i] | d[i+1], all d[i] > 0, u and v unimodular.
pub fn snf(m: &IntMat) -> (Vec<BigInt>, IntMat, IntMat) {
    let n = m.len();
    let mut a = m.clone();
    let mut u = identity(n);
    let mut v = identity(n);
    for t in 0..n {
        loop {
            // pick smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                let (src_a, src_u) = (a[t].clone(), u[t].clone());
                axpy_row(&mut a[i], &q, &src_a);
                axpy_row(&mut u[i], &q, &src_u);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut() {
                    let s = row[t].clone();
                    row[j] -= &q * s;
                }
                for row in v.iter_mut() {
                    let s = row[t].clone();
                    row[j] -= &q * s;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: if some entry of the trailing block is not a
            // multiple of the pivot, fold its row into row t and retry
            let mut bad_row = None;
            'scan: for i in t + 1..n {
                for j in t + 1..n {
                    if !(&a[i][j] % &p).is_zero() {
                        bad_row = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    let (src_a, src_u) = (a[i].clone(), u[i].clone());
                    for (x, y) in a[t].iter_mut().zip(&src_a) {
                        *x += y;
                    }
                    for (x, y) in u[t].iter_mut().zip(&src_u) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let d = (0..n).map(|i| a[i][i].clone()).collect();
    (d, u, v)
}

/// Inverse of a unimodular integer matrix (Gauss-Jordan over Z).
pub fn unimodular_inverse(m: &IntMat) -> IntMat {
    let n = m.len();
    let aug: IntMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let ech = hnf_rows(aug, n).expect("unimodular matrix is nonsingular");
    // HNF of a unimodular matrix is the identity, so the transform is the inverse
    for (i, r) in ech.pivots.iter().enumerate() {
        debug_assert!(r[i].is_one());
    }
    ech.pivots.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(BigInt::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn vec_mat(x: &[BigInt], m: &IntMat) -> Vec<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|j| x.iter().zip(m.iter()).fold(BigInt::zero(), |acc, (a, r)| acc + a * &r[j]))
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = val / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_is_lower_triangular_and_reduced() {
        let ech = hnf_rows(m(&[&[2, 0], &[0, 2], &[1, 1]]), 2).unwrap();
        assert_eq!(ech.pivots, m(&[&[2, 0], &[1, 1]]));
        assert_eq!(ech.rest, m(&[&[0, 0]]));
    }

    #[test]
    fn snf_divisibility() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (d, u, v) = snf(&a);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let prod = mat_mul(&mat_mul(&u, &a), &v);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { d[i].clone() } else { BigInt::zero() };
                assert_eq!(prod[i][j], expect);
            }
        }
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(det(&a), BigInt::one());
        let inv = unimodular_inverse(&a);
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert_eq!(det(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
    }
}
