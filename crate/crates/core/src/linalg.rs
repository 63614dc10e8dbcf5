//! Exact dense linear algebra over rationals and over general commutative
//! rings (division-free routes).

use num_traits::{One, Zero};

use crate::scalar::{Rational, Ring};

pub type Matrix<R> = Vec<Vec<R>>;

/// Determinant over a ring by dynamic programming over row subsets: expands
/// along columns left to right, `O(2^n n)` ring operations, no division.
pub fn det_ring<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    assert!(n <= 24, "subset determinant limited to 24 rows");
    let mut dp = vec![R::zero(); 1 << n];
    dp[0] = R::one();
    for mask in 0usize..(1 << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let col = mask.count_ones() as usize;
        if col == n {
            continue;
        }
        let base = dp[mask].clone();
        for (row, entries) in m.iter().enumerate() {
            if mask & (1 << row) != 0 || entries[col].is_zero() {
                continue;
            }
            let above = (mask >> (row + 1)).count_ones();
            let term = base.clone() * entries[col].clone();
            let next = mask | (1 << row);
            dp[next] = if above % 2 == 0 { dp[next].clone() + term } else { dp[next].clone() - term };
        }
    }
    dp[(1 << n) - 1].clone()
}

/// Determinant over the rationals by Gaussian elimination with pivot search.
pub fn det_field(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Matrix<Rational> = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for r in (c + 1)..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for k in c..n {
                let delta = &f * &a[c][k];
                a[r][k] -= delta;
            }
        }
    }
    det
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(a: &mut Matrix<Rational>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for k in c..cols {
            a[r][k] *= &inv;
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in c..cols {
                let delta = &f * &a[r][k];
                a[i][k] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_field(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of the right nullspace `{x : m x = 0}`.
pub fn nullspace(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// Rank over an integral domain by fraction-free elimination. Exact zero
/// tests on entries are required.
pub fn rank_domain<R: Ring>(m: &[Vec<R>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pivot = a[r][c].clone();
        for i in (r + 1)..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in c..cols {
                a[i][k] = pivot.clone() * a[i][k].clone() - f.clone() * a[r][k].clone();
            }
        }
        r += 1;
    }
    r
}

/// Characteristic polynomial `det(xI - A)` as coefficients `c_0..c_n`
/// (`c_n = 1`), via reduction to upper Hessenberg form.
pub fn charpoly(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    let mut a = m.to_vec();
    // Similarity transforms to Hessenberg form.
    for c in 0..n.saturating_sub(2) {
        let Some(p) = ((c + 1)..n).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        if p != c + 1 {
            a.swap(p, c + 1);
            for row in a.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let pivot = a[c + 1][c].clone();
        for r in (c + 2)..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for k in 0..n {
                let delta = &f * &a[c + 1][k];
                a[r][k] -= delta;
            }
            for row in a.iter_mut() {
                let delta = &f * &row[r];
                row[c + 1] += delta;
            }
        }
    }
    // p_k(x) = (x - a_kk) p_{k-1} - Σ_{i<k} a_ik (Π_{j=i+1}^{k} a_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![Rational::zero(); k + 2];
        for (i, c) in prev.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= &a[k][k] * c;
        }
        let mut sub = Rational::one();
        for i in (0..k).rev() {
            sub *= &a[i + 1][i];
            if sub.is_zero() {
                break;
            }
            let coef = &a[i][k] * &sub;
            if coef.is_zero() {
                continue;
            }
            for (j, c) in polys[i].iter().enumerate() {
                next[j] -= &coef * c;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Leading principal minors `D_1, D_2, …` from elimination pivots, stopping
/// after the first minor that is not strictly positive.
pub fn leading_minors_until_nonpositive(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut out = Vec::with_capacity(n);
    let mut acc = Rational::one();
    for c in 0..n {
        let pivot = a[c][c].clone();
        acc *= &pivot;
        out.push(acc.clone());
        if acc <= Rational::zero() {
            break;
        }
        for r in (c + 1)..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for k in c..n {
                let delta = &f * &a[c][k];
                a[r][k] -= delta;
            }
        }
    }
    out
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn determinants_agree() {
        let m = q(&[&[2, -1, 0, 3], &[1, 4, 2, 0], &[0, 5, -2, 1], &[3, 0, 1, 1]]);
        assert_eq!(det_ring(&m), det_field(&m));
        assert_eq!(det_ring(&q(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(det_ring::<Rational>(&[]), int(1));
        let singular = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(det_field(&singular), int(0));
    }

    #[test]
    fn ranks_and_nullspace() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank_field(&m), 2);
        assert_eq!(rank_domain(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&m, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn charpoly_of_small_matrices() {
        // x^2 - 5x - 2
        assert_eq!(charpoly(&q(&[&[1, 2], &[3, 4]])), vec![int(-2), int(-5), int(1)]);
        let m = q(&[&[2, 1, 0, 1], &[1, 3, 1, 0], &[0, 1, 4, 2], &[1, 0, 2, 5]]);
        let c = charpoly(&m);
        assert_eq!(c[0], det_field(&m));
        assert_eq!(c[3], -int(14));
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn sylvester_minors() {
        let m = q(&[&[2, 1], &[1, 2]]);
        assert_eq!(leading_minors_until_nonpositive(&m), vec![int(2), int(3)]);
        let m = q(&[&[0, 1], &[1, 0]]);
        assert_eq!(leading_minors_until_nonpositive(&m), vec![int(0)]);
    }
}
