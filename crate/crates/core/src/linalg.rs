//! Exact integer and prime-field linear algebra on small dense matrices.
//!
//! Row convention throughout: a lattice is the row span of its matrix.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd, inv_mod, mul_mod};
use crate::error::{Error, Result};

pub type Mat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).try_fold(0i128, |acc, k| {
                        row[k]
                            .checked_mul(b[k][j])
                            .and_then(|t| acc.checked_add(t))
                            .ok_or(Error::Overflow("mat_mul"))
                    })
                })
                .collect()
        })
        .collect()
}

/// Hermite normal form of the lattice spanned by `gens` together with `d·Zⁿ`.
///
/// `d` must be positive; the result is the upper-triangular basis with positive
/// diagonal and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf_mod(gens: &[Vec<i128>], n: usize, d: i128) -> Mat {
    assert!(d > 0);
    let mut rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| g.iter().map(|x| x.rem_euclid(d)).collect::<Vec<_>>())
        .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
        .collect();
    let mut h: Mat = Vec::with_capacity(n);
    for i in 0..n {
        let mut piv = vec![0i128; n];
        piv[i] = d;
        for r in rows.iter_mut() {
            if r[i] == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(piv[i], r[i]);
            let (a, b) = (piv[i] / g, r[i] / g);
            let mut new_piv = vec![0i128; n];
            for j in i..n {
                let (pj, rj) = (piv[j], r[j]);
                new_piv[j] = (x.rem_euclid(d) * pj + y.rem_euclid(d) * rj).rem_euclid(d);
                r[j] = (b * pj - a * rj).rem_euclid(d);
            }
            new_piv[i] = g;
            r[i] = 0;
            piv = new_piv;
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
        h.push(piv);
    }
    reduce_hnf(&mut h, d);
    h
}

/// Reduces entries above the pivots of an upper-triangular matrix whose row
/// span contains `d·Zⁿ`.
fn reduce_hnf(h: &mut Mat, d: i128) {
    let n = h.len();
    for i in 0..n {
        if h[i][i] < 0 {
            for x in h[i].iter_mut() {
                *x = -*x;
            }
        }
        let p = h[i][i];
        if p == 0 {
            continue;
        }
        for j in 0..i {
            let q = h[j][i].div_euclid(p);
            if q != 0 {
                h[j][i] -= q * p;
                // d·e_k is a combination of rows k.. so entries right of the
                // pivot may be reduced mod d
                for k in i + 1..n {
                    h[j][k] = (h[j][k] - q * h[i][k]).rem_euclid(d);
                }
            }
        }
    }
}

/// Whether `v` lies in the row span of the upper-triangular basis `h`.
pub fn hnf_contains(h: &Mat, v: &[i128]) -> bool {
    let mut v = v.to_vec();
    for i in 0..h.len() {
        if v[i] == 0 {
            continue;
        }
        if h[i][i] == 0 || v[i] % h[i][i] != 0 {
            return false;
        }
        let q = v[i] / h[i][i];
        for k in i..v.len() {
            v[k] -= q * h[i][k];
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Coordinates of `v` in the basis `h` (upper triangular, nonsingular), if integral.
pub fn hnf_coordinates(h: &Mat, v: &[i128]) -> Option<Vec<i128>> {
    let n = h.len();
    let mut v = v.to_vec();
    let mut c = vec![0i128; n];
    for i in 0..n {
        if v[i] % h[i][i] != 0 {
            return None;
        }
        c[i] = v[i] / h[i][i];
        if c[i] != 0 {
            for k in i..n {
                v[k] -= c[i] * h[i][k];
            }
        }
    }
    Some(c)
}

/// Determinant by fraction-free elimination; `None` on overflow.
pub fn det(m: &Mat) -> Option<i128> {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return Some(0);
        };
        if piv != k {
            a.swap(k, piv);
            sign = -sign;
        }
        if k == n - 1 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])?
                    .checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Determinant in arbitrary precision.
pub fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            a.swap(k, piv);
            sign = -sign;
        }
        if k == n - 1 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn to_big(m: &Mat) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Lower-triangular Hermite form of the lattice spanned by `gens` and `d·Zⁿ`:
/// row `i` is zero beyond column `i`.
pub fn lower_hnf_mod(gens: &[Vec<i128>], n: usize, d: i128) -> Mat {
    let rev: Vec<Vec<i128>> = gens.iter().map(|g| g.iter().rev().copied().collect()).collect();
    let h = hnf_mod(&rev, n, d);
    h.into_iter()
        .rev()
        .map(|r| r.into_iter().rev().collect())
        .collect()
}

/// Characteristic polynomial `det(xI - M)`, coefficients from the leading `1`
/// down to the constant term (Faddeev-LeVerrier).
pub fn char_poly(m: &Mat) -> Result<Vec<i128>> {
    let n = m.len();
    let mut coeffs = vec![1i128];
    let mut mk = identity(n);
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_k·I with c_k = -tr(A·M_{k-1}) / k
        let mut am = mat_mul(m, &mk)?;
        let tr = (0..n)
            .try_fold(0i128, |acc, i| acc.checked_add(am[i][i]))
            .ok_or(Error::Overflow("char_poly"))?;
        if tr % k as i128 != 0 {
            return Err(Error::Internal("non-integral Faddeev-LeVerrier step".into()));
        }
        let c = -tr / k as i128;
        coeffs.push(c);
        for i in 0..n {
            am[i][i] = am[i][i].checked_add(c).ok_or(Error::Overflow("char_poly"))?;
        }
        mk = am;
    }
    Ok(coeffs)
}

/// Smith form `U·M·V = D` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    /// Diagonal entries, `d₀ | d₁ | …`, all nonnegative.
    pub diagonal: Vec<i128>,
    pub u: Mat,
    pub v: Mat,
    /// Inverse of `v`; its rows express the diagonal generators in the original columns.
    pub v_inv: Mat,
}

impl SmithForm {
    /// Elementary divisors greater than one.
    pub fn invariants(&self) -> Vec<i128> {
        self.diagonal.iter().copied().filter(|&d| d != 1).collect()
    }
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow("smith_normal_form"))
}

fn row_combine(a: &mut Mat, i: usize, j: usize, coef: [i128; 4]) -> Result<()> {
    // (row_i, row_j) <- (c0 row_i + c1 row_j, c2 row_i + c3 row_j)
    for k in 0..a[i].len() {
        let (x, y) = (a[i][k], a[j][k]);
        a[i][k] = ck(coef[0].checked_mul(x).and_then(|s| coef[1].checked_mul(y).and_then(|t| s.checked_add(t))))?;
        a[j][k] = ck(coef[2].checked_mul(x).and_then(|s| coef[3].checked_mul(y).and_then(|t| s.checked_add(t))))?;
    }
    Ok(())
}

fn col_combine(a: &mut Mat, i: usize, j: usize, coef: [i128; 4]) -> Result<()> {
    for row in a.iter_mut() {
        let (x, y) = (row[i], row[j]);
        row[i] = ck(coef[0].checked_mul(x).and_then(|s| coef[1].checked_mul(y).and_then(|t| s.checked_add(t))))?;
        row[j] = ck(coef[2].checked_mul(x).and_then(|s| coef[3].checked_mul(y).and_then(|t| s.checked_add(t))))?;
    }
    Ok(())
}

/// Smith normal form with unimodular transforms.
///
/// The result is padded so that `diagonal.len() == min(rows, cols)`; the
/// invariants are the diagonal entries other than `1`.
/// Like `ext_gcd`, but a pivot dividing `b` is kept in place (x = ±1, y = 0);
/// otherwise `gcd(d, d)` may come back as `0·d + 1·d` and swap forever.
fn pivot_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b % a == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        ext_gcd(a, b)
    }
}

pub fn smith_normal_form(m: &Mat) -> Result<SmithForm> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);
    let r = rows.min(cols);
    let mut t = 0;
    while t < r {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        v_inv.swap(t, pj);
        loop {
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let (g, x, y) = pivot_gcd(a[t][t], a[i][t]);
                    let (p, q) = (a[t][t] / g, a[i][t] / g);
                    let c = [x, y, -q, p];
                    row_combine(&mut a, t, i, c)?;
                    row_combine(&mut u, t, i, c)?;
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let (g, x, y) = pivot_gcd(a[t][t], a[t][j]);
                    let (p, q) = (a[t][t] / g, a[t][j] / g);
                    let c = [x, y, -q, p];
                    col_combine(&mut a, t, j, c)?;
                    col_combine(&mut v, t, j, c)?;
                    // x·p + y·q = 1, so the inverse row operation is [p, q, -y, x]
                    row_combine(&mut v_inv, t, j, [p, q, -y, x])?;
                }
            }
            if (t + 1..rows).all(|i| a[i][t] == 0) {
                break;
            }
        }
        // divisibility: if some entry is not a multiple of the pivot, fold its row in
        let d = a[t][t];
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % d != 0));
        if let Some(i) = bad {
            row_combine(&mut a, t, i, [1, 1, 0, 1])?;
            row_combine(&mut u, t, i, [1, 1, 0, 1])?;
            continue;
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diagonal = (0..r).map(|i| a[i][i]).collect();
    Ok(SmithForm { diagonal, u, v, v_inv })
}

/// Left kernel `{x : x·A = 0}` over `F_q`, as a basis in reduced echelon form.
pub fn left_kernel_mod(a: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
    let r = a.len();
    if r == 0 {
        return Vec::new();
    }
    let c = a[0].len();
    // Right kernel of Aᵀ (c × r).
    let t: Vec<Vec<u64>> = (0..c).map(|j| (0..r).map(|i| a[i][j] % q).collect()).collect();
    right_kernel_mod(&t, r, q)
}

/// Right kernel `{x : M·x = 0}` over `F_q` of a matrix with `ncols` columns.
pub fn right_kernel_mod(m: &[Vec<u64>], ncols: usize, q: u64) -> Vec<Vec<u64>> {
    let (red, pivots) = rref_mod(m, ncols, q);
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; ncols];
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![0u64; ncols];
        x[free] = 1;
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = (q - red[row][free] % q) % q;
        }
        basis.push(x);
    }
    basis
}

/// Reduced row echelon form over `F_q`; returns nonzero rows and pivot columns.
pub fn rref_mod(m: &[Vec<u64>], ncols: usize, q: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut a: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|x| x % q).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&i| a[i][col] != 0) else { continue };
        a.swap(row, p);
        let inv = inv_mod(a[row][col], q).expect("field element invertible");
        for x in a[row].iter_mut() {
            *x = mul_mod(*x, inv, q);
        }
        for i in 0..a.len() {
            if i != row && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..ncols {
                    let sub = mul_mod(f, a[row][j], q);
                    a[i][j] = (a[i][j] + q - sub) % q;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    a.truncate(row);
    (a, pivots)
}
