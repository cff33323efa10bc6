//! LLL reduction of integer bases under a positive definite quadratic form.

use crate::linalg::Mat;

fn form(a: &[i128], b: &[i128], g: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        if a[i] == 0 {
            continue;
        }
        let ai = a[i] as f64;
        for j in 0..n {
            if b[j] != 0 {
                s += ai * g[i][j] * b[j] as f64;
            }
        }
    }
    s
}

fn gram_schmidt(b: &Mat, g: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let gram: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| form(&b[i], &b[j], g)).collect()).collect();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = gram[i][j];
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * bstar[k];
            }
            mu[i][j] = s / bstar[j];
        }
        let mut s = gram[i][i];
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * bstar[k];
        }
        bstar[i] = s.max(1e-300);
    }
    (mu, bstar)
}

/// Reduces the rows of `b` in place (δ = 0.99). Returns false if the
/// iteration budget ran out (the basis is still a basis of the same lattice).
pub fn lll_reduce(b: &mut Mat, g: &[Vec<f64>]) -> bool {
    let n = b.len();
    if n < 2 {
        return true;
    }
    let delta = 0.99;
    let mut k = 1;
    let mut budget = 10_000;
    let (mut mu, mut bstar) = gram_schmidt(b, g);
    while k < n {
        budget -= 1;
        if budget == 0 {
            return false;
        }
        // size reduction only touches row k of μ
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                let ri = r as i128;
                for c in 0..b[k].len() {
                    b[k][c] -= ri * b[j][c];
                }
                for i in 0..j {
                    mu[k][i] -= r * mu[j][i];
                }
                mu[k][j] -= r;
            }
        }
        if bstar[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (mu, bstar) = gram_schmidt(b, g);
            k = (k - 1).max(1);
        }
    }
    true
}

pub fn quadratic_value(x: &[i128], g: &[Vec<f64>]) -> f64 {
    form(x, x, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_skewed_basis() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let mut b = vec![vec![1, 0], vec![1000, 1]];
        assert!(lll_reduce(&mut b, &g));
        assert!(b.iter().all(|r| quadratic_value(r, &g) <= 1.0 + 1e-9));
    }
}
