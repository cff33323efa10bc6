//! Dense polynomials over a prime field `F_q`, coefficients lowest degree first.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{inv_mod, mul_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn degree(f: &Poly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn from_int(coeffs: &[i128], q: u64) -> Poly {
    trim(coeffs.iter().map(|&c| c.rem_euclid(q as i128) as u64).collect())
}

pub fn add(f: &Poly, g: &Poly, q: u64) -> Poly {
    let n = f.len().max(g.len());
    trim(
        (0..n)
            .map(|i| (f.get(i).copied().unwrap_or(0) + g.get(i).copied().unwrap_or(0)) % q)
            .collect(),
    )
}

pub fn sub(f: &Poly, g: &Poly, q: u64) -> Poly {
    let n = f.len().max(g.len());
    trim(
        (0..n)
            .map(|i| (f.get(i).copied().unwrap_or(0) + q - g.get(i).copied().unwrap_or(0)) % q)
            .collect(),
    )
}

pub fn mul(f: &Poly, g: &Poly, q: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(a, b, q)) % q;
        }
    }
    trim(out)
}

pub fn monic(f: &Poly, q: u64) -> Poly {
    match f.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, q).expect("nonzero leading coefficient");
            f.iter().map(|&c| mul_mod(c, inv, q)).collect()
        }
    }
}

pub fn divrem(f: &Poly, g: &Poly, q: u64) -> (Poly, Poly) {
    assert!(!g.is_empty(), "polynomial division by zero");
    let mut r = f.clone();
    let dg = g.len() - 1;
    if r.len() <= dg {
        return (Vec::new(), trim(r));
    }
    let inv = inv_mod(*g.last().unwrap(), q).expect("nonzero leading coefficient");
    let mut quot = vec![0u64; r.len() - dg];
    for i in (dg..r.len()).rev() {
        let c = mul_mod(r[i], inv, q);
        if c == 0 {
            continue;
        }
        quot[i - dg] = c;
        for (j, &gj) in g.iter().enumerate() {
            let k = i - dg + j;
            r[k] = (r[k] + q - mul_mod(c, gj, q)) % q;
        }
    }
    r.truncate(dg);
    (trim(quot), trim(r))
}

pub fn rem(f: &Poly, g: &Poly, q: u64) -> Poly {
    divrem(f, g, q).1
}

pub fn gcd(f: &Poly, g: &Poly, q: u64) -> Poly {
    let (mut a, mut b) = (trim(f.clone()), trim(g.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b, q);
        a = b;
        b = r;
    }
    monic(&a, q)
}

pub fn powmod(base: &Poly, mut e: u128, m: &Poly, q: u64) -> Poly {
    let mut acc: Poly = rem(&vec![1], m, q);
    let mut b = rem(base, m, q);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, q), m, q);
        }
        b = rem(&mul(&b, &b, q), m, q);
        e >>= 1;
    }
    acc
}

pub fn derivative(f: &Poly, q: u64) -> Poly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % q, q))
            .collect(),
    )
}

pub fn eval(f: &Poly, x: u64, q: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, q) + c) % q)
}

/// Squarefree decomposition of a monic polynomial of degree `< q`:
/// pairs `(g, m)` with `f = Π g^m`.
fn squarefree(f: &Poly, q: u64) -> Vec<(Poly, u32)> {
    // Yun's algorithm; valid because deg f < q keeps f' nonzero.
    let mut out = Vec::new();
    let fp = derivative(f, q);
    let a = gcd(f, &fp, q);
    let mut b = divrem(f, &a, q).0;
    let mut c = divrem(&fp, &a, q).0;
    let mut d = sub(&c, &derivative(&b, q), q);
    let mut m = 1;
    loop {
        let g = gcd(&b, &d, q);
        if degree(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), m));
        }
        b = divrem(&b, &g, q).0;
        if degree(&b).unwrap_or(0) == 0 {
            break;
        }
        c = divrem(&d, &g, q).0;
        d = sub(&c, &derivative(&b, q), q);
        m += 1;
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
pub fn distinct_degree(f: &Poly, q: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut f = monic(f, q);
    let x: Poly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 1;
    while degree(&f).unwrap_or(0) >= 2 * d {
        h = powmod(&h, q as u128, &f, q);
        let g = gcd(&sub(&h, &x, q), &f, q);
        if degree(&g).unwrap_or(0) > 0 {
            f = divrem(&f, &g, q).0;
            h = rem(&h, &f, q);
            out.push((g, d));
        }
        d += 1;
    }
    if degree(&f).unwrap_or(0) > 0 {
        let dd = f.len() - 1;
        out.push((f, dd));
    }
    out
}

/// Splits a product of distinct irreducibles of degree `d` (odd `q`).
pub fn equal_degree(f: &Poly, d: usize, q: u64, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.len() - 1;
    if n == d {
        return vec![monic(f, q)];
    }
    let exp = (q as u128).pow(d as u32).saturating_sub(1) / 2;
    loop {
        let a: Poly = trim((0..n).map(|_| rng.gen_range(0..q)).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = sub(&powmod(&a, exp, f, q), &vec![1], q);
        let g = gcd(&b, f, q);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let other = divrem(f, &g, q).0;
            let mut out = equal_degree(&g, d, q, rng);
            out.extend(equal_degree(&other, d, q, rng));
            return out;
        }
    }
}

/// Complete factorization of a monic polynomial with `deg f < q`, `q` odd:
/// `(irreducible monic factor, multiplicity)`, sorted.
pub fn factor(f: &Poly, q: u64) -> Vec<(Poly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(q);
    let mut out = Vec::new();
    for (g, m) in squarefree(&monic(f, q), q) {
        for (h, d) in distinct_degree(&g, q) {
            for irr in equal_degree(&h, d, q, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

/// Residue degrees of the irreducible factors of a squarefree `f`, without splitting.
pub fn factor_degrees(f: &Poly, q: u64) -> Vec<usize> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, q) {
        let k = (g.len() - 1) / d;
        out.extend(std::iter::repeat(d).take(k));
    }
    out
}

pub fn is_squarefree(f: &Poly, q: u64) -> bool {
    degree(&gcd(f, &derivative(f, q), q)) == Some(0)
}
