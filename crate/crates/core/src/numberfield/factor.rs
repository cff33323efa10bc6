use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ideal::IdealHNF;
use super::order::NumberFieldOrder;
use crate::error::{Error, Result};
use crate::linalg::{hnf_coordinates, hnf_mod, left_kernel_mod, rref_mod, Mat};
use crate::poly;

/// Primes up to this size are always split with the radical method.
const SMALL_PRIME: u64 = 7;

/// A prime ideal together with the data needed to compute valuations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub ideal: IdealHNF,
    pub q: u64,
    pub e: u32,
    pub f: u32,
    /// An element of `q·P⁻¹` outside `qO`: `v_P(x) ≥ 1` iff `x·β/q` is integral.
    pub beta: Vec<i128>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> i128 {
        self.ideal.norm
    }
}

fn rows_mod(rows: &[Vec<i128>], q: u64) -> Vec<Vec<u64>> {
    rows.iter().map(|r| r.iter().map(|v| v.rem_euclid(q as i128) as u64).collect()).collect()
}

impl NumberFieldOrder {
    /// Decomposition of `qO` into prime ideals, sorted by `(norm, basis)`.
    pub fn factor_rational_prime(&self, q: u64) -> Result<Vec<PrimeIdeal>> {
        if !crate::arith::is_prime(q) {
            return Err(Error::InvalidArgument(format!("{q} is not prime")));
        }
        let hnfs: Vec<(Mat, Option<u32>)> = match self.dedekind_generator(q) {
            Some(g) => self.dedekind_kummer(q, g),
            None => self.radical_split(q).into_iter().map(|h| (h, None)).collect(),
        };
        let mut out = Vec::with_capacity(hnfs.len());
        for (h, e) in hnfs {
            let mut p = self.prime_from_hnf(h, q)?;
            if let Some(e) = e {
                p.e = e;
            }
            out.push(p);
        }
        let total: u32 = out.iter().map(|p| p.e * p.f).sum();
        if total as usize != self.degree {
            return Err(Error::Internal(format!(
                "decomposition of {q} in {} has Σef = {total}",
                self.label
            )));
        }
        out.sort_by(|a, b| a.ideal.cmp(&b.ideal));
        Ok(out)
    }

    /// Residue degrees of the primes above an unramified `q`, without building ideals.
    pub fn residue_degrees(&self, q: u64) -> Result<Vec<u32>> {
        if let Some(g) = self.dedekind_generator(q) {
            let f = poly::from_int(&self.generators()[g].min_poly, q);
            if poly::is_squarefree(&f, q) {
                return Ok(poly::factor_degrees(&f, q).into_iter().map(|d| d as u32).collect());
            }
        }
        Ok(self.factor_rational_prime(q)?.into_iter().map(|p| p.f).collect())
    }

    /// Degree-one primes above `q` via roots of a defining polynomial; only
    /// valid when `q` is unramified and not an index divisor.
    pub fn degree_one_primes(&self, q: u64) -> Option<Vec<IdealHNF>> {
        let g = self.dedekind_generator(q)?;
        let gen = &self.generators()[g];
        let f = poly::from_int(&gen.min_poly, q);
        let mut out = Vec::new();
        for (h, m) in poly::factor(&f, q) {
            if h.len() != 2 || m != 1 {
                continue;
            }
            let root = (q - h[0]) % q;
            let mut elt = gen.element.clone();
            elt[0] -= root as i128;
            let rows = self.mul_matrix(&elt);
            let basis = hnf_mod(&rows, self.degree, q as i128);
            out.push(IdealHNF { field: self.label, norm: q as i128, basis });
        }
        Some(out)
    }

    fn dedekind_generator(&self, q: u64) -> Option<usize> {
        if q <= SMALL_PRIME || (q as usize) <= self.degree {
            return None;
        }
        let qb = BigInt::from(q);
        self.generators().iter().position(|g| !(&g.index % &qb).is_zero())
    }

    fn dedekind_kummer(&self, q: u64, g: usize) -> Vec<(Mat, Option<u32>)> {
        let gen = &self.generators()[g];
        let f = poly::from_int(&gen.min_poly, q);
        poly::factor(&f, q)
            .into_iter()
            .map(|(h, m)| {
                let mut elt = vec![0i128; self.degree];
                for (k, &c) in h.iter().enumerate() {
                    for (i, v) in gen.powers[k].iter().enumerate() {
                        elt[i] += c as i128 * v;
                    }
                }
                let elt: Vec<i128> = elt.into_iter().map(|v| v.rem_euclid(q as i128)).collect();
                let rows = self.mul_matrix(&elt);
                (hnf_mod(&rows, self.degree, q as i128), Some(m))
            })
            .collect()
    }

    /// Splits the radical of `qO` into its prime components.
    fn radical_split(&self, q: u64) -> Vec<Mat> {
        let n = self.degree;
        let qi = q as i128;
        let rad = self.radical(q);
        // B' = {x : x^q - x ∈ rad}
        let mut rows: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                let mut e = vec![0i128; n];
                e[i] = 1;
                let mut v = self.pow_mod(&e, q as u128, qi);
                v[i] -= 1;
                v
            })
            .collect();
        rows.extend(rad.iter().cloned());
        let ker = left_kernel_mod(&rows_mod(&rows, q), q);
        let mut span = rows_mod(&rad, q);
        span.push(rows_mod(&[self.one()], q).remove(0));
        let (_, piv) = rref_mod(&span, n, q);
        let mut rank = piv.len();
        let mut extra: Vec<Vec<i128>> = Vec::new();
        for k in ker {
            let v: Vec<u64> = k[..n].to_vec();
            let mut trial = span.clone();
            trial.push(v.clone());
            let (_, p) = rref_mod(&trial, n, q);
            if p.len() > rank {
                rank = p.len();
                span = trial;
                extra.push(v.iter().map(|&c| c as i128).collect());
            }
        }
        if extra.is_empty() {
            return vec![rad];
        }
        let mut out = Vec::new();
        let base: Vec<Vec<i128>> = rad.clone();
        self.split_search(q, &extra, 0, base, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn split_search(&self, q: u64, xs: &[Vec<i128>], level: usize, gens: Vec<Vec<i128>>, out: &mut Vec<Mat>) {
        let n = self.degree;
        let qi = q as i128;
        if level == xs.len() {
            out.push(hnf_mod(&gens, n, qi));
            return;
        }
        for c in 0..qi {
            let mut x = xs[level].clone();
            x[0] = (x[0] - c).rem_euclid(qi);
            let mut g = gens.clone();
            g.extend(self.mul_matrix(&x));
            let h = hnf_mod(&g, n, qi);
            if (0..n).any(|i| h[i][i] != 1) {
                self.split_search(q, xs, level + 1, h, out);
            }
        }
    }

    /// Completes a prime ideal given by its Hermite basis: residue degree,
    /// ramification index and valuation helper.
    pub fn prime_from_hnf(&self, basis: Mat, q: u64) -> Result<PrimeIdeal> {
        let n = self.degree;
        let norm: i128 = (0..n).map(|i| basis[i][i]).product();
        let mut f = 0u32;
        let mut t = norm;
        while t % q as i128 == 0 {
            t /= q as i128;
            f += 1;
        }
        if t != 1 || f == 0 {
            return Err(Error::Internal(format!("ideal of norm {norm} is not above {q}")));
        }
        let ideal = IdealHNF { field: self.label, basis, norm };
        let beta = self.valuation_helper(&ideal, q)?;
        let mut p = PrimeIdeal { ideal, q, e: 0, f, beta };
        p.e = self.valuation(&p, &self.from_int(q as i128))?;
        Ok(p)
    }

    fn valuation_helper(&self, p: &IdealHNF, q: u64) -> Result<Vec<i128>> {
        let n = self.degree;
        let qi = q as i128;
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut e = vec![0i128; n];
                e[i] = 1;
                p.basis
                    .iter()
                    .flat_map(|b| self.mul(&e, b).into_iter().map(|v| v.rem_euclid(qi) as u64))
                    .collect()
            })
            .collect();
        let ker = left_kernel_mod(&rows, q);
        ker.into_iter()
            .find(|v| v.iter().any(|&c| c != 0))
            .map(|v| v.into_iter().map(|c| c as i128).collect())
            .ok_or_else(|| Error::Internal("no valuation helper for prime".into()))
    }

    /// `v_P(x)` for nonzero `x`.
    pub fn valuation(&self, p: &PrimeIdeal, x: &[i128]) -> Result<u32> {
        if Self::is_zero(x) {
            return Err(Error::ZeroElement);
        }
        let qi = p.q as i128;
        let mut y = x.to_vec();
        let mut v = 0;
        loop {
            let z = self.checked_mul(&y, &p.beta)?;
            if z.iter().any(|c| c % qi != 0) {
                return Ok(v);
            }
            y = z.into_iter().map(|c| c / qi).collect();
            v += 1;
        }
    }

    /// `v_P(a)` for an integral ideal, as the minimum over a Z-basis.
    pub fn ideal_valuation(&self, p: &PrimeIdeal, a: &IdealHNF) -> Result<u32> {
        let mut best = u32::MAX;
        for row in &a.basis {
            if Self::is_zero(row) {
                continue;
            }
            best = best.min(self.valuation(p, row)?);
        }
        Ok(best)
    }

    /// Coordinates of `x` with respect to the Hermite basis of `a`, if `x ∈ a`.
    pub fn ideal_coordinates(&self, a: &IdealHNF, x: &[i128]) -> Option<Vec<i128>> {
        hnf_coordinates(&a.basis, x)
    }

    /// Factors `x` over the given primes; `None` when its norm has other prime factors.
    pub fn factor_element(&self, x: &[i128], primes_by_q: &[(u64, Vec<(usize, &PrimeIdeal)>)]) -> Result<Option<Vec<(usize, i64)>>> {
        let norm = self.norm(x);
        let mut rest = num_traits::Signed::abs(&norm);
        if rest.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut out = Vec::new();
        for (q, ps) in primes_by_q {
            let qb = BigInt::from(*q);
            let mut vq = 0u32;
            while (&rest % &qb).is_zero() {
                rest /= &qb;
                vq += 1;
            }
            if vq == 0 {
                continue;
            }
            let mut acc = 0u32;
            for (idx, p) in ps {
                let v = self.valuation(p, x)?;
                if v > 0 {
                    out.push((*idx, v as i64));
                    acc += v * p.f;
                }
            }
            if acc != vq {
                return Ok(None);
            }
        }
        if rest.to_u64() != Some(1) {
            return Ok(None);
        }
        Ok(Some(out))
    }
}
