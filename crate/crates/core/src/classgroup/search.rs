//! Smooth-element search over a factor base.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{det, mat_mul, Mat};
use crate::numberfield::lll::lll_reduce;
use crate::numberfield::{IdealHNF, NumberFieldOrder, PrimeIdeal};

/// An element together with its factorization over the factor base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub element: Vec<i128>,
    /// Sparse exponent vector `(prime index, exponent)`.
    pub exponents: Vec<(usize, i64)>,
}

/// Nontrivial automorphisms as matrices acting on row vectors, and the
/// permutation each induces on the base.
pub(crate) struct Conjugation {
    pub mats: Vec<Mat>,
    pub perms: Vec<Vec<usize>>,
}

pub(crate) struct Base<'a> {
    pub order: &'a NumberFieldOrder,
    pub primes: &'a [PrimeIdeal],
    by_q: Vec<(u64, Vec<usize>)>,
    pub conj: Option<Conjugation>,
}

/// All six automorphisms of the sextic field, identity first.
pub(crate) fn galois_matrices(order: &NumberFieldOrder) -> Result<Option<Vec<Mat>>> {
    let Some(g) = order.galois() else { return Ok(None) };
    let id = crate::linalg::identity(order.degree);
    let s2 = mat_mul(&g.sigma, &g.sigma)?;
    // row action: x ↦ x·M, so M_{g∘h} = M_h·M_g
    let ts = mat_mul(&g.sigma, &g.tau)?;
    let ts2 = mat_mul(&s2, &g.tau)?;
    Ok(Some(vec![id, g.sigma.clone(), s2, g.tau.clone(), ts, ts2]))
}

pub(crate) fn apply_matrix_ideal(order: &NumberFieldOrder, m: &Mat, a: &IdealHNF) -> Result<IdealHNF> {
    let gens: Vec<Vec<i128>> = a.basis.iter().map(|r| crate::numberfield::row_times(r, m)).collect();
    order.ideal_from_generators(&gens, a.norm)
}

impl<'a> Base<'a> {
    pub fn new(order: &'a NumberFieldOrder, primes: &'a [PrimeIdeal]) -> Result<Self> {
        let Base { by_q, .. } = Base::plain(order, primes);
        let conj = match galois_matrices(order)? {
            None => None,
            Some(all) => {
                let index: HashMap<&Mat, usize> = primes.iter().enumerate().map(|(i, p)| (&p.ideal.basis, i)).collect();
                let mats: Vec<Mat> = all.into_iter().skip(1).collect();
                let mut perms = Vec::new();
                for m in &mats {
                    let mut perm = Vec::with_capacity(primes.len());
                    for p in primes {
                        let img = apply_matrix_ideal(order, m, &p.ideal)?;
                        let j = index
                            .get(&img.basis)
                            .ok_or_else(|| Error::Internal("factor base is not Galois stable".into()))?;
                        perm.push(*j);
                    }
                    perms.push(perm);
                }
                Some(Conjugation { mats, perms })
            }
        };
        Ok(Base { order, primes, by_q, conj })
    }

    /// A base without the automorphism data.
    pub fn plain(order: &'a NumberFieldOrder, primes: &'a [PrimeIdeal]) -> Self {
        let mut by_q: Vec<(u64, Vec<usize>)> = Vec::new();
        for (i, p) in primes.iter().enumerate() {
            match by_q.iter_mut().find(|(q, _)| *q == p.q) {
                Some((_, v)) => v.push(i),
                None => by_q.push((p.q, vec![i])),
            }
        }
        by_q.sort();
        Base { order, primes, by_q, conj: None }
    }

    /// Sparse valuations of an integral ideal at the base primes.
    pub fn valuations_of(&self, a: &IdealHNF) -> Result<Vec<(usize, i64)>> {
        let mut out = Vec::new();
        for (q, idx) in &self.by_q {
            if a.norm % *q as i128 != 0 {
                continue;
            }
            for &i in idx {
                let v = self.order.ideal_valuation(&self.primes[i], a)?;
                if v > 0 {
                    out.push((i, v as i64));
                }
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    /// Rational primes whose every prime factor lies in the base.
    pub fn complete_rational_primes(&self) -> Vec<u64> {
        self.by_q
            .iter()
            .filter(|(_, idx)| idx.iter().map(|&i| self.primes[i].e * self.primes[i].f).sum::<u32>() as usize == self.order.degree)
            .map(|(q, _)| *q)
            .collect()
    }

    pub fn trivial_relation(&self, q: u64) -> Relation {
        let idx = &self.by_q.iter().find(|(r, _)| *r == q).expect("prime in base").1;
        Relation {
            element: self.order.from_int(q as i128),
            exponents: idx.iter().map(|&i| (i, self.primes[i].e as i64)).collect(),
        }
    }

    /// Factors `(x)·a⁻¹` over the base, where `a ∣ (x)` has norm `skip` and
    /// base valuations `minus` (sparse). `None` if not smooth.
    pub fn factor(&self, x: &[i128], skip: i128, minus: &[(usize, i64)]) -> Result<Option<Vec<(usize, i64)>>> {
        let Some(n) = det(&self.order.mul_matrix(x)) else { return Ok(None) };
        if n == 0 {
            return Err(Error::ZeroElement);
        }
        let n = n.unsigned_abs();
        let skip = skip as u128;
        if n % skip != 0 {
            return Err(Error::Internal("norm not divisible by ideal norm".into()));
        }
        let mut rest = n / skip;
        let mut hits: Vec<(usize, u32)> = Vec::new();
        for (pos, (q, _)) in self.by_q.iter().enumerate() {
            if rest == 1 {
                break;
            }
            let q = *q as u128;
            // a leftover prime above the largest base prime cannot be cleared
            if q * q > rest && rest > q && !self.by_q.iter().any(|(r, _)| *r as u128 == rest) {
                return Ok(None);
            }
            let mut v = 0;
            while rest % q == 0 {
                rest /= q;
                v += 1;
            }
            if v > 0 {
                hits.push((pos, v));
            }
        }
        if rest != 1 {
            return Ok(None);
        }
        let mut out = Vec::new();
        for (pos, vq) in hits {
            let mut acc = 0;
            for &i in &self.by_q[pos].1 {
                let p = &self.primes[i];
                let mut v = self.order.valuation(p, x)? as i64;
                if let Some(&(_, m)) = minus.iter().find(|e| e.0 == i) {
                    v -= m;
                }
                if v < 0 {
                    return Err(Error::Internal("element not in the given ideal".into()));
                }
                if v > 0 {
                    out.push((i, v));
                    acc += v as u32 * p.f;
                }
            }
            if acc != vq {
                return Ok(None);
            }
        }
        out.sort();
        Ok(Some(out))
    }

    /// The relation together with its images under the automorphisms.
    pub fn with_conjugates(&self, r: Relation) -> Vec<Relation> {
        let mut out = vec![r.clone()];
        if let Some(c) = &self.conj {
            for (m, perm) in c.mats.iter().zip(&c.perms) {
                let mut ex: Vec<(usize, i64)> = r.exponents.iter().map(|&(i, v)| (perm[i], v)).collect();
                ex.sort();
                out.push(Relation { element: crate::numberfield::row_times(&r.element, m), exponents: ex });
            }
        }
        out
    }
}

/// Sign-normalized key for duplicate detection.
fn key(x: &[i128]) -> Vec<i128> {
    let neg = x.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0);
    if neg {
        x.iter().map(|c| -c).collect()
    } else {
        x.to_vec()
    }
}

/// Small random combinations of an LLL-reduced basis of `a`.
pub(crate) struct Sampler {
    basis: Mat,
    span: usize,
}

impl Sampler {
    pub fn new(order: &NumberFieldOrder, a: &IdealHNF) -> Self {
        let mut basis = a.basis.clone();
        lll_reduce(&mut basis, order.t2_form());
        let span = basis.len().min(4);
        Sampler { basis, span }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng, radius: i128) -> Vec<i128> {
        let n = self.basis[0].len();
        loop {
            let mut x = vec![0i128; n];
            let mut nz = false;
            for row in self.basis.iter().take(self.span) {
                let c = rng.gen_range(-radius..=radius);
                if c != 0 {
                    nz = true;
                    for k in 0..n {
                        x[k] += c * row[k];
                    }
                }
            }
            if nz && x.iter().any(|&c| c != 0) {
                return x;
            }
        }
    }
}

pub(crate) struct Search<'b, 'a> {
    pub base: &'b Base<'a>,
    pub seen: HashSet<Vec<i128>>,
    pub candidates: u64,
    cursor: usize,
    /// One prime per automorphism orbit.
    cycle: Vec<usize>,
}

impl<'b, 'a> Search<'b, 'a> {
    pub fn new(base: &'b Base<'a>) -> Self {
        let cycle = match &base.conj {
            None => (0..base.len()).collect(),
            Some(c) => (0..base.len()).filter(|&i| c.perms.iter().all(|p| p[i] >= i)).collect(),
        };
        Search { base, seen: HashSet::new(), candidates: 0, cursor: 0, cycle }
    }

    /// Collects at least `want` new relations (counting conjugates), trying at most
    /// `budget` candidate elements. Returns what was found.
    pub fn run(&mut self, rng: &mut ChaCha8Rng, want: usize, budget: u64) -> Result<Vec<Relation>> {
        let order = self.base.order;
        let nprimes = self.base.len();
        let mut out = Vec::new();
        let mut spent = 0u64;
        while out.len() < want && spent < budget {
            // cycle through the base so every prime gets relations, with a
            // random cofactor for variety
            let slot = self.cursor % (self.cycle.len() + 1);
            let mut a = match self.cycle.get(slot) {
                Some(&i) => self.base.primes[i].ideal.clone(),
                None => order.unit_ideal(),
            };
            self.cursor += 1;
            if rng.gen_bool(0.5) {
                let p = &self.base.primes[rng.gen_range(0..nprimes)].ideal;
                if let Ok(b) = order.ideal_mul(&a, p) {
                    a = b;
                }
            }
            let sampler = Sampler::new(order, &a);
            let radius = if order.degree <= 3 { 3 } else { 1 };
            for _ in 0..24 {
                let x = sampler.sample(rng, radius);
                if !self.seen.insert(key(&x)) {
                    continue;
                }
                spent += 1;
                self.candidates += 1;
                if let Some(ex) = self.base.factor(&x, 1, &[])? {
                    for r in self.base.with_conjugates(Relation { element: x, exponents: ex }) {
                        self.seen.insert(key(&r.element));
                        out.push(r);
                    }
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Finds `α ∈ P` with `(α)P⁻¹` smooth over the base.
    pub fn eliminate(&mut self, rng: &mut ChaCha8Rng, p: &IdealHNF, budget: u64) -> Result<Option<Relation>> {
        let sampler = Sampler::new(self.base.order, p);
        let mut radius = 1;
        for t in 0..budget {
            if t > 0 && t % 64 == 0 {
                radius += 1;
            }
            let x = sampler.sample(rng, radius);
            self.candidates += 1;
            if let Some(ex) = self.base.factor(&x, p.norm, &[])? {
                return Ok(Some(Relation { element: x, exponents: ex }));
            }
        }
        Ok(None)
    }
}

