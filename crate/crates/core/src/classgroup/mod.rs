//! Class groups of the cubic and sextic orders.
//!
//! Relations are collected over a base of small primes and reduced to a
//! Hermite form whose determinant is a multiple of `h`; saturation is certified
//! by comparing `h·R` against a truncated Euler product, and the remaining
//! primes up to the Minkowski bound are shown to be base-smooth one by one.

pub mod bounds;
mod group3;
mod lattice;
mod search;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{isqrt_u128, pow_mod, primes_up_to, v3};
use crate::error::{Error, Result};
use crate::hp::Fixed;
use crate::linalg::Mat;
use crate::numberfield::{FieldKind, FieldLabel, IdealHNF, NumberFieldOrder, PrimeIdeal};

pub use bounds::{analytic_hr, minkowski_bound, minkowski_bound_for};
pub use crate::linalg::{smith_normal_form, SmithForm};
pub use search::Relation;

use lattice::{reduce, regulator, Reduction};
use search::{Base, Sampler, Search};

/// Seed perturbation for the independent confirmation batch.
const SECOND_SEED: u64 = 0x9e37_79b9_7f4a_7c15;
/// Candidate elements per unit of effort.
const CANDIDATES_PER_EFFORT: u64 = 400_000;
const CERT_RATIO: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassGroupConfig {
    pub seed: u64,
    pub effort: u32,
    /// Scales the relation base bound `log²|d|`.
    pub bound_mult: f64,
}

impl Default for ClassGroupConfig {
    fn default() -> Self {
        ClassGroupConfig { seed: 1, effort: 1, bound_mult: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub minkowski_bound: u64,
    /// Norm bound of the relation base; primes between this and the
    /// Minkowski bound were each shown to be base-smooth.
    pub relation_bound: u64,
    pub tail_primes_checked: usize,
    pub regulator: f64,
    pub analytic_hr: f64,
    /// `h·R / analytic estimate`.
    pub ratio: f64,
    pub seeds: [u64; 2],
    pub stable_across_seeds: bool,
    pub candidates_tried: u64,
}

/// Action of σ and τ on SNF coordinates (`x ↦ x·M`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisMatrices {
    pub sigma: Mat,
    pub tau: Mat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassGroupData {
    pub field: FieldLabel,
    pub config: ClassGroupConfig,
    pub factor_base: Vec<PrimeIdeal>,
    pub relations: Vec<Relation>,
    /// Elementary divisors `> 1`, each dividing the next.
    pub invariants: Vec<i128>,
    /// SNF coordinates of each factor-base prime.
    pub generator_map: Vec<Vec<i128>>,
    /// Each SNF generator as an exponent vector over the factor base.
    pub generators: Vec<Vec<(usize, i128)>>,
    pub class_number: i128,
    pub galois: Option<GaloisMatrices>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub order: i128,
    pub invariants: Vec<i128>,
}

impl ClassGroupData {
    /// Positions of the invariants divisible by 3 and their 3-power parts.
    fn three_moduli(&self) -> (Vec<usize>, Vec<i128>) {
        let mut idx = Vec::new();
        let mut m = Vec::new();
        for (i, &d) in self.invariants.iter().enumerate() {
            let v = v3(d as u128);
            if v > 0 {
                idx.push(i);
                m.push(3i128.pow(v));
            }
        }
        (idx, m)
    }

    /// Invariants of the 3-part, largest first.
    pub fn three_part(&self) -> Vec<i128> {
        let mut t = self.three_moduli().1;
        t.sort_by(|a, b| b.cmp(a));
        t
    }

    pub fn three_order(&self) -> i128 {
        self.three_moduli().1.iter().product()
    }

    pub fn rank3(&self) -> usize {
        self.three_moduli().1.len()
    }

    pub fn v3_class_number(&self) -> u32 {
        v3(self.class_number as u128)
    }

    /// Projection of full SNF coordinates to the 3-part.
    pub fn three_coordinates(&self, coords: &[i128]) -> Vec<i128> {
        let (idx, m) = self.three_moduli();
        idx.iter().zip(&m).map(|(&i, &q)| coords[i].rem_euclid(q)).collect()
    }

    fn three_action(&self, g: &Mat) -> Mat {
        let (idx, m) = self.three_moduli();
        idx.iter().map(|&i| idx.iter().zip(&m).map(|(&j, &q)| g[i][j].rem_euclid(q)).collect()).collect()
    }

    fn action(&self, g: crate::numberfield::Automorphism) -> Result<Mat> {
        let gm = self
            .galois
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no Galois action", self.field)))?;
        Ok(self.three_action(match g {
            crate::numberfield::Automorphism::Sigma => &gm.sigma,
            crate::numberfield::Automorphism::Tau => &gm.tau,
        }))
    }
}

/// All prime ideals of norm at most `bound`, ordered by norm then basis.
pub fn build_factor_base(order: &NumberFieldOrder, bound: u64) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for q in primes_up_to(bound) {
        for p in order.factor_rational_prime(q)? {
            if p.norm() <= bound as i128 {
                out.push(p);
            }
        }
    }
    out.sort_by(|a, b| a.ideal.cmp(&b.ideal));
    Ok(out)
}

/// Norm bound for the relation base: `bound_mult·log²|d|`, at least 60,
/// at most the Minkowski bound.
pub fn relation_bound(order: &NumberFieldOrder, config: &ClassGroupConfig) -> u64 {
    let mink = minkowski_bound(order);
    let l = (order.discriminant.unsigned_abs() as f64).ln();
    let b = (config.bound_mult * l * l).max(60.0) as u64;
    b.min(mink)
}

fn unit_rank(order: &NumberFieldOrder) -> usize {
    order.signature.0 + order.signature.1 - 1
}

struct Evaluation {
    reduction: Reduction,
    h: i128,
    regulator: Option<f64>,
}

fn sorted_rows(rels: &[Relation], logs: &[Vec<Fixed>]) -> Vec<(lattice::SparseRow, Vec<Fixed>)> {
    let mut idx: Vec<usize> = (0..rels.len()).collect();
    idx.sort_by(|&a, &b| (&rels[a].exponents, &rels[a].element).cmp(&(&rels[b].exponents, &rels[b].element)));
    idx.into_iter()
        .map(|i| (rels[i].exponents.iter().map(|&(c, v)| (c, v as i128)).collect(), logs[i].clone()))
        .collect()
}

fn evaluate(rels: &[Relation], logs: &[Vec<Fixed>], ncols: usize, r: usize) -> Result<Option<Evaluation>> {
    let Some(reduction) = reduce(sorted_rows(rels, logs), ncols)? else { return Ok(None) };
    let mut h: i128 = 1;
    for (i, row) in reduction.hnf.iter().enumerate() {
        h = h.checked_mul(row[i]).ok_or(Error::Overflow("class number"))?;
    }
    let regulator = regulator(&reduction.unit_logs, r);
    Ok(Some(Evaluation { reduction, h, regulator }))
}

struct Collector<'b, 'a> {
    search: Search<'b, 'a>,
    rels: Vec<Relation>,
    logs: Vec<Vec<Fixed>>,
    budget: u64,
}

impl Collector<'_, '_> {
    fn push(&mut self, r: Relation) {
        self.logs.push(self.search.base.order.log_embedding(&r.element));
        self.rels.push(r);
    }

    fn grow(&mut self, rng: &mut ChaCha8Rng, want: usize) -> Result<()> {
        while self.rels.len() < want {
            let left = self.budget.saturating_sub(self.search.candidates);
            if left == 0 {
                return Err(Error::EffortExhausted(format!(
                    "{} relations after {} candidates",
                    self.rels.len(),
                    self.search.candidates
                )));
            }
            for r in self.search.run(rng, want - self.rels.len(), left)? {
                self.push(r);
            }
        }
        Ok(())
    }
}

/// Collects relations over `factor_base` until the lattice has full rank and
/// its index passes the analytic check, then confirms `h` with a batch from an
/// independent seed.
pub fn find_relations(
    order: &NumberFieldOrder,
    factor_base: &[PrimeIdeal],
    config: &ClassGroupConfig,
) -> Result<(Vec<Relation>, Certificate)> {
    let base = Base::new(order, factor_base)?;
    let est = analytic_hr(order)?;
    let r = unit_rank(order);
    let n = base.len();
    let mut col = Collector {
        search: Search::new(&base),
        rels: Vec::new(),
        logs: Vec::new(),
        budget: CANDIDATES_PER_EFFORT * config.effort.max(1) as u64,
    };
    for q in base.complete_rational_primes() {
        col.push(base.trivial_relation(q));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let step = n / 4 + 10;
    let mut want = n + r + 20;
    let seeds = [config.seed, config.seed ^ SECOND_SEED];
    loop {
        col.grow(&mut rng, want)?;
        let Some(ev) = evaluate(&col.rels, &col.logs, n, r)? else {
            want += step;
            continue;
        };
        let Some(reg) = ev.regulator else {
            want += step;
            continue;
        };
        let ratio = ev.h as f64 * reg / est;
        if ratio > CERT_RATIO {
            want += step;
            continue;
        }
        if ratio < 1.0 / CERT_RATIO {
            return Err(Error::EffortExhausted(format!(
                "h·R / estimate = {ratio:.4} is below the accepted window; relations are inconsistent with the analytic estimate"
            )));
        }
        // independent confirmation batch; if it lowers h, certify again
        let mut rng2 = ChaCha8Rng::seed_from_u64(seeds[1]);
        want = col.rels.len() + (n / 5).max(10);
        col.grow(&mut rng2, want)?;
        let ev2 = evaluate(&col.rels, &col.logs, n, r)?.ok_or_else(|| Error::Internal("rank dropped after adding relations".into()))?;
        if ev2.h == ev.h {
            let cert = Certificate {
                minkowski_bound: minkowski_bound(order),
                relation_bound: factor_base.iter().map(|p| p.norm() as u64).max().unwrap_or(0),
                tail_primes_checked: 0,
                regulator: reg,
                analytic_hr: est,
                ratio,
                seeds,
                stable_across_seeds: true,
                candidates_tried: col.search.candidates,
            };
            return Ok((col.rels, cert));
        }
        rng = rng2;
    }
}

/// Shows every prime of norm in `(relation bound, Minkowski bound]` lies in the
/// subgroup generated by the base; for Galois fields one prime per orbit suffices.
fn check_tail(
    order: &NumberFieldOrder,
    search: &mut Search,
    rng: &mut ChaCha8Rng,
    lo: u64,
    hi: u64,
    budget: u64,
) -> Result<usize> {
    let galois = order.label.kind == FieldKind::Sextic;
    let d = order.label.d;
    let small = isqrt_u128(hi as u128) as u64;
    let mut count = 0;
    for q in primes_up_to(hi) {
        let ramified = 3 * d % q == 0;
        let ideals: Vec<IdealHNF> = if q <= small || q <= lo || ramified {
            order
                .factor_rational_prime(q)?
                .into_iter()
                .filter(|p| p.norm() > lo as i128 && p.norm() <= hi as i128)
                .map(|p| p.ideal)
                .collect()
        } else {
            if galois && (q % 3 != 1 || pow_mod(d % q, (q - 1) / 3, q) != 1) {
                continue;
            }
            match order.degree_one_primes(q) {
                Some(v) => v,
                None => order
                    .factor_rational_prime(q)?
                    .into_iter()
                    .filter(|p| p.f == 1)
                    .map(|p| p.ideal)
                    .collect(),
            }
        };
        let take = if galois { ideals.len().min(1) } else { ideals.len() };
        for p in ideals.iter().take(take) {
            if search.eliminate(rng, p, budget)?.is_none() {
                return Err(Error::EffortExhausted(format!(
                    "no smooth element found in a prime of norm {} above {q}",
                    p.norm
                )));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Class number, SNF structure and generator map of the maximal order.
pub fn class_group(order: &NumberFieldOrder, config: &ClassGroupConfig) -> Result<ClassGroupData> {
    let bound = relation_bound(order, config);
    let factor_base = build_factor_base(order, bound)?;
    if factor_base.is_empty() {
        return Err(Error::InvalidArgument("empty factor base".into()));
    }
    let (relations, mut certificate) = find_relations(order, &factor_base, config)?;
    let base = Base::new(order, &factor_base)?;
    let n = base.len();
    let r = unit_rank(order);
    let logs: Vec<Vec<Fixed>> = relations.iter().map(|x| order.log_embedding(&x.element)).collect();
    let ev = evaluate(&relations, &logs, n, r)?.ok_or_else(|| Error::Internal("certified relations lost full rank".into()))?;

    let snf = smith_normal_form(&ev.reduction.hnf)?;
    let keep: Vec<usize> = (0..snf.diagonal.len()).filter(|&i| snf.diagonal[i] != 1).collect();
    let invariants: Vec<i128> = keep.iter().map(|&i| snf.diagonal[i]).collect();
    if invariants.iter().product::<i128>() != ev.h {
        return Err(Error::InvariantViolated("product of invariants differs from the lattice index".into()));
    }
    let reduce_coords = |v: Vec<i128>| -> Vec<i128> { v.iter().zip(&invariants).map(|(x, d)| x.rem_euclid(*d)).collect() };

    let mut generator_map: Vec<Option<Vec<i128>>> = vec![None; n];
    for (k, &c) in ev.reduction.remaining.iter().enumerate() {
        generator_map[c] = Some(reduce_coords(keep.iter().map(|&i| snf.v[k][i]).collect()));
    }
    for (c, expr) in ev.reduction.substitutions.iter().rev() {
        let mut acc = vec![0i128; invariants.len()];
        for &(k, a) in expr {
            let g = generator_map[k].as_ref().ok_or_else(|| Error::Internal("unresolved substitution".into()))?;
            for ((x, y), d) in acc.iter_mut().zip(g).zip(&invariants) {
                *x = (*x + a.rem_euclid(*d) * y) % d;
            }
        }
        generator_map[*c] = Some(reduce_coords(acc));
    }
    let generator_map: Vec<Vec<i128>> = generator_map
        .into_iter()
        .map(|g| g.ok_or_else(|| Error::Internal("factor-base prime without coordinates".into())))
        .collect::<Result<_>>()?;
    let generators: Vec<Vec<(usize, i128)>> = keep
        .iter()
        .map(|&i| {
            snf.v_inv[i]
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(k, &a)| (ev.reduction.remaining[k], a))
                .collect()
        })
        .collect();

    let galois = match &base.conj {
        None => None,
        Some(conj) => {
            let mat_for = |perm: &Vec<usize>| -> Mat {
                generators
                    .iter()
                    .map(|y| {
                        let mut row = vec![0i128; invariants.len()];
                        for &(k, a) in y {
                            for (x, g) in row.iter_mut().zip(&generator_map[perm[k]]) {
                                *x += a * g;
                            }
                        }
                        reduce_coords(row)
                    })
                    .collect()
            };
            // conjugation order: σ, σ², τ, …
            Some(GaloisMatrices { sigma: mat_for(&conj.perms[0]), tau: mat_for(&conj.perms[2]) })
        }
    };

    let mink = minkowski_bound(order);
    let mut search = Search::new(&base);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let per_prime = 2_000 * config.effort.max(1) as u64;
    certificate.tail_primes_checked = check_tail(order, &mut search, &mut rng, bound, mink, per_prime)?;
    certificate.candidates_tried += search.candidates;

    Ok(ClassGroupData {
        field: order.label,
        config: *config,
        factor_base,
        relations,
        invariants,
        generator_map,
        generators,
        class_number: ev.h,
        galois,
        certificate,
    })
}

/// SNF coordinates of the class of an integral ideal.
pub fn class_coordinates(order: &NumberFieldOrder, cg: &ClassGroupData, a: &IdealHNF) -> Result<Vec<i128>> {
    if a.field != cg.field {
        return Err(Error::MixedOrders);
    }
    let k = cg.invariants.len();
    if a.is_unit() {
        return Ok(vec![0; k]);
    }
    let base = Base::plain(order, &cg.factor_base);
    let seed = cg.config.seed ^ (a.norm as u64).wrapping_mul(0x2545_f491_4f6c_dd1d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let combine = |acc: &mut Vec<i128>, ex: &[(usize, i64)], sign: i128| {
        for &(i, v) in ex {
            for (x, g) in acc.iter_mut().zip(&cg.generator_map[i]) {
                *x += sign * v as i128 * g;
            }
        }
    };
    let mut target = a.clone();
    let mut shift: Vec<(usize, i64)> = Vec::new();
    for attempt in 0..400u32 {
        if attempt > 0 {
            let i = rng.gen_range(0..cg.factor_base.len());
            match order.ideal_mul(a, &cg.factor_base[i].ideal) {
                Ok(b) => {
                    target = b;
                    shift = vec![(i, 1)];
                }
                Err(_) => continue,
            }
        }
        let minus = base.valuations_of(&target)?;
        let sampler = Sampler::new(order, &target);
        for t in 0..48 {
            let x = sampler.sample(&mut rng, 1 + (t / 16) as i128);
            if let Some(ex) = base.factor(&x, target.norm, &minus)? {
                // (x) = target · Π P^ex, so [a] = −Σ ex·[P] − [shift]
                let mut acc = vec![0i128; k];
                combine(&mut acc, &ex, -1);
                combine(&mut acc, &shift, -1);
                return Ok(acc.iter().zip(&cg.invariants).map(|(x, d)| x.rem_euclid(*d)).collect());
            }
        }
    }
    Err(Error::SmoothnessSearchExhausted(format!("ideal of norm {}", a.norm)))
}

pub fn is_principal(order: &NumberFieldOrder, cg: &ClassGroupData, a: &IdealHNF) -> Result<bool> {
    Ok(class_coordinates(order, cg, a)?.iter().all(|&c| c == 0))
}

/// Fixed points of an automorphism on the 3-part.
pub fn fixed_subgroup(cg: &ClassGroupData, g: crate::numberfield::Automorphism) -> Result<Subgroup> {
    let m = cg.action(g)?;
    let (_, moduli) = cg.three_moduli();
    let fixed: HashSet<Vec<i128>> = group3::elements(&moduli).into_iter().filter(|x| &group3::act(&m, x, &moduli) == x).collect();
    Ok(Subgroup { order: fixed.len() as i128, invariants: group3::invariants(&fixed, &moduli) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub p: u64,
    /// `v₃(h_k)`.
    pub s: u32,
    pub rank3: usize,
    /// 3-part of the sextic class group, largest factor first.
    pub type3: Vec<i128>,
    /// 3-part of the cubic class group.
    pub cl3_l: Vec<i128>,
    pub u: u32,
    /// Order of the σ-fixed 3-classes.
    pub ambiguous_order: i128,
    /// Order of the τ-fixed 3-classes.
    pub plus_part_order: i128,
    /// Order of the τ-fixed part of the σ-fixed 3-classes.
    pub ambiguous_plus_order: i128,
    /// `rank(C/C^{1−σ})` and `rank(C^{1−σ}/C^{(1−σ)²})`.
    pub sigma_filtration_ranks: (usize, usize),
}

/// Expected 3-type from `v₃(h_k)`: `(3^{s/2}, 3^{s/2})` for even `s`,
/// `(3^{(s+1)/2}, 3^{(s−1)/2})` for odd `s`, trivial factors dropped.
pub fn parity_type(s: u32) -> Vec<i128> {
    let (a, b) = if s % 2 == 0 { (s / 2, s / 2) } else { ((s + 1) / 2, (s - 1) / 2) };
    [a, b].into_iter().filter(|&e| e > 0).map(|e| 3i128.pow(e)).collect()
}

pub fn structure_report(cg_l: &ClassGroupData, cg_k: &ClassGroupData) -> Result<StructureReport> {
    if cg_l.field.kind != FieldKind::Cubic || cg_k.field.kind != FieldKind::Sextic || cg_l.field.d != cg_k.field.d {
        return Err(Error::InvalidArgument("expected the cubic and sextic class groups of one radicand".into()));
    }
    let s = cg_k.v3_class_number();
    let type3 = cg_k.three_part();
    let ck = cg_k.three_order();
    let cl = cg_l.three_order();
    if (3 * ck) % (cl * cl) != 0 || !matches!(3 * ck / (cl * cl), 1 | 3) {
        return Err(Error::InvariantViolated(format!("3·|C_k,3| / |C_L,3|² = 3·{ck}/{cl}² is not 1 or 3")));
    }
    let u = (3 * ck / (cl * cl)) as u32;
    if type3 != parity_type(s) {
        return Err(Error::InvariantViolated(format!("3-type {type3:?} does not match v₃(h_k) = {s}")));
    }
    let rank3 = cg_k.rank3();
    if !(1..=2).contains(&rank3) {
        return Err(Error::InvariantViolated(format!("3-rank {rank3} outside 1..=2")));
    }
    use crate::numberfield::Automorphism::{Sigma, Tau};
    let (_, moduli) = cg_k.three_moduli();
    let ms = cg_k.action(Sigma)?;
    let mt = cg_k.action(Tau)?;
    let all = group3::elements(&moduli);
    let fixed_s: Vec<&Vec<i128>> = all.iter().filter(|x| &&group3::act(&ms, x, &moduli) == x).collect();
    let fixed_t = all.iter().filter(|x| &&group3::act(&mt, x, &moduli) == x).count();
    let fixed_st = fixed_s.iter().filter(|x| &&group3::act(&mt, x, &moduli) == *x).count();

    // C^{1−σ} and C^{(1−σ)²}
    let one_minus = |x: &Vec<i128>| group3::sub(x, &group3::act(&ms, x, &moduli), &moduli);
    let a1: HashSet<Vec<i128>> = all.iter().map(one_minus).collect();
    let a2: HashSet<Vec<i128>> = a1.iter().map(one_minus).collect();
    let mut gens1: Vec<Vec<i128>> = a1.iter().cloned().collect();
    gens1.extend(group3::triple(&all.iter().cloned().collect(), &moduli));
    let c_mod = group3::span(&gens1, &moduli);
    let mut gens2: Vec<Vec<i128>> = a2.iter().cloned().collect();
    gens2.extend(group3::triple(&a1, &moduli));
    let a1_mod = group3::span(&gens2, &moduli);
    let r1 = group3::log3_index(all.len(), c_mod.len());
    let r2 = group3::log3_index(a1.len(), a1_mod.len());

    Ok(StructureReport {
        p: cg_k.field.d,
        s,
        rank3,
        type3,
        cl3_l: cg_l.three_part(),
        u,
        ambiguous_order: fixed_s.len() as i128,
        plus_part_order: fixed_t as i128,
        ambiguous_plus_order: fixed_st as i128,
        sigma_filtration_ranks: (r1, r2),
    })
}

