use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_cubefree, is_prime};
use crate::error::{Error, Result};
use crate::hp::{CFixed, Fixed};
use crate::linalg::{self, det, det_big, hnf_coordinates, hnf_mod, left_kernel_mod, lower_hnf_mod, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    /// `Q(∛d)`
    Cubic,
    /// `Q(∛d, ζ₃)`
    Sextic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldLabel {
    pub kind: FieldKind,
    pub d: u64,
}

impl fmt::Display for FieldLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Cubic => write!(f, "L({})", self.d),
            FieldKind::Sextic => write!(f, "k({})", self.d),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Automorphism {
    /// `θ ↦ ζ₃θ`, `ζ₃ ↦ ζ₃`
    Sigma,
    /// `θ ↦ θ`, `ζ₃ ↦ ζ₃²`
    Tau,
}

/// Matrices of σ and τ acting on row coordinates: `g(x) = x · M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisAction {
    pub sigma: Mat,
    pub tau: Mat,
}

#[derive(Clone, Debug)]
struct Place {
    /// σ(θ) = θ_ℝ · ω^rotation
    rotation: u32,
    real: bool,
}

/// An element generating the field together with its minimal polynomial and
/// the index of `Z[γ]` in the maximal order.
#[derive(Clone, Debug)]
pub struct Generator {
    pub element: Vec<i128>,
    /// Monic, lowest degree first.
    pub min_poly: Vec<i128>,
    /// `γ⁰ … γⁿ`
    pub powers: Vec<Vec<i128>>,
    pub index: BigInt,
}

/// Maximal order of a pure cubic field or of its normal closure.
///
/// The integral basis `ω` is stored as rows over the product basis
/// `θ^i ζ^j` (index `i + 3j`), scaled by `denominator`; `ω₀ = 1`.
#[derive(Clone, Debug)]
pub struct NumberFieldOrder {
    pub label: FieldLabel,
    pub degree: usize,
    pub defining_poly: Vec<i128>,
    pub basis: Mat,
    pub denominator: i128,
    pub discriminant: i128,
    pub signature: (usize, usize),
    table: Vec<Vec<Vec<i128>>>,
    galois: Option<GaloisAction>,
    places: Vec<Place>,
    emb: Vec<Vec<(f64, f64)>>,
    emb_hp: Vec<Vec<CFixed>>,
    t2: Vec<Vec<f64>>,
    generators: Vec<Generator>,
}

/// Maximal order of `L = Q(∛p)` for a prime `p ≡ 1 (mod 3)`.
pub fn build_cubic_order(p: u64) -> Result<NumberFieldOrder> {
    crate::eisenstein::check_prime_1_mod_3(p)?;
    NumberFieldOrder::build(FieldLabel { kind: FieldKind::Cubic, d: p })
}

/// Maximal order of `k = Q(∛p, ζ₃)` for a prime `p ≡ 1 (mod 3)`.
pub fn build_sextic_order(p: u64) -> Result<NumberFieldOrder> {
    crate::eisenstein::check_prime_1_mod_3(p)?;
    NumberFieldOrder::build(FieldLabel { kind: FieldKind::Sextic, d: p })
}

/// Maximal order of `Q(∛d)` for any cubefree `d > 1`; used for small test fields.
pub fn build_pure_cubic_order(d: u64) -> Result<NumberFieldOrder> {
    if !is_cubefree(d) {
        return Err(Error::InvalidRadicand(d));
    }
    NumberFieldOrder::build(FieldLabel { kind: FieldKind::Cubic, d })
}

pub fn build_pure_sextic_order(d: u64) -> Result<NumberFieldOrder> {
    if !is_cubefree(d) {
        return Err(Error::InvalidRadicand(d));
    }
    NumberFieldOrder::build(FieldLabel { kind: FieldKind::Sextic, d })
}

fn product_degree(kind: FieldKind) -> usize {
    match kind {
        FieldKind::Cubic => 3,
        FieldKind::Sextic => 6,
    }
}

/// Multiplication in the product order `Z[θ] ⊗ Z[ζ₃]` (or `Z[θ]`).
fn product_mul(kind: FieldKind, d: u64, x: &[i128], y: &[i128]) -> Vec<i128> {
    let n = product_degree(kind);
    let d = d as i128;
    let mut out = vec![0i128; n];
    for (m1, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (m2, &b) in y.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let (i, j) = (m1 % 3 + m2 % 3, m1 / 3 + m2 / 3);
            let c = if i >= 3 { a * b * d } else { a * b };
            let i = i % 3;
            match j {
                0 | 1 => out[i + 3 * j] += c,
                _ => {
                    // ζ² = -1 - ζ
                    out[i] -= c;
                    out[i + 3] -= c;
                }
            }
        }
    }
    out
}

/// Solves `y · B = w` for lower-triangular `B`; `None` if not integral.
fn solve_lower(b: &Mat, w: &[i128]) -> Option<Vec<i128>> {
    let n = b.len();
    let mut y = vec![0i128; n];
    for m in (0..n).rev() {
        let mut s = w[m];
        for i in m + 1..n {
            s -= y[i] * b[i][m];
        }
        if s % b[m][m] != 0 {
            return None;
        }
        y[m] = s / b[m][m];
    }
    Some(y)
}

fn build_table(kind: FieldKind, d: u64, b: &Mat, den: i128) -> Result<Vec<Vec<Vec<i128>>>> {
    let n = b.len();
    let mut t = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let w = product_mul(kind, d, &b[i], &b[j]);
            let y = solve_lower(b, &w).ok_or_else(|| Error::Internal("basis not closed under multiplication".into()))?;
            if y.iter().any(|v| v % den != 0) {
                return Err(Error::Internal("basis not closed under multiplication".into()));
            }
            let c: Vec<i128> = y.iter().map(|v| v / den).collect();
            t[i][j] = c.clone();
            t[j][i] = c;
        }
    }
    Ok(t)
}

fn table_mul(t: &[Vec<Vec<i128>>], x: &[i128], y: &[i128]) -> Vec<i128> {
    let n = x.len();
    let mut out = vec![0i128; n];
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0 {
                continue;
            }
            let c = x[i] * y[j];
            for (k, &tk) in t[i][j].iter().enumerate() {
                out[k] += c * tk;
            }
        }
    }
    out
}

fn table_mul_mod(t: &[Vec<Vec<i128>>], x: &[i128], y: &[i128], q: i128) -> Vec<i128> {
    table_mul(t, x, y).into_iter().map(|v| v.rem_euclid(q)).collect()
}

fn table_pow_mod(t: &[Vec<Vec<i128>>], x: &[i128], mut e: u128, q: i128) -> Vec<i128> {
    let n = x.len();
    let mut acc = vec![0i128; n];
    acc[0] = 1;
    let mut b: Vec<i128> = x.iter().map(|v| v.rem_euclid(q)).collect();
    while e > 0 {
        if e & 1 == 1 {
            acc = table_mul_mod(t, &acc, &b, q);
        }
        b = table_mul_mod(t, &b, &b, q);
        e >>= 1;
    }
    acc
}

fn unit_vec(n: usize, i: usize) -> Vec<i128> {
    let mut v = vec![0i128; n];
    v[i] = 1;
    v
}

fn to_u64_rows(rows: &[Vec<i128>], q: i128) -> Vec<Vec<u64>> {
    rows.iter().map(|r| r.iter().map(|v| v.rem_euclid(q) as u64).collect()).collect()
}

fn to_i128_rows(rows: &[Vec<u64>]) -> Vec<Vec<i128>> {
    rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect()
}

/// Radical of `qO` for the order with table `t`: kernel of `x ↦ x^(q^j)` mod q.
pub(crate) fn radical_from_table(t: &[Vec<Vec<i128>>], q: u64) -> Mat {
    let n = t.len();
    let mut e: u128 = q as u128;
    while e < n as u128 {
        e *= q as u128;
    }
    let frob: Vec<Vec<i128>> = (0..n).map(|i| table_pow_mod(t, &unit_vec(n, i), e, q as i128)).collect();
    let ker = left_kernel_mod(&to_u64_rows(&frob, q as i128), q);
    hnf_mod(&to_i128_rows(&ker), n, q as i128)
}

/// `{x ∈ O : x·I ⊆ q·I}` for an ideal `I ⊇ qO` given by its Hermite basis.
fn multiplier_numerator(t: &[Vec<Vec<i128>>], ideal: &Mat, q: u64) -> Result<Mat> {
    let n = t.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n * n);
        for b in ideal {
            let prod = table_mul(t, &unit_vec(n, i), b);
            let c = hnf_coordinates(ideal, &prod)
                .ok_or_else(|| Error::Internal("radical is not an ideal".into()))?;
            row.extend(c.into_iter().map(|v| v.rem_euclid(q as i128) as u64));
        }
        rows.push(row);
    }
    let ker = left_kernel_mod(&rows, q);
    Ok(hnf_mod(&to_i128_rows(&ker), n, q as i128))
}

impl NumberFieldOrder {
    fn build(label: FieldLabel) -> Result<Self> {
        let kind = label.kind;
        let d = label.d;
        let n = product_degree(kind);
        let mut basis = linalg::identity(n);
        let mut den: i128 = 1;
        let mut table = build_table(kind, d, &basis, den)?;
        let mut primes: Vec<u64> = vec![3];
        primes.extend(factorize(d).into_iter().map(|(q, _)| q).filter(|&q| q != 3));
        for &q in &primes {
            let mut rounds = 0;
            loop {
                let rad = radical_from_table(&table, q);
                let u = multiplier_numerator(&table, &rad, q)?;
                if (0..n).all(|i| u[i][i] == q as i128) {
                    break;
                }
                rounds += 1;
                if rounds > 8 {
                    return Err(Error::MaximalizationFailed(q));
                }
                let scaled = linalg::mat_mul(&u, &basis)?;
                let new_den = den * q as i128;
                let mut b = lower_hnf_mod(&scaled, n, new_den);
                let g = b.iter().flatten().fold(new_den, |g, &v| crate::arith::gcd_i128(g, v));
                for row in b.iter_mut() {
                    for v in row.iter_mut() {
                        *v /= g;
                    }
                }
                basis = b;
                den = new_den / g;
                table = build_table(kind, d, &basis, den)?;
            }
        }

        let traces: Vec<i128> = (0..n).map(|k| (0..n).map(|j| table[k][j][j]).sum()).collect();
        let trace_form: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigInt::from((0..n).map(|k| table[i][j][k] * traces[k]).sum::<i128>()))
                    .collect()
            })
            .collect();
        let discriminant = det_big(&trace_form)
            .to_i128()
            .ok_or(Error::Overflow("discriminant"))?;

        let (places, signature) = match kind {
            FieldKind::Cubic => (
                vec![Place { rotation: 0, real: true }, Place { rotation: 1, real: false }],
                (1, 1),
            ),
            FieldKind::Sextic => (
                (0..3).map(|r| Place { rotation: r, real: false }).collect(),
                (0, 3),
            ),
        };

        let defining_poly = match kind {
            FieldKind::Cubic => vec![-(d as i128), 0, 0, 1],
            FieldKind::Sextic => Vec::new(),
        };

        let mut order = NumberFieldOrder {
            label,
            degree: n,
            defining_poly,
            basis,
            denominator: den,
            discriminant,
            signature,
            table,
            galois: None,
            places,
            emb: Vec::new(),
            emb_hp: Vec::new(),
            t2: Vec::new(),
            generators: Vec::new(),
        };
        order.init_embeddings();
        order.init_generators()?;
        if kind == FieldKind::Sextic {
            order.defining_poly = order.generators[0].min_poly.clone();
            order.init_galois()?;
        }
        Ok(order)
    }

    fn init_embeddings(&mut self) {
        let n = self.degree;
        let theta = Fixed::cbrt_int(self.label.d);
        let half = Fixed::from_int(1).div_int(2);
        let s3 = Fixed::sqrt_int(3).div_int(2);
        let roots = [
            CFixed { re: Fixed::from_int(1), im: Fixed::zero() },
            CFixed { re: half.neg(), im: s3.clone() },
            CFixed { re: half.neg(), im: s3.neg() },
        ];
        let theta_pows = [Fixed::from_int(1), theta.clone(), theta.mul(&theta)];
        self.emb_hp = self
            .places
            .iter()
            .map(|pl| {
                let prod: Vec<CFixed> = (0..n)
                    .map(|m| {
                        let (i, j) = (m % 3, m / 3);
                        let rot = roots[((pl.rotation as usize) * i + j) % 3].clone();
                        CFixed { re: rot.re.mul(&theta_pows[i]), im: rot.im.mul(&theta_pows[i]) }
                    })
                    .collect();
                self.basis
                    .iter()
                    .map(|row| {
                        let mut acc = CFixed::zero();
                        for (m, &c) in row.iter().enumerate() {
                            if c != 0 {
                                acc = acc.add(&prod[m].mul_int(&BigInt::from(c)));
                            }
                        }
                        acc.div_int(self.denominator)
                    })
                    .collect()
            })
            .collect();
        self.emb = self
            .emb_hp
            .iter()
            .map(|v| v.iter().map(|z| (z.re.to_f64(), z.im.to_f64())).collect())
            .collect();
        self.t2 = (0..n)
            .map(|r| {
                (0..n)
                    .map(|s| {
                        self.places
                            .iter()
                            .zip(&self.emb)
                            .map(|(pl, e)| {
                                let w = if pl.real { 1.0 } else { 2.0 };
                                w * (e[r].0 * e[s].0 + e[r].1 * e[s].1)
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect();
    }

    fn init_generators(&mut self) -> Result<()> {
        let n = self.degree;
        let candidates: Vec<Vec<i128>> = match self.label.kind {
            FieldKind::Cubic => vec![vec![0, 1, 0]],
            FieldKind::Sextic => (1..=6).map(|c| vec![0, 1, 0, c, 0, 0]).collect(),
        };
        for cand in candidates {
            let g = self.from_product(&cand).ok_or_else(|| Error::Internal("generator not integral".into()))?;
            let mut powers = vec![self.one()];
            for _ in 1..=n {
                let last = powers.last().unwrap();
                powers.push(self.mul(last, &g));
            }
            let index = det_big(&linalg::to_big(&powers[..n].to_vec())).abs();
            if index.is_zero() {
                continue;
            }
            let min_poly = linalg::char_poly(&self.mul_matrix(&g))?.into_iter().rev().collect();
            self.generators.push(Generator { element: g, min_poly, powers, index });
        }
        if self.generators.is_empty() {
            return Err(Error::Internal("no primitive element found".into()));
        }
        Ok(())
    }

    fn init_galois(&mut self) -> Result<()> {
        let n = self.degree;
        let (kind, d) = (self.label.kind, self.label.d);
        let zeta_pow = |k: usize| -> Vec<i128> {
            let mut v = vec![0i128; 6];
            match k % 3 {
                0 => v[0] = 1,
                1 => v[3] = 1,
                _ => {
                    v[0] = -1;
                    v[3] = -1;
                }
            }
            v
        };
        let image = |m: usize, sigma: bool| -> Vec<i128> {
            let (i, j) = (m % 3, m / 3);
            let mut th = vec![0i128; 6];
            th[i] = 1;
            let z = if sigma { zeta_pow(i + j) } else { zeta_pow(2 * j) };
            product_mul(kind, d, &th, &z)
        };
        let mut mats = Vec::new();
        for sigma in [true, false] {
            let mut m = Vec::with_capacity(n);
            for row in &self.basis {
                let mut v = vec![0i128; n];
                for (k, &c) in row.iter().enumerate() {
                    if c != 0 {
                        for (l, x) in image(k, sigma).into_iter().enumerate() {
                            v[l] += c * x;
                        }
                    }
                }
                m.push(solve_lower(&self.basis, &v).ok_or_else(|| Error::Internal("Galois image not integral".into()))?);
            }
            mats.push(m);
        }
        let tau = mats.pop().unwrap();
        let sigma = mats.pop().unwrap();
        self.galois = Some(GaloisAction { sigma, tau });
        Ok(())
    }

    pub fn galois(&self) -> Option<&GaloisAction> {
        self.galois.as_ref()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn one(&self) -> Vec<i128> {
        unit_vec(self.degree, 0)
    }

    pub fn from_int(&self, a: i128) -> Vec<i128> {
        let mut v = vec![0i128; self.degree];
        v[0] = a;
        v
    }

    /// Coordinates of an element given over `θ^i ζ^j`, if it lies in the order.
    pub fn from_product(&self, v: &[i128]) -> Option<Vec<i128>> {
        let w: Vec<i128> = v.iter().map(|x| x * self.denominator).collect();
        solve_lower(&self.basis, &w)
    }

    /// `(numerators, denominator)` over `θ^i ζ^j`.
    pub fn to_product(&self, x: &[i128]) -> (Vec<i128>, i128) {
        let n = self.degree;
        let mut v = vec![0i128; n];
        for (i, &c) in x.iter().enumerate() {
            for m in 0..n {
                v[m] += c * self.basis[i][m];
            }
        }
        (v, self.denominator)
    }

    pub fn mul(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        table_mul(&self.table, x, y)
    }

    pub fn checked_mul(&self, x: &[i128], y: &[i128]) -> Result<Vec<i128>> {
        let n = self.degree;
        let mut out = vec![0i128; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let c = x[i].checked_mul(y[j]).ok_or(Error::Overflow("element product"))?;
                for (k, &tk) in self.table[i][j].iter().enumerate() {
                    if tk != 0 {
                        out[k] = c
                            .checked_mul(tk)
                            .and_then(|v| out[k].checked_add(v))
                            .ok_or(Error::Overflow("element product"))?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_mod(&self, x: &[i128], y: &[i128], q: i128) -> Vec<i128> {
        table_mul_mod(&self.table, x, y, q)
    }

    pub fn pow_mod(&self, x: &[i128], e: u128, q: i128) -> Vec<i128> {
        table_pow_mod(&self.table, x, e, q)
    }

    /// Matrix `M` with `x·y = y·M` for row vectors.
    pub fn mul_matrix(&self, x: &[i128]) -> Mat {
        let n = self.degree;
        let mut m = vec![vec![0i128; n]; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[j][k] += xi * self.table[i][j][k];
                }
            }
        }
        m
    }

    pub fn norm(&self, x: &[i128]) -> BigInt {
        let m = self.mul_matrix(x);
        match det(&m) {
            Some(v) => BigInt::from(v),
            None => det_big(&linalg::to_big(&m)),
        }
    }

    pub fn trace(&self, x: &[i128]) -> i128 {
        let m = self.mul_matrix(x);
        (0..self.degree).map(|i| m[i][i]).sum()
    }

    pub fn is_zero(x: &[i128]) -> bool {
        x.iter().all(|&v| v == 0)
    }

    pub fn apply(&self, g: Automorphism, x: &[i128]) -> Result<Vec<i128>> {
        let gal = self.galois.as_ref().ok_or_else(|| Error::InvalidArgument(format!("{} has no Galois action", self.label)))?;
        let m = match g {
            Automorphism::Sigma => &gal.sigma,
            Automorphism::Tau => &gal.tau,
        };
        Ok(row_times(x, m))
    }

    /// Embeddings at the archimedean places (one per conjugate pair).
    pub fn embed(&self, x: &[i128]) -> Vec<(f64, f64)> {
        self.emb
            .iter()
            .map(|e| {
                let mut re = 0.0;
                let mut im = 0.0;
                for (k, &c) in x.iter().enumerate() {
                    re += c as f64 * e[k].0;
                    im += c as f64 * e[k].1;
                }
                (re, im)
            })
            .collect()
    }

    pub fn place_is_real(&self) -> Vec<bool> {
        self.places.iter().map(|p| p.real).collect()
    }

    /// Quadratic form `Σ |σ(x)|²` over all embeddings, on basis coordinates.
    pub fn t2_form(&self) -> &[Vec<f64>] {
        &self.t2
    }

    /// Weighted logarithmic embedding: `log|σ(x)|` at real places,
    /// `2·log|σ(x)|` at complex places.
    pub fn log_embedding(&self, x: &[i128]) -> Vec<Fixed> {
        self.places
            .iter()
            .zip(&self.emb_hp)
            .map(|(pl, e)| {
                let mut acc = CFixed::zero();
                for (k, &c) in x.iter().enumerate() {
                    if c != 0 {
                        acc = acc.add(&e[k].mul_int(&BigInt::from(c)));
                    }
                }
                let l = acc.abs2().ln();
                if pl.real {
                    l.div_int(2)
                } else {
                    l
                }
            })
            .collect()
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    /// `[O : Z[θ, ζ₃]]`, the index of the product order.
    pub fn product_order_index(&self) -> BigInt {
        let n = self.degree as u32;
        let num = BigInt::from(self.denominator).pow(n);
        let dt = det_big(&linalg::to_big(&self.basis)).abs();
        num / dt
    }

    /// Runs one multiplier-ring step at `q`; true when the order is already `q`-maximal.
    pub fn is_q_maximal(&self, q: u64) -> Result<bool> {
        let rad = radical_from_table(&self.table, q);
        let u = multiplier_numerator(&self.table, &rad, q)?;
        Ok((0..self.degree).all(|i| u[i][i] == q as i128))
    }

    /// Radical of `qO` in Hermite form.
    pub fn radical(&self, q: u64) -> Mat {
        radical_from_table(&self.table, q)
    }

    pub fn is_prime_radicand(&self) -> bool {
        is_prime(self.label.d)
    }
}

pub(crate) fn row_times(x: &[i128], m: &Mat) -> Vec<i128> {
    let n = m[0].len();
    let mut out = vec![0i128; n];
    for (i, &c) in x.iter().enumerate() {
        if c != 0 {
            for k in 0..n {
                out[k] += c * m[i][k];
            }
        }
    }
    out
}
