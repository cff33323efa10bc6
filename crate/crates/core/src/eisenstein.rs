//! Exact arithmetic in the Eisenstein integers Z[ζ₃] and cubic residue symbols.
//!
//! Elements are `a + bζ` with `ζ² = -1 - ζ`. The cubic residue symbol of `α`
//! modulo a prime `π` is the cube root of unity congruent to
//! `α^((N(π)-1)/3)`; it is stored as the exponent of `ζ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime, pow_mod, sqrt_mod};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn zeta() -> Self {
        Self::new(0, 1)
    }

    /// `λ = 1 - ζ`, the prime above 3.
    pub fn lambda() -> Self {
        Self::new(1, -1)
    }

    /// The six units `±1, ±ζ, ±ζ²`.
    pub fn units() -> [EisensteinInt; 6] {
        [
            Self::new(1, 0),
            Self::new(-1, 0),
            Self::new(0, 1),
            Self::new(0, -1),
            Self::new(-1, -1),
            Self::new(1, 1),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Image under `ζ ↦ ζ²`: `a + bζ² = (a - b) - bζ`.
    pub fn conj(&self) -> Self {
        EisensteinInt { a: &self.a - &self.b, b: -&self.b }
    }

    /// `a ≡ 1` and `b ≡ 0 (mod 3)`.
    pub fn is_primary(&self) -> bool {
        self.a.mod_floor(&BigInt::from(3)).is_one() && (&self.b % BigInt::from(3)).is_zero()
    }

    pub fn pow(&self, exp: &BigInt) -> Self {
        assert!(!exp.is_negative());
        let mut acc = Self::one();
        for i in (0..exp.bits()).rev() {
            acc = &acc * &acc;
            if exp.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    /// Euclidean division with the quotient rounded coordinatewise.
    pub fn div_rem(&self, m: &Self) -> (Self, Self) {
        assert!(!m.is_zero(), "division by zero");
        let n = m.norm();
        let num = self * &m.conj();
        let q = EisensteinInt { a: round_div(&num.a, &n), b: round_div(&num.b, &n) };
        let r = self - &(&q * m);
        debug_assert!(r.norm() < n);
        (q, r)
    }

    pub fn rem(&self, m: &Self) -> Self {
        self.div_rem(m).1
    }

    /// Exact quotient, if `m` divides `self`.
    pub fn div_exact(&self, m: &Self) -> Option<Self> {
        let n = m.norm();
        let num = self * &m.conj();
        if (&num.a % &n).is_zero() && (&num.b % &n).is_zero() {
            Some(EisensteinInt { a: num.a / &n, b: num.b / &n })
        } else {
            None
        }
    }

    pub fn divides(&self, x: &Self) -> bool {
        x.div_exact(self).is_some()
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut x, mut y) = (self.clone(), other.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x
    }
}

fn round_div(x: &BigInt, n: &BigInt) -> BigInt {
    // floor((2x + n) / 2n)
    let two = BigInt::from(2);
    (x * &two + n).div_floor(&(n * &two))
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl<'a> Add<&'a EisensteinInt> for &'a EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, o: &EisensteinInt) -> EisensteinInt {
        EisensteinInt { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a EisensteinInt> for &'a EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, o: &EisensteinInt) -> EisensteinInt {
        EisensteinInt { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a EisensteinInt> for &'a EisensteinInt {
    type Output = EisensteinInt;
    fn mul(self, o: &EisensteinInt) -> EisensteinInt {
        // (a + bζ)(c + dζ) = (ac - bd) + (ad + bc - bd)ζ
        let bd = &self.b * &o.b;
        EisensteinInt {
            a: &self.a * &o.a - &bd,
            b: &self.a * &o.b + &self.b * &o.a - bd,
        }
    }
}

impl Neg for &EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        EisensteinInt { a: -&self.a, b: -&self.b }
    }
}

/// A cube root of unity `ζ^e`, stored as `e ∈ {0, 1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolValue(u8);

impl SymbolValue {
    pub const TRIVIAL: SymbolValue = SymbolValue(0);

    pub fn from_exponent(e: i64) -> Self {
        SymbolValue(e.rem_euclid(3) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, o: SymbolValue) -> SymbolValue {
        SymbolValue((self.0 + o.0) % 3)
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "1"),
            1 => write!(f, "zeta3"),
            _ => write!(f, "zeta3^2"),
        }
    }
}

/// `p = π₁π₂` with both factors primary and `π₂ = conj(π₁)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSplit {
    pub p: u64,
    pub pi1: EisensteinInt,
    pub pi2: EisensteinInt,
    /// `π₁ = (3m + 1) + 3nζ`.
    pub m: i64,
    pub n: i64,
}

pub fn norm(x: &EisensteinInt) -> BigInt {
    x.norm()
}

/// The unique associate of `x` with `a ≡ 1, b ≡ 0 (mod 3)`.
pub fn primary_associate(x: &EisensteinInt) -> Result<EisensteinInt> {
    if (x.norm() % BigInt::from(3)).is_zero() {
        return Err(Error::NormDivisibleBy3);
    }
    EisensteinInt::units()
        .iter()
        .map(|u| u * x)
        .find(EisensteinInt::is_primary)
        .ok_or_else(|| Error::Internal("no primary associate".into()))
}

pub(crate) fn check_prime_1_mod_3(p: u64) -> Result<()> {
    if p % 3 != 1 || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

/// Splits `p ≡ 1 (mod 3)` as `π₁π₂` in Z[ζ₃].
///
/// A root `r` of `x² + x + 1` modulo `p` comes from Tonelli-Shanks on `-3`;
/// `gcd(p, ζ - r)` is then a prime of norm `p`. The labeling puts the
/// primary factor with positive `ζ`-coefficient in `π₁`.
pub fn split_prime(p: u64) -> Result<PrimeSplit> {
    check_prime_1_mod_3(p)?;
    let s = sqrt_mod(p - 3, p).ok_or_else(|| Error::Internal("-3 is not a square".into()))?;
    let inv2 = inv_mod(2, p).unwrap();
    let r = crate::arith::mul_mod((s + p - 1) % p, inv2, p);
    let g = EisensteinInt::new(p, 0).gcd(&EisensteinInt::new(-(r as i128), 1));
    if g.norm() != BigInt::from(p) {
        return Err(Error::Internal(format!("gcd of norm {} while splitting {p}", g.norm())));
    }
    let pi = primary_associate(&g)?;
    let other = pi.conj();
    let (pi1, pi2) = if pi.b.is_positive() { (pi, other) } else { (other, pi) };
    let m = ((&pi1.a - BigInt::one()) / BigInt::from(3)).to_i64().ok_or(Error::Overflow("split_prime"))?;
    let n = (&pi1.b / BigInt::from(3)).to_i64().ok_or(Error::Overflow("split_prime"))?;
    Ok(PrimeSplit { p, pi1, pi2, m, n })
}

/// What kind of prime of Z[ζ₃] a modulus is.
enum PrimeKind {
    /// Norm is a rational prime `q ≡ 1 (mod 3)`; residue field `Z/q`.
    Split(u64),
    /// Associate of a rational prime `q ≡ 2 (mod 3)`; residue field of size `q²`.
    Inert,
}

fn classify_modulus(pi: &EisensteinInt) -> Result<PrimeKind> {
    let n = pi.norm();
    if (&n % BigInt::from(3)).is_zero() {
        return Err(Error::NormDivisibleBy3);
    }
    let n64 = n.to_u64().ok_or(Error::Overflow("cubic_symbol"))?;
    if is_prime(n64) {
        return Ok(PrimeKind::Split(n64));
    }
    let q = crate::arith::isqrt_u128(n64 as u128) as u64;
    if q * q == n64 && is_prime(q) && q % 3 == 2 && pi.divides(&EisensteinInt::new(q, 0)) {
        return Ok(PrimeKind::Inert);
    }
    Err(Error::NotAPrimeModulus)
}

/// Cubic residue symbol `(α/π)₃` by Euler's criterion.
///
/// For split moduli the exponentiation runs in `Z/q` through `ζ ↦ r` with
/// `π | ζ - r`; inert moduli use [`cubic_symbol_direct`].
pub fn cubic_symbol(alpha: &EisensteinInt, pi: &EisensteinInt) -> Result<SymbolValue> {
    match classify_modulus(pi)? {
        PrimeKind::Inert => cubic_symbol_direct(alpha, pi),
        PrimeKind::Split(q) => {
            let a = crate::arith::rem_euclid_u64(pi.a.to_i128().unwrap(), q);
            let b = crate::arith::rem_euclid_u64(pi.b.to_i128().unwrap(), q);
            // a + b r ≡ 0  =>  r ≡ -a / b
            let r = crate::arith::mul_mod((q - a) % q, inv_mod(b, q).ok_or(Error::NotAPrimeModulus)?, q);
            let red = |x: &BigInt| x.mod_floor(&BigInt::from(q)).to_u64().unwrap();
            let v = (red(&alpha.a) + crate::arith::mul_mod(red(&alpha.b), r, q)) % q;
            if v == 0 {
                return Err(Error::DivisibleByModulus);
            }
            let x = pow_mod(v, (q - 1) / 3, q);
            let mut power = 1u64;
            for e in 0..3 {
                if power == x {
                    return Ok(SymbolValue(e));
                }
                power = crate::arith::mul_mod(power, r, q);
            }
            Err(Error::Internal("Euler power is not a cube root of unity".into()))
        }
    }
}

/// Cubic residue symbol computed by exponentiating in Z[ζ₃] and reducing
/// both coordinates modulo `π` after every step.
pub fn cubic_symbol_direct(alpha: &EisensteinInt, pi: &EisensteinInt) -> Result<SymbolValue> {
    classify_modulus(pi)?;
    let a = alpha.rem(pi);
    if a.is_zero() {
        return Err(Error::DivisibleByModulus);
    }
    let e: BigInt = (pi.norm() - BigInt::one()) / BigInt::from(3);
    let mut acc = EisensteinInt::one();
    for i in (0..e.bits()).rev() {
        acc = (&acc * &acc).rem(pi);
        if e.bit(i) {
            acc = (&acc * &a).rem(pi);
        }
    }
    let mut power = EisensteinInt::one();
    for k in 0..3u8 {
        if pi.divides(&(&acc - &power)) {
            return Ok(SymbolValue(k));
        }
        power = &power * &EisensteinInt::zeta();
    }
    Err(Error::Internal("Euler power is not a cube root of unity".into()))
}

/// `(c/p)₃ = 1`, i.e. `c^((p-1)/3) ≡ 1 (mod p)`.
pub fn rational_cubic_symbol_is_trivial(c: i64, p: u64) -> Result<bool> {
    check_prime_1_mod_3(p)?;
    let c = crate::arith::rem_euclid_u64(c as i128, p);
    if c == 0 {
        return Err(Error::DivisibleByModulus);
    }
    Ok(pow_mod(c, (p - 1) / 3, p) == 1)
}

/// `(ζ₃/p)₃ = ζ₃^{-(m+n)}` for `π₁ = (3m+1) + 3nζ₃`.
pub fn zeta3_symbol(split: &PrimeSplit) -> SymbolValue {
    SymbolValue::from_exponent(-(split.m + split.n))
}

/// Largest `v` with `λ^v | x`.
pub fn lambda_valuation(x: &EisensteinInt) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let three = BigInt::from(3);
    let mut x = x.clone();
    let mut v = 0;
    // λ | a + bζ  iff  3 | a + b;  x/λ = x(2 + ζ)/3
    while ((&x.a + &x.b) % &three).is_zero() {
        let y = &x * &EisensteinInt::new(2, 1);
        x = EisensteinInt { a: y.a / &three, b: y.b / &three };
        v += 1;
    }
    Ok(v)
}

/// `q* ∈ {0, 1}`: 1 exactly when both primary factors of `p` are `≡ 1 mod λ³`.
pub fn qstar(p: u64) -> Result<u8> {
    let split = split_prime(p)?;
    let one = EisensteinInt::one();
    let deep = |pi: &EisensteinInt| lambda_valuation(&(pi - &one)).map(|v| v >= 3);
    let q = u8::from(deep(&split.pi1)? && deep(&split.pi2)?);
    let expected = u8::from(p % 9 == 1);
    if q != expected {
        return Err(Error::InvariantViolated(format!(
            "lambda-adic q* = {q} disagrees with p mod 9 = {} for p = {p}",
            p % 9
        )));
    }
    Ok(q)
}

/// Order `3^(t-2+q*)` of the σ-ambiguous 3-class group.
pub fn ambiguous_order_formula(t: u32, qstar: u8) -> Result<u64> {
    if t < 1 || qstar > 1 {
        return Err(Error::InvalidArgument(format!("t = {t}, q* = {qstar}")));
    }
    let e = t as i64 - 2 + qstar as i64;
    if e < 0 {
        return Err(Error::InvalidArgument(format!(
            "negative exponent for t = {t}, q* = {qstar}"
        )));
    }
    Ok(3u64.pow(e as u32))
}

/// Number of primes of Q(ζ₃) ramified in Q(∛p, ζ₃)/Q(ζ₃).
pub fn ramified_count(p: u64) -> u32 {
    if p % 9 == 1 {
        2
    } else {
        3
    }
}
