use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::factor::PrimeIdeal;
use super::order::{Automorphism, FieldKind, NumberFieldOrder};
use crate::eisenstein::split_prime;
use crate::error::{Error, Result};

/// Distinguished primes of `L`: `3O_L = I₀³` (absent when 3 does not ramify
/// totally) and `pO_L = P₀³`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubicIdeals {
    pub i0: Option<PrimeIdeal>,
    pub p0: PrimeIdeal,
    pub above_three: Vec<PrimeIdeal>,
}

/// Distinguished primes of `k`: `3O_k = I⁶` (when it holds), `pO_k = P³Q³`
/// with `π₁ ∈ P` and `Q = τ(P)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SexticIdeals {
    pub i: Option<PrimeIdeal>,
    pub p: PrimeIdeal,
    pub q: PrimeIdeal,
    pub above_three: Vec<PrimeIdeal>,
}

fn require(order: &NumberFieldOrder, kind: FieldKind) -> Result<u64> {
    if order.label.kind != kind {
        return Err(Error::InvalidArgument(format!("{} is the wrong field", order.label)));
    }
    crate::eisenstein::check_prime_1_mod_3(order.label.d)?;
    Ok(order.label.d)
}

pub fn cubic_special_ideals(order: &NumberFieldOrder) -> Result<CubicIdeals> {
    let p = require(order, FieldKind::Cubic)?;
    let above_three = order.factor_rational_prime(3)?;
    let i0 = match above_three.as_slice() {
        [only] if only.e == 3 => Some(only.clone()),
        _ => None,
    };
    let mut above_p = order.factor_rational_prime(p)?;
    if above_p.len() != 1 || above_p[0].e != 3 {
        return Err(Error::InvariantViolated(format!("{p} is not totally ramified in {}", order.label)));
    }
    Ok(CubicIdeals { i0, p0: above_p.remove(0), above_three })
}

pub fn sextic_special_ideals(order: &NumberFieldOrder) -> Result<SexticIdeals> {
    let p = require(order, FieldKind::Sextic)?;
    let above_three = order.factor_rational_prime(3)?;
    let i = match above_three.as_slice() {
        [only] if only.e == 6 => Some(only.clone()),
        _ => None,
    };
    let above_p = order.factor_rational_prime(p)?;
    if above_p.len() != 2 || above_p.iter().any(|q| q.e != 3 || q.f != 1) {
        return Err(Error::InvariantViolated(format!("{p} does not factor as P³Q³ in {}", order.label)));
    }
    let split = split_prime(p)?;
    let (a, b) = (
        split.pi1.a.to_i128().ok_or(Error::Overflow("split"))?,
        split.pi1.b.to_i128().ok_or(Error::Overflow("split"))?,
    );
    let pi1 = order
        .from_product(&[a, 0, 0, b, 0, 0])
        .ok_or_else(|| Error::Internal("π₁ not in the order".into()))?;
    let (pp, qq) = if order.ideal_contains(&above_p[0].ideal, &pi1) {
        (above_p[0].clone(), above_p[1].clone())
    } else if order.ideal_contains(&above_p[1].ideal, &pi1) {
        (above_p[1].clone(), above_p[0].clone())
    } else {
        return Err(Error::Internal("π₁ lies in neither prime above p".into()));
    };
    if order.apply_galois(Automorphism::Tau, &pp.ideal)? != qq.ideal {
        return Err(Error::InvariantViolated("τ(P) ≠ Q".into()));
    }
    Ok(SexticIdeals { i, p: pp, q: qq, above_three })
}
