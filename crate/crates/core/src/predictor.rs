//! What the theory predicts for `L = Q(∛p)` and `k = Q(∛p, ζ₃)` from `p`
//! alone: residue symbols, the ambiguous class number, and — for
//! `p ≡ 4, 7 (mod 9)` — the full 3-class structure and the principality of
//! the primes above 3 and `p`.
//!
//! The pairing used throughout is: `(3/p)₃ = 1 ⇔ u = 3 ⇔ C_{k,3} ≅ (Z/3)²`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eisenstein::{
    ambiguous_order_formula, check_prime_1_mod_3, qstar, ramified_count, rational_cubic_symbol_is_trivial,
    split_prime, zeta3_symbol, SymbolValue,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictedCk3 {
    Cyclic3,
    Elementary33,
    /// Rank 1 or 2; not decided by `(3/p)₃` when `p ≡ 1 (mod 9)`.
    Undetermined,
}

impl PredictedCk3 {
    /// Invariants, largest first; `None` when undetermined.
    pub fn invariants(self) -> Option<Vec<i128>> {
        match self {
            PredictedCk3::Cyclic3 => Some(vec![3]),
            PredictedCk3::Elementary33 => Some(vec![3, 3]),
            PredictedCk3::Undetermined => None,
        }
    }
}

impl fmt::Display for PredictedCk3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictedCk3::Cyclic3 => write!(f, "[3]"),
            PredictedCk3::Elementary33 => write!(f, "[3,3]"),
            PredictedCk3::Undetermined => write!(f, "rank 1 or 2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictedU {
    One,
    Three,
    Undetermined,
}

impl PredictedU {
    pub fn value(self) -> Option<u32> {
        match self {
            PredictedU::One => Some(1),
            PredictedU::Three => Some(3),
            PredictedU::Undetermined => None,
        }
    }
}

/// Predicted principality of `I₀, I, P₀, P, Q` (`true` = principal).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrincipalityPattern {
    pub i0: bool,
    pub i: bool,
    pub p0: bool,
    pub p: bool,
    pub q: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Principality {
    Pattern(PrincipalityPattern),
    /// `p ≡ 1 (mod 9)`: 3 is not totally ramified and nothing is claimed.
    NotApplicable,
}

impl Principality {
    pub fn pattern(self) -> Option<PrincipalityPattern> {
        match self {
            Principality::Pattern(x) => Some(x),
            Principality::NotApplicable => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub p: u64,
    pub residue9: u64,
    /// `(3/p)₃ = 1`
    pub symbol3_trivial: bool,
    /// `(ζ₃/p)₃`
    pub zeta3_symbol: SymbolValue,
    /// Primes of `Q(ζ₃)` ramified in `k`.
    pub t: u32,
    pub qstar: u8,
    /// `|C_{k,3}^{(σ)}|`
    pub ambiguous_order: u64,
    pub predicted_ck3: PredictedCk3,
    /// `3 ∥ h_L`
    pub predicted_cl3_exact3: bool,
    pub predicted_u: PredictedU,
    pub predicted_principality: Principality,
}

pub fn predict(p: u64) -> Result<PredictionReport> {
    check_prime_1_mod_3(p)?;
    let residue9 = p % 9;
    let symbol3_trivial = rational_cubic_symbol_is_trivial(3, p)?;
    let zeta = zeta3_symbol(&split_prime(p)?);
    if zeta.is_trivial() && residue9 != 1 {
        return Err(Error::InvariantViolated(format!("(ζ₃/{p})₃ = 1 but {p} ≢ 1 (mod 9)")));
    }
    let t = ramified_count(p);
    let qs = qstar(p)?;
    let ambiguous_order = ambiguous_order_formula(t, qs)?;
    if ambiguous_order != 3 {
        return Err(Error::InvariantViolated(format!("ambiguous class number {ambiguous_order} ≠ 3 for p = {p}")));
    }
    let (predicted_ck3, predicted_u, predicted_cl3_exact3) = match (residue9, symbol3_trivial) {
        (1, _) => (PredictedCk3::Undetermined, PredictedU::Undetermined, false),
        (_, true) => (PredictedCk3::Elementary33, PredictedU::Three, true),
        (_, false) => (PredictedCk3::Cyclic3, PredictedU::One, true),
    };
    Ok(PredictionReport {
        p,
        residue9,
        symbol3_trivial,
        zeta3_symbol: zeta,
        t,
        qstar: qs,
        ambiguous_order,
        predicted_ck3,
        predicted_cl3_exact3,
        predicted_u,
        predicted_principality: predict_principality(p)?,
    })
}

/// `P₀` is always principal; `I₀` and `I` are principal exactly when
/// `(3/p)₃ = 1`, and then `P`, `Q` are not.
pub fn predict_principality(p: u64) -> Result<Principality> {
    check_prime_1_mod_3(p)?;
    if p % 9 == 1 {
        return Ok(Principality::NotApplicable);
    }
    let trivial = rational_cubic_symbol_is_trivial(3, p)?;
    Ok(Principality::Pattern(PrincipalityPattern { i0: trivial, i: trivial, p0: true, p: !trivial, q: !trivial }))
}
