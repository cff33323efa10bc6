use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::order::{row_times, Automorphism, FieldLabel, NumberFieldOrder};
use crate::error::{Error, Result};
use crate::linalg::{hnf_contains, hnf_mod, Mat};

/// Largest modulus accepted by the modular Hermite reduction.
const MODULUS_LIMIT: i128 = 1 << 62;

/// Integral ideal in canonical upper-triangular Hermite form over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdealHNF {
    pub field: FieldLabel,
    pub basis: Mat,
    pub norm: i128,
}

impl PartialOrd for IdealHNF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IdealHNF {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.norm, &self.basis, self.field).cmp(&(other.norm, &other.basis, other.field))
    }
}

impl IdealHNF {
    pub fn is_unit(&self) -> bool {
        self.norm == 1
    }
}

impl NumberFieldOrder {
    fn ideal_from_hnf(&self, basis: Mat) -> IdealHNF {
        let norm = (0..self.degree).map(|i| basis[i][i]).product();
        IdealHNF { field: self.label, basis, norm }
    }

    pub fn unit_ideal(&self) -> IdealHNF {
        self.ideal_from_hnf(crate::linalg::identity(self.degree))
    }

    /// Ideal generated by `gens`; `modulus` must be a positive integer in the ideal.
    pub fn ideal_from_generators(&self, gens: &[Vec<i128>], modulus: i128) -> Result<IdealHNF> {
        let modulus = modulus.abs();
        if modulus == 0 {
            return Err(Error::InvalidArgument("ideal modulus must be nonzero".into()));
        }
        if modulus >= MODULUS_LIMIT {
            return Err(Error::Overflow("ideal modulus"));
        }
        let mut rows = Vec::with_capacity(gens.len() * self.degree);
        for g in gens {
            let m = self.mul_matrix(&g.iter().map(|v| v.rem_euclid(modulus)).collect::<Vec<_>>());
            rows.extend(m);
        }
        Ok(self.ideal_from_hnf(hnf_mod(&rows, self.degree, modulus)))
    }

    pub fn principal_ideal(&self, x: &[i128]) -> Result<IdealHNF> {
        let n = self.norm(x).abs();
        if n.bits() == 0 {
            return Err(Error::ZeroElement);
        }
        let n = n.to_i128().ok_or(Error::Overflow("principal ideal norm"))?;
        self.ideal_from_generators(&[x.to_vec()], n)
    }

    fn check_same(&self, a: &IdealHNF) -> Result<()> {
        if a.field != self.label {
            return Err(Error::MixedOrders);
        }
        Ok(())
    }

    pub fn ideal_mul(&self, a: &IdealHNF, b: &IdealHNF) -> Result<IdealHNF> {
        self.check_same(a)?;
        self.check_same(b)?;
        if a.is_unit() {
            return Ok(b.clone());
        }
        if b.is_unit() {
            return Ok(a.clone());
        }
        let modulus = a.norm.checked_mul(b.norm).ok_or(Error::Overflow("ideal product"))?;
        if modulus >= MODULUS_LIMIT {
            return Err(Error::Overflow("ideal product"));
        }
        let mut rows = Vec::with_capacity(self.degree * self.degree);
        for x in &a.basis {
            for y in &b.basis {
                let v = self.mul(x, y);
                rows.push(v.into_iter().map(|c| c.rem_euclid(modulus)).collect());
            }
        }
        Ok(self.ideal_from_hnf(hnf_mod(&rows, self.degree, modulus)))
    }

    pub fn ideal_pow(&self, a: &IdealHNF, k: u32) -> Result<IdealHNF> {
        let mut acc = self.unit_ideal();
        for _ in 0..k {
            acc = self.ideal_mul(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn ideal_norm(&self, a: &IdealHNF) -> i128 {
        a.norm
    }

    pub fn apply_galois(&self, g: Automorphism, a: &IdealHNF) -> Result<IdealHNF> {
        self.check_same(a)?;
        let gal = self
            .galois()
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no Galois action", self.label)))?;
        let m = match g {
            Automorphism::Sigma => &gal.sigma,
            Automorphism::Tau => &gal.tau,
        };
        let rows: Vec<Vec<i128>> = a.basis.iter().map(|r| row_times(r, m)).collect();
        Ok(self.ideal_from_hnf(hnf_mod(&rows, self.degree, a.norm)))
    }

    pub fn ideal_contains(&self, a: &IdealHNF, x: &[i128]) -> bool {
        let reduced: Vec<i128> = x.iter().map(|v| v.rem_euclid(a.norm)).collect();
        hnf_contains(&a.basis, &reduced)
    }

    /// Whether `b ⊆ a`.
    pub fn ideal_contains_ideal(&self, a: &IdealHNF, b: &IdealHNF) -> bool {
        b.basis.iter().all(|row| self.ideal_contains(a, row))
    }
}
