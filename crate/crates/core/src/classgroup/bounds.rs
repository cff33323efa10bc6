use std::f64::consts::PI;

use crate::arith::primes_up_to;
use crate::error::Result;
use crate::numberfield::{FieldKind, NumberFieldOrder};

/// Primes below this bound enter the truncated Euler product.
pub const EULER_PRODUCT_LIMIT: u64 = 10_000;

/// `⌈(4/π)^s · n!/nⁿ · √|disc|⌉` for degree `n` with `s` complex places.
pub fn minkowski_bound_for(degree: u32, complex_places: u32, discriminant: i128) -> u64 {
    let n = degree as f64;
    let fact: f64 = (1..=degree).map(f64::from).product();
    let b = (4.0 / PI).powi(complex_places as i32) * fact / n.powi(degree as i32)
        * (discriminant.unsigned_abs() as f64).sqrt();
    b.ceil().max(1.0) as u64
}

pub fn minkowski_bound(order: &NumberFieldOrder) -> u64 {
    minkowski_bound_for(order.degree as u32, order.signature.1 as u32, order.discriminant)
}

pub fn roots_of_unity(order: &NumberFieldOrder) -> u32 {
    match order.label.kind {
        FieldKind::Cubic => 2,
        FieldKind::Sextic => 6,
    }
}

/// Truncated Euler product for `h·R`:
/// `Res ζ_K · w · √|d| / (2^r₁ (2π)^r₂)`.
pub fn analytic_hr(order: &NumberFieldOrder) -> Result<f64> {
    let mut log_res = 0.0f64;
    for q in primes_up_to(EULER_PRODUCT_LIMIT - 1) {
        let degs = order.residue_degrees(q)?;
        let qf = q as f64;
        log_res += (1.0 - 1.0 / qf).ln();
        for f in degs {
            log_res -= (1.0 - qf.powi(-(f as i32))).ln();
        }
    }
    let (r1, r2) = order.signature;
    let w = roots_of_unity(order) as f64;
    let d = (order.discriminant.unsigned_abs() as f64).sqrt();
    Ok(log_res.exp() * w * d / (2f64.powi(r1 as i32) * (2.0 * PI).powi(r2 as i32)))
}
