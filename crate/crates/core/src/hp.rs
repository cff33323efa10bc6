//! Fixed-point reals with a few hundred bits, enough to keep unit logarithms
//! exact through long integer combinations of relation rows.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const PREC: u32 = 320;

/// The real number `raw / 2^PREC`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fixed(pub BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Fixed(n.into() << PREC)
    }

    pub fn from_f64(x: f64) -> Self {
        // exact for the binary value of x
        let scaled = x * 2f64.powi(60);
        Fixed(BigInt::from(scaled as i128) << (PREC - 60))
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.0.bits().saturating_sub(100) as u32;
        let top = (&self.0 >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - PREC as i32)
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Fixed {
        Fixed(-&self.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed(round_shift(&self.0 * &o.0, PREC))
    }

    pub fn mul_int(&self, k: &BigInt) -> Fixed {
        Fixed(&self.0 * k)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        assert!(!o.0.is_zero(), "fixed-point division by zero");
        Fixed(div_round(&(&self.0 << PREC), &o.0))
    }

    pub fn div_int(&self, k: i128) -> Fixed {
        Fixed(div_round(&self.0, &BigInt::from(k)))
    }

    pub fn abs(&self) -> Fixed {
        Fixed(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `|self| < 2^-bits`.
    pub fn is_negligible(&self, bits: u32) -> bool {
        self.0.bits() + u64::from(bits) <= u64::from(PREC)
    }

    /// Real cube root of a positive integer.
    pub fn cbrt_int(n: u64) -> Fixed {
        Fixed((BigInt::from(n) << (3 * PREC)).cbrt())
    }

    pub fn sqrt_int(n: u64) -> Fixed {
        Fixed((BigInt::from(n) << (2 * PREC)).sqrt())
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Fixed {
        assert!(self.0.is_positive(), "logarithm of a non-positive value");
        let b = self.0.bits() as i64;
        // m = self / 2^(b-1-PREC) lies in [1, 2)
        let m = if b - 1 >= PREC as i64 {
            &self.0 >> (b - 1 - PREC as i64) as u32
        } else {
            &self.0 << (PREC as i64 - (b - 1)) as u32
        };
        let m = Fixed(m);
        let one = Fixed::from_int(1);
        let t = m.sub(&one).div(&m.add(&one));
        let t2 = t.mul(&t);
        let mut term = t.clone();
        let mut sum = t.clone();
        let mut k = 1i128;
        loop {
            term = term.mul(&t2);
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term.div_int(2 * k + 1));
            k += 1;
        }
        let lnm = Fixed(sum.0 << 1u32);
        lnm.add(&ln2().mul_int(&BigInt::from(b - 1 - PREC as i64)))
    }
}

fn round_shift(x: BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x;
    }
    let half = BigInt::one() << (s - 1);
    (x + half) >> s
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a2, mut b2) = (a << 1u32, b.clone());
    if b2.is_negative() {
        a2 = -a2;
        b2 = -b2;
    }
    // floor((2a + b) / 2b)
    let num = a2 + &b2;
    let den = b2 << 1u32;
    num_integer::Integer::div_floor(&num, &den)
}

pub fn ln2() -> &'static Fixed {
    static LN2: OnceLock<Fixed> = OnceLock::new();
    LN2.get_or_init(|| {
        // ln 2 = 2 atanh(1/3)
        let t = Fixed::from_int(1).div_int(3);
        let t2 = t.mul(&t);
        let mut term = t.clone();
        let mut sum = t.clone();
        let mut k = 1i128;
        loop {
            term = term.mul(&t2);
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term.div_int(2 * k + 1));
            k += 1;
        }
        Fixed(sum.0 << 1u32)
    })
}

/// Complex fixed-point value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl CFixed {
    pub fn zero() -> Self {
        CFixed { re: Fixed::zero(), im: Fixed::zero() }
    }

    pub fn add(&self, o: &CFixed) -> CFixed {
        CFixed { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn mul(&self, o: &CFixed) -> CFixed {
        CFixed {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> CFixed {
        CFixed { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn div_int(&self, k: i128) -> CFixed {
        CFixed { re: self.re.div_int(k), im: self.im.div_int(k) }
    }

    pub fn abs2(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}
