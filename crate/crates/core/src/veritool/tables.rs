//! Published rows used as golden data.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub p: u64,
    pub residue9: u64,
    pub u: u32,
    /// `None` where the published cell is blank (`p ≡ 1 mod 9`).
    pub symbol3_trivial: Option<bool>,
    pub cl3_l: &'static [i128],
    pub rank3: usize,
}

/// A row of the two principality tables; `true` = principal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalityRow {
    pub p: u64,
    pub u: u32,
    pub symbol3_trivial: bool,
    pub cl3_l: &'static [i128],
    pub cl3_k: &'static [i128],
    pub i0: bool,
    pub i: bool,
    pub p0: bool,
    pub pp: bool,
}

pub const TABLE1: [Table1Row; 6] = [
    Table1Row { p: 199, residue9: 1, u: 1, symbol3_trivial: None, cl3_l: &[9], rank3: 2 },
    Table1Row { p: 211, residue9: 4, u: 1, symbol3_trivial: Some(false), cl3_l: &[3], rank3: 1 },
    Table1Row { p: 223, residue9: 7, u: 1, symbol3_trivial: Some(false), cl3_l: &[3], rank3: 1 },
    Table1Row { p: 367, residue9: 7, u: 3, symbol3_trivial: Some(true), cl3_l: &[3], rank3: 2 },
    Table1Row { p: 499, residue9: 4, u: 3, symbol3_trivial: Some(true), cl3_l: &[3], rank3: 2 },
    Table1Row { p: 541, residue9: 1, u: 3, symbol3_trivial: None, cl3_l: &[9], rank3: 2 },
];

pub const TABLE2_PRIMES: [u64; 17] = [61, 67, 103, 151, 193, 367, 439, 499, 547, 619, 643, 661, 727, 787, 853, 967, 997];
/// Rows with a sextic field small enough for the default effort.
pub const TABLE2_CORE: [u64; 8] = [61, 67, 103, 151, 193, 367, 439, 499];
pub const TABLE3_PRIMES: [u64; 16] = [7, 13, 31, 43, 79, 97, 139, 157, 211, 223, 229, 241, 277, 283, 313, 331];

const TABLE2_ROW: PrincipalityRow = PrincipalityRow {
    p: 0,
    u: 3,
    symbol3_trivial: true,
    cl3_l: &[3],
    cl3_k: &[3, 3],
    i0: true,
    i: true,
    p0: true,
    pp: false,
};

const TABLE3_ROW: PrincipalityRow = PrincipalityRow {
    p: 0,
    u: 1,
    symbol3_trivial: false,
    cl3_l: &[3],
    cl3_k: &[3],
    i0: false,
    i: false,
    p0: true,
    pp: true,
};

pub fn table2() -> Vec<PrincipalityRow> {
    TABLE2_PRIMES.iter().map(|&p| PrincipalityRow { p, ..TABLE2_ROW }).collect()
}

pub fn table3() -> Vec<PrincipalityRow> {
    TABLE3_PRIMES.iter().map(|&p| PrincipalityRow { p, ..TABLE3_ROW }).collect()
}

pub const TABLE1_HEADER: [&str; 6] = ["p", "p mod 9", "u", "(3/p)_3", "C_L,3", "rank C_k,3"];
pub const PRINCIPALITY_HEADER: [&str; 9] = ["p", "u", "(3/p)_3", "C_L,3", "C_k,3", "I_0", "I", "P_0", "P"];
