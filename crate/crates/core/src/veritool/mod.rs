//! Verification harness: computes class groups (through the cache), compares
//! them with the predictor, and reproduces the published tables.

pub mod cache;
pub mod render;
pub mod tables;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::classgroup::{class_group, is_principal, structure_report, ClassGroupConfig, ClassGroupData, StructureReport};
use crate::eisenstein::{check_prime_1_mod_3, rational_cubic_symbol_is_trivial};
use crate::error::{Error, Result};
use crate::numberfield::{
    build_cubic_order, build_pure_cubic_order, build_pure_sextic_order, build_sextic_order, cubic_special_ideals,
    sextic_special_ideals, FieldLabel, NumberFieldOrder,
};
use crate::predictor::{predict, PredictedCk3, PredictionReport};
use cache::{Cache, CacheEntry, Lookup};
use tables::{PrincipalityRow, Table1Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FieldSelection {
    L,
    K,
    Both,
}

impl FieldSelection {
    fn cubic(self) -> bool {
        self != FieldSelection::K
    }
    fn sextic(self) -> bool {
        self != FieldSelection::L
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Cache,
}

/// Run metadata kept out of the structured reports so that those stay
/// byte-identical between runs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunMeta {
    pub elapsed: Duration,
    pub provenance: Vec<(FieldLabel, Provenance)>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Analyzer {
    pub config: ClassGroupConfig,
    pub cache: Option<Cache>,
}

fn is_incomplete(e: &Error) -> bool {
    matches!(e, Error::EffortExhausted(_) | Error::SmoothnessSearchExhausted(_))
}

impl Analyzer {
    pub fn new(config: ClassGroupConfig, cache: Option<Cache>) -> Self {
        Analyzer { config, cache }
    }

    /// Class group of `order`, from the cache when a valid entry exists.
    pub fn class_group(&self, order: &NumberFieldOrder, meta: &mut RunMeta) -> Result<ClassGroupData> {
        if let Some(cache) = &self.cache {
            match cache.load(order) {
                Lookup::Hit(entry) => {
                    meta.provenance.push((order.label, Provenance::Cache));
                    return Ok(entry.class_group);
                }
                Lookup::Miss => {}
                Lookup::Stale(v) => {
                    meta.warnings.push(format!("cache entry for {} has schema version {v}; recomputing", order.label))
                }
                Lookup::Corrupt(msg) => meta.warnings.push(format!("ignoring corrupt cache entry {msg}")),
            }
        }
        let cg = class_group(order, &self.config)?;
        meta.provenance.push((order.label, Provenance::Computed));
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.store(&CacheEntry::new(order, cg.clone())) {
                meta.warnings.push(format!("could not write cache entry: {e}"));
            }
        }
        Ok(cg)
    }

    pub fn analyze(&self, p: u64, fields: FieldSelection) -> Result<Analysis> {
        check_prime_1_mod_3(p)?;
        let start = Instant::now();
        let mut a = Analysis {
            p,
            residue9: p % 9,
            symbol3_trivial: rational_cubic_symbol_is_trivial(3, p)?,
            ..Analysis::default()
        };
        let mut cg_l = None;
        let mut cg_k = None;
        if fields.cubic() {
            let o = build_cubic_order(p)?;
            match self.class_group(&o, &mut a.meta) {
                Ok(cg) => {
                    let s = cubic_special_ideals(&o)?;
                    a.principal_i0 = s.i0.as_ref().map(|i| is_principal(&o, &cg, &i.ideal)).transpose()?;
                    a.principal_p0 = Some(is_principal(&o, &cg, &s.p0.ideal)?);
                    a.class_number_l = Some(cg.class_number);
                    a.invariants_l = Some(cg.invariants.clone());
                    a.cl3_l = Some(cg.three_part());
                    cg_l = Some(cg);
                }
                Err(e) if is_incomplete(&e) => a.incomplete = Some(format!("L: {e}")),
                Err(e) => return Err(e),
            }
        }
        if fields.sextic() {
            let o = build_sextic_order(p)?;
            match self.class_group(&o, &mut a.meta) {
                Ok(cg) => {
                    let s = sextic_special_ideals(&o)?;
                    a.principal_i = s.i.as_ref().map(|i| is_principal(&o, &cg, &i.ideal)).transpose()?;
                    a.principal_p = Some(is_principal(&o, &cg, &s.p.ideal)?);
                    a.principal_q = Some(is_principal(&o, &cg, &s.q.ideal)?);
                    a.class_number_k = Some(cg.class_number);
                    a.invariants_k = Some(cg.invariants.clone());
                    a.cl3_k = Some(cg.three_part());
                    a.rank3 = Some(cg.rank3());
                    a.s = Some(cg.v3_class_number());
                    cg_k = Some(cg);
                }
                Err(e) if is_incomplete(&e) => {
                    let msg = format!("k: {e}");
                    a.incomplete = Some(match a.incomplete.take() {
                        Some(prev) => format!("{prev}; {msg}"),
                        None => msg,
                    });
                }
                Err(e) => return Err(e),
            }
        }
        if let (Some(l), Some(k)) = (&cg_l, &cg_k) {
            a.structure = Some(structure_report(l, k)?);
        }
        a.meta.elapsed = start.elapsed();
        Ok(a)
    }

    /// Class group of `Q(∛d)` or `Q(∛d, ζ₃)` for any cubefree `d > 1`.
    pub fn analyze_pure(&self, d: u64, fields: FieldSelection) -> Result<Vec<PureAnalysis>> {
        let mut out = Vec::new();
        if fields.cubic() {
            let o = build_pure_cubic_order(d)?;
            out.push(PureAnalysis::of(&o, &class_group(&o, &self.config)?));
        }
        if fields.sextic() {
            let o = build_pure_sextic_order(d)?;
            out.push(PureAnalysis::of(&o, &class_group(&o, &self.config)?));
        }
        Ok(out)
    }

    pub fn verify(&self, p: u64) -> Result<VerificationReport> {
        let prediction = predict(p)?;
        let computed = self.analyze(p, FieldSelection::Both)?;
        Ok(VerificationReport::new(prediction, computed, self.config))
    }

    /// Verifies each prime on the current rayon pool; results come back in
    /// the order given.
    pub fn verify_all(&self, primes: &[u64]) -> Vec<Result<VerificationReport>> {
        primes.par_iter().map(|&p| self.verify(p)).collect()
    }

    pub fn analyze_all(&self, primes: &[u64], fields: FieldSelection) -> Vec<Result<Analysis>> {
        primes.par_iter().map(|&p| self.analyze(p, fields)).collect()
    }
}

/// Everything computed for one prime. Fields of a field that was not
/// requested, or whose computation ran out of effort, are `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Analysis {
    pub p: u64,
    pub residue9: u64,
    pub symbol3_trivial: bool,
    pub class_number_l: Option<i128>,
    pub invariants_l: Option<Vec<i128>>,
    pub cl3_l: Option<Vec<i128>>,
    pub principal_i0: Option<bool>,
    pub principal_p0: Option<bool>,
    pub class_number_k: Option<i128>,
    pub invariants_k: Option<Vec<i128>>,
    pub cl3_k: Option<Vec<i128>>,
    pub rank3: Option<usize>,
    pub s: Option<u32>,
    pub principal_i: Option<bool>,
    pub principal_p: Option<bool>,
    pub principal_q: Option<bool>,
    pub structure: Option<StructureReport>,
    pub incomplete: Option<String>,
    #[serde(skip)]
    pub meta: RunMeta,
}

impl Analysis {
    pub fn u(&self) -> Option<u32> {
        self.structure.as_ref().map(|s| s.u)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PureAnalysis {
    pub field: String,
    pub d: u64,
    pub class_number: i128,
    pub invariants: Vec<i128>,
}

impl PureAnalysis {
    fn of(o: &NumberFieldOrder, cg: &ClassGroupData) -> Self {
        PureAnalysis {
            field: o.label.to_string(),
            d: o.label.d,
            class_number: cg.class_number,
            invariants: cg.invariants.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "MATCH")]
    Match,
    #[serde(rename = "MISMATCH")]
    Mismatch,
    #[serde(rename = "NOT-PREDICTED")]
    NotPredicted,
    /// The computation needed for this claim did not finish.
    #[serde(rename = "INCOMPLETE")]
    Incomplete,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
            Verdict::NotPredicted => "NOT-PREDICTED",
            Verdict::Incomplete => "INCOMPLETE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub claim: &'static str,
    pub predicted: Option<String>,
    pub computed: Option<String>,
    pub verdict: Verdict,
}

impl Claim {
    fn new(claim: &'static str, predicted: Option<String>, computed: Option<String>) -> Self {
        let verdict = match (&predicted, &computed) {
            (None, _) => Verdict::NotPredicted,
            (Some(_), None) => Verdict::Incomplete,
            (Some(a), Some(b)) if a == b => Verdict::Match,
            _ => Verdict::Mismatch,
        };
        Claim { claim, predicted, computed, verdict }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Match,
    Incomplete,
    Mismatch,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Match => 0,
            Outcome::Mismatch => 1,
            Outcome::Incomplete => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub p: u64,
    pub prediction: PredictionReport,
    pub computed: Analysis,
    pub claims: Vec<Claim>,
    pub outcome: Outcome,
    pub config: ClassGroupConfig,
}

pub(crate) fn show_type(x: &[i128]) -> String {
    let parts: Vec<String> = x.iter().map(i128::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn show_principal(b: bool) -> String {
    if b { "principal" } else { "not principal" }.to_string()
}

impl VerificationReport {
    pub fn new(prediction: PredictionReport, computed: Analysis, config: ClassGroupConfig) -> Self {
        let c = &computed;
        let pr = &prediction;
        let pattern = pr.predicted_principality.pattern();
        let principal = |name, pred: Option<bool>, got: Option<bool>| {
            Claim::new(name, pred.map(show_principal), got.map(show_principal))
        };
        let claims = vec![
            Claim::new(
                "ambiguous_order",
                Some(pr.ambiguous_order.to_string()),
                c.structure.as_ref().map(|s| s.ambiguous_order.to_string()),
            ),
            Claim::new("cl3_L", pr.predicted_cl3_exact3.then(|| show_type(&[3])), c.cl3_l.as_deref().map(show_type)),
            Claim::new("cl3_k", pr.predicted_ck3.invariants().map(|v| show_type(&v)), c.cl3_k.as_deref().map(show_type)),
            Claim::new(
                "rank3",
                match pr.predicted_ck3 {
                    PredictedCk3::Cyclic3 => Some("1".into()),
                    PredictedCk3::Elementary33 => Some("2".into()),
                    PredictedCk3::Undetermined => None,
                },
                c.rank3.map(|r| r.to_string()),
            ),
            Claim::new("u", pr.predicted_u.value().map(|u| u.to_string()), c.u().map(|u| u.to_string())),
            principal("principal_I0", pattern.map(|x| x.i0), c.principal_i0),
            principal("principal_I", pattern.map(|x| x.i), c.principal_i),
            principal("principal_P0", pattern.map(|x| x.p0), c.principal_p0),
            principal("principal_P", pattern.map(|x| x.p), c.principal_p),
            principal("principal_Q", pattern.map(|x| x.q), c.principal_q),
        ];
        let outcome = if claims.iter().any(|c| c.verdict == Verdict::Mismatch) {
            Outcome::Mismatch
        } else if computed.incomplete.is_some() || claims.iter().any(|c| c.verdict == Verdict::Incomplete) {
            Outcome::Incomplete
        } else {
            Outcome::Match
        };
        VerificationReport { p: prediction.p, prediction, computed, claims, outcome, config }
    }
}

/// Primes `p ≡ 1 (mod 3)` in `[a, b]` whose residue mod 9 is in `residues`.
pub fn primes_in_range(a: u64, b: u64, residues: &[u64]) -> Vec<u64> {
    crate::arith::primes_up_to(b)
        .into_iter()
        .filter(|&p| p >= a && p % 3 == 1 && residues.contains(&(p % 9)))
        .collect()
}

/// One reproduced table: header, rendered rows, and the overall outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub which: u8,
    pub header: Vec<&'static str>,
    pub rows: Vec<TableRow>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub cells: Vec<String>,
    /// Columns whose computed value differs from the published one.
    pub mismatches: Vec<&'static str>,
    pub incomplete: Option<String>,
}

fn cell(column: &'static str, computed: Option<String>, published: String, mismatches: &mut Vec<&'static str>) -> String {
    match computed {
        None => "?".into(),
        Some(c) if c == published => c,
        Some(c) => {
            mismatches.push(column);
            format!("{c} MISMATCH(published {published})")
        }
    }
}

fn show_symbol(trivial: bool) -> String {
    if trivial { "1" } else { "≠1" }.to_string()
}

fn show_class(principal: bool) -> String {
    if principal { "[0]" } else { "≠[0]" }.to_string()
}

fn failed_row(p: u64, e: Error) -> TableRow {
    // a broken invariant is a wrong answer, anything else an unfinished one
    let (mismatches, incomplete) = match e {
        Error::InvariantViolated(_) => (vec!["invariant"], None),
        _ => (vec![], Some(e.to_string())),
    };
    TableRow { p, cells: vec![p.to_string(), format!("error: {e}")], mismatches, incomplete }
}

fn table1_row(row: &Table1Row, a: Result<Analysis>) -> TableRow {
    let mut m = Vec::new();
    let a = match a {
        Ok(a) => a,
        Err(e) => return failed_row(row.p, e),
    };
    let h = tables::TABLE1_HEADER;
    let cells = vec![
        row.p.to_string(),
        cell(h[1], Some(a.residue9.to_string()), row.residue9.to_string(), &mut m),
        cell(h[2], a.u().map(|u| u.to_string()), row.u.to_string(), &mut m),
        match row.symbol3_trivial {
            Some(t) => cell(h[3], Some(show_symbol(a.symbol3_trivial)), show_symbol(t), &mut m),
            None => "-".into(),
        },
        cell(h[4], a.cl3_l.as_deref().map(show_type), show_type(row.cl3_l), &mut m),
        cell(h[5], a.rank3.map(|r| r.to_string()), row.rank3.to_string(), &mut m),
    ];
    TableRow { p: row.p, cells, mismatches: m, incomplete: a.incomplete }
}

fn principality_row(row: &PrincipalityRow, a: Result<Analysis>) -> TableRow {
    let mut m = Vec::new();
    let a = match a {
        Ok(a) => a,
        Err(e) => return failed_row(row.p, e),
    };
    let h = tables::PRINCIPALITY_HEADER;
    let cells = vec![
        row.p.to_string(),
        cell(h[1], a.u().map(|u| u.to_string()), row.u.to_string(), &mut m),
        cell(h[2], Some(show_symbol(a.symbol3_trivial)), show_symbol(row.symbol3_trivial), &mut m),
        cell(h[3], a.cl3_l.as_deref().map(show_type), show_type(row.cl3_l), &mut m),
        cell(h[4], a.cl3_k.as_deref().map(show_type), show_type(row.cl3_k), &mut m),
        cell(h[5], a.principal_i0.map(show_class), show_class(row.i0), &mut m),
        cell(h[6], a.principal_i.map(show_class), show_class(row.i), &mut m),
        cell(h[7], a.principal_p0.map(show_class), show_class(row.p0), &mut m),
        cell(h[8], a.principal_p.map(show_class), show_class(row.pp), &mut m),
    ];
    TableRow { p: row.p, cells, mismatches: m, incomplete: a.incomplete }
}

impl Analyzer {
    /// Recomputes every row of table `which` (1, 2 or 3).
    pub fn table(&self, which: u8) -> Result<TableReport> {
        let (header, rows): (Vec<&'static str>, Vec<TableRow>) = match which {
            1 => {
                let primes: Vec<u64> = tables::TABLE1.iter().map(|r| r.p).collect();
                let results = self.analyze_all(&primes, FieldSelection::Both);
                let rows = tables::TABLE1.iter().zip(results).map(|(r, a)| table1_row(r, a)).collect();
                (tables::TABLE1_HEADER.to_vec(), rows)
            }
            2 | 3 => {
                let published = if which == 2 { tables::table2() } else { tables::table3() };
                let primes: Vec<u64> = published.iter().map(|r| r.p).collect();
                let results = self.analyze_all(&primes, FieldSelection::Both);
                let rows = published.iter().zip(results).map(|(r, a)| principality_row(r, a)).collect();
                (tables::PRINCIPALITY_HEADER.to_vec(), rows)
            }
            _ => return Err(Error::InvalidArgument(format!("no table {which}; expected 1, 2 or 3"))),
        };
        let outcome = if rows.iter().any(|r| !r.mismatches.is_empty()) {
            Outcome::Mismatch
        } else if rows.iter().any(|r| r.incomplete.is_some()) {
            Outcome::Incomplete
        } else {
            Outcome::Match
        };
        Ok(TableReport { which, header, rows, outcome })
    }
}
