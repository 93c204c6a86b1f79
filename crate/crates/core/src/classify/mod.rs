//! Multiplicity-3 and multiplicity-4 classification tables as data, with
//! matching, bounded enumeration and F-rationality threshold sweeps.

pub mod expr;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divisor::{is_rational_singularity, Fraction, NormalizedDivisor};
use crate::error::{Error, Result};
use crate::frational::{is_f_rational, BnRecord};
use crate::hj::{hj_expand, t_signature};
use crate::resolution::multiplicity;
use expr::Expr;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    E3,
    E4,
}

impl Table {
    pub fn multiplicity(self) -> u64 {
        match self {
            Table::E3 => 3,
            Table::E4 => 4,
        }
    }

    pub fn for_multiplicity(e: u64) -> Result<Table> {
        match e {
            3 => Ok(Table::E3),
            4 => Ok(Table::E4),
            _ => Err(Error::Domain(format!(
                "no table for multiplicity {e}; expected 3 or 4"
            ))),
        }
    }

    pub fn families(self) -> &'static [Family] {
        static E3: OnceLock<Vec<Family>> = OnceLock::new();
        static E4: OnceLock<Vec<Family>> = OnceLock::new();
        let (cell, text) = match self {
            Table::E3 => (&E3, include_str!("../../data/e3.txt")),
            Table::E4 => (&E4, include_str!("../../data/e4.txt")),
        };
        cell.get_or_init(|| parse_table(text, self).expect("bundled table parses"))
    }

    pub fn family(self, index: usize) -> Option<&'static Family> {
        self.families().iter().find(|f| f.index == index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Zero,
    Ratio { num: Expr, den: Expr },
}

/// One printed entry of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub table: Table,
    /// 1-based position in the table.
    pub index: usize,
    pub s: i64,
    pub slots: Vec<Slot>,
    /// Parameter names in order of first appearance.
    pub params: Vec<char>,
    /// Lower bound per parameter (0 unless constrained).
    pub minimums: Vec<u64>,
    /// The entry as written in the data file.
    pub source: String,
}

impl Family {
    pub fn id(&self) -> String {
        format!("e{}-{}", self.table.multiplicity(), self.index)
    }

    /// Unreduced `(num, den)` per slot; `None` for a zero slot.
    fn printed(&self, params: &[u64]) -> Option<Vec<Option<(i128, i128)>>> {
        let env = |v: char| {
            let k = self
                .params
                .iter()
                .position(|&p| p == v)
                .expect("known parameter");
            params[k] as i64
        };
        self.slots
            .iter()
            .map(|slot| match slot {
                Slot::Zero => Some(None),
                Slot::Ratio { num, den } => Some(Some((num.eval(&env)?, den.eval(&env)?))),
            })
            .collect()
    }

    fn max_printed_den(&self, params: &[u64]) -> i128 {
        self.printed(params)
            .map(|v| v.iter().flatten().map(|&(_, d)| d).max().unwrap_or(1))
            .unwrap_or(i128::MAX)
    }

    /// Parameters by name.
    pub fn named(&self, params: &[u64]) -> BTreeMap<String, u64> {
        self.params
            .iter()
            .zip(params)
            .map(|(c, &v)| (c.to_string(), v))
            .collect()
    }

    /// Positional parameters from a name map; missing names are an error.
    pub fn positional(&self, named: &BTreeMap<String, u64>) -> Result<Vec<u64>> {
        if let Some(extra) = named
            .keys()
            .find(|k| !self.params.iter().any(|p| p.to_string() == **k))
        {
            return Err(Error::InvalidParams(format!(
                "{} has no parameter {extra}",
                self.id()
            )));
        }
        self.params
            .iter()
            .map(|p| {
                named.get(&p.to_string()).copied().ok_or_else(|| {
                    Error::InvalidParams(format!("{} needs parameter {p}", self.id()))
                })
            })
            .collect()
    }

    /// Visits every admissible parameter vector within the limits, in
    /// lexicographic order. Printed denominators never decrease as a
    /// parameter grows, so each loop stops at the first vector whose largest
    /// denominator exceeds `max_den`.
    pub fn for_each_instance(
        &self,
        max_param: Option<u64>,
        max_den: Option<i64>,
        visit: &mut dyn FnMut(&[u64]),
    ) {
        assert!(
            max_param.is_some() || max_den.is_some(),
            "instance enumeration needs a bound"
        );
        let mut params = self.minimums.clone();
        self.walk(0, &mut params, max_param, max_den, visit);
    }

    fn walk(
        &self,
        k: usize,
        params: &mut Vec<u64>,
        max_param: Option<u64>,
        max_den: Option<i64>,
        visit: &mut dyn FnMut(&[u64]),
    ) {
        if k == self.params.len() {
            visit(params);
            return;
        }
        let lo = self.minimums[k];
        // Every parameter strictly raises some denominator, so it never
        // exceeds `max_den` while the denominators stay within it.
        let hi = match (max_param, max_den) {
            (Some(p), Some(d)) => p.min(d.max(0) as u64 + lo),
            (Some(p), None) => p,
            (None, Some(d)) => d.max(0) as u64 + lo,
            (None, None) => unreachable!(),
        };
        for v in lo..=hi {
            params[k] = v;
            params[k + 1..].copy_from_slice(&self.minimums[k + 1..]);
            if let Some(d) = max_den {
                if self.max_printed_den(params) > d as i128 {
                    break;
                }
            }
            self.walk(k + 1, params, max_param, max_den, visit);
        }
        params[k] = lo;
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id(), self.source)
    }
}

fn parse_slot(text: &str, offset: usize) -> Result<Slot> {
    let t = text.trim();
    if t == "0" {
        return Ok(Slot::Zero);
    }
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                if split.is_some() {
                    return Err(Error::parse(offset + i, "more than one top-level '/'"));
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    let i = split
        .ok_or_else(|| Error::parse(offset, format!("slot {t:?} is neither 0 nor NUM/DEN")))?;
    let shift = |e: Error| match e {
        Error::Parse { pos, msg } => Error::parse(offset + pos, msg),
        e => e,
    };
    Ok(Slot::Ratio {
        num: Expr::parse(&t[..i]).map_err(shift)?,
        den: Expr::parse(&t[i + 1..]).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(offset + i + 1 + pos, msg),
            e => e,
        })?,
    })
}

/// Parses the `index | s | slots | constraints` format of the bundled tables.
pub fn parse_table(text: &str, table: Table) -> Result<Vec<Family>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let start = offset;
        offset += line.len() + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let cols: Vec<&str> = body.split('|').collect();
        if cols.len() != 4 {
            return Err(Error::parse(start, "expected four '|'-separated columns"));
        }
        let index: usize = cols[0]
            .trim()
            .parse()
            .map_err(|_| Error::parse(start, "bad index"))?;
        let s: i64 = cols[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(start, "bad central coefficient"))?;
        let slots = cols[2]
            .split(',')
            .map(|t| parse_slot(t, start))
            .collect::<Result<Vec<_>>>()?;
        let mut params = Vec::new();
        for slot in &slots {
            if let Slot::Ratio { num, den } = slot {
                num.variables(&mut params);
                den.variables(&mut params);
            }
        }
        let mut minimums = vec![0; params.len()];
        for c in cols[3].split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let (name, min) = c
                .split_once(">=")
                .ok_or_else(|| Error::parse(start, format!("constraint {c:?} is not NAME>=INT")))?;
            let k = params
                .iter()
                .position(|p| p.to_string() == name.trim())
                .ok_or_else(|| {
                    Error::parse(start, format!("constraint on unknown parameter {name:?}"))
                })?;
            minimums[k] = min
                .trim()
                .parse()
                .map_err(|_| Error::parse(start, format!("bad bound in {c:?}")))?;
        }
        out.push(Family {
            table,
            index,
            s,
            slots,
            params,
            minimums,
            source: body.to_string(),
        });
    }
    Ok(out)
}

/// Evaluates the printed slots, reduces them and drops zeros.
pub fn instantiate_family(f: &Family, params: &[u64]) -> Result<NormalizedDivisor> {
    if params.len() != f.params.len() {
        return Err(Error::InvalidParams(format!(
            "{} takes {} parameters, got {}",
            f.id(),
            f.params.len(),
            params.len()
        )));
    }
    if let Some((k, _)) = params
        .iter()
        .zip(&f.minimums)
        .enumerate()
        .find(|(_, (v, m))| v < m)
    {
        return Err(Error::InvalidParams(format!(
            "{}: parameter {} must be at least {}",
            f.id(),
            f.params[k],
            f.minimums[k]
        )));
    }
    let printed = f
        .printed(params)
        .ok_or_else(|| Error::Overflow(format!("{} overflows at {params:?}", f.id())))?;
    let mut fractions = Vec::new();
    for (num, den) in printed.into_iter().flatten() {
        if den <= 0 || num < 0 || num >= den {
            return Err(Error::InvalidParams(format!(
                "{} gives {num}/{den} outside [0, 1) at {params:?}",
                f.id()
            )));
        }
        if num == 0 {
            continue;
        }
        let g = num.gcd(&den);
        let num = i64::try_from(num / g).map_err(|_| Error::Overflow("numerator".into()))?;
        let den = i64::try_from(den / g).map_err(|_| Error::Overflow("denominator".into()))?;
        fractions.push(Fraction::new(num, den)?);
    }
    NormalizedDivisor::new(f.s, fractions)
}

fn signature_key(f: &Fraction) -> Vec<i64> {
    let seq = hj_expand(&f.to_rational().recip()).expect("reciprocal exceeds 1");
    t_signature(&seq).entries().to_vec()
}

/// Sorts by the signature of `1/a` (lexicographic, empty first), then by
/// value.
pub fn canonical_order(d: &NormalizedDivisor) -> NormalizedDivisor {
    let mut keyed: Vec<(Vec<i64>, Fraction)> = d
        .fractions()
        .iter()
        .map(|f| (signature_key(f), *f))
        .collect();
    keyed.sort();
    NormalizedDivisor::new(d.s(), keyed.into_iter().map(|(_, f)| f).collect()).expect("same period")
}

fn sorted_key(d: &NormalizedDivisor) -> (i64, Vec<Fraction>) {
    let mut fr = d.fractions().to_vec();
    fr.sort();
    (d.s(), fr)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMatch {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    /// Whether the printed slot order already is the canonical order.
    pub printed_order_canonical: bool,
}

fn make_match(f: &Family, params: &[u64], inst: &NormalizedDivisor) -> FamilyMatch {
    FamilyMatch {
        family: f.id(),
        params: f.named(params),
        printed_order_canonical: canonical_order(inst).fractions() == inst.fractions(),
    }
}

/// Every `(family, params)` whose instance equals `d` as a multiset.
pub fn match_families(d: &NormalizedDivisor, table: Table) -> Vec<FamilyMatch> {
    let key = sorted_key(d);
    let max_den = d.fractions().iter().map(Fraction::den).max().unwrap_or(1);
    let mut out = Vec::new();
    for f in table.families().iter().filter(|f| f.s == d.s()) {
        f.for_each_instance(None, Some(max_den), &mut |params| {
            if let Ok(inst) = instantiate_family(f, params) {
                if sorted_key(&inst) == key {
                    out.push(make_match(f, params, &inst));
                }
            }
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationBounds {
    pub max_s: i64,
    pub max_points: usize,
    pub max_denominator: i64,
    /// Parameter cap for the table soundness sweep.
    pub max_param: u64,
    /// Denominator cap for the table soundness sweep.
    pub max_instance_denominator: i64,
}

impl Default for EnumerationBounds {
    fn default() -> Self {
        EnumerationBounds {
            max_s: 4,
            max_points: 5,
            max_denominator: 9,
            max_param: 8,
            max_instance_denominator: 60,
        }
    }
}

/// Reduced fractions in `(0, 1)` with denominator at most `max_den`, by value.
pub fn fractions_up_to(max_den: i64) -> Vec<Fraction> {
    let mut out: Vec<Fraction> = (2..=max_den)
        .flat_map(|d| (1..d).filter(move |&c| c.gcd(&d) == 1).map(move |c| (c, d)))
        .map(|(c, d)| Fraction::new(c, d).expect("proper fraction"))
        .collect();
    out.sort();
    out
}

/// All ample normalized divisors with `1 <= s <= max_s`, at most
/// `max_points` fractions (as a sorted multiset) and denominators at most
/// `max_den`, in a fixed order.
pub fn enumerate_corpus(max_s: i64, max_points: usize, max_den: i64) -> Vec<NormalizedDivisor> {
    let pool = fractions_up_to(max_den);
    let mut multisets: Vec<Vec<Fraction>> = vec![vec![]];
    let mut frontier: Vec<(usize, Vec<Fraction>)> = vec![(0, vec![])];
    for _ in 0..max_points {
        let mut next = Vec::new();
        for (start, set) in &frontier {
            for (i, f) in pool.iter().enumerate().skip(*start) {
                let mut s = set.clone();
                s.push(*f);
                next.push((i, s));
            }
        }
        multisets.extend(next.iter().map(|(_, s)| s.clone()));
        frontier = next;
    }
    let mut out = Vec::new();
    for s in 1..=max_s {
        for fr in &multisets {
            let d = NormalizedDivisor::new(s, fr.clone()).expect("small denominators");
            if d.is_ample() {
                out.push(d);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivisorClass {
    /// Outside the modelled resolution regime (`s = 1`, at most two points).
    Unsupported,
    NotRational,
    Rational {
        multiplicity: u64,
    },
}

pub fn classify_divisor(d: &NormalizedDivisor) -> Result<DivisorClass> {
    if !(d.s() >= 2 || (d.s() == 1 && d.r() >= 3)) {
        return Ok(DivisorClass::Unsupported);
    }
    if !is_rational_singularity(d)?.is_rational() {
        return Ok(DivisorClass::NotRational);
    }
    Ok(DivisorClass::Rational {
        multiplicity: multiplicity(d)?.value,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub divisor: Option<NormalizedDivisor>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCoverage {
    pub family: String,
    pub corpus_hits: u64,
    pub instances_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub target_multiplicity: u64,
    pub bounds: EnumerationBounds,
    pub table_entries: usize,
    pub divisors_examined: u64,
    pub unsupported_skipped: u64,
    pub rational: u64,
    pub with_target_multiplicity: u64,
    pub matched: u64,
    /// Rational divisors of the target multiplicity that no entry produces.
    pub outside_table: Vec<NormalizedDivisor>,
    /// Corpus divisors produced by an entry but not rational of the target
    /// multiplicity.
    pub table_false_positives: Vec<NormalizedDivisor>,
    /// Bounded entry instances that are not rational of the target
    /// multiplicity.
    pub instance_failures: Vec<InstanceFailure>,
    pub coverage: Vec<FamilyCoverage>,
}

impl ClassificationReport {
    pub fn passed(&self) -> bool {
        self.outside_table.is_empty()
            && self.table_false_positives.is_empty()
            && self.instance_failures.is_empty()
    }
}

type Index = HashMap<(i64, Vec<Fraction>), Vec<usize>>;

fn build_index(table: Table, max_den: i64) -> Index {
    let mut index: Index = HashMap::new();
    for (k, f) in table.families().iter().enumerate() {
        f.for_each_instance(None, Some(max_den), &mut |params| {
            if let Ok(inst) = instantiate_family(f, params) {
                let slot = index.entry(sorted_key(&inst)).or_default();
                if !slot.contains(&k) {
                    slot.push(k);
                }
            }
        });
    }
    index
}

fn check_instance(f: &Family, params: &[u64], target: u64) -> Option<InstanceFailure> {
    let fail = |divisor: Option<NormalizedDivisor>, reason: String| {
        Some(InstanceFailure {
            family: f.id(),
            params: f.named(params),
            divisor,
            reason,
        })
    };
    let d = match instantiate_family(f, params) {
        Ok(d) => d,
        Err(e) => return fail(None, e.to_string()),
    };
    match classify_divisor(&d) {
        Ok(DivisorClass::Rational { multiplicity }) if multiplicity == target => None,
        Ok(DivisorClass::Rational { multiplicity }) => {
            fail(Some(d), format!("multiplicity {multiplicity}"))
        }
        Ok(DivisorClass::NotRational) => fail(Some(d), "not a rational singularity".into()),
        Ok(DivisorClass::Unsupported) => fail(Some(d), "outside the supported regime".into()),
        Err(e) => fail(Some(d), e.to_string()),
    }
}

/// Bounded instances `(family index, params)` of a table in table order.
fn bounded_instances(
    table: Table,
    max_param: Option<u64>,
    max_den: Option<i64>,
) -> Vec<(usize, Vec<u64>)> {
    let mut out = Vec::new();
    for (k, f) in table.families().iter().enumerate() {
        f.for_each_instance(max_param, max_den, &mut |p| out.push((k, p.to_vec())));
    }
    out
}

/// Completeness against an enumerated corpus plus soundness of every bounded
/// entry instance. Work is spread over the rayon pool; results are merged in
/// corpus order so the report does not depend on the worker count.
pub fn enumerate_and_verify(
    bounds: &EnumerationBounds,
    target_e: u64,
) -> Result<ClassificationReport> {
    let table = Table::for_multiplicity(target_e)?;
    let families = table.families();
    let corpus = enumerate_corpus(bounds.max_s, bounds.max_points, bounds.max_denominator);
    let classes = corpus
        .par_iter()
        .map(classify_divisor)
        .collect::<Result<Vec<_>>>()?;
    let index = build_index(table, bounds.max_denominator);

    let mut report = ClassificationReport {
        schema_version: SCHEMA_VERSION,
        target_multiplicity: target_e,
        bounds: *bounds,
        table_entries: families.len(),
        divisors_examined: corpus.len() as u64,
        unsupported_skipped: 0,
        rational: 0,
        with_target_multiplicity: 0,
        matched: 0,
        outside_table: Vec::new(),
        table_false_positives: Vec::new(),
        instance_failures: Vec::new(),
        coverage: Vec::new(),
    };
    let mut hits = vec![0u64; families.len()];
    for (d, class) in corpus.iter().zip(&classes) {
        let found = index.get(&sorted_key(d));
        match class {
            DivisorClass::Unsupported => report.unsupported_skipped += 1,
            DivisorClass::NotRational => {}
            DivisorClass::Rational { multiplicity } => {
                report.rational += 1;
                if *multiplicity == target_e {
                    report.with_target_multiplicity += 1;
                    match found {
                        Some(ks) => {
                            report.matched += 1;
                            for &k in ks {
                                hits[k] += 1;
                            }
                        }
                        None => report.outside_table.push(d.clone()),
                    }
                    continue;
                }
            }
        }
        if found.is_some() {
            report.table_false_positives.push(d.clone());
        }
    }

    let instances = bounded_instances(
        table,
        Some(bounds.max_param),
        Some(bounds.max_instance_denominator),
    );
    let failures: Vec<Option<InstanceFailure>> = instances
        .par_iter()
        .map(|(k, p)| check_instance(&families[*k], p, target_e))
        .collect();
    report.instance_failures = failures.into_iter().flatten().collect();
    let mut checked = vec![0u64; families.len()];
    for (k, _) in &instances {
        checked[*k] += 1;
    }
    report.coverage = families
        .iter()
        .enumerate()
        .map(|(k, f)| FamilyCoverage {
            family: f.id(),
            corpus_hits: hits[k],
            instances_checked: checked[k],
        })
        .collect();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdFailure {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub divisor: NormalizedDivisor,
    pub witness: BnRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessWitness {
    pub divisor: NormalizedDivisor,
    pub multiplicity: u64,
    pub in_table: bool,
    pub reported_failing: bool,
    pub witness: Option<BnRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeThreshold {
    pub p: u64,
    pub divisors_checked: u64,
    pub failure_count: u64,
    /// The first failures in table order, capped at `listed_failures`.
    pub failures: Vec<ThresholdFailure>,
    /// `(2; (p+1)/2p, (p−1)/p, 1/2)` when its multiplicity is the target.
    pub sharpness: Option<SharpnessWitness>,
    pub errors: Vec<InstanceFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub schema_version: u32,
    pub target_multiplicity: u64,
    pub max_param: u64,
    pub primes: Vec<PrimeThreshold>,
}

impl ThresholdReport {
    pub fn prime(&self, p: u64) -> Option<&PrimeThreshold> {
        self.primes.iter().find(|t| t.p == p)
    }
}

const LISTED_FAILURES: usize = 25;

/// The divisor `(2; (p+1)/2p, (p−1)/p, 1/2)`; for `p = 2` the first two
/// fractions are `3/4` and `1/2`.
pub fn sharp_example(p: u64) -> Result<NormalizedDivisor> {
    let p = i64::try_from(p).map_err(|_| Error::Overflow("prime".into()))?;
    NormalizedDivisor::from_pairs(2, &[(p + 1, 2 * p), (p - 1, p), (1, 2)])
}

/// For each prime, F-rationality of every distinct table instance with all
/// parameters at most `max_param`.
pub fn threshold_report(target_e: u64, primes: &[u64], max_param: u64) -> Result<ThresholdReport> {
    let table = Table::for_multiplicity(target_e)?;
    let families = table.families();
    let mut seen = HashSet::new();
    let mut distinct = Vec::new();
    let mut errors = Vec::new();
    for (k, params) in bounded_instances(table, Some(max_param), None) {
        match instantiate_family(&families[k], &params) {
            Ok(d) => {
                if seen.insert(sorted_key(&d)) {
                    distinct.push((k, params, d));
                }
            }
            Err(e) => errors.push(InstanceFailure {
                family: families[k].id(),
                params: families[k].named(&params),
                divisor: None,
                reason: e.to_string(),
            }),
        }
    }
    let mut out = Vec::new();
    for &p in primes {
        let verdicts: Vec<Result<_>> = distinct
            .par_iter()
            .map(|(_, _, d)| is_f_rational(d, p))
            .collect();
        let mut failures = Vec::new();
        let mut failure_count = 0;
        let mut errs = errors.clone();
        let mut failing_keys = HashSet::new();
        for ((k, params, d), v) in distinct.iter().zip(verdicts) {
            match v {
                Ok(v) if !v.is_f_rational() => {
                    failure_count += 1;
                    failing_keys.insert(sorted_key(d));
                    if failures.len() < LISTED_FAILURES {
                        failures.push(ThresholdFailure {
                            family: families[*k].id(),
                            params: families[*k].named(params),
                            divisor: d.clone(),
                            witness: v.witness.expect("failing verdicts carry a witness"),
                        });
                    }
                }
                Ok(_) => {}
                Err(e) => errs.push(InstanceFailure {
                    family: families[*k].id(),
                    params: families[*k].named(params),
                    divisor: Some(d.clone()),
                    reason: e.to_string(),
                }),
            }
        }
        let sharpness = match sharp_example(p) {
            Ok(d) => {
                let e = multiplicity(&d)?.value;
                if e == target_e {
                    let verdict = is_f_rational(&d, p)?;
                    Some(SharpnessWitness {
                        in_table: seen.contains(&sorted_key(&d)),
                        reported_failing: failing_keys.contains(&sorted_key(&d)),
                        divisor: d,
                        multiplicity: e,
                        witness: verdict.witness,
                    })
                } else {
                    None
                }
            }
            Err(_) => None,
        };
        out.push(PrimeThreshold {
            p,
            divisors_checked: distinct.len() as u64,
            failure_count,
            failures,
            sharpness,
            errors: errs,
        });
    }
    Ok(ThresholdReport {
        schema_version: SCHEMA_VERSION,
        target_multiplicity: target_e,
        max_param,
        primes: out,
    })
}
