//! The combined analysis of one divisor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classify::{match_families, FamilyMatch, Table, SCHEMA_VERSION};
use crate::divisor::{
    is_rational_singularity, normalize, NormalizedDivisor, QDivisor, RationalityVerdict,
};
use crate::error::{Error, Result};
use crate::frational::{failing_primes, is_f_rational, FRationalVerdict};
use crate::number::{format_rational, is_prime, Rational};
use crate::resolution::{
    dual_graph, laufer_cycle, multiplicity, verify_cycle, CycleCheck, DualGraph, FundamentalCycle,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    pub applies: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub cycle_check: Option<CycleCheck>,
    pub computation_sequence_agrees: Option<bool>,
    pub theorem_checks: Vec<TheoremCheck>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self.cycle_check, None | Some(CycleCheck::ValidFundamental))
            && self.computation_sequence_agrees != Some(false)
            && self.theorem_checks.iter().all(|t| !t.applies || t.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: String,
    pub terms: BTreeMap<String, String>,
    pub normalized: NormalizedDivisor,
    pub expression: String,
    pub degree: String,
    pub period: u64,
    pub rationality: RationalityVerdict,
    pub dual_graph: Option<DualGraph>,
    pub fundamental_cycle: Option<FundamentalCycle>,
    pub multiplicity: Option<u64>,
    pub f_rationality: Vec<FRationalVerdict>,
    pub failing_primes: Option<Vec<u64>>,
    pub family_matches: Vec<FamilyMatch>,
    pub notes: Vec<String>,
    pub verification: Option<Verification>,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub primes: Vec<u64>,
    pub verify: bool,
}

pub fn analyze(input: &str, raw: &QDivisor, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    if let Some(p) = opts.primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let d = normalize(raw)?;
    let rationality = is_rational_singularity(&d)?;
    let mut notes = Vec::new();
    let mut report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input: input.to_string(),
        terms: raw
            .terms()
            .iter()
            .map(|(l, a)| (l.clone(), format_rational(a)))
            .collect(),
        expression: d.to_expression(),
        degree: format_rational(&d.degree()),
        period: d.period(),
        normalized: d.clone(),
        rationality: rationality.clone(),
        dual_graph: None,
        fundamental_cycle: None,
        multiplicity: None,
        f_rationality: Vec::new(),
        failing_primes: None,
        family_matches: Vec::new(),
        notes: Vec::new(),
        verification: None,
    };
    match dual_graph(&d) {
        Ok(g) => report.dual_graph = Some(g),
        Err(e @ Error::Unsupported(_)) => notes.push(e.to_string()),
        Err(e) => return Err(e),
    }
    if rationality.is_rational() {
        if report.dual_graph.is_some() {
            let m = multiplicity(&d)?;
            report.fundamental_cycle = Some(m.cycle);
            report.multiplicity = Some(m.value);
            if let Ok(table) = Table::for_multiplicity(m.value) {
                report.family_matches = match_families(&d, table);
            }
        }
        for &p in &opts.primes {
            report.f_rationality.push(is_f_rational(&d, p)?);
        }
        report.failing_primes = Some(failing_primes(&d)?.into_iter().collect());
    } else {
        notes.push(
            "not a rational singularity: cycle, multiplicity and F-rationality are not computed"
                .into(),
        );
    }
    report.notes = notes;
    if opts.verify {
        report.verification = Some(verify(&d, &report));
    }
    Ok(report)
}

fn verify(d: &NormalizedDivisor, report: &AnalysisReport) -> Verification {
    let (cycle_check, computation_sequence_agrees) =
        match (&report.dual_graph, &report.fundamental_cycle) {
            (Some(g), Some(z)) => (
                Some(verify_cycle(g, z)),
                Some(laufer_cycle(g, 1_000_000).map(|l| &l == z).unwrap_or(false)),
            ),
            _ => (None, None),
        };
    let s = d.s();
    let r = d.r() as i64;
    let rational = report.rationality.is_rational();
    let one = Rational::from_integer(1.into());
    let mut checks = Vec::new();
    let mut check = |name: &str, applies: bool, holds: bool| {
        checks.push(TheoremCheck {
            name: name.to_string(),
            applies,
            holds,
        })
    };
    check("s >= r implies rational", s >= r, rational);
    check("s + 2 <= r implies not rational", s + 2 <= r, !rational);
    if let Some(z) = &report.fundamental_cycle {
        check(
            "s + 1 <= r implies central coefficient >= 2",
            s < r,
            z.n0 >= 2,
        );
    }
    for v in &report.f_rationality {
        let p = v.p;
        let coprime = d.fractions().iter().all(|f| f.den() % p as i64 != 0);
        let ok = v.is_f_rational();
        check(&format!("p={p}: s >= r implies F-rational"), s >= r, ok);
        check(
            &format!("p={p}: p divides no denominator implies F-rational"),
            coprime,
            ok,
        );
        check(
            &format!("p={p}: not F-rational implies s + 1 = r"),
            !ok,
            s + 1 == r,
        );
        check(
            &format!("p={p}: deg D >= 1 and p >= r - 1 implies F-rational"),
            d.degree() >= one && p as i64 >= r - 1,
            ok,
        );
    }
    if let Some(fp) = &report.failing_primes {
        check(
            "failing primes divide the period",
            !fp.is_empty(),
            fp.iter().all(|p| d.period().is_multiple_of(*p)),
        );
    }
    Verification {
        cycle_check,
        computation_sequence_agrees,
        theorem_checks: checks,
    }
}

/// Plain-text rendering of a report.
pub fn to_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("divisor       {}", r.normalized));
    line(format!("degree        {}", r.degree));
    line(format!("period        {}", r.period));
    match (&r.rationality.witness_n, &r.rationality.witness_value) {
        (Some(n), Some(v)) => line(format!("rational      no (deg [{n}D] = {v})")),
        _ => line("rational      yes".into()),
    }
    if let Some(g) = &r.dual_graph {
        let branches: Vec<String> = g.branches.iter().map(|b| b.to_string()).collect();
        line(format!(
            "graph         -{} | {}",
            g.central_weight,
            branches.join(" ")
        ));
    }
    if let Some(z) = &r.fundamental_cycle {
        line(format!("cycle         {z}"));
    }
    if let Some(e) = r.multiplicity {
        line(format!("multiplicity  {e}"));
    }
    for v in &r.f_rationality {
        match &v.witness {
            None => line(format!("p = {:<9} F-rational", v.p)),
            Some(w) => line(format!(
                "p = {:<9} not F-rational (n = {}: deg [-pnD] = {}, support {}, value {})",
                v.p, w.n, w.deg_neg, w.support_size, w.value
            )),
        }
    }
    if let Some(fp) = &r.failing_primes {
        let s: Vec<String> = fp.iter().map(u64::to_string).collect();
        line(format!("failing primes {{{}}}", s.join(", ")));
    }
    for m in &r.family_matches {
        let params: Vec<String> = m.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        line(
            format!("family        {} {}", m.family, params.join(" "))
                .trim_end()
                .to_string(),
        );
    }
    for n in &r.notes {
        line(format!("note          {n}"));
    }
    if let Some(v) = &r.verification {
        line(format!(
            "verification  {}",
            if v.passed() { "passed" } else { "FAILED" }
        ));
    }
    out
}
