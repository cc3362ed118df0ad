//! Instance-level cross-checks between the closed forms and brute force.
//!
//! Each instance runs a list of named checks with a tri-state verdict. The
//! instance matrix comes in tiers by field size.

use crate::closedform::{
    classify, counts_formula_upto, binary_two_valued_poly, subfield_poly, factorization, semiprimitive_poly, spectrum, CaseTag,
};
use crate::codes::{
    build_code, code_partitions, enumerator_closed_form, total_weight_identity, weight_distribution_full,
    weight_distribution_representative, weight_from_period, WeightEnumerator, SAMPLES_PER_COSET,
};
use crate::cycloint::{newton_from_power_sums, power_sums_of, CycloInt, FactoredPoly, IntPoly};
use crate::error::{Error, Result};
use crate::ffield::{build_binary_field, build_field, FieldDesc};
use crate::par::Strategy;
use crate::periods::{
    count_diagonal_power_sums, diagonal_counts_convolution, ordinary_periods, period_counts, period_poly_from_periods,
    power_sums_upto, reduced_periods, PeriodCounts, CONVOLUTION_BUDGET,
};
use crate::quadpart::{count_2b2, count_d2, partitions_for_instance, Partitions};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use std::fmt;
use std::time::Instant;

/// Field size up to which the convolution count and the second generator run.
pub const SMALL_FIELD: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Verdict {
    fn from_bool(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail(detail())
        }
    }

    fn from_result(r: Result<Verdict>) -> Self {
        match r {
            Ok(v) => v,
            Err(e @ Error::Unsupported(_)) => Verdict::Skipped(e.to_string()),
            Err(e) => Verdict::Fail(e.to_string()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "fail",
            Verdict::Skipped(_) => "skipped",
        }
    }

    pub fn detail(&self) -> Option<&str> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(d) | Verdict::Skipped(d) => Some(d),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tier {
    Fast,
    Full,
    Stretch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Instance {
    /// Period polynomial of order 2^m over F_{p^s}.
    Period { p: u64, s: u32, m: u32 },
    /// Two-valued periods over F_{2^s}, e = (2^s - 1)/f.
    BinaryTwoValued { s: u32, f: u64 },
    /// Subfield case e = (q-1)/(p^l - 1).
    Subfield { p: u64, s: u32, l: u32 },
    Semiprimitive { p: u64, s: u32, e: u64 },
    Code { p: u64, l: u32, s: u32, n: u64 },
    /// Uniqueness of normalized partitions of p^k for k = 1..=k_max.
    Partitions { p: u64, k_max: u32 },
}

impl Instance {
    pub fn key(&self) -> String {
        match *self {
            Instance::Period { p, s, m } => format!("period p={p},s={s},m={m}"),
            Instance::BinaryTwoValued { s, f } => format!("binary s={s},f={f}"),
            Instance::Subfield { p, s, l } => format!("subfield p={p},s={s},l={l}"),
            Instance::Semiprimitive { p, s, e } => format!("semiprimitive p={p},s={s},e={e}"),
            Instance::Code { p, l, s, n } => format!("code p={p},l={l},s={s},N={n}"),
            Instance::Partitions { p, k_max } => format!("partitions p={p},k<={k_max}"),
        }
    }

    /// Field size the instance works in, if any.
    pub fn field_size(&self) -> Option<u128> {
        match *self {
            Instance::Period { p, s, .. }
            | Instance::Subfield { p, s, .. }
            | Instance::Semiprimitive { p, s, .. }
            | Instance::Code { p, s, .. } => Some((p as u128).pow(s)),
            Instance::BinaryTwoValued { s, .. } => Some(1u128 << s),
            Instance::Partitions { .. } => None,
        }
    }

    fn tier(&self) -> Tier {
        match self.field_size() {
            Some(q) if q > 10_000_000 => Tier::Stretch,
            Some(q) if q > 30_000 => Tier::Full,
            _ => Tier::Fast,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Every instance of the verification matrix up to the given tier.
pub fn matrix(tier: Tier) -> Vec<Instance> {
    let mut all = vec![];
    for (p, s, m) in [
        (3, 4, 4),
        (3, 8, 4),
        (3, 8, 5),
        (11, 4, 4),
        (5, 4, 4),
        (13, 4, 4),
        (5, 8, 4),
        (5, 8, 3),
        (3, 2, 3),
        (3, 4, 3),
        (5, 2, 3),
        (5, 4, 3),
        (5, 2, 2),
        (5, 4, 2),
        (3, 16, 5),
    ] {
        all.push(Instance::Period { p, s, m });
    }
    all.push(Instance::BinaryTwoValued { s: 4, f: 5 });
    all.push(Instance::Subfield { p: 3, s: 4, l: 2 });
    all.push(Instance::Semiprimitive { p: 3, s: 4, e: 5 });
    for (p, l, s, n) in [(3, 1, 4, 16), (3, 1, 4, 8), (3, 1, 8, 16), (5, 1, 8, 8)] {
        all.push(Instance::Code { p, l, s, n });
    }
    for p in [3, 11, 19, 5, 13, 29] {
        all.push(Instance::Partitions { p, k_max: 12 });
    }
    all.retain(|i| i.tier() <= tier);
    all
}

/// Parses "p=3,s=4,m=4" style selectors into a matrix entry.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut kv = std::collections::BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::input(format!("expected key=value, got {part:?}")))?;
        let v: u64 = v.trim().parse().map_err(|_| Error::input(format!("bad number in {part:?}")))?;
        kv.insert(k.trim().to_string(), v);
    }
    let get = |k: &str| kv.get(k).copied();
    let small = |v: u64| u32::try_from(v).map_err(|_| Error::input(format!("{v} is too large")));
    let keys: Vec<&str> = kv.keys().map(String::as_str).collect();
    match keys.as_slice() {
        ["m", "p", "s"] => Ok(Instance::Period { p: get("p").unwrap(), s: small(get("s").unwrap())?, m: small(get("m").unwrap())? }),
        ["N", "l", "p", "s"] => Ok(Instance::Code {
            p: get("p").unwrap(),
            l: small(get("l").unwrap())?,
            s: small(get("s").unwrap())?,
            n: get("N").unwrap(),
        }),
        ["e", "p", "s"] => Ok(Instance::Semiprimitive { p: get("p").unwrap(), s: small(get("s").unwrap())?, e: get("e").unwrap() }),
        ["l", "p", "s"] => Ok(Instance::Subfield { p: get("p").unwrap(), s: small(get("s").unwrap())?, l: small(get("l").unwrap())? }),
        ["f", "s"] => Ok(Instance::BinaryTwoValued { s: small(get("s").unwrap())?, f: get("f").unwrap() }),
        ["k", "p"] => Ok(Instance::Partitions { p: get("p").unwrap(), k_max: small(get("k").unwrap())? }),
        _ => Err(Error::input(format!("unrecognized instance selector {text:?}"))),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Cap on q * length for full code enumeration.
    pub code_budget: u64,
    /// Cap on q for the convolution count.
    pub convolution_budget: u64,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            code_budget: crate::codes::FULL_BUDGET,
            convolution_budget: CONVOLUTION_BUDGET,
            seed: 0,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct InstanceReport {
    pub key: String,
    pub case: Option<String>,
    /// (name, value), e.g. ("A_3", -1).
    pub partitions: Vec<(String, BigInt)>,
    /// Closed-form spectrum as display strings with multiplicities.
    pub spectrum: Vec<(String, u64)>,
    pub factorization: Option<String>,
    pub oracle_poly: Option<IntPoly>,
    pub enumerator: Option<String>,
    pub checks: Vec<Check>,
    pub millis: u128,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| matches!(c.verdict, Verdict::Fail(_)))
    }

    fn check(&mut self, name: &str, verdict: Verdict) {
        self.checks.push(Check { name: name.to_string(), verdict });
    }

    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<Verdict>) {
        let v = Verdict::from_result(f());
        self.check(name, v);
    }
}

pub fn run_instance(inst: &Instance, opts: &Options) -> InstanceReport {
    let start = Instant::now();
    let mut rep = InstanceReport { key: inst.key(), ..Default::default() };
    let outcome = match *inst {
        Instance::Period { p, s, m } => period_instance(&mut rep, p, s, m, opts),
        Instance::BinaryTwoValued { s, f } => {
            let e = ((1u64 << s) - 1) / f.max(1);
            family_instance(&mut rep, build_binary_field(s), e, binary_two_valued_poly(s, f))
        }
        Instance::Subfield { p, s, l } => {
            let e = (p.pow(s) - 1) / (p.pow(l) - 1);
            family_instance(&mut rep, build_field(p, s), e, subfield_poly(p, s, l))
        }
        Instance::Semiprimitive { p, s, e } => family_instance(&mut rep, build_field(p, s), e, semiprimitive_poly(p, s, e)),
        Instance::Code { p, l, s, n } => code_instance(&mut rep, p, l, s, n, opts),
        Instance::Partitions { p, k_max } => partitions_instance(&mut rep, p, k_max),
    };
    if let Err(e) = outcome {
        rep.check("setup", Verdict::Fail(e.to_string()));
    }
    rep.millis = start.elapsed().as_millis();
    rep
}

fn partition_list(tag: &CaseTag, parts: &Partitions) -> Result<Vec<(String, BigInt)>> {
    let mut out = vec![];
    for r in tag.partition_ranks() {
        match parts {
            Partitions::TwoB2(_) => {
                out.push((format!("A_{r}"), parts.a(r)?.clone()));
                out.push((format!("B_{r}"), parts.b(r)?.clone()));
            }
            Partitions::D2(_) => {
                out.push((format!("C_{r}"), parts.c(r)?.clone()));
                out.push((format!("D_{r}"), parts.d(r)?.clone()));
            }
        }
    }
    Ok(out)
}

/// Oracle data shared by the period checks.
struct Oracle {
    counts: PeriodCounts,
    reduced: Vec<CycloInt>,
    pstar: IntPoly,
}

fn oracle(f: &FieldDesc, e: u64) -> Result<Oracle> {
    let counts = period_counts(f, e)?;
    let reduced = reduced_periods(&counts);
    let pstar = period_poly_from_periods(&reduced)?;
    Ok(Oracle { counts, reduced, pstar })
}

fn period_instance(rep: &mut InstanceReport, p: u64, s: u32, m: u32, opts: &Options) -> Result<()> {
    let tag = classify(p, s, m)?;
    let e = tag.e();
    rep.case = Some(tag.case().label().to_string());
    let parts = partitions_for_instance(&tag)?;
    rep.partitions = partition_list(&tag, &parts)?;
    let f = build_field(p, s)?;
    let or = oracle(&f, e)?;
    rep.oracle_poly = Some(or.pstar.clone());

    let fact = factorization(&tag, &parts);
    if let Ok(fp) = &fact {
        rep.factorization = Some(fp.to_string());
    }
    rep.run("factorization expands to the oracle polynomial", || {
        let fp = fact.clone()?;
        Ok(Verdict::from_bool(fp.expand() == or.pstar, || {
            format!("closed form {} vs oracle {}", fp.expand(), or.pstar)
        }))
    });
    rep.run("every oracle period is a root of exactly one factor", || roots_check(&fact.clone()?, &or.reduced));
    rep.run("closed-form spectrum has the oracle power sums", || {
        let sp = spectrum(&tag, &parts)?;
        let closed = sp.power_sums(e as usize)?;
        let direct = power_sums_upto(&or.reduced, e as usize)?;
        Ok(Verdict::from_bool(sp.total_multiplicity() == e && closed == direct, || {
            format!("closed-form sums {closed:?} vs oracle {direct:?}")
        }))
    });
    if let Ok(sp) = spectrum(&tag, &parts) {
        rep.spectrum = rep_spectrum(&sp);
    }
    rep.run("reduced and ordinary period polynomials are related by X -> eX + 1", || {
        ordinary_identity(&or, e)
    });
    rep.run("diagonal equation counts agree", || counts_check(&f, &tag, &parts, &or, opts));
    structural_checks(rep, &f, e, &or);
    Ok(())
}

fn rep_spectrum(sp: &crate::closedform::Spectrum) -> Vec<(String, u64)> {
    sp.entries().iter().map(|(v, k)| (v.to_string(), *k)).collect()
}

fn roots_check(fact: &FactoredPoly, reduced: &[CycloInt]) -> Result<Verdict> {
    let mut hits = vec![0usize; fact.factors().len()];
    for (j, z) in reduced.iter().enumerate() {
        let roots: Vec<usize> = fact
            .factors()
            .iter()
            .enumerate()
            .filter(|(_, (g, _))| g.eval_at(z).is_zero())
            .map(|(i, _)| i)
            .collect();
        if roots.len() != 1 {
            return Ok(Verdict::Fail(format!("eta*_{j} = {z} is a root of {} factors", roots.len())));
        }
        hits[roots[0]] += 1;
    }
    for ((g, mult), h) in fact.factors().iter().zip(&hits) {
        let want = *mult as usize * g.degree().unwrap_or(0);
        if *h != want {
            return Ok(Verdict::Fail(format!("factor {g} has {h} oracle roots, expected {want}")));
        }
    }
    Ok(Verdict::Pass)
}

fn ordinary_identity(or: &Oracle, e: u64) -> Result<Verdict> {
    let p = period_poly_from_periods(&ordinary_periods(&or.counts)?)?;
    let eb = BigInt::from(e);
    let lhs = or.pstar.compose_linear(&eb, &BigInt::one());
    let rhs = p.scale(&eb.pow(e as u32));
    Ok(Verdict::from_bool(lhs == rhs, || format!("P*(eX+1) = {lhs}, e^e P(X) = {rhs}")))
}

fn counts_check(f: &FieldDesc, tag: &CaseTag, parts: &Partitions, or: &Oracle, opts: &Options) -> Result<Verdict> {
    let e = tag.e();
    let small = f.q() <= SMALL_FIELD && f.q() <= opts.convolution_budget;
    let n_max = if small { e.min(8) as u32 } else { e as u32 };
    let formula = counts_formula_upto(tag, parts, n_max)?;
    let conv = if small { Some(diagonal_counts_convolution(f, e, n_max, opts.convolution_budget)?) } else { None };
    for n in 1..=n_max {
        let i = (n - 1) as usize;
        let by_sums = count_diagonal_power_sums(f, e, n, &or.reduced)?;
        if formula[i] != by_sums {
            return Ok(Verdict::Fail(format!("n = {n}: formula {} vs power-sum count {by_sums}", formula[i])));
        }
        if let Some(c) = &conv {
            if c[i] != by_sums {
                return Ok(Verdict::Fail(format!("n = {n}: convolution {} vs power-sum count {by_sums}", c[i])));
            }
        }
    }
    Ok(Verdict::Pass)
}

fn structural_checks(rep: &mut InstanceReport, f: &FieldDesc, e: u64, or: &Oracle) {
    let p = f.p();
    rep.run("reduced periods sum to 0", || {
        let total = or.reduced.iter().try_fold(CycloInt::zero(p), |acc, z| acc.add(z))?;
        Ok(Verdict::from_bool(total.is_zero(), || format!("sum is {total}")))
    });
    rep.run("ordinary periods sum to -1", || {
        let total = ordinary_periods(&or.counts)?.iter().try_fold(CycloInt::zero(p), |acc, z| acc.add(z))?;
        Ok(Verdict::from_bool(total == CycloInt::from_integer(p, -1), || format!("sum is {total}")))
    });
    rep.run("every count row sums to q", || {
        let bad = or.counts.rows().iter().position(|r| r.iter().sum::<u64>() != f.q());
        Ok(Verdict::from_bool(bad.is_none(), || format!("row {} has the wrong total", bad.unwrap())))
    });
    rep.run("Newton reconstruction and evaluation round-trip", || {
        let again = newton_from_power_sums(&power_sums_of(&or.pstar, e as usize))?;
        let roots = or.reduced.iter().all(|z| or.pstar.eval_at(z).is_zero());
        Ok(Verdict::from_bool(again == or.pstar && roots, || "round-trip mismatch".to_string()))
    });
    rep.run("spectrum does not depend on the generator", || {
        if f.q() > SMALL_FIELD {
            return Ok(Verdict::Skipped(format!("q = {} exceeds {SMALL_FIELD}", f.q())));
        }
        let qm1 = f.q() - 1;
        let k = (2..qm1).find(|k| k.gcd(&qm1) == 1).unwrap_or(1);
        let g = f.with_generator(f.pow(f.gamma(), k))?;
        let mut a = or.reduced.clone();
        let mut b = reduced_periods(&period_counts(&g, e)?);
        a.sort_by(|x, y| x.coords().cmp(y.coords()));
        b.sort_by(|x, y| x.coords().cmp(y.coords()));
        Ok(Verdict::from_bool(a == b, || format!("gamma^{k} gives a different spectrum")))
    });
}

fn family_instance(rep: &mut InstanceReport, f: Result<FieldDesc>, e: u64, closed: Result<FactoredPoly>) -> Result<()> {
    let f = f?;
    let closed = closed?;
    rep.factorization = Some(closed.to_string());
    let or = oracle(&f, e)?;
    rep.oracle_poly = Some(or.pstar.clone());
    rep.check(
        "closed form equals the oracle polynomial",
        Verdict::from_bool(closed.expand() == or.pstar, || format!("{} vs {}", closed.expand(), or.pstar)),
    );
    rep.run("every oracle period is a root of exactly one factor", || roots_check(&closed, &or.reduced));
    rep.run("reduced and ordinary period polynomials are related by X -> eX + 1", || {
        ordinary_identity(&or, e)
    });
    structural_checks(rep, &f, e, &or);
    Ok(())
}

fn code_instance(rep: &mut InstanceReport, p: u64, l: u32, s: u32, n: u64, opts: &Options) -> Result<()> {
    let c = build_code(p, l, s, n)?;
    let parts = code_partitions(&c)?;
    let tag = classify(p, s, c.m())?;
    rep.case = Some(tag.case().label().to_string());
    rep.partitions = partition_list(&tag, &parts)?;
    let closed = enumerator_closed_form(&c, &parts)?;
    rep.enumerator = Some(closed.to_string());
    let f = build_field(p, s)?;
    let e = c.e();
    let reduced = reduced_periods(&period_counts(&f, e)?);
    rep.check(
        "closed-form enumerator satisfies the total-weight identity",
        Verdict::from_bool(total_weight_identity(&c, &closed), || format!("total weight {}", closed.total_weight())),
    );
    let rep_run = weight_distribution_representative(&f, &c, SAMPLES_PER_COSET, opts.seed);
    rep.run("coset representative weights match the oracle periods", || {
        let r = rep_run.clone()?;
        for (j, w) in r.coset_weights.iter().enumerate() {
            let eta = reduced[j]
                .as_integer()
                .ok_or_else(|| Error::inconsistent(format!("eta*_{j} is not an integer")))?;
            let expect = weight_from_period(&c, eta)?;
            if *w != expect {
                return Ok(Verdict::Fail(format!("coset {j}: weight {w}, period gives {expect}")));
            }
        }
        Ok(Verdict::Pass)
    });
    rep.run("sampled codewords have their coset's weight", || {
        let r = rep_run.clone()?;
        Ok(Verdict::from_bool(r.samples.iter().all(|v| v.len() == SAMPLES_PER_COSET), || {
            "some coset was not sampled".to_string()
        }))
    });
    rep.run("representative enumerator equals the closed form", || {
        let r = rep_run.clone()?;
        Ok(enumerators_agree(&r.enumerator, &closed))
    });
    rep.run("full enumeration equals the closed form", || {
        match weight_distribution_full(&f, &c, opts.code_budget, opts.strategy) {
            Ok(full) => Ok(enumerators_agree(&full, &closed)),
            Err(Error::Budget(msg)) => Ok(Verdict::Skipped(msg)),
            Err(e) => Err(e),
        }
    });
    Ok(())
}

fn enumerators_agree(a: &WeightEnumerator, b: &WeightEnumerator) -> Verdict {
    Verdict::from_bool(a.same_counts(b), || format!("{a} vs {b}"))
}

fn partitions_instance(rep: &mut InstanceReport, p: u64, k_max: u32) -> Result<()> {
    let counter: fn(u64, u32) -> Result<usize> = match p % 8 {
        3 => count_2b2,
        5 => count_d2,
        _ => return Err(Error::instance(format!("p = {p} is not 3 or 5 mod 8"))),
    };
    rep.run("exactly one normalized representation for every k", || {
        for k in 1..=k_max {
            let n = counter(p, k)?;
            if n != 1 {
                return Ok(Verdict::Fail(format!("{p}^{k} has {n} normalized representations")));
            }
        }
        Ok(Verdict::Pass)
    });
    Ok(())
}
