//! Machine-readable output. Big integers are decimal strings and
//! polynomials are coefficient arrays, constant term first.

use num_bigint::BigInt;
use periodpoly::cycloint::{CycloInt, FactoredPoly, IntPoly};
use periodpoly::verify::{InstanceReport, Verdict};
use serde::{Deserialize, Serialize};

pub fn big(n: &BigInt) -> String {
    n.to_string()
}

pub fn poly(p: &IntPoly) -> Vec<String> {
    p.coeffs().iter().map(big).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: String,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodEntry {
    pub index: usize,
    pub integer: Option<String>,
    /// Coordinates in the power basis 1, zeta, ..., zeta^{p-2}.
    pub coords: Vec<String>,
}

impl PeriodEntry {
    pub fn new(index: usize, z: &CycloInt) -> Self {
        PeriodEntry { index, integer: z.as_integer().map(big), coords: z.coords().iter().map(big).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodsOutput {
    pub p: u64,
    pub s: u32,
    pub e: u64,
    pub q: String,
    pub counts: Vec<Vec<u64>>,
    pub periods: Vec<PeriodEntry>,
    pub case: Option<String>,
    pub spectrum: Option<Vec<SpectrumEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub coeffs: Vec<String>,
    pub multiplicity: u32,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorOutput {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub case: String,
    pub factors: Vec<FactorEntry>,
    pub display: String,
    pub expanded: Vec<String>,
    pub expanded_display: String,
}

impl FactorOutput {
    pub fn new(p: u64, s: u32, m: u32, case: String, f: &FactoredPoly) -> Self {
        let expanded = f.expand();
        FactorOutput {
            p,
            s,
            m,
            case,
            factors: f
                .factors()
                .iter()
                .map(|(g, k)| FactorEntry { coeffs: poly(g), multiplicity: *k, display: g.to_string() })
                .collect(),
            display: f.to_string(),
            expanded: poly(&expanded),
            expanded_display: expanded.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountEntry {
    pub n: u32,
    pub count: String,
    pub brute_force: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsOutput {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub counts: Vec<CountEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub weight: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    /// "full" or "representative".
    pub mode: String,
    pub enumerator: Vec<WeightEntry>,
    pub display: String,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeOutput {
    pub p: u64,
    pub l: u32,
    pub s: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub length: u64,
    pub dimension: u32,
    pub e: u64,
    pub enumerator: Vec<WeightEntry>,
    pub display: String,
    pub comparison: Option<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionOutput {
    pub p: u64,
    pub k: u32,
    pub form: String,
    pub values: Vec<NamedValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutput {
    pub name: String,
    pub verdict: String,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceOutput {
    pub key: String,
    pub passed: bool,
    pub case: Option<String>,
    pub partitions: Vec<NamedValue>,
    pub spectrum: Vec<SpectrumEntry>,
    pub factorization: Option<String>,
    pub oracle_poly: Option<Vec<String>>,
    pub enumerator: Option<String>,
    pub checks: Vec<CheckOutput>,
    pub first_failure: Option<CheckOutput>,
    pub millis: u64,
}

fn check_output(name: &str, v: &Verdict) -> CheckOutput {
    CheckOutput { name: name.to_string(), verdict: v.label().to_string(), detail: v.detail().map(str::to_string) }
}

impl From<&InstanceReport> for InstanceOutput {
    fn from(r: &InstanceReport) -> Self {
        InstanceOutput {
            key: r.key.clone(),
            passed: r.passed(),
            case: r.case.clone(),
            partitions: r.partitions.iter().map(|(n, v)| NamedValue { name: n.clone(), value: big(v) }).collect(),
            spectrum: r
                .spectrum
                .iter()
                .map(|(v, k)| SpectrumEntry { value: v.clone(), multiplicity: *k })
                .collect(),
            factorization: r.factorization.clone(),
            oracle_poly: r.oracle_poly.as_ref().map(poly),
            enumerator: r.enumerator.clone(),
            checks: r.checks.iter().map(|c| check_output(&c.name, &c.verdict)).collect(),
            first_failure: r.first_failure().map(|c| check_output(&c.name, &c.verdict)),
            millis: r.millis as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub passed: bool,
    pub instances: Vec<InstanceOutput>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use periodpoly::verify::{run_instance, Instance, Options};

    #[test]
    fn verify_report_round_trips() {
        let r = run_instance(&Instance::Period { p: 3, s: 4, m: 3 }, &Options::default());
        let out = VerifyOutput { passed: r.passed(), instances: vec![(&r).into()] };
        let text = serde_json::to_string_pretty(&out).unwrap();
        let back: VerifyOutput = serde_json::from_str(&text).unwrap();
        assert_eq!(back, out);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }

    #[test]
    fn polynomials_are_constant_first_strings() {
        let p = IntPoly::from_i64s(&[-9, 0, 1]);
        assert_eq!(poly(&p), vec!["-9", "0", "1"]);
    }
}
