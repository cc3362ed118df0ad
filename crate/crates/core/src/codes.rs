//! Irreducible cyclic codes
//! C = {(Tr(beta), Tr(beta theta), ..., Tr(beta theta^{n-1})) : beta in F_q},
//! with theta = gamma^N, n = (q-1)/N and Tr the trace onto F_{p^l}.

use crate::closedform::{classify, Case};
use crate::error::{Error, Result};
use crate::ffield::{is_prime, FieldDesc, FieldElem};
use crate::par::{fold_chunks, Strategy};
use crate::periods::coset_index;
use crate::quadpart::{partitions_for_instance, Partitions};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Default cap on q * length for full enumeration.
pub const FULL_BUDGET: u64 = 100_000_000;

/// Default number of random extra codewords checked per coset.
pub const SAMPLES_PER_COSET: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    p: u64,
    l: u32,
    s: u32,
    n: u64,
    q: u64,
    length: u64,
    e: u64,
    m: u32,
}

impl CodeSpec {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// The N with theta = gamma^N.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn dimension(&self) -> u32 {
        self.s / self.l
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn theta(&self, f: &FieldDesc) -> FieldElem {
        f.pow(f.gamma(), self.n)
    }

    fn pl(&self) -> u64 {
        self.p.pow(self.l)
    }
}

pub fn build_code(p: u64, l: u32, s: u32, n: u64) -> Result<CodeSpec> {
    if !is_prime(p) || (p % 8 != 3 && p % 8 != 5) {
        return Err(Error::instance(format!("p must be a prime = 3 or 5 mod 8, got {p}")));
    }
    if l == 0 || s == 0 || !s.is_multiple_of(l) {
        return Err(Error::instance(format!("l = {l} must divide s = {s}")));
    }
    let q = p
        .checked_pow(s)
        .ok_or_else(|| Error::instance(format!("{p}^{s} does not fit in 64 bits")))?;
    if n == 0 || (q - 1) % n != 0 {
        return Err(Error::instance(format!("N = {n} does not divide q - 1 = {}", q - 1)));
    }
    let pl = p.pow(l);
    let e = n.gcd(&((q - 1) / (pl - 1)));
    if !e.is_power_of_two() || e < 8 {
        return Err(Error::instance(format!("gcd(N, (q-1)/(p^l-1)) = {e} is not 2^m with m >= 3")));
    }
    let length = (q - 1) / n;
    let order = multiplicative_order(pl, length)
        .ok_or_else(|| Error::instance(format!("p^l is not invertible modulo {length}")))?;
    if order != (s / l) as u64 {
        return Err(Error::instance(format!(
            "order of p^l modulo {length} is {order}, not s/l = {}",
            s / l
        )));
    }
    Ok(CodeSpec { p, l, s, n, q, length, e, m: e.trailing_zeros() })
}

fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if a.gcd(&n) != 1 {
        return None;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * a as u128 % n as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// Hamming weight of c(beta), by evaluating every coordinate.
pub fn codeword_weight(f: &FieldDesc, c: &CodeSpec, beta: &FieldElem) -> Result<u64> {
    let map = f.rel_trace_map(c.l)?;
    let theta = c.theta(f);
    Ok(weight_with(f, c.length, &map, theta.coeffs(), beta.coeffs()))
}

fn weight_with(f: &FieldDesc, length: u64, map: &crate::ffield::RelTraceMap, theta: &[u64], beta: &[u64]) -> u64 {
    let s = beta.len();
    let mut y = beta.to_vec();
    let mut tmp = vec![0u64; s];
    let mut scratch = vec![0u64; 2 * s];
    let mut w = 0;
    for _ in 0..length {
        if map.is_nonzero(&y) {
            w += 1;
        }
        f.mul_into(theta, &y, &mut tmp, &mut scratch);
        std::mem::swap(&mut y, &mut tmp);
    }
    w
}

/// (p^l - 1)(q - eta*) / (p^l N), required to be an integer in [0, length].
pub fn weight_from_period(c: &CodeSpec, eta_star: &BigInt) -> Result<u64> {
    let pl = BigInt::from(c.pl());
    let num = (&pl - 1u32) * (BigInt::from(c.q) - eta_star);
    let (w, rem) = num.div_rem(&(&pl * c.n));
    if !rem.is_zero() {
        return Err(Error::inconsistent(format!("period {eta_star} gives a non-integral weight")));
    }
    w.to_u64()
        .filter(|w| *w <= c.length)
        .ok_or_else(|| Error::inconsistent(format!("period {eta_star} gives weight {w} outside [0, {}]", c.length)))
}

/// Weight -> number of codewords.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightEnumerator {
    counts: BTreeMap<u64, u64>,
    sampled: bool,
}

impl WeightEnumerator {
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// True when built from coset representatives rather than every codeword.
    pub fn is_sampled(&self) -> bool {
        self.sampled
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn total_weight(&self) -> u128 {
        self.counts.iter().map(|(w, k)| *w as u128 * *k as u128).sum()
    }

    fn add(&mut self, weight: u64, count: u64) {
        *self.counts.entry(weight).or_insert(0) += count;
    }

    fn merge(mut self, other: Self) -> Self {
        for (w, k) in other.counts {
            self.add(w, k);
        }
        self
    }

    /// Same counts, ignoring how they were obtained.
    pub fn same_counts(&self, other: &Self) -> bool {
        self.counts == other.counts
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, k) in &self.counts {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (*w, *k) {
                (0, k) => write!(f, "{k}")?,
                (1, 1) => write!(f, "X")?,
                (1, k) => write!(f, "{k}X")?,
                (w, 1) => write!(f, "X^{w}")?,
                (w, k) => write!(f, "{k}X^{w}")?,
            }
        }
        Ok(())
    }
}

/// sum_w a_w w = length * (q - q/p^l): each coordinate vanishes for
/// exactly q/p^l values of beta.
pub fn total_weight_identity(c: &CodeSpec, en: &WeightEnumerator) -> bool {
    en.total_weight() == c.length as u128 * (c.q - c.q / c.pl()) as u128
}

/// Enumerates every codeword.
pub fn weight_distribution_full(f: &FieldDesc, c: &CodeSpec, budget: u64, strategy: Strategy) -> Result<WeightEnumerator> {
    check_field(f, c)?;
    let work = c.q as u128 * c.length as u128;
    if work > budget as u128 {
        return Err(Error::Budget(format!("full enumeration needs {work} trace tests, budget is {budget}")));
    }
    let map = f.rel_trace_map(c.l)?;
    let theta = c.theta(f);
    let en = fold_chunks(
        strategy,
        c.q,
        256,
        WeightEnumerator::default,
        |mut acc, range| {
            for idx in range {
                let beta = f.element(idx);
                acc.add(weight_with(f, c.length, &map, theta.coeffs(), beta.coeffs()), 1);
            }
            acc
        },
        WeightEnumerator::merge,
    );
    Ok(en)
}

/// Per-coset weights from gamma^j plus random members of each coset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativeReport {
    /// Weight of c(gamma^j) for j = 0..e.
    pub coset_weights: Vec<u64>,
    /// Enumeration indices and weights of the sampled extra beta, per coset.
    pub samples: Vec<Vec<(u64, u64)>>,
    pub enumerator: WeightEnumerator,
}

/// One representative gamma^j per coset of the e-th powers plus
/// `samples_per_coset` random members each; every coset member must give the
/// same weight, and the enumerator gives each coset (q-1)/e codewords.
pub fn weight_distribution_representative(
    f: &FieldDesc,
    c: &CodeSpec,
    samples_per_coset: usize,
    seed: u64,
) -> Result<RepresentativeReport> {
    check_field(f, c)?;
    let map = f.rel_trace_map(c.l)?;
    let theta = c.theta(f);
    let weight = |b: &FieldElem| weight_with(f, c.length, &map, theta.coeffs(), b.coeffs());
    let e = c.e;
    let mut coset_weights = Vec::with_capacity(e as usize);
    let mut g = f.one();
    for _ in 0..e {
        coset_weights.push(weight(&g));
        g = f.mul(&g, f.gamma());
    }
    let mut samples = vec![Vec::new(); e as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining = e as usize * samples_per_coset;
    let mut attempts = 0u64;
    while remaining > 0 {
        attempts += 1;
        if attempts > 1000 * (e * samples_per_coset as u64 + 1) {
            return Err(Error::inconsistent("random sampling failed to reach every coset"));
        }
        let idx = rng.gen_range(1..c.q);
        let beta = f.element(idx);
        let j = coset_index(f, e, &beta)? as usize;
        if samples[j].len() == samples_per_coset {
            continue;
        }
        let w = weight(&beta);
        if w != coset_weights[j] {
            return Err(Error::inconsistent(format!(
                "beta #{idx} in coset {j} has weight {w}, representative has {}",
                coset_weights[j]
            )));
        }
        samples[j].push((idx, w));
        remaining -= 1;
    }
    let mut enumerator = WeightEnumerator { counts: BTreeMap::new(), sampled: true };
    enumerator.add(0, 1);
    for w in &coset_weights {
        enumerator.add(*w, (c.q - 1) / e);
    }
    Ok(RepresentativeReport { coset_weights, samples, enumerator })
}

fn check_field(f: &FieldDesc, c: &CodeSpec) -> Result<()> {
    if f.p() != c.p || f.s() != c.s {
        return Err(Error::input(format!("field {}^{} does not match code over {}^{}", f.p(), f.s(), c.p, c.s)));
    }
    Ok(())
}

/// The partitions the closed-form enumerator of `c` needs.
pub fn code_partitions(c: &CodeSpec) -> Result<Partitions> {
    let tag = classify(c.p, c.s, c.m)?;
    match tag.case() {
        Case::ThreeFullSplit | Case::ThreeOrder8Split | Case::FiveFullSplit => partitions_for_instance(&tag),
        other => Err(Error::inconsistent(format!("code instance classified as {other}"))),
    }
}

/// Integer q-powers and partition sums for the closed-form enumerator.
struct Coeffs<'a> {
    p: u64,
    s: u32,
    parts: &'a Partitions,
}

impl Coeffs<'_> {
    fn q(&self, num: u64, den: u64) -> Result<BigInt> {
        let n = self.s as u64 * num;
        if !n.is_multiple_of(den) {
            return Err(Error::inconsistent(format!("q^({num}/{den}) is not an integer")));
        }
        Ok(BigInt::from(self.p).pow((n / den) as u32))
    }

    fn sum_a(&self, t: u32) -> Result<BigInt> {
        (3..=t)
            .map(|r| Ok((BigInt::one() << (r - 1)) * self.parts.a(r)? * self.q((1 << (r - 2)) - 1, 1 << (r - 1))?))
            .sum()
    }

    fn sum_c(&self, t: u32) -> Result<BigInt> {
        (2..=t).map(|r| Ok((BigInt::one() << (r - 1)) * self.parts.c(r)? * self.q((1 << (r - 1)) - 1, 1 << r)?)).sum()
    }
}

/// The weight enumerator in closed form: each term is (q-1)/2^k codewords
/// of weight (p^l - 1) * x / (p^l N).
pub fn enumerator_closed_form(c: &CodeSpec, parts: &Partitions) -> Result<WeightEnumerator> {
    let k = Coeffs { p: c.p, s: c.s, parts };
    let m = c.m;
    let q = k.q(1, 1)?;
    let h = k.q(1, 2)?;
    let pow2 = |j: u32| BigInt::one() << j;
    // (log2 of the coefficient denominator, x)
    let mut terms: Vec<(u32, BigInt)> = Vec::new();
    let pm = |terms: &mut Vec<(u32, BigInt)>, den: u32, base: BigInt, delta: BigInt| {
        terms.push((den, &base + &delta));
        terms.push((den, base - delta));
    };
    if c.p % 8 == 3 {
        let b3 = 4 * parts.b(3)? * k.q(1, 4)?;
        if m == 3 {
            terms.push((2, &q - &h));
            pm(&mut terms, 2, &q - &h, b3);
            pm(&mut terms, 3, &q + 3 * &h, 4 * parts.a(3)? * k.q(1, 4)?);
        } else {
            pm(&mut terms, 2, &q - &h, b3);
            pm(&mut terms, 3, &q - &h, 8 * parts.b(4)? * k.q(3, 8)?);
            for t in 2..=m - 3 {
                let base = &q + 3 * &h - k.sum_a(t)? + pow2(t) * parts.a(t + 1)? * k.q((1 << (t - 1)) - 1, 1 << t)?;
                let delta = pow2(t + 2) * parts.b(t + 3)? * k.q((1 << (t + 1)) - 1, 1 << (t + 2))?;
                pm(&mut terms, t + 2, base, delta);
            }
            let x = &q + 3 * &h - k.sum_a(m - 2)? + pow2(m - 2) * parts.a(m - 1)? * k.q((1 << (m - 3)) - 1, 1 << (m - 2))?;
            terms.push((m - 1, x));
            let base = &q + 3 * &h - k.sum_a(m - 1)?;
            pm(&mut terms, m, base, pow2(m - 1) * parts.a(m)? * k.q((1 << (m - 2)) - 1, 1 << (m - 1))?);
        }
    } else {
        pm(&mut terms, 2, &q - &h, 2 * parts.d(2)? * k.q(1, 4)?);
        for t in 1..=m - 2 {
            let base = &q + &h - k.sum_c(t)? + pow2(t) * parts.c(t + 1)? * k.q((1 << t) - 1, 1 << (t + 1))?;
            let delta = pow2(t + 1) * parts.d(t + 2)? * k.q((1 << (t + 1)) - 1, 1 << (t + 2))?;
            pm(&mut terms, t + 2, base, delta);
        }
        let base = &q + &h - k.sum_c(m - 1)?;
        pm(&mut terms, m, base, pow2(m - 1) * parts.c(m)? * k.q((1 << (m - 1)) - 1, 1 << m)?);
    }

    let pl = BigInt::from(c.pl());
    let mut en = WeightEnumerator::default();
    en.add(0, 1);
    for (den, x) in terms {
        let (count, rem) = (&q - 1u32).div_rem(&pow2(den));
        if !rem.is_zero() {
            return Err(Error::inconsistent(format!("(q-1)/2^{den} is not an integer")));
        }
        let (w, rem) = ((&pl - 1u32) * &x).div_rem(&(&pl * c.n));
        if !rem.is_zero() || w > BigInt::from(c.length) || w < BigInt::zero() {
            return Err(Error::inconsistent(format!("weight term {x} does not give an integer weight in range")));
        }
        en.add(w.to_u64().expect("bounded by length"), count.to_u64().expect("bounded by q"));
    }
    if en.total() != c.q {
        return Err(Error::inconsistent(format!("enumerator counts {} codewords, not {}", en.total(), c.q)));
    }
    Ok(en)
}
