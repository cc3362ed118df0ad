//! Closed forms for reduced periods of order 2^m when p = 3 or 5 (mod 8):
//! case classification, symbolic spectra, factorizations of P*_{2^m} into
//! irreducible integer polynomials, diagonal-equation counts, plus the
//! semiprimitive family and the two characteristic-specific families.

use crate::cycloint::{CycloInt, FactoredPoly, IntPoly};
use crate::error::{Error, Result};
use crate::ffield::is_prime;
use crate::quadpart::Partitions;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Which closed form applies. `v` below is the exact power of 2 dividing s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    /// p = 3 mod 8, m >= 4, v >= m - 1: every period is rational.
    ThreeFullSplit,
    /// p = 3 mod 8, m >= 5, v = m - 2.
    ThreeHalfSplit,
    /// p = 3 mod 8, m = 4, v = 2.
    ThreeOrder16,
    /// p = 3 mod 8, m = 3, v >= 2.
    ThreeOrder8Split,
    /// p = 3 mod 8, m = 3, v = 1.
    ThreeOrder8,
    /// p = 3 mod 8, m = 2; 4 divides p + 1 so this is semiprimitive.
    ThreeOrder4,
    /// p = 5 mod 8, v >= m: every period is rational.
    FiveFullSplit,
    /// p = 5 mod 8, m >= 3, v = m - 1.
    FiveHalfSplit,
    /// p = 5 mod 8, m >= 4, v = m - 2.
    FiveQuartic,
    /// p = 5 mod 8, m = 3, v = 1.
    FiveOrder8Quartic,
    /// p = 5 mod 8, m = 2, v = 1.
    FiveOrder4Quadratic,
    /// p = 5 mod 8, m = 2, s odd: P*_4 is irreducible and no closed form is given.
    FiveOrder4Irreducible,
}

impl Case {
    pub fn label(self) -> &'static str {
        match self {
            Case::ThreeFullSplit => "three-full-split",
            Case::ThreeHalfSplit => "three-half-split",
            Case::ThreeOrder16 => "three-order16",
            Case::ThreeOrder8Split => "three-order8-split",
            Case::ThreeOrder8 => "three-order8",
            Case::ThreeOrder4 => "three-order4",
            Case::FiveFullSplit => "five-full-split",
            Case::FiveHalfSplit => "five-half-split",
            Case::FiveQuartic => "five-quartic",
            Case::FiveOrder8Quartic => "five-order8-quartic",
            Case::FiveOrder4Quadratic => "five-order4-quadratic",
            Case::FiveOrder4Irreducible => "five-order4-irreducible",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseTag {
    p: u64,
    s: u32,
    m: u32,
    case: Case,
}

impl CaseTag {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn e(&self) -> u64 {
        1 << self.m
    }

    /// Indices r of the partitions the closed forms use.
    pub fn partition_ranks(&self) -> Vec<u32> {
        let m = self.m;
        match self.case {
            Case::ThreeFullSplit | Case::ThreeHalfSplit => (3..=m).collect(),
            Case::ThreeOrder16 => vec![3, 4],
            Case::ThreeOrder8Split | Case::ThreeOrder8 => vec![3],
            Case::ThreeOrder4 | Case::FiveOrder4Irreducible => vec![],
            Case::FiveFullSplit | Case::FiveHalfSplit => (2..=m).collect(),
            Case::FiveQuartic => (2..m).collect(),
            Case::FiveOrder8Quartic | Case::FiveOrder4Quadratic => vec![2],
        }
    }
}

pub fn classify(p: u64, s: u32, m: u32) -> Result<CaseTag> {
    if !is_prime(p) {
        return Err(Error::input(format!("p = {p} is not prime")));
    }
    if p % 8 != 3 && p % 8 != 5 {
        return Err(Error::instance(format!("p must be 3 or 5 mod 8, got {p} = {} mod 8", p % 8)));
    }
    if s == 0 || m < 2 {
        return Err(Error::input(format!("need s >= 1 and m >= 2, got s = {s}, m = {m}")));
    }
    let q_minus_1 = BigUint::from(p).pow(s) - 1u32;
    let ord = q_minus_1.trailing_zeros().expect("q - 1 > 0");
    if ord < m as u64 {
        return Err(Error::instance(format!("2^{m} does not divide {p}^{s} - 1 (2-adic order {ord})")));
    }
    let v = s.trailing_zeros();
    let case = if p % 8 == 3 {
        match m {
            2 => Case::ThreeOrder4,
            3 if v >= 2 => Case::ThreeOrder8Split,
            3 => Case::ThreeOrder8,
            _ if v + 1 >= m => Case::ThreeFullSplit,
            4 => Case::ThreeOrder16,
            _ => Case::ThreeHalfSplit,
        }
    } else if v >= m {
        Case::FiveFullSplit
    } else if v + 1 == m {
        if m == 2 {
            Case::FiveOrder4Quadratic
        } else {
            Case::FiveHalfSplit
        }
    } else {
        match m {
            2 => Case::FiveOrder4Irreducible,
            3 => Case::FiveOrder8Quartic,
            _ => Case::FiveQuartic,
        }
    };
    Ok(CaseTag { p, s, m, case })
}

/// sqrt(2 * (p^(num/den) + shift)).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radical {
    num: u64,
    den: u64,
    shift: BigInt,
}

/// coeff * p^(num/den), optionally times i and a radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    coeff: BigInt,
    num: u64,
    den: u64,
    imag: bool,
    radical: Option<Radical>,
}

impl Term {
    pub fn coeff(&self) -> &BigInt {
        &self.coeff
    }

    /// The exponent of p as (numerator, denominator).
    pub fn exponent(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    pub fn is_imaginary(&self) -> bool {
        self.imag
    }

    pub fn radical(&self) -> Option<&Radical> {
        self.radical.as_ref()
    }

    fn key(&self) -> (bool, bool, u64, u64, Option<Radical>) {
        (self.radical.is_some(), self.imag, self.num * 4 / self.den, self.den, self.radical.clone())
    }

    fn imag(mut self) -> Self {
        self.imag = true;
        self
    }

    fn neg(mut self) -> Self {
        self.coeff = -self.coeff;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicPeriodValue {
    p: u64,
    terms: Vec<Term>,
}

impl SymbolicPeriodValue {
    fn new(p: u64, terms: Vec<Term>) -> Self {
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|u| u.num * t.den == t.num * u.den && u.imag == t.imag && u.radical == t.radical) {
                Some(u) => u.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        merged.sort_by_key(Term::key);
        SymbolicPeriodValue { p, terms: merged }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The value as an integer when it has no irrational part.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.terms.iter().any(|t| t.imag || t.radical.is_some() || t.den != 1) {
            return None;
        }
        Some(self.terms.iter().map(|t| &t.coeff * BigInt::from(self.p).pow(t.num as u32)).sum())
    }

    fn split(&self) -> Result<Split> {
        let p = self.p;
        let mut a = Qi::zero();
        let mut b = Qi::zero();
        let mut key: Option<(Radical, bool)> = None;
        for t in &self.terms {
            let mut base;
            match &t.radical {
                None => {
                    if 2 % t.den != 0 {
                        return Err(Error::inconsistent(format!("p^({}/{}) outside Z[sqrt p, i]", t.num, t.den)));
                    }
                    base = Qi::half_pow(p, 2 * t.num / t.den);
                }
                Some(rad) => {
                    let quarter = 4 * t.num % t.den == 0 && (4 * t.num / t.den) % 2 == 1;
                    base = if quarter {
                        Qi::half_pow(p, (4 * t.num / t.den - 1) / 2)
                    } else if 2 % t.den == 0 {
                        Qi::half_pow(p, 2 * t.num / t.den)
                    } else {
                        return Err(Error::inconsistent(format!("p^({}/{}) outside the radical ring", t.num, t.den)));
                    };
                    match &key {
                        Some(k) if *k != (rad.clone(), quarter) => {
                            return Err(Error::inconsistent("value with two different radicals"));
                        }
                        _ => key = Some((rad.clone(), quarter)),
                    }
                }
            }
            base = base.scale(&t.coeff);
            if t.imag {
                base = base.mul_i();
            }
            if t.radical.is_some() {
                b = b.add(&base);
            } else {
                a = a.add(&base);
            }
        }
        let square = match &key {
            None => None,
            Some((rad, quarter)) => {
                if 2 % rad.den != 0 {
                    return Err(Error::inconsistent("radicand outside Z[sqrt p]"));
                }
                let inner = Qi::half_pow(p, 2 * rad.num / rad.den).add(&Qi::int(rad.shift.clone())).scale(&BigInt::from(2));
                Some(if *quarter { inner.mul(&Qi::half_pow(p, 1), p) } else { inner })
            }
        };
        Ok(Split { a, b, key, square })
    }

    /// Exact image in Z[zeta_p] for values inside the quadratic subfield.
    ///
    /// sqrt(p) (p = 1 mod 4) or i sqrt(p) (p = 3 mod 4) is sent to the
    /// quadratic Gauss sum; the choice of square root is fixed by the Gauss
    /// sum sign, so only multisets of conjugate pairs compare meaningfully.
    pub fn to_cyclo(&self) -> Option<CycloInt> {
        let sp = self.split().ok()?;
        if sp.key.is_some() {
            return None;
        }
        let p = self.p;
        let [a, b, c, d] = &sp.a.0;
        let rational = CycloInt::from_integer(p, a.clone());
        let irrational = if p % 4 == 1 {
            if !c.is_zero() || !d.is_zero() {
                return None;
            }
            b
        } else {
            if !b.is_zero() || !c.is_zero() {
                return None;
            }
            d
        };
        if irrational.is_zero() {
            return Some(rational);
        }
        rational.add(&gauss_sum(p).scale(irrational)).ok()
    }
}

fn gauss_sum(p: u64) -> CycloInt {
    let exp = (p - 1) / 2;
    (1..p).fold(CycloInt::zero(p), |acc, a| {
        let ls = BigUint::from(a).modpow(&BigUint::from(exp), &BigUint::from(p));
        let z = CycloInt::zeta_pow(p, a);
        if ls.is_one() {
            acc.add(&z).expect("same ring")
        } else {
            acc.sub(&z).expect("same ring")
        }
    })
}

fn fmt_pow(p: u64, num: u64, den: u64) -> String {
    if den == 1 && num == 1 {
        format!("{p}")
    } else if den == 1 {
        format!("{p}^{num}")
    } else {
        format!("{p}^({num}/{den})")
    }
}

impl Term {
    fn write(&self, f: &mut fmt::Formatter<'_>, p: u64, abs: bool) -> fmt::Result {
        let c = if abs { self.coeff.abs() } else { self.coeff.clone() };
        if self.num == 0 {
            write!(f, "{c}")?;
        } else {
            match c.to_i8() {
                Some(1) => {}
                Some(-1) => write!(f, "-")?,
                _ => write!(f, "{c}*")?,
            }
            write!(f, "{}", fmt_pow(p, self.num, self.den))?;
        }
        if self.imag {
            write!(f, " * i")?;
        }
        if let Some(r) = &self.radical {
            let sign = if r.shift.is_negative() { '-' } else { '+' };
            write!(f, " * sqrt(2*({} {sign} {}))", fmt_pow(p, r.num, r.den), r.shift.abs())?;
        }
        Ok(())
    }
}

impl fmt::Display for SymbolicPeriodValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k == 0 {
                t.write(f, self.p, false)?;
            } else {
                write!(f, " {} ", if t.coeff.is_negative() { '-' } else { '+' })?;
                t.write(f, self.p, true)?;
            }
        }
        Ok(())
    }
}

/// The multiset of reduced periods, one entry per table row sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    q: BigInt,
    e: u64,
    entries: Vec<(SymbolicPeriodValue, u64)>,
}

impl Spectrum {
    pub fn entries(&self) -> &[(SymbolicPeriodValue, u64)] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, k)| k).sum()
    }

    /// Integer values with multiplicities merged, if every value is rational.
    pub fn rational_values(&self) -> Option<BTreeMap<BigInt, u64>> {
        let mut out = BTreeMap::new();
        for (v, k) in &self.entries {
            *out.entry(v.as_integer()?).or_insert(0) += k;
        }
        Some(out)
    }

    /// s_n = sum over entries of multiplicity * value^n for n = 1..=n_max,
    /// with every irrational part required to cancel.
    pub fn power_sums(&self, n_max: usize) -> Result<Vec<BigInt>> {
        let p = self.entries.first().map_or(2, |(v, _)| v.p);
        let mut base = vec![Qi::zero(); n_max];
        let mut radical: BTreeMap<(Radical, bool), Vec<Qi>> = BTreeMap::new();
        for (v, mult) in &self.entries {
            let sp = v.split()?;
            let k = BigInt::from(*mult);
            let (mut x, mut y) = (Qi::int(BigInt::one()), Qi::zero());
            for n in 0..n_max {
                let nx = match &sp.square {
                    Some(r) => x.mul(&sp.a, p).add(&y.mul(&sp.b, p).mul(r, p)),
                    None => x.mul(&sp.a, p),
                };
                let ny = x.mul(&sp.b, p).add(&y.mul(&sp.a, p));
                x = nx;
                y = ny;
                base[n] = base[n].add(&x.scale(&k));
                if let Some(key) = &sp.key {
                    let slot = radical.entry(key.clone()).or_insert_with(|| vec![Qi::zero(); n_max]);
                    slot[n] = slot[n].add(&y.scale(&k));
                }
            }
        }
        for (key, sums) in &radical {
            if let Some(n) = sums.iter().position(|s| !s.is_zero()) {
                return Err(Error::inconsistent(format!("radical part {key:?} survives in power sum {}", n + 1)));
            }
        }
        base.into_iter()
            .enumerate()
            .map(|(n, s)| {
                s.as_integer()
                    .ok_or_else(|| Error::inconsistent(format!("power sum {} is not rational", n + 1)))
            })
            .collect()
    }
}

/// An element a + b sqrt(p) + c i + d i sqrt(p).
#[derive(Debug, Clone, PartialEq, Eq)]
struct Qi([BigInt; 4]);

struct Split {
    a: Qi,
    b: Qi,
    key: Option<(Radical, bool)>,
    square: Option<Qi>,
}

impl Qi {
    fn zero() -> Self {
        Qi(Default::default())
    }

    fn int(n: BigInt) -> Self {
        let mut z = Self::zero();
        z.0[0] = n;
        z
    }

    /// p^(k/2).
    fn half_pow(p: u64, k: u64) -> Self {
        let mut z = Self::zero();
        z.0[(k % 2) as usize] = BigInt::from(p).pow((k / 2) as u32);
        z
    }

    fn add(&self, o: &Self) -> Self {
        Qi(std::array::from_fn(|k| &self.0[k] + &o.0[k]))
    }

    fn scale(&self, k: &BigInt) -> Self {
        Qi(std::array::from_fn(|j| &self.0[j] * k))
    }

    fn mul_i(&self) -> Self {
        let [a, b, c, d] = &self.0;
        Qi([-c, -d, a.clone(), b.clone()])
    }

    fn mul(&self, o: &Self, p: u64) -> Self {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        let p = BigInt::from(p);
        Qi([
            a * e + &p * b * f - c * g - &p * d * h,
            a * f + b * e - c * h - d * g,
            a * g + c * e + &p * (b * h + d * f),
            a * h + d * e + b * g + c * f,
        ])
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn as_integer(&self) -> Option<BigInt> {
        self.0[1..].iter().all(Zero::is_zero).then(|| self.0[0].clone())
    }
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// Builds table entries and factor coefficients from q-powers and partitions.
struct Ctx<'a> {
    p: u64,
    s: u32,
    parts: &'a Partitions,
}

impl Ctx<'_> {
    /// coeff * q^(num/den) as a symbolic term.
    fn t(&self, coeff: impl Into<BigInt>, num: u64, den: u64) -> Term {
        let (n, d) = (self.s as u64 * num, den);
        let g = n.gcd(&d).max(1);
        Term { coeff: coeff.into(), num: n / g, den: d / g, imag: false, radical: None }
    }

    fn value(&self, terms: Vec<Term>) -> SymbolicPeriodValue {
        SymbolicPeriodValue::new(self.p, terms)
    }

    /// q^(num/den) as an integer.
    fn qi(&self, num: u64, den: u64) -> Result<BigInt> {
        let n = self.s as u64 * num;
        if !n.is_multiple_of(den) {
            return Err(Error::inconsistent(format!("q^({num}/{den}) is not an integer for s = {}", self.s)));
        }
        Ok(BigInt::from(self.p).pow((n / den) as u32))
    }

    fn a(&self, r: u32) -> Result<BigInt> {
        self.parts.a(r).cloned()
    }

    fn b(&self, r: u32) -> Result<BigInt> {
        self.parts.b(r).cloned()
    }

    fn c(&self, r: u32) -> Result<BigInt> {
        self.parts.c(r).cloned()
    }

    fn d(&self, r: u32) -> Result<BigInt> {
        self.parts.d(r).cloned()
    }

    /// sum_{r=3}^{t} 2^{r-1} A_r q^{(2^{r-2}-1)/2^{r-1}}.
    fn sa_terms(&self, t: u32) -> Result<Vec<Term>> {
        (3..=t).map(|r| Ok(self.t(pow2(r - 1) * self.a(r)?, (1 << (r - 2)) - 1, 1 << (r - 1)))).collect()
    }

    /// sum_{r=2}^{t} 2^{r-1} C_r q^{(2^{r-1}-1)/2^r}.
    fn sc_terms(&self, t: u32) -> Result<Vec<Term>> {
        (2..=t).map(|r| Ok(self.t(pow2(r - 1) * self.c(r)?, (1 << (r - 1)) - 1, 1 << r))).collect()
    }

    fn sa(&self, t: u32) -> Result<BigInt> {
        (3..=t).map(|r| Ok(pow2(r - 1) * self.a(r)? * self.qi((1 << (r - 2)) - 1, 1 << (r - 1))?)).sum()
    }

    fn sc(&self, t: u32) -> Result<BigInt> {
        (2..=t).map(|r| Ok(pow2(r - 1) * self.c(r)? * self.qi((1 << (r - 1)) - 1, 1 << r)?)).sum()
    }

    /// -3 q^{1/2} + S_A(t) - 2^t A_{t+1} q^{(2^{t-1}-1)/2^t}.
    fn three_row(&self, t: u32) -> Result<Vec<Term>> {
        let mut v = vec![self.t(-3, 1, 2)];
        v.extend(self.sa_terms(t)?);
        v.push(self.t(-pow2(t) * self.a(t + 1)?, (1 << (t - 1)) - 1, 1 << t));
        Ok(v)
    }

    /// -q^{1/2} + S_C(t) - 2^t C_{t+1} q^{(2^t-1)/2^{t+1}}.
    fn five_row(&self, t: u32) -> Result<Vec<Term>> {
        let mut v = vec![self.t(-1, 1, 2)];
        v.extend(self.sc_terms(t)?);
        v.push(self.t(-pow2(t) * self.c(t + 1)?, (1 << t) - 1, 1 << (t + 1)));
        Ok(v)
    }
}

struct SpectrumBuilder<'a> {
    ctx: &'a Ctx<'a>,
    entries: Vec<(SymbolicPeriodValue, u64)>,
}

impl SpectrumBuilder<'_> {
    fn push(&mut self, terms: Vec<Term>, mult: u64) {
        self.entries.push((self.ctx.value(terms), mult));
    }

    /// base + pm and base - pm, each with multiplicity `mult`.
    fn pm(&mut self, base: Vec<Term>, pm: Term, mult: u64) {
        let mut plus = base.clone();
        plus.push(pm.clone());
        let mut minus = base;
        minus.push(pm.neg());
        self.push(plus, mult);
        self.push(minus, mult);
    }
}

/// The tabulated reduced periods of order 2^m.
pub fn spectrum(tag: &CaseTag, parts: &Partitions) -> Result<Spectrum> {
    let ctx = Ctx { p: tag.p, s: tag.s, parts };
    let mut sb = SpectrumBuilder { ctx: &ctx, entries: Vec::new() };
    let m = tag.m;
    let e = tag.e();
    let h = |c: i64| ctx.t(c, 1, 2);
    match tag.case {
        Case::ThreeFullSplit | Case::ThreeHalfSplit => {
            let half = tag.case == Case::ThreeHalfSplit;
            sb.pm(vec![h(1)], ctx.t(4 * ctx.b(3)?, 1, 4), e / 4);
            sb.pm(vec![h(1)], ctx.t(8 * ctx.b(4)?, 3, 8), e / 8);
            let last_t = if half { m - 4 } else { m - 3 };
            for t in 2..=last_t {
                let b = ctx.t(pow2(t + 2) * ctx.b(t + 3)?, (1 << (t + 1)) - 1, 1 << (t + 2));
                sb.pm(ctx.three_row(t)?, b, 1 << (m - t - 2));
            }
            if half {
                let b = ctx.t(pow2(m - 1) * ctx.b(m)?, (1 << (m - 2)) - 1, 1 << (m - 1)).imag();
                sb.pm(ctx.three_row(m - 3)?, b, 2);
            }
            sb.push(ctx.three_row(m - 2)?, 2);
            let mut base = vec![h(-3)];
            base.extend(ctx.sa_terms(m - 1)?);
            let mut last = ctx.t(pow2(m - 1) * ctx.a(m)?, (1 << (m - 2)) - 1, 1 << (m - 1));
            if half {
                last = last.imag();
            }
            sb.pm(base, last, 1);
        }
        Case::ThreeOrder16 => {
            sb.pm(vec![h(1)], ctx.t(4 * ctx.b(3)?, 1, 4), 4);
            sb.pm(vec![h(1)], ctx.t(8 * ctx.b(4)?, 3, 8).imag(), 2);
            sb.push(vec![h(-3), ctx.t(-4 * ctx.a(3)?, 1, 4)], 2);
            sb.pm(vec![h(-3), ctx.t(4 * ctx.a(3)?, 1, 4)], ctx.t(8 * ctx.a(4)?, 3, 8).imag(), 1);
        }
        Case::ThreeOrder8Split => {
            sb.push(vec![h(1)], 2);
            sb.pm(vec![h(1)], ctx.t(4 * ctx.b(3)?, 1, 4), 2);
            sb.pm(vec![h(-3)], ctx.t(4 * ctx.a(3)?, 1, 4), 1);
        }
        Case::ThreeOrder8 => {
            sb.push(vec![h(3)], 2);
            sb.pm(vec![h(-1)], ctx.t(4 * ctx.a(3)?, 1, 4).imag(), 1);
            sb.pm(vec![h(-1)], ctx.t(4 * ctx.b(3)?, 1, 4).imag(), 2);
        }
        Case::ThreeOrder4 => {
            let sign = if (tag.s / 2).is_multiple_of(2) { 1 } else { -1 };
            sb.push(vec![h(-3 * sign)], 1);
            sb.push(vec![h(sign)], 3);
        }
        Case::FiveFullSplit | Case::FiveHalfSplit | Case::FiveOrder4Quadratic => {
            sb.pm(vec![h(1)], ctx.t(2 * ctx.d(2)?, 1, 4), e / 4);
            for t in 1..=m - 2 {
                let d = ctx.t(pow2(t + 1) * ctx.d(t + 2)?, (1 << (t + 1)) - 1, 1 << (t + 2));
                sb.pm(ctx.five_row(t)?, d, 1 << (m - t - 2));
            }
            let mut base = vec![h(-1)];
            base.extend(ctx.sc_terms(m - 1)?);
            sb.pm(base, ctx.t(pow2(m - 1) * ctx.c(m)?, (1 << (m - 1)) - 1, 1 << m), 1);
        }
        Case::FiveQuartic | Case::FiveOrder8Quartic => {
            sb.pm(vec![h(1)], ctx.t(2 * ctx.d(2)?, 1, 4), e / 4);
            for t in 1..=m - 3 {
                let d = ctx.t(pow2(t + 1) * ctx.d(t + 2)?, (1 << (t + 1)) - 1, 1 << (t + 2));
                sb.pm(ctx.five_row(t)?, d, 1 << (m - t - 2));
            }
            let c = ctx.c(m - 1)?;
            let root = ctx.t(1, 1, 1 << (m - 1));
            for sign in [1i64, -1] {
                let mut base = vec![h(-1)];
                base.extend(ctx.sc_terms(m - 2)?);
                base.push(ctx.t(sign * pow2(m - 2) * &c, (1 << (m - 2)) - 1, 1 << (m - 1)));
                let mut rad = ctx.t(pow2(m - 2), (1 << (m - 1)) - 1, 1 << m).imag();
                rad.radical = Some(Radical { num: root.num, den: root.den, shift: -sign * &c });
                sb.pm(base, rad, 1);
            }
        }
        Case::FiveOrder4Irreducible => {
            return Err(Error::Unsupported(format!(
                "P*_4 for p = {} and odd s = {} is irreducible; no closed form is tabulated",
                tag.p, tag.s
            )));
        }
    }
    let sp = Spectrum { q: BigInt::from(tag.p).pow(tag.s), e, entries: sb.entries };
    if sp.total_multiplicity() != e {
        return Err(Error::inconsistent(format!("spectrum multiplicities sum to {}, not {e}", sp.total_multiplicity())));
    }
    Ok(sp)
}

fn x_plus(u: BigInt) -> IntPoly {
    IntPoly::new(vec![u, BigInt::one()])
}

/// (X + u)^2 + v.
fn square_plus(u: &BigInt, v: BigInt) -> IntPoly {
    IntPoly::new(vec![u * u + v, 2 * u, BigInt::one()])
}

/// P*_{2^m}(X) as a product of irreducible integer polynomials.
pub fn factorization(tag: &CaseTag, parts: &Partitions) -> Result<FactoredPoly> {
    match tag.case {
        Case::ThreeOrder4 => return semiprimitive_poly(tag.p, tag.s, 4),
        Case::FiveOrder4Irreducible => {
            return Err(Error::Unsupported(format!(
                "P*_4 for p = {} and odd s = {} is irreducible; no closed form is tabulated",
                tag.p, tag.s
            )));
        }
        _ => {}
    }
    let ctx = Ctx { p: tag.p, s: tag.s, parts };
    let m = tag.m;
    let e = tag.e() as u32;
    let h = ctx.qi(1, 2)?;
    let q = ctx.qi(1, 1)?;
    let mut out = FactoredPoly::new();
    // the split rows shared by the p = 3 mod 8 cases
    let q_t = |out: &mut FactoredPoly, t: u32| -> Result<()> {
        let u = 3 * &h - ctx.sa(t)? + pow2(t) * ctx.a(t + 1)? * ctx.qi((1 << (t - 1)) - 1, 1 << t)?;
        let v = pow2(t + 2) * ctx.b(t + 3)? * ctx.qi((1 << (t + 1)) - 1, 1 << (t + 2))?;
        out.push(x_plus(&u + &v), 1 << (m - t - 2));
        out.push(x_plus(&u - &v), 1 << (m - t - 2));
        Ok(())
    };
    let r_t = |out: &mut FactoredPoly, t: u32| -> Result<()> {
        let u = &h - ctx.sc(t)? + pow2(t) * ctx.c(t + 1)? * ctx.qi((1 << t) - 1, 1 << (t + 1))?;
        let v = pow2(t + 1) * ctx.d(t + 2)? * ctx.qi((1 << (t + 1)) - 1, 1 << (t + 2))?;
        out.push(x_plus(&u + &v), 1 << (m - t - 2));
        out.push(x_plus(&u - &v), 1 << (m - t - 2));
        Ok(())
    };
    match tag.case {
        Case::ThreeFullSplit | Case::ThreeHalfSplit => {
            let b3 = 4 * ctx.b(3)? * ctx.qi(1, 4)?;
            let b4 = 8 * ctx.b(4)? * ctx.qi(3, 8)?;
            for v in [&b3, &(-&b3)] {
                out.push(x_plus(v - &h), e / 4);
            }
            for v in [&b4, &(-&b4)] {
                out.push(x_plus(v - &h), e / 8);
            }
            let am1 = pow2(m - 2) * ctx.a(m - 1)? * ctx.qi((1 << (m - 3)) - 1, 1 << (m - 2))?;
            out.push(x_plus(3 * &h - ctx.sa(m - 2)? + am1), 2);
            let u = 3 * &h - ctx.sa(m - 1)?;
            if tag.case == Case::ThreeFullSplit {
                let am = pow2(m - 1) * ctx.a(m)? * ctx.qi((1 << (m - 2)) - 1, 1 << (m - 1))?;
                out.push(x_plus(&u + &am), 1);
                out.push(x_plus(&u - &am), 1);
                for t in 2..=m - 3 {
                    q_t(&mut out, t)?;
                }
            } else {
                let tail = ctx.qi((1 << (m - 2)) - 1, 1 << (m - 2))?;
                let am = pow2(2 * (m - 1)) * ctx.a(m)?.pow(2) * &tail;
                out.push(square_plus(&u, am), 1);
                let u2 = 3 * &h - ctx.sa(m - 3)? + pow2(m - 3) * ctx.a(m - 2)? * ctx.qi((1 << (m - 4)) - 1, 1 << (m - 3))?;
                let bm = pow2(2 * (m - 1)) * ctx.b(m)?.pow(2) * &tail;
                out.push(square_plus(&u2, bm), 2);
                for t in 2..=m - 4 {
                    q_t(&mut out, t)?;
                }
            }
        }
        Case::ThreeOrder16 => {
            let q14 = ctx.qi(1, 4)?;
            let q34 = ctx.qi(3, 4)?;
            let a3 = 4 * ctx.a(3)? * &q14;
            let b3 = 4 * ctx.b(3)? * &q14;
            out.push(x_plus(3 * &h + &a3), 2);
            out.push(x_plus(&b3 - &h), 4);
            out.push(x_plus(-&b3 - &h), 4);
            out.push(square_plus(&(3 * &h - &a3), 64 * ctx.a(4)?.pow(2) * &q34), 1);
            out.push(square_plus(&-&h, 64 * ctx.b(4)?.pow(2) * &q34), 2);
        }
        Case::ThreeOrder8Split => {
            let q14 = ctx.qi(1, 4)?;
            let a3 = 4 * ctx.a(3)? * &q14;
            let b3 = 4 * ctx.b(3)? * &q14;
            out.push(x_plus(-&h), 2);
            out.push(x_plus(&b3 - &h), 2);
            out.push(x_plus(-&b3 - &h), 2);
            out.push(x_plus(3 * &h + &a3), 1);
            out.push(x_plus(3 * &h - &a3), 1);
        }
        Case::ThreeOrder8 => {
            out.push(x_plus(-3 * &h), 2);
            out.push(square_plus(&h, 16 * ctx.a(3)?.pow(2) * &h), 1);
            out.push(square_plus(&h, 16 * ctx.b(3)?.pow(2) * &h), 2);
        }
        Case::FiveFullSplit => {
            let d2 = 2 * ctx.d(2)? * ctx.qi(1, 4)?;
            out.push(x_plus(&d2 - &h), e / 4);
            out.push(x_plus(-&d2 - &h), e / 4);
            let u = &h - ctx.sc(m - 1)?;
            let cm = pow2(m - 1) * ctx.c(m)? * ctx.qi((1 << (m - 1)) - 1, 1 << m)?;
            out.push(x_plus(&u + &cm), 1);
            out.push(x_plus(&u - &cm), 1);
            for t in 1..=m - 2 {
                r_t(&mut out, t)?;
            }
        }
        Case::FiveHalfSplit => {
            let d2 = 2 * ctx.d(2)? * ctx.qi(1, 4)?;
            out.push(x_plus(&d2 - &h), e / 4);
            out.push(x_plus(-&d2 - &h), e / 4);
            let tail = ctx.qi((1 << (m - 1)) - 1, 1 << (m - 1))?;
            let u = &h - ctx.sc(m - 1)?;
            out.push(square_plus(&u, -pow2(2 * (m - 1)) * ctx.c(m)?.pow(2) * &tail), 1);
            let u2 = &h - ctx.sc(m - 2)? + pow2(m - 2) * ctx.c(m - 1)? * ctx.qi((1 << (m - 2)) - 1, 1 << (m - 1))?;
            out.push(square_plus(&u2, -pow2(2 * (m - 1)) * ctx.d(m)?.pow(2) * &tail), 1);
            for t in 1..=m - 3 {
                r_t(&mut out, t)?;
            }
        }
        Case::FiveQuartic => {
            let d2 = 2 * ctx.d(2)? * ctx.qi(1, 4)?;
            out.push(x_plus(&d2 - &h), e / 4);
            out.push(x_plus(-&d2 - &h), e / 4);
            let tail = ctx.qi((1 << (m - 2)) - 1, 1 << (m - 2))?;
            let u = &h - ctx.sc(m - 3)? + pow2(m - 3) * ctx.c(m - 2)? * ctx.qi((1 << (m - 3)) - 1, 1 << (m - 2))?;
            out.push(square_plus(&u, -pow2(2 * (m - 2)) * ctx.d(m - 1)?.pow(2) * &tail), 2);
            let c = ctx.c(m - 1)?;
            let y = &h - ctx.sc(m - 2)?;
            let k = pow2(2 * (m - 2)) * c.pow(2) * &tail + pow2(2 * m - 3) * &q;
            let shifted = x_plus((pow2(m - 2) + 1) * &h - ctx.sc(m - 2)?);
            out.push(quartic(&y, k, pow2(2 * (m - 1)) * c.pow(2) * &tail, &shifted), 1);
            for t in 1..=m - 4 {
                r_t(&mut out, t)?;
            }
        }
        Case::FiveOrder8Quartic => {
            let (c2, d2) = (ctx.c(2)?, ctx.d(2)?);
            out.push(square_plus(&-&h, -4 * d2.pow(2) * &h), 2);
            let k = 4 * c2.pow(2) * &h + 8 * &q;
            out.push(quartic(&h, k, 16 * c2.pow(2) * &h, &x_plus(3 * &h)), 1);
        }
        Case::FiveOrder4Quadratic => {
            let (c2, d2) = (ctx.c(2)?, ctx.d(2)?);
            out.push(square_plus(&h, -4 * c2.pow(2) * &h), 1);
            out.push(square_plus(&-&h, -4 * d2.pow(2) * &h), 1);
        }
        Case::ThreeOrder4 | Case::FiveOrder4Irreducible => unreachable!("handled above"),
    }
    if out.degree() != e as usize {
        return Err(Error::inconsistent(format!("factorization has degree {}, not {e}", out.degree())));
    }
    Ok(out)
}

/// ((X + y)^2 + k)^2 - c * g^2.
fn quartic(y: &BigInt, k: BigInt, c: BigInt, g: &IntPoly) -> IntPoly {
    let inner = square_plus(y, k);
    inner.mul(&inner).sub(&g.mul(g).scale(&c))
}

/// N[x_1^{2^m} + ... + x_n^{2^m} = 0] from the tabulated spectrum.
pub fn counts_formula(tag: &CaseTag, parts: &Partitions, n: u32) -> Result<BigInt> {
    Ok(counts_formula_upto(tag, parts, n)?.pop().expect("n >= 1"))
}

/// The closed-form counts for n = 1..=n_max.
pub fn counts_formula_upto(tag: &CaseTag, parts: &Partitions, n_max: u32) -> Result<Vec<BigInt>> {
    if n_max == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    let sp = spectrum(tag, parts)?;
    let sums = sp.power_sums(n_max as usize)?;
    sums.iter()
        .zip(1..)
        .map(|(s, n)| crate::periods::diagonal_count_from_power_sum(&sp.q, sp.e, n, s))
        .collect()
}

/// P*_e when e divides p^v + 1 for some v:
/// (X + (-1)^{s/2v} (e-1) q^{1/2}) (X - (-1)^{s/2v} q^{1/2})^{e-1}.
pub fn semiprimitive_poly(p: u64, s: u32, e: u64) -> Result<FactoredPoly> {
    if !is_prime(p) || s == 0 {
        return Err(Error::input(format!("need a prime p and s >= 1, got p = {p}, s = {s}")));
    }
    if e <= 2 {
        return Err(Error::input(format!("semiprimitive form needs e > 2, got {e}")));
    }
    let mut pv = 1u64;
    let v = (1..=e).find(|_| {
        pv = (pv as u128 * p as u128 % e as u128) as u64;
        (pv + 1).is_multiple_of(e)
    });
    let Some(v) = v else {
        return Err(Error::NotSemiprimitive { p, s, e });
    };
    if !(s as u64).is_multiple_of(2 * v) {
        return Err(Error::instance(format!("e = {e} does not divide {p}^{s} - 1")));
    }
    let h = BigInt::from(p).pow(s / 2);
    let sign = if (s as u64 / (2 * v)).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let mut out = FactoredPoly::new();
    out.push(x_plus(&sign * (e - 1) * &h), 1);
    out.push(x_plus(-&sign * &h), (e - 1) as u32);
    Ok(out)
}

fn to_multiplicity(v: &BigInt) -> Result<u32> {
    v.to_u32().ok_or_else(|| Error::Budget(format!("multiplicity {v} does not fit in 32 bits")))
}

/// P*_e over F_{2^s} with e = (2^s - 1)/f, f prime and 2 a primitive root mod f.
pub fn binary_two_valued_poly(s: u32, f: u64) -> Result<FactoredPoly> {
    if !is_prime(f) || f == 2 {
        return Err(Error::input(format!("f must be an odd prime, got {f}")));
    }
    let q = BigInt::one() << s;
    if (&q - 1u32) % f != BigInt::zero() {
        return Err(Error::instance(format!("{f} does not divide 2^{s} - 1")));
    }
    let order = (1..f).scan(1u64, |acc, k| {
        *acc = *acc * 2 % f;
        Some((k, *acc))
    });
    if order.into_iter().find(|&(_, v)| v == 1).map(|(k, _)| k) != Some(f - 1) {
        return Err(Error::instance(format!("2 is not a primitive root modulo {f}")));
    }
    let e = (&q - 1u32) / f;
    let lead = BigInt::one() << (s as u64 + 1 - f);
    let mut out = FactoredPoly::new();
    let (e0, rem) = (&lead - 1u32).div_rem(&BigInt::from(f));
    if !rem.is_zero() {
        return Err(Error::inconsistent("leading exponent is not integral"));
    }
    out.push(IntPoly::linear(&q), to_multiplicity(&e0)?);
    let mut binom = BigInt::one();
    for k in 1..f {
        binom = binom * (f - k + 1) / k;
        if k % 2 == 1 {
            continue;
        }
        let j = k / 2;
        let (exp, rem) = (&lead * &binom).div_rem(&BigInt::from(f));
        if !rem.is_zero() {
            return Err(Error::inconsistent("exponent is not integral"));
        }
        out.push(IntPoly::linear(&(&q - 4 * j * &e)), to_multiplicity(&exp)?);
    }
    if BigInt::from(out.degree()) != e {
        return Err(Error::inconsistent("degree does not match e"));
    }
    Ok(out)
}

/// P*_e with e = (q-1)/(p^l - 1): (X - q)^{(e-1)/p^l} (X + e - 1)^{p^{s-l}}.
pub fn subfield_poly(p: u64, s: u32, l: u32) -> Result<FactoredPoly> {
    if !is_prime(p) || s == 0 || l == 0 {
        return Err(Error::input(format!("need a prime p and s, l >= 1, got p = {p}, s = {s}, l = {l}")));
    }
    if !s.is_multiple_of(l) {
        return Err(Error::input(format!("l = {l} does not divide s = {s}")));
    }
    let q = BigInt::from(p).pow(s);
    let pl = BigInt::from(p).pow(l);
    let e = (&q - 1u32) / (&pl - 1u32);
    let (lead, rem) = (&e - 1u32).div_rem(&pl);
    if !rem.is_zero() {
        return Err(Error::inconsistent("(e - 1)/p^l is not integral"));
    }
    let mut out = FactoredPoly::new();
    out.push(IntPoly::linear(&q), to_multiplicity(&lead)?);
    out.push(x_plus(&e - 1u32), to_multiplicity(&BigInt::from(p).pow(s - l))?);
    Ok(out)
}
