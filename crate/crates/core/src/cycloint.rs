//! Exact arithmetic in Z[zeta_p] and Z[X].
//!
//! A [`CycloInt`] stores coordinates on the power basis 1, zeta, ..., zeta^{p-2};
//! zeta^{p-1} is rewritten as -(1 + zeta + ... + zeta^{p-2}). Because this basis
//! is a Z-basis of Z[zeta_p], equality of values is equality of vectors.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloInt {
    p: u64,
    coords: Vec<BigInt>,
}

impl CycloInt {
    pub fn zero(p: u64) -> Self {
        CycloInt { p, coords: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn from_integer(p: u64, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = n.into();
        z
    }

    /// zeta_p^k for any k.
    pub fn zeta_pow(p: u64, k: u64) -> Self {
        let mut counts = vec![0u64; p as usize];
        counts[(k % p) as usize] = 1;
        Self::from_counts(p, &counts)
    }

    /// sum_c counts[c] * zeta^c for c = 0..p-1, reduced to canonical coordinates.
    pub fn from_counts(p: u64, counts: &[u64]) -> Self {
        debug_assert_eq!(counts.len(), p as usize);
        let top = BigInt::from(counts[(p - 1) as usize]);
        let coords = counts[..(p - 1) as usize].iter().map(|&c| BigInt::from(c) - &top).collect();
        CycloInt { p, coords }
    }

    /// Canonical coordinates from an arbitrary vector of exponents 0..p-1.
    fn from_full(p: u64, mut full: Vec<BigInt>) -> Self {
        let top = full.pop().unwrap_or_default();
        if !top.is_zero() {
            for c in &mut full {
                *c -= &top;
            }
        }
        CycloInt { p, coords: full }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational_integer(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.is_rational_integer().then(|| &self.coords[0])
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::input(format!("mixing Z[zeta_{}] and Z[zeta_{}]", self.p, other.p)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(CycloInt { p: self.p, coords })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(CycloInt { p: self.p, coords })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycloInt { p: self.p, coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// Exact division by an integer; `None` unless every coordinate is divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coords.push(q);
        }
        Some(CycloInt { p: self.p, coords })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let p = self.p as usize;
        // multiply modulo X^p - 1 first, then reduce by Phi_p
        let mut full = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % p] += a * b;
                }
            }
        }
        Ok(Self::from_full(self.p, full))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = Self::from_integer(self.p, 1);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same ring");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        result
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{sign}{mag}")?,
                (_, true) => write!(f, "{sign}z^{k}")?,
                (_, false) => write!(f, "{sign}{mag}*z^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Polynomial with integer coefficients, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// X - root.
    pub fn linear(root: &BigInt) -> Self {
        Self::new(vec![-root, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Integer value at an integer point (Horner).
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact Horner evaluation in Z[zeta_p].
    pub fn eval_at(&self, z: &CycloInt) -> CycloInt {
        let mut acc = CycloInt::zero(z.p());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).expect("same ring");
            acc.coords[0] += c;
        }
        acc
    }

    /// self(a X + b).
    pub fn compose_linear(&self, a: &BigInt, b: &BigInt) -> Self {
        let lin = Self::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }

    /// Exact division of every coefficient by k.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(out))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = match (c.is_negative(), first) {
                (true, true) => "-",
                (true, false) => " - ",
                (false, true) => "",
                (false, false) => " + ",
            };
            let mag = c.abs();
            let coeff = if mag.is_one() && k > 0 { String::new() } else { mag.to_string() };
            let mono = match k {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{k}"),
            };
            let sep = if !coeff.is_empty() && !mono.is_empty() { "*" } else { "" };
            write!(f, "{sign}{coeff}{sep}{mono}")?;
            first = false;
        }
        Ok(())
    }
}

/// Product of monic factors with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactoredPoly {
    factors: Vec<(IntPoly, u32)>,
}

impl FactoredPoly {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a factor, merging with an identical one already present.
    /// Multiplicity zero is dropped.
    pub fn push(&mut self, factor: IntPoly, mult: u32) {
        if mult == 0 {
            return;
        }
        debug_assert!(factor.is_monic(), "factor {factor} is not monic");
        match self.factors.iter_mut().find(|(f, _)| *f == factor) {
            Some((_, m)) => *m += mult,
            None => self.factors.push((factor, mult)),
        }
    }

    pub fn factors(&self) -> &[(IntPoly, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(f, m)| f.degree().unwrap_or(0) * *m as usize).sum()
    }

    pub fn expand(&self) -> IntPoly {
        self.factors.iter().fold(IntPoly::one(), |acc, (f, m)| acc.mul(&f.pow(*m)))
    }

    /// Sorted by degree then coefficients, for stable display.
    pub fn sorted(&self) -> Self {
        let mut factors = self.factors.clone();
        factors.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
        FactoredPoly { factors }
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(poly, m)| if *m == 1 { format!("({poly})") } else { format!("({poly})^{m}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Monic polynomial whose roots have the given power sums s_1..s_e, via
/// n*sigma_n = sum_{i=1}^{n} (-1)^{i-1} s_i sigma_{n-i}.
pub fn newton_from_power_sums(sums: &[BigInt]) -> Result<IntPoly> {
    let e = sums.len();
    let mut sigma = vec![BigInt::one()];
    for n in 1..=e {
        let mut acc = BigInt::zero();
        for i in 1..=n {
            let term = &sums[i - 1] * &sigma[n - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(n));
        if !r.is_zero() {
            return Err(Error::inconsistent(format!(
                "power sums are not those of algebraic integers: {n} does not divide n*sigma_{n}"
            )));
        }
        sigma.push(q);
    }
    // X^e - sigma_1 X^{e-1} + sigma_2 X^{e-2} - ...
    let mut coeffs = vec![BigInt::zero(); e + 1];
    for (k, s) in sigma.into_iter().enumerate() {
        coeffs[e - k] = if k % 2 == 0 { s } else { -s };
    }
    Ok(IntPoly::new(coeffs))
}

/// Power sums s_1..s_n of a polynomial's roots (the inverse of Newton's identities).
pub fn power_sums_of(poly: &IntPoly, n: usize) -> Vec<BigInt> {
    let e = poly.degree().unwrap_or(0);
    let c = poly.coeffs();
    // sigma_k = (-1)^k c_{e-k}
    let sigma = |k: usize| -> BigInt {
        if k > e {
            BigInt::zero()
        } else if k.is_multiple_of(2) {
            c[e - k].clone()
        } else {
            -c[e - k].clone()
        }
    };
    let mut sums: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        // s_k = sum_{i=1}^{k-1} (-1)^{i-1} sigma_i s_{k-i} + (-1)^{k-1} k sigma_k
        let mut acc = BigInt::zero();
        for i in 1..k {
            let term = sigma(i) * &sums[k - i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = sigma(k) * BigInt::from(k);
        if k % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        sums.push(acc);
    }
    sums
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn cyclo(p: u64, coords: &[i64]) -> CycloInt {
        CycloInt { p, coords: coords.iter().map(|&c| big(c)).collect() }
    }

    #[test]
    fn phi3_reduction() {
        let z = CycloInt::zeta_pow(3, 1);
        assert_eq!(z.mul(&z).unwrap(), cyclo(3, &[-1, -1]));
    }

    #[test]
    fn vanishing_sum_of_roots() {
        let sum = (0..5)
            .map(|k| CycloInt::zeta_pow(5, k))
            .try_fold(CycloInt::zero(5), |acc, z| acc.add(&z))
            .unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn zeta_to_the_p_is_one() {
        for p in [2, 3, 5, 7, 11, 13] {
            assert_eq!(CycloInt::zeta_pow(p, 1).pow(p as u32), CycloInt::from_integer(p, 1));
        }
        assert_eq!(CycloInt::zeta_pow(2, 1), CycloInt::from_integer(2, -1));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = CycloInt::zero(3);
        let b = CycloInt::zero(5);
        assert!(matches!(a.mul(&b), Err(Error::InvalidInput(_))));
        assert!(matches!(a.add(&b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn evaluation() {
        let z = cyclo(5, &[1, 2, 0, -3]);
        assert_eq!(IntPoly::x().eval_at(&z), z);
        let p = IntPoly::from_i64s(&[-9, 0, 1]);
        assert!(p.eval_at(&CycloInt::from_integer(7, 3)).is_zero());
        assert_eq!(p.eval(&big(-3)), big(0));
    }

    #[test]
    fn newton_small_cases() {
        assert_eq!(newton_from_power_sums(&[big(0), big(2)]).unwrap(), IntPoly::from_i64s(&[-1, 0, 1]));
        assert_eq!(newton_from_power_sums(&[big(0), big(18)]).unwrap(), IntPoly::from_i64s(&[-9, 0, 1]));
        assert!(matches!(newton_from_power_sums(&[big(0), big(1)]), Err(Error::Inconsistency(_))));
    }

    #[test]
    fn newton_on_q81_spectrum() {
        // Roots {33 x4, -15 x6, -39 +- 24 sqrt3 i, 9 +- 24 sqrt3 i (x2)}, power sums
        // by exact arithmetic in Z[sqrt(-3)] (pairs (a, b) meaning a + b sqrt(-3)).
        let mut roots: Vec<(i64, i64, usize)> = vec![(33, 0, 4), (-15, 0, 6)];
        roots.extend([(-39, 24, 1), (-39, -24, 1), (9, 24, 2), (9, -24, 2)]);
        let sums: Vec<BigInt> = (1..=16)
            .map(|n| {
                let mut total = (big(0), big(0));
                for &(a, b, mult) in &roots {
                    let (mut x, mut y) = (big(1), big(0));
                    for _ in 0..n {
                        let nx = &x * a - &y * b * 3;
                        let ny = &x * b + &y * a;
                        x = nx;
                        y = ny;
                    }
                    total.0 += x * mult;
                    total.1 += y * mult;
                }
                assert_eq!(total.1, big(0));
                total.0
            })
            .collect();
        let via_newton = newton_from_power_sums(&sums).unwrap();
        let mut fp = FactoredPoly::new();
        fp.push(IntPoly::from_i64s(&[15, 1]), 6);
        fp.push(IntPoly::from_i64s(&[-33, 1]), 4);
        fp.push(IntPoly::from_i64s(&[39 * 39 + 1728, 78, 1]), 1);
        fp.push(IntPoly::from_i64s(&[81 + 1728, -18, 1]), 2);
        assert_eq!(via_newton, fp.expand());
        assert_eq!(power_sums_of(&via_newton, 16), sums);
    }

    #[test]
    fn expand_examples() {
        let mut a = FactoredPoly::new();
        a.push(IntPoly::from_i64s(&[-1, 1]), 2);
        assert_eq!(a.expand(), IntPoly::from_i64s(&[1, -2, 1]));
        let mut b = FactoredPoly::new();
        b.push(IntPoly::from_i64s(&[-4, 1]), 2);
        b.push(IntPoly::from_i64s(&[8, 1]), 1);
        assert_eq!(b.expand(), IntPoly::from_i64s(&[128, -48, 0, 1]));
        assert_eq!(b.degree(), 3);
        b.push(IntPoly::from_i64s(&[-4, 1]), 1);
        assert_eq!(b.factors().len(), 2);
        assert_eq!(b.degree(), 4);
    }

    #[test]
    fn compose_linear_and_display() {
        let p = IntPoly::from_i64s(&[-9, 0, 1]);
        // (2X+1)^2 - 9 = 4X^2 + 4X - 8
        assert_eq!(p.compose_linear(&big(2), &big(1)), IntPoly::from_i64s(&[-8, 4, 4]));
        assert_eq!(p.to_string(), "X^2 - 9");
        assert_eq!(cyclo(5, &[1, 0, -2, 0]).to_string(), "1-2*z^2");
    }

    fn arb_cyclo(p: u64) -> impl Strategy<Value = CycloInt> {
        proptest::collection::vec(-50i64..50, (p - 1) as usize).prop_map(move |c| cyclo(p, &c))
    }

    fn arb_triple() -> impl Strategy<Value = (CycloInt, CycloInt, CycloInt)> {
        prop_oneof![Just(3u64), Just(5), Just(11), Just(13)]
            .prop_flat_map(|p| (arb_cyclo(p), arb_cyclo(p), arb_cyclo(p)))
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn newton_round_trip(roots in proptest::collection::vec(-40i64..40, 1..10)) {
            let sums: Vec<BigInt> = (1..=roots.len() as u32)
                .map(|n| roots.iter().map(|&r| big(r).pow(n)).sum())
                .collect();
            let poly = newton_from_power_sums(&sums).unwrap();
            prop_assert!(poly.is_monic());
            prop_assert_eq!(poly.degree(), Some(roots.len()));
            for &r in &roots {
                prop_assert!(poly.eval(&big(r)).is_zero());
            }
        }

        #[test]
        fn expand_degree_is_additive(parts in proptest::collection::vec((proptest::collection::vec(-5i64..5, 0..3), 1u32..4), 0..5)) {
            let mut fp = FactoredPoly::new();
            for (low, m) in &parts {
                let mut c = low.clone();
                c.push(1);
                fp.push(IntPoly::from_i64s(&c), *m);
            }
            prop_assert_eq!(fp.expand().degree().unwrap_or(0), fp.degree());
        }
    }
}
