//! Representations p^k = A^2 + 2B^2 (p = 3 mod 8) and p^k = C^2 + D^2
//! (p = 5 mod 8), normalized by A, C = 3 mod 4 and p not dividing A, C.
//!
//! Both solvers search exhaustively and count every normalized survivor, so a
//! successful return is also a proof that the representation is unique.

use crate::closedform::CaseTag;
use crate::error::{Error, Result};
use crate::ffield::is_prime;
use crate::par::{fold_chunks, Strategy};
use num_bigint::BigInt;
use std::collections::BTreeMap;

const CHUNK: u64 = 1 << 20;

/// p^k = A^2 + 2B^2 with A = 3 mod 4, p not dividing A, B >= 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition2B2 {
    p: u64,
    k: u32,
    a: BigInt,
    b: BigInt,
}

impl Partition2B2 {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }
}

/// p^k = C^2 + D^2 with C = 3 mod 4, p not dividing C, D >= 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionD2 {
    p: u64,
    k: u32,
    c: BigInt,
    d: BigInt,
}

impl PartitionD2 {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }
}

/// The partitions indexed by r that a case needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Partitions {
    TwoB2(BTreeMap<u32, Partition2B2>),
    D2(BTreeMap<u32, PartitionD2>),
}

impl Partitions {
    pub fn a(&self, r: u32) -> Result<&BigInt> {
        self.two_b2(r).map(Partition2B2::a)
    }

    pub fn b(&self, r: u32) -> Result<&BigInt> {
        self.two_b2(r).map(Partition2B2::b)
    }

    pub fn c(&self, r: u32) -> Result<&BigInt> {
        self.d2(r).map(PartitionD2::c)
    }

    pub fn d(&self, r: u32) -> Result<&BigInt> {
        self.d2(r).map(PartitionD2::d)
    }

    fn two_b2(&self, r: u32) -> Result<&Partition2B2> {
        match self {
            Partitions::TwoB2(m) => m.get(&r),
            Partitions::D2(_) => None,
        }
        .ok_or_else(|| Error::inconsistent(format!("missing partition A_{r}, B_{r}")))
    }

    fn d2(&self, r: u32) -> Result<&PartitionD2> {
        match self {
            Partitions::D2(m) => m.get(&r),
            Partitions::TwoB2(_) => None,
        }
        .ok_or_else(|| Error::inconsistent(format!("missing partition C_{r}, D_{r}")))
    }
}

fn prime_power(p: u64, k: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::input("exponent k must be positive"));
    }
    (p as u128)
        .checked_pow(k)
        .filter(|n| *n < 1 << 124)
        .ok_or_else(|| Error::input(format!("{p}^{k} is too large for the exhaustive search")))
}

/// Signed value congruent to 3 mod 4 with the given absolute value, if any.
fn normalize(abs: u128, p: u64) -> Option<i128> {
    if abs.is_multiple_of(2) || abs.is_multiple_of(p as u128) {
        return None;
    }
    let v = abs as i128;
    Some(if abs % 4 == 3 { v } else { -v })
}

#[derive(Clone, Default)]
struct Survivors {
    count: usize,
    first: Option<(i128, u128)>,
}

impl Survivors {
    fn push(&mut self, x: i128, y: u128) {
        self.count += 1;
        self.first.get_or_insert((x, y));
    }

    fn merge(mut self, other: Survivors) -> Survivors {
        self.count += other.count;
        if self.first.is_none() {
            self.first = other.first;
        }
        self
    }
}

macro_rules! walk {
    ($t:ty, $n:expr, $weight:expr, $range:expr, $acc:expr, $hit:expr) => {{
        let (n, weight): ($t, $t) = ($n, $weight);
        let x0 = $range.start as $t;
        let mut wx2 = weight * x0 * x0;
        let mut y = (n - wx2).isqrt();
        let mut y2 = y * y;
        for x in $range {
            let x = x as $t;
            let rest = n - wx2;
            while y2 > rest {
                y2 -= 2 * y - 1;
                y -= 1;
            }
            if y2 == rest {
                $hit(&mut $acc, x as u128, y as u128);
            }
            wx2 += weight * (2 * x + 1);
        }
    }};
}

/// Walks x over [0, x_max] and calls `hit(x, y)` for every y >= 0 with
/// weight * x^2 + y^2 = n, keeping y as a decreasing pointer.
fn two_pointer<F>(strategy: Strategy, n: u128, weight: u128, x_max: u128, hit: F) -> Survivors
where
    F: Fn(&mut Survivors, u128, u128) + Sync,
{
    fold_chunks(
        strategy,
        x_max as u64 + 1,
        CHUNK,
        Survivors::default,
        |mut acc, range| {
            // u64 arithmetic is several times faster and covers n < 2^63
            if n < 1 << 63 {
                walk!(u64, n as u64, weight as u64, range, acc, hit);
            } else {
                walk!(u128, n, weight, range, acc, hit);
            }
            acc
        },
        Survivors::merge,
    )
}

pub fn solve_2b2(p: u64, k: u32) -> Result<Partition2B2> {
    solve_2b2_with(p, k, Strategy::default())
}

pub fn solve_2b2_with(p: u64, k: u32, strategy: Strategy) -> Result<Partition2B2> {
    let (survivors, _) = search_2b2(p, k, strategy)?;
    let (a, b) = unique(p, k, survivors)?;
    Ok(Partition2B2 { p, k, a: a.into(), b: b.into() })
}

/// Number of normalized representations p^k = A^2 + 2B^2, B >= 0.
pub fn count_2b2(p: u64, k: u32) -> Result<usize> {
    Ok(search_2b2(p, k, Strategy::default())?.0.count)
}

fn search_2b2(p: u64, k: u32, strategy: Strategy) -> Result<(Survivors, u128)> {
    if !is_prime(p) || p % 8 != 3 {
        return Err(Error::input(format!("A^2 + 2B^2 partitions need a prime p = 3 mod 8, got {p}")));
    }
    let n = prime_power(p, k)?;
    let survivors = two_pointer(strategy, n, 2, (n / 2).isqrt(), |acc, b, a| {
        if let Some(a) = normalize(a, p) {
            acc.push(a, b);
        }
    });
    Ok((survivors, n))
}

pub fn solve_d2(p: u64, k: u32) -> Result<PartitionD2> {
    solve_d2_with(p, k, Strategy::default())
}

pub fn solve_d2_with(p: u64, k: u32, strategy: Strategy) -> Result<PartitionD2> {
    let survivors = search_d2(p, k, strategy)?;
    let (c, d) = unique(p, k, survivors)?;
    Ok(PartitionD2 { p, k, c: c.into(), d: d.into() })
}

/// Number of normalized representations p^k = C^2 + D^2, D >= 0.
pub fn count_d2(p: u64, k: u32) -> Result<usize> {
    Ok(search_d2(p, k, Strategy::default())?.count)
}

fn search_d2(p: u64, k: u32, strategy: Strategy) -> Result<Survivors> {
    if !is_prime(p) || p % 8 != 5 {
        return Err(Error::input(format!("C^2 + D^2 partitions need a prime p = 5 mod 8, got {p}")));
    }
    let n = prime_power(p, k)?;
    // x <= y covers every unordered pair; both orders are tried as (|C|, D)
    Ok(two_pointer(strategy, n, 1, (n / 2).isqrt(), |acc, x, y| {
        if x > y {
            return;
        }
        if let Some(c) = normalize(x, p) {
            acc.push(c, y);
        }
        if x != y {
            if let Some(c) = normalize(y, p) {
                acc.push(c, x);
            }
        }
    }))
}

fn unique(p: u64, k: u32, s: Survivors) -> Result<(i128, u128)> {
    match (s.count, s.first) {
        (1, Some(v)) => Ok(v),
        (0, _) => Err(Error::NoRepresentation { p, k }),
        (count, _) => Err(Error::UniquenessViolation { p, k, count }),
    }
}

/// Every partition the closed forms of `tag` refer to: A_r, B_r with
/// k = s / 2^{r-2}, or C_r, D_r with k = s / 2^{r-1}.
pub fn partitions_for_instance(tag: &CaseTag) -> Result<Partitions> {
    let s = tag.s();
    let exponent = |shift: u32| {
        let d = 1u32 << shift;
        if !s.is_multiple_of(d) {
            Err(Error::inconsistent(format!("s = {s} is not divisible by {d}")))
        } else {
            Ok(s / d)
        }
    };
    let ranks = tag.partition_ranks();
    if tag.p() % 8 == 3 {
        let mut map = BTreeMap::new();
        for r in ranks {
            map.insert(r, solve_2b2(tag.p(), exponent(r - 2)?)?);
        }
        Ok(Partitions::TwoB2(map))
    } else {
        let mut map = BTreeMap::new();
        for r in ranks {
            map.insert(r, solve_d2(tag.p(), exponent(r - 1)?)?);
        }
        Ok(Partitions::D2(map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::classify;
    use proptest::prelude::*;

    fn pair2(p: u64, k: u32) -> (i64, i64) {
        let r = solve_2b2(p, k).unwrap();
        (r.a().try_into().unwrap(), r.b().try_into().unwrap())
    }

    fn pair_d(p: u64, k: u32) -> (i64, i64) {
        let r = solve_d2(p, k).unwrap();
        (r.c().try_into().unwrap(), r.d().try_into().unwrap())
    }

    #[test]
    fn small_solutions() {
        assert_eq!(pair2(3, 1), (-1, 1));
        assert_eq!(pair2(3, 2), (-1, 2));
        assert_eq!(pair2(3, 4), (7, 4));
        assert_eq!(pair_d(5, 1), (-1, 2));
        assert_eq!(pair_d(5, 2), (3, 4));
        assert_eq!(pair_d(5, 4), (7, 24));
    }

    #[test]
    fn sequential_matches_default() {
        for k in 1..=8 {
            assert_eq!(solve_2b2_with(11, k, crate::par::Strategy::Sequential).unwrap(), solve_2b2(11, k).unwrap());
            assert_eq!(solve_d2_with(13, k, crate::par::Strategy::Sequential).unwrap(), solve_d2(13, k).unwrap());
        }
    }

    #[test]
    fn wrong_prime_class() {
        assert!(matches!(solve_2b2(5, 2), Err(Error::InvalidInput(_))));
        assert!(matches!(solve_d2(3, 2), Err(Error::InvalidInput(_))));
        assert!(matches!(solve_d2(21, 2), Err(Error::InvalidInput(_))));
        assert!(matches!(solve_2b2(3, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn instance_families() {
        let parts = partitions_for_instance(&classify(3, 4, 4).unwrap()).unwrap();
        assert_eq!((parts.a(3).unwrap(), parts.b(3).unwrap()), (&(-1).into(), &2.into()));
        assert_eq!((parts.a(4).unwrap(), parts.b(4).unwrap()), (&(-1).into(), &1.into()));
        let parts = partitions_for_instance(&classify(5, 4, 4).unwrap()).unwrap();
        assert_eq!((parts.c(2).unwrap(), parts.d(2).unwrap()), (&3.into(), &4.into()));
        assert_eq!((parts.c(3).unwrap(), parts.d(3).unwrap()), (&(-1).into(), &2.into()));
        assert!(parts.c(4).is_err());
        assert!(parts.a(3).is_err());
        let parts = partitions_for_instance(&classify(3, 8, 4).unwrap()).unwrap();
        assert_eq!((parts.a(3).unwrap(), parts.b(3).unwrap()), (&7.into(), &4.into()));
        assert_eq!((parts.a(4).unwrap(), parts.b(4).unwrap()), (&(-1).into(), &2.into()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn two_b2_is_normalized(p in prop::sample::select(vec![3u64, 11, 19, 43, 59, 67]), k in 1u32..=8) {
            let r = solve_2b2(p, k).unwrap();
            let n = BigInt::from(p).pow(k);
            prop_assert_eq!(r.a() * r.a() + 2 * r.b() * r.b(), n);
            prop_assert_eq!(((r.a() % 4) + 4) % 4, BigInt::from(3));
            prop_assert!(!(r.a() % p).eq(&BigInt::from(0)));
        }

        #[test]
        fn d2_is_normalized(p in prop::sample::select(vec![5u64, 13, 29, 37, 53, 61]), k in 1u32..=8) {
            let r = solve_d2(p, k).unwrap();
            let n = BigInt::from(p).pow(k);
            prop_assert_eq!(r.c() * r.c() + r.d() * r.d(), n);
            prop_assert_eq!(((r.c() % 4) + 4) % 4, BigInt::from(3));
            prop_assert!(!(r.c() % p).eq(&BigInt::from(0)));
        }
    }
}
