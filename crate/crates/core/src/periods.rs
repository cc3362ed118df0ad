//! Brute-force ground truth: period counts, reduced and ordinary periods as
//! exact elements of Z[zeta_p], their power sums, the period polynomial, and
//! the number of solutions of x_1^e + ... + x_n^e = 0 by two independent routes.

use crate::cycloint::{newton_from_power_sums, CycloInt, IntPoly};
use crate::error::{Error, Result};
use crate::ffield::{FieldDesc, FieldElem};
use crate::par::{fold_chunks, Strategy};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Fields larger than this are counted by walking the powers of gamma.
pub const DIRECT_LIMIT: u64 = 1_000_000;

/// Default cap on q for the convolution counter.
pub const CONVOLUTION_BUDGET: u64 = 10_000;

const CHUNK: u64 = 1 << 12;

/// How [`period_counts_with`] visits the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    /// Every x in F_q in enumeration order, evaluating Tr(gamma^j x^e).
    Direct,
    /// Every power gamma^u, u < q-1, by repeated multiplication by gamma.
    PowerTable,
}

/// m[j][c] = #{x in F_q : Tr(gamma^j x^e) = c}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodCounts {
    p: u64,
    q: u64,
    e: u64,
    rows: Vec<Vec<u64>>,
}

impl PeriodCounts {
    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
}

fn check_order(f: &FieldDesc, e: u64) -> Result<()> {
    if e == 0 || !(f.q() - 1).is_multiple_of(e) {
        return Err(Error::input(format!("e = {e} does not divide q - 1 = {}", f.q() - 1)));
    }
    Ok(())
}

pub fn period_counts(f: &FieldDesc, e: u64) -> Result<PeriodCounts> {
    let method = if f.q() <= DIRECT_LIMIT { CountMethod::Direct } else { CountMethod::PowerTable };
    period_counts_with(f, e, method, Strategy::default())
}

pub fn period_counts_with(
    f: &FieldDesc,
    e: u64,
    method: CountMethod,
    strategy: Strategy,
) -> Result<PeriodCounts> {
    check_order(f, e)?;
    let flat = match method {
        CountMethod::Direct => counts_direct(f, e, strategy),
        CountMethod::PowerTable => counts_power_table(f, e, strategy),
    };
    let p = f.p() as usize;
    let rows = flat.chunks(p).map(<[u64]>::to_vec).collect();
    Ok(PeriodCounts { p: f.p(), q: f.q(), e, rows })
}

fn merge_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

fn counts_direct(f: &FieldDesc, e: u64, strategy: Strategy) -> Vec<u64> {
    let (p, s) = (f.p(), f.s() as usize);
    let mut gj = f.one();
    let mut functionals = Vec::with_capacity(e as usize);
    for _ in 0..e {
        functionals.push(f.trace_functional(&gj));
        gj = f.mul(&gj, f.gamma());
    }
    fold_chunks(
        strategy,
        f.q(),
        CHUNK,
        || vec![0u64; (e * p) as usize],
        |mut acc, range| {
            let mut x = vec![0u64; s];
            let mut y = vec![0u64; s];
            let mut base = vec![0u64; s];
            let mut tmp = vec![0u64; s];
            let mut scratch = vec![0u64; 2 * s];
            for idx in range {
                let mut rest = idx;
                for c in x.iter_mut() {
                    *c = rest % p;
                    rest /= p;
                }
                pow_into(f, &x, e, &mut y, &mut base, &mut tmp, &mut scratch);
                for (j, l) in functionals.iter().enumerate() {
                    let c = l.iter().zip(&y).fold(0, |t, (a, b)| (t + a * b) % p);
                    acc[j * p as usize + c as usize] += 1;
                }
            }
            acc
        },
        merge_counts,
    )
}

/// out = a^n using caller-provided buffers.
fn pow_into(
    f: &FieldDesc,
    a: &[u64],
    mut n: u64,
    out: &mut [u64],
    base: &mut [u64],
    tmp: &mut [u64],
    scratch: &mut [u64],
) {
    out.fill(0);
    out[0] = 1;
    base.copy_from_slice(a);
    while n > 0 {
        if n & 1 == 1 {
            f.mul_into(out, base, tmp, scratch);
            out.copy_from_slice(tmp);
        }
        n >>= 1;
        if n > 0 {
            f.mul_into(base, base, tmp, scratch);
            base.copy_from_slice(tmp);
        }
    }
}

fn counts_power_table(f: &FieldDesc, e: u64, strategy: Strategy) -> Vec<u64> {
    let (p, s) = (f.p() as usize, f.s() as usize);
    let gamma = f.gamma().coeffs().to_vec();
    let mut flat = fold_chunks(
        strategy,
        f.q() - 1,
        1 << 16,
        || vec![0u64; e as usize * p],
        |mut acc, range| {
            let mut y = f.pow(f.gamma(), range.start).coeffs().to_vec();
            let mut tmp = vec![0u64; s];
            let mut scratch = vec![0u64; 2 * s];
            let mut j = (range.start % e) as usize;
            for _ in range {
                let c = f.trace_coeffs(&y) as usize;
                acc[j * p + c] += 1;
                j += 1;
                if j == e as usize {
                    j = 0;
                }
                f.mul_into(&gamma, &y, &mut tmp, &mut scratch);
                std::mem::swap(&mut y, &mut tmp);
            }
            acc
        },
        merge_counts,
    );
    // each gamma^u with u = j mod e is hit by e values of x; x = 0 has trace 0
    for j in 0..e as usize {
        for c in 0..p {
            flat[j * p + c] *= e;
        }
        flat[j * p] += 1;
    }
    flat
}

/// eta*_j = sum_c m[j][c] zeta_p^c.
pub fn reduced_periods(pc: &PeriodCounts) -> Vec<CycloInt> {
    pc.rows.iter().map(|row| CycloInt::from_counts(pc.p, row)).collect()
}

/// eta_j = (eta*_j - 1) / e.
pub fn ordinary_periods(pc: &PeriodCounts) -> Result<Vec<CycloInt>> {
    let one = CycloInt::from_integer(pc.p, 1);
    let e = BigInt::from(pc.e);
    reduced_periods(pc)
        .iter()
        .enumerate()
        .map(|(j, z)| {
            z.sub(&one)?
                .div_exact(&e)
                .ok_or_else(|| Error::inconsistent(format!("eta*_{j} - 1 is not divisible by e = {}", pc.e)))
        })
        .collect()
}

/// s_n = sum_j z_j^n for n = 1..=e where e is the number of periods.
pub fn power_sums(periods: &[CycloInt]) -> Result<Vec<BigInt>> {
    power_sums_upto(periods, periods.len())
}

/// s_n = sum_j z_j^n for n = 1..=n_max, each asserted to be a rational integer.
pub fn power_sums_upto(periods: &[CycloInt], n_max: usize) -> Result<Vec<BigInt>> {
    let Some(first) = periods.first() else {
        return Ok(vec![BigInt::zero(); n_max]);
    };
    let p = first.p();
    // equal periods are common; power each distinct value once
    let mut distinct: Vec<(CycloInt, u64)> = Vec::new();
    for z in periods {
        match distinct.iter_mut().find(|(d, _)| d == z) {
            Some((_, m)) => *m += 1,
            None => distinct.push((z.clone(), 1)),
        }
    }
    let mut powers: Vec<CycloInt> = distinct.iter().map(|_| CycloInt::from_integer(p, 1)).collect();
    let mut sums = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut total = CycloInt::zero(p);
        for ((z, mult), pw) in distinct.iter().zip(powers.iter_mut()) {
            *pw = pw.mul(z)?;
            total = total.add(&pw.scale(&BigInt::from(*mult)))?;
        }
        let s = total
            .as_integer()
            .ok_or_else(|| Error::inconsistent(format!("power sum s_{n} = {total} is not rational")))?;
        sums.push(s.clone());
    }
    Ok(sums)
}

/// P*_e(X) = prod_j (X - eta*_j), reconstructed from power sums.
pub fn oracle_period_poly(f: &FieldDesc, e: u64) -> Result<IntPoly> {
    let pc = period_counts(f, e)?;
    period_poly_from_periods(&reduced_periods(&pc))
}

/// prod_j (X - z_j) for a Galois-stable family of periods.
pub fn period_poly_from_periods(periods: &[CycloInt]) -> Result<IntPoly> {
    newton_from_power_sums(&power_sums(periods)?)
}

/// P_e(X) = P*_e(eX + 1) / e^e.
pub fn reduced_to_ordinary_poly(pstar: &IntPoly, e: u64) -> Result<IntPoly> {
    if !pstar.is_monic() || pstar.degree() != Some(e as usize) {
        return Err(Error::input(format!("expected a monic polynomial of degree {e}")));
    }
    let eb = BigInt::from(e);
    pstar
        .compose_linear(&eb, &BigInt::one())
        .div_exact(&eb.pow(e as u32))
        .ok_or_else(|| Error::inconsistent(format!("P*(eX+1) is not divisible by {e}^{e}")))
}

/// N[x_1^e + ... + x_n^e = 0] = q^{n-1} + (q-1)/(e q) * sum_j (eta*_j)^n.
pub fn count_diagonal_power_sums(f: &FieldDesc, e: u64, n: u32, periods: &[CycloInt]) -> Result<BigInt> {
    check_order(f, e)?;
    let sums = power_sums_upto(periods, n as usize)?;
    diagonal_count_from_power_sum(&BigInt::from(f.q()), e, n, &sums[n as usize - 1])
}

/// q^{n-1} + (q-1)/(e q) * sum, with the division checked to be exact.
pub fn diagonal_count_from_power_sum(q: &BigInt, e: u64, n: u32, sum: &BigInt) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    let num = (q - 1u32) * sum;
    let den = q * e;
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::inconsistent(format!("(q-1) * {sum} is not divisible by e q for n = {n}")));
    }
    Ok(q.pow(n - 1) + quot)
}

/// N[x_1^e + ... + x_n^e = 0] as the n-fold additive convolution of
/// u(a) = #{x : x^e = a}, evaluated at 0.
pub fn count_diagonal_convolution(f: &FieldDesc, e: u64, n: u32, budget: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::input("n must be at least 1"));
    }
    Ok(diagonal_counts_convolution(f, e, n, budget)?.pop().expect("n >= 1"))
}

/// The convolution counts for every n = 1..=n_max.
///
/// u^{*n} = u^{*(n-1)} * u, where u is supported on the (q-1)/e + 1 values
/// of x^e. The counts are carried modulo a few 62-bit primes and recovered by
/// CRT, using 0 <= N_n <= q^n.
pub fn diagonal_counts_convolution(f: &FieldDesc, e: u64, n_max: u32, budget: u64) -> Result<Vec<BigInt>> {
    check_order(f, e)?;
    let q = f.q();
    if q > budget {
        return Err(Error::Budget(format!("convolution counter needs q <= {budget}, got q = {q}")));
    }
    let adder = IndexAdder::new(f);
    // u(a)
    let mut u = vec![0u64; q as usize];
    for x in f.elements() {
        u[f.index_of(&f.pow(&x, e)) as usize] += 1;
    }
    let support: Vec<(usize, u64)> = u.iter().copied().enumerate().filter(|&(_, c)| c > 0).collect();

    let bound = BigUint::from(q).pow(n_max.max(1));
    let primes = crt_primes(&bound);
    let mut per_prime: Vec<Vec<u64>> = Vec::with_capacity(primes.len());
    for &m in &primes {
        let mut dist: Vec<u64> = u.iter().map(|&c| c % m).collect();
        let mut at_zero = vec![dist[0]];
        for _ in 1..n_max {
            let mut next = vec![0u64; q as usize];
            for &(a, ua) in &support {
                for (b, &db) in dist.iter().enumerate() {
                    if db != 0 {
                        let t = &mut next[adder.add(a, b)];
                        *t = ((*t as u128 + ua as u128 * db as u128) % m as u128) as u64;
                    }
                }
            }
            dist = next;
            at_zero.push(dist[0]);
        }
        per_prime.push(at_zero);
    }
    Ok((0..n_max as usize)
        .map(|i| {
            let residues: Vec<u64> = per_prime.iter().map(|v| v[i]).collect();
            BigInt::from(crt(&residues, &primes))
        })
        .collect())
}

/// Digit-wise addition of enumeration indices, i.e. addition in (Z_p)^s,
/// through two lookup tables on the low and high halves of the digits.
struct IndexAdder {
    split: usize,
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl IndexAdder {
    fn new(f: &FieldDesc) -> Self {
        let (p, s) = (f.p() as usize, f.s() as usize);
        let lo_digits = s / 2;
        let split = p.pow(lo_digits as u32);
        let hi_size = p.pow((s - lo_digits) as u32);
        let table = |size: usize, digits: usize| -> Vec<usize> {
            let mut t = vec![0; size * size];
            for a in 0..size {
                for b in 0..size {
                    let (mut x, mut y, mut out, mut scale) = (a, b, 0, 1);
                    for _ in 0..digits {
                        out += ((x % p + y % p) % p) * scale;
                        x /= p;
                        y /= p;
                        scale *= p;
                    }
                    t[a * size + b] = out;
                }
            }
            t
        };
        IndexAdder { split, lo: table(split, lo_digits), hi: table(hi_size, s - lo_digits) }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let n = self.split;
        let hi_size = self.hi.len().isqrt();
        self.lo[(a % n) * n + b % n] + n * self.hi[(a / n) * hi_size + b / n]
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mulmod = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().all(|&a| {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

/// Descending primes below 2^62 whose product exceeds `bound`.
fn crt_primes(bound: &BigUint) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    let mut cand = (1u64 << 62) - 1;
    while &product <= bound {
        if is_prime_u64(cand) {
            primes.push(cand);
            product *= cand;
        }
        cand -= 2;
    }
    primes
}

fn crt(residues: &[u64], primes: &[u64]) -> BigUint {
    let modulus: BigUint = primes.iter().map(|&m| BigUint::from(m)).product();
    residues.iter().zip(primes).fold(BigUint::zero(), |acc, (&r, &m)| {
        let mb = BigUint::from(m);
        let rest = &modulus / &mb;
        let rest_mod = (&rest % &mb).to_u64().expect("fits");
        let inv = BigUint::from(rest_mod).modpow(&BigUint::from(m - 2), &mb);
        (acc + BigUint::from(r) * rest * inv) % &modulus
    })
}

/// Index j of the coset gamma^j H containing beta, where H is the subgroup of
/// e-th powers: the unique j with (beta gamma^{-j})^{(q-1)/e} = 1.
pub fn coset_index(f: &FieldDesc, e: u64, beta: &FieldElem) -> Result<u64> {
    check_order(f, e)?;
    let inv_gamma = f.inv(f.gamma()).expect("gamma is nonzero");
    let one = f.one();
    let exp = (f.q() - 1) / e;
    let mut y = beta.clone();
    for j in 0..e {
        if f.pow(&y, exp) == one {
            return Ok(j);
        }
        y = f.mul(&y, &inv_gamma);
    }
    Err(Error::input("zero has no coset"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{build_binary_field, build_field};

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    /// Independent count: enumerate pairs/triples directly.
    fn enumerate_diagonal(f: &FieldDesc, e: u64, n: u32) -> u64 {
        let powers: Vec<FieldElem> = f.elements().map(|x| f.pow(&x, e)).collect();
        let mut count = 0;
        let mut idx = vec![0usize; n as usize];
        loop {
            let sum = idx.iter().fold(f.zero(), |acc, &i| f.add(&acc, &powers[i]));
            if sum.is_zero() {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return count;
                }
                idx[k] += 1;
                if idx[k] < powers.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn e_one_is_balanced() {
        let f = build_field(3, 4).unwrap();
        let pc = period_counts(&f, 1).unwrap();
        assert_eq!(pc.rows(), &[vec![27, 27, 27]]);
        assert!(reduced_periods(&pc)[0].is_zero());
    }

    #[test]
    fn f9_order_two() {
        let f = build_field(3, 2).unwrap();
        let pc = period_counts(&f, 2).unwrap();
        let eta_star = reduced_periods(&pc);
        assert_eq!(eta_star, vec![CycloInt::from_integer(3, 3), CycloInt::from_integer(3, -3)]);
        let eta = ordinary_periods(&pc).unwrap();
        assert_eq!(eta, vec![CycloInt::from_integer(3, 1), CycloInt::from_integer(3, -2)]);
        assert_eq!(power_sums(&eta_star).unwrap(), vec![big(0), big(18)]);
        let pstar = oracle_period_poly(&f, 2).unwrap();
        assert_eq!(pstar, IntPoly::from_i64s(&[-9, 0, 1]));
        let pe = reduced_to_ordinary_poly(&pstar, 2).unwrap();
        assert_eq!(pe, IntPoly::from_i64s(&[-2, 1, 1]));
        for z in &eta {
            assert!(pe.eval_at(z).is_zero());
        }
        assert_eq!(count_diagonal_power_sums(&f, 2, 2, &eta_star).unwrap(), big(17));
        assert_eq!(count_diagonal_convolution(&f, 2, 2, CONVOLUTION_BUDGET).unwrap(), big(17));
        assert_eq!(enumerate_diagonal(&f, 2, 2), 17);
    }

    #[test]
    fn degenerate_reduced_poly_is_rejected() {
        let xe = IntPoly::from_i64s(&[0, 0, 1]);
        assert!(matches!(reduced_to_ordinary_poly(&xe, 2), Err(Error::Inconsistency(_))));
    }

    #[test]
    fn order_must_divide() {
        let f = build_field(3, 4).unwrap();
        assert!(matches!(period_counts(&f, 7), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn singleton_cosets_are_roots_of_unity() {
        let f = build_field(5, 2).unwrap();
        let pc = period_counts(&f, 24).unwrap();
        let eta = ordinary_periods(&pc).unwrap();
        let mut g = f.one();
        for z in eta.iter() {
            assert_eq!(z, &CycloInt::zeta_pow(5, f.trace(&g)));
            g = f.mul(&g, f.gamma());
        }
    }

    #[test]
    fn both_counting_paths_agree() {
        for (p, s, e) in [(3u64, 4u32, 16u64), (5, 2, 8), (3, 2, 8), (5, 4, 16), (7, 2, 4), (11, 2, 8)] {
            let f = build_field(p, s).unwrap();
            let a = period_counts_with(&f, e, CountMethod::Direct, Strategy::Sequential).unwrap();
            let b = period_counts_with(&f, e, CountMethod::PowerTable, Strategy::Sequential).unwrap();
            assert_eq!(a, b, "{p}^{s}, e = {e}");
            assert_eq!(a, period_counts_with(&f, e, CountMethod::Direct, Strategy::default()).unwrap());
        }
    }

    #[test]
    fn structural_invariants() {
        for (p, s, e) in [(3u64, 4u32, 16u64), (3, 4, 8), (5, 4, 16), (5, 2, 4), (13, 2, 8), (3, 4, 5), (3, 4, 10)] {
            let f = build_field(p, s).unwrap();
            let pc = period_counts(&f, e).unwrap();
            for row in pc.rows() {
                assert_eq!(row.iter().sum::<u64>(), f.q());
            }
            let red = reduced_periods(&pc);
            let total = red.iter().try_fold(CycloInt::zero(p), |acc, z| acc.add(z)).unwrap();
            assert!(total.is_zero());
            let ord = ordinary_periods(&pc).unwrap();
            let total = ord.iter().try_fold(CycloInt::zero(p), |acc, z| acc.add(z)).unwrap();
            assert_eq!(total, CycloInt::from_integer(p, -1));
            let poly = period_poly_from_periods(&red).unwrap();
            assert_eq!(poly.degree(), Some(e as usize));
            assert!(poly.is_monic());
            for z in &red {
                assert!(poly.eval_at(z).is_zero());
            }
            let pe = reduced_to_ordinary_poly(&poly, e).unwrap();
            for z in &ord {
                assert!(pe.eval_at(z).is_zero());
            }
        }
    }

    #[test]
    fn generator_independence() {
        let f = build_field(3, 4).unwrap();
        let k = (2..80).find(|k| num_integer::gcd(*k, 80) == 1).unwrap();
        let g = f.with_generator(f.pow(f.gamma(), k)).unwrap();
        let mut a = reduced_periods(&period_counts(&f, 16).unwrap());
        let mut b = reduced_periods(&period_counts(&g, 16).unwrap());
        let key = |z: &CycloInt| z.coords().to_vec();
        a.sort_by_key(key);
        b.sort_by_key(key);
        assert_eq!(a, b);
    }

    #[test]
    fn convolution_matches_direct_enumeration() {
        let f = build_field(3, 2).unwrap();
        for e in [2, 4, 8] {
            let conv = diagonal_counts_convolution(&f, e, 3, CONVOLUTION_BUDGET).unwrap();
            for n in 1..=3 {
                assert_eq!(conv[n as usize - 1], BigInt::from(enumerate_diagonal(&f, e, n)));
            }
        }
        let f = build_field(5, 2).unwrap();
        let conv = diagonal_counts_convolution(&f, 8, 2, CONVOLUTION_BUDGET).unwrap();
        assert_eq!(conv[1], BigInt::from(enumerate_diagonal(&f, 8, 2)));
    }

    #[test]
    fn power_sum_counts_match_convolution_on_f81() {
        let f = build_field(3, 4).unwrap();
        let periods = reduced_periods(&period_counts(&f, 16).unwrap());
        let conv = diagonal_counts_convolution(&f, 16, 16, CONVOLUTION_BUDGET).unwrap();
        for n in 1..=16u32 {
            assert_eq!(count_diagonal_power_sums(&f, 16, n, &periods).unwrap(), conv[n as usize - 1], "n = {n}");
        }
        assert_eq!(conv[0], big(1));
    }

    #[test]
    fn convolution_budget() {
        let f = build_field(5, 6).unwrap();
        assert!(matches!(count_diagonal_convolution(&f, 8, 2, CONVOLUTION_BUDGET), Err(Error::Budget(_))));
        assert!(count_diagonal_convolution(&f, 8, 1, f.q()).is_ok());
    }

    #[test]
    fn binary_field_periods() {
        let f = build_binary_field(4).unwrap();
        let pc = period_counts(&f, 3).unwrap();
        let red = reduced_periods(&pc);
        assert!(red.iter().all(CycloInt::is_rational_integer));
        let poly = period_poly_from_periods(&red).unwrap();
        // (X - 4)^2 (X + 8)
        assert_eq!(poly, IntPoly::from_i64s(&[128, -48, 0, 1]));
    }

    #[test]
    fn coset_classification() {
        let f = build_field(3, 4).unwrap();
        let mut g = f.one();
        for t in 0..80u64 {
            assert_eq!(coset_index(&f, 8, &g).unwrap(), t % 8);
            g = f.mul(&g, f.gamma());
        }
    }

    #[test]
    fn crt_round_trip() {
        let bound = BigUint::from(10u32).pow(60);
        let primes = crt_primes(&bound);
        let x = BigUint::from(7u32).pow(70);
        let residues: Vec<u64> = primes.iter().map(|&m| (&x % m).to_u64().unwrap()).collect();
        assert_eq!(crt(&residues, &primes), x);
    }
}
