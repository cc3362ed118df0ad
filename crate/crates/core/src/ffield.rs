//! Explicit models of F_{p^s}: polynomial basis over Z_p, a deterministic
//! irreducible modulus and a deterministic primitive element.
//!
//! Elements are coordinate vectors `c_0 + c_1 x + ... + c_{s-1} x^{s-1}`.
//! The enumeration index of an element reads its coordinates as base-p digits
//! with `c_0` least significant, so index 0 is zero and index 1 is one.

use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Largest characteristic accepted; keeps every coordinate product inside u64.
const MAX_CHAR: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDesc {
    p: u64,
    s: usize,
    q: u64,
    /// Low coefficients of the monic modulus: x^s = -(m_0 + m_1 x + ...).
    modulus: Vec<u64>,
    gamma: FieldElem,
    /// Tr(x^i) for i < s.
    trace_basis: Vec<u64>,
}

/// Builds F_{p^s} for an odd prime p.
pub fn build_field(p: u64, s: u32) -> Result<FieldDesc> {
    if p == 2 {
        return Err(Error::input("characteristic 2 is only available through build_binary_field"));
    }
    FieldDesc::construct(p, s)
}

/// Builds F_{2^s}; only used for the binary-field examples where zeta_2 = -1.
pub fn build_binary_field(s: u32) -> Result<FieldDesc> {
    FieldDesc::construct(2, s)
}

impl FieldDesc {
    fn construct(p: u64, s: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("p = {p} is not prime")));
        }
        if p >= MAX_CHAR {
            return Err(Error::input(format!("p = {p} exceeds the supported characteristic")));
        }
        if s == 0 {
            return Err(Error::input("extension degree s must be positive"));
        }
        let q = p
            .checked_pow(s)
            .ok_or_else(|| Error::input(format!("{p}^{s} does not fit the element enumeration")))?;
        let s = s as usize;
        let modulus = smallest_irreducible(p, s);
        let mut field = FieldDesc {
            p,
            s,
            q,
            modulus,
            gamma: FieldElem { coeffs: vec![0; s] },
            trace_basis: Vec::new(),
        };
        field.trace_basis = (0..s)
            .map(|i| {
                let mut xi = vec![0; s];
                xi[i] = 1;
                field.trace_by_frobenius(&FieldElem { coeffs: xi })
            })
            .collect();
        let factors = prime_factors(q - 1);
        field.gamma = (1..q)
            .map(|idx| field.element(idx))
            .find(|g| field.has_full_order(g, &factors))
            .ok_or_else(|| Error::inconsistent("multiplicative group has no generator"))?;
        Ok(field)
    }

    /// Same field with a different primitive element.
    pub fn with_generator(&self, gamma: FieldElem) -> Result<Self> {
        self.check(&gamma)?;
        if !self.has_full_order(&gamma, &prime_factors(self.q - 1)) {
            return Err(Error::input("replacement generator does not have order q-1"));
        }
        Ok(FieldDesc { gamma, ..self.clone() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s as u32
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_big(&self) -> BigUint {
        BigUint::from(self.p).pow(self.s as u32)
    }

    /// Monic modulus coefficients, constant term first, leading 1 included.
    pub fn modulus(&self) -> Vec<u64> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    pub fn gamma(&self) -> &FieldElem {
        &self.gamma
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.s] }
    }

    pub fn one(&self) -> FieldElem {
        self.element(1)
    }

    /// Element with the given enumeration index (base-p digits, c_0 lowest).
    pub fn element(&self, mut index: u64) -> FieldElem {
        debug_assert!(index < self.q);
        let coeffs = (0..self.s)
            .map(|_| {
                let d = index % self.p;
                index /= self.p;
                d
            })
            .collect();
        FieldElem { coeffs }
    }

    pub fn index_of(&self, a: &FieldElem) -> u64 {
        a.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FieldElem> {
        let a = FieldElem { coeffs };
        self.check(&a)?;
        Ok(a)
    }

    fn check(&self, a: &FieldElem) -> Result<()> {
        if a.coeffs.len() != self.s || a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::input("element does not belong to this field"));
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % self.p).collect();
        FieldElem { coeffs }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect();
        FieldElem { coeffs }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut out = vec![0; self.s];
        let mut scratch = vec![0; 2 * self.s];
        self.mul_into(&a.coeffs, &b.coeffs, &mut out, &mut scratch);
        FieldElem { coeffs: out }
    }

    /// `out = a * b`; `scratch` must hold at least 2s words.
    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        let (s, p) = (self.s, self.p);
        let prod = &mut scratch[..2 * s];
        prod.fill(0);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    prod[i + j] = (prod[i + j] + ai * bj) % p;
                }
            }
        }
        for k in (s..2 * s - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for (i, &mi) in self.modulus.iter().enumerate() {
                prod[k - s + i] = (prod[k - s + i] + neg * mi) % p;
            }
        }
        out.copy_from_slice(&prod[..s]);
    }

    pub fn pow(&self, a: &FieldElem, mut n: u64) -> FieldElem {
        let mut result = self.one();
        let mut base = a.clone();
        let mut scratch = vec![0; 2 * self.s];
        let mut tmp = vec![0; self.s];
        while n > 0 {
            if n & 1 == 1 {
                self.mul_into(&result.coeffs, &base.coeffs, &mut tmp, &mut scratch);
                result.coeffs.copy_from_slice(&tmp);
            }
            n >>= 1;
            if n > 0 {
                self.mul_into(&base.coeffs, &base.coeffs, &mut tmp, &mut scratch);
                base.coeffs.copy_from_slice(&tmp);
            }
        }
        result
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        (!a.is_zero()).then(|| self.pow(a, self.q - 2))
    }

    /// Absolute trace Tr: F_q -> F_p, via the precomputed traces of the basis.
    pub fn trace(&self, a: &FieldElem) -> u64 {
        self.trace_coeffs(&a.coeffs)
    }

    pub(crate) fn trace_coeffs(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.trace_basis).fold(0, |acc, (c, t)| (acc + c * t) % self.p)
    }

    /// Tr(a) = a + a^p + ... + a^{p^{s-1}}, evaluated literally. The result
    /// lies in the prime field, i.e. only the constant coordinate survives.
    fn trace_by_frobenius(&self, a: &FieldElem) -> u64 {
        let mut acc = self.zero();
        let mut conj = a.clone();
        for _ in 0..self.s {
            acc = self.add(&acc, &conj);
            conj = self.pow(&conj, self.p);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }

    /// Linear functional y -> Tr(mult * y), as coefficients on the basis.
    pub(crate) fn trace_functional(&self, mult: &FieldElem) -> Vec<u64> {
        let mut xi = self.zero();
        (0..self.s)
            .map(|i| {
                xi.coeffs.fill(0);
                xi.coeffs[i] = 1;
                self.trace(&self.mul(mult, &xi))
            })
            .collect()
    }

    /// Whether Tr_{F_q/F_{p^l}}(a) = sum_{i < s/l} a^{p^{l i}} is nonzero.
    pub fn rel_trace_nonzero(&self, l: u32, a: &FieldElem) -> Result<bool> {
        Ok(!self.rel_trace(l, a)?.is_zero())
    }

    pub fn rel_trace(&self, l: u32, a: &FieldElem) -> Result<FieldElem> {
        let l = l as usize;
        if l == 0 || !self.s.is_multiple_of(l) {
            return Err(Error::input(format!("l = {l} does not divide s = {}", self.s)));
        }
        let frob = self.p.pow(l as u32);
        let mut acc = self.zero();
        let mut conj = a.clone();
        for _ in 0..self.s / l {
            acc = self.add(&acc, &conj);
            conj = self.pow(&conj, frob);
        }
        Ok(acc)
    }

    /// The relative trace as an F_p-linear map, for repeated zero tests.
    pub fn rel_trace_map(&self, l: u32) -> Result<RelTraceMap> {
        let mut columns = Vec::with_capacity(self.s);
        let mut xi = self.zero();
        for i in 0..self.s {
            xi.coeffs.fill(0);
            xi.coeffs[i] = 1;
            columns.push(self.rel_trace(l, &xi)?.coeffs);
        }
        let rows = (0..self.s).map(|r| columns.iter().map(|col| col[r]).collect()).collect();
        Ok(RelTraceMap { p: self.p, rows })
    }

    fn has_full_order(&self, g: &FieldElem, factors: &[u64]) -> bool {
        let one = self.one();
        !g.is_zero() && factors.iter().all(|&r| self.pow(g, (self.q - 1) / r) != one)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FieldElem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let one = self.one();
        let mut ord = self.q - 1;
        for r in prime_factors(self.q - 1) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == one {
                ord /= r;
            }
        }
        Some(ord)
    }

    /// All field elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |i| self.element(i))
    }
}

/// Matrix of the relative trace on the polynomial basis.
#[derive(Debug, Clone)]
pub struct RelTraceMap {
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl RelTraceMap {
    pub fn is_nonzero(&self, a: &[u64]) -> bool {
        self.rows
            .iter()
            .any(|row| row.iter().zip(a).fold(0, |acc, (r, c)| (acc + r * c) % self.p) != 0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- polynomials over Z_p, constant term first, used for the modulus search ---

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let c = a.pop().unwrap() * lead_inv % p;
        let shift = a.len() - dm;
        for (i, &mi) in m[..dm].iter().enumerate() {
            a[shift + i] = (a[shift + i] + (p - c) * mi) % p;
        }
        a = trim(a);
    }
    trim(a)
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(prod, m, p)
}

fn poly_powmod(a: &[u64], mut n: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1];
    let mut base = a.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            result = poly_mulmod(&result, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        n >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^{p^k} mod m, by k successive p-th powers.
fn frobenius_x(k: usize, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = poly_rem(vec![0, 1], m, p);
    for _ in 0..k {
        x = poly_powmod(&x, p, m, p);
    }
    x
}

/// Rabin's test: m (monic, degree s) is irreducible iff x^{p^s} = x mod m and
/// gcd(x^{p^{s/r}} - x, m) = 1 for every prime r | s.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let s = m.len() - 1;
    if s == 1 {
        return true;
    }
    let x = poly_rem(vec![0, 1], m, p);
    if frobenius_x(s, m, p) != x {
        return false;
    }
    prime_factors(s as u64).into_iter().all(|r| {
        let mut h = frobenius_x(s / r as usize, m, p);
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        poly_gcd(m, &h, p).len() == 1
    })
}

/// Lexicographically smallest monic irreducible of degree s, comparing the
/// constant coefficient first. Returns the low coefficients m_0..m_{s-1}.
fn smallest_irreducible(p: u64, s: usize) -> Vec<u64> {
    let total = p.pow(s as u32);
    (0..total)
        .map(|n| {
            // c_0 is the most significant digit of the candidate number.
            let mut low = vec![0; s];
            let mut rest = n;
            for i in (0..s).rev() {
                low[i] = rest % p;
                rest /= p;
            }
            low
        })
        .find(|low| {
            let mut m = low.clone();
            m.push(1);
            is_irreducible(&m, p)
        })
        .expect("an irreducible polynomial exists in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducibility by exhaustive trial division by every monic polynomial of
    /// degree 1..=s/2.
    fn irreducible_by_trial_division(m: &[u64], p: u64) -> bool {
        let s = m.len() - 1;
        for d in 1..=s / 2 {
            for n in 0..p.pow(d as u32) {
                let mut g: Vec<u64> = (0..d).map(|i| n / p.pow(i as u32) % p).collect();
                g.push(1);
                if poly_rem(m.to_vec(), &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_three() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.q(), 3);
        assert_eq!(f.modulus(), vec![0, 1]);
        assert_eq!(f.gamma().coeffs(), &[2]);
        assert_eq!(f.order(f.gamma()), Some(2));
    }

    #[test]
    fn f81_and_f625_are_well_formed() {
        for (p, s) in [(3, 4), (5, 4)] {
            let f = build_field(p, s).unwrap();
            assert_eq!(f.q(), p.pow(s));
            assert!(irreducible_by_trial_division(&f.modulus(), p));
            assert_eq!(f.order(f.gamma()), Some(f.q() - 1));
        }
    }

    #[test]
    fn modulus_is_lexicographically_smallest() {
        for (p, s) in [(3, 2), (3, 4), (5, 2), (5, 3), (2, 4)] {
            let f = FieldDesc::construct(p, s).unwrap();
            let chosen = f.modulus();
            let s = s as usize;
            for n in 0..p.pow(s as u32) {
                let mut low = vec![0; s];
                let mut rest = n;
                for i in (0..s).rev() {
                    low[i] = rest % p;
                    rest /= p;
                }
                let mut cand = low.clone();
                cand.push(1);
                if cand == chosen {
                    break;
                }
                assert!(!irreducible_by_trial_division(&cand, p), "{cand:?} precedes {chosen:?}");
            }
        }
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for p in [2u64, 3, 5] {
            for s in 1..=4usize {
                for n in 0..p.pow(s as u32) {
                    let mut m: Vec<u64> = (0..s).map(|i| n / p.pow(i as u32) % p).collect();
                    m.push(1);
                    assert_eq!(is_irreducible(&m, p), irreducible_by_trial_division(&m, p), "{m:?}");
                }
            }
        }
    }

    #[test]
    fn generator_is_first_in_enumeration_order() {
        let f = build_field(3, 4).unwrap();
        let gi = f.index_of(f.gamma());
        for i in 1..gi {
            assert!(f.order(&f.element(i)).unwrap() < 80);
        }
    }

    #[test]
    fn basic_identities() {
        let f = build_field(3, 4).unwrap();
        let g = f.gamma();
        assert_eq!(f.pow(g, f.q() - 1), f.one());
        assert_eq!(f.pow(&f.zero(), 5), f.zero());
        assert_eq!(f.pow(g, 0), f.one());
        assert_eq!(f.mul(g, &f.pow(g, f.q() - 2)), f.one());
        assert_eq!(f.mul(g, &f.inv(g).unwrap()), f.one());
    }

    #[test]
    fn trace_small_values() {
        let f = build_field(3, 4).unwrap();
        assert_eq!(f.trace(&f.zero()), 0);
        assert_eq!(f.trace(&f.one()), 1);
        let zeros = f.elements().filter(|a| f.trace(a) == 0).count();
        assert_eq!(zeros, 27);
    }

    #[test]
    fn exhaustive_field_properties() {
        for (p, s) in [(3, 2), (3, 4), (5, 2), (5, 4), (7, 2), (11, 2), (3, 8), (2, 4)] {
            let f = FieldDesc::construct(p, s).unwrap();
            let q = f.q();
            // trace via basis equals the literal Frobenius sum
            for a in f.elements().take(200) {
                assert_eq!(f.trace(&a), f.trace_by_frobenius(&a));
            }
            // balanced trace
            let mut hist = vec![0u64; p as usize];
            for a in f.elements() {
                hist[f.trace(&a) as usize] += 1;
            }
            assert!(hist.iter().all(|&h| h == q / p), "{p}^{s}: {hist:?}");
            // generator enumerates all nonzero elements
            let mut seen = vec![false; q as usize];
            let mut x = f.one();
            for _ in 0..q - 1 {
                let idx = f.index_of(&x) as usize;
                assert!(!seen[idx]);
                seen[idx] = true;
                x = f.mul(&x, f.gamma());
            }
            assert!(!seen[0]);
        }
    }

    #[test]
    fn trace_is_additive_exhaustively_on_f81() {
        let f = build_field(3, 4).unwrap();
        let all: Vec<_> = f.elements().collect();
        for a in &all {
            for b in &all {
                assert_eq!(f.trace(&f.add(a, b)), (f.trace(a) + f.trace(b)) % 3);
            }
        }
    }

    #[test]
    fn relative_trace() {
        let f = build_field(3, 4).unwrap();
        assert!(!f.rel_trace_nonzero(1, &f.zero()).unwrap());
        let map = f.rel_trace_map(2).unwrap();
        for a in f.elements() {
            assert_eq!(f.rel_trace_nonzero(4, &a).unwrap(), !a.is_zero());
            assert_eq!(f.rel_trace_nonzero(1, &a).unwrap(), f.trace(&a) != 0);
            assert_eq!(map.is_nonzero(a.coeffs()), f.rel_trace_nonzero(2, &a).unwrap());
        }
        assert!(matches!(f.rel_trace_nonzero(3, &f.one()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn build_is_deterministic() {
        assert_eq!(build_field(5, 4).unwrap(), build_field(5, 4).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(build_field(9, 2), Err(Error::InvalidInput(_))));
        assert!(matches!(build_field(3, 0), Err(Error::InvalidInput(_))));
        assert!(matches!(build_field(2, 3), Err(Error::InvalidInput(_))));
        assert!(build_binary_field(4).is_ok());
    }

    #[test]
    fn replacement_generator() {
        let f = build_field(3, 4).unwrap();
        let g3 = f.pow(f.gamma(), 3);
        let f2 = f.with_generator(g3.clone()).unwrap();
        assert_eq!(f2.gamma(), &g3);
        assert!(f.with_generator(f.pow(f.gamma(), 2)).is_err());
    }
}
