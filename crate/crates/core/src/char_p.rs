//! Prime-field arithmetic, multi-indices, Lucas binomials and p-adic digit
//! streams.
//!
//! Field elements are plain residues `u32` in `0..p`; the modulus lives in a
//! validated [`Prime`] which every container carries once.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus. All residues handed to its methods must be
/// reduced (`< p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.0) {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    /// `p^e` as an `i64`, saturating.
    pub fn power(self, e: u32) -> i64 {
        (self.0 as i64).saturating_pow(e)
    }

    /// `n!` reduced mod p (zero once `n >= p`).
    pub fn factorial(self, n: u64) -> u32 {
        (1..=n).fold(1 % self.0, |acc, k| self.mul(acc, (k % self.0 as u64) as u32))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

fn is_prime(n: u64) -> bool {
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

/// Exponent vector of `T_1^{k_1} ... T_m^{k_m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u64>);

impl MultiIndex {
    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    pub fn unit(m: usize, i: usize, k: u64) -> Self {
        let mut v = vec![0; m];
        v[i] = k;
        MultiIndex(v)
    }

    pub fn uni(k: u64) -> Self {
        MultiIndex(vec![k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// True when every entry is divisible by `d`.
    pub fn divisible_by(&self, d: u64) -> bool {
        self.0.iter().all(|&k| k % d == 0)
    }

    /// Every `i <= self` componentwise; the pairs `(i, self - i)` enumerate
    /// the splittings `i + j = self`.
    pub fn splittings(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let mut out = Vec::new();
        let mut cur = vec![0u64; self.len()];
        loop {
            let i = MultiIndex(cur.clone());
            let j = self.checked_sub(&i).expect("componentwise below");
            out.push((i, j));
            let mut pos = 0;
            loop {
                if pos == cur.len() {
                    return out;
                }
                if cur[pos] < self.0[pos] {
                    cur[pos] += 1;
                    break;
                }
                cur[pos] = 0;
                pos += 1;
            }
        }
    }

    /// All multi-indices of length `m` with total degree at most `n`, in
    /// increasing total degree.
    pub fn up_to_total(m: usize, n: u64) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in 0..=n {
            compositions(m, d, &mut Vec::new(), &mut out);
        }
        out
    }

    /// `J_ell`: nonzero multi-indices with every entry below `p^ell`.
    pub fn j_set(m: usize, p: Prime, ell: u32) -> Vec<MultiIndex> {
        let bound = p.power(ell) as u64;
        let mut out = Vec::new();
        let total = (bound as usize).pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = Vec::with_capacity(m);
            for _ in 0..m {
                v.push((c % bound as usize) as u64);
                c /= bound as usize;
            }
            let k = MultiIndex(v);
            if !k.is_zero() {
                out.push(k);
            }
        }
        out.sort_by_key(|k| (k.total(), k.clone()));
        out
    }
}

fn compositions(m: usize, d: u64, prefix: &mut Vec<u64>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == m {
        prefix.push(d);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    if m == 0 {
        if d == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    for first in (0..=d).rev() {
        prefix.push(first);
        compositions(m, d - first, prefix, out);
        prefix.pop();
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

fn small_binom(p: Prime, a: u64, n: u64) -> u32 {
    if n > a {
        return 0;
    }
    // a, n < p here, so the factorials are invertible.
    let num = p.factorial(a);
    let den = p.mul(p.factorial(n), p.factorial(a - n));
    p.mul(num, p.inv(den).expect("digits below p"))
}

/// `binom(a, n) mod p` via Lucas' theorem. Negative `a` uses its p-adic
/// expansion, whose digits are eventually `p - 1`; this agrees with the
/// generalized binomial `a(a-1)...(a-n+1)/n!`.
pub fn lucas_binom(p: Prime, a: i64, n: u64) -> u32 {
    let pi = p.as_i64();
    let pu = p.get() as u64;
    let mut x = a as i128;
    let mut n = n;
    let mut acc = 1 % p.get();
    while n > 0 {
        let ai = x.rem_euclid(pi as i128);
        let ni = n % pu;
        acc = p.mul(acc, small_binom(p, ai as u64, ni));
        if acc == 0 {
            return 0;
        }
        x = (x - ai) / pi as i128;
        n /= pu;
    }
    acc
}

/// `binom(i + j, i) = prod_mu binom(i_mu + j_mu, i_mu)`.
pub fn multi_binom(p: Prime, i: &MultiIndex, j: &MultiIndex) -> Result<u32> {
    if i.len() != j.len() {
        return Err(Error::LengthMismatch(i.len(), j.len()));
    }
    Ok(i.0.iter().zip(&j.0).fold(1 % p.get(), |acc, (&a, &b)| {
        p.mul(acc, lucas_binom(p, (a + b) as i64, a))
    }))
}

/// Base-p digits of `n`, least significant first.
pub fn base_p_digits(p: Prime, mut n: u64) -> Vec<u64> {
    let pu = p.get() as u64;
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % pu);
        n /= pu;
    }
    out
}

/// A truncated p-adic integer `a_0 + a_1 p + ... + a_{D-1} p^{D-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicDigits {
    p: Prime,
    digits: Vec<u32>,
}

impl PAdicDigits {
    pub fn new(p: Prime, digits: Vec<u32>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= p.get()) {
            return Err(Error::BadDigit { digit: d as u64, p: p.get() });
        }
        Ok(PAdicDigits { p, digits })
    }

    /// Parses comma-separated digits, lowest first, e.g. `"1,1,0,1"`.
    pub fn parse(p: Prime, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return PAdicDigits::new(p, Vec::new());
        }
        let digits = s
            .split(',')
            .map(|d| {
                d.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("digit {d:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PAdicDigits::new(p, digits)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit(&self, i: usize) -> Result<u32> {
        self.digits
            .get(i)
            .copied()
            .ok_or(Error::DepthExceeded { requested: i + 1, depth: self.depth() })
    }

    /// `alpha_k = sum_{i<k} a_i p^i`.
    pub fn truncation(&self, k: usize) -> Result<i64> {
        if k > self.depth() {
            return Err(Error::DepthExceeded { requested: k, depth: self.depth() });
        }
        let mut acc: i64 = 0;
        let mut pw: i64 = 1;
        for &d in &self.digits[..k] {
            acc = acc
                .checked_add(d as i64 * pw)
                .ok_or_else(|| Error::Precision("truncation overflows i64".into()))?;
            pw = pw.saturating_mul(self.p.as_i64());
        }
        Ok(acc)
    }

    /// The stream `(alpha - alpha_ell) / p^ell`, i.e. the digits from
    /// position `ell` on.
    pub fn digit_shift(&self, ell: usize) -> Result<PAdicDigits> {
        if ell > self.depth() {
            return Err(Error::DepthExceeded { requested: ell, depth: self.depth() });
        }
        Ok(PAdicDigits { p: self.p, digits: self.digits[ell..].to_vec() })
    }

    /// `(c + mult * alpha) mod p^k` as a value in `0..p^k`; needs `k <= depth`.
    pub fn affine_residue(&self, mult: i64, c: i64, k: usize) -> Result<i64> {
        let a = self.truncation(k)? as i128;
        let m = self.p.power(k as u32) as i128;
        Ok(((c as i128 + mult as i128 * a).rem_euclid(m)) as i64)
    }
}

impl fmt::Display for PAdicDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Prime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let p = s
            .trim()
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("prime {s:?}: {e}")))?;
        Prime::new(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(Prime::new(4), Err(Error::NotPrime(4)));
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert!(Prime::new(7).is_ok());
    }

    #[test]
    fn fermat_roots_are_identity() {
        let q = p(5);
        for x in 0..5 {
            assert_eq!(q.pow(x, 5), x);
        }
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom(p(2), 3, 4), 0);
        assert_eq!(lucas_binom(p(2), 6, 2), 1);
        assert_eq!(lucas_binom(p(3), -1, 1), 2);
        for a in -5..5 {
            assert_eq!(lucas_binom(p(3), a, 0), 1);
        }
    }

    #[test]
    fn lucas_negative_matches_generalized_binomial() {
        // (a)(a-1)...(a-n+1)/n! computed over the integers, then reduced.
        for &q in &[2u64, 3, 5] {
            let pr = p(q);
            for a in -20i64..0 {
                for n in 0u64..10 {
                    let mut num: i128 = 1;
                    let mut den: i128 = 1;
                    for i in 0..n as i128 {
                        num *= a as i128 - i;
                        den *= i + 1;
                    }
                    let exact = num / den;
                    assert_eq!(lucas_binom(pr, a, n), exact.rem_euclid(q as i128) as u32);
                }
            }
        }
    }

    #[test]
    fn multi_binom_examples() {
        let mi = |v: &[u64]| MultiIndex(v.to_vec());
        assert_eq!(multi_binom(p(2), &mi(&[0, 0]), &mi(&[5, 7])).unwrap(), 1);
        assert_eq!(multi_binom(p(2), &mi(&[1, 1]), &mi(&[1, 1])).unwrap(), 0);
        assert_eq!(multi_binom(p(3), &mi(&[1, 0]), &mi(&[2, 0])).unwrap(), 0);
        assert_eq!(
            multi_binom(p(3), &mi(&[1]), &mi(&[1, 2])),
            Err(Error::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn truncation_and_shift() {
        let a = PAdicDigits::parse(p(2), "1,1,0,1").unwrap();
        assert_eq!(a.truncation(3).unwrap(), 3);
        assert_eq!(a.truncation(0).unwrap(), 0);
        assert_eq!(a.truncation(4).unwrap(), 11);
        assert!(matches!(a.truncation(5), Err(Error::DepthExceeded { .. })));
        assert_eq!(a.digit_shift(1).unwrap().digits(), &[1, 0, 1]);
        assert_eq!(a.digit_shift(0).unwrap(), a);
        let b = PAdicDigits::parse(p(3), "0,2,1").unwrap();
        assert_eq!(b.digit_shift(2).unwrap().digits(), &[1]);
        assert!(a.digit_shift(5).is_err());
    }

    #[test]
    fn shifted_truncations_satisfy_the_defining_identity() {
        let a = PAdicDigits::parse(p(3), "2,0,1,2,2,1").unwrap();
        for ell in 0..=a.depth() {
            let b = a.digit_shift(ell).unwrap();
            for k in 0..=b.depth() {
                let lhs = b.truncation(k).unwrap();
                let rhs = (a.truncation(k + ell).unwrap() - a.truncation(ell).unwrap())
                    / p(3).power(ell as u32);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn parse_rejects_large_digit() {
        assert!(matches!(
            PAdicDigits::parse(p(2), "1,2"),
            Err(Error::BadDigit { digit: 2, p: 2 })
        ));
    }

    #[test]
    fn splittings_and_j_sets() {
        let k = MultiIndex(vec![1, 2]);
        assert_eq!(k.splittings().len(), 6);
        assert_eq!(MultiIndex::j_set(2, p(2), 1).len(), 3);
        assert_eq!(MultiIndex::j_set(1, p(3), 2).len(), 8);
        assert!(MultiIndex::j_set(1, p(2), 0).is_empty());
        assert_eq!(MultiIndex::up_to_total(2, 2).len(), 6);
    }
}
