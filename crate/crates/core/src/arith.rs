//! Exact integer and rational primitives: quadratic symbols, valuations,
//! factorization and modular exponentiation.
//!
//! Everything here works at desk scale. Factorization and primality use trial
//! division with a hard input bound of [`FACTOR_BOUND`].

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Exact rational number. `BigRational` keeps the denominator positive and the
/// fraction reduced, which is exactly the invariant local components need.
pub type Rat = BigRational;

/// Largest integer accepted by [`factorize`] and [`is_prime`].
pub const FACTOR_BOUND: u64 = 1_000_000_000;

/// Value of a quadratic symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum SymbolValue {
    MinusOne,
    Zero,
    One,
}

impl SymbolValue {
    pub fn as_i8(self) -> i8 {
        match self {
            SymbolValue::MinusOne => -1,
            SymbolValue::Zero => 0,
            SymbolValue::One => 1,
        }
    }

    /// Integer power. Negative exponents are allowed for the units ±1.
    pub fn pow(self, e: i64) -> SymbolValue {
        match self {
            SymbolValue::One => SymbolValue::One,
            SymbolValue::Zero if e == 0 => SymbolValue::One,
            SymbolValue::Zero => SymbolValue::Zero,
            SymbolValue::MinusOne if e.rem_euclid(2) == 0 => SymbolValue::One,
            SymbolValue::MinusOne => SymbolValue::MinusOne,
        }
    }

    pub fn is_unit(self) -> bool {
        self != SymbolValue::Zero
    }
}

impl From<SymbolValue> for i8 {
    fn from(v: SymbolValue) -> i8 {
        v.as_i8()
    }
}

impl TryFrom<i8> for SymbolValue {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            -1 => Ok(SymbolValue::MinusOne),
            0 => Ok(SymbolValue::Zero),
            1 => Ok(SymbolValue::One),
            other => Err(format!("{other} is not a quadratic symbol value")),
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;

    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        SymbolValue::try_from(self.as_i8() * rhs.as_i8()).expect("closed under product")
    }
}

impl Neg for SymbolValue {
    type Output = SymbolValue;

    fn neg(self) -> SymbolValue {
        SymbolValue::try_from(-self.as_i8()).expect("closed under negation")
    }
}

impl std::iter::Product for SymbolValue {
    fn product<I: Iterator<Item = SymbolValue>>(iter: I) -> SymbolValue {
        iter.fold(SymbolValue::One, |acc, x| acc * x)
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `n` or `n/d`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().map_err(|_| bad())?,
            d.trim().parse::<BigInt>().map_err(|_| bad())?,
        ),
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Deterministic primality by trial division, valid up to [`FACTOR_BOUND`]
/// (and correct, just slow, beyond it).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Primes up to and including `limit`, by sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// `a^e mod m` by square-and-multiply, result in `[0, m)`.
pub fn modpow(a: i64, e: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return domain(format!("modulus must be at least 2, got {m}"));
    }
    Ok(modpow_u(a.rem_euclid(m as i64) as u64, e, m))
}

pub(crate) fn modpow_u(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Legendre symbol by Euler's criterion `a^((p-1)/2) mod p`.
///
/// This is deliberately the slow, obviously-correct route; other modules and
/// tests use it as the reference for [`kronecker`].
pub fn legendre(a: i64, p: u64) -> Result<SymbolValue> {
    if p == 2 || !is_prime(p) {
        return domain(format!("Legendre symbol needs an odd prime, got {p}"));
    }
    let r = modpow_u(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
    Ok(if r == 0 {
        SymbolValue::Zero
    } else if r == 1 {
        SymbolValue::One
    } else {
        debug_assert_eq!(r, p - 1);
        SymbolValue::MinusOne
    })
}

/// Kronecker symbol `(d/n)`, the standard extension of the Jacobi symbol:
/// `(d/2)` is 0 for even `d` and `(-1)^((d^2-1)/8)` otherwise, `(d/-1)` is the
/// sign of `d`, and `(d/0)` is 1 exactly when `d = ±1`.
pub fn kronecker(d: i64, n: i64) -> Result<SymbolValue> {
    if d == 0 && n == 0 {
        return domain("Kronecker symbol (0/0) is undefined");
    }
    let mut a = d as i128;
    let mut b = n as i128;
    if b == 0 {
        return Ok(if a.abs() == 1 { SymbolValue::One } else { SymbolValue::Zero });
    }
    if a % 2 == 0 && b % 2 == 0 {
        return Ok(SymbolValue::Zero);
    }
    let mut t: i8 = 1;
    if b < 0 {
        b = -b;
        if a < 0 {
            t = -t;
        }
    }
    let v = b.trailing_zeros();
    b >>= v;
    if v % 2 == 1 {
        // (a/2) for odd a
        match a.rem_euclid(8) {
            3 | 5 => t = -t,
            _ => {}
        }
    }
    // Jacobi symbol (a/b) with b odd and positive.
    a = a.rem_euclid(b);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = b % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            t = -t;
        }
        a %= b;
    }
    Ok(if b == 1 {
        SymbolValue::try_from(t).expect("±1")
    } else {
        SymbolValue::Zero
    })
}

/// Sorted prime factorization of `n`; empty for `n = 1`.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    if n > FACTOR_BOUND {
        return domain(format!("{n} exceeds the trial-division bound {FACTOR_BOUND}"));
    }
    Ok(trial_factor(n))
}

fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5u64;
    while d * d <= n {
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: i64) -> Result<bool> {
    if n == 0 {
        return Ok(false);
    }
    Ok(factorize(n.unsigned_abs())?.iter().all(|&(_, e)| e == 1))
}

/// `v_p(n)` for a nonzero integer.
pub(crate) fn valuation_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub(crate) fn valuation_unchecked(r: &Rat, p: u64) -> i64 {
    valuation_int(r.numer(), p) - valuation_int(r.denom(), p)
}

/// `v_p(r) = v_p(numerator) - v_p(denominator)`.
pub fn valuation(r: &Rat, p: u64) -> Result<i64> {
    if r.is_zero() {
        return domain("valuation of zero");
    }
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    Ok(valuation_unchecked(r, p))
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn rat_support(r: &Rat) -> Result<Vec<u64>> {
    if r.is_zero() {
        return domain("support of zero");
    }
    let as_u64 = |n: &BigInt| {
        n.abs()
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("{n} exceeds the factorization bound")))
    };
    let mut primes: Vec<u64> = factorize(as_u64(r.numer())?)?
        .into_iter()
        .chain(factorize(as_u64(r.denom())?)?)
        .map(|(p, _)| p)
        .collect();
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// `p^e` as an exact rational; `e` may be negative.
pub(crate) fn rat_prime_power(p: u64, e: i64) -> Rat {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(base)
    } else {
        Rat::new(BigInt::one(), base)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_residue(a: i64, p: u64) -> SymbolValue {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return SymbolValue::Zero;
        }
        if (1..p).any(|x| x * x % p == a) {
            SymbolValue::One
        } else {
            SymbolValue::MinusOne
        }
    }

    // Jacobi symbol assembled from Legendre symbols of the factors of n.
    fn jacobi_by_factoring(d: i64, n: u64) -> SymbolValue {
        factorize(n)
            .unwrap()
            .into_iter()
            .map(|(p, e)| legendre(d, p).unwrap().pow(e as i64))
            .product()
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(5, 13).unwrap(), SymbolValue::MinusOne);
        assert_eq!(legendre(4, 7).unwrap(), SymbolValue::One);
        assert_eq!(legendre(13, 5).unwrap(), SymbolValue::MinusOne);
        assert_eq!(legendre(26, 13).unwrap(), SymbolValue::Zero);
    }

    #[test]
    fn legendre_rejects_bad_moduli() {
        assert!(matches!(legendre(3, 2), Err(Error::Domain(_))));
        assert!(matches!(legendre(3, 15), Err(Error::Domain(_))));
        assert!(matches!(legendre(3, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn legendre_agrees_with_square_search() {
        for p in primes_up_to(100).into_iter().skip(1) {
            for a in -20..60 {
                assert_eq!(legendre(a, p).unwrap(), brute_residue(a, p), "({a}/{p})");
            }
        }
    }

    #[test]
    fn legendre_periodic_and_multiplicative() {
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in -50i64..50 {
                let reduced = a.rem_euclid(p as i64);
                assert_eq!(legendre(a, p).unwrap(), legendre(reduced, p).unwrap());
            }
        }
        for p in primes_up_to(100).into_iter().skip(1) {
            for a in 1..p as i64 {
                for b in 1..p as i64 {
                    assert_eq!(
                        legendre(a * b, p).unwrap(),
                        legendre(a, p).unwrap() * legendre(b, p).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(5, 2).unwrap(), SymbolValue::MinusOne);
        assert_eq!(kronecker(-4, 13).unwrap(), SymbolValue::One);
        assert_eq!(kronecker(8, 7).unwrap(), SymbolValue::One);
    }

    #[test]
    fn kronecker_special_moduli() {
        assert_eq!(kronecker(1, 0).unwrap(), SymbolValue::One);
        assert_eq!(kronecker(-1, 0).unwrap(), SymbolValue::One);
        assert_eq!(kronecker(3, 0).unwrap(), SymbolValue::Zero);
        assert_eq!(kronecker(-3, -1).unwrap(), SymbolValue::MinusOne);
        assert_eq!(kronecker(3, -1).unwrap(), SymbolValue::One);
        assert_eq!(kronecker(6, 2).unwrap(), SymbolValue::Zero);
        for d in -40i64..40 {
            if d % 2 == 0 {
                continue;
            }
            let expected = match d.rem_euclid(8) {
                1 | 7 => SymbolValue::One,
                _ => SymbolValue::MinusOne,
            };
            assert_eq!(kronecker(d, 2).unwrap(), expected, "({d}/2)");
        }
        assert!(kronecker(0, 0).is_err());
    }

    #[test]
    fn kronecker_matches_factored_jacobi() {
        for d in -60i64..=60 {
            for n in (1u64..=500).step_by(2) {
                if gcd(d, n as i64) != 1 {
                    continue;
                }
                assert_eq!(
                    kronecker(d, n as i64).unwrap(),
                    jacobi_by_factoring(d, n),
                    "({d}/{n})"
                );
            }
        }
    }

    #[test]
    fn kronecker_at_two_multiplicative_on_one_mod_four() {
        for d1 in (-99i64..100).filter(|d| d.rem_euclid(4) == 1) {
            for d2 in (-99i64..100).filter(|d| d.rem_euclid(4) == 1) {
                assert_eq!(
                    kronecker(d1 * d2, 2).unwrap(),
                    kronecker(d1, 2).unwrap() * kronecker(d2, 2).unwrap()
                );
            }
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&rat_int(12), 2).unwrap(), 2);
        assert_eq!(valuation(&rat(5, 8), 2).unwrap(), -3);
        assert_eq!(valuation(&rat_int(7), 5).unwrap(), 0);
        assert!(valuation(&rat_int(0), 5).is_err());
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap(), vec![]);
        assert_eq!(factorize(60).unwrap(), vec![(2, 2), (3, 1), (5, 1)]);
        assert_eq!(factorize(9973).unwrap(), vec![(9973, 1)]);
        assert!(factorize(0).is_err());
        assert!(factorize(FACTOR_BOUND + 1).is_err());
        assert!(is_prime(9973));
    }

    #[test]
    fn modpow_examples() {
        assert_eq!(modpow(2, 10, 1000).unwrap(), 24);
        assert_eq!(modpow(5, 6, 13).unwrap(), 12);
        assert_eq!(modpow(7, 0, 11).unwrap(), 1);
        assert_eq!(modpow(-2, 3, 7).unwrap(), 6);
        assert!(modpow(2, 2, 1).is_err());
        // direct multiplication oracle
        let direct = (0..6).fold(1u64, |acc, _| acc * 5 % 13);
        assert_eq!(direct, 12);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let sieve = primes_up_to(2000);
        let trial: Vec<u64> = (0..=2000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, trial);
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("13").unwrap(), rat_int(13));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn valuation_is_additive(
            a in 1i64..5000, b in 1i64..5000, c in 1i64..5000, d in 1i64..5000,
            sa in any::<bool>(), sc in any::<bool>(),
            pi in 0usize..6,
        ) {
            let p = [2u64, 3, 5, 7, 11, 13][pi];
            let r = rat(if sa { -a } else { a }, b);
            let s = rat(if sc { -c } else { c }, d);
            let prod = &r * &s;
            prop_assert_eq!(
                valuation(&prod, p).unwrap(),
                valuation(&r, p).unwrap() + valuation(&s, p).unwrap()
            );
        }
    }
}
