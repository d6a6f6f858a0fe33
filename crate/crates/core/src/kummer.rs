//! Cubic Kummer theory over `K = Q(ζ₃)`: Eisenstein integer arithmetic, cubic
//! residue and tame Hilbert symbols, and the discriminant exponent at
//! `λ = 1 - ζ₃` of `K(∛q)/K`, which exhibits the obstruction to reading
//! higher power reciprocity off Hilbert-symbol monodromies.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, modpow};
use crate::error::{domain, Error, Result};

/// `a + bζ` with `ζ² + ζ + 1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EisensteinInt {
    pub a: i64,
    pub b: i64,
}

impl EisensteinInt {
    pub const ZERO: EisensteinInt = EisensteinInt { a: 0, b: 0 };
    pub const ONE: EisensteinInt = EisensteinInt { a: 1, b: 0 };
    pub const ZETA: EisensteinInt = EisensteinInt { a: 0, b: 1 };
    /// `λ = 1 - ζ`, the prime above 3.
    pub const LAMBDA: EisensteinInt = EisensteinInt { a: 1, b: -1 };

    pub const fn new(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt { a, b }
    }

    pub const fn int(n: i64) -> EisensteinInt {
        EisensteinInt { a: n, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// `conj(a + bζ) = (a - b) - bζ`.
    pub fn conj(&self) -> EisensteinInt {
        EisensteinInt::new(self.a - self.b, -self.b)
    }

    pub fn norm(&self) -> i64 {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// `ζ^k`.
    pub fn zeta_pow(k: u8) -> EisensteinInt {
        match k % 3 {
            0 => Self::ONE,
            1 => Self::ZETA,
            _ => EisensteinInt::new(-1, -1),
        }
    }

    /// The six units `±ζ^k`.
    pub fn units() -> [EisensteinInt; 6] {
        let z = Self::zeta_pow;
        [z(0), z(1), z(2), -z(0), -z(1), -z(2)]
    }

    pub fn pow(&self, mut e: u64) -> EisensteinInt {
        let mut acc = Self::ONE;
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Quotient of rounding division: `x - q·y` has norm below `N(y)`.
    pub fn div_round(&self, y: &EisensteinInt) -> Result<EisensteinInt> {
        if y.is_zero() {
            return domain("division by zero in Z[ζ]");
        }
        let n = y.norm() as i128;
        let num = *self * y.conj();
        let round = |v: i64| (2 * v as i128 + n).div_euclid(2 * n) as i64;
        Ok(EisensteinInt::new(round(num.a), round(num.b)))
    }

    pub fn rem(&self, y: &EisensteinInt) -> Result<EisensteinInt> {
        let q = self.div_round(y)?;
        Ok(*self - q * *y)
    }

    /// `self / y` when the division is exact.
    pub fn div_exact(&self, y: &EisensteinInt) -> Option<EisensteinInt> {
        if y.is_zero() {
            return None;
        }
        let num = *self * y.conj();
        let n = y.norm();
        (num.a % n == 0 && num.b % n == 0).then(|| EisensteinInt::new(num.a / n, num.b / n))
    }

    pub fn divides(&self, x: &EisensteinInt) -> bool {
        x.div_exact(self).is_some()
    }

    pub fn gcd(&self, other: &EisensteinInt) -> EisensteinInt {
        let (mut x, mut y) = (*self, *other);
        while !y.is_zero() {
            let r = x.rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x
    }

    /// Exponent of `pi` in `self`; `None` for zero.
    pub fn valuation(&self, pi: &EisensteinInt) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut x = *self;
        let mut v = 0;
        while let Some(y) = x.div_exact(pi) {
            x = y;
            v += 1;
        }
        Some(v)
    }

    /// `≡ ±1 (mod 3)`.
    pub fn is_primary(&self) -> bool {
        self.b.rem_euclid(3) == 0 && self.a.rem_euclid(3) != 0
    }

    /// The associate `≡ -1 (mod 3)`; fails for multiples of `λ`.
    pub fn primary_associate(&self) -> Result<EisensteinInt> {
        Self::units()
            .into_iter()
            .map(|u| u * *self)
            .find(|x| x.b.rem_euclid(3) == 0 && x.a.rem_euclid(3) == 2)
            .ok_or_else(|| Error::Domain(format!("{self} is divisible by 1 - zeta3")))
    }
}

impl Add for EisensteinInt {
    type Output = EisensteinInt;

    fn add(self, o: EisensteinInt) -> EisensteinInt {
        EisensteinInt::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for EisensteinInt {
    type Output = EisensteinInt;

    fn sub(self, o: EisensteinInt) -> EisensteinInt {
        EisensteinInt::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for EisensteinInt {
    type Output = EisensteinInt;

    fn neg(self) -> EisensteinInt {
        EisensteinInt::new(-self.a, -self.b)
    }
}

impl Mul for EisensteinInt {
    type Output = EisensteinInt;

    /// `(a + bζ)(c + dζ) = (ac - bd) + (ad + bc - bd)ζ`.
    fn mul(self, o: EisensteinInt) -> EisensteinInt {
        EisensteinInt::new(
            self.a * o.a - self.b * o.b,
            self.a * o.b + self.b * o.a - self.b * o.b,
        )
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}ζ"),
            (a, b) if b < 0 => write!(f, "{a}-{}ζ", -b),
            (a, b) => write!(f, "{a}+{b}ζ"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisPrime {
    pub generator: EisensteinInt,
    pub residue_degree: u8,
    pub over: u64,
    pub is_lambda: bool,
}

impl EisPrime {
    pub fn lambda() -> EisPrime {
        EisPrime {
            generator: EisensteinInt::LAMBDA,
            residue_degree: 1,
            over: 3,
            is_lambda: true,
        }
    }

    /// Size of the residue field.
    pub fn residue_norm(&self) -> i64 {
        (self.over as i64).pow(self.residue_degree as u32)
    }
}

/// Primes of `Z[ζ]` above `p` with their ramification indices. Generators of
/// tame primes are primary.
pub fn factor_rational_prime(p: u64) -> Result<Vec<(EisPrime, u32)>> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let pi = p as i64;
    if p == 3 {
        return Ok(vec![(EisPrime::lambda(), 2)]);
    }
    if p % 3 == 2 {
        let prime = EisPrime {
            generator: EisensteinInt::int(pi).primary_associate()?,
            residue_degree: 2,
            over: p,
            is_lambda: false,
        };
        return Ok(vec![(prime, 1)]);
    }
    // a nontrivial cube root of unity r mod p; ζ ↦ r has kernel (p, ζ - r)
    let r = (2..pi)
        .map(|g| modpow(g, (p - 1) / 3, p).expect("p > 1") as i64)
        .find(|&r| r != 1)
        .expect("p ≡ 1 mod 3 has a primitive cube root of unity");
    let g = EisensteinInt::int(pi).gcd(&(EisensteinInt::ZETA - EisensteinInt::int(r)));
    let g = g.primary_associate()?;
    debug_assert_eq!(g.norm(), pi);
    let h = g.conj().primary_associate()?;
    let make = |generator| EisPrime {
        generator,
        residue_degree: 1,
        over: p,
        is_lambda: false,
    };
    Ok(vec![(make(g), 1), (make(h), 1)])
}

/// Prime factorization of a nonzero Eisenstein integer, up to a unit.
pub fn factor(x: &EisensteinInt) -> Result<Vec<(EisPrime, u32)>> {
    if x.is_zero() {
        return domain("cannot factor zero");
    }
    let mut out = Vec::new();
    for (p, _) in factorize(x.norm() as u64)? {
        for (prime, _) in factor_rational_prime(p)? {
            let v = x.valuation(&prime.generator).expect("nonzero");
            if v > 0 {
                out.push((prime, v));
            }
        }
    }
    Ok(out)
}

/// `ζ^k` for `k` mod 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeRootOfUnity(u8);

impl CubeRootOfUnity {
    pub const ONE: CubeRootOfUnity = CubeRootOfUnity(0);

    pub fn new(k: i64) -> CubeRootOfUnity {
        CubeRootOfUnity(k.rem_euclid(3) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> CubeRootOfUnity {
        CubeRootOfUnity::new(-(self.0 as i64))
    }

    pub fn pow(self, e: i64) -> CubeRootOfUnity {
        CubeRootOfUnity::new(self.0 as i64 * e)
    }
}

impl Mul for CubeRootOfUnity {
    type Output = CubeRootOfUnity;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: CubeRootOfUnity) -> CubeRootOfUnity {
        CubeRootOfUnity::new((self.0 + o.0) as i64)
    }
}

impl std::iter::Product for CubeRootOfUnity {
    fn product<I: Iterator<Item = CubeRootOfUnity>>(iter: I) -> CubeRootOfUnity {
        iter.fold(CubeRootOfUnity::ONE, |acc, x| acc * x)
    }
}

impl fmt::Display for CubeRootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "1"),
            1 => write!(f, "ζ"),
            _ => write!(f, "ζ^2"),
        }
    }
}

fn pow_mod(x: &EisensteinInt, mut e: u64, m: &EisensteinInt) -> Result<EisensteinInt> {
    let mut acc = EisensteinInt::ONE.rem(m)?;
    let mut base = x.rem(m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc * base).rem(m)?;
        }
        base = (base * base).rem(m)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Cubic residue symbol: the `ζ^k ≡ a^{(N P - 1)/3} (mod P)`.
pub fn power_residue_symbol(a: &EisensteinInt, prime: &EisPrime) -> Result<CubeRootOfUnity> {
    if prime.is_lambda {
        return Err(Error::WildPlace);
    }
    let pi = &prime.generator;
    if pi.divides(a) {
        return domain(format!("{a} is divisible by {pi}"));
    }
    let e = ((prime.residue_norm() - 1) / 3) as u64;
    let r = pow_mod(a, e, pi)?;
    (0..3u8)
        .find(|&k| pi.divides(&(r - EisensteinInt::zeta_pow(k))))
        .map(|k| CubeRootOfUnity::new(k as i64))
        .ok_or_else(|| Error::Domain(format!("{a}^{e} is not a cube root of unity mod {pi}")))
}

/// Tame Hilbert symbol `(a, b)_P`: the residue symbol of
/// `(-1)^{αβ} a^β / b^α` with `α = v_P(a)`, `β = v_P(b)`.
pub fn tame_hilbert(a: &EisensteinInt, b: &EisensteinInt, prime: &EisPrime) -> Result<CubeRootOfUnity> {
    if prime.is_lambda {
        return Err(Error::WildPlace);
    }
    if a.is_zero() || b.is_zero() {
        return domain("Hilbert symbol arguments must be nonzero");
    }
    let pi = &prime.generator;
    let alpha = a.valuation(pi).expect("nonzero");
    let beta = b.valuation(pi).expect("nonzero");
    let unit_part = |x: &EisensteinInt, v: u32| x.div_exact(&pi.pow(v as u64)).expect("exact");
    // -1 = (-1)^3 is a cube, so the sign never contributes
    let ka = power_residue_symbol(&unit_part(a, alpha), prime)?;
    let kb = power_residue_symbol(&unit_part(b, beta), prime)?;
    Ok(ka.pow(beta as i64) * kb.pow(-(alpha as i64)))
}

/// Largest `k ≤ 3` with `q ≡ c³ (mod λ^k)` for some `c`. Cubes mod `λ³` only
/// depend on `c` mod `λ`, so residues `c` mod 9 are more than enough.
fn cube_approximation_order(q: i64) -> u32 {
    let lambda = EisensteinInt::LAMBDA;
    let qe = EisensteinInt::int(q);
    let mut best = 0;
    for a in 0..9 {
        for b in 0..9 {
            let c = EisensteinInt::new(a, b);
            let diff = qe - c.pow(3);
            let v = if diff.is_zero() { 3 } else { diff.valuation(&lambda).expect("nonzero").min(3) };
            best = best.max(v);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorExponent {
    pub q: i64,
    /// `max_c v_λ(q - c³)`, capped at `3 = 3·v_λ(3)/2`.
    pub w: u32,
    /// Conductor exponent of `K(∛q)/K` at `λ`.
    pub f_v: u32,
    /// Exponent of `λ` in the relative discriminant.
    pub disc_exp_v: u32,
    /// Discriminant exponent at each tamely ramified prime dividing `q`.
    pub tame_disc_exp: u32,
}

fn is_perfect_cube(q: i64) -> bool {
    let r = (q.unsigned_abs() as f64).cbrt().round() as i64;
    (r - 1..=r + 1).any(|c| c * c * c == q.abs())
}

/// Ramification of `K(∛q)/K` at `λ`, for `q` prime to 3 and not a cube.
///
/// With `w` as above: `w = 3` means unramified; otherwise the conductor
/// exponent is `3 - w + 1` and, both nontrivial characters of the cyclic
/// cubic extension having that conductor, the discriminant exponent is twice it.
pub fn kummer_conductor_exponent(q: i64) -> Result<ConductorExponent> {
    if q == 0 || q % 3 == 0 {
        return domain(format!("{q} must be nonzero and prime to 3"));
    }
    if is_perfect_cube(q) {
        return domain(format!("{q} is a cube"));
    }
    let w = cube_approximation_order(q);
    let f_v = if w >= 3 { 0 } else { 3 - w + 1 };
    Ok(ConductorExponent {
        q,
        w,
        f_v,
        disc_exp_v: 2 * f_v,
        tame_disc_exp: 2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureReport {
    pub conductor: ConductorExponent,
    pub residue_mod_3: u32,
    /// The discriminant exponent at `λ` is prime to 3, so the symbol
    /// `(λ, L/K)^{exp}` need not vanish while Hilbert reciprocity forces it to.
    pub obstruction: bool,
}

impl fmt::Display for FailureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.conductor;
        write!(
            f,
            "q={} w={} f_v={} disc_exp_v={} mod3={} obstruction {}",
            c.q,
            c.w,
            c.f_v,
            c.disc_exp_v,
            self.residue_mod_3,
            if self.obstruction { "PRESENT" } else { "ABSENT" }
        )
    }
}

pub fn failure_case_report(q: i64) -> Result<FailureReport> {
    let conductor = kummer_conductor_exponent(q)?;
    let residue_mod_3 = conductor.disc_exp_v % 3;
    Ok(FailureReport {
        conductor,
        residue_mod_3,
        obstruction: residue_mod_3 != 0,
    })
}

/// `(a/b)₃ = ∏ (a/π)₃^{v_π(b)}` over the prime factors of `b`.
pub fn jacobi_cubic(a: &EisensteinInt, b: &EisensteinInt) -> Result<CubeRootOfUnity> {
    let mut acc = CubeRootOfUnity::ONE;
    for (prime, v) in factor(b)? {
        acc = acc * power_residue_symbol(a, &prime)?.pow(v as i64);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicCheck {
    pub a: EisensteinInt,
    pub b: EisensteinInt,
    pub a_over_b: CubeRootOfUnity,
    pub b_over_a: CubeRootOfUnity,
    pub equal: bool,
}

impl fmt::Display for CubicCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={} b={} (a/b)={} (b/a)={} {}",
            self.a,
            self.b,
            self.a_over_b,
            self.b_over_a,
            if self.equal { "OK" } else { "FAIL" }
        )
    }
}

/// Cubic reciprocity `(a/b)₃ = (b/a)₃` for coprime primary `a`, `b`, each
/// side computed from residue symbols at the prime factors of the other.
pub fn cubic_reciprocity_check(a: &EisensteinInt, b: &EisensteinInt) -> Result<CubicCheck> {
    if !a.is_primary() || !b.is_primary() {
        return domain("arguments must be primary (≡ ±1 mod 3)");
    }
    if !a.gcd(b).is_unit() {
        return domain(format!("{a} and {b} are not coprime"));
    }
    let a = a.primary_associate()?;
    let b = b.primary_associate()?;
    let a_over_b = jacobi_cubic(&a, &b)?;
    let b_over_a = jacobi_cubic(&b, &a)?;
    Ok(CubicCheck {
        a,
        b,
        a_over_b,
        b_over_a,
        equal: a_over_b == b_over_a,
    })
}

/// A random primary prime of norm at most `max_norm`.
pub fn random_primary_prime<R: Rng>(rng: &mut R, max_norm: u64) -> EisensteinInt {
    loop {
        let p = rng.gen_range(2..=max_norm);
        if !is_prime(p) || p == 3 || (p % 3 == 2 && p * p > max_norm) {
            continue;
        }
        let primes = factor_rational_prime(p).expect("prime");
        return primes[rng.gen_range(0..primes.len())].0.generator;
    }
}

/// Cubic reciprocity on `count` random pairs of distinct primary primes of norm ≤ 10⁴.
pub fn cubic_reciprocity_sweep<R: Rng>(rng: &mut R, count: usize) -> Result<Vec<CubicCheck>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = random_primary_prime(rng, 10_000);
        let b = random_primary_prime(rng, 10_000);
        if a == b {
            continue;
        }
        out.push(cubic_reciprocity_check(&a, &b)?);
    }
    Ok(out)
}
