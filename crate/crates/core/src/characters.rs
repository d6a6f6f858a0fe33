//! The quasicharacter `|x|^s` and quadratic Hecke characters evaluated on
//! ideles that are trivial at the ramified places.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::adele::{Idele, Place};
use crate::arith::{self, factorize, kronecker, Rat, SymbolValue};
use crate::error::{domain, Error, Result};

/// `x -> |x|^s` on ideles. `s` plays the role of the coupling constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiCharacter {
    pub s: Complex64,
}

impl QuasiCharacter {
    pub fn new(s: Complex64) -> Result<QuasiCharacter> {
        if !s.re.is_finite() || !s.im.is_finite() {
            return domain("s must be finite");
        }
        Ok(QuasiCharacter { s })
    }

    pub fn eval(&self, x: &Idele) -> Complex64 {
        (self.s * ln_rat(&x.norm())).exp()
    }
}

fn ln_rat(r: &Rat) -> f64 {
    // numerator and denominator separately so huge norms do not overflow
    let ln_big = |n: &num_bigint::BigInt| {
        let bits = n.bits();
        if bits < 1000 {
            n.to_f64().expect("finite").abs().ln()
        } else {
            let shift = bits - 64;
            (n.abs() >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
        }
    };
    ln_big(r.numer()) - ln_big(r.denom())
}

pub fn omega_s_eval(chi: &QuasiCharacter, x: &Idele) -> Complex64 {
    chi.eval(x)
}

/// Quadratic Hecke character attached to a discriminant `D`, evaluated through
/// Kronecker symbols `(D/p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadHeckeChar {
    disc: i64,
    ramified_finite: BTreeSet<u64>,
    ramified_at_infinity: bool,
}

impl QuadHeckeChar {
    /// Accepts any nonzero `D ≡ 0, 1 mod 4`; `D = 1` is the trivial character.
    pub fn new(disc: i64) -> Result<QuadHeckeChar> {
        if disc == 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
            return domain(format!("{disc} is not a discriminant (need D ≡ 0, 1 mod 4, D ≠ 0)"));
        }
        let ramified_finite = factorize(disc.unsigned_abs())?
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        Ok(QuadHeckeChar {
            disc,
            ramified_finite,
            ramified_at_infinity: disc < 0,
        })
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn ramified_finite(&self) -> &BTreeSet<u64> {
        &self.ramified_finite
    }

    pub fn ramified_at_infinity(&self) -> bool {
        self.ramified_at_infinity
    }

    pub fn is_ramified(&self, place: Place) -> bool {
        match place {
            Place::Real => self.ramified_at_infinity,
            Place::Finite(p) => self.ramified_finite.contains(&p),
        }
    }

    /// Value at an unramified prime.
    pub fn at_prime(&self, p: u64) -> SymbolValue {
        kronecker(self.disc, p as i64).expect("p ≠ 0")
    }

    pub fn eval(&self, x: &Idele) -> Result<SymbolValue> {
        self.eval_with(x, |d, p| kronecker(d, p as i64).expect("p ≠ 0"))
    }

    /// `prod_{p ∤ D} symbol(D, p)^(-v_p(x))` with the local symbol supplied by
    /// the caller. The duality sweep uses this to inject faults.
    pub fn eval_with<F>(&self, x: &Idele, symbol: F) -> Result<SymbolValue>
    where
        F: Fn(i64, u64) -> SymbolValue,
    {
        if self.ramified_at_infinity && x.real_component().is_negative() {
            return Err(Error::RamifiedCollision(Place::Real));
        }
        for &p in &self.ramified_finite {
            if !num_traits::One::is_one(x.component(p)) {
                return Err(Error::RamifiedCollision(Place::Finite(p)));
            }
        }
        Ok(x.valuation_vector()
            .into_iter()
            .filter(|(p, _)| !self.ramified_finite.contains(p))
            .map(|(p, v)| symbol(self.disc, p).pow(-v))
            .product())
    }
}

pub fn hecke_eval(chi: &QuadHeckeChar, x: &Idele) -> Result<SymbolValue> {
    chi.eval(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub disc: i64,
    pub r_max: u64,
    /// Number of `r` that met the coprimality and congruence conditions.
    pub checked: u64,
    /// Smallest `r` whose symbol product was not 1.
    pub first_counterexample: Option<u64>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.first_counterexample.is_none()
    }
}

pub const SWEEP_LIMIT: u64 = 100_000;

/// Checks that `prod_{p | r} (D/p)^{v_p(r)} = 1` for every `r ≤ r_max` with
/// `gcd(r, D) = 1` and `r ≡ 1 mod |D|`, i.e. that the character only sees
/// residues mod `|D|` on the positive rationals.
pub fn well_definedness_sweep(disc: i64, r_max: u64) -> Result<SweepReport> {
    let chi = QuadHeckeChar::new(disc)?;
    if r_max > SWEEP_LIMIT {
        return domain(format!("r_max {r_max} exceeds {SWEEP_LIMIT}"));
    }
    let modulus = disc.unsigned_abs();
    let mut checked = 0;
    let mut first_counterexample = None;
    for r in (1..=r_max).filter(|r| r % modulus == 1 % modulus) {
        if arith::gcd(r as i64, disc) != 1 {
            continue;
        }
        checked += 1;
        let value: SymbolValue = factorize(r)?
            .into_iter()
            .map(|(p, e)| chi.at_prime(p).pow(e as i64))
            .product();
        if value != SymbolValue::One {
            first_counterexample = Some(r);
            break;
        }
    }
    Ok(SweepReport {
        disc,
        r_max,
        checked,
        first_counterexample,
    })
}
