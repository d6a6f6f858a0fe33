//! Ideles of the rationals as finitely supported local data.
//!
//! An [`Idele`] stores its real component, an explicit map of finite
//! components, and a *default* component used at every prime missing from the
//! map. For ordinary ideles the default is 1. For diagonal images `tau(r)` the
//! default is `r` itself, since `tau(r)` has component `r` at every place; a
//! sparse map with an implicit 1 would misreport all unstored primes.
//!
//! Canonical form: no stored finite entry equals the default. Two ideles are
//! equal iff their components agree everywhere, which for canonical values is
//! plain structural equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime, parse_rat, rat_prime_power, Rat};
use crate::error::{domain, Error, Result};

/// A place of the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Place {
    Real,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            domain(format!("{p} is not prime"))
        }
    }

    pub fn prime(self) -> Option<u64> {
        match self {
            Place::Real => None,
            Place::Finite(p) => Some(p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl From<Place> for String {
    fn from(p: Place) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Place {
    type Error = Error;

    fn try_from(s: String) -> Result<Place> {
        s.parse()
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infty" | "real" | "∞" => Ok(Place::Real),
            other => {
                let p: u64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("not a place: {other:?}")))?;
                Place::finite(p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Idele {
    real: Rat,
    finite: BTreeMap<u64, Rat>,
    rest: Rat,
    // primes where `rest` is not a unit; cached so evaluation never refactors
    rest_primes: Vec<u64>,
}

impl Idele {
    pub fn identity() -> Idele {
        Idele {
            real: Rat::one(),
            finite: BTreeMap::new(),
            rest: Rat::one(),
            rest_primes: Vec::new(),
        }
    }

    /// An idele with the given real and finite components and 1 elsewhere.
    pub fn new(real: Rat, finite: impl IntoIterator<Item = (u64, Rat)>) -> Result<Idele> {
        Idele::with_default(real, finite, Rat::one())
    }

    /// An idele whose unstored finite components all equal `rest`.
    pub fn with_default(
        real: Rat,
        finite: impl IntoIterator<Item = (u64, Rat)>,
        rest: Rat,
    ) -> Result<Idele> {
        if real.is_zero() {
            return domain("real component must be nonzero");
        }
        if rest.is_zero() {
            return domain("default component must be nonzero");
        }
        let mut map = BTreeMap::new();
        for (p, x) in finite {
            if !is_prime(p) {
                return domain(format!("{p} is not prime"));
            }
            if x.is_zero() {
                return domain(format!("component at {p} is zero"));
            }
            if map.insert(p, x).is_some() {
                return domain(format!("duplicate component at {p}"));
            }
        }
        let rest_primes = arith::rat_support(&rest)?;
        Ok(Idele {
            real,
            finite: map,
            rest,
            rest_primes,
        }
        .canonical())
    }

    /// Diagonal embedding of a nonzero rational.
    pub fn principal(r: &Rat) -> Result<Idele> {
        if r.is_zero() {
            return domain("tau is only defined on nonzero rationals");
        }
        let support = arith::rat_support(r)?;
        let finite = support.iter().map(|&p| (p, r.clone()));
        Idele::with_default(r.clone(), finite, r.clone())
    }

    /// Norm-one idele with component `p` at the real place and at `p`, 1 elsewhere.
    pub fn alpha(p: u64) -> Result<Idele> {
        let x = Rat::from_integer(p.into());
        Idele::new(x.clone(), [(p, x)])
    }

    /// `(-1, 1, 1, ...)`: -1 at the real place, 1 at every prime.
    pub fn alpha_infinity() -> Idele {
        Idele {
            real: -Rat::one(),
            ..Idele::identity()
        }
    }

    /// The Wilson idele attached to a place.
    pub fn alpha_at(place: Place) -> Result<Idele> {
        match place {
            Place::Real => Ok(Idele::alpha_infinity()),
            Place::Finite(p) => Idele::alpha(p),
        }
    }

    fn canonical(mut self) -> Idele {
        let rest = &self.rest;
        self.finite.retain(|_, x| x != rest);
        self
    }

    pub fn real_component(&self) -> &Rat {
        &self.real
    }

    pub fn component(&self, p: u64) -> &Rat {
        self.finite.get(&p).unwrap_or(&self.rest)
    }

    pub fn component_at(&self, place: Place) -> &Rat {
        match place {
            Place::Real => &self.real,
            Place::Finite(p) => self.component(p),
        }
    }

    /// Component used at every prime not explicitly stored.
    pub fn default_component(&self) -> &Rat {
        &self.rest
    }

    pub fn stored_components(&self) -> impl Iterator<Item = (u64, &Rat)> {
        self.finite.iter().map(|(&p, x)| (p, x))
    }

    /// Primes at which the component might be a non-unit.
    fn candidate_primes(&self) -> BTreeSet<u64> {
        self.finite
            .keys()
            .copied()
            .chain(self.rest_primes.iter().copied())
            .collect()
    }

    pub fn valuation(&self, p: u64) -> i64 {
        arith::valuation_unchecked(self.component(p), p)
    }

    /// Nonzero finite valuations, keyed by prime.
    pub fn valuation_vector(&self) -> BTreeMap<u64, i64> {
        self.candidate_primes()
            .into_iter()
            .filter_map(|p| {
                let v = self.valuation(p);
                (v != 0).then_some((p, v))
            })
            .collect()
    }

    pub fn inv(&self) -> Idele {
        Idele {
            real: self.real.recip(),
            finite: self.finite.iter().map(|(&p, x)| (p, x.recip())).collect(),
            rest: self.rest.recip(),
            rest_primes: self.rest_primes.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Idele {
        let base = if e < 0 { self.inv() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Idele::identity(), |acc, _| &acc * &base)
    }

    /// `|x| = |x_inf| * prod_p p^(-v_p(x_p))`, exactly.
    pub fn norm(&self) -> Rat {
        self.candidate_primes()
            .into_iter()
            .fold(self.real.abs(), |acc, p| acc * rat_prime_power(p, -self.valuation(p)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Idele::identity()
    }
}

impl Mul for &Idele {
    type Output = Idele;

    fn mul(self, rhs: &Idele) -> Idele {
        let keys: BTreeSet<u64> = self.finite.keys().chain(rhs.finite.keys()).copied().collect();
        let finite = keys
            .into_iter()
            .map(|p| (p, self.component(p) * rhs.component(p)))
            .collect();
        let rest = &self.rest * &rhs.rest;
        let rest_primes: Vec<u64> = self
            .rest_primes
            .iter()
            .chain(&rhs.rest_primes)
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .filter(|&p| arith::valuation_unchecked(&rest, p) != 0)
            .collect();
        Idele {
            real: &self.real * &rhs.real,
            finite,
            rest,
            rest_primes,
        }
        .canonical()
    }
}

impl Mul for Idele {
    type Output = Idele;

    fn mul(self, rhs: Idele) -> Idele {
        &self * &rhs
    }
}

impl fmt::Display for Idele {
    /// Literal form `real=<rat>;<p>=<rat>;...`, with `rest=<rat>` appended when
    /// the default component is not 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "real={}", self.real)?;
        for (p, x) in &self.finite {
            write!(f, ";{p}={x}")?;
        }
        if !self.rest.is_one() {
            write!(f, ";rest={}", self.rest)?;
        }
        Ok(())
    }
}

impl FromStr for Idele {
    type Err = Error;

    fn from_str(s: &str) -> Result<Idele> {
        let mut real = None;
        let mut rest = None;
        let mut finite = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            let value = parse_rat(value)?;
            match key.trim() {
                "real" | "inf" => {
                    if real.replace(value).is_some() {
                        return Err(Error::Parse("real component given twice".into()));
                    }
                }
                "rest" => {
                    if rest.replace(value).is_some() {
                        return Err(Error::Parse("rest component given twice".into()));
                    }
                }
                k => {
                    let p: u64 = k
                        .parse()
                        .map_err(|_| Error::Parse(format!("unknown idele key {k:?}")))?;
                    finite.push((p, value));
                }
            }
        }
        Idele::with_default(
            real.unwrap_or_else(Rat::one),
            finite,
            rest.unwrap_or_else(Rat::one),
        )
    }
}

pub fn idele_mul(x: &Idele, y: &Idele) -> Idele {
    x * y
}

pub fn idele_inv(x: &Idele) -> Idele {
    x.inv()
}

pub fn idele_norm(x: &Idele) -> Rat {
    x.norm()
}

pub fn tau(r: &Rat) -> Result<Idele> {
    Idele::principal(r)
}

pub fn alpha_p(p: u64) -> Result<Idele> {
    Idele::alpha(p)
}

pub fn alpha_infty() -> Idele {
    Idele::alpha_infinity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use proptest::prelude::*;

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (1i64..=10_000, 1i64..=10_000, any::<bool>())
            .prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
    }

    fn arb_idele() -> impl Strategy<Value = Idele> {
        let comp = (1i64..200, 1i64..200, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d));
        (
            comp.clone(),
            proptest::collection::vec((0usize..8, comp), 0..4),
        )
            .prop_map(|(real, entries)| {
                let primes = [2u64, 3, 5, 7, 11, 13, 17, 19];
                let map: BTreeMap<u64, Rat> =
                    entries.into_iter().map(|(i, x)| (primes[i], x)).collect();
                Idele::new(real, map).unwrap()
            })
    }

    #[test]
    fn identity_laws() {
        let x: Idele = "real=-3/2;5=10;7=1/49".parse().unwrap();
        assert_eq!(&x * &Idele::identity(), x);
        assert_eq!(x.inv().inv(), x);
        assert_eq!(Idele::identity().inv(), Idele::identity());
    }

    #[test]
    fn alpha_squares_and_inverse() {
        let a3 = alpha_p(3).unwrap();
        let sq = &a3 * &a3;
        assert_eq!(sq.real_component(), &rat_int(9));
        assert_eq!(sq.component(3), &rat_int(9));
        let a5 = alpha_p(5).unwrap();
        assert!((&a5 * &a5.inv()).is_identity());
        let inv = alpha_p(7).unwrap().inv();
        assert_eq!(inv.real_component(), &rat(1, 7));
        assert_eq!(inv.component(7), &rat(1, 7));
    }

    #[test]
    fn alpha_has_norm_one_and_single_valuation() {
        let a = alpha_p(13).unwrap();
        assert_eq!(a.norm(), rat_int(1));
        assert_eq!(a.valuation(13), 1);
        assert_eq!(a.valuation(2), 0);
        assert_eq!(a.valuation_vector(), BTreeMap::from([(13, 1)]));
        let a2 = alpha_p(2).unwrap();
        assert_eq!(a2.real_component(), &rat_int(2));
        assert_eq!(a2.component(2), &rat_int(2));
        for m in -3i64..=3 {
            let v = a.pow(m).valuation_vector();
            if m == 0 {
                assert!(v.is_empty());
            } else {
                assert_eq!(v, BTreeMap::from([(13, m)]));
            }
        }
    }

    #[test]
    fn alpha_infinity_properties() {
        let a = alpha_infty();
        assert_eq!(a.norm(), rat_int(1));
        assert!((&a * &a).is_identity());
        assert!(a.valuation_vector().is_empty());
        assert_eq!(a.real_component(), &rat_int(-1));
    }

    #[test]
    fn norm_of_pure_real_idele() {
        let x = Idele::new(rat_int(6), []).unwrap();
        assert_eq!(x.norm(), rat_int(6));
    }

    #[test]
    fn tau_examples() {
        assert!(tau(&rat_int(1)).unwrap().is_identity());
        assert_eq!(tau(&rat(-6, 5)).unwrap().norm(), rat_int(1));
        assert!(tau(&rat_int(0)).is_err());
        // unstored primes see r, not 1
        let t = tau(&rat(-6, 5)).unwrap();
        assert_eq!(t.component(101), &rat(-6, 5));
        assert_eq!(t.valuation(101), 0);
        assert_eq!(t.valuation(2), 1);
        assert_eq!(t.valuation(5), -1);
    }

    #[test]
    fn tau_is_a_homomorphism() {
        for (a, b) in [((3, 4), (-10, 7)), ((1, 1), (5, 1)), ((-2, 9), (9, 2))] {
            let r = rat(a.0, a.1);
            let s = rat(b.0, b.1);
            assert_eq!(&tau(&r).unwrap() * &tau(&s).unwrap(), tau(&(&r * &s)).unwrap());
        }
    }

    #[test]
    fn product_formula_brute_force() {
        // direct computation of |r|_inf * prod_p |r|_p over the primes of n*d
        for n in (1i64..=10_000).step_by(97) {
            for d in (1i64..=10_000).step_by(331) {
                for sign in [-1, 1] {
                    let r = rat(sign * n, d);
                    assert_eq!(tau(&r).unwrap().norm(), rat_int(1), "r = {r}");
                }
            }
        }
    }

    #[test]
    fn literal_round_trip_and_errors() {
        let x: Idele = "real=13;13=13".parse().unwrap();
        assert_eq!(x, alpha_p(13).unwrap());
        assert_eq!(x.to_string(), "real=13;13=13");
        let t = tau(&rat(-6, 5)).unwrap();
        assert_eq!(t.to_string().parse::<Idele>().unwrap(), t);
        assert!("real=0".parse::<Idele>().is_err());
        assert!("real=1;4=2".parse::<Idele>().is_err());
        assert!("real=1;3=0".parse::<Idele>().is_err());
        assert!("real=1;3".parse::<Idele>().is_err());
        assert!("real=1;real=2".parse::<Idele>().is_err());
        // stored ones are dropped
        assert_eq!("real=1;3=1".parse::<Idele>().unwrap(), Idele::identity());
    }

    #[test]
    fn place_parsing() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Real);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Finite(7));
        assert!("9".parse::<Place>().is_err());
        assert!(Place::Real < Place::Finite(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn norm_is_multiplicative(x in arb_idele(), y in arb_idele()) {
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn products_stay_canonical(x in arb_idele(), y in arb_idele()) {
            let z = &x * &y;
            prop_assert!(z.stored_components().all(|(_, c)| c != z.default_component()));
            let w = z.inv();
            prop_assert!(w.stored_components().all(|(_, c)| !c.is_one()));
        }

        #[test]
        fn principal_ideles_have_norm_one(r in arb_rat()) {
            prop_assert_eq!(tau(&r).unwrap().norm(), rat_int(1));
        }

        #[test]
        fn mixed_products_with_principal(r in arb_rat(), x in arb_idele()) {
            let t = tau(&r).unwrap();
            let z = &t * &x;
            prop_assert_eq!(z.norm(), x.norm());
            prop_assert_eq!(&z * &t.inv(), x);
        }
    }
}
