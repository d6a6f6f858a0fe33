//! Wilson and t'Hooft insertions over the rationals, their amplitudes, the
//! S-duality transform, and the quadratic reciprocity identities it produces.
//!
//! A Wilson insertion of multiplicity `m` at a place `v` replaces the test
//! function `f(x)` by `f(α_v^m x)`. A t'Hooft insertion is a quadratic field
//! whose ramified places carry multiplicities equal to their discriminant
//! exponents, and it inserts the quadratic Hecke character of that field.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::adele::{Idele, Place};
use crate::arith::{is_prime, kronecker, legendre, primes_up_to, SymbolValue};
use crate::characters::QuadHeckeChar;
use crate::error::{domain, Error, Result};
use crate::fields::{quad_ext, QuadExtension};
use crate::zeta::{global_zeta, local_zeta_real, local_zeta_real_scaled, TestFunction};

/// Largest `p_max` accepted by [`reciprocity_sweep`].
pub const SWEEP_PMAX_LIMIT: u64 = 10_000;

pub type WilsonData = BTreeMap<Place, u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertionConfig {
    pub wilson: WilsonData,
    pub thooft: Option<QuadExtension>,
}

impl InsertionConfig {
    pub fn new(wilson: impl IntoIterator<Item = (Place, u32)>, thooft: Option<QuadExtension>) -> InsertionConfig {
        InsertionConfig {
            wilson: wilson.into_iter().collect(),
            thooft,
        }
    }

    /// `∏ α_v^{m_v}` over the Wilson insertions.
    pub fn wilson_idele(&self) -> Result<Idele> {
        let mut x = Idele::identity();
        for (&place, &m) in &self.wilson {
            x = x * Idele::alpha_at(place)?.pow(m as i64);
        }
        Ok(x)
    }
}

pub fn format_wilson(wilson: &WilsonData) -> String {
    wilson.iter().map(|(p, m)| format!("{p}:{m}")).collect::<Vec<_>>().join(",")
}

/// Parses `"13:1,2:2,inf:1"`. The empty string is the empty insertion set.
pub fn parse_wilson(s: &str) -> Result<WilsonData> {
    let mut out = WilsonData::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (place, mult) = item
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected PLACE:MULT, got {item:?}")))?;
        let place = Place::from_str(place)?;
        let mult: u32 = mult
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad multiplicity in {item:?}")))?;
        if out.insert(place, mult).is_some() {
            return Err(Error::Parse(format!("place {place} listed twice")));
        }
    }
    Ok(out)
}

impl fmt::Display for InsertionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "wilson {{{}}} thooft ", format_wilson(&self.wilson))?;
        match &self.thooft {
            Some(ext) => write!(
                f,
                "d={} (D={}) {{{}}}",
                ext.d(),
                ext.disc(),
                format_wilson(&ext.ramified_places().into_iter().collect())
            ),
            None => write!(f, "none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Wilson and t'Hooft insertions share a place.
    Coexistence(Place),
    /// The Wilson idele does not have norm 1.
    NonzeroCharge,
    ZeroMultiplicity(Place),
    /// The Wilson data is not the ramification pattern of a quadratic field.
    NotDualizable,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Coexistence(p) => write!(f, "Wilson and t'Hooft insertions coexist at {p}"),
            Violation::NonzeroCharge => write!(f, "Wilson idele has norm different from 1"),
            Violation::ZeroMultiplicity(p) => write!(f, "zero multiplicity at {p}"),
            Violation::NotDualizable => write!(f, "Wilson data is not a quadratic ramification pattern"),
        }
    }
}

/// Empty result means the configuration is valid.
pub fn validate(cfg: &InsertionConfig, dual_legality: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    for (&place, &m) in &cfg.wilson {
        if m == 0 {
            out.push(Violation::ZeroMultiplicity(place));
        }
    }
    if let Some(ext) = &cfg.thooft {
        for (place, _) in ext.ramified_places() {
            if cfg.wilson.contains_key(&place) {
                out.push(Violation::Coexistence(place));
            }
        }
    }
    match cfg.wilson_idele() {
        Ok(x) if x.norm().is_one() => {}
        _ => out.push(Violation::NonzeroCharge),
    }
    if dual_legality && wilson_to_extension(&cfg.wilson).is_err() {
        out.push(Violation::NotDualizable);
    }
    out
}

/// The quadratic field whose ramified places and discriminant exponents are
/// exactly the given Wilson data, the real place counting with multiplicity 1.
pub fn wilson_to_extension(wilson: &WilsonData) -> Result<QuadExtension> {
    let mut odd_part: i64 = 1;
    for (&place, &m) in wilson {
        if let Place::Finite(p) = place {
            if p != 2 {
                odd_part = odd_part.checked_mul(p as i64).ok_or(Error::NotDualizable)?;
                if m != 1 {
                    return Err(Error::NotDualizable);
                }
            }
        }
    }
    for d in [odd_part, -odd_part, 2 * odd_part, -2 * odd_part] {
        if d == 1 {
            continue;
        }
        if let Ok(ext) = quad_ext(d) {
            let pattern: WilsonData = ext.ramified_places().into_iter().collect();
            if &pattern == wilson {
                return Ok(ext);
            }
        }
    }
    Err(Error::NotDualizable)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplitudeFactor {
    pub place: Place,
    pub multiplicity: u32,
    /// Character value at the place; 1 at the real place.
    pub symbol: SymbolValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Amplitude {
    pub value: SymbolValue,
    pub derivation: Vec<AmplitudeFactor>,
}

/// Evaluation engine. The optional fault flips one Kronecker value, which lets
/// tests confirm that the reciprocity sweep detects and localizes errors.
#[derive(Debug, Clone, Copy, Default)]
pub struct Engine {
    fault: Option<(i64, u64)>,
}

impl Engine {
    pub fn with_fault(disc: i64, p: u64) -> Engine {
        Engine { fault: Some((disc, p)) }
    }

    fn symbol(&self, disc: i64, p: u64) -> SymbolValue {
        let v = kronecker(disc, p as i64).expect("kronecker is total on valid input");
        if self.fault == Some((disc, p)) {
            -v
        } else {
            v
        }
    }

    /// `<W>_T = χ_T(∏ α_v^{m_v})^{-1}`, the equation-of-motion value of the
    /// ratio of zeta integrals with and without the Wilson insertions.
    pub fn amplitude(&self, cfg: &InsertionConfig) -> Result<Amplitude> {
        let violations = validate(cfg, false);
        if let Some(Violation::Coexistence(place)) = violations.first() {
            return Err(Error::RamifiedCollision(*place));
        }
        if !violations.is_empty() {
            return Err(Error::Config(violations));
        }
        let ext = cfg
            .thooft
            .as_ref()
            .ok_or_else(|| Error::Domain("amplitude needs a t'Hooft insertion".into()))?;
        let chi = QuadHeckeChar::new(ext.disc())?;
        let value = chi.eval_with(&cfg.wilson_idele()?, |d, p| self.symbol(d, p))?.pow(-1);
        let derivation: Vec<AmplitudeFactor> = cfg
            .wilson
            .iter()
            .map(|(&place, &multiplicity)| AmplitudeFactor {
                place,
                multiplicity,
                symbol: match place {
                    Place::Real => SymbolValue::One,
                    Place::Finite(p) => self.symbol(ext.disc(), p),
                },
            })
            .collect();
        debug_assert_eq!(
            value,
            derivation.iter().map(|f| f.symbol.pow(f.multiplicity as i64)).product()
        );
        Ok(Amplitude { value, derivation })
    }

    pub fn identity_check(&self, case: Case, p: u64, q: u64) -> Result<IdentityCheck> {
        let cfg = case_config(case, p, q)?;
        let lhs = self.amplitude(&cfg)?.value;
        let rhs = self.amplitude(&s_dual(&cfg)?)?.value;
        Ok(IdentityCheck {
            case,
            p,
            q,
            lhs,
            rhs,
            ok: lhs == rhs,
        })
    }

    pub fn sweep(&self, p_max: u64, cases: &[Case]) -> Result<ReciprocityReport> {
        if p_max > SWEEP_PMAX_LIMIT {
            return domain(format!("p_max must be at most {SWEEP_PMAX_LIMIT}"));
        }
        let primes = primes_up_to(p_max);
        let mut checks = Vec::new();
        for &case in cases {
            for (p, q) in case_pairs(case, &primes) {
                checks.push(self.identity_check(case, p, q)?);
            }
        }

        let odd: Vec<u64> = primes.iter().copied().filter(|&p| p != 2).collect();
        let mut classical_pairs = 0;
        let mut classical_failures = Vec::new();
        for (i, &p) in odd.iter().enumerate() {
            for &q in &odd[i + 1..] {
                classical_pairs += 1;
                let lhs = legendre(p as i64, q)? * legendre(q as i64, p)?;
                let rhs = SymbolValue::MinusOne.pow((((p - 1) / 2) * ((q - 1) / 2)) as i64);
                if lhs != rhs {
                    classical_failures.push((p, q));
                }
            }
        }
        let mut trivial_checked = 0;
        let mut trivial_failures = Vec::new();
        for &q in odd.iter().filter(|&&q| q % 4 == 3) {
            trivial_checked += 1;
            if legendre(-1, q)? != SymbolValue::MinusOne {
                trivial_failures.push(q);
            }
        }

        let mut counts = BTreeMap::new();
        for &case in cases {
            counts.insert(case, checks.iter().filter(|c| c.case == case).count());
        }
        Ok(ReciprocityReport {
            summary: SweepSummary {
                p_max,
                counts,
                failures: checks.iter().filter(|c| !c.ok).count(),
                classical_pairs,
                classical_failures,
                trivial_checked,
                trivial_failures,
            },
            checks,
        })
    }
}

pub fn amplitude(cfg: &InsertionConfig) -> Result<Amplitude> {
    Engine::default().amplitude(cfg)
}

/// Swaps Wilson and t'Hooft data. The accompanying inversions of the
/// character and of the Wilson idele act trivially on quadratic amplitudes.
pub fn s_dual(cfg: &InsertionConfig) -> Result<InsertionConfig> {
    let ext = cfg
        .thooft
        .as_ref()
        .ok_or_else(|| Error::Config(vec![Violation::NotDualizable]))?;
    let thooft = wilson_to_extension(&cfg.wilson).map_err(|_| Error::Config(vec![Violation::NotDualizable]))?;
    Ok(InsertionConfig::new(ext.ramified_places(), Some(thooft)))
}

/// Ratio of global zeta integrals with and without the Wilson insertions:
/// `z(s; f(α·)) / z(s; f)` with `α = ∏ α_v^{m_v}`.
///
/// At a prime `p` the shifted function `1_{p^n Z_p}(p^m x)` is `1_{p^{n-m} Z_p}`;
/// at the real place `f_∞(c x)` with `c` the real component of `α`.
pub fn amplitude_via_zeta(cfg: &InsertionConfig, f: &TestFunction, s: Complex64, tol: f64) -> Result<Complex64> {
    let violations = validate(cfg, false);
    if !violations.is_empty() {
        return Err(Error::Config(violations));
    }
    let ext = cfg
        .thooft
        .as_ref()
        .ok_or_else(|| Error::Domain("amplitude needs a t'Hooft insertion".into()))?;
    let mut shifted = f.clone();
    let mut c = 1.0f64;
    for (&place, &m) in &cfg.wilson {
        match place {
            Place::Real => c *= (-1.0f64).powi(m as i32),
            Place::Finite(p) => {
                shifted.set_level(p, f.level(p) - m as i64)?;
                c *= (p as f64).powi(m as i32);
            }
        }
    }
    let denominator = global_zeta(f, ext.disc(), s, tol)?.value;
    let arch = local_zeta_real_scaled(f.arch, c, s)? / local_zeta_real(f.arch, s)?;
    let numerator = global_zeta(&shifted, ext.disc(), s, tol)?.value * arch;
    Ok(numerator / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `p ≡ q ≡ 1 (4)`: Wilson `{p:1}`, t'Hooft `Q(√q)`.
    A,
    /// `p ≡ 1 (4)`, `q = 2`: Wilson `{p:1}`, t'Hooft `Q(i)`.
    B,
    /// `p ≡ 1 (4)`, `q` odd: Wilson `{p:1}`, t'Hooft `Q(√q*)`.
    C,
    /// `p = 2`, `q` odd: Wilson `{2:3}`, t'Hooft `Q(√q*)`.
    D,
    /// `p ≡ q ≡ 3 (4)`: Wilson `{p:1, 2:2}`, t'Hooft `Q(√q*)`.
    E,
}

impl Case {
    pub const ALL: [Case; 5] = [Case::A, Case::B, Case::C, Case::D, Case::E];
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Case> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Case::A),
            "B" => Ok(Case::B),
            "C" => Ok(Case::C),
            "D" => Ok(Case::D),
            "E" => Ok(Case::E),
            other => Err(Error::Parse(format!("unknown case {other:?}"))),
        }
    }
}

/// `q* = (-1)^{(q-1)/2} q`, so that `Q(√q*)` is ramified at `q` and possibly `∞` only.
fn q_star(q: u64) -> i64 {
    if q % 4 == 1 {
        q as i64
    } else {
        -(q as i64)
    }
}

fn odd_prime(p: u64) -> bool {
    p != 2 && is_prime(p)
}

/// The insertion configuration used for each case.
pub fn case_config(case: Case, p: u64, q: u64) -> Result<InsertionConfig> {
    let fail = || domain(format!("({p}, {q}) does not satisfy the conditions of case {case}"));
    let w = |p: u64| Place::Finite(p);
    let (wilson, d): (Vec<(Place, u32)>, i64) = match case {
        Case::A if odd_prime(p) && odd_prime(q) && p != q && p % 4 == 1 && q % 4 == 1 => (vec![(w(p), 1)], q as i64),
        Case::B if odd_prime(p) && p % 4 == 1 && q == 2 => (vec![(w(p), 1)], -1),
        Case::C if odd_prime(p) && odd_prime(q) && p != q && p % 4 == 1 => (vec![(w(p), 1)], q_star(q)),
        Case::D if p == 2 && odd_prime(q) => (vec![(w(2), 3)], q_star(q)),
        Case::E if odd_prime(p) && odd_prime(q) && p != q && p % 4 == 3 && q % 4 == 3 => {
            (vec![(w(p), 1), (w(2), 2)], q_star(q))
        }
        _ => return fail(),
    };
    Ok(InsertionConfig::new(wilson, Some(quad_ext(d)?)))
}

fn case_pairs(case: Case, primes: &[u64]) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    match case {
        Case::B => out.extend(primes.iter().filter(|&&p| p % 4 == 1).map(|&p| (p, 2))),
        Case::D => out.extend(primes.iter().filter(|&&q| q != 2).map(|&q| (2, q))),
        _ => {
            for &p in primes {
                for &q in primes {
                    if case_config_applies(case, p, q) {
                        out.push((p, q));
                    }
                }
            }
        }
    }
    out
}

fn case_config_applies(case: Case, p: u64, q: u64) -> bool {
    if p == q || p == 2 || q == 2 {
        return false;
    }
    match case {
        Case::A => p % 4 == 1 && q % 4 == 1,
        Case::C => p % 4 == 1,
        Case::E => p % 4 == 3 && q % 4 == 3,
        Case::B | Case::D => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub case: Case,
    pub p: u64,
    pub q: u64,
    pub lhs: SymbolValue,
    pub rhs: SymbolValue,
    pub ok: bool,
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {:+} {:+} {}",
            self.case,
            self.p,
            self.q,
            self.lhs.as_i8(),
            self.rhs.as_i8(),
            if self.ok { "OK" } else { "FAIL" }
        )
    }
}

pub fn identity_check(case: Case, p: u64, q: u64) -> Result<IdentityCheck> {
    Engine::default().identity_check(case, p, q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub p_max: u64,
    pub counts: BTreeMap<Case, usize>,
    pub failures: usize,
    /// Odd prime pairs `p < q` checked against the classical reciprocity law.
    pub classical_pairs: usize,
    pub classical_failures: Vec<(u64, u64)>,
    /// Primes `q ≡ 3 (4)` checked for `(-1/q) = -1`.
    pub trivial_checked: usize,
    pub trivial_failures: Vec<u64>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.classical_failures.is_empty() && self.trivial_failures.is_empty()
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total: usize = self.counts.values().sum();
        let per_case = self
            .counts
            .iter()
            .map(|(c, n)| format!("{c}={n}"))
            .collect::<Vec<_>>()
            .join(" ");
        let head = if self.passed() { "ALL PASS" } else { "FAIL" };
        write!(
            f,
            "{head} ({total} checks: {per_case}; failures {}; classical law {} pairs, {} failures; (-1/q)=-1 for {} primes q=3 mod 4, {} failures; pmax {})",
            self.failures,
            self.classical_pairs,
            self.classical_failures.len(),
            self.trivial_checked,
            self.trivial_failures.len(),
            self.p_max
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub checks: Vec<IdentityCheck>,
    pub summary: SweepSummary,
}

impl ReciprocityReport {
    pub fn passed(&self) -> bool {
        self.summary.passed()
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

/// Runs every case on all applicable prime pairs up to `p_max`.
pub fn reciprocity_sweep(p_max: u64) -> Result<ReciprocityReport> {
    Engine::default().sweep(p_max, &Case::ALL)
}
