//! Quadratic fields: discriminants, ramification and different exponents,
//! Frobenius signs, and class groups of imaginary quadratic fields via
//! reduced binary quadratic forms.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::adele::Place;
use crate::arith::{factorize, is_prime, is_squarefree, kronecker, SymbolValue};
use crate::error::{domain, Error, Result};
use crate::zeta::is_fundamental;

/// `Q(√d)` together with its ramification data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadExtension {
    d: i64,
    disc: i64,
    ramified_exponents: BTreeMap<u64, u32>,
    ramified_at_infinity: bool,
}

impl QuadExtension {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Exponent of each ramified prime in the discriminant (equal to the different exponent).
    pub fn ramified_exponents(&self) -> &BTreeMap<u64, u32> {
        &self.ramified_exponents
    }

    pub fn ramified_at_infinity(&self) -> bool {
        self.ramified_at_infinity
    }

    /// All ramified places, the real place first.
    pub fn ramified_places(&self) -> Vec<(Place, u32)> {
        let inf = self.ramified_at_infinity.then_some((Place::Real, 1));
        inf.into_iter()
            .chain(self.ramified_exponents.iter().map(|(&p, &e)| (Place::Finite(p), e)))
            .collect()
    }
}

impl fmt::Display for QuadExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({})) D={} ramified:", self.d, self.disc)?;
        if self.ramified_at_infinity {
            write!(f, " inf")?;
        }
        for (p, e) in &self.ramified_exponents {
            write!(f, " {p}^{e}")?;
        }
        Ok(())
    }
}

pub fn quad_ext(d: i64) -> Result<QuadExtension> {
    if d == 0 || d == 1 {
        return domain(format!("d = {d} does not define a quadratic field"));
    }
    if !is_squarefree(d)? {
        return domain(format!("{d} is not squarefree"));
    }
    let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let mut ramified_exponents = BTreeMap::new();
    for (p, _) in factorize(d.unsigned_abs())? {
        if p != 2 {
            ramified_exponents.insert(p, 1);
        }
    }
    match d.rem_euclid(4) {
        3 => {
            ramified_exponents.insert(2, 2);
        }
        2 => {
            ramified_exponents.insert(2, 3);
        }
        _ => {}
    }
    Ok(QuadExtension {
        d,
        disc,
        ramified_exponents,
        ramified_at_infinity: d < 0,
    })
}

/// The field with fundamental discriminant `disc`.
pub fn quad_ext_from_disc(disc: i64) -> Result<QuadExtension> {
    if !is_fundamental(disc) {
        return domain(format!("{disc} is not a fundamental discriminant"));
    }
    let d = if disc.rem_euclid(4) == 1 { disc } else { disc / 4 };
    quad_ext(d)
}

/// Frobenius sign at an unramified prime: +1 split, -1 inert.
pub fn monodromy(ext: &QuadExtension, p: u64) -> Result<SymbolValue> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if ext.ramified_exponents.contains_key(&p) {
        return Err(Error::RamifiedPlace(Place::Finite(p)));
    }
    kronecker(ext.disc, p as i64)
}

pub fn different_exponent(ext: &QuadExtension, p: u64) -> Result<u32> {
    match ext.ramified_exponents.get(&p) {
        Some(&e) => Ok(e),
        None => domain(format!("{p} is unramified in {ext}")),
    }
}

/// Positive definite binary quadratic form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bqf {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Bqf {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let Bqf { a, b, c } = *self;
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// Principal form of discriminant `disc`.
    pub fn identity(disc: i64) -> Bqf {
        let b = disc.rem_euclid(2);
        Bqf {
            a: 1,
            b,
            c: (b * b - disc) / 4,
        }
    }

    pub fn inverse(&self) -> Bqf {
        reduce(self.a as i128, -self.b as i128, self.c as i128)
    }

    /// Gaussian composition followed by reduction.
    pub fn compose(&self, other: &Bqf) -> Bqf {
        let disc = self.discriminant() as i128;
        let (mut f1, mut f2) = (*self, *other);
        if f1.a > f2.a {
            std::mem::swap(&mut f1, &mut f2);
        }
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (y1, d) = if a2 % a1 == 0 {
            (0, a1)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.x, e.gcd)
        };
        let (x2, y2, d1) = if s % d == 0 {
            (0, -1, d)
        } else {
            let e = s.extended_gcd(&d);
            (e.x, -e.y, e.gcd)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc) / (4 * a3);
        reduce(a3, b3, c3)
    }

    pub fn pow(&self, mut k: u64) -> Bqf {
        let mut acc = Bqf::identity(self.discriminant());
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }
}

impl fmt::Display for Bqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn normalize(a: i128, b: i128, disc: i128) -> (i128, i128, i128) {
    let q = Integer::div_floor(&(a - b), &(2 * a));
    let b = b + 2 * a * q;
    (a, b, (b * b - disc) / (4 * a))
}

fn reduce(a: i128, b: i128, c: i128) -> Bqf {
    let disc = b * b - 4 * a * c;
    let (mut a, mut b, mut c) = normalize(a, b, disc);
    while a > c {
        (a, b, c) = normalize(c, -b, disc);
    }
    if a == c && b < 0 {
        b = -b;
    }
    Bqf {
        a: a as i64,
        b: b as i64,
        c: c as i64,
    }
}

/// All reduced primitive forms of discriminant `disc < 0`.
pub fn reduced_forms(disc: i64) -> Vec<Bqf> {
    let mut forms = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a..=a {
            if (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            let f = Bqf { a, b, c };
            if f.is_reduced() && a.gcd(&b).gcd(&c) == 1 {
                forms.push(f);
            }
        }
        a += 1;
    }
    forms
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub disc: i64,
    pub h: u64,
    /// Invariant factors `d_1 | d_2 | ...`, each > 1; empty for the trivial group.
    pub invariants: Vec<u64>,
    pub forms: Vec<Bqf>,
}

impl ClassGroup {
    pub fn structure(&self) -> String {
        if self.invariants.is_empty() {
            "trivial".to_string()
        } else {
            self.invariants.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join(" x ")
        }
    }
}

fn element_order(f: &Bqf) -> u64 {
    let id = Bqf::identity(f.discriminant());
    let mut g = *f;
    let mut k = 1;
    while g != id {
        g = g.compose(f);
        k += 1;
    }
    k
}

/// Class group of the imaginary quadratic field of discriminant `disc`.
///
/// The invariant factors come from the element orders: for each prime `l | h`
/// the number of elements killed by `l^k` is `l^{Σ_i min(k, e_i)}`, which
/// determines the exponents `e_i` of the `l`-primary part.
pub fn class_group(disc: i64) -> Result<ClassGroup> {
    if disc >= 0 || !is_fundamental(disc) {
        return domain(format!("{disc} is not a negative fundamental discriminant"));
    }
    let forms = reduced_forms(disc);
    let h = forms.len() as u64;
    let orders: Vec<u64> = forms.iter().map(element_order).collect();

    let mut columns: Vec<Vec<u64>> = Vec::new();
    for (l, e) in factorize(h)? {
        let mut killed = vec![1u64];
        for k in 1..=e {
            let lk = l.pow(k);
            killed.push(orders.iter().filter(|&&o| lk % o == 0).count() as u64);
        }
        // rank[k-1] = #{i : e_i >= k}
        let mut exps_at_least: Vec<u32> = Vec::new();
        for k in 1..=e as usize {
            let ratio = killed[k] / killed[k - 1];
            exps_at_least.push(ratio.ilog(l));
        }
        let rank = exps_at_least[0] as usize;
        let mut exps: Vec<u32> = (0..rank)
            .map(|i| exps_at_least.iter().filter(|&&r| r as usize > i).count() as u32)
            .collect();
        exps.sort_unstable();
        columns.push(exps.into_iter().map(|x| l.pow(x)).collect());
    }
    let width = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut invariants = vec![1u64; width];
    for col in &columns {
        let offset = width - col.len();
        for (i, &v) in col.iter().enumerate() {
            invariants[offset + i] *= v;
        }
    }
    Ok(ClassGroup {
        disc,
        h,
        invariants,
        forms,
    })
}

/// Number of conformal blocks, identified with the class number. `disc = 1` stands for `Q`.
pub fn conformal_block_dim(disc: i64) -> Result<u64> {
    if disc == 1 {
        return Ok(1);
    }
    Ok(class_group(disc)?.h)
}
