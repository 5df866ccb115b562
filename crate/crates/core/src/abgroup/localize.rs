use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::FgAbGroup;

/// A set of primes to invert.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeSet {
    Finite(BTreeSet<u64>),
    /// Every prime: rationalization.
    All,
    /// Every prime except these: localization at the listed primes.
    AllExcept(BTreeSet<u64>),
}

impl Default for PrimeSet {
    fn default() -> Self {
        PrimeSet::Finite(BTreeSet::new())
    }
}

impl PrimeSet {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn single(p: u64) -> Self {
        PrimeSet::Finite([p].into())
    }

    /// `Z_(p)`: invert everything prime to `p`.
    pub fn local_at(p: u64) -> Self {
        PrimeSet::AllExcept([p].into())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PrimeSet::Finite(s) if s.is_empty())
    }

    pub fn contains(&self, q: u64) -> bool {
        match self {
            PrimeSet::Finite(s) => s.contains(&q),
            PrimeSet::All => true,
            PrimeSet::AllExcept(s) => !s.contains(&q),
        }
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        use PrimeSet::*;
        let u = match (self, other) {
            (All, _) | (_, All) => All,
            (Finite(a), Finite(b)) => Finite(a.union(b).copied().collect()),
            (AllExcept(a), Finite(b)) | (Finite(b), AllExcept(a)) => AllExcept(a.difference(b).copied().collect()),
            (AllExcept(a), AllExcept(b)) => AllExcept(a.intersection(b).copied().collect()),
        };
        match u {
            AllExcept(s) if s.is_empty() => All,
            u => u,
        }
    }

    /// The part of `d` that survives inverting this set.
    pub fn surviving_part(&self, d: &BigInt) -> BigInt {
        match self {
            PrimeSet::All => BigInt::one(),
            PrimeSet::Finite(s) => {
                let mut d = d.clone();
                for &p in s {
                    d = strip_prime(&d, p).0;
                }
                d
            }
            PrimeSet::AllExcept(s) => s.iter().map(|&p| strip_prime(d, p).1).product(),
        }
    }

    /// Whether every prime factor of `d` is inverted, i.e. `d` is a unit.
    pub fn makes_unit(&self, d: &BigInt) -> bool {
        !d.is_zero() && self.surviving_part(d).is_one()
    }
}

/// Splits `d` as `(d / p^v, p^v)` with `p ∤ d / p^v`.
fn strip_prime(d: &BigInt, p: u64) -> (BigInt, BigInt) {
    let p = BigInt::from(p);
    let mut rest = d.clone();
    let mut part = BigInt::one();
    if rest.is_zero() {
        return (rest, part);
    }
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        rest = q;
        part *= &p;
    }
    (rest, part)
}

/// A finitely generated group with a set of primes inverted, kept in
/// canonical form (inverted primes stripped from the torsion).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LocalizedGroup {
    underlying: FgAbGroup,
    inverted: PrimeSet,
}

impl LocalizedGroup {
    pub fn underlying(&self) -> &FgAbGroup {
        &self.underlying
    }

    pub fn inverted(&self) -> &PrimeSet {
        &self.inverted
    }

    pub fn is_trivial(&self) -> bool {
        self.underlying.is_trivial()
    }

    pub fn is_finite(&self) -> bool {
        self.underlying.is_finite()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.underlying.order()
    }

    pub fn free_rank(&self) -> usize {
        self.underlying.free_rank()
    }

    pub fn torsion(&self) -> LocalizedGroup {
        LocalizedGroup { underlying: self.underlying.torsion(), inverted: self.inverted.clone() }
    }

    /// Direct sum of groups localized at the same primes.
    pub fn direct_sum(&self, other: &LocalizedGroup) -> LocalizedGroup {
        let inverted = self.inverted.union(&other.inverted);
        localize(&self.underlying.direct_sum(&other.underlying), &inverted)
    }

    pub fn localize(&self, primes: &PrimeSet) -> LocalizedGroup {
        localize(&self.underlying, &self.inverted.union(primes))
    }
}

impl From<FgAbGroup> for LocalizedGroup {
    fn from(g: FgAbGroup) -> Self {
        LocalizedGroup { underlying: g, inverted: PrimeSet::none() }
    }
}

/// `G ⊗ Z[S⁻¹]` in canonical form.
pub fn localize(g: &FgAbGroup, primes: &PrimeSet) -> LocalizedGroup {
    let orders: Vec<BigInt> = g.invariant_factors().iter().map(|d| primes.surviving_part(d)).collect();
    let underlying = FgAbGroup::from_orders(g.free_rank(), &orders);
    LocalizedGroup { underlying, inverted: primes.clone() }
}

impl fmt::Display for LocalizedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted.is_empty() {
            return write!(f, "{}", self.underlying);
        }
        if self.is_trivial() {
            return write!(f, "0");
        }
        let ring = match &self.inverted {
            PrimeSet::All => "Q".to_string(),
            PrimeSet::Finite(s) => {
                let ps: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                format!("Z[1/{}]", ps.join(","))
            }
            PrimeSet::AllExcept(s) => {
                let ps: Vec<String> = s.iter().map(|p| p.to_string()).collect();
                format!("Z_({})", ps.join(","))
            }
        };
        let mut parts = Vec::new();
        let torsion = self.underlying.torsion();
        if !torsion.is_trivial() {
            parts.push(torsion.to_string());
        }
        match self.underlying.free_rank() {
            0 => {}
            1 => parts.push(ring),
            r => parts.push(format!("{ring}^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct LocalizedRepr {
    #[serde(flatten)]
    group: FgAbGroup,
    inverted_primes: PrimeSet,
}

impl Serialize for LocalizedGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LocalizedRepr { group: self.underlying.clone(), inverted_primes: self.inverted.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalizedGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = LocalizedRepr::deserialize(d)?;
        Ok(localize(&r.group, &r.inverted_primes))
    }
}
