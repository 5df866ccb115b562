use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::snf::smith;
use super::{matrix_from_rows, rows_of, Big, IntMatrix};
use crate::{Error, Result};

/// `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with `2 ≤ d₁ | d₂ | … | d_k`.
///
/// The canonical generators are ordered torsion first (in the order of the
/// invariant factors), then the free generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FgAbGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbGroup {
    /// Checked constructor; the factors must already form a divisibility chain.
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self> {
        for (i, d) in invariant_factors.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidGroup(format!("invariant factor {d} < 2")));
            }
            if i > 0 && !d.is_multiple_of(&invariant_factors[i - 1]) {
                return Err(Error::InvalidGroup(format!(
                    "invariant factors {} and {d} do not form a divisibility chain",
                    invariant_factors[i - 1]
                )));
            }
        }
        Ok(FgAbGroup { free_rank, invariant_factors })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, invariant_factors: vec![] }
    }

    /// `Z/n`; `n = 0` gives `Z`, `n = ±1` the trivial group.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_orders(0, &[n.into()])
    }

    /// Normal form of `Z^free_rank ⊕ ⊕ Z/nᵢ` for arbitrary `nᵢ`
    /// (zeros contribute free summands, units vanish).
    pub fn from_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let k = orders.len();
        let rel = IntMatrix::diagonal(k, k, orders);
        let g = Presentation::new(k, rel).group();
        FgAbGroup { free_rank: g.free_rank + free_rank, invariant_factors: g.invariant_factors }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn torsion_count(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn generator_count(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Order of the `i`-th canonical generator; zero for free generators.
    pub fn generator_order(&self, i: usize) -> BigInt {
        self.invariant_factors.get(i).cloned().unwrap_or_default()
    }

    pub fn torsion(&self) -> FgAbGroup {
        FgAbGroup { free_rank: 0, invariant_factors: self.invariant_factors.clone() }
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut orders = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        Self::from_orders(self.free_rank + other.free_rank, &orders)
    }

    /// Canonical presentation: one relation `dᵢ·eᵢ = 0` per torsion generator.
    pub fn presentation(&self) -> Presentation {
        let k = self.invariant_factors.len();
        let n = self.generator_count();
        Presentation::new(n, IntMatrix::diagonal(k, n, &self.invariant_factors))
    }

    /// Reduces coordinates on canonical generators into `[0, dᵢ)` on torsion slots.
    pub fn reduce(&self, v: &mut [BigInt]) {
        for (x, d) in v.iter_mut().zip(&self.invariant_factors) {
            *x = x.mod_floor(d);
        }
    }

    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        v.iter()
            .enumerate()
            .all(|(i, x)| match self.invariant_factors.get(i) {
                Some(d) => x.is_multiple_of(d),
                None => x.is_zero(),
            })
    }

    /// Order of the element with the given canonical coordinates, `None` if infinite.
    pub fn element_order(&self, v: &[BigInt]) -> Option<BigInt> {
        let mut ord = BigInt::one();
        for (i, x) in v.iter().enumerate() {
            match self.invariant_factors.get(i) {
                Some(d) => {
                    let o = d / x.gcd(d);
                    ord = ord.lcm(&o);
                }
                None if !x.is_zero() => return None,
                None => {}
            }
        }
        Some(ord)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.invariant_factors.len() {
            let d = &self.invariant_factors[i];
            let run = self.invariant_factors[i..].iter().take_while(|x| *x == d).count();
            parts.push(if run > 1 { format!("(Z/{d})^{run}") } else { format!("Z/{d}") });
            i += run;
        }
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    free_rank: usize,
    invariant_factors: Vec<Big>,
}

impl Serialize for FgAbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr {
            free_rank: self.free_rank,
            invariant_factors: self.invariant_factors.iter().cloned().map(Big).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupRepr::deserialize(d)?;
        FgAbGroup::new(r.free_rank, r.invariant_factors.into_iter().map(|b| b.0).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// Generators with integer relations; rows of `relations` are relations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    generator_count: usize,
    relations: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct PresentationRepr {
    generators: usize,
    relations: Vec<Vec<Big>>,
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationRepr { generators: self.generator_count, relations: rows_of(&self.relations) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PresentationRepr::deserialize(d)?;
        let relations = matrix_from_rows(r.generators, r.relations).map_err(serde::de::Error::custom)?;
        Ok(Presentation::new(r.generators, relations))
    }
}

/// Result of normalizing a presentation: the group together with mutually
/// inverse isomorphisms expressed on generators.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub group: FgAbGroup,
    /// Columns are presentation generators, rows are canonical generators.
    pub to_normal: IntMatrix,
    /// Columns are canonical generators written in presentation generators.
    pub from_normal: IntMatrix,
}

impl Presentation {
    pub fn new(generator_count: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.cols(), generator_count, "relation width must equal the generator count");
        Presentation { generator_count, relations }
    }

    pub fn free(n: usize) -> Self {
        Presentation::new(n, IntMatrix::zeros(0, n))
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// When this is the canonical presentation of a normal-form group, returns it.
    pub fn as_canonical(&self) -> Option<FgAbGroup> {
        let k = self.relations.rows();
        if k > self.generator_count || !self.relations.is_diagonal() {
            return None;
        }
        let factors: Vec<BigInt> = (0..k).map(|i| self.relations[(i, i)].clone()).collect();
        let g = FgAbGroup::new(self.generator_count - k, factors).ok()?;
        Some(g)
    }

    pub fn group(&self) -> FgAbGroup {
        self.normalize().group
    }

    pub fn normalize(&self) -> Normalized {
        if let Some(group) = self.as_canonical() {
            let n = self.generator_count;
            return Normalized { group, to_normal: IntMatrix::identity(n), from_normal: IntMatrix::identity(n) };
        }
        // U·R·V = D. In coordinates x' = Vᵀx the relations become diagonal.
        let s = smith(&self.relations);
        let n = self.generator_count;
        let mut keep = Vec::new();
        let mut factors = Vec::new();
        for i in 0..n {
            if i < s.rank {
                let d = &s.d[(i, i)];
                if !d.is_one() {
                    keep.push(i);
                    factors.push(d.clone());
                }
            } else {
                keep.push(i);
            }
        }
        let group = FgAbGroup { free_rank: n - s.rank, invariant_factors: factors };
        let mut to_normal = s.v.transpose().select_rows(&keep);
        for (i, d) in group.invariant_factors.iter().enumerate() {
            to_normal.reduce_row(i, d);
        }
        let from_normal = s.v_inv.transpose().select_cols(&keep);
        Normalized { group, to_normal, from_normal }
    }

    /// Whether the column vector `v` (in generator coordinates) is zero in the group.
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        if let Some(g) = self.as_canonical() {
            return g.is_zero_element(v);
        }
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        super::snf::solve(&self.relations.transpose(), v).is_some()
    }

    /// Sum of presentations.
    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        Presentation::new(self.generator_count + other.generator_count, self.relations.block_diag(&other.relations))
    }
}

impl From<&FgAbGroup> for Presentation {
    fn from(g: &FgAbGroup) -> Self {
        g.presentation()
    }
}
