//! Homotopy fixed points of an endomorphism: kernel and cokernel of `1 − φ`,
//! assembled along long exact sequences for graded groups and complexes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::abgroup::{cokernel, kernel, localize, FgAbGroup, GroupHom, IntMatrix, LocalizedGroup, PrimeSet, Presentation};
use crate::arith::pow;
use crate::indgroup::{colim_vanishes_after, ind_fixed_points, stabilize, IndAbGroup, Stabilization};
use crate::{Error, Result};

/// An endomorphism `φ = map / p^k` of a localized group. The map acts on the
/// canonical generators of the underlying integral group; a denominator
/// `p^k` is only allowed when `p` is inverted.
#[derive(Clone, Debug)]
pub struct Endo {
    group: LocalizedGroup,
    map: GroupHom,
    denominator: Option<(u64, u32)>,
}

impl Endo {
    pub fn new(group: LocalizedGroup, map: IntMatrix) -> Result<Self> {
        let p = group.underlying().presentation();
        let map = GroupHom::new(p.clone(), p, map)?;
        Ok(Endo { group, map, denominator: None })
    }

    pub fn identity(group: LocalizedGroup) -> Self {
        let map = GroupHom::identity(&group.underlying().presentation());
        Endo { group, map, denominator: None }
    }

    /// Multiplication by an integer.
    pub fn mult(group: LocalizedGroup, c: impl Into<BigInt>) -> Self {
        let map = GroupHom::scalar(&group.underlying().presentation(), c);
        Endo { group, map, denominator: None }
    }

    /// Multiplication by `p^n`; negative `n` needs `p` inverted.
    pub fn mult_p_power(group: LocalizedGroup, p: u64, n: i64) -> Result<Self> {
        if n >= 0 {
            return Ok(Self::mult(group, pow(p, n as u64)));
        }
        if !group.inverted().contains(p) {
            return Err(Error::NegativeTwist { prime: p, exponent: n });
        }
        let mut e = Self::identity(group);
        e.denominator = Some((p, n.unsigned_abs() as u32));
        Ok(e)
    }

    pub fn group(&self) -> &LocalizedGroup {
        &self.group
    }

    pub fn map(&self) -> &GroupHom {
        &self.map
    }

    /// An integral map with the same kernel and cokernel as `1 − φ` after
    /// localization: `p^k − map` when `φ = map / p^k`.
    pub fn one_minus(&self) -> Result<GroupHom> {
        match self.denominator {
            None => self.map.one_minus(),
            Some((p, k)) => GroupHom::scalar(self.map.source(), pow(p, k as u64)).sub(&self.map),
        }
    }
}

/// Kernel and cokernel of `1 − φ`, with the integral inclusion and
/// projection that witness them before localization.
#[derive(Clone, Debug)]
pub struct FixedPointPair {
    pub h0: LocalizedGroup,
    pub h1: LocalizedGroup,
    pub inclusion: Option<GroupHom>,
    pub projection: Option<GroupHom>,
}

impl FixedPointPair {
    fn bare(h0: LocalizedGroup, h1: LocalizedGroup) -> Self {
        FixedPointPair { h0, h1, inclusion: None, projection: None }
    }

    pub fn is_trivial(&self) -> bool {
        self.h0.is_trivial() && self.h1.is_trivial()
    }
}

impl PartialEq for FixedPointPair {
    fn eq(&self, other: &Self) -> bool {
        self.h0 == other.h0 && self.h1 == other.h1
    }
}

impl Serialize for FixedPointPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FixedPointPair", 2)?;
        st.serialize_field("h0", &self.h0)?;
        st.serialize_field("h1", &self.h1)?;
        st.end()
    }
}

pub fn fixed_points(e: &Endo) -> Result<FixedPointPair> {
    let f = e.one_minus()?;
    let (k, inclusion) = kernel(&f)?;
    let c = cokernel(&f)?;
    let primes = e.group.inverted();
    Ok(FixedPointPair {
        h0: localize(&k, primes),
        h1: localize(&c.group, primes),
        inclusion: Some(inclusion),
        projection: Some(c.projection),
    })
}

/// Fixed points of multiplication by `p^n`.
pub fn fixed_points_mult(g: &LocalizedGroup, p: u64, n: i64) -> Result<FixedPointPair> {
    fixed_points(&Endo::mult_p_power(g.clone(), p, n)?)
}

/// A directed system whose colimit carries the endomorphism, localized
/// afterwards. Fixed points are read off at `max_level`.
#[derive(Clone, Debug)]
pub struct IndTerm {
    pub system: IndAbGroup,
    pub localization: PrimeSet,
    pub max_level: usize,
}

impl IndTerm {
    /// Looks as far as the system's ceiling, or further when the system
    /// knows its fixed-point kernel only settles later.
    pub fn new(system: IndAbGroup, localization: PrimeSet) -> Self {
        let settles = system.system().kernel_stable_from().map_or(0, |l| l + 1);
        let max_level = system.ceiling().max(settles);
        IndTerm { system, localization, max_level }
    }
}

#[derive(Clone, Debug)]
pub enum GradedTerm {
    Group(Endo),
    Ind(IndTerm),
}

impl From<Endo> for GradedTerm {
    fn from(e: Endo) -> Self {
        GradedTerm::Group(e)
    }
}

impl From<IndTerm> for GradedTerm {
    fn from(t: IndTerm) -> Self {
        GradedTerm::Ind(t)
    }
}

/// Fixed points of an ind term: the stabilized kernel, and the cokernel
/// either certified to vanish or stabilized.
pub fn ind_term_fixed_points(t: &IndTerm) -> Result<FixedPointPair> {
    let f = ind_fixed_points(&t.system)?;
    let h0 = match stabilize(&f.ker_system, t.max_level)? {
        Stabilization::Stable { group, .. } => localize(&group, &t.localization),
        Stabilization::NotStabilized { max_level, .. } => {
            return Err(Error::Inconclusive(format!("kernel system not stabilized by level {max_level}")));
        }
    };
    let cert = colim_vanishes_after(&f.coker_system, t.max_level, &t.localization)?;
    let h1 = if cert.is_certified() {
        LocalizedGroup::from(FgAbGroup::trivial()).localize(&t.localization)
    } else {
        match stabilize(&f.coker_system, t.max_level)? {
            Stabilization::Stable { group, .. } => localize(&group, &t.localization),
            Stabilization::NotStabilized { .. } => {
                return Err(Error::Inconclusive(format!(
                    "{} cokernel classes survive to level {}",
                    cert.surviving.len(),
                    cert.searched_to
                )));
            }
        }
    };
    Ok(FixedPointPair::bare(h0, h1))
}

pub fn term_fixed_points(t: &GradedTerm) -> Result<FixedPointPair> {
    match t {
        GradedTerm::Group(e) => fixed_points(e),
        GradedTerm::Ind(t) => ind_term_fixed_points(t),
    }
}

/// Finitely supported graded group with an endomorphism in each degree.
#[derive(Clone, Debug, Default)]
pub struct GradedEndo {
    degrees: BTreeMap<i64, GradedTerm>,
}

impl GradedEndo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: i64, term: impl Into<GradedTerm>) {
        self.degrees.insert(degree, term.into());
    }

    pub fn with(mut self, degree: i64, term: impl Into<GradedTerm>) -> Self {
        self.insert(degree, term);
        self
    }

    pub fn get(&self, degree: i64) -> Option<&GradedTerm> {
        self.degrees.get(&degree)
    }

    pub fn degrees(&self) -> impl Iterator<Item = (&i64, &GradedTerm)> {
        self.degrees.iter()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    /// One of the two pieces is zero.
    PieceVanishes,
    /// The sub is finite with order prime to the torsion of the quotient, so
    /// the extension splits.
    CoprimeSplit,
    Unresolved,
}

/// One degree of the fixed points of a graded endomorphism:
/// `0 → sub → π_n → quot → 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeFixedPoints {
    pub degree: i64,
    pub sub: LocalizedGroup,
    pub quot: LocalizedGroup,
    pub resolution: Resolution,
    pub resolved: Option<LocalizedGroup>,
}

impl DegreeFixedPoints {
    pub fn new(degree: i64, sub: LocalizedGroup, quot: LocalizedGroup) -> Self {
        let (resolution, resolved) = resolve(&sub, &quot);
        DegreeFixedPoints { degree, sub, quot, resolution, resolved }
    }

    pub fn extension_resolved(&self) -> bool {
        self.resolution != Resolution::Unresolved
    }

    pub fn is_trivial(&self) -> bool {
        self.sub.is_trivial() && self.quot.is_trivial()
    }
}

fn resolve(sub: &LocalizedGroup, quot: &LocalizedGroup) -> (Resolution, Option<LocalizedGroup>) {
    if sub.is_trivial() {
        return (Resolution::PieceVanishes, Some(quot.clone()));
    }
    if quot.is_trivial() {
        return (Resolution::PieceVanishes, Some(sub.clone()));
    }
    if let Some(n) = sub.order() {
        if n.gcd(&quot.underlying().torsion_order()).is_one() {
            return (Resolution::CoprimeSplit, Some(sub.direct_sum(quot)));
        }
    }
    (Resolution::Unresolved, None)
}

impl Serialize for DegreeFixedPoints {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DegreeFixedPoints", 5)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("sub", &self.sub)?;
        st.serialize_field("quot", &self.quot)?;
        st.serialize_field("resolved", &self.resolved)?;
        st.serialize_field("resolution", &self.resolution)?;
        st.end()
    }
}

impl fmt::Display for DegreeFixedPoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.resolved {
            Some(g) => write!(f, "{g}"),
            None => write!(f, "[{} -> ? -> {}]", self.sub, self.quot),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GradedFixedPoints {
    degrees: BTreeMap<i64, DegreeFixedPoints>,
}

impl GradedFixedPoints {
    pub fn get(&self, degree: i64) -> Option<&DegreeFixedPoints> {
        self.degrees.get(&degree)
    }

    /// The degree, or the zero entry if it is outside the computed range.
    pub fn degree(&self, degree: i64) -> DegreeFixedPoints {
        self.degrees.get(&degree).cloned().unwrap_or_else(|| {
            DegreeFixedPoints::new(degree, LocalizedGroup::default(), LocalizedGroup::default())
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &DegreeFixedPoints> {
        self.degrees.values()
    }

    pub fn insert(&mut self, d: DegreeFixedPoints) {
        self.degrees.insert(d.degree, d);
    }

    pub fn all_resolved(&self) -> bool {
        self.iter().all(DegreeFixedPoints::extension_resolved)
    }
}

/// Pieces of `π_n` of the fixed points for every `n` in `range`:
/// `sub = h1` of degree `n + 1` and `quot = h0` of degree `n`.
pub fn graded_fixed_points_in(g: &GradedEndo, range: std::ops::RangeInclusive<i64>) -> Result<GradedFixedPoints> {
    let mut pairs = BTreeMap::new();
    let (lo, hi) = (*range.start(), *range.end());
    for (&d, t) in g.degrees.range(lo..=hi.saturating_add(1)) {
        pairs.insert(d, term_fixed_points(t)?);
    }
    let zero = LocalizedGroup::default();
    let mut out = GradedFixedPoints::default();
    for n in range {
        let sub = pairs.get(&(n + 1)).map_or(zero.clone(), |p| p.h1.clone());
        let quot = pairs.get(&n).map_or(zero.clone(), |p| p.h0.clone());
        out.insert(DegreeFixedPoints::new(n, sub, quot));
    }
    Ok(out)
}

/// Pieces over the support of `g` and one degree below it.
pub fn graded_fixed_points(g: &GradedEndo) -> Result<GradedFixedPoints> {
    match (g.degrees.keys().next(), g.degrees.keys().next_back()) {
        (Some(&lo), Some(&hi)) => graded_fixed_points_in(g, lo - 1..=hi),
        _ => Ok(GradedFixedPoints::default()),
    }
}

/// A bounded cochain complex `C^lo → C^{lo+1} → …` on presented groups.
#[derive(Clone, Debug)]
pub struct Complex {
    lowest: i64,
    groups: Vec<Presentation>,
    differentials: Vec<GroupHom>,
}

impl Complex {
    /// `differentials[k]` goes from `groups[k]` to `groups[k + 1]`; `d ∘ d = 0` is checked.
    pub fn new(lowest: i64, groups: Vec<Presentation>, differentials: Vec<GroupHom>) -> Result<Self> {
        if groups.is_empty() || differentials.len() + 1 != groups.len() {
            return Err(Error::InvalidArgument("a complex needs n groups and n - 1 differentials".into()));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.source() != &groups[k] || d.target() != &groups[k + 1] {
                return Err(Error::InvalidHom(format!("differential {k} has the wrong endpoints")));
            }
        }
        for w in differentials.windows(2) {
            if !w[1].compose(&w[0])?.is_zero_map() {
                return Err(Error::InvalidHom("d ∘ d is not zero".into()));
            }
        }
        Ok(Complex { lowest, groups, differentials })
    }

    pub fn concentrated(degree: i64, group: Presentation) -> Self {
        Complex { lowest: degree, groups: vec![group], differentials: vec![] }
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn highest(&self) -> i64 {
        self.lowest + self.groups.len() as i64 - 1
    }

    pub fn group(&self, n: i64) -> Option<&Presentation> {
        if n < self.lowest {
            return None;
        }
        self.groups.get((n - self.lowest) as usize)
    }

    /// Differential out of degree `n` (zero map at the ends).
    fn d(&self, n: i64) -> Option<&GroupHom> {
        if n < self.lowest {
            return None;
        }
        self.differentials.get((n - self.lowest) as usize)
    }

    fn outgoing(&self, n: i64) -> GroupHom {
        let src = self.group(n).expect("degree in range");
        self.d(n).cloned().unwrap_or_else(|| GroupHom::zero(src, &Presentation::free(0)))
    }

    fn incoming(&self, n: i64) -> GroupHom {
        let tgt = self.group(n).expect("degree in range");
        match self.d(n - 1) {
            Some(d) => d.clone(),
            None => GroupHom::zero(&Presentation::free(0), tgt),
        }
    }
}

/// Cohomology of a complex in degree `n` with the endomorphism it induces.
struct Cohomology {
    group: FgAbGroup,
    endo: GroupHom,
}

fn cohomology_with_endo(c: &Complex, phi: &[GroupHom], n: i64) -> Result<Cohomology> {
    let i = (n - c.lowest) as usize;
    let (z, zinc) = kernel(&c.outgoing(n))?;
    let zp = z.presentation();
    // Boundaries, lifted into the cycles.
    let into_z = c.incoming(n).lift_through(&zinc)?;
    let rel = zp.relations().vstack(&into_z.matrix().transpose());
    let norm = Presentation::new(zp.generator_count(), rel).normalize();
    // φ restricted to cycles, then pushed to the quotient.
    let on_z = phi[i].compose(&zinc)?.lift_through(&zinc)?;
    let m = norm.to_normal.mul(on_z.matrix()).mul(&norm.from_normal);
    let endo = GroupHom::between(&norm.group, &norm.group, m)?;
    Ok(Cohomology { group: norm.group, endo })
}

/// Fixed points of `φ` on a bounded complex. Degree `n` of the total complex
/// of `[C --(1−φ)--> C]` sits in `0 → coker(1−φ on H^{n−1}) → H^n → ker(1−φ on H^n) → 0`.
pub fn total_complex_fixed_points(c: &Complex, phi: &[GroupHom]) -> Result<GradedFixedPoints> {
    if phi.len() != c.groups.len() {
        return Err(Error::InvalidArgument("one endomorphism per degree is required".into()));
    }
    for (k, f) in phi.iter().enumerate() {
        if f.source() != &c.groups[k] || f.target() != &c.groups[k] {
            return Err(Error::InvalidHom(format!("φ in degree {} has the wrong endpoints", c.lowest + k as i64)));
        }
    }
    for (k, d) in c.differentials.iter().enumerate() {
        if !d.compose(&phi[k])?.same_map(&phi[k + 1].compose(d)?) {
            return Err(Error::NonCommuting(format!("φ and the differential out of degree {}", c.lowest + k as i64)));
        }
    }
    let mut pairs = BTreeMap::new();
    for n in c.lowest..=c.highest() {
        let h = cohomology_with_endo(c, phi, n)?;
        pairs.insert(n, fixed_points(&Endo::new(h.group.into(), h.endo.matrix().clone())?)?);
    }
    let zero = LocalizedGroup::default();
    let mut out = GradedFixedPoints::default();
    for n in c.lowest..=c.highest() + 1 {
        let sub = pairs.get(&(n - 1)).map_or(zero.clone(), |p| p.h1.clone());
        let quot = pairs.get(&n).map_or(zero.clone(), |p| p.h0.clone());
        out.insert(DegreeFixedPoints::new(n, sub, quot));
    }
    Ok(out)
}

/// Cohomology orders of the total complex `Tot[C --(1−φ)--> C]`, computed
/// directly from its block differentials. Used to cross-check the exact sequence.
pub fn total_complex_cohomology(c: &Complex, phi: &[GroupHom]) -> Result<BTreeMap<i64, FgAbGroup>> {
    // Tot^n = C^n ⊕ C^{n−1}, d(x, y) = (d x, (1−φ) x − d y).
    let tot = |n: i64| -> Presentation {
        let a = c.group(n).cloned().unwrap_or(Presentation::free(0));
        let b = c.group(n - 1).cloned().unwrap_or(Presentation::free(0));
        a.direct_sum(&b)
    };
    let dims = |p: &Option<&Presentation>| p.map_or(0, |p| p.generator_count());
    let diff = |n: i64| -> Result<GroupHom> {
        let (a0, b0) = (dims(&c.group(n)), dims(&c.group(n - 1)));
        let (a1, b1) = (dims(&c.group(n + 1)), dims(&c.group(n)));
        let mut m = IntMatrix::zeros(a1 + b1, a0 + b0);
        if let Some(d) = c.d(n) {
            put(&mut m, 0, 0, d.matrix(), &BigInt::one());
        }
        if a0 > 0 {
            let i = (n - c.lowest) as usize;
            let one_minus = phi[i].one_minus()?;
            put(&mut m, a1, 0, one_minus.matrix(), &BigInt::one());
        }
        if let Some(d) = c.d(n - 1) {
            put(&mut m, a1, a0, d.matrix(), &-BigInt::one());
        }
        GroupHom::new(tot(n), tot(n + 1), m)
    };
    let mut out = BTreeMap::new();
    for n in c.lowest..=c.highest() + 1 {
        let (_, zinc) = kernel(&diff(n)?)?;
        let boundaries = diff(n - 1)?.lift_through(&zinc)?;
        out.insert(n, cokernel(&boundaries)?.group);
    }
    Ok(out)
}

fn put(m: &mut IntMatrix, r0: usize, c0: usize, block: &IntMatrix, sign: &BigInt) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            m[(r0 + i, c0 + j)] = &block[(i, j)] * sign;
        }
    }
}

/// `|h0| = |h1|` for a finite group; `None` when infinite.
pub fn euler_balanced(pair: &FixedPointPair) -> Option<bool> {
    Some(pair.h0.order()? == pair.h1.order()?)
}

/// Whether the order of a localized group is a unit, i.e. the group is zero.
pub fn is_zero_after(g: &FgAbGroup, primes: &PrimeSet) -> bool {
    g.free_rank() == 0 && g.invariant_factors().iter().all(|d| primes.makes_unit(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::PrimeSet;

    fn z(n: i64) -> LocalizedGroup {
        FgAbGroup::cyclic(n).into()
    }

    fn zp(p: u64) -> LocalizedGroup {
        localize(&FgAbGroup::free(1), &PrimeSet::single(p))
    }

    #[test]
    fn identity_gives_two_copies() {
        for g in [z(0), z(6), FgAbGroup::from_orders(2, &[BigInt::from(2), BigInt::from(4)]).into()] {
            let f = fixed_points(&Endo::identity(g.clone())).unwrap();
            assert_eq!((f.h0, f.h1), (g.clone(), g));
        }
    }

    #[test]
    fn p_acts_trivially_mod_p_minus_one() {
        for p in [3u64, 5, 7] {
            let g = z(p as i64 - 1);
            let f = fixed_points(&Endo::mult(g.clone(), p)).unwrap();
            assert_eq!((f.h0, f.h1), (g.clone(), g));
        }
    }

    #[test]
    fn mult_by_p_on_z_inverted_p() {
        for p in [2u64, 3, 5, 7] {
            let f = fixed_points_mult(&zp(p), p, 1).unwrap();
            assert!(f.h0.is_trivial());
            assert_eq!(f.h1.underlying(), &FgAbGroup::cyclic(p - 1));
        }
    }

    #[test]
    fn twists() {
        let f = fixed_points_mult(&zp(3), 3, 0).unwrap();
        assert_eq!((f.h0.clone(), f.h1.clone()), (zp(3), zp(3)));
        let f = fixed_points_mult(&z(2), 3, 1).unwrap();
        assert_eq!((f.h0.underlying(), f.h1.underlying()), (&FgAbGroup::cyclic(2), &FgAbGroup::cyclic(2)));
        let g = localize(&FgAbGroup::cyclic(24), &PrimeSet::single(5));
        let f = fixed_points_mult(&g, 5, 2).unwrap();
        assert_eq!((f.h0.underlying(), f.h1.underlying()), (&FgAbGroup::cyclic(24), &FgAbGroup::cyclic(24)));
        assert!(matches!(fixed_points_mult(&z(0), 5, -1), Err(Error::NegativeTwist { prime: 5, exponent: -1 })));
        // 1 − 5⁻¹ has the kernel and cokernel of 5 − 1 = 4.
        let f = fixed_points_mult(&zp(5), 5, -1).unwrap();
        assert_eq!(f.h1.underlying(), &FgAbGroup::cyclic(4));
    }

    #[test]
    fn graded_zero_and_unresolved() {
        assert!(graded_fixed_points(&GradedEndo::new()).unwrap().iter().next().is_none());
        let g = GradedEndo::new().with(0, Endo::identity(z(2))).with(1, Endo::identity(z(2)));
        let out = graded_fixed_points(&g).unwrap();
        let d0 = out.degree(0);
        assert_eq!(d0.sub, z(2));
        assert_eq!(d0.quot, z(2));
        assert!(!d0.extension_resolved());
        assert!(out.degree(1).extension_resolved());
    }

    #[test]
    fn coprime_split() {
        let g = GradedEndo::new().with(0, Endo::identity(zp(3))).with(1, Endo::identity(z(2)));
        let d = graded_fixed_points(&g).unwrap().degree(0);
        assert_eq!(d.resolution, Resolution::CoprimeSplit);
        assert_eq!(d.resolved.unwrap().to_string(), "Z/2 + Z[1/3]");
        // Z by Z/2 can be non-split.
        let g = GradedEndo::new().with(0, Endo::identity(z(2))).with(1, Endo::identity(z(0)));
        assert!(!graded_fixed_points(&g).unwrap().degree(0).extension_resolved());
    }

    #[test]
    fn json_shape() {
        let g = GradedEndo::new().with(0, Endo::identity(z(3)));
        let out = graded_fixed_points(&g).unwrap();
        let v = serde_json::to_value(&out).unwrap();
        assert_eq!(v["0"]["degree"], 0);
        assert_eq!(v["0"]["quot"]["invariant_factors"][0], 3);
        assert_eq!(v["-1"]["resolved"]["invariant_factors"][0], 3);
    }

    fn two_term(a: i64) -> Complex {
        let z = Presentation::free(1);
        let d = GroupHom::new(z.clone(), z.clone(), IntMatrix::from_rows(1, &[vec![a]])).unwrap();
        Complex::new(0, vec![z.clone(), z], vec![d]).unwrap()
    }

    #[test]
    fn complex_in_one_degree_matches_fixed_points() {
        let g = FgAbGroup::cyclic(24);
        let phi = GroupHom::scalar(&g.presentation(), 5);
        let c = Complex::concentrated(0, g.presentation());
        let out = total_complex_fixed_points(&c, std::slice::from_ref(&phi)).unwrap();
        let f = fixed_points(&Endo::mult(g.into(), 5)).unwrap();
        assert_eq!(out.degree(0).quot, f.h0);
        assert_eq!(out.degree(1).sub, f.h1);
    }

    #[test]
    fn z_times_two() {
        let c = two_term(2);
        let id = GroupHom::identity(&Presentation::free(1));
        let out = total_complex_fixed_points(&c, &[id.clone(), id.clone()]).unwrap();
        assert!(out.degree(0).is_trivial());
        assert!(out.degree(1).sub.is_trivial());
        assert_eq!(out.degree(1).quot, z(2));
        assert_eq!(out.degree(2).sub, z(2));
        let direct = total_complex_cohomology(&c, &[id.clone(), id]).unwrap();
        assert_eq!(direct[&1], FgAbGroup::cyclic(2));
        assert_eq!(direct[&2], FgAbGroup::cyclic(2));
        assert!(direct[&0].is_trivial());
    }

    #[test]
    fn exact_complex_is_trivial() {
        let c = two_term(1);
        let phi = GroupHom::scalar(&Presentation::free(1), 3);
        let out = total_complex_fixed_points(&c, &[phi.clone(), phi]).unwrap();
        assert!(out.iter().all(DegreeFixedPoints::is_trivial));
    }

    #[test]
    fn non_commuting_rejected() {
        let c = two_term(2);
        let z = Presentation::free(1);
        let r = total_complex_fixed_points(&c, &[GroupHom::identity(&z), GroupHom::scalar(&z, 3)]);
        assert!(matches!(r, Err(Error::NonCommuting(_))));
    }
}
