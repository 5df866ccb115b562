use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abgroup::{cokernel, kernel, localize, Big, Cokernel, FgAbGroup, GroupHom, IntMatrix, LocalizedGroup, PrimeSet, Presentation};
use crate::arith::{pow, require_prime};
use crate::field::{Elem, FqField, DEFAULT_FIELD_CEILING};
use crate::fixpoint::{DegreeFixedPoints, FixedPointPair, GradedFixedPoints};
use crate::{Error, Result};

use super::{EllipticCurveSpec, Point, PointGroup, WeierstrassCurve};

/// How far (as a multiple of the level) the units tower is searched for witnesses.
pub const UNITS_SEARCH_FACTOR: u32 = 64;

/// The proper variety `X` in `X × Spec F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variety {
    Point,
    ProjLine,
    Elliptic { curve: EllipticCurveSpec },
}

impl Variety {
    fn check_prime(&self, p: u64) -> Result<()> {
        require_prime(p)?;
        if let Variety::Elliptic { curve } = self {
            curve.validate()?;
            if curve.p != p {
                return Err(Error::InvalidArgument(format!("{} is defined over F_{}, not F_{p}", curve.label(), curve.p)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Point => write!(f, "point"),
            Variety::ProjLine => write!(f, "P1"),
            Variety::Elliptic { curve } => write!(f, "{}", curve.label()),
        }
    }
}

/// A rational point of `P¹` over the level field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P1Point {
    Infinity,
    Finite(Elem),
}

/// `(t − zero) / (t − pole)`, or `t − zero` when the pole is at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BasisUnit {
    pub zero: Elem,
    pub pole: Option<Elem>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartialFrobenius {
    /// The factor the Frobenius acts on.
    pub acts_on: &'static str,
    /// Multiplier on the constant part `Z/(q − 1)`.
    pub constant_multiplier: u64,
    /// `i ↦ j` when the `i`-th removed point goes to the `j`-th.
    pub divisor_permutation: Vec<usize>,
    #[serde(skip)]
    pub map: GroupHom,
}

/// Units of `X × (P¹ ∖ removed)` over `F_{p^m}` for proper `X`: the
/// constants `F_q^×` (generator `α`) times monic functions with divisor
/// supported on the removed points.
#[derive(Clone, Debug, Serialize)]
pub struct UnitsDescription {
    pub level: u32,
    #[serde(skip)]
    pub field: Arc<FqField>,
    pub removed: Vec<P1Point>,
    pub basis: Vec<BasisUnit>,
    /// Generators: `α`, then the basis units.
    #[serde(skip)]
    pub presentation: Presentation,
    pub group: FgAbGroup,
    pub frobenius: PartialFrobenius,
}

impl UnitsDescription {
    pub fn lattice_rank(&self) -> usize {
        self.basis.len()
    }

    /// `f ↦ f(c)` as a map to `F_q^× = Z/(q − 1)` (discrete logs to base `α`).
    pub fn evaluation(&self, c: Elem) -> Result<GroupHom> {
        if self.removed.contains(&P1Point::Finite(c)) {
            return Err(Error::InvalidArgument("evaluation point is a removed point".into()));
        }
        if (c as u64) >= self.field.order() {
            return Err(Error::InvalidArgument("evaluation point is not rational over the level field".into()));
        }
        let f = &*self.field;
        let mut row = vec![BigInt::one()];
        for b in &self.basis {
            let num = f.sub(c, b.zero);
            let val = match b.pole {
                Some(w) => f.div(num, f.sub(c, w)).unwrap(),
                None => num,
            };
            row.push(BigInt::from(f.log(val).expect("nonzero value")));
        }
        let target = cyclic_presentation(f.order() - 1);
        GroupHom::new(self.presentation.clone(), target, IntMatrix::from_rows(row.len(), &[row]))
    }

    /// The absolute Frobenius `f ↦ f^p`.
    pub fn absolute_frobenius(&self) -> GroupHom {
        GroupHom::scalar(&self.presentation, self.field.p())
    }
}

fn cyclic_presentation(n: u64) -> Presentation {
    Presentation::new(1, IntMatrix::from_rows(1, &[vec![BigInt::from(n)]]))
}

/// Units of `X × C` with `C = P¹` minus the given points, over `F_{p^m}`.
///
/// Removed points are elements of the level field in the encoding of
/// `FqField::new(p, m)`; the set must be stable under `x ↦ x^p`.
pub fn units_group(x: &Variety, p: u64, removed: &[P1Point], level: u32) -> Result<UnitsDescription> {
    x.check_prime(p)?;
    let field = Arc::new(FqField::new(p, level)?);
    let f = &*field;
    let mut removed = removed.to_vec();
    removed.sort();
    removed.dedup();
    for pt in &removed {
        if let P1Point::Finite(a) = pt {
            if *a as u64 >= f.order() {
                return Err(Error::InvalidArgument(format!("removed point {a} is not rational over F_{p}^{level}")));
            }
        }
    }
    let frob = |pt: P1Point| match pt {
        P1Point::Infinity => P1Point::Infinity,
        P1Point::Finite(a) => P1Point::Finite(f.frobenius(a)),
    };
    let perm: Vec<usize> = removed
        .iter()
        .map(|&pt| removed.iter().position(|&r| r == frob(pt)))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArgument("removed points must be stable under Frobenius".into()))?;
    // Basis of the degree-zero lattice; `anchor` is the point whose coefficient is implied.
    let anchor = removed.first().copied();
    let finite: Vec<Elem> = removed.iter().filter_map(|pt| if let P1Point::Finite(a) = pt { Some(*a) } else { None }).collect();
    let basis: Vec<BasisUnit> = match anchor {
        None => vec![],
        Some(P1Point::Infinity) => finite.iter().map(|&a| BasisUnit { zero: a, pole: None }).collect(),
        Some(P1Point::Finite(a0)) => finite[1..].iter().map(|&a| BasisUnit { zero: a, pole: Some(a0) }).collect(),
    };
    let r = basis.len();
    let n = r + 1;
    let q = f.order();
    let mut rel = IntMatrix::zeros(1, n);
    rel[(0, 0)] = BigInt::from(q - 1);
    let presentation = Presentation::new(n, rel);
    // Lattice coordinate of a removed point: its basis index, or none for the anchor.
    let index_of = |pt: P1Point| -> Option<usize> {
        let P1Point::Finite(a) = pt else { return None };
        basis.iter().position(|b| b.zero == a)
    };
    let mut m = IntMatrix::zeros(n, n);
    m[(0, 0)] = BigInt::from(p);
    for (j, b) in basis.iter().enumerate() {
        if let Some(i) = index_of(frob(P1Point::Finite(b.zero))) {
            m[(i + 1, j + 1)] += 1;
        }
        if let Some(w) = b.pole {
            if let Some(i) = index_of(frob(P1Point::Finite(w))) {
                m[(i + 1, j + 1)] -= 1;
            }
        }
    }
    let map = GroupHom::new(presentation.clone(), presentation.clone(), m)?;
    let group = presentation.group();
    Ok(UnitsDescription {
        level,
        field,
        removed,
        basis,
        presentation,
        group,
        frobenius: PartialFrobenius { acts_on: "coefficient field", constant_multiplier: p, divisor_permutation: perm, map },
    })
}

/// `Pic(X_F)` for `F = F_{p^m}`: `0`, `Z` or `Z ⊕ E(F)`, with the partial Frobenius.
#[derive(Clone, Debug)]
pub struct PicDescription {
    pub level: u32,
    pub group: FgAbGroup,
    pub points: Option<PointGroup>,
    /// Generators: those of `E(F)` (if any), then the degree.
    pub frobenius: GroupHom,
}

pub fn pic_group(x: &Variety, p: u64, level: u32) -> Result<PicDescription> {
    x.check_prime(p)?;
    let (group, points, m) = match x {
        Variety::Point => (FgAbGroup::trivial(), None, IntMatrix::zeros(0, 0)),
        Variety::ProjLine => (FgAbGroup::free(1), None, IntMatrix::identity(1)),
        Variety::Elliptic { curve } => {
            let g = PointGroup::new(curve, level)?;
            let phi = g.frobenius_hom()?;
            let k = g.group().generator_count();
            let mut m = IntMatrix::zeros(k + 1, k + 1);
            for i in 0..k {
                for j in 0..k {
                    m[(i, j)] = phi.matrix()[(i, j)].clone();
                }
            }
            m[(k, k)] = BigInt::one();
            (g.group().direct_sum(&FgAbGroup::free(1)), Some(g), m)
        }
    };
    let frobenius = GroupHom::between(&group, &group, m)?;
    Ok(PicDescription { level, group, points, frobenius })
}

fn pair_of(map: &GroupHom, primes: &PrimeSet) -> Result<(FixedPointPair, Cokernel)> {
    let f = map.one_minus()?;
    let (k, inclusion) = kernel(&f)?;
    let c = cokernel(&f)?;
    let pair = FixedPointPair {
        h0: localize(&k, primes),
        h1: localize(&c.group, primes),
        inclusion: Some(inclusion),
        projection: Some(c.projection.clone()),
    };
    Ok((pair, c))
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandFixedPoints {
    pub summand: &'static str,
    pub group: FgAbGroup,
    pub fixed: FixedPointPair,
}

/// Fixed points of the partial Frobenius on `RΓ(X_F, Z(1))` at one level.
#[derive(Clone, Debug, Serialize)]
pub struct WeightOneLevel {
    pub variety: String,
    pub p: u64,
    pub level: u32,
    pub localized_away_p: bool,
    pub summands: Vec<SummandFixedPoints>,
    /// Degrees 1..3: `0 → coker(H^{n−1}) → H^n → ker(H^n) → 0` with `H¹ = units`, `H² = Pic`.
    pub degrees: GradedFixedPoints,
}

impl WeightOneLevel {
    pub fn summand(&self, name: &str) -> Option<&SummandFixedPoints> {
        self.summands.iter().find(|s| s.summand == name)
    }
}

fn units_endo(p: u64, level: u32) -> Result<(FgAbGroup, GroupHom)> {
    let q = pow(p, level as u64);
    let g = FgAbGroup::cyclic(q - 1u32);
    let map = GroupHom::scalar(&g.presentation(), p);
    Ok((g, map))
}

pub fn weight1_frobenius_cohomology(x: &Variety, p: u64, level: u32, localize_away_p: bool) -> Result<WeightOneLevel> {
    x.check_prime(p)?;
    if pow(p, level as u64) > BigInt::from(DEFAULT_FIELD_CEILING) {
        return Err(Error::FieldCeiling { size: format!("{p}^{level}"), ceiling: DEFAULT_FIELD_CEILING });
    }
    let primes = if localize_away_p { PrimeSet::single(p) } else { PrimeSet::none() };
    let (ug, umap) = units_endo(p, level)?;
    let (units, _) = pair_of(&umap, &primes)?;
    let pic = pic_group(x, p, level)?;
    let (pic_fixed, _) = pair_of(&pic.frobenius, &primes)?;
    let mut summands = vec![SummandFixedPoints { summand: "units", group: ug, fixed: units.clone() }];
    match x {
        Variety::Point => {}
        Variety::ProjLine => summands.push(SummandFixedPoints { summand: "degree", group: pic.group.clone(), fixed: pic_fixed.clone() }),
        Variety::Elliptic { .. } => {
            let z = FgAbGroup::free(1);
            let (deg, _) = pair_of(&GroupHom::identity(&z.presentation()), &primes)?;
            summands.push(SummandFixedPoints { summand: "degree", group: z, fixed: deg });
            let g = pic.points.as_ref().unwrap();
            let (pic0, _) = pair_of(&g.frobenius_hom()?, &primes)?;
            summands.push(SummandFixedPoints { summand: "pic0", group: g.group().clone(), fixed: pic0 });
        }
    }
    let zero = localize(&FgAbGroup::trivial(), &primes);
    let mut degrees = GradedFixedPoints::default();
    degrees.insert(DegreeFixedPoints::new(1, zero.clone(), units.h0.clone()));
    degrees.insert(DegreeFixedPoints::new(2, units.h1.clone(), pic_fixed.h0.clone()));
    degrees.insert(DegreeFixedPoints::new(3, pic_fixed.h1.clone(), zero));
    Ok(WeightOneLevel { variety: x.to_string(), p, level, localized_away_p: localize_away_p, summands, degrees })
}

/// `(p^{m'} − 1)/(p^m − 1)`: the map `F_{p^m}^× → F_{p^{m'}}^×` on
/// norm-compatible generators.
pub fn units_transition(p: u64, m: u32, m2: u32) -> Result<BigInt> {
    if m == 0 || m2 % m != 0 {
        return Err(Error::InvalidArgument(format!("F_{p}^{m} does not embed in F_{p}^{m2}")));
    }
    Ok((pow(p, m2 as u64) - 1u32) / (pow(p, m as u64) - 1u32))
}

/// First multiple `m' = k·m` at which the class of `α_m^x` in
/// `coker(1 − p)` on `F_{p^{m'}}^×` vanishes.
pub fn units_class_death(p: u64, m: u32, x: &BigInt, primes: &PrimeSet) -> Option<u32> {
    let target = BigInt::from(p - 1);
    (1..=UNITS_SEARCH_FACTOR).map(|k| k * m).find(|&m2| {
        let t = units_transition(p, m, m2).unwrap();
        let n2 = pow(p, m2 as u64) - 1u32;
        let d = n2.gcd(&target);
        let y: BigInt = (x * t).mod_floor(&d);
        let order = &d / y.gcd(&d);
        y.is_zero() || primes.makes_unit(&order)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The pushed-forward exponent lies in `(1 − p)·F^×`.
    UnitsExponent { exponent: Big },
    /// `R − φ(R) = Q` at the witness level (coordinates in that level's field).
    Point { point: Point },
    /// The class has `p`-power order and dies once `p` is inverted.
    InvertedOrder { order: Big },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCertificate {
    pub level: u32,
    pub class: Vec<Big>,
    pub dies_at: Option<u32>,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelGroup {
    pub level: u32,
    pub group: LocalizedGroup,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummandRigidity {
    pub summand: &'static str,
    pub kernels: Vec<LevelGroup>,
    pub cokernels: Vec<LevelGroup>,
    pub stable_from: Option<u32>,
    /// Kernels at levels from `stable_from` on are isomorphic, and the maps
    /// between comparable levels (`m | m'`) are isomorphisms.
    pub kernels_agree: bool,
    /// The cokernel maps between comparable levels are isomorphisms.
    pub coker_constant: bool,
    pub classes: Vec<ClassCertificate>,
}

impl SummandRigidity {
    pub fn certified(&self) -> bool {
        self.coker_constant || self.classes.iter().all(|c| c.dies_at.is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityReport {
    pub variety: String,
    pub p: u64,
    pub levels: Vec<u32>,
    pub localized_away_p: bool,
    pub summands: Vec<SummandRigidity>,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl RigidityReport {
    pub fn summand(&self, name: &str) -> Option<&SummandRigidity> {
        self.summands.iter().find(|s| s.summand == name)
    }
}

/// Comparable pairs `(m, m')` with `m | m'`, `m < m'`.
fn comparable(levels: &[u32]) -> Vec<(u32, u32)> {
    let mut out = vec![];
    for &a in levels {
        for &b in levels {
            if a < b && b % a == 0 {
                out.push((a, b));
            }
        }
    }
    out
}

/// The least level from which all kernels agree and all comparison maps are isomorphisms.
fn stable_from(kernels: &[LevelGroup], iso: &HashMap<(u32, u32), bool>) -> Option<u32> {
    let top = kernels.last()?;
    let mut from = top.level;
    for (i, k) in kernels.iter().enumerate().rev() {
        let later = &kernels[i..];
        let ok = later.iter().all(|l| l.group == k.group)
            && iso.iter().filter(|((a, _), _)| *a >= k.level).all(|(_, &v)| v);
        if !ok {
            break;
        }
        from = k.level;
    }
    Some(from)
}

struct LevelData {
    field: Arc<FqField>,
    curve: Option<WeierstrassCurve>,
    points: Vec<Point>,
}

/// Tower data for one elliptic curve, cached per level.
struct CurveTower<'a> {
    spec: &'a EllipticCurveSpec,
    cache: HashMap<u32, Arc<LevelData>>,
}

impl CurveTower<'_> {
    fn level(&mut self, m: u32) -> Result<Arc<LevelData>> {
        if let Some(d) = self.cache.get(&m) {
            return Ok(d.clone());
        }
        let field = Arc::new(FqField::new(self.spec.p, m)?);
        let curve = WeierstrassCurve::over(self.spec, field.clone())?;
        let points = curve.points();
        let d = Arc::new(LevelData { field, curve: Some(curve), points });
        self.cache.insert(m, d.clone());
        Ok(d)
    }

    fn embed(&mut self, pt: Point, from: u32, to: u32) -> Result<Point> {
        let small = self.level(from)?;
        let big = self.level(to)?;
        let e = small.field.embedding_into(&big.field)?;
        Ok(WeierstrassCurve::map_point(pt, |x| e.apply(x)))
    }
}

/// Compares the weight-one fixed points of `X` across field levels: the
/// kernels must stabilize and every cokernel class must die further up the
/// tower (or sit in a summand whose cokernel is constant).
pub fn rigidity_compare(x: &Variety, p: u64, levels: &[u32], localize_away_p: bool) -> Result<RigidityReport> {
    x.check_prime(p)?;
    let mut levels = levels.to_vec();
    levels.sort();
    levels.dedup();
    if levels.len() < 2 {
        return Err(Error::InvalidArgument("rigidity comparison needs at least two levels".into()));
    }
    let primes = if localize_away_p { PrimeSet::single(p) } else { PrimeSet::none() };
    let pairs = comparable(&levels);
    let mut summands = vec![units_rigidity(p, &levels, &pairs, &primes)?];
    match x {
        Variety::Point => {}
        Variety::ProjLine => summands.push(degree_rigidity(&levels, &pairs, &primes)?),
        Variety::Elliptic { curve } => {
            summands.push(degree_rigidity(&levels, &pairs, &primes)?);
            summands.push(pic0_rigidity(curve, &levels, &pairs, &primes)?);
        }
    }
    let mut failures = vec![];
    for s in &summands {
        if s.stable_from.is_none() || !s.kernels_agree {
            failures.push(format!("{}: kernels do not stabilize", s.summand));
        }
        for c in s.classes.iter().filter(|c| c.dies_at.is_none()) {
            if !s.coker_constant {
                failures.push(format!("{}: class {:?} at level {} has no witness", s.summand, c.class.iter().map(|b| b.0.to_string()).collect::<Vec<_>>(), c.level));
            }
        }
    }
    Ok(RigidityReport {
        variety: x.to_string(),
        p,
        levels,
        localized_away_p: localize_away_p,
        passed: failures.is_empty(),
        summands,
        failures,
    })
}

fn basis_vectors(n: usize) -> impl Iterator<Item = Vec<BigInt>> {
    (0..n).map(move |i| {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        v
    })
}

fn units_rigidity(p: u64, levels: &[u32], pairs: &[(u32, u32)], primes: &PrimeSet) -> Result<SummandRigidity> {
    let mut data = HashMap::new();
    let mut kernels = vec![];
    let mut cokernels = vec![];
    let mut classes = vec![];
    for &m in levels {
        let (g, map) = units_endo(p, m)?;
        let (pair, c) = pair_of(&map, primes)?;
        kernels.push(LevelGroup { level: m, group: pair.h0.clone() });
        cokernels.push(LevelGroup { level: m, group: pair.h1.clone() });
        for (i, _) in basis_vectors(c.group.generator_count()).enumerate() {
            let x = c.section[(0, i)].clone();
            let dies_at = units_class_death(p, m, &x, primes);
            let witness = dies_at.map(|m2| {
                let y = (&x * units_transition(p, m, m2).unwrap()).mod_floor(&(pow(p, m2 as u64) - 1u32));
                Witness::UnitsExponent { exponent: Big(y) }
            });
            classes.push(ClassCertificate { level: m, class: vec![Big(x)], dies_at, witness });
        }
        data.insert(m, (g, pair));
    }
    let mut iso = HashMap::new();
    for &(a, b) in pairs {
        let (_, pa) = &data[&a];
        let (gb, pb) = &data[&b];
        let t = units_transition(p, a, b)?;
        let step = GroupHom::between(&FgAbGroup::cyclic(pow(p, a as u64) - 1u32), gb, IntMatrix::scalar(1, &t))?;
        let through = step.compose(pa.inclusion.as_ref().unwrap())?;
        let induced = through.lift_through(pb.inclusion.as_ref().unwrap())?;
        iso.insert((a, b), induced.is_isomorphism()?);
    }
    let stable = stable_from(&kernels, &iso);
    Ok(SummandRigidity {
        summand: "units",
        kernels_agree: stable.is_some(),
        stable_from: stable,
        kernels,
        cokernels,
        coker_constant: false,
        classes,
    })
}

fn degree_rigidity(levels: &[u32], pairs: &[(u32, u32)], primes: &PrimeSet) -> Result<SummandRigidity> {
    let z = FgAbGroup::free(1);
    let id = GroupHom::identity(&z.presentation());
    let (pair, c) = pair_of(&id, primes)?;
    let kernels: Vec<LevelGroup> = levels.iter().map(|&m| LevelGroup { level: m, group: pair.h0.clone() }).collect();
    let cokernels: Vec<LevelGroup> = levels.iter().map(|&m| LevelGroup { level: m, group: pair.h1.clone() }).collect();
    // Degree is preserved by base change: every transition is the identity.
    let coker_map = crate::abgroup::induced_on_cokernels(&c, &c, &id)?;
    let coker_constant = coker_map.is_isomorphism()?;
    let iso: HashMap<(u32, u32), bool> = pairs.iter().map(|&ab| (ab, true)).collect();
    let classes = levels
        .iter()
        .flat_map(|&m| {
            let c = &c;
            (0..c.group.generator_count()).map(move |i| ClassCertificate {
                level: m,
                class: vec![Big(c.section[(0, i)].clone())],
                dies_at: None,
                witness: None,
            })
        })
        .collect();
    let stable = stable_from(&kernels, &iso);
    Ok(SummandRigidity { summand: "degree", kernels_agree: stable.is_some(), stable_from: stable, kernels, cokernels, coker_constant, classes })
}

fn pic0_rigidity(spec: &EllipticCurveSpec, levels: &[u32], pairs: &[(u32, u32)], primes: &PrimeSet) -> Result<SummandRigidity> {
    let p = spec.p;
    let mut tower = CurveTower { spec, cache: HashMap::new() };
    let mut kernels = vec![];
    let mut cokernels = vec![];
    let mut classes = vec![];
    let mut fixed_sets = HashMap::new();
    for &m in levels {
        let g = PointGroup::new(spec, m)?;
        let phi = g.frobenius_hom()?;
        let (pair, c) = pair_of(&phi, primes)?;
        kernels.push(LevelGroup { level: m, group: pair.h0.clone() });
        cokernels.push(LevelGroup { level: m, group: pair.h1.clone() });
        let mut fixed: Vec<Point> = g.points().iter().copied().filter(|&pt| g.frobenius(pt) == pt).collect();
        fixed.sort();
        fixed_sets.insert(m, fixed);
        for i in 0..c.group.generator_count() {
            let v: Vec<BigInt> = (0..c.section.rows()).map(|r| c.section[(r, i)].clone()).collect();
            let q = g.point_of(&v);
            let order = c.group.generator_order(i);
            let (dies_at, witness) = pic0_witness(&mut tower, p, m, q, &order, primes)?;
            classes.push(ClassCertificate { level: m, class: v.into_iter().map(Big).collect(), dies_at, witness });
        }
    }
    let mut iso = HashMap::new();
    for &(a, b) in pairs {
        let mut image = fixed_sets[&a].iter().map(|&pt| tower.embed(pt, a, b)).collect::<Result<Vec<_>>>()?;
        image.sort();
        iso.insert((a, b), image == fixed_sets[&b]);
    }
    let stable = stable_from(&kernels, &iso);
    Ok(SummandRigidity { summand: "pic0", kernels_agree: stable.is_some(), stable_from: stable, kernels, cokernels, coker_constant: false, classes })
}

/// Searches the multiples of `m` within the field ceiling for `R` with `R − φ(R) = Q`.
fn pic0_witness(tower: &mut CurveTower, p: u64, m: u32, q: Point, order: &BigInt, primes: &PrimeSet) -> Result<(Option<u32>, Option<Witness>)> {
    if q == Point::Infinity {
        return Ok((Some(m), Some(Witness::Point { point: Point::Infinity })));
    }
    // After inverting p only the prime-to-p part of the class matters.
    let mut q = q;
    let (mut prime_to_p, mut p_part) = (order.clone(), BigInt::one());
    if primes.contains(p) {
        while prime_to_p.is_multiple_of(&BigInt::from(p)) {
            prime_to_p /= p;
            p_part *= p;
        }
        if prime_to_p.is_one() {
            return Ok((Some(m), Some(Witness::InvertedOrder { order: Big(order.clone()) })));
        }
        let base = tower.level(m)?;
        q = base.curve.as_ref().unwrap().mul(p_part.to_i64().unwrap(), q);
    }
    let mut m2 = m;
    while pow(p, m2 as u64) <= BigInt::from(DEFAULT_FIELD_CEILING) {
        let big = tower.level(m2)?;
        let target = tower.embed(q, m, m2)?;
        let c = big.curve.as_ref().unwrap();
        if let Some(&r) = big.points.iter().find(|&&r| c.sub(r, c.frobenius_power(r, 1)) == target) {
            return Ok((Some(m2), Some(Witness::Point { point: r })));
        }
        m2 += m;
    }
    Ok((None, None))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Kernel,
    Cokernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvaluationClass {
    pub kind: ClassKind,
    pub class: Vec<Big>,
    pub at_c0: Big,
    pub at_c1: Big,
    pub raw_equal: bool,
    /// Level where the difference of the two values dies, if it is not zero already.
    pub dies_at: Option<u32>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointIndependenceReport {
    pub variety: String,
    pub level: u32,
    pub removed: Vec<P1Point>,
    pub c0: Elem,
    pub c1: Elem,
    pub units: FgAbGroup,
    pub ker: FgAbGroup,
    pub coker: FgAbGroup,
    pub classes: Vec<EvaluationClass>,
    pub passed: bool,
}

/// Evaluation at `c0` and `c1` on the fixed points of `f ↦ f^p` acting on
/// the units of `X × C`, `C = P¹ ∖ removed`, over `F_{p^m}`.
pub fn point_independence_check(x: &Variety, p: u64, removed: &[P1Point], level: u32, c0: Elem, c1: Elem) -> Result<PointIndependenceReport> {
    let u = units_group(x, p, removed, level)?;
    let ev0 = u.evaluation(c0)?;
    let ev1 = u.evaluation(c1)?;
    let q = u.field.order();
    let target = cyclic_presentation(q - 1);
    let tmap = GroupHom::scalar(&target, p);
    let frob = u.absolute_frobenius();
    let one_minus = frob.one_minus()?;
    let (ker, inclusion) = kernel(&one_minus)?;
    let coker = cokernel(&one_minus)?;
    let tcoker = cokernel(&tmap.one_minus()?)?;
    let modulus = BigInt::from(q - 1);
    let value = |h: &GroupHom, v: &[BigInt]| h.apply(v)[0].mod_floor(&modulus);
    let mut classes = vec![];
    for v in basis_vectors(ker.generator_count()) {
        let w = inclusion.apply(&v);
        let (a, b) = (value(&ev0, &w), value(&ev1, &w));
        let eq = a == b;
        classes.push(EvaluationClass { kind: ClassKind::Kernel, class: w.into_iter().map(Big).collect(), at_c0: Big(a), at_c1: Big(b), raw_equal: eq, dies_at: None, agree: eq });
    }
    for i in 0..coker.group.generator_count() {
        let w: Vec<BigInt> = (0..coker.section.rows()).map(|r| coker.section[(r, i)].clone()).collect();
        let (a, b) = (value(&ev0, &w), value(&ev1, &w));
        let d = &a - &b;
        let raw_equal = tcoker.group.is_zero_element(&tcoker.projection.apply(&[d.clone()]));
        let dies_at = if raw_equal { None } else { units_class_death(p, level, &d, &PrimeSet::none()) };
        classes.push(EvaluationClass {
            kind: ClassKind::Cokernel,
            class: w.into_iter().map(Big).collect(),
            at_c0: Big(a),
            at_c1: Big(b),
            raw_equal,
            dies_at,
            agree: raw_equal || dies_at.is_some(),
        });
    }
    Ok(PointIndependenceReport {
        variety: x.to_string(),
        level,
        removed: u.removed.clone(),
        c0,
        c1,
        units: u.group.clone(),
        ker,
        coker: coker.group,
        passed: classes.iter().all(|c| c.agree),
        classes,
    })
}
