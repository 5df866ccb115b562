//! Countable directed systems of finitely generated abelian groups with an
//! optional level-wise endomorphism.
//!
//! Levels are indexed from 1 and evaluated lazily. A system refuses levels
//! past its ceiling (default 8: the factorial tower grows like `p^{m!}`).
//! Fixed points are taken level-wise and then stabilized or certified to
//! vanish in the colimit.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::abgroup::{cokernel, induced_on_cokernels, kernel, Big, Cokernel, FgAbGroup, GroupHom, IntMatrix, PrimeSet};
use crate::arith::{factorial_tower_size, gcd, pow, pow_mod, require_prime};
use crate::{Error, Result};

pub const DEFAULT_CEILING: usize = 8;

/// Witness searches on reduced fixed-point systems may run this far, since
/// their levels stay small even when the underlying tower does not.
pub const DEFAULT_REDUCED_CEILING: usize = 1 << 16;

/// A directed system `G_1 → G_2 → …`, optionally with compatible endomorphisms.
pub trait LevelSystem: Send + Sync + fmt::Debug {
    fn tower(&self) -> &str;

    fn prime(&self) -> Option<u64> {
        None
    }

    fn group(&self, m: usize) -> Result<FgAbGroup>;

    /// The transition from level `m` to level `m + 1`.
    fn transition(&self, m: usize) -> Result<GroupHom>;

    fn endo(&self, m: usize) -> Result<Option<GroupHom>>;

    /// Last level that exists, for finite systems.
    fn last_level(&self) -> Option<usize> {
        None
    }

    /// Kernel and cokernel of `1 − endo` at level `m`, with transitions to
    /// level `m + 1`, computed without materializing level `m`. Systems that
    /// cannot do this return `None`.
    fn reduced_fixed_points(&self, _m: usize) -> Option<Result<ReducedLevel>> {
        None
    }

    /// A level from which every transition is provably an isomorphism.
    fn stable_from(&self) -> Option<usize> {
        None
    }

    /// For systems with reduced fixed points: a level from which the kernel
    /// of `1 − endo` provably no longer changes.
    fn kernel_stable_from(&self) -> Option<usize> {
        None
    }
}

#[derive(Clone, Debug)]
pub struct ReducedLevel {
    pub ker: FgAbGroup,
    pub coker: FgAbGroup,
    pub ker_transition: GroupHom,
    pub coker_transition: GroupHom,
}

#[derive(Default)]
struct Memo {
    groups: BTreeMap<usize, FgAbGroup>,
    transitions: BTreeMap<usize, GroupHom>,
    endos: BTreeMap<usize, Option<GroupHom>>,
}

/// A lazily evaluated, memoized directed system.
#[derive(Clone)]
pub struct IndAbGroup {
    system: Arc<dyn LevelSystem>,
    ceiling: usize,
    memo: Arc<Mutex<Memo>>,
}

impl fmt::Debug for IndAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndAbGroup").field("system", &self.system).field("ceiling", &self.ceiling).finish()
    }
}

impl IndAbGroup {
    pub fn new(system: impl LevelSystem + 'static) -> Self {
        Self::from_arc(Arc::new(system), DEFAULT_CEILING)
    }

    fn from_arc(system: Arc<dyn LevelSystem>, ceiling: usize) -> Self {
        IndAbGroup { system, ceiling, memo: Arc::new(Mutex::new(Memo::default())) }
    }

    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling;
        self
    }

    /// The constant system with identity transitions.
    pub fn constant(group: FgAbGroup, endo: Option<IntMatrix>) -> Result<Self> {
        let endo = endo.map(|m| GroupHom::between(&group, &group, m)).transpose()?;
        Ok(Self::new(ConstantSystem { group, endo }))
    }

    /// A finite system given level by level; `transitions[k]` goes from level
    /// `k + 1` to level `k + 2`.
    pub fn explicit(levels: Vec<FgAbGroup>, transitions: Vec<GroupHom>, endos: Option<Vec<GroupHom>>) -> Result<Self> {
        if levels.is_empty() || transitions.len() + 1 != levels.len() {
            return Err(Error::InvalidArgument("an explicit system needs n levels and n - 1 transitions".into()));
        }
        if endos.as_ref().is_some_and(|e| e.len() != levels.len()) {
            return Err(Error::InvalidArgument("one endomorphism per level is required".into()));
        }
        for (k, t) in transitions.iter().enumerate() {
            if t.source() != &levels[k].presentation() || t.target() != &levels[k + 1].presentation() {
                return Err(Error::InvalidHom(format!("transition {} has the wrong endpoints", k + 1)));
            }
        }
        let n = levels.len();
        Ok(Self::new(ExplicitSystem { levels, transitions, endos }).with_ceiling(n))
    }

    pub fn ceiling(&self) -> usize {
        self.ceiling
    }

    pub fn system(&self) -> &dyn LevelSystem {
        self.system.as_ref()
    }

    fn check_level(&self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidArgument("levels are numbered from 1".into()));
        }
        let ceiling = self.system.last_level().map_or(self.ceiling, |l| l.min(self.ceiling));
        if m > ceiling {
            return Err(Error::LevelCeiling { level: m, ceiling });
        }
        Ok(())
    }

    pub fn level(&self, m: usize) -> Result<FgAbGroup> {
        self.check_level(m)?;
        if let Some(g) = self.memo.lock().unwrap().groups.get(&m) {
            return Ok(g.clone());
        }
        let g = self.system.group(m)?;
        self.memo.lock().unwrap().groups.insert(m, g.clone());
        Ok(g)
    }

    /// Transition from level `m` to `m + 1`; the commuting square with the
    /// endomorphisms is checked the first time it is computed.
    pub fn transition(&self, m: usize) -> Result<GroupHom> {
        self.check_level(m + 1)?;
        if let Some(t) = self.memo.lock().unwrap().transitions.get(&m) {
            return Ok(t.clone());
        }
        let t = self.system.transition(m)?;
        if t.source() != &self.level(m)?.presentation() || t.target() != &self.level(m + 1)?.presentation() {
            return Err(Error::InvalidHom(format!("transition {m} has the wrong endpoints")));
        }
        if let (Some(e0), Some(e1)) = (self.endo(m)?, self.endo(m + 1)?) {
            if !t.compose(&e0)?.same_map(&e1.compose(&t)?) {
                return Err(Error::NonCommuting(format!("transition {m} and the endomorphisms")));
            }
        }
        self.memo.lock().unwrap().transitions.insert(m, t.clone());
        Ok(t)
    }

    pub fn endo(&self, m: usize) -> Result<Option<GroupHom>> {
        self.check_level(m)?;
        if let Some(e) = self.memo.lock().unwrap().endos.get(&m) {
            return Ok(e.clone());
        }
        let e = self.system.endo(m)?;
        if let Some(e) = &e {
            let p = self.level(m)?.presentation();
            if e.source() != &p || e.target() != &p {
                return Err(Error::InvalidHom(format!("endomorphism at level {m} has the wrong endpoints")));
            }
        }
        self.memo.lock().unwrap().endos.insert(m, e.clone());
        Ok(e)
    }

    pub fn has_endo(&self) -> Result<bool> {
        Ok(self.endo(1)?.is_some())
    }

    /// Pushes an element of level `from` forward to level `to`.
    pub fn push_forward(&self, v: &[BigInt], from: usize, to: usize) -> Result<Vec<BigInt>> {
        let mut v = v.to_vec();
        for m in from..to {
            v = self.transition(m)?.apply(&v);
        }
        Ok(v)
    }

    pub fn levels_computed(&self) -> usize {
        self.memo.lock().unwrap().groups.len()
    }

    pub fn descriptor(&self) -> serde_json::Value {
        json!({
            "tower": self.system.tower(),
            "p": self.system.prime(),
            "levels_computed": self.levels_computed(),
            "ceiling": self.ceiling,
        })
    }
}

impl Serialize for IndAbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

/// Hom between two groups that are cyclic or trivial, multiplying by `c`.
pub(crate) fn cyclic_hom(source: &FgAbGroup, target: &FgAbGroup, c: &BigInt) -> Result<GroupHom> {
    let (r, k) = (target.generator_count(), source.generator_count());
    if r > 1 || k > 1 {
        return Err(Error::InvalidArgument("cyclic_hom needs cyclic groups".into()));
    }
    let m = if r == 1 && k == 1 { IntMatrix::from_vec(1, 1, vec![c.clone()]) } else { IntMatrix::zeros(r, k) };
    GroupHom::between(source, target, m)
}

#[derive(Debug)]
struct ConstantSystem {
    group: FgAbGroup,
    endo: Option<GroupHom>,
}

impl LevelSystem for ConstantSystem {
    fn tower(&self) -> &str {
        "constant"
    }

    fn group(&self, _m: usize) -> Result<FgAbGroup> {
        Ok(self.group.clone())
    }

    fn transition(&self, _m: usize) -> Result<GroupHom> {
        Ok(GroupHom::identity(&self.group.presentation()))
    }

    fn endo(&self, _m: usize) -> Result<Option<GroupHom>> {
        Ok(self.endo.clone())
    }
}

#[derive(Debug)]
struct ExplicitSystem {
    levels: Vec<FgAbGroup>,
    transitions: Vec<GroupHom>,
    endos: Option<Vec<GroupHom>>,
}

impl LevelSystem for ExplicitSystem {
    fn tower(&self) -> &str {
        "explicit"
    }

    fn group(&self, m: usize) -> Result<FgAbGroup> {
        Ok(self.levels[m - 1].clone())
    }

    fn transition(&self, m: usize) -> Result<GroupHom> {
        Ok(self.transitions[m - 1].clone())
    }

    fn endo(&self, m: usize) -> Result<Option<GroupHom>> {
        Ok(self.endos.as_ref().map(|e| e[m - 1].clone()))
    }

    fn last_level(&self) -> Option<usize> {
        Some(self.levels.len())
    }
}

/// `colim F_{p^{m!}}^×` written additively: level `m` is `Z/(p^{m!} − 1)`,
/// with endomorphism `x ↦ x^{p^power}`, i.e. multiplication by `p^power`.
#[derive(Debug)]
pub struct RootsOfUnity {
    p: u64,
    power: u64,
}

impl RootsOfUnity {
    fn order(&self, m: usize) -> BigInt {
        factorial_tower_size(self.p, m) - 1
    }

    /// `m! mod power`. Exponents of `p` only matter modulo `power`, the order
    /// of `p` modulo `p^power − 1`.
    fn reduced_exponent(&self, m: usize) -> u64 {
        let i = self.power;
        if m as u64 >= i {
            return 0;
        }
        (1..=m as u64).fold(1 % i, |acc, k| acc * k % i)
    }

    /// `gcd(p^{m!} − 1, p^power − 1)` computed modulo the small side.
    fn fixed_order(&self, m: usize) -> BigInt {
        let c = pow(self.p, self.power) - 1;
        let r = pow_mod(self.p, &BigInt::from(self.reduced_exponent(m)), &c);
        gcd(&c, &(r - 1))
    }
}

impl LevelSystem for RootsOfUnity {
    fn tower(&self) -> &str {
        "factorial"
    }

    fn prime(&self) -> Option<u64> {
        Some(self.p)
    }

    fn group(&self, m: usize) -> Result<FgAbGroup> {
        Ok(FgAbGroup::cyclic(self.order(m)))
    }

    fn transition(&self, m: usize) -> Result<GroupHom> {
        let (a, b) = (self.order(m), self.order(m + 1));
        cyclic_hom(&FgAbGroup::cyclic(a.clone()), &FgAbGroup::cyclic(b.clone()), &(b / a))
    }

    fn endo(&self, m: usize) -> Result<Option<GroupHom>> {
        let g = self.group(m)?;
        Ok(Some(cyclic_hom(&g, &g, &pow(self.p, self.power))?))
    }

    /// The kernel is `Z/(p^{gcd(m!, power)} − 1)`, constant once `power | m!`.
    fn kernel_stable_from(&self) -> Option<usize> {
        (1..).find(|&m| self.reduced_exponent(m) == 0)
    }

    fn reduced_fixed_points(&self, m: usize) -> Option<Result<ReducedLevel>> {
        let (g0, g1) = (self.fixed_order(m), self.fixed_order(m + 1));
        let (k0, k1) = (FgAbGroup::cyclic(g0.clone()), FgAbGroup::cyclic(g1.clone()));
        // The transition multiplies by (p^{(m+1)!} − 1)/(p^{m!} − 1) = Σ_{k ≤ m} p^{k·m!}.
        let (e, i) = (self.reduced_exponent(m), self.power);
        let mut t = BigInt::zero();
        if e == 0 {
            t = BigInt::from(m + 1) % &g1;
        } else if !g1.is_one() {
            for k in 0..=m as u64 {
                t += pow_mod(self.p, &BigInt::from(k % i * e % i), &g1);
            }
            t %= &g1;
        }
        Some((|| {
            Ok(ReducedLevel {
                ker_transition: cyclic_hom(&k0, &k1, &(&g1 / &g0))?,
                coker_transition: cyclic_hom(&k0, &k1, &t)?,
                ker: k0.clone(),
                coker: k0.clone(),
            })
        })())
    }
}

/// The factorial tower of roots of unity with endomorphism `x ↦ x^p`.
pub fn roots_of_unity_ind(p: u64) -> Result<IndAbGroup> {
    units_frobenius_ind(p, 1)
}

/// The factorial tower of roots of unity with endomorphism `x ↦ x^{p^i}`.
pub fn units_frobenius_ind(p: u64, i: u64) -> Result<IndAbGroup> {
    require_prime(p)?;
    if i == 0 {
        return Err(Error::InvalidArgument("the Frobenius power must be positive".into()));
    }
    Ok(IndAbGroup::new(RootsOfUnity { p, power: i }))
}

struct FixedLevel {
    ker: FgAbGroup,
    inclusion: GroupHom,
    coker: Cokernel,
}

/// Level-wise fixed points shared by the kernel and cokernel systems.
struct FixedLevels {
    base: IndAbGroup,
    reduced: bool,
    generic: Mutex<BTreeMap<usize, Arc<FixedLevel>>>,
    reduced_memo: Mutex<BTreeMap<usize, ReducedLevel>>,
}

impl fmt::Debug for FixedLevels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FixedLevels").field("base", &self.base).field("reduced", &self.reduced).finish()
    }
}

impl FixedLevels {
    fn generic(&self, m: usize) -> Result<Arc<FixedLevel>> {
        if let Some(l) = self.generic.lock().unwrap().get(&m) {
            return Ok(l.clone());
        }
        let e = self.base.endo(m)?.ok_or(Error::MissingEndo)?;
        let f = e.one_minus()?;
        let (ker, inclusion) = kernel(&f)?;
        let coker = cokernel(&f)?;
        let l = Arc::new(FixedLevel { ker, inclusion, coker });
        self.generic.lock().unwrap().insert(m, l.clone());
        Ok(l)
    }

    fn reduced(&self, m: usize) -> Result<ReducedLevel> {
        if let Some(l) = self.reduced_memo.lock().unwrap().get(&m) {
            return Ok(l.clone());
        }
        let l = self.base.system.reduced_fixed_points(m).ok_or(Error::Unsupported("reduced fixed points".into()))??;
        self.reduced_memo.lock().unwrap().insert(m, l.clone());
        Ok(l)
    }

    fn ker(&self, m: usize) -> Result<FgAbGroup> {
        if self.reduced {
            Ok(self.reduced(m)?.ker)
        } else {
            Ok(self.generic(m)?.ker.clone())
        }
    }

    fn coker(&self, m: usize) -> Result<FgAbGroup> {
        if self.reduced {
            Ok(self.reduced(m)?.coker)
        } else {
            Ok(self.generic(m)?.coker.group.clone())
        }
    }

    fn ker_transition(&self, m: usize) -> Result<GroupHom> {
        if self.reduced {
            return Ok(self.reduced(m)?.ker_transition);
        }
        let (a, b) = (self.generic(m)?, self.generic(m + 1)?);
        self.base.transition(m)?.compose(&a.inclusion)?.lift_through(&b.inclusion)
    }

    fn coker_transition(&self, m: usize) -> Result<GroupHom> {
        if self.reduced {
            return Ok(self.reduced(m)?.coker_transition);
        }
        let (a, b) = (self.generic(m)?, self.generic(m + 1)?);
        induced_on_cokernels(&a.coker, &b.coker, &self.base.transition(m)?)
    }
}

#[derive(Debug)]
struct KerSystem(Arc<FixedLevels>);

#[derive(Debug)]
struct CokerSystem(Arc<FixedLevels>);

impl LevelSystem for KerSystem {
    fn tower(&self) -> &str {
        "kernel"
    }

    fn prime(&self) -> Option<u64> {
        self.0.base.system.prime()
    }

    fn group(&self, m: usize) -> Result<FgAbGroup> {
        self.0.ker(m)
    }

    fn transition(&self, m: usize) -> Result<GroupHom> {
        self.0.ker_transition(m)
    }

    fn endo(&self, _m: usize) -> Result<Option<GroupHom>> {
        Ok(None)
    }

    fn last_level(&self) -> Option<usize> {
        self.0.base.system.last_level()
    }

    fn stable_from(&self) -> Option<usize> {
        self.0.reduced.then(|| self.0.base.system.kernel_stable_from()).flatten()
    }
}

impl LevelSystem for CokerSystem {
    fn tower(&self) -> &str {
        "cokernel"
    }

    fn prime(&self) -> Option<u64> {
        self.0.base.system.prime()
    }

    fn group(&self, m: usize) -> Result<FgAbGroup> {
        self.0.coker(m)
    }

    fn transition(&self, m: usize) -> Result<GroupHom> {
        self.0.coker_transition(m)
    }

    fn endo(&self, _m: usize) -> Result<Option<GroupHom>> {
        Ok(None)
    }

    fn last_level(&self) -> Option<usize> {
        self.0.base.system.last_level()
    }
}

/// Level-wise kernel and cokernel of `1 − endo` with induced transitions.
#[derive(Clone, Debug)]
pub struct IndFixedPoints {
    pub ker_system: IndAbGroup,
    pub coker_system: IndAbGroup,
}

/// Levels on which the commuting squares are re-checked eagerly.
const EAGER_CHECK_LEVELS: usize = 4;

pub fn ind_fixed_points(g: &IndAbGroup) -> Result<IndFixedPoints> {
    if !g.has_endo()? {
        return Err(Error::MissingEndo);
    }
    let top = g.system.last_level().unwrap_or(g.ceiling).min(g.ceiling).min(EAGER_CHECK_LEVELS);
    for m in 1..top {
        g.transition(m)?;
    }
    let reduced = g.system.reduced_fixed_points(1).is_some();
    let ceiling = if reduced { DEFAULT_REDUCED_CEILING } else { g.ceiling };
    let levels = Arc::new(FixedLevels {
        base: g.clone(),
        reduced,
        generic: Mutex::new(BTreeMap::new()),
        reduced_memo: Mutex::new(BTreeMap::new()),
    });
    Ok(IndFixedPoints {
        ker_system: IndAbGroup::from_arc(Arc::new(KerSystem(levels.clone())), ceiling),
        coker_system: IndAbGroup::from_arc(Arc::new(CokerSystem(levels)), ceiling),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Stabilization {
    Stable { group: FgAbGroup, from_level: usize },
    NotStabilized { max_level: usize, last: FgAbGroup },
}

impl Stabilization {
    pub fn group(&self) -> Option<&FgAbGroup> {
        match self {
            Stabilization::Stable { group, .. } => Some(group),
            Stabilization::NotStabilized { .. } => None,
        }
    }
}

/// Finds the least `N` such that every transition from level `N` up to
/// `max_level` is an isomorphism. A system that knows it keeps changing past
/// `max_level` is reported as not stabilized, whatever the window shows.
pub fn stabilize(s: &IndAbGroup, max_level: usize) -> Result<Stabilization> {
    let top = s.level(max_level)?;
    if s.system.stable_from().is_some_and(|l| l > max_level) {
        return Ok(Stabilization::NotStabilized { max_level, last: top });
    }
    let mut n = max_level;
    while n > 1 && s.transition(n - 1)?.is_isomorphism()? {
        n -= 1;
    }
    if n == max_level && max_level > 1 {
        return Ok(Stabilization::NotStabilized { max_level, last: top });
    }
    Ok(Stabilization::Stable { group: s.level(n)?, from_level: n })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub level: usize,
    pub class: Vec<Big>,
    pub dies_at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivingClass {
    pub level: usize,
    pub class: Vec<Big>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub certificates: Vec<Certificate>,
    pub surviving: Vec<SurvivingClass>,
    pub searched_to: usize,
}

impl VanishingReport {
    pub fn is_certified(&self) -> bool {
        self.surviving.is_empty()
    }
}

/// For every generator of every level up to `max_level`, searches for a
/// level (up to the system's ceiling) where its image vanishes.
pub fn colim_vanishes(s: &IndAbGroup, max_level: usize) -> Result<VanishingReport> {
    colim_vanishes_after(s, max_level, &PrimeSet::none())
}

/// As [`colim_vanishes`], but a class also counts as dead once its order is
/// invertible after inverting `primes`.
pub fn colim_vanishes_after(s: &IndAbGroup, max_level: usize, primes: &PrimeSet) -> Result<VanishingReport> {
    let searched_to = s.system.last_level().unwrap_or(s.ceiling).min(s.ceiling);
    let dead = |g: &FgAbGroup, v: &[BigInt]| -> bool {
        if g.is_zero_element(v) {
            return true;
        }
        g.element_order(v).is_some_and(|o| primes.makes_unit(&o))
    };
    let mut certificates = Vec::new();
    // Classes still alive: (level of origin, generator, current image).
    let mut active: Vec<(usize, Vec<Big>, Vec<BigInt>)> = Vec::new();
    let mut l = 1;
    loop {
        let g = s.level(l)?;
        if l <= max_level {
            for i in 0..g.generator_count() {
                let mut v = vec![BigInt::zero(); g.generator_count()];
                v[i] = BigInt::one();
                active.push((l, v.iter().cloned().map(Big).collect(), v));
            }
        }
        active.retain(|(level, class, v)| {
            let dead = dead(&g, v);
            if dead {
                certificates.push(Certificate { level: *level, class: class.clone(), dies_at: l });
            }
            !dead
        });
        if l >= searched_to || (active.is_empty() && l >= max_level) {
            break;
        }
        let t = s.transition(l)?;
        for (_, _, v) in active.iter_mut() {
            *v = t.apply(v);
        }
        l += 1;
    }
    certificates.sort_by_key(|c| c.level);
    let surviving = active.into_iter().map(|(level, class, _)| SurvivingClass { level, class }).collect();
    Ok(VanishingReport { certificates, surviving, searched_to })
}
