use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::abgroup::{FgAbGroup, GroupHom, IntMatrix, PrimeSet};
use crate::arith::{factorial_tower_size, gcd, pow, prime_factors, require_prime};
use crate::indgroup::{colim_vanishes, colim_vanishes_after, ind_fixed_points, IndAbGroup, LevelSystem, VanishingReport};
use crate::{Error, Result};

/// `Z[S] ⊗ colim F_{p^{m!}}^×` with endomorphism `σ ⊗ (x ↦ x^p)`.
#[derive(Debug)]
struct PermTwisted {
    p: u64,
    sigma: Vec<usize>,
}

impl PermTwisted {
    fn order(&self, m: usize) -> BigInt {
        factorial_tower_size(self.p, m) - 1
    }

    fn group_of(&self, m: usize) -> FgAbGroup {
        let n = self.order(m);
        if n.is_one() {
            return FgAbGroup::trivial();
        }
        FgAbGroup::new(0, vec![n; self.sigma.len()]).expect("equal factors form a chain")
    }
}

impl LevelSystem for PermTwisted {
    fn tower(&self) -> &str {
        "factorial"
    }

    fn prime(&self) -> Option<u64> {
        Some(self.p)
    }

    fn group(&self, m: usize) -> Result<FgAbGroup> {
        Ok(self.group_of(m))
    }

    fn transition(&self, m: usize) -> Result<GroupHom> {
        let (a, b) = (self.group_of(m), self.group_of(m + 1));
        let t = self.order(m + 1) / self.order(m);
        let mat = if a.is_trivial() || b.is_trivial() {
            IntMatrix::zeros(b.generator_count(), a.generator_count())
        } else {
            IntMatrix::scalar(self.sigma.len(), &t)
        };
        GroupHom::between(&a, &b, mat)
    }

    fn endo(&self, m: usize) -> Result<Option<GroupHom>> {
        let g = self.group_of(m);
        let s = g.generator_count();
        let mut mat = IntMatrix::zeros(s, s);
        if s > 0 {
            for (i, &j) in self.sigma.iter().enumerate() {
                mat[(j, i)] = BigInt::from(self.p);
            }
        }
        Ok(Some(GroupHom::between(&g, &g, mat)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedLevel {
    pub level: usize,
    pub kernel: FgAbGroup,
    pub cokernel: FgAbGroup,
    /// `⊕ Z/gcd(p^{m!} − 1, p^ℓ − 1)` over the cycles of `σ`, `ℓ` the cycle length.
    pub predicted_kernel: FgAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermTwistedReport {
    pub p: u64,
    pub sigma: Vec<usize>,
    pub max_level: usize,
    pub levels: Vec<TwistedLevel>,
    pub cycle_lengths: Vec<usize>,
    pub kernels_torsion: bool,
    pub kernels_match_cycles: bool,
    /// Primes dividing some cokernel order; inverting them kills every class.
    pub inverted_primes: Vec<u64>,
    pub localized: VanishingReport,
    /// The same search without inverting anything.
    pub integral: VanishingReport,
    pub passed: bool,
}

pub fn cycle_lengths(sigma: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; sigma.len()];
    let mut out = vec![];
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let (mut i, mut len) = (start, 0);
        while !seen[i] {
            seen[i] = true;
            i = sigma[i];
            len += 1;
        }
        out.push(len);
    }
    out
}

/// Fixed points of `σ·p` on `(Z/(p^{m!} − 1))^{|S|}` along the factorial tower.
pub fn perm_twisted_fixed_points(sigma: &[usize], p: u64, max_level: usize) -> Result<PermTwistedReport> {
    require_prime(p)?;
    let s = sigma.len();
    if s == 0 || sigma.iter().collect::<BTreeSet<_>>().len() != s || sigma.iter().any(|&j| j >= s) {
        return Err(Error::InvalidArgument("sigma must be a permutation of 0..n".into()));
    }
    if max_level == 0 || max_level > crate::indgroup::DEFAULT_CEILING {
        return Err(Error::LevelCeiling { level: max_level, ceiling: crate::indgroup::DEFAULT_CEILING });
    }
    let system = PermTwisted { p, sigma: sigma.to_vec() };
    let ind = IndAbGroup::new(system);
    let fp = ind_fixed_points(&ind)?;
    let cycles = cycle_lengths(sigma);
    let mut levels = vec![];
    let mut primes = BTreeSet::new();
    for m in 1..=max_level {
        let kernel = fp.ker_system.level(m)?;
        let cokernel = fp.coker_system.level(m)?;
        let n = factorial_tower_size(p, m) - 1;
        let orders: Vec<BigInt> = cycles.iter().map(|&l| gcd(&n, &(pow(p, l as u64) - 1))).collect();
        for d in cokernel.invariant_factors() {
            let d: u64 = d.try_into().map_err(|_| Error::Unsupported("cokernel factor beyond 64 bits".into()))?;
            primes.extend(prime_factors(d));
        }
        levels.push(TwistedLevel { level: m, kernel, cokernel, predicted_kernel: FgAbGroup::from_orders(0, &orders) });
    }
    let kernels_torsion = levels.iter().all(|l| l.kernel.is_finite() && l.cokernel.is_finite());
    let kernels_match_cycles = levels.iter().all(|l| l.kernel == l.predicted_kernel);
    let inverted = PrimeSet::Finite(primes.clone());
    let localized = colim_vanishes_after(&fp.coker_system, max_level, &inverted)?;
    let integral = colim_vanishes(&fp.coker_system, max_level)?;
    let passed = kernels_torsion && kernels_match_cycles && localized.is_certified();
    Ok(PermTwistedReport {
        p,
        sigma: sigma.to_vec(),
        max_level,
        levels,
        cycle_lengths: cycles,
        kernels_torsion,
        kernels_match_cycles,
        inverted_primes: primes.into_iter().collect(),
        localized,
        integral,
        passed,
    })
}
