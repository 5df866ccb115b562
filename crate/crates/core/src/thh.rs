//! Frobenius fixed points on truncated Hochschild homology of affine space.
//!
//! `THH_n(A^d × Spec F_q) = ⊕_{i ≥ 0} Ω^{n−2i} ⊗ F_q` by HKR. The partial
//! Frobenius is the identity on monomial forms and `x ↦ x^p` on the
//! coefficients, so its fixed points are governed by Artin–Schreier theory.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::abgroup::{FgAbGroup, LocalizedGroup};
use crate::arith::{factorial, is_prime};
use crate::field::{Elem, FqField};
use crate::fixpoint::FixedPointPair;
use crate::{Error, Result};

/// Splits `q = p^m`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    if r != 1 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
    }
    Ok((p, m))
}

/// `Ω^j` of `F_p[x_1..x_d]` truncated to coefficients of total degree `≤ bound`,
/// tensored with `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedOmega {
    pub d: usize,
    pub j: usize,
    pub bound: u32,
    pub q: u64,
    /// Exponent vectors, graded by total degree.
    pub monomials: Vec<Vec<u32>>,
    /// Increasing index sets `i_1 < … < i_j` for `dx_{i_1} ∧ … ∧ dx_{i_j}`.
    pub wedges: Vec<Vec<usize>>,
}

fn monomials(d: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![];
    for deg in 0..=bound {
        let mut cur = vec![0; d];
        fill(&mut cur, 0, deg, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if i + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = left;
            out.push(cur.clone());
        } else if left == 0 {
            out.push(vec![]);
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        fill(cur, i + 1, left - k, out);
    }
}

fn subsets(d: usize, j: usize) -> Vec<Vec<usize>> {
    if j > d {
        return vec![];
    }
    if j == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for first in 0..d {
        for mut rest in subsets(d - first - 1, j - 1) {
            rest.iter_mut().for_each(|x| *x += first + 1);
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl TruncatedOmega {
    pub fn dim(&self) -> usize {
        self.monomials.len() * self.wedges.len()
    }

    /// Total monomial degree of each basis element, wedge index fastest.
    pub fn basis_degrees(&self) -> Vec<u32> {
        self.monomials.iter().flat_map(|m| std::iter::repeat_n(m.iter().sum(), self.wedges.len())).collect()
    }

    /// Human-readable basis element, e.g. `x0^2 x1 dx0^dx1`.
    pub fn basis_label(&self, k: usize) -> String {
        let (mono, wedge) = (&self.monomials[k / self.wedges.len()], &self.wedges[k % self.wedges.len()]);
        let mut parts: Vec<String> = mono
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if !wedge.is_empty() {
            parts.push(wedge.iter().map(|i| format!("dx{i}")).collect::<Vec<_>>().join("^"));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

pub fn omega(d: usize, j: usize, bound: u32, q: u64) -> Result<TruncatedOmega> {
    prime_power(q)?;
    let wedges = subsets(d, j);
    let monomials = if wedges.is_empty() { vec![] } else { monomials(d, bound) };
    Ok(TruncatedOmega { d, j, bound, q, monomials, wedges })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkrSummand {
    pub i: usize,
    pub omega: TruncatedOmega,
}

/// `⊕_{i ≥ 0, n − 2i ≥ 0} Ω^{n−2i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkrModule {
    pub d: usize,
    pub n: usize,
    pub bound: u32,
    pub q: u64,
    pub summands: Vec<HkrSummand>,
}

impl HkrModule {
    /// Dimension over `F_q`.
    pub fn dim(&self) -> usize {
        self.summands.iter().map(|s| s.omega.dim()).sum()
    }

    pub fn basis_degrees(&self) -> Vec<u32> {
        self.summands.iter().flat_map(|s| s.omega.basis_degrees()).collect()
    }
}

pub fn hkr_thh(d: usize, n: usize, bound: u32, q: u64) -> Result<HkrModule> {
    let summands = (0..=n / 2).map(|i| Ok(HkrSummand { i, omega: omega(d, n - 2 * i, bound, q)? })).collect::<Result<_>>()?;
    Ok(HkrModule { d, n, bound, q, summands })
}

/// The coefficient Frobenius on `F_q^dim`, graded by monomial degree.
#[derive(Clone, Debug)]
pub struct SemilinearFrobenius {
    pub field: Arc<FqField>,
    pub degrees: Vec<u32>,
}

impl SemilinearFrobenius {
    pub fn new(field: Arc<FqField>, degrees: Vec<u32>) -> Self {
        SemilinearFrobenius { field, degrees }
    }

    pub fn on_hkr(m: &HkrModule) -> Result<Self> {
        let (p, e) = prime_power(m.q)?;
        Ok(Self::new(Arc::new(FqField::new(p, e)?), m.basis_degrees()))
    }

    pub fn on_omega(m: &TruncatedOmega) -> Result<Self> {
        let (p, e) = prime_power(m.q)?;
        Ok(Self::new(Arc::new(FqField::new(p, e)?), m.basis_degrees()))
    }

    pub fn dim_fq(&self) -> usize {
        self.degrees.len()
    }

    pub fn dim_fp(&self) -> usize {
        self.degrees.len() * self.field.degree() as usize
    }

    /// `1 − σ` as a dense `F_p`-matrix on coordinates `(line, power of α)`.
    pub fn one_minus_sigma(&self) -> Vec<Vec<u64>> {
        let f = &*self.field;
        let (m, p) = (f.degree() as usize, f.p());
        let n = self.dim_fp();
        let mut a = vec![vec![0; n]; n];
        let powers: Vec<Vec<u64>> = (0..m)
            .map(|k| {
                let basis = f.from_coefficients(&unit(m, k));
                f.coefficients(f.frobenius(basis))
            })
            .collect();
        for line in 0..self.dim_fq() {
            for k in 0..m {
                let col = line * m + k;
                a[col][col] = 1;
                for (r, &c) in powers[k].iter().enumerate() {
                    let row = line * m + r;
                    a[row][col] = (a[row][col] + p - c) % p;
                }
            }
        }
        a
    }
}

fn unit(m: usize, k: usize) -> Vec<u64> {
    let mut v = vec![0; m];
    v[k] = 1;
    v
}

/// Row-reduced spanning set over `F_p` for incremental membership tests.
struct Span {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Span {
    fn new(p: u64) -> Self {
        Span { p, rows: vec![] }
    }

    /// Adds `v`; returns whether it was independent.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + p * p - c * y % p) % p;
                }
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(v[piv], p);
        v.iter_mut().for_each(|x| *x = *x * inv % p);
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = (*x + p * p - c * y % p) % p;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

/// Kernel and cokernel dimensions of `1 − σ` over `F_p`, with a basis of a
/// complement of the image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArtinSchreierFixed {
    pub p: u64,
    pub field_degree: u32,
    pub dim_fq: usize,
    pub ker_dim: usize,
    pub coker_dim: usize,
    pub ker_by_degree: BTreeMap<u32, usize>,
    /// Whether `1 − σ` has no entries between different monomial degrees.
    pub grading_preserved: bool,
    #[serde(skip)]
    pub coker_basis: Vec<Vec<u64>>,
}

impl ArtinSchreierFixed {
    /// As groups: `(Z/p)^ker_dim` and `(Z/p)^coker_dim`.
    pub fn as_pair(&self) -> FixedPointPair {
        let v = |k: usize| LocalizedGroup::from(FgAbGroup::from_orders(0, &vec![BigInt::from(self.p); k]));
        FixedPointPair { h0: v(self.ker_dim), h1: v(self.coker_dim), inclusion: None, projection: None }
    }
}

pub fn artin_schreier_fixed(s: &SemilinearFrobenius) -> Result<ArtinSchreierFixed> {
    let f = &*s.field;
    let (p, m) = (f.p(), f.degree() as usize);
    let a = s.one_minus_sigma();
    let n = a.len();
    let coord_degree = |i: usize| s.degrees[i / m];
    let grading_preserved = (0..n).all(|r| (0..n).all(|c| a[r][c] == 0 || coord_degree(r) == coord_degree(c)));
    if !grading_preserved {
        return Err(Error::InvalidArgument("the Frobenius does not preserve the monomial grading".into()));
    }
    let mut blocks: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        blocks.entry(coord_degree(i)).or_default().push(i);
    }
    let mut ker_by_degree = BTreeMap::new();
    let mut coker_basis = vec![];
    let (mut ker_dim, mut coker_dim) = (0, 0);
    for (deg, idx) in &blocks {
        let mut span = Span::new(p);
        let mut rank = 0;
        for &c in idx {
            let col: Vec<u64> = idx.iter().map(|&r| a[r][c]).collect();
            rank += span.insert(col) as usize;
        }
        for (k, &i) in idx.iter().enumerate() {
            if span.insert(unit(idx.len(), k)) {
                coker_basis.push(unit(n, i));
            }
        }
        *ker_by_degree.entry(*deg).or_default() += idx.len() - rank;
        ker_dim += idx.len() - rank;
        coker_dim += idx.len() - rank;
    }
    Ok(ArtinSchreierFixed {
        p,
        field_degree: m as u32,
        dim_fq: s.dim_fq(),
        ker_dim,
        coker_dim,
        ker_by_degree,
        grading_preserved,
        coker_basis,
    })
}

/// `K = F_q[u]/(u^p − u − c)` with `Tr(c) ≠ 0`, a degree-`p` extension.
pub struct ArtinSchreierExtension {
    field: Arc<FqField>,
    c: Elem,
    /// `z − z^p ↦ z` for trace-zero targets.
    preimage: Vec<Option<Elem>>,
}

impl ArtinSchreierExtension {
    pub fn new(field: Arc<FqField>) -> Result<Self> {
        let f = &*field;
        let c = f.elements().find(|&c| f.trace(c) != 0).ok_or_else(|| Error::InvalidArgument("no element of nonzero trace".into()))?;
        let mut preimage = vec![None; f.order() as usize];
        for z in f.elements() {
            preimage[f.sub(z, f.frobenius(z)) as usize].get_or_insert(z);
        }
        Ok(ArtinSchreierExtension { field, c, preimage })
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &*self.field;
        let p = f.p() as usize;
        let mut out = vec![0; 2 * p - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        // u^{p+t} = u^{t+1} + c·u^t
        for k in (p..out.len()).rev() {
            let x = out[k];
            out[k] = 0;
            let t = k - p;
            out[t + 1] = f.add(out[t + 1], x);
            out[t] = f.add(out[t], f.mul(self.c, x));
        }
        out.truncate(p);
        out
    }

    pub fn frobenius(&self, a: &[Elem]) -> Vec<Elem> {
        let p = self.field.p();
        let mut acc = a.to_vec();
        for _ in 1..p {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// `w` with `w − w^p = a`.
    pub fn solve(&self, a: Elem) -> Vec<Elem> {
        let f = &*self.field;
        let p = f.p();
        let lambda = f.trace(a) * inv_mod(f.trace(self.c), p) % p;
        let shifted = f.sub(a, f.mul(f.from_int(lambda as i64), self.c));
        let z = self.preimage[shifted as usize].expect("trace-zero elements are in the image");
        let mut w = vec![0; p as usize];
        w[0] = z;
        w[1] = f.neg(f.from_int(lambda as i64));
        w
    }

    pub fn check(&self, w: &[Elem], a: Elem) -> bool {
        let f = &*self.field;
        let wp = self.frobenius(w);
        let d: Vec<Elem> = w.iter().zip(&wp).map(|(&x, &y)| f.sub(x, y)).collect();
        d[0] == a && d[1..].iter().all(|&x| x == 0)
    }
}

/// The least factorial level `l' ≥ l` with `F_{q^p} ⊆ F_{p^{l'!}}`, `q = p^{l!}`.
pub fn extension_level(level: usize, p: u64) -> usize {
    let need = factorial(level as u64) * p;
    (level..).find(|&l| (factorial(l as u64) % &need) == BigInt::from(0)).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThhLevel {
    pub level: usize,
    pub field_degree: u32,
    pub ker_dim: usize,
    pub coker_dim: usize,
    pub certified: usize,
    pub dies_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThhReport {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "D")]
    pub bound: u32,
    pub p: u64,
    pub levels: Vec<usize>,
    pub expected_dim: usize,
    pub ker_dim: Option<usize>,
    pub coker_certified: bool,
    pub per_level: Vec<ThhLevel>,
    pub passed: bool,
}

/// Artin–Schreier fixed points of `THH_n(A^d × Spec F_{p^{l!}})` for each
/// factorial level `l`, compared with the base `THH_n(A^d)`.
pub fn frobenius_thh_rigidity(d: usize, n: usize, bound: u32, p: u64, levels: &[usize]) -> Result<ThhReport> {
    crate::arith::require_prime(p)?;
    let expected_dim = hkr_thh(d, n, bound, p)?.dim();
    let mut per_level = vec![];
    for &l in levels {
        let e = factorial(l as u64);
        let e: u32 = e.try_into().map_err(|_| Error::LevelCeiling { level: l, ceiling: 0 })?;
        let field = Arc::new(FqField::new(p, e)?);
        let module = hkr_thh(d, n, bound, field.order())?;
        let s = SemilinearFrobenius::new(field.clone(), module.basis_degrees());
        let fixed = artin_schreier_fixed(&s)?;
        let ext = ArtinSchreierExtension::new(field.clone())?;
        let m = e as usize;
        let mut certified = 0;
        let mut needs_extension = false;
        for v in &fixed.coker_basis {
            let ok = v.chunks(m).all(|chunk| {
                let a = field.from_coefficients(chunk);
                let w = ext.solve(a);
                needs_extension |= w[1] != 0;
                ext.check(&w, a)
            });
            certified += ok as usize;
        }
        let all = certified == fixed.coker_basis.len();
        let dies_at = all.then(|| if needs_extension { extension_level(l, p) } else { l });
        per_level.push(ThhLevel { level: l, field_degree: e, ker_dim: fixed.ker_dim, coker_dim: fixed.coker_dim, certified, dies_at });
    }
    let ker_dim = per_level.first().map(|l| l.ker_dim).filter(|&k| per_level.iter().all(|l| l.ker_dim == k));
    let coker_certified = per_level.iter().all(|l| l.dies_at.is_some());
    Ok(ThhReport {
        d,
        n,
        bound,
        p,
        levels: levels.to_vec(),
        expected_dim,
        ker_dim,
        coker_certified,
        passed: ker_dim == Some(expected_dim) && coker_certified,
        per_level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_dimensions() {
        assert_eq!(omega(1, 0, 3, 5).unwrap().dim(), 4);
        assert_eq!(omega(2, 1, 1, 5).unwrap().dim(), 6);
        assert_eq!(omega(1, 2, 3, 5).unwrap().dim(), 0);
        assert_eq!(omega(3, 2, 2, 4).unwrap().dim(), 3 * 10);
        assert!(omega(1, 0, 3, 6).is_err());
        assert_eq!(omega(2, 1, 1, 3).unwrap().basis_label(5), "x1 dx1");
    }

    #[test]
    fn hkr_summands() {
        let h = hkr_thh(1, 0, 3, 3).unwrap();
        assert_eq!(h.summands.len(), 1);
        let h = hkr_thh(1, 2, 3, 3).unwrap();
        assert_eq!((h.summands[0].omega.dim(), h.summands[1].omega.dim()), (0, 4));
        let h = hkr_thh(2, 3, 2, 3).unwrap();
        assert_eq!(h.dim(), 2 * 6);
    }

    #[test]
    fn artin_schreier_small_cases() {
        let f = Arc::new(FqField::new(5, 1).unwrap());
        let r = artin_schreier_fixed(&SemilinearFrobenius::new(f, vec![0])).unwrap();
        assert_eq!((r.ker_dim, r.coker_dim), (1, 1));
        let f = Arc::new(FqField::new(3, 2).unwrap());
        let r = artin_schreier_fixed(&SemilinearFrobenius::new(f, vec![0])).unwrap();
        assert_eq!((r.ker_dim, r.coker_dim), (1, 1));
    }

    #[test]
    fn witnesses_solve_the_equation() {
        for (p, e) in [(2, 2), (3, 2), (5, 2), (2, 6)] {
            let f = Arc::new(FqField::new(p, e).unwrap());
            let ext = ArtinSchreierExtension::new(f.clone()).unwrap();
            for a in f.elements() {
                assert!(ext.check(&ext.solve(a), a));
            }
        }
        assert_eq!(extension_level(1, 3), 3);
        assert_eq!(extension_level(3, 3), 6);
        assert_eq!(extension_level(2, 2), 4);
    }

    #[test]
    fn rigidity_examples() {
        let r = frobenius_thh_rigidity(1, 1, 5, 3, &[1, 2, 3]).unwrap();
        assert_eq!(r.ker_dim, Some(6));
        assert!(r.passed);
        let r = frobenius_thh_rigidity(1, 4, 3, 2, &[1, 3]).unwrap();
        assert_eq!(r.expected_dim, 4);
        assert!(r.passed);
    }

    #[test]
    fn truncation_is_compatible() {
        let f = Arc::new(FqField::new(3, 2).unwrap());
        let small = artin_schreier_fixed(&SemilinearFrobenius::new(f.clone(), hkr_thh(2, 1, 2, 9).unwrap().basis_degrees())).unwrap();
        let big = artin_schreier_fixed(&SemilinearFrobenius::new(f, hkr_thh(2, 1, 4, 9).unwrap().basis_degrees())).unwrap();
        for (deg, k) in &small.ker_by_degree {
            assert_eq!(big.ker_by_degree[deg], *k);
        }
    }

    #[test]
    fn report_json_shape() {
        let r = frobenius_thh_rigidity(1, 0, 2, 2, &[1, 2]).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for k in ["d", "n", "D", "levels", "ker_dim", "coker_certified"] {
            assert!(v.get(k).is_some(), "{k}");
        }
    }
}
