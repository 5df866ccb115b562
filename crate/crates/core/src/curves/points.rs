use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::abgroup::{FgAbGroup, GroupHom, IntMatrix};
use crate::arith::{isqrt, prime_factors};
use crate::field::FqField;
use crate::{Error, Result};

use super::{EllipticCurveSpec, Point, WeierstrassCurve};

/// `E(F_{p^k})` with its group structure `Z/n2 ⊕ Z/n1`, `n2 | n1`.
#[derive(Clone, Debug)]
pub struct PointGroup {
    spec: EllipticCurveSpec,
    level: u32,
    curve: WeierstrassCurve,
    points: Vec<Point>,
    group: FgAbGroup,
    /// Canonical generators of `group`, in order.
    basis: Vec<Point>,
    coords: HashMap<Point, Vec<u64>>,
}

/// Order of `pt` in a group of order `n`.
fn point_order(c: &WeierstrassCurve, pt: Point, n: u64) -> u64 {
    let mut o = n;
    for l in prime_factors(n) {
        while o % l == 0 && c.mul((o / l) as i64, pt) == Point::Infinity {
            o /= l;
        }
    }
    o
}

/// Least `k | n` with `k·pt` in `h`.
fn relative_order(c: &WeierstrassCurve, pt: Point, n: u64, h: &HashMap<Point, u64>) -> u64 {
    let mut o = n;
    for l in prime_factors(n) {
        while o % l == 0 && h.contains_key(&c.mul((o / l) as i64, pt)) {
            o /= l;
        }
    }
    o
}

impl PointGroup {
    /// Enumerates `E(F_{p^k})` and computes its structure.
    pub fn new(spec: &EllipticCurveSpec, k: u32) -> Result<Self> {
        Self::with_ceiling(spec, k, crate::field::DEFAULT_FIELD_CEILING)
    }

    pub fn with_ceiling(spec: &EllipticCurveSpec, k: u32, ceiling: u64) -> Result<Self> {
        spec.validate()?;
        let field = Arc::new(FqField::with_ceiling(spec.p, k, ceiling)?);
        let curve = WeierstrassCurve::over(spec, field)?;
        Self::from_curve(spec.clone(), k, curve)
    }

    pub(crate) fn from_curve(spec: EllipticCurveSpec, level: u32, curve: WeierstrassCurve) -> Result<Self> {
        let points = curve.points();
        let n = points.len() as u64;
        // A point of maximal order generates the first factor.
        let (mut p1, mut n1) = (Point::Infinity, 1);
        for &pt in &points {
            if n1 == n {
                break;
            }
            let o = point_order(&curve, pt, n);
            if o > n1 {
                (p1, n1) = (pt, o);
            }
        }
        let mut h: HashMap<Point, u64> = HashMap::new();
        let mut acc = Point::Infinity;
        for i in 0..n1 {
            h.insert(acc, i);
            acc = curve.add(acc, p1);
        }
        let n2 = n / n1;
        let mut basis_full = vec![(p1, n1)];
        if n2 > 1 {
            let q = points
                .iter()
                .copied()
                .find(|&q| !h.contains_key(&q) && relative_order(&curve, q, n2, &h) == n2)
                .ok_or_else(|| Error::InvalidGroup("point group is not of the form Z/n2 + Z/n1".into()))?;
            let a = h[&curve.mul(n2 as i64, q)];
            if a % n2 != 0 {
                return Err(Error::InvalidGroup("inconsistent point group structure".into()));
            }
            let p2 = curve.sub(q, curve.mul((a / n2) as i64, p1));
            basis_full.insert(0, (p2, n2));
        }
        let basis_full: Vec<(Point, u64)> = basis_full.into_iter().filter(|(_, o)| *o > 1).collect();
        let group = FgAbGroup::new(0, basis_full.iter().map(|(_, o)| BigInt::from(*o)).collect())?;
        let mut coords = HashMap::with_capacity(points.len());
        let mut stack = vec![(Point::Infinity, vec![])];
        for &(b, o) in &basis_full {
            let mut next = Vec::with_capacity(stack.len() * o as usize);
            for (pt, c) in stack {
                let mut cur = pt;
                for i in 0..o {
                    let mut cc: Vec<u64> = c.clone();
                    cc.push(i);
                    next.push((cur, cc));
                    cur = curve.add(cur, b);
                }
            }
            stack = next;
        }
        for (pt, c) in stack {
            coords.insert(pt, c);
        }
        if coords.len() != points.len() {
            return Err(Error::InvalidGroup("basis does not generate the point group".into()));
        }
        let basis = basis_full.into_iter().map(|(b, _)| b).collect();
        Ok(PointGroup { spec, level, curve, points, group, basis, coords })
    }

    pub fn spec(&self) -> &EllipticCurveSpec {
        &self.spec
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn field(&self) -> &Arc<FqField> {
        self.curve.field()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    /// Coordinates of a point on the canonical generators.
    pub fn coords(&self, pt: Point) -> Option<Vec<BigInt>> {
        self.coords.get(&pt).map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn point_of(&self, v: &[BigInt]) -> Point {
        self.basis.iter().zip(v).fold(Point::Infinity, |acc, (&b, c)| {
            let c = c.mod_floor(&BigInt::from(self.points.len() as u64));
            let c: i64 = c.try_into().expect("coefficient below the group order");
            self.curve.add(acc, self.curve.mul(c, b))
        })
    }

    pub fn add(&self, a: Point, b: Point) -> Point {
        self.curve.add(a, b)
    }

    pub fn mul(&self, n: i64, pt: Point) -> Point {
        self.curve.mul(n, pt)
    }

    /// `(x, y) ↦ (x^p, y^p)`.
    pub fn frobenius(&self, pt: Point) -> Point {
        self.curve.frobenius_power(pt, 1)
    }

    pub fn frobenius_inv(&self, pt: Point) -> Point {
        self.curve.frobenius_power(pt, self.level - 1)
    }

    /// `V = [p] ∘ φ⁻¹`.
    pub fn verschiebung(&self, pt: Point) -> Point {
        self.mul(self.spec.p as i64, self.frobenius_inv(pt))
    }

    /// The matrix of a point map on the canonical generators, checked to be a
    /// homomorphism on every point.
    pub fn hom_of(&self, map: impl Fn(Point) -> Point) -> Result<GroupHom> {
        let n = self.basis.len();
        let mut m = IntMatrix::zeros(n, n);
        for (j, &b) in self.basis.iter().enumerate() {
            let c = self.coords(map(b)).ok_or_else(|| Error::InvalidHom("image is not a point of the group".into()))?;
            for (i, x) in c.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        let h = GroupHom::between(&self.group, &self.group, m)?;
        for &pt in &self.points {
            let expected = self.point_of(&h.apply(&self.coords(pt).unwrap()));
            if map(pt) != expected {
                return Err(Error::InvalidHom(format!("point map is not additive at {pt:?}")));
            }
        }
        Ok(h)
    }

    pub fn frobenius_hom(&self) -> Result<GroupHom> {
        self.hom_of(|pt| self.frobenius(pt))
    }

    pub fn verschiebung_hom(&self) -> Result<GroupHom> {
        self.hom_of(|pt| self.verschiebung(pt))
    }

    /// Points with coordinates in the prime field.
    pub fn prime_field_points(&self) -> Vec<Point> {
        let f = self.field();
        self.points
            .iter()
            .copied()
            .filter(|pt| match *pt {
                Point::Infinity => true,
                Point::Affine(x, y) => f.in_prime_field(x) && f.in_prime_field(y),
            })
            .collect()
    }

    /// `|{P : s·P + r·V(P) = 0}|`.
    pub fn kernel_count(&self, r: i64, s: i64) -> usize {
        self.points
            .iter()
            .filter(|&&pt| self.add(self.mul(s, pt), self.mul(r, self.verschiebung(pt))) == Point::Infinity)
            .count()
    }

    pub fn hasse_bound_holds(&self) -> bool {
        hasse_interval(self.field().order()).contains(&(self.points.len() as u64))
    }

    pub fn summary(&self) -> PointGroupSummary {
        PointGroupSummary {
            curve: self.spec.label(),
            level: self.level,
            order: self.points.len(),
            structure: self.group.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointGroupSummary {
    pub curve: String,
    pub level: u32,
    pub order: usize,
    pub structure: FgAbGroup,
}

/// `[q + 1 − 2√q, q + 1 + 2√q]`, rounded outward to integers.
pub fn hasse_interval(q: u64) -> std::ops::RangeInclusive<u64> {
    // 2√q ≤ t ⇔ 4q ≤ t²
    let mut t = 2 * isqrt(q);
    while t * t < 4 * q {
        t += 1;
    }
    (q + 1).saturating_sub(t)..=q + 1 + t
}

pub fn point_group(e: &EllipticCurveSpec, k: u32) -> Result<PointGroup> {
    PointGroup::new(e, k)
}
