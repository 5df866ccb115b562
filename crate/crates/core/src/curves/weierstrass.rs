use std::sync::Arc;

use serde::Serialize;

use crate::field::{Elem, FqField};
use crate::{Error, Result};

use super::EllipticCurveSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Infinity,
    Affine(Elem, Elem),
}

/// A Weierstrass curve with coefficients in a tabulated field.
#[derive(Clone, Debug)]
pub struct WeierstrassCurve {
    field: Arc<FqField>,
    a: [Elem; 5],
}

impl WeierstrassCurve {
    pub fn new(field: Arc<FqField>, a: [Elem; 5]) -> Result<Self> {
        let c = WeierstrassCurve { field, a };
        if c.discriminant() == 0 {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// Base change of a curve over `F_p` to the field `F_{p^m}`.
    pub fn over(spec: &EllipticCurveSpec, field: Arc<FqField>) -> Result<Self> {
        if field.p() != spec.p {
            return Err(Error::InvalidArgument(format!("curve over F_{} in characteristic {}", spec.p, field.p())));
        }
        let a = spec.coefficients().map(|c| field.from_int(c as i64));
        Self::new(field, a)
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn coefficients(&self) -> [Elem; 5] {
        self.a
    }

    fn c(&self, n: i64) -> Elem {
        self.field.from_int(n)
    }

    pub fn discriminant(&self) -> Elem {
        let f = &*self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let (add, mul, sub) = (|x, y| f.add(x, y), |x, y| f.mul(x, y), |x, y| f.sub(x, y));
        let b2 = add(mul(a1, a1), mul(self.c(4), a2));
        let b4 = add(mul(self.c(2), a4), mul(a1, a3));
        let b6 = add(mul(a3, a3), mul(self.c(4), a6));
        let b8 = sub(
            add(add(mul(mul(a1, a1), a6), mul(self.c(4), mul(a2, a6))), mul(a2, mul(a3, a3))),
            add(mul(a1, mul(a3, a4)), mul(a4, a4)),
        );
        let t1 = f.neg(mul(mul(b2, b2), b8));
        let t2 = mul(self.c(8), mul(b4, mul(b4, b4)));
        let t3 = mul(self.c(27), mul(b6, b6));
        let t4 = mul(self.c(9), mul(b2, mul(b4, b6)));
        add(sub(sub(t1, t2), t3), t4)
    }

    /// `(a1·x + a3, x³ + a2·x² + a4·x + a6)`: the equation reads `y² + h·y = r`.
    fn h_and_r(&self, x: Elem) -> (Elem, Elem) {
        let f = &*self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let h = f.add(f.mul(a1, x), a3);
        let r = f.add(f.mul(f.add(f.mul(f.add(x, a2), x), a4), x), a6);
        (h, r)
    }

    pub fn contains(&self, pt: Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let f = &*self.field;
                let (h, r) = self.h_and_r(x);
                f.add(f.mul(y, y), f.mul(h, y)) == r
            }
        }
    }

    pub fn neg(&self, pt: Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let f = &*self.field;
                let (h, _) = self.h_and_r(x);
                Point::Affine(x, f.neg(f.add(y, h)))
            }
        }
    }

    pub fn add(&self, p1: Point, p2: Point) -> Point {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Point::Infinity, q) | (q, Point::Infinity) => return q,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let f = &*self.field;
        let [a1, a2, a3, a4, _] = self.a;
        let lambda = if x1 != x2 {
            f.div(f.sub(y2, y1), f.sub(x2, x1)).expect("distinct x")
        } else {
            if p2 == self.neg(p1) {
                return Point::Infinity;
            }
            let num = f.sub(f.add(f.add(f.mul(self.c(3), f.mul(x1, x1)), f.mul(self.c(2), f.mul(a2, x1))), a4), f.mul(a1, y1));
            let den = f.add(f.add(f.mul(self.c(2), y1), f.mul(a1, x1)), a3);
            f.div(num, den).expect("tangent is not vertical")
        };
        let nu = f.sub(y1, f.mul(lambda, x1));
        let x3 = f.sub(f.sub(f.sub(f.add(f.mul(lambda, lambda), f.mul(a1, lambda)), a2), x1), x2);
        let y3 = f.sub(f.sub(f.neg(f.mul(f.add(lambda, a1), x3)), nu), a3);
        Point::Affine(x3, y3)
    }

    pub fn sub(&self, p1: Point, p2: Point) -> Point {
        self.add(p1, self.neg(p2))
    }

    pub fn mul(&self, n: i64, pt: Point) -> Point {
        let mut base = if n < 0 { self.neg(pt) } else { pt };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    /// Coordinate-wise `p^e`-th power.
    pub fn frobenius_power(&self, pt: Point, e: u32) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let f = &*self.field;
                let k = f.p().pow(e);
                Point::Affine(f.pow(x, k), f.pow(y, k))
            }
        }
    }

    /// All points over the coefficient field, sorted, infinity first.
    pub fn points(&self) -> Vec<Point> {
        let f = &*self.field;
        let mut out = vec![Point::Infinity];
        if f.p() == 2 {
            // z² + z = w has a solution iff the table has an entry.
            let mut artin = vec![None; f.order() as usize];
            for z in f.elements() {
                artin[f.add(f.mul(z, z), z) as usize] = Some(z);
            }
            for x in f.elements() {
                let (h, r) = self.h_and_r(x);
                if h == 0 {
                    out.push(Point::Affine(x, f.frobenius_inv(r)));
                } else if let Some(z) = artin[f.div(r, f.mul(h, h)).unwrap() as usize] {
                    out.push(Point::Affine(x, f.mul(h, z)));
                    out.push(Point::Affine(x, f.mul(h, f.add(z, 1))));
                }
            }
        } else {
            let mut sqrt = vec![None; f.order() as usize];
            for y in f.elements() {
                sqrt[f.mul(y, y) as usize] = Some(y);
            }
            let half = f.inv(self.c(2)).unwrap();
            for x in f.elements() {
                let (h, r) = self.h_and_r(x);
                // (2y + h)² = 4r + h²
                let d = f.add(f.mul(self.c(4), r), f.mul(h, h));
                if let Some(s) = sqrt[d as usize] {
                    out.push(Point::Affine(x, f.mul(f.sub(s, h), half)));
                    if s != 0 {
                        out.push(Point::Affine(x, f.mul(f.sub(f.neg(s), h), half)));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Image of a point under a field embedding of the coordinates.
    pub fn map_point(pt: Point, map: impl Fn(Elem) -> Elem) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(map(x), map(y)),
        }
    }
}
