use std::sync::Arc;

use serde::Serialize;

use crate::field::{Elem, FqField};
use crate::{Error, Result};

use super::{EllipticCurveSpec, Point, PointGroup, WeierstrassCurve};

/// `a = p + 1 − |E(F_p)|`.
pub fn trace_of_frobenius(e: &EllipticCurveSpec) -> Result<i64> {
    let n = PointGroup::new(e, 1)?.len() as i64;
    Ok(e.p as i64 + 1 - n)
}

/// `|E(F_{p^k})| = p^k + 1 − (α^k + β^k)` with `α + β = a`, `αβ = p`.
pub fn point_count_from_trace(a: i64, p: u64, k: u32) -> i128 {
    let (p, a) = (p as i128, a as i128);
    let (mut s0, mut s1) = (2i128, a);
    for _ in 1..k {
        (s0, s1) = (s1, a * s1 - p * s0);
    }
    let s = if k == 0 { s0 } else { s1 };
    p.pow(k) + 1 - s
}

/// `deg(s + r·V) = s² + a·r·s + p·r²`.
pub fn isogeny_degree_form(e: &EllipticCurveSpec, r: i64, s: i64) -> Result<i128> {
    if r == 0 && s == 0 {
        return Err(Error::InvalidArgument("(r, s) must be nonzero".into()));
    }
    Ok(degree_form(trace_of_frobenius(e)?, e.p, r, s))
}

pub fn degree_form(a: i64, q: u64, r: i64, s: i64) -> i128 {
    let (a, q, r, s) = (a as i128, q as i128, r as i128, s as i128);
    s * s + a * r * s + q * r * r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub level: u32,
    pub points: usize,
    pub count_from_trace: i128,
    pub hasse: bool,
    pub frobenius_automorphism: bool,
    pub fixed_set_is_prime_field_points: bool,
    pub v_after_frobenius_is_p: bool,
    pub frobenius_after_v_is_p: bool,
    pub ker_v: usize,
    /// `|ker(p − V)|` on this level.
    pub ker_p_minus_v: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerschiebungReport {
    pub curve: String,
    pub p: u64,
    pub trace: i64,
    pub levels: Vec<LevelCheck>,
    /// Whether `s² + a·r·s + p·r² > 0` on the whole box `[−b, b]²∖0`.
    pub form_positive: bool,
    pub form_box: i64,
    /// `deg(p − V)` from the form and `p·|E(F_p)|`.
    pub deg_p_minus_v: i128,
    pub p_times_points: i128,
    /// Levels where `ker(p − V)` is fully rational, i.e. its count equals the degree.
    pub rational_levels: Vec<u32>,
    /// Every `|ker(s + rV)|` divides the form value on the sampled box.
    pub kernel_counts_divide_form: bool,
    pub passed: bool,
}

/// Runs the Verschiebung identities on `E(F_{p^k})` for `k` in `levels`.
pub fn verschiebung_checks(e: &EllipticCurveSpec, levels: &[u32], form_box: i64) -> Result<VerschiebungReport> {
    let p = e.p;
    let trace = trace_of_frobenius(e)?;
    let mut out = Vec::new();
    let mut divides = true;
    let deg_p_minus_v = degree_form(trace, p, -1, p as i64);
    let base_points = point_count_from_trace(trace, p, 1);
    let mut rational_levels = Vec::new();
    for &k in levels {
        let g = PointGroup::new(e, k)?;
        let frob_ok = g.frobenius_hom().is_ok_and(|h| h.is_isomorphism().unwrap_or(false));
        let mut fixed: Vec<Point> = g.points().iter().copied().filter(|&pt| g.frobenius(pt) == pt).collect();
        fixed.sort();
        let vf = g.points().iter().all(|&pt| g.verschiebung(g.frobenius(pt)) == g.mul(p as i64, pt));
        let fv = g.points().iter().all(|&pt| g.frobenius(g.verschiebung(pt)) == g.mul(p as i64, pt));
        let ker_v = g.kernel_count(1, 0);
        let ker_pv = g.kernel_count(-1, p as i64);
        if ker_pv as i128 == deg_p_minus_v {
            rational_levels.push(k);
        }
        divides &= deg_p_minus_v % ker_pv as i128 == 0 && ker_pv as i128 % base_points == 0;
        for r in -2..=2i64 {
            for s in -2..=2i64 {
                if (r, s) != (0, 0) {
                    let d = degree_form(trace, p, r, s);
                    divides &= d % g.kernel_count(r, s) as i128 == 0;
                }
            }
        }
        out.push(LevelCheck {
            level: k,
            points: g.len(),
            count_from_trace: point_count_from_trace(trace, p, k),
            hasse: g.hasse_bound_holds(),
            frobenius_automorphism: frob_ok,
            fixed_set_is_prime_field_points: fixed == g.prime_field_points(),
            v_after_frobenius_is_p: vf,
            frobenius_after_v_is_p: fv,
            ker_v,
            ker_p_minus_v: ker_pv,
        });
    }
    let form_positive = (-form_box..=form_box)
        .flat_map(|r| (-form_box..=form_box).map(move |s| (r, s)))
        .filter(|&rs| rs != (0, 0))
        .all(|(r, s)| degree_form(trace, p, r, s) > 0);
    let p_times_points = p as i128 * base_points;
    let passed = form_positive
        && deg_p_minus_v == p_times_points
        && divides
        && out.iter().all(|l| {
            l.points as i128 == l.count_from_trace
                && l.hasse
                && l.frobenius_automorphism
                && l.fixed_set_is_prime_field_points
                && l.v_after_frobenius_is_p
                && l.frobenius_after_v_is_p
                && l.ker_v as u64 <= p
        });
    Ok(VerschiebungReport {
        curve: e.label(),
        p,
        trace,
        levels: out,
        form_positive,
        form_box,
        deg_p_minus_v,
        p_times_points,
        rational_levels,
        kernel_counts_divide_form: divides,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddPowerWitness {
    pub p: u64,
    /// Curve coefficients `[a1, a2, a3, a4, a6]` as elements of `F_{p²}`
    /// in the encoding of `field`.
    pub coefficients: [Elem; 5],
    pub field: FqField,
    pub points: usize,
    /// Trace of the `p²`-power Frobenius, `±2p`.
    pub trace: i64,
    pub r: i64,
    pub s: i64,
    pub degree: i128,
    /// The `p²`-Frobenius acts as `[trace/2]` on `E(F_{p^4})`, hence `s + rV = 0` there.
    pub frobenius_is_scalar: bool,
    pub kernel_is_everything: bool,
}

/// Searches Weierstrass curves over `F_{p²}` for a supersingular one with
/// trace `±2p`, where `s + r·V` has degree `(s ± p·r)²`.
pub fn odd_power_sharpness(p: u64) -> Result<OddPowerWitness> {
    let field = Arc::new(FqField::new(p, 2)?);
    let q = field.order();
    let q_elems = q as Elem;
    let mut code = [0 as Elem; 5];
    loop {
        if let Ok(curve) = WeierstrassCurve::new(field.clone(), code) {
            let n = curve.points().len() as i64;
            let trace = q as i64 + 1 - n;
            if trace.abs() == 2 * p as i64 {
                return verify_witness(p, field, curve, trace);
            }
        }
        // Next coefficient tuple in lexicographic order.
        let mut i = 4;
        loop {
            code[i] += 1;
            if code[i] < q_elems {
                break;
            }
            code[i] = 0;
            if i == 0 {
                return Err(Error::Inconclusive(format!("no witness at desk scale for p = {p}")));
            }
            i -= 1;
        }
    }
}

fn verify_witness(p: u64, field: Arc<FqField>, curve: WeierstrassCurve, trace: i64) -> Result<OddPowerWitness> {
    let eps = trace.signum();
    let (r, s) = (1, -eps * p as i64);
    let q = field.order();
    // Check the Frobenius identity on the degree-2 extension.
    let big = Arc::new(FqField::new(p, 4)?);
    let emb = field.embedding_into(&big)?;
    let ext = WeierstrassCurve::new(big.clone(), curve.coefficients().map(|c| emb.apply(c)))?;
    let pts = ext.points();
    let pi = |pt: Point| ext.frobenius_power(pt, 2);
    let frobenius_is_scalar = pts.iter().all(|&pt| pi(pt) == ext.mul(eps * p as i64, pt));
    // V = [q] ∘ π⁻¹ with π⁻¹ = π on F_{p^4}.
    let v = |pt: Point| ext.mul(q as i64, pi(pt));
    let kernel_is_everything = pts.iter().all(|&pt| ext.add(ext.mul(s, pt), ext.mul(r, v(pt))) == Point::Infinity);
    Ok(OddPowerWitness {
        p,
        coefficients: curve.coefficients(),
        points: curve.points().len(),
        field: (*field).clone(),
        trace,
        r,
        s,
        degree: degree_form(trace, q, r, s),
        frobenius_is_scalar,
        kernel_is_everything,
    })
}
