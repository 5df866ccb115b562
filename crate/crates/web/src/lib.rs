//! wasm-bindgen surface for the static demo in `www/`. Every export returns
//! a JSON string; the `*_json` functions are the same computations without
//! the JS error type, so they can be tested natively.

use std::collections::BTreeSet;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use frobfix::curves::{point_group, EllipticCurveSpec, Point};
use frobfix::field::{Elem, FqField};
use frobfix::fixpoint::DegreeFixedPoints;
use frobfix::indgroup::{colim_vanishes, ind_fixed_points, roots_of_unity_ind, stabilize, Stabilization};
use frobfix::ktheory::frobenius_k;
use frobfix::Result;

/// Largest tower level the demo will show.
pub const MAX_TOWER_LEVEL: usize = 6;

#[derive(Serialize)]
struct KRow {
    n: i64,
    group: String,
    sub: String,
    quot: String,
}

pub fn k_table_json(p: u64, n_max: i64) -> Result<String> {
    let fp = frobenius_k(p, n_max)?;
    let rows: Vec<KRow> = fp
        .iter()
        .map(|d: &DegreeFixedPoints| KRow { n: d.degree, group: d.to_string(), sub: d.sub.to_string(), quot: d.quot.to_string() })
        .collect();
    Ok(serde_json::to_string(&rows).expect("plain data serializes"))
}

#[derive(Serialize)]
struct CurvePoints {
    curve: String,
    q: u64,
    order: usize,
    structure: String,
    trace: i64,
    points: Vec<String>,
    /// Orbits of the `p`-power Frobenius, as indices into `points`.
    orbits: Vec<Vec<usize>>,
}

/// `2a+1` style label of a field element in terms of the generator `a`.
fn element_label(f: &FqField, x: Elem) -> String {
    let c = f.coefficients(x);
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| match (i, k) {
            (0, k) => k.to_string(),
            (1, 1) => "a".into(),
            (1, k) => format!("{k}a"),
            (i, 1) => format!("a^{i}"),
            (i, k) => format!("{k}a^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

pub fn curve_points_json(p: u64, coefficients: &[i64], level: u32) -> Result<String> {
    let a: [i64; 5] = coefficients
        .try_into()
        .map_err(|_| frobfix::Error::InvalidArgument("expected five coefficients a1, a2, a3, a4, a6".into()))?;
    let spec = EllipticCurveSpec::new(p, a)?;
    let g = point_group(&spec, level)?;
    let f = g.field();
    let label = |pt: &Point| match *pt {
        Point::Infinity => "O".to_string(),
        Point::Affine(x, y) => format!("({}, {})", element_label(f, x), element_label(f, y)),
    };
    let pts = g.points();
    let mut seen = BTreeSet::new();
    let mut orbits = vec![];
    for (i, &pt) in pts.iter().enumerate() {
        if seen.contains(&i) {
            continue;
        }
        let mut orbit = vec![];
        let mut cur = pt;
        loop {
            let j = pts.binary_search(&cur).expect("Frobenius permutes the points");
            if !seen.insert(j) {
                break;
            }
            orbit.push(j);
            cur = g.frobenius(cur);
        }
        orbits.push(orbit);
    }
    let q = f.order();
    let out = CurvePoints {
        curve: spec.label(),
        q,
        order: pts.len(),
        structure: g.group().to_string(),
        trace: q as i64 + 1 - pts.len() as i64,
        points: pts.iter().map(label).collect(),
        orbits,
    };
    Ok(serde_json::to_string(&out).expect("plain data serializes"))
}

#[derive(Serialize)]
struct TowerLevel {
    level: usize,
    units: String,
    kernel: String,
    cokernel: String,
}

#[derive(Serialize)]
struct Death {
    level: usize,
    dies_at: usize,
}

#[derive(Serialize)]
struct KummerTower {
    p: u64,
    levels: Vec<TowerLevel>,
    kernel_stable_from: Option<usize>,
    deaths: Vec<Death>,
    certified: bool,
}

pub fn kummer_tower_json(p: u64, max_level: usize) -> Result<String> {
    let max_level = max_level.clamp(1, MAX_TOWER_LEVEL);
    let tower = roots_of_unity_ind(p)?;
    let fp = ind_fixed_points(&tower)?;
    let levels = (1..=max_level)
        .map(|m| {
            Ok(TowerLevel {
                level: m,
                units: tower.level(m)?.to_string(),
                kernel: fp.ker_system.level(m)?.to_string(),
                cokernel: fp.coker_system.level(m)?.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel_stable_from = match stabilize(&fp.ker_system, max_level.max(2))? {
        Stabilization::Stable { from_level, .. } => Some(from_level),
        Stabilization::NotStabilized { .. } => None,
    };
    let report = colim_vanishes(&fp.coker_system, max_level)?;
    let out = KummerTower {
        p,
        levels,
        kernel_stable_from,
        deaths: report.certificates.iter().map(|c| Death { level: c.level, dies_at: c.dies_at }).collect(),
        certified: report.is_certified(),
    };
    Ok(serde_json::to_string(&out).expect("plain data serializes"))
}

fn js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = kTable)]
pub fn k_table(p: u32, n_max: i32) -> std::result::Result<String, JsError> {
    js(k_table_json(p.into(), n_max.into()))
}

#[wasm_bindgen(js_name = curvePoints)]
pub fn curve_points(p: u32, coefficients: Vec<i32>, level: u32) -> std::result::Result<String, JsError> {
    let c: Vec<i64> = coefficients.into_iter().map(i64::from).collect();
    js(curve_points_json(p.into(), &c, level))
}

#[wasm_bindgen(js_name = kummerTower)]
pub fn kummer_tower(p: u32, max_level: u32) -> std::result::Result<String, JsError> {
    js(kummer_tower_json(p.into(), max_level as usize))
}
