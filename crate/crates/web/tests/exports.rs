use frobfix_web::{curve_points_json, k_table_json, kummer_tower_json};
use serde_json::Value;

#[test]
fn k_table_rows() {
    let v: Value = serde_json::from_str(&k_table_json(3, 5).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0]["n"], -2);
    let n3 = rows.iter().find(|r| r["n"] == 3).unwrap();
    assert_eq!(n3["group"], "Z/8");
    assert!(k_table_json(6, 3).is_err());
}

#[test]
fn curve_orbits_partition_the_points() {
    // y² = x³ + x over F_25.
    let v: Value = serde_json::from_str(&curve_points_json(5, &[0, 0, 0, 1, 0], 2).unwrap()).unwrap();
    let n = v["order"].as_u64().unwrap() as usize;
    assert_eq!(v["points"].as_array().unwrap().len(), n);
    let mut all: Vec<u64> = v["orbits"].as_array().unwrap().iter().flat_map(|o| o.as_array().unwrap().iter().map(|i| i.as_u64().unwrap())).collect();
    all.sort();
    assert_eq!(all, (0..n as u64).collect::<Vec<_>>());
    // Orbits have length 1 or 2 over F_{p²}; the fixed ones are the F_5-points.
    let fixed = v["orbits"].as_array().unwrap().iter().filter(|o| o.as_array().unwrap().len() == 1).count();
    assert_eq!(fixed, 4);
    assert_eq!(v["points"][0], "O");
    assert!(curve_points_json(5, &[0, 0, 0, 0, 0], 1).is_err());
    assert!(curve_points_json(5, &[1, 2], 1).is_err());
}

#[test]
fn kummer_tower_certifies() {
    let v: Value = serde_json::from_str(&kummer_tower_json(5, 4).unwrap()).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 4);
    assert_eq!(v["levels"][0]["kernel"], "Z/4");
    assert_eq!(v["kernel_stable_from"], 1);
    assert_eq!(v["certified"], true);
    assert_eq!(v["deaths"][0]["dies_at"], 4);
}
