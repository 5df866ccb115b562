//! Expected tables for `--check`. These are comparison data only; nothing
//! here feeds back into a computation.

use frobfix::abgroup::{localize, FgAbGroup, LocalizedGroup, PrimeSet};
use frobfix::fixpoint::GradedFixedPoints;
use frobfix::ktheory::{PiFixedTable, PI_COLUMNS, PI_ROWS};
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub cell: String,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub cells: usize,
    pub mismatches: Vec<Mismatch>,
    pub passed: bool,
}

fn cyclic(n: u64) -> FgAbGroup {
    FgAbGroup::cyclic(n)
}

/// `Z` at `n = −1, 0`, `Z/(p^i − 1)` at `n = 2i − 1`, zero otherwise.
fn expected_k(p: u64, n: i64) -> LocalizedGroup {
    let g = match n {
        -1 | 0 => FgAbGroup::free(1),
        n if n > 0 && n % 2 == 1 => FgAbGroup::cyclic(BigInt::from(p).pow(((n + 1) / 2) as u32) - 1),
        _ => FgAbGroup::trivial(),
    };
    g.into()
}

/// Rows `r = 0, −1` of the stable-stem table away from `p`, odd `p`.
fn expected_pi(p: u64, r: i64, n: i64) -> LocalizedGroup {
    let g = match (r, n) {
        (0, -1) => cyclic(p - 1),
        (0, 0) => FgAbGroup::from_orders(1, &[BigInt::from(2), BigInt::from(2)]),
        (0, 1) => cyclic(2),
        (0, 2) => cyclic(24),
        (-1, 0) => FgAbGroup::free(1),
        _ => FgAbGroup::trivial(),
    };
    localize(&g, &PrimeSet::single(p))
}

fn compare(cell: String, expected: LocalizedGroup, computed: Option<&LocalizedGroup>, out: &mut Vec<Mismatch>) {
    let same = match computed {
        Some(c) if expected.is_trivial() => c.is_trivial(),
        Some(c) => *c == expected,
        None => false,
    };
    if !same {
        out.push(Mismatch {
            cell,
            expected: expected.to_string(),
            computed: computed.map_or_else(|| "unresolved".to_string(), |c| c.to_string()),
        });
    }
}

pub fn check_k_table(p: u64, fp: &GradedFixedPoints) -> CheckResult {
    let mut mismatches = vec![];
    let mut cells = 0;
    for d in fp.iter() {
        cells += 1;
        compare(format!("n = {}", d.degree), expected_k(p, d.degree), d.resolved.as_ref(), &mut mismatches);
    }
    CheckResult { cells, passed: mismatches.is_empty(), mismatches }
}

pub fn check_pi_table(t: &PiFixedTable) -> CheckResult {
    let mut mismatches = vec![];
    let mut cells = 0;
    for r in PI_ROWS {
        for n in PI_COLUMNS {
            cells += 1;
            let computed = t.cell(r, n).and_then(|c| c.resolved.as_ref());
            compare(format!("(r, n) = ({r}, {n})"), expected_pi(t.p, r, n), computed, &mut mismatches);
        }
    }
    CheckResult { cells, passed: mismatches.is_empty(), mismatches }
}
