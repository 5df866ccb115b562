//! K-groups and stable stems of `F̄_p` with their Frobenius actions, and the
//! fixed points of those actions.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::abgroup::{localize, FgAbGroup, LocalizedGroup, PrimeSet};
use crate::arith::require_prime;
use crate::fixpoint::{
    graded_fixed_points_in, term_fixed_points, DegreeFixedPoints, Endo, FixedPointPair, GradedEndo, GradedFixedPoints,
    GradedTerm, IndTerm,
};
use crate::indgroup::units_frobenius_ind;
use crate::{Error, Result};

/// How Frobenius acts on a table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndoSpec {
    /// Multiplication by `p^n`.
    MultByPPow { n: i64 },
    /// `x ↦ x^{p^i}` on the roots of unity of `F̄_p`.
    UnitsFrobenius { i: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableGroup {
    Group(LocalizedGroup),
    /// `F̄_p^×` as the factorial tower of roots of unity.
    RootsOfUnity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub group: TableGroup,
    pub endo: EndoSpec,
}

impl TableEntry {
    fn zero() -> Self {
        TableEntry { group: TableGroup::Group(LocalizedGroup::default()), endo: EndoSpec::MultByPPow { n: 0 } }
    }

    fn group(g: LocalizedGroup, endo: EndoSpec) -> Self {
        TableEntry { group: TableGroup::Group(g), endo }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.group, TableGroup::Group(g) if g.is_trivial())
    }

    /// The entry as a fixed-point input, localized at `primes`.
    pub fn term(&self, p: u64, primes: &PrimeSet) -> Result<GradedTerm> {
        match (&self.group, self.endo) {
            (TableGroup::Group(g), EndoSpec::MultByPPow { n }) => Ok(Endo::mult_p_power(g.localize(primes), p, n)?.into()),
            (TableGroup::RootsOfUnity, EndoSpec::UnitsFrobenius { i }) => {
                Ok(IndTerm::new(units_frobenius_ind(p, i)?, primes.clone()).into())
            }
            _ => Err(Error::InvalidArgument("endomorphism does not fit the entry".into())),
        }
    }

    pub fn describe(&self) -> String {
        match &self.group {
            TableGroup::Group(g) => g.to_string(),
            TableGroup::RootsOfUnity => "F̄_p^×".to_string(),
        }
    }
}

/// `K_*(F̄_p)` with the Frobenius pullback, entries produced on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KTable {
    p: u64,
}

pub fn k_fbar(p: u64) -> Result<KTable> {
    require_prime(p)?;
    Ok(KTable { p })
}

impl KTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `K_0 = Z`, `K_{2i−1} = F̄_p^×` with `x ↦ x^{p^i}`, zero otherwise.
    pub fn entry(&self, n: i64) -> TableEntry {
        match n {
            0 => TableEntry::group(FgAbGroup::free(1).into(), EndoSpec::MultByPPow { n: 0 }),
            n if n > 0 && n % 2 == 1 => {
                TableEntry { group: TableGroup::RootsOfUnity, endo: EndoSpec::UnitsFrobenius { i: (n as u64 + 1) / 2 } }
            }
            _ => TableEntry::zero(),
        }
    }

    pub fn graded(&self, lo: i64, hi: i64, primes: &PrimeSet) -> Result<GradedEndo> {
        let mut g = GradedEndo::new();
        for n in lo..=hi {
            let e = self.entry(n);
            if !e.is_zero() {
                g.insert(n, e.term(self.p, primes)?);
            }
        }
        Ok(g)
    }
}

/// Lowest degree reported in K-theory tables.
pub const K_TABLE_LOW: i64 = -2;

/// Fixed points of Frobenius on `K_*(F̄_p)` in degrees `-2..=n_max`.
pub fn frobenius_k(p: u64, n_max: i64) -> Result<GradedFixedPoints> {
    frobenius_k_localized(p, n_max, &PrimeSet::none())
}

/// As [`frobenius_k`] with every group rationalized first.
pub fn frobenius_k_rational(p: u64, n_max: i64) -> Result<GradedFixedPoints> {
    frobenius_k_localized(p, n_max, &PrimeSet::All)
}

pub fn frobenius_k_localized(p: u64, n_max: i64, primes: &PrimeSet) -> Result<GradedFixedPoints> {
    let table = k_fbar(p)?;
    let g = table.graded(K_TABLE_LOW, n_max + 1, primes)?;
    graded_fixed_points_in(&g, K_TABLE_LOW..=n_max)
}

fn require_odd(p: u64) -> Result<u64> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::Unsupported("stable stem tables are only available for odd primes".into()));
    }
    Ok(p)
}

/// `π_{r,n}(F̄_p)[p⁻¹]` for `r ∈ {0, 1}` (and `r < 0`, where it vanishes).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PiTable {
    p: u64,
}

pub fn pi_table(p: u64) -> Result<PiTable> {
    Ok(PiTable { p: require_odd(p)? })
}

impl PiTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    fn inverted(&self) -> PrimeSet {
        PrimeSet::single(self.p)
    }

    pub fn entry(&self, r: i64, n: i64) -> Result<TableEntry> {
        let loc = |g: FgAbGroup| localize(&g, &self.inverted());
        let mult = EndoSpec::MultByPPow { n };
        Ok(match (r, n) {
            (r, _) if r < 0 => TableEntry::zero(),
            (0, -1) => TableEntry { group: TableGroup::RootsOfUnity, endo: EndoSpec::UnitsFrobenius { i: 1 } },
            (0, 0) => TableEntry::group(loc(FgAbGroup::free(1)), mult),
            (0, _) => TableEntry::zero(),
            (1, 0) => TableEntry::group(loc(FgAbGroup::from_orders(0, &[2.into(), 2.into()])), mult),
            (1, 1) => TableEntry::group(loc(FgAbGroup::cyclic(2)), mult),
            (1, 2) => TableEntry::group(loc(FgAbGroup::cyclic(24)), mult),
            (1, _) => TableEntry::zero(),
            _ => return Err(Error::Unsupported(format!("π_{{{r},{n}}} is not tabulated"))),
        })
    }

    fn pair(&self, r: i64, n: i64) -> Result<FixedPointPair> {
        let e = self.entry(r, n)?;
        term_fixed_points(&e.term(self.p, &self.inverted())?)
    }
}

/// Rows and columns of the stable-stem fixed-point table.
pub const PI_ROWS: [i64; 2] = [0, -1];
pub const PI_COLUMNS: [i64; 6] = [-2, -1, 0, 1, 2, 3];

/// `π_{r,n}(F̄_p / Frob)[p⁻¹]` cell by cell.
#[derive(Clone, Debug, PartialEq)]
pub struct PiFixedTable {
    pub p: u64,
    pub cells: BTreeMap<(i64, i64), DegreeFixedPoints>,
}

impl PiFixedTable {
    pub fn cell(&self, r: i64, n: i64) -> Option<&DegreeFixedPoints> {
        self.cells.get(&(r, n))
    }
}

impl Serialize for PiFixedTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cell<'a> {
            r: i64,
            #[serde(flatten)]
            cell: &'a DegreeFixedPoints,
        }
        let cells: Vec<Cell> = self.cells.iter().map(|(&(r, _), c)| Cell { r, cell: c }).collect();
        let mut st = s.serialize_struct("PiFixedTable", 2)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("cells", &cells)?;
        st.end()
    }
}

/// `0 → coker(1 − Frob on π_{r+1,n}) → π_{r,n}(F̄_p / Frob) → ker(1 − Frob on π_{r,n}) → 0`.
pub fn frobenius_pi_cell(table: &PiTable, r: i64, n: i64) -> Result<DegreeFixedPoints> {
    let sub = table.pair(r + 1, n)?.h1;
    let quot = table.pair(r, n)?.h0;
    Ok(DegreeFixedPoints::new(n, sub, quot))
}

pub fn frobenius_pi_table(p: u64) -> Result<PiFixedTable> {
    let table = pi_table(p)?;
    let mut cells = BTreeMap::new();
    for r in PI_ROWS {
        for n in PI_COLUMNS {
            cells.insert((r, n), frobenius_pi_cell(&table, r, n)?);
        }
    }
    Ok(PiFixedTable { p, cells })
}

/// `K^M_*(F̄_p)`: `Z` in degree 0, `F̄_p^×` in degree 1, and zero above, since
/// `K^M_n(F_q) = 0` for `n ≥ 2` and Milnor K-theory commutes with the colimit.
pub fn milnor_k_entry(n: i64) -> TableEntry {
    match n {
        0 => TableEntry::group(FgAbGroup::free(1).into(), EndoSpec::MultByPPow { n: 0 }),
        1 => TableEntry { group: TableGroup::RootsOfUnity, endo: EndoSpec::UnitsFrobenius { i: 1 } },
        _ => TableEntry::zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub n: i64,
    pub milnor: FixedPointPair,
    pub quillen: FixedPointPair,
    pub milnor_raw: FixedPointPair,
    pub quillen_raw: FixedPointPair,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MilnorComparison {
    pub p: u64,
    pub rows: Vec<ComparisonRow>,
}

impl MilnorComparison {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }
}

/// Compares fixed points of Frobenius on `K^M_n(F̄_p)` and `K_n(F̄_p)` after
/// localizing at `(p)`, for `0 ≤ n ≤ n_max`.
pub fn milnor_comparison_fbar(p: u64, n_max: i64) -> Result<MilnorComparison> {
    let k = k_fbar(p)?;
    let at_p = PrimeSet::local_at(p);
    let none = PrimeSet::none();
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let m = milnor_k_entry(n);
        let q = k.entry(n);
        let milnor = term_fixed_points(&m.term(p, &at_p)?)?;
        let quillen = term_fixed_points(&q.term(p, &at_p)?)?;
        let milnor_raw = term_fixed_points(&m.term(p, &none)?)?;
        let quillen_raw = term_fixed_points(&q.term(p, &none)?)?;
        let agree = milnor == quillen;
        rows.push(ComparisonRow { n, milnor, quillen, milnor_raw, quillen_raw, agree });
    }
    Ok(MilnorComparison { p, rows })
}

/// One-row Markdown table of a graded result, columns by degree.
pub fn graded_markdown(title: &str, fp: &GradedFixedPoints) -> String {
    let cells: Vec<&DegreeFixedPoints> = fp.iter().collect();
    let mut s = String::new();
    let _ = write!(s, "| n |");
    for c in &cells {
        let _ = write!(s, " {} |", c.degree);
    }
    let _ = write!(s, "\n|---|");
    for _ in &cells {
        let _ = write!(s, "---|");
    }
    let _ = write!(s, "\n| {title} |");
    for c in &cells {
        let _ = write!(s, " {} |", c);
    }
    s.push('\n');
    s
}

/// Markdown in the layout rows `r`, columns `n`.
pub fn pi_markdown(t: &PiFixedTable) -> String {
    let mut s = String::from("| r \\ n |");
    for n in PI_COLUMNS {
        let _ = write!(s, " {n} |");
    }
    s.push_str("\n|---|");
    for _ in PI_COLUMNS {
        s.push_str("---|");
    }
    s.push('\n');
    for r in PI_ROWS {
        let _ = write!(s, "| {r} |");
        for n in PI_COLUMNS {
            let cell = t.cell(r, n).map(|c| c.to_string()).unwrap_or_default();
            let _ = write!(s, " {cell} |");
        }
        s.push('\n');
    }
    s
}
