//! Residue tables `f_q(l, m)`: the value of `F_q(L, M)` on the residue
//! class of `(L, M)` modulo `q` (modulo 4 when `q = 2`), found by searching
//! for a prime `p = (L^2 + 27M^2)/4` in each class.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::character::{table_value, CharValue};
use crate::eisenstein::CubeRoot;

/// Default bound on the witness prime.
pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("search bound {bound} is below q^2 = {min}")]
    BoundTooSmall { bound: u64, min: u64 },
    #[error("malformed table document: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Value(CubeRoot),
    Star,
}

impl Cell {
    pub fn label(self) -> &'static str {
        match self {
            Cell::Value(v) => v.label(),
            Cell::Star => "*",
        }
    }

    pub fn value(self) -> Option<CubeRoot> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::Star => None,
        }
    }

    pub fn conj(self) -> Cell {
        match self {
            Cell::Value(v) => Cell::Value(v.conj()),
            Cell::Star => Cell::Star,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueTable {
    pub q: u64,
    pub modulus: u64,
    pub search_bound: u64,
    /// `entries[m][l]`.
    pub entries: Vec<Vec<Cell>>,
    /// `witness[m][l]`: the smallest prime realizing the entry.
    pub witness: Vec<Vec<Option<u64>>>,
}

impl ResidueTable {
    pub fn get(&self, l: u64, m: u64) -> Cell {
        self.entries[(m % self.modulus) as usize][(l % self.modulus) as usize]
    }

    pub fn witness_at(&self, l: u64, m: u64) -> Option<u64> {
        self.witness[(m % self.modulus) as usize][(l % self.modulus) as usize]
    }

    /// Overwrite one cell; meant for fault injection in tests.
    pub fn set(&mut self, l: u64, m: u64, cell: Cell) {
        self.entries[(m % self.modulus) as usize][(l % self.modulus) as usize] = cell;
    }

    /// Rows from the top (`m = modulus - 1`) down, `l` increasing to the
    /// right, axis labels on the left and bottom.
    pub fn render_text(&self) -> String {
        let n = self.modulus as usize;
        let w = n.saturating_sub(1).to_string().len().max(2);
        let mut out = String::new();
        let _ = writeln!(out, "f_{}(l, m), modulus {}, witness bound {}", self.q, self.modulus, self.search_bound);
        for m in (0..n).rev() {
            let _ = write!(out, "{m:>w$} |");
            for l in 0..n {
                let _ = write!(out, " {:>w$}", self.entries[m][l].label());
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{:>w$} +{}", "", "-".repeat((w + 1) * n));
        let _ = write!(out, "{:>w$}  ", "");
        for l in 0..n {
            let _ = write!(out, " {l:>w$}");
        }
        out.push('\n');
        out
    }

    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            q: self.q.to_string(),
            modulus: self.modulus.to_string(),
            search_bound: self.search_bound.to_string(),
            rows: self
                .entries
                .iter()
                .map(|row| row.iter().map(|&c| DocCell::from(c)).collect())
                .collect(),
        }
    }
}

impl fmt::Display for ResidueTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

/// The structured export: `rows[m][l]`, `m` ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub q: String,
    pub modulus: String,
    pub search_bound: String,
    pub rows: Vec<Vec<DocCell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DocCell {
    Value { v: u8 },
    Star { star: bool },
}

impl From<Cell> for DocCell {
    fn from(c: Cell) -> Self {
        match c {
            Cell::Value(r) => DocCell::Value { v: r.exponent() },
            Cell::Star => DocCell::Star { star: true },
        }
    }
}

impl TableDocument {
    /// Decode the grid, rejecting malformed cells and ragged rows.
    pub fn cells(&self) -> Result<Vec<Vec<Cell>>, TableError> {
        let n: usize = self
            .modulus
            .parse()
            .map_err(|_| TableError::Malformed(format!("modulus {:?}", self.modulus)))?;
        if self.rows.len() != n || self.rows.iter().any(|r| r.len() != n) {
            return Err(TableError::Malformed("grid is not modulus x modulus".into()));
        }
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match *c {
                        DocCell::Value { v } if v < 3 => Ok(Cell::Value(CubeRoot::from_exponent(v as i64))),
                        DocCell::Star { star: true } => Ok(Cell::Star),
                        other => Err(TableError::Malformed(format!("cell {other:?}"))),
                    })
                    .collect()
            })
            .collect()
    }
}

/// Published tables for `q = 2, 3, 5, 7`, `grid[m][l]`.
pub fn known_grid(q: u64) -> Option<Vec<Vec<Cell>>> {
    let top_down: &[&str] = match q {
        2 => &["* w2 * w", "1 * * *", "* w * w2", "* * 1 *"],
        3 => &["* w w2", "* w2 w", "* 1 1"],
        5 => &[
            "1 w2 w w2 w",
            "1 w2 w2 w w",
            "1 w w w2 w2",
            "1 w w2 w w2",
            "* 1 1 1 1",
        ],
        7 => &[
            "1 * w2 w w2 w *",
            "1 w2 * w w2 * w",
            "1 w w * * w2 w2",
            "1 w2 w2 * * w w",
            "1 w * w2 w * w2",
            "1 * w w2 w w2 *",
            "* 1 1 1 1 1 1",
        ],
        _ => return None,
    };
    let cell = |s: &str| match s {
        "*" => Cell::Star,
        "1" => Cell::Value(CubeRoot::ONE),
        "w" => Cell::Value(CubeRoot::OMEGA),
        _ => Cell::Value(CubeRoot::OMEGA_BAR),
    };
    Some(
        top_down
            .iter()
            .rev()
            .map(|row| row.split_whitespace().map(cell).collect())
            .collect(),
    )
}

/// `4` for `q = 2`, `q` otherwise.
pub fn modulus_for(q: u64) -> u64 {
    if q == 2 {
        4
    } else {
        q
    }
}

/// Fill the table for `q` from all primes `p ≠ q` up to `search_bound`,
/// each contributing the four sign variants of its pair.
pub fn build_table(q: u64, search_bound: u64) -> Result<ResidueTable, TableError> {
    if !arith::is_prime_u64(q) {
        return Err(TableError::NotPrime(q));
    }
    if search_bound < q * q {
        return Err(TableError::BoundTooSmall {
            bound: search_bound,
            min: q * q,
        });
    }
    let n = modulus_for(q);
    let nu = n as usize;
    let mut entries = vec![vec![Cell::Star; nu]; nu];
    let mut witness = vec![vec![None; nu]; nu];
    let mut remaining = nu * nu;

    for (p, l, m) in positive_pairs(search_bound) {
        if remaining == 0 {
            break;
        }
        if p == q {
            continue;
        }
        for (sl, sm) in [(1i64, 1i64), (-1, 1), (1, -1), (-1, -1)] {
            let (li, mi) = (sl * l as i64, sm * m as i64);
            let cl = li.rem_euclid(n as i64) as usize;
            let cm = mi.rem_euclid(n as i64) as usize;
            if witness[cm][cl].is_some() {
                continue;
            }
            let v = table_value(q, &BigInt::from(li), &BigInt::from(mi))
                .expect("pair comes from a prime");
            entries[cm][cl] = match v {
                CharValue::Root(r) => Cell::Value(r),
                CharValue::Zero => unreachable!("p ≠ q"),
            };
            witness[cm][cl] = Some(p);
            remaining -= 1;
        }
    }
    Ok(ResidueTable {
        q,
        modulus: n,
        search_bound,
        entries,
        witness,
    })
}

/// All `(p, L, M)` with `L, M > 0`, `4p = L^2 + 27M^2`, `p <= bound` prime,
/// sorted by `p`.
pub fn positive_pairs(bound: u64) -> Vec<(u64, u64, u64)> {
    let mut is_prime = vec![false; bound as usize + 1];
    for p in arith::primes_up_to(bound) {
        is_prime[p as usize] = true;
    }
    let mut out = Vec::new();
    let mut m = 1u64;
    while 27 * m * m < 4 * bound {
        let mut l = if m.is_multiple_of(2) { 2 } else { 1 };
        loop {
            let four_p = l * l + 27 * m * m;
            if four_p > 4 * bound {
                break;
            }
            let p = four_p / 4;
            if four_p.is_multiple_of(4) && is_prime[p as usize] {
                out.push((p, l, m));
            }
            l += 2;
        }
        m += 1;
    }
    out.sort_unstable();
    out
}

/// Why a cell is forced to be a star, where an argument is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarReason {
    Origin,
    /// `q = 2`: `L^2 + 27M^2` is odd.
    OppositeParity,
    /// `q = 2`: `L ≡ M ≡ 0, 2 (mod 4)` makes `L^2 + 27M^2` divisible by 16.
    DivisibleBy16,
    /// `q = 3`: `L ≡ 0` makes `L^2 + 27M^2` divisible by 9.
    DivisibleBy9,
    /// `q ≡ 1 (mod 3)`: `q | L^2 + 27M^2`, so `p` could only be `q` itself.
    OnlyQ,
}

impl fmt::Display for StarReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StarReason::Origin => "both coordinates vanish",
            StarReason::OppositeParity => "L^2 + 27M^2 is odd",
            StarReason::DivisibleBy16 => "L^2 + 27M^2 is divisible by 16",
            StarReason::DivisibleBy9 => "L^2 + 27M^2 is divisible by 9",
            StarReason::OnlyQ => "q divides L^2 + 27M^2, so p = q",
        })
    }
}

pub fn star_predicate(q: u64, l: i64, m: i64) -> Option<StarReason> {
    let n = modulus_for(q) as i64;
    let (l, m) = (l.rem_euclid(n), m.rem_euclid(n));
    if l == 0 && m == 0 {
        return Some(StarReason::Origin);
    }
    match q {
        2 if (l + m) % 2 == 1 => Some(StarReason::OppositeParity),
        2 if l == m && l % 2 == 0 => Some(StarReason::DivisibleBy16),
        3 if l == 0 => Some(StarReason::DivisibleBy9),
        _ if q % 3 == 1 && (l * l + 27 * m * m) % q as i64 == 0 => Some(StarReason::OnlyQ),
        _ => None,
    }
}

/// Structural checks on a table; every list is empty for a clean table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableReport {
    /// Unit-multiple classes `{k(l, m)}` carrying more than one value,
    /// one entry per class (its smallest point).
    pub line_violations: Vec<(u64, u64)>,
    /// Points with `f(l, -m) ≠ conj f(l, m)`.
    pub conjugate_violations: Vec<(u64, u64)>,
    /// Non-star counts of `1, w, w_bar`.
    pub distribution: [usize; 3],
    /// Points on `l ≡ 0` or `m ≡ 0 (mod q)` whose value is not 1.
    pub axis_violations: Vec<(u64, u64)>,
    /// Classes that mix stars with values.
    pub partial_lines: Vec<(u64, u64)>,
}

impl TableReport {
    pub fn distribution_balanced(&self) -> bool {
        self.distribution[0] == self.distribution[1] && self.distribution[1] == self.distribution[2]
    }

    pub fn is_clean(&self) -> bool {
        self.line_violations.is_empty()
            && self.conjugate_violations.is_empty()
            && self.distribution_balanced()
            && self.axis_violations.is_empty()
            && self.partial_lines.is_empty()
    }
}

/// The classes of nonzero points under multiplication by units of
/// `Z/modulus`; for odd `q` these are the punctured lines through the
/// origin.
pub fn unit_classes(modulus: u64) -> Vec<Vec<(u64, u64)>> {
    let units: Vec<u64> = (1..modulus)
        .filter(|&k| num_integer::gcd(k, modulus) == 1)
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for m in 0..modulus {
        for l in 0..modulus {
            if (l, m) == (0, 0) || seen.contains(&(l, m)) {
                continue;
            }
            let mut class: Vec<(u64, u64)> = units
                .iter()
                .map(|&k| (k * l % modulus, k * m % modulus))
                .collect();
            class.sort_unstable();
            class.dedup();
            seen.extend(class.iter().copied());
            out.push(class);
        }
    }
    out
}

pub fn verify_table(t: &ResidueTable) -> TableReport {
    let n = t.modulus;
    let mut report = TableReport::default();
    for class in unit_classes(n) {
        let values: BTreeSet<CubeRoot> = class.iter().filter_map(|&(l, m)| t.get(l, m).value()).collect();
        if values.len() > 1 {
            report.line_violations.push(class[0]);
        }
        let stars = class.iter().filter(|&&(l, m)| t.get(l, m) == Cell::Star).count();
        if stars > 0 && stars < class.len() {
            report.partial_lines.push(class[0]);
        }
    }
    for m in 0..n {
        for l in 0..n {
            let here = t.get(l, m);
            if t.get(l, (n - m) % n) != here.conj() {
                report.conjugate_violations.push((l, m));
            }
            if let Some(v) = here.value() {
                report.distribution[v.exponent() as usize] += 1;
                if (l % t.q == 0 || m % t.q == 0) && !v.is_one() {
                    report.axis_violations.push((l, m));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_grids_reproduced() {
        for q in [2, 3, 5, 7] {
            let t = build_table(q, 100_000).unwrap();
            assert_eq!(Some(t.entries.clone()), known_grid(q), "q={q}\n{t}");
            assert!(verify_table(&t).is_clean(), "q={q}");
        }
    }

    #[test]
    fn named_cells() {
        let t2 = build_table(2, 10_000).unwrap();
        assert_eq!(t2.get(3, 1), Cell::Value(CubeRoot::OMEGA_BAR));
        let t5 = build_table(5, 10_000).unwrap();
        assert_eq!(t5.get(4, 2), Cell::Value(CubeRoot::OMEGA_BAR));
        assert_eq!(t5.get(1, 1), Cell::Value(CubeRoot::OMEGA));
        assert_eq!(t5.witness_at(1, 1), Some(7));
    }

    #[test]
    fn witnesses_are_smallest_and_valid() {
        let t = build_table(11, 100_000).unwrap();
        for m in 0..11u64 {
            for l in 0..11u64 {
                match (t.get(l, m), t.witness_at(l, m)) {
                    (Cell::Star, None) => {}
                    (Cell::Value(_), Some(p)) => {
                        let first = positive_pairs(p)
                            .into_iter()
                            .filter(|&(pp, _, _)| pp != 11)
                            .find(|&(_, a, b)| {
                                [(1i64, 1i64), (-1, 1), (1, -1), (-1, -1)].iter().any(|&(x, y)| {
                                    (x * a as i64).rem_euclid(11) as u64 == l
                                        && (y * b as i64).rem_euclid(11) as u64 == m
                                })
                            })
                            .map(|t| t.0);
                        assert_eq!(first, Some(p));
                    }
                    other => panic!("inconsistent cell {other:?}"),
                }
            }
        }
    }

    #[test]
    fn star_reasons() {
        assert_eq!(star_predicate(2, 2, 2), Some(StarReason::DivisibleBy16));
        assert_eq!(star_predicate(2, 1, 2), Some(StarReason::OppositeParity));
        assert_eq!(star_predicate(3, 0, 1), Some(StarReason::DivisibleBy9));
        assert_eq!(star_predicate(7, 3, 4), Some(StarReason::OnlyQ));
        assert_eq!(star_predicate(7, 1, 1), Some(StarReason::OnlyQ));
        assert_eq!(star_predicate(7, 1, 2), None);
        for l in 0..5 {
            for m in 0..5 {
                let want = (l, m) == (0, 0);
                assert_eq!(star_predicate(5, l, m).is_some(), want);
            }
        }
    }

    #[test]
    fn predicted_stars_are_stars() {
        for q in [2u64, 3, 5, 7, 11, 13, 19] {
            let t = build_table(q, 200_000).unwrap();
            for m in 0..t.modulus {
                for l in 0..t.modulus {
                    if star_predicate(q, l as i64, m as i64).is_some() {
                        assert_eq!(t.get(l, m), Cell::Star, "q={q} ({l},{m})");
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_entry_breaks_one_line() {
        let mut t = build_table(11, 100_000).unwrap();
        assert!(verify_table(&t).is_clean());
        let old = t.get(3, 5).value().unwrap();
        t.set(3, 5, Cell::Value(old * CubeRoot::OMEGA));
        let r = verify_table(&t);
        assert_eq!(r.line_violations.len(), 1);
    }

    #[test]
    fn thirteen_is_clean() {
        let t = build_table(13, DEFAULT_SEARCH_BOUND).unwrap();
        let r = verify_table(&t);
        assert!(r.is_clean(), "{r:?}");
        assert_eq!(r.distribution, [48, 48, 48]);
    }

    #[test]
    fn document_round_trip() {
        let t = build_table(5, 10_000).unwrap();
        let doc = t.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.starts_with(r#"{"q":"5","modulus":"5","search_bound":"10000","rows":[[{"star":true},{"v":0}"#));
        let back: TableDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.cells().unwrap(), t.entries);
        let bad: TableDocument = serde_json::from_str(&json.replace(r#"{"v":0}"#, r#"{"v":7}"#)).unwrap();
        assert!(bad.cells().is_err());
    }

    #[test]
    fn text_layout() {
        let t = build_table(3, 1000).unwrap();
        let text = t.render_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["2", "|", "*", "w", "w2"]);
        assert_eq!(lines[3].split_whitespace().collect::<Vec<_>>(), ["0", "|", "*", "1", "1"]);
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(build_table(9, 1000), Err(TableError::NotPrime(9)));
        assert!(matches!(build_table(11, 100), Err(TableError::BoundTooSmall { .. })));
    }
}
