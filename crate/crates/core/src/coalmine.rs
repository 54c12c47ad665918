//! Wildcard compression of the ideal lattice.
//!
//! A [`MultivaluedRow`] is a pattern over `{0, 1, 2}` plus independent
//! forcing groups `a b ... b`: a bitstring belongs to the row when it is `0`
//! on every `0`, `1` on every `1`, arbitrary on every `2`, and for each group
//! a `1` on the `a` position forces `1` on all of that group's `b` positions.
//! A [`CoalMine`] is a list of pairwise disjoint rows whose union is exactly
//! the set of order ideals of a poset.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bits::{BitSet, IdealKey};
use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::poset::Poset;

/// Default ceiling for [`MultivaluedRow::expand`].
pub const DEFAULT_EXPAND_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    Two,
    /// Forcing position of group `g`.
    A(usize),
    /// Forced position of group `g`.
    B(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub a: usize,
    pub bs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultivaluedRow {
    symbols: Vec<Symbol>,
    groups: Vec<Group>,
    ones: BitSet,
    twos: Vec<usize>,
    b_masks: Vec<BitSet>,
}

enum Unit<'a> {
    Free(usize),
    Group(&'a Group, &'a BitSet),
}

impl MultivaluedRow {
    /// Builds a row from its symbols. Group ids may be arbitrary; they are
    /// renumbered `0..` in ascending order.
    pub fn new(mut symbols: Vec<Symbol>) -> Result<Self> {
        let n = symbols.len();
        let mut ids: Vec<usize> = symbols
            .iter()
            .filter_map(|s| match s {
                Symbol::A(g) | Symbol::B(g) => Some(*g),
                _ => None,
            })
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let mut groups: Vec<Group> = ids
            .iter()
            .map(|_| Group {
                a: usize::MAX,
                bs: Vec::new(),
            })
            .collect();
        for (pos, s) in symbols.iter_mut().enumerate() {
            match s {
                Symbol::A(g) => {
                    let gi = ids.binary_search(g).unwrap();
                    if groups[gi].a != usize::MAX {
                        return Err(Error::MalformedRow(format!(
                            "group {g} has two `a` positions"
                        )));
                    }
                    groups[gi].a = pos;
                    *g = gi;
                }
                Symbol::B(g) => {
                    let gi = ids.binary_search(g).unwrap();
                    groups[gi].bs.push(pos);
                    *g = gi;
                }
                _ => {}
            }
        }
        for (gi, g) in groups.iter().enumerate() {
            if g.a == usize::MAX {
                return Err(Error::MalformedRow(format!("group {} has no `a` position", ids[gi])));
            }
            if g.bs.is_empty() {
                return Err(Error::MalformedRow(format!("group {} has no `b` position", ids[gi])));
            }
        }
        let ones = BitSet::from_elements(
            n,
            symbols
                .iter()
                .enumerate()
                .filter(|(_, s)| **s == Symbol::One)
                .map(|(i, _)| i),
        );
        let twos = symbols
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Symbol::Two)
            .map(|(i, _)| i)
            .collect();
        let b_masks = groups
            .iter()
            .map(|g| BitSet::from_elements(n, g.bs.iter().copied()))
            .collect();
        Ok(MultivaluedRow {
            symbols,
            groups,
            ones,
            twos,
            b_masks,
        })
    }

    pub fn width(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Membership test.
    pub fn contains(&self, x: &BitSet) -> Result<bool> {
        if x.width() != self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                found: x.width(),
            });
        }
        for (i, s) in self.symbols.iter().enumerate() {
            match s {
                Symbol::Zero if x.contains(i) => return Ok(false),
                Symbol::One if !x.contains(i) => return Ok(false),
                _ => {}
            }
        }
        Ok(self
            .groups
            .iter()
            .zip(&self.b_masks)
            .all(|(g, bs)| !x.contains(g.a) || bs.is_subset(x)))
    }

    /// `2^(#2) * prod over groups (2^m + 1)`.
    pub fn cardinality(&self) -> BigUint {
        let mut c = BigUint::one() << self.twos.len();
        for g in &self.groups {
            c *= (BigUint::one() << g.bs.len()) + 1u32;
        }
        c
    }

    /// Coefficient `k` is the number of members with exactly `k` ones:
    /// `x^(#1) (1+x)^(#2) prod ((1+x)^m + x^(m+1))`.
    pub fn rank_polynomial(&self) -> Vec<BigUint> {
        let n = self.width();
        let mut poly = vec![BigUint::zero(); n + 1];
        poly[self.ones.len()] = BigUint::one();
        let mut deg = self.ones.len();
        for _ in &self.twos {
            for k in (1..=deg + 1).rev() {
                let prev = poly[k - 1].clone();
                poly[k] += prev;
            }
            deg += 1;
        }
        for g in &self.groups {
            let m = g.bs.len();
            let factor: Vec<BigUint> = (0..=m + 1)
                .map(|j| {
                    if j == m + 1 {
                        BigUint::one()
                    } else {
                        binomial(m, j)
                    }
                })
                .collect();
            let mut next = vec![BigUint::zero(); n + 1];
            for (i, c) in poly.iter().enumerate().take(deg + 1) {
                if c.is_zero() {
                    continue;
                }
                for (j, f) in factor.iter().enumerate() {
                    next[i + j] += c * f;
                }
            }
            poly = next;
            deg += m + 1;
        }
        poly
    }

    fn units(&self) -> Vec<Unit<'_>> {
        let mut units: Vec<Unit<'_>> = self.twos.iter().map(|&p| Unit::Free(p)).collect();
        units.extend(self.groups.iter().zip(&self.b_masks).map(|(g, m)| Unit::Group(g, m)));
        units
    }

    /// Members with exactly `k` ones, ascending by key.
    pub fn ideals_of_size(&self, k: usize) -> Vec<IdealKey> {
        let fixed = self.ones.len();
        if k < fixed {
            return Vec::new();
        }
        let units = self.units();
        let mut suffix_max = vec![0usize; units.len() + 1];
        for (i, u) in units.iter().enumerate().rev() {
            let here = match u {
                Unit::Free(_) => 1,
                Unit::Group(g, _) => g.bs.len() + 1,
            };
            suffix_max[i] = suffix_max[i + 1] + here;
        }
        let need = k - fixed;
        if need > suffix_max[0] {
            return Vec::new();
        }
        let mut out = Vec::new();
        fill(&units, &suffix_max, 0, need, self.ones.clone(), &mut out);
        out.sort_unstable();
        out
    }

    /// All members, ascending by key.
    pub fn expand(&self, cap: usize) -> Result<Vec<IdealKey>> {
        let size = self.cardinality();
        if size > BigUint::from(cap) {
            return Err(Error::ExpansionCap {
                size: size.to_string(),
                cap,
            });
        }
        let mut all: Vec<IdealKey> = (0..=self.width()).flat_map(|k| self.ideals_of_size(k)).collect();
        all.sort_unstable();
        Ok(all)
    }
}

// Every count in 0..=suffix_max[i] is reachable from unit i onwards, so the
// range test below never descends into a dead branch.
fn fill(
    units: &[Unit<'_>],
    suffix_max: &[usize],
    i: usize,
    need: usize,
    current: BitSet,
    out: &mut Vec<BitSet>,
) {
    if i == units.len() {
        if need == 0 {
            out.push(current);
        }
        return;
    }
    let rest = suffix_max[i + 1];
    let feasible = |c: usize| c <= need && need - c <= rest;
    match units[i] {
        Unit::Free(pos) => {
            if feasible(0) {
                fill(units, suffix_max, i + 1, need, current.clone(), out);
            }
            if feasible(1) {
                fill(units, suffix_max, i + 1, need - 1, current.with(pos), out);
            }
        }
        Unit::Group(g, mask) => {
            let m = g.bs.len();
            for j in 0..=m {
                if !feasible(j) {
                    continue;
                }
                for combo in g.bs.iter().combinations(j) {
                    let mut next = current.clone();
                    for &b in combo {
                        next.insert(b);
                    }
                    fill(units, suffix_max, i + 1, need - j, next, out);
                }
            }
            if feasible(m + 1) {
                let mut next = current.union(mask);
                next.insert(g.a);
                fill(units, suffix_max, i + 1, need - m - 1, next, out);
            }
        }
    }
}

impl fmt::Display for MultivaluedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = self.groups.len() == 1;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match s {
                Symbol::Zero => f.write_str("0")?,
                Symbol::One => f.write_str("1")?,
                Symbol::Two => f.write_str("2")?,
                Symbol::A(_) if single => f.write_str("a")?,
                Symbol::B(_) if single => f.write_str("b")?,
                Symbol::A(g) => write!(f, "a{}", g + 1)?,
                Symbol::B(g) => write!(f, "b{}", g + 1)?,
            }
        }
        Ok(())
    }
}

impl FromStr for MultivaluedRow {
    type Err = Error;

    /// Parses the dump notation, e.g. `b2 b2 b1 a1 a2 0 0 0 0 0`. A bare
    /// `a`/`b` belongs to the unsubscripted group.
    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .split_whitespace()
            .map(|tok| {
                let bad = || Error::MalformedRow(format!("unknown symbol `{tok}`"));
                match tok {
                    "0" => Ok(Symbol::Zero),
                    "1" => Ok(Symbol::One),
                    "2" => Ok(Symbol::Two),
                    _ => {
                        let (head, sub) = tok.split_at(1);
                        let g = if sub.is_empty() {
                            0
                        } else {
                            sub.parse::<usize>().map_err(|_| bad())?
                        };
                        match head {
                            "a" => Ok(Symbol::A(g)),
                            "b" => Ok(Symbol::B(g)),
                            _ => Err(bad()),
                        }
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        MultivaluedRow::new(symbols)
    }
}

#[derive(Clone, Debug)]
pub struct CoalMine<'p> {
    poset: &'p Poset,
    rows: Vec<MultivaluedRow>,
}

impl<'p> CoalMine<'p> {
    /// Wraps externally supplied rows. Only widths are checked here; use
    /// [`CoalMine::verify`] for the disjointness and exactness laws.
    pub fn from_rows(poset: &'p Poset, rows: Vec<MultivaluedRow>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.width() != poset.len()) {
            return Err(Error::WidthMismatch {
                expected: poset.len(),
                found: r.width(),
            });
        }
        Ok(CoalMine { poset, rows })
    }

    pub fn poset(&self) -> &'p Poset {
        self.poset
    }

    pub fn rows(&self) -> &[MultivaluedRow] {
        &self.rows
    }

    pub fn cardinality(&self) -> BigUint {
        self.rows.iter().map(|r| r.cardinality()).sum()
    }

    /// `N_0 ..= N_n`.
    pub fn rank_profile(&self) -> Vec<BigUint> {
        let mut profile = vec![BigUint::zero(); self.poset.len() + 1];
        for r in &self.rows {
            for (acc, c) in profile.iter_mut().zip(r.rank_polynomial()) {
                *acc += c;
            }
        }
        profile
    }

    /// One row per line in dump notation.
    pub fn dump(&self) -> String {
        self.rows.iter().map(|r| format!("{r}\n")).collect()
    }

    /// Checks, by expansion, that rows are disjoint, consist of ideals, and
    /// cover every ideal (the last via the cardinality of the brute-force
    /// family supplied by the caller).
    pub fn verify(&self, ideal_count: &BigUint, cap: usize) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (i, r) in self.rows.iter().enumerate() {
            for x in r.expand(cap)? {
                if !self.poset.is_ideal(&x) {
                    return Err(Error::MalformedRow(format!("row {i} contains non-ideal {x}")));
                }
                if !seen.insert(x.clone()) {
                    return Err(Error::MalformedRow(format!("{x} occurs in two rows")));
                }
            }
        }
        if BigUint::from(seen.len()) != *ideal_count {
            return Err(Error::MalformedRow(format!(
                "rows cover {} ideals, expected {ideal_count}",
                seen.len()
            )));
        }
        Ok(())
    }
}

/// Compresses `Id(poset)` into disjoint multivalued rows.
///
/// The search keeps a partial row: positions forced out of the ideal, forced
/// in, and free. Membership on free positions only has to respect the order
/// induced on them. When that induced order is a disjoint union of points
/// and one-level down-stars, it is exactly one row (stars become `a b..b`
/// groups). Otherwise branch on an offending element `e`: either `e` and
/// everything above it is excluded, or `e` and everything below it is
/// included. The two branches are disjoint, so rows never overlap.
pub fn compress(poset: &Poset) -> CoalMine<'_> {
    let n = poset.len();
    let mut rows = Vec::new();
    let mut stack = vec![(BitSet::new(n), BitSet::full(n))];
    // Depth-first with the "excluded" branch explored first.
    while let Some((ones, free)) = stack.pop() {
        match pick_branch(poset, &free) {
            None => rows.push(emit_row(poset, &ones, &free)),
            Some(e) => {
                let mut above = poset.up(e).intersection(&free);
                above.insert(e);
                let mut below = poset.down(e).intersection(&free);
                below.insert(e);
                stack.push((ones.union(&below), free.difference(&below)));
                stack.push((ones.clone(), free.difference(&above)));
            }
        }
    }
    CoalMine { poset, rows }
}

/// Among free elements that sit in the middle of a 3-chain or below two
/// others, the one with the most comparabilities inside the free set.
fn pick_branch(poset: &Poset, free: &BitSet) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for e in free {
        let up = poset.up(e).intersection(free).len();
        if up == 0 {
            continue;
        }
        let down = poset.down(e).intersection(free).len();
        if down == 0 && up == 1 {
            continue;
        }
        let score = up + down;
        if best.is_none_or(|(s, _)| score > s) {
            best = Some((score, e));
        }
    }
    best.map(|(_, e)| e)
}

fn emit_row(poset: &Poset, ones: &BitSet, free: &BitSet) -> MultivaluedRow {
    let n = poset.len();
    let mut symbols = vec![Symbol::Zero; n];
    for i in ones {
        symbols[i] = Symbol::One;
    }
    let mut next_group = 0;
    for e in free {
        let below = poset.down(e).intersection(free);
        if below.is_empty() {
            if poset.up(e).intersects(free) {
                continue; // a `b`, filled in by its group
            }
            symbols[e] = Symbol::Two;
        } else {
            symbols[e] = Symbol::A(next_group);
            for b in &below {
                symbols[b] = Symbol::B(next_group);
            }
            next_group += 1;
        }
    }
    MultivaluedRow::new(symbols).expect("star decomposition yields well-formed groups")
}

/// Work estimate used for partitioning: members of size `k`, saturated.
pub fn predict_row_load(row: &MultivaluedRow, k: usize) -> u64 {
    row.rank_polynomial()
        .get(k)
        .map(|c| c.to_u64().unwrap_or(u64::MAX))
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{generate, PosetKind};

    pub(crate) const REFERENCE_ROWS: [&str; 7] = [
        "b2 b2 b1 a1 a2 0 0 0 0 0",
        "b 1 1 2 a 0 0 1 0 0",
        "b 1 1 1 a 0 1 2 0 0",
        "1 1 1 1 1 0 1 2 0 1",
        "1 b 1 2 a 1 0 0 0 0",
        "1 1 1 b 2 1 0 1 a 0",
        "1 1 1 1 b1 1 1 b2 a2 a1",
    ];

    fn row(i: usize) -> MultivaluedRow {
        REFERENCE_ROWS[i - 1].parse().unwrap()
    }

    fn bs(s: &str) -> BitSet {
        BitSet::from_bitstring(s).unwrap()
    }

    #[test]
    fn reference_row_cardinalities() {
        let sizes: Vec<BigUint> = (1..=7).map(|i| row(i).cardinality()).collect();
        let expected: Vec<BigUint> = [15u32, 6, 6, 2, 6, 6, 9].iter().map(|&v| v.into()).collect();
        assert_eq!(sizes, expected);
        assert_eq!(sizes.iter().sum::<BigUint>(), BigUint::from(50u32));
    }

    #[test]
    fn membership_examples() {
        let r2 = row(2);
        assert!(r2.contains(&bs("1111000100")).unwrap());
        assert!(!r2.contains(&bs("0110100100")).unwrap());
        assert!(matches!(
            r2.contains(&bs("111")),
            Err(Error::WidthMismatch { .. })
        ));
        let all_two: MultivaluedRow = "2 2 2 2".parse().unwrap();
        for m in 0..16u32 {
            let x = BitSet::from_elements(4, (0..4).filter(|i| m & (1 << i) != 0));
            assert!(all_two.contains(&x).unwrap());
        }
    }

    #[test]
    fn rank_polynomials() {
        let p6 = row(6).rank_polynomial();
        let expect: Vec<BigUint> = [0u32, 0, 0, 0, 0, 1, 2, 2, 1, 0, 0].iter().map(|&v| v.into()).collect();
        assert_eq!(p6, expect);
        let ones: MultivaluedRow = "1 1 1".parse().unwrap();
        assert_eq!(ones.rank_polynomial()[3], BigUint::one());
        assert_eq!(ones.cardinality(), BigUint::one());
        let twos: MultivaluedRow = "2 2 2".parse().unwrap();
        let coeffs: Vec<u32> = twos.rank_polynomial().iter().map(|c| c.to_u32().unwrap()).collect();
        assert_eq!(coeffs, vec![1, 3, 3, 1]);
    }

    #[test]
    fn sized_enumeration() {
        assert!(row(4).ideals_of_size(5).is_empty());
        let r5 = row(5).ideals_of_size(5);
        let as_sets: Vec<Vec<usize>> = r5.iter().map(|x| x.iter().map(|i| i + 1).collect()).collect();
        assert_eq!(as_sets, vec![vec![1, 2, 3, 5, 6], vec![1, 2, 3, 4, 6]]);
        let twos: MultivaluedRow = "2 2 2".parse().unwrap();
        let pairs = twos.ideals_of_size(2);
        assert_eq!(pairs.len(), 3);
        assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(predict_row_load(&row(4), 5), 0);
        assert_eq!(predict_row_load(&row(5), 5), 2);
        assert_eq!(predict_row_load(&row(6), 7), 2);
    }

    #[test]
    fn expansion() {
        assert_eq!(row(4).expand(DEFAULT_EXPAND_CAP).unwrap().len(), 2);
        let zeros: MultivaluedRow = "0 0 0".parse().unwrap();
        assert_eq!(zeros.expand(10).unwrap(), vec![BitSet::new(3)]);
        assert!(matches!(row(1).expand(10), Err(Error::ExpansionCap { .. })));
    }

    #[test]
    fn dump_round_trip() {
        for s in REFERENCE_ROWS {
            let r: MultivaluedRow = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("a b b a".parse::<MultivaluedRow>().is_err());
        assert!("b 0".parse::<MultivaluedRow>().is_err());
        assert!("a 0".parse::<MultivaluedRow>().is_err());
        assert!("3".parse::<MultivaluedRow>().is_err());
    }

    #[test]
    fn antichain_is_one_all_two_row() {
        let p = generate(&PosetKind::Antichain(100)).unwrap();
        let mine = compress(&p);
        assert_eq!(mine.rows().len(), 1);
        assert!(mine.rows()[0].symbols().iter().all(|s| *s == Symbol::Two));
        assert_eq!(mine.cardinality(), BigUint::one() << 100);
    }

    #[test]
    fn two_chain() {
        let p = generate(&PosetKind::Chain(2)).unwrap();
        let mine = compress(&p);
        assert_eq!(mine.cardinality(), BigUint::from(3u32));
        let mut all: Vec<String> = mine
            .rows()
            .iter()
            .flat_map(|r| r.expand(10).unwrap())
            .map(|x| x.to_bitstring())
            .collect();
        all.sort();
        assert_eq!(all, vec!["00", "10", "11"]);
    }

    #[test]
    fn chain_profile_is_flat() {
        let p = generate(&PosetKind::Chain(7)).unwrap();
        let profile = compress(&p).rank_profile();
        assert!(profile.iter().all(|c| c.is_one()));
    }
}
