use std::collections::HashSet;

use super::Poset;
use crate::bits::{BitSet, IdealKey};
use crate::error::{Error, Result};

/// Recovers the poset whose ideal family is `family`: `a <= b` iff every
/// member containing `b` also contains `a`. Elements get labels `1..=n`.
pub fn poset_from_ideal_family(family: &[IdealKey]) -> Result<Poset> {
    let Some(first) = family.first() else {
        return Err(Error::NotAnIdealFamily("empty family".into()));
    };
    let n = first.width();
    if let Some(bad) = family.iter().find(|x| x.width() != n) {
        return Err(Error::WidthMismatch {
            expected: n,
            found: bad.width(),
        });
    }
    let members: HashSet<&BitSet> = family.iter().collect();
    if !members.contains(&BitSet::new(n)) {
        return Err(Error::NotAnIdealFamily("missing the empty set".into()));
    }
    if !members.contains(&BitSet::full(n)) {
        return Err(Error::NotAnIdealFamily("missing the full set".into()));
    }
    for x in &members {
        for y in &members {
            if !members.contains(&x.union(y)) {
                return Err(Error::NotAnIdealFamily(format!("not union-closed at {x:?}, {y:?}")));
            }
            if !members.contains(&x.intersection(y)) {
                return Err(Error::NotAnIdealFamily(format!(
                    "not intersection-closed at {x:?}, {y:?}"
                )));
            }
        }
    }

    // below[b] = intersection of all members containing b
    let mut below = vec![BitSet::full(n); n];
    for x in &members {
        for b in x.iter() {
            below[b].intersect_with(x);
        }
    }
    let mut relations = Vec::new();
    for b in 0..n {
        for a in below[b].iter().filter(|&a| a != b) {
            if below[a].contains(b) {
                return Err(Error::NotAnIdealFamily(format!(
                    "elements {} and {} are inseparable",
                    a + 1,
                    b + 1
                )));
            }
            relations.push((a, b));
        }
    }
    Poset::with_numeric_labels(n, &relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitSet {
        BitSet::from_bitstring(s).unwrap()
    }

    #[test]
    fn two_chain_from_its_ideals() {
        let p = poset_from_ideal_family(&[bs("00"), bs("10"), bs("11")]).unwrap();
        assert_eq!(p.covers(), &[(0, 1)]);
    }

    #[test]
    fn power_set_gives_antichain() {
        let fam: Vec<BitSet> = (0..8u32)
            .map(|m| BitSet::from_elements(3, (0..3).filter(|i| m & (1 << i) != 0)))
            .collect();
        let p = poset_from_ideal_family(&fam).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.covers().is_empty());
    }

    #[test]
    fn rejects_non_families() {
        assert!(poset_from_ideal_family(&[bs("00"), bs("10")]).is_err());
        assert!(poset_from_ideal_family(&[bs("00"), bs("10"), bs("01"), bs("11")][1..]).is_err());
        // union-closed but not intersection-closed
        let fam = [bs("000"), bs("110"), bs("011"), bs("111")];
        assert!(matches!(
            poset_from_ideal_family(&fam),
            Err(Error::NotAnIdealFamily(_))
        ));
        // lattice of sets, but 1 and 2 are inseparable
        assert!(poset_from_ideal_family(&[bs("00"), bs("11")]).is_err());
    }
}
