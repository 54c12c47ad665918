//! Poset zoo for tests and benchmarks.
//!
//! Seeded generators use ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! so a `(kind, params, seed)` triple always yields the same poset.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poset;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum PosetKind {
    Antichain(usize),
    Chain(usize),
    /// Nonempty proper subsets of an `m`-set under inclusion.
    BooleanTrimmed(usize),
    /// `levels` levels of `width` elements; every element above the bottom
    /// level gets exactly `lower_covers` distinct lower covers drawn
    /// uniformly from the level below.
    Thin {
        levels: usize,
        width: usize,
        lower_covers: usize,
        seed: u64,
    },
    /// Each pair is related independently with probability `density`,
    /// under a random relabelling.
    Random { n: usize, density: f64, seed: u64 },
}

pub fn generate(kind: &PosetKind) -> Result<Poset> {
    match *kind {
        PosetKind::Antichain(n) => Poset::with_numeric_labels(n, &[]),
        PosetKind::Chain(n) => {
            let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Poset::with_numeric_labels(n, &rel)
        }
        PosetKind::BooleanTrimmed(m) => boolean_trimmed(m),
        PosetKind::Thin {
            levels,
            width,
            lower_covers,
            seed,
        } => thin(levels, width, lower_covers, seed),
        PosetKind::Random { n, density, seed } => random(n, density, seed),
    }
}

fn boolean_trimmed(m: usize) -> Result<Poset> {
    if m == 0 || m > 16 {
        return Err(Error::InvalidParameter(format!(
            "boolean_trimmed needs 1 <= m <= 16, got {m}"
        )));
    }
    let full = (1u32 << m) - 1;
    let mut subsets: Vec<u32> = (1..full).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let mut pos = vec![usize::MAX; full as usize + 1];
    for (i, &s) in subsets.iter().enumerate() {
        pos[s as usize] = i;
    }
    let labels = subsets
        .iter()
        .map(|&s| {
            (0..m)
                .filter(|b| s & (1 << b) != 0)
                .map(|b| (b + 1).to_string())
                .collect::<Vec<_>>()
                .join("_")
        })
        .collect();
    let mut relations = Vec::new();
    for &s in &subsets {
        for b in 0..m {
            let t = s | (1 << b);
            if t != s && t != full {
                relations.push((pos[s as usize], pos[t as usize]));
            }
        }
    }
    Poset::from_relations(labels, &relations)
}

fn thin(levels: usize, width: usize, lower_covers: usize, seed: u64) -> Result<Poset> {
    if width == 0 || lower_covers > width {
        return Err(Error::InvalidParameter(format!(
            "thin needs width >= 1 and lower_covers <= width, got width={width}, lower_covers={lower_covers}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relations = Vec::new();
    for level in 1..levels {
        for j in 0..width {
            let child = level * width + j;
            let mut parents = sample(&mut rng, width, lower_covers).into_vec();
            parents.sort_unstable();
            for p in parents {
                relations.push(((level - 1) * width + p, child));
            }
        }
    }
    Poset::with_numeric_labels(levels * width, &relations)
}

fn random(n: usize, density: f64, seed: u64) -> Result<Poset> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!(
            "density must lie in [0, 1], got {density}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                relations.push((perm[i], perm[j]));
            }
        }
    }
    Poset::with_numeric_labels(n, &relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_and_chain() {
        let a = generate(&PosetKind::Antichain(3)).unwrap();
        assert_eq!(a.len(), 3);
        assert!(a.covers().is_empty());
        let c = generate(&PosetKind::Chain(4)).unwrap();
        assert!(c.is_chain());
        assert_eq!(c.covers().len(), 3);
    }

    #[test]
    fn boolean_trimmed_six() {
        let p = generate(&PosetKind::BooleanTrimmed(6)).unwrap();
        assert_eq!(p.len(), 62);
        // every k-subset (1 < k < 5) has k lower and 6-k upper covers
        let singletons = (0..62).filter(|&a| p.lower_covers(a).is_empty()).count();
        assert_eq!(singletons, 6);
        let covers: usize = (0..62).map(|a| p.upper_covers(a).len()).sum();
        // pairs (S, S+x) with 1 <= |S| and |S+x| <= 5
        assert_eq!(covers, 6 * 32 - 6 - 6);
        assert!(generate(&PosetKind::BooleanTrimmed(0)).is_err());
    }

    #[test]
    fn thin_has_exact_lower_cover_counts() {
        let kind = PosetKind::Thin {
            levels: 45,
            width: 4,
            lower_covers: 2,
            seed: 7,
        };
        let p = generate(&kind).unwrap();
        assert_eq!(p.len(), 180);
        for a in 0..180 {
            let expected = if a < 4 { 0 } else { 2 };
            assert_eq!(p.lower_covers(a).len(), expected, "element {a}");
        }
        let q = generate(&kind).unwrap();
        assert_eq!(p.covers(), q.covers());
        let bad = PosetKind::Thin {
            levels: 3,
            width: 2,
            lower_covers: 3,
            seed: 0,
        };
        assert!(matches!(generate(&bad), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn random_is_reproducible() {
        let k = PosetKind::Random {
            n: 9,
            density: 0.3,
            seed: 11,
        };
        assert_eq!(generate(&k).unwrap().covers(), generate(&k).unwrap().covers());
        assert!(generate(&PosetKind::Random {
            n: 3,
            density: 1.5,
            seed: 0
        })
        .is_err());
    }
}
