#![allow(dead_code)]

use linext::exact::parse_rational;
use linext::{parse_poset, Penalties, Poset, ScheduleSpec, Window};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub const P0_TEXT: &str = include_str!("../../../../fixtures/p0.poset");
pub const P0_EXPECTED: &str = include_str!("../../../../fixtures/p0.expected.json");

pub fn p0() -> Poset {
    parse_poset(P0_TEXT).unwrap()
}

pub fn p0_expected() -> Value {
    serde_json::from_str(P0_EXPECTED).unwrap()
}

pub fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

/// Ideal given by comma-separated labels.
pub fn labels(p: &Poset, list: &str) -> linext::BitSet {
    let idx: Vec<usize> = list.split(',').map(|l| p.index_of(l).unwrap()).collect();
    linext::BitSet::from_elements(p.len(), idx)
}

/// Nonnegative penalties `num/den` with small terms on every incomparable
/// ordered pair; zero is included on purpose.
pub fn random_penalties(p: &Poset, rng: &mut ChaCha8Rng) -> Penalties {
    let mut pen = Penalties::unit(p.len());
    for a in 0..p.len() {
        for b in 0..p.len() {
            if a != b && !p.comparable(a, b) {
                let num: i64 = rng.random_range(0..10);
                let den: i64 = rng.random_range(1..5);
                pen.set(p, a, b, BigRational::new(BigInt::from(num), BigInt::from(den)))
                    .unwrap();
            }
        }
    }
    pen
}

/// Random half-integer durations with windows wide enough that a fair
/// share of instances stay feasible; some are unbounded above.
pub fn random_windows(p: &Poset, rng: &mut ChaCha8Rng) -> ScheduleSpec {
    let n = p.len();
    let mut spec = ScheduleSpec::new(n);
    let halves: Vec<i64> = (0..n).map(|_| rng.random_range(1..5i64)).collect();
    let total: i64 = halves.iter().sum();
    for (a, &h) in halves.iter().enumerate() {
        let lo = rng.random_range(0..=total / 3);
        let hi = if rng.random_bool(0.25) {
            None
        } else {
            let span = rng.random_range(total / 3..=total);
            Some(BigRational::new(BigInt::from(lo + span), BigInt::from(2)))
        };
        let window = Window {
            lo: BigRational::new(BigInt::from(lo), BigInt::from(2)),
            hi,
        };
        spec.set(a, BigRational::new(BigInt::from(h), BigInt::from(2)), window).unwrap();
    }
    spec
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
