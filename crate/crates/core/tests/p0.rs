mod common;

use common::{labels, p0, p0_expected, q};
use linext::extcount::CountAlgebra;
use linext::levelpass::lower_covers;
use linext::oracle::Oracle;
use linext::poset::poset_from_ideal_family;
use linext::*;
use num_bigint::BigUint;

const REFERENCE_ROWS: [&str; 7] = [
    "b2 b2 b1 a1 a2 0 0 0 0 0",
    "b 1 1 2 a 0 0 1 0 0",
    "b 1 1 1 a 0 1 2 0 0",
    "1 1 1 1 1 0 1 2 0 1",
    "1 b 1 2 a 1 0 0 0 0",
    "1 1 1 b 2 1 0 1 a 0",
    "1 1 1 1 b1 1 1 b2 a2 a1",
];

fn big(s: &str) -> BigUint {
    s.parse().unwrap()
}

fn cfg() -> PassConfig {
    PassConfig::with_workers(2)
}

#[test]
fn fixture_is_the_table_expansion() {
    let mut family = Vec::new();
    for r in REFERENCE_ROWS {
        let row: MultivaluedRow = r.parse().unwrap();
        family.extend(row.expand(100).unwrap());
    }
    family.sort();
    family.dedup();
    assert_eq!(family.len(), 50);
    let rebuilt = poset_from_ideal_family(&family).unwrap();
    assert_eq!(rebuilt.to_text(), p0().to_text());
    assert_eq!(Oracle::default().brute_ideals(&rebuilt).unwrap(), family);
}

#[test]
fn cover_facts() {
    let p = p0();
    let two = p.index_of("2").unwrap();
    let eight = p.index_of("8").unwrap();
    assert!(p.upper_covers(two).contains(eight));
    let one = p.index_of("1").unwrap();
    assert!(!p.upper_covers(one).intersects(&labels(&p, "1,2,3,4,8")));
}

#[test]
fn mine_and_profile() {
    let p = p0();
    let mine = compress(&p);
    let expected = p0_expected();
    assert_eq!(mine.cardinality(), big(expected["ideals"].as_str().unwrap()));
    let profile: Vec<BigUint> = expected["profile"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| big(v.as_str().unwrap()))
        .collect();
    assert_eq!(mine.rank_profile(), profile);
    assert_eq!(profile[4], BigUint::from(7u32));
    mine.verify(&BigUint::from(50u32), 1000).unwrap();

    let table_total: BigUint = REFERENCE_ROWS
        .iter()
        .map(|r| r.parse::<MultivaluedRow>().unwrap().cardinality())
        .sum();
    assert_eq!(table_total, BigUint::from(50u32));
}

#[test]
fn extension_count() {
    let p = p0();
    assert_eq!(count_linear_extensions(&p, &cfg()).unwrap(), big("2212"));
    assert_eq!(count_with_mine(&compress(&p), &cfg()).unwrap(), big("2212"));
}

#[test]
fn level_four_table() {
    let p = p0();
    let mine = compress(&p);
    let mut level4 = None;
    run_pass_observed(&mine, &CountAlgebra, &cfg(), |t| {
        if t.level() == 4 {
            level4 = Some(t.clone());
        }
    })
    .unwrap();
    let level4 = level4.unwrap();
    let expected = p0_expected();
    let rows = expected["level4"].as_array().unwrap();
    assert_eq!(level4.len(), rows.len());
    for ((key, e), row) in level4.iter().zip(rows) {
        assert_eq!(*key, labels(&p, row[0].as_str().unwrap()));
        assert_eq!(*e, big(row[1].as_str().unwrap()));
    }
}

#[test]
fn counts_for_ideals() {
    let p = p0();
    for pair in p0_expected()["ideal_counts"].as_array().unwrap() {
        let x = labels(&p, pair[0].as_str().unwrap());
        assert_eq!(count_for_ideal(&p, &x, &cfg()).unwrap(), big(pair[1].as_str().unwrap()));
    }
}

#[test]
fn lower_covers_of_five_element_ideals() {
    let p = p0();
    let removed = |x: &str| -> Vec<String> {
        lower_covers(&p, &labels(&p, x))
            .unwrap()
            .into_iter()
            .map(|(a, _)| p.label(a).to_string())
            .collect()
    };
    assert_eq!(removed("1,2,3,5,6"), ["5", "6"]);
    assert_eq!(removed("1,2,3,4,6"), ["2", "4", "6"]);
}

#[test]
fn rank_statistics() {
    let p = p0();
    let mine = compress(&p);
    let expected = p0_expected();
    let avr: Vec<_> = expected["avr"].as_array().unwrap().iter().map(|v| q(v.as_str().unwrap())).collect();
    assert_eq!(average_ranks(&mine, &cfg()).unwrap(), avr);

    let two = p.index_of("2").unwrap();
    let dist = rank_distribution(&mine, two, &cfg()).unwrap();
    let counts: Vec<_> = expected["rankdist_2"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| big(v.as_str().unwrap()))
        .collect();
    assert_eq!(dist.counts, counts);
    assert_eq!(dist.mean(), avr[two]);

    let scan = one_third_two_thirds_scan(&mine, &cfg()).unwrap();
    let (a, b) = scan.pair.unwrap();
    assert_eq!((p.label(a), p.label(b)), ("6", "8"));
    assert_eq!(scan.balance.unwrap(), q(expected["scan13"]["balance"].as_str().unwrap()));
    assert_eq!(scan.verdict, Verdict::Confirmed);
}

#[test]
fn unit_jump_number() {
    let p = p0();
    let r = jump_number(&p, &Penalties::unit(p.len()), &cfg()).unwrap();
    assert_eq!(r.value, q(p0_expected()["jump_unit"].as_str().unwrap()));
    assert_eq!(jump_cost(&p, &r.extension, &Penalties::unit(p.len())).unwrap(), r.value);
}

#[test]
fn oracle_agrees_on_p0() {
    let p = p0();
    let o = Oracle::default();
    assert_eq!(o.brute_count(&p).unwrap(), big("2212"));
    assert_eq!(o.brute_ideals(&p).unwrap().len(), 50);
}
