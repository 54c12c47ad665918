//! Rank statistics of a random linear extension, in exact arithmetic.
//!
//! All recursions are kept free of denominators: instead of average ranks
//! the passes carry rank sums `s(X, a) = e(X) avr(X, a)`, and instead of
//! probabilities they carry extension counts. Division happens once, at
//! the top ideal.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::IdealKey;
use crate::checkpoint::Codec;
use crate::coalmine::CoalMine;
use crate::error::{Error, Result};
use crate::exact::ratio;
use crate::extcount::count_with_mine;
use crate::levelpass::{run_pass, PassAlgebra, PassConfig};
use crate::poset::Poset;

/// `e(X)` and the rank sums `s(X, a)` for the members `a` of `X`, in
/// ascending element order.
#[derive(Clone, Debug, PartialEq)]
pub struct RankSumPayload {
    pub e: BigUint,
    pub s: Vec<BigUint>,
}

impl Codec for RankSumPayload {
    fn encode(&self, out: &mut Vec<u8>) {
        self.e.encode(out);
        self.s.encode(out);
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(RankSumPayload {
            e: BigUint::decode(input)?,
            s: Vec::decode(input)?,
        })
    }
}

pub struct RankSumAlgebra;

impl PassAlgebra for RankSumAlgebra {
    type Payload = RankSumPayload;

    fn tag(&self) -> String {
        "ranksum".into()
    }

    fn empty(&self) -> RankSumPayload {
        RankSumPayload {
            e: BigUint::one(),
            s: Vec::new(),
        }
    }

    fn combine(&self, x: &IdealKey, covers: &[(usize, &RankSumPayload)], _poset: &Poset) -> RankSumPayload {
        let size = x.len();
        let e = covers.iter().map(|(_, p)| &p.e).sum();
        let s = x
            .iter()
            .enumerate()
            .map(|(rank, a)| {
                let mut acc = BigUint::zero();
                for &(c, below) in covers {
                    if c == a {
                        // extensions ending in `a` put it at position |X|
                        acc += &below.e * size;
                    } else {
                        let in_below = if c < a { rank - 1 } else { rank };
                        acc += &below.s[in_below];
                    }
                }
                acc
            })
            .collect();
        RankSumPayload { e, s }
    }
}

/// `avr(P, a)` for every element, in element order.
pub fn average_ranks(mine: &CoalMine<'_>, config: &PassConfig) -> Result<Vec<BigRational>> {
    let top = run_pass(mine, &RankSumAlgebra, config)?;
    let p = &top.payloads()[0];
    Ok(p.s.iter().map(|s| ratio(s, &p.e)).collect())
}

/// `e(X)` and, when the tracked element is in `X`, `e(X | a, k)` for
/// `k = 1..=|X|`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankCountPayload {
    pub e: BigUint,
    pub by_position: Vec<BigUint>,
}

impl Codec for RankCountPayload {
    fn encode(&self, out: &mut Vec<u8>) {
        self.e.encode(out);
        self.by_position.encode(out);
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(RankCountPayload {
            e: BigUint::decode(input)?,
            by_position: Vec::decode(input)?,
        })
    }
}

pub struct RankCountAlgebra {
    pub element: usize,
}

impl PassAlgebra for RankCountAlgebra {
    type Payload = RankCountPayload;

    fn tag(&self) -> String {
        format!("rankdist-{}", self.element)
    }

    fn empty(&self) -> RankCountPayload {
        RankCountPayload {
            e: BigUint::one(),
            by_position: Vec::new(),
        }
    }

    fn combine(&self, x: &IdealKey, covers: &[(usize, &RankCountPayload)], _poset: &Poset) -> RankCountPayload {
        let e = covers.iter().map(|(_, p)| &p.e).sum();
        let a = self.element;
        if !x.contains(a) {
            return RankCountPayload {
                e,
                by_position: Vec::new(),
            };
        }
        let size = x.len();
        let mut by_position = vec![BigUint::zero(); size];
        for &(c, below) in covers {
            if c == a {
                by_position[size - 1] += &below.e;
            } else {
                for (slot, v) in by_position.iter_mut().zip(&below.by_position) {
                    *slot += v;
                }
            }
        }
        RankCountPayload { e, by_position }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankDistribution {
    pub element: usize,
    /// `counts[k - 1] = e(P | a, k)`.
    pub counts: Vec<BigUint>,
    pub total: BigUint,
}

impl RankDistribution {
    /// `p_a(k)` for `k = 1..=n`.
    pub fn probabilities(&self) -> Vec<BigRational> {
        self.counts.iter().map(|c| ratio(c, &self.total)).collect()
    }

    /// `sum k p_a(k)`.
    pub fn mean(&self) -> BigRational {
        let weighted: BigUint = self
            .counts
            .iter()
            .enumerate()
            .map(|(i, c)| c * (i + 1))
            .sum();
        ratio(&weighted, &self.total)
    }
}

pub fn rank_distribution(mine: &CoalMine<'_>, element: usize, config: &PassConfig) -> Result<RankDistribution> {
    let n = mine.poset().len();
    if element >= n {
        return Err(Error::InvalidParameter(format!("element {element} out of range")));
    }
    let top = run_pass(mine, &RankCountAlgebra { element }, config)?;
    let p = top.payloads()[0].clone();
    Ok(RankDistribution {
        element,
        counts: p.by_position,
        total: p.e,
    })
}

/// Checks `avr(P, a) = sum k p_a(k)` exactly.
pub fn verify_rank_identity(mine: &CoalMine<'_>, element: usize, config: &PassConfig) -> Result<bool> {
    let avr = average_ranks(mine, config)?;
    let dist = rank_distribution(mine, element, config)?;
    Ok(avr[element] == dist.mean())
}

/// `e(X)` and, once both tracked elements are in `X`, `e(X, a, b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecedencePayload {
    pub e: BigUint,
    pub before: Option<BigUint>,
}

impl Codec for PrecedencePayload {
    fn encode(&self, out: &mut Vec<u8>) {
        self.e.encode(out);
        self.before.encode(out);
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(PrecedencePayload {
            e: BigUint::decode(input)?,
            before: Option::decode(input)?,
        })
    }
}

pub struct PrecedenceAlgebra {
    pub a: usize,
    pub b: usize,
}

impl PassAlgebra for PrecedenceAlgebra {
    type Payload = PrecedencePayload;

    fn tag(&self) -> String {
        format!("prec-{}-{}", self.a, self.b)
    }

    fn empty(&self) -> PrecedencePayload {
        PrecedencePayload {
            e: BigUint::one(),
            before: None,
        }
    }

    fn combine(&self, x: &IdealKey, covers: &[(usize, &PrecedencePayload)], _poset: &Poset) -> PrecedencePayload {
        let e = covers.iter().map(|(_, p)| &p.e).sum();
        if !(x.contains(self.a) && x.contains(self.b)) {
            return PrecedencePayload { e, before: None };
        }
        let mut before = BigUint::zero();
        for &(c, below) in covers {
            if c == self.a {
                // ends in a: a comes after b
            } else if c == self.b {
                before += &below.e;
            } else {
                before += below.before.as_ref().expect("both tracked elements lie in the cover");
            }
        }
        PrecedencePayload {
            e,
            before: Some(before),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Precedence {
    /// `e(P, a, b)`: extensions with `a` before `b`.
    pub count: BigUint,
    pub total: BigUint,
}

impl Precedence {
    /// `p(a, b)`.
    pub fn probability(&self) -> BigRational {
        ratio(&self.count, &self.total)
    }
}

pub fn precedence_count(mine: &CoalMine<'_>, a: usize, b: usize, config: &PassConfig) -> Result<Precedence> {
    let poset = mine.poset();
    let n = poset.len();
    if a >= n || b >= n {
        return Err(Error::InvalidParameter(format!("pair ({a}, {b}) out of range")));
    }
    if a == b {
        return Err(Error::InvalidParameter("precedence needs two distinct elements".into()));
    }
    if poset.less(a, b) {
        let total = count_with_mine(mine, config)?;
        return Ok(Precedence {
            count: total.clone(),
            total,
        });
    }
    if poset.less(b, a) {
        let total = count_with_mine(mine, config)?;
        return Ok(Precedence {
            count: BigUint::zero(),
            total,
        });
    }
    let top = run_pass(mine, &PrecedenceAlgebra { a, b }, config)?;
    let p = &top.payloads()[0];
    Ok(Precedence {
        count: p.before.clone().expect("top ideal holds both elements"),
        total: p.e.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Some pair has `1/3 < p(a, b) < 2/3`.
    Confirmed,
    /// The best balance is exactly `1/3`.
    Boundary,
    /// No pair reaches `1/3`.
    Violation,
    /// A chain: no incomparable pair exists.
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Confirmed => "CONFIRMED",
            Verdict::Boundary => "BOUNDARY",
            Verdict::Violation => "VIOLATION",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    /// Most balanced incomparable pair `(a, b)`, `a < b` as indices.
    pub pair: Option<(usize, usize)>,
    /// `p(a, b)` for that pair.
    pub probability: Option<BigRational>,
    /// `min(p, 1 - p)` for that pair.
    pub balance: Option<BigRational>,
    pub verdict: Verdict,
}

/// Searches all incomparable pairs for the most balanced `p(a, b)`.
pub fn one_third_two_thirds_scan(mine: &CoalMine<'_>, config: &PassConfig) -> Result<BalanceReport> {
    let poset = mine.poset();
    let n = poset.len();
    let mut best: Option<((usize, usize), BigRational, BigRational)> = None;
    for a in 0..n {
        for b in a + 1..n {
            if poset.comparable(a, b) {
                continue;
            }
            let p = precedence_count(mine, a, b, config)?.probability();
            let q = BigRational::one() - &p;
            let balance = if p < q { p.clone() } else { q };
            if best.as_ref().is_none_or(|(_, _, m)| balance > *m) {
                best = Some(((a, b), p, balance));
            }
        }
    }
    let Some((pair, p, balance)) = best else {
        return Ok(BalanceReport {
            pair: None,
            probability: None,
            balance: None,
            verdict: Verdict::NotApplicable,
        });
    };
    let third = BigRational::new(1.into(), 3.into());
    let verdict = if balance > third {
        Verdict::Confirmed
    } else if balance == third {
        Verdict::Boundary
    } else {
        Verdict::Violation
    };
    Ok(BalanceReport {
        pair: Some(pair),
        probability: Some(p),
        balance: Some(balance),
        verdict,
    })
}
