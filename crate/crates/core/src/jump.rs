//! Weighted jump number.
//!
//! For an ideal `X` and a maximal `b ∈ X`, `j(X, b)` is the cheapest jump
//! cost of a linear extension of `X` ending in `b`. With `Y = X \ {b}`, the
//! previous element `c` is some maximal element of `Y`; the step `c -> b`
//! is free when `b` covers `c` and costs `pen(c, b)` otherwise. The minimiser
//! `c` is kept as a witness so that an optimal extension can be walked back
//! from the top ideal.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::IdealKey;
use crate::checkpoint::Codec;
use crate::coalmine::{compress, CoalMine};
use crate::error::{Error, Result};
use crate::exact::parse_rational;
use crate::levelpass::{run_pass_observed, PassAlgebra, PassConfig};
use crate::poset::Poset;

/// Penalties on ordered incomparable pairs; unspecified pairs cost 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Penalties {
    n: usize,
    explicit: HashMap<(usize, usize), BigRational>,
    default: BigRational,
}

impl Penalties {
    /// Every jump costs 1: the ordinary jump number.
    pub fn unit(n: usize) -> Self {
        Penalties {
            n,
            explicit: HashMap::new(),
            default: BigRational::one(),
        }
    }

    pub fn set(&mut self, poset: &Poset, a: usize, b: usize, value: BigRational) -> Result<()> {
        if a >= self.n || b >= self.n {
            return Err(Error::InvalidParameter(format!("penalty pair ({a}, {b}) out of range")));
        }
        if poset.comparable(a, b) {
            return Err(Error::InvalidParameter(format!(
                "penalty pair `{} {}` is comparable",
                poset.label(a),
                poset.label(b)
            )));
        }
        if value.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "penalty for `{} {}` is negative",
                poset.label(a),
                poset.label(b)
            )));
        }
        self.explicit.insert((a, b), value);
        Ok(())
    }

    pub fn get(&self, a: usize, b: usize) -> &BigRational {
        self.explicit.get(&(a, b)).unwrap_or(&self.default)
    }

    /// All penalties multiplied by `factor`.
    pub fn scaled(&self, factor: &BigRational) -> Self {
        Penalties {
            n: self.n,
            explicit: self.explicit.iter().map(|(k, v)| (*k, v * factor)).collect(),
            default: &self.default * factor,
        }
    }

    /// Parses lines `x y value`; `#` starts a comment.
    pub fn parse(poset: &Poset, text: &str) -> Result<Self> {
        let mut pen = Penalties::unit(poset.len());
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [x, y, v] = fields[..] else {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("expected `x y value`, found `{line}`"),
                });
            };
            let a = poset.index_of(x)?;
            let b = poset.index_of(y)?;
            let value = parse_rational(v).map_err(|e| Error::Parse {
                line: lineno + 1,
                message: e.to_string(),
            })?;
            pen.set(poset, a, b, value)?;
        }
        Ok(pen)
    }
}

/// Cost of the extension `order`: penalties of its non-cover steps.
pub fn jump_cost(poset: &Poset, order: &[usize], pen: &Penalties) -> Result<BigRational> {
    check_linear_extension(poset, order)?;
    let mut total = BigRational::zero();
    for w in order.windows(2) {
        if !poset.covered_by(w[0], w[1]) {
            total += pen.get(w[0], w[1]);
        }
    }
    Ok(total)
}

pub fn check_linear_extension(poset: &Poset, order: &[usize]) -> Result<()> {
    let n = poset.len();
    if order.len() != n {
        return Err(Error::NotALinearExtension(format!(
            "{} elements given, poset has {n}",
            order.len()
        )));
    }
    let mut placed = poset.empty_set();
    for &a in order {
        if a >= n || placed.contains(a) {
            return Err(Error::NotALinearExtension(format!("element {a} repeated or out of range")));
        }
        if !poset.down(a).is_subset(&placed) {
            return Err(Error::NotALinearExtension(format!(
                "`{}` placed before one of its predecessors",
                poset.label(a)
            )));
        }
        placed.insert(a);
    }
    Ok(())
}

/// `j(X, b)` and its witness for one maximal element `b` of an ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpEntry {
    pub last: usize,
    pub cost: BigRational,
    /// Element preceding `last` in an optimal extension; `None` for singletons.
    pub previous: Option<usize>,
}

impl Codec for JumpEntry {
    fn encode(&self, out: &mut Vec<u8>) {
        self.last.encode(out);
        self.cost.encode(out);
        self.previous.encode(out);
    }
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(JumpEntry {
            last: usize::decode(input)?,
            cost: BigRational::decode(input)?,
            previous: Option::<usize>::decode(input)?,
        })
    }
}

/// One entry per maximal element, ascending.
pub type JumpPayload = Vec<JumpEntry>;

pub struct JumpAlgebra<'a> {
    pub penalties: &'a Penalties,
}

impl PassAlgebra for JumpAlgebra<'_> {
    type Payload = JumpPayload;

    fn tag(&self) -> String {
        "jump".into()
    }

    fn empty(&self) -> JumpPayload {
        Vec::new()
    }

    fn combine(&self, _x: &IdealKey, covers: &[(usize, &JumpPayload)], poset: &Poset) -> JumpPayload {
        covers
            .iter()
            .map(|&(b, below)| {
                let mut best: Option<(BigRational, usize)> = None;
                for entry in below {
                    let c = entry.last;
                    let cost = if poset.covered_by(c, b) {
                        entry.cost.clone()
                    } else {
                        // consecutive elements of an extension are a cover or incomparable
                        debug_assert!(!poset.comparable(c, b));
                        &entry.cost + self.penalties.get(c, b)
                    };
                    // `below` is ascending, so strict `<` keeps the smallest `c` on ties
                    if best.as_ref().is_none_or(|(v, _)| cost < *v) {
                        best = Some((cost, c));
                    }
                }
                match best {
                    Some((cost, c)) => JumpEntry {
                        last: b,
                        cost,
                        previous: Some(c),
                    },
                    None => JumpEntry {
                        last: b,
                        cost: BigRational::zero(),
                        previous: None,
                    },
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpResult {
    pub value: BigRational,
    /// An optimal linear extension.
    pub extension: Vec<usize>,
}

struct WitnessLevel {
    keys: Vec<IdealKey>,
    choices: Vec<Vec<(usize, Option<usize>)>>,
}

/// `j(P)` under `pen` together with an extension attaining it.
pub fn weighted_jump_number(mine: &CoalMine<'_>, pen: &Penalties, config: &PassConfig) -> Result<JumpResult> {
    let poset = mine.poset();
    if poset.is_empty() {
        return Err(Error::InvalidParameter("jump number of the empty poset".into()));
    }
    let alg = JumpAlgebra { penalties: pen };
    // walking back needs every level, so resuming from a checkpoint is not possible
    let config = config.without_checkpoint();
    let mut witnesses: Vec<WitnessLevel> = Vec::with_capacity(poset.len() + 1);
    let top = run_pass_observed(mine, &alg, &config, |table| {
        witnesses.push(WitnessLevel {
            keys: table.keys().to_vec(),
            choices: table
                .payloads()
                .iter()
                .map(|p| p.iter().map(|e| (e.last, e.previous)).collect())
                .collect(),
        });
    })?;

    let entries = &top.payloads()[0];
    let mut best = &entries[0];
    for e in &entries[1..] {
        if e.cost < best.cost {
            best = e;
        }
    }
    let value = best.cost.clone();

    let mut order = Vec::with_capacity(poset.len());
    let mut x = poset.full_set();
    let mut last = Some(best.last);
    while let Some(b) = last {
        order.push(b);
        let level = &witnesses[x.len()];
        let i = level.keys.binary_search(&x).expect("witness level holds every ideal");
        last = level.choices[i]
            .iter()
            .find(|(m, _)| *m == b)
            .expect("witness recorded for each maximal element")
            .1;
        x.remove(b);
    }
    order.reverse();
    debug_assert!(x.is_empty());
    Ok(JumpResult {
        value,
        extension: order,
    })
}

/// Convenience wrapper that compresses `poset` first.
pub fn jump_number(poset: &Poset, pen: &Penalties, config: &PassConfig) -> Result<JumpResult> {
    weighted_jump_number(&compress(poset), pen, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{generate, parse_poset, PosetKind};

    fn vee() -> Poset {
        parse_poset("elements: a,b,c\na < b").unwrap()
    }

    fn cfg() -> PassConfig {
        PassConfig::with_workers(2)
    }

    #[test]
    fn chain_has_no_jumps() {
        let p = generate(&PosetKind::Chain(6)).unwrap();
        let r = jump_number(&p, &Penalties::unit(6), &cfg()).unwrap();
        assert!(r.value.is_zero());
        assert_eq!(r.extension, (0..6).collect::<Vec<_>>());
        assert!(jump_cost(&p, &r.extension, &Penalties::unit(6)).unwrap().is_zero());
    }

    #[test]
    fn antichain_needs_every_jump() {
        let p = generate(&PosetKind::Antichain(5)).unwrap();
        let r = jump_number(&p, &Penalties::unit(5), &cfg()).unwrap();
        assert_eq!(r.value, BigRational::from_integer(4.into()));
        let three = generate(&PosetKind::Antichain(3)).unwrap();
        assert_eq!(
            jump_cost(&three, &[2, 0, 1], &Penalties::unit(3)).unwrap(),
            BigRational::from_integer(2.into())
        );
    }

    #[test]
    fn vee_poset() {
        let p = vee();
        let unit = Penalties::unit(3);
        // (a, c, b): both steps are jumps
        assert_eq!(jump_cost(&p, &[0, 2, 1], &unit).unwrap(), BigRational::from_integer(2.into()));
        let r = jump_number(&p, &unit, &cfg()).unwrap();
        assert!(r.value.is_one());
        assert!(r.extension == vec![0, 1, 2] || r.extension == vec![2, 0, 1]);
        assert_eq!(jump_cost(&p, &r.extension, &unit).unwrap(), r.value);
    }

    #[test]
    fn penalties_steer_the_optimum() {
        let p = vee();
        let mut pen = Penalties::unit(3);
        pen.set(&p, 1, 2, parse_rational("5").unwrap()).unwrap();
        pen.set(&p, 2, 0, parse_rational("0.5").unwrap()).unwrap();
        let r = jump_number(&p, &pen, &cfg()).unwrap();
        assert_eq!(r.value, parse_rational("1/2").unwrap());
        assert_eq!(r.extension, vec![2, 0, 1]);
    }

    #[test]
    fn penalty_file_validation() {
        let p = vee();
        let pen = Penalties::parse(&p, "# jumps\nb c 2.5\nc a 1/3\n").unwrap();
        assert_eq!(*pen.get(1, 2), parse_rational("5/2").unwrap());
        assert_eq!(*pen.get(2, 0), parse_rational("1/3").unwrap());
        assert!(pen.get(0, 2).is_one());
        assert!(matches!(Penalties::parse(&p, "a b 1"), Err(Error::InvalidParameter(_))));
        assert!(matches!(Penalties::parse(&p, "a c -1"), Err(Error::InvalidParameter(_))));
        assert!(matches!(Penalties::parse(&p, "a c"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Penalties::parse(&p, "a z 1"), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn rejects_non_extensions() {
        let p = vee();
        let unit = Penalties::unit(3);
        assert!(matches!(jump_cost(&p, &[1, 0, 2], &unit), Err(Error::NotALinearExtension(_))));
        assert!(matches!(jump_cost(&p, &[0, 0, 2], &unit), Err(Error::NotALinearExtension(_))));
        assert!(matches!(jump_cost(&p, &[0, 1], &unit), Err(Error::NotALinearExtension(_))));
    }

    #[test]
    fn empty_poset_is_rejected() {
        let p = generate(&PosetKind::Antichain(0)).unwrap();
        assert!(jump_number(&p, &Penalties::unit(0), &cfg()).is_err());
    }
}
