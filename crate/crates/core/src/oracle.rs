//! Brute-force reference answers for small posets.
//!
//! Everything here works from the order relation alone: ideals by subset
//! enumeration, and every other quantity by walking all linear extensions.
//! None of it touches the row compression or the level pass, so it can be
//! used to check them.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::exact::ratio;
use crate::jump::Penalties;
use crate::poset::Poset;
use crate::schedule::ScheduleSpec;

pub struct Oracle {
    /// Largest poset whose linear extensions may be enumerated.
    pub ext_cap: usize,
    /// Largest poset whose subsets may be enumerated.
    pub ideal_cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            ext_cap: 12,
            ideal_cap: 20,
        }
    }
}

/// Iterative backtracking over linear extensions, in lexicographic order.
pub struct ExtensionStream {
    preds: Vec<Vec<usize>>,
    order: Vec<usize>,
    used: Vec<bool>,
    cursor: Vec<usize>,
    finished: bool,
}

impl ExtensionStream {
    pub fn new(poset: &Poset) -> Self {
        let n = poset.len();
        let preds = (0..n)
            .map(|b| (0..n).filter(|&a| poset.less(a, b)).collect())
            .collect();
        ExtensionStream {
            preds,
            order: Vec::with_capacity(n),
            used: vec![false; n],
            cursor: vec![0; n + 1],
            finished: false,
        }
    }

    fn pop(&mut self) -> bool {
        match self.order.pop() {
            Some(c) => {
                self.used[c] = false;
                true
            }
            None => false,
        }
    }
}

impl Iterator for ExtensionStream {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let n = self.used.len();
        while !self.finished {
            let depth = self.order.len();
            if depth == n {
                let out = self.order.clone();
                if !self.pop() {
                    self.finished = true;
                }
                return Some(out);
            }
            let pick = (self.cursor[depth]..n)
                .find(|&c| !self.used[c] && self.preds[c].iter().all(|&p| self.used[p]));
            match pick {
                Some(c) => {
                    self.cursor[depth] = c + 1;
                    self.cursor[depth + 1] = 0;
                    self.used[c] = true;
                    self.order.push(c);
                }
                None => {
                    if !self.pop() {
                        self.finished = true;
                    }
                }
            }
        }
        None
    }
}

/// Counts gathered in one sweep over all linear extensions.
#[derive(Clone, Debug, PartialEq)]
pub struct Tally {
    pub count: BigUint,
    /// `positions[a][k - 1]`: extensions with `a` at position `k`.
    pub positions: Vec<Vec<BigUint>>,
    /// `before[a][b]`: extensions with `a` before `b`.
    pub before: Vec<Vec<BigUint>>,
}

impl Tally {
    pub fn average_rank(&self, a: usize) -> BigRational {
        let sum: BigUint = self.positions[a]
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k + 1))
            .sum();
        ratio(&sum, &self.count)
    }

    pub fn precedence(&self, a: usize, b: usize) -> BigRational {
        ratio(&self.before[a][b], &self.count)
    }
}

impl Oracle {
    fn check(&self, what: &'static str, n: usize, cap: usize) -> Result<()> {
        if n > cap {
            return Err(Error::OracleCap { what, n, cap });
        }
        Ok(())
    }

    pub fn extensions(&self, poset: &Poset) -> Result<ExtensionStream> {
        self.check("linear extensions", poset.len(), self.ext_cap)?;
        Ok(ExtensionStream::new(poset))
    }

    /// Every order ideal, ascending by key.
    pub fn brute_ideals(&self, poset: &Poset) -> Result<Vec<BitSet>> {
        let n = poset.len();
        self.check("ideals", n, self.ideal_cap)?;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let x = BitSet::from_elements(n, (0..n).filter(|&i| mask >> i & 1 == 1));
            let closed = poset
                .covers()
                .iter()
                .all(|&(a, b)| !x.contains(b) || x.contains(a));
            if closed {
                out.push(x);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn tally(&self, poset: &Poset) -> Result<Tally> {
        let n = poset.len();
        let mut count = 0u64;
        let mut positions = vec![vec![0u64; n]; n];
        let mut before = vec![vec![0u64; n]; n];
        for ext in self.extensions(poset)? {
            count += 1;
            for (k, &a) in ext.iter().enumerate() {
                positions[a][k] += 1;
                for &b in &ext[k + 1..] {
                    before[a][b] += 1;
                }
            }
        }
        let big = |rows: Vec<Vec<u64>>| {
            rows.into_iter()
                .map(|r| r.into_iter().map(BigUint::from).collect())
                .collect()
        };
        Ok(Tally {
            count: count.into(),
            positions: big(positions),
            before: big(before),
        })
    }

    pub fn brute_count(&self, poset: &Poset) -> Result<BigUint> {
        Ok(self.extensions(poset)?.fold(BigUint::zero(), |acc, _| acc + 1u32))
    }

    pub fn brute_avr(&self, poset: &Poset) -> Result<Vec<BigRational>> {
        let t = self.tally(poset)?;
        Ok((0..poset.len()).map(|a| t.average_rank(a)).collect())
    }

    /// `e(P | a, k)` for `k = 1..=n`.
    pub fn brute_rank_counts(&self, poset: &Poset, a: usize) -> Result<Vec<BigUint>> {
        Ok(self.tally(poset)?.positions.swap_remove(a))
    }

    /// `(e(P, a, b), e(P))`.
    pub fn brute_precedence(&self, poset: &Poset, a: usize, b: usize) -> Result<(BigUint, BigUint)> {
        let mut t = self.tally(poset)?;
        Ok((t.before[a].swap_remove(b), t.count))
    }

    /// Minimum penalty cost over all linear extensions.
    pub fn brute_jump(&self, poset: &Poset, pen: &Penalties) -> Result<BigRational> {
        let mut best: Option<BigRational> = None;
        for ext in self.extensions(poset)? {
            let mut cost = BigRational::zero();
            for w in ext.windows(2) {
                let (a, b) = (w[0], w[1]);
                let cover = poset.less(a, b) && (0..poset.len()).all(|c| !(poset.less(a, c) && poset.less(c, b)));
                if !cover {
                    cost += pen.get(a, b);
                }
            }
            if best.as_ref().is_none_or(|v| cost < *v) {
                best = Some(cost);
            }
        }
        best.ok_or_else(|| Error::InvalidParameter("jump number of the empty poset".into()))
    }

    /// Linear extensions whose completion times all fall in their windows.
    pub fn brute_windows(&self, poset: &Poset, spec: &ScheduleSpec) -> Result<BigUint> {
        let mut good = BigUint::zero();
        for ext in self.extensions(poset)? {
            let mut t = BigRational::zero();
            let ok = ext.iter().all(|&a| {
                t += spec.duration(a);
                spec.window(a).contains(&t)
            });
            if ok {
                good += BigUint::one();
            }
        }
        Ok(good)
    }
}
