//! Finite posets with precomputed cover and comparability masks.
//!
//! Elements are numbered `0..n` internally; the label table maps them to the
//! external names used by the text formats. The cover relation is always
//! stored transitively reduced, whatever relation pairs were supplied.

mod family;
mod format;
mod generate;

use std::collections::HashMap;

use crate::bits::{BitSet, IdealKey};
use crate::error::{Error, Result};

pub use family::poset_from_ideal_family;
pub use format::{parse_poset, parse_poset_json, PosetDocument};
pub use generate::{generate, PosetKind};

#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    uc: Vec<BitSet>,
    lc: Vec<BitSet>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

impl Poset {
    /// Builds a poset from arbitrary order pairs `(a, b)` meaning `a < b`.
    /// The pairs need not be covers; implied pairs are reduced away.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateElement(l.clone()));
            }
        }

        let mut succ = vec![BitSet::new(n); n];
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidParameter(format!(
                    "relation ({a}, {b}) out of range for {n} elements"
                )));
            }
            if a == b {
                return Err(Error::Cycle(labels[a].clone()));
            }
            succ[a].insert(b);
        }

        // Kahn's algorithm; leftovers lie on a cycle.
        let mut indegree = vec![0usize; n];
        for s in &succ {
            for b in s {
                indegree[b] += 1;
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let a = order[head];
            head += 1;
            for b in &succ[a] {
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    order.push(b);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap();
            return Err(Error::Cycle(labels[stuck].clone()));
        }

        let mut up = vec![BitSet::new(n); n];
        for &a in order.iter().rev() {
            let mut acc = succ[a].clone();
            for b in &succ[a] {
                acc.union_with(&up[b]);
            }
            up[a] = acc;
        }

        let mut uc = vec![BitSet::new(n); n];
        for a in 0..n {
            let mut implied = BitSet::new(n);
            for c in &up[a] {
                implied.union_with(&up[c]);
            }
            uc[a] = up[a].difference(&implied);
        }

        Ok(Self::from_closure(labels, index, up, uc))
    }

    fn from_closure(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        up: Vec<BitSet>,
        uc: Vec<BitSet>,
    ) -> Self {
        let n = labels.len();
        let mut down = vec![BitSet::new(n); n];
        let mut lc = vec![BitSet::new(n); n];
        let mut covers = Vec::new();
        for a in 0..n {
            for b in &up[a] {
                down[b].insert(a);
            }
            for b in &uc[a] {
                lc[b].insert(a);
                covers.push((a, b));
            }
        }
        Poset {
            labels,
            index,
            covers,
            uc,
            lc,
            up,
            down,
        }
    }

    /// Builds a poset whose elements are labelled `1..=n`.
    pub fn with_numeric_labels(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        Self::from_relations((1..=n).map(|i| i.to_string()).collect(), relations)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    /// Cover pairs `(a, b)`, `b` an upper cover of `a`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    #[inline]
    pub fn upper_covers(&self, a: usize) -> &BitSet {
        &self.uc[a]
    }

    #[inline]
    pub fn lower_covers(&self, a: usize) -> &BitSet {
        &self.lc[a]
    }

    /// Strict up-set of `a`.
    #[inline]
    pub fn up(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    /// Strict down-set of `a`.
    #[inline]
    pub fn down(&self, a: usize) -> &BitSet {
        &self.down[a]
    }

    #[inline]
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    #[inline]
    pub fn covered_by(&self, a: usize, b: usize) -> bool {
        self.uc[a].contains(b)
    }

    pub fn empty_set(&self) -> BitSet {
        BitSet::new(self.len())
    }

    pub fn full_set(&self) -> BitSet {
        BitSet::full(self.len())
    }

    /// `true` when no two distinct elements are incomparable.
    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|a| self.up[a].len() + self.down[a].len() + 1 == self.len())
    }

    fn check_width(&self, x: &BitSet) -> Result<()> {
        if x.width() != self.len() {
            return Err(Error::WidthMismatch {
                expected: self.len(),
                found: x.width(),
            });
        }
        Ok(())
    }

    /// Downward closure test.
    pub fn is_ideal(&self, x: &BitSet) -> bool {
        x.width() == self.len() && x.iter().all(|a| self.down[a].is_subset(x))
    }

    /// For an ideal `x` containing `a`: is `x \ {a}` still an ideal?
    pub fn removal_keeps_ideal(&self, x: &IdealKey, a: usize) -> Result<bool> {
        self.check_width(x)?;
        if a >= self.len() || !x.contains(a) {
            return Err(Error::NotAMember {
                element: a,
                set: format!("{x:?}"),
            });
        }
        Ok(!x.intersects(&self.uc[a]))
    }

    /// Maximal elements of the ideal `x`: members with no upper cover in `x`.
    pub fn maximal_elements(&self, x: &IdealKey) -> BitSet {
        let mut out = BitSet::new(self.len());
        for a in x {
            if !x.intersects(&self.uc[a]) {
                out.insert(a);
            }
        }
        out
    }

    /// The induced subposet on `x`, keeping labels and relative order.
    pub fn restrict(&self, x: &BitSet) -> Poset {
        let members: Vec<usize> = x.iter().collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &a) in members.iter().enumerate() {
            pos[a] = i;
        }
        let mut relations = Vec::new();
        for (i, &a) in members.iter().enumerate() {
            for b in &self.up[a] {
                if x.contains(b) {
                    relations.push((i, pos[b]));
                }
            }
        }
        let labels = members.iter().map(|&a| self.labels[a].clone()).collect();
        Poset::from_relations(labels, &relations).expect("induced subposet of a poset is a poset")
    }

    /// Disjoint union; labels of `other` are suffixed with `'` on collision.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let shift = self.len();
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut l = l.clone();
            while self.index.contains_key(&l) || labels.contains(&l) {
                l.push('\'');
            }
            labels.push(l);
        }
        let mut relations: Vec<(usize, usize)> = self.covers.clone();
        relations.extend(other.covers.iter().map(|&(a, b)| (a + shift, b + shift)));
        Poset::from_relations(labels, &relations).expect("disjoint union of posets is a poset")
    }

    /// Connected components of the comparability graph, ordered by their
    /// smallest element.
    pub fn components(&self) -> Vec<BitSet> {
        let n = self.len();
        let mut seen = BitSet::new(n);
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BitSet::new(n);
            let mut stack = vec![start];
            comp.insert(start);
            while let Some(a) = stack.pop() {
                for b in self.uc[a].iter().chain(self.lc[a].iter()) {
                    if !comp.contains(b) {
                        comp.insert(b);
                        stack.push(b);
                    }
                }
            }
            seen.union_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Same elements and covers, with the labels `1..=n` in internal order.
    pub fn relabeled_numeric(&self) -> Poset {
        Poset::with_numeric_labels(self.len(), &self.covers).expect("same covers")
    }

    /// Text rendering in the cover-list format accepted by [`parse_poset`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("elements: ");
        out.push_str(&self.labels.join(","));
        out.push('\n');
        for &(a, b) in &self.covers {
            out.push_str(&self.labels[a]);
            out.push_str(" < ");
            out.push_str(&self.labels[b]);
            out.push('\n');
        }
        out
    }

    pub fn to_document(&self) -> PosetDocument {
        PosetDocument {
            elements: self.labels.clone(),
            relations: self
                .covers
                .iter()
                .map(|&(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
                .collect(),
        }
    }
}
