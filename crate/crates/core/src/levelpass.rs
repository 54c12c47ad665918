//! Cardinality-wise dynamic programming over the ideals of a [`CoalMine`].
//!
//! Level `k` is a sorted table of `(ideal, payload)` pairs for all
//! `k`-element ideals. Level `k + 1` is produced by streaming the
//! `(k + 1)`-element members of every row, finding each member's lower
//! covers `X \ {a}` (those `a` with `X ∩ uc(a) = ∅`) by binary search in
//! level `k`, and folding their payloads with a [`PassAlgebra`].
//!
//! Rows are split among workers by predicted load; each worker emits a
//! sorted sublist and the sublists are merged. Rows are disjoint, so no key
//! is ever produced twice and the merged table does not depend on the
//! worker count.

use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bits::IdealKey;
use crate::checkpoint::{Codec, CheckpointStore};
use crate::coalmine::{predict_row_load, CoalMine, MultivaluedRow};
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Default ceiling on the number of ideals held in one level.
pub const DEFAULT_MAX_LEVEL_SIZE: usize = 20_000_000;

/// Per-ideal payload rule of one dynamic program.
pub trait PassAlgebra: Sync {
    type Payload: Clone + Send + Sync + Codec;

    /// Names the algebra and its parameters; keys checkpoint files.
    fn tag(&self) -> String;

    /// Payload of the empty ideal.
    fn empty(&self) -> Self::Payload;

    /// Payload of `x` from its lower covers, given as `(a, payload of x \ {a})`
    /// in ascending `a`.
    fn combine(&self, x: &IdealKey, covers: &[(usize, &Self::Payload)], poset: &Poset) -> Self::Payload;
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelTable<P> {
    level: usize,
    keys: Vec<IdealKey>,
    payloads: Vec<P>,
}

impl<P> LevelTable<P> {
    pub fn new(level: usize, keys: Vec<IdealKey>, payloads: Vec<P>) -> Result<Self> {
        if keys.len() != payloads.len() {
            return Err(Error::InvalidParameter("keys and payloads differ in length".into()));
        }
        if !keys.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter("keys are not strictly increasing".into()));
        }
        Ok(LevelTable {
            level,
            keys,
            payloads,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[IdealKey] {
        &self.keys
    }

    pub fn payloads(&self) -> &[P] {
        &self.payloads
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IdealKey, &P)> {
        self.keys.iter().zip(&self.payloads)
    }

    /// Binary search for `x`.
    pub fn lookup(&self, x: &IdealKey) -> Option<&P> {
        self.keys.binary_search(x).ok().map(|i| &self.payloads[i])
    }

    pub fn into_parts(self) -> (Vec<IdealKey>, Vec<P>) {
        (self.keys, self.payloads)
    }
}

/// Lower covers of the nonempty ideal `x` in the ideal lattice, as
/// `(a, x \ {a})` for ascending `a`.
pub fn lower_covers(poset: &Poset, x: &IdealKey) -> Result<Vec<(usize, IdealKey)>> {
    if x.width() != poset.len() {
        return Err(Error::WidthMismatch {
            expected: poset.len(),
            found: x.width(),
        });
    }
    if x.is_empty() {
        return Err(Error::InvalidParameter("the empty ideal has no lower covers".into()));
    }
    Ok(x.iter()
        .filter(|&a| !x.intersects(poset.upper_covers(a)))
        .map(|a| (a, x.without(a)))
        .collect())
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LevelStat {
    pub level: usize,
    pub size: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PassStats {
    pub algebra: String,
    pub rows: usize,
    pub workers: usize,
    pub levels: Vec<LevelStat>,
    pub peak_level_size: usize,
    pub resumed_from: Option<usize>,
}

pub type StatsSink = Arc<Mutex<Vec<PassStats>>>;

#[derive(Clone, Debug)]
pub struct PassConfig {
    pub workers: usize,
    pub max_level_size: usize,
    /// Root directory for per-level checkpoints; `None` disables them.
    pub checkpoint: Option<PathBuf>,
    /// Receives one [`PassStats`] per completed pass.
    pub stats: Option<StatsSink>,
}

impl Default for PassConfig {
    fn default() -> Self {
        PassConfig {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            max_level_size: DEFAULT_MAX_LEVEL_SIZE,
            checkpoint: None,
            stats: None,
        }
    }
}

impl PassConfig {
    pub fn with_workers(workers: usize) -> Self {
        PassConfig {
            workers,
            ..Default::default()
        }
    }

    pub(crate) fn without_checkpoint(&self) -> Self {
        PassConfig {
            checkpoint: None,
            ..self.clone()
        }
    }
}

/// Runs the pass to the top level and returns the single-entry level `n`.
pub fn run_pass<A: PassAlgebra>(
    mine: &CoalMine<'_>,
    alg: &A,
    config: &PassConfig,
) -> Result<LevelTable<A::Payload>> {
    run_pass_observed(mine, alg, config, |_| {})
}

/// Like [`run_pass`], calling `on_level` with every level in order, from
/// level 0 (or the resumed level) to level `n`.
pub fn run_pass_observed<A, F>(
    mine: &CoalMine<'_>,
    alg: &A,
    config: &PassConfig,
    mut on_level: F,
) -> Result<LevelTable<A::Payload>>
where
    A: PassAlgebra,
    F: FnMut(&LevelTable<A::Payload>),
{
    if config.workers == 0 {
        return Err(Error::InvalidParameter("workers must be at least 1".into()));
    }
    let poset = mine.poset();
    let n = poset.len();
    let profile = mine.rank_profile();
    let cap = BigUint::from(config.max_level_size);
    if let Some((level, size)) = profile.iter().enumerate().find(|(_, s)| **s > cap) {
        return Err(Error::LevelCeiling {
            level,
            size: size.to_string(),
            cap: config.max_level_size,
        });
    }
    let loads: Vec<Vec<u64>> = mine
        .rows()
        .iter()
        .map(|r| (0..=n).map(|k| predict_row_load(r, k)).collect())
        .collect();

    let tag = alg.tag();
    let store = match &config.checkpoint {
        Some(root) => Some(CheckpointStore::new(root, poset, &tag)?),
        None => None,
    };
    let mut stats = PassStats {
        algebra: tag,
        rows: mine.rows().len(),
        workers: config.workers,
        ..Default::default()
    };

    let mut current = match store.as_ref().map(|s| s.load_latest()).transpose()?.flatten() {
        Some((level, keys, payloads)) => {
            stats.resumed_from = Some(level);
            LevelTable::new(level, keys, payloads)?
        }
        None => LevelTable {
            level: 0,
            keys: vec![poset.empty_set()],
            payloads: vec![alg.empty()],
        },
    };
    stats.peak_level_size = current.len();
    on_level(&current);

    for k in current.level..n {
        let started = Instant::now();
        let next = next_level(mine, alg, &current, &loads, config.workers)?;
        debug_assert_eq!(profile[k + 1].to_usize(), Some(next.len()));
        stats.levels.push(LevelStat {
            level: k + 1,
            size: next.len(),
            elapsed: started.elapsed(),
        });
        stats.peak_level_size = stats.peak_level_size.max(next.len());
        if let Some(store) = &store {
            store.save(next.level, &next.keys, &next.payloads)?;
        }
        on_level(&next);
        current = next;
    }
    if let Some(sink) = &config.stats {
        sink.lock().unwrap().push(stats);
    }
    Ok(current)
}

/// Greedy largest-first bin packing of the rows with nonzero load.
fn partition(loads: &[Vec<u64>], level: usize, workers: usize) -> Vec<Vec<usize>> {
    let mut active: Vec<(u64, usize)> = loads
        .iter()
        .enumerate()
        .filter(|(_, l)| l[level] > 0)
        .map(|(i, l)| (l[level], i))
        .collect();
    active.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let bins = workers.min(active.len()).max(1);
    let mut totals = vec![0u64; bins];
    let mut out = vec![Vec::new(); bins];
    for (load, row) in active {
        let (best, _) = totals.iter().enumerate().min_by_key(|(i, t)| (**t, *i)).unwrap();
        totals[best] = totals[best].saturating_add(load);
        out[best].push(row);
    }
    out
}

fn next_level<A: PassAlgebra>(
    mine: &CoalMine<'_>,
    alg: &A,
    prev: &LevelTable<A::Payload>,
    loads: &[Vec<u64>],
    workers: usize,
) -> Result<LevelTable<A::Payload>> {
    let level = prev.level + 1;
    let bins = partition(loads, level, workers);
    let rows = mine.rows();
    let poset = mine.poset();

    let sublists: Vec<Vec<(IdealKey, A::Payload)>> = if bins.len() == 1 {
        vec![sieve(poset, alg, prev, bins[0].iter().map(|&i| &rows[i]), level)?]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = bins
                .iter()
                .map(|bin| {
                    scope.spawn(move || sieve(poset, alg, prev, bin.iter().map(|&i| &rows[i]), level))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("level worker panicked"))
                .collect::<Result<Vec<_>>>()
        })?
    };

    let (keys, payloads): (Vec<_>, Vec<_>) = sublists
        .into_iter()
        .kmerge_by(|a, b| a.0 < b.0)
        .unzip();
    debug_assert!(keys.windows(2).all(|w| w[0] < w[1]), "rows overlap");
    Ok(LevelTable {
        level,
        keys,
        payloads,
    })
}

/// One worker's share: all `level`-element members of `rows`, with payloads,
/// sorted by key.
fn sieve<'r, A: PassAlgebra>(
    poset: &Poset,
    alg: &A,
    prev: &LevelTable<A::Payload>,
    rows: impl Iterator<Item = &'r MultivaluedRow>,
    level: usize,
) -> Result<Vec<(IdealKey, A::Payload)>> {
    let mut out = Vec::new();
    let mut covers: Vec<(usize, &A::Payload)> = Vec::new();
    for row in rows {
        for x in row.ideals_of_size(level) {
            covers.clear();
            for a in x.iter() {
                if x.intersects(poset.upper_covers(a)) {
                    continue;
                }
                let y = x.without(a);
                match prev.keys.binary_search(&y) {
                    Ok(i) => covers.push((a, &prev.payloads[i])),
                    Err(_) => {
                        return Err(Error::MissingLowerCover {
                            level,
                            key: y.to_bitstring(),
                        })
                    }
                }
            }
            let payload = alg.combine(&x, &covers, poset);
            out.push((x, payload));
        }
    }
    out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
