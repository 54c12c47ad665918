//! Linear extensions that respect completion-time windows.
//!
//! Jobs run back to back in extension order; job `a` finishes at the total
//! duration of everything scheduled up to and including it, and that
//! completion time must lie in the closed window `[lo(a), hi(a)]`. For an
//! ideal `X` the last job finishes at `T(X)`, so `e*(X)` sums `e*(X \ {a})`
//! over the maximal `a` whose window contains `T(X)`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::IdealKey;
use crate::checkpoint::fingerprint_bytes;
use crate::coalmine::{compress, CoalMine};
use crate::error::{Error, Result};
use crate::exact::parse_rational;
use crate::levelpass::{run_pass, PassAlgebra, PassConfig};
use crate::poset::Poset;

#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    pub lo: BigRational,
    /// `None` is unbounded.
    pub hi: Option<BigRational>,
}

impl Window {
    pub fn unbounded() -> Self {
        Window {
            lo: BigRational::zero(),
            hi: None,
        }
    }

    pub fn contains(&self, t: &BigRational) -> bool {
        *t >= self.lo && self.hi.as_ref().is_none_or(|hi| t <= hi)
    }
}

/// Durations and windows; unlisted jobs take time 1 with window `[0, inf)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleSpec {
    durations: Vec<BigRational>,
    windows: Vec<Window>,
}

impl ScheduleSpec {
    pub fn new(n: usize) -> Self {
        ScheduleSpec {
            durations: vec![BigRational::one(); n],
            windows: vec![Window::unbounded(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.durations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.durations.is_empty()
    }

    pub fn set(&mut self, a: usize, duration: BigRational, window: Window) -> Result<()> {
        if a >= self.len() {
            return Err(Error::InvalidParameter(format!("job {a} out of range")));
        }
        if !duration.is_positive() {
            return Err(Error::InvalidParameter(format!("duration of job {a} must be positive")));
        }
        if window.hi.as_ref().is_some_and(|hi| *hi < window.lo) {
            return Err(Error::InvalidParameter(format!("window of job {a} is empty")));
        }
        self.durations[a] = duration;
        self.windows[a] = window;
        Ok(())
    }

    pub fn duration(&self, a: usize) -> &BigRational {
        &self.durations[a]
    }

    pub fn window(&self, a: usize) -> &Window {
        &self.windows[a]
    }

    /// Parses lines `x duration lo hi`, with `hi` possibly `inf`.
    pub fn parse(poset: &Poset, text: &str) -> Result<Self> {
        let mut spec = ScheduleSpec::new(poset.len());
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [x, dur, lo, hi] = fields[..] else {
                return Err(parse_err(format!("expected `x duration lo hi`, found `{line}`")));
            };
            let a = poset.index_of(x)?;
            let number = |s: &str| parse_rational(s).map_err(|e| parse_err(e.to_string()));
            let hi = match hi {
                "inf" | "+inf" | "infinity" => None,
                s => Some(number(s)?),
            };
            spec.set(
                a,
                number(dur)?,
                Window {
                    lo: number(lo)?,
                    hi,
                },
            )?;
        }
        Ok(spec)
    }

    /// Same data over a common denominator, as integers.
    fn scaled(&self) -> ScaledSpec {
        let mut denom = BigInt::one();
        let all = self.durations.iter().chain(
            self.windows
                .iter()
                .flat_map(|w| std::iter::once(&w.lo).chain(w.hi.as_ref())),
        );
        for r in all {
            denom = denom.lcm(r.denom());
        }
        let scale = |r: &BigRational| (r * BigRational::from_integer(denom.clone())).to_integer();
        ScaledSpec {
            durations: self.durations.iter().map(scale).collect(),
            windows: self
                .windows
                .iter()
                .map(|w| (scale(&w.lo), w.hi.as_ref().map(scale)))
                .collect(),
        }
    }
}

struct ScaledSpec {
    durations: Vec<BigInt>,
    windows: Vec<(BigInt, Option<BigInt>)>,
}

pub struct WindowAlgebra {
    scaled: ScaledSpec,
    tag: String,
}

impl WindowAlgebra {
    pub fn new(spec: &ScheduleSpec) -> Self {
        let mut text = String::new();
        for (d, w) in spec.durations.iter().zip(&spec.windows) {
            let hi = w.hi.as_ref().map_or("inf".to_string(), |h| h.to_string());
            text.push_str(&format!("{d} {} {hi}\n", w.lo));
        }
        WindowAlgebra {
            scaled: spec.scaled(),
            tag: format!("windows-{}", &fingerprint_bytes(text.as_bytes())[..12]),
        }
    }
}

impl PassAlgebra for WindowAlgebra {
    type Payload = BigUint;

    fn tag(&self) -> String {
        self.tag.clone()
    }

    fn empty(&self) -> BigUint {
        BigUint::one()
    }

    fn combine(&self, x: &IdealKey, covers: &[(usize, &BigUint)], _poset: &Poset) -> BigUint {
        let finish: BigInt = x.iter().map(|a| &self.scaled.durations[a]).sum();
        let mut total = BigUint::zero();
        for &(a, count) in covers {
            let (lo, hi) = &self.scaled.windows[a];
            if finish >= *lo && hi.as_ref().is_none_or(|h| finish <= *h) {
                total += count;
            }
        }
        total
    }
}

/// `e*(P)`: linear extensions meeting every window.
pub fn count_window_extensions(mine: &CoalMine<'_>, spec: &ScheduleSpec, config: &PassConfig) -> Result<BigUint> {
    if spec.len() != mine.poset().len() {
        return Err(Error::InvalidParameter("schedule size differs from poset size".into()));
    }
    let top = run_pass(mine, &WindowAlgebra::new(spec), config)?;
    Ok(top.payloads()[0].clone())
}

pub fn count_scheduled(poset: &Poset, spec: &ScheduleSpec, config: &PassConfig) -> Result<BigUint> {
    count_window_extensions(&compress(poset), spec, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{generate, parse_poset, PosetKind};

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn exact(lo: &str, hi: &str) -> Window {
        Window {
            lo: q(lo),
            hi: Some(q(hi)),
        }
    }

    #[test]
    fn chain_with_tight_windows() {
        let p = generate(&PosetKind::Chain(3)).unwrap();
        let mut spec = ScheduleSpec::new(3);
        for i in 0..3 {
            let t = (i + 1).to_string();
            spec.set(i, q("1"), exact(&t, &t)).unwrap();
        }
        assert_eq!(count_scheduled(&p, &spec, &PassConfig::with_workers(1)).unwrap(), BigUint::one());

        let mut late = ScheduleSpec::new(3);
        late.set(0, q("1"), exact("2", "3")).unwrap();
        assert!(count_scheduled(&p, &late, &PassConfig::with_workers(1)).unwrap().is_zero());
    }

    #[test]
    fn two_jobs_one_order() {
        let p = generate(&PosetKind::Antichain(2)).unwrap();
        let mut spec = ScheduleSpec::new(2);
        spec.set(0, q("1"), exact("0", "1")).unwrap();
        spec.set(1, q("2"), exact("0", "3")).unwrap();
        assert_eq!(count_scheduled(&p, &spec, &PassConfig::with_workers(2)).unwrap(), BigUint::one());
    }

    #[test]
    fn unbounded_windows_count_everything() {
        let p = generate(&PosetKind::Antichain(4)).unwrap();
        let spec = ScheduleSpec::new(4);
        assert_eq!(
            count_scheduled(&p, &spec, &PassConfig::with_workers(1)).unwrap(),
            BigUint::from(24u32)
        );
    }

    #[test]
    fn window_file() {
        let p = parse_poset("elements: x,y\nx < y").unwrap();
        let spec = ScheduleSpec::parse(&p, "x 1.5 0 2\ny 1/2 0 inf\n").unwrap();
        assert_eq!(*spec.duration(0), q("3/2"));
        assert_eq!(spec.window(1).hi, None);
        assert!(spec.window(0).contains(&q("2")));
        assert!(!spec.window(0).contains(&q("2.01")));
        assert!(ScheduleSpec::parse(&p, "x 0 0 1").is_err());
        assert!(ScheduleSpec::parse(&p, "x 1 3 1").is_err());
        assert!(matches!(ScheduleSpec::parse(&p, "x 1 0"), Err(Error::Parse { .. })));
        assert!(matches!(ScheduleSpec::parse(&p, "w 1 0 1"), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn fractional_durations_scale_exactly() {
        let p = generate(&PosetKind::Antichain(2)).unwrap();
        let mut spec = ScheduleSpec::new(2);
        spec.set(0, q("1/3"), exact("0", "1/3")).unwrap();
        spec.set(1, q("1/6"), exact("1/2", "1/2")).unwrap();
        // only (0, 1): job 0 ends at 1/3, job 1 at 1/2
        assert_eq!(count_scheduled(&p, &spec, &PassConfig::with_workers(1)).unwrap(), BigUint::one());
    }
}
