//! Counting linear extensions: `e(X)` is the sum of `e` over the lower
//! covers of `X`, starting from `e(∅) = 1`.

use num_bigint::BigUint;
use num_traits::One;

use crate::bits::IdealKey;
use crate::coalmine::{compress, CoalMine};
use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::levelpass::{run_pass, PassAlgebra, PassConfig};
use crate::poset::Poset;

pub type ExtensionCount = BigUint;

pub struct CountAlgebra;

impl PassAlgebra for CountAlgebra {
    type Payload = BigUint;

    fn tag(&self) -> String {
        "count".into()
    }

    fn empty(&self) -> BigUint {
        BigUint::one()
    }

    fn combine(&self, _x: &IdealKey, covers: &[(usize, &BigUint)], _poset: &Poset) -> BigUint {
        covers.iter().map(|(_, e)| *e).sum()
    }
}

/// `e(P)` from a single pass over `mine`.
pub fn count_with_mine(mine: &CoalMine<'_>, config: &PassConfig) -> Result<ExtensionCount> {
    let top = run_pass(mine, &CountAlgebra, config)?;
    Ok(top.payloads()[0].clone())
}

/// `e(P)`. Connected components are counted separately and interleaved:
/// `e(P ⊎ Q) = e(P) e(Q) C(|P| + |Q|, |P|)`, which keeps wide posets such as
/// large antichains out of reach of the level ceiling.
pub fn count_linear_extensions(poset: &Poset, config: &PassConfig) -> Result<ExtensionCount> {
    let components = poset.components();
    if components.len() <= 1 {
        return count_with_mine(&compress(poset), config);
    }
    let mut total = factorial(poset.len());
    for comp in components {
        let size = comp.len();
        total /= factorial(size);
        if size > 1 {
            let sub = poset.restrict(&comp);
            total *= count_with_mine(&compress(&sub), config)?;
        }
    }
    Ok(total)
}

/// `e(X)` for the induced subposet on the ideal `x`.
pub fn count_for_ideal(poset: &Poset, x: &IdealKey, config: &PassConfig) -> Result<ExtensionCount> {
    if !poset.is_ideal(x) {
        return Err(Error::NotAnIdeal(format!("{x:?}")));
    }
    count_linear_extensions(&poset.restrict(x), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{generate, parse_poset, PosetKind};

    fn cfg() -> PassConfig {
        PassConfig::with_workers(2)
    }

    #[test]
    fn chains_and_antichains() {
        let chain = generate(&PosetKind::Chain(9)).unwrap();
        assert!(count_linear_extensions(&chain, &cfg()).unwrap().is_one());
        let anti = generate(&PosetKind::Antichain(4)).unwrap();
        assert_eq!(count_with_mine(&compress(&anti), &cfg()).unwrap(), BigUint::from(24u32));
        assert_eq!(count_linear_extensions(&anti, &cfg()).unwrap(), BigUint::from(24u32));
    }

    #[test]
    fn empty_ideal_and_empty_poset() {
        let p = parse_poset("a < b").unwrap();
        assert!(count_for_ideal(&p, &p.empty_set(), &cfg()).unwrap().is_one());
        let empty = generate(&PosetKind::Antichain(0)).unwrap();
        assert!(count_linear_extensions(&empty, &cfg()).unwrap().is_one());
    }

    #[test]
    fn non_ideal_is_rejected() {
        let p = parse_poset("a < b").unwrap();
        let x = IdealKey::from_elements(2, [1]);
        assert!(matches!(count_for_ideal(&p, &x, &cfg()), Err(Error::NotAnIdeal(_))));
    }

    #[test]
    fn components_agree_with_single_pass() {
        let p = parse_poset("elements: a,b,c,d,e,f\na < b, b < c, d < e").unwrap();
        let whole = count_with_mine(&compress(&p), &cfg()).unwrap();
        assert_eq!(count_linear_extensions(&p, &cfg()).unwrap(), whole);
        assert_eq!(whole, BigUint::from(60u32)); // 6! / (3! 2! 1!)
    }
}
