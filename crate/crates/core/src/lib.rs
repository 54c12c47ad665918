//! Exact combinatorics over the ideal lattice of a finite poset.
//!
//! The ideal lattice is compressed into wildcard rows ([`coalmine`]) and
//! swept one cardinality level at a time ([`levelpass`]); each task plugs a
//! payload algebra into that sweep.

pub mod bits;
pub mod checkpoint;
pub mod coalmine;
pub mod error;
pub mod exact;
pub mod extcount;
pub mod jump;
pub mod levelpass;
pub mod oracle;
pub mod poset;
pub mod ranks;
pub mod schedule;

pub use bits::{BitSet, IdealKey};
pub use coalmine::{compress, CoalMine, MultivaluedRow, Symbol};
pub use error::{Error, Result};
pub use exact::{parse_rational, to_decimal, ExactRational};
pub use extcount::{count_for_ideal, count_linear_extensions, count_with_mine, ExtensionCount};
pub use jump::{jump_cost, jump_number, weighted_jump_number, JumpResult, Penalties};
pub use levelpass::{run_pass, run_pass_observed, LevelTable, PassAlgebra, PassConfig};
pub use oracle::Oracle;
pub use poset::{generate, parse_poset, Poset, PosetKind};
pub use ranks::{
    average_ranks, one_third_two_thirds_scan, precedence_count, rank_distribution, BalanceReport, Precedence,
    RankDistribution, Verdict, verify_rank_identity,
};
pub use schedule::{count_scheduled, count_window_extensions, ScheduleSpec, Window};

pub use num_bigint::BigUint;
pub use num_rational::BigRational;
