//! Exact verification engine for a family of binomial-sum identities,
//! integer-valued polynomials and the congruences built on them.
//!
//! * [`exact`]: big integers/rationals and scalar combinatorics
//! * [`unipoly`]: rational polynomials, binomial basis, integer-valuedness
//! * [`identity`]: polynomial identities and their recurrence
//! * [`congruence`]: integrality and divisibility checks
//! * [`qpoly`]: Laurent polynomials in `q` and the `[n]^2` congruence
//! * [`report`]: per-case reports and the grid runner
//! * [`cli`]: the `verify` command

pub mod exact;
pub mod unipoly;
pub mod report;
pub mod identity;
pub mod congruence;
pub mod qpoly;
pub mod cli;
