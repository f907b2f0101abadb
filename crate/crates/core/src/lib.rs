//! Exact evaluation of multiple harmonic sums and machine-checked certificates
//! for their non-integrality.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact_arith`]: reduced rationals, p-adic orders, decimal literals and
//!   upward-rounded dyadic arithmetic.
//! * [`primes`]: sieving, prime windows `(n/(r+1), n/r]` and the thresholds `m_r`.
//! * [`mhs`]: compositions and the ordinary/star sums themselves.
//! * [`order`]: the domination order on compositions and exclusion-set coverage.
//! * [`bounds`]: the `s_1` bounds `M`/`M'` and the analytic size estimates.
//! * [`tables`]: the shipped optimal/exclusion data.
//! * [`verify`]: witnesses, reports and the end-to-end verification pipeline.

pub mod bounds;
pub mod error;
pub mod exact_arith;
pub mod mhs;
pub mod order;
pub mod primes;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use exact_arith::{DyadicUpper, PAdicOrder, Rational};
pub use mhs::Composition;
pub use primes::PrimeSieve;
