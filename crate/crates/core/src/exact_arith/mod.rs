//! Exact and directed-rounding arithmetic.
//!
//! Every value that feeds a certificate lives here: reduced rationals for
//! exact sums, p-adic orders, decimal literals read as exact rationals, and an
//! upward-rounded dyadic type used where exact denominators are infeasible.

mod decimal;
mod dyadic;
mod padic;
mod rational;
pub mod transcend;

pub use decimal::{format_decimal_exact, format_decimal_upper, parse_decimal_upper};
pub use dyadic::{DyadicUpper, DEFAULT_PRECISION};
pub use padic::{padic_order, padic_order_int, PAdicOrder};
pub use rational::Rational;
