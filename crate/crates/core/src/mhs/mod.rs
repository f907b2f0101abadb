//! Compositions and the multiple harmonic sums
//!
//! ```text
//! H_n(s)  = Σ_{1 <= k_1 <  ... <  k_r <= n} 1 / (k_1^{s_1} ... k_r^{s_r})
//! H*_n(s) = Σ_{1 <= k_1 <= ... <= k_r <= n} 1 / (k_1^{s_1} ... k_r^{s_r})
//! ```

mod composition;
mod eval;

pub use composition::{parse_composition, Composition};
pub use eval::{
    lcm_up_to, mhs_eval, mhs_eval_checked, mhs_star_eval, mhs_star_eval_checked, mhs_upper_eval,
    mhs_upper_eval_with, suffix_coefficients, CostPolicy, MhsValue, ScaledCoefficients, SumKind,
};
