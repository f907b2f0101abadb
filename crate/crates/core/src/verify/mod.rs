//! Witnesses, reports and the verification suites.

mod pipeline;
mod report;
mod witness;

pub use pipeline::{
    compositions_up_to, Progress, TableChecks, TheoremOptions, Verifier, DEFAULT_EXACT_LIMIT,
    DEFAULT_SAMPLES,
};
pub use report::{claim_order, Manifest, Outcome, Summary, VerificationReport, MANIFEST_FORMAT, MANIFEST_VERSION};
pub use witness::{
    exact_witness, less_than_one_witness, star_witness, window_witness, CheckKind,
    NonIntegralityWitness, WitnessMethod,
};
