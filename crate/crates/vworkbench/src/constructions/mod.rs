//! Certificate-producing constructions over prefix-exchange elements.
//!
//! Each public operation returns a certificate that re-validates from its
//! stored fields alone: five-factor decompositions into thick reducible
//! pieces, conjugation of a support into a prescribed fixed cylinder,
//! commuting conjugates for pairs, simultaneous handles, a finite generator
//! family solving controlled conjugation into a target cylinder, and a
//! seeded audit exercising all of them together. Everything is exact; the
//! only approximate-looking knobs are bounded-iteration caps on searches
//! whose termination the underlying arguments guarantee.

mod audit;
mod conjugate;
mod decompose;
mod family;
mod solve;
mod transporter;
mod witnesses;

pub use audit::{criterion_audit, AuditReport, TrialRecord, AUDIT_SCHEMA};
pub use conjugate::{
    commuting_conjugate, conjugate_support_into, disjoint_images, sample_supported_in,
    simultaneous_handle, CommutingCertificate, HandleCertificate, SupportConjugation,
};
pub use decompose::{decompose_five, Exponents, FiveFactorization};
pub use family::{big_f, BigFFamily};
pub use solve::{solve_big_f, SolveCertificate};
pub use transporter::transporter;
pub use witnesses::WitnessSet;

use crate::dyadic::{BinaryWord, DyadicError, DyadicRational};
use crate::vcore::VError;
use thiserror::Error;

/// Cap on bounded linear exponent searches. The constructions terminate well
/// below this; hitting the cap indicates a bug, not a hard input.
pub const SCAN_CAP: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("transport sides cannot be matched: {reason}")]
    InfeasibleTransport { reason: String },
    #[error("target cylinder {0} is not pointwise fixed by the element")]
    TargetNotFixed(BinaryWord),
    #[error("element fixes no cylinder")]
    NotReducible,
    #[error("no admissible fixed cylinder disjoint from the partner support")]
    NoAdmissibleTriple,
    #[error("interval {0} must lie strictly inside (0,1)")]
    IntervalTouchesBoundary(BinaryWord),
    #[error("epsilon {0} must be a positive power of 1/2")]
    EpsilonNotPowerOfHalf(DyadicRational),
    #[error("thickness {found} is below the family floor {need}")]
    TooThin { found: DyadicRational, need: DyadicRational },
    #[error("scan budget {budget} exhausted during {stage}")]
    BudgetExhausted { stage: &'static str, budget: u64 },
    #[error("construction self-check failed: {what}")]
    SelfCheckFailed { what: String },
    #[error("certificate invalid: {reason}")]
    CertificateInvalid { reason: String },
    #[error(transparent)]
    V(#[from] VError),
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
}
