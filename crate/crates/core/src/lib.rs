//! Digit-appending walks along Fibonacci and Lucas sequences.
//!
//! A walk in base `b` with digit budget `N` moves from a sequence member
//! `M` to `b^t·M + r` with `1 ≤ t ≤ N` and `0 ≤ r < b^t`, and every value it
//! visits must again be a member. This crate enumerates such steps exactly,
//! computes the thresholds beyond which no step exists, finds the longest
//! walks, and emits termination certificates that can be re-checked from
//! their fields alone.

pub mod bounds;
pub mod error;
pub mod oracle;
pub mod precision;
pub mod quadratic;
pub mod report;
pub mod sequences;
pub mod stepper;
pub mod suites;
pub mod walker;

mod bigstr;

pub use bounds::BoundReport;
pub use error::{Error, Result};
pub use sequences::{Sequence, SequenceParams};
pub use stepper::{RigiditySolution, StepWitness, WalkConfig};
pub use walker::{TerminationCertificate, WalkRecord};
