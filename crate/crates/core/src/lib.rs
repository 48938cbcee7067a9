//! Leakage-resilient algebraic manipulation detection (AMD) codes.
//!
//! The crate provides the strong and weak AMD constructions over finite
//! fields, exact security oracles that enumerate every offset, the
//! min-entropy machinery used to measure leakage, executable adversaries
//! for the rate/leakage impossibility results, an ideal-cipher construction
//! with a query-budgeted experiment harness, and robust ramp secret sharing.

pub mod attacks;
pub mod codec;
pub mod entropy;
pub mod error;
pub mod field;
pub mod icm;
pub mod oracle;
pub mod rss;
pub mod stats;
pub mod util;

pub use codec::{AmdCode, AmdKind, Codeword, Feasibility, Message, StrongAmdParams, WeakAmdParams};
pub use error::{AmdError, Result};
pub use field::{FieldElement, FieldKind, FieldSpec};
