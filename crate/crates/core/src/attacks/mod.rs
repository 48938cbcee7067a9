//! Executable adversaries for the rate/leakage impossibility results.

mod adversary;
mod bitcode;
mod line;

pub use adversary::*;
pub use bitcode::{BitCodeAdapter, MAX_BITS};
pub use line::{
    bonferroni_lower_bound, canonical_probes, joint_probe_probability, line_family_hit_rate,
    pairwise_independence_check, LineFamily, Mode,
};
