use crate::error::{AmdError, Result};

/// Default ceiling on elementary operations for exhaustive enumerations.
pub const DEFAULT_WORK_BUDGET: u128 = 1_000_000_000;

/// `q^len` as u128, saturating.
pub fn count_vectors(q: u64, len: usize) -> u128 {
    (q as u128).saturating_pow(len as u32)
}

pub fn check_budget(what: &str, required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(AmdError::Capacity {
            what: what.to_string(),
            required,
            budget,
        });
    }
    Ok(())
}

/// Calls `visit` on every vector in `[0, q)^len` in lexicographic order,
/// first symbol most significant.
pub fn for_each_vector(q: u64, len: usize, mut visit: impl FnMut(&[u64])) {
    if q == 0 {
        return;
    }
    let mut current = vec![0u64; len];
    loop {
        visit(&current);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            current[i] += 1;
            if current[i] < q {
                break;
            }
            current[i] = 0;
        }
    }
}

/// All vectors in `[0, q)^len`, lexicographic.
pub fn all_vectors(q: u64, len: usize) -> Vec<Vec<u64>> {
    let total = count_vectors(q, len) as usize;
    (0..total).map(|i| index_to_vector(i as u128, q, len)).collect()
}

/// Base-q digits of `index`, most significant first.
pub fn index_to_vector(mut index: u128, q: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % q as u128) as u64;
        index /= q as u128;
    }
    out
}

pub fn vector_to_index(v: &[u64], q: u64) -> u128 {
    v.iter().fold(0u128, |acc, &d| acc * q as u128 + d as u128)
}
