//! Families of test functions with pairwise disjoint supports.

use super::cutoff::node_radius;
use super::WeylError;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyMember {
    pub k: usize,
    pub support: (f64, f64),
}

/// Closed intervals `[a, b]` and `[c, d]` with `b < c` or `d < a`.
pub fn closed_disjoint(x: (f64, f64), y: (f64, f64)) -> bool {
    x.1 < y.0 || y.1 < x.0
}

pub fn pairwise_disjoint(members: &[FamilyMember]) -> bool {
    members.iter().enumerate().all(|(i, a)| {
        members[i + 1..]
            .iter()
            .all(|b| closed_disjoint(a.support, b.support))
    })
}

/// Indices `k_i = k0 + i(4p0 + 1)` and their supports `[r_{k_i}, r_{k_i+4p0}]`.
pub fn disjoint_family(k0: usize, p0: usize, count: usize, beta: f64) -> Result<Vec<FamilyMember>, WeylError> {
    if count < 2 {
        return Err(WeylError::BadParams(format!("family size {count} must be at least 2")));
    }
    if p0 < 1 {
        return Err(WeylError::BadParams("p0 must be at least 1".into()));
    }
    let members = (0..count)
        .map(|i| {
            let k = k0 + i * (4 * p0 + 1);
            Ok(FamilyMember {
                k,
                support: (node_radius(k, beta)?, node_radius(k + 4 * p0, beta)?),
            })
        })
        .collect::<Result<Vec<_>, WeylError>>()?;
    assert!(pairwise_disjoint(&members), "family supports overlap");
    Ok(members)
}
