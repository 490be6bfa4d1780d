//! Exhaustive subset enumeration for small graphs.

use num_bigint::BigInt;

use super::{CertificateMode, CheckOutcome, ExpanderCertificate, ExpansionProfile, ExpansionViolation};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::{self, Rational};

pub const DEFAULT_EXACT_CAP: usize = 20;

/// Hard ceiling on the exact cap: subsets are bitmasks in a `u64`.
const MASK_LIMIT: usize = 63;

struct Layout {
    /// `(scale, size)` in enumeration order.
    groups: Vec<(u32, usize)>,
    bounds: Vec<Rational>,
}

fn layout(g: &Graph, profile: &ExpansionProfile) -> Result<Layout> {
    let m = g.order();
    let bounds = profile
        .thresholds(m)?
        .into_iter()
        .map(|r| r.bound)
        .collect::<Vec<_>>();
    let mut groups: Vec<(u32, usize)> = (1..=m / 2)
        .filter_map(|s| profile.scale_for_size(m, s).map(|d| (d, s)))
        .collect();
    groups.sort_unstable();
    Ok(Layout { groups, bounds })
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |acc, &w| acc | (1 << w)))
        .collect()
}

/// Visits `k`-subsets of `0..n` in lexicographic order as bitmasks. The
/// callback returns `false` to stop early.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize], u64) -> bool) -> u64 {
    if k == 0 || k > n {
        return 0;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut visited = 0u64;
    loop {
        let mask = idx.iter().fold(0u64, |acc, &i| acc | (1 << i));
        visited += 1;
        if !f(&idx, mask) {
            return visited;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return visited;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn boundary(adj: &[u64], members: &[usize], mask: u64) -> usize {
    let reach = members.iter().fold(0u64, |acc, &v| acc | adj[v]);
    (reach & !mask).count_ones() as usize
}

fn check_cap(g: &Graph, exact_cap: usize) -> Result<()> {
    let cap = exact_cap.min(MASK_LIMIT);
    if g.order() > cap {
        return Err(Error::ExactCapExceeded { order: g.order(), cap });
    }
    Ok(())
}

fn make_violation(members: &[usize], scale: u32, boundary: usize, bound: &Rational) -> ExpansionViolation {
    ExpansionViolation {
        witness: VertexSet::new(members.iter().copied()),
        scale,
        boundary,
        observed_ratio: Rational::new(BigInt::from(boundary), BigInt::from(members.len())),
        required_ratio_bound: bound.clone(),
    }
}

/// Enumerates every subset `S` with `|S| <= m/2` at the largest scale it is
/// subject to, ordered by scale, then size, then lexicographically. Returns
/// the first violation, or an exact certificate if there is none.
pub fn check_expander_exact(g: &Graph, profile: &ExpansionProfile, exact_cap: usize) -> Result<CheckOutcome> {
    profile.validate()?;
    check_cap(g, exact_cap)?;
    let Layout { groups, bounds } = layout(g, profile)?;
    let adj = adjacency_masks(g);
    let mut count = 0u64;
    for &(d, size) in &groups {
        let bound = &bounds[d as usize];
        let mut found = None;
        count += for_each_combination(g.order(), size, |members, mask| {
            let b = boundary(&adj, members, mask);
            if rational::lt_cross(b as u128, size as u128, bound) {
                found = Some(make_violation(members, d, b, bound));
                return false;
            }
            true
        });
        if let Some(v) = found {
            return Ok(CheckOutcome::Violated(v));
        }
    }
    let mut scales: Vec<u32> = groups.iter().map(|&(d, _)| d).collect();
    scales.dedup();
    Ok(CheckOutcome::Certified(ExpanderCertificate {
        mode: CertificateMode::Exact,
        profile: profile.clone(),
        order: g.order(),
        scales_checked: scales,
        subset_count_or_probe_count: count,
    }))
}

/// Every genuine `(S, d)` pair, including sets that violate a smaller scale
/// than the tightest one they are subject to.
pub fn enumerate_violations(g: &Graph, profile: &ExpansionProfile, exact_cap: usize) -> Result<Vec<ExpansionViolation>> {
    profile.validate()?;
    check_cap(g, exact_cap)?;
    let m = g.order();
    let Some(scales) = profile.scales(m) else {
        return Ok(Vec::new());
    };
    let bounds = profile
        .thresholds(m)?
        .into_iter()
        .map(|r| r.bound)
        .collect::<Vec<_>>();
    let adj = adjacency_masks(g);
    let mut out = Vec::new();
    for size in 1..=m / 2 {
        for_each_combination(m, size, |members, mask| {
            let b = boundary(&adj, members, mask);
            for d in scales.clone() {
                if !super::fits_scale(m, size, d) {
                    break;
                }
                let bound = &bounds[d as usize];
                if rational::lt_cross(b as u128, size as u128, bound) {
                    out.push(make_violation(members, d, b, bound));
                }
            }
            true
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{barbell, complete, disjoint_union};
    use crate::rational::ratio;

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        let n = for_each_combination(4, 2, |idx, _| {
            seen.push(idx.to_vec());
            true
        });
        assert_eq!(n, 6);
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn complete_graph_certified() {
        let p = ExpansionProfile::delta(ratio(1, 256)).unwrap();
        let out = check_expander_exact(&complete(16), &p, 20).unwrap();
        match out {
            CheckOutcome::Certified(c) => {
                assert_eq!(c.mode, CertificateMode::Exact);
                assert_eq!(c.scales_checked, vec![0, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_cliques_violate_at_scale_zero() {
        let g = disjoint_union(&complete(8), &complete(8));
        let p = ExpansionProfile::delta(ratio(1, 256)).unwrap();
        let v = check_expander_exact(&g, &p, 20).unwrap();
        let v = v.violation().expect("violation");
        // Sizes at scale 1 (|S| <= 4) expand; the first failing group is |S| = 8.
        assert_eq!(v.scale, 0);
        assert_eq!(v.witness, VertexSet::new(0..8));
        assert_eq!(v.observed_ratio, ratio(0, 1));
        assert!(v.is_genuine(&g, &p));
    }

    #[test]
    fn small_barbell_exact() {
        let g = barbell(5, 6);
        let p = ExpansionProfile::delta_n(ratio(1, 1), 16).unwrap();
        let v = check_expander_exact(&g, &p, 20).unwrap();
        let v = v.violation().expect("violation");
        assert!(v.is_genuine(&g, &p));
        assert!(v.observed_ratio < v.required_ratio_bound);
    }

    #[test]
    fn cap_enforced() {
        let p = ExpansionProfile::delta(ratio(1, 256)).unwrap();
        assert_eq!(
            check_expander_exact(&complete(21), &p, 20),
            Err(Error::ExactCapExceeded { order: 21, cap: 20 })
        );
    }

    #[test]
    fn enumeration_contains_first_violation() {
        let g = disjoint_union(&complete(4), &complete(6));
        let p = ExpansionProfile::delta(ratio(1, 8)).unwrap();
        let all = enumerate_violations(&g, &p, 20).unwrap();
        let first = check_expander_exact(&g, &p, 20).unwrap();
        let first = first.violation().unwrap();
        assert!(all.contains(first));
        assert!(all.iter().all(|v| v.is_genuine(&g, &p)));
    }
}
