//! Ball-growth probe for graphs too large to enumerate.
//!
//! Sound but incomplete: everything it reports is re-verified, and "no
//! violation found" is only a heuristic verdict.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CertificateMode, CheckOutcome, ExpanderCertificate, ExpansionProfile, ExpansionViolation};
use crate::graph::{Graph, VertexSet};
use crate::rational::{self, Rational};
use crate::seed;

pub const DEFAULT_PROBE_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicOptions {
    /// Maximum number of ball probes; every vertex is probed when the graph
    /// has at most this many vertices.
    pub probe_cap: usize,
    pub seed: u64,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        HeuristicOptions {
            probe_cap: DEFAULT_PROBE_CAP,
            seed: 0,
        }
    }
}

struct Candidate {
    ratio: Rational,
    scale: u32,
    members: VertexSet,
}

impl Candidate {
    fn cmp_key(&self, other: &Candidate) -> Ordering {
        self.ratio
            .cmp(&other.ratio)
            .then(self.scale.cmp(&other.scale))
            .then(self.members.len().cmp(&other.members.len()))
            .then(self.members.cmp(&other.members))
    }
}

fn graph_fingerprint(g: &Graph) -> u64 {
    g.edges().fold(g.order() as u64, |acc, (u, v)| {
        acc ^ seed::splitmix64(((u as u64) << 32) ^ v as u64)
    })
}

fn probe_starts(g: &Graph, opts: &HeuristicOptions) -> Vec<usize> {
    let m = g.order();
    if m <= opts.probe_cap {
        return g.vertices().collect();
    }
    let mut by_degree: Vec<usize> = g.vertices().collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    let low = opts.probe_cap / 2;
    let mut starts: Vec<usize> = by_degree[..low].to_vec();
    let rest = &by_degree[low..];
    let seed = seed::derive(opts.seed, &[m as u64, g.edge_count() as u64, graph_fingerprint(g)]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = (opts.probe_cap - low).min(rest.len());
    starts.extend(sample(&mut rng, rest.len(), picks).into_iter().map(|i| rest[i]));
    starts
}

fn ratio_of(boundary: usize, size: usize) -> Rational {
    Rational::new(BigInt::from(boundary), BigInt::from(size))
}

/// Grows BFS balls around `start` up to half the graph and returns the
/// violating ball of smallest ratio.
fn probe_ball(g: &Graph, profile: &ExpansionProfile, bounds: &[Rational], start: usize) -> Option<Candidate> {
    let m = g.order();
    let mut inside = vec![false; m];
    let mut members = vec![start];
    inside[start] = true;
    let mut frontier = vec![start];
    let mut best: Option<(usize, usize, u32, usize)> = None;
    while members.len() <= m / 2 {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if !inside[w] {
                    inside[w] = true;
                    next.push(w);
                }
            }
        }
        let size = members.len();
        let Some(d) = profile.scale_for_size(m, size) else {
            break;
        };
        let b = next.len();
        let improves = best.is_none_or(|(bb, bs, _, _)| (b as u128) * (bs as u128) < (bb as u128) * (size as u128));
        if improves && rational::lt_cross(b as u128, size as u128, &bounds[d as usize]) {
            best = Some((b, size, d, size));
        }
        if next.is_empty() {
            break;
        }
        members.extend_from_slice(&next);
        frontier = next;
    }
    // Balls are BFS prefixes, so a ball is recovered from its size.
    best.map(|(b, size, d, len)| Candidate {
        ratio: ratio_of(b, size),
        scale: d,
        members: VertexSet::from_unsorted(members[..len].to_vec()),
    })
}

fn search(g: &Graph, profile: &ExpansionProfile, opts: &HeuristicOptions) -> (Option<ExpansionViolation>, u64) {
    let m = g.order();
    if profile.validate().is_err() || profile.scales(m).is_none() {
        return (None, 0);
    }
    let bounds: Vec<Rational> = match profile.thresholds(m) {
        Ok(ts) => ts.into_iter().map(|r| r.bound).collect(),
        Err(_) => return (None, 0),
    };

    let mut best: Option<Candidate> = None;
    let consider = |c: Candidate, best: &mut Option<Candidate>| {
        if best.as_ref().is_none_or(|b| c.cmp_key(b) == Ordering::Less) {
            *best = Some(c);
        }
    };

    // Small components have empty boundary and violate at every scale.
    for comp in g.connected_components() {
        if let Some(d) = profile.scale_for_size(m, comp.len()) {
            consider(
                Candidate {
                    ratio: ratio_of(0, comp.len()),
                    scale: d,
                    members: comp,
                },
                &mut best,
            );
        }
    }

    let mut probes = 0u64;
    if best.is_none() {
        for start in probe_starts(g, opts) {
            probes += 1;
            if let Some(c) = probe_ball(g, profile, &bounds, start) {
                consider(c, &mut best);
            }
        }
    }

    let violation = best.and_then(|c| {
        ExpansionViolation::build(g, profile, c.members, c.scale)
            .ok()
            .flatten()
    });
    (violation, probes)
}

/// Probes for a violation; `None` means the probe found nothing.
pub fn find_violation_heuristic(
    g: &Graph,
    profile: &ExpansionProfile,
    opts: &HeuristicOptions,
) -> Option<ExpansionViolation> {
    search(g, profile, opts).0
}

/// Like [`find_violation_heuristic`] but wraps the outcome, recording the
/// number of probes when nothing is found.
pub fn heuristic_check(g: &Graph, profile: &ExpansionProfile, opts: &HeuristicOptions) -> crate::Result<CheckOutcome> {
    profile.validate()?;
    let (violation, probes) = search(g, profile, opts);
    Ok(match violation {
        Some(v) => CheckOutcome::Violated(v),
        None => CheckOutcome::Certified(ExpanderCertificate {
            mode: CertificateMode::HeuristicNoViolationFound,
            profile: profile.clone(),
            order: g.order(),
            scales_checked: profile.scales(g.order()).map(|r| r.collect()).unwrap_or_default(),
            subset_count_or_probe_count: probes,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{barbell, complete, disjoint_union};
    use crate::rational::ratio;

    #[test]
    fn barbell_bottleneck_found() {
        let g = barbell(8, 100);
        let p = ExpansionProfile::delta_n(ratio(1, 1), g.order()).unwrap();
        let v = find_violation_heuristic(&g, &p, &HeuristicOptions::default()).expect("violation");
        assert!(v.is_genuine(&g, &p));
        let left = VertexSet::new(0..8);
        let right = VertexSet::new(108..116);
        assert!(left.is_subset(&v.witness) || right.is_subset(&v.witness));
        assert_eq!(v.boundary, 1);
        assert_eq!(v.observed_ratio, ratio(1, v.witness.len() as i64));
    }

    #[test]
    fn small_component_reported_first() {
        let g = disjoint_union(&complete(40), &complete(4));
        let p = ExpansionProfile::delta(ratio(1, 256)).unwrap();
        let v = find_violation_heuristic(&g, &p, &HeuristicOptions::default()).unwrap();
        assert_eq!(v.witness, VertexSet::new(40..44));
        assert_eq!(v.boundary, 0);
    }

    #[test]
    fn complete_graph_yields_nothing() {
        let p = ExpansionProfile::delta(ratio(1, 256)).unwrap();
        let out = heuristic_check(&complete(100), &p, &HeuristicOptions::default()).unwrap();
        match out {
            CheckOutcome::Certified(c) => {
                assert_eq!(c.mode, CertificateMode::HeuristicNoViolationFound);
                assert_eq!(c.subset_count_or_probe_count, 64);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let g = barbell(10, 300);
        let p = ExpansionProfile::delta_n(ratio(1, 5), g.order()).unwrap();
        let opts = HeuristicOptions { probe_cap: 16, seed: 9 };
        assert_eq!(find_violation_heuristic(&g, &p, &opts), find_violation_heuristic(&g, &p, &opts));
    }
}
