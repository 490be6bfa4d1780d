//! Density-preserving expander extraction.
//!
//! Starting from `G_0 = G`, each step finds a violating set `S` in `G_t` and
//! either removes it (Case 1, when `d(G_t - S) >= d(G_t)`) or restricts to
//! `S ∪ N(S)` (Case 2). Case 2 loses at most a `(1 - gamma)` factor of
//! density, and the scales at which it fires are tallied per dyadic order
//! interval `[2^(2^(k-1)), 2^(2^k)]`. The process stops on a certified
//! expander or once the order drops to the stop threshold, in which case
//! the densest component is returned.

mod binary;
mod process;
mod replay;

use serde::{Deserialize, Serialize};

use crate::expansion::{ExpansionProfile, ExpansionViolation, ProfileKind, DEFAULT_EXACT_CAP, DEFAULT_PROBE_CAP};
use crate::graph::{Density, VertexSet};
use crate::rational::{serde_pq, Rational};

pub use binary::{decode_trace, encode_trace};
pub use process::{extract_expander, extract_expander_with, split_on_violation, DefaultFinder, FinderVerdict, ViolationFinder};
pub use replay::{check_extraction_trace, verify_extraction_trace, TraceDefect};

/// Version tag of serialized traces (JSON and binary).
pub const TRACE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Largest order checked by exhaustive enumeration.
    pub exact_cap: usize,
    /// Ball probes per heuristic search.
    pub probe_cap: usize,
    /// Stop order for [`ProfileKind::Delta`] runs.
    pub stop_order_delta: usize,
    /// Stop order for [`ProfileKind::DeltaN`] runs.
    pub stop_order_delta_n: usize,
    pub rng_seed: u64,
    /// Expanders of at most this order are searched by brute force in the
    /// minor pipeline.
    pub brute_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            exact_cap: DEFAULT_EXACT_CAP,
            probe_cap: DEFAULT_PROBE_CAP,
            stop_order_delta: 256,
            stop_order_delta_n: 4,
            rng_seed: 0,
            brute_cap: crate::oracle::DEFAULT_BRUTE_CAP,
        }
    }
}

impl PipelineConfig {
    pub fn stop_order(&self, kind: ProfileKind) -> usize {
        match kind {
            ProfileKind::Delta => self.stop_order_delta,
            ProfileKind::DeltaN => self.stop_order_delta_n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    /// `G_{t+1} = G_t - S`
    Removal,
    /// `G_{t+1} = G_t[S ∪ N(S)]`
    Restriction,
    /// `S ∪ N(S)` covers the graph and removal loses density: drop one
    /// lowest-degree vertex instead. Not covered by the density guarantee.
    Fallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    ExpanderCertified,
    HeuristicNoViolationFound,
    SmallGraphStop,
    /// Small-graph stop on a disconnected graph; the densest component was kept.
    ComponentFallback,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::ExpanderCertified => "expander-certified",
            Outcome::HeuristicNoViolationFound => "heuristic-no-violation-found",
            Outcome::SmallGraphStop => "small-graph-stop",
            Outcome::ComponentFallback => "component-fallback",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionStep {
    pub iteration: usize,
    pub graph_order: usize,
    pub density_before: Density,
    /// In the coordinates of the graph at this step.
    pub violation: ExpansionViolation,
    pub case_taken: Case,
    /// Vertices of the current graph carried into the next one; the next
    /// graph relabels them `0..` in increasing order.
    pub kept: VertexSet,
    pub density_after: Density,
}

/// Case 2 counts per scale inside one dyadic order interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalTally {
    /// Interval `(2^(2^(k-1)), 2^(2^k)]`.
    pub k: u32,
    /// `a_d` indexed by scale.
    pub counts: Vec<u64>,
    /// Product of `1 + |N(S)|/|S|` over the interval's Case 2 steps.
    #[serde(with = "serde_pq")]
    pub growth: Rational,
    /// `sum a_d 2^d <= 2^k`
    pub within_nominal_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionTrace {
    pub version: u32,
    pub input_order: usize,
    pub input_density: Density,
    pub profile: ExpansionProfile,
    pub within_hypothesis: bool,
    pub config: PipelineConfig,
    pub steps: Vec<ExtractionStep>,
    pub outcome: Outcome,
    /// Component chosen at a small-graph stop, in last-graph coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_selection: Option<VertexSet>,
    pub final_order: usize,
    pub final_density: Density,
    /// Final vertex `i` is original vertex `remap[i]`.
    pub remap: Vec<usize>,
    pub tallies: Vec<IntervalTally>,
}

impl ExtractionTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::InvalidParameter(format!("trace json: {e}")))
    }

    pub fn case_counts(&self) -> (usize, usize, usize) {
        let count = |c| self.steps.iter().filter(|s| s.case_taken == c).count();
        (count(Case::Removal), count(Case::Restriction), count(Case::Fallback))
    }

    /// The density the run is guaranteed to retain:
    /// `factor * d(G) * prod(fallback losses)`.
    pub fn density_floor(&self) -> Rational {
        let mut floor = self.profile.retained_density_factor() * self.input_density.to_rational();
        for step in &self.steps {
            if step.case_taken == Case::Fallback && step.density_after < step.density_before {
                floor = floor * step.density_after.to_rational() / step.density_before.to_rational();
            }
        }
        floor
    }
}

/// Smallest `k >= 0` with `m <= 2^(2^k)`.
pub fn order_interval(m: usize) -> u32 {
    let mut k = 0u32;
    while k < 6 && (m as u128) > (1u128 << (1u32 << k)) {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals() {
        assert_eq!(order_interval(1), 0);
        assert_eq!(order_interval(2), 0);
        assert_eq!(order_interval(3), 1);
        assert_eq!(order_interval(4), 1);
        assert_eq!(order_interval(5), 2);
        assert_eq!(order_interval(16), 2);
        assert_eq!(order_interval(17), 3);
        assert_eq!(order_interval(256), 3);
        assert_eq!(order_interval(257), 4);
        assert_eq!(order_interval(65537), 5);
    }
}
