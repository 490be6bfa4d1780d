//! Independent replay of an extraction trace against the original graph.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::process::{weighted_count, DefaultFinder, FinderVerdict, ViolationFinder};
use super::{order_interval, Case, ExtractionTrace, Outcome, TRACE_VERSION};
use crate::error::{Error, Result};
use crate::expansion::CertificateMode;
use crate::graph::{Density, Graph, VertexSet};
use crate::rational::{self, Rational};

/// First failed check of a replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceDefect {
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for TraceDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

fn defect(step: Option<usize>, reason: impl Into<String>) -> std::result::Result<(), TraceDefect> {
    Err(TraceDefect {
        step,
        reason: reason.into(),
    })
}

macro_rules! ensure {
    ($cond:expr, $step:expr, $($msg:tt)+) => {
        if !$cond {
            return Ok(defect($step, format!($($msg)+)));
        }
    };
}

fn same_pair(a: &Density, b: &Density) -> bool {
    a.edges() == b.edges() && a.vertices() == b.vertices()
}

fn exact_density(g: &Graph, s: &VertexSet) -> Result<Density> {
    Density::new(g.edges_within(s), s.len())
}

/// `true` iff every recorded step, tally and the final density floor
/// re-verify on `original`. Errors only on a malformed remap chain.
pub fn verify_extraction_trace(original: &Graph, trace: &ExtractionTrace) -> Result<bool> {
    Ok(check_extraction_trace(original, trace)?.is_ok())
}

/// Like [`verify_extraction_trace`] but reports the first failed check.
pub fn check_extraction_trace(
    original: &Graph,
    trace: &ExtractionTrace,
) -> Result<std::result::Result<(), TraceDefect>> {
    let profile = &trace.profile;
    ensure!(trace.version == TRACE_VERSION, None, "unsupported version {}", trace.version);
    ensure!(profile.validate().is_ok(), None, "invalid profile");
    ensure!(trace.input_order == original.order(), None, "input order mismatch");
    ensure!(!original.is_empty(), None, "empty input");
    ensure!(
        same_pair(&trace.input_density, &original.average_degree()?),
        None,
        "input density mismatch"
    );
    ensure!(
        trace.within_hypothesis == profile.within_hypothesis(),
        None,
        "hypothesis flag mismatch"
    );

    let stop = trace.config.stop_order(profile.kind);
    let mut current = original.clone();
    let mut chain: Vec<usize> = original.vertices().collect();
    let mut floor = profile.retained_density_factor() * original.average_degree()?.to_rational();

    for (i, step) in trace.steps.iter().enumerate() {
        let at = Some(i);
        ensure!(step.iteration == i, at, "iteration index {}", step.iteration);
        ensure!(current.order() > stop, at, "step taken at or below the stop order");
        ensure!(step.graph_order == current.order(), at, "order mismatch");
        let before = current.average_degree()?;
        ensure!(same_pair(&step.density_before, &before), at, "density_before mismatch");
        if let Err(e) = step.violation.recheck(&current, profile) {
            return Ok(defect(at, e.to_string()));
        }
        if step.kept.is_empty() || step.kept.last().is_some_and(|v| v >= current.order()) {
            return Err(Error::MalformedRemap(format!("step {i} keeps vertices outside the graph")));
        }

        let s = &step.violation.witness;
        let rest = current.complement(s);
        let removal_density = exact_density(&current, &rest)?;
        let mut closure_members: Vec<usize> = s.iter().collect();
        for u in s.iter() {
            closure_members.extend_from_slice(current.neighbors(u));
        }
        let closure = VertexSet::from_unsorted(closure_members);

        let (expected_case, expected_kept) = if removal_density >= before {
            (Case::Removal, rest)
        } else if closure.len() == current.order() {
            let victim = current
                .vertices()
                .min_by_key(|&u| (current.degree(u), u))
                .expect("nonempty");
            (Case::Fallback, current.complement(&VertexSet::singleton(victim)))
        } else {
            (Case::Restriction, closure)
        };
        ensure!(
            step.case_taken == expected_case,
            at,
            "case {:?} recorded, replay gives {:?}",
            step.case_taken,
            expected_case
        );
        ensure!(step.kept == expected_kept, at, "kept set mismatch");
        let after = exact_density(&current, &expected_kept)?;
        ensure!(same_pair(&step.density_after, &after), at, "density_after mismatch");
        match expected_case {
            Case::Removal => ensure!(after >= before, at, "removal lowered density"),
            Case::Restriction => {
                let gamma = &step.violation.required_ratio_bound;
                ensure!(
                    after.to_rational() >= (Rational::one() - gamma) * before.to_rational(),
                    at,
                    "restriction lost more than a gamma fraction"
                );
                ensure!(expected_kept.len() < current.order(), at, "restriction did not shrink");
            }
            Case::Fallback => {
                if after < before {
                    floor = floor * after.to_rational() / before.to_rational();
                }
            }
        }
        chain = expected_kept.iter().map(|v| chain[v]).collect();
        current = current.induced_subgraph(&expected_kept)?.graph;
    }

    match (&trace.final_selection, trace.outcome) {
        (Some(selection), Outcome::SmallGraphStop | Outcome::ComponentFallback) => {
            ensure!(current.order() <= stop, None, "small-graph stop above the stop order");
            if selection.is_empty() || selection.last().is_some_and(|v| v >= current.order()) {
                return Err(Error::MalformedRemap("final selection outside the graph".into()));
            }
            let densest = current.densest_component()?;
            ensure!(
                selection.as_slice() == densest.remap.as_slice(),
                None,
                "final selection is not the densest component"
            );
            let expected = if current.is_connected() {
                Outcome::SmallGraphStop
            } else {
                Outcome::ComponentFallback
            };
            ensure!(trace.outcome == expected, None, "outcome mismatch");
            chain = densest.remap.iter().map(|&v| chain[v]).collect();
            current = densest.graph;
        }
        (None, Outcome::ExpanderCertified | Outcome::HeuristicNoViolationFound) => {
            ensure!(current.order() > stop, None, "certified at or below the stop order");
            let verdict = DefaultFinder.find(&current, profile, &trace.config)?;
            let expected = match verdict {
                FinderVerdict::Violation(v) => {
                    return Ok(defect(None, format!("final graph has a violation at scale {}", v.scale)));
                }
                FinderVerdict::NoViolation(CertificateMode::Exact) => Outcome::ExpanderCertified,
                FinderVerdict::NoViolation(CertificateMode::HeuristicNoViolationFound) => {
                    Outcome::HeuristicNoViolationFound
                }
            };
            ensure!(trace.outcome == expected, None, "outcome mismatch");
        }
        _ => return Ok(defect(None, "outcome inconsistent with final selection")),
    }

    if trace.remap != chain {
        return Err(Error::MalformedRemap("recorded remap differs from the replayed chain".into()));
    }
    ensure!(trace.final_order == current.order(), None, "final order mismatch");
    let final_density = current.average_degree()?;
    ensure!(same_pair(&trace.final_density, &final_density), None, "final density mismatch");

    // Per-interval tallies, recomputed from the replayed steps.
    let mut expected_tallies: Vec<(u32, Vec<u64>, Rational)> = Vec::new();
    for step in trace.steps.iter().filter(|s| s.case_taken == Case::Restriction) {
        let k = order_interval(step.graph_order);
        let d = step.violation.scale as usize;
        if !expected_tallies.iter().any(|t| t.0 == k) {
            expected_tallies.push((k, Vec::new(), Rational::one()));
        }
        let entry = expected_tallies.iter_mut().find(|t| t.0 == k).expect("inserted");
        if entry.1.len() <= d {
            entry.1.resize(d + 1, 0);
        }
        entry.1[d] += 1;
        entry.2 = &entry.2 * (Rational::one() + &step.violation.observed_ratio);
    }
    expected_tallies.sort_by_key(|t| std::cmp::Reverse(t.0));
    ensure!(trace.tallies.len() == expected_tallies.len(), None, "tally count mismatch");
    for (tally, (k, counts, growth)) in trace.tallies.iter().zip(&expected_tallies) {
        ensure!(tally.k == *k && tally.counts == *counts, None, "tally mismatch in interval {k}");
        ensure!(tally.growth == *growth, None, "growth mismatch in interval {k}");
        let weighted = weighted_count(counts);
        ensure!(
            tally.within_nominal_bound == (weighted <= BigInt::one() << *k),
            None,
            "nominal-bound flag mismatch in interval {k}"
        );
        // Each restriction at scale d keeps at most (1 + |N(S)|/|S|) m / 2^(2^d)
        // vertices and the interval starts at order <= 2^(2^k), so
        // 2^(sum a_d 2^d) <= 2^(2^k) * growth.
        let exponent: u64 = (&weighted).try_into().unwrap_or(u64::MAX);
        let lhs = if exponent > 4096 {
            None
        } else {
            Some(Rational::from_integer(BigInt::one() << exponent))
        };
        let rhs = Rational::from_integer(BigInt::one() << (1u64 << k)) * growth;
        ensure!(
            lhs.is_some_and(|l| l <= rhs),
            None,
            "interval {k}: sum a_d 2^d = {weighted} exceeds the order budget"
        );
    }

    ensure!(
        final_density.to_rational() >= floor,
        None,
        "final density {} below floor {}",
        final_density,
        rational::format(&floor)
    );
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ExpansionProfile;
    use crate::extraction::{extract_expander, PipelineConfig};
    use crate::graph::named::{barbell, complete, disjoint_union};
    use crate::rational::ratio;

    fn sample_trace() -> (Graph, ExtractionTrace) {
        let g = disjoint_union(&barbell(6, 4), &complete(5));
        let p = ExpansionProfile::delta_n(ratio(1, 1), g.order()).unwrap();
        let (_, trace) = extract_expander(&g, &p, &PipelineConfig::default()).unwrap();
        (g, trace)
    }

    #[test]
    fn replay_accepts_engine_trace() {
        let (g, trace) = sample_trace();
        assert!(!trace.steps.is_empty());
        assert_eq!(check_extraction_trace(&g, &trace).unwrap(), Ok(()));
    }

    #[test]
    fn corrupted_density_rejected() {
        let (g, mut trace) = sample_trace();
        let d = trace.steps[0].density_after;
        trace.steps[0].density_after = Density::new(d.edges() + 1, d.vertices()).unwrap();
        assert!(!verify_extraction_trace(&g, &trace).unwrap());
    }

    #[test]
    fn scaled_density_pair_rejected() {
        // Same value, different pair: still a corruption.
        let (g, mut trace) = sample_trace();
        let d = trace.steps[0].density_after;
        trace.steps[0].density_after = Density::new(d.edges() * 2, d.vertices() * 2).unwrap();
        assert!(!verify_extraction_trace(&g, &trace).unwrap());
    }

    #[test]
    fn malformed_remap_is_an_error() {
        let (g, mut trace) = sample_trace();
        trace.remap.push(10_000);
        assert!(matches!(verify_extraction_trace(&g, &trace), Err(Error::MalformedRemap(_))));
    }

    #[test]
    fn case_swap_rejected() {
        let (g, mut trace) = sample_trace();
        trace.steps[0].case_taken = match trace.steps[0].case_taken {
            Case::Removal => Case::Restriction,
            _ => Case::Removal,
        };
        assert!(!verify_extraction_trace(&g, &trace).unwrap());
    }

    #[test]
    fn empty_trace_on_expander() {
        let g = complete(12);
        let p = ExpansionProfile::delta_n(ratio(1, 10), 12).unwrap();
        let (h, trace) = extract_expander(&g, &p, &PipelineConfig::default()).unwrap();
        assert_eq!(h, g);
        assert!(verify_extraction_trace(&g, &trace).unwrap());
        // The same empty trace on a graph with a violation must fail.
        let other = disjoint_union(&complete(6), &complete(6));
        let mut forged = trace.clone();
        forged.input_density = other.average_degree().unwrap();
        forged.final_density = other.average_degree().unwrap();
        assert!(!verify_extraction_trace(&other, &forged).unwrap());
    }
}
