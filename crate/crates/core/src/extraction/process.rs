use num_bigint::BigInt;
use num_traits::One;

use super::{order_interval, Case, ExtractionStep, ExtractionTrace, IntervalTally, Outcome, PipelineConfig, TRACE_VERSION};
use crate::error::{Error, Result};
use crate::expansion::{check_expander, CertificateMode, CheckOutcome, ExpansionProfile, ExpansionViolation, HeuristicOptions};
use crate::graph::{Density, Graph, InducedSubgraph, VertexSet};
use crate::rational::Rational;

pub enum FinderVerdict {
    Violation(ExpansionViolation),
    NoViolation(CertificateMode),
}

/// Source of violating sets for the extraction loop. Every violation a
/// finder returns is re-verified before it is used.
pub trait ViolationFinder {
    fn find(&mut self, g: &Graph, profile: &ExpansionProfile, cfg: &PipelineConfig) -> Result<FinderVerdict>;
}

/// Exact enumeration up to `exact_cap`, ball-growth probing above it.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultFinder;

impl ViolationFinder for DefaultFinder {
    fn find(&mut self, g: &Graph, profile: &ExpansionProfile, cfg: &PipelineConfig) -> Result<FinderVerdict> {
        let opts = HeuristicOptions {
            probe_cap: cfg.probe_cap,
            seed: cfg.rng_seed,
        };
        Ok(match check_expander(g, profile, cfg.exact_cap, &opts)? {
            CheckOutcome::Violated(v) => FinderVerdict::Violation(v),
            CheckOutcome::Certified(c) => FinderVerdict::NoViolation(c.mode),
        })
    }
}

/// Applies one step of the dichotomy: remove `S` if that does not lower the
/// density, otherwise restrict to `S ∪ N(S)`.
pub fn split_on_violation(
    g: &Graph,
    profile: &ExpansionProfile,
    v: &ExpansionViolation,
) -> Result<(InducedSubgraph, Case)> {
    v.recheck(g, profile)?;
    let before = g.average_degree()?;
    let rest = g.complement(&v.witness);
    let removal = Density::new(g.edges_within(&rest), rest.len())?;
    if removal >= before {
        return Ok((g.induced_subgraph(&rest)?, Case::Removal));
    }
    let closure = v.witness.union(&g.neighborhood(&v.witness)?);
    if closure.len() == g.order() {
        let victim = g
            .vertices()
            .min_by_key(|&u| (g.degree(u), u))
            .expect("nonempty graph");
        let kept = g.complement(&VertexSet::singleton(victim));
        return Ok((g.induced_subgraph(&kept)?, Case::Fallback));
    }
    let sub = g.induced_subgraph(&closure)?;
    let after = sub.graph.average_degree()?;
    let floor = (Rational::one() - &v.required_ratio_bound) * before.to_rational();
    if after.to_rational() < floor {
        return Err(Error::Invariant(format!(
            "restriction density {after} below (1 - gamma) * {before}"
        )));
    }
    Ok((sub, Case::Restriction))
}

pub fn extract_expander(g: &Graph, profile: &ExpansionProfile, cfg: &PipelineConfig) -> Result<(Graph, ExtractionTrace)> {
    extract_expander_with(g, profile, cfg, &mut DefaultFinder)
}

pub fn extract_expander_with(
    g: &Graph,
    profile: &ExpansionProfile,
    cfg: &PipelineConfig,
    finder: &mut dyn ViolationFinder,
) -> Result<(Graph, ExtractionTrace)> {
    profile.validate()?;
    let input_density = g.average_degree()?;
    let stop = cfg.stop_order(profile.kind);
    let mut current = g.clone();
    let mut remap: Vec<usize> = g.vertices().collect();
    let mut steps = Vec::new();

    let (outcome, final_selection) = loop {
        if current.order() <= stop {
            let connected = current.is_connected();
            let densest = current.densest_component()?;
            let selection = VertexSet::new(densest.remap.iter().copied());
            remap = densest.remap.iter().map(|&v| remap[v]).collect();
            current = densest.graph;
            let outcome = if connected {
                Outcome::SmallGraphStop
            } else {
                Outcome::ComponentFallback
            };
            break (outcome, Some(selection));
        }
        let violation = match finder.find(&current, profile, cfg)? {
            FinderVerdict::NoViolation(CertificateMode::Exact) => break (Outcome::ExpanderCertified, None),
            FinderVerdict::NoViolation(CertificateMode::HeuristicNoViolationFound) => {
                break (Outcome::HeuristicNoViolationFound, None)
            }
            FinderVerdict::Violation(v) => v,
        };
        let density_before = current.average_degree()?;
        let (next, case) = split_on_violation(&current, profile, &violation)?;
        steps.push(ExtractionStep {
            iteration: steps.len(),
            graph_order: current.order(),
            density_before,
            violation,
            case_taken: case,
            kept: VertexSet::new(next.remap.iter().copied()),
            density_after: next.graph.average_degree()?,
        });
        remap = next.remap.iter().map(|&v| remap[v]).collect();
        current = next.graph;
    };

    let trace = ExtractionTrace {
        version: TRACE_VERSION,
        input_order: g.order(),
        input_density,
        profile: profile.clone(),
        within_hypothesis: profile.within_hypothesis(),
        config: cfg.clone(),
        tallies: tally_intervals(&steps),
        steps,
        outcome,
        final_selection,
        final_order: current.order(),
        final_density: current.average_degree()?,
        remap,
    };
    Ok((current, trace))
}

pub(super) fn tally_intervals(steps: &[ExtractionStep]) -> Vec<IntervalTally> {
    let mut tallies: Vec<IntervalTally> = Vec::new();
    for step in steps.iter().filter(|s| s.case_taken == Case::Restriction) {
        let k = order_interval(step.graph_order);
        let idx = match tallies.iter().position(|t| t.k == k) {
            Some(i) => i,
            None => {
                tallies.push(IntervalTally {
                    k,
                    counts: Vec::new(),
                    growth: Rational::one(),
                    within_nominal_bound: true,
                });
                tallies.len() - 1
            }
        };
        let tally = &mut tallies[idx];
        let d = step.violation.scale as usize;
        if tally.counts.len() <= d {
            tally.counts.resize(d + 1, 0);
        }
        tally.counts[d] += 1;
        tally.growth = &tally.growth * (Rational::one() + &step.violation.observed_ratio);
    }
    for tally in &mut tallies {
        tally.within_nominal_bound = weighted_count(&tally.counts) <= BigInt::one() << tally.k;
    }
    tallies.sort_by_key(|t| std::cmp::Reverse(t.k));
    tallies
}

/// `sum a_d 2^d`
pub(super) fn weighted_count(counts: &[u64]) -> BigInt {
    counts
        .iter()
        .enumerate()
        .map(|(d, &a)| BigInt::from(a) << d)
        .sum()
}
