use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::assemble::{assemble_minor_balls, assemble_minor_hubs};
use super::hubs_balls::{find_hubs_or_balls, HubsOrBalls};
use super::{MinorAttempt, MinorFailure, MinorModel, MinorSearchParams, Regime};
use crate::error::{Error, Result};
use crate::expansion::ExpansionProfile;
use crate::extraction::{extract_expander, ExtractionTrace, Outcome, PipelineConfig};
use crate::graph::{Density, Graph};
use crate::oracle::{brute_force_minor_capped, check_minor_model};
use crate::rational::{self, serde_pq, Rational};

/// `C` in the reported bound `C (c(t) t^2 / eps) log2 n log2 log2 n`.
/// On `G(n, 8/n)` with `t = 4`, `eps = 1`, `c(t) = 2` and `2^8 <= n <= 2^13`
/// the largest order seen was `0.875 log2 n log2 log2 n`, about half of it.
pub const ORDER_BOUND_CONSTANT: f64 = 0.05;

/// Which host graph the minor was searched in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// The extracted graph was small enough for exhaustive search.
    BruteForce,
    /// Mid-sized extracted graph: re-extracted with the order-relative profile.
    DeltaExpander,
    /// Large extracted graph: searched directly under the ambient-order profile.
    DeltaNExpander,
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::BruteForce => "brute-force",
            Branch::DeltaExpander => "delta-expander",
            Branch::DeltaNExpander => "delta-n-expander",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorSearchReport {
    pub t: usize,
    #[serde(with = "serde_pq")]
    pub epsilon: Rational,
    #[serde(with = "serde_pq")]
    pub c_of_t: Rational,
    #[serde(with = "serde_pq")]
    pub delta: Rational,
    pub input_order: usize,
    pub input_density: Density,
    pub extraction_steps: usize,
    pub extraction_outcome: Outcome,
    pub h_order: usize,
    pub h_density: Density,
    pub branch: Branch,
    pub regime: Option<Regime>,
    /// In the coordinates of the input graph.
    pub model: Option<MinorModel>,
    pub failure: Option<MinorFailure>,
    /// `C (c(t) t^2 / eps) log2 n log2 log2 n`
    pub order_bound: f64,
    #[serde(skip)]
    pub trace: ExtractionTrace,
}

impl MinorSearchReport {
    pub fn success(&self) -> bool {
        self.model.is_some()
    }

    pub fn order(&self) -> Option<usize> {
        self.model.as_ref().map(|m| m.order)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Densities known to force a `K_t` minor for small `t`: 1, 2, 3 for
/// `t = 3, 4, 5` (`|E| >= |V|`, `2|V| - 2`, `3|V| - 5` edges).
pub fn default_c_of_t(t: usize) -> Option<Rational> {
    match t {
        3 => Some(rational::int(1)),
        4 => Some(rational::int(2)),
        5 => Some(rational::int(3)),
        _ => None,
    }
}

fn try_regimes(host: &Graph, profile: &ExpansionProfile, t: usize, certified: bool) -> Result<(Option<Regime>, MinorAttempt)> {
    let mut last = MinorFailure::new("no regime attempted");
    for regime in [Regime::Paper, Regime::DeskScale, Regime::DegreeRankHubs] {
        let mut params = MinorSearchParams::for_regime(profile, regime, t, host.order())?;
        params.assert_length_bound = certified;
        let attempt = if regime == Regime::DegreeRankHubs {
            let mut by_degree: Vec<usize> = host.vertices().collect();
            by_degree.sort_by_key(|&v| (std::cmp::Reverse(host.degree(v)), v));
            by_degree.truncate(t);
            assemble_minor_hubs(host, &by_degree, &params)?
        } else {
            match find_hubs_or_balls(host, &params)? {
                HubsOrBalls::Hubs(hubs) => assemble_minor_hubs(host, &hubs, &params)?,
                HubsOrBalls::Balls(balls) => assemble_minor_balls(host, &balls, &params)?,
                HubsOrBalls::Failure(stuck) => Err(MinorFailure {
                    reason: "no hubs and too few expanding balls".into(),
                    stuck: Some(stuck),
                    paths_found: 0,
                }),
            }
        };
        match attempt {
            Ok(model) => return Ok((Some(regime), Ok(model))),
            Err(mut f) => {
                f.reason = format!("{}: {}", regime.label(), f.reason);
                last = f;
            }
        }
    }
    Ok((None, Err(last)))
}

fn brute(host: &Graph, t: usize, cap: usize) -> Result<MinorAttempt> {
    Ok(brute_force_minor_capped(host, t, cap)?.ok_or_else(|| MinorFailure::new("extracted graph has no K_t minor")))
}

/// Full pipeline: extract an expander with `delta = eps / 8c(t)`, search it
/// for a `K_t` minor, and map the model back to `g`. Every returned model
/// has been verified against `g`.
pub fn find_small_minor(
    g: &Graph,
    t: usize,
    epsilon: &Rational,
    c_of_t: &Rational,
    cfg: &PipelineConfig,
) -> Result<MinorSearchReport> {
    if t < 3 {
        return Err(Error::InvalidParameter("t must be at least 3".into()));
    }
    if *epsilon <= Rational::zero() || *c_of_t <= Rational::zero() {
        return Err(Error::InvalidParameter("epsilon and c(t) must be positive".into()));
    }
    let density = g.average_degree()?;
    let required = c_of_t + epsilon;
    if density.to_rational() < required {
        return Err(Error::DensityBelowThreshold {
            density: density.to_string(),
            required: rational::format(&required),
        });
    }
    let n = g.order();
    let delta = epsilon / (rational::int(8) * c_of_t);
    let profile = ExpansionProfile::delta_n(delta.clone(), n.max(4))?;
    let (h, trace) = extract_expander(g, &profile, cfg)?;

    let log_n = (n.max(2) as f64).log2();
    let loglog_n = log_n.log2().max(1.0);
    let mid_limit = (log_n / (loglog_n * loglog_n)).exp2();

    let (branch, regime, attempt, remap) = if h.order() <= cfg.brute_cap {
        (Branch::BruteForce, None, brute(&h, t, cfg.brute_cap)?, trace.remap.clone())
    } else if (h.order() as f64) <= mid_limit {
        let weak = ExpansionProfile::delta(epsilon / (rational::int(6) * c_of_t))?;
        let (h2, trace2) = extract_expander(&h, &weak, cfg)?;
        let remap: Vec<usize> = trace2.remap.iter().map(|&v| trace.remap[v]).collect();
        if h2.order() <= cfg.brute_cap {
            (Branch::DeltaExpander, None, brute(&h2, t, cfg.brute_cap)?, remap)
        } else {
            let certified = trace2.outcome == Outcome::ExpanderCertified;
            let (regime, attempt) = try_regimes(&h2, &weak, t, certified)?;
            (Branch::DeltaExpander, regime, attempt, remap)
        }
    } else {
        let certified = trace.outcome == Outcome::ExpanderCertified;
        let (regime, attempt) = try_regimes(&h, &profile, t, certified)?;
        (Branch::DeltaNExpander, regime, attempt, trace.remap.clone())
    };

    let (model, failure) = match attempt {
        Ok(local) => {
            let model = local.relabel(&remap);
            check_minor_model(g, &model)
                .map_err(|d| Error::Invariant(format!("model does not verify in the input graph: {d}")))?;
            (Some(model), None)
        }
        Err(f) => (None, Some(f)),
    };

    let scale = (c_of_t.to_f64().unwrap_or(f64::NAN) * (t * t) as f64) / epsilon.to_f64().unwrap_or(f64::NAN);
    Ok(MinorSearchReport {
        t,
        epsilon: epsilon.clone(),
        c_of_t: c_of_t.clone(),
        delta,
        input_order: n,
        input_density: density,
        extraction_steps: trace.steps.len(),
        extraction_outcome: trace.outcome,
        h_order: h.order(),
        h_density: h.average_degree()?,
        branch,
        regime,
        model,
        failure,
        order_bound: ORDER_BOUND_CONSTANT * scale * log_n * loglog_n,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, path};
    use crate::oracle::verify_minor_model;
    use crate::rational::ratio;

    #[test]
    fn complete_six_gives_small_k4() {
        let g = complete(6);
        let r = find_small_minor(&g, 4, &ratio(1, 2), &ratio(2, 1), &PipelineConfig::default()).unwrap();
        let m = r.model.as_ref().unwrap();
        assert_eq!(m.order, 4);
        assert!(verify_minor_model(&g, m));
        assert_eq!(r.branch, Branch::BruteForce);
    }

    #[test]
    fn forest_fails_density_check() {
        let err = find_small_minor(&path(10), 3, &ratio(1, 10), &ratio(1, 1), &PipelineConfig::default()).unwrap_err();
        assert!(err.to_string().contains("density below c(t)+ε"));
    }

    #[test]
    fn t_two_rejected() {
        assert!(find_small_minor(&complete(6), 2, &ratio(1, 2), &ratio(1, 1), &PipelineConfig::default()).is_err());
    }
}
