//! Constructive `K_t`-minor search inside expanders.
//!
//! Two routes share one parameterization ([`MinorSearchParams`]):
//!
//! * hubs: `t` high-degree vertices joined pairwise by internally disjoint
//!   shortest paths;
//! * balls: `t` disjoint expanding balls, each trimmed to a core, with
//!   core-to-core paths and star paths from each ball center to the path
//!   endpoints inside its core.
//!
//! [`find_small_minor`] chains extraction, the routes above and the
//! brute-force oracle, and maps the result back to the input graph.

mod assemble;
mod hubs_balls;
mod model;
mod path;
mod pipeline;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{ExpansionProfile, ProfileKind};
use crate::rational::{self, Rational};

pub use assemble::{assemble_minor_balls, assemble_minor_hubs};
pub use hubs_balls::{find_hubs_or_balls, ExpandingBall, HubsOrBalls, StuckState};
pub use model::MinorModel;
pub use path::{claim_length_bound, grow_ball_path, shortest_path_avoiding};
pub use pipeline::{default_c_of_t, find_small_minor, Branch, MinorSearchReport, ORDER_BOUND_CONSTANT};

/// Threshold family a parameter set was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Degree `log^4 m`, balls `[m^(1/5), m^(1/4)]`, cores `[log^4 m, log^8 m]`.
    Paper,
    /// Degree `log^2 m`, balls `[log m, log^2 m]`, cores `[sqrt(log m), log m]`.
    DeskScale,
    /// The `t` highest-degree vertices used as hubs, no degree threshold.
    DegreeRankHubs,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Paper => "paper",
            Regime::DeskScale => "desk-scale",
            Regime::DegreeRankHubs => "degree-rank-hubs",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorSearchParams {
    pub profile: ExpansionProfile,
    pub regime: Regime,
    pub t: usize,
    pub degree_threshold: usize,
    pub ball_size_lo: usize,
    pub ball_size_hi: usize,
    pub core_size_lo: usize,
    pub core_size_hi: usize,
    /// Cap on the vertices a new path must avoid.
    pub path_budget: usize,
    /// Ball growth rate that counts as expanding.
    #[serde(with = "rational::serde_pq")]
    pub gamma: Rational,
    /// Assert the path-length bound: set when the host graph was certified
    /// to be an expander, which is the hypothesis of that bound.
    pub assert_length_bound: bool,
}

fn log2(m: usize) -> f64 {
    (m.max(2) as f64).log2()
}

/// Rational on the `2^-32` grid just below `x`.
fn grid_rational(x: f64) -> Rational {
    let scaled = (x * 4_294_967_296.0).floor().max(0.0);
    Rational::new(BigInt::from(scaled as u64), BigInt::from(1u64 << 32))
}

impl MinorSearchParams {
    /// Thresholds for a host graph of order `m` under `regime`.
    pub fn for_regime(profile: &ExpansionProfile, regime: Regime, t: usize, m: usize) -> Result<Self> {
        profile.validate()?;
        let lm = log2(m);
        let budget_log = match profile.kind {
            ProfileKind::Delta => lm,
            ProfileKind::DeltaN => log2(profile.ambient_n.expect("validated")),
        };
        let (degree, ball, core, budget) = match regime {
            Regime::Paper => {
                let lo = rational::ceil_f64((m as f64).powf(0.2));
                let hi = rational::floor_f64((m as f64).powf(0.25)).max(lo);
                let core_lo = rational::ceil_f64(lm.powi(4));
                let core_hi = rational::floor_f64(lm.powi(8)).max(core_lo);
                (rational::ceil_f64(lm.powi(4)), (lo, hi), (core_lo, core_hi), budget_log.powi(2))
            }
            Regime::DeskScale => {
                let lo = rational::ceil_f64(lm);
                let hi = rational::ceil_f64(lm * lm).max(lo);
                let core_lo = rational::ceil_f64(lm.sqrt());
                let core_hi = rational::ceil_f64(lm).max(core_lo);
                (rational::ceil_f64(lm * lm), (lo, hi), (core_lo, core_hi), budget_log.powi(2))
            }
            Regime::DegreeRankHubs => (1, (1, 1), (1, 1), m as f64),
        };
        let params = MinorSearchParams {
            profile: profile.clone(),
            regime,
            t,
            degree_threshold: degree.max(1),
            ball_size_lo: ball.0.max(1),
            ball_size_hi: ball.1.max(1),
            core_size_lo: core.0.max(1),
            core_size_hi: core.1.max(1),
            path_budget: rational::ceil_f64(budget).max(1),
            gamma: Self::default_gamma(profile, m),
            assert_length_bound: false,
        };
        params.validate()?;
        Ok(params)
    }

    /// `delta / (5 (log log m)^2)` or `delta log m / (5 log n)`, rounded down
    /// to a `2^-32` grid.
    pub fn default_gamma(profile: &ExpansionProfile, m: usize) -> Rational {
        let delta = rational::to_f64(&profile.delta);
        let lm = log2(m);
        let value = match profile.kind {
            ProfileKind::Delta => delta / (5.0 * lm.log2().max(1.0).powi(2)),
            ProfileKind::DeltaN => delta * lm / (5.0 * log2(profile.ambient_n.unwrap_or(m))),
        };
        grid_rational(value)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.t < 2 {
            return bad("t must be at least 2");
        }
        if self.ball_size_lo > self.ball_size_hi {
            return bad("ball window lo > hi");
        }
        if self.core_size_lo > self.core_size_hi {
            return bad("core window lo > hi");
        }
        if self.degree_threshold == 0 || self.ball_size_lo == 0 || self.core_size_lo == 0 || self.path_budget == 0 {
            return bad("thresholds must be at least 1");
        }
        if self.gamma < Rational::from_integer(0.into()) {
            return bad("gamma must be non-negative");
        }
        Ok(())
    }
}

/// Why a construction stopped without a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinorFailure {
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stuck: Option<StuckState>,
    /// Pairs joined before the failure, if any.
    pub paths_found: usize,
}

impl MinorFailure {
    pub fn new(reason: impl Into<String>) -> Self {
        MinorFailure {
            reason: reason.into(),
            stuck: None,
            paths_found: 0,
        }
    }
}

impl std::fmt::Display for MinorFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.reason)
    }
}

/// Either a verified model or the reason the construction stopped.
pub type MinorAttempt = std::result::Result<MinorModel, MinorFailure>;

pub(crate) fn pairs(t: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..t).flat_map(move |i| (i + 1..t).map(move |j| (i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn paper_windows_clamped() {
        let p = ExpansionProfile::delta(ratio(1, 256)).unwrap();
        let params = MinorSearchParams::for_regime(&p, Regime::Paper, 4, 1000).unwrap();
        assert!(params.ball_size_lo <= params.ball_size_hi);
        assert_eq!(params.ball_size_lo, 4);
        // log2(1000)^4 = 9863.84
        assert_eq!(params.degree_threshold, 9864);
        assert_eq!(params.path_budget, 100);
    }

    #[test]
    fn gamma_per_variant() {
        let p = ExpansionProfile::delta(ratio(1, 4)).unwrap();
        // m = 2^16: delta / (5 * 16) = 1/320
        let g = MinorSearchParams::default_gamma(&p, 1 << 16);
        assert!((rational::to_f64(&g) - 1.0 / 320.0).abs() < 1e-9);
        let q = ExpansionProfile::delta_n(ratio(1, 10), 1 << 20).unwrap();
        // m = 2^10: (1/10) * 10 / (5 * 20) = 1/100
        let g = MinorSearchParams::default_gamma(&q, 1 << 10);
        assert!((rational::to_f64(&g) - 0.01).abs() < 1e-9);
    }

    #[test]
    fn t_below_two_rejected() {
        let p = ExpansionProfile::delta(ratio(1, 4)).unwrap();
        assert!(MinorSearchParams::for_regime(&p, Regime::DeskScale, 1, 100).is_err());
    }
}
