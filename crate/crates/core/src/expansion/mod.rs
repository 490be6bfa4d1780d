//! Multi-scale vertex expansion.
//!
//! A graph on `m` vertices is checked at scales `d = 0..=floor(log2 log2 m) - 1`:
//! every `S` with `|S| <= m / 2^(2^d)` must satisfy `|N(S)| >= psi(d, m) |S|`.
//! Two threshold families are supported through [`ProfileKind`]:
//!
//! * [`ProfileKind::Delta`]: `psi = delta 2^d / (log2 m (log2 log2 m)^2)`
//! * [`ProfileKind::DeltaN`]: `psi = delta 2^d / log2 n` for a fixed ambient `n`
//!
//! Thresholds are compared through a rational upper bound of `psi`
//! ([`RequiredRatio::bound`]); `|N(S)| < bound * |S|` is what "violation"
//! means everywhere in this crate.

mod exact;
mod heuristic;

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::{self, serde_pq, Rational};

pub use exact::{check_expander_exact, enumerate_violations, DEFAULT_EXACT_CAP};
pub use heuristic::{find_violation_heuristic, heuristic_check, HeuristicOptions, DEFAULT_PROBE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    Delta,
    DeltaN,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionProfile {
    pub kind: ProfileKind,
    #[serde(with = "serde_pq")]
    pub delta: Rational,
    /// Ambient order `n`; only meaningful for [`ProfileKind::DeltaN`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_n: Option<usize>,
}

/// `psi(d, m)` as a float and as a provable rational upper bound.
#[derive(Clone, Debug, PartialEq)]
pub struct RequiredRatio {
    pub scale: u32,
    pub approx: f64,
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionViolation {
    pub witness: VertexSet,
    pub scale: u32,
    /// `|N(S)|`
    pub boundary: usize,
    #[serde(with = "serde_pq")]
    pub observed_ratio: Rational,
    #[serde(with = "serde_pq")]
    pub required_ratio_bound: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMode {
    Exact,
    HeuristicNoViolationFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpanderCertificate {
    pub mode: CertificateMode,
    pub profile: ExpansionProfile,
    pub order: usize,
    pub scales_checked: Vec<u32>,
    /// Subsets enumerated (exact) or ball probes run (heuristic).
    pub subset_count_or_probe_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Certified(ExpanderCertificate),
    Violated(ExpansionViolation),
}

/// Version tag of the JSON documents produced by [`CheckOutcome::to_json`].
pub const VERDICT_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct VerdictDoc {
    version: u32,
    mode: String,
    kind: ProfileKind,
    delta: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ambient_n: Option<usize>,
    order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    observed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    required: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scales_checked: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
}

impl ProfileKind {
    pub fn label(&self) -> &'static str {
        match self {
            ProfileKind::Delta => "delta",
            ProfileKind::DeltaN => "delta-n",
        }
    }
}

impl ExpansionProfile {
    pub fn delta(delta: Rational) -> Result<Self> {
        Self::check_delta(&delta)?;
        Ok(ExpansionProfile {
            kind: ProfileKind::Delta,
            delta,
            ambient_n: None,
        })
    }

    pub fn delta_n(delta: Rational, ambient_n: usize) -> Result<Self> {
        Self::check_delta(&delta)?;
        if ambient_n < 4 {
            return Err(Error::InvalidProfile(format!(
                "ambient n must be at least 4, got {ambient_n}"
            )));
        }
        Ok(ExpansionProfile {
            kind: ProfileKind::DeltaN,
            delta,
            ambient_n: Some(ambient_n),
        })
    }

    fn check_delta(delta: &Rational) -> Result<()> {
        if *delta <= Rational::zero() {
            return Err(Error::InvalidProfile("delta must be positive".into()));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        Self::check_delta(&self.delta)?;
        match (self.kind, self.ambient_n) {
            (ProfileKind::DeltaN, Some(n)) if n >= 4 => Ok(()),
            (ProfileKind::DeltaN, _) => Err(Error::InvalidProfile("delta-n needs ambient n >= 4".into())),
            (ProfileKind::Delta, _) => Ok(()),
        }
    }

    /// Whether delta lies in the range the density guarantees are stated for:
    /// `delta <= 1/256` for [`ProfileKind::Delta`], `delta < 1/4` for
    /// [`ProfileKind::DeltaN`]. Profiles outside it are accepted and flagged.
    pub fn within_hypothesis(&self) -> bool {
        match self.kind {
            ProfileKind::Delta => self.delta <= rational::ratio(1, 256),
            ProfileKind::DeltaN => self.delta < rational::ratio(1, 4),
        }
    }

    /// `floor(log2 log2 m) - 1`, clamped at `-1` (meaning: no scales).
    pub fn scale_cap(&self, m: usize) -> i64 {
        match rational::floor_log2_log2(m as u64) {
            Some(ll) => ll as i64 - 1,
            None => -1,
        }
    }

    pub fn scales(&self, m: usize) -> Option<RangeInclusive<u32>> {
        let cap = self.scale_cap(m);
        (cap >= 0).then_some(0..=cap as u32)
    }

    /// Largest scale `d` with `size <= m / 2^(2^d)`, or `None` when the size
    /// exceeds `m / 2` or the scale range is empty.
    pub fn scale_for_size(&self, m: usize, size: usize) -> Option<u32> {
        let cap = self.scale_cap(m);
        if cap < 0 || size == 0 {
            return None;
        }
        let mut best = None;
        for d in 0..=cap as u32 {
            if fits_scale(m, size, d) {
                best = Some(d);
            } else {
                break;
            }
        }
        best
    }

    /// The required expansion ratio at scale `d` for a graph of order `m`.
    pub fn required_ratio(&self, d: u32, m: usize) -> Result<RequiredRatio> {
        self.validate()?;
        let cap = self.scale_cap(m);
        if cap < 0 {
            return Err(Error::ScaleRangeEmpty(m));
        }
        if d as i64 > cap {
            return Err(Error::ScaleOutOfRange { scale: d, max: cap, order: m });
        }
        let pow = Rational::from_integer(BigInt::one() << d);
        let delta_f = rational::to_f64(&self.delta);
        let (approx, denominator) = match self.kind {
            ProfileKind::Delta => {
                let log_m = (m as f64).log2();
                let approx = delta_f * (d as f64).exp2() / (log_m * log_m.log2().powi(2));
                let lo = rational::log2_lower_usize(m);
                let lolo = rational::log2_lower(&lo);
                (approx, &lo * &lolo * &lolo)
            }
            ProfileKind::DeltaN => {
                let n = self.ambient_n.expect("validated");
                let approx = delta_f * (d as f64).exp2() / (n as f64).log2();
                (approx, rational::log2_lower_usize(n))
            }
        };
        Ok(RequiredRatio {
            scale: d,
            approx,
            bound: &self.delta * pow / denominator,
        })
    }

    /// Thresholds for every scale of a graph of order `m` (empty if none).
    pub fn thresholds(&self, m: usize) -> Result<Vec<RequiredRatio>> {
        match self.scales(m) {
            Some(range) => range.map(|d| self.required_ratio(d, m)).collect(),
            None => Ok(Vec::new()),
        }
    }

    /// `1 - delta` or `1 - 2 delta`: the guaranteed fraction of the input
    /// density retained by extraction.
    pub fn retained_density_factor(&self) -> Rational {
        match self.kind {
            ProfileKind::Delta => Rational::one() - &self.delta,
            ProfileKind::DeltaN => Rational::one() - rational::int(2) * &self.delta,
        }
    }
}

/// `size * 2^(2^d) <= m`
pub(crate) fn fits_scale(m: usize, size: usize, d: u32) -> bool {
    if d >= 7 {
        return false;
    }
    let factor: u128 = 1u128 << (1u32 << d);
    (size as u128).saturating_mul(factor) <= m as u128
}

impl ExpansionViolation {
    /// Builds the violation for `(witness, scale)` if it is genuine on `g`.
    pub fn build(
        g: &Graph,
        profile: &ExpansionProfile,
        witness: VertexSet,
        scale: u32,
    ) -> Result<Option<Self>> {
        g.check_set(&witness)?;
        if witness.is_empty() || !fits_scale(g.order(), witness.len(), scale) {
            return Ok(None);
        }
        let required = profile.required_ratio(scale, g.order())?;
        let boundary = g.neighborhood(&witness)?.len();
        if !rational::lt_cross(boundary as u128, witness.len() as u128, &required.bound) {
            return Ok(None);
        }
        Ok(Some(ExpansionViolation {
            observed_ratio: Rational::new(BigInt::from(boundary), BigInt::from(witness.len())),
            witness,
            scale,
            boundary,
            required_ratio_bound: required.bound,
        }))
    }

    /// Re-verifies every recorded field against the live graph.
    pub fn recheck(&self, g: &Graph, profile: &ExpansionProfile) -> Result<()> {
        let stale = |why: String| Err(Error::StaleViolation(why));
        if self.witness.is_empty() {
            return stale("empty witness".into());
        }
        if g.check_set(&self.witness).is_err() {
            return stale("witness outside graph".into());
        }
        if !fits_scale(g.order(), self.witness.len(), self.scale) {
            return stale(format!(
                "|S| = {} exceeds m / 2^(2^{}) for m = {}",
                self.witness.len(),
                self.scale,
                g.order()
            ));
        }
        let required = match profile.required_ratio(self.scale, g.order()) {
            Ok(r) => r,
            Err(e) => return stale(e.to_string()),
        };
        if required.bound != self.required_ratio_bound {
            return stale("recorded threshold does not match profile".into());
        }
        let boundary = g.neighborhood(&self.witness)?.len();
        if boundary != self.boundary {
            return stale(format!("|N(S)| is {boundary}, recorded {}", self.boundary));
        }
        let observed = Rational::new(BigInt::from(boundary), BigInt::from(self.witness.len()));
        if observed != self.observed_ratio {
            return stale("observed ratio mismatch".into());
        }
        if observed >= self.required_ratio_bound {
            return stale("set expands enough".into());
        }
        Ok(())
    }

    pub fn is_genuine(&self, g: &Graph, profile: &ExpansionProfile) -> bool {
        self.recheck(g, profile).is_ok()
    }

    /// Tie-break key: scale, then size, then members lexicographically.
    pub fn order_key(&self) -> (u32, usize, &VertexSet) {
        (self.scale, self.witness.len(), &self.witness)
    }
}

impl CheckOutcome {
    pub fn violation(&self) -> Option<&ExpansionViolation> {
        match self {
            CheckOutcome::Violated(v) => Some(v),
            CheckOutcome::Certified(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, CheckOutcome::Certified(_))
    }

    /// Versioned JSON document:
    /// `{version, mode, kind, delta: "p/q", order, scale, witness, observed, ...}`.
    pub fn to_json(&self, profile: &ExpansionProfile, order: usize) -> String {
        let mut doc = VerdictDoc {
            version: VERDICT_SCHEMA_VERSION,
            mode: String::new(),
            kind: profile.kind,
            delta: rational::format(&profile.delta),
            ambient_n: profile.ambient_n,
            order,
            scale: None,
            witness: None,
            observed: None,
            required: None,
            scales_checked: None,
            count: None,
        };
        match self {
            CheckOutcome::Violated(v) => {
                doc.mode = "violation".into();
                doc.scale = Some(v.scale);
                doc.witness = Some(v.witness.as_slice().to_vec());
                doc.observed = Some(rational::format(&v.observed_ratio));
                doc.required = Some(rational::format(&v.required_ratio_bound));
            }
            CheckOutcome::Certified(c) => {
                doc.mode = match c.mode {
                    CertificateMode::Exact => "exact".into(),
                    CertificateMode::HeuristicNoViolationFound => "heuristic-no-violation-found".into(),
                };
                doc.scales_checked = Some(c.scales_checked.clone());
                doc.count = Some(c.subset_count_or_probe_count);
            }
        }
        serde_json::to_string_pretty(&doc).expect("verdict serializes")
    }

    /// Parses a document written by [`CheckOutcome::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |e: String| Error::InvalidParameter(format!("verdict json: {e}"));
        let doc: VerdictDoc = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let delta = rational::parse(&doc.delta)?;
        let profile = ExpansionProfile {
            kind: doc.kind,
            delta,
            ambient_n: doc.ambient_n,
        };
        profile.validate()?;
        match doc.mode.as_str() {
            "violation" => {
                let witness = VertexSet::try_from_sorted(doc.witness.ok_or_else(|| bad("missing witness".into()))?)?;
                let observed = rational::parse(&doc.observed.ok_or_else(|| bad("missing observed".into()))?)?;
                let required = rational::parse(&doc.required.ok_or_else(|| bad("missing required".into()))?)?;
                let boundary_r = &observed * Rational::from_integer(BigInt::from(witness.len()));
                if !boundary_r.is_integer() {
                    return Err(bad("observed ratio inconsistent with witness size".into()));
                }
                let boundary: usize = boundary_r
                    .to_integer()
                    .try_into()
                    .map_err(|_| bad("boundary out of range".into()))?;
                Ok(CheckOutcome::Violated(ExpansionViolation {
                    witness,
                    scale: doc.scale.ok_or_else(|| bad("missing scale".into()))?,
                    boundary,
                    observed_ratio: observed,
                    required_ratio_bound: required,
                }))
            }
            "exact" | "heuristic-no-violation-found" => Ok(CheckOutcome::Certified(ExpanderCertificate {
                mode: if doc.mode == "exact" {
                    CertificateMode::Exact
                } else {
                    CertificateMode::HeuristicNoViolationFound
                },
                profile,
                order: doc.order,
                scales_checked: doc.scales_checked.unwrap_or_default(),
                subset_count_or_probe_count: doc.count.unwrap_or(0),
            })),
            other => Err(bad(format!("unknown mode {other:?}"))),
        }
    }
}

/// Exact check when `order <= exact_cap`, heuristic probe otherwise. Graphs
/// whose scale range is empty are vacuously certified.
pub fn check_expander(
    g: &Graph,
    profile: &ExpansionProfile,
    exact_cap: usize,
    heuristic: &HeuristicOptions,
) -> Result<CheckOutcome> {
    if profile.scales(g.order()).is_none() {
        profile.validate()?;
        return Ok(CheckOutcome::Certified(ExpanderCertificate {
            mode: CertificateMode::Exact,
            profile: profile.clone(),
            order: g.order(),
            scales_checked: Vec::new(),
            subset_count_or_probe_count: 0,
        }));
    }
    if g.order() <= exact_cap {
        check_expander_exact(g, profile, exact_cap)
    } else {
        heuristic_check(g, profile, heuristic)
    }
}
