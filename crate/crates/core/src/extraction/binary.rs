//! Compact binary trace log.
//!
//! Layout: the magic bytes `MLTR`, then every field of [`ExtractionTrace`]
//! in declaration order. Integers are LEB128 varints, rationals are
//! length-prefixed `"p/q"` strings, vertex sets are a length followed by
//! gaps between consecutive sorted members.

use super::{Case, ExtractionStep, ExtractionTrace, IntervalTally, Outcome, PipelineConfig};
use crate::error::{Error, Result};
use crate::expansion::{ExpansionProfile, ExpansionViolation, ProfileKind};
use crate::graph::{Density, VertexSet};
use crate::rational::{self, Rational};

const MAGIC: &[u8; 4] = b"MLTR";

struct Writer(Vec<u8>);

impl Writer {
    fn uint(&mut self, mut v: u64) {
        loop {
            let byte = (v & 0x7f) as u8;
            v >>= 7;
            if v == 0 {
                self.0.push(byte);
                return;
            }
            self.0.push(byte | 0x80);
        }
    }

    fn size(&mut self, v: usize) {
        self.uint(v as u64);
    }

    fn flag(&mut self, b: bool) {
        self.0.push(b as u8);
    }

    fn text(&mut self, s: &str) {
        self.size(s.len());
        self.0.extend_from_slice(s.as_bytes());
    }

    fn rational(&mut self, r: &Rational) {
        self.text(&rational::format(r));
    }

    fn density(&mut self, d: &Density) {
        self.size(d.edges());
        self.size(d.vertices());
    }

    fn set(&mut self, s: &VertexSet) {
        self.size(s.len());
        let mut prev = 0;
        for v in s.iter() {
            self.size(v - prev);
            prev = v;
        }
    }

    fn sizes(&mut self, vs: &[usize]) {
        self.size(vs.len());
        for &v in vs {
            self.size(v);
        }
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

fn malformed(what: &str) -> Error {
    Error::BinaryFormat(what.to_string())
}

impl Reader<'_> {
    fn byte(&mut self) -> Result<u8> {
        let b = *self.bytes.get(self.pos).ok_or_else(|| malformed("unexpected end of input"))?;
        self.pos += 1;
        Ok(b)
    }

    fn uint(&mut self) -> Result<u64> {
        let mut out = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            out |= u64::from(b & 0x7f) << shift;
            if b & 0x80 == 0 {
                return Ok(out);
            }
        }
        Err(malformed("varint too long"))
    }

    fn size(&mut self) -> Result<usize> {
        usize::try_from(self.uint()?).map_err(|_| malformed("integer overflow"))
    }

    fn flag(&mut self) -> Result<bool> {
        match self.byte()? {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(malformed("bad flag byte")),
        }
    }

    fn text(&mut self) -> Result<String> {
        let len = self.size()?;
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| malformed("string runs past end"))?;
        let s = std::str::from_utf8(&self.bytes[self.pos..end]).map_err(|_| malformed("invalid utf-8"))?;
        self.pos = end;
        Ok(s.to_string())
    }

    fn rational(&mut self) -> Result<Rational> {
        rational::parse(&self.text()?).map_err(|_| malformed("bad rational"))
    }

    fn density(&mut self) -> Result<Density> {
        let e = self.size()?;
        let v = self.size()?;
        Density::new(e, v).map_err(|_| malformed("density with zero vertices"))
    }

    fn set(&mut self) -> Result<VertexSet> {
        let len = self.size()?;
        let mut members = Vec::with_capacity(len.min(1 << 20));
        let mut prev = 0usize;
        for i in 0..len {
            let gap = self.size()?;
            if i > 0 && gap == 0 {
                return Err(malformed("repeated set member"));
            }
            prev = prev.checked_add(gap).ok_or_else(|| malformed("set member overflow"))?;
            members.push(prev);
        }
        VertexSet::try_from_sorted(members).map_err(|_| malformed("unsorted set"))
    }

    fn sizes(&mut self) -> Result<Vec<usize>> {
        let len = self.size()?;
        (0..len).map(|_| self.size()).collect()
    }
}

fn case_code(c: Case) -> u8 {
    match c {
        Case::Removal => 0,
        Case::Restriction => 1,
        Case::Fallback => 2,
    }
}

fn outcome_code(o: Outcome) -> u8 {
    match o {
        Outcome::ExpanderCertified => 0,
        Outcome::HeuristicNoViolationFound => 1,
        Outcome::SmallGraphStop => 2,
        Outcome::ComponentFallback => 3,
    }
}

pub fn encode_trace(trace: &ExtractionTrace) -> Vec<u8> {
    let mut w = Writer(MAGIC.to_vec());
    w.uint(u64::from(trace.version));
    w.size(trace.input_order);
    w.density(&trace.input_density);
    w.0.push(match trace.profile.kind {
        ProfileKind::Delta => 0,
        ProfileKind::DeltaN => 1,
    });
    w.rational(&trace.profile.delta);
    w.size(trace.profile.ambient_n.map_or(0, |n| n + 1));
    w.flag(trace.within_hypothesis);
    let c = &trace.config;
    for v in [c.exact_cap, c.probe_cap, c.stop_order_delta, c.stop_order_delta_n, c.brute_cap] {
        w.size(v);
    }
    w.uint(c.rng_seed);
    w.size(trace.steps.len());
    for s in &trace.steps {
        w.size(s.iteration);
        w.size(s.graph_order);
        w.density(&s.density_before);
        w.set(&s.violation.witness);
        w.uint(u64::from(s.violation.scale));
        w.size(s.violation.boundary);
        w.rational(&s.violation.observed_ratio);
        w.rational(&s.violation.required_ratio_bound);
        w.0.push(case_code(s.case_taken));
        w.set(&s.kept);
        w.density(&s.density_after);
    }
    w.0.push(outcome_code(trace.outcome));
    match &trace.final_selection {
        Some(sel) => {
            w.flag(true);
            w.set(sel);
        }
        None => w.flag(false),
    }
    w.size(trace.final_order);
    w.density(&trace.final_density);
    w.sizes(&trace.remap);
    w.size(trace.tallies.len());
    for t in &trace.tallies {
        w.uint(u64::from(t.k));
        w.size(t.counts.len());
        for &a in &t.counts {
            w.uint(a);
        }
        w.rational(&t.growth);
        w.flag(t.within_nominal_bound);
    }
    w.0
}

pub fn decode_trace(bytes: &[u8]) -> Result<ExtractionTrace> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(malformed("missing magic"));
    }
    let mut r = Reader { bytes, pos: 4 };
    let version = u32::try_from(r.uint()?).map_err(|_| malformed("version overflow"))?;
    let input_order = r.size()?;
    let input_density = r.density()?;
    let kind = match r.byte()? {
        0 => ProfileKind::Delta,
        1 => ProfileKind::DeltaN,
        _ => return Err(malformed("bad profile kind")),
    };
    let delta = r.rational()?;
    let ambient_n = r.size()?.checked_sub(1);
    let within_hypothesis = r.flag()?;
    let config = PipelineConfig {
        exact_cap: r.size()?,
        probe_cap: r.size()?,
        stop_order_delta: r.size()?,
        stop_order_delta_n: r.size()?,
        brute_cap: r.size()?,
        rng_seed: r.uint()?,
    };
    let step_count = r.size()?;
    let mut steps = Vec::with_capacity(step_count.min(1 << 16));
    for _ in 0..step_count {
        let iteration = r.size()?;
        let graph_order = r.size()?;
        let density_before = r.density()?;
        let violation = ExpansionViolation {
            witness: r.set()?,
            scale: u32::try_from(r.uint()?).map_err(|_| malformed("scale overflow"))?,
            boundary: r.size()?,
            observed_ratio: r.rational()?,
            required_ratio_bound: r.rational()?,
        };
        let case_taken = match r.byte()? {
            0 => Case::Removal,
            1 => Case::Restriction,
            2 => Case::Fallback,
            _ => return Err(malformed("bad case code")),
        };
        steps.push(ExtractionStep {
            iteration,
            graph_order,
            density_before,
            violation,
            case_taken,
            kept: r.set()?,
            density_after: r.density()?,
        });
    }
    let outcome = match r.byte()? {
        0 => Outcome::ExpanderCertified,
        1 => Outcome::HeuristicNoViolationFound,
        2 => Outcome::SmallGraphStop,
        3 => Outcome::ComponentFallback,
        _ => return Err(malformed("bad outcome code")),
    };
    let final_selection = if r.flag()? { Some(r.set()?) } else { None };
    let final_order = r.size()?;
    let final_density = r.density()?;
    let remap = r.sizes()?;
    let tally_count = r.size()?;
    let mut tallies = Vec::with_capacity(tally_count.min(64));
    for _ in 0..tally_count {
        let k = u32::try_from(r.uint()?).map_err(|_| malformed("interval overflow"))?;
        let len = r.size()?;
        let counts = (0..len).map(|_| r.uint()).collect::<Result<Vec<_>>>()?;
        tallies.push(IntervalTally {
            k,
            counts,
            growth: r.rational()?,
            within_nominal_bound: r.flag()?,
        });
    }
    if r.pos != bytes.len() {
        return Err(malformed("trailing bytes"));
    }
    Ok(ExtractionTrace {
        version,
        input_order,
        input_density,
        profile: ExpansionProfile { kind, delta, ambient_n },
        within_hypothesis,
        config,
        steps,
        outcome,
        final_selection,
        final_order,
        final_density,
        remap,
        tallies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::extract_expander;
    use crate::graph::named::{barbell, complete, disjoint_union};
    use crate::rational::ratio;

    #[test]
    fn round_trip() {
        let g = disjoint_union(&barbell(6, 4), &complete(5));
        let p = ExpansionProfile::delta_n(ratio(1, 1), g.order()).unwrap();
        let (_, trace) = extract_expander(&g, &p, &PipelineConfig::default()).unwrap();
        let bytes = encode_trace(&trace);
        assert_eq!(&bytes[..4], b"MLTR");
        assert_eq!(decode_trace(&bytes).unwrap(), trace);
        assert!(bytes.len() < trace.to_json().len());
        assert_eq!(ExtractionTrace::from_json(&trace.to_json()).unwrap(), trace);
    }

    #[test]
    fn truncation_detected() {
        let g = disjoint_union(&complete(6), &complete(3));
        let p = ExpansionProfile::delta_n(ratio(1, 10), 9).unwrap();
        let (_, trace) = extract_expander(&g, &p, &PipelineConfig::default()).unwrap();
        let bytes = encode_trace(&trace);
        for cut in [0, 3, 5, bytes.len() - 1] {
            assert!(decode_trace(&bytes[..cut]).is_err());
        }
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(decode_trace(&extra).is_err());
    }
}
