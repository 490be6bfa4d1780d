use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::expansion::{ExpansionProfile, ProfileKind};
use crate::graph::{Graph, VertexSet};
use crate::rational;

/// Length bound for a connecting path in an expander of order `m` avoiding a
/// small forbidden set: `(20/delta) log m (log log m)^3`, or
/// `(20/delta) log n log log n` for the ambient-order variant.
pub fn claim_length_bound(profile: &ExpansionProfile, m: usize) -> f64 {
    let delta = rational::to_f64(&profile.delta);
    match profile.kind {
        ProfileKind::Delta => {
            let l = (m.max(2) as f64).log2();
            20.0 / delta * l * l.log2().max(1.0).powi(3)
        }
        ProfileKind::DeltaN => {
            let l = (profile.ambient_n.unwrap_or(m).max(2) as f64).log2();
            20.0 / delta * l * l.log2().max(1.0)
        }
    }
}

/// Shortest path from any vertex with `source[v]` to any vertex with
/// `target[v]`, avoiding `blocked`. Neighbors are scanned in increasing
/// order, so the result is deterministic.
pub fn shortest_path_avoiding(g: &Graph, sources: &[usize], target: &[bool], blocked: &[bool]) -> Option<Vec<usize>> {
    let n = g.order();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if blocked[s] || seen[s] {
            continue;
        }
        if target[s] {
            return Some(vec![s]);
        }
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if seen[w] || blocked[w] {
                continue;
            }
            seen[w] = true;
            parent[w] = u;
            if target[w] {
                let mut path = vec![w];
                let mut cur = w;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

/// Shortest `U`-`V` path in `G - forbidden`; `None` if there is none.
///
/// With `length_bound`, a longer path is reported as an invariant
/// violation: callers pass it only when the bound's hypotheses hold.
pub fn grow_ball_path(
    g: &Graph,
    u: &VertexSet,
    v: &VertexSet,
    forbidden: &VertexSet,
    length_bound: Option<f64>,
) -> Result<Option<Vec<usize>>> {
    g.check_set(u)?;
    g.check_set(v)?;
    g.check_set(forbidden)?;
    if !u.is_disjoint(v) || !u.is_disjoint(forbidden) || !v.is_disjoint(forbidden) {
        return Err(Error::InvalidParameter("U, V and forbidden set must be pairwise disjoint".into()));
    }
    let path = shortest_path_avoiding(g, u.as_slice(), &v.mask(g.order()), &forbidden.mask(g.order()));
    if let (Some(p), Some(bound)) = (&path, length_bound) {
        if (p.len() - 1) as f64 > bound {
            return Err(Error::Invariant(format!(
                "path of length {} exceeds the expander bound {bound:.1}",
                p.len() - 1
            )));
        }
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, cycle, petersen};

    fn one(v: usize) -> VertexSet {
        VertexSet::singleton(v)
    }

    #[test]
    fn examples() {
        let none = VertexSet::new([]);
        let p = grow_ball_path(&cycle(10), &one(0), &one(5), &none, None).unwrap().unwrap();
        assert_eq!(p.len() - 1, 5);
        let p = grow_ball_path(&complete(5), &one(0), &one(1), &none, None).unwrap().unwrap();
        assert_eq!(p, vec![0, 1]);
        let g = petersen();
        let far = g.vertices().find(|&w| w != 0 && !g.has_edge(0, w)).unwrap();
        let p = grow_ball_path(&g, &one(0), &one(far), &none, None).unwrap().unwrap();
        assert_eq!(p.len() - 1, 2);
    }

    #[test]
    fn forbidden_vertices_avoided() {
        let p = grow_ball_path(&cycle(10), &one(0), &one(2), &one(1), None).unwrap().unwrap();
        assert_eq!(p.len() - 1, 8);
        assert_eq!(grow_ball_path(&cycle(10), &one(0), &one(5), &VertexSet::new([2, 8]), None).unwrap(), None);
    }

    #[test]
    fn overlapping_inputs_rejected() {
        assert!(grow_ball_path(&cycle(5), &one(0), &one(0), &VertexSet::new([]), None).is_err());
    }

    #[test]
    fn bound_enforced_when_requested() {
        let none = VertexSet::new([]);
        assert!(matches!(
            grow_ball_path(&cycle(10), &one(0), &one(5), &none, Some(3.0)),
            Err(Error::Invariant(_))
        ));
    }
}
