//! Independent minor-model verification and exhaustive minor search.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::minor::MinorModel;

pub const DEFAULT_BRUTE_CAP: usize = 12;

/// Why a minor model was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelDefect {
    BranchCount { declared: usize, found: usize },
    EmptyBranchSet(usize),
    VertexOutOfRange(usize),
    OverlappingBranchSets(usize, usize),
    DisconnectedBranchSet(usize),
    MissingPath(usize, usize),
    UnexpectedPath(usize, usize),
    PathTooShort(usize, usize),
    RepeatedPathVertex(usize, usize),
    NonEdge { pair: (usize, usize), u: usize, v: usize },
    EndpointOutsideBranchSet(usize, usize),
    InternalInBranchSet { pair: (usize, usize), vertex: usize },
    SharedInternal { vertex: usize },
    OrderMismatch { declared: usize, actual: usize },
}

impl fmt::Display for ModelDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ModelDefect::*;
        match self {
            BranchCount { declared, found } => write!(f, "t = {declared} but {found} branch sets"),
            EmptyBranchSet(i) => write!(f, "branch set {i} is empty"),
            VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            OverlappingBranchSets(i, j) => write!(f, "branch sets {i} and {j} overlap"),
            DisconnectedBranchSet(i) => write!(f, "branch set {i} is disconnected"),
            MissingPath(i, j) => write!(f, "no path for pair {i}-{j}"),
            UnexpectedPath(i, j) => write!(f, "unexpected path key {i}-{j}"),
            PathTooShort(i, j) => write!(f, "path {i}-{j} has fewer than two vertices"),
            RepeatedPathVertex(i, j) => write!(f, "path {i}-{j} repeats a vertex"),
            NonEdge { pair: (i, j), u, v } => write!(f, "path {i}-{j} uses non-edge {u}-{v}"),
            EndpointOutsideBranchSet(i, j) => write!(f, "path {i}-{j} does not join V_{i} to V_{j}"),
            InternalInBranchSet { pair: (i, j), vertex } => {
                write!(f, "path {i}-{j} passes through vertex {vertex} of another branch set")
            }
            SharedInternal { vertex } => write!(f, "vertex {vertex} is internal to two paths"),
            OrderMismatch { declared, actual } => write!(f, "order {declared} declared, {actual} actual"),
        }
    }
}

/// Checks a model against `g`: branch sets nonempty, disjoint and connected;
/// each `P_ij` a path of `g` from `V_i` to `V_j` whose internal vertices
/// avoid every other branch set and every other path's internal vertices;
/// recorded order correct.
pub fn check_minor_model(g: &Graph, model: &MinorModel) -> std::result::Result<(), ModelDefect> {
    use ModelDefect::*;
    let t = model.t;
    if model.branch_sets.len() != t {
        return Err(BranchCount {
            declared: t,
            found: model.branch_sets.len(),
        });
    }
    let n = g.order();
    let mut owner = vec![usize::MAX; n];
    for (i, set) in model.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(EmptyBranchSet(i));
        }
        for v in set.iter() {
            if v >= n {
                return Err(VertexOutOfRange(v));
            }
            if owner[v] != usize::MAX {
                return Err(OverlappingBranchSets(owner[v], i));
            }
            owner[v] = i;
        }
    }
    for (i, set) in model.branch_sets.iter().enumerate() {
        if !g.is_connected_subset(set) {
            return Err(DisconnectedBranchSet(i));
        }
    }
    for &(i, j) in model.paths.keys() {
        if !(i < j && j < t) {
            return Err(UnexpectedPath(i, j));
        }
    }
    let mut internal_owner = vec![false; n];
    for i in 0..t {
        for j in i + 1..t {
            let path = model.paths.get(&(i, j)).ok_or(MissingPath(i, j))?;
            if path.len() < 2 {
                return Err(PathTooShort(i, j));
            }
            if let Some(&v) = path.iter().find(|&&v| v >= n) {
                return Err(VertexOutOfRange(v));
            }
            let mut sorted = path.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != path.len() {
                return Err(RepeatedPathVertex(i, j));
            }
            for w in path.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    return Err(NonEdge {
                        pair: (i, j),
                        u: w[0],
                        v: w[1],
                    });
                }
            }
            let (first, last) = (path[0], path[path.len() - 1]);
            if owner[first] != i || owner[last] != j {
                return Err(EndpointOutsideBranchSet(i, j));
            }
            for &v in &path[1..path.len() - 1] {
                if owner[v] != usize::MAX && owner[v] != i && owner[v] != j {
                    return Err(InternalInBranchSet { pair: (i, j), vertex: v });
                }
                if internal_owner[v] {
                    return Err(SharedInternal { vertex: v });
                }
                internal_owner[v] = true;
            }
        }
    }
    let actual = model.used_vertices().len();
    if actual != model.order {
        return Err(OrderMismatch {
            declared: model.order,
            actual,
        });
    }
    Ok(())
}

/// Hard limit on brute-force input order: parts are 32-bit masks.
pub const MAX_BRUTE_ORDER: usize = 32;

pub fn verify_minor_model(g: &Graph, model: &MinorModel) -> bool {
    check_minor_model(g, model).is_ok()
}

pub fn brute_force_minor(g: &Graph, t: usize) -> Result<Option<MinorModel>> {
    brute_force_minor_capped(g, t, DEFAULT_BRUTE_CAP)
}

/// Exhaustive `K_t`-minor search.
///
/// Inside a connected component, unused vertices can always be absorbed
/// into an adjacent branch set, so a `K_t` minor exists iff the component
/// splits into `t` connected, pairwise adjacent parts. Parts are enumerated
/// as connected sets, each containing the smallest vertex not yet covered.
/// The witness is shrunk greedily and returned with single-edge paths.
pub fn brute_force_minor_capped(g: &Graph, t: usize, cap: usize) -> Result<Option<MinorModel>> {
    let cap = cap.min(MAX_BRUTE_ORDER);
    if g.order() > cap {
        return Err(Error::BruteCapExceeded { order: g.order(), cap });
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    for comp in g.connected_components() {
        if comp.len() < t || g.edges_within(&comp) < t * (t - 1) / 2 {
            continue;
        }
        let mut search = PartitionSearch::new(g, comp.as_slice(), t);
        if let Some(parts) = search.run() {
            let parts = shrink(g, parts);
            return Ok(Some(model_from_parts(g, parts)));
        }
    }
    Ok(None)
}

/// Largest `t` with a `K_t` minor (0 for the empty graph).
pub fn hadwiger_number(g: &Graph) -> Result<usize> {
    hadwiger_number_capped(g, DEFAULT_BRUTE_CAP)
}

pub fn hadwiger_number_capped(g: &Graph, cap: usize) -> Result<usize> {
    let cap = cap.min(MAX_BRUTE_ORDER);
    if g.order() > cap {
        return Err(Error::BruteCapExceeded { order: g.order(), cap });
    }
    let mut best = 0;
    while brute_force_minor_capped(g, best + 1, cap)?.is_some() {
        best += 1;
    }
    Ok(best)
}

struct PartitionSearch<'a> {
    /// Bitmask adjacency over component-local indices.
    adj: Vec<u32>,
    vertices: &'a [usize],
    t: usize,
    full: u32,
    parts: Vec<u32>,
}

impl<'a> PartitionSearch<'a> {
    fn new(g: &'a Graph, vertices: &'a [usize], t: usize) -> Self {
        let mut local = vec![usize::MAX; g.order()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&w| local[w] != usize::MAX)
                    .fold(0u32, |acc, &w| acc | (1 << local[w]))
            })
            .collect();
        let full = if vertices.len() == 32 {
            u32::MAX
        } else {
            (1u32 << vertices.len()) - 1
        };
        PartitionSearch {
            adj,
            vertices,
            t,
            full,
            parts: Vec::new(),
        }
    }

    fn reach(&self, set: u32) -> u32 {
        let mut out = 0;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            out |= self.adj[v];
            rest &= rest - 1;
        }
        out
    }

    fn components_within(&self, set: u32) -> usize {
        let mut left = set;
        let mut count = 0;
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            loop {
                let grown = (comp | self.reach(comp)) & set;
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            left &= !comp;
            count += 1;
        }
        count
    }

    fn run(&mut self) -> Option<Vec<VertexSet>> {
        if self.place(0) {
            Some(
                self.parts
                    .iter()
                    .map(|&mask| {
                        VertexSet::new((0..self.vertices.len()).filter(|&i| mask & (1 << i) != 0).map(|i| self.vertices[i]))
                    })
                    .collect(),
            )
        } else {
            None
        }
    }

    /// Places parts until all vertices in the component are covered.
    fn place(&mut self, used: u32) -> bool {
        let remaining = self.full & !used;
        let parts_left = self.t - self.parts.len();
        if parts_left == 0 {
            return remaining == 0;
        }
        if (remaining.count_ones() as usize) < parts_left {
            return false;
        }
        if self.components_within(remaining) > parts_left {
            return false;
        }
        let root = remaining.trailing_zeros();
        if parts_left == 1 {
            // The last part is everything left; it must be connected and
            // touch every earlier part.
            if self.components_within(remaining) != 1 {
                return false;
            }
            let reach = self.reach(remaining);
            if self.parts.iter().all(|&p| p & reach != 0) {
                self.parts.push(remaining);
                return true;
            }
            return false;
        }
        let start = 1u32 << root;
        let frontier = self.adj[root as usize] & remaining;
        self.extend(used, remaining, start, frontier, 0)
    }

    /// Visits every connected set `set ∪ X` (X drawn from the frontier,
    /// avoiding `banned`) exactly once, trying each as the next part.
    fn extend(&mut self, used: u32, allowed: u32, set: u32, frontier: u32, banned: u32) -> bool {
        if self.try_part(used, set) {
            return true;
        }
        let mut left = frontier;
        let mut banned = banned;
        while left != 0 {
            let bit = left & left.wrapping_neg();
            left &= !bit;
            let v = bit.trailing_zeros() as usize;
            let grown = set | bit;
            let next = (left | self.adj[v]) & allowed & !grown & !banned;
            if self.extend(used, allowed, grown, next, banned) {
                return true;
            }
            banned |= bit;
        }
        false
    }

    fn try_part(&mut self, used: u32, part: u32) -> bool {
        let reach = self.reach(part);
        if !self.parts.iter().all(|&p| p & reach != 0) {
            return false;
        }
        self.parts.push(part);
        if self.place(used | part) {
            return true;
        }
        self.parts.pop();
        false
    }
}

/// Drops branch-set vertices (largest first) while the parts stay
/// connected and pairwise adjacent.
fn shrink(g: &Graph, mut parts: Vec<VertexSet>) -> Vec<VertexSet> {
    let adjacent = |a: &VertexSet, b: &VertexSet| a.iter().any(|u| g.neighbors(u).iter().any(|&w| b.contains(w)));
    loop {
        let mut changed = false;
        for i in 0..parts.len() {
            let members: Vec<usize> = parts[i].as_slice().iter().rev().copied().collect();
            for v in members {
                if parts[i].len() == 1 {
                    break;
                }
                let candidate = parts[i].difference(&VertexSet::singleton(v));
                if !g.is_connected_subset(&candidate) {
                    continue;
                }
                if (0..parts.len()).filter(|&j| j != i).all(|j| adjacent(&candidate, &parts[j])) {
                    parts[i] = candidate;
                    changed = true;
                }
            }
        }
        if !changed {
            return parts;
        }
    }
}

/// Single-edge paths between adjacent parts, lexicographically least edge.
fn model_from_parts(g: &Graph, parts: Vec<VertexSet>) -> MinorModel {
    let mut paths = BTreeMap::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let edge = parts[i]
                .iter()
                .find_map(|u| g.neighbors(u).iter().filter(|&&w| parts[j].contains(w)).min().map(|&w| vec![u, w]))
                .expect("parts are pairwise adjacent");
            paths.insert((i, j), edge);
        }
    }
    MinorModel::new(parts, paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, cycle, path, petersen, star};

    fn singletons_model(t: usize) -> MinorModel {
        let mut paths = BTreeMap::new();
        for i in 0..t {
            for j in i + 1..t {
                paths.insert((i, j), vec![i, j]);
            }
        }
        MinorModel::new((0..t).map(VertexSet::singleton).collect(), paths)
    }

    #[test]
    fn complete_graph_model_verifies() {
        assert_eq!(check_minor_model(&complete(4), &singletons_model(4)), Ok(()));
    }

    #[test]
    fn overlapping_sets_rejected() {
        let mut m = singletons_model(4);
        m.branch_sets[1] = VertexSet::new([0, 1]);
        m.order = m.used_vertices().len();
        assert_eq!(check_minor_model(&complete(4), &m), Err(ModelDefect::OverlappingBranchSets(0, 1)));
    }

    #[test]
    fn non_edge_and_empty_set_rejected() {
        let m = singletons_model(3);
        assert!(matches!(check_minor_model(&path(3), &m), Err(ModelDefect::NonEdge { .. })));
        let mut e = singletons_model(3);
        e.branch_sets[2] = VertexSet::new([]);
        assert_eq!(check_minor_model(&complete(3), &e), Err(ModelDefect::EmptyBranchSet(2)));
    }

    #[test]
    fn petersen_matching_contraction() {
        // Spokes i -- i+5 form a perfect matching; contracting it gives K_5.
        let g = petersen();
        let sets: Vec<VertexSet> = (0..5).map(|i| VertexSet::new([i, i + 5])).collect();
        let mut paths = BTreeMap::new();
        for i in 0..5 {
            for j in i + 1..5 {
                let edge = sets[i]
                    .iter()
                    .find_map(|u| g.neighbors(u).iter().find(|&&w| sets[j].contains(w)).map(|&w| vec![u, w]))
                    .unwrap();
                paths.insert((i, j), edge);
            }
        }
        let m = MinorModel::new(sets, paths);
        assert_eq!(check_minor_model(&g, &m), Ok(()));
    }

    #[test]
    fn brute_force_examples() {
        let m = brute_force_minor(&cycle(5), 3).unwrap().unwrap();
        assert!(verify_minor_model(&cycle(5), &m));
        assert_eq!(brute_force_minor(&path(8), 3).unwrap(), None);
        assert_eq!(brute_force_minor(&star(7), 3).unwrap(), None);
        // Six pairwise adjacent branch sets in a 15-edge triangle-free graph
        // would be impossible; the enumeration confirms it.
        assert_eq!(brute_force_minor(&petersen(), 6).unwrap(), None);
        let m5 = brute_force_minor(&petersen(), 5).unwrap().unwrap();
        assert!(verify_minor_model(&petersen(), &m5));
    }

    #[test]
    fn hadwiger_examples() {
        assert_eq!(hadwiger_number(&complete(5)).unwrap(), 5);
        assert_eq!(hadwiger_number(&cycle(7)).unwrap(), 3);
        assert_eq!(hadwiger_number(&petersen()).unwrap(), 5);
        assert_eq!(hadwiger_number(&path(4)).unwrap(), 2);
        assert_eq!(hadwiger_number(&Graph::empty(3)).unwrap(), 1);
        assert!(matches!(
            hadwiger_number(&complete(13)),
            Err(Error::BruteCapExceeded { order: 13, cap: 12 })
        ));
    }
}
