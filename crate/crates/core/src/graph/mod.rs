//! Simple undirected graphs over dense vertex indices `0..n`.
//!
//! Graphs are immutable once built. Subgraph operations return a fresh
//! [`Graph`] plus a remap table (`new index -> parent index`) so nested
//! restrictions can always be traced back to the ambient vertex ids.

mod io;
pub mod named;
mod vertex_set;

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use io::{parse_edge_list, write_edge_list};
pub use vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

/// `|E| / |V|`, kept as the raw pair so the denominator is the vertex count.
#[derive(Clone, Copy, Debug)]
pub struct Density {
    edges: usize,
    vertices: usize,
}

/// A subgraph together with its `new -> parent` index table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub remap: Vec<usize>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and indices `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, order: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            edge_count += 1;
        }
        for (u, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        Ok(Graph {
            adjacency,
            edge_count,
        })
    }

    /// Like [`Graph::from_edges`] but silently drops duplicates; loops and
    /// out-of-range indices are still errors.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        list.sort_unstable();
        list.dedup();
        Graph::from_edges(n, list)
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.order(),
            })
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.last() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    pub fn average_degree(&self) -> Result<Density> {
        Density::new(self.edge_count, self.order())
    }

    /// `N(S)`: vertices outside `S` with a neighbor in `S`.
    pub fn neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        let mut inside = vec![false; self.order()];
        for v in s.iter() {
            inside[v] = true;
        }
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for u in s.iter() {
            for &w in self.neighbors(u) {
                if !inside[w] && !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        Ok(VertexSet::from_unsorted(out))
    }

    /// `B_k(U)`: vertices within distance `k` of `U`.
    pub fn ball(&self, u: &VertexSet, k: usize) -> Result<VertexSet> {
        self.check_set(u)?;
        let dist = self.bfs_distances(u.as_slice(), None, Some(k));
        Ok(VertexSet::from_sorted(
            dist.iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect(),
        ))
    }

    /// Multi-source BFS distances, skipping `blocked` vertices and stopping
    /// after `max_radius` layers.
    pub fn bfs_distances(
        &self,
        sources: &[usize],
        blocked: Option<&[bool]>,
        max_radius: Option<usize>,
    ) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if blocked.is_some_and(|b| b[s]) || dist[s].is_some() {
                continue;
            }
            dist[s] = Some(0);
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if max_radius.is_some_and(|r| du >= r) {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w].is_none() && !blocked.is_some_and(|b| b[w]) {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `|B_0(U)|, |B_1(U)|, ...` up to `max_radius` or until the ball stops growing.
    pub fn ball_sizes(&self, u: &VertexSet, max_radius: usize) -> Vec<usize> {
        let dist = self.bfs_distances(u.as_slice(), None, Some(max_radius));
        let mut layers = vec![0usize; max_radius + 1];
        let mut top = 0;
        for d in dist.iter().flatten() {
            layers[*d] += 1;
            top = top.max(*d);
        }
        let mut sizes = Vec::with_capacity(top + 1);
        let mut acc = 0;
        for layer in layers.iter().take(top + 1) {
            acc += layer;
            sizes.push(acc);
        }
        sizes
    }

    /// `G[U]`, reindexed densely in ascending order of `U`.
    pub fn induced_subgraph(&self, u: &VertexSet) -> Result<InducedSubgraph> {
        if u.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        self.check_set(u)?;
        let mut index = vec![usize::MAX; self.order()];
        for (new, old) in u.iter().enumerate() {
            index[old] = new;
        }
        let mut adjacency = Vec::with_capacity(u.len());
        let mut twice_edges = 0;
        for old in u.iter() {
            let nbrs: Vec<usize> = self
                .neighbors(old)
                .iter()
                .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                .collect();
            twice_edges += nbrs.len();
            adjacency.push(nbrs);
        }
        Ok(InducedSubgraph {
            graph: Graph {
                adjacency,
                edge_count: twice_edges / 2,
            },
            remap: u.as_slice().to_vec(),
        })
    }

    /// `G[V \ S]`.
    pub fn without(&self, s: &VertexSet) -> Result<InducedSubgraph> {
        self.induced_subgraph(&self.complement(s))
    }

    pub fn complement(&self, s: &VertexSet) -> VertexSet {
        let mut inside = vec![false; self.order()];
        for v in s.iter().filter(|&v| v < self.order()) {
            inside[v] = true;
        }
        VertexSet::from_sorted(self.vertices().filter(|&v| !inside[v]).collect())
    }

    /// Number of edges with both endpoints in `s`.
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        let mut inside = vec![false; self.order()];
        for v in s.iter() {
            inside[v] = true;
        }
        s.iter()
            .map(|u| self.neighbors(u).iter().filter(|&&w| w > u && inside[w]).count())
            .sum()
    }

    /// Components ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut comp = vec![usize::MAX; self.order()];
        let mut out = Vec::new();
        for start in self.vertices() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &w in self.neighbors(u) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            out.push(VertexSet::from_unsorted(members));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.order() > 0 && self.connected_components().len() == 1
    }

    /// Whether `G[S]` is connected (false for the empty set).
    pub fn is_connected_subset(&self, s: &VertexSet) -> bool {
        let Some(first) = s.first() else {
            return false;
        };
        let mut inside = vec![false; self.order()];
        for v in s.iter() {
            inside[v] = true;
        }
        let mut seen = vec![false; self.order()];
        seen[first] = true;
        let mut stack = vec![first];
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in self.neighbors(u) {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == s.len()
    }

    /// The component of largest average degree; ties go to the component
    /// with the smallest minimum vertex.
    pub fn densest_component(&self) -> Result<InducedSubgraph> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut best: Option<(Density, VertexSet)> = None;
        for comp in self.connected_components() {
            let dens = Density::new(self.edges_within(&comp), comp.len())?;
            if best.as_ref().is_none_or(|(b, _)| dens > *b) {
                best = Some((dens, comp));
            }
        }
        let (_, comp) = best.expect("nonempty graph has a component");
        self.induced_subgraph(&comp)
    }

    /// Relabels vertices through `map` (old -> new) into a graph of order `n`.
    pub fn relabel(&self, n: usize, map: &[usize]) -> Result<Graph> {
        Graph::from_edges(n, self.edges().map(|(u, v)| (map[u], map[v])))
    }
}

impl Density {
    pub fn new(edges: usize, vertices: usize) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(Density { edges, vertices })
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.edges), BigInt::from(self.vertices))
    }

    pub fn to_f64(&self) -> f64 {
        self.edges as f64 / self.vertices as f64
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.edges as u128 * other.vertices as u128;
        let rhs = other.edges as u128 * self.vertices as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::rational::format(&self.to_rational()))
    }
}

impl Serialize for Density {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.edges, self.vertices))
    }
}

impl<'de> Deserialize<'de> for Density {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        let (e, v) = s
            .split_once('/')
            .ok_or_else(|| D::Error::custom("density must be \"edges/vertices\""))?;
        let e = e.trim().parse().map_err(D::Error::custom)?;
        let v = v.trim().parse().map_err(D::Error::custom)?;
        Density::new(e, v).map_err(D::Error::custom)
    }
}

impl InducedSubgraph {
    pub fn to_parent(&self, v: usize) -> usize {
        self.remap[v]
    }

    pub fn set_to_parent(&self, s: &VertexSet) -> VertexSet {
        VertexSet::from_unsorted(s.iter().map(|v| self.remap[v]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;
    use crate::rational::ratio;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.iter().copied())
    }

    #[test]
    fn average_degree_examples() {
        assert_eq!(complete(4).average_degree().unwrap().to_rational(), ratio(6, 4));
        assert_eq!(path(2).average_degree().unwrap().to_rational(), ratio(1, 2));
        assert_eq!(cycle(5).average_degree().unwrap().to_rational(), ratio(1, 1));
        assert_eq!(Graph::empty(0).average_degree(), Err(Error::EmptyGraph));
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, .. })
        ));
    }

    #[test]
    fn neighborhood_examples() {
        assert_eq!(cycle(5).neighborhood(&set(&[0])).unwrap(), set(&[1, 4]));
        let k = complete(6);
        assert!(k.neighborhood(&VertexSet::from_sorted(k.vertices().collect())).unwrap().is_empty());
        let p = petersen();
        let expected = VertexSet::new(p.neighbors(0).iter().copied());
        assert_eq!(p.neighborhood(&set(&[0])).unwrap(), expected);
        assert_eq!(expected.len(), 3);
        assert!(cycle(5).neighborhood(&set(&[5])).is_err());
    }

    #[test]
    fn ball_examples() {
        assert_eq!(cycle(10).ball(&set(&[0]), 2).unwrap(), set(&[0, 1, 2, 8, 9]));
        assert_eq!(cycle(10).ball(&set(&[3, 7]), 0).unwrap(), set(&[3, 7]));
        assert_eq!(petersen().ball(&set(&[0]), 2).unwrap().len(), 10);
        assert_eq!(cycle(10).ball_sizes(&set(&[0]), 10), vec![1, 3, 5, 7, 9, 10]);
    }

    #[test]
    fn induced_subgraph_examples() {
        let k3 = complete(4).induced_subgraph(&set(&[0, 2, 3])).unwrap();
        assert_eq!(k3.graph, complete(3));
        assert_eq!(k3.remap, vec![0, 2, 3]);

        let p = petersen();
        let whole = p.induced_subgraph(&VertexSet::from_sorted(p.vertices().collect())).unwrap();
        assert_eq!(whole.graph, p);
        assert_eq!(whole.remap, (0..10).collect::<Vec<_>>());

        // outer ring of the standard labelling is 0..5
        let outer = p.induced_subgraph(&set(&[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(outer.graph.edge_count(), 5);
        assert!(outer.graph.vertices().all(|v| outer.graph.degree(v) == 2));
        assert!(outer.graph.is_connected());

        assert_eq!(p.induced_subgraph(&VertexSet::default()), Err(Error::EmptyVertexSet));
    }

    #[test]
    fn densest_component_examples() {
        let g = disjoint_union(&complete(4), &complete(3));
        let d = g.densest_component().unwrap();
        assert_eq!(d.graph, complete(4));

        let c = cycle(6);
        assert_eq!(c.densest_component().unwrap().graph, c);

        let g = disjoint_union(&complete(8), &path(10));
        let d = g.densest_component().unwrap();
        assert_eq!(d.graph, complete(8));
        assert_eq!(d.graph.average_degree().unwrap().to_rational(), ratio(28, 8));
    }

    #[test]
    fn densest_component_tie_breaks_on_smallest_vertex() {
        let g = disjoint_union(&cycle(4), &cycle(5));
        let d = g.densest_component().unwrap();
        assert_eq!(d.remap, vec![0, 1, 2, 3]);
    }

    #[test]
    fn components_sorted_by_min_vertex() {
        let g = Graph::from_edges(5, [(3, 4), (0, 2)]).unwrap();
        assert_eq!(
            g.connected_components(),
            vec![set(&[0, 2]), set(&[1]), set(&[3, 4])]
        );
    }

    #[test]
    fn density_ordering_is_exact() {
        let a = Density::new(6, 4).unwrap();
        let b = Density::new(3, 2).unwrap();
        assert_eq!(a, b);
        assert!(Density::new(28, 8).unwrap() > Density::new(34, 12).unwrap());
        assert_eq!(a.to_string(), "3/2");
    }
}
