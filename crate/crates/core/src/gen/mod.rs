//! Seeded graph generators and the scaling sweep.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, consuming only `next_u64` draws, so the output does not
//! depend on the platform word size.

mod sweep;

use std::collections::VecDeque;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use sweep::{experiment_sweep, trial_seed, AggregateRow, SweepConfig, SweepReport, TrialRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenModel {
    /// `G(n, c/n)` with `c = param`.
    Gnp,
    /// `G(n, base_c/n)` with every cycle shorter than `param` broken.
    HighGirth,
    /// `n / param` disjoint cliques of order `param`.
    DisjointCliques,
    /// Uniform-ish `param`-regular graph (Steger-Wormald pairing).
    RandomRegular,
}

impl GenModel {
    pub fn label(&self) -> &'static str {
        match self {
            GenModel::Gnp => "gnp",
            GenModel::HighGirth => "high-girth",
            GenModel::DisjointCliques => "disjoint-cliques",
            GenModel::RandomRegular => "random-regular",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub model: GenModel,
    pub n: usize,
    pub param: u64,
    /// Edge-probability numerator of the base random graph for `HighGirth`.
    pub base_c: u64,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: GenModel, n: usize, param: u64, seed: u64) -> Self {
        GenSpec {
            model,
            n,
            param,
            base_c: 3,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InfeasibleSpec(m));
        if self.n == 0 || self.param == 0 {
            return bad("n and param must be positive".into());
        }
        match self.model {
            GenModel::DisjointCliques if !(self.n as u64).is_multiple_of(self.param) => {
                bad(format!("n = {} is not a multiple of the clique order {}", self.n, self.param))
            }
            GenModel::RandomRegular if self.param >= self.n as u64 || (self.n as u64 * self.param) % 2 == 1 => {
                bad(format!("no {}-regular graph on {} vertices", self.param, self.n))
            }
            GenModel::HighGirth if self.base_c == 0 => bad("base_c must be positive".into()),
            _ => Ok(()),
        }
    }
}

/// Deterministic in `spec`; `HighGirth` output is checked to reach the girth.
pub fn gen(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.model {
        GenModel::Gnp => gnp(spec.n, spec.param, &mut rng),
        GenModel::HighGirth => {
            let base = gnp(spec.n, spec.base_c, &mut rng)?;
            let g = break_short_cycles(&base, spec.param as usize)?;
            if girth(&g).is_some_and(|c| c < spec.param as usize) {
                return Err(Error::Invariant("girth below target after cycle deletion".into()));
            }
            Ok(g)
        }
        GenModel::DisjointCliques => {
            let k = spec.param as usize;
            let edges = (0..spec.n / k).flat_map(|b| {
                let base = b * k;
                (0..k).flat_map(move |i| (i + 1..k).map(move |j| (base + i, base + j)))
            });
            Graph::from_edges(spec.n, edges)
        }
        GenModel::RandomRegular => random_regular(spec.n, spec.param as usize, &mut rng),
    }
}

/// Each pair independently with probability `min(c/n, 1)`, decided by
/// comparing one 64-bit draw with `floor(c 2^64 / n)`.
fn gnp(n: usize, c: u64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let threshold = ((c as u128) << 64) / n as u128;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if threshold > u64::MAX as u128 || (rng.next_u64() as u128) < threshold {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn below(rng: &mut ChaCha8Rng, bound: usize) -> usize {
    ((rng.next_u64() as u128 * bound as u128) >> 64) as usize
}

const REGULAR_RESTARTS: usize = 200;

fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    'restart: for _ in 0..REGULAR_RESTARTS {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut adj = vec![Vec::<usize>::new(); n];
        let mut edges = Vec::with_capacity(n * d / 2);
        while !points.is_empty() {
            let mut paired = false;
            for _ in 0..(50 * points.len()) {
                let i = below(rng, points.len());
                let j = below(rng, points.len());
                let (a, b) = (points[i], points[j]);
                if i == j || a == b || adj[a].contains(&b) {
                    continue;
                }
                adj[a].push(b);
                adj[b].push(a);
                edges.push((a.min(b), a.max(b)));
                let (hi, lo) = (i.max(j), i.min(j));
                points.swap_remove(hi);
                points.swap_remove(lo);
                paired = true;
                break;
            }
            if !paired {
                continue 'restart;
            }
        }
        return Graph::from_edges(n, edges);
    }
    Err(Error::InfeasibleSpec(format!("pairing for a {d}-regular graph on {n} vertices kept getting stuck")))
}

struct CycleScan {
    dist: Vec<usize>,
    parent: Vec<usize>,
    touched: Vec<usize>,
}

impl CycleScan {
    fn new(n: usize) -> Self {
        CycleScan {
            dist: vec![usize::MAX; n],
            parent: vec![usize::MAX; n],
            touched: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v] = usize::MAX;
            self.parent[v] = usize::MAX;
        }
        self.touched.clear();
    }

    /// Shortest closed walk through a non-tree edge of the BFS tree at
    /// `root`, if shorter than `cap`: `(length, u, w)` for the edge `uw`.
    fn scan_root(&mut self, g: &Graph, root: usize, cap: usize) -> Option<(usize, usize, usize)> {
        self.reset();
        let mut best: Option<(usize, usize, usize)> = None;
        self.dist[root] = 0;
        self.touched.push(root);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let bound = best.map_or(cap, |b| b.0);
            if 2 * self.dist[u] + 1 >= bound {
                break;
            }
            for &w in g.neighbors(u) {
                if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[u] + 1;
                    self.parent[w] = u;
                    self.touched.push(w);
                    queue.push_back(w);
                } else if w != self.parent[u] {
                    let len = self.dist[u] + self.dist[w] + 1;
                    if len < best.map_or(cap, |b| b.0) {
                        best = Some((len, u, w));
                    }
                }
            }
        }
        best
    }

    fn to_root(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while self.dist[v] != 0 {
            v = self.parent[v];
            out.push(v);
        }
        out
    }
}

/// Minimum cycle length below `cap` and the first BFS root attaining it.
fn min_cycle(g: &Graph, cap: usize, scan: &mut CycleScan) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for root in g.vertices() {
        if let Some((len, _, _)) = scan.scan_root(g, root, best.map_or(cap, |b| b.0)) {
            best = Some((len, root));
            if len == 3 {
                break;
            }
        }
    }
    best
}

/// A shortest cycle, if it is shorter than `limit`, as its vertex sequence.
fn short_cycle(g: &Graph, limit: usize) -> Option<Vec<usize>> {
    let mut scan = CycleScan::new(g.order());
    let (len, root) = min_cycle(g, limit, &mut scan)?;
    let (_, u, w) = scan.scan_root(g, root, len + 1).expect("cycle found before");
    // The two tree paths of a globally shortest closed walk meet only at
    // the root, otherwise a shorter cycle would exist.
    let mut cycle = scan.to_root(u);
    cycle.reverse();
    let mut back = scan.to_root(w);
    back.pop();
    cycle.extend(back);
    debug_assert_eq!(cycle.len(), len);
    Some(cycle)
}

/// Repeatedly deletes the lexicographically least edge of a shortest cycle
/// until no cycle shorter than `girth` remains.
fn break_short_cycles(g: &Graph, girth: usize) -> Result<Graph> {
    let mut edges: std::collections::BTreeSet<(usize, usize)> = g.edges().collect();
    let mut current = g.clone();
    while let Some(cycle) = short_cycle(&current, girth) {
        let k = cycle.len();
        let least = (0..k)
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % k]);
                (a.min(b), a.max(b))
            })
            .min()
            .expect("cycle has edges");
        edges.remove(&least);
        current = Graph::from_edges(g.order(), edges.iter().copied())?;
    }
    Ok(current)
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    min_cycle(g, usize::MAX, &mut CycleScan::new(g.order())).map(|(len, _)| len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{cycle, path, petersen};
    use crate::rational::ratio;

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&cycle(7)), Some(7));
        assert_eq!(girth(&path(9)), None);
        assert_eq!(girth(&petersen()), Some(5));
    }

    #[test]
    fn disjoint_cliques_density() {
        let g = gen(&GenSpec::new(GenModel::DisjointCliques, 12, 4, 0)).unwrap();
        assert_eq!(g.average_degree().unwrap().to_rational(), ratio(3, 2));
        assert!(gen(&GenSpec::new(GenModel::DisjointCliques, 10, 4, 0)).is_err());
    }

    #[test]
    fn gnp_is_reproducible() {
        let a = gen(&GenSpec::new(GenModel::Gnp, 100, 2, 7)).unwrap();
        let b = gen(&GenSpec::new(GenModel::Gnp, 100, 2, 7)).unwrap();
        let c = gen(&GenSpec::new(GenModel::Gnp, 100, 2, 8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn high_girth_reaches_target() {
        let g = gen(&GenSpec::new(GenModel::HighGirth, 1000, 8, 1)).unwrap();
        assert!(girth(&g).is_none_or(|c| c >= 8));
        assert!(g.edge_count() > 1000);
    }

    #[test]
    fn regular_degrees() {
        let g = gen(&GenSpec::new(GenModel::RandomRegular, 200, 5, 3)).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 5));
        assert!(gen(&GenSpec::new(GenModel::RandomRegular, 7, 3, 3)).is_err());
    }

    #[test]
    fn shortest_cycle_is_simple() {
        let g = petersen();
        let c = short_cycle(&g, 10).unwrap();
        assert_eq!(c.len(), 5);
        for i in 0..5 {
            assert!(g.has_edge(c[i], c[(i + 1) % 5]));
        }
    }
}
