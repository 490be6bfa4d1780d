#![allow(dead_code)]

use minorlab::graph::named::{barbell, complete, disjoint_union};
use minorlab::Graph;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p.min(1.0)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn connected_gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let g = gnp(n, p, rng);
        if g.is_connected() {
            return g;
        }
    }
}

/// Gnp, disjoint cliques or a barbell, chosen at random, with at least one edge.
pub fn mixed_graph(max_n: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let g = match rng.gen_range(0..3) {
            0 => {
                let n = rng.gen_range(4..=max_n);
                gnp(n, rng.gen_range(1.5..6.0) / n as f64, rng)
            }
            1 => {
                let a = rng.gen_range(2..=max_n / 3);
                let b = rng.gen_range(2..=max_n / 3);
                let c = rng.gen_range(1..=max_n / 3);
                disjoint_union(&disjoint_union(&complete(a), &complete(b)), &complete(c))
            }
            _ => barbell(rng.gen_range(3..=max_n / 4), rng.gen_range(1..=max_n / 2)),
        };
        if g.edge_count() > 0 && g.order() <= max_n {
            return g;
        }
    }
}

/// `|E|/|V|` computed from the raw edge list.
pub fn density(g: &Graph) -> BigRational {
    BigRational::new(BigInt::from(g.edge_count()), BigInt::from(g.order()))
}

/// Edges with both ends in `mask`.
pub fn edges_inside(g: &Graph, mask: &[bool]) -> usize {
    g.edges().filter(|&(u, v)| mask[u] && mask[v]).count()
}

/// Vertices outside `mask` adjacent to it.
pub fn boundary(g: &Graph, mask: &[bool]) -> Vec<bool> {
    let mut out = vec![false; g.order()];
    for (u, v) in g.edges() {
        if mask[u] && !mask[v] {
            out[v] = true;
        }
        if mask[v] && !mask[u] {
            out[u] = true;
        }
    }
    out
}

pub fn count(mask: &[bool]) -> usize {
    mask.iter().filter(|&&b| b).count()
}
