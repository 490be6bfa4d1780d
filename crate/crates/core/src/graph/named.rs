//! Small named graphs used throughout tests and examples.

use super::Graph;

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(n, edges).expect("complete graph")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path")
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star")
}

/// Outer 5-cycle on `0..5`, spokes `i - (i+5)`, inner pentagram on `5..10`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges_dedup(10, edges).expect("petersen")
}

/// `K_{2,2,2}`; antipodal pairs are `(0,1)`, `(2,3)`, `(4,5)`.
pub fn octahedron() -> Graph {
    let edges = (0..6)
        .flat_map(|u| (u + 1..6).map(move |v| (u, v)))
        .filter(|&(u, v)| u / 2 != v / 2);
    Graph::from_edges(6, edges).expect("octahedron")
}

/// Vertex-disjoint union; `b`'s vertices are shifted by `a.order()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.order();
    let edges = a.edges().chain(b.edges().map(|(u, v)| (u + shift, v + shift)));
    Graph::from_edges(a.order() + b.order(), edges).expect("disjoint union")
}

/// Two copies of `K_k` joined by a path with `path_len` internal vertices.
/// Layout: clique `0..k`, path `k..k+path_len`, clique after. The path
/// attaches to vertex `k-1` of the first clique and the first vertex of the
/// second clique.
pub fn barbell(k: usize, path_len: usize) -> Graph {
    let n = 2 * k + path_len;
    let mut edges: Vec<(usize, usize)> = complete(k).edges().collect();
    let second = k + path_len;
    edges.extend(complete(k).edges().map(|(u, v)| (u + second, v + second)));
    let mut prev = k - 1;
    for p in k..second {
        edges.push((prev, p));
        prev = p;
    }
    edges.push((prev, second));
    Graph::from_edges(n, edges).expect("barbell")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_sizes() {
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(petersen().edge_count(), 15);
        assert!(petersen().vertices().all(|v| petersen().degree(v) == 3));
        assert_eq!(octahedron().edge_count(), 12);
        assert_eq!(barbell(8, 100).edge_count(), 28 * 2 + 101);
        assert_eq!(star(5).degree(0), 5);
    }
}
