use serde::Serialize;

use super::MinorSearchParams;
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::rational::{self, serde_pq, Rational};

/// `B_k(v)` grown inside some host subgraph, with its layer sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpandingBall {
    pub center: usize,
    pub radius: usize,
    #[serde(with = "serde_pq")]
    pub gamma: Rational,
    /// `|B_0|, |B_1|, ..., |B_k|`
    pub layer_sizes: Vec<usize>,
    pub members: VertexSet,
}

impl ExpandingBall {
    /// BFS distances from the center inside `G[members]`. A ball grown in a
    /// host subgraph keeps its distances inside itself, so this reproduces
    /// the recorded layers.
    fn distances(&self, g: &Graph) -> Vec<Option<usize>> {
        let outside: Vec<bool> = self.members.mask(g.order()).iter().map(|&m| !m).collect();
        g.bfs_distances(&[self.center], Some(&outside), None)
    }

    pub fn recompute_layer_sizes(&self, g: &Graph) -> Vec<usize> {
        let mut layers: Vec<usize> = Vec::new();
        for d in self.distances(g).into_iter().flatten() {
            if layers.len() <= d {
                layers.resize(d + 1, 0);
            }
            layers[d] += 1;
        }
        let mut acc = 0;
        layers
            .into_iter()
            .map(|l| {
                acc += l;
                acc
            })
            .collect()
    }

    /// `|B_{i+1}| >= (1 + gamma) |B_i|` for `1 <= i <= k - 1`.
    pub fn is_expanding(&self) -> bool {
        let factor = Rational::from_integer(1.into()) + &self.gamma;
        (1..self.radius).all(|i| !rational::lt_cross(self.layer_sizes[i + 1] as u128, self.layer_sizes[i] as u128, &factor))
    }

    /// Re-derives the ball from the graph and checks every recorded field.
    pub fn check(&self, g: &Graph) -> std::result::Result<(), String> {
        if g.check_set(&self.members).is_err() || !self.members.contains(self.center) {
            return Err("members out of range or missing the center".into());
        }
        if self.layer_sizes.len() != self.radius + 1 {
            return Err("radius does not match layer count".into());
        }
        if self.recompute_layer_sizes(g) != self.layer_sizes {
            return Err("layer sizes differ from the graph".into());
        }
        if self.layer_sizes.last() != Some(&self.members.len()) {
            return Err("member count differs from the outer layer".into());
        }
        if !self.is_expanding() {
            return Err("ball is not gamma-expanding".into());
        }
        Ok(())
    }

    /// `B_r(center)` inside the ball, `r <= radius`.
    pub fn sub_ball(&self, g: &Graph, r: usize) -> VertexSet {
        VertexSet::from_sorted(
            self.distances(g)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.filter(|&d| d <= r).map(|_| v))
                .collect(),
        )
    }
}

/// Where ball finding got stuck.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StuckState {
    pub balls_found: usize,
    pub high_degree_vertices: usize,
    /// Vertices removed because their ball stopped expanding below the window.
    pub stalled_vertices: usize,
    /// Starts whose ball jumped over the size window.
    pub overshooting_starts: usize,
    pub remaining_vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HubsOrBalls {
    Hubs(Vec<usize>),
    Balls(Vec<ExpandingBall>),
    Failure(StuckState),
}

enum Growth {
    Accepted(ExpandingBall),
    /// Stopped expanding below the window: these vertices are dropped.
    Stalled(Vec<usize>),
    Overshot,
}

fn grow(g: &Graph, available: &[bool], start: usize, params: &MinorSearchParams) -> Growth {
    let factor = Rational::from_integer(1.into()) + &params.gamma;
    let mut inside = vec![false; g.order()];
    inside[start] = true;
    let mut members = vec![start];
    let mut sizes = vec![1usize];
    let mut frontier = vec![start];
    let mut overshot = false;
    loop {
        let size = members.len();
        if size > params.ball_size_hi {
            overshot = true;
            break;
        }
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if available[w] && !inside[w] {
                    inside[w] = true;
                    next.push(w);
                }
            }
        }
        let new_size = size + next.len();
        let k = sizes.len() - 1;
        if next.is_empty() || (k >= 1 && rational::lt_cross(new_size as u128, size as u128, &factor)) {
            break;
        }
        members.extend_from_slice(&next);
        sizes.push(new_size);
        frontier = next;
    }
    // Every prefix radius is expanding; take the largest one in the window.
    let pick = (0..sizes.len())
        .rev()
        .find(|&r| (params.ball_size_lo..=params.ball_size_hi).contains(&sizes[r]));
    match pick {
        Some(r) => {
            let layer_sizes = sizes[..=r].to_vec();
            Growth::Accepted(ExpandingBall {
                center: start,
                radius: r,
                gamma: params.gamma.clone(),
                members: VertexSet::from_unsorted(members[..layer_sizes[r]].to_vec()),
                layer_sizes,
            })
        }
        None if overshot => Growth::Overshot,
        None => Growth::Stalled(members),
    }
}

/// Hubs if at least `t` vertices reach the degree threshold, otherwise `t`
/// disjoint expanding balls grown outside the high-degree vertices.
pub fn find_hubs_or_balls(g: &Graph, params: &MinorSearchParams) -> Result<HubsOrBalls> {
    params.validate()?;
    let t = params.t;
    let mut high: Vec<usize> = g.vertices().filter(|&v| g.degree(v) >= params.degree_threshold).collect();
    if high.len() >= t {
        high.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        high.truncate(t);
        return Ok(HubsOrBalls::Hubs(high));
    }
    let mut available = vec![true; g.order()];
    for &v in &high {
        available[v] = false;
    }
    let mut balls = Vec::new();
    let mut stalled = 0;
    let mut overshooting = 0;
    for start in g.vertices() {
        if balls.len() == t {
            break;
        }
        if !available[start] {
            continue;
        }
        match grow(g, &available, start, params) {
            Growth::Accepted(ball) => {
                for v in ball.members.iter() {
                    available[v] = false;
                }
                balls.push(ball);
            }
            Growth::Stalled(set) => {
                stalled += set.len();
                for v in set {
                    available[v] = false;
                }
            }
            Growth::Overshot => overshooting += 1,
        }
    }
    if balls.len() == t {
        return Ok(HubsOrBalls::Balls(balls));
    }
    Ok(HubsOrBalls::Failure(StuckState {
        balls_found: balls.len(),
        high_degree_vertices: high.len(),
        stalled_vertices: stalled,
        overshooting_starts: overshooting,
        remaining_vertices: available.iter().filter(|&&a| a).count(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ExpansionProfile;
    use crate::graph::named::{complete, cycle, disjoint_union};
    use crate::minor::Regime;
    use crate::rational::ratio;

    fn params(t: usize, m: usize) -> MinorSearchParams {
        let p = ExpansionProfile::delta(ratio(1, 256)).unwrap();
        MinorSearchParams::for_regime(&p, Regime::Paper, t, m).unwrap()
    }

    #[test]
    fn hubs_when_degrees_are_high() {
        let g = disjoint_union(&complete(16), &cycle(5));
        let mut p = params(2, g.order());
        p.degree_threshold = 3;
        match find_hubs_or_balls(&g, &p).unwrap() {
            HubsOrBalls::Hubs(h) => {
                assert_eq!(h.len(), 2);
                assert!(h.iter().all(|&v| v < 16));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn edgeless_graph_gets_stuck() {
        let g = Graph::empty(10);
        match find_hubs_or_balls(&g, &params(2, 10)).unwrap() {
            HubsOrBalls::Failure(s) => {
                assert_eq!(s.balls_found, 0);
                assert_eq!(s.stalled_vertices, 10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn balls_on_a_cycle() {
        let g = cycle(100);
        let mut p = params(2, 100);
        p.gamma = ratio(0, 1);
        p.ball_size_lo = 5;
        p.ball_size_hi = 9;
        match find_hubs_or_balls(&g, &p).unwrap() {
            HubsOrBalls::Balls(bs) => {
                assert_eq!(bs.len(), 2);
                assert!(bs[0].members.is_disjoint(&bs[1].members));
                for b in &bs {
                    assert_eq!(b.check(&g), Ok(()));
                    assert!((5..=9).contains(&b.members.len()));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn t_below_two_is_an_error() {
        let mut p = params(2, 10);
        p.t = 1;
        assert!(find_hubs_or_balls(&complete(4), &p).is_err());
    }
}
