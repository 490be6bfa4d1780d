use std::collections::BTreeMap;

use super::path::{claim_length_bound, grow_ball_path};
use super::{pairs, ExpandingBall, MinorAttempt, MinorFailure, MinorModel, MinorSearchParams};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::oracle::check_minor_model;

fn length_bound(g: &Graph, params: &MinorSearchParams, forbidden: usize) -> Option<f64> {
    (params.assert_length_bound && forbidden <= params.path_budget).then(|| claim_length_bound(&params.profile, g.order()))
}

fn failure(reason: String, paths_found: usize) -> Result<MinorAttempt> {
    Ok(Err(MinorFailure {
        reason,
        stuck: None,
        paths_found,
    }))
}

fn verified(g: &Graph, model: MinorModel) -> Result<MinorAttempt> {
    check_minor_model(g, &model).map_err(|d| Error::Invariant(format!("assembled model rejected: {d}")))?;
    Ok(Ok(model))
}

/// Joins hub pairs in lexicographic order by shortest paths avoiding the
/// other hubs and every earlier path's internal vertices.
pub fn assemble_minor_hubs(g: &Graph, hubs: &[usize], params: &MinorSearchParams) -> Result<MinorAttempt> {
    params.validate()?;
    let hub_set = VertexSet::new(hubs.iter().copied());
    g.check_set(&hub_set)?;
    if hub_set.len() != hubs.len() || hubs.len() != params.t {
        return Err(Error::InvalidParameter(format!("need {} distinct hubs", params.t)));
    }
    let mut internals: Vec<usize> = Vec::new();
    let mut paths = BTreeMap::new();
    for (i, j) in pairs(params.t) {
        let mut forbidden: Vec<usize> = hubs
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != i && l != j)
            .map(|(_, &h)| h)
            .collect();
        forbidden.extend_from_slice(&internals);
        let forbidden = VertexSet::from_unsorted(forbidden);
        if forbidden.len() > params.path_budget {
            return failure(
                format!("path budget {} exceeded at pair {i}-{j}", params.path_budget),
                paths.len(),
            );
        }
        let bound = length_bound(g, params, forbidden.len());
        match grow_ball_path(g, &VertexSet::singleton(hubs[i]), &VertexSet::singleton(hubs[j]), &forbidden, bound)? {
            Some(p) => {
                internals.extend_from_slice(&p[1..p.len() - 1]);
                paths.insert((i, j), p);
            }
            None => return failure(format!("no path between hubs {i} and {j}"), paths.len()),
        }
    }
    let branch_sets = hubs.iter().map(|&h| VertexSet::singleton(h)).collect();
    verified(g, MinorModel::new(branch_sets, paths))
}

/// Trims each ball to a core, joins cores pairwise by disjoint paths, and
/// grows each branch set as a BFS tree inside its core from the center to
/// the endpoints it needs.
pub fn assemble_minor_balls(g: &Graph, balls: &[ExpandingBall], params: &MinorSearchParams) -> Result<MinorAttempt> {
    params.validate()?;
    if balls.len() != params.t {
        return Err(Error::InvalidParameter(format!("need {} balls", params.t)));
    }
    for (i, b) in balls.iter().enumerate() {
        b.check(g).map_err(|e| Error::InvalidParameter(format!("ball {i}: {e}")))?;
        for other in &balls[i + 1..] {
            if !b.members.is_disjoint(&other.members) {
                return Err(Error::InvalidParameter("balls must be disjoint".into()));
            }
        }
    }

    let mut cores = Vec::with_capacity(balls.len());
    for (i, b) in balls.iter().enumerate() {
        let Some(r) = b.layer_sizes.iter().position(|&s| s >= params.core_size_lo) else {
            return failure(format!("ball {i} too small to trim"), 0);
        };
        if b.layer_sizes[r] > params.core_size_hi {
            return failure(
                format!("ball {i}: core of size {} overshoots the window", b.layer_sizes[r]),
                0,
            );
        }
        cores.push(b.sub_ball(g, r));
    }

    let mut internals: Vec<usize> = Vec::new();
    let mut paths = BTreeMap::new();
    for (i, j) in pairs(params.t) {
        if internals.len() > params.path_budget {
            return failure(
                format!("path budget {} exceeded at pair {i}-{j}", params.path_budget),
                paths.len(),
            );
        }
        let mut forbidden = internals.clone();
        for (l, core) in cores.iter().enumerate() {
            if l != i && l != j {
                forbidden.extend(core.iter());
            }
        }
        let forbidden = VertexSet::from_unsorted(forbidden);
        let bound = length_bound(g, params, internals.len());
        match grow_ball_path(g, &cores[i], &cores[j], &forbidden, bound)? {
            Some(p) => {
                internals.extend_from_slice(&p[1..p.len() - 1]);
                paths.insert((i, j), p);
            }
            None => return failure(format!("no path between cores {i} and {j}"), paths.len()),
        }
    }

    let mut branch_sets = Vec::with_capacity(balls.len());
    for (i, (ball, core)) in balls.iter().zip(&cores).enumerate() {
        let outside: Vec<bool> = core.mask(g.order()).iter().map(|&m| !m).collect();
        let parent = bfs_parents(g, ball.center, &outside);
        let mut members = vec![ball.center];
        for (&(a, b), p) in &paths {
            let end = if a == i {
                p[0]
            } else if b == i {
                p[p.len() - 1]
            } else {
                continue;
            };
            let mut cur = end;
            while cur != ball.center {
                members.push(cur);
                cur = parent[cur];
            }
        }
        branch_sets.push(VertexSet::from_unsorted(members));
    }
    verified(g, MinorModel::new(branch_sets, paths))
}

fn bfs_parents(g: &Graph, root: usize, blocked: &[bool]) -> Vec<usize> {
    let mut parent = vec![usize::MAX; g.order()];
    parent[root] = root;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if parent[w] == usize::MAX && !blocked[w] {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    parent
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::ExpansionProfile;
    use crate::graph::named::{complete, cycle, disjoint_union, octahedron, star};
    use crate::minor::{find_hubs_or_balls, HubsOrBalls, Regime};
    use crate::rational::ratio;

    fn params(t: usize, m: usize) -> MinorSearchParams {
        let p = ExpansionProfile::delta(ratio(1, 256)).unwrap();
        MinorSearchParams::for_regime(&p, Regime::DeskScale, t, m).unwrap()
    }

    #[test]
    fn complete_graph_hubs() {
        let m = assemble_minor_hubs(&complete(4), &[0, 1, 2, 3], &params(4, 4)).unwrap().unwrap();
        assert_eq!(m.order, 4);
        assert!(m.paths.values().all(|p| p.len() == 2));
    }

    #[test]
    fn octahedron_hubs() {
        // Antipodal pairs are (0,1), (2,3), (4,5), so any four vertices
        // contain one non-adjacent pair and need one path of length 2.
        let g = octahedron();
        let hubs = [0, 2, 4, 1];
        let m = assemble_minor_hubs(&g, &hubs, &params(4, 6)).unwrap().unwrap();
        assert_eq!(m.order, 5);
        assert_eq!(m.paths[&(0, 3)].len(), 3);
        let direct = [0, 2, 4];
        let m3 = assemble_minor_hubs(&g, &direct, &params(3, 6)).unwrap().unwrap();
        assert_eq!(m3.order, 3);
    }

    #[test]
    fn star_hubs_fail() {
        let out = assemble_minor_hubs(&star(5), &[1, 2, 3], &params(3, 6)).unwrap();
        let f = out.unwrap_err();
        assert_eq!(f.paths_found, 1);
    }

    #[test]
    fn balls_on_a_long_cycle() {
        let g = cycle(100);
        let mut p = params(2, 100);
        p.gamma = ratio(0, 1);
        p.ball_size_lo = 5;
        p.ball_size_hi = 9;
        p.core_size_lo = 3;
        p.core_size_hi = 5;
        let balls = match find_hubs_or_balls(&g, &p).unwrap() {
            HubsOrBalls::Balls(b) => b,
            other => panic!("{other:?}"),
        };
        let m = assemble_minor_balls(&g, &balls, &p).unwrap().unwrap();
        assert_eq!(m.t, 2);
        assert!(crate::oracle::verify_minor_model(&g, &m));
    }

    #[test]
    fn balls_in_different_components_fail() {
        let g = disjoint_union(&cycle(20), &cycle(20));
        let mut p = params(2, 40);
        p.gamma = ratio(0, 1);
        p.ball_size_lo = 5;
        p.ball_size_hi = 5;
        p.core_size_lo = 3;
        p.core_size_hi = 3;
        let far = ExpandingBall {
            center: 30,
            radius: 2,
            gamma: ratio(0, 1),
            layer_sizes: vec![1, 3, 5],
            members: VertexSet::new([28, 29, 30, 31, 32]),
        };
        let near = ExpandingBall {
            center: 2,
            radius: 2,
            gamma: ratio(0, 1),
            layer_sizes: vec![1, 3, 5],
            members: VertexSet::new([0, 1, 2, 3, 4]),
        };
        let out = assemble_minor_balls(&g, &[near, far], &p).unwrap();
        assert!(out.unwrap_err().reason.contains("no path"));
    }

    #[test]
    fn tiny_ball_cannot_be_trimmed() {
        let g = cycle(30);
        let mut p = params(2, 30);
        p.core_size_lo = 10;
        p.core_size_hi = 12;
        let a = ExpandingBall {
            center: 2,
            radius: 1,
            gamma: ratio(0, 1),
            layer_sizes: vec![1, 3],
            members: VertexSet::new([1, 2, 3]),
        };
        let b = ExpandingBall {
            center: 20,
            radius: 1,
            gamma: ratio(0, 1),
            layer_sizes: vec![1, 3],
            members: VertexSet::new([19, 20, 21]),
        };
        let out = assemble_minor_balls(&g, &[a, b], &p).unwrap();
        assert!(out.unwrap_err().reason.contains("too small to trim"));
    }
}
