use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// A `K_t` minor given as `t` disjoint connected branch sets plus one path
/// per pair `i < j` joining `V_i` to `V_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub t: usize,
    pub branch_sets: Vec<VertexSet>,
    /// `(i, j) -> vertex sequence`, `i < j`, 0-based.
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
    /// Distinct vertices used by branch sets and paths.
    pub order: usize,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    t: usize,
    branch_sets: Vec<Vec<usize>>,
    paths: BTreeMap<String, Vec<usize>>,
    order: usize,
}

impl MinorModel {
    /// Builds a model and computes its order.
    pub fn new(branch_sets: Vec<VertexSet>, paths: BTreeMap<(usize, usize), Vec<usize>>) -> Self {
        let mut model = MinorModel {
            t: branch_sets.len(),
            branch_sets,
            paths,
            order: 0,
        };
        model.order = model.used_vertices().len();
        model
    }

    pub fn used_vertices(&self) -> VertexSet {
        let mut all: Vec<usize> = self.branch_sets.iter().flat_map(|b| b.iter()).collect();
        for p in self.paths.values() {
            all.extend_from_slice(p);
        }
        VertexSet::from_unsorted(all)
    }

    /// Maps every vertex through `map` (e.g. subgraph index -> parent index).
    pub fn relabel(&self, map: &[usize]) -> MinorModel {
        MinorModel::new(
            self.branch_sets
                .iter()
                .map(|b| VertexSet::from_unsorted(b.iter().map(|v| map[v]).collect()))
                .collect(),
            self.paths
                .iter()
                .map(|(&k, p)| (k, p.iter().map(|&v| map[v]).collect()))
                .collect(),
        )
    }

    fn doc(&self) -> ModelDoc {
        ModelDoc {
            t: self.t,
            branch_sets: self.branch_sets.iter().map(|b| b.as_slice().to_vec()).collect(),
            paths: self
                .paths
                .iter()
                .map(|(&(i, j), p)| (format!("{i}-{j}"), p.clone()))
                .collect(),
            order: self.order,
        }
    }

    /// `{t, branch_sets: [[ids]], paths: {"i-j": [ids]}, order}`
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc()).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |e: String| Error::InvalidParameter(format!("minor model json: {e}"));
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let mut paths = BTreeMap::new();
        for (key, p) in doc.paths {
            let (i, j) = key.split_once('-').ok_or_else(|| bad(format!("bad path key {key:?}")))?;
            let i: usize = i.parse().map_err(|_| bad(format!("bad path key {key:?}")))?;
            let j: usize = j.parse().map_err(|_| bad(format!("bad path key {key:?}")))?;
            paths.insert((i, j), p);
        }
        let branch_sets = doc.branch_sets.into_iter().map(VertexSet::from_unsorted).collect();
        Ok(MinorModel {
            t: doc.t,
            branch_sets,
            paths,
            order: doc.order,
        })
    }
}

impl Serialize for MinorModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.doc().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_uses_dashed_keys() {
        let mut paths = BTreeMap::new();
        paths.insert((0, 1), vec![0, 1]);
        paths.insert((0, 2), vec![0, 3, 2]);
        paths.insert((1, 2), vec![1, 2]);
        let m = MinorModel::new(
            vec![VertexSet::singleton(0), VertexSet::singleton(1), VertexSet::singleton(2)],
            paths,
        );
        assert_eq!(m.order, 4);
        let json = m.to_json();
        assert!(json.contains("\"0-2\""));
        assert_eq!(MinorModel::from_json(&json).unwrap(), m);
    }
}
