use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::GraphError;
use crate::bao::AtomSet;

/// How a graph was specified. This is also the on-disk JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Explicit {
        m: usize,
        #[serde(default)]
        edges: Vec<[usize; 2]>,
    },
    /// Vertices `0..m`, `i ~ l` iff `0 < |i - l| < N`.
    Interval {
        m: usize,
        #[serde(rename = "N")]
        n: usize,
    },
    /// `blocks` disjoint cliques of size `N`; vertex `v` sits in block `v / N`.
    CliqueUnion {
        #[serde(rename = "N")]
        n: usize,
        blocks: usize,
    },
}

/// A finite simple graph with a precomputed adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    spec: GraphSpec,
    adjacency: Vec<AtomSet>,
}

impl Graph {
    /// Builds the graph; duplicate explicit edges are merged and reported as
    /// warnings, self-loops and out-of-range endpoints are errors.
    pub fn from_spec(spec: GraphSpec) -> Result<(Graph, Vec<String>), GraphError> {
        let mut warnings = Vec::new();
        let (m, spec) = match spec {
            GraphSpec::Explicit { m, edges } => {
                let mut seen = BTreeSet::new();
                for [a, b] in edges {
                    if a >= m || b >= m {
                        return Err(GraphError::Parse(format!(
                            "edge [{a},{b}] has an endpoint outside 0..{m}"
                        )));
                    }
                    if a == b {
                        return Err(GraphError::Parse(format!("self-loop at vertex {a}")));
                    }
                    if !seen.insert([a.min(b), a.max(b)]) {
                        warnings.push(format!("duplicate edge [{a},{b}] ignored"));
                    }
                }
                (m, GraphSpec::Explicit { m, edges: seen.into_iter().collect() })
            }
            GraphSpec::Interval { m, n } => (m, GraphSpec::Interval { m, n }),
            GraphSpec::CliqueUnion { n, blocks } => {
                if n == 0 {
                    return Err(GraphError::Parse("clique size N must be positive".into()));
                }
                (n * blocks, GraphSpec::CliqueUnion { n, blocks })
            }
        };
        let mut adjacency = vec![AtomSet::empty(m); m];
        let adjacent = |a: usize, b: usize| -> bool {
            match &spec {
                GraphSpec::Explicit { .. } => false,
                GraphSpec::Interval { n, .. } => a != b && a.abs_diff(b) < *n,
                GraphSpec::CliqueUnion { n, .. } => a != b && a / n == b / n,
            }
        };
        for (a, row) in adjacency.iter_mut().enumerate() {
            for b in 0..m {
                if adjacent(a, b) {
                    row.insert(b);
                }
            }
        }
        if let GraphSpec::Explicit { edges, .. } = &spec {
            for &[a, b] in edges {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        }
        Ok((Graph { spec, adjacency }, warnings))
    }

    pub fn interval(m: usize, n: usize) -> Graph {
        Self::from_spec(GraphSpec::Interval { m, n }).expect("interval graphs are always valid").0
    }

    pub fn clique_union(n: usize, blocks: usize) -> Result<Graph, GraphError> {
        Ok(Self::from_spec(GraphSpec::CliqueUnion { n, blocks })?.0)
    }

    pub fn explicit(m: usize, edges: &[[usize; 2]]) -> Result<Graph, GraphError> {
        Ok(Self::from_spec(GraphSpec::Explicit { m, edges: edges.to_vec() })?.0)
    }

    pub fn complete(m: usize) -> Graph {
        let edges: Vec<[usize; 2]> =
            (0..m).flat_map(|a| (a + 1..m).map(move |b| [a, b])).collect();
        Self::explicit(m, &edges).expect("complete graph edges are in range")
    }

    pub fn edgeless(m: usize) -> Graph {
        Self::explicit(m, &[]).expect("no edges")
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn neighbours(&self, a: usize) -> &AtomSet {
        &self.adjacency[a]
    }

    /// Edges `[a, b]` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        (0..self.vertex_count())
            .flat_map(|a| self.adjacency[a].iter().filter(move |&b| b > a).map(move |b| [a, b]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_edges_follow_distance_rule() {
        let g = Graph::interval(5, 2);
        assert_eq!(g.edges(), vec![[0, 1], [1, 2], [2, 3], [3, 4]]);
        let g = Graph::interval(6, 3);
        assert!(g.adjacent(0, 2) && !g.adjacent(0, 3) && !g.adjacent(4, 4));
    }

    #[test]
    fn clique_union_blocks() {
        let g = Graph::clique_union(3, 2).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edges(), vec![[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]]);
    }

    #[test]
    fn duplicate_edges_are_merged_with_warning() {
        let spec = GraphSpec::Explicit { m: 3, edges: vec![[0, 1], [1, 0], [1, 2]] };
        let (g, warnings) = Graph::from_spec(spec).unwrap();
        assert_eq!(g.edges(), vec![[0, 1], [1, 2]]);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn json_schema() {
        let spec: GraphSpec = serde_json::from_str(r#"{"kind":"interval","m":5,"N":2}"#).unwrap();
        assert_eq!(spec, GraphSpec::Interval { m: 5, n: 2 });
        let spec: GraphSpec = serde_json::from_str(r#"{"kind":"clique_union","N":3,"blocks":4}"#).unwrap();
        assert_eq!(Graph::from_spec(spec).unwrap().0.vertex_count(), 12);
        assert!(serde_json::from_str::<GraphSpec>(r#"{"m":5,"N":2}"#).is_err());
        assert!(Graph::explicit(2, &[[0, 2]]).is_err());
    }
}
