use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// An edge label from `(G ∪ {ρ}) × n`. The derived order puts every `ρ` label
/// first, then vertex labels by vertex and colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GgLabel {
    Rho { colour: usize },
    Vertex { vertex: usize, colour: usize },
}

impl GgLabel {
    pub fn colour(&self) -> usize {
        match *self {
            GgLabel::Rho { colour } | GgLabel::Vertex { colour, .. } => colour,
        }
    }

    pub fn vertex(&self) -> Option<usize> {
        match *self {
            GgLabel::Rho { .. } => None,
            GgLabel::Vertex { vertex, .. } => Some(vertex),
        }
    }

    /// Every label over `graph` with `colours` colours, in label order.
    pub fn alphabet(graph: &Graph, colours: usize) -> Vec<GgLabel> {
        let mut out: Vec<GgLabel> = (0..colours).map(|colour| GgLabel::Rho { colour }).collect();
        for vertex in 0..graph.vertex_count() {
            out.extend((0..colours).map(|colour| GgLabel::Vertex { vertex, colour }));
        }
        out
    }
}

impl fmt::Display for GgLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GgLabel::Rho { colour } => write!(f, "(ρ,{colour})"),
            GgLabel::Vertex { vertex, colour } => write!(f, "({vertex},{colour})"),
        }
    }
}

/// Whether a triangle with these three edge labels is allowed in GG.
///
/// The conditions are symmetric in the three labels: colours not all equal,
/// or no `ρ` and some pair of the three vertices adjacent, or exactly one `ρ`
/// and the other two vertices adjacent, or at least two `ρ`.
pub fn gg_triangle(graph: &Graph, a: GgLabel, b: GgLabel, c: GgLabel) -> bool {
    if !(a.colour() == b.colour() && b.colour() == c.colour()) {
        return true;
    }
    let vertices: Vec<usize> = [a, b, c].iter().filter_map(GgLabel::vertex).collect();
    match vertices[..] {
        [x, y, z] => graph.adjacent(x, y) || graph.adjacent(y, z) || graph.adjacent(x, z),
        [x, y] => graph.adjacent(x, y),
        _ => true,
    }
}

/// A labelled graph on nodes `0..nodes`; `labels` is keyed by `(x, y)`, `x < y`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledGraph {
    nodes: usize,
    labels: BTreeMap<(usize, usize), GgLabel>,
}

impl LabelledGraph {
    pub fn new(nodes: usize) -> Self {
        LabelledGraph { nodes, labels: BTreeMap::new() }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn set(&mut self, x: usize, y: usize, label: GgLabel) {
        assert!(x != y && x < self.nodes && y < self.nodes, "edge ({x},{y}) out of range");
        self.labels.insert((x.min(y), x.max(y)), label);
    }

    pub fn get(&self, x: usize, y: usize) -> Option<GgLabel> {
        self.labels.get(&(x.min(y), x.max(y))).copied()
    }

    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    pub fn is_complete(&self) -> bool {
        self.labels.len() == self.nodes * self.nodes.saturating_sub(1) / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GgVerdict {
    Member,
    NonMember { nodes: [usize; 3], labels: [GgLabel; 3] },
}

/// Checks every triangle of a complete labelled graph.
pub fn gg_membership(gamma: &LabelledGraph, graph: &Graph, colours: usize) -> Result<GgVerdict, GraphError> {
    for x in 0..gamma.nodes {
        for y in x + 1..gamma.nodes {
            let label = gamma
                .get(x, y)
                .ok_or_else(|| GraphError::Incomplete(format!("pair ({x},{y}) has no label")))?;
            if label.colour() >= colours || label.vertex().is_some_and(|v| v >= graph.vertex_count()) {
                return Err(GraphError::Precondition(format!("label {label} on ({x},{y}) is out of range")));
            }
        }
    }
    for x in 0..gamma.nodes {
        for y in x + 1..gamma.nodes {
            for z in y + 1..gamma.nodes {
                let (a, b, c) = (gamma.get(y, x).unwrap(), gamma.get(y, z).unwrap(), gamma.get(x, z).unwrap());
                if !gg_triangle(graph, a, b, c) {
                    return Ok(GgVerdict::NonMember { nodes: [x, y, z], labels: [a, b, c] });
                }
            }
        }
    }
    Ok(GgVerdict::Member)
}

/// A one-point extension: a new node joined to the nodes `base` by `labels`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionTask {
    pub base: Vec<usize>,
    pub labels: Vec<GgLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Saturation {
    pub model: LabelledGraph,
    /// Processed tasks with the node realizing each.
    pub realized: Vec<(ExtensionTask, usize)>,
    /// Tasks that needed a new node while the model was at its size bound.
    pub unrealized: Vec<ExtensionTask>,
}

/// A node outside `task.base` joined to each base node by the prescribed label.
pub fn find_witness(model: &LabelledGraph, task: &ExtensionTask) -> Option<usize> {
    (0..model.node_count()).find(|z| {
        !task.base.contains(z)
            && task.base.iter().zip(&task.labels).all(|(&x, &l)| model.get(x, *z) == Some(l))
    })
}

/// Greedily closes `seed` under one-point extensions of at most `colours`
/// nodes.
///
/// Multi-point extensions decompose into one-point ones because GG is
/// closed under induced subgraphs. Tasks are enumerated in rounds: the base
/// sets of a round are increasing node tuples of size below `colours` that
/// contain a node added in the previous round, and label vectors follow label
/// order. A task is realized by the least existing witness, or else by a new
/// node whose remaining edges get the least labels keeping the model in GG.
/// A `ρ` colour always fits: each base node rules out at most one colour and
/// there are fewer base nodes than colours.
pub fn saturate_labelled_model(
    seed: &LabelledGraph,
    graph: &Graph,
    colours: usize,
    size_bound: usize,
    extension_budget: usize,
) -> Result<Saturation, GraphError> {
    if let GgVerdict::NonMember { nodes, .. } = gg_membership(seed, graph, colours)? {
        return Err(GraphError::Precondition(format!("seed is not in GG: triangle {nodes:?}")));
    }
    let alphabet = GgLabel::alphabet(graph, colours);
    let mut model = seed.clone();
    let mut out = Saturation { model: LabelledGraph::new(0), realized: Vec::new(), unrealized: Vec::new() };
    let mut processed = 0usize;
    let mut fresh_from = 0usize;
    let mut first_round = true;
    while processed < extension_budget {
        let snapshot = model.node_count();
        if !first_round && fresh_from == snapshot {
            break;
        }
        for size in 0..colours {
            for base in increasing_tuples(snapshot, size) {
                if !first_round && !base.iter().any(|&x| x >= fresh_from) {
                    continue;
                }
                for labels in label_vectors(&alphabet, size) {
                    if processed >= extension_budget {
                        break;
                    }
                    let task = ExtensionTask { base: base.clone(), labels };
                    if !task_in_gg(&model, graph, &task) {
                        continue;
                    }
                    processed += 1;
                    if let Some(z) = find_witness(&model, &task) {
                        out.realized.push((task, z));
                    } else if model.node_count() < size_bound {
                        let z = add_extension(&mut model, graph, &alphabet, &task)?;
                        out.realized.push((task, z));
                    } else {
                        out.unrealized.push(task);
                    }
                }
            }
        }
        first_round = false;
        fresh_from = snapshot;
    }
    out.model = model;
    Ok(out)
}

fn task_in_gg(model: &LabelledGraph, graph: &Graph, task: &ExtensionTask) -> bool {
    let s = task.base.len();
    (0..s).all(|p| {
        (p + 1..s).all(|q| {
            let between = model.get(task.base[p], task.base[q]).expect("complete model");
            gg_triangle(graph, task.labels[p], task.labels[q], between)
        })
    })
}

fn add_extension(
    model: &mut LabelledGraph,
    graph: &Graph,
    alphabet: &[GgLabel],
    task: &ExtensionTask,
) -> Result<usize, GraphError> {
    let z = model.add_node();
    for (&x, &l) in task.base.iter().zip(&task.labels) {
        model.set(x, z, l);
    }
    for w in 0..z {
        if task.base.contains(&w) {
            continue;
        }
        let fits = |l: GgLabel| {
            (0..z).filter(|&v| v != w).all(|v| match model.get(v, z) {
                Some(vz) => gg_triangle(graph, l, vz, model.get(v, w).expect("complete model")),
                None => true,
            })
        };
        let label = alphabet.iter().copied().find(|&l| fits(l)).ok_or_else(|| {
            GraphError::Precondition(format!("no label joins new node {z} to node {w}"))
        })?;
        model.set(w, z, label);
    }
    Ok(z)
}

fn increasing_tuples(nodes: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..size {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let start = t.last().map_or(0, |&l| l + 1);
                (start..nodes).map(move |v| {
                    let mut u = t.clone();
                    u.push(v);
                    u
                })
            })
            .collect();
    }
    out
}

fn label_vectors(alphabet: &[GgLabel], size: usize) -> impl Iterator<Item = Vec<GgLabel>> + '_ {
    let total = alphabet.len().pow(size as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![alphabet[0]; size];
        for slot in v.iter_mut().rev() {
            *slot = alphabet[code % alphabet.len()];
            code /= alphabet.len();
        }
        v
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(vertex: usize, colour: usize) -> GgLabel {
        GgLabel::Vertex { vertex, colour }
    }

    fn triangle(graph: &Graph, a: GgLabel, b: GgLabel, c: GgLabel) -> GgVerdict {
        let mut gamma = LabelledGraph::new(3);
        gamma.set(1, 0, a);
        gamma.set(1, 2, b);
        gamma.set(0, 2, c);
        gg_membership(&gamma, graph, 3).unwrap()
    }

    #[test]
    fn membership_conditions() {
        let g = Graph::edgeless(3);
        assert_eq!(triangle(&g, v(0, 0), v(1, 1), v(2, 2)), GgVerdict::Member);
        let rho = GgLabel::Rho { colour: 0 };
        assert_eq!(triangle(&g, rho, rho, rho), GgVerdict::Member);
        assert!(matches!(triangle(&g, v(0, 0), v(1, 0), v(2, 0)), GgVerdict::NonMember { .. }));
        let path = Graph::explicit(3, &[[1, 2]]).unwrap();
        assert_eq!(triangle(&path, rho, v(1, 0), v(2, 0)), GgVerdict::Member);
        assert!(matches!(triangle(&path, rho, v(0, 0), v(2, 0)), GgVerdict::NonMember { .. }));
    }

    #[test]
    fn incomplete_labelling_is_an_error() {
        let gamma = LabelledGraph::new(2);
        assert!(matches!(gg_membership(&gamma, &Graph::edgeless(1), 2), Err(GraphError::Incomplete(_))));
    }

    #[test]
    fn empty_seed_single_task_adds_one_node() {
        let g = Graph::edgeless(2);
        let sat = saturate_labelled_model(&LabelledGraph::new(0), &g, 3, 10, 1).unwrap();
        assert_eq!(sat.model.node_count(), 1);
        assert_eq!(sat.realized.len(), 1);
    }

    #[test]
    fn new_node_gets_least_fitting_labels() {
        let g = Graph::edgeless(2);
        let mut seed = LabelledGraph::new(2);
        seed.set(0, 1, v(0, 0));
        let sat = saturate_labelled_model(&seed, &g, 3, 3, 200).unwrap();
        let (task, z) = sat.realized.iter().find(|(_, z)| *z == 2).unwrap();
        assert_eq!(task.base, vec![0]);
        // the least label overall is (ρ,0); node 1 gets the least label that
        // fits the triangle with edge (0,0) and (ρ,0), which is (ρ,0) itself
        assert_eq!(sat.model.get(0, *z), Some(GgLabel::Rho { colour: 0 }));
        assert_eq!(sat.model.get(1, *z), Some(GgLabel::Rho { colour: 0 }));
    }

    #[test]
    fn saturated_model_stays_in_gg_and_replays() {
        let g = Graph::interval(4, 2);
        let sat = saturate_labelled_model(&LabelledGraph::new(0), &g, 3, 12, 3000).unwrap();
        assert_eq!(gg_membership(&sat.model, &g, 3).unwrap(), GgVerdict::Member);
        for (task, _) in &sat.realized {
            assert!(find_witness(&sat.model, task).is_some());
        }
    }
}
