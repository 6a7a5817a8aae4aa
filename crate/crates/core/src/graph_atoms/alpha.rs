use std::fmt;

use serde::Serialize;

use super::{Graph, GraphError};
use crate::bao::AtomSet;

/// The identity atom always has index 0.
pub const IDENTITY: usize = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RaAtom {
    Identity,
    Coloured { vertex: usize, colour: usize },
}

impl fmt::Display for RaAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RaAtom::Identity => write!(f, "1'"),
            RaAtom::Coloured { vertex, colour } => write!(f, "({vertex},{colour})"),
        }
    }
}

/// A finite relation-algebra atom structure with self-converse atoms, given by
/// its table of consistent triples.
///
/// Atom `0` is the identity; `(v, c)` has index `1 + v * colours + c`.
/// `table[a * k + b]` holds every `c` with `(a, b, c)` consistent, so the
/// composition `X ; Y` is the union of the table entries over `X × Y`.
#[derive(Clone, Debug)]
pub struct RaAtomStructure {
    graph: Graph,
    colours: usize,
    table: Vec<AtomSet>,
}

/// Whether `(a, b, c)` is consistent in `α(G)` with `colours` colours.
fn alpha_consistent(graph: &Graph, a: RaAtom, b: RaAtom, c: RaAtom) -> bool {
    use RaAtom::*;
    let t = [a, b, c];
    if t.contains(&Identity) {
        return (0..3).any(|i| t[i] == Identity && t[(i + 1) % 3] == t[(i + 2) % 3]);
    }
    let parts = t.map(|x| match x {
        Coloured { vertex, colour } => (vertex, colour),
        Identity => unreachable!(),
    });
    if parts.iter().any(|p| p.1 != parts[0].1) {
        return true;
    }
    let [(x, _), (y, _), (z, _)] = parts;
    graph.adjacent(x, y) || graph.adjacent(y, z) || graph.adjacent(x, z)
}

impl RaAtomStructure {
    /// `α(G)` with `colours` colours.
    pub fn build_alpha(graph: Graph, colours: usize) -> Result<Self, GraphError> {
        if colours < 2 {
            return Err(GraphError::Precondition(format!("need at least 2 colours, got {colours}")));
        }
        let k = 1 + graph.vertex_count() * colours;
        let mut s = RaAtomStructure { graph, colours, table: Vec::with_capacity(k * k) };
        for a in 0..k {
            for b in 0..k {
                let (x, y) = (s.atom(a), s.atom(b));
                let row = AtomSet::from_atoms(
                    k,
                    (0..k).filter(|&c| alpha_consistent(&s.graph, x, y, s.atom(c))),
                );
                s.table.push(row);
            }
        }
        Ok(s)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn colours(&self) -> usize {
        self.colours
    }

    pub fn atom_count(&self) -> usize {
        1 + self.graph.vertex_count() * self.colours
    }

    pub fn atom(&self, a: usize) -> RaAtom {
        if a == IDENTITY {
            RaAtom::Identity
        } else {
            RaAtom::Coloured { vertex: (a - 1) / self.colours, colour: (a - 1) % self.colours }
        }
    }

    pub fn index(&self, atom: RaAtom) -> usize {
        match atom {
            RaAtom::Identity => IDENTITY,
            RaAtom::Coloured { vertex, colour } => 1 + vertex * self.colours + colour,
        }
    }

    pub fn label(&self, a: usize) -> String {
        self.atom(a).to_string()
    }

    pub fn colour(&self, a: usize) -> Option<usize> {
        match self.atom(a) {
            RaAtom::Identity => None,
            RaAtom::Coloured { colour, .. } => Some(colour),
        }
    }

    /// Every atom is its own converse.
    pub fn converse(&self, a: usize) -> usize {
        a
    }

    pub fn consistent(&self, a: usize, b: usize, c: usize) -> bool {
        self.table[a * self.atom_count() + b].contains(c)
    }

    /// Overrides one ordered triple; used to inject faults.
    pub fn set_consistent(&mut self, a: usize, b: usize, c: usize, value: bool) {
        let k = self.atom_count();
        if value {
            self.table[a * k + b].insert(c);
        } else {
            self.table[a * k + b].remove(c);
        }
    }

    /// `{c : a ∈ x, b ∈ y, (a, b, c) consistent}`.
    pub fn compose(&self, x: &AtomSet, y: &AtomSet) -> AtomSet {
        let k = self.atom_count();
        let mut out = AtomSet::empty(k);
        for a in x.iter() {
            for b in y.iter() {
                out.union_with(&self.table[a * k + b]);
            }
        }
        out
    }

    pub fn atoms_of_colour(&self, colour: usize) -> AtomSet {
        AtomSet::from_atoms(
            self.atom_count(),
            (0..self.graph.vertex_count()).map(|v| self.index(RaAtom::Coloured { vertex: v, colour })),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RaCondition {
    PermutationInvariance,
    IdentityLaw,
    SelfConverse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaViolation {
    pub condition: RaCondition,
    /// Atom labels of the witnessing triple.
    pub triple: Vec<String>,
}

/// Exhaustive scan of all ordered triples. Reports the first witness for
/// each failing condition; empty iff the structure is sound.
pub fn check_ra_atom_structure(s: &RaAtomStructure) -> Vec<RaViolation> {
    let k = s.atom_count();
    let mut out = Vec::new();
    let labels = |t: [usize; 3]| t.iter().map(|&a| s.label(a)).collect::<Vec<_>>();
    'perm: for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let v = s.consistent(a, b, c);
                let orders = [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
                if let Some(t) = orders.into_iter().find(|t| s.consistent(t[0], t[1], t[2]) != v) {
                    let t = if v { [a, b, c] } else { t };
                    out.push(RaViolation { condition: RaCondition::PermutationInvariance, triple: labels(t) });
                    break 'perm;
                }
            }
        }
    }
    'identity: for a in 0..k {
        for b in 0..k {
            if s.consistent(IDENTITY, a, b) != (a == b) {
                out.push(RaViolation {
                    condition: RaCondition::IdentityLaw,
                    triple: labels([IDENTITY, a, b]),
                });
                break 'identity;
            }
        }
    }
    // (a, a, 1') must hold: a ; a˘ contains the identity when a˘ = a
    if let Some(a) = (0..k).find(|&a| !s.consistent(a, s.converse(a), IDENTITY)) {
        out.push(RaViolation { condition: RaCondition::SelfConverse, triple: labels([a, a, IDENTITY]) });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coloured(s: &RaAtomStructure, vertex: usize, colour: usize) -> usize {
        s.index(RaAtom::Coloured { vertex, colour })
    }

    #[test]
    fn atom_indexing_and_counts() {
        let s = RaAtomStructure::build_alpha(Graph::complete(2), 3).unwrap();
        assert_eq!(s.atom_count(), 7);
        assert_eq!(s.label(0), "1'");
        assert_eq!(s.label(coloured(&s, 1, 2)), "(1,2)");
        for a in 0..7 {
            assert_eq!(s.index(s.atom(a)), a);
        }
    }

    #[test]
    fn consistency_bullets() {
        let s = RaAtomStructure::build_alpha(Graph::edgeless(3), 3).unwrap();
        let v0 = coloured(&s, 0, 0);
        assert!(s.consistent(IDENTITY, v0, v0));
        assert!(!s.consistent(IDENTITY, v0, coloured(&s, 1, 0)));
        for (a, b, c) in [(0, 1, 2), (2, 2, 2), (0, 0, 1)] {
            assert!(s.consistent(coloured(&s, a, 0), coloured(&s, b, 1), coloured(&s, c, 2)));
            assert!(!s.consistent(coloured(&s, a, 0), coloured(&s, b, 0), coloured(&s, c, 0)));
        }
    }

    #[test]
    fn identity_composes_as_unit() {
        let s = RaAtomStructure::build_alpha(Graph::interval(4, 2), 3).unwrap();
        let k = s.atom_count();
        for a in 0..k {
            let x = AtomSet::singleton(k, a);
            assert_eq!(s.compose(&AtomSet::singleton(k, IDENTITY), &x), x);
        }
    }

    #[test]
    fn mixed_colours_compose_to_every_third_colour_atom() {
        let s = RaAtomStructure::build_alpha(Graph::edgeless(3), 3).unwrap();
        let x = AtomSet::singleton(s.atom_count(), coloured(&s, 0, 0));
        let y = AtomSet::singleton(s.atom_count(), coloured(&s, 1, 1));
        let xy = s.compose(&x, &y);
        assert!(s.atoms_of_colour(2).is_subset(&xy));
        assert!(s.atoms_of_colour(0).is_subset(&xy));
        assert!(!xy.contains(IDENTITY));
    }

    #[test]
    fn small_structures_are_sound() {
        for g in [Graph::complete(2), Graph::edgeless(2), Graph::interval(5, 2)] {
            let s = RaAtomStructure::build_alpha(g, 2).unwrap();
            assert!(check_ra_atom_structure(&s).is_empty());
        }
    }

    #[test]
    fn broken_symmetry_is_reported_with_triple() {
        let mut s = RaAtomStructure::build_alpha(Graph::complete(2), 2).unwrap();
        let (a, b) = (coloured(&s, 0, 0), coloured(&s, 1, 0));
        s.set_consistent(a, b, a, false);
        let report = check_ra_atom_structure(&s);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].condition, RaCondition::PermutationInvariance);
        assert_eq!(report[0].triple.len(), 3);
    }
}
