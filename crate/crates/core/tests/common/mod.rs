//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use atomwork_core::graph_atoms::{Graph, RaAtom, RaAtomStructure};

/// Consistency of `(a, b, c)` read directly off the colouring rules.
pub fn triple_consistent(g: &Graph, a: RaAtom, b: RaAtom, c: RaAtom) -> bool {
    use RaAtom::*;
    let t = [a, b, c];
    if let Some(i) = t.iter().position(|x| *x == Identity) {
        let rest: Vec<RaAtom> = (0..3).filter(|&j| j != i).map(|j| t[j]).collect();
        return rest[0] == rest[1];
    }
    let parts: Vec<(usize, usize)> = t
        .iter()
        .map(|x| match x {
            Coloured { vertex, colour } => (*vertex, *colour),
            Identity => unreachable!(),
        })
        .collect();
    if parts.iter().any(|p| p.1 != parts[0].1) {
        return true;
    }
    (0..3).any(|i| (0..3).any(|j| i != j && g.adjacent(parts[i].0, parts[j].0)))
}

pub fn brute_force_matrices(alpha: &RaAtomStructure, g: &Graph, n: usize) -> BTreeSet<Vec<Vec<usize>>> {
    let k = alpha.atom_count();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = BTreeSet::new();
    for code in 0..k.pow(cells.len() as u32) {
        let mut m = vec![vec![0; n]; n];
        let mut c = code;
        for &(i, j) in &cells {
            // Atoms are self-converse.
            m[i][j] = c % k;
            m[j][i] = c % k;
            c /= k;
        }
        let ok = (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|l| triple_consistent(g, alpha.atom(m[i][j]), alpha.atom(m[j][l]), alpha.atom(m[i][l])))
            })
        });
        if ok {
            out.insert(m);
        }
    }
    out
}
