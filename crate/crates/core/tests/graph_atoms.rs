mod common;

use std::collections::BTreeSet;

use atomwork_core::graph_atoms::{
    check_ra_atom_structure, enumerate_basic_matrices, ramsey_kernel_check, Graph, RaAtom, RaAtomStructure,
};
use common::{brute_force_matrices, triple_consistent};

fn table(alpha: &RaAtomStructure) -> impl Fn(usize, usize, usize) -> bool + '_ {
    move |a, b, c| alpha.consistent(a, b, c)
}

#[test]
fn k2_with_two_colours_is_small_and_sound() {
    let g = Graph::complete(2);
    let alpha = RaAtomStructure::build_alpha(g.clone(), 2).unwrap();
    assert_eq!(alpha.atom_count(), 5);
    assert!(check_ra_atom_structure(&alpha).is_empty());
    let mut triples = 0;
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                triples += 1;
                let expected = triple_consistent(&g, alpha.atom(a), alpha.atom(b), alpha.atom(c));
                assert_eq!(alpha.consistent(a, b, c), expected, "{a} {b} {c}");
            }
        }
    }
    assert_eq!(triples, 125);
}

#[test]
fn consistency_table_matches_the_colouring_rules() {
    for (g, n) in [(Graph::interval(8, 3), 3), (Graph::edgeless(3), 2), (Graph::clique_union(3, 2).unwrap(), 3)] {
        let alpha = RaAtomStructure::build_alpha(g.clone(), n).unwrap();
        let k = alpha.atom_count();
        assert_eq!(k, 1 + g.vertex_count() * n);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let expected = triple_consistent(&g, alpha.atom(a), alpha.atom(b), alpha.atom(c));
                    assert_eq!(alpha.consistent(a, b, c), expected);
                }
            }
        }
    }
}

/// Relabelling vertices and colours maps consistent triples to consistent triples.
#[test]
fn interval_graph_is_invariant_under_vertex_and_colour_permutations() {
    let (m, big_n, n) = (20, 3, 3);
    let g = Graph::interval(m, big_n);
    let alpha = RaAtomStructure::build_alpha(g.clone(), n).unwrap();
    let k = alpha.atom_count();

    // A fixed shuffle of the vertices, applied to the edge list.
    let shuffle: Vec<usize> = (0..m).map(|v| (v * 7 + 3) % m).collect();
    let moved_edges: Vec<[usize; 2]> = g.edges().iter().map(|&[a, b]| [shuffle[a], shuffle[b]]).collect();
    let moved = RaAtomStructure::build_alpha(Graph::explicit(m, &moved_edges).unwrap(), n).unwrap();

    let reflect: Vec<usize> = (0..m).rev().collect();
    let colour_perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let map_atom = |target: &RaAtomStructure, vertices: &[usize], colours: &[usize; 3], a: usize| match alpha.atom(a) {
        RaAtom::Identity => target.index(RaAtom::Identity),
        RaAtom::Coloured { vertex, colour } => {
            target.index(RaAtom::Coloured { vertex: vertices[vertex], colour: colours[colour] })
        }
    };

    let original = table(&alpha);
    for colours in &colour_perms {
        for (target, vertices) in [(&alpha, &reflect), (&moved, &shuffle)] {
            let sigma: Vec<usize> = (0..k).map(|a| map_atom(target, vertices, colours, a)).collect();
            assert_eq!(sigma.iter().collect::<BTreeSet<_>>().len(), k);
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        assert_eq!(original(a, b, c), target.consistent(sigma[a], sigma[b], sigma[c]));
                    }
                }
            }
        }
    }
}

#[test]
fn basic_matrices_match_brute_force_on_small_graphs() {
    for (g, n) in [(Graph::complete(2), 2), (Graph::edgeless(1), 3), (Graph::complete(2), 3)] {
        let alpha = RaAtomStructure::build_alpha(g.clone(), n).unwrap();
        let found: BTreeSet<_> = enumerate_basic_matrices(&alpha, 3, None).unwrap().iter().map(|m| m.rows()).collect();
        assert_eq!(found, brute_force_matrices(&alpha, &g, 3));
    }
    let alpha = RaAtomStructure::build_alpha(Graph::complete(2), 3).unwrap();
    assert_eq!(enumerate_basic_matrices(&alpha, 3, None).unwrap().len(), 229);
}

#[test]
fn ramsey_kernel_holds_across_sizes() {
    for big_n in [3, 4] {
        for m in (big_n..=40).step_by(3) {
            let r = ramsey_kernel_check(m, big_n, 3, 4).unwrap();
            assert!(r.passed(), "m={m} N={big_n}: {:?}", r.violation);
        }
    }
}
