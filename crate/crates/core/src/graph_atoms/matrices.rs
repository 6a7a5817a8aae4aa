use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{GraphError, RaAtomStructure, IDENTITY};
use crate::bao::{BinaryRelation, FiniteAtomStructure};

/// An `n × n` matrix of relation-algebra atom indices, stored row-major.
///
/// The derived order is lexicographic in row-major entries, which for
/// symmetric matrices with identity diagonal is the lexicographic order of
/// the upper triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasicMatrix {
    n: usize,
    entries: Vec<usize>,
}

impl BasicMatrix {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        BasicMatrix { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.entries.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    /// Simultaneous swap of rows and columns `i` and `j`.
    pub fn transpose_indices(&self, i: usize, j: usize) -> BasicMatrix {
        let swap = |x: usize| if x == i { j } else if x == j { i } else { x };
        let n = self.n;
        BasicMatrix {
            n,
            entries: (0..n * n).map(|p| self.get(swap(p / n), swap(p % n))).collect(),
        }
    }

    /// Identity diagonal, symmetry, and consistency of every `(m_ij, m_jk, m_ik)`.
    pub fn is_basic(&self, alpha: &RaAtomStructure) -> bool {
        let n = self.n;
        (0..n).all(|i| self.get(i, i) == IDENTITY)
            && (0..n).all(|i| (0..n).all(|j| self.get(i, j) == self.get(j, i)))
            && (0..n).all(|i| {
                (0..n).all(|j| (0..n).all(|k| alpha.consistent(self.get(i, j), self.get(j, k), self.get(i, k))))
            })
    }

    pub fn label(&self, alpha: &RaAtomStructure) -> String {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|&a| alpha.label(a)).collect::<Vec<_>>().join(" "))
            .collect();
        format!("[{}]", rows.join("; "))
    }
}

/// Every `n`-dimensional basic matrix over `alpha`, in lexicographic order.
///
/// Backtracks over the upper triangle in the order `(0,1), (0,2), .., (1,2), ..`,
/// rejecting a partial assignment as soon as a completed triangle is
/// inconsistent. `budget` bounds the number of search nodes visited.
pub fn enumerate_basic_matrices(
    alpha: &RaAtomStructure,
    n: usize,
    budget: Option<u64>,
) -> Result<Vec<BasicMatrix>, GraphError> {
    if n < 2 {
        return Err(GraphError::Precondition(format!("matrix dimension {n} is below 2")));
    }
    let positions: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut entries = vec![IDENTITY; n * n];
    let mut out = Vec::new();
    let mut visited = 0u64;
    search(alpha, n, &positions, 0, &mut entries, &mut out, &mut visited, budget)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    alpha: &RaAtomStructure,
    n: usize,
    positions: &[(usize, usize)],
    depth: usize,
    entries: &mut Vec<usize>,
    out: &mut Vec<BasicMatrix>,
    visited: &mut u64,
    budget: Option<u64>,
) -> Result<(), GraphError> {
    *visited += 1;
    if budget.is_some_and(|b| *visited > b) {
        return Err(GraphError::Budget(budget.unwrap_or_default()));
    }
    let Some(&(i, j)) = positions.get(depth) else {
        let m = BasicMatrix { n, entries: entries.clone() };
        debug_assert!(m.is_basic(alpha));
        out.push(m);
        return Ok(());
    };
    for a in 0..alpha.atom_count() {
        entries[i * n + j] = a;
        entries[j * n + i] = a;
        // triangles {i, j, k} whose other two sides are already assigned
        let closes = (0..n).filter(|&k| k != i && k != j).filter(|&k| {
            let (p, q) = (i.min(k), i.max(k));
            let (r, s) = (j.min(k), j.max(k));
            positions[..depth].contains(&(p, q)) && positions[..depth].contains(&(r, s))
        });
        let ok = closes.into_iter().all(|k| {
            let (x, y, z) = (entries[i * n + j], entries[j * n + k], entries[i * n + k]);
            [(x, y, z), (x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)]
                .into_iter()
                .all(|(a, b, c)| alpha.consistent(a, b, c))
        });
        if ok {
            search(alpha, n, positions, depth + 1, entries, out, visited, budget)?;
        }
    }
    entries[i * n + j] = IDENTITY;
    entries[j * n + i] = IDENTITY;
    Ok(())
}

/// The polyadic-equality atom structure on a list of basic matrices.
///
/// `m ≡_i m'` iff they agree outside row and column `i`; `d_ij` holds the
/// matrices with `m_ij = 1'`; `s_[i,j]` swaps rows and columns `i`, `j`;
/// replacements are derived from cylindrifications and diagonals.
pub fn ca_atoms_from_matrices(
    alpha: &RaAtomStructure,
    matrices: &[BasicMatrix],
    n: usize,
) -> Result<FiniteAtomStructure, GraphError> {
    if let Some(m) = matrices.iter().find(|m| m.dimension() != n) {
        return Err(GraphError::Precondition(format!(
            "matrix of dimension {} in a dimension-{n} list",
            m.dimension()
        )));
    }
    let k = matrices.len();
    let index: HashMap<&BasicMatrix, usize> = matrices.iter().enumerate().map(|(p, m)| (m, p)).collect();
    let mut cyl = Vec::with_capacity(n);
    for i in 0..n {
        let mut classes: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (p, m) in matrices.iter().enumerate() {
            let key: Vec<usize> = (0..n * n)
                .filter(|q| q / n != i && q % n != i)
                .map(|q| m.entries[q])
                .collect();
            classes.entry(key).or_default().push(p);
        }
        let mut classes: Vec<Vec<usize>> = classes.into_values().collect();
        classes.sort();
        cyl.push(BinaryRelation::from_classes(k, &classes));
    }
    let mut diag = Vec::with_capacity(n * n);
    let mut transpositions = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            diag.push(crate::bao::AtomSet::from_atoms(
                k,
                (0..k).filter(|&p| matrices[p].get(i, j) == IDENTITY),
            ));
            let map = matrices
                .iter()
                .map(|m| {
                    index.get(&m.transpose_indices(i, j)).copied().ok_or_else(|| {
                        GraphError::Precondition(format!(
                            "swapping {i} and {j} in {} leaves the matrix list",
                            m.label(alpha)
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            transpositions.push(map);
        }
    }
    let labels = matrices.iter().map(|m| m.label(alpha)).collect();
    Ok(FiniteAtomStructure::new(n, labels)?
        .with_cylindrifications(cyl)?
        .with_diagonals(diag)?
        .with_transpositions(transpositions)?
        .with_derived_replacements()?)
}
