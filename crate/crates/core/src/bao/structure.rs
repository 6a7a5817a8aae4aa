use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AtomSet, BaoError, Signature};

/// A binary relation on the atoms of a finite structure, kept as both rows
/// (`a ↦ {b : a R b}`) and columns (`b ↦ {a : a R b}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    rows: Vec<AtomSet>,
    cols: Vec<AtomSet>,
}

impl BinaryRelation {
    pub fn empty(universe: usize) -> Self {
        BinaryRelation {
            rows: vec![AtomSet::empty(universe); universe],
            cols: vec![AtomSet::empty(universe); universe],
        }
    }

    pub fn identity(universe: usize) -> Self {
        Self::from_pairs(universe, (0..universe).map(|a| (a, a)))
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(universe: usize, pairs: I) -> Self {
        let mut rel = Self::empty(universe);
        for (a, b) in pairs {
            rel.insert(a, b);
        }
        rel
    }

    pub fn from_fn(universe: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut rel = Self::empty(universe);
        for a in 0..universe {
            for b in 0..universe {
                if f(a, b) {
                    rel.insert(a, b);
                }
            }
        }
        rel
    }

    /// The equivalence-style relation `⋃ class × class` over the given classes.
    pub fn from_classes(universe: usize, classes: &[Vec<usize>]) -> Self {
        let mut rel = Self::empty(universe);
        for class in classes {
            for &a in class {
                for &b in class {
                    rel.insert(a, b);
                }
            }
        }
        rel
    }

    /// The graph of a map `a ↦ map[a]`.
    pub fn from_map(map: &[usize]) -> Self {
        Self::from_pairs(map.len(), map.iter().enumerate().map(|(a, &b)| (a, b)))
    }

    pub fn universe(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.rows[a].insert(b);
        self.cols[b].insert(a);
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.rows[a].remove(b);
        self.cols[b].remove(a);
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn row(&self, a: usize) -> &AtomSet {
        &self.rows[a]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
    }

    /// `{a : ∃ b ∈ x, a R b}`, the complex-algebra image of `x`.
    pub fn preimage(&self, x: &AtomSet) -> AtomSet {
        let mut out = AtomSet::empty(self.universe());
        for b in x.iter() {
            out.union_with(&self.cols[b]);
        }
        out
    }

    /// The distinct rows, in order of their least member.
    pub fn row_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = self
            .rows
            .iter()
            .filter(|row| !row.is_empty())
            .map(AtomSet::to_vec)
            .collect();
        classes.sort();
        classes.dedup();
        classes
    }
}

/// A finite atom structure of a polyadic-type signature.
///
/// Each operator family is stored at the atom level: cylindrifications as
/// binary relations `≡_i`, diagonals as atom sets, transpositions as maps on
/// atoms and replacements as binary relations. Families that are absent are
/// stored as empty vectors. Pair-indexed families are flattened row-major:
/// entry `(i, j)` sits at index `i * dimension + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAtomStructure {
    dimension: usize,
    labels: Vec<String>,
    cyl: Vec<BinaryRelation>,
    diag: Vec<AtomSet>,
    transpositions: Vec<Vec<usize>>,
    replacements: Vec<BinaryRelation>,
}

impl FiniteAtomStructure {
    pub fn new(dimension: usize, labels: Vec<String>) -> Result<Self, BaoError> {
        if labels.is_empty() {
            return Err(BaoError::Shape("an atom structure needs at least one atom".into()));
        }
        if dimension < 2 {
            return Err(BaoError::Shape(format!("dimension {dimension} is below 2")));
        }
        Ok(FiniteAtomStructure {
            dimension,
            labels,
            cyl: Vec::new(),
            diag: Vec::new(),
            transpositions: Vec::new(),
            replacements: Vec::new(),
        })
    }

    pub fn with_cylindrifications(mut self, cyl: Vec<BinaryRelation>) -> Result<Self, BaoError> {
        self.expect_len("cylindrification relations", cyl.len(), self.dimension)?;
        for rel in &cyl {
            self.expect_len("cylindrification universe", rel.universe(), self.atom_count())?;
        }
        self.cyl = cyl;
        Ok(self)
    }

    pub fn with_diagonals(mut self, diag: Vec<AtomSet>) -> Result<Self, BaoError> {
        self.expect_len("diagonal sets", diag.len(), self.dimension * self.dimension)?;
        for d in &diag {
            self.expect_len("diagonal universe", d.universe(), self.atom_count())?;
        }
        self.diag = diag;
        Ok(self)
    }

    pub fn with_transpositions(mut self, maps: Vec<Vec<usize>>) -> Result<Self, BaoError> {
        self.expect_len("transposition maps", maps.len(), self.dimension * self.dimension)?;
        for map in &maps {
            self.expect_len("transposition map", map.len(), self.atom_count())?;
            if let Some(&bad) = map.iter().find(|&&b| b >= self.atom_count()) {
                return Err(BaoError::Shape(format!("transposition target {bad} is not an atom")));
            }
        }
        self.transpositions = maps;
        Ok(self)
    }

    pub fn with_replacements(mut self, rels: Vec<BinaryRelation>) -> Result<Self, BaoError> {
        self.expect_len("replacement relations", rels.len(), self.dimension * self.dimension)?;
        for rel in &rels {
            self.expect_len("replacement universe", rel.universe(), self.atom_count())?;
        }
        self.replacements = rels;
        Ok(self)
    }

    /// Replacements derived from cylindrifications and diagonals:
    /// `a` sees `b` under `s_i^j` iff `a ≡_i b` and `b ∈ d_ij`.
    pub fn with_derived_replacements(self) -> Result<Self, BaoError> {
        if self.cyl.is_empty() || self.diag.is_empty() {
            return Err(BaoError::MissingRelation(
                "derived replacements need cylindrifications and diagonals".into(),
            ));
        }
        let n = self.dimension;
        let k = self.atom_count();
        let mut rels = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    rels.push(BinaryRelation::identity(k));
                } else {
                    let d = &self.diag[i * n + j];
                    let cyl = &self.cyl[i];
                    rels.push(BinaryRelation::from_fn(k, |a, b| {
                        d.contains(b) && cyl.contains(a, b)
                    }));
                }
            }
        }
        self.with_replacements(rels)
    }

    fn expect_len(&self, what: &str, got: usize, want: usize) -> Result<(), BaoError> {
        if got == want {
            Ok(())
        } else {
            Err(BaoError::Shape(format!("{what}: expected {want}, got {got}")))
        }
    }

    /// The atom structure of the full set algebra `℘(ⁿU)`: atoms are the
    /// tuples of `ⁿU`, listed in lexicographic order.
    pub fn full_set_algebra(dimension: usize, base_size: usize) -> Result<Self, BaoError> {
        let tuples = all_tuples(dimension, base_size);
        if tuples.is_empty() {
            return Err(BaoError::Shape("the base set must be nonempty".into()));
        }
        let index: BTreeMap<&Vec<usize>, usize> =
            tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let k = tuples.len();
        let labels = tuples.iter().map(|t| tuple_label(t)).collect();
        let n = dimension;
        let cyl = (0..n)
            .map(|i| {
                BinaryRelation::from_fn(k, |a, b| {
                    (0..n).all(|c| c == i || tuples[a][c] == tuples[b][c])
                })
            })
            .collect();
        let mut diag = Vec::with_capacity(n * n);
        let mut transpositions = Vec::with_capacity(n * n);
        let mut replacements = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                diag.push(AtomSet::from_atoms(
                    k,
                    (0..k).filter(|&a| tuples[a][i] == tuples[a][j]),
                ));
                transpositions.push(
                    tuples
                        .iter()
                        .map(|t| {
                            let mut s = t.clone();
                            s.swap(i, j);
                            index[&s]
                        })
                        .collect(),
                );
                replacements.push(BinaryRelation::from_pairs(
                    k,
                    tuples.iter().enumerate().map(|(a, t)| {
                        let mut s = t.clone();
                        s[i] = t[j];
                        (a, index[&s])
                    }),
                ));
            }
        }
        FiniteAtomStructure::new(dimension, labels)?
            .with_cylindrifications(cyl)?
            .with_diagonals(diag)?
            .with_transpositions(transpositions)?
            .with_replacements(replacements)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn atom_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, atom: usize) -> &str {
        &self.labels[atom]
    }

    pub fn cylindrification(&self, i: usize) -> Option<&BinaryRelation> {
        self.cyl.get(i)
    }

    pub fn diagonal(&self, i: usize, j: usize) -> Option<&AtomSet> {
        self.pair_index(i, j).and_then(|p| self.diag.get(p))
    }

    pub fn transposition(&self, i: usize, j: usize) -> Option<&[usize]> {
        self.pair_index(i, j)
            .and_then(|p| self.transpositions.get(p))
            .map(Vec::as_slice)
    }

    pub fn replacement(&self, i: usize, j: usize) -> Option<&BinaryRelation> {
        self.pair_index(i, j).and_then(|p| self.replacements.get(p))
    }

    pub fn has_cylindrifications(&self) -> bool {
        !self.cyl.is_empty()
    }

    pub fn has_diagonals(&self) -> bool {
        !self.diag.is_empty()
    }

    pub fn has_transpositions(&self) -> bool {
        !self.transpositions.is_empty()
    }

    pub fn has_replacements(&self) -> bool {
        !self.replacements.is_empty()
    }

    /// The richest signature whose relations this structure carries.
    pub fn full_signature(&self) -> Result<Signature, BaoError> {
        Signature::new(
            self.dimension,
            self.has_cylindrifications(),
            self.has_diagonals(),
            self.has_replacements(),
            self.has_transpositions(),
        )
    }

    fn pair_index(&self, i: usize, j: usize) -> Option<usize> {
        (i < self.dimension && j < self.dimension).then_some(i * self.dimension + j)
    }

    pub fn cylindrification_mut(&mut self, i: usize) -> Option<&mut BinaryRelation> {
        self.cyl.get_mut(i)
    }

    pub fn transposition_mut(&mut self, i: usize, j: usize) -> Option<&mut Vec<usize>> {
        let p = self.pair_index(i, j)?;
        self.transpositions.get_mut(p)
    }

    pub fn diagonal_mut(&mut self, i: usize, j: usize) -> Option<&mut AtomSet> {
        let p = self.pair_index(i, j)?;
        self.diag.get_mut(p)
    }

    pub fn to_json(&self) -> AtomStructureJson {
        AtomStructureJson {
            dimension: self.dimension,
            atoms: self.labels.clone(),
            cyl: self.cyl.iter().map(BinaryRelation::row_classes).collect(),
            diag: self.diag.iter().map(AtomSet::to_vec).collect(),
            transpositions: self.transpositions.clone(),
            replacements: self
                .replacements
                .iter()
                .map(|r| r.pairs().map(|(a, b)| [a, b]).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &AtomStructureJson) -> Result<Self, BaoError> {
        let k = json.atoms.len();
        let check = |a: usize| {
            if a < k {
                Ok(a)
            } else {
                Err(BaoError::Shape(format!("atom index {a} out of range ({k} atoms)")))
            }
        };
        let mut s = FiniteAtomStructure::new(json.dimension, json.atoms.clone())?;
        if !json.cyl.is_empty() {
            let mut rels = Vec::new();
            for classes in &json.cyl {
                for class in classes {
                    for &a in class {
                        check(a)?;
                    }
                }
                rels.push(BinaryRelation::from_classes(k, classes));
            }
            s = s.with_cylindrifications(rels)?;
        }
        if !json.diag.is_empty() {
            let mut sets = Vec::new();
            for d in &json.diag {
                for &a in d {
                    check(a)?;
                }
                sets.push(AtomSet::from_atoms(k, d.iter().copied()));
            }
            s = s.with_diagonals(sets)?;
        }
        if !json.transpositions.is_empty() {
            s = s.with_transpositions(json.transpositions.clone())?;
        }
        if !json.replacements.is_empty() {
            let mut rels = Vec::new();
            for pairs in &json.replacements {
                for &[a, b] in pairs {
                    check(a)?;
                    check(b)?;
                }
                rels.push(BinaryRelation::from_pairs(k, pairs.iter().map(|&[a, b]| (a, b))));
            }
            s = s.with_replacements(rels)?;
        }
        Ok(s)
    }
}

/// The on-disk JSON form of a finite atom structure.
///
/// `cyl[i]` lists the `≡_i` classes; `diag`, `transpositions` and
/// `replacements` are indexed by `i * dimension + j`. Absent families are
/// empty arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomStructureJson {
    pub dimension: usize,
    pub atoms: Vec<String>,
    #[serde(default)]
    pub cyl: Vec<Vec<Vec<usize>>>,
    #[serde(default)]
    pub diag: Vec<Vec<usize>>,
    #[serde(default)]
    pub transpositions: Vec<Vec<usize>>,
    #[serde(default)]
    pub replacements: Vec<Vec<[usize; 2]>>,
}

/// All tuples of length `dimension` over `0..base_size`, lexicographically.
pub fn all_tuples(dimension: usize, base_size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(dimension)];
    for _ in 0..dimension {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base_size).map(move |v| {
                    let mut s = t.clone();
                    s.push(v);
                    s
                })
            })
            .collect();
    }
    out
}

pub(crate) fn tuple_label(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// The condition an atom structure failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum AxiomCondition {
    MissingRelation { family: String },
    CylReflexive { i: usize },
    CylSymmetric { i: usize },
    CylTransitive { i: usize },
    DiagonalNotFull { i: usize },
    DiagonalAsymmetric { i: usize, j: usize },
    TranspositionNotIdentity { i: usize },
    TranspositionNotBijective { i: usize, j: usize },
    TranspositionNotInvolutive { i: usize, j: usize },
    TranspositionAsymmetric { i: usize, j: usize },
    TranspositionConjugation { i: usize, j: usize, k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    #[serde(flatten)]
    pub condition: AxiomCondition,
    /// Atom indices witnessing the failure.
    pub witness: Vec<usize>,
}

/// Checks the atom-level invariants of every family enabled in `sig`.
///
/// The report is empty iff all invariants hold; at most one violation is
/// reported per condition instance.
pub fn check_atom_structure_axioms(
    s: &FiniteAtomStructure,
    sig: &Signature,
) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    let n = sig.dimension;
    let k = s.atom_count();
    let mut push = |condition, witness| out.push(AxiomViolation { condition, witness });

    if n != s.dimension() {
        push(
            AxiomCondition::MissingRelation {
                family: format!("dimension {n} (structure has {})", s.dimension()),
            },
            vec![],
        );
        return out;
    }

    if sig.has_cylindrifications {
        if !s.has_cylindrifications() {
            push(AxiomCondition::MissingRelation { family: "cylindrifications".into() }, vec![]);
        } else {
            for i in 0..n {
                let rel = &s.cyl[i];
                if let Some(a) = (0..k).find(|&a| !rel.contains(a, a)) {
                    push(AxiomCondition::CylReflexive { i }, vec![a]);
                }
                if let Some((a, b)) = rel.pairs().find(|&(a, b)| !rel.contains(b, a)) {
                    push(AxiomCondition::CylSymmetric { i }, vec![a, b]);
                }
                let transitivity = rel.pairs().find_map(|(a, b)| {
                    rel.row(b)
                        .difference(rel.row(a))
                        .first()
                        .map(|c| vec![a, b, c])
                });
                if let Some(w) = transitivity {
                    push(AxiomCondition::CylTransitive { i }, w);
                }
            }
        }
    }

    if sig.has_diagonals {
        if !s.has_diagonals() {
            push(AxiomCondition::MissingRelation { family: "diagonals".into() }, vec![]);
        } else {
            for i in 0..n {
                let d = &s.diag[i * n + i];
                if let Some(a) = d.complement().first() {
                    push(AxiomCondition::DiagonalNotFull { i }, vec![a]);
                }
                for j in i + 1..n {
                    let (dij, dji) = (&s.diag[i * n + j], &s.diag[j * n + i]);
                    if let Some(a) = dij.union(dji).difference(&dij.intersection(dji)).first() {
                        push(AxiomCondition::DiagonalAsymmetric { i, j }, vec![a]);
                    }
                }
            }
        }
    }

    if sig.has_transpositions {
        if !s.has_transpositions() {
            push(AxiomCondition::MissingRelation { family: "transpositions".into() }, vec![]);
        } else {
            let t = |i: usize, j: usize| &s.transpositions[i * n + j];
            for i in 0..n {
                if let Some(a) = (0..k).find(|&a| t(i, i)[a] != a) {
                    push(AxiomCondition::TranspositionNotIdentity { i }, vec![a]);
                }
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let map = t(i, j);
                    let mut hit = vec![None; k];
                    let clash = (0..k).find_map(|a| hit[map[a]].replace(a).map(|b| vec![b, a]));
                    if let Some(w) = clash {
                        push(AxiomCondition::TranspositionNotBijective { i, j }, w);
                    }
                    if let Some(a) = (0..k).find(|&a| map[map[a]] != a) {
                        push(AxiomCondition::TranspositionNotInvolutive { i, j }, vec![a, map[a]]);
                    }
                    if i < j {
                        if let Some(a) = (0..k).find(|&a| map[a] != t(j, i)[a]) {
                            push(AxiomCondition::TranspositionAsymmetric { i, j }, vec![a]);
                        }
                    }
                    for l in 0..n {
                        if l == i || l == j {
                            continue;
                        }
                        // [i,j][j,l][i,j] = [i,l]
                        let (tij, tjl, til) = (t(i, j), t(j, l), t(i, l));
                        if let Some(a) = (0..k).find(|&a| tij[tjl[tij[a]]] != til[a]) {
                            push(AxiomCondition::TranspositionConjugation { i, j, k: l }, vec![a]);
                        }
                    }
                }
            }
        }
    }

    if sig.has_replacements && !s.has_replacements() {
        push(AxiomCondition::MissingRelation { family: "replacements".into() }, vec![]);
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_algebra_passes_axioms() {
        for (n, u) in [(2, 2), (2, 3), (3, 2)] {
            let s = FiniteAtomStructure::full_set_algebra(n, u).unwrap();
            assert_eq!(s.atom_count(), u.pow(n as u32));
            let sig = Signature::polyadic_equality(n).unwrap();
            assert!(check_atom_structure_axioms(&s, &sig).is_empty());
        }
    }

    #[test]
    fn derived_replacements_match_concrete_ones() {
        let s = FiniteAtomStructure::full_set_algebra(3, 2).unwrap();
        let derived = s.clone().with_derived_replacements().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.replacement(i, j), derived.replacement(i, j), "s_{i}^{j}");
            }
        }
    }

    #[test]
    fn non_transitive_cylindrification_is_reported_with_three_atoms() {
        let labels = ["a", "b", "c"].map(String::from).to_vec();
        // a~b and b~c but not a~c
        let rel = BinaryRelation::from_classes(3, &[vec![0, 1], vec![1, 2]]);
        let s = FiniteAtomStructure::new(2, labels)
            .unwrap()
            .with_cylindrifications(vec![rel, BinaryRelation::identity(3)])
            .unwrap();
        let sig = Signature::new(2, true, false, false, false).unwrap();
        let report = check_atom_structure_axioms(&s, &sig);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].condition, AxiomCondition::CylTransitive { i: 0 });
        let w = &report[0].witness;
        assert_eq!(w.len(), 3);
        let rel = s.cylindrification(0).unwrap();
        assert!(rel.contains(w[0], w[1]) && rel.contains(w[1], w[2]) && !rel.contains(w[0], w[2]));
    }

    #[test]
    fn non_involutive_transposition_is_reported() {
        let mut s = FiniteAtomStructure::full_set_algebra(2, 2).unwrap();
        // 3-cycle on the atoms (0,1),(1,0),(1,1)
        let map = s.transposition_mut(0, 1).unwrap();
        *map = vec![0, 2, 3, 1];
        let sig = Signature::polyadic_equality(2).unwrap();
        let report = check_atom_structure_axioms(&s, &sig);
        assert!(report
            .iter()
            .any(|v| v.condition == AxiomCondition::TranspositionNotInvolutive { i: 0, j: 1 }));
    }

    #[test]
    fn missing_family_is_reported_not_panicking() {
        let s = FiniteAtomStructure::new(2, vec!["a".into()]).unwrap();
        let sig = Signature::polyadic_equality(2).unwrap();
        let report = check_atom_structure_axioms(&s, &sig);
        assert_eq!(report.len(), 4);
        assert!(report
            .iter()
            .all(|v| matches!(v.condition, AxiomCondition::MissingRelation { .. })));
    }

    #[test]
    fn json_round_trip_of_equivalence_structure() {
        let s = FiniteAtomStructure::full_set_algebra(2, 2).unwrap();
        let json = serde_json::to_string(&s.to_json()).unwrap();
        let back: AtomStructureJson = serde_json::from_str(&json).unwrap();
        assert_eq!(FiniteAtomStructure::from_json(&back).unwrap(), s);
    }

    #[test]
    fn json_rejects_out_of_range_atoms() {
        let json = AtomStructureJson {
            dimension: 2,
            atoms: vec!["a".into()],
            cyl: vec![vec![vec![0, 3]], vec![vec![0]]],
            diag: vec![],
            transpositions: vec![],
            replacements: vec![],
        };
        assert!(matches!(FiniteAtomStructure::from_json(&json), Err(BaoError::Shape(_))));
    }
}
