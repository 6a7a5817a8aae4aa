use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{all_tuples, AtomSet, ComplexAlgebra, Operator};

pub type Tuple = Vec<usize>;

/// A representation of a finite atomic algebra on the base `{0, .., base-1}`.
///
/// Only atom images are stored; an element maps to the union of the images of
/// its atoms, which makes the assignment complete by construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetAlgebraRepresentation {
    pub base: usize,
    pub dimension: usize,
    pub unit: BTreeSet<Tuple>,
    pub atom_images: Vec<BTreeSet<Tuple>>,
}

impl SetAlgebraRepresentation {
    /// Each atom of the full set algebra `℘(ⁿU)` goes to its own tuple, with
    /// atoms in the order produced by `FiniteAtomStructure::full_set_algebra`.
    pub fn identity_of_full(dimension: usize, base: usize) -> Self {
        let tuples = all_tuples(dimension, base);
        SetAlgebraRepresentation {
            base,
            dimension,
            unit: tuples.iter().cloned().collect(),
            atom_images: tuples.into_iter().map(|t| BTreeSet::from([t])).collect(),
        }
    }

    pub fn image(&self, x: &AtomSet) -> BTreeSet<Tuple> {
        x.iter().flat_map(|a| self.atom_images[a].iter().cloned()).collect()
    }

    /// The concrete operator on subsets of the unit.
    pub fn concrete(&self, op: Operator, x: &BTreeSet<Tuple>) -> BTreeSet<Tuple> {
        match op {
            Operator::Cyl(i) => x
                .iter()
                .flat_map(|t| {
                    (0..self.base).map(move |v| {
                        let mut s = t.clone();
                        s[i] = v;
                        s
                    })
                })
                .filter(|s| self.unit.contains(s))
                .collect(),
            Operator::Replace(i, j) => self
                .unit
                .iter()
                .filter(|s| {
                    let mut r = (*s).clone();
                    r[i] = s[j];
                    x.contains(&r)
                })
                .cloned()
                .collect(),
            Operator::Transpose(i, j) => x
                .iter()
                .map(|t| {
                    let mut s = t.clone();
                    s.swap(i, j);
                    s
                })
                .filter(|s| self.unit.contains(s))
                .collect(),
        }
    }

    pub fn concrete_diagonal(&self, i: usize, j: usize) -> BTreeSet<Tuple> {
        self.unit.iter().filter(|s| s[i] == s[j]).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentationReport {
    pub passed: bool,
    pub failed_check: Option<String>,
    pub atom: Option<String>,
    pub tuple: Option<Tuple>,
    pub detail: Option<String>,
}

impl RepresentationReport {
    fn pass() -> Self {
        RepresentationReport { passed: true, failed_check: None, atom: None, tuple: None, detail: None }
    }

    fn fail(check: &str, atom: Option<String>, tuple: Option<Tuple>, detail: String) -> Self {
        RepresentationReport {
            passed: false,
            failed_check: Some(check.into()),
            atom,
            tuple,
            detail: Some(detail),
        }
    }
}

/// Checks shape, injectivity, that atom images cover the unit, and that every
/// enabled operator and diagonal agrees with its concrete counterpart.
///
/// Operators are additive on both sides, so agreement on atoms suffices.
/// Returns the first violation found.
pub fn verify_complete_representation(
    rep: &SetAlgebraRepresentation,
    alg: &ComplexAlgebra,
) -> RepresentationReport {
    let k = alg.atom_count();
    let n = alg.dimension();
    let label = |a: usize| Some(alg.structure().label(a).to_string());
    if rep.dimension != n || rep.atom_images.len() != k {
        return RepresentationReport::fail(
            "shape",
            None,
            None,
            format!(
                "representation has dimension {} and {} atom images, algebra has {n} and {k}",
                rep.dimension,
                rep.atom_images.len()
            ),
        );
    }
    if let Some(t) = rep.unit.iter().find(|t| t.len() != n || t.iter().any(|&v| v >= rep.base)) {
        return RepresentationReport::fail("shape", None, Some(t.clone()), "unit tuple outside ⁿU".into());
    }
    for (a, img) in rep.atom_images.iter().enumerate() {
        if let Some(t) = img.iter().find(|t| !rep.unit.contains(*t)) {
            return RepresentationReport::fail(
                "shape",
                label(a),
                Some(t.clone()),
                "atom image leaves the unit".into(),
            );
        }
    }
    let mut owner = std::collections::BTreeMap::new();
    for (a, img) in rep.atom_images.iter().enumerate() {
        for t in img {
            owner.entry(t.clone()).or_insert(a);
        }
    }
    if let Some(t) = rep.unit.iter().find(|t| !owner.contains_key(*t)) {
        return RepresentationReport::fail(
            "covering",
            None,
            Some(t.clone()),
            "unit tuple lies under no atom image".into(),
        );
    }
    for (a, img) in rep.atom_images.iter().enumerate() {
        if img.is_empty() {
            return RepresentationReport::fail("injective", label(a), None, "atom image is empty".into());
        }
        if let Some(t) = img.iter().find(|t| owner[*t] != a) {
            return RepresentationReport::fail(
                "injective",
                label(a),
                Some(t.clone()),
                format!("tuple shared with atom {}", alg.structure().label(owner[t])),
            );
        }
    }
    for op in alg.signature().unary_operators() {
        for a in 0..k {
            let abstract_image = alg.apply(op, &alg.atom(a)).expect("enabled operator");
            let lhs = rep.image(&abstract_image);
            let rhs = rep.concrete(op, &rep.atom_images[a]);
            if lhs != rhs {
                let t = lhs.symmetric_difference(&rhs).next().cloned();
                return RepresentationReport::fail(
                    &format!("operator {op}"),
                    label(a),
                    t,
                    "image of the abstract operator differs from the concrete one".into(),
                );
            }
        }
    }
    if alg.signature().has_diagonals {
        for i in 0..n {
            for j in 0..n {
                let d = alg.diagonal(i, j).expect("enabled diagonal");
                let lhs = rep.image(&d);
                let rhs = rep.concrete_diagonal(i, j);
                if lhs != rhs {
                    let t = lhs.symmetric_difference(&rhs).next().cloned();
                    return RepresentationReport::fail(
                        &format!("diagonal d{i}{j}"),
                        None,
                        t,
                        "represented diagonal is not the concrete diagonal".into(),
                    );
                }
            }
        }
    }
    RepresentationReport::pass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::{FiniteAtomStructure, Signature};

    fn full(n: usize, u: usize) -> ComplexAlgebra {
        let s = FiniteAtomStructure::full_set_algebra(n, u).unwrap();
        ComplexAlgebra::new(s, Signature::polyadic_equality(n).unwrap()).unwrap()
    }

    #[test]
    fn identity_representation_passes() {
        let rep = SetAlgebraRepresentation::identity_of_full(3, 2);
        assert!(verify_complete_representation(&rep, &full(3, 2)).passed);
    }

    #[test]
    fn dropping_a_tuple_breaks_covering() {
        let mut rep = SetAlgebraRepresentation::identity_of_full(3, 2);
        rep.atom_images[3].clear();
        let report = verify_complete_representation(&rep, &full(3, 2));
        assert_eq!(report.failed_check.as_deref(), Some("covering"));
        assert_eq!(report.tuple, Some(vec![0, 1, 1]));
    }

    #[test]
    fn shared_tuple_breaks_injectivity() {
        let mut rep = SetAlgebraRepresentation::identity_of_full(2, 2);
        rep.atom_images[1].insert(vec![0, 0]);
        let report = verify_complete_representation(&rep, &full(2, 2));
        assert_eq!(report.failed_check.as_deref(), Some("injective"));
    }

    #[test]
    fn swapped_atom_images_break_an_operator() {
        let mut rep = SetAlgebraRepresentation::identity_of_full(2, 2);
        rep.atom_images.swap(0, 1);
        let report = verify_complete_representation(&rep, &full(2, 2));
        assert!(!report.passed);
        assert!(report.failed_check.unwrap().starts_with("operator"));
    }
}
