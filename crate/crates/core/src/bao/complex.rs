use super::{AtomSet, BaoError, FiniteAtomStructure, Operator, Signature};

/// The full complex algebra of a finite atom structure: elements are atom
/// sets and every operator is the relational image of its atom-level relation.
#[derive(Clone, Debug)]
pub struct ComplexAlgebra {
    structure: FiniteAtomStructure,
    signature: Signature,
}

impl ComplexAlgebra {
    /// Fails if `signature` enables a family the structure does not carry or
    /// the dimensions disagree.
    pub fn new(structure: FiniteAtomStructure, signature: Signature) -> Result<Self, BaoError> {
        signature.validate()?;
        if structure.dimension() != signature.dimension {
            return Err(BaoError::Shape(format!(
                "structure has dimension {}, signature {}",
                structure.dimension(),
                signature.dimension
            )));
        }
        let missing = [
            (signature.has_cylindrifications, structure.has_cylindrifications(), "cylindrifications"),
            (signature.has_diagonals, structure.has_diagonals(), "diagonals"),
            (signature.has_replacements, structure.has_replacements(), "replacements"),
            (signature.has_transpositions, structure.has_transpositions(), "transpositions"),
        ]
        .into_iter()
        .find(|&(wanted, present, _)| wanted && !present);
        if let Some((_, _, family)) = missing {
            return Err(BaoError::MissingRelation(family.into()));
        }
        Ok(ComplexAlgebra { structure, signature })
    }

    pub fn structure(&self) -> &FiniteAtomStructure {
        &self.structure
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn dimension(&self) -> usize {
        self.signature.dimension
    }

    pub fn atom_count(&self) -> usize {
        self.structure.atom_count()
    }

    pub fn zero(&self) -> AtomSet {
        AtomSet::empty(self.atom_count())
    }

    pub fn one(&self) -> AtomSet {
        AtomSet::full(self.atom_count())
    }

    pub fn atom(&self, a: usize) -> AtomSet {
        AtomSet::singleton(self.atom_count(), a)
    }

    pub fn join(&self, x: &AtomSet, y: &AtomSet) -> AtomSet {
        x.union(y)
    }

    pub fn meet(&self, x: &AtomSet, y: &AtomSet) -> AtomSet {
        x.intersection(y)
    }

    pub fn complement(&self, x: &AtomSet) -> AtomSet {
        x.complement()
    }

    pub fn leq(&self, x: &AtomSet, y: &AtomSet) -> bool {
        x.is_subset(y)
    }

    pub fn diagonal(&self, i: usize, j: usize) -> Result<AtomSet, BaoError> {
        let n = self.dimension();
        if let Some(bad) = [i, j].into_iter().find(|&x| x >= n) {
            return Err(BaoError::IndexOutOfRange { index: bad, dimension: n });
        }
        if !self.signature.has_diagonals {
            return Err(BaoError::DisabledOperator(format!("d{i}{j}")));
        }
        Ok(self.structure.diagonal(i, j).expect("checked at construction").clone())
    }

    pub fn apply(&self, op: Operator, x: &AtomSet) -> Result<AtomSet, BaoError> {
        self.signature.enables(&op)?;
        let s = &self.structure;
        Ok(match op {
            Operator::Cyl(i) => s.cylindrification(i).expect("checked").preimage(x),
            Operator::Replace(i, j) => s.replacement(i, j).expect("checked").preimage(x),
            Operator::Transpose(i, j) => {
                let map = s.transposition(i, j).expect("checked");
                AtomSet::from_atoms(self.atom_count(), x.iter().map(|a| map[a]))
            }
        })
    }

    /// Every element, in the order of their bitmasks. Only for at most 20 atoms.
    pub fn elements(&self) -> Result<impl Iterator<Item = AtomSet>, BaoError> {
        let k = self.atom_count();
        if k > 20 {
            return Err(BaoError::TooLarge(format!("{k} atoms is too many to enumerate elements")));
        }
        Ok((0..1u64 << k).map(move |mask| AtomSet::from_mask(k, mask)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::BinaryRelation;
    use proptest::prelude::*;

    fn full(n: usize, u: usize) -> ComplexAlgebra {
        let s = FiniteAtomStructure::full_set_algebra(n, u).unwrap();
        ComplexAlgebra::new(s, Signature::polyadic_equality(n).unwrap()).unwrap()
    }

    #[test]
    fn one_atom_identity_cylindrification() {
        let s = FiniteAtomStructure::new(2, vec!["a".into()])
            .unwrap()
            .with_cylindrifications(vec![BinaryRelation::identity(1); 2])
            .unwrap();
        let alg = ComplexAlgebra::new(s, Signature::new(2, true, false, false, false).unwrap()).unwrap();
        assert_eq!(alg.apply(Operator::Cyl(0), &alg.atom(0)).unwrap(), alg.atom(0));
    }

    #[test]
    fn missing_relation_is_a_configuration_error() {
        let s = FiniteAtomStructure::new(2, vec!["a".into()]).unwrap();
        let err = ComplexAlgebra::new(s, Signature::cylindric(2).unwrap()).unwrap_err();
        assert!(matches!(err, BaoError::MissingRelation(_)));
    }

    #[test]
    fn cylindrification_is_a_closure_operator_on_small_structures() {
        for (n, u) in [(2, 2), (3, 2)] {
            let alg = full(n, u);
            for x in alg.elements().unwrap() {
                for i in 0..n {
                    let cx = alg.apply(Operator::Cyl(i), &x).unwrap();
                    assert!(x.is_subset(&cx));
                    assert_eq!(alg.apply(Operator::Cyl(i), &cx).unwrap(), cx);
                }
            }
        }
    }

    #[test]
    fn replacement_matches_concrete_definition() {
        // s_0^1 X = {s : s[0 <- s_1] in X}
        let alg = full(2, 3);
        let labels = alg.structure().labels().to_vec();
        let x = AtomSet::from_atoms(9, [4, 8]); // (1,1), (2,2)
        let image = alg.apply(Operator::Replace(0, 1), &x).unwrap();
        let names: Vec<&str> = image.iter().map(|a| labels[a].as_str()).collect();
        assert_eq!(names, ["(0,1)", "(0,2)", "(1,1)", "(1,2)", "(2,1)", "(2,2)"]);
        let off_diagonal = AtomSet::from_atoms(9, [1, 5]);
        assert!(alg.apply(Operator::Replace(0, 1), &off_diagonal).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn operators_are_normal_and_additive(xm in 0u64..512, ym in 0u64..512) {
            let alg = full(2, 3);
            let (x, y) = (AtomSet::from_mask(9, xm), AtomSet::from_mask(9, ym));
            for op in alg.signature().unary_operators() {
                prop_assert!(alg.apply(op, &alg.zero()).unwrap().is_empty());
                let lhs = alg.apply(op, &x.union(&y)).unwrap();
                let rhs = alg.apply(op, &x).unwrap().union(&alg.apply(op, &y).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn transpositions_are_involutions(xm in 0u64..256) {
            let alg = full(3, 2);
            let x = AtomSet::from_mask(8, xm);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let once = alg.apply(Operator::Transpose(i, j), &x).unwrap();
                prop_assert_eq!(alg.apply(Operator::Transpose(i, j), &once).unwrap(), x.clone());
            }
        }
    }
}
