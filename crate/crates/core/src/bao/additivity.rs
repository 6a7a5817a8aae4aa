use std::fmt::Debug;

use serde::Serialize;

use super::{AtomSet, BaoError, ComplexAlgebra, Operator};

/// Least-upper-bound queries an algebra must answer for complete additivity
/// to be checked on its atom family.
///
/// Every method defaults to an unsupported-query error; an algebra opts in by
/// certifying the two suprema it can compute.
pub trait SupremumOracle {
    type Element: Clone + PartialEq + Debug + Serialize;

    fn one(&self) -> Self::Element;

    fn leq(&self, a: &Self::Element, b: &Self::Element) -> bool;

    fn apply(&self, op: Operator, x: &Self::Element) -> Result<Self::Element, BaoError>;

    /// Human-readable name of the atom family.
    fn atom_family(&self) -> String {
        "atoms".into()
    }

    /// The certified supremum of all atoms.
    fn sup_of_atoms(&self) -> Result<Self::Element, BaoError> {
        Err(BaoError::Unsupported("no supremum certificate for the atom family".into()))
    }

    /// The certified supremum of `{op(a) : a an atom}`.
    fn sup_of_atom_images(&self, op: Operator) -> Result<Self::Element, BaoError> {
        Err(BaoError::Unsupported(format!("no supremum certificate for the {op}-images of atoms")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditivityWitness<E> {
    pub operator: String,
    pub family: String,
    pub sup: E,
    pub op_of_sup: E,
    pub sup_of_images: E,
    /// Below 1, above every image, and not above `op_of_sup`.
    pub separating_y: E,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AdditivityVerdict<E> {
    Confirmed,
    Witness(AdditivityWitness<E>),
}

impl<E> AdditivityVerdict<E> {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, AdditivityVerdict::Confirmed)
    }
}

/// Compares `op(Σ atoms)` with `Σ op(atom)` using the algebra's certificates.
pub fn check_complete_additivity<A: SupremumOracle>(
    op: Operator,
    alg: &A,
) -> Result<AdditivityVerdict<A::Element>, BaoError> {
    let sup = alg.sup_of_atoms()?;
    let op_of_sup = alg.apply(op, &sup)?;
    let sup_of_images = alg.sup_of_atom_images(op)?;
    if op_of_sup == sup_of_images {
        return Ok(AdditivityVerdict::Confirmed);
    }
    // op is monotone, so Σ images ≤ op(sup); a strict gap means the image
    // supremum itself separates.
    let y = sup_of_images.clone();
    let one = alg.one();
    if !alg.leq(&y, &one) || y == one || alg.leq(&op_of_sup, &y) {
        return Err(BaoError::Precondition(format!(
            "supremum certificates for {op} are inconsistent: no separating element below 1"
        )));
    }
    Ok(AdditivityVerdict::Witness(AdditivityWitness {
        operator: op.to_string(),
        family: alg.atom_family(),
        sup,
        op_of_sup,
        sup_of_images,
        separating_y: y,
    }))
}

impl SupremumOracle for ComplexAlgebra {
    type Element = AtomSet;

    fn one(&self) -> AtomSet {
        ComplexAlgebra::one(self)
    }

    fn leq(&self, a: &AtomSet, b: &AtomSet) -> bool {
        a.is_subset(b)
    }

    fn apply(&self, op: Operator, x: &AtomSet) -> Result<AtomSet, BaoError> {
        ComplexAlgebra::apply(self, op, x)
    }

    // Finitely many atoms: the supremum is their finite join.
    fn sup_of_atoms(&self) -> Result<AtomSet, BaoError> {
        let mut sup = self.zero();
        for a in 0..self.atom_count() {
            sup.union_with(&self.atom(a));
        }
        Ok(sup)
    }

    fn sup_of_atom_images(&self, op: Operator) -> Result<AtomSet, BaoError> {
        let mut sup = self.zero();
        for a in 0..self.atom_count() {
            sup.union_with(&ComplexAlgebra::apply(self, op, &self.atom(a))?);
        }
        Ok(sup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::{FiniteAtomStructure, Signature};

    struct NoCertificates;

    impl SupremumOracle for NoCertificates {
        type Element = bool;
        fn one(&self) -> bool {
            true
        }
        fn leq(&self, a: &bool, b: &bool) -> bool {
            !a || *b
        }
        fn apply(&self, _: Operator, x: &bool) -> Result<bool, BaoError> {
            Ok(*x)
        }
    }

    #[test]
    fn finite_complex_algebras_are_confirmed_for_every_operator() {
        for (n, u) in [(2, 2), (2, 3), (3, 2)] {
            let s = FiniteAtomStructure::full_set_algebra(n, u).unwrap();
            let alg = ComplexAlgebra::new(s, Signature::polyadic_equality(n).unwrap()).unwrap();
            for op in alg.signature().unary_operators() {
                assert!(check_complete_additivity(op, &alg).unwrap().is_confirmed(), "{op}");
            }
        }
    }

    #[test]
    fn missing_certificate_is_unsupported() {
        let err = check_complete_additivity(Operator::Cyl(0), &NoCertificates).unwrap_err();
        assert!(matches!(err, BaoError::Unsupported(_)));
    }
}
