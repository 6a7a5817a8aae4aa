use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::WitnessError;
use crate::bao::{
    all_tuples, check_complete_additivity, AdditivityVerdict, BaoError, FinCofSet, Operator, SupremumOracle,
};

/// Index sets `X ⊆ J`, with `J` modelled as the naturals. Each `X` names the
/// element `R_X`; the filter is the cofinite filter, so `R_X` carries the
/// diagonal block exactly when `X` is cofinite.
pub type PaElement = FinCofSet<u64>;

/// The partition algebra `{R_X}` of a fixed dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionAlgebra {
    dimension: usize,
}

impl PartitionAlgebra {
    pub fn new(dimension: usize) -> Result<Self, WitnessError> {
        if dimension < 2 {
            return Err(WitnessError::Malformed(format!("dimension {dimension} is below 2")));
        }
        Ok(PartitionAlgebra { dimension })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn zero(&self) -> PaElement {
        FinCofSet::empty()
    }

    /// `R_J`.
    pub fn one(&self) -> PaElement {
        FinCofSet::universe()
    }

    /// `R_{{k}} = Q_k`.
    pub fn atom(&self, k: u64) -> PaElement {
        FinCofSet::singleton(k)
    }

    pub fn union(&self, a: &PaElement, b: &PaElement) -> PaElement {
        a.union(b)
    }

    /// Complement relative to `R_J`.
    pub fn complement(&self, a: &PaElement) -> PaElement {
        a.complement()
    }

    pub fn leq(&self, a: &PaElement, b: &PaElement) -> bool {
        a.is_subset(b)
    }

    /// `s_0^1 R_X`: the replaced tuple always lies in the diagonal block, so
    /// the image is everything when `R_X` contains that block and nothing
    /// otherwise.
    pub fn s01(&self, a: &PaElement) -> PaElement {
        if a.is_cofinite() {
            self.one()
        } else {
            self.zero()
        }
    }

    /// Every block is symmetric, so transpositions fix every `R_X`.
    pub fn transposition(&self, a: &PaElement, i: usize, j: usize) -> Result<PaElement, WitnessError> {
        if i >= self.dimension || j >= self.dimension {
            return Err(WitnessError::Malformed(format!(
                "transposition [{i},{j}] outside dimension {}",
                self.dimension
            )));
        }
        Ok(a.clone())
    }

    /// Some atom not below `x`, or `None` if `x` bounds every atom.
    ///
    /// The only upper bound of all atoms is `R_J`: a finite `X` misses
    /// `max X + 1`, a cofinite `X ≠ J` misses each excluded point.
    pub fn atom_not_below(&self, x: &PaElement) -> Option<u64> {
        if x.is_finite() {
            Some(x.support().iter().next_back().map_or(0, |m| m + 1))
        } else {
            x.support().iter().next().copied()
        }
    }
}

impl SupremumOracle for PartitionAlgebra {
    type Element = PaElement;

    fn one(&self) -> PaElement {
        PartitionAlgebra::one(self)
    }

    fn leq(&self, a: &PaElement, b: &PaElement) -> bool {
        a.is_subset(b)
    }

    fn apply(&self, op: Operator, x: &PaElement) -> Result<PaElement, BaoError> {
        match op {
            Operator::Replace(0, 1) => Ok(self.s01(x)),
            Operator::Transpose(i, j) => {
                self.transposition(x, i, j).map_err(|e| BaoError::Precondition(e.to_string()))
            }
            other => Err(BaoError::Unsupported(format!("{other} is not computed on the partition algebra"))),
        }
    }

    fn atom_family(&self) -> String {
        "{R_{k} : k in J}".into()
    }

    fn sup_of_atoms(&self) -> Result<PaElement, BaoError> {
        // R_J bounds every atom and, by `atom_not_below`, no other element does
        let one = PartitionAlgebra::one(self);
        debug_assert!(self.atom_not_below(&one).is_none());
        Ok(one)
    }

    fn sup_of_atom_images(&self, op: Operator) -> Result<PaElement, BaoError> {
        match op {
            // every atom is finite, so every image is 0
            Operator::Replace(0, 1) => Ok(self.zero()),
            // images are the atoms themselves
            Operator::Transpose(..) => self.sup_of_atoms(),
            other => Err(BaoError::Unsupported(format!("no supremum certificate for {other}-images"))),
        }
    }
}

/// Why `s_0^1` fails to preserve the supremum of the atoms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditivityCertificate {
    pub sup: PaElement,
    /// For a sample of candidate upper bounds other than `R_J`, an atom each misses.
    pub non_bounds: Vec<(PaElement, u64)>,
    pub image_sup: PaElement,
    /// For a sample of atoms `R_{k}`, the image `s_0^1 R_{k}`.
    pub atom_images: Vec<(u64, PaElement)>,
    pub s01_of_sup: PaElement,
    pub accepted_as_witness: bool,
}

pub fn additivity_failure_certificate() -> AdditivityCertificate {
    let alg = PartitionAlgebra::new(2).expect("dimension 2");
    let candidates = [
        alg.zero(),
        FinCofSet::finite([0, 1, 2]),
        FinCofSet::cofinite([5]),
        FinCofSet::cofinite([0, 7]),
    ];
    let non_bounds = candidates
        .into_iter()
        .map(|c| {
            let k = alg.atom_not_below(&c).expect("only R_J bounds all atoms");
            (c, k)
        })
        .collect();
    let sup = alg.sup_of_atoms().expect("certified");
    let verdict = check_complete_additivity(Operator::Replace(0, 1), &alg).expect("certified");
    AdditivityCertificate {
        s01_of_sup: alg.s01(&sup),
        sup,
        non_bounds,
        image_sup: alg.sup_of_atom_images(Operator::Replace(0, 1)).expect("certified"),
        atom_images: (0..4).map(|k| (k, alg.s01(&alg.atom(k)))).collect(),
        accepted_as_witness: matches!(verdict, AdditivityVerdict::Witness(_)),
    }
}

/// A finite partition of `^αU` into `Q_0 = D01` and further blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcretePartition {
    pub dimension: usize,
    pub base: usize,
    pub blocks: Vec<BTreeSet<Vec<usize>>>,
    /// Transpositions `[i,j]` under which every block is closed.
    pub symmetric_under: Vec<(usize, usize)>,
}

/// Builds `Q_0 = D01` followed by blocks that are unions of orbits under
/// the transpositions fixing `D01` setwise.
///
/// For `α = 2` that is every transposition. For `α ≥ 3` the diagonal `D01`
/// itself is moved by `[0,2]`, so only transpositions fixing `{0,1}` or
/// acting outside it are used. Orbits are taken in order of their least
/// tuple; the last block absorbs the remaining orbits.
pub fn concrete_partition(base: usize, dimension: usize, blocks: usize) -> Result<ConcretePartition, WitnessError> {
    if dimension < 2 || base == 0 || blocks < 2 {
        return Err(WitnessError::Malformed(format!(
            "need dimension ≥ 2, a nonempty base and at least 2 blocks (got {dimension}, {base}, {blocks})"
        )));
    }
    let preserves_d01 = |i: usize, j: usize| (i < 2) == (j < 2) || (i, j) == (0, 1);
    let group: Vec<(usize, usize)> = (0..dimension)
        .flat_map(|i| (i + 1..dimension).map(move |j| (i, j)))
        .filter(|&(i, j)| preserves_d01(i, j))
        .collect();
    let tuples = all_tuples(dimension, base);
    let d01: BTreeSet<Vec<usize>> = tuples.iter().filter(|s| s[0] == s[1]).cloned().collect();
    let mut orbit_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut orbits: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for t in tuples.iter().filter(|t| !d01.contains(*t)) {
        if orbit_of.contains_key(t) {
            continue;
        }
        let mut orbit = BTreeSet::from([t.clone()]);
        let mut frontier = vec![t.clone()];
        while let Some(s) = frontier.pop() {
            for &(i, j) in &group {
                let mut u = s.clone();
                u.swap(i, j);
                if orbit.insert(u.clone()) {
                    frontier.push(u);
                }
            }
        }
        for s in &orbit {
            orbit_of.insert(s.clone(), orbits.len());
        }
        orbits.push(orbit);
    }
    if orbits.len() < blocks - 1 {
        return Err(WitnessError::Malformed(format!(
            "only {} symmetric classes off the diagonal, {} blocks requested",
            orbits.len(),
            blocks
        )));
    }
    let mut out = vec![d01];
    let mut rest = orbits.into_iter();
    for _ in 0..blocks - 2 {
        out.push(rest.next().expect("counted"));
    }
    out.push(rest.flatten().collect());
    let symmetric_under = (0..dimension)
        .flat_map(|i| (i + 1..dimension).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            out.iter().all(|q| {
                q.iter().all(|s| {
                    let mut u = s.clone();
                    u.swap(i, j);
                    q.contains(&u)
                })
            })
        })
        .collect();
    Ok(ConcretePartition { dimension, base, blocks: out, symmetric_under })
}

impl ConcretePartition {
    /// The set denoted by `R_X` when `J` is truncated to the indices
    /// `0..blocks-1`, index `k` naming block `k + 1`. Support points outside
    /// the window are ignored.
    pub fn denote(&self, x: &PaElement) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for k in 0..self.blocks.len() - 1 {
            if x.contains(&(k as u64)) {
                out.extend(self.blocks[k + 1].iter().cloned());
            }
        }
        if x.is_cofinite() {
            out.extend(self.blocks[0].iter().cloned());
        }
        out
    }

    /// `{s : s[0 ← s_1] ∈ x}`, computed pointwise.
    pub fn s01_pointwise(&self, x: &BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
        all_tuples(self.dimension, self.base)
            .into_iter()
            .filter(|s| {
                let mut r = s.clone();
                r[0] = s[1];
                x.contains(&r)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn element() -> impl Strategy<Value = PaElement> {
        (proptest::collection::btree_set(0u64..40, 0..8), any::<bool>())
            .prop_map(|(s, cof)| if cof { FinCofSet::cofinite(s) } else { FinCofSet::finite(s) })
    }

    #[test]
    fn case_rule_examples() {
        let alg = PartitionAlgebra::new(2).unwrap();
        assert_eq!(alg.s01(&alg.atom(5)), alg.zero());
        assert_eq!(alg.s01(&alg.one()), alg.one());
        assert_eq!(alg.s01(&FinCofSet::cofinite([3])), alg.one());
        assert_eq!(alg.complement(&FinCofSet::cofinite([3])), alg.atom(3));
        assert_eq!(alg.union(&alg.atom(1), &alg.atom(2)), FinCofSet::finite([1, 2]));
    }

    #[test]
    fn certificate_values() {
        let c = additivity_failure_certificate();
        assert!(c.sup.is_universe());
        assert!(c.image_sup.is_empty());
        assert!(c.s01_of_sup.is_universe());
        assert!(c.accepted_as_witness);
        for (x, k) in &c.non_bounds {
            assert!(!x.contains(k));
        }
    }

    #[test]
    fn transpositions_are_confirmed() {
        let alg = PartitionAlgebra::new(3).unwrap();
        let v = check_complete_additivity(Operator::Transpose(0, 2), &alg).unwrap();
        assert!(v.is_confirmed());
        assert!(alg.transposition(&alg.atom(1), 0, 3).is_err());
    }

    #[test]
    fn two_dimensional_partition() {
        let p = concrete_partition(3, 2, 3).unwrap();
        assert_eq!(p.blocks[0], BTreeSet::from([vec![0, 0], vec![1, 1], vec![2, 2]]));
        assert_eq!(p.symmetric_under, vec![(0, 1)]);
        let total: usize = p.blocks.iter().map(BTreeSet::len).sum();
        assert_eq!(total, 9);
    }

    #[test]
    fn three_dimensional_partition_is_symmetric_only_under_01() {
        let p = concrete_partition(2, 3, 3).unwrap();
        assert_eq!(p.symmetric_under, vec![(0, 1)]);
        assert!(concrete_partition(2, 2, 5).is_err());
    }

    proptest! {
        #[test]
        fn closure_laws(x in element(), y in element()) {
            let alg = PartitionAlgebra::new(2).unwrap();
            let u = alg.union(&x, &y);
            prop_assert_eq!(u.is_cofinite(), x.is_cofinite() || y.is_cofinite());
            prop_assert_eq!(alg.union(&alg.complement(&x), &x), alg.one());
            prop_assert_eq!(alg.transposition(&x, 0, 1).unwrap(), x.clone());
            let s = alg.s01(&x);
            prop_assert!(s.is_empty() || s.is_universe());
        }

        #[test]
        fn case_rule_matches_pointwise_model(support in proptest::collection::btree_set(0u64..4, 0..4), cof in any::<bool>(), dim in 2usize..4) {
            // two dimensions need a larger base to supply five off-diagonal orbits
            let p = concrete_partition(if dim == 2 { 4 } else { 3 }, dim, 6).unwrap();
            let alg = PartitionAlgebra::new(dim).unwrap();
            let x = if cof { FinCofSet::cofinite(support) } else { FinCofSet::finite(support) };
            let pointwise = p.s01_pointwise(&p.denote(&x));
            prop_assert_eq!(pointwise, p.denote(&alg.s01(&x)));
        }
    }
}
