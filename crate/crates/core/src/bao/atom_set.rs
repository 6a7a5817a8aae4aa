use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A subset of the atoms of a finite atom structure, stored as a dense bitset.
///
/// Every `AtomSet` carries its universe size; binary operations require both
/// operands to range over the same universe.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AtomSet(FixedBitSet);

impl AtomSet {
    pub fn empty(universe: usize) -> Self {
        AtomSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        AtomSet(bits)
    }

    pub fn singleton(universe: usize, atom: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(atom);
        set
    }

    pub fn from_atoms<I: IntoIterator<Item = usize>>(universe: usize, atoms: I) -> Self {
        let mut set = Self::empty(universe);
        for a in atoms {
            set.insert(a);
        }
        set
    }

    /// Decodes the low `universe` bits of `mask` (bit `a` set iff atom `a` is present).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "mask decoding needs at most 64 atoms");
        Self::from_atoms(universe, (0..universe).filter(|a| mask >> a & 1 == 1))
    }

    /// Number of atoms of the underlying structure.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.0.contains(atom)
    }

    pub fn insert(&mut self, atom: usize) {
        assert!(atom < self.universe(), "atom {atom} outside universe {}", self.universe());
        self.0.insert(atom);
    }

    pub fn remove(&mut self, atom: usize) {
        self.0.set(atom, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.ones().next()
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        self.check_universe(other);
        let mut out = self.0.clone();
        out.union_with(&other.0);
        AtomSet(out)
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        self.check_universe(other);
        self.0.union_with(&other.0);
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        self.check_universe(other);
        let mut out = self.0.clone();
        out.intersect_with(&other.0);
        AtomSet(out)
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        self.check_universe(other);
        let mut out = self.0.clone();
        out.difference_with(&other.0);
        AtomSet(out)
    }

    pub fn complement(&self) -> AtomSet {
        let mut out = self.0.clone();
        out.toggle_range(..);
        AtomSet(out)
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.check_universe(other);
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        self.check_universe(other);
        !self.0.is_disjoint(&other.0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_universe(&self, other: &AtomSet) {
        debug_assert_eq!(
            self.universe(),
            other.universe(),
            "atom sets over different universes"
        );
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AtomSet({}; ", self.universe())?;
        f.debug_set().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct AtomSetRepr {
    universe: usize,
    atoms: Vec<usize>,
}

impl Serialize for AtomSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        AtomSetRepr {
            universe: self.universe(),
            atoms: self.to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AtomSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = AtomSetRepr::deserialize(deserializer)?;
        if let Some(bad) = repr.atoms.iter().find(|&&a| a >= repr.universe) {
            return Err(serde::de::Error::custom(format!(
                "atom {bad} outside universe {}",
                repr.universe
            )));
        }
        Ok(AtomSet::from_atoms(repr.universe, repr.atoms))
    }
}
