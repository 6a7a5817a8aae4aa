//! Finite-or-cofinite subsets of a countably infinite universe.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Finite,
    Cofinite,
}

/// A subset of an infinite universe that is either finite (`support` lists its
/// members) or cofinite (`support` lists the excluded points).
///
/// The representation is canonical: two values denote the same set iff they are
/// structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinCofSet<T: Ord> {
    support: BTreeSet<T>,
    polarity: Polarity,
}

impl<T: Ord + Clone> FinCofSet<T> {
    pub fn empty() -> Self {
        FinCofSet {
            support: BTreeSet::new(),
            polarity: Polarity::Finite,
        }
    }

    pub fn universe() -> Self {
        FinCofSet {
            support: BTreeSet::new(),
            polarity: Polarity::Cofinite,
        }
    }

    pub fn finite<I: IntoIterator<Item = T>>(members: I) -> Self {
        FinCofSet {
            support: members.into_iter().collect(),
            polarity: Polarity::Finite,
        }
    }

    /// The universe minus the listed points.
    pub fn cofinite<I: IntoIterator<Item = T>>(excluded: I) -> Self {
        FinCofSet {
            support: excluded.into_iter().collect(),
            polarity: Polarity::Cofinite,
        }
    }

    pub fn singleton(x: T) -> Self {
        Self::finite([x])
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn support(&self) -> &BTreeSet<T> {
        &self.support
    }

    pub fn is_finite(&self) -> bool {
        self.polarity == Polarity::Finite
    }

    pub fn is_cofinite(&self) -> bool {
        self.polarity == Polarity::Cofinite
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.support.is_empty()
    }

    pub fn is_universe(&self) -> bool {
        self.is_cofinite() && self.support.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        match self.polarity {
            Polarity::Finite => self.support.contains(x),
            Polarity::Cofinite => !self.support.contains(x),
        }
    }

    pub fn complement(&self) -> Self {
        FinCofSet {
            support: self.support.clone(),
            polarity: match self.polarity {
                Polarity::Finite => Polarity::Cofinite,
                Polarity::Cofinite => Polarity::Finite,
            },
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use Polarity::*;
        match (self.polarity, other.polarity) {
            (Finite, Finite) => Self::finite(self.support.union(&other.support).cloned()),
            (Finite, Cofinite) => Self::cofinite(other.support.difference(&self.support).cloned()),
            (Cofinite, Finite) => Self::cofinite(self.support.difference(&other.support).cloned()),
            (Cofinite, Cofinite) => {
                Self::cofinite(self.support.intersection(&other.support).cloned())
            }
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement()
            .union(&other.complement())
            .complement()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        use Polarity::*;
        match (self.polarity, other.polarity) {
            (Finite, Finite) => self.support.is_subset(&other.support),
            (Finite, Cofinite) => self.support.is_disjoint(&other.support),
            // a cofinite set is infinite, so it never fits inside a finite one
            (Cofinite, Finite) => false,
            (Cofinite, Cofinite) => other.support.is_subset(&self.support),
        }
    }
}

impl<T: Ord + Clone + fmt::Debug> fmt::Debug for FinCofSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Finite => f.debug_set().entries(&self.support).finish(),
            Polarity::Cofinite => {
                write!(f, "U∖")?;
                f.debug_set().entries(&self.support).finish()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fincof() -> impl Strategy<Value = FinCofSet<u8>> {
        (proptest::collection::btree_set(0u8..12, 0..6), any::<bool>()).prop_map(|(s, cof)| {
            if cof {
                FinCofSet::cofinite(s)
            } else {
                FinCofSet::finite(s)
            }
        })
    }

    // pointwise semantics on a window that covers every support point plus a margin
    fn agrees_pointwise(x: &FinCofSet<u8>, f: impl Fn(u8) -> bool) -> bool {
        (0u8..20).all(|p| x.contains(&p) == f(p))
    }

    #[test]
    fn complement_flips_polarity_and_keeps_support() {
        let x = FinCofSet::finite([1u8, 4]);
        let c = x.complement();
        assert!(c.is_cofinite());
        assert_eq!(c.support(), x.support());
        assert_eq!(c.complement(), x);
    }

    #[test]
    fn subset_edge_cases() {
        let fin = FinCofSet::finite([1u8, 2]);
        let cof = FinCofSet::cofinite([3u8]);
        assert!(fin.is_subset(&cof));
        assert!(!cof.is_subset(&fin));
        assert!(FinCofSet::<u8>::empty().is_subset(&fin));
        assert!(cof.is_subset(&FinCofSet::universe()));
        assert!(!FinCofSet::cofinite([2u8]).is_subset(&cof));
    }

    proptest! {
        #[test]
        fn boolean_ops_match_pointwise(a in fincof(), b in fincof()) {
            prop_assert!(agrees_pointwise(&a.union(&b), |p| a.contains(&p) || b.contains(&p)));
            prop_assert!(agrees_pointwise(&a.intersection(&b), |p| a.contains(&p) && b.contains(&p)));
            prop_assert!(agrees_pointwise(&a.complement(), |p| !a.contains(&p)));
            prop_assert!(agrees_pointwise(&a.difference(&b), |p| a.contains(&p) && !b.contains(&p)));
            let pointwise_subset = (0u8..20).all(|p| !a.contains(&p) || b.contains(&p))
                && !(a.is_cofinite() && b.is_finite());
            prop_assert_eq!(a.is_subset(&b), pointwise_subset);
        }
    }
}
