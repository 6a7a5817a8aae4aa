use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BaoError;

/// Which operator families an algebra carries, and in which finite dimension.
///
/// Substitution-only algebras keep only the replacement/transposition flags,
/// polyadic equality algebras enable all four.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub dimension: usize,
    pub has_cylindrifications: bool,
    pub has_diagonals: bool,
    pub has_replacements: bool,
    pub has_transpositions: bool,
}

impl Signature {
    pub fn new(
        dimension: usize,
        has_cylindrifications: bool,
        has_diagonals: bool,
        has_replacements: bool,
        has_transpositions: bool,
    ) -> Result<Self, BaoError> {
        let sig = Signature {
            dimension,
            has_cylindrifications,
            has_diagonals,
            has_replacements,
            has_transpositions,
        };
        sig.validate()?;
        Ok(sig)
    }

    /// Cylindrifications, diagonals, replacements and transpositions.
    pub fn polyadic_equality(dimension: usize) -> Result<Self, BaoError> {
        Self::new(dimension, true, true, true, true)
    }

    /// The diagonal-free polyadic reduct.
    pub fn quasi_polyadic(dimension: usize) -> Result<Self, BaoError> {
        Self::new(dimension, true, false, true, true)
    }

    pub fn cylindric(dimension: usize) -> Result<Self, BaoError> {
        Self::new(dimension, true, true, false, false)
    }

    /// Substitutions only, no cylindrifiers.
    pub fn substitution(dimension: usize) -> Result<Self, BaoError> {
        Self::new(dimension, false, false, true, true)
    }

    pub fn validate(&self) -> Result<(), BaoError> {
        if self.dimension < 2 {
            return Err(BaoError::Signature(format!(
                "dimension must be at least 2, got {}",
                self.dimension
            )));
        }
        if !(self.has_cylindrifications
            || self.has_diagonals
            || self.has_replacements
            || self.has_transpositions)
        {
            return Err(BaoError::Signature(
                "at least one operator family must be enabled".into(),
            ));
        }
        Ok(())
    }

    pub fn without_diagonals(self) -> Result<Self, BaoError> {
        Self::new(
            self.dimension,
            self.has_cylindrifications,
            false,
            self.has_replacements,
            self.has_transpositions,
        )
    }

    /// Every unary operator enabled by this signature, in a fixed order.
    pub fn unary_operators(&self) -> Vec<Operator> {
        let n = self.dimension;
        let mut ops = Vec::new();
        if self.has_cylindrifications {
            ops.extend((0..n).map(Operator::Cyl));
        }
        if self.has_replacements {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        ops.push(Operator::Replace(i, j));
                    }
                }
            }
        }
        if self.has_transpositions {
            for i in 0..n {
                for j in i + 1..n {
                    ops.push(Operator::Transpose(i, j));
                }
            }
        }
        ops
    }

    pub fn enables(&self, op: &Operator) -> Result<(), BaoError> {
        let n = self.dimension;
        let (enabled, i, j) = match *op {
            Operator::Cyl(i) => (self.has_cylindrifications, i, i),
            Operator::Replace(i, j) => (self.has_replacements, i, j),
            Operator::Transpose(i, j) => (self.has_transpositions, i, j),
        };
        if let Some(bad) = [i, j].into_iter().find(|&x| x >= n) {
            return Err(BaoError::IndexOutOfRange {
                index: bad,
                dimension: n,
            });
        }
        if !enabled {
            return Err(BaoError::DisabledOperator(op.to_string()));
        }
        Ok(())
    }
}

/// A unary operator of a polyadic-type signature.
///
/// `Replace(i, j)` is the replacement `s_i^j`: coordinate `i` takes the value of
/// coordinate `j`. `Transpose(i, j)` swaps coordinates `i` and `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operator {
    Cyl(usize),
    Replace(usize, usize),
    Transpose(usize, usize),
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Cyl(i) => write!(f, "c{i}"),
            Operator::Replace(i, j) => write!(f, "s{i}^{j}"),
            Operator::Transpose(i, j) => write!(f, "s[{i},{j}]"),
        }
    }
}

impl FromStr for Operator {
    type Err = BaoError;

    /// Accepts `c0`, `c_0`, `s0^1`, `s_0^1`, `s[0,1]`, `s_[0,1]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BaoError::Parse(format!("unrecognised operator `{s}`"));
        let compact: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '{' | '}' | ' '))
            .collect();
        let number = |t: &str| t.parse::<usize>().map_err(|_| bad());
        if let Some(rest) = compact.strip_prefix('c') {
            return Ok(Operator::Cyl(number(rest)?));
        }
        let rest = compact.strip_prefix('s').ok_or_else(bad)?;
        if let Some(inner) = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (i, j) = inner.split_once(',').ok_or_else(bad)?;
            return Ok(Operator::Transpose(number(i)?, number(j)?));
        }
        let (i, j) = rest.split_once('^').ok_or_else(bad)?;
        Ok(Operator::Replace(number(i)?, number(j)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_dimension_and_empty_signature() {
        assert!(Signature::new(1, true, false, false, false).is_err());
        assert!(Signature::new(3, false, false, false, false).is_err());
        assert!(Signature::substitution(2).is_ok());
    }

    #[test]
    fn operator_names_round_trip() {
        for name in ["c0", "s0^1", "s[0,2]"] {
            let op: Operator = name.parse().unwrap();
            assert_eq!(op.to_string(), name);
        }
        assert_eq!("s_0^1".parse::<Operator>().unwrap(), Operator::Replace(0, 1));
        assert_eq!("s_{[0,1]}".parse::<Operator>().unwrap(), Operator::Transpose(0, 1));
        assert!("q1".parse::<Operator>().is_err());
    }

    #[test]
    fn enables_checks_family_and_range() {
        let sig = Signature::substitution(3).unwrap();
        assert!(sig.enables(&Operator::Replace(0, 1)).is_ok());
        assert!(matches!(
            sig.enables(&Operator::Cyl(0)),
            Err(BaoError::DisabledOperator(_))
        ));
        assert!(matches!(
            sig.enables(&Operator::Transpose(0, 3)),
            Err(BaoError::IndexOutOfRange { .. })
        ));
    }
}
