use serde::Serialize;

use super::{AtomSet, BaoError, ComplexAlgebra, Operator};

/// Two readings of the two-dimensional schema: for every `y ≠ 0` there is an
/// atom `x` with `s_i^j x ≠ 0` and either `s_i^j x ≤ y` (literal) or
/// `s_i^j x · y ≠ 0` (corrected).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CrpaVariant {
    Literal,
    Corrected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub holds: bool,
    /// The least (by bitmask) `y` with no suitable atom, when `holds` is false.
    pub counterexample: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrpaReport {
    pub variant: CrpaVariant,
    pub pairs: Vec<PairVerdict>,
}

impl CrpaReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|p| p.holds)
    }
}

/// Evaluates the schema exhaustively over all nonzero elements.
pub fn check_crpa2_schema(alg: &ComplexAlgebra, variant: CrpaVariant) -> Result<CrpaReport, BaoError> {
    if alg.dimension() != 2 {
        return Err(BaoError::Precondition(format!(
            "the schema is two-dimensional, algebra has dimension {}",
            alg.dimension()
        )));
    }
    let k = alg.atom_count();
    if k > 16 {
        return Err(BaoError::TooLarge(format!("{k} atoms; the exhaustive check allows 16")));
    }
    let mut pairs = Vec::new();
    for (i, j) in [(0, 1), (1, 0)] {
        let images: Vec<AtomSet> = (0..k)
            .map(|x| alg.apply(Operator::Replace(i, j), &alg.atom(x)))
            .collect::<Result<_, _>>()?;
        let images: Vec<AtomSet> = images.into_iter().filter(|s| !s.is_empty()).collect();
        let counterexample = (1..1u64 << k).map(|m| AtomSet::from_mask(k, m)).find(|y| {
            !images.iter().any(|s| match variant {
                CrpaVariant::Literal => s.is_subset(y),
                CrpaVariant::Corrected => s.intersects(y),
            })
        });
        pairs.push(PairVerdict {
            i,
            j,
            holds: counterexample.is_none(),
            counterexample: counterexample
                .map(|y| y.iter().map(|a| alg.structure().label(a).to_string()).collect()),
        });
    }
    Ok(CrpaReport { variant, pairs })
}
