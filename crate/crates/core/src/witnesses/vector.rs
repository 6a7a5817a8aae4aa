use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

/// A rational sequence indexed by naturals with finitely many nonzero entries.
/// Zero entries are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSupportSeq {
    entries: BTreeMap<usize, BigRational>,
}

impl FiniteSupportSeq {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, BigRational)>>(entries: I) -> Self {
        let mut s = Self::zero();
        for (i, v) in entries {
            s.set(i, v);
        }
        s
    }

    /// Leading entries from integers; later entries are zero.
    pub fn from_ints(values: &[i64]) -> Self {
        Self::from_entries(values.iter().enumerate().map(|(i, &v)| (i, BigRational::from_integer(BigInt::from(v)))))
    }

    pub fn get(&self, i: usize) -> BigRational {
        self.entries.get(&i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, i: usize, v: BigRational) {
        if v.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, v);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// `Σ_{i ≥ from} s_i`.
    pub fn tail_sum(&self, from: usize) -> BigRational {
        self.entries.range(from..).map(|(_, v)| v).sum()
    }

    /// Whether `self` and `other` agree at every index except `skip`.
    pub fn agrees_off(&self, other: &Self, skip: usize) -> bool {
        let indices: BTreeSet<usize> = self.support().chain(other.support()).collect();
        indices.into_iter().all(|i| i == skip || self.get(i) == other.get(i))
    }
}

impl fmt::Debug for FiniteSupportSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteSupportSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.entries.keys().next_back().map_or(0, |&i| i + 1);
        let parts: Vec<String> = (0..last.max(1)).map(|i| self.get(i).to_string()).collect();
        write!(f, "({}, 0, ...)", parts.join(", "))
    }
}

impl Serialize for FiniteSupportSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<usize, String> = self.entries.iter().map(|(i, v)| (*i, v.to_string())).collect();
        map.serialize(serializer)
    }
}

/// `s_0 + 1 = Σ_{i>0} s_i`.
pub fn in_y(s: &FiniteSupportSeq) -> bool {
    s.get(0) + BigRational::one() == s.tail_sum(1)
}

/// The two witnesses whose cylinders meet in `{s}`:
/// `w1 = ⟨s_0, s_0 + 1 - Σ_{i>1} s_i, s_2, ...⟩` and
/// `w2 = ⟨Σ_{i>0} s_i - 1, s_1, s_2, ...⟩`.
pub fn recovery_witnesses(s: &FiniteSupportSeq) -> (FiniteSupportSeq, FiniteSupportSeq) {
    let mut w1 = s.clone();
    w1.set(1, s.get(0) + BigRational::one() - s.tail_sum(2));
    let mut w2 = s.clone();
    w2.set(0, s.tail_sum(1) - BigRational::one());
    (w1, w2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingletonRecovery {
    pub s: FiniteSupportSeq,
    pub w1: FiniteSupportSeq,
    pub w2: FiniteSupportSeq,
    pub w1_in_y: bool,
    pub w2_in_y: bool,
    /// `s ∈ c_1{w1}` and `s ∈ c_0{w2}`.
    pub s_in_both: bool,
    /// The only `t` agreeing with `w1` off 1 and with `w2` off 0 is `s`.
    pub unique: bool,
}

impl SingletonRecovery {
    pub fn holds(&self) -> bool {
        self.w1_in_y && self.w2_in_y && self.s_in_both && self.unique
    }
}

/// Checks `{s} = c_1{w1} ∩ c_0{w2}` with both witnesses in `y`.
///
/// Uniqueness is solved coordinatewise: `t_0` is forced by `w1`, `t_1` by
/// `w2`, and every other coordinate by both, which must then agree.
pub fn singleton_recovery_check(s: &FiniteSupportSeq) -> SingletonRecovery {
    let (w1, w2) = recovery_witnesses(s);
    let s_in_both = s.agrees_off(&w1, 1) && s.agrees_off(&w2, 0);
    let indices: BTreeSet<usize> = w1.support().chain(w2.support()).filter(|&i| i >= 2).collect();
    let overlap_consistent = indices.iter().all(|&i| w1.get(i) == w2.get(i));
    let unique = overlap_consistent && {
        let mut t = w1.clone();
        t.set(1, w2.get(1));
        &t == s
    };
    SingletonRecovery { w1_in_y: in_y(&w1), w2_in_y: in_y(&w2), s_in_both, unique, w1, w2, s: s.clone() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeatEmbeddingReport {
    pub alpha: usize,
    pub pad: usize,
    pub field_sample: usize,
    pub sets_checked: usize,
    pub failure: Option<String>,
}

impl NeatEmbeddingReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

type TupleSet = BTreeSet<Vec<usize>>;

/// Checks `ψ(X) = {s ∈ W : s↾α ∈ X}` on finite sample spaces.
///
/// `V = ^α F` and `W = ^(α+pad) F` for a field sample `F` of `field_sample`
/// values, tuples given as indices into `F`. Verifies that `ψ` preserves
/// unions of consecutive sets, complements relative to the sampled units,
/// and `c_i` for `i < α`, and that every `ψ(X)` is fixed by `c_j` for
/// `j ≥ α`.
pub fn neat_embedding_map_check(sets: &[TupleSet], alpha: usize, pad: usize, field_sample: usize) -> NeatEmbeddingReport {
    let v_unit: TupleSet = crate::bao::all_tuples(alpha, field_sample).into_iter().collect();
    let w_unit: TupleSet = crate::bao::all_tuples(alpha + pad, field_sample).into_iter().collect();
    let psi = |x: &TupleSet| -> TupleSet { w_unit.iter().filter(|s| x.contains(&s[..alpha])).cloned().collect() };
    let cyl = |x: &TupleSet, i: usize| -> TupleSet {
        x.iter()
            .flat_map(|t| {
                (0..field_sample).map(move |v| {
                    let mut s = t.clone();
                    s[i] = v;
                    s
                })
            })
            .collect()
    };
    let mut report = NeatEmbeddingReport { alpha, pad, field_sample, sets_checked: 0, failure: None };
    if let Some(bad) = sets.iter().flatten().find(|t| !v_unit.contains(*t)) {
        report.failure = Some(format!("sample tuple {bad:?} is not in the sampled α-space"));
        return report;
    }
    if !psi(&TupleSet::new()).is_empty() {
        report.failure = Some("ψ(∅) is not empty".into());
        return report;
    }
    for (p, x) in sets.iter().enumerate() {
        let px = psi(x);
        let complement: TupleSet = v_unit.difference(x).cloned().collect();
        let w_complement: TupleSet = w_unit.difference(&px).cloned().collect();
        if psi(&complement) != w_complement {
            report.failure = Some(format!("complement fails on set {p}"));
            return report;
        }
        if let Some(y) = sets.get(p + 1) {
            let union: TupleSet = x.union(y).cloned().collect();
            let rhs: TupleSet = px.union(&psi(y)).cloned().collect();
            if psi(&union) != rhs {
                report.failure = Some(format!("union fails on sets {p} and {}", p + 1));
                return report;
            }
        }
        for i in 0..alpha {
            if psi(&cyl(x, i)) != cyl(&px, i) {
                report.failure = Some(format!("c{i} fails on set {p}"));
                return report;
            }
        }
        for j in alpha..alpha + pad {
            if cyl(&px, j) != px {
                report.failure = Some(format!("ψ(X) is not fixed by c{j} on set {p}"));
                return report;
            }
        }
        report.sets_checked += 1;
    }
    report
}
