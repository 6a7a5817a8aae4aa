use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::WitnessError;
use crate::bao::FinCofSet;

/// The group stand-in is `ℤ`.
pub type GroupElement = i64;
/// A nonempty finite or cofinite subset of the group.
pub type CofSet = FinCofSet<GroupElement>;

/// Weakly increasing `n`-sequences whose last entry is `k`, in lex order.
pub fn s_sequences(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, len: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == len {
            let mut s = prefix.clone();
            s.push(k);
            out.push(s);
            return;
        }
        let from = prefix.last().copied().unwrap_or(0);
        for v in from..=k {
            prefix.push(v);
            extend(prefix, len, k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(&mut Vec::with_capacity(n), n, k, &mut out);
    }
    out
}

/// Position of `r` in the well-order `0 ≺ -1 ≺ 1 ≺ -2 ≺ 2 ≺ ...`.
pub fn prec_index(r: GroupElement) -> u64 {
    2 * r.unsigned_abs() - u64::from(r < 0)
}

/// Inverse of [`prec_index`].
pub fn prec_element(e: u64) -> GroupElement {
    if e.is_multiple_of(2) {
        (e / 2) as GroupElement
    } else {
        -(e.div_ceil(2) as GroupElement)
    }
}

/// The `≺`-least member, or `None` for the empty set.
pub fn prec_least(x: &CofSet) -> Option<GroupElement> {
    if x.is_finite() {
        x.support().iter().copied().min_by_key(|&r| prec_index(r))
    } else {
        (0..).map(prec_element).find(|r| x.contains(r))
    }
}

/// Inverse of the Cantor pairing `π(x, y) = (x + y)(x + y + 1)/2 + y`.
pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let mut w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    // guard the float estimate against rounding at either end
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}

pub fn cantor_pair(x: u64, y: u64) -> u64 {
    (x + y) * (x + y + 1) / 2 + y
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prescription {
    pub i: Vec<usize>,
    pub set: CofSet,
}

/// `⟨α_0, ..., α_{k-1}, f⟩` together with the block that receives the new element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuilderTask {
    pub alphas: Vec<usize>,
    pub block: usize,
    /// `f` listed over `S(n, k)` in lex order.
    pub f: Vec<Prescription>,
}

impl BuilderTask {
    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// A task assigning the same set to every sequence of `S(n, k)`.
    pub fn constant(n: usize, alphas: Vec<usize>, block: usize, set: CofSet) -> Self {
        let f = s_sequences(n, alphas.len()).into_iter().map(|i| Prescription { i, set: set.clone() }).collect();
        BuilderTask { alphas, block, f }
    }

    pub fn validate(&self, n: usize) -> Result<(), WitnessError> {
        let distinct: BTreeSet<usize> = self.alphas.iter().copied().collect();
        if distinct.len() != self.alphas.len() {
            return Err(WitnessError::Malformed(format!("alphas {:?} are not distinct", self.alphas)));
        }
        if self.block >= n {
            return Err(WitnessError::Malformed(format!("block {} is not below {n}", self.block)));
        }
        let domain: Vec<&Vec<usize>> = self.f.iter().map(|p| &p.i).collect();
        let expected = s_sequences(n, self.k());
        if domain.len() != expected.len() || domain.iter().zip(&expected).any(|(a, b)| *a != b) {
            return Err(WitnessError::Malformed(format!("f is not defined exactly on S({n},{})", self.k())));
        }
        if let Some(p) = self.f.iter().find(|p| p.set.is_empty()) {
            return Err(WitnessError::Malformed(format!("f{:?} is empty", p.i)));
        }
        Ok(())
    }
}

/// Decodes a natural number into a task; every task has a code.
///
/// The block is `code mod n`; the rest is peeled off by repeated unpairing:
/// `k`, each `α_i` as the `x`-th natural not yet used, then one code per member of
/// `S(n, k)`. A code `c` gives a finite set when even and a cofinite one when
/// odd; `c / 2` is a bitmask over the `≺`-enumeration, shifted by one for
/// finite sets so that they are never empty.
pub fn decode_task(code: u64, n: usize) -> BuilderTask {
    let block = (code % n as u64) as usize;
    let (k, mut rest) = cantor_unpair(code / n as u64);
    let mut alphas: Vec<usize> = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let (x, next) = cantor_unpair(rest);
        rest = next;
        let alpha = (0..).filter(|a| !alphas.contains(a)).nth(x as usize).expect("unbounded");
        alphas.push(alpha);
    }
    let f = s_sequences(n, k as usize)
        .into_iter()
        .map(|i| {
            let (c, next) = cantor_unpair(rest);
            rest = next;
            let mask = c / 2;
            let set = if c % 2 == 0 {
                FinCofSet::finite(bits(mask + 1).map(prec_element))
            } else {
                FinCofSet::cofinite(bits(mask).map(prec_element))
            };
            Prescription { i, set }
        })
        .collect();
    BuilderTask { alphas, block, f }
}

fn bits(mask: u64) -> impl Iterator<Item = u64> {
    (0..64).filter(move |b| mask >> b & 1 == 1)
}

/// `ρ(l)`: the task coded by `c` where `l + 1 = 2^x (2c + 1)`. Code `c` recurs
/// at every `x`, and every even step introduces a fresh code.
pub fn scheduled_task(l: usize, n: usize) -> BuilderTask {
    decode_task(schedule_code(l), n)
}

pub fn schedule_code(l: usize) -> u64 {
    let m = l as u64 + 1;
    (m >> m.trailing_zeros()) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedTuple {
    pub r: GroupElement,
    pub tuple: Vec<usize>,
}

/// One builder step: the task, the fresh element `w_l = l`, and the tuples it added.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub l: usize,
    pub task: BuilderTask,
    pub new_element: usize,
    pub added_tuples: Vec<AddedTuple>,
}

/// `W_l = {0, ..., l-1}` with block map `E` and relations `C_r^l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturatedState {
    n: usize,
    blocks: Vec<usize>,
    relations: BTreeMap<GroupElement, BTreeSet<Vec<usize>>>,
    trace: Vec<TraceRecord>,
}

impl SaturatedState {
    pub fn new(n: usize) -> Result<Self, WitnessError> {
        if n < 2 {
            return Err(WitnessError::Malformed(format!("arity {n} is below 2")));
        }
        Ok(SaturatedState { n, blocks: Vec::new(), relations: BTreeMap::new(), trace: Vec::new() })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn element_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, w: usize) -> Option<usize> {
        self.blocks.get(w).copied()
    }

    pub fn relations(&self) -> &BTreeMap<GroupElement, BTreeSet<Vec<usize>>> {
        &self.relations
    }

    pub fn relation(&self, r: GroupElement) -> Option<&BTreeSet<Vec<usize>>> {
        self.relations.get(&r)
    }

    /// Mutable access for corruption tests.
    pub fn relation_mut(&mut self, r: GroupElement) -> &mut BTreeSet<Vec<usize>> {
        self.relations.entry(r).or_default()
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.values().map(BTreeSet::len).sum()
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn distinct_blocks(&self, tuple: &[usize]) -> bool {
        let blocks: BTreeSet<usize> = tuple.iter().filter_map(|&w| self.block(w)).collect();
        blocks.len() == tuple.len() && tuple.iter().all(|&w| w < self.blocks.len())
    }

    /// One step with an explicit task.
    pub fn step_with(&mut self, task: BuilderTask) -> Result<&TraceRecord, WitnessError> {
        task.validate(self.n)?;
        let l = self.blocks.len();
        self.blocks.push(task.block);
        let mut added = BTreeSet::new();
        if task.alphas.iter().all(|&a| a < l) {
            let v = |ix: usize| if ix < task.k() { task.alphas[ix] } else { l };
            for p in &task.f {
                let z: Vec<usize> = p.i.iter().map(|&ix| v(ix)).collect();
                if !self.distinct_blocks(&z) {
                    continue;
                }
                let r = prec_least(&p.set).expect("validated nonempty");
                for s in permutations_of(&z) {
                    if self.relations.entry(r).or_default().insert(s.clone()) {
                        added.insert((prec_index(r), r, s));
                    }
                }
            }
        }
        self.trace.push(TraceRecord {
            l,
            task,
            new_element: l,
            added_tuples: added.into_iter().map(|(_, r, tuple)| AddedTuple { r, tuple }).collect(),
        });
        Ok(self.trace.last().expect("just pushed"))
    }

    /// JSON lines, one record per step.
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|rec| serde_json::to_string(rec).expect("trace records serialize") + "\n")
            .collect()
    }
}

/// Every rearrangement of `z`, in lex order of the index permutation.
fn permutations_of(z: &[usize]) -> Vec<Vec<usize>> {
    fn go(z: &[usize], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == z.len() {
            out.push(cur.clone());
            return;
        }
        for p in 0..z.len() {
            if !used[p] {
                used[p] = true;
                cur.push(z[p]);
                go(z, used, cur, out);
                cur.pop();
                used[p] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(z, &mut vec![false; z.len()], &mut Vec::with_capacity(z.len()), &mut out);
    out
}

/// Runs the scheduled task `ρ(l)` for the next `l`.
pub fn builder_step(mut state: SaturatedState) -> Result<SaturatedState, WitnessError> {
    let task = scheduled_task(state.element_count(), state.arity());
    state.step_with(task)?;
    Ok(state)
}

pub fn run_builder(n: usize, steps: usize) -> Result<SaturatedState, WitnessError> {
    (0..steps).try_fold(SaturatedState::new(n)?, |state, _| builder_step(state))
}

/// Rebuilds a state from a trace, requiring every record to be reproduced exactly.
pub fn replay_trace(n: usize, jsonl: &str) -> Result<SaturatedState, WitnessError> {
    let mut state = SaturatedState::new(n)?;
    for (line_no, line) in jsonl.lines().enumerate().filter(|(_, line)| !line.trim().is_empty()) {
        let rec: TraceRecord = serde_json::from_str(line)
            .map_err(|e| WitnessError::Parse(format!("trace line {}: {e}", line_no + 1)))?;
        if rec.l != state.element_count() {
            return Err(WitnessError::Replay(format!(
                "trace line {} has step {} but the next step is {}",
                line_no + 1,
                rec.l,
                state.element_count()
            )));
        }
        let produced = state.step_with(rec.task.clone())?;
        if *produced != rec {
            return Err(WitnessError::Replay(format!("step {} does not reproduce its recorded tuples", rec.l)));
        }
    }
    Ok(state)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub condition: String,
    pub passed: bool,
    pub instances: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuilderReport {
    pub n: usize,
    pub steps: usize,
    pub tuples: usize,
    pub checks: Vec<ConditionCheck>,
}

impl BuilderReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, condition: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.condition == condition)
    }
}

pub const DISTINCT_BLOCKS: &str = "distinct-blocks";
pub const PERMUTATION_CLOSED: &str = "permutation-closed";
pub const PAIRWISE_DISJOINT: &str = "pairwise-disjoint";
pub const PRESCRIPTIONS: &str = "prescriptions";
pub const EXTENSIONS: &str = "extensions";

/// Checks the structural invariants on the whole state and the saturation
/// prescription of every processed task whose indices all precede its step.
pub fn builder_verify(state: &SaturatedState, processed: &[TraceRecord]) -> BuilderReport {
    let mut checks = Vec::new();
    let all: Vec<(GroupElement, &Vec<usize>)> =
        state.relations.iter().flat_map(|(&r, c)| c.iter().map(move |t| (r, t))).collect();

    let bad_block = all.iter().find(|(_, t)| t.len() != state.n || !state.distinct_blocks(t));
    checks.push(ConditionCheck {
        condition: DISTINCT_BLOCKS.into(),
        passed: bad_block.is_none(),
        instances: all.len(),
        witness: bad_block.map(|(r, t)| format!("C_{r} contains {t:?} outside D_E")),
    });

    let mut missing = None;
    'closure: for (r, t) in &all {
        for s in permutations_of(t) {
            if !state.relations[r].contains(&s) {
                missing = Some(format!("C_{r} contains {t:?} but not {s:?}"));
                break 'closure;
            }
        }
    }
    checks.push(ConditionCheck {
        condition: PERMUTATION_CLOSED.into(),
        passed: missing.is_none(),
        instances: all.len(),
        witness: missing,
    });

    let mut owner: BTreeMap<&Vec<usize>, GroupElement> = BTreeMap::new();
    let mut overlap = None;
    for (r, t) in &all {
        if let Some(p) = owner.insert(t, *r) {
            overlap = Some(format!("{t:?} lies in both C_{p} and C_{r}"));
            break;
        }
    }
    checks.push(ConditionCheck {
        condition: PAIRWISE_DISJOINT.into(),
        passed: overlap.is_none(),
        instances: all.len(),
        witness: overlap,
    });

    let holds = |z: &[usize]| -> Vec<GroupElement> {
        state.relations.iter().filter(|(_, c)| c.contains(z)).map(|(&r, _)| r).collect()
    };
    let mut prescriptions = 0;
    let mut extensions = 0;
    let mut failed_prescription = None;
    let mut failed_extension = None;
    for rec in processed {
        let task = &rec.task;
        let l = rec.new_element;
        if task.alphas.iter().any(|&a| a >= l) {
            continue;
        }
        if state.block(l) != Some(task.block) || task.alphas.contains(&l) {
            failed_prescription.get_or_insert(format!("w_{l} is not a fresh element of block {}", task.block));
            continue;
        }
        let v = |ix: usize| if ix < task.k() { task.alphas[ix] } else { l };
        let identity: Vec<usize> = (0..state.n).collect();
        for p in &task.f {
            let z: Vec<usize> = p.i.iter().map(|&ix| v(ix)).collect();
            if !state.distinct_blocks(&z) {
                continue;
            }
            prescriptions += 1;
            let present = holds(&z);
            let ok = if p.set.is_finite() {
                present.iter().any(|r| p.set.contains(r))
            } else {
                present.iter().all(|r| p.set.contains(r))
            };
            if !ok {
                failed_prescription.get_or_insert(format!(
                    "step {l}: {z:?} satisfies {present:?} against prescription {:?}",
                    p.set
                ));
            }
            if task.k() + 1 == state.n && p.i == identity {
                extensions += 1;
                let r = prec_least(&p.set).expect("validated nonempty");
                if !state.relations.get(&r).is_some_and(|c| c.contains(&z)) {
                    failed_extension.get_or_insert(format!("step {l}: no C_{r} extension through {z:?}"));
                }
            }
        }
    }
    checks.push(ConditionCheck {
        condition: PRESCRIPTIONS.into(),
        passed: failed_prescription.is_none(),
        instances: prescriptions,
        witness: failed_prescription,
    });
    checks.push(ConditionCheck {
        condition: EXTENSIONS.into(),
        passed: failed_extension.is_none(),
        instances: extensions,
        witness: failed_extension,
    });

    BuilderReport { n: state.n, steps: state.element_count(), tuples: all.len(), checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn s_sequence_examples() {
        assert_eq!(s_sequences(2, 3), vec![vec![0, 3], vec![1, 3], vec![2, 3], vec![3, 3]]);
        assert_eq!(s_sequences(4, 0), vec![vec![0; 4]]);
    }

    #[test]
    fn s_sequences_match_brute_force() {
        for n in 2..5 {
            for k in 0..5 {
                let brute: Vec<Vec<usize>> = crate::bao::all_tuples(n, k + 1)
                    .into_iter()
                    .filter(|t| t.windows(2).all(|w| w[0] <= w[1]) && t[n - 1] == k)
                    .collect();
                assert_eq!(s_sequences(n, k), brute, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn prec_order_prefix() {
        let order: Vec<i64> = (0..7).map(prec_element).collect();
        assert_eq!(order, vec![0, -1, 1, -2, 2, -3, 3]);
        assert_eq!(prec_least(&FinCofSet::finite([5, -4, 3])), Some(3));
        assert_eq!(prec_least(&FinCofSet::cofinite([0, -1])), Some(1));
        assert_eq!(prec_least(&FinCofSet::empty()), None);
    }

    #[test]
    fn fresh_state_verifies_vacuously() {
        let state = SaturatedState::new(3).unwrap();
        let report = builder_verify(&state, state.trace());
        assert!(report.passed());
        assert_eq!(report.tuples, 0);
    }

    #[test]
    fn k_zero_task_adds_only_an_element() {
        let mut state = SaturatedState::new(3).unwrap();
        let rec = state.step_with(BuilderTask::constant(3, vec![], 1, FinCofSet::singleton(0))).unwrap().clone();
        assert!(rec.added_tuples.is_empty());
        assert_eq!(state.element_count(), 1);
    }

    fn three_blocks() -> SaturatedState {
        let mut state = SaturatedState::new(3).unwrap();
        for b in 0..2 {
            state.step_with(BuilderTask::constant(3, vec![], b, FinCofSet::singleton(0))).unwrap();
        }
        state
    }

    #[test]
    fn constant_zero_lands_in_c0() {
        let mut state = three_blocks();
        let rec = state.step_with(BuilderTask::constant(3, vec![0, 1], 2, FinCofSet::singleton(0))).unwrap().clone();
        assert_eq!(rec.added_tuples.len(), 6);
        assert!(rec.added_tuples.iter().all(|a| a.r == 0 && a.tuple.contains(&2)));
        let report = builder_verify(&state, state.trace());
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.check(EXTENSIONS).unwrap().instances, 1);
    }

    #[test]
    fn cofinite_prescription_picks_least_allowed() {
        let mut state = three_blocks();
        let rec = state.step_with(BuilderTask::constant(3, vec![1, 0], 2, FinCofSet::cofinite([0, -1]))).unwrap().clone();
        assert!(rec.added_tuples.iter().all(|a| a.r == 1));
        assert!(builder_verify(&state, state.trace()).passed());
    }

    #[test]
    fn late_indices_carry_forward() {
        let mut state = three_blocks();
        let before = state.relations().clone();
        let rec = state.step_with(BuilderTask::constant(3, vec![0, 5], 2, FinCofSet::singleton(0))).unwrap().clone();
        assert!(rec.added_tuples.is_empty());
        assert_eq!(state.relations(), &before);
    }

    #[test]
    fn malformed_tasks_are_rejected() {
        let mut state = three_blocks();
        let dup = BuilderTask::constant(3, vec![0, 0], 2, FinCofSet::singleton(0));
        assert!(matches!(state.step_with(dup), Err(WitnessError::Malformed(_))));
        let block = BuilderTask::constant(3, vec![0], 3, FinCofSet::singleton(0));
        assert!(matches!(state.step_with(block), Err(WitnessError::Malformed(_))));
        let mut short = BuilderTask::constant(3, vec![0], 1, FinCofSet::singleton(0));
        short.f.pop();
        assert!(matches!(state.step_with(short), Err(WitnessError::Malformed(_))));
        let empty = BuilderTask::constant(3, vec![0], 1, FinCofSet::empty());
        assert!(matches!(state.step_with(empty), Err(WitnessError::Malformed(_))));
        assert_eq!(state.element_count(), 2);
    }

    #[test]
    fn fifty_scheduled_steps_verify_after_every_prefix() {
        let mut state = SaturatedState::new(3).unwrap();
        for _ in 0..50 {
            state = builder_step(state).unwrap();
            let report = builder_verify(&state, state.trace());
            assert!(report.passed(), "{report:?}");
        }
        assert!(state.tuple_count() > 0);
    }

    #[test]
    fn new_tuples_contain_the_new_element() {
        let mut state = SaturatedState::new(3).unwrap();
        for _ in 0..80 {
            let before = state.relations().clone();
            state = builder_step(state).unwrap();
            let rec = state.trace().last().unwrap();
            for a in &rec.added_tuples {
                assert!(a.tuple.contains(&rec.new_element));
                assert!(!before.get(&a.r).is_some_and(|c| c.contains(&a.tuple)));
            }
            assert!(before.values().flatten().all(|t| !t.contains(&rec.new_element)));
            for (r, c) in &before {
                assert!(c.is_subset(&state.relations()[r]));
            }
        }
    }

    #[test]
    fn dropped_permutation_breaks_closure() {
        let mut state = three_blocks();
        state.step_with(BuilderTask::constant(3, vec![0, 1], 2, FinCofSet::singleton(0))).unwrap();
        state.relation_mut(0).remove(&vec![2, 1, 0]);
        let report = builder_verify(&state, state.trace());
        let check = report.check(PERMUTATION_CLOSED).unwrap();
        assert!(!check.passed);
        assert!(check.witness.as_ref().unwrap().contains("[2, 1, 0]"));
    }

    #[test]
    fn replay_reproduces_the_trace() {
        let state = run_builder(3, 60).unwrap();
        let jsonl = state.trace_jsonl();
        let replayed = replay_trace(3, &jsonl).unwrap();
        assert_eq!(replayed, state);
        assert_eq!(replayed.trace_jsonl(), jsonl);
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let state = run_builder(3, 100).unwrap();
        let mut lines: Vec<String> = state.trace_jsonl().lines().map(String::from).collect();
        let idx = state.trace().iter().position(|r| !r.added_tuples.is_empty()).unwrap();
        let mut rec = state.trace()[idx].clone();
        rec.added_tuples.pop();
        lines[idx] = serde_json::to_string(&rec).unwrap();
        assert!(matches!(replay_trace(3, &lines.join("\n")), Err(WitnessError::Replay(_))));
    }

    #[test]
    fn every_code_recurs_in_the_schedule() {
        for c in 0..30u64 {
            let hits: Vec<usize> = (0..20_000).filter(|&l| schedule_code(l) == c).collect();
            assert!(hits.len() >= 8, "code {c} hits {hits:?}");
            assert!(hits.iter().any(|&l| l >= 10_000));
        }
    }

    #[test]
    fn two_hundred_steps_are_not_vacuous() {
        let state = run_builder(3, 200).unwrap();
        let report = builder_verify(&state, state.trace());
        assert!(report.passed(), "{report:?}");
        assert!(report.check(PRESCRIPTIONS).unwrap().instances > 0);
        assert!(report.check(EXTENSIONS).unwrap().instances > 0);
    }

    proptest! {
        #[test]
        fn unpair_inverts_pair(x in 0u64..5000, y in 0u64..5000) {
            prop_assert_eq!(cantor_unpair(cantor_pair(x, y)), (x, y));
        }

        #[test]
        fn prec_index_roundtrips(r in -10_000i64..10_000) {
            prop_assert_eq!(prec_element(prec_index(r)), r);
        }

        #[test]
        fn decoded_tasks_are_well_formed(code in 0u64..2000, n in 2usize..5) {
            let task = decode_task(code, n);
            prop_assert!(task.validate(n).is_ok());
        }

        #[test]
        fn random_tasks_preserve_invariants(codes in proptest::collection::vec(0u64..400, 1..40)) {
            let mut state = SaturatedState::new(3).unwrap();
            for code in codes {
                state.step_with(decode_task(code, 3)).unwrap();
            }
            let report = builder_verify(&state, state.trace());
            prop_assert!(report.passed(), "{:?}", report);
        }
    }
}
