use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::structure::{extends, qf_type, Component, ComponentSize, FiniteStructure};
use super::GameError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Exists,
    Forall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// A play so far, as the sequence of chosen `(a, b)` pairs.
pub type Play = Vec<(usize, usize)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistsMove {
    pub play: Play,
    pub side: Side,
    pub atom: usize,
    pub response: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForallMove {
    pub play: Play,
    pub side: Side,
    pub atom: usize,
}

/// A winning strategy for one player, as the moves it makes at every
/// position reachable against all opposing moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "player", content = "moves", rename_all = "snake_case")]
pub enum EfCertificate {
    Exists(Vec<ExistsMove>),
    Forall(Vec<ForallMove>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfOutcome {
    pub winner: Player,
    pub rounds: usize,
    pub positions: usize,
    pub certificate: EfCertificate,
}

struct EfSolver<'s> {
    a: &'s FiniteStructure,
    b: &'s FiniteStructure,
    memo: HashMap<(Play, usize), bool>,
    budget: Option<u64>,
}

fn key(play: &[(usize, usize)]) -> Play {
    let set: BTreeSet<(usize, usize)> = play.iter().copied().collect();
    set.into_iter().collect()
}

fn pair(side: Side, atom: usize, response: usize) -> (usize, usize) {
    match side {
        Side::A => (atom, response),
        Side::B => (response, atom),
    }
}

impl<'s> EfSolver<'s> {
    fn challenges(&self) -> impl Iterator<Item = (Side, usize)> {
        let (na, nb) = (self.a.atom_count(), self.b.atom_count());
        (0..na).map(|c| (Side::A, c)).chain((0..nb).map(|d| (Side::B, d)))
    }

    /// Legal answers to a challenge, least first.
    fn responses(&self, play: &[(usize, usize)], side: Side, atom: usize) -> Vec<usize> {
        let other = match side {
            Side::A => self.b.atom_count(),
            Side::B => self.a.atom_count(),
        };
        (0..other)
            .filter(|&r| {
                let (c, d) = pair(side, atom, r);
                extends(self.a, self.b, play, c, d)
            })
            .collect()
    }

    /// Whether ∃ survives `rounds` more rounds from a partial isomorphism.
    fn wins(&mut self, play: &[(usize, usize)], rounds: usize) -> Result<bool, GameError> {
        if rounds == 0 {
            return Ok(true);
        }
        let k = (key(play), rounds);
        if let Some(&v) = self.memo.get(&k) {
            return Ok(v);
        }
        if let Some(budget) = self.budget {
            if self.memo.len() as u64 >= budget {
                return Err(GameError::Budget(budget));
            }
        }
        let mut result = true;
        let challenges: Vec<(Side, usize)> = self.challenges().collect();
        for (side, atom) in challenges {
            if self.best_response(play, rounds, side, atom)?.is_none() {
                result = false;
                break;
            }
        }
        self.memo.insert(k, result);
        Ok(result)
    }

    fn best_response(
        &mut self,
        play: &[(usize, usize)],
        rounds: usize,
        side: Side,
        atom: usize,
    ) -> Result<Option<usize>, GameError> {
        let mut next = play.to_vec();
        for r in self.responses(play, side, atom) {
            next.push(pair(side, atom, r));
            let ok = self.wins(&next, rounds - 1)?;
            next.pop();
            if ok {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    fn exists_strategy(&mut self, play: &mut Play, rounds: usize, out: &mut Vec<ExistsMove>) -> Result<(), GameError> {
        if rounds == 0 {
            return Ok(());
        }
        let challenges: Vec<(Side, usize)> = self.challenges().collect();
        for (side, atom) in challenges {
            let response = self.best_response(play, rounds, side, atom)?.expect("∃ wins this position");
            out.push(ExistsMove { play: play.clone(), side, atom, response });
            play.push(pair(side, atom, response));
            self.exists_strategy(play, rounds - 1, out)?;
            play.pop();
        }
        Ok(())
    }

    fn forall_strategy(&mut self, play: &mut Play, rounds: usize, out: &mut Vec<ForallMove>) -> Result<(), GameError> {
        let challenges: Vec<(Side, usize)> = self.challenges().collect();
        for (side, atom) in challenges {
            if self.best_response(play, rounds, side, atom)?.is_none() {
                out.push(ForallMove { play: play.clone(), side, atom });
                for r in self.responses(play, side, atom) {
                    play.push(pair(side, atom, r));
                    self.forall_strategy(play, rounds - 1, out)?;
                    play.pop();
                }
                return Ok(());
            }
        }
        unreachable!("∀ wins this position")
    }
}

/// Solves the `rounds`-round atom game between two finite structures.
pub fn ef_decide(
    a: &FiniteStructure,
    b: &FiniteStructure,
    rounds: usize,
    budget: Option<u64>,
) -> Result<EfOutcome, GameError> {
    a.check_signature(b)?;
    a.validate()?;
    b.validate()?;
    let mut solver = EfSolver { a, b, memo: HashMap::new(), budget };
    let exists = solver.wins(&[], rounds)?;
    let certificate = if exists {
        let mut moves = Vec::new();
        solver.exists_strategy(&mut Vec::new(), rounds, &mut moves)?;
        EfCertificate::Exists(moves)
    } else {
        let mut moves = Vec::new();
        solver.forall_strategy(&mut Vec::new(), rounds, &mut moves)?;
        EfCertificate::Forall(moves)
    };
    Ok(EfOutcome {
        winner: if exists { Player::Exists } else { Player::Forall },
        rounds,
        positions: solver.memo.len(),
        certificate,
    })
}

/// Replays a certificate against every opposing move; `Ok` means the
/// certified player wins all plays of `rounds` rounds.
pub fn verify_ef_certificate(
    a: &FiniteStructure,
    b: &FiniteStructure,
    rounds: usize,
    certificate: &EfCertificate,
) -> Result<(), String> {
    let legal = |play: &[(usize, usize)], c: usize, d: usize| qf_type(a, &extended(play, c, d).0) == qf_type(b, &extended(play, c, d).1);
    match certificate {
        EfCertificate::Exists(moves) => {
            let table: HashMap<(&Play, Side, usize), usize> =
                moves.iter().map(|m| ((&m.play, m.side, m.atom), m.response)).collect();
            let mut stack: Vec<(Play, usize)> = vec![(Vec::new(), rounds)];
            while let Some((play, left)) = stack.pop() {
                if left == 0 {
                    continue;
                }
                let challenges = (0..a.atom_count()).map(|c| (Side::A, c)).chain((0..b.atom_count()).map(|d| (Side::B, d)));
                for (side, atom) in challenges {
                    let Some(&response) = table.get(&(&play, side, atom)) else {
                        return Err(format!("no answer to {side:?}{atom} after {play:?}"));
                    };
                    let (c, d) = pair(side, atom, response);
                    if !legal(&play, c, d) {
                        return Err(format!("answer {response} to {side:?}{atom} after {play:?} breaks the partial isomorphism"));
                    }
                    let mut next = play.clone();
                    next.push((c, d));
                    stack.push((next, left - 1));
                }
            }
            Ok(())
        }
        EfCertificate::Forall(moves) => {
            let table: HashMap<&Play, (Side, usize)> = moves.iter().map(|m| (&m.play, (m.side, m.atom))).collect();
            let mut stack: Vec<(Play, usize)> = vec![(Vec::new(), rounds)];
            while let Some((play, left)) = stack.pop() {
                if left == 0 {
                    return Err(format!("∃ survives the play {play:?}"));
                }
                let Some(&(side, atom)) = table.get(&play) else {
                    return Err(format!("no challenge after {play:?}"));
                };
                let other = match side {
                    Side::A => b.atom_count(),
                    Side::B => a.atom_count(),
                };
                for r in 0..other {
                    let (c, d) = pair(side, atom, r);
                    if legal(&play, c, d) {
                        let mut next = play.clone();
                        next.push((c, d));
                        stack.push((next, left - 1));
                    }
                }
            }
            Ok(())
        }
    }
}

fn extended(play: &[(usize, usize)], c: usize, d: usize) -> (Vec<usize>, Vec<usize>) {
    play.iter().copied().chain([(c, d)]).unzip()
}

/// Pairs of equal-length atom tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfSystem {
    pub pairs: BTreeSet<(Vec<usize>, Vec<usize>)>,
}

impl BfSystem {
    /// Every prefix of every play followed by an `∃` strategy.
    pub fn from_certificate(certificate: &EfCertificate) -> Result<Self, GameError> {
        let EfCertificate::Exists(moves) = certificate else {
            return Err(GameError::Malformed("only an ∃ strategy yields a back-and-forth system".into()));
        };
        let mut pairs = BTreeSet::from([(Vec::new(), Vec::new())]);
        for m in moves {
            let (c, d) = pair(m.side, m.atom, m.response);
            pairs.insert(extended(&m.play, c, d));
        }
        Ok(BfSystem { pairs })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BfClause {
    QfEquivalence,
    Nonempty,
    Forth,
    Back,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BfFailure {
    pub clause: BfClause,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// The atom left without an extension.
    pub atom: Option<usize>,
}

/// Checks the back-and-forth conditions. With `depth`, extensions are
/// required only of pairs shorter than `depth`.
pub fn bf_system_check(
    system: &BfSystem,
    a: &FiniteStructure,
    b: &FiniteStructure,
    depth: Option<usize>,
) -> Result<(), BfFailure> {
    if system.pairs.is_empty() {
        return Err(BfFailure { clause: BfClause::Nonempty, a: vec![], b: vec![], atom: None });
    }
    for (x, y) in &system.pairs {
        if x.len() != y.len() || qf_type(a, x) != qf_type(b, y) {
            return Err(BfFailure { clause: BfClause::QfEquivalence, a: x.clone(), b: y.clone(), atom: None });
        }
    }
    // Each pair of prefixes maps to the last moves that extend it.
    type Extensions<'s> = BTreeMap<(&'s [usize], &'s [usize]), Vec<(usize, usize)>>;
    let mut by_prefix = Extensions::new();
    for (x, y) in &system.pairs {
        if let (Some((&c, xs)), Some((&d, ys))) = (x.split_last(), y.split_last()) {
            by_prefix.entry((xs, ys)).or_default().push((c, d));
        }
    }
    for (x, y) in &system.pairs {
        if depth.is_some_and(|k| x.len() >= k) {
            continue;
        }
        let ext = by_prefix.get(&(x.as_slice(), y.as_slice())).map(Vec::as_slice).unwrap_or(&[]);
        if let Some(c) = (0..a.atom_count()).find(|&c| !ext.iter().any(|e| e.0 == c)) {
            return Err(BfFailure { clause: BfClause::Forth, a: x.clone(), b: y.clone(), atom: Some(c) });
        }
        if let Some(d) = (0..b.atom_count()).find(|&d| !ext.iter().any(|e| e.1 == d)) {
            return Err(BfFailure { clause: BfClause::Back, a: x.clone(), b: y.clone(), atom: Some(d) });
        }
    }
    Ok(())
}

/// Existence of a depth-`rounds` system by a greatest-fixed-point
/// computation over partial isomorphisms, independent of the game search.
///
/// `W_0` is every partial isomorphism with at most `rounds` pairs, and
/// `W_{m+1}` keeps the maps in `W_m` with at most `rounds - m - 1` pairs that
/// extend within `W_m` forth and back. The answer is whether `∅ ∈ W_rounds`.
pub fn fixed_point_system_exists(a: &FiniteStructure, b: &FiniteStructure, rounds: usize) -> bool {
    type Map = BTreeMap<usize, usize>;
    let is_partial_iso = |m: &Map| {
        let (xs, ys): (Vec<usize>, Vec<usize>) = m.iter().map(|(x, y)| (*x, *y)).unzip();
        qf_type(a, &xs) == qf_type(b, &ys)
    };
    let mut all: Vec<Map> = vec![Map::new()];
    let mut layer = vec![Map::new()];
    for _ in 0..rounds {
        let mut next = BTreeSet::new();
        for m in &layer {
            for c in (0..a.atom_count()).filter(|c| !m.contains_key(c)) {
                for d in (0..b.atom_count()).filter(|d| !m.values().any(|v| v == d)) {
                    let mut e = m.clone();
                    e.insert(c, d);
                    if is_partial_iso(&e) {
                        next.insert(e);
                    }
                }
            }
        }
        layer = next.into_iter().collect();
        all.extend(layer.iter().cloned());
    }
    let mut w: HashSet<Map> = all.into_iter().collect();
    for m in 0..rounds {
        let bound = rounds - m - 1;
        let survives = |p: &Map, w: &HashSet<Map>| {
            let ext = |c: usize, d: usize| {
                if let Some(&v) = p.get(&c) {
                    return v == d;
                }
                if p.values().any(|&v| v == d) {
                    return false;
                }
                let mut e = p.clone();
                e.insert(c, d);
                w.contains(&e)
            };
            (0..a.atom_count()).all(|c| (0..b.atom_count()).any(|d| ext(c, d)))
                && (0..b.atom_count()).all(|d| (0..a.atom_count()).any(|c| ext(c, d)))
        };
        w = w.iter().filter(|p| p.len() <= bound && survives(p, &w)).cloned().collect();
    }
    w.contains(&Map::new())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub rounds: usize,
    pub game_winner: Player,
    pub system_exists: bool,
    pub agree: bool,
}

/// Compares the game solver with the fixed-point computation.
pub fn ef_system_equivalence_test(
    a: &FiniteStructure,
    b: &FiniteStructure,
    rounds: usize,
) -> Result<EquivalenceReport, GameError> {
    let game_winner = ef_decide(a, b, rounds, None)?.winner;
    let system_exists = fixed_point_system_exists(a, b, rounds);
    Ok(EquivalenceReport { rounds, game_winner, system_exists, agree: (game_winner == Player::Exists) == system_exists })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreshAtomReport {
    pub rounds: usize,
    pub predicted: Player,
    /// Rounds in which the prediction is tested: `rounds` for `∃`, `j + 1` for `∀`.
    pub tested_rounds: usize,
    pub solver_winner: Player,
    /// For an `∃` prediction, whether the fresh-atom strategy itself wins every play.
    pub strategy_wins: Option<bool>,
    pub passed: bool,
}

/// Tests the fresh-atom argument on two products that agree off their swap
/// components.
///
/// `∃` is predicted to win when every swap component has equal sizes on
/// both sides or at least `rounds` atoms on both. Otherwise some swap
/// component has `j` atoms on one side and more on the other; a single atom
/// equals its `1_u`, so `∀` is predicted to win within `j + 1` rounds, and
/// within `1` when `j = 1`.
pub fn fresh_atom_strategy_verify(
    a_spec: &[Component],
    b_spec: &[Component],
    rounds: usize,
) -> Result<FreshAtomReport, GameError> {
    if a_spec.len() != b_spec.len()
        || a_spec.iter().zip(b_spec).any(|(x, y)| x.name != y.name || x.swap != y.swap || (!x.swap && x.size != y.size))
    {
        return Err(GameError::Malformed("products must agree off their swap components".into()));
    }
    let size = |c: &Component| match c.size {
        ComponentSize::Finite(m) => Some(m),
        ComponentSize::Unbounded => None,
    };
    let mut obstruction: Option<usize> = None;
    for (x, y) in a_spec.iter().zip(b_spec).filter(|(x, _)| x.swap) {
        let (sx, sy) = (size(x), size(y));
        if sx == sy {
            continue;
        }
        let j = match (sx, sy) {
            (Some(p), Some(q)) => p.min(q),
            (Some(p), None) | (None, Some(p)) => p,
            (None, None) => unreachable!(),
        };
        let needed = if j == 1 { 1 } else { j + 1 };
        if j < rounds || j == 1 {
            obstruction = Some(obstruction.map_or(needed, |o| o.min(needed)));
        }
    }
    let (predicted, tested_rounds) = match obstruction {
        Some(r) if rounds > 0 => (Player::Forall, r),
        _ => (Player::Exists, rounds),
    };
    let a = super::product_model(a_spec)?.reify(tested_rounds);
    let b = super::product_model(b_spec)?.reify(tested_rounds);
    let solver_winner = ef_decide(&a, &b, tested_rounds, None)?.winner;
    let strategy_wins = (predicted == Player::Exists).then(|| fresh_strategy_wins(&a, &b, tested_rounds));
    Ok(FreshAtomReport {
        rounds,
        predicted,
        tested_rounds,
        solver_winner,
        strategy_wins,
        passed: solver_winner == predicted && strategy_wins != Some(false),
    })
}

/// Plays `∃`'s fixed strategy against every `∀` sequence: an atom already in
/// play gets its partner, an atom of a component the sides share gets its
/// namesake, and any other atom gets the least unused atom of the same
/// component.
fn fresh_strategy_wins(a: &FiniteStructure, b: &FiniteStructure, rounds: usize) -> bool {
    fn answer(from: &FiniteStructure, to: &FiniteStructure, atom: usize, played: &[(usize, usize)]) -> Option<usize> {
        if let Some(&(_, r)) = played.iter().find(|(x, _)| *x == atom) {
            return Some(r);
        }
        let u = from.component(atom);
        let same = to.atoms_under(u).any(|y| to.label(y) == from.label(atom))
            && from.atoms_under(u).count() == to.atoms_under(u).count();
        if same {
            return to.atoms_under(u).find(|&y| to.label(y) == from.label(atom));
        }
        to.atoms_under(u).find(|y| !played.iter().any(|(_, r)| r == y))
    }
    fn go(a: &FiniteStructure, b: &FiniteStructure, play: &mut Play, rounds: usize) -> bool {
        if rounds == 0 {
            return true;
        }
        for c in 0..a.atom_count() {
            let Some(d) = answer(a, b, c, play) else { return false };
            if !extends(a, b, play, c, d) {
                return false;
            }
            play.push((c, d));
            let ok = go(a, b, play, rounds - 1);
            play.pop();
            if !ok {
                return false;
            }
        }
        for d in 0..b.atom_count() {
            let flipped: Play = play.iter().map(|&(x, y)| (y, x)).collect();
            let Some(c) = answer(b, a, d, &flipped) else { return false };
            if !extends(a, b, play, c, d) {
                return false;
            }
            play.push((c, d));
            let ok = go(a, b, play, rounds - 1);
            play.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    go(a, b, &mut Vec::new(), rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{product_model, Component};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_structure(rng: &mut ChaCha8Rng, n: usize) -> FiniteStructure {
        let comps: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let rel: Vec<(usize, usize)> =
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|_| rng.gen_bool(0.2)).collect();
        FiniteStructure::new(comps).with_relation(rel)
    }

    /// An isomorphic copy with a few random edits, so both winners occur.
    fn perturbed(rng: &mut ChaCha8Rng, s: &FiniteStructure, edits: usize) -> FiniteStructure {
        let n = s.atom_count();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut comps = vec![0; n];
        for a in 0..n {
            comps[perm[a]] = s.component(a);
        }
        let mut rel: BTreeSet<(usize, usize)> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| s.related(0, x, y))
            .map(|(x, y)| (perm[x], perm[y]))
            .collect();
        for _ in 0..edits {
            let p = (rng.gen_range(0..n), rng.gen_range(0..n));
            if !rel.remove(&p) {
                rel.insert(p);
            }
        }
        FiniteStructure::new(comps).with_relation(rel)
    }

    #[test]
    fn identical_structures_favour_exists() {
        let s = FiniteStructure::new(vec![0, 1, 1, 0]).with_relation([(0, 1), (2, 3)]);
        for k in 0..4 {
            let out = ef_decide(&s, &s, k, None).unwrap();
            assert_eq!(out.winner, Player::Exists);
            verify_ef_certificate(&s, &s, k, &out.certificate).unwrap();
        }
    }

    #[test]
    fn one_atom_against_two() {
        let (a, b) = (FiniteStructure::boolean_algebra(1), FiniteStructure::boolean_algebra(2));
        assert_eq!(ef_decide(&a, &b, 0, None).unwrap().winner, Player::Exists);
        let out = ef_decide(&a, &b, 1, None).unwrap();
        assert_eq!(out.winner, Player::Forall);
        verify_ef_certificate(&a, &b, 1, &out.certificate).unwrap();
        let report = ef_system_equivalence_test(&a, &b, 1).unwrap();
        assert!(report.agree && !report.system_exists);
    }

    #[test]
    fn forged_certificates_fail_replay() {
        let (a, b) = (FiniteStructure::boolean_algebra(2), FiniteStructure::boolean_algebra(3));
        let out = ef_decide(&a, &b, 3, None).unwrap();
        assert_eq!(out.winner, Player::Forall);
        let EfCertificate::Forall(mut moves) = out.certificate else { unreachable!() };
        assert!(verify_ef_certificate(&a, &b, 2, &EfCertificate::Forall(moves.clone())).is_err());
        moves.pop();
        assert!(verify_ef_certificate(&a, &b, 3, &EfCertificate::Forall(moves)).is_err());
    }

    #[test]
    fn system_from_identity_strategy() {
        let s = FiniteStructure::new(vec![0, 1, 0]).with_relation([(0, 1)]);
        let out = ef_decide(&s, &s, 2, None).unwrap();
        let system = BfSystem::from_certificate(&out.certificate).unwrap();
        assert!(system.pairs.contains(&(vec![], vec![])));
        bf_system_check(&system, &s, &s, Some(2)).unwrap();
    }

    #[test]
    fn full_isomorphism_system_passes_unbounded() {
        let s = FiniteStructure::new(vec![0, 1]).with_relation([(0, 1)]);
        let mut pairs = BTreeSet::new();
        for t in crate::bao::all_tuples(2, 2).into_iter().chain(crate::bao::all_tuples(1, 2)) {
            pairs.insert((t.clone(), t));
        }
        pairs.insert((vec![], vec![]));
        // closed under extension up to length 2, so require extensions only below that
        bf_system_check(&BfSystem { pairs }, &s, &s, Some(2)).unwrap();
    }

    #[test]
    fn dropped_extension_is_reported() {
        let s = FiniteStructure::new(vec![0, 0, 1]);
        let out = ef_decide(&s, &s, 1, None).unwrap();
        let mut system = BfSystem::from_certificate(&out.certificate).unwrap();
        let forth_1 = system.pairs.iter().find(|(x, _)| x == &vec![1]).unwrap().clone();
        system.pairs.remove(&forth_1);
        let failure = bf_system_check(&system, &s, &s, Some(1)).unwrap_err();
        assert_eq!(failure.clause, BfClause::Forth);
        assert_eq!(failure.atom, Some(1));
        assert!(bf_system_check(&BfSystem::default(), &s, &s, None).unwrap_err().clause == BfClause::Nonempty);
    }

    #[test]
    fn mismatched_types_are_reported() {
        let a = FiniteStructure::new(vec![0, 1]);
        let system = BfSystem { pairs: BTreeSet::from([(vec![0], vec![1])]) };
        assert_eq!(bf_system_check(&system, &a, &a, Some(0)).unwrap_err().clause, BfClause::QfEquivalence);
    }

    #[test]
    fn random_certificates_give_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut exists = 0;
        for _ in 0..20 {
            let a = random_structure(&mut rng, 8);
            let edits = rng.gen_range(0..2);
            let b = perturbed(&mut rng, &a, edits);
            let out = ef_decide(&a, &b, 2, None).unwrap();
            verify_ef_certificate(&a, &b, 2, &out.certificate).unwrap();
            if out.winner == Player::Exists {
                exists += 1;
                let system = BfSystem::from_certificate(&out.certificate).unwrap();
                bf_system_check(&system, &a, &b, Some(2)).unwrap();
            }
        }
        assert!(exists > 0);
    }

    #[test]
    fn winners_mirror_under_swapping_sides() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = random_structure(&mut rng, 6);
            let edits = rng.gen_range(0..3);
            let b = perturbed(&mut rng, &a, edits);
            for k in 0..3 {
                assert_eq!(ef_decide(&a, &b, k, None).unwrap().winner, ef_decide(&b, &a, k, None).unwrap().winner);
            }
        }
    }

    #[test]
    fn fresh_atom_examples() {
        let t = |a: ComponentSize, b: ComponentSize, k: usize| {
            let shared = Component::finite("u", 2);
            let sa = vec![shared.clone(), Component { name: "t".into(), size: a, swap: true }];
            let sb = vec![shared, Component { name: "t".into(), size: b, swap: true }];
            fresh_atom_strategy_verify(&sa, &sb, k).unwrap()
        };
        let r = t(ComponentSize::Unbounded, ComponentSize::Unbounded, 4);
        assert!(r.passed && r.predicted == Player::Exists && r.strategy_wins == Some(true));
        let r = t(ComponentSize::Finite(2), ComponentSize::Finite(5), 3);
        assert!(r.passed && r.predicted == Player::Forall && r.tested_rounds == 3);
        let r = t(ComponentSize::Finite(1), ComponentSize::Finite(1), 1);
        assert!(r.passed && r.predicted == Player::Exists);
        let r = t(ComponentSize::Finite(3), ComponentSize::Unbounded, 3);
        assert!(r.passed && r.predicted == Player::Exists);
    }

    #[test]
    fn fresh_atom_matches_solver_on_small_sizes() {
        let sizes = [ComponentSize::Finite(1), ComponentSize::Finite(2), ComponentSize::Finite(3), ComponentSize::Unbounded];
        for k in 0..=4 {
            for &x in &sizes {
                for &y in &sizes {
                    let sa = vec![Component::finite("u", 1), Component { name: "t".into(), size: x, swap: true }];
                    let sb = vec![Component::finite("u", 1), Component { name: "t".into(), size: y, swap: true }];
                    let r = fresh_atom_strategy_verify(&sa, &sb, k).unwrap();
                    assert!(r.passed, "{x:?} vs {y:?} at {k}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn product_models_feed_the_solver() {
        let a = product_model(&[Component::finite("u", 2)]).unwrap().reify(0);
        assert_eq!(ef_decide(&a, &a, 2, None).unwrap().winner, Player::Exists);
    }

    #[test]
    fn budget_is_enforced() {
        let a = FiniteStructure::boolean_algebra(6);
        let b = FiniteStructure::boolean_algebra(7);
        assert!(matches!(ef_decide(&a, &b, 7, Some(10)), Err(GameError::Budget(10))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn solver_agrees_with_fixed_point(seed in any::<u64>(), k in 0usize..3, edits in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_structure(&mut rng, 5);
            let b = perturbed(&mut rng, &a, edits);
            let report = ef_system_equivalence_test(&a, &b, k).unwrap();
            prop_assert!(report.agree, "{:?}", report);
        }
    }
}
