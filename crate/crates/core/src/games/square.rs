use std::collections::HashMap;

use serde::Serialize;

use super::{GameError, Player};
use crate::graph_atoms::{RaAtomStructure, IDENTITY};

/// What the square game needs from an atom structure.
pub trait AtomTable {
    fn atom_count(&self) -> usize;
    fn identity(&self) -> usize;
    /// `c ≤ a ; b`.
    fn consistent(&self, a: usize, b: usize, c: usize) -> bool;
    fn label(&self, a: usize) -> String {
        a.to_string()
    }
}

impl AtomTable for RaAtomStructure {
    fn atom_count(&self) -> usize {
        RaAtomStructure::atom_count(self)
    }

    fn identity(&self) -> usize {
        IDENTITY
    }

    fn consistent(&self, a: usize, b: usize, c: usize) -> bool {
        RaAtomStructure::consistent(self, a, b, c)
    }

    fn label(&self, a: usize) -> String {
        RaAtomStructure::label(self, a)
    }
}

/// An atom table given by its consistent triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitTable {
    labels: Vec<String>,
    identity: usize,
    consistent: Vec<bool>,
}

impl ExplicitTable {
    pub fn from_table<T: AtomTable>(t: &T) -> Self {
        let k = t.atom_count();
        let mut consistent = Vec::with_capacity(k * k * k);
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    consistent.push(t.consistent(a, b, c));
                }
            }
        }
        ExplicitTable { labels: (0..k).map(|a| t.label(a)).collect(), identity: t.identity(), consistent }
    }

    /// The one-atom structure `{1'}`.
    pub fn identity_only() -> Self {
        ExplicitTable { labels: vec!["1'".into()], identity: 0, consistent: vec![true] }
    }

    /// Renames atom `a` to `perm[a]`.
    pub fn relabelled(&self, perm: &[usize]) -> Self {
        let k = self.labels.len();
        let mut consistent = vec![false; k * k * k];
        let mut labels = vec![String::new(); k];
        for a in 0..k {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..k {
                for c in 0..k {
                    consistent[(perm[a] * k + perm[b]) * k + perm[c]] = self.consistent[(a * k + b) * k + c];
                }
            }
        }
        ExplicitTable { labels, identity: perm[self.identity], consistent }
    }
}

impl AtomTable for ExplicitTable {
    fn atom_count(&self) -> usize {
        self.labels.len()
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn consistent(&self, a: usize, b: usize, c: usize) -> bool {
        let k = self.labels.len();
        self.consistent[(a * k + b) * k + c]
    }

    fn label(&self, a: usize) -> String {
        self.labels[a].clone()
    }
}

/// A complete network: `labels[i * size + j]` is the atom on edge `(i, j)`.
/// Atoms are self-converse, so the matrix is symmetric with `1'` on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Network {
    size: usize,
    labels: Vec<usize>,
}

impl Network {
    fn pair(identity: usize, a: usize) -> Self {
        Network { size: 2, labels: vec![identity, a, a, identity] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.labels[i * self.size + j]
    }

    /// Adds a node whose edges to the existing nodes are `row`.
    fn with_node(&self, row: &[usize], identity: usize) -> Network {
        let n = self.size + 1;
        let mut labels = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                labels[i * n + j] = match (i == self.size, j == self.size) {
                    (false, false) => self.get(i, j),
                    (true, true) => identity,
                    (true, false) => row[j],
                    (false, true) => row[i],
                };
            }
        }
        Network { size: n, labels }
    }

    /// The least relabelling of the nodes, compared label by label. Game
    /// values depend only on this.
    fn canonical(&self) -> Network {
        let n = self.size;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = self.labels.clone();
        let mut labels = vec![0; n * n];
        let mut c = vec![0; n];
        // Heap's algorithm.
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                for a in 0..n {
                    for b in 0..n {
                        labels[a * n + b] = self.get(perm[a], perm[b]);
                    }
                }
                if labels < best {
                    best.copy_from_slice(&labels);
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        Network { size: n, labels: best }
    }

    pub fn consistent<T: AtomTable>(&self, t: &T) -> bool {
        let n = self.size;
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|l| t.consistent(self.get(i, j), self.get(j, l), self.get(i, l))))
        })
    }
}

/// `∀` asks for a node `z` with `(x, z)` labelled `a` and `(z, y)` labelled `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Demand {
    pub x: usize,
    pub y: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareStep {
    pub network: Network,
    pub rounds: usize,
    pub demand: Demand,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareOutcome {
    pub winner: Player,
    pub clique_bound: usize,
    pub rounds: usize,
    pub positions: usize,
    /// When `∀` wins: the opening atom on edge `(0, 1)`.
    pub opening: Option<usize>,
    /// When `∀` wins: the demand made at every position reachable against
    /// all `∃` answers.
    pub forall_strategy: Vec<SquareStep>,
}

fn demands<T: AtomTable>(t: &T, net: &Network) -> Vec<Demand> {
    let k = t.atom_count();
    let mut out = Vec::new();
    for x in 0..net.size() {
        for y in 0..net.size() {
            let c = net.get(x, y);
            for a in 0..k {
                for b in 0..k {
                    if t.consistent(a, b, c) {
                        out.push(Demand { x, y, a, b });
                    }
                }
            }
        }
    }
    out
}

/// The networks `∃` may move to: unchanged when an existing node already
/// meets the demand, and every consistent one-node extension while there is room.
fn answers<T: AtomTable>(t: &T, net: &Network, d: Demand, clique_bound: usize) -> Vec<Network> {
    let mut out = Vec::new();
    for_each_answer(t, net, d, clique_bound, |next| {
        out.push(next);
        Ok::<_, GameError>(false)
    })
    .expect("collecting answers cannot fail");
    out
}

/// Feeds the answers of [`answers`] to `f` in the same order, stopping as
/// soon as `f` returns `true`; returns whether it stopped.
fn for_each_answer<T: AtomTable, E>(
    t: &T,
    net: &Network,
    d: Demand,
    clique_bound: usize,
    mut f: impl FnMut(Network) -> Result<bool, E>,
) -> Result<bool, E> {
    if (0..net.size()).any(|z| net.get(d.x, z) == d.a && net.get(z, d.y) == d.b) && f(net.clone())? {
        return Ok(true);
    }
    if net.size() >= clique_bound || (d.x == d.y && d.a != d.b) {
        return Ok(false);
    }
    let k = t.atom_count();
    let fixed = |i: usize| if i == d.x { Some(d.a) } else if i == d.y { Some(d.b) } else { None };
    let mut row: Vec<usize> = (0..net.size()).map(|i| fixed(i).unwrap_or(0)).collect();
    // Odometer over the free entries of the new row.
    loop {
        let candidate = net.with_node(&row, t.identity());
        if new_node_consistent(t, &candidate) && f(candidate)? {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == row.len() {
                return Ok(false);
            }
            if fixed(i).is_none() && row[i] + 1 < k {
                row[i] += 1;
                break;
            }
            if fixed(i).is_none() {
                row[i] = 0;
            }
            i += 1;
        }
    }
}

/// Triangles through the newest node; the rest were consistent already.
fn new_node_consistent<T: AtomTable>(t: &T, net: &Network) -> bool {
    let n = net.size();
    let z = n - 1;
    (0..n).all(|i| {
        (0..n).all(|j| {
            t.consistent(net.get(i, j), net.get(j, z), net.get(i, z))
                && t.consistent(net.get(i, z), net.get(z, j), net.get(i, j))
                && t.consistent(net.get(z, i), net.get(i, j), net.get(z, j))
        })
    })
}

struct SquareSolver<'t, T: AtomTable> {
    t: &'t T,
    clique_bound: usize,
    memo: HashMap<(Network, usize), bool>,
    budget: Option<u64>,
}

impl<T: AtomTable> SquareSolver<'_, T> {
    fn exists_wins(&mut self, net: &Network, rounds: usize) -> Result<bool, GameError> {
        if rounds == 0 {
            return Ok(true);
        }
        let key = (net.canonical(), rounds);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        if let Some(budget) = self.budget {
            if self.memo.len() as u64 >= budget {
                return Err(GameError::Budget(budget));
            }
        }
        let mut result = true;
        // `(y, x, b, a)` has the same witnesses as `(x, y, a, b)`.
        for d in demands(self.t, net).into_iter().filter(|d| (d.x, d.a) <= (d.y, d.b)) {
            if self.winning_demand(net, rounds, d)? {
                result = false;
                break;
            }
        }
        self.memo.insert(key, result);
        Ok(result)
    }

    /// Whether `d` defeats every answer.
    fn winning_demand(&mut self, net: &Network, rounds: usize, d: Demand) -> Result<bool, GameError> {
        let (t, bound) = (self.t, self.clique_bound);
        let answered = for_each_answer(t, net, d, bound, |next| self.exists_wins(&next, rounds - 1))?;
        Ok(!answered)
    }

    fn forall_strategy(&mut self, net: &Network, rounds: usize, out: &mut Vec<SquareStep>) -> Result<(), GameError> {
        for d in demands(self.t, net) {
            if self.winning_demand(net, rounds, d)? {
                out.push(SquareStep { network: net.clone(), rounds, demand: d });
                for next in answers(self.t, net, d, self.clique_bound) {
                    self.forall_strategy(&next, rounds - 1, out)?;
                }
                return Ok(());
            }
        }
        unreachable!("∀ wins this position")
    }
}

fn check_square_args<T: AtomTable>(t: &T, clique_bound: usize) -> Result<(), GameError> {
    if clique_bound < 3 {
        return Err(GameError::Malformed(format!("clique bound {clique_bound} is below 3")));
    }
    if t.atom_count() == 0 {
        return Err(GameError::Malformed("no atoms".into()));
    }
    Ok(())
}

/// Solves the clique-witness game: `∀` labels edge `(0, 1)`, then for
/// `rounds` rounds demands a witness `z` for `a ; b` over an edge `(x, y)`
/// whose label lies below `a ; b`. `∃` answers with an existing node or,
/// below `clique_bound` nodes, a new node keeping every triangle consistent.
pub fn square_game<T: AtomTable>(
    t: &T,
    clique_bound: usize,
    rounds: usize,
    budget: Option<u64>,
) -> Result<SquareOutcome, GameError> {
    check_square_args(t, clique_bound)?;
    let mut solver = SquareSolver { t, clique_bound, memo: HashMap::new(), budget };
    let mut opening = None;
    for a in 0..t.atom_count() {
        let net = Network::pair(t.identity(), a);
        if !net.consistent(t) || !solver.exists_wins(&net, rounds)? {
            opening = Some(a);
            break;
        }
    }
    let mut forall_strategy = Vec::new();
    if let Some(a) = opening {
        let net = Network::pair(t.identity(), a);
        if net.consistent(t) {
            solver.forall_strategy(&net, rounds, &mut forall_strategy)?;
        }
    }
    Ok(SquareOutcome {
        winner: if opening.is_some() { Player::Forall } else { Player::Exists },
        clique_bound,
        rounds,
        positions: solver.memo.len(),
        opening,
        forall_strategy,
    })
}

/// Plain tree search over the same rules; an independent comparator for
/// [`square_game`]. Positions are cached by their exact network, with no
/// relabelling, no demand symmetry and whole-network consistency checks.
pub fn square_game_brute_force<T: AtomTable>(t: &T, clique_bound: usize, rounds: usize) -> Result<Player, GameError> {
    check_square_args(t, clique_bound)?;
    type Seen = HashMap<(Network, usize), bool>;
    fn exists_wins<T: AtomTable>(t: &T, net: &Network, bound: usize, rounds: usize, seen: &mut Seen) -> bool {
        if rounds == 0 {
            return true;
        }
        if let Some(&v) = seen.get(&(net.clone(), rounds)) {
            return v;
        }
        let k = t.atom_count();
        let n = net.size();
        let mut result = true;
        'demands: for x in 0..n {
            for y in 0..n {
                for a in 0..k {
                    for b in 0..k {
                        if !t.consistent(a, b, net.get(x, y)) {
                            continue;
                        }
                        let existing = (0..n).any(|z| net.get(x, z) == a && net.get(z, y) == b);
                        if existing && exists_wins(t, net, bound, rounds - 1, seen) {
                            continue;
                        }
                        let free: Vec<usize> = (0..n).filter(|&i| i != x && i != y).collect();
                        let extends = n < bound
                            && (x != y || a == b)
                            && (0..k.pow(free.len() as u32)).any(|code| {
                                let mut row = vec![0; n];
                                row[x] = a;
                                row[y] = b;
                                let mut c = code;
                                for &i in &free {
                                    row[i] = c % k;
                                    c /= k;
                                }
                                let next = net.with_node(&row, t.identity());
                                next.consistent(t) && exists_wins(t, &next, bound, rounds - 1, seen)
                            });
                        if !extends {
                            result = false;
                            break 'demands;
                        }
                    }
                }
            }
        }
        seen.insert((net.clone(), rounds), result);
        result
    }
    let mut seen = Seen::new();
    let exists = (0..t.atom_count()).all(|a| {
        let net = Network::pair(t.identity(), a);
        net.consistent(t) && exists_wins(t, &net, clique_bound, rounds, &mut seen)
    });
    Ok(if exists { Player::Exists } else { Player::Forall })
}

/// Replays a `∀` strategy against every `∃` answer.
pub fn verify_square_certificate<T: AtomTable>(t: &T, outcome: &SquareOutcome) -> Result<(), String> {
    let Some(a) = outcome.opening else {
        return Err("no ∀ strategy to replay".into());
    };
    let start = Network::pair(t.identity(), a);
    if !start.consistent(t) {
        return Ok(());
    }
    let table: HashMap<(&Network, usize), Demand> =
        outcome.forall_strategy.iter().map(|s| ((&s.network, s.rounds), s.demand)).collect();
    let mut stack = vec![(start, outcome.rounds)];
    while let Some((net, rounds)) = stack.pop() {
        if rounds == 0 {
            return Err(format!("∃ survives with {} nodes", net.size()));
        }
        let Some(&d) = table.get(&(&net, rounds)) else {
            return Err(format!("no demand for a {}-node network with {rounds} rounds left", net.size()));
        };
        if !t.consistent(d.a, d.b, net.get(d.x, d.y)) {
            return Err(format!("illegal demand {d:?}"));
        }
        for next in answers(t, &net, d, outcome.clique_bound) {
            stack.push((next, rounds - 1));
        }
    }
    Ok(())
}
