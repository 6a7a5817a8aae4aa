use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::GameError;

/// A finite atomic structure seen through its quantifier-free trace: the
/// component each atom sits under, the constants that are atoms, and binary
/// relations between atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteStructure {
    labels: Vec<String>,
    component: Vec<usize>,
    /// The atom each constant denotes, or `None` when the constant is not an atom.
    constants: BTreeMap<String, Option<usize>>,
    relations: Vec<BTreeSet<(usize, usize)>>,
}

impl FiniteStructure {
    /// Atoms `0..` with the given components and labels `a0, a1, ...`.
    pub fn new(component: Vec<usize>) -> Self {
        let labels = (0..component.len()).map(|a| format!("a{a}")).collect();
        FiniteStructure { labels, component, constants: BTreeMap::new(), relations: Vec::new() }
    }

    /// The finite Boolean algebra with `m` atoms and constant `1`, which is an
    /// atom exactly when `m = 1`.
    pub fn boolean_algebra(m: usize) -> Self {
        FiniteStructure::new(vec![0; m]).with_constant("1", (m == 1).then_some(0))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GameError> {
        if labels.len() != self.component.len() {
            return Err(GameError::Malformed(format!("{} labels for {} atoms", labels.len(), self.component.len())));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str, atom: Option<usize>) -> Self {
        self.constants.insert(name.to_string(), atom);
        self
    }

    pub fn with_relation<I: IntoIterator<Item = (usize, usize)>>(mut self, pairs: I) -> Self {
        self.relations.push(pairs.into_iter().collect());
        self
    }

    pub fn atom_count(&self) -> usize {
        self.component.len()
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn component(&self, a: usize) -> usize {
        self.component[a]
    }

    pub fn constants(&self) -> &BTreeMap<String, Option<usize>> {
        &self.constants
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn related(&self, t: usize, a: usize, b: usize) -> bool {
        self.relations[t].contains(&(a, b))
    }

    /// Atoms under component `u`.
    pub fn atoms_under(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.atom_count()).filter(move |&a| self.component[a] == u)
    }

    /// Both structures interpret the same constants and relation symbols.
    pub fn check_signature(&self, other: &Self) -> Result<(), GameError> {
        let mine: Vec<&String> = self.constants.keys().collect();
        let theirs: Vec<&String> = other.constants.keys().collect();
        if mine != theirs || self.relations.len() != other.relations.len() {
            return Err(GameError::Signature(format!(
                "constants {mine:?} with {} relations against {theirs:?} with {}",
                self.relations.len(),
                other.relations.len()
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), GameError> {
        let n = self.atom_count();
        if let Some((name, a)) = self.constants.iter().find(|(_, a)| a.is_some_and(|a| a >= n)) {
            return Err(GameError::Malformed(format!("constant {name} names atom {a:?} of {n}")));
        }
        if let Some(&(a, b)) = self.relations.iter().flatten().find(|(a, b)| *a >= n || *b >= n) {
            return Err(GameError::Malformed(format!("relation pair ({a},{b}) is out of range for {n} atoms")));
        }
        Ok(())
    }
}

/// Everything a quantifier-free formula can say about a tuple of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QfType {
    pub equalities: Vec<bool>,
    pub components: Vec<usize>,
    pub constants: Vec<bool>,
    pub relations: Vec<bool>,
}

pub fn qf_type(s: &FiniteStructure, tuple: &[usize]) -> QfType {
    let pairs = || tuple.iter().flat_map(|&a| tuple.iter().map(move |&b| (a, b)));
    QfType {
        equalities: pairs().map(|(a, b)| a == b).collect(),
        components: tuple.iter().map(|&a| s.component(a)).collect(),
        constants: s.constants.values().flat_map(|c| tuple.iter().map(move |&a| *c == Some(a))).collect(),
        relations: (0..s.relation_count()).flat_map(|t| pairs().map(move |(a, b)| s.related(t, a, b))).collect(),
    }
}

/// Whether adding `(c, d)` to a partial isomorphism keeps it one.
pub(crate) fn extends(a: &FiniteStructure, b: &FiniteStructure, pairs: &[(usize, usize)], c: usize, d: usize) -> bool {
    if a.component(c) != b.component(d) {
        return false;
    }
    if a.constants.values().zip(b.constants.values()).any(|(x, y)| (*x == Some(c)) != (*y == Some(d))) {
        return false;
    }
    for t in 0..a.relation_count() {
        if a.related(t, c, c) != b.related(t, d, d) {
            return false;
        }
    }
    pairs.iter().all(|&(x, y)| {
        (x == c) == (y == d)
            && (0..a.relation_count())
                .all(|t| a.related(t, x, c) == b.related(t, y, d) && a.related(t, c, x) == b.related(t, d, y))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentSize {
    Finite(usize),
    /// Supplies a fresh atom whenever asked.
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub size: ComponentSize,
    /// Components where the two compared products may differ.
    #[serde(default)]
    pub swap: bool,
}

impl Component {
    pub fn finite(name: &str, m: usize) -> Self {
        Component { name: name.to_string(), size: ComponentSize::Finite(m), swap: false }
    }

    pub fn unbounded(name: &str) -> Self {
        Component { name: name.to_string(), size: ComponentSize::Unbounded, swap: false }
    }

    pub fn swapped(mut self) -> Self {
        self.swap = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AtomicPresentation {
    Explicit { structure: FiniteStructure },
    Product { components: Vec<Component> },
}

impl AtomicPresentation {
    pub fn is_finite(&self) -> bool {
        matches!(self, AtomicPresentation::Explicit { .. })
    }

    /// A finite structure that behaves like `self` for games of `rounds`
    /// rounds: unbounded components get `rounds + 1` atoms, so a fresh atom
    /// is always left and no such atom equals its `1_u`.
    pub fn reify(&self, rounds: usize) -> FiniteStructure {
        match self {
            AtomicPresentation::Explicit { structure } => structure.clone(),
            AtomicPresentation::Product { components } => reify_components(components, rounds),
        }
    }
}

fn reify_components(components: &[Component], rounds: usize) -> FiniteStructure {
    let mut component = Vec::new();
    let mut labels = Vec::new();
    let mut s = FiniteStructure::new(Vec::new());
    for (u, c) in components.iter().enumerate() {
        let size = match c.size {
            ComponentSize::Finite(m) => m,
            ComponentSize::Unbounded => rounds + 1,
        };
        s.constants.insert(format!("1_{}", c.name), (size == 1).then_some(component.len()));
        for i in 0..size {
            component.push(u);
            labels.push(format!("{}:{i}", c.name));
        }
    }
    s.component = component;
    s.labels = labels;
    s
}

/// The component-product presentation, made explicit when every component is finite.
pub fn product_model(components: &[Component]) -> Result<AtomicPresentation, GameError> {
    if components.is_empty() {
        return Err(GameError::Malformed("a product needs at least one component".into()));
    }
    if let Some(c) = components.iter().find(|c| c.size == ComponentSize::Finite(0)) {
        return Err(GameError::Malformed(format!("component {} has no atoms", c.name)));
    }
    let names: BTreeSet<&str> = components.iter().map(|c| c.name.as_str()).collect();
    if names.len() != components.len() {
        return Err(GameError::Malformed("component names repeat".into()));
    }
    if components.iter().all(|c| matches!(c.size, ComponentSize::Finite(_))) {
        Ok(AtomicPresentation::Explicit { structure: reify_components(components, 0) })
    } else {
        Ok(AtomicPresentation::Product { components: components.to_vec() })
    }
}
