use serde::Serialize;

use super::{Graph, GraphError, RaAtom, RaAtomStructure, IDENTITY};
use crate::bao::AtomSet;

/// `(a, b, c)` with `a, b, c ∈ P` and `c ∈ a ; b`, if any.
pub fn monochromatic_composition_witness(alpha: &RaAtomStructure, p: &AtomSet) -> Option<[usize; 3]> {
    for a in p.iter() {
        for b in p.iter() {
            if let Some(c) = p.iter().find(|&c| alpha.consistent(a, b, c)) {
                return Some([a, b, c]);
            }
        }
    }
    None
}

/// Nonzero and either below `1'` or inside a single colour class.
pub fn is_monochromatic(alpha: &RaAtomStructure, p: &AtomSet) -> bool {
    if p.is_empty() {
        return false;
    }
    if p.iter().all(|a| a == IDENTITY) {
        return true;
    }
    let first = alpha.colour(p.first().expect("nonempty"));
    first.is_some() && p.iter().all(|a| alpha.colour(a) == first)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamseyReport {
    pub m: usize,
    #[serde(rename = "N")]
    pub n_clique: usize,
    pub colours: usize,
    /// Elements of the truncated `J`, by label.
    pub partition: Vec<String>,
    pub covering_holds: bool,
    pub all_monochromatic: bool,
    pub subsets_checked: usize,
    /// A consistent triple inside some `P`, if one was found.
    pub violation: Option<RamseyViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamseyViolation {
    pub residue: usize,
    pub colour: usize,
    pub y: Vec<usize>,
    pub triple: Vec<String>,
}

impl RamseyReport {
    pub fn passed(&self) -> bool {
        self.covering_holds && self.all_monochromatic && self.violation.is_none()
    }
}

/// The kernel facts on `α(interval(m, N))` with `colours` colours.
///
/// `J` consists of `1'` and `[Nℕ + r, s] = {(l, s) : l < m, l ≡ r mod N}`.
/// Checks that every atom lies under exactly one member of `J`, that every
/// member is monochromatic, and that `(P ; P) · P = 0` for every
/// `P = [Y, s]` with `Y` a residue-class subset of size `1..=max_subset`.
pub fn ramsey_kernel_check(
    m: usize,
    n_clique: usize,
    colours: usize,
    max_subset: usize,
) -> Result<RamseyReport, GraphError> {
    if colours < 2 {
        return Err(GraphError::Precondition(format!("need at least 2 colours, got {colours}")));
    }
    if n_clique < colours * (colours - 1) / 2 {
        return Err(GraphError::Precondition(format!(
            "N = {n_clique} is below n(n-1)/2 = {}",
            colours * (colours - 1) / 2
        )));
    }
    let alpha = RaAtomStructure::build_alpha(Graph::interval(m, n_clique), colours)?;
    let k = alpha.atom_count();
    let class = |r: usize| (0..m).filter(move |l| l % n_clique == r);
    let mut members = vec![(None, AtomSet::singleton(k, IDENTITY))];
    let mut labels = vec!["1'".to_string()];
    for r in 0..n_clique {
        for s in 0..colours {
            let p = AtomSet::from_atoms(
                k,
                class(r).map(|l| alpha.index(RaAtom::Coloured { vertex: l, colour: s })),
            );
            members.push((Some((r, s)), p));
            labels.push(format!("[{n_clique}N+{r},{s}]"));
        }
    }
    let covering_holds =
        (0..k).all(|a| members.iter().filter(|(_, p)| p.contains(a)).count() == 1);
    let all_monochromatic = members.iter().all(|(_, p)| p.is_empty() || is_monochromatic(&alpha, p));

    let mut subsets_checked = 0;
    let mut violation = None;
    'outer: for r in 0..n_clique {
        let ys: Vec<usize> = class(r).collect();
        for s in 0..colours {
            for y in subsets_up_to(&ys, max_subset) {
                subsets_checked += 1;
                let p = AtomSet::from_atoms(
                    k,
                    y.iter().map(|&l| alpha.index(RaAtom::Coloured { vertex: l, colour: s })),
                );
                let pp = alpha.compose(&p, &p);
                if pp.intersects(&p) {
                    let triple = monochromatic_composition_witness(&alpha, &p)
                        .expect("a nonempty meet has a consistent triple");
                    violation = Some(RamseyViolation {
                        residue: r,
                        colour: s,
                        y,
                        triple: triple.iter().map(|&a| alpha.label(a)).collect(),
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(RamseyReport {
        m,
        n_clique,
        colours,
        partition: labels,
        covering_holds,
        all_monochromatic,
        subsets_checked,
        violation,
    })
}

/// Nonempty subsets of `items` of size at most `max`, smallest first.
fn subsets_up_to(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max.min(items.len()) {
        let mut next = Vec::new();
        for t in &layer {
            let start = t.last().map_or(0, |&last| items.iter().position(|&x| x == last).unwrap() + 1);
            for &x in &items[start..] {
                let mut u = t.clone();
                u.push(x);
                next.push(u);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
