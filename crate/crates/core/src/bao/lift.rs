use std::collections::{BTreeMap, BTreeSet};

use super::representation::Tuple;
use super::{
    all_tuples, verify_complete_representation, AtomSet, BaoError, ComplexAlgebra, Operator,
    SetAlgebraRepresentation,
};

/// `c_0 c_1 .. c_{n-1} {a}` is the unit for every atom `a`.
pub fn is_simple(alg: &ComplexAlgebra) -> Result<bool, BaoError> {
    for a in 0..alg.atom_count() {
        let mut x = alg.atom(a);
        for i in 0..alg.dimension() {
            x = alg.apply(Operator::Cyl(i), &x)?;
        }
        if !x.is_full() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Atoms of the subalgebra generated by `{x : Δx ≠ n}`, as blocks of atoms.
///
/// An element has `Δx ≠ n` iff it is fixed by some `c_i`, and the `c_i`-fixed
/// elements are the unions of `≡_i` classes; so the generators are these
/// classes together with the diagonal constants. The result is the coarsest
/// partition refining them whose blocks every operator maps to unions of blocks.
pub fn generated_partition(alg: &ComplexAlgebra) -> Result<Vec<AtomSet>, BaoError> {
    let k = alg.atom_count();
    let n = alg.dimension();
    let s = alg.structure();
    let mut generators: Vec<AtomSet> = Vec::new();
    for i in 0..n {
        let rel = s
            .cylindrification(i)
            .ok_or_else(|| BaoError::MissingRelation("cylindrifications".into()))?;
        generators.extend((0..k).map(|a| rel.row(a).clone()));
    }
    if alg.signature().has_diagonals {
        for i in 0..n {
            for j in 0..n {
                generators.push(alg.diagonal(i, j)?);
            }
        }
    }
    let mut block_of = vec![0usize; k];
    let mut count = 1;
    loop {
        let blocks = blocks_of(&block_of, count, k);
        let mut splitters = generators.clone();
        for op in alg.signature().unary_operators() {
            for b in &blocks {
                splitters.push(alg.apply(op, b)?);
            }
        }
        let mut keys: BTreeMap<(usize, Vec<bool>), usize> = BTreeMap::new();
        let mut next = vec![0usize; k];
        for a in 0..k {
            let key = (block_of[a], splitters.iter().map(|x| x.contains(a)).collect());
            let fresh = keys.len();
            next[a] = *keys.entry(key).or_insert(fresh);
        }
        if keys.len() == count {
            return Ok(blocks);
        }
        count = keys.len();
        block_of = next;
    }
}

fn blocks_of(block_of: &[usize], count: usize, k: usize) -> Vec<AtomSet> {
    let mut blocks = vec![AtomSet::empty(k); count];
    for (a, &b) in block_of.iter().enumerate() {
        blocks[b].insert(a);
    }
    blocks
}

/// Builds a complete representation of a finite simple polyadic equality
/// algebra from one of its diagonal-free reduct.
///
/// Base copies `U_i` are the coordinate projections of the unit. Each
/// `u ∈ U_i` is sent to the least tuple `s_i(u)` of `h(δ)` with `i`-th entry
/// `u`, where `δ` is the meet of all diagonals. On the disjoint union `U` of
/// the copies, `t_i(k, u) = s_k(u)_i` and `g(d) = {s ∈ ⁿU : (t_i(s_i))_i ∈ h(d)}`.
/// The result is `g` pushed through the quotient of `U` by `∼01`, the relation
/// `{(a_0, a_1) : ā ∈ g(d01)}`.
pub fn diagonal_quotient_lift(
    rep: &SetAlgebraRepresentation,
    alg: &ComplexAlgebra,
) -> Result<SetAlgebraRepresentation, BaoError> {
    let n = alg.dimension();
    let k = alg.atom_count();
    if n < 3 {
        return Err(BaoError::Precondition(format!("dimension {n} is below 3")));
    }
    let sig = *alg.signature();
    if !(sig.has_cylindrifications && sig.has_diagonals) {
        return Err(BaoError::Precondition(
            "the lift needs cylindrifications and diagonals".into(),
        ));
    }
    let reduct = ComplexAlgebra::new(alg.structure().clone(), sig.without_diagonals()?)?;
    let report = verify_complete_representation(rep, &reduct);
    if !report.passed {
        return Err(BaoError::Precondition(format!(
            "input is not a complete representation of the diagonal-free reduct ({})",
            report.failed_check.unwrap_or_default()
        )));
    }
    if !is_simple(alg)? {
        return Err(BaoError::Unsupported("the algebra is not simple".into()));
    }
    if generated_partition(alg)?.iter().any(|b| b.len() > 1) {
        return Err(BaoError::Precondition(
            "the algebra is not generated by its elements of dimension set below n".into(),
        ));
    }

    let projections: Vec<BTreeSet<usize>> =
        (0..n).map(|i| rep.unit.iter().map(|s| s[i]).collect()).collect();
    let product_size: usize = projections.iter().map(BTreeSet::len).product();
    if product_size != rep.unit.len() {
        return Err(BaoError::Precondition("the unit is not a product of its projections".into()));
    }

    let mut delta = alg.one();
    for i in 0..n {
        for j in 0..n {
            delta = delta.intersection(&alg.diagonal(i, j)?);
        }
    }
    let h_delta = rep.image(&delta);
    // s_i(u), indexed by the points (i, u) of the disjoint union
    let mut points: Vec<(usize, usize)> = Vec::new();
    let mut section: Vec<Tuple> = Vec::new();
    for (i, proj) in projections.iter().enumerate() {
        for &u in proj {
            let s = h_delta.iter().find(|s| s[i] == u).ok_or_else(|| {
                BaoError::Precondition(format!(
                    "no tuple of h(δ) has entry {u} at coordinate {i}"
                ))
            })?;
            points.push((i, u));
            section.push(s.clone());
        }
    }
    let m = points.len();
    let t = |i: usize, p: usize| section[p][i];

    let mut owner: BTreeMap<&Tuple, usize> = BTreeMap::new();
    for (a, img) in rep.atom_images.iter().enumerate() {
        for s in img {
            owner.insert(s, a);
        }
    }
    // g on atoms, as lists of tuples over U
    let mut g: Vec<Vec<Tuple>> = vec![Vec::new(); k];
    for s in all_tuples(n, m) {
        let image: Tuple = (0..n).map(|i| t(i, s[i])).collect();
        let a = owner[&image];
        g[a].push(s);
    }

    let d01 = alg.diagonal(0, 1)?;
    let mut related = vec![vec![false; m]; m];
    for a in d01.iter() {
        for s in &g[a] {
            related[s[0]][s[1]] = true;
        }
    }
    for p in 0..m {
        if !related[p][p] {
            return Err(BaoError::Precondition(format!("∼01 is not reflexive at point {p}")));
        }
        for q in 0..m {
            if related[p][q] != related[q][p] {
                return Err(BaoError::Precondition(format!("∼01 is not symmetric at ({p},{q})")));
            }
            if related[p][q] && (0..m).any(|r| related[q][r] && !related[p][r]) {
                return Err(BaoError::Precondition(format!("∼01 is not transitive at ({p},{q})")));
            }
        }
    }
    let mut class = vec![usize::MAX; m];
    let mut classes = 0;
    for p in 0..m {
        if class[p] == usize::MAX {
            for q in p..m {
                if related[p][q] {
                    class[q] = classes;
                }
            }
            classes += 1;
        }
    }
    let quotient = |s: &Tuple| -> Tuple { s.iter().map(|&p| class[p]).collect() };
    let atom_images: Vec<BTreeSet<Tuple>> =
        g.iter().map(|tuples| tuples.iter().map(quotient).collect()).collect();
    Ok(SetAlgebraRepresentation {
        base: classes,
        dimension: n,
        unit: all_tuples(n, classes).into_iter().collect(),
        atom_images,
    })
}
