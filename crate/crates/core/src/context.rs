//! Contexts (finite abelian subalgebras, stored by their atoms) and the finite
//! context poset generated from a handful of seed contexts.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::operator::{require_projector, sum_operators, Operator, StateVector, Tolerances};

/// Largest supported Hilbert-space dimension; atom subsets are `u64` masks.
pub const MAX_DIM: usize = 64;

/// Upper bound on the number of contexts a poset may hold.
pub const MAX_CONTEXTS: usize = 4096;

/// An abelian subalgebra of `B(C^n)` represented by its minimal projections.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    atoms: Vec<Operator>,
    label: String,
}

impl Context {
    /// Validates an atom family (orthogonal, complete, at least two atoms)
    /// and stores it in canonical order.
    pub fn from_atoms(atoms: Vec<Operator>, tol: &Tolerances) -> Result<Self> {
        let Some(first) = atoms.first() else {
            return Err(Error::InvalidContext("no atoms".into()));
        };
        let dim = first.dim();
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        for a in &atoms {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.dim(),
                });
            }
            require_projector(a, tol)?;
            if a.is_zero(tol.tau) {
                return Err(Error::InvalidContext("zero atom".into()));
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                if !a.annihilates(b, tol.tau) {
                    return Err(Error::InvalidContext(
                        "atoms are not pairwise orthogonal".into(),
                    ));
                }
            }
        }
        let total = sum_operators(dim, &atoms);
        if !total.approx_eq(&Operator::identity(dim), tol.tau) {
            return Err(Error::InvalidContext(
                "atoms do not sum to the identity".into(),
            ));
        }
        if atoms.len() < 2 {
            return Err(Error::TrivialAlgebra);
        }
        Ok(Self::from_atoms_unchecked(atoms))
    }

    pub(crate) fn from_atoms_unchecked(mut atoms: Vec<Operator>) -> Self {
        atoms.sort_by_cached_key(canonical_key);
        Self {
            atoms,
            label: String::new(),
        }
    }

    /// The maximal context of an orthonormal basis.
    pub fn from_basis(vectors: &[StateVector], tol: &Tolerances) -> Result<Self> {
        for (i, u) in vectors.iter().enumerate() {
            for (j, v) in vectors.iter().enumerate() {
                let ip = u.dotc(v);
                let want = if i == j { 1.0 } else { 0.0 };
                if (ip.re - want).abs() > tol.tau.sqrt() || ip.im.abs() > tol.tau.sqrt() {
                    return Err(Error::Validation("basis not orthonormal".into()));
                }
            }
        }
        let dim = vectors.first().map_or(0, |v| v.len());
        if vectors.len() != dim {
            return Err(Error::Validation(format!(
                "basis has {} vectors in dimension {dim}",
                vectors.len()
            )));
        }
        Self::from_atoms(vectors.iter().map(Operator::ket_bra).collect(), tol)
    }

    pub fn atoms(&self) -> &[Operator] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.atoms.iter().map(Operator::projector_rank).collect()
    }

    /// `Σ` of the atoms selected by `mask`.
    pub fn atom_sum(&self, mask: u64) -> Operator {
        sum_operators(
            self.dim(),
            self.atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a),
        )
    }

    /// Mask of atoms summing to `p`, if `p` belongs to `P(V)`.
    pub fn projector_mask(&self, p: &Operator, tol: &Tolerances) -> Option<u64> {
        let mut mask = 0u64;
        for (i, a) in self.atoms.iter().enumerate() {
            if a.below(p, tol.tau) {
                mask |= 1 << i;
            }
        }
        self.atom_sum(mask).approx_eq(p, tol.tau).then_some(mask)
    }

    /// Coefficients `tr(A·a)/tr(a)` of `A` along each atom, and the Frobenius
    /// residual of `A − Σ c_a a`.
    pub fn coefficients(&self, a: &Operator) -> (Vec<f64>, f64) {
        let coeffs: Vec<f64> = self
            .atoms
            .iter()
            .map(|atom| (a * atom).trace().re / atom.trace().re)
            .collect();
        let approx = self
            .atoms
            .iter()
            .zip(&coeffs)
            .fold(Operator::zeros(self.dim()), |acc, (atom, &c)| {
                &acc + &atom.scale(c)
            });
        let residual = approx.distance(a);
        (coeffs, residual)
    }

    /// Two contexts are the same algebra when their atoms match one-to-one.
    pub fn same_algebra(&self, other: &Context, tol: &Tolerances) -> bool {
        if self.len() != other.len() || self.dim() != other.dim() {
            return false;
        }
        let mut used = vec![false; other.len()];
        self.atoms.iter().all(|a| {
            let hit = other
                .atoms
                .iter()
                .enumerate()
                .find(|(j, b)| !used[*j] && a.approx_eq(b, tol.tau));
            match hit {
                Some((j, _)) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }

    /// Index of the atom of `self` lying below `atom` of a finer context.
    pub(crate) fn dominating_atom(&self, atom: &Operator, tol: &Tolerances) -> Option<usize> {
        self.atoms.iter().position(|b| atom.below(b, tol.tau))
    }

    /// Coarsening given by a partition of the atoms into blocks.
    fn coarsen(&self, blocks: &[u64]) -> Context {
        Context::from_atoms_unchecked(blocks.iter().map(|&b| self.atom_sum(b)).collect())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_empty() {
            write!(f, "<context with {} atoms>", self.len())
        } else {
            f.write_str(&self.label)
        }
    }
}

// (rank, tr(diag(1..n)·P), entries) with reals rounded to 12 decimals.
fn canonical_key(p: &Operator) -> (usize, i64, Vec<(i64, i64)>) {
    let round = |x: f64| (x * 1e12).round() as i64;
    let n = p.dim();
    let weighted: f64 = (0..n).map(|k| (k + 1) as f64 * p.entry(k, k).re).sum();
    let entries = p
        .matrix()
        .transpose()
        .iter()
        .map(|z| (round(z.re), round(z.im)))
        .collect();
    (p.projector_rank(), round(weighted), entries)
}

/// The common refinement of a commuting projector family.
pub fn context_from_projectors(generators: &[Operator], tol: &Tolerances) -> Result<Context> {
    let Some(first) = generators.first() else {
        return Err(Error::TrivialAlgebra);
    };
    let dim = first.dim();
    for (i, g) in generators.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        require_projector(g, tol)?;
        if generators[..i].iter().any(|h| !g.commutes_with(h, tol.tau)) {
            return Err(Error::NonCommutingGenerators);
        }
    }
    let identity = Operator::identity(dim);
    let mut atoms = vec![identity.clone()];
    for g in generators {
        let complement = &identity - g;
        atoms = atoms
            .iter()
            .flat_map(|a| [a * g, a * &complement])
            .filter(|piece| !piece.is_zero(tol.tau))
            .collect();
    }
    if atoms.len() < 2 {
        return Err(Error::TrivialAlgebra);
    }
    Ok(Context::from_atoms_unchecked(atoms))
}

/// `V1 ⊆ V2`: every atom of `V1` is a sum of atoms of `V2`.
pub fn is_subcontext(v1: &Context, v2: &Context, tol: &Tolerances) -> Result<bool> {
    if v1.dim() != v2.dim() {
        return Err(Error::DimensionMismatch {
            expected: v1.dim(),
            found: v2.dim(),
        });
    }
    Ok(subcontext_unchecked(v1, v2, tol))
}

fn subcontext_unchecked(v1: &Context, v2: &Context, tol: &Tolerances) -> bool {
    v1.len() <= v2.len() && v1.atoms.iter().all(|a| v2.projector_mask(a, tol).is_some())
}

/// Result of intersecting two contexts.
#[derive(Debug, Clone, PartialEq)]
pub enum Intersection {
    Context(Context),
    /// The intersection is `C·1`.
    Trivial,
}

/// `V1 ∩ V2`, computed from the projectors expressible as atom sums in both.
///
/// A common projector is a union of connected components of the overlap
/// graph between the two atom sets, so only component unions are searched.
pub fn intersect_contexts(v1: &Context, v2: &Context, tol: &Tolerances) -> Result<Intersection> {
    if v1.dim() != v2.dim() {
        return Err(Error::DimensionMismatch {
            expected: v1.dim(),
            found: v2.dim(),
        });
    }
    let (k1, k2) = (v1.len(), v2.len());
    let mut parent: Vec<usize> = (0..k1 + k2).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..k1 {
        for j in 0..k2 {
            if !v1.atoms[i].annihilates(&v2.atoms[j], tol.tau) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, k1 + j));
                parent[ri] = rj;
            }
        }
    }
    let mut comps: Vec<(u64, u64)> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; k1 + k2];
    for node in 0..k1 + k2 {
        let r = find(&mut parent, node);
        let idx = *root_of[r].get_or_insert_with(|| {
            comps.push((0, 0));
            comps.len() - 1
        });
        if node < k1 {
            comps[idx].0 |= 1 << node;
        } else {
            comps[idx].1 |= 1 << (node - k1);
        }
    }

    let matches = |m1: u64, m2: u64| v1.atom_sum(m1).approx_eq(&v2.atom_sum(m2), tol.tau);
    let mut blocks: Vec<u64> = Vec::new();
    let mut leftover: Vec<(u64, u64)> = Vec::new();
    for &(m1, m2) in &comps {
        if matches(m1, m2) {
            blocks.push(m1);
        } else {
            leftover.push((m1, m2));
        }
    }
    if !leftover.is_empty() {
        if leftover.len() > 16 {
            return Err(Error::PosetTooLarge {
                limit: MAX_CONTEXTS,
            });
        }
        // Common projectors among unions of unmatched components form a
        // Boolean algebra; its atoms are the intersections of all members
        // containing a given component.
        let common: Vec<u64> = (1u64..1 << leftover.len())
            .filter_map(|sel| {
                let (m1, m2) = leftover
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| sel >> c & 1 == 1)
                    .fold((0, 0), |acc, (_, &(a, b))| (acc.0 | a, acc.1 | b));
                matches(m1, m2).then_some(m1)
            })
            .collect();
        let mut seen = HashSet::new();
        for &(m1, _) in &leftover {
            let block = common
                .iter()
                .filter(|&&c| c & m1 == m1)
                .fold(u64::MAX, |acc, &c| acc & c);
            if seen.insert(block) {
                blocks.push(block);
            }
        }
    }
    if blocks.len() < 2 {
        return Ok(Intersection::Trivial);
    }
    Ok(Intersection::Context(v1.coarsen(&blocks)))
}

/// How seeds are closed into a poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Closure {
    /// Subalgebras generated by subsets of each seed's atoms, plus pairwise
    /// seed intersections and the subalgebras generated by their atoms.
    #[default]
    Generated,
    /// Every nontrivial coarsening of every seed. Closed under intersection.
    Complete,
}

/// Index of a context inside a [`ContextPoset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextId(pub usize);

/// A finite poset of contexts ordered by inclusion.
#[derive(Debug, Clone)]
pub struct ContextPoset {
    contexts: Vec<Context>,
    names: Vec<Vec<String>>,
    tol: Tolerances,
    down: Vec<FixedBitSet>,
    // restriction[sup][sub]: for each atom of `sup`, the dominating atom of `sub`.
    restriction: Vec<Vec<Option<Vec<usize>>>>,
}

impl ContextPoset {
    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.contexts[0].dim()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = ContextId> + '_ {
        (0..self.contexts.len()).map(ContextId)
    }

    pub fn context(&self, id: ContextId) -> &Context {
        &self.contexts[id.0]
    }

    pub fn label(&self, id: ContextId) -> &str {
        self.contexts[id.0].label()
    }

    /// Seed atoms merged into atom `atom` of `id`, e.g. `"34"`.
    pub fn atom_name(&self, id: ContextId, atom: usize) -> &str {
        &self.names[id.0][atom]
    }

    pub fn id_of(&self, label: &str) -> Result<ContextId> {
        self.contexts
            .iter()
            .position(|c| c.label == label)
            .map(ContextId)
            .ok_or_else(|| Error::UnknownContext(label.to_string()))
    }

    /// Locates a context equal (as an algebra) to `v`.
    pub fn find(&self, v: &Context) -> Option<ContextId> {
        self.contexts
            .iter()
            .position(|c| c.same_algebra(v, &self.tol))
            .map(ContextId)
    }

    /// `sub ⊆ sup`.
    pub fn leq(&self, sub: ContextId, sup: ContextId) -> bool {
        self.down[sup.0].contains(sub.0)
    }

    /// `↓V`, as a bit set over context indices.
    pub fn down_bits(&self, id: ContextId) -> &FixedBitSet {
        &self.down[id.0]
    }

    /// All `V′ ⊆ V`, including `V`, in poset order.
    pub fn down_set(&self, id: ContextId) -> Vec<ContextId> {
        self.down[id.0].ones().map(ContextId).collect()
    }

    /// Contexts with no proper supercontext in the poset.
    pub fn maximal(&self) -> Vec<ContextId> {
        self.ids()
            .filter(|&v| self.ids().all(|w| w == v || !self.leq(v, w)))
            .collect()
    }

    /// For `sub ⊆ sup`, the map sending each atom index of `sup` to the
    /// index of the `sub` atom dominating it.
    pub fn restriction_map(&self, sup: ContextId, sub: ContextId) -> Option<&[usize]> {
        self.restriction[sup.0][sub.0].as_deref()
    }

    /// Every comparable pair `(sub, sup)` with `sub ⊆ sup`.
    pub fn inclusions(&self) -> impl Iterator<Item = (ContextId, ContextId)> + '_ {
        self.ids().flat_map(move |sup| {
            self.down[sup.0]
                .ones()
                .map(move |sub| (ContextId(sub), sup))
        })
    }
}

fn partition_count(k: usize, closure: Closure) -> usize {
    match closure {
        // Subsets S with |S| ≤ k − 2 (each distinct) plus the seed itself.
        Closure::Generated => {
            if k >= 63 {
                usize::MAX
            } else {
                (1usize << k) - k - 1
            }
        }
        Closure::Complete => {
            // Bell numbers via the Bell triangle, saturating.
            let mut row = vec![1usize];
            for _ in 1..k {
                let mut next = vec![*row.last().unwrap()];
                for &x in &row {
                    next.push(next.last().unwrap().saturating_add(x));
                }
                row = next;
            }
            row.last().unwrap().saturating_sub(1)
        }
    }
}

fn generated_partitions(k: usize) -> Vec<Vec<u64>> {
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for singles in 1..=full {
        let rest = full & !singles;
        let mut blocks: Vec<u64> = (0..k)
            .filter(|i| singles >> i & 1 == 1)
            .map(|i| 1 << i)
            .collect();
        if rest != 0 {
            blocks.push(rest);
        }
        if blocks.len() < 2 {
            continue;
        }
        blocks.sort_unstable();
        if seen.insert(blocks.clone()) {
            out.push(blocks);
        }
        if singles == full {
            break;
        }
    }
    out
}

fn all_partitions(k: usize) -> Vec<Vec<u64>> {
    fn rec(i: usize, k: usize, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == k {
            if blocks.len() >= 2 {
                out.push(blocks.clone());
            }
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << i;
            rec(i + 1, k, blocks, out);
            blocks[b] &= !(1 << i);
        }
        blocks.push(1 << i);
        rec(i + 1, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, k, &mut Vec::new(), &mut out);
    out
}

fn push_unique(pool: &mut Vec<Context>, candidate: Context, tol: &Tolerances) {
    if !pool.iter().any(|c| c.same_algebra(&candidate, tol)) {
        pool.push(candidate);
    }
}

fn coarsenings(
    seed: &Context,
    closure: Closure,
    pool: &mut Vec<Context>,
    tol: &Tolerances,
) -> Result<()> {
    let k = seed.len();
    if partition_count(k, closure) > MAX_CONTEXTS {
        return Err(Error::PosetTooLarge {
            limit: MAX_CONTEXTS,
        });
    }
    let partitions = match closure {
        Closure::Generated => generated_partitions(k),
        Closure::Complete => all_partitions(k),
    };
    for blocks in partitions {
        push_unique(pool, seed.coarsen(&blocks), tol);
        if pool.len() > MAX_CONTEXTS {
            return Err(Error::PosetTooLarge {
                limit: MAX_CONTEXTS,
            });
        }
    }
    Ok(())
}

// Renders `sub` as a partition of the atoms of `seed`, e.g. `b0[1|2|34]`,
// together with the block name of each atom of `sub` in atom order.
fn partition_label(
    prefix: &str,
    sub: &Context,
    seed: &Context,
    tol: &Tolerances,
) -> (String, Vec<String>) {
    let sep = if seed.len() >= 10 { "," } else { "" };
    let blocks: Vec<Vec<usize>> = sub
        .atoms
        .iter()
        .map(|a| {
            (0..seed.len())
                .filter(|&i| seed.atoms[i].below(a, tol.tau))
                .map(|i| i + 1)
                .collect()
        })
        .collect();
    let names: Vec<String> = blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        })
        .collect();
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| (blocks[i].len(), blocks[i].first().copied()));
    let body: Vec<&str> = order.iter().map(|&i| names[i].as_str()).collect();
    (format!("{prefix}[{}]", body.join("|")), names)
}

/// Closes the seed contexts into a finite poset.
///
/// Seed labels are used as label prefixes (`s<i>` when empty); every context
/// is labelled by the first seed containing it and the induced partition of
/// that seed's atoms.
pub fn build_poset(seeds: &[Context], closure: Closure, tol: &Tolerances) -> Result<ContextPoset> {
    let Some(first) = seeds.first() else {
        return Err(Error::EmptySeed);
    };
    let dim = first.dim();
    if let Some(bad) = seeds.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let mut unique_seeds: Vec<(String, Context)> = Vec::new();
    for (i, s) in seeds.iter().enumerate() {
        if !unique_seeds.iter().any(|(_, u)| u.same_algebra(s, tol)) {
            let prefix = if s.label.is_empty() {
                format!("s{i}")
            } else {
                s.label.clone()
            };
            unique_seeds.push((prefix, s.clone()));
        }
    }

    let mut pool: Vec<Context> = Vec::new();
    for (_, s) in &unique_seeds {
        coarsenings(s, closure, &mut pool, tol)?;
    }
    if closure == Closure::Generated {
        for i in 0..unique_seeds.len() {
            for j in i + 1..unique_seeds.len() {
                if let Intersection::Context(meet) =
                    intersect_contexts(&unique_seeds[i].1, &unique_seeds[j].1, tol)?
                {
                    coarsenings(&meet, closure, &mut pool, tol)?;
                }
            }
        }
    }

    let mut keyed: Vec<(usize, Context, Vec<String>)> = pool
        .into_iter()
        .map(|c| {
            let (seed_idx, (prefix, seed)) = unique_seeds
                .iter()
                .enumerate()
                .find(|(_, (_, s))| subcontext_unchecked(&c, s, tol))
                .expect("every generated context lies below a seed");
            let (label, names) = partition_label(prefix, &c, seed, tol);
            (seed_idx, c.with_label(label), names)
        })
        .collect();
    keyed.sort_by(|(sa, a, _), (sb, b, _)| {
        sa.cmp(sb)
            .then(b.len().cmp(&a.len()))
            .then_with(|| a.label.cmp(&b.label))
    });
    let (contexts, names): (Vec<Context>, Vec<Vec<String>>) =
        keyed.into_iter().map(|(_, c, n)| (c, n)).unzip();
    Ok(assemble(contexts, names, *tol))
}

fn assemble(contexts: Vec<Context>, names: Vec<Vec<String>>, tol: Tolerances) -> ContextPoset {
    let n = contexts.len();
    let mut down = vec![FixedBitSet::with_capacity(n); n];
    let mut restriction = vec![vec![None; n]; n];
    for sup in 0..n {
        for sub in 0..n {
            let map = if sub == sup {
                Some((0..contexts[sup].len()).collect())
            } else if contexts[sub].len() < contexts[sup].len()
                && subcontext_unchecked(&contexts[sub], &contexts[sup], &tol)
            {
                contexts[sup]
                    .atoms
                    .iter()
                    .map(|a| contexts[sub].dominating_atom(a, &tol))
                    .collect::<Option<Vec<usize>>>()
            } else {
                None
            };
            if map.is_some() {
                down[sup].insert(sub);
            }
            restriction[sup][sub] = map;
        }
    }
    ContextPoset {
        contexts,
        names,
        tol,
        down,
        restriction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: usize) -> Operator {
        Operator::basis_projector(4, i)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn maximal() -> Context {
        context_from_projectors(&[p(0), p(1), p(2), p(3)], &tol()).unwrap()
    }

    #[test]
    fn from_projectors_examples() {
        let t = tol();
        let v = maximal();
        assert_eq!(v.len(), 4);
        for (i, a) in v.atoms().iter().enumerate() {
            assert!(a.approx_eq(&p(i), t.tau));
        }
        let v1 = context_from_projectors(&[p(0)], &t).unwrap();
        assert_eq!(v1.len(), 2);
        assert!(v1.atoms()[0].approx_eq(&p(0), t.tau));
        assert!(v1.atoms()[1].approx_eq(&(&Operator::identity(4) - &p(0)), t.tau));
        let v12 = context_from_projectors(&[p(0), p(1)], &t).unwrap();
        assert_eq!(v12.ranks(), vec![1, 1, 2]);
        assert!(v12.atoms()[2].approx_eq(&(&p(2) + &p(3)), t.tau));
    }

    #[test]
    fn from_projectors_errors() {
        let t = tol();
        assert_eq!(
            context_from_projectors(&[Operator::identity(4)], &t),
            Err(Error::TrivialAlgebra)
        );
        let h = Operator::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let z = Operator::basis_projector(2, 0);
        assert_eq!(
            context_from_projectors(&[z, h], &t),
            Err(Error::NonCommutingGenerators)
        );
    }

    #[test]
    fn subcontext_examples() {
        let t = tol();
        let v = maximal();
        let v12 = context_from_projectors(&[p(0), p(1)], &t).unwrap();
        assert!(is_subcontext(&v12, &v, &t).unwrap());
        assert!(is_subcontext(&v, &v, &t).unwrap());
        assert!(!is_subcontext(&v, &v12, &t).unwrap());
        let v1 = context_from_projectors(&[p(0)], &t).unwrap();
        let v2 = context_from_projectors(&[p(1)], &t).unwrap();
        assert!(!is_subcontext(&v1, &v2, &t).unwrap());
    }

    #[test]
    fn intersection_with_itself() {
        let t = tol();
        let v = maximal();
        match intersect_contexts(&v, &v, &t).unwrap() {
            Intersection::Context(c) => assert!(c.same_algebra(&v, &t)),
            Intersection::Trivial => panic!("expected V"),
        }
    }

    #[test]
    fn mutually_unbiased_qubit_bases_meet_trivially() {
        let t = tol();
        let z = context_from_projectors(&[Operator::basis_projector(2, 0)], &t).unwrap();
        let h = Operator::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let x = context_from_projectors(&[h], &t).unwrap();
        assert_eq!(
            intersect_contexts(&z, &x, &t).unwrap(),
            Intersection::Trivial
        );
    }

    #[test]
    fn single_basis_poset_has_eleven_contexts() {
        let t = tol();
        let poset = build_poset(&[maximal().with_label("b0")], Closure::Generated, &t).unwrap();
        assert_eq!(poset.len(), 11);
        assert_eq!(poset.label(ContextId(0)), "b0[1|2|3|4]");
        assert_eq!(poset.down_set(ContextId(0)).len(), 11);
        let v12 = poset.id_of("b0[1|2|34]").unwrap();
        let down: Vec<&str> = poset
            .down_set(v12)
            .iter()
            .map(|&c| poset.label(c))
            .collect();
        assert_eq!(down.len(), 3);
        for l in ["b0[1|2|34]", "b0[1|234]", "b0[2|134]"] {
            assert!(down.contains(&l), "{l} missing from {down:?}");
        }
        let v1 = poset.id_of("b0[1|234]").unwrap();
        assert_eq!(poset.down_set(v1), vec![v1]);
    }

    #[test]
    fn complete_closure_adds_pair_blocks() {
        let poset = build_poset(&[maximal()], Closure::Complete, &tol()).unwrap();
        assert_eq!(poset.len(), 14);
    }

    #[test]
    fn two_atom_seed_is_alone() {
        let t = tol();
        let v1 = context_from_projectors(&[p(0)], &t).unwrap();
        let poset = build_poset(&[v1], Closure::Generated, &t).unwrap();
        assert_eq!(poset.len(), 1);
    }

    #[test]
    fn empty_seed_is_an_error() {
        assert!(matches!(
            build_poset(&[], Closure::Generated, &tol()),
            Err(Error::EmptySeed)
        ));
    }

    #[test]
    fn unknown_label_is_reported() {
        let poset = build_poset(&[maximal()], Closure::Generated, &tol()).unwrap();
        assert!(matches!(poset.id_of("nope"), Err(Error::UnknownContext(_))));
    }

    #[test]
    fn invalid_atom_families_are_rejected() {
        let t = tol();
        assert!(matches!(
            Context::from_atoms(vec![p(0), p(0), p(2), p(3)], &t),
            Err(Error::InvalidContext(_))
        ));
        assert!(matches!(
            Context::from_atoms(vec![p(0), p(1)], &t),
            Err(Error::InvalidContext(_))
        ));
        assert_eq!(
            Context::from_atoms(vec![Operator::identity(4)], &t),
            Err(Error::TrivialAlgebra)
        );
    }
}
