//! Pseudo-states, truth values of propositions, interval values of physical
//! quantities and the search for global sections of the spectral presheaf.

use std::collections::BTreeMap;

use crate::context::{ContextId, ContextPoset};
use crate::daseinisation::{daseinised_atom_values, outer_mask, Mode};
use crate::error::{Error, Result};
use crate::omega::{GlobalElementOfOmega, Sieve};
use crate::operator::{
    require_projector, require_self_adjoint, spectral_decomposition, sum_operators, Operator,
    StateVector, Tolerances,
};
use crate::spectral::{check_character, restrict_character, Character, ClopenSubobject};

/// Default node budget for [`global_sections`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// The daseinisation of `|ψ⟩⟨ψ|` across a poset.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoState {
    pub state: StateVector,
    pub subobject: ClopenSubobject,
    /// Smallest projector of each context with `⟨ψ|·|ψ⟩ = 1`.
    pub per_context_projector: Vec<Operator>,
}

pub(crate) fn require_unit(psi: &StateVector, tol: &Tolerances) -> Result<()> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > tol.tau {
        return Err(Error::NotUnitVector { norm });
    }
    Ok(())
}

pub fn pseudo_state(psi: &StateVector, poset: &ContextPoset) -> Result<PseudoState> {
    let tol = poset.tolerances();
    require_unit(psi, tol)?;
    let ray = Operator::ket_bra(psi);
    let masks: Vec<u64> = poset
        .contexts()
        .iter()
        .map(|v| outer_mask(&ray, v, tol))
        .collect();
    let per_context_projector = poset
        .contexts()
        .iter()
        .zip(&masks)
        .map(|(v, &m)| v.atom_sum(m))
        .collect();
    Ok(PseudoState {
        state: psi.clone(),
        subobject: ClopenSubobject::from_masks(masks),
        per_context_projector,
    })
}

/// `E[A ∈ [lo, hi]]`: the sum of eigenprojectors with eigenvalue in the
/// closed interval, endpoints widened by `tau_eig`.
pub fn proposition_projector(
    a: &Operator,
    interval: (f64, f64),
    tol: &Tolerances,
) -> Result<Operator> {
    let d = spectral_decomposition(a, tol)?;
    let (lo, hi) = interval;
    Ok(sum_operators(
        a.dim(),
        d.eigenvalues()
            .iter()
            .zip(d.projectors())
            .filter(|(&l, _)| l >= lo - tol.tau_eig && l <= hi + tol.tau_eig)
            .map(|(_, p)| p),
    ))
}

fn true_in_state(p: &Operator, psi: &StateVector, tol: &Tolerances) -> bool {
    p.expectation(psi) >= 1.0 - 10.0 * tol.tau
}

/// `ν(P; ψ)_V = {V′ ⊆ V | ⟨ψ|δ^o(P)_{V′}|ψ⟩ = 1}` for every context.
pub fn truth_value(
    p: &Operator,
    psi: &StateVector,
    poset: &ContextPoset,
) -> Result<GlobalElementOfOmega> {
    let tol = poset.tolerances();
    require_projector(p, tol)?;
    require_unit(psi, tol)?;
    let mut holds = fixedbitset::FixedBitSet::with_capacity(poset.len());
    for (i, v) in poset.contexts().iter().enumerate() {
        if true_in_state(&v.atom_sum(outer_mask(p, v, tol)), psi, tol) {
            holds.insert(i);
        }
    }
    let sieves = poset
        .ids()
        .map(|v| {
            let mut members = poset.down_bits(v).clone();
            members.intersect_with(&holds);
            Sieve::from_bits(v, members)
        })
        .collect();
    Ok(GlobalElementOfOmega { sieves })
}

/// A point of `R↔_V`: an order-preserving lower bound `mu` and an
/// order-reversing upper bound `nu` on `↓V`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalPair {
    pub base: ContextId,
    pub atom: usize,
    pub mu: BTreeMap<ContextId, f64>,
    pub nu: BTreeMap<ContextId, f64>,
}

impl IntervalPair {
    /// Checks monotonicity of both bounds and `mu ≤ nu`, with slack `eps`.
    pub fn is_valid(&self, poset: &ContextPoset, eps: f64) -> bool {
        let within = self.mu.iter().all(|(v, &m)| m <= self.nu[v] + eps);
        let monotone = self.mu.keys().all(|&hi| {
            self.mu
                .keys()
                .filter(|&&lo| poset.leq(lo, hi))
                .all(|lo| self.mu[lo] <= self.mu[&hi] + eps && self.nu[lo] + eps >= self.nu[&hi])
        });
        within && monotone
    }
}

/// `λ ↦ (μ_λ, ν_λ)` with `μ_λ(V′) = λ|V′(δ^i(A)_{V′})` and
/// `ν_λ(V′) = λ|V′(δ^o(A)_{V′})`.
pub fn quantity_value_arrow(
    a: &Operator,
    lambda: Character,
    poset: &ContextPoset,
) -> Result<IntervalPair> {
    let tol = poset.tolerances();
    require_self_adjoint(a, tol)?;
    check_character(poset, lambda)?;
    let mut mu = BTreeMap::new();
    let mut nu = BTreeMap::new();
    for sub in poset.down_set(lambda.context) {
        let restricted = restrict_character(poset, lambda, sub)?;
        let ctx = poset.context(sub);
        let inner = daseinised_atom_values(a, ctx, Mode::Inner, tol)?;
        let outer = daseinised_atom_values(a, ctx, Mode::Outer, tol)?;
        mu.insert(sub, inner[restricted.atom]);
        nu.insert(sub, outer[restricted.atom]);
    }
    Ok(IntervalPair {
        base: lambda.context,
        atom: lambda.atom,
        mu,
        nu,
    })
}

/// One character per context, compatible with every restriction map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalSection {
    /// Atom index chosen at each context, indexed by context.
    pub assignment: Vec<usize>,
}

impl GlobalSection {
    pub fn is_consistent(&self, poset: &ContextPoset) -> bool {
        self.assignment.len() == poset.len()
            && poset.inclusions().all(|(sub, sup)| {
                let map = poset.restriction_map(sup, sub).expect("inclusion");
                map[self.assignment[sup.0]] == self.assignment[sub.0]
            })
    }
}

/// Exhaustive backtracking for global sections of the spectral presheaf.
///
/// Contexts are visited by descending atom count; choosing a character at a
/// context immediately forces its restrictions, so clashes between two
/// supercontexts of a shared subcontext prune at once. Every tried
/// (context, character) pair counts as one node against `budget`.
pub fn global_sections(poset: &ContextPoset, budget: u64) -> Result<Vec<GlobalSection>> {
    let mut order: Vec<ContextId> = poset.ids().collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(poset.context(c).len()), c));

    struct Search<'a> {
        poset: &'a ContextPoset,
        order: Vec<ContextId>,
        forced: Vec<Option<usize>>,
        trail: Vec<usize>,
        nodes: u64,
        budget: u64,
        found: Vec<GlobalSection>,
    }

    impl Search<'_> {
        fn run(&mut self, pos: usize) -> Result<()> {
            if pos == self.order.len() {
                let assignment = self.forced.iter().map(|f| f.expect("all forced")).collect();
                self.found.push(GlobalSection { assignment });
                return Ok(());
            }
            let c = self.order[pos];
            let candidates: Vec<usize> = match self.forced[c.0] {
                Some(j) => vec![j],
                None => (0..self.poset.context(c).len()).collect(),
            };
            for choice in candidates {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::SearchBudgetExceeded { limit: self.budget });
                }
                let mark = self.trail.len();
                if self.propagate(c, choice) {
                    self.run(pos + 1)?;
                }
                while self.trail.len() > mark {
                    let undone = self.trail.pop().unwrap();
                    self.forced[undone] = None;
                }
            }
            Ok(())
        }

        fn propagate(&mut self, c: ContextId, choice: usize) -> bool {
            for sub in self.poset.down_bits(c).ones() {
                let j = self
                    .poset
                    .restriction_map(c, ContextId(sub))
                    .expect("inclusion")[choice];
                match self.forced[sub] {
                    Some(existing) if existing != j => return false,
                    Some(_) => {}
                    None => {
                        self.forced[sub] = Some(j);
                        self.trail.push(sub);
                    }
                }
            }
            true
        }
    }

    let mut search = Search {
        poset,
        order,
        forced: vec![None; poset.len()],
        trail: Vec::new(),
        nodes: 0,
        budget,
        found: Vec::new(),
    };
    search.run(0)?;
    let mut found = search.found;
    found.sort();
    Ok(found)
}
