//! Outer and inner daseinisation of projections and self-adjoint operators.
//!
//! For a context `V` with atoms `a₁..a_k`:
//!
//! * `δ^o(P)_V` is the smallest element of `P(V)` above `P`: the sum of the
//!   atoms with `aP ≠ 0`.
//! * `δ^i(P)_V` is the largest element of `P(V)` below `P`: the sum of the
//!   atoms with `a ≤ P`.
//!
//! Self-adjoint operators are approximated in the spectral order by
//! daseinising their spectral families on the eigenvalue grid; because the
//! spectrum is finite the Stieltjes integrals are finite sums over the jumps.

use crate::context::{Context, ContextPoset};
use crate::error::Result;
use crate::operator::{
    require_projector, require_self_adjoint, spectral_decomposition, Operator, Tolerances,
};
use crate::spectral::ClopenSubobject;

/// Approximation direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Outer,
    Inner,
}

pub(crate) fn outer_mask(p: &Operator, v: &Context, tol: &Tolerances) -> u64 {
    v.atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.annihilates(p, tol.tau))
        .fold(0, |m, (i, _)| m | 1 << i)
}

pub(crate) fn inner_mask(p: &Operator, v: &Context, tol: &Tolerances) -> u64 {
    v.atoms()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.below(p, tol.tau))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// `δ^o(P)_V = ⋀{R ∈ P(V) | R ≥ P}`.
pub fn outer_daseinise_projection(p: &Operator, v: &Context, tol: &Tolerances) -> Result<Operator> {
    require_projector(p, tol)?;
    Ok(v.atom_sum(outer_mask(p, v, tol)))
}

/// `δ^i(P)_V = ⋁{R ∈ P(V) | R ≤ P}`.
pub fn inner_daseinise_projection(p: &Operator, v: &Context, tol: &Tolerances) -> Result<Operator> {
    require_projector(p, tol)?;
    Ok(v.atom_sum(inner_mask(p, v, tol)))
}

/// A projector together with its daseinisation across a poset.
#[derive(Debug, Clone, PartialEq)]
pub struct DaseinisedProposition {
    pub source: Operator,
    pub subobject: ClopenSubobject,
    /// `δ^o(P)_V`, indexed by context.
    pub per_context_projector: Vec<Operator>,
}

/// `δ(P) = (𝔖(δ^o(P)_V))_V`: the clopen subobject representing `P`.
pub fn daseinise_proposition(p: &Operator, poset: &ContextPoset) -> Result<DaseinisedProposition> {
    let tol = poset.tolerances();
    require_projector(p, tol)?;
    let masks: Vec<u64> = poset
        .contexts()
        .iter()
        .map(|v| outer_mask(p, v, tol))
        .collect();
    let per_context_projector = poset
        .contexts()
        .iter()
        .zip(&masks)
        .map(|(v, &m)| v.atom_sum(m))
        .collect();
    Ok(DaseinisedProposition {
        source: p.clone(),
        subobject: ClopenSubobject::from_masks(masks),
        per_context_projector,
    })
}

/// Per-atom eigenvalues of the daseinised operator in context `v`.
///
/// Outer: the family `r ↦ δ^i(E_r)_V`. Inner: `r ↦ δ^o(E_r)_V`. On the
/// finite grid both families are constant on `[rᵢ, rᵢ₊₁)`, so the meet over
/// `s > rᵢ` in the inner case is already the value at `rᵢ`.
pub(crate) fn daseinised_atom_values(
    a: &Operator,
    v: &Context,
    mode: Mode,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let decomposition = spectral_decomposition(a, tol)?;
    let family = decomposition.family();
    let mut values = vec![f64::NAN; v.len()];
    let mut covered = 0u64;
    for (&r, e) in family.thresholds().iter().zip(family.cumulative()) {
        let mask = match mode {
            Mode::Outer => inner_mask(e, v, tol),
            Mode::Inner => outer_mask(e, v, tol),
        };
        for (i, value) in values.iter_mut().enumerate() {
            if (mask & !covered) >> i & 1 == 1 {
                *value = r;
            }
        }
        covered |= mask;
    }
    debug_assert!(values.iter().all(|x| x.is_finite()), "top of family is 1");
    Ok(values)
}

fn assemble(v: &Context, values: &[f64]) -> Operator {
    v.atoms()
        .iter()
        .zip(values)
        .fold(Operator::zeros(v.dim()), |acc, (atom, &c)| {
            &acc + &atom.scale(c)
        })
}

/// `δ^o(A)_V = ∫ λ d(δ^i(E^A_λ)_V)`: the spectrally smallest element of
/// `V_sa` above `A`.
pub fn outer_daseinise_selfadjoint(
    a: &Operator,
    v: &Context,
    tol: &Tolerances,
) -> Result<Operator> {
    require_self_adjoint(a, tol)?;
    Ok(assemble(
        v,
        &daseinised_atom_values(a, v, Mode::Outer, tol)?,
    ))
}

/// `δ^i(A)_V = ∫ λ d(⋀_{μ>λ} δ^o(E^A_μ)_V)`: the spectrally largest element
/// of `V_sa` below `A`.
pub fn inner_daseinise_selfadjoint(
    a: &Operator,
    v: &Context,
    tol: &Tolerances,
) -> Result<Operator> {
    require_self_adjoint(a, tol)?;
    Ok(assemble(
        v,
        &daseinised_atom_values(a, v, Mode::Inner, tol)?,
    ))
}

pub fn daseinise_selfadjoint(
    a: &Operator,
    v: &Context,
    mode: Mode,
    tol: &Tolerances,
) -> Result<Operator> {
    match mode {
        Mode::Outer => outer_daseinise_selfadjoint(a, v, tol),
        Mode::Inner => inner_daseinise_selfadjoint(a, v, tol),
    }
}
