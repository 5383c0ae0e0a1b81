//! The spectral presheaf: Gelfand spectra of the contexts of a poset, the
//! restriction maps between them and clopen subobjects.
//!
//! In finite dimension every character of a context sends exactly one atom to
//! 1 and the others to 0, so characters are stored as atom indices and the
//! Gelfand transform is coefficient extraction.

use crate::context::{ContextId, ContextPoset};
use crate::error::{Error, Result};
use crate::operator::Operator;

/// A multiplicative unital functional on a context, identified by the atom
/// it sends to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub context: ContextId,
    pub atom: usize,
}

/// `Σ_V`: one character per atom, in canonical atom order.
pub fn gelfand_spectrum(poset: &ContextPoset, v: ContextId) -> Vec<Character> {
    (0..poset.context(v).len())
        .map(|atom| Character { context: v, atom })
        .collect()
}

/// The Gelfand transform `λ(A)` of an operator of the character's context.
pub fn evaluate_character(poset: &ContextPoset, lambda: Character, a: &Operator) -> Result<f64> {
    let ctx = poset.context(lambda.context);
    check_character(poset, lambda)?;
    let (coeffs, residual) = ctx.coefficients(a);
    if residual > poset.tolerances().tau {
        return Err(Error::NotInAlgebra {
            context: ctx.label().to_string(),
            residual,
        });
    }
    Ok(coeffs[lambda.atom])
}

/// `λ|_{V′}` for a subcontext `V′` of the character's context.
pub fn restrict_character(
    poset: &ContextPoset,
    lambda: Character,
    sub: ContextId,
) -> Result<Character> {
    check_character(poset, lambda)?;
    let map = poset
        .restriction_map(lambda.context, sub)
        .ok_or_else(|| Error::NotASubcontext {
            sub: poset.label(sub).to_string(),
            sup: poset.label(lambda.context).to_string(),
        })?;
    Ok(Character {
        context: sub,
        atom: map[lambda.atom],
    })
}

pub(crate) fn check_character(poset: &ContextPoset, lambda: Character) -> Result<()> {
    let ctx = poset.context(lambda.context);
    if lambda.atom >= ctx.len() {
        return Err(Error::UnknownCharacter {
            context: ctx.label().to_string(),
            atom: lambda.atom,
        });
    }
    Ok(())
}

/// A per-context selection of characters, stored as atom-index bit masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClopenSubobject {
    masks: Vec<u64>,
}

impl ClopenSubobject {
    /// Builds a family from per-context character lists, indexed by context.
    pub fn from_sets(sets: &[Vec<usize>]) -> Self {
        Self {
            masks: sets
                .iter()
                .map(|s| s.iter().fold(0u64, |m, &i| m | 1 << i))
                .collect(),
        }
    }

    pub(crate) fn from_masks(masks: Vec<u64>) -> Self {
        Self { masks }
    }

    /// The full spectral presheaf.
    pub fn top(poset: &ContextPoset) -> Self {
        Self {
            masks: poset
                .contexts()
                .iter()
                .map(|c| full_mask(c.len()))
                .collect(),
        }
    }

    /// The empty subobject.
    pub fn bottom(poset: &ContextPoset) -> Self {
        Self {
            masks: vec![0; poset.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn mask(&self, v: ContextId) -> u64 {
        self.masks[v.0]
    }

    pub(crate) fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn contains(&self, lambda: Character) -> bool {
        self.masks
            .get(lambda.context.0)
            .is_some_and(|m| m >> lambda.atom & 1 == 1)
    }

    /// Selected atom indices at `v`, ascending.
    pub fn characters(&self, v: ContextId) -> Vec<usize> {
        let m = self.masks[v.0];
        (0..64).filter(|i| m >> i & 1 == 1).collect()
    }

    /// Contextwise inclusion `self ⊆ other`.
    pub fn is_subset(&self, other: &ClopenSubobject) -> bool {
        self.masks.len() == other.masks.len()
            && self
                .masks
                .iter()
                .zip(&other.masks)
                .all(|(a, b)| a & !b == 0)
    }
}

pub(crate) fn full_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// True iff every restriction map sends selected characters to selected
/// characters.
pub fn is_clopen_subobject(s: &ClopenSubobject, poset: &ContextPoset) -> Result<bool> {
    if s.len() != poset.len() {
        return Err(Error::IncompleteAssignment);
    }
    Ok(poset.inclusions().all(|(sub, sup)| {
        let map = poset
            .restriction_map(sup, sub)
            .expect("inclusion has a map");
        let sel = s.mask(sup);
        map.iter()
            .enumerate()
            .filter(|(i, _)| sel >> i & 1 == 1)
            .all(|(_, &j)| s.mask(sub) >> j & 1 == 1)
    }))
}
