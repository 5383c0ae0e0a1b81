//! Sieves, the subobject classifier `Ω` and the Heyting operations on sieves
//! and on clopen subobjects of the spectral presheaf.

use fixedbitset::FixedBitSet;

use crate::context::{ContextId, ContextPoset};
use crate::error::{Error, Result};
use crate::spectral::{full_mask, ClopenSubobject};

/// Sieve enumeration refuses down-sets larger than this.
pub const MAX_SIEVE_DOWN_SET: usize = 20;

/// A downward-closed family of subcontexts of `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sieve {
    base: ContextId,
    members: FixedBitSet,
}

impl Sieve {
    /// `↓V`, the maximal sieve.
    pub fn principal(poset: &ContextPoset, base: ContextId) -> Self {
        Self {
            base,
            members: poset.down_bits(base).clone(),
        }
    }

    pub fn empty(poset: &ContextPoset, base: ContextId) -> Self {
        Self {
            base,
            members: FixedBitSet::with_capacity(poset.len()),
        }
    }

    /// Validating constructor.
    pub fn from_members(
        poset: &ContextPoset,
        base: ContextId,
        members: &[ContextId],
    ) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(poset.len());
        for m in members {
            bits.insert(m.0);
        }
        let sieve = Self {
            base,
            members: bits,
        };
        if !sieve.is_sieve(poset) {
            return Err(Error::Validation(format!(
                "members do not form a sieve on `{}`",
                poset.label(base)
            )));
        }
        Ok(sieve)
    }

    pub(crate) fn from_bits(base: ContextId, members: FixedBitSet) -> Self {
        Self { base, members }
    }

    pub fn base(&self) -> ContextId {
        self.base
    }

    pub fn contains(&self, v: ContextId) -> bool {
        self.members.contains(v.0)
    }

    pub fn members(&self) -> Vec<ContextId> {
        self.members.ones().map(ContextId).collect()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn is_principal(&self, poset: &ContextPoset) -> bool {
        &self.members == poset.down_bits(self.base)
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Members lie below the base and the family is downward closed.
    pub fn is_sieve(&self, poset: &ContextPoset) -> bool {
        self.members.is_subset(poset.down_bits(self.base))
            && self
                .members
                .ones()
                .all(|m| poset.down_bits(ContextId(m)).is_subset(&self.members))
    }
}

/// Heyting connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
    Implies,
    Not,
}

/// A sieve on every context satisfying the matching condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalElementOfOmega {
    pub sieves: Vec<Sieve>,
}

impl GlobalElementOfOmega {
    /// The global element of principal sieves.
    pub fn totally_true(poset: &ContextPoset) -> Self {
        Self {
            sieves: poset.ids().map(|v| Sieve::principal(poset, v)).collect(),
        }
    }

    /// The global element of empty sieves.
    pub fn totally_false(poset: &ContextPoset) -> Self {
        Self {
            sieves: poset.ids().map(|v| Sieve::empty(poset, v)).collect(),
        }
    }

    pub fn at(&self, v: ContextId) -> &Sieve {
        &self.sieves[v.0]
    }
}

/// `Ω_V`: every sieve on `v`, ordered by size and then by member indices.
pub fn enumerate_sieves(poset: &ContextPoset, v: ContextId) -> Result<Vec<Sieve>> {
    let down = poset.down_set(v);
    if down.len() > MAX_SIEVE_DOWN_SET {
        return Err(Error::EnumerationTooLarge {
            context: poset.label(v).to_string(),
            size: down.len(),
            limit: MAX_SIEVE_DOWN_SET,
        });
    }
    // Visit smaller contexts first so every strict subcontext of an element
    // has been decided before the element itself.
    let mut order = down.clone();
    order.sort_by_key(|&c| (poset.context(c).len(), c));

    let mut out = Vec::new();
    let mut current = FixedBitSet::with_capacity(poset.len());
    fn rec(
        poset: &ContextPoset,
        order: &[ContextId],
        i: usize,
        current: &mut FixedBitSet,
        base: ContextId,
        out: &mut Vec<Sieve>,
    ) {
        if i == order.len() {
            out.push(Sieve::from_bits(base, current.clone()));
            return;
        }
        let c = order[i];
        rec(poset, order, i + 1, current, base, out);
        let below_included = poset
            .down_bits(c)
            .ones()
            .all(|d| d == c.0 || current.contains(d));
        if below_included {
            current.insert(c.0);
            rec(poset, order, i + 1, current, base, out);
            current.set(c.0, false);
        }
    }
    rec(poset, &order, 0, &mut current, v, &mut out);
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.members().cmp(&b.members()))
    });
    Ok(out)
}

/// `Ω(i_{V′V})(S) = S ∩ ↓V′`.
pub fn omega_restriction(poset: &ContextPoset, s: &Sieve, sub: ContextId) -> Result<Sieve> {
    if !poset.leq(sub, s.base) {
        return Err(Error::NotASubcontext {
            sub: poset.label(sub).to_string(),
            sup: poset.label(s.base).to_string(),
        });
    }
    let mut members = s.members.clone();
    members.intersect_with(poset.down_bits(sub));
    Ok(Sieve::from_bits(sub, members))
}

fn second<T>(kind: Connective, b: Option<&T>) -> Result<Option<&T>> {
    match (kind, b) {
        (Connective::Not, _) => Ok(None),
        (_, Some(b)) => Ok(Some(b)),
        (_, None) => Err(Error::Validation(format!("{kind:?} needs two operands"))),
    }
}

/// Heyting operations on `Ω_V`. Implication is
/// `{V′ ⊆ V | ∀V″ ⊆ V′: V″ ∈ S1 ⇒ V″ ∈ S2}` and `¬S = S ⇒ ∅`.
pub fn sieve_connective(
    poset: &ContextPoset,
    kind: Connective,
    s1: &Sieve,
    s2: Option<&Sieve>,
) -> Result<Sieve> {
    let s2 = second(kind, s2)?;
    if let Some(b) = s2 {
        if b.base != s1.base {
            return Err(Error::BaseMismatch);
        }
    }
    let base = s1.base;
    let members = match (kind, s2) {
        (Connective::And, Some(b)) => {
            let mut m = s1.members.clone();
            m.intersect_with(&b.members);
            m
        }
        (Connective::Or, Some(b)) => {
            let mut m = s1.members.clone();
            m.union_with(&b.members);
            m
        }
        (Connective::Implies, Some(b)) => implication(poset, base, &s1.members, &b.members),
        (Connective::Not, _) => implication(
            poset,
            base,
            &s1.members,
            &FixedBitSet::with_capacity(poset.len()),
        ),
        _ => unreachable!("binary connectives carry a second operand"),
    };
    Ok(Sieve::from_bits(base, members))
}

fn implication(
    poset: &ContextPoset,
    base: ContextId,
    a: &FixedBitSet,
    b: &FixedBitSet,
) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(poset.len());
    for v in poset.down_bits(base).ones() {
        let ok = poset
            .down_bits(ContextId(v))
            .ones()
            .all(|w| !a.contains(w) || b.contains(w));
        if ok {
            out.insert(v);
        }
    }
    out
}

/// Heyting operations on clopen subobjects. Meet and join are contextwise;
/// `(S1 ⇒ S2)(V) = {λ ∈ Σ_V | ∀V′ ⊆ V: λ|V′ ∈ S1(V′) ⇒ λ|V′ ∈ S2(V′)}`.
pub fn subobject_connective(
    poset: &ContextPoset,
    kind: Connective,
    s1: &ClopenSubobject,
    s2: Option<&ClopenSubobject>,
) -> Result<ClopenSubobject> {
    let s2 = second(kind, s2)?;
    if s1.len() != poset.len() || s2.is_some_and(|b| b.len() != poset.len()) {
        return Err(Error::PosetMismatch);
    }
    let a = s1.masks();
    let masks = match (kind, s2) {
        (Connective::And, Some(b)) => a.iter().zip(b.masks()).map(|(x, y)| x & y).collect(),
        (Connective::Or, Some(b)) => a.iter().zip(b.masks()).map(|(x, y)| x | y).collect(),
        (Connective::Implies, Some(b)) => subobject_implication(poset, a, b.masks()),
        (Connective::Not, _) => subobject_implication(poset, a, &vec![0; poset.len()]),
        _ => unreachable!("binary connectives carry a second operand"),
    };
    Ok(ClopenSubobject::from_masks(masks))
}

fn subobject_implication(poset: &ContextPoset, a: &[u64], b: &[u64]) -> Vec<u64> {
    poset
        .ids()
        .map(|v| {
            let k = poset.context(v).len();
            let mut mask = full_mask(k);
            for sub in poset.down_bits(v).ones() {
                let map = poset.restriction_map(v, ContextId(sub)).expect("inclusion");
                for (i, &j) in map.iter().enumerate() {
                    let holds_a = a[sub] >> j & 1 == 1;
                    let holds_b = b[sub] >> j & 1 == 1;
                    if holds_a && !holds_b {
                        mask &= !(1u64 << i);
                    }
                }
            }
            mask
        })
        .collect()
}

/// Matching condition: the sieve at `V` restricts to the sieve at each `V′ ⊆ V`.
pub fn check_global_element(g: &GlobalElementOfOmega, poset: &ContextPoset) -> Result<bool> {
    if g.sieves.len() != poset.len() || g.sieves.iter().enumerate().any(|(i, s)| s.base.0 != i) {
        return Err(Error::IncompleteAssignment);
    }
    for (sub, sup) in poset.inclusions() {
        let restricted = omega_restriction(poset, &g.sieves[sup.0], sub)?;
        if restricted.members != g.sieves[sub.0].members {
            return Ok(false);
        }
    }
    Ok(g.sieves.iter().all(|s| s.is_sieve(poset)))
}

/// Pointwise connective on global elements of `Ω`.
pub fn global_connective(
    poset: &ContextPoset,
    kind: Connective,
    a: &GlobalElementOfOmega,
    b: Option<&GlobalElementOfOmega>,
) -> Result<GlobalElementOfOmega> {
    let sieves = a
        .sieves
        .iter()
        .enumerate()
        .map(|(i, s)| sieve_connective(poset, kind, s, b.map(|b| &b.sieves[i])))
        .collect::<Result<Vec<_>>>()?;
    Ok(GlobalElementOfOmega { sieves })
}
