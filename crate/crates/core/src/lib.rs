//! Topos-theoretic calculations for finite-dimensional quantum systems.
//!
//! The crate builds finite posets of abelian subalgebras ("contexts") of
//! `B(C^n)` and computes, over them, the spectral presheaf, daseinisation of
//! projections and self-adjoint operators, sieve-valued truth values,
//! pseudo-states, interval values of physical quantities and global sections
//! (whose absence witnesses Kochen–Specker contextuality).
//!
//! ```
//! use topos_core::{build_poset, Closure, Context, Operator, Tolerances};
//!
//! let tol = Tolerances::default();
//! let atoms = (0..4).map(|i| Operator::basis_projector(4, i)).collect();
//! let v = Context::from_atoms(atoms, &tol).unwrap().with_label("b0");
//! let poset = build_poset(&[v], Closure::Generated, &tol).unwrap();
//! assert_eq!(poset.len(), 11);
//! ```

pub mod context;
pub mod daseinisation;
pub mod error;
pub mod omega;
pub mod operator;
pub mod problem;
pub mod report;
pub mod spectral;
pub mod valuation;

pub use context::{
    build_poset, context_from_projectors, intersect_contexts, is_subcontext, Closure, Context,
    ContextId, ContextPoset, Intersection,
};
pub use daseinisation::{
    daseinise_proposition, daseinise_selfadjoint, inner_daseinise_projection,
    inner_daseinise_selfadjoint, outer_daseinise_projection, outer_daseinise_selfadjoint,
    DaseinisedProposition, Mode,
};
pub use error::{Error, Result};
pub use omega::{
    check_global_element, enumerate_sieves, global_connective, omega_restriction, sieve_connective,
    subobject_connective, Connective, GlobalElementOfOmega, Sieve,
};
pub use operator::{
    projector_leq, spectral_decomposition, spectral_family_at, spectral_order_leq, Operator,
    SpectralDecomposition, SpectralFamily, StateVector, Tolerances,
};
pub use problem::{load_problem, parse_problem, Problem, Proposition};
pub use report::{run_command, Command, Format, Options, Report};
pub use spectral::{
    evaluate_character, gelfand_spectrum, is_clopen_subobject, restrict_character, Character,
    ClopenSubobject,
};
pub use valuation::{
    global_sections, proposition_projector, pseudo_state, quantity_value_arrow, truth_value,
    GlobalSection, IntervalPair, PseudoState,
};

pub use num_complex::Complex64;
