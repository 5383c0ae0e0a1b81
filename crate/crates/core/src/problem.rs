//! Problem files: the JSON description of a Hilbert space, the seed contexts
//! and the named states, observables and propositions used by the CLI.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "bases": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]],
//!   "states": {"up": [[1, 0], [0, 0]]}
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major arrays of
//! rows. Every key except `dim` is optional.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::context::{
    build_poset, context_from_projectors, Closure, Context, ContextPoset, MAX_DIM,
};
use crate::error::{Error, Result};
use crate::operator::{Operator, StateVector, Tolerances};
use crate::valuation::{proposition_projector, require_unit};
use crate::Complex64;

type RawNumber = [f64; 2];
type RawVector = Vec<RawNumber>;
type RawMatrix = Vec<Vec<RawNumber>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    dim: usize,
    #[serde(default)]
    bases: Vec<Vec<RawVector>>,
    #[serde(default)]
    projector_sets: Vec<Vec<RawMatrix>>,
    #[serde(default)]
    states: BTreeMap<String, RawVector>,
    #[serde(default)]
    observables: BTreeMap<String, RawMatrix>,
    #[serde(default)]
    propositions: BTreeMap<String, RawProposition>,
    #[serde(default)]
    tolerances: Tolerances,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum RawProposition {
    Interval {
        observable: String,
        interval: [f64; 2],
    },
    Projector {
        projector: RawMatrix,
    },
}

/// A named proposition.
#[derive(Debug, Clone, PartialEq)]
pub enum Proposition {
    Projector(Operator),
    /// `A ∈ [lo, hi]` for a named observable.
    Interval {
        observable: String,
        interval: (f64, f64),
    },
}

/// A validated problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub dim: usize,
    pub bases: Vec<Vec<StateVector>>,
    pub projector_sets: Vec<Vec<Operator>>,
    pub states: BTreeMap<String, StateVector>,
    pub observables: BTreeMap<String, Operator>,
    pub propositions: BTreeMap<String, Proposition>,
    pub tolerances: Tolerances,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

fn vector_from_raw(raw: &RawVector, dim: usize, what: &str) -> Result<StateVector> {
    if raw.len() != dim {
        return Err(invalid(format!(
            "{what} has {} entries, expected {dim}",
            raw.len()
        )));
    }
    Ok(StateVector::from_iterator(
        dim,
        raw.iter().map(|&[re, im]| Complex64::new(re, im)),
    ))
}

fn matrix_from_raw(raw: &RawMatrix, dim: usize, what: &str) -> Result<Operator> {
    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
        return Err(invalid(format!("{what} is not a {dim}x{dim} matrix")));
    }
    let rows: Vec<Vec<Complex64>> = raw
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    Operator::from_rows(&rows)
}

fn vector_to_raw(v: &StateVector) -> RawVector {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn matrix_to_raw(a: &Operator) -> RawMatrix {
    (0..a.dim())
        .map(|i| {
            (0..a.dim())
                .map(|j| a.entry(i, j))
                .map(|z| [z.re, z.im])
                .collect()
        })
        .collect()
}

impl Problem {
    fn from_raw(raw: RawProblem) -> Result<Self> {
        let dim = raw.dim;
        if dim < 2 {
            return Err(invalid("dim must be at least 2"));
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        let tol = raw.tolerances;
        if !(tol.tau > 0.0 && tol.tau_eig > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        let bases = raw
            .bases
            .iter()
            .enumerate()
            .map(|(b, vs)| {
                vs.iter()
                    .enumerate()
                    .map(|(k, v)| vector_from_raw(v, dim, &format!("bases[{b}][{k}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let projector_sets = raw
            .projector_sets
            .iter()
            .enumerate()
            .map(|(s, ms)| {
                ms.iter()
                    .enumerate()
                    .map(|(k, m)| matrix_from_raw(m, dim, &format!("projector_sets[{s}][{k}]")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let states = raw
            .states
            .iter()
            .map(|(name, v)| {
                Ok((
                    name.clone(),
                    vector_from_raw(v, dim, &format!("state `{name}`"))?,
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let observables = raw
            .observables
            .iter()
            .map(|(name, m)| {
                Ok((
                    name.clone(),
                    matrix_from_raw(m, dim, &format!("observable `{name}`"))?,
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let propositions = raw
            .propositions
            .iter()
            .map(|(name, p)| {
                let prop = match p {
                    RawProposition::Projector { projector } => Proposition::Projector(
                        matrix_from_raw(projector, dim, &format!("proposition `{name}`"))?,
                    ),
                    RawProposition::Interval {
                        observable,
                        interval,
                    } => Proposition::Interval {
                        observable: observable.clone(),
                        interval: (interval[0], interval[1]),
                    },
                };
                Ok((name.clone(), prop))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let problem = Self {
            dim,
            bases,
            projector_sets,
            states,
            observables,
            propositions,
            tolerances: tol,
        };
        problem.validate()?;
        Ok(problem)
    }

    fn validate(&self) -> Result<()> {
        let tol = &self.tolerances;
        if self.bases.is_empty() && self.projector_sets.is_empty() {
            return Err(invalid("problem has no bases or projector sets"));
        }
        self.seeds()?;
        for (name, psi) in &self.states {
            require_unit(psi, tol).map_err(|e| invalid(format!("state `{name}`: {e}")))?;
        }
        for (name, a) in &self.observables {
            if !a.is_self_adjoint(tol.tau) {
                return Err(invalid(format!("observable `{name}` is not self-adjoint")));
            }
        }
        for name in self.propositions.keys() {
            self.proposition(name)?;
        }
        Ok(())
    }

    /// Seed contexts, labelled `b{i}` for bases and `p{i}` for projector sets.
    pub fn seeds(&self) -> Result<Vec<Context>> {
        let tol = &self.tolerances;
        let mut seeds = Vec::new();
        for (i, basis) in self.bases.iter().enumerate() {
            let ctx = Context::from_basis(basis, tol).map_err(|e| match e {
                Error::Validation(_) => e,
                other => invalid(format!("bases[{i}]: {other}")),
            })?;
            seeds.push(ctx.with_label(format!("b{i}")));
        }
        for (i, set) in self.projector_sets.iter().enumerate() {
            let ctx = context_from_projectors(set, tol)
                .map_err(|e| invalid(format!("projector_sets[{i}]: {e}")))?;
            seeds.push(ctx.with_label(format!("p{i}")));
        }
        Ok(seeds)
    }

    pub fn poset(&self, closure: Closure) -> Result<ContextPoset> {
        build_poset(&self.seeds()?, closure, &self.tolerances)
    }

    pub fn state(&self, name: &str) -> Result<&StateVector> {
        self.states
            .get(name)
            .ok_or_else(|| invalid(format!("unknown state `{name}`")))
    }

    pub fn observable(&self, name: &str) -> Result<&Operator> {
        self.observables
            .get(name)
            .ok_or_else(|| invalid(format!("unknown observable `{name}`")))
    }

    /// The projector of a named proposition.
    pub fn proposition(&self, name: &str) -> Result<Operator> {
        let prop = self
            .propositions
            .get(name)
            .ok_or_else(|| invalid(format!("unknown proposition `{name}`")))?;
        match prop {
            Proposition::Projector(p) => {
                if !p.is_projector(self.tolerances.tau) {
                    return Err(invalid(format!("proposition `{name}` is not a projector")));
                }
                Ok(p.clone())
            }
            Proposition::Interval {
                observable,
                interval,
            } => {
                if interval
                    .0
                    .partial_cmp(&interval.1)
                    .is_none_or(|o| o.is_gt())
                {
                    return Err(invalid(format!(
                        "proposition `{name}` has an empty interval"
                    )));
                }
                let a = self.observable(observable)?;
                proposition_projector(a, *interval, &self.tolerances)
            }
        }
    }

    fn to_raw(&self) -> RawProblem {
        RawProblem {
            dim: self.dim,
            bases: self
                .bases
                .iter()
                .map(|b| b.iter().map(vector_to_raw).collect())
                .collect(),
            projector_sets: self
                .projector_sets
                .iter()
                .map(|s| s.iter().map(matrix_to_raw).collect())
                .collect(),
            states: self
                .states
                .iter()
                .map(|(k, v)| (k.clone(), vector_to_raw(v)))
                .collect(),
            observables: self
                .observables
                .iter()
                .map(|(k, a)| (k.clone(), matrix_to_raw(a)))
                .collect(),
            propositions: self
                .propositions
                .iter()
                .map(|(k, p)| {
                    let raw = match p {
                        Proposition::Projector(a) => RawProposition::Projector {
                            projector: matrix_to_raw(a),
                        },
                        Proposition::Interval {
                            observable,
                            interval,
                        } => RawProposition::Interval {
                            observable: observable.clone(),
                            interval: [interval.0, interval.1],
                        },
                    };
                    (k.clone(), raw)
                })
                .collect(),
            tolerances: self.tolerances,
        }
    }

    /// Pretty-printed JSON in the problem-file schema.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("problem serialises")
    }
}

/// Parses and validates a problem from JSON text.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Problem::from_raw(raw)
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_problem(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUBIT: &str = r#"{"dim": 2, "bases": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]}"#;

    #[test]
    fn minimal_file() {
        let p = parse_problem(QUBIT).unwrap();
        let poset = p.poset(Closure::Generated).unwrap();
        assert_eq!(poset.len(), 1);
        assert_eq!(poset.contexts()[0].len(), 2);
    }

    #[test]
    fn non_orthonormal_basis() {
        let text = r#"{"dim": 2, "bases": [[[[1, 0], [0, 0]], [[1, 0], [1, 0]]]]}"#;
        assert_eq!(
            parse_problem(text),
            Err(Error::Validation("basis not orthonormal".into()))
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_problem("{\n  \"dim\": 2,\n  \"bases\": [oops]\n}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_problem(r#"{"dim": 2, "extra": 1}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn unresolved_references() {
        let text = r#"{"dim": 2, "bases": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]],
            "propositions": {"q": {"observable": "missing", "interval": [0, 1]}}}"#;
        assert!(matches!(parse_problem(text), Err(Error::Validation(m)) if m.contains("missing")));
        let text = r#"{"dim": 2, "bases": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]],
            "states": {"s": [[1, 0], [1, 0]]}}"#;
        assert!(matches!(parse_problem(text), Err(Error::Validation(_))));
    }

    #[test]
    fn round_trip() {
        let text = r#"{"dim": 2,
            "bases": [[[[0.6, 0], [0, 0.8]], [[0.8, 0], [0, -0.6]]]],
            "projector_sets": [[[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]],
            "states": {"s": [[0.6, 0], [0, 0.8]]},
            "observables": {"x": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
            "propositions": {"x_pos": {"observable": "x", "interval": [0.5, 2]},
                             "up": {"projector": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}},
            "tolerances": {"tau": 1e-10, "tau_eig": 1e-9}}"#;
        let p = parse_problem(text).unwrap();
        assert_eq!(parse_problem(&p.to_json()).unwrap(), p);
        assert_eq!(
            p.proposition("up").unwrap(),
            Operator::basis_projector(2, 0)
        );
    }
}
