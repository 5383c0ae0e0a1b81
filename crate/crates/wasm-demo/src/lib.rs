//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes the text of a problem file (or the name of a bundled
//! one) and returns JSON.

use serde_json::{json, Value};
use topos_core::{
    parse_problem, run_command, Closure, Command, Complex64, ContextPoset, Mode, Operator, Options,
    Problem, StateVector,
};
use wasm_bindgen::prelude::*;

const BUNDLED: [(&str, &str); 4] = [
    ("spin2", include_str!("../../../data/spin2.json")),
    ("two_basis", include_str!("../../../data/two_basis.json")),
    (
        "daseinisation_classes",
        include_str!("../../../data/daseinisation_classes.json"),
    ),
    ("ks18", include_str!("../../../data/ks18.json")),
];

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn load(source: &str) -> Result<Problem, JsValue> {
    let text = BUNDLED
        .iter()
        .find(|(name, _)| *name == source)
        .map_or(source, |(_, text)| text);
    parse_problem(text).map_err(err)
}

fn closure(name: &str) -> Result<Closure, JsValue> {
    match name {
        "generated" => Ok(Closure::Generated),
        "complete" => Ok(Closure::Complete),
        other => Err(err(format!("unknown closure {other:?}"))),
    }
}

/// Names of the bundled problem files.
#[wasm_bindgen]
pub fn bundled() -> String {
    json!(BUNDLED.iter().map(|(n, _)| *n).collect::<Vec<_>>()).to_string()
}

/// Text of a bundled problem file.
#[wasm_bindgen]
pub fn bundled_text(name: &str) -> Result<String, JsValue> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| err(format!("no bundled problem {name:?}")))
}

fn hasse_json(poset: &ContextPoset) -> Value {
    let nodes: Vec<Value> = poset
        .ids()
        .map(|v| json!({"id": v.0, "label": poset.label(v), "atoms": poset.context(v).len()}))
        .collect();
    let mut edges = Vec::new();
    for (sub, sup) in poset.inclusions() {
        if sub == sup {
            continue;
        }
        let covered = !poset
            .ids()
            .any(|m| m != sub && m != sup && poset.leq(sub, m) && poset.leq(m, sup));
        if covered {
            edges.push(json!([sub.0, sup.0]));
        }
    }
    json!({"nodes": nodes, "edges": edges})
}

/// Nodes and covering edges of the context poset.
#[wasm_bindgen]
pub fn hasse(source: &str, closure_name: &str) -> Result<String, JsValue> {
    let poset = load(source)?.poset(closure(closure_name)?).map_err(err)?;
    Ok(hasse_json(&poset).to_string())
}

/// Propositions and observables defined by a problem.
#[wasm_bindgen]
pub fn names(source: &str) -> Result<String, JsValue> {
    let problem = load(source)?;
    Ok(json!({
        "propositions": problem.propositions.keys().collect::<Vec<_>>(),
        "observables": problem.observables.keys().collect::<Vec<_>>(),
        "dim": problem.dim,
    })
    .to_string())
}

/// Truth value of `prop` in the normalised state with the given real and
/// imaginary amplitudes.
#[wasm_bindgen]
pub fn truth(
    source: &str,
    closure_name: &str,
    prop: &str,
    re: &[f64],
    im: &[f64],
) -> Result<String, JsValue> {
    let mut problem = load(source)?;
    if re.len() != problem.dim || im.len() != problem.dim {
        return Err(err(format!("state needs {} amplitudes", problem.dim)));
    }
    let psi = StateVector::from_iterator(
        problem.dim,
        re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)),
    );
    let norm = psi.norm();
    if norm < 1e-12 {
        return Err(err("state is zero"));
    }
    problem
        .states
        .insert("ψ".into(), psi / Complex64::new(norm, 0.0));
    let options = Options {
        state: Some("ψ".into()),
        prop: Some(prop.into()),
        closure: closure(closure_name)?,
        ..Options::default()
    };
    let report = run_command(Command::Truth, &problem, &options).map_err(err)?;
    Ok(report.json.to_string())
}

/// Outer or inner daseinisation of `diag(entries)` at every context, with
/// the interval values at each character of `context`.
#[wasm_bindgen]
pub fn daseinise_diagonal(
    source: &str,
    closure_name: &str,
    entries: &[f64],
    mode: &str,
    context: &str,
) -> Result<String, JsValue> {
    let mut problem = load(source)?;
    if entries.len() != problem.dim {
        return Err(err(format!("observable needs {} entries", problem.dim)));
    }
    problem
        .observables
        .insert("A".into(), Operator::diagonal(entries));
    let options = Options {
        observable: Some("A".into()),
        context: (!context.is_empty()).then(|| context.to_string()),
        mode: match mode {
            "inner" => Mode::Inner,
            _ => Mode::Outer,
        },
        closure: closure(closure_name)?,
        ..Options::default()
    };
    let everywhere = Options {
        context: None,
        ..options.clone()
    };
    let daseinised = run_command(Command::Daseinize, &problem, &everywhere).map_err(err)?;
    let values = match options.context {
        Some(_) => {
            run_command(Command::Value, &problem, &options)
                .map_err(err)?
                .json
        }
        None => Value::Null,
    };
    Ok(json!({"daseinisation": daseinised.json, "value": values}).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hasse_of_one_basis() {
        let poset = load("spin2").unwrap().poset(Closure::Generated).unwrap();
        let h = hasse_json(&poset);
        assert_eq!(h["nodes"].as_array().unwrap().len(), 11);
        // Each pair context covers two singletons and is covered by the top.
        assert_eq!(h["edges"].as_array().unwrap().len(), 18);
    }
}
