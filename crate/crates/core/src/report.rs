//! Command dispatch and deterministic JSON / text reports over a [`Problem`].
//!
//! Contexts are keyed by their labels; characters are atom indices in the
//! canonical atom order of their context. Numbers are rounded to 12 decimals
//! so that reports are stable across platforms.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::context::{Closure, ContextId, ContextPoset};
use crate::daseinisation::{daseinise_proposition, daseinised_atom_values, Mode};
use crate::error::{Error, Result};
use crate::omega::{enumerate_sieves, sieve_connective, Connective, Sieve};
use crate::operator::{Operator, StateVector};
use crate::problem::Problem;
use crate::spectral::{gelfand_spectrum, ClopenSubobject};
use crate::valuation::{
    global_sections, pseudo_state, quantity_value_arrow, truth_value, DEFAULT_SEARCH_BUDGET,
};

/// A report-producing command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Contexts,
    Spectrum,
    Daseinize,
    PseudoState,
    Truth,
    Value,
    HeytingCheck,
    Sections,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Contexts,
        Command::Spectrum,
        Command::Daseinize,
        Command::PseudoState,
        Command::Truth,
        Command::Value,
        Command::HeytingCheck,
        Command::Sections,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Contexts => "contexts",
            Command::Spectrum => "spectrum",
            Command::Daseinize => "daseinize",
            Command::PseudoState => "pseudo-state",
            Command::Truth => "truth",
            Command::Value => "value",
            Command::HeytingCheck => "heyting-check",
            Command::Sections => "sections",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Command options; which ones are required depends on the command.
#[derive(Debug, Clone)]
pub struct Options {
    pub context: Option<String>,
    pub state: Option<String>,
    pub prop: Option<String>,
    pub observable: Option<String>,
    pub mode: Mode,
    pub budget: u64,
    pub closure: Closure,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            context: None,
            state: None,
            prop: None,
            observable: None,
            mode: Mode::Outer,
            budget: DEFAULT_SEARCH_BUDGET,
            closure: Closure::Generated,
        }
    }
}

/// The outcome of a command in both renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub table: String,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report serialises");
                s.push('\n');
                s
            }
            Format::Table => self.table.clone(),
        }
    }
}

pub fn run_command(command: Command, problem: &Problem, options: &Options) -> Result<Report> {
    let poset = problem.poset(options.closure)?;
    let ctx = Ctx {
        problem,
        poset: &poset,
        options,
    };
    match command {
        Command::Contexts => ctx.contexts(),
        Command::Spectrum => ctx.spectrum(),
        Command::Daseinize => ctx.daseinize(),
        Command::PseudoState => ctx.pseudo_state(),
        Command::Truth => ctx.truth(),
        Command::Value => ctx.value(),
        Command::HeytingCheck => ctx.heyting_check(),
        Command::Sections => ctx.sections(),
    }
}

fn num(x: f64) -> Value {
    let r = (x * 1e12).round() / 1e12;
    json!(if r == 0.0 { 0.0 } else { r })
}

fn short(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

pub(crate) fn matrix_json(a: &Operator) -> Value {
    Value::Array(
        (0..a.dim())
            .map(|i| {
                Value::Array(
                    (0..a.dim())
                        .map(|j| {
                            let z = a.entry(i, j);
                            json!([num(z.re), num(z.im)])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn vector_json(v: &StateVector) -> Value {
    Value::Array(v.iter().map(|z| json!([num(z.re), num(z.im)])).collect())
}

fn need<'a>(value: &'a Option<String>, flag: &str, command: &str) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Error::Usage(format!("`{command}` needs --{flag}")))
}

/// Renders rows as a left-aligned text table.
fn text_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[&str]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            if i + 1 < cells.len() {
                s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    let mut out = line(headers);
    out.push_str(&line(&rule.iter().map(String::as_str).collect::<Vec<_>>()));
    for row in rows {
        out.push_str(&line(&row.iter().map(String::as_str).collect::<Vec<_>>()));
    }
    out
}

struct Ctx<'a> {
    problem: &'a Problem,
    poset: &'a ContextPoset,
    options: &'a Options,
}

impl Ctx<'_> {
    fn label(&self, v: ContextId) -> &str {
        self.poset.label(v)
    }

    /// `--context` as a label or a numeric id.
    fn resolve_context(&self, name: &str) -> Result<ContextId> {
        if let Ok(v) = self.poset.id_of(name) {
            return Ok(v);
        }
        match name.parse::<usize>() {
            Ok(i) if i < self.poset.len() => Ok(ContextId(i)),
            _ => Err(Error::UnknownContext(name.to_string())),
        }
    }

    /// The selected context, or every context.
    fn selected(&self) -> Result<Vec<ContextId>> {
        match &self.options.context {
            Some(name) => Ok(vec![self.resolve_context(name)?]),
            None => Ok(self.poset.ids().collect()),
        }
    }

    fn character_name(&self, v: ContextId, atom: usize) -> String {
        format!("λ[{}]", self.poset.atom_name(v, atom))
    }

    /// `P1 + P[34]`, `1` or `0` for a set of atoms of `v`.
    fn atoms_text(&self, v: ContextId, atoms: &[usize]) -> String {
        if atoms.is_empty() {
            return "0".into();
        }
        if atoms.len() == self.poset.context(v).len() {
            return "1".into();
        }
        atoms
            .iter()
            .map(|&i| {
                let n = self.poset.atom_name(v, i);
                if n.chars().count() == 1 {
                    format!("P{n}")
                } else {
                    format!("P[{n}]")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn sieve_json(&self, s: &Sieve) -> Value {
        json!({
            "base": self.label(s.base()),
            "members": s.members().iter().map(|&m| self.label(m)).collect::<Vec<_>>(),
        })
    }

    fn sieve_text(&self, s: &Sieve) -> String {
        let m: Vec<&str> = s.members().iter().map(|&m| self.label(m)).collect();
        format!("{{{}}}", m.join(", "))
    }

    fn contexts(&self) -> Result<Report> {
        let poset = self.poset;
        let maximal = poset.maximal();
        let mut items = Vec::new();
        let mut rows = Vec::new();
        for v in poset.ids() {
            let c = poset.context(v);
            let atoms: Vec<&str> = (0..c.len()).map(|i| poset.atom_name(v, i)).collect();
            let below: Vec<&str> = poset
                .down_set(v)
                .into_iter()
                .filter(|&w| w != v)
                .map(|w| self.label(w))
                .collect();
            items.push(json!({
                "id": v.0,
                "label": self.label(v),
                "atoms": atoms,
                "ranks": c.ranks(),
                "maximal": maximal.contains(&v),
                "subcontexts": below,
            }));
            rows.push(vec![
                v.0.to_string(),
                self.label(v).to_string(),
                c.len().to_string(),
                format!("{:?}", c.ranks()),
                below.len().to_string(),
            ]);
        }
        Ok(Report {
            json: json!({ "count": poset.len(), "contexts": items }),
            table: text_table(&["id", "context", "atoms", "ranks", "subcontexts"], &rows),
        })
    }

    fn spectrum(&self) -> Result<Report> {
        let poset = self.poset;
        let mut out = Map::new();
        let mut table = String::new();
        for v in self.selected()? {
            let chars: Vec<Value> = gelfand_spectrum(poset, v)
                .into_iter()
                .map(|l| json!({ "context": self.label(l.context), "atom": l.atom }))
                .collect();
            let mut restrictions = Map::new();
            let mut rows = Vec::new();
            for sub in poset.down_set(v).into_iter().filter(|&w| w != v) {
                let map = poset.restriction_map(v, sub).expect("inclusion");
                restrictions.insert(self.label(sub).to_string(), json!(map));
                let mut row = vec![self.label(sub).to_string()];
                row.extend(map.iter().map(|&j| self.character_name(sub, j)));
                rows.push(row);
            }
            out.insert(
                self.label(v).to_string(),
                json!({ "characters": chars, "restrictions": restrictions }),
            );
            let names: Vec<String> = (0..poset.context(v).len())
                .map(|i| self.character_name(v, i))
                .collect();
            let _ = writeln!(table, "Σ at {} ({} characters)", self.label(v), names.len());
            if !rows.is_empty() {
                let mut headers = vec!["restricted to"];
                headers.extend(names.iter().map(String::as_str));
                table.push_str(&text_table(&headers, &rows));
            }
            table.push('\n');
        }
        Ok(Report {
            json: json!({ "spectrum": out }),
            table,
        })
    }

    fn subobject_report(
        &self,
        mut head: Map<String, Value>,
        s: &ClopenSubobject,
        projectors: &[Operator],
    ) -> Result<Report> {
        let mut contexts = Map::new();
        let mut rows = Vec::new();
        for v in self.selected()? {
            let chars = s.characters(v);
            rows.push(vec![
                self.label(v).to_string(),
                chars
                    .iter()
                    .map(|&i| self.character_name(v, i))
                    .collect::<Vec<_>>()
                    .join(" "),
                self.atoms_text(v, &chars),
            ]);
            contexts.insert(
                self.label(v).to_string(),
                json!({ "projector": matrix_json(&projectors[v.0]), "characters": chars }),
            );
        }
        head.insert("contexts".into(), Value::Object(contexts));
        Ok(Report {
            json: Value::Object(head),
            table: text_table(&["context", "characters", "projector"], &rows),
        })
    }

    fn daseinize(&self) -> Result<Report> {
        let o = self.options;
        match (&o.prop, &o.observable) {
            (Some(name), None) => {
                let p = self.problem.proposition(name)?;
                let d = daseinise_proposition(&p, self.poset)?;
                let mut head = Map::new();
                head.insert("projector".into(), matrix_json(&p));
                self.subobject_report(head, &d.subobject, &d.per_context_projector)
            }
            (None, Some(name)) => self.daseinize_observable(name),
            _ => Err(Error::Usage(
                "`daseinize` needs exactly one of --prop or --observable".into(),
            )),
        }
    }

    fn daseinize_observable(&self, name: &str) -> Result<Report> {
        let a = self.problem.observable(name)?;
        let tol = self.poset.tolerances();
        let mode = self.options.mode;
        let mut contexts = Map::new();
        let mut rows = Vec::new();
        for v in self.selected()? {
            let ctx = self.poset.context(v);
            let values = daseinised_atom_values(a, ctx, mode, tol)?;
            let op = ctx
                .atoms()
                .iter()
                .zip(&values)
                .fold(Operator::zeros(ctx.dim()), |acc, (atom, &c)| {
                    &acc + &atom.scale(c)
                });
            rows.push(vec![
                self.label(v).to_string(),
                values
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| format!("{}={}", self.atoms_text(v, &[i]), short(x)))
                    .collect::<Vec<_>>()
                    .join(", "),
            ]);
            contexts.insert(
                self.label(v).to_string(),
                json!({
                    "operator": matrix_json(&op),
                    "values": values.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                }),
            );
        }
        let mode_name = match mode {
            Mode::Outer => "outer",
            Mode::Inner => "inner",
        };
        Ok(Report {
            json: json!({
                "observable": name,
                "mode": mode_name,
                "contexts": contexts,
            }),
            table: text_table(&["context", "atom values"], &rows),
        })
    }

    fn pseudo_state(&self) -> Result<Report> {
        let name = need(&self.options.state, "state", "pseudo-state")?;
        let psi = self.problem.state(name)?;
        let w = pseudo_state(psi, self.poset)?;
        let mut head = Map::new();
        head.insert("state".into(), vector_json(psi));
        head.insert("projector".into(), matrix_json(&Operator::ket_bra(psi)));
        self.subobject_report(head, &w.subobject, &w.per_context_projector)
    }

    fn truth(&self) -> Result<Report> {
        let prop = need(&self.options.prop, "prop", "truth")?;
        let state = need(&self.options.state, "state", "truth")?;
        let p = self.problem.proposition(prop)?;
        let g = truth_value(&p, self.problem.state(state)?, self.poset)?;
        let mut sieves = Map::new();
        let mut rows = Vec::new();
        for v in self.selected()? {
            let s = g.at(v);
            let status = if s.is_principal(self.poset) {
                "true"
            } else if s.is_empty() {
                "false"
            } else {
                "partial"
            };
            rows.push(vec![
                self.label(v).to_string(),
                status.to_string(),
                self.sieve_text(s),
            ]);
            sieves.insert(self.label(v).to_string(), self.sieve_json(s));
        }
        Ok(Report {
            json: json!({ "sieves": sieves }),
            table: text_table(&["context", "status", "truth value"], &rows),
        })
    }

    fn value(&self) -> Result<Report> {
        let name = need(&self.options.observable, "observable", "value")?;
        let ctx = need(&self.options.context, "context", "value")?;
        let v = self.resolve_context(ctx)?;
        let a = self.problem.observable(name)?;
        let mut intervals = Vec::new();
        let mut table = String::new();
        for lambda in gelfand_spectrum(self.poset, v) {
            let pair = quantity_value_arrow(a, lambda, self.poset)?;
            let mut mu = Map::new();
            let mut nu = Map::new();
            let mut rows = Vec::new();
            for (&w, &m) in &pair.mu {
                let n = pair.nu[&w];
                mu.insert(self.label(w).to_string(), num(m));
                nu.insert(self.label(w).to_string(), num(n));
                rows.push(vec![self.label(w).to_string(), short(m), short(n)]);
            }
            intervals.push(json!({
                "context": self.label(v),
                "atom": lambda.atom,
                "mu": mu,
                "nu": nu,
            }));
            let _ = writeln!(
                table,
                "{} at {}",
                self.character_name(v, lambda.atom),
                self.label(v)
            );
            table.push_str(&text_table(&["subcontext", "mu", "nu"], &rows));
            table.push('\n');
        }
        Ok(Report {
            json: json!({ "observable": name, "intervals": intervals }),
            table,
        })
    }

    fn heyting_check(&self) -> Result<Report> {
        let targets = match &self.options.context {
            Some(name) => vec![self.resolve_context(name)?],
            None => self
                .poset
                .ids()
                .filter(|&v| {
                    self.poset.down_bits(v).count_ones(..) <= crate::omega::MAX_SIEVE_DOWN_SET
                })
                .collect(),
        };
        let mut contexts = Map::new();
        let mut rows = Vec::new();
        let mut all_ok = true;
        for v in targets {
            let h = HeytingSummary::compute(self.poset, v)?;
            all_ok &= h.ok();
            rows.push(vec![
                self.label(v).to_string(),
                h.sieves.to_string(),
                h.lattice.to_string(),
                h.distributive.to_string(),
                h.residuation.to_string(),
                h.non_contradiction.to_string(),
                h.excluded_middle_failures.to_string(),
            ]);
            let witness = h.witness.as_ref().map(
                |(s, n)| json!({ "sieve": self.sieve_json(s), "negation": self.sieve_json(n) }),
            );
            contexts.insert(
                self.label(v).to_string(),
                json!({
                    "sieves": h.sieves,
                    "lattice": h.lattice,
                    "distributive": h.distributive,
                    "residuation": h.residuation,
                    "non_contradiction": h.non_contradiction,
                    "excluded_middle_failures": h.excluded_middle_failures,
                    "witness": witness,
                }),
            );
        }
        Ok(Report {
            json: json!({ "ok": all_ok, "contexts": contexts }),
            table: text_table(
                &[
                    "context",
                    "sieves",
                    "lattice",
                    "distributive",
                    "residuation",
                    "S∧¬S=∅",
                    "S∨¬S≠⊤",
                ],
                &rows,
            ),
        })
    }

    fn sections(&self) -> Result<Report> {
        let found = global_sections(self.poset, self.options.budget)?;
        let sections: Vec<Value> = found
            .iter()
            .map(|s| {
                let assignment: Map<String, Value> = self
                    .poset
                    .ids()
                    .map(|v| (self.label(v).to_string(), json!(s.assignment[v.0])))
                    .collect();
                json!({ "assignment": assignment })
            })
            .collect();
        const SHOWN: usize = 8;
        let mut table = format!("{} global section(s)\n", found.len());
        if !found.is_empty() {
            let shown = &found[..found.len().min(SHOWN)];
            let names: Vec<String> = (0..shown.len()).map(|i| format!("#{i}")).collect();
            let mut headers = vec!["context"];
            headers.extend(names.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = self
                .poset
                .ids()
                .map(|v| {
                    let mut row = vec![self.label(v).to_string()];
                    row.extend(
                        shown
                            .iter()
                            .map(|s| self.character_name(v, s.assignment[v.0])),
                    );
                    row
                })
                .collect();
            table.push_str(&text_table(&headers, &rows));
            if found.len() > SHOWN {
                let _ = writeln!(table, "({} more not shown)", found.len() - SHOWN);
            }
        }
        Ok(Report {
            json: json!({ "count": found.len(), "sections": sections }),
            table,
        })
    }
}

/// Exhaustive Heyting-law check over `Ω_V`, driven by operation tables.
struct HeytingSummary {
    sieves: usize,
    lattice: bool,
    distributive: bool,
    residuation: bool,
    non_contradiction: bool,
    excluded_middle_failures: usize,
    witness: Option<(Sieve, Sieve)>,
}

impl HeytingSummary {
    fn compute(poset: &ContextPoset, v: ContextId) -> Result<Self> {
        let all = enumerate_sieves(poset, v)?;
        let n = all.len();
        let index: HashMap<&Sieve, usize> = all.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let op = |kind: Connective| -> Result<Vec<usize>> {
            let mut t = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let r = sieve_connective(poset, kind, &all[i], Some(&all[j]))?;
                    t[i * n + j] = index[&r];
                }
            }
            Ok(t)
        };
        let and = op(Connective::And)?;
        let or = op(Connective::Or)?;
        let imp = op(Connective::Implies)?;
        let neg = all
            .iter()
            .map(|s| Ok(index[&sieve_connective(poset, Connective::Not, s, None)?]))
            .collect::<Result<Vec<_>>>()?;
        let leq: Vec<bool> = (0..n * n)
            .map(|k| all[k / n].is_subset(&all[k % n]))
            .collect();
        let bottom = index[&Sieve::empty(poset, v)];
        let top = index[&Sieve::principal(poset, v)];
        let a = |i: usize, j: usize| and[i * n + j];
        let o = |i: usize, j: usize| or[i * n + j];

        let mut lattice = true;
        let mut distributive = true;
        let mut residuation = true;
        for i in 0..n {
            lattice &= a(i, i) == i && o(i, i) == i && a(i, top) == i && o(i, bottom) == i;
            for j in 0..n {
                lattice &= a(i, j) == a(j, i)
                    && o(i, j) == o(j, i)
                    && a(i, o(i, j)) == i
                    && o(i, a(i, j)) == i
                    && leq[i * n + j] == (a(i, j) == i);
                for k in 0..n {
                    lattice &= a(a(i, j), k) == a(i, a(j, k)) && o(o(i, j), k) == o(i, o(j, k));
                    distributive &= a(i, o(j, k)) == o(a(i, j), a(i, k));
                    residuation &= leq[a(k, i) * n + j] == leq[k * n + imp[i * n + j]];
                }
            }
        }
        let non_contradiction = (0..n).all(|i| a(i, neg[i]) == bottom);
        let failures: Vec<usize> = (0..n).filter(|&i| o(i, neg[i]) != top).collect();
        Ok(Self {
            sieves: n,
            lattice,
            distributive,
            residuation,
            non_contradiction,
            excluded_middle_failures: failures.len(),
            witness: failures
                .first()
                .map(|&i| (all[i].clone(), all[neg[i]].clone())),
        })
    }

    fn ok(&self) -> bool {
        self.lattice && self.distributive && self.residuation && self.non_contradiction
    }
}
