//! JSON file formats for lattices, models, counterexamples and reports.
//!
//! Output goes through [`serde_json::Value`], whose object map keeps keys
//! sorted, so identical inputs serialize to identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::harness::{CaseFailure, Divergence, K5Report, SuiteReport, TheoremReport};
use crate::kripke::{Frame, KripkeModel, Valuation};
use crate::lattice::{validate_lattice, ElemSet, ImpMode, ImplicationTable, Lattice, Matrix};
use crate::search::CounterexampleReport;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    #[serde(default)]
    name: String,
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<(String, String)>,
    neg: Option<BTreeMap<String, String>>,
    imp: Option<ImpFile>,
    designated: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImpFile {
    mode: String,
    table: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    lattice: Value,
    worlds: Vec<String>,
    #[serde(default)]
    rel: Vec<(String, String)>,
    #[serde(default)]
    valuation: BTreeMap<String, BTreeMap<String, String>>,
}

/// A parsed lattice file. `designated` is absent when the file has no
/// `"designated"` key.
#[derive(Clone, Debug)]
pub struct LatticeDoc {
    pub name: String,
    pub lattice: Lattice,
    pub designated: Option<ElemSet>,
}

impl LatticeDoc {
    pub fn matrix(&self) -> Result<Matrix> {
        let d = self
            .designated
            .ok_or_else(|| Error::Format("lattice file has no \"designated\" set".into()))?;
        Matrix::new(self.lattice.clone(), d)
    }
}

fn format_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn parse_lattice(text: &str) -> Result<LatticeDoc> {
    lattice_from_value(serde_json::from_str(text).map_err(format_err)?)
}

pub fn lattice_from_value(value: Value) -> Result<LatticeDoc> {
    let file: LatticeFile = serde_json::from_value(value).map_err(format_err)?;
    let mut lattice = validate_lattice(&file.elements, &file.leq)?;
    if let Some(neg) = &file.neg {
        let n = lattice.size();
        if neg.len() != n {
            return Err(Error::TableShape {
                op: "neg",
                expected: n,
                got: neg.len(),
            });
        }
        let table = lattice
            .elements()
            .map(|a| {
                let target = neg
                    .get(lattice.name(a))
                    .ok_or_else(|| Error::Format(format!("\"neg\" has no entry for `{}`", lattice.name(a))))?;
                lattice.parse_elem(target)
            })
            .collect::<Result<Vec<_>>>()?;
        lattice = lattice.with_neg(table)?;
    }
    if let Some(imp) = &file.imp {
        lattice = match (imp.mode.as_str(), &imp.table) {
            ("material", None) => lattice.with_imp_mode(ImpMode::Material)?,
            ("deductive_eq1", None) => lattice.with_imp_mode(ImpMode::DeductiveEq1)?,
            ("table", Some(rows)) => {
                let table = imp_table(&lattice, rows)?;
                lattice.with_imp(table)?
            }
            ("table", None) => return Err(Error::Format("imp mode \"table\" needs a \"table\"".into())),
            ("material" | "deductive_eq1", Some(_)) => {
                return Err(Error::Format(format!("imp mode \"{}\" takes no \"table\"", imp.mode)))
            }
            (other, _) => return Err(Error::Format(format!("unknown imp mode \"{other}\""))),
        };
    }
    let designated = file
        .designated
        .map(|names| names.iter().map(|n| lattice.parse_elem(n)).collect::<Result<ElemSet>>())
        .transpose()?;
    if let Some(d) = designated {
        // rejects sets that are not upward closed
        Matrix::new(lattice.clone(), d)?;
    }
    Ok(LatticeDoc {
        name: file.name,
        lattice,
        designated,
    })
}

fn imp_table(l: &Lattice, rows: &BTreeMap<String, BTreeMap<String, String>>) -> Result<ImplicationTable> {
    let n = l.size();
    let mut table = Vec::with_capacity(n * n);
    for a in l.elements() {
        let row = rows
            .get(l.name(a))
            .ok_or_else(|| Error::Format(format!("\"imp.table\" has no row for `{}`", l.name(a))))?;
        if row.len() != n {
            return Err(Error::TableShape {
                op: "imp",
                expected: n,
                got: row.len(),
            });
        }
        for b in l.elements() {
            let v = row.get(l.name(b)).ok_or_else(|| {
                Error::Format(format!("\"imp.table\" has no entry for `{}`, `{}`", l.name(a), l.name(b)))
            })?;
            table.push(l.parse_elem(v)?);
        }
    }
    if rows.len() != n {
        return Err(Error::TableShape {
            op: "imp",
            expected: n,
            got: rows.len(),
        });
    }
    ImplicationTable::custom(n, table)
}

/// Standard lattice JSON; `leq` lists covering pairs only.
pub fn lattice_to_value(name: &str, l: &Lattice, designated: Option<ElemSet>) -> Value {
    let mut obj = Map::new();
    obj.insert("name".into(), json!(name));
    obj.insert("elements".into(), json!(l.names()));
    let covers: Vec<[&str; 2]> = l.covers().into_iter().map(|(a, b)| [l.name(a), l.name(b)]).collect();
    obj.insert("leq".into(), json!(covers));
    if let Some(neg) = l.neg_table() {
        let m: Map<String, Value> = l
            .elements()
            .map(|a| (l.name(a).to_string(), json!(l.name(neg[a.index()]))))
            .collect();
        obj.insert("neg".into(), Value::Object(m));
    }
    if let Some(imp) = l.imp_table() {
        let mut i = Map::new();
        i.insert("mode".into(), json!(imp.mode().as_str()));
        if imp.mode() == ImpMode::Custom {
            let rows: Map<String, Value> = l
                .elements()
                .map(|a| {
                    let row: Map<String, Value> = l
                        .elements()
                        .map(|b| (l.name(b).to_string(), json!(l.name(imp.get(a, b)))))
                        .collect();
                    (l.name(a).to_string(), Value::Object(row))
                })
                .collect();
            i.insert("table".into(), Value::Object(rows));
        }
        obj.insert("imp".into(), Value::Object(i));
    }
    if let Some(d) = designated {
        obj.insert("designated".into(), json!(names_of(l, d)));
    }
    Value::Object(obj)
}

fn names_of(l: &Lattice, set: ElemSet) -> Vec<&str> {
    set.iter().map(|e| l.name(e)).collect()
}

/// Parses a model file. A string `"lattice"` is a path, resolved against
/// `base_dir`.
pub fn parse_model(text: &str, base_dir: &Path) -> Result<(LatticeDoc, KripkeModel)> {
    let file: ModelFile = serde_json::from_str(text).map_err(format_err)?;
    let doc = match file.lattice {
        Value::String(path) => {
            let path = base_dir.join(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
            parse_lattice(&text)?
        }
        v @ Value::Object(_) => lattice_from_value(v)?,
        _ => return Err(Error::Format("\"lattice\" must be an object or a path".into())),
    };
    let frame = Frame::from_names(&file.worlds, &file.rel)?;
    let mut valuation = Valuation::new(frame.size());
    for (world, vars) in &file.valuation {
        let w = frame.world(world)?;
        for (var, value) in vars {
            valuation.set(w, var, doc.lattice.parse_elem(value)?);
        }
    }
    let model = KripkeModel::new(frame, doc.lattice.clone(), valuation)?;
    Ok((doc, model))
}

pub fn model_to_value(model: &KripkeModel, designated: Option<ElemSet>) -> Value {
    let l = &model.lattice;
    let f = &model.frame;
    let rel: Vec<[&str; 2]> = f
        .rel()
        .iter()
        .map(|&(a, b)| [f.world_name(a), f.world_name(b)])
        .collect();
    let valuation: Map<String, Value> = (0..f.size())
        .map(|w| {
            let vars: Map<String, Value> = model
                .valuation
                .vars()
                .filter_map(|x| model.valuation.get(w, x).map(|e| (x.to_string(), json!(l.name(e)))))
                .collect();
            (f.world_name(w).to_string(), Value::Object(vars))
        })
        .collect();
    json!({
        "lattice": lattice_to_value("", l, designated),
        "worlds": f.worlds(),
        "rel": rel,
        "valuation": valuation,
    })
}

/// The model format extended with the falsified formula, the world, its
/// value there, the designated set and the box reading.
pub fn counterexample_to_value(r: &CounterexampleReport) -> Value {
    let l = &r.model.lattice;
    let mut v = model_to_value(&r.model, Some(r.designated.set()));
    let obj = v.as_object_mut().expect("model is an object");
    obj.insert("formula".into(), json!(r.formula.to_string()));
    obj.insert("world".into(), json!(r.model.frame.world_name(r.world)));
    obj.insert("value".into(), json!(l.name(r.value)));
    obj.insert("designated".into(), json!(names_of(l, r.designated.set())));
    obj.insert("box".into(), json!(r.mode.as_str()));
    v
}

fn matrix_summary(m: &Matrix) -> Value {
    lattice_to_value("", &m.lattice, Some(m.designated.set()))
}

fn failure_to_value(f: &CaseFailure) -> Value {
    json!({
        "matrix": matrix_summary(&f.matrix),
        "structural": f.structural,
        "semantic": f.semantic,
        "reason": f.reason,
        "counterexample": f.counterexample.as_ref().map(counterexample_to_value),
    })
}

fn divergence_to_value(d: &Divergence) -> Value {
    json!({
        "reading": d.reading,
        "matrix": matrix_summary(&d.matrix),
        "structural": d.structural,
        "semantic": d.semantic,
    })
}

pub fn theorem_report_to_value(r: &TheoremReport) -> Value {
    json!({
        "id": r.id.as_str(),
        "universe": r.universe,
        "cases": r.cases,
        "witnesses_checked": r.witnesses,
        "status": if r.passed() { "pass" } else { "fail" },
        "failures": r.failures.iter().map(failure_to_value).collect::<Vec<_>>(),
        "divergences": r.divergences.iter().map(divergence_to_value).collect::<Vec<_>>(),
        "bounded_only": r.bounded_only,
        "notes": r.notes,
    })
}

pub fn k5_report_to_value(r: &K5Report) -> Value {
    json!({
        "id": "k5_regression",
        "mutated": r.mutated,
        "world_bound": r.world_bound,
        "linear_outside": r.linear_outside,
        "status": if r.passed() { "pass" } else { "fail" },
        "counterexample": r.counterexample.as_ref().map(counterexample_to_value),
    })
}

pub fn suite_to_value(r: &SuiteReport) -> Value {
    json!({
        "theorems": r.theorems.iter().map(theorem_report_to_value).collect::<Vec<_>>(),
        "k5_regression": k5_report_to_value(&r.k5),
        "status": if r.passed() { "pass" } else { "fail" },
    })
}

pub fn render(value: &Value, compact: bool) -> String {
    if compact {
        value.to_string()
    } else {
        serde_json::to_string_pretty(value).expect("Value always serializes")
    }
}
