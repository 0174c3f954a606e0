use serde::Serialize;
use serde_json::{json, Map, Value};

use mumford_core::autgrp::{
    census_search, expected_order, full_group, grid_degree, structure_check, verify_preserves_equation,
};
use mumford_core::bounds::{admissible, aut_order_formula, bound_report, f_bound, genus_formula, ExactValue};
use mumford_core::curve::zeta::search_genus;
use mumford_core::curve::{
    count_affine, tower_count, verify_genus, CountMethod, CurveParams, GenusOptions,
};
use mumford_core::grouplab::lemma_check;
use mumford_core::schottky::{
    certify_discrete, freeness_check, freeness_matrix_count, normalizer_relations_check, SchottkyData,
    DEFAULT_WORD_BUDGET,
};
use mumford_core::{Error, Result};

use crate::{Command, CurveArgs, FieldArgs, Format, Method};

/// Work allowed for one census: group order times field size.
const CENSUS_WORK: u128 = 50_000_000;
const MAX_FREENESS_LENGTH: usize = 12;

pub enum Outcome {
    Done { value: Value, pass: bool },
    Error { message: String, partial: Option<Value> },
}

impl Outcome {
    fn from_report<T: Serialize>(report: &T, pass: bool) -> Outcome {
        Outcome::Done {
            value: serde_json::to_value(report).expect("reports serialize"),
            pass,
        }
    }

    pub fn render(&self, format: Format) -> String {
        let value = match self {
            Outcome::Done { value, .. } => value.clone(),
            Outcome::Error { message, partial } => {
                let mut m = Map::new();
                m.insert("error".into(), Value::String(message.clone()));
                if let Some(p) = partial {
                    m.insert("partial".into(), p.clone());
                }
                Value::Object(m)
            }
        };
        match format {
            Format::Json => format!("{value}\n"),
            Format::Tsv => tsv(&value),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn tsv(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
            out.push_str(&keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join("\t"));
            out.push('\n');
            for row in rows {
                let obj = row.as_object().unwrap();
                let cells: Vec<String> = keys.iter().map(|k| obj.get(*k).map(cell).unwrap_or_default()).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
        Value::Object(obj) => {
            for (k, v) in obj {
                out.push_str(&format!("{k}\t{}\n", cell(v)));
            }
        }
        other => {
            out.push_str(&cell(other));
            out.push('\n');
        }
    }
    out
}

fn curve_params(c: &CurveArgs) -> Result<CurveParams> {
    CurveParams::from_literal(c.field.p, c.field.t, &c.c)
}

pub fn run(cmd: &Command) -> Outcome {
    match dispatch(cmd) {
        Ok(o) => o,
        Err(e) => Outcome::Error {
            message: e.to_string(),
            partial: None,
        },
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    Ok(match cmd {
        Command::Bound { g, from, to } => match (g, from, to) {
            (Some(g), _, _) => Outcome::from_report(&bound_report(*g)?, true),
            (None, Some(a), Some(b)) => {
                let rows = (*a..=*b).map(bound_report).collect::<Result<Vec<_>>>()?;
                Outcome::from_report(&rows, true)
            }
            _ => return Err(Error::InvalidParameter("give --g or --from/--to".into())),
        },
        Command::Admissible { g, p } => {
            let t = admissible(*g, *p)?;
            Outcome::from_report(&json!({ "t": t }), t.is_some())
        }
        Command::CurveCount {
            curve,
            m,
            method,
            budget,
        } => {
            let params = curve_params(curve)?;
            let method = match method {
                Method::Naive => CountMethod::Naive,
                Method::Trace => CountMethod::Trace,
            };
            let affine = count_affine(&params, *m, method, *budget)?;
            #[derive(Serialize)]
            struct Count {
                p: u64,
                t: usize,
                c: String,
                m: usize,
                #[serde(rename = "N")]
                n: u64,
                affine: u64,
                method: CountMethod,
            }
            let report = Count {
                p: params.p(),
                t: params.t(),
                c: params.c().to_string(),
                m: *m,
                n: affine + 2 * params.q(),
                affine,
                method,
            };
            Outcome::from_report(&report, true)
        }
        Command::CurveZeta {
            curve,
            budget,
            search_genus: search,
        } => {
            let params = curve_params(curve)?;
            let opts = GenusOptions {
                budget: *budget,
                ..GenusOptions::default()
            };
            let report = verify_genus(&params, &opts)?;
            let mut value = serde_json::to_value(&report).expect("serializes");
            let mut pass = report.pass;
            if let Some(g_max) = search {
                let s = search_genus(&params, *g_max, *budget)?;
                pass &= s.genus == Some(report.g);
                value["genus_search"] = serde_json::to_value(&s).expect("serializes");
                value["pass"] = Value::Bool(pass);
            }
            Outcome::Done { value, pass }
        }
        Command::CurveTowerCheck { curve, m, budget } => {
            let params = curve_params(curve)?;
            let tower = tower_count(&params, *m, *budget)?;
            let n = count_affine(&params, *m, CountMethod::Trace, *budget)? + 2 * params.q();
            let pass = tower.total == n && tower.at_infinity == params.q() && tower.at_zero == params.q();
            let report = json!({
                "p": params.p(),
                "t": params.t(),
                "c": params.c().to_string(),
                "m": m,
                "tower": tower,
                "N": n,
                "pass": pass,
            });
            Outcome::from_report(&report, pass)
        }
        Command::AutOrder { field, budget } => {
            let (value, pass) = aut_order(field, *budget)?;
            Outcome::Done { value, pass }
        }
        Command::AutVerify { curve, m, budget } => {
            let (value, pass) = aut_verify(curve, *m, *budget)?;
            Outcome::Done { value, pass }
        }
        Command::AutStructure { field, budget } => {
            let g = full_group(field.p, field.t, *budget)?;
            let r = structure_check(&g)?;
            Outcome::from_report(&r, r.pass)
        }
        Command::AutCensus { curve, m_max, budget } => {
            let params = curve_params(curve)?;
            let g = full_group(params.p(), params.t(), *budget)?;
            let r = census_search(&params, &g, *m_max, *budget)?;
            Outcome::from_report(&r, r.pass)
        }
        Command::SchottkyCertify { field, c_param } => {
            let data = SchottkyData::build_from_literal(field.p, field.t, c_param)?;
            let cert = certify_discrete(&data)?;
            Outcome::from_report(&cert, cert.accepted)
        }
        Command::SchottkyFreeness {
            field,
            c_param,
            length,
            budget,
        } => {
            let data = SchottkyData::build_from_literal(field.p, field.t, c_param)?;
            let r = freeness_check(&data, *length, *budget)?;
            Outcome::from_report(&r, r.pass)
        }
        Command::LemmaCheck { q } => {
            let r = lemma_check(*q)?;
            Outcome::from_report(&r, r.pass)
        }
        Command::All { curve, budget } => run_all(curve, *budget),
    })
}

fn aut_order(field: &FieldArgs, budget: u128) -> Result<(Value, bool)> {
    let g = full_group(field.p, field.t, budget)?;
    let genus = genus_formula(field.p, field.t as u32)?;
    let formula = aut_order_formula(field.p, field.t as u32)?;
    let f = f_bound(genus as u64)?;
    let pass = g.order() as u128 == expected_order(field.p, field.t)
        && g.order() as u128 == formula
        && f == ExactValue::Integer(formula);
    let value = json!({
        "p": field.p,
        "t": field.t,
        "order": g.order(),
        "expected": formula,
        "g": genus,
        "F_g": f,
        "pass": pass,
    });
    Ok((value, pass))
}

fn aut_verify(curve: &CurveArgs, m: Option<usize>, budget: u128) -> Result<(Value, bool)> {
    let params = curve_params(curve)?;
    let g = full_group(params.p(), params.t(), budget)?;
    let m = m.unwrap_or_else(|| grid_degree(params.q()));
    let mut failures = Vec::new();
    for phi in g.elements() {
        if !verify_preserves_equation(phi, &params, m)? {
            failures.push(phi.to_string());
        }
    }
    let pass = failures.is_empty();
    let value = json!({
        "p": params.p(),
        "t": params.t(),
        "c": params.c().to_string(),
        "m": m,
        "grid_side": 2 * params.q() + 1,
        "maps_checked": g.order(),
        "failures": failures,
        "pass": pass,
    });
    Ok((value, pass))
}

#[derive(Serialize)]
struct Section {
    name: &'static str,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<Value>,
}

fn to_value<T: Serialize>(r: &T) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn run_all(curve: &CurveArgs, budget: u128) -> Outcome {
    let (p, t) = (curve.field.p, curve.field.t);
    let mut sections = Vec::new();
    let mut push = |name: &'static str, r: Result<(Value, bool)>| match r {
        Ok((report, pass)) => sections.push(Section {
            name,
            pass,
            error: None,
            report: Some(report),
        }),
        Err(e) => sections.push(Section {
            name,
            pass: false,
            error: Some(e.to_string()),
            report: None,
        }),
    };

    push("bound", (|| {
        let g = genus_formula(p, t as u32)? as u64;
        let f = f_bound(g)?;
        // 12(g - 1) is only meaningful from genus 2 on
        let b = if g >= 2 { Some(bound_report(g)?) } else { None };
        let adm = admissible(g, p)?;
        let pass = adm == Some(t as u32) && f == ExactValue::Integer(aut_order_formula(p, t as u32)?);
        Ok((json!({ "g": g, "F_g": f, "bound": b, "admissible_t": adm }), pass))
    })());
    push("aut-order", aut_order(&curve.field, DEFAULT_WORD_BUDGET));
    push("aut-structure", (|| {
        let r = structure_check(&full_group(p, t, DEFAULT_WORD_BUDGET)?)?;
        Ok((to_value(&r), r.pass))
    })());
    push("aut-verify", aut_verify(curve, None, DEFAULT_WORD_BUDGET));

    let schottky = SchottkyData::build_from_literal(p, t, "T^-1");
    push("schottky-certify", (|| {
        let data = schottky.clone()?;
        let cert = certify_discrete(&data)?;
        Ok((to_value(&cert), cert.accepted))
    })());
    push("generator-count", (|| {
        let data = schottky.clone()?;
        let g = genus_formula(p, t as u32)?;
        let n = data.comm_gens.len();
        Ok((json!({ "comm_gens": n, "genus": g }), n as u128 == g))
    })());
    push("schottky-normalizer", (|| {
        let r = normalizer_relations_check(&schottky.clone()?)?;
        Ok((to_value(&r), r.pass))
    })());
    push("schottky-freeness", (|| {
        let data = schottky.clone()?;
        let len = (1..=MAX_FREENESS_LENGTH)
            .take_while(|&l| freeness_matrix_count(data.rank(), l) <= DEFAULT_WORD_BUDGET)
            .last()
            .ok_or(Error::BudgetExceeded {
                needed: freeness_matrix_count(data.rank(), 1),
                budget: DEFAULT_WORD_BUDGET,
            })?;
        let r = freeness_check(&data, len, DEFAULT_WORD_BUDGET)?;
        Ok((to_value(&r), r.pass))
    })());
    push("aut-census", (|| {
        let params = curve_params(curve)?;
        let g = full_group(p, t, DEFAULT_WORD_BUDGET)?;
        let census_budget = CENSUS_WORK / g.order() as u128;
        let r = census_search(&params, &g, 12, census_budget)?;
        Ok((to_value(&r), r.pass))
    })());
    push("curve-zeta", (|| {
        let params = curve_params(curve)?;
        let opts = GenusOptions {
            budget,
            ..GenusOptions::default()
        };
        let r = verify_genus(&params, &opts)?;
        Ok((to_value(&r), r.pass))
    })());
    let q = (p as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
    if q <= 4 {
        push("lemma-check", (|| {
            let r = lemma_check(q as u64)?;
            Ok((to_value(&r), r.pass))
        })());
    }

    let pass = sections.iter().all(|s| s.pass);
    let errored = sections.iter().any(|s| s.error.is_some());
    let report = json!({ "p": p, "t": t, "c": curve.c, "sections": sections, "pass": pass });
    if errored {
        Outcome::Error {
            message: "some sections could not run".into(),
            partial: Some(report),
        }
    } else {
        Outcome::Done { value: report, pass }
    }
}
