//! Bound reports: human tables and canonical machine JSON.
//!
//! The JSON form uses sorted object keys and integers only, so parsing an
//! emitted report and re-serializing it is byte-identical.

use serde_json::{json, Map, Value};

use crate::engine::{AliasReport, Endpoint, Interval, QuantityId, State};
use crate::problem::{resolve_quantity, Problem};
use crate::Error;

pub struct QueryOutcome {
    pub id: QuantityId,
    pub quantity: String,
    pub lo: u32,
    pub hi: Option<u32>,
}

pub struct BoundReport {
    pub outcomes: Vec<QueryOutcome>,
    pub aliases: Vec<AliasReport>,
    pub r_max: u32,
}

/// Evaluates every query of a solved problem and collects alias reports
/// for each map mentioned in the queries.
pub fn bound_report(state: &State, problem: &Problem) -> Result<BoundReport, Error> {
    let mut outcomes = Vec::new();
    let mut alias_maps = Vec::new();
    for qr in &problem.queries {
        let id = resolve_quantity(state, qr)?;
        let iv = state.query(id)?;
        outcomes.push(QueryOutcome {
            id,
            quantity: state.render_quantity(id),
            lo: iv.lo,
            hi: iv.hi,
        });
        if let QuantityId::TCrs(m, _, _) | QuantityId::HTCrs(m, _, _) = id {
            if !alias_maps.contains(&m) {
                alias_maps.push(m);
            }
        }
    }
    let aliases = alias_maps
        .into_iter()
        .map(|m| state.alias_report(m))
        .collect();
    Ok(BoundReport {
        outcomes,
        aliases,
        r_max: state.r_max(),
    })
}

fn hi_value(hi: Option<u32>) -> Value {
    match hi {
        Some(h) => json!(h),
        None => Value::Null,
    }
}

fn trace_value(state: &State, iv: &Interval) -> Value {
    let entries: Vec<Value> = iv
        .trace
        .iter()
        .map(|t| {
            let premises: Vec<Value> = t
                .premises
                .iter()
                .map(|(q, lo, hi)| {
                    let mut m = Map::new();
                    m.insert("hi".into(), hi_value(*hi));
                    m.insert("lo".into(), json!(lo));
                    m.insert("quantity".into(), json!(state.render_quantity(*q)));
                    Value::Object(m)
                })
                .collect();
            let mut m = Map::new();
            m.insert("anchor".into(), json!(t.statement));
            m.insert("premises".into(), Value::Array(premises));
            m.insert(
                "produced".into(),
                json!(match t.produced {
                    Endpoint::Lo => format!("lo={}", t.value),
                    Endpoint::Hi => format!("hi={}", t.value),
                }),
            );
            m.insert("rule".into(), json!(t.rule));
            Value::Object(m)
        })
        .collect();
    Value::Array(entries)
}

fn alias_value(report: &AliasReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let mut m = Map::new();
            m.insert("equality".into(), json!(row.equality));
            m.insert("hi".into(), hi_value(row.hi));
            m.insert("lo".into(), json!(row.lo));
            m.insert("names".into(), json!(row.names));
            m.insert("r".into(), json!(row.r));
            Value::Object(m)
        })
        .collect();
    let mut m = Map::new();
    m.insert("map".into(), json!(report.map));
    m.insert("rows".into(), Value::Array(rows));
    m.insert("unified".into(), json!(report.unified));
    Value::Object(m)
}

/// The machine report. Canonical: objects carry their keys in sorted
/// order and every number is an integer.
pub fn bound_report_json(state: &State, report: &BoundReport, include_trace: bool) -> Value {
    let queries: Vec<Value> = report
        .outcomes
        .iter()
        .map(|o| {
            let mut m = Map::new();
            m.insert("hi".into(), hi_value(o.hi));
            m.insert("lo".into(), json!(o.lo));
            m.insert("quantity".into(), json!(o.quantity));
            if include_trace {
                let iv = state.query(o.id).expect("queried above");
                m.insert("trace".into(), trace_value(state, iv));
            }
            Value::Object(m)
        })
        .collect();
    let mut root = Map::new();
    root.insert(
        "aliases".into(),
        Value::Array(report.aliases.iter().map(alias_value).collect()),
    );
    root.insert("queries".into(), Value::Array(queries));
    root.insert("r_max".into(), json!(report.r_max));
    Value::Object(root)
}

fn render_interval(lo: u32, hi: Option<u32>) -> String {
    match hi {
        Some(h) => format!("[{lo}, {h}]"),
        None => format!("[{lo}, inf)"),
    }
}

pub fn bound_report_human(state: &State, report: &BoundReport, include_trace: bool) -> String {
    let mut out = String::new();
    for o in &report.outcomes {
        out.push_str(&format!(
            "{} = {}\n",
            o.quantity,
            render_interval(o.lo, o.hi)
        ));
        if include_trace {
            let iv = state.query(o.id).expect("queried above");
            for t in &iv.trace {
                let endpoint = match t.produced {
                    Endpoint::Lo => format!("lo={}", t.value),
                    Endpoint::Hi => format!("hi={}", t.value),
                };
                out.push_str(&format!("  {endpoint:>8}  {:<6} {}\n", t.rule, t.statement));
                for (q, lo, hi) in &t.premises {
                    out.push_str(&format!(
                        "            . {} was {}\n",
                        state.render_quantity(*q),
                        render_interval(*lo, *hi)
                    ));
                }
            }
        }
    }
    for alias in &report.aliases {
        if alias.unified {
            out.push_str(&format!(
                "aliases of {} (fibration with homotopy section):\n",
                alias.map
            ));
            for row in &alias.rows {
                out.push_str(&format!(
                    "  r={}: {} = {}\n",
                    row.r,
                    row.names.join(" = "),
                    render_interval(row.lo, row.hi)
                ));
            }
        } else {
            out.push_str(&format!("comparison chain for {}:\n", alias.map));
            for row in &alias.rows {
                if let Some(((hlo, hhi), (tlo, thi))) = row.chain {
                    out.push_str(&format!(
                        "  r={}: {} <= {} <= {} with HTC {} and TC {}\n",
                        row.r,
                        row.names[0],
                        row.names[1],
                        row.names[2],
                        render_interval(hlo, hhi),
                        render_interval(tlo, thi)
                    ));
                }
            }
        }
    }
    out
}
