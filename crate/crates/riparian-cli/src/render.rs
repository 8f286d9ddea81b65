//! Output rendering: aligned tables for people, CSV for spreadsheets,
//! JSON for machines. JSON output is stable under parse + re-render.

use clap::ValueEnum;
use serde_json::{json, Value};

use riparian::analysis::{round2, SweepResult};
use riparian::axioms::AxiomReport;
use riparian::basin::{BasinAllocation, BasinGraph};
use riparian::problem::Problem;
use riparian::quantity::Quantity;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Fractions in exact mode, shortest round-trip decimals otherwise.
fn value_text<Q: Quantity>(q: &Q, exact: bool) -> String {
    if exact {
        q.repr()
    } else {
        format!("{}", q.to_f64())
    }
}

/// Two-decimal, half-up — the convention the published tables use.
fn cell_text<Q: Quantity>(q: &Q, exact: bool) -> String {
    if exact {
        q.repr()
    } else {
        format!("{:.2}", round2(q.to_f64()))
    }
}

fn json_value<Q: Quantity>(q: &Q, exact: bool) -> Value {
    if exact {
        Value::String(q.repr())
    } else {
        serde_json::Number::from_f64(q.to_f64()).map(Value::Number).unwrap_or(Value::Null)
    }
}

/// Left-align every column to its widest entry.
fn aligned(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<width$}", width = widths[c]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn allocation<Q: Quantity>(
    agents: &[String],
    problem: &Problem<Q>,
    awards: &[Q],
    rule: &str,
    exact: bool,
    format: Format,
) -> String {
    match format {
        Format::Table => {
            let mut rows = vec![vec!["agent".into(), "claim".into(), "award".into()]];
            for (i, agent) in agents.iter().enumerate() {
                rows.push(vec![
                    agent.clone(),
                    cell_text(problem.claim(i), exact),
                    cell_text(&awards[i], exact),
                ]);
            }
            rows.push(vec![
                "total".into(),
                cell_text(problem.aggregate(), exact),
                cell_text(problem.budget(), exact),
            ]);
            format!("rule: {rule}\n{}", aligned(&rows))
        }
        Format::Csv => {
            let mut out = String::from("agent,claim,award\n");
            for (i, agent) in agents.iter().enumerate() {
                out.push_str(&format!(
                    "{agent},{},{}\n",
                    value_text(problem.claim(i), exact),
                    value_text(&awards[i], exact)
                ));
            }
            out
        }
        Format::Json => {
            let value = json!({
                "rule": rule,
                "exact": exact,
                "agents": agents,
                "claims": problem.claims().iter().map(|c| json_value(c, exact)).collect::<Vec<_>>(),
                "budget": json_value(problem.budget(), exact),
                "awards": awards.iter().map(|a| json_value(a, exact)).collect::<Vec<_>>(),
            });
            pretty(&value)
        }
    }
}

pub fn basin_allocation<Q: Quantity>(
    graph: &BasinGraph<Q>,
    result: &BasinAllocation<Q>,
    rule: &str,
    exact: bool,
    format: Format,
) -> String {
    let ids: Vec<String> = graph.nodes().iter().map(|n| n.id.clone()).collect();
    match format {
        Format::Table => {
            let mut rows =
                vec![vec!["node".into(), "claim".into(), "retained".into(), "award".into()]];
            for node in graph.nodes() {
                rows.push(vec![
                    node.id.clone(),
                    cell_text(&node.claim, exact),
                    cell_text(&result.retained()[&node.id], exact),
                    cell_text(&result.awards()[&node.id], exact),
                ]);
            }
            rows.push(vec![
                "total".into(),
                cell_text(graph.aggregate(), exact),
                cell_text(graph.aggregate(), exact),
                cell_text(graph.budget(), exact),
            ]);
            format!("rule: {rule}\n{}", aligned(&rows))
        }
        Format::Csv => {
            let mut out = String::from("node,claim,retained,award\n");
            for node in graph.nodes() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    node.id,
                    value_text(&node.claim, exact),
                    value_text(&result.retained()[&node.id], exact),
                    value_text(&result.awards()[&node.id], exact)
                ));
            }
            out
        }
        Format::Json => {
            let value = json!({
                "rule": rule,
                "exact": exact,
                "nodes": ids,
                "claims": graph.nodes().iter().map(|n| json_value(&n.claim, exact)).collect::<Vec<_>>(),
                "budget": json_value(graph.budget(), exact),
                "retained": graph.nodes().iter().map(|n| json_value(&result.retained()[&n.id], exact)).collect::<Vec<_>>(),
                "awards": graph.nodes().iter().map(|n| json_value(&result.awards()[&n.id], exact)).collect::<Vec<_>>(),
            });
            pretty(&value)
        }
    }
}

/// Award paths over the γ grid: `gamma` column then one column per agent.
pub fn sweep_csv(agents: &[String], sweep: &SweepResult<f64>) -> String {
    let mut out = String::from("gamma");
    for agent in agents {
        out.push(',');
        out.push_str(agent);
    }
    out.push('\n');
    for (gamma, alloc) in sweep.grid.iter().zip(&sweep.awards) {
        out.push_str(&format!("{gamma}"));
        for award in alloc.awards() {
            out.push_str(&format!(",{award}"));
        }
        out.push('\n');
    }
    out
}

pub fn reports_json(reports: &[AxiomReport]) -> String {
    pretty(&Value::Array(reports.iter().map(AxiomReport::to_json).collect()))
}

/// The one JSON printer: parse + re-render through this stays byte-identical.
pub fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON rendering cannot fail");
    text.push('\n');
    text
}
