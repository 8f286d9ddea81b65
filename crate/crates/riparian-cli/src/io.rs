//! File formats: claims CSV (`agent,claim`), basin JSON
//! (`{nodes, edges, budget}`), and the embedded-dataset dump.
//!
//! Claim and budget text is kept verbatim until a backend is chosen, so
//! exact mode parses the file's decimals losslessly.

use std::collections::HashSet;
use std::path::Path;

use serde::Deserialize;
use serde_json::json;

use riparian::basin::{BasinGraph, BasinNode};
use riparian::datasets;
use riparian::quantity::Quantity;

use crate::{usage, CliError};

/// A parsed claims CSV: agent names and their claim text, file order.
pub struct ClaimsFile {
    pub agents: Vec<String>,
    pub claims: Vec<String>,
}

pub fn read_claims(path: &Path) -> Result<ClaimsFile, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if headers.iter().collect::<Vec<_>>() != ["agent", "claim"] {
        return Err(usage(format!(
            "{}: header must be `agent,claim`, found `{}`",
            path.display(),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut agents = Vec::new();
    let mut claims = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let agent = record.get(0).unwrap_or("").trim().to_string();
        let claim = record.get(1).unwrap_or("").trim().to_string();
        if agent.is_empty() {
            return Err(usage(format!("{}: empty agent id", path.display())));
        }
        if !seen.insert(agent.clone()) {
            return Err(usage(format!("{}: duplicate agent id `{agent}`", path.display())));
        }
        match claim.parse::<f64>() {
            Ok(value) if value >= 0.0 && value.is_finite() => {}
            _ => {
                return Err(usage(format!(
                    "{}: claim for `{agent}` must be a non-negative decimal, found `{claim}`",
                    path.display()
                )))
            }
        }
        agents.push(agent);
        claims.push(claim);
    }
    if agents.is_empty() {
        return Err(usage(format!("{}: needs at least one claims row", path.display())));
    }
    Ok(ClaimsFile { agents, claims })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BasinFileJson {
    nodes: Vec<BasinNodeJson>,
    edges: Vec<(String, String)>,
    budget: serde_json::Number,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BasinNodeJson {
    id: String,
    claim: serde_json::Number,
    #[serde(default)]
    gamma: Option<serde_json::Number>,
}

pub fn read_basin<Q: Quantity>(path: &Path) -> Result<BasinGraph<Q>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let file: BasinFileJson = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let parse = |label: &str, number: &serde_json::Number| -> Result<Q, CliError> {
        Q::from_decimal_str(&number.to_string())
            .map_err(|e| usage(format!("{}: {label}: {e}", path.display())))
    };
    let mut nodes = Vec::with_capacity(file.nodes.len());
    for node in &file.nodes {
        let claim = parse(&format!("claim of `{}`", node.id), &node.claim)?;
        let mut built = BasinNode::new(node.id.clone(), claim);
        if let Some(gamma) = &node.gamma {
            built = built.with_gamma(parse(&format!("gamma of `{}`", node.id), gamma)?);
        }
        nodes.push(built);
    }
    let budget = parse("budget", &file.budget)?;
    BasinGraph::new(nodes, &file.edges, budget)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Write one claims CSV.
fn write_claims_csv(path: &Path, agents: &[&str], claims: &[String]) -> Result<(), CliError> {
    let mut out = String::from("agent,claim\n");
    for (agent, claim) in agents.iter().zip(claims) {
        out.push_str(&format!("{agent},{claim}\n"));
    }
    std::fs::write(path, out).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Serialize an integer-claims basin fixture in the BasinFile schema.
fn basin_json(claims: &[i64], edges: &[(&str, &str)], budget: i64) -> String {
    let nodes: Vec<_> = claims
        .iter()
        .enumerate()
        .map(|(i, c)| json!({ "id": (i + 1).to_string(), "claim": c }))
        .collect();
    let edges: Vec<_> = edges.iter().map(|(f, t)| json!([f, t])).collect();
    let value = json!({ "nodes": nodes, "edges": edges, "budget": budget });
    format!("{}\n", serde_json::to_string_pretty(&value).expect("static fixture"))
}

/// Write the embedded datasets as ready-to-use input files.
pub fn dump_data(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    let own = |strings: &[&str]| strings.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let ints = |values: &[i64]| values.iter().map(|v| v.to_string()).collect::<Vec<_>>();

    let cities: Vec<&str> = datasets::CITY_NAMES.to_vec();
    let mut wrote = Vec::new();
    let mut claims_file = |name: &str, agents: &[&str], claims: Vec<String>, budget: &str| {
        let path = dir.join(name);
        write_claims_csv(&path, agents, &claims)?;
        wrote.push(format!("{} ({} agents; published budget {budget})", name, agents.len()));
        Ok::<(), CliError>(())
    };

    claims_file("tuojiang.csv", &cities, own(&datasets::BASE_CLAIMS), datasets::BASE_BUDGET)?;
    claims_file(
        "tuojiang_equalized.csv",
        &cities,
        own(&datasets::EQUALIZED_CLAIMS),
        datasets::BASE_BUDGET,
    )?;
    claims_file(
        "tuojiang_swapped.csv",
        &cities,
        own(&datasets::SWAPPED_CLAIMS),
        datasets::BASE_BUDGET,
    )?;
    let chain_agents: Vec<String> =
        (1..=datasets::WORKED_CHAIN_CLAIMS.len()).map(|i| i.to_string()).collect();
    let chain_refs: Vec<&str> = chain_agents.iter().map(String::as_str).collect();
    claims_file(
        "example1.csv",
        &chain_refs,
        ints(&datasets::WORKED_CHAIN_CLAIMS),
        &datasets::WORKED_CHAIN_BUDGET.to_string(),
    )?;
    for (claims, budget) in datasets::SMALL_CHAINS {
        let digits: String = claims.iter().map(|c| c.to_string()).collect();
        let agents: Vec<String> = (1..=claims.len()).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = agents.iter().map(String::as_str).collect();
        claims_file(&format!("chain_{digits}.csv"), &refs, ints(claims), &budget.to_string())?;
    }

    for (name, claims, edges, budget) in [
        (
            "case_b.json",
            &datasets::BRANCHING_CLAIMS[..],
            &datasets::BRANCHING_EDGES[..],
            datasets::BRANCHING_BUDGET,
        ),
        (
            "case_c.json",
            &datasets::CONFLUENCE_CLAIMS[..],
            &datasets::CONFLUENCE_EDGES[..],
            datasets::CONFLUENCE_BUDGET,
        ),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, basin_json(claims, edges, budget))
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        wrote.push(format!("{name} ({} nodes; budget embedded)", claims.len()));
    }

    for line in &wrote {
        println!("wrote {}/{line}", dir.display());
    }
    Ok(())
}
