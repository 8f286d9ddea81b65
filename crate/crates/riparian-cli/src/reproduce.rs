//! Recompute every embedded result and diff it against the published
//! values: the three six-city award tables, the worked four-agent chain,
//! the two basin fixtures, the eight threshold figures, and the axiom
//! satisfy/violate matrix. Exit 0 only when every cell matches.

use std::path::{Path, PathBuf};

use serde_json::json;

use riparian::analysis::{
    min_gamma_claims_bounded, min_lambda_claims_bounded, DEFAULT_THRESHOLD_TOL,
};
use riparian::axioms::{
    axiom_matrix, default_rules, replay_counterexample, CheckConfig, RuleSpec, Verdict,
};
use riparian::basin::basin_geometric;
use riparian::datasets;
use riparian::problem::Problem;
use riparian::quantity::{total, Quantity, Rational};
use riparian::rules::{averaging, geometric, geometric_retained, GammaParam, LambdaParam};

use crate::render;
use crate::{usage, CliError};

#[derive(clap::Args)]
pub struct ReproduceArgs {
    /// Which published result to recompute.
    #[arg(long, value_enum)]
    what: What,

    /// Also write the regenerated artifacts into DIR.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum What {
    Table1,
    Table4,
    Table5,
    Example1,
    Basins,
    Thresholds,
    Matrix,
    All,
}

/// Running count of cells checked and cell-level mismatch reports.
#[derive(Default)]
struct Tally {
    checked: usize,
    mismatches: Vec<String>,
}

impl Tally {
    fn cell(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            let line = detail();
            println!("MISMATCH {line}");
            self.mismatches.push(line);
        }
    }
}

pub fn run(args: &ReproduceArgs) -> Result<(), CliError> {
    let out = match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            Some(dir.as_path())
        }
        None => None,
    };
    let targets: &[What] = match args.what {
        What::All => &[
            What::Table1,
            What::Table4,
            What::Table5,
            What::Example1,
            What::Basins,
            What::Thresholds,
            What::Matrix,
        ],
        ref single => std::slice::from_ref(single),
    };
    let mut tally = Tally::default();
    for target in targets {
        match target {
            What::Table1 => table_target(
                "table1",
                datasets::base_problem(),
                &datasets::BASE_EXPECTED_GEOMETRIC,
                &datasets::BASE_EXPECTED_AVERAGING,
                &mut tally,
                out,
            )?,
            What::Table4 => table_target(
                "table4",
                datasets::equalized_problem(),
                &datasets::EQUALIZED_EXPECTED_GEOMETRIC,
                &datasets::EQUALIZED_EXPECTED_AVERAGING,
                &mut tally,
                out,
            )?,
            What::Table5 => table_target(
                "table5",
                datasets::swapped_problem(),
                &datasets::SWAPPED_EXPECTED_GEOMETRIC,
                &datasets::SWAPPED_EXPECTED_AVERAGING,
                &mut tally,
                out,
            )?,
            What::Example1 => example1_target(&mut tally, out)?,
            What::Basins => basins_target(&mut tally, out)?,
            What::Thresholds => thresholds_target(&mut tally, out)?,
            What::Matrix => matrix_target(&mut tally, out)?,
            What::All => unreachable!("expanded above"),
        }
    }
    println!(
        "reproduce: {} cells checked, {} mismatches",
        tally.checked,
        tally.mismatches.len()
    );
    if tally.mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "{} of {} reproduced cells diverge from the published values",
            tally.mismatches.len(),
            tally.checked
        )))
    }
}

fn grid_params() -> Vec<Rational> {
    datasets::PARAM_GRID.iter().map(|&(n, d)| Rational::ratio(n, d)).collect()
}

fn param_label(value: &Rational) -> String {
    format!("{}", value.to_f64())
}

/// One six-city table: five geometric columns, five averaging columns,
/// every award within ±0.01 of print, every column total exact.
fn table_target(
    name: &str,
    problem: Problem<Rational>,
    geo_expected: &[[f64; 5]; 6],
    avg_expected: &[[f64; 5]; 6],
    tally: &mut Tally,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let before = tally.mismatches.len();
    let params = grid_params();
    let geo_columns: Vec<Vec<Rational>> = params
        .iter()
        .map(|g| geometric(&problem, &GammaParam::new(g.clone()).expect("grid value")).into_awards())
        .collect();
    let avg_columns: Vec<Vec<Rational>> = params
        .iter()
        .map(|l| averaging(&problem, &LambdaParam::new(l.clone()).expect("grid value")).into_awards())
        .collect();

    for (family, columns, expected) in [
        ("geometric", &geo_columns, geo_expected),
        ("averaging", &avg_columns, avg_expected),
    ] {
        for (param_idx, column) in columns.iter().enumerate() {
            let label = param_label(&params[param_idx]);
            for (city_idx, award) in column.iter().enumerate() {
                let got = award.to_f64();
                let want = expected[city_idx][param_idx];
                tally.cell((got - want).abs() <= 0.01, || {
                    format!(
                        "{name}: {family} {label}, {}: computed {got:.4} vs published {want} \
                         (beyond ±0.01)",
                        datasets::CITY_NAMES[city_idx]
                    )
                });
            }
            let column_total = total(column);
            tally.cell(column_total == *problem.budget(), || {
                format!(
                    "{name}: {family} {label} total: computed {} vs budget {}",
                    column_total.to_f64(),
                    problem.budget().to_f64()
                )
            });
        }
    }

    if let Some(dir) = out {
        let path = dir.join(format!("{name}.csv"));
        let mut text = String::from("city,claim");
        for family in ["geometric", "averaging"] {
            for p in &params {
                text.push_str(&format!(",{family}@{}", param_label(p)));
            }
        }
        text.push('\n');
        for city_idx in 0..datasets::CITY_NAMES.len() {
            text.push_str(&format!(
                "{},{}",
                datasets::CITY_NAMES[city_idx],
                problem.claim(city_idx).to_f64()
            ));
            for columns in [&geo_columns, &avg_columns] {
                for column in columns.iter() {
                    text.push_str(&format!(",{:.2}", column[city_idx].to_f64()));
                }
            }
            text.push('\n');
        }
        text.push_str(&format!("Total,{}", problem.aggregate().to_f64()));
        for columns in [&geo_columns, &avg_columns] {
            for column in columns.iter() {
                text.push_str(&format!(",{:.2}", total(column).to_f64()));
            }
        }
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }

    if tally.mismatches.len() == before {
        println!("{name}: all 60 award cells and both Total rows match");
    }
    Ok(())
}

/// The worked four-agent chain at γ = 1/2: retained shares and awards
/// must come out as the published reduced fractions.
fn example1_target(tally: &mut Tally, out: Option<&Path>) -> Result<(), CliError> {
    let before = tally.mismatches.len();
    let problem = Problem::<Rational>::from_ints(
        &datasets::WORKED_CHAIN_CLAIMS,
        datasets::WORKED_CHAIN_BUDGET,
    );
    let gamma = GammaParam::ratio(1, 2);
    let retained = geometric_retained(&problem, &gamma);
    let alloc = geometric(&problem, &gamma);
    for (i, (&(rn, rd), &(an, ad))) in datasets::WORKED_CHAIN_RETAINED
        .iter()
        .zip(&datasets::WORKED_CHAIN_AWARDS)
        .enumerate()
    {
        tally.cell(retained[i] == Rational::ratio(rn, rd), || {
            format!(
                "example1: retained share of agent {}: computed {} vs published {rn}/{rd}",
                i + 1,
                retained[i].repr()
            )
        });
        tally.cell(*alloc.award(i) == Rational::ratio(an, ad), || {
            format!(
                "example1: award of agent {}: computed {} vs published {an}/{ad}",
                i + 1,
                alloc.award(i).repr()
            )
        });
    }

    if let Some(dir) = out {
        let path = dir.join("example1.csv");
        let mut text = String::from("agent,claim,retained,award\n");
        for i in 0..retained.len() {
            text.push_str(&format!(
                "{},{},{},{}\n",
                i + 1,
                problem.claim(i).repr(),
                retained[i].repr(),
                alloc.award(i).repr()
            ));
        }
        std::fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }

    if tally.mismatches.len() == before {
        println!("example1: retained shares and awards match the published fractions exactly");
    }
    Ok(())
}

/// The two basin fixtures at γ = 1/2, compared fraction-for-fraction.
fn basins_target(tally: &mut Tally, out: Option<&Path>) -> Result<(), CliError> {
    let before = tally.mismatches.len();
    let gamma = GammaParam::ratio(1, 2);

    let confluence = basin_geometric(&datasets::confluence_basin::<Rational>(), &gamma);
    for (i, &(n, d)) in datasets::CONFLUENCE_AWARDS.iter().enumerate() {
        let id = (i + 1).to_string();
        let award = &confluence.awards()[&id];
        tally.cell(*award == Rational::ratio(n, d), || {
            format!(
                "basins: confluence award of node {id}: computed {} vs published {n}/{d}",
                award.repr()
            )
        });
    }

    let branching = basin_geometric(&datasets::branching_basin::<Rational>(), &gamma);
    let mut retained_sum = Rational::from_int(0);
    for (i, &(n, d)) in datasets::BRANCHING_RETAINED.iter().enumerate() {
        let id = (i + 1).to_string();
        let share = &branching.retained()[&id];
        retained_sum = retained_sum.clone() + share.clone();
        tally.cell(*share == Rational::ratio(n, d), || {
            format!(
                "basins: branching retained share of node {id}: computed {} vs published {n}/{d}",
                share.repr()
            )
        });
    }
    tally.cell(retained_sum == Rational::from_int(29), || {
        format!("basins: branching retained total: computed {} vs 29", retained_sum.repr())
    });
    for (i, &(n, d)) in datasets::BRANCHING_AWARDS.iter().enumerate() {
        let id = (i + 1).to_string();
        let award = &branching.awards()[&id];
        tally.cell(*award == Rational::ratio(n, d), || {
            format!(
                "basins: branching award of node {id}: computed {} vs published {n}/{d}",
                award.repr()
            )
        });
    }
    let (mn, md) = datasets::BRANCHING_LAST_AWARD_MISPRINT;
    println!(
        "note: one circulated copy prints the final branching award as {mn}/{md}; \
         the computed value {} stands and the variant is treated as a misprint, not a mismatch",
        branching.awards()["6"].repr()
    );

    if let Some(dir) = out {
        let fractions = |pairs: Vec<(&String, &Rational)>| -> Vec<serde_json::Value> {
            pairs.iter().map(|(_, v)| serde_json::Value::String(v.repr())).collect()
        };
        let value = json!({
            "confluence": {
                "nodes": confluence.awards().iter().map(|(id, _)| id).collect::<Vec<_>>(),
                "awards": fractions(confluence.awards().iter().collect()),
            },
            "branching": {
                "nodes": branching.awards().iter().map(|(id, _)| id).collect::<Vec<_>>(),
                "retained": fractions(branching.retained().iter().collect()),
                "awards": fractions(branching.awards().iter().collect()),
            },
        });
        let path = dir.join("basins.json");
        std::fs::write(&path, render::pretty(&value))
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }

    if tally.mismatches.len() == before {
        println!(
            "basins: confluence awards and branching retained/awards match exactly (Σr = 29)"
        );
    }
    Ok(())
}

/// All published parameter thresholds, ±1e-3.
fn thresholds_target(tally: &mut Tally, out: Option<&Path>) -> Result<(), CliError> {
    let before = tally.mismatches.len();
    let cities: [(&str, Problem<f64>); 3] = [
        ("Tuojiang base", datasets::base_problem()),
        ("equal-claims variant", datasets::equalized_problem()),
        ("swapped variant", datasets::swapped_problem()),
    ];
    let mut rows: Vec<(String, f64, f64)> = Vec::new();
    for ((label, problem), published) in cities.iter().zip(datasets::CITY_MIN_GAMMA) {
        let result = min_gamma_claims_bounded(problem, DEFAULT_THRESHOLD_TOL);
        rows.push((format!("min gamma, {label}"), result.threshold, published));
    }
    for ((claims, budget), published) in
        datasets::SMALL_CHAINS.iter().zip(datasets::SMALL_CHAIN_MIN_GAMMA)
    {
        let problem = Problem::<f64>::from_ints(claims, *budget);
        let result = min_gamma_claims_bounded(&problem, DEFAULT_THRESHOLD_TOL);
        rows.push((format!("min gamma, chain {claims:?} budget {budget}"), result.threshold, published));
    }
    for (label, problem) in &cities {
        let result = min_lambda_claims_bounded(problem);
        rows.push((format!("min lambda, {label}"), result.threshold, datasets::CITY_MIN_LAMBDA));
    }
    for (label, computed, published) in &rows {
        let ok = (computed - published).abs() <= 1e-3;
        println!(
            "  {label}: computed {computed:.4}, published {published}{}",
            if ok { "" } else { "  <-- beyond ±1e-3" }
        );
        tally.cell(ok, || {
            format!("thresholds: {label}: computed {computed:.6} vs published {published} (beyond ±1e-3)")
        });
    }

    if let Some(dir) = out {
        let value = serde_json::Value::Array(
            rows.iter()
                .map(|(label, computed, published)| {
                    json!({ "label": label, "computed": computed, "published": published })
                })
                .collect(),
        );
        let path = dir.join("thresholds.json");
        std::fs::write(&path, render::pretty(&value))
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }

    if tally.mismatches.len() == before {
        println!("thresholds: all {} published values match within ±1e-3", rows.len());
    }
    Ok(())
}

/// The published 9-axiom × 4-rule satisfy/violate pattern, with every
/// violation's counterexample replayed before it counts as a match.
fn matrix_target(tally: &mut Tally, out: Option<&Path>) -> Result<(), CliError> {
    let before = tally.mismatches.len();
    let rules = default_rules::<Rational>();
    let matrix = axiom_matrix(&rules, &CheckConfig::default());
    tally.cell(matrix.len() == datasets::EXPECTED_AXIOM_MATRIX.len(), || {
        format!(
            "matrix: {} axiom rows computed, {} published",
            matrix.len(),
            datasets::EXPECTED_AXIOM_MATRIX.len()
        )
    });
    for ((axiom, reports), (name, row)) in matrix.iter().zip(&datasets::EXPECTED_AXIOM_MATRIX) {
        for (report, &satisfied) in reports.iter().zip(row) {
            let want = if satisfied { Verdict::SatisfiedOnSample } else { Verdict::Violated };
            tally.cell(report.verdict == want, || {
                format!(
                    "matrix: {} vs {}: computed {}, published {}",
                    name,
                    report.rule,
                    report.verdict.as_str(),
                    want.as_str()
                )
            });
            if report.verdict == Verdict::Violated {
                let replayed = report.counterexample.as_ref().is_some_and(|cex| {
                    RuleSpec::<Rational>::parse(&report.rule)
                        .map(|rule| replay_counterexample(&rule, &cex.instance))
                        .unwrap_or(false)
                });
                tally.cell(replayed, || {
                    format!(
                        "matrix: {} vs {}: violation without a replayable counterexample",
                        axiom.name(),
                        report.rule
                    )
                });
            }
        }
    }

    if let Some(dir) = out {
        let value = serde_json::Value::Array(
            matrix
                .iter()
                .flat_map(|(_, reports)| reports.iter().map(|r| r.to_json()))
                .collect(),
        );
        let path = dir.join("matrix.json");
        std::fs::write(&path, render::pretty(&value))
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }

    if tally.mismatches.len() == before {
        println!(
            "matrix: the full satisfy/violate pattern matches; every violation replays \
             from its stored counterexample"
        );
    }
    Ok(())
}
