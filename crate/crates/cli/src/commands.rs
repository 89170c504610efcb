use std::fs;
use std::io::Write;

use cdc_core::analysis::{self, Figure3Row};
use cdc_core::lp::{self, SplitPlan};
use cdc_core::rational::{decimal, exact, from_count};
use cdc_core::simulator::{
    cdc_shuffle, measure_loads, minimum_computation_plan, reduce_verify, scdc_computation_plan, scdc_shuffle,
};
use cdc_core::{ClusterConfig, Placement};
use serde_json::{json, Value};

use crate::output::{emit, fig3_csv, fig3_json, Table};
use crate::{BudgetArgs, CliError, CurveArgs, Figure, Format, SimulateArgs};

/// Reads an integer split plan: either the whole `scdc-plan` output (its
/// `rounded` member is used) or a bare `{"weights": [{"ell", "z"}]}`.
fn read_plan(path: &std::path::Path, r: usize) -> Result<SplitPlan, CliError> {
    let text = fs::read_to_string(path)?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let plan = doc.get("rounded").unwrap_or(&doc);
    let weights = plan
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Usage(format!("{}: no \"weights\" array", path.display())))?;
    let mut pairs = Vec::with_capacity(weights.len());
    for w in weights {
        match (w.get("ell").and_then(Value::as_u64), w.get("z").and_then(Value::as_u64)) {
            (Some(ell), Some(z)) => pairs.push((ell as usize, z)),
            _ => return Err(CliError::Usage(format!("{}: bad weight entry {w}", path.display()))),
        }
    }
    Ok(SplitPlan::from_pairs(r, pairs)?)
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let cfg = args.cluster.config().validate()?;
    let placement = Placement::new(&cfg);
    let split = args.plan.as_deref().map(|p| read_plan(p, cfg.r)).transpose()?;
    let (plan, outcome) = match &split {
        None => {
            let plan = minimum_computation_plan(&placement);
            let outcome = cdc_shuffle(&placement, &plan, args.seed)?;
            (plan, outcome)
        }
        Some(split) => {
            let plan = scdc_computation_plan(&placement, split)?;
            let outcome = scdc_shuffle(&placement, &plan, split, args.seed)?;
            (plan, outcome)
        }
    };
    if let Some(path) = &args.log {
        let mut file = std::io::BufWriter::new(fs::File::create(path)?);
        for tx in &outcome.log {
            writeln!(file, "{}", tx.to_json(args.payloads))?;
        }
        file.flush()?;
    }
    let loads = measure_loads(&cfg, &outcome.log, &plan);
    let verified = reduce_verify(&outcome.stores, &placement, args.seed);
    let scheme = if split.is_some() { "scdc" } else { "cdc" };

    let text = match args.output.format {
        Some(Format::Json) => {
            let mut doc = json!({
                "config": cfg.config(),
                "scheme": scheme,
                "seed": args.seed,
                "transmissions": loads.transmissions,
                "bits_sent": loads.bits_sent,
                "communication_load": exact(&loads.communication_load),
                "communication_load_decimal": decimal(&loads.communication_load),
                "computation_load": loads.computation_count,
                "computations_per_server": loads.computations_per_server,
                "bits_per_server": loads.bits_per_server,
                "verified": verified.is_ok(),
            });
            if let Some(split) = &split {
                doc["split_plan"] = json!(split.entries().map(|(ell, z)| json!({"ell": ell, "z": z})).collect::<Vec<_>>());
            }
            match &verified {
                Ok(report) => {
                    doc["reduce"] = json!(report
                        .per_server
                        .iter()
                        .map(|s| json!({"server": s.server, "local": s.local, "decoded": s.decoded}))
                        .collect::<Vec<_>>());
                }
                Err(failure) => {
                    doc["failures"] = json!(failure.failures.iter().map(ToString::to_string).collect::<Vec<_>>());
                }
            }
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        Some(Format::Csv) => {
            let mut table = Table::new(&[
                "K", "Q", "N", "r", "T", "scheme", "transmissions", "bits", "comm", "comm_decimal", "comp", "verified",
            ]);
            table.row(vec![
                cfg.k.to_string(),
                cfg.q.to_string(),
                cfg.n.to_string(),
                cfg.r.to_string(),
                cfg.t.to_string(),
                scheme.to_string(),
                loads.transmissions.to_string(),
                loads.bits_sent.to_string(),
                exact(&loads.communication_load),
                decimal(&loads.communication_load),
                loads.computation_count.to_string(),
                verified.is_ok().to_string(),
            ]);
            table.render()
        }
        None => {
            let mut s = String::new();
            s += &format!("config              {}\n", *cfg);
            s += &format!("scheme              {scheme}\n");
            if let Some(split) = &split {
                let parts: Vec<String> = split.entries().map(|(ell, z)| format!("z_{ell}={z}")).collect();
                s += &format!("split plan          {}\n", parts.join(" "));
            }
            s += &format!("transmissions       {}\n", loads.transmissions);
            s += &format!("bits sent           {}\n", loads.bits_sent);
            s += &format!(
                "communication load  {} ({})\n",
                exact(&loads.communication_load),
                decimal(&loads.communication_load)
            );
            s += &format!("computation load    {}\n", loads.computation_count);
            s += &format!("verified            {}\n", if verified.is_ok() { "yes" } else { "NO" });
            s
        }
    };
    emit(&args.output, &text)?;
    verified.map(|_| ()).map_err(CliError::Verification)
}

pub fn curve(args: &CurveArgs) -> Result<(), CliError> {
    let format = args.output.format.unwrap_or(Format::Csv);
    let text = match args.figure {
        Figure::Fig1 => {
            let series = analysis::figure1_series(args.k, args.q, args.n);
            match format {
                Format::Csv => {
                    let mut t = Table::new(&["r", "comp_min", "comp_naive"]);
                    for p in &series {
                        t.row(vec![p.r.to_string(), p.comp_min.to_string(), p.comp_naive.to_string()]);
                    }
                    t.render()
                }
                Format::Json => json_lines(series.iter().map(|p| json!({"r": p.r, "comp_min": p.comp_min, "comp_naive": p.comp_naive}))),
            }
        }
        Figure::Fig2 => {
            let series = analysis::figure2_series(args.k, args.q, args.n);
            match format {
                Format::Csv => {
                    let mut t = Table::new(&["comp", "comm", "scheme", "comm_decimal", "r"]);
                    for (scheme, p) in &series {
                        t.row(vec![
                            p.computation.to_string(),
                            exact(&p.communication),
                            scheme.name().to_string(),
                            decimal(&p.communication),
                            p.r.to_string(),
                        ]);
                    }
                    t.render()
                }
                Format::Json => json_lines(series.iter().map(|(scheme, p)| {
                    json!({
                        "comp": p.computation,
                        "comm": exact(&p.communication),
                        "comm_decimal": decimal(&p.communication),
                        "scheme": scheme.name(),
                        "r": p.r,
                    })
                })),
            }
        }
        Figure::Fig3 => {
            let r = args.r.ok_or_else(|| CliError::Usage("fig3 needs -r".to_string()))?;
            let cfg = match args.t {
                Some(t) => ClusterConfig::from_shape(args.k, args.q, args.n, r, t),
                None => ClusterConfig::from_shape_min_bits(args.k, args.q, args.n, r),
            }
            .validate()?;
            let min = args.budget_min.unwrap_or_else(|| from_count(cfg.nq()));
            let max = args.budget_max.unwrap_or_else(|| from_count(analysis::cdc_min_computation(&cfg)));
            if max < min {
                return Err(CliError::Usage("--budget-max is below --budget-min".to_string()));
            }
            let budgets = analysis::budget_grid(min, max, args.steps as usize);
            let rows: Vec<Figure3Row> = analysis::figure3_series(&cfg, &budgets)?;
            match format {
                Format::Csv => fig3_csv(&rows),
                Format::Json => fig3_json(&rows),
            }
        }
    };
    emit(&args.output, &text)
}

fn json_lines(values: impl Iterator<Item = Value>) -> String {
    let rows: Vec<Value> = values.collect();
    format!("{}\n", serde_json::to_string_pretty(&Value::Array(rows)).expect("json"))
}

fn solution_json(solution: &lp::LpSolution) -> Value {
    let mut v = serde_json::to_value(solution).expect("json");
    v["objective_decimal"] = json!(decimal(&solution.objective));
    v
}

pub fn bound(args: &BudgetArgs) -> Result<(), CliError> {
    let cfg = args.cluster.config().validate()?;
    let solution = lp::lower_bound(&cfg, args.budget)?;
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&solution_json(&solution)).expect("json")),
        Format::Csv => {
            let mut t = Table::new(&["ell", "z", "z_decimal"]);
            for (i, z) in solution.weights.iter().enumerate() {
                t.row(vec![(i + 1).to_string(), exact(z), decimal(z)]);
            }
            t.render()
        }
    };
    emit(&args.output, &text)
}

pub fn scdc_plan(args: &BudgetArgs) -> Result<(), CliError> {
    let cfg = args.cluster.config().validate()?;
    let solution = lp::scdc_optimize(&cfg, args.budget)?;
    let rounded = lp::round_plan(&solution, &cfg)?;
    let text = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut doc = solution_json(&solution);
            doc["rounded"] = serde_json::to_value(&rounded).expect("json");
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        Format::Csv => {
            let mut t = Table::new(&["ell", "z", "z_decimal", "z_rounded"]);
            for (i, z) in solution.weights.iter().enumerate() {
                t.row(vec![(i + 1).to_string(), exact(z), decimal(z), rounded.plan.count(i + 1).to_string()]);
            }
            t.render()
        }
    };
    emit(&args.output, &text)
}
