use std::fs;

use cdc_core::analysis::Figure3Row;
use cdc_core::rational::{decimal, exact};
use cdc_core::Rational;
use serde_json::{json, Value};

use crate::{CliError, OutputArgs};

/// Writes `text` to `--out` or stdout.
pub fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Minimal CSV writer; fields are numbers, fractions and fixed words, so no quoting.
pub struct Table {
    lines: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { lines: vec![header.join(",")] }
    }

    pub fn row(&mut self, fields: Vec<String>) {
        self.lines.push(fields.join(","));
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

fn opt_pair(value: Option<&Rational>) -> [String; 2] {
    match value {
        Some(v) => [exact(v), decimal(v)],
        None => [String::new(), String::new()],
    }
}

pub fn fig3_csv(rows: &[Figure3Row]) -> String {
    let mut t = Table::new(&[
        "budget",
        "budget_decimal",
        "status",
        "r_star",
        "cdc_fit",
        "cdc_fit_decimal",
        "scdc",
        "scdc_decimal",
        "scdc_rounded",
        "scdc_rounded_decimal",
        "within_budget",
        "lower_bound",
        "lower_bound_decimal",
    ]);
    for row in rows {
        let mut fields = vec![
            exact(&row.budget),
            decimal(&row.budget),
            if row.feasible() { "ok" } else { "infeasible" }.to_string(),
            row.cdc_fit.map(|(r, _)| r.to_string()).unwrap_or_default(),
        ];
        fields.extend(opt_pair(row.cdc_fit.as_ref().map(|(_, l)| l)));
        fields.extend(opt_pair(row.scdc.as_ref().map(|s| &s.objective)));
        fields.extend(opt_pair(row.scdc_rounded.as_ref().map(|s| &s.objective)));
        fields.push(row.scdc_rounded.as_ref().map(|s| s.within_budget.to_string()).unwrap_or_default());
        fields.extend(opt_pair(row.lower_bound.as_ref().map(|s| &s.objective)));
        t.row(fields);
    }
    t.render()
}

fn opt_json(value: Option<&Rational>) -> Value {
    value.map_or(Value::Null, |v| json!(exact(v)))
}

pub fn fig3_json(rows: &[Figure3Row]) -> String {
    let values: Vec<Value> = rows
        .iter()
        .map(|row| {
            json!({
                "budget": exact(&row.budget),
                "budget_decimal": decimal(&row.budget),
                "status": if row.feasible() { "ok" } else { "infeasible" },
                "r_star": row.cdc_fit.map(|(r, _)| r),
                "cdc_fit": opt_json(row.cdc_fit.as_ref().map(|(_, l)| l)),
                "scdc": opt_json(row.scdc.as_ref().map(|s| &s.objective)),
                "scdc_weights": row.scdc.as_ref().map(|s| s.weights.iter().map(exact).collect::<Vec<_>>()),
                "scdc_rounded": opt_json(row.scdc_rounded.as_ref().map(|s| &s.objective)),
                "scdc_rounded_weights": row.scdc_rounded.as_ref().map(|s| s.plan.entries().map(|(ell, z)| json!({"ell": ell, "z": z})).collect::<Vec<_>>()),
                "within_budget": row.scdc_rounded.as_ref().map(|s| s.within_budget),
                "lower_bound": opt_json(row.lower_bound.as_ref().map(|s| &s.objective)),
            })
        })
        .collect();
    format!("{}\n", serde_json::to_string_pretty(&Value::Array(values)).expect("json"))
}
