use ramify::herbrand::{psi_step, tower_psi, PlFunc};
use ramify::rat::{format_rat, Exact};
use serde_json::json;

use crate::args::{Format, HerbrandCmd};
use crate::error::CliError;
use crate::input::{index_list, rational, read_json};
use crate::output::{csv_pairs, no_csv, Reply};

pub fn run(cmd: &HerbrandCmd, format: Format) -> Result<Reply, CliError> {
    match cmd {
        HerbrandCmd::Step { break_, p, eval } => function(&psi_step(*break_, *p)?, eval, format),
        HerbrandCmd::Compose { file, eval } => {
            let fs = file
                .iter()
                .map(|f| read_json::<PlFunc>(f))
                .collect::<Result<Vec<_>, _>>()?;
            let h = fs
                .iter()
                .rev()
                .fold(PlFunc::identity(), |acc, f| f.compose(&acc));
            function(&h, eval, format)
        }
        HerbrandCmd::Invert { file, eval } => {
            function(&read_json::<PlFunc>(file)?.invert(), eval, format)
        }
        HerbrandCmd::Eval { file, at } => function(&read_json::<PlFunc>(file)?, at, format),
        HerbrandCmd::Tower { breaks, p, eval } => {
            let t = tower_psi(&index_list(breaks, "--breaks")?, *p)?;
            if !eval.is_empty() {
                return function(&t.psi, eval, format);
            }
            match format {
                Format::Json => Reply::json(json!({
                    "psi": t.psi,
                    "upper_breaks": t.upper_breaks.iter().cloned().map(Exact).collect::<Vec<_>>(),
                })),
                Format::Csv => Reply::csv(csv_pairs(
                    ("n", "upper_break"),
                    t.upper_breaks
                        .iter()
                        .enumerate()
                        .map(|(k, u)| ((k + 1).to_string(), format_rat(u))),
                )),
            }
        }
    }
}

/// Prints `f`, or its values at `points`: `{"value": ..}` for one point,
/// a list of `{"x", "value"}` for several.
fn function(f: &PlFunc, points: &[String], format: Format) -> Result<Reply, CliError> {
    if points.is_empty() {
        return match format {
            Format::Json => Reply::json(f),
            Format::Csv => Err(no_csv("printing a function")),
        };
    }
    let mut values = Vec::with_capacity(points.len());
    for s in points {
        let x = rational(s, "--eval")?;
        let y = f.eval(&x).map_err(|e| CliError::from(e).at(s.clone()))?;
        values.push((Exact(x), Exact(y)));
    }
    match format {
        Format::Json if values.len() == 1 => Reply::json(json!({ "value": values[0].1 })),
        Format::Json => Reply::json(
            values
                .iter()
                .map(|(x, y)| json!({ "x": x, "value": y }))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => Reply::csv(csv_pairs(
            ("x", "value"),
            values.iter().map(|(x, y)| (x.to_string(), y.to_string())),
        )),
    }
}
