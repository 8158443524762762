use std::path::Path;

use ramify::planner::{
    compositum_merge, half_linear_family, repair_merge, BreakSequence, FamilyBound,
};
use ramify::rat::Exact;
use serde::Deserialize;
use serde_json::Value;

use crate::args::{Format, MergeCmd};
use crate::commands::plan::load_plans;
use crate::error::CliError;
use crate::input::read_json;
use crate::output::{sequence_csv, sequence_json, Reply};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    upper: Vec<Exact>,
}

/// A plan (anything with a `kind`) or a bare `{"upper": [...]}` sequence.
fn load_sequence(path: &Path) -> Result<BreakSequence, CliError> {
    let at = path.display().to_string();
    let v: Value = read_json(path)?;
    if v.get("kind").is_some() {
        let plans = load_plans(&[path.to_path_buf()])?;
        return plans[0].1.run().map_err(|e| CliError::from(e).at(at));
    }
    let raw: RawSequence = serde_json::from_value(v)
        .map_err(|e| CliError::malformed("malformed-sequence", e.to_string(), at.clone()))?;
    BreakSequence::raw(raw.upper.into_iter().map(|x| x.0).collect())
        .map_err(|e| CliError::from(e).at(at))
}

fn emit(seq: &BreakSequence, format: Format) -> Result<Reply, CliError> {
    match format {
        Format::Json => Reply::json(sequence_json(seq)),
        Format::Csv => Reply::csv(sequence_csv(seq)),
    }
}

pub fn run(cmd: &MergeCmd, format: Format) -> Result<Reply, CliError> {
    match cmd {
        MergeCmd::Max { file } => {
            let seqs = file
                .iter()
                .map(|f| load_sequence(f))
                .collect::<Result<Vec<_>, _>>()?;
            emit(&compositum_merge(&seqs)?, format)
        }
        MergeCmd::Repair {
            file,
            family,
            half_linear,
        } => {
            let base = load_sequence(file)?;
            let fam: FamilyBound = match (family, half_linear) {
                (Some(f), None) => read_json(f)?,
                (None, Some(e0)) => half_linear_family(*e0, base.horizon()),
                _ => {
                    return Err(CliError::malformed(
                        "missing-family",
                        "give --family or --half-linear",
                        "--family",
                    ))
                }
            };
            emit(&repair_merge(&base, &fam)?, format)
        }
    }
}
