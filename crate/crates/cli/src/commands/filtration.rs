use std::collections::BTreeSet;

use ramify::filtration::{validate, IgAssignment, RamFiltration, Validation};
use ramify::pc::Subgroup;
use ramify::rat::Exact;
use ramify::Rat;
use serde_json::json;

use crate::args::{FiltrationCmd, FiltrationInput, Format};
use crate::error::{CliError, Exit};
use crate::input::{self, rational, read_json};
use crate::output::{csv_pairs, no_csv, Reply};

fn exact(v: &[Rat]) -> Vec<Exact> {
    v.iter().cloned().map(Exact).collect()
}

fn load(input: &FiltrationInput) -> Result<(ramify::pc::PcGroup, IgAssignment), CliError> {
    let g = input::group(
        input.group.as_deref(),
        input.builtin.as_deref(),
        input.fill.as_deref(),
    )?;
    let a: IgAssignment = read_json(&input.file)?;
    Ok((g, a))
}

fn filtration(input: &FiltrationInput) -> Result<RamFiltration, CliError> {
    let (g, a) = load(input)?;
    RamFiltration::new(g, &a).map_err(|e| CliError::from(e).at(input.file.display().to_string()))
}

/// Upper breaks, the midpoints between them, 0, and one past the last.
fn grid(breaks: &[Rat]) -> Vec<Rat> {
    let mut pts: BTreeSet<Rat> = breaks.iter().cloned().collect();
    pts.insert(Rat::from_integer(0.into()));
    for w in breaks.windows(2) {
        pts.insert((&w[0] + &w[1]) / Rat::from_integer(2.into()));
    }
    let last = breaks.last().cloned().unwrap_or_default();
    pts.insert(last + Rat::from_integer(1.into()));
    pts.into_iter().collect()
}

fn level_json(u: &Rat, h: &Subgroup) -> serde_json::Value {
    json!({ "u": Exact(u.clone()), "order": h.order(), "elements": h.elements() })
}

pub fn run(cmd: &FiltrationCmd, format: Format) -> Result<Reply, CliError> {
    match cmd {
        FiltrationCmd::Validate { input } => {
            let (g, a) = load(input)?;
            let v = validate(&g, &a)
                .map_err(|e| CliError::from(e).at(input.file.display().to_string()))?;
            if format == Format::Csv {
                return Err(no_csv("filtration validate"));
            }
            match v {
                Validation::Pass => Reply::json(json!({ "valid": true })),
                Validation::Fail(f) => Ok(Reply::json(json!({ "valid": false, "failure": f }))?
                    .with_exit(Exit::Malformed)),
            }
        }
        FiltrationCmd::Herbrand { input } => {
            let rf = filtration(input)?;
            let upper = rf.upper_breaks();
            match format {
                Format::Json => Reply::json(json!({
                    "phi": rf.herbrand(),
                    "psi": rf.psi(),
                    "lower_breaks": rf.lower_breaks(),
                    "upper_breaks": exact(&upper),
                })),
                Format::Csv => Reply::csv(csv_pairs(
                    ("lower_break", "upper_break"),
                    rf.lower_breaks()
                        .iter()
                        .zip(&upper)
                        .map(|(l, u)| (l.to_string(), Exact(u.clone()).to_string())),
                )),
            }
        }
        FiltrationCmd::Upper { input, at } => {
            let rf = filtration(input)?;
            let points = if at.is_empty() {
                grid(&rf.upper_breaks())
            } else {
                at.iter()
                    .map(|s| rational(s, "--at"))
                    .collect::<Result<_, _>>()?
            };
            let mut levels = Vec::with_capacity(points.len());
            for u in &points {
                levels.push((u.clone(), rf.upper_level(u)?));
            }
            match format {
                Format::Json => Reply::json(
                    levels
                        .iter()
                        .map(|(u, h)| level_json(u, h))
                        .collect::<Vec<_>>(),
                ),
                Format::Csv => Reply::csv(csv_pairs(
                    ("u", "order"),
                    levels
                        .iter()
                        .map(|(u, h)| (Exact(u.clone()).to_string(), h.order().to_string())),
                )),
            }
        }
        FiltrationCmd::Quotient { input, gens } => {
            let rf = filtration(input)?;
            let g = rf.group();
            let gens = input::elements(gens, "--gen", g)?;
            let h = g.subgroup_closure(&gens, false)?;
            let qf = rf.quotient(&h)?;
            let q = qf.quotient.group();
            let upper = qf.filtration.upper_breaks();
            // Upper numbering passes to quotients: (G/H)^u = G^u H / H.
            let mut agrees = true;
            for u in grid(&rf.upper_breaks()) {
                let image = qf.quotient.project_subgroup(g, &rf.upper_level(&u)?)?;
                agrees &= image == qf.filtration.upper_level(&u)?;
            }
            if format == Format::Csv {
                return Err(no_csv("filtration quotient"));
            }
            Reply::json(json!({
                "presentation": q.presentation(),
                "kept_generators": qf.quotient.kept_generators().iter().map(|k| k + 1).collect::<Vec<_>>(),
                "assignment": qf.filtration.assignment(),
                "lower_breaks": qf.filtration.lower_breaks(),
                "upper_breaks": exact(&upper),
                "upper_levels_are_images": agrees,
            }))
        }
    }
}
