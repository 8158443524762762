use ramify::pc::{just_infinite_probe, rank_growth_probe, PcGroup, Subgroup};
use serde_json::{json, Value};

use crate::args::{Format, GroupCmd, GroupSource};
use crate::error::{CliError, Exit};
use crate::input::{self, index_list};
use crate::output::{csv_pairs, no_csv, Reply};

fn load(s: &GroupSource) -> Result<PcGroup, CliError> {
    input::group(s.file.as_deref(), s.builtin.as_deref(), s.fill.as_deref())
}

fn subgroup_json(h: &Subgroup) -> Value {
    json!({ "order": h.order(), "generators": h.generators(), "elements": h.elements() })
}

pub fn run(cmd: &GroupCmd, format: Format) -> Result<Reply, CliError> {
    match cmd {
        GroupCmd::Check { source, series } => {
            let g = match load(source) {
                Ok(g) => g,
                Err(e) if e.exit == Exit::Inconsistent => {
                    if format == Format::Csv {
                        return Err(e);
                    }
                    return Ok(
                        Reply::json(json!({ "consistent": false, "witness": e.detail }))?
                            .with_exit(Exit::Inconsistent),
                    );
                }
                Err(e) => return Err(e),
            };
            let mut out = json!({
                "consistent": true,
                "strategy": g.strategy(),
                "p": g.p(),
                "n": g.n(),
                "order": g.order(),
            });
            if *series {
                out["series"] =
                    serde_json::to_value(g.series_equality_check()?).expect("serializable");
            }
            match format {
                Format::Json => Reply::json(out),
                Format::Csv => Err(no_csv("group check")),
            }
        }
        GroupCmd::Closure {
            source,
            gens,
            normal,
        } => {
            let g = load(source)?;
            let gens = input::elements(gens, "--gen", &g)?;
            let h = g.subgroup_closure(&gens, *normal)?;
            match format {
                Format::Json => Reply::json(json!({
                    "normal_closure": normal,
                    "is_normal": g.is_normal(&h),
                    "subgroup": subgroup_json(&h),
                })),
                Format::Csv => {
                    let mut out = String::from("element\n");
                    for x in h.elements() {
                        out.push_str(&format!(
                            "\"{}\"\n",
                            x.0.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                        ));
                    }
                    Reply::csv(out)
                }
            }
        }
        GroupCmd::Series { source } => {
            let g = load(source)?;
            let report = g.series_equality_check()?;
            match format {
                Format::Json => {
                    let mut out = serde_json::to_value(&report).expect("serializable");
                    out["nilpotency_class"] = json!(g.nilpotency_class()?);
                    out["min_generators"] = json!(g.min_generators(&g.whole()?)?);
                    Reply::json(out)
                }
                Format::Csv => {
                    let len = report.gamma_orders.len().max(report.p_series_orders.len());
                    let cell = |v: &[u64], k: usize| v.get(k).copied().unwrap_or(1).to_string();
                    let mut out = String::from("level,gamma_order,p_series_order,equal\n");
                    for k in 0..len {
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            k,
                            cell(&report.gamma_orders, k),
                            cell(&report.p_series_orders, k),
                            report.levels.get(k).copied().unwrap_or(true)
                        ));
                    }
                    Reply::csv(out)
                }
            }
        }
        GroupCmd::Rank { source, k } => {
            let g = load(source)?;
            let probe = rank_growth_probe(&g, *k)?;
            match format {
                Format::Json => Reply::json(probe),
                Format::Csv => Reply::csv(csv_pairs(
                    ("k", "min_generators"),
                    [(probe.k.to_string(), probe.min_generators.to_string())],
                )),
            }
        }
        GroupCmd::Probe { source, tower } => {
            let g = load(source)?;
            let tower: Vec<usize> = match tower {
                Some(s) => {
                    let idx = index_list(s, "--tower")?;
                    if let Some(&bad) = idx.iter().find(|&&k| k == 0 || k as usize > g.n()) {
                        return Err(CliError::malformed(
                            "index-out-of-range",
                            format!("tower index {bad} out of 1..={}", g.n()),
                            "--tower",
                        ));
                    }
                    idx.into_iter().map(|k| k as usize - 1).collect()
                }
                None => (0..g.n()).collect(),
            };
            let report = just_infinite_probe(&g, &tower)?;
            match format {
                Format::Json => Reply::json(report),
                Format::Csv => {
                    let mut out = String::from("generator,closure_order,missing\n");
                    for s in &report.steps {
                        let missing: Vec<String> = s.missing.iter().map(usize::to_string).collect();
                        out.push_str(&format!(
                            "{},{},\"{}\"\n",
                            s.generator,
                            s.closure_order,
                            missing.join(",")
                        ));
                    }
                    Reply::csv(out)
                }
            }
        }
    }
}
