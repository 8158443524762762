use std::path::PathBuf;

use ramify::planner::{
    apf_plan, break_bound, closed_form_check, cyclic_break_admissible, lemma32_feasible,
    Feasibility, FeasibilityQuery, PlanKind, TowerPlan,
};
use ramify::rat::{is_prime, Exact};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Format, PlanCmd};
use crate::error::{CliError, Exit};
use crate::input::read_json;
use crate::output::{break_table, sequence_csv, sequence_json, to_line, verdict_json, Reply};

/// Plans from files holding one plan or an array of plans, in order.
pub fn load_plans(files: &[PathBuf]) -> Result<Vec<(String, TowerPlan)>, CliError> {
    let mut out = Vec::new();
    for f in files {
        let name = f.display().to_string();
        match read_json::<Value>(f)? {
            Value::Array(items) => {
                for (k, v) in items.into_iter().enumerate() {
                    let at = format!("{name}[{k}]");
                    out.push((at.clone(), parse_plan(v, &at)?));
                }
            }
            v => out.push((name.clone(), parse_plan(v, &name)?)),
        }
    }
    Ok(out)
}

fn parse_plan(v: Value, at: &str) -> Result<TowerPlan, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::malformed("malformed-plan", e.to_string(), at))
}

struct Evaluated {
    json: Value,
    seq: ramify::planner::BreakSequence,
}

fn evaluate(plan: &TowerPlan, trace: bool) -> Result<Evaluated, CliError> {
    if trace && matches!(plan.kind, PlanKind::Apf { .. }) {
        let run = apf_plan(plan)?;
        let report = closed_form_check(&run.sequence, plan)?;
        let mut js = sequence_json(&run.sequence);
        js["cores"] = json!(run.cores);
        js["trace"] = json!(run.trace);
        js["closed_form"] = json!(report);
        return Ok(Evaluated {
            json: js,
            seq: run.sequence,
        });
    }
    let seq = plan.run()?;
    Ok(Evaluated {
        json: sequence_json(&seq),
        seq,
    })
}

fn sweep(
    plans: &[(String, TowerPlan)],
    jobs: usize,
    trace: bool,
) -> Result<Vec<Result<Evaluated, CliError>>, CliError> {
    let work =
        |(at, plan): &(String, TowerPlan)| evaluate(plan, trace).map_err(|e| e.at(at.clone()));
    if jobs <= 1 {
        return Ok(plans.iter().map(work).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::malformed("bad-jobs", e.to_string(), "--jobs"))?;
    Ok(pool.install(|| plans.par_iter().map(work).collect()))
}

pub fn run(cmd: &PlanCmd, format: Format) -> Result<Reply, CliError> {
    match cmd {
        PlanCmd::Run { file, jobs, trace } => {
            let plans = load_plans(file)?;
            if plans.len() == 1 {
                let ev = evaluate(&plans[0].1, *trace).map_err(|e| e.at(plans[0].0.clone()))?;
                return match format {
                    Format::Json => Reply::json(ev.json),
                    Format::Csv => Reply::csv(sequence_csv(&ev.seq)),
                };
            }
            let results = sweep(&plans, *jobs, *trace)?;
            let exit = results
                .iter()
                .filter_map(|r| r.as_ref().err())
                .map(|e| e.exit)
                .next()
                .unwrap_or(Exit::Ok);
            let body = match format {
                Format::Json => {
                    let items: Vec<Value> = results
                        .iter()
                        .zip(&plans)
                        .map(|(r, (at, _))| match r {
                            Ok(ev) => json!({ "plan": at, "result": ev.json }),
                            Err(e) => json!({ "plan": at, "error": e, "exit": e.exit as i32 }),
                        })
                        .collect();
                    to_line(&items)
                }
                Format::Csv => {
                    let mut table = String::from("plan,n,lower_break,upper_break,flag\n");
                    let mut tail = String::new();
                    for (k, r) in results.iter().enumerate() {
                        match r {
                            Ok(ev) => {
                                table.push_str(&break_table(&ev.seq, Some(k + 1), false));
                                let mut v = verdict_json(&ev.seq);
                                v["plan"] = json!(k + 1);
                                tail.push_str(&to_line(&v));
                            }
                            Err(e) => {
                                tail.push_str(&to_line(&json!({ "plan": k + 1, "error": e })))
                            }
                        }
                    }
                    table + &tail
                }
            };
            Ok(Reply { body, exit })
        }
        PlanCmd::Feasible {
            file,
            i,
            j,
            s,
            p,
            e,
            scan,
        } => {
            let q = match file {
                Some(f) => read_json::<FeasibilityQuery>(f)?,
                None => {
                    let need = |v: &Option<u64>, flag: &str| {
                        v.ok_or_else(|| {
                            CliError::malformed(
                                "missing-argument",
                                format!("{flag} is required without --file"),
                                flag,
                            )
                        })
                    };
                    FeasibilityQuery {
                        i: need(i, "--i")?,
                        j: need(j, "--j")?,
                        s: if scan.is_some() {
                            s.unwrap_or(1)
                        } else {
                            need(s, "--s")?
                        },
                        p: need(p, "--p")?,
                        e: need(e, "--e")?,
                    }
                }
            };
            if let Some(max) = scan {
                let mut feasible = Vec::new();
                for s in 1..=*max {
                    if lemma32_feasible(&FeasibilityQuery { s, ..q })?.is_feasible() {
                        feasible.push(s);
                    }
                }
                return Reply::json(
                    json!({ "i": q.i, "j": q.j, "p": q.p, "e": q.e, "scan": max, "feasible_s": feasible }),
                );
            }
            let r = lemma32_feasible(&q)?;
            let exit = if r.is_feasible() {
                Exit::Ok
            } else {
                Exit::Infeasible
            };
            let body = match r {
                Feasibility::Feasible { s } => json!({ "result": "feasible", "s": s }),
                Feasibility::Infeasible { reason } => {
                    json!({ "result": "infeasible", "reason": reason })
                }
            };
            Ok(Reply::json(body)?.with_exit(exit))
        }
        PlanCmd::Admissible { j, p, e, literal } => {
            if !is_prime(*p) {
                return Err(ramify::planner::PlanError::NotPrime(*p).into());
            }
            let ok = cyclic_break_admissible(*j, *p, *e, !literal);
            let body = json!({
                "j": j,
                "admissible": ok,
                "bound": Exact(break_bound(*p, *e)),
                "strengthened": !literal,
            });
            Ok(Reply::json(body)?.with_exit(if ok { Exit::Ok } else { Exit::Infeasible }))
        }
    }
}
