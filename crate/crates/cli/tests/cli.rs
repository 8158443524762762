use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ramify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramify"))
        .args(args)
        .env_remove("RAMIFY_CAP")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn error(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

#[test]
fn herbrand_step_value() {
    let o = ramify(&[
        "herbrand", "step", "--break", "1", "--p", "2", "--eval", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"value\":\"5\"}\n");
}

#[test]
fn herbrand_functions_round_trip() {
    let o = ramify(&["herbrand", "step", "--break", "1", "--p", "2"]);
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(fixture("step.json")).unwrap()
    );
    let o = ramify(&[
        "herbrand",
        "invert",
        "--file",
        &fixture("step.json"),
        "--eval",
        "5",
    ]);
    assert_eq!(json(&o)["value"], "3");
    let o = ramify(&[
        "herbrand",
        "eval",
        "--file",
        &fixture("step.json"),
        "--at",
        "1/2",
        "--at",
        "7/2",
    ]);
    assert_eq!(
        json(&o),
        serde_json::json!([{"x": "1/2", "value": "1/2"}, {"x": "7/2", "value": "6"}])
    );
    let o = ramify(&["herbrand", "tower", "--breaks", "1,5", "--p", "2"]);
    assert_eq!(json(&o)["upper_breaks"], serde_json::json!(["1", "3"]));
    let o = ramify(&[
        "herbrand", "tower", "--breaks", "1,5", "--p", "2", "--format", "csv",
    ]);
    assert_eq!(stdout(&o), "n,upper_break\n1,1\n2,3\n");
}

#[test]
fn nonapf_plan_csv() {
    let o = ramify(&[
        "plan",
        "run",
        "--file",
        &fixture("nonapf.json"),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,lower_break,upper_break,flag");
    assert_eq!(lines[4], "4,7,11/4,p-divides-increment");
    // explicit schedules carry no certificate
    let verdict: Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(verdict["verdict"], "undetermined");

    let o = ramify(&[
        "plan",
        "run",
        "--file",
        &fixture("odd_rule.json"),
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    let verdict: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(verdict["verdict"], "non-apf");
    assert_eq!(verdict["limit_bound"], "3");
    assert_eq!(text.lines().nth(4).unwrap(), "4,7,11/4,p-divides-increment");
}

#[test]
fn heisenberg_series() {
    let o = ramify(&[
        "group",
        "check",
        "--file",
        &fixture("heisenberg3.json"),
        "--series",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["series"]["gamma_orders"], serde_json::json!([27, 3, 1]));
    assert_eq!(v["series"]["all_equal"], true);
    let builtin = ramify(&["group", "check", "--builtin", "heisenberg:3", "--series"]);
    assert_eq!(stdout(&builtin), stdout(&o));
}

#[test]
fn exit_codes() {
    let o = ramify(&["group", "check", "--file", &fixture("class3_variant.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["consistent"], false);
    let o = ramify(&["group", "series", "--builtin", "tower:2:4"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error(&o)["error"]["code"], "inconsistent");

    let o = ramify(&["plan", "run", "--file", &fixture("apf_spec.json")]);
    assert_eq!(o.status.code(), Some(2));
    let e = error(&o);
    assert_eq!(e["error"]["code"], "inadmissible");
    assert_eq!(e["error"]["location"], "n=1");

    let o = ramify(&["plan", "admissible", "--j", "4", "--p", "2", "--e", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ramify(&["plan", "feasible", "--file", &fixture("query.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["s"], 5);

    let o = ramify(&["herbrand", "step", "--break", "1", "--p", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error(&o)["error"]["code"], "not-prime");
    let o = ramify(&["herbrand", "step", "--break", "1", "--p", "2", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ramify(&["plan", "run", "--file", &fixture("heisenberg3.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(error(&o)["error"]["location"]
        .as_str()
        .unwrap()
        .ends_with("heisenberg3.json"));
    let o = ramify(&[
        "filtration",
        "validate",
        "--builtin",
        "heisenberg:3",
        "--file",
        &fixture("ig_broken.json"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["failure"]["level"], 4);

    let o = Command::new(env!("CARGO_BIN_EXE_ramify"))
        .args(["group", "series", "--builtin", "heisenberg:3"])
        .env("RAMIFY_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error(&o)["error"]["code"], "cap-exceeded");
}

#[test]
fn parallel_sweep_keeps_input_order() {
    let sweep = fixture("sweep.json");
    let serial = ramify(&["plan", "run", "--file", &sweep, "--format", "csv"]);
    for jobs in ["2", "4"] {
        let parallel = ramify(&[
            "plan", "run", "--file", &sweep, "--format", "csv", "--jobs", jobs,
        ]);
        assert_eq!(parallel.stdout, serial.stdout);
    }
    let v = json(&ramify(&["plan", "run", "--file", &sweep, "--jobs", "3"]));
    let verdicts: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["result"]["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, ["non-apf", "apf", "apf", "undetermined", "apf"]);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args = [
        "plan",
        "run",
        "--file",
        &fixture("doubling.json"),
        "--format",
        "csv",
    ];
    let direct = ramify(&args);
    let mut with_out = args.to_vec();
    let p = path.display().to_string();
    with_out.extend(["--out", &p]);
    let o = ramify(&with_out);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn merges() {
    let o = ramify(&[
        "merge",
        "max",
        "--file",
        &fixture("odd_rule.json"),
        "--file",
        &fixture("doubling.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error(&o)["error"]["code"], "horizon-mismatch");

    let o = ramify(&[
        "merge",
        "max",
        "--file",
        &fixture("nonapf.json"),
        "--file",
        &fixture("doubling.json"),
    ]);
    let v = json(&o);
    assert_eq!(v["flagged"], serde_json::json!([1, 2]));
    assert_eq!(v["flag"], "collision");

    let o = ramify(&[
        "merge",
        "repair",
        "--file",
        &fixture("nonapf.json"),
        "--family",
        &fixture("family.json"),
    ]);
    assert_eq!(json(&o)["verdict"], "apf");
    let o = ramify(&[
        "merge",
        "repair",
        "--file",
        &fixture("nonapf.json"),
        "--half-linear",
        "2",
    ]);
    assert_eq!(json(&o)["verdict"], "apf");
}

#[test]
fn filtration_commands() {
    let args = |cmd: &str| {
        vec![
            "filtration".to_string(),
            cmd.to_string(),
            "--builtin".into(),
            "heisenberg:3".into(),
            "--file".into(),
            fixture("ig_heisenberg3.json"),
        ]
    };
    let run = |a: Vec<String>| ramify(&a.iter().map(String::as_str).collect::<Vec<_>>());
    let v = json(&run(args("herbrand")));
    assert_eq!(v["upper_breaks"], serde_json::json!(["1", "4/3"]));
    let mut q = args("quotient");
    q.extend(["--gen".into(), "0,0,1".into()]);
    let v = json(&run(q));
    assert_eq!(v["upper_breaks"], serde_json::json!(["1"]));
    assert_eq!(v["upper_levels_are_images"], true);
    let mut u = args("upper");
    u.extend(["--format".into(), "csv".into()]);
    assert_eq!(
        stdout(&run(u)),
        "u,order\n0,27\n1,27\n7/6,3\n4/3,3\n7/3,1\n"
    );
}

#[test]
fn group_probes() {
    let v = json(&ramify(&["group", "probe", "--builtin", "tower:5:4"]));
    assert_eq!(v["passed"], true);
    let v = json(&ramify(&[
        "group",
        "rank",
        "--builtin",
        "tower:3:4",
        "--k",
        "1",
    ]));
    assert_eq!(v["min_generators"], 2);
    let v = json(&ramify(&[
        "group",
        "closure",
        "--builtin",
        "heisenberg:3",
        "--gen",
        "1,0,0",
        "--normal",
    ]));
    assert_eq!(v["subgroup"]["order"], 9);
    let o = ramify(&[
        "group",
        "closure",
        "--builtin",
        "heisenberg:3",
        "--gen",
        "1,0",
    ]);
    assert_eq!(o.status.code(), Some(1));
}
