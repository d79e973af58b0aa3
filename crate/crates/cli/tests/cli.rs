use std::path::Path;
use std::process::Command;

use serde_json::Value;
use zk_cli::report::SCHEMA_JSON;

const SMALL: &str = "\
seed = 5
[grid]
n = 32
L = 50.26548245743669
[physics]
T = 2.0
T_max = 12.0
[conserve]
t1 = 1.0
[algebra]
bound_samples = 200
float_points = 100
";

fn zk(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zk")).args(args).output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("zk.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Checks `v` against the keywords the report schema uses.
fn conforms(v: &Value, s: &Value, at: &str) -> Result<(), String> {
    let fail = |why: &str| Err(format!("{at}: {why}"));
    if let Some(c) = s.get("const") {
        if v != c {
            return fail("const");
        }
    }
    if let Some(Value::Array(opts)) = s.get("enum") {
        if !opts.contains(v) {
            return fail("enum");
        }
    }
    if let Some(t) = s.get("type") {
        let types: Vec<&str> = match t {
            Value::String(t) => vec![t.as_str()],
            Value::Array(ts) => ts.iter().filter_map(Value::as_str).collect(),
            _ => unreachable!(),
        };
        let ok = types.iter().any(|t| match *t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "number" => v.is_number(),
            "integer" => v.is_u64() || v.is_i64(),
            "boolean" => v.is_boolean(),
            "null" => v.is_null(),
            _ => false,
        });
        if !ok {
            return fail(&format!("type {t}"));
        }
    }
    if let Some(Value::Array(req)) = s.get("required") {
        for k in req.iter().filter_map(Value::as_str) {
            if v.get(k).is_none() {
                return fail(&format!("missing {k}"));
            }
        }
    }
    if let (Some(Value::Object(props)), Value::Object(obj)) = (s.get("properties"), v) {
        for (k, sub) in props {
            if let Some(x) = obj.get(k) {
                conforms(x, sub, &format!("{at}.{k}"))?;
            }
        }
    }
    if let Value::Array(items) = v {
        let len = items.len() as u64;
        if s.get("minItems").and_then(Value::as_u64).is_some_and(|m| len < m)
            || s.get("maxItems").and_then(Value::as_u64).is_some_and(|m| len > m)
        {
            return fail("length");
        }
        let prefix = s.get("prefixItems").and_then(Value::as_array);
        for (i, x) in items.iter().enumerate() {
            let sub = prefix.and_then(|p| p.get(i)).or_else(|| s.get("items"));
            if let Some(sub) = sub {
                conforms(x, sub, &format!("{at}[{i}]"))?;
            }
        }
    }
    Ok(())
}

#[test]
fn bad_config_exits_2_and_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[physics]\nT = 5.0\nT_max = 1.0\n");
    let out = zk(&["scatter", "--config", &cfg, "--out", dir.path().to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("physics.T_max"));

    let cfg = write_config(dir.path(), "[grid]\nn = 64\nspacing = 1.0\n");
    let out = zk(&["verify-algebra", "--config", &cfg, "--quiet"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid"));
}

#[test]
fn default_config_round_trips() {
    let out = zk(&["default-config"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = zk_cli::ExperimentConfig::from_toml_str(&text).unwrap();
    assert_eq!(parsed, zk_cli::ExperimentConfig::default());
}

#[test]
fn verify_algebra_writes_its_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = zk(&["verify-algebra", "--config", &cfg, "--out", dir.path().to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = read_json(&dir.path().join("verify-algebra.json"));
    assert_eq!(v["identity"], "pass");
    assert!(v["intermediates"].as_array().unwrap().iter().all(|i| i["pass"] == true));
    assert!(v["coefficient_diff"].as_array().unwrap().is_empty());
    assert_eq!(v["mutations"].as_array().unwrap().len(), 18);
    assert!(!v["bound_ratios"].as_array().unwrap().is_empty());
}

#[test]
fn full_small_run_is_reproducible_and_matches_the_schema() {
    let root = tempfile::tempdir().unwrap();
    let cfg = write_config(root.path(), SMALL);
    let a = root.path().join("a");
    let b = root.path().join("b");
    for d in [&a, &b] {
        let out = zk(&["all", "--config", &cfg, "--out", d.to_str().unwrap(), "--quiet"]);
        // The projected decay needs the full grid, so the small run fails that gate.
        assert_eq!(out.status.code(), Some(1));
    }
    let ra: zk_cli::RunReport = serde_json::from_value(read_json(&a.join("report.json"))).unwrap();
    let rb: zk_cli::RunReport = serde_json::from_value(read_json(&b.join("report.json"))).unwrap();
    assert_eq!(ra.canonical_json(), rb.canonical_json());
    assert_eq!(ra.provenance.seed, 5);
    let failing: Vec<_> = ra.checks.iter().filter(|c| c.mandatory && !c.pass).map(|c| c.name.as_str()).collect();
    assert_eq!(failing, ["kpv_slope"]);

    let schema: Value = serde_json::from_str(SCHEMA_JSON).unwrap();
    conforms(&read_json(&a.join("report.json")), &schema, "$").unwrap();

    for f in [
        "linear_b1.csv",
        "kpv.csv",
        "bilinear_u2.csv",
        "u1_decay.csv",
        "conserve.csv",
        "scatter.csv",
        "scatter_summary.json",
    ] {
        assert!(a.join(f).is_file(), "{f}");
    }
    for scan in &ra.scans {
        let text = std::fs::read_to_string(a.join("plots").join(format!("{}.csv", scan.name))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,value"));
        let ts: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        assert_eq!(ts.len(), scan.samples.len());
        assert!(ts.windows(2).all(|w| w[0] <= w[1]));
        let fit = std::fs::read_to_string(a.join("plots").join(format!("{}_fit.csv", scan.name))).unwrap();
        assert!(fit.starts_with("t,measured,fit,target\n"));
    }
    let index = std::fs::read_to_string(a.join("trajectory/index.csv")).unwrap();
    let rows: Vec<&str> = index.lines().skip(1).collect();
    assert!(rows.len() >= 2);
    for r in rows {
        let name = r.split(',').nth(2).unwrap();
        let f = zk_core::spectral::read_snapshot(&a.join("trajectory").join(name)).unwrap();
        assert_eq!(f.grid().n(), 32);
    }
}

#[test]
fn schema_rejects_a_malformed_report() {
    let schema: Value = serde_json::from_str(SCHEMA_JSON).unwrap();
    let mut r = serde_json::to_value(zk_cli::RunReport::new("scatter", &zk_cli::ExperimentConfig::default())).unwrap();
    conforms(&r, &schema, "$").unwrap();
    r["schema"] = "zk-report/0".into();
    assert!(conforms(&r, &schema, "$").is_err());
    r["schema"] = "zk-report/1".into();
    r["checks"] = serde_json::json!([{ "name": "x" }]);
    assert!(conforms(&r, &schema, "$").is_err());
}
