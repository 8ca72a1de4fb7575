use std::process::{Command, Output};

fn vsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vsc"))
        .args(args)
        .env_remove("VSC_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn single_values() {
    let o = vsc(&["vsc", "--model", "cp:3", "--d", "1", "--a", "2", "--b", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), r#"{"value":"1"}"#);

    let o = vsc(&["eval", "--model", "cp:3", "--sector", "open", "--d", "1", "--a", "2"]);
    assert_eq!(stdout(&o).trim(), r#"{"value":"2"}"#);

    let o = vsc(&["vsc", "--model", "cp:3", "--d", "1", "--a", "2", "--b", "2", "--insert", "0:1"]);
    assert_eq!(stdout(&o).trim(), r#"{"value":"0"}"#);
}

#[test]
fn bad_input_exits_with_two() {
    let o = vsc(&["vsc", "--model", "cp:2", "--d", "1", "--a", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = vsc(&["vsc", "--model", "cp:3", "--d", "1", "--a", "0", "--insert", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = vsc(&["table-disk", "--dmax", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mirror_map_text() {
    let o = vsc(&["series", "mirror", "--model", "hyp:8:9", "--dmax", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "t2 = x2 + 34138908 q"), "{text}");
    assert!(text.lines().any(|l| l == "t0 = x0"));
}

#[test]
fn series_csv_and_json() {
    let o = vsc(&["series", "gw", "--model", "cp:3", "--dmax", "2", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("series,q,monomial,coeff"));
    assert!(text.lines().all(|l| l.split(',').count() == 4));

    let o = vsc(&["series", "gw", "--model", "cp:3", "--sector", "open", "--dmax", "3/2", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().or_else(|| v["terms"].as_array()).expect("term list");
    assert!(!rows.is_empty());
}

#[test]
fn disk_table() {
    let o = vsc(&["table-disk", "--dmax", "3"]);
    let vals: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().last().unwrap().to_string()).collect();
    assert_eq!(vals, ["2", "-9/4", "3361/32"]);
}

#[test]
fn verify_reports_and_exits_zero() {
    let o = vsc(&["verify", "selection"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["failed"], 0);
    assert_eq!(vsc(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn config_file_and_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let conf = dir.path().join("vsc.conf");
    std::fs::write(&conf, format!("# test\nradii_retries = 4\ncache_dir = {}\n", cache.display())).unwrap();
    let o = vsc(&["--config", conf.to_str().unwrap(), "vsc", "--model", "cp:3", "--d", "2", "--a", "2", "--b", "2", "--insert", "2:3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_dir(&cache).unwrap().next().is_some());

    std::fs::write(&conf, "colour = blue\n").unwrap();
    let o = vsc(&["--config", conf.to_str().unwrap(), "vsc", "--model", "cp:3", "--d", "1", "--a", "2", "--b", "2"]);
    assert_eq!(o.status.code(), Some(2));
}
