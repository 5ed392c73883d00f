use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bockstein")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("bockstein-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn shipped_config() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json").display().to_string()
}

#[test]
fn ext_default_prints_c2_orders() {
    let o = bin(&["ext"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("orders [2,2,2,2,2]"), "{}", stdout(&o));
}

#[test]
fn les_on_trivial_group_reports_degeneration() {
    let o = bin(&["les"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("three-term degeneration true"), "{}", stdout(&o));
}

#[test]
fn props_seed_zero_hundred_cases() {
    let o = bin(&["props", "--seed", "0", "--cases", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("100/100 instances passed").count(), 4, "{}", stdout(&o));
}

#[test]
fn empty_case_list_gives_empty_report() {
    let d = scratch_dir("empty");
    let cfg = write(&d, "empty.json", r#"{"version": 1, "cases": []}"#);
    let out = d.join("report.json");
    let o = bin(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report, serde_json::json!({"version": 1, "cases": []}));
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn shipped_config_passes_and_is_deterministic() {
    let d = scratch_dir("default");
    let (a, b) = (d.join("a.json"), d.join("b.json"));
    let cfg = shipped_config();
    let first = bin(&["run", "--config", &cfg, "--out", a.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    let second = bin(&["run", "--config", &cfg, "--out", b.to_str().unwrap()]);
    assert_eq!(second.status.code(), Some(0));
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    assert_eq!(stdout(&first), stdout(&second));
    let report: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(report["version"], 1);
    let cases = report["cases"].as_array().unwrap();
    for kind in ["ext", "les", "mfred", "props"] {
        assert!(cases.iter().any(|c| c["kind"] == kind), "{kind}");
    }
    assert!(cases.iter().all(|c| c["ok"] == true && c.get("elapsed_ms").is_none()));
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn subcommand_filters_config_by_kind() {
    let o = bin(&["ext", "--config", &shipped_config()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("[Ext]") && !s.contains("[Les]") && !s.contains("[Props]"), "{s}");
}

#[test]
fn summary_numbers_appear_in_json() {
    let d = scratch_dir("numbers");
    let out = d.join("r.json");
    let o = bin(&["ext", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["cases"][0]["data"][0]["orders"], serde_json::json!([2, 2, 2, 2, 2]));
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn input_errors_exit_two_with_location() {
    let d = scratch_dir("errors");
    let cases = [
        (
            r#"{"cases":[{"kind":"ext","group":{"name":"C2"},"modulus":{"l":2,"r":2},"modules":[{"name":"trivial"},{"action":[[[0,1],[1,1]]]}]}]}"#,
            "cases[0].modules[1]",
        ),
        (r#"{"cases":[{"kind":"ext","group":{"name":"C5x"},"modulus":{"l":2,"r":1}}]}"#, "cases[0].group"),
        (r#"{"cases":[{"kind":"les","group":{"name":"C2"},"setup":{"l":2,"big_r":2,"a":2,"b":1}}]}"#, "cases[0].setup"),
        (r#"{"cases":[{"kind":"ext","group":{"name":"C2"},"modulus":{"l":6,"r":1}}]}"#, "cases[0].modulus"),
        (r#"{"cases":[{"kind":"ext","group":{"name":"C2"},"modulus":{"l":2,"r":1},"pairs":[[0,3]]}]}"#, "cases[0].pairs[0]"),
        (r#"{"cases":[{"kind":"ext","group":{"name":"C2"},"modulus":{"l":2,"r":1},"max_degree":40}]}"#, "cases[0].max_degree"),
        (r#"{"cases":[{"kind":"mfred","group":{"name":"C2"},"field":4}]}"#, "cases[0].field"),
        (r#"{"cases":[{"kind":"ext",]}"#, ":1:"),
        (r#"{"version": 7, "cases":[]}"#, "version"),
        (r#"{"cases":[{"kind":"ext","extra":1}]}"#, "unknown field"),
    ];
    for (i, (text, loc)) in cases.iter().enumerate() {
        let cfg = write(&d, &format!("c{i}.json"), text);
        let o = bin(&["run", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(2), "case {i}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(loc), "case {i}: {err}");
    }
    let o = bin(&["run", "--config", d.join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(d).unwrap();
}
