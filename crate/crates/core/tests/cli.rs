use std::process::{Command, Output};

fn qmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmix"))
        .args(args)
        .output()
        .expect("qmix runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn group_reports_order() {
    let o = qmix(&["group", "alt:5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=60"));
}

#[test]
fn bad_specs_exit_2() {
    for spec in ["cyclic:1", "psl2:9", "alt5", "sym:9", "prod:cyclic:2"] {
        let o = qmix(&["group", spec]);
        assert_eq!(o.status.code(), Some(2), "{spec}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(qmix(&["group", "alt:5", "--bogus"]).status.code(), Some(2));
    assert_eq!(qmix(&["verify", "alt:5", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn group_file_has_magic() {
    let path = std::env::temp_dir().join(format!("qmix_cli_{}.qmg", std::process::id()));
    let o = qmix(&["group", "sl2:7", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bytes = std::fs::read(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    assert_eq!(&bytes[..4], b"QMG1");
    assert_eq!(bytes.len(), 4 + 4 + 4 * 336 * 336 + 4 * 336);
}

#[test]
fn chartab_json() {
    let o = qmix(&["chartab", "alt:5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["degrees"], serde_json::json!([1, 3, 3, 4, 5]));
    assert_eq!(v["D"], 3);
}

#[test]
fn chartab_flags_abelian_groups() {
    let o = qmix(&["chartab", "cyclic:8"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("degrees: 1 1 1 1 1 1 1 1"));
    assert!(out.contains("D: 1 (not quasirandom)"));
}

#[test]
fn chartab_zeta_psl2_7() {
    let o = qmix(&["chartab", "psl2:7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let zeta = v["zeta1"].as_f64().unwrap();
    let expect = 2.0 / 3.0 + 1.0 / 6.0 + 1.0 / 7.0 + 1.0 / 8.0;
    assert!((zeta - expect).abs() < 1e-12);
    assert!(stdout(&qmix(&["chartab", "psl2:7"])).contains("zeta(1)-1: 1.10119"));
}

#[test]
fn verify_fcmu_passes() {
    assert_eq!(qmix(&["verify", "alt:5", "--suite", "fcmu"]).status.code(), Some(0));
}

#[test]
fn verify_requires_quasirandom_group() {
    let o = qmix(&["verify", "cyclic:6", "--suite", "bnp"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not quasirandom (D=1)"));
}

#[test]
fn verify_all_on_abelian_group_skips_quasirandom_suites() {
    let o = qmix(&["verify", "cyclic:6", "--suite", "all", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping bnp"));
}

#[test]
fn verify_json_rows_follow_schema() {
    let o = qmix(&["verify", "alt:5", "--suite", "bnp", "--trials", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 4);
    for (t, row) in rows.iter().enumerate() {
        for key in ["group", "n", "D", "lemma_id", "mode", "lhs", "rhs", "margin", "stderr", "seed", "passed"] {
            assert!(row.get(key).is_some(), "missing {key}");
        }
        assert_eq!(row["trial"], t);
        assert_eq!(row["lemma_id"], "bnp");
    }
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["verify", "psl2:7", "--suite", "gamma", "--trials", "3", "--format", "csv"];
    let a = stdout(&qmix(&args));
    let b = stdout(&qmix(&args));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 4);
    assert!(a.starts_with("group,n,D,lemma_id,mode,lhs,rhs,margin,stderr,seed,passed"));
}

#[test]
fn replaying_a_trial_reproduces_its_row() {
    let all = stdout(&qmix(&["verify", "alt:5", "--suite", "chain", "--trials", "3", "--format", "json"]));
    let one = stdout(&qmix(&[
        "verify", "alt:5", "--suite", "chain", "--trial", "2", "--format", "json",
    ]));
    assert_eq!(all.lines().nth(2).unwrap(), one.trim());
}

#[test]
fn mix_singletons_on_z5() {
    let o = qmix(&["mix", "cyclic:5", "--sets", "[[0],[0],[0]]"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("theta=0.032"), "{out}");
    assert!(out.contains("vacuous"));
}

#[test]
fn mix_random_rows() {
    let o = qmix(&["mix", "sl2:13", "--random", "0.5", "--trials", "20", "--seed", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let bound = (2.0 / 6f64.sqrt()).powf(0.25);
    let rows: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r["theta"].as_f64().unwrap() <= bound));
}

#[test]
fn mix_rejects_malformed_sets() {
    for sets in ["[[0],[0]]", "[[0],[0],[99]]", "not json"] {
        assert_eq!(qmix(&["mix", "cyclic:5", "--sets", sets]).status.code(), Some(2), "{sets}");
    }
    assert_eq!(qmix(&["mix", "cyclic:5", "--random", "1.5"]).status.code(), Some(2));
    assert_eq!(qmix(&["mix", "cyclic:5"]).status.code(), Some(2));
}

#[test]
fn search_reports_best_triple() {
    let o = qmix(&["search", "psl2:7", "--budget", "5000", "--restarts", "5", "--seed", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let theta = v["report"]["theta"].as_f64().unwrap();
    assert!(theta >= v["initial_theta"].as_f64().unwrap());
    assert!(theta <= v["report"]["bound"].as_f64().unwrap());
    assert_eq!(v["sets"].as_array().unwrap().len(), 3);
}

#[test]
fn thread_count_env_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_qmix"))
        .args(["group", "alt:5"])
        .env("QMIX_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_qmix"))
        .args(["verify", "alt:5", "--suite", "bnp", "--trials", "2"])
        .env("QMIX_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
