use std::process::{Command, Output};

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv")).args(args).env_remove("MZV_CACHE_DIR").output().expect("spawn mzv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn weight_six_csv_row() {
    let o = mzv(&["tables", "--max-weight", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("6,y₅y₁,")).expect("y₅y₁ row");
    assert!(row.contains("(2/7)ζ(Σ_{y₂})³ − ½ζ(Σ_{y₃})²"), "{row}");
    assert!(out.starts_with("weight,lyndon_word_Y,sigma_expression,lyndon_word_X,s_expression\n"));
}

#[test]
fn weight_two_has_no_rules() {
    let o = mzv(&["tables", "--max-weight", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["rules"].as_array().unwrap().len(), 0);
    assert_eq!(j["complete"], true);
    let irr = j["irreducibles"].as_array().unwrap();
    assert_eq!(irr.len(), 1);
    assert_eq!(irr[0]["sigma"], serde_json::json!(["2"]));
}

#[test]
fn irreducible_counts_through_eight() {
    let o = mzv(&["tables", "--max-weight", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for row in j["irreducibles"].as_array().unwrap() {
        let n = row["weight"].as_u64().unwrap();
        let expected = if [2, 3, 5, 7, 8].contains(&n) { 1 } else { 0 };
        assert_eq!(row["sigma"].as_array().unwrap().len(), expected, "weight {n}");
        assert_eq!(row["s"].as_array().unwrap().len(), expected, "weight {n}");
    }
}

#[test]
fn verify_passes_at_weight_five() {
    let o = mzv(&["verify", "--max-weight", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = mzv(&[
        "verify",
        "--max-weight",
        "5",
        "--numeric-check",
        "--cutoff",
        "100000",
        "--tol",
        "1e-3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = j["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["duality", "triangularity", "primitivity", "schutzenberger", "agreement", "numeric"]);
    assert_eq!(j["pass"], true);
}

#[test]
fn configuration_errors_exit_two() {
    let o = mzv(&["verify", "--max-weight", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max_weight >= 2"));
    assert_eq!(mzv(&["basis", "--basis", "Sigma", "--alphabet", "x"]).status.code(), Some(2));
    assert_eq!(mzv(&["tables", "--max-weight", "11"]).status.code(), Some(2));
    assert_eq!(mzv(&["tables", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(mzv(&["decompose", "--poly", "1:0,1"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = mzv(&["tables", "--max-weight", "7", "--format", "json"]);
    let b = mzv(&["tables", "--max-weight", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = mzv(&["relations", "--max-weight", "5", "--relations", "all", "--format", "csv"]);
    let b = mzv(&["relations", "--max-weight", "5", "--relations", "all", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn numeric_report_rows() {
    let o = mzv(&["relations", "--max-weight", "4", "--numeric-check", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for row in j.as_array().unwrap() {
        assert!(row["relation_id"].is_string());
        assert!(row["value"].as_f64().unwrap().abs() < 1e-3);
        assert_eq!(row["tol"], 1e-3);
        assert_eq!(row["pass"], true);
    }
}

#[test]
fn basis_element_json() {
    let o = mzv(&["basis", "--basis", "Sigma", "--word", "2,1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j[0]["basis"], "Sigma");
    assert_eq!(j[0]["word"], "2,1");
    assert_eq!(j[0]["poly"]["alphabet"], "Y");
}

#[test]
fn decompose_worked_example() {
    let o = mzv(&["decompose", "--basis", "Sigma", "--poly", "1:2,1;-1/2:3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "word,coeff\n3,-1\n\"2,1\",1\n");
}

#[test]
fn lyndon_listing() {
    let o = mzv(&["lyndon", "--alphabet", "x", "--max-weight", "3", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "weight,word,pretty,left,right\n1,0,x₀,,\n1,1,x₁,,\n2,01,x₀x₁,0,1\n3,001,x₀²x₁,0,01\n3,011,x₀x₁²,01,1\n"
    );
}

#[test]
fn side_filter_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("irr.csv");
    let o =
        mzv(&["irreducibles", "--side", "S", "--max-weight", "5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.contains(",S,")));
}

#[test]
fn time_limit_flags_partial_results() {
    let o = mzv(&["tables", "--max-weight", "6", "--time-limit", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["complete"], false);
    assert_eq!(j["reached_weight"], 1);
}

#[test]
fn cache_directory_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_mzv"))
            .args(["tables", "--max-weight", "5", "--format", "csv"])
            .env("MZV_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    assert!(dir.path().join("Sigma_Y_5.json").exists());
    assert!(dir.path().join("P_X_3.json").exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, mzv(&["tables", "--max-weight", "5", "--format", "csv"]).stdout);
}
