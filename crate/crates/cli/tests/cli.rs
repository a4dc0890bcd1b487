use std::process::{Command, Output};

use genmarkov::format::{from_csv, from_json, ReportDoc, SearchDoc, TableRow, ThresholdsDoc};
use genmarkov::ViolationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genmarkov"))
        .args(args)
        .env_remove("GENMARKOV_DIGITS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn markov_prints_decimal() {
    let o = run(&["markov", "9", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "9077\n");
    let o = run(&["markov", "40", "0"]);
    assert_eq!(stdout(&o), "23416728348467685\n");
}

#[test]
fn classify_decreasing_witness() {
    let o = run(&["classify", "--k", "-2/1", "--b", "20/1"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: ReportDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.classification, "Decreasing");
    let values: Vec<&str> = doc.points.iter().map(|p| p.value.as_str()).collect();
    assert_eq!(values, ["33461", "16725", "9077"]);
}

#[test]
fn classify_csv_summary() {
    let o = run(&["classify", "--k", "-6/5", "--b", "149/5", "--format", "csv", "--digits", "6"]);
    let text = stdout(&o);
    assert!(text.starts_with("line,classification,n_points,turning_x,turning_y,first_ratio_decimal,last_ratio_decimal\n"));
    assert!(text.contains("NonMonotonic"));
    assert!(text.contains(",19,7,"));
}

#[test]
fn thresholds_at_four_places() {
    let o = run(&["thresholds", "--digits", "4", "--format", "json"]);
    let doc: ThresholdsDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!((doc.k_plus.as_str(), doc.k_minus.as_str()), ("-1.1432", "-1.2417"));
}

#[test]
fn digits_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_genmarkov"))
        .args(["thresholds", "--format", "json"])
        .env("GENMARKOV_DIGITS", "7")
        .output()
        .unwrap();
    let doc: ThresholdsDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.digits, 7);
    assert_eq!(doc.phi, "1.6180340");
}

#[test]
fn table_rows_cover_the_triangle() {
    let o = run(&["table", "--qmax", "6"]);
    let rows: Vec<TableRow> = from_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), (2..=7).sum::<usize>());
    assert_eq!(rows[0], TableRow { q: 1, p: 0, value: "1".into() });
    assert!(rows.contains(&TableRow { q: 5, p: 2, value: "194".into() }));
}

#[test]
fn ratios_along_a_line() {
    let o = run(&["ratios", "--k", "-1/1", "--b", "7/1", "--digits", "4"]);
    let text = stdout(&o);
    assert_eq!(
        text,
        "x,y,next_x,next_y,numerator,denominator,decimal\n4,3,5,2,194,169,1.1479\n5,2,6,1,233,194,1.2010\n"
    );
}

#[test]
fn limits_and_search() {
    let o = run(&["limits", "--slope", "1/1", "--nmax", "10", "--digits", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("upper,10,"));
    let o = run(&["search-nonmono", "--slope", "6/5"]);
    let doc: SearchDoc = from_json(&stdout(&o)).unwrap();
    assert_eq!(doc.intercept.as_deref(), Some("149/5"));
    assert_eq!(doc.report.unwrap().turning_point, Some([19, 7]));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--suite", "identities", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: ViolationReport = from_json(&stdout(&o)).unwrap();
    assert!(r.passed());
    // the mixed slope converges too slowly for the default tolerance
    let o = run(&["verify", "--suite", "tail_convergence"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["markov", "3"][..],
        &["markov", "3", "5"],
        &["classify", "--k", "1.5", "--b", "1"],
        &["search-nonmono", "--slope", "1/1"],
        &["verify", "--suite", "nope"],
        &["verify", "--suite", "identities", "--bounds", "qmax"],
        &["limits", "--slope", "4/2"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["ratios", "--k", "1/2", "--b", "1/1"]);
    assert_eq!(o.status.code(), Some(2), "nonnegative slope needs a cap");
}

#[test]
fn output_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = run(&["markov", "5", "3", "--format", "json", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("\"433\""));

    let cache = dir.path().join("cache.txt");
    let o = run(&["markov", "9", "2", "--cache", cache.to_str().unwrap()]);
    assert_eq!(stdout(&o), "9077\n");
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.lines().any(|l| l == "9,2,9077"));
    // a second run reads the cache back
    let o = run(&["markov", "9", "2", "--cache", cache.to_str().unwrap()]);
    assert_eq!(stdout(&o), "9077\n");
    std::fs::write(&cache, "not a cache\n").unwrap();
    assert_eq!(run(&["markov", "9", "2", "--cache", cache.to_str().unwrap()]).status.code(), Some(2));
}
