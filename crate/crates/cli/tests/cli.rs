use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrwkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn bounds_lk() {
    let o = run(&["bounds", "--lk", "0", "--c", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "6\n");
    let o = run(&["bounds", "--lk", "1", "--c", "2"]);
    assert_eq!(stdout(&o), "9\n");
}

#[test]
fn bounds_plength_and_main() {
    let o = run(&["bounds", "--p", "1", "--s", "1", "--q", "2"]);
    assert_eq!(stdout(&o).trim(), (3u64 << 36).to_string());
    let o = run(&["bounds", "--p", "1"]);
    assert!(stdout(&o).starts_with("s 2\nexponent 105\n"));
    let o = run(&["bounds"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lrw_of_c5() {
    let o = run(&["lrw", "--graph", &data("c5.g"), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("lrw 2\nwidth 2\norder "));
    assert!(out.contains("verified true"));
}

#[test]
fn figure_one_manifest() {
    let o = run(&["obstructions", "--field", "2", "--relation", "vertex", "--p", "1", "--nmax", "6", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().last(), Some("obstructions vertex p=1 n_max=6 count=3"));
    assert_eq!(out.matches("field 2 1").count(), 3);
}

#[test]
fn output_is_deterministic() {
    let args = ["obstructions", "--p", "1", "--nmax", "6", "--relation", "vertex"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["orbit", "--graph", &data("c5.g"), "--members"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn json_has_versioned_header() {
    let o = run(&["lrw", "--graph", &data("c5.g"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["format"], "lrwkit");
    assert_eq!(v["version"], 1);
    assert_eq!(v["command"], "lrw");
    assert_eq!(v["lrw"], 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["lrw"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["orbit", "--graph", &data("c5.g"), "--relation", "edge"]).status.code(), Some(2));
    let o = run(&["profile", "--graph", &data("p4_boundaried.g"), "--layout", &data("p4.layout"), "--p", "1", "--mode", "sampled"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--seed"));
}

#[test]
fn domain_errors_exit_1_with_variant_name() {
    let o = run(&["pivot", "--graph", &data("p3.g"), "--seq", "0:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NonEdgePivot"));
    let o = run(&["layout-check", "--graph", &data("c5.g"), "--layout", &data("c5_wrong.layout")]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["obstructions", "--field", "3", "--sigma", "negation", "--relation", "vertex", "--p", "1", "--nmax", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FieldNotBinary"));
    let o = run(&["lrw", "--graph", &data("missing.g")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn layout_check_reports_linkedness() {
    let o = run(&["layout-check", "--graph", &data("c5.g"), "--layout", &data("c5.layout"), "--encoding", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("cuts 1 2 2 1"));
    assert!(out.contains("decodes true"));
    assert!(out.contains("encoding t 5 width 2"));
}

#[test]
fn pivot_over_gf3() {
    let o = run(&["pivot", "--graph", &data("gf3_path.g"), "--seq", "0:1", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sigma negation"));
    assert!(stdout(&o).contains("verified true"));
}

#[test]
fn minor_and_orbit() {
    let o = run(&["minor-test", "--graph", &data("c5.g"), "--minor", &data("p3.g"), "--relation", "vertex"]);
    assert_eq!(stdout(&o), "minor true\n");
    let o = run(&["orbit", "--graph", &data("c5.g"), "--relation", "vertex", "--limit", "1"]);
    assert!(stdout(&o).contains("truncated=true"));
}

#[test]
fn tutte_link_verifies() {
    let o = run(&["tutte-link", "--graph", &data("p6.g"), "--x", "0", "--y", "5", "--k", "1", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified true"));
    let o = run(&["tutte-link", "--graph", &data("p6.g"), "--x", "0", "--y", "5", "--k", "2"]);
    assert_eq!(stdout(&o), "link none\n");
}

#[test]
fn matroid_commands() {
    let o = run(&["matroid-pw", "--matroid", &data("k4.m"), "--verify"]);
    assert!(stdout(&o).starts_with("pathwidth 3\n"));
    let o = run(&["fundamental", "--matroid", &data("k4.m"), "--basis", "0,1,2", "--verify"]);
    assert!(stdout(&o).contains("verified true"));
    let o = run(&["fundamental", "--matroid", &data("k4.m"), "--basis", "0,1,3"]);
    assert!(stderr(&o).contains("NotABasis"));
    let o = run(&["matroid-obstruction", "--matroid", &data("u24.m"), "--k", "1", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn profile_and_dominance() {
    let o = run(&["profile", "--graph", &data("p4_boundaried.g"), "--layout", &data("p4.layout"), "--p", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("profile s 1 t 4"));
    assert!(out.trim_end().ends_with("exact"));
    let o = run(&[
        "profile", "--graph", &data("p4_boundaried.g"), "--layout", &data("p4.layout"), "--p", "1", "--mode", "sampled", "--seed", "3",
        "--budget", "20",
    ]);
    assert!(stdout(&o).trim_end().ends_with("lower-bound"));
    let o = run(&["dominance", "--left", &data("zero.prof"), "--right", &data("one.prof"), "--p", "1"]);
    assert_eq!(stdout(&o), "dominated true exact\n");
    let o = run(&["dominance", "--left", &data("one.prof"), "--right", &data("zero.prof"), "--p", "1"]);
    assert_eq!(stdout(&o), "dominated false exact\n");
}
