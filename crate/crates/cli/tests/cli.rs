use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cherednik"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn normal_form_straightens_yx() {
    assert_eq!(
        ok(&["normal-form", "--ell", "1", "--n", "2", "y1*x1"]),
        "x1*y1 - hbar + k*perm=[2,1]t=[0,0]"
    );
}

#[test]
fn sigma_tau_is_xy_in_rank_one() {
    assert_eq!(ok(&["normal-form", "--ell", "1", "sigma*tau"]), "x1*y1");
}

#[test]
fn torsion_has_order_ell() {
    for ell in ["1", "2", "3", "4"] {
        let e = format!("t1^{ell}");
        assert_eq!(ok(&["normal-form", "--ell", ell, "--n", "2", &e]), "1");
    }
}

#[test]
fn normal_form_is_a_fixed_point() {
    let first = ok(&["normal-form", "--ell", "2", "--n", "2", "tau*s1*sigma + y2*x1"]);
    let second = ok(&["normal-form", "--ell", "2", "--n", "2", &first]);
    assert_eq!(first, second);
}

#[test]
fn set_specializes_parameters() {
    assert_eq!(
        ok(&["normal-form", "--n", "2", "--set", "k=-1/2,hbar=1", "y1*x1"]),
        "x1*y1 - 1 - 1/2*perm=[2,1]t=[0,0]"
    );
}

#[test]
fn parse_errors_exit_two() {
    for args in [
        &["normal-form", "u1 + p"][..],
        &["normal-form", "--n", "2", "x3"],
        &["normal-form", "sigma*"],
        &["loading", "--a", "1", "--k-mode", "bogus"],
        &["no-such-command"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn relations_pass_and_report_skips() {
    let out = ok(&["check", "relations", "--ell", "2", "--n", "2"]);
    assert!(out.ends_with("relations (n=2, ell=2): 50 checked, 0 failed"), "{out}");
    let out = ok(&["check", "relations", "--ell", "1", "--n", "1"]);
    assert!(out.contains("SKIP hecke"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn failing_suite_exits_one_and_names_the_instance() {
    let o = run(&["check", "euler", "--ell", "2", "--n", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL [eu,x1]: got -hbar*x1, expected hbar*x1"), "{out}");
    assert!(out.contains("PASS [eu,perm=[1]t=[1]]"));
}

#[test]
fn json_report_is_machine_readable() {
    let o = run(&["check", "relations", "--ell", "3", "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
    let failed: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["pass"] == false)
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["seam[]"]);
}

#[test]
fn act_poly_applies_words() {
    assert_eq!(ok(&["act-poly", "--n", "2", "u2"]), "U2");
    assert_eq!(ok(&["act-poly", "--ell", "2", "t1", "U1"]), "U1*T1");
}

#[test]
fn quiver_of_category_o_is_a_cycle() {
    let out = ok(&["quiver", "--k-mode", "rational:1/3", "--n", "2"]);
    assert!(out.contains("cycle lengths: [3]"), "{out}");
    assert!(out.contains("structure holds: true"));
}

#[test]
fn loading_reports_positions() {
    let out = ok(&["loading", "--k-mode", "rational:1/2", "--a", "0;1"]);
    assert!(out.contains("epsilon: 1/4"));
    assert!(out.contains("strand 1: 1/4 label 0"));
    assert!(out.contains("strand 2: 3/2 label 0"));
}

#[test]
fn steady_accepts_negative_values() {
    let out = ok(&["steady", "--k-mode", "rational:1/2", "--s", "-11", "--a", "10;10;15/2"]);
    assert!(out.ends_with("+: steady\n-: unsteady, delta 10 separates strands [3]"), "{out}");
}

#[test]
fn steady_from_multipartition_needs_rational_k() {
    assert_eq!(run(&["steady", "--ell", "2", "--multipartition", "2|1"]).status.code(), Some(2));
    let out = ok(&["steady", "--ell", "2", "--k-mode", "rational:1/2", "--multipartition", "2|1"]);
    assert!(out.contains("+: unsteady"));
}

#[test]
fn kz_weights_spacing() {
    let out = ok(&["kz-weights", "--ell", "2", "--k-mode", "rational:1/2", "--d", "0;1/2", "--stability", "-"]);
    assert_eq!(out, "N: 6\na: (6, 25/2)\nz: [0, 0]");
}

#[test]
fn diagram_renders() {
    let out = ok(&["render-diagram", "--n", "2", "s1"]);
    assert_eq!(out, "coefficient 1\n  \\ /    s1\n  / \\");
}
