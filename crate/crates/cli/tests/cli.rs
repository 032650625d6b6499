use std::process::{Command, Output};

fn ecpre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecpre"))
        .args(args)
        .env_remove("ECPRE_RHO_BUDGET")
        .env_remove("ECPRE_SUBSET_BUDGET")
        .output()
        .expect("run ecpre")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixtures() -> String {
    format!("{}/../../fixtures/curves.txt", env!("CARGO_MANIFEST_DIR"))
}

const Y2_X3_M2: &str = "0,0,0,0,-2";

#[test]
fn delta_of_2p() {
    let o = ecpre(&[
        "delta",
        "--curve",
        Y2_X3_M2,
        "--point",
        "129/100,-383/1000",
        "--m",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("x^4 - 129/25*x^3 + 16*x + 258/25"), "{s}");
    assert!(s.contains("(x - 3)*"), "{s}");
    assert!(
        s.lines().any(|l| l.starts_with("n:") && l.ends_with(" 2")),
        "{s}"
    );
}

#[test]
fn classify_names_witness() {
    let o = ecpre(&[
        "classify",
        "--curve",
        Y2_X3_M2,
        "--point",
        "129/100,-383/1000",
        "--l",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("case iii; witness (3, 5)"));
}

#[test]
fn eds_terms() {
    let o = ecpre(&["eds", "--curve", Y2_X3_M2, "--point", "3,5", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("B: 1, 10, 171\n"));
}

#[test]
fn factor_mod_p() {
    let o = ecpre(&["factor", "--poly", "x^3+1", "--mod", "5"]);
    assert!(stdout(&o).contains("(x + 1)*(x^2 + 4*x + 1)"));
    let o = ecpre(&["factor", "--poly", "x^3+1", "--mod", "6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn printed_points_reparse() {
    let o = ecpre(&[
        "divide",
        "--curve",
        Y2_X3_M2,
        "--point",
        "129/100,-383/1000",
        "--l",
        "2",
    ]);
    let s = stdout(&o);
    let q = s
        .lines()
        .find_map(|l| l.strip_prefix("Q1:"))
        .expect("a pre-image")
        .trim()
        .to_string();
    let o = ecpre(&["eds", "--curve", Y2_X3_M2, "--point", &q, "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("B: 1, 10\n"));
}

#[test]
fn parse_errors_point_at_the_input() {
    let o = ecpre(&[
        "delta",
        "--curve",
        "0,0,x,0,1",
        "--point",
        "1,1",
        "--m",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("position 4"), "{err}");
    assert!(err.contains("0,0,x,0,1"));
}

#[test]
fn point_off_curve_is_input_error() {
    let o = ecpre(&["delta", "--curve", Y2_X3_M2, "--point", "1,1", "--m", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_help_codes() {
    assert_eq!(ecpre(&["bogus"]).status.code(), Some(1));
    assert_eq!(ecpre(&["delta", "--m", "2"]).status.code(), Some(1));
    assert_eq!(ecpre(&["--help"]).status.code(), Some(0));
    assert_eq!(ecpre(&["--version"]).status.code(), Some(0));
}

#[test]
fn labels_need_fixtures() {
    let o = ecpre(&["mazur", "--curve", "37a1"]);
    assert_eq!(o.status.code(), Some(1));
    let f = fixtures();
    let o = ecpre(&["--fixtures", &f, "eds", "--curve", "37a1", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("B: 1, 1, 1, 1\n"), "{}", stdout(&o));
}

#[test]
fn tiny_budget_is_resource_limit() {
    let o = ecpre(&[
        "--rho-budget",
        "1",
        "eds",
        "--curve",
        Y2_X3_M2,
        "--point",
        "3,5",
        "--n",
        "14",
    ]);
    let s = stdout(&o);
    // either a reported incomplete census or a resource-limit exit
    assert!(
        o.status.code() == Some(2) || s.contains("unfactored"),
        "{s}"
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "verify-ff",
        "--primes",
        "5,7",
        "--l",
        "3",
        "--output",
        "records",
    ];
    let a = ecpre(&args);
    let b = ecpre(&args);
    assert_eq!(a.status.code(), Some(0));
    // elapsed time is not part of the output
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.contains("counterexamples=0"));
}

#[test]
fn magnified_and_class() {
    let o = ecpre(&[
        "magnified",
        "--curve",
        Y2_X3_M2,
        "--point",
        "3,5",
        "--mmax",
        "6",
    ]);
    assert!(stdout(&o).contains("first m:        3"));
    let o = ecpre(&["isogenies", "--curve", "0,0,0,-1,0", "--class"]);
    assert!(stdout(&o).contains("size:         4"));
}

#[test]
fn census_of_2p() {
    let o = ecpre(&["census", "--curve", Y2_X3_M2, "--point", "129/100,-383/1000", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("verdict:") && s.contains("consistent"), "{s}");
    assert!(s.contains("(approx)"));
}
