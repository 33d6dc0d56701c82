use std::process::{Command, Output};

use nilharm::exterior::Form;
use nilharm::flexibility::Cone;
use nilharm::liespec::LieAlgebraSpec;
use nilharm::scalar::render_scalar_list;
use serde_json::Value;

const WORKED: &str = "(0,0,0,12,14,15+23+24)";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilharm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, String) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    let text = stdout(&o);
    (serde_json::from_str(&text).unwrap(), text)
}

/// Worked-example coordinates over the `Z²` basis for `D·(a16+a25-a34) + E·(a26-a45)`.
fn worked_omega(d: i64, e: i64) -> String {
    let spec = LieAlgebraSpec::parse(WORKED).unwrap();
    let cone = Cone::new(&spec).unwrap();
    let text = format!("{d}*a16 + {d}*a25 - {d}*a34 + {e}*a26 - {e}*a45");
    render_scalar_list(&cone.description.coords_of(&Form::parse(6, &text).unwrap()).unwrap())
}

#[test]
fn info_on_table_row() {
    let o = run(&["info", "(0,0,0,0,0,12)"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("symplectic  yes"), "{text}");
    assert!(text.contains("moduli      12"), "{text}");
    let (v, _) = json(&["info", "(0,0,0,0,0,12)"]);
    assert_eq!(v["command"], "info");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["inputs"]["spec"], "(0,0,0,0,0,12)");
    let r = &v["results"];
    assert_eq!((r["betti"][1].as_u64(), r["betti"][2].as_u64()), (Some(5), Some(11)));
    assert_eq!(r["moduli_dim"], 12);
    assert_eq!(r["symplectic"], true);
    assert_eq!(r["z2_basis"].as_array().unwrap().len(), 12);
}

#[test]
fn info_on_non_symplectic_row() {
    let (v, _) = json(&["info", "(0,0,0,12,14,24)"]);
    assert_eq!(v["results"]["symplectic"], false);
    assert!(v["results"]["moduli_dim"].is_null());
    assert!(v["results"]["witness"].is_null());
}

#[test]
fn h_on_worked_example() {
    let omega = worked_omega(1, 1);
    let o = run(&["h", WORKED, "--omega", &omega]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("h           (1,3,5,5,4,2,1)"), "{}", stdout(&o));
    let (v, _) = json(&["h", WORKED, "--omega", &worked_omega(1, 0)]);
    let h: Vec<u64> = v["results"]["h"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(&h[3..6], &[4, 3, 0]);
}

#[test]
fn json_round_trips_byte_identically() {
    let omega = worked_omega(2, 3);
    for args in [
        vec!["info", WORKED],
        vec!["h", WORKED, "--omega", &omega],
        vec!["starcheck", WORKED, "--omega", &omega, "--seed", "4"],
        vec!["valuesets", "(0,0,0,0,12,13)", "--budget", "1,2,50"],
        vec!["flexible", "(0,0,0,0,12,13)", "--budget", "1,2,50"],
    ] {
        let (v, text) = json(&args);
        assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), text, "{args:?}");
    }
}

#[test]
fn output_is_deterministic_across_jobs() {
    let a = json(&["valuesets", "(0,0,12,13,23,14-25)", "--budget", "1,3,100", "--jobs", "1"]).1;
    let b = json(&["valuesets", "(0,0,12,13,23,14-25)", "--budget", "1,3,100", "--jobs", "3"]).1;
    assert_eq!(a, b);
}

#[test]
fn starcheck_passes() {
    let o = run(&["starcheck", WORKED, "--omega", &worked_omega(1, 1)]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn flexible_reports_certificate_or_not_found() {
    let (v, _) = json(&["flexible", "(0,0,0,0,12,13)"]);
    assert_eq!(v["results"]["found"], true);
    assert!(v["results"]["certificate"]["nonvanishing_proof"].is_object());
    let o = run(&["flexible", "(0,0,0,0,0,0)", "--budget", "1,2,20"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("not found"));
}

#[test]
fn input_errors_exit_with_two() {
    let cases: [(&[&str], &str); 6] = [
        (&["info", "(0,0,1x)"], "(0,0,1x)"),
        (&["h", WORKED, "--omega", "1,2,x/3"], "x/3"),
        (&["h", WORKED, "--omega", "1,2"], "expected"),
        (&["h", WORKED, "--omega", "0,0,0,0,0,0,0,0"], "degenerate"),
        (&["valuesets", WORKED, "--budget", "1,2"], "1,2"),
        (&["h", "(0,0,0,12,14,24)", "--omega", "1"], "no symplectic"),
    ];
    for (args, token) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(token), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn catalog_zero_budget_reports_insufficient_budget() {
    let o = run(&["catalog", "--budget", "zero"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("insufficient budget"));
    assert!(text.contains("rows verified"));
}
