use std::process::{Command, Output};

use junction_cli::payload::{complex_json, format_complex, parse_complex, parse_complex_list, parse_extended, extended_json};
use junction_core::ExtendedReal;
use num_complex::Complex64;
use proptest::prelude::*;
use serde_json::Value;

fn junction(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_junction")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let o = junction(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn complex(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn close(v: &Value, re: f64, im: f64) -> bool {
    (complex(v) - Complex64::new(re, im)).norm() < 1e-12
}

#[test]
fn decompose_examples() {
    let v = json_out(&["decompose", "--matrix", "[[[0,0],[-1,0]],[[1,0],[0,0]]]"]);
    assert!(close(&v["gamma1"], 0.0, 0.0) && close(&v["gamma2"], 1.0, 0.0) && close(&v["gamma3"], 1.0, 0.0));

    let v = json_out(&["decompose", "--matrix", "[[[1,0],[0,0]],[[0,0],[1,0]]]"]);
    assert!(close(&v["gamma1"], 1.0, 0.0) && close(&v["gamma2"], 0.0, 0.0) && close(&v["gamma3"], 1.0, 0.0));

    let o = junction(&["decompose", "--matrix", "[[[1,0],[1,0]],[[0,0],[1,0]]]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("residual"));
}

#[test]
fn convert_examples() {
    let v = json_out(&["convert", "u2-to-bc", "--gamma", "0,-i,i", "--mass", "0"]);
    assert_eq!(v["type"], "transmitting");
    let want = [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)];
    for (got, (re, im)) in v["alpha"].as_array().unwrap().iter().zip(want) {
        assert!(close(got, re, im), "{got}");
    }

    let o = junction(&["convert", "u2-to-bc", "--diag", "-1,-1"]);
    assert_eq!(stdout(&o).trim(), r#"{"type":"separating","rho_plus":"inf","rho_minus":"inf"}"#);

    let v = json_out(&["convert", "alpha-to-bd", "--alpha", "0,1,1,0"]);
    assert!((v["theta"].as_f64().unwrap() - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let a: Vec<f64> = v["a"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(a, vec![0.0, 1.0, 1.0, 0.0]);

    let v = json_out(&["convert", "bd-to-alpha", "--bd", "0,1,1,0", "--theta", "3pi/2"]);
    assert!(close(&v["alpha"][1], 1.0, 0.0) && close(&v["alpha"][0], 0.0, 0.0));

    let v = json_out(&["convert", "u2-to-bc", "--gamma", "1,0,1"]);
    assert_eq!(v["type"], "separating");

    let v = json_out(&["convert", "rho-to-u2", "--rho", "inf,inf"]);
    assert!(close(&v["gamma_l"], -1.0, 0.0) && close(&v["gamma_r"], -1.0, 0.0));
}

#[test]
fn bc_to_u2_carries_printed_block() {
    let v = json_out(&["convert", "bc-to-u2", "--alpha", "1,0.5i,0,1", "--mass", "0.7"]);
    let p = &v["printed_formula"];
    let flags = [&p["agrees_exactly"], &p["agrees_up_to_sign_pair"], &p["disagrees"]];
    assert_eq!(flags.iter().filter(|f| f.as_bool() == Some(true)).count(), 1);
    assert!(["exact", "sign_pair", "mismatch"].contains(&p["agreement"].as_str().unwrap()));
    // the primary inverse reproduces alpha through the forward map
    let g: Vec<String> = ["gamma1", "gamma2", "gamma3"].iter().map(|k| format_complex(complex(&v[*k]))).collect();
    let back = json_out(&["convert", "u2-to-bc", "--gamma", &g.join(","), "--mass", "0.7"]);
    let want = [(1.0, 0.0), (0.0, 0.5), (0.0, 0.0), (1.0, 0.0)];
    for (got, (re, im)) in back["alpha"].as_array().unwrap().iter().zip(want) {
        assert!(close(got, re, im), "{got}");
    }
}

#[test]
fn convert_validation_exits_2() {
    for args in [
        vec!["convert", "bc-to-u2", "--alpha", "1,1,0,1"],
        vec!["convert", "u2-to-bc", "--diag", "2,1"],
        vec!["convert", "u2-to-bc", "--gamma", "1,1,1"],
        vec!["convert", "bd-to-alpha", "--bd", "1,1,1,1", "--theta", "0"],
        vec!["convert", "u2-to-bc", "--gamma", "0,1,1", "--mass", "-1"],
        vec!["convert", "alpha-to-bd"],
        vec!["convert", "sideways"],
    ] {
        assert_eq!(junction(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_examples() {
    let o = junction(&["verify", "--alpha", "0,1,1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let o = junction(&["verify", "--alpha", "1,1,0,1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Re(a1 a2*) = 1.000000e0"), "{err}");

    let o = junction(&["verify", "--rho", "inf,-2", "--mass", "1", "--lambda", "0.5"]);
    assert_eq!(o.status.code(), Some(0));

    let o = junction(&["verify", "--fuzz", "1000", "--mass", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn verify_is_deterministic_and_seeded() {
    let a = junction(&["verify", "--fuzz", "50", "--mass", "0.3"]);
    let b = junction(&["verify", "--fuzz", "50", "--mass", "0.3"]);
    assert_eq!(a.stdout, b.stdout);
    let c = junction(&["verify", "--fuzz", "50", "--mass", "0.3", "--seed", "7"]);
    assert_ne!(a.stdout, c.stdout);
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["E", "k", "lambda", "re_r", "im_r", "re_t", "im_t", "R", "T", "phase_t", "flag"]
    );
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn col(row: &[String], k: usize) -> f64 {
    row[k].parse().unwrap()
}

#[test]
fn scatter_examples() {
    let text = stdout(&junction(&["scatter", "--alpha", "0,1,1,0", "--mass", "0", "--emin", "0.5", "--emax", "2", "--steps", "4"]));
    assert!(!text.contains('\r'));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert!(col(row, 7).abs() < 1e-15 && (col(row, 8) - 1.0).abs() < 1e-15);
        assert_eq!(row[10], "OK");
    }
    assert_eq!(col(&rows[3], 0), 2.0);

    let rows = csv_rows(&stdout(&junction(&["scatter", "--rho", "0,0", "--mass", "0", "--emin", "0.1", "--emax", "5", "--steps", "6"])));
    assert!(rows.iter().all(|r| col(r, 8) == 0.0 && col(r, 7) == 1.0));

    let rows = csv_rows(&stdout(&junction(&[
        "scatter", "--alpha", "0,1,1,0", "--mass", "1", "--emin", "1.4142135623730951", "--emax", "3", "--steps", "5",
    ])));
    assert!((col(&rows[0], 8) - 0.5).abs() < 1e-12);
}

#[test]
fn scatter_digits_round_trip() {
    let text = stdout(&junction(&["scatter", "--alpha", "0,1,1,0", "--mass", "1", "--emin", "1.1", "--emax", "2.1", "--steps", "3"]));
    let v = json_out(&["scatter", "--alpha", "0,1,1,0", "--mass", "1", "--emin", "1.1", "--emax", "2.1", "--steps", "3", "--format", "json"]);
    let rows = csv_rows(&text);
    for (row, obj) in rows.iter().zip(v.as_array().unwrap()) {
        for (k, name) in ["E", "k", "lambda", "re_r", "im_r", "re_t", "im_t", "R", "T", "phase_t"].iter().enumerate() {
            assert_eq!(col(row, k).to_bits(), obj[*name].as_f64().unwrap().to_bits(), "{name}");
        }
        assert_eq!(row[0].split(['e', '.']).nth(1).unwrap().len(), 16);
    }
}

#[test]
fn scatter_right_face_and_out_file() {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("sweep.csv");
    let o = junction(&[
        "scatter", "--rho", "inf,0", "--from", "right", "--mass", "0.5", "--emin", "0.6", "--emax", "1.5", "--steps", "3",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&std::fs::read_to_string(&path).unwrap());
    for row in &rows {
        // hard wall on the plus face
        assert!((col(row, 3) + 1.0).abs() < 1e-15 && col(row, 4).abs() < 1e-15);
    }
}

#[test]
fn scatter_errors() {
    for args in [
        vec!["scatter", "--alpha", "0,1,1,0", "--mass", "1", "--emin", "0.5", "--emax", "2"],
        vec!["scatter", "--alpha", "0,1,1,0", "--emin", "2", "--emax", "1"],
        vec!["scatter", "--alpha", "0,1,1,0", "--emin", "1", "--emax", "2", "--steps", "1"],
        vec!["scatter", "--alpha", "1,1,0,1", "--emin", "1", "--emax", "2"],
        vec!["scatter", "--emin", "1", "--emax", "2"],
    ] {
        assert_eq!(junction(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn demo_switch() {
    let o = junction(&["demo-switch"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Unit0") && text.contains("preserves spin"));
    assert!(text.contains("Unit1") && text.contains("swaps spin"));

    let v = json_out(&["demo-switch", "--phase", "pi/2", "--format", "json"]);
    assert_eq!(v["unit0"]["preserves_spin"], true);
    assert_eq!(v["unit1"]["swaps_spin"], true);
    let phase = v["phase_variants"][0]["scattering"]["phase_t"].as_f64().unwrap();
    assert!((phase - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert_eq!(v["passed"], true);
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        vec!["demo-switch", "--format", "json"],
        vec!["convert", "bc-to-u2", "--alpha", "0,1,1,0", "--mass", "2"],
        vec!["scatter", "--alpha", "1,2i,0,1", "--mass", "0.2", "--emin", "0.3", "--emax", "9", "--steps", "40"],
    ] {
        assert_eq!(junction(&args).stdout, junction(&args).stdout);
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3..1e3f64,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
    ]
}

proptest! {
    #[test]
    fn shorthand_round_trips_bit_exactly(re in finite(), im in finite()) {
        let z = Complex64::new(re, im);
        let back = parse_complex(&format_complex(z)).unwrap();
        prop_assert_eq!(back.re.to_bits(), z.re.to_bits());
        prop_assert_eq!(back.im.to_bits(), z.im.to_bits());
    }

    #[test]
    fn json_pair_round_trips_bit_exactly(re in finite(), im in finite()) {
        let z = Complex64::new(re, im);
        let text = serde_json::to_string(&complex_json(z)).unwrap();
        let back = parse_complex(&text).unwrap();
        prop_assert_eq!(back.re.to_bits(), z.re.to_bits());
        prop_assert_eq!(back.im.to_bits(), z.im.to_bits());
    }

    #[test]
    fn lists_round_trip(zs in proptest::collection::vec((finite(), finite()), 4)) {
        let zs: Vec<Complex64> = zs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let text = zs.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(",");
        let back = parse_complex_list(&text, 4).unwrap();
        for (a, b) in back.iter().zip(&zs) {
            prop_assert_eq!((a.re.to_bits(), a.im.to_bits()), (b.re.to_bits(), b.im.to_bits()));
        }
    }

    #[test]
    fn extended_round_trips(x in finite(), inf in any::<bool>()) {
        let e = if inf { ExtendedReal::PlusInfinity } else { ExtendedReal::Finite(x) };
        let text = match extended_json(e) {
            Value::String(s) => s,
            v => v.to_string(),
        };
        prop_assert_eq!(parse_extended(&text).unwrap(), e);
    }
}
