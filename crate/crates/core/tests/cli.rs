use std::fs;

use gns_core::cli::{run_with, EXIT_BAD_INPUT, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["gns-bounds"];
    full.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn written_certificates_pass_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("frac.json");
    let csv = dir.path().join("frac.csv");
    let (code, _, err) = run(&[
        "bound", "--d", "1", "--s", "1/2", "--p", "4", "--s1", "1", "--p1", "2", "--s2", "0", "--p2", "2",
        "--starts", "4", "--json-out", cert.to_str().unwrap(),
    ]);
    // Orders are plain numbers; fractions are only for exponents.
    assert_eq!(code, EXIT_BAD_INPUT, "{err}");
    let (code, _, err) = run(&[
        "bound", "--d", "1", "--s", "0.5", "--p", "4", "--s1", "1", "--p1", "2", "--s2", "0", "--p2", "2",
        "--starts", "4", "--json-out", cert.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, out, err) = run(&["verify", "gns", "--cert", cert.to_str().unwrap(), "--csv-out", csv.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("dilation_spread"));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 11);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    assert!(dir.path().join("frac.csv.manifest.json").exists());
}

#[test]
fn parabolic_verification_writes_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("par{i}.csv"));
        let (code, _, err) = run(&[
            "verify", "parabolic", "--d", "1", "--orders", "0.5,-0.25", "--times", "1", "--widths", "1",
            "--csv-out", csv.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
        texts.push(fs::read(&csv).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let text = String::from_utf8(texts.remove(0)).unwrap();
    assert!(text.starts_with("check,d,s,r,p,t,width,dilation,measured,bound,slack,ok\n"));
}

#[test]
fn exponent_fractions_are_accepted() {
    let (code, out, _) = run(&["parabolic", "--d", "1", "--s", "0", "--r", "4/3", "--p", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("a_par = "));
    let (code, _, err) = run(&["parabolic", "--d", "1", "--s", "0", "--r", "2", "--p", "4/3"]);
    assert_eq!(code, EXIT_BAD_INPUT);
    assert!(err.contains("exceeds"), "{err}");
}
