//! Golden files for the circuit text format.

use std::path::PathBuf;

use qapgas::circuit::{build_ay, build_dicke, build_grover_operator, Circuit, PhaseStyle, StateInit};
use qapgas::MultilinearPolynomial;

fn example_poly() -> MultilinearPolynomial {
    MultilinearPolynomial::from_terms(3, vec![(vec![], 1.0), (vec![0], 2.0), (vec![0, 1, 2], -3.0)]).unwrap()
}

fn check_golden(name: &str, c: &Circuit) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let text = c.to_text();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, want, "{name} differs from its golden file");
    assert_eq!(&Circuit::from_text(&want).unwrap(), c, "{name} does not parse back");
}

#[test]
fn ay_r_style() {
    check_golden("ay_example_r.txt", &build_ay(&example_poly(), 3, 0.0, StateInit::Hadamard, PhaseStyle::R).unwrap());
}

#[test]
fn ay_rz_style() {
    check_golden("ay_example_rz.txt", &build_ay(&example_poly(), 3, 0.0, StateInit::Hadamard, PhaseStyle::Rz).unwrap());
}

#[test]
fn grover_operator() {
    let ay = build_ay(&example_poly(), 3, 1.0, StateInit::Hadamard, PhaseStyle::R).unwrap();
    check_golden("grover_example_y1.txt", &build_grover_operator(&ay).unwrap());
}

#[test]
fn dicke_4_2() {
    check_golden("dicke_4_2.txt", &build_dicke(4, 2).unwrap());
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let c = build_dicke(3, 1).unwrap();
    let text = c.to_text().replace('\n', "\n# note\n\n");
    assert_eq!(Circuit::from_text(&text).unwrap(), c);
}

#[test]
fn malformed_lines_report_position() {
    let err = Circuit::from_text("qubits 2 vars 2 value 0\nh 0 @prep\ncx 0 @prep\n").unwrap_err();
    assert!(err.to_string().contains('3'), "{err}");
    assert!(Circuit::from_text("h 0 @prep\n").is_err());
    assert!(Circuit::from_text("qubits 1 vars 1 value 0\nh 4 @prep\n").is_err());
}
