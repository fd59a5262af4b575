//! End-to-end: QAPLIB text to formulation file to search to permutation.

use qapgas::gas::{run_gas, run_many, BackendKind, GasConfig, Termination};
use qapgas::poly::mask_to_bits;
use qapgas::{brute_force_optimum, encode_default, parse_qaplib, Formulation, FormulationKind};

const TAI4: &str = "4
0 2 9 5
2 0 1 6
9 1 0 3
5 6 3 0

0 7 4 8
7 0 2 6
4 2 0 5
8 6 5 0
";

#[test]
fn qaplib_to_optimum_for_every_formulation() {
    let inst = parse_qaplib(TAI4).unwrap();
    let (best, opt) = brute_force_optimum(&inst).unwrap();
    for kind in FormulationKind::ALL {
        let form = encode_default(&inst, kind).unwrap();
        let back = Formulation::from_json(&form.to_json()).unwrap();
        assert_eq!(back, form);
        let cfg = GasConfig { termination: Termination::KnownOptimum(opt), seed: 4, ..Default::default() };
        for (rec, trace) in run_many(&back, &cfg, 25).unwrap() {
            let perm = back.decode(&mask_to_bits(trace.best_x, back.num_vars())).unwrap().unwrap();
            assert!((inst.objective(&perm).unwrap() - opt).abs() < 1e-9, "{kind}: {perm:?} vs {best:?}");
            assert_eq!(rec.queries, trace.queries());
        }
    }
}

#[test]
fn exact_backend_search_on_scaled_formulation() {
    let inst = qapgas::random_instance(3, 11).unwrap();
    let (_, opt) = brute_force_optimum(&inst).unwrap();
    let form = encode_default(&inst, FormulationKind::HuboHw).unwrap().integer_scaled(100.0).unwrap();
    let cfg = GasConfig {
        termination: Termination::KnownOptimum((opt * 100.0).round()),
        backend: BackendKind::Exact,
        seed: 2,
        ..Default::default()
    };
    let trace = run_gas(&form, &cfg).unwrap();
    assert_eq!(trace.found_optimum, Some(true));
    let perm = form.decode(&mask_to_bits(trace.best_x, form.num_vars())).unwrap().unwrap();
    assert!((inst.objective(&perm).unwrap() - opt).abs() < 1e-9);
}

#[test]
fn stall_termination_without_known_optimum() {
    let inst = qapgas::random_instance(4, 3).unwrap();
    let (_, opt) = brute_force_optimum(&inst).unwrap();
    let form = encode_default(&inst, FormulationKind::QuboDicke).unwrap();
    let cfg = GasConfig { termination: Termination::ThresholdStall(40), seed: 1, ..Default::default() };
    let trace = run_gas(&form, &cfg).unwrap();
    assert_eq!(trace.found_optimum, None);
    assert!(trace.best_value >= opt - 1e-9);
    assert!(trace.steps.iter().rev().take(40).all(|s| !s.accepted));
}
