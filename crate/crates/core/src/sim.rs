//! Dense statevector simulation.
//!
//! Basis index bit `q` is the value of qubit `q` (little-endian).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Largest register the simulator accepts (`2^26` amplitudes, 1 GiB).
pub const MAX_QUBITS: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | 1 << q)
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::Scale(format!(
                "{num_qubits} qubits exceed the {MAX_QUBITS}-qubit statevector limit; use the emulated backend"
            )));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Index(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Wrap amplitudes; the length must be a power of two. Not normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Dimension { expected: len.next_power_of_two(), got: len });
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Scale(format!("{num_qubits} qubits exceed the {MAX_QUBITS}-qubit limit")));
        }
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    fn check(&self, gate: &Gate) -> Result<()> {
        if let Some(q) = gate.qubits().into_iter().find(|&q| q >= self.num_qubits) {
            return Err(Error::Index(format!("qubit {q} in '{gate}' >= {}", self.num_qubits)));
        }
        Ok(())
    }

    /// Apply `[[u00, u01], [u10, u11]]` to `target` wherever all `ctrl` bits are set.
    fn apply_1q(&mut self, ctrl: usize, target: usize, u: [[Complex64; 2]; 2]) {
        let t = 1usize << target;
        for i in 0..self.amps.len() {
            if i & t == 0 && i & ctrl == ctrl {
                let (a0, a1) = (self.amps[i], self.amps[i | t]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | t] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    /// Multiply amplitudes with all `mask` bits set by `phase`.
    fn apply_phase(&mut self, mask: usize, phase: Complex64) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= phase;
            }
        }
    }

    /// Controlled Rz: `e^{-i t/2}` on target 0, `e^{i t/2}` on target 1.
    fn apply_rz(&mut self, ctrl: usize, target: usize, theta: f64) {
        let t = 1usize << target;
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = Complex64::from_polar(1.0, theta / 2.0);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & ctrl == ctrl {
                *a *= if i & t == 0 { lo } else { hi };
            }
        }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        self.check(gate)?;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.apply_1q(0, *q, [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]);
            }
            Gate::X(q) => {
                let t = 1usize << q;
                for i in 0..self.amps.len() {
                    if i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            Gate::Z(q) => self.apply_phase(1 << q, c(-1.0, 0.0)),
            Gate::Phase { target, theta } => self.apply_phase(1 << target, Complex64::from_polar(1.0, *theta)),
            Gate::McPhase { controls, target, theta } => {
                self.apply_phase(mask_of(controls) | 1 << target, Complex64::from_polar(1.0, *theta))
            }
            Gate::Rz { target, theta } => self.apply_rz(0, *target, *theta),
            Gate::McRz { controls, target, theta } => self.apply_rz(mask_of(controls), *target, *theta),
            Gate::Ry { target, theta } => self.apply_ry(0, *target, *theta),
            Gate::McRy { controls, target, theta } => self.apply_ry(mask_of(controls), *target, *theta),
            Gate::Cnot { control, target } => {
                let (cm, t) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & t == 0 && i & cm != 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            Gate::Swap(a, b) => {
                let (ma, mb) = (1usize << a, 1usize << b);
                for i in 0..self.amps.len() {
                    if i & ma != 0 && i & mb == 0 {
                        self.amps.swap(i, i ^ ma ^ mb);
                    }
                }
            }
            Gate::Reflect0(qubits) => {
                let mask = mask_of(qubits);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *a = -*a;
                    }
                }
            }
        }
        Ok(())
    }

    fn apply_ry(&mut self, ctrl: usize, target: usize, theta: f64) {
        let (s, co) = (theta / 2.0).sin_cos();
        let r = |v: f64| Complex64::new(v, 0.0);
        self.apply_1q(ctrl, target, [[r(co), r(-s)], [r(s), r(co)]]);
    }

    /// Apply every gate of `c` in order. Long runs of diagonal gates are
    /// applied in one pass.
    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.num_qubits() > self.num_qubits {
            return Err(Error::Dimension { expected: self.num_qubits, got: c.num_qubits() });
        }
        let gates: Vec<&Gate> = c.gates().collect();
        let mut i = 0;
        while i < gates.len() {
            let run = gates[i..].iter().take_while(|g| diagonal_terms(g).is_some()).count();
            if run >= FUSE_MIN_RUN && self.num_qubits <= FUSE_MAX_QUBITS {
                self.apply_diagonal_run(&gates[i..i + run])?;
                i += run;
            } else {
                self.apply(gates[i])?;
                i += 1;
            }
        }
        Ok(())
    }

    /// Sum every gate's phase per basis state with a subset-sum transform:
    /// `angle(i) = sum over masks S contained in i of f(S)`.
    fn apply_diagonal_run(&mut self, gates: &[&Gate]) -> Result<()> {
        let mut f = vec![0.0f64; self.amps.len()];
        for g in gates {
            self.check(g)?;
            for (mask, angle) in diagonal_terms(g).expect("diagonal gate") {
                f[mask] += angle;
            }
        }
        for b in 0..self.num_qubits {
            let bit = 1usize << b;
            for i in 0..f.len() {
                if i & bit != 0 {
                    f[i] += f[i ^ bit];
                }
            }
        }
        for (a, angle) in self.amps.iter_mut().zip(&f) {
            if *angle != 0.0 {
                *a *= Complex64::from_polar(1.0, *angle);
            }
        }
        Ok(())
    }

    /// Sample one basis index with probability `|amp|^2`.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mut u: f64 = rng.random::<f64>() * self.norm_sqr();
        for (i, a) in self.amps.iter().enumerate() {
            u -= a.norm_sqr();
            if u < 0.0 {
                return i as u64;
            }
        }
        // Rounding left a sliver of mass; take the last nonzero amplitude.
        self.amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0) as u64
    }

    /// Probability that all `mask` bits equal the bits of `value`.
    pub fn probability_of(&self, mask: u64, value: u64) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as u64 & mask == value & mask)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

const FUSE_MIN_RUN: usize = 16;
const FUSE_MAX_QUBITS: usize = 24;

/// A diagonal gate as `(mask, angle)` pairs: the gate multiplies basis
/// states containing `mask` by `e^{i angle}`, for each pair.
fn diagonal_terms(g: &Gate) -> Option<Vec<(usize, f64)>> {
    match g {
        Gate::Z(q) => Some(vec![(1 << q, std::f64::consts::PI)]),
        Gate::Phase { target, theta } => Some(vec![(1 << target, *theta)]),
        Gate::McPhase { controls, target, theta } => Some(vec![(mask_of(controls) | 1 << target, *theta)]),
        Gate::Rz { target, theta } => Some(vec![(0, -theta / 2.0), (1 << target, *theta)]),
        Gate::McRz { controls, target, theta } => {
            let c = mask_of(controls);
            Some(vec![(c, -theta / 2.0), (c | 1 << target, *theta)])
        }
        _ => None,
    }
}

/// Repeated sampling from a fixed distribution by binary search on the CDF.
#[derive(Debug, Clone)]
pub struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(sv: &StateVector) -> Self {
        let mut acc = 0.0;
        let cdf = sv
            .amps
            .iter()
            .map(|a| {
                acc += a.norm_sqr();
                acc
            })
            .collect();
        Self { cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = *self.cdf.last().unwrap_or(&0.0);
        let u = rng.random::<f64>() * total;
        let i = self.cdf.partition_point(|&c| c <= u);
        i.min(self.cdf.len() - 1) as u64
    }
}

/// Run `c` from `|0...0>` and measure every qubit.
pub fn run_circuit(c: &Circuit, seed: u64) -> Result<(u64, StateVector)> {
    let mut sv = StateVector::zero(c.num_qubits())?;
    sv.apply_circuit(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = sv.measure_all(&mut rng);
    Ok((outcome, sv))
}

/// Split a measured index into the variable bits and the signed value held
/// by the `m`-qubit register above them.
pub fn split_readout(index: u64, num_vars: usize, m: usize) -> (u64, i64) {
    let x = index & ((1u64 << num_vars) - 1);
    let raw = (index >> num_vars) & ((1u64 << m) - 1);
    let signed = if m > 0 && raw >> (m - 1) & 1 == 1 { raw as i64 - (1i64 << m) } else { raw as i64 };
    (x, signed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_dicke, Stage};
    use proptest::prelude::*;
    use rand::Rng;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let mut sv = StateVector::zero(1).unwrap();
        sv.apply(&Gate::H(0)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(sv.amplitudes()[0], Complex64::new(s, 0.0)));
        assert!(close(sv.amplitudes()[1], Complex64::new(s, 0.0)));
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        // |10> with qubit 0 as control set: index 0b01.
        let mut sv = StateVector::basis(2, 0b01).unwrap();
        sv.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert!(close(sv.amplitudes()[0b11], Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn out_of_range_and_oversized() {
        let mut sv = StateVector::zero(2).unwrap();
        assert!(matches!(sv.apply(&Gate::H(2)), Err(Error::Index(_))));
        assert!(matches!(StateVector::zero(MAX_QUBITS + 1), Err(Error::Scale(_))));
        let big = Circuit::new(MAX_QUBITS, 1);
        assert!(matches!(run_circuit(&big, 0), Err(Error::Scale(_))));
    }

    #[test]
    fn basis_state_measures_itself() {
        let sv = StateVector::basis(4, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sv.measure_all(&mut rng), 11);
        }
        let s = Sampler::new(&sv);
        for _ in 0..100 {
            assert_eq!(s.sample(&mut rng), 11);
        }
    }

    #[test]
    fn uniform_two_qubit_sampling() {
        let mut sv = StateVector::zero(2).unwrap();
        sv.apply(&Gate::H(0)).unwrap();
        sv.apply(&Gate::H(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = [0usize; 4];
        let n = 100_000;
        for _ in 0..n {
            counts[sv.measure_all(&mut rng) as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn dicke_sampling_frequencies() {
        let (_, sv) = run_circuit(&build_dicke(4, 2).unwrap(), 0).unwrap();
        let s = Sampler::new(&sv);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = [0usize; 16];
        let n = 100_000;
        for _ in 0..n {
            counts[s.sample(&mut rng) as usize] += 1;
        }
        for (i, c) in counts.iter().enumerate() {
            let f = *c as f64 / n as f64;
            if (i as u32).count_ones() == 2 {
                assert!((f - 1.0 / 6.0).abs() < 0.01, "{i:04b}: {f}");
            } else {
                assert_eq!(*c, 0);
            }
        }
    }

    #[test]
    fn swap_and_reflection() {
        let mut sv = StateVector::basis(3, 0b001).unwrap();
        sv.apply(&Gate::Swap(0, 2)).unwrap();
        assert!(close(sv.amplitudes()[0b100], Complex64::new(1.0, 0.0)));
        let mut sv = StateVector::from_amplitudes(vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        sv.apply(&Gate::Reflect0(vec![0, 1])).unwrap();
        assert!(close(sv.amplitudes()[0], Complex64::new(0.5, 0.0)));
        assert!(close(sv.amplitudes()[3], Complex64::new(-0.5, 0.0)));
    }

    #[test]
    fn readout_split() {
        assert_eq!(split_readout(0b101_011, 3, 3), (0b011, -3));
        assert_eq!(split_readout(0b011_001, 3, 3), (0b001, 3));
    }

    fn random_state(seed: u64, nq: usize) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Complex64> =
            (0..1 << nq).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        StateVector::from_amplitudes(v.into_iter().map(|a| a / norm).collect()).unwrap()
    }

    fn arb_gate() -> impl Strategy<Value = Gate> {
        let ang = -2.0 * PI..2.0 * PI;
        prop_oneof![
            (0usize..4).prop_map(Gate::H),
            (0usize..4).prop_map(Gate::X),
            (0usize..4).prop_map(Gate::Z),
            (0usize..4, ang.clone()).prop_map(|(t, a)| Gate::Phase { target: t, theta: a }),
            (0usize..4, ang.clone()).prop_map(|(t, a)| Gate::Rz { target: t, theta: a }),
            (0usize..4, ang.clone()).prop_map(|(t, a)| Gate::Ry { target: t, theta: a }),
            ang.clone().prop_map(|a| Gate::McPhase { controls: vec![0, 1], target: 3, theta: a }),
            ang.clone().prop_map(|a| Gate::McRz { controls: vec![2], target: 0, theta: a }),
            ang.prop_map(|a| Gate::McRy { controls: vec![3, 1], target: 2, theta: a }),
            Just(Gate::Cnot { control: 2, target: 1 }),
            Just(Gate::Swap(0, 3)),
            Just(Gate::Reflect0(vec![0, 1, 2, 3])),
        ]
    }

    proptest! {
        #[test]
        fn norm_preserved_and_inverse_restores(seed in any::<u64>(), gates in prop::collection::vec(arb_gate(), 1..25)) {
            let start = random_state(seed, 4);
            let mut c = Circuit::new(4, 0);
            for g in &gates {
                c.push(g.clone(), Stage::Other).unwrap();
            }
            let mut sv = start.clone();
            for g in c.gates() {
                sv.apply(g).unwrap();
                prop_assert!((sv.norm_sqr() - 1.0).abs() < 1e-9);
            }
            sv.apply_circuit(&c.inverse()).unwrap();
            prop_assert!((sv.inner(&start).norm() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn fused_diagonal_runs_match_gatewise(seed in any::<u64>(), angles in prop::collection::vec(-PI..PI, 20..40)) {
            let start = random_state(seed, 5);
            let mut c = Circuit::new(5, 0);
            for (i, a) in angles.iter().enumerate() {
                let g = match i % 5 {
                    0 => Gate::Phase { target: i % 5, theta: *a },
                    1 => Gate::McPhase { controls: vec![0, 2], target: 4, theta: *a },
                    2 => Gate::McRz { controls: vec![3], target: 1, theta: *a },
                    3 => Gate::Rz { target: 2, theta: *a },
                    _ => Gate::Z(i % 4),
                };
                c.push(g, Stage::Other).unwrap();
            }
            let mut fused = start.clone();
            fused.apply_circuit(&c).unwrap();
            let mut slow = start;
            for g in c.gates() {
                slow.apply(g).unwrap();
            }
            for (a, b) in fused.amplitudes().iter().zip(slow.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-10);
            }
        }

        #[test]
        fn rz_and_phase_give_same_distribution(seed in any::<u64>(), t in 0usize..4, a in -PI..PI, ctrl in any::<bool>()) {
            let start = random_state(seed, 4);
            let controls = if ctrl { vec![(t + 1) % 4] } else { vec![] };
            let mut p = start.clone();
            p.apply(&Gate::controlled_phase(controls.clone(), t, a)).unwrap();
            p.apply(&Gate::H(t)).unwrap();
            let mut r = start;
            r.apply(&Gate::controlled_rz(controls, t, a)).unwrap();
            r.apply(&Gate::H(t)).unwrap();
            // The control subspaces are not mixed, so the extra phase is unobservable.
            for (x, y) in p.probabilities().iter().zip(r.probabilities()) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
