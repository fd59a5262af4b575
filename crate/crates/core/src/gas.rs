//! Grover adaptive search with real-valued objectives.
//!
//! Two interchangeable samplers stand in for the measurement of
//! `G^L A_y |0>`: an exact statevector backend for tiny registers and an
//! emulator that draws from the closed-form Grover distribution over an
//! enumerated feasible space.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{build_ay, build_grover_operator, compute_m_for_search, Circuit, PhaseStyle, StateInit};
use crate::encoding::{encode_default, FeasibleSpace, Formulation, FormulationKind};
use crate::error::{Error, Result};
use crate::poly::CompiledPoly;
use crate::qap::{brute_force_optimum, QapInstance};
use crate::sim::StateVector;

/// A sample improves on the threshold `y` when `E(x) < y - IMPROVEMENT_TOL`.
pub const IMPROVEMENT_TOL: f64 = 1e-7;

/// Largest feasible space the emulator enumerates.
pub const EMULATION_MAX_STATES: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Termination {
    /// Stop once the threshold reaches this value.
    KnownOptimum(f64),
    /// Stop after this many consecutive iterations without improvement.
    ThresholdStall(usize),
    /// Run until `max_iterations`.
    IterationCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BackendKind {
    Exact,
    Emulated,
}

/// Range of the rotation count `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum LDraw {
    /// Uniform on `{0, .., ceil(k - 1)}`.
    #[default]
    Inclusive,
    /// Uniform on `{0, .., ceil(k - 1) - 1}`, or 0 when that is empty.
    Exclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasConfig {
    pub lambda_growth: f64,
    pub max_iterations: usize,
    pub termination: Termination,
    pub backend: BackendKind,
    pub l_draw: LDraw,
    pub seed: u64,
}

impl Default for GasConfig {
    fn default() -> Self {
        Self {
            lambda_growth: 8.0 / 7.0,
            max_iterations: 100_000,
            termination: Termination::IterationCap,
            backend: BackendKind::Emulated,
            l_draw: LDraw::Inclusive,
            seed: 0,
        }
    }
}

impl GasConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_growth > 1.0 && self.lambda_growth.is_finite()) {
            return Err(Error::Domain(format!("growth factor must exceed 1, got {}", self.lambda_growth)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Domain("max_iterations must be positive".into()));
        }
        if let Termination::ThresholdStall(0) = self.termination {
            return Err(Error::Domain("stall count must be positive".into()));
        }
        Ok(())
    }

    /// Generator for run `run`: the seed picks the key, the run the stream.
    pub fn run_rng(&self, run: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(run);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GasStep {
    pub l: usize,
    /// Measured variable bits.
    pub x: u64,
    pub value: f64,
    pub accepted: bool,
    pub y_next: f64,
    pub k_next: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GasTrace {
    pub x0: u64,
    pub y0: f64,
    pub steps: Vec<GasStep>,
    pub best_x: u64,
    pub best_value: f64,
    /// `None` unless the run had a known optimum to reach.
    pub found_optimum: Option<bool>,
}

impl GasTrace {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    /// Classical evaluations of `E`, including the initial sample.
    pub fn evaluations(&self) -> usize {
        self.steps.len() + 1
    }

    /// `sum (L_i + 1)`: Grover applications plus one preparation per iteration.
    pub fn queries(&self) -> u64 {
        query_count(self)
    }

    /// `sum L_i`.
    pub fn grover_applications(&self) -> u64 {
        self.steps.iter().map(|s| s.l as u64).sum()
    }

    pub fn thresholds(&self) -> Vec<f64> {
        std::iter::once(self.y0).chain(self.steps.iter().map(|s| s.y_next)).collect()
    }
}

pub fn query_count(trace: &GasTrace) -> u64 {
    trace.steps.iter().map(|s| s.l as u64 + 1).sum()
}

/// Source of measurement outcomes for a threshold `y` and rotation count `L`.
pub trait SampleBackend {
    fn space(&self) -> FeasibleSpace;
    /// Variable-register bits of one measurement of `G^L A_y |0>`.
    fn sample(&mut self, y: f64, l: usize, rng: &mut ChaCha8Rng) -> Result<u64>;
}

fn compiled(form: &Formulation) -> Result<CompiledPoly> {
    form.poly().compile().ok_or_else(|| Error::Scale(format!("{} variables exceed 64", form.num_vars())))
}

/// Grover emulation over a value-sorted table of the feasible space.
#[derive(Debug, Clone)]
pub struct EmulatedBackend {
    space: FeasibleSpace,
    /// `(E(x), state id)` sorted by value.
    table: Vec<(f64, u32)>,
}

impl EmulatedBackend {
    pub fn new(form: &Formulation) -> Result<Self> {
        let space = form.feasible_space();
        let size = space
            .size_u64()
            .filter(|&s| s <= EMULATION_MAX_STATES)
            .ok_or_else(|| Error::Scale(format!("feasible space {} exceeds {EMULATION_MAX_STATES}", space.size())))?;
        let poly = compiled(form)?;
        let mut table = Vec::with_capacity(size as usize);
        match space {
            FeasibleSpace::Hypercube { .. } => poly.for_each_state(|x, v| table.push((v, x as u32))),
            FeasibleSpace::RowOneHot { .. } => {
                table.extend((0..size).map(|id| (poly.eval(space.state_mask(id)), id as u32)))
            }
        }
        table.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(Self { space, table })
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn min_value(&self) -> f64 {
        self.table[0].0
    }

    /// Number of states with `E(x) < y - IMPROVEMENT_TOL`.
    pub fn marked_count(&self, y: f64) -> usize {
        self.table.partition_point(|&(v, _)| v < y - IMPROVEMENT_TOL)
    }

    /// `sin^2((2L + 1) asin(sqrt(t / |S|)))`.
    pub fn marked_probability(&self, y: f64, l: usize) -> f64 {
        grover_probability(self.marked_count(y), self.table.len(), l)
    }
}

/// Probability of measuring a marked state after `l` Grover iterations on a
/// uniform superposition of `size` states, `marked` of them marked.
pub fn grover_probability(marked: usize, size: usize, l: usize) -> f64 {
    if marked == 0 {
        return 0.0;
    }
    let theta = (marked as f64 / size as f64).sqrt().asin();
    ((2 * l + 1) as f64 * theta).sin().powi(2)
}

impl SampleBackend for EmulatedBackend {
    fn space(&self) -> FeasibleSpace {
        self.space
    }

    fn sample(&mut self, y: f64, l: usize, rng: &mut ChaCha8Rng) -> Result<u64> {
        let size = self.table.len();
        let t = self.marked_count(y);
        let idx = if t == 0 || t == size {
            rng.random_range(0..size)
        } else if rng.random::<f64>() < grover_probability(t, size, l) {
            rng.random_range(0..t)
        } else {
            rng.random_range(t..size)
        };
        Ok(self.space.state_mask(self.table[idx].1 as u64))
    }
}

/// Statevector execution of `G^L A_y |0>`. Marginal distributions of the
/// variable register are cached per `(y, L)`.
#[derive(Debug)]
pub struct ExactBackend {
    poly: crate::poly::MultilinearPolynomial,
    space: FeasibleSpace,
    init: StateInit,
    style: PhaseStyle,
    m: usize,
    cache: HashMap<(u64, usize), Vec<f64>>,
    /// Latest `(y, L, state, Grover operator)`, extended when `L` grows.
    current: Option<(u64, usize, StateVector, Circuit)>,
}

impl ExactBackend {
    pub fn new(form: &Formulation, style: PhaseStyle) -> Result<Self> {
        let m = compute_m_for_search(form)?;
        Self::with_m(form, style, m)
    }

    pub fn with_m(form: &Formulation, style: PhaseStyle, m: usize) -> Result<Self> {
        let qubits = form.num_vars() + m;
        if qubits > crate::sim::MAX_QUBITS {
            return Err(Error::Scale(format!(
                "{qubits} qubits exceed the {}-qubit statevector limit; use the emulated backend",
                crate::sim::MAX_QUBITS
            )));
        }
        Ok(Self {
            poly: form.poly().clone(),
            space: form.feasible_space(),
            init: StateInit::for_formulation(form),
            style,
            m,
            cache: HashMap::new(),
            current: None,
        })
    }

    pub fn value_bits(&self) -> usize {
        self.m
    }

    pub fn num_qubits(&self) -> usize {
        self.poly.num_vars() + self.m
    }

    fn marginal_of(&self, sv: &StateVector) -> Vec<f64> {
        let n = self.poly.num_vars();
        let mut out = vec![0.0; 1 << n];
        let mask = (1usize << n) - 1;
        for (i, a) in sv.amplitudes().iter().enumerate() {
            out[i & mask] += a.norm_sqr();
        }
        out
    }

    /// Distribution of the variable register after `G^L A_y |0>`.
    pub fn marginal(&mut self, y: f64, l: usize) -> Result<&[f64]> {
        let key = (y.to_bits(), l);
        if !self.cache.contains_key(&key) {
            let reuse = matches!(&self.current, Some((yb, cl, _, _)) if *yb == key.0 && *cl <= l);
            if !reuse {
                let ay = build_ay(&self.poly, self.m, y, self.init, self.style)?;
                let g = build_grover_operator(&ay)?;
                let mut sv = StateVector::zero(ay.num_qubits())?;
                sv.apply_circuit(&ay)?;
                self.cache.insert((key.0, 0), self.marginal_of(&sv));
                self.current = Some((key.0, 0, sv, g));
            }
            let (_, mut cl, mut sv, g) = self.current.take().expect("state present");
            while cl < l {
                sv.apply_circuit(&g)?;
                cl += 1;
                self.cache.insert((key.0, cl), self.marginal_of(&sv));
            }
            self.current = Some((key.0, cl, sv, g));
        }
        Ok(&self.cache[&key])
    }

    /// Probability that a measurement improves on `y`.
    pub fn marked_probability(&mut self, y: f64, l: usize) -> Result<f64> {
        let poly = self.poly.compile().expect("statevector registers are small");
        let dist = self.marginal(y, l)?;
        Ok(dist.iter().enumerate().filter(|(x, _)| poly.eval(*x as u64) < y - IMPROVEMENT_TOL).map(|(_, p)| p).sum())
    }
}

impl SampleBackend for ExactBackend {
    fn space(&self) -> FeasibleSpace {
        self.space
    }

    fn sample(&mut self, y: f64, l: usize, rng: &mut ChaCha8Rng) -> Result<u64> {
        let dist = self.marginal(y, l)?;
        let total: f64 = dist.iter().sum();
        let mut u = rng.random::<f64>() * total;
        for (x, p) in dist.iter().enumerate() {
            u -= p;
            if u < 0.0 {
                return Ok(x as u64);
            }
        }
        Ok(dist.iter().rposition(|&p| p > 0.0).unwrap_or(0) as u64)
    }
}

/// One run of the adaptive search with a caller-owned backend and generator.
pub fn run_gas_with(
    form: &Formulation,
    backend: &mut dyn SampleBackend,
    config: &GasConfig,
    rng: &mut ChaCha8Rng,
) -> Result<GasTrace> {
    config.validate()?;
    let poly = compiled(form)?;
    let space = backend.space();
    let k_cap = space.size_f64().sqrt();
    let x0 = space.sample_uniform(rng);
    let y0 = poly.eval(x0);
    let (mut y, mut best_x) = (y0, x0);
    let mut k = 1.0f64;
    let mut stall = 0usize;
    let mut steps = Vec::new();
    loop {
        if let Termination::KnownOptimum(v) = config.termination {
            if y <= v + IMPROVEMENT_TOL {
                break;
            }
        }
        if let Termination::ThresholdStall(c) = config.termination {
            if stall >= c {
                break;
            }
        }
        if steps.len() >= config.max_iterations {
            break;
        }
        let top = (k - 1.0).ceil().max(0.0) as usize;
        let l = match config.l_draw {
            LDraw::Inclusive => rng.random_range(0..=top),
            LDraw::Exclusive if top == 0 => 0,
            LDraw::Exclusive => rng.random_range(0..top),
        };
        let x = backend.sample(y, l, rng)?;
        let value = poly.eval(x);
        let accepted = value < y - IMPROVEMENT_TOL;
        if accepted {
            y = value;
            best_x = x;
            k = 1.0;
            stall = 0;
        } else {
            k = (config.lambda_growth * k).min(k_cap);
            stall += 1;
        }
        steps.push(GasStep { l, x, value, accepted, y_next: y, k_next: k });
    }
    let found_optimum = match config.termination {
        Termination::KnownOptimum(v) => Some(y <= v + IMPROVEMENT_TOL),
        _ => None,
    };
    Ok(GasTrace { x0, y0, steps, best_x, best_value: y, found_optimum })
}

/// One run with a fresh backend of the configured kind.
pub fn run_gas(form: &Formulation, config: &GasConfig) -> Result<GasTrace> {
    let mut rng = config.run_rng(0);
    match config.backend {
        BackendKind::Emulated => run_gas_with(form, &mut EmulatedBackend::new(form)?, config, &mut rng),
        BackendKind::Exact => run_gas_with(form, &mut ExactBackend::new(form, PhaseStyle::R)?, config, &mut rng),
    }
}

/// Summary of one run, as written to CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub run_id: usize,
    pub queries: u64,
    pub grover_applications: u64,
    pub iterations: usize,
    pub found_value: f64,
}

/// `runs` independent searches sharing one backend; run `r` uses stream `r`.
pub fn run_many(form: &Formulation, config: &GasConfig, runs: usize) -> Result<Vec<(RunRecord, GasTrace)>> {
    let mut backend: Box<dyn SampleBackend> = match config.backend {
        BackendKind::Emulated => Box::new(EmulatedBackend::new(form)?),
        BackendKind::Exact => Box::new(ExactBackend::new(form, PhaseStyle::R)?),
    };
    (0..runs)
        .map(|r| {
            let mut rng = config.run_rng(r as u64);
            let t = run_gas_with(form, backend.as_mut(), config, &mut rng)?;
            let rec = RunRecord {
                run_id: r,
                queries: t.queries(),
                grover_applications: t.grover_applications(),
                iterations: t.iterations(),
                found_value: t.best_value,
            };
            Ok((rec, t))
        })
        .collect()
}

pub fn median(sorted: &[u64]) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => sorted[n / 2] as f64,
        n => (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfSeries {
    pub kind: FormulationKind,
    /// Sorted `sum (L_i + 1)` per run.
    pub queries: Vec<u64>,
    /// Sorted `sum L_i` per run.
    pub grover_applications: Vec<u64>,
    pub median_queries: f64,
    pub all_found: bool,
}

impl CdfSeries {
    /// `(queries, fraction of runs finished within that many queries)`.
    pub fn cdf(&self) -> Vec<(u64, f64)> {
        let n = self.queries.len() as f64;
        let mut out: Vec<(u64, f64)> = Vec::new();
        for (i, &q) in self.queries.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == q => last.1 = f,
                _ => out.push((q, f)),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfReport {
    pub optimum: f64,
    pub series: Vec<CdfSeries>,
}

impl CdfReport {
    pub fn series(&self, kind: FormulationKind) -> Option<&CdfSeries> {
        self.series.iter().find(|s| s.kind == kind)
    }

    /// `median(a) / median(b)`.
    pub fn median_ratio(&self, a: FormulationKind, b: FormulationKind) -> Option<f64> {
        Some(self.series(a)?.median_queries / self.series(b)?.median_queries)
    }

    /// Every ordered pair of distinct kinds with its median ratio.
    pub fn ratios(&self) -> Vec<(FormulationKind, FormulationKind, f64)> {
        let mut out = Vec::new();
        for a in &self.series {
            for b in &self.series {
                if a.kind != b.kind {
                    out.push((a.kind, b.kind, a.median_queries / b.median_queries));
                }
            }
        }
        out
    }

    /// CSV with columns `kind,queries,cdf`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,queries,cdf\n");
        for series in &self.series {
            for (q, f) in series.cdf() {
                s.push_str(&format!("{},{q},{f}\n", series.kind));
            }
        }
        s
    }
}

/// Query-count distributions of `runs` searches per formulation, each run
/// stopping when the threshold reaches the brute-force optimum. Formulations
/// use the default penalties.
pub fn cdf_experiment(
    inst: &QapInstance,
    kinds: &[FormulationKind],
    runs: usize,
    config: &GasConfig,
) -> Result<CdfReport> {
    let (_, optimum) = brute_force_optimum(inst)?;
    let mut series = Vec::new();
    for (ki, &kind) in kinds.iter().enumerate() {
        let form = encode_default(inst, kind)?;
        let cfg = GasConfig {
            termination: Termination::KnownOptimum(optimum),
            seed: config.seed ^ (ki as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15),
            ..*config
        };
        let results = run_many(&form, &cfg, runs)?;
        let mut queries: Vec<u64> = results.iter().map(|(r, _)| r.queries).collect();
        let mut grover: Vec<u64> = results.iter().map(|(r, _)| r.grover_applications).collect();
        queries.sort_unstable();
        grover.sort_unstable();
        series.push(CdfSeries {
            kind,
            median_queries: median(&queries),
            all_found: results.iter().all(|(_, t)| t.found_optimum == Some(true)),
            queries,
            grover_applications: grover,
        });
    }
    Ok(CdfReport { optimum, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{encode_default, FormulationKind};
    use crate::qap::random_instance;
    use proptest::prelude::*;

    #[test]
    fn grover_probability_closed_forms() {
        assert_eq!(grover_probability(8, 8, 0), 1.0);
        assert!((grover_probability(8, 8, 3) - 1.0).abs() < 1e-12);
        assert!((grover_probability(3, 16, 0) - 3.0 / 16.0).abs() < 1e-15);
        assert!((grover_probability(1, 8, 1) - 0.78125).abs() < 1e-12);
        assert!((grover_probability(1, 8, 2) - 0.9453).abs() < 1e-4);
        assert_eq!(grover_probability(0, 8, 5), 0.0);
    }

    #[test]
    fn query_count_conventions() {
        let step = |l| GasStep { l, x: 0, value: 0.0, accepted: false, y_next: 0.0, k_next: 1.0 };
        let t = GasTrace { x0: 0, y0: 0.0, steps: vec![step(0)], best_x: 0, best_value: 0.0, found_optimum: None };
        assert_eq!(query_count(&t), 1);
        let t = GasTrace { steps: vec![step(0), step(1), step(2)], ..t };
        assert_eq!(query_count(&t), 6);
        assert_eq!(t.grover_applications(), 3);
    }

    #[test]
    fn config_validation() {
        assert!(GasConfig { lambda_growth: 1.0, ..Default::default() }.validate().is_err());
        assert!(GasConfig { max_iterations: 0, ..Default::default() }.validate().is_err());
        assert!(GasConfig { termination: Termination::ThresholdStall(0), ..Default::default() }.validate().is_err());
        assert!(GasConfig::default().validate().is_ok());
    }

    #[test]
    fn emulated_all_marked_always_marked() {
        let inst = random_instance(3, 3).unwrap();
        let f = encode_default(&inst, FormulationKind::QuboDicke).unwrap();
        let mut b = EmulatedBackend::new(&f).unwrap();
        let poly = f.poly().compile().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = f64::INFINITY;
        assert_eq!(b.marked_count(y), b.size());
        for _ in 0..100 {
            let x = b.sample(y, 0, &mut rng).unwrap();
            assert!(poly.eval(x) < y);
            assert!(f.feasible_space().contains(x));
        }
    }

    #[test]
    fn emulated_zero_rotations_is_uniform_marking() {
        let inst = random_instance(3, 8).unwrap();
        let f = encode_default(&inst, FormulationKind::HuboHw).unwrap();
        let b = EmulatedBackend::new(&f).unwrap();
        let y = b.table[20].0 + 1e-3;
        let t = b.marked_count(y);
        assert_eq!(b.marked_probability(y, 0), t as f64 / 64.0);
    }

    #[test]
    fn stall_at_optimum_grows_k_to_cap() {
        let inst = random_instance(3, 5).unwrap();
        let f = encode_default(&inst, FormulationKind::QuboDicke).unwrap();
        let mut b = EmulatedBackend::new(&f).unwrap();
        let cfg = GasConfig { termination: Termination::ThresholdStall(60), ..Default::default() };
        let mut rng = cfg.run_rng(0);
        let t = run_gas_with(&f, &mut b, &cfg, &mut rng).unwrap();
        let cap = 27f64.sqrt();
        assert!((t.best_value - b.min_value()).abs() < 1e-9);
        let last = t.steps.last().unwrap();
        assert!((last.k_next - cap).abs() < 1e-12);
        assert!(t.steps.iter().rev().take(60).all(|s| !s.accepted));
    }

    #[test]
    fn exact_matches_emulated_probabilities_on_integer_objective() {
        let inst = random_instance(2, 1).unwrap();
        let f = encode_default(&inst, FormulationKind::QuboHadamard).unwrap().integer_scaled(100.0).unwrap();
        let mut exact = ExactBackend::new(&f, PhaseStyle::R).unwrap();
        let emu = EmulatedBackend::new(&f).unwrap();
        for idx in [1usize, 3, 6, 12] {
            let y = emu.table[idx].0;
            for l in 0..4 {
                let a = exact.marked_probability(y, l).unwrap();
                let b = emu.marked_probability(y, l);
                assert!((a - b).abs() < 1e-9, "y={y} L={l}: exact {a} emulated {b}");
            }
        }
    }

    #[test]
    fn known_optimum_runs_find_optimum() {
        for kind in FormulationKind::ALL {
            let inst = random_instance(3, 21).unwrap();
            let f = encode_default(&inst, kind).unwrap();
            let (_, opt) = brute_force_optimum(&inst).unwrap();
            let cfg = GasConfig { termination: Termination::KnownOptimum(opt), ..Default::default() };
            for (_, t) in run_many(&f, &cfg, 20).unwrap() {
                assert_eq!(t.found_optimum, Some(true));
                let perm = f.decode(&crate::poly::mask_to_bits(t.best_x, f.num_vars())).unwrap().unwrap();
                assert!((inst.objective(&perm).unwrap() - opt).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let inst = random_instance(3, 2).unwrap();
        let cfg = GasConfig { seed: 99, ..Default::default() };
        let a = cdf_experiment(&inst, &FormulationKind::ALL, 30, &cfg).unwrap();
        let b = cdf_experiment(&inst, &FormulationKind::ALL, 30, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.series.iter().all(|s| s.all_found));
        assert!(a.to_csv().starts_with("kind,queries,cdf\n"));
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[1, 2, 3]), 2.0);
        assert_eq!(median(&[1, 2, 3, 5]), 2.5);
        assert!(median(&[]).is_nan());
    }

    proptest! {
        #[test]
        fn thresholds_monotone_and_k_capped(seed in any::<u64>(), exclusive in any::<bool>()) {
            let inst = random_instance(3, seed % 7).unwrap();
            let f = encode_default(&inst, FormulationKind::HuboHw).unwrap();
            let mut b = EmulatedBackend::new(&f).unwrap();
            let cfg = GasConfig {
                termination: Termination::ThresholdStall(30),
                l_draw: if exclusive { LDraw::Exclusive } else { LDraw::Inclusive },
                seed,
                ..Default::default()
            };
            let mut rng = cfg.run_rng(0);
            let t = run_gas_with(&f, &mut b, &cfg, &mut rng).unwrap();
            let ys = t.thresholds();
            prop_assert!(ys.windows(2).all(|w| w[1] <= w[0]));
            let cap = 64f64.sqrt();
            prop_assert!(t.steps.iter().all(|s| s.k_next >= 1.0 && s.k_next <= cap + 1e-12));
            let mut k = 1.0f64;
            for s in &t.steps {
                let top = (k - 1.0).ceil() as usize;
                let ok = if exclusive { s.l < top.max(1) } else { s.l <= top };
                prop_assert!(ok);
                k = s.k_next;
            }
        }
    }
}
