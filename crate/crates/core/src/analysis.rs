//! Closed-form resource counts for the three formulations: expanded terms,
//! qubits, controlled-rotation histograms and CNOT totals, plus the metrics
//! table that compares them across problem sizes.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::circuit::{m_for_range, CostModel};
use crate::encoding::{code_bits, encode_default, feasible_space_sizes, FormulationKind, HwCodeTable, Penalties};
use crate::error::{Error, Result};
use crate::qap::generic_instance;

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("N must be >= 2, got {n}")));
    }
    Ok(())
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Term-count closed forms, including the constant term.
///
/// QUBO: `N^4/2 + N^2/2 + 1`. HUBO with `N != 2^B`: `N^4/2 - N^3/2 + N^2 + 1`.
/// HUBO with `N = 2^B`: `N^4/2 - 3N^3/2 + 5N^2/2 - N/2 + 1`, which exceeds the
/// true count by `N` (see [`term_count_exact`]).
pub fn term_count_closed_form(n: usize, kind: FormulationKind) -> Result<u128> {
    check_n(n)?;
    let n = n as u128;
    Ok(match kind {
        FormulationKind::QuboHadamard | FormulationKind::QuboDicke => (n.pow(4) + n * n) / 2 + 1,
        FormulationKind::HuboHw if n.is_power_of_two() => (n.pow(4) + 5 * n * n - 3 * n.pow(3) - n) / 2 + 1,
        FormulationKind::HuboHw => (n.pow(4) - n.pow(3)) / 2 + n * n + 1,
    })
}

/// Number of monomials in the expansion with generic coefficients.
///
/// For `N = 2^B` the HUBO count is `1 + N(N-1) + N(N-1)^3 / 2`: every
/// nonempty subset of one row's bits and every product of nonempty subsets of
/// two distinct rows. The other cases equal [`term_count_closed_form`].
pub fn term_count_exact(n: usize, kind: FormulationKind) -> Result<u128> {
    check_n(n)?;
    let m = n as u128;
    match kind {
        FormulationKind::HuboHw if n.is_power_of_two() => Ok(1 + m * (m - 1) + m * (m - 1).pow(3) / 2),
        _ => term_count_closed_form(n, kind),
    }
}

/// Term count measured by expanding the formulation of a dense instance
/// with continuous entries.
pub fn term_count_structural(n: usize, kind: FormulationKind) -> Result<usize> {
    Ok(encode_default(&generic_instance(n, 0)?, kind)?.num_terms())
}

/// Qubit requirement of one formulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitCounts {
    pub n_vars: usize,
    /// Value-register width.
    pub m: usize,
    /// Upper bound on `|E(x)|` that `m` covers.
    pub bound: f64,
}

impl QubitCounts {
    pub fn total(&self) -> usize {
        self.n_vars + self.m
    }
}

/// Penalties used for metrics. With `uniform_penalties` the HUBO row weight is
/// `N^2` like every other penalty; otherwise it is the search default 1.
pub fn metric_penalties(n: usize, kind: FormulationKind, uniform_penalties: bool) -> Penalties {
    let mut p = Penalties::default_for(kind, n);
    if uniform_penalties && kind == FormulationKind::HuboHw {
        p.row = Some((n * n) as f64);
    }
    p
}

/// Variables and value-register width from worst-case objective bounds for
/// instances with entries in `[0, 1]`:
/// QUBO with Hadamards `N^4 + 2 lambda N (N-1)^2`, QUBO with Dicke states
/// `N^4 + lambda N (N-1)^2`, HUBO `N^2 + lambda'_1 N + lambda'_2 N (N-1)`.
pub fn qubit_counts(n: usize, kind: FormulationKind, penalties: Penalties) -> Result<QubitCounts> {
    check_n(n)?;
    let nf = n as f64;
    let bound = match kind {
        FormulationKind::QuboHadamard => {
            let row = penalties.row.unwrap_or(penalties.col);
            nf.powi(4) + (row + penalties.col) * nf * (nf - 1.0).powi(2)
        }
        FormulationKind::QuboDicke => nf.powi(4) + penalties.col * nf * (nf - 1.0).powi(2),
        FormulationKind::HuboHw => nf * nf + penalties.row.unwrap_or(1.0) * nf + penalties.col * nf * (nf - 1.0),
    };
    if !bound.is_finite() || bound < 0.0 {
        return Err(Error::Domain(format!("penalties give an invalid bound {bound}")));
    }
    Ok(QubitCounts { n_vars: kind.num_vars(n), m: m_for_range(-bound, bound), bound })
}

/// `k`-controlled rotations of the HUBO circuit for `N = 2^B`, with `m`
/// value qubits, counted through Vandermonde's convolution.
pub fn ckr_count(n: usize, k: usize, m: usize) -> Result<u128> {
    check_n(n)?;
    if !n.is_power_of_two() {
        return Err(Error::Domain(format!("N = {n} is not a power of two")));
    }
    let b = code_bits(n) as u64;
    let k = k as u64;
    if k == 0 || k > 2 * b {
        return Err(Error::Domain(format!("k = {k} outside 1..={}", 2 * b)));
    }
    let pairs = binomial(n as u64, 2);
    let per_term = if k <= b {
        pairs * (binomial(2 * b, k) - 2 * binomial(b, k)) + n as u128 * binomial(b, k)
    } else {
        pairs * binomial(2 * b, k)
    };
    Ok(per_term * m as u128)
}

/// Code weights `h_N` and pairwise sums `h'_N` (all `N^2` ordered pairs),
/// leaving out the weight-0 code, whose `y` is constant.
pub fn weight_vectors(n: usize) -> Result<(Vec<u32>, Vec<u32>)> {
    let h: Vec<u32> = HwCodeTable::new(n)?.weights().into_iter().filter(|&w| w > 0).collect();
    let hp = h.iter().flat_map(|&a| h.iter().map(move |&b| a + b)).collect();
    Ok((h, hp))
}

/// `k`-controlled rotations of the HUBO circuit for any `N`:
/// `(c(h_N, k) N + c(h'_N, k) C(N, 2)) m`, where `c(v, k)` counts entries
/// equal to `k`.
pub fn ckr_count_general(n: usize, k: usize, m: usize) -> Result<u128> {
    check_n(n)?;
    let (h, hp) = weight_vectors(n)?;
    let c = |v: &[u32]| v.iter().filter(|&&w| w as usize == k).count() as u128;
    Ok((c(&h) * n as u128 + c(&hp) * binomial(n as u64, 2)) * m as u128)
}

/// Closed-form histogram `k -> number of k-controlled rotations`, `k >= 1`.
pub fn ckr_histogram(n: usize, kind: FormulationKind, m: usize) -> Result<BTreeMap<usize, u128>> {
    check_n(n)?;
    let mut out = BTreeMap::new();
    if kind.is_qubo() {
        let n = n as u128;
        out.insert(1, n * n * m as u128);
        out.insert(2, (n.pow(4) - n * n) / 2 * m as u128);
    } else {
        for k in 1..=2 * code_bits(n) {
            let c = if n.is_power_of_two() { ckr_count(n, k, m)? } else { ckr_count_general(n, k, m)? };
            if c > 0 {
                out.insert(k, c);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CnotTotals {
    /// Phase-encoding CNOTs summed over the closed-form histogram.
    pub total: u128,
    /// `(m+1) N^4 + (m-1) N^2` for QUBO under the Rz model.
    pub closed_form: Option<u128>,
    /// `(m+B) N^4` for HUBO under the Rz model.
    pub upper_bound: Option<u128>,
}

/// Phase-encoding CNOT count. Model R: `2^k` per `k`-controlled rotation.
/// Model Rz: `2m + 2(k-1)` per `k`-controlled block of `m` rotations.
pub fn cnot_totals(n: usize, kind: FormulationKind, model: CostModel, m: usize) -> Result<CnotTotals> {
    let hist = ckr_histogram(n, kind, m)?;
    let m128 = m as u128;
    let total = match model {
        CostModel::R => hist.iter().map(|(&k, &c)| c << k).sum(),
        CostModel::Rz => hist.iter().map(|(&k, &c)| c / m128 * (2 * m128 + 2 * (k as u128 - 1))).sum(),
    };
    let n4 = (n as u128).pow(4);
    let (closed_form, upper_bound) = match (model, kind.is_qubo()) {
        (CostModel::Rz, true) => (Some((m128 + 1) * n4 + (m128 - 1) * (n * n) as u128), None),
        (CostModel::Rz, false) => (None, Some((m128 + code_bits(n) as u128) * n4)),
        _ => (None, None),
    };
    Ok(CnotTotals { total, closed_form, upper_bound })
}

/// `(N^N, 2^(N ceil(log2 N)), 2^(N^2))` with the ordering checks
/// `N^N <= 2^(NB) < 2^(N^2)` and whether the first pair is equal.
pub fn search_space_chain(n: usize) -> Result<([BigUint; 3], bool, bool)> {
    let (a, b, c) = feasible_space_sizes(n)?;
    let holds = a <= b && b < c;
    let equal = a == b;
    Ok(([a, b, c], holds, equal))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub n: usize,
    pub kind: FormulationKind,
    pub term_count: u128,
    pub term_count_exact: u128,
    pub qubits_n: usize,
    pub qubits_m: usize,
    pub ckr_histogram: BTreeMap<usize, u128>,
    pub cnot_r_model: u128,
    pub cnot_rz_model: u128,
    /// Size of the space the search draws from.
    pub search_space: BigUint,
    /// This row minus the HUBO row of the same `N`.
    pub term_diff_vs_hubo: i128,
    pub qubit_diff_vs_hubo: i64,
    pub cnot_r_diff_vs_hubo: i128,
    pub cnot_rz_diff_vs_hubo: i128,
}

impl MetricsRow {
    pub fn qubits_total(&self) -> usize {
        self.qubits_n + self.qubits_m
    }

    fn histogram_field(&self) -> String {
        self.ckr_histogram.iter().map(|(k, c)| format!("{k}:{c}")).collect::<Vec<_>>().join(";")
    }
}

fn base_row(n: usize, kind: FormulationKind, uniform_penalties: bool) -> Result<MetricsRow> {
    let q = qubit_counts(n, kind, metric_penalties(n, kind, uniform_penalties))?;
    let (dicke, hubo, qubo) = feasible_space_sizes(n)?;
    Ok(MetricsRow {
        n,
        kind,
        term_count: term_count_closed_form(n, kind)?,
        term_count_exact: term_count_exact(n, kind)?,
        qubits_n: q.n_vars,
        qubits_m: q.m,
        ckr_histogram: ckr_histogram(n, kind, q.m)?,
        cnot_r_model: cnot_totals(n, kind, CostModel::R, q.m)?.total,
        cnot_rz_model: cnot_totals(n, kind, CostModel::Rz, q.m)?.total,
        search_space: match kind {
            FormulationKind::QuboHadamard => qubo,
            FormulationKind::QuboDicke => dicke,
            FormulationKind::HuboHw => hubo,
        },
        term_diff_vs_hubo: 0,
        qubit_diff_vs_hubo: 0,
        cnot_r_diff_vs_hubo: 0,
        cnot_rz_diff_vs_hubo: 0,
    })
}

/// One row per `(N, kind)` for `N` in `n_min..=n_max`.
pub fn metrics_rows(n_min: usize, n_max: usize, kinds: &[FormulationKind], uniform_penalties: bool) -> Result<Vec<MetricsRow>> {
    check_n(n_min)?;
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let hubo = base_row(n, FormulationKind::HuboHw, uniform_penalties)?;
        for &kind in kinds {
            let mut r = base_row(n, kind, uniform_penalties)?;
            r.term_diff_vs_hubo = r.term_count as i128 - hubo.term_count as i128;
            r.qubit_diff_vs_hubo = r.qubits_total() as i64 - hubo.qubits_total() as i64;
            r.cnot_r_diff_vs_hubo = r.cnot_r_model as i128 - hubo.cnot_r_model as i128;
            r.cnot_rz_diff_vs_hubo = r.cnot_rz_model as i128 - hubo.cnot_rz_model as i128;
            rows.push(r);
        }
    }
    Ok(rows)
}

pub const METRICS_HEADER: &str = "n,kind,term_count,term_count_exact,qubits_n,qubits_m,qubits_total,ckr_histogram,\
cnot_r_model,cnot_rz_model,search_space_log2,search_space,term_diff_vs_hubo,qubit_diff_vs_hubo,\
cnot_r_diff_vs_hubo,cnot_rz_diff_vs_hubo";

/// Metrics table as CSV with [`METRICS_HEADER`] columns.
pub fn emit_metrics(n_min: usize, n_max: usize, kinds: &[FormulationKind], uniform_penalties: bool) -> Result<String> {
    let mut s = format!("{METRICS_HEADER}\n");
    for r in metrics_rows(n_min, n_max, kinds, uniform_penalties)? {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{:.6},{},{},{},{},{}\n",
            r.n,
            r.kind,
            r.term_count,
            r.term_count_exact,
            r.qubits_n,
            r.qubits_m,
            r.qubits_total(),
            r.histogram_field(),
            r.cnot_r_model,
            r.cnot_rz_model,
            log2_big(&r.search_space),
            r.search_space,
            r.term_diff_vs_hubo,
            r.qubit_diff_vs_hubo,
            r.cnot_r_diff_vs_hubo,
            r.cnot_rz_diff_vs_hubo,
        ));
    }
    Ok(s)
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return (x.to_u64_digits().first().copied().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 52;
    let top = (x >> shift).to_u64_digits()[0] as f64;
    top.log2() + shift as f64
}
