//! Construction of `A_y`, the (inverse) QFT and the Grover operator.

use std::f64::consts::PI;

use crate::encoding::{FeasibleSpace, Formulation, FormulationKind};
use crate::error::{Error, Result};
use crate::poly::MultilinearPolynomial;

use super::dicke::dicke_gates;
use super::{reduce_angle, Circuit, Gate, Stage};

/// Largest feasible space that `value_range` enumerates exhaustively.
pub const EXHAUSTIVE_RANGE_MAX: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeMethod {
    /// Enumerate the feasible space.
    Exhaustive,
    /// `c_0 -/+ sum of |other coefficients|`.
    CoefficientBound,
    /// Exhaustive up to `EXHAUSTIVE_RANGE_MAX` states, else the bound.
    Auto,
}

/// Initialization of the variable register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateInit {
    Hadamard,
    /// One W state per block of `width` consecutive qubits.
    DickeRows { width: usize },
}

impl StateInit {
    pub fn for_formulation(form: &Formulation) -> Self {
        match form.kind() {
            FormulationKind::QuboDicke => StateInit::DickeRows { width: form.size() },
            _ => StateInit::Hadamard,
        }
    }
}

/// How the value rotations are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseStyle {
    /// Phase gates `R(theta)`.
    #[default]
    R,
    /// `Rz(theta)`, equal to `R(theta)` up to a phase.
    Rz,
}

/// Minimum and maximum of `poly` over `space`.
pub fn value_range(poly: &MultilinearPolynomial, space: FeasibleSpace, method: RangeMethod) -> Result<(f64, f64)> {
    if space.num_vars() != poly.num_vars() {
        return Err(Error::Dimension { expected: poly.num_vars(), got: space.num_vars() });
    }
    let size = space.size_u64().unwrap_or(u64::MAX);
    let exhaustive = match method {
        RangeMethod::Exhaustive => {
            if size > EXHAUSTIVE_RANGE_MAX {
                return Err(Error::Scale(format!("{size} states exceed the exhaustive range limit")));
            }
            true
        }
        RangeMethod::CoefficientBound => false,
        RangeMethod::Auto => size <= EXHAUSTIVE_RANGE_MAX,
    };
    if !exhaustive {
        let c0 = poly.constant_term();
        let rest = poly.l1_norm() - c0.abs();
        return Ok((c0 - rest, c0 + rest));
    }
    let compiled = poly.compile().expect("at most 20 variables");
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut visit = |v: f64| {
        lo = lo.min(v);
        hi = hi.max(v);
    };
    match space {
        FeasibleSpace::Hypercube { .. } => compiled.for_each_state(|_, v| visit(v)),
        FeasibleSpace::RowOneHot { .. } => (0..size).for_each(|id| visit(compiled.eval(space.state_mask(id)))),
    }
    Ok((lo, hi))
}

/// Smallest `m >= 1` with `-2^(m-1) <= lo` and `hi < 2^(m-1)`, after
/// rounding both ends to the nearest integer.
pub fn m_for_range(lo: f64, hi: f64) -> usize {
    let (lo, hi) = (lo.round(), hi.round());
    let mut m = 1;
    while !(-(2f64.powi(m as i32 - 1)) <= lo && hi < 2f64.powi(m as i32 - 1)) {
        m += 1;
    }
    m
}

/// Value-register width covering `E(x) - y` over `space` for every
/// `|y| <= y_shift`.
pub fn compute_m(poly: &MultilinearPolynomial, space: FeasibleSpace, y_shift: f64) -> Result<usize> {
    let (lo, hi) = value_range(poly, space, RangeMethod::Auto)?;
    Ok(m_for_range(lo - y_shift.abs(), hi + y_shift.abs()))
}

/// Value-register width for a whole search: thresholds are values of `E` on
/// the feasible space, so `E(x) - y` lies in `[lo - hi, hi - lo]`.
pub fn compute_m_for_search(form: &Formulation) -> Result<usize> {
    let (lo, hi) = value_range(form.poly(), form.feasible_space(), RangeMethod::Auto)?;
    Ok(m_for_range(lo - hi, hi - lo))
}

/// `A_y`: initialize the variables, put the value register in uniform
/// superposition, imprint `E(x) - y` as phases, then apply the inverse QFT.
pub fn build_ay(
    poly: &MultilinearPolynomial,
    m: usize,
    y: f64,
    init: StateInit,
    style: PhaseStyle,
) -> Result<Circuit> {
    if m == 0 {
        return Err(Error::Domain("value register needs m >= 1".into()));
    }
    let n = poly.num_vars();
    let mut c = Circuit::new(n, m);
    match init {
        StateInit::Hadamard => {
            for q in 0..n {
                c.push(Gate::H(q), Stage::StatePrep)?;
            }
        }
        StateInit::DickeRows { width } => {
            if width == 0 || !n.is_multiple_of(width) {
                return Err(Error::Malformed(format!("{n} variables do not split into rows of {width}")));
            }
            for row in 0..n / width {
                let qs: Vec<usize> = (row * width..(row + 1) * width).collect();
                for g in dicke_gates(&qs, 1)? {
                    c.push(g, Stage::StatePrep)?;
                }
            }
        }
    }
    for r in 0..m {
        c.push(Gate::H(n + r), Stage::ValueInit)?;
    }
    let scale = 2.0 * PI / 2f64.powi(m as i32);
    let constant = poly.constant_term() - y;
    let terms = std::iter::once((Vec::new(), constant))
        .chain(poly.terms().filter(|(mono, _)| !mono.is_constant()).map(|(mono, a)| {
            (mono.vars().iter().map(|&v| v as usize).collect::<Vec<_>>(), a)
        }));
    for (t, (controls, a)) in terms.enumerate() {
        if controls.is_empty() && a == 0.0 {
            continue;
        }
        if controls.len() > n {
            return Err(Error::Malformed(format!("term of order {} over {n} variables", controls.len())));
        }
        let theta = scale * a;
        for r in 0..m {
            let angle = reduce_angle(theta * 2f64.powi(r as i32));
            let g = match style {
                PhaseStyle::R => Gate::controlled_phase(controls.clone(), n + r, angle),
                PhaseStyle::Rz => Gate::controlled_rz(controls.clone(), n + r, angle),
            };
            c.push(g, Stage::PhaseEncode(t as u32))?;
        }
    }
    for g in iqft_gates(n, m) {
        c.push(g, Stage::Iqft)?;
    }
    Ok(c)
}

fn qft_gates(offset: usize, m: usize) -> Vec<Gate> {
    let mut out = Vec::new();
    for a in (0..m).rev() {
        out.push(Gate::H(offset + a));
        for b in (0..a).rev() {
            out.push(Gate::McPhase {
                controls: vec![offset + b],
                target: offset + a,
                theta: PI / 2f64.powi((a - b) as i32),
            });
        }
    }
    for a in 0..m / 2 {
        out.push(Gate::Swap(offset + a, offset + m - 1 - a));
    }
    out
}

fn iqft_gates(offset: usize, m: usize) -> Vec<Gate> {
    qft_gates(offset, m).iter().rev().map(Gate::inverse).collect()
}

/// QFT on `m` qubits, `|j> -> sum_k e^{2 pi i j k / 2^m} |k> / 2^(m/2)`.
pub fn qft(m: usize) -> Circuit {
    let mut c = Circuit::new(0, m);
    for g in qft_gates(0, m) {
        c.push(g, Stage::Qft).expect("qubits in range");
    }
    c
}

/// Inverse of [`qft`].
pub fn iqft(m: usize) -> Circuit {
    let mut c = Circuit::new(0, m);
    for g in iqft_gates(0, m) {
        c.push(g, Stage::Iqft).expect("qubits in range");
    }
    c
}

/// `G = A_y (2|0><0| - I) A_y^dagger O` with `O` a Pauli-Z on the sign qubit.
/// Gates are listed in application order.
pub fn build_grover_operator(ay: &Circuit) -> Result<Circuit> {
    let sign = ay.sign_qubit().ok_or_else(|| Error::Malformed("A_y has no value register".into()))?;
    let mut g = Circuit::new(ay.num_vars(), ay.value_bits());
    g.push(Gate::Z(sign), Stage::Oracle)?;
    g.append(&ay.inverse())?;
    g.push(Gate::Reflect0((0..ay.num_qubits()).collect()), Stage::Diffusion)?;
    g.append(ay)?;
    Ok(g)
}
