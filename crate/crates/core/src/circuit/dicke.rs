//! Dicke-state preparation by divide and conquer.
//!
//! The input is a right-aligned unary string `|0^{n-k} 1^k>`. Weight
//! distribution blocks split a register into halves and spread the ones
//! between them with hypergeometric amplitudes; blocks no larger than `k` are
//! finished with a cascade of split-and-cyclic-shift (SCS) gates.

use crate::error::{Error, Result};

use super::{Circuit, Gate, Stage};

/// `|D_k^n>` on qubits `0..n` from the all-zero state.
pub fn build_dicke(n: usize, k: usize) -> Result<Circuit> {
    let qubits: Vec<usize> = (0..n).collect();
    let mut c = Circuit::new(n, 0);
    for g in dicke_gates(&qubits, k)? {
        c.push(g, Stage::StatePrep)?;
    }
    Ok(c)
}

/// Gates preparing `|D_k>` on `qubits` (in register order) from all zeros.
pub fn dicke_gates(qubits: &[usize], k: usize) -> Result<Vec<Gate>> {
    let n = qubits.len();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("Dicke state needs 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut out: Vec<Gate> = qubits[n - k..].iter().map(|&q| Gate::X(q)).collect();
    distribute(qubits, &[k], k, &mut out);
    Ok(out)
}

/// Turn a right-aligned unary input of any weight in `weights` into the
/// matching Dicke state.
fn distribute(qubits: &[usize], weights: &[usize], k: usize, out: &mut Vec<Gate>) {
    let s = qubits.len();
    if s <= 1 || weights.iter().all(|&w| w == 0 || w == s) {
        return;
    }
    if s <= k {
        unary_to_dicke(qubits, out);
        return;
    }
    let a = s.div_ceil(2);
    let b = s - a;
    let (left, right) = qubits.split_at(a);
    let mut lw = Vec::new();
    let mut rw = Vec::new();
    for &w in weights {
        let lo = w.saturating_sub(b);
        let hi = w.min(a);
        weight_split(left, right, w, out);
        for i in lo..=hi {
            if !lw.contains(&i) {
                lw.push(i);
            }
            if !rw.contains(&(w - i)) {
                rw.push(w - i);
            }
        }
    }
    distribute(left, &lw, k, out);
    distribute(right, &rw, k, out);
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Moves ones from the right block to the left block for the branch of total
/// weight `w`, so that `i` ones end up on the left with probability
/// `C(a,i) C(b,w-i) / C(a+b,w)`.
fn weight_split(left: &[usize], right: &[usize], w: usize, out: &mut Vec<Gate>) {
    let (a, b) = (left.len(), right.len());
    let lo = w.saturating_sub(b);
    let hi = w.min(a);
    let probs: Vec<f64> = (lo..=hi).map(|i| binom(a, i) * binom(b, w - i) / binom(a + b, w)).collect();
    let mut tail: f64 = probs.iter().sum();
    for i in lo..hi {
        let r = w - i;
        let stay = (probs[i - lo] / tail).clamp(0.0, 1.0);
        tail -= probs[i - lo];
        // Givens pair: left slot `a-i-1` (empty) and the leftmost right one at `b-r`.
        let p = left[a - i - 1];
        let q = right[b - r];
        let mut ones = vec![q];
        let mut zeros = Vec::new();
        if i > 0 {
            ones.push(left[a - i]);
        }
        if i + 2 <= a {
            zeros.push(left[a - i - 2]);
        }
        if r >= 2 {
            ones.push(right[b - r + 1]);
        }
        if r < b {
            zeros.push(right[b - r - 1]);
        }
        out.push(Gate::Cnot { control: p, target: q });
        out.extend(zeros.iter().map(|&z| Gate::X(z)));
        ones.extend(zeros.iter().copied());
        out.push(Gate::controlled_ry(ones, p, 2.0 * stay.sqrt().acos()));
        out.extend(zeros.iter().map(|&z| Gate::X(z)));
        out.push(Gate::Cnot { control: p, target: q });
    }
}

/// `U_s^s`: right-aligned unary of any weight to the Dicke state of that
/// weight, as `SCS_{s,s-1} .. SCS_{2,1}`.
fn unary_to_dicke(qubits: &[usize], out: &mut Vec<Gate>) {
    for l in (2..=qubits.len()).rev() {
        scs(&qubits[..l], l - 1, out);
    }
}

/// `SCS_{n,k}` on the last `k + 1` of `qubits` (1-based position `j` is
/// `qubits[j - 1]`).
fn scs(qubits: &[usize], k: usize, out: &mut Vec<Gate>) {
    let n = qubits.len();
    let at = |j: usize| qubits[j - 1];
    out.push(Gate::Cnot { control: at(n - 1), target: at(n) });
    out.push(Gate::McRy {
        controls: vec![at(n)],
        target: at(n - 1),
        theta: 2.0 * (1.0 / n as f64).sqrt().acos(),
    });
    out.push(Gate::Cnot { control: at(n - 1), target: at(n) });
    for l in 2..=k {
        out.push(Gate::Cnot { control: at(n - l), target: at(n) });
        out.push(Gate::McRy {
            controls: vec![at(n), at(n - l + 1)],
            target: at(n - l),
            theta: 2.0 * (l as f64 / n as f64).sqrt().acos(),
        });
        out.push(Gate::Cnot { control: at(n - l), target: at(n) });
    }
}
