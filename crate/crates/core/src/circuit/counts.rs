//! Gate tallies and CNOT costs under two decomposition models.
//!
//! Model R decomposes every `k`-controlled rotation into `2^k` CNOTs and
//! `2^k` rotations. Model Rz implements a whole `k`-controlled `U_G` block of
//! `m` rotations with `2m + 2(k - 1)` CNOTs and `m` Rz gates. Both models
//! apply to the phase-encoding part of `A_y`; the inverse QFT and state
//! preparation are tallied separately.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Circuit, Gate, Stage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CostModel {
    R,
    Rz,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub num_qubits: usize,
    pub value_bits: usize,
    /// Every gate by text-format kind.
    pub per_kind: BTreeMap<String, usize>,
    /// `k -> number of k-controlled rotations (C^kR)` in the phase part, `k >= 1`.
    pub controlled_rotations: BTreeMap<usize, usize>,
    /// `k -> number of U_G blocks with k controls`, including `k = 0`.
    pub ug_blocks: BTreeMap<usize, usize>,
    pub uncontrolled_rotations: usize,
    pub phase_cnots_r: u64,
    pub phase_rotations_r: u64,
    pub phase_cnots_rz: u64,
    pub phase_rz_gates: u64,
    /// Controlled phase = 2 CNOTs, swap = 3 CNOTs.
    pub iqft_cnots: u64,
    /// CNOT = 1, `k`-controlled Ry = `2^k`.
    pub prep_cnots: u64,
    pub hadamards: usize,
    /// Phase-part CNOTs under the requested model.
    pub cnots: u64,
}

pub fn count_gates(c: &Circuit, model: CostModel) -> GateCounts {
    let m = c.value_bits() as u64;
    let mut g = GateCounts { num_qubits: c.num_qubits(), value_bits: c.value_bits(), ..Default::default() };
    let mut blocks: BTreeMap<u32, usize> = BTreeMap::new();
    for op in c.ops() {
        *g.per_kind.entry(op.gate.kind().to_string()).or_insert(0) += 1;
        if matches!(op.gate, Gate::H(_)) {
            g.hadamards += 1;
        }
        let k = op.gate.num_controls();
        match op.stage {
            Stage::PhaseEncode(t) => {
                blocks.insert(t, k);
                if k == 0 {
                    g.uncontrolled_rotations += 1;
                    g.phase_rotations_r += 1;
                } else {
                    *g.controlled_rotations.entry(k).or_insert(0) += 1;
                    g.phase_cnots_r += 1 << k;
                    g.phase_rotations_r += 1 << k;
                }
            }
            Stage::Iqft | Stage::Qft => {
                g.iqft_cnots += match op.gate {
                    Gate::Swap(..) => 3,
                    Gate::McPhase { .. } => 2,
                    _ => 0,
                }
            }
            Stage::StatePrep => {
                g.prep_cnots += match op.gate {
                    Gate::Cnot { .. } => 1,
                    Gate::McRy { .. } => 1 << k,
                    _ => 0,
                }
            }
            _ => {}
        }
    }
    for &k in blocks.values() {
        *g.ug_blocks.entry(k).or_insert(0) += 1;
        g.phase_rz_gates += m;
        if k >= 1 {
            g.phase_cnots_rz += 2 * m + 2 * (k as u64 - 1);
        }
    }
    g.cnots = match model {
        CostModel::R => g.phase_cnots_r,
        CostModel::Rz => g.phase_cnots_rz,
    };
    g
}
