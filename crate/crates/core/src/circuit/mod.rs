//! Gate-level circuits for Grover adaptive search.
//!
//! Qubits are little-endian. A search circuit has the variable register on
//! qubits `[0, n)` and the value register on `[n, n + m)`, with qubit `n + r`
//! carrying weight `2^r` and qubit `n + m - 1` the two's-complement sign.

mod build;
mod counts;
mod dicke;

pub use build::{
    build_ay, build_grover_operator, compute_m, compute_m_for_search, iqft, m_for_range, qft, value_range, PhaseStyle,
    RangeMethod, StateInit,
};
pub use counts::{count_gates, CostModel, GateCounts};
pub use dicke::{build_dicke, dicke_gates};

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Reduce an angle into `[-pi, pi)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta - 2.0 * PI * ((theta + PI) / (2.0 * PI)).floor();
    if r >= PI {
        r - 2.0 * PI
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    /// `R(theta) = diag(1, e^{i theta})`.
    Phase { target: usize, theta: f64 },
    /// `Rz(theta) = diag(e^{-i theta/2}, e^{i theta/2})`.
    Rz { target: usize, theta: f64 },
    /// `Ry(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]`.
    Ry { target: usize, theta: f64 },
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    McPhase { controls: Vec<usize>, target: usize, theta: f64 },
    McRz { controls: Vec<usize>, target: usize, theta: f64 },
    McRy { controls: Vec<usize>, target: usize, theta: f64 },
    /// `2|0><0| - I` on the listed qubits.
    Reflect0(Vec<usize>),
}

impl Gate {
    /// `R(theta)` with any number of controls.
    pub fn controlled_phase(controls: Vec<usize>, target: usize, theta: f64) -> Gate {
        if controls.is_empty() {
            Gate::Phase { target, theta }
        } else {
            Gate::McPhase { controls, target, theta }
        }
    }

    pub fn controlled_rz(controls: Vec<usize>, target: usize, theta: f64) -> Gate {
        if controls.is_empty() {
            Gate::Rz { target, theta }
        } else {
            Gate::McRz { controls, target, theta }
        }
    }

    pub fn controlled_ry(controls: Vec<usize>, target: usize, theta: f64) -> Gate {
        if controls.is_empty() {
            Gate::Ry { target, theta }
        } else {
            Gate::McRy { controls, target, theta }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
            Gate::Phase { .. } => "p",
            Gate::Rz { .. } => "rz",
            Gate::Ry { .. } => "ry",
            Gate::Cnot { .. } => "cx",
            Gate::Swap(..) => "swap",
            Gate::McPhase { .. } => "mcp",
            Gate::McRz { .. } => "mcrz",
            Gate::McRy { .. } => "mcry",
            Gate::Reflect0(_) => "reflect0",
        }
    }

    /// Qubits touched, controls first and target last.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => vec![*q],
            Gate::Phase { target, .. } | Gate::Rz { target, .. } | Gate::Ry { target, .. } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::McPhase { controls, target, .. }
            | Gate::McRz { controls, target, .. }
            | Gate::McRy { controls, target, .. } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
            Gate::Reflect0(qs) => qs.clone(),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Phase { theta, .. }
            | Gate::Rz { theta, .. }
            | Gate::Ry { theta, .. }
            | Gate::McPhase { theta, .. }
            | Gate::McRz { theta, .. }
            | Gate::McRy { theta, .. } => Some(*theta),
            _ => None,
        }
    }

    /// Number of control qubits (a CNOT has one).
    pub fn num_controls(&self) -> usize {
        match self {
            Gate::Cnot { .. } => 1,
            Gate::McPhase { controls, .. } | Gate::McRz { controls, .. } | Gate::McRy { controls, .. } => {
                controls.len()
            }
            _ => 0,
        }
    }

    pub fn inverse(&self) -> Gate {
        let mut g = self.clone();
        match &mut g {
            Gate::Phase { theta, .. }
            | Gate::Rz { theta, .. }
            | Gate::Ry { theta, .. }
            | Gate::McPhase { theta, .. }
            | Gate::McRz { theta, .. }
            | Gate::McRy { theta, .. } => *theta = -*theta,
            _ => {}
        }
        g
    }

    fn from_parts(kind: &str, qubits: Vec<usize>, angle: Option<f64>) -> std::result::Result<Gate, String> {
        let arity = |want: usize| {
            if qubits.len() == want {
                Ok(())
            } else {
                Err(format!("'{kind}' takes {want} qubit(s), got {}", qubits.len()))
            }
        };
        let theta = || angle.ok_or_else(|| format!("'{kind}' needs an angle"));
        let split = || {
            if qubits.len() < 2 {
                Err(format!("'{kind}' needs at least one control and a target"))
            } else {
                Ok((qubits[..qubits.len() - 1].to_vec(), qubits[qubits.len() - 1]))
            }
        };
        let no_angle = || if angle.is_some() { Err(format!("'{kind}' takes no angle")) } else { Ok(()) };
        Ok(match kind {
            "h" | "x" | "z" => {
                arity(1)?;
                no_angle()?;
                match kind {
                    "h" => Gate::H(qubits[0]),
                    "x" => Gate::X(qubits[0]),
                    _ => Gate::Z(qubits[0]),
                }
            }
            "p" | "rz" | "ry" => {
                arity(1)?;
                let (target, theta) = (qubits[0], theta()?);
                match kind {
                    "p" => Gate::Phase { target, theta },
                    "rz" => Gate::Rz { target, theta },
                    _ => Gate::Ry { target, theta },
                }
            }
            "cx" => {
                arity(2)?;
                no_angle()?;
                Gate::Cnot { control: qubits[0], target: qubits[1] }
            }
            "swap" => {
                arity(2)?;
                no_angle()?;
                Gate::Swap(qubits[0], qubits[1])
            }
            "mcp" | "mcrz" | "mcry" => {
                let (controls, target) = split()?;
                let theta = theta()?;
                match kind {
                    "mcp" => Gate::McPhase { controls, target, theta },
                    "mcrz" => Gate::McRz { controls, target, theta },
                    _ => Gate::McRy { controls, target, theta },
                }
            }
            "reflect0" => {
                no_angle()?;
                Gate::Reflect0(qubits)
            }
            other => return Err(format!("unknown gate kind '{other}'")),
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qs: Vec<String> = self.qubits().iter().map(|q| q.to_string()).collect();
        write!(f, "{} {}", self.kind(), qs.join(","))?;
        if let Some(a) = self.angle() {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// Which part of a circuit a gate belongs to. Used for cost accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    /// Initialization of the variable register.
    StatePrep,
    /// Hadamard layer on the value register.
    ValueInit,
    /// Phase rotations for one term of `E(x) - y`, indexed by term.
    PhaseEncode(u32),
    Iqft,
    Qft,
    Oracle,
    Diffusion,
    Other,
}

impl Stage {
    fn tag(&self) -> String {
        match self {
            Stage::StatePrep => "prep".into(),
            Stage::ValueInit => "value".into(),
            Stage::PhaseEncode(t) => format!("term{t}"),
            Stage::Iqft => "iqft".into(),
            Stage::Qft => "qft".into(),
            Stage::Oracle => "oracle".into(),
            Stage::Diffusion => "diffusion".into(),
            Stage::Other => "other".into(),
        }
    }

    fn parse(tag: &str) -> Option<Stage> {
        Some(match tag {
            "prep" => Stage::StatePrep,
            "value" => Stage::ValueInit,
            "iqft" => Stage::Iqft,
            "qft" => Stage::Qft,
            "oracle" => Stage::Oracle,
            "diffusion" => Stage::Diffusion,
            "other" => Stage::Other,
            t => Stage::PhaseEncode(t.strip_prefix("term")?.parse().ok()?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub gate: Gate,
    pub stage: Stage,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_vars: usize,
    value_bits: usize,
    ops: Vec<Op>,
}

impl Circuit {
    /// Empty circuit with a variable register of `num_vars` qubits followed by
    /// a value register of `value_bits` qubits.
    pub fn new(num_vars: usize, value_bits: usize) -> Self {
        Self { num_qubits: num_vars + value_bits, num_vars, value_bits, ops: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn value_bits(&self) -> usize {
        self.value_bits
    }

    /// Index of the two's-complement sign qubit, if there is a value register.
    pub fn sign_qubit(&self) -> Option<usize> {
        (self.value_bits > 0).then(|| self.num_qubits - 1)
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.ops.iter().map(|o| &o.gate)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, gate: Gate, stage: Stage) -> Result<()> {
        let qs = gate.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::Index(format!("qubit {q} in '{gate}' >= {}", self.num_qubits)));
            }
            if qs[..i].contains(&q) {
                return Err(Error::Index(format!("qubit {q} repeated in '{gate}'")));
            }
        }
        if let Some(a) = gate.angle() {
            if !a.is_finite() {
                return Err(Error::Domain(format!("non-finite angle in '{gate}'")));
            }
        }
        self.ops.push(Op { gate, stage });
        Ok(())
    }

    /// Append every op of `other`, which must fit in this register.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        for op in &other.ops {
            self.push(op.gate.clone(), op.stage)?;
        }
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        let ops = self.ops.iter().rev().map(|o| Op { gate: o.gate.inverse(), stage: o.stage }).collect();
        Circuit { ops, ..*self }
    }

    /// Line-based text form: a header `qubits <total> vars <n> value <m>`,
    /// then one `kind q0,q1,.. [angle] @stage` line per gate.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {} vars {} value {}\n", self.num_qubits, self.num_vars, self.value_bits);
        for op in &self.ops {
            s.push_str(&format!("{} @{}\n", op.gate, op.stage.tag()));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let bad = |line: usize, message: String| Error::Parse { position: line + 1, message };
        let (hl, header) = lines.next().ok_or_else(|| bad(0, "missing header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|e| bad(hl, e.to_string()));
        if h.len() != 6 || h[0] != "qubits" || h[2] != "vars" || h[4] != "value" {
            return Err(bad(hl, format!("bad header '{header}'")));
        }
        let (total, vars, value) = (num(h[1])?, num(h[3])?, num(h[5])?);
        if vars + value != total {
            return Err(bad(hl, "register sizes do not add up".into()));
        }
        let mut c = Circuit::new(vars, value);
        for (ln, line) in lines {
            let mut toks: Vec<&str> = line.split_whitespace().collect();
            let stage = match toks.last() {
                Some(t) if t.starts_with('@') => {
                    let s = Stage::parse(&t[1..]).ok_or_else(|| bad(ln, format!("unknown stage '{t}'")))?;
                    toks.pop();
                    s
                }
                _ => Stage::Other,
            };
            if toks.len() < 2 || toks.len() > 3 {
                return Err(bad(ln, format!("expected 'kind qubits [angle]', got '{line}'")));
            }
            let qubits = toks[1]
                .split(',')
                .map(|q| q.parse::<usize>().map_err(|e| bad(ln, format!("qubit '{q}': {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let angle = match toks.get(2) {
                Some(a) => Some(a.parse::<f64>().map_err(|e| bad(ln, format!("angle '{a}': {e}")))?),
                None => None,
            };
            let gate = Gate::from_parts(toks[0], qubits, angle).map_err(|m| bad(ln, m))?;
            c.push(gate, stage).map_err(|e| bad(ln, e.to_string()))?;
        }
        Ok(c)
    }
}
