//! QAP encoders: QUBO with Hadamard initialization, QUBO with Dicke row
//! initialization, and the Hamming-weight ordered HUBO encoding.
//!
//! Variable layout is row-major. QUBO variables are `x[i * N + j]` for the
//! assignment of facility `i` to location `j`. HUBO variables are
//! `x[i * B + r]` for bit `r` of facility `i`'s location code, with `r = 0`
//! the most significant bit.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::MultilinearPolynomial;
use crate::qap::{Permutation, QapInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormulationKind {
    #[serde(rename = "qubo-h")]
    QuboHadamard,
    #[serde(rename = "qubo-d")]
    QuboDicke,
    #[serde(rename = "hubo-hw")]
    HuboHw,
}

impl FormulationKind {
    pub const ALL: [FormulationKind; 3] = [Self::QuboHadamard, Self::QuboDicke, Self::HuboHw];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::QuboHadamard => "qubo-h",
            Self::QuboDicke => "qubo-d",
            Self::HuboHw => "hubo-hw",
        }
    }

    pub fn is_qubo(self) -> bool {
        !matches!(self, Self::HuboHw)
    }

    /// Number of binary variables for problem size `n`.
    pub fn num_vars(self, n: usize) -> usize {
        match self {
            Self::HuboHw => n * code_bits(n),
            _ => n * n,
        }
    }
}

impl fmt::Display for FormulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qubo-h" => Ok(Self::QuboHadamard),
            "qubo-d" => Ok(Self::QuboDicke),
            "hubo-hw" => Ok(Self::HuboHw),
            other => Err(Error::Domain(format!("unknown formulation kind '{other}'"))),
        }
    }
}

/// `B = ceil(log2 n)`.
pub fn code_bits(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Location codes ordered by descending Hamming weight, ties broken by
/// descending big-endian value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HwCodeTable {
    n: usize,
    bits_b: usize,
    /// All `2^B` codes in table order; the first `n` are in use.
    all_codes: Vec<u32>,
}

impl HwCodeTable {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("code table needs N >= 2, got {n}")));
        }
        let bits_b = code_bits(n);
        let mut all_codes: Vec<u32> = (0..1u32 << bits_b).collect();
        all_codes.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(b.cmp(a)));
        Ok(Self { n, bits_b, all_codes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits_b(&self) -> usize {
        self.bits_b
    }

    /// Codes `b_1..b_N` as big-endian integers.
    pub fn codes(&self) -> &[u32] {
        &self.all_codes[..self.n]
    }

    /// Codes beyond `N` that are never assigned.
    pub fn discarded_codes(&self) -> &[u32] {
        &self.all_codes[self.n..]
    }

    pub fn code(&self, j: usize) -> u32 {
        self.all_codes[j]
    }

    /// Bit `r` of code `j`, `r = 0` most significant.
    pub fn bit(&self, j: usize, r: usize) -> bool {
        self.all_codes[j] >> (self.bits_b - 1 - r) & 1 == 1
    }

    pub fn code_string(&self, j: usize) -> String {
        (0..self.bits_b).map(|r| if self.bit(j, r) { '1' } else { '0' }).collect()
    }

    /// Hamming weights `h_N` of the used codes.
    pub fn weights(&self) -> Vec<u32> {
        self.codes().iter().map(|c| c.count_ones()).collect()
    }

    /// Location index for a big-endian code, `None` if the code is discarded.
    pub fn index_of(&self, code: u32) -> Option<usize> {
        self.codes().iter().position(|&c| c == code)
    }

    /// `y_ij(x) = prod_r (1 - b_jr + (2 b_jr - 1) x_ir)` over `N * B`
    /// variables. `j` may also address a discarded code (`j >= N`).
    pub fn y_poly(&self, i: usize, j: usize) -> Result<MultilinearPolynomial> {
        if i >= self.n || j >= self.all_codes.len() {
            return Err(Error::Index(format!("y_({i},{j}) outside {}x{}", self.n, self.all_codes.len())));
        }
        let nv = self.n * self.bits_b;
        let mut p = MultilinearPolynomial::constant(nv, 1.0);
        for r in 0..self.bits_b {
            let v = (i * self.bits_b + r) as u32;
            let factor = if self.bit(j, r) {
                MultilinearPolynomial::variable(nv, v)?
            } else {
                &MultilinearPolynomial::constant(nv, 1.0) - &MultilinearPolynomial::variable(nv, v)?
            };
            p = &p * &factor;
        }
        Ok(p)
    }
}

/// `y_ij` polynomial for 1-based `(i, j)`.
pub fn y_ij_poly(table: &HwCodeTable, i: usize, j: usize) -> Result<MultilinearPolynomial> {
    if i == 0 || j == 0 || i > table.n || j > table.n {
        return Err(Error::Index(format!("(i, j) = ({i}, {j}) outside 1..={}", table.n)));
    }
    table.y_poly(i - 1, j - 1)
}

/// Support of the initial superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeasibleSpace {
    /// All of `{0,1}^n`.
    Hypercube { n: usize },
    /// `rows` blocks of `width` bits, each block of Hamming weight one.
    RowOneHot { rows: usize, width: usize },
}

impl FeasibleSpace {
    pub fn size(&self) -> BigUint {
        match *self {
            Self::Hypercube { n } => BigUint::from(1u8) << n,
            Self::RowOneHot { rows, width } => BigUint::from(width).pow(rows as u32),
        }
    }

    /// Size as `u64`, `None` on overflow.
    pub fn size_u64(&self) -> Option<u64> {
        u64::try_from(self.size()).ok()
    }

    pub fn size_f64(&self) -> f64 {
        match *self {
            Self::Hypercube { n } => 2f64.powi(n as i32),
            Self::RowOneHot { rows, width } => (width as f64).powi(rows as i32),
        }
    }

    pub fn num_vars(&self) -> usize {
        match *self {
            Self::Hypercube { n } => n,
            Self::RowOneHot { rows, width } => rows * width,
        }
    }

    /// Bitmask of the state with dense index `id`. Hypercube ids are the
    /// bitmask itself; one-hot ids are base-`width` digits, row 0 least
    /// significant.
    pub fn state_mask(&self, id: u64) -> u64 {
        match *self {
            Self::Hypercube { .. } => id,
            Self::RowOneHot { rows, width } => {
                let w = width as u64;
                let mut rest = id;
                let mut mask = 0u64;
                for i in 0..rows {
                    mask |= 1 << (i * width + (rest % w) as usize);
                    rest /= w;
                }
                mask
            }
        }
    }

    pub fn contains(&self, mask: u64) -> bool {
        match *self {
            Self::Hypercube { n } => n >= 64 || mask >> n == 0,
            Self::RowOneHot { rows, width } => {
                let block = (1u64 << width) - 1;
                (0..rows).all(|i| (mask >> (i * width) & block).count_ones() == 1)
                    && (rows * width >= 64 || mask >> (rows * width) == 0)
            }
        }
    }

    /// Uniform draw, returned as a bitmask. Requires at most 64 variables.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match *self {
            Self::Hypercube { n } => {
                if n >= 64 {
                    rng.random()
                } else {
                    rng.random::<u64>() & ((1u64 << n) - 1)
                }
            }
            Self::RowOneHot { rows, width } => {
                (0..rows).fold(0, |m, i| m | 1 << (i * width + rng.random_range(0..width)))
            }
        }
    }
}

/// Penalty weights. `row` is absent for the Dicke formulation, whose row
/// constraint holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Penalties {
    pub row: Option<f64>,
    pub col: f64,
}

impl Penalties {
    /// `N^2` everywhere, except the HUBO row weight which is 1.
    pub fn default_for(kind: FormulationKind, n: usize) -> Self {
        let big = (n * n) as f64;
        match kind {
            FormulationKind::QuboHadamard => Self { row: Some(big), col: big },
            FormulationKind::QuboDicke => Self { row: None, col: big },
            FormulationKind::HuboHw => Self { row: Some(1.0), col: big },
        }
    }
}

/// Form of the HUBO row constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum HuboRowPenalty {
    /// `sum_i (sum_{j<=N} y_ij - 1)^2`.
    #[default]
    OneHot,
    /// `sum_i sum_{j>N} y_ij`, which penalizes the discarded codes directly.
    DiscardedCodes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Formulation {
    kind: FormulationKind,
    n: usize,
    poly: MultilinearPolynomial,
    penalties: Penalties,
    row_penalty: HuboRowPenalty,
    code_table: Option<HwCodeTable>,
}

impl Formulation {
    pub fn kind(&self) -> FormulationKind {
        self.kind
    }

    /// Problem size `N`.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    pub fn poly(&self) -> &MultilinearPolynomial {
        &self.poly
    }

    pub fn penalties(&self) -> Penalties {
        self.penalties
    }

    pub fn row_penalty(&self) -> HuboRowPenalty {
        self.row_penalty
    }

    pub fn code_table(&self) -> Option<&HwCodeTable> {
        self.code_table.as_ref()
    }

    pub fn num_terms(&self) -> usize {
        self.poly.num_terms()
    }

    pub fn feasible_space(&self) -> FeasibleSpace {
        match self.kind {
            FormulationKind::QuboDicke => FeasibleSpace::RowOneHot { rows: self.n, width: self.n },
            _ => FeasibleSpace::Hypercube { n: self.num_vars() },
        }
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<f64> {
        self.poly.evaluate(x)
    }

    /// Permutation encoded by `x`, or `None` if `x` is not a valid assignment.
    pub fn decode(&self, x: &[bool]) -> Result<Option<Permutation>> {
        if x.len() != self.num_vars() {
            return Err(Error::Dimension { expected: self.num_vars(), got: x.len() });
        }
        let n = self.n;
        let mut mapping = Vec::with_capacity(n);
        match &self.code_table {
            None => {
                for i in 0..n {
                    let row = &x[i * n..(i + 1) * n];
                    if row.iter().filter(|&&b| b).count() != 1 {
                        return Ok(None);
                    }
                    mapping.push(row.iter().position(|&b| b).unwrap());
                }
            }
            Some(t) => {
                let b = t.bits_b();
                for i in 0..n {
                    let code = x[i * b..(i + 1) * b].iter().fold(0u32, |acc, &bit| acc << 1 | bit as u32);
                    match t.index_of(code) {
                        Some(j) => mapping.push(j),
                        None => return Ok(None),
                    }
                }
            }
        }
        Ok(Permutation::new(mapping).ok())
    }

    /// Bitstring that encodes `perm`.
    pub fn encode_permutation(&self, perm: &Permutation) -> Result<Vec<bool>> {
        if perm.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: perm.len() });
        }
        let mut x = vec![false; self.num_vars()];
        for (i, &j) in perm.mapping().iter().enumerate() {
            match &self.code_table {
                None => x[i * self.n + j] = true,
                Some(t) => {
                    for r in 0..t.bits_b() {
                        x[i * t.bits_b() + r] = t.bit(j, r);
                    }
                }
            }
        }
        Ok(x)
    }

    /// Copy with every coefficient multiplied by `factor` and rounded to an
    /// integer. Fails if any scaled coefficient is not within 1e-6 of one.
    pub fn integer_scaled(&self, factor: f64) -> Result<Formulation> {
        let mut terms = Vec::with_capacity(self.poly.num_terms());
        for (m, c) in self.poly.terms() {
            let s = c * factor;
            let r = s.round();
            if (s - r).abs() > 1e-6 {
                return Err(Error::Domain(format!("coefficient {c} * {factor} is not integral")));
            }
            terms.push((m.vars().to_vec(), r));
        }
        let poly = MultilinearPolynomial::from_terms(self.num_vars(), terms)?;
        let penalties = Penalties { row: self.penalties.row.map(|r| r * factor), col: self.penalties.col * factor };
        Ok(Formulation { poly, penalties, ..self.clone() })
    }

    pub fn to_file(&self) -> FormulationFile {
        FormulationFile {
            kind: self.kind,
            n: self.n,
            num_vars: self.num_vars(),
            terms: self.poly.terms().map(|(m, c)| TermEntry { vars: m.vars().to_vec(), coeff: c }).collect(),
            penalties: self.penalties,
            row_penalty: self.row_penalty,
            code_table: self.code_table.as_ref().map(|t| (0..t.n()).map(|j| t.code_string(j)).collect()),
        }
    }

    pub fn from_file(file: &FormulationFile) -> Result<Self> {
        let expected = file.kind.num_vars(file.n);
        if file.num_vars != expected {
            return Err(Error::Malformed(format!("{} with N = {} needs {expected} variables", file.kind, file.n)));
        }
        let code_table = match file.kind {
            FormulationKind::HuboHw => {
                let t = HwCodeTable::new(file.n)?;
                if let Some(codes) = &file.code_table {
                    let want: Vec<String> = (0..t.n()).map(|j| t.code_string(j)).collect();
                    if *codes != want {
                        return Err(Error::Malformed("code table does not match the descending-weight order".into()));
                    }
                }
                Some(t)
            }
            _ => None,
        };
        let poly = MultilinearPolynomial::from_terms(
            file.num_vars,
            file.terms.iter().map(|t| (t.vars.clone(), t.coeff)),
        )
        .map_err(|e| Error::Malformed(e.to_string()))?;
        Ok(Formulation {
            kind: file.kind,
            n: file.n,
            poly,
            penalties: file.penalties,
            row_penalty: file.row_penalty,
            code_table,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("formulation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FormulationFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_file(&file)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub vars: Vec<u32>,
    pub coeff: f64,
}

/// On-disk JSON layout of a formulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulationFile {
    pub kind: FormulationKind,
    pub n: usize,
    pub num_vars: usize,
    pub terms: Vec<TermEntry>,
    pub penalties: Penalties,
    #[serde(default)]
    pub row_penalty: HuboRowPenalty,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code_table: Option<Vec<String>>,
}

/// `<F, Y C Y^T> = sum_{i,j} Y_ij sum_k f_ik sum_l c_jl Y_kl` for an `N x N`
/// matrix of indicator polynomials.
#[allow(clippy::needless_range_loop)]
fn assignment_cost(inst: &QapInstance, y: &[Vec<MultilinearPolynomial>], nv: usize) -> Result<MultilinearPolynomial> {
    let n = inst.size();
    // w[k][j] = sum_l c_jl Y_kl
    let mut w = vec![vec![MultilinearPolynomial::zero(nv); n]; n];
    for k in 0..n {
        for j in 0..n {
            for l in 0..n {
                let c = inst.dist(j, l);
                if c != 0.0 {
                    w[k][j].add_scaled(&y[k][l], c)?;
                }
            }
        }
    }
    let mut out = MultilinearPolynomial::zero(nv);
    for i in 0..n {
        for j in 0..n {
            let mut v = MultilinearPolynomial::zero(nv);
            for k in 0..n {
                let f = inst.flow(i, k);
                if f != 0.0 {
                    v.add_scaled(&w[k][j], f)?;
                }
            }
            out.add_scaled(&y[i][j].try_mul(&v)?, 1.0)?;
        }
    }
    Ok(out)
}

/// `sum over groups of (sum_{p in group} p - 1)^2`.
fn one_hot_penalty<'a, I>(groups: I, nv: usize) -> Result<MultilinearPolynomial>
where
    I: IntoIterator<Item = Vec<&'a MultilinearPolynomial>>,
{
    let mut out = MultilinearPolynomial::zero(nv);
    for group in groups {
        let mut s = MultilinearPolynomial::constant(nv, -1.0);
        for p in group {
            s.add_scaled(p, 1.0)?;
        }
        out.add_scaled(&s.try_mul(&s)?, 1.0)?;
    }
    Ok(out)
}

fn qubo_indicators(n: usize) -> Vec<Vec<MultilinearPolynomial>> {
    let nv = n * n;
    (0..n)
        .map(|i| (0..n).map(|j| MultilinearPolynomial::variable(nv, (i * n + j) as u32).unwrap()).collect())
        .collect()
}

fn check_penalty(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Domain(format!("penalty {name} must be positive, got {v}")));
    }
    Ok(())
}

/// Row one-hot penalty `sum_i (sum_j x_ij - 1)^2` over `N^2` variables.
pub fn qubo_row_penalty(n: usize) -> MultilinearPolynomial {
    let y = qubo_indicators(n);
    one_hot_penalty((0..n).map(|i| y[i].iter().collect()), n * n).unwrap()
}

/// Column one-hot penalty `sum_j (sum_i x_ij - 1)^2` over `N^2` variables.
pub fn qubo_col_penalty(n: usize) -> MultilinearPolynomial {
    let y = qubo_indicators(n);
    one_hot_penalty((0..n).map(|j| (0..n).map(|i| &y[i][j]).collect()), n * n).unwrap()
}

/// Assignment cost `<F, X C X^T>` alone.
pub fn qubo_cost(inst: &QapInstance) -> MultilinearPolynomial {
    let n = inst.size();
    assignment_cost(inst, &qubo_indicators(n), n * n).unwrap()
}

/// QUBO with Hadamard initialization: cost plus row and column penalties.
pub fn encode_qubo(inst: &QapInstance, lambda1: f64, lambda2: f64) -> Result<Formulation> {
    check_penalty("lambda1", lambda1)?;
    check_penalty("lambda2", lambda2)?;
    let n = inst.size();
    let mut poly = qubo_cost(inst);
    poly.add_scaled(&qubo_row_penalty(n), lambda1)?;
    poly.add_scaled(&qubo_col_penalty(n), lambda2)?;
    Ok(Formulation {
        kind: FormulationKind::QuboHadamard,
        n,
        poly,
        penalties: Penalties { row: Some(lambda1), col: lambda2 },
        row_penalty: HuboRowPenalty::OneHot,
        code_table: None,
    })
}

/// QUBO with Dicke row initialization: only the column penalty is needed.
pub fn encode_qubo_dicke(inst: &QapInstance, lambda: f64) -> Result<Formulation> {
    check_penalty("lambda", lambda)?;
    let n = inst.size();
    let mut poly = qubo_cost(inst);
    poly.add_scaled(&qubo_col_penalty(n), lambda)?;
    Ok(Formulation {
        kind: FormulationKind::QuboDicke,
        n,
        poly,
        penalties: Penalties { row: None, col: lambda },
        row_penalty: HuboRowPenalty::OneHot,
        code_table: None,
    })
}

fn hubo_indicators(table: &HwCodeTable) -> Result<Vec<Vec<MultilinearPolynomial>>> {
    (0..table.n()).map(|i| (0..table.n()).map(|j| table.y_poly(i, j)).collect()).collect()
}

/// HUBO row penalty in either form.
pub fn hubo_row_penalty(table: &HwCodeTable, form: HuboRowPenalty) -> Result<MultilinearPolynomial> {
    let n = table.n();
    let nv = n * table.bits_b();
    match form {
        HuboRowPenalty::OneHot => {
            let y = hubo_indicators(table)?;
            one_hot_penalty((0..n).map(|i| y[i].iter().collect()), nv)
        }
        HuboRowPenalty::DiscardedCodes => {
            let mut out = MultilinearPolynomial::zero(nv);
            for i in 0..n {
                for j in n..1 << table.bits_b() {
                    out.add_scaled(&table.y_poly(i, j)?, 1.0)?;
                }
            }
            Ok(out)
        }
    }
}

/// HUBO column penalty `sum_j (sum_i y_ij - 1)^2`.
pub fn hubo_col_penalty(table: &HwCodeTable) -> Result<MultilinearPolynomial> {
    let n = table.n();
    let y = hubo_indicators(table)?;
    one_hot_penalty((0..n).map(|j| (0..n).map(|i| &y[i][j]).collect()), n * table.bits_b())
}

/// Assignment cost `<F, Y C Y^T>` alone.
pub fn hubo_cost(inst: &QapInstance) -> Result<MultilinearPolynomial> {
    let table = HwCodeTable::new(inst.size())?;
    assignment_cost(inst, &hubo_indicators(&table)?, inst.size() * table.bits_b())
}

/// Hamming-weight ordered HUBO with the default row penalty.
pub fn encode_hubo_hw(inst: &QapInstance, lambda1: f64, lambda2: f64) -> Result<Formulation> {
    encode_hubo_hw_with(inst, lambda1, lambda2, HuboRowPenalty::OneHot)
}

pub fn encode_hubo_hw_with(
    inst: &QapInstance,
    lambda1: f64,
    lambda2: f64,
    row_penalty: HuboRowPenalty,
) -> Result<Formulation> {
    check_penalty("lambda1'", lambda1)?;
    check_penalty("lambda2'", lambda2)?;
    let n = inst.size();
    let table = HwCodeTable::new(n)?;
    let mut poly = hubo_cost(inst)?;
    poly.add_scaled(&hubo_row_penalty(&table, row_penalty)?, lambda1)?;
    poly.add_scaled(&hubo_col_penalty(&table)?, lambda2)?;
    Ok(Formulation {
        kind: FormulationKind::HuboHw,
        n,
        poly,
        penalties: Penalties { row: Some(lambda1), col: lambda2 },
        row_penalty,
        code_table: Some(table),
    })
}

/// Encode with explicit penalties. `penalties.row` is ignored for the Dicke
/// formulation and required otherwise.
pub fn encode(inst: &QapInstance, kind: FormulationKind, penalties: Penalties) -> Result<Formulation> {
    let row = || penalties.row.ok_or_else(|| Error::Domain(format!("{kind} needs a row penalty")));
    match kind {
        FormulationKind::QuboHadamard => encode_qubo(inst, row()?, penalties.col),
        FormulationKind::QuboDicke => encode_qubo_dicke(inst, penalties.col),
        FormulationKind::HuboHw => encode_hubo_hw(inst, row()?, penalties.col),
    }
}

/// Encode with the default penalties.
pub fn encode_default(inst: &QapInstance, kind: FormulationKind) -> Result<Formulation> {
    encode(inst, kind, Penalties::default_for(kind, inst.size()))
}

/// Search-space sizes `(N^N, 2^(N ceil(log2 N)), 2^(N^2))`.
pub fn feasible_space_sizes(n: usize) -> Result<(BigUint, BigUint, BigUint)> {
    if n < 2 {
        return Err(Error::Domain(format!("N must be >= 2, got {n}")));
    }
    let dicke = BigUint::from(n).pow(n as u32);
    let hubo = BigUint::from(1u8) << (n * code_bits(n));
    let qubo = BigUint::from(1u8) << (n * n);
    debug_assert!(dicke <= hubo && hubo < qubo);
    Ok((dicke, hubo, qubo))
}
