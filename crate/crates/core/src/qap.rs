//! Koopmans-Beckmann quadratic assignment problem instances.
//!
//! An instance is a pair of `N x N` matrices: the flow `F` between facilities
//! and the distance `C` between locations, both normalized to `[0, 1]`. A
//! solution is a permutation `phi` assigning facility `i` to location
//! `phi(i)`; its cost is `sum_ij f_ij * c_{phi(i) phi(j)}`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest size accepted by [`brute_force_optimum`] (10! evaluations).
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// A bijection on `{0, .., N-1}`; `mapping[i]` is the location of facility `i`.
///
/// Indices are 0-based internally. Display and the text formats use the
/// 1-based convention common in the QAP literature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::Domain(format!(
                    "mapping {mapping:?} is not a bijection on 0..{n}"
                )));
            }
            seen[m] = true;
        }
        Ok(Self(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_one_based(mapping: &[usize]) -> Result<Self> {
        if mapping.contains(&0) {
            return Err(Error::Domain("1-based mapping contains 0".into()));
        }
        Self::new(mapping.iter().map(|&m| m - 1).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&m| m + 1).collect()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Advance to the next permutation in lexicographic order. Returns false
    /// (leaving `self` unchanged) when already at the last one.
    pub fn next_lexicographic(&mut self) -> bool {
        let v = &mut self.0;
        if v.len() < 2 {
            return false;
        }
        let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
            return false;
        };
        let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).unwrap();
        v.swap(i, j);
        v[i + 1..].reverse();
        true
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", m + 1)?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QapInstance {
    name: String,
    n: usize,
    /// Row-major `F`.
    flow: Vec<f64>,
    /// Row-major `C`.
    dist: Vec<f64>,
}

impl QapInstance {
    /// Build from row-major matrices. Both must be `n x n` with `n >= 2` and
    /// every entry finite and within `[0, 1]`.
    pub fn new(name: impl Into<String>, n: usize, flow: Vec<f64>, dist: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("instance size must be >= 2, got {n}")));
        }
        for m in [&flow, &dist] {
            if m.len() != n * n {
                return Err(Error::Dimension { expected: n * n, got: m.len() });
            }
            if let Some(bad) = m.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
                return Err(Error::Domain(format!("coefficient {bad} outside [0, 1]")));
            }
        }
        Ok(Self { name: name.into(), n, flow, dist })
    }

    pub fn from_rows(name: impl Into<String>, flow: &[Vec<f64>], dist: &[Vec<f64>]) -> Result<Self> {
        let n = flow.len();
        for row in flow.iter().chain(dist) {
            if row.len() != n {
                return Err(Error::Dimension { expected: n, got: row.len() });
            }
        }
        if dist.len() != n {
            return Err(Error::Dimension { expected: n, got: dist.len() });
        }
        Self::new(name, n, flow.concat(), dist.concat())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn flow(&self, i: usize, j: usize) -> f64 {
        self.flow[i * self.n + j]
    }

    #[inline]
    pub fn dist(&self, k: usize, l: usize) -> f64 {
        self.dist[k * self.n + l]
    }

    pub fn flow_matrix(&self) -> &[f64] {
        &self.flow
    }

    pub fn dist_matrix(&self) -> &[f64] {
        &self.dist
    }

    fn check(&self, perm: &Permutation) -> Result<()> {
        if perm.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: perm.len() });
        }
        Ok(())
    }

    /// `sum_ij f_ij * c_{phi(i) phi(j)}`.
    pub fn objective(&self, perm: &Permutation) -> Result<f64> {
        self.check(perm)?;
        let p = perm.mapping();
        let mut total = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                total += self.flow(i, j) * self.dist(p[i], p[j]);
            }
        }
        Ok(total)
    }

    /// `<F, P C P^T>` with an explicit permutation matrix `P`.
    pub fn objective_matrix_form(&self, perm: &Permutation) -> Result<f64> {
        self.check(perm)?;
        let n = self.n;
        let mut pm = vec![0.0; n * n];
        for (i, &j) in perm.mapping().iter().enumerate() {
            pm[i * n + j] = 1.0;
        }
        let matmul = |a: &[f64], b: &[f64]| {
            let mut out = vec![0.0; n * n];
            for i in 0..n {
                for k in 0..n {
                    let aik = a[i * n + k];
                    if aik != 0.0 {
                        for j in 0..n {
                            out[i * n + j] += aik * b[k * n + j];
                        }
                    }
                }
            }
            out
        };
        let mut pt = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                pt[j * n + i] = pm[i * n + j];
            }
        }
        let pcpt = matmul(&matmul(&pm, &self.dist), &pt);
        Ok(self.flow.iter().zip(&pcpt).map(|(a, b)| a * b).sum())
    }

    /// Serialize in the QAPLIB `.dat` layout: `N`, blank line, `F` rows,
    /// blank line, `C` rows.
    pub fn to_qaplib(&self) -> String {
        let mut out = format!("{}\n\n", self.n);
        for (k, m) in [&self.flow, &self.dist].into_iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            for row in m.chunks(self.n) {
                let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Exhaustive minimum over all `N!` permutations.
///
/// Ties are resolved toward the lexicographically smallest mapping, since the
/// scan visits permutations in lexicographic order and only replaces the
/// incumbent on a strict improvement.
pub fn brute_force_optimum(inst: &QapInstance) -> Result<(Permutation, f64)> {
    let n = inst.size();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::OracleScale { n, max: BRUTE_FORCE_MAX_N });
    }
    let mut perm = Permutation::identity(n);
    let mut best = (perm.clone(), inst.objective(&perm)?);
    while perm.next_lexicographic() {
        let v = inst.objective(&perm)?;
        if v < best.1 - 1e-12 {
            best = (perm.clone(), v);
        }
    }
    Ok(best)
}

/// Parse a QAPLIB-style `.dat` stream: `N`, then `F` and `C` row-major, all
/// whitespace separated. Each matrix is divided by its maximum entry so the
/// coefficients land in `[0, 1]`; an all-zero matrix is left unchanged.
pub fn parse_qaplib(text: &str) -> Result<QapInstance> {
    parse_qaplib_named(text, "qaplib")
}

pub fn parse_qaplib_named(text: &str, name: &str) -> Result<QapInstance> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let first = tokens.first().ok_or(Error::Parse {
        position: 0,
        message: "empty input".into(),
    })?;
    let n: usize = first.parse().map_err(|_| Error::Parse {
        position: 0,
        message: format!("expected problem size, found {first:?}"),
    })?;
    if n < 2 {
        return Err(Error::Parse { position: 0, message: format!("problem size {n} < 2") });
    }
    let expected = 1 + 2 * n * n;
    if tokens.len() != expected {
        return Err(Error::Parse {
            position: tokens.len().min(expected),
            message: format!("expected {expected} tokens for N = {n}, found {}", tokens.len()),
        });
    }
    let mut values = Vec::with_capacity(2 * n * n);
    for (k, tok) in tokens.iter().enumerate().skip(1) {
        let v: f64 = tok.parse().map_err(|_| Error::Parse {
            position: k,
            message: format!("non-numeric token {tok:?}"),
        })?;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::Parse {
                position: k,
                message: format!("coefficient {tok:?} must be finite and non-negative"),
            });
        }
        values.push(v);
    }
    let dist = values.split_off(n * n);
    let normalize = |mut m: Vec<f64>| {
        let max = m.iter().cloned().fold(0.0, f64::max);
        if max > 0.0 {
            m.iter_mut().for_each(|v| *v /= max);
        }
        m
    };
    QapInstance::new(name, n, normalize(values), normalize(dist))
}

/// Seeded instance with symmetric, zero-diagonal `F` and `C` whose
/// off-diagonal entries are i.i.d. uniform on `{0.0, 0.1, .., 1.0}`.
pub fn random_instance(n: usize, seed: u64) -> Result<QapInstance> {
    if n < 2 {
        return Err(Error::Domain(format!("instance size must be >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sym = || {
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.random_range(0..=10u32) as f64 / 10.0;
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
        m
    };
    let flow = sym();
    let dist = sym();
    QapInstance::new(format!("rand-n{n}-s{seed}"), n, flow, dist)
}

/// Dense asymmetric instance with continuous entries in `[0.05, 1)` on and off
/// the diagonal. With probability one no two contributions to an expanded
/// monomial cancel, so term and gate counts on it are the structural maxima.
pub fn generic_instance(n: usize, seed: u64) -> Result<QapInstance> {
    if n < 2 {
        return Err(Error::Domain(format!("instance size must be >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut dense = || (0..n * n).map(|_| rng.random_range(0.05..1.0)).collect::<Vec<f64>>();
    let flow = dense();
    let dist = dense();
    QapInstance::new(format!("generic-n{n}-s{seed}"), n, flow, dist)
}
