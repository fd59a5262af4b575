//! Multilinear polynomials over binary variables.
//!
//! Every product is reduced with `x * x = x`, so a polynomial is a sparse map
//! from variable sets to real coefficients. This is the common representation
//! of all three QAP objectives.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients with magnitude below this are treated as cancelled.
pub const ZERO_TOL: f64 = 1e-12;

/// Strictly increasing set of variable indices. The empty monomial is the
/// constant term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Self(vec![v])
    }

    /// Sorts and deduplicates, which is exactly the `x^2 = x` reduction.
    pub fn from_vars(mut vars: Vec<u32>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        Self(vars)
    }

    pub fn vars(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    /// Union of two variable sets (product of the monomials).
    pub fn product(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn is_satisfied_by(&self, x: &[bool]) -> bool {
        self.0.iter().all(|&v| x[v as usize])
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for v in &self.0 {
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultilinearPolynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl MultilinearPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        Self { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: f64) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn variable(num_vars: usize, v: u32) -> Result<Self> {
        if v as usize >= num_vars {
            return Err(Error::Index(format!("variable {v} >= num_vars {num_vars}")));
        }
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::var(v), 1.0);
        Ok(p)
    }

    /// Build from raw `(vars, coeff)` pairs, reducing and combining.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Self::zero(num_vars);
        for (vars, c) in terms {
            if let Some(&v) = vars.iter().find(|&&v| v as usize >= num_vars) {
                return Err(Error::Index(format!("variable {v} >= num_vars {num_vars}")));
            }
            p.add_term(Monomial::from_vars(vars), c);
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coefficient(&Monomial::one())
    }

    /// Number of terms of each degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for m in self.terms.keys() {
            *h.entry(m.degree()).or_insert(0) += 1;
        }
        h
    }

    /// Sum of absolute coefficients; bounds `|E(x)|` for every `x`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: f64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().abs() < ZERO_TOL {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if c.abs() >= ZERO_TOL {
                    e.insert(c);
                }
            }
        }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::Dimension { expected: self.num_vars, got: other.num_vars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let mut out = Self::zero(self.num_vars);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.product(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (m, v) in self.terms() {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// `self += c * other`, in place.
    pub fn add_scaled(&mut self, other: &Self, c: f64) -> Result<()> {
        self.same_space(other)?;
        for (m, v) in other.terms() {
            self.add_term(m.clone(), v * c);
        }
        Ok(())
    }

    /// Re-reduce every stored monomial. A no-op on any value this type
    /// produces; exposed so tests can check the normal form is stable.
    pub fn renormalized(&self) -> Self {
        let raw = self.terms().map(|(m, c)| (m.vars().to_vec(), c));
        Self::from_terms(self.num_vars, raw).expect("stored indices are in range")
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<f64> {
        if x.len() != self.num_vars {
            return Err(Error::Dimension { expected: self.num_vars, got: x.len() });
        }
        Ok(self.terms().filter(|(m, _)| m.is_satisfied_by(x)).map(|(_, c)| c).sum())
    }

    /// Bitmask form for fast evaluation; `None` above 64 variables.
    pub fn compile(&self) -> Option<CompiledPoly> {
        CompiledPoly::new(self)
    }
}

impl Add for &MultilinearPolynomial {
    type Output = MultilinearPolynomial;
    fn add(self, rhs: Self) -> MultilinearPolynomial {
        self.try_add(rhs).expect("polynomials over different variable counts")
    }
}

impl Sub for &MultilinearPolynomial {
    type Output = MultilinearPolynomial;
    fn sub(self, rhs: Self) -> MultilinearPolynomial {
        self.try_add(&rhs.scale(-1.0)).expect("polynomials over different variable counts")
    }
}

impl Mul for &MultilinearPolynomial {
    type Output = MultilinearPolynomial;
    fn mul(self, rhs: Self) -> MultilinearPolynomial {
        self.try_mul(rhs).expect("polynomials over different variable counts")
    }
}

impl Neg for &MultilinearPolynomial {
    type Output = MultilinearPolynomial;
    fn neg(self) -> MultilinearPolynomial {
        self.scale(-1.0)
    }
}

impl fmt::Display for MultilinearPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            if m.is_constant() {
                write!(f, "{}", c.abs())?;
            } else if (c.abs() - 1.0).abs() < ZERO_TOL {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}{m}", c.abs())?;
            }
        }
        Ok(())
    }
}

/// Polynomial with monomials packed into `u64` masks.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    num_vars: usize,
    constant: f64,
    terms: Vec<(u64, f64)>,
}

impl CompiledPoly {
    pub fn new(p: &MultilinearPolynomial) -> Option<Self> {
        if p.num_vars() > 64 {
            return None;
        }
        let mut constant = 0.0;
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            if m.is_constant() {
                constant = c;
            } else {
                terms.push((m.vars().iter().fold(0u64, |acc, &v| acc | 1 << v), c));
            }
        }
        Some(Self { num_vars: p.num_vars(), constant, terms })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[(u64, f64)] {
        &self.terms
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    #[inline]
    pub fn eval(&self, x: u64) -> f64 {
        let mut acc = self.constant;
        for &(mask, c) in &self.terms {
            if x & mask == mask {
                acc += c;
            }
        }
        acc
    }

    /// Calls `f(x, E(x))` for every `x` in `{0,1}^n`, visiting states in
    /// Gray-code order with incremental updates. Values are recomputed from
    /// scratch every 4096 steps to bound floating-point drift.
    pub fn for_each_state<F: FnMut(u64, f64)>(&self, mut f: F) {
        let n = self.num_vars;
        assert!(n < 64, "state enumeration limited to < 64 variables");
        // Terms touching each variable, stored with that variable removed.
        let mut touching: Vec<Vec<(u64, f64)>> = vec![Vec::new(); n];
        for &(mask, c) in &self.terms {
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                touching[v].push((mask & !(1 << v), c));
            }
        }
        let mut x = 0u64;
        let mut value = self.constant;
        f(x, value);
        let total = 1u64 << n;
        for g in 1..total {
            let v = g.trailing_zeros() as usize;
            let bit = 1u64 << v;
            let mut delta = 0.0;
            for &(others, c) in &touching[v] {
                if x & others == others {
                    delta += c;
                }
            }
            x ^= bit;
            if x & bit != 0 {
                value += delta;
            } else {
                value -= delta;
            }
            if g & 0xfff == 0 {
                value = self.eval(x);
            }
            f(x, value);
        }
    }
}

/// Decode a little-endian bitmask into `n` booleans.
pub fn mask_to_bits(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

pub fn bits_to_mask(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as u64) << i)
}
