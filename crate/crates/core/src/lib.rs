//! Quadratic assignment problems as binary optimization: QUBO and HUBO
//! encodings, Grover adaptive search circuits, a statevector simulator, an
//! analytical search emulator, and closed-form resource counts.

pub mod analysis;
pub mod circuit;
pub mod encoding;
pub mod error;
pub mod gas;
pub mod poly;
pub mod qap;
pub mod sim;

pub use encoding::{
    encode, encode_default, encode_hubo_hw, encode_hubo_hw_with, encode_qubo, encode_qubo_dicke,
    feasible_space_sizes, y_ij_poly, FeasibleSpace, Formulation, FormulationKind, HuboRowPenalty, HwCodeTable,
    Penalties,
};
pub use error::{Error, Result};
pub use poly::{CompiledPoly, Monomial, MultilinearPolynomial};
pub use qap::{brute_force_optimum, parse_qaplib, random_instance, Permutation, QapInstance};
