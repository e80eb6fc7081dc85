//! Differential operators as the enveloping algebra of the tangent
//! algebroid, symmetric tensors, their comultiplications, the
//! symmetrization map and the duality pairing with fiber polynomials.

mod combination;
mod coproduct;
pub(crate) mod operators;
mod pairing;
pub mod words;

pub use combination::{DiffOp, Env, Sym, SymTensor, WordKind, WordSum};
pub use coproduct::{comult, comult_env, comult_sym, comult_word, counit_right, TensorSquare};
pub use operators::sym_fields;
pub use pairing::{basis_pairing, matching_sign, pairing};
