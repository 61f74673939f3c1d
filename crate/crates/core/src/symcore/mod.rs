//! Exact scalar fields and indexed tensors over Q.

pub mod ansatz;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod tensor;

pub use field::Rsf;
pub use parse::parse_field;
pub use poly::{gcd, q, qi, Mono, Poly, Var, MAX_DIM, Q};
pub use tensor::{Base, Parity, Slot, Space, SymmetryDecl, TensorField};
