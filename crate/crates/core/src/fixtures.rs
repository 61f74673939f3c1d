//! Stock connections used by the gallery and the test suites.

use crate::projective::AffineConnection;
use crate::symcore::{parse_field, Rsf};

fn build(n: usize, entries: &[(usize, usize, usize, &str)]) -> AffineConnection {
    let e: Vec<(usize, usize, usize, Rsf)> =
        entries.iter().map(|(a, c, b, s)| (*a, *c, *b, parse_field(s, n).expect("fixture literal"))).collect();
    AffineConnection::from_entries(n, &e, Rsf::one()).expect("fixture connection")
}

pub fn flat(n: usize) -> AffineConnection {
    AffineConnection::flat(n)
}

/// `n = 2`, only `Gamma_11^2 = x2`; Ricci tensor `dx1 dx1`.
pub fn e2() -> AffineConnection {
    build(2, &[(0, 1, 0, "x2")])
}

/// `n = 3`, only `Gamma_11^2 = x3`; Ricci-flat but not flat.
pub fn e3() -> AffineConnection {
    build(3, &[(0, 1, 0, "x3")])
}

/// `n = 2`, only `Gamma_11^2 = x2^2`; nonzero Cotton tensor.
pub fn cotton_n2() -> AffineConnection {
    build(2, &[(0, 1, 0, "x2^2")])
}

/// `n = 3`, only `Gamma_11^2 = x2*x3`; nonzero Weyl, Schouten and Cotton tensors.
pub fn curved_n3() -> AffineConnection {
    build(3, &[(0, 1, 0, "x2*x3")])
}

/// `n = 2`, only `Gamma_11^1 = x2`; not special for the coordinate volume.
pub fn nonspecial_n2() -> AffineConnection {
    build(2, &[(0, 0, 0, "x2")])
}
