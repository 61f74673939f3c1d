//! Bounded-degree polynomial solutions of linear tensor equations.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::field::Rsf;
use super::linalg::nullspace;
use super::poly::{gcd, Mono, Poly, Var, Q};
use super::tensor::{Base, Slot, TensorField};
use crate::error::Result;
use crate::par;

/// Monomials in `vars` of total degree at most `degree`, in a fixed order.
pub fn monomials(vars: &[Var], degree: u32) -> Vec<Mono> {
    fn rec(vars: &[Var], left: u32, cur: Mono, out: &mut Vec<Mono>) {
        let Some((v, rest)) = vars.split_first() else {
            out.push(cur);
            return;
        };
        for e in 0..=left {
            let mut m = cur;
            m.0[v.slot()] += e as u16;
            rec(rest, left - e, m, out);
        }
    }
    let mut out = Vec::new();
    rec(vars, degree, Mono::one(), &mut out);
    out.sort();
    out
}

/// Shape of the unknown tensor.
#[derive(Clone, Debug)]
pub struct AnsatzShape {
    pub base: Base,
    pub slots: Vec<Slot>,
    pub pweight: i32,
    pub cweight: i32,
    /// Rank-2 unknowns constrained to `t[b][a] = -t[a][b]`.
    pub antisymmetric: bool,
}

impl AnsatzShape {
    fn free_indices(&self) -> Vec<Vec<usize>> {
        let probe = TensorField::zeros(self.base, self.slots.clone());
        (0..probe.len())
            .map(|o| probe.multi_index(o))
            .filter(|i| !self.antisymmetric || i[0] < i[1])
            .collect()
    }

    fn element(&self, idx: &[usize], m: &Mono) -> TensorField {
        let mut t = TensorField::zeros(self.base, self.slots.clone()).with_weights(self.pweight, self.cweight);
        let f = Rsf::from_poly(Poly::monomial(*m, Q::from_integer(1.into())));
        if self.antisymmetric {
            t.set(&[idx[1], idx[0]], -&f);
        }
        t.set(idx, f);
        t
    }
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a == b || b.is_one() {
        return a.clone();
    }
    if a.is_one() {
        return b.clone();
    }
    a.mul(b).exact_div(&gcd(a, b)).expect("gcd divides product").monic()
}

/// Every tensor of the given shape with polynomial components of degree at
/// most `degree` in `vars` that the linear map `residual` sends to zero.
/// Returns a basis of the solution space.
pub fn solve_linear<F>(shape: &AnsatzShape, vars: &[Var], degree: u32, residual: F) -> Result<Vec<TensorField>>
where
    F: Fn(&TensorField) -> Result<Vec<TensorField>> + Sync + Send,
{
    let monos = monomials(vars, degree);
    let cells: Vec<(Vec<usize>, Mono)> = shape
        .free_indices()
        .into_iter()
        .flat_map(|i| monos.iter().map(move |m| (i.clone(), *m)))
        .collect();
    let images: Vec<Result<Vec<Rsf>>> = par::map_range(cells.len(), |k| {
        let (idx, m) = &cells[k];
        let parts = residual(&shape.element(idx, m))?;
        Ok(parts.iter().flat_map(|t| t.components().iter().cloned()).collect())
    });
    let images: Vec<Vec<Rsf>> = images.into_iter().collect::<Result<_>>()?;
    let ncols = cells.len();
    let nres = images.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for r in 0..nres {
        let den = images.iter().fold(Poly::one(), |acc, im| lcm(&acc, im[r].denom()));
        let mut by_mono: BTreeMap<Mono, Vec<Q>> = BTreeMap::new();
        for (col, im) in images.iter().enumerate() {
            let f = &im[r];
            if f.is_zero() {
                continue;
            }
            let scaled = f.numer().mul(&den.exact_div(f.denom()).expect("lcm multiple"));
            for (m, c) in scaled.terms() {
                by_mono.entry(*m).or_insert_with(|| vec![Q::zero(); ncols])[col] += c;
            }
        }
        rows.extend(by_mono.into_values());
    }
    let kernel = nullspace(rows, ncols);
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut t = TensorField::zeros(shape.base, shape.slots.clone()).with_weights(shape.pweight, shape.cweight);
            for (c, (idx, m)) in v.iter().zip(&cells) {
                if c.is_zero() {
                    continue;
                }
                let term = Rsf::from_poly(Poly::monomial(*m, c.clone()));
                t.set(idx, t.get(idx) + &term);
                if shape.antisymmetric {
                    let tr = [idx[1], idx[0]];
                    t.set(&tr, t.get(&tr) - &term);
                }
            }
            t
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_count() {
        let v = [Var::X(1), Var::X(2)];
        assert_eq!(monomials(&v, 2).len(), 6);
    }

    #[test]
    fn affine_functions_of_one_variable() {
        // f'' = 0 in x1
        let shape = AnsatzShape { base: Base::M, slots: vec![], pweight: 0, cweight: 0, antisymmetric: false };
        let sols = solve_linear(&shape, &[Var::X(1)], 3, |t| {
            Ok(vec![TensorField::scalar(Base::M, t.value().partial(Var::X(1)).partial(Var::X(1)))])
        })
        .unwrap();
        assert_eq!(sols.len(), 2);
    }
}
