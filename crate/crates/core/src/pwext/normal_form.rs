use std::fmt;

use super::geometry::{build, PWGeometry};
use crate::error::{Error, Result};
use crate::projective::{self, pvar, AffineConnection};
use crate::symcore::{Base, Rsf, Slot, TensorField};

/// Walker metric `2 dx.dp - 2 Theta_AB dx^A.dx^B` with `V = span(d/dp)`,
/// given by its symmetric `Theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkerNormalForm {
    n: usize,
    theta: TensorField,
}

impl WalkerNormalForm {
    pub fn new(n: usize, theta: TensorField) -> Result<WalkerNormalForm> {
        if theta.slots() != [Slot::down(n), Slot::down(n)] {
            return Err(Error::Shape("Theta must be a rank-2 covariant tensor".into()));
        }
        for a in 0..n {
            for b in 0..a {
                if theta.get(&[a, b]) != theta.get(&[b, a]) {
                    return Err(Error::Shape(format!("Theta not symmetric at [{},{}]", b + 1, a + 1)));
                }
            }
        }
        Ok(WalkerNormalForm { n, theta: theta.with_weights(0, 0) })
    }

    pub fn from_geometry(pw: &PWGeometry) -> WalkerNormalForm {
        WalkerNormalForm { n: pw.n(), theta: pw.theta().clone() }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn theta(&self) -> &TensorField {
        &self.theta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkerCondition {
    /// `Theta` at most linear in `p`.
    Linearity,
    /// `p_C dTheta/dp_C = Theta`.
    Homogeneity,
    /// `dTheta_BA/dp_B = 0`.
    Trace,
}

impl fmt::Display for WalkerCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkerCondition::Linearity => "linearity",
            WalkerCondition::Homogeneity => "homogeneity",
            WalkerCondition::Trace => "trace",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Recovery {
    Connection(AffineConnection),
    Rejected { condition: WalkerCondition, detail: String },
}

/// Reads a special connection off a Walker normal form, or names the first
/// condition that fails (checked in the order linearity, homogeneity, trace).
pub fn recover_connection(nf: &WalkerNormalForm) -> Result<Recovery> {
    let n = nf.n;
    let th = &nf.theta;
    for (k, f) in th.components().iter().enumerate() {
        if !f.is_zero() && f.max_p_degree().is_err() {
            return Err(Error::NotPolynomialInP(format!("Theta component {k}: {f}")));
        }
    }
    let reject = |condition, detail: String| Ok(Recovery::Rejected { condition, detail });
    for a in 0..n {
        for b in 0..n {
            let f = th.get(&[a, b]);
            for c in 0..n {
                for e in 0..n {
                    let dd = f.partial(pvar(c)).partial(pvar(e));
                    if !dd.is_zero() {
                        return reject(
                            WalkerCondition::Linearity,
                            format!("d2 Theta_{}{}/dp_{} dp_{} = {dd}", a + 1, b + 1, c + 1, e + 1),
                        );
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let f = th.get(&[a, b]);
            let euler: Rsf = (0..n).map(|c| Rsf::p(c + 1) * f.partial(pvar(c))).sum();
            let defect = euler - f;
            if !defect.is_zero() {
                return reject(WalkerCondition::Homogeneity, format!("p.dTheta_{}{} - Theta_{}{} = {defect}", a + 1, b + 1, a + 1, b + 1));
            }
        }
    }
    for a in 0..n {
        let tr: Rsf = (0..n).map(|b| th.get(&[b, a]).partial(pvar(b))).sum();
        if !tr.is_zero() {
            return reject(WalkerCondition::Trace, format!("dTheta_B{}/dp_B = {tr}", a + 1));
        }
    }
    let gamma = TensorField::from_fn(Base::M, vec![Slot::down(n), Slot::up(n), Slot::down(n)], |i| {
        th.get(&[i[0], i[2]]).partial(pvar(i[1]))
    });
    Ok(Recovery::Connection(AffineConnection::new(n, gamma, Rsf::one())?))
}

/// Metric built from the Thomas projective parameters of `D` in the chart.
pub fn thomas_pw(d: &AffineConnection) -> Result<PWGeometry> {
    let pi = projective::thomas_parameters(d);
    let special = AffineConnection::new(d.n(), pi, Rsf::one())?;
    build(&special)
}
