use super::geometry::{coord_var, metric_from_theta};
use crate::error::{Error, Result};
use crate::projective::{self, AffineConnection};
use crate::symcore::{Base, Rsf, Slot, TensorField, Var};

#[derive(Clone, Debug)]
pub struct CovarianceReport {
    pub weight: i32,
    /// `g^ - s^w (g + 2(w-2) p ups dx.dx)` in the original coordinates.
    pub difference: TensorField,
    /// Whether `g^ = s^2 g` exactly.
    pub equals_s2_g: bool,
    /// Whether `g^ = s^2 g` is expected: `w = 2`, or the scale is constant
    /// with `s^w = s^2`.
    pub expected_s2_g: bool,
}

impl CovarianceReport {
    pub fn holds(&self) -> bool {
        self.difference.is_zero() && self.equals_s2_g == self.expected_s2_g
    }
}

fn check_scale(s: &Rsf) -> Result<()> {
    if s.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if s.depends_on_fibre() {
        return Err(Error::Precondition("scale must be a function on M".into()));
    }
    let mut at_origin = s.clone();
    for k in 1..=crate::symcore::MAX_DIM {
        at_origin = at_origin.substitute(Var::X(k as u8), &Rsf::zero());
    }
    if at_origin.is_zero() {
        return Err(Error::Precondition(format!("scale {s} vanishes at the chart origin")));
    }
    Ok(())
}

/// Pull back a `T*M` metric along `(x, p) -> (x, s^w p)`.
fn pull_back_fibre_scaling(n: usize, ghat: &TensorField, sw: &Rsf) -> TensorField {
    let dim = 2 * n;
    let images: Vec<Rsf> = (0..n).map(|a| sw * Rsf::p(a + 1)).collect();
    let subst = |f: &Rsf| {
        let mut out = f.clone();
        for (a, im) in images.iter().enumerate() {
            out = out.substitute(Var::P(a as u8 + 1), im);
        }
        out
    };
    // jac[k][i] = d(new coordinate k)/d(old coordinate i)
    let jac: Vec<Vec<Rsf>> = (0..dim)
        .map(|k| {
            let f = if k < n { Rsf::x(k + 1) } else { images[k - n].clone() };
            (0..dim).map(|i| f.partial(coord_var(n, i))).collect()
        })
        .collect();
    let g = ghat.map(subst);
    TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |idx| {
        let (i, j) = (idx[0], idx[1]);
        let mut acc = Rsf::zero();
        for k in 0..dim {
            if jac[k][i].is_zero() {
                continue;
            }
            for l in 0..dim {
                if !jac[l][j].is_zero() {
                    acc = acc + &jac[k][i] * &jac[l][j] * g.get(&[k, l]);
                }
            }
        }
        acc
    })
}

/// Builds the metric of the projectively changed connection `D + ds/s` in
/// fibre coordinates `p^ = s^w p`, pulls it back, and compares with the
/// rescaled original metric.
pub fn conformal_covariance_check(d: &AffineConnection, s: &Rsf, w: i32) -> Result<CovarianceReport> {
    check_scale(s)?;
    let n = d.n();
    let ups = projective::log_gradient(n, s)?;
    let dhat = projective::projective_change(d, &ups)?;
    let g = metric_from_theta(n, &super::geometry::connection_theta(d));
    let ghat = metric_from_theta(n, &super::geometry::connection_theta(&dhat));
    let sw = s.pow(w);
    let pulled = pull_back_fibre_scaling(n, &ghat, &sw);
    let expected = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
        let (a, b) = (i[0], i[1]);
        let mut v = g.get(i).clone();
        if a < n && b < n {
            let c = Rsf::int(w as i64 - 2);
            v = v + c * (Rsf::p(a + 1) * ups.get(&[b]) + Rsf::p(b + 1) * ups.get(&[a]));
        }
        &sw * v
    });
    let difference = pulled.sub(&expected)?;
    let equals_s2_g = pulled == g.scale(&s.pow(2));
    let expected_s2_g = w == 2 || (ups.is_zero() && sw == s.pow(2));
    Ok(CovarianceReport { weight: w, difference, equals_s2_g, expected_s2_g })
}
