use super::geometry::{coord_var, PWGeometry};
use crate::error::Result;
use crate::symcore::{q, Base, Rsf, Slot, TensorField};

/// `k = 2 p_A d/dp_A` in coordinates.
pub fn k_vector(pw: &PWGeometry) -> TensorField {
    let n = pw.n();
    TensorField::from_fn(Base::Mt, vec![Slot::up_t(n)], |i| if i[0] < n { Rsf::zero() } else { Rsf::p(i[0] - n + 1).scale(&q(2, 1)) })
}

/// `k_a = 2 p_A dx^A`, twice the tautological 1-form.
pub fn k_form(pw: &PWGeometry) -> TensorField {
    pw.lower(&k_vector(pw), 0).expect("upper slot")
}

/// `mu_ab = D_[a k_b] = (d_a k_b - d_b k_a)/2`, i.e. `2 dp_A ^ dx^A`.
pub fn mu(pw: &PWGeometry) -> TensorField {
    let n = pw.n();
    let k = k_form(pw);
    TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
        let (a, b) = (i[0], i[1]);
        (k.get(&[b]).partial(coord_var(n, a)) - k.get(&[a]).partial(coord_var(n, b))).scale(&q(1, 2))
    })
}

/// `L_X g` in coordinates.
pub fn lie_derivative_metric(pw: &PWGeometry, x: &TensorField) -> TensorField {
    let n = pw.n();
    let dim = pw.dim();
    let g = pw.metric();
    TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
        let (a, b) = (i[0], i[1]);
        let mut acc = Rsf::zero();
        for c in 0..dim {
            let xc = x.get(&[c]);
            if !xc.is_zero() {
                acc = acc + xc * g.get(&[a, b]).partial(coord_var(n, c));
            }
            acc = acc
                + g.get(&[c, b]) * x.get(&[c]).partial(coord_var(n, a))
                + g.get(&[a, c]) * x.get(&[c]).partial(coord_var(n, b));
        }
        acc
    })
}

#[derive(Clone, Debug)]
pub struct KReport {
    /// `L_k g - 2 g`.
    pub homothety: TensorField,
    /// `D_a k_b - mu_ab - g_ab`.
    pub conformal_killing: TensorField,
    /// `g(k, k)`.
    pub norm: Rsf,
    /// Frame components of `mu` as an endomorphism minus `+1` on `H`, `-1` on `V`.
    pub eigen_defect: TensorField,
}

impl KReport {
    pub fn all_zero(&self) -> bool {
        self.homothety.is_zero() && self.conformal_killing.is_zero() && self.norm.is_zero() && self.eigen_defect.is_zero()
    }
}

/// The endomorphism `X -> mu(X)` with `g(Y, mu X) = mu(Y, X)`, in frame
/// components `[a][b]`: `mu(e_a) = sum_b m[a][b] e_b`.
pub fn mu_endomorphism(pw: &PWGeometry) -> Result<TensorField> {
    let n = pw.n();
    let dim = pw.dim();
    let mf = pw.to_frame(&mu(pw))?;
    // raise the first slot with the constant frame metric
    Ok(TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
        let (a, b) = (i[0], i[1]);
        (0..dim)
            .filter(|&c| pw.frame_metric(b, c) != 0)
            .map(|c| mf.get(&[c, a]).clone())
            .sum()
    }))
}

pub fn k_properties(pw: &PWGeometry) -> Result<KReport> {
    let n = pw.n();
    let k = k_vector(pw);
    let homothety = lie_derivative_metric(pw, &k).sub(&pw.metric().scale(&Rsf::int(2)))?;
    let dk = pw.covariant_derivative(&k_form(pw))?;
    let conformal_killing = dk.sub(&mu(pw))?.sub(pw.metric())?;
    let kf = k_form(pw);
    let norm = (0..pw.dim()).map(|i| kf.get(&[i]) * k.get(&[i])).sum();
    let end = mu_endomorphism(pw)?;
    let eigen_defect = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
        let expect = match (i[0] == i[1], i[0] < n) {
            (false, _) => 0,
            (true, true) => 1,
            (true, false) => -1,
        };
        end.get(i) - Rsf::int(expect)
    });
    Ok(KReport { homothety, conformal_killing, norm, eigen_defect })
}
