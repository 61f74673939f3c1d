use super::connection::{xvar, AffineConnection};
use crate::error::{Error, Result};
use crate::symcore::{q, Base, Parity, Rsf, Slot, TensorField};

/// Riemann, Ricci and Schouten tensors of a connection on `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseCurvature {
    /// `R[a][b][c][d]` = `R_ab^c_d`, with `R_ab^c_d v^d = 2 D_[a D_b] v^c`.
    pub riemann: TensorField,
    /// `Ric_bd = R_ab^a_d`.
    pub ricci: TensorField,
    /// `Ric_(ab)/(n-1) + Ric_[ab]/(n+1)`; reduces to `Ric/(n-1)` for special connections.
    pub schouten: TensorField,
}

fn quad(n: usize) -> Vec<Slot> {
    vec![Slot::down(n), Slot::down(n), Slot::up(n), Slot::down(n)]
}

pub fn curvature(d: &AffineConnection) -> Result<BaseCurvature> {
    let n = d.n();
    if n < 2 {
        return Err(Error::Dimension(n));
    }
    let riemann = TensorField::from_fn(Base::M, quad(n), |i| {
        let (a, b, c, e) = (i[0], i[1], i[2], i[3]);
        if a == b {
            return Rsf::zero();
        }
        let mut acc = d.g(b, c, e).partial(xvar(a)) - d.g(a, c, e).partial(xvar(b));
        for f in 0..n {
            acc = acc + d.g(a, c, f) * d.g(b, f, e) - d.g(b, c, f) * d.g(a, f, e);
        }
        acc
    })
    .with_symmetry(vec![0, 1], Parity::Antisym);
    let ricci = TensorField::from_fn(Base::M, vec![Slot::down(n); 2], |i| {
        (0..n).map(|a| riemann.get(&[a, i[0], a, i[1]]).clone()).sum()
    });
    let sym = q(1, 2 * (n as i64 - 1));
    let skew = q(1, 2 * (n as i64 + 1));
    let schouten = TensorField::from_fn(Base::M, vec![Slot::down(n); 2], |i| {
        let (r, rt) = (ricci.get(&[i[0], i[1]]), ricci.get(&[i[1], i[0]]));
        (r + rt).scale(&sym) + (r - rt).scale(&skew)
    });
    Ok(BaseCurvature { riemann, ricci, schouten })
}

/// Projective Weyl tensor `R - 2 delta^c_[a P_b]d + 2 P_[ab] delta^c_d`, valid
/// for any torsion-free connection.
pub fn projective_weyl(d: &AffineConnection, curv: &BaseCurvature) -> TensorField {
    let n = d.n();
    let p = &curv.schouten;
    let delta = |x: usize, y: usize| x == y;
    TensorField::from_fn(Base::M, quad(n), |i| {
        let (a, b, c, e) = (i[0], i[1], i[2], i[3]);
        let mut acc = curv.riemann.get(i).clone();
        if delta(c, a) {
            acc = acc - p.get(&[b, e]);
        }
        if delta(c, b) {
            acc = acc + p.get(&[a, e]);
        }
        if delta(c, e) {
            acc = acc + p.get(&[a, b]) - p.get(&[b, a]);
        }
        acc
    })
}

/// Cotton tensor `Y[c][a][b] = D_a P_bc - D_b P_ac`.
pub fn cotton(d: &AffineConnection, curv: &BaseCurvature) -> Result<TensorField> {
    let n = d.n();
    let dp = d.covariant_derivative(&curv.schouten)?;
    Ok(TensorField::from_fn(Base::M, vec![Slot::down(n); 3], |i| {
        let (c, a, b) = (i[0], i[1], i[2]);
        dp.get(&[a, b, c]) - dp.get(&[b, a, c])
    }))
}

/// Projective Weyl and Cotton tensors of a special connection.
pub fn projective_weyl_cotton(d: &AffineConnection) -> Result<(TensorField, TensorField)> {
    d.require_special()?;
    let curv = curvature(d)?;
    Ok((projective_weyl(d, &curv), cotton(d, &curv)?))
}

/// Every single contraction of the Weyl tensor's upper slot with a lower one.
pub fn weyl_traces(w: &TensorField) -> Result<Vec<TensorField>> {
    [0, 1, 3].iter().map(|&k| w.contract(k, 2)).collect()
}

/// `Gamma + delta_a^c ups_b + delta_b^c ups_a`; the volume form is kept.
pub fn projective_change(d: &AffineConnection, ups: &TensorField) -> Result<AffineConnection> {
    let n = d.n();
    if ups.slots() != [Slot::down(n)] {
        return Err(Error::Shape("projective change needs a 1-form on M".into()));
    }
    let g = TensorField::from_fn(Base::M, vec![Slot::down(n), Slot::up(n), Slot::down(n)], |i| {
        let (a, c, b) = (i[0], i[1], i[2]);
        let mut acc = d.g(a, c, b).clone();
        if a == c {
            acc = acc + ups.get(&[b]);
        }
        if b == c {
            acc = acc + ups.get(&[a]);
        }
        acc
    });
    AffineConnection::new(n, g, d.volume().clone())
}

/// `ups_a = d_a s / s` for a nonvanishing rational scale `s`.
pub fn log_gradient(n: usize, s: &Rsf) -> Result<TensorField> {
    if s.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if s.depends_on_fibre() {
        return Err(Error::Shape("scale on M may only depend on x".into()));
    }
    let comps: Result<Vec<Rsf>> = (0..n).map(|a| s.partial(xvar(a)).checked_div(s)).collect();
    TensorField::from_components(Base::M, vec![Slot::down(n)], comps?)
}

/// Change by `ups = ds/s` and rescale the volume by `s^(n+1)`, so a special
/// connection stays special.
pub fn projective_change_by_scale(d: &AffineConnection, s: &Rsf) -> Result<AffineConnection> {
    let n = d.n();
    let changed = projective_change(d, &log_gradient(n, s)?)?;
    AffineConnection::new(n, changed.gamma().clone(), d.volume() * &s.pow(n as i32 + 1))
}

/// The 1-form `ups` with `D + ups` preserving the volume form, and that
/// connection.
pub fn special_part(d: &AffineConnection) -> Result<(TensorField, AffineConnection)> {
    let n = d.n();
    let c = q(1, n as i64 + 1);
    let ups = TensorField::from_fn(Base::M, vec![Slot::down(n)], |i| {
        (d.volume_log_derivative(i[0]) - d.trace(i[0])).scale(&c)
    });
    let special = projective_change(d, &ups)?;
    Ok((ups, special))
}

/// Thomas projective parameters `Gamma - (1/(n+1)) (delta_a^c tr_b + delta_b^c tr_a)`.
pub fn thomas_parameters(d: &AffineConnection) -> TensorField {
    let n = d.n();
    let c = q(1, n as i64 + 1);
    let tr: Vec<Rsf> = (0..n).map(|a| d.trace(a).scale(&c)).collect();
    TensorField::from_fn(Base::M, vec![Slot::down(n), Slot::up(n), Slot::down(n)], |i| {
        let (a, cc, b) = (i[0], i[1], i[2]);
        let mut acc = d.g(a, cc, b).clone();
        if a == cc {
            acc = acc - &tr[b];
        }
        if b == cc {
            acc = acc - &tr[a];
        }
        acc
    })
}
