//! Almost Einstein scales on the Patterson-Walker metric and their
//! correspondence with Euler-type fields and Ricci-flat scales on the base.

use crate::error::{Error, Result};
use crate::projective::{curvature, projective_weyl, solution_residual, AffineConnection, ProjectiveSolution, SolutionKind};
use crate::pwext::{coord_var, k_vector, PWGeometry};
use crate::symcore::{q, Base, Parity, Rsf, Slot, TensorField};

/// Section of the density bundle of conformal weight 1, trivialized by the
/// Patterson-Walker metric.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalScale {
    value: Rsf,
}

impl ConformalScale {
    pub fn new(value: Rsf) -> ConformalScale {
        ConformalScale { value }
    }
    pub fn value(&self) -> &Rsf {
        &self.value
    }
    pub fn cweight(&self) -> i32 {
        1
    }
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    pub fn add(&self, o: &ConformalScale) -> ConformalScale {
        ConformalScale::new(&self.value + &o.value)
    }
}

fn gradient(pw: &PWGeometry, f: &Rsf) -> TensorField {
    let n = pw.n();
    TensorField::from_fn(Base::Mt, vec![Slot::down_t(n)], |i| f.partial(coord_var(n, i[0])))
}

/// `D_a D_b f` for the Levi-Civita connection.
pub fn hessian(pw: &PWGeometry, f: &Rsf) -> Result<TensorField> {
    pw.covariant_derivative(&gradient(pw, f))
}

/// `g^{ab} t_ab`.
fn metric_trace(pw: &PWGeometry, t: &TensorField) -> Rsf {
    let gi = pw.inverse_metric();
    let dim = pw.dim();
    let mut acc = Rsf::zero();
    for a in 0..dim {
        for b in 0..dim {
            let c = gi.get(&[a, b]);
            if !c.is_zero() {
                acc = acc + c * t.get(&[a, b]);
            }
        }
    }
    acc
}

/// Trace-free part of `D_(a D_b) s + P_ab s`.
pub fn aes_residual(pw: &PWGeometry, s: &ConformalScale) -> Result<TensorField> {
    let h = hessian(pw, s.value())?;
    let raw = h.add(&pw.curvature().schouten.scale(s.value()))?;
    let tr = metric_trace(pw, &raw).scale(&q(1, pw.dim() as i64));
    raw.sub(&pw.metric().scale(&tr))
}

/// `L_k s = k^a D_a s - s` for a density of weight 1.
pub fn lie_derivative_scale(pw: &PWGeometry, s: &ConformalScale) -> Rsf {
    let k = k_vector(pw);
    let n = pw.n();
    let mut acc = -s.value();
    for a in 0..pw.dim() {
        let ka = k.get(&[a]);
        if !ka.is_zero() {
            acc = acc + ka * s.value().partial(coord_var(n, a));
        }
    }
    acc
}

/// `k^a k^b D_a D_b s`.
pub fn kk_hessian(pw: &PWGeometry, s: &ConformalScale) -> Result<Rsf> {
    let h = hessian(pw, s.value())?;
    let k = k_vector(pw);
    let dim = pw.dim();
    let mut acc = Rsf::zero();
    for a in 0..dim {
        for b in 0..dim {
            let kk = k.get(&[a]) * k.get(&[b]);
            if !kk.is_zero() {
                acc = acc + kk * h.get(&[a, b]);
            }
        }
    }
    Ok(acc)
}

/// Trace of the Schouten tensor of `s^{-2} g`, multiplied by `s^2`:
/// `s^2 P + s Lap(s) - n |ds|^2`. It vanishes exactly when the rescaled
/// metric has zero scalar curvature off the zero set of `s`.
pub fn rescaled_schouten_trace_cleared(pw: &PWGeometry, s: &ConformalScale) -> Result<Rsf> {
    let sv = s.value();
    let lap = metric_trace(pw, &hessian(pw, sv)?);
    let grad = gradient(pw, sv);
    let sq = metric_trace(pw, &grad.outer(&grad));
    let ptr = metric_trace(pw, &pw.curvature().schouten);
    Ok(sv * sv * ptr + sv * lap - sq.scale(&q(pw.n() as i64, 1)))
}

fn require(d: &AffineConnection, s: &ProjectiveSolution, kind: SolutionKind) -> Result<()> {
    if s.kind != kind {
        return Err(Error::Precondition(format!("expected {}, got {}", kind.name(), s.kind.name())));
    }
    let res = solution_residual(d, s)?;
    if let Some((part, r)) = res.first_failure() {
        return Err(Error::Precondition(format!("{} {part} residual is nonzero: {r}", kind.name())));
    }
    Ok(())
}

/// Pullback of a Ricci-flat scale.
pub fn lift_minus(pw: &PWGeometry, sigma: &ProjectiveSolution) -> Result<ConformalScale> {
    require(pw.source(), sigma, SolutionKind::RicciFlatScale)?;
    Ok(ConformalScale::new(sigma.data.value().clone()))
}

/// `xi^A p_A` for an Euler-type field with `xi.W = 0`.
pub fn lift_plus(pw: &PWGeometry, xi: &ProjectiveSolution) -> Result<ConformalScale> {
    require(pw.source(), xi, SolutionKind::EulerField)?;
    let (first, second) = lift_plus_summands(pw.source(), xi)?;
    for (name, t) in [("trace-free Dxi", &first), ("second-order", &second)] {
        if !t.is_zero() {
            return Err(Error::Precondition(format!("{name} summand is nonzero: {}", t.residual_string())));
        }
    }
    Ok(ConformalScale::new(fibre_pairing(&xi.data)))
}

fn fibre_pairing(xi: &TensorField) -> Rsf {
    (0..xi.len()).map(|a| xi.get(&[a]) * Rsf::p(a + 1)).sum()
}

/// The two base tensors whose vanishing makes `xi^A p_A` almost Einstein:
/// `D_A xi^B - (1/n) delta D_C xi^C` and the `(AB)`-symmetrization of
/// `D_A D_B xi^C + delta_A^C P_BD xi^D - xi^D W_DA^C_B`.
pub fn lift_plus_summands(d: &AffineConnection, xi: &ProjectiveSolution) -> Result<(TensorField, TensorField)> {
    let n = d.n();
    let v = &xi.data;
    let dv = d.covariant_derivative(v)?;
    let div: Rsf = (0..n).map(|a| dv.get(&[a, a]).clone()).sum();
    let c = q(1, n as i64);
    let first = TensorField::from_fn(Base::M, dv.slots().to_vec(), |i| {
        if i[0] == i[1] {
            dv.get(i) - div.scale(&c)
        } else {
            dv.get(i).clone()
        }
    });
    let curv = curvature(d)?;
    let w = projective_weyl(d, &curv);
    let ddv = d.covariant_derivative(&dv)?;
    let pxi: Vec<Rsf> = (0..n).map(|b| (0..n).map(|e| curv.schouten.get(&[b, e]) * v.get(&[e])).sum()).collect();
    let raw = TensorField::from_fn(Base::M, ddv.slots().to_vec(), |i| {
        let (a, b, cc) = (i[0], i[1], i[2]);
        let mut acc = ddv.get(i).clone();
        if a == cc {
            acc = acc + &pxi[b];
        }
        for e in 0..n {
            acc = acc - v.get(&[e]) * w.get(&[e, a, cc, b]);
        }
        acc
    });
    Ok((first, raw.symmetrize(&[0, 1], Parity::Sym)?))
}

/// Graded pieces of an almost Einstein scale and the base data they carry.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleDecomposition {
    pub plus: ConformalScale,
    pub minus: ConformalScale,
    /// `None` when the plus part vanishes.
    pub xi: Option<ProjectiveSolution>,
    /// `None` when the minus part vanishes.
    pub sigma: Option<ProjectiveSolution>,
}

/// Split an almost Einstein scale into its `L_k` eigenparts and read off the
/// base solutions; every extracted object is re-verified.
pub fn decompose_scale(pw: &PWGeometry, s: &ConformalScale) -> Result<ScaleDecomposition> {
    let n = pw.n();
    let res = aes_residual(pw, s)?;
    if !res.is_zero() {
        return Err(Error::Precondition(format!("not an almost Einstein scale: {}", res.residual_string())));
    }
    let deg = s.value().max_p_degree()?;
    if deg >= 2 {
        return Err(Error::Decomposition(format!("fibre degree {deg} present in {}", s.value())));
    }
    let plus = ConformalScale::new(s.value().grade_in_p(1)?);
    let minus = ConformalScale::new(s.value().grade_in_p(0)?);
    let d = pw.source();

    let xi = if plus.is_zero() {
        None
    } else {
        let comps = (0..n).map(|a| plus.value().partial(coord_var(n, n + a))).collect();
        let xi = ProjectiveSolution::from_components(SolutionKind::EulerField, n, comps)?;
        require(d, &xi, SolutionKind::EulerField).map_err(|e| Error::Decomposition(e.to_string()))?;
        Some(xi)
    };
    let sigma = if minus.is_zero() {
        None
    } else {
        let t = TensorField::scalar(Base::M, minus.value().clone()).with_weights(SolutionKind::RicciFlatScale.pweight(), 0);
        let sigma = ProjectiveSolution::new(SolutionKind::RicciFlatScale, t)?;
        require(d, &sigma, SolutionKind::RicciFlatScale).map_err(|e| Error::Decomposition(e.to_string()))?;
        Some(sigma)
    };
    for (part, ev) in [(&plus, 1), (&minus, -1)] {
        let l = lie_derivative_scale(pw, part);
        if l != part.value().scale(&q(ev, 1)) {
            return Err(Error::Decomposition(format!("L_k eigenvalue {ev} fails on {}", part.value())));
        }
    }
    Ok(ScaleDecomposition { plus, minus, xi, sigma })
}
