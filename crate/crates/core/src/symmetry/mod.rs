//! Conformal Killing and Killing fields of the Patterson-Walker metric:
//! the lifts of projective and affine symmetry data, their unique
//! decomposition, and the light-like criteria.

mod lifts;

pub use lifts::{lift_invariance_check, InvarianceReport, SymmetryMode};

use crate::error::{Error, Result};
use crate::projective::{ProjectiveSolution, SolutionKind};
use crate::pwext::{coord_var, k_form, k_vector, mu, PWGeometry};
use crate::spin::{eta_spinor, make_chi_etacheck, CliffordModule, Spinor, Surd};
use crate::symcore::{q, Base, Parity, Rsf, Slot, TensorField, Q};
use lifts::{lift_components, verified_prolongation};

/// Prolongation data `phi~_ab = D_[a v_b]`, `psi~ = -(1/2n) D^a v_a` and
/// `beta~_a = P~_ab v^b - D_a psi~`.
#[derive(Clone, Debug, PartialEq)]
pub struct CkProlongation {
    pub phi: TensorField,
    pub psi: Rsf,
    pub beta: TensorField,
}

/// Vector field on the cotangent bundle offered as a (conformal) symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalKillingCandidate {
    /// Coordinate components `v^i`.
    pub vector: TensorField,
    pub prolongation: Option<CkProlongation>,
}

impl ConformalKillingCandidate {
    pub fn new(vector: TensorField) -> ConformalKillingCandidate {
        ConformalKillingCandidate { vector, prolongation: None }
    }
}

#[derive(Clone, Debug)]
pub struct CkReport {
    /// Trace-free symmetric part of `D_a v_b`.
    pub residual: TensorField,
    pub prolongation: CkProlongation,
    /// Residuals of the derivative identities for `phi~` and `beta~`;
    /// filled only when `residual` vanishes.
    pub identities: Vec<(&'static str, TensorField)>,
}

impl CkReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.identities.iter().all(|(_, t)| t.is_zero())
    }
}

fn check_vector(pw: &PWGeometry, v: &TensorField) -> Result<()> {
    if v.slots() != [Slot::up_t(pw.n())] {
        return Err(Error::Shape(format!("expected a vector field on the cotangent bundle, got {:?}", v.slots())));
    }
    Ok(())
}

fn inverse_trace(pw: &PWGeometry, t: &TensorField) -> Rsf {
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

/// Symmetric part of `D_a v_b`.
pub fn killing_residual(pw: &PWGeometry, v: &TensorField) -> Result<TensorField> {
    check_vector(pw, v)?;
    let dv = pw.covariant_derivative(&pw.lower(v, 0)?)?;
    dv.symmetrize(&[0, 1], Parity::Sym)
}

/// Conformal Killing residual with the prolongation data; the prolongation
/// identities are checked when the residual vanishes.
pub fn ck_residual(pw: &PWGeometry, v: &TensorField) -> Result<CkReport> {
    check_vector(pw, v)?;
    let n = pw.n();
    let dim = pw.dim();
    let g = pw.metric();
    let vl = pw.lower(v, 0)?;
    let dv = pw.covariant_derivative(&vl)?;
    let sym = dv.symmetrize(&[0, 1], Parity::Sym)?;
    let tr = inverse_trace(pw, &dv);
    let residual = sym.sub(&g.scale(&tr.scale(&q(1, dim as i64))))?;
    let phi = dv.symmetrize(&[0, 1], Parity::Antisym)?;
    let psi = tr.scale(&q(-1, dim as i64));
    let curv = pw.curvature();
    let p = &curv.schouten;
    let beta = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n)], |i| {
        let mut acc = -psi.partial(coord_var(n, i[0]));
        for b in 0..dim {
            acc = acc + p.get(&[i[0], b]) * v.get(&[b]);
        }
        acc
    });
    let mut identities = Vec::new();
    if residual.is_zero() {
        // D_a phi_bc + 2 g_a[b beta_c] + 2 P_a[b v_c] - v^d W_dabc
        let dphi = pw.covariant_derivative(&phi)?;
        let w = &curv.weyl;
        identities.push((
            "Dphi",
            TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 3], |i| {
                let (a, b, c) = (i[0], i[1], i[2]);
                let mut acc = dphi.get(i).clone()
                    + g.get(&[a, b]) * beta.get(&[c])
                    - g.get(&[a, c]) * beta.get(&[b])
                    + p.get(&[a, b]) * vl.get(&[c])
                    - p.get(&[a, c]) * vl.get(&[b]);
                for e in 0..dim {
                    let ve = v.get(&[e]);
                    if !ve.is_zero() {
                        acc = acc - ve * w.get(&[e, a, b, c]);
                    }
                }
                acc
            }),
        ));
        // D_a beta_b - P_a^c phi_cb - psi P_ab + v^d (D_d P_ab - D_a P_db)
        let dbeta = pw.covariant_derivative(&beta)?;
        let pr = pw.raise(p, 1)?;
        let y = &curv.cotton;
        identities.push((
            "Dbeta",
            TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| {
                let (a, b) = (i[0], i[1]);
                let mut acc = dbeta.get(i) - &psi * p.get(i);
                for c in 0..dim {
                    acc = acc - pr.get(&[a, c]) * phi.get(&[c, b]);
                    let vc = v.get(&[c]);
                    if !vc.is_zero() {
                        acc = acc + vc * y.get(&[b, c, a]);
                    }
                }
                acc
            }),
        ));
    }
    Ok(CkReport { residual, prolongation: CkProlongation { phi, psi, beta }, identities })
}

/// Lift of a projective symmetry, a bivector solution, or a Killing 1-form
/// to a conformal Killing field.
pub fn lift_conformal(pw: &PWGeometry, s: &ProjectiveSolution) -> Result<ConformalKillingCandidate> {
    lift(pw, s, SymmetryMode::Conformal)
}

/// Lift of an affine symmetry, a parallel bivector, or a Killing 1-form to a
/// Killing field.
pub fn lift_affine(pw: &PWGeometry, s: &ProjectiveSolution) -> Result<ConformalKillingCandidate> {
    lift(pw, s, SymmetryMode::Killing)
}

pub fn lift(pw: &PWGeometry, s: &ProjectiveSolution, mode: SymmetryMode) -> Result<ConformalKillingCandidate> {
    let pr = verified_prolongation(pw.source(), s, mode)?;
    let vector = lift_components(pw.n(), pw.theta(), mode, s, &pr)?;
    let rep = ck_residual(pw, &vector)?;
    Ok(ConformalKillingCandidate { vector, prolongation: Some(rep.prolongation) })
}

/// The `L_k` eigenvalue the lift of `kind` carries.
pub fn lift_eigenvalue(kind: SolutionKind) -> Option<i64> {
    match kind {
        SolutionKind::Bivector => Some(2),
        SolutionKind::ProjectiveSymmetry | SolutionKind::AffineSymmetry => Some(0),
        SolutionKind::KillingOneForm => Some(-2),
        _ => None,
    }
}

/// Coordinate Lie bracket `[x, y]`.
pub fn lie_bracket(pw: &PWGeometry, x: &TensorField, y: &TensorField) -> TensorField {
    let n = pw.n();
    let dim = pw.dim();
    TensorField::from_fn(Base::Mt, vec![Slot::up_t(n)], |i| {
        let mut acc = Rsf::zero();
        for j in 0..dim {
            let v = coord_var(n, j);
            let (xj, yj) = (x.get(&[j]), y.get(&[j]));
            if !xj.is_zero() {
                acc = acc + xj * y.get(i).partial(v);
            }
            if !yj.is_zero() {
                acc = acc - yj * x.get(i).partial(v);
            }
        }
        acc
    })
}

/// `L_k v = [k, v]`.
pub fn lie_k(pw: &PWGeometry, v: &TensorField) -> TensorField {
    lie_bracket(pw, &k_vector(pw), v)
}

/// Clifford action of a vector field (given in coordinates) on a spinor.
fn clifford_action(pw: &PWGeometry, v: &TensorField, psi: &Spinor) -> Result<Spinor> {
    let c = CliffordModule::new(pw.n())?;
    let vf = pw.to_frame(v)?;
    let mut out = Spinor::zeros(pw.n(), psi.is_dual()).with_cweight(psi.cweight());
    for a in 0..pw.dim() {
        let va = vf.get(&[a]);
        if !va.is_zero() {
            out = out.add(&c.gamma(a, psi).scale(&Surd::from(va.clone())));
        }
    }
    Ok(out)
}

/// Whether `v` lies in the annihilator of `eta` (the distribution `U`).
pub fn tangent_to_u(pw: &PWGeometry, v: &TensorField) -> Result<bool> {
    Ok(clifford_action(pw, v, &eta_spinor(pw)?)?.is_zero())
}

/// Whether `v` lies in the annihilator of `chi` (the vertical distribution).
pub fn tangent_to_v(pw: &PWGeometry, v: &TensorField) -> Result<bool> {
    let c = CliffordModule::new(pw.n())?;
    Ok(clifford_action(pw, v, &make_chi_etacheck(&c).0)?.is_zero())
}

/// `mu^a_b D_a v^b - (1/n) D_a v^a`.
pub fn side_scalar(pw: &PWGeometry, v: &TensorField) -> Result<Rsf> {
    let dim = pw.dim();
    let dv = pw.covariant_derivative(v)?;
    let m = mu(pw);
    let gi = pw.inverse_metric();
    let mut acc = Rsf::zero();
    for a in 0..dim {
        for b in 0..dim {
            let dab = dv.get(&[a, b]);
            if dab.is_zero() {
                continue;
            }
            let mut mu_ab = Rsf::zero();
            for c in 0..dim {
                let gac = gi.get(&[a, c]);
                if !gac.is_zero() {
                    mu_ab = mu_ab + gac * m.get(&[c, b]);
                }
            }
            acc = acc + mu_ab * dab;
        }
    }
    let div: Rsf = (0..dim).map(|a| dv.get(&[a, a]).clone()).sum();
    Ok(acc - div.scale(&q(1, pw.n() as i64)))
}

/// Graded pieces of a (conformal) Killing field and the base data behind
/// them.
#[derive(Clone, Debug)]
pub struct SymmetryDecomposition {
    pub mode: SymmetryMode,
    pub plus: TensorField,
    pub zero: TensorField,
    pub minus: TensorField,
    /// Coefficient of `k`; always zero in Killing mode.
    pub c: Q,
    pub bivector: Option<ProjectiveSolution>,
    pub symmetry: Option<ProjectiveSolution>,
    pub oneform: Option<ProjectiveSolution>,
    /// `mu^a_b D_a v0^b - (1/n) D v0` for the metric in hand: zero in
    /// conformal mode, `2 n psi` in Killing mode.
    pub side_scalar: Rsf,
}

fn decomposition_error(e: Error) -> Error {
    match e {
        Error::Decomposition(_) => e,
        e => Error::Decomposition(e.to_string()),
    }
}

/// Split a (conformal) Killing field by fibre degree into its `L_k`
/// eigenparts and recover the base data, re-verifying every piece.
pub fn decompose(pw: &PWGeometry, v: &TensorField, mode: SymmetryMode) -> Result<SymmetryDecomposition> {
    check_vector(pw, v)?;
    let n = pw.n();
    let dim = pw.dim();
    let res = match mode {
        SymmetryMode::Conformal => ck_residual(pw, v)?.residual,
        SymmetryMode::Killing => killing_residual(pw, v)?,
    };
    if !res.is_zero() {
        return Err(Error::Precondition(format!("not a {} Killing field: {}", mode.name(), res.residual_string())));
    }
    // horizontal part v^A and vertical part a_B of v = v^A h_A + a_B d/dp_B
    let theta = pw.theta();
    let horiz: Vec<Rsf> = (0..n).map(|a| v.get(&[a]).clone()).collect();
    let vert: Vec<Rsf> = (0..n)
        .map(|b| {
            let mut acc = v.get(&[n + b]).clone();
            for (a, x) in horiz.iter().enumerate() {
                acc = acc - x * theta.get(&[a, b]);
            }
            acc
        })
        .collect();
    for x in &horiz {
        if x.max_p_degree()? > 1 {
            return Err(Error::Decomposition(format!("horizontal component {x} has fibre degree above 1")));
        }
    }
    for x in &vert {
        if x.max_p_degree()? > 2 {
            return Err(Error::Decomposition(format!("vertical component {x} has fibre degree above 2")));
        }
    }
    let graded = |dh: u32, dv: u32| -> Result<TensorField> {
        let mut h = Vec::with_capacity(n);
        for x in &horiz {
            h.push(x.grade_in_p(dh)?);
        }
        let mut comps = h.clone();
        for b in 0..n {
            let mut acc = vert[b].grade_in_p(dv)?;
            for (a, x) in h.iter().enumerate() {
                acc = acc + x * theta.get(&[a, b]);
            }
            comps.push(acc);
        }
        TensorField::from_components(Base::Mt, vec![Slot::up_t(n)], comps)
    };
    let mut minus = TensorField::zeros(Base::Mt, vec![Slot::up_t(n)]);
    for b in 0..n {
        minus.set(&[n + b], vert[b].grade_in_p(0)?);
    }
    let plus = graded(1, 2)?;
    let rest = graded(0, 1)?;

    let k = k_vector(pw);
    let (c, zero) = match mode {
        SymmetryMode::Conformal => {
            let qk = side_scalar(pw, &rest)?;
            let qv = qk
                .constant_value()
                .ok_or_else(|| Error::Decomposition(format!("side scalar {qk} is not constant")))?;
            let c = -qv / Q::from_integer((2 * (n as i64 + 1)).into());
            let ck = k.scale(&Rsf::constant(c.clone()));
            (c, rest.sub(&ck)?)
        }
        SymmetryMode::Killing => (Q::from_integer(0.into()), rest),
    };
    let side = side_scalar(pw, &zero)?;

    let d = pw.source();
    let lift_back = |s: ProjectiveSolution, part: &TensorField| -> Result<ProjectiveSolution> {
        let l = lift(pw, &s, mode).map_err(decomposition_error)?;
        if &l.vector != part {
            let diff = l.vector.sub(part)?;
            return Err(Error::Decomposition(format!("{} part is not a lift: {}", s.kind.name(), diff.residual_string())));
        }
        Ok(s)
    };

    let symmetry = if zero.is_zero() {
        None
    } else {
        // v^A = (1/2) d/dp_A (k_b v0^b)
        let kf = k_form(pw);
        let kv: Rsf = (0..dim).map(|i| kf.get(&[i]) * zero.get(&[i])).sum();
        let comps = (0..n).map(|a| kv.partial(coord_var(n, n + a)).scale(&q(1, 2))).collect();
        let kind = match mode {
            SymmetryMode::Conformal => SolutionKind::ProjectiveSymmetry,
            SymmetryMode::Killing => SolutionKind::AffineSymmetry,
        };
        Some(lift_back(ProjectiveSolution::from_components(kind, n, comps)?, &zero)?)
    };
    let bivector = if plus.is_zero() {
        None
    } else {
        // w^{AB} = chi^{aA} chi^B_b D_a v+^b
        let dv = pw.covariant_derivative(&plus)?;
        let comps = (0..n * n).map(|o| dv.get(&[n + o / n, o % n]).clone()).collect();
        let s = ProjectiveSolution::from_components(SolutionKind::Bivector, n, comps).map_err(decomposition_error)?;
        Some(lift_back(s, &plus)?)
    };
    let oneform = if minus.is_zero() {
        None
    } else {
        // alpha_A = g(h_A, v-)
        let g = pw.metric();
        let fr = pw.frame();
        let comps = (0..n)
            .map(|a| {
                let mut acc = Rsf::zero();
                for i in 0..dim {
                    for j in 0..dim {
                        let (f, m) = (fr.get(&[a, i]), minus.get(&[j]));
                        if !f.is_zero() && !m.is_zero() {
                            acc = acc + f * g.get(&[i, j]) * m;
                        }
                    }
                }
                acc
            })
            .collect();
        Some(lift_back(ProjectiveSolution::from_components(SolutionKind::KillingOneForm, n, comps)?, &minus)?)
    };
    if mode == SymmetryMode::Killing {
        let psi = match &symmetry {
            Some(s) => {
                let dv = d.covariant_derivative(&s.data)?;
                (0..n).map(|a| dv.get(&[a, a]).clone()).sum::<Rsf>().scale(&q(1, n as i64))
            }
            None => Rsf::zero(),
        };
        if side != psi.scale(&q(2 * n as i64, 1)) {
            return Err(Error::Decomposition(format!("side scalar {side} differs from 2n psi = {}", psi.scale(&q(2 * n as i64, 1)))));
        }
    } else if !side.is_zero() {
        return Err(Error::Decomposition(format!("side scalar {side} of the degree-zero part is nonzero")));
    }
    Ok(SymmetryDecomposition { mode, plus, zero, minus, c, bivector, symmetry, oneform, side_scalar: side })
}

#[derive(Clone, Debug)]
pub struct LightlikeReport {
    pub mode: SymmetryMode,
    /// `g(v0, v0)` computed from the metric.
    pub norm: Rsf,
    /// The closed form `2((n-1)/(n+1) psi v^A - phi_B^A v^B) p_A`, or
    /// `-2(psi v^A + phi_B^A v^B) p_A` in Killing mode.
    pub closed_form: Rsf,
    /// `v^B D_B v^A - (2/(n+1)) (D_C v^C) v^A`, or `v^B D_B v^A`.
    pub criterion: TensorField,
    /// `v^B D_B v^A` is proportional to `v^A`.
    pub geodetic: bool,
}

impl LightlikeReport {
    pub fn lightlike(&self) -> bool {
        self.norm.is_zero()
    }
    /// Norm and closed form agree and light-likeness matches the criterion.
    pub fn consistent(&self) -> bool {
        self.norm == self.closed_form && self.lightlike() == self.criterion.is_zero() && (!self.lightlike() || self.geodetic)
    }
}

pub fn lightlike_geodetic(pw: &PWGeometry, v0: &TensorField, v: &ProjectiveSolution, mode: SymmetryMode) -> Result<LightlikeReport> {
    check_vector(pw, v0)?;
    let n = pw.n();
    let dim = pw.dim();
    let lk = lie_k(pw, v0);
    if !lk.is_zero() {
        return Err(Error::Precondition(format!("L_k v0 is nonzero: {}", lk.residual_string())));
    }
    let vl = pw.lower(v0, 0)?;
    let norm: Rsf = (0..dim).map(|i| vl.get(&[i]) * v0.get(&[i])).sum();
    let d = pw.source();
    let dv = d.covariant_derivative(&v.data)?;
    let div: Rsf = (0..n).map(|a| dv.get(&[a, a]).clone()).sum();
    let psi = div.scale(&q(1, n as i64));
    let phi_v: Vec<Rsf> = (0..n)
        .map(|a| {
            let mut acc = Rsf::zero();
            for b in 0..n {
                acc = acc + v.data.get(&[b]) * dv.get(&[b, a]);
            }
            acc - &psi * v.data.get(&[a])
        })
        .collect();
    let closed_form: Rsf = (0..n)
        .map(|a| {
            let t = match mode {
                SymmetryMode::Conformal => (&psi * v.data.get(&[a])).scale(&q(n as i64 - 1, n as i64 + 1)) - &phi_v[a],
                SymmetryMode::Killing => -(&psi * v.data.get(&[a]) + &phi_v[a]),
            };
            t * Rsf::p(a + 1)
        })
        .sum::<Rsf>()
        .scale(&q(2, 1));
    let vdv: Vec<Rsf> = (0..n).map(|a| (0..n).map(|b| v.data.get(&[b]) * dv.get(&[b, a])).sum()).collect();
    let criterion = TensorField::from_fn(Base::M, vec![Slot::up(n)], |i| match mode {
        SymmetryMode::Conformal => &vdv[i[0]] - (&div * v.data.get(i)).scale(&q(2, n as i64 + 1)),
        SymmetryMode::Killing => vdv[i[0]].clone(),
    });
    let geodetic = (0..n).all(|a| (0..n).all(|b| &vdv[a] * v.data.get(&[b]) == &vdv[b] * v.data.get(&[a])));
    Ok(LightlikeReport { mode, norm, closed_form, criterion, geodetic })
}

/// Apply `[v^A, h_B] - Gamma_B^A_C v^C` and
/// `[h_A, h_B] - R_AB^C_D p_C v^D` to a test function; returns the first
/// failing relation.
pub fn commutation_defect(pw: &PWGeometry, f: &Rsf) -> Result<Option<String>> {
    let n = pw.n();
    let d = pw.source();
    let r = crate::projective::curvature(d)?.riemann;
    let h = |a: usize, g: &Rsf| pw.apply_frame(a, g);
    let vert = |a: usize, g: &Rsf| pw.apply_frame(n + a, g);
    for a in 0..n {
        for b in 0..n {
            let lhs = vert(a, &h(b, f)) - h(b, &vert(a, f));
            let rhs: Rsf = (0..n).map(|c| d.g(b, a, c) * vert(c, f)).sum();
            if lhs != rhs {
                return Ok(Some(format!("[v^{}, h_{}]", a + 1, b + 1)));
            }
            let lhs = h(a, &h(b, f)) - h(b, &h(a, f));
            let mut rhs = Rsf::zero();
            for c in 0..n {
                for e in 0..n {
                    let rv = r.get(&[a, b, c, e]);
                    if !rv.is_zero() {
                        rhs = rhs + rv * Rsf::p(c + 1) * vert(e, f);
                    }
                }
            }
            if lhs != rhs {
                return Ok(Some(format!("[h_{}, h_{}]", a + 1, b + 1)));
            }
        }
    }
    Ok(None)
}
