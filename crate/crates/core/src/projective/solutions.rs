use super::connection::{levi_civita, AffineConnection};
use super::curvature::{cotton, curvature, projective_weyl, BaseCurvature};
use crate::error::{Error, Result};
use crate::symcore::{q, qi, Base, Parity, Rsf, Slot, TensorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolutionKind {
    EulerField,
    RicciFlatScale,
    Bivector,
    KillingOneForm,
    ProjectiveSymmetry,
    AffineSymmetry,
}

impl SolutionKind {
    pub const ALL: [SolutionKind; 6] = [
        SolutionKind::EulerField,
        SolutionKind::RicciFlatScale,
        SolutionKind::Bivector,
        SolutionKind::KillingOneForm,
        SolutionKind::ProjectiveSymmetry,
        SolutionKind::AffineSymmetry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolutionKind::EulerField => "euler-field",
            SolutionKind::RicciFlatScale => "ricciflat-scale",
            SolutionKind::Bivector => "bivector",
            SolutionKind::KillingOneForm => "killing-oneform",
            SolutionKind::ProjectiveSymmetry => "projective-symmetry",
            SolutionKind::AffineSymmetry => "affine-symmetry",
        }
    }

    pub fn parse(s: &str) -> Option<SolutionKind> {
        SolutionKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn pweight(self) -> i32 {
        match self {
            SolutionKind::EulerField => -1,
            SolutionKind::RicciFlatScale => 1,
            SolutionKind::Bivector => -2,
            SolutionKind::KillingOneForm => 2,
            SolutionKind::ProjectiveSymmetry | SolutionKind::AffineSymmetry => 0,
        }
    }

    pub fn slots(self, n: usize) -> Vec<Slot> {
        match self {
            SolutionKind::EulerField | SolutionKind::ProjectiveSymmetry | SolutionKind::AffineSymmetry => {
                vec![Slot::up(n)]
            }
            SolutionKind::RicciFlatScale => vec![],
            SolutionKind::Bivector => vec![Slot::up(n); 2],
            SolutionKind::KillingOneForm => vec![Slot::down(n)],
        }
    }
}

/// Companion fields produced by [`prolong`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Prolongation {
    /// Trace-free `phi[a][b]` = `phi_a^b`.
    pub phi: Option<TensorField>,
    pub psi: Option<TensorField>,
    pub beta: Option<TensorField>,
    pub nu: Option<TensorField>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveSolution {
    pub kind: SolutionKind,
    pub data: TensorField,
    pub prolongation: Option<Prolongation>,
}

impl ProjectiveSolution {
    /// Validates slots, weight and (for bivectors) antisymmetry.
    pub fn new(kind: SolutionKind, data: TensorField) -> Result<ProjectiveSolution> {
        let n = data.slots().first().map(|s| s.dim);
        if let Some(n) = n {
            if data.slots() != kind.slots(n).as_slice() {
                return Err(Error::Shape(format!("{} data has slots {:?}", kind.name(), data.slots())));
            }
        } else if !kind.slots(0).is_empty() {
            return Err(Error::Shape(format!("{} data cannot be a scalar", kind.name())));
        }
        if data.pweight() != kind.pweight() {
            return Err(Error::Weight(format!(
                "{} needs projective weight {}, got {}",
                kind.name(),
                kind.pweight(),
                data.pweight()
            )));
        }
        if !data.depends_only_on_x() {
            return Err(Error::Shape("solution data on M may only depend on x".into()));
        }
        if kind == SolutionKind::Bivector {
            let t = data.symmetrize(&[0, 1], Parity::Antisym)?;
            if t != data {
                return Err(Error::Shape("bivector is not antisymmetric".into()));
            }
        }
        Ok(ProjectiveSolution { kind, data, prolongation: None })
    }

    /// Row-major components; the kind's weight is attached.
    pub fn from_components(kind: SolutionKind, n: usize, comps: Vec<Rsf>) -> Result<ProjectiveSolution> {
        let t = TensorField::from_components(Base::M, kind.slots(n), comps)?.with_weights(kind.pweight(), 0);
        ProjectiveSolution::new(kind, t)
    }

    pub fn n(&self) -> Option<usize> {
        self.data.slots().first().map(|s| s.dim)
    }
}

/// Main equation residual plus named integrability residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionResiduals {
    pub equation: TensorField,
    pub integrability: Vec<(&'static str, TensorField)>,
}

impl SolutionResiduals {
    pub fn equation_holds(&self) -> bool {
        self.equation.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.equation.is_zero() && self.integrability.iter().all(|(_, t)| t.is_zero())
    }

    /// Name of the first nonvanishing part, with its components.
    pub fn first_failure(&self) -> Option<(&'static str, String)> {
        if !self.equation.is_zero() {
            return Some(("equation", self.equation.residual_string()));
        }
        self.integrability.iter().find(|(_, t)| !t.is_zero()).map(|(n, t)| (*n, t.residual_string()))
    }
}

fn base_n(d: &AffineConnection, s: &ProjectiveSolution) -> Result<usize> {
    let n = d.n();
    if let Some(m) = s.n() {
        if m != n {
            return Err(Error::Shape(format!("solution lives in dimension {m}, connection in {n}")));
        }
    }
    if s.data.pweight() != s.kind.pweight() {
        return Err(Error::Weight(format!("{} needs projective weight {}", s.kind.name(), s.kind.pweight())));
    }
    Ok(n)
}

/// Divergence `D_c t^{..c..}` contracting the derivative slot with `slot`.
fn divergence(dt: &TensorField, slot: usize) -> Result<TensorField> {
    dt.contract(0, slot + 1)
}

/// `T[a][b][c] - (1/(n+1)) (delta_a^c tr_b + delta_b^c tr_a)` with `tr_b = T[b][d][d]`.
fn trace_free_sym3(t: &TensorField, n: usize) -> TensorField {
    let c = q(1, n as i64 + 1);
    let tr: Vec<Rsf> = (0..n).map(|b| (0..n).map(|e| t.get(&[b, e, e]).clone()).sum::<Rsf>().scale(&c)).collect();
    TensorField::from_fn(Base::M, t.slots().to_vec(), |i| {
        let (a, b, cc) = (i[0], i[1], i[2]);
        let mut acc = t.get(i).clone();
        if a == cc {
            acc = acc - &tr[b];
        }
        if b == cc {
            acc = acc - &tr[a];
        }
        acc
    })
}

/// `v^d X[d][a][c][b]` for a rank-4 `X` with slots `[d, a, c, b]`.
fn contract_first(v: &TensorField, x: &TensorField, n: usize) -> TensorField {
    TensorField::from_fn(Base::M, vec![Slot::down(n), Slot::up(n), Slot::down(n)], |i| {
        (0..n).map(|e| v.get(&[e]) * x.get(&[e, i[0], i[1], i[2]])).sum()
    })
}

/// `p_ab v^b`.
fn lower_with(p: &TensorField, v: &TensorField, n: usize) -> Vec<Rsf> {
    (0..n).map(|a| (0..n).map(|b| p.get(&[a, b]) * v.get(&[b])).sum()).collect()
}

/// Symmetrized `w^{b(a} X_{b(c}^{d)}_{e)}`, slots `[a, c, d, e]`.
fn bivector_integrability(w: &TensorField, x: &TensorField, n: usize) -> TensorField {
    let raw = TensorField::from_fn(Base::M, vec![Slot::up(n), Slot::down(n), Slot::up(n), Slot::down(n)], |i| {
        let (a, c, dd, e) = (i[0], i[1], i[2], i[3]);
        (0..n).map(|b| w.get(&[b, a]) * x.get(&[b, c, dd, e])).sum()
    });
    // symmetrize over (a, d) and (c, e)
    TensorField::from_fn(Base::M, raw.slots().to_vec(), |i| {
        let (a, c, dd, e) = (i[0], i[1], i[2], i[3]);
        let s = raw.get(&[a, c, dd, e]) + raw.get(&[dd, c, a, e]) + raw.get(&[a, e, dd, c]) + raw.get(&[dd, e, a, c]);
        s.scale(&q(1, 4))
    })
}

struct Ctx {
    curv: BaseCurvature,
    weyl: TensorField,
}

fn ctx(d: &AffineConnection) -> Result<Ctx> {
    let curv = curvature(d)?;
    let weyl = projective_weyl(d, &curv);
    Ok(Ctx { curv, weyl })
}

/// Residual of the defining equation of `s`, together with the
/// integrability conditions its lift requires.
pub fn solution_residual(d: &AffineConnection, s: &ProjectiveSolution) -> Result<SolutionResiduals> {
    let n = base_n(d, s)?;
    let cx = ctx(d)?;
    let data = &s.data;
    let nq = n as i64;
    let out = match s.kind {
        SolutionKind::EulerField => {
            let dx = d.covariant_derivative(data)?;
            let div = divergence(&dx, 0)?;
            let c = q(1, nq);
            let eq = TensorField::from_fn(Base::M, dx.slots().to_vec(), |i| {
                let v = dx.get(i).clone();
                if i[0] == i[1] {
                    v - div.value().scale(&c)
                } else {
                    v
                }
            });
            let int = contract_first(data, &cx.weyl, n);
            SolutionResiduals { equation: eq, integrability: vec![("xi.W", int)] }
        }
        SolutionKind::RicciFlatScale => {
            let dd = d.covariant_derivative(&d.covariant_derivative(data)?)?;
            let sym = dd.symmetrize(&[0, 1], Parity::Sym)?;
            let eq = sym.add(&cx.curv.schouten.scale(data.value()).with_weights(sym.pweight(), 0))?;
            SolutionResiduals { equation: eq, integrability: vec![] }
        }
        SolutionKind::Bivector => {
            let dw = d.covariant_derivative(data)?;
            // div^b = D_d w^{bd}
            let div: Vec<Rsf> = (0..n).map(|b| (0..n).map(|e| dw.get(&[e, b, e]).clone()).sum()).collect();
            let c = q(1, nq - 1);
            let eq = TensorField::from_fn(Base::M, dw.slots().to_vec(), |i| {
                let (cc, a, b) = (i[0], i[1], i[2]);
                let mut acc = dw.get(i).clone();
                if cc == a {
                    acc = acc + div[b].scale(&c);
                }
                if cc == b {
                    acc = acc - div[a].scale(&c);
                }
                acc
            });
            let mut integrability = vec![("w.W", bivector_integrability(data, &cx.weyl, n))];
            if n == 2 {
                // the first-order equation is empty in dimension two
                let nu = bivector_nu(d, data)?;
                integrability.push(("Dnu", bivector_second(d, &cx, data, &nu)?));
            }
            SolutionResiduals { equation: eq, integrability }
        }
        SolutionKind::KillingOneForm => {
            let da = d.covariant_derivative(data)?;
            SolutionResiduals { equation: da.symmetrize(&[0, 1], Parity::Sym)?, integrability: vec![] }
        }
        SolutionKind::ProjectiveSymmetry => {
            let ddv = d.covariant_derivative(&d.covariant_derivative(data)?)?;
            let vw = contract_first(data, &cx.weyl, n);
            // ddv slots [a, b, c]; vw slots [a, c, b]
            let t = TensorField::from_fn(Base::M, vec![Slot::down(n), Slot::down(n), Slot::up(n)], |i| {
                let (a, b, c) = (i[0], i[1], i[2]);
                let sym = (ddv.get(&[a, b, c]) + ddv.get(&[b, a, c]) + vw.get(&[a, c, b]) + vw.get(&[b, c, a]))
                    .scale(&q(1, 2));
                sym + cx.curv.schouten.get(&[a, b]) * data.get(&[c])
            });
            SolutionResiduals { equation: trace_free_sym3(&t, n), integrability: vec![] }
        }
        SolutionKind::AffineSymmetry => {
            let ddv = d.covariant_derivative(&d.covariant_derivative(data)?)?;
            let eq = TensorField::from_fn(Base::M, ddv.slots().to_vec(), |i| {
                let (a, b, c) = (i[0], i[1], i[2]);
                ddv.get(i) + (0..n).map(|e| data.get(&[e]) * cx.curv.riemann.get(&[e, a, c, b])).sum::<Rsf>()
            });
            SolutionResiduals { equation: eq, integrability: vec![] }
        }
    };
    Ok(out)
}

/// Affine bivector condition `D_c w^{ab} = 0` with integrability
/// `w^{b(a} R_{b(c}^{d)}_{e)} = 0`.
pub fn parallel_bivector_residual(d: &AffineConnection, w: &ProjectiveSolution) -> Result<SolutionResiduals> {
    if w.kind != SolutionKind::Bivector {
        return Err(Error::Precondition("parallel bivector residual needs a bivector".into()));
    }
    let n = base_n(d, w)?;
    let curv = curvature(d)?;
    let eq = d.covariant_derivative(&w.data)?;
    let int = bivector_integrability(&w.data, &curv.riemann, n);
    Ok(SolutionResiduals { equation: eq, integrability: vec![("w.R", int)] })
}

fn scalar(v: Rsf, w: i32) -> TensorField {
    TensorField::scalar(Base::M, v).with_weights(w, 0)
}

/// Fill the companion fields of a verified solution.
pub fn prolong(d: &AffineConnection, s: &ProjectiveSolution) -> Result<ProjectiveSolution> {
    let n = base_n(d, s)?;
    let res = solution_residual(d, s)?;
    if !res.equation_holds() {
        return Err(Error::Precondition(format!(
            "{} residual is nonzero: {}",
            s.kind.name(),
            res.equation.residual_string()
        )));
    }
    let nq = n as i64;
    let mut pr = Prolongation::default();
    match s.kind {
        SolutionKind::ProjectiveSymmetry | SolutionKind::AffineSymmetry => {
            let dv = d.covariant_derivative(&s.data)?;
            let div = divergence(&dv, 0)?.value().clone();
            let psi = div.scale(&q(1, nq));
            let phi = TensorField::from_fn(Base::M, dv.slots().to_vec(), |i| {
                if i[0] == i[1] {
                    dv.get(i) - &psi
                } else {
                    dv.get(i).clone()
                }
            });
            if s.kind == SolutionKind::ProjectiveSymmetry {
                let curv = curvature(d)?;
                let pv = lower_with(&curv.schouten, &s.data, n);
                let c = q(-1, nq + 1);
                let beta = TensorField::from_fn(Base::M, vec![Slot::down(n)], |i| {
                    div.partial(super::connection::xvar(i[0])).scale(&c) - &pv[i[0]]
                });
                pr.beta = Some(beta);
            }
            pr.phi = Some(phi);
            pr.psi = Some(scalar(psi, 0));
        }
        SolutionKind::Bivector => {
            pr.nu = Some(bivector_nu(d, &s.data)?);
        }
        _ => {}
    }
    Ok(ProjectiveSolution { prolongation: Some(pr), ..s.clone() })
}

fn need<'a>(t: &'a Option<TensorField>, what: &str) -> Result<&'a TensorField> {
    t.as_ref().ok_or_else(|| Error::Precondition(format!("prolongation lacks {what}")))
}

/// Residuals of the first-order prolonged system for prolonged symmetries
/// and bivectors.
pub fn prolonged_residuals(d: &AffineConnection, s: &ProjectiveSolution) -> Result<Vec<(&'static str, TensorField)>> {
    let n = base_n(d, s)?;
    let pr = s.prolongation.as_ref().ok_or_else(|| Error::Precondition("solution is not prolonged".into()))?;
    let cx = ctx(d)?;
    let p = &cx.curv.schouten;
    let nq = n as i64;
    let v = &s.data;
    let mut out = Vec::new();
    let first_order = |phi: &TensorField, psi: &Rsf| -> Result<TensorField> {
        let dv = d.covariant_derivative(v)?;
        Ok(TensorField::from_fn(Base::M, dv.slots().to_vec(), |i| {
            let r = dv.get(i) - phi.get(i);
            if i[0] == i[1] {
                r - psi
            } else {
                r
            }
        }))
    };
    match s.kind {
        SolutionKind::ProjectiveSymmetry => {
            let phi = need(&pr.phi, "phi")?;
            let psi = need(&pr.psi, "psi")?.value().clone();
            let beta = need(&pr.beta, "beta")?;
            out.push(("Dv", first_order(phi, &psi)?));
            let pv = lower_with(p, v, n);
            let c = q(nq + 1, nq);
            out.push((
                "Dpsi",
                TensorField::from_fn(Base::M, vec![Slot::down(n)], |i| {
                    psi.partial(super::connection::xvar(i[0])) + (beta.get(i) + &pv[i[0]]).scale(&c)
                }),
            ));
            let dphi = d.covariant_derivative(phi)?;
            let vw = contract_first(v, &cx.weyl, n);
            let cb = qi(nq - 1);
            let inv_n = q(1, nq);
            let tr: Vec<Rsf> = (0..n).map(|b| &pv[b] - beta.get(&[b]).scale(&cb)).collect();
            out.push((
                "Dphi",
                TensorField::from_fn(Base::M, vec![Slot::down(n), Slot::down(n), Slot::up(n)], |i| {
                    let (a, b, c) = (i[0], i[1], i[2]);
                    let mut acc = (dphi.get(&[a, b, c]) + dphi.get(&[b, a, c]) + vw.get(&[a, c, b]) + vw.get(&[b, c, a]))
                        .scale(&q(1, 2))
                        + p.get(&[a, b]) * v.get(&[c]);
                    let mut t = Rsf::zero();
                    if a == c {
                        t = t + &tr[b];
                    }
                    if b == c {
                        t = t + &tr[a];
                    }
                    acc = acc - t.scale(&(&inv_n * q(1, 2)));
                    acc
                }),
            ));
            // Cotton term contracted as v^c Y_bca (Y_cab = 2 D_[a P_b]c)
            let y = cotton(d, &cx.curv)?;
            let dbeta = d.covariant_derivative(beta)?;
            out.push((
                "Dbeta",
                TensorField::from_fn(Base::M, vec![Slot::down(n); 2], |i| {
                    let (a, b) = (i[0], i[1]);
                    let mut acc = dbeta.get(i) - p.get(&[a, b]) * &psi;
                    for c in 0..n {
                        acc = acc - p.get(&[a, c]) * phi.get(&[b, c]) - v.get(&[c]) * y.get(&[b, c, a]);
                    }
                    acc
                }),
            ));
        }
        SolutionKind::AffineSymmetry => {
            let phi = need(&pr.phi, "phi")?;
            let psi = need(&pr.psi, "psi")?.value().clone();
            out.push(("Dv", first_order(phi, &psi)?));
            let dphi = d.covariant_derivative(phi)?;
            out.push((
                "Dphi",
                TensorField::from_fn(Base::M, dphi.slots().to_vec(), |i| {
                    let (a, b, c) = (i[0], i[1], i[2]);
                    dphi.get(i) + (0..n).map(|e| v.get(&[e]) * cx.curv.riemann.get(&[e, a, c, b])).sum::<Rsf>()
                }),
            ));
            out.push((
                "Dpsi",
                TensorField::from_fn(Base::M, vec![Slot::down(n)], |i| psi.partial(super::connection::xvar(i[0]))),
            ));
        }
        SolutionKind::Bivector => {
            let nu = need(&pr.nu, "nu")?;
            let dw = d.covariant_derivative(v)?;
            out.push((
                "Dw",
                TensorField::from_fn(Base::M, dw.slots().to_vec(), |i| {
                    let (c, a, b) = (i[0], i[1], i[2]);
                    let mut acc = dw.get(i).clone();
                    if c == a {
                        acc = acc - nu.get(&[b]);
                    }
                    if c == b {
                        acc = acc + nu.get(&[a]);
                    }
                    acc
                }),
            ));
            out.push(("Dnu", bivector_second(d, &cx, v, nu)?));
        }
        _ => {}
    }
    Ok(out)
}

/// `nu^a = (1/(n-1)) D_c w^{ca}`.
fn bivector_nu(d: &AffineConnection, w: &TensorField) -> Result<TensorField> {
    let n = d.n();
    let dw = d.covariant_derivative(w)?;
    let c = q(1, n as i64 - 1);
    Ok(TensorField::from_fn(Base::M, vec![Slot::up(n)], |i| {
        (0..n).map(|e| dw.get(&[e, e, i[0]]).clone()).sum::<Rsf>().scale(&c)
    })
    .with_weights(w.pweight(), 0))
}

/// `D_a nu^b + P_ac w^{cb} + (1/(2(n-2))) w^{cd} W_cd^b_a`; the Weyl term is
/// dropped in dimension two, where `W = 0`.
fn bivector_second(d: &AffineConnection, cx: &Ctx, w: &TensorField, nu: &TensorField) -> Result<TensorField> {
    let n = d.n();
    let p = &cx.curv.schouten;
    let dnu = d.covariant_derivative(nu)?;
    let wc = (n > 2).then(|| q(1, 2 * (n as i64 - 2)));
    Ok(TensorField::from_fn(Base::M, dnu.slots().to_vec(), |i| {
        let (a, b) = (i[0], i[1]);
        let mut acc = dnu.get(i).clone();
        for c in 0..n {
            acc = acc + p.get(&[a, c]) * w.get(&[c, b]);
        }
        if let Some(wc) = &wc {
            let mut t = Rsf::zero();
            for c in 0..n {
                for e in 0..n {
                    t = t + w.get(&[c, e]) * cx.weyl.get(&[c, e, b, a]);
                }
            }
            acc = acc + t.scale(wc);
        }
        acc
    }))
}

/// Hodge-type identifications through the projective volume form in
/// dimensions two and three.
pub fn dualize_lowdim(d: &AffineConnection, s: &ProjectiveSolution) -> Result<ProjectiveSolution> {
    let n = base_n(d, s)?;
    let eps = d.volume_form();
    let inv = d.inverse_volume_form();
    use SolutionKind::*;
    let (kind, comps): (SolutionKind, Vec<Rsf>) = match (n, s.kind) {
        (2, EulerField) => (KillingOneForm, (0..2).map(|a| (0..2).map(|b| s.data.get(&[b]) * eps.get(&[b, a])).sum()).collect()),
        (2, KillingOneForm) => (EulerField, (0..2).map(|a| (0..2).map(|b| s.data.get(&[b]) * inv.get(&[a, b])).sum()).collect()),
        (2, Bivector) => (RicciFlatScale, vec![s.data.get(&[0, 1]) * eps.get(&[0, 1])]),
        (2, RicciFlatScale) => {
            let sv = s.data.value().clone();
            (Bivector, (0..4).map(|o| &sv * inv.get(&[o / 2, o % 2])).collect())
        }
        (3, Bivector) => (
            KillingOneForm,
            (0..3)
                .map(|a| {
                    let mut acc = Rsf::zero();
                    for b in 0..3 {
                        for c in 0..3 {
                            if levi_civita(&[b, c, a]) != 0 {
                                acc = acc + s.data.get(&[b, c]) * eps.get(&[b, c, a]);
                            }
                        }
                    }
                    acc.scale(&q(1, 2))
                })
                .collect(),
        ),
        (3, KillingOneForm) => (
            Bivector,
            (0..9)
                .map(|o| {
                    let (a, b) = (o / 3, o % 3);
                    (0..3).map(|c| inv.get(&[a, b, c]) * s.data.get(&[c])).sum()
                })
                .collect(),
        ),
        (2 | 3, k) => {
            return Err(Error::Precondition(format!("no duality for {} in dimension {n}", k.name())));
        }
        _ => return Err(Error::Dimension(n)),
    };
    ProjectiveSolution::from_components(kind, n, comps)
}
