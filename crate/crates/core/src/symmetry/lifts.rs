use crate::error::{Error, Result};
use crate::projective::{
    log_gradient, parallel_bivector_residual, projective_change, prolong, solution_residual,
    AffineConnection, Prolongation, ProjectiveSolution, SolutionKind, SolutionResiduals,
};
use crate::pwext::connection_theta;
use crate::symcore::{q, Base, Rsf, Slot, TensorField, Var};

/// Which symmetry equation a lift or decomposition targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryMode {
    /// Conformal Killing fields of the conformal class.
    Conformal,
    /// Killing fields of the fixed metric.
    Killing,
}

impl SymmetryMode {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryMode::Conformal => "conformal",
            SymmetryMode::Killing => "killing",
        }
    }
}

fn need<'a>(t: &'a Option<TensorField>, what: &str) -> Result<&'a TensorField> {
    t.as_ref().ok_or_else(|| Error::Precondition(format!("prolongation lacks {what}")))
}

/// Coordinate components of a lift, built from the fibre-linear
/// connection form `theta[A][B]` and the base data with its prolongation.
///
/// The lift is `X^A h_A + a_B d/dp_B` with `h_A = d/dx^A + theta_AB d/dp_B`.
pub(crate) fn lift_components(
    n: usize,
    theta: &TensorField,
    mode: SymmetryMode,
    s: &ProjectiveSolution,
    pr: &Prolongation,
) -> Result<TensorField> {
    let p: Vec<Rsf> = (1..=n).map(Rsf::p).collect();
    let (horiz, vert): (Vec<Rsf>, Vec<Rsf>) = match s.kind {
        SolutionKind::ProjectiveSymmetry | SolutionKind::AffineSymmetry => {
            let phi = need(&pr.phi, "phi")?;
            let psi = need(&pr.psi, "psi")?.value();
            let c = match mode {
                SymmetryMode::Conformal => q(n as i64 - 1, n as i64 + 1),
                SymmetryMode::Killing => q(-1, 1),
            };
            let horiz = (0..n).map(|a| s.data.get(&[a]).clone()).collect();
            let vert = (0..n)
                .map(|b| {
                    let mut acc = (psi * &p[b]).scale(&c);
                    for a in 0..n {
                        acc = acc - phi.get(&[b, a]) * &p[a];
                    }
                    acc
                })
                .collect();
            (horiz, vert)
        }
        SolutionKind::Bivector => {
            let horiz = (0..n).map(|b| (0..n).map(|a| s.data.get(&[a, b]) * &p[a]).sum()).collect();
            let vert = match mode {
                SymmetryMode::Conformal => {
                    let nu = need(&pr.nu, "nu")?;
                    let nup: Rsf = (0..n).map(|b| nu.get(&[b]) * &p[b]).sum();
                    p.iter().map(|pc| -(&nup * pc)).collect()
                }
                SymmetryMode::Killing => vec![Rsf::zero(); n],
            };
            (horiz, vert)
        }
        SolutionKind::KillingOneForm => (vec![Rsf::zero(); n], (0..n).map(|a| s.data.get(&[a]).clone()).collect()),
        k => return Err(Error::Precondition(format!("{} has no vector-field lift", k.name()))),
    };
    let mut comps = horiz.clone();
    for b in 0..n {
        let mut acc = vert[b].clone();
        for (a, x) in horiz.iter().enumerate() {
            if !x.is_zero() {
                acc = acc + x * theta.get(&[a, b]);
            }
        }
        comps.push(acc);
    }
    TensorField::from_components(Base::Mt, vec![Slot::up_t(n)], comps)
}

fn check(res: SolutionResiduals, kind: SolutionKind) -> Result<()> {
    match res.first_failure() {
        Some((part, r)) => Err(Error::Precondition(format!("{} {part} residual is nonzero: {r}", kind.name()))),
        None => Ok(()),
    }
}

/// Verify the base equation the mode requires and fill the prolongation.
pub(crate) fn verified_prolongation(d: &AffineConnection, s: &ProjectiveSolution, mode: SymmetryMode) -> Result<Prolongation> {
    use SolutionKind::*;
    match (mode, s.kind) {
        (SymmetryMode::Conformal, ProjectiveSymmetry | Bivector | KillingOneForm)
        | (SymmetryMode::Killing, AffineSymmetry | KillingOneForm) => check(solution_residual(d, s)?, s.kind)?,
        (SymmetryMode::Killing, Bivector) => check(parallel_bivector_residual(d, s)?, s.kind)?,
        (m, k) => return Err(Error::Precondition(format!("{} lift is not defined for {}", m.name(), k.name()))),
    }
    Ok(prolong(d, s)?.prolongation.unwrap_or_default())
}

/// Base data transformed under `D -> D + ups` with `ups = ds/s`, written in
/// the trivialization of the changed connection.
fn transformed_data(d: &AffineConnection, s: &ProjectiveSolution, pr: &Prolongation, scale: &Rsf) -> Result<(ProjectiveSolution, Prolongation)> {
    let n = d.n();
    let ups = log_gradient(n, scale)?;
    let sw = scale.pow(s.kind.pweight());
    let data = s.data.scale(&sw);
    let mut out = Prolongation::default();
    match s.kind {
        SolutionKind::ProjectiveSymmetry => {
            let v = &s.data;
            let uv: Rsf = (0..n).map(|a| ups.get(&[a]) * v.get(&[a])).sum();
            let phi = need(&pr.phi, "phi")?;
            let ninv = q(1, n as i64);
            out.phi = Some(TensorField::from_fn(Base::M, phi.slots().to_vec(), |i| {
                let (b, a) = (i[0], i[1]);
                let mut acc = phi.get(i) + ups.get(&[b]) * v.get(&[a]);
                if a == b {
                    acc = acc - uv.scale(&ninv);
                }
                acc
            }));
            let psi = need(&pr.psi, "psi")?;
            out.psi = Some(psi.map(|f| f + uv.scale(&q(n as i64 + 1, n as i64))));
        }
        SolutionKind::Bivector => {
            let nu = need(&pr.nu, "nu")?;
            out.nu = Some(TensorField::from_fn(Base::M, nu.slots().to_vec(), |i| {
                let wu: Rsf = (0..n).map(|b| s.data.get(&[i[0], b]) * ups.get(&[b])).sum();
                (nu.get(i) - wu) * &sw
            }));
        }
        _ => {}
    }
    Ok((ProjectiveSolution { kind: s.kind, data, prolongation: None }, out))
}

/// Express a vector field given in coordinates `(x, p^)`, `p^ = s^2 p`, in
/// the coordinates `(x, p)`.
fn pull_back_vector(n: usize, v: &TensorField, scale: &Rsf) -> Result<TensorField> {
    let s2 = scale.pow(2);
    let inv = s2.inv().ok_or(Error::DivisionByZero)?;
    let ups = log_gradient(n, scale)?;
    let subst = |f: &Rsf| {
        let mut out = f.clone();
        // simultaneous: the images contain no hatted variables
        for a in 0..n {
            out = out.substitute(Var::P(a as u8 + 1), &(&s2 * Rsf::p(a + 1)));
        }
        out
    };
    let w: Vec<Rsf> = v.components().iter().map(subst).collect();
    let mut comps: Vec<Rsf> = w[..n].to_vec();
    for a in 0..n {
        let mut acc = &w[n + a] * &inv;
        for b in 0..n {
            acc = acc - (ups.get(&[b]) * &w[b] * Rsf::p(a + 1)).scale(&q(2, 1));
        }
        comps.push(acc);
    }
    TensorField::from_components(Base::Mt, vec![Slot::up_t(n)], comps)
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub kind: SolutionKind,
    /// Lift over the changed connection, pulled back, minus the original lift.
    pub difference: TensorField,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Rebuild the conformal lift of `s` over `D + ds/s` from the transformed
/// base data in rescaled fibre coordinates, pull it back and compare.
pub fn lift_invariance_check(d: &AffineConnection, scale: &Rsf, s: &ProjectiveSolution) -> Result<InvarianceReport> {
    let n = d.n();
    let pr = verified_prolongation(d, s, SymmetryMode::Conformal)?;
    let original = lift_components(n, &connection_theta(d), SymmetryMode::Conformal, s, &pr)?;
    let dhat = projective_change(d, &log_gradient(n, scale)?)?;
    let (shat, prhat) = transformed_data(d, s, &pr, scale)?;
    let hatted = lift_components(n, &connection_theta(&dhat), SymmetryMode::Conformal, &shat, &prhat)?;
    let pulled = pull_back_vector(n, &hatted, scale)?;
    Ok(InvarianceReport { kind: s.kind, difference: pulled.sub(&original)? })
}
