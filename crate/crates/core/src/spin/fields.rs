use super::clifford::{surd_rank, Chirality, CliffordModule, Spinor};
use super::surd::Surd;
use crate::error::{Error, Result};
use crate::pwext::{self, PWGeometry};
use crate::symcore::{q, Rsf, TensorField};

/// `chi = 1` in `Lambda^0`, and `etacheck = -1/2` times the degree-0
/// coefficient, so that `etacheck(chi) = -1/2`.
pub fn make_chi_etacheck(c: &CliffordModule) -> (Spinor, Spinor) {
    let chi = Spinor::basis(c.n(), 0, false);
    let eta = Spinor::basis(c.n(), 0, true).scale(&Surd::from(Rsf::constant(q(-1, 2))));
    (chi, eta)
}

/// `chi_a = gamma_a chi` for every frame index.
pub fn chi_projector(c: &CliffordModule, chi: &Spinor) -> Vec<Spinor> {
    (0..2 * c.n()).map(|a| c.gamma(a, chi)).collect()
}

/// `etacheck_a = etacheck o gamma_a`.
pub fn etacheck_projector(c: &CliffordModule, eta: &Spinor) -> Vec<Spinor> {
    (0..2 * c.n()).map(|a| c.gamma(a, eta)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorReport {
    /// `etacheck(chi) + 1/2`.
    pub pairing_defect: Surd,
    pub chi_annihilated_by_v: bool,
    pub etacheck_annihilated_by_h: bool,
    /// `chi_a^A chi^aB = 0`.
    pub chi_isotropic: bool,
    /// `etacheck^a_A etacheck_aB = 0`.
    pub etacheck_isotropic: bool,
    /// `chi_a^A etacheck^a_B` acts as the identity on the image of `chi_a`.
    pub identity_on_image: bool,
}

impl ProjectorReport {
    pub fn holds(&self) -> bool {
        self.pairing_defect.is_zero()
            && self.chi_annihilated_by_v
            && self.etacheck_annihilated_by_h
            && self.chi_isotropic
            && self.etacheck_isotropic
            && self.identity_on_image
    }
}

pub fn projector_identities(c: &CliffordModule) -> ProjectorReport {
    let n = c.n();
    let dim = 2 * n;
    let (chi, eta) = make_chi_etacheck(c);
    let chis = chi_projector(c, &chi);
    let etas = etacheck_projector(c, &eta);
    let pairing_defect = &eta.pair(&chi) + &Surd::from(Rsf::constant(q(1, 2)));
    let chi_annihilated_by_v = (n..dim).all(|a| chis[a].is_zero());
    let etacheck_annihilated_by_h = (0..n).all(|a| etas[a].is_zero());
    // sum over a of G^{ab} u_a (x) u_b vanishes iff every pairing term does
    let outer_zero = |xs: &[Spinor]| {
        (0..c.spinor_dim()).all(|i| {
            (0..c.spinor_dim()).all(|j| {
                (0..dim).map(|a| xs[a].get(i) * xs[c.raised(a)].get(j)).sum::<Surd>().is_zero()
            })
        })
    };
    let chi_isotropic = outer_zero(&chis);
    let etacheck_isotropic = outer_zero(&etas);
    // M psi = sum_a chi_a etacheck^a(psi)
    let apply = |psi: &Spinor| -> Spinor {
        (0..dim).fold(Spinor::zeros(n, false), |acc, a| acc.add(&chis[a].scale(&etas[c.raised(a)].pair(psi))))
    };
    let identity_on_image = chis.iter().all(|x| apply(x) == *x);
    ProjectorReport {
        pairing_defect,
        chi_annihilated_by_v,
        etacheck_annihilated_by_h,
        chi_isotropic,
        etacheck_isotropic,
        identity_on_image,
    }
}

/// `dim ker (v -> gamma(v) psi)` over the frame.
pub fn purity_kernel_dim(c: &CliffordModule, psi: &Spinor) -> usize {
    let rows: Vec<Vec<Surd>> = (0..2 * c.n()).map(|a| c.gamma(a, psi).components().to_vec()).collect();
    2 * c.n() - surd_rank(rows)
}

fn frame_derivative(pw: &PWGeometry, a: usize, psi: &Spinor) -> Spinor {
    psi.map(|s| s.map(|f| pw.apply_frame(a, f)))
}

/// Frame-indexed `D_a psi = e_a(psi) - 1/4 Gamma~_abc gamma^b gamma^c psi`;
/// for a dual spinor the connection term enters with the opposite sign.
pub fn spin_covariant_derivative(pw: &PWGeometry, psi: &Spinor) -> Result<Vec<Spinor>> {
    let c = CliffordModule::new(pw.n())?;
    if psi.n() != pw.n() {
        return Err(Error::Shape(format!("spinor on n={} used on n={}", psi.n(), pw.n())));
    }
    let gam = pwext::frame_christoffels(pw)?;
    Ok(spin_derivative_with(pw, &c, &gam, psi))
}

fn spin_derivative_with(pw: &PWGeometry, c: &CliffordModule, gam: &TensorField, psi: &Spinor) -> Vec<Spinor> {
    let dim = pw.dim();
    let coeff = if psi.is_dual() { q(1, 4) } else { q(-1, 4) };
    (0..dim)
        .map(|a| {
            let mut out = frame_derivative(pw, a, psi);
            for b in 0..dim {
                for cc in 0..dim {
                    let g = gam.get(&[a, b, cc]);
                    if g.is_zero() {
                        continue;
                    }
                    let term = c.gamma_raised_pair(b, cc, psi);
                    out = out.add(&term.scale(&Surd::from(g.scale(&coeff))));
                }
            }
            out
        })
        .collect()
}

/// Dirac operator `gamma^c D_c psi` (for dual spinors `(D_c lambda) o gamma^c`).
pub fn dirac(pw: &PWGeometry, psi: &Spinor) -> Result<Spinor> {
    let c = CliffordModule::new(pw.n())?;
    let d = spin_covariant_derivative(pw, psi)?;
    Ok((0..pw.dim()).fold(Spinor::zeros(pw.n(), psi.is_dual()), |acc, k| acc.add(&c.gamma(c.raised(k), &d[k]))))
}

/// `D_a psi + 1/(2n) gamma_a (Dirac psi)` per frame index.
pub fn twistor_residual(pw: &PWGeometry, psi: &Spinor) -> Result<Vec<Spinor>> {
    let c = CliffordModule::new(pw.n())?;
    let d = spin_covariant_derivative(pw, psi)?;
    let dir = (0..pw.dim()).fold(Spinor::zeros(pw.n(), psi.is_dual()), |acc, k| acc.add(&c.gamma(c.raised(k), &d[k])));
    let f = Surd::from(Rsf::constant(q(1, 2 * pw.n() as i64)));
    Ok((0..pw.dim()).map(|a| d[a].add(&c.gamma(a, &dir).scale(&f))).collect())
}

/// Lie derivative of a spinor along a conformal Killing field `k`, given in
/// coordinates:
/// `k^a D_a psi - 1/4 D_[a k_b] gamma^a gamma^b psi - 1/(4n) (D.k) psi`.
pub fn lie_derivative_spinor(pw: &PWGeometry, k: &TensorField, psi: &Spinor) -> Result<Spinor> {
    let n = pw.n();
    let dim = pw.dim();
    let c = CliffordModule::new(n)?;
    let kl = pw.lower(k, 0)?;
    let dk = pw.covariant_derivative(&kl)?;
    let div: Rsf = (0..dim).flat_map(|a| (0..dim).map(move |b| (a, b))).map(|(a, b)| pw.inverse_metric().get(&[a, b]) * dk.get(&[a, b])).sum();
    let trace_part = div.scale(&q(1, dim as i64));
    for a in 0..dim {
        for b in 0..dim {
            let sym = (dk.get(&[a, b]) + dk.get(&[b, a])).scale(&q(1, 2));
            if sym != &trace_part * pw.metric().get(&[a, b]) {
                return Err(Error::Precondition(format!(
                    "vector field is not conformal Killing: D_({} k_{}) has no pure-trace form",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    let skew = pw.to_frame(&TensorField::from_fn(dk.base(), dk.slots().to_vec(), |i| {
        (dk.get(&[i[0], i[1]]) - dk.get(&[i[1], i[0]])).scale(&q(1, 2))
    }))?;
    let kf = pw.to_frame(k)?;
    let d = spin_covariant_derivative(pw, psi)?;
    let mut out = Spinor::zeros(n, psi.is_dual()).with_cweight(psi.cweight());
    for a in 0..dim {
        out = out.add(&d[a].scale(&Surd::from(kf.get(&[a]).clone())));
        for b in 0..dim {
            let m = skew.get(&[a, b]);
            if !m.is_zero() {
                out = out.add(&c.gamma_raised_pair(a, b, psi).scale(&Surd::from(m.scale(&q(-1, 4)))));
            }
        }
    }
    Ok(out.add(&psi.scale(&Surd::from(div.scale(&q(-1, 4 * n as i64))))))
}

/// `eta = 1/(2 sqrt2) k^b etacheck_b`, a dual spinor on `S_-` of weight 1.
pub fn eta_spinor(pw: &PWGeometry) -> Result<Spinor> {
    let c = CliffordModule::new(pw.n())?;
    let (_, ec) = make_chi_etacheck(&c);
    let kf = pw.to_frame(&pwext::k_vector(pw))?;
    let f = Surd::sqrt2().scale(&q(1, 4));
    let eta = (0..pw.dim()).fold(Spinor::zeros(pw.n(), true), |acc, b| {
        acc.add(&c.gamma(b, &ec).scale(&Surd::from(kf.get(&[b]).clone())))
    });
    Ok(eta.scale(&f).with_cweight(1))
}

#[derive(Clone, Debug)]
pub struct EtaReport {
    /// `eta(s_A) - p_A / sqrt2` with `s_A = sqrt2 e_A`.
    pub identification: Vec<Surd>,
    /// `2 sqrt2 eta(chi^a) - k^a` per frame index.
    pub k_reconstruction: Vec<Surd>,
    /// `sum_a eta(gamma^a phi) etacheck(gamma_a psi) + 2 eta(psi) etacheck(phi)`
    /// on basis `phi` in `S_+`, `psi` in `S_-`.
    pub isotropy_relation: Vec<Surd>,
}

impl EtaReport {
    pub fn holds(&self) -> bool {
        self.identification.iter().chain(&self.k_reconstruction).chain(&self.isotropy_relation).all(Surd::is_zero)
    }
}

pub fn eta_checks(pw: &PWGeometry) -> Result<EtaReport> {
    let n = pw.n();
    let c = CliffordModule::new(n)?;
    let (chi, ec) = make_chi_etacheck(&c);
    let eta = eta_spinor(pw)?;
    let inv_s2 = Surd::sqrt2().scale(&q(1, 2));
    let identification = (0..n)
        .map(|a| {
            let s = Spinor::basis(n, 1 << a, false).scale(&Surd::sqrt2());
            eta.pair(&s) - Surd::from(Rsf::p(a + 1)) * &inv_s2
        })
        .collect();
    let kf = pw.to_frame(&pwext::k_vector(pw))?;
    let two_s2 = Surd::sqrt2().scale(&q(2, 1));
    let k_reconstruction = (0..pw.dim())
        .map(|a| &(&two_s2 * &eta.pair(&c.gamma(c.raised(a), &chi))) - &Surd::from(kf.get(&[a]).clone()))
        .collect();
    let mut isotropy_relation = Vec::new();
    for phi_m in (0..c.spinor_dim()).filter(|m| m.count_ones() % 2 == 0) {
        for psi_m in (0..c.spinor_dim()).filter(|m| m.count_ones() % 2 == 1) {
            let phi = Spinor::basis(n, phi_m, false);
            let psi = Spinor::basis(n, psi_m, false);
            let lhs: Surd = (0..pw.dim()).map(|a| eta.pair(&c.gamma(c.raised(a), &phi)) * ec.pair(&c.gamma(a, &psi))).sum();
            let rhs = (eta.pair(&psi) * ec.pair(&phi)).scale(&q(2, 1));
            isotropy_relation.push(lhs + rhs);
        }
    }
    Ok(EtaReport { identification, k_reconstruction, isotropy_relation })
}

/// `1/8 k^d W~_dabc (gamma^b gamma^c) eta` per frame index `a`.
pub fn eta_equation_rhs(pw: &PWGeometry) -> Result<Vec<Spinor>> {
    let c = CliffordModule::new(pw.n())?;
    let eta = eta_spinor(pw)?;
    let w = pw.to_frame(&pw.curvature().weyl)?;
    let kf = pw.to_frame(&pwext::k_vector(pw))?;
    let dim = pw.dim();
    Ok((0..dim)
        .map(|a| {
            let mut out = Spinor::zeros(pw.n(), true).with_cweight(eta.cweight());
            for b in 0..dim {
                for cc in 0..dim {
                    let coef: Rsf = (0..dim).map(|d| kf.get(&[d]) * w.get(&[d, a, b, cc])).sum();
                    if !coef.is_zero() {
                        out = out.add(&c.gamma_raised_pair(b, cc, &eta).scale(&Surd::from(coef.scale(&q(1, 8)))));
                    }
                }
            }
            out.restrict(Chirality::Minus)
        })
        .collect())
}

/// `D_a eta - 1/sqrt2 etacheck_a - rhs_a`, evaluated on `S_-`.
pub fn eta_equation_residual(pw: &PWGeometry) -> Result<Vec<Spinor>> {
    let c = CliffordModule::new(pw.n())?;
    let (_, ec) = make_chi_etacheck(&c);
    let eta = eta_spinor(pw)?;
    let d = spin_covariant_derivative(pw, &eta)?;
    let rhs = eta_equation_rhs(pw)?;
    let inv_s2 = Surd::sqrt2().scale(&q(1, 2));
    Ok((0..pw.dim())
        .map(|a| d[a].sub(&c.gamma(a, &ec).scale(&inv_s2)).sub(&rhs[a]).restrict(Chirality::Minus))
        .collect())
}
