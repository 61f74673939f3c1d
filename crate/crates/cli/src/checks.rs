//! The check registry. Check names are stable public identifiers; each check
//! lists the library operations it exercises so the manifest can be audited.

use std::sync::OnceLock;

use pwlab_core::einstein::{
    aes_residual, decompose_scale, lie_derivative_scale, lift_minus, lift_plus, lift_plus_summands, rescaled_schouten_trace_cleared,
};
use pwlab_core::projective::{
    curvature, dualize_lowdim, log_gradient, polynomial_parallel_bivectors, polynomial_solutions, projective_change, projective_weyl,
    projective_weyl_cotton, prolong, prolonged_residuals, solution_residual, special_part, thomas_parameters, weyl_traces, AffineConnection,
    ProjectiveSolution, SolutionKind,
};
use pwlab_core::pwext::{
    build, conformal_covariance_check, curvature_dictionary, frame_christoffels, frame_christoffels_intrinsic, k_properties, k_vector,
    recover_connection, thomas_pw, walker_condition, weyl_vertical_condition, PWGeometry, Recovery, WalkerCondition, WalkerNormalForm,
};
use pwlab_core::spin::{
    eta_checks, eta_equation_residual, lie_derivative_spinor, make_chi_etacheck, projector_identities, spin_covariant_derivative,
    twistor_residual, CliffordModule, Spinor, Surd,
};
use pwlab_core::symcore::{parse_field, q, Base, Parity, Rsf, Slot, TensorField};
use pwlab_core::symmetry::{
    ck_residual, decompose, killing_residual, lie_k, lift, lift_eigenvalue, lift_invariance_check, lightlike_geodetic, tangent_to_u,
    tangent_to_v, SymmetryMode,
};
use pwlab_core::Error;

use crate::scenario::{CandidateData, CandidateKind, Scenario};

/// Nonvanishing identities collected by one check.
#[derive(Debug, Default)]
pub struct Findings(Vec<String>);

impl Findings {
    fn tensor(&mut self, label: impl AsRef<str>, t: &TensorField) {
        if !t.is_zero() {
            self.0.push(format!("{}: {}", label.as_ref(), t.residual_string()));
        }
    }

    fn scalar(&mut self, label: impl AsRef<str>, f: &Rsf) {
        if !f.is_zero() {
            self.0.push(format!("{}: {f}", label.as_ref()));
        }
    }

    fn spinors(&mut self, label: impl AsRef<str>, s: &[Spinor]) {
        for (a, x) in s.iter().enumerate() {
            if !x.is_zero() {
                self.0.push(format!("{}[{}]: {x}", label.as_ref(), a + 1));
            }
        }
    }

    fn flag(&mut self, label: impl AsRef<str>, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.0.push(format!("{}: {}", label.as_ref(), detail()));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All failures, one per line.
    pub fn residual(&self) -> String {
        self.0.join("\n")
    }
}

type Outcome = Result<Findings, Error>;

/// What the checks share: the scenario, the geometry and cached base solutions.
pub struct Context<'a> {
    pub scenario: &'a Scenario,
    pw: Result<PWGeometry, Error>,
    solutions: [OnceLock<Result<Vec<ProjectiveSolution>, Error>>; 6],
    parallel_bivectors: OnceLock<Result<Vec<ProjectiveSolution>, Error>>,
}

impl<'a> Context<'a> {
    pub fn new(scenario: &'a Scenario) -> Context<'a> {
        Context {
            scenario,
            pw: build(&scenario.connection),
            solutions: Default::default(),
            parallel_bivectors: OnceLock::new(),
        }
    }

    fn d(&self) -> &AffineConnection {
        &self.scenario.connection
    }

    fn n(&self) -> usize {
        self.scenario.n
    }

    fn pw(&self) -> Result<&PWGeometry, Error> {
        self.pw.as_ref().map_err(Clone::clone)
    }

    fn solutions(&self, kind: SolutionKind) -> Result<&[ProjectiveSolution], Error> {
        let i = SolutionKind::ALL.iter().position(|k| *k == kind).expect("listed kind");
        let r = cached(&self.solutions[i], || polynomial_solutions(self.d(), kind, self.scenario.options.degree_bound));
        r.as_deref().map_err(Clone::clone)
    }

    /// Base solutions feeding the lifts of `kind` in `mode`.
    fn lift_sources(&self, mode: SymmetryMode, kind: SolutionKind) -> Result<&[ProjectiveSolution], Error> {
        match (mode, kind) {
            (SymmetryMode::Killing, SolutionKind::Bivector) => {
                cached(&self.parallel_bivectors, || polynomial_parallel_bivectors(self.d(), self.scenario.options.degree_bound))
                    .as_deref()
                    .map_err(Clone::clone)
            }
            (SymmetryMode::Killing, SolutionKind::ProjectiveSymmetry) => self.solutions(SolutionKind::AffineSymmetry),
            _ => self.solutions(kind),
        }
    }

    /// `ups = ds/s` for every configured scale, then the polynomial 1-forms.
    fn upsilons(&self) -> Result<Vec<TensorField>, Error> {
        let mut out = Vec::new();
        for s in &self.scenario.options.scales {
            out.push(log_gradient(self.n(), s)?);
        }
        out.extend(self.scenario.options.upsilons.iter().cloned());
        Ok(out)
    }
}

// The solvers use rayon internally; get_or_init could park a worker on the cell
// and then hand it a stolen check waiting for the same cell. A racing duplicate
// computation is harmless since results are deterministic.
fn cached<T>(cell: &OnceLock<T>, f: impl FnOnce() -> T) -> &T {
    if let Some(v) = cell.get() {
        return v;
    }
    let _ = cell.set(f());
    cell.get().expect("just set")
}

pub struct CheckSpec {
    pub name: &'static str,
    /// Short description of the result the check exercises.
    pub anchor: &'static str,
    /// Library operations the check calls and verifies.
    pub covers: &'static [&'static str],
    pub default: bool,
    run: fn(&Context) -> Outcome,
}

pub static REGISTRY: [CheckSpec; 15] = [
    CheckSpec {
        name: "base.curvature",
        anchor: "curvature, Schouten, projective Weyl and Cotton tensors of the base connection",
        covers: &["curvature", "projective_weyl_cotton", "symmetrize"],
        default: true,
        run: base_curvature,
    },
    CheckSpec {
        name: "base.projective_invariance",
        anchor: "projective change of connection; invariance of Weyl tensor and Thomas parameters; special representatives",
        covers: &["projective_change", "special_part", "thomas_parameters"],
        default: true,
        run: base_projective_invariance,
    },
    CheckSpec {
        name: "base.solutions",
        anchor: "projectively invariant equations on the base and their prolonged systems",
        covers: &["solution_residual", "prolong"],
        default: true,
        run: base_solutions,
    },
    CheckSpec {
        name: "base.dualities",
        anchor: "low-dimensional identifications of solutions via the volume form (n = 2, 3)",
        covers: &["dualize_lowdim"],
        default: true,
        run: base_dualities,
    },
    CheckSpec {
        name: "pw.build",
        anchor: "Patterson-Walker metric, its Walker normal form and the Thomas-parameter construction",
        covers: &["build", "recover_connection", "thomas_pw"],
        default: true,
        run: pw_build,
    },
    CheckSpec {
        name: "pw.curvature_dictionary",
        anchor: "closed-form Levi-Civita and curvature data of the Patterson-Walker metric",
        covers: &["frame_christoffels", "curvature_dictionary"],
        default: true,
        run: pw_curvature_dictionary,
    },
    CheckSpec {
        name: "pw.k_properties",
        anchor: "the light-like vertical homothety k and the 2-form mu",
        covers: &["k_properties"],
        default: true,
        run: pw_k_properties,
    },
    CheckSpec {
        name: "pw.conformal_covariance",
        anchor: "conformal class of Patterson-Walker metrics over a projective class (fibre weight 2)",
        covers: &["conformal_covariance_check"],
        default: true,
        run: pw_conformal_covariance,
    },
    CheckSpec {
        name: "spin.twistor",
        anchor: "parallel pure spinor chi, its Lie derivative along k, and the pure spinor eta",
        covers: &["make_chi_etacheck", "twistor_residual", "lie_derivative_spinor", "eta_spinor"],
        default: true,
        run: spin_twistor,
    },
    CheckSpec {
        name: "einstein.roundtrip",
        anchor: "almost Einstein scales as lifts of Euler-type fields and Ricci-flat scales",
        covers: &["aes_residual", "lift_plus", "lift_minus", "decompose_scale", "grade_in_p"],
        default: true,
        run: einstein_roundtrip,
    },
    CheckSpec {
        name: "sym.lifts",
        anchor: "lifts of projective and affine symmetry data to (conformal) Killing fields",
        covers: &["ck_residual", "killing_residual", "lift_conformal", "lift_affine", "lightlike_geodetic", "lift_invariance_check"],
        default: true,
        run: sym_lifts,
    },
    CheckSpec {
        name: "sym.decompose.roundtrip",
        anchor: "unique decomposition of (conformal) Killing fields into graded lifts",
        covers: &["decompose", "grade_in_p"],
        default: true,
        run: sym_decompose_roundtrip,
    },
    CheckSpec {
        name: "base_ricci_flat",
        anchor: "Ricci-flat base connection (Schouten tensor vanishes)",
        covers: &["curvature"],
        default: false,
        run: base_ricci_flat,
    },
    CheckSpec {
        name: "pw_schouten_zero",
        anchor: "Ricci-flat Patterson-Walker metric (Schouten tensor of g vanishes)",
        covers: &["curvature_dictionary"],
        default: false,
        run: pw_schouten_zero,
    },
    CheckSpec {
        name: "candidates",
        anchor: "user-supplied candidates tested against their equations",
        covers: &["solution_residual", "aes_residual", "ck_residual", "killing_residual"],
        default: false,
        run: candidates,
    },
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CheckId(usize);

impl CheckId {
    pub fn parse(s: &str) -> Option<CheckId> {
        REGISTRY.iter().position(|c| c.name == s).map(CheckId)
    }

    pub fn spec(self) -> &'static CheckSpec {
        &REGISTRY[self.0]
    }

    pub fn name(self) -> &'static str {
        self.spec().name
    }

    pub fn run(self, cx: &Context) -> Outcome {
        (self.spec().run)(cx)
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.name).collect()
}

/// The default suite, plus the candidate check when there are candidates.
pub fn defaults(with_candidates: bool) -> Vec<CheckId> {
    (0..REGISTRY.len())
        .filter(|&i| REGISTRY[i].default || (with_candidates && REGISTRY[i].name == "candidates"))
        .map(CheckId)
        .collect()
}

fn base_curvature(cx: &Context) -> Outcome {
    let d = cx.d();
    let n = cx.n();
    let mut f = Findings::default();
    let curv = curvature(d)?;
    f.tensor("R symmetric part in its first pair", &curv.riemann.symmetrize(&[0, 1], Parity::Sym)?);
    f.tensor("first Bianchi identity", &curv.riemann.symmetrize(&[0, 1, 3], Parity::Antisym)?);
    if d.is_special() {
        f.tensor("Ric antisymmetric part", &curv.ricci.symmetrize(&[0, 1], Parity::Antisym)?);
        f.tensor("P - Ric/(n-1)", &curv.schouten.sub(&curv.ricci.scale_q(&q(1, n as i64 - 1)))?);
        let (w, y) = projective_weyl_cotton(d)?;
        for (i, t) in weyl_traces(&w)?.iter().enumerate() {
            f.tensor(format!("W trace {}", i + 1), t);
        }
        f.tensor("W symmetric part in its first pair", &w.symmetrize(&[0, 1], Parity::Sym)?);
        if n == 2 {
            f.tensor("W in dimension 2", &w);
        }
        f.tensor("Y symmetric part in its last pair", &y.symmetrize(&[1, 2], Parity::Sym)?);
    } else {
        let w = projective_weyl(d, &curv);
        for (i, t) in weyl_traces(&w)?.iter().enumerate() {
            f.tensor(format!("W trace {}", i + 1), t);
        }
    }
    Ok(f)
}

fn base_projective_invariance(cx: &Context) -> Outcome {
    let d = cx.d();
    let mut f = Findings::default();
    let w0 = projective_weyl(d, &curvature(d)?);
    let pi0 = thomas_parameters(d);
    for (i, ups) in cx.upsilons()?.iter().enumerate() {
        let h = projective_change(d, ups)?;
        f.tensor(format!("W change under upsilon {}", i + 1), &projective_weyl(&h, &curvature(&h)?).sub(&w0)?);
        f.tensor(format!("Pi change under upsilon {}", i + 1), &thomas_parameters(&h).sub(&pi0)?);
    }
    let (ups, sp) = special_part(d)?;
    f.flag("special part is special", sp.is_special(), || sp.special_defect());
    f.tensor("special part vs projective change", &projective_change(d, &ups)?.gamma().sub(sp.gamma())?);
    f.tensor("Pi of special part", &thomas_parameters(&sp).sub(&pi0)?);
    Ok(f)
}

fn base_solutions(cx: &Context) -> Outcome {
    let d = cx.d();
    let mut f = Findings::default();
    for kind in SolutionKind::ALL {
        for s in cx.solutions(kind)? {
            let label = || format!("{} {}", kind.name(), s.data.residual_string());
            if let Some((part, r)) = solution_residual(d, s)?.first_failure() {
                f.0.push(format!("{} {part}: {r}", label()));
            }
            for (name, r) in prolonged_residuals(d, &prolong(d, s)?)? {
                f.tensor(format!("{} prolonged {name}", label()), &r);
            }
        }
    }
    Ok(f)
}

fn base_dualities(cx: &Context) -> Outcome {
    use SolutionKind::*;
    let d = cx.d();
    let mut f = Findings::default();
    // n = 3 Killing 1-forms dualize to bivectors solving the equation; the
    // integrability part is a further Weyl condition on the 1-form
    let kinds: &[(SolutionKind, bool)] = match cx.n() {
        2 => &[(EulerField, true), (KillingOneForm, true), (Bivector, true), (RicciFlatScale, true)],
        3 => &[(KillingOneForm, false), (Bivector, true)],
        _ => &[],
    };
    for &(kind, full) in kinds {
        for s in cx.solutions(kind)? {
            let t = dualize_lowdim(d, s)?;
            let r = solution_residual(d, &t)?;
            let ok = if full { r.is_zero() } else { r.equation_holds() };
            f.flag(format!("{} {} -> {}", kind.name(), s.data.residual_string(), t.kind.name()), ok, || {
                r.first_failure().map(|(p, x)| format!("{p}: {x}")).unwrap_or_default()
            });
            if !(cx.n() == 3 && kind == Bivector) {
                let back = dualize_lowdim(d, &t)?;
                f.flag(format!("{} round trip", kind.name()), &back == s, || back.data.residual_string());
            }
        }
    }
    Ok(f)
}

fn theta_entry(n: usize, src: &str) -> Result<WalkerNormalForm, Error> {
    let mut t = TensorField::zeros(Base::Mt, vec![Slot::down(n); 2]);
    t.set(&[0, 0], parse_field(src, n)?);
    WalkerNormalForm::new(n, t)
}

fn pw_build(cx: &Context) -> Outcome {
    let d = cx.d();
    let n = cx.n();
    let mut f = Findings::default();
    let (_, sp) = special_part(d)?;
    let reference = build(&sp)?;
    f.flag("thomas_pw equals build of the special part", thomas_pw(d)? == reference, String::new);
    if !d.is_special() {
        f.flag("build rejects a non-special connection", matches!(build(d), Err(Error::NotSpecial(_))), String::new);
        return Ok(f);
    }
    let pw = cx.pw()?;
    let gf = pw.to_frame(pw.metric())?;
    let expect = TensorField::from_fn(Base::Mt, vec![Slot::down_t(n); 2], |i| Rsf::int(pw.frame_metric(i[0], i[1])));
    f.tensor("frame metric minus pairing", &gf.sub(&expect)?);
    for a in 0..n {
        for b in 0..n {
            let th = pw.theta().get(&[a, b]);
            let want: Rsf = (0..n).map(|c| d.g(a, c, b) * Rsf::p(c + 1)).sum();
            f.scalar(format!("Theta[{},{}] - Gamma p", a + 1, b + 1), &(th - want));
            f.scalar(format!("g_pp[{},{}]", a + 1, b + 1), pw.metric().get(&[n + a, n + b]));
        }
    }
    match recover_connection(&WalkerNormalForm::from_geometry(pw))? {
        Recovery::Connection(r) => f.tensor("recovered Gamma - Gamma", &r.gamma().sub(d.gamma())?),
        Recovery::Rejected { condition, detail } => f.0.push(format!("normal form rejected ({condition}): {detail}")),
    }
    for (src, cond) in [
        ("p1^2", WalkerCondition::Linearity),
        ("x1 + p1", WalkerCondition::Homogeneity),
        ("p1", WalkerCondition::Trace),
    ] {
        let got = match recover_connection(&theta_entry(n, src)?)? {
            Recovery::Rejected { condition, .. } => Some(condition),
            Recovery::Connection(_) => None,
        };
        f.flag(format!("Theta_11 = {src} rejected by {cond}"), got == Some(cond), || format!("{got:?}"));
    }
    Ok(f)
}

fn pw_curvature_dictionary(cx: &Context) -> Outcome {
    let pw = cx.pw()?;
    let mut f = Findings::default();
    f.tensor("frame Christoffels closed - intrinsic", &frame_christoffels(pw)?.sub(&frame_christoffels_intrinsic(pw))?);
    for e in curvature_dictionary(pw)?.entries() {
        f.tensor(format!("{} closed - intrinsic", e.name), &e.difference());
    }
    f.flag("Walker condition on R~", walker_condition(pw)?, String::new);
    Ok(f)
}

fn pw_k_properties(cx: &Context) -> Outcome {
    let pw = cx.pw()?;
    let mut f = Findings::default();
    let r = k_properties(pw)?;
    f.tensor("L_k g - 2g", &r.homothety);
    f.tensor("Dk - mu - g", &r.conformal_killing);
    f.scalar("g(k,k)", &r.norm);
    f.tensor("mu eigenvalue defect", &r.eigen_defect);
    Ok(f)
}

fn pw_conformal_covariance(cx: &Context) -> Outcome {
    let d = cx.d();
    let mut f = Findings::default();
    for s in &cx.scenario.options.scales {
        for w in 0..=3 {
            let r = conformal_covariance_check(d, s, w)?;
            f.tensor(format!("s = {s}, w = {w}: transformation rule"), &r.difference);
            f.flag(format!("s = {s}, w = {w}: g^ = s^2 g"), r.equals_s2_g == r.expected_s2_g, || {
                format!("got {}, expected {}", r.equals_s2_g, r.expected_s2_g)
            });
            if s.constant_value().is_none() {
                f.flag(format!("s = {s}, w = {w}: weight 2 is singled out"), r.expected_s2_g == (w == 2), String::new);
            }
        }
    }
    Ok(f)
}

fn spin_twistor(cx: &Context) -> Outcome {
    let pw = cx.pw()?;
    let n = cx.n();
    let mut f = Findings::default();
    let c = CliffordModule::new(n)?;
    let proj = projector_identities(&c);
    f.flag("projector identities", proj.holds(), || format!("{proj:?}"));
    let (chi, _) = make_chi_etacheck(&c);
    f.spinors("D chi", &spin_covariant_derivative(pw, &chi)?);
    f.spinors("twistor residual of chi", &twistor_residual(pw, &chi)?);
    let l = lie_derivative_spinor(pw, &k_vector(pw), &chi)?;
    let expect = chi.scale(&Surd::from(Rsf::constant(q(-(n as i64 + 1), 2))));
    f.spinors("L_k chi + (n+1)/2 chi", &[l.sub(&expect)]);
    let eta = eta_checks(pw)?;
    f.flag("eta identities", eta.holds(), || format!("{eta:?}"));
    f.spinors("eta equation", &eta_equation_residual(pw)?);
    f.flag("W~ vertical condition", weyl_vertical_condition(pw)?, String::new);
    Ok(f)
}

fn einstein_roundtrip(cx: &Context) -> Outcome {
    let pw = cx.pw()?;
    let d = cx.d();
    let mut f = Findings::default();
    let mut pluses = Vec::new();
    for xi in cx.solutions(SolutionKind::EulerField)? {
        // only fields with xi.W = 0 lift
        let (a, b) = lift_plus_summands(d, xi)?;
        if !(a.is_zero() && b.is_zero()) {
            continue;
        }
        let s = lift_plus(pw, xi)?;
        let label = format!("lift of xi = {}", xi.data.residual_string());
        f.tensor(format!("{label}: aes residual"), &aes_residual(pw, &s)?);
        f.scalar(format!("{label}: L_k - 1"), &(lie_derivative_scale(pw, &s) - s.value()));
        f.scalar(format!("{label}: rescaled Schouten trace"), &rescaled_schouten_trace_cleared(pw, &s)?);
        pluses.push((xi, s));
    }
    let mut minuses = Vec::new();
    for sigma in cx.solutions(SolutionKind::RicciFlatScale)? {
        let s = lift_minus(pw, sigma)?;
        let label = format!("lift of sigma = {}", sigma.data.value());
        f.tensor(format!("{label}: aes residual"), &aes_residual(pw, &s)?);
        f.scalar(format!("{label}: L_k + 1"), &(lie_derivative_scale(pw, &s) + s.value()));
        f.scalar(format!("{label}: rescaled Schouten trace"), &rescaled_schouten_trace_cleared(pw, &s)?);
        minuses.push((sigma, s));
    }
    for (xi, sp) in &pluses {
        for (sigma, sm) in &minuses {
            let dec = decompose_scale(pw, &sp.add(sm))?;
            f.flag(format!("decompose: xi = {}", xi.data.residual_string()), dec.xi.as_ref() == Some(*xi), || format!("{:?}", dec.xi));
            f.flag(format!("decompose: sigma = {}", sigma.data.value()), dec.sigma.as_ref() == Some(*sigma), || format!("{:?}", dec.sigma));
        }
    }
    Ok(f)
}

const LIFT_KINDS: [SolutionKind; 3] = [SolutionKind::Bivector, SolutionKind::ProjectiveSymmetry, SolutionKind::KillingOneForm];

fn sym_lifts(cx: &Context) -> Outcome {
    let pw = cx.pw()?;
    let d = cx.d();
    let mut f = Findings::default();
    let k = k_vector(pw);
    let kr = ck_residual(pw, &k)?;
    f.flag("k is conformal Killing", kr.holds(), || kr.residual.residual_string());
    f.tensor("sym D k - g", &killing_residual(pw, &k)?.sub(pw.metric())?);
    for mode in [SymmetryMode::Conformal, SymmetryMode::Killing] {
        for kind in LIFT_KINDS {
            for s in cx.lift_sources(mode, kind)? {
                let label = format!("{} lift of {} {}", mode.name(), s.kind.name(), s.data.residual_string());
                let l = lift(pw, s, mode)?;
                let v = &l.vector;
                let rep = ck_residual(pw, v)?;
                f.tensor(format!("{label}: conformal Killing residual"), &rep.residual);
                for (name, t) in &rep.identities {
                    f.tensor(format!("{label}: prolongation {name}"), t);
                }
                if mode == SymmetryMode::Killing {
                    f.tensor(format!("{label}: Killing residual"), &killing_residual(pw, v)?);
                }
                let ev = lift_eigenvalue(s.kind).expect("liftable kind");
                f.tensor(format!("{label}: L_k eigenvalue {ev}"), &lie_k(pw, v).sub(&v.scale_q(&q(ev, 1)))?);
                match ev {
                    2 => f.flag(format!("{label}: tangency"), tangent_to_u(pw, v)?, String::new),
                    -2 => f.flag(format!("{label}: tangency"), tangent_to_v(pw, v)?, String::new),
                    _ => {
                        let r = lightlike_geodetic(pw, v, s, mode)?;
                        f.flag(format!("{label}: light-like iff criterion"), r.consistent(), || format!("norm {}", r.norm));
                    }
                }
            }
        }
    }
    for kind in LIFT_KINDS {
        for s in cx.solutions(kind)? {
            for scale in &cx.scenario.options.scales {
                let r = lift_invariance_check(d, scale, s)?;
                f.tensor(format!("lift of {} {} under s = {scale}", kind.name(), s.data.residual_string()), &r.difference);
            }
        }
    }
    Ok(f)
}

fn sym_decompose_roundtrip(cx: &Context) -> Outcome {
    let pw = cx.pw()?;
    let mut f = Findings::default();
    let k = k_vector(pw);
    let dec = decompose(pw, &k, SymmetryMode::Conformal)?;
    f.flag("k decomposes with c = 1", dec.c == q(1, 1) && dec.zero.is_zero() && dec.plus.is_zero() && dec.minus.is_zero(), || {
        format!("c = {}", dec.c)
    });
    for (mode, c) in [(SymmetryMode::Conformal, -2), (SymmetryMode::Killing, 0)] {
        let mut total = k.scale_q(&q(c, 1));
        let mut picked = Vec::new();
        for kind in LIFT_KINDS {
            let s = cx.lift_sources(mode, kind)?.last().cloned();
            if let Some(s) = &s {
                total = total.add(&lift(pw, s, mode)?.vector)?;
            }
            picked.push(s);
        }
        let dec = decompose(pw, &total, mode)?;
        let label = format!("{} sum", mode.name());
        f.flag(format!("{label}: c"), dec.c == q(c, 1), || format!("got {}", dec.c));
        f.flag(format!("{label}: bivector"), dec.bivector == picked[0], || format!("{:?}", dec.bivector));
        f.flag(format!("{label}: symmetry"), dec.symmetry == picked[1], || format!("{:?}", dec.symmetry));
        f.flag(format!("{label}: 1-form"), dec.oneform == picked[2], || format!("{:?}", dec.oneform));
        let parts = dec.plus.add(&dec.zero)?.add(&dec.minus)?.add(&k.scale_q(&dec.c))?;
        f.tensor(format!("{label}: parts sum to the input"), &parts.sub(&total)?);
    }
    Ok(f)
}

fn base_ricci_flat(cx: &Context) -> Outcome {
    let mut f = Findings::default();
    f.tensor("P", &curvature(cx.d())?.schouten);
    Ok(f)
}

fn pw_schouten_zero(cx: &Context) -> Outcome {
    let pw = cx.pw()?;
    let mut f = Findings::default();
    f.tensor("P~", &pw.curvature().schouten);
    Ok(f)
}

fn candidates(cx: &Context) -> Outcome {
    let d = cx.d();
    let mut f = Findings::default();
    for c in &cx.scenario.candidates {
        match (&c.kind, &c.data) {
            (CandidateKind::Base(_), CandidateData::Base(s)) => {
                if let Some((part, r)) = solution_residual(d, s)?.first_failure() {
                    f.0.push(format!("{}: {part}: {r}", c.label));
                }
            }
            (CandidateKind::AesScale, CandidateData::Scale(s)) => {
                f.tensor(&c.label, &aes_residual(cx.pw()?, &pwlab_core::einstein::ConformalScale::new(s.clone()))?);
            }
            (CandidateKind::CkVector, CandidateData::Vector(v)) => {
                let r = ck_residual(cx.pw()?, v)?;
                f.tensor(&c.label, &r.residual);
                for (name, t) in &r.identities {
                    f.tensor(format!("{} prolongation {name}", c.label), t);
                }
            }
            (CandidateKind::KillingVector, CandidateData::Vector(v)) => f.tensor(&c.label, &killing_residual(cx.pw()?, v)?),
            _ => unreachable!("validated candidate"),
        }
    }
    Ok(f)
}
