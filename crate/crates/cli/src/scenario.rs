//! Scenario files: a base connection, optional candidate objects and the
//! checks to run on them.

use std::fmt;
use std::path::Path;

use pwlab_core::projective::{AffineConnection, ProjectiveSolution, SolutionKind};
use pwlab_core::symcore::{parse_field, Base, Rsf, Slot, TensorField};
use serde::Deserialize;

use crate::checks::{self, CheckId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    Io(String),
    /// Malformed JSON, with the position reported by the parser.
    Json { line: usize, column: usize, message: String },
    /// A polynomial literal failed to parse; `column` is 1-based within `field`.
    Polynomial { field: String, column: usize, message: String },
    Dimension(String),
    Gamma(String),
    UnknownCheck { name: String, valid: Vec<&'static str> },
    Candidate(String),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Io(m) => write!(f, "cannot read scenario: {m}"),
            ScenarioError::Json { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ScenarioError::Polynomial { field, column, message } => {
                write!(f, "in {field}: parse error at column {column}: {message}")
            }
            ScenarioError::Dimension(m) => write!(f, "dimension mismatch: {m}"),
            ScenarioError::Gamma(m) => write!(f, "connection: {m}"),
            ScenarioError::UnknownCheck { name, valid } => {
                write!(f, "unknown check `{name}`; valid checks: {}", valid.join(", "))
            }
            ScenarioError::Candidate(m) => write!(f, "candidate: {m}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGamma {
    /// 1-based lower indices `A, B` of `Gamma_A^C_B`.
    lower: [usize; 2],
    upper: usize,
    value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCandidate {
    #[serde(default)]
    label: Option<String>,
    kind: String,
    components: Vec<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    degree_bound: Option<u32>,
    jobs: Option<usize>,
    scales: Option<Vec<String>>,
    upsilons: Option<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    n: usize,
    #[serde(default)]
    coordinates: Option<Vec<String>>,
    #[serde(default)]
    connection: Vec<RawGamma>,
    #[serde(default)]
    volume: Option<String>,
    #[serde(default)]
    candidates: Vec<RawCandidate>,
    #[serde(default)]
    checks: Option<Vec<String>>,
    #[serde(default)]
    options: RawOptions,
}

/// What a candidate is offered as.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateKind {
    Base(SolutionKind),
    /// Function on the cotangent bundle offered as an almost Einstein scale.
    AesScale,
    /// Vector field on the cotangent bundle offered as a conformal Killing field.
    CkVector,
    /// Vector field on the cotangent bundle offered as a Killing field.
    KillingVector,
}

impl CandidateKind {
    pub const LIFTED: [(&'static str, CandidateKind); 3] = [
        ("aes-scale", CandidateKind::AesScale),
        ("ck-vector", CandidateKind::CkVector),
        ("killing-vector", CandidateKind::KillingVector),
    ];

    fn parse(s: &str) -> Option<CandidateKind> {
        if let Some(k) = SolutionKind::parse(s) {
            return Some(CandidateKind::Base(k));
        }
        CandidateKind::LIFTED.into_iter().find(|(name, _)| *name == s).map(|(_, k)| k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CandidateData {
    Base(Box<ProjectiveSolution>),
    Scale(Rsf),
    Vector(TensorField),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub label: String,
    pub kind: CandidateKind,
    pub data: CandidateData,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub degree_bound: u32,
    pub jobs: Option<usize>,
    /// Nonvanishing scales `s` on the base, used with `ups = ds/s`.
    pub scales: Vec<Rsf>,
    /// Polynomial 1-forms used as projective changes.
    pub upsilons: Vec<TensorField>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    pub connection: AffineConnection,
    pub candidates: Vec<Candidate>,
    pub checks: Vec<CheckId>,
    pub options: Options,
}

fn field(src: &str, n: usize, what: impl Fn() -> String) -> Result<Rsf, ScenarioError> {
    parse_field(src, n).map_err(|e| match e {
        pwlab_core::Error::Parse { column, message } => ScenarioError::Polynomial { field: what(), column, message },
        other => ScenarioError::Polynomial { field: what(), column: 1, message: other.to_string() },
    })
}

fn default_scales(n: usize) -> Vec<Rsf> {
    let src = ["1 + x1^2", if n >= 2 { "2 + x2 - x1*x2" } else { "2 + x1" }];
    src.iter().map(|s| parse_field(s, n).expect("default scale")).collect()
}

fn default_upsilons(n: usize) -> Vec<TensorField> {
    // three fixed "random" polynomial 1-forms, padded with zeros
    let rows: [&[&str]; 3] = [&["x2", "1 + x1", "x1*x2"], &["x1*x2", "0", "-x3"], &["1", "x1^2 - x2", "2"]];
    rows.iter()
        .map(|r| {
            let comps = (0..n).map(|a| parse_field(r.get(a).copied().unwrap_or("0"), n).unwrap_or_else(|_| Rsf::zero())).collect();
            TensorField::from_components(Base::M, vec![Slot::down(n)], comps).expect("one-form")
        })
        .collect()
}

impl Scenario {
    pub fn from_json(src: &str) -> Result<Scenario, ScenarioError> {
        let raw: RawScenario = serde_json::from_str(src)
            .map_err(|e| ScenarioError::Json { line: e.line(), column: e.column(), message: e.to_string() })?;
        Scenario::validate(raw)
    }

    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let src = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(format!("{}: {e}", path.display())))?;
        Scenario::from_json(&src)
    }

    fn validate(raw: RawScenario) -> Result<Scenario, ScenarioError> {
        let n = raw.n;
        if !(2..=pwlab_core::symcore::MAX_DIM).contains(&n) {
            return Err(ScenarioError::Dimension(format!("n = {n} is outside 2..={}", pwlab_core::symcore::MAX_DIM)));
        }
        if let Some(coords) = &raw.coordinates {
            let want: Vec<String> = (1..=n).map(|a| format!("x{a}")).collect();
            if coords != &want {
                return Err(ScenarioError::Dimension(format!("coordinates {coords:?} do not match n = {n} (expected {want:?})")));
            }
        }
        let mut entries: Vec<(usize, usize, usize, Rsf)> = Vec::new();
        for g in &raw.connection {
            let [a, b] = g.lower;
            let c = g.upper;
            if [a, b, c].iter().any(|&i| i == 0 || i > n) {
                return Err(ScenarioError::Dimension(format!("gamma index ({a},{b})^{c} out of range 1..={n}")));
            }
            let v = field(&g.value, n, || format!("gamma ({a},{b})^{c}"))?;
            if v.depends_on_fibre() {
                return Err(ScenarioError::Gamma(format!("gamma ({a},{b})^{c} depends on fibre variables")));
            }
            let (a, b, c) = (a - 1, b - 1, c - 1);
            if let Some((_, _, _, prev)) = entries.iter().find(|(x, y, z, _)| *y == c && ((*x, *z) == (a, b) || (*x, *z) == (b, a))) {
                if prev != &v {
                    return Err(ScenarioError::Gamma(format!(
                        "non-symmetric gamma entry: ({},{})^{} given as {prev} and {v}",
                        a + 1,
                        b + 1,
                        c + 1
                    )));
                }
                continue;
            }
            entries.push((a, c, b, v));
        }
        let volume = match &raw.volume {
            Some(s) => field(s, n, || "volume".into())?,
            None => Rsf::one(),
        };
        let connection = AffineConnection::from_entries(n, &entries, volume).map_err(|e| ScenarioError::Gamma(e.to_string()))?;

        let mut candidates = Vec::new();
        for (i, rc) in raw.candidates.iter().enumerate() {
            let label = rc.label.clone().unwrap_or_else(|| format!("candidate {}", i + 1));
            let kind = CandidateKind::parse(&rc.kind).ok_or_else(|| {
                let mut valid: Vec<&str> = SolutionKind::ALL.iter().map(|k| k.name()).collect();
                valid.extend(CandidateKind::LIFTED.iter().map(|(s, _)| *s));
                ScenarioError::Candidate(format!("{label}: unknown kind `{}`; valid kinds: {}", rc.kind, valid.join(", ")))
            })?;
            let comps = rc
                .components
                .iter()
                .enumerate()
                .map(|(j, s)| field(s, n, || format!("{label} component {}", j + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            let data = match &kind {
                CandidateKind::Base(k) => {
                    if comps.iter().any(Rsf::depends_on_fibre) {
                        return Err(ScenarioError::Candidate(format!("{label}: base data may only depend on x")));
                    }
                    CandidateData::Base(Box::new(
                        ProjectiveSolution::from_components(*k, n, comps).map_err(|e| ScenarioError::Candidate(format!("{label}: {e}")))?,
                    ))
                }
                CandidateKind::AesScale => match <[Rsf; 1]>::try_from(comps) {
                    Ok([s]) => CandidateData::Scale(s),
                    Err(c) => return Err(ScenarioError::Candidate(format!("{label}: a scale has 1 component, got {}", c.len()))),
                },
                CandidateKind::CkVector | CandidateKind::KillingVector => CandidateData::Vector(
                    TensorField::from_components(Base::Mt, vec![Slot::up_t(n)], comps)
                        .map_err(|e| ScenarioError::Candidate(format!("{label}: {e}")))?,
                ),
            };
            candidates.push(Candidate { label, kind, data });
        }

        let checks = match &raw.checks {
            Some(names) => names
                .iter()
                .map(|s| CheckId::parse(s).ok_or_else(|| ScenarioError::UnknownCheck { name: s.clone(), valid: checks::names() }))
                .collect::<Result<Vec<_>, _>>()?,
            None => checks::defaults(!candidates.is_empty()),
        };

        let scales = match &raw.options.scales {
            Some(v) => v
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let f = field(s, n, || format!("options.scales[{i}]"))?;
                    if f.depends_on_fibre() || f.is_zero() {
                        return Err(ScenarioError::Candidate(format!("options.scales[{i}] must be a nonzero function of x")));
                    }
                    Ok(f)
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => default_scales(n),
        };
        let upsilons = match &raw.options.upsilons {
            Some(v) => v
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    if row.len() != n {
                        return Err(ScenarioError::Dimension(format!("options.upsilons[{i}] has {} components, n = {n}", row.len())));
                    }
                    let comps = row
                        .iter()
                        .map(|s| field(s, n, || format!("options.upsilons[{i}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    TensorField::from_components(Base::M, vec![Slot::down(n)], comps)
                        .map_err(|e| ScenarioError::Candidate(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => default_upsilons(n),
        };
        Ok(Scenario {
            name: raw.name,
            n,
            connection,
            candidates,
            checks,
            options: Options { degree_bound: raw.options.degree_bound.unwrap_or(2), jobs: raw.options.jobs, scales, upsilons },
        })
    }
}
