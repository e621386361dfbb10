//! Verification suites and their machine-readable reports.

pub mod properties;
pub mod sample;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::homology::{chern_character, ChernVerdict};
use crate::liealg::{AlgebraName, LieAlgebra};
use crate::moyal::{star_commutator_check, PlanckParam, SeriesCoefficients, DEFAULT_ORDER};
use crate::operators::{affr_evolution_check, compare_printed, verify_homomorphism, ComparisonStatus};
use crate::orbits::{classify_orbit, verify_darboux_branch, OrbitDescriptor, OrbitFamily};
use crate::symalg::ExactScalar;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXPM_REL_TOL: f64 = 1e-12;
pub const EXPM_SERIES_TERMS: usize = 30;
pub const EVOLUTION_L2_TOL: f64 = 1e-3;
pub const NORM_DRIFT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Pass,
    Fail,
    DerivedOverride,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub id: String,
    pub status: CaseStatus,
    /// Residual or error magnitude.
    pub residual: f64,
    pub notes: Vec<String>,
}

impl Case {
    fn check(id: impl Into<String>, pass: bool, residual: f64) -> Self {
        Self { id: id.into(), status: if pass { CaseStatus::Pass } else { CaseStatus::Fail }, residual, notes: Vec::new() }
    }

    fn error(id: impl Into<String>, e: &Error) -> Self {
        Self { id: id.into(), status: CaseStatus::Fail, residual: f64::NAN, notes: vec![e.to_string()] }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Commutator,
    Darboux,
    Homomorphism,
    Printed,
    Expm,
    Orbits,
    Homology,
    Evolution,
    Properties,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Commutator,
        Suite::Darboux,
        Suite::Homomorphism,
        Suite::Printed,
        Suite::Expm,
        Suite::Orbits,
        Suite::Homology,
        Suite::Evolution,
        Suite::Properties,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Commutator => "commutator",
            Suite::Darboux => "darboux",
            Suite::Homomorphism => "homomorphism",
            Suite::Printed => "printed",
            Suite::Expm => "expm",
            Suite::Orbits => "orbits",
            Suite::Homology => "homology",
            Suite::Evolution => "evolution",
            Suite::Properties => "properties",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    All,
    Algebra(AlgebraName),
    Suite(Suite),
}

impl FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(Scope::All);
        }
        if let Some(suite) = Suite::ALL.into_iter().find(|x| x.as_str() == s) {
            return Ok(Scope::Suite(suite));
        }
        s.parse::<AlgebraName>().map(Scope::Algebra).map_err(|_| {
            let suites: Vec<_> = Suite::ALL.iter().map(|x| x.as_str()).collect();
            Error::Usage(format!("unknown scope `{s}` (expected all | affR | affC | sl2R | {})", suites.join(" | ")))
        })
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::All => f.write_str("all"),
            Scope::Algebra(a) => write!(f, "{a}"),
            Scope::Suite(s) => write!(f, "{s}"),
        }
    }
}

impl Scope {
    fn suites(self) -> (Vec<Suite>, Option<AlgebraName>) {
        match self {
            Scope::All => (Suite::ALL.to_vec(), None),
            Scope::Suite(s) => (vec![s], None),
            Scope::Algebra(a) => {
                let mut v: Vec<Suite> = Suite::ALL.into_iter().filter(|s| *s != Suite::Properties).collect();
                if a != AlgebraName::AffR {
                    v.retain(|s| *s != Suite::Evolution);
                }
                (v, Some(a))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub h: ExactScalar,
    pub order: u32,
    pub grid: usize,
    pub branches: Vec<i64>,
    pub lambdas: Vec<ExactScalar>,
    pub seed: u64,
    pub orbit_samples: usize,
    pub expm_draws: usize,
    pub property_cases: usize,
    pub evolution_times: Vec<f64>,
    #[serde(skip)]
    pub exec: Execution,
}

pub const DEFAULT_SEED: u64 = 20_240_917;

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            h: ExactScalar::one(),
            order: DEFAULT_ORDER,
            grid: 1024,
            branches: vec![-1, 0, 1],
            lambdas: vec![ExactScalar::one(), ExactScalar::ratio(1, 2), ExactScalar::ratio(1, 8)],
            seed: DEFAULT_SEED,
            orbit_samples: 200,
            expm_draws: 100,
            property_cases: 500,
            evolution_times: vec![0.25, 0.5, 1.0],
            exec: Execution::default(),
        }
    }
}

/// Conventions needed to read the numbers in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conventions {
    pub fourier_kernel: &'static str,
    pub fourier_rules: &'static str,
    pub poisson_bracket: &'static str,
    pub star_product: &'static str,
    pub ad_matrix: &'static str,
    pub sl2_chart: &'static str,
}

pub fn conventions() -> Conventions {
    Conventions {
        fourier_kernel: "F(u)(η) = (1/2π) ∫ e^{−ipη} u(p) dp",
        fourier_rules: "∂_p ↦ iη, p ↦ i∂_η, u(p + a) ↦ e^{iaη}",
        poisson_bracket: "{f, g} = Σ Λ^{ij} ∂_i f ∂_j g, with {p, q} = 1 on the standard chart",
        star_product: "f ⋆ g = Σ_r (t^r / r!) P^r(f, g), t = h/2i (Moyal normalization)",
        ad_matrix: "ad_U acts on coordinate columns; exp(−ad_U)[i][j] is the i-th coordinate of exp(−ad_U) e_j",
        sl2_chart: "f = (2h, 2x, −2y), x = p cos q − μ sin q, h = p sin q + μ cos q, y = p",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub cases: Vec<Case>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: Suite, cases: Vec<Case>) -> Self {
        let pass = cases.iter().all(|c| c.status != CaseStatus::Fail);
        Self { suite, cases, pass }
    }

    pub fn count(&self, status: CaseStatus) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRun {
    pub schema_version: u32,
    pub scope: String,
    pub config: VerifyConfig,
    pub conventions: Conventions,
    pub suites: Vec<VerificationReport>,
    pub pass: bool,
}

pub fn run(scope: Scope, cfg: &VerifyConfig) -> Result<VerificationRun> {
    let h = PlanckParam::new(cfg.h.clone())?;
    let (suites, filter) = scope.suites();
    let reports = suites.into_iter().map(|s| run_suite(s, filter, cfg, &h)).collect();
    Ok(assemble(scope, cfg, reports))
}

fn assemble(scope: Scope, cfg: &VerifyConfig, suites: Vec<VerificationReport>) -> VerificationRun {
    let pass = suites.iter().all(|r| r.pass);
    VerificationRun { schema_version: SCHEMA_VERSION, scope: scope.to_string(), config: cfg.clone(), conventions: conventions(), suites, pass }
}

pub fn run_suite(suite: Suite, filter: Option<AlgebraName>, cfg: &VerifyConfig, h: &PlanckParam) -> VerificationReport {
    let cases = match suite {
        Suite::Commutator => commutator_cases(filter, cfg, h),
        Suite::Darboux => darboux_cases(filter, cfg),
        Suite::Homomorphism => homomorphism_cases(filter, cfg, h),
        Suite::Printed => printed_cases(filter),
        Suite::Expm => expm_cases(filter, cfg),
        Suite::Orbits => orbit_cases(filter, cfg),
        Suite::Homology => homology_cases(filter, cfg),
        Suite::Evolution => evolution_cases(filter, cfg, h),
        Suite::Properties => properties::property_cases(cfg.seed, cfg.property_cases, cfg.exec),
    };
    VerificationReport::new(suite, cases)
}

fn included(filter: Option<AlgebraName>, a: AlgebraName) -> bool {
    filter.is_none_or(|f| f == a)
}

/// Every 2-dimensional (or 4-dimensional) chart exercised by the symbolic
/// suites: affR Ω±, affC on each branch and the sl2 families at each λ.
pub fn chart_cases(filter: Option<AlgebraName>, cfg: &VerifyConfig) -> Result<Vec<(OrbitDescriptor, i64)>> {
    let mut out = Vec::new();
    for family in OrbitFamily::ALL {
        if family.dim() == 0 || !included(filter, family.algebra()) {
            continue;
        }
        let branches: &[i64] = if family == OrbitFamily::AffCPunctured { &cfg.branches } else { &[0] };
        let lambdas: Vec<Option<ExactScalar>> =
            if family.has_lambda() { cfg.lambdas.iter().cloned().map(Some).collect() } else { vec![None] };
        for l in lambdas {
            let orbit = OrbitDescriptor::new(family, l)?;
            for &k in branches {
                out.push((orbit.clone(), k));
            }
        }
    }
    Ok(out)
}

pub fn chart_id(orbit: &OrbitDescriptor, branch: i64) -> String {
    let mut s = orbit.family.to_string();
    if let Some(l) = &orbit.lambda {
        s.push_str(&format!("[λ={l}]"));
    }
    if orbit.algebra == AlgebraName::AffC {
        s.push_str(&format!("[k={branch}]"));
    }
    s
}

fn with_charts(filter: Option<AlgebraName>, cfg: &VerifyConfig, f: impl Fn(&OrbitDescriptor, i64, String) -> Vec<Case>) -> Vec<Case> {
    match chart_cases(filter, cfg) {
        Ok(charts) => charts.iter().flat_map(|(o, k)| f(o, *k, chart_id(o, *k))).collect(),
        Err(e) => vec![Case::error("charts", &e)],
    }
}

fn commutator_cases(filter: Option<AlgebraName>, cfg: &VerifyConfig, h: &PlanckParam) -> Vec<Case> {
    with_charts(filter, cfg, |o, k, id| match star_commutator_check(o, k, cfg.order, h, SeriesCoefficients::Factorial, cfg.exec) {
        Ok(r) => {
            let mut cases: Vec<Case> = r
                .pairs
                .iter()
                .map(|p| {
                    let c = Case::check(format!("{id}/{},{}", p.a, p.b), p.zero && p.beyond_order_vanishes, p.residual_magnitude);
                    if p.zero { c } else { c.note(p.residual.clone()) }
                })
                .collect();
            let surviving: Vec<String> = r
                .pairs
                .iter()
                .filter(|p| !p.nonvanishing_p_r.is_empty())
                .map(|p| format!("P^r({},{}) ≠ 0 for r ∈ {:?}", p.a, p.b, p.nonvanishing_p_r))
                .collect();
            let pr = if surviving.is_empty() {
                Case::check(format!("{id}/p_r_vanishing"), true, 0.0)
            } else {
                let mut c = Case {
                    id: format!("{id}/p_r_vanishing"),
                    status: CaseStatus::DerivedOverride,
                    residual: surviving.len() as f64,
                    notes: surviving,
                };
                c.notes.push("the surviving P^r are symmetric in (Ã, B̃) and cancel in the ⋆-commutator".into());
                c
            };
            cases.push(pr);
            cases
        }
        Err(e) => vec![Case::error(id, &e)],
    })
}

fn darboux_cases(filter: Option<AlgebraName>, cfg: &VerifyConfig) -> Vec<Case> {
    with_charts(filter, cfg, |o, k, id| {
        vec![match verify_darboux_branch(o, k) {
            Ok(r) => {
                let bad: Vec<String> = r.pairs.iter().filter(|p| !p.pass).map(|p| format!("{},{}: {} vs {}", p.z, p.t, p.kirillov, p.standard)).collect();
                let mut c = Case::check(id, r.pass, bad.len() as f64);
                c.notes = bad;
                if let Some(inv) = r.invariant_residual.filter(|s| s != "0") {
                    c.notes.push(format!("Casimir residual {inv}"));
                }
                c
            }
            Err(e) => Case::error(id, &e),
        }]
    })
}

fn homomorphism_cases(filter: Option<AlgebraName>, cfg: &VerifyConfig, h: &PlanckParam) -> Vec<Case> {
    with_charts(filter, cfg, |o, k, id| {
        vec![match verify_homomorphism(o, k, h, cfg.exec) {
            Ok(r) => {
                let worst = r.pairs.iter().map(|p| p.residual_magnitude).fold(0.0, f64::max);
                let mut c = Case::check(id, r.pass, worst);
                c.notes = r.pairs.iter().filter(|p| !p.zero).map(|p| format!("[ℓ̂_{}, ℓ̂_{}]: {}", p.a, p.b, p.residual)).collect();
                c
            }
            Err(e) => Case::error(id, &e),
        }]
    })
}

fn printed_cases(filter: Option<AlgebraName>) -> Vec<Case> {
    let orbits = [
        OrbitDescriptor::new(OrbitFamily::AffRUpper, None),
        OrbitDescriptor::new(OrbitFamily::AffCPunctured, None),
        OrbitDescriptor::new(OrbitFamily::Sl2Hyperboloid, Some(ExactScalar::one())),
    ];
    let mut out = Vec::new();
    for o in orbits {
        let o = match o {
            Ok(o) => o,
            Err(e) => {
                out.push(Case::error("printed", &e));
                continue;
            }
        };
        if !included(filter, o.algebra) {
            continue;
        }
        let alg = LieAlgebra::new(o.algebra);
        for i in 0..alg.dim() {
            let id = format!("{}/{}", o.family, alg.basis[i]);
            out.push(match compare_printed(&o, &alg.basis_element(i)) {
                Ok(c) => match c.status {
                    ComparisonStatus::Match => Case::check(id, true, 0.0),
                    ComparisonStatus::DerivedOverride => Case {
                        id,
                        status: CaseStatus::DerivedOverride,
                        residual: c.difference_magnitude,
                        notes: vec![format!("derived: {}", c.derived), format!("printed: {}", c.printed), format!("derived − printed: {}", c.difference)],
                    },
                },
                Err(e) => Case::error(id, &e),
            });
        }
    }
    out
}

/// The printed closed form `α + β + (α/β)(1 − e^β)` for the lower-left
/// entry of `exp(−ad_U)` on affR.
pub fn printed_affr_entry(alpha: f64, beta: f64) -> f64 {
    alpha + beta + (alpha / beta) * (1.0 - beta.exp())
}

/// `β(1 − e^{−α})/α`, with the limit `β` at `α = 0`.
pub fn derived_affr_entry(alpha: f64, beta: f64) -> f64 {
    if alpha == 0.0 {
        beta
    } else {
        beta * (1.0 - (-alpha).exp()) / alpha
    }
}

fn expm_cases(filter: Option<AlgebraName>, cfg: &VerifyConfig) -> Vec<Case> {
    let mut out = Vec::new();
    for name in AlgebraName::ALL {
        if !included(filter, name) {
            continue;
        }
        let g = LieAlgebra::new(name);
        let draws: Vec<_> = (0..cfg.expm_draws as u64)
            .map(|i| sample::random_coords(&mut sample::case_rng(cfg.seed, &format!("expm/{name}"), i), g.dim(), 1))
            .collect();
        let results = cfg.exec.map(draws.clone(), |c| -> Result<(f64, f64)> {
            let u = g.element(c)?;
            let (m, rel) = g.exp_neg_ad_checked(&u, EXPM_SERIES_TERMS)?;
            let closed = if name == AlgebraName::AffR {
                let (a, b) = (u.coords[0].to_complex().re, u.coords[1].to_complex().re);
                (m[(1, 0)].re - derived_affr_entry(a, b)).abs() / derived_affr_entry(a, b).abs().max(1.0)
            } else {
                0.0
            };
            Ok((rel, closed))
        });
        let mut worst = (0.0f64, 0.0f64);
        let mut errors = Vec::new();
        for r in results {
            match r {
                Ok((a, b)) => worst = (worst.0.max(a), worst.1.max(b)),
                Err(e) => errors.push(e.to_string()),
            }
        }
        let mut c = Case::check(format!("{name}/series_agreement"), errors.is_empty() && worst.0 <= EXPM_REL_TOL, worst.0)
            .note(format!("{} draws, {EXPM_SERIES_TERMS}-term series, tolerance {EXPM_REL_TOL:e}", cfg.expm_draws));
        c.notes.extend(errors);
        out.push(c);
        if name == AlgebraName::AffR {
            out.push(
                Case::check("affR/closed_form_entry", worst.1 <= EXPM_REL_TOL, worst.1)
                    .note("entry (Y, X) = β(1 − e^{−α})/α on every draw"),
            );
            let (a, b) = (0.7, -1.3);
            let u = g.element(vec![ExactScalar::ratio(7, 10), ExactScalar::ratio(-13, 10)]);
            let computed = u.and_then(|u| g.exp_neg_ad(&u)).map(|m| m[(1, 0)].re).unwrap_or(f64::NAN);
            let printed = printed_affr_entry(a, b);
            out.push(Case {
                id: "affR/printed_L".into(),
                status: CaseStatus::DerivedOverride,
                residual: (computed - printed).abs(),
                notes: vec![
                    format!("at (α, β) = ({a}, {b}): series {computed:.15}, printed α + β + (α/β)(1 − e^β) = {printed:.15}"),
                    "shipped: L' = β(1 − e^{−α})/α".into(),
                ],
            });
        }
    }
    out
}

fn orbit_cases(filter: Option<AlgebraName>, cfg: &VerifyConfig) -> Vec<Case> {
    AlgebraName::ALL
        .into_iter()
        .filter(|a| included(filter, *a))
        .map(|name| {
            let pts = sample::labelled_orbit_sample(name, cfg.orbit_samples, cfg.seed);
            let mut bad = Vec::new();
            for p in &pts {
                match classify_orbit(&p.point) {
                    Ok(d) if d.family == p.family && (p.casimir.is_none() || d.casimir == p.casimir) => {}
                    Ok(d) => bad.push(format!("{:?}: expected {}, got {}", p.point.coords, p.family, d.family)),
                    Err(e) => bad.push(format!("{:?}: {e}", p.point.coords)),
                }
            }
            let mut c = Case::check(format!("{name}/classification"), bad.is_empty(), bad.len() as f64)
                .note(format!("{} labelled points", pts.len()));
            c.notes.extend(bad);
            c
        })
        .collect()
}

fn homology_cases(filter: Option<AlgebraName>, cfg: &VerifyConfig) -> Vec<Case> {
    let mut out = Vec::new();
    for family in OrbitFamily::ALL {
        if !included(filter, family.algebra()) {
            continue;
        }
        let lambdas: Vec<Option<ExactScalar>> =
            if family.has_lambda() { cfg.lambdas.iter().cloned().map(Some).collect() } else { vec![None] };
        for l in lambdas {
            let orbit = match OrbitDescriptor::new(family, l) {
                Ok(o) => o,
                Err(e) => {
                    out.push(Case::error(family.as_str(), &e));
                    continue;
                }
            };
            let id = chart_id(&orbit, 0).replace("[k=0]", "");
            let r = chern_character(&orbit);
            let mut v = Case::check(format!("{id}/chern_verdict"), r.chern_verdict == ChernVerdict::Iso, 0.0)
                .note(format!("K = {}, PHC = {}", r.published_k, r.published_phc));
            if r.lambda_quantized == Some(false) {
                v = v.note("λ not in ⅛ℤ");
            }
            out.push(v);
            out.push(if r.chain_matches_published {
                Case::check(format!("{id}/reduction_chain"), true, 0.0)
            } else {
                let mut c = Case {
                    id: format!("{id}/reduction_chain"),
                    status: CaseStatus::DerivedOverride,
                    residual: 1.0,
                    notes: r.notes.clone(),
                };
                c.notes.extend(r.trace.iter().cloned());
                c
            });
        }
    }
    out
}

fn evolution_cases(filter: Option<AlgebraName>, cfg: &VerifyConfig, h: &PlanckParam) -> Vec<Case> {
    if !included(filter, AlgebraName::AffR) {
        return Vec::new();
    }
    let mut jobs = Vec::new();
    for (label, a, b) in [("X", ExactScalar::one(), ExactScalar::zero()), ("Y", ExactScalar::zero(), ExactScalar::one())] {
        for &t in &cfg.evolution_times {
            jobs.push((label, a.clone(), b.clone(), t));
        }
    }
    cfg.exec
        .map(jobs, |(label, a, b, t)| {
            let id = format!("affR/{label}/t={t}");
            match affr_evolution_check(&a, &b, t, cfg.grid, h) {
                Ok(r) => Case::check(id, r.rel_l2_error <= EVOLUTION_L2_TOL && r.norm_drift_per_unit_time <= NORM_DRIFT_TOL, r.rel_l2_error)
                    .note(format!("grid {}, {} RK4 steps, norm drift {:.3e} per unit time", r.grid, r.steps, r.norm_drift_per_unit_time)),
                Err(e) => Case::error(id, &e),
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scope_parsing() {
        assert_eq!("all".parse::<Scope>().unwrap(), Scope::All);
        assert_eq!("affC".parse::<Scope>().unwrap(), Scope::Algebra(AlgebraName::AffC));
        assert_eq!("expm".parse::<Scope>().unwrap(), Scope::Suite(Suite::Expm));
        assert!(matches!("bogus".parse::<Scope>(), Err(Error::Usage(_))));
    }

    #[test]
    fn derived_override_does_not_fail() {
        let r = VerificationReport::new(
            Suite::Printed,
            vec![Case::check("a", true, 0.0), Case { id: "b".into(), status: CaseStatus::DerivedOverride, residual: 1.0, notes: vec![] }],
        );
        assert!(r.pass);
        assert!(!VerificationReport::new(Suite::Printed, vec![Case::check("c", false, 1.0)]).pass);
    }

    #[test]
    fn printed_entry_disagrees() {
        assert!((derived_affr_entry(0.0, 2.0) - 2.0).abs() < 1e-15);
        assert!((printed_affr_entry(0.7, -1.3) - derived_affr_entry(0.7, -1.3)).abs() > 0.05);
        assert!((printed_affr_entry(2.0, 1.0) - derived_affr_entry(2.0, 1.0)).abs() > 0.8);
    }

    #[test]
    fn chart_cases_cover_branches_and_lambdas() {
        let cfg = VerifyConfig::default();
        let all = chart_cases(None, &cfg).unwrap();
        assert_eq!(all.len(), 2 + 3 + 3 * 3 + 2);
        assert_eq!(chart_cases(Some(AlgebraName::AffR), &cfg).unwrap().len(), 2);
    }

    #[test]
    fn quick_suites() {
        let cfg = VerifyConfig { expm_draws: 10, orbit_samples: 60, ..VerifyConfig::default() };
        let h = PlanckParam::default();
        for s in [Suite::Expm, Suite::Orbits, Suite::Homology, Suite::Printed, Suite::Darboux] {
            let r = run_suite(s, None, &cfg, &h);
            assert!(r.pass, "{r:?}");
        }
        let printed = run_suite(Suite::Printed, Some(AlgebraName::AffR), &cfg, &h);
        assert_eq!(printed.count(CaseStatus::DerivedOverride), 1);
    }
}
