//! Coadjoint orbit classification, Darboux charts and Hamiltonian pullbacks.
//!
//! Charts embed the orbit into `g*` by exponential polynomials in the chart
//! variables; `cos`/`sin` are carried as complex exponentials. For every
//! chart the identity `{Ã, B̃} = ([A,B])~` holds exactly for the chart's
//! Poisson structure, and [`verify_darboux`] checks it pair by pair.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{AlgElement, AlgebraName, DualVector, LieAlgebra};
use crate::moyal::{poisson, PoissonStructure};
use crate::symalg::{ExactScalar, ExpPoly, VarSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrbitFamily {
    #[serde(rename = "affR_point")]
    AffRPoint,
    #[serde(rename = "affR_upper")]
    AffRUpper,
    #[serde(rename = "affR_lower")]
    AffRLower,
    #[serde(rename = "affC_point")]
    AffCPoint,
    #[serde(rename = "affC_punctured")]
    AffCPunctured,
    #[serde(rename = "sl2_hyperboloid")]
    Sl2Hyperboloid,
    #[serde(rename = "sl2_upper_cone")]
    Sl2UpperCone,
    #[serde(rename = "sl2_lower_cone")]
    Sl2LowerCone,
    #[serde(rename = "sl2_origin")]
    Sl2Origin,
    #[serde(rename = "sl2_twofold_upper")]
    Sl2TwofoldUpper,
    #[serde(rename = "sl2_twofold_lower")]
    Sl2TwofoldLower,
}

impl OrbitFamily {
    pub const ALL: [OrbitFamily; 11] = [
        OrbitFamily::AffRPoint,
        OrbitFamily::AffRUpper,
        OrbitFamily::AffRLower,
        OrbitFamily::AffCPoint,
        OrbitFamily::AffCPunctured,
        OrbitFamily::Sl2Hyperboloid,
        OrbitFamily::Sl2UpperCone,
        OrbitFamily::Sl2LowerCone,
        OrbitFamily::Sl2Origin,
        OrbitFamily::Sl2TwofoldUpper,
        OrbitFamily::Sl2TwofoldLower,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OrbitFamily::AffRPoint => "affR_point",
            OrbitFamily::AffRUpper => "affR_upper",
            OrbitFamily::AffRLower => "affR_lower",
            OrbitFamily::AffCPoint => "affC_point",
            OrbitFamily::AffCPunctured => "affC_punctured",
            OrbitFamily::Sl2Hyperboloid => "sl2_hyperboloid",
            OrbitFamily::Sl2UpperCone => "sl2_upper_cone",
            OrbitFamily::Sl2LowerCone => "sl2_lower_cone",
            OrbitFamily::Sl2Origin => "sl2_origin",
            OrbitFamily::Sl2TwofoldUpper => "sl2_twofold_upper",
            OrbitFamily::Sl2TwofoldLower => "sl2_twofold_lower",
        }
    }

    pub fn algebra(self) -> AlgebraName {
        match self {
            OrbitFamily::AffRPoint | OrbitFamily::AffRUpper | OrbitFamily::AffRLower => AlgebraName::AffR,
            OrbitFamily::AffCPoint | OrbitFamily::AffCPunctured => AlgebraName::AffC,
            _ => AlgebraName::Sl2R,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            OrbitFamily::AffRPoint | OrbitFamily::AffCPoint | OrbitFamily::Sl2Origin => 0,
            OrbitFamily::AffCPunctured => 4,
            _ => 2,
        }
    }

    /// Whether the family is indexed by a parameter `λ > 0`.
    pub fn has_lambda(self) -> bool {
        matches!(self, OrbitFamily::Sl2Hyperboloid | OrbitFamily::Sl2TwofoldUpper | OrbitFamily::Sl2TwofoldLower)
    }
}

impl fmt::Display for OrbitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OrbitFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OrbitFamily::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown orbit family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitDescriptor {
    pub algebra: AlgebraName,
    pub family: OrbitFamily,
    /// `λ > 0` for the sl2 hyperboloid and two-fold families, when rational.
    pub lambda: Option<ExactScalar>,
    /// Exact value of `x² + h² − y²` for sl2 orbits.
    pub casimir: Option<ExactScalar>,
    /// The point of a 0-dimensional orbit.
    pub point: Option<Vec<ExactScalar>>,
    pub dim: usize,
}

impl OrbitDescriptor {
    /// Family representative: `λ` is required exactly for the λ-indexed
    /// families and ignored otherwise; 0-dim families get the origin.
    pub fn new(family: OrbitFamily, lambda: Option<ExactScalar>) -> Result<Self> {
        let algebra = family.algebra();
        let mut d = Self { algebra, family, lambda: None, casimir: None, point: None, dim: family.dim() };
        if family.has_lambda() {
            let l = lambda.ok_or_else(|| Error::Usage(format!("{family} needs a parameter λ")))?;
            if l.real_sign() != Some(Ordering::Greater) {
                return Err(Error::Domain(format!("λ must be a positive real, got {l}")));
            }
            let l2 = &l * &l;
            d.casimir = Some(if family == OrbitFamily::Sl2Hyperboloid { l2 } else { -l2 });
            d.lambda = Some(l);
        } else if algebra == AlgebraName::Sl2R {
            d.casimir = Some(ExactScalar::zero());
        }
        if d.dim == 0 {
            d.point = Some(vec![ExactScalar::zero(); LieAlgebra::new(algebra).dim()]);
        }
        Ok(d)
    }

    pub fn params(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        if let Some(l) = &self.lambda {
            m.insert("lambda".into(), l.to_string());
        }
        if let Some(c) = &self.casimir {
            m.insert("casimir".into(), c.to_string());
        }
        if let Some(p) = &self.point {
            m.insert("point".into(), p.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
        }
        m
    }

    /// A real point of the orbit.
    pub fn base_point(&self) -> DualVector {
        let z = ExactScalar::zero;
        let coords = match self.family {
            OrbitFamily::AffRUpper => vec![z(), ExactScalar::one()],
            OrbitFamily::AffRLower => vec![z(), ExactScalar::int(-1)],
            OrbitFamily::AffCPunctured => vec![z(), z(), ExactScalar::one(), z()],
            OrbitFamily::Sl2Hyperboloid => {
                vec![self.lambda.clone().unwrap_or_default() * ExactScalar::int(2), z(), z()]
            }
            OrbitFamily::Sl2UpperCone => vec![z(), ExactScalar::int(2), ExactScalar::int(-2)],
            OrbitFamily::Sl2LowerCone => vec![z(), ExactScalar::int(-2), ExactScalar::int(2)],
            OrbitFamily::Sl2TwofoldUpper => vec![z(), z(), self.lambda.clone().unwrap_or_default() * ExactScalar::int(-2)],
            OrbitFamily::Sl2TwofoldLower => vec![z(), z(), self.lambda.clone().unwrap_or_default() * ExactScalar::int(2)],
            OrbitFamily::AffRPoint | OrbitFamily::AffCPoint | OrbitFamily::Sl2Origin => self.point.clone().unwrap_or_default(),
        };
        DualVector { algebra: self.algebra, coords }
    }

    /// Exact membership test for a rational point.
    pub fn contains(&self, f: &DualVector) -> Result<bool> {
        let d = classify_orbit(f)?;
        Ok(d.family == self.family
            && (!self.family.has_lambda() || d.casimir == self.casimir)
            && (self.dim != 0 || d.point == self.point))
    }
}

fn real_part(c: &ExactScalar) -> Result<&num_rational::BigRational> {
    if c.is_real() {
        Ok(c.re())
    } else {
        Err(Error::Domain(format!("coadjoint coordinates must be real, got {c}")))
    }
}

fn sign_of(c: &ExactScalar) -> Ordering {
    c.real_sign().unwrap_or(Ordering::Equal)
}

pub fn sl2_casimir(f: &DualVector) -> ExactScalar {
    let q = ExactScalar::ratio(1, 4);
    let c = &f.coords;
    (&c[0] * &c[0] + &c[1] * &c[1] - &c[2] * &c[2]) * q
}

/// Exact classification of a real rational dual vector.
pub fn classify_orbit(f: &DualVector) -> Result<OrbitDescriptor> {
    let alg = LieAlgebra::new(f.algebra);
    if f.coords.len() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), got: f.coords.len() });
    }
    for c in &f.coords {
        real_part(c)?;
    }
    let point = |family: OrbitFamily| OrbitDescriptor {
        algebra: f.algebra,
        family,
        lambda: None,
        casimir: None,
        point: Some(f.coords.clone()),
        dim: 0,
    };
    let open = |family: OrbitFamily| OrbitDescriptor {
        algebra: f.algebra,
        family,
        lambda: None,
        casimir: None,
        point: None,
        dim: family.dim(),
    };
    Ok(match f.algebra {
        AlgebraName::AffR => match sign_of(&f.coords[1]) {
            Ordering::Equal => point(OrbitFamily::AffRPoint),
            Ordering::Greater => open(OrbitFamily::AffRUpper),
            Ordering::Less => open(OrbitFamily::AffRLower),
        },
        AlgebraName::AffC => {
            if f.coords[2].is_zero() && f.coords[3].is_zero() {
                point(OrbitFamily::AffCPoint)
            } else {
                open(OrbitFamily::AffCPunctured)
            }
        }
        AlgebraName::Sl2R => {
            let c = sl2_casimir(f);
            // y = −f_Y / 2
            let upper = sign_of(&f.coords[2]) == Ordering::Less;
            match sign_of(&c) {
                Ordering::Greater => OrbitDescriptor {
                    lambda: c.rational_sqrt(),
                    casimir: Some(c),
                    ..open(OrbitFamily::Sl2Hyperboloid)
                },
                Ordering::Equal if f.coords.iter().all(ExactScalar::is_zero) => OrbitDescriptor {
                    casimir: Some(c),
                    ..point(OrbitFamily::Sl2Origin)
                },
                Ordering::Equal => OrbitDescriptor {
                    casimir: Some(c),
                    ..open(if upper { OrbitFamily::Sl2UpperCone } else { OrbitFamily::Sl2LowerCone })
                },
                Ordering::Less => OrbitDescriptor {
                    lambda: (-c.clone()).rational_sqrt(),
                    casimir: Some(c),
                    ..open(if upper { OrbitFamily::Sl2TwofoldUpper } else { OrbitFamily::Sl2TwofoldLower })
                },
            }
        }
    })
}

/// Classification of float coordinates; the defining invariants are
/// compared with `tol`.
pub fn classify_orbit_approx(algebra: AlgebraName, f: &[f64], tol: f64) -> Result<OrbitFamily> {
    let dim = LieAlgebra::new(algebra).dim();
    if f.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: f.len() });
    }
    let sgn = |x: f64| {
        if x.abs() <= tol {
            Ordering::Equal
        } else if x > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    };
    Ok(match algebra {
        AlgebraName::AffR => match sgn(f[1]) {
            Ordering::Equal => OrbitFamily::AffRPoint,
            Ordering::Greater => OrbitFamily::AffRUpper,
            Ordering::Less => OrbitFamily::AffRLower,
        },
        AlgebraName::AffC => {
            if f[2].hypot(f[3]) <= tol {
                OrbitFamily::AffCPoint
            } else {
                OrbitFamily::AffCPunctured
            }
        }
        AlgebraName::Sl2R => {
            let c = (f[0] * f[0] + f[1] * f[1] - f[2] * f[2]) / 4.0;
            let upper = f[2] < 0.0;
            match sgn(c) {
                Ordering::Greater => OrbitFamily::Sl2Hyperboloid,
                Ordering::Equal if f.iter().all(|x| x.abs() <= tol) => OrbitFamily::Sl2Origin,
                Ordering::Equal if upper => OrbitFamily::Sl2UpperCone,
                Ordering::Equal => OrbitFamily::Sl2LowerCone,
                Ordering::Less if upper => OrbitFamily::Sl2TwofoldUpper,
                Ordering::Less => OrbitFamily::Sl2TwofoldLower,
            }
        }
    })
}

/// Local symplectic chart of a positive-dimensional orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxChart {
    pub orbit: OrbitDescriptor,
    pub vars: VarSet,
    /// Dual coordinates of the embedded point, in basis order.
    pub embed: Vec<ExpPoly>,
    pub poisson: PoissonStructure,
    /// Branch index `k` (affC only; 0 elsewhere).
    pub branch: i64,
    /// Chart parameter: `λ` (hyperboloid), `0` (cones) or `iλ` (two-fold).
    pub mu: ExactScalar,
    pub domain: String,
}

fn cos_sin(vars: &VarSet, name: &str) -> Result<(ExpPoly, ExpPoly)> {
    let i = ExactScalar::i();
    let plus = ExpPoly::exp_var(vars, name, i.clone())?;
    let minus = ExpPoly::exp_var(vars, name, -i.clone())?;
    let half = ExactScalar::ratio(1, 2);
    let cos = (&plus + &minus).scale(&half);
    let sin = (&plus - &minus).scale(&(&half / &i));
    Ok((cos, sin))
}

pub fn darboux_chart(orbit: &OrbitDescriptor) -> Result<DarbouxChart> {
    darboux_chart_branch(orbit, 0)
}

pub fn darboux_chart_branch(orbit: &OrbitDescriptor, branch: i64) -> Result<DarbouxChart> {
    if orbit.dim == 0 {
        return Err(Error::ZeroDimensionalOrbit);
    }
    if orbit.algebra != AlgebraName::AffC && branch != 0 {
        return Err(Error::Usage("branch index applies only to affC charts".into()));
    }
    match orbit.family {
        OrbitFamily::AffRUpper | OrbitFamily::AffRLower => {
            let ps = PoissonStructure::standard();
            let v = ps.vars().clone();
            let sign = if orbit.family == OrbitFamily::AffRUpper { 1 } else { -1 };
            let embed = vec![ExpPoly::var(&v, "p")?, ExpPoly::exp_var(&v, "q", ExactScalar::one())?.scale(&ExactScalar::int(sign))];
            let domain = if sign > 0 { "(p, q) ∈ ℝ², Y*-coordinate e^q > 0" } else { "(p, q) ∈ ℝ², Y*-coordinate −e^q < 0" };
            Ok(DarbouxChart { orbit: orbit.clone(), vars: v, embed, poisson: ps, branch: 0, mu: ExactScalar::zero(), domain: domain.into() })
        }
        OrbitFamily::AffCPunctured => {
            let v = VarSet::new(&["p1", "q1", "p2", "q2"])?;
            let ps = PoissonStructure::from_pairs(&v, &[("p1", "q1", 1), ("p2", "q2", -1)])?;
            let (c, s) = cos_sin(&v, "q2")?;
            let eq1 = ExpPoly::exp_var(&v, "q1", ExactScalar::one())?;
            // F = p₁X₁* − p₂X₂* + Re(e^w)Y₁* − Im(e^w)Y₂*, w = q₁ + i q₂
            let embed = vec![
                ExpPoly::var(&v, "p1")?,
                -&ExpPoly::var(&v, "p2")?,
                &eq1 * &c,
                -&(&eq1 * &s),
            ];
            let domain = format!("z = p1 + i p2 ∈ ℂ, w = q1 + i q2 with q2 ∈ ({}π, {}π)", 2 * branch, 2 * branch + 1);
            Ok(DarbouxChart { orbit: orbit.clone(), vars: v, embed, poisson: ps, branch, mu: ExactScalar::zero(), domain })
        }
        OrbitFamily::Sl2Hyperboloid
        | OrbitFamily::Sl2UpperCone
        | OrbitFamily::Sl2LowerCone
        | OrbitFamily::Sl2TwofoldUpper
        | OrbitFamily::Sl2TwofoldLower => {
            let (mu, domain) = match orbit.family {
                OrbitFamily::Sl2Hyperboloid => {
                    let l = orbit.lambda.clone().ok_or_else(|| {
                        Error::Domain("hyperboloid chart needs a rational λ".into())
                    })?;
                    (l, "(p, q) ∈ ℝ × (−π, π)".to_string())
                }
                OrbitFamily::Sl2UpperCone => (ExactScalar::zero(), "p > 0, q ∈ (−π, π)".to_string()),
                OrbitFamily::Sl2LowerCone => (ExactScalar::zero(), "p < 0, q ∈ (−π, π)".to_string()),
                _ => {
                    let l = orbit.lambda.clone().ok_or_else(|| {
                        Error::Domain("two-fold chart needs a rational λ".into())
                    })?;
                    let side = if orbit.family == OrbitFamily::Sl2TwofoldUpper { "y > 0" } else { "y < 0" };
                    (&l * &ExactScalar::i(), format!("complexified chart with μ = iλ, sheet {side}"))
                }
            };
            let ps = PoissonStructure::standard();
            let v = ps.vars().clone();
            let (c, s) = cos_sin(&v, "q")?;
            let p = ExpPoly::var(&v, "p")?;
            let x = &(&p * &c) - &s.scale(&mu);
            let h = &(&p * &s) + &c.scale(&mu);
            let y = p;
            let two = ExactScalar::int(2);
            // F = 2h H* + 2x X* − 2y Y*
            let embed = vec![h.scale(&two), x.scale(&two), y.scale(&-two.clone())];
            Ok(DarbouxChart { orbit: orbit.clone(), vars: v, embed, poisson: ps, branch: 0, mu, domain })
        }
        OrbitFamily::AffRPoint | OrbitFamily::AffCPoint | OrbitFamily::Sl2Origin => Err(Error::ZeroDimensionalOrbit),
    }
}

impl DarbouxChart {
    /// `Ã = ⟨F(chart), A⟩`.
    pub fn hamiltonian(&self, a: &AlgElement) -> Result<ExpPoly> {
        if a.algebra != self.orbit.algebra {
            return Err(Error::AlgebraMismatch(self.orbit.algebra.to_string(), a.algebra.to_string()));
        }
        let mut out = ExpPoly::zero(&self.vars);
        for (e, c) in self.embed.iter().zip(&a.coords) {
            out = &out + &e.scale(c);
        }
        Ok(out)
    }

    pub fn eval_point(&self, chart_point: &[Complex64]) -> Result<Vec<Complex64>> {
        self.embed.iter().map(|e| e.eval(chart_point)).collect()
    }
}

pub fn hamiltonian(orbit: &OrbitDescriptor, a: &AlgElement) -> Result<ExpPoly> {
    darboux_chart(orbit)?.hamiltonian(a)
}

/// `ω_F(ξ_Z, ξ_T) = ⟨F, [Z, T]⟩` for `F` on the given orbit.
pub fn kirillov_form(orbit: &OrbitDescriptor, f: &DualVector, z: &AlgElement, t: &AlgElement) -> Result<ExactScalar> {
    if f.algebra != orbit.algebra {
        return Err(Error::AlgebraMismatch(orbit.algebra.to_string(), f.algebra.to_string()));
    }
    if !orbit.contains(f)? {
        return Err(Error::NotOnOrbit(format!("{:?} is not on {}", f.coords, orbit.family)));
    }
    let alg = LieAlgebra::new(orbit.algebra);
    f.pair(&alg.bracket(z, t)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCheck {
    pub z: &'static str,
    pub t: &'static str,
    /// `⟨F(chart), [Z,T]⟩` in the expression grammar.
    pub kirillov: String,
    /// `{Z̃, T̃}` in the chart's standard form.
    pub standard: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DarbouxReport {
    pub family: OrbitFamily,
    pub branch: i64,
    pub pairs: Vec<PairCheck>,
    /// For sl2 charts: `x² + h² − y² − μ²` vanishes identically.
    pub invariant_residual: Option<String>,
    pub pass: bool,
}

pub fn verify_darboux(orbit: &OrbitDescriptor) -> Result<DarbouxReport> {
    verify_darboux_branch(orbit, 0)
}

pub fn verify_darboux_branch(orbit: &OrbitDescriptor, branch: i64) -> Result<DarbouxReport> {
    let chart = darboux_chart_branch(orbit, branch)?;
    let alg = LieAlgebra::new(orbit.algebra);
    let n = alg.dim();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (z, t) = (alg.basis_element(i), alg.basis_element(j));
            let kir = chart.hamiltonian(&alg.bracket(&z, &t)?)?;
            let std = poisson(&chart.hamiltonian(&z)?, &chart.hamiltonian(&t)?, &chart.poisson)?;
            pairs.push(PairCheck {
                z: alg.basis[i],
                t: alg.basis[j],
                kirillov: kir.to_expr_string(),
                standard: std.to_expr_string(),
                pass: kir == std,
            });
        }
    }
    let invariant_residual = if orbit.algebra == AlgebraName::Sl2R {
        let f = &chart.embed;
        let quarter = ExactScalar::ratio(1, 4);
        let c = (&(&(&f[0] * &f[0]) + &(&f[1] * &f[1])) - &(&f[2] * &f[2])).scale(&quarter);
        let r = &c - &ExpPoly::constant(&chart.vars, &chart.mu * &chart.mu);
        Some(r.to_expr_string())
    } else {
        None
    };
    let pass = pairs.iter().all(|p| p.pass) && invariant_residual.as_deref().is_none_or(|r| r == "0");
    Ok(DarbouxReport { family: orbit.family, branch, pairs, invariant_residual, pass })
}
