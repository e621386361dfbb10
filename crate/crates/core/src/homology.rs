//! K-theory / periodic cyclic homology tables for the orbit catalogue and
//! the reduction chain `G → K → torus → Weyl quotient` used to probe them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::{OrbitDescriptor, OrbitFamily};
use crate::symalg::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GroupComponent {
    pub rank: u32,
    pub torsion: Vec<u32>,
}

impl GroupComponent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn z() -> Self {
        Self::free(1)
    }

    pub fn free(rank: u32) -> Self {
        Self { rank, torsion: Vec::new() }
    }

    pub fn with_torsion(rank: u32, mut torsion: Vec<u32>) -> Result<Self> {
        if torsion.iter().any(|&t| t < 2) {
            return Err(Error::Domain("torsion coefficients must be at least 2".into()));
        }
        torsion.sort_unstable();
        Ok(Self { rank, torsion })
    }
}

impl fmt::Display for GroupComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("ℤ/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

/// ℤ/2-graded finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GradedAbelianGroup {
    pub degree0: GroupComponent,
    pub degree1: GroupComponent,
}

impl GradedAbelianGroup {
    pub fn new(degree0: GroupComponent, degree1: GroupComponent) -> Self {
        Self { degree0, degree1 }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    /// `K^*(point) = (ℤ, 0)`.
    pub fn point() -> Self {
        Self::new(GroupComponent::z(), GroupComponent::zero())
    }

    /// `K^*(S¹) = (ℤ, ℤ)`.
    pub fn circle() -> Self {
        Self::new(GroupComponent::z(), GroupComponent::z())
    }

    /// Degree shift `* ↦ * + q (mod 2)`.
    pub fn shift(&self, q: i64) -> Self {
        if q.rem_euclid(2) == 0 {
            self.clone()
        } else {
            Self::new(self.degree1.clone(), self.degree0.clone())
        }
    }

    pub fn ranks(&self) -> (u32, u32) {
        (self.degree0.rank, self.degree1.rank)
    }
}

impl fmt::Display for GradedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.degree0, self.degree1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalCompact {
    Trivial,
    Circle,
    #[serde(rename = "SO2")]
    So2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompactData {
    pub group: &'static str,
    pub maximal_compact: MaximalCompact,
    /// `dim(G/K)`.
    pub q: i64,
    pub torus_rank: u32,
    pub weyl_order: u32,
}

pub fn compact_data(group: &str) -> Result<CompactData> {
    match group {
        "affR" | "affR0" => Ok(CompactData { group: "affR0", maximal_compact: MaximalCompact::Trivial, q: 2, torus_rank: 0, weyl_order: 1 }),
        "affC" => Ok(CompactData { group: "affC", maximal_compact: MaximalCompact::Circle, q: 3, torus_rank: 1, weyl_order: 1 }),
        "sl2R" => Ok(CompactData { group: "sl2R", maximal_compact: MaximalCompact::So2, q: 2, torus_rank: 1, weyl_order: 2 }),
        other => Err(Error::Usage(format!("unknown group `{other}` (expected affR0 | affC | sl2R)"))),
    }
}

fn group_of(family: OrbitFamily) -> &'static str {
    match family.algebra() {
        crate::liealg::AlgebraName::AffR => "affR0",
        crate::liealg::AlgebraName::AffC => "affC",
        crate::liealg::AlgebraName::Sl2R => "sl2R",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RestrictedOrbit {
    Point,
    Circle,
}

/// The `K`-orbit through the restriction of the orbit to the maximal
/// compact subalgebra.
pub fn restricted_orbit(orbit: &OrbitDescriptor) -> RestrictedOrbit {
    match orbit.family {
        OrbitFamily::AffCPunctured
        | OrbitFamily::Sl2Hyperboloid
        | OrbitFamily::Sl2UpperCone
        | OrbitFamily::Sl2LowerCone
        | OrbitFamily::Sl2TwofoldUpper
        | OrbitFamily::Sl2TwofoldLower => RestrictedOrbit::Circle,
        _ => RestrictedOrbit::Point,
    }
}

/// Published K-groups of the quantized orbit algebra.
pub fn k_groups(orbit: &OrbitDescriptor) -> GradedAbelianGroup {
    match orbit.family {
        OrbitFamily::AffRUpper | OrbitFamily::AffRLower => GradedAbelianGroup::trivial(),
        OrbitFamily::AffCPunctured => GradedAbelianGroup::point(),
        OrbitFamily::Sl2Hyperboloid
        | OrbitFamily::Sl2UpperCone
        | OrbitFamily::Sl2LowerCone
        | OrbitFamily::Sl2TwofoldUpper
        | OrbitFamily::Sl2TwofoldLower => GradedAbelianGroup::circle(),
        OrbitFamily::AffRPoint | OrbitFamily::AffCPoint | OrbitFamily::Sl2Origin => GradedAbelianGroup::point(),
    }
}

/// Published periodic cyclic homology; coincides with [`k_groups`] on the
/// whole catalogue.
pub fn phc_groups(orbit: &OrbitDescriptor) -> GradedAbelianGroup {
    k_groups(orbit)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainResult {
    pub k: GradedAbelianGroup,
    pub phc: GradedAbelianGroup,
    pub trace: Vec<String>,
}

pub fn reduction_chain(orbit: &OrbitDescriptor) -> ChainResult {
    let cd = compact_data(group_of(orbit.family)).expect("catalogued group");
    let mut trace = Vec::new();
    if orbit.dim == 0 {
        trace.push(format!("{} is 0-dimensional: K^*(point) = {}", orbit.family, GradedAbelianGroup::point()));
        let g = GradedAbelianGroup::point();
        return ChainResult { k: g.clone(), phc: g, trace };
    }
    trace.push(format!("maximal compact subgroup of {}: {:?}, q = dim(G/K) = {}", cd.group, cd.maximal_compact, cd.q));
    let restricted = restricted_orbit(orbit);
    let base = if cd.maximal_compact == MaximalCompact::Trivial {
        trace.push("K trivial: reduced algebra is trivial, groups (0, 0)".into());
        GradedAbelianGroup::trivial()
    } else {
        let g = match restricted {
            RestrictedOrbit::Point => GradedAbelianGroup::point(),
            RestrictedOrbit::Circle => GradedAbelianGroup::circle(),
        };
        trace.push(format!("restricted K-orbit {:?}: K^* = {g}", restricted));
        g
    };
    let shifted = base.shift(cd.q);
    trace.push(format!("degree shift by q = {} (mod 2 = {}): {shifted}", cd.q, cd.q.rem_euclid(2)));
    if cd.weyl_order > 1 {
        trace.push(format!("Weyl group of order {}: invariants taken as identity, {shifted}", cd.weyl_order));
    } else {
        trace.push("Weyl group trivial".into());
    }
    ChainResult { k: shifted.clone(), phc: shifted, trace }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChernVerdict {
    Iso,
    IsoModTorsion,
    Mismatch,
}

pub fn verdict(k: &GradedAbelianGroup, phc: &GradedAbelianGroup) -> ChernVerdict {
    if k == phc {
        ChernVerdict::Iso
    } else if k.ranks() == phc.ranks() {
        ChernVerdict::IsoModTorsion
    } else {
        ChernVerdict::Mismatch
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomologyReport {
    pub orbit: OrbitDescriptor,
    pub compact: CompactData,
    pub restricted_orbit: RestrictedOrbit,
    pub published_k: GradedAbelianGroup,
    pub published_phc: GradedAbelianGroup,
    pub chain_k: GradedAbelianGroup,
    pub chain_phc: GradedAbelianGroup,
    pub trace: Vec<String>,
    pub chern_verdict: ChernVerdict,
    pub chain_matches_published: bool,
    /// Whether `8λ` is an integer, for λ-indexed families.
    pub lambda_quantized: Option<bool>,
    pub notes: Vec<String>,
}

/// `λ ∈ ⅛ℤ`.
pub fn is_quantized(lambda: &ExactScalar) -> bool {
    use num_traits::Zero;
    lambda.im().is_zero() && (lambda.re() * num_rational::BigRational::from_integer(8.into())).is_integer()
}

pub fn chern_character(orbit: &OrbitDescriptor) -> HomologyReport {
    let compact = compact_data(group_of(orbit.family)).expect("catalogued group");
    let published_k = k_groups(orbit);
    let published_phc = phc_groups(orbit);
    let chain = reduction_chain(orbit);
    let chain_matches_published = chain.k == published_k && chain.phc == published_phc;
    let mut notes = Vec::new();
    if !chain_matches_published {
        notes.push(format!(
            "reduction chain gives K = {}, PHC = {}; published K = {}, PHC = {}",
            chain.k, chain.phc, published_k, published_phc
        ));
    }
    if orbit.dim == 0 {
        notes.push("0-dimensional orbit: point convention K^*(point)".into());
    }
    let lambda_quantized = orbit.lambda.as_ref().map(is_quantized);
    if lambda_quantized == Some(false) {
        notes.push(format!("λ = {} is not in ⅛ℤ", orbit.lambda.as_ref().unwrap()));
    }
    HomologyReport {
        orbit: orbit.clone(),
        compact,
        restricted_orbit: restricted_orbit(orbit),
        chern_verdict: verdict(&published_k, &published_phc),
        published_k,
        published_phc,
        chain_k: chain.k,
        chain_phc: chain.phc,
        trace: chain.trace,
        chain_matches_published,
        lambda_quantized,
        notes,
    }
}

/// One report per orbit family (λ = 1 where a parameter is needed).
pub fn catalogue() -> Vec<HomologyReport> {
    OrbitFamily::ALL
        .into_iter()
        .map(|f| {
            let lam = f.has_lambda().then(ExactScalar::one);
            chern_character(&OrbitDescriptor::new(f, lam).expect("valid representative"))
        })
        .collect()
}
