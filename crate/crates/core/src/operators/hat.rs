//! The ℓ̂ operators: left ⋆-multiplication by a Hamiltonian, conjugated by
//! the partial Fourier transform in the momentum variables.

use serde::Serialize;

use super::fourier::fourier_conjugate;
use super::{DiffOperator, OpKey};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::liealg::{AlgElement, AlgebraName, LieAlgebra};
use crate::moyal::{left_star_operator, PlanckParam};
use crate::orbits::{darboux_chart_branch, DarbouxChart, OrbitDescriptor, OrbitFamily};
use crate::symalg::{ExactScalar, ExpPoly, Monomial, VarSet};

/// (momentum, Fourier dual) variable pairs of a chart.
pub fn fourier_pairs(algebra: AlgebraName) -> &'static [(&'static str, &'static str)] {
    match algebra {
        AlgebraName::AffC => &[("p1", "xi1"), ("p2", "xi2")],
        _ => &[("p", "eta")],
    }
}

pub fn hat_ell_chart(chart: &DarbouxChart, a: &AlgElement, h: &PlanckParam) -> Result<DiffOperator> {
    let ham = chart.hamiltonian(a)?;
    let mut op = left_star_operator(&ham, &chart.poisson, h)?;
    for (p, xi) in fourier_pairs(chart.orbit.algebra) {
        op = fourier_conjugate(&op, p, xi)?;
    }
    Ok(op)
}

pub fn hat_ell(orbit: &OrbitDescriptor, a: &AlgElement, h: &PlanckParam) -> Result<DiffOperator> {
    hat_ell_branch(orbit, 0, a, h)
}

pub fn hat_ell_branch(orbit: &OrbitDescriptor, branch: i64, a: &AlgElement, h: &PlanckParam) -> Result<DiffOperator> {
    hat_ell_chart(&darboux_chart_branch(orbit, branch)?, a, h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomomorphismPair {
    pub a: &'static str,
    pub b: &'static str,
    pub residual: String,
    pub residual_magnitude: f64,
    pub zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomomorphismReport {
    pub family: OrbitFamily,
    pub branch: i64,
    pub h: ExactScalar,
    pub pairs: Vec<HomomorphismPair>,
    pub pass: bool,
}

/// `[ℓ̂_A, ℓ̂_B] − ℓ̂_{[A,B]}` for every ordered basis pair.
pub fn verify_homomorphism(orbit: &OrbitDescriptor, branch: i64, h: &PlanckParam, exec: Execution) -> Result<HomomorphismReport> {
    let chart = darboux_chart_branch(orbit, branch)?;
    let alg = LieAlgebra::new(orbit.algebra);
    let n = alg.dim();
    let hats: Vec<DiffOperator> = (0..n).map(|i| hat_ell_chart(&chart, &alg.basis_element(i), h)).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let pairs = exec
        .map(jobs, |(i, j)| -> Result<HomomorphismPair> {
            let br = alg.bracket(&alg.basis_element(i), &alg.basis_element(j))?;
            let res = hats[i].commutator(&hats[j])?.checked_sub(&hat_ell_chart(&chart, &br, h)?)?;
            Ok(HomomorphismPair { a: alg.basis[i], b: alg.basis[j], residual: res.to_expr_string(), residual_magnitude: res.max_abs_coeff(), zero: res.is_zero() })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let pass = pairs.iter().all(|p| p.zero);
    Ok(HomomorphismReport { family: orbit.family, branch, h: h.value().clone(), pairs, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonStatus {
    Match,
    DerivedOverride,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrintedComparison {
    pub family: OrbitFamily,
    pub element: Vec<ExactScalar>,
    pub derived: String,
    pub printed: String,
    /// `derived − printed`.
    pub difference: String,
    pub difference_magnitude: f64,
    pub status: ComparisonStatus,
}

fn dual_vars(algebra: AlgebraName) -> Result<VarSet> {
    match algebra {
        AlgebraName::AffC => VarSet::new(&["xi1", "q1", "xi2", "q2"]),
        _ => VarSet::new(&["eta", "q"]),
    }
}

fn d(vars: &VarSet, name: &str) -> Result<DiffOperator> {
    DiffOperator::derivative(vars, name)
}

fn mul(f: ExpPoly) -> DiffOperator {
    DiffOperator::multiplication(&f)
}

fn exp_lin(vars: &VarSet, freqs: &[ExactScalar]) -> Result<ExpPoly> {
    ExpPoly::exp_linear(vars, freqs.to_vec(), ExactScalar::zero())
}

/// The closed-form ℓ̂ operators as printed, at `h = 1`, in the dual chart
/// variables. affR: `α(½∂_q − ∂_η)`. affC:
/// `α(½∂_w − ∂_ξ̄) + ᾱ(½∂_w̄ − ∂_ξ) + (i/2)(βe^{w−ξ̄/2} + β̄e^{w̄−ξ/2})`.
/// sl2 hyperboloid: `(a cos s + b sin s − c)∂_q + (−a sin s + b cos s)(2λi + 1)`
/// with `s = q − η/2` and `A = aX + bH + cY`.
pub fn printed_hat_ell(orbit: &OrbitDescriptor, a: &AlgElement) -> Result<DiffOperator> {
    let v = dual_vars(orbit.algebra)?;
    let half = ExactScalar::ratio(1, 2);
    let i = ExactScalar::i();
    match orbit.family {
        OrbitFamily::AffRUpper | OrbitFamily::AffRLower => {
            let alpha = &a.coords[0];
            Ok(d(&v, "q")?.scale(&half).checked_sub(&d(&v, "eta")?)?.scale(alpha))
        }
        OrbitFamily::AffCPunctured => {
            let alpha = ExactScalar::new(a.coords[0].re().clone(), a.coords[1].re().clone());
            let beta = ExactScalar::new(a.coords[2].re().clone(), a.coords[3].re().clone());
            let half_i = &half * &i;
            // ∂_w = ½(∂_{q1} − i∂_{q2}), ∂_ξ = ½(∂_{ξ1} − i∂_{ξ2})
            let dw = d(&v, "q1")?.checked_sub(&d(&v, "q2")?.scale(&i))?.scale(&half);
            let dwb = d(&v, "q1")?.checked_add(&d(&v, "q2")?.scale(&i))?.scale(&half);
            let dxi = d(&v, "xi1")?.checked_sub(&d(&v, "xi2")?.scale(&i))?.scale(&half);
            let dxib = d(&v, "xi1")?.checked_add(&d(&v, "xi2")?.scale(&i))?.scale(&half);
            let first = dw.scale(&half).checked_sub(&dxib)?.scale(&alpha);
            let second = dwb.scale(&half).checked_sub(&dxi)?.scale(&alpha.conj());
            // e^{w − ξ̄/2} = e^{q1 + i q2 − ξ1/2 + i ξ2/2}
            let e1 = exp_lin(&v, &[-half.clone(), ExactScalar::one(), &half * &i, i.clone()])?;
            let e2 = e1.conj();
            let third = mul(&e1.scale(&beta) + &e2.scale(&beta.conj())).scale(&half_i);
            first.checked_add(&second)?.checked_add(&third)
        }
        OrbitFamily::Sl2Hyperboloid => {
            let lambda = orbit.lambda.clone().ok_or_else(|| Error::Domain("printed formula needs a rational λ".into()))?;
            let (b, a1, c) = (&a.coords[0], &a.coords[1], &a.coords[2]);
            // e^{±is}, s = q − η/2
            let ep = exp_lin(&v, &[-(&half * &i), i.clone()])?;
            let em = ep.conj();
            let cos = (&ep + &em).scale(&half);
            let sin = (&ep - &em).scale(&(&half / &i));
            let coef_d = &(&cos.scale(a1) + &sin.scale(b)) - &ExpPoly::constant(&v, c.clone());
            let zeroth = (&sin.scale(&-a1.clone()) + &cos.scale(b)).scale(&(&(&ExactScalar::int(2) * &lambda) * &i + ExactScalar::one()));
            mul(coef_d).compose(&d(&v, "q")?)?.checked_add(&mul(zeroth))
        }
        _ => Err(Error::UnsupportedClass(format!("no printed ℓ̂ formula for {}", orbit.family))),
    }
}

/// Term-by-term comparison of the derived ℓ̂_A (at `h = 1`) with the
/// printed formula.
pub fn compare_printed(orbit: &OrbitDescriptor, a: &AlgElement) -> Result<PrintedComparison> {
    let derived = hat_ell(orbit, a, &PlanckParam::default())?;
    let printed = printed_hat_ell(orbit, a)?;
    let diff = derived.checked_sub(&printed)?;
    Ok(PrintedComparison {
        family: orbit.family,
        element: a.coords.clone(),
        derived: derived.to_expr_string(),
        printed: printed.to_expr_string(),
        difference: diff.to_expr_string(),
        difference_magnitude: diff.max_abs_coeff(),
        status: if diff.is_zero() { ComparisonStatus::Match } else { ComparisonStatus::DerivedOverride },
    })
}

/// Restriction of `op` to functions of `s = Σ wᵢ xᵢ`, as an operator in the
/// single variable `name`. Every coefficient must be a combination of
/// `e^{c·s + κ}`.
pub fn restrict_to_combination(op: &DiffOperator, weights: &[ExactScalar], name: &str) -> Result<DiffOperator> {
    let vars = op.vars();
    if weights.len() != vars.len() {
        return Err(Error::DimensionMismatch { expected: vars.len(), got: weights.len() });
    }
    let lead = weights.iter().position(|w| !w.is_zero()).ok_or_else(|| Error::Domain("all weights vanish".into()))?;
    let sv = VarSet::new(&[name])?;
    let mut out = DiffOperator::zero(&sv);
    for (key, coeff) in op.terms() {
        let mut factor = ExactScalar::one();
        for (w, &k) in weights.iter().zip(&key.derivs) {
            factor *= &w.pow(k);
        }
        if factor.is_zero() {
            continue;
        }
        let shift: ExactScalar = weights.iter().zip(&key.shift).map(|(w, a)| w * a).sum();
        let mut c1 = ExpPoly::zero(&sv);
        for (m, c) in coeff.terms() {
            if m.degree() > 0 {
                return Err(Error::UnsupportedClass("polynomial coefficient is not a function of the combination".into()));
            }
            let ratio = &m.freqs[lead] / &weights[lead];
            if m.freqs.iter().zip(weights).any(|(f, w)| *f != &ratio * w) {
                return Err(Error::UnsupportedClass("coefficient is not a function of the combination".into()));
            }
            let mono = Monomial { exps: vec![0], freqs: vec![ratio], offset: m.offset.clone() };
            c1 = &c1 + &ExpPoly::from_term(&sv, mono, c * &factor)?;
        }
        let k1 = OpKey { derivs: vec![key.order()], shift: vec![shift] };
        out = out.checked_add(&DiffOperator::from_term(k1, c1)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit(f: OrbitFamily, lam: Option<ExactScalar>) -> OrbitDescriptor {
        OrbitDescriptor::new(f, lam).unwrap()
    }

    #[test]
    fn affr_derived_operator() {
        let o = orbit(OrbitFamily::AffRUpper, None);
        let g = LieAlgebra::new(AlgebraName::AffR);
        let h = PlanckParam::new(ExactScalar::ratio(1, 2)).unwrap();
        let (al, be) = (ExactScalar::ratio(3, 2), ExactScalar::int(-2));
        let a = g.element(vec![al.clone(), be.clone()]).unwrap();
        let v = dual_vars(AlgebraName::AffR).unwrap();
        // α(½∂_q − (1/h)∂_η) + (iβ/h) e^{q − hη/2}
        let ih = h.i_over_h();
        let want = d(&v, "q")
            .unwrap()
            .scale(&ExactScalar::ratio(1, 2))
            .checked_sub(&d(&v, "eta").unwrap().scale(&ExactScalar::int(2)))
            .unwrap()
            .scale(&al)
            .checked_add(&mul(ExpPoly::parse(&v, "exp(q - 1/4*eta)").unwrap().scale(&(&ih * &be))))
            .unwrap();
        assert_eq!(hat_ell(&o, &a, &h).unwrap(), want);
        assert!(hat_ell(&o, &g.element(vec![ExactScalar::zero(); 2]).unwrap(), &h).unwrap().is_zero());
    }

    #[test]
    fn affr_printed_formula_lacks_translation_part() {
        let o = orbit(OrbitFamily::AffRUpper, None);
        let g = LieAlgebra::new(AlgebraName::AffR);
        let x = compare_printed(&o, &g.basis_element(0)).unwrap();
        assert_eq!(x.status, ComparisonStatus::Match);
        let y = compare_printed(&o, &g.basis_element(1)).unwrap();
        assert_eq!(y.status, ComparisonStatus::DerivedOverride);
    }

    #[test]
    fn homomorphism_on_every_chart() {
        let h = PlanckParam::new(ExactScalar::ratio(2, 3)).unwrap();
        for fam in OrbitFamily::ALL.into_iter().filter(|f| f.dim() > 0) {
            let o = orbit(fam, fam.has_lambda().then(|| ExactScalar::ratio(1, 8)));
            let r = verify_homomorphism(&o, 0, &h, Execution::Sequential).unwrap();
            assert!(r.pass, "{fam}: {r:?}");
        }
    }

    #[test]
    fn affr_restriction() {
        let o = orbit(OrbitFamily::AffRUpper, None);
        let g = LieAlgebra::new(AlgebraName::AffR);
        let h = PlanckParam::new(ExactScalar::ratio(1, 3)).unwrap();
        let w = [-(h.value() * &ExactScalar::ratio(1, 2)), ExactScalar::one()];
        let sv = VarSet::new(&["s"]).unwrap();
        let x = restrict_to_combination(&hat_ell(&o, &g.basis_element(0), &h).unwrap(), &w, "s").unwrap();
        assert_eq!(x, d(&sv, "s").unwrap());
        let y = restrict_to_combination(&hat_ell(&o, &g.basis_element(1), &h).unwrap(), &w, "s").unwrap();
        assert_eq!(y, mul(ExpPoly::parse(&sv, "3 i*exp(s)").unwrap()));
    }
}
