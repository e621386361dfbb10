//! Poisson structures, the bidifferential operators `P^r`, the Moyal
//! ⋆-product and left ⋆-multiplication operators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::liealg::LieAlgebra;
use crate::orbits::{darboux_chart_branch, OrbitDescriptor, OrbitFamily};
use crate::operators::diffop::{multi_binomial, sub_multi_indices};
use crate::operators::{DiffOperator, OpKey};
use crate::symalg::{ExactScalar, ExpPoly, VarSet};

/// Constant antisymmetric, invertible bivector `Λ` on a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStructure {
    vars: VarSet,
    lambda: Vec<Vec<ExactScalar>>,
}

impl PoissonStructure {
    pub fn new(vars: &VarSet, lambda: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let n = vars.len();
        if lambda.len() != n || lambda.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: lambda.len() });
        }
        if !n.is_multiple_of(2) {
            return Err(Error::Domain(format!("Poisson structure on {n} variables: dimension must be even")));
        }
        for i in 0..n {
            for j in 0..n {
                if lambda[i][j] != -lambda[j][i].clone() {
                    return Err(Error::Domain("Λ is not antisymmetric".into()));
                }
            }
        }
        if determinant(&lambda).is_zero() {
            return Err(Error::Domain("Λ is degenerate".into()));
        }
        Ok(Self { vars: vars.clone(), lambda })
    }

    /// `Λ^{pᵢ qᵢ} = signᵢ` for the listed (momentum, position) pairs.
    pub fn from_pairs(vars: &VarSet, pairs: &[(&str, &str, i64)]) -> Result<Self> {
        let n = vars.len();
        let mut lambda = vec![vec![ExactScalar::zero(); n]; n];
        for &(p, q, s) in pairs {
            let (i, j) = (vars.index(p)?, vars.index(q)?);
            lambda[i][j] = ExactScalar::int(s);
            lambda[j][i] = ExactScalar::int(-s);
        }
        Self::new(vars, lambda)
    }

    /// `{f, g} = ∂_p f ∂_q g − ∂_q f ∂_p g` on (p, q).
    pub fn standard() -> Self {
        let v = VarSet::new(&["p", "q"]).expect("valid names");
        Self::from_pairs(&v, &[("p", "q", 1)]).expect("nondegenerate")
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn lambda(&self) -> &[Vec<ExactScalar>] {
        &self.lambda
    }

    fn entries(&self) -> Vec<(usize, usize, &ExactScalar)> {
        let n = self.vars.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.lambda[i][j].is_zero() {
                    out.push((i, j, &self.lambda[i][j]));
                }
            }
        }
        out
    }
}

fn determinant(m: &[Vec<ExactScalar>]) -> ExactScalar {
    let n = m.len();
    let mut a: Vec<Vec<ExactScalar>> = m.to_vec();
    let mut det = ExactScalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return ExactScalar::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let inv = a[col][col].inv().expect("nonzero pivot");
        det *= &a[col][col];
        for r in col + 1..n {
            let factor = &a[r][col] * &inv;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let d = &factor * &a[col][c];
                a[r][c] -= &d;
            }
        }
    }
    det
}

/// Nonzero value of the Planck parameter `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanckParam(ExactScalar);

impl PlanckParam {
    pub fn new(h: ExactScalar) -> Result<Self> {
        if h.is_zero() {
            Err(Error::Domain("h must be nonzero".into()))
        } else {
            Ok(Self(h))
        }
    }

    pub fn value(&self) -> &ExactScalar {
        &self.0
    }

    /// `t = h / 2i`.
    pub fn t(&self) -> ExactScalar {
        &self.0 / &ExactScalar::gaussian(0, 1, 2, 1)
    }

    /// `i / h`.
    pub fn i_over_h(&self) -> ExactScalar {
        &ExactScalar::i() / &self.0
    }
}

impl Default for PlanckParam {
    fn default() -> Self {
        Self(ExactScalar::one())
    }
}

/// Normalization of the r-th term of the ⋆-series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesCoefficients {
    /// `1/r!` (Moyal).
    #[default]
    Factorial,
    /// `1/r` literally; kept for comparison only.
    Reciprocal,
}

impl SeriesCoefficients {
    pub fn coefficient(self, r: u32) -> ExactScalar {
        match self {
            SeriesCoefficients::Factorial => ExactScalar::one() / ExactScalar::int((1..=r as i64).product()),
            SeriesCoefficients::Reciprocal => ExactScalar::ratio(1, r as i64),
        }
    }
}

pub const DEFAULT_ORDER: u32 = 6;

pub fn poisson(f: &ExpPoly, g: &ExpPoly, ps: &PoissonStructure) -> Result<ExpPoly> {
    p_r(f, g, ps, 1)
}

/// `P^r(f, g) = Λ^{i₁j₁}…Λ^{i_r j_r} ∂_{i₁…i_r} f ∂_{j₁…j_r} g`, expanded
/// multinomially over the nonzero entries of `Λ`.
pub fn p_r(f: &ExpPoly, g: &ExpPoly, ps: &PoissonStructure, r: u32) -> Result<ExpPoly> {
    f.vars().ensure_same(g.vars())?;
    f.vars().ensure_same(&ps.vars)?;
    if r == 0 {
        return Ok(f * g);
    }
    let n = ps.vars.len();
    let entries = ps.entries();
    let r_fact: i64 = (1..=r as i64).product();
    let mut grouped: std::collections::BTreeMap<(Vec<u32>, Vec<u32>), ExactScalar> = std::collections::BTreeMap::new();
    for counts in compositions(r, entries.len()) {
        let mut df = vec![0u32; n];
        let mut dg = vec![0u32; n];
        let mut coeff = ExactScalar::int(r_fact);
        for (&(i, j, lam), &c) in entries.iter().zip(&counts) {
            if c == 0 {
                continue;
            }
            df[i] += c;
            dg[j] += c;
            coeff = &coeff * &lam.pow(c) / ExactScalar::int((1..=c as i64).product());
        }
        *grouped.entry((df, dg)).or_insert_with(ExactScalar::zero) += &coeff;
    }
    let mut out = ExpPoly::zero(&ps.vars);
    for ((df, dg), coeff) in grouped {
        if coeff.is_zero() {
            continue;
        }
        let a = f.partial_multi(&df);
        if a.is_zero() {
            continue;
        }
        let b = g.partial_multi(&dg);
        if b.is_zero() {
            continue;
        }
        out = &out + &(&a * &b).scale(&coeff);
    }
    Ok(out)
}

/// All `k`-tuples of naturals summing to `r`.
fn compositions(r: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if r == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=r {
        for mut rest in compositions(r - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarResult {
    pub value: ExpPoly,
    pub order: u32,
    /// True when `P^{order+1}` and `P^{order+2}` both vanish, so the value
    /// is not a truncation.
    pub exact: bool,
}

pub fn star(
    f: &ExpPoly,
    g: &ExpPoly,
    ps: &PoissonStructure,
    h: &PlanckParam,
    order: u32,
    mode: SeriesCoefficients,
) -> Result<StarResult> {
    if order == 0 {
        return Err(Error::Usage("⋆ order must be at least 1".into()));
    }
    let t = h.t();
    let mut value = f.checked_mul(g)?;
    for r in 1..=order {
        let pr = p_r(f, g, ps, r)?;
        value = &value + &pr.scale(&(&mode.coefficient(r) * &t.pow(r)));
    }
    let exact = p_r(f, g, ps, order + 1)?.is_zero() && p_r(f, g, ps, order + 2)?.is_zero();
    Ok(StarResult { value, order, exact })
}

/// Coefficients of `h⁰, h¹, …, h^order` in `f ⋆ g` (Moyal normalization).
pub fn star_h_coefficients(f: &ExpPoly, g: &ExpPoly, ps: &PoissonStructure, order: u32) -> Result<Vec<ExpPoly>> {
    let t1 = PlanckParam::default().t();
    (0..=order)
        .map(|r| {
            let c = if r == 0 { ExactScalar::one() } else { &SeriesCoefficients::Factorial.coefficient(r) * &t1.pow(r) };
            Ok(p_r(f, g, ps, r)?.scale(&c))
        })
        .collect()
}

/// `u ↦ f ⋆ u` as a finite differential-shift operator (Moyal
/// normalization, all orders).
///
/// With `t = h/2i` and `D_i = Σ_j Λ^{ij} ∂_j`, each term
/// `c x^α e^{λ·x+κ}` of `f` contributes
/// `Σ_{γ≤α} C(α,γ) t^{|γ|} c x^{α−γ} e^{λ·x+κ} (D^γ u)(x + tλΛ)`.
pub fn star_left_operator(f: &ExpPoly, ps: &PoissonStructure, h: &PlanckParam) -> Result<DiffOperator> {
    f.vars().ensure_same(&ps.vars)?;
    let vars = &ps.vars;
    let n = vars.len();
    let t = h.t();
    let mut out = DiffOperator::zero(vars);
    for (m, c) in f.terms() {
        let shift: Vec<ExactScalar> = (0..n)
            .map(|j| {
                let s: ExactScalar = (0..n).map(|i| &m.freqs[i] * &ps.lambda[i][j]).sum();
                &t * &s
            })
            .collect();
        for gamma in sub_multi_indices(&m.exps) {
            let mut rest = m.clone();
            for (e, g) in rest.exps.iter_mut().zip(&gamma) {
                *e -= g;
            }
            let order: u32 = gamma.iter().sum();
            let scal = c * &t.pow(order) * ExactScalar::int(multi_binomial(&m.exps, &gamma));
            let coeff = ExpPoly::from_term(vars, rest, scal)?;
            for (derivs, d) in d_power(ps, &gamma) {
                let key = OpKey { derivs, shift: shift.clone() };
                out = out.checked_add(&DiffOperator::from_term(key, coeff.scale(&d))?)?;
            }
        }
    }
    Ok(out)
}

/// `ℓ(u) = (i/h)(f ⋆ u)`.
pub fn left_star_operator(f: &ExpPoly, ps: &PoissonStructure, h: &PlanckParam) -> Result<DiffOperator> {
    Ok(star_left_operator(f, ps, h)?.scale(&h.i_over_h()))
}

/// Constant-coefficient expansion of `Π_i D_i^{γ_i}` as (multi-index, coefficient) pairs.
fn d_power(ps: &PoissonStructure, gamma: &[u32]) -> Vec<(Vec<u32>, ExactScalar)> {
    let n = ps.vars.len();
    let mut acc: std::collections::BTreeMap<Vec<u32>, ExactScalar> = std::collections::BTreeMap::new();
    acc.insert(vec![0; n], ExactScalar::one());
    for (i, &g) in gamma.iter().enumerate() {
        for _ in 0..g {
            let mut next = std::collections::BTreeMap::new();
            for (d, c) in &acc {
                for j in 0..n {
                    let lam = &ps.lambda[i][j];
                    if lam.is_zero() {
                        continue;
                    }
                    let mut d2 = d.clone();
                    d2[j] += 1;
                    let e: &mut ExactScalar = next.entry(d2).or_insert_with(ExactScalar::zero);
                    *e += &(c * lam);
                }
            }
            next.retain(|_, c: &mut ExactScalar| !c.is_zero());
            acc = next;
        }
    }
    acc.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorPair {
    pub a: &'static str,
    pub b: &'static str,
    /// `(i/h)Ã ⋆ (i/h)B̃ − (i/h)B̃ ⋆ (i/h)Ã − (i/h)([A,B])~`.
    pub residual: String,
    /// Largest coefficient modulus of the residual.
    pub residual_magnitude: f64,
    pub zero: bool,
    /// Orders `r ∈ 2..=order+2` with `P^r(Ã, B̃) ≠ 0`.
    pub nonvanishing_p_r: Vec<u32>,
    /// `P^r(Ã,B̃) − P^r(B̃,Ã) = 0` for `r = order+1, order+2`.
    pub beyond_order_vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub family: OrbitFamily,
    pub branch: i64,
    pub order: u32,
    pub h: ExactScalar,
    pub pairs: Vec<CommutatorPair>,
    pub pass: bool,
}

/// ⋆-commutator of `(i/h)`-scaled Hamiltonians against the Hamiltonian of
/// the bracket, for every ordered basis pair.
pub fn star_commutator_check(
    orbit: &OrbitDescriptor,
    branch: i64,
    order: u32,
    h: &PlanckParam,
    mode: SeriesCoefficients,
    exec: Execution,
) -> Result<CommutatorReport> {
    let chart = darboux_chart_branch(orbit, branch)?;
    let alg = LieAlgebra::new(orbit.algebra);
    let n = alg.dim();
    let ps = &chart.poisson;
    let ih = h.i_over_h();
    let hams: Vec<ExpPoly> = (0..n).map(|i| chart.hamiltonian(&alg.basis_element(i))).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let pairs = exec
        .map(jobs, |(i, j)| -> Result<CommutatorPair> {
            let (u, v) = (hams[i].scale(&ih), hams[j].scale(&ih));
            let uv = star(&u, &v, ps, h, order, mode)?.value;
            let vu = star(&v, &u, ps, h, order, mode)?.value;
            let br = chart.hamiltonian(&alg.bracket(&alg.basis_element(i), &alg.basis_element(j))?)?.scale(&ih);
            let res = &(&uv - &vu) - &br;
            let mut nonvanishing_p_r = Vec::new();
            for r in 2..=order + 2 {
                if !p_r(&hams[i], &hams[j], ps, r)?.is_zero() {
                    nonvanishing_p_r.push(r);
                }
            }
            let mut beyond = true;
            for r in order + 1..=order + 2 {
                let d = &p_r(&hams[i], &hams[j], ps, r)? - &p_r(&hams[j], &hams[i], ps, r)?;
                beyond &= d.is_zero();
            }
            Ok(CommutatorPair {
                a: alg.basis[i],
                b: alg.basis[j],
                residual: res.to_expr_string(),
                residual_magnitude: res.max_abs_coeff(),
                zero: res.is_zero(),
                nonvanishing_p_r,
                beyond_order_vanishes: beyond,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let pass = pairs.iter().all(|p| p.zero && p.beyond_order_vanishes);
    Ok(CommutatorReport { family: orbit.family, branch, order, h: h.value().clone(), pairs, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps() -> PoissonStructure {
        PoissonStructure::standard()
    }

    fn e(s: &str) -> ExpPoly {
        ExpPoly::parse(ps().vars(), s).unwrap()
    }

    #[test]
    fn rejects_degenerate_and_odd() {
        let v = VarSet::new(&["p", "q"]).unwrap();
        let z = vec![vec![ExactScalar::zero(); 2]; 2];
        assert!(PoissonStructure::new(&v, z).is_err());
        let v3 = VarSet::new(&["a", "b", "c"]).unwrap();
        assert!(PoissonStructure::new(&v3, vec![vec![ExactScalar::zero(); 3]; 3]).is_err());
    }

    #[test]
    fn affr_bracket_anchor() {
        let f = e("2*p + 3*exp(q)");
        let g = e("-p + 5*exp(q)");
        // (α₁β₂ − α₂β₁) e^q = (10 + 3) e^q
        assert_eq!(poisson(&f, &g, &ps()).unwrap(), e("13*exp(q)"));
        assert!(poisson(&f, &f, &ps()).unwrap().is_zero());
    }

    #[test]
    fn second_order_example() {
        assert_eq!(p_r(&e("q^2"), &e("p^2"), &ps(), 2).unwrap(), e("4"));
        let f = e("2*p + 3*exp(q)");
        let g = e("-p + 5*exp(q)");
        for r in 2..=6 {
            assert!(p_r(&f, &g, &ps(), r).unwrap().is_zero());
        }
    }

    #[test]
    fn star_examples() {
        let h = PlanckParam::default();
        let one = e("1");
        let f = e("p^2*q + exp(q)");
        assert_eq!(star(&f, &one, &ps(), &h, 6, SeriesCoefficients::Factorial).unwrap().value, f);
        let r = star(&e("p"), &e("exp(q)"), &ps(), &h, 6, SeriesCoefficients::Factorial).unwrap();
        assert_eq!(r.value, e("p*exp(q) + (-1/2 i)*exp(q)"));
        assert!(r.exact);
        let r = star(&e("exp(p)"), &e("exp(q)"), &ps(), &h, 3, SeriesCoefficients::Factorial).unwrap();
        assert!(!r.exact);
    }

    #[test]
    fn series_modes_differ_at_third_order() {
        let h = PlanckParam::default();
        let a = star(&e("q^3"), &e("p^3"), &ps(), &h, 3, SeriesCoefficients::Factorial).unwrap().value;
        let b = star(&e("q^3"), &e("p^3"), &ps(), &h, 3, SeriesCoefficients::Reciprocal).unwrap().value;
        assert_ne!(a, b);
    }

    #[test]
    fn left_operator_examples() {
        let h = PlanckParam::new(ExactScalar::ratio(1, 3)).unwrap();
        let v = ps().vars().clone();
        // ℓ_p = (i/h)(p + (h/2i) ∂_q)
        let lp = left_star_operator(&e("p"), &ps(), &h).unwrap();
        let expected = DiffOperator::multiplication(&e("p"))
            .checked_add(&DiffOperator::derivative(&v, "q").unwrap().scale(&h.t()))
            .unwrap()
            .scale(&h.i_over_h());
        assert_eq!(lp, expected);
        // ℓ for e^q: e^q · u(p − t, q)
        let le = left_star_operator(&e("exp(q)"), &ps(), &h).unwrap();
        let tau = DiffOperator::translation(&v, vec![-h.t(), ExactScalar::zero()]).unwrap();
        let expected = DiffOperator::multiplication(&e("exp(q)")).compose(&tau).unwrap().scale(&h.i_over_h());
        assert_eq!(le, expected);
        assert!(left_star_operator(&e("0"), &ps(), &h).unwrap().is_zero());
    }

    #[test]
    fn left_operator_agrees_with_terminating_series() {
        let h = PlanckParam::new(ExactScalar::ratio(2, 5)).unwrap();
        let f = e("p^2*q + (1/2)*q*exp(2*q) - p");
        let g = e("p^3 + q^2*p - 7");
        let s = star(&f, &g, &ps(), &h, 8, SeriesCoefficients::Factorial).unwrap();
        assert!(s.exact);
        let op = star_left_operator(&f, &ps(), &h).unwrap();
        assert_eq!(op.apply(&g).unwrap(), s.value);
    }

    #[test]
    fn commutator_identity_on_every_chart() {
        let h = PlanckParam::new(ExactScalar::ratio(3, 4)).unwrap();
        for fam in OrbitFamily::ALL.into_iter().filter(|f| f.dim() > 0) {
            let o = OrbitDescriptor::new(fam, fam.has_lambda().then(|| ExactScalar::ratio(1, 2))).unwrap();
            for mode in [SeriesCoefficients::Factorial, SeriesCoefficients::Reciprocal] {
                let r = star_commutator_check(&o, 0, 6, &h, mode, Execution::Sequential).unwrap();
                assert!(r.pass, "{fam} {mode:?}");
            }
        }
    }

    #[test]
    fn sl2_second_order_term_survives() {
        let o = OrbitDescriptor::new(OrbitFamily::Sl2Hyperboloid, Some(ExactScalar::one())).unwrap();
        let r = star_commutator_check(&o, 0, 6, &PlanckParam::default(), SeriesCoefficients::Factorial, Execution::Sequential).unwrap();
        let xx = r.pairs.iter().find(|p| p.a == "X" && p.b == "X").unwrap();
        assert_eq!(xx.nonvanishing_p_r, vec![2]);
    }

    #[test]
    fn determinant_of_affc_structure() {
        let v = VarSet::new(&["p1", "q1", "p2", "q2"]).unwrap();
        let s = PoissonStructure::from_pairs(&v, &[("p1", "q1", 1), ("p2", "q2", -1)]).unwrap();
        assert_eq!(determinant(s.lambda()), ExactScalar::one());
        let f = ExpPoly::var(&v, "p1").unwrap();
        let g = ExpPoly::var(&v, "q1").unwrap();
        assert_eq!(poisson(&f, &g, &s).unwrap(), ExpPoly::one(&v));
    }
}
