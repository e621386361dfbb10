//! Exponential polynomials `Σ c · Πᵢ xᵢ^{αᵢ} · exp(Σᵢ λᵢ xᵢ + κ)`.
//!
//! Coefficients `c`, frequencies `λᵢ` and the constant offset `κ` are Gaussian
//! rationals. Keeping `κ` in the key (rather than folding `e^κ` into `c`) is
//! what makes `x ↦ x + a` exact for every Gaussian-rational `a`, and the
//! representation stays canonical: for distinct algebraic `κ` the numbers
//! `e^κ` are linearly independent over the algebraic numbers, so two
//! `ExpPoly` values denote the same function iff their term maps coincide.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{ExactScalar, VarSet};
use crate::error::{Error, Result};

/// Term key: polynomial exponents, exponential frequencies and the constant
/// offset inside the exponential.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub exps: Vec<u32>,
    pub freqs: Vec<ExactScalar>,
    pub offset: ExactScalar,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Self { exps: vec![0; n], freqs: vec![ExactScalar::zero(); n], offset: ExactScalar::zero() }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn has_exponential(&self) -> bool {
        !self.offset.is_zero() || self.freqs.iter().any(|f| !f.is_zero())
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            freqs: self.freqs.iter().zip(&other.freqs).map(|(a, b)| a + b).collect(),
            offset: &self.offset + &other.offset,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Descending total degree, then descending exponents, then ascending
/// frequencies and offset. This is the printing order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.exps.cmp(&self.exps))
            .then_with(|| self.freqs.cmp(&other.freqs))
            .then_with(|| self.offset.cmp(&other.offset))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ExpPoly {
    vars: VarSet,
    terms: BTreeMap<Monomial, ExactScalar>,
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for j in 0..k as i64 {
        acc = acc * (n as i64 - j) / (j + 1);
    }
    acc
}

impl ExpPoly {
    pub fn zero(vars: &VarSet) -> Self {
        Self { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarSet, c: ExactScalar) -> Self {
        let mut out = Self::zero(vars);
        out.add_term(Monomial::one(vars.len()), c);
        out
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, ExactScalar::one())
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<Self> {
        let idx = vars.index(name)?;
        let mut m = Monomial::one(vars.len());
        m.exps[idx] = 1;
        let mut out = Self::zero(vars);
        out.add_term(m, ExactScalar::one());
        Ok(out)
    }

    /// `exp(Σ freqs[i]·xᵢ + offset)`.
    pub fn exp_linear(vars: &VarSet, freqs: Vec<ExactScalar>, offset: ExactScalar) -> Result<Self> {
        if freqs.len() != vars.len() {
            return Err(Error::DimensionMismatch { expected: vars.len(), got: freqs.len() });
        }
        let exps = vec![0; vars.len()];
        let mut out = Self::zero(vars);
        out.add_term(Monomial { exps, freqs, offset }, ExactScalar::one());
        Ok(out)
    }

    /// `exp(c · x)` for a single variable.
    pub fn exp_var(vars: &VarSet, name: &str, c: ExactScalar) -> Result<Self> {
        let idx = vars.index(name)?;
        let mut freqs = vec![ExactScalar::zero(); vars.len()];
        freqs[idx] = c;
        Self::exp_linear(vars, freqs, ExactScalar::zero())
    }

    pub fn from_term(vars: &VarSet, m: Monomial, c: ExactScalar) -> Result<Self> {
        if m.exps.len() != vars.len() || m.freqs.len() != vars.len() {
            return Err(Error::DimensionMismatch { expected: vars.len(), got: m.exps.len() });
        }
        let mut out = Self::zero(vars);
        out.add_term(m, c);
        Ok(out)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The scalar value if this is a constant (no variables, no exponential).
    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.degree() == 0 && !m.has_exponential()).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero(&self.vars);
        if c.is_zero() {
            return out;
        }
        for (m, d) in &self.terms {
            out.terms.insert(m.clone(), d * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugate as a function of real variables.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let m2 = Monomial {
                exps: m.exps.clone(),
                freqs: m.freqs.iter().map(ExactScalar::conj).collect(),
                offset: m.offset.conj(),
            };
            out.add_term(m2, c.conj());
        }
        out
    }

    pub fn partial_idx(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let a = m.exps[idx];
            if a > 0 {
                let mut m2 = m.clone();
                m2.exps[idx] = a - 1;
                out.add_term(m2, c * &ExactScalar::int(a as i64));
            }
            let lam = &m.freqs[idx];
            if !lam.is_zero() {
                out.add_term(m.clone(), c * lam);
            }
        }
        out
    }

    /// Exact `∂/∂var` by the Leibniz rule.
    pub fn partial(&self, var: &str) -> Result<Self> {
        let idx = self.vars.index(var)?;
        Ok(self.partial_idx(idx))
    }

    /// Apply `∂^multi` (multi-index over the variable positions).
    pub fn partial_multi(&self, multi: &[u32]) -> Self {
        let mut out = self.clone();
        for (idx, &k) in multi.iter().enumerate() {
            for _ in 0..k {
                if out.is_zero() {
                    return out;
                }
                out = out.partial_idx(idx);
            }
        }
        out
    }

    pub fn shift_idx(&self, idx: usize, a: &ExactScalar) -> Self {
        if a.is_zero() {
            return self.clone();
        }
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let n = m.exps[idx];
            let phase = &m.freqs[idx] * a;
            for j in 0..=n {
                let mut m2 = m.clone();
                m2.exps[idx] = j;
                m2.offset = &m.offset + &phase;
                let coeff = c * &(&ExactScalar::int(binomial(n, j)) * &a.pow(n - j));
                out.add_term(m2, coeff);
            }
        }
        out
    }

    /// Exact substitution `var ↦ var + a`.
    pub fn shift(&self, var: &str, a: &ExactScalar) -> Result<Self> {
        let idx = self.vars.index(var)?;
        Ok(self.shift_idx(idx, a))
    }

    /// Shift every variable at once by the given offsets.
    pub fn shift_all(&self, offsets: &[ExactScalar]) -> Self {
        let mut out = self.clone();
        for (idx, a) in offsets.iter().enumerate() {
            out = out.shift_idx(idx, a);
        }
        out
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_complex();
            let mut expo = m.offset.to_complex();
            for (i, x) in point.iter().enumerate() {
                if m.exps[i] > 0 {
                    v *= x.powu(m.exps[i]);
                }
                if !m.freqs[i].is_zero() {
                    expo += m.freqs[i].to_complex() * x;
                }
            }
            if expo != Complex64::new(0.0, 0.0) {
                v *= expo.exp();
            }
            total += v;
        }
        total
    }

    /// Polynomial degree in one variable (ignores exponentials).
    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[idx]).max().unwrap_or(0)
    }

    /// Total polynomial degree in a subset of variables.
    pub fn degree_in_set(&self, idxs: &[usize]) -> u32 {
        self.terms.keys().map(|m| idxs.iter().map(|&i| m.exps[i]).sum()).max().unwrap_or(0)
    }

    /// True when no term carries an exponential frequency in `idx`.
    pub fn is_polynomial_in(&self, idx: usize) -> bool {
        self.terms.keys().all(|m| m.freqs[idx].is_zero())
    }

    /// Same terms over a variable set of identical length (positions kept).
    pub fn with_vars(&self, vars: &VarSet) -> Result<Self> {
        if vars.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: vars.len() });
        }
        Ok(Self { vars: vars.clone(), terms: self.terms.clone() })
    }

    /// Largest coefficient magnitude, as a float; 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex().norm()).fold(0.0, f64::max)
    }

    /// Split into `Σ_k x_idx^k · c_k` where each `c_k` has no `x_idx` factor.
    /// Fails if `x_idx` appears in an exponential.
    pub fn coefficients_in(&self, idx: usize) -> Result<Vec<Self>> {
        if !self.is_polynomial_in(idx) {
            return Err(Error::UnsupportedClass(format!(
                "exponential dependence on `{}`",
                self.vars.name(idx)
            )));
        }
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![Self::zero(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exps[idx] as usize;
            let mut m2 = m.clone();
            m2.exps[idx] = 0;
            out[k].add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Grammar form, e.g. `p*exp(q) + (-1/2 i)*exp(q)`.
    pub fn to_expr_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| self.fmt_term(m, c)).collect();
        parts.join(" + ")
    }

    fn fmt_term(&self, m: &Monomial, c: &ExactScalar) -> String {
        let mut factors = Vec::new();
        for (i, &e) in m.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(self.vars.name(i).to_string()),
                _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
            }
        }
        if m.has_exponential() {
            let mut items = Vec::new();
            for (i, f) in m.freqs.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                if f.is_one() {
                    items.push(self.vars.name(i).to_string());
                } else {
                    items.push(format!("({f})*{}", self.vars.name(i)));
                }
            }
            if !m.offset.is_zero() {
                items.push(format!("({})", m.offset));
            }
            factors.push(format!("exp({})", items.join(" + ")));
        }
        match (c.is_one(), factors.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => factors.join("*"),
            (false, true) => format!("({c})"),
            (false, false) => format!("({c})*{}", factors.join("*")),
        }
    }

    pub fn parse(vars: &VarSet, s: &str) -> Result<Self> {
        super::parse::parse_exppoly(vars, s)
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpPoly[{}]({})", self.vars, self.to_expr_string())
    }
}

// Operator forms panic on a variable-set mismatch; use the `checked_*`
// methods where the variable sets are not known to agree.
impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        self.checked_add(rhs).expect("ExpPoly + ExpPoly over different variable sets")
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self.checked_sub(rhs).expect("ExpPoly - ExpPoly over different variable sets")
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        self.checked_mul(rhs).expect("ExpPoly * ExpPoly over different variable sets")
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        self.scale(&ExactScalar::int(-1))
    }
}

impl Add for ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: ExpPoly) -> ExpPoly {
        &self + &rhs
    }
}

impl Sub for ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: ExpPoly) -> ExpPoly {
        &self - &rhs
    }
}

impl Mul for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: ExpPoly) -> ExpPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq() -> VarSet {
        VarSet::new(&["p", "q"]).unwrap()
    }

    fn s(n: i64) -> ExactScalar {
        ExactScalar::int(n)
    }

    #[test]
    fn cancellation_leaves_exp() {
        let v = pq();
        let p = ExpPoly::var(&v, "p").unwrap();
        let eq = ExpPoly::exp_var(&v, "q", s(1)).unwrap();
        let f = &p + &eq;
        assert_eq!(&f + &(-&p), eq);
        assert_eq!(&f + &ExpPoly::zero(&v), f);
    }

    #[test]
    fn euler_cosine() {
        let v = pq();
        let half = ExactScalar::ratio(1, 2);
        let cos = &ExpPoly::exp_var(&v, "q", ExactScalar::i()).unwrap().scale(&half)
            + &ExpPoly::exp_var(&v, "q", -ExactScalar::i()).unwrap().scale(&half);
        let at0 = cos.eval(&[Complex64::new(3.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!((at0 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn products() {
        let v = pq();
        let p = ExpPoly::var(&v, "p").unwrap();
        let eq = ExpPoly::exp_var(&v, "q", s(1)).unwrap();
        assert_eq!(&eq * &eq, ExpPoly::exp_var(&v, "q", s(2)).unwrap());
        let f = &p + &eq;
        let expected = &(&(&p * &p) + &(&p * &eq).scale(&s(2))) + &(&eq * &eq);
        assert_eq!(f.pow(2), expected);
    }

    #[test]
    fn partials() {
        let v = pq();
        let e2q = ExpPoly::exp_var(&v, "q", s(2)).unwrap();
        assert_eq!(e2q.partial("q").unwrap(), e2q.scale(&s(2)));
        let al = ExactScalar::ratio(3, 5);
        let be = ExactScalar::ratio(-2, 7);
        let h = &ExpPoly::var(&v, "p").unwrap().scale(&al)
            + &ExpPoly::exp_var(&v, "q", s(1)).unwrap().scale(&be);
        assert_eq!(h.partial("p").unwrap(), ExpPoly::constant(&v, al));
        let peiq = &ExpPoly::var(&v, "p").unwrap() * &ExpPoly::exp_var(&v, "q", ExactScalar::i()).unwrap();
        assert_eq!(peiq.partial("q").unwrap(), peiq.scale(&ExactScalar::i()));
        assert!(matches!(h.partial("x"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn shifts() {
        let v = pq();
        let p = ExpPoly::var(&v, "p").unwrap();
        let p2 = &p * &p;
        let expected = &(&p2 + &p.scale(&s(2))) + &ExpPoly::one(&v);
        assert_eq!(p2.shift("p", &s(1)).unwrap(), expected);
        let eq = ExpPoly::exp_var(&v, "q", s(1)).unwrap();
        assert_eq!(eq.shift("q", &ExactScalar::zero()).unwrap(), eq);
        let a = ExactScalar::gaussian(0, 1, -1, 2);
        let peq = &p * &eq;
        let expected = &(&p + &ExpPoly::constant(&v, a.clone())) * &eq;
        assert_eq!(peq.shift("p", &a).unwrap(), expected);
    }

    #[test]
    fn real_shift_of_exponential_is_exact() {
        let v = pq();
        let eq = ExpPoly::exp_var(&v, "q", s(1)).unwrap();
        let shifted = eq.shift("q", &s(1)).unwrap();
        let val = shifted.eval(&[Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!((val.re - std::f64::consts::E).abs() < 1e-14);
        assert_eq!(shifted.shift("q", &s(-1)).unwrap(), eq);
    }

    #[test]
    fn eval_examples() {
        let v = pq();
        let h = &ExpPoly::var(&v, "p").unwrap() + &ExpPoly::exp_var(&v, "q", s(1)).unwrap();
        let val = h.eval(&[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!((val - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        let eiq = ExpPoly::exp_var(&v, "q", ExactScalar::i()).unwrap();
        let val = eiq.eval(&[Complex64::new(0.0, 0.0), Complex64::new(std::f64::consts::PI, 0.0)]).unwrap();
        assert!((val + Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(eiq.eval(&[Complex64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn varset_mismatch_is_an_error() {
        let a = ExpPoly::one(&pq());
        let b = ExpPoly::one(&VarSet::new(&["x", "y"]).unwrap());
        assert!(matches!(a.checked_add(&b), Err(Error::VarSetMismatch { .. })));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn printing_order() {
        let v = pq();
        let p = ExpPoly::var(&v, "p").unwrap();
        let eq = ExpPoly::exp_var(&v, "q", s(1)).unwrap();
        let f = &(&p * &eq) + &eq.scale(&ExactScalar::gaussian(0, 1, -1, 2));
        assert_eq!(f.to_expr_string(), "p*exp(q) + (-1/2 i)*exp(q)");
        assert_eq!(ExpPoly::zero(&v).to_expr_string(), "0");
    }
}
