use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::symalg::{ExactScalar, ExpPoly, VarSet};

/// Term key of a [`DiffOperator`]: `u ↦ (∂^derivs u)(x + shift)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct OpKey {
    pub derivs: Vec<u32>,
    pub shift: Vec<ExactScalar>,
}

impl OpKey {
    pub fn identity(n: usize) -> Self {
        Self { derivs: vec![0; n], shift: vec![ExactScalar::zero(); n] }
    }

    pub fn order(&self) -> u32 {
        self.derivs.iter().sum()
    }

    pub fn has_shift(&self) -> bool {
        self.shift.iter().any(|s| !s.is_zero())
    }
}

/// `(Lu)(x) = Σ c_k(x) · (∂^{d_k} u)(x + s_k)` with exponential-polynomial
/// coefficients `c_k`, multi-indices `d_k` and constant Gaussian-rational
/// shifts `s_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOperator {
    vars: VarSet,
    terms: BTreeMap<OpKey, ExpPoly>,
}

impl DiffOperator {
    pub fn zero(vars: &VarSet) -> Self {
        Self { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(vars: &VarSet) -> Self {
        Self::multiplication(&ExpPoly::one(vars))
    }

    pub fn multiplication(f: &ExpPoly) -> Self {
        let mut out = Self::zero(f.vars());
        out.add_term(OpKey::identity(f.vars().len()), f.clone());
        out
    }

    pub fn derivative(vars: &VarSet, name: &str) -> Result<Self> {
        let idx = vars.index(name)?;
        let mut key = OpKey::identity(vars.len());
        key.derivs[idx] = 1;
        let mut out = Self::zero(vars);
        out.add_term(key, ExpPoly::one(vars));
        Ok(out)
    }

    /// Translation `u ↦ u(x + s)`.
    pub fn translation(vars: &VarSet, shift: Vec<ExactScalar>) -> Result<Self> {
        if shift.len() != vars.len() {
            return Err(Error::DimensionMismatch { expected: vars.len(), got: shift.len() });
        }
        let mut out = Self::zero(vars);
        out.add_term(OpKey { derivs: vec![0; vars.len()], shift }, ExpPoly::one(vars));
        Ok(out)
    }

    pub fn from_term(key: OpKey, coeff: ExpPoly) -> Result<Self> {
        let n = coeff.vars().len();
        if key.derivs.len() != n || key.shift.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: key.derivs.len() });
        }
        let mut out = Self::zero(coeff.vars());
        out.add_term(key, coeff);
        Ok(out)
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpKey, &ExpPoly)> {
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

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(OpKey::order).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, key: OpKey, coeff: ExpPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing = &*existing + &coeff;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&ExactScalar::int(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero(&self.vars);
        for (k, f) in &self.terms {
            out.add_term(k.clone(), f.scale(c));
        }
        out
    }

    /// Left multiplication by a function: `u ↦ f · (L u)`.
    pub fn premultiply(&self, f: &ExpPoly) -> Result<Self> {
        self.vars.ensure_same(f.vars())?;
        let mut out = Self::zero(&self.vars);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * f);
        }
        Ok(out)
    }

    pub fn apply(&self, u: &ExpPoly) -> Result<ExpPoly> {
        self.vars.ensure_same(u.vars())?;
        let mut out = ExpPoly::zero(&self.vars);
        for (k, c) in &self.terms {
            let du = u.partial_multi(&k.derivs).shift_all(&k.shift);
            out = &out + &(c * &du);
        }
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = Self::zero(&self.vars);
        for (ka, a) in &self.terms {
            for (kb, b) in &other.terms {
                for gamma in sub_multi_indices(&ka.derivs) {
                    let binom = multi_binomial(&ka.derivs, &gamma);
                    let coeff = a * &b.partial_multi(&gamma).shift_all(&ka.shift);
                    if coeff.is_zero() {
                        continue;
                    }
                    let derivs = ka.derivs.iter().zip(&gamma).zip(&kb.derivs).map(|((a, g), b)| a - g + b).collect();
                    let shift = ka.shift.iter().zip(&kb.shift).map(|(s, r)| s + r).collect();
                    out.add_term(OpKey { derivs, shift }, coeff.scale(&ExactScalar::int(binom)));
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.checked_sub(&other.compose(self)?)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(ExpPoly::max_abs_coeff).fold(0.0, f64::max)
    }

    pub fn to_expr_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let mut s = format!("({})", c.to_expr_string());
            let d: Vec<String> = k
                .derivs
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("d_{}", self.vars.name(i)) } else { format!("d_{}^{e}", self.vars.name(i)) })
                .collect();
            if !d.is_empty() {
                s.push_str(" * ");
                s.push_str(&d.join(" * "));
            }
            if k.has_shift() {
                let sh: Vec<String> = k
                    .shift
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(i, a)| format!("{} + {}", self.vars.name(i), a))
                    .collect();
                s.push_str(&format!(" @ [{}]", sh.join(", ")));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOperator[{}]({})", self.vars, self.to_expr_string())
    }
}

pub(crate) fn sub_multi_indices(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for g in 0..=a {
                let mut v = prefix.clone();
                v.push(g);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

pub(crate) fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for j in 0..k {
        acc = acc * (n - j) as i64 / (j + 1) as i64;
    }
    acc
}

pub(crate) fn multi_binomial(alpha: &[u32], gamma: &[u32]) -> i64 {
    alpha.iter().zip(gamma).map(|(&a, &g)| binomial(a, g)).product()
}
