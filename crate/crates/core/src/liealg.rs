//! Structure-constant presentations of aff(ℝ), aff(ℂ) (as a real
//! 4-dimensional algebra) and sl(2,ℝ), with exact adjoint matrices, the
//! float exponential `exp(−ad_U)` and the coadjoint action.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symalg::ExactScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AlgebraName {
    #[serde(rename = "affR")]
    AffR,
    #[serde(rename = "affC")]
    AffC,
    #[serde(rename = "sl2R")]
    Sl2R,
}

impl AlgebraName {
    pub const ALL: [AlgebraName; 3] = [AlgebraName::AffR, AlgebraName::AffC, AlgebraName::Sl2R];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraName::AffR => "affR",
            AlgebraName::AffC => "affC",
            AlgebraName::Sl2R => "sl2R",
        }
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgebraName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "affR" | "affR0" => Ok(AlgebraName::AffR),
            "affC" => Ok(AlgebraName::AffC),
            "sl2R" => Ok(AlgebraName::Sl2R),
            other => Err(Error::Usage(format!("unknown algebra `{other}` (expected affR | affC | sl2R)"))),
        }
    }
}

/// `[e_i, e_j] = Σ_k structure[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    pub name: AlgebraName,
    pub basis: Vec<&'static str>,
    pub structure: Vec<Vec<Vec<ExactScalar>>>,
    pub group_dim: usize,
}

impl LieAlgebra {
    pub fn new(name: AlgebraName) -> Self {
        let (basis, brackets): (Vec<&'static str>, Vec<(usize, usize, usize, i64)>) = match name {
            // [X, Y] = Y
            AlgebraName::AffR => (vec!["X", "Y"], vec![(0, 1, 1, 1)]),
            // [X1,Y1] = Y1, [X1,Y2] = Y2, [X2,Y1] = Y2, [X2,Y2] = -Y1
            AlgebraName::AffC => (
                vec!["X1", "X2", "Y1", "Y2"],
                vec![(0, 2, 2, 1), (0, 3, 3, 1), (1, 2, 3, 1), (1, 3, 2, -1)],
            ),
            // [H,X] = 2Y, [H,Y] = 2X, [X,Y] = -2H
            AlgebraName::Sl2R => (vec!["H", "X", "Y"], vec![(0, 1, 2, 2), (0, 2, 1, 2), (1, 2, 0, -2)]),
        };
        let n = basis.len();
        let mut structure = vec![vec![vec![ExactScalar::zero(); n]; n]; n];
        for (i, j, k, c) in brackets {
            structure[i][j][k] = ExactScalar::int(c);
            structure[j][i][k] = ExactScalar::int(-c);
        }
        Self { name, basis, structure, group_dim: n }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_element(&self, idx: usize) -> AlgElement {
        let mut coords = vec![ExactScalar::zero(); self.dim()];
        coords[idx] = ExactScalar::one();
        AlgElement { algebra: self.name, coords }
    }

    pub fn basis_index(&self, symbol: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| *b == symbol)
            .ok_or_else(|| Error::Usage(format!("`{symbol}` is not a basis element of {}", self.name)))
    }

    pub fn element(&self, coords: Vec<ExactScalar>) -> Result<AlgElement> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coords.len() });
        }
        Ok(AlgElement { algebra: self.name, coords })
    }

    pub fn dual(&self, coords: Vec<ExactScalar>) -> Result<DualVector> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coords.len() });
        }
        Ok(DualVector { algebra: self.name, coords })
    }

    fn check(&self, a: AlgebraName) -> Result<()> {
        if a == self.name {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(self.name.to_string(), a.to_string()))
        }
    }

    pub fn bracket(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check(a.algebra)?;
        self.check(b.algebra)?;
        let n = self.dim();
        let mut out = vec![ExactScalar::zero(); n];
        for i in 0..n {
            if a.coords[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b.coords[j].is_zero() {
                    continue;
                }
                let ab = &a.coords[i] * &b.coords[j];
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &(&ab * c);
                    }
                }
            }
        }
        Ok(AlgElement { algebra: self.name, coords: out })
    }

    /// Exact matrix of `ad_U`; column `j` holds the coordinates of `[U, e_j]`.
    pub fn ad_matrix(&self, u: &AlgElement) -> Result<ExactMatrix> {
        self.check(u.algebra)?;
        let n = self.dim();
        let mut m = vec![vec![ExactScalar::zero(); n]; n];
        for j in 0..n {
            let col = self.bracket(u, &self.basis_element(j))?;
            for k in 0..n {
                m[k][j] = col.coords[k].clone();
            }
        }
        Ok(ExactMatrix(m))
    }

    /// `exp(−ad_U)` by scaling and squaring.
    pub fn exp_neg_ad(&self, u: &AlgElement) -> Result<DMatrix<Complex64>> {
        let m = self.ad_matrix(u)?.to_complex().map(|z| -z);
        Ok(expm(&m))
    }

    /// `exp(−ad_U)` together with the relative Frobenius discrepancy against
    /// a plain truncated Taylor series of `terms` terms.
    pub fn exp_neg_ad_checked(&self, u: &AlgElement, terms: usize) -> Result<(DMatrix<Complex64>, f64)> {
        let m = self.ad_matrix(u)?.to_complex().map(|z| -z);
        let fast = expm(&m);
        let series = exp_taylor(&m, terms);
        let rel = (&fast - &series).norm() / series.norm().max(f64::MIN_POSITIVE);
        Ok((fast, rel))
    }

    /// Coordinates of `K(exp U)F`, defined by `⟨K(exp U)F, Z⟩ = ⟨F, exp(−ad_U)Z⟩`.
    pub fn coadjoint(&self, u: &AlgElement, f: &DualVector) -> Result<Vec<Complex64>> {
        self.check(f.algebra)?;
        let e = self.exp_neg_ad(u)?;
        let fv: Vec<Complex64> = f.coords.iter().map(ExactScalar::to_complex).collect();
        Ok(apply_transpose(&e, &fv))
    }
}

pub(crate) fn apply_transpose(e: &DMatrix<Complex64>, f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    (0..n).map(|j| (0..n).map(|k| f[k] * e[(k, j)]).sum()).collect()
}

/// Scaling and squaring around a degree-16 Taylor polynomial; the scaled
/// matrix has 1-norm at most 1/2.
pub fn expm(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let norm1 = (0..n).map(|j| (0..n).map(|i| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm1 * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m.map(|z| z * scale);
    let mut result = exp_taylor(&a, 17);
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `Σ_{n<terms} Mⁿ/n!` evaluated term by term.
pub fn exp_taylor(m: &DMatrix<Complex64>, terms: usize) -> DMatrix<Complex64> {
    let n = m.nrows();
    let mut acc = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..terms {
        term = (&term * m).map(|z| z / k as f64);
        acc += &term;
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix(pub Vec<Vec<ExactScalar>>);

impl ExactMatrix {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(ExactScalar::is_zero)
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.0[i][j].to_complex())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement {
    pub algebra: AlgebraName,
    pub coords: Vec<ExactScalar>,
}

impl AlgElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(ExactScalar::is_zero)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self { algebra: self.algebra, coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(self.algebra.to_string(), other.algebra.to_string()));
        }
        Ok(Self { algebra: self.algebra, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    pub algebra: AlgebraName,
    pub coords: Vec<ExactScalar>,
}

impl DualVector {
    pub fn pair(&self, a: &AlgElement) -> Result<ExactScalar> {
        if self.algebra != a.algebra {
            return Err(Error::AlgebraMismatch(self.algebra.to_string(), a.algebra.to_string()));
        }
        Ok(self.coords.iter().zip(&a.coords).map(|(f, x)| f * x).sum())
    }
}
