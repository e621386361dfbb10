//! Closed-form unitary representations sampled on grids, and the affR
//! evolution check against them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::grid::{evolve, Axis, GridField};
use super::hat::{hat_ell, restrict_to_combination};
use crate::error::{Error, Result};
use crate::liealg::{AlgebraName, LieAlgebra};
use crate::moyal::PlanckParam;
use crate::orbits::{OrbitDescriptor, OrbitFamily};
use crate::symalg::ExactScalar;

/// `(T(a,b) f)(y) = e^{(i/h) b y} f(a y)`, sampled at `y = e^s` on an `s`-axis.
pub fn rep_action_affr(a: f64, b: f64, h: f64, f: &dyn Fn(f64) -> Complex64, s_axis: &Axis) -> Result<GridField> {
    if a <= 0.0 || !a.is_finite() {
        return Err(Error::Domain(format!("affR representation needs a > 0, got {a}")));
    }
    if h == 0.0 {
        return Err(Error::Domain("h must be nonzero".into()));
    }
    GridField::from_fn(vec![s_axis.clone()], |s| {
        let y = s[0].exp();
        Complex64::new(0.0, b * y / h).exp() * f(a * y)
    })
}

/// `x ⊕ z = ℜ(x+z) + 2πi{ℑ(x+z)/2π}` (fractional part).
pub fn oplus(x: Complex64, z: Complex64) -> Complex64 {
    let s = x + z;
    let frac = (s.im / (2.0 * PI)).rem_euclid(1.0);
    Complex64::new(s.re, 2.0 * PI * frac)
}

/// `[T_θ(z,w) f](x) = exp((i/h)ℜ(wx) + 2πiθ⌊ℑ(x+z)/2π⌋) f(x ⊕ z)` on a grid
/// over `(ℜx, ℑx) ∈ ℝ × [0, 2π)`.
pub fn rep_action_affc(
    z: Complex64,
    w: Complex64,
    theta: f64,
    h: f64,
    f: &dyn Fn(Complex64) -> Complex64,
    axes: [Axis; 2],
) -> Result<GridField> {
    if h == 0.0 {
        return Err(Error::Domain("h must be nonzero".into()));
    }
    if !(theta.is_finite() && z.re.is_finite() && z.im.is_finite() && w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Domain("group parameters must be finite".into()));
    }
    GridField::from_fn(axes.to_vec(), |p| {
        let x = Complex64::new(p[0], p[1]);
        let winding = ((x + z).im / (2.0 * PI)).floor();
        let phase = Complex64::new(0.0, (w * x).re / h + 2.0 * PI * theta * winding);
        phase.exp() * f(oplus(x, z))
    })
}

pub const AFFR_GRID: usize = 1024;
pub const AFFR_S_RANGE: (f64, f64) = (-3.0, 3.0);
pub const TEST_CENTER: f64 = 0.5;
pub const TEST_WIDTH: f64 = 0.25;

/// Gaussian bump in `s = ln y`.
pub fn affr_test_function(y: f64) -> Complex64 {
    if y <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let s = y.ln();
    Complex64::new((-(s - TEST_CENTER).powi(2) / (2.0 * TEST_WIDTH * TEST_WIDTH)).exp(), 0.0)
}

/// Group parameters of `exp(t(αX + βY))` acting as `(a, b)`.
pub fn affr_group_params(alpha: f64, beta: f64, t: f64) -> (f64, f64) {
    let a = (alpha * t).exp();
    let b = if alpha.abs() < 1e-12 { beta * t } else { beta * ((alpha * t).exp() - 1.0) / alpha };
    (a, b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionReport {
    pub algebra: AlgebraName,
    pub element: Vec<ExactScalar>,
    pub t: f64,
    pub h: ExactScalar,
    pub grid: usize,
    pub generator: String,
    pub steps: usize,
    pub dt: f64,
    /// `‖U(t)f − T(exp tA)f‖ / ‖T(exp tA)f‖`.
    pub rel_l2_error: f64,
    /// `|‖U(t)f‖ − ‖f‖| / (‖f‖ · max(t, 1))`.
    pub norm_drift_per_unit_time: f64,
    pub oracle: (f64, f64),
}

/// Evolves `ℓ̂_A` of the upper affR orbit, restricted to functions of
/// `s = q − (h/2)η`, and compares with the closed-form representation.
pub fn affr_evolution_check(alpha: &ExactScalar, beta: &ExactScalar, t: f64, grid: usize, h: &PlanckParam) -> Result<EvolutionReport> {
    if !h.value().is_real() {
        return Err(Error::Domain("evolution needs a real h".into()));
    }
    let orbit = OrbitDescriptor::new(OrbitFamily::AffRUpper, None)?;
    let g = LieAlgebra::new(AlgebraName::AffR);
    let a = g.element(vec![alpha.clone(), beta.clone()])?;
    let hat = hat_ell(&orbit, &a, h)?;
    let weights = [-(h.value() * &ExactScalar::ratio(1, 2)), ExactScalar::one()];
    let gen = restrict_to_combination(&hat, &weights, "s")?;
    let axis = Axis::new("s", AFFR_S_RANGE.0, AFFR_S_RANGE.1, grid)?;
    let f0 = GridField::from_fn(vec![axis.clone()], |s| affr_test_function(s[0].exp()))?;
    let ev = evolve(&gen, &f0, t, None)?;
    let hf = h.value().to_complex().re;
    let (ga, gb) = affr_group_params(alpha.to_complex().re, beta.to_complex().re, t);
    let oracle = rep_action_affr(ga, gb, hf, &affr_test_function, &axis)?;
    let rel = ev.field.rel_l2_error(&oracle)?;
    let drift = (ev.norm_final - ev.norm_initial).abs() / (ev.norm_initial * t.abs().max(1.0));
    Ok(EvolutionReport {
        algebra: AlgebraName::AffR,
        element: vec![alpha.clone(), beta.clone()],
        t,
        h: h.value().clone(),
        grid,
        generator: gen.to_expr_string(),
        steps: ev.steps,
        dt: ev.dt,
        rel_l2_error: rel,
        norm_drift_per_unit_time: drift,
        oracle: (ga, gb),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affr_identity_and_dilation() {
        let ax = Axis::new("s", -3.0, 3.0, 64).unwrap();
        let id = rep_action_affr(1.0, 0.0, 1.0, &affr_test_function, &ax).unwrap();
        let f = GridField::from_fn(vec![ax.clone()], |s| affr_test_function(s[0].exp())).unwrap();
        assert_eq!(id, f);
        let dil = rep_action_affr(2.0, 0.0, 1.0, &affr_test_function, &ax).unwrap();
        for (j, v) in dil.data.iter().enumerate() {
            let y = ax.point(j).exp();
            assert!((v - affr_test_function(2.0 * y)).norm() < 1e-15);
        }
        assert!(rep_action_affr(0.0, 1.0, 1.0, &affr_test_function, &ax).is_err());
    }

    #[test]
    fn affc_identity() {
        let axes = [Axis::new("x1", -8.0 * PI, 8.0 * PI, 32).unwrap(), Axis::new("x2", 0.0, 2.0 * PI, 16).unwrap()];
        let f = |x: Complex64| Complex64::new((-x.re * x.re / 10.0).exp(), 0.0) * Complex64::new(0.0, x.im).exp();
        let zero = Complex64::new(0.0, 0.0);
        let g = rep_action_affc(zero, zero, 0.0, 1.0, &f, axes.clone()).unwrap();
        let want = GridField::from_fn(axes.to_vec(), |p| f(Complex64::new(p[0], p[1]))).unwrap();
        assert!(g.rel_l2_error(&want).unwrap() < 1e-15);
    }

    #[test]
    fn oplus_wraps_imaginary_part() {
        let r = oplus(Complex64::new(1.0, 5.0), Complex64::new(0.5, 2.0));
        assert!((r.re - 1.5).abs() < 1e-15);
        assert!((r.im - (7.0 - 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn group_parameters() {
        assert_eq!(affr_group_params(0.0, 2.0, 0.5), (1.0, 1.0));
        let (a, b) = affr_group_params(1.0, 0.0, 0.25);
        assert!((a - 0.25f64.exp()).abs() < 1e-15 && b == 0.0);
    }

    #[test]
    fn small_grid_evolution() {
        let r = affr_evolution_check(&ExactScalar::one(), &ExactScalar::zero(), 0.25, 256, &PlanckParam::default()).unwrap();
        assert!(r.rel_l2_error < 1e-3, "{r:?}");
    }
}
