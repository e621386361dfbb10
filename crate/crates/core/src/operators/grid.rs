//! Uniform periodic grids, spectral application of [`DiffOperator`]s and
//! RK4 time stepping.

use num_complex::Complex64;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::DiffOperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    /// Periodic axis on `[min, max)` with `n` points (`n` a power of two).
    pub fn new(name: &str, min: f64, max: f64, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::Domain(format!("grid size {n} is not a power of two")));
        }
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::Domain(format!("invalid grid range [{min}, {max}]")));
        }
        Ok(Self { name: name.to_string(), min, max, n })
    }

    pub fn dx(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.min + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    /// Angular wavenumbers in FFT order; the Nyquist entry is `None`.
    fn wavenumbers(&self) -> Vec<Option<f64>> {
        let l = self.max - self.min;
        let n = self.n as i64;
        (0..n)
            .map(|j| {
                if j == n / 2 {
                    None
                } else {
                    let m = if j < n / 2 { j } else { j - n };
                    Some(2.0 * std::f64::consts::PI * m as f64 / l)
                }
            })
            .collect()
    }

    pub fn k_max(&self) -> f64 {
        std::f64::consts::PI / self.dx()
    }
}

/// Samples on a 1-D or 2-D grid, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub axes: Vec<Axis>,
    pub data: Vec<Complex64>,
}

impl GridField {
    pub fn from_fn(axes: Vec<Axis>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::Domain("grids must be 1-D or 2-D".into()));
        }
        let total: usize = axes.iter().map(|a| a.n).product();
        let mut data = Vec::with_capacity(total);
        let mut x = vec![0.0; axes.len()];
        for flat in 0..total {
            let mut rem = flat;
            for (d, a) in axes.iter().enumerate().rev() {
                x[d] = a.point(rem % a.n);
                rem /= a.n;
            }
            data.push(f(&x));
        }
        Ok(Self { axes, data })
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::dx).product()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell_volume()).sqrt()
    }

    /// `‖self − other‖ / ‖other‖`.
    pub fn rel_l2_error(&self, other: &Self) -> Result<f64> {
        if self.axes != other.axes {
            return Err(Error::Domain("grid fields live on different grids".into()));
        }
        let num: f64 = self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = other.data.iter().map(|b| b.norm_sqr()).sum();
        Ok((num / den.max(f64::MIN_POSITIVE)).sqrt())
    }

    fn points(&self) -> Vec<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.data.len());
        let total = self.data.len();
        for flat in 0..total {
            let mut rem = flat;
            let mut x = vec![Complex64::new(0.0, 0.0); self.axes.len()];
            for (d, a) in self.axes.iter().enumerate().rev() {
                x[d] = Complex64::new(a.point(rem % a.n), 0.0);
                rem /= a.n;
            }
            out.push(x);
        }
        out
    }
}

struct Plans {
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl Plans {
    fn new(axes: &[Axis]) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        Self {
            forward: axes.iter().map(|a| planner.plan_fft_forward(a.n)).collect(),
            inverse: axes.iter().map(|a| planner.plan_fft_inverse(a.n)).collect(),
        }
    }

    fn run(&self, axes: &[Axis], data: &mut [Complex64], inverse: bool) {
        let plans = if inverse { &self.inverse } else { &self.forward };
        match axes.len() {
            1 => plans[0].process(data),
            _ => {
                let (n0, n1) = (axes[0].n, axes[1].n);
                for row in data.chunks_mut(n1) {
                    plans[1].process(row);
                }
                let mut col = vec![Complex64::new(0.0, 0.0); n0];
                for j in 0..n1 {
                    for i in 0..n0 {
                        col[i] = data[i * n1 + j];
                    }
                    plans[0].process(&mut col);
                    for i in 0..n0 {
                        data[i * n1 + j] = col[i];
                    }
                }
            }
        }
        if inverse {
            let scale = 1.0 / data.len() as f64;
            for z in data.iter_mut() {
                *z *= scale;
            }
        }
    }
}

struct CompiledTerm {
    coeff: Vec<Complex64>,
    /// Fourier multiplier; `None` for pure multiplication.
    symbol: Option<Vec<Complex64>>,
}

/// A [`DiffOperator`] sampled on a fixed grid.
pub struct GridOperator {
    axes: Vec<Axis>,
    plans: Plans,
    terms: Vec<CompiledTerm>,
    rate: f64,
}

impl GridOperator {
    pub fn new(op: &DiffOperator, axes: &[Axis]) -> Result<Self> {
        let names: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
        if op.vars().names().iter().map(String::as_str).ne(names.iter().copied()) {
            return Err(Error::VarSetMismatch { left: op.vars().to_string(), right: names.join(", ") });
        }
        let probe = GridField { axes: axes.to_vec(), data: vec![Complex64::new(0.0, 0.0); axes.iter().map(|a| a.n).product()] };
        let pts = probe.points();
        let ks: Vec<Vec<Option<f64>>> = axes.iter().map(Axis::wavenumbers).collect();
        let mut terms = Vec::new();
        let mut rate = 0.0;
        for (key, c) in op.terms() {
            if key.shift.iter().any(|s| !s.is_real()) {
                return Err(Error::UnsupportedClass("complex shifts cannot be realized on a real grid".into()));
            }
            let coeff: Vec<Complex64> = pts.iter().map(|x| c.eval_unchecked(x)).collect();
            let cmax = coeff.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let mut kfac = 1.0;
            let symbol = if key.order() == 0 && !key.has_shift() {
                None
            } else {
                let shifts: Vec<f64> = key.shift.iter().map(|s| s.to_complex().re).collect();
                let mut sym = Vec::with_capacity(probe.data.len());
                for flat in 0..probe.data.len() {
                    let mut rem = flat;
                    let mut v = Complex64::new(1.0, 0.0);
                    for d in (0..axes.len()).rev() {
                        let j = rem % axes[d].n;
                        rem /= axes[d].n;
                        let touched = key.derivs[d] > 0 || shifts[d] != 0.0;
                        match ks[d][j] {
                            Some(k) => {
                                v *= (Complex64::i() * k).powu(key.derivs[d]) * Complex64::from_polar(1.0, k * shifts[d]);
                            }
                            None if touched => v = Complex64::new(0.0, 0.0),
                            None => {}
                        }
                    }
                    sym.push(v);
                }
                for (d, a) in axes.iter().enumerate() {
                    kfac *= a.k_max().powi(key.derivs[d] as i32);
                }
                Some(sym)
            };
            rate += cmax * kfac;
            terms.push(CompiledTerm { coeff, symbol });
        }
        Ok(Self { axes: axes.to_vec(), plans: Plans::new(axes), terms, rate })
    }

    /// Upper bound on the spectral radius used for the CFL step.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); u.len()];
        let mut spectrum: Option<Vec<Complex64>> = None;
        for t in &self.terms {
            match &t.symbol {
                None => {
                    for ((o, c), x) in out.iter_mut().zip(&t.coeff).zip(u) {
                        *o += c * x;
                    }
                }
                Some(sym) => {
                    let spec = spectrum.get_or_insert_with(|| {
                        let mut s = u.to_vec();
                        self.plans.run(&self.axes, &mut s, false);
                        s
                    });
                    let mut buf: Vec<Complex64> = spec.iter().zip(sym).map(|(a, b)| a * b).collect();
                    self.plans.run(&self.axes, &mut buf, true);
                    for ((o, c), x) in out.iter_mut().zip(&t.coeff).zip(&buf) {
                        *o += c * x;
                    }
                }
            }
        }
        out
    }
}

pub fn apply_grid(op: &DiffOperator, u: &GridField) -> Result<GridField> {
    let g = GridOperator::new(op, &u.axes)?;
    Ok(GridField { axes: u.axes.clone(), data: g.apply(&u.data) })
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub field: GridField,
    pub steps: usize,
    pub dt: f64,
    pub norm_initial: f64,
    pub norm_final: f64,
}

pub const CFL: f64 = 0.25;

/// Solves `∂_t u = L u`, `u(0) = f0` with classical RK4; the step count is
/// chosen from the CFL factor unless given.
pub fn evolve(op: &DiffOperator, f0: &GridField, t: f64, steps: Option<usize>) -> Result<Evolution> {
    let g = GridOperator::new(op, &f0.axes)?;
    let steps = match steps {
        Some(s) => s.max(1),
        None => ((t.abs() * g.rate() / CFL).ceil() as usize).max(1),
    };
    let dt = t / steps as f64;
    let norm_initial = f0.l2_norm();
    let mut u = f0.data.clone();
    let axpy = |a: &[Complex64], b: &[Complex64], s: f64| -> Vec<Complex64> { a.iter().zip(b).map(|(x, y)| x + y * s).collect() };
    for step in 0..steps {
        let k1 = g.apply(&u);
        let k2 = g.apply(&axpy(&u, &k1, dt / 2.0));
        let k3 = g.apply(&axpy(&u, &k2, dt / 2.0));
        let k4 = g.apply(&axpy(&u, &k3, dt));
        for i in 0..u.len() {
            u[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
        let field = GridField { axes: f0.axes.clone(), data: u };
        let current = field.l2_norm();
        if !current.is_finite() || current > 10.0 * norm_initial.max(f64::MIN_POSITIVE) {
            return Err(Error::Instability { initial: norm_initial, current, time: dt * (step + 1) as f64 });
        }
        u = field.data;
    }
    let field = GridField { axes: f0.axes.clone(), data: u };
    let norm_final = field.l2_norm();
    Ok(Evolution { field, steps, dt, norm_initial, norm_final })
}
