//! Partial Fourier conjugation `L ↦ F ∘ L ∘ F⁻¹` for the kernel
//! `F(u)(η) = (1/2π) ∫ e^{−ipη} u(p) dp`, under which
//! `∂_p ↦ iη·`, `p· ↦ i∂_η` and `u(p + a) ↦ e^{iaη}·`.

use super::DiffOperator;
use crate::error::Result;
use crate::symalg::{ExactScalar, ExpPoly};

pub fn fourier_conjugate(op: &DiffOperator, var: &str, dual_var: &str) -> Result<DiffOperator> {
    let old = op.vars().clone();
    let idx = old.index(var)?;
    let new = old.rename(var, dual_var)?;
    let n = new.len();
    let i = ExactScalar::i();
    let eta = ExpPoly::var(&new, dual_var)?;
    let d_eta = DiffOperator::derivative(&new, dual_var)?;
    let mut out = DiffOperator::zero(&new);
    for (key, coeff) in op.terms() {
        // remaining part acting on the other variables
        let mut rest_key = key.clone();
        rest_key.derivs[idx] = 0;
        rest_key.shift[idx] = ExactScalar::zero();
        let rest = DiffOperator::from_term(rest_key, ExpPoly::one(&new))?;

        // e^{i a η} (iη)^k
        let a = &key.shift[idx];
        let k = key.derivs[idx];
        let mut freqs = vec![ExactScalar::zero(); n];
        freqs[idx] = &i * a;
        let phase = ExpPoly::exp_linear(&new, freqs, ExactScalar::zero())?;
        let mult = &phase * &eta.scale(&i).pow(k);
        let inner = DiffOperator::multiplication(&mult).compose(&rest)?;

        for (j, cj) in coeff.coefficients_in(idx)?.into_iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let cj = cj.with_vars(&new)?;
            // (i ∂_η)^j
            let mut pj = DiffOperator::identity(&new);
            for _ in 0..j {
                pj = pj.compose(&d_eta)?.scale(&i);
            }
            let term = DiffOperator::multiplication(&cj).compose(&pj)?.compose(&inner)?;
            out = out.checked_add(&term)?;
        }
    }
    Ok(out)
}
