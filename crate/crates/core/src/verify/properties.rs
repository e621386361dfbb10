//! Seeded randomized algebraic identities, evaluated exactly.

use super::sample::{case_rng, random_exppoly, random_operator};
use super::{Case, CaseStatus};
use crate::error::Result;
use crate::exec::Execution;
use crate::moyal::{poisson, star_h_coefficients, PoissonStructure};
use crate::symalg::{ExpPoly, VarSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    PoissonJacobi,
    OperatorJacobi,
    DerivationLaw,
    StarAssociativity,
}

impl Property {
    pub const ALL: [Property; 4] =
        [Property::PoissonJacobi, Property::OperatorJacobi, Property::DerivationLaw, Property::StarAssociativity];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::PoissonJacobi => "poisson_jacobi",
            Property::OperatorJacobi => "operator_jacobi",
            Property::DerivationLaw => "derivation_law",
            Property::StarAssociativity => "star_associativity_h3",
        }
    }
}

/// Even cases use `(p, q)`, odd cases the affC-type structure on
/// `(p1, q1, p2, q2)`.
fn structure(index: u64) -> (PoissonStructure, Vec<usize>) {
    if index.is_multiple_of(2) {
        (PoissonStructure::standard(), vec![1])
    } else {
        let vs = VarSet::new(&["p1", "q1", "p2", "q2"]).expect("distinct names");
        let ps = PoissonStructure::from_pairs(&vs, &[("p1", "q1", 1), ("p2", "q2", -1)]).expect("nondegenerate");
        (ps, vec![1, 3])
    }
}

/// Residual magnitude of one randomized case.
pub fn property_case(prop: Property, seed: u64, index: u64) -> Result<f64> {
    let mut rng = case_rng(seed, prop.as_str(), index);
    let (ps, exp_vars) = structure(index);
    let vs = ps.vars().clone();
    let mut f = || random_exppoly(&mut rng, &vs, 2, 3, &exp_vars);
    match prop {
        Property::PoissonJacobi => {
            let (a, b, c) = (f(), f(), f());
            let br = |x: &ExpPoly, y: &ExpPoly| poisson(x, y, &ps);
            let s = &(&br(&a, &br(&b, &c)?)? + &br(&b, &br(&c, &a)?)?) + &br(&c, &br(&a, &b)?)?;
            Ok(s.max_abs_coeff())
        }
        Property::DerivationLaw => {
            let (a, b, c) = (f(), f(), f());
            let lhs = poisson(&a, &(&b * &c), &ps)?;
            let rhs = &(&poisson(&a, &b, &ps)? * &c) + &(&b * &poisson(&a, &c, &ps)?);
            Ok((&lhs - &rhs).max_abs_coeff())
        }
        Property::StarAssociativity => {
            const N: u32 = 3;
            let (a, b, c) = (f(), f(), f());
            let ab = star_h_coefficients(&a, &b, &ps, N)?;
            let bc = star_h_coefficients(&b, &c, &ps, N)?;
            let mut worst = 0.0f64;
            for n in 0..=N as usize {
                let mut lhs = ExpPoly::zero(&vs);
                let mut rhs = ExpPoly::zero(&vs);
                for k in 0..=n {
                    lhs = &lhs + &star_h_coefficients(&ab[k], &c, &ps, N)?[n - k];
                    rhs = &rhs + &star_h_coefficients(&a, &bc[k], &ps, N)?[n - k];
                }
                worst = worst.max((&lhs - &rhs).max_abs_coeff());
            }
            Ok(worst)
        }
        Property::OperatorJacobi => {
            let (a, b, c) = (
                random_operator(&mut rng, &vs, &exp_vars),
                random_operator(&mut rng, &vs, &exp_vars),
                random_operator(&mut rng, &vs, &exp_vars),
            );
            let s = a
                .commutator(&b.commutator(&c)?)?
                .checked_add(&b.commutator(&c.commutator(&a)?)?)?
                .checked_add(&c.commutator(&a.commutator(&b)?)?)?;
            Ok(s.max_abs_coeff())
        }
    }
}

pub(super) fn property_cases(seed: u64, cases: usize, exec: Execution) -> Vec<Case> {
    Property::ALL
        .into_iter()
        .map(|prop| {
            let results = exec.map((0..cases as u64).collect(), |i| property_case(prop, seed, i));
            let mut worst = 0.0f64;
            let mut failures = 0usize;
            let mut notes = vec![format!("{cases} cases, seed {seed}")];
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(m) => {
                        worst = worst.max(m);
                        failures += usize::from(m != 0.0);
                    }
                    Err(e) => {
                        failures += 1;
                        notes.push(format!("case {i}: {e}"));
                    }
                }
            }
            if failures > 0 {
                notes.push(format!("{failures} failing cases"));
            }
            Case {
                id: prop.as_str().to_string(),
                status: if failures == 0 { CaseStatus::Pass } else { CaseStatus::Fail },
                residual: worst,
                notes,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_few_cases_of_each() {
        for prop in Property::ALL {
            for i in 0..4 {
                assert_eq!(property_case(prop, 11, i).unwrap(), 0.0, "{} #{i}", prop.as_str());
            }
        }
    }
}
