//! Seeded random inputs: rationals, labelled coadjoint points, ExpPoly and
//! operator generators.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::liealg::{AlgebraName, DualVector};
use crate::operators::{DiffOperator, OpKey};
use crate::orbits::OrbitFamily;
use crate::symalg::{ExactScalar, ExpPoly, Monomial, VarSet};

/// Independent stream for `(seed, label, index)`, so results do not depend
/// on scheduling.
pub fn case_rng(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Uniform rational `n/d` with `1 ≤ d ≤ max_den` and `|n/d| ≤ bound`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> ExactScalar {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(-bound * d..=bound * d);
    ExactScalar::ratio(n, d)
}

fn positive_rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> ExactScalar {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(1..=bound * d);
    ExactScalar::ratio(n, d)
}

fn random_gaussian<R: Rng>(rng: &mut R) -> ExactScalar {
    let re = random_rational(rng, 3, 4);
    if rng.gen_bool(0.3) {
        re + ExactScalar::i() * random_rational(rng, 2, 3)
    } else {
        re
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelledPoint {
    pub point: DualVector,
    pub family: OrbitFamily,
    /// `(f_H² + f_X² − f_Y²)/4` for sl2 points.
    pub casimir: Option<ExactScalar>,
}

fn q(v: &[ExactScalar; 3]) -> ExactScalar {
    &(&(&v[0] * &v[0]) + &(&v[1] * &v[1])) - &(&v[2] * &v[2])
}

fn b(u: &[ExactScalar; 3], v: &[ExactScalar; 3]) -> ExactScalar {
    &(&(&u[0] * &v[0]) + &(&u[1] * &v[1])) - &(&u[2] * &v[2])
}

/// Second intersection of the quadric `Q(f) = Q(base)` with a random
/// rational line through `base`.
fn point_on_quadric<R: Rng>(rng: &mut R, base: [ExactScalar; 3]) -> [ExactScalar; 3] {
    loop {
        let d = [random_rational(rng, 2, 5), random_rational(rng, 2, 5), random_rational(rng, 2, 5)];
        let qd = q(&d);
        if qd.is_zero() {
            continue;
        }
        let t = -(ExactScalar::int(2) * b(&base, &d)) / qd;
        return [&base[0] + &(&t * &d[0]), &base[1] + &(&t * &d[1]), &base[2] + &(&t * &d[2])];
    }
}

fn sl2_label(f: &[ExactScalar; 3]) -> LabelledPoint {
    let c = q(f) * ExactScalar::ratio(1, 4);
    let sign = c.real_sign().expect("real");
    let y_neg = f[2].real_sign() == Some(std::cmp::Ordering::Less);
    let family = match sign {
        std::cmp::Ordering::Greater => OrbitFamily::Sl2Hyperboloid,
        std::cmp::Ordering::Less if y_neg => OrbitFamily::Sl2TwofoldUpper,
        std::cmp::Ordering::Less => OrbitFamily::Sl2TwofoldLower,
        std::cmp::Ordering::Equal if f.iter().all(ExactScalar::is_zero) => OrbitFamily::Sl2Origin,
        std::cmp::Ordering::Equal if y_neg => OrbitFamily::Sl2UpperCone,
        std::cmp::Ordering::Equal => OrbitFamily::Sl2LowerCone,
    };
    LabelledPoint { point: DualVector { algebra: AlgebraName::Sl2R, coords: f.to_vec() }, family, casimir: Some(c) }
}

fn ints(c: &[(i64, i64)]) -> Vec<ExactScalar> {
    c.iter().map(|&(n, d)| ExactScalar::ratio(n, d)).collect()
}

fn boundary(algebra: AlgebraName) -> Vec<LabelledPoint> {
    let mk = |coords: Vec<ExactScalar>, family| LabelledPoint { point: DualVector { algebra, coords }, family, casimir: None };
    match algebra {
        AlgebraName::AffR => vec![
            mk(ints(&[(0, 1), (0, 1)]), OrbitFamily::AffRPoint),
            mk(ints(&[(3, 1), (0, 1)]), OrbitFamily::AffRPoint),
            mk(ints(&[(-1, 2), (0, 1)]), OrbitFamily::AffRPoint),
            mk(ints(&[(0, 1), (1, 1)]), OrbitFamily::AffRUpper),
            mk(ints(&[(5, 1), (1, 7)]), OrbitFamily::AffRUpper),
            mk(ints(&[(0, 1), (-1, 1)]), OrbitFamily::AffRLower),
            mk(ints(&[(-2, 3), (-1, 100)]), OrbitFamily::AffRLower),
        ],
        AlgebraName::AffC => vec![
            mk(ints(&[(0, 1), (0, 1), (0, 1), (0, 1)]), OrbitFamily::AffCPoint),
            mk(ints(&[(1, 1), (-2, 1), (0, 1), (0, 1)]), OrbitFamily::AffCPoint),
            mk(ints(&[(0, 1), (0, 1), (1, 1), (0, 1)]), OrbitFamily::AffCPunctured),
            mk(ints(&[(0, 1), (0, 1), (0, 1), (-1, 1)]), OrbitFamily::AffCPunctured),
            mk(ints(&[(3, 1), (1, 1), (2, 1), (-5, 1)]), OrbitFamily::AffCPunctured),
        ],
        AlgebraName::Sl2R => [
            [(2, 1), (0, 1), (0, 1)],
            [(0, 1), (-2, 1), (0, 1)],
            [(5, 2), (0, 1), (3, 2)],
            [(5, 2), (0, 1), (-3, 2)],
            [(0, 1), (2, 1), (-2, 1)],
            [(0, 1), (2, 1), (2, 1)],
            [(3, 1), (4, 1), (-5, 1)],
            [(-3, 1), (4, 1), (5, 1)],
            [(0, 1), (0, 1), (-2, 1)],
            [(0, 1), (0, 1), (2, 1)],
            [(3, 2), (0, 1), (-5, 2)],
            [(3, 2), (0, 1), (5, 2)],
            [(0, 1), (0, 1), (0, 1)],
        ]
        .iter()
        .map(|c| {
            let v = ints(c);
            sl2_label(&[v[0].clone(), v[1].clone(), v[2].clone()])
        })
        .collect(),
    }
}

/// `n` points of `g*` labelled by construction, boundary cases first.
pub fn labelled_orbit_sample(algebra: AlgebraName, n: usize, seed: u64) -> Vec<LabelledPoint> {
    let mut out = boundary(algebra);
    let mut rng = case_rng(seed, algebra.as_str(), 0);
    let z = ExactScalar::zero;
    while out.len() < n {
        let kind = rng.gen_range(0..6u32);
        let p = match algebra {
            AlgebraName::AffR => {
                let fx = random_rational(&mut rng, 5, 6);
                let (fy, family) = match kind % 3 {
                    0 => (z(), OrbitFamily::AffRPoint),
                    1 => (positive_rational(&mut rng, 5, 6), OrbitFamily::AffRUpper),
                    _ => (-positive_rational(&mut rng, 5, 6), OrbitFamily::AffRLower),
                };
                LabelledPoint { point: DualVector { algebra, coords: vec![fx, fy] }, family, casimir: None }
            }
            AlgebraName::AffC => {
                let (x1, x2) = (random_rational(&mut rng, 5, 6), random_rational(&mut rng, 5, 6));
                let nz = || -> ExactScalar { ExactScalar::int(1) };
                let (y1, y2, family) = match kind {
                    0 | 1 => (z(), z(), OrbitFamily::AffCPoint),
                    2 => (z(), random_nonzero(&mut rng).unwrap_or_else(nz), OrbitFamily::AffCPunctured),
                    3 => (random_nonzero(&mut rng).unwrap_or_else(nz), z(), OrbitFamily::AffCPunctured),
                    _ => (
                        random_nonzero(&mut rng).unwrap_or_else(nz),
                        random_rational(&mut rng, 5, 6),
                        OrbitFamily::AffCPunctured,
                    ),
                };
                LabelledPoint { point: DualVector { algebra, coords: vec![x1, x2, y1, y2] }, family, casimir: None }
            }
            AlgebraName::Sl2R => {
                let lambda = match rng.gen_range(0..4u32) {
                    0 => ExactScalar::one(),
                    1 => ExactScalar::ratio(1, 2),
                    2 => ExactScalar::ratio(1, 8),
                    _ => positive_rational(&mut rng, 3, 5),
                };
                let two_l = &lambda * &ExactScalar::int(2);
                let f = match kind {
                    0 | 1 => point_on_quadric(&mut rng, [two_l, z(), z()]),
                    2 | 3 => {
                        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                        point_on_quadric(&mut rng, [z(), z(), two_l * ExactScalar::int(sign)])
                    }
                    4 => {
                        let (m, k) = (rng.gen_range(1..6i64), rng.gen_range(0..6i64));
                        let s = positive_rational(&mut rng, 2, 4);
                        let (a, b, c) = (m * m - k * k, 2 * m * k, m * m + k * k);
                        let sy = if rng.gen_bool(0.5) { 1 } else { -1 };
                        let sx = if rng.gen_bool(0.5) { 1 } else { -1 };
                        let (fh, fx) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
                        [&s * &ExactScalar::int(fh), &s * &ExactScalar::int(sx * fx), &s * &ExactScalar::int(sy * c)]
                    }
                    _ => [z(), z(), z()],
                };
                sl2_label(&f)
            }
        };
        out.push(p);
    }
    out.truncate(n);
    out
}

fn random_nonzero<R: Rng>(rng: &mut R) -> Option<ExactScalar> {
    let r = random_rational(rng, 5, 6);
    (!r.is_zero()).then_some(r)
}

/// Random element of `algebra` with coordinates in `[−bound, bound]`.
pub fn random_coords<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Vec<ExactScalar> {
    (0..dim).map(|_| random_rational(rng, bound, 16)).collect()
}

/// Random ExpPoly of total polynomial degree ≤ `degree`, with up to
/// `max_terms` terms; exponential factors `e^{±x}` only in `exp_vars`.
pub fn random_exppoly<R: Rng>(rng: &mut R, vars: &VarSet, degree: u32, max_terms: usize, exp_vars: &[usize]) -> ExpPoly {
    let n = vars.len();
    let mut out = ExpPoly::zero(vars);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mut exps = vec![0u32; n];
        let mut left = rng.gen_range(0..=degree);
        while left > 0 {
            exps[rng.gen_range(0..n)] += 1;
            left -= 1;
        }
        let mut freqs = vec![ExactScalar::zero(); n];
        if !exp_vars.is_empty() && rng.gen_bool(0.3) {
            let k = exp_vars[rng.gen_range(0..exp_vars.len())];
            freqs[k] = ExactScalar::int(if rng.gen_bool(0.5) { 1 } else { -1 });
        }
        let m = Monomial { exps, freqs, offset: ExactScalar::zero() };
        out = &out + &ExpPoly::from_term(vars, m, random_gaussian(rng)).expect("matching arity");
    }
    out
}

/// Random differential-shift operator of order ≤ 1 with degree-≤1
/// coefficients; shifts only in `shift_vars`.
pub fn random_operator<R: Rng>(rng: &mut R, vars: &VarSet, shift_vars: &[usize]) -> DiffOperator {
    let n = vars.len();
    let mut out = DiffOperator::zero(vars);
    for _ in 0..rng.gen_range(1..=3) {
        let mut key = OpKey::identity(n);
        if rng.gen_bool(0.6) {
            key.derivs[rng.gen_range(0..n)] = 1;
        }
        if !shift_vars.is_empty() && rng.gen_bool(0.25) {
            key.shift[shift_vars[rng.gen_range(0..shift_vars.len())]] = random_rational(rng, 1, 3);
        }
        let coeff = random_exppoly(rng, vars, 1, 2, shift_vars);
        let term = DiffOperator::from_term(key, coeff).expect("matching arity");
        out = out.checked_add(&term).expect("same variables");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible_and_sized() {
        for alg in AlgebraName::ALL {
            let a = labelled_orbit_sample(alg, 200, 7);
            assert_eq!(a.len(), 200);
            assert_eq!(a, labelled_orbit_sample(alg, 200, 7));
        }
    }

    #[test]
    fn quadric_points_keep_casimir() {
        let mut rng = case_rng(1, "q", 0);
        for _ in 0..20 {
            let base = [ExactScalar::int(2), ExactScalar::zero(), ExactScalar::zero()];
            let f = point_on_quadric(&mut rng, base.clone());
            assert_eq!(q(&f), q(&base));
        }
    }

    #[test]
    fn generators_respect_degree() {
        let vs = VarSet::new(&["p", "q"]).unwrap();
        let mut rng = case_rng(3, "e", 0);
        for _ in 0..50 {
            let f = random_exppoly(&mut rng, &vs, 2, 4, &[1]);
            assert!(f.terms().all(|(m, _)| m.degree() <= 2 && m.freqs[0].is_zero()));
            assert!(random_operator(&mut rng, &vs, &[1]).max_order() <= 1);
        }
    }
}
