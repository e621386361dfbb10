//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`). The process fails when the
//! set of failing lines differs from `EXPECTED_FAIL`.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use orbitquant::homology::{catalogue, chern_character, ChernVerdict, GradedAbelianGroup};
use orbitquant::liealg::ExactMatrix;
use orbitquant::moyal::{star_commutator_check, PlanckParam, SeriesCoefficients};
use orbitquant::operators::{affr_evolution_check, compare_printed, verify_homomorphism, ComparisonStatus};
use orbitquant::orbits::{classify_orbit, verify_darboux_branch, OrbitDescriptor, OrbitFamily};
use orbitquant::verify::properties::{property_case, Property};
use orbitquant::verify::sample::{case_rng, labelled_orbit_sample, random_coords};
use orbitquant::verify::{chart_cases, chart_id, derived_affr_entry, printed_affr_entry, VerifyConfig, DEFAULT_SEED};
use orbitquant::{AlgebraName, DualVector, ExactScalar, Execution, LieAlgebra};

const COMMUTATOR_ORDER: u32 = 6;
const P_R_RANGE: std::ops::RangeInclusive<u32> = 2..=8;
const C1_BUDGET: Duration = Duration::from_secs(30);
const ORBIT_SAMPLES: usize = 200;
const EXPM_DRAWS: u64 = 100;
const EXPM_TOL: f64 = 1e-12;
const SERIES_TERMS: usize = 30;
const EVOLUTION_GRID: usize = 1024;
const EVOLUTION_TIMES: [f64; 3] = [0.25, 0.5, 1.0];
const EVOLUTION_L2_TOL: f64 = 1e-3;
const NORM_DRIFT_TOL: f64 = 1e-6;
const EVOLUTION_BUDGET: Duration = Duration::from_secs(10);
const PROPERTY_CASES: u64 = 500;
const PROPERTY_BUDGET: Duration = Duration::from_secs(60);

/// On sl2 charts the second-order bidifferential term of two Hamiltonians
/// does not vanish.
const EXPECTED_FAIL: &[&str] = &["1b"];

struct Board {
    failed: Vec<&'static str>,
}

impl Board {
    fn line(&mut self, id: &'static str, pass: bool, msg: impl AsRef<str>) {
        println!("{} [{id}] {}", if pass { "PASS" } else { "FAIL" }, msg.as_ref());
        if !pass {
            self.failed.push(id);
        }
    }

    fn note(&self, msg: impl AsRef<str>) {
        println!("NOTE {}", msg.as_ref());
    }
}

fn criterion_1(b: &mut Board) {
    let cfg = VerifyConfig::default();
    let h = PlanckParam::default();
    let start = Instant::now();
    let mut residual_ok = true;
    let mut pairs = 0;
    let mut survivors: Vec<String> = Vec::new();
    for (orbit, k) in chart_cases(None, &cfg).unwrap() {
        let r = star_commutator_check(&orbit, k, COMMUTATOR_ORDER, &h, SeriesCoefficients::Factorial, Execution::Parallel).unwrap();
        for p in &r.pairs {
            pairs += 1;
            residual_ok &= p.zero && p.beyond_order_vanishes;
            let bad: Vec<u32> = p.nonvanishing_p_r.iter().copied().filter(|r| P_R_RANGE.contains(r)).collect();
            if !bad.is_empty() {
                survivors.push(format!("{}:{},{}:{:?}", chart_id(&orbit, k), p.a, p.b, bad));
            }
        }
    }
    let elapsed = start.elapsed();
    b.line("1a", residual_ok, format!("⋆-commutator residual is the zero ExpPoly at order {COMMUTATOR_ORDER} for all {pairs} ordered basis pairs"));
    b.line(
        "1b",
        survivors.is_empty(),
        format!("P^r(Ã,B̃) = 0 for r in {P_R_RANGE:?}: {} violating pairs", survivors.len()),
    );
    let families: std::collections::BTreeSet<&str> = survivors.iter().map(|s| s.split(':').next().unwrap()).collect();
    if !survivors.is_empty() {
        b.note(format!("violations only at r = 2, on: {}", families.into_iter().collect::<Vec<_>>().join(", ")));
    }
    b.line("1c", elapsed < C1_BUDGET, format!("runtime {:.2} s < {} s", elapsed.as_secs_f64(), C1_BUDGET.as_secs()));
}

fn criterion_2(b: &mut Board) {
    let cfg = VerifyConfig::default();
    let mut ids = Vec::new();
    let mut ok = true;
    for (orbit, k) in chart_cases(None, &cfg).unwrap() {
        let r = verify_darboux_branch(&orbit, k).unwrap();
        ok &= r.pass;
        ids.push(chart_id(&orbit, k));
    }
    b.line("2", ok, format!("Kirillov form equals the standard form exactly on {} charts", ids.len()));
}

/// Hand case analysis, written independently of the classifier.
fn hand_label(f: &DualVector) -> OrbitFamily {
    let sgn = |x: &ExactScalar| x.real_sign().unwrap();
    match f.algebra {
        AlgebraName::AffR => match sgn(&f.coords[1]) {
            Ordering::Greater => OrbitFamily::AffRUpper,
            Ordering::Less => OrbitFamily::AffRLower,
            Ordering::Equal => OrbitFamily::AffRPoint,
        },
        AlgebraName::AffC => {
            let n = &(&f.coords[2] * &f.coords[2]) + &(&f.coords[3] * &f.coords[3]);
            if n.is_zero() {
                OrbitFamily::AffCPoint
            } else {
                OrbitFamily::AffCPunctured
            }
        }
        AlgebraName::Sl2R => {
            let (x, h, y) = (
                &f.coords[1] * &ExactScalar::ratio(1, 2),
                &f.coords[0] * &ExactScalar::ratio(1, 2),
                &f.coords[2] * &ExactScalar::ratio(-1, 2),
            );
            let c = &(&(&x * &x) + &(&h * &h)) - &(&y * &y);
            let up = sgn(&y) == Ordering::Greater;
            match (sgn(&c), up) {
                (Ordering::Greater, _) => OrbitFamily::Sl2Hyperboloid,
                (Ordering::Less, true) => OrbitFamily::Sl2TwofoldUpper,
                (Ordering::Less, false) => OrbitFamily::Sl2TwofoldLower,
                (Ordering::Equal, _) if y.is_zero() => OrbitFamily::Sl2Origin,
                (Ordering::Equal, true) => OrbitFamily::Sl2UpperCone,
                (Ordering::Equal, false) => OrbitFamily::Sl2LowerCone,
            }
        }
    }
}

fn criterion_3(b: &mut Board) {
    for (id, name) in [("3-affR", AlgebraName::AffR), ("3-affC", AlgebraName::AffC), ("3-sl2R", AlgebraName::Sl2R)] {
        let pts = labelled_orbit_sample(name, ORBIT_SAMPLES, DEFAULT_SEED);
        let mut agree = 0;
        let mut families = std::collections::BTreeSet::new();
        for p in &pts {
            let got = classify_orbit(&p.point).unwrap();
            families.insert(got.family);
            if got.family == p.family && got.family == hand_label(&p.point) {
                agree += 1;
            }
        }
        b.line(
            id,
            agree == pts.len() && families.len() == OrbitFamily::ALL.iter().filter(|f| f.algebra() == name).count(),
            format!("{agree}/{} labelled points agree, {} families hit", pts.len(), families.len()),
        );
    }
}

/// Plain Taylor series of exp(−ad_U), summed exactly.
fn exact_series(m: &ExactMatrix, terms: usize) -> Vec<Vec<ExactScalar>> {
    let n = m.dim();
    let neg: Vec<Vec<ExactScalar>> = m.0.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let mut term: Vec<Vec<ExactScalar>> = (0..n).map(|i| (0..n).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect()).collect();
    let mut sum = term.clone();
    for k in 1..terms {
        let mut next = vec![vec![ExactScalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExactScalar::zero();
                for l in 0..n {
                    acc += &(&term[i][l] * &neg[l][j]);
                }
                next[i][j] = acc / ExactScalar::int(k as i64);
            }
        }
        term = next;
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += &term[i][j];
            }
        }
    }
    sum
}

fn criterion_4(b: &mut Board) {
    for (id, name) in [("4-affR", AlgebraName::AffR), ("4-affC", AlgebraName::AffC), ("4-sl2R", AlgebraName::Sl2R)] {
        let g = LieAlgebra::new(name);
        let mut worst = 0.0f64;
        for i in 0..EXPM_DRAWS {
            let u = g.element(random_coords(&mut case_rng(DEFAULT_SEED, "acceptance/expm", i), g.dim(), 1)).unwrap();
            let fast = g.exp_neg_ad(&u).unwrap();
            let series = exact_series(&g.ad_matrix(&u).unwrap(), SERIES_TERMS);
            let (mut num, mut den) = (0.0, 0.0);
            for (r, row) in series.iter().enumerate() {
                for (c, s) in row.iter().enumerate() {
                    let s: Complex64 = s.to_complex();
                    num += (fast[(r, c)] - s).norm_sqr();
                    den += s.norm_sqr();
                }
            }
            worst = worst.max((num / den).sqrt());
        }
        b.line(id, worst <= EXPM_TOL, format!("scaling-and-squaring vs {SERIES_TERMS}-term series on {EXPM_DRAWS} draws: max rel {worst:.2e} ≤ {EXPM_TOL:e}"));
    }
    let g = LieAlgebra::new(AlgebraName::AffR);
    let u = g.element(vec![ExactScalar::ratio(7, 10), ExactScalar::ratio(-13, 10)]).unwrap();
    let e = g.exp_neg_ad(&u).unwrap()[(1, 0)].re;
    b.line("4-closed", (e - derived_affr_entry(0.7, -1.3)).abs() < 1e-14, format!("affR entry L' = β(1−e^(−α))/α = {e:.15}"));
    b.note(format!(
        "derived_override: printed L = α + β + (α/β)(1−e^β) gives {:.15} at (0.7, −1.3); shipped L'",
        printed_affr_entry(0.7, -1.3)
    ));
}

fn criterion_5(b: &mut Board) {
    let cfg = VerifyConfig::default();
    let h = PlanckParam::default();
    let mut ok = true;
    let mut n = 0;
    for (orbit, k) in chart_cases(None, &cfg).unwrap() {
        let r = verify_homomorphism(&orbit, k, &h, Execution::Parallel).unwrap();
        ok &= r.pass;
        n += r.pairs.len();
    }
    b.line("5a", ok, format!("[ℓ̂_A, ℓ̂_B] − ℓ̂_[A,B] = 0 exactly on {n} ordered pairs"));

    let mut statuses = Vec::new();
    for (family, lambda) in [
        (OrbitFamily::AffRUpper, None),
        (OrbitFamily::AffCPunctured, None),
        (OrbitFamily::Sl2Hyperboloid, Some(ExactScalar::one())),
    ] {
        let orbit = OrbitDescriptor::new(family, lambda).unwrap();
        let g = LieAlgebra::new(orbit.algebra);
        for i in 0..g.dim() {
            let c = compare_printed(&orbit, &g.basis_element(i)).unwrap();
            if c.status == ComparisonStatus::DerivedOverride {
                b.note(format!("derived_override {}/{}: derived − printed = {}", family, g.basis[i], c.difference));
            }
            statuses.push((family, g.basis[i], c.status));
        }
    }
    use ComparisonStatus::*;
    let expected = [
        (OrbitFamily::AffRUpper, "X", Match),
        (OrbitFamily::AffRUpper, "Y", DerivedOverride),
        (OrbitFamily::AffCPunctured, "X1", Match),
        (OrbitFamily::AffCPunctured, "X2", Match),
        (OrbitFamily::AffCPunctured, "Y1", Match),
        (OrbitFamily::AffCPunctured, "Y2", Match),
        (OrbitFamily::Sl2Hyperboloid, "H", DerivedOverride),
        (OrbitFamily::Sl2Hyperboloid, "X", DerivedOverride),
        (OrbitFamily::Sl2Hyperboloid, "Y", DerivedOverride),
    ];
    b.line("5b", statuses == expected, "printed ℓ̂ comparison reported: affC matches, affR Y and sl2 logged as derived_override");
}

fn criterion_6(b: &mut Board) {
    let h = PlanckParam::default();
    for (dir, a, bb) in [("X", 1, 0), ("Y", 0, 1)] {
        for t in EVOLUTION_TIMES {
            let start = Instant::now();
            let r = affr_evolution_check(&ExactScalar::int(a), &ExactScalar::int(bb), t, EVOLUTION_GRID, &h).unwrap();
            let el = start.elapsed();
            let pass = r.rel_l2_error <= EVOLUTION_L2_TOL && r.norm_drift_per_unit_time <= NORM_DRIFT_TOL && el < EVOLUTION_BUDGET;
            let id: &'static str = Box::leak(format!("6-{dir}-t{t}").into_boxed_str());
            b.line(
                id,
                pass,
                format!(
                    "affR {dir}, t = {t}: rel L2 {:.2e} ≤ {EVOLUTION_L2_TOL:e}, drift {:.2e} ≤ {NORM_DRIFT_TOL:e}, {:.2} s < {} s",
                    r.rel_l2_error,
                    r.norm_drift_per_unit_time,
                    el.as_secs_f64(),
                    EVOLUTION_BUDGET.as_secs()
                ),
            );
        }
    }
}

fn criterion_7(b: &mut Board) {
    let z = GradedAbelianGroup::point();
    let zz = GradedAbelianGroup::circle();
    let zero = GradedAbelianGroup::trivial();
    let table = [
        (OrbitFamily::AffRUpper, &zero),
        (OrbitFamily::AffRLower, &zero),
        (OrbitFamily::AffCPunctured, &z),
        (OrbitFamily::Sl2Hyperboloid, &zz),
        (OrbitFamily::Sl2UpperCone, &zz),
        (OrbitFamily::Sl2LowerCone, &zz),
        (OrbitFamily::Sl2TwofoldUpper, &zz),
        (OrbitFamily::Sl2TwofoldLower, &zz),
    ];
    let mut ok = true;
    for (family, want) in table {
        for lam in [ExactScalar::one(), ExactScalar::ratio(1, 2), ExactScalar::ratio(1, 8)] {
            let o = OrbitDescriptor::new(family, family.has_lambda().then(|| lam.clone())).unwrap();
            let r = chern_character(&o);
            ok &= r.published_k == *want && r.published_phc == *want;
        }
    }
    let sl2_2d = table.iter().filter(|(f, _)| f.algebra() == AlgebraName::Sl2R).count();
    b.line("7a", ok, format!("published K/PHC table reproduced (affR Ω± trivial, affC (ℤ,0), {sl2_2d} sl2 2-dim families (ℤ,ℤ))"));
    let cat = catalogue();
    b.line("7b", cat.iter().all(|r| r.chern_verdict == ChernVerdict::Iso), format!("Chern verdict iso on all {} catalogued orbits", cat.len()));
    let affc = chern_character(&OrbitDescriptor::new(OrbitFamily::AffCPunctured, None).unwrap());
    let flagged: Vec<_> = cat.iter().filter(|r| !r.chain_matches_published).map(|r| r.orbit.family).collect();
    b.line(
        "7c",
        flagged == [OrbitFamily::AffCPunctured] && affc.chain_k == zz && !affc.notes.is_empty(),
        format!("reduction chain mismatch flagged exactly for affC: chain {} vs published {}", affc.chain_k, affc.published_k),
    );
}

fn criterion_8(b: &mut Board) {
    let start = Instant::now();
    for (id, prop) in [
        ("8-poisson-jacobi", Property::PoissonJacobi),
        ("8-operator-jacobi", Property::OperatorJacobi),
        ("8-derivation", Property::DerivationLaw),
        ("8-star-assoc-h3", Property::StarAssociativity),
    ] {
        let cases: Vec<u64> = (0..PROPERTY_CASES).collect();
        let res = Execution::Parallel.map(cases, |i| property_case(prop, DEFAULT_SEED, i));
        let zero = res.iter().filter(|r| matches!(r, Ok(m) if *m == 0.0)).count();
        b.line(id, zero as u64 == PROPERTY_CASES, format!("{zero}/{PROPERTY_CASES} exact at seed {DEFAULT_SEED}"));
    }
    let el = start.elapsed();
    b.line("8-runtime", el < PROPERTY_BUDGET, format!("runtime {:.2} s < {} s", el.as_secs_f64(), PROPERTY_BUDGET.as_secs()));
}

fn main() {
    let mut b = Board { failed: Vec::new() };
    criterion_1(&mut b);
    criterion_2(&mut b);
    criterion_3(&mut b);
    criterion_4(&mut b);
    criterion_5(&mut b);
    criterion_6(&mut b);
    criterion_7(&mut b);
    criterion_8(&mut b);
    let unexpected: Vec<_> = b.failed.iter().filter(|id| !EXPECTED_FAIL.contains(id)).collect();
    let fixed: Vec<_> = EXPECTED_FAIL.iter().filter(|id| !b.failed.contains(id)).collect();
    println!("acceptance: {} failing line(s): {:?}; expected {:?}", b.failed.len(), b.failed, EXPECTED_FAIL);
    if !unexpected.is_empty() || !fixed.is_empty() {
        eprintln!("acceptance outcome changed: unexpected failures {unexpected:?}, unexpectedly passing {fixed:?}");
        std::process::exit(1);
    }
}
