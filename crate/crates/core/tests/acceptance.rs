//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::Rng;
use sixsphere::chern::{
    chern_residual, compute_rs_with_coframe, equivariance_sweep, family_coframe, index_from_h, residual_free_sweep,
    CandidateJ,
};
use sixsphere::compat::{compatibility_space_dims, standard_omega, LinearComplexStructure};
use sixsphere::dga::{
    frobenius_set, verify_closed_system, verify_d_squared, verify_frobenius_system, verify_invariant_form_identities,
    Generator, StructureRules, MUTATIONS, NUM_GENERATORS,
};
use sixsphere::field::{cq, q, qi, ComplexField, Cq, Q};
use sixsphere::form::Form;
use sixsphere::g2::{adapted_frame_at, cross, AdaptedFrame};
use sixsphere::matrix::{dot, unit_vector, Matrix};
use sixsphere::sampling::{random_matrix, rng, sample_rng, Sample};
use sixsphere::sphere::{nijenhuis_sweep, phi_horizontal, upsilon_at, SpherePoint};
use sixsphere::symplectic::sphere_elliptic_sweep;
use sixsphere::threeform::{classify_3form, recover_upsilon, RecoveredJ, ThreeFormType};

const SEED: u64 = 20240611;
const FLOAT_TOL: f64 = 1e-10;
const CROSS_BUDGET: Duration = Duration::from_secs(5);
const STRUCTURE_BUDGET: Duration = Duration::from_secs(10);
const CHERN_BUDGET: Duration = Duration::from_secs(120);
const NIJENHUIS_STEP: f64 = 1e-3;
const NIJENHUIS_REL_TOL: f64 = 0.05;
const RESIDUAL_FREE_TRIALS: usize = 10_000;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn random_rational<R: Rng>(r: &mut R) -> Q {
    q(r.gen_range(-20..=20), r.gen_range(1..=7))
}

fn form(terms: &[(&[usize], i64)]) -> Form<Q> {
    Form::from_terms(6, 3, terms.iter().map(|(i, c)| (i.to_vec(), qi(*c)))).unwrap()
}

fn cross_product() -> Verdict {
    let start = Instant::now();
    let mut r = rng(SEED);
    let mut bad = 0;
    for _ in 0..1000 {
        let u: Vec<Q> = (0..7).map(|_| random_rational(&mut r)).collect();
        let v: Vec<Q> = (0..7).map(|_| random_rational(&mut r)).collect();
        let lhs = cross(&u, &cross(&u, &v));
        let rhs: Vec<Q> = u.iter().zip(&v).map(|(a, b)| dot(&u, &v) * a.clone() - dot(&u, &u) * b.clone()).collect();
        bad += usize::from(lhs != rhs);
    }
    let e = |i: usize| unit_vector::<Q>(7, i - 1);
    let minus_e2: Vec<Q> = e(2).iter().map(|x| -x.clone()).collect();
    let basis_ok = cross(&e(1), &e(2)) == e(3) && cross(&e(1), &cross(&e(1), &e(2))) == minus_e2;
    let t = start.elapsed();
    verdict(
        bad == 0 && basis_ok && t < CROSS_BUDGET,
        format!("1000 exact pairs, {bad} nonzero residuals, basis identities {basis_ok}, {t:.2?}"),
    )
}

fn structure_equations() -> Verdict {
    let start = Instant::now();
    let checks = verify_d_squared(&StructureRules::standard());
    let clean = checks.len() == NUM_GENERATORS && checks.iter().all(|c| c.pass);
    let undetected: Vec<&str> = MUTATIONS
        .iter()
        .copied()
        .filter(|m| verify_d_squared(&StructureRules::mutated(m).unwrap()).iter().all(|c| c.pass))
        .collect();
    let t = start.elapsed();
    verdict(
        clean && undetected.is_empty() && t < STRUCTURE_BUDGET,
        format!(
            "d^2 = 0 on {} generators, {} of {} mutations detected, {t:.2?}",
            checks.len(),
            MUTATIONS.len() - undetected.len(),
            MUTATIONS.len()
        ),
    )
}

fn invariant_forms() -> Verdict {
    let symbolic = verify_invariant_form_identities(&StructureRules::standard()).iter().all(|c| c.pass);
    let mut r = rng(SEED + 3);
    let mut exact_ok = true;
    for _ in 0..20 {
        let u: Vec<Q> = Q::random_unit_vector(&mut r, 7);
        let frame = adapted_frame_at(&u, 0.0).unwrap();
        let p = SpherePoint::new(u).unwrap();
        exact_ok &= upsilon_at(&p, &frame, 0.0).unwrap().im() == phi_horizontal(&p);
    }
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let u: Vec<f64> = f64::random_unit_vector(&mut sample_rng(SEED + 3, i), 7);
        let frame = adapted_frame_at(&u, FLOAT_TOL).unwrap();
        let p = SpherePoint::new(u).unwrap();
        worst = worst.max(upsilon_at(&p, &frame, FLOAT_TOL).unwrap().im().sub(&phi_horizontal(&p)).unwrap().max_abs());
    }
    verdict(
        symbolic && exact_ok && worst < FLOAT_TOL,
        format!("symbolic identities {symbolic}, exact at 20 rational points {exact_ok}, float max defect {worst:.1e} at 100 points"),
    )
}

fn frobenius() -> Verdict {
    let rules = StructureRules::standard();
    let system = verify_frobenius_system(&rules);
    let ok = system.len() == frobenius_set().len() && system.iter().all(|c| c.pass);
    let control_fails = verify_closed_system(&rules, &[Generator::theta(1)]).iter().any(|c| !c.pass);
    verdict(ok && control_fails, format!("{} generators closed {ok}, control set fails {control_fails}", system.len()))
}

/// Kernel of `X ↦ constraint(X)` on `gl(m)`, as matrices.
fn lie_algebra(m: usize, constraint: impl Fn(&Matrix<Q>) -> Matrix<Q>) -> Vec<Matrix<Q>> {
    let unit = |k: usize| Matrix::from_fn(m, m, |r, c| if r * m + c == k { Q::one() } else { Q::zero() });
    let cols: Vec<Vec<Q>> = (0..m * m).map(|k| constraint(&unit(k)).entries().cloned().collect()).collect();
    Matrix::from_columns(&cols)
        .unwrap()
        .kernel()
        .into_iter()
        .map(|v| Matrix::from_fn(m, m, |r, c| v[r * m + c].clone()))
        .collect()
}

/// Dimension of the orbit of `J₀` under the group with Lie algebra `algebra`.
fn orbit_dim(j0: &Matrix<Q>, algebra: &[Matrix<Q>]) -> usize {
    let cols: Vec<Vec<Q>> = algebra.iter().map(|x| x.mul(j0).sub(&j0.mul(x)).entries().cloned().collect()).collect();
    Matrix::from_columns(&cols).unwrap().rank()
}

fn orbit_oracle(n: usize) -> (usize, usize, usize) {
    let m = 2 * n;
    let j0 = LinearComplexStructure::<Q>::standard(n).matrix().clone();
    let om = standard_omega::<Q>(n).to_matrix().unwrap();
    let gl = lie_algebra(m, |_| Matrix::zeros(1, 1));
    let sp = lie_algebra(m, |x| x.transpose().mul(&om).add(&om.mul(x)));
    let o = lie_algebra(m, |x| x.transpose().add(x));
    (orbit_dim(&j0, &gl), orbit_dim(&j0, &sp), orbit_dim(&j0, &o))
}

fn dimension_counts() -> Verdict {
    let mut ok = true;
    let mut seen = Vec::new();
    for n in 1..=3 {
        let d = compatibility_space_dims(n).unwrap();
        let got = (d.total, d.omega_compatible, d.metric_compatible);
        let formula = (2 * n * n, n * n + n, n * n - n);
        ok &= got == formula;
        if n < 3 {
            ok &= got == orbit_oracle(n);
        }
        seen.push(format!("{got:?}"));
    }
    verdict(ok, format!("n = 1, 2, 3 give {}", seen.join(", ")))
}

fn pullback_tags(rho: &Form<Q>, vol: &Form<Q>, expected: ThreeFormType, seed: u64) -> usize {
    let mut r = rng(seed);
    let mut ok = 0;
    while ok < 200 {
        let dens: Vec<i64> = (0..36).map(|_| r.gen_range(1..=4)).collect();
        let raw: Matrix<Q> = random_matrix::<Q, _>(&mut r, 6, 6, 3);
        let l = Matrix::from_fn(6, 6, |i, j| raw.row(i)[j].clone() / qi(dens[6 * i + j]));
        if l.det().is_zero() {
            continue;
        }
        if classify_3form(&rho.pullback(&l).unwrap(), vol, 0.0).unwrap().tag != expected {
            return ok;
        }
        ok += 1;
    }
    ok
}

fn threeform_classification() -> Verdict {
    let vol = Form::basis(6, &[1, 2, 3, 4, 5, 6]).unwrap();
    let split = form(&[(&[1, 2, 3], 1), (&[4, 5, 6], 1)]);
    let elliptic = form(&[(&[1, 3, 6], 1), (&[1, 4, 5], 1), (&[2, 3, 5], 1), (&[2, 4, 6], -1)]);
    let s = classify_3form(&split, &vol, 0.0).unwrap();
    let e = classify_3form(&elliptic, &vol, 0.0).unwrap();
    let split_ok = s.tag == ThreeFormType::Split && s.lambda > Q::zero();
    let mut elliptic_ok = e.tag == ThreeFormType::Elliptic && e.lambda < Q::zero();
    if let Some(RecoveredJ::Exact(j)) = &e.j {
        let jm = j.matrix();
        elliptic_ok &= jm.mul(jm) == Matrix::identity(6).neg();
        let ef = |a: usize, b: usize| {
            let mut v = vec![Cq::zero(); 6];
            v[a - 1] = cq(1, 0);
            v[b - 1] = cq(0, 1);
            Form::one_form(&v)
        };
        let omega = ef(1, 2).wedge(&ef(3, 4)).unwrap().wedge(&ef(5, 6)).unwrap();
        elliptic_ok &= recover_upsilon(&elliptic, j, 0.0).unwrap() == omega.scale(&Cq::from_real(q(1, 3)));
    } else {
        elliptic_ok = false;
    }
    let split_inv = pullback_tags(&split, &vol, ThreeFormType::Split, SEED + 6);
    let elliptic_inv = pullback_tags(&elliptic, &vol, ThreeFormType::Elliptic, SEED + 7);
    verdict(
        split_ok && elliptic_ok && split_inv == 200 && elliptic_inv == 200,
        format!(
            "split lambda {}, elliptic lambda {} with exact J and Upsilon {elliptic_ok}, tags kept under {split_inv}/200 and {elliptic_inv}/200 pullbacks",
            s.lambda, e.lambda
        ),
    )
}

fn elliptic_definite() -> Verdict {
    let sweep = sphere_elliptic_sweep::<f64>(100, SEED + 8, FLOAT_TOL).unwrap();
    let exact = sphere_elliptic_sweep::<Q>(10, SEED + 8, 0.0).unwrap();
    verdict(
        sweep.pass && sweep.definite == 100 && sweep.max_defect < FLOAT_TOL && exact.pass,
        format!(
            "{}/100 float points elliptic definite, max defect {:.1e}, 10 exact points {}",
            sweep.definite, sweep.max_defect, exact.pass
        ),
    )
}

fn family_residual(name: &str, frame: &AdaptedFrame<Q>) -> (Cq, Option<(usize, usize)>) {
    let cand = CandidateJ::family(name, frame).unwrap();
    let data = compute_rs_with_coframe(&cand, frame, &family_coframe(name).unwrap(), 0.0).unwrap();
    let index = index_from_h(&data, 0.0).ok().map(|h| (h.index.p, h.index.q));
    (chern_residual(&data), index)
}

fn chern_identity() -> Verdict {
    let start = Instant::now();
    let mut r = rng(SEED + 9);
    let mut standard_ok = true;
    let mut remark_ok = true;
    for _ in 0..5 {
        let u: Vec<Q> = Q::random_unit_vector(&mut r, 7);
        let frame = adapted_frame_at(&u, 0.0).unwrap();
        standard_ok &= family_residual("standard", &frame).0 == cq(-1, 0);
        let (res, index) = family_residual("remark1", &frame);
        remark_ok &= res.is_zero() && index == Some((1, 2));
    }
    let nij = nijenhuis_sweep(20, SEED + 10, NIJENHUIS_STEP, NIJENHUIS_REL_TOL).unwrap();
    let sweep = residual_free_sweep::<Q>(RESIDUAL_FREE_TRIALS, SEED + 11, &AdaptedFrame::standard(), 0.0);
    let sweep_ok = sweep.pass && sweep.valid == RESIDUAL_FREE_TRIALS && sweep.definite == 0 && sweep.failures == 0;
    let t = start.elapsed();
    verdict(
        standard_ok && remark_ok && nij.pass && sweep_ok && t < CHERN_BUDGET,
        format!(
            "residual -1 for J {standard_ok}, remark1 residual 0 index (1,2) {remark_ok}, Nijenhuis min norm {:.3} step change {:.1e}, \
             {} residual-free structures: {} of index (2,1), {} of index (1,2), {} definite, {} failures, {} degenerate draws redrawn, {t:.1?}",
            nij.min_norm, nij.max_relative_step_change, sweep.valid, sweep.index_2_1, sweep.index_1_2, sweep.definite, sweep.failures, sweep.rejected
        ),
    )
}

fn equivariance() -> Verdict {
    let u: Vec<Q> = Q::random_unit_vector(&mut rng(SEED + 12), 7);
    let frame = adapted_frame_at(&u, 0.0).unwrap();
    let reports = equivariance_sweep::<Q>(100, SEED + 13, &frame, 0.0).unwrap();
    let passed = reports.iter().filter(|r| r.pass).count();
    let vanishing = reports.iter().all(|r| r.vanishing_preserved);
    verdict(passed == 100 && vanishing, format!("{passed}/100 exact gauge changes, vanishing preserved {vanishing}"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("cross-product algebra", cross_product),
        ("structure equations", structure_equations),
        ("invariant forms", invariant_forms),
        ("Frobenius system", frobenius),
        ("dimension counts", dimension_counts),
        ("3-form classification", threeform_classification),
        ("elliptic definiteness", elliptic_definite),
        ("Chern identity", chern_identity),
        ("equivariance", equivariance),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        let line = format!("criterion {} {}: {} ({})\n", i + 1, name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        // written past the test harness capture so the lines always show
        let _ = std::io::stderr().write_all(line.as_bytes());
        if !v.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
