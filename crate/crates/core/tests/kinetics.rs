use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frackin::kinetics::{e3_reduction_coefficients, e3_series_mismatch, match_e3_coefficients, ClosedFormSolution};
use frackin::mlkit::{eval_ml2, EvalConfig};
use frackin::{
    q_exponential, reduce, residual, rl_integral_series, solve, KineticFamily, KineticProblem, MLParams, MLTerm,
};

fn cfg() -> EvalConfig {
    EvalConfig::new(1e-15).with_z_max(100.0)
}

// Evaluation tolerance inside residual checks; the quadrature error is far larger.
fn loose() -> EvalConfig {
    EvalConfig::new(1e-10).with_z_max(100.0)
}

fn random_problem(family: KineticFamily, rng: &mut ChaCha8Rng) -> KineticProblem {
    let n0 = rng.gen_range(0.5..2.0);
    let c = rng.gen_range(0.5..2.0);
    match family {
        KineticFamily::Standard => KineticProblem::standard(n0, c, rng.gen_range(0.3..3.0)),
        KineticFamily::Prabhakar => {
            KineticProblem::prabhakar(n0, c, rng.gen_range(0.3..3.0), rng.gen_range(0.05..3.0), rng.gen_range(0.0..3.0))
        }
        KineticFamily::RDriven => {
            let mu = rng.gen_range(0.0..1.0);
            let nu = rng.gen_range(mu + 1.05..3.0);
            KineticProblem::r_driven(n0, c, nu, mu, rng.gen_range(0.0..1.0))
        }
        KineticFamily::FDriven => KineticProblem::f_driven(n0, c, rng.gen_range(1.05..3.0)),
    }
}

fn grid(b: f64) -> Vec<f64> {
    (0..8).map(|i| b + 0.1 + 1.9 * i as f64 / 7.0).collect()
}

#[test]
fn solutions_satisfy_their_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for family in KineticFamily::ALL {
        for _ in 0..4 {
            let prob = random_problem(family, &mut rng);
            let sol = solve(&prob).unwrap();
            let r = residual(&prob, &sol, &grid(prob.b), 1024, &loose()).unwrap();
            assert!(r <= 1e-4, "{prob:?}: residual {r:e}");
        }
    }
}

#[test]
fn perturbed_solution_is_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for family in KineticFamily::ALL {
        let prob = random_problem(family, &mut rng);
        let mut sol = solve(&prob).unwrap();
        sol.terms[0].weight *= 1.1;
        let r = residual(&prob, &sol, &grid(prob.b), 1024, &loose()).unwrap();
        assert!(r > 1e-2, "{prob:?}: residual {r:e}");
    }
}

#[test]
fn standard_relaxation_is_non_increasing_for_order_at_most_one() {
    for &nu in &[0.1, 0.35, 0.5, 0.75, 0.9, 1.0] {
        for &c in &[0.5, 1.0, 2.0] {
            let sol = solve(&KineticProblem::standard(1.0, c, nu)).unwrap();
            let mut prev = f64::INFINITY;
            for i in 1..=100 {
                let t = 5.0 / c * i as f64 / 100.0;
                let n = sol.eval(t, &cfg()).unwrap();
                assert!(n <= prev, "nu {nu}, c {c}: N({t}) = {n} > {prev}");
                prev = n;
            }
        }
    }
}

#[test]
fn undelayed_order_zero_r_driven_matches_direct_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let (n0, c, nu, b) =
            (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(1.05..3.0), rng.gen_range(0.0..1.0));
        let sol = solve(&KineticProblem::r_driven(n0, c, nu, 0.0, b)).unwrap();
        for &dt in &[0.2, 0.5, 1.0, 2.0] {
            let t = b + dt;
            let z = -c.powf(nu) * dt.powf(nu);
            let a = eval_ml2(nu, nu - 1.0, z, &cfg()).unwrap().value;
            let e = eval_ml2(nu, nu, z, &cfg()).unwrap().value;
            let expected = n0 / nu * dt.powf(nu - 1.0) * (a + e);
            assert_relative_eq!(sol.eval(t, &cfg()).unwrap(), expected, max_relative = 1e-12);
        }
        assert_eq!(sol.eval(b, &cfg()).unwrap(), 0.0);
    }
}

#[test]
fn rl_integral_of_prabhakar_solution_shifts_beta_by_nu() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let (n0, c, nu, mu, g) = (
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(0.3..3.0),
            rng.gen_range(0.2..3.0),
            rng.gen_range(0.0..3.0),
        );
        let sol = solve(&KineticProblem::prabhakar(n0, c, nu, mu, g)).unwrap();
        let lhs = rl_integral_series(&sol.terms[0].power_series(40).unwrap(), nu).unwrap();
        let target =
            MLTerm { power: mu + nu - 1.0, params: MLParams::new(nu, mu + nu, g + 1.0).unwrap(), ..sol.terms[0] };
        let rhs = target.power_series(40).unwrap();
        assert_relative_eq!(lhs.rho, rhs.rho, max_relative = 1e-15);
        assert_eq!(lhs.step, rhs.step);
        for (n, (a, b)) in lhs.coeffs.iter().zip(&rhs.coeffs).enumerate() {
            assert!((a - b).abs() <= 1e-12 * b.abs(), "coefficient {n}: {a:e} vs {b:e}");
        }
    }
}

#[test]
fn reduced_solutions_agree_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for &g in &[0.0, 1.0, 2.0] {
        for _ in 0..20 {
            let prob = KineticProblem::prabhakar(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.3..3.0),
                rng.gen_range(0.2..3.0),
                g,
            );
            let sol = solve(&prob).unwrap();
            let red = reduce(&sol).unwrap();
            assert_eq!(red.terms.len(), g as usize + 1);
            assert!(red.terms.iter().all(|t| t.params.gamma == 1.0));
            for &t in &[0.2, 0.5, 1.0, 2.0] {
                let a = sol.eval(t, &cfg()).unwrap();
                let b = red.eval(t, &cfg()).unwrap();
                assert!((a - b).abs() <= 1e-9 * a.abs(), "{prob:?} at t = {t}: {a:e} vs {b:e}");
            }
        }
    }
}

#[test]
fn reduced_solutions_still_solve_the_equation() {
    let prob = KineticProblem::prabhakar(1.0, 1.0, 0.8, 1.2, 2.0);
    let red = reduce(&solve(&prob).unwrap()).unwrap();
    assert!(residual(&prob, &red, &grid(0.0), 1024, &loose()).unwrap() <= 1e-4);
}

#[test]
fn q_exponential_approaches_gaussian() {
    for kt in [0.1f64, 1.0, 7.5] {
        for i in 0..=50 {
            let x = (5.0 * kt).sqrt() * i as f64 / 50.0;
            let g = (-x * x / kt).exp();
            for q in [1.0 - 1e-8, 1.0 + 1e-8] {
                let v = q_exponential(x, q, kt).unwrap();
                assert!((v - g).abs() <= 1e-6, "x {x}, q {q}, kT {kt}: {v} vs {g}");
            }
        }
    }
    assert_eq!(q_exponential(1.0, 2.0, 1.0).unwrap(), 0.5);
}

#[test]
fn solution_json_round_trip() {
    let sol = reduce(&solve(&KineticProblem::prabhakar(1.0, 1.5, 0.9, 1.1, 2.0)).unwrap()).unwrap();
    let back: ClosedFormSolution = serde_json::from_str(&serde_json::to_string(&sol).unwrap()).unwrap();
    assert_eq!(back, sol);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_matching_reproduces_e3_coefficients(beta in 0.3f64..3.0, gamma in 2.5f64..5.0) {
        let k = match_e3_coefficients(beta, gamma).unwrap();
        let exact = e3_reduction_coefficients(beta, gamma);
        for i in 0..3 {
            prop_assert!((k[i] - exact[i]).abs() <= 1e-12 * exact[i].abs().max(1.0));
        }
        prop_assert!(e3_series_mismatch(beta, gamma, &k, 3..23) <= 1e-12);
    }

    #[test]
    fn q_exponential_is_a_bounded_shape(x in -10.0f64..10.0, q in 0.0f64..0.999, kt in 0.1f64..10.0) {
        let v = q_exponential(x, q, kt).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(q_exponential(x.abs() * 1.01 + 0.01, q, kt).unwrap() <= v);
    }

    #[test]
    fn solutions_scale_linearly_in_n0(n0 in 0.1f64..10.0, nu in 0.3f64..3.0, t in 0.05f64..3.0) {
        let one = solve(&KineticProblem::standard(1.0, 1.0, nu)).unwrap().eval(t, &cfg()).unwrap();
        let v = solve(&KineticProblem::standard(n0, 1.0, nu)).unwrap().eval(t, &cfg()).unwrap();
        prop_assert!((v - n0 * one).abs() <= 1e-14 * v.abs().max(1e-300));
    }
}
