mod common;

use common::*;
use maxconf::analytic::{
    pure_symmetric_solution, qubit_mixed_solution, square_root_measurement, SymmetricFamilyParams,
};
use maxconf::ensemble::{StateEnsemble, Symmetry};
use maxconf::geometry::{geometry, n2_sigma_mapping, McGeometry};
use maxconf::io::EnsembleJson;
use maxconf::linalg::{psd_power, support_projector, CMatrix, HermitianOperator, C64};
use maxconf::optimizer::{
    duality_identity, evaluate_measurement, solve_numeric, solve_rank1_symmetric, DetectionSet, SolverOptions,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    norm(&(a - b)) <= tol
}

fn random_ensemble(r: &mut ChaCha8Rng, d: usize, n: usize) -> StateEnsemble {
    let states = (0..n)
        .map(|_| {
            let k = r.gen_range(1..=d);
            random_density(r, d, k)
        })
        .collect();
    StateEnsemble::new(random_priors(r, n), states).unwrap()
}

/// Symmetric family with random N, d, purity and coefficients.
fn random_family(r: &mut ChaCha8Rng) -> SymmetricFamilyParams {
    let n = r.gen_range(2..=6);
    let d = r.gen_range(2..=n.min(4));
    let p = if r.gen_bool(0.3) { 1.0 } else { r.gen_range(0.1..1.0) };
    SymmetricFamilyParams::new(n, p, random_coefficients(r, d, 0.05)).unwrap()
}

/// Valid detection set with conclusive operators on the `Lambda_j` supports.
fn random_detection(r: &mut ChaCha8Rng, g: &McGeometry) -> DetectionSet {
    let d = g.dim();
    let ops: Vec<CMatrix> = (0..g.len())
        .map(|j| {
            let u = range_basis(g.lambda(j).matrix(), 1e-9);
            let b = random_matrix(r, u.ncols(), u.ncols());
            &u * &b * b.adjoint() * u.adjoint()
        })
        .collect();
    let sum = ops.iter().fold(CMatrix::zeros(d, d), |acc, m| acc + m);
    let scale = 1.0 / eigenvalues(&sum)[d - 1] * r.gen_range(0.2..1.0);
    DetectionSet::from_conclusive(ops.into_iter().map(|m| HermitianOperator::new(m * c(scale)).unwrap()).collect())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psd_power_identities(seed in any::<u64>(), d in 1usize..=5) {
        let mut r = rng(seed);
        let k = r.gen_range(1..=d);
        let a = random_density(&mut r, d, k);
        let half = psd_power(&a, 0.5).unwrap();
        prop_assert!(close(&(half.matrix() * half.matrix()), a.matrix(), 1e-10));
        let inv = psd_power(&a, -0.5).unwrap();
        let s = support_projector(&a).unwrap();
        prop_assert!(close(&(inv.matrix() * a.matrix() * inv.matrix()), s.matrix(), 1e-8));
        prop_assert!(close(&(s.matrix() * s.matrix()), s.matrix(), 1e-10));
        prop_assert!(close(s.matrix(), &s.matrix().adjoint(), 1e-12));
        let sum: f64 = a.eig().eigenvalues.iter().sum();
        prop_assert!((sum - a.trace()).abs() < 1e-10);
    }

    #[test]
    fn symmetric_ensembles_are_covariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let params = random_family(&mut r);
        let e = params.ensemble().unwrap();
        let sym = e.symmetry().unwrap().clone();
        let v = sym.power(1);
        let rho = e.states().iter().fold(CMatrix::zeros(e.dim(), e.dim()), |acc, s| acc + s.matrix()) / c(e.len() as f64);
        prop_assert!(close(&(&v * &rho * v.adjoint()), &rho, 1e-10));
        for s in e.states() {
            for l in 0..e.dim() {
                prop_assert!((s.matrix()[(l, l)] - e.states()[0].matrix()[(l, l)]).norm() < 1e-10);
            }
        }
        for l in 0..e.dim() {
            for m in 0..e.dim() {
                let sum: C64 = (1..=sym.order).map(|j| (sym.phases[l] * sym.phases[m].conj()).powu(j as u32)).sum();
                let expected = if l == m { sym.order as f64 } else { 0.0 };
                prop_assert!((sum - c(expected)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn geometry_identities(seed in any::<u64>(), d in 2usize..=4, n in 2usize..=4) {
        let mut r = rng(seed);
        let e = random_ensemble(&mut r, d, n);
        let g = geometry(&e).unwrap();
        let rho = g.average.matrix();
        let total = g.states.iter().fold(CMatrix::zeros(d, d), |acc, s| acc + s.transformed.matrix());
        prop_assert!(close(&total, support_projector(&g.average).unwrap().matrix(), 1e-9));
        for (j, s) in g.states.iter().enumerate() {
            let lam = g.lambda(j).matrix();
            prop_assert!(s.confidence <= 1.0 + 1e-12);
            prop_assert!(close(&(lam * lam), lam, 1e-10));
            let p = s.top_projector.matrix();
            prop_assert_eq!(rank(p, 1e-6), s.degeneracy);
            let x = g.inv_sqrt.matrix() * p;
            prop_assert!(close(&(lam * &x), &x, 1e-8));
            let lhs = sandwich(&(e.states()[j].matrix() * c(e.priors()[j])), lam);
            let rhs = sandwich(rho, lam) * c(s.confidence);
            prop_assert!(close(&lhs, &rhs, 1e-9));
        }
    }

    #[test]
    fn symmetric_geometry_is_covariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = random_family(&mut r).ensemble().unwrap();
        let g = geometry(&e).unwrap();
        let v = e.symmetry().unwrap().power(1);
        let c0 = g.states[0].confidence;
        for j in 0..e.len() {
            prop_assert!((g.states[j].confidence - c0).abs() < 1e-9);
            if j + 1 < e.len() {
                let p = g.states[j].top_projector.matrix();
                prop_assert!(close(&(&v * p * v.adjoint()), g.states[j + 1].top_projector.matrix(), 1e-9));
                let lam = g.lambda(j).matrix();
                prop_assert!(close(&(&v * lam * v.adjoint()), g.lambda(j + 1).matrix(), 1e-9));
            }
        }
    }

    #[test]
    fn two_qubit_states_split_the_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = random_ensemble(&mut r, 2, 2);
        prop_assume!(e.states().iter().all(|s| rank(s.matrix(), 1e-9) == 2));
        let g = geometry(&e).unwrap();
        let expected = g.states[0].top_projector.matrix() * c(g.states[0].confidence)
            + g.states[1].top_projector.matrix() * c(1.0 - g.states[1].confidence);
        prop_assert!(close(g.states[0].transformed.matrix(), &expected, 1e-9));
        prop_assume!(g.states[0].confidence + g.states[1].confidence - 1.0 > 1e-6);
        let m = n2_sigma_mapping(&e, &g).unwrap();
        prop_assert!(m.sum_residual < 1e-9 && m.projector_residual < 1e-9);
        let overlap = g.states[0].top_projector.matrix() * g.states[1].top_projector.matrix();
        prop_assert!(norm(&overlap) < 1e-9);
    }

    #[test]
    fn duality_identity_for_any_operator(seed in any::<u64>(), d in 2usize..=4, n in 2usize..=4) {
        let mut r = rng(seed);
        let e = random_ensemble(&mut r, d, n);
        let g = geometry(&e).unwrap();
        let det = random_detection(&mut r, &g);
        let z = HermitianOperator::new(random_hermitian(&mut r, d)).unwrap();
        prop_assert!(duality_identity(&g, &det, &z).residual() < 1e-9);
    }

    #[test]
    fn closed_form_certificates_bound_every_measurement(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = random_family(&mut r).ensemble().unwrap();
        let g = geometry(&e).unwrap();
        let sol = solve_rank1_symmetric(&e, &g).unwrap();
        prop_assert!(sol.certified());
        prop_assert!(sol.certificate.worst_residual() < 1e-9);
        prop_assert!((sol.certificate.trace_z - sol.rate).abs() < 1e-8);
        for _ in 0..5 {
            let other = random_detection(&mut r, &g);
            let rate = evaluate_measurement(&e, &other).unwrap().rate;
            prop_assert!(rate <= sol.certificate.trace_z + 1e-8);
        }
        let v = e.symmetry().unwrap().power(1);
        let pi0 = sol.detection.failure().matrix();
        prop_assert!(close(&(&v * pi0), &(pi0 * &v), 1e-10));
        prop_assert!(close(&(g.average.matrix() * pi0), &(pi0 * g.average.matrix()), 1e-10));
    }

    #[test]
    fn failure_rank_counts_ties(seed in any::<u64>(), n in 3usize..=6, ties in 1usize..=3) {
        let mut r = rng(seed);
        let d = r.gen_range(ties.max(2)..=n.min(4).max(ties.max(2)));
        prop_assume!(ties < d);
        // `ties` coefficients share the smallest modulus.
        let small = r.gen_range(0.02..0.5 / d as f64);
        let rest: Vec<f64> = (ties..d).map(|_| r.gen_range(1.5..3.0)).collect();
        let scale = (1.0 - ties as f64 * small) / rest.iter().sum::<f64>();
        let weights: Vec<f64> = (0..ties).map(|_| small).chain(rest.iter().map(|w| w * scale)).collect();
        prop_assume!(weights[ties..].iter().all(|w| *w > small * 1.01));
        let coeffs = weights
            .iter()
            .map(|w| C64::from_polar(w.sqrt(), r.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let e = SymmetricFamilyParams::pure(n, coeffs).unwrap().ensemble().unwrap();
        let g = geometry(&e).unwrap();
        let sol = solve_rank1_symmetric(&e, &g).unwrap();
        prop_assert_eq!(rank(sol.detection.failure().matrix(), 1e-6), d - ties);
    }

    #[test]
    fn numeric_rate_never_exceeds_the_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=4);
        let p = r.gen_range(0.1..=1.0);
        let gamma = r.gen_range(0.05..std::f64::consts::FRAC_PI_2);
        let e = SymmetricFamilyParams::qubit(n, p, gamma).unwrap().ensemble().unwrap();
        let g = geometry(&e).unwrap();
        let exact = solve_rank1_symmetric(&e, &g).unwrap();
        let options = SolverOptions { seed, ..SolverOptions::default() };
        let numeric = solve_numeric(&e, &g, &options).unwrap();
        prop_assert!(numeric.rate <= exact.certificate.trace_z + options.opt_tol);
    }

    #[test]
    fn family_formulas_are_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=8);
        let d = r.gen_range(2..=n);
        let params = SymmetricFamilyParams::pure(n, random_coefficients(&mut r, d, 0.01)).unwrap();
        let sol = pure_symmetric_solution(&params).unwrap();
        let srm = square_root_measurement(&params).unwrap();
        prop_assert!(srm.confidence <= sol.confidence + 1e-12);

        let e = params.ensemble().unwrap();
        let det = DetectionSet::from_conclusive(sol.detection.clone().unwrap()).unwrap();
        let stats = evaluate_measurement(&e, &det).unwrap();
        prop_assert!((stats.p_corr - sol.confidence * (1.0 - sol.failure)).abs() < 1e-9);
        prop_assert!((stats.p_corr - sol.p_corr()).abs() < 1e-9);
    }

    #[test]
    fn pure_qubit_limit(n in 2usize..=8, gamma in 0.01f64..std::f64::consts::FRAC_PI_2) {
        let qubit = qubit_mixed_solution(&SymmetricFamilyParams::qubit(n, 1.0, gamma).unwrap()).unwrap();
        let coeffs = vec![c((gamma / 2.0).cos()), c((gamma / 2.0).sin())];
        let pure = pure_symmetric_solution(&SymmetricFamilyParams::pure(n, coeffs).unwrap()).unwrap();
        prop_assert!((qubit.confidence - pure.confidence).abs() < 1e-9);
        prop_assert!((qubit.failure - pure.failure).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>(), d in 1usize..=4, n in 1usize..=4) {
        let mut r = rng(seed);
        let e = random_ensemble(&mut r, d, n);
        let text = serde_json::to_string(&EnsembleJson::from_ensemble(&e)).unwrap();
        let back: EnsembleJson = serde_json::from_str(&text).unwrap();
        let back = back.to_ensemble().unwrap();
        prop_assert_eq!(back.priors(), e.priors());
        for (a, b) in back.states().iter().zip(e.states()) {
            prop_assert_eq!(a.matrix(), b.matrix());
        }
    }
}

#[test]
fn symmetry_rejects_phases_off_the_unit_circle() {
    assert!(Symmetry::new(3, vec![c(1.0), c(0.5)]).is_err());
}
