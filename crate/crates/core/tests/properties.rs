use gnorm_core::choi::{self};
use gnorm_core::decision::{self, DecisionProblem, Experiment};
use gnorm_core::norms::{self, NormOptions};
use gnorm_core::solver::project_psd;
use gnorm_core::{oracles, random, HermitianMatrix, Section};
use proptest::prelude::*;

fn herm(seed: u64, n: usize) -> HermitianMatrix {
    random::hermitian(&mut random::rng(seed), n)
}

fn close(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> bool {
    a.sub(b).frobenius_norm() <= tol * (1.0 + a.frobenius_norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svec_round_trip_and_inner_product(seed in any::<u64>(), n in 1usize..6) {
        let mut r = random::rng(seed);
        let x = random::hermitian(&mut r, n);
        let y = random::hermitian(&mut r, n);
        let back = HermitianMatrix::from_svec(n, &x.to_svec()).unwrap();
        prop_assert!(close(&x, &back, 1e-14));
        let dot: f64 = x.to_svec().iter().zip(y.to_svec()).map(|(a, b)| a * b).sum();
        prop_assert!((dot - x.inner(&y)).abs() < 1e-10 * (1.0 + dot.abs()));
    }

    #[test]
    fn spectral_facts(seed in any::<u64>(), n in 1usize..6) {
        let x = herm(seed, n);
        let spec = x.eig().unwrap();
        prop_assert!(close(&x, &spec.reconstruct(), 1e-10));
        let (abs, pos, neg) = x.abs_pos_neg().unwrap();
        prop_assert!(close(&x, &pos.sub(&neg), 1e-10));
        prop_assert!(close(&abs, &pos.add(&neg), 1e-10));
        let tn = x.trace_norm().unwrap();
        let on = x.op_norm().unwrap();
        prop_assert!(on <= tn + 1e-12 && tn <= n as f64 * on + 1e-10);
        prop_assert!((abs.trace() - tn).abs() < 1e-10 * (1.0 + tn));
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut r = random::rng(seed);
        let a = random::hermitian(&mut r, da);
        let b = random::hermitian(&mut r, db);
        let ab = a.tensor(&b);
        prop_assert!(close(&ab.partial_trace(0).unwrap(), &b.scale(a.trace()), 1e-10));
        prop_assert!(close(&ab.partial_trace(1).unwrap(), &a.scale(b.trace()), 1e-10));
        prop_assert!(close(&ab.transpose().transpose(), &ab, 0.0));
    }

    #[test]
    fn projection_onto_psd_cone(seed in any::<u64>(), n in 1usize..6) {
        let x = herm(seed, n);
        let p = project_psd(&x).unwrap();
        prop_assert!(p.min_eigenvalue().unwrap() >= -1e-12);
        prop_assert!(close(&p, &project_psd(&p).unwrap(), 1e-12));
        // the residual is the negative part and is orthogonal to the projection
        let (_, _, neg) = x.abs_pos_neg().unwrap();
        prop_assert!(close(&p.sub(&x), &neg, 1e-10));
        prop_assert!(p.inner(&neg).abs() < 1e-10);
    }

    #[test]
    fn choi_application_matches_kraus(seed in any::<u64>(), din in 1usize..4, dout in 1usize..4) {
        let mut r = random::rng(seed);
        let k = random::channel(&mut r, din, dout, 2);
        let x = choi::choi_of_kraus(&k);
        prop_assert!(x.is_channel(1e-10).unwrap());
        let a = random::hermitian(&mut r, din);
        let via_choi = choi::apply_choi(&x, &a).unwrap();
        prop_assert!(close(&via_choi, &k.apply(&a).unwrap(), 1e-10));
    }

    #[test]
    fn sampled_pairing_is_one(seed in 0u64..1000, which in 0usize..3) {
        let s = match which {
            0 => Section::states(3).unwrap(),
            1 => Section::channels(2, 2).unwrap(),
            _ => Section::comb(&[2, 2, 2]).unwrap(),
        };
        let b = oracles::sample_section(&s, 3, seed).unwrap();
        let bt = oracles::sample_section(&s.dual().unwrap(), 3, seed + 1).unwrap();
        for x in &b.points {
            prop_assert!(s.contains(x, 1e-8).unwrap());
            for y in &bt.points {
                prop_assert!((x.inner(y) - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn samples_form_prefixes(seed in any::<u64>(), n in 1usize..6, extra in 0usize..4) {
        let s = Section::channels(2, 2).unwrap();
        let a = oracles::sample_section(&s, n, seed).unwrap();
        let b = oracles::sample_section(&s, n + extra, seed).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            prop_assert_eq!(p.to_svec(), q.to_svec());
        }
    }

    #[test]
    fn states_norm_is_trace_norm(seed in any::<u64>(), n in 1usize..5) {
        let x = herm(seed, n);
        let v = norms::base_norm(&Section::states(n).unwrap(), &x, NormOptions::default()).unwrap().value;
        prop_assert!((v - x.trace_norm().unwrap()).abs() < 1e-10 * (1.0 + v));
        let d = norms::dual_base_norm(&Section::states(n).unwrap(), &x, NormOptions::default()).unwrap().value;
        prop_assert!((d - x.op_norm().unwrap()).abs() < 1e-10 * (1.0 + d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn channel_norm_axioms(seed in any::<u64>(), k in -3.0f64..3.0) {
        let s = Section::channels(2, 2).unwrap();
        let opts = NormOptions::with_tol(1e-9);
        let mut r = random::rng(seed);
        let x = random::hermitian(&mut r, 4);
        let y = random::hermitian(&mut r, 4);
        let nx = norms::base_norm(&s, &x, opts).unwrap().value;
        let ny = norms::base_norm(&s, &y, opts).unwrap().value;
        let nxy = norms::base_norm(&s, &x.add(&y), opts).unwrap().value;
        let nkx = norms::base_norm(&s, &x.scale(k), opts).unwrap().value;
        prop_assert!(nxy <= nx + ny + 1e-6);
        prop_assert!((nkx - k.abs() * nx).abs() < 1e-6 * (1.0 + nkx));
        // members sit on the unit sphere
        let b = choi::choi_of_kraus(&random::channel(&mut r, 2, 2, 2)).into_matrix();
        prop_assert!((norms::base_norm(&s, &b, opts).unwrap().value - 1.0).abs() < 1e-6);
        // ‖·‖_B dominates the trace norm scaled by the smallest dual element
        prop_assert!(nx >= x.trace_norm().unwrap() / 2.0 - 1e-6);
    }

    #[test]
    fn custom_sections_are_dual_involutive(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let anchor = random::density(&mut r, 3);
        let basis = vec![anchor.clone(), random::hermitian(&mut r, 3), random::hermitian(&mut r, 3)];
        let raw = random::density(&mut r, 3).add(&HermitianMatrix::identity(3).scale(0.1));
        let s = Section::custom(&basis, &raw.scale(1.0 / anchor.inner(&raw))).unwrap();
        let back = s.dual().unwrap().dual().unwrap();
        prop_assert!(s.equivalent(&back, 1e-8));
        for p in oracles::sample_section(&s, 10, seed).unwrap().points {
            prop_assert!(back.contains(&p, 1e-7).unwrap());
        }
    }

    #[test]
    fn loss_and_complement_payoff_sum_to_one(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let family = vec![random::density(&mut r, 2), random::density(&mut r, 2)];
        let e = Experiment::uniform(Section::states(2).unwrap(), family).unwrap();
        let table: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..3).map(|_| rand::Rng::random_range(&mut r, 0.0..1.0)).collect())
            .collect();
        let p = DecisionProblem::classical(table).unwrap();
        let opts = NormOptions::with_tol(1e-10);
        let loss = decision::min_loss(&e, &p, opts).unwrap().value;
        let pay = decision::max_payoff(&e, &p.complement(), opts).unwrap().value;
        prop_assert!((loss + pay - 1.0).abs() < 1e-7);
    }
}
