mod common;

use common::*;
use metagp_core::acquisition::{score, AcquisitionKind};
use metagp_core::bo::{BoStep, BoTrace};
use metagp_core::data::{online_map, warp_output, INFEASIBLE_VALUE};
use metagp_core::gp::{condition, Architecture, GpParams, ObservationSet};
use metagp_core::linalg::min_eigenvalue;
use metagp_core::space::{DimSpec, Scaling, SearchSpace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arch_strategy() -> impl Strategy<Value = Architecture> {
    prop_oneof![Just(Architecture::ConstMatern), Just(Architecture::MlpMatern)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_matrix_is_psd(seed in any::<u64>(), arch in arch_strategy(), n in 1usize..=8, d in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(&mut r, arch, d);
        let xs = random_points(&mut r, n, d);
        let k = p.kernel_matrix(&xs, &xs).unwrap();
        prop_assert!(min_eigenvalue(&k) >= -1e-8);
    }

    #[test]
    fn posterior_contracts(seed in any::<u64>(), arch in arch_strategy(), n in 1usize..=6, d in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(&mut r, arch, d);
        let xs = random_points(&mut r, n, d);
        let ys = (0..n).map(|_| uniform(&mut r, -2.0, 2.0)).collect();
        let test = random_points(&mut r, 5, d);
        let post = condition(&p, ObservationSet::new(xs, ys).unwrap()).unwrap();
        let prior = p.kernel_matrix(&test, &test).unwrap();
        let pred = post.predict(&test).unwrap();
        for i in 0..5 {
            prop_assert!(pred.cov[(i, i)] <= prior[(i, i)] + 1e-10);
        }
    }

    #[test]
    fn predictions_ignore_data_order(seed in any::<u64>(), arch in arch_strategy(), n in 2usize..=6) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(&mut r, arch, 2);
        let xs = random_points(&mut r, n, 2);
        let ys: Vec<f64> = (0..n).map(|_| uniform(&mut r, -2.0, 2.0)).collect();
        let test = random_points(&mut r, 4, 2);
        let a = condition(&p, ObservationSet::new(xs.clone(), ys.clone()).unwrap()).unwrap().predict(&test).unwrap();
        let perm: Vec<usize> = (0..n).rev().collect();
        let shuffled = ObservationSet::new(xs, ys).unwrap().select(&perm);
        let b = condition(&p, shuffled).unwrap().predict(&test).unwrap();
        for i in 0..4 {
            prop_assert!((a.mean[i] - b.mean[i]).abs() <= 1e-10);
            for j in 0..4 {
                prop_assert!((a.cov[(i, j)] - b.cov[(i, j)]).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn flat_vector_round_trips(theta in prop::collection::vec(-5.0f64..5.0, 51), d in 1usize..=3, arch in arch_strategy()) {
        let len = metagp_core::gp::ParamLayout::new(arch, d).len;
        let t = theta[..len].to_vec();
        let p = GpParams::from_flat(arch, d, t.clone()).unwrap();
        prop_assert_eq!(p.as_flat(), &t[..]);
        let (q, _) = GpParams::from_document(&p.to_document(), "mem").unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn input_warping_is_bijective(u in prop::collection::vec(0.0f64..=1.0, 3)) {
        let space = SearchSpace::new(vec![
            DimSpec { name: "lr".into(), low: 1e-5, high: 10.0, scaling: Scaling::Log },
            DimSpec { name: "momentum".into(), low: 0.0, high: 0.999, scaling: Scaling::OneMinusLog },
            DimSpec::linear("decay", 0.1, 1.0),
        ]).unwrap();
        let raw = space.unwarp(&u).unwrap();
        let back = space.warp(&raw).unwrap();
        for (a, b) in u.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        let again = space.unwarp(&back).unwrap();
        for (a, b) in raw.iter().zip(&again) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn online_map_bounds(values in prop::collection::vec(prop::option::weighted(0.8, -100.0f64..100.0), 1..40)) {
        prop_assume!(values.iter().any(Option::is_some));
        let out = online_map(&values).unwrap();
        for (v, o) in values.iter().zip(&out) {
            match v {
                None => prop_assert_eq!(*o, INFEASIBLE_VALUE),
                Some(_) => prop_assert!(*o > -2.0 && *o <= 2.0, "{}", o),
            }
        }
    }

    #[test]
    fn output_warp_is_decreasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        prop_assume!(a < b);
        prop_assert!(warp_output(a).unwrap() > warp_output(b).unwrap());
    }

    #[test]
    fn scores_increase_in_mean(mu in -5.0f64..5.0, gap in 1e-3f64..2.0, sigma in 1e-2f64..3.0, best in -2.0f64..2.0) {
        // Beyond about 30 standard deviations below the incumbent, EI underflows to zero.
        let ei_representable = (mu - best) / sigma > -30.0;
        for kind in [AcquisitionKind::Pi { threshold: 0.1 }, AcquisitionKind::Ei, AcquisitionKind::Ucb { zeta: 1.8 }] {
            if kind == AcquisitionKind::Ei && !ei_representable {
                continue;
            }
            prop_assert!(score(&kind, mu + gap, sigma, best).unwrap() > score(&kind, mu, sigma, best).unwrap());
        }
        prop_assert_eq!(score(&AcquisitionKind::Ucb { zeta: 1.8 }, mu, sigma, best).unwrap(), mu + 1.8 * sigma);
        prop_assert!(score(&AcquisitionKind::Ei, mu, sigma, best).unwrap() >= 0.0);
    }

    #[test]
    fn best_so_far_never_decreases(ys in prop::collection::vec(-10.0f64..10.0, 1..30)) {
        let steps = ys.iter().map(|&y| BoStep { x: vec![0.5], y, acq_value: 0.0, f_true: None }).collect();
        let t = BoTrace::from_steps(steps, Some(10.0), 0, "p");
        prop_assert!(t.best_so_far().windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(t.regret_trace.windows(2).all(|w| w[1] <= w[0]));
        let tau = t.best_index().unwrap();
        prop_assert!(ys[..tau].iter().all(|&y| y < ys[tau]));
    }
}
