mod common;

use lacunary::arith::{euler_phi, ramanujan_sum, rho};
use lacunary::expsum::{kloosterman_factored, KloostermanParams};
use lacunary::harness::fit_slope;
use lacunary::lattice::{count_representations, LacunarySequence};
use lacunary::multiplier::{psi_raw, surface_ft, Frequency};
use lacunary::operators::average::sequence_averages;
use lacunary::operators::exponents::{critical_p, interp_exponent, weak_type_budget};
use lacunary::operators::{lacunary_maximal, spherical_average, stopping_time_linearize, GridFunction};
use proptest::prelude::*;

fn small_l(d: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-30i64..30, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kloosterman_is_real_and_symmetric(
        lambda in 0u64..500,
        q in 1u64..16,
        l in small_l(4),
        perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        flip in 0usize..4,
    ) {
        let k = |l: &[i64]| kloosterman_factored(&KloostermanParams::new(lambda, q, l).unwrap()).unwrap();
        let base = k(&l);
        prop_assert!(base.im.abs() < 1e-12);
        let permuted: Vec<i64> = perm.iter().map(|&i| l[i]).collect();
        prop_assert!((k(&permuted) - base).norm() < 1e-12);
        let mut flipped = l.clone();
        flipped[flip] = -flipped[flip];
        prop_assert!((k(&flipped) - base).norm() < 1e-12);
        // periodic in l and λ
        let shifted: Vec<i64> = l.iter().map(|&x| x + q as i64).collect();
        prop_assert!((k(&shifted) - base).norm() < 1e-12);
        let moved = kloosterman_factored(&KloostermanParams::new(lambda + q, q, &l).unwrap()).unwrap();
        prop_assert!((moved - base).norm() < 1e-12);
    }

    #[test]
    fn kloosterman_trivial_bound(lambda in 0u64..500, q in 1u64..30, l in small_l(5)) {
        let k = kloosterman_factored(&KloostermanParams::new(lambda, q, &l).unwrap()).unwrap();
        // |Σ_x| ≤ q^{d/2}·2^{d/2} for each a
        let bound = euler_phi(q).unwrap() as f64 * 2f64.powf(2.5) / (q as f64).powf(2.5);
        prop_assert!(k.norm() <= bound + 1e-12);
    }

    #[test]
    fn ramanujan_is_multiplicative(a in 1u64..60, b in 1u64..60, n in -100i64..100) {
        prop_assume!(num_integer::gcd(a, b) == 1);
        prop_assert_eq!(ramanujan_sum(a * b, n), ramanujan_sum(a, n) * ramanujan_sum(b, n));
        prop_assert_eq!(ramanujan_sum(a, 0), euler_phi(a).unwrap() as i64);
    }

    #[test]
    fn rho_is_bounded(q in 1u64..10_000, lambda in 1u64..1_000_000) {
        let r = rho(q, lambda);
        prop_assert!(r >= 1 && r <= q && q % r == 0);
    }

    #[test]
    fn counts_match_cube_scan(d in 2usize..5, lambda in 0u64..60) {
        prop_assert_eq!(count_representations(d, lambda).unwrap(), common::naive_count(d, lambda));
    }

    #[test]
    fn frequency_is_canonical(coords in prop::collection::vec(-50.0f64..50.0, 1..6)) {
        let f = Frequency::new(coords.clone());
        for (c, x) in f.coords().iter().zip(&coords) {
            prop_assert!((-0.5..0.5).contains(c));
            prop_assert!(((x - c) - (x - c).round()).abs() < 1e-9);
        }
        prop_assert_eq!(Frequency::new(f.coords().to_vec()), f);
    }

    #[test]
    fn bump_is_a_cutoff(x in prop::collection::vec(-0.5f64..0.5, 1..6)) {
        let v = psi_raw(&x);
        let sup = x.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        prop_assert!((0.0..=1.0).contains(&v));
        if sup <= 0.125 {
            prop_assert_eq!(v, 1.0);
        }
        if sup >= 0.25 {
            prop_assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn surface_transform_is_bounded_and_radial(
        d in 2usize..8,
        lambda in 0.1f64..50.0,
        xi in prop::collection::vec(-3.0f64..3.0, 7),
    ) {
        let xi = &xi[..d];
        let v = surface_ft(d, lambda, xi);
        prop_assert!(v.abs() <= 1.0 + 1e-12);
        let mut rotated = xi.to_vec();
        rotated.reverse();
        prop_assert!((surface_ft(d, lambda, &rotated) - v).abs() < 1e-12);
    }

    #[test]
    fn averages_preserve_mass_and_positivity(
        values in prop::collection::vec(0.0f64..1.0, 81),
        lambda in prop::sample::select(vec![1u64, 2, 3, 5, 6, 7, 9, 10]),
    ) {
        let f = GridFunction::from_values(4, 3, values).unwrap();
        let a = spherical_average(&f, lambda).unwrap();
        let (mass_f, mass_a) = (f.values().iter().sum::<f64>(), a.values().iter().sum::<f64>());
        prop_assert!((mass_f - mass_a).abs() < 1e-10);
        prop_assert!(a.values().iter().all(|&v| v >= 0.0));
        prop_assert!(a.lp_norm(f64::INFINITY).unwrap() <= f.lp_norm(f64::INFINITY).unwrap() + 1e-12);
    }

    #[test]
    fn stopping_time_linearizes_the_maximal_function(
        values in prop::collection::vec(-1.0f64..1.0, 81),
    ) {
        let f = GridFunction::from_values(4, 3, values).unwrap();
        let seq = LacunarySequence::new(4, vec![1, 3, 7], true).unwrap();
        let averages = sequence_averages(&f, &seq).unwrap();
        let tau = stopping_time_linearize(&f, &seq).unwrap();
        let linearized = tau.select(&averages).unwrap().abs();
        let maximal = lacunary_maximal(&f, &seq).unwrap();
        prop_assert_eq!(linearized.values(), maximal.values());
    }

    #[test]
    fn lacunary_gaps_are_enforced(radii in prop::collection::vec(1u64..10_000, 2..6)) {
        let mut sorted = radii.clone();
        sorted.sort();
        let ok = sorted.windows(2).all(|w| w[1] > 2 * w[0]);
        prop_assert_eq!(LacunarySequence::new(5, sorted, false).is_ok(), ok);
    }

    #[test]
    fn grid_binary_round_trip(values in prop::collection::vec(any::<f64>(), 125)) {
        let f = GridFunction::from_values(3, 5, values).unwrap();
        let mut buf = Vec::new();
        f.write_binary(&mut buf).unwrap();
        let g: GridFunction = GridFunction::read_binary(buf.as_slice()).unwrap();
        let bits = |h: &GridFunction| h.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&f), bits(&g));
    }

    #[test]
    fn slope_fit_recovers_power_laws(exponent in -3.0f64..3.0, scale in 0.01f64..100.0) {
        let xs: Vec<f64> = (1..20).map(|i| i as f64 * 3.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| scale * x.powf(exponent)).collect();
        let fit = fit_slope(&xs, &ys).unwrap();
        prop_assert!((fit.slope - exponent).abs() < 1e-9);
        prop_assert!((fit.intercept - scale.ln()).abs() < 1e-8);
    }

    #[test]
    fn exponent_algebra(d in 4usize..40, beta in 1e-3f64..1e3, size in 1.0f64..1e6) {
        prop_assert!(interp_exponent(d, critical_p(d).unwrap()).unwrap().abs() < 1e-12);
        let (a, b) = weak_type_budget(d, beta, size).unwrap();
        let target = size.powf((d as f64 - 1.0) / (d as f64 + 1.0));
        prop_assert!(((a - target) / target).abs() < 1e-12);
        prop_assert!(((b - target) / target).abs() < 1e-12);
    }
}
