use pairy::costs::CostFunction;
use pairy::moments::{canonical_shift, mu_excursion, rescaled_moments, shifted_moments, Ensemble};
use pairy::numerics::{factorial, gamma, normalized_catalan, rgamma_rat, Constants, Number, Rat, Real};
use pairy::oracle::{exact_moment_dp, slice_semilengths, statistic_with};
use pairy::sampler::{run_experiment, sample_path, ExperimentConfig};
use pairy::series::TruncSeries;
use pairy::trees::enumerate_trees;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PREC: u32 = 128;

fn rat_p() -> impl Strategy<Value = Rat> {
    // p in (0, 5] away from 1/2
    (1i64..=500, 0i64..2).prop_filter_map("p = 1/2", |(n, _)| {
        let p = Rat::from((n, 100));
        (p != Rat::from((1, 2))).then_some(p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        let x = Real::from_f64(PREC, x);
        let lhs = gamma(&(&x + 1i64)).unwrap();
        let rhs = &x * gamma(&x).unwrap();
        let rel = ((&lhs - &rhs) / &rhs).abs().to_f64();
        prop_assert!(rel <= 100.0 * 2f64.powi(1 - PREC as i32), "rel = {rel:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ops_are_linear(
        f in prop::collection::vec(-1000i64..1000, 12),
        g in prop::collection::vec(-1000i64..1000, 12),
        h in prop::collection::vec(-1000i64..1000, 12),
        c in -20i64..20,
    ) {
        let s = |v: &[i64]| TruncSeries::from_coeffs(v.iter().map(|&x| Rat::from(x)).collect::<Vec<_>>());
        let (f, g, h) = (s(&f), s(&g), s(&h));
        let c = Rat::from(c);
        let lin = f.scale(&c).add(&g).unwrap();
        prop_assert_eq!(
            lin.hadamard(&h).unwrap(),
            f.hadamard(&h).unwrap().scale(&c).add(&g.hadamard(&h).unwrap()).unwrap()
        );
        let cost = CostFunction::power_one(Rat::from(2)).unwrap();
        let eps = Rat::from((1, 3));
        let l = |x: &TruncSeries<Rat>| x.apply_l(&cost, &eps, 2, 64).unwrap();
        prop_assert_eq!(l(&lin), l(&f).scale(&c).add(&l(&g)).unwrap());
    }

    #[test]
    fn binomial_series_ratio(num in -40i64..40, den in 1i64..12) {
        let a = Rat::from((num, den));
        prop_assume!(!(*a.denom() == 1 && a <= 0));
        let s = TruncSeries::binomial_series(&a, 30).unwrap();
        for n in 0..30 {
            let want = Rat::from(&a + n as i64) / Rat::from(n as i64 + 1);
            prop_assert_eq!(Rat::from(s.coeff(n + 1) / s.coeff(n)), want);
        }
    }

    #[test]
    fn first_rescaled_moment_is_the_shift(p in rat_p()) {
        let m = rescaled_moments(Ensemble::Excursion, &p, 1, PREC).unwrap();
        let t = canonical_shift(&p, PREC).unwrap();
        let d = (m[1].to_real(PREC) - t.to_real(PREC)).abs();
        prop_assert!(d.to_f64() <= 1e-30 * t.to_f64().abs().max(1.0));
        // sign of μ_1 follows Γ(p - 1/2)
        let mu = mu_excursion(&p, 1, PREC).unwrap();
        prop_assert_eq!(mu[1].to_f64() > 0.0, p > Rat::from((1, 2)));
    }

    #[test]
    fn zero_shift_is_identity(v in prop::collection::vec(-1e6f64..1e6, 1..12)) {
        let r: Vec<Real> = v.iter().map(|&x| Real::from_f64(PREC, x)).collect();
        prop_assert_eq!(shifted_moments(&r, &Real::zero(PREC)), r);
    }

    #[test]
    fn slices_match_midpoint_heights(seed in any::<u64>(), bridge in any::<bool>()) {
        let e = if bridge { Ensemble::Bridge } else { Ensemble::Excursion };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let path = sample_path(e, 200, &mut rng);
        let slices = slice_semilengths(&path);
        prop_assert_eq!(slices.len(), 200);
        let total: u64 = slices.iter().map(|&m| 2 * m as u64 + 1).sum();
        prop_assert_eq!(2 * total, path.twice_unsigned_area());
        let omega: Vec<Rat> = (0..=200).map(|k| Rat::from(2 * k + 1)).collect();
        prop_assert_eq!(statistic_with(&path, &omega, &Rat::new()), Rat::from(total));
    }
}

#[test]
fn gamma_at_integers_is_factorial() {
    for n in 0..=30u32 {
        let g = gamma(&Real::from_int(PREC, n as i64 + 1)).unwrap();
        let f = Real::from_integer(PREC, &factorial(n));
        assert_eq!(g, f, "n = {n}");
    }
}

#[test]
fn normalized_catalan_two_ways() {
    let w = 256;
    let sqrt_pi = Constants::get(w).sqrt_pi.clone();
    for k in 0..=200u32 {
        let g = pairy::numerics::gamma_rat(&(Rat::from(k) + Rat::from((1, 2))), w).unwrap()
            * rgamma_rat(&Rat::from(k + 2), w).unwrap()
            / (sqrt_pi.clone() * 2i64);
        let c = Real::from_rat(w, &normalized_catalan(k));
        assert!(((&g - &c) / &c).abs() < 1e-70, "k = {k}");
    }
}

#[test]
fn catalan_partial_sums_approach_one() {
    let mut sum = Rat::new();
    let mut prev_gap = 2.0f64;
    for k in 0..=4096u32 {
        sum += normalized_catalan(k);
        let gap = (Rat::from(1) - &sum).to_f64();
        assert!(gap > 0.0 && gap < prev_gap);
        prev_gap = gap;
        if k >= 64 && k.is_power_of_two() {
            // 1 - Σ_{j<=K} c_j ~ 1/√(πK)
            let scaled = gap * ((k as f64) * std::f64::consts::PI).sqrt();
            assert!((scaled - 1.0).abs() < 0.05, "K = {k}: {scaled}");
        }
    }
}

#[test]
fn e0_coefficients() {
    let e = TruncSeries::<Rat>::e0(64, ());
    for n in 0..=64 {
        assert_eq!(e.coeff(n), &normalized_catalan(n as u32));
    }
}

#[test]
fn declared_eta_is_observed() {
    let costs = [
        CostFunction::gamma_ratio(Rat::from((1, 2)), Rat::from((3, 4))).unwrap(),
        CostFunction::gamma_ratio(Rat::from(2), Rat::from((3, 2))).unwrap(),
        CostFunction::power_half(Rat::from((1, 3))).unwrap(),
        CostFunction::power_one(Rat::from(2)).unwrap(),
        CostFunction::gamma_ratio_32(Rat::from(2), Rat::from((1, 2))).unwrap(),
    ];
    for c in costs {
        let p = Real::from_rat(PREC, c.p());
        let pts: Vec<(f64, f64)> = (4..=20)
            .map(|j| {
                let k = 1u64 << j;
                let w = c.evaluate(k, PREC).unwrap().to_real(PREC);
                let kr = Real::from_int(PREC, k as i64);
                let dev = (w / kr.powf(&p) - 1i64).abs();
                ((k as f64).ln(), dev.ln().to_f64())
            })
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
        let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
        let slope = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum::<f64>()
            / pts.iter().map(|q| (q.0 - mx).powi(2)).sum::<f64>();
        let eta = c.eta();
        assert!((-slope - eta).abs() <= 0.2 * eta, "{}: fitted {} vs {eta}", c.id(), -slope);
    }
}

#[test]
fn trees_are_counted_by_catalan() {
    for s in 1..=9usize {
        let t = enumerate_trees(s).unwrap();
        assert_eq!(Rat::from(t.len()), pairy::numerics::catalan(s as u32));
        for tree in &t {
            assert_eq!(tree.child_counts().iter().sum::<usize>(), s);
        }
    }
}

#[test]
fn dp_normalization() {
    let cost = CostFunction::power_half(Rat::from(1)).unwrap();
    for e in [Ensemble::Excursion, Ensemble::Bridge] {
        let t = exact_moment_dp(e, &cost, &Number::Exact(Rat::new()), 200, 1, 64).unwrap();
        for n in 0..=200 {
            assert_eq!(t.get(0, n), &Number::Exact(Rat::from(1)), "{e} N = {n}");
        }
    }
}

#[test]
fn sampler_agrees_with_dp() {
    let costs = [CostFunction::power_half(Rat::from(1)).unwrap(), CostFunction::power_one(Rat::from((1, 2))).unwrap()];
    for cost in &costs {
        for e in [Ensemble::Excursion, Ensemble::Bridge] {
            for n in [50usize, 100] {
                let eps = Number::Exact(Rat::from((1, 4)));
                let mut c = ExperimentConfig::new(e, n, 200_000, cost.clone());
                c.eps = eps.clone();
                c.s_max = 3;
                c.seed = 7 + n as u64;
                let q = cost.p().to_f64() + 0.5;
                c.rescale_exponent = q;
                let s = run_experiment(&c).unwrap();
                let t = exact_moment_dp(e, cost, &eps, n, 3, 128).unwrap();
                let scale = (n as f64).powf(-q);
                let r: Vec<f64> = (1..=3).map(|k| t.get(k, n).to_f64() * scale.powi(k as i32)).collect();
                for z in pairy::sampler::compare_to_reference(&s, &r).unwrap() {
                    assert!(z.z.abs() <= 4.0, "{} {e} N = {n} s = {}: z = {}", cost.id(), z.s, z.z);
                }
            }
        }
    }
}

#[test]
fn excursion_support() {
    // p > 1/2 with ε = 0: the statistic is a sum of positive costs
    let cost = CostFunction::gamma_ratio(Rat::from((1, 2)), Rat::from(1)).unwrap();
    let mut c = ExperimentConfig::new(Ensemble::Excursion, 500, 2_000, cost);
    c.rescale_exponent = 1.5;
    let s = run_experiment(&c).unwrap();
    assert!(s.values.iter().all(|&x| x > 0.0));
    // p < 1/2 with ε = α: both signs
    let cost = CostFunction::gamma_ratio(Rat::from((1, 2)), Rat::from((1, 4))).unwrap();
    let alpha = cost.alpha(1e-15, PREC).unwrap().value;
    let mut c = ExperimentConfig::new(Ensemble::Excursion, 2_000, 2_000, cost);
    c.eps = Number::Approx(alpha);
    c.rescale_exponent = 0.75;
    let s = run_experiment(&c).unwrap();
    assert!(s.values.iter().any(|&x| x > 0.0) && s.values.iter().any(|&x| x < 0.0));
}
