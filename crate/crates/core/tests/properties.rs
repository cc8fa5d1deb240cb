use optdoe::annealer::{anneal, SaConfig};
use optdoe::criteria::{CriterionId, Evaluator};
use optdoe::design::{project, redundant_count, DomainSpec, RealMatrix};
use optdoe::sampling::{random_free, random_lh, RngSeed};
use optdoe::sensitivity::{correlation_error, param_response_srcc};
use optdoe::sequential::{extend, ExtensionPlan, ExtensionStrategy};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn best_value_never_increases(seed in any::<u64>(), id in 0usize..8) {
        let id = CriterionId::ALL[id];
        let dom = DomainSpec::uniform(2, 6).unwrap();
        let ev = Evaluator::<f64>::new(dom.clone());
        let start = random_free(&dom, 6, &mut RngSeed::new(seed, 0).rng()).unwrap();
        let r = anneal(&start, id, &ev, &SaConfig::with_budget(1_000), &mut RngSeed::new(seed, 1).rng()).unwrap();
        prop_assert!(r.history.windows(2).all(|w| w[1].best_value <= w[0].best_value));
        prop_assert!(r.history.iter().all(|h| r.best_value <= h.best_value));
        prop_assert!(!r.best.has_duplicates());
    }

    #[test]
    fn lh_annealing_preserves_latin_property(seed in any::<u64>()) {
        let dom = DomainSpec::uniform(3, 7).unwrap();
        let ev = Evaluator::<f64>::new(dom.clone());
        let start = random_lh(&dom, &mut RngSeed::new(seed, 0).rng()).unwrap();
        let r = anneal(&start, CriterionId::Ml2, &ev, &SaConfig::with_budget(500), &mut RngSeed::new(seed, 1).rng()).unwrap();
        prop_assert!(r.best.is_latin_hypercube(&dom));
    }

    #[test]
    fn sequential_keeps_seed_and_occupancy(seed in any::<u64>(), iters in 0usize..4, lh in any::<bool>()) {
        let dom = DomainSpec::uniform(2, 8).unwrap();
        let ev = Evaluator::<f64>::new(dom.clone());
        let mut rng = RngSeed::new(seed, 0).rng();
        let s = if lh { random_lh(&dom, &mut rng).unwrap() } else { random_free(&dom, 8, &mut rng).unwrap() };
        let strategy = if lh { ExtensionStrategy::LhPreserving } else { ExtensionStrategy::Free };
        let plan = ExtensionPlan { batch_size: 8, iterations: iters, strategy };
        let ext = extend(&s, &ev, &plan, CriterionId::Ae, &SaConfig::with_budget(300), &mut rng).unwrap();
        prop_assert_eq!(&ext.design.flat()[..16], s.flat());
        prop_assert_eq!(ext.design.n(), 8 * (iters + 1));
        prop_assert!(!ext.design.has_duplicates());
        if lh {
            prop_assert!(ext.design.is_latin_hypercube(&dom));
            prop_assert_eq!(redundant_count(&project(&ext.design, &[0]).unwrap()), 8 * iters);
        }
    }

    #[test]
    fn srcc_invariant_under_increasing_transforms(
        xs in prop::collection::vec(prop::collection::vec(-50i32..50, 2), 3..30),
        zs in prop::collection::vec(-50i32..50, 30),
    ) {
        let n = xs.len();
        let data: Vec<f64> = xs.iter().flatten().map(|&v| v as f64).collect();
        let z: Vec<f64> = zs[..n].iter().map(|&v| v as f64).collect();
        let x = RealMatrix { rows: n, cols: 2, data: data.clone() };
        let fx = RealMatrix { rows: n, cols: 2, data: data.iter().map(|v| (v / 10.0).exp() * 2.0 + 1.0).collect() };
        let fz: Vec<f64> = z.iter().map(|v| v.powi(3) - 7.0).collect();
        let a = param_response_srcc(&x, &z).unwrap();
        let b = param_response_srcc(&fx, &fz).unwrap();
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p - q).abs() < 1e-12);
            prop_assert!((-1.0..=1.0).contains(p));
        }
    }

    #[test]
    fn correlation_error_triangle(a in prop::collection::vec(-1.0f64..1.0, 4), b in prop::collection::vec(-1.0f64..1.0, 4), c in prop::collection::vec(-1.0f64..1.0, 4)) {
        let ac = correlation_error(&a, &c).unwrap();
        let ab = correlation_error(&a, &b).unwrap();
        let bc = correlation_error(&b, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-15);
        prop_assert!((0.0..=2.0).contains(&ac));
    }
}

#[test]
fn separable_model_has_zero_second_correlation() {
    use optdoe::models::{analytical_suite, Model, ModelError};
    struct OnlyX1;
    impl Model<f64> for OnlyX1 {
        fn id(&self) -> String {
            "x1".into()
        }
        fn input_count(&self) -> usize {
            2
        }
        fn response_names(&self) -> Vec<String> {
            vec!["z".into()]
        }
        fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>, ModelError> {
            Ok(vec![(3.0 * x[0]).exp()])
        }
    }
    let dom = DomainSpec::uniform(2, 10).unwrap();
    let r = optdoe::sensitivity::full_design_reference(&dom, &OnlyX1, 1 << 20).unwrap();
    assert_eq!(r[0][1], 0.0);
    assert_eq!(analytical_suite::<f64>().len(), 15);
}

#[test]
fn sequential_free_beats_random_batch() {
    let dom = DomainSpec::uniform(2, 10).unwrap();
    let ev = Evaluator::<f64>::new(dom.clone());
    let plan = ExtensionPlan { batch_size: 10, iterations: 1, strategy: ExtensionStrategy::Free };
    for t in 0..20u64 {
        let mut rng = RngSeed::new(t, 0).rng();
        let seed = random_free(&dom, 10, &mut rng).unwrap();
        let mut probe = RngSeed::new(t, 9).rng();
        // random batch of unoccupied cells, as a baseline
        let mut baseline = seed.clone();
        while baseline.n() < 20 {
            let cand = random_free(&dom, 1, &mut probe).unwrap();
            if !baseline.contains_row(cand.row(0)) {
                baseline.push_row(cand.row(0));
            }
        }
        let ext = extend(&seed, &ev, &plan, CriterionId::Ml2, &SaConfig::with_budget(3_000), &mut rng).unwrap();
        let opt = ev.evaluate(CriterionId::Ml2, &ext.design).unwrap();
        assert!(opt <= ev.evaluate(CriterionId::Ml2, &baseline).unwrap());
    }
}
