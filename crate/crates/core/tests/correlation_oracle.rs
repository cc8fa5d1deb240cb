use optdoe::correlation::{kendall_tau_a, pearson, spearman};
use optdoe::design::ranks;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;

fn pearson_ref(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

fn midranks_ref(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let below = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn spearman_ref(x: &[f64], y: &[f64]) -> f64 {
    pearson_ref(&midranks_ref(x), &midranks_ref(y))
}

fn kendall_ref(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let a = (x[i] - x[j]).signum() * if x[i] == x[j] { 0.0 } else { 1.0 };
            let b = (y[i] - y[j]).signum() * if y[i] == y[j] { 0.0 } else { 1.0 };
            s += a * b;
        }
    }
    s / (n * (n - 1) / 2) as f64
}

fn draw(rng: &mut impl Rng, ties: bool) -> Vec<f64> {
    (0..20).map(|_| if ties { rng.gen_range(0..6) as f64 } else { rng.gen::<f64>() }).collect()
}

#[test]
fn random_pairs_match_quadratic_references() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let ties = case % 2 == 1;
        let (x, y) = (draw(&mut rng, ties), draw(&mut rng, ties));
        let tol = 1e-12;
        assert!((pearson(&x, &y).unwrap() - pearson_ref(&x, &y)).abs() < tol);
        assert!((spearman(&x, &y).unwrap() - spearman_ref(&x, &y)).abs() < tol);
        assert!((kendall_tau_a(&x, &y).unwrap() - kendall_ref(&x, &y)).abs() < tol);
    }
}

#[test]
fn midranks_match_reference() {
    let v = [3.0, 1.0, 3.0, 2.0, 3.0, 0.5];
    assert_eq!(ranks(&v), midranks_ref(&v));
}

#[test]
fn exact_hand_values() {
    assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0]), Some(-0.5));
    assert_eq!(kendall_tau_a(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]), Some(1.0 / 3.0));
}

proptest! {
    #[test]
    fn rank_coefficients_invariant_under_increasing_maps(
        x in prop::collection::vec(-100i32..100, 3..40),
        y in prop::collection::vec(-100i32..100, 40),
    ) {
        let x: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let y: Vec<f64> = y[..x.len()].iter().map(|&v| v as f64).collect();
        let fx: Vec<f64> = x.iter().map(|v| (v / 50.0).exp()).collect();
        let fy: Vec<f64> = y.iter().map(|v| v * v * v + 3.0).collect();
        if let (Some(a), Some(b)) = (spearman(&x, &y), spearman(&fx, &fy)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let (a, b) = (kendall_tau_a(&x, &y).unwrap(), kendall_tau_a(&fx, &fy).unwrap());
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&a));
    }

    #[test]
    fn kendall_matches_reference(x in prop::collection::vec(0u8..5, 2..60), y in prop::collection::vec(0u8..5, 60)) {
        let x: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let y: Vec<f64> = y[..x.len()].iter().map(|&v| v as f64).collect();
        prop_assert!((kendall_tau_a(&x, &y).unwrap() - kendall_ref(&x, &y)).abs() < 1e-12);
    }
}
