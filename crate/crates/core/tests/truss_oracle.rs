use nalgebra::{DMatrix, DVector};
use optdoe::models::truss::TrussModel;
use optdoe::models::{ten_bar, twenty_five_bar, Model};
use proptest::prelude::*;

/// Independent full-matrix assembly: element stiffness from the outer product
/// of the direction vector, scattered into the global matrix, then reduced.
fn oracle(model: &TrussModel<f64>, areas: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dim = model.dim;
    let ndof = model.nodes.len() * dim;
    let mut k = DMatrix::<f64>::zeros(ndof, ndof);
    for (e, &[i, j]) in model.elements.iter().enumerate() {
        let a = areas[model.groups[e]];
        let d: Vec<f64> = (0..dim).map(|c| model.nodes[j][c] - model.nodes[i][c]).collect();
        let len = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dir = DVector::from_iterator(dim, d.iter().map(|v| v / len));
        let block = &dir * dir.transpose() * (model.youngs_modulus * a / len);
        for (p, q, s) in [(i, i, 1.0), (j, j, 1.0), (i, j, -1.0), (j, i, -1.0)] {
            let mut view = k.view_mut((p * dim, q * dim), (dim, dim));
            view += &block * s;
        }
    }
    let mut fixed = vec![false; ndof];
    for s in &model.supports {
        for c in 0..dim {
            fixed[s.node * dim + c] |= s.fixed[c];
        }
    }
    let free: Vec<usize> = (0..ndof).filter(|&g| !fixed[g]).collect();
    let mut f = DVector::<f64>::zeros(ndof);
    for l in &model.loads {
        for c in 0..dim {
            f[l.node * dim + c] += l.force[c];
        }
    }
    let kr = DMatrix::from_fn(free.len(), free.len(), |r, c| k[(free[r], free[c])]);
    let fr = DVector::from_iterator(free.len(), free.iter().map(|&g| f[g]));
    let ur = kr.lu().solve(&fr).unwrap();
    let mut u = vec![0.0; ndof];
    for (r, &g) in free.iter().enumerate() {
        u[g] = ur[r];
    }
    let stress = model
        .elements
        .iter()
        .map(|&[i, j]| {
            let pi: Vec<f64> = (0..dim).map(|c| model.nodes[i][c]).collect();
            let pj: Vec<f64> = (0..dim).map(|c| model.nodes[j][c]).collect();
            let len = pi.iter().zip(&pj).map(|(a, b)| (b - a).powi(2)).sum::<f64>().sqrt();
            // projected elongation: (Δu · Δx) / L
            let dot: f64 = (0..dim).map(|c| (u[j * dim + c] - u[i * dim + c]) * (pj[c] - pi[c])).sum();
            model.youngs_modulus * dot / (len * len)
        })
        .collect();
    (u, stress)
}

fn check(model: &TrussModel<f64>, idx: &[usize]) -> Result<(), TestCaseError> {
    let areas: Vec<f64> = idx.iter().zip(&model.levels).map(|(&i, l)| l[i % l.len()]).collect();
    let sys = model.assemble_stiffness(&areas).unwrap();
    let u_full = model.displacements(&areas).unwrap();
    let n = sys.free.len();
    let u: Vec<f64> = sys.free.iter().map(|&g| u_full[g]).collect();
    let fnorm = sys.f.iter().map(|v| v * v).sum::<f64>().sqrt();
    let res: f64 = (0..n)
        .map(|r| {
            let ku: f64 = (0..n).map(|c| sys.k[r * n + c] * u[c]).sum();
            (ku - sys.f[r]).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    prop_assert!(res / fnorm < 1e-8, "residual {}", res / fnorm);

    let (u_ref, s_ref) = oracle(model, &areas);
    let umax = u_ref.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (a, b) in u_full.iter().zip(&u_ref) {
        prop_assert!((a - b).abs() <= 1e-8 * umax);
    }
    let stresses = model.element_stresses(&u_full);
    let smax = s_ref.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (a, b) in stresses.iter().zip(&s_ref) {
        prop_assert!((a - b).abs() <= 1e-8 * smax);
    }
    let resp = model.solve(&areas).unwrap();
    prop_assert!((resp.d - umax).abs() <= 1e-8 * umax);
    prop_assert!((resp.s - smax).abs() <= 1e-8 * smax);
    prop_assert!(resp.w > 0.0);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn ten_bar_equilibrium_and_stress(idx in prop::collection::vec(0usize..42, 10)) {
        check(&ten_bar(), &idx)?;
    }

    #[test]
    fn twenty_five_bar_equilibrium_and_stress(idx in prop::collection::vec(0usize..30, 8)) {
        check(&twenty_five_bar(), &idx)?;
    }

    #[test]
    fn weight_increases_with_any_group(idx in prop::collection::vec(0usize..29, 8), g in 0usize..8) {
        let t = twenty_five_bar::<f64>();
        let areas: Vec<f64> = idx.iter().map(|&i| t.levels[0][i]).collect();
        let mut bigger = areas.clone();
        bigger[g] = t.levels[0][idx[g] + 1];
        prop_assert!(t.weight(&bigger).unwrap() > t.weight(&areas).unwrap());
    }
}

#[test]
fn model_trait_reports_three_responses() {
    let t = ten_bar::<f64>();
    let out = t.evaluate(&[5.0; 10]).unwrap();
    assert_eq!(out.len(), 3);
    assert_eq!(t.response_names(), vec!["w", "d", "s"]);
    let dom = t.domain().unwrap();
    assert_eq!(dom.levels(), &[42; 10]);
    assert_eq!(dom.physical(0, 41), 33.5);
}

#[test]
fn f32_solver_agrees_with_f64() {
    let a = ten_bar::<f64>().solve(&[3.0; 10]).unwrap();
    let b = ten_bar::<f32>().solve(&[3.0; 10]).unwrap();
    assert!(((b.d as f64) - a.d).abs() <= 1e-3 * a.d);
    assert!(((b.s as f64) - a.s).abs() <= 1e-3 * a.s);
}
