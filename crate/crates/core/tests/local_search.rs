mod common;

use common::{is_positive_definite, naive_bfgs_update, Matrix, TestRng};
use proptest::prelude::*;
use zeus_core::bfgs::{bfgs_run, BfgsParams, BfgsStatus, InverseHessian, NeverStop};
use zeus_core::linesearch::{armijo_search, LineSearchParams};
use zeus_core::{Benchmark, Objective, Scalar};

fn to_rows(h: &InverseHessian) -> Matrix {
    let n = h.dim();
    (0..n).map(|i| (0..n).map(|j| h.get(i, j)).collect()).collect()
}

fn from_rows(m: &Matrix) -> InverseHessian {
    InverseHessian::from_row_major(m.len(), m.iter().flatten().copied().collect())
}

/// `½ xᵀAx` for a fixed SPD matrix.
struct Quadratic(Matrix);

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut acc = S::constant(0.0);
        for (i, row) in self.0.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                acc = acc + x[i] * x[j] * (0.5 * a);
            }
        }
        acc
    }
}

#[test]
fn convex_quadratics_converge() {
    let mut rng = TestRng::new(17);
    for dim in 1..=5 {
        for _ in 0..20 {
            let f = Quadratic(rng.spd(dim));
            let x0 = rng.vector(dim, -3.0, 3.0);
            let out = bfgs_run(&f, &x0, &BfgsParams::default(), &NeverStop);
            assert_eq!(out.status, BfgsStatus::Converged);
            assert!(out.grad_norm < 1e-6);
            if dim == 1 {
                // One secant update recovers the exact curvature.
                assert!(out.iterations <= 3, "{}", out.iterations);
            }
        }
    }
}

/// Textbook BFGS with a strong-Wolfe-free exact quadratic model: finite
/// difference gradients, literal matrix-product update, plain halving.
fn textbook_bfgs(f: impl Fn(&[f64]) -> f64, x0: &[f64]) -> Vec<f64> {
    let n = x0.len();
    let grad = |x: &[f64]| common::central_difference(&f, x, 1e-7);
    let mut x = x0.to_vec();
    let mut h: Matrix = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    let mut g = grad(&x);
    for _ in 0..20_000 {
        if g.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-7 {
            break;
        }
        let p: Vec<f64> = (0..n).map(|i| -(0..n).map(|j| h[i][j] * g[j]).sum::<f64>()).collect();
        let slope: f64 = g.iter().zip(&p).map(|(a, b)| a * b).sum();
        let fx = f(&x);
        let mut t = 1.0;
        let mut xn: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + t * b).collect();
        while f(&xn) > fx + 1e-4 * t * slope && t > 1e-12 {
            t *= 0.5;
            xn = x.iter().zip(&p).map(|(a, b)| a + t * b).collect();
        }
        let gn = grad(&xn);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        if s.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() > 1e-14 {
            h = naive_bfgs_update(&h, &s, &y);
        }
        x = xn;
        g = gn;
    }
    x
}

#[test]
fn rosenbrock_agrees_with_textbook_oracle() {
    let f = Benchmark::Rosenbrock { dim: 2 };
    let oracle = textbook_bfgs(|x| f.value(x), &[-1.2, 1.0]);
    assert!(
        (oracle[0] - 1.0).abs() < 1e-4 && (oracle[1] - 1.0).abs() < 1e-4,
        "{oracle:?}"
    );
    let params = BfgsParams {
        theta: 1e-6,
        max_iter: 10_000,
        ..Default::default()
    };
    let out = bfgs_run(&f, &[-1.2, 1.0], &params, &NeverStop);
    assert_eq!(out.status, BfgsStatus::Converged);
    let dist = ((out.x_final[0] - oracle[0]).powi(2) + (out.x_final[1] - oracle[1]).powi(2)).sqrt();
    assert!(dist < 1e-4, "{:?} vs {oracle:?}", out.x_final);
}

/// Local minimizer of `x² − 10 cos(2πx)` next to the integer `k`, by Newton.
fn rastrigin_coordinate_minimum(k: f64) -> f64 {
    use std::f64::consts::PI;
    let mut x = k;
    for _ in 0..50 {
        let d1 = 2.0 * x + 20.0 * PI * (2.0 * PI * x).sin();
        let d2 = 2.0 + 40.0 * PI * PI * (2.0 * PI * x).cos();
        assert!(d2 > 0.0);
        x -= d1 / d2;
    }
    x
}

#[test]
fn rastrigin_has_121_separate_basins_in_2d() {
    let f = Benchmark::Rastrigin { dim: 2 };
    let minima: Vec<f64> = (-5..=5).map(|k| rastrigin_coordinate_minimum(k as f64)).collect();
    assert!(minima.iter().all(|m| m.abs() <= 5.12));
    let mut rng = TestRng::new(121);
    let mut finals = Vec::new();
    for &a in &minima {
        for &b in &minima {
            let grad = zeus_core::forward_gradient(&f, &[a, b]).unwrap();
            assert!(grad.iter().all(|g| g.abs() < 1e-9), "{grad:?}");
            let sign = |r: &mut TestRng| if r.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
            let start = [a + 1e-3 * sign(&mut rng), b + 1e-3 * sign(&mut rng)];
            let out = bfgs_run(&f, &start, &BfgsParams::default(), &NeverStop);
            assert_eq!(out.status, BfgsStatus::Converged, "{start:?}");
            assert!((out.x_final[0] - a).abs() < 1e-6 && (out.x_final[1] - b).abs() < 1e-6);
            finals.push(out.x_final);
        }
    }
    assert_eq!(finals.len(), 121);
    for i in 0..finals.len() {
        for j in i + 1..finals.len() {
            let d = (finals[i][0] - finals[j][0]).hypot(finals[i][1] - finals[j][1]);
            assert!(d > 0.5);
        }
    }
}

fn spd_strategy() -> impl Strategy<Value = (Matrix, Vec<f64>, Vec<f64>)> {
    (2usize..=5, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = TestRng::new(seed);
        let h = rng.spd(n);
        let s = rng.vector(n, -2.0, 2.0);
        let y = rng.vector(n, -2.0, 2.0);
        (h, s, y)
    })
}

proptest! {
    #[test]
    fn hessian_update_matches_literal_products((h, s, y) in spd_strategy()) {
        let curvature: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let norms = s.iter().map(|v| v * v).sum::<f64>().sqrt() * y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut updated = from_rows(&h);
        let applied = updated.update(&s, &y);
        if curvature > 1e-12 * norms {
            prop_assert!(applied);
            let expected = naive_bfgs_update(&h, &s, &y);
            let got = to_rows(&updated);
            let scale = expected.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
            for i in 0..h.len() {
                for j in 0..h.len() {
                    prop_assert!((got[i][j] - expected[i][j]).abs() <= 1e-9 * scale);
                    prop_assert_eq!(got[i][j].to_bits(), got[j][i].to_bits());
                }
            }
            prop_assert!(is_positive_definite(&got));
        } else {
            prop_assert!(!applied);
            prop_assert_eq!(updated, from_rows(&h));
        }
    }

    #[test]
    fn armijo_step_is_a_power_of_shrink(x in -10.0f64..10.0, p in -10.0f64..10.0, max_iter in 0usize..30) {
        let f = |v: &[f64]| v[0].powi(4) - 3.0 * v[0] * v[0] + v[0];
        let g = 4.0 * x.powi(3) - 6.0 * x + 1.0;
        let params = LineSearchParams { max_iter, ..Default::default() };
        let mut scratch = [0.0];
        let mut evals = 0;
        let out = armijo_search(|v| { evals += 1; f(v) }, &[x], &[p], &[g], f(&[x]), &params, &mut scratch);
        let k = (0..=max_iter).find(|&k| out.alpha == 0.5f64.powi(k as i32));
        prop_assert!(k.is_some());
        prop_assert!(evals <= max_iter + 1);
        prop_assert_eq!(evals, out.evaluations);
        if out.accepted {
            prop_assert!(f(&[x + out.alpha * p]) <= f(&[x]) + 0.3 * out.alpha * g * p);
        } else {
            // Exhaustive: no trial step satisfied the inequality.
            for k in 0..=max_iter {
                let a = 0.5f64.powi(k as i32);
                prop_assert!(f(&[x + a * p]) > f(&[x]) + 0.3 * a * g * p);
            }
        }
    }
}
