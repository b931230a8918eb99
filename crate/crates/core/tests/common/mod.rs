// Independent oracles shared by the integration tests.
#![allow(dead_code)]

/// Central difference of `f` at `x` along every coordinate.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let hi = f(&probe);
            probe[i] = x[i] - h;
            let lo = f(&probe);
            probe[i] = x[i];
            (hi - lo) / (2.0 * h)
        })
        .collect()
}

pub type Matrix = Vec<Vec<f64>>;

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

/// The rank-two inverse-Hessian update written as literal matrix products:
/// `(I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`.
pub fn naive_bfgs_update(h: &Matrix, s: &[f64], y: &[f64]) -> Matrix {
    let n = s.len();
    let rho = 1.0 / s.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let left: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| f64::from(u8::from(i == j)) - rho * s[i] * y[j])
                .collect()
        })
        .collect();
    let right: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| f64::from(u8::from(i == j)) - rho * y[i] * s[j])
                .collect()
        })
        .collect();
    let mut out = matmul(&matmul(&left, h), &right);
    for i in 0..n {
        for j in 0..n {
            out[i][j] += rho * s[i] * s[j];
        }
    }
    out
}

/// Cholesky factorization succeeds iff the matrix is positive definite.
pub fn is_positive_definite(a: &Matrix) -> bool {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let sum = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if sum <= 0.0 {
                    return false;
                }
                l[i][i] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    true
}

/// Small deterministic generator for test inputs (SplitMix64).
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
    }

    pub fn vector(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }

    /// Random symmetric positive definite matrix `A·Aᵀ + n·I`.
    pub fn spd(&mut self, n: usize) -> Matrix {
        let a: Matrix = (0..n).map(|_| self.vector(n, -1.0, 1.0)).collect();
        let mut m: Matrix = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * a[j][k]).sum()).collect())
            .collect();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += n as f64 * 0.1 + 0.1;
        }
        m
    }
}
