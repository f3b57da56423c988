//! Symmetric tridiagonal eigenproblems: Sturm-count bisection for single
//! eigenvalues and inverse iteration for their eigenvectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const START_SEED: u64 = 0x5eed_7d1a;

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal shape mismatch: {} diagonal and {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite matrix entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let m = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..m {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < m { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE / f64::EPSILON;
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.size() {
            let coupling = if i > 0 { self.off[i - 1] * self.off[i - 1] / q } else { 0.0 };
            q = self.diag[i] - x - coupling;
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (`k = 0` is the lowest), bisected until
    /// the bracket is below `1e-12 |lambda|` or the `eps ||T||` floor.
    pub fn kth_eigenvalue(&self, k: usize) -> Result<f64> {
        let m = self.size();
        if k >= m {
            return Err(Error::IndexOutOfRange { k, size: m });
        }
        let (lo, hi) = self.gershgorin();
        let floor = 2.0 * f64::EPSILON * self.norm_bound();
        Ok(self.bisect_eigenvalue(k, lo - floor, hi + floor, floor))
    }

    /// As [`kth_eigenvalue`](Self::kth_eigenvalue), starting from a bracket
    /// grown around `guess`.
    pub fn kth_eigenvalue_near(&self, k: usize, guess: f64) -> Result<f64> {
        let m = self.size();
        if k >= m {
            return Err(Error::IndexOutOfRange { k, size: m });
        }
        let (g_lo, g_hi) = self.gershgorin();
        let floor = 2.0 * f64::EPSILON * self.norm_bound();
        let (g_lo, g_hi) = (g_lo - floor, g_hi + floor);
        let guess = guess.clamp(g_lo, g_hi);
        let mut width = (1e-3 * guess.abs()).max(floor);
        let (mut lo, mut hi) = (guess - width, guess + width);
        while self.sturm_count(lo) > k && lo > g_lo {
            width *= 4.0;
            lo = (guess - width).max(g_lo);
        }
        width = (1e-3 * guess.abs()).max(floor);
        while self.sturm_count(hi) <= k && hi < g_hi {
            width *= 4.0;
            hi = (guess + width).min(g_hi);
        }
        Ok(self.bisect_eigenvalue(k, lo, hi, floor))
    }

    fn bisect_eigenvalue(&self, k: usize, mut lo: f64, mut hi: f64, floor: f64) -> f64 {
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= (1e-12 * mid.abs()).max(floor) || mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let m = self.size();
        (0..m)
            .map(|i| {
                let mut y = self.diag[i] * v[i];
                if i > 0 {
                    y += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < m {
                    y += self.off[i] * v[i + 1];
                }
                y
            })
            .collect()
    }

    // Thomas algorithm for (T - shift) x = rhs; vanishing pivots are nudged.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let m = self.size();
        let tiny = f64::EPSILON * self.norm_bound().max(f64::MIN_POSITIVE);
        let mut pivots = vec![0.0; m];
        let mut y = vec![0.0; m];
        for i in 0..m {
            let (mut p, mut r) = (self.diag[i] - shift, rhs[i]);
            if i > 0 {
                let factor = self.off[i - 1] / pivots[i - 1];
                p -= factor * self.off[i - 1];
                r -= factor * y[i - 1];
            }
            if p.abs() < tiny {
                p = if p < 0.0 { -tiny } else { tiny };
            }
            pivots[i] = p;
            y[i] = r;
        }
        let mut x = vec![0.0; m];
        for i in (0..m).rev() {
            let upper = if i + 1 < m { self.off[i] * x[i + 1] } else { 0.0 };
            x[i] = (y[i] - upper) / pivots[i];
        }
        x
    }

    /// Unit-norm eigenvector for an eigenvalue estimate by inverse iteration
    /// from a fixed pseudo-random start.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let m = self.size();
        let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
        let mut v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut v);
        let mut last = f64::INFINITY;
        for _ in 0..20 {
            let mut w = self.shifted_solve(lambda, &v);
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::Numerical("inverse iteration overflowed".into()));
            }
            normalize(&mut w);
            v = w;
            last = self.residual(&v);
            if last <= 1e-8 {
                return Ok(v);
            }
        }
        Err(Error::Numerical(format!(
            "inverse iteration did not converge: residual {last:e} after 20 steps"
        )))
    }

    /// `||T v - rho v|| / ||v||` with `rho` the Rayleigh quotient.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let tv = self.apply(v);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let rho = v.iter().zip(&tv).map(|(a, b)| a * b).sum::<f64>() / vv;
        let r2: f64 = tv.iter().zip(v).map(|(t, x)| (t - rho * x).powi(2)).sum();
        (r2 / vv).sqrt()
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}
