//! Symmetric tridiagonal eigenproblems.
//!
//! Only the lowest few eigenpairs of large finite-difference Hamiltonians are
//! needed, so eigenvalues come from Sturm-sequence bisection and eigenvectors
//! from inverse iteration with a pivoted tridiagonal LU.

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::EPSILON * self.scale();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off[i - 1];
                q = (self.diag[i] - x) - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `k`-th smallest eigenvalue (0-based), bisected to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len());
        let (mut lo, mut hi) = self.bounds();
        let pad = f64::EPSILON * self.scale() * 4.0;
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T - shift I) y = rhs` in place by LU with partial pivoting.
    fn solve_shifted(&self, shift: f64, rhs: &mut [f64]) {
        let n = self.len();
        if n == 1 {
            let d = self.diag[0] - shift;
            rhs[0] /= if d == 0.0 { f64::EPSILON * self.scale() } else { d };
            return;
        }
        let tiny = f64::EPSILON * self.scale();
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut dl = self.off.clone();
        let mut du = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];

        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }

        for i in 0..n - 1 {
            if swapped[i] {
                rhs.swap(i, i + 1);
            }
            rhs[i + 1] -= dl[i] * rhs[i];
        }
        rhs[n - 1] /= d[n - 1];
        rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
        }
    }

    /// Unit eigenvector for an (accurate) eigenvalue `lambda`.
    ///
    /// `previous` holds already computed eigenvectors; the result is kept
    /// orthogonal to those whose eigenvalue lies within `cluster_tol`.
    pub fn eigenvector(&self, lambda: f64, previous: &[(f64, Vec<f64>)], cluster_tol: f64) -> Vec<f64> {
        let n = self.len();
        // deterministic start with no special symmetry
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.731).sin()).collect();
        normalize(&mut v);
        for _ in 0..4 {
            self.solve_shifted(lambda, &mut v);
            for (mu, u) in previous {
                if (mu - lambda).abs() < cluster_tol {
                    let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(u).for_each(|(x, y)| *x -= dot * y);
                }
            }
            normalize(&mut v);
        }
        v
    }

    /// The `count` lowest eigenpairs, eigenvalues ascending, vectors of unit
    /// Euclidean norm.
    pub fn lowest(&self, count: usize) -> Vec<(f64, Vec<f64>)> {
        let cluster_tol = 1e-10 * self.scale();
        let mut out: Vec<(f64, Vec<f64>)> = Vec::with_capacity(count);
        for k in 0..count.min(self.len()) {
            let lambda = self.eigenvalue(k);
            let v = self.eigenvector(lambda, &out, cluster_tol);
            out.push((lambda, v));
        }
        out
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}
