//! Lowest eigenpairs of a real symmetric tridiagonal matrix.
//!
//! The 1D finite-difference Hamiltonians in this crate are tridiagonal with
//! 10³–10⁴ rows, and only a handful of low-lying states are needed; a dense
//! O(n³) solve is the wrong tool. This module uses Sturm-sequence bisection
//! for the eigenvalues and inverse iteration (LU with partial pivoting on
//! the shifted tridiagonal) for the eigenvectors, with re-orthogonalization
//! inside eigenvalue clusters.

/// Symmetric tridiagonal matrix: `diag` has n entries, `off` has n − 1.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be n-1");
        SymTridiag { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE / f64::EPSILON;
        let mut count = 0usize;
        let mut d = self.diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.n() {
            let mut denom = d;
            if denom.abs() < tiny {
                denom = if denom < 0.0 { -tiny } else { tiny };
            }
            d = (self.diag[i] - x) - self.off[i - 1] * self.off[i - 1] / denom;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The k lowest eigenvalues, ascending, by bisection to near machine
    /// precision.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        assert!(k <= self.n(), "requested more eigenvalues than the dimension");
        let (glo, ghi) = self.gershgorin_bounds();
        let span = (ghi - glo).max(1.0);
        let mut out = Vec::with_capacity(k);
        for idx in 0..k {
            // bracket the (idx+1)-th smallest eigenvalue
            let mut lo = glo;
            let mut hi = ghi;
            // bisect until the interval is tight
            for _ in 0..128 {
                let mid = 0.5 * (lo + hi);
                if self.count_below(mid) <= idx {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 * span + f64::EPSILON * mid.abs() {
                    break;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }

    /// Eigenvector for eigenvalue `lambda` via two rounds of inverse
    /// iteration, optionally orthogonalized against `against`.
    fn eigenvector_at(&self, lambda: f64, against: &[Vec<f64>]) -> Vec<f64> {
        let n = self.n();
        // deterministic pseudo-random start vector (fixed xorshift seed)
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        normalize(&mut v);
        let lu = TridiagLu::factor(self, lambda);
        for _ in 0..3 {
            let mut w = lu.solve(&v);
            for o in against {
                let dot: f64 = w.iter().zip(o).map(|(a, b)| a * b).sum();
                for (wi, oi) in w.iter_mut().zip(o) {
                    *wi -= dot * oi;
                }
            }
            normalize(&mut w);
            v = w;
        }
        v
    }

    /// The k lowest eigenpairs. Vectors are orthonormal in the Euclidean
    /// sense; eigenvalues ascending.
    pub fn lowest_eigenpairs(&self, k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let vals = self.lowest_eigenvalues(k);
        let scale = vals
            .iter()
            .map(|v| v.abs())
            .fold(1.0f64, f64::max);
        let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut cluster_start = 0usize;
        for i in 0..k {
            if i > 0 && (vals[i] - vals[i - 1]).abs() > 1e-8 * scale {
                cluster_start = i;
            }
            let against = &vecs[cluster_start..];
            let v = self.eigenvector_at(vals[i], against);
            vecs.push(v);
        }
        (vals, vecs)
    }

    /// Residual ‖T v − λ v‖∞ (diagnostic).
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut r = (self.diag[i] - lambda) * v[i];
            if i > 0 {
                r += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                r += self.off[i] * v[i + 1];
            }
            worst = worst.max(r.abs());
        }
        worst
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// LU factorization of (T − λI) with partial pivoting. Row swaps introduce a
/// second superdiagonal, so U carries three bands.
struct TridiagLu {
    n: usize,
    lower: Vec<f64>,
    swapped: Vec<bool>,
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
}

impl TridiagLu {
    fn factor(t: &SymTridiag, shift: f64) -> Self {
        let n = t.n();
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut lower = vec![0.0; n];
        let mut swapped = vec![false; n];
        u0[0] = t.diag[0] - shift;
        if n > 1 {
            u1[0] = t.off[0];
        }
        for i in 0..n - 1 {
            // row i+1 is still in its original form at this step
            let next0 = t.off[i];
            let next1 = t.diag[i + 1] - shift;
            let next2 = if i + 2 < n { t.off[i + 1] } else { 0.0 };
            let (p0, p1, p2, q0, q1, q2);
            if next0.abs() > u0[i].abs() {
                swapped[i] = true;
                (p0, p1, p2) = (next0, next1, next2);
                (q0, q1, q2) = (u0[i], u1[i], u2[i]);
            } else {
                (p0, p1, p2) = (u0[i], u1[i], u2[i]);
                (q0, q1, q2) = (next0, next1, next2);
            }
            // singular pivot: nudge, inverse iteration thrives anyway
            let pivot = if p0 != 0.0 { p0 } else { f64::EPSILON };
            let m = q0 / pivot;
            lower[i] = m;
            u0[i] = p0;
            u1[i] = p1;
            u2[i] = p2;
            u0[i + 1] = q1 - m * p1;
            u1[i + 1] = q2 - m * p2;
            u2[i + 1] = 0.0;
        }
        TridiagLu {
            n,
            lower,
            swapped,
            u0,
            u1,
            u2,
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n - 1 {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            let m = self.lower[i];
            y[i + 1] -= m * y[i];
        }
        // back substitution with three bands
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            if i + 1 < n {
                acc -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= self.u2[i] * x[i + 2];
            }
            let pivot = if self.u0[i] != 0.0 { self.u0[i] } else { f64::EPSILON };
            x[i] = acc / pivot;
        }
        x
    }
}
