//! Dense helpers plus a real symmetric tridiagonal eigensolver.
//!
//! Every collective Hamiltonian in this crate is tridiagonal in its natural
//! basis once a diagonal phase gauge is removed, so the tridiagonal path
//! carries most of the load. General Hermitian matrices go through nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[inline]
pub fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

/// Largest absolute element, used as a matrix scale for tolerances.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Real symmetric tridiagonal matrix: `diag[i]` and `off[i]` coupling i and i+1.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length must be dim-1");
        SymTridiag { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = self.diag[i] * x[i];
            if i > 0 {
                y[i] += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y[i] += self.off[i] * x[i + 1];
            }
        }
        y
    }

    /// Infinity norm bound (max absolute row sum).
    pub fn norm_bound(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(self.diag[i]);
            if i + 1 < n {
                m[(i, i + 1)] = c(self.off[i]);
                m[(i + 1, i)] = c(self.off[i]);
            }
        }
        m
    }

    /// Full eigendecomposition by implicit QL with Wilkinson-style shifts.
    /// Eigenvalues ascending; eigenvectors are the columns of the returned matrix.
    pub fn eigh(&self) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let n = self.dim();
        let mut d = self.diag.clone();
        let mut e = vec![0.0; n];
        e[..n.saturating_sub(1)].copy_from_slice(&self.off);
        let mut v = DMatrix::<f64>::identity(n, n);
        if n <= 1 {
            return Ok((d, v));
        }

        let eps = f64::EPSILON;
        let mut f = 0.0;
        let mut tst1: f64 = 0.0;
        for l in 0..n {
            tst1 = tst1.max(d[l].abs() + e[l].abs());
            let mut m = l;
            while m < n {
                if e[m].abs() <= eps * tst1 {
                    break;
                }
                m += 1;
            }
            if m > l {
                let mut iter = 0;
                loop {
                    iter += 1;
                    if iter > 100 {
                        return Err(Error::Numerical("tridiagonal QL did not converge".into()));
                    }
                    let g = d[l];
                    let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                    let mut r = p.hypot(1.0);
                    if p < 0.0 {
                        r = -r;
                    }
                    d[l] = e[l] / (p + r);
                    d[l + 1] = e[l] * (p + r);
                    let dl1 = d[l + 1];
                    let mut h = g - d[l];
                    for di in d.iter_mut().skip(l + 2) {
                        *di -= h;
                    }
                    f += h;

                    p = d[m];
                    let mut cc = 1.0;
                    let mut c2 = cc;
                    let mut c3 = cc;
                    let el1 = e[l + 1];
                    let mut s = 0.0;
                    let mut s2 = 0.0;
                    for i in (l..m).rev() {
                        c3 = c2;
                        c2 = cc;
                        s2 = s;
                        let g = cc * e[i];
                        h = cc * p;
                        r = p.hypot(e[i]);
                        e[i + 1] = s * r;
                        s = e[i] / r;
                        cc = p / r;
                        p = cc * d[i] - s * g;
                        d[i + 1] = h + s * (cc * g + s * d[i]);
                        let (mut ci, mut ci1) = v.columns_range_pair_mut(i, i + 1);
                        for k in 0..n {
                            let hk = ci1[k];
                            ci1[k] = s * ci[k] + cc * hk;
                            ci[k] = cc * ci[k] - s * hk;
                        }
                    }
                    p = -s * s2 * c3 * el1 * e[l] / dl1;
                    e[l] = s * p;
                    d[l] = cc * p;
                    if e[l].abs() <= eps * tst1 {
                        break;
                    }
                }
            }
            d[l] += f;
            e[l] = 0.0;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let values = order.iter().map(|&i| d[i]).collect();
        let vectors = DMatrix::from_fn(n, n, |r, col| v[(r, order[col])]);
        Ok((values, vectors))
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.dim() {
            let coupling = if i > 0 { self.off[i - 1] * self.off[i - 1] } else { 0.0 };
            q = self.diag[i] - x - if i > 0 { coupling / q } else { 0.0 };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Lowest eigenpair by bisection and shifted inverse iteration.
    ///
    /// Costs O(dim) per step, which is what makes N ~ 10^3 ground-state sweeps cheap.
    pub fn lowest(&self) -> Result<(f64, Vec<f64>)> {
        let n = self.dim();
        if n == 1 {
            return Ok((self.diag[0], vec![1.0]));
        }
        let scale = self.norm_bound().max(f64::MIN_POSITIVE);
        let mut lo = -scale * (1.0 + 1e-12) - 1e-300;
        let mut hi = (0..n).map(|i| self.diag[i]).fold(f64::INFINITY, f64::min);
        hi += scale * 1e-14;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
        }

        // T - sigma I is positive definite for sigma just below the spectrum.
        let sigma = lo - 8.0 * f64::EPSILON * scale;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * (i as f64 * 0.7).sin()).collect();
        normalize_real(&mut x);
        for _ in 0..6 {
            x = solve_shifted(self, sigma, &x)?;
            normalize_real(&mut x);
        }
        let hx = self.matvec(&x);
        let energy: f64 = x.iter().zip(&hx).map(|(a, b)| a * b).sum();
        let residual: f64 = hx
            .iter()
            .zip(&x)
            .map(|(h, v)| (h - energy * v).powi(2))
            .sum::<f64>()
            .sqrt();
        if !residual.is_finite() || residual > 1e-7 * scale {
            return Err(Error::Numerical(format!(
                "inverse iteration residual {residual:e} exceeds tolerance"
            )));
        }
        Ok((energy, x))
    }
}

fn normalize_real(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= n);
}

/// Solve (T - sigma I) y = b by LDL^T; the shifted matrix is positive definite.
fn solve_shifted(t: &SymTridiag, sigma: f64, b: &[f64]) -> Result<Vec<f64>> {
    let n = t.dim();
    let mut dpiv = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    dpiv[0] = t.diag[0] - sigma;
    for i in 1..n {
        l[i - 1] = t.off[i - 1] / dpiv[i - 1];
        dpiv[i] = t.diag[i] - sigma - l[i - 1] * t.off[i - 1];
    }
    let tiny = f64::EPSILON * t.norm_bound().max(f64::MIN_POSITIVE) * 1e-6;
    for p in dpiv.iter_mut() {
        if !p.is_finite() {
            return Err(Error::Numerical("non-finite pivot in inverse iteration".into()));
        }
        if p.abs() < tiny {
            *p = tiny;
        }
    }
    let mut y = b.to_vec();
    for i in 1..n {
        y[i] -= l[i - 1] * y[i - 1];
    }
    for i in 0..n {
        y[i] /= dpiv[i];
    }
    for i in (0..n - 1).rev() {
        y[i] -= l[i] * y[i + 1];
    }
    Ok(y)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Spectral data of a Hermitian operator, reused for exponentials and QFI.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Spectrum {
    pub fn of_hermitian(m: &CMatrix) -> Self {
        let (values, vectors) = hermitian_eigh(m);
        Spectrum { values, vectors }
    }

    pub fn of_tridiagonal(t: &SymTridiag) -> Result<Self> {
        let (values, v) = t.eigh()?;
        Ok(Spectrum { values, vectors: v.map(c) })
    }

    /// `exp(-i t H)` as a dense matrix.
    pub fn exp_i(&self, t: f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &e) in self.values.iter().enumerate() {
            let ph = cis(-e * t);
            for r in 0..n {
                scaled[(r, j)] *= ph;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(-i t H) psi` without forming the propagator.
    pub fn evolve(&self, psi: &CVector, t: f64) -> CVector {
        let mut w = self.vectors.adjoint() * psi;
        for (j, &e) in self.values.iter().enumerate() {
            w[j] *= cis(-e * t);
        }
        &self.vectors * w
    }
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigh(m);
    let n = vals.len();
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        for r in 0..n {
            scaled[(r, j)] *= s;
        }
    }
    scaled * vecs.adjoint()
}

/// `ln k!` for `k = 0..=n`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    t.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

/// Least-squares solution of `a x = b` via SVD.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    svd.solve(b, 1e-13)
        .map_err(|e| Error::Numerical(format!("least squares failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_tridiag(n: usize, seed: u64) -> SymTridiag {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let diag = (0..n).map(|_| next()).collect();
        let off = (0..n - 1).map(|_| next()).collect();
        SymTridiag::new(diag, off)
    }

    #[test]
    fn ql_reconstructs_matrix() {
        let t = random_tridiag(40, 3);
        let (vals, vecs) = t.eigh().unwrap();
        let dense = DMatrix::from_fn(40, 40, |i, j| {
            if i == j {
                t.diag[i]
            } else if i + 1 == j {
                t.off[i]
            } else if j + 1 == i {
                t.off[j]
            } else {
                0.0
            }
        });
        let back = &vecs * DMatrix::from_diagonal(&DVector::from_vec(vals.clone())) * vecs.transpose();
        assert!((back - &dense).amax() < 1e-12);
        assert!((vecs.transpose() * &vecs - DMatrix::identity(40, 40)).amax() < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn lowest_matches_full_solver() {
        for seed in 0..5 {
            let t = random_tridiag(60, seed);
            let (vals, vecs) = t.eigh().unwrap();
            let (e0, v0) = t.lowest().unwrap();
            assert!((e0 - vals[0]).abs() < 1e-12);
            let overlap: f64 = (0..60).map(|i| v0[i] * vecs[(i, 0)]).sum();
            assert!((overlap.abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn hermitian_eigh_sorted_and_unitary() {
        let m = CMatrix::from_fn(5, 5, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        let (vals, vecs) = hermitian_eigh(&m);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(max_abs(&(vecs.adjoint() * &vecs - CMatrix::identity(5, 5))) < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = CMatrix::from_fn(4, 4, |i, j| C64::new((i * j) as f64 + 1.0, (i as f64) - (j as f64)));
        let p = &a * a.adjoint();
        let s = psd_sqrt(&p);
        assert!(max_abs(&(&s * &s - &p)) < 1e-9);
    }
}
