//! Multipole decomposition, spherical quasi-probabilities and spin-noise tomography.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::estimation::MeasurementModel;
use crate::linalg::{ln_factorials, lstsq, SymTridiag, CMatrix, C64};
use crate::spinspace::{Axis, MixedState, SpinSpace, SpinState};

/// ⟨j1 m1; j2 m2 | J M⟩ from the Racah sum, with every argument given as twice its value.
///
/// Accumulated in the log domain. The alternating sum cancels badly once the
/// spins reach a few tens; the multipole basis below does not rely on it.
pub fn clebsch_gordan(j1: i64, m1: i64, j2: i64, m2: i64, jj: i64, mm: i64) -> f64 {
    if m1 + m2 != mm || m1.abs() > j1 || m2.abs() > j2 || mm.abs() > jj {
        return 0.0;
    }
    if jj > j1 + j2 || jj < (j1 - j2).abs() || (j1 + j2 + jj) % 2 != 0 {
        return 0.0;
    }
    if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (jj + mm) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i64| (x / 2) as usize;
    let lf = ln_factorials(h(j1 + j2 + jj) + 2);
    let pre = 0.5
        * (((jj + 1) as f64).ln() + lf[h(jj + j1 - j2)] + lf[h(jj - j1 + j2)] + lf[h(j1 + j2 - jj)]
            - lf[h(j1 + j2 + jj) + 1]
            + lf[h(jj + mm)]
            + lf[h(jj - mm)]
            + lf[h(j1 - m1)]
            + lf[h(j1 + m1)]
            + lf[h(j2 - m2)]
            + lf[h(j2 + m2)]);
    let zmin = 0.max((j2 - jj - m1) / 2).max((j1 + m2 - jj) / 2);
    let zmax = ((j1 + j2 - jj) / 2).min((j1 - m1) / 2).min((j2 + m2) / 2);
    let mut s = 0.0;
    for z in zmin..=zmax {
        let zu = z as usize;
        let t = lf[zu]
            + lf[h(j1 + j2 - jj) - zu]
            + lf[h(j1 - m1) - zu]
            + lf[h(j2 + m2) - zu]
            + lf[(h(jj - j2 + m1) as i64 + z) as usize]
            + lf[(h(jj - j1 - m2) as i64 + z) as usize];
        let v = (pre - t).exp();
        s += if z % 2 == 0 { v } else { -v };
    }
    s
}

/// Entries of T_kq, q ≥ 0, along its only nonzero diagonal: x[i] = ⟨μ|T_kq|μ−q⟩ for μ = −J+q+i.
///
/// T_kq are the eigenvectors of Σ_i [J_i, [J_i, ·]] restricted to the q-th
/// diagonal, which is a symmetric tridiagonal problem with eigenvalues k(k+1).
/// The sign is fixed by the top entry, a single-term Racah coefficient of sign (−1)^q.
fn multipole_diagonals(space: SpinSpace, q: usize) -> Result<DMatrix<f64>> {
    let j = space.j();
    let c = j * (j + 1.0);
    let len = space.dim() - q;
    let lp = |m: f64| (c - m * (m + 1.0)).max(0.0).sqrt();
    let mus: Vec<f64> = (0..len).map(|i| -j + (q + i) as f64).collect();
    let diag = mus.iter().map(|mu| 2.0 * c - 2.0 * mu * (mu - q as f64)).collect();
    let off = mus[..len - 1]
        .iter()
        .map(|mu| -lp(*mu) * lp(mu - q as f64))
        .collect();
    let (_, mut vecs) = SymTridiag::new(diag, off).eigh()?;
    let want_negative = q % 2 == 1;
    for col in 0..len {
        let top = vecs[(len - 1, col)];
        if (top < 0.0) != want_negative {
            vecs.column_mut(col).neg_mut();
        }
    }
    Ok(vecs)
}

/// ρ = Σ_kq ρ_kq T_kq with k = 0..N, q = −k..k.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorDecomposition {
    space: SpinSpace,
    /// coeffs[k][q + k]
    coeffs: Vec<Vec<C64>>,
}

impl TensorDecomposition {
    pub fn space(&self) -> SpinSpace {
        self.space
    }

    pub fn max_rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, k: usize, q: i64) -> C64 {
        if k >= self.coeffs.len() || q.unsigned_abs() as usize > k {
            return C64::new(0.0, 0.0);
        }
        self.coeffs[k][(q + k as i64) as usize]
    }

    /// Multiply every rank-k block by weights[k].
    pub fn reweighted(&self, weights: &[f64]) -> Result<TensorDecomposition> {
        if weights.len() != self.coeffs.len() {
            return invalid("need one weight per rank");
        }
        Ok(TensorDecomposition {
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .zip(weights)
                .map(|(row, w)| row.iter().map(|c| c * *w).collect())
                .collect(),
        })
    }

    /// Σ_kq ρ_kq T_kq as a dense matrix.
    pub fn reconstruct(&self) -> Result<CMatrix> {
        let s = self.space;
        let d = s.dim();
        let mut rho = CMatrix::zeros(d, d);
        for q in 0..d {
            let t = multipole_diagonals(s, q)?;
            for i in 0..d - q {
                let (r, cidx) = (q + i, i);
                for (col, k) in (q..d).enumerate() {
                    let x = t[(i, col)];
                    rho[(r, cidx)] += self.get(k, q as i64) * x;
                    if q > 0 {
                        // T_{k,−q} = (−1)^q T_kq^T for real T
                        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                        rho[(cidx, r)] += self.get(k, -(q as i64)) * (sign * x);
                    }
                }
            }
        }
        Ok(rho)
    }
}

pub fn decompose(state: &dyn SpinState) -> Result<TensorDecomposition> {
    let s = state.space();
    let d = s.dim();
    let rho = state.density();
    let mut coeffs: Vec<Vec<C64>> = (0..d).map(|k| vec![C64::new(0.0, 0.0); 2 * k + 1]).collect();
    for q in 0..d {
        let t = multipole_diagonals(s, q)?;
        for (col, k) in (q..d).enumerate() {
            let mut plus = C64::new(0.0, 0.0);
            let mut minus = C64::new(0.0, 0.0);
            for i in 0..d - q {
                let x = t[(i, col)];
                plus += rho[(q + i, i)] * x;
                minus += rho[(i, q + i)] * x;
            }
            coeffs[k][k + q] = plus;
            if q > 0 {
                let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                coeffs[k][k - q] = minus * sign;
            }
        }
    }
    Ok(TensorDecomposition { space: s, coeffs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuasiKind {
    P,
    W,
    Q,
}

impl QuasiKind {
    pub fn name(self) -> &'static str {
        match self {
            QuasiKind::P => "P",
            QuasiKind::W => "W",
            QuasiKind::Q => "Q",
        }
    }
}

impl std::str::FromStr for QuasiKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" | "p" => Ok(QuasiKind::P),
            "W" | "w" => Ok(QuasiKind::W),
            "Q" | "q" => Ok(QuasiKind::Q),
            other => invalid(format!("unknown representation '{other}', expected P, W or Q")),
        }
    }
}

/// f_k for k = 0..N.
pub fn quasi_coefficients(kind: QuasiKind, n: usize) -> Vec<f64> {
    let lf = ln_factorials(2 * n + 2);
    (0..=n)
        .map(|k| {
            let ln_q = 0.5 * (lf[n] + lf[n + 1] - lf[n - k] - lf[n + k + 1]);
            match kind {
                QuasiKind::W => 1.0,
                QuasiKind::Q => ln_q.exp(),
                QuasiKind::P => (-ln_q).exp(),
            }
        })
        .collect()
}

/// Gauss-Legendre nodes in cos ϑ times a uniform φ grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Quadrature weights over cos ϑ; φ carries 2π / n_φ each.
    pub weights: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return invalid("sphere grid needs at least one point per direction");
        }
        let (x, w) = gauss_legendre(n_theta);
        // ascending ϑ is descending cos ϑ
        let theta = x.iter().rev().map(|c| c.acos()).collect();
        let weights = w.into_iter().rev().collect();
        let phi = (0..n_phi).map(|i| 2.0 * PI * i as f64 / n_phi as f64).collect();
        Ok(SphereGrid { theta, phi, weights })
    }

    /// Smallest grid resolving every harmonic of an N-particle state.
    pub fn for_particles(n: usize) -> Self {
        SphereGrid::new(2 * n + 2, 2 * n + 2).expect("nonzero grid")
    }

    pub fn integrate(&self, values: &DMatrix<f64>) -> f64 {
        let dphi = 2.0 * PI / self.phi.len() as f64;
        (0..self.theta.len())
            .map(|i| self.weights[i] * values.row(i).sum() * dphi)
            .sum()
    }
}

/// Nodes (ascending) and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut pm, mut pn) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let next = ((2.0 * kf - 1.0) * z * pn - (kf - 1.0) * pm) / kf;
                pm = pn;
                pn = next;
            }
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Orthonormal P̄_k^q(cos ϑ) for q ≥ 0, so that Y_kq = P̄_k^q e^{iqφ} (Condon-Shortley phase).
/// Indexed [q][k − q].
fn normalized_legendre(n: usize, theta: f64) -> Vec<Vec<f64>> {
    let (s, x) = theta.sin_cos();
    let mut out = Vec::with_capacity(n + 1);
    let mut pqq = (1.0 / (4.0 * PI)).sqrt();
    for q in 0..=n {
        if q > 0 {
            let qf = q as f64;
            pqq *= -((2.0 * qf + 1.0) / (2.0 * qf)).sqrt() * s;
        }
        let mut row = Vec::with_capacity(n + 1 - q);
        row.push(pqq);
        if q < n {
            row.push((2.0 * q as f64 + 3.0).sqrt() * x * pqq);
        }
        let qf = q as f64;
        for k in q + 2..=n {
            let kf = k as f64;
            let a = ((4.0 * kf * kf - 1.0) / (kf * kf - qf * qf)).sqrt();
            let km = kf - 1.0;
            let b = ((km * km - qf * qf) / (4.0 * km * km - 1.0)).sqrt();
            let v = a * (x * row[k - q - 1] - b * row[k - q - 2]);
            row.push(v);
        }
        out.push(row);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiProbMap {
    pub kind: Option<QuasiKind>,
    pub n: usize,
    pub grid: SphereGrid,
    /// values[(i_theta, i_phi)]
    pub values: DMatrix<f64>,
}

impl QuasiProbMap {
    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    pub fn min(&self) -> f64 {
        self.values.min()
    }

    pub fn max(&self) -> f64 {
        self.values.max()
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "theta,phi,value")?;
        for (i, t) in self.grid.theta.iter().enumerate() {
            for (k, p) in self.grid.phi.iter().enumerate() {
                writeln!(out, "{:.16e},{:.16e},{:.16e}", t, p, self.values[(i, k)])?;
            }
        }
        Ok(())
    }

    pub fn json_header(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind.map(|k| k.name()),
            "n_particles": self.n,
            "n_theta": self.grid.theta.len(),
            "n_phi": self.grid.phi.len(),
            "theta_nodes": "gauss-legendre in cos(theta), ascending theta",
            "phi_nodes": "uniform, phi_i = 2 pi i / n_phi",
            "weights": self.grid.weights,
            "min": self.min(),
            "max": self.max(),
            "integral": self.integral(),
        })
    }
}

/// √((N+1)/4π) Σ_k c_k Σ_q ρ_kq Y_kq on the grid.
pub fn map_from_decomposition(
    decomp: &TensorDecomposition,
    coeffs: &[f64],
    grid: &SphereGrid,
) -> Result<QuasiProbMap> {
    let n = decomp.max_rank();
    if coeffs.len() != n + 1 {
        return invalid("need one coefficient per rank");
    }
    if grid.theta.len() < 2 * n + 2 {
        return invalid(format!(
            "theta resolution {} is below 2N+2 = {} needed for rank-N harmonics",
            grid.theta.len(),
            2 * n + 2
        ));
    }
    if grid.phi.len() < n + 1 {
        return invalid(format!("phi resolution {} is below N+1 = {}", grid.phi.len(), n + 1));
    }
    let pref = ((n as f64 + 1.0) / (4.0 * PI)).sqrt();
    let mut values = DMatrix::zeros(grid.theta.len(), grid.phi.len());
    for (i, th) in grid.theta.iter().enumerate() {
        let leg = normalized_legendre(n, *th);
        // g_q(ϑ) = Σ_k c_k ρ_kq P̄_k^q
        let g: Vec<C64> = (0..=n)
            .map(|q| {
                (q..=n)
                    .map(|k| decomp.get(k, q as i64) * (coeffs[k] * leg[q][k - q]))
                    .sum()
            })
            .collect();
        for (col, ph) in grid.phi.iter().enumerate() {
            let mut v = g[0].re;
            for (q, gq) in g.iter().enumerate().skip(1) {
                let (s, c) = (q as f64 * ph).sin_cos();
                v += 2.0 * (gq.re * c - gq.im * s);
            }
            values[(i, col)] = pref * v;
        }
    }
    Ok(QuasiProbMap {
        kind: None,
        n,
        grid: grid.clone(),
        values,
    })
}

pub fn quasiprobability(state: &dyn SpinState, kind: QuasiKind, grid: &SphereGrid) -> Result<QuasiProbMap> {
    let n = state.space().n_particles();
    if grid.theta.len() < 2 * n + 2 {
        return invalid(format!(
            "theta resolution {} is below 2N+2 = {}",
            grid.theta.len(),
            2 * n + 2
        ));
    }
    let decomp = decompose(state)?;
    let mut map = map_from_decomposition(&decomp, &quasi_coefficients(kind, n), grid)?;
    map.kind = Some(kind);
    Ok(map)
}

/// Q(ϑ, φ) = (N+1)/(4π) ⟨ϑ,φ|ρ|ϑ,φ⟩ evaluated by direct overlaps.
pub fn husimi_direct(state: &dyn SpinState, grid: &SphereGrid) -> Result<QuasiProbMap> {
    let s = state.space();
    let n = s.n_particles();
    let pref = (n as f64 + 1.0) / (4.0 * PI);
    let mut values = DMatrix::zeros(grid.theta.len(), grid.phi.len());
    for (i, th) in grid.theta.iter().enumerate() {
        for (k, ph) in grid.phi.iter().enumerate() {
            let c = crate::states::coherent(s, *th, *ph)?;
            let amp = c.amplitudes();
            let v = (amp.adjoint() * state.density() * amp)[(0, 0)].re;
            values[(i, k)] = pref * v;
        }
    }
    Ok(QuasiProbMap {
        kind: Some(QuasiKind::Q),
        n,
        grid: grid.clone(),
        values,
    })
}

/// Legendre polynomials P_0..P_n at x.
pub fn legendre_series(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0];
    if n >= 1 {
        p.push(x);
    }
    for k in 2..=n {
        let kf = k as f64;
        let v = ((2.0 * kf - 1.0) * x * p[k - 1] - (kf - 1.0) * p[k - 2]) / kf;
        p.push(v);
    }
    p
}

/// Closed forms for the coherent state with mean direction s, as functions of x = r̂·s.
pub fn coherent_closed_form(kind: QuasiKind, n: usize, x: f64) -> f64 {
    let nf = n as f64;
    match kind {
        QuasiKind::Q => (nf + 1.0) / (4.0 * PI) * ((1.0 + x) / 2.0).powi(n as i32),
        QuasiKind::W | QuasiKind::P => {
            let leg = legendre_series(n, x);
            let f = quasi_coefficients(QuasiKind::Q, n);
            (0..=n)
                .map(|k| {
                    let w = if kind == QuasiKind::W { f[k] } else { 1.0 };
                    (2.0 * k as f64 + 1.0) / (4.0 * PI) * w * leg[k]
                })
                .sum()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinNoiseMoments {
    pub order: u32,
    pub angles: Vec<f64>,
    pub moments: Vec<f64>,
    /// Frequencies n ∈ {k, k−2, …}, descending.
    pub frequencies: Vec<u32>,
    pub cos_coeffs: Vec<f64>,
    /// Zero for n = 0.
    pub sin_coeffs: Vec<f64>,
    pub fit_residual: f64,
}

impl SpinNoiseMoments {
    pub fn evaluate_fit(&self, theta: f64) -> f64 {
        self.frequencies
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let a = *n as f64 * theta;
                self.cos_coeffs[i] * a.cos() + self.sin_coeffs[i] * a.sin()
            })
            .sum()
    }
}

/// ⟨J_z^k⟩ after e^{−iϑJ_x} for each angle, with a trigonometric fit.
pub fn spin_noise_moments(state: &dyn SpinState, angles: &[f64], order: u32) -> Result<SpinNoiseMoments> {
    if order == 0 {
        return invalid("moment order must be at least 1");
    }
    if angles.is_empty() || angles.iter().any(|a| !a.is_finite()) {
        return invalid("need at least one finite angle");
    }
    // θ grid of the model is unused here
    let model = MeasurementModel::new(state, Axis::X, Vec::new(), Axis::Z, vec![0.0])?;
    let labels = state.space().labels();
    let moments: Vec<f64> = angles
        .iter()
        .map(|a| {
            model
                .probabilities(*a)
                .iter()
                .zip(&labels)
                .map(|(p, m)| p * m.powi(order as i32))
                .sum()
        })
        .collect();
    let frequencies: Vec<u32> = (0..=order / 2).map(|i| order - 2 * i).collect();
    let mut cols = Vec::new();
    for f in &frequencies {
        cols.push((*f, false));
        if *f > 0 {
            cols.push((*f, true));
        }
    }
    let a = DMatrix::from_fn(angles.len(), cols.len(), |r, c| {
        let (f, is_sin) = cols[c];
        let x = f as f64 * angles[r];
        if is_sin {
            x.sin()
        } else {
            x.cos()
        }
    });
    let b = DVector::from_vec(moments.clone());
    let coef = lstsq(&a, &b)?;
    let mut cos_coeffs = vec![0.0; frequencies.len()];
    let mut sin_coeffs = vec![0.0; frequencies.len()];
    for (c, (f, is_sin)) in cols.iter().enumerate() {
        let i = frequencies.iter().position(|x| x == f).unwrap();
        if *is_sin {
            sin_coeffs[i] = coef[c];
        } else {
            cos_coeffs[i] = coef[c];
        }
    }
    let fitted = &a * &coef;
    let scale = moments.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let fit_residual = (fitted - b).amax() / scale;
    Ok(SpinNoiseMoments {
        order,
        angles: angles.to_vec(),
        moments,
        frequencies,
        cos_coeffs,
        sin_coeffs,
        fit_residual,
    })
}

/// Convenience: rebuild a state from its decomposition.
pub fn reconstruct_state(decomp: &TensorDecomposition) -> Result<MixedState> {
    MixedState::new(decomp.space(), decomp.reconstruct()?)
}
