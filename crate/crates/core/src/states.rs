//! Probe states: coherent, Dicke-family, and interacting ground states.

use crate::dynamics::{bjj_hamiltonian, spin_mixing_hamiltonian};
use crate::error::{invalid, Error, Result};
use crate::linalg::{c, cis, ln_factorials, CVector, SymTridiag, C64};
use crate::spinspace::{KetState, SpinSpace};

/// Coherent spin state pointing along `(sin t cos p, sin t sin p, cos t)`.
///
/// Amplitudes `sqrt(C(N, N/2+m)) cos^(N/2+m)(t/2) sin^(N/2-m)(t/2) e^{i(N/2-m)p}`,
/// computed in the log domain so large `N` does not underflow early.
pub fn coherent(space: SpinSpace, theta: f64, phi: f64) -> Result<KetState> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) || !phi.is_finite() {
        return invalid(format!("polar angle {theta} outside [0, pi]"));
    }
    let n = space.n_particles();
    let lf = ln_factorials(n);
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let ln_pow = |base: f64, e: usize| if e == 0 { 0.0 } else { e as f64 * base.abs().ln() };
    let mut amps = CVector::zeros(space.dim());
    for k in 0..=n {
        // k = N/2 + m counts atoms "up"
        let up = k;
        let down = n - k;
        let ln_mag = 0.5 * (lf[n] - lf[up] - lf[down]) + ln_pow(ch, up) + ln_pow(sh, down);
        amps[k] = cis(down as f64 * phi) * ln_mag.exp();
    }
    KetState::normalized(space, amps)
}

pub fn dicke(space: SpinSpace, m: f64) -> Result<KetState> {
    match space.index_of(m) {
        Some(k) => Ok(KetState::basis(space, k)),
        None => invalid(format!("{m} is not a Dicke label for N={}", space.n_particles())),
    }
}

pub fn twin_fock(space: SpinSpace) -> Result<KetState> {
    if space.n_particles() % 2 != 0 {
        return invalid("twin-Fock state needs even N");
    }
    dicke(space, 0.0)
}

/// `(|N/2> + e^{i phi} |-N/2>)/sqrt 2`, real positive amplitude on `m = N/2`.
pub fn noon(space: SpinSpace, phi: f64) -> Result<KetState> {
    let d = space.dim();
    let mut amps = CVector::zeros(d);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    amps[d - 1] = c(h);
    amps[0] += cis(phi) * h;
    KetState::normalized(space, amps)
}

/// Single excitation below the top: `|m = N/2 - 1>`.
pub fn w_state(space: SpinSpace) -> Result<KetState> {
    Ok(KetState::basis(space, space.dim() - 2))
}

/// Ground state of `-J_x + (L/N) J_z^2 + dE J_z`.
///
/// With `dE = 0` the solve is restricted to the even-parity sector, which holds
/// the nodeless ground state and sidesteps the exponentially small splitting
/// of the ordered phase.
pub fn bjj_ground_state(space: SpinSpace, lambda: f64, delta_e: f64) -> Result<KetState> {
    if !lambda.is_finite() || !delta_e.is_finite() {
        return invalid("BJJ parameters must be finite");
    }
    let h = bjj_hamiltonian(space, 1.0, lambda, delta_e);
    let d = space.dim();
    let mut v = if delta_e == 0.0 {
        let (sector, lift) = even_sector(&h);
        let (_, w) = sector.lowest()?;
        let mut v = vec![0.0; d];
        for (a, comps) in lift.iter().enumerate() {
            for &(i, weight) in comps {
                v[i] += weight * w[a];
            }
        }
        v
    } else {
        h.lowest()?.1
    };
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    check_residual(&h, &v)?;
    KetState::normalized(space, CVector::from_iterator(d, v.into_iter().map(c)))
}

fn check_residual(h: &SymTridiag, v: &[f64]) -> Result<()> {
    let hv = h.matvec(v);
    let e: f64 = hv.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
    let r = hv.iter().zip(v).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
    if r > 1e-8 * h.norm_bound().max(1.0) {
        return Err(Error::Numerical(format!("ground-state residual {r:e}")));
    }
    Ok(())
}

/// Restriction of a tridiagonal matrix commuting with `i -> d-1-i` to the
/// symmetric subspace, with the lift back to the full basis.
fn even_sector(t: &SymTridiag) -> (SymTridiag, Vec<Vec<(usize, f64)>>) {
    let d = t.dim();
    let w = std::f64::consts::FRAC_1_SQRT_2;
    let lift: Vec<Vec<(usize, f64)>> = (d / 2..d)
        .map(|i| {
            let mirror = d - 1 - i;
            if mirror == i {
                vec![(i, 1.0)]
            } else {
                vec![(i, w), (mirror, w)]
            }
        })
        .collect();
    let elem = |i: usize, j: usize| -> f64 {
        if i == j {
            t.diag[i]
        } else if i + 1 == j {
            t.off[i]
        } else if j + 1 == i {
            t.off[j]
        } else {
            0.0
        }
    };
    let project = |a: &[(usize, f64)], b: &[(usize, f64)]| {
        let mut s = 0.0;
        for &(i, wi) in a {
            for &(j, wj) in b {
                s += wi * wj * elem(i, j);
            }
        }
        s
    };
    let ds = lift.len();
    let diag = (0..ds).map(|a| project(&lift[a], &lift[a])).collect();
    let off = (0..ds.saturating_sub(1)).map(|a| project(&lift[a + 1], &lift[a])).collect();
    (SymTridiag::new(diag, off), lift)
}

/// Spin-1 condensate state in the zero-magnetization pair basis
/// `|k> = |N_{+1} = k, N_0 = N - 2k, N_{-1} = k>`, `k = 0..=N/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeModeState {
    n: usize,
    amps: CVector,
}

impl ThreeModeState {
    pub fn new(n: usize, amps: CVector) -> Result<Self> {
        if n % 2 != 0 || n == 0 {
            return invalid("pair basis needs even N >= 2");
        }
        if amps.len() != n / 2 + 1 {
            return invalid(format!("expected {} pair amplitudes, got {}", n / 2 + 1, amps.len()));
        }
        let n2 = amps.norm_squared();
        if (n2 - 1.0).abs() > 1e-10 {
            return invalid(format!("pair state norm^2 {n2} differs from 1"));
        }
        Ok(ThreeModeState { n, amps })
    }

    /// All atoms in `m_F = 0`.
    pub fn vacuum_sides(n: usize) -> Result<Self> {
        let mut amps = CVector::zeros(n / 2 + 1);
        amps[0] = c(1.0);
        ThreeModeState::new(n, amps)
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub(crate) fn from_unchecked(n: usize, amps: CVector) -> Self {
        ThreeModeState { n, amps }
    }

    /// `<N_{+1}> = <N_{-1}> = <k>`.
    pub fn mean_side_population(&self) -> f64 {
        self.amps.iter().enumerate().map(|(k, a)| k as f64 * a.norm_sqr()).sum()
    }

    /// `<N_{+1} + N_{-1}>`.
    pub fn mean_pair_population(&self) -> f64 {
        2.0 * self.mean_side_population()
    }

    pub fn pair_population_variance(&self) -> f64 {
        let m = self.mean_pair_population();
        let m2: f64 = self.amps.iter().enumerate().map(|(k, a)| (2 * k) as f64 * (2 * k) as f64 * a.norm_sqr()).sum();
        m2 - m * m
    }

    /// `Var(N_{+1} - N_{-1})`, identically zero in this basis.
    pub fn magnetization_variance(&self) -> f64 {
        0.0
    }

    /// `F_Q = 4 Var(S_x)` with `S_x = (a_0^dag s + a_0 s^dag)/2`, `s = (a_{+1} + a_{-1})/sqrt 2`.
    ///
    /// `S_x` leaves the zero-magnetization sector, so `<S_x> = 0` and
    /// `4 <S_x^2> = sum_k (k+1) |sqrt(N-2k-1) c_{k+1} + sqrt(N-2k) c_k|^2`.
    pub fn qfi_sx(&self) -> f64 {
        let n = self.n as f64;
        let kmax = self.n / 2;
        let mut total = 0.0;
        for k in 0..kmax {
            let kf = k as f64;
            let amp = self.amps[k + 1] * (n - 2.0 * kf - 1.0).sqrt() + self.amps[k] * (n - 2.0 * kf).sqrt();
            total += (kf + 1.0) * amp.norm_sqr();
        }
        total
    }

    pub fn overlap(&self, other: &ThreeModeState) -> C64 {
        self.amps.dotc(&other.amps)
    }
}

/// Ground state of the spin-mixing Hamiltonian with `lambda = sign` and `q` in units of `|lambda|`.
pub fn spin_mixing_ground_state(n: usize, q: f64, lambda_sign: f64) -> Result<ThreeModeState> {
    if n % 2 != 0 || n == 0 {
        return invalid("spin-mixing ground state needs even N >= 2");
    }
    if !q.is_finite() || lambda_sign == 0.0 || !lambda_sign.is_finite() {
        return invalid("q must be finite and the interaction sign nonzero");
    }
    let h = spin_mixing_hamiltonian(n, q, lambda_sign.signum());
    let (_, mut v) = h.lowest()?;
    check_residual(&h, &v)?;
    // fix the sign so the largest amplitude is positive
    let big = v.iter().cloned().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
    if big < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let amps = CVector::from_iterator(v.len(), v.into_iter().map(c));
    let norm = amps.norm();
    ThreeModeState::new(n, amps.unscale(norm))
}

/// Two-mode squeezed vacuum over twin occupations `|n>_{+1}|n>_{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairBasisState {
    pub r: f64,
    pub n_max: usize,
    pub amps: Vec<C64>,
}

impl PairBasisState {
    /// Probability mass lost to truncation.
    pub fn truncation_deficit(&self) -> f64 {
        1.0 - self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>()
    }

    /// `<N_{+1}> = <N_{-1}>`.
    pub fn mean_side_population(&self) -> f64 {
        self.amps.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum()
    }

    /// `Var(N_{+1} - N_{-1})`, zero for twin occupations.
    pub fn difference_variance(&self) -> f64 {
        0.0
    }
}

/// `c_n = (-i tanh r)^n / cosh r`, truncated once the lost mass is below 1e-8.
///
/// `n_max` is a starting guess; it grows until the deficit tanh^{2(n_max+1)} r is small enough.
pub fn two_mode_squeezed_vacuum(r: f64, n_max: usize) -> Result<PairBasisState> {
    if !(r >= 0.0) || !r.is_finite() {
        return invalid("squeezing parameter must be finite and nonnegative");
    }
    let t = r.tanh();
    let mut n_max = n_max;
    if t > 0.0 {
        let needed = ((1e-9f64).ln() / (2.0 * t.ln())).ceil();
        if needed.is_finite() && needed > n_max as f64 {
            n_max = needed as usize;
        }
    }
    let amps: Vec<C64> = (0..=n_max)
        .map(|n| {
            let phase = C64::new(0.0, -1.0).powu(n as u32);
            phase * (t.powi(n as i32) / r.cosh())
        })
        .collect();
    let state = PairBasisState { r, n_max, amps };
    if state.truncation_deficit() >= 1e-8 {
        return Err(Error::Numerical("two-mode squeezed vacuum truncation did not converge".into()));
    }
    Ok(state)
}
