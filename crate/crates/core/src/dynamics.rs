//! Time evolution under one-axis twisting, the two-mode Josephson Hamiltonian
//! and spin mixing, plus the SU(1,1) interferometer built from the latter.

use crate::error::{invalid, Result};
use crate::linalg::{cis, CVector, Spectrum, SymTridiag, I};
use crate::spinspace::{same_space, HermitianOperator, KetState, SpinSpace};
use crate::states::ThreeModeState;

/// `-omega J_x + chi J_z^2 + delta J_z` with `chi = lambda omega / N`, `delta = delta_e omega`.
pub fn bjj_hamiltonian(space: SpinSpace, omega: f64, lambda: f64, delta_e: f64) -> SymTridiag {
    let n = space.n_particles() as f64;
    let chi = lambda * omega / n;
    let d = space.dim();
    let diag = (0..d)
        .map(|k| {
            let m = space.label(k);
            chi * m * m + delta_e * omega * m
        })
        .collect();
    let off = (0..d - 1).map(|k| -0.5 * omega * space.ladder(k)).collect();
    SymTridiag::new(diag, off)
}

/// Spin-mixing Hamiltonian on the pair basis, `lambda` the (signed) energy unit.
///
/// Diagonal `2k [q + lambda (2 N_0 - 1)]` with `N_0 = N - 2k`; pair creation couples
/// `k -> k+1` with `2 lambda (k+1) sqrt(N_0 (N_0 - 1))`.
pub fn spin_mixing_hamiltonian(n: usize, q: f64, lambda: f64) -> SymTridiag {
    let kmax = n / 2;
    let diag = (0..=kmax)
        .map(|k| {
            let n0 = (n - 2 * k) as f64;
            2.0 * k as f64 * (q + lambda * (2.0 * n0 - 1.0))
        })
        .collect();
    let off = (0..kmax)
        .map(|k| {
            let n0 = (n - 2 * k) as f64;
            2.0 * lambda * (k + 1) as f64 * (n0 * (n0 - 1.0)).sqrt()
        })
        .collect();
    SymTridiag::new(diag, off)
}

/// Multiply the amplitude of `|m>` by `exp(-i chi_t m^2)`.
pub fn oat_evolve(state: &KetState, chi_t: f64) -> KetState {
    let s = state.space();
    let mut amps = state.amplitudes().clone();
    for (k, a) in amps.iter_mut().enumerate() {
        let m = s.label(k);
        *a *= cis(-chi_t * m * m);
    }
    KetState::new(s, amps).expect("diagonal phases preserve the norm")
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvolutionSpec {
    Oat { chi_t: f64 },
    Bjj { omega: f64, lambda: f64, delta_e: f64, t: f64 },
    SpinMixing { q: f64, lambda_sign: f64, t: f64 },
    Custom { hamiltonian: HermitianOperator, t: f64 },
}

impl EvolutionSpec {
    fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let ok = match self {
            EvolutionSpec::Oat { chi_t } => finite(&[*chi_t]),
            EvolutionSpec::Bjj { omega, lambda, delta_e, t } => finite(&[*omega, *lambda, *delta_e, *t]),
            EvolutionSpec::SpinMixing { q, lambda_sign, t } => finite(&[*q, *t]) && *lambda_sign != 0.0,
            EvolutionSpec::Custom { t, .. } => finite(&[*t]),
        };
        if ok {
            Ok(())
        } else {
            invalid("evolution parameters must be finite (and the spin-mixing sign nonzero)")
        }
    }

    fn time(&self) -> f64 {
        match self {
            EvolutionSpec::Oat { .. } => 1.0,
            EvolutionSpec::Bjj { t, .. } | EvolutionSpec::SpinMixing { t, .. } | EvolutionSpec::Custom { t, .. } => *t,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DynamicState {
    Spin(KetState),
    ThreeMode(ThreeModeState),
}

impl From<KetState> for DynamicState {
    fn from(s: KetState) -> Self {
        DynamicState::Spin(s)
    }
}

impl From<ThreeModeState> for DynamicState {
    fn from(s: ThreeModeState) -> Self {
        DynamicState::ThreeMode(s)
    }
}

/// Spectrum of a time-independent Hamiltonian, reusable across times.
#[derive(Clone, Debug)]
pub struct Propagator {
    kind: PropagatorKind,
}

#[derive(Clone, Debug)]
enum PropagatorKind {
    Diagonal(Vec<f64>),
    Dense(Spectrum),
}

impl Propagator {
    pub fn from_tridiagonal(h: &SymTridiag) -> Result<Self> {
        Ok(Propagator { kind: PropagatorKind::Dense(Spectrum::of_tridiagonal(h)?) })
    }

    pub fn from_operator(h: &HermitianOperator) -> Self {
        Propagator { kind: PropagatorKind::Dense(Spectrum::of_hermitian(h.matrix())) }
    }

    /// OAT with unit `chi`: energies `m^2`.
    pub fn oat(space: SpinSpace) -> Self {
        Propagator { kind: PropagatorKind::Diagonal(space.labels().iter().map(|m| m * m).collect()) }
    }

    pub fn energies(&self) -> &[f64] {
        match &self.kind {
            PropagatorKind::Diagonal(e) => e,
            PropagatorKind::Dense(s) => &s.values,
        }
    }

    /// `exp(-i H t) psi`, renormalized to absorb roundoff.
    pub fn apply(&self, psi: &CVector, t: f64) -> CVector {
        let out = match &self.kind {
            PropagatorKind::Diagonal(e) => CVector::from_iterator(psi.len(), psi.iter().zip(e).map(|(a, &en)| a * cis(-en * t))),
            PropagatorKind::Dense(s) => s.evolve(psi, t),
        };
        let n = out.norm();
        out.unscale(n)
    }
}

/// Build the propagator for a spec on a given state shape.
pub fn propagator(spec: &EvolutionSpec, state: &DynamicState) -> Result<Propagator> {
    spec.validate()?;
    match (spec, state) {
        (EvolutionSpec::Oat { .. }, DynamicState::Spin(s)) => Ok(Propagator::oat(s.space())),
        (EvolutionSpec::Bjj { omega, lambda, delta_e, .. }, DynamicState::Spin(s)) => {
            Propagator::from_tridiagonal(&bjj_hamiltonian(s.space(), *omega, *lambda, *delta_e))
        }
        (EvolutionSpec::Custom { hamiltonian, .. }, DynamicState::Spin(s)) => {
            same_space(hamiltonian.space(), s.space())?;
            Ok(Propagator::from_operator(hamiltonian))
        }
        (EvolutionSpec::SpinMixing { q, lambda_sign, .. }, DynamicState::ThreeMode(s)) => {
            Propagator::from_tridiagonal(&spin_mixing_hamiltonian(s.n_particles(), *q, lambda_sign.signum()))
        }
        _ => invalid("evolution kind does not match the state's space"),
    }
}

/// `exp(-i H t) |psi>` by spectral decomposition.
pub fn evolve(state: &DynamicState, spec: &EvolutionSpec) -> Result<DynamicState> {
    if let (EvolutionSpec::Oat { chi_t }, DynamicState::Spin(s)) = (spec, state) {
        spec.validate()?;
        return Ok(DynamicState::Spin(oat_evolve(s, *chi_t)));
    }
    let p = propagator(spec, state)?;
    let t = spec.time();
    Ok(match state {
        DynamicState::Spin(s) => DynamicState::Spin(KetState::new(s.space(), p.apply(s.amplitudes(), t))?),
        DynamicState::ThreeMode(s) => {
            DynamicState::ThreeMode(ThreeModeState::from_unchecked(s.n_particles(), p.apply(s.amplitudes(), t)))
        }
    })
}

/// One point of an SU(1,1) phase scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su11Point {
    pub theta: f64,
    /// `<N_{+1} + N_{-1}>`
    pub mean_pairs: f64,
    pub var_pairs: f64,
    /// exact derivative of `mean_pairs` in theta
    pub dmean_dtheta: f64,
}

impl Su11Point {
    /// Error-propagation phase uncertainty for a single shot.
    pub fn moment_sensitivity(&self) -> f64 {
        self.var_pairs.max(0.0).sqrt() / self.dmean_dtheta.abs()
    }
}

/// Mixing, phase, mixing, starting from all atoms in `m_F = 0`.
///
/// The phase is `exp(-i theta N_0 / 2)`: each converted pair picks up
/// `theta = 2 theta_0 - theta_{+1} - theta_{-1}`, so `|k>` gains `e^{i k theta}`.
pub fn su11_scan(n: usize, lambda_sign: f64, q: f64, t_mix: f64, thetas: &[f64]) -> Result<Vec<Su11Point>> {
    if n % 2 != 0 || n == 0 {
        return invalid("SU(1,1) scan needs even N");
    }
    if !(t_mix > 0.0) || !t_mix.is_finite() {
        return invalid("mixing time must be positive");
    }
    if lambda_sign == 0.0 || !q.is_finite() {
        return invalid("q must be finite and the interaction sign nonzero");
    }
    let h = spin_mixing_hamiltonian(n, q, lambda_sign.signum());
    let p = Propagator::from_tridiagonal(&h)?;
    let vac = ThreeModeState::vacuum_sides(n)?;
    let first = p.apply(vac.amplitudes(), t_mix);
    let dim = first.len();
    let pairs: Vec<f64> = (0..dim).map(|k| 2.0 * k as f64).collect();
    let mut out = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        if !theta.is_finite() {
            return invalid("phase grid must be finite");
        }
        let phased = CVector::from_iterator(dim, first.iter().enumerate().map(|(k, a)| a * cis(k as f64 * theta)));
        let dphased = CVector::from_iterator(dim, phased.iter().enumerate().map(|(k, a)| a * I * k as f64));
        let psi = p.apply(&phased, t_mix);
        let dpsi = match &p.kind {
            PropagatorKind::Dense(s) => s.evolve(&dphased, t_mix),
            PropagatorKind::Diagonal(_) => unreachable!("spin mixing is never diagonal"),
        };
        let mut mean = 0.0;
        let mut m2 = 0.0;
        let mut dmean = 0.0;
        for k in 0..dim {
            let w = psi[k].norm_sqr();
            mean += pairs[k] * w;
            m2 += pairs[k] * pairs[k] * w;
            dmean += 2.0 * pairs[k] * (psi[k].conj() * dpsi[k]).re;
        }
        out.push(Su11Point { theta, mean_pairs: mean, var_pairs: m2 - mean * mean, dmean_dtheta: dmean });
    }
    Ok(out)
}
