//! Closed-form results used as an oracle for the numerics.
//!
//! Everything here is a scalar function of its inputs. Nothing in this module
//! builds an operator or a state vector.

use crate::error::{invalid, Result};
use crate::linalg::C64;

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        invalid(msg())
    }
}

fn finite(x: f64, name: &str) -> Result<()> {
    require(x.is_finite(), || format!("{name} must be finite, got {x}"))
}

/// One-axis twisting of the x-polarized coherent state, H = χ J_z².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OatClosedForms {
    pub n: usize,
    pub chi_t: f64,
    /// 1 − cos^{N−2}(2χt)
    pub a: f64,
    /// 4 sin(χt) cos^{N−2}(χt)
    pub b: f64,
    pub xi_r2: f64,
    /// Largest QFI over directions perpendicular to the mean spin, divided by N.
    pub fq_over_n: f64,
    /// QFI for rotations about the mean spin axis x, divided by N.
    pub fq_x_over_n: f64,
    /// ⟨J_x⟩ / (N/2)
    pub contrast: f64,
    /// Squeezing angle, measured from the z axis toward y.
    pub delta: f64,
}

pub fn oat_closed_forms(n: usize, chi_t: f64) -> Result<OatClosedForms> {
    require(n >= 2, || format!("one-axis twisting needs N >= 2, got {n}"))?;
    finite(chi_t, "chi_t")?;
    let nf = n as f64;
    let p = (n - 2) as i32;
    let a = 1.0 - (2.0 * chi_t).cos().powi(p);
    let b = 4.0 * chi_t.sin() * chi_t.cos().powi(p);
    let root = a.hypot(b);
    // A − √(A²+B²) cancels badly for small χt
    let minus = if a > 0.0 { -b * b / (a + root) } else { a - root };
    let contrast = chi_t.cos().powi(n as i32 - 1);
    let denom = 4.0 * contrast * contrast;
    let xi_r2 = if denom > 0.0 {
        (4.0 + (nf - 1.0) * minus) / denom
    } else {
        f64::INFINITY
    };
    let fq_over_n = 1.0 + (nf - 1.0) * (a + root) / 4.0;
    let fq_x_over_n = nf * (1.0 - contrast * contrast) - (nf - 1.0) * a / 2.0;
    let delta = 0.5 * b.atan2(a);
    Ok(OatClosedForms {
        n,
        chi_t,
        a,
        b,
        xi_r2,
        fq_over_n,
        fq_x_over_n,
        contrast,
        delta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BjjRegime {
    Rabi,
    Josephson,
    /// Λ between the Josephson and Fock cutoffs; no closed form.
    Crossover,
    Fock,
    Attractive,
    /// −2 ≤ Λ ≤ −1, between the attractive and ordered asymptotics.
    AttractiveCrossover,
    Ordered,
}

impl BjjRegime {
    pub fn name(self) -> &'static str {
        match self {
            BjjRegime::Rabi => "rabi",
            BjjRegime::Josephson => "josephson",
            BjjRegime::Crossover => "crossover",
            BjjRegime::Fock => "fock",
            BjjRegime::Attractive => "attractive",
            BjjRegime::AttractiveCrossover => "attractive-crossover",
            BjjRegime::Ordered => "ordered",
        }
    }

    fn classify(n: f64, lambda: f64) -> Self {
        let n2 = n * n;
        if lambda >= 0.0 {
            if lambda < 0.1 {
                BjjRegime::Rabi
            } else if lambda < n2 / 10.0 {
                BjjRegime::Josephson
            } else if lambda < 10.0 * n2 {
                BjjRegime::Crossover
            } else {
                BjjRegime::Fock
            }
        } else if lambda > -1.0 {
            BjjRegime::Attractive
        } else if lambda >= -2.0 {
            BjjRegime::AttractiveCrossover
        } else {
            BjjRegime::Ordered
        }
    }
}

/// Asymptotic ground-state predictions for the two-mode Josephson junction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BjjPrediction {
    pub regime: BjjRegime,
    pub xi_r2: Option<f64>,
    pub fq_over_n: Option<f64>,
}

pub fn rabi_xi_r2(lambda: f64) -> f64 {
    1.0 / (1.0 + lambda).sqrt()
}

pub fn attractive_xi_r2(lambda: f64) -> f64 {
    (1.0 + lambda).sqrt()
}

pub fn ordered_fq_over_n(n: usize, lambda: f64) -> f64 {
    n as f64 * (1.0 - 1.0 / (lambda * lambda))
}

pub fn fock_xi_r2(n: usize) -> f64 {
    let nf = n as f64;
    if n % 2 == 0 {
        2.0 / (nf + 2.0)
    } else {
        4.0 * nf / (nf * (nf + 2.0) + 1.0)
    }
}

pub fn fock_fq_over_n(n: usize) -> f64 {
    let nf = n as f64;
    if n % 2 == 0 {
        (nf + 2.0) / 2.0
    } else {
        (nf * nf - 1.0) / (2.0 * nf) + 1.0
    }
}

pub fn bjj_regime_predictions(n: usize, lambda: f64) -> Result<BjjPrediction> {
    require(n >= 1, || "N must be positive".into())?;
    finite(lambda, "lambda")?;
    let regime = BjjRegime::classify(n as f64, lambda);
    let (xi_r2, fq) = match regime {
        BjjRegime::Rabi => {
            let x = rabi_xi_r2(lambda);
            (Some(x), Some(1.0 / x))
        }
        BjjRegime::Josephson => {
            let s = lambda.sqrt();
            (Some(1.0 / s), Some(s))
        }
        BjjRegime::Fock => (Some(fock_xi_r2(n)), Some(fock_fq_over_n(n))),
        BjjRegime::Attractive => {
            let x = attractive_xi_r2(lambda);
            (Some(x), Some(1.0 / x))
        }
        BjjRegime::Ordered => (None, Some(ordered_fq_over_n(n, lambda))),
        BjjRegime::Crossover | BjjRegime::AttractiveCrossover => (None, None),
    };
    Ok(BjjPrediction {
        regime,
        xi_r2,
        fq_over_n: fq,
    })
}

/// Benchmark values for the standard families of states at fixed N.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateBenchmarks {
    pub n: usize,
    /// Number of repetitions entering phase variances.
    pub nu: f64,
}

pub fn state_benchmarks(n: usize) -> Result<StateBenchmarks> {
    require(n >= 1, || "N must be positive".into())?;
    Ok(StateBenchmarks { n, nu: 1.0 })
}

impl StateBenchmarks {
    pub fn with_nu(self, nu: f64) -> Result<Self> {
        require(nu > 0.0 && nu.is_finite(), || format!("nu must be positive, got {nu}"))?;
        Ok(StateBenchmarks { nu, ..self })
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn coherent_qfi(&self) -> f64 {
        self.nf()
    }

    /// QFI of the Dicke state |m⟩ for any rotation axis in the x-y plane.
    pub fn dicke_qfi(&self, m: f64) -> Result<f64> {
        let j = self.nf() / 2.0;
        let twice = 2.0 * m;
        require(
            m.abs() <= j && (twice - twice.round()).abs() < 1e-9 && ((twice.round() + self.nf()) as i64) % 2 == 0,
            || format!("m = {m} is not a Dicke label for N = {}", self.n),
        )?;
        let n = self.nf();
        Ok(n * n / 2.0 - 2.0 * m * m + n)
    }

    pub fn twin_fock_qfi(&self) -> f64 {
        let n = self.nf();
        n * n / 2.0 + n
    }

    /// Method-of-moments phase variance for the twin-Fock state read out via
    /// ⟨J_z²⟩ after a rotation by θ about an equatorial axis.
    ///
    /// With L = j(j+1) the exact error-propagation result is
    /// (1/ν)[1/(2L) + tan²θ (L − 2)/(8L)], which at θ = 0 equals 2/(ν(N² + 2N)).
    pub fn twin_fock_phase_var(&self, theta: f64) -> Result<f64> {
        finite(theta, "theta")?;
        require(self.n % 2 == 0, || format!("twin-Fock state needs even N, got {}", self.n))?;
        let j = self.nf() / 2.0;
        let l = j * (j + 1.0);
        let t = theta.tan();
        Ok((1.0 / (2.0 * l) + t * t * (l - 2.0) / (8.0 * l)) / self.nu)
    }

    pub fn noon_qfi(&self) -> f64 {
        self.nf() * self.nf()
    }

    /// W state |N−1⟩_a|1⟩_b for rotations in the x-y plane.
    pub fn w_qfi(&self) -> f64 {
        3.0 * self.nf() - 2.0
    }

    /// |⟨ψ| e^{−iθJ_n} |ψ⟩| for a coherent state ψ and n perpendicular to its direction.
    pub fn css_overlap(&self, theta: f64) -> f64 {
        (theta / 2.0).cos().abs().powi(self.n as i32)
    }

    pub fn css_bures2(&self, theta: f64) -> f64 {
        1.0 - self.css_overlap(theta)
    }

    /// Lowest Wineland parameter allowed at this N.
    pub fn xi_r_floor(&self) -> f64 {
        2.0 / (self.nf() + 2.0)
    }

    /// QFI for J_y of an arbitrary state in mode a (mean population N_a) times
    /// a Fock state of N/2 particles in mode b.
    pub fn fock_input_qfi(&self, n_a: f64) -> Result<f64> {
        require(n_a >= 0.0 && n_a.is_finite(), || format!("N_a must be non-negative, got {n_a}"))?;
        let n = self.nf();
        Ok(n * n_a + n / 2.0 + n_a)
    }

    pub fn standard_quantum_limit(&self) -> f64 {
        1.0 / (self.nu * self.nf()).sqrt()
    }

    pub fn heisenberg_limit(&self) -> f64 {
        1.0 / (self.nf() * self.nu.sqrt())
    }
}

pub fn quantum_cramer_rao(nu: f64, fisher: f64) -> f64 {
    1.0 / (nu * fisher).sqrt()
}

/// Atomic moments after a QND light measurement with outcome m_y.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QndConditional {
    pub mean_jz: f64,
    pub var_jz: f64,
    /// Unconditional variance of the outgoing light spin S_y.
    pub var_sy: f64,
}

pub fn qnd_conditional(m_y: f64, kappa: f64, n_atoms: f64, n_photons: f64) -> Result<QndConditional> {
    finite(m_y, "m_y")?;
    finite(kappa, "kappa")?;
    require(n_atoms > 0.0 && n_photons > 0.0, || "atom and photon numbers must be positive".into())?;
    let k2 = kappa * kappa;
    Ok(QndConditional {
        mean_jz: kappa / (1.0 + k2) * (n_atoms / n_photons).sqrt() * m_y,
        var_jz: n_atoms / (4.0 * (1.0 + k2)),
        var_sy: n_photons * (1.0 + k2) / 4.0,
    })
}

/// Coupling strength κ from atom number, photon number and the single-pair
/// coupling k.
pub fn qnd_kappa(n_atoms: f64, n_photons: f64, k: f64) -> f64 {
    (n_atoms * n_photons * k * k / 4.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Photon {
    /// Vertical polarization: even superposition of the two coherent states.
    V,
    /// Horizontal polarization: odd superposition.
    H,
}

/// F_Q[ψ_{h,v}, J_y]/N for the photon-heralded superposition of coherent
/// states at azimuths ±φ on the equator.
pub fn heralded_qfi_over_n(n: usize, phi: f64, photon: Photon) -> Result<f64> {
    require(n >= 1, || "N must be positive".into())?;
    finite(phi, "phi")?;
    let nf = n as f64;
    let s2 = phi.sin().powi(2);
    let c = phi.cos();
    let (cn, one_minus_cn) = if c > 0.0 {
        let half = (phi / 2.0).sin();
        let ln_c = (-2.0 * half * half).ln_1p();
        ((nf * ln_c).exp(), -(nf * ln_c).exp_m1())
    } else {
        let cn = c.powi(n as i32);
        (cn, 1.0 - cn)
    };
    match photon {
        Photon::V => {
            let d = 1.0 + cn;
            require(d > 1e-300, || format!("vertical-photon state vanishes at phi = {phi}"))?;
            Ok((1.0 + (nf - 1.0) * s2 + cn) / d)
        }
        Photon::H => {
            if one_minus_cn == 0.0 {
                // φ → 0 limit of (N−1) sin²φ / (1 − cos^N φ)
                return Ok(1.0 + 2.0 * (nf - 1.0) / nf);
            }
            require(one_minus_cn > 1e-300, || format!("horizontal-photon state vanishes at phi = {phi}"))?;
            Ok(1.0 + (nf - 1.0) * s2 / one_minus_cn)
        }
    }
}

/// Classical Fisher information of a two-outcome parity readout with
/// P(±|θ) = (1 ± V cos Nθ)/2.
pub fn ghz_parity_fisher(n: usize, visibility: f64, theta: f64) -> Result<f64> {
    require((0.0..=1.0).contains(&visibility), || format!("visibility must lie in [0, 1], got {visibility}"))?;
    finite(theta, "theta")?;
    let nf = n as f64;
    let v2 = visibility * visibility;
    if visibility == 1.0 {
        return Ok(nf * nf);
    }
    let x = nf * theta;
    Ok(v2 * nf * nf * x.sin().powi(2) / (1.0 - v2 * x.cos().powi(2)))
}

/// Phase sensitivity of the undepleted-pump SU(1,1) interferometer with 𝒩
/// transferred particles.
pub fn yurke_delta_theta(pairs: f64, theta: f64) -> Result<f64> {
    require(pairs >= 0.0 && pairs.is_finite(), || format!("transferred population must be non-negative, got {pairs}"))?;
    finite(theta, "theta")?;
    let g = pairs * (pairs + 2.0);
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    Ok(((g * c * c + 1.0) / (g * s * s)).sqrt())
}

/// Var[X_{+1}(φ) ± X_{−1}(φ)] for the two-mode squeezed vacuum.
pub fn tmsv_quadrature_variances(r: f64, phi: f64) -> Result<(f64, f64)> {
    require(r >= 0.0 && r.is_finite(), || format!("squeezing r must be non-negative, got {r}"))?;
    finite(phi, "phi")?;
    let c = (2.0 * r).cosh();
    let s = (2.0 * phi).sin() * (2.0 * r).sinh();
    Ok((c - s, c + s))
}

pub fn tmsv_side_population(r: f64) -> f64 {
    r.sinh().powi(2)
}

/// Wineland parameter from a quadrature variance in the Holstein-Primakoff limit.
pub fn xi_r2_from_quadrature(var_q: f64) -> f64 {
    2.0 * var_q
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pole {
    PlusX,
    MinusX,
}

/// Frozen-spin (Var J_z, Var J_y) for twist-and-turn dynamics starting from a
/// coherent state at ±x, H = −ΩJ_x + (ΛΩ/N)J_z².
pub fn frozen_spin_variances(n: f64, omega: f64, lambda: f64, t: f64, pole: Pole) -> Result<(f64, f64)> {
    require(n > 0.0, || "N must be positive".into())?;
    require(omega > 0.0 && omega.is_finite(), || format!("Omega must be positive, got {omega}"))?;
    finite(lambda, "lambda")?;
    finite(t, "t")?;
    let ratio = match pole {
        Pole::PlusX => 1.0 + lambda,
        Pole::MinusX => 1.0 - lambda,
    };
    require(ratio > 0.0, || format!("frozen-spin oscillation is unstable at Lambda = {lambda}"))?;
    let w = omega * ratio.sqrt();
    let (s, c) = (w * t).sin_cos();
    let r2 = ratio;
    Ok((
        n / 4.0 * (c * c + s * s / r2),
        n / 4.0 * (c * c + r2 * s * s),
    ))
}

/// Bogoliubov treatment of spin mixing out of an m_F = 0 condensate of N_0
/// atoms: α = q + λ(2N_0 − 1), β = 2λN_0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bogoliubov {
    pub alpha: f64,
    pub beta: f64,
}

pub fn bogoliubov(n0: f64, q: f64, lambda: f64) -> Result<Bogoliubov> {
    require(n0 >= 0.0 && n0.is_finite(), || format!("N_0 must be non-negative, got {n0}"))?;
    finite(q, "q")?;
    finite(lambda, "lambda")?;
    Ok(Bogoliubov {
        alpha: q + lambda * (2.0 * n0 - 1.0),
        beta: 2.0 * lambda * n0,
    })
}

impl Bogoliubov {
    /// True when α² < β², where the side-mode populations grow exponentially.
    pub fn unstable(&self) -> bool {
        self.alpha * self.alpha < self.beta * self.beta
    }

    /// (cos(t/τ), τ sin(t/τ)) with τ = 1/√(α² − β²), continued to
    /// (cosh, sinh) when α² < β².
    fn trig(&self, t: f64) -> (f64, f64) {
        let d = self.alpha * self.alpha - self.beta * self.beta;
        if d > 0.0 {
            let w = d.sqrt();
            ((w * t).cos(), (w * t).sin() / w)
        } else if d < 0.0 {
            let k = (-d).sqrt();
            ((k * t).cosh(), (k * t).sinh() / k)
        } else {
            (1.0, t)
        }
    }

    /// ⟨N_{±1}⟩(t) starting from empty side modes.
    pub fn side_population(&self, t: f64) -> f64 {
        let (_, s) = self.trig(t);
        self.beta * self.beta * s * s
    }

    /// Amplitudes c_n of |n⟩_{+1}|n⟩_{−1}, n = 0..n_max, with the pump phase set to zero.
    pub fn amplitudes(&self, t: f64, n_max: usize) -> Vec<C64> {
        let (c, s) = self.trig(t);
        let num = C64::new(0.0, -self.beta * s);
        let den = C64::new(c, self.alpha * s);
        let ratio = num / den;
        let mut out = Vec::with_capacity(n_max + 1);
        let mut term = den.inv();
        for _ in 0..=n_max {
            out.push(term);
            term *= ratio;
        }
        out
    }

    /// Squeezing parameter r for which the resonant dynamics (α = 0) produce the two-mode squeezed vacuum.
    pub fn resonant_r(&self, t: f64) -> f64 {
        self.beta.abs() * t
    }
}

/// Angle grid helper: `count` points spanning [start, stop] inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2 as HALF_PI, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn oat_trivial_point() {
        let r = oat_closed_forms(100, 0.0).unwrap();
        assert!(close(r.xi_r2, 1.0, 1e-15));
        assert!(close(r.fq_over_n, 1.0, 1e-15));
        assert_eq!(r.contrast, 1.0);
    }

    #[test]
    fn oat_plateau() {
        let r = oat_closed_forms(100, 0.5).unwrap();
        assert!(close(r.fq_over_n * 100.0, 5050.0, 1e-9));
    }

    #[test]
    fn oat_small_angle_expansion() {
        // A ≈ 2(N−2)x², B ≈ 4x: ξ_R² ≈ 1 − (N−1)x + ... for small x
        let n = 1000;
        let x = 1e-7;
        let r = oat_closed_forms(n, x).unwrap();
        assert!((r.xi_r2 - (1.0 - (n as f64 - 1.0) * x)).abs() < 1e-8);
    }

    #[test]
    fn oat_rejects_tiny_n() {
        assert!(oat_closed_forms(1, 0.1).is_err());
    }

    #[test]
    fn bjj_prediction_examples() {
        let p = bjj_regime_predictions(100, 0.0).unwrap();
        assert_eq!(p.regime, BjjRegime::Rabi);
        assert_eq!(p.xi_r2, Some(1.0));
        let p = bjj_regime_predictions(10_000, 100.0).unwrap();
        assert_eq!(p.regime, BjjRegime::Josephson);
        assert!(close(p.fq_over_n.unwrap(), 10.0, 1e-15));
        let p = bjj_regime_predictions(100, -5.0).unwrap();
        assert_eq!(p.regime, BjjRegime::Ordered);
        assert!(close(p.fq_over_n.unwrap(), 96.0, 1e-15));
        let p = bjj_regime_predictions(10, 5000.0).unwrap();
        assert_eq!(p.regime, BjjRegime::Fock);
        assert!(close(p.xi_r2.unwrap(), 2.0 / 12.0, 1e-15));
        assert_eq!(bjj_regime_predictions(100, 5000.0).unwrap().regime, BjjRegime::Crossover);
        assert_eq!(bjj_regime_predictions(100, -1.5).unwrap().regime, BjjRegime::AttractiveCrossover);
    }

    #[test]
    fn rabi_and_attractive_meet_at_zero() {
        assert_eq!(rabi_xi_r2(0.0), attractive_xi_r2(0.0));
        let eps = 1e-9;
        assert!((rabi_xi_r2(eps) - attractive_xi_r2(-eps)).abs() < 1e-8);
    }

    #[test]
    fn odd_fock_formulas_are_consistent() {
        // the odd-N state has Var J_z = 1/4 and <J_x> = (N+1)/4
        for n in [3usize, 11, 101] {
            let nf = n as f64;
            assert!(close(fock_xi_r2(n), nf * 0.25 / ((nf + 1.0) / 4.0).powi(2), 1e-14));
            assert!(close(fock_fq_over_n(n), (nf * nf + 2.0 * nf - 1.0) / (2.0 * nf), 1e-14));
        }
    }

    #[test]
    fn benchmark_examples() {
        let b = state_benchmarks(100).unwrap();
        assert!(close(b.dicke_qfi(0.0).unwrap(), 5100.0, 1e-15));
        assert_eq!(b.dicke_qfi(50.0).unwrap(), 100.0);
        assert!(b.dicke_qfi(0.5).is_err());
        assert!(close(b.fock_input_qfi(50.0).unwrap(), 5100.0, 1e-15));
        assert_eq!(state_benchmarks(2).unwrap().xi_r_floor(), 0.5);
        assert_eq!(b.twin_fock_qfi(), b.dicke_qfi(0.0).unwrap());
        let nu = 10.0;
        let b = b.with_nu(nu).unwrap();
        let want = 2.0 / (nu * (100.0 * 100.0 + 200.0));
        assert!(close(b.twin_fock_phase_var(0.0).unwrap(), want, 1e-14));
        assert!(b.twin_fock_phase_var(0.1).unwrap() > want);
    }

    #[test]
    fn css_bures_small_angle() {
        let b = state_benchmarks(40).unwrap();
        let th = 1e-3;
        assert!(close(b.css_bures2(th), 40.0 * th * th / 8.0, 1e-5));
    }

    #[test]
    fn qnd_without_coupling() {
        let q = qnd_conditional(3.0, 0.0, 1000.0, 1e6).unwrap();
        assert_eq!(q.var_jz, 250.0);
        assert_eq!(q.mean_jz, 0.0);
    }

    #[test]
    fn heralded_limits() {
        let n = 100_000;
        let h = heralded_qfi_over_n(n, 1e-9, Photon::H).unwrap();
        assert!((h - 3.0).abs() < 1e-3);
        let v = heralded_qfi_over_n(n, 1e-9, Photon::V).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
        // 1 + Nφ²/2 and 3 + Nφ²/2 at small Nφ²
        let phi = 1e-4;
        let h = heralded_qfi_over_n(n, phi, Photon::H).unwrap();
        assert!((h - (3.0 + n as f64 * phi * phi / 2.0)).abs() < 2e-3);
        // the two coincide once cos^N φ is negligible
        let h = heralded_qfi_over_n(200, 1.0, Photon::H).unwrap();
        let v = heralded_qfi_over_n(200, 1.0, Photon::V).unwrap();
        assert!(close(h, v, 1e-12));
        assert!(heralded_qfi_over_n(3, PI, Photon::V).is_err());
    }

    #[test]
    fn parity_fisher_peak() {
        let n = 7;
        let th = PI / (2.0 * n as f64);
        assert!(close(ghz_parity_fisher(n, 1.0, th).unwrap(), 49.0, 1e-14));
        assert!(close(ghz_parity_fisher(n, 0.6, th).unwrap(), 0.36 * 49.0, 1e-14));
        assert!(ghz_parity_fisher(n, 1.2, th).is_err());
    }

    #[test]
    fn yurke_dark_fringe() {
        let p = 10.0;
        assert!(close(yurke_delta_theta(p, PI).unwrap(), 1.0 / (p * (p + 2.0)).sqrt(), 1e-14));
    }

    #[test]
    fn tmsv_extremes() {
        let r = 0.7;
        let (plus, minus) = tmsv_quadrature_variances(r, PI / 4.0).unwrap();
        assert!(close(plus, (-2.0 * r).exp(), 1e-14));
        assert!(close(minus, (2.0 * r).exp(), 1e-14));
    }

    #[test]
    fn frozen_spin_extremes() {
        let (lam, om): (f64, f64) = (0.5, 1.0);
        let w = om * (1.0 + lam).sqrt();
        let (vz, vy) = frozen_spin_variances(100.0, om, lam, PI / (2.0 * w), Pole::PlusX).unwrap();
        assert!(close(vz / 25.0, 1.0 / (1.0 + lam), 1e-14));
        assert!(close(vy / 25.0, 1.0 + lam, 1e-14));
        assert!(frozen_spin_variances(100.0, om, 1.5, 1.0, Pole::MinusX).is_err());
    }

    #[test]
    fn bogoliubov_branches_and_norm() {
        for (q, lam) in [(0.0, -1.0), (500.0, 1.0), (-3.0, 0.01), (2.0 * 1000.0 - 1.0, -1.0)] {
            let b = bogoliubov(1000.0, q, lam).unwrap();
            let t = 0.002;
            let amps = b.amplitudes(t, 40_000);
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let mean: f64 = amps.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-10, "norm {norm}");
            assert!(close(mean, b.side_population(t), 1e-9));
        }
    }

    #[test]
    fn resonance_reproduces_tmsv() {
        // α = 0 → ⟨N⟩ = sinh² r with r = |β| t
        let n0 = 1000.0;
        let b = bogoliubov(n0, 2.0 * n0 - 1.0, -1.0).unwrap();
        assert!(b.alpha.abs() < 1e-12);
        let t = 1e-3;
        assert!(close(b.side_population(t), tmsv_side_population(b.resonant_r(t)), 1e-12));
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, HALF_PI, 7);
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[6], HALF_PI);
    }
}
