//! Quantum Fisher information, squeezing parameters, entanglement and Bell
//! witnesses, EPR criteria, collective dephasing and sensitivity floors.

use nalgebra::{Matrix2, Matrix3};

use crate::error::{invalid, Result};
use crate::linalg::{c, cis, CMatrix};
use crate::spinspace::{
    collective_operator, cross3, dot3, jx, jy, jz, same_space, spin_moments, Axis, HermitianOperator, MixedState,
    SpinMoments, SpinState,
};

/// Pairs of eigenvalues with `q_k + q_l` below this fraction of the trace are skipped.
pub const QFI_EIGEN_CUTOFF: f64 = 1e-12;

/// Mean spin below this fraction of N/2 counts as zero: the mean-spin axis is undefined.
pub const MEAN_SPIN_FLOOR: f64 = 1e-6;

pub fn qfi(state: &dyn SpinState, generator: &HermitianOperator) -> Result<f64> {
    same_space(state.space(), generator.space())?;
    if let Some(ket) = state.as_ket() {
        let hpsi = generator.apply(ket.amplitudes());
        let mean = ket.amplitudes().dotc(&hpsi).re;
        return Ok((4.0 * (hpsi.norm_squared() - mean * mean)).max(0.0));
    }
    let (q, v) = hermitian_eigh_of(state);
    let h = v.adjoint() * generator.matrix() * &v;
    Ok(spectral_qfi(&q, |k, l| h[(l, k)].norm_sqr()).max(0.0))
}

fn hermitian_eigh_of(state: &dyn SpinState) -> (Vec<f64>, CMatrix) {
    crate::linalg::hermitian_eigh(&state.density())
}

/// `2 sum_{k,l} (q_k - q_l)^2/(q_k + q_l) w(k, l)` over pairs above the cutoff.
fn spectral_qfi(q: &[f64], w: impl Fn(usize, usize) -> f64) -> f64 {
    let tr: f64 = q.iter().sum();
    let cut = QFI_EIGEN_CUTOFF * tr;
    let mut f = 0.0;
    for k in 0..q.len() {
        for l in 0..q.len() {
            let s = q[k] + q[l];
            if s > cut && k != l {
                let d = q[k] - q[l];
                f += 2.0 * d * d / s * w(k, l);
            }
        }
    }
    f
}

/// The 3x3 matrix whose quadratic form in `n` is `F_Q[rho, J_n]`.
pub fn gamma_q(state: &dyn SpinState) -> [[f64; 3]; 3] {
    if state.as_ket().is_some() {
        let m = spin_moments(state);
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = 4.0 * m.cov[i][j];
            }
        }
        return g;
    }
    let s = state.space();
    let (q, v) = hermitian_eigh_of(state);
    let ops = [jx(s), jy(s), jz(s)];
    let rot: Vec<CMatrix> = ops.iter().map(|o| v.adjoint() * o.matrix() * &v).collect();
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let val = spectral_qfi(&q, |k, l| (rot[i][(k, l)] * rot[j][(l, k)]).re);
            g[i][j] = val;
            g[j][i] = val;
        }
    }
    g
}

/// Rotation axis maximizing `F_Q[rho, J_n]`: top eigenpair of `gamma_q`.
pub fn optimal_generator_direction(state: &dyn SpinState) -> (Axis, f64) {
    let g = gamma_q(state);
    let m = Matrix3::from_fn(|i, j| g[i][j]);
    let eig = m.symmetric_eigen();
    let mut best = 0;
    for i in 1..3 {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let v = eig.eigenvectors.column(best);
    let axis = Axis::from_direction([v[0], v[1], v[2]]).unwrap_or(Axis::Z);
    (axis, eig.eigenvalues[best].max(0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SqueezingReport {
    /// Wineland parameter; `None` when the mean spin vanishes.
    pub xi_r2: Option<f64>,
    /// Kitagawa-Ueda parameter; `None` without a mean-spin axis.
    pub xi_s2: Option<f64>,
    /// `4 Var(J_n)/N` along the minimizing perpendicular axis.
    pub xi_n2: Option<f64>,
    /// Dicke-state parameter with `n_1 = z`; `None` if its denominator vanishes.
    pub xi_d2: Option<f64>,
    pub squeezing_axis: Option<Axis>,
    pub mean_axis: Option<Axis>,
    /// `2 |<J_s>| / N`
    pub contrast: f64,
}

pub fn squeezing(state: &dyn SpinState, mean_axis: Option<Axis>) -> Result<SqueezingReport> {
    let n = state.space().n_particles() as f64;
    let m = spin_moments(state);
    let mean_len = dot3(&m.mean, &m.mean).sqrt();
    let s = match mean_axis {
        Some(a) => Some(a),
        None if mean_len > MEAN_SPIN_FLOOR * n / 2.0 => Some(Axis::from_direction(m.mean)?),
        None => None,
    };
    let xi_d2 = xi_d2(&m, n, &Axis::Z);
    let Some(s) = s else {
        return Ok(SqueezingReport {
            xi_r2: None,
            xi_s2: None,
            xi_n2: None,
            xi_d2,
            squeezing_axis: None,
            mean_axis: None,
            contrast: 2.0 * mean_len / n,
        });
    };
    let js = m.mean_along(&s);
    let (e1, e2) = s.perpendicular_frame();
    let a = m.var_along(&e1);
    let b = m.var_along(&e2);
    let off = crate::spinspace::quad(&m.cov, &e1.vec(), &e2.vec());
    let eig = Matrix2::new(a, off, off, b).symmetric_eigen();
    let (imin, lmin) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, eig.eigenvalues[0]) } else { (1, eig.eigenvalues[1]) };
    let lmin = lmin.max(0.0);
    let w = eig.eigenvectors.column(imin);
    let [u, v] = [e1.vec(), e2.vec()];
    let sq = Axis::from_direction([w[0] * u[0] + w[1] * v[0], w[0] * u[1] + w[1] * v[1], w[0] * u[2] + w[1] * v[2]])?;
    let xi_s2 = lmin / (n / 4.0);
    let defined_r = js.abs() > MEAN_SPIN_FLOOR * n / 2.0;
    Ok(SqueezingReport {
        xi_r2: defined_r.then(|| n * lmin / (js * js)),
        xi_s2: Some(xi_s2),
        xi_n2: Some(4.0 * lmin / n),
        xi_d2,
        squeezing_axis: Some(sq),
        mean_axis: Some(s),
        contrast: 2.0 * js.abs() / n,
    })
}

/// Number squeezing `4 Var(J_n)/N` along any axis.
pub fn xi_n2_along(state: &dyn SpinState, axis: &Axis) -> f64 {
    let m = spin_moments(state);
    4.0 * m.var_along(axis) / state.space().n_particles() as f64
}

fn xi_d2(m: &SpinMoments, n: f64, n1: &Axis) -> Option<f64> {
    let denom = m.total_square() - n / 2.0 - m.mean_along(n1).powi(2);
    let var = m.var_along(n1).max(0.0);
    if denom.abs() <= 1e-12 * n * n {
        None
    } else {
        Some(n * var / denom)
    }
}

/// `xi_D^2` with a caller-chosen first axis.
pub fn xi_d2_along(state: &dyn SpinState, n1: &Axis) -> Option<f64> {
    xi_d2(&spin_moments(state), state.space().n_particles() as f64, n1)
}

/// Residuals follow `lhs - rhs`; a negative value is a violation.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub ineq_a: f64,
    pub ineq_b: f64,
    pub ineq_c: f64,
    pub ineq_d: f64,
    /// `lhs - rhs` of the pairwise criterion; negative means pairwise entanglement.
    pub pairwise: f64,
    /// Bell witness with the two given (perpendicular) axes.
    pub bell_w: f64,
    /// Bell witness minimized over tilting the second axis toward the first.
    pub bell_w_min: f64,
    /// Tilt angle between the axes at the minimum.
    pub bell_angle: f64,
    /// `<J_n1^2>/(N/4) - (1 - sqrt(1 - c^2))/2`.
    pub bell_criterion: f64,
    /// `<J_n1^2>/(N/4) - (1 - c / artanh c)`.
    pub bell_criterion_tanh: f64,
    pub entangled: bool,
    pub pairwise_entangled: bool,
    pub bell_correlated: bool,
}

/// Relative slack before a witness residual counts as violated.
pub const WITNESS_TOL: f64 = 1e-10;

impl WitnessReport {
    pub fn violations(&self, n: usize) -> [bool; 4] {
        let eps = WITNESS_TOL * (n * n) as f64;
        [self.ineq_a, self.ineq_b, self.ineq_c, self.ineq_d].map(|x| x < -eps)
    }
}

pub fn witnesses(state: &dyn SpinState, n1: &Axis, n2: &Axis, n3: &Axis) -> Result<WitnessReport> {
    let tol = 1e-9;
    if n1.dot(n2).abs() > tol || n1.dot(n3).abs() > tol || n2.dot(n3).abs() > tol {
        return invalid("witness axes must be mutually orthogonal");
    }
    let n = state.space().n_particles() as f64;
    let m = spin_moments(state);
    let mean = |a: &Axis| m.mean_along(a);
    let sq = |a: &Axis| m.second_along(a, a);
    let var = |a: &Axis| m.var_along(a);

    // saturated inequalities must not be flagged through roundoff
    let eps2 = WITNESS_TOL * n * n;
    let ineq_a = n * var(n1) - (mean(n2).powi(2) + mean(n3).powi(2));
    let ineq_b = var(n1) + var(n2) + var(n3) - n / 2.0;
    let ineq_c = (n - 1.0) * var(n1) - (sq(n2) + sq(n3) - n / 2.0);
    let ineq_d = (n - 1.0) * (var(n1) + var(n2)) - (sq(n3) + n * (n - 2.0) / 4.0);
    let pairwise = (sq(n1) + n * (n - 2.0) / 4.0).powi(2)
        - ((sq(n2) + sq(n3) - n / 2.0).powi(2) + (n - 1.0).powi(2) * mean(n1).powi(2));

    // tilt n2 toward n1: b(a) = cos(a) n1 + sin(a) n2, with n1 . b = cos(a)
    let bell_at = |alpha: f64| {
        let (ca, sa) = (alpha.cos(), alpha.sin());
        let jb = ca * mean(n1) + sa * mean(n2);
        -jb.abs() / (n / 2.0) + ca * ca * sq(n1) / (n / 4.0) + 1.0 - ca * ca
    };
    let bell_w = 1.0 - mean(n2).abs() / (n / 2.0);
    let (bell_angle, bell_w_min) = minimize_periodic(bell_at, std::f64::consts::PI);

    let cn = (mean(n2) / (n / 2.0)).abs().min(1.0);
    let x1 = sq(n1) / (n / 4.0);
    let bell_criterion = x1 - 0.5 * (1.0 - (1.0 - cn * cn).max(0.0).sqrt());
    let tanh_rhs = if cn < 1e-8 {
        cn * cn / 3.0
    } else if cn >= 1.0 {
        1.0
    } else {
        1.0 - cn / cn.atanh()
    };
    let bell_criterion_tanh = x1 - tanh_rhs;

    Ok(WitnessReport {
        ineq_a,
        ineq_b,
        ineq_c,
        ineq_d,
        pairwise,
        bell_w,
        bell_w_min: bell_w_min.min(bell_w),
        bell_angle,
        bell_criterion,
        bell_criterion_tanh,
        entangled: [ineq_a, ineq_b, ineq_c, ineq_d].iter().any(|x| *x < -eps2),
        pairwise_entangled: pairwise < -eps2 * eps2 / WITNESS_TOL,
        bell_correlated: [bell_w_min.min(bell_w), bell_criterion, bell_criterion_tanh]
            .iter()
            .any(|x| *x < -WITNESS_TOL),
    })
}

/// Grid scan over one period followed by golden-section refinement.
fn minimize_periodic(f: impl Fn(f64) -> f64, period: f64) -> (f64, f64) {
    let steps = 4000;
    let h = period / steps as f64;
    let mut best = (0.0, f(0.0));
    for i in 1..steps {
        let x = i as f64 * h;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = b - g * (b - a);
        let x2 = a + g * (b - a);
        if f(x1) < f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x);
    if v < best.1 {
        (x, v)
    } else {
        best
    }
}

/// Largest certified entanglement depth: the smallest `k` with `F <= s k^2 + r^2`,
/// `s = floor(N/k)`, `r = N - s k`. Returns 1 for `F <= N`.
pub fn entanglement_depth_bound(f: f64, n: usize) -> Result<usize> {
    if n == 0 {
        return invalid("particle number must be at least 1");
    }
    let nf = n as f64;
    if !f.is_finite() || f < 0.0 {
        return invalid("Fisher information must be finite and nonnegative");
    }
    if f > nf * nf * (1.0 + 1e-12) {
        return invalid(format!("F = {f} exceeds the Heisenberg bound N^2 = {}", nf * nf));
    }
    // bound(k) increases with k, so bisect on it
    let (mut lo, mut hi) = (1usize, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        // relative slack so that F = N from roundoff stays 1-producible
        if f <= producibility_bound(mid, n) * (1.0 + 1e-12) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Maximal QFI of a k-producible state of N particles.
pub fn producibility_bound(k: usize, n: usize) -> f64 {
    let s = n / k;
    let r = n - s * k;
    (s * k * k + r * r) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EprFlags {
    pub mode_entangled: bool,
    pub epr: bool,
}

pub fn epr_criteria(vx_plus: f64, vx_minus: f64, vp_plus: f64, vp_minus: f64) -> Result<EprFlags> {
    let all = [vx_plus, vx_minus, vp_plus, vp_minus];
    if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return invalid("quadrature variances must be finite and nonnegative");
    }
    Ok(EprFlags {
        mode_entangled: vx_plus + vp_minus < 2.0 || vx_minus + vp_plus < 2.0,
        epr: vx_minus * vp_plus < 0.25,
    })
}

/// Multiply `rho_{mn}` by `exp(-sigma^2 (m-n)^2 / 2)` and optionally by `exp(-i theta (m-n))`.
pub fn collective_dephasing(rho: &MixedState, sigma: f64, theta: Option<f64>) -> Result<MixedState> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return invalid("dephasing width must be finite and nonnegative");
    }
    let s = rho.space();
    let d = s.dim();
    let m = rho.matrix();
    let out = CMatrix::from_fn(d, d, |i, j| {
        let dm = i as f64 - j as f64;
        let mut v = m[(i, j)] * c((-0.5 * sigma * sigma * dm * dm).exp());
        if let Some(th) = theta {
            v *= cis(-th * dm);
        }
        v
    });
    Ok(MixedState::from_parts_unchecked(s, out))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SensitivityFloors {
    pub loss_bound: f64,
    pub phase_noise_bound: f64,
    pub sql: f64,
    pub hl: f64,
}

pub fn sensitivity_floors(n: f64, eta: f64, sigma: f64, nu: f64) -> Result<SensitivityFloors> {
    if !(eta > 0.0 && eta <= 1.0) {
        return invalid("transmission must lie in (0, 1]");
    }
    if !(sigma >= 0.0) || !(nu >= 1.0) || !(n >= 1.0) || !sigma.is_finite() || !nu.is_finite() || !n.is_finite() {
        return invalid("need sigma >= 0, nu >= 1, N >= 1");
    }
    Ok(SensitivityFloors {
        loss_bound: (1.0 + n * (1.0 - eta) / eta).sqrt() / (nu.sqrt() * n),
        phase_noise_bound: ((sigma * sigma + 1.0 / (n * n)) / nu).sqrt(),
        sql: 1.0 / (n * nu).sqrt(),
        hl: 1.0 / (n * nu.sqrt()),
    })
}

/// Convenience: `J_n` for an orthonormal frame's third axis.
pub fn third_axis(n1: &Axis, n2: &Axis) -> Result<Axis> {
    Axis::from_direction(cross3(&n1.vec(), &n2.vec()))
}

/// `J_n` shortcut kept next to the QFI entry points.
pub fn generator(space: crate::spinspace::SpinSpace, axis: &Axis) -> HermitianOperator {
    collective_operator(space, axis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::oat_evolve;
    use crate::spinspace::{make_space, KetState};
    use crate::states::{coherent, dicke, noon, twin_fock, w_state};
    use std::f64::consts::PI;

    #[test]
    fn qfi_benchmarks() {
        let s = make_space(20).unwrap();
        let css = coherent(s, PI / 2.0, 0.0).unwrap();
        assert!((qfi(&css, &jz(s)).unwrap() - 20.0).abs() < 1e-10);
        assert!((qfi(&noon(s, 0.3).unwrap(), &jz(s)).unwrap() - 400.0).abs() < 1e-9);
        for m in [-3.0, 0.0, 4.0] {
            let f = qfi(&dicke(s, m).unwrap(), &jx(s)).unwrap();
            assert!((f - (200.0 - 2.0 * m * m + 20.0)).abs() < 1e-9);
        }
        assert!(qfi(&crate::spinspace::MixedState::maximally_mixed(s), &jx(s)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn qfi_mixed_equals_pure_for_rank_one() {
        let s = make_space(9).unwrap();
        let st = coherent(s, 1.0, 0.4).unwrap();
        let tw = oat_evolve(&st, 0.2);
        let g = collective_operator(s, &Axis::from_direction([0.2, 0.5, 0.9]).unwrap());
        let a = qfi(&tw, &g).unwrap();
        let b = qfi(&tw.to_mixed(), &g).unwrap();
        assert!((a - b).abs() < 1e-9 * a);
        let ga = gamma_q(&tw);
        let gb = gamma_q(&tw.to_mixed());
        for i in 0..3 {
            for j in 0..3 {
                assert!((ga[i][j] - gb[i][j]).abs() < 1e-8, "{ga:?} {gb:?}");
            }
        }
    }

    #[test]
    fn optimal_direction_examples() {
        let s = make_space(12).unwrap();
        let (axis, f) = optimal_generator_direction(&coherent(s, PI / 2.0, 0.0).unwrap());
        assert!((f - 12.0).abs() < 1e-10 && axis.vec()[0].abs() < 1e-8);
        let (axis, f) = optimal_generator_direction(&noon(s, 0.0).unwrap());
        assert!((f - 144.0).abs() < 1e-9 && axis.vec()[2].abs() > 1.0 - 1e-12);
        let (_, f) = optimal_generator_direction(&w_state(s).unwrap());
        assert!((f - 34.0).abs() < 1e-9);
    }

    #[test]
    fn squeezing_coherent_and_twin_fock() {
        let s = make_space(30).unwrap();
        let rep = squeezing(&coherent(s, 1.2, 0.3).unwrap(), None).unwrap();
        assert!((rep.xi_r2.unwrap() - 1.0).abs() < 1e-10);
        assert!((rep.xi_s2.unwrap() - 1.0).abs() < 1e-10);
        assert!((rep.contrast - 1.0).abs() < 1e-12);
        let tf = squeezing(&twin_fock(s).unwrap(), None).unwrap();
        assert!(tf.xi_r2.is_none() && tf.xi_s2.is_none());
        assert_eq!(tf.xi_d2, Some(0.0));
    }

    #[test]
    fn two_atom_state() {
        // cos(a) |+>|+> + sin(a) |->|->, written in the N=2 Dicke basis
        let s = make_space(2).unwrap();
        let a: f64 = 0.2;
        let r2 = 2f64.sqrt();
        let amps = crate::linalg::CVector::from_vec(vec![
            c(0.5 * (a.cos() + a.sin())),
            c(0.5 * r2 * (a.cos() - a.sin())),
            c(0.5 * (a.cos() + a.sin())),
        ]);
        let psi = KetState::new(s, amps).unwrap();
        let rep = squeezing(&psi, None).unwrap();
        let want = (1.0 - (2.0 * a).sin()) / (2.0 * a).cos().powi(2);
        assert!((rep.xi_r2.unwrap() - want).abs() < 1e-12);
        assert!((want - 0.71973).abs() < 1e-4);
    }

    #[test]
    fn witnesses_coherent_and_axes() {
        let s = make_space(40).unwrap();
        let css = coherent(s, PI / 2.0, 0.0).unwrap();
        let r = witnesses(&css, &Axis::Y, &Axis::X, &Axis::Z).unwrap();
        assert!(!r.entangled);
        assert!(r.bell_w.abs() < 1e-12);
        assert!(r.bell_w_min > -1e-12 && !r.bell_correlated);
        assert_eq!(r.violations(40), [false; 4]);
        let bad = Axis::from_direction([1.0, 1.0, 0.0]).unwrap();
        assert!(witnesses(&css, &bad, &Axis::X, &Axis::Z).is_err());
    }

    #[test]
    fn oat_state_is_bell_correlated() {
        let s = make_space(100).unwrap();
        let st = oat_evolve(&coherent(s, PI / 2.0, 0.0).unwrap(), 0.01 * PI);
        let rep = squeezing(&st, None).unwrap();
        let n1 = rep.squeezing_axis.unwrap();
        let n2 = rep.mean_axis.unwrap();
        let n3 = third_axis(&n1, &n2).unwrap();
        let w = witnesses(&st, &n1, &n2, &n3).unwrap();
        assert!(w.bell_w_min < 0.0 && w.bell_correlated);
        assert!(w.ineq_a < 0.0);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(entanglement_depth_bound(10.0, 10).unwrap(), 1);
        assert_eq!(entanglement_depth_bound(100.0, 10).unwrap(), 10);
        assert_eq!(entanglement_depth_bound(25.9, 6).unwrap(), 5);
        assert_eq!(entanglement_depth_bound(3.0, 10).unwrap(), 1);
        assert!(entanglement_depth_bound(101.0, 10).is_err());
    }

    #[test]
    fn epr_examples() {
        let v = epr_criteria(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(!v.mode_entangled && !v.epr);
        let tm = |r: f64| ((2.0 * r).cosh() - (2.0 * r).sinh(), (2.0 * r).cosh() + (2.0 * r).sinh());
        let (lo, hi) = tm(0.1);
        let f = epr_criteria(hi, lo, lo, hi).unwrap();
        assert!(f.mode_entangled && !f.epr);
        let (lo, hi) = tm(0.5);
        assert!(epr_criteria(hi, lo, lo, hi).unwrap().epr);
        assert!(epr_criteria(0.6, 0.6, 0.3, 0.3).unwrap().epr);
        assert!(epr_criteria(-1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn dephasing_examples() {
        let s = make_space(10).unwrap();
        let ghz = noon(s, 0.0).unwrap().to_mixed();
        assert_eq!(collective_dephasing(&ghz, 0.0, None).unwrap(), ghz);
        let out = collective_dephasing(&ghz, 0.3, None).unwrap();
        let ratio = out.matrix()[(10, 0)].re / ghz.matrix()[(10, 0)].re;
        assert!((ratio - (-0.09f64 * 100.0 / 2.0).exp()).abs() < 1e-15);
        assert_eq!(out.matrix()[(3, 3)], ghz.matrix()[(3, 3)]);
    }

    #[test]
    fn floors() {
        let f = sensitivity_floors(100.0, 1.0, 0.0, 4.0).unwrap();
        assert!((f.loss_bound - f.hl).abs() < 1e-15);
        assert!((f.phase_noise_bound - f.hl).abs() < 1e-15);
        let big = sensitivity_floors(1e6, 0.5, 0.0, 1.0).unwrap();
        assert!((big.loss_bound * 1e3 - 1.0).abs() < 0.01);
        assert!(sensitivity_floors(10.0, 0.0, 0.0, 1.0).is_err());
    }
}
