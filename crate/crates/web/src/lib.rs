//! Browser bindings: quasi-probability maps, one-axis-twisting curves and a
//! Josephson-junction ground-state sweep, each returned as flat `Float64Array`s.

use spinlab::dynamics::oat_evolve;
use spinlab::metrology::{gamma_q, optimal_generator_direction, squeezing};
use spinlab::reference::{linspace, oat_closed_forms};
use spinlab::spinspace::{Axis, KetState, SpinSpace};
use spinlab::states::{bjj_ground_state, coherent, dicke, noon, twin_fock};
use spinlab::tomography::{quasiprobability, QuasiKind, SphereGrid};
use std::f64::consts::FRAC_PI_2;
use wasm_bindgen::prelude::*;

/// Largest supported particle number; keeps the page responsive.
pub const MAX_N: usize = 400;

fn check_n(n: usize) -> Result<SpinSpace, String> {
    if n == 0 || n > MAX_N {
        return Err(format!("N must lie in 1..={MAX_N}, got {n}"));
    }
    SpinSpace::new(n).map_err(|e| e.to_string())
}

/// Named demo states; `param` is χt for "oat", m for "dicke", ignored otherwise.
pub fn demo_state(s: SpinSpace, name: &str, param: f64) -> Result<KetState, String> {
    let r = match name {
        "coherent" => coherent(s, FRAC_PI_2, 0.0),
        "oat" => Ok(oat_evolve(&coherent(s, FRAC_PI_2, 0.0).map_err(|e| e.to_string())?, param)),
        "twin-fock" => twin_fock(s),
        "noon" => noon(s, 0.0),
        "dicke" => dicke(s, param),
        other => return Err(format!("unknown state '{other}'")),
    };
    r.map_err(|e| e.to_string())
}

/// Sphere map on a grid of `n_theta × n_phi` points, row-major in theta.
#[wasm_bindgen]
pub struct SphereMap {
    n_theta: usize,
    n_phi: usize,
    theta: Vec<f64>,
    phi: Vec<f64>,
    values: Vec<f64>,
}

#[wasm_bindgen]
impl SphereMap {
    #[wasm_bindgen(getter)]
    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    #[wasm_bindgen(getter)]
    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn theta(&self) -> Vec<f64> {
        self.theta.clone()
    }

    pub fn phi(&self) -> Vec<f64> {
        self.phi.clone()
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }
}

pub fn sphere_map_inner(n: usize, kind: &str, state: &str, param: f64) -> Result<SphereMap, String> {
    let s = check_n(n)?;
    let kind: QuasiKind = kind.parse().map_err(|e: spinlab::Error| e.to_string())?;
    let psi = demo_state(s, state, param)?;
    // the resolution floor for N, or a minimum that still looks smooth on screen
    let nt = (2 * n + 2).max(48);
    let np = (2 * n + 2).max(96);
    let grid = SphereGrid::new(nt, np).map_err(|e| e.to_string())?;
    let map = quasiprobability(&psi, kind, &grid).map_err(|e| e.to_string())?;
    let values = (0..nt).flat_map(|i| (0..np).map(move |k| (i, k))).map(|(i, k)| map.values[(i, k)]).collect();
    Ok(SphereMap { n_theta: nt, n_phi: np, theta: grid.theta.clone(), phi: grid.phi.clone(), values })
}

#[wasm_bindgen]
pub fn sphere_map(n: usize, kind: &str, state: &str, param: f64) -> Result<SphereMap, JsError> {
    sphere_map_inner(n, kind, state, param).map_err(|e| JsError::new(&e))
}

/// Rows of (χt, ξ_R² numeric, ξ_R² closed, F_Q/N numeric, F_Q/N closed), flattened.
/// Undefined ξ_R² (vanishing mean spin) is NaN.
pub fn oat_curve_inner(n: usize, chit_max: f64, count: usize) -> Result<Vec<f64>, String> {
    let s = check_n(n)?;
    if n < 2 || !(chit_max > 0.0) || !chit_max.is_finite() || count < 2 || count > 2000 {
        return Err("need N >= 2, chi_t_max > 0 and 2..=2000 points".into());
    }
    let css = coherent(s, FRAC_PI_2, 0.0).map_err(|e| e.to_string())?;
    let nf = n as f64;
    let mut out = Vec::with_capacity(5 * count);
    for t in linspace(0.0, chit_max, count) {
        let st = oat_evolve(&css, t);
        let cf = oat_closed_forms(n, t).map_err(|e| e.to_string())?;
        let xi = squeezing(&st, Some(Axis::X)).map_err(|e| e.to_string())?.xi_r2.unwrap_or(f64::NAN);
        let g = gamma_q(&st);
        let (a, b, d) = (g[1][1], g[2][2], g[1][2]);
        let fq = 0.5 * (a + b) + (0.25 * (a - b) * (a - b) + d * d).sqrt();
        out.extend([t, xi, cf.xi_r2, fq / nf, cf.fq_over_n]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn oat_curve(n: usize, chit_max: f64, count: usize) -> Result<Vec<f64>, JsError> {
    oat_curve_inner(n, chit_max, count).map_err(|e| JsError::new(&e))
}

/// Rows of (Λ, ξ_R², max-direction F_Q/N), flattened. NaN where ξ_R² is undefined.
pub fn bjj_sweep_inner(n: usize, lambda_min: f64, lambda_max: f64, count: usize) -> Result<Vec<f64>, String> {
    let s = check_n(n)?;
    if !(lambda_max > lambda_min) || !lambda_min.is_finite() || !lambda_max.is_finite() || count < 2 || count > 2000 {
        return Err("need a finite Lambda range with max > min and 2..=2000 points".into());
    }
    let nf = n as f64;
    let mut out = Vec::with_capacity(3 * count);
    for lam in linspace(lambda_min, lambda_max, count) {
        let gs = bjj_ground_state(s, lam, 0.0).map_err(|e| e.to_string())?;
        let xi = squeezing(&gs, None).map_err(|e| e.to_string())?.xi_r2.unwrap_or(f64::NAN);
        let (_, f) = optimal_generator_direction(&gs);
        out.extend([lam, xi, f / nf]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn bjj_sweep(n: usize, lambda_min: f64, lambda_max: f64, count: usize) -> Result<Vec<f64>, JsError> {
    bjj_sweep_inner(n, lambda_min, lambda_max, count).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_map_shape_and_normalization() {
        let m = sphere_map_inner(8, "w", "twin-fock", 0.0).unwrap();
        assert_eq!(m.values.len(), m.n_theta * m.n_phi);
        assert!(m.values.iter().any(|v| *v < 0.0));
        assert!(sphere_map_inner(8, "z", "coherent", 0.0).is_err());
        assert!(sphere_map_inner(0, "q", "coherent", 0.0).is_err());
        assert!(sphere_map_inner(4, "q", "cat", 0.0).is_err());
    }

    #[test]
    fn oat_curve_matches_closed_form_early() {
        let rows = oat_curve_inner(40, 0.1, 5).unwrap();
        assert_eq!(rows.len(), 25);
        for r in rows.chunks(5) {
            assert!((r[1] - r[2]).abs() < 1e-8 * r[2]);
            assert!((r[3] - r[4]).abs() < 1e-8 * r[4]);
        }
    }

    #[test]
    fn bjj_sweep_squeezes_for_positive_lambda() {
        let rows = bjj_sweep_inner(50, 0.0, 4.0, 3).unwrap();
        assert!((rows[1] - 1.0).abs() < 1e-9);
        assert!(rows[7] < 0.6);
        assert!(bjj_sweep_inner(50, 1.0, 1.0, 3).is_err());
    }
}
