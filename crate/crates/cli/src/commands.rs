use crate::{usage, Cell, Command, Failure, Output, StateArgs, StateKind, Table};
use rayon::prelude::*;
use serde_json::json;
use spinlab::dynamics::{evolve, oat_evolve, su11_scan, DynamicState, EvolutionSpec};
use spinlab::estimation::{coherent_probe_model, fisher_information, sample, EstimateOptions, Estimator, Method, MeasurementModel};
use spinlab::metrology::{entanglement_depth_bound, gamma_q, optimal_generator_direction, qfi, sensitivity_floors, squeezing, third_axis, witnesses};
use spinlab::reference::{bjj_regime_predictions, bogoliubov, oat_closed_forms, yurke_delta_theta};
use spinlab::spinspace::{jz, Axis, KetState, SpinSpace};
use spinlab::states::{bjj_ground_state, coherent, dicke, noon, spin_mixing_ground_state, twin_fock, w_state, ThreeModeState};
use spinlab::tomography::{quasiprobability, QuasiKind, SphereGrid};
use std::f64::consts::FRAC_PI_2;

type Rows = Result<Vec<Vec<Cell>>, Failure>;

fn table(columns: &[&'static str], rows: Vec<Vec<Cell>>) -> Table {
    let mut t = Table::new(columns);
    rows.into_iter().for_each(|r| t.push(r));
    t
}

fn plain(table: Table) -> Output {
    Output { table, summary: json!({}), csv_body: None }
}

fn space(n: usize) -> Result<SpinSpace, Failure> {
    Ok(SpinSpace::new(n)?)
}

pub fn dispatch(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::OatSweep(a) => oat_sweep(a.n, &a.chit.values()),
        Command::BjjGround(a) => bjj_ground(a.n, &a.lambda.values(), a.delta_e),
        Command::SpinMixing(a) => spin_mixing(a),
        Command::Su11(a) => su11(a),
        Command::Estimate(a) => estimate(a),
        Command::Tomography(a) => tomography(a),
        Command::Witness(a) => witness(a.n, &a.chit.values()),
        Command::Floors(a) => floors(a),
    }
}

/// Largest eigenvalue of the y-z block of the QFI matrix: the best generator
/// perpendicular to the x-polarized mean spin.
fn perpendicular_qfi(state: &KetState) -> f64 {
    let g = gamma_q(state);
    let (a, b, d) = (g[1][1], g[2][2], g[1][2]);
    0.5 * (a + b) + (0.25 * (a - b) * (a - b) + d * d).sqrt()
}

fn oat_sweep(n: usize, chit: &[f64]) -> Result<Output, Failure> {
    let s = space(n)?;
    let css = coherent(s, FRAC_PI_2, 0.0)?;
    let nf = n as f64;
    let rows: Rows = chit
        .par_iter()
        .map(|&t| {
            let cf = oat_closed_forms(n, t)?;
            let st = oat_evolve(&css, t);
            let xi = squeezing(&st, Some(Axis::X))?.xi_r2;
            Ok(vec![
                t.into(),
                xi.into(),
                cf.xi_r2.into(),
                perpendicular_qfi(&st).into(),
                (nf * cf.fq_over_n).into(),
                cf.contrast.into(),
            ])
        })
        .collect();
    Ok(plain(table(&["chit", "xiR2_numeric", "xiR2_closed", "fq_numeric", "fq_closed", "contrast"], rows?)))
}

fn bjj_ground(n: usize, lambdas: &[f64], delta_e: f64) -> Result<Output, Failure> {
    let s = space(n)?;
    let nf = n as f64;
    let tf = if n % 2 == 0 { Some(twin_fock(s)?) } else { None };
    let rows: Rows = lambdas
        .par_iter()
        .map(|&lam| {
            let gs = bjj_ground_state(s, lam, delta_e)?;
            let xi = squeezing(&gs, None)?.xi_r2;
            let (_, f_max) = optimal_generator_direction(&gs);
            let f_z = qfi(&gs, &jz(s))?;
            let pred = bjj_regime_predictions(n, lam)?;
            let overlap = tf.as_ref().map(|t| gs.inner(t).norm());
            Ok(vec![
                lam.into(),
                pred.regime.name().into(),
                xi.into(),
                xi.map(|x| 1.0 / x).into(),
                (f_max / nf).into(),
                (f_z / nf).into(),
                pred.xi_r2.into(),
                pred.fq_over_n.into(),
                overlap.into(),
            ])
        })
        .collect();
    Ok(plain(table(
        &["lambda", "regime", "xiR2", "inv_xiR2", "fq_over_n", "fq_z_over_n", "xiR2_pred", "fq_over_n_pred", "twin_fock_overlap"],
        rows?,
    )))
}

fn spin_mixing(a: &crate::SpinMixingArgs) -> Result<Output, Failure> {
    let n = a.n;
    match a.mode {
        crate::SpinMixingMode::Ground => {
            if a.t.is_some() {
                return usage("--t applies to dynamics mode only");
            }
            let rows: Rows = a
                .q
                .values()
                .par_iter()
                .map(|&q| {
                    let gs = spin_mixing_ground_state(n, q, a.lambda_sign)?;
                    Ok(vec![
                        q.into(),
                        gs.mean_side_population().into(),
                        gs.qfi_sx().into(),
                        (gs.qfi_sx() / (n as f64)).into(),
                    ])
                })
                .collect();
            Ok(plain(table(&["q", "side_pop", "fq_sx", "fq_sx_over_n"], rows?)))
        }
        crate::SpinMixingMode::Dynamics => {
            if a.q.count != 1 {
                return usage("dynamics mode takes a single --q value");
            }
            let Some(times) = a.t else {
                return usage("dynamics mode needs --t start:stop:count");
            };
            let q = a.q.start;
            let lam = a.lambda_sign.signum();
            let start: DynamicState = ThreeModeState::vacuum_sides(n)?.into();
            let bog = bogoliubov(n as f64, q, lam)?;
            let rows: Rows = times
                .values()
                .par_iter()
                .map(|&t| {
                    let DynamicState::ThreeMode(st) = evolve(&start, &EvolutionSpec::SpinMixing { q, lambda_sign: lam, t })? else {
                        unreachable!("three-mode input evolves to a three-mode state")
                    };
                    let side = st.mean_side_population();
                    Ok(vec![
                        t.into(),
                        side.into(),
                        bog.side_population(t).into(),
                        (2.0 * side / n as f64).into(),
                        st.pair_population_variance().into(),
                    ])
                })
                .collect();
            Ok(plain(table(&["t", "side_pop", "side_pop_bogoliubov", "depletion", "pair_var"], rows?)))
        }
    }
}

fn su11(a: &crate::Su11Args) -> Result<Output, Failure> {
    let lam = a.lambda_sign.signum();
    let q = a.q.unwrap_or(-lam * (2.0 * a.n as f64 - 1.0));
    let start: DynamicState = ThreeModeState::vacuum_sides(a.n)?.into();
    let DynamicState::ThreeMode(first) = evolve(&start, &EvolutionSpec::SpinMixing { q, lambda_sign: lam, t: a.t_mix })? else {
        unreachable!("three-mode input evolves to a three-mode state")
    };
    let transferred = 2.0 * first.mean_side_population();
    let thetas = a.theta.values();
    let chunks: Vec<&[f64]> = thetas.chunks(16).collect();
    let pts: Result<Vec<_>, Failure> = chunks
        .par_iter()
        .map(|c| su11_scan(a.n, lam, q, a.t_mix, c).map_err(Failure::from))
        .collect();
    let rows: Rows = pts?
        .into_iter()
        .flatten()
        .map(|p| {
            Ok(vec![
                p.theta.into(),
                p.mean_pairs.into(),
                p.var_pairs.into(),
                p.dmean_dtheta.into(),
                p.moment_sensitivity().into(),
                yurke_delta_theta(transferred, p.theta)?.into(),
            ])
        })
        .collect();
    Ok(Output {
        table: table(&["theta", "mean_pairs", "var_pairs", "dmean_dtheta", "dtheta_moment", "dtheta_yurke"], rows?),
        summary: json!({ "q": q, "transferred_particles": transferred }),
        csv_body: None,
    })
}

fn estimate(a: &crate::EstimateArgs) -> Result<Output, Failure> {
    let Some(seed) = a.seed else {
        return usage("estimate is stochastic and needs an explicit --seed");
    };
    let method: Method = a.method.parse()?;
    if a.nu == 0 || a.reps == 0 {
        return usage("--nu and --reps must be positive");
    }
    let nf = a.n as f64;
    let grid = match a.window {
        Some(w) => MeasurementModel::window(w.start, w.stop, w.count)?,
        None => {
            let hw = 40.0 / (a.nu as f64 * nf).sqrt();
            MeasurementModel::window(a.theta - hw, a.theta + hw, 2001)?
        }
    };
    let model = coherent_probe_model(a.n, grid)?;
    let fisher = fisher_information(&model, a.theta, None)?;
    let est = Estimator::new(&model, method, EstimateOptions::default())?;
    let rows: Rows = (0..a.reps)
        .into_par_iter()
        .map(|r| {
            let s = seed.wrapping_add(r as u64);
            let smp = sample(&model, a.theta, a.nu, s)?;
            let e = est.estimate(&smp)?;
            Ok(vec![r.into(), s.into(), a.theta.into(), e.theta.into(), e.uncertainty.into()])
        })
        .collect();
    let rows = rows?;
    let vals: Vec<f64> = rows
        .iter()
        .map(|r| match r[3] {
            Cell::Num(x) => x,
            _ => unreachable!(),
        })
        .collect();
    let k = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / k;
    let var = if vals.len() > 1 { vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0) } else { f64::NAN };
    let crb = 1.0 / (a.nu as f64 * fisher);
    Ok(Output {
        table: table(&["rep", "seed", "theta_true", "theta_hat", "uncertainty"], rows),
        summary: json!({
            "fisher": fisher,
            "cramer_rao_variance": crb,
            "mean": mean,
            "bias": mean - a.theta,
            "sample_variance": var,
            "variance_over_crb": var / crb,
        }),
        csv_body: None,
    })
}

fn build_state(s: SpinSpace, a: &StateArgs) -> Result<KetState, Failure> {
    Ok(match a.state {
        StateKind::Coherent => coherent(s, a.theta, a.phi)?,
        StateKind::Dicke => dicke(s, a.m)?,
        StateKind::TwinFock => twin_fock(s)?,
        StateKind::Noon => noon(s, a.phi)?,
        StateKind::W => w_state(s)?,
        StateKind::Oat => oat_evolve(&coherent(s, FRAC_PI_2, 0.0)?, a.chit),
    })
}

fn tomography(a: &crate::TomographyArgs) -> Result<Output, Failure> {
    let s = space(a.n)?;
    let kind: QuasiKind = a.kind.parse()?;
    let state = build_state(s, &a.state)?;
    let base = SphereGrid::for_particles(a.n);
    let grid = SphereGrid::new(a.n_theta.unwrap_or(base.theta.len()), a.n_phi.unwrap_or(base.phi.len()))?;
    let map = quasiprobability(&state, kind, &grid)?;
    let mut body = Vec::new();
    map.write_csv(&mut body).expect("writing to memory");
    let mut t = Table::new(&["theta", "phi", "value"]);
    for (i, th) in map.grid.theta.iter().enumerate() {
        for (k, ph) in map.grid.phi.iter().enumerate() {
            t.push(vec![(*th).into(), (*ph).into(), map.values[(i, k)].into()]);
        }
    }
    Ok(Output { table: t, summary: map.json_header(), csv_body: Some(body) })
}

fn witness(n: usize, chit: &[f64]) -> Result<Output, Failure> {
    let s = space(n)?;
    let css = coherent(s, FRAC_PI_2, 0.0)?;
    let nf = n as f64;
    let rows: Rows = chit
        .par_iter()
        .map(|&t| {
            let st = oat_evolve(&css, t);
            let sq = squeezing(&st, Some(Axis::X))?;
            let n2 = Axis::X;
            let n1 = sq.squeezing_axis.unwrap_or(Axis::Z);
            let n3 = third_axis(&n1, &n2)?;
            let w = witnesses(&st, &n1, &n2, &n3)?;
            let (_, f) = optimal_generator_direction(&st);
            let depth = entanglement_depth_bound(f.min(nf * nf), n)?;
            Ok(vec![
                t.into(),
                sq.xi_r2.into(),
                (f / nf).into(),
                depth.into(),
                w.ineq_a.into(),
                w.ineq_b.into(),
                w.ineq_c.into(),
                w.ineq_d.into(),
                w.pairwise.into(),
                w.bell_w.into(),
                w.bell_w_min.into(),
                w.bell_angle.into(),
                w.entangled.into(),
                w.pairwise_entangled.into(),
                w.bell_correlated.into(),
            ])
        })
        .collect();
    Ok(plain(table(
        &[
            "chit",
            "xiR2",
            "fq_over_n",
            "depth_bound",
            "ineq_a",
            "ineq_b",
            "ineq_c",
            "ineq_d",
            "pairwise",
            "bell_w",
            "bell_w_min",
            "bell_angle",
            "entangled",
            "pairwise_entangled",
            "bell_correlated",
        ],
        rows?,
    )))
}

fn floors(a: &crate::FloorsArgs) -> Result<Output, Failure> {
    let rows: Rows = a
        .n
        .values()
        .into_iter()
        .map(|n| {
            let f = sensitivity_floors(n, a.eta, a.sigma, a.nu)?;
            Ok(vec![n.into(), f.sql.into(), f.hl.into(), f.loss_bound.into(), f.phase_noise_bound.into()])
        })
        .collect();
    Ok(plain(table(&["n", "sql", "heisenberg", "loss_bound", "phase_noise_bound"], rows?)))
}
