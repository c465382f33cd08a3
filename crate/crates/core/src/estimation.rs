//! Phase estimation from simulated measurement records.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::linalg::{cis, hermitian_eigh, psd_sqrt, CMatrix, CVector, C64};
use crate::spinspace::{
    collective_operator, rotation, same_space, Axis, SpinSpace, SpinState,
};

/// Probabilities below this are dropped from Fisher sums.
pub const FISHER_PROB_CUTOFF: f64 = 1e-14;

#[derive(Clone, Debug)]
enum Probe {
    Pure(CVector),
    Mixed(CMatrix),
}

/// Gaussian readout noise: P(μ|μ̃) ∝ exp(−(μ − η̃ μ̃)² / 2σ²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectionNoise {
    pub sigma: f64,
    pub attenuation: f64,
}

impl DetectionNoise {
    pub fn new(sigma: f64, attenuation: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return invalid(format!("detection noise width must be positive, got {sigma}"));
        }
        if !(0.0..=1.0).contains(&attenuation) {
            return invalid(format!("attenuation must lie in [0, 1], got {attenuation}"));
        }
        Ok(DetectionNoise { sigma, attenuation })
    }
}

/// Probe e^{−iθJ_g}, then the analysis rotations, then a projective J_n readout.
#[derive(Clone, Debug)]
pub struct MeasurementModel {
    space: SpinSpace,
    generator: Axis,
    pipeline: Vec<(Axis, f64)>,
    readout: Axis,
    grid: Vec<f64>,
    noise: Option<DetectionNoise>,
    // readout eigenbasis, pipeline and generator eigenbasis folded together
    folded: CMatrix,
    probe: Probe,
    gen_values: Vec<f64>,
    outcomes: Vec<f64>,
    kernel: Option<DMatrix<f64>>,
}

impl MeasurementModel {
    pub fn new(
        state: &dyn SpinState,
        generator: Axis,
        pipeline: Vec<(Axis, f64)>,
        readout: Axis,
        grid: Vec<f64>,
    ) -> Result<Self> {
        if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|t| !t.is_finite()) {
            return invalid("theta grid must be finite and strictly ascending");
        }
        let space = state.space();
        let d = space.dim();
        let (_, v) = hermitian_eigh(collective_operator(space, &generator).matrix());
        let (_, w) = hermitian_eigh(collective_operator(space, &readout).matrix());
        let mut r = CMatrix::identity(d, d);
        for (axis, angle) in &pipeline {
            if !angle.is_finite() {
                return invalid("pipeline rotation angles must be finite");
            }
            r = rotation(space, axis, *angle)? * r;
        }
        let folded = w.adjoint() * r * &v;
        let probe = match state.as_ket() {
            Some(k) => Probe::Pure(v.adjoint() * k.amplitudes()),
            None => Probe::Mixed(v.adjoint() * state.density() * &v),
        };
        Ok(MeasurementModel {
            space,
            generator,
            pipeline,
            readout,
            grid,
            noise: None,
            folded,
            probe,
            gen_values: space.labels(),
            outcomes: space.labels(),
            kernel: None,
        })
    }

    /// `points` equally spaced θ values over [lo, hi].
    pub fn window(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
        if points < 2 || !(hi > lo) {
            return invalid("window needs hi > lo and at least two points");
        }
        Ok(crate::reference::linspace(lo, hi, points))
    }

    pub fn with_detection_noise(mut self, noise: DetectionNoise) -> Self {
        let ideal = self.space.labels();
        let pad = (5.0 * noise.sigma).ceil() as usize;
        let j = self.space.j();
        let outcomes: Vec<f64> = (0..ideal.len() + 2 * pad)
            .map(|i| -j - pad as f64 + i as f64)
            .collect();
        let mut k = DMatrix::zeros(outcomes.len(), ideal.len());
        let s2 = 2.0 * noise.sigma * noise.sigma;
        for (c, m) in ideal.iter().enumerate() {
            let centre = noise.attenuation * m;
            let mut col: Vec<f64> = outcomes.iter().map(|mu| (-(mu - centre).powi(2) / s2).exp()).collect();
            let total: f64 = col.iter().sum();
            col.iter_mut().for_each(|x| *x /= total);
            for (r, x) in col.into_iter().enumerate() {
                k[(r, c)] = x;
            }
        }
        self.outcomes = outcomes;
        self.kernel = Some(k);
        self.noise = Some(noise);
        self
    }

    pub fn space(&self) -> SpinSpace {
        self.space
    }

    pub fn generator(&self) -> Axis {
        self.generator
    }

    pub fn pipeline(&self) -> &[(Axis, f64)] {
        &self.pipeline
    }

    pub fn readout(&self) -> Axis {
        self.readout
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn noise(&self) -> Option<DetectionNoise> {
        self.noise
    }

    /// Outcome values μ, indexed like the probabilities and the sample labels.
    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    fn ideal_probs(&self, theta: f64) -> Vec<f64> {
        let phases: Vec<C64> = self.gen_values.iter().map(|m| cis(-theta * m)).collect();
        let a = CMatrix::from_fn(self.folded.nrows(), self.folded.ncols(), |r, c| {
            self.folded[(r, c)] * phases[c]
        });
        let mut p: Vec<f64> = match &self.probe {
            Probe::Pure(z) => (a * z).iter().map(|x| x.norm_sqr()).collect(),
            Probe::Mixed(rho) => {
                let ar = &a * rho;
                (0..a.nrows())
                    .map(|r| {
                        (0..a.ncols())
                            .map(|c| (ar[(r, c)] * a[(r, c)].conj()).re)
                            .sum::<f64>()
                            .max(0.0)
                    })
                    .collect()
            }
        };
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        p
    }

    pub fn probabilities(&self, theta: f64) -> Vec<f64> {
        let ideal = self.ideal_probs(theta);
        match &self.kernel {
            None => ideal,
            Some(k) => (0..k.nrows())
                .map(|r| (0..k.ncols()).map(|c| k[(r, c)] * ideal[c]).sum())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    pub theta: f64,
    pub outcomes: Vec<f64>,
    pub probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn mean(&self) -> f64 {
        self.outcomes.iter().zip(&self.probs).map(|(m, p)| m * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.outcomes.iter().zip(&self.probs).map(|(m, p)| (m - mu).powi(2) * p).sum()
    }
}

pub fn outcome_distribution(model: &MeasurementModel, theta: f64) -> Result<OutcomeDistribution> {
    if !theta.is_finite() {
        return invalid("theta must be finite");
    }
    Ok(OutcomeDistribution {
        theta,
        outcomes: model.outcomes.clone(),
        probs: model.probabilities(theta),
    })
}

pub fn default_fd_step(space: SpinSpace) -> f64 {
    1e-4 / (space.n_particles() as f64).sqrt()
}

/// Σ_μ (∂_θ P)² / P by central differences.
pub fn fisher_information(model: &MeasurementModel, theta: f64, step: Option<f64>) -> Result<f64> {
    let h = step.unwrap_or_else(|| default_fd_step(model.space));
    if !(h > 0.0) || !theta.is_finite() {
        return invalid("need finite theta and a positive step");
    }
    let p0 = model.probabilities(theta);
    let pp = model.probabilities(theta + h);
    let pm = model.probabilities(theta - h);
    Ok(p0
        .iter()
        .zip(pp.iter().zip(&pm))
        .filter(|(p, _)| **p >= FISHER_PROB_CUTOFF)
        .map(|(p, (a, b))| ((a - b) / (2.0 * h)).powi(2) / p)
        .sum())
}

/// (d⟨μ⟩/dθ)² / Var(μ), the Fisher information reachable from the first moment alone.
pub fn moment_fisher(model: &MeasurementModel, theta: f64, step: Option<f64>) -> Result<f64> {
    let h = step.unwrap_or_else(|| default_fd_step(model.space));
    let d0 = outcome_distribution(model, theta)?;
    let slope = (outcome_distribution(model, theta + h)?.mean() - outcome_distribution(model, theta - h)?.mean()) / (2.0 * h);
    Ok(slope * slope / d0.variance())
}

/// Squared Hellinger distance 1 − Σ √(P(μ|θ₀) P(μ|θ)).
pub fn hellinger(model: &MeasurementModel, theta0: f64, theta: f64) -> Result<f64> {
    let a = outcome_distribution(model, theta0)?;
    let b = outcome_distribution(model, theta)?;
    let bc: f64 = a.probs.iter().zip(&b.probs).map(|(p, q)| (p * q).sqrt()).sum();
    Ok((1.0 - bc).clamp(0.0, 1.0))
}

/// Fisher information as 8× the quadratic coefficient of a polynomial fit of
/// d_H²(θ) over `points` values spanning θ₀ ± half_width.
pub fn fisher_from_hellinger(
    model: &MeasurementModel,
    theta0: f64,
    half_width: f64,
    points: usize,
    degree: usize,
) -> Result<f64> {
    if points < 7 || points % 2 == 0 {
        return invalid(format!("Hellinger fit needs an odd number of at least 7 points, got {points}"));
    }
    if !(half_width > 0.0) || degree < 2 || degree + 1 > points {
        return invalid("Hellinger fit needs a positive window and 2 <= degree < points");
    }
    let offsets = crate::reference::linspace(-half_width, half_width, points);
    let mut a = DMatrix::zeros(points, degree + 1);
    let mut y = nalgebra::DVector::zeros(points);
    for (r, x) in offsets.iter().enumerate() {
        // scaled abscissa keeps the Vandermonde matrix well conditioned
        let u = x / half_width;
        for c in 0..=degree {
            a[(r, c)] = u.powi(c as i32);
        }
        y[r] = hellinger(model, theta0, theta0 + x)?;
    }
    let coef = crate::linalg::lstsq(&a, &y)?;
    Ok(8.0 * coef[2] / (half_width * half_width))
}

/// Uhlmann fidelity tr√(√ρ σ √ρ); |⟨ψ|φ⟩| for two pure states.
pub fn quantum_fidelity(a: &dyn SpinState, b: &dyn SpinState) -> Result<f64> {
    same_space(a.space(), b.space())?;
    if let (Some(x), Some(y)) = (a.as_ket(), b.as_ket()) {
        return Ok(x.inner(y).norm().min(1.0));
    }
    let sa = psd_sqrt(&a.density());
    let inner = &sa * b.density() * &sa;
    let (vals, _) = hermitian_eigh(&crate::linalg::hermitian_part(&inner));
    Ok(vals.iter().map(|v| v.max(0.0).sqrt()).sum::<f64>().min(1.0))
}

/// Squared Bures distance 1 − fidelity.
pub fn bures(a: &dyn SpinState, b: &dyn SpinState) -> Result<f64> {
    Ok(1.0 - quantum_fidelity(a, b)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub theta_true: f64,
    pub seed: u64,
    /// Indices into `MeasurementModel::outcomes`.
    pub outcomes: Vec<usize>,
}

impl SampleSet {
    pub fn nu(&self) -> usize {
        self.outcomes.len()
    }

    pub fn counts(&self, n_outcomes: usize) -> Vec<u64> {
        let mut c = vec![0u64; n_outcomes];
        for &o in &self.outcomes {
            c[o] += 1;
        }
        c
    }
}

/// Draw ν outcomes at θ_true by inverse-CDF sampling from one ChaCha8 stream.
pub fn sample(model: &MeasurementModel, theta_true: f64, nu: usize, seed: u64) -> Result<SampleSet> {
    if nu == 0 {
        return invalid("need at least one measurement");
    }
    let dist = outcome_distribution(model, theta_true)?;
    Ok(SampleSet {
        theta_true,
        seed,
        outcomes: draw(&dist.probs, nu, seed),
    })
}

pub(crate) fn draw(probs: &[f64], nu: usize, seed: u64) -> Vec<usize> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in probs {
        acc += p;
        cdf.push(acc);
    }
    let last = probs.iter().rposition(|p| *p > 0.0).unwrap_or(0);
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..nu)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            cdf.partition_point(|c| *c <= u).min(last)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Mle,
    Moments,
    Bayes,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mle" => Ok(Method::Mle),
            "moments" | "mom" => Ok(Method::Moments),
            "bayes" => Ok(Method::Bayes),
            other => invalid(format!("unknown estimation method '{other}'")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EstimateOptions {
    /// Replaces the model grid as the search window.
    pub grid: Option<Vec<f64>>,
    /// Bayesian mean and width from e^{iθ} averaging.
    pub circular: bool,
    /// Prior weights on the grid; flat when absent.
    pub prior: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Posterior {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl Posterior {
    pub fn quantile(&self, q: f64) -> f64 {
        let i = self.cdf.partition_point(|c| *c < q);
        if i == 0 {
            return self.grid[0];
        }
        if i >= self.grid.len() {
            return *self.grid.last().unwrap();
        }
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let f = if c1 > c0 { (q - c0) / (c1 - c0) } else { 0.0 };
        self.grid[i - 1] + f * (self.grid[i] - self.grid[i - 1])
    }

    /// Linear interpolation of the CDF at θ.
    pub fn cdf_at(&self, theta: f64) -> f64 {
        let g = &self.grid;
        if theta <= g[0] {
            return 0.0;
        }
        if theta >= *g.last().unwrap() {
            return 1.0;
        }
        let i = g.partition_point(|x| *x <= theta);
        let f = (theta - g[i - 1]) / (g[i] - g[i - 1]);
        self.cdf[i - 1] + f * (self.cdf[i] - self.cdf[i - 1])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub method: Method,
    pub theta: f64,
    pub uncertainty: f64,
    pub posterior: Option<Posterior>,
}

/// An estimator with the likelihood table precomputed on its grid, reusable
/// across many sample sets.
#[derive(Clone, Debug)]
pub struct Estimator {
    method: Method,
    model: MeasurementModel,
    grid: Vec<f64>,
    log_table: Vec<Vec<f64>>,
    means: Vec<f64>,
    options: EstimateOptions,
}

impl Estimator {
    pub fn new(model: &MeasurementModel, method: Method, options: EstimateOptions) -> Result<Self> {
        let grid = options.grid.clone().unwrap_or_else(|| model.grid.clone());
        if grid.len() < 3 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("estimation grid must be strictly ascending with at least 3 points");
        }
        if let Some(p) = &options.prior {
            if p.len() != grid.len() || p.iter().any(|w| !(*w >= 0.0)) || p.iter().all(|w| *w == 0.0) {
                return invalid("prior must be nonnegative, not all zero, and match the grid length");
            }
        }
        let dists: Vec<Vec<f64>> = grid.iter().map(|t| model.probabilities(*t)).collect();
        let means: Vec<f64> = dists
            .iter()
            .map(|p| model.outcomes.iter().zip(p).map(|(m, q)| m * q).sum())
            .collect();
        if method == Method::Moments {
            let up = means.windows(2).all(|w| w[1] > w[0]);
            let down = means.windows(2).all(|w| w[1] < w[0]);
            if !(up || down) {
                return invalid("mean outcome is not monotonic on the estimation window");
            }
        }
        let log_table = dists
            .into_iter()
            .map(|p| p.into_iter().map(|x| if x > 0.0 { x.ln() } else { f64::NEG_INFINITY }).collect())
            .collect();
        Ok(Estimator {
            method,
            model: model.clone(),
            grid,
            log_table,
            means,
            options,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    fn log_likelihood(&self, counts: &[u64]) -> Vec<f64> {
        self.log_table
            .iter()
            .map(|row| {
                let mut s = 0.0;
                for (n, lp) in counts.iter().zip(row) {
                    if *n > 0 {
                        s += *n as f64 * lp;
                    }
                }
                s
            })
            .collect()
    }

    pub fn estimate(&self, samples: &SampleSet) -> Result<Estimate> {
        let n_out = self.model.outcomes.len();
        if samples.outcomes.iter().any(|o| *o >= n_out) {
            return invalid("sample contains outcomes the model does not have");
        }
        if samples.outcomes.is_empty() {
            return invalid("empty sample set");
        }
        let counts = samples.counts(n_out);
        match self.method {
            Method::Mle => self.mle(&counts),
            Method::Moments => self.moments(samples),
            Method::Bayes => self.bayes(&counts),
        }
    }

    fn mle(&self, counts: &[u64]) -> Result<Estimate> {
        let ll = self.log_likelihood(counts);
        let mut best = 0;
        for (i, v) in ll.iter().enumerate() {
            if *v > ll[best] {
                best = i;
            }
        }
        if ll[best] == f64::NEG_INFINITY {
            return Err(Error::DegenerateEstimate(
                "every grid point gives zero likelihood to the sample".into(),
            ));
        }
        let g = &self.grid;
        let c = best.clamp(1, g.len() - 2);
        let (x0, x1, x2) = (g[c - 1], g[c], g[c + 1]);
        let (y0, y1, y2) = (ll[c - 1], ll[c], ll[c + 1]);
        let mut theta = g[best];
        let mut uncertainty = f64::NAN;
        if y0.is_finite() && y1.is_finite() && y2.is_finite() {
            // parabola through three (possibly uneven) points
            let d01 = (y1 - y0) / (x1 - x0);
            let d12 = (y2 - y1) / (x2 - x1);
            let a = (d12 - d01) / (x2 - x0);
            if a < 0.0 {
                let b = d01 - a * (x0 + x1);
                if best == c {
                    theta = (-b / (2.0 * a)).clamp(x0, x2);
                }
                uncertainty = 1.0 / (-2.0 * a).sqrt();
            }
        }
        Ok(Estimate {
            method: Method::Mle,
            theta,
            uncertainty,
            posterior: None,
        })
    }

    fn moments(&self, samples: &SampleSet) -> Result<Estimate> {
        let nu = samples.nu() as f64;
        let xbar = samples.outcomes.iter().map(|o| self.model.outcomes[*o]).sum::<f64>() / nu;
        let m = &self.means;
        let (lo, hi) = (m[0].min(*m.last().unwrap()), m[0].max(*m.last().unwrap()));
        if xbar < lo || xbar > hi {
            return Err(Error::DegenerateEstimate(format!(
                "sample mean {xbar} lies outside the model range [{lo}, {hi}] on the window"
            )));
        }
        let increasing = m[1] > m[0];
        let i = if increasing {
            m.partition_point(|v| *v < xbar)
        } else {
            m.partition_point(|v| *v > xbar)
        }
        .clamp(1, m.len() - 1);
        let f = |t: f64| outcome_distribution(&self.model, t).map(|d| d.mean() - xbar);
        let (mut a, mut b) = (self.grid[i - 1], self.grid[i]);
        let mut fa = f(a)?;
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            let fm = f(mid)?;
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if (fm > 0.0) == (fa > 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
            if b - a < 1e-15 * (1.0 + a.abs()) {
                break;
            }
        }
        let theta = 0.5 * (a + b);
        let d = outcome_distribution(&self.model, theta)?;
        let h = default_fd_step(self.model.space);
        let slope = (outcome_distribution(&self.model, theta + h)?.mean()
            - outcome_distribution(&self.model, theta - h)?.mean())
            / (2.0 * h);
        Ok(Estimate {
            method: Method::Moments,
            theta,
            uncertainty: d.variance().sqrt() / (slope.abs() * nu.sqrt()),
            posterior: None,
        })
    }

    fn bayes(&self, counts: &[u64]) -> Result<Estimate> {
        let ll = self.log_likelihood(counts);
        let top = ll.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Err(Error::DegenerateEstimate(
                "every grid point gives zero likelihood to the sample".into(),
            ));
        }
        let g = &self.grid;
        let mut w: Vec<f64> = ll.iter().map(|v| (v - top).exp()).collect();
        if let Some(p) = &self.options.prior {
            w.iter_mut().zip(p).for_each(|(x, q)| *x *= q);
        }
        // trapezoid weights
        let mut cdf = vec![0.0; g.len()];
        for i in 1..g.len() {
            cdf[i] = cdf[i - 1] + 0.5 * (w[i] + w[i - 1]) * (g[i] - g[i - 1]);
        }
        let z = *cdf.last().unwrap();
        if !(z > 0.0) {
            return Err(Error::DegenerateEstimate("posterior has no mass on the grid".into()));
        }
        let density: Vec<f64> = w.iter().map(|x| x / z).collect();
        cdf.iter_mut().for_each(|c| *c /= z);
        let post = Posterior {
            grid: g.clone(),
            density,
            cdf,
        };
        let (theta, uncertainty) = if self.options.circular {
            let mut s = C64::new(0.0, 0.0);
            for i in 1..g.len() {
                let dx = g[i] - g[i - 1];
                s += (cis(g[i]) * post.density[i] + cis(g[i - 1]) * post.density[i - 1]) * (0.5 * dx);
            }
            let r = s.norm().min(1.0);
            (s.arg(), (-2.0 * r.ln()).sqrt())
        } else {
            let mut mean = 0.0;
            for i in 1..g.len() {
                mean += 0.5 * (g[i] * post.density[i] + g[i - 1] * post.density[i - 1]) * (g[i] - g[i - 1]);
            }
            let tail = 0.5 * (1.0 - 0.682_689_492_137_085_9);
            let half = 0.5 * (post.quantile(1.0 - tail) - post.quantile(tail));
            (mean, half)
        };
        Ok(Estimate {
            method: Method::Bayes,
            theta,
            uncertainty,
            posterior: Some(post),
        })
    }
}

pub fn estimate(
    samples: &SampleSet,
    model: &MeasurementModel,
    method: Method,
    options: EstimateOptions,
) -> Result<Estimate> {
    Estimator::new(model, method, options)?.estimate(samples)
}

/// Convenience for the most common model: a coherent probe on the equator at
/// azimuth 0, phase imprinted about y, readout along z.
pub fn coherent_probe_model(n: usize, grid: Vec<f64>) -> Result<MeasurementModel> {
    let space = SpinSpace::new(n)?;
    let psi = crate::states::coherent(space, std::f64::consts::FRAC_PI_2, 0.0)?;
    MeasurementModel::new(&psi, Axis::Y, Vec::new(), Axis::Z, grid)
}
