//! The symmetric subspace of `N` qubits, collective operators and moments.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::linalg::{c, cis, hermitian_eigh, hermitian_part, max_abs, CMatrix, CVector, SymTridiag, C64};

/// Symmetric space of `n` spin-1/2 particles, Dicke labels `m = -N/2..=N/2` ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinSpace {
    n: usize,
}

pub fn make_space(n: usize) -> Result<SpinSpace> {
    SpinSpace::new(n)
}

impl SpinSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("particle number must be at least 1");
        }
        Ok(SpinSpace { n })
    }

    pub fn n_particles(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Total spin J = N/2.
    pub fn j(&self) -> f64 {
        self.n as f64 / 2.0
    }

    /// Dicke label of basis index `k`.
    #[inline]
    pub fn label(&self, k: usize) -> f64 {
        k as f64 - self.j()
    }

    pub fn labels(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.label(k)).collect()
    }

    /// Basis index of label `m`, if `m` is one of the Dicke labels.
    pub fn index_of(&self, m: f64) -> Option<usize> {
        let k = m + self.j();
        let kr = k.round();
        if (k - kr).abs() > 1e-9 || kr < 0.0 || kr > self.n as f64 {
            None
        } else {
            Some(kr as usize)
        }
    }

    /// `<m+1| J_+ |m>` for basis index `k` (label m).
    #[inline]
    pub fn ladder(&self, k: usize) -> f64 {
        let j = self.j();
        let m = self.label(k);
        (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
    }

    pub fn casimir(&self) -> f64 {
        let j = self.j();
        j * (j + 1.0)
    }
}

/// Unit 3-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis([f64; 3]);

impl Axis {
    pub const X: Axis = Axis([1.0, 0.0, 0.0]);
    pub const Y: Axis = Axis([0.0, 1.0, 0.0]);
    pub const Z: Axis = Axis([0.0, 0.0, 1.0]);

    /// Accepts vectors whose length is within 1e-9 of one.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let len = (x * x + y * y + z * z).sqrt();
        if !len.is_finite() || (len - 1.0).abs() > 1e-9 {
            return invalid(format!("axis length {len} is not 1"));
        }
        Ok(Axis([x / len, y / len, z / len]))
    }

    /// Normalizes any nonzero finite vector.
    pub fn from_direction(v: [f64; 3]) -> Result<Self> {
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !len.is_finite() || len < 1e-300 {
            return invalid("zero-length axis");
        }
        Ok(Axis([v[0] / len, v[1] / len, v[2] / len]))
    }

    pub fn spherical(theta: f64, phi: f64) -> Self {
        Axis([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
    }

    pub fn vec(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Axis) -> f64 {
        dot3(&self.0, &other.0)
    }

    pub fn cross(&self, other: &Axis) -> [f64; 3] {
        cross3(&self.0, &other.0)
    }

    /// Two unit vectors completing a right-handed orthonormal frame (e1, e2, self).
    pub fn perpendicular_frame(&self) -> (Axis, Axis) {
        let v = self.0;
        let trial = if v[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let d = dot3(&trial, &v);
        let e1 = Axis::from_direction([trial[0] - d * v[0], trial[1] - d * v[1], trial[2] - d * v[2]])
            .expect("nonparallel trial vector");
        let e2 = Axis(cross3(&v, &e1.0));
        (e1, e2)
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Hermitian matrix tagged with the space it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    space: SpinSpace,
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Rejects matrices that are far from Hermitian, symmetrizes the rest.
    pub fn new(space: SpinSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return invalid(format!("operator is {}x{}, space dim is {d}", matrix.nrows(), matrix.ncols()));
        }
        let scale = max_abs(&matrix).max(1.0);
        let defect = max_abs(&(&matrix - matrix.adjoint()));
        if !defect.is_finite() || defect > 1e-8 * scale {
            return invalid(format!("operator is not Hermitian (defect {defect:e})"));
        }
        Ok(HermitianOperator { space, matrix: hermitian_part(&matrix) })
    }

    pub fn space(&self) -> SpinSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn identity(space: SpinSpace) -> Self {
        HermitianOperator { space, matrix: CMatrix::identity(space.dim(), space.dim()) }
    }

    pub fn scaled(&self, a: f64) -> Self {
        HermitianOperator { space: self.space, matrix: &self.matrix * c(a) }
    }

    pub fn plus(&self, other: &HermitianOperator) -> Result<Self> {
        same_space(self.space, other.space)?;
        Ok(HermitianOperator { space: self.space, matrix: &self.matrix + &other.matrix })
    }

    /// Integer power, still Hermitian. Used for nonlinear phase generators.
    pub fn pow(&self, k: u32) -> Self {
        let d = self.space.dim();
        let mut out = CMatrix::identity(d, d);
        for _ in 0..k {
            out = &out * &self.matrix;
        }
        HermitianOperator { space: self.space, matrix: hermitian_part(&out) }
    }

    /// Spectral decomposition, eigenvalues ascending.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigh(&self.matrix)
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v
    }
}

pub(crate) fn same_space(a: SpinSpace, b: SpinSpace) -> Result<()> {
    if a != b {
        return invalid(format!("space mismatch: N={} vs N={}", a.n_particles(), b.n_particles()));
    }
    Ok(())
}

/// Gauge-transformed `J_n`: `J_n = D T D^dagger` with `T` real tridiagonal and
/// `D = diag(exp(-i alpha k))`, `alpha = atan2(n_y, n_x)`.
pub(crate) fn jn_tridiagonal(space: SpinSpace, axis: &Axis) -> (SymTridiag, f64) {
    let [nx, ny, nz] = axis.vec();
    let rho = nx.hypot(ny);
    let alpha = ny.atan2(nx);
    let d = space.dim();
    let diag = (0..d).map(|k| nz * space.label(k)).collect();
    let off = (0..d - 1).map(|k| 0.5 * rho * space.ladder(k)).collect();
    (SymTridiag::new(diag, off), alpha)
}

/// `J_n = n_x J_x + n_y J_y + n_z J_z`.
pub fn collective_operator(space: SpinSpace, axis: &Axis) -> HermitianOperator {
    let [nx, ny, nz] = axis.vec();
    let d = space.dim();
    let mut m = CMatrix::zeros(d, d);
    let lower = C64::new(nx, -ny) * 0.5;
    for k in 0..d {
        m[(k, k)] = c(nz * space.label(k));
        if k + 1 < d {
            let v = lower * space.ladder(k);
            m[(k + 1, k)] = v;
            m[(k, k + 1)] = v.conj();
        }
    }
    HermitianOperator { space, matrix: m }
}

pub fn jx(space: SpinSpace) -> HermitianOperator {
    collective_operator(space, &Axis::X)
}

pub fn jy(space: SpinSpace) -> HermitianOperator {
    collective_operator(space, &Axis::Y)
}

pub fn jz(space: SpinSpace) -> HermitianOperator {
    collective_operator(space, &Axis::Z)
}

/// `J_+` as a plain (non-Hermitian) matrix.
pub fn j_plus(space: SpinSpace) -> CMatrix {
    let d = space.dim();
    let mut m = CMatrix::zeros(d, d);
    for k in 0..d - 1 {
        m[(k + 1, k)] = c(space.ladder(k));
    }
    m
}

/// `exp(-i theta J_n)` from the spectral decomposition of the gauged tridiagonal `J_n`.
pub fn rotation(space: SpinSpace, axis: &Axis, theta: f64) -> Result<CMatrix> {
    if !theta.is_finite() {
        return invalid("rotation angle must be finite");
    }
    let (t, alpha) = jn_tridiagonal(space, axis);
    let (vals, v) = t.eigh()?;
    let d = space.dim();
    let mut vd = v.map(c);
    let vt = vd.adjoint();
    for (j, &e) in vals.iter().enumerate() {
        let ph = cis(-theta * e);
        for r in 0..d {
            vd[(r, j)] *= ph;
        }
    }
    let mut u = vd * vt;
    for r in 0..d {
        for col in 0..d {
            u[(r, col)] *= cis(-alpha * (r as f64 - col as f64));
        }
    }
    Ok(u)
}

/// Any state on the Dicke space, pure or mixed.
pub trait SpinState {
    fn space(&self) -> SpinSpace;
    /// `tr(rho A)`.
    fn expect_matrix(&self, a: &CMatrix) -> C64;
    fn density(&self) -> CMatrix;
    fn as_ket(&self) -> Option<&KetState> {
        None
    }

    fn expect(&self, op: &HermitianOperator) -> f64 {
        self.expect_matrix(op.matrix()).re
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KetState {
    space: SpinSpace,
    amps: CVector,
}

impl KetState {
    pub fn new(space: SpinSpace, amps: CVector) -> Result<Self> {
        if amps.len() != space.dim() {
            return invalid(format!("{} amplitudes for space of dim {}", amps.len(), space.dim()));
        }
        let n2 = amps.norm_squared();
        if !n2.is_finite() || (n2 - 1.0).abs() > 1e-10 {
            return invalid(format!("state norm^2 {n2} differs from 1"));
        }
        Ok(KetState { space, amps })
    }

    /// Rescales to unit norm; fails only on a zero or non-finite vector.
    pub fn normalized(space: SpinSpace, amps: CVector) -> Result<Self> {
        let n = amps.norm();
        if !n.is_finite() || n == 0.0 {
            return invalid("cannot normalize a zero vector");
        }
        KetState::new(space, amps.unscale(n))
    }

    pub fn basis(space: SpinSpace, k: usize) -> Self {
        let mut amps = CVector::zeros(space.dim());
        amps[k] = c(1.0);
        KetState { space, amps }
    }

    pub fn space(&self) -> SpinSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    pub fn inner(&self, other: &KetState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// Applies a unitary and renormalizes away roundoff.
    pub fn transformed(&self, u: &CMatrix) -> KetState {
        let v = u * &self.amps;
        let n = v.norm();
        KetState { space: self.space, amps: v.unscale(n) }
    }

    pub fn rotated(&self, axis: &Axis, theta: f64) -> Result<KetState> {
        Ok(self.transformed(&rotation(self.space, axis, theta)?))
    }

    pub fn to_mixed(&self) -> MixedState {
        MixedState { space: self.space, rho: self.density() }
    }

    /// `J_z psi`, `J_+ psi`, `J_- psi` by their tridiagonal action.
    fn ladder_images(&self) -> (CVector, CVector, CVector) {
        let s = self.space;
        let d = s.dim();
        let a = &self.amps;
        let mut z = CVector::zeros(d);
        let mut up = CVector::zeros(d);
        let mut dn = CVector::zeros(d);
        for k in 0..d {
            z[k] = a[k] * s.label(k);
            if k + 1 < d {
                let l = s.ladder(k);
                up[k + 1] = a[k] * l;
                dn[k] = a[k + 1] * l;
            }
        }
        (z, up, dn)
    }
}

impl SpinState for KetState {
    fn space(&self) -> SpinSpace {
        self.space
    }

    fn expect_matrix(&self, a: &CMatrix) -> C64 {
        self.amps.dotc(&(a * &self.amps))
    }

    fn density(&self) -> CMatrix {
        &self.amps * self.amps.adjoint()
    }

    fn as_ket(&self) -> Option<&KetState> {
        Some(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    space: SpinSpace,
    rho: CMatrix,
}

impl MixedState {
    pub fn new(space: SpinSpace, rho: CMatrix) -> Result<Self> {
        let d = space.dim();
        if rho.nrows() != d || rho.ncols() != d {
            return invalid("density matrix dimension does not match space");
        }
        let defect = max_abs(&(&rho - rho.adjoint()));
        if !defect.is_finite() || defect > 1e-10 {
            return invalid(format!("density matrix is not Hermitian (defect {defect:e})"));
        }
        let rho = hermitian_part(&rho);
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return invalid(format!("density matrix trace {tr} differs from 1"));
        }
        let (vals, _) = hermitian_eigh(&rho);
        if vals[0] < -1e-10 {
            return invalid(format!("density matrix has negative eigenvalue {:e}", vals[0]));
        }
        Ok(MixedState { space, rho })
    }

    pub fn maximally_mixed(space: SpinSpace) -> Self {
        let d = space.dim();
        MixedState { space, rho: CMatrix::identity(d, d) * c(1.0 / d as f64) }
    }

    /// Convex combination `sum_i p_i rho_i`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &dyn SpinState)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return invalid("empty mixture");
        };
        let space = first.space();
        let d = space.dim();
        let mut rho = CMatrix::zeros(d, d);
        let mut total = 0.0;
        for (p, s) in parts {
            same_space(space, s.space())?;
            if *p < 0.0 || !p.is_finite() {
                return invalid("mixture weights must be nonnegative");
            }
            total += p;
            rho += s.density() * c(*p);
        }
        if (total - 1.0).abs() > 1e-10 {
            return invalid(format!("mixture weights sum to {total}"));
        }
        MixedState::new(space, rho)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn transformed(&self, u: &CMatrix) -> MixedState {
        MixedState { space: self.space, rho: hermitian_part(&(u * &self.rho * u.adjoint())) }
    }

    /// Eigenvalues `q_k` and eigenvectors `|k>` of rho.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigh(&self.rho)
    }

    pub(crate) fn from_parts_unchecked(space: SpinSpace, rho: CMatrix) -> Self {
        MixedState { space, rho }
    }
}

impl SpinState for MixedState {
    fn space(&self) -> SpinSpace {
        self.space
    }

    fn expect_matrix(&self, a: &CMatrix) -> C64 {
        // tr(rho A) without forming the product
        let d = self.space.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.rho[(i, j)] * a[(j, i)];
            }
        }
        acc
    }

    fn density(&self) -> CMatrix {
        self.rho.clone()
    }
}

/// Means and symmetrized covariance matrix of a list of observables.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub means: Vec<f64>,
    pub covariance: DMatrix<f64>,
}

pub fn moments(state: &dyn SpinState, ops: &[&HermitianOperator]) -> Result<Moments> {
    for op in ops {
        same_space(state.space(), op.space())?;
    }
    let n = ops.len();
    let means: Vec<f64> = ops.iter().map(|op| state.expect(op)).collect();
    let mut cov = DMatrix::zeros(n, n);
    if let Some(ket) = state.as_ket() {
        let images: Vec<CVector> = ops.iter().map(|op| op.apply(ket.amplitudes())).collect();
        for i in 0..n {
            for j in i..n {
                let v = images[i].dotc(&images[j]).re - means[i] * means[j];
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
        }
    } else {
        for i in 0..n {
            for j in i..n {
                let prod = ops[i].matrix() * ops[j].matrix();
                let v = state.expect_matrix(&prod).re - means[i] * means[j];
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
        }
    }
    Ok(Moments { means, covariance: cov })
}

/// Mean spin vector, covariance of (J_x, J_y, J_z), and the full second-moment matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinMoments {
    pub mean: [f64; 3],
    /// `<{J_i, J_j}>/2 - <J_i><J_j>`
    pub cov: [[f64; 3]; 3],
    /// `<{J_i, J_j}>/2`
    pub second: [[f64; 3]; 3],
}

impl SpinMoments {
    pub fn mean_along(&self, n: &Axis) -> f64 {
        dot3(&self.mean, &n.vec())
    }

    pub fn second_along(&self, a: &Axis, b: &Axis) -> f64 {
        quad(&self.second, &a.vec(), &b.vec())
    }

    pub fn var_along(&self, n: &Axis) -> f64 {
        quad(&self.cov, &n.vec(), &n.vec())
    }

    /// `<J^2>` from the second moments.
    pub fn total_square(&self) -> f64 {
        self.second[0][0] + self.second[1][1] + self.second[2][2]
    }
}

pub(crate) fn quad(m: &[[f64; 3]; 3], a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += a[i] * m[i][j] * b[j];
        }
    }
    s
}

/// First and second moments of the collective spin, O(N) for pure states.
pub fn spin_moments(state: &dyn SpinState) -> SpinMoments {
    let mut second = [[0.0; 3]; 3];
    let mean;
    if let Some(ket) = state.as_ket() {
        let (z, up, dn) = ket.ladder_images();
        let half = C64::new(0.5, 0.0);
        let hi = C64::new(0.0, -0.5);
        let x = (&up + &dn) * half;
        let y = (&up - &dn) * hi;
        let imgs = [x, y, z];
        let psi = ket.amplitudes();
        mean = [psi.dotc(&imgs[0]).re, psi.dotc(&imgs[1]).re, psi.dotc(&imgs[2]).re];
        for i in 0..3 {
            for j in i..3 {
                let v = imgs[i].dotc(&imgs[j]).re;
                second[i][j] = v;
                second[j][i] = v;
            }
        }
    } else {
        let s = state.space();
        let ops = [jx(s), jy(s), jz(s)];
        mean = [state.expect(&ops[0]), state.expect(&ops[1]), state.expect(&ops[2])];
        for i in 0..3 {
            for j in i..3 {
                let prod = ops[i].matrix() * ops[j].matrix();
                let v = state.expect_matrix(&prod).re;
                second[i][j] = v;
                second[j][i] = v;
            }
        }
    }
    let mut cov = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            cov[i][j] = second[i][j] - mean[i] * mean[j];
        }
    }
    SpinMoments { mean, cov, second }
}

/// Effective particle number `(sum g)^2 / sum g^2` for inhomogeneous couplings.
pub fn effective_particle_number(couplings: &[f64]) -> Result<f64> {
    let s: f64 = couplings.iter().sum();
    let s2: f64 = couplings.iter().map(|g| g * g).sum();
    if s2 == 0.0 || !s2.is_finite() {
        return invalid("couplings must be finite and not all zero");
    }
    Ok(s * s / s2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_labels() {
        assert!(make_space(0).is_err());
        assert_eq!(make_space(1).unwrap().dim(), 2);
        let s = make_space(100).unwrap();
        assert_eq!(s.dim(), 101);
        assert_eq!(s.labels()[0], -50.0);
        assert_eq!(s.labels()[100], 50.0);
        assert_eq!(make_space(2).unwrap().labels(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(make_space(3).unwrap().index_of(0.5), Some(2));
        assert_eq!(make_space(3).unwrap().index_of(0.0), None);
    }

    #[test]
    fn jz_and_ladder() {
        let s = make_space(2).unwrap();
        let z = jz(s);
        for k in 0..3 {
            assert_eq!(z.matrix()[(k, k)].re, k as f64 - 1.0);
        }
        let jp = j_plus(s);
        assert!((jp[(2, 1)].re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn commutator_n4() {
        let s = make_space(4).unwrap();
        let (x, y, z) = (jx(s), jy(s), jz(s));
        let comm = x.matrix() * y.matrix() - y.matrix() * x.matrix() - z.matrix() * C64::new(0.0, 1.0);
        assert!(max_abs(&comm) < 1e-12);
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 0.0, 0.0).is_err());
        assert!(Axis::new(1.0, 1.0, 0.0).is_err());
        assert!(Axis::from_direction([0.0, 0.0, 0.0]).is_err());
        let a = Axis::from_direction([1.0, 2.0, 3.0]).unwrap();
        let (e1, e2) = a.perpendicular_frame();
        assert!(e1.dot(&a).abs() < 1e-15 && e2.dot(&a).abs() < 1e-15 && e1.dot(&e2).abs() < 1e-15);
    }

    #[test]
    fn rotation_matches_dense_exponential() {
        let s = make_space(5).unwrap();
        let axis = Axis::from_direction([0.3, -0.7, 0.2]).unwrap();
        let u = rotation(s, &axis, 0.9).unwrap();
        let (vals, vecs) = collective_operator(s, &axis).eigh();
        let mut scaled = vecs.clone();
        for (j, e) in vals.iter().enumerate() {
            for r in 0..s.dim() {
                scaled[(r, j)] *= cis(-0.9 * e);
            }
        }
        let dense = scaled * vecs.adjoint();
        assert!(max_abs(&(u - dense)) < 1e-12);
    }

    #[test]
    fn rotation_composition_and_identity() {
        let s = make_space(7).unwrap();
        let id = rotation(s, &Axis::Z, 0.0).unwrap();
        assert!(max_abs(&(id - CMatrix::identity(8, 8))) < 1e-14);
        let ab = rotation(s, &Axis::Z, 0.4).unwrap() * rotation(s, &Axis::Z, 1.1).unwrap();
        assert!(max_abs(&(ab - rotation(s, &Axis::Z, 1.5).unwrap())) < 1e-10);
        assert!(rotation(s, &Axis::Z, f64::NAN).is_err());
    }

    #[test]
    fn moments_twin_fock_casimir() {
        let s = make_space(10).unwrap();
        let tf = KetState::basis(s, 5);
        let m = spin_moments(&tf);
        assert!((m.second[0][0] + m.second[1][1] - 30.0).abs() < 1e-10);
        let general = moments(&tf, &[&jx(s), &jy(s), &jz(s)]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((general.covariance[(i, j)] - m.cov[i][j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn moments_space_mismatch() {
        let a = make_space(3).unwrap();
        let b = make_space(4).unwrap();
        assert!(moments(&KetState::basis(a, 0), &[&jz(b)]).is_err());
    }

    #[test]
    fn hermitian_operator_checks() {
        let s = make_space(1).unwrap();
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0);
        assert!(HermitianOperator::new(s, m.clone()).is_err());
        m[(1, 0)] = c(1.0 + 1e-14);
        let h = HermitianOperator::new(s, m).unwrap();
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)]);
    }

    #[test]
    fn n_eff() {
        assert_eq!(effective_particle_number(&[1.0; 10]).unwrap(), 10.0);
        assert!(effective_particle_number(&[0.0]).is_err());
    }
}
