use proptest::prelude::*;
use spinlab::estimation::{fisher_information, hellinger, moment_fisher, DetectionNoise, MeasurementModel};
use spinlab::linalg::max_abs;
use spinlab::metrology::{collective_dephasing, optimal_generator_direction, qfi, squeezing};
use spinlab::spinspace::{collective_operator, j_plus, jx, jy, jz, rotation, Axis, KetState, MixedState, SpinSpace, SpinState};
use spinlab::states::coherent;
use spinlab::tomography::{clebsch_gordan, decompose, quasiprobability, QuasiKind, SphereGrid};
use spinlab::{CMatrix, CVector, C64};
use std::f64::consts::PI;

fn ket(n: usize, parts: &[(f64, f64)]) -> KetState {
    let s = SpinSpace::new(n).unwrap();
    let amps = CVector::from_iterator(s.dim(), parts.iter().cycle().take(s.dim()).enumerate().map(|(k, (a, b))| {
        // vary the pattern with k so short inputs still give generic states
        C64::new(a + 0.01 * k as f64, b - 0.02 * (k % 3) as f64)
    }));
    KetState::normalized(s, amps).unwrap()
}

fn axis_strategy() -> impl Strategy<Value = Axis> {
    (-1.0f64..1.0, 0.0..2.0 * PI).prop_map(|(z, p)| Axis::spherical(z.acos(), p))
}

fn amp_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..12)
}

fn rodrigues(axis: &Axis, theta: f64, v: [f64; 3]) -> [f64; 3] {
    let k = axis.vec();
    let (s, c) = theta.sin_cos();
    let kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    let cr = [k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]];
    [0, 1, 2].map(|i| v[i] * c + cr[i] * s + k[i] * kv * (1.0 - c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn angular_momentum_algebra(n in 1usize..40) {
        let s = SpinSpace::new(n).unwrap();
        let (x, y, z) = (jx(s), jy(s), jz(s));
        let i = C64::new(0.0, 1.0);
        let comm = |a: &CMatrix, b: &CMatrix| a * b - b * a;
        let tol = 1e-10 * (n * n) as f64;
        prop_assert!(max_abs(&(comm(x.matrix(), y.matrix()) - z.matrix() * i)) < tol);
        prop_assert!(max_abs(&(comm(y.matrix(), z.matrix()) - x.matrix() * i)) < tol);
        prop_assert!(max_abs(&(comm(z.matrix(), x.matrix()) - y.matrix() * i)) < tol);
        let cas = x.matrix() * x.matrix() + y.matrix() * y.matrix() + z.matrix() * z.matrix();
        let want = CMatrix::identity(s.dim(), s.dim()) * C64::new(s.casimir(), 0.0);
        prop_assert!(max_abs(&(cas - want)) < tol);
        let jp = j_plus(s);
        prop_assert!(max_abs(&(&jp - (x.matrix() + y.matrix() * i))) < tol);
    }

    #[test]
    fn rotations_are_unitary_and_equivariant(n in 1usize..25, axis in axis_strategy(), theta in -7.0f64..7.0, probe in axis_strategy()) {
        let s = SpinSpace::new(n).unwrap();
        let u = rotation(s, &axis, theta).unwrap();
        let d = s.dim();
        prop_assert!(max_abs(&(u.adjoint() * &u - CMatrix::identity(d, d))) < 1e-10);
        // U† (a·J) U = (Rᵀ a)·J for U = exp(-iθ n·J)
        let lhs = u.adjoint() * collective_operator(s, &probe).matrix() * &u;
        let rot = Axis::from_direction(rodrigues(&axis, -theta, probe.vec())).unwrap();
        let rhs = collective_operator(s, &rot);
        prop_assert!(max_abs(&(lhs - rhs.matrix())) < 1e-9 * n as f64);
    }

    #[test]
    fn full_turn_is_fermionic_sign(n in 1usize..30, axis in axis_strategy()) {
        let s = SpinSpace::new(n).unwrap();
        let u = rotation(s, &axis, 2.0 * PI).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let d = s.dim();
        prop_assert!(max_abs(&(u - CMatrix::identity(d, d) * C64::new(sign, 0.0))) < 1e-9);
    }

    #[test]
    fn coherent_states_rotate_covariantly(n in 1usize..30, th in 0.0f64..PI, ph in 0.0f64..2.0 * PI) {
        let s = SpinSpace::new(n).unwrap();
        let direct = coherent(s, th, ph).unwrap();
        let north = coherent(s, 0.0, 0.0).unwrap();
        let rotated = north.rotated(&Axis::Y, th).unwrap().rotated(&Axis::Z, ph).unwrap();
        prop_assert!((direct.inner(&rotated).norm() - 1.0).abs() < 1e-10);
        let dir = Axis::spherical(th, ph);
        let mean = direct.expect(&collective_operator(s, &dir));
        prop_assert!((mean - n as f64 / 2.0).abs() < 1e-10 * n as f64);
    }

    #[test]
    fn qfi_is_convex_and_bounded(n in 2usize..20, a in amp_strategy(), b in amp_strategy(), p in 0.0f64..1.0, axis in axis_strategy()) {
        let (x, y) = (ket(n, &a), ket(n, &b));
        let s = x.space();
        let g = collective_operator(s, &axis);
        let fx = qfi(&x, &g).unwrap();
        let fy = qfi(&y, &g).unwrap();
        let mix = MixedState::mixture(&[(p, &x as &dyn SpinState), (1.0 - p, &y)]).unwrap();
        let fm = qfi(&mix, &g).unwrap();
        let nf = n as f64;
        prop_assert!(fm <= p * fx + (1.0 - p) * fy + 1e-8 * nf * nf);
        prop_assert!(fx <= nf * nf * (1.0 + 1e-10));
        // pure state: F_Q = 4 Var
        let var = x.expect(&g.pow(2)) - x.expect(&g).powi(2);
        prop_assert!((fx - 4.0 * var).abs() < 1e-8 * nf * nf);
    }

    #[test]
    fn wineland_bounded_by_qfi(n in 2usize..30, a in amp_strategy()) {
        let psi = ket(n, &a);
        let (_, f) = optimal_generator_direction(&psi);
        if let Ok(rep) = squeezing(&psi, None) {
            if let Some(xi) = rep.xi_r2 {
                prop_assert!(n as f64 / f <= xi * (1.0 + 1e-8) + 1e-10);
            }
        }
    }

    #[test]
    fn dephasing_keeps_a_density_matrix(n in 1usize..20, a in amp_strategy(), b in amp_strategy(), p in 0.0f64..1.0, s1 in 0.0f64..2.0, s2 in 0.0f64..2.0) {
        let (x, y) = (ket(n, &a), ket(n, &b));
        let rho = MixedState::mixture(&[(p, &x as &dyn SpinState), (1.0 - p, &y)]).unwrap();
        let out = collective_dephasing(&rho, s1, None).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        let (vals, _) = out.eigh();
        prop_assert!(vals.iter().all(|v| *v > -1e-12));
        // Gaussian widths add in quadrature
        let twice = collective_dephasing(&out, s2, None).unwrap();
        let once = collective_dephasing(&rho, s1.hypot(s2), None).unwrap();
        prop_assert!(max_abs(&(twice.matrix() - once.matrix())) < 1e-12);
    }

    #[test]
    fn multipole_decomposition_is_linear(n in 1usize..16, a in amp_strategy(), b in amp_strategy(), p in 0.0f64..1.0) {
        let (x, y) = (ket(n, &a), ket(n, &b));
        let mix = MixedState::mixture(&[(p, &x as &dyn SpinState), (1.0 - p, &y)]).unwrap();
        let (dx, dy, dm) = (decompose(&x).unwrap(), decompose(&y).unwrap(), decompose(&mix).unwrap());
        for k in 0..=n {
            for q in -(k as i64)..=(k as i64) {
                let want = dx.get(k, q) * p + dy.get(k, q) * (1.0 - p);
                prop_assert!((dm.get(k, q) - want).norm() < 1e-12);
            }
        }
        prop_assert!(max_abs(&(dm.reconstruct().unwrap() - mix.matrix())) < 1e-11);
    }

    #[test]
    fn husimi_is_nonnegative(n in 1usize..12, a in amp_strategy()) {
        let psi = ket(n, &a);
        let map = quasiprobability(&psi, QuasiKind::Q, &SphereGrid::for_particles(n)).unwrap();
        prop_assert!(map.min() > -1e-12);
        prop_assert!((map.integral() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn clebsch_gordan_obeys_lowering_recursion(j1 in 0i64..=20, j2 in 0i64..=20, pick in 0.0f64..1.0, mpick in 0.0f64..1.0, m1pick in 0.0f64..1.0) {
        // doubled quantum numbers; J ranges over |j1-j2|..j1+j2 in steps of 2
        let jmin = (j1 - j2).abs();
        let steps = (j1 + j2 - jmin) / 2;
        let jj = jmin + 2 * ((pick * (steps + 1) as f64) as i64).min(steps);
        // pick M with M - 2 still allowed, so the recursion has a left-hand side
        if jj == 0 {
            return Ok(());
        }
        let mm = -jj + 2 + 2 * ((mpick * jj as f64) as i64).min(jj - 1);
        let m1 = -j1 + 2 * ((m1pick * (j1 + 1) as f64) as i64).min(j1);
        let m2 = mm - 2 - m1;
        if m2.abs() > j2 || (j2 - m2) % 2 != 0 {
            return Ok(());
        }
        // J_- on |J M>: sqrt((J+M)(J-M+2))/2 C(m1, m2; M-2) =
        //   sqrt((j1-m1)(j1+m1+2))/2 C(m1+2, m2; M) + sqrt((j2-m2)(j2+m2+2))/2 C(m1, m2+2; M)
        let f = |a: i64, b: i64| (((a + b) * (a - b + 2)) as f64).sqrt() / 2.0;
        let g = |a: i64, b: i64| (((a - b) * (a + b + 2)) as f64).sqrt() / 2.0;
        let lhs = f(jj, mm) * clebsch_gordan(j1, m1, j2, m2, jj, mm - 2);
        let mut rhs = 0.0;
        if m1 + 2 <= j1 {
            rhs += g(j1, m1) * clebsch_gordan(j1, m1 + 2, j2, m2, jj, mm);
        }
        if m2 + 2 <= j2 {
            rhs += g(j2, m2) * clebsch_gordan(j1, m1, j2, m2 + 2, jj, mm);
        }
        prop_assert!((lhs - rhs).abs() < 1e-10, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn hellinger_is_a_symmetric_distance(n in 2usize..20, a in amp_strategy(), gen in axis_strategy(), ro in axis_strategy(), t0 in -1.0f64..1.0, t1 in -1.0f64..1.0) {
        let psi = ket(n, &a);
        let model = MeasurementModel::new(&psi, gen, vec![], ro, vec![-1.0, 0.0, 1.0]).unwrap();
        let d01 = hellinger(&model, t0, t1).unwrap();
        let d10 = hellinger(&model, t1, t0).unwrap();
        prop_assert!((d01 - d10).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&d01));
        prop_assert!(hellinger(&model, t0, t0).unwrap() < 1e-12);
    }

    #[test]
    fn classical_fisher_chain(n in 2usize..20, a in amp_strategy(), gen in axis_strategy(), ro in axis_strategy(), th in -1.0f64..1.0, sigma in 0.2f64..3.0) {
        let psi = ket(n, &a);
        let model = MeasurementModel::new(&psi, gen, vec![], ro, vec![-1.0, 0.0, 1.0]).unwrap();
        let fq = qfi(&psi, &collective_operator(psi.space(), &gen)).unwrap();
        let f = fisher_information(&model, th, None).unwrap();
        let nsq = (n * n) as f64;
        prop_assert!(f <= fq + 1e-5 * nsq, "F {f} > F_Q {fq}");
        let fm = moment_fisher(&model, th, None).unwrap();
        prop_assert!(fm <= f + 1e-5 * nsq, "moment {fm} > F {f}");
        let noisy = model.clone().with_detection_noise(DetectionNoise::new(sigma, 1.0).unwrap());
        let fnoisy = fisher_information(&noisy, th, None).unwrap();
        prop_assert!(fnoisy <= f + 1e-5 * nsq, "noisy {fnoisy} > clean {f}");
    }
}
