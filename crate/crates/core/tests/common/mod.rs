//! Independent fixed-step integrators used as oracles, and seeded samplers.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chiral_tpsr::dynamics::BeamDrive;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn angle(r: &mut ChaCha8Rng) -> f64 {
    // (-pi, pi]
    PI - 2.0 * PI * r.random::<f64>()
}

pub fn random_drive(r: &mut ChaCha8Rng) -> BeamDrive {
    BeamDrive {
        omega1: r.random_range(0.2..2.0),
        omega2: r.random_range(0.2..2.0),
        delta1: r.random_range(-0.5..0.5),
        delta2: r.random_range(-0.5..0.5),
        theta: angle(r),
        theta_f: angle(r),
    }
}

/// Right-hand side of the amplitude equations, written out term by term:
/// dc/dt = -i 2 pi H c in the basis (alpha, beta+, beta-, gamma).
fn amplitude_rhs(d: &BeamDrive, c: &[C; 4]) -> [C; 4] {
    let i = C::new(0.0, 1.0);
    let w = 2.0 * PI;
    let h1 = 0.5 * d.omega1;
    let h2 = 0.5 * d.omega2;
    let e_t = C::from_polar(1.0, d.theta);
    let e_f = C::from_polar(1.0, d.theta_f);
    let [ca, cp, cm, cg] = *c;
    [
        -i * w * h1 * (cp + cm),
        -i * w * (h1 * ca + d.delta1 * cp + h2 * e_t.conj() * cg),
        -i * w * (h1 * ca + d.delta1 * cm - h2 * e_f.conj() * cg),
        -i * w * (h2 * e_t * cp - h2 * e_f * cm + (d.delta1 + d.delta2) * cg),
    ]
}

fn axpy(a: &[C; 4], s: f64, b: &[C; 4]) -> [C; 4] {
    std::array::from_fn(|k| a[k] + b[k] * s)
}

fn rk4_step(d: &BeamDrive, c: &[C; 4], dt: f64) -> [C; 4] {
    let k1 = amplitude_rhs(d, c);
    let k2 = amplitude_rhs(d, &axpy(c, 0.5 * dt, &k1));
    let k3 = amplitude_rhs(d, &axpy(c, 0.5 * dt, &k2));
    let k4 = amplitude_rhs(d, &axpy(c, dt, &k3));
    std::array::from_fn(|k| c[k] + (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]) * (dt / 6.0))
}

/// Amplitudes at `t_end` from `c0` with a fixed RK4 step.
pub fn rk4_amplitudes(d: &BeamDrive, c0: [C; 4], t_end: f64, dt: f64) -> Vector4<C> {
    let steps = (t_end / dt).round() as usize;
    let h = t_end / steps as f64;
    let mut c = c0;
    for _ in 0..steps {
        c = rk4_step(d, &c, h);
    }
    Vector4::from(c)
}

/// (1/T) int_0^T |c_gamma|^2 dt by RK4 and the composite Simpson rule,
/// starting from |alpha>.
pub fn finite_time_average_p_gamma(d: &BeamDrive, t_total: f64, dt: f64) -> f64 {
    let mut steps = (t_total / dt).round() as usize;
    steps += steps % 2;
    let h = t_total / steps as f64;
    let z = C::new(0.0, 0.0);
    let mut c = [C::new(1.0, 0.0), z, z, z];
    let mut acc = 0.0;
    for n in 0..=steps {
        let w = if n == 0 || n == steps {
            1.0
        } else if n % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * c[3].norm_sqr();
        if n < steps {
            c = rk4_step(d, &c, h);
        }
    }
    acc * h / 3.0 / t_total
}

type M4 = Matrix4<C>;

fn oracle_hamiltonian(d: &BeamDrive) -> M4 {
    // columns of H from the amplitude equations with unit vectors
    let mut h = M4::zeros();
    for col in 0..4 {
        let mut e = [C::new(0.0, 0.0); 4];
        e[col] = C::new(1.0, 0.0);
        let r = amplitude_rhs(d, &e);
        for row in 0..4 {
            // r = -i 2 pi H e  =>  H e = i r / 2 pi
            h[(row, col)] = C::new(0.0, 1.0) * r[row] / (2.0 * PI);
        }
    }
    h
}

fn lindblad_rhs(h: &M4, kappa: f64, rho: &M4) -> M4 {
    let i = C::new(0.0, 1.0);
    let mut out = (h * rho - rho * h) * (-i);
    // (to, from) for gamma -> beta+, beta-, alpha and beta+- -> alpha
    for (to, from) in [(1, 3), (2, 3), (0, 3), (0, 1), (0, 2)] {
        let mut d = M4::zeros();
        // L rho L^dag puts rho[from, from] at [to, to]
        d[(to, to)] += rho[(from, from)];
        // -1/2 {L^dag L, rho}: L^dag L = |from><from|
        for k in 0..4 {
            d[(from, k)] -= 0.5 * rho[(from, k)];
            d[(k, from)] -= 0.5 * rho[(k, from)];
        }
        out += d * C::new(kappa, 0.0);
    }
    out * C::new(2.0 * PI, 0.0)
}

/// rho(t_end) from |alpha><alpha| with a fixed RK4 step.
pub fn rk4_density(d: &BeamDrive, kappa: f64, t_end: f64, dt: f64) -> M4 {
    let h = oracle_hamiltonian(d);
    let steps = (t_end / dt).round() as usize;
    let dt = t_end / steps as f64;
    let mut rho = M4::zeros();
    rho[(0, 0)] = C::new(1.0, 0.0);
    let half = C::new(0.5 * dt, 0.0);
    let full = C::new(dt, 0.0);
    for _ in 0..steps {
        let k1 = lindblad_rhs(&h, kappa, &rho);
        let k2 = lindblad_rhs(&h, kappa, &(rho + k1 * half));
        let k3 = lindblad_rhs(&h, kappa, &(rho + k2 * half));
        let k4 = lindblad_rhs(&h, kappa, &(rho + k3 * full));
        rho += (k1 + k2 * C::new(2.0, 0.0) + k3 * C::new(2.0, 0.0) + k4) * C::new(dt / 6.0, 0.0);
    }
    rho
}
