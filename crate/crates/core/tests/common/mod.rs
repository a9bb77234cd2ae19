//! Shared random draws and independent reference computations for the
//! integration tests.

#![allow(dead_code)]

use dephasing_core::baths::{rate_set, BathSpec, SpectralDensity};
use dephasing_core::config::RunConfig;
use dephasing_core::dynamics::{build_liouvillian, Liouvillian, Model};
use dephasing_core::model::{diagonalize, Basis, DensityMatrix, SystemParams};
use dephasing_core::{Mat2, C64};
use nalgebra::{Matrix2, SymmetricEigen};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random chain with `h in [0, 2]`, `delta in [0.05, 2]`.
pub fn draw_params(rng: &mut ChaCha8Rng) -> SystemParams {
    SystemParams::new(rng.gen_range(0.0..2.0), rng.gen_range(0.05..2.0)).unwrap()
}

pub fn draw_temperature(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.05..5.0)
}

/// Random full-rank density matrix `G G^+ / Tr`.
pub fn draw_state(rng: &mut ChaCha8Rng, basis: Basis) -> DensityMatrix {
    let g = Mat2::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr, basis).unwrap().hermitized()
}

pub struct Draw {
    pub params: SystemParams,
    pub kappa: f64,
    pub t1: f64,
    pub t2: f64,
}

impl Draw {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        Draw {
            params: draw_params(rng),
            kappa: rng.gen_range(0.1..2.0),
            t1: draw_temperature(rng),
            t2: draw_temperature(rng),
        }
    }

    pub fn config(&self, model: Model) -> RunConfig {
        RunConfig {
            h: self.params.h(),
            delta: self.params.delta(),
            kappa: self.kappa,
            t1: self.t1,
            t2: self.t2,
            model,
            ..RunConfig::default()
        }
    }

    pub fn liouvillian(&self, model: Model) -> Liouvillian {
        let eig = diagonalize(&self.params);
        let j = SpectralDensity::ohmic(self.kappa).unwrap();
        let s = model.statistics();
        let b1 = BathSpec::new(self.t1, j, s).unwrap();
        let b2 = BathSpec::new(self.t2, j, s).unwrap();
        build_liouvillian(model, &eig, &rate_set(&eig, &b1, &b2).unwrap()).unwrap()
    }
}

/// Generic symmetric eigensolver on the site Hamiltonian, ascending eigenvalues.
pub fn reference_eigen(params: &SystemParams) -> ([f64; 2], Matrix2<f64>) {
    let h = Matrix2::new(0.0, params.delta(), params.delta(), params.h());
    let se = SymmetricEigen::new(h);
    let (a, b) = (se.eigenvalues[0], se.eigenvalues[1]);
    let (lo, hi) = if a <= b { (0, 1) } else { (1, 0) };
    let mut v = Matrix2::zeros();
    v.set_column(0, &se.eigenvectors.column(lo));
    v.set_column(1, &se.eigenvectors.column(hi));
    ([se.eigenvalues[lo], se.eigenvalues[hi]], v)
}

/// Bose-Einstein occupation written out directly.
pub fn bose(nu: f64, t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        1.0 / ((nu / t).exp() - 1.0)
    }
}

/// Fourth-order Runge-Kutta on `drho/dt = L[rho]`, acting on matrices directly.
pub fn rk4(l: &Liouvillian, rho0: &DensityMatrix, t: f64, steps: usize) -> Mat2 {
    let dt = t / steps as f64;
    let f = |m: &Mat2| {
        l.apply(&DensityMatrix::from_matrix_unchecked(*m, l.basis()))
            .unwrap()
    };
    let mut m = *rho0.matrix();
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    for _ in 0..steps {
        let k1 = f(&m);
        let k2 = f(&(m + k1 * half));
        let k3 = f(&(m + k2 * half));
        let k4 = f(&(m + k3 * full));
        m += (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    m
}

pub fn max_abs(m: &Mat2) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
