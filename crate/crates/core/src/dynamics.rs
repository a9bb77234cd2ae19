//! Liouvillians for the three dissipation models, time propagation and
//! steady states.
//!
//! The global and classical generators live in the eigenbasis `{|+>, |->}`
//! with jump operators `|-><+|`, `|+><-|` and the dephasing operators
//! `A_i(0)`. The local generator lives in the site basis with the site
//! projectors as dephasing operators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baths::{RateSet, Statistics};
use crate::error::{Error, Result};
use crate::linalg::{self, NullVector, Propagator};
use crate::model::{Basis, DensityMatrix, Eigensystem, SystemParams};
use crate::{Mat2, Mat4, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Microscopic dissipators derived in the eigenbasis of the coupled chain.
    Global,
    /// Phenomenological dephasing of each site.
    Local,
    /// Global structure with classical (symmetric) noise rates.
    Classical,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Global, Model::Local, Model::Classical];

    pub fn name(&self) -> &'static str {
        match self {
            Model::Global => "global",
            Model::Local => "local",
            Model::Classical => "classical",
        }
    }

    pub fn basis(&self) -> Basis {
        match self {
            Model::Local => Basis::Site,
            Model::Global | Model::Classical => Basis::Eigen,
        }
    }

    /// Bath statistics this model is built from.
    pub fn statistics(&self) -> Statistics {
        match self {
            Model::Classical => Statistics::Classical,
            Model::Global | Model::Local => Statistics::Quantum,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(Model::Global),
            "local" => Ok(Model::Local),
            "classical" => Ok(Model::Classical),
            other => Err(Error::Config(format!("unknown model '{other}'"))),
        }
    }
}

/// Generator of the master equation acting on column-stacked density matrices.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    model: Model,
    eig: Eigensystem,
    rates: RateSet,
    hamiltonian: Mat2,
    unitary: Mat4,
    dissipators: [Mat4; 2],
    generator: Mat4,
}

fn projector(i: usize) -> Mat2 {
    let mut p = Mat2::zeros();
    p[(i, i)] = C64::new(1.0, 0.0);
    p
}

fn real_diag(a: f64, b: f64) -> Mat2 {
    Mat2::new(
        C64::new(a, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(b, 0.0),
    )
}

fn scaled(m: Mat4, rate: f64) -> Mat4 {
    m * C64::new(rate, 0.0)
}

pub fn build_liouvillian(model: Model, eig: &Eigensystem, rates: &RateSet) -> Result<Liouvillian> {
    let compatible = match model {
        Model::Global => rates.statistics == Statistics::Quantum,
        Model::Classical => rates.statistics == Statistics::Classical,
        Model::Local => true,
    };
    if !compatible {
        return Err(Error::ModelRatesMismatch {
            model,
            statistics: rates.statistics.name(),
        });
    }

    let basis = model.basis();
    let hamiltonian = eig.hamiltonian_in(basis);
    let unitary = linalg::commutator_generator(&hamiltonian);

    let dissipators = match model {
        Model::Global | Model::Classical => {
            let lower = linalg::lindblad_dissipator(&{
                let mut m = Mat2::zeros();
                m[(1, 0)] = C64::new(1.0, 0.0);
                m
            });
            let raise = linalg::lindblad_dissipator(&{
                let mut m = Mat2::zeros();
                m[(0, 1)] = C64::new(1.0, 0.0);
                m
            });
            let dephasing = [
                real_diag(eig.alpha_plus.powi(2), eig.alpha_minus.powi(2)),
                real_diag(eig.beta_plus.powi(2), eig.beta_minus.powi(2)),
            ];
            let mut out = [Mat4::zeros(); 2];
            for (i, d) in out.iter_mut().enumerate() {
                *d = scaled(linalg::lindblad_dissipator(&dephasing[i]), rates.gamma0[i])
                    + scaled(lower, rates.gamma_plus_minus[i])
                    + scaled(raise, rates.gamma_minus_plus[i]);
            }
            out
        }
        Model::Local => {
            [0, 1].map(|i| scaled(linalg::lindblad_dissipator(&projector(i)), rates.gamma0[i]))
        }
    };
    let generator = unitary + dissipators[0] + dissipators[1];
    Ok(Liouvillian {
        model,
        eig: *eig,
        rates: *rates,
        hamiltonian,
        unitary,
        dissipators,
        generator,
    })
}

impl Liouvillian {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn basis(&self) -> Basis {
        self.model.basis()
    }

    pub fn eigensystem(&self) -> &Eigensystem {
        &self.eig
    }

    pub fn params(&self) -> &SystemParams {
        &self.eig.params
    }

    pub fn rates(&self) -> &RateSet {
        &self.rates
    }

    /// System Hamiltonian in this generator's basis.
    pub fn hamiltonian(&self) -> &Mat2 {
        &self.hamiltonian
    }

    pub fn generator(&self) -> &Mat4 {
        &self.generator
    }

    pub fn unitary_part(&self) -> &Mat4 {
        &self.unitary
    }

    /// Dissipator of bath `i` (0 or 1).
    pub fn dissipator(&self, i: usize) -> &Mat4 {
        &self.dissipators[i]
    }

    /// `|| tr o L ||`, zero for a trace-preserving generator.
    pub fn trace_residual(&self) -> f64 {
        (linalg::trace_functional() * self.generator).norm()
    }

    fn check_basis(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.basis() != self.basis() {
            return Err(Error::BasisMismatch {
                expected: self.basis(),
                found: rho.basis(),
            });
        }
        Ok(())
    }

    /// `L[rho]` as a matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<Mat2> {
        self.check_basis(rho)?;
        Ok(linalg::unvectorize(
            &(self.generator * linalg::vectorize(rho.matrix())),
        ))
    }

    /// `L_i[rho]` for bath `i`.
    pub fn apply_dissipator(&self, i: usize, rho: &DensityMatrix) -> Result<Mat2> {
        self.check_basis(rho)?;
        Ok(linalg::unvectorize(
            &(self.dissipators[i] * linalg::vectorize(rho.matrix())),
        ))
    }

    /// `|| L vec(rho) ||`.
    pub fn residual(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(self.apply(rho)?.norm())
    }

    pub fn propagator(&self) -> Propagator {
        Propagator::new(&self.generator)
    }

    /// States at each requested time, sharing one decomposition of the generator.
    pub fn evolve(&self, rho0: &DensityMatrix, times: &[f64]) -> Result<Vec<DensityMatrix>> {
        self.check_basis(rho0)?;
        if let Some(&t) = times.iter().find(|&&t| !(t >= 0.0)) {
            return Err(Error::NegativeTime(t));
        }
        let prop = self.propagator();
        let v0 = linalg::vectorize(rho0.matrix());
        Ok(times
            .iter()
            .map(|&t| {
                let m = linalg::unvectorize(&(prop.at(t) * v0));
                DensityMatrix::from_matrix_unchecked(m, self.basis())
            })
            .collect())
    }

    /// Slowest nonzero decay rate of the generator.
    pub fn spectral_gap(&self) -> Option<f64> {
        let scale = self.generator.norm();
        match self.propagator() {
            Propagator::Spectral { eigenvalues, .. } => eigenvalues
                .iter()
                .map(|l| -l.re)
                .filter(|&r| r > 1e-12 * scale)
                .min_by(f64::total_cmp),
            Propagator::Pade { .. } => {
                let rates = self.rates.total_relaxation();
                (rates > 0.0).then_some(rates)
            }
        }
    }
}

/// `exp(L t) rho0`.
pub fn propagate(l: &Liouvillian, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        l.check_basis(rho0)?;
        return Ok(*rho0);
    }
    Ok(l.evolve(rho0, &[t])?[0])
}

#[derive(Debug, Clone, Copy)]
pub struct AnalyticState {
    pub rho: DensityMatrix,
    /// Total transition rate vanishes (no exchange): populations stay at their initial values.
    pub frozen_populations: bool,
}

/// Closed-form solution of the global master equation in the eigenbasis.
///
/// Populations relax at `Gamma_tot = Gamma_+- + Gamma_-+`; the eigencoherence
/// rotates at the gap `omega` and decays at `(Gamma_tot + gamma_phi) / 2`.
pub fn analytic_state(
    rates: &RateSet,
    eig: &Eigensystem,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<AnalyticState> {
    if rates.statistics != Statistics::Quantum {
        return Err(Error::WrongModel {
            required: "global",
            found: Model::Classical,
        });
    }
    if rho0.basis() != Basis::Eigen {
        return Err(Error::BasisMismatch {
            expected: Basis::Eigen,
            found: rho0.basis(),
        });
    }
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let total = rates.total_relaxation();
    let p_minus0 = rho0.p1();
    let (p_plus, p_minus, frozen) = if total > 0.0 {
        let decay = (-total * t).exp();
        let w_plus = rates.gamma_tot_mp / total;
        let w_minus = rates.gamma_tot_pm / total;
        let shift = w_minus - p_minus0;
        (w_plus + shift * decay, w_minus - shift * decay, false)
    } else {
        (rho0.p0(), p_minus0, true)
    };
    let coherence_decay = 0.5 * (total + rates.gamma_phi_eigen);
    let phase = C64::new(-coherence_decay * t, -eig.omega * t).exp();
    let c = rho0.coherence() * phase;
    let m = Mat2::new(C64::new(p_plus, 0.0), c, c.conj(), C64::new(p_minus, 0.0));
    Ok(AnalyticState {
        rho: DensityMatrix::from_matrix_unchecked(m, Basis::Eigen),
        frozen_populations: frozen,
    })
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    /// Singular values of the generator, descending; the last is the null one.
    pub singular_values: [f64; 4],
    /// `|| L vec(rho_ss) ||`.
    pub residual: f64,
}

impl SteadyState {
    pub fn smallest_singular_value(&self) -> f64 {
        self.singular_values[3]
    }

    pub fn largest_singular_value(&self) -> f64 {
        self.singular_values[0]
    }
}

/// Null vector of the generator by SVD, trace-normalized and Hermitized.
pub fn steady_state_numeric(l: &Liouvillian) -> Result<SteadyState> {
    let NullVector {
        vector,
        singular_values,
    } = linalg::null_vector(l.generator())?;
    let m = linalg::unvectorize(&vector);
    let tr = m[(0, 0)] + m[(1, 1)];
    if tr.norm() <= f64::EPSILON {
        return Err(Error::NoNullVector {
            smallest: singular_values[3],
            largest: singular_values[0],
        });
    }
    let rho = DensityMatrix::from_matrix_unchecked(m / tr, l.basis()).hermitized();
    let residual = l.residual(&rho)?;
    Ok(SteadyState {
        rho,
        singular_values,
        residual,
    })
}

/// Stationary populations `Gamma_-+ / Gamma_tot` and `Gamma_+- / Gamma_tot`
/// in the eigenbasis; valid for both eigenbasis models.
pub fn steady_state_analytic(rates: &RateSet) -> Result<DensityMatrix> {
    let total = rates.total_relaxation();
    if !(total > 0.0) {
        return Err(Error::ZeroTotalRate);
    }
    let p_plus = rates.gamma_tot_mp / total;
    let p_minus = rates.gamma_tot_pm / total;
    Ok(DensityMatrix::from_matrix_unchecked(
        real_diag(p_plus, p_minus),
        Basis::Eigen,
    ))
}

/// Long-time state by propagation over `multiple` slowest relaxation times.
pub fn steady_state_by_propagation(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    multiple: f64,
) -> Result<DensityMatrix> {
    let gap = l.spectral_gap().ok_or(Error::ZeroTotalRate)?;
    propagate(l, rho0, multiple / gap)
}

/// `exp(-H / k_B T) / Z` in the eigenbasis; the ground state `|-><-|` at `T = 0`.
pub fn gibbs_state(params: &SystemParams, temperature: f64) -> DensityMatrix {
    let eig = crate::model::diagonalize(params);
    let x = if temperature > 0.0 {
        eig.omega / temperature
    } else {
        f64::INFINITY
    };
    let p_plus = if x > crate::baths::OCCUPATION_CUTOFF {
        0.0
    } else {
        1.0 / (x.exp() + 1.0)
    };
    let p_minus = 1.0 / (1.0 + (-x).exp());
    DensityMatrix::from_matrix_unchecked(real_diag(p_plus, p_minus), Basis::Eigen)
}
