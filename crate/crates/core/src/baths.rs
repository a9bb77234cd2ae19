//! Reservoir properties: power-law spectral densities, Bose-Einstein
//! occupations, quantum and classical rate functions, and the rate set that
//! feeds the Liouvillians.
//!
//! Temperatures are `k_B T` in energy units throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Eigensystem;

/// Above this `nu / k_B T` the occupation is returned as exactly zero.
pub const OCCUPATION_CUTOFF: f64 = 700.0;

/// `J(nu) = kappa * nu^exponent` for `nu >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDensity {
    pub kappa: f64,
    pub exponent: f64,
}

impl SpectralDensity {
    pub fn new(kappa: f64, exponent: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidBath(format!(
                "kappa must be positive, got {kappa}"
            )));
        }
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidBath(format!(
                "exponent must be positive, got {exponent}"
            )));
        }
        Ok(Self { kappa, exponent })
    }

    pub fn ohmic(kappa: f64) -> Result<Self> {
        Self::new(kappa, 1.0)
    }

    /// Evaluated at `|nu|`.
    pub fn eval(&self, nu: f64) -> f64 {
        let nu = nu.abs();
        if self.exponent == 1.0 {
            self.kappa * nu
        } else {
            self.kappa * nu.powf(self.exponent)
        }
    }

    /// Behaviour of `J(nu) / nu` as `nu -> 0`.
    pub fn zero_frequency_slope(&self) -> ZeroFrequencySlope {
        if self.exponent == 1.0 {
            ZeroFrequencySlope::Finite(self.kappa)
        } else if self.exponent > 1.0 {
            ZeroFrequencySlope::Vanishing
        } else {
            ZeroFrequencySlope::Divergent
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroFrequencySlope {
    Finite(f64),
    Vanishing,
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Quantum,
    Classical,
}

impl Statistics {
    pub fn name(&self) -> &'static str {
        match self {
            Statistics::Quantum => "quantum",
            Statistics::Classical => "classical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub temperature: f64,
    pub spectral: SpectralDensity,
    pub statistics: Statistics,
}

impl BathSpec {
    pub fn new(
        temperature: f64,
        spectral: SpectralDensity,
        statistics: Statistics,
    ) -> Result<Self> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::InvalidBath(format!(
                "temperature must be finite and non-negative, got {temperature}"
            )));
        }
        Ok(Self {
            temperature,
            spectral,
            statistics,
        })
    }

    pub fn quantum(temperature: f64, spectral: SpectralDensity) -> Result<Self> {
        Self::new(temperature, spectral, Statistics::Quantum)
    }

    pub fn classical(temperature: f64, spectral: SpectralDensity) -> Result<Self> {
        Self::new(temperature, spectral, Statistics::Classical)
    }

    /// Rate function of this bath, dispatching on its statistics.
    pub fn gamma(&self, nu: f64) -> Result<f64> {
        match self.statistics {
            Statistics::Quantum => gamma_quantum(self, nu),
            Statistics::Classical => gamma_classical(self, nu),
        }
    }
}

/// Bose-Einstein occupation `1 / (exp(nu / k_B T) - 1)`.
pub fn occupation(nu: f64, temperature: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::NonPositiveFrequency(nu));
    }
    if temperature <= 0.0 {
        return Ok(0.0);
    }
    let x = nu / temperature;
    if x > OCCUPATION_CUTOFF {
        return Ok(0.0);
    }
    Ok(1.0 / x.exp_m1())
}

/// `lim_{nu->0} J(nu)/nu * k_B T`.
fn zero_frequency_rate(bath: &BathSpec) -> Result<f64> {
    if bath.temperature == 0.0 {
        return Ok(0.0);
    }
    match bath.spectral.zero_frequency_slope() {
        ZeroFrequencySlope::Finite(slope) => Ok(slope * bath.temperature),
        ZeroFrequencySlope::Vanishing => Ok(0.0),
        ZeroFrequencySlope::Divergent => Err(Error::DivergentDephasing {
            exponent: bath.spectral.exponent,
        }),
    }
}

/// Harmonic-oscillator bath: emission `J(nu)(1+n)` for `nu > 0`,
/// absorption `J(|nu|) n` for `nu < 0`, dephasing limit at `nu = 0`.
pub fn gamma_quantum(bath: &BathSpec, nu: f64) -> Result<f64> {
    if bath.statistics != Statistics::Quantum {
        return Err(Error::InvalidBath(
            "gamma_quantum called on a classical bath".into(),
        ));
    }
    if nu == 0.0 {
        return zero_frequency_rate(bath);
    }
    let j = bath.spectral.eval(nu);
    let n = occupation(nu.abs(), bath.temperature)?;
    Ok(if nu > 0.0 { j * (1.0 + n) } else { j * n })
}

/// Classical stochastic bath. The noise spectrum is symmetric, so the rate
/// is even in `nu`; it is calibrated to `J(|nu|) n_|nu|`, i.e. the quantum
/// rate with the spontaneous term removed, and shares the quantum dephasing
/// limit at `nu = 0`.
pub fn gamma_classical(bath: &BathSpec, nu: f64) -> Result<f64> {
    if bath.statistics != Statistics::Classical {
        return Err(Error::InvalidBath(
            "gamma_classical called on a quantum bath".into(),
        ));
    }
    if nu == 0.0 {
        return zero_frequency_rate(bath);
    }
    let nu = nu.abs();
    Ok(bath.spectral.eval(nu) * occupation(nu, bath.temperature)?)
}

/// `J~(omega) = J(omega) delta^2 / omega^2`.
pub fn effective_spectral_density(spec: &SpectralDensity, eig: &Eigensystem) -> f64 {
    let ratio = eig.params.delta() / eig.omega;
    spec.eval(eig.omega) * ratio * ratio
}

/// Every rate the dynamics needs, indexed by bath (`[bath1, bath2]`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateSet {
    pub statistics: Statistics,
    /// `Gamma^(i)_{+-}`, decay `|+> -> |->` driven by bath i.
    pub gamma_plus_minus: [f64; 2],
    /// `Gamma^(i)_{-+}`, excitation `|-> -> |+>`.
    pub gamma_minus_plus: [f64; 2],
    /// `gamma_i(0)`.
    pub gamma0: [f64; 2],
    /// `gamma_i(omega)`.
    pub gamma_gap: [f64; 2],
    /// `gamma_i(-omega)`.
    pub gamma_neg_gap: [f64; 2],
    /// Occupations `n^(i)_omega` at the gap.
    pub occupation: [f64; 2],
    pub j_tilde: [f64; 2],
    /// Eigencoherence pure-dephasing rate.
    pub gamma_phi_eigen: f64,
    pub gamma_tot_pm: f64,
    pub gamma_tot_mp: f64,
    pub omega: f64,
    pub no_exchange: bool,
    /// Some bath has `exponent > 1`, so its zero-frequency dephasing vanishes.
    pub vanishing_dephasing: bool,
}

impl RateSet {
    pub fn total_relaxation(&self) -> f64 {
        self.gamma_tot_pm + self.gamma_tot_mp
    }

    /// `n_bar = (n1 + n2) / 2`.
    pub fn mean_occupation(&self) -> f64 {
        0.5 * (self.occupation[0] + self.occupation[1])
    }

    /// `delta_n = n2 - n1`.
    pub fn occupation_difference(&self) -> f64 {
        self.occupation[1] - self.occupation[0]
    }
}

pub fn rate_set(eig: &Eigensystem, bath1: &BathSpec, bath2: &BathSpec) -> Result<RateSet> {
    if bath1.statistics != bath2.statistics {
        return Err(Error::MixedStatistics);
    }
    let baths = [bath1, bath2];
    let omega = eig.omega;
    let exchange = eig.exchange_amplitude().powi(2);

    let mut rates = RateSet {
        statistics: bath1.statistics,
        gamma_plus_minus: [0.0; 2],
        gamma_minus_plus: [0.0; 2],
        gamma0: [0.0; 2],
        gamma_gap: [0.0; 2],
        gamma_neg_gap: [0.0; 2],
        occupation: [0.0; 2],
        j_tilde: [0.0; 2],
        gamma_phi_eigen: 0.0,
        gamma_tot_pm: 0.0,
        gamma_tot_mp: 0.0,
        omega,
        no_exchange: eig.no_exchange(),
        vanishing_dephasing: false,
    };
    for (i, bath) in baths.iter().enumerate() {
        rates.gamma0[i] = bath.gamma(0.0)?;
        rates.gamma_gap[i] = bath.gamma(omega)?;
        rates.gamma_neg_gap[i] = bath.gamma(-omega)?;
        rates.occupation[i] = occupation(omega, bath.temperature)?;
        rates.gamma_plus_minus[i] = rates.gamma_gap[i] * exchange;
        rates.gamma_minus_plus[i] = rates.gamma_neg_gap[i] * exchange;
        rates.j_tilde[i] = effective_spectral_density(&bath.spectral, eig);
        if bath.spectral.zero_frequency_slope() == ZeroFrequencySlope::Vanishing {
            rates.vanishing_dephasing = true;
        }
    }
    rates.gamma_tot_pm = rates.gamma_plus_minus.iter().sum();
    rates.gamma_tot_mp = rates.gamma_minus_plus.iter().sum();
    // (alpha_+^2 - alpha_-^2)^2 = (beta_+^2 - beta_-^2)^2 = h^2 / omega^2
    let contrast = eig.params.h() / omega;
    rates.gamma_phi_eigen = (rates.gamma0[0] + rates.gamma0[1]) * contrast * contrast;
    Ok(rates)
}
