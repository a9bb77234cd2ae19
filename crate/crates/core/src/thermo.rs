//! Heat currents in the three models, the coherence/population identity and
//! the occupation-gradient diagnostics.
//!
//! Sign convention: `J_i > 0` means energy flows from bath `i` into the chain.

use serde::Serialize;

use crate::baths::{occupation, BathSpec, RateSet, Statistics};
use crate::dynamics::{Liouvillian, Model};
use crate::error::{Error, Result};
use crate::model::{Basis, DensityMatrix, Eigensystem, SystemParams};
use crate::{Mat2, C64};

/// Limit of `J_1 / (kappa delta^2)` for ohmic baths as `n_1 -> inf`, `n_2 -> 0`.
pub const SATURATION_COEFFICIENT: f64 = 0.5;

fn trace_product(a: &Mat2, b: &Mat2) -> C64 {
    (a * b).trace()
}

/// `Tr{L_i[rho] H_S}` for bath `i` (0 or 1).
pub fn current_trace(l: &Liouvillian, bath: usize, rho: &DensityMatrix) -> Result<f64> {
    let d = l.apply_dissipator(bath, rho)?;
    Ok(trace_product(&d, l.hamiltonian()).re)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurrentReport {
    pub model: Model,
    pub j1: f64,
    pub j2: f64,
    /// `d<H_S>/dt = Tr{L[rho] H_S}`.
    pub dh_dt: f64,
    #[serde(skip)]
    pub state: DensityMatrix,
}

impl CurrentReport {
    /// `j1 + j2 - d<H>/dt`, zero by the continuity equation.
    pub fn first_law_defect(&self) -> f64 {
        self.j1 + self.j2 - self.dh_dt
    }
}

pub fn current_report(l: &Liouvillian, rho: &DensityMatrix) -> Result<CurrentReport> {
    let j1 = current_trace(l, 0, rho)?;
    let j2 = current_trace(l, 1, rho)?;
    let dh_dt = trace_product(&l.apply(rho)?, l.hamiltonian()).re;
    Ok(CurrentReport {
        model: l.model(),
        j1,
        j2,
        dh_dt,
        state: *rho,
    })
}

/// Energy expectation `Tr{rho H_S}` in the state's own basis.
pub fn energy(rho: &DensityMatrix, eig: &Eigensystem) -> f64 {
    trace_product(rho.matrix(), &eig.hamiltonian_in(rho.basis())).re
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlaggedCurrent {
    pub value: f64,
    /// `delta = 0`: the current is identically zero.
    pub no_exchange: bool,
}

/// Closed-form steady current `J_1 = -J~_1(omega) omega (P_-- - P_++) delta_n / 2`.
///
/// Assumes both baths share the effective spectral density at the gap.
pub fn current_analytic(
    rates: &RateSet,
    eig: &Eigensystem,
    rho_ss: &DensityMatrix,
) -> Result<FlaggedCurrent> {
    if rates.statistics != Statistics::Quantum {
        return Err(Error::WrongModel {
            required: "global",
            found: Model::Classical,
        });
    }
    if rho_ss.basis() != Basis::Eigen {
        return Err(Error::BasisMismatch {
            expected: Basis::Eigen,
            found: rho_ss.basis(),
        });
    }
    if eig.no_exchange() {
        return Ok(FlaggedCurrent {
            value: 0.0,
            no_exchange: true,
        });
    }
    let [jt1, jt2] = rates.j_tilde;
    if (jt1 - jt2).abs() > 1e-14 * jt1.abs().max(jt2.abs()) {
        return Err(Error::SpectralMismatch(jt1, jt2));
    }
    let gap = rho_ss.p1() - rho_ss.p0();
    let value = -jt1 * eig.omega * gap * rates.occupation_difference() / 2.0;
    Ok(FlaggedCurrent {
        value,
        no_exchange: false,
    })
}

/// Both sides of `P_-- - P_++ = -rho_12 / (alpha_+ alpha_-)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoherenceIdentity {
    /// Site-basis coherence `<1|rho|2>`.
    pub rho12_re: f64,
    pub rho12_im: f64,
    /// `P_-- - P_++`.
    pub population_difference: f64,
    /// `-Re(rho_12) / (alpha_+ alpha_-)`.
    pub from_coherence: f64,
}

impl CoherenceIdentity {
    pub fn defect(&self) -> f64 {
        (self.population_difference - self.from_coherence).abs()
    }
}

pub fn coherence_current_identity(
    rho_ss: &DensityMatrix,
    eig: &Eigensystem,
) -> Result<CoherenceIdentity> {
    if eig.no_exchange() {
        return Err(Error::NoExchange);
    }
    let eigen = rho_ss.to_basis(Basis::Eigen, eig);
    let site = rho_ss.to_basis(Basis::Site, eig);
    let rho12 = site.coherence();
    Ok(CoherenceIdentity {
        rho12_re: rho12.re,
        rho12_im: rho12.im,
        population_difference: eigen.p1() - eigen.p0(),
        from_coherence: -rho12.re / eig.exchange_amplitude(),
    })
}

/// Local-model current `J_1 = -gamma_1(0) delta Re(rho_12)`; `rho` in the site basis.
pub fn current_local(rates: &RateSet, params: &SystemParams, rho: &DensityMatrix) -> Result<f64> {
    if rho.basis() != Basis::Site {
        return Err(Error::BasisMismatch {
            expected: Basis::Site,
            found: rho.basis(),
        });
    }
    Ok(-rates.gamma0[0] * params.delta() * rho.coherence().re)
}

/// Classical-model current `J_1 = -gamma^c_1(omega) alpha_+ alpha_- omega Re(rho_12)`.
///
/// On eigen-diagonal states (in particular the steady state) this equals
/// `Tr{L_1[rho] H_S}`.
pub fn current_classical(rates: &RateSet, eig: &Eigensystem, rho: &DensityMatrix) -> Result<f64> {
    if rates.statistics != Statistics::Classical {
        return Err(Error::WrongModel {
            required: "classical",
            found: Model::Global,
        });
    }
    if eig.no_exchange() {
        return Err(Error::NoExchange);
    }
    let rho12 = rho.to_basis(Basis::Site, eig).coherence().re;
    Ok(-rates.gamma_gap[0] * eig.exchange_amplitude() * eig.omega * rho12)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OccupationGradient {
    pub n_bar: f64,
    /// `n2 - n1`.
    pub delta_n: f64,
    /// High-temperature form `(k_B T2 - k_B T1) / omega`.
    pub delta_n_linearized: f64,
    /// `|linearized - delta_n| / |delta_n|`; zero when both vanish.
    pub relative_error: f64,
}

pub fn occupation_gradient(
    bath1: &BathSpec,
    bath2: &BathSpec,
    omega: f64,
) -> Result<OccupationGradient> {
    let n1 = occupation(omega, bath1.temperature)?;
    let n2 = occupation(omega, bath2.temperature)?;
    let delta_n = n2 - n1;
    let linear = (bath2.temperature - bath1.temperature) / omega;
    let diff = (linear - delta_n).abs();
    let relative_error = if delta_n == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / delta_n.abs()
    };
    Ok(OccupationGradient {
        n_bar: 0.5 * (n1 + n2),
        delta_n,
        delta_n_linearized: linear,
        relative_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baths::{rate_set, SpectralDensity};
    use crate::dynamics::{
        build_liouvillian, propagate, steady_state_analytic, steady_state_numeric,
    };
    use crate::model::diagonalize;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn system(h: f64, delta: f64, t1: f64, t2: f64, stats: Statistics) -> (Eigensystem, RateSet) {
        let eig = diagonalize(&SystemParams::new(h, delta).unwrap());
        let j = SpectralDensity::ohmic(1.0).unwrap();
        let b1 = BathSpec::new(t1, j, stats).unwrap();
        let b2 = BathSpec::new(t2, j, stats).unwrap();
        (eig, rate_set(&eig, &b1, &b2).unwrap())
    }

    #[test]
    fn reference_steady_current() {
        let (eig, rates) = system(1.0, 0.5, 1.0, 0.5, Statistics::Quantum);
        let l = build_liouvillian(Model::Global, &eig, &rates).unwrap();
        let ss = steady_state_numeric(&l).unwrap().rho;
        let report = current_report(&l, &ss).unwrap();
        assert_relative_eq!(report.j1, 0.023_336_712_618_437_85, max_relative = 1e-12);
        assert_abs_diff_eq!(report.j1 + report.j2, 0.0, epsilon = 1e-15);
        let analytic = current_analytic(&rates, &eig, &ss).unwrap();
        assert_relative_eq!(analytic.value, report.j1, max_relative = 1e-12);
    }

    #[test]
    fn equal_temperatures_carry_no_current() {
        let (eig, rates) = system(1.0, 0.5, 0.6, 0.6, Statistics::Quantum);
        let l = build_liouvillian(Model::Global, &eig, &rates).unwrap();
        let ss = steady_state_numeric(&l).unwrap().rho;
        let r = current_report(&l, &ss).unwrap();
        assert_abs_diff_eq!(r.j1, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.j2, 0.0, epsilon = 1e-15);
        assert_eq!(current_analytic(&rates, &eig, &ss).unwrap().value, 0.0);
    }

    #[test]
    fn swapping_baths_flips_current() {
        let (eig, a) = system(1.0, 0.5, 1.0, 0.3, Statistics::Quantum);
        let (_, b) = system(1.0, 0.5, 0.3, 1.0, Statistics::Quantum);
        let ja = current_analytic(&a, &eig, &steady_state_analytic(&a).unwrap())
            .unwrap()
            .value;
        let jb = current_analytic(&b, &eig, &steady_state_analytic(&b).unwrap())
            .unwrap()
            .value;
        assert!(ja > 0.0);
        assert_eq!(ja, -jb);
    }

    #[test]
    fn analytic_current_flags_and_errors() {
        let (eig, rates) = system(1.0, 0.0, 1.0, 0.3, Statistics::Quantum);
        let rho = DensityMatrix::maximally_mixed(Basis::Eigen);
        let f = current_analytic(&rates, &eig, &rho).unwrap();
        assert!(f.no_exchange);
        assert_eq!(f.value, 0.0);

        let eig = diagonalize(&SystemParams::new(1.0, 0.5).unwrap());
        let b1 = BathSpec::quantum(1.0, SpectralDensity::ohmic(1.0).unwrap()).unwrap();
        let b2 = BathSpec::quantum(0.3, SpectralDensity::ohmic(2.0).unwrap()).unwrap();
        let rates = rate_set(&eig, &b1, &b2).unwrap();
        assert!(matches!(
            current_analytic(&rates, &eig, &rho),
            Err(Error::SpectralMismatch(..))
        ));
        let site = DensityMatrix::maximally_mixed(Basis::Site);
        assert!(current_analytic(&rates, &eig, &site).is_err());
    }

    #[test]
    fn saturation_from_closed_form() {
        let (eig, rates) = system(1.0, 0.5, 1e7, 0.01, Statistics::Quantum);
        let ss = steady_state_analytic(&rates).unwrap();
        let j = current_analytic(&rates, &eig, &ss).unwrap().value;
        assert_relative_eq!(j / 0.25, SATURATION_COEFFICIENT, max_relative = 1e-6);
    }

    #[test]
    fn coherence_identity_cases() {
        let (eig, rates) = system(0.0, 0.5, 0.0, 0.0, Statistics::Quantum);
        let ss = steady_state_analytic(&rates).unwrap();
        let id = coherence_current_identity(&ss, &eig).unwrap();
        assert_abs_diff_eq!(id.rho12_re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(id.population_difference, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(id.from_coherence, 1.0, epsilon = 1e-15);

        let mixed = DensityMatrix::maximally_mixed(Basis::Eigen);
        let id = coherence_current_identity(&mixed, &eig).unwrap();
        assert_abs_diff_eq!(id.rho12_re, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(id.population_difference, 0.0, epsilon = 1e-16);

        let (eig, rates) = system(1.0, 0.7, 0.9, 0.2, Statistics::Quantum);
        let ss = steady_state_analytic(&rates).unwrap();
        let id = coherence_current_identity(&ss, &eig).unwrap();
        assert!(id.defect() < 1e-14);
        // P++ < P-- and alpha_+ alpha_- > 0 gives a negative coherence
        assert!(id.rho12_re < 0.0);

        let (eig0, _) = system(1.0, 0.0, 0.9, 0.2, Statistics::Quantum);
        assert!(matches!(
            coherence_current_identity(&ss, &eig0),
            Err(Error::NoExchange)
        ));
    }

    #[test]
    fn local_current_matches_trace_and_vanishes_at_steady_state() {
        let (eig, rates) = system(1.0, 0.4, 0.8, 0.3, Statistics::Quantum);
        let l = build_liouvillian(Model::Local, &eig, &rates).unwrap();
        let c = |re: f64, im: f64| C64::new(re, im);
        let rho = DensityMatrix::new(
            Mat2::new(c(0.7, 0.0), c(0.2, 0.15), c(0.2, -0.15), c(0.3, 0.0)),
            Basis::Site,
        )
        .unwrap();
        let eq = current_local(&rates, &eig.params, &rho).unwrap();
        assert_relative_eq!(
            eq,
            current_trace(&l, 0, &rho).unwrap(),
            max_relative = 1e-14
        );

        let ss = steady_state_numeric(&l).unwrap().rho;
        assert_abs_diff_eq!(
            current_local(&rates, &eig.params, &ss).unwrap(),
            0.0,
            epsilon = 1e-15
        );

        let imag = DensityMatrix::new(
            Mat2::new(c(0.5, 0.0), c(0.0, 0.3), c(0.0, -0.3), c(0.5, 0.0)),
            Basis::Site,
        )
        .unwrap();
        assert_eq!(current_local(&rates, &eig.params, &imag).unwrap(), 0.0);

        let one = DensityMatrix::diagonal(1.0, 0.0, Basis::Site).unwrap();
        let early = propagate(&l, &one, 1.0).unwrap();
        assert!(current_local(&rates, &eig.params, &early).unwrap().abs() > 1e-4);
        let late = propagate(&l, &one, 500.0).unwrap();
        assert!(current_local(&rates, &eig.params, &late).unwrap().abs() < 1e-12);

        let eigen = DensityMatrix::maximally_mixed(Basis::Eigen);
        assert!(current_local(&rates, &eig.params, &eigen).is_err());
    }

    #[test]
    fn classical_current() {
        let (eig, rates) = system(1.0, 0.5, 1.0, 0.2, Statistics::Classical);
        let l = build_liouvillian(Model::Classical, &eig, &rates).unwrap();
        let ss = steady_state_numeric(&l).unwrap().rho;
        assert!(current_classical(&rates, &eig, &ss).unwrap().abs() < 1e-12);
        assert!(current_trace(&l, 0, &ss).unwrap().abs() < 1e-12);
        for i in 0..2 {
            assert_eq!(rates.gamma_plus_minus[i], rates.gamma_minus_plus[i]);
        }
        let off = DensityMatrix::diagonal(0.8, 0.2, Basis::Eigen).unwrap();
        assert_relative_eq!(
            current_classical(&rates, &eig, &off).unwrap(),
            current_trace(&l, 0, &off).unwrap(),
            max_relative = 1e-13
        );
        let site_diag = DensityMatrix::diagonal(0.8, 0.2, Basis::Site).unwrap();
        assert_eq!(current_classical(&rates, &eig, &site_diag).unwrap(), 0.0);
    }

    #[test]
    fn occupation_gradient_regimes() {
        let j = SpectralDensity::ohmic(1.0).unwrap();
        let w = 1.0;
        let b = |t: f64| BathSpec::quantum(t, j).unwrap();
        let g = occupation_gradient(&b(0.4), &b(0.4), w).unwrap();
        assert_eq!(g.delta_n, 0.0);
        assert_eq!(g.relative_error, 0.0);
        let g = occupation_gradient(&b(100.0 * w), &b(110.0 * w), w).unwrap();
        assert!((g.delta_n - 10.0).abs() / g.delta_n < 0.01);
        assert!(g.relative_error < 0.01);
        let g = occupation_gradient(&b(0.2 * w), &b(0.3 * w), w).unwrap();
        assert!(g.relative_error > 0.10);
    }

    #[test]
    fn first_law_holds_along_a_trajectory() {
        let (eig, rates) = system(1.0, 0.5, 1.0, 0.3, Statistics::Quantum);
        let l = build_liouvillian(Model::Global, &eig, &rates).unwrap();
        let rho0 = DensityMatrix::diagonal(1.0, 0.0, Basis::Eigen).unwrap();
        let dt = 1e-6 / rates.total_relaxation();
        for t in [0.5, 1.0, 2.0] {
            let rho = propagate(&l, &rho0, t).unwrap();
            let r = current_report(&l, &rho).unwrap();
            let up = energy(&propagate(&l, &rho0, t + dt).unwrap(), &eig);
            let down = energy(&propagate(&l, &rho0, t - dt).unwrap(), &eig);
            let fd = (up - down) / (2.0 * dt);
            assert_abs_diff_eq!(r.first_law_defect(), 0.0, epsilon = 1e-15);
            assert_relative_eq!(r.j1 + r.j2, fd, max_relative = 1e-6);
        }
    }
}
