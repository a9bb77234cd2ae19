//! Two-site chain: Hamiltonian, closed-form eigenstructure and the
//! site/eigen basis change for 2x2 density matrices.
//!
//! Site basis is ordered `{|1>, |2>}`, eigenbasis `{|+>, |->}`. With the
//! constant offset dropped the Hamiltonian is `h |2><2| + delta (|1><2| + |2><1|)`.

use std::fmt;

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::{Mat2, C64};

/// Tolerance on `|tr rho - 1|` for a validated density matrix.
pub const TRACE_TOL: f64 = 1e-12;
/// Lowest eigenvalue accepted for a validated density matrix.
pub const PSD_TOL: f64 = -1e-12;
/// Largest anti-Hermitian part accepted for a validated density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    h: f64,
    delta: f64,
}

impl SystemParams {
    /// `h` is the on-site splitting `h2 - h1`, `delta` the inter-site coupling.
    pub fn new(h: f64, delta: f64) -> Result<Self> {
        if !h.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "non-finite h={h} delta={delta}"
            )));
        }
        if h < 0.0 || delta < 0.0 {
            return Err(Error::InvalidParams(format!(
                "h and delta must be non-negative, got h={h} delta={delta}"
            )));
        }
        if h == 0.0 && delta == 0.0 {
            return Err(Error::InvalidParams(
                "h = delta = 0 gives a fully degenerate Hamiltonian".into(),
            ));
        }
        Ok(Self { h, delta })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Site-basis Hamiltonian `[[0, delta], [delta, h]]`.
pub fn hamiltonian(params: &SystemParams) -> Mat2 {
    let d = C64::new(params.delta, 0.0);
    Matrix2::new(C64::new(0.0, 0.0), d, d, C64::new(params.h, 0.0))
}

/// Exact eigenstructure of the two-site Hamiltonian.
///
/// `|+-> = alpha_+- |1> + beta_+- |2>` with real amplitudes and `alpha_- > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigensystem {
    pub params: SystemParams,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub omega: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
}

impl Eigensystem {
    /// `delta = 0`: the baths cannot exchange energy with the chain.
    pub fn no_exchange(&self) -> bool {
        self.params.delta == 0.0
    }

    /// Effective exchange amplitude `alpha_+ alpha_- = delta / omega`.
    pub fn exchange_amplitude(&self) -> f64 {
        self.alpha_plus * self.alpha_minus
    }

    /// Columns are `|+>` and `|->` written in the site basis.
    pub fn transform(&self) -> Mat2 {
        Matrix2::new(
            C64::new(self.alpha_plus, 0.0),
            C64::new(self.alpha_minus, 0.0),
            C64::new(self.beta_plus, 0.0),
            C64::new(self.beta_minus, 0.0),
        )
    }

    /// Hamiltonian in the eigenbasis, `diag(eps_+, eps_-)`.
    pub fn hamiltonian_eigen(&self) -> Mat2 {
        Matrix2::new(
            C64::new(self.eps_plus, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(self.eps_minus, 0.0),
        )
    }

    pub fn hamiltonian_in(&self, basis: Basis) -> Mat2 {
        match basis {
            Basis::Site => hamiltonian(&self.params),
            Basis::Eigen => self.hamiltonian_eigen(),
        }
    }
}

pub fn diagonalize(params: &SystemParams) -> Eigensystem {
    let h = params.h;
    let delta = params.delta;
    let omega = h.hypot(2.0 * delta);
    let eps_plus = 0.5 * (h + omega);
    // eps_+ eps_- = -delta^2 avoids the cancellation in (h - omega) / 2
    let eps_minus = -delta * delta / eps_plus;
    let alpha_minus = ((omega + h) / (2.0 * omega)).sqrt();
    let alpha_plus = delta * (2.0 / (omega * (omega + h))).sqrt();
    Eigensystem {
        params: *params,
        eps_plus,
        eps_minus,
        omega,
        alpha_plus,
        alpha_minus,
        beta_plus: alpha_minus,
        beta_minus: -alpha_plus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Site,
    Eigen,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Site => f.write_str("site"),
            Basis::Eigen => f.write_str("eigen"),
        }
    }
}

/// A 2x2 density matrix tagged with the basis it is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: Mat2,
    basis: Basis,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: Mat2, basis: Basis) -> Result<Self> {
        let anti = (matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !anti.is_finite() || anti > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (|rho - rho^+| = {anti:e})"
            )));
        }
        let state = Self { matrix, basis };
        let tr = state.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = state.min_eigenvalue();
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(state)
    }

    /// Wraps a matrix without validation; used for propagated and solved states.
    pub fn from_matrix_unchecked(matrix: Mat2, basis: Basis) -> Self {
        Self { matrix, basis }
    }

    /// `p0 |0><0| + p1 |1><1|` in the given basis (for the eigenbasis, index 0 is `|+>`).
    pub fn diagonal(p0: f64, p1: f64, basis: Basis) -> Result<Self> {
        Self::new(
            Matrix2::new(
                C64::new(p0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(p1, 0.0),
            ),
            basis,
        )
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        Self::from_matrix_unchecked(Matrix2::identity() * C64::new(0.5, 0.0), basis)
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn trace(&self) -> f64 {
        (self.matrix[(0, 0)] + self.matrix[(1, 1)]).re
    }

    /// Population of the first basis state (`|1>` or `|+>`).
    pub fn p0(&self) -> f64 {
        self.matrix[(0, 0)].re
    }

    /// Population of the second basis state (`|2>` or `|->`).
    pub fn p1(&self) -> f64 {
        self.matrix[(1, 1)].re
    }

    /// Off-diagonal element `<0|rho|1>` (`rho_12` or `P_+-`).
    pub fn coherence(&self) -> C64 {
        self.matrix[(0, 1)]
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn to_basis(&self, target: Basis, eig: &Eigensystem) -> Self {
        change_basis(self, eig, target)
    }

    /// `1/2 ||rho - sigma||_1`; both states must share a basis.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis,
                found: other.basis,
            });
        }
        let [lo, hi] = hermitian_eigenvalues(&(self.matrix - other.matrix));
        Ok(0.5 * (lo.abs() + hi.abs()))
    }

    pub fn hermitized(&self) -> Self {
        Self {
            matrix: (self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0),
            basis: self.basis,
        }
    }
}

/// Closed-form eigenvalues of the Hermitian part of a 2x2 matrix.
fn hermitian_eigenvalues(m: &Mat2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    [mean - radius, mean + radius]
}

/// Unitary conjugation by the amplitude matrix; a no-op when `target` matches.
pub fn change_basis(rho: &DensityMatrix, eig: &Eigensystem, target: Basis) -> DensityMatrix {
    let u = eig.transform();
    let matrix = match (rho.basis, target) {
        (Basis::Site, Basis::Eigen) => u.transpose() * rho.matrix * u,
        (Basis::Eigen, Basis::Site) => u * rho.matrix * u.transpose(),
        _ => rho.matrix,
    };
    DensityMatrix {
        matrix,
        basis: target,
    }
}
