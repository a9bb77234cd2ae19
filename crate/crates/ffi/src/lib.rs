//! C ABI over `dephasing-core`.
//!
//! Every function returns a [`DephasingStatus`]; on failure the message is
//! available from [`dephasing_last_error`] on the same thread. Systems are
//! opaque handles created by [`dephasing_system_new`] and released with
//! [`dephasing_system_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dephasing_core::baths::{rate_set, BathSpec, SpectralDensity};
use dephasing_core::dynamics::{
    build_liouvillian, propagate, steady_state_numeric, Liouvillian, Model,
};
use dephasing_core::model::{diagonalize, Basis, DensityMatrix, SystemParams};
use dephasing_core::sweep::alternative_current;
use dephasing_core::thermo::current_report;
use dephasing_core::{Error, Mat2, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidBath = 3,
    DivergentDephasing = 4,
    InvalidState = 5,
    BasisMismatch = 6,
    NegativeTime = 7,
    DegenerateSteadyState = 8,
    NoNullVector = 9,
    Panic = 10,
    Other = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingModel {
    Global = 0,
    Local = 1,
    Classical = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingBasis {
    Site = 0,
    Eigen = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DephasingEigensystem {
    pub omega: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
}

/// Row-major 2x2 complex matrix: entries `[00, 01, 10, 11]`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DephasingDensity {
    pub re: [f64; 4],
    pub im: [f64; 4],
    pub basis: DephasingBasis,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DephasingCurrents {
    pub j1: f64,
    pub j2: f64,
    pub dh_dt: f64,
    /// Current from the model's closed form.
    pub j1_closed_form: f64,
}

/// Opaque handle.
pub struct DephasingSystem {
    liouvillian: Liouvillian,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DephasingStatus {
    match e {
        Error::InvalidParams(_) | Error::NonPositiveFrequency(_) => DephasingStatus::InvalidParams,
        Error::InvalidBath(_) | Error::MixedStatistics | Error::ModelRatesMismatch { .. } => {
            DephasingStatus::InvalidBath
        }
        Error::DivergentDephasing { .. } => DephasingStatus::DivergentDephasing,
        Error::InvalidState(_) => DephasingStatus::InvalidState,
        Error::BasisMismatch { .. } => DephasingStatus::BasisMismatch,
        Error::NegativeTime(_) => DephasingStatus::NegativeTime,
        Error::DegenerateSteadyState { .. } => DephasingStatus::DegenerateSteadyState,
        Error::NoNullVector { .. } | Error::ZeroTotalRate => DephasingStatus::NoNullVector,
        _ => DephasingStatus::Other,
    }
}

fn guard<F: FnOnce() -> Result<(), DephasingStatus>>(f: F) -> DephasingStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DephasingStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            DephasingStatus::Panic
        }
    }
}

fn fail(e: Error) -> DephasingStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null() -> DephasingStatus {
    set_error("null pointer argument");
    DephasingStatus::NullPointer
}

fn core_basis(b: DephasingBasis) -> Basis {
    match b {
        DephasingBasis::Site => Basis::Site,
        DephasingBasis::Eigen => Basis::Eigen,
    }
}

fn to_c(rho: &DensityMatrix) -> DephasingDensity {
    let m = rho.matrix();
    let e = [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]];
    DephasingDensity {
        re: e.map(|z| z.re),
        im: e.map(|z| z.im),
        basis: match rho.basis() {
            Basis::Site => DephasingBasis::Site,
            Basis::Eigen => DephasingBasis::Eigen,
        },
    }
}

fn from_c(d: &DephasingDensity) -> Result<DensityMatrix, Error> {
    let z = |k: usize| C64::new(d.re[k], d.im[k]);
    DensityMatrix::new(Mat2::new(z(0), z(1), z(2), z(3)), core_basis(d.basis))
}

fn build(
    h: f64,
    delta: f64,
    kappa: f64,
    exponent: f64,
    t1: f64,
    t2: f64,
    model: DephasingModel,
) -> Result<DephasingSystem, Error> {
    let model = match model {
        DephasingModel::Global => Model::Global,
        DephasingModel::Local => Model::Local,
        DephasingModel::Classical => Model::Classical,
    };
    let eig = diagonalize(&SystemParams::new(h, delta)?);
    let j = SpectralDensity::new(kappa, exponent)?;
    let s = model.statistics();
    let rates = rate_set(&eig, &BathSpec::new(t1, j, s)?, &BathSpec::new(t2, j, s)?)?;
    Ok(DephasingSystem {
        liouvillian: build_liouvillian(model, &eig, &rates)?,
    })
}

/// Creates a system; temperatures are `k_B T`, the spectral density is `kappa nu^exponent`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn dephasing_system_new(
    h: f64,
    delta: f64,
    kappa: f64,
    exponent: f64,
    t1: f64,
    t2: f64,
    model: DephasingModel,
    out: *mut *mut DephasingSystem,
) -> DephasingStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let sys = build(h, delta, kappa, exponent, t1, t2, model).map_err(fail)?;
        *out = Box::into_raw(Box::new(sys));
        Ok(())
    })
}

/// # Safety
/// `system` must come from [`dephasing_system_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dephasing_system_free(system: *mut DephasingSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// # Safety
/// `system` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dephasing_system_eigensystem(
    system: *const DephasingSystem,
    out: *mut DephasingEigensystem,
) -> DephasingStatus {
    guard(|| {
        if system.is_null() || out.is_null() {
            return Err(null());
        }
        let e = (*system).liouvillian.eigensystem();
        *out = DephasingEigensystem {
            omega: e.omega,
            eps_plus: e.eps_plus,
            eps_minus: e.eps_minus,
            alpha_plus: e.alpha_plus,
            alpha_minus: e.alpha_minus,
            beta_plus: e.beta_plus,
            beta_minus: e.beta_minus,
        };
        Ok(())
    })
}

/// Steady state written in the requested basis.
///
/// # Safety
/// `system` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dephasing_system_steady_state(
    system: *const DephasingSystem,
    basis: DephasingBasis,
    out: *mut DephasingDensity,
) -> DephasingStatus {
    guard(|| {
        if system.is_null() || out.is_null() {
            return Err(null());
        }
        let l = &(*system).liouvillian;
        let ss = steady_state_numeric(l).map_err(fail)?;
        *out = to_c(&ss.rho.to_basis(core_basis(basis), l.eigensystem()));
        Ok(())
    })
}

/// Heat currents at the steady state.
///
/// # Safety
/// `system` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dephasing_system_currents(
    system: *const DephasingSystem,
    out: *mut DephasingCurrents,
) -> DephasingStatus {
    guard(|| {
        if system.is_null() || out.is_null() {
            return Err(null());
        }
        let l = &(*system).liouvillian;
        let ss = steady_state_numeric(l).map_err(fail)?;
        let rep = current_report(l, &ss.rho).map_err(fail)?;
        let alt = alternative_current(l, &ss.rho)
            .map_err(fail)?
            .unwrap_or(f64::NAN);
        *out = DephasingCurrents {
            j1: rep.j1,
            j2: rep.j2,
            dh_dt: rep.dh_dt,
            j1_closed_form: alt,
        };
        Ok(())
    })
}

/// Propagates `rho0` for time `t`; the result is in the same basis as `rho0`.
///
/// # Safety
/// `system` must be a live handle, `rho0` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dephasing_system_propagate(
    system: *const DephasingSystem,
    rho0: *const DephasingDensity,
    t: f64,
    out: *mut DephasingDensity,
) -> DephasingStatus {
    guard(|| {
        if system.is_null() || rho0.is_null() || out.is_null() {
            return Err(null());
        }
        let l = &(*system).liouvillian;
        let eig = l.eigensystem();
        let start = from_c(&*rho0).map_err(fail)?;
        let end = propagate(l, &start.to_basis(l.basis(), eig), t).map_err(fail)?;
        *out = to_c(&end.to_basis(start.basis(), eig));
        Ok(())
    })
}

/// Message for the last failure on this thread; empty if none. Valid until the next call.
#[no_mangle]
pub extern "C" fn dephasing_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// NUL-terminated crate version.
#[no_mangle]
pub extern "C" fn dephasing_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
