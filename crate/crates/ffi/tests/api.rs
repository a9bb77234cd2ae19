#![allow(clippy::excessive_precision)]

use std::ffi::CStr;
use std::ptr;

use dephasing_ffi::*;

fn system(delta: f64, model: DephasingModel) -> Result<*mut DephasingSystem, DephasingStatus> {
    let mut sys = ptr::null_mut();
    let s = unsafe { dephasing_system_new(1.0, delta, 1.0, 1.0, 1.0, 0.5, model, &mut sys) };
    if s == DephasingStatus::Ok {
        Ok(sys)
    } else {
        Err(s)
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dephasing_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn eigensystem_through_handle() {
    let sys = system(0.5, DephasingModel::Global).unwrap();
    let mut e = DephasingEigensystem::default();
    assert_eq!(
        unsafe { dephasing_system_eigensystem(sys, &mut e) },
        DephasingStatus::Ok
    );
    assert!((e.omega - 2f64.sqrt()).abs() < 1e-15);
    assert!((e.alpha_plus * e.alpha_minus - 0.35355339059327376).abs() < 1e-15);
    unsafe { dephasing_system_free(sys) };
}

#[test]
fn steady_state_and_currents() {
    let sys = system(0.5, DephasingModel::Global).unwrap();
    let mut rho = DephasingDensity {
        re: [0.0; 4],
        im: [0.0; 4],
        basis: DephasingBasis::Site,
    };
    assert_eq!(
        unsafe { dephasing_system_steady_state(sys, DephasingBasis::Eigen, &mut rho) },
        DephasingStatus::Ok
    );
    assert_eq!(rho.basis, DephasingBasis::Eigen);
    assert!((rho.re[0] - 0.13873521338754605).abs() < 1e-13);
    let mut c = DephasingCurrents::default();
    assert_eq!(
        unsafe { dephasing_system_currents(sys, &mut c) },
        DephasingStatus::Ok
    );
    assert!((c.j1 - 0.02333671261843785).abs() < 1e-13);
    assert!((c.j1 - c.j1_closed_form).abs() < 1e-14);
    unsafe { dephasing_system_free(sys) };

    let local = system(0.5, DephasingModel::Local).unwrap();
    assert_eq!(
        unsafe { dephasing_system_steady_state(local, DephasingBasis::Site, &mut rho) },
        DephasingStatus::Ok
    );
    assert!((rho.re[0] - 0.5).abs() < 1e-12);
    unsafe { dephasing_system_free(local) };
}

#[test]
fn propagate_keeps_input_basis() {
    let sys = system(0.5, DephasingModel::Classical).unwrap();
    let rho0 = DephasingDensity {
        re: [1.0, 0.0, 0.0, 0.0],
        im: [0.0; 4],
        basis: DephasingBasis::Site,
    };
    let mut out = rho0;
    assert_eq!(
        unsafe { dephasing_system_propagate(sys, &rho0, 1e4, &mut out) },
        DephasingStatus::Ok
    );
    assert_eq!(out.basis, DephasingBasis::Site);
    assert!((out.re[0] - 0.5).abs() < 1e-10);
    assert_eq!(
        unsafe { dephasing_system_propagate(sys, &rho0, -1.0, &mut out) },
        DephasingStatus::NegativeTime
    );
    let bad = DephasingDensity {
        re: [0.7, 0.0, 0.0, 0.7],
        ..rho0
    };
    assert_eq!(
        unsafe { dephasing_system_propagate(sys, &bad, 1.0, &mut out) },
        DephasingStatus::InvalidState
    );
    assert!(last_error().contains("trace"));
    unsafe { dephasing_system_free(sys) };
}

#[test]
fn error_codes_and_messages() {
    assert_eq!(
        system(-1.0, DephasingModel::Global).unwrap_err(),
        DephasingStatus::InvalidParams
    );
    assert!(!last_error().is_empty());
    let degenerate = system(0.0, DephasingModel::Global).unwrap();
    let mut c = DephasingCurrents::default();
    assert_eq!(
        unsafe { dephasing_system_currents(degenerate, &mut c) },
        DephasingStatus::DegenerateSteadyState
    );
    assert!(last_error().contains("degenerate"));
    assert_eq!(
        unsafe { dephasing_system_currents(ptr::null(), &mut c) },
        DephasingStatus::NullPointer
    );
    unsafe {
        dephasing_system_free(degenerate);
        dephasing_system_free(ptr::null_mut());
    }
    let mut sys = ptr::null_mut();
    let s = unsafe {
        dephasing_system_new(
            1.0,
            0.5,
            1.0,
            0.5,
            1.0,
            0.5,
            DephasingModel::Global,
            &mut sys,
        )
    };
    assert_eq!(s, DephasingStatus::DivergentDephasing);
    assert!(sys.is_null());
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(dephasing_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
