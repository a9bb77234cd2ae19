mod common;

use common::{max_abs, rk4, rng, Draw};
use dephasing_core::config::{EvolveSpec, InitialState, RunConfig, StatePreset};
use dephasing_core::dynamics::{gibbs_state, steady_state_numeric, Model};
use dephasing_core::model::{Basis, DensityMatrix};
use dephasing_core::sweep::evolve_command;

#[test]
fn propagator_agrees_with_runge_kutta() {
    let mut r = rng(11);
    for model in Model::ALL {
        for _ in 0..10 {
            let d = Draw::random(&mut r);
            let l = d.liouvillian(model);
            let rho0 = common::draw_state(&mut r, l.basis());
            let t = 3.0;
            let exact = l.evolve(&rho0, &[t]).unwrap()[0];
            let rk = rk4(&l, &rho0, t, 6000);
            assert!(max_abs(&(exact.matrix() - rk)) < 1e-9, "{model}");
        }
    }
}

fn evolve_cfg(base: RunConfig, rho0: InitialState, t_stop: f64) -> RunConfig {
    RunConfig {
        evolve: Some(EvolveSpec {
            rho0,
            t_start: 0.0,
            t_stop,
            points: 21,
        }),
        ..base
    }
}

#[test]
fn steady_initial_state_is_stationary() {
    let base = RunConfig::default();
    let sys = base.system().unwrap();
    let ss = steady_state_numeric(&sys.liouvillian)
        .unwrap()
        .rho
        .to_basis(Basis::Site, &sys.eig);
    let m = ss.matrix();
    let explicit = dephasing_core::config::ExplicitState {
        rho11: m[(0, 0)].re,
        rho22: m[(1, 1)].re,
        rho12_re: m[(0, 1)].re,
        rho12_im: m[(0, 1)].im,
    };
    let rows = evolve_command(&evolve_cfg(base, InitialState::Explicit(explicit), 30.0)).unwrap();
    for row in &rows {
        assert!((row.rho11 - rows[0].rho11).abs() < 1e-10);
        assert!((row.rho12_re - rows[0].rho12_re).abs() < 1e-10);
        assert!((row.rho12_im - rows[0].rho12_im).abs() < 1e-10);
    }
}

#[test]
fn no_exchange_freezes_site_populations() {
    let base = RunConfig {
        delta: 0.0,
        ..RunConfig::default()
    };
    for model in Model::ALL {
        let cfg = evolve_cfg(
            base.with_model(model),
            InitialState::Preset(StatePreset::Site1),
            10.0,
        );
        for row in evolve_command(&cfg).unwrap() {
            assert!((row.rho11 - 1.0).abs() < 1e-14, "{model} t = {}", row.t);
        }
    }
}

#[test]
fn zero_temperature_decay_of_excited_state() {
    let base = RunConfig {
        t1: 0.0,
        t2: 0.0,
        ..RunConfig::default()
    };
    let sys = base.system().unwrap();
    let g = sys.rates.gamma_tot_pm;
    assert_eq!(sys.rates.gamma_tot_mp, 0.0);
    let rows = evolve_command(&evolve_cfg(
        base,
        InitialState::Preset(StatePreset::Excited),
        20.0,
    ))
    .unwrap();
    for row in rows {
        assert!(
            (row.p_plus - (-g * row.t).exp()).abs() < 1e-12,
            "t = {}",
            row.t
        );
    }
}

#[test]
fn local_and_global_agree_at_high_temperature() {
    let base = RunConfig {
        h: 1.0,
        delta: 0.5,
        ..RunConfig::default()
    };
    let omega = base.system().unwrap().eig.omega;
    let cfg = RunConfig {
        t1: 100.0 * omega,
        t2: 100.0 * omega,
        ..base
    };
    let g = cfg.system_for(Model::Global).unwrap();
    let l = cfg.system_for(Model::Local).unwrap();
    let gs = steady_state_numeric(&g.liouvillian)
        .unwrap()
        .rho
        .to_basis(Basis::Site, &g.eig);
    let ls = steady_state_numeric(&l.liouvillian).unwrap().rho;
    assert!(gs.trace_distance(&ls).unwrap() < 0.01);
}

#[test]
fn gibbs_examples() {
    let p = dephasing_core::SystemParams::new(1.0, 0.5).unwrap();
    let omega = dephasing_core::model::diagonalize(&p).omega;
    let g = gibbs_state(&p, omega / 2f64.ln());
    assert!((g.p0() / g.p1() - 0.5).abs() < 1e-14);
    let hot = gibbs_state(&p, 1e12);
    assert!((hot.p0() - 0.5).abs() < 1e-11);
    let weak = dephasing_core::SystemParams::new(1.0, 1e-4).unwrap();
    let eig = dephasing_core::model::diagonalize(&weak);
    let cold = gibbs_state(&weak, 0.0).to_basis(Basis::Site, &eig);
    let site1 = DensityMatrix::diagonal(1.0, 0.0, Basis::Site).unwrap();
    // pure states: distance is the admixture amplitude alpha_+ ~ delta / h
    assert!((cold.trace_distance(&site1).unwrap() - eig.alpha_plus).abs() < 1e-12);
    assert!(eig.alpha_plus < 1.01e-4);
}
