//! Parameter sweeps, model comparison and time series, with deterministic
//! CSV output.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, SweepVariable};
use crate::dynamics::{analytic_state, gibbs_state, steady_state_numeric, Liouvillian, Model};
use crate::error::{Error, Result};
use crate::model::{Basis, DensityMatrix};
use crate::thermo::{
    current_analytic, current_classical, current_local, current_report, current_trace, energy,
    SATURATION_COEFFICIENT,
};

/// A cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Header plus rows; column names carry a unit suffix (`_E` energy, `_E2` energy squared,
/// `_T` time) where one applies.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Current from the model's own closed-form expression.
pub fn alternative_current(l: &Liouvillian, rho: &DensityMatrix) -> Result<Option<f64>> {
    let eig = l.eigensystem();
    if eig.no_exchange() {
        return Ok(Some(0.0));
    }
    let value = match l.model() {
        Model::Global => current_analytic(l.rates(), eig, &rho.to_basis(Basis::Eigen, eig))?.value,
        Model::Local => current_local(l.rates(), l.params(), &rho.to_basis(Basis::Site, eig))?,
        Model::Classical => current_classical(l.rates(), eig, rho)?,
    };
    Ok(Some(value))
}

/// One steady-state evaluation of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub series: String,
    pub model: Model,
    pub variable: SweepVariable,
    pub value: f64,
    pub h: f64,
    pub delta: f64,
    pub kappa: f64,
    pub exponent: f64,
    pub t1: f64,
    pub t2: f64,
    pub omega: f64,
    /// `Tr{L_1[rho_ss] H_S}`.
    pub j1: f64,
    /// Same current from the model's closed form.
    pub j1_alt: f64,
    pub j1_deviation: f64,
    pub j2: f64,
    pub p_plus: f64,
    pub p_minus: f64,
    /// Site-basis `<1|rho|2>`.
    pub rho12_re: f64,
    pub rho12_im: f64,
    pub n_bar: f64,
    pub delta_n: f64,
    /// Empty for a clean point; otherwise `;`-separated conditions.
    pub flag: String,
}

impl SweepRecord {
    pub fn is_flagged(&self) -> bool {
        !self.flag.is_empty()
    }

    /// Points whose steady state could not be determined.
    pub fn failed(&self) -> bool {
        self.j1.is_nan()
    }
}

/// Evaluates one configuration. Solver failures produce a flagged record
/// with NaN observables; invalid parameters are errors.
pub fn evaluate_point(
    cfg: &RunConfig,
    variable: SweepVariable,
    series: &str,
) -> Result<SweepRecord> {
    let system = cfg.system()?;
    let eig = system.eig;
    let rates = system.rates;
    let l = &system.liouvillian;
    let value = match variable {
        SweepVariable::T1 => cfg.t1,
        SweepVariable::Delta => cfg.delta,
    };
    let mut flags = Vec::new();
    if eig.no_exchange() {
        flags.push("no_exchange".to_string());
    }
    if rates.vanishing_dephasing {
        flags.push("vanishing_dephasing".to_string());
    }
    let mut rec = SweepRecord {
        series: series.to_string(),
        model: cfg.model,
        variable,
        value,
        h: cfg.h,
        delta: cfg.delta,
        kappa: cfg.kappa,
        exponent: cfg.exponent,
        t1: cfg.t1,
        t2: cfg.t2,
        omega: eig.omega,
        j1: f64::NAN,
        j1_alt: f64::NAN,
        j1_deviation: f64::NAN,
        j2: f64::NAN,
        p_plus: f64::NAN,
        p_minus: f64::NAN,
        rho12_re: f64::NAN,
        rho12_im: f64::NAN,
        n_bar: rates.mean_occupation(),
        delta_n: rates.occupation_difference(),
        flag: String::new(),
    };
    match steady_state_numeric(l) {
        Ok(ss) => {
            let rho = ss.rho;
            rec.j1 = current_trace(l, 0, &rho)?;
            rec.j2 = current_trace(l, 1, &rho)?;
            let eigen = rho.to_basis(Basis::Eigen, &eig);
            let site = rho.to_basis(Basis::Site, &eig);
            rec.p_plus = eigen.p0();
            rec.p_minus = eigen.p1();
            rec.rho12_re = site.coherence().re;
            rec.rho12_im = site.coherence().im;
            if let Some(alt) = alternative_current(l, &rho)? {
                rec.j1_alt = alt;
                rec.j1_deviation = (rec.j1 - alt).abs();
            }
        }
        Err(e) if e.is_solver_failure() => flags.push(solver_flag(&e)),
        Err(e) => return Err(e),
    }
    rec.flag = flags.join(";");
    Ok(rec)
}

fn solver_flag(e: &Error) -> String {
    match e {
        Error::DegenerateSteadyState { nullity, .. } => format!("degenerate_nullity_{nullity}"),
        Error::NoNullVector { .. } => "no_null_vector".into(),
        Error::ZeroTotalRate => "zero_total_rate".into(),
        other => other.to_string().replace([',', '\n'], " "),
    }
}

/// Runs every grid point of every configuration in parallel; output keeps
/// configuration order, then grid order.
pub fn run_sweep(configs: &[RunConfig]) -> Result<Vec<SweepRecord>> {
    let mut jobs = Vec::new();
    for (k, cfg) in configs.iter().enumerate() {
        let spec = cfg.sweep.as_ref().ok_or_else(|| {
            Error::Config("sweep command needs a 'sweep' section or a preset".into())
        })?;
        let series = cfg.label.clone().unwrap_or_else(|| format!("series{k}"));
        for v in spec.grid() {
            jobs.push((
                cfg.with_value(spec.variable, v),
                spec.variable,
                series.clone(),
            ));
        }
    }
    jobs.par_iter()
        .map(|(cfg, var, series)| evaluate_point(cfg, *var, series))
        .collect()
}

pub fn sweep_table(records: &[SweepRecord]) -> Table {
    let mut t = Table::new(&[
        "series",
        "model",
        "sweep_variable",
        "sweep_value_E",
        "h_E",
        "delta_E",
        "kappa",
        "exponent",
        "t1_E",
        "t2_E",
        "omega_E",
        "j1_E2",
        "j1_alt_E2",
        "j1_deviation_E2",
        "j2_E2",
        "p_plus",
        "p_minus",
        "rho12_re",
        "rho12_im",
        "n_bar",
        "delta_n",
        "flag",
    ]);
    for r in records {
        t.push(vec![
            r.series.as_str().into(),
            r.model.name().into(),
            r.variable.name().into(),
            r.value.into(),
            r.h.into(),
            r.delta.into(),
            r.kappa.into(),
            r.exponent.into(),
            r.t1.into(),
            r.t2.into(),
            r.omega.into(),
            r.j1.into(),
            r.j1_alt.into(),
            r.j1_deviation.into(),
            r.j2.into(),
            r.p_plus.into(),
            r.p_minus.into(),
            r.rho12_re.into(),
            r.rho12_im.into(),
            r.n_bar.into(),
            r.delta_n.into(),
            r.flag.as_str().into(),
        ]);
    }
    t
}

/// Per-series summary of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesSummary {
    pub series: String,
    pub points: usize,
    pub flagged: usize,
    pub failed: usize,
    pub max_j1: f64,
    pub value_at_max: f64,
    /// `J_1 / (kappa delta^2)` at the last grid point.
    pub plateau_ratio: f64,
    pub max_deviation: f64,
}

pub fn summarize(records: &[SweepRecord]) -> Vec<SeriesSummary> {
    let mut order: Vec<&str> = Vec::new();
    for r in records {
        if !order.contains(&r.series.as_str()) {
            order.push(&r.series);
        }
    }
    order
        .into_iter()
        .map(|name| {
            let rows: Vec<&SweepRecord> = records.iter().filter(|r| r.series == name).collect();
            let ok: Vec<&&SweepRecord> = rows.iter().filter(|r| !r.failed()).collect();
            let (max_j1, value_at_max) =
                ok.iter()
                    .map(|r| (r.j1, r.value))
                    .fold((f64::NAN, f64::NAN), |acc, x| {
                        if acc.0.is_nan() || x.0 > acc.0 {
                            x
                        } else {
                            acc
                        }
                    });
            let last = rows.last().expect("series has rows");
            SeriesSummary {
                series: name.to_string(),
                points: rows.len(),
                flagged: rows.iter().filter(|r| r.is_flagged()).count(),
                failed: rows.len() - ok.len(),
                max_j1,
                value_at_max,
                plateau_ratio: last.j1 / (last.kappa * last.delta * last.delta),
                max_deviation: ok.iter().map(|r| r.j1_deviation).fold(0.0, f64::max),
            }
        })
        .collect()
}

/// Human-readable summary for temperature sweeps: the high-`T_1` plateau in
/// units of `kappa delta^2`, next to the closed-form limit and a quarter.
pub fn render_summary(summaries: &[SeriesSummary], variable: SweepVariable) -> String {
    let mut s = String::new();
    for x in summaries {
        s.push_str(&format!(
            "{}: {} points ({} flagged, {} failed), max J1 = {:.6e} at {} = {:.6e}, max |J1 - J1_alt| = {:.3e}\n",
            x.series, x.points, x.flagged, x.failed, x.max_j1, variable.name(), x.value_at_max, x.max_deviation
        ));
        if variable == SweepVariable::T1 {
            s.push_str(&format!(
                "  plateau J1/(kappa delta^2) = {:.6} (closed-form limit {:.2}, quarter value 0.25)\n",
                x.plateau_ratio, SATURATION_COEFFICIENT
            ));
        }
    }
    s
}

/// Steady state of one model, reported in the site basis.
#[derive(Debug, Clone, Serialize)]
pub struct ModelComparison {
    pub model: Model,
    pub rho11: f64,
    pub rho22: f64,
    pub rho12_re: f64,
    pub rho12_im: f64,
    pub j1: f64,
    pub j2: f64,
    pub j1_alt: f64,
    /// Trace distance to the Gibbs state at the mean bath temperature.
    pub gibbs_distance: f64,
    /// Site-1 population `<1|rho|1>`; exactly 1/2 signals the local-model pathology.
    pub site1_population: f64,
    pub flag: String,
}

pub fn compare_models(cfg: &RunConfig) -> Result<Vec<ModelComparison>> {
    let mean_t = 0.5 * (cfg.t1 + cfg.t2);
    let gibbs_eigen = gibbs_state(&cfg.params()?, mean_t);
    Model::ALL
        .iter()
        .map(|&model| {
            let system = cfg.system_for(model)?;
            let l = &system.liouvillian;
            let eig = system.eig;
            let nan = f64::NAN;
            let mut row = ModelComparison {
                model,
                rho11: nan,
                rho22: nan,
                rho12_re: nan,
                rho12_im: nan,
                j1: nan,
                j2: nan,
                j1_alt: nan,
                gibbs_distance: nan,
                site1_population: nan,
                flag: String::new(),
            };
            match steady_state_numeric(l) {
                Ok(ss) => {
                    let site = ss.rho.to_basis(Basis::Site, &eig);
                    row.rho11 = site.p0();
                    row.rho22 = site.p1();
                    row.rho12_re = site.coherence().re;
                    row.rho12_im = site.coherence().im;
                    row.site1_population = site.p0();
                    row.j1 = current_trace(l, 0, &ss.rho)?;
                    row.j2 = current_trace(l, 1, &ss.rho)?;
                    row.j1_alt = alternative_current(l, &ss.rho)?.unwrap_or(nan);
                    row.gibbs_distance =
                        site.trace_distance(&gibbs_eigen.to_basis(Basis::Site, &eig))?;
                }
                Err(e) if e.is_solver_failure() => row.flag = solver_flag(&e),
                Err(e) => return Err(e),
            }
            Ok(row)
        })
        .collect()
}

pub fn comparison_table(rows: &[ModelComparison]) -> Table {
    let mut t = Table::new(&[
        "model",
        "rho11",
        "rho22",
        "rho12_re",
        "rho12_im",
        "j1_E2",
        "j2_E2",
        "j1_alt_E2",
        "gibbs_trace_distance",
        "site1_population",
        "flag",
    ]);
    for r in rows {
        t.push(vec![
            r.model.name().into(),
            r.rho11.into(),
            r.rho22.into(),
            r.rho12_re.into(),
            r.rho12_im.into(),
            r.j1.into(),
            r.j2.into(),
            r.j1_alt.into(),
            r.gibbs_distance.into(),
            r.site1_population.into(),
            r.flag.as_str().into(),
        ]);
    }
    t
}

pub fn render_comparison(rows: &[ModelComparison]) -> String {
    let mut s = String::new();
    for r in rows {
        if r.flag.is_empty() {
            s.push_str(&format!(
                "{:<9} J1 = {:+.6e}  <1|rho|1> = {:.12}  Re rho12 = {:+.6e}  D(rho, Gibbs) = {:.6e}\n",
                r.model.name(), r.j1, r.site1_population, r.rho12_re, r.gibbs_distance
            ));
        } else {
            s.push_str(&format!(
                "{:<9} no steady state ({})\n",
                r.model.name(),
                r.flag
            ));
        }
    }
    s
}

/// One time step of an evolution, reported in the site basis.
#[derive(Debug, Clone, Serialize)]
pub struct EvolveRow {
    pub t: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub rho12_re: f64,
    pub rho12_im: f64,
    pub p_plus: f64,
    pub p_minus: f64,
    pub j1: f64,
    pub j2: f64,
    pub energy: f64,
    pub dh_dt: f64,
    /// Largest entry of `|rho_num - rho_analytic|` (global model only).
    pub analytic_deviation: Option<f64>,
}

pub fn evolve_command(cfg: &RunConfig) -> Result<Vec<EvolveRow>> {
    let spec = cfg
        .evolve
        .as_ref()
        .ok_or_else(|| Error::Config("evolve command needs an 'evolve' section".into()))?;
    let times = spec.times()?;
    let system = cfg.system()?;
    let eig = system.eig;
    let l = &system.liouvillian;
    let rho0 = spec.rho0.density_matrix(&eig)?;
    let states = l.evolve(&rho0.to_basis(l.basis(), &eig), &times)?;
    let rho0_eigen = rho0.to_basis(Basis::Eigen, &eig);
    times
        .iter()
        .zip(states.iter())
        .map(|(&t, rho)| {
            let report = current_report(l, rho)?;
            let site = rho.to_basis(Basis::Site, &eig);
            let eigen = rho.to_basis(Basis::Eigen, &eig);
            let analytic_deviation = if cfg.model == Model::Global {
                let a = analytic_state(&system.rates, &eig, &rho0_eigen, t)?;
                Some(
                    (eigen.matrix() - a.rho.matrix())
                        .iter()
                        .map(|z| z.norm())
                        .fold(0.0, f64::max),
                )
            } else {
                None
            };
            Ok(EvolveRow {
                t,
                rho11: site.p0(),
                rho22: site.p1(),
                rho12_re: site.coherence().re,
                rho12_im: site.coherence().im,
                p_plus: eigen.p0(),
                p_minus: eigen.p1(),
                j1: report.j1,
                j2: report.j2,
                energy: energy(rho, &eig),
                dh_dt: report.dh_dt,
                analytic_deviation,
            })
        })
        .collect()
}

pub fn evolve_table(rows: &[EvolveRow]) -> Table {
    let mut t = Table::new(&[
        "t_T",
        "rho11",
        "rho22",
        "rho12_re",
        "rho12_im",
        "p_plus",
        "p_minus",
        "j1_E2",
        "j2_E2",
        "energy_E",
        "dh_dt_E2",
        "analytic_deviation",
    ]);
    for r in rows {
        t.push(vec![
            r.t.into(),
            r.rho11.into(),
            r.rho22.into(),
            r.rho12_re.into(),
            r.rho12_im.into(),
            r.p_plus.into(),
            r.p_minus.into(),
            r.j1.into(),
            r.j2.into(),
            r.energy.into(),
            r.dh_dt.into(),
            r.analytic_deviation.into(),
        ]);
    }
    t
}
