use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use dephasing_core::config::{Preset, RunConfig};
use dephasing_core::dynamics::{steady_state_analytic, steady_state_numeric};
use dephasing_core::sweep::{
    alternative_current, compare_models, comparison_table, evolve_command, evolve_table,
    render_comparison, render_summary, run_sweep, summarize, sweep_table, Cell, Table,
};
use dephasing_core::thermo::{coherence_current_identity, current_report, occupation_gradient};
use dephasing_core::{Basis, Error, Model};

#[derive(Parser)]
#[command(
    name = "dephasing",
    version,
    about = "Heat transport through a two-site chain between dephasing baths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Built-in sweep (sweep command only)
    #[arg(long, global = true, value_parser = ["fig2a", "fig2b"])]
    preset: Option<String>,
    /// Overrides the configured model
    #[arg(long, global = true, value_parser = ["global", "local", "classical"])]
    model: Option<String>,
    /// Output file; defaults to the config's `output` or stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenstructure and transition rates
    Eigen,
    /// Steady state of the configured model
    Steady,
    /// Time evolution from the configured initial state
    Evolve,
    /// Steady-state heat currents
    Current,
    /// Steady-state sweep over T1 or delta
    Sweep,
    /// Steady states of all three models side by side
    Compare,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// A run that could not produce its main result; carries the exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_solver_failure() { 2 } else { 1 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

enum Output {
    Table(Table, Value),
    KeyValues(Vec<(&'static str, Cell)>),
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Float(v) if v.is_finite() => json!(v),
        Cell::Float(_) | Cell::Empty => Value::Null,
        Cell::Int(v) => json!(v),
        Cell::Text(s) => json!(s),
    }
}

fn load_configs(cli: &Cli) -> Result<Vec<RunConfig>, Failure> {
    let mut configs = match (&cli.preset, &cli.config) {
        (Some(_), Some(_)) => {
            return Err(Failure {
                code: 1,
                message: "--preset and --config are mutually exclusive".into(),
            })
        }
        (Some(p), None) => {
            if !matches!(cli.command, Command::Sweep) {
                return Err(Failure {
                    code: 1,
                    message: "--preset applies to the sweep command only".into(),
                });
            }
            p.parse::<Preset>()?.expand()
        }
        (None, Some(path)) => vec![RunConfig::from_path(path)?],
        (None, None) => vec![RunConfig::default()],
    };
    if let Some(m) = &cli.model {
        let model: Model = m.parse()?;
        configs = configs.iter().map(|c| c.with_model(model)).collect();
    }
    Ok(configs)
}

fn eigen(cfg: &RunConfig) -> Result<Output, Failure> {
    let system = cfg.system()?;
    let e = system.eig;
    let r = system.rates;
    Ok(Output::KeyValues(vec![
        ("model", cfg.model.name().into()),
        ("h_E", e.params.h().into()),
        ("delta_E", e.params.delta().into()),
        ("omega_E", e.omega.into()),
        ("eps_plus_E", e.eps_plus.into()),
        ("eps_minus_E", e.eps_minus.into()),
        ("alpha_plus", e.alpha_plus.into()),
        ("alpha_minus", e.alpha_minus.into()),
        ("beta_plus", e.beta_plus.into()),
        ("beta_minus", e.beta_minus.into()),
        ("alpha_product", e.exchange_amplitude().into()),
        ("n1", r.occupation[0].into()),
        ("n2", r.occupation[1].into()),
        ("gamma0_1_E", r.gamma0[0].into()),
        ("gamma0_2_E", r.gamma0[1].into()),
        ("gamma_pm_1_E", r.gamma_plus_minus[0].into()),
        ("gamma_pm_2_E", r.gamma_plus_minus[1].into()),
        ("gamma_mp_1_E", r.gamma_minus_plus[0].into()),
        ("gamma_mp_2_E", r.gamma_minus_plus[1].into()),
        ("gamma_phi_E", r.gamma_phi_eigen.into()),
        ("j_tilde_E", r.j_tilde[0].into()),
    ]))
}

fn steady(cfg: &RunConfig) -> Result<Output, Failure> {
    let system = cfg.system()?;
    let eig = system.eig;
    let ss = steady_state_numeric(&system.liouvillian)?;
    let site = ss.rho.to_basis(Basis::Site, &eig);
    let eigen = ss.rho.to_basis(Basis::Eigen, &eig);
    let mut kv = vec![
        ("model", cfg.model.name().into()),
        ("rho11", site.p0().into()),
        ("rho22", site.p1().into()),
        ("rho12_re", site.coherence().re.into()),
        ("rho12_im", site.coherence().im.into()),
        ("p_plus", eigen.p0().into()),
        ("p_minus", eigen.p1().into()),
        ("eigen_coherence_abs", eigen.coherence().norm().into()),
        ("residual", ss.residual.into()),
        ("sigma_max", ss.largest_singular_value().into()),
        ("sigma_min", ss.smallest_singular_value().into()),
        ("sigma_second", ss.singular_values[2].into()),
    ];
    let analytic_distance = if cfg.model == Model::Local {
        Cell::Empty
    } else {
        let a = steady_state_analytic(&system.rates)?;
        Cell::Float(eigen.trace_distance(&a)?)
    };
    kv.push(("analytic_trace_distance", analytic_distance));
    Ok(Output::KeyValues(kv))
}

fn current(cfg: &RunConfig) -> Result<Output, Failure> {
    let system = cfg.system()?;
    let eig = system.eig;
    let l = &system.liouvillian;
    let ss = steady_state_numeric(l)?;
    let report = current_report(l, &ss.rho)?;
    let alt = alternative_current(l, &ss.rho)?;
    let grad = occupation_gradient(&system.baths[0], &system.baths[1], eig.omega)?;
    let identity = if eig.no_exchange() {
        Cell::Empty
    } else {
        Cell::Float(coherence_current_identity(&ss.rho, &eig)?.defect())
    };
    Ok(Output::KeyValues(vec![
        ("model", cfg.model.name().into()),
        ("j1_E2", report.j1.into()),
        ("j2_E2", report.j2.into()),
        ("dh_dt_E2", report.dh_dt.into()),
        ("first_law_defect_E2", report.first_law_defect().into()),
        ("j1_alt_E2", alt.into()),
        ("j1_deviation_E2", alt.map(|a| (a - report.j1).abs()).into()),
        ("n_bar", grad.n_bar.into()),
        ("delta_n", grad.delta_n.into()),
        ("delta_n_linearized", grad.delta_n_linearized.into()),
        ("coherence_identity_defect", identity),
        ("no_exchange", Cell::Text(eig.no_exchange().to_string())),
    ]))
}

fn sweep(configs: &[RunConfig]) -> Result<Output, Failure> {
    let records = run_sweep(configs)?;
    let variable = records.first().map(|r| r.variable).ok_or_else(|| Failure {
        code: 1,
        message: "empty sweep".into(),
    })?;
    eprint!("{}", render_summary(&summarize(&records), variable));
    if records.iter().all(|r| r.failed()) {
        return Err(Failure {
            code: 2,
            message: "no sweep point has a unique steady state".into(),
        });
    }
    let json = serde_json::to_value(&records).map_err(Error::from)?;
    Ok(Output::Table(sweep_table(&records), json))
}

fn compare(cfg: &RunConfig) -> Result<Output, Failure> {
    let rows = compare_models(cfg)?;
    eprint!("{}", render_comparison(&rows));
    if rows.iter().all(|r| !r.flag.is_empty()) {
        return Err(Failure {
            code: 2,
            message: "no model has a unique steady state".into(),
        });
    }
    let json = serde_json::to_value(&rows).map_err(Error::from)?;
    Ok(Output::Table(comparison_table(&rows), json))
}

fn evolve(cfg: &RunConfig) -> Result<Output, Failure> {
    let rows = evolve_command(cfg).map_err(|e| match e {
        Error::InvalidState(m) => Failure {
            code: 1,
            message: format!("invalid initial state: {m}"),
        },
        other => other.into(),
    })?;
    let json = serde_json::to_value(&rows).map_err(Error::from)?;
    Ok(Output::Table(evolve_table(&rows), json))
}

fn write_output(out: Output, format: Format, sink: &mut dyn Write) -> Result<(), Error> {
    match (out, format) {
        (Output::Table(t, _), Format::Csv) => t.write_csv(sink),
        (Output::Table(_, v), Format::Json) => {
            serde_json::to_writer_pretty(&mut *sink, &v)?;
            writeln!(sink)?;
            Ok(())
        }
        (Output::KeyValues(kv), Format::Csv) => {
            let mut t = Table::new(&["quantity", "value"]);
            for (k, v) in kv {
                t.push(vec![Cell::Text(k.to_string()), v]);
            }
            t.write_csv(sink)
        }
        (Output::KeyValues(kv), Format::Json) => {
            let map: Map<String, Value> = kv
                .iter()
                .map(|(k, v)| (k.to_string(), cell_json(v)))
                .collect();
            serde_json::to_writer_pretty(&mut *sink, &Value::Object(map))?;
            writeln!(sink)?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let configs = load_configs(cli)?;
    let first = &configs[0];
    let output = match cli.command {
        Command::Eigen => eigen(first)?,
        Command::Steady => steady(first)?,
        Command::Current => current(first)?,
        Command::Evolve => evolve(first)?,
        Command::Sweep => sweep(&configs)?,
        Command::Compare => compare(first)?,
    };
    let path = cli.out.clone().or_else(|| first.output.clone());
    let result = match path {
        Some(p) => {
            let mut f = File::create(&p).map_err(|e| Failure {
                code: 1,
                message: format!("{}: {e}", p.display()),
            })?;
            write_output(output, cli.format, &mut f)
        }
        None => write_output(output, cli.format, &mut io::stdout().lock()),
    };
    result.map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
