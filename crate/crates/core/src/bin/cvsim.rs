use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cvsim::experiments::{
    format_number, run_scenario, sweep, ConfigMap, CsvTable, ScenarioName, ScenarioSpec, Value,
};
use cvsim::{Error, Result};

const SWEEP_POINTS: usize = 41;

/// Gaussian simulator for electro-optic microwave entanglement schemes.
#[derive(Parser)]
#[command(name = "cvsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the device parameter chain (frequencies, couplings, scaled rates, operation times).
    Params {
        /// Device preset: cascaded, cascaded-improved, parallel, dissipative.
        #[arg(long, default_value = "cascaded")]
        device: String,
        #[command(flatten)]
        common: Overrides,
    },
    /// Run the scenario described by a configuration file.
    Simulate {
        config: PathBuf,
        #[command(flatten)]
        common: Overrides,
    },
    /// Sweep one configuration key and report the scheme's figure of merit.
    Sweep {
        config: PathBuf,
        /// Key to vary; unit suffixes are accepted in --from/--to.
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[command(flatten)]
        common: Overrides,
    },
    /// Regenerate one of the built-in figures.
    Reproduce {
        /// fig3a, fig3b, fig4a, fig4b, fig6 or fig7.
        figure: String,
        #[command(flatten)]
        common: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Coupling ratio r.
    #[arg(long)]
    r: Option<f64>,
    /// Common scaled decay for all modes.
    #[arg(long)]
    k: Option<f64>,
    /// Microwave thermal occupation.
    #[arg(long = "n-th")]
    n_th: Option<f64>,
    /// Number of grid points (sweeps default to 41).
    #[arg(long)]
    points: Option<usize>,
    /// Any configuration key, as key=value (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write CSV here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl Overrides {
    fn apply(&self, map: &mut ConfigMap) -> Result<()> {
        for item in &self.set {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("--set expects KEY=VALUE, got '{item}'")))?;
            let (key, value) = (key.trim(), value.trim());
            match cvsim::experiments::config::key_dimension(key) {
                Some(cvsim::experiments::config::Dimension::Text) => map.set(key, Value::Text(value.into()))?,
                _ => map.set_str(key, value)?,
            }
        }
        for (key, v) in [("r", self.r), ("k", self.k), ("n_th", self.n_th)] {
            if let Some(v) = v {
                map.set(key, Value::Number(v))?;
            }
        }
        if let Some(p) = self.points {
            map.set("grid_points", Value::Number(p as f64))?;
        }
        Ok(())
    }
}

fn emit(table: &CsvTable, output: Option<&Path>) -> Result<()> {
    let text = table.render();
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn resolve(map: ConfigMap, common: &Overrides) -> Result<(ScenarioSpec, Option<PathBuf>)> {
    let mut map = map;
    common.apply(&mut map)?;
    let spec = ScenarioSpec::from_config(&map)?;
    let output = common.output.clone().or_else(|| spec.output.clone());
    Ok((spec, output))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Params { device, common } => {
            let mut map = ConfigMap::default();
            map.set("scenario", Value::Text("params-report".into()))?;
            map.set("device", Value::Text(device))?;
            let (spec, output) = resolve(map, &common)?;
            emit(&run_scenario(&spec)?, output.as_deref())
        }
        Command::Simulate { config, common } => {
            let (spec, output) = resolve(ConfigMap::load(&config)?, &common)?;
            emit(&run_scenario(&spec)?, output.as_deref())
        }
        Command::Sweep {
            config,
            param,
            from,
            to,
            common,
        } => {
            let points = common.points.unwrap_or(SWEEP_POINTS);
            let common = Overrides { points: None, ..common };
            let (spec, output) = resolve(ConfigMap::load(&config)?, &common)?;
            let quantity = |text: &str| -> Result<f64> {
                let mut probe = ConfigMap::default();
                probe.set_str(&param, text)?;
                probe
                    .number(&param)
                    .ok_or_else(|| Error::InvalidInput(format!("`{param}` is not a numeric key")))
            };
            let result = sweep(&spec, &param, quantity(&from)?, quantity(&to)?, points)?;
            let mut table = CsvTable::new(&[param.as_str(), "V"]);
            table.meta("cvsim", env!("CARGO_PKG_VERSION"));
            table.meta("scenario", spec.name);
            table.meta("scheme", spec.scheme.kind);
            table.meta("sweep", &param);
            table.rows = result.samples.iter().map(|&(x, v)| vec![x, v]).collect();
            table.footer.push((
                "optimum".into(),
                format!("{param} = {}, V = {}", format_number(result.optimum.0), format_number(result.optimum.1)),
            ));
            emit(&table, output.as_deref())
        }
        Command::Reproduce { figure, common } => {
            let name: ScenarioName = figure.parse()?;
            if name.fixed_scheme().is_none() {
                return Err(Error::InvalidInput(format!("'{figure}' is not a figure (use `params` or `simulate`)")));
            }
            let mut map = ConfigMap::default();
            map.set("scenario", Value::Text(name.name().into()))?;
            let (spec, output) = resolve(map, &common)?;
            emit(&run_scenario(&spec)?, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cvsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
