use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use hk_metric::sweep::{
    analyze, emit_svg, read_csv, records_to_csv, reproduce_fig2, run_sweep, Accuracy, Model, ModelParams, Series,
    SweepSpec,
};
use hk_metric::{Error, Result};

#[derive(Parser)]
#[command(name = "hkmetric", version, about = "Wave-function and density distances along parameter sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep described by a JSON file and print its CSV.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also plot the curve.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run every preset sweep and write CSVs, plots and reports.
    #[command(name = "reproduce-fig2")]
    ReproduceFig2 {
        #[arg(long, default_value = "fig2")]
        outdir: PathBuf,
    },
    /// Analyze the curve stored in a sweep CSV.
    Analyze {
        #[arg(long)]
        csv: PathBuf,
        /// Particle number; inferred from the normalized columns if omitted.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Distances between two states of one model.
    Distance {
        #[arg(long)]
        model: String,
        /// Reference parameters, `key=value,...`.
        #[arg(long = "ref")]
        reference: String,
        /// Parameters of the second state; unspecified keys follow `--ref`.
        #[arg(long = "var")]
        varied: String,
    },
    /// Plot a sweep CSV.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// Plot raw distances instead of normalized ones.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        title: Option<String>,
    },
}

fn parse_assignments(text: &str) -> Result<Map<String, Value>> {
    let mut map = Map::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got '{item}'")))?;
        let value = if let Ok(i) = raw.parse::<i64>() {
            Value::from(i)
        } else if let Ok(x) = raw.parse::<f64>() {
            Value::from(x)
        } else if let Ok(b) = raw.parse::<bool>() {
            Value::from(b)
        } else {
            Value::from(raw)
        };
        map.insert(key.trim().to_string(), value);
    }
    Ok(map)
}

fn infer_particle_count(records: &[hk_metric::sweep::DistanceRecord]) -> Result<usize> {
    records
        .iter()
        .find(|r| r.d_psi_norm > 0.0)
        .map(|r| ((r.d_psi / r.d_psi_norm).powi(2) / 2.0).round() as usize)
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput("cannot infer N from the CSV; pass --n".into()))
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { spec, csv, svg } => {
            let spec = SweepSpec::from_path(&spec)?;
            let out = run_sweep(&spec)?;
            let text = records_to_csv(&out.records)?;
            match csv {
                Some(path) => std::fs::write(&path, text).map_err(|source| Error::Io { path, source })?,
                None => print!("{text}"),
            }
            if let Some(path) = svg {
                let series = [Series::from_records(&out.label, &out.records, spec.normalize)];
                emit_svg(&out.label, &series, spec.normalize, &path)?;
            }
        }
        Command::ReproduceFig2 { outdir } => {
            let report = reproduce_fig2(&outdir)?;
            for v in &report.sweeps {
                let a = &v.analysis;
                println!(
                    "{:<18} N={} records={:>2} monotonic={} slope0={:.4} r2={} tail={} reach={:.3}",
                    v.label,
                    v.particle_count,
                    a.records,
                    a.monotonic,
                    a.initial_slope,
                    a.linear_r2.map_or("n/a".into(), |r| format!("{r:.4}")),
                    match v.tail_ok {
                        Some(_) => format!("{:.3}", a.tail_slope_ratio),
                        None => "n/a".into(),
                    },
                    a.reach,
                );
            }
            let s = &report.superposition;
            println!(
                "superposition {} vs {}: max deviation {:.4} (threshold {})",
                s.curve_a, s.curve_b, s.max_deviation, s.threshold
            );
            println!("wrote {} files to {}", report.files.len(), outdir.display());
        }
        Command::Analyze { csv, n } => {
            let records = read_csv(&csv)?;
            let n = match n {
                Some(n) => n,
                None => infer_particle_count(&records)?,
            };
            print_json(&analyze(&records, n)?);
        }
        Command::Distance { model, reference, varied } => {
            let model: Model = model.parse()?;
            let ref_map = parse_assignments(&reference)?;
            let mut var_map = ref_map.clone();
            var_map.extend(parse_assignments(&varied)?);
            let spec = SweepSpec {
                label: model.to_string(),
                model,
                reference: ModelParams::from_value(model, Value::Object(ref_map))?,
                varied: vec![ModelParams::from_value(model, Value::Object(var_map))?],
                normalize: true,
                accuracy: Accuracy::default(),
            };
            let out = run_sweep(&spec)?;
            print_json(&out.records[0]);
        }
        Command::Plot { csv, svg, raw, title } => {
            let records = read_csv(&csv)?;
            let label = csv.file_stem().map_or("sweep".into(), |s| s.to_string_lossy().into_owned());
            let series = [Series::from_records(&label, &records, !raw)];
            emit_svg(title.as_deref().unwrap_or(&label), &series, !raw, &svg)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
