use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use stillwatch::detector::detect_events;
use stillwatch::filterbank::{
    design_bandpass_cascade, DEFAULT_HIGH_CUTOFF_HZ, DEFAULT_LOW_CUTOFF_HZ, DEFAULT_ORDER,
    DEFAULT_SAMPLE_RATE_HZ,
};
use stillwatch::io::{self, DeviceInput};
use stillwatch::sim::{self, figure3_scenario};
use stillwatch::{FilterSpec, RawSample, Settings};

/// Activity counts, inactivity detection and device simulation.
#[derive(Debug, Parser)]
#[command(name = "stillwatch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert raw samples (t,ax,ay,az) to VM counts (t,vm,sx,sy,sz).
    Counts {
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the inactivity detector on a samples or counts CSV.
    Detect {
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate a scenario in closed loop and write the wide trace.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the event list here.
        #[arg(long)]
        events: Option<PathBuf>,
    },
    /// Print band-pass coefficients, one `b0 b1 b2 a1 a2` line per section.
    DesignFilter {
        #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE_HZ)]
        fs: f64,
        #[arg(long, default_value_t = DEFAULT_LOW_CUTOFF_HZ)]
        low: f64,
        #[arg(long, default_value_t = DEFAULT_HIGH_CUTOFF_HZ)]
        high: f64,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Run the worked example and write its series for plotting.
    Figure3 {
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Replay a device input log (t,kind,arg) and write LED snapshots.
    Replay {
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn settings(config: Option<&Path>) -> Result<Settings> {
    match config {
        Some(p) => io::parse_config(&read(p)?).with_context(|| format!("{}", p.display())),
        None => Ok(Settings::default()),
    }
}

fn samples(path: &Path, text: &str, s: &Settings) -> Result<Vec<RawSample>> {
    io::parse_samples_at(text, s.filter.sample_rate_hz)
        .with_context(|| format!("{}", path.display()))
}

fn counts(input: &Path, config: Option<&Path>, output: Option<&Path>) -> Result<()> {
    let s = settings(config)?;
    let samples = samples(input, &read(input)?, &s)?;
    let counts = s.pipeline()?.process_all(&samples)?;
    write(output, &io::write_counts(&counts))
}

fn detect(input: &Path, config: Option<&Path>, output: Option<&Path>) -> Result<()> {
    let s = settings(config)?;
    let text = read(input)?;
    let header = text.split('\n').next().unwrap_or("");
    let trace: Vec<(f64, f64)> = if header == io::COUNTS_HEADER {
        io::parse_counts(&text)
            .with_context(|| format!("{}", input.display()))?
            .iter()
            .map(|c| (c.t, c.value))
            .collect()
    } else if header == io::SAMPLES_HEADER {
        let samples = samples(input, &text, &s)?;
        s.pipeline()?
            .process_all(&samples)?
            .iter()
            .map(|c| (c.t, c.value))
            .collect()
    } else {
        bail!(
            "{}: line 1: expected header `{}` or `{}`",
            input.display(),
            io::SAMPLES_HEADER,
            io::COUNTS_HEADER
        );
    };
    let events = detect_events(s.detector, trace)?;
    write(output, &io::write_events(&events))
}

fn simulate(
    scenario: &Path,
    config: Option<&Path>,
    output: Option<&Path>,
    events: Option<&Path>,
) -> Result<()> {
    let s = settings(config)?;
    let sc =
        io::parse_scenario(&read(scenario)?).with_context(|| format!("{}", scenario.display()))?;
    let trace = sim::run(&sc, &s).with_context(|| format!("{}", scenario.display()))?;
    let wide = io::write_trace(&trace.rows);
    let ev = io::write_events(&trace.events);
    if let Some(p) = events {
        write(Some(p), &ev)?;
    }
    write(output, &wide)
}

fn design_filter(fs: f64, low: f64, high: f64, order: usize) -> Result<()> {
    let spec = FilterSpec::new(fs, low, high)?;
    let mut text = String::new();
    for c in design_bandpass_cascade(&spec, order)? {
        text.push_str(&format!(
            "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e}\n",
            c.b0, c.b1, c.b2, c.a1, c.a2
        ));
    }
    write(None, &text)
}

fn figure3(dir: &Path) -> Result<()> {
    let s = Settings::default();
    let scenario = figure3_scenario();
    let trace = sim::run(&scenario, &s)?;
    let samples: Vec<RawSample> = trace.rows.iter().map(|r| r.sample).collect();
    let counts: Vec<_> = trace.rows.iter().map(|r| r.count).collect();
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (name, text) in [
        ("scenario.toml", io::write_scenario(&scenario)?),
        ("samples.csv", io::write_samples(&samples)),
        ("counts.csv", io::write_counts(&counts)),
        ("events.csv", io::write_events(&trace.events)),
        ("trace.csv", io::write_trace(&trace.rows)),
    ] {
        write(Some(&dir.join(name)), &text)?;
    }
    Ok(())
}

fn replay(input: &Path, config: Option<&Path>, output: Option<&Path>) -> Result<()> {
    let s = settings(config)?;
    let log =
        io::parse_device_log(&read(input)?).with_context(|| format!("{}", input.display()))?;
    let mut device = s.device()?;
    let mut snapshots = Vec::new();
    for input in log {
        match input {
            DeviceInput::Button { t, button } => {
                device.press_button(button, t)?;
            }
            DeviceInput::Sample { t, vm } => snapshots.push(device.device_tick(vm, t)?.0),
        }
    }
    write(output, &io::write_snapshots(&snapshots))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Counts {
            input,
            config,
            output,
        } => counts(&input, config.as_deref(), output.as_deref()),
        Command::Detect {
            input,
            config,
            output,
        } => detect(&input, config.as_deref(), output.as_deref()),
        Command::Simulate {
            scenario,
            config,
            output,
            events,
        } => simulate(
            &scenario,
            config.as_deref(),
            output.as_deref(),
            events.as_deref(),
        ),
        Command::DesignFilter {
            fs,
            low,
            high,
            order,
        } => design_filter(fs, low, high, order),
        Command::Figure3 { output } => figure3(&output),
        Command::Replay {
            input,
            config,
            output,
        } => replay(&input, config.as_deref(), output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
