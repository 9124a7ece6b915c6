use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mcf_delay::scenario::{parse_document, FreqGridDoc, ModeDoc, Scenario, ScenarioDocument, TaskName};
use mcf_delay::tasks::run_scenario;

#[derive(Parser, Debug)]
#[command(
    name = "mcf-delay",
    version,
    about = "Multicore fiber bend/twist group-delay simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-core delays and DGD against the central core
    Dgd(Common),
    /// Worst-case DGD versus bend radius
    SweepBend(Common),
    /// Worst-case DGD versus total twist
    SweepTwist(Common),
    /// FIR filter magnitude response
    Filter(Common),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    /// Output CSV; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// first_order | exact_sqrt
    #[arg(long)]
    mode: Option<ModeDoc>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    radii_mm: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    twist_turns: Option<Vec<f64>>,
    /// start:stop:points, GHz
    #[arg(long)]
    freq_ghz: Option<FreqGridDoc>,
    /// Filter metrics CSV; printed to stderr when omitted
    #[arg(long)]
    metrics: Option<PathBuf>,
}

impl Common {
    fn apply(&self, doc: &mut ScenarioDocument, task: TaskName) {
        doc.task.name = task;
        let params = &mut doc.task.params;
        if let Some(mode) = self.mode {
            doc.mode = mode;
        }
        if let Some(radii) = &self.radii_mm {
            params.radii_mm = Some(radii.clone());
        }
        if let Some(turns) = &self.twist_turns {
            params.twist_turns = Some(turns.clone());
            params.twist_pi = None;
        }
        if let Some(grid) = self.freq_ghz {
            params.freq_ghz = Some(grid);
        }
    }
}

fn run(cli: Cli) -> Result<(), (i32, String)> {
    let (task, common) = match &cli.command {
        Command::Dgd(c) => (TaskName::Dgd, c),
        Command::SweepBend(c) => (TaskName::SweepBend, c),
        Command::SweepTwist(c) => (TaskName::SweepTwist, c),
        Command::Filter(c) => (TaskName::Filter, c),
    };
    let text = fs::read_to_string(&common.scenario)
        .map_err(|e| (1, format!("{}: {e}", common.scenario.display())))?;
    let model_err = |e: mcf_delay::Error| (e.exit_code(), e.to_string());
    let mut doc = parse_document(&text).map_err(model_err)?;
    common.apply(&mut doc, task);
    let scenario = Scenario::from_document(doc).map_err(model_err)?;
    let output = run_scenario(&scenario).map_err(model_err)?;

    let csv = output.table.to_csv();
    match &common.out {
        Some(path) => fs::write(path, csv).map_err(|e| (1, format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    if let Some(metrics) = output.metrics {
        let csv = metrics.to_csv();
        match &common.metrics {
            Some(path) => fs::write(path, csv).map_err(|e| (1, format!("{}: {e}", path.display())))?,
            None => eprint!("{csv}"),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("mcf-delay: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
