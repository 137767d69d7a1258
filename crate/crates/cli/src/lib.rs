//! Subcommands of the `adaptive-music` binary.
//!
//! Every command writes human-readable output to the supplied writer and
//! only produces machine-readable artifacts when asked for a path or flag.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use adaptive_music::model::{default_signatures, Attribute, ScalingProfile};
use adaptive_music::rules::{
    calibrate_scaling, default_ruleset, evaluate, CalibrationGrid, RuleSet, RuleSetFile,
};
use adaptive_music::session::{
    generate_dataset_in, load_csv, render_session, run_session, save_csv_path, timeline_stats,
    AttributeRanges, Dataset, MoodRun, MoodTimeline, Transition,
};
use adaptive_music::survey::{aggregate, load_survey_csv, render_report};
use adaptive_music::synth::{segment_samples, write_wav};
use adaptive_music::{fixtures, MoodCategory};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "adaptive-music",
    version,
    about = "Condition-driven adaptive music generation"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Rule-set JSON file (default: built-in mood rules)
    #[arg(long, global = true, value_name = "PATH")]
    pub ruleset: Option<PathBuf>,

    /// Scaling factors k_life,k_energy,k_score,k_level
    #[arg(long, global = true, value_name = "K,K,K,K")]
    pub scaling: Option<ScalingProfile>,

    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 44_100)]
    pub sample_rate: u32,

    #[arg(long, global = true, default_value_t = 0.5)]
    pub segment_seconds: f64,

    #[arg(long, global = true, default_value_t = 0.05)]
    pub overlap_seconds: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the mood of every row of a telemetry CSV
    Classify {
        input: PathBuf,
        /// Also write the rows with their classified labels
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Generate a random session and report its mood timeline
    Simulate {
        #[arg(short = 'n', long, default_value_t = 5)]
        rows: usize,
        /// Write the generated dataset as CSV
        #[arg(long, value_name = "PATH")]
        csv_out: Option<PathBuf>,
        /// Override a sampling range, e.g. `score=0:20`
        #[arg(long = "range", value_name = "ATTR=LO:HI", value_parser = parse_range)]
        ranges: Vec<(Attribute, (f64, f64))>,
    },
    /// Render a session soundtrack WAV plus a timeline sidecar
    Render {
        input: PathBuf,
        output: PathBuf,
        /// Sidecar JSON path (default: OUTPUT with `.timeline.json`)
        #[arg(long, value_name = "PATH")]
        sidecar: Option<PathBuf>,
    },
    /// Find scaling profiles under which labeled CSVs reproduce their labels
    Calibrate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// One factor list for all attributes, or four `;`-separated lists
        #[arg(long, default_value = "250,500,750,1000,1250")]
        grid: String,
    },
    /// Aggregate a user survey CSV
    Survey {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Command failure, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or arguments (exit 1).
    Input(String),
    /// A self-check on produced output failed (exit 2).
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Internal(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "error: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<adaptive_music::Error> for Failure {
    fn from(e: adaptive_music::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn parse_range(s: &str) -> Result<(Attribute, (f64, f64)), String> {
    let (name, span) = s.split_once('=').ok_or("expected ATTR=LO:HI")?;
    let attr = Attribute::ALL
        .into_iter()
        .find(|a| a.name() == name.trim())
        .ok_or_else(|| format!("unknown attribute {name:?}"))?;
    let (lo, hi) = span.split_once(':').ok_or("expected LO:HI")?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad number {lo:?}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad number {hi:?}"))?;
    Ok((attr, (lo, hi)))
}

fn parse_factor_list(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Input(format!("bad grid factor {x:?}")))
        })
        .collect()
}

fn parse_grid(spec: &str) -> Result<CalibrationGrid, Failure> {
    let axes: Vec<&str> = spec.split(';').collect();
    match axes.as_slice() {
        [one] => Ok(CalibrationGrid::uniform(&parse_factor_list(one)?)),
        [l, e, s, v] => Ok(CalibrationGrid {
            life: parse_factor_list(l)?,
            energy: parse_factor_list(e)?,
            score: parse_factor_list(s)?,
            level: parse_factor_list(v)?,
        }),
        _ => Err(Failure::Input(
            "grid must be one factor list or four `;`-separated lists".into(),
        )),
    }
}

/// Reads a file, falling back to the embedded copy of a shipped fixture when
/// the path does not exist but its file name is a known fixture.
pub fn read_input(path: &Path) -> Result<String, Failure> {
    match fs::read_to_string(path) {
        Ok(text) => Ok(text),
        Err(e) if e.kind() == io::ErrorKind::NotFound => path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(fixtures::by_name)
            .map(str::to_owned)
            .ok_or_else(|| Failure::Input(format!("{}: {e}", path.display()))),
        Err(e) => Err(Failure::Input(format!("{}: {e}", path.display()))),
    }
}

fn load_dataset(path: &Path) -> Result<Dataset, Failure> {
    let text = read_input(path)?;
    load_csv(text.as_bytes()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Rule set and scaling profile in effect for a run.
#[derive(Debug, Clone)]
pub struct Config {
    pub ruleset: RuleSet,
    pub profile: ScalingProfile,
    pub seed: u64,
    pub sample_rate: u32,
    pub segment_seconds: f64,
    pub overlap_seconds: f64,
}

impl Config {
    /// `--scaling` wins over a profile stored in the rule-set file, which
    /// wins over the built-in default.
    pub fn resolve(opts: &GlobalOpts) -> Result<Self, Failure> {
        let (ruleset, file_profile) = match &opts.ruleset {
            Some(path) => {
                let text = read_input(path)?;
                let file = RuleSetFile::from_json(&text)
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                (file.ruleset, file.scaling)
            }
            None => (default_ruleset(), None),
        };
        Ok(Self {
            ruleset,
            profile: opts
                .scaling
                .or(file_profile)
                .unwrap_or(ScalingProfile::DEFAULT),
            seed: opts.seed,
            sample_rate: opts.sample_rate,
            segment_seconds: opts.segment_seconds,
            overlap_seconds: opts.overlap_seconds,
        })
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let config = Config::resolve(&cli.global)?;
    match &cli.command {
        Command::Classify {
            input,
            out: csv_out,
        } => cmd_classify(input, csv_out.as_deref(), &config, out, err),
        Command::Simulate {
            rows,
            csv_out,
            ranges,
        } => {
            let mut r = AttributeRanges::default();
            for &(attr, range) in ranges {
                r.set(attr, range);
            }
            cmd_simulate(*rows, &r, csv_out.as_deref(), &config, out)
        }
        Command::Render {
            input,
            output,
            sidecar,
        } => {
            let sidecar = sidecar.clone().unwrap_or_else(|| default_sidecar(output));
            cmd_render(input, output, &sidecar, &config, out)
        }
        Command::Calibrate { inputs, grid } => {
            cmd_calibrate(inputs, &parse_grid(grid)?, &config, out)
        }
        Command::Survey { input, json } => cmd_survey(input, *json, out),
    }
}

pub fn default_sidecar(wav: &Path) -> PathBuf {
    wav.with_extension("timeline.json")
}

pub fn cmd_classify(
    input: &Path,
    csv_out: Option<&Path>,
    config: &Config,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let dataset = load_dataset(input)?;
    let moods: Vec<MoodCategory> = dataset
        .rows()
        .iter()
        .map(|row| evaluate(row, &config.ruleset, &config.profile))
        .collect();
    for mood in &moods {
        writeln!(out, "{mood}")?;
    }
    if let Some(labels) = dataset.labels() {
        for (i, (want, got)) in labels.iter().zip(&moods).enumerate() {
            if want != got {
                writeln!(err, "note: row {} labeled {want}, classified {got}", i + 1)?;
            }
        }
    }
    if let Some(path) = csv_out {
        let labeled = Dataset::new(dataset.rows().to_vec(), Some(moods))?;
        save_csv_path(&labeled, path)?;
    }
    Ok(())
}

pub fn cmd_simulate(
    n_rows: usize,
    ranges: &AttributeRanges,
    csv_out: Option<&Path>,
    config: &Config,
    out: &mut dyn Write,
) -> CmdResult {
    let dataset = generate_dataset_in(config.seed, n_rows, ranges)?;
    let timeline = run_session(&dataset, &config.ruleset, &config.profile);
    let stats = timeline_stats(&timeline);

    writeln!(
        out,
        "seed {} | {} rows | scaling {}",
        config.seed, n_rows, config.profile
    )?;
    writeln!(
        out,
        "{:>4} {:>10} {:>10} {:>10} {:>10}  mood",
        "row", "life", "energy", "score", "level"
    )?;
    for (row, entry) in dataset.rows().iter().zip(timeline.entries()) {
        writeln!(
            out,
            "{:>4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}  {}",
            entry.index + 1,
            row.life(),
            row.energy(),
            row.score(),
            row.level(),
            entry.mood
        )?;
    }
    writeln!(out)?;
    for (mood, count) in &stats.counts {
        writeln!(
            out,
            "{:<7} {:>5} {:>8.4}",
            mood.name(),
            count,
            stats.fractions[mood]
        )?;
    }
    writeln!(out, "transitions {}", stats.transitions)?;
    for t in timeline.transitions() {
        writeln!(out, "  row {}: {} -> {}", t.index + 1, t.from, t.to)?;
    }
    if let Some(path) = csv_out {
        save_csv_path(&dataset, path)?;
    }
    Ok(())
}

/// Timeline sidecar written next to a rendered WAV.
#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    seed: u64,
    sample_rate: u32,
    segment_seconds: f64,
    overlap_seconds: f64,
    scaling: [f64; 4],
    samples: usize,
    moods: Vec<MoodCategory>,
    transitions: &'a [Transition],
    blocks: Vec<MoodRun>,
    crossfades: usize,
}

pub fn cmd_render(
    input: &Path,
    wav_out: &Path,
    sidecar_out: &Path,
    config: &Config,
    out: &mut dyn Write,
) -> CmdResult {
    let dataset = load_dataset(input)?;
    let timeline: MoodTimeline = run_session(&dataset, &config.ruleset, &config.profile);
    let buffer = render_session(
        &timeline,
        &default_signatures(),
        config.seed,
        config.segment_seconds,
        config.overlap_seconds,
        config.sample_rate,
    )?;

    let runs = timeline.runs();
    let block_len = segment_samples(config.segment_seconds, config.sample_rate)? * 6;
    let overlap = (config.overlap_seconds * config.sample_rate as f64).round() as usize;
    let expected = runs.len() * block_len - (runs.len() - 1) * overlap;
    if buffer.len() != expected {
        return Err(Failure::Internal(format!(
            "rendered {} samples, expected {expected}",
            buffer.len()
        )));
    }
    write_wav(&buffer, wav_out)?;

    let sidecar = Sidecar {
        seed: config.seed,
        sample_rate: config.sample_rate,
        segment_seconds: config.segment_seconds,
        overlap_seconds: config.overlap_seconds,
        scaling: config.profile.factors(),
        samples: buffer.len(),
        moods: timeline.moods(),
        transitions: timeline.transitions(),
        crossfades: runs.len() - 1,
        blocks: runs,
    };
    let json =
        serde_json::to_string_pretty(&sidecar).map_err(|e| Failure::Internal(e.to_string()))?;
    fs::write(sidecar_out, json + "\n")
        .map_err(|e| Failure::Input(format!("{}: {e}", sidecar_out.display())))?;

    writeln!(
        out,
        "wrote {} ({} samples, {:.3} s, {} blocks, {} crossfades)",
        wav_out.display(),
        buffer.len(),
        buffer.duration_seconds(),
        sidecar.blocks.len(),
        sidecar.crossfades
    )?;
    writeln!(out, "wrote {}", sidecar_out.display())?;
    Ok(())
}

pub fn cmd_calibrate(
    inputs: &[PathBuf],
    grid: &CalibrationGrid,
    config: &Config,
    out: &mut dyn Write,
) -> CmdResult {
    let mut combined: Option<Dataset> = None;
    for path in inputs {
        let d = load_dataset(path)?;
        if d.labels().is_none() {
            return Err(Failure::Input(format!(
                "{}: calibration needs a `label` column",
                path.display()
            )));
        }
        combined = Some(match combined {
            None => d,
            Some(acc) => acc.concat(d),
        });
    }
    let dataset = combined.ok_or_else(|| Failure::Input("no input files".into()))?;
    let rows = dataset.labeled_rows().expect("labels checked above");
    let profiles = calibrate_scaling(&rows, &config.ruleset, grid)?;
    if profiles.is_empty() {
        writeln!(
            out,
            "no profile among {} grid candidates reproduces all {} labels; the labels may contradict the rules",
            grid.len(),
            rows.len()
        )?;
        return Ok(());
    }
    writeln!(
        out,
        "{} of {} grid profiles reproduce all {} labels (k_life,k_energy,k_score,k_level):",
        profiles.len(),
        grid.len(),
        rows.len()
    )?;
    for p in &profiles {
        writeln!(out, "{p}")?;
    }
    Ok(())
}

pub fn cmd_survey(input: &Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let text = read_input(input)?;
    let records = load_survey_csv(text.as_bytes())
        .map_err(|e| Failure::Input(format!("{}: {e}", input.display())))?;
    let report = aggregate(&records)?;
    if json {
        writeln!(out, "{}", report.to_json()?)?;
    } else {
        write!(out, "{}", render_report(&records, &report))?;
    }
    Ok(())
}
