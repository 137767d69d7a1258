//! Game sessions: telemetry datasets, mood timelines and session soundtracks.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    Attribute, GameState, MoodCategory, MoodSignature, ScalingProfile, SIGNATURE_LEN,
};
use crate::rules::{evaluate, RuleSet};
use crate::synth::{check_range, crossfade, render_mood, segment_samples, AudioBuffer, UniformRng};

/// Ordered telemetry rows, optionally labeled with the expected mood.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<GameState>,
    labels: Option<Vec<MoodCategory>>,
}

impl Dataset {
    pub fn new(rows: Vec<GameState>, labels: Option<Vec<MoodCategory>>) -> Result<Self> {
        if let Some(labels) = &labels {
            if labels.len() != rows.len() {
                return Err(Error::InvalidArgument(format!(
                    "{} labels for {} rows",
                    labels.len(),
                    rows.len()
                )));
            }
        }
        Ok(Self { rows, labels })
    }

    pub fn rows(&self) -> &[GameState] {
        &self.rows
    }

    pub fn labels(&self) -> Option<&[MoodCategory]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows zipped with their labels; `None` for unlabeled data.
    pub fn labeled_rows(&self) -> Option<Vec<(GameState, MoodCategory)>> {
        let labels = self.labels.as_ref()?;
        Some(
            self.rows
                .iter()
                .copied()
                .zip(labels.iter().copied())
                .collect(),
        )
    }

    /// Appends `other`. Labels survive only if both sides have them.
    pub fn concat(mut self, other: Dataset) -> Dataset {
        self.labels = match (self.labels, other.labels) {
            (Some(mut a), Some(b)) => {
                a.extend(b);
                Some(a)
            }
            _ => None,
        };
        self.rows.extend(other.rows);
        self
    }
}

/// Half-open sampling range per attribute for generated datasets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttributeRanges {
    pub life: (f64, f64),
    pub energy: (f64, f64),
    pub score: (f64, f64),
    pub level: (f64, f64),
}

impl AttributeRanges {
    pub fn get(&self, attr: Attribute) -> (f64, f64) {
        match attr {
            Attribute::Life => self.life,
            Attribute::Energy => self.energy,
            Attribute::Score => self.score,
            Attribute::Level => self.level,
        }
    }

    pub fn set(&mut self, attr: Attribute, range: (f64, f64)) {
        match attr {
            Attribute::Life => self.life = range,
            Attribute::Energy => self.energy = range,
            Attribute::Score => self.score = range,
            Attribute::Level => self.level = range,
        }
    }
}

impl Default for AttributeRanges {
    /// Spans covering every row of the shipped labeled datasets.
    fn default() -> Self {
        Self {
            life: (0.0, 0.004),
            energy: (0.0, 0.09),
            score: (0.0, 10.0),
            level: (0.0, 0.01),
        }
    }
}

/// Random dataset with the default attribute ranges.
pub fn generate_dataset(seed: u64, n_rows: usize) -> Result<Dataset> {
    generate_dataset_in(seed, n_rows, &AttributeRanges::default())
}

/// Draws `n_rows` states row by row (life, energy, score, level) from one
/// seeded generator.
pub fn generate_dataset_in(seed: u64, n_rows: usize, ranges: &AttributeRanges) -> Result<Dataset> {
    if n_rows < 1 {
        return Err(Error::InvalidArgument(
            "dataset needs at least one row".into(),
        ));
    }
    for attr in Attribute::ALL {
        let (lo, hi) = ranges.get(attr);
        check_range(lo, hi)?;
        if lo < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{attr} range must be non-negative"
            )));
        }
    }
    let mut rng = UniformRng::new(seed);
    let mut rows = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let v = Attribute::ALL.map(|a| {
            let (lo, hi) = ranges.get(a);
            rng.next_in(lo, hi)
        });
        rows.push(GameState::new(v[0], v[1], v[2], v[3])?);
    }
    Dataset::new(rows, None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TimelineEntry {
    pub index: usize,
    pub mood: MoodCategory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub index: usize,
    pub from: MoodCategory,
    pub to: MoodCategory,
}

/// A maximal run of consecutive rows sharing one mood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MoodRun {
    pub mood: MoodCategory,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoodTimeline {
    entries: Vec<TimelineEntry>,
    transitions: Vec<Transition>,
}

impl MoodTimeline {
    pub fn from_moods(moods: &[MoodCategory]) -> Self {
        let entries = moods
            .iter()
            .enumerate()
            .map(|(index, &mood)| TimelineEntry { index, mood })
            .collect();
        let transitions = moods
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] != w[1])
            .map(|(i, w)| Transition {
                index: i + 1,
                from: w[0],
                to: w[1],
            })
            .collect();
        Self {
            entries,
            transitions,
        }
    }

    pub fn entries(&self) -> &[TimelineEntry] {
        &self.entries
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn moods(&self) -> Vec<MoodCategory> {
        self.entries.iter().map(|e| e.mood).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn runs(&self) -> Vec<MoodRun> {
        let mut runs: Vec<MoodRun> = Vec::new();
        for e in &self.entries {
            match runs.last_mut() {
                Some(run) if run.mood == e.mood => run.len += 1,
                _ => runs.push(MoodRun {
                    mood: e.mood,
                    start: e.index,
                    len: 1,
                }),
            }
        }
        runs
    }
}

/// Classifies every row in order.
pub fn run_session(dataset: &Dataset, ruleset: &RuleSet, profile: &ScalingProfile) -> MoodTimeline {
    let moods: Vec<MoodCategory> = dataset
        .rows()
        .iter()
        .map(|row| evaluate(row, ruleset, profile))
        .collect();
    MoodTimeline::from_moods(&moods)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelineStats {
    pub total: usize,
    pub counts: BTreeMap<MoodCategory, usize>,
    pub fractions: BTreeMap<MoodCategory, f64>,
    pub transitions: usize,
}

pub fn timeline_stats(timeline: &MoodTimeline) -> TimelineStats {
    let mut counts: BTreeMap<MoodCategory, usize> =
        MoodCategory::ALL.iter().map(|&m| (m, 0)).collect();
    for e in timeline.entries() {
        *counts.entry(e.mood).or_default() += 1;
    }
    let total = timeline.len();
    let fractions = counts
        .iter()
        .map(|(&m, &c)| {
            (
                m,
                if total == 0 {
                    0.0
                } else {
                    c as f64 / total as f64
                },
            )
        })
        .collect();
    TimelineStats {
        total,
        counts,
        fractions,
        transitions: timeline.transitions().len(),
    }
}

/// Renders one mood block per run and chains the blocks with crossfades.
/// Run `r` is rendered with seed `seed ^ r`.
pub fn render_session(
    timeline: &MoodTimeline,
    signatures: &BTreeMap<MoodCategory, MoodSignature>,
    seed: u64,
    segment_seconds: f64,
    overlap_seconds: f64,
    sample_rate: u32,
) -> Result<AudioBuffer> {
    if timeline.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot render an empty timeline".into(),
        ));
    }
    if !(overlap_seconds.is_finite() && overlap_seconds >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "overlap must be non-negative, got {overlap_seconds} s"
        )));
    }
    let block_len = segment_samples(segment_seconds, sample_rate)? * SIGNATURE_LEN;
    let overlap = (overlap_seconds * sample_rate as f64).round() as usize;
    if overlap > block_len {
        return Err(Error::InvalidArgument(format!(
            "overlap of {overlap} samples exceeds the {block_len}-sample mood block"
        )));
    }

    let mut out: Option<AudioBuffer> = None;
    for (r, run) in timeline.runs().iter().enumerate() {
        let sig = signatures
            .get(&run.mood)
            .ok_or_else(|| Error::InvalidArgument(format!("no signature for {}", run.mood)))?;
        let block = render_mood(run.mood, sig, seed ^ r as u64, segment_seconds, sample_rate)?;
        out = Some(match out {
            None => block,
            Some(acc) => crossfade(&acc, &block, overlap)?,
        });
    }
    Ok(out.expect("non-empty timeline has at least one run"))
}

const HEADER: [&str; 4] = ["life", "energy", "score", "level"];

/// Reads `life,energy,score,level[,label]` CSV.
pub fn load_csv(source: impl Read) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers().map_err(|e| csv_error(e, 1))?.clone();
    let names: Vec<&str> = headers.iter().collect();
    let labeled = match names.as_slice() {
        [a, b, c, d] if [*a, *b, *c, *d] == HEADER => false,
        [a, b, c, d, "label"] if [*a, *b, *c, *d] == HEADER => true,
        _ => {
            return Err(Error::Parse {
                line: 1,
                column: "header".into(),
                message: format!(
                    "expected `life,energy,score,level[,label]`, got `{}`",
                    names.join(",")
                ),
            })
        }
    };

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        let mut v = [0.0; 4];
        for (i, name) in HEADER.iter().enumerate() {
            let cell = &record[i];
            let x: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                column: (*name).into(),
                message: format!("not a number: {cell:?}"),
            })?;
            if !x.is_finite() || x < 0.0 {
                return Err(Error::Parse {
                    line,
                    column: (*name).into(),
                    message: format!("value must be finite and non-negative, got {cell}"),
                });
            }
            v[i] = x;
        }
        rows.push(GameState::new(v[0], v[1], v[2], v[3])?);
        if labeled {
            let mood = record[4].parse().map_err(|e: Error| Error::Parse {
                line,
                column: "label".into(),
                message: e.to_string(),
            })?;
            labels.push(mood);
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 2,
            column: "-".into(),
            message: "dataset has no rows".into(),
        });
    }
    Dataset::new(rows, labeled.then_some(labels))
}

pub fn load_csv_path(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_csv(file)
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::Parse {
        line,
        column: "-".into(),
        message: e.to_string(),
    }
}

/// Writes the dataset with shortest round-trip float formatting, so loading
/// the output recovers the dataset exactly.
pub fn save_csv(dataset: &Dataset, destination: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(destination);
    let mut header: Vec<&str> = HEADER.to_vec();
    if dataset.labels.is_some() {
        header.push("label");
    }
    w.write_record(&header).map_err(csv_write_error)?;
    for (i, row) in dataset.rows.iter().enumerate() {
        let mut rec: Vec<String> = row.values().iter().map(|v| v.to_string()).collect();
        if let Some(labels) = &dataset.labels {
            rec.push(labels[i].to_string());
        }
        w.write_record(&rec).map_err(csv_write_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_csv_path(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    save_csv(dataset, file).map_err(|e| match e {
        Error::Stream(io) => Error::io(path, io),
        other => other,
    })
}

fn csv_write_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Stream(io),
        other => Error::Format(format!("{other:?}")),
    }
}
