//! Procedural tone synthesis driven by seeded random matrices.
//!
//! Each number drawn from a [`RandomMatrix`] picks one note of a per-mood
//! pentatonic table. A mood loop is six such notes rendered as sine segments,
//! with segment `i` peaking at the `i`-th value of the mood's signature.

mod rng;
pub mod wav;

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::model::{MoodCategory, MoodSignature, SIGNATURE_LEN};

pub use rng::{check_range, UniformRng};
pub use wav::{decode_wav, encode_wav, write_wav};

/// Middle C.
pub const BASE_FREQ_HZ: f64 = 261.63;
pub const DEFAULT_SAMPLE_RATE: u32 = 44_100;
pub const FADE_SECONDS: f64 = 0.010;

/// Row-major matrix of uniform draws in `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomMatrix {
    rows: usize,
    cols: usize,
    lo: f64,
    hi: f64,
    seed: u64,
    entries: Vec<f64>,
}

impl RandomMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }
}

/// Fills a `rows x cols` matrix in row-major order from a [`UniformRng`]
/// seeded with `seed`.
pub fn generate_random_matrix(
    seed: u64,
    rows: usize,
    cols: usize,
    lo: f64,
    hi: f64,
) -> Result<RandomMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "matrix dimensions must be positive, got {rows}x{cols}"
        )));
    }
    check_range(lo, hi)?;
    let len = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::InvalidArgument("matrix too large".into()))?;
    let mut rng = UniformRng::new(seed);
    let entries = (0..len).map(|_| rng.next_in(lo, hi)).collect();
    Ok(RandomMatrix {
        rows,
        cols,
        lo,
        hi,
        seed,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneSegment {
    pub frequency: f64,
    pub duration: f64,
    pub amplitude: f64,
}

/// Semitone offsets of each mood's note table.
pub fn pitch_table(mood: MoodCategory) -> &'static [i32; 5] {
    match mood {
        MoodCategory::Sad => &[0, 3, 5, 7, 10],
        MoodCategory::Happy => &[0, 2, 4, 7, 9],
        MoodCategory::Normal => &[0, 2, 4, 7, 9],
        MoodCategory::Angry => &[0, 1, 6, 7, 10],
    }
}

pub fn base_freq(mood: MoodCategory) -> f64 {
    match mood {
        MoodCategory::Happy => BASE_FREQ_HZ * 2.0,
        _ => BASE_FREQ_HZ,
    }
}

pub fn beat_seconds(mood: MoodCategory) -> f64 {
    match mood {
        MoodCategory::Sad => 0.8,
        MoodCategory::Normal => 0.5,
        MoodCategory::Happy => 0.3,
        MoodCategory::Angry => 0.25,
    }
}

/// Maps `x` in `[0, 1)` to a note: equal-width buckets over the mood's table.
pub fn number_to_segment(x: f64, mood: MoodCategory) -> Result<ToneSegment> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "segment source {x} outside [0, 1)"
        )));
    }
    let table = pitch_table(mood);
    let idx = ((x * table.len() as f64) as usize).min(table.len() - 1);
    let step = table[idx];
    Ok(ToneSegment {
        frequency: base_freq(mood) * 2f64.powf(step as f64 / 12.0),
        duration: beat_seconds(mood),
        amplitude: 1.0,
    })
}

/// Mono audio with every sample in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    sample_rate: u32,
    samples: Vec<f64>,
}

impl AudioBuffer {
    pub fn new(sample_rate: u32, samples: Vec<f64>) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidArgument(
                "sample rate must be positive".into(),
            ));
        }
        if let Some((i, s)) = samples
            .iter()
            .enumerate()
            .find(|(_, s)| !(-1.0..=1.0).contains(*s))
        {
            return Err(Error::InvalidArgument(format!(
                "sample {i} = {s} outside [-1, 1]"
            )));
        }
        Ok(Self {
            sample_rate,
            samples,
        })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Sample count for one segment of `seconds` at `sample_rate`.
pub fn segment_samples(seconds: f64, sample_rate: u32) -> Result<usize> {
    if !(seconds.is_finite() && seconds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "segment length must be positive, got {seconds} s"
        )));
    }
    if sample_rate == 0 {
        return Err(Error::InvalidArgument(
            "sample rate must be positive".into(),
        ));
    }
    let n = (seconds * sample_rate as f64).round();
    if n < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "segment of {seconds} s rounds to zero samples at {sample_rate} Hz"
        )));
    }
    if n > u32::MAX as f64 {
        return Err(Error::InvalidArgument(format!(
            "segment of {seconds} s is too long"
        )));
    }
    Ok(n as usize)
}

/// Fade ramp length for a segment of `len` samples: 10 ms, capped at half
/// the segment.
pub fn fade_samples(len: usize, sample_rate: u32) -> usize {
    let fade = (FADE_SECONDS * sample_rate as f64).round() as usize;
    fade.min(len / 2)
}

fn render_segment(out: &mut Vec<f64>, seg: &ToneSegment, peak: f64, len: usize, sample_rate: u32) {
    let fade = fade_samples(len, sample_rate);
    let w = TAU * seg.frequency / sample_rate as f64;
    for k in 0..len {
        let env = if k < fade {
            k as f64 / fade as f64
        } else if k >= len - fade {
            (len - 1 - k) as f64 / fade as f64
        } else {
            1.0
        };
        out.push(peak * seg.amplitude * env * (w * k as f64).sin());
    }
}

/// Renders a six-segment loop for `mood`. Notes come from a seeded 1x6 matrix
/// in `[0, 1)`; segment `i` lasts `segment_seconds` and peaks at
/// `signature.values()[i]`, with 10 ms linear fades at both ends.
pub fn render_mood(
    mood: MoodCategory,
    signature: &MoodSignature,
    seed: u64,
    segment_seconds: f64,
    sample_rate: u32,
) -> Result<AudioBuffer> {
    if signature.mood() != mood {
        return Err(Error::InvalidArgument(format!(
            "signature for {} cannot render {mood}",
            signature.mood()
        )));
    }
    let len = segment_samples(segment_seconds, sample_rate)?;
    let matrix = generate_random_matrix(seed, 1, SIGNATURE_LEN, 0.0, 1.0)?;
    let mut samples = Vec::with_capacity(len * SIGNATURE_LEN);
    for (&x, &peak) in matrix.row(0).iter().zip(signature.values()) {
        let seg = number_to_segment(x, mood)?;
        render_segment(&mut samples, &seg, peak, len, sample_rate);
    }
    AudioBuffer::new(sample_rate, samples)
}

/// Joins two buffers, blending the last `overlap` samples of `a` with the
/// first `overlap` samples of `b`. Blend weight for overlap sample `j` is
/// `t = (j + 1) / (overlap + 1)`, so the ramp runs from 0 to 1 exclusive.
pub fn crossfade(a: &AudioBuffer, b: &AudioBuffer, overlap: usize) -> Result<AudioBuffer> {
    if a.sample_rate != b.sample_rate {
        return Err(Error::InvalidArgument(format!(
            "sample rate mismatch: {} vs {}",
            a.sample_rate, b.sample_rate
        )));
    }
    if overlap > a.len().min(b.len()) {
        return Err(Error::InvalidArgument(format!(
            "overlap {overlap} exceeds buffer lengths {} / {}",
            a.len(),
            b.len()
        )));
    }
    let head = a.len() - overlap;
    let mut out = Vec::with_capacity(a.len() + b.len() - overlap);
    out.extend_from_slice(&a.samples[..head]);
    for j in 0..overlap {
        let t = (j + 1) as f64 / (overlap + 1) as f64;
        let (x, y) = (a.samples[head + j], b.samples[j]);
        // x + (y - x) t; equal inputs stay exact and the clamp keeps the
        // result between its endpoints
        let mixed = (x + (y - x) * t).clamp(x.min(y), x.max(y));
        out.push(mixed);
    }
    out.extend_from_slice(&b.samples[overlap..]);
    Ok(AudioBuffer {
        sample_rate: a.sample_rate,
        samples: out,
    })
}
