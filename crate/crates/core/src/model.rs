//! Domain vocabulary shared by the rule engine, synthesis and session code.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the four telemetry attributes of a [`GameState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attribute {
    Life,
    Energy,
    Score,
    Level,
}

impl Attribute {
    pub const ALL: [Attribute; 4] = [
        Attribute::Life,
        Attribute::Energy,
        Attribute::Score,
        Attribute::Level,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Life => "life",
            Attribute::Energy => "energy",
            Attribute::Score => "score",
            Attribute::Level => "level",
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single telemetry row.
///
/// All four values are finite and non-negative; construction rejects anything
/// else instead of clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameState {
    life: f64,
    energy: f64,
    score: f64,
    level: f64,
}

impl GameState {
    pub fn new(life: f64, energy: f64, score: f64, level: f64) -> Result<Self> {
        for (attr, value) in Attribute::ALL.iter().zip([life, energy, score, level]) {
            if !value.is_finite() {
                return Err(Error::InvalidState(format!(
                    "{attr} is not finite ({value})"
                )));
            }
            if value < 0.0 {
                return Err(Error::InvalidState(format!("{attr} is negative ({value})")));
            }
        }
        Ok(Self {
            life,
            energy,
            score,
            level,
        })
    }

    pub fn zero() -> Self {
        Self {
            life: 0.0,
            energy: 0.0,
            score: 0.0,
            level: 0.0,
        }
    }

    pub fn life(&self) -> f64 {
        self.life
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn get(&self, attr: Attribute) -> f64 {
        match attr {
            Attribute::Life => self.life,
            Attribute::Energy => self.energy,
            Attribute::Score => self.score,
            Attribute::Level => self.level,
        }
    }

    pub fn values(&self) -> [f64; 4] {
        [self.life, self.energy, self.score, self.level]
    }
}

/// Mood category driving which music is played.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoodCategory {
    /// α
    Sad,
    /// β
    Happy,
    /// γ
    Normal,
    /// φ
    Angry,
}

impl MoodCategory {
    pub const ALL: [MoodCategory; 4] = [
        MoodCategory::Sad,
        MoodCategory::Happy,
        MoodCategory::Normal,
        MoodCategory::Angry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoodCategory::Sad => "sad",
            MoodCategory::Happy => "happy",
            MoodCategory::Normal => "normal",
            MoodCategory::Angry => "angry",
        }
    }

    pub fn symbol(self) -> char {
        match self {
            MoodCategory::Sad => 'α',
            MoodCategory::Happy => 'β',
            MoodCategory::Normal => 'γ',
            MoodCategory::Angry => 'φ',
        }
    }
}

impl fmt::Display for MoodCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoodCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sad" => Ok(MoodCategory::Sad),
            "happy" => Ok(MoodCategory::Happy),
            "normal" => Ok(MoodCategory::Normal),
            "angry" | "anger" => Ok(MoodCategory::Angry),
            other => Err(Error::InvalidArgument(format!("unknown mood {other:?}"))),
        }
    }
}

/// Per-attribute multiplicative factors mapping normalized telemetry into the
/// threshold domain of the rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct ScalingProfile {
    life: f64,
    energy: f64,
    score: f64,
    level: f64,
}

#[derive(Deserialize)]
struct RawProfile {
    life: f64,
    energy: f64,
    score: f64,
    level: f64,
}

impl TryFrom<RawProfile> for ScalingProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        ScalingProfile::new(raw.life, raw.energy, raw.score, raw.level)
    }
}

impl ScalingProfile {
    pub const IDENTITY: ScalingProfile = ScalingProfile {
        life: 1.0,
        energy: 1.0,
        score: 1.0,
        level: 1.0,
    };

    /// Profile under which the shipped labeled datasets reproduce their labels.
    pub const DEFAULT: ScalingProfile = ScalingProfile {
        life: 500.0,
        energy: 1000.0,
        score: 1000.0,
        level: 1000.0,
    };

    pub fn new(life: f64, energy: f64, score: f64, level: f64) -> Result<Self> {
        for (attr, k) in Attribute::ALL.iter().zip([life, energy, score, level]) {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::InvalidProfile(format!(
                    "factor for {attr} must be positive and finite, got {k}"
                )));
            }
        }
        Ok(Self {
            life,
            energy,
            score,
            level,
        })
    }

    pub fn factor(&self, attr: Attribute) -> f64 {
        match attr {
            Attribute::Life => self.life,
            Attribute::Energy => self.energy,
            Attribute::Score => self.score,
            Attribute::Level => self.level,
        }
    }

    pub fn factors(&self) -> [f64; 4] {
        [self.life, self.energy, self.score, self.level]
    }
}

impl Default for ScalingProfile {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for ScalingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.life, self.energy, self.score, self.level
        )
    }
}

impl FromStr for ScalingProfile {
    type Err = Error;

    /// Parses `k_life,k_energy,k_score,k_level`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::InvalidProfile(format!(
                "expected 4 comma-separated factors, got {}",
                parts.len()
            )));
        }
        let mut k = [0.0; 4];
        for (slot, part) in k.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::InvalidProfile(format!("not a number: {part:?}")))?;
        }
        ScalingProfile::new(k[0], k[1], k[2], k[3])
    }
}

pub const SIGNATURE_LEN: usize = 6;

/// Six synthesis parameters attached to a mood. Downstream they are read as
/// per-segment peak amplitudes of a six-segment loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoodSignature {
    mood: MoodCategory,
    values: [f64; SIGNATURE_LEN],
}

impl MoodSignature {
    pub fn new(mood: MoodCategory, values: [f64; SIGNATURE_LEN]) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidSignature(format!(
                "{mood} signature value {v} outside [0, 1]"
            )));
        }
        Ok(Self { mood, values })
    }

    /// Builds from a slice, checking the length.
    pub fn from_slice(mood: MoodCategory, values: &[f64]) -> Result<Self> {
        let values: [f64; SIGNATURE_LEN] = values.try_into().map_err(|_| {
            Error::InvalidSignature(format!(
                "{mood} signature needs {SIGNATURE_LEN} values, got {}",
                values.len()
            ))
        })?;
        Self::new(mood, values)
    }

    pub fn mood(&self) -> MoodCategory {
        self.mood
    }

    pub fn values(&self) -> &[f64; SIGNATURE_LEN] {
        &self.values
    }
}

const NORMAL_VALUES: [f64; 6] = [0.1100, 0.1110, 0.1140, 0.1090, 0.0970, 0.1080];
const ANGRY_VALUES: [f64; 6] = [0.0970, 0.1100, 0.1030, 0.1010, 0.1140, 0.0320];
const HAPPY_VALUES: [f64; 6] = [0.1040, 0.0970, 0.1120, 0.1120, 0.1210, 0.0320];
const SAD_VALUES: [f64; 6] = [0.1150, 0.0970, 0.1000, 0.0320, 0.0320, 0.0320];

/// The published mood value vectors, one per category.
pub fn default_signatures() -> BTreeMap<MoodCategory, MoodSignature> {
    [
        (MoodCategory::Sad, SAD_VALUES),
        (MoodCategory::Happy, HAPPY_VALUES),
        (MoodCategory::Normal, NORMAL_VALUES),
        (MoodCategory::Angry, ANGRY_VALUES),
    ]
    .into_iter()
    .map(|(mood, values)| (mood, MoodSignature { mood, values }))
    .collect()
}
