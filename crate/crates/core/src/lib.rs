//! Condition-driven adaptive music.
//!
//! Game-state telemetry rows (life, energy, score, level) are classified into
//! one of four mood categories by an ordered, first-match set of conjunctive
//! threshold rules. Each mood drives a short procedural tone loop, and a
//! session of classified rows becomes a crossfaded soundtrack.
//!
//! ```
//! use adaptive_music::{evaluate, default_ruleset, GameState, MoodCategory, ScalingProfile};
//!
//! let row = GameState::new(0.0036, 0.0342, 3.0929, 0.0055).unwrap();
//! let mood = evaluate(&row, &default_ruleset(), &ScalingProfile::DEFAULT);
//! assert_eq!(mood, MoodCategory::Normal);
//! ```

pub mod error;
pub mod fixtures;
pub mod model;
pub mod rules;
pub mod session;
pub mod survey;
pub mod synth;

pub use error::{Error, Result};
pub use model::{
    default_signatures, Attribute, GameState, MoodCategory, MoodSignature, ScalingProfile,
};
pub use rules::{
    calibrate_scaling, default_ruleset, evaluate, evaluate_naive, scale_state, validate_ruleset,
    CalibrationGrid, Comparator, Diagnostic, Rule, RuleSet, RuleSetFile, Severity, ThresholdClause,
};
pub use session::{
    generate_dataset, load_csv, render_session, run_session, save_csv, timeline_stats, Dataset,
    MoodTimeline, TimelineStats,
};
pub use survey::{aggregate, SurveyRecord, SurveyReport};
pub use synth::{
    crossfade, generate_random_matrix, number_to_segment, render_mood, write_wav, AudioBuffer,
    RandomMatrix, ToneSegment,
};
