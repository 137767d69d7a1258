//! Data shipped with the crate: the three labeled telemetry datasets, the
//! user survey table and the default rule-set file.

pub const SESSION1_CSV: &str = include_str!("../fixtures/session1.csv");
pub const SESSION2_CSV: &str = include_str!("../fixtures/session2.csv");
pub const SESSION3_CSV: &str = include_str!("../fixtures/session3.csv");
pub const SURVEY_CSV: &str = include_str!("../fixtures/survey.csv");
pub const MOOD_RULES_JSON: &str = include_str!("../fixtures/mood_rules.json");

/// Looks up an embedded fixture by file name.
pub fn by_name(name: &str) -> Option<&'static str> {
    match name {
        "session1.csv" => Some(SESSION1_CSV),
        "session2.csv" => Some(SESSION2_CSV),
        "session3.csv" => Some(SESSION3_CSV),
        "survey.csv" => Some(SURVEY_CSV),
        "mood_rules.json" => Some(MOOD_RULES_JSON),
        _ => None,
    }
}

/// The three labeled datasets in order.
pub fn labeled_datasets() -> [&'static str; 3] {
    [SESSION1_CSV, SESSION2_CSV, SESSION3_CSV]
}
