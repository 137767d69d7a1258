//! Ordered first-match threshold rules.
//!
//! A [`RuleSet`] is a list of conjunctive rules tried in order, plus a
//! fallback mood for states no rule accepts. Thresholds live in the scaled
//! domain: telemetry is multiplied by a [`ScalingProfile`] before comparison.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Attribute, GameState, MoodCategory, ScalingProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "le")]
    LessEq,
    #[serde(rename = "lt")]
    Less,
    #[serde(rename = "ge")]
    GreaterEq,
    #[serde(rename = "gt")]
    Greater,
}

impl Comparator {
    pub fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Comparator::LessEq => value <= bound,
            Comparator::Less => value < bound,
            Comparator::GreaterEq => value >= bound,
            Comparator::Greater => value > bound,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::LessEq => "<=",
            Comparator::Less => "<",
            Comparator::GreaterEq => ">=",
            Comparator::Greater => ">",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdClause {
    pub attr: Attribute,
    pub cmp: Comparator,
    pub bound: f64,
}

impl ThresholdClause {
    pub fn new(attr: Attribute, cmp: Comparator, bound: f64) -> Self {
        Self { attr, cmp, bound }
    }
}

impl fmt::Display for ThresholdClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.attr, self.cmp.symbol(), self.bound)
    }
}

/// A conjunction of clauses that selects `mood` when all of them hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub mood: MoodCategory,
    pub clauses: Vec<ThresholdClause>,
}

impl Rule {
    fn accepts(&self, scaled: &[f64; 4]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.cmp.holds(scaled[c.attr as usize], c.bound))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub fallback: MoodCategory,
}

/// On-disk rule-set document: the rules plus an optional scaling profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSetFile {
    #[serde(flatten)]
    pub ruleset: RuleSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<ScalingProfile>,
}

impl RuleSetFile {
    /// Parses and validates a rule-set document. Error-level diagnostics
    /// reject the file.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: RuleSetFile = serde_json::from_str(text)?;
        let errors: Vec<String> = validate_ruleset(&file.ruleset)
            .into_iter()
            .filter(|d| d.severity == Severity::Error)
            .map(|d| d.to_string())
            .collect();
        if !errors.is_empty() {
            return Err(Error::InvalidRuleSet(errors.join("; ")));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// The four-branch mood criteria: sad, happy, normal, else angry.
pub fn default_ruleset() -> RuleSet {
    use Attribute::*;
    use Comparator::*;
    let rule = |mood, spec: [(Attribute, Comparator, f64); 4]| Rule {
        mood,
        clauses: spec
            .into_iter()
            .map(|(attr, cmp, bound)| ThresholdClause { attr, cmp, bound })
            .collect(),
    };
    RuleSet {
        rules: vec![
            rule(
                MoodCategory::Sad,
                [
                    (Life, LessEq, 1.0),
                    (Energy, LessEq, 20.0),
                    (Score, Less, 2000.0),
                    (Level, LessEq, 2.0),
                ],
            ),
            rule(
                MoodCategory::Happy,
                [
                    (Life, GreaterEq, 4.0),
                    (Energy, GreaterEq, 80.0),
                    (Score, Less, 8000.0),
                    (Level, GreaterEq, 8.0),
                ],
            ),
            rule(
                MoodCategory::Normal,
                [
                    (Life, LessEq, 3.0),
                    (Energy, LessEq, 50.0),
                    (Score, Less, 5000.0),
                    (Level, Less, 6.0),
                ],
            ),
        ],
        fallback: MoodCategory::Angry,
    }
}

/// Multiplies each attribute by its factor.
pub fn scale_state(state: &GameState, profile: &ScalingProfile) -> Result<GameState> {
    let mut out = [0.0; 4];
    for attr in Attribute::ALL {
        let value = state.get(attr);
        let factor = profile.factor(attr);
        let scaled = value * factor;
        if !scaled.is_finite() {
            return Err(Error::ScaleOverflow {
                attribute: attr.name(),
                value,
                factor,
            });
        }
        out[attr as usize] = scaled;
    }
    GameState::new(out[0], out[1], out[2], out[3])
}

/// Classifies a state: the mood of the first rule whose clauses all hold on
/// the scaled state, or the fallback.
pub fn evaluate(state: &GameState, ruleset: &RuleSet, profile: &ScalingProfile) -> MoodCategory {
    // Overflow to +inf still compares consistently, so no error path here.
    let scaled = Attribute::ALL.map(|a| state.get(a) * profile.factor(a));
    ruleset
        .rules
        .iter()
        .find(|rule| rule.accepts(&scaled))
        .map_or(ruleset.fallback, |rule| rule.mood)
}

/// Reference classifier written as a plain nested loop, sharing no code with
/// [`evaluate`]. Used to cross-check it.
pub fn evaluate_naive(
    state: &GameState,
    ruleset: &RuleSet,
    profile: &ScalingProfile,
) -> MoodCategory {
    let life = state.life() * profile.factor(Attribute::Life);
    let energy = state.energy() * profile.factor(Attribute::Energy);
    let score = state.score() * profile.factor(Attribute::Score);
    let level = state.level() * profile.factor(Attribute::Level);

    let mut r = 0;
    while r < ruleset.rules.len() {
        let rule = &ruleset.rules[r];
        let mut all_hold = true;
        let mut c = 0;
        while c < rule.clauses.len() {
            let clause = &rule.clauses[c];
            let x = match clause.attr {
                Attribute::Life => life,
                Attribute::Energy => energy,
                Attribute::Score => score,
                Attribute::Level => level,
            };
            let ok = match clause.cmp {
                Comparator::LessEq => x <= clause.bound,
                Comparator::Less => x < clause.bound,
                Comparator::GreaterEq => x >= clause.bound,
                Comparator::Greater => x > clause.bound,
            };
            if !ok {
                all_hold = false;
                break;
            }
            c += 1;
        }
        if all_hold {
            return rule.mood;
        }
        r += 1;
    }
    ruleset.fallback
}

/// Candidate factors per attribute for [`calibrate_scaling`].
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationGrid {
    pub life: Vec<f64>,
    pub energy: Vec<f64>,
    pub score: Vec<f64>,
    pub level: Vec<f64>,
}

impl CalibrationGrid {
    /// Same candidate list for every attribute.
    pub fn uniform(values: &[f64]) -> Self {
        Self {
            life: values.to_vec(),
            energy: values.to_vec(),
            score: values.to_vec(),
            level: values.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.life.len() * self.energy.len() * self.score.len() * self.level.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every profile in the cross product, life-major.
    pub fn profiles(&self) -> Result<Vec<ScalingProfile>> {
        let mut out = Vec::with_capacity(self.len());
        for &l in &self.life {
            for &e in &self.energy {
                for &s in &self.score {
                    for &v in &self.level {
                        out.push(ScalingProfile::new(l, e, s, v)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Default for CalibrationGrid {
    fn default() -> Self {
        Self::uniform(&[250.0, 500.0, 750.0, 1000.0, 1250.0])
    }
}

/// Returns every grid profile under which `evaluate` reproduces all labels.
/// An empty result means no profile in the grid is consistent.
pub fn calibrate_scaling(
    rows: &[(GameState, MoodCategory)],
    ruleset: &RuleSet,
    grid: &CalibrationGrid,
) -> Result<Vec<ScalingProfile>> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument(
            "calibration needs at least one labeled row".into(),
        ));
    }
    if grid.is_empty() {
        return Err(Error::InvalidArgument(
            "calibration grid has an empty axis".into(),
        ));
    }
    Ok(grid
        .profiles()?
        .into_iter()
        .filter(|p| {
            rows.iter()
                .all(|(s, label)| evaluate(s, ruleset, p) == *label)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Info,
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match self.rule {
            Some(i) => write!(f, "{level}: rule {i}: {}", self.message),
            None => write!(f, "{level}: {}", self.message),
        }
    }
}

/// One attribute's admissible range in the scaled domain.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Interval {
    lo: f64,
    lo_closed: bool,
    hi: f64,
    hi_closed: bool,
}

impl Interval {
    const DOMAIN: Interval = Interval {
        lo: 0.0,
        lo_closed: true,
        hi: f64::INFINITY,
        hi_closed: false,
    };

    fn restrict(&mut self, cmp: Comparator, bound: f64) {
        match cmp {
            Comparator::LessEq | Comparator::Less => {
                let closed = cmp == Comparator::LessEq;
                if bound < self.hi {
                    self.hi = bound;
                    self.hi_closed = closed;
                } else if bound == self.hi {
                    self.hi_closed &= closed;
                }
            }
            Comparator::GreaterEq | Comparator::Greater => {
                let closed = cmp == Comparator::GreaterEq;
                if bound > self.lo {
                    self.lo = bound;
                    self.lo_closed = closed;
                } else if bound == self.lo {
                    self.lo_closed &= closed;
                }
            }
        }
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    /// `other ⊆ self`, for non-empty `other`.
    fn contains(&self, other: &Interval) -> bool {
        let lower =
            self.lo < other.lo || (self.lo == other.lo && (self.lo_closed || !other.lo_closed));
        let upper =
            self.hi > other.hi || (self.hi == other.hi && (self.hi_closed || !other.hi_closed));
        lower && upper
    }
}

type Region = [Interval; 4];

fn region(rule: &Rule) -> Region {
    let mut r = [Interval::DOMAIN; 4];
    for c in &rule.clauses {
        r[c.attr as usize].restrict(c.cmp, c.bound);
    }
    r
}

fn region_is_empty(r: &Region) -> bool {
    r.iter().any(Interval::is_empty)
}

fn region_contains(outer: &Region, inner: &Region) -> bool {
    region_is_empty(inner) || outer.iter().zip(inner).all(|(o, i)| o.contains(i))
}

/// Static checks on a rule set. Containment is decided per attribute on the
/// box each rule describes, so it is exact for conjunctive threshold rules.
pub fn validate_ruleset(ruleset: &RuleSet) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |severity, rule, message: String| {
        out.push(Diagnostic {
            severity,
            rule,
            message,
        })
    };

    if ruleset.rules.is_empty() {
        push(
            Severity::Info,
            None,
            format!(
                "fallback-only rule set: every state maps to {}",
                ruleset.fallback
            ),
        );
        return out;
    }

    let mut analysable = vec![true; ruleset.rules.len()];
    for (i, rule) in ruleset.rules.iter().enumerate() {
        if rule.clauses.is_empty() {
            push(
                Severity::Error,
                Some(i),
                format!("{} rule has no clauses", rule.mood),
            );
        }
        for c in rule.clauses.iter().filter(|c| !c.bound.is_finite()) {
            push(
                Severity::Error,
                Some(i),
                format!(
                    "non-finite bound in clause {} {} {}",
                    c.attr,
                    c.cmp.symbol(),
                    c.bound
                ),
            );
            analysable[i] = false;
        }
    }

    for (i, rule) in ruleset.rules.iter().enumerate() {
        if let Some(j) = ruleset.rules[..i].iter().position(|r| r.mood == rule.mood) {
            push(
                Severity::Warning,
                Some(i),
                format!("duplicate mood {} (also rule {j})", rule.mood),
            );
        }
    }

    let regions: Vec<Region> = ruleset.rules.iter().map(region).collect();
    for (j, rj) in regions.iter().enumerate() {
        if !analysable[j] {
            continue;
        }
        if region_is_empty(rj) {
            push(
                Severity::Warning,
                Some(j),
                format!(
                    "{} rule can never match: its clauses are contradictory",
                    ruleset.rules[j].mood
                ),
            );
            continue;
        }
        for (i, ri) in regions[..j].iter().enumerate() {
            if !analysable[i] || region_is_empty(ri) {
                continue;
            }
            if region_contains(ri, rj) {
                push(
                    Severity::Warning,
                    Some(j),
                    format!(
                        "{} rule is unreachable: its region lies inside earlier rule {i} ({})",
                        ruleset.rules[j].mood, ruleset.rules[i].mood
                    ),
                );
            } else if region_contains(rj, ri) {
                push(
                    Severity::Info,
                    Some(i),
                    format!(
                        "{} region is a subset of later rule {j} ({}); ordering is significant",
                        ruleset.rules[i].mood, ruleset.rules[j].mood
                    ),
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::MOOD_RULES_JSON;

    fn st(l: f64, e: f64, s: f64, v: f64) -> GameState {
        GameState::new(l, e, s, v).unwrap()
    }

    #[test]
    fn default_ruleset_shape() {
        let rs = default_ruleset();
        assert_eq!(rs.rules.len(), 3);
        assert_eq!(rs.fallback, MoodCategory::Angry);
        assert_eq!(rs.rules[0].mood, MoodCategory::Sad);
        assert_eq!(rs.rules[1].mood, MoodCategory::Happy);
        let normal_score = rs.rules[2]
            .clauses
            .iter()
            .find(|c| c.attr == Attribute::Score)
            .unwrap();
        assert_eq!(normal_score.cmp, Comparator::Less);
        assert_eq!(normal_score.bound, 5000.0);
    }

    #[test]
    fn shipped_file_matches_embedded_defaults() {
        let file = RuleSetFile::from_json(MOOD_RULES_JSON).unwrap();
        assert_eq!(file.ruleset, default_ruleset());
        assert_eq!(file.scaling, Some(ScalingProfile::DEFAULT));
    }

    #[test]
    fn json_round_trip() {
        let file = RuleSetFile {
            ruleset: default_ruleset(),
            scaling: Some(ScalingProfile::DEFAULT),
        };
        let back = RuleSetFile::from_json(&file.to_json().unwrap()).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn json_rejects_empty_clause_rule_and_bad_scaling() {
        let empty = r#"{"rules":[{"mood":"sad","clauses":[]}],"fallback":"angry"}"#;
        assert!(matches!(
            RuleSetFile::from_json(empty),
            Err(Error::InvalidRuleSet(_))
        ));
        let bad = r#"{"rules":[],"fallback":"angry","scaling":{"life":0,"energy":1,"score":1,"level":1}}"#;
        assert!(RuleSetFile::from_json(bad).is_err());
        let unknown = r#"{"rules":[],"fallback":"ecstatic"}"#;
        assert!(RuleSetFile::from_json(unknown).is_err());
    }

    #[test]
    fn scale_state_examples() {
        let s = scale_state(
            &st(0.0036, 0.0342, 3.0929, 0.0055),
            &ScalingProfile::DEFAULT,
        )
        .unwrap();
        let want = [1.8, 34.2, 3092.9, 5.5];
        for (got, want) in s.values().iter().zip(want) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        let x = st(1.5, 2.5, 3.5, 4.5);
        assert_eq!(scale_state(&x, &ScalingProfile::IDENTITY).unwrap(), x);
        let p = ScalingProfile::new(3.0, 7.0, 11.0, 13.0).unwrap();
        assert_eq!(
            scale_state(&GameState::zero(), &p).unwrap(),
            GameState::zero()
        );
    }

    #[test]
    fn scale_state_overflow_is_an_error() {
        let p = ScalingProfile::new(f64::MAX, 1.0, 1.0, 1.0).unwrap();
        let err = scale_state(&st(2.0, 0.0, 0.0, 0.0), &p).unwrap_err();
        assert!(matches!(
            err,
            Error::ScaleOverflow {
                attribute: "life",
                ..
            }
        ));
    }

    #[test]
    fn evaluate_examples() {
        let rs = default_ruleset();
        let d = ScalingProfile::DEFAULT;
        let id = ScalingProfile::IDENTITY;
        let cases = [
            (st(0.0036, 0.0342, 3.0929, 0.0055), d, MoodCategory::Normal),
            (st(0.0034, 0.0503, 1.9343, 0.0070), d, MoodCategory::Angry),
            (GameState::zero(), id, MoodCategory::Sad),
            (st(5.0, 90.0, 7000.0, 9.0), id, MoodCategory::Happy),
        ];
        for (state, profile, want) in cases {
            assert_eq!(evaluate(&state, &rs, &profile), want, "{state:?}");
            assert_eq!(evaluate_naive(&state, &rs, &profile), want, "{state:?}");
        }
    }

    #[test]
    fn boundaries_follow_comparator_strictness() {
        let rs = default_ruleset();
        let id = ScalingProfile::IDENTITY;
        // energy exactly 50 is inside the normal rule
        let at_energy = st(2.0, 50.0, 100.0, 3.0);
        assert_eq!(evaluate(&at_energy, &rs, &id), MoodCategory::Normal);
        assert_eq!(evaluate_naive(&at_energy, &rs, &id), MoodCategory::Normal);
        // score exactly 5000 is outside it
        let at_score = st(2.0, 30.0, 5000.0, 3.0);
        assert_eq!(evaluate(&at_score, &rs, &id), MoodCategory::Angry);
        assert_eq!(evaluate_naive(&at_score, &rs, &id), MoodCategory::Angry);
    }

    #[test]
    fn empty_ruleset_returns_fallback() {
        let rs = RuleSet {
            rules: vec![],
            fallback: MoodCategory::Happy,
        };
        assert_eq!(
            evaluate(&GameState::zero(), &rs, &ScalingProfile::IDENTITY),
            MoodCategory::Happy
        );
        assert_eq!(
            evaluate_naive(&GameState::zero(), &rs, &ScalingProfile::IDENTITY),
            MoodCategory::Happy
        );
    }

    #[test]
    fn calibrate_zero_rows() {
        let rs = default_ruleset();
        let grid = CalibrationGrid::default();
        let none =
            calibrate_scaling(&[(GameState::zero(), MoodCategory::Angry)], &rs, &grid).unwrap();
        assert!(none.is_empty());
        let all = calibrate_scaling(&[(GameState::zero(), MoodCategory::Sad)], &rs, &grid).unwrap();
        assert_eq!(all.len(), 625);
        assert_eq!(all, grid.profiles().unwrap());
    }

    #[test]
    fn calibrate_rejects_empty_inputs() {
        let rs = default_ruleset();
        assert!(calibrate_scaling(&[], &rs, &CalibrationGrid::default()).is_err());
        let mut grid = CalibrationGrid::default();
        grid.level.clear();
        assert!(calibrate_scaling(&[(GameState::zero(), MoodCategory::Sad)], &rs, &grid).is_err());
    }

    #[test]
    fn validate_default_ruleset() {
        let diags = validate_ruleset(&default_ruleset());
        assert!(
            diags.iter().all(|d| d.severity == Severity::Info),
            "{diags:?}"
        );
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].rule, Some(0));
        assert!(diags[0].message.contains("subset of later rule 2"));
    }

    #[test]
    fn validate_flags_non_finite_and_empty() {
        let mut rs = default_ruleset();
        rs.rules[1].clauses[0].bound = f64::NAN;
        rs.rules.push(Rule {
            mood: MoodCategory::Angry,
            clauses: vec![],
        });
        let diags = validate_ruleset(&rs);
        let errors: Vec<_> = diags
            .iter()
            .filter(|d| d.severity == Severity::Error)
            .collect();
        assert_eq!(errors.len(), 2, "{diags:?}");
        assert!(errors
            .iter()
            .any(|d| d.rule == Some(1) && d.message.contains("non-finite")));
        assert!(errors
            .iter()
            .any(|d| d.rule == Some(3) && d.message.contains("no clauses")));
    }

    #[test]
    fn validate_fallback_only() {
        let rs = RuleSet {
            rules: vec![],
            fallback: MoodCategory::Angry,
        };
        let diags = validate_ruleset(&rs);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Info);
        assert!(diags[0].message.contains("fallback-only"));
    }

    #[test]
    fn validate_unreachable_duplicate_and_contradictory() {
        let mut rs = default_ruleset();
        // Normal before Sad: Sad becomes unreachable.
        rs.rules.swap(0, 2);
        rs.rules.push(Rule {
            mood: MoodCategory::Happy,
            clauses: vec![
                ThresholdClause::new(Attribute::Life, Comparator::Greater, 5.0),
                ThresholdClause::new(Attribute::Life, Comparator::Less, 5.0),
            ],
        });
        let diags = validate_ruleset(&rs);
        assert!(diags
            .iter()
            .any(|d| d.rule == Some(2) && d.message.contains("unreachable")));
        assert!(diags
            .iter()
            .any(|d| d.rule == Some(3) && d.message.contains("duplicate mood happy")));
        assert!(diags
            .iter()
            .any(|d| d.rule == Some(3) && d.message.contains("never match")));
        assert!(diags.iter().all(|d| d.severity != Severity::Error));
    }

    #[test]
    fn interval_boundary_strictness() {
        let mut open = Interval::DOMAIN;
        open.restrict(Comparator::Less, 5.0);
        let mut closed = Interval::DOMAIN;
        closed.restrict(Comparator::LessEq, 5.0);
        assert!(closed.contains(&open));
        assert!(!open.contains(&closed));
        let mut point = Interval::DOMAIN;
        point.restrict(Comparator::GreaterEq, 5.0);
        point.restrict(Comparator::LessEq, 5.0);
        assert!(!point.is_empty());
        point.restrict(Comparator::Less, 5.0);
        assert!(point.is_empty());
    }
}
