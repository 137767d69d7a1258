//! Listener survey aggregation: adaptive versus static music ratings.

use std::fmt::{self, Write as _};
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gender {
    M,
    F,
}

impl FromStr for Gender {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "M" | "m" => Ok(Gender::M),
            "F" | "f" => Ok(Gender::F),
            other => Err(Error::InvalidArgument(format!(
                "gender must be M or F, got {other:?}"
            ))),
        }
    }
}

/// 1 = dislike, 2 = normal, 3 = like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Rating {
    Dislike = 1,
    Normal = 2,
    Like = 3,
}

impl TryFrom<u8> for Rating {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Rating::Dislike),
            2 => Ok(Rating::Normal),
            3 => Ok(Rating::Like),
            other => Err(Error::InvalidArgument(format!(
                "rating must be 1, 2 or 3, got {other}"
            ))),
        }
    }
}

impl From<Rating> for u8 {
    fn from(r: Rating) -> u8 {
        r as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub subject: u32,
    pub age: u32,
    pub gender: Gender,
    pub profession: String,
    #[serde(rename = "adaptive")]
    pub adaptive_rating: Rating,
    #[serde(rename = "static")]
    pub static_rating: Rating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RatingSummary {
    pub dislike: usize,
    pub normal: usize,
    pub like: usize,
    pub like_pct: u32,
}

impl RatingSummary {
    fn from_ratings(ratings: impl Iterator<Item = Rating>) -> Self {
        let mut s = RatingSummary::default();
        for r in ratings {
            match r {
                Rating::Dislike => s.dislike += 1,
                Rating::Normal => s.normal += 1,
                Rating::Like => s.like += 1,
            }
        }
        s.like_pct = percent_half_up(s.like, s.total());
        s
    }

    pub fn total(&self) -> usize {
        self.dislike + self.normal + self.like
    }
}

/// `round(100 * part / total)` with halves rounded up, in exact integer math.
fn percent_half_up(part: usize, total: usize) -> u32 {
    ((200 * part + total) / (2 * total)) as u32
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub adaptive: RatingSummary,
    #[serde(rename = "static")]
    pub static_music: RatingSummary,
}

impl SurveyReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for SurveyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>7} {:>7} {:>5} {:>6}",
            "approach", "dislike", "normal", "like", "like%"
        )?;
        for (name, s) in [("adaptive", &self.adaptive), ("static", &self.static_music)] {
            writeln!(
                f,
                "{:<10} {:>7} {:>7} {:>5} {:>5}%",
                name, s.dislike, s.normal, s.like, s.like_pct
            )?;
        }
        Ok(())
    }
}

pub fn aggregate(records: &[SurveyRecord]) -> Result<SurveyReport> {
    if records.is_empty() {
        return Err(Error::InvalidArgument(
            "no survey records to aggregate".into(),
        ));
    }
    Ok(SurveyReport {
        adaptive: RatingSummary::from_ratings(records.iter().map(|r| r.adaptive_rating)),
        static_music: RatingSummary::from_ratings(records.iter().map(|r| r.static_rating)),
    })
}

/// Reads `subject,age,gender,profession,adaptive,static` CSV.
pub fn load_survey_csv(source: impl Read) -> Result<Vec<SurveyRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(source);
    let headers = reader.headers().map_err(|e| Error::Parse {
        line: 1,
        column: "header".into(),
        message: e.to_string(),
    })?;
    let expected = [
        "subject",
        "age",
        "gender",
        "profession",
        "adaptive",
        "static",
    ];
    if !headers.iter().eq(expected) {
        return Err(Error::Parse {
            line: 1,
            column: "header".into(),
            message: format!("expected `{}`", expected.join(",")),
        });
    }
    let mut out = Vec::new();
    for result in reader.deserialize::<SurveyRecord>() {
        let record = result.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            column: "-".into(),
            message: e.to_string(),
        })?;
        out.push(record);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 2,
            column: "-".into(),
            message: "survey has no records".into(),
        });
    }
    Ok(out)
}

/// Plain-text listing of the records followed by the aggregate table.
pub fn render_report(records: &[SurveyRecord], report: &SurveyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>7} {:>4} {:>6} {:<14} {:>8} {:>6}",
        "subject", "age", "gender", "profession", "adaptive", "static"
    );
    for r in records {
        let gender = match r.gender {
            Gender::M => "M",
            Gender::F => "F",
        };
        let _ = writeln!(
            s,
            "{:>7} {:>4} {:>6} {:<14} {:>8} {:>6}",
            r.subject, r.age, gender, r.profession, r.adaptive_rating as u8, r.static_rating as u8
        );
    }
    s.push('\n');
    let _ = write!(s, "{report}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::SURVEY_CSV;

    #[test]
    fn survey_fixture_aggregation() {
        let records = load_survey_csv(SURVEY_CSV.as_bytes()).unwrap();
        assert_eq!(records.len(), 7);
        assert_eq!(records[1].profession, "Business Man");
        let report = aggregate(&records).unwrap();
        assert_eq!(
            report.adaptive,
            RatingSummary {
                dislike: 1,
                normal: 1,
                like: 5,
                like_pct: 71
            }
        );
        assert_eq!(
            report.static_music,
            RatingSummary {
                dislike: 4,
                normal: 2,
                like: 1,
                like_pct: 14
            }
        );
    }

    #[test]
    fn single_like_record() {
        let r = SurveyRecord {
            subject: 1,
            age: 30,
            gender: Gender::F,
            profession: "Tester".into(),
            adaptive_rating: Rating::Like,
            static_rating: Rating::Like,
        };
        let report = aggregate(&[r]).unwrap();
        assert_eq!(report.adaptive.like_pct, 100);
        assert_eq!(report.static_music.like_pct, 100);
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(percent_half_up(5, 7), 71);
        assert_eq!(percent_half_up(1, 8), 13); // 12.5
        assert_eq!(percent_half_up(1, 200), 1); // 0.5
        assert_eq!(percent_half_up(1, 3), 33);
        assert_eq!(percent_half_up(2, 3), 67);
        assert_eq!(percent_half_up(0, 3), 0);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(aggregate(&[]).is_err());
        assert!(
            load_survey_csv("subject,age,gender,profession,adaptive,static\n".as_bytes()).is_err()
        );
        assert!(load_survey_csv("".as_bytes()).is_err());
    }

    #[test]
    fn bad_rows_rejected() {
        let bad_rating = "subject,age,gender,profession,adaptive,static\n1,20,M,X,4,1\n";
        assert!(load_survey_csv(bad_rating.as_bytes()).is_err());
        let bad_gender = "subject,age,gender,profession,adaptive,static\n1,20,Q,X,3,1\n";
        assert!(load_survey_csv(bad_gender.as_bytes()).is_err());
        let bad_header = "subject,age,sex,profession,adaptive,static\n1,20,M,X,3,1\n";
        assert!(load_survey_csv(bad_header.as_bytes()).is_err());
    }

    #[test]
    fn json_shape() {
        let records = load_survey_csv(SURVEY_CSV.as_bytes()).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&aggregate(&records).unwrap().to_json().unwrap()).unwrap();
        assert_eq!(v["adaptive"]["like_pct"], 71);
        assert_eq!(v["static"]["dislike"], 4);
        assert_eq!(v["static"]["like_pct"], 14);
    }

    #[test]
    fn text_report_lists_records() {
        let records = load_survey_csv(SURVEY_CSV.as_bytes()).unwrap();
        let text = render_report(&records, &aggregate(&records).unwrap());
        assert!(text.contains("Journalist"));
        assert!(text.contains("71%"));
    }
}
