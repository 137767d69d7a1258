use std::collections::BTreeSet;

use adaptive_music::model::{
    default_signatures, Attribute, GameState, MoodCategory, ScalingProfile,
};
use adaptive_music::rules::{
    default_ruleset, evaluate, evaluate_naive, scale_state, Comparator, Rule, RuleSet,
    ThresholdClause,
};
use adaptive_music::session::{
    load_csv, render_session, run_session, save_csv, Dataset, MoodTimeline,
};
use adaptive_music::survey::{aggregate, Gender, Rating, SurveyRecord};
use adaptive_music::synth::{crossfade, AudioBuffer};
use proptest::prelude::*;

fn state() -> impl Strategy<Value = GameState> {
    (0.0..10.0f64, 0.0..200.0f64, 0.0..12_000.0f64, 0.0..12.0f64)
        .prop_map(|(l, e, s, v)| GameState::new(l, e, s, v).unwrap())
}

fn profile() -> impl Strategy<Value = ScalingProfile> {
    (
        0.01..2000.0f64,
        0.01..2000.0f64,
        0.01..2000.0f64,
        0.01..2000.0f64,
    )
        .prop_map(|(a, b, c, d)| ScalingProfile::new(a, b, c, d).unwrap())
}

fn mood() -> impl Strategy<Value = MoodCategory> {
    prop::sample::select(MoodCategory::ALL.to_vec())
}

fn ruleset() -> impl Strategy<Value = RuleSet> {
    let clause = (
        prop::sample::select(Attribute::ALL.to_vec()),
        prop::sample::select(vec![
            Comparator::LessEq,
            Comparator::Less,
            Comparator::GreaterEq,
            Comparator::Greater,
        ]),
        0.0..100.0f64,
    )
        .prop_map(|(a, c, b)| ThresholdClause::new(a, c, b));
    let rule = (mood(), prop::collection::vec(clause, 1..5))
        .prop_map(|(mood, clauses)| Rule { mood, clauses });
    (prop::collection::vec(rule, 0..5), mood())
        .prop_map(|(rules, fallback)| RuleSet { rules, fallback })
}

fn buffer(len: std::ops::Range<usize>) -> impl Strategy<Value = AudioBuffer> {
    prop::collection::vec(-1.0..=1.0f64, len).prop_map(|s| AudioBuffer::new(8000, s).unwrap())
}

proptest! {
    #[test]
    fn evaluate_agrees_with_naive(s in state(), p in profile(), rs in ruleset()) {
        prop_assert_eq!(evaluate(&s, &rs, &p), evaluate_naive(&s, &rs, &p));
    }

    #[test]
    fn scaling_equivalence(s in state(), p in profile()) {
        let rs = default_ruleset();
        let scaled = scale_state(&s, &p).unwrap();
        prop_assert_eq!(evaluate(&s, &rs, &p), evaluate(&scaled, &rs, &ScalingProfile::IDENTITY));
    }

    #[test]
    fn sad_region_wins_over_normal(
        l in 0.0..=1.0f64, e in 0.0..=20.0f64, s in 0.0..2000.0f64, v in 0.0..=2.0f64
    ) {
        let st = GameState::new(l, e, s, v).unwrap();
        prop_assert_eq!(evaluate(&st, &default_ruleset(), &ScalingProfile::IDENTITY), MoodCategory::Sad);
    }

    #[test]
    fn timeline_transitions_consistent(moods in prop::collection::vec(mood(), 0..60)) {
        let t = MoodTimeline::from_moods(&moods);
        prop_assert_eq!(t.len(), moods.len());
        let expect: Vec<usize> = (1..moods.len()).filter(|&i| moods[i] != moods[i - 1]).collect();
        let got: Vec<usize> = t.transitions().iter().map(|x| x.index).collect();
        prop_assert_eq!(got, expect);
        let run_total: usize = t.runs().iter().map(|r| r.len).sum();
        prop_assert_eq!(run_total, moods.len());
    }

    #[test]
    fn session_timeline_invariant(rows in prop::collection::vec(state(), 1..40)) {
        let d = Dataset::new(rows, None).unwrap();
        let t = run_session(&d, &default_ruleset(), &ScalingProfile::IDENTITY);
        prop_assert_eq!(t.len(), d.len());
        for tr in t.transitions() {
            prop_assert_ne!(t.entries()[tr.index].mood, t.entries()[tr.index - 1].mood);
        }
        let changes = t.entries().windows(2).filter(|w| w[0].mood != w[1].mood).count();
        prop_assert_eq!(changes, t.transitions().len());
    }

    #[test]
    fn render_session_length_formula(
        moods in prop::collection::vec(mood(), 1..8),
        seed in any::<u64>(),
        overlap_ms in 0u32..=60,
    ) {
        let t = MoodTimeline::from_moods(&moods);
        let (seg, sr) = (0.01, 8000);
        let overlap_s = overlap_ms as f64 / 1000.0;
        let buf = render_session(&t, &default_signatures(), seed, seg, overlap_s, sr).unwrap();
        let block = 6 * 80;
        let overlap = (overlap_s * sr as f64).round() as usize;
        let blocks = t.runs().len();
        prop_assert_eq!(buf.len(), blocks * block - t.transitions().len() * overlap);
        prop_assert!(buf.samples().iter().all(|x| (-1.0..=1.0).contains(x)));
    }

    #[test]
    fn crossfade_length_and_range(a in buffer(0..300), b in buffer(0..300), frac in 0.0..=1.0f64) {
        let overlap = (frac * a.len().min(b.len()) as f64) as usize;
        let out = crossfade(&a, &b, overlap).unwrap();
        prop_assert_eq!(out.len(), a.len() + b.len() - overlap);
        prop_assert!(out.samples().iter().all(|x| (-1.0..=1.0).contains(x)));
        prop_assert_eq!(&out.samples()[..a.len() - overlap], &a.samples()[..a.len() - overlap]);
        prop_assert_eq!(&out.samples()[a.len()..], &b.samples()[overlap..]);
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(state(), 1..100), labeled in any::<bool>(), seed in any::<u64>()) {
        let labels = labeled.then(|| {
            (0..rows.len()).map(|i| MoodCategory::ALL[((seed >> (i % 60)) & 3) as usize]).collect()
        });
        let d = Dataset::new(rows, labels).unwrap();
        let mut buf = Vec::new();
        save_csv(&d, &mut buf).unwrap();
        prop_assert_eq!(load_csv(buf.as_slice()).unwrap(), d);
    }

    #[test]
    fn survey_counts_partition_and_ignore_order(
        ratings in prop::collection::vec((1u8..=3, 1u8..=3), 1..40),
        rotate in any::<usize>(),
    ) {
        let records: Vec<SurveyRecord> = ratings
            .iter()
            .enumerate()
            .map(|(i, &(a, s))| SurveyRecord {
                subject: i as u32 + 1,
                age: 30,
                gender: if i % 2 == 0 { Gender::M } else { Gender::F },
                profession: "x".into(),
                adaptive_rating: Rating::try_from(a).unwrap(),
                static_rating: Rating::try_from(s).unwrap(),
            })
            .collect();
        let report = aggregate(&records).unwrap();
        for s in [report.adaptive, report.static_music] {
            prop_assert_eq!(s.total(), records.len());
            prop_assert!(s.like_pct <= 100);
        }
        let mut shuffled = records.clone();
        let k = rotate % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        prop_assert_eq!(aggregate(&shuffled).unwrap(), report);
    }
}

#[test]
fn boundary_states_agree_with_naive() {
    let rs = default_ruleset();
    let bounds: BTreeSet<(usize, u64)> = rs
        .rules
        .iter()
        .flat_map(|r| r.clauses.iter())
        .map(|c| (c.attr as usize, c.bound.to_bits()))
        .collect();
    // one base point inside each rule's region
    let bases = [
        [0.5, 10.0, 1000.0, 1.0],
        [2.0, 40.0, 4000.0, 5.0],
        [5.0, 90.0, 7000.0, 9.0],
    ];
    let mut checked = 0;
    for &(attr, bits) in &bounds {
        for base in bases {
            let mut v = base;
            v[attr] = f64::from_bits(bits);
            let s = GameState::new(v[0], v[1], v[2], v[3]).unwrap();
            assert_eq!(
                evaluate(&s, &rs, &ScalingProfile::IDENTITY),
                evaluate_naive(&s, &rs, &ScalingProfile::IDENTITY),
                "{v:?}"
            );
            checked += 1;
        }
    }
    assert_eq!(bounds.len(), 12);
    assert_eq!(checked, 36);
}
