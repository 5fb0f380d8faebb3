mod common;

use common::{fixture_dir, graph};
use wordgraph::dynamics::{GroupingFile, Scheme};
use wordgraph::measures::parse_measure_list;
use wordgraph::report::{analyze, Document, RunConfig};

fn corpus() -> (Vec<Document>, GroupingFile) {
    let dir = fixture_dir("corpus");
    let docs = ["s1-a", "s1-b", "s2-a", "short"]
        .iter()
        .map(|id| Document { id: id.to_string(), text: std::fs::read_to_string(dir.join(format!("{id}.txt"))).unwrap() })
        .collect();
    let grouping = serde_json::from_str(&std::fs::read_to_string(dir.join("grouping.json")).unwrap()).unwrap();
    (docs, grouping)
}

fn config(scheme: Scheme, t: usize) -> RunConfig {
    RunConfig {
        measures: parse_measure_list("lin:sanchez-batet,wu-palmer,ic:seco,polysemy").unwrap(),
        scheme,
        t,
        ..RunConfig::default()
    }
}

#[test]
fn report_is_byte_identical_across_runs() {
    let g = graph();
    let (docs, grouping) = corpus();
    let cfg = config(Scheme::Conversation, 3);
    let a = analyze(g, &docs, Some(&grouping), &cfg).unwrap();
    let mut shuffled = docs.clone();
    shuffled.reverse();
    let b = analyze(g, &shuffled, Some(&grouping), &cfg).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
    let v: serde_json::Value = serde_json::from_str(&a.to_json().unwrap()).unwrap();
    assert_eq!(v["toolkit"], "wordgraph");
    assert_eq!(v["config"]["t"], 3);
    assert_eq!(v["config"]["measures"][0], "lin:sanchez-batet");
    assert_eq!(v["constants"]["max_vertices"], 82192);
}

#[test]
fn short_conversation_is_rejected_with_the_minimum() {
    let g = graph();
    let (docs, grouping) = corpus();
    let r = analyze(g, &docs, Some(&grouping), &config(Scheme::Conversation, 3)).unwrap();
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].id, "short");
    assert!(r.failures[0].reason.contains("minimum 15 nouns"), "{}", r.failures[0].reason);
    assert_eq!(r.conversations.len(), 3);
    for c in &r.conversations {
        assert!((0.05..=0.5).contains(&c.noun_ratio), "{}: {}", c.id, c.noun_ratio);
    }
    assert!(r.render_summary().contains("failed  short"));
}

#[test]
fn feedback_scheme_with_six_points() {
    let g = graph();
    let (docs, grouping) = corpus();
    let r = analyze(g, &docs[..3], Some(&grouping), &config(Scheme::Feedback, 6)).unwrap();
    let subjects: Vec<(&str, &str)> = r.comparison.units.iter().map(|u| (u.subject.as_str(), u.group.as_str())).collect();
    assert!(subjects.contains(&("S1", "before-feedback")), "{subjects:?} {:?}", r.comparison.skipped);
    for u in &r.comparison.units {
        assert_eq!(u.series.points.len(), 3);
        assert_eq!(u.trend.trends.len(), 5);
    }
}

#[test]
fn grouping_schemes_need_a_grouping_file() {
    let g = graph();
    let (docs, _) = corpus();
    assert!(analyze(g, &docs, None, &config(Scheme::Success, 3)).is_err());
    let r = analyze(g, &docs, None, &config(Scheme::Conversation, 3)).unwrap();
    assert_eq!(r.comparison.units.len(), 3);
}

#[test]
fn run_config_round_trips() {
    let cfg = config(Scheme::EvaluationSuccess, 6);
    let s = serde_json::to_string(&cfg).unwrap();
    let back: RunConfig = serde_json::from_str(&s).unwrap();
    assert_eq!(back, cfg);
    assert!(serde_json::from_str::<RunConfig>(r#"{"colour":1}"#).is_err());
}
