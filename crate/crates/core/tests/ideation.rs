mod common;

use common::{graph, words};
use wordgraph::ideation::{suggest, Decision, IdeationSession, SessionEvent, DEFAULT_MEASURE};
use wordgraph::Error;

const BASE: &[&str] = &["bird", "crayon", "desk", "hand", "paper"];
const CANDIDATES: &[&str] = &["drawing", "sketch", "greeting_card", "origami"];

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 0.01
}

#[test]
fn worked_example_ranking() {
    let g = graph();
    let s = suggest(g, &words(BASE), &words(CANDIDATES), DEFAULT_MEASURE, None, &g.ic_context()).unwrap();
    assert!(near(s.base_average, 0.39), "{}", s.base_average);
    let got: Vec<(&str, f64)> = s.proposals.iter().map(|p| (p.candidate.as_str(), p.average)).collect();
    let want = [("origami", 0.29), ("greeting_card", 0.35), ("sketch", 0.39), ("drawing", 0.40)];
    assert_eq!(got.len(), 4);
    for ((c, v), (wc, wv)) in got.iter().zip(want) {
        assert_eq!(*c, wc);
        assert!(near(*v, wv), "{c}: {v}");
    }
    assert!(s.rejected.is_empty());
    assert!(s.proposals.iter().all(|p| (p.delta - (p.average - s.base_average)).abs() < 1e-15));
}

#[test]
fn suggest_is_deterministic_and_truncates() {
    let g = graph();
    let ctx = g.ic_context();
    let a = suggest(g, &words(BASE), &words(CANDIDATES), DEFAULT_MEASURE, Some(2), &ctx).unwrap();
    let b = suggest(g, &words(BASE), &words(CANDIDATES), DEFAULT_MEASURE, Some(2), &ctx).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.proposals.len(), 2);
}

#[test]
fn unresolvable_base_words_are_all_listed() {
    let g = graph();
    let err = suggest(g, &words(&["bird", "qwxzy", "plorp"]), &[], DEFAULT_MEASURE, None, &g.ic_context()).unwrap_err();
    match err {
        Error::UnresolvedWords(w) => assert_eq!(w, ["qwxzy", "plorp"]),
        e => panic!("{e}"),
    }
}

#[test]
fn bad_candidates_are_screened_not_fatal() {
    let g = graph();
    let cands = words(&["origami", "crayn", "bird", "origami"]);
    let s = suggest(g, &words(BASE), &cands, DEFAULT_MEASURE, None, &g.ic_context()).unwrap();
    assert_eq!(s.proposals.len(), 1);
    let reasons: Vec<&str> = s.rejected.iter().map(|r| r.reason.as_str()).collect();
    assert_eq!(reasons.len(), 3);
    assert!(reasons[0].contains("crayon"), "{reasons:?}");
    assert_eq!(reasons[1], "already in the base set");
    assert_eq!(reasons[2], "duplicate candidate");
}

#[test]
fn base_needs_a_similarity_and_two_words() {
    let g = graph();
    let ctx = g.ic_context();
    assert!(matches!(
        suggest(g, &words(&["bird"]), &[], DEFAULT_MEASURE, None, &ctx),
        Err(Error::TooFewNouns { needed: 2, got: 1 })
    ));
    assert!(matches!(
        suggest(g, &words(BASE), &[], wordgraph::measures::MeasureId::Polysemy, None, &ctx),
        Err(Error::Input(_))
    ));
}

#[test]
fn session_reject_then_accept() {
    let g = graph();
    let ctx = g.ic_context();
    let mut s = IdeationSession::start(g, "s1", &words(BASE), &words(CANDIDATES), DEFAULT_MEASURE, &ctx).unwrap();
    assert!(near(s.average, 0.39));

    let p = s.propose(g, Some(1), &ctx).unwrap();
    assert_eq!(p[0].candidate, "origami");
    assert!(near(p[0].average, 0.29));
    s.decide(g, "origami", Decision::Rejected, &ctx).unwrap();
    assert!(near(s.average, 0.39));
    assert!(matches!(s.decide(g, "origami", Decision::Accepted, &ctx), Err(Error::Session(_))));

    let p = s.propose(g, Some(1), &ctx).unwrap();
    assert_eq!(p[0].candidate, "greeting_card");
    assert!(matches!(s.decide(g, "sketch", Decision::Accepted, &ctx), Err(Error::Session(_))));
    assert!(matches!(s.decide(g, "banana", Decision::Accepted, &ctx), Err(Error::Session(_))));
    let projected = p[0].average;
    let h = s.decide(g, "greeting_card", Decision::Accepted, &ctx).unwrap();
    assert_eq!(h.base_size, 6);
    assert_eq!(h.average.to_bits(), projected.to_bits());
    assert_eq!(s.trajectory.len(), 2);
    assert_eq!(s.pool, ["drawing", "sketch"]);
}

#[test]
fn accepting_origami_realizes_its_projection() {
    let g = graph();
    let ctx = g.ic_context();
    let mut s = IdeationSession::start(g, "s2", &words(BASE), &words(CANDIDATES), DEFAULT_MEASURE, &ctx).unwrap();
    s.propose(g, Some(1), &ctx).unwrap();
    s.decide(g, "origami", Decision::Accepted, &ctx).unwrap();
    assert_eq!(s.base.len(), 6);
    assert!(near(s.average, 0.29));
}

#[test]
fn replay_rebuilds_the_same_session() {
    let g = graph();
    let ctx = g.ic_context();
    let events = vec![
        SessionEvent::Started { id: "r".into(), base: words(BASE), candidates: words(CANDIDATES), measure: DEFAULT_MEASURE },
        SessionEvent::Proposed { k: Some(2) },
        SessionEvent::Decided { candidate: "origami".into(), decision: Decision::Rejected },
        SessionEvent::Decided { candidate: "greeting_card".into(), decision: Decision::Accepted },
    ];
    let log: String = events.iter().map(|e| serde_json::to_string(e).unwrap() + "\n").collect();
    let parsed: Vec<SessionEvent> = log.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(parsed, events);
    let a = IdeationSession::replay(g, &parsed, &ctx).unwrap();
    let b = IdeationSession::replay(g, &events, &ctx).unwrap();
    assert_eq!(serde_json::to_value(&a).unwrap(), serde_json::to_value(&b).unwrap());
    assert_eq!(a.history.len(), 2);
    assert!(IdeationSession::replay(g, &events[1..], &ctx).is_err());
}
