//! Replays the reference runs end to end through the corpus files.

use std::path::PathBuf;

use adb::analysis::{is_empty, member_timed, member_untimed, Emptiness};
use adb::format::parse_adb;
use adb::oracle::language_sample;
use adb::words::parse_labels;
use adb::{oword, Adb, Run, TimedWord, UntimedWord};

fn load(name: &str) -> Adb {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name);
    parse_adb(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn follow(a: &Adb, labels: &str) -> Run {
    let mut run = Run::new(a.start());
    for l in parse_labels(labels).unwrap() {
        let next = a.successors(run.last(), &l);
        assert_eq!(
            next.len(),
            1,
            "no unique `{l}` step from {}",
            a.name(run.last())
        );
        run.push(l, next[0]);
    }
    run
}

fn tw(s: &str) -> TimedWord {
    s.parse().unwrap()
}

#[test]
fn auv_protocol_run() {
    let a0 = load("a0.adb");
    let run = follow(
        &a0,
        "point/0 yes/0 yes/1 #/0 tick point/0 yes/0 no/1 point/0 may/0 no/1 #/0 tick",
    );
    assert!(a0.is_accepting_run(&run).unwrap());
    let w = tw("point@0 yes@0 #@0 yes@1 point@1 yes@1 point@1 may@1 #@1 no@2 no@2");
    assert_eq!(a0.run_output(&run).unwrap(), w);
    assert!(member_timed(&a0, &w).unwrap());
}

#[test]
fn a1_language() {
    let a1 = load("a1.adb");
    assert_eq!(a1.max_delay(), 2);
    let sample = language_sample(&a1, 9).unwrap();
    let expected: Vec<TimedWord> = [
        "",
        "a@0 b@1 c@2",
        "a@0 a@0 b@1 b@1 c@2 c@2",
        "a@0 a@0 a@0 b@1 b@1 b@1 c@2 c@2 c@2",
    ]
    .iter()
    .map(|s| tw(s))
    .collect();
    assert_eq!(sample.into_iter().collect::<Vec<_>>(), expected);
    let two = follow(&a1, "a/0 b/1 c/2 a/0 b/1 c/2");
    assert_eq!(a1.run_output(&two).unwrap(), expected[2]);
    assert_eq!(is_empty(&a1), Emptiness::NonEmpty(Run::new(a1.start())));
}

#[test]
fn a2_run() {
    let a2 = load("a2.adb");
    let run = follow(
        &a2,
        "a/0 b/1 c/2 a/0 b/1 c/2 tick tick a/0 b/1 c/2 tick tick tick tick a/0 b/1 c/2",
    );
    let w = tw("a@0 a@0 b@1 b@1 c@2 c@2 a@2 b@3 c@4 a@6 b@7 c@8");
    assert_eq!(a2.run_output(&run).unwrap(), w);
    assert!(member_timed(&a2, &w).unwrap());
    assert_eq!(a2.successors(a2.start(), &adb::Label::Tick).len(), 1);
}

#[test]
fn a3_run() {
    let a3 = load("a3.adb");
    let labels = "a/0 c/1 a/0 c/1 b/0 d/2 a/0 c/1 b/0 d/2";
    let run = follow(&a3, labels);
    assert!(a3.is_accepting_run(&run).unwrap());
    let w = tw("a@0 a@0 b@0 a@0 b@0 c@1 c@1 c@1 d@2 d@2");
    assert_eq!(a3.run_output(&run).unwrap(), w);
    assert_eq!(oword(&parse_labels(labels).unwrap()), w);
    assert!(member_timed(&a3, &w).unwrap());
    let u: UntimedWord = "a b c d".parse().unwrap();
    assert!(member_untimed(&a3, &u).unwrap());
}
