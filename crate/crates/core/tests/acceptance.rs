//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jfy_core::branch::BranchEvaluation;
use jfy_core::explain;
use jfy_core::fuzz::{self, FuzzConfig};
use jfy_core::justification::{self, Justification};
use jfy_core::par::{self, Exec};
use jfy_core::program;
use jfy_core::semantics::{self, TruthValue};
use jfy_core::session::{self, Status};
use jfy_core::support;
use jfy_core::{Fact, Frame, Interpretation};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ONE_SECOND: Duration = Duration::from_secs(1);
const FUZZ_PROGRAMS: usize = 500;
const CHECKER_INSTANCES: usize = 1000;
const JUSTIFICATIONS: usize = 500;
const SESSIONS: usize = 200;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

const PATH: &str = "path(X,Y) :- edge(X,Y).\npath(X,Y) :- path(X,Z), path(Z,Y).\n#open edge/2.\n";

/// Edge(a,b) and Edge(b,c) true, the other seven edges false.
fn path_opens() -> String {
    let mut map = BTreeMap::new();
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            map.insert(format!("edge({x},{y})"), matches!((x, y), ("a", "b") | ("b", "c")));
        }
    }
    serde_json::to_string(&map).unwrap()
}

const PATH_DOT: &str = "digraph justification {
  n0 [label=\"path(a,b)\"];
  n1 [label=\"edge(a,b)\"];
  n2 [label=\"path(a,c)\"];
  n3 [label=\"path(b,c)\"];
  n4 [label=\"edge(b,c)\"];
  n0 -> n1;
  n2 -> n0;
  n2 -> n3;
  n3 -> n4;
}
";

fn example_path() -> Verdict {
    let started = Instant::now();
    let opens_json = path_opens();
    let (_, frame) = program::load(PATH, &program::opens_constants(&opens_json).unwrap()).unwrap();
    let opens = program::opens_from_json(&frame, &opens_json).unwrap();
    let fact = |name: &str| frame.symbols().parse_fact(name).unwrap();
    let be = BranchEvaluation::WellFounded;

    let mut problems = Vec::new();
    let expected_nodes: BTreeSet<Fact> = ["path(a,c)", "path(a,b)", "path(b,c)", "edge(a,b)", "edge(b,c)"]
        .map(fact)
        .into();
    let expected_edges: BTreeSet<(Fact, Fact)> = [
        ("path(a,c)", "path(a,b)"),
        ("path(a,c)", "path(b,c)"),
        ("path(a,b)", "edge(a,b)"),
        ("path(b,c)", "edge(b,c)"),
    ]
    .map(|(a, b)| (fact(a), fact(b)))
    .into();

    // the interpretation {Edge(a,b), Edge(b,c)} as given, and the fixpoint
    let given: Interpretation = [fact("edge(a,b)"), fact("edge(b,c)")].into_iter().collect();
    let lfp = semantics::extended_lfp(&frame, be, &semantics::initial(&opens));
    for (label, interp) in [("given", &given), ("fixpoint", &lfp)] {
        match explain::explain(&frame, be, interp, fact("path(a,c)")) {
            Ok(e) => {
                let nodes: BTreeSet<Fact> = e.nodes.iter().copied().collect();
                let edges: BTreeSet<(Fact, Fact)> = e.edges.iter().copied().collect();
                if nodes != expected_nodes || e.nodes.len() != 5 {
                    problems.push(format!("{label}: node set differs"));
                }
                if edges != expected_edges || e.edges.len() != 4 {
                    problems.push(format!("{label}: edge set differs"));
                }
                let dot = explain::export_dot(&e);
                if dot != explain::export_dot(&e) || dot != PATH_DOT {
                    problems.push(format!("{label}: DOT differs:\n{dot}"));
                }
            }
            Err(err) => problems.push(format!("{label}: {err}")),
        }
    }

    let wf = semantics::wf_model(&frame, &opens);
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            let name = format!("path({x},{y})");
            let want = if matches!((x, y), ("a", "b") | ("b", "c") | ("a", "c")) {
                TruthValue::True
            } else {
                TruthValue::False
            };
            let got = wf.value(frame.symbols().get(&name).unwrap());
            if got != want {
                problems.push(format!("wf {name} = {got:?}, expected {want:?}"));
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= ONE_SECOND {
        problems.push(format!("took {elapsed:?}"));
    }
    if problems.is_empty() {
        verdict(true, format!("5 nodes, 4 edges, DOT stable, wf model exact, {elapsed:?}"))
    } else {
        verdict(false, problems.join("; "))
    }
}

fn example_self_negation() -> Verdict {
    let started = Instant::now();
    let (_, frame) = program::load("p :- not p.", &Default::default()).unwrap();
    let p = frame.symbols().parse_fact("p").unwrap();
    let j = Justification::from_rules(&frame, frame.defined().map(|f| frame.rules_for(f)[0]));
    let unique = frame.defined().all(|f| frame.rules_for(f).len() == 1);
    let wf = justification::branch_values(&frame, &j, p, BranchEvaluation::WellFounded).unwrap();
    let st = justification::branch_values(&frame, &j, p, BranchEvaluation::Stable).unwrap();
    let model = semantics::wf_model(&frame, &Default::default());
    let stable = semantics::stable_models(&frame, &Default::default()).unwrap();
    let elapsed = started.elapsed();
    let pass = unique
        && wf == [Fact::UNKNOWN].into()
        && st == [p.negate()].into()
        && model.fact_value(p) == TruthValue::Unknown
        && stable.is_empty()
        && elapsed < ONE_SECOND;
    verdict(
        pass,
        format!(
            "wf values {{{}}}, stable values {{{}}}, wf p = {:?}, {} stable models, {elapsed:?}",
            wf.iter().map(|&f| frame.name(f)).collect::<Vec<_>>().join(","),
            st.iter().map(|&f| frame.name(f)).collect::<Vec<_>>().join(","),
            model.fact_value(p),
            stable.len()
        ),
    )
}

fn fuzz_corpus() -> (Verdict, Verdict) {
    let config = FuzzConfig {
        seed: 2024,
        count: FUZZ_PROGRAMS,
        max_atoms: 6,
        max_rules: 12,
        max_body: 3,
    };
    let started = Instant::now();
    let records = fuzz::fuzz_check(&config, Exec::default());
    let elapsed = started.elapsed();
    let agree = records.iter().filter(|r| r.agree).count();
    let defects: usize = records.iter().map(|r| r.defects.len()).sum();
    let first_mismatch = records
        .iter()
        .find(|r| !r.agree)
        .map(|r| format!("; first mismatch: {}", serde_json::to_string(r).unwrap()))
        .unwrap_or_default();
    let oracle = verdict(
        agree == records.len() && records.len() == 4 * FUZZ_PROGRAMS,
        format!(
            "{agree}/{} (program, semantics) pairs agree over {FUZZ_PROGRAMS} programs, {elapsed:?}{first_mismatch}",
            records.len()
        ),
    );
    let nondefective = verdict(
        defects == 0,
        format!("{defects} defects across {} (program, semantics) runs", records.len()),
    );
    (oracle, nondefective)
}

fn checker_equivalence() -> Verdict {
    let checked = par::map_range(Exec::default(), CHECKER_INSTANCES + CHECKER_INSTANCES / 5, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        let frame = if i % 2 == 0 {
            common::random_frame(&mut rng, 4)
        } else {
            let text = fuzz::random_program(&mut rng, 4, 6, 3);
            program::load(&text, &Default::default()).unwrap().1
        };
        let defined: Vec<Fact> = frame.defined().collect();
        let &x = defined.choose(&mut rng)?;
        let interp = common::random_interpretation(&mut rng, &frame);
        let be = *BranchEvaluation::ALL.choose(&mut rng).unwrap();
        let brute = support::supports_bruteforce(&frame, be, &interp, x).ok()?;
        let fast = support::supports(&frame, be, &interp, x);
        Some((brute.is_some() == fast, format!("{be} {} in {:?}", frame.name(x), interp)))
    });
    let within: Vec<_> = checked.into_iter().flatten().collect();
    let agree = within.iter().filter(|(ok, _)| *ok).count();
    let first = within.iter().find(|(ok, _)| !ok).map(|(_, d)| format!("; first mismatch: {d}"));
    verdict(
        within.len() >= CHECKER_INSTANCES && agree == within.len(),
        format!("{agree}/{} instances agree{}", within.len(), first.unwrap_or_default()),
    )
}

fn branch_value_soundness() -> Verdict {
    let results = par::map_range(Exec::default(), JUSTIFICATIONS, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + i as u64);
        let frame: Frame = loop {
            let f = common::random_frame(&mut rng, 4);
            if f.defined().next().is_some() {
                break f;
            }
        };
        let d = frame.defined().count();
        let j = common::random_justification(&mut rng, &frame);
        let starts: Vec<Fact> = frame.defined().collect();
        let start = *starts.choose(&mut rng).unwrap();
        let mut ok = d <= 8;
        let mut detail = String::new();
        for be in BranchEvaluation::ALL {
            let computed = justification::branch_values(&frame, &j, start, be).unwrap();
            let realized = common::realized_values(&frame, &j, start, be, d + 2);
            if computed != realized {
                ok = false;
                detail = format!("{be} from {}: computed {computed:?}, enumerated {realized:?}", frame.name(start));
            }
        }
        (ok, detail)
    });
    let agree = results.iter().filter(|(ok, _)| *ok).count();
    let first = results.iter().find(|(ok, _)| !ok).map(|(_, d)| format!("; first mismatch: {d}"));
    verdict(
        agree == JUSTIFICATIONS,
        format!("{agree}/{JUSTIFICATIONS} justifications agree under all four evaluations{}", first.unwrap_or_default()),
    )
}

/// Returns a failure description, or `None` when the session satisfies both
/// relevance properties.
fn check_session(seed: u64) -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opens = rng.random_range(1..=10);
    let text = common::random_open_program(&mut rng, 4, opens, 8);
    let (_, frame) = program::load(&text, &Default::default()).unwrap();
    let be = *BranchEvaluation::ALL.choose(&mut rng).unwrap();
    let open_atoms: Vec<_> = frame.symbols().atoms().filter(|&a| frame.is_open(Fact::pos(a))).collect();
    let mut answered = BTreeMap::new();
    for &a in &open_atoms {
        if rng.random_bool(0.3) {
            answered.insert(a, rng.random_bool(0.5));
        }
    }
    let queries: Vec<Fact> = frame
        .defined()
        .filter(|f| f.sign() == Some(jfy_core::Sign::Positive))
        .collect();
    let decided = |answers: &BTreeMap<_, _>, q: Fact| session::decided(&frame, be, answers, q).unwrap();

    // irrelevant opens never change a decided status
    let mut all_relevant = BTreeSet::new();
    for &q in &queries {
        let before = decided(&answered, q);
        let relevant = session::relevant_opens(&frame, be, &answered, q).unwrap();
        all_relevant.extend(relevant.iter().copied());
        for &o in &open_atoms {
            if answered.contains_key(&o) || relevant.contains(&Fact::pos(o)) {
                continue;
            }
            for v in [true, false] {
                let mut next = answered.clone();
                next.insert(o, v);
                let after = decided(&next, q);
                if after != before {
                    return Some(format!(
                        "{be}: answering irrelevant {}={v} moved {} from {before:?} to {after:?} in\n{text}",
                        frame.symbols().name(o),
                        frame.name(q)
                    ));
                }
            }
        }
    }

    // answering every relevant open decides every query
    let mut complete = answered.clone();
    for o in all_relevant {
        complete.insert(o.atom().unwrap(), rng.random_bool(0.5));
    }
    for &q in &queries {
        if decided(&complete, q) == Status::Open {
            return Some(format!("{be}: {} still open after answering relevant opens in\n{text}", frame.name(q)));
        }
    }
    None
}

fn relevance() -> Verdict {
    let failures: Vec<String> = par::map_range(Exec::default(), SESSIONS, |i| check_session(9000 + i as u64))
        .into_iter()
        .flatten()
        .collect();
    verdict(
        failures.is_empty(),
        format!(
            "{}/{SESSIONS} sessions satisfy irrelevance and completeness{}",
            SESSIONS - failures.len(),
            failures.first().map(|f| format!("; first failure: {f}")).unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |name: &str, v: Verdict| {
        all &= v.pass;
        println!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    };
    report("path-explanation", example_path());
    report("self-negation", example_self_negation());
    let (oracle, nondefective) = fuzz_corpus();
    report("oracle-equivalence", oracle);
    report("non-defectiveness", nondefective);
    report("checker-equivalence", checker_equivalence());
    report("branch-value-soundness", branch_value_soundness());
    report("relevance", relevance());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
