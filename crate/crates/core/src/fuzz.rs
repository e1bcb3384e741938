//! Seeded differential testing of the engine against the classical oracles.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::branch::BranchEvaluation;
use crate::frame::Frame;
use crate::oracle;
use crate::par::{self, Exec};
use crate::program::{self, Program};
use crate::semantics::{self, SemanticsError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            count: 100,
            max_atoms: 6,
            max_rules: 12,
            max_body: 3,
        }
    }
}

/// One checked (program, semantics) pair. Fields are declared in key order so
/// the JSON output is key-sorted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzRecord {
    pub agree: bool,
    pub defects: Vec<String>,
    pub engine_result: serde_json::Value,
    pub oracle_result: serde_json::Value,
    pub program: String,
    pub semantics: BranchEvaluation,
}

const NAMES: [&str; 26] = [
    "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p", "q", "r", "s", "t", "u", "v",
    "w", "x", "y", "z",
];

/// Text of a random propositional program with no opens. At least one rule;
/// rule bodies may be empty (facts).
pub fn random_program(rng: &mut impl Rng, max_atoms: usize, max_rules: usize, max_body: usize) -> String {
    let atoms = rng.random_range(1..=max_atoms.clamp(1, NAMES.len()));
    let rules = rng.random_range(1..=max_rules.max(1));
    let mut text = String::new();
    for _ in 0..rules {
        text.push_str(NAMES[rng.random_range(0..atoms)]);
        let len = rng.random_range(0..=max_body);
        for k in 0..len {
            text.push_str(if k == 0 { " :- " } else { ", " });
            if rng.random_bool(0.5) {
                text.push_str("not ");
            }
            text.push_str(NAMES[rng.random_range(0..atoms)]);
        }
        text.push_str(".\n");
    }
    text
}

pub fn generate(config: &FuzzConfig) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.count)
        .map(|_| random_program(&mut rng, config.max_atoms, config.max_rules, config.max_body))
        .collect()
}

fn engine_side(frame: &Frame, be: BranchEvaluation, exec: Exec) -> (serde_json::Value, Vec<String>) {
    let none = Default::default();
    let mut defects = Vec::new();
    if be.is_three_valued() {
        let lfp = semantics::extended_lfp(frame, be, &semantics::initial(&none));
        for x in semantics::defects(&lfp) {
            defects.push(format!("{} at fixpoint", frame.name(x)));
        }
    }
    let result = match semantics::engine_outcome(frame, be, &none, exec) {
        Ok(outcome) => serde_json::to_value(outcome).expect("outcomes serialize"),
        Err(SemanticsError::DefectDetected(x)) => {
            defects.push(format!("{x} at candidate"));
            serde_json::Value::Null
        }
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    (result, defects)
}

/// Checks one program text under every semantics.
pub fn check_program(text: &str, exec: Exec) -> Vec<FuzzRecord> {
    let (ground, frame): (Program, Frame) = match program::load(text, &Default::default()) {
        Ok(loaded) => loaded,
        Err(e) => {
            return BranchEvaluation::ALL
                .iter()
                .map(|&be| FuzzRecord {
                    agree: false,
                    defects: Vec::new(),
                    engine_result: serde_json::json!({ "error": e.to_string() }),
                    oracle_result: serde_json::Value::Null,
                    program: text.to_owned(),
                    semantics: be,
                })
                .collect();
        }
    };
    BranchEvaluation::ALL
        .iter()
        .map(|&be| {
            let (engine_result, defects) = engine_side(&frame, be, exec);
            let oracle_result =
                serde_json::to_value(oracle::oracle_outcome(&ground, be, &BTreeMap::new())).expect("outcomes serialize");
            FuzzRecord {
                agree: engine_result == oracle_result,
                defects,
                engine_result,
                oracle_result,
                program: text.to_owned(),
                semantics: be,
            }
        })
        .collect()
}

/// Programs are checked across workers under `Exec::Parallel`; records come
/// back in generation order either way.
pub fn fuzz_check(config: &FuzzConfig, exec: Exec) -> Vec<FuzzRecord> {
    let programs = generate(config);
    par::map(exec, &programs, |text| check_program(text, Exec::Sequential))
        .into_iter()
        .flatten()
        .collect()
}

/// JSON lines, one record per line.
pub fn report(records: &[FuzzRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_seeded_run_agrees() {
        let config = FuzzConfig {
            seed: 42,
            count: 10,
            max_atoms: 3,
            ..FuzzConfig::default()
        };
        let records = fuzz_check(&config, Exec::default());
        assert_eq!(records.len(), 40);
        for r in &records {
            assert!(r.agree, "{}", serde_json::to_string(r).unwrap());
            assert!(r.defects.is_empty());
        }
    }

    #[test]
    fn empty_run() {
        let config = FuzzConfig {
            count: 0,
            ..FuzzConfig::default()
        };
        assert!(fuzz_check(&config, Exec::Sequential).is_empty());
        assert_eq!(report(&[]), "");
    }

    #[test]
    fn reports_are_reproducible() {
        let config = FuzzConfig {
            seed: 7,
            count: 5,
            ..FuzzConfig::default()
        };
        let a = report(&fuzz_check(&config, Exec::Sequential));
        let b = report(&fuzz_check(&config, Exec::Parallel));
        assert_eq!(a, b);
        let first = a.lines().next().unwrap();
        assert!(first.starts_with(r#"{"agree":"#));
    }

    #[test]
    fn generated_programs_parse() {
        let config = FuzzConfig {
            seed: 3,
            count: 50,
            ..FuzzConfig::default()
        };
        for text in generate(&config) {
            let parsed = program::parse(&text).unwrap();
            assert!(parsed.rules.len() <= 12);
            assert!(parsed.rules.iter().all(|r| r.body.len() <= 3));
        }
    }
}
