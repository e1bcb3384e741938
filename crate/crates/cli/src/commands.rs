//! Batch subcommands. Each returns the text to print on stdout.

use std::collections::BTreeSet;
use std::fmt;

use jfy_core::branch::BranchEvaluation;
use jfy_core::explain;
use jfy_core::fuzz::{self, FuzzConfig};
use jfy_core::par::Exec;
use jfy_core::program::{self, OpenAssignment, ProgramError};
use jfy_core::semantics;
use jfy_core::session;
use jfy_core::{Fact, Frame};

/// Exit code 2 for bad input, 1 when the engine ran but the answer is a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Semantic(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Semantic(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Semantic(m) => f.write_str(m),
        }
    }
}

fn program_failure(e: ProgramError) -> Failure {
    match e {
        ProgramError::Syntax(errors) => Failure::Usage(
            errors
                .iter()
                .map(|e| format!("syntax error at {e}"))
                .collect::<Vec<_>>()
                .join("\n"),
        ),
        other => Failure::Usage(other.to_string()),
    }
}

/// What unassigned open atoms contribute to the starting interpretation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OpensDefault {
    /// Neither the atom nor its negation.
    #[default]
    Absent,
    /// The negation.
    False,
}

impl OpensDefault {
    pub fn name(self) -> &'static str {
        match self {
            OpensDefault::Absent => "absent",
            OpensDefault::False => "false",
        }
    }
}

/// Inline JSON if the argument starts with `{`, otherwise a file path.
pub fn read_opens(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_owned())
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))
    }
}

/// Parses and grounds `text` over its own constants plus those mentioned in
/// the opens keys and `extra_names`, then reads the opens.
pub fn load(
    text: &str,
    opens_json: Option<&str>,
    default: OpensDefault,
    extra_names: &[&str],
) -> Result<(program::Program, Frame, OpenAssignment), Failure> {
    let mut extra = BTreeSet::new();
    if let Some(json) = opens_json {
        extra = program::opens_constants(json).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    for name in extra_names {
        let bare = name.trim().trim_start_matches('~').trim_start_matches("not ").trim();
        if let Ok(atom) = program::parse_atom(bare) {
            extra.extend(atom.args.iter().filter_map(|t| match t {
                program::Term::Const(c) => Some(c.clone()),
                program::Term::Var(_) => None,
            }));
        }
    }
    let (ground, frame) = program::load(text, &extra).map_err(program_failure)?;
    let mut opens = match opens_json {
        Some(json) => program::opens_from_json(&frame, json).map_err(|e| Failure::Usage(e.to_string()))?,
        None => OpenAssignment::new(),
    };
    if default == OpensDefault::False {
        for a in frame.symbols().atoms() {
            if frame.is_open(Fact::pos(a)) {
                opens.entry(a).or_insert(false);
            }
        }
    }
    Ok((ground, frame, opens))
}

pub fn ground(text: &str) -> Result<String, Failure> {
    let (ground, _) = program::load(text, &Default::default()).map_err(program_failure)?;
    Ok(ground.to_string())
}

pub fn models(
    text: &str,
    be: BranchEvaluation,
    opens_json: Option<&str>,
    default: OpensDefault,
) -> Result<String, Failure> {
    let (_, frame, opens) = load(text, opens_json, default, &[])?;
    let outcome = semantics::engine_outcome(&frame, be, &opens, Exec::default())
        .map_err(|e| Failure::Semantic(e.to_string()))?;
    let out = serde_json::json!({
        "result": outcome,
        "semantics": be.name(),
        "unassigned_opens": default.name(),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&out).expect("json values serialize")))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum ExplainFormat {
    #[default]
    Dot,
    Json,
}

pub fn explain(
    text: &str,
    fact: &str,
    be: BranchEvaluation,
    opens_json: Option<&str>,
    default: OpensDefault,
    format: ExplainFormat,
) -> Result<String, Failure> {
    let (_, frame, opens) = load(text, opens_json, default, &[fact])?;
    let x = session::resolve_query(&frame, fact).map_err(|e| Failure::Usage(e.to_string()))?;
    let interp = semantics::extended_lfp(&frame, be, &semantics::initial(&opens));
    if !frame.is_defined(x) {
        return Err(Failure::Semantic(format!("{} is not a defined fact", frame.name(x))));
    }
    let e = explain::explain(&frame, be, &interp, x).map_err(|e| Failure::Semantic(e.to_string()))?;
    Ok(match format {
        ExplainFormat::Dot => format!("// unassigned opens: {}\n{}", default.name(), explain::export_dot(&e)),
        ExplainFormat::Json => {
            let mut value = explain::to_json_value(&e);
            value["unassigned_opens"] = default.name().into();
            format!("{value}\n")
        }
    })
}

pub struct CheckOutcome {
    pub report: String,
    pub summary: String,
    pub clean: bool,
}

pub fn check(config: &FuzzConfig) -> CheckOutcome {
    let records = fuzz::fuzz_check(config, Exec::default());
    let agree = records.iter().filter(|r| r.agree).count();
    let defects: usize = records.iter().map(|r| r.defects.len()).sum();
    CheckOutcome {
        report: fuzz::report(&records),
        summary: format!(
            "{} programs, {agree}/{} semantics checks agree, {defects} defects",
            config.count,
            records.len()
        ),
        clean: agree == records.len() && defects == 0,
    }
}
