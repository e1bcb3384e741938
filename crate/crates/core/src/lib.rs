//! Justification frames and the semantics they induce.
//!
//! A logic program is lowered to a justification frame: rules `x <- A` over
//! a fact space of signed literals and the logical values `t`, `f`, `u`,
//! `i`. A branch evaluation decides what each path through a justification
//! is worth, which fixes when a fact is supported in an interpretation.
//! Fixpoints of the support operator then give the well-founded, stable,
//! Kripke-Kleene and supported semantics.
//!
//! ```
//! use jfy_core::{program, semantics, BranchEvaluation, TruthValue};
//!
//! let (_, frame) = program::load("p :- not q. q :- not p. r :- r.", &Default::default()).unwrap();
//! let wf = semantics::wf_model(&frame, &Default::default());
//! let r = frame.symbols().get("r").unwrap();
//! assert_eq!(wf.value(r), TruthValue::False);
//! let stable = semantics::stable_models(&frame, &Default::default()).unwrap();
//! assert_eq!(stable.len(), 2);
//! # let _ = BranchEvaluation::Stable;
//! ```

pub mod branch;
pub mod explain;
pub mod fact;
pub mod frame;
pub mod fuzz;
pub mod interp;
pub mod justification;
pub mod oracle;
pub mod par;
pub mod program;
pub mod scc;
pub mod semantics;
pub mod session;
pub mod support;

pub use branch::{BranchClass, BranchEvaluation};
pub use fact::{Atom, Fact, Logical, Sign, Symbols};
pub use frame::{Frame, FrameError, Rule, RuleId};
pub use interp::Interpretation;
pub use justification::Justification;
pub use par::Exec;
pub use semantics::{ThreeValuedModel, TotalInterpretation, TruthValue};
