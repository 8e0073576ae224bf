//! Error taxonomy shared by every module in the crate.
//!
//! Each variant corresponds to one failure class a caller can meaningfully
//! react to; everything that "cannot happen" by construction is funneled
//! through [`Error::InternalConsistency`] so that invariant violations are
//! loud instead of silently propagating bad data.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for graph construction, sampling, protocol execution,
/// and adversary runs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument is malformed: mismatched vertex universes,
    /// out-of-range ids, zero group size, non-disjoint player inputs, ...
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation would exceed a hard desk-scale cap, e.g. the vertex cap
    /// of the exact oracles or the edge cap of exhaustive support
    /// enumeration.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A message, serialized state, or decoded output exceeded or violated
    /// the memory budget contract.
    #[error("budget violation: {context} ({bits} bits, budget {budget})")]
    BudgetViolation {
        bits: u64,
        budget: u64,
        context: String,
    },

    /// A summary value has no preimage among the support graphs.
    #[error("empty summary class: {0}")]
    EmptyClass(String),

    /// Rejection sampling exhausted its retry cap without an accepted draw.
    #[error("sampling failure: no accepted draw after {attempts} attempts")]
    SamplingFailure { attempts: u64 },

    /// A Las-Vegas verifier exhausted its retry cap without a certified
    /// witness.
    #[error("las-vegas failure: no certified witness after {attempts} trials")]
    LasVegasFailure { attempts: u64 },

    /// An invariant that must hold by construction failed; indicates a bug
    /// or corrupted result data, never a bad input.
    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    /// A strict-mode parameter inequality is violated; the payload names the
    /// exact inequality.
    #[error("parameter domain: {0}")]
    ParameterDomain(String),

    /// Malformed edge-list, state, or config text.
    #[error("parse error: {0}")]
    Parse(String),
}
