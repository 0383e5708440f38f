//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

use crate::rat::Rat;

/// Everything that can go wrong short of a programming error. Dimension
/// mismatches on internal matrix plumbing panic instead; the variants here are
/// precondition rejections a caller can act on.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `rational_roots` on the zero polynomial.
    ZeroPolynomial,
    /// Series division where the divisor is zero to its truncation order.
    IndeterminateDivision,
    /// Series division whose exact quotient has a pole at the center.
    QuotientHasPole,
    /// Taylor expansion of a rational function at a pole.
    PoleAtExpansionPoint,
    /// Fundamental series requested at a zero of the system denominator.
    ExpansionAtSingularPoint,
    /// Gauge matrix with vanishing determinant.
    NonInvertibleGauge,
    /// Vector length does not match the system dimension.
    LengthMismatch { expected: usize, got: usize },
    /// Trace residue bookkeeping failed: either the residue is not a
    /// nonnegative integer or the trace has a pole of order >= 2.
    NonApparentSingularityStructure,
    /// The matrix deciding the operator order is rank-deficient; carries the
    /// order that was actually achieved.
    DegenerateCoefficientChoice { achieved_order: Option<usize> },
    /// Witness construction asked for a value vector already in the
    /// specialized row space of the relation basis.
    RelationExplainedBySpecialization,
    /// Frobenius resonance check needs more series order; carries the
    /// blocking exponent pair.
    InsufficientOrder { lower: Rat, upper: Rat },
    /// Relation search with a truncation order below the stated bound.
    OrderTooSmallForDegreeBound { needed: usize, got: usize },
    /// Relation basis rows are linearly dependent over the function field.
    DependentRows,
    /// E-function division at a point where the certified partial sum does
    /// not vanish within the rigorous tail bound.
    NotNumericallyZero,
    /// Argument scaling by zero.
    ZeroScale,
    /// A recurrence coefficient denominator vanishes at some index.
    RecurrenceDenominatorVanishes { index: u64 },
    /// Pole order bookkeeping claimed a higher order than the entry has.
    PoleOrderOvercounted,
    /// Singularity-removal step at a point that is not a pole of the system.
    NotAPole,
    /// The supplied functions do not solve the system to truncation order.
    NotASolution,
    /// Desingularization at a singular point not rational over Q.
    NonRationalSingularity,
    /// Desingularization input functions admit polynomial relations.
    HypothesisViolatedRelationsFound,
    /// Parse error with position information (used by the CLI companion).
    Parse { line: usize, col: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroPolynomial => write!(f, "zero polynomial"),
            Error::IndeterminateDivision => write!(f, "indeterminate division"),
            Error::QuotientHasPole => write!(f, "quotient has a pole at the center"),
            Error::PoleAtExpansionPoint => write!(f, "pole at expansion point"),
            Error::ExpansionAtSingularPoint => write!(f, "expansion at singular point"),
            Error::NonInvertibleGauge => write!(f, "non-invertible gauge"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::NonApparentSingularityStructure => {
                write!(f, "non-apparent singularity structure")
            }
            Error::DegenerateCoefficientChoice { achieved_order } => match achieved_order {
                Some(m) => write!(f, "degenerate coefficient choice (achieved order {m})"),
                None => write!(f, "degenerate coefficient choice (no nonzero delta)"),
            },
            Error::RelationExplainedBySpecialization => {
                write!(f, "relation is explained by specialization")
            }
            Error::InsufficientOrder { lower, upper } => {
                write!(f, "insufficient order (blocking exponent pair {lower}, {upper})")
            }
            Error::OrderTooSmallForDegreeBound { needed, got } => {
                write!(f, "order too small for degree bound (need {needed}, got {got})")
            }
            Error::DependentRows => write!(f, "dependent relation rows"),
            Error::NotNumericallyZero => {
                write!(f, "f(xi) not numerically zero within certified tail bound")
            }
            Error::ZeroScale => write!(f, "argument scale must be nonzero"),
            Error::RecurrenceDenominatorVanishes { index } => {
                write!(f, "recurrence coefficient denominator vanishes at k = {index}")
            }
            Error::PoleOrderOvercounted => write!(f, "pole order overcounted"),
            Error::NotAPole => write!(f, "no pole at the requested point"),
            Error::NotASolution => {
                write!(f, "functions do not solve the system to truncation order")
            }
            Error::NonRationalSingularity => write!(f, "non-rational singularity unsupported"),
            Error::HypothesisViolatedRelationsFound => {
                write!(f, "hypothesis violated: relations found")
            }
            Error::Parse { line, col, message } => {
                write!(f, "parse error at {line}:{col}: {message}")
            }
        }
    }
}
