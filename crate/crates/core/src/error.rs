use std::fmt;

use thiserror::Error;

/// A single problem found while validating raw instance data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    /// Two classes of one hospital properly intersect.
    NonLaminar { hospital: String, first: String, second: String },
    /// Two classes of one hospital have identical member sets.
    DuplicateClass { hospital: String, first: String, second: String },
    /// A class lists a resident that is not on the hospital's preference list.
    ClassOutsidePreflist { hospital: String, class: String, resident: String },
    /// `r` lists `h` but `h` does not list `r`, or the other way around.
    NonMutualEdge { resident: String, hospital: String },
    /// A preference list names the same vertex twice.
    DuplicatePrefEntry { owner: String, entry: String },
    /// Zero capacity, or a root-equivalent class whose quota differs from the capacity.
    BadQuota { hospital: String, detail: String },
    /// An identifier that was never declared.
    UnknownIdentifier { context: String, name: String },
    /// An identifier declared twice, or a class id reused within a hospital.
    DuplicateIdentifier { name: String },
}

impl ValidationIssue {
    pub fn code(&self) -> &'static str {
        match self {
            ValidationIssue::NonLaminar { .. } => "NON_LAMINAR",
            ValidationIssue::DuplicateClass { .. } => "DUPLICATE_CLASS",
            ValidationIssue::ClassOutsidePreflist { .. } => "CLASS_OUTSIDE_PREFLIST",
            ValidationIssue::NonMutualEdge { .. } => "NON_MUTUAL_EDGE",
            ValidationIssue::DuplicatePrefEntry { .. } => "DUPLICATE_PREF_ENTRY",
            ValidationIssue::BadQuota { .. } => "BAD_QUOTA",
            ValidationIssue::UnknownIdentifier { .. } => "UNKNOWN_IDENTIFIER",
            ValidationIssue::DuplicateIdentifier { .. } => "DUPLICATE_IDENTIFIER",
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.code())?;
        match self {
            ValidationIssue::NonLaminar { hospital, first, second } => {
                write!(f, "classes {first} and {second} of {hospital} properly intersect")
            }
            ValidationIssue::DuplicateClass { hospital, first, second } => {
                write!(f, "classes {first} and {second} of {hospital} have the same members")
            }
            ValidationIssue::ClassOutsidePreflist { hospital, class, resident } => {
                write!(f, "class {class} of {hospital} contains {resident}, who is not on its list")
            }
            ValidationIssue::NonMutualEdge { resident, hospital } => {
                write!(f, "edge ({resident}, {hospital}) is not listed by both sides")
            }
            ValidationIssue::DuplicatePrefEntry { owner, entry } => {
                write!(f, "{owner} lists {entry} more than once")
            }
            ValidationIssue::BadQuota { hospital, detail } => write!(f, "{hospital}: {detail}"),
            ValidationIssue::UnknownIdentifier { context, name } => {
                write!(f, "unknown identifier {name} in {context}")
            }
            ValidationIssue::DuplicateIdentifier { name } => {
                write!(f, "identifier {name} declared more than once")
            }
        }
    }
}

/// Every issue found during validation, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationErrors(pub Vec<ValidationIssue>);

impl ValidationErrors {
    pub fn issues(&self) -> &[ValidationIssue] {
        &self.0
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.0.iter().any(|i| i.code() == code)
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} validation error(s)", self.0.len())?;
        for issue in &self.0 {
            write!(f, "\n  {issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationErrors),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("UNKNOWN_RESIDENT: resident {resident} is not acceptable to hospital {hospital}")]
    UnknownResident { resident: String, hospital: String },

    #[error("INFEASIBLE_INPUT: {0}")]
    InfeasibleInput(String),

    #[error("NOT_A_NEIGHBOR: {candidate} is not adjacent to {vertex}")]
    NotANeighbor { vertex: String, candidate: String },

    #[error("CORR_MISMATCH: {0}")]
    CorrMismatch(String),

    #[error("BAD_S: level count {s} outside 2..={max}")]
    BadLevelCount { s: usize, max: usize },

    #[error("RESERVED_NAME: identifier {0:?} contains '#', which is reserved for level copies")]
    ReservedName(String),

    #[error("INVARIANT_VIOLATION: {0}")]
    InvariantViolation(String),

    #[error("NOT_PARTITION: classes of {hospital} do not partition its preference list")]
    NotPartition { hospital: String },

    #[error("TOO_LARGE: {0}")]
    TooLarge(String),

    #[error("NOT_MAXCARD: matching has size {size}, maximum is {max}")]
    NotMaxCardinality { size: usize, max: usize },

    #[error("invalid generator config: {0}")]
    BadConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
