use std::fmt;

use super::OpId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    // Parsing.
    Lexical,
    Syntax,
    UndefinedValue,
    UndefinedBlock,
    Redefinition,
    UnbalancedBody,
    UnknownAttribute,
    InvalidAttribute,
    TypeMismatch,
    // Registry.
    UnregisteredOperation,
    // Verification.
    Structural,
    OperandCount,
    ResultCount,
    RegionCount,
    SuccessorCount,
    OperandConstraint,
    ResultConstraint,
    AttributeConstraint,
    MissingAttribute,
    AttributeDefinition,
    TerminatorPlacement,
    MissingTerminator,
    SuccessorOutOfRegion,
    Dominance,
    Isolation,
    ParentConstraint,
    ReturnMismatch,
    RegionEntryArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// 1-based line and column in the source text.
    Source { line: u32, column: u32 },
    /// An operation, with the chain of enclosing operation names.
    Op { op: OpId, path: String },
}

/// An error report. The message is never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
    pub location: Location,
}

impl Diagnostic {
    pub fn at(kind: DiagnosticKind, line: u32, column: u32, message: impl Into<String>) -> Self {
        let message = message.into();
        debug_assert!(!message.is_empty());
        Diagnostic {
            kind,
            message,
            location: Location::Source { line, column },
        }
    }

    pub fn line_column(&self) -> Option<(u32, u32)> {
        match self.location {
            Location::Source { line, column } => Some((line, column)),
            Location::Op { .. } => None,
        }
    }

    pub fn op(&self) -> Option<OpId> {
        match self.location {
            Location::Op { op, .. } => Some(op),
            Location::Source { .. } => None,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Location::Source { line, column } => {
                write!(f, "{line}:{column}: error: {}", self.message)
            }
            Location::Op { path, .. } => write!(f, "{path}: error: {}", self.message),
        }
    }
}

impl std::error::Error for Diagnostic {}
