use std::collections::HashMap;

use thiserror::Error;

use super::Attribute;
use crate::irdl::ConstraintExpr;

/// A structural property of an operation definition checked by the verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trait {
    /// May end a block and name successors.
    Terminator,
    /// No side effects; unused instances can be deleted.
    Pure,
    /// Nested regions cannot use values defined outside the operation.
    IsolatedFromAbove,
    /// Must be directly nested in one of the named operations.
    HasParent(Vec<String>),
    /// Operand types must equal the results of the enclosing operation's
    /// `function_type` attribute.
    FunctionReturn,
    /// Every region has an entry block whose leading arguments have these types.
    EntryBlockArgs(Vec<Attribute>),
}

impl Trait {
    pub fn name(&self) -> &'static str {
        match self {
            Trait::Terminator => "terminator",
            Trait::Pure => "pure",
            Trait::IsolatedFromAbove => "isolated",
            Trait::HasParent(_) => "has_parent",
            Trait::FunctionReturn => "function_return",
            Trait::EntryBlockArgs(_) => "entry_block_args",
        }
    }
}

/// Constraints on an operand or result list.
#[derive(Debug, Clone, PartialEq)]
pub enum SlotConstraints {
    /// Exactly one value per constraint, in order.
    Fixed(Vec<ConstraintExpr>),
    /// Any number of values, at least `min`, each satisfying `each`.
    Variadic { each: ConstraintExpr, min: usize },
}

impl SlotConstraints {
    pub fn none() -> Self {
        SlotConstraints::Fixed(Vec::new())
    }

    pub fn any_number() -> Self {
        SlotConstraints::Variadic {
            each: ConstraintExpr::Any,
            min: 0,
        }
    }

    pub fn accepts_count(&self, n: usize) -> bool {
        match self {
            SlotConstraints::Fixed(c) => c.len() == n,
            SlotConstraints::Variadic { min, .. } => n >= *min,
        }
    }

    /// Constraint governing slot `index`.
    pub fn constraint_for(&self, index: usize) -> Option<&ConstraintExpr> {
        match self {
            SlotConstraints::Fixed(c) => c.get(index),
            SlotConstraints::Variadic { each, .. } => Some(each),
        }
    }

    pub fn describe_arity(&self) -> String {
        match self {
            SlotConstraints::Fixed(c) => c.len().to_string(),
            SlotConstraints::Variadic { min, .. } => format!("at least {min}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpDefinition {
    /// Full name, `dialect.mnemonic`.
    pub name: String,
    pub operands: SlotConstraints,
    pub results: SlotConstraints,
    /// Required attributes, checked in this order.
    pub attributes: Vec<(String, ConstraintExpr)>,
    pub region_count: usize,
    pub successor_count: usize,
    pub traits: Vec<Trait>,
}

impl OpDefinition {
    pub fn new(name: impl Into<String>) -> Self {
        OpDefinition {
            name: name.into(),
            operands: SlotConstraints::none(),
            results: SlotConstraints::none(),
            attributes: Vec::new(),
            region_count: 0,
            successor_count: 0,
            traits: Vec::new(),
        }
    }

    pub fn has_trait(&self, name: &str) -> bool {
        self.traits.iter().any(|t| t.name() == name)
    }

    pub fn is_terminator(&self) -> bool {
        self.traits.contains(&Trait::Terminator)
    }

    pub fn is_pure(&self) -> bool {
        self.traits.contains(&Trait::Pure)
    }

    pub fn is_isolated(&self) -> bool {
        self.traits.contains(&Trait::IsolatedFromAbove)
    }

    pub fn mnemonic(&self) -> &str {
        self.name.split_once('.').map_or(&self.name, |(_, m)| m)
    }
}

/// Definition of a parametrized attribute or type.
#[derive(Debug, Clone, PartialEq)]
pub struct AttrDefinition {
    pub mnemonic: String,
    pub is_type: bool,
    pub parameters: Vec<ConstraintExpr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DialectDefinition {
    pub name: String,
    pub operations: Vec<OpDefinition>,
    pub attributes: Vec<AttrDefinition>,
}

impl DialectDefinition {
    pub fn new(name: impl Into<String>) -> Self {
        DialectDefinition {
            name: name.into(),
            operations: Vec::new(),
            attributes: Vec::new(),
        }
    }

    pub fn attribute(&self, mnemonic: &str) -> Option<&AttrDefinition> {
        self.attributes.iter().find(|a| a.mnemonic == mnemonic)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContextError {
    #[error("dialect '{0}' is already registered")]
    DuplicateDialect(String),
    #[error("operation '{op}' does not belong to dialect '{dialect}'")]
    ForeignMember { dialect: String, op: String },
    #[error("'{0}' is defined more than once")]
    DuplicateMember(String),
}

/// Registry of dialect definitions.
#[derive(Debug, Clone, Default)]
pub struct Context {
    dialects: Vec<DialectDefinition>,
    by_name: HashMap<String, usize>,
    ops: HashMap<String, (usize, usize)>,
    /// Accept operations without a registered definition.
    pub allow_unregistered: bool,
}

impl Context {
    /// An empty context; see [`Context::with_builtins`] for the usual setup.
    pub fn new() -> Self {
        Context::default()
    }

    /// A context with the builtin, func, arith, scf, cf and irdl dialects.
    pub fn with_builtins() -> Self {
        let mut ctx = Context::new();
        crate::builtin::register_builtin_dialects(&mut ctx)
            .expect("fresh context has no dialects");
        crate::irdl::register_irdl_dialect(&mut ctx).expect("fresh context has no irdl dialect");
        ctx
    }

    pub fn register_dialect(&mut self, dialect: DialectDefinition) -> Result<(), ContextError> {
        if self.by_name.contains_key(&dialect.name) {
            return Err(ContextError::DuplicateDialect(dialect.name));
        }
        let prefix = format!("{}.", dialect.name);
        let mut seen = std::collections::HashSet::new();
        for op in &dialect.operations {
            if !op.name.starts_with(&prefix) || op.name.len() == prefix.len() {
                return Err(ContextError::ForeignMember {
                    dialect: dialect.name.clone(),
                    op: op.name.clone(),
                });
            }
            if !seen.insert(op.name.as_str()) || self.ops.contains_key(&op.name) {
                return Err(ContextError::DuplicateMember(op.name.clone()));
            }
        }
        let mut mnemonics = std::collections::HashSet::new();
        for attr in &dialect.attributes {
            if !mnemonics.insert(attr.mnemonic.as_str()) {
                return Err(ContextError::DuplicateMember(format!(
                    "{}.{}",
                    dialect.name, attr.mnemonic
                )));
            }
        }
        let index = self.dialects.len();
        for (i, op) in dialect.operations.iter().enumerate() {
            self.ops.insert(op.name.clone(), (index, i));
        }
        self.by_name.insert(dialect.name.clone(), index);
        self.dialects.push(dialect);
        Ok(())
    }

    pub fn dialect(&self, name: &str) -> Option<&DialectDefinition> {
        self.by_name.get(name).map(|&i| &self.dialects[i])
    }

    pub fn dialects(&self) -> impl Iterator<Item = &DialectDefinition> {
        self.dialects.iter()
    }

    pub fn lookup(&self, op_name: &str) -> Option<&OpDefinition> {
        self.ops
            .get(op_name)
            .map(|&(d, o)| &self.dialects[d].operations[o])
    }

    pub fn attr_definition(&self, dialect: &str, mnemonic: &str) -> Option<&AttrDefinition> {
        self.dialect(dialect)?.attribute(mnemonic)
    }

    /// Purity of an operation name; unregistered operations are impure.
    pub fn is_pure(&self, op_name: &str) -> bool {
        self.lookup(op_name).is_some_and(OpDefinition::is_pure)
    }

    pub fn is_isolated(&self, op_name: &str) -> bool {
        self.lookup(op_name).is_some_and(OpDefinition::is_isolated)
    }
}
