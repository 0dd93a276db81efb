//! The IRDL dialect: dialect definitions written as IR.
//!
//! Inside an `irdl.type`, `irdl.attribute` or `irdl.operation` region each
//! SSA value of type `!irdl.attribute` denotes a constraint. A value used
//! more than once constrains all of its uses to the same attribute.

mod constraint;
mod export;
mod load;

pub use constraint::{eval_constraint, BindingEnv, ConstraintExpr};
pub use export::{export_dialect_to_irdl, export_dialect_into};
pub use load::{build_dialects_from_irdl, load_dialects_from_irdl, LoadError};

use crate::ir::{
    AttrDefinition, Attribute, Context, ContextError, DialectDefinition, OpDefinition,
    ParametrizedAttr, SlotConstraints, Trait,
};

/// The type of every constraint value, `!irdl.attribute`.
pub fn constraint_type() -> Attribute {
    Attribute::Parametrized(ParametrizedAttr {
        dialect: "irdl".into(),
        mnemonic: "attribute".into(),
        parameters: Vec::new(),
        is_type: true,
    })
}

const DEFINITIONS: [&str; 3] = ["irdl.type", "irdl.attribute", "irdl.operation"];

fn string_attr() -> ConstraintExpr {
    ConstraintExpr::parametric("builtin.string", vec![])
}

fn i64_attr() -> ConstraintExpr {
    ConstraintExpr::parametric(
        "builtin.integer_attr",
        vec![ConstraintExpr::Is(Attribute::int(64))],
    )
}

fn constraint_values(min: usize) -> SlotConstraints {
    SlotConstraints::Variadic {
        each: ConstraintExpr::Is(constraint_type()),
        min,
    }
}

fn constraint_op(name: &str, operands: SlotConstraints) -> OpDefinition {
    let mut op = OpDefinition::new(name);
    op.operands = operands;
    op.results = SlotConstraints::Fixed(vec![ConstraintExpr::Is(constraint_type())]);
    op.traits = vec![
        Trait::Pure,
        Trait::HasParent(DEFINITIONS.iter().map(|s| s.to_string()).collect()),
    ];
    op
}

fn clause_op(name: &str, parents: &[&str]) -> OpDefinition {
    let mut op = OpDefinition::new(name);
    op.operands = constraint_values(0);
    op.traits = vec![Trait::HasParent(
        parents.iter().map(|s| s.to_string()).collect(),
    )];
    op
}

pub fn irdl_dialect() -> DialectDefinition {
    let mut d = DialectDefinition::new("irdl");
    d.attributes.push(AttrDefinition {
        mnemonic: "attribute".into(),
        is_type: true,
        parameters: Vec::new(),
    });

    let mut dialect = OpDefinition::new("irdl.dialect");
    dialect.attributes = vec![("sym_name".into(), string_attr())];
    dialect.region_count = 1;
    dialect.traits = vec![Trait::IsolatedFromAbove];
    d.operations.push(dialect);

    for name in DEFINITIONS {
        let mut def = OpDefinition::new(name);
        def.attributes = vec![("sym_name".into(), string_attr())];
        def.region_count = 1;
        def.traits = vec![
            Trait::IsolatedFromAbove,
            Trait::HasParent(vec!["irdl.dialect".into()]),
        ];
        d.operations.push(def);
    }

    let mut is = constraint_op("irdl.is", SlotConstraints::none());
    is.attributes = vec![("expected".into(), ConstraintExpr::Any)];
    d.operations.push(is);
    d.operations.push(constraint_op("irdl.any", SlotConstraints::none()));
    d.operations.push(constraint_op("irdl.any_of", constraint_values(1)));
    d.operations.push(constraint_op("irdl.all_of", constraint_values(1)));
    let mut parametric = constraint_op("irdl.parametric", constraint_values(0));
    parametric.attributes = vec![("base_type".into(), string_attr())];
    d.operations.push(parametric);

    d.operations
        .push(clause_op("irdl.parameters", &["irdl.type", "irdl.attribute"]));
    d.operations.push(clause_op("irdl.operands", &["irdl.operation"]));
    d.operations.push(clause_op("irdl.results", &["irdl.operation"]));
    let mut attributes = clause_op("irdl.attributes", &["irdl.operation"]);
    // Names are checked when the dialect is loaded.
    attributes.attributes = vec![("names".into(), ConstraintExpr::Any)];
    d.operations.push(attributes);
    for name in ["irdl.regions", "irdl.successors"] {
        let mut op = OpDefinition::new(name);
        op.attributes = vec![("count".into(), i64_attr())];
        op.traits = vec![Trait::HasParent(vec!["irdl.operation".into()])];
        d.operations.push(op);
    }
    d
}

pub fn register_irdl_dialect(ctx: &mut Context) -> Result<(), ContextError> {
    ctx.register_dialect(irdl_dialect())
}
