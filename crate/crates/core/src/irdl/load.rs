use std::collections::HashMap;

use thiserror::Error;

use super::ConstraintExpr;
use crate::ir::{
    AttrDefinition, Attribute, Context, ContextError, DialectDefinition, Ir, OpDefinition, OpId,
    SlotConstraints, Trait, ValueId,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LoadError {
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error("{message}")]
    Malformed { op: OpId, message: String },
}

fn malformed(op: OpId, message: impl Into<String>) -> LoadError {
    LoadError::Malformed {
        op,
        message: message.into(),
    }
}

/// Builds a definition for every `irdl.dialect` in `root` and registers them
/// in `ctx`. Nothing is registered if any dialect fails to load.
pub fn load_dialects_from_irdl(
    ir: &Ir,
    root: OpId,
    ctx: &mut Context,
) -> Result<Vec<DialectDefinition>, LoadError> {
    let dialects = build_dialects_from_irdl(ir, root)?;
    for (i, d) in dialects.iter().enumerate() {
        if ctx.dialect(&d.name).is_some() || dialects[..i].iter().any(|e| e.name == d.name) {
            return Err(ContextError::DuplicateDialect(d.name.clone()).into());
        }
    }
    let mut staged = ctx.clone();
    for d in &dialects {
        staged.register_dialect(d.clone())?;
    }
    *ctx = staged;
    Ok(dialects)
}

/// Translates the `irdl.dialect` operations in `root` (or `root` itself)
/// without registering them.
pub fn build_dialects_from_irdl(ir: &Ir, root: OpId) -> Result<Vec<DialectDefinition>, LoadError> {
    let dialect_ops: Vec<OpId> = if ir.op(root).name() == "irdl.dialect" {
        vec![root]
    } else {
        region_ops(ir, root)
            .into_iter()
            .filter(|&o| ir.op(o).name() == "irdl.dialect")
            .collect()
    };
    dialect_ops.into_iter().map(|op| build_dialect(ir, op)).collect()
}

fn region_ops(ir: &Ir, op: OpId) -> Vec<OpId> {
    ir.op(op)
        .regions()
        .iter()
        .flat_map(|&r| ir.region(r).blocks().to_vec())
        .flat_map(|b| ir.block_ops(b).collect::<Vec<_>>())
        .collect()
}

fn sym_name(ir: &Ir, op: OpId) -> Result<String, LoadError> {
    match ir.op(op).attribute("sym_name").and_then(Attribute::as_str) {
        Some(s) if !s.is_empty() => Ok(s.to_string()),
        _ => Err(malformed(
            op,
            format!("'{}' needs a non-empty string 'sym_name'", ir.op(op).name()),
        )),
    }
}

fn build_dialect(ir: &Ir, op: OpId) -> Result<DialectDefinition, LoadError> {
    let mut d = DialectDefinition::new(sym_name(ir, op)?);
    for member in region_ops(ir, op) {
        let kind = ir.op(member).name();
        match kind {
            "irdl.type" | "irdl.attribute" => {
                let mnemonic = sym_name(ir, member)?;
                let mut folder = Folder::new(ir, member)?;
                let mut parameters = Vec::new();
                for clause in folder.clauses.clone() {
                    match ir.op(clause).name() {
                        "irdl.parameters" if parameters.is_empty() => {
                            parameters = folder.operand_exprs(clause)?;
                        }
                        other => {
                            return Err(malformed(
                                clause,
                                format!("unexpected '{other}' in '{kind}'"),
                            ))
                        }
                    }
                }
                d.attributes.push(AttrDefinition {
                    mnemonic,
                    is_type: kind == "irdl.type",
                    parameters,
                });
            }
            "irdl.operation" => {
                let name = format!("{}.{}", d.name, sym_name(ir, member)?);
                d.operations.push(build_operation(ir, member, name)?);
            }
            other => {
                return Err(malformed(
                    member,
                    format!("unexpected '{other}' in 'irdl.dialect'"),
                ))
            }
        }
    }
    Ok(d)
}

fn count_attribute(ir: &Ir, op: OpId, name: &str) -> Result<usize, LoadError> {
    ir.op(op)
        .attribute(name)
        .and_then(Attribute::as_integer)
        .and_then(|i| usize::try_from(i.value()).ok())
        .ok_or_else(|| {
            malformed(
                op,
                format!("'{}' needs a non-negative integer '{name}'", ir.op(op).name()),
            )
        })
}

fn build_operation(ir: &Ir, member: OpId, name: String) -> Result<OpDefinition, LoadError> {
    let mut def = OpDefinition::new(name);
    let mut folder = Folder::new(ir, member)?;
    let mut seen: Vec<&str> = Vec::new();
    for clause in folder.clauses.clone() {
        let kind = ir.op(clause).name();
        if seen.contains(&kind) {
            return Err(malformed(clause, format!("duplicate '{kind}' clause")));
        }
        seen.push(kind);
        match kind {
            "irdl.operands" | "irdl.results" => {
                let exprs = folder.operand_exprs(clause)?;
                let slots = if ir.op(clause).attribute("variadic").is_some() {
                    let min = count_attribute(ir, clause, "variadic")?;
                    let [each] = <[ConstraintExpr; 1]>::try_from(exprs).map_err(|_| {
                        malformed(clause, format!("variadic '{kind}' takes exactly one constraint"))
                    })?;
                    SlotConstraints::Variadic { each, min }
                } else {
                    SlotConstraints::Fixed(exprs)
                };
                if kind == "irdl.operands" {
                    def.operands = slots;
                } else {
                    def.results = slots;
                }
            }
            "irdl.attributes" => {
                let exprs = folder.operand_exprs(clause)?;
                let names: Option<Vec<String>> = match ir.op(clause).attribute("names") {
                    Some(Attribute::Array(items)) => items
                        .iter()
                        .map(|a| a.as_str().map(str::to_string))
                        .collect(),
                    _ => None,
                };
                let names = names.filter(|n| n.len() == exprs.len()).ok_or_else(|| {
                    malformed(
                        clause,
                        "'irdl.attributes' needs a 'names' array of strings, one per operand",
                    )
                })?;
                def.attributes = names.into_iter().zip(exprs).collect();
            }
            "irdl.regions" => def.region_count = count_attribute(ir, clause, "count")?,
            "irdl.successors" => def.successor_count = count_attribute(ir, clause, "count")?,
            other => {
                return Err(malformed(
                    clause,
                    format!("unexpected '{other}' in 'irdl.operation'"),
                ))
            }
        }
    }
    if let Some(traits) = ir.op(member).attribute("traits") {
        def.traits = parse_traits(traits).map_err(|m| malformed(member, m))?;
    }
    Ok(def)
}

fn parse_traits(attr: &Attribute) -> Result<Vec<Trait>, String> {
    let Attribute::Dictionary(dict) = attr else {
        return Err("'traits' must be a dictionary".into());
    };
    let mut traits = Vec::new();
    for (key, value) in dict.entries() {
        let Attribute::Array(items) = value else {
            return Err(format!("trait '{key}' must map to an array"));
        };
        let plain = |t: Trait| {
            if items.is_empty() {
                Ok(t)
            } else {
                Err(format!("trait '{key}' takes no arguments"))
            }
        };
        traits.push(match key.as_str() {
            "terminator" => plain(Trait::Terminator)?,
            "pure" => plain(Trait::Pure)?,
            "isolated" => plain(Trait::IsolatedFromAbove)?,
            "function_return" => plain(Trait::FunctionReturn)?,
            "has_parent" => Trait::HasParent(
                items
                    .iter()
                    .map(|a| a.as_str().map(str::to_string))
                    .collect::<Option<_>>()
                    .ok_or("trait 'has_parent' takes operation name strings")?,
            ),
            "entry_block_args" => {
                if !items.iter().all(Attribute::is_type) {
                    return Err("trait 'entry_block_args' takes types".into());
                }
                Trait::EntryBlockArgs(items.clone())
            }
            other => return Err(format!("unknown trait '{other}'")),
        });
    }
    Ok(traits)
}

/// Turns the SSA constraint graph of one definition into expressions.
/// A value with several uses becomes a shared variable.
struct Folder<'a> {
    ir: &'a Ir,
    clauses: Vec<OpId>,
    vars: HashMap<ValueId, usize>,
    memo: HashMap<ValueId, ConstraintExpr>,
}

impl<'a> Folder<'a> {
    fn new(ir: &'a Ir, member: OpId) -> Result<Self, LoadError> {
        let mut clauses = Vec::new();
        let mut vars = HashMap::new();
        for op in region_ops(ir, member) {
            let o = ir.op(op);
            if matches!(
                o.name(),
                "irdl.is" | "irdl.any" | "irdl.any_of" | "irdl.all_of" | "irdl.parametric"
            ) {
                if o.results().len() != 1 {
                    return Err(malformed(op, format!("'{}' must have one result", o.name())));
                }
                let v = o.result(0);
                if ir.value(v).uses().len() > 1 {
                    let id = vars.len();
                    vars.insert(v, id);
                }
            } else {
                clauses.push(op);
            }
        }
        Ok(Folder {
            ir,
            clauses,
            vars,
            memo: HashMap::new(),
        })
    }

    fn operand_exprs(&mut self, op: OpId) -> Result<Vec<ConstraintExpr>, LoadError> {
        let operands = self.ir.op(op).operands().to_vec();
        operands.into_iter().map(|v| self.expr(op, v)).collect()
    }

    fn expr(&mut self, user: OpId, v: ValueId) -> Result<ConstraintExpr, LoadError> {
        let inner = self.inner(user, v)?;
        Ok(match self.vars.get(&v) {
            Some(&id) => ConstraintExpr::shared(inner, id),
            None => inner,
        })
    }

    fn inner(&mut self, user: OpId, v: ValueId) -> Result<ConstraintExpr, LoadError> {
        if let Some(e) = self.memo.get(&v) {
            return Ok(e.clone());
        }
        let ir = self.ir;
        let Some(op) = ir.defining_op(v) else {
            return Err(malformed(user, "constraint operands must be results of constraint operations"));
        };
        let o = ir.op(op);
        let e = match o.name() {
            "irdl.is" => ConstraintExpr::Is(
                o.attribute("expected")
                    .ok_or_else(|| malformed(op, "'irdl.is' needs an 'expected' attribute"))?
                    .clone(),
            ),
            "irdl.any" => ConstraintExpr::Any,
            "irdl.any_of" | "irdl.all_of" => {
                let parts = self.operand_exprs(op)?;
                if parts.is_empty() {
                    return Err(malformed(op, format!("'{}' needs at least one operand", o.name())));
                }
                if o.name() == "irdl.any_of" {
                    ConstraintExpr::AnyOf(parts)
                } else {
                    ConstraintExpr::AllOf(parts)
                }
            }
            "irdl.parametric" => {
                let base = o
                    .attribute("base_type")
                    .and_then(Attribute::as_str)
                    .ok_or_else(|| malformed(op, "'irdl.parametric' needs a string 'base_type'"))?
                    .to_string();
                ConstraintExpr::parametric(base, self.operand_exprs(op)?)
            }
            other => {
                return Err(malformed(
                    op,
                    format!("'{other}' does not define a constraint"),
                ))
            }
        };
        self.memo.insert(v, e.clone());
        Ok(e)
    }
}
