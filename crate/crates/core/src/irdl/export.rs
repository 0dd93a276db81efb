use std::collections::{HashMap, HashSet};

use super::{constraint_type, ConstraintExpr};
use crate::builtin::make_integer_attr;
use crate::ir::{
    Attribute, DialectDefinition, DictionaryAttr, InsertPoint, Ir, OpDefinition, OpId,
    OperationState, SlotConstraints, Trait, ValueId,
};
use crate::textual::Module;

/// Translates a definition into an IRDL program: a `builtin.module` holding
/// one `irdl.dialect`.
pub fn export_dialect_to_irdl(d: &DialectDefinition) -> Module {
    let mut ir = Ir::new();
    let dialect = export_dialect_into(&mut ir, d);
    let body = single_block_region(&mut ir, vec![dialect]);
    let top = ir.create_operation(OperationState::new("builtin.module").region(body));
    Module {
        ir,
        top,
        locations: HashMap::new(),
    }
}

/// Builds a detached `irdl.dialect` operation for `d` in `ir`.
pub fn export_dialect_into(ir: &mut Ir, d: &DialectDefinition) -> OpId {
    let mut members = Vec::new();
    for attr in &d.attributes {
        let params: Vec<&ConstraintExpr> = attr.parameters.iter().collect();
        let mut e = Emitter::new(ir, &params);
        if !attr.parameters.is_empty() {
            let values: Vec<ValueId> = attr.parameters.iter().map(|c| e.emit(c)).collect();
            e.clause(OperationState::new("irdl.parameters").operands(values));
        }
        let ops = e.ops;
        let name = if attr.is_type { "irdl.type" } else { "irdl.attribute" };
        members.push(member(ir, name, &attr.mnemonic, ops, None));
    }
    for op in &d.operations {
        let ops = export_operation(ir, op);
        let traits = (!op.traits.is_empty()).then(|| traits_attribute(&op.traits));
        members.push(member(ir, "irdl.operation", op.mnemonic(), ops, traits));
    }
    let body = if members.is_empty() {
        ir.create_region()
    } else {
        single_block_region(ir, members)
    };
    ir.create_operation(
        OperationState::new("irdl.dialect")
            .attribute("sym_name", Attribute::string(d.name.clone()))
            .region(body),
    )
}

fn single_block_region(ir: &mut Ir, ops: Vec<OpId>) -> crate::ir::RegionId {
    let region = ir.create_region();
    let block = ir.create_block([]);
    ir.append_block(region, block);
    for op in ops {
        ir.insert_operation(op, InsertPoint::BackOf(block))
            .expect("detached operation");
    }
    region
}

fn member(
    ir: &mut Ir,
    kind: &str,
    name: &str,
    ops: Vec<OpId>,
    traits: Option<Attribute>,
) -> OpId {
    let body = if ops.is_empty() {
        ir.create_region()
    } else {
        single_block_region(ir, ops)
    };
    let mut state = OperationState::new(kind)
        .attribute("sym_name", Attribute::string(name))
        .region(body);
    if let Some(t) = traits {
        state = state.attribute("traits", t);
    }
    ir.create_operation(state)
}

fn export_operation(ir: &mut Ir, op: &OpDefinition) -> Vec<OpId> {
    let all: Vec<&ConstraintExpr> = slot_exprs(&op.operands)
        .chain(slot_exprs(&op.results))
        .chain(op.attributes.iter().map(|(_, c)| c))
        .collect();
    let mut e = Emitter::new(ir, &all);
    for (slots, name) in [(&op.operands, "irdl.operands"), (&op.results, "irdl.results")] {
        match slots {
            SlotConstraints::Fixed(cs) if cs.is_empty() => {}
            SlotConstraints::Fixed(cs) => {
                let values: Vec<ValueId> = cs.iter().map(|c| e.emit(c)).collect();
                e.clause(OperationState::new(name).operands(values));
            }
            SlotConstraints::Variadic { each, min } => {
                let v = e.emit(each);
                e.clause(
                    OperationState::new(name)
                        .operands([v])
                        .attribute("variadic", make_integer_attr(*min as i128, 64).into()),
                );
            }
        }
    }
    if !op.attributes.is_empty() {
        let values: Vec<ValueId> = op.attributes.iter().map(|(_, c)| e.emit(c)).collect();
        let names = op
            .attributes
            .iter()
            .map(|(n, _)| Attribute::string(n.clone()))
            .collect();
        e.clause(
            OperationState::new("irdl.attributes")
                .operands(values)
                .attribute("names", Attribute::Array(names)),
        );
    }
    for (count, name) in [
        (op.region_count, "irdl.regions"),
        (op.successor_count, "irdl.successors"),
    ] {
        if count > 0 {
            e.clause(
                OperationState::new(name)
                    .attribute("count", make_integer_attr(count as i128, 64).into()),
            );
        }
    }
    e.ops
}

fn slot_exprs(s: &SlotConstraints) -> Box<dyn Iterator<Item = &ConstraintExpr> + '_> {
    match s {
        SlotConstraints::Fixed(cs) => Box::new(cs.iter()),
        SlotConstraints::Variadic { each, .. } => Box::new(std::iter::once(each)),
    }
}

pub(super) fn traits_attribute(traits: &[Trait]) -> Attribute {
    let entries = traits
        .iter()
        .map(|t| {
            let value = match t {
                Trait::HasParent(names) => {
                    Attribute::Array(names.iter().cloned().map(Attribute::String).collect())
                }
                Trait::EntryBlockArgs(types) => Attribute::Array(types.clone()),
                _ => Attribute::Array(Vec::new()),
            };
            (t.name().to_string(), value)
        })
        .collect();
    Attribute::Dictionary(DictionaryAttr::new(entries).expect("traits are distinct"))
}

/// Emits constraint operations in post-order into a list of detached ops.
struct Emitter<'a> {
    ir: &'a mut Ir,
    ops: Vec<OpId>,
    vars: HashMap<usize, ValueId>,
    /// The constraint each variable was introduced with, `AllOf[inner, ?id]`.
    var_defs: HashMap<usize, ConstraintExpr>,
    in_progress: HashSet<usize>,
}

impl<'a> Emitter<'a> {
    fn new(ir: &'a mut Ir, exprs: &[&ConstraintExpr]) -> Self {
        let mut var_defs = HashMap::new();
        for e in exprs {
            collect_var_defs(e, &mut var_defs);
        }
        Emitter {
            ir,
            ops: Vec::new(),
            vars: HashMap::new(),
            var_defs,
            in_progress: HashSet::new(),
        }
    }

    fn push(&mut self, state: OperationState) -> ValueId {
        let op = self.ir.create_operation(state.results([constraint_type()]));
        self.ops.push(op);
        self.ir.op(op).result(0)
    }

    fn clause(&mut self, state: OperationState) {
        let op = self.ir.create_operation(state);
        self.ops.push(op);
    }

    fn var(&mut self, id: usize) -> ValueId {
        if let Some(&v) = self.vars.get(&id) {
            return v;
        }
        // A variable mentioned inside its own definition is unconstrained there.
        let inner = match self.in_progress.insert(id) {
            true => self.var_defs.get(&id).cloned().unwrap_or(ConstraintExpr::Any),
            false => ConstraintExpr::Any,
        };
        let v = self.emit(&inner);
        self.in_progress.remove(&id);
        *self.vars.entry(id).or_insert(v)
    }

    fn emit(&mut self, c: &ConstraintExpr) -> ValueId {
        match c {
            ConstraintExpr::AllOf(parts) if is_shared(parts) => {
                let ConstraintExpr::Var(id) = parts[1] else { unreachable!() };
                let v = self.var(id);
                if self.var_defs.get(&id) != Some(&parts[0]) {
                    let inner = self.emit(&parts[0]);
                    return self.push(OperationState::new("irdl.all_of").operands([inner, v]));
                }
                v
            }
            ConstraintExpr::Var(id) => self.var(*id),
            ConstraintExpr::Is(a) => {
                self.push(OperationState::new("irdl.is").attribute("expected", a.clone()))
            }
            ConstraintExpr::Any => self.push(OperationState::new("irdl.any")),
            ConstraintExpr::AnyOf(cs) | ConstraintExpr::AllOf(cs) => {
                let values: Vec<ValueId> = cs.iter().map(|c| self.emit(c)).collect();
                let name = if matches!(c, ConstraintExpr::AnyOf(_)) {
                    "irdl.any_of"
                } else {
                    "irdl.all_of"
                };
                self.push(OperationState::new(name).operands(values))
            }
            ConstraintExpr::Parametric { base, params } => {
                let values: Vec<ValueId> = params.iter().map(|c| self.emit(c)).collect();
                self.push(
                    OperationState::new("irdl.parametric")
                        .operands(values)
                        .attribute("base_type", Attribute::string(base.clone())),
                )
            }
        }
    }
}

fn is_shared(parts: &[ConstraintExpr]) -> bool {
    matches!(parts, [_, ConstraintExpr::Var(_)])
}

fn collect_var_defs(c: &ConstraintExpr, out: &mut HashMap<usize, ConstraintExpr>) {
    match c {
        ConstraintExpr::AllOf(parts) => {
            if let [inner, ConstraintExpr::Var(id)] = parts.as_slice() {
                out.entry(*id).or_insert_with(|| inner.clone());
            }
            parts.iter().for_each(|p| collect_var_defs(p, out));
        }
        ConstraintExpr::AnyOf(parts) => parts.iter().for_each(|p| collect_var_defs(p, out)),
        ConstraintExpr::Parametric { params, .. } => {
            params.iter().for_each(|p| collect_var_defs(p, out))
        }
        _ => {}
    }
}
