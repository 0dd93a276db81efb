//! Structural, definition-driven, and dominance checks.

use std::collections::{HashMap, HashSet};

use super::dominance::DominatorTree;
use super::{
    Attribute, BlockId, Context, Diagnostic, DiagnosticKind, Ir, Location, OpDefinition, OpId,
    RegionId, Trait, Use, ValueDef, ValueId,
};
use crate::irdl::{eval_constraint, BindingEnv};

/// Checks `root` and everything nested in it. Returns every violation found;
/// an empty list means the IR is valid. Never mutates the IR.
pub fn verify(ir: &Ir, root: OpId, ctx: &Context) -> Vec<Diagnostic> {
    let mut v = Verifier {
        ir,
        ctx,
        root,
        diags: Vec::new(),
        positions: vec![u32::MAX; ir.op_capacity()],
        ordered_blocks: HashSet::new(),
        dom_trees: HashMap::new(),
        in_walk: vec![false; ir.op_capacity()],
        slot_counts: HashMap::new(),
    };
    let ops = ir.collect_preorder(root);
    for &op in &ops {
        v.in_walk[op.index()] = true;
    }
    for &op in &ops {
        v.check_op(op);
    }
    v.check_use_lists();
    v.diags
}

struct Verifier<'a> {
    ir: &'a Ir,
    ctx: &'a Context,
    root: OpId,
    diags: Vec<Diagnostic>,
    positions: Vec<u32>,
    ordered_blocks: HashSet<BlockId>,
    dom_trees: HashMap<RegionId, DominatorTree>,
    in_walk: Vec<bool>,
    slot_counts: HashMap<ValueId, usize>,
}

impl Verifier<'_> {
    fn path(&self, op: OpId) -> String {
        let mut names = vec![self.ir.op(op).name()];
        let mut cur = op;
        while cur != self.root {
            match self.ir.parent_op(cur) {
                Some(p) => {
                    names.push(self.ir.op(p).name());
                    cur = p;
                }
                None => break,
            }
        }
        names.reverse();
        names.join("/")
    }

    fn report(&mut self, op: OpId, kind: DiagnosticKind, message: String) {
        let path = self.path(op);
        self.diags.push(Diagnostic {
            kind,
            message,
            location: Location::Op { op, path },
        });
    }

    fn check_op(&mut self, op: OpId) {
        let ir = self.ir;
        let o = ir.op(op);
        let name = o.name().to_string();
        if o.is_erased() {
            self.report(op, DiagnosticKind::Structural, format!("'{name}' has been erased"));
            return;
        }

        for (index, &r) in o.results().iter().enumerate() {
            if ir.value(r).def() != (ValueDef::OpResult { op, index }) {
                self.report(
                    op,
                    DiagnosticKind::Structural,
                    format!("result {index} of '{name}' does not point back to it"),
                );
            }
            if !ir.value_type(r).is_type() {
                self.report(
                    op,
                    DiagnosticKind::Structural,
                    format!("result {index} of '{name}' has non-type '{}'", ir.value_type(r)),
                );
            }
        }
        for &v in o.operands() {
            *self.slot_counts.entry(v).or_default() += 1;
        }

        let def = self.ctx.lookup(&name);
        match def {
            None if !self.ctx.allow_unregistered => self.report(
                op,
                DiagnosticKind::UnregisteredOperation,
                format!("unregistered operation '{name}'"),
            ),
            None => {}
            Some(def) => self.check_definition(op, def),
        }

        let undeclared_successors = def.is_some_and(|d| {
            !d.is_terminator() && d.successor_count == o.successors().len()
        });
        if undeclared_successors && !o.successors().is_empty() {
            self.report(
                op,
                DiagnosticKind::SuccessorCount,
                format!("'{name}' is not a terminator but has successors"),
            );
        }
        self.check_successors(op);

        for (i, &v) in o.operands().iter().enumerate() {
            self.check_operand_dominance(op, i, v);
        }

        for &region in o.regions() {
            if ir.region(region).parent() != Some(op) {
                self.report(
                    op,
                    DiagnosticKind::Structural,
                    format!("{region} of '{name}' does not point back to it"),
                );
            }
            self.check_region(region);
        }

        self.check_attributes(op);
    }

    fn check_definition(&mut self, op: OpId, def: &OpDefinition) {
        let ir = self.ir;
        let o = ir.op(op);
        let name = o.name();
        let mut env = BindingEnv::new();

        let lists = [
            ("operand", o.operands(), &def.operands, DiagnosticKind::OperandCount, DiagnosticKind::OperandConstraint),
            ("result", o.results(), &def.results, DiagnosticKind::ResultCount, DiagnosticKind::ResultConstraint),
        ];
        for (what, values, constraints, count_kind, constraint_kind) in lists {
            if !constraints.accepts_count(values.len()) {
                self.report(
                    op,
                    count_kind,
                    format!(
                        "'{name}' expects {} {what}s, got {}",
                        constraints.describe_arity(),
                        values.len()
                    ),
                );
                continue;
            }
            for (i, &v) in values.iter().enumerate() {
                let Some(c) = constraints.constraint_for(i) else { continue };
                let ty = ir.value_type(v);
                if !eval_constraint(c, ty, &mut env) {
                    self.report(
                        op,
                        constraint_kind,
                        format!("{what} {i} of '{name}' violates constraint {c}: got {ty}"),
                    );
                }
            }
        }

        for (attr_name, c) in &def.attributes {
            match o.attribute(attr_name) {
                None => self.report(
                    op,
                    DiagnosticKind::MissingAttribute,
                    format!("'{name}' requires attribute '{attr_name}'"),
                ),
                Some(value) => {
                    if !eval_constraint(c, value, &mut env) {
                        self.report(
                            op,
                            DiagnosticKind::AttributeConstraint,
                            format!(
                                "attribute '{attr_name}' of '{name}' violates constraint {c}: got {value}"
                            ),
                        );
                    }
                }
            }
        }

        if o.regions().len() != def.region_count {
            self.report(
                op,
                DiagnosticKind::RegionCount,
                format!(
                    "'{name}' expects {} regions, got {}",
                    def.region_count,
                    o.regions().len()
                ),
            );
        }
        if o.successors().len() != def.successor_count {
            self.report(
                op,
                DiagnosticKind::SuccessorCount,
                format!(
                    "'{name}' expects {} successors, got {}",
                    def.successor_count,
                    o.successors().len()
                ),
            );
        }

        let parent = ir.parent_op(op).map(|p| ir.op(p).name());
        let misplaced = def.traits.iter().any(|t| {
            matches!(t, Trait::HasParent(ps) if !parent.is_some_and(|p| ps.iter().any(|n| n == p)))
        });
        for t in &def.traits {
            match t {
                Trait::HasParent(parents) => {
                    if !parent.is_some_and(|p| parents.iter().any(|n| n == p)) {
                        self.report(
                            op,
                            DiagnosticKind::ParentConstraint,
                            format!(
                                "'{name}' must be nested directly in one of [{}], found {}",
                                parents.join(", "),
                                parent.map_or("no parent".to_string(), |p| format!("'{p}'"))
                            ),
                        );
                    }
                }
                Trait::FunctionReturn if !misplaced => self.check_function_return(op),
                Trait::EntryBlockArgs(types) => self.check_entry_args(op, types),
                _ => {}
            }
        }
    }

    fn check_function_return(&mut self, op: OpId) {
        let ir = self.ir;
        let o = ir.op(op);
        let expected = ir
            .parent_op(op)
            .and_then(|p| ir.op(p).attribute("function_type"))
            .and_then(Attribute::as_function);
        let Some(ft) = expected else {
            self.report(
                op,
                DiagnosticKind::ReturnMismatch,
                format!("'{}' is not inside an operation with a function_type", o.name()),
            );
            return;
        };
        let actual: Vec<&Attribute> = o.operands().iter().map(|&v| ir.value_type(v)).collect();
        if actual.len() != ft.results.len() || actual.iter().zip(&ft.results).any(|(a, b)| *a != b)
        {
            let shown: Vec<String> = actual.iter().map(|a| a.to_string()).collect();
            let wanted: Vec<String> = ft.results.iter().map(|a| a.to_string()).collect();
            self.report(
                op,
                DiagnosticKind::ReturnMismatch,
                format!(
                    "'{}' returns ({}) but the function results are ({})",
                    o.name(),
                    shown.join(", "),
                    wanted.join(", ")
                ),
            );
        }
    }

    fn check_entry_args(&mut self, op: OpId, types: &[Attribute]) {
        let ir = self.ir;
        for (i, &region) in ir.op(op).regions().iter().enumerate() {
            let ok = ir.region(region).entry().is_some_and(|entry| {
                let args = ir.block(entry).arguments();
                args.len() >= types.len()
                    && args.iter().zip(types).all(|(&a, t)| ir.value_type(a) == t)
            });
            if !ok {
                let wanted: Vec<String> = types.iter().map(|t| t.to_string()).collect();
                self.report(
                    op,
                    DiagnosticKind::RegionEntryArgs,
                    format!(
                        "region {i} of '{}' must have an entry block starting with arguments ({})",
                        ir.op(op).name(),
                        wanted.join(", ")
                    ),
                );
            }
        }
    }

    fn check_successors(&mut self, op: OpId) {
        let ir = self.ir;
        let o = ir.op(op);
        let region = o.parent().and_then(|b| ir.block(b).parent());
        for (i, &s) in o.successors().iter().enumerate() {
            if region.is_none() || ir.block(s).parent() != region {
                self.report(
                    op,
                    DiagnosticKind::SuccessorOutOfRegion,
                    format!(
                        "successor {i} of '{}' is not a block of the enclosing region",
                        o.name()
                    ),
                );
            }
        }
    }

    fn is_known_terminator(&self, op: OpId) -> bool {
        self.ctx
            .lookup(self.ir.op(op).name())
            .is_some_and(OpDefinition::is_terminator)
    }

    /// Unregistered operations may or may not be terminators.
    fn may_be_terminator(&self, op: OpId) -> bool {
        match self.ctx.lookup(self.ir.op(op).name()) {
            Some(def) => def.is_terminator(),
            None => true,
        }
    }

    fn check_region(&mut self, region: RegionId) {
        let ir = self.ir;
        let owner = ir.region(region).parent();
        let blocks = ir.region(region).blocks();
        let multi_block = blocks.len() > 1;
        for &block in blocks {
            let b = ir.block(block);
            if b.parent() != Some(region) {
                if let Some(owner) = owner {
                    self.report(
                        owner,
                        DiagnosticKind::Structural,
                        format!("{block} does not point back to its region"),
                    );
                }
            }
            for (index, &arg) in b.arguments().iter().enumerate() {
                if ir.value(arg).def() != (ValueDef::BlockArgument { block, index }) {
                    if let Some(owner) = owner {
                        self.report(
                            owner,
                            DiagnosticKind::Structural,
                            format!("argument {index} of {block} does not point back to it"),
                        );
                    }
                }
                if !ir.value_type(arg).is_type() {
                    if let Some(owner) = owner {
                        self.report(
                            owner,
                            DiagnosticKind::Structural,
                            format!("block argument has non-type '{}'", ir.value_type(arg)),
                        );
                    }
                }
                self.check_attribute_definitions(owner, ir.value_type(arg));
            }
            let mut cur = b.first_op();
            while let Some(op) = cur {
                let next = ir.op(op).next;
                if ir.op(op).parent() != Some(block) {
                    self.report(
                        op,
                        DiagnosticKind::Structural,
                        format!("'{}' does not point back to its block", ir.op(op).name()),
                    );
                }
                if next.is_some() && self.is_known_terminator(op) {
                    self.report(
                        op,
                        DiagnosticKind::TerminatorPlacement,
                        format!("terminator '{}' in non-final position", ir.op(op).name()),
                    );
                }
                cur = next;
            }
            if multi_block {
                match b.last_op() {
                    Some(last) if self.may_be_terminator(last) => {}
                    Some(last) => self.report(
                        last,
                        DiagnosticKind::MissingTerminator,
                        format!(
                            "block of a multi-block region must end with a terminator, found '{}'",
                            ir.op(last).name()
                        ),
                    ),
                    None => {
                        if let Some(owner) = owner {
                            self.report(
                                owner,
                                DiagnosticKind::MissingTerminator,
                                "empty block in a multi-block region has no terminator".into(),
                            );
                        }
                    }
                }
            }
        }
    }

    fn check_attributes(&mut self, op: OpId) {
        let ir = self.ir;
        let o = ir.op(op);
        for value in o.attributes().values() {
            self.check_attribute_definitions(Some(op), value);
        }
        for &r in o.results() {
            self.check_attribute_definitions(Some(op), ir.value_type(r));
        }
    }

    fn check_attribute_definitions(&mut self, op: Option<OpId>, attr: &Attribute) {
        let mut problems = Vec::new();
        attr.for_each_nested(&mut |a| {
            let Attribute::Parametrized(p) = a else { return };
            let Some(def) = self.ctx.attr_definition(&p.dialect, &p.mnemonic) else {
                problems.push(format!("unregistered attribute '{}'", p.full_name()));
                return;
            };
            if def.is_type != p.is_type {
                let kind = if def.is_type { "a type" } else { "an attribute" };
                problems.push(format!("'{}' is registered as {kind}", p.full_name()));
                return;
            }
            if def.parameters.len() != p.parameters.len() {
                problems.push(format!(
                    "'{}' expects {} parameters, got {}",
                    p.full_name(),
                    def.parameters.len(),
                    p.parameters.len()
                ));
                return;
            }
            let mut env = BindingEnv::new();
            for (i, (c, param)) in def.parameters.iter().zip(&p.parameters).enumerate() {
                if !eval_constraint(c, param, &mut env) {
                    problems.push(format!(
                        "parameter {i} of '{a}' violates constraint {c}: got {param}"
                    ));
                }
            }
        });
        if let Some(op) = op {
            for message in problems {
                self.report(op, DiagnosticKind::AttributeDefinition, message);
            }
        }
    }

    fn position(&mut self, op: OpId) -> u32 {
        if self.positions[op.index()] == u32::MAX {
            if let Some(block) = self.ir.op(op).parent() {
                if self.ordered_blocks.insert(block) {
                    for (i, o) in self.ir.block_ops(block).enumerate() {
                        self.positions[o.index()] = i as u32;
                    }
                }
            }
        }
        self.positions[op.index()]
    }

    fn dominates(&mut self, region: RegionId, a: BlockId, b: BlockId) -> bool {
        let ir = self.ir;
        let tree = self
            .dom_trees
            .entry(region)
            .or_insert_with(|| DominatorTree::for_region(ir, region));
        // Uses in unreachable blocks are not constrained.
        !tree.is_reachable(b) || tree.dominates(a, b)
    }

    fn check_operand_dominance(&mut self, user: OpId, index: usize, value: ValueId) {
        let ir = self.ir;
        let name = ir.op(user).name().to_string();
        let def = ir.value(value).def();
        if let ValueDef::OpResult { op, .. } = def {
            if ir.op(op).is_erased() {
                self.report(
                    user,
                    DiagnosticKind::Structural,
                    format!("operand {index} of '{name}' is a result of an erased operation"),
                );
                return;
            }
        }
        let def_region = ir.value_block(value).and_then(|b| ir.block(b).parent());
        let Some(def_region) = def_region else {
            self.report(
                user,
                DiagnosticKind::Dominance,
                format!("operand {index} of '{name}' is defined outside of any region"),
            );
            return;
        };
        let def_block = ir.value_block(value).expect("checked above");

        // Climb from the user to the ancestor that lives in the defining region.
        let mut cur = user;
        let cur_block = loop {
            let Some(block) = ir.op(cur).parent() else {
                self.report(
                    user,
                    DiagnosticKind::Dominance,
                    format!("operand {index} of '{name}' is not in scope"),
                );
                return;
            };
            let Some(region) = ir.block(block).parent() else {
                self.report(
                    user,
                    DiagnosticKind::Dominance,
                    format!("operand {index} of '{name}' is not in scope"),
                );
                return;
            };
            if region == def_region {
                break block;
            }
            let Some(parent) = ir.region(region).parent() else {
                self.report(
                    user,
                    DiagnosticKind::Dominance,
                    format!("operand {index} of '{name}' is not in scope"),
                );
                return;
            };
            if self.ctx.is_isolated(ir.op(parent).name()) {
                self.report(
                    user,
                    DiagnosticKind::Isolation,
                    format!(
                        "operand {index} of '{name}' is defined above isolated operation '{}'",
                        ir.op(parent).name()
                    ),
                );
                return;
            }
            cur = parent;
        };

        let ok = if cur_block == def_block {
            match def {
                ValueDef::BlockArgument { .. } => true,
                ValueDef::OpResult { op, .. } => {
                    op != cur && self.position(op) < self.position(cur)
                }
            }
        } else {
            self.dominates(def_region, def_block, cur_block)
        };
        if !ok {
            self.report(
                user,
                DiagnosticKind::Dominance,
                format!("operand {index} of '{name}' does not dominate its use"),
            );
        }
    }

    fn check_use_lists(&mut self) {
        let ir = self.ir;
        let counts = std::mem::take(&mut self.slot_counts);
        let mut values: Vec<(ValueId, usize)> = counts.into_iter().collect();
        values.sort();
        for (value, slots) in values {
            let uses = ir.value(value).uses();
            let mut seen: HashSet<Use> = HashSet::new();
            let mut all_inside = true;
            for u in uses {
                let user = ir.op(u.user);
                let consistent = !user.is_erased()
                    && user.operands().get(u.operand_index) == Some(&value)
                    && seen.insert(*u);
                if !consistent {
                    self.report(
                        u.user,
                        DiagnosticKind::Structural,
                        format!("use list of {value} is inconsistent with operand {}", u.operand_index),
                    );
                }
                all_inside &= self.in_walk[u.user.index()];
            }
            if all_inside && uses.len() != slots {
                let user = uses.first().map(|u| u.user).unwrap_or(self.root);
                self.report(
                    user,
                    DiagnosticKind::Structural,
                    format!(
                        "{value} is read by {slots} operand slots but records {} uses",
                        uses.len()
                    ),
                );
            }
        }
    }
}
