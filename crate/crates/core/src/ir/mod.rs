//! The in-memory IR.
//!
//! All entities of a program live in one [`Ir`] arena and are referred to by
//! typed ids. Operations inside a block form an intrusive doubly-linked list,
//! so insertion and erasure are constant time. Every operand slot is mirrored
//! by a [`Use`] in the used value's use list.

mod attribute;
mod context;
mod diagnostic;
pub mod dominance;
mod equality;
mod verify;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

pub use attribute::{
    wrap_to_width, Attribute, DictionaryAttr, FloatAttr, FloatType, FunctionType, IntLikeType,
    IntegerAttr, IntegerType, OpaqueAttr, ParametrizedAttr,
};
pub(crate) use attribute::{is_bare_identifier, write_escaped_string};
pub use context::{
    AttrDefinition, Context, ContextError, DialectDefinition, OpDefinition, SlotConstraints, Trait,
};
pub use diagnostic::{Diagnostic, DiagnosticKind, Location};
pub use equality::structural_equals;
pub use verify::verify;

macro_rules! entity_id {
    ($(#[$m:meta])* $name:ident, $prefix:literal) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

entity_id!(
    /// Identity of an operation.
    OpId, "op"
);
entity_id!(
    /// Identity of a block.
    BlockId, "block"
);
entity_id!(
    /// Identity of a region.
    RegionId, "region"
);
entity_id!(
    /// Identity of an SSA value.
    ValueId, "value"
);

/// Where a value is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueDef {
    OpResult { op: OpId, index: usize },
    BlockArgument { block: BlockId, index: usize },
}

/// One operand slot reading a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Use {
    pub user: OpId,
    pub operand_index: usize,
}

#[derive(Debug, Clone)]
pub struct ValueData {
    ty: Attribute,
    def: ValueDef,
    uses: Vec<Use>,
}

impl ValueData {
    pub fn ty(&self) -> &Attribute {
        &self.ty
    }

    pub fn def(&self) -> ValueDef {
        self.def
    }

    pub fn uses(&self) -> &[Use] {
        &self.uses
    }

    pub fn has_uses(&self) -> bool {
        !self.uses.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Operation {
    name: String,
    operands: Vec<ValueId>,
    results: Vec<ValueId>,
    attributes: BTreeMap<String, Attribute>,
    regions: Vec<RegionId>,
    successors: Vec<BlockId>,
    parent: Option<BlockId>,
    prev: Option<OpId>,
    next: Option<OpId>,
    erased: bool,
}

impl Operation {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The part of the name before the first `.`.
    pub fn dialect(&self) -> &str {
        self.name.split_once('.').map_or("", |(d, _)| d)
    }

    pub fn operands(&self) -> &[ValueId] {
        &self.operands
    }

    pub fn results(&self) -> &[ValueId] {
        &self.results
    }

    pub fn result(&self, index: usize) -> ValueId {
        self.results[index]
    }

    pub fn attributes(&self) -> &BTreeMap<String, Attribute> {
        &self.attributes
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.get(name)
    }

    pub fn regions(&self) -> &[RegionId] {
        &self.regions
    }

    pub fn successors(&self) -> &[BlockId] {
        &self.successors
    }

    pub fn parent(&self) -> Option<BlockId> {
        self.parent
    }

    pub fn is_erased(&self) -> bool {
        self.erased
    }
}

#[derive(Debug, Clone, Default)]
pub struct Block {
    arguments: Vec<ValueId>,
    first: Option<OpId>,
    last: Option<OpId>,
    len: usize,
    parent: Option<RegionId>,
}

impl Block {
    pub fn arguments(&self) -> &[ValueId] {
        &self.arguments
    }

    pub fn parent(&self) -> Option<RegionId> {
        self.parent
    }

    pub fn first_op(&self) -> Option<OpId> {
        self.first
    }

    pub fn last_op(&self) -> Option<OpId> {
        self.last
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

#[derive(Debug, Clone, Default)]
pub struct Region {
    blocks: Vec<BlockId>,
    parent: Option<OpId>,
}

impl Region {
    pub fn blocks(&self) -> &[BlockId] {
        &self.blocks
    }

    pub fn entry(&self) -> Option<BlockId> {
        self.blocks.first().copied()
    }

    pub fn parent(&self) -> Option<OpId> {
        self.parent
    }
}

/// Everything needed to create an operation.
#[derive(Debug, Clone, Default)]
pub struct OperationState {
    pub name: String,
    pub operands: Vec<ValueId>,
    pub result_types: Vec<Attribute>,
    pub attributes: BTreeMap<String, Attribute>,
    pub regions: Vec<RegionId>,
    pub successors: Vec<BlockId>,
}

impl OperationState {
    pub fn new(name: impl Into<String>) -> Self {
        OperationState {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn operands(mut self, operands: impl IntoIterator<Item = ValueId>) -> Self {
        self.operands.extend(operands);
        self
    }

    pub fn results(mut self, types: impl IntoIterator<Item = Attribute>) -> Self {
        self.result_types.extend(types);
        self
    }

    pub fn attribute(mut self, name: impl Into<String>, value: Attribute) -> Self {
        self.attributes.insert(name.into(), value);
        self
    }

    pub fn region(mut self, region: RegionId) -> Self {
        self.regions.push(region);
        self
    }

    pub fn successor(mut self, block: BlockId) -> Self {
        self.successors.push(block);
        self
    }
}

/// Position for [`Ir::insert_operation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertPoint {
    FrontOf(BlockId),
    BackOf(BlockId),
    Before(OpId),
    After(OpId),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IrError {
    #[error("operation '{name}' is already attached to a block")]
    AlreadyAttached { name: String },
    #[error("insertion anchor '{name}' is not attached to a block")]
    DetachedAnchor { name: String },
    #[error("cannot erase '{name}': result {index} has uses (used by '{user}')")]
    ResultHasUses {
        name: String,
        index: usize,
        user: String,
    },
    #[error("cannot erase '{name}': a nested value is used outside of it")]
    NestedValueEscapes { name: String },
    #[error("operation '{name}' has been erased")]
    Erased { name: String },
}

/// Arena holding one program graph.
#[derive(Debug, Clone, Default)]
pub struct Ir {
    ops: Vec<Operation>,
    blocks: Vec<Block>,
    regions: Vec<Region>,
    values: Vec<ValueData>,
}

impl Ir {
    pub fn new() -> Self {
        Ir::default()
    }

    pub fn op(&self, op: OpId) -> &Operation {
        &self.ops[op.index()]
    }

    pub fn block(&self, block: BlockId) -> &Block {
        &self.blocks[block.index()]
    }

    pub fn region(&self, region: RegionId) -> &Region {
        &self.regions[region.index()]
    }

    pub fn value(&self, value: ValueId) -> &ValueData {
        &self.values[value.index()]
    }

    pub fn value_type(&self, value: ValueId) -> &Attribute {
        &self.values[value.index()].ty
    }

    /// Number of operation slots ever allocated, including erased ones.
    pub fn op_capacity(&self) -> usize {
        self.ops.len()
    }

    pub fn value_capacity(&self) -> usize {
        self.values.len()
    }

    /// The operation defining `value`, if it is an operation result.
    pub fn defining_op(&self, value: ValueId) -> Option<OpId> {
        match self.value(value).def {
            ValueDef::OpResult { op, .. } => Some(op),
            ValueDef::BlockArgument { .. } => None,
        }
    }

    /// The block a value is defined in: the argument's block or the
    /// defining operation's parent.
    pub fn value_block(&self, value: ValueId) -> Option<BlockId> {
        match self.value(value).def {
            ValueDef::OpResult { op, .. } => self.op(op).parent,
            ValueDef::BlockArgument { block, .. } => Some(block),
        }
    }

    /// The operation owning the region that contains `op`.
    pub fn parent_op(&self, op: OpId) -> Option<OpId> {
        let block = self.op(op).parent?;
        self.block_parent_op(block)
    }

    pub fn block_parent_op(&self, block: BlockId) -> Option<OpId> {
        let region = self.block(block).parent?;
        self.region(region).parent
    }

    pub fn next_op(&self, op: OpId) -> Option<OpId> {
        self.op(op).next
    }

    pub fn prev_op(&self, op: OpId) -> Option<OpId> {
        self.op(op).prev
    }

    /// Operations of a block in order.
    pub fn block_ops(&self, block: BlockId) -> BlockOps<'_> {
        BlockOps {
            ir: self,
            next: self.block(block).first,
        }
    }

    fn new_value(&mut self, ty: Attribute, def: ValueDef) -> ValueId {
        let id = ValueId(self.values.len() as u32);
        self.values.push(ValueData {
            ty,
            def,
            uses: Vec::new(),
        });
        id
    }

    pub fn create_region(&mut self) -> RegionId {
        let id = RegionId(self.regions.len() as u32);
        self.regions.push(Region::default());
        id
    }

    /// Creates a detached block with one argument per type.
    pub fn create_block(&mut self, arg_types: impl IntoIterator<Item = Attribute>) -> BlockId {
        let id = BlockId(self.blocks.len() as u32);
        self.blocks.push(Block::default());
        for ty in arg_types {
            self.add_block_argument(id, ty);
        }
        id
    }

    pub fn add_block_argument(&mut self, block: BlockId, ty: Attribute) -> ValueId {
        let index = self.block(block).arguments.len();
        let value = self.new_value(ty, ValueDef::BlockArgument { block, index });
        self.blocks[block.index()].arguments.push(value);
        value
    }

    /// Appends a detached block to a region.
    ///
    /// # Panics
    /// If the block already belongs to a region.
    pub fn append_block(&mut self, region: RegionId, block: BlockId) {
        assert!(
            self.block(block).parent.is_none(),
            "{block} already belongs to a region"
        );
        self.blocks[block.index()].parent = Some(region);
        self.regions[region.index()].blocks.push(block);
    }

    /// Creates a detached operation. Results get fresh values; each operand
    /// slot is recorded in the operand's use list.
    ///
    /// # Panics
    /// If one of the regions is already owned by another operation.
    pub fn create_operation(&mut self, state: OperationState) -> OpId {
        let id = OpId(self.ops.len() as u32);
        for &region in &state.regions {
            assert!(
                self.region(region).parent.is_none(),
                "{region} is already owned by an operation"
            );
            self.regions[region.index()].parent = Some(id);
        }
        for (operand_index, &value) in state.operands.iter().enumerate() {
            self.values[value.index()].uses.push(Use {
                user: id,
                operand_index,
            });
        }
        let results = state
            .result_types
            .into_iter()
            .enumerate()
            .map(|(index, ty)| self.new_value(ty, ValueDef::OpResult { op: id, index }))
            .collect();
        self.ops.push(Operation {
            name: state.name,
            operands: state.operands,
            results,
            attributes: state.attributes,
            regions: state.regions,
            successors: state.successors,
            parent: None,
            prev: None,
            next: None,
            erased: false,
        });
        id
    }

    pub fn insert_operation(&mut self, op: OpId, at: InsertPoint) -> Result<(), IrError> {
        if self.op(op).erased {
            return Err(IrError::Erased {
                name: self.op(op).name.clone(),
            });
        }
        if self.op(op).parent.is_some() {
            return Err(IrError::AlreadyAttached {
                name: self.op(op).name.clone(),
            });
        }
        let (block, prev, next) = match at {
            InsertPoint::FrontOf(block) => (block, None, self.block(block).first),
            InsertPoint::BackOf(block) => (block, self.block(block).last, None),
            InsertPoint::Before(anchor) | InsertPoint::After(anchor) => {
                let a = self.op(anchor);
                let Some(block) = a.parent else {
                    return Err(IrError::DetachedAnchor {
                        name: a.name.clone(),
                    });
                };
                if matches!(at, InsertPoint::Before(_)) {
                    (block, a.prev, Some(anchor))
                } else {
                    (block, Some(anchor), a.next)
                }
            }
        };
        {
            let o = &mut self.ops[op.index()];
            o.parent = Some(block);
            o.prev = prev;
            o.next = next;
        }
        match prev {
            Some(p) => self.ops[p.index()].next = Some(op),
            None => self.blocks[block.index()].first = Some(op),
        }
        match next {
            Some(n) => self.ops[n.index()].prev = Some(op),
            None => self.blocks[block.index()].last = Some(op),
        }
        self.blocks[block.index()].len += 1;
        Ok(())
    }

    /// Unlinks an operation from its block without erasing it.
    pub fn detach_operation(&mut self, op: OpId) {
        let Some(block) = self.op(op).parent else {
            return;
        };
        let (prev, next) = (self.op(op).prev, self.op(op).next);
        match prev {
            Some(p) => self.ops[p.index()].next = next,
            None => self.blocks[block.index()].first = next,
        }
        match next {
            Some(n) => self.ops[n.index()].prev = prev,
            None => self.blocks[block.index()].last = prev,
        }
        self.blocks[block.index()].len -= 1;
        let o = &mut self.ops[op.index()];
        o.parent = None;
        o.prev = None;
        o.next = None;
    }

    fn remove_use(&mut self, value: ValueId, user: OpId, operand_index: usize) {
        let uses = &mut self.values[value.index()].uses;
        if let Some(pos) = uses
            .iter()
            .position(|u| u.user == user && u.operand_index == operand_index)
        {
            uses.swap_remove(pos);
        }
    }

    /// Rewrites operand slot `index` of `op` to read `value`.
    pub fn set_operand(&mut self, op: OpId, index: usize, value: ValueId) {
        let old = self.op(op).operands[index];
        if old == value {
            return;
        }
        self.remove_use(old, op, index);
        self.ops[op.index()].operands[index] = value;
        self.values[value.index()].uses.push(Use {
            user: op,
            operand_index: index,
        });
    }

    pub fn set_successor(&mut self, op: OpId, index: usize, block: BlockId) {
        self.ops[op.index()].successors[index] = block;
    }

    pub fn set_attribute(&mut self, op: OpId, name: impl Into<String>, value: Attribute) {
        self.ops[op.index()].attributes.insert(name.into(), value);
    }

    pub fn remove_attribute(&mut self, op: OpId, name: &str) -> Option<Attribute> {
        self.ops[op.index()].attributes.remove(name)
    }

    /// Redirects every use of `old` to `new` and returns how many operand
    /// slots were rewritten.
    pub fn replace_all_uses(&mut self, old: ValueId, new: ValueId) -> usize {
        if old == new {
            return 0;
        }
        let uses = std::mem::take(&mut self.values[old.index()].uses);
        for u in &uses {
            self.ops[u.user.index()].operands[u.operand_index] = new;
        }
        let count = uses.len();
        self.values[new.index()].uses.extend(uses);
        count
    }

    /// Removes an operation whose results are unused, together with
    /// everything nested in its regions.
    pub fn erase_operation(&mut self, op: OpId) -> Result<(), IrError> {
        let o = self.op(op);
        if o.erased {
            return Err(IrError::Erased {
                name: o.name.clone(),
            });
        }
        for (index, &result) in o.results.iter().enumerate() {
            if let Some(u) = self.value(result).uses.first() {
                return Err(IrError::ResultHasUses {
                    name: o.name.clone(),
                    index,
                    user: self.op(u.user).name.clone(),
                });
            }
        }
        let nested = self.collect_preorder(op);
        if nested.len() > 1 {
            let inside: HashSet<OpId> = nested.iter().copied().collect();
            let escapes = nested[1..].iter().any(|&n| {
                self.op(n)
                    .results
                    .iter()
                    .flat_map(|&r| &self.value(r).uses)
                    .any(|u| !inside.contains(&u.user))
            }) || self.nested_blocks(op).any(|b| {
                self.block(b)
                    .arguments
                    .iter()
                    .flat_map(|&a| &self.value(a).uses)
                    .any(|u| !inside.contains(&u.user))
            });
            if escapes {
                return Err(IrError::NestedValueEscapes {
                    name: self.op(op).name.clone(),
                });
            }
        }
        self.detach_operation(op);
        for &n in &nested {
            let operands = std::mem::take(&mut self.ops[n.index()].operands);
            for (i, v) in operands.into_iter().enumerate() {
                self.remove_use(v, n, i);
            }
            self.ops[n.index()].erased = true;
        }
        Ok(())
    }

    fn nested_blocks(&self, op: OpId) -> impl Iterator<Item = BlockId> + '_ {
        let mut blocks = Vec::new();
        self.walk_preorder(op, &mut |o| {
            for &r in self.op(o).regions() {
                blocks.extend_from_slice(self.region(r).blocks());
            }
        });
        blocks.into_iter()
    }

    /// Visits `root`, then its regions, blocks, and operations in order,
    /// recursively.
    pub fn walk_preorder(&self, root: OpId, visit: &mut dyn FnMut(OpId)) {
        let mut stack = vec![root];
        while let Some(op) = stack.pop() {
            visit(op);
            // Push children in reverse so they pop in order.
            for &region in self.op(op).regions.iter().rev() {
                for &block in self.region(region).blocks.iter().rev() {
                    let mut cur = self.block(block).last;
                    while let Some(child) = cur {
                        stack.push(child);
                        cur = self.op(child).prev;
                    }
                }
            }
        }
    }

    pub fn collect_preorder(&self, root: OpId) -> Vec<OpId> {
        let mut out = Vec::new();
        self.walk_preorder(root, &mut |op| out.push(op));
        out
    }

    /// Number of operations nested under `root`, including `root`.
    pub fn count_ops(&self, root: OpId) -> usize {
        let mut n = 0;
        self.walk_preorder(root, &mut |_| n += 1);
        n
    }

    /// Whether `ancestor` is `op` or contains it through regions.
    pub fn is_ancestor(&self, ancestor: OpId, mut op: OpId) -> bool {
        loop {
            if op == ancestor {
                return true;
            }
            match self.parent_op(op) {
                Some(p) => op = p,
                None => return false,
            }
        }
    }
}

pub struct BlockOps<'a> {
    ir: &'a Ir,
    next: Option<OpId>,
}

impl Iterator for BlockOps<'_> {
    type Item = OpId;

    fn next(&mut self) -> Option<OpId> {
        let cur = self.next?;
        self.next = self.ir.op(cur).next;
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i32_ty() -> Attribute {
        Attribute::int(32)
    }

    fn constant(ir: &mut Ir, v: i128) -> OpId {
        let value = IntegerAttr::new(v, IntLikeType::Integer(IntegerType::new(32).unwrap()));
        ir.create_operation(
            OperationState::new("arith.constant")
                .attribute("value", value.into())
                .results([i32_ty()]),
        )
    }

    fn single_block(ir: &mut Ir) -> (OpId, BlockId) {
        let region = ir.create_region();
        let block = ir.create_block([]);
        ir.append_block(region, block);
        let module = ir.create_operation(OperationState::new("builtin.module").region(region));
        (module, block)
    }

    #[test]
    fn create_records_uses_per_slot() {
        let mut ir = Ir::new();
        let block = ir.create_block([i32_ty(), i32_ty()]);
        let (a, b) = (ir.block(block).arguments()[0], ir.block(block).arguments()[1]);
        let add = ir.create_operation(
            OperationState::new("arith.addi")
                .operands([a, b])
                .results([i32_ty()]),
        );
        assert_eq!(ir.value(a).uses(), &[Use { user: add, operand_index: 0 }]);
        assert_eq!(ir.value(b).uses(), &[Use { user: add, operand_index: 1 }]);
        assert!(ir.op(add).parent().is_none());
        let res = ir.op(add).result(0);
        assert_eq!(ir.value(res).def(), ValueDef::OpResult { op: add, index: 0 });
        assert!(!ir.value(res).has_uses());
    }

    #[test]
    fn empty_operation_has_nothing_recorded() {
        let mut ir = Ir::new();
        let op = ir.create_operation(OperationState::new("test.noop"));
        assert!(ir.op(op).operands().is_empty());
        assert!(ir.op(op).results().is_empty());
        assert_eq!(ir.value_capacity(), 0);
    }

    #[test]
    fn insertion_positions() {
        let mut ir = Ir::new();
        let (_, block) = single_block(&mut ir);
        let b = constant(&mut ir, 1);
        ir.insert_operation(b, InsertPoint::BackOf(block)).unwrap();
        assert_eq!(ir.block(block).len(), 1);
        let a = constant(&mut ir, 0);
        ir.insert_operation(a, InsertPoint::Before(b)).unwrap();
        let c = constant(&mut ir, 2);
        ir.insert_operation(c, InsertPoint::After(b)).unwrap();
        let z = constant(&mut ir, 3);
        ir.insert_operation(z, InsertPoint::FrontOf(block)).unwrap();
        assert_eq!(ir.block_ops(block).collect::<Vec<_>>(), vec![z, a, b, c]);
        assert_eq!(
            ir.insert_operation(a, InsertPoint::BackOf(block)),
            Err(IrError::AlreadyAttached { name: "arith.constant".into() })
        );
        let d = constant(&mut ir, 4);
        let e = constant(&mut ir, 5);
        assert!(matches!(
            ir.insert_operation(d, InsertPoint::After(e)),
            Err(IrError::DetachedAnchor { .. })
        ));
    }

    #[test]
    fn replace_all_uses_moves_every_slot() {
        let mut ir = Ir::new();
        let (_, block) = single_block(&mut ir);
        let c = constant(&mut ir, 1);
        let d = constant(&mut ir, 2);
        ir.insert_operation(c, InsertPoint::BackOf(block)).unwrap();
        ir.insert_operation(d, InsertPoint::BackOf(block)).unwrap();
        let (cv, dv) = (ir.op(c).result(0), ir.op(d).result(0));
        let add = ir.create_operation(
            OperationState::new("arith.addi")
                .operands([cv, cv])
                .results([i32_ty()]),
        );
        ir.insert_operation(add, InsertPoint::BackOf(block)).unwrap();
        assert_eq!(ir.replace_all_uses(cv, dv), 2);
        assert_eq!(ir.op(add).operands(), &[dv, dv]);
        assert_eq!(ir.value(dv).uses().len(), 2);
        assert!(!ir.value(cv).has_uses());
        assert_eq!(ir.replace_all_uses(cv, dv), 0);
    }

    #[test]
    fn erase_requires_unused_results() {
        let mut ir = Ir::new();
        let (_, block) = single_block(&mut ir);
        let c = constant(&mut ir, 1);
        ir.insert_operation(c, InsertPoint::BackOf(block)).unwrap();
        let cv = ir.op(c).result(0);
        let add = ir.create_operation(
            OperationState::new("arith.addi")
                .operands([cv, cv])
                .results([i32_ty()]),
        );
        ir.insert_operation(add, InsertPoint::BackOf(block)).unwrap();
        let err = ir.erase_operation(c).unwrap_err();
        assert!(err.to_string().contains("result 0 has uses"), "{err}");
        ir.erase_operation(add).unwrap();
        assert!(!ir.value(cv).has_uses());
        assert_eq!(ir.block(block).len(), 1);
        ir.erase_operation(c).unwrap();
        assert!(ir.block(block).is_empty());
    }

    #[test]
    fn erase_removes_nested_regions() {
        let mut ir = Ir::new();
        let (module, block) = single_block(&mut ir);
        let cond = ir.create_operation(
            OperationState::new("test.cond").results([Attribute::int(1)]),
        );
        ir.insert_operation(cond, InsertPoint::BackOf(block)).unwrap();
        let cv = ir.op(cond).result(0);
        let mut regions = Vec::new();
        for _ in 0..2 {
            let r = ir.create_region();
            let b = ir.create_block([]);
            ir.append_block(r, b);
            let k = constant(&mut ir, 7);
            ir.insert_operation(k, InsertPoint::BackOf(b)).unwrap();
            let kv = ir.op(k).result(0);
            let y = ir.create_operation(OperationState::new("scf.yield").operands([kv]));
            ir.insert_operation(y, InsertPoint::BackOf(b)).unwrap();
            regions.push(r);
        }
        let mut state = OperationState::new("scf.if").operands([cv]).results([i32_ty()]);
        state.regions = regions;
        let if_op = ir.create_operation(state);
        ir.insert_operation(if_op, InsertPoint::BackOf(block)).unwrap();
        let before = ir.count_ops(module);
        assert_eq!(before, 1 + 1 + 1 + 4);
        ir.erase_operation(if_op).unwrap();
        assert_eq!(ir.count_ops(module), before - 5);
        assert!(!ir.value(cv).has_uses());
    }

    #[test]
    fn preorder_visits_regions_in_order() {
        let mut ir = Ir::new();
        let mut regions = Vec::new();
        let mut inner = Vec::new();
        for _ in 0..2 {
            let r = ir.create_region();
            let b = ir.create_block([]);
            ir.append_block(r, b);
            let k = constant(&mut ir, 0);
            ir.insert_operation(k, InsertPoint::BackOf(b)).unwrap();
            inner.push(k);
            regions.push(r);
        }
        let mut state = OperationState::new("scf.if");
        state.regions = regions;
        let if_op = ir.create_operation(state);
        assert_eq!(ir.collect_preorder(if_op), vec![if_op, inner[0], inner[1]]);
        let lone = ir.create_operation(OperationState::new("test.noop"));
        assert_eq!(ir.count_ops(lone), 1);
    }
}
