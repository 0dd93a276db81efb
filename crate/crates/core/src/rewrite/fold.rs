use super::{apply_patterns_greedily, RewriteError, RewritePattern, RewriteResult, Rewriter};
use crate::ir::{Attribute, Context, InsertPoint, IntegerAttr, Ir, OpId, OperationState, ValueId};

/// Folds `arith.addi` of two integer `arith.constant`s into one constant
/// holding the two's-complement sum, then erases constants left unused.
#[derive(Debug, Clone, Copy, Default)]
pub struct FoldAddi;

pub fn pattern_fold_addi() -> FoldAddi {
    FoldAddi
}

fn constant_value(ir: &Ir, v: ValueId) -> Option<(OpId, IntegerAttr)> {
    let op = ir.defining_op(v)?;
    let o = ir.op(op);
    if o.name() != "arith.constant" {
        return None;
    }
    let value = *o.attribute("value")?.as_integer()?;
    (value.ty().to_attribute() == *ir.value_type(v)).then_some((op, value))
}

impl RewritePattern for FoldAddi {
    fn name(&self) -> &str {
        "fold-addi"
    }

    fn match_and_rewrite(&self, op: OpId, rw: &mut Rewriter<'_>) -> bool {
        let ir = rw.ir();
        let o = ir.op(op);
        if o.name() != "arith.addi" || o.operands().len() != 2 || o.results().len() != 1 {
            return false;
        }
        let (Some((lhs_op, lhs)), Some((rhs_op, rhs))) = (
            constant_value(ir, o.operands()[0]),
            constant_value(ir, o.operands()[1]),
        ) else {
            return false;
        };
        let result = o.result(0);
        if lhs.ty() != rhs.ty() || lhs.ty().to_attribute() != *ir.value_type(result) {
            return false;
        }
        let sum = IntegerAttr::new(lhs.value() as i128 + rhs.value() as i128, lhs.ty());
        let state = OperationState::new("arith.constant")
            .attribute("value", Attribute::Integer(sum))
            .results([sum.ty().to_attribute()]);
        let folded = rw
            .create_operation(state, InsertPoint::Before(op))
            .expect("addi is attached");
        let new_value = rw.ir().op(folded).result(0);
        rw.replace_all_uses(result, new_value);
        rw.erase_operation(op).expect("uses were replaced");
        for c in [lhs_op, rhs_op] {
            let ir = rw.ir();
            if !ir.op(c).is_erased() && !ir.value(ir.op(c).result(0)).has_uses() {
                rw.erase_operation(c).expect("constant is unused");
            }
        }
        true
    }
}

pub fn pass_constant_fold(
    ir: &mut Ir,
    root: OpId,
    ctx: &Context,
    max_iterations: usize,
) -> Result<RewriteResult, RewriteError> {
    apply_patterns_greedily(ir, root, ctx, &[&FoldAddi], max_iterations)
}
