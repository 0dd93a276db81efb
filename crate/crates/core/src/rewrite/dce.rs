use super::{apply_patterns_greedily, RewriteError, RewritePattern, RewriteResult, Rewriter};
use crate::ir::{Context, Ir, OpId};

/// Erases pure operations whose results are all unused. Unregistered
/// operations are assumed to have side effects.
#[derive(Debug, Clone, Copy, Default)]
pub struct DeadCode;

impl RewritePattern for DeadCode {
    fn name(&self) -> &str {
        "dce"
    }

    fn match_and_rewrite(&self, op: OpId, rw: &mut Rewriter<'_>) -> bool {
        let ir = rw.ir();
        let o = ir.op(op);
        let dead = o.parent().is_some()
            && rw
                .ctx()
                .lookup(o.name())
                .is_some_and(|d| d.is_pure() && !d.is_terminator())
            && o.results().iter().all(|&r| !ir.value(r).has_uses());
        dead && rw.erase_operation(op).is_ok()
    }
}

pub fn pass_dce(
    ir: &mut Ir,
    root: OpId,
    ctx: &Context,
    max_iterations: usize,
) -> Result<RewriteResult, RewriteError> {
    apply_patterns_greedily(ir, root, ctx, &[&DeadCode], max_iterations)
}
