//! Pattern rewriting: a greedy worklist driver and the bundled passes.
//!
//! A pattern inspects one operation and, if it applies, mutates the IR
//! through a [`Rewriter`], which keeps the driver's worklist up to date.

mod dce;
mod fold;
mod pipeline;

pub use dce::{pass_dce, DeadCode};
pub use fold::{pass_constant_fold, pattern_fold_addi, FoldAddi};
pub use pipeline::{run_pass_pipeline, PipelineError, PASS_NAMES};

use thiserror::Error;

use crate::ir::{Context, InsertPoint, Ir, IrError, OpId, OperationState, ValueId};

pub trait RewritePattern {
    fn name(&self) -> &str;

    /// Tries to rewrite `op`. Returns whether anything changed; when it
    /// returns false the IR must be untouched.
    fn match_and_rewrite(&self, op: OpId, rw: &mut Rewriter<'_>) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RewriteResult {
    pub changed: bool,
    /// A final full sweep applied no pattern.
    pub converged: bool,
    /// Number of sweeps over the IR.
    pub iterations: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("pattern '{pattern}' reported {claimed} on '{op}' but {actual}")]
    ProtocolViolation {
        pattern: String,
        op: String,
        claimed: &'static str,
        actual: &'static str,
    },
    #[error("max_iterations must be at least 1")]
    NoIterations,
}

/// Mutation handle given to patterns.
pub struct Rewriter<'a> {
    ir: &'a mut Ir,
    ctx: &'a Context,
    worklist: Vec<OpId>,
    queued: Vec<bool>,
    mutations: usize,
}

impl<'a> Rewriter<'a> {
    fn new(ir: &'a mut Ir, ctx: &'a Context) -> Self {
        Rewriter {
            ir,
            ctx,
            worklist: Vec::new(),
            queued: Vec::new(),
            mutations: 0,
        }
    }

    pub fn ir(&self) -> &Ir {
        self.ir
    }

    pub fn ctx(&self) -> &Context {
        self.ctx
    }

    pub fn enqueue(&mut self, op: OpId) {
        if self.queued.len() <= op.index() {
            self.queued.resize(self.ir.op_capacity().max(op.index() + 1), false);
        }
        if !self.queued[op.index()] {
            self.queued[op.index()] = true;
            self.worklist.push(op);
        }
    }

    fn pop(&mut self) -> Option<OpId> {
        let op = self.worklist.pop()?;
        self.queued[op.index()] = false;
        Some(op)
    }

    /// Creates an operation at `at` and queues it.
    pub fn create_operation(
        &mut self,
        state: OperationState,
        at: InsertPoint,
    ) -> Result<OpId, IrError> {
        let op = self.ir.create_operation(state);
        self.ir.insert_operation(op, at)?;
        self.mutations += 1;
        self.enqueue(op);
        Ok(op)
    }

    /// Redirects every use of `old` to `new` and queues the affected users.
    pub fn replace_all_uses(&mut self, old: ValueId, new: ValueId) -> usize {
        let users: Vec<OpId> = self.ir.value(old).uses().iter().map(|u| u.user).collect();
        let n = self.ir.replace_all_uses(old, new);
        if n > 0 {
            self.mutations += 1;
        }
        for u in users {
            self.enqueue(u);
        }
        n
    }

    /// Erases `op` and queues the operations defining its operands.
    pub fn erase_operation(&mut self, op: OpId) -> Result<(), IrError> {
        let producers: Vec<OpId> = self
            .ir
            .op(op)
            .operands()
            .iter()
            .filter_map(|&v| self.ir.defining_op(v))
            .collect();
        self.ir.erase_operation(op)?;
        self.mutations += 1;
        for p in producers {
            if !self.ir.op(p).is_erased() {
                self.enqueue(p);
            }
        }
        Ok(())
    }
}

/// Applies `patterns` until a full sweep changes nothing or `max_iterations`
/// sweeps have run. Each sweep seeds the worklist with every operation under
/// `root` in preorder; operations touched by a rewrite are re-queued.
pub fn apply_patterns_greedily(
    ir: &mut Ir,
    root: OpId,
    ctx: &Context,
    patterns: &[&dyn RewritePattern],
    max_iterations: usize,
) -> Result<RewriteResult, RewriteError> {
    if max_iterations == 0 {
        return Err(RewriteError::NoIterations);
    }
    let mut result = RewriteResult::default();
    let mut rw = Rewriter::new(ir, ctx);
    let budget = max_iterations.saturating_mul(rw.ir.count_ops(root) + 1);
    let mut applications = 0usize;
    loop {
        result.iterations += 1;
        let mut changed = false;
        let seed = rw.ir.collect_preorder(root);
        for &op in seed.iter().rev() {
            rw.enqueue(op);
        }
        while let Some(op) = rw.pop() {
            if rw.ir.op(op).is_erased() || op == root {
                continue;
            }
            for p in patterns {
                let before = rw.mutations;
                let applied = p.match_and_rewrite(op, &mut rw);
                let mutated = rw.mutations != before;
                if applied != mutated {
                    let name = rw.ir.op(op).name().to_string();
                    return Err(RewriteError::ProtocolViolation {
                        pattern: p.name().to_string(),
                        op: name,
                        claimed: if applied { "success" } else { "failure" },
                        actual: if mutated { "mutated the IR" } else { "changed nothing" },
                    });
                }
                if applied {
                    changed = true;
                    applications += 1;
                    break;
                }
            }
            if applications > budget {
                rw.worklist.clear();
                result.changed = true;
                return Ok(result);
            }
        }
        result.changed |= changed;
        if !changed {
            result.converged = true;
            return Ok(result);
        }
        if result.iterations >= max_iterations {
            return Ok(result);
        }
    }
}
