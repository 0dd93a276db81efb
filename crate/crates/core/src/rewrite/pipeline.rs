use thiserror::Error;

use super::{pass_constant_fold, pass_dce, RewriteError, RewriteResult};
use crate::ir::{verify, Context, Diagnostic, Ir, OpId};

pub const PASS_NAMES: [&str; 2] = ["constant-fold", "dce"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error("unknown pass '{0}'")]
    UnknownPass(String),
    #[error("verification failed after pass '{pass}'")]
    Verification {
        pass: String,
        diagnostics: Vec<Diagnostic>,
    },
    #[error("pass '{pass}': {source}")]
    Rewrite {
        pass: String,
        source: RewriteError,
    },
}

/// Runs the named passes in order. Each pass may run up to ten sweeps per
/// operation in `root`. With `verify_each`, the IR is verified after every
/// pass and the pipeline stops at the first failure.
pub fn run_pass_pipeline(
    ir: &mut Ir,
    root: OpId,
    names: &[&str],
    ctx: &Context,
    verify_each: bool,
) -> Result<RewriteResult, PipelineError> {
    if let Some(bad) = names.iter().find(|n| !PASS_NAMES.contains(n)) {
        return Err(PipelineError::UnknownPass(bad.to_string()));
    }
    let mut total = RewriteResult {
        changed: false,
        converged: true,
        iterations: 0,
    };
    for &name in names {
        let cap = 10 * ir.count_ops(root).max(1);
        let r = match name {
            "constant-fold" => pass_constant_fold(ir, root, ctx, cap),
            _ => pass_dce(ir, root, ctx, cap),
        }
        .map_err(|source| PipelineError::Rewrite {
            pass: name.to_string(),
            source,
        })?;
        total.changed |= r.changed;
        total.converged &= r.converged;
        total.iterations += r.iterations;
        if verify_each {
            let diagnostics = verify(ir, root, ctx);
            if !diagnostics.is_empty() {
                return Err(PipelineError::Verification {
                    pass: name.to_string(),
                    diagnostics,
                });
            }
        }
    }
    Ok(total)
}
