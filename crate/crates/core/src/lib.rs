//! An SSA compiler IR that reads and writes the MLIR generic textual format.
//!
//! Dialects are registered either natively ([`builtin`]) or at runtime from
//! IRDL programs ([`irdl`]). A module is parsed with [`textual::parse_module`],
//! checked with [`ir::verify`], transformed with the passes in [`rewrite`],
//! and printed back with [`textual::print_module`].
//!
//! ```
//! use sidekick::ir::{verify, Context};
//! use sidekick::textual::{parse_module, print_module, ParseOptions};
//!
//! let ctx = Context::with_builtins();
//! let src = r#"%0 = "arith.constant"() {value = 42 : i32} : () -> i32"#;
//! let module = parse_module(src, &ctx, &ParseOptions::default()).unwrap();
//! assert!(verify(&module.ir, module.top, &ctx).is_empty());
//! assert!(print_module(&module.ir, module.top, &ctx).contains("{value = 42 : i32}"));
//! ```

pub mod builtin;
pub mod cli;
pub mod ir;
pub mod irdl;
pub mod rewrite;
pub mod textual;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/textual-format.md")]
    mod textual_format {}
    #[doc = include_str!("../../../book/src/dialects.md")]
    mod dialects {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/rewriting.md")]
    mod rewriting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
