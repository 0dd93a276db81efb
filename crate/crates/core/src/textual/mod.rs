//! The MLIR generic textual format.
//!
//! Every operation is written as
//! `%r = "dialect.op"(%a, %b)[^succ] ({regions}) {attrs} : (types) -> types`.
//! Builtin attributes and types have shorthands (`42 : i32`, `[..]`, `{..}`,
//! `"text"`, `i32`, `f64`, `index`, function types); dialect attributes are
//! written `#dialect.name<..>` and dialect types `!dialect.name<..>`.
//! Attributes of dialects unknown to the context are kept verbatim.

mod lexer;
mod parser;
mod printer;

use std::collections::HashMap;

pub use lexer::{Lexer, LineIndex, Token, TokenKind};

use crate::ir::{Attribute, Context, Diagnostic, Ir, OpId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept operations without a registered definition.
    pub allow_unregistered: bool,
}

/// A parsed program: the arena, its top-level `builtin.module`, and the
/// source position of every parsed operation.
#[derive(Debug, Clone)]
pub struct Module {
    pub ir: Ir,
    pub top: OpId,
    pub locations: HashMap<OpId, (u32, u32)>,
}

/// Parses a module. Top-level operations are wrapped in a `builtin.module`
/// unless the input is a single explicit module.
pub fn parse_module(text: &str, ctx: &Context, opts: &ParseOptions) -> Result<Module, Diagnostic> {
    parser::Parser::new(text, ctx, *opts)?.parse_module()
}

pub fn parse_attribute(text: &str, ctx: &Context) -> Result<Attribute, Diagnostic> {
    parser::Parser::new(text, ctx, ParseOptions::default())?.parse_standalone_attribute()
}

/// Prints `root` and everything nested in it, followed by a newline.
///
/// Values are renumbered `%0, %1, ..` in textual order, restarting inside
/// isolated operations; blocks are labelled `^bb0, ^bb1, ..` per region.
pub fn print_module(ir: &Ir, root: OpId, ctx: &Context) -> String {
    printer::Printer::new(ir, ctx).print(root, 0)
}

pub fn print_attribute(attr: &Attribute) -> String {
    attr.to_string()
}
