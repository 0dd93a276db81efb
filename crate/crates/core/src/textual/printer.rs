use std::fmt::Write;

use crate::ir::{
    is_bare_identifier, write_escaped_string, BlockId, Context, FunctionType, Ir, OpId, RegionId,
    ValueId,
};

const UNNAMED: u32 = u32::MAX;

pub(super) struct Printer<'a> {
    ir: &'a Ir,
    ctx: &'a Context,
    names: Vec<u32>,
    out: String,
}

impl<'a> Printer<'a> {
    pub(super) fn new(ir: &'a Ir, ctx: &'a Context) -> Self {
        Printer {
            ir,
            ctx,
            names: vec![UNNAMED; ir.value_capacity()],
            out: String::new(),
        }
    }

    pub(super) fn print(mut self, root: OpId, indent: usize) -> String {
        let mut next = 0;
        self.number(root, &mut next);
        self.op(root, indent);
        self.out
    }

    /// Numbers values in textual order; isolated operations restart at 0.
    fn number(&mut self, op: OpId, next: &mut u32) {
        let ir = self.ir;
        let o = ir.op(op);
        for &r in o.results() {
            self.names[r.index()] = *next;
            *next += 1;
        }
        let mut fresh = 0;
        let counter = if self.ctx.is_isolated(o.name()) {
            &mut fresh
        } else {
            next
        };
        for &region in o.regions() {
            for &block in ir.region(region).blocks() {
                for &arg in ir.block(block).arguments() {
                    self.names[arg.index()] = *counter;
                    *counter += 1;
                }
                for child in ir.block_ops(block) {
                    self.number(child, counter);
                }
            }
        }
    }

    fn value(&mut self, v: ValueId) {
        match self.names.get(v.index()) {
            Some(&n) if n != UNNAMED => write!(self.out, "%{n}").unwrap(),
            _ => write!(self.out, "%<unknown{}>", v.index()).unwrap(),
        }
    }

    fn label(&mut self, block: BlockId) {
        let ir = self.ir;
        let index = ir
            .block(block)
            .parent()
            .and_then(|r| ir.region(r).blocks().iter().position(|&b| b == block));
        match index {
            Some(i) => write!(self.out, "^bb{i}").unwrap(),
            None => write!(self.out, "^<detached{}>", block.index()).unwrap(),
        }
    }

    fn indent(&mut self, n: usize) {
        self.out.extend(std::iter::repeat_n(' ', n));
    }

    fn op(&mut self, op: OpId, indent: usize) {
        let ir = self.ir;
        let o = ir.op(op);
        self.indent(indent);
        if !o.results().is_empty() {
            for (i, &r) in o.results().iter().enumerate() {
                if i > 0 {
                    self.out.push_str(", ");
                }
                self.value(r);
            }
            self.out.push_str(" = ");
        }
        write_escaped_string(&mut self.out, o.name()).unwrap();
        self.out.push('(');
        for (i, &v) in o.operands().iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            self.value(v);
        }
        self.out.push(')');
        if !o.successors().is_empty() {
            self.out.push('[');
            for (i, &s) in o.successors().iter().enumerate() {
                if i > 0 {
                    self.out.push_str(", ");
                }
                self.label(s);
            }
            self.out.push(']');
        }
        if !o.regions().is_empty() {
            self.out.push_str(" (");
            for (i, &r) in o.regions().iter().enumerate() {
                if i > 0 {
                    self.out.push_str(", ");
                }
                self.region(r, indent);
            }
            self.out.push(')');
        }
        if !o.attributes().is_empty() {
            self.out.push_str(" {");
            for (i, (k, v)) in o.attributes().iter().enumerate() {
                if i > 0 {
                    self.out.push_str(", ");
                }
                if is_bare_identifier(k) {
                    self.out.push_str(k);
                } else {
                    write_escaped_string(&mut self.out, k).unwrap();
                }
                write!(self.out, " = {v}").unwrap();
            }
            self.out.push('}');
        }
        let ty = FunctionType {
            inputs: o.operands().iter().map(|&v| ir.value_type(v).clone()).collect(),
            results: o.results().iter().map(|&v| ir.value_type(v).clone()).collect(),
        };
        write!(self.out, " : {ty}").unwrap();
        self.out.push('\n');
    }

    fn region(&mut self, region: RegionId, indent: usize) {
        let ir = self.ir;
        self.out.push_str("{\n");
        let blocks = ir.region(region).blocks();
        for (i, &block) in blocks.iter().enumerate() {
            let b = ir.block(block);
            if i > 0 || !b.arguments().is_empty() || blocks.len() > 1 || b.is_empty() {
                self.indent(indent);
                write!(self.out, "^bb{i}").unwrap();
                if !b.arguments().is_empty() {
                    self.out.push('(');
                    for (j, &arg) in b.arguments().iter().enumerate() {
                        if j > 0 {
                            self.out.push_str(", ");
                        }
                        self.value(arg);
                        write!(self.out, ": {}", ir.value_type(arg)).unwrap();
                    }
                    self.out.push(')');
                }
                self.out.push_str(":\n");
            }
            for child in ir.block_ops(block) {
                self.op(child, indent + 2);
            }
        }
        self.indent(indent);
        self.out.push('}');
    }
}
