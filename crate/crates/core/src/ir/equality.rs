use std::collections::HashMap;

use super::{BlockId, Ir, OpId, ValueId};

/// Isomorphism check between two operations, possibly in different arenas.
///
/// Names, attributes, value types and region shapes must match, and values
/// and blocks must correspond through a single consistent bijection.
pub fn structural_equals(a_ir: &Ir, a: OpId, b_ir: &Ir, b: OpId) -> bool {
    let mut m = Matcher {
        a_ir,
        b_ir,
        values: Bijection::default(),
        blocks: Bijection::default(),
    };
    m.ops(a, b)
}

struct Bijection<T> {
    fwd: HashMap<T, T>,
    rev: HashMap<T, T>,
}

impl<T> Default for Bijection<T> {
    fn default() -> Self {
        Bijection {
            fwd: HashMap::new(),
            rev: HashMap::new(),
        }
    }
}

impl<T: Copy + Eq + std::hash::Hash> Bijection<T> {
    fn bind(&mut self, a: T, b: T) -> bool {
        match (self.fwd.get(&a), self.rev.get(&b)) {
            (Some(&x), _) => x == b,
            (None, Some(_)) => false,
            (None, None) => {
                self.fwd.insert(a, b);
                self.rev.insert(b, a);
                true
            }
        }
    }
}

struct Matcher<'a> {
    a_ir: &'a Ir,
    b_ir: &'a Ir,
    values: Bijection<ValueId>,
    blocks: Bijection<BlockId>,
}

impl Matcher<'_> {
    fn value(&mut self, a: ValueId, b: ValueId) -> bool {
        self.a_ir.value_type(a) == self.b_ir.value_type(b) && self.values.bind(a, b)
    }

    fn ops(&mut self, a: OpId, b: OpId) -> bool {
        let (oa, ob) = (self.a_ir.op(a), self.b_ir.op(b));
        if oa.name() != ob.name()
            || oa.attributes() != ob.attributes()
            || oa.operands().len() != ob.operands().len()
            || oa.results().len() != ob.results().len()
            || oa.regions().len() != ob.regions().len()
            || oa.successors().len() != ob.successors().len()
        {
            return false;
        }
        for (&va, &vb) in oa.operands().iter().zip(ob.operands()) {
            if !self.value(va, vb) {
                return false;
            }
        }
        for (&va, &vb) in oa.results().iter().zip(ob.results()) {
            if !self.value(va, vb) {
                return false;
            }
        }
        for (&sa, &sb) in oa.successors().iter().zip(ob.successors()) {
            if !self.blocks.bind(sa, sb) {
                return false;
            }
        }
        for (&ra, &rb) in oa.regions().iter().zip(ob.regions()) {
            let (ba, bb) = (self.a_ir.region(ra).blocks(), self.b_ir.region(rb).blocks());
            if ba.len() != bb.len() {
                return false;
            }
            // Bind all blocks first so forward successor references agree.
            for (&x, &y) in ba.iter().zip(bb) {
                if !self.blocks.bind(x, y) {
                    return false;
                }
            }
            for (&x, &y) in ba.iter().zip(bb) {
                if !self.block(x, y) {
                    return false;
                }
            }
        }
        true
    }

    fn block(&mut self, a: BlockId, b: BlockId) -> bool {
        let (ba, bb) = (self.a_ir.block(a), self.b_ir.block(b));
        if ba.arguments().len() != bb.arguments().len() || ba.len() != bb.len() {
            return false;
        }
        for (&va, &vb) in ba.arguments().iter().zip(bb.arguments()) {
            if !self.value(va, vb) {
                return false;
            }
        }
        let ops_a: Vec<OpId> = self.a_ir.block_ops(a).collect();
        let ops_b: Vec<OpId> = self.b_ir.block_ops(b).collect();
        ops_a.into_iter().zip(ops_b).all(|(x, y)| self.ops(x, y))
    }
}
