//! Native definitions of the builtin, func, arith, scf and cf dialects.

use crate::ir::{
    Attribute, Context, ContextError, DialectDefinition, FloatAttr, FloatType, IntLikeType,
    IntegerAttr, IntegerType, OpDefinition, SlotConstraints, Trait,
};
use crate::irdl::ConstraintExpr as C;

/// `value : iN`, wrapped into the two's-complement range of `width`.
///
/// # Panics
/// If `width` is not in `1..=64`.
pub fn make_integer_attr(value: i128, width: u32) -> IntegerAttr {
    let ty = IntegerType::new(width).expect("integer width out of range");
    IntegerAttr::new(value, IntLikeType::Integer(ty))
}

pub fn make_index_attr(value: i128) -> IntegerAttr {
    IntegerAttr::new(value, IntLikeType::Index)
}

/// `value : fN`, rounded to the width; `None` if not representable.
pub fn make_float_attr(value: f64, ty: FloatType) -> Option<FloatAttr> {
    FloatAttr::new(value, ty)
}

fn i1() -> Attribute {
    Attribute::int(1)
}

fn is(attr: Attribute) -> C {
    C::Is(attr)
}

/// Any integer or index type.
fn int_like() -> C {
    C::any_of([
        C::parametric("builtin.integer", vec![]),
        C::parametric("builtin.index", vec![]),
    ])
}

fn string_attr() -> C {
    C::parametric("builtin.string", vec![])
}

fn fixed(cs: impl IntoIterator<Item = C>) -> SlotConstraints {
    SlotConstraints::Fixed(cs.into_iter().collect())
}

fn op(name: &str) -> OpDefinition {
    OpDefinition::new(name)
}

pub fn builtin_dialect() -> DialectDefinition {
    let mut d = DialectDefinition::new("builtin");
    let mut module = op("builtin.module");
    module.region_count = 1;
    module.traits = vec![Trait::IsolatedFromAbove];
    d.operations.push(module);
    d
}

pub fn func_dialect() -> DialectDefinition {
    let mut d = DialectDefinition::new("func");
    let mut func = op("func.func");
    func.attributes = vec![
        ("sym_name".into(), string_attr()),
        (
            "function_type".into(),
            C::parametric("builtin.function", vec![C::Any, C::Any]),
        ),
    ];
    func.region_count = 1;
    func.traits = vec![Trait::IsolatedFromAbove];
    d.operations.push(func);

    let mut ret = op("func.return");
    ret.operands = SlotConstraints::any_number();
    ret.traits = vec![
        Trait::Terminator,
        Trait::HasParent(vec!["func.func".into()]),
        Trait::FunctionReturn,
    ];
    d.operations.push(ret);
    d
}

pub fn arith_dialect() -> DialectDefinition {
    let mut d = DialectDefinition::new("arith");

    // The result type is bound to ?0 and the value's type must match it.
    let mut constant = op("arith.constant");
    let numeric = C::any_of([
        int_like(),
        C::parametric("builtin.float", vec![]),
    ]);
    constant.results = fixed([C::shared(numeric, 0)]);
    constant.attributes = vec![(
        "value".into(),
        C::any_of([
            C::parametric("builtin.integer_attr", vec![C::Var(0)]),
            C::parametric("builtin.float_attr", vec![C::Var(0)]),
        ]),
    )];
    constant.traits = vec![Trait::Pure];
    d.operations.push(constant);

    let mut addi = op("arith.addi");
    let t = C::shared(int_like(), 0);
    addi.operands = fixed([t.clone(), t.clone()]);
    addi.results = fixed([t]);
    addi.traits = vec![Trait::Pure];
    d.operations.push(addi);
    d
}

pub fn scf_dialect() -> DialectDefinition {
    let mut d = DialectDefinition::new("scf");

    let mut if_op = op("scf.if");
    if_op.operands = fixed([is(i1())]);
    if_op.results = SlotConstraints::any_number();
    if_op.region_count = 2;
    d.operations.push(if_op);

    let mut for_op = op("scf.for");
    for_op.operands = fixed((0..3).map(|_| is(Attribute::IndexType)));
    for_op.region_count = 1;
    for_op.traits = vec![Trait::EntryBlockArgs(vec![Attribute::IndexType])];
    d.operations.push(for_op);

    let mut yield_op = op("scf.yield");
    yield_op.operands = SlotConstraints::any_number();
    yield_op.traits = vec![
        Trait::Terminator,
        Trait::HasParent(vec!["scf.if".into(), "scf.for".into()]),
    ];
    d.operations.push(yield_op);
    d
}

pub fn cf_dialect() -> DialectDefinition {
    let mut d = DialectDefinition::new("cf");

    let mut br = op("cf.br");
    br.operands = SlotConstraints::any_number();
    br.successor_count = 1;
    br.traits = vec![Trait::Terminator];
    d.operations.push(br);

    let mut cond_br = op("cf.cond_br");
    cond_br.operands = fixed([is(i1())]);
    cond_br.successor_count = 2;
    cond_br.traits = vec![Trait::Terminator];
    d.operations.push(cond_br);
    d
}

/// Registers builtin, func, arith, scf and cf.
pub fn register_builtin_dialects(ctx: &mut Context) -> Result<(), ContextError> {
    for d in [
        builtin_dialect(),
        func_dialect(),
        arith_dialect(),
        scf_dialect(),
        cf_dialect(),
    ] {
        ctx.register_dialect(d)?;
    }
    Ok(())
}
