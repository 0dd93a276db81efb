//! Constraints over attributes, with equality variables.

use std::collections::HashMap;
use std::fmt;

use crate::ir::Attribute;

/// A predicate over attributes.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintExpr {
    /// Structurally equal to the given attribute.
    Is(Attribute),
    Any,
    /// At least one alternative holds; the first that does commits its bindings.
    AnyOf(Vec<ConstraintExpr>),
    AllOf(Vec<ConstraintExpr>),
    /// The attribute's parametric view has this base name and its
    /// parameters satisfy the given constraints pointwise.
    Parametric {
        base: String,
        params: Vec<ConstraintExpr>,
    },
    /// Binds on first use; later uses require equality with the binding.
    Var(usize),
}

impl ConstraintExpr {
    pub fn any_of(alternatives: impl IntoIterator<Item = ConstraintExpr>) -> Self {
        ConstraintExpr::AnyOf(alternatives.into_iter().collect())
    }

    pub fn all_of(parts: impl IntoIterator<Item = ConstraintExpr>) -> Self {
        ConstraintExpr::AllOf(parts.into_iter().collect())
    }

    pub fn parametric(base: impl Into<String>, params: Vec<ConstraintExpr>) -> Self {
        ConstraintExpr::Parametric {
            base: base.into(),
            params,
        }
    }

    /// `AllOf[inner, Var(id)]`: check `inner`, then tie to variable `id`.
    pub fn shared(inner: ConstraintExpr, id: usize) -> Self {
        ConstraintExpr::AllOf(vec![inner, ConstraintExpr::Var(id)])
    }

    /// Visits every variable id in the expression.
    pub fn for_each_var(&self, f: &mut impl FnMut(usize)) {
        match self {
            ConstraintExpr::Var(id) => f(*id),
            ConstraintExpr::AnyOf(cs) | ConstraintExpr::AllOf(cs) => {
                cs.iter().for_each(|c| c.for_each_var(f))
            }
            ConstraintExpr::Parametric { params, .. } => {
                params.iter().for_each(|c| c.for_each_var(f))
            }
            ConstraintExpr::Is(_) | ConstraintExpr::Any => {}
        }
    }

    /// Whether every `AnyOf`/`AllOf` is non-empty.
    pub fn is_well_formed(&self) -> bool {
        match self {
            ConstraintExpr::AnyOf(cs) | ConstraintExpr::AllOf(cs) => {
                !cs.is_empty() && cs.iter().all(Self::is_well_formed)
            }
            ConstraintExpr::Parametric { params, .. } => params.iter().all(Self::is_well_formed),
            _ => true,
        }
    }
}

impl fmt::Display for ConstraintExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, cs: &[ConstraintExpr]| -> fmt::Result {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
            Ok(())
        };
        match self {
            ConstraintExpr::Is(a) => write!(f, "{a}"),
            ConstraintExpr::Any => f.write_str("Any"),
            ConstraintExpr::AnyOf(cs) => {
                f.write_str("AnyOf<")?;
                list(f, cs)?;
                f.write_str(">")
            }
            ConstraintExpr::AllOf(cs) => {
                f.write_str("AllOf<")?;
                list(f, cs)?;
                f.write_str(">")
            }
            ConstraintExpr::Parametric { base, params } => {
                write!(f, "{base}")?;
                if !params.is_empty() {
                    f.write_str("<")?;
                    list(f, params)?;
                    f.write_str(">")?;
                }
                Ok(())
            }
            ConstraintExpr::Var(id) => write!(f, "?{id}"),
        }
    }
}

/// Variable bindings for one verification of one operation or attribute.
///
/// Bindings are recorded on a trail so a failed branch can be undone.
#[derive(Debug, Clone, Default)]
pub struct BindingEnv {
    bindings: HashMap<usize, Attribute>,
    trail: Vec<usize>,
}

impl BindingEnv {
    pub fn new() -> Self {
        BindingEnv::default()
    }

    pub fn get(&self, var: usize) -> Option<&Attribute> {
        self.bindings.get(&var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Binds an unbound variable. Returns false if it was already bound.
    pub fn bind(&mut self, var: usize, attr: Attribute) -> bool {
        if self.bindings.contains_key(&var) {
            return false;
        }
        self.bindings.insert(var, attr);
        self.trail.push(var);
        true
    }

    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn undo_to(&mut self, mark: usize) {
        for var in self.trail.drain(mark..) {
            self.bindings.remove(&var);
        }
    }
}

/// Checks `attr` against `expr`. On failure `env` is left as it was.
pub fn eval_constraint(expr: &ConstraintExpr, attr: &Attribute, env: &mut BindingEnv) -> bool {
    let mark = env.mark();
    let ok = eval(expr, attr, env);
    if !ok {
        env.undo_to(mark);
    }
    ok
}

fn eval(expr: &ConstraintExpr, attr: &Attribute, env: &mut BindingEnv) -> bool {
    match expr {
        ConstraintExpr::Is(expected) => expected == attr,
        ConstraintExpr::Any => true,
        ConstraintExpr::AnyOf(alternatives) => alternatives.iter().any(|alt| {
            let mark = env.mark();
            eval(alt, attr, env) || {
                env.undo_to(mark);
                false
            }
        }),
        ConstraintExpr::AllOf(parts) => parts.iter().all(|p| eval(p, attr, env)),
        ConstraintExpr::Parametric { base, params } => match attr.parametric_view() {
            Some((name, actual)) => {
                name == base.as_str()
                    && actual.len() == params.len()
                    && params.iter().zip(actual.iter()).all(|(c, a)| eval(c, a, env))
            }
            None => false,
        },
        ConstraintExpr::Var(id) => match env.get(*id) {
            Some(bound) => bound == attr,
            None => env.bind(*id, attr.clone()),
        },
    }
}
