//! Attributes: immutable compile-time values. Types are the subset of
//! attributes for which [`Attribute::is_type`] holds.

use std::borrow::Cow;
use std::fmt;

/// Signless integer type `iN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerType {
    width: u32,
}

impl IntegerType {
    pub const MAX_WIDTH: u32 = 64;

    /// Returns `None` unless `1 <= width <= 64`.
    pub fn new(width: u32) -> Option<Self> {
        (1..=Self::MAX_WIDTH)
            .contains(&width)
            .then_some(IntegerType { width })
    }

    pub fn width(self) -> u32 {
        self.width
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FloatType {
    F16,
    F32,
    F64,
}

impl FloatType {
    pub fn width(self) -> u32 {
        match self {
            FloatType::F16 => 16,
            FloatType::F32 => 32,
            FloatType::F64 => 64,
        }
    }

    pub fn from_width(width: u32) -> Option<Self> {
        match width {
            16 => Some(FloatType::F16),
            32 => Some(FloatType::F32),
            64 => Some(FloatType::F64),
            _ => None,
        }
    }

    /// Rounds `value` to the nearest value representable at this width.
    /// Returns `None` if the rounded value is not finite.
    pub fn round(self, value: f64) -> Option<f64> {
        let rounded = match self {
            FloatType::F16 => half::f16::from_f64(value).to_f64(),
            FloatType::F32 => value as f32 as f64,
            FloatType::F64 => value,
        };
        rounded.is_finite().then_some(rounded)
    }
}

/// The type carried by an integer literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntLikeType {
    Integer(IntegerType),
    Index,
}

impl IntLikeType {
    /// Storage width; `index` is stored in 64 bits.
    pub fn width(self) -> u32 {
        match self {
            IntLikeType::Integer(ty) => ty.width(),
            IntLikeType::Index => 64,
        }
    }

    pub fn to_attribute(self) -> Attribute {
        match self {
            IntLikeType::Integer(ty) => Attribute::IntegerType(ty),
            IntLikeType::Index => Attribute::IndexType,
        }
    }

    pub fn from_attribute(attr: &Attribute) -> Option<Self> {
        match attr {
            Attribute::IntegerType(ty) => Some(IntLikeType::Integer(*ty)),
            Attribute::IndexType => Some(IntLikeType::Index),
            _ => None,
        }
    }
}

/// Wraps `value` into the two's-complement range of a `width`-bit integer.
pub fn wrap_to_width(value: i128, width: u32) -> i64 {
    debug_assert!((1..=64).contains(&width));
    let shift = 128 - width;
    ((value << shift) >> shift) as i64
}

/// Integer literal, stored canonically in two's complement for its width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegerAttr {
    value: i64,
    ty: IntLikeType,
}

impl IntegerAttr {
    pub fn new(value: i128, ty: IntLikeType) -> Self {
        IntegerAttr {
            value: wrap_to_width(value, ty.width()),
            ty,
        }
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn ty(&self) -> IntLikeType {
        self.ty
    }
}

/// Floating-point literal. Equality is bitwise, so `-0.0 != 0.0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FloatAttr {
    bits: u64,
    ty: FloatType,
}

impl FloatAttr {
    /// Rounds `value` to `ty`; `None` when the result is not finite.
    pub fn new(value: f64, ty: FloatType) -> Option<Self> {
        ty.round(value).map(|v| FloatAttr {
            bits: v.to_bits(),
            ty,
        })
    }

    pub fn value(&self) -> f64 {
        f64::from_bits(self.bits)
    }

    pub fn ty(&self) -> FloatType {
        self.ty
    }
}

/// Dictionary with strictly increasing keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DictionaryAttr {
    entries: Vec<(String, Attribute)>,
}

impl DictionaryAttr {
    /// Sorts the entries by key. Returns the first duplicated key on failure.
    pub fn new(mut entries: Vec<(String, Attribute)>) -> Result<Self, String> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(w[0].0.clone());
        }
        Ok(DictionaryAttr { entries })
    }

    pub fn entries(&self) -> &[(String, Attribute)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Attribute> {
        self.entries
            .binary_search_by(|(k, _)| k.as_str().cmp(key))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionType {
    pub inputs: Vec<Attribute>,
    pub results: Vec<Attribute>,
}

/// A dialect attribute or type whose definition is registered in a context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParametrizedAttr {
    pub dialect: String,
    pub mnemonic: String,
    pub parameters: Vec<Attribute>,
    pub is_type: bool,
}

impl ParametrizedAttr {
    pub fn full_name(&self) -> String {
        format!("{}.{}", self.dialect, self.mnemonic)
    }
}

/// An attribute of an unknown dialect, kept as verbatim body text.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpaqueAttr {
    pub dialect: String,
    pub mnemonic: String,
    /// Text between the outer `<` and `>`, if the attribute had a body.
    pub body: Option<String>,
    pub is_type: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Attribute {
    IntegerType(IntegerType),
    IndexType,
    FloatType(FloatType),
    Integer(IntegerAttr),
    Float(FloatAttr),
    String(String),
    Array(Vec<Attribute>),
    Dictionary(DictionaryAttr),
    Function(FunctionType),
    Parametrized(ParametrizedAttr),
    Opaque(OpaqueAttr),
}

impl Attribute {
    /// `iN`; panics if the width is out of range.
    pub fn int(width: u32) -> Attribute {
        Attribute::IntegerType(IntegerType::new(width).expect("integer width out of range"))
    }

    pub fn string(text: impl Into<String>) -> Attribute {
        Attribute::String(text.into())
    }

    pub fn is_type(&self) -> bool {
        match self {
            Attribute::IntegerType(_)
            | Attribute::IndexType
            | Attribute::FloatType(_)
            | Attribute::Function(_) => true,
            Attribute::Parametrized(p) => p.is_type,
            Attribute::Opaque(o) => o.is_type,
            _ => false,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Attribute::String(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<&IntegerAttr> {
        match self {
            Attribute::Integer(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_function(&self) -> Option<&FunctionType> {
        match self {
            Attribute::Function(f) => Some(f),
            _ => None,
        }
    }

    /// Base name and attribute parameters used by parametric constraints.
    ///
    /// Builtin kinds are exposed under `builtin.*` names: `integer`, `index`,
    /// `float`, `string`, `dictionary` take no parameters; `integer_attr` and
    /// `float_attr` take their type; `array` takes its elements; `function`
    /// takes the input and result lists as two arrays. Opaque attributes have
    /// no view.
    pub fn parametric_view(&self) -> Option<(Cow<'_, str>, Cow<'_, [Attribute]>)> {
        let builtin = |name: &'static str| Some((Cow::Borrowed(name), Cow::Borrowed(&[][..])));
        match self {
            Attribute::IntegerType(_) => builtin("builtin.integer"),
            Attribute::IndexType => builtin("builtin.index"),
            Attribute::FloatType(_) => builtin("builtin.float"),
            Attribute::String(_) => builtin("builtin.string"),
            Attribute::Dictionary(_) => builtin("builtin.dictionary"),
            Attribute::Integer(i) => Some((
                Cow::Borrowed("builtin.integer_attr"),
                Cow::Owned(vec![i.ty().to_attribute()]),
            )),
            Attribute::Float(f) => Some((
                Cow::Borrowed("builtin.float_attr"),
                Cow::Owned(vec![Attribute::FloatType(f.ty())]),
            )),
            Attribute::Array(elems) => {
                Some((Cow::Borrowed("builtin.array"), Cow::Borrowed(elems.as_slice())))
            }
            Attribute::Function(f) => Some((
                Cow::Borrowed("builtin.function"),
                Cow::Owned(vec![
                    Attribute::Array(f.inputs.clone()),
                    Attribute::Array(f.results.clone()),
                ]),
            )),
            Attribute::Parametrized(p) => Some((
                Cow::Owned(p.full_name()),
                Cow::Borrowed(p.parameters.as_slice()),
            )),
            Attribute::Opaque(_) => None,
        }
    }

    /// Visits this attribute and every nested attribute, outermost first.
    pub fn for_each_nested(&self, f: &mut dyn FnMut(&Attribute)) {
        f(self);
        match self {
            Attribute::Array(elems) => elems.iter().for_each(|a| a.for_each_nested(f)),
            Attribute::Dictionary(d) => d.entries().iter().for_each(|(_, a)| a.for_each_nested(f)),
            Attribute::Function(ft) => ft
                .inputs
                .iter()
                .chain(&ft.results)
                .for_each(|a| a.for_each_nested(f)),
            Attribute::Parametrized(p) => p.parameters.iter().for_each(|a| a.for_each_nested(f)),
            _ => {}
        }
    }
}

impl From<IntegerType> for Attribute {
    fn from(ty: IntegerType) -> Self {
        Attribute::IntegerType(ty)
    }
}

impl From<IntegerAttr> for Attribute {
    fn from(attr: IntegerAttr) -> Self {
        Attribute::Integer(attr)
    }
}

impl From<FloatAttr> for Attribute {
    fn from(attr: FloatAttr) -> Self {
        Attribute::Float(attr)
    }
}

impl From<FunctionType> for Attribute {
    fn from(ty: FunctionType) -> Self {
        Attribute::Function(ty)
    }
}

pub(crate) fn is_bare_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '$' | '.'))
}

pub(crate) fn write_escaped_string(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            c if (c as u32) < 0x20 || c as u32 == 0x7f => write!(f, "\\{:02X}", c as u32)?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

fn format_float(attr: &FloatAttr) -> String {
    let mut text = match attr.ty() {
        FloatType::F64 => format!("{:?}", attr.value()),
        FloatType::F32 | FloatType::F16 => format!("{:?}", attr.value() as f32),
    };
    // Literals always carry a '.', including exponent forms like `1e-7`.
    if !text.contains('.') {
        let at = text.find('e').unwrap_or(text.len());
        text.insert_str(at, ".0");
    }
    text
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Attribute]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

fn write_function_results(f: &mut fmt::Formatter<'_>, results: &[Attribute]) -> fmt::Result {
    match results {
        [single] if !matches!(single, Attribute::Function(_)) => write!(f, "{single}"),
        _ => {
            f.write_str("(")?;
            write_list(f, results)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for FunctionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_list(f, &self.inputs)?;
        f.write_str(") -> ")?;
        write_function_results(f, &self.results)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attribute::IntegerType(ty) => write!(f, "i{}", ty.width()),
            Attribute::IndexType => f.write_str("index"),
            Attribute::FloatType(ty) => write!(f, "f{}", ty.width()),
            Attribute::Integer(i) => write!(f, "{} : {}", i.value(), i.ty().to_attribute()),
            Attribute::Float(x) => write!(f, "{} : f{}", format_float(x), x.ty().width()),
            Attribute::String(s) => write_escaped_string(f, s),
            Attribute::Array(elems) => {
                f.write_str("[")?;
                write_list(f, elems)?;
                f.write_str("]")
            }
            Attribute::Dictionary(d) => {
                f.write_str("{")?;
                for (i, (key, value)) in d.entries().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    if is_bare_identifier(key) {
                        f.write_str(key)?;
                    } else {
                        write_escaped_string(f, key)?;
                    }
                    write!(f, " = {value}")?;
                }
                f.write_str("}")
            }
            Attribute::Function(ft) => write!(f, "{ft}"),
            Attribute::Parametrized(p) => {
                let sigil = if p.is_type { '!' } else { '#' };
                write!(f, "{sigil}{}.{}", p.dialect, p.mnemonic)?;
                if !p.parameters.is_empty() {
                    f.write_str("<")?;
                    write_list(f, &p.parameters)?;
                    f.write_str(">")?;
                }
                Ok(())
            }
            Attribute::Opaque(o) => {
                let sigil = if o.is_type { '!' } else { '#' };
                write!(f, "{sigil}{}.{}", o.dialect, o.mnemonic)?;
                if let Some(body) = &o.body {
                    write!(f, "<{body}>")?;
                }
                Ok(())
            }
        }
    }
}
