use std::collections::HashMap;

use super::lexer::{decode_string, Lexer, Token, TokenKind};
use super::{Module, ParseOptions};
use crate::ir::{
    Attribute, BlockId, Context, Diagnostic, DiagnosticKind, DictionaryAttr, FloatAttr, FloatType,
    FunctionType, InsertPoint, IntLikeType, IntegerAttr, IntegerType, Ir, OpId, OpaqueAttr,
    OperationState, ParametrizedAttr, RegionId, ValueId,
};

type PResult<T> = Result<T, Diagnostic>;

/// Names visible inside one isolated scope.
#[derive(Default)]
struct ValueScope {
    values: HashMap<String, ValueId>,
    /// Forward references: placeholder value and offset of the first use.
    pending: HashMap<String, (ValueId, usize)>,
}

struct Label {
    block: BlockId,
    defined: bool,
    first_use: usize,
    /// Successor slots naming this label while it is undefined.
    users: Vec<(OpId, usize)>,
}

struct RegionFrame {
    names: Vec<String>,
    labels: HashMap<String, Label>,
}

pub(super) struct Parser<'a> {
    lx: Lexer<'a>,
    tok: Token,
    ctx: &'a Context,
    opts: ParseOptions,
    ir: Ir,
    locations: HashMap<OpId, (u32, u32)>,
    scopes: Vec<ValueScope>,
    frames: Vec<RegionFrame>,
    placeholder_block: Option<BlockId>,
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str, ctx: &'a Context, opts: ParseOptions) -> PResult<Self> {
        let mut lx = Lexer::new(src);
        let tok = lx.next_token()?;
        Ok(Parser {
            lx,
            tok,
            ctx,
            opts,
            ir: Ir::new(),
            locations: HashMap::new(),
            scopes: Vec::new(),
            frames: Vec::new(),
            placeholder_block: None,
        })
    }

    fn error(&self, kind: DiagnosticKind, offset: usize, message: impl Into<String>) -> Diagnostic {
        self.lx.error(kind, offset, message)
    }

    fn bump(&mut self) -> PResult<Token> {
        let tok = self.tok;
        self.tok = self.lx.next_token()?;
        Ok(tok)
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.tok.kind == kind
    }

    fn eat(&mut self, kind: TokenKind) -> PResult<bool> {
        if self.at(kind) {
            self.bump()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect(&mut self, kind: TokenKind, context: &str) -> PResult<Token> {
        if self.at(kind) {
            self.bump()
        } else {
            Err(self.unexpected(&format!("{} {context}", kind.describe())))
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let found = match self.tok.kind {
            TokenKind::Eof => "end of input".to_string(),
            _ => format!("'{}'", self.lx.text(self.tok)),
        };
        self.error(
            DiagnosticKind::Syntax,
            self.tok.start,
            format!("expected {wanted}, found {found}"),
        )
    }

    fn text(&self, tok: Token) -> &'a str {
        self.lx.text(tok)
    }

    // ---- modules and operations ----

    pub(super) fn parse_module(mut self) -> PResult<Module> {
        let region = self.ir.create_region();
        let block = self.ir.create_block([]);
        self.ir.append_block(region, block);
        self.scopes.push(ValueScope::default());
        self.frames.push(RegionFrame {
            names: Vec::new(),
            labels: HashMap::new(),
        });
        while !self.at(TokenKind::Eof) {
            let op = self.parse_operation()?;
            self.ir
                .insert_operation(op, InsertPoint::BackOf(block))
                .expect("fresh operation");
        }
        self.pop_frame()?;
        self.pop_scope()?;

        let ops: Vec<OpId> = self.ir.block_ops(block).collect();
        let top = match ops.as_slice() {
            [single]
                if self.ir.op(*single).name() == "builtin.module"
                    && self.ir.op(*single).results().is_empty()
                    && self.ir.op(*single).operands().is_empty() =>
            {
                self.ir.detach_operation(*single);
                *single
            }
            _ => self
                .ir
                .create_operation(OperationState::new("builtin.module").region(region)),
        };
        Ok(Module {
            ir: self.ir,
            top,
            locations: self.locations,
        })
    }

    fn parse_operation(&mut self) -> PResult<OpId> {
        let start = self.tok.start;
        let mut result_names: Vec<Token> = Vec::new();
        if self.at(TokenKind::PercentIdent) {
            loop {
                result_names.push(self.expect(TokenKind::PercentIdent, "in result list")?);
                if !self.eat(TokenKind::Comma)? {
                    break;
                }
            }
            self.expect(TokenKind::Equal, "after result list")?;
        }

        if !self.at(TokenKind::String) {
            return Err(self.unexpected("operation name string"));
        }
        let name_tok = self.bump()?;
        let name = decode_string(self.text(name_tok));
        if name.is_empty() || !name.contains('.') || name.starts_with('.') || name.ends_with('.') {
            return Err(self.error(
                DiagnosticKind::Syntax,
                name_tok.start,
                format!("operation name '{name}' must have the form 'dialect.mnemonic'"),
            ));
        }
        let def = self.ctx.lookup(&name);
        if def.is_none() && !self.opts.allow_unregistered {
            return Err(self.error(
                DiagnosticKind::UnregisteredOperation,
                name_tok.start,
                format!("unregistered operation '{name}'"),
            ));
        }
        let isolated = def.is_some_and(|d| d.is_isolated());

        self.expect(TokenKind::LParen, "to open the operand list")?;
        let mut operand_names: Vec<Token> = Vec::new();
        if !self.at(TokenKind::RParen) {
            loop {
                operand_names.push(self.expect(TokenKind::PercentIdent, "in operand list")?);
                if !self.eat(TokenKind::Comma)? {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen, "to close the operand list")?;

        let mut successor_labels: Vec<Token> = Vec::new();
        if self.eat(TokenKind::LBracket)? {
            loop {
                successor_labels.push(self.expect(TokenKind::CaretIdent, "in successor list")?);
                if !self.eat(TokenKind::Comma)? {
                    break;
                }
            }
            self.expect(TokenKind::RBracket, "to close the successor list")?;
        }

        let mut regions = Vec::new();
        if self.at(TokenKind::LParen) {
            self.bump()?;
            if isolated {
                self.scopes.push(ValueScope::default());
            }
            loop {
                regions.push(self.parse_region()?);
                if !self.eat(TokenKind::Comma)? {
                    break;
                }
            }
            if isolated {
                self.pop_scope()?;
            }
            self.expect(TokenKind::RParen, "to close the region list")?;
        }

        let mut attributes = Vec::new();
        if self.at(TokenKind::LBrace) {
            attributes = self.parse_attribute_entries()?;
        }

        self.expect(TokenKind::Colon, "before the operation type")?;
        let type_start = self.tok.start;
        let ty = self.parse_function_type()?;
        if ty.inputs.len() != operand_names.len() {
            return Err(self.error(
                DiagnosticKind::TypeMismatch,
                type_start,
                format!(
                    "operation has {} operands but its type lists {}",
                    operand_names.len(),
                    ty.inputs.len()
                ),
            ));
        }
        if ty.results.len() != result_names.len() {
            return Err(self.error(
                DiagnosticKind::TypeMismatch,
                type_start,
                format!(
                    "operation has {} results but its type lists {}",
                    result_names.len(),
                    ty.results.len()
                ),
            ));
        }

        let mut operands = Vec::with_capacity(operand_names.len());
        for (tok, ty) in operand_names.iter().zip(&ty.inputs) {
            operands.push(self.resolve_value(*tok, ty)?);
        }
        let mut successors = Vec::with_capacity(successor_labels.len());
        for tok in &successor_labels {
            successors.push(self.reference_label(*tok));
        }

        let mut state = OperationState::new(name)
            .operands(operands)
            .results(ty.results.iter().cloned());
        for (k, v) in attributes {
            state = state.attribute(k, v);
        }
        for r in regions {
            state = state.region(r);
        }
        for &s in &successors {
            state = state.successor(s);
        }
        let op = self.ir.create_operation(state);
        for (i, tok) in successor_labels.iter().enumerate() {
            let label = self.text(*tok);
            let frame = self.frames.last_mut().expect("inside a region");
            let entry = frame.labels.get_mut(label).expect("just referenced");
            if !entry.defined {
                entry.users.push((op, i));
            }
        }

        let results = self.ir.op(op).results().to_vec();
        for (tok, value) in result_names.iter().zip(results) {
            self.define_value(*tok, value)?;
        }
        self.locations.insert(op, self.lx.line_column(start));
        Ok(op)
    }

    fn parse_attribute_entries(&mut self) -> PResult<Vec<(String, Attribute)>> {
        self.expect(TokenKind::LBrace, "to open the attribute dictionary")?;
        let mut entries: Vec<(String, Attribute)> = Vec::new();
        if !self.at(TokenKind::RBrace) {
            loop {
                let key_tok = self.tok;
                let key = match self.tok.kind {
                    TokenKind::BareIdent => {
                        let t = self.bump()?;
                        self.text(t).to_string()
                    }
                    TokenKind::String => {
                        let t = self.bump()?;
                        decode_string(self.text(t))
                    }
                    _ => return Err(self.unexpected("attribute name")),
                };
                if entries.iter().any(|(k, _)| *k == key) {
                    return Err(self.error(
                        DiagnosticKind::Redefinition,
                        key_tok.start,
                        format!("duplicate attribute name '{key}'"),
                    ));
                }
                self.expect(TokenKind::Equal, "after attribute name")?;
                let value = self.parse_attribute()?;
                entries.push((key, value));
                if !self.eat(TokenKind::Comma)? {
                    break;
                }
            }
        }
        if !self.at(TokenKind::RBrace) {
            return Err(self.unexpected("',' or '}' in attribute dictionary"));
        }
        self.bump()?;
        Ok(entries)
    }

    // ---- regions, blocks, values ----

    fn parse_region(&mut self) -> PResult<RegionId> {
        self.expect(TokenKind::LBrace, "to open a region")?;
        let region = self.ir.create_region();
        self.frames.push(RegionFrame {
            names: Vec::new(),
            labels: HashMap::new(),
        });
        if !self.at(TokenKind::CaretIdent) && !self.at(TokenKind::RBrace) {
            let block = self.ir.create_block([]);
            self.ir.append_block(region, block);
            self.parse_block_body(block)?;
        }
        while self.at(TokenKind::CaretIdent) {
            let block = self.parse_block_header()?;
            self.ir.append_block(region, block);
            self.parse_block_body(block)?;
        }
        if !self.at(TokenKind::RBrace) {
            return Err(self.unexpected("operation, block label or '}'"));
        }
        self.bump()?;
        self.pop_frame()?;
        Ok(region)
    }

    fn parse_block_body(&mut self, block: BlockId) -> PResult<()> {
        while !self.at(TokenKind::CaretIdent) && !self.at(TokenKind::RBrace) {
            if self.at(TokenKind::Eof) {
                return Err(self.unexpected("'}' to close the region"));
            }
            let op = self.parse_operation()?;
            self.ir
                .insert_operation(op, InsertPoint::BackOf(block))
                .expect("fresh operation");
        }
        Ok(())
    }

    fn parse_block_header(&mut self) -> PResult<BlockId> {
        let tok = self.bump()?;
        let label = self.text(tok).to_string();
        let frame = self.frames.last_mut().expect("inside a region");
        let block = match frame.labels.get_mut(&label) {
            Some(l) if l.defined => {
                return Err(self.error(
                    DiagnosticKind::Redefinition,
                    tok.start,
                    format!("redefinition of block '{label}'"),
                ))
            }
            Some(l) => {
                l.defined = true;
                l.users.clear();
                l.block
            }
            None => {
                let block = self.ir.create_block([]);
                frame.labels.insert(
                    label,
                    Label {
                        block,
                        defined: true,
                        first_use: tok.start,
                        users: Vec::new(),
                    },
                );
                block
            }
        };
        if self.eat(TokenKind::LParen)? {
            if !self.at(TokenKind::RParen) {
                loop {
                    let name = self.expect(TokenKind::PercentIdent, "in block argument list")?;
                    self.expect(TokenKind::Colon, "after block argument name")?;
                    let ty = self.parse_type()?;
                    let arg = self.ir.add_block_argument(block, ty);
                    self.define_value(name, arg)?;
                    if !self.eat(TokenKind::Comma)? {
                        break;
                    }
                }
            }
            self.expect(TokenKind::RParen, "to close the block argument list")?;
        }
        self.expect(TokenKind::Colon, "after block label")?;
        Ok(block)
    }

    fn reference_label(&mut self, tok: Token) -> BlockId {
        let label = self.text(tok);
        let frame = self.frames.last_mut().expect("inside a region");
        if let Some(l) = frame.labels.get(label) {
            return l.block;
        }
        let block = self.ir.create_block([]);
        frame.labels.insert(
            label.to_string(),
            Label {
                block,
                defined: false,
                first_use: tok.start,
                users: Vec::new(),
            },
        );
        block
    }

    /// Closes the innermost region: its value names go out of scope and its
    /// undefined labels are handed to the enclosing region.
    fn pop_frame(&mut self) -> PResult<()> {
        let frame = self.frames.pop().expect("frame pushed");
        let scope = self.scopes.last_mut().expect("scope pushed");
        for name in &frame.names {
            scope.values.remove(name);
        }
        let mut unresolved: Vec<(String, Label)> = frame
            .labels
            .into_iter()
            .filter(|(_, l)| !l.defined)
            .collect();
        unresolved.sort_by_key(|(_, l)| l.first_use);
        let Some(parent) = self.frames.last_mut() else {
            if let Some((name, l)) = unresolved.first() {
                return Err(self.error(
                    DiagnosticKind::UndefinedBlock,
                    l.first_use,
                    format!("use of undefined block '{name}'"),
                ));
            }
            return Ok(());
        };
        for (name, l) in unresolved {
            match parent.labels.get_mut(&name) {
                Some(existing) => {
                    for &(op, i) in &l.users {
                        self.ir.set_successor(op, i, existing.block);
                    }
                    if !existing.defined {
                        existing.users.extend(l.users);
                    }
                }
                None => {
                    parent.labels.insert(name, l);
                }
            }
        }
        Ok(())
    }

    fn pop_scope(&mut self) -> PResult<()> {
        let scope = self.scopes.pop().expect("scope pushed");
        let first = scope.pending.iter().min_by_key(|(_, (_, at))| *at);
        if let Some((name, (_, at))) = first {
            return Err(self.error(
                DiagnosticKind::UndefinedValue,
                *at,
                format!("use of undefined value '{name}'"),
            ));
        }
        Ok(())
    }

    fn define_value(&mut self, tok: Token, value: ValueId) -> PResult<()> {
        let name = self.text(tok);
        let scope = self.scopes.last_mut().expect("scope pushed");
        if scope.values.contains_key(name) {
            return Err(self.error(
                DiagnosticKind::Redefinition,
                tok.start,
                format!("redefinition of value '{name}'"),
            ));
        }
        if let Some((placeholder, at)) = scope.pending.remove(name) {
            let expected = self.ir.value_type(placeholder).clone();
            let actual = self.ir.value_type(value).clone();
            if expected != actual {
                return Err(self.error(
                    DiagnosticKind::TypeMismatch,
                    at,
                    format!("'{name}' is used as {expected} but defined as {actual}"),
                ));
            }
            self.ir.replace_all_uses(placeholder, value);
        }
        let scope = self.scopes.last_mut().expect("scope pushed");
        scope.values.insert(name.to_string(), value);
        self.frames
            .last_mut()
            .expect("inside a region")
            .names
            .push(name.to_string());
        Ok(())
    }

    fn resolve_value(&mut self, tok: Token, ty: &Attribute) -> PResult<ValueId> {
        let name = self.text(tok);
        let scope = self.scopes.last().expect("scope pushed");
        let found = scope
            .values
            .get(name)
            .or_else(|| scope.pending.get(name).map(|(v, _)| v))
            .copied();
        if let Some(v) = found {
            let actual = self.ir.value_type(v);
            if actual != ty {
                return Err(self.error(
                    DiagnosticKind::TypeMismatch,
                    tok.start,
                    format!("'{name}' has type {actual} but is used as {ty}"),
                ));
            }
            return Ok(v);
        }
        let holder = *self
            .placeholder_block
            .get_or_insert_with(|| self.ir.create_block([]));
        let v = self.ir.add_block_argument(holder, ty.clone());
        self.scopes
            .last_mut()
            .expect("scope pushed")
            .pending
            .insert(name.to_string(), (v, tok.start));
        Ok(v)
    }

    // ---- attributes and types ----

    pub(super) fn parse_standalone_attribute(mut self) -> PResult<Attribute> {
        let attr = self.parse_attribute()?;
        if !self.at(TokenKind::Eof) {
            return Err(self.unexpected("end of input"));
        }
        Ok(attr)
    }

    pub(super) fn parse_attribute(&mut self) -> PResult<Attribute> {
        match self.tok.kind {
            TokenKind::Integer | TokenKind::Float => self.parse_number(),
            TokenKind::String => {
                let tok = self.bump()?;
                Ok(Attribute::String(decode_string(self.text(tok))))
            }
            TokenKind::LBracket => {
                self.bump()?;
                let mut elems = Vec::new();
                if !self.at(TokenKind::RBracket) {
                    loop {
                        elems.push(self.parse_attribute()?);
                        if !self.eat(TokenKind::Comma)? {
                            break;
                        }
                    }
                }
                if !self.at(TokenKind::RBracket) {
                    return Err(self.unexpected("',' or ']' in array"));
                }
                self.bump()?;
                Ok(Attribute::Array(elems))
            }
            TokenKind::LBrace => {
                let start = self.tok.start;
                let entries = self.parse_attribute_entries()?;
                DictionaryAttr::new(entries).map(Attribute::Dictionary).map_err(|k| {
                    self.error(
                        DiagnosticKind::Redefinition,
                        start,
                        format!("duplicate attribute name '{k}'"),
                    )
                })
            }
            TokenKind::HashIdent | TokenKind::BangIdent => self.parse_dialect_attribute(),
            TokenKind::BareIdent | TokenKind::LParen => self.parse_type(),
            _ => Err(self.unexpected("attribute")),
        }
    }

    fn parse_number(&mut self) -> PResult<Attribute> {
        let tok = self.bump()?;
        let text = self.text(tok);
        let ty = if self.eat(TokenKind::Colon)? {
            Some((self.tok.start, self.parse_type()?))
        } else {
            None
        };
        if tok.kind == TokenKind::Integer {
            let value = parse_integer_literal(text).ok_or_else(|| {
                self.error(
                    DiagnosticKind::InvalidAttribute,
                    tok.start,
                    format!("integer literal '{text}' is out of range"),
                )
            })?;
            let ty = match ty {
                None => IntLikeType::Integer(IntegerType::new(64).expect("valid width")),
                Some((at, ty)) => IntLikeType::from_attribute(&ty).ok_or_else(|| {
                    self.error(
                        DiagnosticKind::InvalidAttribute,
                        at,
                        format!("integer literal cannot have type {ty}"),
                    )
                })?,
            };
            Ok(Attribute::Integer(IntegerAttr::new(value, ty)))
        } else {
            let value: f64 = text.parse().map_err(|_| {
                self.error(
                    DiagnosticKind::InvalidAttribute,
                    tok.start,
                    format!("invalid float literal '{text}'"),
                )
            })?;
            let ty = match ty {
                None => FloatType::F64,
                Some((_, Attribute::FloatType(f))) => f,
                Some((at, ty)) => {
                    return Err(self.error(
                        DiagnosticKind::InvalidAttribute,
                        at,
                        format!("float literal cannot have type {ty}"),
                    ))
                }
            };
            FloatAttr::new(value, ty).map(Attribute::Float).ok_or_else(|| {
                self.error(
                    DiagnosticKind::InvalidAttribute,
                    tok.start,
                    format!("float literal '{text}' is not representable as {}", Attribute::FloatType(ty)),
                )
            })
        }
    }

    pub(super) fn parse_type(&mut self) -> PResult<Attribute> {
        match self.tok.kind {
            TokenKind::BareIdent => {
                let tok = self.tok;
                let text = self.text(tok);
                let ty = builtin_type(text).ok_or_else(|| {
                    self.error(
                        DiagnosticKind::InvalidAttribute,
                        tok.start,
                        format!("unknown type '{text}'"),
                    )
                })?;
                self.bump()?;
                Ok(ty)
            }
            TokenKind::LParen => Ok(Attribute::Function(self.parse_function_type()?)),
            TokenKind::BangIdent => self.parse_dialect_attribute(),
            _ => Err(self.unexpected("type")),
        }
    }

    fn parse_type_list(&mut self) -> PResult<Vec<Attribute>> {
        self.expect(TokenKind::LParen, "to open a type list")?;
        let mut types = Vec::new();
        if !self.at(TokenKind::RParen) {
            loop {
                types.push(self.parse_type()?);
                if !self.eat(TokenKind::Comma)? {
                    break;
                }
            }
        }
        if !self.at(TokenKind::RParen) {
            return Err(self.unexpected("',' or ')' in type list"));
        }
        self.bump()?;
        Ok(types)
    }

    fn parse_function_type(&mut self) -> PResult<FunctionType> {
        let inputs = self.parse_type_list()?;
        self.expect(TokenKind::Arrow, "in function type")?;
        let results = if self.at(TokenKind::LParen) {
            let list = self.parse_type_list()?;
            if self.at(TokenKind::Arrow) {
                self.bump()?;
                let inner_results = if self.at(TokenKind::LParen) {
                    self.parse_type_list()?
                } else {
                    vec![self.parse_type()?]
                };
                vec![Attribute::Function(FunctionType {
                    inputs: list,
                    results: inner_results,
                })]
            } else {
                list
            }
        } else {
            vec![self.parse_type()?]
        };
        Ok(FunctionType { inputs, results })
    }

    fn parse_dialect_attribute(&mut self) -> PResult<Attribute> {
        let tok = self.tok;
        let is_type = tok.kind == TokenKind::BangIdent;
        let full = &self.text(tok)[1..];
        let Some((dialect, mnemonic)) = full.split_once('.').filter(|(d, m)| !d.is_empty() && !m.is_empty()) else {
            return Err(self.error(
                DiagnosticKind::Syntax,
                tok.start,
                format!("expected 'dialect.mnemonic' after '{}'", if is_type { '!' } else { '#' }),
            ));
        };
        let has_body = self.lx.byte_at(tok.end) == Some(b'<');

        if self.ctx.dialect(dialect).is_none() {
            let body = if has_body {
                let (body, end) = self.scan_opaque_body(tok.end)?;
                self.lx.reset(end);
                Some(body)
            } else {
                self.lx.reset(tok.end);
                None
            };
            self.tok = self.lx.next_token()?;
            return Ok(Attribute::Opaque(OpaqueAttr {
                dialect: dialect.to_string(),
                mnemonic: mnemonic.to_string(),
                body,
                is_type,
            }));
        }

        let Some(def) = self.ctx.attr_definition(dialect, mnemonic) else {
            return Err(self.error(
                DiagnosticKind::UnknownAttribute,
                tok.start,
                format!("dialect '{dialect}' has no attribute or type named '{mnemonic}'"),
            ));
        };
        if def.is_type != is_type {
            let (kind, sigil) = if def.is_type { ("type", '!') } else { ("attribute", '#') };
            return Err(self.error(
                DiagnosticKind::InvalidAttribute,
                tok.start,
                format!("'{dialect}.{mnemonic}' is a {kind} and must be written with '{sigil}'"),
            ));
        }
        self.bump()?;
        let mut parameters = Vec::new();
        if has_body {
            self.expect(TokenKind::Less, "to open parameters")?;
            if !self.at(TokenKind::Greater) {
                loop {
                    parameters.push(self.parse_attribute()?);
                    if !self.eat(TokenKind::Comma)? {
                        break;
                    }
                }
            }
            if !self.at(TokenKind::Greater) {
                return Err(self.unexpected("',' or '>' in parameter list"));
            }
            self.bump()?;
        }
        Ok(Attribute::Parametrized(ParametrizedAttr {
            dialect: dialect.to_string(),
            mnemonic: mnemonic.to_string(),
            parameters,
            is_type,
        }))
    }

    /// Scans a balanced body starting at the `<` at `open`. Returns the text
    /// between the brackets and the offset just past the closing `>`.
    fn scan_opaque_body(&self, open: usize) -> PResult<(String, usize)> {
        let src = self.lx.src();
        let bytes = src.as_bytes();
        let mut stack: Vec<u8> = vec![b'>'];
        let mut i = open + 1;
        while i < bytes.len() {
            let c = bytes[i];
            match c {
                b'<' => stack.push(b'>'),
                b'(' => stack.push(b')'),
                b'[' => stack.push(b']'),
                b'{' => stack.push(b'}'),
                b'-' if bytes.get(i + 1) == Some(&b'>') => {
                    i += 2;
                    continue;
                }
                b'"' => {
                    let quote = i;
                    i += 1;
                    loop {
                        match bytes.get(i) {
                            None => {
                                return Err(self.error(
                                    DiagnosticKind::UnbalancedBody,
                                    quote,
                                    "unterminated string in dialect attribute body",
                                ))
                            }
                            Some(b'\\') => i += 2,
                            Some(b'"') => break,
                            Some(_) => i += 1,
                        }
                    }
                }
                b'>' | b')' | b']' | b'}' => {
                    let expected = stack.pop().expect("non-empty until closed");
                    if c != expected {
                        return Err(self.error(
                            DiagnosticKind::UnbalancedBody,
                            i,
                            format!(
                                "unbalanced '{}' in dialect attribute body, expected '{}'",
                                c as char, expected as char
                            ),
                        ));
                    }
                    if stack.is_empty() {
                        return Ok((src[open + 1..i].to_string(), i + 1));
                    }
                }
                _ => {}
            }
            i += 1;
        }
        Err(self.error(
            DiagnosticKind::UnbalancedBody,
            open,
            "unterminated dialect attribute body",
        ))
    }
}

fn builtin_type(text: &str) -> Option<Attribute> {
    match text {
        "index" => Some(Attribute::IndexType),
        "f16" => Some(Attribute::FloatType(FloatType::F16)),
        "f32" => Some(Attribute::FloatType(FloatType::F32)),
        "f64" => Some(Attribute::FloatType(FloatType::F64)),
        _ => {
            let digits = text.strip_prefix('i')?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 3 {
                return None;
            }
            IntegerType::new(digits.parse().ok()?).map(Attribute::IntegerType)
        }
    }
}

fn parse_integer_literal(text: &str) -> Option<i128> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let magnitude = match body.strip_prefix("0x") {
        Some(hex) => i128::from_str_radix(hex, 16).ok()?,
        None => body.parse::<i128>().ok()?,
    };
    Some(if negative { -magnitude } else { magnitude })
}
