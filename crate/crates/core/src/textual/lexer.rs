use crate::ir::{Diagnostic, DiagnosticKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    BareIdent,
    AtIdent,
    PercentIdent,
    CaretIdent,
    /// `#dialect.mnemonic`
    HashIdent,
    /// `!dialect.mnemonic`
    BangIdent,
    String,
    Integer,
    Float,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Less,
    Greater,
    Comma,
    Equal,
    Colon,
    Arrow,
    Eof,
}

impl TokenKind {
    pub fn describe(self) -> &'static str {
        match self {
            TokenKind::BareIdent => "identifier",
            TokenKind::AtIdent => "symbol",
            TokenKind::PercentIdent => "value name",
            TokenKind::CaretIdent => "block label",
            TokenKind::HashIdent => "dialect attribute",
            TokenKind::BangIdent => "dialect type",
            TokenKind::String => "string",
            TokenKind::Integer => "integer",
            TokenKind::Float => "float",
            TokenKind::LParen => "'('",
            TokenKind::RParen => "')'",
            TokenKind::LBracket => "'['",
            TokenKind::RBracket => "']'",
            TokenKind::LBrace => "'{'",
            TokenKind::RBrace => "'}'",
            TokenKind::Less => "'<'",
            TokenKind::Greater => "'>'",
            TokenKind::Comma => "','",
            TokenKind::Equal => "'='",
            TokenKind::Colon => "':'",
            TokenKind::Arrow => "'->'",
            TokenKind::Eof => "end of input",
        }
    }
}

/// A token; `start..end` is its byte range in the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
}

/// Maps byte offsets to 1-based line and column (in characters).
#[derive(Debug, Clone)]
pub struct LineIndex {
    line_starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(src: &str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(src.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { line_starts }
    }

    pub fn line_column(&self, src: &str, offset: usize) -> (u32, u32) {
        let line = self.line_starts.partition_point(|&s| s <= offset) - 1;
        let start = self.line_starts[line];
        let column = src[start..offset.min(src.len())].chars().count() + 1;
        (line as u32 + 1, column as u32)
    }
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_continue(c: u8) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, b'_' | b'$' | b'.')
}

fn is_suffix_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, b'_' | b'$' | b'.' | b'-')
}

pub struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    lines: LineIndex,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            lines: LineIndex::new(src),
        }
    }

    pub fn src(&self) -> &'a str {
        self.src
    }

    pub fn text(&self, tok: Token) -> &'a str {
        &self.src[tok.start..tok.end]
    }

    pub fn line_column(&self, offset: usize) -> (u32, u32) {
        self.lines.line_column(self.src, offset)
    }

    pub fn error(&self, kind: DiagnosticKind, offset: usize, message: impl Into<String>) -> Diagnostic {
        let (line, column) = self.line_column(offset);
        Diagnostic::at(kind, line, column, message)
    }

    /// Continues lexing from `offset`.
    pub fn reset(&mut self, offset: usize) {
        self.pos = offset;
    }

    pub fn byte_at(&self, offset: usize) -> Option<u8> {
        self.bytes.get(offset).copied()
    }

    fn skip_trivia(&mut self) {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.bytes[self.pos..].starts_with(b"//") {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn eat_while(&mut self, f: impl Fn(u8) -> bool) {
        while self.pos < self.bytes.len() && f(self.bytes[self.pos]) {
            self.pos += 1;
        }
    }

    pub fn next_token(&mut self) -> Result<Token, Diagnostic> {
        self.skip_trivia();
        let start = self.pos;
        let tok = |kind, end| Ok(Token { kind, start, end });
        let Some(&c) = self.bytes.get(start) else {
            return tok(TokenKind::Eof, start);
        };
        let punct = match c {
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            b'[' => Some(TokenKind::LBracket),
            b']' => Some(TokenKind::RBracket),
            b'{' => Some(TokenKind::LBrace),
            b'}' => Some(TokenKind::RBrace),
            b'<' => Some(TokenKind::Less),
            b'>' => Some(TokenKind::Greater),
            b',' => Some(TokenKind::Comma),
            b'=' => Some(TokenKind::Equal),
            b':' => Some(TokenKind::Colon),
            _ => None,
        };
        if let Some(kind) = punct {
            self.pos += 1;
            return tok(kind, self.pos);
        }
        match c {
            b'-' if self.byte_at(start + 1) == Some(b'>') => {
                self.pos += 2;
                tok(TokenKind::Arrow, self.pos)
            }
            b'-' | b'0'..=b'9' => self.number(start),
            b'"' => {
                self.string_end(start)?;
                tok(TokenKind::String, self.pos)
            }
            b'%' | b'^' => {
                self.pos += 1;
                let body = self.pos;
                self.eat_while(is_suffix_char);
                if self.pos == body {
                    let what = if c == b'%' { "value name" } else { "block label" };
                    return Err(self.error(
                        DiagnosticKind::Lexical,
                        start,
                        format!("expected {what} after '{}'", c as char),
                    ));
                }
                let kind = if c == b'%' {
                    TokenKind::PercentIdent
                } else {
                    TokenKind::CaretIdent
                };
                tok(kind, self.pos)
            }
            b'#' | b'!' | b'@' => {
                self.pos += 1;
                if c == b'@' && self.byte_at(self.pos) == Some(b'"') {
                    self.string_end(self.pos)?;
                    return tok(TokenKind::AtIdent, self.pos);
                }
                if !self.byte_at(self.pos).is_some_and(is_ident_start) {
                    return Err(self.error(
                        DiagnosticKind::Lexical,
                        start,
                        format!("expected identifier after '{}'", c as char),
                    ));
                }
                self.eat_while(is_ident_continue);
                let kind = match c {
                    b'#' => TokenKind::HashIdent,
                    b'!' => TokenKind::BangIdent,
                    _ => TokenKind::AtIdent,
                };
                tok(kind, self.pos)
            }
            c if is_ident_start(c) => {
                self.eat_while(is_ident_continue);
                tok(TokenKind::BareIdent, self.pos)
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                Err(self.error(
                    DiagnosticKind::Lexical,
                    start,
                    format!("unexpected character '{ch}'"),
                ))
            }
        }
    }

    fn number(&mut self, start: usize) -> Result<Token, Diagnostic> {
        if self.bytes[self.pos] == b'-' {
            self.pos += 1;
        }
        let digits = self.pos;
        if self.bytes[self.pos..].starts_with(b"0x") {
            self.pos += 2;
            let hex = self.pos;
            self.eat_while(|c| c.is_ascii_hexdigit());
            if self.pos == hex {
                return Err(self.error(DiagnosticKind::Lexical, start, "expected hex digits"));
            }
            return Ok(Token {
                kind: TokenKind::Integer,
                start,
                end: self.pos,
            });
        }
        self.eat_while(|c| c.is_ascii_digit());
        if self.pos == digits {
            return Err(self.error(DiagnosticKind::Lexical, start, "expected digits after '-'"));
        }
        let mut kind = TokenKind::Integer;
        if self.byte_at(self.pos) == Some(b'.') {
            kind = TokenKind::Float;
            self.pos += 1;
            self.eat_while(|c| c.is_ascii_digit());
        }
        if matches!(self.byte_at(self.pos), Some(b'e' | b'E')) {
            let mut p = self.pos + 1;
            if matches!(self.byte_at(p), Some(b'+' | b'-')) {
                p += 1;
            }
            if self.byte_at(p).is_some_and(|c| c.is_ascii_digit()) {
                kind = TokenKind::Float;
                self.pos = p;
                self.eat_while(|c| c.is_ascii_digit());
            }
        }
        Ok(Token {
            kind,
            start,
            end: self.pos,
        })
    }

    /// Scans a string literal starting at the quote at `start`.
    fn string_end(&mut self, start: usize) -> Result<(), Diagnostic> {
        self.pos = start + 1;
        loop {
            match self.byte_at(self.pos) {
                None | Some(b'\n') => {
                    return Err(self.error(DiagnosticKind::Lexical, start, "unterminated string"))
                }
                Some(b'"') => {
                    self.pos += 1;
                    return Ok(());
                }
                Some(b'\\') => {
                    let esc = self.pos;
                    match self.byte_at(esc + 1) {
                        Some(b'"' | b'\\' | b'n' | b't') => self.pos += 2,
                        Some(a) if a.is_ascii_hexdigit()
                            && self.byte_at(esc + 2).is_some_and(|b| b.is_ascii_hexdigit()) =>
                        {
                            self.pos += 3
                        }
                        _ => {
                            return Err(self.error(
                                DiagnosticKind::Lexical,
                                esc,
                                "invalid escape sequence",
                            ))
                        }
                    }
                }
                Some(_) => self.pos += 1,
            }
        }
    }
}

/// Decodes a lexed string literal (including its quotes).
pub fn decode_string(text: &str) -> String {
    let inner = &text[1..text.len() - 1];
    let bytes = inner.as_bytes();
    let mut out: Vec<u8> = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'\\' {
            match bytes[i + 1] {
                b'n' => out.push(b'\n'),
                b't' => out.push(b'\t'),
                b'"' => out.push(b'"'),
                b'\\' => out.push(b'\\'),
                _ => {
                    let hex = std::str::from_utf8(&bytes[i + 1..i + 3]).unwrap_or("3F");
                    out.push(u8::from_str_radix(hex, 16).unwrap_or(b'?'));
                    i += 3;
                    continue;
                }
            }
            i += 2;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8_lossy(&out).into_owned()
}
