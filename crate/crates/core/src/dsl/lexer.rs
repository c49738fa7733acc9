//! Tokens shared by the term language and the corpus format.

use std::fmt;

use crate::error::{LabError, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// A run of decimal digits, kept as text so it can double as a label.
    Int(String),
    /// `#k`, a name in staged values.
    Name(usize),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Name(i) => write!(f, "`#{i}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const SYMS: [&str; 15] = ["->", "{", "}", "[", "]", "(", ")", ",", ";", ":", "=", "@", "*", "/", "-"];

pub fn syntax_error(pos: Pos, msg: impl Into<String>) -> LabError {
    LabError::Syntax { line: pos.line, col: pos.col, msg: msg.into() }
}

/// `#` followed by a digit is a name; any other `#` starts a line comment.
pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let bump = |i: &mut usize, line: &mut usize, col: &mut usize| {
        if chars[*i] == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
        *i += 1;
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col);
        } else if c == '#' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
            bump(&mut i, &mut line, &mut col);
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump(&mut i, &mut line, &mut col);
            }
            let digits: String = chars[start..i].iter().collect();
            let k = digits.parse().map_err(|_| syntax_error(pos, "name index too large"))?;
            out.push(Token { tok: Tok::Name(k), pos });
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i, &mut line, &mut col);
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump(&mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Int(chars[start..i].iter().collect()), pos });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                bump(&mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
        } else if c == '"' {
            bump(&mut i, &mut line, &mut col);
            let start = i;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                bump(&mut i, &mut line, &mut col);
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(syntax_error(pos, "unterminated string"));
            }
            let s = chars[start..i].iter().collect();
            bump(&mut i, &mut line, &mut col);
            out.push(Token { tok: Tok::Str(s), pos });
        } else {
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let sym = SYMS
                .iter()
                .find(|s| rest.starts_with(**s))
                .ok_or_else(|| syntax_error(pos, format!("unexpected character `{c}`")))?;
            for _ in 0..sym.len() {
                bump(&mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Sym(sym), pos });
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

/// A position in a token stream.
pub struct Cursor {
    toks: Vec<Token>,
    at: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Cursor> {
        Ok(Cursor { toks: tokenize(src)?, at: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    pub fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    pub fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    pub fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == kw)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.next();
        }
        hit
    }

    pub fn eat_kw(&mut self, kw: &str) -> bool {
        let hit = self.is_kw(kw);
        if hit {
            self.next();
        }
        hit
    }

    pub fn error(&self, msg: impl Into<String>) -> LabError {
        syntax_error(self.pos(), msg)
    }

    pub fn unexpected(&self, wanted: &str) -> LabError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    pub fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    /// A point label: an identifier or a digit string.
    pub fn label(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Int(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("a label")),
        }
    }

    pub fn usize(&mut self) -> Result<usize> {
        match self.peek().clone() {
            Tok::Int(s) => {
                let pos = self.pos();
                self.next();
                s.parse().map_err(|_| syntax_error(pos, "integer too large"))
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    /// `n` or `n/d`.
    pub fn rational(&mut self) -> Result<Rational> {
        let pos = self.pos();
        let Tok::Int(mut text) = self.peek().clone() else { return Err(self.unexpected("a number")) };
        self.next();
        if self.eat_sym("/") {
            let Tok::Int(d) = self.peek().clone() else { return Err(self.unexpected("a denominator")) };
            self.next();
            text = format!("{text}/{d}");
        }
        text.parse().map_err(|_| syntax_error(pos, format!("invalid rational `{text}`")))
    }

    /// Parses `item (sep item)*` up to and including `close`; the opening
    /// delimiter must already be consumed. A trailing separator is allowed.
    pub fn list<T>(&mut self, sep: &str, close: &str, mut item: impl FnMut(&mut Cursor) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        while !self.eat_sym(close) {
            out.push(item(self)?);
            if !self.eat_sym(sep) {
                self.expect_sym(close)?;
                break;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_comments_and_positions() {
        let toks = tokenize("a -> #12 # note\n  1/2").unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            [
                Tok::Ident("a".into()),
                Tok::Sym("->"),
                Tok::Name(12),
                Tok::Int("1".into()),
                Tok::Sym("/"),
                Tok::Int("2".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks[3].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn stray_character_is_positioned() {
        let err = tokenize("x\n  $").unwrap_err();
        assert_eq!(err, LabError::Syntax { line: 2, col: 3, msg: "unexpected character `$`".into() });
    }
}
