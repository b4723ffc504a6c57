//! Line-oriented tokens for the text formats.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Undeclared,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::Undeclared => "undeclared name",
            ErrorKind::Inconsistent => "inconsistent declaration",
        };
        write!(f, "{}:{}: {kind}: {}", self.pos.line, self.pos.col, self.message)
    }
}

impl std::error::Error for ParseError {}

pub type PResult<T> = Result<T, ParseError>;

pub fn error(pos: Pos, kind: ErrorKind, message: impl Into<String>) -> ParseError {
    ParseError { pos, kind, message: message.into() }
}

const PUNCT: &[char] = &[',', '{', '}', '[', ']', '(', ')', '=', ':'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub pos: Pos,
}

impl Token {
    pub fn is(&self, s: &str) -> bool {
        self.text == s
    }
    fn is_word(&self) -> bool {
        !(self.text.len() == 1 && self.text.starts_with(PUNCT))
    }
}

/// Whether `s` can be printed as a single word.
pub fn is_word(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || PUNCT.contains(&c) || c == '#')
}

/// Splits a line into words and single punctuation characters; `#` starts
/// a comment.
pub fn tokenize(line: &str, line_no: usize) -> Vec<Token> {
    let mut out = Vec::new();
    let mut word: Option<(String, usize)> = None;
    let flush = |word: &mut Option<(String, usize)>, out: &mut Vec<Token>| {
        if let Some((text, col)) = word.take() {
            out.push(Token { text, pos: Pos { line: line_no, col } });
        }
    };
    for (i, c) in line.chars().enumerate() {
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            flush(&mut word, &mut out);
        } else if PUNCT.contains(&c) {
            flush(&mut word, &mut out);
            out.push(Token { text: c.to_string(), pos: Pos { line: line_no, col } });
        } else {
            match &mut word {
                Some((w, _)) => w.push(c),
                None => word = Some((c.to_string(), col)),
            }
        }
    }
    flush(&mut word, &mut out);
    out
}

/// A cursor over the tokens of one statement.
pub struct Cursor<'a> {
    toks: &'a [Token],
    at: usize,
    end: Pos,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], line_no: usize, line_len: usize) -> Self {
        Cursor { toks, at: 0, end: Pos { line: line_no, col: line_len + 1 } }
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.at)
    }

    pub fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub fn next(&mut self) -> PResult<&'a Token> {
        let t = self.toks.get(self.at).ok_or_else(|| error(self.end, ErrorKind::Syntax, "unexpected end of line"))?;
        self.at += 1;
        Ok(t)
    }

    pub fn word(&mut self, what: &str) -> PResult<&'a Token> {
        let pos = self.pos();
        match self.next() {
            Ok(t) if t.is_word() => Ok(t),
            Ok(t) => Err(error(pos, ErrorKind::Syntax, format!("expected {what}, found `{}`", t.text))),
            Err(_) => Err(error(pos, ErrorKind::Syntax, format!("expected {what}"))),
        }
    }

    pub fn expect(&mut self, s: &str) -> PResult<()> {
        let pos = self.pos();
        match self.next() {
            Ok(t) if t.is(s) => Ok(()),
            Ok(t) => Err(error(pos, ErrorKind::Syntax, format!("expected `{s}`, found `{}`", t.text))),
            Err(_) => Err(error(pos, ErrorKind::Syntax, format!("expected `{s}`"))),
        }
    }

    pub fn eat(&mut self, s: &str) -> bool {
        if self.peek().is_some_and(|t| t.is(s)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn finish(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(error(t.pos, ErrorKind::Syntax, format!("unexpected `{}`", t.text))),
        }
    }

    pub fn number(&mut self, what: &str) -> PResult<usize> {
        let t = self.word(what)?;
        t.text.parse().map_err(|_| error(t.pos, ErrorKind::Syntax, format!("expected {what}, found `{}`", t.text)))
    }

    /// Comma-separated items up to the closing delimiter, which is consumed.
    pub fn list<T>(&mut self, close: &str, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    /// Comma-separated items to the end of the line.
    pub fn rest<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.at_end() {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.at_end() {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }
}
