use std::fmt;
use std::sync::Arc;

use super::{Action, Name, NameSet, RecSpec, Relation, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

const RESERVED: [&str; 6] = ["tau", "t", "top", "hide", "rename", "in"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    Hole,
    Eq,
    Semi,
    Dot,
    Plus,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    ParOpen,
    ParClose,
    Arrow,
    Lt,
    Gt,
    Bar,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Zero => "`0`",
            Tok::Hole => "`_`",
            Tok::Eq => "`=`",
            Tok::Semi => "`;`",
            Tok::Dot => "`.`",
            Tok::Plus => "`+`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::ParOpen => "`|[`",
            Tok::ParClose => "`]|`",
            Tok::Arrow => "`->`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Bar => "`|`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let err = |m: String| ParseError { line: l0, col: c0, message: m };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match two.as_str() {
            "|[" => (Tok::ParOpen, 2),
            "]|" => (Tok::ParClose, 2),
            "->" => (Tok::Arrow, 2),
            _ => match c {
                '=' => (Tok::Eq, 1),
                ';' => (Tok::Semi, 1),
                '.' => (Tok::Dot, 1),
                '+' => (Tok::Plus, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                ',' => (Tok::Comma, 1),
                '<' => (Tok::Lt, 1),
                '>' => (Tok::Gt, 1),
                '|' => (Tok::Bar, 1),
                '0' if !chars.get(i + 1).is_some_and(|d| is_ident_char(*d)) => (Tok::Zero, 1),
                '_' if !chars.get(i + 1).is_some_and(|d| is_ident_char(*d)) => (Tok::Hole, 1),
                c if c.is_ascii_alphabetic() => {
                    let mut j = i;
                    while j < chars.len() && is_ident_char(chars[j]) {
                        j += 1;
                    }
                    (Tok::Ident(chars[i..j].iter().collect()), j - i)
                }
                other => return Err(err(format!("unexpected character `{other}`"))),
            },
        };
        out.push(Lexed { tok, line, col });
        i += len;
        col += len;
    }
    out.push(Lexed { tok: Tok::Eof, line, col });
    Ok(out)
}

fn is_var(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    /// Names bound by enclosing recursion binders.
    bound: Vec<NameSet>,
    allow_hole: bool,
    record_inline: bool,
    /// Inline binders seen at top level, checked once all equations are known.
    inline_binders: Vec<(Name, usize, usize)>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            bound: Vec::new(),
            allow_hole: false,
            record_inline: false,
            inline_binders: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn error_here(&self, message: String) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, col: t.col, message }
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn action_name(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_var(&s) && !RESERVED.contains(&s.as_str()) => {
                self.advance();
                Ok(Name::new(&s))
            }
            other => Err(self.error_here(format!("expected an action name, found {other}"))),
        }
    }

    fn var_name(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if is_var(&s) => {
                self.advance();
                Ok(Name::new(&s))
            }
            other => Err(self.error_here(format!("expected a process variable, found {other}"))),
        }
    }

    fn name_list(&mut self, close: Tok) -> Result<NameSet, ParseError> {
        let mut set = NameSet::new();
        if *self.peek() == close {
            self.advance();
            return Ok(set);
        }
        loop {
            set.insert(self.action_name()?);
            match self.peek().clone() {
                Tok::Comma => {
                    self.advance();
                }
                t if t == close => {
                    self.advance();
                    return Ok(set);
                }
                t => return Err(self.error_here(format!("expected `,` or {close}, found {t}"))),
            }
        }
    }

    fn pair_list(&mut self) -> Result<Relation, ParseError> {
        let mut rel = Relation::new();
        if *self.peek() == Tok::RBrace {
            self.advance();
            return Ok(rel);
        }
        loop {
            let a = self.action_name()?;
            self.expect(Tok::Arrow)?;
            let b = self.action_name()?;
            rel.insert((a, b));
            match self.peek().clone() {
                Tok::Comma => {
                    self.advance();
                }
                Tok::RBrace => {
                    self.advance();
                    return Ok(rel);
                }
                t => return Err(self.error_here(format!("expected `,` or `}}`, found {t}"))),
            }
        }
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        let mut left = self.sum()?;
        while *self.peek() == Tok::ParOpen {
            self.advance();
            let sync = self.name_list(Tok::ParClose)?;
            let right = self.sum()?;
            left = Term::par(sync, left, right);
        }
        Ok(left)
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut left = self.prefix()?;
        while *self.peek() == Tok::Plus {
            self.advance();
            let right = self.prefix()?;
            left = Term::choice(left, right);
        }
        Ok(left)
    }

    fn prefix(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.advance();
                Ok(Term::nil())
            }
            Tok::Hole if self.allow_hole => {
                self.advance();
                Ok(Term::var("_"))
            }
            Tok::LParen => {
                self.advance();
                let t = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Lt => self.inline_rec(),
            Tok::Ident(s) if s == "hide" => {
                self.advance();
                self.expect(Tok::LBrace)?;
                let hidden = self.name_list(Tok::RBrace)?;
                self.keyword("in")?;
                Ok(Term::hide(hidden, self.prefix()?))
            }
            Tok::Ident(s) if s == "rename" => {
                self.advance();
                self.expect(Tok::LBrace)?;
                let rel = self.pair_list()?;
                self.keyword("in")?;
                Ok(Term::rename(rel, self.prefix()?))
            }
            Tok::Ident(s) if is_var(&s) => {
                self.advance();
                Ok(Term::var(&s))
            }
            Tok::Ident(s) if s == "tau" || s == "t" || !RESERVED.contains(&s.as_str()) => {
                self.advance();
                let action = match s.as_str() {
                    "tau" => Action::Tau,
                    "t" => Action::Timeout,
                    _ => Action::Visible(Name::new(&s)),
                };
                if *self.peek() == Tok::Dot {
                    self.advance();
                    Ok(Term::prefix(action, self.prefix()?))
                } else {
                    Ok(Term::prefix(action, Term::nil()))
                }
            }
            other => Err(self.error_here(format!("expected a process, found {other}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.advance();
                Ok(())
            }
            other => Err(self.error_here(format!("expected `{kw}`, found {other}"))),
        }
    }

    fn inline_rec(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lt)?;
        let var = self.var_name()?;
        self.expect(Tok::Bar)?;
        // Binder names are needed before the bodies, so scan the equations first.
        let start = self.pos;
        let mut binders: Vec<(Name, usize, usize)> = Vec::new();
        let mut depth = 0usize;
        while !(depth == 0 && *self.peek() == Tok::Gt) && *self.peek() != Tok::Eof {
            let at_eq_start = depth == 0 && (self.pos == start || self.toks[self.pos - 1].tok == Tok::Semi);
            match self.peek() {
                Tok::Lt => depth += 1,
                Tok::Gt => depth -= 1,
                Tok::Ident(s) if at_eq_start && is_var(s) && *self.peek2() == Tok::Eq => {
                    let t = &self.toks[self.pos];
                    binders.push((Name::new(s), t.line, t.col));
                }
                _ => {}
            }
            self.advance();
        }
        self.pos = start;
        let mut names = NameSet::new();
        for (n, line, col) in &binders {
            if self.bound.iter().any(|b| b.contains(n)) {
                return Err(ParseError {
                    line: *line,
                    col: *col,
                    message: format!("`{n}` is already bound by an enclosing recursion"),
                });
            }
            if self.record_inline {
                self.inline_binders.push((n.clone(), *line, *col));
            }
            names.insert(n.clone());
        }
        self.bound.push(names);
        let mut spec = RecSpec::new();
        loop {
            let t = &self.toks[self.pos];
            let (line, col) = (t.line, t.col);
            let v = self.var_name()?;
            self.expect(Tok::Eq)?;
            let body = self.expr()?;
            if !spec.insert(v.clone(), body) {
                return Err(ParseError { line, col, message: format!("duplicate equation for `{v}`") });
            }
            match self.peek() {
                Tok::Semi => {
                    self.advance();
                    if *self.peek() == Tok::Gt {
                        break;
                    }
                }
                Tok::Gt => break,
                other => return Err(self.error_here(format!("expected `;` or `>`, found {other}"))),
            }
        }
        self.expect(Tok::Gt)?;
        self.bound.pop();
        if !spec.contains(&var) {
            return Err(self.error_here(format!("`{var}` has no equation in its specification")));
        }
        Ok(Term::rec(var, Arc::new(spec)))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error_here(format!("unexpected {}", self.peek())))
        }
    }
}

/// Parses a specification: a sequence of equations `X = expr;`.
pub fn parse_spec(text: &str) -> Result<RecSpec, ParseError> {
    let mut p = Parser::new(text)?;
    p.record_inline = true;
    let mut spec = RecSpec::new();
    let mut top = NameSet::new();
    while *p.peek() != Tok::Eof {
        let t = &p.toks[p.pos];
        let (line, col) = (t.line, t.col);
        let v = p.var_name()?;
        p.expect(Tok::Eq)?;
        let body = p.expr()?;
        p.expect(Tok::Semi)?;
        if !spec.insert(v.clone(), body) {
            return Err(ParseError { line, col, message: format!("duplicate equation for `{v}`") });
        }
        top.insert(v);
    }
    if let Some((n, line, col)) = p.inline_binders.iter().find(|(n, _, _)| top.contains(n)) {
        return Err(ParseError {
            line: *line,
            col: *col,
            message: format!("`{n}` is already bound by the specification"),
        });
    }
    Ok(spec)
}

/// Parses a single (possibly open) process expression.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_bound(text, NameSet::new())
}

pub(crate) fn parse_term_bound(text: &str, bound: NameSet) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    p.bound.push(bound);
    let t = p.expr()?;
    p.finish()?;
    Ok(t)
}

/// Parses a context: an expression in which `_` marks the hole.
pub fn parse_context(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    p.allow_hole = true;
    p.bound.push(NameSet::new());
    let t = p.expr()?;
    p.finish()?;
    Ok(t)
}
