//! ASCII concrete syntax.
//!
//! ```text
//! term    ::= '[' ident ':' term ']' term        abstraction
//!           | '(' ident ':' term ')' term        product
//!           | app ( '->' term )?                 arrow, right-associative
//! app     ::= postfix+                           left-associative
//! postfix ::= atom ( '^' '(' term ')' )?         mark (marked terms only)
//! atom    ::= 'Prop' | 'Type' | ident | '(' term ')'
//! ```
//!
//! Contexts are `name : term` entries separated by `;` or newlines. `#`
//! starts a comment running to the end of the line.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::marked::{MarkedContext, MarkedTerm};
use crate::term::{Context, Name, Sort, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}",
            self.span.line, self.span.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Prop,
    Type,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Colon,
    Arrow,
    Caret,
    Sep,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Prop => "`Prop`".into(),
            Tok::Type => "`Type`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Sep => "separator".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn span_at(src: &str, start: usize, end: usize) -> SourceSpan {
    let before = &src[..start];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(start, |i| start - i - 1) + 1;
    SourceSpan {
        start,
        end,
        line,
        column,
    }
}

fn lex(src: &str, separators: bool) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            '#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            '\n' | ';' if separators => {
                out.push((Tok::Sep, start, start + 1));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            '[' | ']' | '(' | ')' | ':' | '^' => {
                let t = match c {
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ':' => Tok::Colon,
                    _ => Tok::Caret,
                };
                out.push((t, start, start + 1));
                i += 1;
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((Tok::Arrow, start, start + 2));
                i += 2;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                let word = &src[start..i];
                let t = match word {
                    "Prop" => Tok::Prop,
                    "Type" => Tok::Type,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((t, start, i));
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    span: span_at(src, start, start + ch.len_utf8()),
                    message: format!("unexpected character `{ch}`"),
                    expected: vec![],
                });
            }
        }
    }
    out.push((Tok::Eof, src.len(), src.len()));
    Ok(out)
}

/// Parsed syntax before name resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawTerm {
    Sort(Sort, SourceSpan),
    Ident(String, SourceSpan),
    App(Box<RawTerm>, Box<RawTerm>),
    Abs(String, Box<RawTerm>, Box<RawTerm>, SourceSpan),
    Prod(String, Box<RawTerm>, Box<RawTerm>, SourceSpan),
    Arrow(Box<RawTerm>, Box<RawTerm>),
    Marked(Box<RawTerm>, Box<RawTerm>, SourceSpan),
}

impl RawTerm {
    fn span(&self) -> SourceSpan {
        match self {
            RawTerm::Sort(_, s)
            | RawTerm::Ident(_, s)
            | RawTerm::Abs(.., s)
            | RawTerm::Prod(.., s)
            | RawTerm::Marked(.., s) => *s,
            RawTerm::App(f, _) | RawTerm::Arrow(f, _) => f.span(),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn span(&self) -> SourceSpan {
        let (_, s, e) = self.toks[self.pos];
        span_at(self.src, s, e)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            span: self.span(),
            message: format!("unexpected {}", self.peek().describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn at_binder(&self) -> bool {
        match self.peek() {
            Tok::LBrack => true,
            Tok::LParen => {
                matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Colon
            }
            _ => false,
        }
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        if self.at_binder() {
            return self.binder();
        }
        let lhs = self.app()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.term()?;
            return Ok(RawTerm::Arrow(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn binder(&mut self) -> Result<RawTerm, ParseError> {
        let span = self.span();
        let open = self.bump();
        let name = self.ident()?;
        self.expect(Tok::Colon, "`:`")?;
        let dom = self.term()?;
        let body_close = if open == Tok::LBrack {
            Tok::RBrack
        } else {
            Tok::RParen
        };
        let what = if open == Tok::LBrack { "`]`" } else { "`)`" };
        self.expect(body_close, what)?;
        let body = self.term()?;
        Ok(if open == Tok::LBrack {
            RawTerm::Abs(name, Box::new(dom), Box::new(body), span)
        } else {
            RawTerm::Prod(name, Box::new(dom), Box::new(body), span)
        })
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_) | Tok::Prop | Tok::Type | Tok::LParen | Tok::LBrack
        )
    }

    fn app(&mut self) -> Result<RawTerm, ParseError> {
        let mut acc = self.postfix()?;
        while self.starts_atom() {
            let arg = if self.at_binder() {
                self.binder()?
            } else {
                self.postfix()?
            };
            acc = RawTerm::App(Box::new(acc), Box::new(arg));
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<RawTerm, ParseError> {
        let inner = self.atom()?;
        if *self.peek() == Tok::Caret {
            let span = self.span();
            self.bump();
            self.expect(Tok::LParen, "`(`")?;
            let mark = self.term()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(RawTerm::Marked(Box::new(inner), Box::new(mark), span));
        }
        Ok(inner)
    }

    fn atom(&mut self) -> Result<RawTerm, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Prop => {
                self.bump();
                Ok(RawTerm::Sort(Sort::Prop, span))
            }
            Tok::Type => {
                self.bump();
                Ok(RawTerm::Sort(Sort::Type, span))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(RawTerm::Ident(s, span))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error(&["term"])),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

/// Parses without resolving names.
pub fn parse_raw(src: &str) -> Result<RawTerm, ParseError> {
    let mut p = Parser {
        src,
        toks: lex(src, false)?,
        pos: 0,
    };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

fn scope_error(span: SourceSpan, message: String) -> ParseError {
    ParseError {
        span,
        message,
        expected: vec![],
    }
}

fn lookup(scope: &[String], name: &str) -> Option<usize> {
    scope.iter().rev().position(|n| n == name)
}

fn resolve(raw: &RawTerm, scope: &mut Vec<String>) -> Result<Term, ParseError> {
    Ok(match raw {
        RawTerm::Sort(s, _) => Term::Sort(*s),
        RawTerm::Ident(n, span) => match lookup(scope, n) {
            Some(i) => Term::Var(i),
            None => return Err(scope_error(*span, format!("unbound identifier `{n}`"))),
        },
        RawTerm::App(f, a) => Term::app(resolve(f, scope)?, resolve(a, scope)?),
        RawTerm::Abs(n, d, b, _) | RawTerm::Prod(n, d, b, _) => {
            let dom = resolve(d, scope)?;
            scope.push(n.clone());
            let body = resolve(b, scope);
            scope.pop();
            if matches!(raw, RawTerm::Abs(..)) {
                Term::abs(n.as_str(), dom, body?)
            } else {
                Term::prod(n.as_str(), dom, body?)
            }
        }
        RawTerm::Arrow(d, c) => {
            let dom = resolve(d, scope)?;
            scope.push(String::new());
            let cod = resolve(c, scope);
            scope.pop();
            Term::Prod(Name::anon(), Box::new(dom), Box::new(cod?))
        }
        RawTerm::Marked(_, _, span) => {
            return Err(scope_error(
                *span,
                "marks are not allowed in unmarked terms".into(),
            ))
        }
    })
}

fn resolve_marked(raw: &RawTerm, scope: &mut Vec<String>) -> Result<MarkedTerm, ParseError> {
    let missing = |span| {
        scope_error(
            span,
            "variables, applications and abstractions need a mark `^(...)`".into(),
        )
    };
    Ok(match raw {
        RawTerm::Sort(s, _) => MarkedTerm::Sort(*s),
        RawTerm::Ident(_, span) | RawTerm::Abs(.., span) => return Err(missing(*span)),
        RawTerm::App(..) => return Err(missing(raw.span())),
        RawTerm::Prod(n, d, b, _) => {
            let dom = resolve_marked(d, scope)?;
            scope.push(n.clone());
            let body = resolve_marked(b, scope);
            scope.pop();
            MarkedTerm::Prod(Name::new(n.as_str()), Box::new(dom), Box::new(body?))
        }
        RawTerm::Arrow(d, c) => {
            let dom = resolve_marked(d, scope)?;
            scope.push(String::new());
            let cod = resolve_marked(c, scope);
            scope.pop();
            MarkedTerm::Prod(Name::anon(), Box::new(dom), Box::new(cod?))
        }
        RawTerm::Marked(inner, mark, span) => {
            let m = resolve_marked(mark, scope)?;
            match &**inner {
                RawTerm::Ident(n, ispan) => match lookup(scope, n) {
                    Some(i) => MarkedTerm::var(i, m),
                    None => return Err(scope_error(*ispan, format!("unbound identifier `{n}`"))),
                },
                RawTerm::App(f, a) => {
                    MarkedTerm::app(resolve_marked(f, scope)?, resolve_marked(a, scope)?, m)
                }
                RawTerm::Abs(n, d, b, _) => {
                    let dom = resolve_marked(d, scope)?;
                    scope.push(n.clone());
                    let body = resolve_marked(b, scope);
                    scope.pop();
                    MarkedTerm::abs(n.as_str(), dom, body?, m)
                }
                _ => {
                    return Err(scope_error(
                        *span,
                        "sorts and products carry no mark".into(),
                    ));
                }
            }
        }
    })
}

fn names_of(ctx: &Context) -> Vec<String> {
    ctx.entries()
        .iter()
        .map(|(n, _)| n.as_str().to_string())
        .collect()
}

/// Parses a term whose free identifiers are resolved against `ctx`.
pub fn parse_term(src: &str, ctx: &Context) -> Result<Term, ParseError> {
    let raw = parse_raw(src)?;
    resolve(&raw, &mut names_of(ctx))
}

/// Parses a marked term; free identifiers resolve against `names`
/// (outermost first).
pub fn parse_marked(src: &str, names: &[String]) -> Result<MarkedTerm, ParseError> {
    let raw = parse_raw(src)?;
    resolve_marked(&raw, &mut names.to_vec())
}

fn context_entries(src: &str) -> Result<Vec<(String, RawTerm)>, ParseError> {
    let mut p = Parser {
        src,
        toks: lex(src, true)?,
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        while *p.peek() == Tok::Sep {
            p.bump();
        }
        if *p.peek() == Tok::Eof {
            return Ok(out);
        }
        let name = p.ident()?;
        p.expect(Tok::Colon, "`:`")?;
        let ty = p.term()?;
        if !matches!(p.peek(), Tok::Sep | Tok::Eof) {
            return Err(p.error(&["`;`", "newline", "end of input"]));
        }
        out.push((name, ty));
    }
}

/// Parses `name : type` entries; earlier entries are outer.
pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    let mut scope = Vec::new();
    let mut ctx = Context::new();
    for (name, raw) in context_entries(src)? {
        let ty = resolve(&raw, &mut scope)?;
        ctx.push(name.as_str(), ty);
        scope.push(name);
    }
    Ok(ctx)
}

pub fn parse_marked_context(src: &str) -> Result<MarkedContext, ParseError> {
    let mut scope = Vec::new();
    let mut ctx = MarkedContext::new();
    for (name, raw) in context_entries(src)? {
        let ty = resolve_marked(&raw, &mut scope)?;
        ctx.push(name.as_str(), ty);
        scope.push(name);
    }
    Ok(ctx)
}

// ---------------------------------------------------------------------------
// Printing

const TOP: u8 = 0;
const ARROW_LHS: u8 = 1;
const ARG: u8 = 2;

fn is_keyword(s: &str) -> bool {
    s == "Prop" || s == "Type"
}

fn valid_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !is_keyword(s)
        && s != "_"
}

/// Picks a binder name that does not capture any free variable of the body.
fn fresh_name(hint: &Name, default: &str, free_names: &BTreeSet<String>) -> String {
    let base = if valid_ident(hint.as_str()) {
        hint.as_str()
    } else {
        default
    };
    if !free_names.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|c| !free_names.contains(c))
        .expect("unbounded candidate supply")
}

fn var_name(names: &[String], i: usize) -> String {
    if i < names.len() {
        names[names.len() - 1 - i].clone()
    } else {
        format!("#{}", i - names.len())
    }
}

/// Names of free variables of a binder body (index 0 is the binder itself).
fn body_free_names(free: BTreeSet<usize>, names: &[String]) -> BTreeSet<String> {
    free.into_iter()
        .filter(|&i| i > 0)
        .map(|i| var_name(names, i - 1))
        .collect()
}

fn wrap(s: String, yes: bool) -> String {
    if yes {
        format!("({s})")
    } else {
        s
    }
}

fn print_unmarked(t: &Term, names: &mut Vec<String>, level: u8) -> String {
    match t {
        Term::Sort(s) => s.to_string(),
        Term::Var(i) => var_name(names, *i),
        Term::App(..) => {
            let (head, args) = t.spine();
            let mut parts = vec![print_unmarked(head, names, ARG)];
            parts.extend(args.into_iter().map(|a| print_unmarked(a, names, ARG)));
            format!("({})", parts.join(" "))
        }
        Term::Abs(n, d, b) => {
            let dom = print_unmarked(d, names, TOP);
            let name = fresh_name(n, "x", &body_free_names(b.free_vars(), names));
            names.push(name.clone());
            let body = print_unmarked(b, names, TOP);
            names.pop();
            wrap(format!("[{name}:{dom}] {body}"), level > TOP)
        }
        Term::Prod(n, d, b) => {
            if !b.occurs_free(0) {
                let dom = print_unmarked(d, names, ARROW_LHS);
                names.push(String::new());
                let cod = print_unmarked(b, names, TOP);
                names.pop();
                return wrap(format!("{dom} -> {cod}"), level > TOP);
            }
            let dom = print_unmarked(d, names, TOP);
            let name = fresh_name(n, "x", &body_free_names(b.free_vars(), names));
            names.push(name.clone());
            let body = print_unmarked(b, names, TOP);
            names.pop();
            wrap(format!("({name}:{dom}) {body}"), level > TOP)
        }
    }
}

/// Renders `t`, whose free indices refer to `ctx`.
pub fn print_term(t: &Term, ctx: &Context) -> String {
    print_unmarked(t, &mut names_of(ctx), TOP)
}

/// Renders `t` against an explicit list of names (outermost first).
pub fn print_term_with(t: &Term, names: &[String]) -> String {
    print_unmarked(t, &mut names.to_vec(), TOP)
}

pub fn print_context(ctx: &Context) -> String {
    let mut names = Vec::new();
    let mut parts = Vec::new();
    for (n, ty) in ctx.entries() {
        parts.push(format!(
            "{} : {}",
            n.as_str(),
            print_unmarked(ty, &mut names, TOP)
        ));
        names.push(n.as_str().to_string());
    }
    parts.join("; ")
}

fn print_mk(t: &MarkedTerm, names: &mut Vec<String>, level: u8) -> String {
    match t {
        MarkedTerm::Sort(s) => s.to_string(),
        MarkedTerm::Var(i, m) => format!("{}^({})", var_name(names, *i), print_mk(m, names, TOP)),
        MarkedTerm::App(f, a, m) => format!(
            "({} {})^({})",
            print_mk(f, names, ARG),
            print_mk(a, names, ARG),
            print_mk(m, names, TOP)
        ),
        MarkedTerm::Abs(n, d, b, m) => {
            let dom = print_mk(d, names, TOP);
            let name = fresh_name(n, "x", &body_free_names(b.free_vars(), names));
            names.push(name.clone());
            let body = print_mk(b, names, TOP);
            names.pop();
            format!("([{name}:{dom}] {body})^({})", print_mk(m, names, TOP))
        }
        MarkedTerm::Prod(n, d, b) => {
            if !b.occurs_free(0) {
                let dom = print_mk(d, names, ARROW_LHS);
                names.push(String::new());
                let cod = print_mk(b, names, TOP);
                names.pop();
                return wrap(format!("{dom} -> {cod}"), level > TOP);
            }
            let dom = print_mk(d, names, TOP);
            let name = fresh_name(n, "x", &body_free_names(b.free_vars(), names));
            names.push(name.clone());
            let body = print_mk(b, names, TOP);
            names.pop();
            wrap(format!("({name}:{dom}) {body}"), level > TOP)
        }
    }
}

pub fn print_marked(t: &MarkedTerm, ctx: &MarkedContext) -> String {
    print_mk(t, &mut ctx.names(), TOP)
}

pub fn print_marked_with(t: &MarkedTerm, names: &[String]) -> String {
    print_mk(t, &mut names.to_vec(), TOP)
}

pub fn print_marked_context(ctx: &MarkedContext) -> String {
    let mut names = Vec::new();
    let mut parts = Vec::new();
    for (n, ty) in ctx.entries() {
        parts.push(format!(
            "{} : {}",
            n.as_str(),
            print_mk(ty, &mut names, TOP)
        ));
        names.push(n.as_str().to_string());
    }
    parts.join("; ")
}
