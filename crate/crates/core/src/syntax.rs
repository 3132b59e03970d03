//! Concrete syntax.
//!
//! ```text
//! term    ::= '\' VAR '.' term | app          (nameless: '\' '.' term)
//! app     ::= operand+                        left-associative
//! operand ::= '^'* atom
//! atom    ::= VAR | '1' | '(' term ')'        ('1' only in nameless terms)
//! ```
//!
//! A lambda body extends as far right as possible and `^` binds tighter
//! than application. `λ`, `↑` and `1̲` are accepted as aliases for `\`,
//! `^` and `1`; output is always ASCII.
//!
//! Other formats: contexts `x,y,z` or `nil`; renamings `{y x}` and
//! `{y x}_a,b` (lifts outermost-first); free-variable sequences
//! `0:{x} 2:{y,z}` or `{}`; derivations one judgement per line as
//! `Rule: Γ ⊢ M`, premises indented by two spaces.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::debruijn::{DbTerm, Derivation, Rule};
use crate::freevars::FvSeq;
use crate::kernel::{Context, Renaming, Term, VarName};

/// Byte range `start..end` into the parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    fn offset(self, by: usize) -> Self {
        SourceSpan::new(self.start + by, self.end + by)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at {span}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
        }
    }
}

type Result<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    /// `_` directly after `}`
    Underscore,
    Comma,
    Colon,
    Turnstile,
    Ident(String),
    Number(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lambda => "'\\'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Underscore => "'_'".into(),
            Tok::Comma => "','".into(),
            Tok::Colon => "':'".into(),
            Tok::Turnstile => "'⊢'".into(),
            Tok::Ident(s) => format!("variable '{s}'"),
            Tok::Number(s) => format!("'{s}'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

const COMBINING_LOW_LINE: char = '\u{332}';

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out: Vec<Token> = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '\\' | 'λ' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            '^' | '↑' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '⊢' => Some(Tok::Turnstile),
            '_' if matches!(out.last(), Some(Token { tok: Tok::RBrace, span }) if span.end == start) => {
                Some(Tok::Underscore)
            }
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push(Token {
                tok,
                span: SourceSpan::new(start, start + c.len_utf8()),
            });
            continue;
        }
        if c == '|' {
            chars.next();
            if let Some(&(_, '-')) = chars.peek() {
                chars.next();
                out.push(Token {
                    tok: Tok::Turnstile,
                    span: SourceSpan::new(start, start + 2),
                });
                continue;
            }
            return Err(ParseError::new(
                SourceSpan::new(start, start + 1),
                "unexpected character '|'",
            ));
        }
        if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
            let mut end = start;
            while let Some(&(i, ch)) = chars.peek() {
                if !is_name_char(ch) {
                    break;
                }
                end = i + ch.len_utf8();
                chars.next();
            }
            let text = &input[start..end];
            let span = SourceSpan::new(start, end);
            if c.is_ascii_digit() {
                if !text.chars().all(|ch| ch.is_ascii_digit()) {
                    return Err(ParseError::new(span, format!("invalid token '{text}'")));
                }
                let mut span = span;
                if let Some(&(i, COMBINING_LOW_LINE)) = chars.peek() {
                    chars.next();
                    span.end = i + COMBINING_LOW_LINE.len_utf8();
                    if text != "1" {
                        return Err(ParseError::new(span, "only '1' may be underlined"));
                    }
                }
                out.push(Token {
                    tok: Tok::Number(text.to_owned()),
                    span,
                });
            } else if c == '\'' {
                return Err(ParseError::new(
                    SourceSpan::new(start, start + 1),
                    "unexpected character '''",
                ));
            } else {
                out.push(Token {
                    tok: Tok::Ident(text.to_owned()),
                    span,
                });
            }
            continue;
        }
        return Err(ParseError::new(
            SourceSpan::new(start, start + c.len_utf8()),
            format!("unexpected character '{c}'"),
        ));
    }
    Ok(out)
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Cursor {
    fn new(input: &str) -> Result<Self> {
        Ok(Cursor {
            tokens: tokenize(input)?,
            pos: 0,
            len: input.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_span(&self) -> SourceSpan {
        SourceSpan::new(self.len, self.len)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.tokens.get(self.pos) {
            Some(t) => ParseError::new(
                t.span,
                format!("unexpected {}, expected {expected}", t.tok.describe()),
            ),
            None => ParseError::new(
                self.eof_span(),
                format!("unexpected end of input, expected {expected}"),
            ),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token> {
        if self.peek() == Some(&tok) {
            Ok(self.next().expect("peeked"))
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn var(&mut self) -> Result<VarName> {
        match self.tokens.get(self.pos) {
            Some(Token {
                tok: Tok::Ident(name),
                span,
            }) => {
                let v = VarName::new(name).map_err(|e| ParseError::new(*span, e.to_string()))?;
                self.pos += 1;
                Ok(v)
            }
            Some(Token {
                tok: Tok::Number(n),
                span,
            }) => Err(ParseError::new(
                *span,
                format!("'{n}' cannot be used as a variable name"),
            )),
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(Token {
                tok: Tok::RParen,
                span,
            }) => Err(ParseError::new(*span, "unmatched ')'")),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }

    fn require_nonempty(&self, what: &str) -> Result<()> {
        if self.tokens.is_empty() {
            Err(ParseError::new(
                SourceSpan::new(0, self.len),
                format!("empty input, expected {what}"),
            ))
        } else {
            Ok(())
        }
    }
}

/// Shared shape of the two term grammars.
trait TermSyntax: Sized {
    const NAMELESS: bool;
    fn var(v: VarName) -> Self;
    fn one() -> Option<Self>;
    fn app(f: Self, a: Self) -> Self;
    fn up(a: Self) -> Self;
    fn lam(binder: Option<VarName>, body: Self) -> Self;
}

impl TermSyntax for Term {
    const NAMELESS: bool = false;
    fn var(v: VarName) -> Self {
        Term::Var(v)
    }
    fn one() -> Option<Self> {
        None
    }
    fn app(f: Self, a: Self) -> Self {
        Term::app(f, a)
    }
    fn up(a: Self) -> Self {
        Term::up(a)
    }
    fn lam(binder: Option<VarName>, body: Self) -> Self {
        Term::lam(binder.expect("named lambda has a binder"), body)
    }
}

impl TermSyntax for DbTerm {
    const NAMELESS: bool = true;
    fn var(v: VarName) -> Self {
        DbTerm::Var(v)
    }
    fn one() -> Option<Self> {
        Some(DbTerm::One)
    }
    fn app(f: Self, a: Self) -> Self {
        DbTerm::app(f, a)
    }
    fn up(a: Self) -> Self {
        DbTerm::up(a)
    }
    fn lam(_: Option<VarName>, body: Self) -> Self {
        DbTerm::lam(body)
    }
}

fn starts_operand(tok: Option<&Tok>) -> bool {
    matches!(
        tok,
        Some(Tok::Caret | Tok::Ident(_) | Tok::Number(_) | Tok::LParen)
    )
}

fn parse_term_at<T: TermSyntax>(c: &mut Cursor) -> Result<T> {
    if c.peek() == Some(&Tok::Lambda) {
        c.next();
        let binder = if T::NAMELESS {
            // the dot is optional here: `λλ1` reads unambiguously
            if c.peek() == Some(&Tok::Dot) {
                c.next();
            }
            None
        } else {
            let x = c.var()?;
            c.expect(Tok::Dot, "'.'")?;
            Some(x)
        };
        let body = parse_term_at::<T>(c)?;
        return Ok(T::lam(binder, body));
    }
    let mut acc = parse_operand::<T>(c)?;
    while starts_operand(c.peek()) {
        let arg = parse_operand::<T>(c)?;
        acc = T::app(acc, arg);
    }
    Ok(acc)
}

fn parse_operand<T: TermSyntax>(c: &mut Cursor) -> Result<T> {
    let mut carets = 0;
    while c.peek() == Some(&Tok::Caret) {
        c.next();
        carets += 1;
    }
    let mut atom = parse_atom::<T>(c)?;
    for _ in 0..carets {
        atom = T::up(atom);
    }
    Ok(atom)
}

fn parse_atom<T: TermSyntax>(c: &mut Cursor) -> Result<T> {
    match c.tokens.get(c.pos).cloned() {
        Some(Token {
            tok: Tok::Ident(_), ..
        }) => c.var().map(T::var),
        Some(Token {
            tok: Tok::Number(n),
            span,
        }) => match T::one() {
            Some(one) if n == "1" => {
                c.next();
                Ok(one)
            }
            _ if n == "1" => Err(ParseError::new(
                span,
                "'1' is reserved and cannot be used as a variable",
            )),
            _ => Err(ParseError::new(span, format!("unexpected number '{n}'"))),
        },
        Some(Token {
            tok: Tok::LParen,
            span: open,
        }) => {
            c.next();
            let inner = parse_term_at::<T>(c)?;
            match c.peek() {
                Some(Tok::RParen) => {
                    c.next();
                    Ok(inner)
                }
                None => Err(ParseError::new(
                    SourceSpan::new(open.start, c.len),
                    "unbalanced '(': missing ')'",
                )),
                Some(_) => Err(c.unexpected("')'")),
            }
        }
        Some(Token {
            tok: Tok::Lambda, ..
        }) => Err(c.unexpected("an operand (parenthesize lambda arguments)")),
        _ => Err(c.unexpected("a term")),
    }
}

fn parse_whole<T: TermSyntax>(text: &str) -> Result<T> {
    let mut c = Cursor::new(text)?;
    c.require_nonempty("a term")?;
    let t = parse_term_at::<T>(&mut c)?;
    c.finish()?;
    Ok(t)
}

pub fn parse_term(text: &str) -> Result<Term> {
    parse_whole::<Term>(text)
}

pub fn parse_dbterm(text: &str) -> Result<DbTerm> {
    parse_whole::<DbTerm>(text)
}

fn parse_context_at(c: &mut Cursor, stop: impl Fn(Option<&Tok>) -> bool) -> Result<Context> {
    if stop(c.peek()) {
        return Ok(Context::nil());
    }
    if let Some(Tok::Ident(name)) = c.peek() {
        if name == "nil" {
            c.next();
            return Ok(Context::nil());
        }
    }
    let mut vars = vec![c.var()?];
    while c.peek() == Some(&Tok::Comma) {
        c.next();
        vars.push(c.var()?);
    }
    Ok(Context::new(vars))
}

/// `x,y,z`; `nil` or an empty string is the empty context.
pub fn parse_context(text: &str) -> Result<Context> {
    let mut c = Cursor::new(text)?;
    let g = parse_context_at(&mut c, |t| t.is_none())?;
    c.finish()?;
    Ok(g)
}

/// `{y x}` or `{y x}_a,b`.
pub fn parse_renaming(text: &str) -> Result<Renaming> {
    let mut c = Cursor::new(text)?;
    c.require_nonempty("a renaming")?;
    c.expect(Tok::LBrace, "'{'")?;
    let target = c.var()?;
    let source = c.var()?;
    c.expect(Tok::RBrace, "'}'")?;
    let lifts = if c.peek() == Some(&Tok::Underscore) {
        c.next();
        
        parse_context_at(&mut c, |_| false)?
    } else {
        Context::nil()
    };
    c.finish()?;
    Ok(Renaming::with_lifts(target, source, lifts))
}

/// `0:{x} 2:{y,z}` or `{}`.
pub fn parse_fvseq(text: &str) -> Result<FvSeq> {
    let mut c = Cursor::new(text)?;
    c.require_nonempty("a free-variable sequence")?;
    if c.peek() == Some(&Tok::LBrace) {
        c.next();
        c.expect(Tok::RBrace, "'}' (the empty sequence is written {})")?;
        c.finish()?;
        return Ok(FvSeq::empty());
    }
    let mut levels: Vec<BTreeSet<VarName>> = Vec::new();
    while c.peek().is_some() {
        let (level, span) = match c.next() {
            Some(Token {
                tok: Tok::Number(n),
                span,
            }) => (
                n.parse::<usize>()
                    .map_err(|_| ParseError::new(span, "level index out of range"))?,
                span,
            ),
            _ => {
                c.pos -= 1;
                return Err(c.unexpected("a level index"));
            }
        };
        if level < levels.len() {
            return Err(ParseError::new(span, "levels must be strictly increasing"));
        }
        c.expect(Tok::Colon, "':'")?;
        c.expect(Tok::LBrace, "'{'")?;
        let mut set = BTreeSet::new();
        if c.peek() != Some(&Tok::RBrace) {
            set.insert(c.var()?);
            while c.peek() == Some(&Tok::Comma) {
                c.next();
                set.insert(c.var()?);
            }
        }
        c.expect(Tok::RBrace, "'}'")?;
        levels.resize(level, BTreeSet::new());
        levels.push(set);
    }
    Ok(FvSeq::from_levels(levels))
}

/// Reads the indented format produced by [`print_derivation`]. The result
/// is not checked against the rules; call [`Derivation::check`] for that.
pub fn parse_derivation(text: &str) -> Result<Derivation> {
    // (depth, node) pairs; a node is finished once a line at its depth or
    // shallower arrives
    let mut stack: Vec<(usize, Derivation)> = Vec::new();
    let mut root: Option<Derivation> = None;
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line_start = offset;
        offset += raw.len();
        let line = raw.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start_matches(' ').len();
        let line_span = SourceSpan::new(line_start, line_start + line.len());
        if indent % 2 != 0 {
            return Err(ParseError::new(line_span, "indentation must be a multiple of two spaces"));
        }
        let depth = indent / 2;
        let node = parse_judgement(&line[indent..])
            .map_err(|e| ParseError::new(e.span.offset(line_start + indent), e.message))?;
        let expected_max = stack.last().map_or(0, |(d, _)| d + 1);
        if depth > expected_max || (stack.is_empty() && depth != 0) {
            return Err(ParseError::new(line_span, "unexpected indentation"));
        }
        while stack.last().is_some_and(|(d, _)| *d >= depth) {
            let (_, done) = stack.pop().expect("nonempty");
            match stack.last_mut() {
                Some((_, parent)) => parent.premises.push(done),
                None => root = Some(done),
            }
        }
        if root.is_some() {
            return Err(ParseError::new(line_span, "more than one root judgement"));
        }
        stack.push((depth, node));
    }
    while let Some((_, done)) = stack.pop() {
        match stack.last_mut() {
            Some((_, parent)) => parent.premises.push(done),
            None => root = Some(done),
        }
    }
    root.ok_or_else(|| {
        ParseError::new(SourceSpan::new(0, text.len()), "empty input, expected a derivation")
    })
}

fn parse_judgement(line: &str) -> Result<Derivation> {
    let mut c = Cursor::new(line)?;
    let rule = match c.next() {
        Some(Token {
            tok: Tok::Ident(name),
            span,
        }) => Rule::from_name(&name)
            .ok_or_else(|| ParseError::new(span, format!("unknown rule '{name}'")))?,
        _ => {
            c.pos = 0;
            return Err(c.unexpected("a rule name"));
        }
    };
    c.expect(Tok::Colon, "':'")?;
    let context = parse_context_at(&mut c, |t| t == Some(&Tok::Turnstile))?;
    c.expect(Tok::Turnstile, "'⊢'")?;
    let subject = parse_term_at::<Term>(&mut c)?;
    c.finish()?;
    Ok(Derivation {
        rule,
        context,
        subject,
        premises: Vec::new(),
    })
}

pub fn print_term(m: &Term) -> String {
    let mut out = String::new();
    write_term(m, &mut out);
    out
}

fn write_term(m: &Term, out: &mut String) {
    match m {
        Term::Lam(x, b) => {
            out.push('\\');
            out.push_str(x.as_str());
            out.push('.');
            if !matches!(**b, Term::Lam(..)) {
                out.push(' ');
            }
            write_term(b, out);
        }
        _ => write_app(m, out),
    }
}

fn write_app(m: &Term, out: &mut String) {
    match m {
        Term::App(f, a) => {
            write_head(f, out);
            out.push(' ');
            write_operand(a, out);
        }
        _ => write_operand(m, out),
    }
}

// `^` heads are parenthesized: `(^x) y`
fn write_head(m: &Term, out: &mut String) {
    match m {
        Term::App(..) => write_app(m, out),
        Term::Var(x) => out.push_str(x.as_str()),
        _ => {
            out.push('(');
            write_term(m, out);
            out.push(')');
        }
    }
}

fn write_operand(m: &Term, out: &mut String) {
    match m {
        Term::Var(x) => out.push_str(x.as_str()),
        Term::Up(n) => {
            out.push('^');
            write_operand(n, out);
        }
        _ => {
            out.push('(');
            write_term(m, out);
            out.push(')');
        }
    }
}

pub fn print_dbterm(a: &DbTerm) -> String {
    let mut out = String::new();
    write_db(a, &mut out);
    out
}

fn write_db(a: &DbTerm, out: &mut String) {
    match a {
        DbTerm::Lam(b) => {
            out.push_str("\\.");
            if !matches!(**b, DbTerm::Lam(_)) {
                out.push(' ');
            }
            write_db(b, out);
        }
        _ => write_db_app(a, out),
    }
}

fn write_db_app(a: &DbTerm, out: &mut String) {
    match a {
        DbTerm::App(f, b) => {
            write_db_head(f, out);
            out.push(' ');
            write_db_operand(b, out);
        }
        _ => write_db_operand(a, out),
    }
}

fn write_db_head(a: &DbTerm, out: &mut String) {
    match a {
        DbTerm::App(..) => write_db_app(a, out),
        DbTerm::Var(_) | DbTerm::One => write_db_operand(a, out),
        _ => {
            out.push('(');
            write_db(a, out);
            out.push(')');
        }
    }
}

fn write_db_operand(a: &DbTerm, out: &mut String) {
    match a {
        DbTerm::Var(x) => out.push_str(x.as_str()),
        DbTerm::One => out.push('1'),
        DbTerm::Up(n) => {
            out.push('^');
            write_db_operand(n, out);
        }
        _ => {
            out.push('(');
            write_db(a, out);
            out.push(')');
        }
    }
}

pub fn print_context(g: &Context) -> String {
    if g.is_nil() {
        "nil".to_owned()
    } else {
        join_names(g.vars().iter())
    }
}

fn join_names<'a>(names: impl Iterator<Item = &'a VarName>) -> String {
    names.map(VarName::as_str).collect::<Vec<_>>().join(",")
}

pub fn print_renaming(f: &Renaming) -> String {
    let mut out = format!("{{{} {}}}", f.target, f.source);
    if !f.lifts.is_nil() {
        out.push('_');
        out.push_str(&join_names(f.lifts.vars().iter()));
    }
    out
}

pub fn print_fvseq(s: &FvSeq) -> String {
    if s.is_empty() {
        return "{}".to_owned();
    }
    s.nonempty_levels()
        .map(|(i, set)| format!("{i}:{{{}}}", join_names(set.iter())))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn print_derivation(d: &Derivation) -> String {
    fn go(d: &Derivation, depth: usize, out: &mut String) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(&format!(
            "{}: {} ⊢ {}\n",
            d.rule,
            print_context(&d.context),
            print_term(&d.subject)
        ));
        for p in &d.premises {
            go(p, depth + 1, out);
        }
    }
    let mut out = String::new();
    go(d, 0, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for DbTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_dbterm(self))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_context(self))
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_renaming(self))
    }
}

impl fmt::Display for FvSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_fvseq(self))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_derivation(self))
    }
}
