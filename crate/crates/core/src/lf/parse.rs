//! Text format for signatures, contexts, types and terms.
//!
//! ```text
//! # comment
//! Ty : sort
//! El : (A : Ty) -> rep-sort
//! Pi : (A : Ty) (B : (x : El A) -> Ty) -> Ty
//! rule beta (A : Ty) (a : El A) : pr1 A (pair A a) ~> a
//! ```
//!
//! Items end at `;` or at a line break outside parentheses. Lambdas are
//! written `\x y. t`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::syntax::{Binding, Context, Decl, DeclKind, Rule, Signature, Term, Type};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(String),
    Syntax(String),
    Unbound(String),
    Arity { name: String, expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Lexical(s) => write!(f, "lexical error: {s}"),
            ParseErrorKind::Syntax(s) => write!(f, "syntax error: {s}"),
            ParseErrorKind::Unbound(n) => write!(f, "unbound identifier `{n}`"),
            ParseErrorKind::Arity { name, expected, found } => {
                write!(f, "`{name}` expects {expected} arguments, found {found}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Arrow,
    Squiggle,
    LParen,
    RParen,
    Lambda,
    Dot,
    Semi,
    Sort,
    RepSort,
    Rule,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    newline_before: bool,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '-' | '+' | '*')
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut newline = true;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, newline: &mut bool| {
            out.push(Token { tok, line: tl, col: tc, newline_before: *newline });
            *newline = false;
        };
        match c {
            '\n' => {
                newline = true;
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            ':' => push(Tok::Colon, &mut newline),
            '(' => push(Tok::LParen, &mut newline),
            ')' => push(Tok::RParen, &mut newline),
            '\\' | 'λ' => push(Tok::Lambda, &mut newline),
            '.' => push(Tok::Dot, &mut newline),
            ';' => push(Tok::Semi, &mut newline),
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Arrow, &mut newline);
                i += 2;
                col += 2;
                continue;
            }
            '~' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Squiggle, &mut newline);
                i += 2;
                col += 2;
                continue;
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    // `->` ends an identifier
                    if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                        break;
                    }
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = match s.as_str() {
                    "sort" => Tok::Sort,
                    "rep-sort" => Tok::RepSort,
                    "rule" => Tok::Rule,
                    _ => Tok::Ident(s),
                };
                out.push(Token { tok, line: tl, col: tc, newline_before: newline });
                newline = false;
                continue;
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    kind: ParseErrorKind::Lexical(format!("unexpected character `{other}`")),
                })
            }
        }
        i += 1;
        col += 1;
    }
    Ok(out)
}

/// Surface expressions before scope resolution.
#[derive(Clone, Debug)]
enum Expr {
    Ident(String, usize, usize),
    App(Box<Expr>, Vec<Expr>),
    Lam(Vec<String>, Box<Expr>),
    /// Binder groups `(x y : A)` then codomain; anonymous binders are `_`.
    Pi(Vec<(String, Expr)>, Box<Expr>),
    Sort,
    RepSort,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek().map(|x| &x.tok == t).unwrap_or(false)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = match self.peek() {
            Some(t) => (t.line, t.col),
            None => self.toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1)),
        };
        Err(ParseError { line, col, kind: ParseErrorKind::Syntax(msg.into()) })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.at(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    /// Whether the next token ends the current item.
    fn at_item_end(&self) -> bool {
        match self.peek() {
            None => true,
            Some(t) => t.tok == Tok::Semi || (self.depth == 0 && t.newline_before),
        }
    }

    /// `(` ident+ `:` — the start of a binder group.
    fn at_binder_group(&self) -> bool {
        if !self.at(&Tok::LParen) {
            return false;
        }
        let mut k = self.pos + 1;
        let mut names = 0;
        while let Some(Token { tok: Tok::Ident(_), .. }) = self.toks.get(k) {
            k += 1;
            names += 1;
        }
        names > 0 && matches!(self.toks.get(k), Some(Token { tok: Tok::Colon, .. }))
    }

    fn binder_group(&mut self) -> Result<Vec<(String, Expr)>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        self.depth += 1;
        let mut names = Vec::new();
        while let Some(Token { tok: Tok::Ident(_), .. }) = self.peek() {
            names.push(self.ident()?);
        }
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        self.depth -= 1;
        Ok(names.into_iter().map(|n| (n, ty.clone())).collect())
    }

    fn binder_groups(&mut self) -> Result<Vec<(String, Expr)>, ParseError> {
        let mut out = Vec::new();
        while self.at_binder_group() && !(self.depth == 0 && self.peek().unwrap().newline_before && !out.is_empty()) {
            out.extend(self.binder_group()?);
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if self.at(&Tok::Lambda) {
            self.pos += 1;
            let mut names = Vec::new();
            while let Some(Token { tok: Tok::Ident(_), .. }) = self.peek() {
                names.push(self.ident()?);
            }
            if names.is_empty() {
                return self.err("expected binder after `\\`");
            }
            self.expect(Tok::Dot, "`.`")?;
            let body = self.expr()?;
            return Ok(Expr::Lam(names, Box::new(body)));
        }
        if self.at_binder_group() {
            let groups = self.binder_groups()?;
            self.expect(Tok::Arrow, "`->` after binders")?;
            let cod = self.expr()?;
            return Ok(Expr::Pi(groups, Box::new(cod)));
        }
        let lhs = self.app()?;
        if self.at(&Tok::Arrow) {
            self.pos += 1;
            let cod = self.expr()?;
            return Ok(Expr::Pi(alloc::vec![("_".to_string(), lhs)], Box::new(cod)));
        }
        Ok(lhs)
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        let head = self.atom()?;
        let mut args = Vec::new();
        while !self.at_item_end() && self.at_atom_start() {
            args.push(self.atom()?);
        }
        Ok(if args.is_empty() { head } else { Expr::App(Box::new(head), args) })
    }

    fn at_atom_start(&self) -> bool {
        matches!(self.peek().map(|t| &t.tok), Some(Tok::Ident(_) | Tok::LParen | Tok::Sort | Tok::RepSort))
            && !self.at_binder_group()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(t) = self.peek().cloned() else { return self.err("unexpected end of input") };
        match t.tok {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(Expr::Ident(s, t.line, t.col))
            }
            Tok::Sort => {
                self.pos += 1;
                Ok(Expr::Sort)
            }
            Tok::RepSort => {
                self.pos += 1;
                Ok(Expr::RepSort)
            }
            Tok::LParen => {
                self.pos += 1;
                self.depth += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                self.depth -= 1;
                Ok(e)
            }
            _ => self.err("expected an expression"),
        }
    }

    fn end_item(&mut self) -> Result<(), ParseError> {
        if self.at(&Tok::Semi) {
            self.pos += 1;
            return Ok(());
        }
        match self.peek() {
            None => Ok(()),
            Some(t) if t.newline_before => Ok(()),
            _ => self.err("expected end of declaration"),
        }
    }
}

/// Scope resolution against a signature and a stack of local names.
struct Scope<'a> {
    sig: &'a Signature,
    names: Vec<String>,
}

impl Scope<'_> {
    fn var(&self, n: &str) -> Option<u32> {
        self.names.iter().rev().position(|m| m == n).map(|i| i as u32)
    }

    fn unbound<T>(n: &str, line: usize, col: usize) -> Result<T, ParseError> {
        Err(ParseError { line, col, kind: ParseErrorKind::Unbound(n.into()) })
    }

    fn term(&mut self, e: &Expr) -> Result<Term, ParseError> {
        match e {
            Expr::Ident(n, l, c) => self.apply(n, *l, *c, &[]),
            Expr::App(h, args) => match &**h {
                Expr::Ident(n, l, c) => self.apply(n, *l, *c, args),
                _ => Err(ParseError { line: 0, col: 0, kind: ParseErrorKind::Syntax("only names can be applied".into()) }),
            },
            Expr::Lam(names, body) => {
                let k = names.len();
                self.names.extend(names.iter().cloned());
                let b = self.term(body);
                self.names.truncate(self.names.len() - k);
                let mut t = b?;
                for _ in 0..k {
                    t = Term::lam(t);
                }
                Ok(t)
            }
            Expr::Pi(..) | Expr::Sort | Expr::RepSort => {
                Err(ParseError { line: 0, col: 0, kind: ParseErrorKind::Syntax("expected a term, found a type".into()) })
            }
        }
    }

    fn apply(&mut self, n: &str, line: usize, col: usize, args: &[Expr]) -> Result<Term, ParseError> {
        let targs = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
        if let Some(i) = self.var(n) {
            return Ok(Term::Var(i, targs));
        }
        let Some(c) = self.sig.lookup(n) else { return Self::unbound(n, line, col) };
        if self.sig.is_sort(c) {
            return Err(ParseError { line, col, kind: ParseErrorKind::Syntax(format!("sort `{n}` used as a term")) });
        }
        let expected = self.sig.decl(c).params.len();
        if expected != targs.len() {
            return Err(ParseError {
                line,
                col,
                kind: ParseErrorKind::Arity { name: n.into(), expected, found: targs.len() },
            });
        }
        Ok(Term::Const(c, targs))
    }

    fn ty(&mut self, e: &Expr) -> Result<Type, ParseError> {
        match e {
            Expr::Pi(groups, cod) => {
                let mut doms = Vec::new();
                for (name, d) in groups {
                    doms.push(self.ty(d)?);
                    self.names.push(name.clone());
                }
                let c = self.ty(cod);
                self.names.truncate(self.names.len() - groups.len());
                let mut t = c?;
                for d in doms.into_iter().rev() {
                    t = Type::pi(d, t);
                }
                Ok(t)
            }
            Expr::Ident(n, l, c) => self.sort_instance(n, *l, *c, &[]),
            Expr::App(h, args) => match &**h {
                Expr::Ident(n, l, c) => self.sort_instance(n, *l, *c, args),
                _ => Err(ParseError { line: 0, col: 0, kind: ParseErrorKind::Syntax("expected a type".into()) }),
            },
            _ => Err(ParseError { line: 0, col: 0, kind: ParseErrorKind::Syntax("expected a type".into()) }),
        }
    }

    fn sort_instance(&mut self, n: &str, line: usize, col: usize, args: &[Expr]) -> Result<Type, ParseError> {
        if self.var(n).is_some() {
            return Err(ParseError { line, col, kind: ParseErrorKind::Syntax(format!("variable `{n}` used as a type")) });
        }
        let Some(c) = self.sig.lookup(n) else { return Self::unbound(n, line, col) };
        if !self.sig.is_sort(c) {
            return Err(ParseError { line, col, kind: ParseErrorKind::Syntax(format!("`{n}` is not a sort")) });
        }
        let targs = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
        let expected = self.sig.decl(c).params.len();
        if expected != targs.len() {
            return Err(ParseError { line, col, kind: ParseErrorKind::Arity { name: n.into(), expected, found: targs.len() } });
        }
        Ok(Type::Sort(c, targs))
    }

    fn telescope(&mut self, groups: &[(String, Expr)]) -> Result<Context, ParseError> {
        let mut ctx = Context::new();
        for (name, e) in groups {
            let ty = self.ty(e)?;
            ctx.entries.push(Binding { name: name.clone(), ty });
            self.names.push(name.clone());
        }
        Ok(ctx)
    }
}

/// Splits leading binders off a declaration classifier.
fn flatten(e: &Expr) -> (Vec<(String, Expr)>, &Expr) {
    match e {
        Expr::Pi(groups, cod) => {
            let (mut more, last) = flatten(cod);
            let mut all = groups.clone();
            all.append(&mut more);
            (all, last)
        }
        other => (Vec::new(), other),
    }
}

pub fn parse_signature(src: &str) -> Result<Signature, ParseError> {
    parse_signature_onto(Signature::new(), src)
}

/// Parses declarations extending `base`.
pub fn parse_signature_onto(base: Signature, src: &str) -> Result<Signature, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let mut sig = base;
    while p.peek().is_some() {
        if p.at(&Tok::Semi) {
            p.pos += 1;
            continue;
        }
        let start = p.peek().cloned().unwrap();
        if p.at(&Tok::Rule) {
            p.pos += 1;
            let name = p.ident()?;
            let groups = p.binder_groups()?;
            p.expect(Tok::Colon, "`:`")?;
            let lhs = p.app()?;
            p.expect(Tok::Squiggle, "`~>`")?;
            let rhs = p.expr()?;
            p.end_item()?;
            let mut sc = Scope { sig: &sig, names: Vec::new() };
            let ctx = sc.telescope(&groups)?;
            let lhs = sc.term(&lhs).map_err(|e| locate(e, &start))?;
            let rhs = sc.term(&rhs).map_err(|e| locate(e, &start))?;
            sig.push_rule(Rule { name, ctx, lhs, rhs });
            continue;
        }
        let name = p.ident()?;
        p.expect(Tok::Colon, "`:`")?;
        let cls = p.expr()?;
        p.end_item()?;
        if sig.lookup(&name).is_some() {
            return Err(ParseError {
                line: start.line,
                col: start.col,
                kind: ParseErrorKind::Syntax(format!("`{name}` is already declared")),
            });
        }
        let (groups, last) = flatten(&cls);
        let mut sc = Scope { sig: &sig, names: Vec::new() };
        let params = sc.telescope(&groups)?;
        let kind = match last {
            Expr::Sort => DeclKind::Sort,
            Expr::RepSort => DeclKind::RepSort,
            e => DeclKind::Term(sc.ty(e).map_err(|e| locate(e, &start))?),
        };
        sig.push_decl(Decl { name, params, kind });
    }
    Ok(sig)
}

fn locate(mut e: ParseError, at: &Token) -> ParseError {
    if e.line == 0 {
        e.line = at.line;
        e.col = at.col;
    }
    e
}

fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, depth: 1 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a context `(x : A) (y : B x)`.
pub fn parse_context(sig: &Signature, src: &str) -> Result<Context, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, depth: 1 };
    let groups = p.binder_groups()?;
    if p.peek().is_some() {
        return p.err("expected a binder group");
    }
    Scope { sig, names: Vec::new() }.telescope(&groups)
}

fn names_of(ctx: &Context) -> Vec<String> {
    ctx.entries.iter().map(|b| b.name.clone()).collect()
}

/// Parses a term in the given context.
pub fn parse_term(sig: &Signature, ctx: &Context, src: &str) -> Result<Term, ParseError> {
    let e = parse_expr(src)?;
    Scope { sig, names: names_of(ctx) }.term(&e).map_err(|e| if e.line == 0 { ParseError { line: 1, col: 1, ..e } } else { e })
}

/// Parses a type in the given context.
pub fn parse_type(sig: &Signature, ctx: &Context, src: &str) -> Result<Type, ParseError> {
    let e = parse_expr(src)?;
    Scope { sig, names: names_of(ctx) }.ty(&e).map_err(|e| if e.line == 0 { ParseError { line: 1, col: 1, ..e } } else { e })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lf::syntax::ConstId;
    use alloc::vec;

    #[test]
    fn generic_theory() {
        let sig = parse_signature("Ty : sort; El : (A:Ty) -> rep-sort").unwrap();
        assert_eq!(sig.decls.len(), 2);
        assert_eq!(sig.decls[0].kind, DeclKind::Sort);
        assert_eq!(sig.decls[1].kind, DeclKind::RepSort);
        assert_eq!(sig.decls[1].params.entries[0].ty, Type::Sort(ConstId(0), vec![]));
    }

    #[test]
    fn empty_file() {
        assert!(parse_signature("").unwrap().is_empty());
        assert!(parse_signature("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn unbound_identifier() {
        let e = parse_signature("Ty : sort\nEl : (A : Tp) -> rep-sort").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Unbound("Tp".into()));
        assert_eq!((e.line, e.col), (2, 11));
    }

    #[test]
    fn newline_terminates_items() {
        let sig = parse_signature("Ty : sort\nEl : (A : Ty) -> rep-sort\nUnit : Ty\ntt : El Unit\n").unwrap();
        assert_eq!(sig.decls.len(), 4);
        assert_eq!(
            sig.decls[3].kind,
            DeclKind::Term(Type::Sort(ConstId(1), vec![Term::constant(ConstId(2))]))
        );
    }

    #[test]
    fn lambdas_and_rules() {
        let src = "Ty : sort\nEl : (A : Ty) -> rep-sort\n\
                   Sg : (A : Ty) (B : (x : El A) -> Ty) -> Ty\n\
                   K : (A : Ty) -> Ty\n\
                   rule k (A : Ty) : K A ~> Sg A (\\x. A)\n";
        let sig = parse_signature(src).unwrap();
        let r = &sig.rules[0];
        assert_eq!(r.rhs, Term::Const(ConstId(2), vec![Term::var(0), Term::lam(Term::var(1))]));
    }

    #[test]
    fn arity_errors() {
        let e = parse_signature("Ty : sort\nEl : (A : Ty) -> rep-sort\nx : El").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Arity { expected: 1, found: 0, .. }));
    }
}
