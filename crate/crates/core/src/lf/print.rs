//! Canonical pretty-printer; its output parses back to the same syntax.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::syntax::{Context, DeclKind, Item, Signature, Term, Type};

pub struct Printer<'a> {
    sig: &'a Signature,
    names: Vec<String>,
}

impl<'a> Printer<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Printer { sig, names: Vec::new() }
    }

    pub fn with_context(sig: &'a Signature, ctx: &Context) -> Self {
        let mut p = Printer::new(sig);
        for b in &ctx.entries {
            let n = p.fresh(&b.name);
            p.names.push(n);
        }
        p
    }

    /// `base` if unused and not a constant, else `base` with a numeric suffix.
    fn fresh(&self, base: &str) -> String {
        let base = if base.is_empty() || base == "_" { "x" } else { base };
        let taken = |n: &str| self.names.iter().any(|m| m == n) || self.sig.lookup(n).is_some();
        if !taken(base) {
            return base.to_string();
        }
        (1..).map(|k| format!("{base}{k}")).find(|n| !taken(n)).unwrap()
    }

    fn var_name(&self, i: u32) -> String {
        let n = self.names.len();
        match n.checked_sub(i as usize + 1) {
            Some(p) => self.names[p].clone(),
            None => format!("?{i}"),
        }
    }

    pub fn term(&mut self, t: &Term) -> String {
        match t {
            Term::Var(i, sp) => self.spine(self.var_name(*i), sp),
            Term::Const(c, sp) => self.spine(self.sig.decl(*c).name.clone(), sp),
            Term::Lam(_) => {
                let mut binders = Vec::new();
                let mut body = t;
                while let Term::Lam(b) = body {
                    let n = self.fresh("x");
                    self.names.push(n.clone());
                    binders.push(n);
                    body = b;
                }
                let s = self.term(body);
                self.names.truncate(self.names.len() - binders.len());
                format!("\\{}. {}", binders.join(" "), s)
            }
        }
    }

    fn spine(&mut self, head: String, sp: &[Term]) -> String {
        let mut s = head;
        for a in sp {
            s.push(' ');
            s.push_str(&self.atom(a));
        }
        s
    }

    fn atom(&mut self, t: &Term) -> String {
        match t {
            Term::Var(_, sp) | Term::Const(_, sp) if sp.is_empty() => self.term(t),
            _ => format!("({})", self.term(t)),
        }
    }

    pub fn ty(&mut self, t: &Type) -> String {
        match t {
            Type::Sort(c, args) => self.spine(self.sig.decl(*c).name.clone(), args),
            Type::Pi(..) => {
                let mut s = String::new();
                let mut cur = t;
                let mut k = 0;
                while let Type::Pi(a, b) = cur {
                    let d = self.ty(a);
                    let n = self.fresh("x");
                    s.push_str(&format!("({n} : {d}) "));
                    self.names.push(n);
                    k += 1;
                    cur = b;
                }
                let c = self.ty(cur);
                self.names.truncate(self.names.len() - k);
                format!("{s}-> {c}")
            }
        }
    }

    /// Prints binder groups and leaves their names in scope.
    pub fn telescope(&mut self, ctx: &Context) -> String {
        let mut parts = Vec::new();
        for b in &ctx.entries {
            let d = self.ty(&b.ty);
            let n = self.fresh(&b.name);
            parts.push(format!("({n} : {d})"));
            self.names.push(n);
        }
        parts.join(" ")
    }

    fn pop(&mut self, k: usize) {
        self.names.truncate(self.names.len() - k);
    }
}

pub fn print_term(sig: &Signature, ctx: &Context, t: &Term) -> String {
    Printer::with_context(sig, ctx).term(t)
}

pub fn print_type(sig: &Signature, ctx: &Context, t: &Type) -> String {
    Printer::with_context(sig, ctx).ty(t)
}

pub fn print_context(sig: &Signature, ctx: &Context) -> String {
    Printer::new(sig).telescope(ctx)
}

/// One item per line.
pub fn print_signature(sig: &Signature) -> String {
    let mut out = String::new();
    // Names are resolved against the prefix, so print against a growing copy.
    let mut prefix = Signature::new();
    for item in &sig.items {
        match item {
            Item::Decl(c) => {
                let d = sig.decl(*c);
                let mut p = Printer::new(&prefix);
                let tele = p.telescope(&d.params);
                let cls = match &d.kind {
                    DeclKind::Sort => "sort".to_string(),
                    DeclKind::RepSort => "rep-sort".to_string(),
                    DeclKind::Term(t) => p.ty(t),
                };
                p.pop(d.params.len());
                if tele.is_empty() {
                    out.push_str(&format!("{} : {}\n", d.name, cls));
                } else {
                    out.push_str(&format!("{} : {} -> {}\n", d.name, tele, cls));
                }
                prefix.push_decl(d.clone());
            }
            Item::Rule(r) => {
                let r = &sig.rules[*r];
                let mut p = Printer::new(&prefix);
                let tele = p.telescope(&r.ctx);
                let lhs = p.term(&r.lhs);
                let rhs = p.term(&r.rhs);
                let sep = if tele.is_empty() { "" } else { " " };
                out.push_str(&format!("rule {}{}{} : {} ~> {}\n", r.name, sep, tele, lhs, rhs));
                prefix.push_rule(r.clone());
            }
        }
    }
    out
}
