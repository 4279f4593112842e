//! Positional (de Bruijn) syntax of the logical framework.
//!
//! Index 0 is the innermost binder. Constants are always fully applied;
//! variables of dependent-product type may be applied to a spine.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(u32, Vec<Term>),
    Const(ConstId, Vec<Term>),
    Lam(Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    /// An instance of a declared sort family.
    Sort(ConstId, Vec<Term>),
    /// Dependent product; the codomain lives under one more binder.
    Pi(Box<Type>, Box<Type>),
}

/// A named entry of a telescope; the name is for diagnostics only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding {
    pub name: String,
    pub ty: Type,
}

/// A telescope: entry `i` lives in the context of entries `0..i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    pub entries: Vec<Binding>,
}

/// Substitution `Delta -> Gamma`: one term in `Delta` per entry of
/// `Gamma`, in telescope order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Sort,
    RepSort,
    /// A term constant whose type is the given sort instance.
    Term(Type),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub params: Context,
    pub kind: DeclKind,
}

/// Oriented equation `lhs ~> rhs` in the rule context. A rule whose left
/// side is a bare context variable is type-directed: it fires on any term
/// whose type matches that variable's type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub ctx: Context,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Decl(ConstId),
    Rule(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub decls: Vec<Decl>,
    pub rules: Vec<Rule>,
    /// Declaration order of constants and rules.
    pub items: Vec<Item>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_decl(&mut self, d: Decl) -> ConstId {
        let id = ConstId(self.decls.len());
        self.decls.push(d);
        self.items.push(Item::Decl(id));
        id
    }

    pub fn push_rule(&mut self, r: Rule) -> usize {
        let i = self.rules.len();
        self.rules.push(r);
        self.items.push(Item::Rule(i));
        i
    }

    pub fn decl(&self, c: ConstId) -> &Decl {
        &self.decls[c.0]
    }

    pub fn lookup(&self, name: &str) -> Option<ConstId> {
        self.decls.iter().position(|d| d.name == name).map(ConstId)
    }

    pub fn is_sort(&self, c: ConstId) -> bool {
        matches!(self.decl(c).kind, DeclKind::Sort | DeclKind::RepSort)
    }

    pub fn is_rep_sort(&self, c: ConstId) -> bool {
        matches!(self.decl(c).kind, DeclKind::RepSort)
    }

    /// Whether `ty` is an instance of a representable sort.
    pub fn is_rep_type(&self, ty: &Type) -> bool {
        matches!(ty, Type::Sort(c, _) if self.is_rep_sort(*c))
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Rules whose left side is headed by `c`.
    pub fn rules_for(&self, c: ConstId) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| matches!(r.lhs, Term::Const(h, _) if h == c))
    }

    /// Type-directed rules.
    pub fn typed_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| matches!(r.lhs, Term::Var(_, ref s) if s.is_empty()))
    }

    /// The prefix consisting of the first `n` items.
    pub fn prefix(&self, n: usize) -> Signature {
        let mut out = Signature::new();
        for item in &self.items[..n] {
            match item {
                Item::Decl(c) => {
                    out.push_decl(self.decls[c.0].clone());
                }
                Item::Rule(r) => {
                    out.push_rule(self.rules[*r].clone());
                }
            }
        }
        out
    }
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, name: impl Into<String>, ty: Type) {
        self.entries.push(Binding { name: name.into(), ty });
    }

    pub fn extended(&self, name: impl Into<String>, ty: Type) -> Context {
        let mut c = self.clone();
        c.push(name, ty);
        c
    }

    /// Type of de Bruijn variable `i`, valid in the whole context.
    pub fn var_type(&self, i: u32) -> Option<Type> {
        let n = self.entries.len();
        let pos = n.checked_sub(i as usize + 1)?;
        Some(self.entries[pos].ty.shift(i as i64 + 1, 0))
    }

    pub fn types(&self) -> impl Iterator<Item = &Type> {
        self.entries.iter().map(|b| &b.ty)
    }

    /// `self` followed by `other`, where `other` lives over `self`.
    pub fn concat(&self, other: &Context) -> Context {
        let mut c = self.clone();
        c.entries.extend(other.entries.iter().cloned());
        c
    }
}

impl Substitution {
    /// The identity substitution on a context of length `n`.
    pub fn identity(n: usize) -> Self {
        Substitution { terms: (0..n).map(|k| Term::var((n - 1 - k) as u32)).collect() }
    }

    /// The weakening `Gamma.Delta -> Gamma` for `|Gamma| = n`, `|Delta| = k`.
    pub fn weakening(n: usize, k: usize) -> Self {
        Substitution { terms: (0..n).map(|j| Term::var((n - 1 - j + k) as u32)).collect() }
    }

    /// `self : Delta -> Gamma`, `other : Theta -> Delta` gives `Theta -> Gamma`
    /// (before normalization).
    pub fn then_after(&self, other: &Substitution) -> Substitution {
        Substitution { terms: self.terms.iter().map(|t| t.subst(&other.terms)).collect() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Term {
    pub fn var(i: u32) -> Term {
        Term::Var(i, Vec::new())
    }

    pub fn constant(c: ConstId) -> Term {
        Term::Const(c, Vec::new())
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(Box::new(body))
    }

    /// Number of variable and constant occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_, s) | Term::Const(_, s) => 1 + s.iter().map(Term::size).sum::<usize>(),
            Term::Lam(b) => b.size(),
        }
    }

    /// Adds `d` to every variable index `>= cutoff`.
    pub fn shift(&self, d: i64, cutoff: u32) -> Term {
        match self {
            Term::Var(i, s) => {
                let j = if *i >= cutoff { (*i as i64 + d) as u32 } else { *i };
                Term::Var(j, s.iter().map(|t| t.shift(d, cutoff)).collect())
            }
            Term::Const(c, s) => Term::Const(*c, s.iter().map(|t| t.shift(d, cutoff)).collect()),
            Term::Lam(b) => Term::lam(b.shift(d, cutoff + 1)),
        }
    }

    /// Whether variable `i` (relative to the term's root) occurs.
    pub fn has_var(&self, i: u32) -> bool {
        match self {
            Term::Var(j, s) => *j == i || s.iter().any(|t| t.has_var(i)),
            Term::Const(_, s) => s.iter().any(|t| t.has_var(i)),
            Term::Lam(b) => b.has_var(i + 1),
        }
    }

    /// Whether any variable with index `< k` occurs.
    pub fn has_var_below(&self, k: u32) -> bool {
        (0..k).any(|i| self.has_var(i))
    }

    /// Simultaneous hereditary substitution: variable `i` becomes `s[len-1-i]`
    /// (telescope order); variables beyond `s` shift down by `s.len()`.
    pub fn subst(&self, s: &[Term]) -> Term {
        self.subst_under(s, 0)
    }

    fn subst_under(&self, s: &[Term], depth: u32) -> Term {
        let n = s.len() as u32;
        match self {
            Term::Var(i, sp) => {
                let args: Vec<Term> = sp.iter().map(|t| t.subst_under(s, depth)).collect();
                if *i < depth {
                    Term::Var(*i, args)
                } else if *i - depth < n {
                    let v = s[(n - 1 - (*i - depth)) as usize].shift(depth as i64, 0);
                    v.apply(args)
                } else {
                    Term::Var(*i - n, args)
                }
            }
            Term::Const(c, sp) => Term::Const(*c, sp.iter().map(|t| t.subst_under(s, depth)).collect()),
            Term::Lam(b) => Term::lam(b.subst_under(s, depth + 1)),
        }
    }

    /// Applies a term to arguments, contracting beta-redexes hereditarily.
    pub fn apply(self, args: Vec<Term>) -> Term {
        let mut head = self;
        for a in args {
            head = match head {
                Term::Lam(b) => b.subst(core::slice::from_ref(&a)),
                Term::Var(i, mut sp) => {
                    sp.push(a);
                    Term::Var(i, sp)
                }
                Term::Const(c, mut sp) => {
                    sp.push(a);
                    Term::Const(c, sp)
                }
            };
        }
        head
    }

    /// Eta-contracts a lambda whose body is a variable applied to the bound
    /// variable last.
    pub fn eta_contract(self) -> Term {
        match self {
            Term::Lam(b) => match *b {
                Term::Var(j, mut sp) if j != 0 && sp.last() == Some(&Term::var(0)) => {
                    sp.pop();
                    if sp.iter().any(|t| t.has_var(0)) {
                        sp.push(Term::var(0));
                        Term::lam(Term::Var(j, sp))
                    } else {
                        Term::Var(j, sp).shift(-1, 0)
                    }
                }
                body => Term::lam(body),
            },
            t => t,
        }
    }

    /// Replaces constant `c` by closed term `by` everywhere.
    pub fn map_consts(&self, f: &dyn Fn(ConstId, Vec<Term>, u32) -> Term) -> Term {
        self.map_consts_under(f, 0)
    }

    fn map_consts_under(&self, f: &dyn Fn(ConstId, Vec<Term>, u32) -> Term, depth: u32) -> Term {
        match self {
            Term::Var(i, sp) => Term::Var(*i, sp.iter().map(|t| t.map_consts_under(f, depth)).collect()),
            Term::Const(c, sp) => f(*c, sp.iter().map(|t| t.map_consts_under(f, depth)).collect(), depth),
            Term::Lam(b) => Term::lam(b.map_consts_under(f, depth + 1)),
        }
    }

    /// Constants occurring in the term.
    pub fn consts(&self, out: &mut Vec<ConstId>) {
        match self {
            Term::Var(_, sp) => sp.iter().for_each(|t| t.consts(out)),
            Term::Const(c, sp) => {
                out.push(*c);
                sp.iter().for_each(|t| t.consts(out));
            }
            Term::Lam(b) => b.consts(out),
        }
    }
}

impl Type {
    pub fn sort(c: ConstId, args: Vec<Term>) -> Type {
        Type::Sort(c, args)
    }

    pub fn pi(dom: Type, cod: Type) -> Type {
        Type::Pi(Box::new(dom), Box::new(cod))
    }

    pub fn shift(&self, d: i64, cutoff: u32) -> Type {
        match self {
            Type::Sort(c, a) => Type::Sort(*c, a.iter().map(|t| t.shift(d, cutoff)).collect()),
            Type::Pi(a, b) => Type::pi(a.shift(d, cutoff), b.shift(d, cutoff + 1)),
        }
    }

    pub fn subst(&self, s: &[Term]) -> Type {
        self.subst_under(s, 0)
    }

    fn subst_under(&self, s: &[Term], depth: u32) -> Type {
        match self {
            Type::Sort(c, a) => Type::Sort(*c, a.iter().map(|t| t.subst_under(s, depth)).collect()),
            Type::Pi(a, b) => Type::pi(a.subst_under(s, depth), b.subst_under(s, depth + 1)),
        }
    }

    pub fn has_var(&self, i: u32) -> bool {
        match self {
            Type::Sort(_, a) => a.iter().any(|t| t.has_var(i)),
            Type::Pi(a, b) => a.has_var(i) || b.has_var(i + 1),
        }
    }

    pub fn map_consts(&self, f: &dyn Fn(ConstId, Vec<Term>, u32) -> Term, g: &dyn Fn(ConstId) -> ConstId) -> Type {
        self.map_consts_under(f, g, 0)
    }

    fn map_consts_under(&self, f: &dyn Fn(ConstId, Vec<Term>, u32) -> Term, g: &dyn Fn(ConstId) -> ConstId, depth: u32) -> Type {
        match self {
            Type::Sort(c, a) => Type::Sort(g(*c), a.iter().map(|t| t.map_consts_under(f, depth)).collect()),
            Type::Pi(a, b) => Type::pi(a.map_consts_under(f, g, depth), b.map_consts_under(f, g, depth + 1)),
        }
    }

    /// Number of leading dependent-product binders.
    pub fn arity(&self) -> usize {
        match self {
            Type::Pi(_, b) => 1 + b.arity(),
            Type::Sort(..) => 0,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Sort(_, a) => 1 + a.iter().map(Term::size).sum::<usize>(),
            Type::Pi(a, b) => a.size() + b.size(),
        }
    }

    pub fn consts(&self, out: &mut Vec<ConstId>) {
        match self {
            Type::Sort(c, a) => {
                out.push(*c);
                a.iter().for_each(|t| t.consts(out));
            }
            Type::Pi(a, b) => {
                a.consts(out);
                b.consts(out);
            }
        }
    }
}

/// Instantiates the telescope-relative type `ty` (living over `k` telescope
/// entries) with arguments given in telescope order.
pub fn instantiate(ty: &Type, args: &[Term]) -> Type {
    ty.subst(args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn substitution_order_is_telescope_order() {
        // (x, y) |- pair-ish term using y then x
        let t = Term::Const(ConstId(0), vec![Term::var(0), Term::var(1)]);
        let s = t.subst(&[Term::constant(ConstId(1)), Term::constant(ConstId(2))]);
        assert_eq!(s, Term::Const(ConstId(0), vec![Term::constant(ConstId(2)), Term::constant(ConstId(1))]));
    }

    #[test]
    fn hereditary_substitution_contracts() {
        // f a with f := \x. c x
        let t = Term::Var(1, vec![Term::var(0)]);
        let f = Term::lam(Term::Const(ConstId(0), vec![Term::var(0)]));
        let r = t.subst(&[f, Term::constant(ConstId(7))]);
        assert_eq!(r, Term::Const(ConstId(0), vec![Term::constant(ConstId(7))]));
    }

    #[test]
    fn eta_contraction() {
        let t = Term::lam(Term::Var(2, vec![Term::var(1), Term::var(0)]));
        assert_eq!(t.eta_contract(), Term::Var(1, vec![Term::var(0)]));
        let keep = Term::lam(Term::Var(1, vec![Term::var(0), Term::var(0)]));
        assert_eq!(keep.clone().eta_contract(), keep);
    }

    #[test]
    fn identity_substitution_is_neutral() {
        let t = Term::Const(ConstId(0), vec![Term::var(0), Term::lam(Term::Var(2, vec![Term::var(0)]))]);
        assert_eq!(t.subst(&Substitution::identity(2).terms), t);
    }
}
