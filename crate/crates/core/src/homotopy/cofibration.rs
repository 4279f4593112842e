//! Generating cofibrations and pushouts of theories along cofibrations,
//! on presentations: a pushout of a generating cofibration adjoins one
//! generator (a type or a term over a context) and no equation.

use alloc::string::String;
use alloc::vec::Vec;

use super::HomotopyError;
use crate::budget::Budget;
use crate::lf::check::Checker;
use crate::lf::enumerate::Enumerator;
use crate::lf::slice::{adjoin, enumerate_interpretations, polynomial_object, slice_theory, Interpretation, PolyTop};
use crate::lf::syntax::{Context, DeclKind, Signature, Substitution, Term, Type};

/// Top of a generating cofibration: `P^n(1) -> P^n(Ty)` adjoins a type,
/// `P^n(Ty) -> P^n(El)` a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CofTop {
    Ty,
    El,
}

impl CofTop {
    pub fn name(self) -> &'static str {
        match self {
            CofTop::Ty => "Ty",
            CofTop::El => "El",
        }
    }

    /// The polynomial tops of the source and target.
    pub fn ends(self) -> (PolyTop, PolyTop) {
        match self {
            CofTop::Ty => (PolyTop::Unit, PolyTop::Ty),
            CofTop::El => (PolyTop::Ty, PolyTop::El),
        }
    }
}

/// A generating cofibration, presented by the contexts whose free theories
/// are its source and target; the target context extends the source by
/// one entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingCofibration {
    pub n: usize,
    pub top: CofTop,
    pub source: Context,
    pub target: Context,
    /// `sig` with a freely adjoined global section of `source`.
    pub source_theory: Signature,
    /// `sig` with a freely adjoined global section of `target`; extends
    /// `source_theory` by one constant.
    pub target_theory: Signature,
}

impl GeneratingCofibration {
    /// The boundary type of the new generator, given values of the source
    /// entries.
    pub fn generator_type(&self, attaching: &[Term]) -> Type {
        self.target.entries[self.target.len() - 1].ty.subst(attaching)
    }
}

pub fn generating_cofibration(sig: &Signature, n: usize, top: CofTop, fuel: &Budget) -> Result<GeneratingCofibration, HomotopyError> {
    let (s, t) = top.ends();
    let source = polynomial_object(sig, n, s)?;
    let target = polynomial_object(sig, n, t)?;
    debug_assert_eq!(&target.entries[..source.len()], &source.entries[..]);
    Ok(GeneratingCofibration {
        n,
        top,
        source_theory: slice_theory(sig, &source, fuel)?,
        target_theory: slice_theory(sig, &target, fuel)?,
        source,
        target,
    })
}

/// One attachment: a generating cofibration and a map from its source into
/// the theory built so far, given as closed terms for the source entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub n: usize,
    pub top: CofTop,
    pub attaching: Substitution,
    /// Preferred name of the new generator.
    pub name: String,
}

/// A cofibration presented as a sequence of attachments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CofibrationPresentation {
    pub attachments: Vec<Attachment>,
}

/// The pushout of the presented cofibration along its attaching maps:
/// `base` extended by one fresh constant per attachment, with the boundary
/// given by the attaching data and no new equations.
pub fn pushout_cofibration(base: &Signature, cof: &CofibrationPresentation, fuel: &Budget) -> Result<Signature, HomotopyError> {
    let mut out = base.clone();
    for a in &cof.attachments {
        let g = generating_cofibration(&out, a.n, a.top, fuel)?;
        Checker::new(&out, fuel)
            .check_subst(&Context::new(), &g.source, &a.attaching)
            .map_err(|e| HomotopyError::Attachment(alloc::format!("{e}")))?;
        let ty = g.generator_type(&a.attaching.terms);
        adjoin(&mut out, &a.name, &ty);
    }
    Ok(out)
}

/// Outcome of the enumerated universal-property check of a one-generator
/// pushout `P` of `base` into a test theory `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutCheck {
    /// Interpretations `P -> target`.
    pub from_pushout: usize,
    /// Pairs of an interpretation `base -> target` and an extension of the
    /// transported attaching map to the generator.
    pub compatible_pairs: usize,
    /// Restriction to the pairs is a bijection.
    pub bijective: bool,
    pub complete: bool,
}

/// Compares interpretations of the pushout of one attachment into `target`
/// (fixing the first `core` items, images of size at most `size`) with
/// compatible pairs.
pub fn check_pushout_property(
    base: &Signature,
    att: &Attachment,
    target: &Signature,
    core: usize,
    size: usize,
    fuel: &Budget,
) -> Result<PushoutCheck, HomotopyError> {
    let p = pushout_cofibration(base, &CofibrationPresentation { attachments: alloc::vec![att.clone()] }, fuel)?;
    let g = generating_cofibration(base, att.n, att.top, fuel)?;
    let out = enumerate_interpretations(&p, target, core, size, fuel)?;
    let phis = enumerate_interpretations(base, target, core, size, fuel)?;
    let mut complete = out.complete && phis.complete;
    let ch = Checker::new(target, fuel);
    let mut en = Enumerator::new(target, fuel);
    let mut pairs: Vec<(Interpretation, Term)> = Vec::new();
    for phi in &phis.items {
        let sigma = phi.subst(base, &att.attaching);
        let ty = g.generator_type(&sigma.terms);
        let ty = ch.norm_type(&Context::new(), &ty)?;
        match en.terms(&Context::new(), &ty, size) {
            Ok(ts) => pairs.extend(ts.into_iter().map(|t| (phi.clone(), t))),
            Err(crate::lf::TypeError::OutOfFuel) => complete = false,
            Err(e) => return Err(e.into()),
        }
    }
    // Restrict each interpretation of the pushout to `base` and the
    // generator; the generator is the last declaration of `p`.
    let k = out.items.first().map_or(0, |i| i.images.len());
    let mut restricted: Vec<(Interpretation, Term)> = out
        .items
        .iter()
        .map(|psi| {
            let phi = Interpretation { core: psi.core, images: psi.images[..k - 1].to_vec() };
            (phi, psi.images[k - 1].clone())
        })
        .collect();
    restricted.sort();
    let before = restricted.len();
    restricted.dedup();
    let mut sorted_pairs = pairs.clone();
    sorted_pairs.sort();
    let bijective = before == restricted.len() && restricted == sorted_pairs;
    Ok(PushoutCheck { from_pushout: out.items.len(), compatible_pairs: pairs.len(), bijective, complete })
}

/// Whether two extensions of a common prefix of `core` declarations agree
/// up to reordering the later declarations and renaming them.
pub fn isomorphic_extensions(a: &Signature, b: &Signature, core: usize) -> bool {
    if a.decls.len() != b.decls.len() || a.rules.len() != b.rules.len() || core > a.decls.len() {
        return false;
    }
    if a.decls[..core].iter().zip(&b.decls[..core]).any(|(x, y)| x.kind != y.kind || x.params.types().ne(y.params.types())) {
        return false;
    }
    let extra = a.decls.len() - core;
    let mut perm: Vec<usize> = (0..extra).collect();
    let mut used = alloc::vec![false; extra];
    fn rec(a: &Signature, b: &Signature, core: usize, k: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let extra = used.len();
        if k == extra {
            return true;
        }
        for j in 0..extra {
            if used[j] {
                continue;
            }
            perm[k] = j;
            // Declaration `core + k` of `a` must match `core + j` of `b`
            // after renaming the constants fixed so far.
            let map = |c: crate::lf::ConstId| -> Option<crate::lf::ConstId> {
                if c.0 < core {
                    Some(c)
                } else if c.0 - core < k {
                    Some(crate::lf::ConstId(core + perm[c.0 - core]))
                } else {
                    None
                }
            };
            let (da, db) = (&a.decls[core + k], &b.decls[core + j]);
            if rename_decl(da, &map).is_some_and(|(params, kind)| params.types().eq(db.params.types()) && kind == db.kind) {
                used[j] = true;
                if rec(a, b, core, k + 1, perm, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    rec(a, b, core, 0, &mut perm, &mut used)
}

type Renamed = (Context, DeclKind);

fn rename_decl(d: &crate::lf::Decl, map: &dyn Fn(crate::lf::ConstId) -> Option<crate::lf::ConstId>) -> Option<Renamed> {
    let ok = core::cell::Cell::new(true);
    let f = |c: crate::lf::ConstId, args: Vec<Term>, _| match map(c) {
        Some(c2) => Term::Const(c2, args),
        None => {
            ok.set(false);
            Term::Const(c, args)
        }
    };
    let g = |c: crate::lf::ConstId| match map(c) {
        Some(c2) => c2,
        None => {
            ok.set(false);
            c
        }
    };
    let mut params = Context::new();
    for b in &d.params.entries {
        params.push(b.name.clone(), b.ty.map_consts(&f, &g));
    }
    let kind = match &d.kind {
        DeclKind::Term(t) => DeclKind::Term(t.map_consts(&f, &g)),
        k => k.clone(),
    };
    ok.get().then_some((params, kind))
}
