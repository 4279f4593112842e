//! Exhaustive enumeration of presheaf maps (all maps, monos, isos, maps
//! over a common base) by backtracking on elements with naturality pruning.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use super::presheaf::{Presheaf, PshMap};
use crate::budget::{Budget, OutOfBudget};
use crate::fincat::ObjId;

/// What kind of maps to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Any,
    Mono,
    Iso,
}

/// A search for maps `dom -> cod`, optionally over maps `p : dom -> Z`,
/// `q : cod -> Z` (requiring `q . phi = p`).
pub struct HomSearch<'a> {
    dom: &'a Presheaf,
    cod: &'a Presheaf,
    kind: MapKind,
    over: Option<(&'a PshMap, &'a PshMap)>,
    /// Pre-assigned values, per object and element.
    fixed: Option<&'a [Vec<Option<u32>>]>,
    /// Allowed values, per object and element.
    allowed: Option<&'a [Vec<Vec<u32>>]>,
    lexicographic: bool,
}

struct Var {
    obj: ObjId,
    candidates: Vec<u32>,
    /// Naturality constraints whose later variable is this one.
    checks: Vec<Check>,
}

/// `phi(lo) = act_cod(h, phi(hi))` where `lo = act_dom(h, hi)`.
struct Check {
    hi: usize,
    lo: usize,
    h: crate::fincat::ArrowId,
}

impl<'a> HomSearch<'a> {
    pub fn new(dom: &'a Presheaf, cod: &'a Presheaf) -> Self {
        HomSearch { dom, cod, kind: MapKind::Any, over: None, fixed: None, allowed: None, lexicographic: false }
    }

    pub fn kind(mut self, kind: MapKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn over(mut self, p: &'a PshMap, q: &'a PshMap) -> Self {
        self.over = Some((p, q));
        self
    }

    pub fn fixed(mut self, fixed: &'a [Vec<Option<u32>>]) -> Self {
        self.fixed = Some(fixed);
        self
    }

    pub fn allowed(mut self, allowed: &'a [Vec<Vec<u32>>]) -> Self {
        self.allowed = Some(allowed);
        self
    }

    /// Enumerate in lexicographic order of the components (object order,
    /// then element order) instead of the pruning-friendly default order.
    pub fn lexicographic(mut self) -> Self {
        self.lexicographic = true;
        self
    }

    fn vars(&self) -> Option<(Vec<Var>, Vec<Vec<usize>>)> {
        let base = &**self.dom.base();
        if self.kind == MapKind::Iso && self.dom.sizes() != self.cod.sizes() {
            return None;
        }
        if self.kind == MapKind::Mono && self.dom.sizes().iter().zip(self.cod.sizes()).any(|(a, b)| a > b) {
            return None;
        }
        // Objects receiving many arrows first: their values force the rest.
        let mut order: Vec<ObjId> = base.objects().collect();
        if !self.lexicographic {
            order.sort_by_key(|&o| (core::cmp::Reverse(base.arrows_into(o).count()), o));
        }
        let mut var_of: Vec<Vec<usize>> = base.objects().map(|o| vec![0; self.dom.size(o) as usize]).collect();
        let mut vars = Vec::new();
        for &o in &order {
            for x in 0..self.dom.size(o) {
                var_of[o.0][x as usize] = vars.len();
                let mut candidates: Vec<u32> = (0..self.cod.size(o)).collect();
                if let Some((p, q)) = self.over {
                    let px = p.at(o, x);
                    candidates.retain(|&y| q.at(o, y) == px);
                }
                if let Some(f) = self.fixed {
                    if let Some(v) = f[o.0][x as usize] {
                        candidates.retain(|&y| y == v);
                    }
                }
                if let Some(a) = self.allowed {
                    let a = &a[o.0][x as usize];
                    candidates.retain(|y| a.contains(y));
                }
                vars.push(Var { obj: o, candidates, checks: Vec::new() });
            }
        }
        for h in base.arrows() {
            if base.is_identity(h) {
                continue;
            }
            let (a, b) = (base.src(h), base.tgt(h));
            for x in 0..self.dom.size(b) {
                let hi = var_of[b.0][x as usize];
                let lo = var_of[a.0][self.dom.act(h, x) as usize];
                let later = hi.max(lo);
                vars[later].checks.push(Check { hi, lo, h });
            }
        }
        Some((vars, var_of))
    }

    /// Calls `visit` on every map found, in search order, until it breaks.
    pub fn for_each(
        &self,
        budget: &Budget,
        mut visit: impl FnMut(&PshMap) -> ControlFlow<()>,
    ) -> Result<(), OutOfBudget> {
        let Some((vars, var_of)) = self.vars() else { return Ok(()) };
        let base = self.dom.base();
        let mut assign = vec![u32::MAX; vars.len()];
        let mut used: Vec<Vec<bool>> = base.objects().map(|o| vec![false; self.cod.size(o) as usize]).collect();
        let res = self.go(0, &vars, &mut assign, &mut used, budget, &mut |assign: &[u32]| {
            let comps = base
                .objects()
                .map(|o| (0..self.dom.size(o)).map(|x| assign[var_of[o.0][x as usize]]).collect())
                .collect();
            let m = PshMap::from_parts(self.dom.clone(), self.cod.clone(), comps);
            visit(&m)
        });
        res.map(|_| ())
    }

    fn go(
        &self,
        i: usize,
        vars: &[Var],
        assign: &mut [u32],
        used: &mut [Vec<bool>],
        budget: &Budget,
        emit: &mut dyn FnMut(&[u32]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, OutOfBudget> {
        if i == vars.len() {
            return Ok(emit(assign));
        }
        let v = &vars[i];
        let injective = self.kind != MapKind::Any;
        for &y in &v.candidates {
            if !budget.tick() {
                return Err(OutOfBudget);
            }
            if injective && used[v.obj.0][y as usize] {
                continue;
            }
            assign[i] = y;
            let ok = v.checks.iter().all(|c| assign[c.lo] == self.cod.act(c.h, assign[c.hi]));
            if !ok {
                continue;
            }
            if injective {
                used[v.obj.0][y as usize] = true;
            }
            let r = self.go(i + 1, vars, assign, used, budget, emit);
            if injective {
                used[v.obj.0][y as usize] = false;
            }
            match r? {
                ControlFlow::Break(()) => return Ok(ControlFlow::Break(())),
                ControlFlow::Continue(()) => {}
            }
        }
        assign[i] = u32::MAX;
        Ok(ControlFlow::Continue(()))
    }

    /// First map in search order.
    pub fn first(&self, budget: &Budget) -> Result<Option<PshMap>, OutOfBudget> {
        let mut found = None;
        self.for_each(budget, |m| {
            found = Some(m.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    pub fn count(&self, budget: &Budget) -> Result<usize, OutOfBudget> {
        let mut n = 0;
        self.for_each(budget, |_| {
            n += 1;
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }

    pub fn collect(&self, budget: &Budget) -> Result<Vec<PshMap>, OutOfBudget> {
        let mut out = Vec::new();
        self.for_each(budget, |m| {
            out.push(m.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}

/// All maps `dom -> cod`.
pub fn hom_maps(dom: &Presheaf, cod: &Presheaf, budget: &Budget) -> Result<Vec<PshMap>, OutOfBudget> {
    HomSearch::new(dom, cod).collect(budget)
}

/// Some isomorphism `a -> b`, if one exists.
pub fn find_iso(a: &Presheaf, b: &Presheaf, budget: &Budget) -> Result<Option<PshMap>, OutOfBudget> {
    if a.sizes() != b.sizes() {
        return Ok(None);
    }
    HomSearch::new(a, b).kind(MapKind::Iso).first(budget)
}

/// Some isomorphism `dom p -> dom q` over the common codomain.
pub fn find_iso_over(p: &PshMap, q: &PshMap, budget: &Budget) -> Result<Option<PshMap>, OutOfBudget> {
    if p.cod() != q.cod() || p.dom().sizes() != q.dom().sizes() {
        return Ok(None);
    }
    HomSearch::new(p.dom(), q.dom()).kind(MapKind::Iso).over(p, q).first(budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::build;
    use alloc::sync::Arc;

    #[test]
    fn maps_from_representables_are_elements() {
        let b = Arc::new(build::chain(3));
        let x = Presheaf::yoneda(&b, ObjId(2)).coproduct(&Presheaf::constant(&b, 2)).unwrap();
        for c in b.objects() {
            let yc = Presheaf::yoneda(&b, c);
            let n = hom_maps(&yc, &x, &Budget::unlimited()).unwrap().len();
            assert_eq!(n as u32, x.size(c));
        }
    }

    #[test]
    fn iso_search_respects_budget() {
        let b = Arc::new(build::discrete(1));
        let x = Presheaf::constant(&b, 6);
        let budget = Budget::new(3);
        let r = HomSearch::new(&x, &x).kind(MapKind::Iso).count(&budget);
        assert_eq!(r, Err(OutOfBudget));
        assert_eq!(HomSearch::new(&x, &x).kind(MapKind::Iso).count(&Budget::unlimited()), Ok(720));
    }
}
