//! Polynomial functors of representable maps and their composition.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::limits::{product, pullback, Pullback};
use super::presheaf::{Presheaf, PshMap};
use super::pushforward::pushforward;
use super::representable::{is_representable_map, RepMap};
use super::RfibError;
use crate::fincat::ObjId;

/// `P_f(X)` with its map to `B`; element `i` at stage `c` is the pair
/// `(y, x)` with `y` in `B(c)` and `x` in `X({y})`.
#[derive(Clone, Debug)]
pub struct PolyValue {
    pub to_base: PshMap,
    pub pairs: Vec<Vec<(u32, u32)>>,
    index: Vec<BTreeMap<(u32, u32), u32>>,
}

impl PolyValue {
    pub fn presheaf(&self) -> &Presheaf {
        self.to_base.dom()
    }

    pub fn index_of(&self, c: ObjId, pair: (u32, u32)) -> Option<u32> {
        self.index[c.0].get(&pair).copied()
    }
}

/// `P_f(X) = B_! f_* E^* X`, computed as the displayed composite.
pub fn polynomial_apply(f: &RepMap, x: &Presheaf) -> Result<PolyValue, RfibError> {
    f.dom().same_base(x)?;
    // E^* X = X x E -> E
    let prod = product(x, f.dom())?;
    let pf = pushforward(f, &prod.p2)?;
    // Re-encode the sections (x, generic) of X x E as elements of X.
    let pairs: Vec<Vec<(u32, u32)>> = f
        .base()
        .objects()
        .map(|c| {
            pf.pairs[c.0]
                .iter()
                .map(|&(y, s)| {
                    let w = f.comprehension(c, y);
                    (y, prod.limit.tuple(w.obj, s)[0])
                })
                .collect()
        })
        .collect();
    let index = pairs.iter().map(|r| r.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect()).collect();
    Ok(PolyValue { to_base: pf.map, pairs, index })
}

/// `P_f(phi)` for `phi : X -> Y`.
pub fn polynomial_apply_map(f: &RepMap, px: &PolyValue, py: &PolyValue, phi: &PshMap) -> Result<PshMap, RfibError> {
    let comps = f
        .base()
        .objects()
        .map(|c| {
            px.pairs[c.0]
                .iter()
                .map(|&(y, x)| {
                    let w = f.comprehension(c, y);
                    py.index_of(c, (y, phi.at(w.obj, x)))
                })
                .collect::<Option<Vec<u32>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| RfibError::Shape("map does not match the polynomial values".into()))?;
    PshMap::new(px.presheaf().clone(), py.presheaf().clone(), comps)
}

/// Evaluation `P_f(X) x_B E -> X`: `((y, x), e) |-> k^* x` where
/// `k : c -> {y}` classifies `e`.
pub fn evaluation(f: &RepMap, px: &PolyValue, x: &Presheaf) -> Result<(Pullback, PshMap), RfibError> {
    let pb = pullback(&px.to_base, f.map())?;
    let cat = &**f.base();
    let mut comps = Vec::new();
    for c in cat.objects() {
        let mut comp = Vec::new();
        for i in 0..pb.apex().size(c) {
            let t = pb.limit.tuple(c, i);
            let (y, xv) = px.pairs[c.0][t[0] as usize];
            let k = f.mediate(c, y, cat.id(c), t[1]).ok_or_else(|| RfibError::Shape("no mediating arrow".into()))?;
            comp.push(x.act(k, xv));
        }
        comps.push(comp);
    }
    let ev = PshMap::new(pb.apex().clone(), x.clone(), comps)?;
    Ok((pb, ev))
}

/// The pieces of `f (x) g`: its codomain `P_f(B_g)`, the pullback
/// `P_f(B_g) x_B E_f` (tuples `[outer, e]`) and the domain, the pullback of
/// `g` along evaluation (tuples `[pair, e_g]`).
#[derive(Clone, Debug)]
pub struct Composite {
    pub rep: RepMap,
    pub outer: PolyValue,
    pub eval_pb: Pullback,
    pub dom_pb: Pullback,
}

/// [`polynomial_compose`] with its intermediate pieces.
pub fn polynomial_compose_parts(f: &RepMap, g: &RepMap) -> Result<Composite, RfibError> {
    f.dom().same_base(g.dom())?;
    let outer = polynomial_apply(f, g.cod())?;
    let (eval_pb, ev) = evaluation(f, &outer, g.cod())?;
    let dom_pb = pullback(&ev, g.map())?;
    let m = dom_pb.p1.then(&eval_pb.p1)?;
    let rep = is_representable_map(&m)?;
    Ok(Composite { rep, outer, eval_pb, dom_pb })
}

/// The composite `f (x) g` with `P_{f (x) g} = P_f . P_g`: codomain
/// `P_f(B_g)`, domain the pullback of `g` along evaluation.
pub fn polynomial_compose(f: &RepMap, g: &RepMap) -> Result<RepMap, RfibError> {
    Ok(polynomial_compose_parts(f, g)?.rep)
}

/// The canonical comparison `P_{f (x) g}(X) -> P_f(P_g(X))`: an element
/// `((y, b), x)` with `x` over the comprehension `w` of `(y, b)` goes to
/// `(y, (b, k^* x))`, where `k` inverts the mediating arrow from `w` onto
/// the comprehension of `b` at `{y}`. Fails with `Shape` when that arrow is
/// not invertible.
pub fn composition_comparison(f: &RepMap, g: &RepMap, parts: &Composite, x: &Presheaf) -> Result<PshMap, RfibError> {
    let cat = &**f.base();
    let fg = &parts.rep;
    let lhs = polynomial_apply(fg, x)?;
    let inner = polynomial_apply(g, x)?;
    let rhs = polynomial_apply(f, inner.presheaf())?;
    let shape = |m: &str| RfibError::Shape(alloc::format!("composition comparison: {m}"));
    let mut comps = Vec::new();
    for c in cat.objects() {
        let mut comp = Vec::new();
        for &(z, xv) in &lhs.pairs[c.0] {
            let (y, b) = parts.outer.pairs[c.0][z as usize];
            let w = fg.comprehension(c, z);
            let t = parts.dom_pb.limit.tuple(w.obj, w.generic);
            let (ev, e_g) = (t[0], t[1]);
            let e_f = parts.eval_pb.limit.tuple(w.obj, ev)[1];
            let k_f = f.mediate(c, y, w.proj, e_f).ok_or_else(|| shape("no mediating arrow for f"))?;
            let yf = f.comprehension(c, y).obj;
            let k_g = g.mediate(yf, b, k_f, e_g).ok_or_else(|| shape("no mediating arrow for g"))?;
            let inv = cat.inverse(k_g).ok_or_else(|| shape("mediating arrow is not invertible"))?;
            let s = inner.index_of(yf, (b, x.act(inv, xv))).ok_or_else(|| shape("missing inner element"))?;
            comp.push(rhs.index_of(c, (y, s)).ok_or_else(|| shape("missing outer element"))?);
        }
        comps.push(comp);
    }
    PshMap::new(lhs.presheaf().clone(), rhs.presheaf().clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::fincat::build;
    use crate::rfib::search::{find_iso, find_iso_over};
    use alloc::sync::Arc;

    fn q() -> RepMap {
        let b = Arc::new(build::delta1());
        is_representable_map(&PshMap::yoneda_arrow(&b, b.arrow_by_name("u").unwrap())).unwrap()
    }

    #[test]
    fn identity_polynomial() {
        let b = Arc::new(build::chain(3));
        let x = Presheaf::yoneda(&b, ObjId(1)).coproduct(&Presheaf::constant(&b, 2)).unwrap();
        let t = Presheaf::terminal(&b);
        let p = polynomial_apply(&RepMap::identity(&t), &x).unwrap();
        assert!(find_iso(p.presheaf(), &x, &Budget::unlimited()).unwrap().is_some());
    }

    #[test]
    fn p_q_of_terminal_is_y1() {
        let q = q();
        let t = Presheaf::terminal(q.base());
        let p = polynomial_apply(&q, &t).unwrap();
        let y1 = Presheaf::yoneda(q.base(), ObjId(1));
        assert!(find_iso(p.presheaf(), &y1, &Budget::unlimited()).unwrap().is_some());
    }

    #[test]
    fn composition_with_identity() {
        let q = q();
        let id = RepMap::identity(q.cod());
        let qi = polynomial_compose(&q, &RepMap::identity(&Presheaf::terminal(q.base()))).unwrap();
        let iq = polynomial_compose(&id, &q).unwrap();
        for c in [qi, iq] {
            assert_eq!(c.cod().sizes(), q.cod().sizes());
            assert_eq!(c.dom().sizes(), q.dom().sizes());
        }
        let qq = polynomial_compose(&q, &q).unwrap();
        let x = Presheaf::constant(q.base(), 2);
        let lhs = polynomial_apply(&qq, &x).unwrap();
        let pqx = polynomial_apply(&q, &x).unwrap();
        let rhs = polynomial_apply(&q, pqx.presheaf()).unwrap();
        let over = polynomial_apply_map(&q, &rhs, &polynomial_apply(&q, q.cod()).unwrap(), &pqx.to_base).unwrap();
        let _ = &over;
        assert!(find_iso(lhs.presheaf(), rhs.presheaf(), &Budget::unlimited()).unwrap().is_some());
        let _ = find_iso_over;
    }
}
