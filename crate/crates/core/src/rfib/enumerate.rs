//! Exhaustive enumeration of small presheaves and of presheaves over a
//! fixed presheaf, used by the brute-force oracles.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::presheaf::{Presheaf, PshMap};
use crate::budget::{Budget, OutOfBudget};
use crate::fincat::{ArrowId, FiniteCategory};

/// All maps `H -> target` with `H` of total size at most `max_total`.
///
/// Components are enumerated non-decreasing within each fiber, which
/// removes most (not all) isomorphic duplicates; callers needing
/// isomorphism classes deduplicate with an isomorphism search.
pub fn enumerate_over(target: &Presheaf, max_total: usize, budget: &Budget) -> Result<Vec<PshMap>, OutOfBudget> {
    let base = target.base();
    let n = base.num_objects();
    let mut out = Vec::new();
    let mut sizes = vec![0u32; n];
    size_vectors(n, max_total, 0, &mut sizes, &mut |sizes| {
        let mut comps: Vec<Vec<u32>> = sizes.iter().map(|&s| vec![0; s as usize]).collect();
        components(target, sizes, 0, 0, &mut comps, &mut |comps| {
            actions(base, target, sizes, comps, budget, &mut out)
        })
    })?;
    Ok(out)
}

/// All presheaves with total size at most `max_total` (over the terminal
/// presheaf).
pub fn enumerate_presheaves(base: &Arc<FiniteCategory>, max_total: usize, budget: &Budget) -> Result<Vec<Presheaf>, OutOfBudget> {
    let t = Presheaf::terminal(base);
    Ok(enumerate_over(&t, max_total, budget)?.into_iter().map(|m| m.dom().clone()).collect())
}

fn size_vectors(
    n: usize,
    left: usize,
    i: usize,
    sizes: &mut Vec<u32>,
    k: &mut dyn FnMut(&[u32]) -> Result<(), OutOfBudget>,
) -> Result<(), OutOfBudget> {
    if i == n {
        return k(sizes);
    }
    for s in 0..=left {
        sizes[i] = s as u32;
        size_vectors(n, left - s, i + 1, sizes, k)?;
    }
    Ok(())
}

fn components(
    target: &Presheaf,
    sizes: &[u32],
    o: usize,
    x: usize,
    comps: &mut Vec<Vec<u32>>,
    k: &mut dyn FnMut(&[Vec<u32>]) -> Result<(), OutOfBudget>,
) -> Result<(), OutOfBudget> {
    if o == sizes.len() {
        return k(comps);
    }
    if x == sizes[o] as usize {
        return components(target, sizes, o + 1, 0, comps, k);
    }
    let lo = if x == 0 { 0 } else { comps[o][x - 1] };
    for v in lo..target.size(crate::fincat::ObjId(o)) {
        comps[o][x] = v;
        components(target, sizes, o, x + 1, comps, k)?;
    }
    Ok(())
}

fn actions(
    base: &Arc<FiniteCategory>,
    target: &Presheaf,
    sizes: &[u32],
    comps: &[Vec<u32>],
    budget: &Budget,
    out: &mut Vec<PshMap>,
) -> Result<(), OutOfBudget> {
    let cat = &**base;
    let arrows: Vec<ArrowId> = cat.arrows().filter(|&h| !cat.is_identity(h)).collect();
    let mut table: Vec<Option<Vec<u32>>> = cat
        .arrows()
        .map(|h| if cat.is_identity(h) { Some((0..sizes[cat.src(h).0]).collect()) } else { None })
        .collect();
    // (f, g, h) with h = g . f among non-identity arrows, checked once all
    // three are assigned.
    let triples: Vec<(ArrowId, ArrowId, ArrowId)> = cat
        .arrows()
        .flat_map(|f| cat.arrows().filter_map(move |g| cat.try_compose(f, g).map(|h| (f, g, h))))
        .collect();
    assign(cat, target, sizes, comps, &arrows, 0, &mut table, &triples, budget, out)
}

#[allow(clippy::too_many_arguments)]
fn assign(
    cat: &FiniteCategory,
    target: &Presheaf,
    sizes: &[u32],
    comps: &[Vec<u32>],
    arrows: &[ArrowId],
    i: usize,
    table: &mut Vec<Option<Vec<u32>>>,
    triples: &[(ArrowId, ArrowId, ArrowId)],
    budget: &Budget,
    out: &mut Vec<PshMap>,
) -> Result<(), OutOfBudget> {
    if i == arrows.len() {
        let action = table.iter().map(|t| t.clone().unwrap()).collect();
        let h = Presheaf::from_parts(target.base().clone(), sizes.to_vec(), action);
        out.push(PshMap::from_parts(h, target.clone(), comps.to_vec()));
        return Ok(());
    }
    let h = arrows[i];
    let (a, b) = (cat.src(h), cat.tgt(h));
    let len = sizes[b.0] as usize;
    // If h is a composite of already-assigned arrows its action is forced.
    let mut funcs: Vec<u32> = vec![0; len];
    let choices: Vec<Vec<u32>> = (0..len)
        .map(|x| {
            let want = target.act(h, comps[b.0][x]);
            (0..sizes[a.0]).filter(|&v| comps[a.0][v as usize] == want).collect()
        })
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(());
    }
    let mut digits = vec![0usize; len];
    loop {
        if !budget.tick() {
            return Err(OutOfBudget);
        }
        for x in 0..len {
            funcs[x] = choices[x][digits[x]];
        }
        table[h.0] = Some(funcs.clone());
        let ok = triples.iter().all(|&(f, g, hh)| {
            let (Some(tf), Some(tg), Some(th)) = (&table[f.0], &table[g.0], &table[hh.0]) else { return true };
            (0..sizes[cat.tgt(g).0] as usize).all(|x| th[x] == tf[tg[x] as usize])
        });
        if ok {
            assign(cat, target, sizes, comps, arrows, i + 1, table, triples, budget, out)?;
        }
        // next digit vector
        let mut k = 0;
        loop {
            if k == len {
                table[h.0] = None;
                return Ok(());
            }
            digits[k] += 1;
            if digits[k] < choices[k].len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::build;

    #[test]
    fn presheaves_on_a_point_are_sets() {
        let b = Arc::new(build::terminal());
        let ps = enumerate_presheaves(&b, 3, &Budget::unlimited()).unwrap();
        assert_eq!(ps.len(), 4);
    }

    #[test]
    fn presheaves_on_delta1_are_functions() {
        // Presheaves on the walking arrow of total size <= 2: (0,0), (1,0),
        // (2,0), (0,1) is impossible? no: fiber(1) -> fiber(0) needs a
        // target, so (0,1) and (0,2) are excluded; (1,1) has one action.
        let b = Arc::new(build::delta1());
        let ps = enumerate_presheaves(&b, 2, &Budget::unlimited()).unwrap();
        let sizes: Vec<Vec<u32>> = ps.iter().map(|p| p.sizes().to_vec()).collect();
        assert_eq!(sizes, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 0]]);
        for p in &ps {
            p.check().unwrap();
        }
    }
}
