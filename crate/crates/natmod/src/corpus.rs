//! Seeded generation of small test corpora: finite categories (at most 3
//! objects and 8 arrows) and presheaves over them (total size at most 8).
//! Every category is filtered through the validator; Δ¹ and the 2-chain
//! poset are always included.

use std::path::Path;
use std::sync::Arc;

use natmod_core::fincat::{build, validate_category, FiniteCategory, FunctorData};
use natmod_core::rfib::Presheaf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::NatmodError;
use crate::formats::{sha256_hex, to_json, CategoryJson, PresheafJson};

pub const MAX_OBJECTS: usize = 3;
pub const MAX_ARROWS: usize = 8;
pub const MAX_TOTAL: usize = 8;

/// Requested corpus sizes; the bounds are checked by [`corpus_generate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusSizes {
    /// Random categories besides the pinned ones.
    pub categories: usize,
    pub max_objects: usize,
    pub max_arrows: usize,
    /// Random presheaves per category.
    pub presheaves: usize,
    pub max_total: usize,
}

impl Default for CorpusSizes {
    fn default() -> Self {
        CorpusSizes { categories: 8, max_objects: MAX_OBJECTS, max_arrows: MAX_ARROWS, presheaves: 4, max_total: 6 }
    }
}

#[derive(Clone, Debug)]
pub struct NamedCategory {
    pub name: String,
    pub category: Arc<FiniteCategory>,
}

#[derive(Clone, Debug)]
pub struct NamedPresheaf {
    pub name: String,
    pub base: String,
    pub presheaf: Presheaf,
}

#[derive(Clone, Debug)]
pub struct GeneratedCorpus {
    pub seed: u64,
    pub sizes: CorpusSizes,
    pub categories: Vec<NamedCategory>,
    pub presheaves: Vec<NamedPresheaf>,
}

/// The categories always included.
pub fn pinned_categories() -> Vec<(&'static str, FiniteCategory)> {
    vec![
        ("terminal", build::terminal()),
        ("delta1", build::delta1()),
        ("chain2", build::chain(3)),
        ("cospan", build::poset(&["a", "t", "b"], &[(0, 1), (2, 1)])),
    ]
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A random poset on at most `max_objects` objects.
fn random_poset(rng: &mut ChaCha8Rng, max_objects: usize) -> FiniteCategory {
    let n = rng.gen_range(1..=max_objects);
    let mut le = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                le.push((i, j));
            }
        }
    }
    let objs = names("p", n);
    let refs: Vec<&str> = objs.iter().map(String::as_str).collect();
    build::poset(&refs, &le)
}

/// The free category on a random acyclic graph (edges go up in object
/// order, parallel edges allowed).
fn random_free(rng: &mut ChaCha8Rng, max_objects: usize) -> FiniteCategory {
    let n = rng.gen_range(1..=max_objects);
    let objs = names("v", n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..rng.gen_range(0..=2) {
                edges.push((format!("e{}", edges.len()), objs[i].clone(), objs[j].clone()));
            }
        }
    }
    let refs: Vec<&str> = objs.iter().map(String::as_str).collect();
    let erefs: Vec<(&str, &str, &str)> = edges.iter().map(|(e, s, t)| (e.as_str(), s.as_str(), t.as_str())).collect();
    build::free_on_graph(&refs, &erefs)
}

/// A random two-element monoid (rejection-sampled multiplication tables
/// with unit 0). Three-element monoids are left out: their actions on sets
/// of up to 8 elements are too many for the exhaustive oracles.
fn random_monoid(rng: &mut ChaCha8Rng) -> Option<FiniteCategory> {
    let k = 2;
    for _ in 0..64 {
        let mul: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| if i == 0 { j } else if j == 0 { i } else { rng.gen_range(0..k) }).collect()).collect();
        let rows: Vec<&[usize]> = mul.iter().map(Vec::as_slice).collect();
        let elems = names("m", k);
        let refs: Vec<&str> = elems.iter().map(String::as_str).collect();
        if let Ok(c) = build::monoid(&refs, &rows) {
            return Some(c);
        }
    }
    None
}

/// A random presheaf with total size at most `max_total`, or `None` if the
/// sampled fiber sizes admit no functorial action within the retry budget.
fn random_presheaf(rng: &mut ChaCha8Rng, base: &Arc<FiniteCategory>, max_total: usize) -> Option<Presheaf> {
    let n = base.num_objects();
    let mut sizes = vec![0u32; n];
    let total = rng.gen_range(0..=max_total);
    for _ in 0..total {
        sizes[rng.gen_range(0..n)] += 1;
    }
    let arrows: Vec<_> = base.arrows().filter(|&a| !base.is_identity(a)).collect();
    let mut action: Vec<Vec<u32>> = base.arrows().map(|a| if base.is_identity(a) { (0..sizes[base.src(a).0]).collect() } else { Vec::new() }).collect();
    let mut steps = 0usize;
    if assign(rng, base, &sizes, &arrows, 0, &mut action, &mut steps) {
        Presheaf::new(base.clone(), sizes, action).ok()
    } else {
        None
    }
}

/// Whether every composite whose factors are assigned is respected.
fn consistent(base: &FiniteCategory, action: &[Vec<u32>], assigned: &dyn Fn(usize) -> bool) -> bool {
    for f in base.arrows() {
        for g in base.arrows() {
            let Some(h) = base.try_compose(f, g) else { continue };
            if !(assigned(f.0) && assigned(g.0) && assigned(h.0)) {
                continue;
            }
            // act(f ; g) = act(f) . act(g)
            if action[h.0].iter().enumerate().any(|(x, &v)| action[f.0][action[g.0][x] as usize] != v) {
                return false;
            }
        }
    }
    true
}

fn assign(
    rng: &mut ChaCha8Rng,
    base: &FiniteCategory,
    sizes: &[u32],
    arrows: &[natmod_core::fincat::ArrowId],
    k: usize,
    action: &mut Vec<Vec<u32>>,
    steps: &mut usize,
) -> bool {
    *steps += 1;
    if *steps > 10_000 {
        return false;
    }
    if k == arrows.len() {
        return true;
    }
    let a = arrows[k];
    let (src, tgt) = (sizes[base.src(a).0], sizes[base.tgt(a).0]);
    if tgt > 0 && src == 0 {
        return false;
    }
    // A few random tables for this arrow, then backtrack.
    let done: Vec<usize> = arrows[..=k].iter().map(|a| a.0).collect();
    let assigned = |i: usize| base.is_identity(natmod_core::fincat::ArrowId(i)) || done.contains(&i);
    for _ in 0..8 {
        action[a.0] = (0..tgt).map(|_| rng.gen_range(0..src)).collect();
        if consistent(base, action, &assigned) && assign(rng, base, sizes, arrows, k + 1, action, steps) {
            return true;
        }
    }
    action[a.0].clear();
    false
}

/// Whether some functor `a -> b` is bijective on objects and arrows.
fn isomorphic(a: &FiniteCategory, b: &FiniteCategory) -> bool {
    if a.num_objects() != b.num_objects() || a.num_arrows() != b.num_arrows() {
        return false;
    }
    FunctorData::enumerate(a, b, usize::MAX).into_iter().any(|f| {
        let mut arrows = f.arrows.clone();
        arrows.sort();
        arrows.dedup();
        let mut objects = f.objects.clone();
        objects.sort();
        objects.dedup();
        arrows.len() == a.num_arrows() && objects.len() == a.num_objects()
    })
}

/// Generates a corpus reproducibly from `seed`.
pub fn corpus_generate(seed: u64, sizes: CorpusSizes) -> Result<GeneratedCorpus, NatmodError> {
    if sizes.max_objects == 0 || sizes.max_objects > MAX_OBJECTS || sizes.max_arrows > MAX_ARROWS || sizes.max_total > MAX_TOTAL {
        return Err(NatmodError::Malformed(format!(
            "corpus sizes out of bounds: at most {MAX_OBJECTS} objects, {MAX_ARROWS} arrows, presheaves of total size {MAX_TOTAL}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut categories: Vec<NamedCategory> = Vec::new();
    let admit = |name: String, c: FiniteCategory, categories: &mut Vec<NamedCategory>| {
        if c.num_objects() > sizes.max_objects || c.num_arrows() > sizes.max_arrows || !validate_category(&c.to_data()).is_valid() {
            return false;
        }
        if categories.iter().any(|k| isomorphic(&k.category, &c)) {
            return false;
        }
        categories.push(NamedCategory { name, category: Arc::new(c) });
        true
    };
    for (name, c) in pinned_categories() {
        admit(name.to_string(), c, &mut categories);
    }
    let mut made = 0;
    let mut attempts = 0;
    while made < sizes.categories && attempts < 100 * (sizes.categories + 1) {
        attempts += 1;
        let c = match rng.gen_range(0..3) {
            0 => random_poset(&mut rng, sizes.max_objects),
            1 => random_free(&mut rng, sizes.max_objects),
            _ => match random_monoid(&mut rng) {
                Some(c) => c,
                None => continue,
            },
        };
        if admit(format!("gen{made}"), c, &mut categories) {
            made += 1;
        }
    }
    let mut presheaves = Vec::new();
    for nc in &categories {
        let mut got = 0;
        let mut tries = 0;
        let mut seen = std::collections::BTreeSet::new();
        while got < sizes.presheaves && tries < 50 * (sizes.presheaves + 1) {
            tries += 1;
            if let Some(p) = random_presheaf(&mut rng, &nc.category, sizes.max_total) {
                if seen.insert(to_json(&PresheafJson::from_presheaf(&p))) {
                    presheaves.push(NamedPresheaf { name: format!("{}-psh{got}", nc.name), base: nc.name.clone(), presheaf: p });
                    got += 1;
                }
            }
        }
    }
    Ok(GeneratedCorpus { seed, sizes, categories, presheaves })
}

#[derive(Serialize)]
struct IndexEntry {
    file: String,
    sha256: String,
}

#[derive(Serialize)]
struct CorpusIndex {
    seed: u64,
    sizes: CorpusSizes,
    categories: Vec<IndexEntry>,
    presheaves: Vec<IndexEntry>,
}

impl GeneratedCorpus {
    /// Every file of the corpus as `(relative path, contents)`, in a fixed
    /// order, with an index recording the seed and content hashes.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut index = CorpusIndex { seed: self.seed, sizes: self.sizes, categories: Vec::new(), presheaves: Vec::new() };
        for c in &self.categories {
            let file = format!("categories/{}.json", c.name);
            let text = to_json(&CategoryJson::from_category(&c.category));
            index.categories.push(IndexEntry { file: file.clone(), sha256: sha256_hex(text.as_bytes()) });
            out.push((file, text));
        }
        for p in &self.presheaves {
            let file = format!("presheaves/{}.json", p.name);
            let text = to_json(&PresheafJson::from_presheaf(&p.presheaf));
            index.presheaves.push(IndexEntry { file: file.clone(), sha256: sha256_hex(text.as_bytes()) });
            out.push((file, text));
        }
        out.push(("index.json".to_string(), to_json(&index)));
        out
    }

    pub fn write(&self, dir: &Path) -> Result<(), NatmodError> {
        for (rel, text) in self.files() {
            let path = dir.join(&rel);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|source| NatmodError::Io { path: parent.display().to_string(), source })?;
            }
            std::fs::write(&path, text).map_err(|source| NatmodError::Io { path: path.display().to_string(), source })?;
        }
        Ok(())
    }

    pub fn category(&self, name: &str) -> Option<&Arc<FiniteCategory>> {
        self.categories.iter().find(|c| c.name == name).map(|c| &c.category)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        let a = corpus_generate(0, CorpusSizes::default()).unwrap().files();
        let b = corpus_generate(0, CorpusSizes::default()).unwrap().files();
        assert_eq!(a, b);
        let c = corpus_generate(1, CorpusSizes::default()).unwrap().files();
        assert_ne!(a, c);
    }

    #[test]
    fn bounds_are_enforced() {
        let sizes = CorpusSizes { max_objects: 4, ..CorpusSizes::default() };
        assert!(corpus_generate(0, sizes).is_err());
    }

    #[test]
    fn generated_presheaves_respect_bounds() {
        let c = corpus_generate(7, CorpusSizes::default()).unwrap();
        for p in &c.presheaves {
            assert!(p.presheaf.total_size() <= CorpusSizes::default().max_total);
            p.presheaf.check().unwrap();
        }
    }
}
