//! JSON formats. Presheaves, maps and models name objects and arrows of
//! their base and record the base's content hash, so data over different
//! bases cannot be mixed silently.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use natmod_core::fincat::{ArrowId, CategoryData, FiniteCategory, FunctorData, ObjId};
use natmod_core::homotopy::{Attachment, CofTop, CofibrationPresentation};
use natmod_core::lf::{parse_term, print_term, Context, DeclKind, Signature, Substitution};
use natmod_core::models::{DeclInterp, ModelData, ModelMorphism};
use natmod_core::rfib::representable::{Comprehension, ComprehensionWitness};
use natmod_core::rfib::{Classifier, Presheaf, PshMap};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::NatmodError;

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_text(path: &Path) -> Result<String, NatmodError> {
    std::fs::read_to_string(path).map_err(|source| NatmodError::Io { path: path.display().to_string(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, NatmodError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| NatmodError::Json { path: path.display().to_string(), source })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), NatmodError> {
    std::fs::write(path, to_json(value)).map_err(|source| NatmodError::Io { path: path.display().to_string(), source })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// A finite category with its full composition table; `[f, g, h]` in
/// `compose` means `h = g . f`. Arrow order is the canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub identities: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
}

impl CategoryJson {
    pub fn from_category(c: &FiniteCategory) -> Self {
        let d = c.to_data();
        CategoryJson {
            objects: d.objects,
            arrows: d.arrows.into_iter().map(|(id, src, tgt)| ArrowJson { id, src, tgt }).collect(),
            identities: d.identities.into_iter().collect(),
            compose: d.compose.into_iter().map(|(f, g, h)| [f, g, h]).collect(),
        }
    }

    pub fn to_data(&self) -> CategoryData {
        CategoryData {
            objects: self.objects.clone(),
            arrows: self.arrows.iter().map(|a| (a.id.clone(), a.src.clone(), a.tgt.clone())).collect(),
            identities: self.identities.iter().map(|(o, a)| (o.clone(), a.clone())).collect(),
            compose: self.compose.iter().map(|[f, g, h]| (f.clone(), g.clone(), h.clone())).collect(),
        }
    }

    pub fn to_category(&self) -> Result<FiniteCategory, NatmodError> {
        Ok(FiniteCategory::new(&self.to_data())?)
    }
}

/// Content hash of a category: SHA-256 of its canonical JSON, so layout of
/// the input file does not matter.
pub fn category_hash(c: &FiniteCategory) -> String {
    sha256_hex(serde_json::to_string(&CategoryJson::from_category(c)).expect("serializable").as_bytes())
}

fn check_base(expected: &str, base: &FiniteCategory) -> Result<(), NatmodError> {
    let found = category_hash(base);
    if expected != found {
        return Err(NatmodError::BaseMismatch { expected: expected.to_string(), found });
    }
    Ok(())
}

fn obj_by_name(base: &FiniteCategory, name: &str) -> Result<ObjId, NatmodError> {
    base.object_by_name(name).ok_or_else(|| NatmodError::Malformed(format!("unknown object `{name}`")))
}

fn arrow_by_name(base: &FiniteCategory, name: &str) -> Result<ArrowId, NatmodError> {
    base.arrow_by_name(name).ok_or_else(|| NatmodError::Malformed(format!("unknown arrow `{name}`")))
}

/// Per-object rows keyed by object name.
fn rows_to_json(base: &FiniteCategory, rows: &[Vec<u32>]) -> BTreeMap<String, Vec<u32>> {
    base.objects().map(|o| (base.object_name(o).to_string(), rows[o.0].clone())).collect()
}

fn rows_from_json(base: &FiniteCategory, rows: &BTreeMap<String, Vec<u32>>) -> Result<Vec<Vec<u32>>, NatmodError> {
    for k in rows.keys() {
        obj_by_name(base, k)?;
    }
    base.objects()
        .map(|o| {
            rows.get(base.object_name(o))
                .cloned()
                .ok_or_else(|| NatmodError::Malformed(format!("missing row for object `{}`", base.object_name(o))))
        })
        .collect()
}

/// A presheaf: fiber sizes per object and, per arrow `h : a -> b`, the
/// action table sending the fiber at `b` to the fiber at `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub base: String,
    pub fibers: BTreeMap<String, u32>,
    pub action: BTreeMap<String, Vec<u32>>,
}

impl PresheafJson {
    pub fn from_presheaf(p: &Presheaf) -> Self {
        let b = &**p.base();
        PresheafJson {
            base: category_hash(b),
            fibers: b.objects().map(|o| (b.object_name(o).to_string(), p.size(o))).collect(),
            action: b.arrows().map(|h| (b.arrow_name(h).to_string(), p.action_table(h).to_vec())).collect(),
        }
    }

    pub fn to_presheaf(&self, base: &Arc<FiniteCategory>) -> Result<Presheaf, NatmodError> {
        check_base(&self.base, base)?;
        for k in self.fibers.keys() {
            obj_by_name(base, k)?;
        }
        for k in self.action.keys() {
            arrow_by_name(base, k)?;
        }
        let sizes = base
            .objects()
            .map(|o| self.fibers.get(base.object_name(o)).copied().ok_or_else(|| NatmodError::Malformed(format!("missing fiber `{}`", base.object_name(o)))))
            .collect::<Result<Vec<u32>, _>>()?;
        let action = base
            .arrows()
            .map(|h| self.action.get(base.arrow_name(h)).cloned().ok_or_else(|| NatmodError::Malformed(format!("missing action of `{}`", base.arrow_name(h)))))
            .collect::<Result<Vec<_>, _>>()?;
        Presheaf::new(base.clone(), sizes, action).map_err(NatmodError::malformed)
    }
}

/// A natural transformation with its domain and codomain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PshMapJson {
    pub base: String,
    pub dom: PresheafJson,
    pub cod: PresheafJson,
    pub components: BTreeMap<String, Vec<u32>>,
}

impl PshMapJson {
    pub fn from_map(m: &PshMap) -> Self {
        PshMapJson {
            base: category_hash(m.base()),
            dom: PresheafJson::from_presheaf(m.dom()),
            cod: PresheafJson::from_presheaf(m.cod()),
            components: rows_to_json(m.base(), m.components()),
        }
    }

    pub fn to_map(&self, base: &Arc<FiniteCategory>) -> Result<PshMap, NatmodError> {
        check_base(&self.base, base)?;
        let dom = self.dom.to_presheaf(base)?;
        let cod = self.cod.to_presheaf(base)?;
        PshMap::new(dom, cod, rows_from_json(base, &self.components)?).map_err(NatmodError::malformed)
    }
}

/// The representable-map classifier: `Omega`, `Omega~`, the generic map and
/// the chosen representative arrow of every element of `Omega`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierJson {
    pub base: String,
    pub omega: PresheafJson,
    pub omega_tilde: PresheafJson,
    pub generic: PshMapJson,
    pub representatives: BTreeMap<String, Vec<String>>,
}

impl ClassifierJson {
    pub fn from_classifier(cl: &Classifier) -> Self {
        let b = &**cl.base();
        ClassifierJson {
            base: category_hash(b),
            omega: PresheafJson::from_presheaf(cl.omega()),
            omega_tilde: PresheafJson::from_presheaf(cl.omega_tilde()),
            generic: PshMapJson::from_map(cl.generic.map()),
            representatives: b
                .objects()
                .map(|o| (b.object_name(o).to_string(), cl.omega_elems[o.0].iter().map(|&a| b.arrow_name(a).to_string()).collect()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComprehensionJson {
    pub obj: String,
    pub proj: String,
    pub generic: u32,
}

/// Interpretation of one declaration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DeclJson {
    Sort {
        name: String,
        total: PresheafJson,
        params: BTreeMap<String, Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<BTreeMap<String, Vec<ComprehensionJson>>>,
    },
    Term {
        name: String,
        table: BTreeMap<String, Vec<u32>>,
    },
}

/// A model of a signature: the base inline, its hash, the terminal object
/// and one interpretation per declaration in signature order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub signature: String,
    pub base_hash: String,
    pub base: CategoryJson,
    pub terminal: String,
    pub decls: Vec<DeclJson>,
}

/// Content hash of a signature: SHA-256 of its canonical printing.
pub fn signature_hash(sig: &Signature) -> String {
    sha256_hex(natmod_core::lf::print_signature(sig).as_bytes())
}

impl ModelJson {
    pub fn from_model(sig: &Signature, m: &ModelData) -> Self {
        let b = &*m.base;
        let decls = m
            .decls
            .iter()
            .zip(&sig.decls)
            .map(|(d, decl)| match d {
                DeclInterp::Sort { total, params, witness } => DeclJson::Sort {
                    name: decl.name.clone(),
                    total: PresheafJson::from_presheaf(total),
                    params: rows_to_json(b, params),
                    witness: witness.as_ref().map(|w| {
                        b.objects()
                            .map(|o| {
                                let row = w.entries[o.0]
                                    .iter()
                                    .map(|c| ComprehensionJson { obj: b.object_name(c.obj).to_string(), proj: b.arrow_name(c.proj).to_string(), generic: c.generic })
                                    .collect();
                                (b.object_name(o).to_string(), row)
                            })
                            .collect()
                    }),
                },
                DeclInterp::Term { table } => DeclJson::Term { name: decl.name.clone(), table: rows_to_json(b, table) },
            })
            .collect();
        ModelJson {
            signature: signature_hash(sig),
            base_hash: category_hash(b),
            base: CategoryJson::from_category(b),
            terminal: b.object_name(m.terminal).to_string(),
            decls,
        }
    }

    /// Rebuilds the model data; validity as a model is checked separately.
    pub fn to_model(&self, sig: &Signature) -> Result<ModelData, NatmodError> {
        let found = signature_hash(sig);
        if found != self.signature {
            return Err(NatmodError::Malformed(format!("model is for signature {} but the given signature hashes to {found}", self.signature)));
        }
        let base = Arc::new(self.base.to_category()?);
        check_base(&self.base_hash, &base)?;
        if self.decls.len() != sig.decls.len() {
            return Err(NatmodError::Malformed(format!("{} declarations interpreted, signature has {}", self.decls.len(), sig.decls.len())));
        }
        let mut decls = Vec::new();
        for (d, decl) in self.decls.iter().zip(&sig.decls) {
            let (name, interp) = match d {
                DeclJson::Sort { name, total, params, witness } => {
                    let witness = witness
                        .as_ref()
                        .map(|w| {
                            base.objects()
                                .map(|o| {
                                    w.get(base.object_name(o))
                                        .ok_or_else(|| NatmodError::Malformed(format!("witness misses object `{}`", base.object_name(o))))?
                                        .iter()
                                        .map(|c| Ok(Comprehension { obj: obj_by_name(&base, &c.obj)?, proj: arrow_by_name(&base, &c.proj)?, generic: c.generic }))
                                        .collect::<Result<Vec<_>, NatmodError>>()
                                })
                                .collect::<Result<Vec<_>, _>>()
                                .map(|entries| ComprehensionWitness { entries })
                        })
                        .transpose()?;
                    (name, DeclInterp::Sort { total: total.to_presheaf(&base)?, params: rows_from_json(&base, params)?, witness })
                }
                DeclJson::Term { name, table } => (name, DeclInterp::Term { table: rows_from_json(&base, table)? }),
            };
            let sort_decl = matches!(decl.kind, DeclKind::Sort | DeclKind::RepSort);
            if *name != decl.name || sort_decl != matches!(interp, DeclInterp::Sort { .. }) {
                return Err(NatmodError::Malformed(format!("interpretation `{name}` does not match declaration `{}`", decl.name)));
            }
            decls.push(interp);
        }
        Ok(ModelData { terminal: obj_by_name(&base, &self.terminal)?, base, decls })
    }
}

/// A model morphism: object and arrow maps by name, and the component of
/// every sort at every object of the source base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub source_base: String,
    pub target_base: String,
    pub objects: BTreeMap<String, String>,
    pub arrows: BTreeMap<String, String>,
    pub components: BTreeMap<String, BTreeMap<String, Vec<u32>>>,
}

impl MorphismJson {
    pub fn from_morphism(sig: &Signature, src: &FiniteCategory, tgt: &FiniteCategory, f: &ModelMorphism) -> Self {
        MorphismJson {
            source_base: category_hash(src),
            target_base: category_hash(tgt),
            objects: src.objects().map(|o| (src.object_name(o).to_string(), tgt.object_name(f.functor.on_object(o)).to_string())).collect(),
            arrows: src.arrows().map(|a| (src.arrow_name(a).to_string(), tgt.arrow_name(f.functor.on_arrow(a)).to_string())).collect(),
            components: f
                .components
                .iter()
                .enumerate()
                .filter_map(|(d, c)| c.as_ref().map(|rows| (sig.decls[d].name.clone(), rows_to_json(src, rows))))
                .collect(),
        }
    }

    pub fn to_morphism(&self, sig: &Signature, src: &FiniteCategory, tgt: &FiniteCategory) -> Result<ModelMorphism, NatmodError> {
        check_base(&self.source_base, src)?;
        check_base(&self.target_base, tgt)?;
        let objects = src
            .objects()
            .map(|o| obj_by_name(tgt, self.objects.get(src.object_name(o)).ok_or_else(|| NatmodError::Malformed(format!("object `{}` unmapped", src.object_name(o))))?))
            .collect::<Result<Vec<_>, _>>()?;
        let arrows = src
            .arrows()
            .map(|a| arrow_by_name(tgt, self.arrows.get(src.arrow_name(a)).ok_or_else(|| NatmodError::Malformed(format!("arrow `{}` unmapped", src.arrow_name(a))))?))
            .collect::<Result<Vec<_>, _>>()?;
        let components = sig
            .decls
            .iter()
            .map(|d| match d.kind {
                DeclKind::Sort | DeclKind::RepSort => self
                    .components
                    .get(&d.name)
                    .ok_or_else(|| NatmodError::Malformed(format!("no component for sort `{}`", d.name)))
                    .and_then(|rows| rows_from_json(src, rows))
                    .map(Some),
                DeclKind::Term(_) => Ok(None),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModelMorphism { functor: FunctorData { objects, arrows }, components })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachmentJson {
    pub n: usize,
    /// `"Ty"` or `"El"`.
    pub top: String,
    /// Closed terms, one per entry of the generating source context.
    pub attaching: Vec<String>,
    pub name: String,
}

/// A cofibration as a sequence of attachments of generating cofibrations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofibrationJson {
    pub attachments: Vec<AttachmentJson>,
}

impl CofibrationJson {
    pub fn from_presentation(sig: &Signature, cof: &CofibrationPresentation) -> Self {
        let mut sig = sig.clone();
        let mut attachments = Vec::new();
        for a in &cof.attachments {
            attachments.push(AttachmentJson {
                n: a.n,
                top: a.top.name().to_string(),
                attaching: a.attaching.terms.iter().map(|t| print_term(&sig, &Context::new(), t)).collect(),
                name: a.name.clone(),
            });
            // Later attaching terms may mention earlier generators.
            sig = natmod_core::homotopy::pushout_cofibration(&sig, &CofibrationPresentation { attachments: vec![a.clone()] }, &natmod_core::budget::Budget::unlimited())
                .unwrap_or(sig);
        }
        CofibrationJson { attachments }
    }

    /// Parses the attaching terms, each against the signature extended by
    /// the earlier attachments.
    pub fn to_presentation(&self, base: &Signature, fuel: &natmod_core::budget::Budget) -> Result<CofibrationPresentation, NatmodError> {
        let mut sig = base.clone();
        let mut attachments = Vec::new();
        for a in &self.attachments {
            let top = match a.top.as_str() {
                "Ty" => CofTop::Ty,
                "El" => CofTop::El,
                t => return Err(NatmodError::Malformed(format!("unknown cofibration top `{t}`"))),
            };
            let terms = a.attaching.iter().map(|t| parse_term(&sig, &Context::new(), t).map_err(NatmodError::malformed)).collect::<Result<Vec<_>, _>>()?;
            let att = Attachment { n: a.n, top, attaching: Substitution { terms }, name: a.name.clone() };
            sig = natmod_core::homotopy::pushout_cofibration(&sig, &CofibrationPresentation { attachments: vec![att.clone()] }, fuel).map_err(NatmodError::malformed)?;
            attachments.push(att);
        }
        Ok(CofibrationPresentation { attachments })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use natmod_core::fincat::build;
    use natmod_core::lf::corpus::itth;
    use natmod_core::models::corpus::omega_model;

    #[test]
    fn category_round_trip() {
        for c in [build::delta1(), build::chain(3), build::poset(&["a", "t", "b"], &[(0, 1), (2, 1)])] {
            let j = CategoryJson::from_category(&c);
            let back = j.to_category().unwrap();
            assert_eq!(back, c);
            let text = to_json(&j);
            let again: CategoryJson = serde_json::from_str(&text).unwrap();
            assert_eq!(again, j);
        }
    }

    #[test]
    fn presheaf_round_trip_and_base_check() {
        let b = Arc::new(build::delta1());
        let p = Presheaf::yoneda(&b, ObjId(1));
        let j = PresheafJson::from_presheaf(&p);
        assert_eq!(j.to_presheaf(&b).unwrap(), p);
        let other = Arc::new(build::chain(3));
        assert!(matches!(j.to_presheaf(&other), Err(NatmodError::BaseMismatch { .. })));
    }

    #[test]
    fn model_round_trip() {
        let sig = itth();
        let b = Arc::new(build::delta1());
        let m = omega_model(&sig, &b, 100_000).unwrap();
        let j = ModelJson::from_model(&sig, &m);
        let text = to_json(&j);
        let back: ModelJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_model(&sig).unwrap(), m);
        let f = ModelMorphism::identity(&m);
        let fj = MorphismJson::from_morphism(&sig, &b, &b, &f);
        assert_eq!(fj.to_morphism(&sig, &b, &b).unwrap(), f);
    }

    #[test]
    fn hashes_are_stable() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        assert_eq!(category_hash(&build::delta1()), category_hash(&build::delta1()));
        assert_ne!(category_hash(&build::delta1()), category_hash(&build::chain(3)));
    }
}
