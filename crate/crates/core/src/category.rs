//! Identities, composition, relation equality and the category laws on finite diagrams.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{same_structure, Morphism, MorphismKind, MorphismRel, Structure};

/// `Id_S = ⊢` for a system, `Id_A = (⊨_i)_i` for a frame.
pub fn identity_of(s: &Arc<Structure>) -> Result<Morphism> {
    match s.as_ref() {
        Structure::System(sys) => {
            let rel = MorphismRel::from([(None, sys.entailment().clone())]);
            Morphism::new(MorphismKind::Mapping, s.clone(), s.clone(), rel)
        }
        Structure::Frame(f) => {
            let rel = f.entails_map().iter().map(|(i, r)| (Some(i.clone()), r.clone())).collect();
            Morphism::new(MorphismKind::Family, s.clone(), s.clone(), rel)
        }
    }
}

/// Diagrammatic composition: `g` first, then `h`.
pub fn compose(g: &Morphism, h: &Morphism) -> Result<Morphism> {
    if g.kind() != h.kind() {
        return Err(Error::Type(format!("cannot compose a {} with a {}", g.kind().as_str(), h.kind().as_str())));
    }
    if !same_structure(g.target(), h.source()) {
        return Err(Error::Type("target of the first morphism is not the source of the second".into()));
    }
    match g.kind() {
        MorphismKind::Mapping => {
            let mid = h.source().as_system()?.idx();
            let (tg, th) = (g.mapping_table()?, h.mapping_table()?);
            let n = h.target().as_system()?.idx().uni.len();
            let table: Vec<_> = tg
                .iter()
                .map(|gx| {
                    let mut out = crate::bits::Bits::empty(n);
                    for (ky, y) in mid.con.iter().enumerate() {
                        if y.is_subset(gx) {
                            out.union_with(&th[ky]);
                        }
                    }
                    out
                })
                .collect();
            Ok(Morphism::from_mapping_table(g.source().clone(), h.target().clone(), &table))
        }
        MorphismKind::Family | MorphismKind::Global => {
            let mid = h.source().as_frame()?.idx();
            let (tg, th) = (g.family_table()?, h.family_table()?);
            let n = h.target().as_frame()?.idx().uni.len();
            let table: Vec<Vec<_>> = tg
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|gx| {
                            let mut out = crate::bits::Bits::empty(n);
                            for e in gx.iter() {
                                for (kv, v) in mid.con[e].iter().enumerate() {
                                    if v.is_subset(gx) {
                                        out.union_with(&th[e][kv]);
                                    }
                                }
                            }
                            out
                        })
                        .collect()
                })
                .collect();
            Ok(Morphism::from_family_table(g.kind(), g.source().clone(), h.target().clone(), &table))
        }
    }
}

/// Equality of canonical triple sets. Fails with `E_TYPE` on a kind or endpoint mismatch.
pub fn rel_equal(g: &Morphism, h: &Morphism) -> Result<bool> {
    if g.kind() != h.kind() || !same_structure(g.source(), h.source()) || !same_structure(g.target(), h.target()) {
        return Err(Error::Type("relations of different kinds or endpoints".into()));
    }
    Ok(g.rel() == h.rel())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryLawReport {
    pub assoc_ok: bool,
    pub left_id_ok: bool,
    pub right_id_ok: bool,
    /// The first failing law and the indices of the morphisms involved.
    pub counterexample: Option<(String, Vec<usize>)>,
}

impl CategoryLawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Identity and associativity laws for every composable pair and triple of the diagram.
pub fn check_category_laws(objects: &[Arc<Structure>], morphisms: &[Morphism]) -> Result<CategoryLawReport> {
    let mut r = CategoryLawReport { assoc_ok: true, left_id_ok: true, right_id_ok: true, counterexample: None };
    let ids = objects.iter().map(identity_of).collect::<Result<Vec<_>>>()?;
    let id_for = |s: &Arc<Structure>| -> Result<&Morphism> {
        objects
            .iter()
            .position(|o| same_structure(o, s))
            .map(|k| &ids[k])
            .ok_or_else(|| Error::Type("morphism endpoint missing from the object list".into()))
    };
    let fail = |r: &mut CategoryLawReport, law: &str, at: Vec<usize>| {
        if r.counterexample.is_none() {
            r.counterexample = Some((law.to_string(), at));
        }
    };
    for (k, m) in morphisms.iter().enumerate() {
        let (src, tgt) = (id_for(m.source())?, id_for(m.target())?);
        let (src, tgt) = (retag(src, m.kind())?, retag(tgt, m.kind())?);
        if !rel_equal(&compose(&src, m)?, m)? {
            r.left_id_ok = false;
            fail(&mut r, "left identity", vec![k]);
        }
        if !rel_equal(&compose(m, &tgt)?, m)? {
            r.right_id_ok = false;
            fail(&mut r, "right identity", vec![k]);
        }
    }
    let composable = |a: &Morphism, b: &Morphism| a.kind() == b.kind() && same_structure(a.target(), b.source());
    for (i, f) in morphisms.iter().enumerate() {
        for (j, g) in morphisms.iter().enumerate().filter(|(_, g)| composable(f, g)) {
            let fg = compose(f, g)?;
            for (k, h) in morphisms.iter().enumerate().filter(|(_, h)| composable(g, h)) {
                if !rel_equal(&compose(&fg, h)?, &compose(f, &compose(g, h)?)?)? {
                    r.assoc_ok = false;
                    fail(&mut r, "associativity", vec![i, j, k]);
                }
            }
        }
    }
    Ok(r)
}

fn retag(id: &Morphism, kind: MorphismKind) -> Result<Morphism> {
    if id.kind() == kind {
        Ok(id.clone())
    } else {
        id.retagged(kind)
    }
}
