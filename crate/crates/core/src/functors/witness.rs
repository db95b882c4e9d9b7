use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use super::apply::*;
use crate::category::{compose, identity_of};
use crate::error::Result;
use crate::model::{Frame, InfoSystem, Morphism, MorphismKind, MorphismRel, Relation, Structure};
use crate::report::{Collector, Limits, Report, WitnessItem};
use crate::token::{Token, TokenSet};

/// Which natural isomorphism a witness pair realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairId {
    /// `Id ≅ F∘S` on strong frames.
    PQ,
    /// `Id ≅ S∘F` on simplified systems.
    ST,
    /// `Id ≅ T` on frames.
    MN,
    /// `Id ≅ W` on frames.
    JL,
}

impl FromStr for PairId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "PQ" => Ok(PairId::PQ),
            "ST" => Ok(PairId::ST),
            "MN" => Ok(PairId::MN),
            "JL" => Ok(PairId::JL),
            _ => Err(format!("unknown witness pair {s:?}")),
        }
    }
}

/// Mutually inverse morphisms between an object and its image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPair {
    pub id: PairId,
    pub forward: Morphism,
    pub backward: Morphism,
}

fn frame_arc(f: Frame) -> Arc<Structure> {
    Arc::new(Structure::Frame(f))
}

fn system_arc(s: InfoSystem) -> Arc<Structure> {
    Arc::new(Structure::System(s))
}

/// A family from `src` to `tgt` given per consistent set of each source token.
fn family(src: &Arc<Structure>, tgt: &Arc<Structure>, mut h: impl FnMut(&Token, &TokenSet) -> TokenSet) -> Result<Morphism> {
    let f = src.as_frame()?;
    let mut rel = MorphismRel::new();
    for i in f.tokens() {
        let mut r = Relation::new();
        for x in f.con(i) {
            r.extend(x.clone(), &h(i, x));
        }
        rel.insert(Some(i.clone()), r);
    }
    Morphism::new(MorphismKind::Family, src.clone(), tgt.clone(), rel)
}

fn mapping(src: &Arc<Structure>, tgt: &Arc<Structure>, mut h: impl FnMut(&TokenSet) -> TokenSet) -> Result<Morphism> {
    let s = src.as_system()?;
    let mut r = Relation::new();
    for x in s.con() {
        r.extend(x.clone(), &h(x));
    }
    Morphism::new(MorphismKind::Mapping, src.clone(), tgt.clone(), MorphismRel::from([(None, r)]))
}

fn set_members(t: &Token) -> &TokenSet {
    match t {
        Token::Set(s) => s,
        _ => unreachable!("F tokens are set tokens"),
    }
}

fn pair_members(t: &Token) -> (&Token, &TokenSet) {
    match t {
        Token::Pair(a, s) => (a, s),
        _ => unreachable!("T tokens are pair tokens"),
    }
}

/// The set tokens `Z ∈ CON` with `Z ⊆ e`.
fn con_within(s: &InfoSystem, e: &TokenSet) -> TokenSet {
    s.con().iter().filter(|z| z.is_subset(e)).map(|z| Token::set(z.clone())).collect()
}

fn pair_within(all: &TokenSet, e: &TokenSet) -> TokenSet {
    all.iter()
        .filter(|p| {
            let (b, y) = pair_members(p);
            e.contains(b) && y.is_subset(e)
        })
        .cloned()
        .collect()
}

pub fn witness(id: PairId, object: &Arc<Structure>) -> Result<WitnessPair> {
    witness_with(id, object, &Limits::default())
}

pub fn witness_with(id: PairId, object: &Arc<Structure>, limits: &Limits) -> Result<WitnessPair> {
    let (forward, backward) = match id {
        PairId::PQ => {
            let a = object.as_frame()?;
            let s = apply_s(a)?;
            let img = frame_arc(apply_f_with(&s, limits)?);
            // X̄ P_i Z ⟺ X̄ ⊨_i Z
            let p = family(object, &img, |i, x| con_within(&s, &a.entailed(i, x)))?;
            // 𝔛 Q_K a ⟺ {a} ∈ CON ∧ ∃E ∈ 𝔛 ∪ {K}. E ⊢ a
            let q = family(&img, object, |k, xs| {
                let reach = xs.iter().chain([k]).fold(TokenSet::empty(), |acc, e| acc.union(&s.entailed(set_members(e))));
                reach.iter().filter(|b| s.con().contains(&TokenSet::singleton((*b).clone()))).cloned().collect()
            })?;
            (p, q)
        }
        PairId::ST => {
            let s = object.as_system()?;
            let fs = apply_f_with(s, limits)?;
            let img = system_arc(apply_s(&fs)?);
            // X S_S Y ⟺ X ⊢ Y
            let fwd = mapping(object, &img, |x| con_within(s, &s.entailed(x)))?;
            // 𝔛 T_S a ⟺ ∃E ∈ 𝔛. E ⊢ a
            let bwd = mapping(&img, object, |xs| xs.iter().fold(TokenSet::empty(), |acc, e| acc.union(&s.entailed(set_members(e)))))?;
            (fwd, bwd)
        }
        PairId::MN => {
            let a = object.as_frame()?;
            let ta = apply_t_with(a, limits)?;
            let all = ta.tokens().clone();
            let img = frame_arc(ta);
            // X M_i (b,Y) ⟺ X ⊨_i {b} ∪ Y
            let m = family(object, &img, |i, x| pair_within(&all, &a.entailed(i, x)))?;
            // 𝔛 N_(k,K) a ⟺ 𝔛 ⊨̃_(k,K) (a,{a})
            let n = family(&img, object, |k, xs| {
                let reach = xs.iter().chain([k]).fold(TokenSet::empty(), |acc, p| {
                    let (c, z) = pair_members(p);
                    acc.union(&a.entailed(c, z))
                });
                reach.iter().filter(|b| all.contains(&Token::pair((*b).clone(), TokenSet::singleton((*b).clone())))).cloned().collect()
            })?;
            (m, n)
        }
        PairId::JL => {
            let a = object.as_frame()?;
            let wa = apply_w(a, None)?;
            let t = wa.truth().expect("fresh truth").clone();
            let img = frame_arc(wa);
            // X J_i c ⟺ X ⊨̄_i c
            let j = family(object, &img, |i, x| a.entailed(i, x).with(t.clone()))?;
            // Z L_b a ⟺ Z ⊨̄_b a
            let l = family(&img, object, |b, z| if *b == t { TokenSet::empty() } else { a.entailed(b, &z.without(&t)) })?;
            (j, l)
        }
    };
    Ok(WitnessPair { id, forward, backward })
}

pub const FORWARD_BACKWARD: &str = "forward-backward";
pub const BACKWARD_FORWARD: &str = "backward-forward";
pub const NATURALITY: &str = "naturality";

type Triple = (Option<Token>, TokenSet, Token);

fn triples(m: &Morphism) -> BTreeSet<Triple> {
    m.triples().map(|(i, x, b)| (i.cloned(), x.clone(), b.clone())).collect()
}

fn compare(c: &mut Collector, axiom: &'static str, what: &str, got: &Morphism, want: &Morphism) {
    let (tg, tw) = (triples(got), triples(want));
    for (i, x, b) in tg.symmetric_difference(&tw) {
        if !c.wants(axiom) {
            return;
        }
        let side = if tg.contains(&(i.clone(), x.clone(), b.clone())) { "has an extra" } else { "lacks the" };
        let mut w: Vec<WitnessItem> = i.iter().cloned().map(Into::into).collect();
        w.push(x.clone().into());
        w.push(b.clone().into());
        c.push(axiom, w, format!("{what} {side} triple"));
    }
}

/// Both composites of a witness pair must be identities.
pub fn check_witness_pair(w: &WitnessPair) -> Result<Report> {
    check_witness_pair_with(w, &Limits::default())
}

pub fn check_witness_pair_with(w: &WitnessPair, limits: &Limits) -> Result<Report> {
    let mut c = Collector::new(limits);
    check_pair_into(w, &mut c)?;
    Ok(c.finish())
}

fn check_pair_into(w: &WitnessPair, c: &mut Collector) -> Result<()> {
    let fb = compose(&w.forward, &w.backward)?;
    compare(c, FORWARD_BACKWARD, "forward then backward", &fb, &identity_of(w.forward.source())?);
    let bf = compose(&w.backward, &w.forward)?;
    compare(c, BACKWARD_FORWARD, "backward then forward", &bf, &identity_of(w.backward.source())?);
    Ok(())
}

pub fn verify_equivalence(id: PairId, objects: &[Arc<Structure>], morphisms: &[Morphism]) -> Result<Report> {
    verify_equivalence_with(id, objects, morphisms, &Limits::default())
}

/// Witness composites for every object and the naturality square for every morphism.
pub fn verify_equivalence_with(id: PairId, objects: &[Arc<Structure>], morphisms: &[Morphism], limits: &Limits) -> Result<Report> {
    let mut c = Collector::new(limits);
    for o in objects {
        check_pair_into(&witness_with(id, o, limits)?, &mut c)?;
    }
    for h in morphisms {
        let here = witness_with(id, h.source(), limits)?.forward;
        let there = witness_with(id, h.target(), limits)?.forward;
        let (left, right, what) = match id {
            PairId::PQ => (compose(h, &there)?, compose(&here, &apply_f_morphism_with(&apply_s_morphism(h)?, limits)?)?, "H ∘ P′ against P ∘ F(S(H))"),
            PairId::ST => (compose(h, &there)?, compose(&here, &apply_s_morphism(&apply_f_morphism_with(h, limits)?)?)?, "H ∘ S′ against S ∘ S(F(H))"),
            PairId::MN => (compose(&here, &apply_t_morphism_with(h, limits)?)?, compose(h, &there)?, "M ∘ T(H) against H ∘ M′"),
            PairId::JL => (compose(&here, &apply_w_morphism(h, None)?)?, compose(h, &there)?, "J ∘ W(H) against H ∘ J′"),
        };
        compare(&mut c, NATURALITY, what, &left, &right);
    }
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn arc(f: Frame) -> Arc<Structure> {
        frame_arc(f)
    }

    #[test]
    fn pq_on_chain() {
        let w = witness(PairId::PQ, &arc(corpus::fix3())).unwrap();
        assert!(check_witness_pair(&w).unwrap().passed());
    }

    #[test]
    fn mn_on_wide() {
        let w = witness(PairId::MN, &arc(corpus::fix4())).unwrap();
        let r = check_witness_pair(&w).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    /// `L ∘ J` passes through a frame without the fresh truth, so it can only produce `t`
    /// where some real token is entailed. Those are exactly the triples it misses.
    #[test]
    fn jl_backward_forward_misses_only_unsupported_truth() {
        for (name, f) in corpus::frames() {
            let a = arc(f.clone());
            let w = witness(PairId::JL, &a).unwrap();
            let r = check_witness_pair_with(&w, &Limits::default().with_all_witnesses()).unwrap();
            assert!(!r.has(FORWARD_BACKWARD), "{name}: {}", r.to_text());
            let got: BTreeSet<String> = r.violations().iter().map(|v| {
                assert_eq!(v.axiom, BACKWARD_FORWARD, "{name}");
                assert!(v.message.contains("lacks"), "{name}");
                v.witness_string()
            }).collect();
            let wa = w.backward.source().as_frame().unwrap().clone();
            let t = wa.truth().unwrap().clone();
            let mut want = BTreeSet::new();
            for b in wa.tokens().iter() {
                for z in wa.con(b).iter() {
                    let rest: TokenSet = z.iter().filter(|x| **x != t).cloned().collect();
                    if *b == t || f.entailed(b, &rest).is_empty() {
                        want.insert(format!("({b}, {z}, {t})"));
                    }
                }
            }
            assert_eq!(got, want, "{name}");
        }
    }

    #[test]
    fn st_on_systems() {
        for (name, s) in corpus::systems() {
            let w = witness(PairId::ST, &system_arc(s)).unwrap();
            let r = check_witness_pair(&w).unwrap();
            assert!(r.passed(), "{name}: {}", r.to_text());
        }
    }

    #[test]
    fn naturality_on_corpus_morphisms() {
        let objects = [corpus::fix1_structure(), corpus::fix3_structure()];
        let mut morphisms: Vec<Morphism> = objects.iter().map(|o| identity_of(o).unwrap()).collect();
        morphisms.push(corpus::fix1_to_fix3());
        for id in [PairId::PQ, PairId::MN] {
            let r = verify_equivalence(id, &objects, &morphisms).unwrap();
            assert!(r.passed(), "{id:?}: {}", r.to_text());
        }
        morphisms.push(corpus::fix3_to_fix1());
        let r = verify_equivalence_with(PairId::JL, &[], &morphisms, &Limits::default()).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn corrupted_witness_is_caught() {
        let w = witness(PairId::JL, &arc(corpus::fix4())).unwrap();
        let (i, x, b) = w.forward.triples().map(|(i, x, b)| (i.cloned(), x.clone(), b.clone())).next().unwrap();
        let bad = WitnessPair { forward: w.forward.without_triple(i.as_ref(), &x, &b), ..w };
        let r = check_witness_pair(&bad).unwrap();
        assert!(!r.passed());
        assert!(r.has(FORWARD_BACKWARD) || r.has(BACKWARD_FORWARD));
    }
}
