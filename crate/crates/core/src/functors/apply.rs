use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Family, Frame, InfoSystem, Morphism, MorphismKind, MorphismRel, Relation};
use crate::report::Limits;
use crate::token::{is_identifier, subsets_of, Token, TokenSet, RESERVED_TRUTH};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctorTag {
    /// Simplified systems to strong frames.
    F,
    /// Strong frames to systems.
    S,
    /// Frames to strong frames.
    T,
    /// Frames to frames with truth.
    W,
}

impl FromStr for FunctorTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "F" => Ok(FunctorTag::F),
            "S" => Ok(FunctorTag::S),
            "T" => Ok(FunctorTag::T),
            "W" => Ok(FunctorTag::W),
            _ => Err(format!("unknown functor {s:?}")),
        }
    }
}

fn members(x: &Token) -> &TokenSet {
    match x {
        Token::Set(s) => s,
        _ => unreachable!("F tokens are set tokens"),
    }
}

fn pair_parts(x: &Token) -> (&Token, &TokenSet) {
    match x {
        Token::Pair(a, s) => (a, s),
        _ => unreachable!("T tokens are pair tokens"),
    }
}

fn component<'a>(h: &'a Morphism, i: &Token) -> Option<&'a Relation> {
    h.rel().get(&Some(i.clone()))
}

fn targets(r: Option<&Relation>, x: &TokenSet) -> TokenSet {
    r.map(|r| r.targets(x)).unwrap_or_default()
}

fn expect_kind(h: &Morphism, kind: MorphismKind) -> Result<()> {
    if h.kind() != kind {
        return Err(Error::Type(format!("expected a {}, found a {}", kind.as_str(), h.kind().as_str())));
    }
    Ok(())
}

/// `{{self}} ∪ P(d)`, failing rather than truncating when it outgrows the bound.
fn generated(own: &Token, d: &TokenSet, limits: &Limits, what: &str) -> Result<Family> {
    limits.powerset_fits(d.len(), 1, what)?;
    let mut fam: Family = subsets_of(d).collect();
    fam.insert(TokenSet::singleton(own.clone()));
    Ok(fam)
}

/// For each `X ∈ CON`, the set tokens of `{Y ∈ CON : X ⊢ Y}`.
fn below(s: &InfoSystem, ent: impl Fn(&TokenSet) -> TokenSet) -> BTreeMap<TokenSet, TokenSet> {
    s.con()
        .iter()
        .map(|x| {
            let e = ent(x);
            (x.clone(), s.con().iter().filter(|y| y.is_subset(&e)).map(|y| Token::set(y.clone())).collect())
        })
        .collect()
}

pub fn apply_f(s: &InfoSystem) -> Result<Frame> {
    apply_f_with(s, &Limits::default())
}

/// Tokens are the consistent sets; `Ĉon_X = {{X}} ∪ P(D_X)` and `𝔛 ⊩_X Y ⟺ ∃E ∈ 𝔛 ∪ {X}. E ⊢ Y`.
pub fn apply_f_with(s: &InfoSystem, limits: &Limits) -> Result<Frame> {
    let d = below(s, |x| s.entailed(x));
    let tokens: TokenSet = s.con().iter().map(|x| Token::set(x.clone())).collect();
    let (mut con, mut entails) = (BTreeMap::new(), BTreeMap::new());
    for k in &tokens {
        let fam = generated(k, &d[members(k)], limits, "F consistency family")?;
        let mut rel = Relation::new();
        for xs in &fam {
            let mut out = d[members(k)].clone();
            for e in xs {
                out = out.union(&d[members(e)]);
            }
            rel.extend(xs.clone(), &out);
        }
        con.insert(k.clone(), fam);
        entails.insert(k.clone(), rel);
    }
    Frame::new(tokens, con, entails, None)
}

pub fn apply_f_morphism(h: &Morphism) -> Result<Morphism> {
    apply_f_morphism_with(h, &Limits::default())
}

/// `𝔛 Ĥ_X Y ⟺ ∃E ∈ 𝔛 ∪ {X}. E H Y`.
pub fn apply_f_morphism_with(h: &Morphism, limits: &Limits) -> Result<Morphism> {
    expect_kind(h, MorphismKind::Mapping)?;
    let (s, t) = (h.source().as_system()?, h.target().as_system()?);
    let (fs, ft) = (apply_f_with(s, limits)?, apply_f_with(t, limits)?);
    let r = h.component(None);
    let m: BTreeMap<TokenSet, TokenSet> = s
        .con()
        .iter()
        .map(|x| {
            let hx = r.targets(x);
            (x.clone(), t.con().iter().filter(|y| y.is_subset(&hx)).map(|y| Token::set(y.clone())).collect())
        })
        .collect();
    let mut rel = MorphismRel::new();
    for k in fs.tokens() {
        let mut out = Relation::new();
        for xs in fs.con(k) {
            let mut acc = m[members(k)].clone();
            for e in xs {
                acc = acc.union(&m[members(e)]);
            }
            out.extend(xs.clone(), &acc);
        }
        rel.insert(Some(k.clone()), out);
    }
    Morphism::new(MorphismKind::Family, Arc::new(fs.into()), Arc::new(ft.into()), rel)
}

/// The decompositions `X = X̄ ∪ {a}` with `X̄ ∈ Con_a`, as `(a, X̄)`.
fn decompositions<'a>(f: &'a Frame, x: &'a TokenSet) -> impl Iterator<Item = (&'a Token, TokenSet)> + 'a {
    x.iter().flat_map(move |a| {
        [x.clone(), x.without(a)].into_iter().filter(move |xb| f.con(a).contains(xb)).map(move |xb| (a, xb))
    })
}

/// `CON = {X̄ ∪ {a} : X̄ ∈ Con_a}` and `X ⊢ c ⟺ X̄ ⊨_a c ∨ {a} ⊨_a c` for some decomposition.
pub fn apply_s(f: &Frame) -> Result<InfoSystem> {
    let mut con = Family::new();
    for a in f.tokens() {
        for xb in f.con(a) {
            con.insert(xb.with(a.clone()));
        }
    }
    let mut rel = Relation::new();
    for x in &con {
        for (a, xb) in decompositions(f, x) {
            let single = TokenSet::singleton(a.clone());
            rel.extend(x.clone(), &f.entailed(a, &xb).union(&f.entailed(a, &single)));
        }
    }
    InfoSystem::new(f.tokens().clone(), con, rel, false)
}

/// `X S(H) b ⟺ X̄ H_a b ∨ {a} H_a b` for some decomposition.
pub fn apply_s_morphism(h: &Morphism) -> Result<Morphism> {
    expect_kind(h, MorphismKind::Family)?;
    let (f, g) = (h.source().as_frame()?, h.target().as_frame()?);
    let (s, t) = (apply_s(f)?, apply_s(g)?);
    let mut rel = Relation::new();
    for x in s.con() {
        for (a, xb) in decompositions(f, x) {
            let ha = component(h, a);
            rel.extend(x.clone(), &targets(ha, &xb).union(&targets(ha, &TokenSet::singleton(a.clone()))));
        }
    }
    Morphism::new(MorphismKind::Mapping, Arc::new(s.into()), Arc::new(t.into()), MorphismRel::from([(None, rel)]))
}

/// All `(a, X)` with `X ∈ Con_a`.
fn pair_tokens(f: &Frame) -> TokenSet {
    f.tokens().iter().flat_map(|a| f.con(a).iter().map(move |x| Token::pair(a.clone(), x.clone()))).collect()
}

/// The pair tokens `(b, Y)` with `{b} ∪ Y ⊆ e`.
fn pairs_within(all: &TokenSet, e: &TokenSet) -> TokenSet {
    all.iter()
        .filter(|p| {
            let (b, y) = pair_parts(p);
            e.contains(b) && y.is_subset(e)
        })
        .cloned()
        .collect()
}

pub fn apply_t(f: &Frame) -> Result<Frame> {
    apply_t_with(f, &Limits::default())
}

/// Tokens `(a, X)`; `C̃on_(a,X) = {{(a,X)}} ∪ P(D)` with `D = {(b,Y) : X ⊨_a {b} ∪ Y}`.
pub fn apply_t_with(f: &Frame, limits: &Limits) -> Result<Frame> {
    let tokens = pair_tokens(f);
    let d: BTreeMap<&Token, TokenSet> = tokens
        .iter()
        .map(|p| {
            let (a, x) = pair_parts(p);
            (p, pairs_within(&tokens, &f.entailed(a, x)))
        })
        .collect();
    let (mut con, mut entails) = (BTreeMap::new(), BTreeMap::new());
    for p in &tokens {
        let fam = generated(p, &d[p], limits, "T consistency family")?;
        let mut rel = Relation::new();
        for xs in &fam {
            let mut out = d[p].clone();
            for e in xs {
                out = out.union(&d[e]);
            }
            rel.extend(xs.clone(), &out);
        }
        con.insert(p.clone(), fam);
        entails.insert(p.clone(), rel);
    }
    let truth = f.truth().map(|t| Token::pair(t.clone(), TokenSet::empty()));
    Frame::new(tokens, con, entails, truth)
}

pub fn apply_t_morphism(h: &Morphism) -> Result<Morphism> {
    apply_t_morphism_with(h, &Limits::default())
}

/// `𝔛 H̃_(a,X) (b,Y) ⟺ ∃(c,Z) ∈ 𝔛 ∪ {(a,X)}. Z H_c {b} ∪ Y`.
pub fn apply_t_morphism_with(h: &Morphism, limits: &Limits) -> Result<Morphism> {
    expect_kind(h, MorphismKind::Family)?;
    let (f, g) = (h.source().as_frame()?, h.target().as_frame()?);
    let (tf, tg) = (apply_t_with(f, limits)?, apply_t_with(g, limits)?);
    let all = pair_tokens(g);
    let m: BTreeMap<&Token, TokenSet> = tf
        .tokens()
        .iter()
        .map(|p| {
            let (c, z) = pair_parts(p);
            (p, pairs_within(&all, &targets(component(h, c), z)))
        })
        .collect();
    let mut rel = MorphismRel::new();
    for p in tf.tokens() {
        let mut out = Relation::new();
        for xs in tf.con(p) {
            let mut acc = m[p].clone();
            for e in xs {
                acc = acc.union(&m[e]);
            }
            out.extend(xs.clone(), &acc);
        }
        rel.insert(Some(p.clone()), out);
    }
    Morphism::new(MorphismKind::Family, Arc::new(tf.into()), Arc::new(tg.into()), rel)
}

fn fresh_truth(f: &Frame, name: Option<&str>) -> Result<Token> {
    let name = name.unwrap_or(RESERVED_TRUTH);
    if !is_identifier(name) {
        return Err(Error::Type(format!("{name:?} is not a valid token name")));
    }
    let t = Token::atom(name);
    if f.tokens().contains(&t) {
        return Err(Error::Reserved(format!("truth name {name} is already a token")));
    }
    Ok(t)
}

/// Adds a fresh truth token `t` (named `#T` unless `name` is given) that every set entails.
pub fn apply_w(f: &Frame, name: Option<&str>) -> Result<Frame> {
    let t = fresh_truth(f, name)?;
    let only_t = TokenSet::singleton(t.clone());
    let (mut con, mut entails) = (BTreeMap::new(), BTreeMap::new());
    for a in f.tokens() {
        let mut fam = Family::new();
        let mut rel = Relation::new();
        for x in f.con(a) {
            let e = f.entailed(a, x).with(t.clone());
            for y in [x.clone(), x.with(t.clone())] {
                rel.extend(y.clone(), &e);
                fam.insert(y);
            }
        }
        con.insert(a.clone(), fam);
        entails.insert(a.clone(), rel);
    }
    let fam: Family = [TokenSet::empty(), only_t.clone()].into();
    entails.insert(t.clone(), fam.iter().map(|x| (x.clone(), t.clone())).collect());
    con.insert(t.clone(), fam);
    Frame::new(f.tokens().with(t.clone()), con, entails, Some(t))
}

/// `X H̄_a c ⟺ X∖{t} H_a c ∨ c = t′`, and `H̄_t` yields only `t′`.
pub fn apply_w_morphism(h: &Morphism, name: Option<&str>) -> Result<Morphism> {
    expect_kind(h, MorphismKind::Family)?;
    let (f, g) = (h.source().as_frame()?, h.target().as_frame()?);
    let (wf, wg) = (apply_w(f, name)?, apply_w(g, name)?);
    let (t, t2) = (wf.truth().expect("fresh truth").clone(), wg.truth().expect("fresh truth").clone());
    let mut rel = MorphismRel::new();
    for a in wf.tokens() {
        let mut out = Relation::new();
        for x in wf.con(a) {
            let base = if *a == t { TokenSet::empty() } else { targets(component(h, a), &x.without(&t)) };
            out.extend(x.clone(), &base.with(t2.clone()));
        }
        rel.insert(Some(a.clone()), out);
    }
    Morphism::new(MorphismKind::Family, Arc::new(wf.into()), Arc::new(wg.into()), rel)
}
