//! Frames, information systems and the morphisms between them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::bits::{Bits, Universe};
use crate::error::{Error, Result};
use crate::token::{Token, TokenSet, RESERVED_TRUTH};

/// A finite consistency family.
pub type Family = BTreeSet<TokenSet>;

/// An entailment-shaped relation `X -> b`, grouped by antecedent. Empty groups are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation(BTreeMap<TokenSet, TokenSet>);

impl Relation {
    pub fn new() -> Relation {
        Relation::default()
    }

    pub fn insert(&mut self, x: TokenSet, b: Token) {
        let entry = self.0.entry(x).or_default();
        *entry = entry.with(b);
    }

    /// Adds `x -> b` for every `b` in `targets`.
    pub fn extend(&mut self, x: TokenSet, targets: &TokenSet) {
        if targets.is_empty() {
            return;
        }
        let entry = self.0.entry(x).or_default();
        *entry = entry.union(targets);
    }

    pub fn remove(&mut self, x: &TokenSet, b: &Token) -> bool {
        let Some(entry) = self.0.get_mut(x) else { return false };
        if !entry.contains(b) {
            return false;
        }
        *entry = entry.without(b);
        if entry.is_empty() {
            self.0.remove(x);
        }
        true
    }

    /// Everything `x` is related to (empty when `x` has no entry).
    pub fn targets(&self, x: &TokenSet) -> TokenSet {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn contains(&self, x: &TokenSet, b: &Token) -> bool {
        self.0.get(x).is_some_and(|t| t.contains(b))
    }

    pub fn groups(&self) -> impl Iterator<Item = (&TokenSet, &TokenSet)> {
        self.0.iter()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&TokenSet, &Token)> {
        self.0.iter().flat_map(|(x, t)| t.iter().map(move |b| (x, b)))
    }

    pub fn len(&self) -> usize {
        self.0.values().map(TokenSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl FromIterator<(TokenSet, Token)> for Relation {
    fn from_iter<I: IntoIterator<Item = (TokenSet, Token)>>(iter: I) -> Self {
        let mut r = Relation::new();
        for (x, b) in iter {
            r.insert(x, b);
        }
        r
    }
}

/// Token universe `A`, per-token families `Con_i`, per-token entailments and an optional truth token.
#[derive(Clone)]
pub struct Frame {
    tokens: TokenSet,
    con: BTreeMap<Token, Family>,
    entails: BTreeMap<Token, Relation>,
    truth: Option<Token>,
    idx: OnceLock<Arc<FrameIdx>>,
}

impl Frame {
    pub fn new(
        tokens: TokenSet,
        mut con: BTreeMap<Token, Family>,
        mut entails: BTreeMap<Token, Relation>,
        truth: Option<Token>,
    ) -> Result<Frame> {
        if tokens.is_empty() {
            return Err(Error::Empty("frame has no tokens".into()));
        }
        let known = |t: &Token, ctx: &str| -> Result<()> {
            if tokens.contains(t) {
                Ok(())
            } else {
                Err(Error::UnknownToken(format!("{t} in {ctx}")))
            }
        };
        if let Some(t) = &truth {
            known(t, "truth")?;
        }
        for (i, fam) in &con {
            known(i, "con")?;
            for x in fam {
                for t in x {
                    known(t, &format!("con({i}) set {x}"))?;
                }
            }
        }
        for (i, rel) in &entails {
            known(i, "entails")?;
            for (x, b) in rel.pairs() {
                for t in x {
                    known(t, &format!("entails({i}) antecedent {x}"))?;
                }
                known(b, &format!("entails({i}) [{x} -> {b}]"))?;
                if !con.get(i).is_some_and(|f| f.contains(x)) {
                    return Err(Error::EntDomain(format!("[{x} -> {b}] at {i}: {x} is not in con({i})")));
                }
            }
        }
        for t in &tokens {
            con.entry(t.clone()).or_default();
        }
        entails.retain(|_, r| !r.is_empty());
        Ok(Frame { tokens, con, entails, truth, idx: OnceLock::new() })
    }

    pub fn tokens(&self) -> &TokenSet {
        &self.tokens
    }

    pub fn con(&self, i: &Token) -> &Family {
        static EMPTY: Family = BTreeSet::new();
        self.con.get(i).unwrap_or(&EMPTY)
    }

    pub fn con_map(&self) -> &BTreeMap<Token, Family> {
        &self.con
    }

    pub fn entails_map(&self) -> &BTreeMap<Token, Relation> {
        &self.entails
    }

    pub fn entailment(&self, i: &Token) -> Relation {
        self.entails.get(i).cloned().unwrap_or_default()
    }

    pub fn entailed(&self, i: &Token, x: &TokenSet) -> TokenSet {
        self.entails.get(i).map(|r| r.targets(x)).unwrap_or_default()
    }

    pub fn entails(&self, i: &Token, x: &TokenSet, a: &Token) -> bool {
        self.entails.get(i).is_some_and(|r| r.contains(x, a))
    }

    pub fn truth(&self) -> Option<&Token> {
        self.truth.as_ref()
    }

    pub fn triples(&self) -> impl Iterator<Item = (&Token, &TokenSet, &Token)> {
        self.entails.iter().flat_map(|(i, r)| r.pairs().map(move |(x, a)| (i, x, a)))
    }

    pub(crate) fn idx(&self) -> &FrameIdx {
        self.idx.get_or_init(|| Arc::new(FrameIdx::build(self)))
    }

    /// The frame with one entailment triple removed; used for mutation tests.
    pub fn without_triple(&self, i: &Token, x: &TokenSet, a: &Token) -> Frame {
        let mut entails = self.entails.clone();
        if let Some(r) = entails.get_mut(i) {
            r.remove(x, a);
        }
        Frame::new(self.tokens.clone(), self.con.clone(), entails, self.truth.clone()).expect("removal keeps well-formedness")
    }

    /// The frame with one triple added. Fails if the triple is ill-formed.
    pub fn with_triple(&self, i: &Token, x: &TokenSet, a: &Token) -> Result<Frame> {
        let mut entails = self.entails.clone();
        entails.entry(i.clone()).or_default().insert(x.clone(), a.clone());
        Frame::new(self.tokens.clone(), self.con.clone(), entails, self.truth.clone())
    }

    /// The frame with `x` removed from `Con_i`, together with the triples anchored at it.
    pub fn without_con(&self, i: &Token, x: &TokenSet) -> Frame {
        let mut con = self.con.clone();
        con.entry(i.clone()).or_default().remove(x);
        let mut entails = self.entails.clone();
        if let Some(r) = entails.get_mut(i) {
            for a in r.targets(x).iter() {
                r.remove(x, a);
            }
        }
        Frame::new(self.tokens.clone(), con, entails, self.truth.clone()).expect("removal keeps well-formedness")
    }

    pub fn with_con(&self, i: &Token, x: TokenSet) -> Result<Frame> {
        let mut con = self.con.clone();
        con.entry(i.clone()).or_default().insert(x);
        Frame::new(self.tokens.clone(), con, self.entails.clone(), self.truth.clone())
    }

    pub fn with_truth(&self, truth: Option<Token>) -> Result<Frame> {
        Frame::new(self.tokens.clone(), self.con.clone(), self.entails.clone(), truth)
    }

    /// Rejects the reserved truth atom unless it is this frame's truth token.
    pub(crate) fn check_reserved(&self) -> Result<()> {
        let reserved = Token::atom(RESERVED_TRUTH);
        if self.tokens.contains(&reserved) && self.truth.as_ref() != Some(&reserved) {
            return Err(Error::Reserved(format!("{RESERVED_TRUTH} used as an ordinary token")));
        }
        Ok(())
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Frame) -> bool {
        self.tokens == other.tokens
            && self.truth == other.truth
            && self.con == other.con
            && self.entails == other.entails
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Frame")
            .field("tokens", &self.tokens)
            .field("truth", &self.truth)
            .field("con", &self.con)
            .field("entails", &self.entails)
            .finish()
    }
}

/// Token universe `S`, one consistency family `CON` and one entailment relation.
#[derive(Clone)]
pub struct InfoSystem {
    tokens: TokenSet,
    con: Family,
    entails: Relation,
    simplified: bool,
    idx: OnceLock<Arc<SysIdx>>,
}

impl InfoSystem {
    pub fn new(tokens: TokenSet, con: Family, entails: Relation, simplified: bool) -> Result<InfoSystem> {
        if tokens.is_empty() {
            return Err(Error::Empty("system has no tokens".into()));
        }
        for x in &con {
            for t in x {
                if !tokens.contains(t) {
                    return Err(Error::UnknownToken(format!("{t} in con set {x}")));
                }
            }
        }
        for (x, b) in entails.pairs() {
            for t in x.iter().chain(std::iter::once(b)) {
                if !tokens.contains(t) {
                    return Err(Error::UnknownToken(format!("{t} in [{x} -> {b}]")));
                }
            }
            if !con.contains(x) {
                return Err(Error::EntDomain(format!("[{x} -> {b}]: {x} is not in con")));
            }
        }
        Ok(InfoSystem { tokens, con, entails, simplified, idx: OnceLock::new() })
    }

    pub fn tokens(&self) -> &TokenSet {
        &self.tokens
    }

    pub fn con(&self) -> &Family {
        &self.con
    }

    pub fn entailment(&self) -> &Relation {
        &self.entails
    }

    pub fn entailed(&self, x: &TokenSet) -> TokenSet {
        self.entails.targets(x)
    }

    /// Whether the document declared the system as only simplified.
    pub fn simplified(&self) -> bool {
        self.simplified
    }

    pub(crate) fn idx(&self) -> &SysIdx {
        self.idx.get_or_init(|| Arc::new(SysIdx::build(self)))
    }
}

impl PartialEq for InfoSystem {
    fn eq(&self, other: &InfoSystem) -> bool {
        self.tokens == other.tokens
            && self.simplified == other.simplified
            && self.con == other.con
            && self.entails == other.entails
    }
}

impl Eq for InfoSystem {}

impl fmt::Debug for InfoSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InfoSystem")
            .field("tokens", &self.tokens)
            .field("simplified", &self.simplified)
            .field("con", &self.con)
            .field("entails", &self.entails)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    System(InfoSystem),
    Frame(Frame),
}

impl Structure {
    pub fn as_frame(&self) -> Result<&Frame> {
        match self {
            Structure::Frame(f) => Ok(f),
            Structure::System(_) => Err(Error::Type("expected a frame, found a system".into())),
        }
    }

    pub fn as_system(&self) -> Result<&InfoSystem> {
        match self {
            Structure::System(s) => Ok(s),
            Structure::Frame(_) => Err(Error::Type("expected a system, found a frame".into())),
        }
    }
}

impl From<Frame> for Structure {
    fn from(f: Frame) -> Self {
        Structure::Frame(f)
    }
}

impl From<InfoSystem> for Structure {
    fn from(s: InfoSystem) -> Self {
        Structure::System(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MorphismKind {
    Mapping,
    Family,
    Global,
}

impl MorphismKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MorphismKind::Mapping => "mapping",
            MorphismKind::Family => "family",
            MorphismKind::Global => "global",
        }
    }
}

impl std::str::FromStr for MorphismKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mapping" => Ok(MorphismKind::Mapping),
            "family" => Ok(MorphismKind::Family),
            "global" => Ok(MorphismKind::Global),
            _ => Err(format!("unknown morphism kind {s:?}")),
        }
    }
}

/// Component relations of a morphism. Mappings use the single key `None`.
pub type MorphismRel = BTreeMap<Option<Token>, Relation>;

/// A relation table typed as approximable mapping, approximable family or global consequence relation.
#[derive(Clone)]
pub struct Morphism {
    kind: MorphismKind,
    source: Arc<Structure>,
    target: Arc<Structure>,
    rel: MorphismRel,
}

impl Morphism {
    pub fn new(kind: MorphismKind, source: Arc<Structure>, target: Arc<Structure>, rel: MorphismRel) -> Result<Morphism> {
        match kind {
            MorphismKind::Mapping => {
                let (s, t) = (source.as_system()?, target.as_system()?);
                for (i, r) in &rel {
                    if let Some(i) = i {
                        return Err(Error::Type(format!("mapping entry indexed by {i}")));
                    }
                    for (x, b) in r.pairs() {
                        if !s.con().contains(x) {
                            return Err(Error::EntDomain(format!("[{x} -> {b}]: {x} is not in source con")));
                        }
                        if !t.tokens().contains(b) {
                            return Err(Error::UnknownToken(format!("{b} is not a target token")));
                        }
                    }
                }
            }
            MorphismKind::Family | MorphismKind::Global => {
                let (s, t) = (source.as_frame()?, target.as_frame()?);
                for (i, r) in &rel {
                    let Some(i) = i else {
                        return Err(Error::Type(format!("{} entry without index", kind.as_str())));
                    };
                    if !s.tokens().contains(i) {
                        return Err(Error::UnknownToken(format!("{i} is not a source token")));
                    }
                    for (x, b) in r.pairs() {
                        if !s.con(i).contains(x) {
                            return Err(Error::EntDomain(format!("[{x} -> {b}] at {i}: {x} is not in source con({i})")));
                        }
                        if !t.tokens().contains(b) {
                            return Err(Error::UnknownToken(format!("{b} is not a target token")));
                        }
                    }
                }
            }
        }
        Ok(Morphism::from_parts(kind, source, target, rel))
    }

    pub(crate) fn from_parts(kind: MorphismKind, source: Arc<Structure>, target: Arc<Structure>, mut rel: MorphismRel) -> Morphism {
        rel.retain(|_, r| !r.is_empty());
        Morphism { kind, source, target, rel }
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    pub fn source(&self) -> &Arc<Structure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Structure> {
        &self.target
    }

    pub fn rel(&self) -> &MorphismRel {
        &self.rel
    }

    pub fn component(&self, i: Option<&Token>) -> Relation {
        self.rel.get(&i.cloned()).cloned().unwrap_or_default()
    }

    pub fn triples(&self) -> impl Iterator<Item = (Option<&Token>, &TokenSet, &Token)> {
        self.rel.iter().flat_map(|(i, r)| r.pairs().map(move |(x, b)| (i.as_ref(), x, b)))
    }

    pub fn len(&self) -> usize {
        self.rel.values().map(Relation::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rel.is_empty()
    }

    /// A copy with a different kind tag and the same table.
    pub fn retagged(&self, kind: MorphismKind) -> Result<Morphism> {
        Morphism::new(kind, self.source.clone(), self.target.clone(), self.rel.clone())
    }

    /// A copy with one triple removed; used for negative controls.
    pub fn without_triple(&self, i: Option<&Token>, x: &TokenSet, b: &Token) -> Morphism {
        let mut rel = self.rel.clone();
        if let Some(r) = rel.get_mut(&i.cloned()) {
            r.remove(x, b);
        }
        Morphism::from_parts(self.kind, self.source.clone(), self.target.clone(), rel)
    }

    pub(crate) fn family_table(&self) -> Result<Vec<Vec<Bits>>> {
        let (s, t) = (self.source.as_frame()?.idx(), self.target.as_frame()?.idx());
        let mut table: Vec<Vec<Bits>> = s.con.iter().map(|fam| vec![t.uni.empty(); fam.len()]).collect();
        for (i, r) in &self.rel {
            let i = i.as_ref().and_then(|i| s.uni.index(i)).ok_or_else(|| Error::Type("family entry without a valid index".into()))?;
            for (x, targets) in r.groups() {
                let k = s.con_index(i, &s.uni.bits(x).expect("validated")).expect("validated");
                table[i][k] = t.uni.bits(targets).expect("validated");
            }
        }
        Ok(table)
    }

    pub(crate) fn mapping_table(&self) -> Result<Vec<Bits>> {
        let (s, t) = (self.source.as_system()?.idx(), self.target.as_system()?.idx());
        let mut table = vec![t.uni.empty(); s.con.len()];
        for (x, targets) in self.component(None).groups() {
            let k = s.pos[&s.uni.bits(x).expect("validated")];
            table[k] = t.uni.bits(targets).expect("validated");
        }
        Ok(table)
    }

    pub(crate) fn from_family_table(kind: MorphismKind, source: Arc<Structure>, target: Arc<Structure>, table: &[Vec<Bits>]) -> Morphism {
        let (s, t) = (source.as_frame().expect("frame").idx(), target.as_frame().expect("frame").idx());
        let mut rel = MorphismRel::new();
        for (i, row) in table.iter().enumerate() {
            let mut r = Relation::new();
            for (k, b) in row.iter().enumerate() {
                r.extend(s.uni.set(&s.con[i][k]), &t.uni.set(b));
            }
            rel.insert(Some(s.uni.token(i).clone()), r);
        }
        Morphism::from_parts(kind, source, target, rel)
    }

    pub(crate) fn from_mapping_table(source: Arc<Structure>, target: Arc<Structure>, table: &[Bits]) -> Morphism {
        let (s, t) = (source.as_system().expect("system").idx(), target.as_system().expect("system").idx());
        let mut r = Relation::new();
        for (k, b) in table.iter().enumerate() {
            r.extend(s.uni.set(&s.con[k]), &t.uni.set(b));
        }
        Morphism::from_parts(MorphismKind::Mapping, source, target, MorphismRel::from([(None, r)]))
    }
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Morphism) -> bool {
        self.kind == other.kind
            && same_structure(&self.source, &other.source)
            && same_structure(&self.target, &other.target)
            && self.rel == other.rel
    }
}

impl Eq for Morphism {}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism").field("kind", &self.kind).field("rel", &self.rel).finish_non_exhaustive()
    }
}

pub(crate) fn same_structure(a: &Arc<Structure>, b: &Arc<Structure>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Bit-level view of a frame.
pub(crate) struct FrameIdx {
    pub uni: Universe,
    /// `con[i]` lists `Con_i` in canonical order.
    pub con: Vec<Vec<Bits>>,
    pub pos: Vec<HashMap<Bits, usize>>,
    /// `ent[i][k]` is everything entailed at `i` by `con[i][k]`.
    pub ent: Vec<Vec<Bits>>,
    pub truth: Option<usize>,
}

impl FrameIdx {
    fn build(f: &Frame) -> FrameIdx {
        let uni = Universe::new(f.tokens.clone());
        let mut con = Vec::with_capacity(uni.len());
        let mut pos = Vec::with_capacity(uni.len());
        let mut ent = Vec::with_capacity(uni.len());
        for i in f.tokens.iter() {
            let fam: Vec<Bits> = f.con(i).iter().map(|x| uni.bits(x).expect("validated")).collect();
            let rel = f.entails.get(i);
            ent.push(
                f.con(i)
                    .iter()
                    .map(|x| rel.and_then(|r| r.0.get(x)).map(|t| uni.bits(t).expect("validated")).unwrap_or_else(|| uni.empty()))
                    .collect(),
            );
            pos.push(fam.iter().enumerate().map(|(k, b)| (b.clone(), k)).collect());
            con.push(fam);
        }
        let truth = f.truth.as_ref().and_then(|t| uni.index(t));
        FrameIdx { uni, con, pos, ent, truth }
    }

    pub fn n(&self) -> usize {
        self.uni.len()
    }

    pub fn con_index(&self, i: usize, x: &Bits) -> Option<usize> {
        self.pos[i].get(x).copied()
    }

    pub fn ent_of(&self, i: usize, x: &Bits) -> Option<&Bits> {
        self.con_index(i, x).map(|k| &self.ent[i][k])
    }

    /// Whether `Con_i` is closed under subsets.
    pub fn closed(&self, i: usize) -> bool {
        self.con[i].iter().all(|x| x.iter().all(|t| self.pos[i].contains_key(&x.without(t))))
    }
}

/// Bit-level view of a system.
pub(crate) struct SysIdx {
    pub uni: Universe,
    pub con: Vec<Bits>,
    pub pos: HashMap<Bits, usize>,
    pub ent: Vec<Bits>,
}

impl SysIdx {
    fn build(s: &InfoSystem) -> SysIdx {
        let uni = Universe::new(s.tokens.clone());
        let con: Vec<Bits> = s.con.iter().map(|x| uni.bits(x).expect("validated")).collect();
        let ent = s.con.iter().map(|x| uni.bits(&s.entails.targets(x)).expect("validated")).collect();
        let pos = con.iter().enumerate().map(|(k, b)| (b.clone(), k)).collect();
        SysIdx { uni, con, pos, ent }
    }
}
