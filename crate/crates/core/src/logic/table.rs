use std::collections::BTreeMap;

use crate::axioms::check_frame_with;
use crate::error::{Error, Result};
use crate::logic::csl::Csl;
use crate::model::{Family, Frame, Relation};
use crate::report::{Collector, Limits, Report, WitnessItem};
use crate::token::{subsets_of, Token, TokenSet};

pub const STRATIFICATION: &str = "stratification";
pub const STAGE_INCLUSION: &str = "stage-inclusion";
pub const TRANSFER: &str = "transfer";
pub const R_TOP: &str = "R-top";
pub const CUT: &str = "cut";
pub const WEAKENING: &str = "weakening";
pub const SINT: &str = "SINT";

/// The left side of an atom-level derivation at a stage.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Antecedent {
    /// The stage atom itself, `{p}`.
    Own,
    Atoms(TokenSet),
}

/// One stage `p`: its atom set `P_p` and the atom-level derivations `X ⊢^p q`, grouped by `X`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stage {
    pub atoms: TokenSet,
    pub rows: BTreeMap<Antecedent, TokenSet>,
}

impl Stage {
    pub fn new(atoms: TokenSet, mut rows: BTreeMap<Antecedent, TokenSet>) -> Stage {
        rows.retain(|_, r| !r.is_empty());
        Stage { atoms, rows }
    }
}

/// A stratified conjunctive logic given by its atom-level derivability.
///
/// Keys are normalized so that equal tables compare equal: `{p}` at stage `p` becomes
/// [`Antecedent::Own`] and the empty antecedent is stored under `{⊤}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CslTable {
    top: Token,
    stages: BTreeMap<Token, Stage>,
}

impl CslTable {
    pub fn new(top: Token, stages: BTreeMap<Token, Stage>) -> Result<CslTable> {
        if !stages.contains_key(&top) {
            return Err(Error::Table(format!("top {top} is not a stage")));
        }
        let known = |t: &Token, ctx: &dyn Fn() -> String| -> Result<()> {
            if stages.contains_key(t) {
                Ok(())
            } else {
                Err(Error::UnknownToken(format!("{t} in {}", ctx())))
            }
        };
        let mut out = BTreeMap::new();
        for (p, st) in &stages {
            for a in &st.atoms {
                known(a, &|| format!("atoms of stage {p}"))?;
            }
            let mut rows: BTreeMap<Antecedent, TokenSet> = BTreeMap::new();
            for (k, r) in &st.rows {
                if let Antecedent::Atoms(x) = k {
                    for a in x {
                        known(a, &|| format!("an antecedent at stage {p}"))?;
                    }
                }
                for q in r {
                    known(q, &|| format!("a consequent at stage {p}"))?;
                }
                let key = normalize(p, &top, k);
                let e = rows.entry(key).or_default();
                *e = e.union(r);
            }
            out.insert(p.clone(), Stage::new(st.atoms.clone(), rows));
        }
        Ok(CslTable { top, stages: out })
    }

    pub fn top(&self) -> &Token {
        &self.top
    }

    pub fn stages(&self) -> &BTreeMap<Token, Stage> {
        &self.stages
    }

    /// The stage atoms, in order.
    pub fn tokens(&self) -> TokenSet {
        self.stages.keys().cloned().collect()
    }

    /// `{q : X ⊢^p q}` for an antecedent read as a set of atoms.
    pub fn row(&self, p: &Token, x: &Antecedent) -> TokenSet {
        self.stages
            .get(p)
            .and_then(|st| st.rows.get(&normalize(p, &self.top, x)))
            .cloned()
            .unwrap_or_default()
    }

    fn atoms(&self, p: &Token) -> &TokenSet {
        &self.stages[p].atoms
    }

    fn own(&self, p: &Token) -> TokenSet {
        self.row(p, &Antecedent::Own)
    }
}

fn normalize(p: &Token, top: &Token, k: &Antecedent) -> Antecedent {
    match k {
        Antecedent::Own => Antecedent::Own,
        Antecedent::Atoms(x) if x.is_empty() => normalize(p, top, &Antecedent::Atoms(TokenSet::singleton(top.clone()))),
        Antecedent::Atoms(x) if x.len() == 1 && x.contains(p) => Antecedent::Own,
        Antecedent::Atoms(x) => Antecedent::Atoms(x.clone()),
    }
}

fn set_of(p: &Token, k: &Antecedent) -> TokenSet {
    match k {
        Antecedent::Own => TokenSet::singleton(p.clone()),
        Antecedent::Atoms(x) => x.clone(),
    }
}

impl Csl {
    /// The atom-level table: `self ⊢^p q` for `q ∈ ent_p({p})` and `X ⊢^p q` for the other consistent `X`.
    pub fn table(&self) -> CslTable {
        let f = self.frame();
        let mut stages = BTreeMap::new();
        for p in f.tokens() {
            let own = TokenSet::singleton(p.clone());
            let mut rows = BTreeMap::new();
            for x in f.con(p) {
                if x.is_empty() {
                    continue;
                }
                let key = if *x == own { Antecedent::Own } else { Antecedent::Atoms(x.clone()) };
                rows.insert(key, f.entailed(p, x));
            }
            stages.insert(p.clone(), Stage::new(f.entailed(p, &own), rows));
        }
        CslTable::new(self.top().clone(), stages).expect("read off a valid frame")
    }
}

/// The logic presented by a strong frame with truth.
pub fn apply_c(f: Frame) -> Result<Csl> {
    Csl::new(f)
}

pub fn apply_e(t: &CslTable) -> Result<Frame> {
    apply_e_with(t, &Limits::default())
}

/// `Con_p = {{p}} ∪ {X ⊆ P_p : p ⊢^p ⋀X}` and `X ⊨_p q ⟺ ⋀X ⊢^p q`.
pub fn apply_e_with(t: &CslTable, limits: &Limits) -> Result<Frame> {
    let mut con = BTreeMap::new();
    let mut entails = BTreeMap::new();
    for (p, st) in &t.stages {
        let own = t.own(p);
        let base: TokenSet = st.atoms.iter().filter(|a| own.contains(a)).cloned().collect();
        limits.powerset_fits(base.len(), 1, "consistency family of a logic stage")?;
        let mut fam: Family = subsets_of(&base).collect();
        fam.insert(TokenSet::singleton(p.clone()));
        let mut rel = Relation::new();
        for x in &fam {
            rel.extend(x.clone(), &t.row(p, &Antecedent::Atoms(x.clone())));
        }
        con.insert(p.clone(), fam);
        entails.insert(p.clone(), rel);
    }
    Frame::new(t.tokens(), con, entails, Some(t.top.clone()))
}

pub fn check_csl_table(t: &CslTable) -> Result<Report> {
    check_csl_table_with(t, &Limits::default())
}

/// Checks the logic rules directly on the table, then the frame it induces.
pub fn check_csl_table_with(t: &CslTable, limits: &Limits) -> Result<Report> {
    let mut c = Collector::new(limits);
    let mut budget = limits.budget("logic table check");
    let tok = |x: &Token| -> WitnessItem { x.into() };
    let set = |x: &TokenSet| -> WitnessItem { x.into() };
    for (p, st) in &t.stages {
        let own = t.own(p);
        for q in &st.atoms {
            if !own.contains(q) {
                c.push(STRATIFICATION, vec![tok(p), tok(q)], format!("{q} is in P_{p} but {p} does not derive {q} at {p}"));
            }
        }
        for (k, r) in &st.rows {
            let x = set_of(p, k);
            if matches!(k, Antecedent::Atoms(_)) && !x.is_subset(&st.atoms) {
                c.push(STRATIFICATION, vec![tok(p), set(&x)], format!("antecedent {x} at {p} leaves P_{p}"));
            }
            if let Some(q) = r.iter().find(|q| !st.atoms.contains(q)) {
                c.push(STRATIFICATION, vec![tok(p), set(&x), tok(q)], format!("{x} derives {q} at {p} but {q} is not in P_{p}"));
            }
        }
        if !st.atoms.contains(&t.top) {
            c.push(R_TOP, vec![tok(p), tok(&t.top)], format!("{} is not in P_{p}", t.top));
        }
        limits.powerset_fits(st.atoms.len(), 0, "antecedents of a logic stage")?;
        let mut antecedents = vec![Antecedent::Own];
        antecedents.extend(subsets_of(&st.atoms).map(Antecedent::Atoms));
        for k in &antecedents {
            budget.tick()?;
            let x = set_of(p, k);
            let r = t.row(p, k);
            if !r.contains(&t.top) {
                c.push(R_TOP, vec![tok(p), set(&x)], format!("{x} does not derive {} at {p}", t.top));
            }
            if let Antecedent::Atoms(xs) = k {
                for a in st.atoms.iter().filter(|a| !xs.contains(a)) {
                    let y = xs.with(a.clone());
                    if let Some(q) = r.iter().find(|q| !t.row(p, &Antecedent::Atoms(y.clone())).contains(q)) {
                        c.push(WEAKENING, vec![tok(p), set(&x), set(&y), tok(q)], format!("{x} derives {q} at {p} but {y} does not"));
                    }
                }
            }
            let within: TokenSet = r.iter().filter(|a| st.atoms.contains(a)).cloned().collect();
            if c.wants(CUT) {
                limits.powerset_fits(within.len(), 0, "cut formulas")?;
                for y in subsets_of(&within) {
                    budget.tick()?;
                    let ry = t.row(p, &Antecedent::Atoms(y.clone()));
                    if let Some(q) = ry.iter().find(|q| !r.contains(q)) {
                        c.push(CUT, vec![tok(p), set(&x), set(&y), tok(q)], format!("{x} derives {y} and {y} derives {q} at {p} but {x} does not derive {q}"));
                        break;
                    }
                }
            }
            let sint = within.iter().any(|s| t.stages.contains_key(s) && r.is_subset(&t.own(s)));
            if !r.is_empty() && !sint {
                c.push(SINT, vec![tok(p), set(&x), set(&r)], format!("no r in P_{p} with {x} deriving r at {p} and r deriving {r} at r"));
            }
        }
    }
    for (q, _) in &t.stages {
        for p in t.own(q).iter().filter(|p| *p != q && t.stages.contains_key(p)) {
            if !t.atoms(p).is_subset(t.atoms(q)) {
                c.push(STAGE_INCLUSION, vec![tok(q), tok(p)], format!("{q} derives {p} at {q} but P_{p} is not inside P_{q}"));
            }
            for (k, r) in &t.stages[p].rows {
                let x = set_of(p, k);
                if !x.is_subset(t.atoms(q)) && *k != Antecedent::Own {
                    continue;
                }
                let at_q = t.row(q, &Antecedent::Atoms(x.clone()));
                if let Some(a) = r.iter().find(|a| !at_q.contains(a)) {
                    c.push(TRANSFER, vec![tok(q), tok(p), set(&x), tok(a)], format!("{q} derives {p} at {q} and {x} derives {a} at {p} but not at {q}"));
                }
            }
        }
    }
    let mut report = c.finish();
    let frame = apply_e_with(t, limits)?;
    report.merge(check_frame_with(&frame, true, true, limits)?, Some("frame"));
    Ok(report)
}
