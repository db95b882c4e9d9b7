//! Abstract bases, approximable relations, finite rounded-ideal completion and DOT export.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::InfoSystem;
use crate::report::{Collector, Limits, Report, WitnessItem};
use crate::token::{Token, TokenSet};

pub const TRANSITIVITY: &str = "transitivity";
pub const INTERPOLATION: &str = "interpolation";

/// Largest carrier [`complete`] will enumerate.
pub const CARRIER_BOUND: usize = 14;

/// A carrier with a relation `≺`, stored as pairs `(x, y)` for `x ≺ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractBasis {
    carrier: TokenSet,
    prec: BTreeSet<(Token, Token)>,
}

impl AbstractBasis {
    pub fn new(carrier: TokenSet, prec: BTreeSet<(Token, Token)>) -> Result<AbstractBasis> {
        if let Some((x, y)) = prec.iter().find(|(x, y)| !carrier.contains(x) || !carrier.contains(y)) {
            return Err(Error::UnknownToken(format!("[{x} {y}] mentions a token outside the carrier")));
        }
        Ok(AbstractBasis { carrier, prec })
    }

    pub fn carrier(&self) -> &TokenSet {
        &self.carrier
    }

    pub fn prec(&self) -> &BTreeSet<(Token, Token)> {
        &self.prec
    }

    pub fn precedes(&self, x: &Token, y: &Token) -> bool {
        self.prec.contains(&(x.clone(), y.clone()))
    }

    /// `↓x = {y : y ≺ x}`.
    pub fn below(&self, x: &Token) -> TokenSet {
        self.prec.iter().filter(|(_, y)| y == x).map(|(w, _)| w.clone()).collect()
    }
}

/// Transitivity and interpolation, the latter with `M = ↓x`, which decides every `M ⊆ ↓x`.
pub fn check_abstract_basis(b: &AbstractBasis) -> Report {
    check_abstract_basis_with(b, &Limits::default())
}

pub fn check_abstract_basis_with(b: &AbstractBasis, limits: &Limits) -> Report {
    let mut c = Collector::new(limits);
    for (x, y) in &b.prec {
        for z in b.carrier.iter().filter(|z| b.precedes(y, z)) {
            if !b.precedes(x, z) {
                c.push(TRANSITIVITY, vec![x.into(), y.into(), z.into()], format!("{x} ≺ {y} ≺ {z} but not {x} ≺ {z}"));
            }
        }
    }
    for x in &b.carrier {
        if let Some(m) = interpolation_gap(b, x) {
            c.push(INTERPOLATION, vec![(&m).into(), x.into()], format!("no v with {m} ≺ v ≺ {x}"));
        }
    }
    c.finish()
}

fn interpolation_gap(b: &AbstractBasis, x: &Token) -> Option<TokenSet> {
    let d = b.below(x);
    if d.is_empty() {
        return Some(d);
    }
    let ok = d.iter().any(|v| d.is_subset(&b.below(v)));
    (!ok).then_some(d)
}

fn validate(b: &AbstractBasis) -> Result<()> {
    let r = check_abstract_basis(b);
    if let Some(v) = r.first(TRANSITIVITY) {
        return Err(Error::Type(format!("relation is not transitive: {}", v.message)));
    }
    if let Some(x) = b.carrier.iter().find(|x| interpolation_gap(b, x).is_some()) {
        let m = interpolation_gap(b, x).expect("just found");
        return Err(Error::InterpFail { m, x: x.clone() });
    }
    Ok(())
}

/// Carrier the set tokens of `CON`, with `X ≺ Y ⟺ Y ⊢ X`. Interpolation is verified, not assumed.
pub fn extract_basis(s: &InfoSystem) -> Result<AbstractBasis> {
    let mut prec = BTreeSet::new();
    for y in s.con() {
        let e = s.entailed(y);
        for x in s.con().iter().filter(|x| x.is_subset(&e)) {
            prec.insert((Token::set(x.clone()), Token::set(y.clone())));
        }
    }
    let b = AbstractBasis::new(s.con().iter().map(|x| Token::set(x.clone())).collect(), prec)?;
    validate(&b)?;
    Ok(b)
}

pub const APPROX_1: &str = "(1)";
pub const APPROX_2: &str = "(2)";
pub const APPROX_3: &str = "(3)";
pub const APPROX_4: &str = "(4)";

/// The four conditions for `R ⊆ B × C` to be approximable, with `(u, v) ∈ r` meaning `uRv`.
///
/// Condition (2) is tested on the maximal `M = R(u)`; `M = ∅` is included, so every `u` must relate to something.
/// The identity on a basis is the converse of `≺`: `uRv ⟺ v ≺ u`.
pub fn check_approx_relation(r: &BTreeSet<(Token, Token)>, b: &AbstractBasis, c: &AbstractBasis) -> Result<Report> {
    if let Some((u, v)) = r.iter().find(|(u, v)| !b.carrier.contains(u) || !c.carrier.contains(v)) {
        return Err(Error::UnknownToken(format!("[{u} {v}] is not in B × C")));
    }
    let rel = |u: &Token, v: &Token| r.contains(&(u.clone(), v.clone()));
    let image = |u: &Token| -> TokenSet { r.iter().filter(|(x, _)| x == u).map(|(_, v)| v.clone()).collect() };
    let mut col = Collector::new(&Limits::default());
    for (u, v) in r {
        for w in c.below(v).iter().filter(|w| !rel(u, w)) {
            col.push(APPROX_1, vec![u.into(), v.into(), w.into()], format!("{u} R {v} and {w} ≺ {v} but not {u} R {w}"));
        }
        for u2 in b.carrier.iter().filter(|u2| b.precedes(u, u2) && !rel(u2, v)) {
            col.push(APPROX_3, vec![u.into(), u2.into(), v.into()], format!("{u} ≺ {u2} and {u} R {v} but not {u2} R {v}"));
        }
        if !b.below(u).iter().any(|w| rel(w, v)) {
            col.push(APPROX_4, vec![u.into(), v.into()], format!("{u} R {v} but no w ≺ {u} with w R {v}"));
        }
    }
    for u in &b.carrier {
        let m = image(u);
        if !m.iter().any(|w| m.is_subset(&c.below(w))) {
            col.push(APPROX_2, vec![u.into(), (&m).into()], format!("no w with {u} R w and {m} ≺ w"));
        }
    }
    Ok(col.finish())
}

/// Rounded ideals ordered by inclusion, with the way-below relation of that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    /// Sorted ascending.
    pub elements: Vec<TokenSet>,
    pub leq: BTreeSet<(usize, usize)>,
    pub way_below: BTreeSet<(usize, usize)>,
}

impl FinitePoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.leq.contains(&(i, j))
    }

    pub fn ll(&self, i: usize, j: usize) -> bool {
        self.way_below.contains(&(i, j))
    }

    pub fn index_of(&self, x: &TokenSet) -> Option<usize> {
        self.elements.binary_search(x).ok()
    }

    /// Pairs `i < j` with nothing strictly between.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let lt = |i: usize, j: usize| i != j && self.le(i, j);
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The least upper bound of a set of element indices, if it exists.
    fn lub(&self, s: &[usize]) -> Option<usize> {
        let ubs: Vec<usize> = (0..self.len()).filter(|&u| s.iter().all(|&x| self.le(x, u))).collect();
        ubs.iter().copied().find(|&u| ubs.iter().all(|&w| self.le(u, w)))
    }
}

/// All nonempty `I ⊆ B` that are downward closed and directed under `≺`.
pub fn complete(b: &AbstractBasis) -> Result<FinitePoset> {
    let n = b.carrier.len();
    if n > CARRIER_BOUND {
        return Err(Error::Bound(format!("carrier of {n} elements exceeds the completion bound {CARRIER_BOUND}")));
    }
    validate(b)?;
    let below: Vec<TokenSet> = b.carrier.iter().map(|x| b.below(x)).collect();
    let mut elements = Vec::new();
    for s in crate::token::subsets_of(&b.carrier) {
        if s.is_empty() {
            continue;
        }
        let idx = |x: &Token| b.carrier.position(x).expect("carrier member");
        let down = s.iter().all(|x| below[idx(x)].is_subset(&s));
        // Every finite M ⊆ I has an upper bound in I iff I itself does.
        let directed = s.iter().any(|v| s.is_subset(&below[idx(v)]));
        if down && directed {
            elements.push(s);
        }
    }
    elements.sort();
    let m = elements.len();
    let mut p = FinitePoset { elements, leq: BTreeSet::new(), way_below: BTreeSet::new() };
    for i in 0..m {
        for j in 0..m {
            if p.elements[i].is_subset(&p.elements[j]) {
                p.leq.insert((i, j));
            }
        }
    }
    p.way_below = way_below_of(&p);
    Ok(p)
}

/// `x ≪ y` iff every directed `S` with a lub above `y` has a member above `x`.
fn way_below_of(p: &FinitePoset) -> BTreeSet<(usize, usize)> {
    let m = p.len();
    let mut directed: Vec<(Vec<usize>, usize)> = Vec::new();
    for mask in 1u32..1 << m {
        let s: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
        let ok = s.iter().all(|&a| s.iter().all(|&c| s.iter().any(|&u| p.le(a, u) && p.le(c, u))));
        if ok {
            if let Some(l) = p.lub(&s) {
                directed.push((s, l));
            }
        }
    }
    let mut out = BTreeSet::new();
    for x in 0..m {
        for y in 0..m {
            if directed.iter().all(|(s, l)| !p.le(y, *l) || s.iter().any(|&u| p.le(x, u))) {
                out.insert((x, y));
            }
        }
    }
    out
}

pub const LL_TRANSITIVE: &str = "way-below-transitive";
pub const LL_BELOW: &str = "way-below-implies-below";
pub const LL_SANDWICH: &str = "way-below-sandwich";
pub const LL_INTERPOLATION: &str = "way-below-interpolation";
pub const CONTINUITY: &str = "continuity";

/// The order-theoretic facts about `≪` plus the finite continuity check against `b`.
pub fn check_poset(p: &FinitePoset, b: &AbstractBasis) -> Report {
    let mut c = Collector::new(&Limits::default());
    let n = p.len();
    let e = |i: usize| -> WitnessItem { (&p.elements[i]).into() };
    for x in 0..n {
        for y in 0..n {
            if !p.ll(x, y) {
                continue;
            }
            if !p.le(x, y) {
                c.push(LL_BELOW, vec![e(x), e(y)], "x ≪ y but not x ⊑ y".into());
            }
            for z in 0..n {
                if p.ll(y, z) && !p.ll(x, z) {
                    c.push(LL_TRANSITIVE, vec![e(x), e(y), e(z)], "x ≪ y ≪ z but not x ≪ z".into());
                }
            }
            for u in (0..n).filter(|&u| p.le(u, x)) {
                for z in (0..n).filter(|&z| p.le(y, z)) {
                    if !p.ll(u, z) {
                        c.push(LL_SANDWICH, vec![e(u), e(x), e(y), e(z)], "u ⊑ x ≪ y ⊑ z but not u ≪ z".into());
                    }
                }
            }
        }
    }
    // Every element is principal, so the basis is the whole poset.
    for x in 0..n {
        let m: Vec<usize> = (0..n).filter(|&a| p.ll(a, x)).collect();
        if !m.is_empty() && !(0..n).any(|v| p.ll(v, x) && m.iter().all(|&a| p.ll(a, v))) {
            let joined: TokenSet = m.iter().flat_map(|&a| p.elements[a].iter().cloned().collect::<Vec<_>>()).collect();
            c.push(LL_INTERPOLATION, vec![joined.into(), e(x)], "no v with M ≪ v ≪ x".into());
        }
    }
    for (i, ideal) in p.elements.iter().enumerate() {
        let union: TokenSet = ideal.iter().flat_map(|t| b.below(t).iter().cloned().collect::<Vec<_>>()).collect();
        if union != *ideal {
            c.push(CONTINUITY, vec![e(i), union.into()], "ideal differs from the union of its principal ideals".into());
        }
        for t in ideal {
            if let Some(j) = p.index_of(&b.below(t)) {
                if !p.ll(j, i) {
                    c.push(CONTINUITY, vec![e(j), e(i)], "principal ideal of a member is not way below the ideal".into());
                }
            }
        }
    }
    c.finish()
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram, bottom to top, with dashed edges for the non-reflexive part of `≪` when asked.
pub fn export_dot(p: &FinitePoset, annotate_way_below: bool) -> String {
    let mut out = String::from("digraph completion {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, x) in p.elements.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(&x.to_string()));
    }
    for (i, j) in p.hasse() {
        let _ = writeln!(out, "  n{i} -> n{j};");
    }
    if annotate_way_below {
        for &(i, j) in p.way_below.iter().filter(|(i, j)| i != j) {
            let _ = writeln!(out, "  n{i} -> n{j} [style=dashed, constraint=false];");
        }
    }
    out.push_str("}\n");
    out
}
