//! Independent brute-force sequent search, shared by the oracle test and the acceptance run.
//!
//! Derivability is computed by forward chaining the calculus rules ((R⊤), (L∧) and (R∧) both
//! ways, (Cut), (W) and stage transfer) from the atom-level sequents of a frame, inside a
//! finite universe of formulas and antecedents, for a bounded number of rounds. Round `k`
//! holds exactly the sequents with a derivation of height at most `k` in that universe.

#![allow(dead_code)]

use std::collections::HashMap;

use infoframe::axioms::check_frame;
use infoframe::corpus;
use infoframe::functors::{apply_f, apply_s, apply_t, apply_w};
use infoframe::logic::{apply_e, derives, Csl, Formula, Gamma, Sequent};
use infoframe::{Frame, Token, TokenSet};

/// Frames that present logics over at most `max_atoms` atoms: the corpus plus functor images.
pub fn small_logics(max_atoms: usize) -> Vec<(String, Frame)> {
    let mut out: Vec<(String, Frame)> = corpus::sif_t_frames().into_iter().map(|(n, f)| (n.to_string(), f)).collect();
    out.push(("E(fix3-logic)".into(), apply_e(&corpus::fix3_logic()).unwrap()));
    out.push(("T(fix1)".into(), apply_t(&corpus::fix1()).unwrap()));
    out.push(("F(S(fix1))".into(), apply_f(&apply_s(&corpus::fix1()).unwrap()).unwrap()));
    out.push(("W(single)".into(), apply_w(&corpus::single(), None).unwrap()));
    out.retain(|(_, f)| f.tokens().len() <= max_atoms && check_frame(f, true, true).map(|r| r.passed()).unwrap_or(false));
    out
}

/// Every formula over `atoms` of depth at most `depth`, atoms having depth 0.
pub fn formulas(atoms: &TokenSet, depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = atoms.iter().cloned().map(Formula::atom).collect();
    for _ in 0..depth {
        let prev = all.clone();
        for l in &prev {
            for r in &prev {
                let f = Formula::and(l.clone(), r.clone());
                if !all.contains(&f) {
                    all.push(f);
                }
            }
        }
    }
    all.sort();
    all
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Ante {
    /// A finite set of formulas, as a bit mask over the formula universe.
    Set(u64),
    /// `{p}` at stage `p` when `p` is not one of its own atoms.
    Own,
}

struct Stage {
    token: Token,
    /// Formulas over `P_p`.
    allowed: u64,
    antes: Vec<Ante>,
    index: HashMap<Ante, usize>,
}

pub struct Search {
    formulas: Vec<Formula>,
    and_of: HashMap<(usize, usize), usize>,
    parts: Vec<Option<(usize, usize)>>,
    top: usize,
    stages: Vec<Stage>,
    derived: Vec<Vec<u64>>,
}

fn bits(m: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m >> i & 1 == 1)
}

impl Search {
    /// The universe: formulas of depth at most `depth`, antecedents of at most `width` formulas.
    pub fn new(f: &Frame, depth: usize, width: usize) -> Search {
        let formulas = formulas(f.tokens(), depth);
        assert!(formulas.len() <= 64, "formula universe too large for the bit masks");
        let pos: HashMap<Formula, usize> = formulas.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let mut and_of = HashMap::new();
        let mut parts = vec![None; formulas.len()];
        for (i, x) in formulas.iter().enumerate() {
            if let Formula::And(l, r) = x {
                let (l, r) = (pos[&**l], pos[&**r]);
                and_of.insert((l, r), i);
                parts[i] = Some((l, r));
            }
        }
        let truth = f.truth().expect("logics have truth").clone();
        let top = pos[&Formula::atom(truth)];
        let mut stages = Vec::new();
        for p in f.tokens().iter() {
            let pp = f.entailed(p, &TokenSet::singleton(p.clone()));
            let allowed = formulas
                .iter()
                .enumerate()
                .filter(|(_, x)| infoframe::logic::flatten(x).is_subset(&pp))
                .fold(0u64, |m, (i, _)| m | 1 << i);
            let members: Vec<usize> = bits(allowed).collect();
            let mut antes = vec![Ante::Set(0)];
            for (a, &i) in members.iter().enumerate() {
                antes.push(Ante::Set(1 << i));
                for (b, &j) in members.iter().enumerate().skip(a + 1) {
                    if width >= 2 {
                        antes.push(Ante::Set(1 << i | 1 << j));
                    }
                    for &k in members.iter().skip(b + 1) {
                        if width >= 3 {
                            antes.push(Ante::Set(1 << i | 1 << j | 1 << k));
                        }
                    }
                }
            }
            if !pp.contains(p) {
                antes.push(Ante::Own);
            }
            let index = antes.iter().enumerate().map(|(k, a)| (*a, k)).collect();
            stages.push(Stage { token: p.clone(), allowed, antes, index });
        }
        let mut s = Search { formulas, and_of, parts, top, stages, derived: Vec::new() };
        s.derived = s.base(f);
        s
    }

    /// Atom-level sequents read off the frame, with `∅` read as `{⊤}`, plus (R⊤).
    fn base(&self, f: &Frame) -> Vec<Vec<u64>> {
        let truth = f.truth().unwrap().clone();
        self.stages
            .iter()
            .map(|st| {
                st.antes
                    .iter()
                    .map(|a| {
                        let mut m = 0u64;
                        if st.allowed >> self.top & 1 == 1 {
                            m |= 1 << self.top;
                        }
                        let x: Option<TokenSet> = match a {
                            Ante::Own => Some(TokenSet::singleton(st.token.clone())),
                            Ante::Set(0) => Some(TokenSet::singleton(truth.clone())),
                            Ante::Set(s) => {
                                let atoms: Option<Vec<Token>> = bits(*s)
                                    .map(|i| match &self.formulas[i] {
                                        Formula::Atom(t) => Some(t.clone()),
                                        Formula::And(..) => None,
                                    })
                                    .collect();
                                atoms.map(|v| v.into_iter().collect())
                            }
                        };
                        if let Some(x) = x {
                            if f.con(&st.token).contains(&x) {
                                for q in f.entailed(&st.token, &x).iter() {
                                    if let Some(i) = self.formulas.iter().position(|y| *y == Formula::atom(q.clone())) {
                                        if st.allowed >> i & 1 == 1 {
                                            m |= 1 << i;
                                        }
                                    }
                                }
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect()
    }

    fn own_key(&self, s: usize) -> Ante {
        let st = &self.stages[s];
        match st.index.get(&Ante::Own) {
            Some(_) => Ante::Own,
            None => Ante::Set(1 << self.formulas.iter().position(|y| *y == Formula::atom(st.token.clone())).unwrap()),
        }
    }

    /// One round of every rule, reading only the previous round.
    fn step(&self) -> Vec<Vec<u64>> {
        let old = &self.derived;
        let mut new = old.clone();
        for (s, st) in self.stages.iter().enumerate() {
            let put = |new: &mut Vec<Vec<u64>>, key: Ante, m: u64| {
                if let Some(&k) = st.index.get(&key) {
                    new[s][k] |= m & st.allowed;
                }
            };
            for (k, &ante) in st.antes.iter().enumerate() {
                let m = old[s][k];
                let mut add = 0u64;
                for phi in bits(m) {
                    // (R∧) forward and backward
                    for psi in bits(m) {
                        if let Some(&c) = self.and_of.get(&(phi, psi)) {
                            add |= 1 << c;
                        }
                    }
                    if let Some((l, r)) = self.parts[phi] {
                        add |= 1 << l | 1 << r;
                    }
                    // (Cut)
                    if let Some(&j) = st.index.get(&Ante::Set(1 << phi)) {
                        add |= old[s][j];
                    }
                }
                new[s][k] |= add & st.allowed;
                if m == 0 {
                    continue;
                }
                if let Ante::Set(set) = ante {
                    // (W)
                    for xi in bits(st.allowed) {
                        put(&mut new, Ante::Set(set | 1 << xi), m);
                    }
                    for phi in bits(set) {
                        // (L∧) forward: Δ, φ, ψ ⊢ θ gives Δ, φ ∧ ψ ⊢ θ
                        for psi in bits(set) {
                            if let Some(&c) = self.and_of.get(&(phi, psi)) {
                                for delta in [set, set & !(1 << phi), set & !(1 << psi), set & !(1 << phi) & !(1 << psi)] {
                                    put(&mut new, Ante::Set(delta | 1 << c), m);
                                }
                            }
                        }
                        // (L∧) backward
                        if let Some((l, r)) = self.parts[phi] {
                            for delta in [set, set & !(1 << phi)] {
                                put(&mut new, Ante::Set(delta | 1 << l | 1 << r), m);
                            }
                        }
                    }
                }
                // transfer: q ⊢^q p and Γ ⊢^p θ give Γ ⊢^q θ
                let p_atom = self.formulas.iter().position(|y| *y == Formula::atom(st.token.clone()));
                for (q, qt) in self.stages.iter().enumerate() {
                    let Some(pa) = p_atom else { continue };
                    let own_q = qt.index[&self.own_key(q)];
                    if old[q][own_q] >> pa & 1 == 0 {
                        continue;
                    }
                    let key = match ante {
                        Ante::Own if q == s => Ante::Own,
                        Ante::Own => Ante::Set(1 << pa),
                        set => set,
                    };
                    if let Some(&j) = qt.index.get(&key) {
                        if let Ante::Set(x) = key {
                            if x & !qt.allowed != 0 {
                                continue;
                            }
                        }
                        new[q][j] |= m & qt.allowed;
                    }
                }
            }
        }
        new
    }

    /// Runs at most `rounds` rounds; returns how many changed anything.
    pub fn run(&mut self, rounds: usize) -> usize {
        for k in 0..rounds {
            let next = self.step();
            if next == self.derived {
                return k;
            }
            self.derived = next;
        }
        rounds
    }

    /// Compares every sequent of the universe with `derives`; returns (compared, disagreements).
    pub fn compare(&self, l: &Csl, max_width: usize) -> (usize, Vec<String>) {
        let mut n = 0;
        let mut bad = Vec::new();
        for (s, st) in self.stages.iter().enumerate() {
            for (k, ante) in st.antes.iter().enumerate() {
                let gamma = match ante {
                    Ante::Own => Gamma::Own,
                    Ante::Set(m) if m.count_ones() as usize <= max_width => Gamma::formulas(bits(*m).map(|i| self.formulas[i].clone())),
                    Ante::Set(_) => continue,
                };
                for phi in bits(st.allowed) {
                    let seq = Sequent::new(st.token.clone(), gamma.clone(), self.formulas[phi].clone());
                    let got = derives(l, &seq, false).expect("well-formed sequent").holds;
                    let want = self.derived[s][k] >> phi & 1 == 1;
                    n += 1;
                    if got != want {
                        bad.push(format!("{seq}: derives says {got}, search says {want}"));
                    }
                }
            }
        }
        (n, bad)
    }
}

pub const SEARCH_DEPTH: usize = 6;

/// Runs the oracle over all small logics; returns (sequents compared, disagreements).
pub fn oracle_agreement() -> (usize, Vec<String>) {
    let mut total = 0;
    let mut bad = Vec::new();
    for (name, f) in small_logics(2) {
        let l = Csl::new(f.clone()).unwrap();
        let mut s = Search::new(&f, 2, 3);
        s.run(SEARCH_DEPTH);
        let (n, b) = s.compare(&l, 3);
        total += n;
        bad.extend(b.into_iter().map(|x| format!("{name}: {x}")));
    }
    (total, bad)
}
