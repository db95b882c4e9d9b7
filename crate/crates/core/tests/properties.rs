use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use infoframe::axioms::{check_frame, check_system, verify_metatheorems, SystemLevel};
use infoframe::bases::{check_abstract_basis, check_poset, complete, AbstractBasis};
use infoframe::category::compose;
use infoframe::corpus;
use infoframe::doc::{parse_document, serialize, Document};
use infoframe::logic::{big_and, flatten, parse_formula, Formula};
use infoframe::token::subsets_of;
use infoframe::{Family, Frame, InfoSystem, Morphism, MorphismKind, MorphismRel, Relation, Structure, Token, TokenSet};
use proptest::prelude::*;

const NAMES: [&str; 3] = ["a", "b", "c"];

fn universe(n: usize) -> TokenSet {
    NAMES[..n].iter().map(|s| Token::atom(s)).collect()
}

/// The subset of `base` selected by the bits of `mask`.
fn pick(base: &TokenSet, mask: u64) -> TokenSet {
    base.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()).collect()
}

fn all_subsets(base: &TokenSet) -> Vec<TokenSet> {
    subsets_of(base).collect()
}

/// A system over up to three tokens: `con_mask` selects CON among all subsets, `ent[k]`
/// selects what the k-th consistent set entails.
fn system(n: usize, con_mask: u64, ent: &[u64]) -> InfoSystem {
    let toks = universe(n);
    let subs = all_subsets(&toks);
    let con: Family = subs.iter().enumerate().filter(|(k, _)| con_mask >> k & 1 == 1).map(|(_, x)| x.clone()).collect();
    let mut rel = Relation::new();
    for (k, x) in con.iter().enumerate() {
        rel.extend(x.clone(), &pick(&toks, ent[k % ent.len()]));
    }
    InfoSystem::new(toks, con, rel, false).unwrap()
}

fn arb_system() -> impl Strategy<Value = InfoSystem> {
    (1usize..=3, any::<u64>(), prop::collection::vec(any::<u64>(), 1..9)).prop_map(|(n, c, e)| system(n, c, &e))
}

fn arb_frame() -> impl Strategy<Value = Frame> {
    (1usize..=3, prop::collection::vec(any::<u64>(), 3), prop::collection::vec(any::<u64>(), 8), any::<bool>()).prop_map(
        |(n, cons, ents, truth)| {
            let toks = universe(n);
            let subs = all_subsets(&toks);
            let mut con = BTreeMap::new();
            let mut entails = BTreeMap::new();
            for (i, t) in toks.iter().enumerate() {
                let fam: Family = subs.iter().enumerate().filter(|(k, _)| cons[i] >> k & 1 == 1).map(|(_, x)| x.clone()).collect();
                let mut rel = Relation::new();
                for (k, x) in fam.iter().enumerate() {
                    rel.extend(x.clone(), &pick(&toks, ents[(i * 3 + k) % ents.len()] >> (i * 3)));
                }
                con.insert(t.clone(), fam);
                entails.insert(t.clone(), rel);
            }
            let truth = truth.then(|| toks.iter().next().unwrap().clone());
            Frame::new(toks, con, entails, truth).unwrap()
        },
    )
}

/// Which of conditions (1) to (6) fail, straight from the definition, with every nonempty finite F.
fn brute_system_failures(s: &InfoSystem) -> BTreeSet<&'static str> {
    let con = s.con();
    let ent = |x: &TokenSet| s.entailed(x);
    let mut out = BTreeSet::new();
    for a in s.tokens().iter() {
        if !con.contains(&TokenSet::singleton(a.clone())) {
            out.insert("(1)");
        }
    }
    for x in con {
        let ex = ent(x);
        for a in ex.iter() {
            if !con.contains(&x.with(a.clone())) {
                out.insert("(2)");
            }
            if !con.iter().any(|z| z.is_subset(&ex) && ent(z).contains(a)) {
                out.insert("(5)");
            }
        }
        for y in con {
            if x.is_subset(y) && !ex.is_subset(&ent(y)) {
                out.insert("(3)");
            }
            if y.is_subset(&ex) && !ent(y).is_subset(&ex) {
                out.insert("(4)");
            }
        }
        for f in all_subsets(&ex).into_iter().filter(|f| !f.is_empty()) {
            if !con.iter().any(|z| f.is_subset(z) && z.is_subset(&ex)) {
                out.insert("(6)");
            }
        }
    }
    out
}

fn sys_arc(s: InfoSystem) -> Arc<Structure> {
    Arc::new(Structure::System(s))
}

fn frame_arc(f: Frame) -> Arc<Structure> {
    Arc::new(Structure::Frame(f))
}

/// A relation from each consistent set of `src` to tokens of `dst`.
fn arb_rel(domain: &[TokenSet], dst: &TokenSet, bits: &[u64]) -> Relation {
    let mut r = Relation::new();
    for (k, x) in domain.iter().enumerate() {
        r.extend(x.clone(), &pick(dst, bits[k % bits.len()]));
    }
    r
}

fn mapping(src: &Arc<Structure>, dst: &Arc<Structure>, bits: &[u64]) -> Morphism {
    let s = src.as_system().unwrap();
    let con: Vec<TokenSet> = s.con().iter().cloned().collect();
    let rel = arb_rel(&con, dst.as_system().unwrap().tokens(), bits);
    Morphism::new(MorphismKind::Mapping, src.clone(), dst.clone(), MorphismRel::from([(None, rel)])).unwrap()
}

fn family(src: &Arc<Structure>, dst: &Arc<Structure>, bits: &[u64]) -> Morphism {
    let s = src.as_frame().unwrap();
    let t = dst.as_frame().unwrap();
    let mut rel = MorphismRel::new();
    for (i, tok) in s.tokens().iter().enumerate() {
        let con: Vec<TokenSet> = s.con(tok).iter().cloned().collect();
        rel.insert(Some(tok.clone()), arb_rel(&con, t.tokens(), &bits[i..]));
    }
    Morphism::new(MorphismKind::Family, src.clone(), dst.clone(), rel).unwrap()
}

fn triples(m: &Morphism) -> BTreeSet<(Option<Token>, TokenSet, Token)> {
    m.triples().map(|(i, x, b)| (i.cloned(), x.clone(), b.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn system_report_matches_definition(s in arb_system()) {
        let got: BTreeSet<String> = check_system(&s, SystemLevel::Cis).unwrap().axioms().into_iter().map(String::from).collect();
        let want: BTreeSet<String> = brute_system_failures(&s).into_iter().map(String::from).collect();
        prop_assert_eq!(got, want);
        let scis: BTreeSet<String> = check_system(&s, SystemLevel::Scis).unwrap().axioms().into_iter().map(String::from).collect();
        prop_assert!(!scis.contains("(2)"));
    }

    #[test]
    fn mapping_composition_is_relational(
        a in arb_system(), b in arb_system(), c in arb_system(),
        g in prop::collection::vec(any::<u64>(), 1..9), h in prop::collection::vec(any::<u64>(), 1..9),
    ) {
        let (sa, sb, sc) = (sys_arc(a), sys_arc(b), sys_arc(c));
        let (g, h) = (mapping(&sa, &sb, &g), mapping(&sb, &sc, &h));
        let mid = sb.as_system().unwrap();
        let (gr, hr) = (g.component(None), h.component(None));
        let mut want = BTreeSet::new();
        for x in sa.as_system().unwrap().con() {
            for y in mid.con() {
                if y.is_subset(&gr.targets(x)) {
                    for z in hr.targets(y).iter() {
                        want.insert((None, x.clone(), z.clone()));
                    }
                }
            }
        }
        prop_assert_eq!(triples(&compose(&g, &h).unwrap()), want);
    }

    #[test]
    fn family_composition_matches_definition(
        a in arb_frame(), b in arb_frame(), c in arb_frame(),
        g in prop::collection::vec(any::<u64>(), 8), h in prop::collection::vec(any::<u64>(), 8),
    ) {
        let (fa, fb, fc) = (frame_arc(a), frame_arc(b), frame_arc(c));
        let (g, h) = (family(&fa, &fb, &g), family(&fb, &fc, &h));
        let (src, mid) = (fa.as_frame().unwrap(), fb.as_frame().unwrap());
        let mut want = BTreeSet::new();
        for i in src.tokens().iter() {
            let gi = g.component(Some(i));
            for x in src.con(i) {
                let image = gi.targets(x);
                for e in image.iter() {
                    for v in mid.con(e) {
                        if v.is_subset(&image) {
                            for z in h.component(Some(e)).targets(v).iter() {
                                want.insert((Some(i.clone()), x.clone(), z.clone()));
                            }
                        }
                    }
                }
            }
        }
        prop_assert_eq!(triples(&compose(&g, &h).unwrap()), want);
    }

    #[test]
    fn documents_roundtrip(f in arb_frame(), s in arb_system()) {
        let text = serialize(&Document::Frame(f.clone()));
        prop_assert_eq!(parse_document(&text).unwrap().into_frame().unwrap(), f);
        let text = serialize(&Document::System(s.clone()));
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(back.into_system().unwrap(), s);
    }

    #[test]
    fn big_and_retracts_flatten(mask in 1u64..8) {
        let f = corpus::fork();
        let x = pick(f.tokens(), mask);
        prop_assert_eq!(flatten(&big_and(&x, f.truth().unwrap())), x);
    }

    #[test]
    fn formulas_print_and_parse_back(phi in arb_formula()) {
        let f = corpus::fork();
        prop_assert_eq!(parse_formula(&phi.to_string(), &f).unwrap(), phi);
    }

    #[test]
    fn token_sets_are_canonical(v in prop::collection::vec(0usize..3, 0..8)) {
        let toks: Vec<Token> = v.iter().map(|&i| Token::atom(NAMES[i])).collect();
        let s: TokenSet = toks.iter().cloned().collect();
        let mut want = toks.clone();
        want.sort();
        want.dedup();
        prop_assert_eq!(s.as_slice(), &want[..]);
        let rev: TokenSet = toks.into_iter().rev().collect();
        prop_assert_eq!(rev, s);
    }

    #[test]
    fn frames_passing_the_axioms_satisfy_the_metatheorems(
        pick_frame in any::<prop::sample::Index>(), stage in 0usize..8, set in any::<u64>(), target in 0usize..8, toggle_con in any::<bool>(),
    ) {
        let frames = corpus::frames();
        let (_, f) = &frames[pick_frame.index(frames.len())];
        if let Some(m) = mutate(f, stage, set, target, toggle_con) {
            if check_frame(&m, false, false).unwrap().passed() {
                prop_assert!(verify_metatheorems(&m).unwrap().passed(), "{}", serialize(&Document::Frame(m.clone())));
            }
        }
    }

    #[test]
    fn random_valid_frames_satisfy_the_metatheorems(f in arb_frame()) {
        if check_frame(&f, false, false).unwrap().passed() {
            prop_assert!(verify_metatheorems(&f).unwrap().passed());
        }
    }

    #[test]
    fn completion_is_the_rounded_ideals(n in 1usize..=4, rel in any::<u16>()) {
        let carrier: TokenSet = ["w", "x", "y", "z"][..n].iter().map(|s| Token::atom(s)).collect();
        let toks: Vec<Token> = carrier.iter().cloned().collect();
        let mut prec = BTreeSet::new();
        for (k, (i, j)) in (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).enumerate() {
            if rel >> k & 1 == 1 {
                prec.insert((toks[i].clone(), toks[j].clone()));
            }
        }
        let b = AbstractBasis::new(carrier.clone(), prec.clone()).unwrap();
        let valid = check_abstract_basis(&b).passed();
        let done = complete(&b);
        prop_assert_eq!(valid, done.is_ok());
        let Ok(p) = done else { return Ok(()) };
        let below = |v: &Token| -> BTreeSet<Token> { toks.iter().filter(|u| prec.contains(&((*u).clone(), v.clone()))).cloned().collect() };
        let mut ideals = Vec::new();
        for i in subsets_of(&carrier) {
            let lower = i.iter().all(|x| below(x).iter().all(|y| i.contains(y)));
            let rounded = subsets_of(&i).all(|m| i.iter().any(|v| m.iter().all(|u| below(v).contains(u))));
            if !i.is_empty() && lower && rounded {
                ideals.push(i);
            }
        }
        ideals.sort();
        prop_assert_eq!(&p.elements, &ideals);
        for (a, x) in p.elements.iter().enumerate() {
            for (c, y) in p.elements.iter().enumerate() {
                prop_assert_eq!(p.le(a, c), x.is_subset(y));
                // every directed subset of a finite poset has a greatest element
                prop_assert_eq!(p.ll(a, c), p.le(a, c));
            }
        }
        prop_assert!(check_poset(&p, &b).passed());
    }
}

/// Toggles one consistent set or one entailment triple of a corpus frame.
fn mutate(f: &Frame, stage: usize, set: u64, target: usize, toggle_con: bool) -> Option<Frame> {
    let toks: Vec<Token> = f.tokens().iter().cloned().collect();
    let i = &toks[stage % toks.len()];
    let x = pick(f.tokens(), set);
    let b = &toks[target % toks.len()];
    let mut con = f.con_map().clone();
    let mut entails = f.entails_map().clone();
    let fam = con.entry(i.clone()).or_default();
    let rel = entails.entry(i.clone()).or_default();
    if toggle_con {
        if !fam.remove(&x) {
            fam.insert(x);
        }
    } else if !rel.remove(&x, b) {
        rel.insert(x, b.clone());
    }
    Frame::new(f.tokens().clone(), con, entails, f.truth().cloned()).ok()
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(vec!["T", "a", "b"]).prop_map(|s| Formula::atom(Token::atom(s)));
    leaf.prop_recursive(3, 16, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| Formula::and(l, r)))
}

#[test]
fn every_single_toggle_of_small_frames_respects_the_metatheorems() {
    let mut valid = 0;
    for (name, f) in corpus::frames().into_iter().filter(|(_, f)| f.tokens().len() <= 3) {
        let n = f.tokens().len();
        for stage in 0..n {
            for set in 0..1u64 << n {
                for (target, toggle_con) in (0..n).map(|t| (t, false)).chain([(0, true)]) {
                    let Some(m) = mutate(&f, stage, set, target, toggle_con) else { continue };
                    if check_frame(&m, false, false).unwrap().passed() {
                        valid += 1;
                        assert!(verify_metatheorems(&m).unwrap().passed(), "{name}: {}", serialize(&Document::Frame(m.clone())));
                    }
                }
            }
        }
    }
    assert!(valid >= 5, "only {valid} valid mutants");
}
