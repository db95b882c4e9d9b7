use crate::bits::{subsets, Bits};
use crate::error::{Error, Result};
use crate::model::{Frame, FrameIdx};
use crate::report::{Collector, Limits, Report, WitnessItem};
use crate::token::Token;

pub const SELF_CONSISTENCY: &str = "self-consistency";
pub const PRESERVATION: &str = "consistency-preservation";
pub const SOUNDNESS: &str = "soundness";
pub const WEAKENING: &str = "weakening";
pub const CUT: &str = "cut";
pub const CON_TRANSFER: &str = "consistency-transfer";
pub const ENT_TRANSFER: &str = "entailment-transfer";
pub const INTERPOLATION: &str = "interpolation";
pub const STRONG: &str = "(S)";
pub const TRUTH: &str = "(T)";

/// All eight frame conditions plus, on request, (S) and (T).
pub fn check_frame(f: &Frame, require_strong: bool, require_truth: bool) -> Result<Report> {
    check_frame_with(f, require_strong, require_truth, &Limits::default())
}

pub fn check_frame_with(f: &Frame, require_strong: bool, require_truth: bool, limits: &Limits) -> Result<Report> {
    if require_truth && f.truth().is_none() {
        return Err(Error::NoTruth("truth element required but none declared".into()));
    }
    let ix = f.idx();
    let mut c = Collector::new(limits);
    let closed: Vec<bool> = (0..ix.n()).map(|i| ix.closed(i)).collect();
    for i in 0..ix.n() {
        self_consistency(ix, i, &mut c);
        preservation(ix, i, &mut c);
        soundness(ix, i, closed[i], limits, &mut c)?;
        let monotone = weakening(ix, i, closed[i], &mut c);
        cut(ix, i, monotone, &mut c);
        if require_strong {
            strong(ix, i, &mut c);
        }
    }
    transfer(ix, &mut c);
    interpolation(ix, limits, &mut c)?;
    if require_truth {
        truth(ix, &mut c);
    }
    Ok(c.finish())
}

fn tok(ix: &FrameIdx, i: usize) -> WitnessItem {
    ix.uni.token(i).clone().into()
}

fn set(ix: &FrameIdx, b: &Bits) -> WitnessItem {
    ix.uni.set(b).into()
}

fn self_consistency(ix: &FrameIdx, i: usize, c: &mut Collector) {
    if ix.con_index(i, &ix.uni.singleton(i)).is_none() {
        c.push(SELF_CONSISTENCY, vec![tok(ix, i)], format!("{{{0}}} is not in Con_{0}", ix.uni.token(i)));
    }
}

fn preservation(ix: &FrameIdx, i: usize, c: &mut Collector) {
    for x in &ix.con[i] {
        for t in x.iter() {
            if !c.wants(PRESERVATION) {
                return;
            }
            let y = x.without(t);
            if ix.con_index(i, &y).is_none() {
                c.push(
                    PRESERVATION,
                    vec![tok(ix, i), set(ix, x), set(ix, &y)],
                    format!("{} is in Con_{2} but its subset {} is not", ix.uni.set(x), ix.uni.set(&y), ix.uni.token(i)),
                );
            }
        }
    }
}

fn soundness(ix: &FrameIdx, i: usize, closed: bool, limits: &Limits, c: &mut Collector) -> Result<()> {
    for (k, x) in ix.con[i].iter().enumerate() {
        if !c.wants(SOUNDNESS) {
            return Ok(());
        }
        let e = &ix.ent[i][k];
        // With Con_i closed under subsets the maximal entailed set decides every subset.
        let bad = if closed {
            ix.con_index(i, e).is_none().then(|| e.clone())
        } else {
            limits.powerset_fits(e.count(), 0, "soundness subsets")?;
            subsets(ix.n(), e).find(|y| ix.con_index(i, y).is_none())
        };
        if let Some(y) = bad {
            c.push(
                SOUNDNESS,
                vec![tok(ix, i), set(ix, x), set(ix, &y)],
                format!("{} entails {} at {} but {1} is not in Con_{2}", ix.uni.set(x), ix.uni.set(&y), ix.uni.token(i)),
            );
        }
    }
    Ok(())
}

/// Returns whether entailment at `i` is monotone on all of `Con_i`.
fn weakening(ix: &FrameIdx, i: usize, closed: bool, c: &mut Collector) -> bool {
    let mut ok = true;
    let report = |x: &Bits, y: &Bits, a: usize, c: &mut Collector| {
        c.push(
            WEAKENING,
            vec![tok(ix, i), set(ix, x), set(ix, y), tok(ix, a)],
            format!("{} entails {} at {} but its superset {} does not", ix.uni.set(x), ix.uni.token(a), ix.uni.token(i), ix.uni.set(y)),
        );
    };
    for (ky, y) in ix.con[i].iter().enumerate() {
        if closed {
            // Chains of one-element extensions stay inside a closed family.
            for t in y.iter() {
                let x = y.without(t);
                let kx = ix.con_index(i, &x).expect("closed family");
                if let Some(a) = ix.ent[i][kx].first_missing(&ix.ent[i][ky]) {
                    ok = false;
                    report(&x, y, a, c);
                    if !c.wants(WEAKENING) {
                        return false;
                    }
                }
            }
        } else {
            for (kx, x) in ix.con[i].iter().enumerate() {
                if kx != ky && x.is_subset(y) {
                    if let Some(a) = ix.ent[i][kx].first_missing(&ix.ent[i][ky]) {
                        ok = false;
                        report(x, y, a, c);
                        if !c.wants(WEAKENING) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    ok
}

fn cut(ix: &FrameIdx, i: usize, monotone: bool, c: &mut Collector) {
    for (kx, x) in ix.con[i].iter().enumerate() {
        if !c.wants(CUT) {
            return;
        }
        let e = &ix.ent[i][kx];
        let fast = if monotone { ix.con_index(i, e) } else { None };
        // Monotone entailment and a consistent maximal set reduce Y to that set.
        let candidates: Vec<usize> = match fast {
            Some(k) => vec![k],
            None => (0..ix.con[i].len()).filter(|&k| ix.con[i][k].is_subset(e)).collect(),
        };
        for ky in candidates {
            if let Some(a) = ix.ent[i][ky].first_missing(e) {
                let y = &ix.con[i][ky];
                c.push(
                    CUT,
                    vec![tok(ix, i), set(ix, x), set(ix, y), tok(ix, a)],
                    format!(
                        "{} entails {} and {1} entails {} at {} but {0} does not entail {2}",
                        ix.uni.set(x),
                        ix.uni.set(y),
                        ix.uni.token(a),
                        ix.uni.token(i)
                    ),
                );
                break;
            }
        }
    }
}

fn strong(ix: &FrameIdx, i: usize, c: &mut Collector) {
    let single = ix.uni.singleton(i);
    let own = ix.ent_of(i, &single).cloned().unwrap_or_else(|| ix.uni.empty());
    for x in &ix.con[i] {
        if *x != single && !x.is_subset(&own) {
            c.push(
                STRONG,
                vec![tok(ix, i), set(ix, x)],
                format!("{} is in Con_{1} but {{{1}}} does not entail it", ix.uni.set(x), ix.uni.token(i)),
            );
            return;
        }
    }
}

fn transfer(ix: &FrameIdx, c: &mut Collector) {
    for j in 0..ix.n() {
        for i in 0..ix.n() {
            if i == j || ix.con_index(j, &ix.uni.singleton(i)).is_none() {
                continue;
            }
            for (k, x) in ix.con[i].iter().enumerate() {
                match ix.con_index(j, x) {
                    None => c.push(
                        CON_TRANSFER,
                        vec![tok(ix, i), tok(ix, j), set(ix, x)],
                        format!("{} R {} but {} is in Con_{0} and not in Con_{1}", ix.uni.token(i), ix.uni.token(j), ix.uni.set(x)),
                    ),
                    Some(kj) => {
                        if let Some(a) = ix.ent[i][k].first_missing(&ix.ent[j][kj]) {
                            c.push(
                                ENT_TRANSFER,
                                vec![tok(ix, i), tok(ix, j), set(ix, x), tok(ix, a)],
                                format!(
                                    "{} R {} and {} entails {} at {0} but not at {1}",
                                    ix.uni.token(i),
                                    ix.uni.token(j),
                                    ix.uni.set(x),
                                    ix.uni.token(a)
                                ),
                            );
                        }
                    }
                }
                // An inconsistent X has no entailments at j either.
                if ix.con_index(j, x).is_none() && !ix.ent[i][k].is_empty() {
                    let a = ix.ent[i][k].iter().next().expect("nonempty");
                    c.push(
                        ENT_TRANSFER,
                        vec![tok(ix, i), tok(ix, j), set(ix, x), tok(ix, a)],
                        format!("{} R {} and {} entails {} at {0} but {2} is not in Con_{1}", ix.uni.token(i), ix.uni.token(j), ix.uni.set(x), ix.uni.token(a)),
                    );
                }
            }
        }
    }
}

/// Searches `e` and `Z` in `Con_e` with `{e} ∪ Z ⊆ avail` and `goal ⊆ ent_e(Z)`.
pub(crate) fn find_interpolant(ix: &FrameIdx, avail: &Bits, goal: &Bits, limits: &Limits, what: &'static str) -> Result<Option<(usize, usize)>> {
    let mut budget = limits.budget(what);
    for e in avail.iter() {
        for (kz, z) in ix.con[e].iter().enumerate() {
            budget.tick()?;
            if z.is_subset(avail) && goal.is_subset(&ix.ent[e][kz]) {
                return Ok(Some((e, kz)));
            }
        }
    }
    Ok(None)
}

fn interpolation(ix: &FrameIdx, limits: &Limits, c: &mut Collector) -> Result<()> {
    for i in 0..ix.n() {
        for (k, x) in ix.con[i].iter().enumerate() {
            if !c.wants(INTERPOLATION) {
                return Ok(());
            }
            let y = &ix.ent[i][k];
            if y.is_empty() {
                continue;
            }
            if find_interpolant(ix, y, y, limits, INTERPOLATION)?.is_none() {
                c.push(
                    INTERPOLATION,
                    vec![tok(ix, i), set(ix, x), set(ix, y)],
                    format!("no e and Z in Con_e with {} entailing {{e}} ∪ Z at {} and Z entailing {} at e", ix.uni.set(x), ix.uni.token(i), ix.uni.set(y)),
                );
            }
        }
    }
    Ok(())
}

fn truth(ix: &FrameIdx, c: &mut Collector) {
    let t = ix.truth.expect("checked by caller");
    for i in 0..ix.n() {
        let ok = ix.ent_of(i, &ix.uni.empty()).is_some_and(|e| e.contains(t));
        if !ok {
            c.push(
                TRUTH,
                vec![tok(ix, i), set(ix, &ix.uni.empty()), tok(ix, t)],
                format!("the empty set does not entail the truth element {} at {}", ix.uni.token(t), ix.uni.token(i)),
            );
            return;
        }
    }
}

/// `iRj ⟺ {i} ∈ Con_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedR {
    pub pairs: std::collections::BTreeSet<(Token, Token)>,
}

pub fn derived_r(f: &Frame) -> DerivedR {
    let ix = f.idx();
    let mut pairs = std::collections::BTreeSet::new();
    for i in 0..ix.n() {
        for j in 0..ix.n() {
            if ix.con_index(j, &ix.uni.singleton(i)).is_some() {
                pairs.insert((ix.uni.token(i).clone(), ix.uni.token(j).clone()));
            }
        }
    }
    DerivedR { pairs }
}
