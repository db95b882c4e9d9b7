use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::{Morphism, MorphismKind};
use crate::report::{Collector, Limits, Report, WitnessItem};

fn expect_kind(h: &Morphism, kinds: &[MorphismKind]) -> Result<()> {
    if kinds.contains(&h.kind()) {
        Ok(())
    } else {
        Err(Error::Type(format!("unexpected {} morphism", h.kind().as_str())))
    }
}

/// Approximable mapping conditions, with (4) split into its left and right halves.
pub fn check_mapping(h: &Morphism) -> Result<Report> {
    check_mapping_with(h, &Limits::default())
}

pub fn check_mapping_with(h: &Morphism, limits: &Limits) -> Result<Report> {
    expect_kind(h, &[MorphismKind::Mapping])?;
    let (s, t) = (h.source().as_system()?.idx(), h.target().as_system()?.idx());
    let table = h.mapping_table()?;
    let mut c = Collector::new(limits);
    let sset = |b: &Bits| -> WitnessItem { s.uni.set(b).into() };
    let tset = |b: &Bits| -> WitnessItem { t.uni.set(b).into() };
    let ttok = |i: usize| -> WitnessItem { t.uni.token(i).clone().into() };

    for (k, x) in s.con.iter().enumerate() {
        let hx = &table[k];
        for (ky, y) in t.con.iter().enumerate() {
            if y.is_subset(hx) {
                if let Some(b) = t.ent[ky].first_missing(hx) {
                    c.push("(1)", vec![sset(x), tset(y), ttok(b)], format!("{} maps to {} which entails {} but {0} does not map to {2}", s.uni.set(x), t.uni.set(y), t.uni.token(b)));
                }
            }
        }
        for (kx, xx) in s.con.iter().enumerate() {
            if kx == k {
                continue;
            }
            if xx.is_subset(x) {
                if let Some(b) = table[kx].first_missing(hx) {
                    c.push("(2)", vec![sset(xx), sset(x), ttok(b)], format!("{} maps to {} but its superset {} does not", s.uni.set(xx), t.uni.token(b), s.uni.set(x)));
                }
            }
        }
        for (kx, xx) in s.con.iter().enumerate() {
            if xx.is_subset(&s.ent[k]) {
                if let Some(b) = table[kx].first_missing(hx) {
                    c.push("(3)", vec![sset(x), sset(xx), ttok(b)], format!("{} entails {} which maps to {} but {0} does not", s.uni.set(x), s.uni.set(xx), t.uni.token(b)));
                }
            }
        }
        if hx.is_empty() {
            continue;
        }
        if !t.pos.contains_key(hx) {
            c.push("(5)", vec![sset(x), tset(hx)], format!("{} maps to {} but to no consistent superset of it", s.uni.set(x), t.uni.set(hx)));
        }
        let mut budget = limits.budget("(4-left)");
        let mut left = false;
        for (kz, z) in s.con.iter().enumerate() {
            budget.tick()?;
            if z.is_subset(&s.ent[k]) && hx.is_subset(&table[kz]) {
                left = true;
                break;
            }
        }
        if !left {
            c.push("(4-left)", vec![sset(x), tset(hx)], format!("no consistent Z with {} entailing Z and Z mapping to {}", s.uni.set(x), t.uni.set(hx)));
        }
        let mut budget = limits.budget("(4-right)");
        let mut right = false;
        for (kz, z) in t.con.iter().enumerate() {
            budget.tick()?;
            if z.is_subset(hx) && hx.is_subset(&t.ent[kz]) {
                right = true;
                break;
            }
        }
        if !right {
            c.push("(4-right)", vec![sset(x), tset(hx)], format!("no consistent Z' with {} mapping to Z' and Z' entailing {}", s.uni.set(x), t.uni.set(hx)));
        }
    }
    Ok(c.finish())
}

pub const RIGHT_CUT: &str = "right-cut";
pub const WEAKENING: &str = "weakening";
pub const LEFT_CUT: &str = "left-cut";
pub const TRANSFER: &str = "transfer";
pub const INTERP_LEFT: &str = "interpolation-left";
pub const INTERP_RIGHT: &str = "interpolation-right";
pub const TRUTH_RESPECT: &str = "truth-respect";

/// Approximable family conditions, with interpolation split into its two halves.
/// Global consequence relations are checked through the same conditions.
pub fn check_family(h: &Morphism, require_truth_respect: bool) -> Result<Report> {
    check_family_with(h, require_truth_respect, &Limits::default())
}

pub fn check_family_with(h: &Morphism, require_truth_respect: bool, limits: &Limits) -> Result<Report> {
    expect_kind(h, &[MorphismKind::Family, MorphismKind::Global])?;
    let (sf, tf) = (h.source().as_frame()?, h.target().as_frame()?);
    let (s, t) = (sf.idx(), tf.idx());
    let table = h.family_table()?;
    let mut c = Collector::new(limits);
    let stok = |i: usize| -> WitnessItem { s.uni.token(i).clone().into() };
    let sset = |b: &Bits| -> WitnessItem { s.uni.set(b).into() };
    let ttok = |i: usize| -> WitnessItem { t.uni.token(i).clone().into() };
    let tset = |b: &Bits| -> WitnessItem { t.uni.set(b).into() };

    for i in 0..s.n() {
        let closed = s.closed(i);
        for (kx, x) in s.con[i].iter().enumerate() {
            let hx = &table[i][kx];
            'a: for k in hx.iter() {
                for (ky, y) in t.con[k].iter().enumerate() {
                    if y.is_subset(hx) {
                        if let Some(b) = t.ent[k][ky].first_missing(hx) {
                            c.push(
                                RIGHT_CUT,
                                vec![stok(i), sset(x), ttok(k), tset(y), ttok(b)],
                                format!("{} maps at {} to {} and {} but {3} entails {} at {2}", s.uni.set(x), s.uni.token(i), t.uni.token(k), t.uni.set(y), t.uni.token(b)),
                            );
                            if !c.wants(RIGHT_CUT) {
                                break 'a;
                            }
                        }
                    }
                }
            }
            if closed {
                for e in x.iter() {
                    let sub = x.without(e);
                    let ks = s.con_index(i, &sub).expect("closed family");
                    if let Some(b) = table[i][ks].first_missing(hx) {
                        c.push(WEAKENING, vec![stok(i), sset(&sub), sset(x), ttok(b)], format!("{} maps to {} at {} but its superset {} does not", s.uni.set(&sub), t.uni.token(b), s.uni.token(i), s.uni.set(x)));
                    }
                }
            } else {
                for (ks, sub) in s.con[i].iter().enumerate() {
                    if ks != kx && sub.is_subset(x) {
                        if let Some(b) = table[i][ks].first_missing(hx) {
                            c.push(WEAKENING, vec![stok(i), sset(sub), sset(x), ttok(b)], format!("{} maps to {} at {} but its superset {} does not", s.uni.set(sub), t.uni.token(b), s.uni.token(i), s.uni.set(x)));
                        }
                    }
                }
            }
            let ex = &s.ent[i][kx];
            for (kk, xx) in s.con[i].iter().enumerate() {
                if xx.is_subset(ex) {
                    if let Some(b) = table[i][kk].first_missing(hx) {
                        c.push(LEFT_CUT, vec![stok(i), sset(x), sset(xx), ttok(b)], format!("{} entails {} at {} which maps to {} but {0} does not", s.uni.set(x), s.uni.set(xx), s.uni.token(i), t.uni.token(b)));
                    }
                }
            }
            for j in 0..s.n() {
                if j == i || s.con_index(j, &s.uni.singleton(i)).is_none() {
                    continue;
                }
                let hj = s.con_index(j, x).map(|kj| &table[j][kj]);
                let missing = match hj {
                    Some(hj) => hx.first_missing(hj),
                    None => hx.iter().next(),
                };
                if let Some(b) = missing {
                    c.push(TRANSFER, vec![stok(i), stok(j), sset(x), ttok(b)], format!("{} R {} and {} maps to {} at {0} but not at {1}", s.uni.token(i), s.uni.token(j), s.uni.set(x), t.uni.token(b)));
                }
            }
            if hx.is_empty() {
                continue;
            }
            let mut budget = limits.budget(INTERP_LEFT);
            let mut left = false;
            'l: for cc in ex.iter() {
                for (ku, u) in s.con[cc].iter().enumerate() {
                    budget.tick()?;
                    if u.is_subset(ex) && hx.is_subset(&table[cc][ku]) {
                        left = true;
                        break 'l;
                    }
                }
            }
            if !left {
                c.push(INTERP_LEFT, vec![stok(i), sset(x), tset(hx)], format!("no c and U in Con_c with {} entailing {{c}} ∪ U at {} and U mapping to {} at c", s.uni.set(x), s.uni.token(i), t.uni.set(hx)));
            }
            let right = crate::axioms::frame::find_interpolant(t, hx, hx, limits, INTERP_RIGHT)?.is_some();
            if !right {
                c.push(INTERP_RIGHT, vec![stok(i), sset(x), tset(hx)], format!("no e and V in Con'_e with {} mapping to {{e}} ∪ V at {} and V entailing {} at e", s.uni.set(x), s.uni.token(i), t.uni.set(hx)));
            }
        }
    }
    if require_truth_respect {
        let (Some(st), Some(tt)) = (s.truth, t.truth) else {
            return Err(Error::NoTruth("truth respect needs truth elements on both sides".into()));
        };
        let empty = s.uni.empty();
        let ok = s.con_index(st, &empty).is_some_and(|k| table[st][k].contains(tt));
        if !ok {
            c.push(TRUTH_RESPECT, vec![sset(&empty), ttok(tt)], format!("the empty set does not map to {} at {}", t.uni.token(tt), s.uni.token(st)));
        }
    }
    Ok(c.finish())
}
