use crate::error::Result;
use crate::model::Frame;
use crate::report::{Collector, Limits, Report, WitnessItem};

/// Consequences every valid frame satisfies: m1 entailed tokens are related,
/// m2 strong cut, m3a local interpolation, m3b a witness for the entailed set.
pub fn verify_metatheorems(f: &Frame) -> Result<Report> {
    verify_metatheorems_with(f, &Limits::default())
}

pub fn verify_metatheorems_with(f: &Frame, limits: &Limits) -> Result<Report> {
    let ix = f.idx();
    let mut c = Collector::new(limits);
    let tok = |i: usize| -> WitnessItem { ix.uni.token(i).clone().into() };
    let set = |b: &crate::bits::Bits| -> WitnessItem { ix.uni.set(b).into() };
    for i in 0..ix.n() {
        for (k, x) in ix.con[i].iter().enumerate() {
            let e = &ix.ent[i][k];
            for j in e.iter() {
                if ix.con_index(i, &ix.uni.singleton(j)).is_none() {
                    c.push("m1", vec![tok(i), set(x), tok(j)], format!("{} entails {} at {} but {{{1}}} is not in Con_{2}", ix.uni.set(x), ix.uni.token(j), ix.uni.token(i)));
                }
                for (ky, y) in ix.con[j].iter().enumerate() {
                    if y.is_subset(e) {
                        if let Some(a) = ix.ent[j][ky].first_missing(e) {
                            c.push(
                                "m2",
                                vec![tok(i), set(x), tok(j), set(y), tok(a)],
                                format!("{} entails {{{}}} ∪ {} at {} and {2} entails {} at {1}, but not {0} at {3}", ix.uni.set(x), ix.uni.token(j), ix.uni.set(y), ix.uni.token(i), ix.uni.token(a)),
                            );
                        }
                    }
                }
            }
            if e.is_empty() {
                continue;
            }
            let mut budget = limits.budget("m3a");
            let mut found = false;
            for (kz, z) in ix.con[i].iter().enumerate() {
                budget.tick()?;
                if z.is_subset(e) && e.is_subset(&ix.ent[i][kz]) {
                    found = true;
                    break;
                }
            }
            if !found {
                c.push("m3a", vec![tok(i), set(x), set(e)], format!("no Z in Con_{} between {} and {}", ix.uni.token(i), ix.uni.set(x), ix.uni.set(e)));
            }
            if !e.iter().any(|w| ix.con_index(w, e).is_some()) {
                c.push("m3b", vec![tok(i), set(x), set(e)], format!("no e entailed by {} at {} with {} in Con_e", ix.uni.set(x), ix.uni.token(i), ix.uni.set(e)));
            }
        }
    }
    Ok(c.finish())
}
