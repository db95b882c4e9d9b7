use crate::bits::Bits;
use crate::error::Result;
use crate::model::InfoSystem;
use crate::report::{Collector, Limits, Report, WitnessItem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemLevel {
    /// Conditions (1) and (3) to (6).
    Scis,
    /// Additionally condition (2).
    Cis,
}

pub fn check_system(s: &InfoSystem, level: SystemLevel) -> Result<Report> {
    check_system_with(s, level, &Limits::default())
}

pub fn check_system_with(s: &InfoSystem, level: SystemLevel, limits: &Limits) -> Result<Report> {
    let ix = s.idx();
    let mut c = Collector::new(limits);
    let set = |b: &Bits| -> WitnessItem { ix.uni.set(b).into() };
    let tok = |i: usize| -> WitnessItem { ix.uni.token(i).clone().into() };

    for a in 0..ix.uni.len() {
        if !ix.pos.contains_key(&ix.uni.singleton(a)) {
            c.push("(1)", vec![tok(a)], format!("{{{}}} is not consistent", ix.uni.token(a)));
        }
    }
    for (k, x) in ix.con.iter().enumerate() {
        let e = &ix.ent[k];
        if level == SystemLevel::Cis {
            for a in e.iter() {
                if !x.contains(a) && !ix.pos.contains_key(&x.with(a)) {
                    c.push("(2)", vec![set(x), tok(a)], format!("{} entails {} but {} is not consistent", ix.uni.set(x), ix.uni.token(a), ix.uni.set(&x.with(a))));
                    break;
                }
            }
        }
        for (ky, y) in ix.con.iter().enumerate() {
            if ky != k && x.is_subset(y) {
                if let Some(a) = e.first_missing(&ix.ent[ky]) {
                    c.push("(3)", vec![set(x), set(y), tok(a)], format!("{} entails {} but its superset {} does not", ix.uni.set(x), ix.uni.token(a), ix.uni.set(y)));
                }
            }
            if y.is_subset(e) {
                if let Some(a) = ix.ent[ky].first_missing(e) {
                    c.push("(4)", vec![set(x), set(y), tok(a)], format!("{} entails {} and {1} entails {} but {0} does not", ix.uni.set(x), ix.uni.set(y), ix.uni.token(a)));
                }
            }
        }
        if e.is_empty() {
            continue;
        }
        let mut budget = limits.budget("(5)");
        for a in e.iter() {
            let mut found = false;
            for (kz, z) in ix.con.iter().enumerate() {
                budget.tick()?;
                if z.is_subset(e) && ix.ent[kz].contains(a) {
                    found = true;
                    break;
                }
            }
            if !found {
                c.push("(5)", vec![set(x), tok(a)], format!("no consistent Z with {} entailing Z and Z entailing {}", ix.uni.set(x), ix.uni.token(a)));
            }
        }
        // F ranges over nonempty sets; any Z with F ⊆ Z and X ⊢ Z equals the maximal F.
        if !ix.pos.contains_key(e) {
            c.push("(6)", vec![set(x), set(e)], format!("{} entails {} but no consistent superset of it", ix.uni.set(x), ix.uni.set(e)));
        }
    }
    Ok(c.finish())
}
