use crate::error::Result;
use crate::logic::csl::{derives, Csl, Gamma, Sequent};
use crate::logic::formula::{big_and, Formula};
use crate::report::{Collector, Limits, Report, WitnessItem};
use crate::token::{Token, TokenSet};

pub const BAR: &str = "b1";
pub const INVERSE_CUT: &str = "b2";
pub const INT_SINT: &str = "b3";

pub fn verify_logic_metatheorems(l: &Csl) -> Result<Report> {
    verify_logic_metatheorems_with(l, &Limits::default())
}

/// Bar rules, inverse cut and `(INT) ⟺ (SINT)`, over every consistent antecedent of every stage.
pub fn verify_logic_metatheorems_with(l: &Csl, limits: &Limits) -> Result<Report> {
    let f = l.frame();
    let top = l.top();
    let mut c = Collector::new(limits);
    let mut budget = limits.budget("logic metatheorems");
    let w = |p: &Token, x: &TokenSet, r: &TokenSet| -> Vec<WitnessItem> { vec![p.into(), x.into(), r.into()] };
    for p in f.tokens() {
        let stage = l.stage(p)?;
        for x in f.con(p).iter().filter(|x| !x.is_empty()) {
            let r = f.entailed(p, x);
            let own = x.len() == 1 && x.contains(p);

            if x.is_subset(&stage) || own {
                let mut consequents: Vec<Formula> = stage.iter().cloned().map(Formula::Atom).collect();
                if !r.is_empty() {
                    consequents.push(big_and(&r, top));
                }
                for phi in consequents {
                    budget.tick()?;
                    let mut forms = Vec::new();
                    if own {
                        forms.push(Gamma::Own);
                    }
                    if x.is_subset(&stage) {
                        forms.push(Gamma::formulas(x.iter().cloned().map(Formula::Atom)));
                        forms.push(Gamma::formulas([big_and(x, top)]));
                        if x.len() >= 2 {
                            let (lo, hi) = x.as_slice().split_at(x.len() / 2);
                            let part = |s: &[Token]| big_and(&s.iter().cloned().collect(), top);
                            forms.push(Gamma::formulas([part(lo), part(hi)]));
                        }
                    }
                    let verdicts: Vec<bool> = forms
                        .iter()
                        .map(|g| derives(l, &Sequent::new(p.clone(), g.clone(), phi.clone()), false).map(|d| d.holds))
                        .collect::<Result<_>>()?;
                    if verdicts.windows(2).any(|v| v[0] != v[1]) {
                        c.push(BAR, w(p, x, &r), format!("antecedent shapes of {x} disagree on {phi} at {p}"));
                    }
                }
            }

            if r.is_empty() {
                continue;
            }
            let inverse = f.con(p).iter().any(|z| !z.is_empty() && z.is_subset(&r) && r.is_subset(&f.entailed(p, z)));
            if !inverse {
                c.push(INVERSE_CUT, w(p, x, &r), format!("no formula between {x} and {r} at {p}"));
            }
            let sint = r.iter().any(|s| f.con(s).contains(&TokenSet::singleton(s.clone())) && r.is_subset(&f.entailed(s, &TokenSet::singleton(s.clone()))));
            let int = r.iter().any(|s| f.con(s).iter().any(|z| !z.is_empty() && z.is_subset(&r) && r.is_subset(&f.entailed(s, z))));
            if !(int && sint) {
                let which = match (int, sint) {
                    (false, false) => "neither (INT) nor (SINT) holds",
                    (true, false) => "(INT) holds but (SINT) fails",
                    _ => "(SINT) holds but (INT) fails",
                };
                c.push(INT_SINT, w(p, x, &r), format!("{which} for {x} deriving {r} at {p}"));
            }
        }
    }
    Ok(c.finish())
}
