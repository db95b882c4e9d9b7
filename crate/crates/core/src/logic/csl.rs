use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::axioms::check_frame;
use crate::error::{Error, Result};
use crate::logic::formula::{flatten, Formula};
use crate::model::{Frame, Structure};
use crate::token::{Token, TokenSet};

/// A continuous stratified conjunctive logic, presented by a strong frame with truth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csl {
    frame: Arc<Structure>,
}

impl Csl {
    /// Fails with `E_TYPE` unless the frame is strong, has a truth element and passes every check.
    pub fn new(frame: Frame) -> Result<Csl> {
        Csl::from_structure(Arc::new(Structure::Frame(frame)))
    }

    pub fn from_structure(s: Arc<Structure>) -> Result<Csl> {
        let report = match check_frame(s.as_frame()?, true, true) {
            Err(Error::NoTruth(_)) => return Err(Error::Type("a logic needs a truth atom".into())),
            r => r?,
        };
        if let Some(v) = report.violations().first() {
            return Err(Error::Type(format!("not a continuous stratified conjunctive logic: {} {}", v.axiom, v.witness_string())));
        }
        Ok(Csl { frame: s })
    }

    pub fn frame(&self) -> &Frame {
        self.frame.as_frame().expect("checked on construction")
    }

    pub fn structure(&self) -> &Arc<Structure> {
        &self.frame
    }

    pub fn top(&self) -> &Token {
        self.frame().truth().expect("checked on construction")
    }

    /// `P_p = {q : {p} ⊨_p q}`.
    pub fn stage(&self, p: &Token) -> Result<TokenSet> {
        if !self.frame().tokens().contains(p) {
            return Err(Error::UnknownToken(format!("stage {p}")));
        }
        Ok(self.frame().entailed(p, &TokenSet::singleton(p.clone())))
    }
}

/// The antecedent of a sequent: the stage itself or a finite set of formulas.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gamma {
    Own,
    Formulas(BTreeSet<Formula>),
}

impl Gamma {
    pub fn formulas(it: impl IntoIterator<Item = Formula>) -> Gamma {
        Gamma::Formulas(it.into_iter().collect())
    }

    /// The atom set a frame sees: `{p}` for the stage itself and `{⊤}` for the empty antecedent.
    pub fn flattened(&self, p: &Token, top: &Token) -> TokenSet {
        match self {
            Gamma::Own => TokenSet::singleton(p.clone()),
            Gamma::Formulas(fs) if fs.is_empty() => TokenSet::singleton(top.clone()),
            Gamma::Formulas(fs) => fs.iter().flat_map(|f| flatten(f).iter().cloned().collect::<Vec<_>>()).collect(),
        }
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Own => f.write_str("self"),
            Gamma::Formulas(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sequent {
    pub stage: Token,
    pub antecedent: Gamma,
    pub consequent: Formula,
}

impl Sequent {
    pub fn new(stage: Token, antecedent: Gamma, consequent: Formula) -> Sequent {
        Sequent { stage, antecedent, consequent }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊢^{} {}", self.antecedent, self.stage, self.consequent)
    }
}

pub const RULE_ENTAILMENT: &str = "entailment";
pub const RULE_AND_RIGHT: &str = "(R∧)";
pub const RULE_BAR: &str = "bar-rule";

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub rule: &'static str,
    pub premises: Vec<usize>,
    pub conclusion: Sequent,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Trace {
    pub steps: Vec<Step>,
    /// Set when the empty antecedent read as `∅` would decide differently from `{⊤}`.
    pub note: Option<String>,
}

impl Trace {
    /// Re-checks every step against the logic and that the last step concludes `goal`.
    pub fn replay(&self, l: &Csl, goal: &Sequent) -> std::result::Result<(), String> {
        let f = l.frame();
        let top = l.top();
        for (k, s) in self.steps.iter().enumerate() {
            if s.premises.iter().any(|&p| p >= k) {
                return Err(format!("step {k} cites a later step"));
            }
            let c = &s.conclusion;
            match s.rule {
                RULE_ENTAILMENT => {
                    let Formula::Atom(q) = &c.consequent else { return Err(format!("step {k}: entailment needs an atomic consequent")) };
                    let x = c.antecedent.flattened(&c.stage, top);
                    if !atom_level(&c.antecedent) {
                        return Err(format!("step {k}: entailment cites a compound antecedent"));
                    }
                    if !f.con(&c.stage).contains(&x) || !f.entails(&c.stage, &x, q) {
                        return Err(format!("step {k}: {x} does not entail {q} at {}", c.stage));
                    }
                }
                RULE_AND_RIGHT => {
                    let [a, b] = s.premises[..] else { return Err(format!("step {k}: (R∧) needs two premises")) };
                    let (pa, pb) = (&self.steps[a].conclusion, &self.steps[b].conclusion);
                    let want = Formula::and(pa.consequent.clone(), pb.consequent.clone());
                    if pa.stage != c.stage || pb.stage != c.stage || pa.antecedent != c.antecedent || pb.antecedent != c.antecedent || c.consequent != want {
                        return Err(format!("step {k}: (R∧) does not match its premises"));
                    }
                }
                RULE_BAR => {
                    let [a] = s.premises[..] else { return Err(format!("step {k}: bar rule needs one premise")) };
                    let pa = &self.steps[a].conclusion;
                    if pa.stage != c.stage || pa.consequent != c.consequent || pa.antecedent.flattened(&c.stage, top) != c.antecedent.flattened(&c.stage, top) {
                        return Err(format!("step {k}: bar rule changes more than the antecedent's shape"));
                    }
                }
                other => return Err(format!("step {k}: unknown rule {other}")),
            }
        }
        match self.steps.last() {
            Some(s) if &s.conclusion == goal => Ok(()),
            _ => Err("trace does not end in the goal".into()),
        }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            write!(f, "{k}. {}  [{}", s.conclusion, s.rule)?;
            if !s.premises.is_empty() {
                let ps: Vec<String> = s.premises.iter().map(ToString::to_string).collect();
                write!(f, " from {}", ps.join(", "))?;
            }
            writeln!(f, "]")?;
        }
        if let Some(n) = &self.note {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

fn atom_level(g: &Gamma) -> bool {
    match g {
        Gamma::Own => true,
        Gamma::Formulas(fs) => fs.iter().all(|f| matches!(f, Formula::Atom(_))),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub holds: bool,
    /// Present when requested and the sequent holds.
    pub trace: Option<Trace>,
}

/// Decides `Γ ⊢^p φ` as `Γ̄ ∈ Con_p` and `Γ̄ ⊨_p φ̄`.
pub fn derives(l: &Csl, s: &Sequent, want_trace: bool) -> Result<Derivation> {
    let f = l.frame();
    let top = l.top();
    let p = &s.stage;
    let stage = l.stage(p)?;
    if let Gamma::Formulas(fs) = &s.antecedent {
        for phi in fs {
            if let Some(x) = flatten(phi).iter().find(|x| !stage.contains(x)) {
                return Err(Error::Stage(format!("{x} in antecedent {phi} is not in the stage set of {p}")));
            }
        }
    }
    let gbar = s.antecedent.flattened(p, top);
    let phibar = flatten(&s.consequent);
    let holds = f.con(p).contains(&gbar) && phibar.is_subset(&f.entailed(p, &gbar));
    let trace = (want_trace && holds).then(|| build_trace(l, s, &gbar));
    Ok(Derivation { holds, trace })
}

fn build_trace(l: &Csl, s: &Sequent, gbar: &TokenSet) -> Trace {
    let p = &s.stage;
    let base = match &s.antecedent {
        Gamma::Own => Gamma::Own,
        Gamma::Formulas(_) if gbar == &TokenSet::singleton(p.clone()) => Gamma::Own,
        Gamma::Formulas(_) => Gamma::formulas(gbar.iter().cloned().map(Formula::Atom)),
    };
    let mut t = Trace::default();
    fn go(t: &mut Trace, p: &Token, base: &Gamma, phi: &Formula) -> usize {
        let (rule, premises) = match phi {
            Formula::Atom(_) => (RULE_ENTAILMENT, vec![]),
            Formula::And(a, b) => (RULE_AND_RIGHT, vec![go(t, p, base, a), go(t, p, base, b)]),
        };
        t.steps.push(Step { rule, premises, conclusion: Sequent::new(p.clone(), base.clone(), phi.clone()) });
        t.steps.len() - 1
    }
    let last = go(&mut t, p, &base, &s.consequent);
    if base != s.antecedent {
        t.steps.push(Step { rule: RULE_BAR, premises: vec![last], conclusion: s.clone() });
    }
    if s.antecedent == Gamma::Formulas(BTreeSet::new()) {
        let f = l.frame();
        let phibar = flatten(&s.consequent);
        let literal = f.con(p).contains(&TokenSet::empty()) && phibar.is_subset(&f.entailed(p, &TokenSet::empty()));
        if !literal {
            t.note = Some(format!("the empty antecedent read as ∅ would not entail {} at {p}", s.consequent));
        }
    }
    t
}
