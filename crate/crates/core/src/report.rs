//! Verdicts with concrete witnesses, plus the search limits shared by all checkers.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::token::{Token, TokenSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessItem {
    Token(Token),
    Set(TokenSet),
}

impl From<Token> for WitnessItem {
    fn from(t: Token) -> Self {
        WitnessItem::Token(t)
    }
}

impl From<&Token> for WitnessItem {
    fn from(t: &Token) -> Self {
        WitnessItem::Token(t.clone())
    }
}

impl From<TokenSet> for WitnessItem {
    fn from(s: TokenSet) -> Self {
        WitnessItem::Set(s)
    }
}

impl From<&TokenSet> for WitnessItem {
    fn from(s: &TokenSet) -> Self {
        WitnessItem::Set(s.clone())
    }
}

impl fmt::Display for WitnessItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessItem::Token(t) => write!(f, "{t}"),
            WitnessItem::Set(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<WitnessItem>,
    pub message: String,
}

impl Violation {
    pub fn witness_string(&self) -> String {
        let parts: Vec<String> = self.witness.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    violations: Vec<Violation>,
}

impl Report {
    pub fn pass() -> Report {
        Report::default()
    }

    pub fn verdict(&self) -> Verdict {
        if self.violations.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn axioms(&self) -> BTreeSet<&str> {
        self.violations.iter().map(|v| v.axiom.as_str()).collect()
    }

    pub fn first(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    /// Appends `other`, prefixing its axiom ids with `prefix/` when a prefix is given.
    pub fn merge(&mut self, other: Report, prefix: Option<&str>) {
        for mut v in other.violations {
            if let Some(p) = prefix {
                v.axiom = format!("{p}/{}", v.axiom);
            }
            self.violations.push(v);
        }
        self.sort();
    }

    fn sort(&mut self) {
        self.violations.sort_by(|a, b| (&a.axiom, &a.witness).cmp(&(&b.axiom, &b.witness)));
    }

    pub fn to_text(&self) -> String {
        if self.passed() {
            return "pass\n".to_string();
        }
        let mut out = format!("fail: {} violation(s)\n", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(out, "  {} {}: {}", v.axiom, v.witness_string(), v.message);
        }
        out
    }

    /// The report as a structured document.
    pub fn to_document(&self) -> String {
        let mut out = String::from("report {\n");
        let verdict = if self.passed() { "pass" } else { "fail" };
        let _ = writeln!(out, "  verdict {verdict}");
        out.push_str("  violations [\n");
        for v in &self.violations {
            let parts: Vec<String> = v.witness.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                out,
                "    violation {{ axiom \"{}\" witness [{}] message \"{}\" }}",
                v.axiom,
                parts.join(" "),
                v.message.replace('\\', "\\\\").replace('"', "\\\"")
            );
        }
        out.push_str("  ]\n}\n");
        out
    }
}

/// Collects violations, keeping at most one per axiom unless all witnesses are wanted.
pub(crate) struct Collector {
    all: bool,
    seen: BTreeSet<&'static str>,
    out: Vec<Violation>,
}

impl Collector {
    pub fn new(limits: &Limits) -> Collector {
        Collector { all: limits.all_witnesses, seen: BTreeSet::new(), out: Vec::new() }
    }

    /// Whether another witness for `axiom` would be recorded.
    pub fn wants(&self, axiom: &'static str) -> bool {
        self.all || !self.seen.contains(axiom)
    }

    pub fn push(&mut self, axiom: &'static str, witness: Vec<WitnessItem>, message: String) {
        if self.wants(axiom) {
            self.seen.insert(axiom);
            self.out.push(Violation { axiom: axiom.to_string(), witness, message });
        }
    }

    pub fn finish(self) -> Report {
        let mut r = Report { violations: self.out };
        r.sort();
        r
    }
}

/// Search limits shared by the checkers and constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Candidates a single existential search may visit.
    pub bound: u64,
    /// Sets a single materialized consistency family may hold.
    pub family_bound: usize,
    pub all_witnesses: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { bound: 1_000_000, family_bound: 4096, all_witnesses: false }
    }
}

impl Limits {
    pub fn with_all_witnesses(mut self) -> Limits {
        self.all_witnesses = true;
        self
    }

    pub(crate) fn budget(&self, what: &'static str) -> Budget {
        Budget { left: self.bound, what }
    }

    /// Fails when a family of `2^k` sets (plus `extra`) would exceed the family bound.
    pub(crate) fn powerset_fits(&self, k: usize, extra: usize, what: &str) -> Result<()> {
        if k >= 63 || (1usize << k) + extra > self.family_bound {
            return Err(Error::Bound(format!("{what}: 2^{k} sets exceed the family bound {}", self.family_bound)));
        }
        Ok(())
    }
}

pub(crate) struct Budget {
    left: u64,
    what: &'static str,
}

impl Budget {
    pub fn tick(&mut self) -> Result<()> {
        if self.left == 0 {
            return Err(Error::Bound(format!("{} search exceeded the bound", self.what)));
        }
        self.left -= 1;
        Ok(())
    }
}
