use std::fmt;

use crate::error::{Error, Result};
use crate::model::Frame;
use crate::token::{Token, TokenSet};

/// Conjunctive formulas over tokens. Compared structurally, without any
/// associativity or commutativity quotient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Token),
    And(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(t: Token) -> Formula {
        Formula::Atom(t)
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::And(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(t) => write!(f, "{t}"),
            Formula::And(l, r) => {
                write!(f, "{l} ∧ ")?;
                match **r {
                    Formula::And(..) => write!(f, "({r})"),
                    Formula::Atom(_) => write!(f, "{r}"),
                }
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The atoms occurring in `phi`.
pub fn flatten(phi: &Formula) -> TokenSet {
    let mut out = Vec::new();
    fn walk(phi: &Formula, out: &mut Vec<Token>) {
        match phi {
            Formula::Atom(t) => out.push(t.clone()),
            Formula::And(l, r) => {
                walk(l, out);
                walk(r, out);
            }
        }
    }
    walk(phi, &mut out);
    out.into_iter().collect()
}

/// Left-bracketed conjunction in token order; the empty conjunction is `top`.
pub fn big_and(x: &TokenSet, top: &Token) -> Formula {
    let mut it = x.iter();
    let Some(first) = it.next() else { return Formula::Atom(top.clone()) };
    it.fold(Formula::Atom(first.clone()), |acc, t| Formula::and(acc, Formula::Atom(t.clone())))
}

/// Parses a formula against a frame's tokens. `⊤` and `top` always denote the
/// truth token; `T` does too unless the frame has an atom named `T`.
pub fn parse_formula(text: &str, frame: &Frame) -> Result<Formula> {
    let mut p = FormulaParser { chars: text.chars().collect(), k: 0, frame };
    let phi = p.formula()?;
    p.skip_ws();
    if p.k < p.chars.len() {
        return p.err("trailing input after formula");
    }
    Ok(phi)
}

/// Parses a comma-separated antecedent. `self` selects the stage's own antecedent;
/// returns `None` in that case.
pub fn parse_formulas(text: &str, frame: &Frame) -> Result<Option<Vec<Formula>>> {
    let trimmed = text.trim();
    if trimmed == "self" {
        return Ok(None);
    }
    if trimmed.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let mut p = FormulaParser { chars: text.chars().collect(), k: 0, frame };
    let mut out = vec![p.formula()?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(',') => {
                p.k += 1;
                out.push(p.formula()?);
            }
            Some(_) => return p.err("expected ',' between formulas"),
        }
    }
    Ok(Some(out))
}

struct FormulaParser<'a> {
    chars: Vec<char>,
    k: usize,
    frame: &'a Frame,
}

impl FormulaParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { line: 1, col: self.k + 1, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.k += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.k).copied()
    }

    fn eat_and(&mut self) -> bool {
        self.skip_ws();
        match self.peek() {
            Some('∧') | Some('&') => {
                self.k += 1;
                true
            }
            Some('/') if self.chars.get(self.k + 1) == Some(&'\\') => {
                self.k += 2;
                true
            }
            _ => false,
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut acc = self.primary()?;
        while self.eat_and() {
            let rhs = self.primary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Formula> {
        self.skip_ws();
        match self.peek() {
            Some('(') if !self.pair_ahead() => {
                self.k += 1;
                let phi = self.formula()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.k += 1;
                Ok(phi)
            }
            Some('⊤') => {
                self.k += 1;
                self.truth()
            }
            Some(_) => {
                let start = self.k;
                let t = self.token()?;
                if let Token::Atom(name) = &t {
                    let known = self.frame.tokens().contains(&t);
                    if &**name == "top" && !known {
                        return self.truth();
                    }
                    if &**name == "T" && !known {
                        return self.truth();
                    }
                }
                if !self.frame.tokens().contains(&t) {
                    self.k = start;
                    return Err(Error::UnknownToken(format!("{t} in formula")));
                }
                Ok(Formula::Atom(t))
            }
            None => self.err("expected a formula"),
        }
    }

    fn truth(&self) -> Result<Formula> {
        match self.frame.truth() {
            Some(t) => Ok(Formula::Atom(t.clone())),
            None => Err(Error::NoTruth("formula mentions truth but the frame has none".into())),
        }
    }

    /// After '(' : a token followed by ',' makes a pair token.
    fn pair_ahead(&self) -> bool {
        let mut probe = FormulaParser { chars: self.chars.clone(), k: self.k + 1, frame: self.frame };
        probe.skip_ws();
        if probe.token().is_err() {
            return false;
        }
        probe.skip_ws();
        probe.peek() == Some(',')
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.k;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '#') {
            self.k += 1;
        }
        let word: String = self.chars[start..self.k].iter().collect();
        if !crate::token::is_identifier(&word) {
            self.k = start;
            return self.err("expected an identifier");
        }
        Ok(word)
    }

    fn token(&mut self) -> Result<Token> {
        self.skip_ws();
        match self.peek() {
            Some('{') => {
                self.k += 1;
                let elems = self.tokens_until('}')?;
                Ok(Token::set(elems))
            }
            Some('(') => {
                self.k += 1;
                let first = self.token()?;
                self.skip_ws();
                if self.peek() != Some(',') {
                    return self.err("expected ',' in pair token");
                }
                self.k += 1;
                self.skip_ws();
                if self.peek() != Some('[') {
                    return self.err("expected '[' in pair token");
                }
                self.k += 1;
                let second = self.tokens_until(']')?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return self.err("expected ')' closing pair token");
                }
                self.k += 1;
                Ok(Token::pair(first, second))
            }
            _ => Ok(Token::atom(&self.ident()?)),
        }
    }

    fn tokens_until(&mut self, close: char) -> Result<TokenSet> {
        let mut v = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c == close => {
                    self.k += 1;
                    return Ok(v.into_iter().collect());
                }
                None => return self.err("unterminated token"),
                _ => v.push(self.token()?),
            }
        }
    }
}
