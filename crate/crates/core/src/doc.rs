//! The brace/bracket document format: lexer, parser and canonical serializer.
//!
//! ```text
//! frame { tokens [T a] truth T con { T: [[] [T]] a: [[] [a]] } entails { T: [[[] -> T]] } }
//! system { tokens [a b] simplified con [[a] [b]] entails [[[a] -> b]] }
//! morphism { kind family source "x.doc" target "y.doc" rel { T: [[[] -> T]] } }
//! logic { top T stage T { atoms [T] derives [[self -> T] [[T] -> T]] } }
//! basis { carrier [x y] prec [[x y]] }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::bases::AbstractBasis;
use crate::error::{Error, Result};
use crate::logic::{Antecedent, CslTable, Stage};
use crate::model::{Family, Frame, InfoSystem, Morphism, MorphismKind, MorphismRel, Relation, Structure};
use crate::token::{Token, TokenSet};

/// A morphism whose endpoints are still file references.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDoc {
    pub kind: MorphismKind,
    pub source: String,
    pub target: String,
    pub rel: MorphismRel,
}

impl MorphismDoc {
    pub fn resolve(&self, source: Arc<Structure>, target: Arc<Structure>) -> Result<Morphism> {
        Morphism::new(self.kind, source, target, self.rel.clone())
    }

    pub fn of(m: &Morphism, source: &str, target: &str) -> MorphismDoc {
        MorphismDoc { kind: m.kind(), source: source.to_string(), target: target.to_string(), rel: m.rel().clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Frame(Frame),
    System(InfoSystem),
    Morphism(MorphismDoc),
    Logic(CslTable),
    Basis(AbstractBasis),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Frame(_) => "frame",
            Document::System(_) => "system",
            Document::Morphism(_) => "morphism",
            Document::Logic(_) => "logic",
            Document::Basis(_) => "basis",
        }
    }

    pub fn into_structure(self) -> Result<Structure> {
        match self {
            Document::Frame(f) => Ok(Structure::Frame(f)),
            Document::System(s) => Ok(Structure::System(s)),
            other => Err(Error::Type(format!("expected a frame or system document, found {}", other.kind()))),
        }
    }

    pub fn into_frame(self) -> Result<Frame> {
        match self {
            Document::Frame(f) => Ok(f),
            other => Err(Error::Type(format!("expected a frame document, found {}", other.kind()))),
        }
    }

    pub fn into_system(self) -> Result<InfoSystem> {
        match self {
            Document::System(s) => Ok(s),
            other => Err(Error::Type(format!("expected a system document, found {}", other.kind()))),
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut p = Parser::new(text)?;
    let doc = p.document()?;
    p.expect_end()?;
    Ok(doc)
}

pub fn serialize(doc: &Document) -> String {
    match doc {
        Document::Frame(f) => serialize_frame(f),
        Document::System(s) => serialize_system(s),
        Document::Morphism(m) => serialize_morphism(m),
        Document::Logic(t) => serialize_logic(t),
        Document::Basis(b) => serialize_basis(b),
    }
}

const WIDTH: usize = 80;

/// `[a b c]` when it fits on the line, otherwise one item per line.
/// `start` is the column the list begins at, `indent` that of its line.
fn list(items: &[String], start: usize, indent: usize) -> String {
    let inline = format!("[{}]", items.join(" "));
    if start + inline.chars().count() <= WIDTH || items.is_empty() {
        return inline;
    }
    let pad = " ".repeat(indent + 2);
    let mut out = String::from("[\n");
    for it in items {
        let _ = writeln!(out, "{pad}{it}");
    }
    out.push_str(&" ".repeat(indent));
    out.push(']');
    out
}

fn set_str(s: &TokenSet) -> String {
    s.to_string()
}

fn family_items(fam: &Family) -> Vec<String> {
    fam.iter().map(set_str).collect()
}

fn relation_items(r: &Relation) -> Vec<String> {
    r.pairs().map(|(x, b)| format!("[{x} -> {b}]")).collect()
}

fn tokens_str(t: &TokenSet) -> Vec<String> {
    t.iter().map(ToString::to_string).collect()
}

fn keyed_block(out: &mut String, name: &str, rows: Vec<(String, Vec<String>)>) {
    let _ = writeln!(out, "  {name} {{");
    for (key, items) in rows {
        let prefix = format!("    {key}: ");
        let _ = writeln!(out, "{prefix}{}", list(&items, prefix.chars().count(), 4));
    }
    out.push_str("  }\n");
}

pub fn serialize_frame(f: &Frame) -> String {
    let mut out = String::from("frame {\n");
    let _ = writeln!(out, "  tokens {}", list(&tokens_str(f.tokens()), 9, 2));
    if let Some(t) = f.truth() {
        let _ = writeln!(out, "  truth {t}");
    }
    keyed_block(&mut out, "con", f.con_map().iter().map(|(i, fam)| (i.to_string(), family_items(fam))).collect());
    keyed_block(&mut out, "entails", f.entails_map().iter().map(|(i, r)| (i.to_string(), relation_items(r))).collect());
    out.push_str("}\n");
    out
}

pub fn serialize_system(s: &InfoSystem) -> String {
    let mut out = String::from("system {\n");
    let _ = writeln!(out, "  tokens {}", list(&tokens_str(s.tokens()), 9, 2));
    if s.simplified() {
        out.push_str("  simplified\n");
    }
    let _ = writeln!(out, "  con {}", list(&family_items(s.con()), 6, 2));
    let _ = writeln!(out, "  entails {}", list(&relation_items(s.entailment()), 10, 2));
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn serialize_morphism(m: &MorphismDoc) -> String {
    let mut out = String::from("morphism {\n");
    let _ = writeln!(out, "  kind {}", m.kind.as_str());
    let _ = writeln!(out, "  source {}", quote(&m.source));
    let _ = writeln!(out, "  target {}", quote(&m.target));
    if m.kind == MorphismKind::Mapping {
        let r = m.rel.get(&None).cloned().unwrap_or_default();
        let _ = writeln!(out, "  rel {}", list(&relation_items(&r), 6, 2));
    } else {
        let rows = m.rel.iter().filter_map(|(i, r)| i.as_ref().map(|i| (i.to_string(), relation_items(r)))).collect();
        keyed_block(&mut out, "rel", rows);
    }
    out.push_str("}\n");
    out
}

pub fn serialize_logic(t: &CslTable) -> String {
    let mut out = String::from("logic {\n");
    let _ = writeln!(out, "  top {}", t.top());
    for (p, stage) in t.stages() {
        let _ = writeln!(out, "  stage {p} {{");
        let _ = writeln!(out, "    atoms {}", list(&tokens_str(&stage.atoms), 10, 4));
        let rows: Vec<String> = stage
            .rows
            .iter()
            .flat_map(|(a, qs)| {
                let lhs = match a {
                    Antecedent::Own => "self".to_string(),
                    Antecedent::Atoms(x) => x.to_string(),
                };
                qs.iter().map(move |q| format!("[{lhs} -> {q}]")).collect::<Vec<_>>()
            })
            .collect();
        let _ = writeln!(out, "    derives {}", list(&rows, 12, 4));
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

pub fn serialize_basis(b: &AbstractBasis) -> String {
    let mut out = String::from("basis {\n");
    let _ = writeln!(out, "  carrier {}", list(&tokens_str(b.carrier()), 10, 2));
    let pairs: Vec<String> = b.prec().iter().map(|(x, y)| format!("[{x} {y}]")).collect();
    let _ = writeln!(out, "  prec {}", list(&pairs, 7, 2));
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Open(char),
    Close(char),
    Comma,
    Colon,
    Arrow,
    Ident(String),
    Str(String),
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut k, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| Error::Syntax { line, col, msg };
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        let step = |n: usize, k: &mut usize, col: &mut usize| {
            *k += n;
            *col += n;
        };
        match c {
            '\n' => {
                k += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => step(1, &mut k, &mut col),
            '/' if chars.get(k + 1) == Some(&'/') => {
                while k < chars.len() && chars[k] != '\n' {
                    k += 1;
                }
            }
            '{' | '[' | '(' => {
                out.push(Lexed { tok: Tok::Open(c), line: l0, col: c0 });
                step(1, &mut k, &mut col);
            }
            '}' | ']' | ')' => {
                out.push(Lexed { tok: Tok::Close(c), line: l0, col: c0 });
                step(1, &mut k, &mut col);
            }
            ',' => {
                out.push(Lexed { tok: Tok::Comma, line: l0, col: c0 });
                step(1, &mut k, &mut col);
            }
            ':' => {
                out.push(Lexed { tok: Tok::Colon, line: l0, col: c0 });
                step(1, &mut k, &mut col);
            }
            '-' if chars.get(k + 1) == Some(&'>') => {
                out.push(Lexed { tok: Tok::Arrow, line: l0, col: c0 });
                step(2, &mut k, &mut col);
            }
            '"' => {
                let mut s = String::new();
                step(1, &mut k, &mut col);
                loop {
                    match chars.get(k) {
                        None | Some('\n') => return Err(err(l0, c0, "unterminated string".into())),
                        Some('"') => {
                            step(1, &mut k, &mut col);
                            break;
                        }
                        Some('\\') if k + 1 < chars.len() => {
                            s.push(chars[k + 1]);
                            step(2, &mut k, &mut col);
                        }
                        Some(&ch) => {
                            s.push(ch);
                            step(1, &mut k, &mut col);
                        }
                    }
                }
                out.push(Lexed { tok: Tok::Str(s), line: l0, col: c0 });
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '#' => {
                let start = k;
                step(1, &mut k, &mut col);
                while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                    step(1, &mut k, &mut col);
                }
                let word: String = chars[start..k].iter().collect();
                if !crate::token::is_identifier(&word) {
                    return Err(err(l0, c0, format!("invalid identifier {word:?}")));
                }
                out.push(Lexed { tok: Tok::Ident(word), line: l0, col: c0 });
            }
            other => return Err(err(l0, c0, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    k: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        let toks = lex(text)?;
        let lines = text.split('\n').count().max(1);
        let last = text.rsplit('\n').next().map_or(0, |l| l.chars().count());
        Ok(Parser { toks, k: 0, end: (lines, last + 1) })
    }

    fn pos(&self) -> (usize, usize) {
        self.toks.get(self.k).map_or(self.end, |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.pos();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|t| &t.tok)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.k + n).map(|t| &t.tok)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.k += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expect_end(&self) -> Result<()> {
        if self.k < self.toks.len() {
            return self.err("trailing input after document");
        }
        Ok(())
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.k += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn string(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.k += 1;
                Ok(s)
            }
            _ => self.err(format!("expected quoted {what}")),
        }
    }

    fn at_close(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Close(c))
    }

    fn token(&mut self) -> Result<Token> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.k += 1;
                Ok(Token::atom(&s))
            }
            Some(Tok::Open('{')) => {
                self.k += 1;
                let mut elems = Vec::new();
                while !self.at_close('}') {
                    if self.peek().is_none() {
                        return self.err("unterminated set token");
                    }
                    elems.push(self.token()?);
                }
                self.k += 1;
                Ok(Token::set(elems.into_iter().collect()))
            }
            Some(Tok::Open('(')) => {
                self.k += 1;
                let first = self.token()?;
                self.expect(Tok::Comma, "',' in pair token")?;
                let second = self.set()?;
                self.expect(Tok::Close(')'), "')' closing pair token")?;
                Ok(Token::pair(first, second))
            }
            _ => self.err("expected a token"),
        }
    }

    /// A bracketed token list, kept in input order.
    fn token_list(&mut self) -> Result<Vec<Token>> {
        self.expect(Tok::Open('['), "'['")?;
        let mut v = Vec::new();
        while !self.at_close(']') {
            if self.peek().is_none() {
                return self.err("unterminated list");
            }
            v.push(self.token()?);
        }
        self.k += 1;
        Ok(v)
    }

    fn set(&mut self) -> Result<TokenSet> {
        Ok(self.token_list()?.into_iter().collect())
    }

    /// A universe declaration: duplicates are rejected rather than merged.
    fn universe(&mut self) -> Result<TokenSet> {
        let v = self.token_list()?;
        let set: TokenSet = v.iter().cloned().collect();
        if set.len() != v.len() {
            let mut seen = BTreeSet::new();
            let dup = v.into_iter().find(|t| !seen.insert(t.clone())).expect("duplicate exists");
            return Err(Error::Dup(format!("token {dup} listed twice")));
        }
        Ok(set)
    }

    fn family(&mut self) -> Result<Family> {
        self.expect(Tok::Open('['), "'[' opening a family")?;
        let mut fam = Family::new();
        while !self.at_close(']') {
            if self.peek().is_none() {
                return self.err("unterminated family");
            }
            let s = self.set()?;
            if !fam.insert(s.clone()) {
                return Err(Error::Dup(format!("set {s} listed twice in a family")));
            }
        }
        self.k += 1;
        Ok(fam)
    }

    /// `[[X] -> a]` items.
    fn relation(&mut self) -> Result<Relation> {
        self.expect(Tok::Open('['), "'[' opening an entailment list")?;
        let mut r = Relation::new();
        while !self.at_close(']') {
            self.expect(Tok::Open('['), "'[' opening an entailment")?;
            let x = self.set()?;
            self.expect(Tok::Arrow, "'->'")?;
            let b = self.token()?;
            self.expect(Tok::Close(']'), "']' closing an entailment")?;
            r.insert(x, b);
        }
        self.k += 1;
        Ok(r)
    }

    fn keyed<T>(&mut self, mut item: impl FnMut(&mut Parser) -> Result<T>) -> Result<Vec<(Token, T)>> {
        self.expect(Tok::Open('{'), "'{'")?;
        let mut out = Vec::new();
        while !self.at_close('}') {
            let key = self.token()?;
            self.expect(Tok::Colon, "':'")?;
            out.push((key, item(self)?));
        }
        self.k += 1;
        Ok(out)
    }

    fn unknown<T>(&mut self, what: &str, name: &str) -> Result<T> {
        self.k -= 1;
        self.err(format!("unknown {what} field {name:?}"))
    }

    fn field_once(&self, seen: &mut BTreeSet<String>, name: &str) -> Result<()> {
        if !seen.insert(name.to_string()) {
            return self.err(format!("field {name} given twice"));
        }
        Ok(())
    }

    fn document(&mut self) -> Result<Document> {
        let kind = self.ident("document kind")?;
        self.expect(Tok::Open('{'), "'{' after document kind")?;
        let doc = match kind.as_str() {
            "frame" => self.frame()?,
            "system" => self.system()?,
            "morphism" => self.morphism()?,
            "logic" => self.logic()?,
            "basis" => self.basis()?,
            other => return Err(Error::Syntax { line: 1, col: 1, msg: format!("unknown document kind {other:?}") }),
        };
        self.expect(Tok::Close('}'), "'}' closing the document")?;
        Ok(doc)
    }

    fn frame(&mut self) -> Result<Document> {
        let (mut tokens, mut truth) = (None, None);
        let mut con: BTreeMap<Token, Family> = BTreeMap::new();
        let mut entails: BTreeMap<Token, Relation> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        while !self.at_close('}') {
            let field = self.ident("a frame field")?;
            self.field_once(&mut seen, &field)?;
            match field.as_str() {
                "tokens" => tokens = Some(self.universe()?),
                "truth" => truth = Some(self.token()?),
                "con" => {
                    for (i, fam) in self.keyed(Parser::family)? {
                        if con.insert(i.clone(), fam).is_some() {
                            return Err(Error::Dup(format!("con({i}) given twice")));
                        }
                    }
                }
                "entails" => {
                    for (i, r) in self.keyed(Parser::relation)? {
                        if entails.insert(i.clone(), r).is_some() {
                            return Err(Error::Dup(format!("entails({i}) given twice")));
                        }
                    }
                }
                other => return self.unknown("frame", other),
            }
        }
        let Some(tokens) = tokens else { return self.err("frame without tokens") };
        let f = Frame::new(tokens, con, entails, truth)?;
        f.check_reserved()?;
        Ok(Document::Frame(f))
    }

    fn system(&mut self) -> Result<Document> {
        let (mut tokens, mut con, mut entails, mut simplified) = (None, Family::new(), Relation::new(), false);
        let mut seen = BTreeSet::new();
        while !self.at_close('}') {
            let field = self.ident("a system field")?;
            self.field_once(&mut seen, &field)?;
            match field.as_str() {
                "tokens" => tokens = Some(self.universe()?),
                "simplified" => simplified = true,
                "con" => con = self.family()?,
                "entails" => entails = self.relation()?,
                other => return self.unknown("system", other),
            }
        }
        let Some(tokens) = tokens else { return self.err("system without tokens") };
        Ok(Document::System(InfoSystem::new(tokens, con, entails, simplified)?))
    }

    fn morphism(&mut self) -> Result<Document> {
        let (mut kind, mut source, mut target, mut rel) = (None, None, None, None);
        let mut seen = BTreeSet::new();
        while !self.at_close('}') {
            let field = self.ident("a morphism field")?;
            self.field_once(&mut seen, &field)?;
            match field.as_str() {
                "kind" => {
                    let k = self.ident("morphism kind")?;
                    match k.parse::<MorphismKind>() {
                        Ok(k) => kind = Some(k),
                        Err(e) => return self.err(e),
                    }
                }
                "source" => source = Some(self.string("source path")?),
                "target" => target = Some(self.string("target path")?),
                "rel" => {
                    let mut m = MorphismRel::new();
                    if self.peek() == Some(&Tok::Open('[')) {
                        m.insert(None, self.relation()?);
                    } else {
                        for (i, r) in self.keyed(Parser::relation)? {
                            if m.insert(Some(i.clone()), r).is_some() {
                                return Err(Error::Dup(format!("rel({i}) given twice")));
                            }
                        }
                    }
                    rel = Some(m);
                }
                other => return self.unknown("morphism", other),
            }
        }
        let (Some(kind), Some(source), Some(target)) = (kind, source, target) else {
            return self.err("morphism needs kind, source and target");
        };
        let rel = rel.unwrap_or_default();
        let indexed = rel.keys().any(Option::is_some);
        let bare = rel.keys().any(Option::is_none);
        if (kind == MorphismKind::Mapping && indexed) || (kind != MorphismKind::Mapping && bare) {
            return self.err(format!("rel shape does not match kind {}", kind.as_str()));
        }
        Ok(Document::Morphism(MorphismDoc { kind, source, target, rel }))
    }

    fn logic(&mut self) -> Result<Document> {
        let mut top = None;
        let mut stages = BTreeMap::new();
        while !self.at_close('}') {
            match self.ident("a logic field")?.as_str() {
                "top" => {
                    if top.is_some() {
                        return self.err("field top given twice");
                    }
                    top = Some(self.token()?);
                }
                "stage" => {
                    let p = self.token()?;
                    let stage = self.stage()?;
                    if stages.insert(p.clone(), stage).is_some() {
                        return Err(Error::Dup(format!("stage {p} given twice")));
                    }
                }
                other => return self.unknown("logic", other),
            }
        }
        let Some(top) = top else { return self.err("logic without top") };
        Ok(Document::Logic(CslTable::new(top, stages)?))
    }

    fn stage(&mut self) -> Result<Stage> {
        self.expect(Tok::Open('{'), "'{' opening a stage")?;
        let (mut atoms, mut rows) = (None, BTreeMap::<Antecedent, TokenSet>::new());
        let mut seen = BTreeSet::new();
        while !self.at_close('}') {
            let field = self.ident("a stage field")?;
            self.field_once(&mut seen, &field)?;
            match field.as_str() {
                "atoms" => atoms = Some(self.universe()?),
                "derives" => {
                    self.expect(Tok::Open('['), "'[' opening a derivation list")?;
                    while !self.at_close(']') {
                        self.expect(Tok::Open('['), "'[' opening a derivation")?;
                        let lhs = if matches!(self.peek(), Some(Tok::Ident(s)) if s == "self") && self.peek_at(1) == Some(&Tok::Arrow) {
                            self.k += 1;
                            Antecedent::Own
                        } else {
                            Antecedent::Atoms(self.set()?)
                        };
                        self.expect(Tok::Arrow, "'->'")?;
                        let q = self.token()?;
                        self.expect(Tok::Close(']'), "']' closing a derivation")?;
                        let e = rows.entry(lhs).or_default();
                        *e = e.with(q);
                    }
                    self.k += 1;
                }
                other => return self.unknown("stage", other),
            }
        }
        self.k += 1;
        let Some(atoms) = atoms else { return self.err("stage without atoms") };
        Ok(Stage::new(atoms, rows))
    }

    fn basis(&mut self) -> Result<Document> {
        let (mut carrier, mut prec) = (None, BTreeSet::new());
        let mut seen = BTreeSet::new();
        while !self.at_close('}') {
            let field = self.ident("a basis field")?;
            self.field_once(&mut seen, &field)?;
            match field.as_str() {
                "carrier" => carrier = Some(self.universe()?),
                "prec" => {
                    self.expect(Tok::Open('['), "'[' opening prec")?;
                    while !self.at_close(']') {
                        let pair = self.token_list()?;
                        let [x, y] = <[Token; 2]>::try_from(pair).or_else(|_| self.err("prec entries are [x y] pairs"))?;
                        prec.insert((x, y));
                    }
                    self.k += 1;
                }
                other => return self.unknown("basis", other),
            }
        }
        let Some(carrier) = carrier else { return self.err("basis without carrier") };
        Ok(Document::Basis(AbstractBasis::new(carrier, prec)?))
    }
}
