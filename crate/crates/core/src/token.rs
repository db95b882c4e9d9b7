use std::fmt;
use std::sync::Arc;

/// A tree-structured identifier.
///
/// The derived order ranks variants by declaration (`Atom < Set < Pair`), atoms by
/// name, sets lexicographically on their sorted elements and pairs componentwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Atom(Arc<str>),
    Set(TokenSet),
    Pair(Arc<Token>, TokenSet),
}

/// The atom reserved for a freshly invented truth token.
pub const RESERVED_TRUTH: &str = "#T";

impl Token {
    pub fn atom(name: &str) -> Token {
        debug_assert!(is_identifier(name), "invalid atom name {name:?}");
        Token::Atom(name.into())
    }

    pub fn set(elems: TokenSet) -> Token {
        Token::Set(elems)
    }

    pub fn pair(first: Token, second: TokenSet) -> Token {
        Token::Pair(Arc::new(first), second)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Token::Atom(name) => Some(name),
            _ => None,
        }
    }
}

/// Whether `s` matches `[A-Za-z_#][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '#' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Atom(name) => f.write_str(name),
            Token::Set(elems) => {
                f.write_str("{")?;
                write_spaced(f, elems.iter())?;
                f.write_str("}")
            }
            Token::Pair(first, second) => write!(f, "({first}, {second})"),
        }
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A canonical finite set of tokens: sorted ascending, no duplicates.
///
/// Cloning is cheap; the elements live behind a shared pointer.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenSet(Arc<[Token]>);

impl TokenSet {
    pub fn empty() -> TokenSet {
        TokenSet(Arc::from(Vec::new()))
    }

    pub fn singleton(t: Token) -> TokenSet {
        TokenSet(Arc::from(vec![t]))
    }

    /// Builds a set from an already sorted, duplicate-free vector.
    pub(crate) fn from_sorted(v: Vec<Token>) -> TokenSet {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        TokenSet(Arc::from(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Token] {
        &self.0
    }

    pub fn contains(&self, t: &Token) -> bool {
        self.0.binary_search(t).is_ok()
    }

    pub fn position(&self, t: &Token) -> Option<usize> {
        self.0.binary_search(t).ok()
    }

    pub fn is_subset(&self, other: &TokenSet) -> bool {
        let mut it = other.iter();
        'outer: for x in self.iter() {
            for y in it.by_ref() {
                match y.cmp(x) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &TokenSet) -> TokenSet {
        self.iter().chain(other.iter()).cloned().collect()
    }

    pub fn with(&self, t: Token) -> TokenSet {
        if self.contains(&t) {
            return self.clone();
        }
        self.iter().cloned().chain(std::iter::once(t)).collect()
    }

    pub fn without(&self, t: &Token) -> TokenSet {
        if !self.contains(t) {
            return self.clone();
        }
        TokenSet::from_sorted(self.iter().filter(|x| *x != t).cloned().collect())
    }
}

impl Default for TokenSet {
    fn default() -> Self {
        TokenSet::empty()
    }
}

impl FromIterator<Token> for TokenSet {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        let mut v: Vec<Token> = iter.into_iter().collect();
        v.sort();
        v.dedup();
        TokenSet(Arc::from(v))
    }
}

impl<'a> IntoIterator for &'a TokenSet {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

impl fmt::Display for TokenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_spaced(f, self.iter())?;
        f.write_str("]")
    }
}

impl fmt::Debug for TokenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_spaced<'a>(f: &mut fmt::Formatter<'_>, it: impl Iterator<Item = &'a Token>) -> fmt::Result {
    for (k, t) in it.enumerate() {
        if k > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// All subsets of `base`, smallest first within each bit pattern. Callers bound `base` beforehand.
pub fn subsets_of(base: &TokenSet) -> impl Iterator<Item = TokenSet> + '_ {
    let n = base.len();
    assert!(n < 64, "subset enumeration over {n} elements");
    (0..1u64 << n).map(move |m| {
        TokenSet::from_sorted((0..n).filter(|k| m >> k & 1 == 1).map(|k| base.0[k].clone()).collect())
    })
}

/// Shorthand for a set of atoms, mostly for tests and fixtures.
pub fn atoms(names: &[&str]) -> TokenSet {
    names.iter().map(|n| Token::atom(n)).collect()
}
