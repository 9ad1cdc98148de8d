use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Index of a symbol inside its [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered set of distinct symbol tokens.
///
/// Tokens are whole words (`x0`, `y12`, `z`) rather than characters so that
/// families of subscripted symbols can be represented without collisions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
    lookup: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet {
            tokens: Vec::new(),
            lookup: HashMap::new(),
        };
        for tok in tokens {
            let tok = tok.into();
            if tok.is_empty() || tok.chars().any(|c| c.is_whitespace() || c == ',' || c == '#') {
                return Err(ModelError::BadToken(tok));
            }
            if out.lookup.contains_key(&tok) {
                return Err(ModelError::DuplicateSymbol(tok));
            }
            let sym = Symbol(out.tokens.len() as u32);
            out.lookup.insert(tok.clone(), sym);
            out.tokens.push(tok);
        }
        if out.tokens.is_empty() {
            return Err(ModelError::EmptyAlphabet);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn symbol(&self, token: &str) -> Option<Symbol> {
        self.lookup.get(token).copied()
    }

    pub fn token(&self, sym: Symbol) -> &str {
        &self.tokens[sym.index()]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.tokens.len() as u32).map(Symbol)
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        sym.index() < self.tokens.len()
    }

    /// Looks up a token, failing with [`ModelError::UnknownSymbol`].
    pub fn resolve(&self, token: &str) -> Result<Symbol, ModelError> {
        self.symbol(token)
            .ok_or_else(|| ModelError::UnknownSymbol(token.to_string()))
    }

    /// Renders a symbol sequence as space-separated tokens.
    pub fn render(&self, symbols: &[Symbol]) -> String {
        symbols
            .iter()
            .map(|&s| self.token(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.tokens.join(", "))
    }
}
