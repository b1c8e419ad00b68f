use thiserror::Error;

/// Name of the distinguished order relation.
pub const ORDER: &str = "<";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Relation,
    Function,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LanguageError {
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("relation `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("`{0}` is not a valid symbol name")]
    BadName(String),
}

/// A finite signature. Relations and functions keep their own index spaces;
/// declaration order is remembered so files round-trip.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Language {
    symbols: Vec<Symbol>,
    rels: Vec<usize>,
    funs: Vec<usize>,
}

pub fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || ":;(){}#,".contains(c))
}

impl Language {
    pub fn new() -> Self {
        Self::default()
    }

    /// Convenience constructor from `(name, arity)` lists.
    pub fn build(rels: &[(&str, usize)], funs: &[(&str, usize)]) -> Result<Self, LanguageError> {
        let mut l = Language::new();
        for (n, a) in rels {
            l.add_relation(n, *a)?;
        }
        for (n, a) in funs {
            l.add_function(n, *a)?;
        }
        Ok(l)
    }

    fn check_fresh(&self, name: &str) -> Result<(), LanguageError> {
        if !valid_name(name) {
            return Err(LanguageError::BadName(name.to_string()));
        }
        if self.symbols.iter().any(|s| s.name == name) {
            return Err(LanguageError::Duplicate(name.to_string()));
        }
        Ok(())
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<usize, LanguageError> {
        self.check_fresh(name)?;
        if arity == 0 {
            return Err(LanguageError::ZeroArity(name.to_string()));
        }
        self.symbols.push(Symbol { name: name.to_string(), arity, kind: SymbolKind::Relation });
        self.rels.push(self.symbols.len() - 1);
        Ok(self.rels.len() - 1)
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<usize, LanguageError> {
        self.check_fresh(name)?;
        self.symbols.push(Symbol { name: name.to_string(), arity, kind: SymbolKind::Function });
        self.funs.push(self.symbols.len() - 1);
        Ok(self.funs.len() - 1)
    }

    /// All symbols in declaration order.
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn rel_count(&self) -> usize {
        self.rels.len()
    }

    pub fn fun_count(&self) -> usize {
        self.funs.len()
    }

    pub fn rel(&self, i: usize) -> &Symbol {
        &self.symbols[self.rels[i]]
    }

    pub fn fun(&self, i: usize) -> &Symbol {
        &self.symbols[self.funs[i]]
    }

    pub fn rel_index(&self, name: &str) -> Option<usize> {
        self.rels.iter().position(|&s| self.symbols[s].name == name)
    }

    pub fn fun_index(&self, name: &str) -> Option<usize> {
        self.funs.iter().position(|&s| self.symbols[s].name == name)
    }

    pub fn order_index(&self) -> Option<usize> {
        self.rel_index(ORDER).filter(|&i| self.rel(i).arity == 2)
    }

    pub fn is_relational(&self) -> bool {
        self.funs.is_empty()
    }

    pub fn max_rel_arity(&self) -> usize {
        (0..self.rel_count()).map(|i| self.rel(i).arity).max().unwrap_or(0)
    }
}
