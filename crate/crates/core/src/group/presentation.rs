use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::Word;
use super::GroupError;

/// Name of a generator, e.g. `b1`, `c`, `alpha2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GeneratorSymbol(String);

impl GeneratorSymbol {
    pub fn new(name: impl Into<String>) -> Result<Self, GroupError> {
        let name = name.into();
        let mut chars = name.chars();
        let valid = match chars.next() {
            Some(c) if c.is_alphabetic() || c == '_' => {
                chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
            }
            _ => false,
        };
        if valid {
            Ok(GeneratorSymbol(name))
        } else {
            Err(GroupError::InvalidGeneratorName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for GeneratorSymbol {
    type Error = GroupError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        GeneratorSymbol::new(value)
    }
}

impl From<GeneratorSymbol> for String {
    fn from(value: GeneratorSymbol) -> Self {
        value.0
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite presentation `<generators | relators>`.
///
/// Relators are stored freely and cyclically reduced; empty relators are
/// dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<GeneratorSymbol>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<GeneratorSymbol>, relators: Vec<Word>) -> Result<Self, GroupError> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(GroupError::DuplicateGenerator(g.to_string()));
            }
        }
        let mut p = Presentation {
            generators,
            relators: Vec::with_capacity(relators.len()),
        };
        for r in &relators {
            p.check_range(r)?;
            let r = r.cyclic_reduce();
            if !r.is_empty() {
                p.relators.push(r);
            }
        }
        Ok(p)
    }

    /// Convenience constructor from generator names and relator strings in
    /// the word grammar.
    ///
    /// ```
    /// use telescoping::group::Presentation;
    /// let p = Presentation::parse(&["t1", "t2"], &["[t1,t2]", "t2^3"]).unwrap();
    /// assert_eq!(p.to_string(), "<t1, t2 | [t1,t2], t2^3>");
    /// ```
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, GroupError> {
        let generators = generators
            .iter()
            .map(|g| GeneratorSymbol::new(*g))
            .collect::<Result<Vec<_>, _>>()?;
        let relators = relators
            .iter()
            .map(|r| Word::parse(r, &generators))
            .collect::<Result<Vec<_>, _>>()?;
        Presentation::new(generators, relators)
    }

    /// Free group on the given names.
    pub fn free(generators: &[&str]) -> Result<Self, GroupError> {
        Presentation::parse(generators, &[])
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.as_str() == name)
    }

    /// Parses a word over this presentation's generators.
    pub fn word(&self, text: &str) -> Result<Word, GroupError> {
        Word::parse(text, &self.generators)
    }

    pub fn check_range(&self, w: &Word) -> Result<(), GroupError> {
        match w.max_generator() {
            Some(index) if index >= self.generators.len() => Err(GroupError::InvalidRelator {
                index,
                generators: self.generators.len(),
            }),
            _ => Ok(()),
        }
    }

    /// The quotient by the normal closure of `r`.
    pub fn adjoin_relator(&self, r: &Word) -> Result<Presentation, GroupError> {
        self.check_range(r)?;
        let mut out = self.clone();
        let r = r.cyclic_reduce();
        if !r.is_empty() {
            out.relators.push(r);
        }
        Ok(out)
    }
}

/// `p` with the relator `r` appended: the quotient of `p` by `N(r)`.
pub fn adjoin_relator(p: &Presentation, r: &Word) -> Result<Presentation, GroupError> {
    p.adjoin_relator(r)
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(" |")?;
        for (i, r) in self.relators.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{}", r.display(&self.generators))?;
        }
        f.write_str(">")
    }
}
