//! Kind-tagged presentations and their line-oriented text format.
//!
//! ```text
//! # comment
//! @kind special_inverse
//! @gens a b
//! @rel a b = 1
//! @trunc L=2
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{invert_word, is_positive, prefixes, InvolutiveAlphabet, Letter, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {source}")]
    Word {
        line: usize,
        #[source]
        source: WordError,
    },
    #[error("relation {index}: right-hand side must be 1 for {kind} presentations")]
    NonTrivialRhs { index: usize, kind: Kind },
    #[error("relation {index}: formal inverses are not allowed in {kind} presentations")]
    InverseLetter { index: usize, kind: Kind },
    #[error("expected a {expected} presentation, found {found}")]
    WrongKind { expected: &'static str, found: Kind },
    #[error("missing `@{0}` directive")]
    Missing(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    SpecialInverse,
    RcMonoid,
    Group,
    Monoid,
}

impl Kind {
    pub fn is_special(self) -> bool {
        matches!(self, Kind::SpecialInverse | Kind::Group)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::SpecialInverse => "special_inverse",
            Kind::RcMonoid => "rc_monoid",
            Kind::Group => "group",
            Kind::Monoid => "monoid",
        })
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "special_inverse" => Kind::SpecialInverse,
            "rc_monoid" => Kind::RcMonoid,
            "group" => Kind::Group,
            "monoid" => Kind::Monoid,
            other => return Err(format!("unknown kind `{other}`")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Relation { lhs, rhs }
    }
    pub fn relator(w: Word) -> Self {
        Relation { lhs: w, rhs: Word::new() }
    }
}

/// Metadata key that lets monoid kinds use formal inverses as ordinary
/// letters (the invertible-generator presentations built in `constructions`).
pub const META_INVERSE_LETTERS: &str = "inverse_letters";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub kind: Kind,
    pub alphabet: InvolutiveAlphabet,
    pub relations: Vec<Relation>,
    pub name: Option<String>,
    pub comments: Vec<String>,
    /// `@trunc` key/value pairs, in file order.
    pub trunc: Vec<(String, String)>,
    /// `@meta` key/value pairs (construction provenance), in file order.
    pub meta: Vec<(String, String)>,
}

impl Presentation {
    pub fn new(kind: Kind, alphabet: InvolutiveAlphabet) -> Self {
        Presentation {
            kind,
            alphabet,
            relations: Vec::new(),
            name: None,
            comments: Vec::new(),
            trunc: Vec::new(),
            meta: Vec::new(),
        }
    }

    /// Convenience constructor from word text, e.g. `("a a", "1")`.
    pub fn from_strs(kind: Kind, gens: &[&str], rels: &[(&str, &str)]) -> Result<Self, PresentationError> {
        let alphabet = InvolutiveAlphabet::new(gens).map_err(|source| PresentationError::Word { line: 0, source })?;
        let mut p = Presentation::new(kind, alphabet);
        for (l, r) in rels {
            let lhs = p.alphabet.parse(l).map_err(|source| PresentationError::Word { line: 0, source })?;
            let rhs = p.alphabet.parse(r).map_err(|source| PresentationError::Word { line: 0, source })?;
            p.relations.push(Relation::new(lhs, rhs));
        }
        p.validate()?;
        Ok(p)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn trunc_value(&self, key: &str) -> Option<&str> {
        self.trunc.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.meta.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.meta.push((key.to_string(), value)),
        }
    }

    /// Relator words `w` of `w = 1` relations.
    pub fn relators(&self) -> Vec<Word> {
        self.relations
            .iter()
            .map(|r| {
                let mut w = r.lhs.clone();
                w.extend(invert_word(&r.rhs));
                w
            })
            .collect()
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators().iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        let inverses_ok = self.meta(META_INVERSE_LETTERS) == Some("generators");
        for (index, r) in self.relations.iter().enumerate() {
            for l in r.lhs.iter().chain(&r.rhs) {
                if !self.alphabet.contains(*l) {
                    return Err(PresentationError::Word {
                        line: 0,
                        source: WordError::UnknownLetter { token: format!("#{}", l.generator()) },
                    });
                }
            }
            if self.kind.is_special() && !r.rhs.is_empty() {
                return Err(PresentationError::NonTrivialRhs { index, kind: self.kind });
            }
            if !self.kind.is_special() && !inverses_ok && !(is_positive(&r.lhs) && is_positive(&r.rhs)) {
                return Err(PresentationError::InverseLetter { index, kind: self.kind });
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            s.push_str("# ");
            s.push_str(c);
            s.push('\n');
        }
        if let Some(n) = &self.name {
            s.push_str(&format!("@name {n}\n"));
        }
        s.push_str(&format!("@kind {}\n", self.kind));
        s.push_str("@gens");
        for n in self.alphabet.names() {
            s.push(' ');
            s.push_str(n);
        }
        s.push('\n');
        for (label, pairs) in [("meta", &self.meta), ("trunc", &self.trunc)] {
            for (k, v) in pairs {
                s.push_str(&format!("@{label} {k}={v}\n"));
            }
        }
        for r in &self.relations {
            s.push_str(&format!(
                "@rel {} = {}\n",
                self.alphabet.format(&r.lhs),
                self.alphabet.format(&r.rhs)
            ));
        }
        s
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn serialize_presentation(p: &Presentation) -> String {
    p.to_text()
}

pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut kind = None;
    let mut alphabet = None;
    let mut name = None;
    let mut comments = Vec::new();
    let mut trunc = Vec::new();
    let mut meta = Vec::new();
    let mut rels: Vec<(usize, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let column = raw.len() - raw.trim_start().len() + 1;
        let syntax = |message: String| PresentationError::Syntax { line, column, message };
        let (directive, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest = rest.trim();
        match directive {
            "@kind" => kind = Some(rest.parse::<Kind>().map_err(syntax)?),
            "@gens" => {
                let names: Vec<&str> = rest.split_whitespace().collect();
                alphabet = Some(
                    InvolutiveAlphabet::new(&names).map_err(|source| PresentationError::Word { line, source })?,
                );
            }
            "@name" => name = Some(rest.to_string()),
            "@rel" => rels.push((line, rest.to_string())),
            "@trunc" | "@meta" => {
                for kv in rest.split_whitespace() {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| syntax(format!("expected key=value, found `{kv}`")))?;
                    let target = if directive == "@trunc" { &mut trunc } else { &mut meta };
                    target.push((k.to_string(), v.to_string()));
                }
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }

    let kind = kind.ok_or(PresentationError::Missing("kind"))?;
    let alphabet = alphabet.ok_or(PresentationError::Missing("gens"))?;
    let mut p = Presentation::new(kind, alphabet);
    p.name = name;
    p.comments = comments;
    p.trunc = trunc;
    p.meta = meta;
    for (line, text) in rels {
        let (l, r) = text.split_once('=').ok_or(PresentationError::Syntax {
            line,
            column: 1,
            message: "relation needs `=`".into(),
        })?;
        let lhs = p.alphabet.parse(l).map_err(|source| PresentationError::Word { line, source })?;
        let rhs = p.alphabet.parse(r).map_err(|source| PresentationError::Word { line, source })?;
        p.relations.push(Relation::new(lhs, rhs));
    }
    p.validate()?;
    Ok(p)
}

/// Same generators and relators, reinterpreted as a group presentation.
pub fn group_image(p: &Presentation) -> Result<Presentation, PresentationError> {
    if !p.kind.is_special() {
        return Err(PresentationError::WrongKind { expected: "special_inverse", found: p.kind });
    }
    let mut g = p.clone();
    g.kind = Kind::Group;
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixGeneratorSet {
    pub words: Vec<Word>,
    /// Index of the relator each word was first taken from.
    pub sources: Vec<usize>,
}

pub fn prefix_generators(p: &Presentation) -> Result<PrefixGeneratorSet, PresentationError> {
    if !p.kind.is_special() {
        return Err(PresentationError::WrongKind { expected: "special_inverse or group", found: p.kind });
    }
    let mut set = PrefixGeneratorSet { words: Vec::new(), sources: Vec::new() };
    for (i, r) in p.relators().iter().enumerate() {
        for w in prefixes(r, false) {
            if !set.words.contains(&w) {
                set.words.push(w);
                set.sources.push(i);
            }
        }
    }
    Ok(set)
}

pub fn is_prefix_of(w: &[Letter], r: &[Letter]) -> bool {
    r.starts_with(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let p = parse_presentation("@kind special_inverse\n@gens a\n@rel a a = 1\n").unwrap();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relators()[0].len(), 2);
        let q = parse_presentation("@kind rc_monoid\n@gens a b\n@rel a b = b a\n").unwrap();
        assert_eq!(q.kind, Kind::RcMonoid);
        assert!(parse_presentation("@kind special_inverse\n@gens a b\n@rel a c = 1\n").is_err());
        assert!(matches!(
            parse_presentation("@kind special_inverse\n@gens a\n@rel a = a\n"),
            Err(PresentationError::NonTrivialRhs { .. })
        ));
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_presentation("@kind group\n  @bogus x\n").unwrap_err();
        assert_eq!(e, PresentationError::Syntax { line: 2, column: 3, message: "unknown directive `@bogus`".into() });
    }

    #[test]
    fn round_trip() {
        let text = "# demo\n@name z2\n@kind special_inverse\n@gens a b\n@trunc L=2\n@rel a a = 1\n@rel a b' = 1\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.to_text(), text);
        assert_eq!(parse_presentation(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn group_image_and_prefixes() {
        let p = Presentation::from_strs(Kind::SpecialInverse, &["a", "b"], &[("a b", "1")]).unwrap();
        let g = group_image(&p).unwrap();
        assert_eq!(g.kind, Kind::Group);
        assert_eq!(group_image(&g).unwrap(), g);
        let pg = prefix_generators(&p).unwrap();
        let names: Vec<String> = pg.words.iter().map(|w| p.alphabet.format(w)).collect();
        assert_eq!(names, ["a", "a b"]);

        let rc = Presentation::from_strs(Kind::RcMonoid, &["a"], &[("a", "a")]).unwrap();
        assert!(group_image(&rc).is_err());

        let two = Presentation::from_strs(Kind::SpecialInverse, &["a", "b"], &[("a b", "1"), ("a a", "1")]).unwrap();
        let pg = prefix_generators(&two).unwrap();
        assert_eq!(pg.words.iter().filter(|w| w.len() == 1).count(), 1);
        for (w, &s) in pg.words.iter().zip(&pg.sources) {
            assert!(is_prefix_of(w, &two.relators()[s]));
        }
    }
}
