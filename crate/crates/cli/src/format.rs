//! The structure file format.
//!
//! ```text
//! language L
//! rel E 2
//! end
//!
//! structure G over L
//! vertices 3
//! rel E: 0 1; 1 0
//! end
//! ```
//!
//! Serialization is canonical: symbols in declaration order, tuples and
//! function entries sorted, empty relations and empty values omitted, one
//! blank line between sections.

use std::fmt::Write as _;

use structures::{Language, Structure, SymbolKind};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    Language { name: String, language: Language },
    Structure { name: String, over: String, structure: Structure },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureFile {
    pub sections: Vec<Section>,
}

impl StructureFile {
    pub fn language(&self, name: &str) -> Option<&Language> {
        self.sections.iter().find_map(|s| match s {
            Section::Language { name: n, language } if n == name => Some(language),
            _ => None,
        })
    }

    pub fn structure(&self, name: &str) -> Option<&Structure> {
        self.structures().find(|(n, _)| *n == name).map(|(_, s)| s)
    }

    pub fn structures(&self) -> impl Iterator<Item = (&str, &Structure)> {
        self.sections.iter().filter_map(|s| match s {
            Section::Structure { name, structure, .. } => Some((name.as_str(), structure)),
            _ => None,
        })
    }

    /// Builds a file from named structures, declaring each distinct language once as `L0`, `L1`, ...
    pub fn from_structures<'a>(items: impl IntoIterator<Item = (String, &'a Structure)>) -> Self {
        let mut langs: Vec<Language> = Vec::new();
        let mut structs = Vec::new();
        for (name, s) in items {
            let i = match langs.iter().position(|l| l == s.language()) {
                Some(i) => i,
                None => {
                    langs.push(s.language().clone());
                    langs.len() - 1
                }
            };
            structs.push(Section::Structure { name, over: format!("L{i}"), structure: s.clone() });
        }
        let mut sections: Vec<Section> =
            langs.into_iter().enumerate().map(|(i, language)| Section::Language { name: format!("L{i}"), language }).collect();
        sections.extend(structs);
        StructureFile { sections }
    }
}

enum State {
    Top,
    Lang { name: String, language: Language },
    Struct { name: String, over: String, structure: Option<Structure> },
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>().or_else(|_| err(line, format!("expected {what}, found `{tok}`")))
}

fn parse_ids(text: &str, line: usize, size: usize) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|t| {
            let v = parse_usize(t, line, "a vertex id")?;
            if v >= size {
                return err(line, format!("vertex {v} out of range (structure has {size} vertices)"));
            }
            Ok(v)
        })
        .collect()
}

fn parse_relation_line(rest: &str, s: &mut Structure, line: usize) -> Result<(), ParseError> {
    let (name, body) = rest.split_once(':').ok_or_else(|| ParseError { line, message: "expected `rel NAME: tuples`".into() })?;
    let name = name.trim();
    let r = s.language().rel_index(name).ok_or_else(|| ParseError { line, message: format!("unknown relation `{name}`") })?;
    let arity = s.language().rel(r).arity;
    for t in body.split(';') {
        if t.trim().is_empty() {
            continue;
        }
        let ids = parse_ids(t, line, s.size())?;
        if ids.len() != arity {
            return err(line, format!("relation `{name}` has arity {arity}, tuple `{}` has {} entries", t.trim(), ids.len()));
        }
        s.add_tuple(r, ids).map_err(|e| ParseError { line, message: e.to_string() })?;
    }
    Ok(())
}

fn parse_function_line(rest: &str, s: &mut Structure, line: usize) -> Result<(), ParseError> {
    let (name, body) = rest.split_once(':').ok_or_else(|| ParseError { line, message: "expected `fun NAME: entries`".into() })?;
    let name = name.trim();
    let f = s.language().fun_index(name).ok_or_else(|| ParseError { line, message: format!("unknown function `{name}`") })?;
    let arity = s.language().fun(f).arity;
    for entry in body.split(';') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let bad = || ParseError { line, message: format!("expected `(args) -> {{ids}}`, found `{entry}`") };
        let (args, vals) = entry.split_once("->").ok_or_else(bad)?;
        let args = args.trim().strip_prefix('(').and_then(|a| a.strip_suffix(')')).ok_or_else(bad)?;
        let vals = vals.trim().strip_prefix('{').and_then(|v| v.strip_suffix('}')).ok_or_else(bad)?;
        let args = parse_ids(args, line, s.size())?;
        if args.len() != arity {
            return err(line, format!("function `{name}` has arity {arity}, got {} arguments", args.len()));
        }
        let vals = parse_ids(vals, line, s.size())?;
        s.add_values(f, args, &vals).map_err(|e| ParseError { line, message: e.to_string() })?;
    }
    Ok(())
}

pub fn parse_structure_file(text: &str) -> Result<StructureFile, ParseError> {
    let mut file = StructureFile::default();
    let mut state = State::Top;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        state = match state {
            State::Top => match words.as_slice() {
                ["language", name] => {
                    if file.language(name).is_some() {
                        return err(line, format!("language `{name}` declared twice"));
                    }
                    State::Lang { name: name.to_string(), language: Language::new() }
                }
                ["structure", name, "over", lang] => {
                    if file.structure(name).is_some() {
                        return err(line, format!("structure `{name}` declared twice"));
                    }
                    if file.language(lang).is_none() {
                        return err(line, format!("unknown language `{lang}`"));
                    }
                    State::Struct { name: name.to_string(), over: lang.to_string(), structure: None }
                }
                _ => return err(line, format!("expected `language NAME` or `structure NAME over LANG`, found `{content}`")),
            },
            State::Lang { name, mut language } => match words.as_slice() {
                ["end"] => {
                    file.sections.push(Section::Language { name, language });
                    State::Top
                }
                [kind @ ("rel" | "fun"), sym, arity] => {
                    let arity = parse_usize(arity, line, "an arity")?;
                    let added = if *kind == "rel" { language.add_relation(sym, arity) } else { language.add_function(sym, arity) };
                    added.map_err(|e| ParseError { line, message: e.to_string() })?;
                    State::Lang { name, language }
                }
                _ => return err(line, format!("expected `rel NAME ARITY`, `fun NAME ARITY` or `end`, found `{content}`")),
            },
            State::Struct { name, over, structure } => {
                if words == ["end"] {
                    let structure = match structure {
                        Some(s) => s,
                        None => return err(line, "structure has no `vertices` line"),
                    };
                    file.sections.push(Section::Structure { name, over, structure });
                    State::Top
                } else if words[0] == "vertices" {
                    if structure.is_some() {
                        return err(line, "`vertices` given twice");
                    }
                    if words.len() != 2 {
                        return err(line, "expected `vertices N`");
                    }
                    let n = parse_usize(words[1], line, "a vertex count")?;
                    let lang = file.language(&over).expect("checked at header").clone();
                    State::Struct { name, over, structure: Some(Structure::new(lang, n)) }
                } else if words[0] == "rel" || words[0] == "fun" {
                    let mut s = match structure {
                        Some(s) => s,
                        None => return err(line, "`vertices` must precede relation and function lines"),
                    };
                    let rest = content[3..].trim_start();
                    if words[0] == "rel" {
                        parse_relation_line(rest, &mut s, line)?;
                    } else {
                        parse_function_line(rest, &mut s, line)?;
                    }
                    State::Struct { name, over, structure: Some(s) }
                } else {
                    return err(line, format!("unexpected `{content}` inside structure `{name}`"));
                }
            }
        };
    }
    match state {
        State::Top => Ok(file),
        _ => err(last + 1, "missing `end`"),
    }
}

fn join_ids(ids: impl IntoIterator<Item = usize>) -> String {
    ids.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn serialize_language(name: &str, l: &Language) -> String {
    let mut out = format!("language {name}\n");
    for sym in l.symbols() {
        let kw = if sym.kind == SymbolKind::Relation { "rel" } else { "fun" };
        let _ = writeln!(out, "{kw} {} {}", sym.name, sym.arity);
    }
    out.push_str("end\n");
    out
}

pub fn serialize_structure(name: &str, over: &str, s: &Structure) -> String {
    let mut out = format!("structure {name} over {over}\nvertices {}\n", s.size());
    let l = s.language();
    for sym in l.symbols() {
        if sym.kind == SymbolKind::Relation {
            let r = l.rel_index(&sym.name).expect("declared");
            if s.tuples(r).is_empty() {
                continue;
            }
            let body: Vec<String> = s.tuples(r).iter().map(|t| join_ids(t.iter().copied())).collect();
            let _ = writeln!(out, "rel {}: {}", sym.name, body.join("; "));
        } else {
            let f = l.fun_index(&sym.name).expect("declared");
            let body: Vec<String> = s
                .entries(f)
                .iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(a, v)| format!("({}) -> {{{}}}", join_ids(a.iter().copied()), join_ids(v.iter().copied())))
                .collect();
            if !body.is_empty() {
                let _ = writeln!(out, "fun {}: {}", sym.name, body.join("; "));
            }
        }
    }
    out.push_str("end\n");
    out
}

pub fn serialize_structure_file(f: &StructureFile) -> String {
    let parts: Vec<String> = f
        .sections
        .iter()
        .map(|s| match s {
            Section::Language { name, language } => serialize_language(name, language),
            Section::Structure { name, over, structure } => serialize_structure(name, over, structure),
        })
        .collect();
    parts.join("\n")
}

/// A lone structure as a complete file, its language named `L0`.
pub fn structure_to_file(name: &str, s: &Structure) -> String {
    serialize_structure_file(&StructureFile::from_structures([(name.to_string(), s)]))
}
