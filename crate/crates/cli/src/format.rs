//! The structure file format.
//!
//! ```text
//! # comments run to the end of the line
//! hyperfield K
//! elements: 0 1
//! one: 1
//! add: 1 1 -> 0 1
//! ```
//!
//! The first element is the additive zero. Sums with zero default to
//! `x + 0 = 0 + x = {x}`; every other sum must be listed. In hyperrings and
//! hyperfields, products with `0` and with `one` default to the obvious
//! values and every other product must be listed. A file may instead hold a
//! single `builtin: NAME` or `construct: KIND ARGS` directive.

use std::fmt::Write as _;

use hyperkit::catalog::{builtin, Builtin, SymbolicHyperfield};
use hyperkit::constructions::{layering, product, quotient, wedge_sum};
use hyperkit::kernel::{ElemSet, FiniteHyperStructure};
use hyperkit::ordered::OrderedIndex;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Build {
        line: usize,
        #[source]
        source: hyperkit::Error,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Hypergroup,
    Hyperring,
    Hyperfield,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Hypergroup => "hypergroup",
            Kind::Hyperring => "hyperring",
            Kind::Hyperfield => "hyperfield",
        }
    }

    fn from_keyword(s: &str) -> Option<Kind> {
        match s {
            "hypergroup" => Some(Kind::Hypergroup),
            "hyperring" => Some(Kind::Hyperring),
            "hyperfield" => Some(Kind::Hyperfield),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Body {
    Finite(FiniteHyperStructure),
    Symbolic(SymbolicHyperfield),
}

/// A parsed structure file, or a resolved built-in.
#[derive(Debug, Clone)]
pub struct Structure {
    pub kind: Kind,
    pub name: String,
    pub body: Body,
}

impl Structure {
    pub fn finite(kind: Kind, name: impl Into<String>, t: FiniteHyperStructure) -> Structure {
        Structure {
            kind,
            name: name.into(),
            body: Body::Finite(t),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteHyperStructure> {
        match &self.body {
            Body::Finite(t) => Some(t),
            Body::Symbolic(_) => None,
        }
    }
}

/// Resolve a catalog name.
pub fn resolve_builtin(name: &str) -> hyperkit::Result<Structure> {
    Ok(match builtin(name)? {
        Builtin::Finite(t) => Structure::finite(Kind::Hyperfield, name, t),
        Builtin::Symbolic(f) => Structure {
            kind: Kind::Hyperfield,
            name: name.to_string(),
            body: Body::Symbolic(f),
        },
    })
}

/// Parse `{a, b, c}` (braces optional) against the element names of `t`.
pub fn parse_subset(t: &FiniteHyperStructure, text: &str) -> hyperkit::Result<ElemSet> {
    let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
    inner
        .split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| {
            t.index_of(s)
                .ok_or_else(|| hyperkit::Error::NotFound(format!("no element {s:?}")))
        })
        .collect()
}

/// Apply a construction to already resolved operands. `args` holds the
/// trailing non-structure arguments (the group for `layer`, the subgroup
/// for `quotient`).
pub fn construct(
    kind: &str,
    operands: &[Structure],
    args: &[String],
) -> hyperkit::Result<Structure> {
    let finite = |s: &Structure| {
        s.as_finite()
            .cloned()
            .ok_or_else(|| hyperkit::Error::InvalidArgument(format!("{} is not finite", s.name)))
    };
    let names: Vec<&str> = operands.iter().map(|s| s.name.as_str()).collect();
    let arity = |k: usize| {
        if operands.len() == k {
            Ok(())
        } else {
            Err(hyperkit::Error::InvalidArgument(format!(
                "{kind} takes {k} structure(s)"
            )))
        }
    };
    match kind {
        "product" => {
            arity(2)?;
            let t = product(&finite(&operands[0])?, &finite(&operands[1])?)?;
            let k = if t.has_mul() {
                Kind::Hyperring
            } else {
                Kind::Hypergroup
            };
            Ok(Structure::finite(
                k,
                format!("{}x{}", names[0], names[1]),
                t,
            ))
        }
        "wedge" => {
            if operands.is_empty() {
                return Err(hyperkit::Error::InvalidArgument(
                    "wedge needs at least one layer".into(),
                ));
            }
            let layers: Vec<FiniteHyperStructure> = operands
                .iter()
                .map(|s| finite(s).map(|t| t.additive()))
                .collect::<hyperkit::Result<_>>()?;
            Ok(Structure::finite(
                Kind::Hypergroup,
                format!("wedge({})", names.join(",")),
                wedge_sum(&layers)?,
            ))
        }
        "layer" => {
            arity(1)?;
            let g: OrderedIndex = args
                .first()
                .ok_or_else(|| hyperkit::Error::InvalidArgument("layer needs a group".into()))?
                .parse()?;
            let f = layering(
                names[0],
                &finite(&operands[0])?,
                g,
                hyperkit::catalog::Action::Trivial,
            )?;
            Ok(Structure {
                kind: Kind::Hyperfield,
                name: f.name().to_string(),
                body: Body::Symbolic(f),
            })
        }
        "quotient" => {
            arity(1)?;
            let k = finite(&operands[0])?;
            let u = parse_subset(&k, &args.join(" "))?;
            let name = format!("{}/{}", names[0], args.join(""));
            Ok(Structure::finite(Kind::Hyperfield, name, quotient(&k, u)?))
        }
        _ => Err(hyperkit::Error::InvalidArgument(format!(
            "unknown construction {kind:?}"
        ))),
    }
}

/// Split `construct:` arguments: `quotient K {..}` and `layer M G` take one
/// structure, `product` and `wedge` take only structures.
fn construct_directive(rest: &str) -> hyperkit::Result<Structure> {
    let mut words = rest.split_whitespace();
    let kind = words
        .next()
        .ok_or_else(|| hyperkit::Error::InvalidArgument("construct needs a kind".into()))?;
    let words: Vec<String> = words.map(str::to_string).collect();
    let split = match kind {
        "quotient" | "layer" => 1.min(words.len()),
        _ => words.len(),
    };
    let operands = words[..split]
        .iter()
        .map(|w| resolve_builtin(w))
        .collect::<hyperkit::Result<Vec<_>>>()?;
    construct(kind, &operands, &words[split..])
}

struct Pending {
    kind: Option<Kind>,
    name: String,
    elements: Option<(usize, Vec<String>)>,
    one: Option<(usize, usize)>,
    add: Vec<Option<ElemSet>>,
    mul: Vec<Option<usize>>,
    directive: Option<Structure>,
    saw_table_line: Option<usize>,
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a).trim()
}

/// Parse a structure file.
pub fn parse_structure(text: &str) -> Result<Structure, ParseError> {
    let mut p = Pending {
        kind: None,
        name: String::new(),
        elements: None,
        one: None,
        add: Vec::new(),
        mul: Vec::new(),
        directive: None,
        saw_table_line: None,
    };
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        last_line = line_no;
        if p.directive.is_some() {
            return Err(syntax(
                line_no,
                "nothing may follow a builtin or construct directive",
            ));
        }
        let first = line.split_whitespace().next().unwrap_or_default();
        if let Some(kind) = Kind::from_keyword(first) {
            if p.kind.is_some() || p.saw_table_line.is_some() {
                return Err(syntax(
                    line_no,
                    "the header must be the first line and appear once",
                ));
            }
            p.kind = Some(kind);
            p.name = line[first.len()..].trim().to_string();
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(line_no, format!("expected `key: ...`, found {line:?}")))?;
        let rest = rest.trim();
        match key.trim() {
            "builtin" | "construct" => {
                if p.saw_table_line.is_some() {
                    return Err(syntax(line_no, "a directive cannot be mixed with tables"));
                }
                let built = if key.trim() == "builtin" {
                    resolve_builtin(rest)
                } else {
                    construct_directive(rest)
                }
                .map_err(|source| ParseError::Build {
                    line: line_no,
                    source,
                })?;
                p.directive = Some(built);
            }
            "elements" => {
                if p.elements.is_some() {
                    return Err(syntax(line_no, "duplicate elements line"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(syntax(line_no, "no elements"));
                }
                for (k, a) in names.iter().enumerate() {
                    if names[..k].contains(a) {
                        return Err(syntax(line_no, format!("duplicate element {a:?}")));
                    }
                    if a == "->" {
                        return Err(syntax(line_no, "`->` is not an element name"));
                    }
                }
                let n = names.len();
                p.add = vec![None; n * n];
                p.mul = vec![None; n * n];
                p.elements = Some((line_no, names));
                p.saw_table_line = Some(line_no);
            }
            "one" => {
                let idx = lookup(&p, line_no, rest)?;
                if p.one.is_some() {
                    return Err(syntax(line_no, "duplicate one line"));
                }
                p.one = Some((line_no, idx));
            }
            "add" | "mul" => {
                let is_add = key.trim() == "add";
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line_no, "expected `x y -> ...`"))?;
                let operands: Vec<&str> = lhs.split_whitespace().collect();
                let [x, y] = operands[..] else {
                    return Err(syntax(line_no, "expected exactly two operands"));
                };
                let (x, y) = (lookup(&p, line_no, x)?, lookup(&p, line_no, y)?);
                let outputs = rhs
                    .split_whitespace()
                    .map(|e| lookup(&p, line_no, e))
                    .collect::<Result<Vec<_>, _>>()?;
                let n = p.elements.as_ref().map_or(0, |e| e.1.len());
                let slot = x * n + y;
                if is_add {
                    if outputs.is_empty() {
                        return Err(syntax(line_no, "empty sum"));
                    }
                    if p.add[slot].is_some() {
                        return Err(syntax(line_no, "duplicate add entry"));
                    }
                    p.add[slot] = Some(ElemSet::from_indices(outputs));
                } else {
                    if matches!(p.kind, Some(Kind::Hypergroup)) {
                        return Err(syntax(line_no, "a hypergroup has no multiplication"));
                    }
                    let [z] = outputs[..] else {
                        return Err(syntax(line_no, "a product is a single element"));
                    };
                    if p.mul[slot].is_some() {
                        return Err(syntax(line_no, "duplicate mul entry"));
                    }
                    p.mul[slot] = Some(z);
                }
            }
            other => return Err(syntax(line_no, format!("unknown key {other:?}"))),
        }
    }
    if let Some(mut s) = p.directive {
        if let Some(kind) = p.kind {
            s.kind = kind;
        }
        if !p.name.is_empty() {
            s.name = p.name;
        }
        return Ok(s);
    }
    let kind = p
        .kind
        .ok_or_else(|| syntax(1, "missing header (hypergroup, hyperring or hyperfield)"))?;
    let (el_line, names) = p
        .elements
        .ok_or_else(|| syntax(last_line.max(1), "missing elements line"))?;
    let n = names.len();
    let mut add = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let s = match p.add[x * n + y] {
                Some(s) => s,
                None if x == 0 => ElemSet::singleton(y),
                None if y == 0 => ElemSet::singleton(x),
                None => {
                    return Err(syntax(
                        el_line,
                        format!("missing add entry {} {}", names[x], names[y]),
                    ));
                }
            };
            add.push(s);
        }
    }
    let build = |source| ParseError::Build {
        line: el_line,
        source,
    };
    let t = FiniteHyperStructure::new(names.clone(), add).map_err(build)?;
    let t = match kind {
        Kind::Hypergroup => {
            if let Some((line, _)) = p.one {
                return Err(syntax(line, "a hypergroup has no one"));
            }
            t
        }
        Kind::Hyperring | Kind::Hyperfield => {
            if n < 2 && p.one.is_none() {
                return Err(syntax(el_line, "declare `one:` for a one-element ring"));
            }
            let one = p.one.map_or(1, |o| o.1);
            let mut mul = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    let z = match p.mul[x * n + y] {
                        Some(z) => z,
                        None if x == 0 || y == 0 => 0,
                        None if x == one => y,
                        None if y == one => x,
                        None => {
                            return Err(syntax(
                                el_line,
                                format!("missing mul entry {} {}", names[x], names[y]),
                            ));
                        }
                    };
                    mul.push(z);
                }
            }
            t.with_multiplication(mul, one).map_err(build)?
        }
    };
    Ok(Structure::finite(kind, p.name, t))
}

fn lookup(p: &Pending, line: usize, token: &str) -> Result<usize, ParseError> {
    let (_, names) = p
        .elements
        .as_ref()
        .ok_or_else(|| syntax(line, "the elements line must come first"))?;
    names
        .iter()
        .position(|a| a == token)
        .ok_or_else(|| syntax(line, format!("unknown element {token:?}")))
}

/// Write the canonical file of a finite structure: every sum of nonzero
/// elements, and every product of elements other than `0` and `one`.
pub fn serialize(kind: Kind, name: &str, t: &FiniteHyperStructure) -> String {
    let mut out = String::new();
    let n = t.n();
    let _ = writeln!(out, "{} {}", kind.keyword(), name);
    let _ = writeln!(out, "elements: {}", t.names().join(" "));
    let ring = kind != Kind::Hypergroup && t.has_mul();
    if ring {
        let _ = writeln!(out, "one: {}", t.name(t.one().expect("has mul")));
    }
    for x in 1..n {
        for y in 1..n {
            let s: Vec<&str> = t.add(x, y).iter().map(|z| t.name(z)).collect();
            let _ = writeln!(out, "add: {} {} -> {}", t.name(x), t.name(y), s.join(" "));
        }
    }
    if ring {
        let one = t.one().expect("has mul");
        for x in (1..n).filter(|&x| x != one) {
            for y in (1..n).filter(|&y| y != one) {
                let _ = writeln!(
                    out,
                    "mul: {} {} -> {}",
                    t.name(x),
                    t.name(y),
                    t.name(t.mul(x, y))
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperkit::catalog::{krasner, sign};

    #[test]
    fn krasner_file() {
        let s = parse_structure("hyperfield K\nelements: 0 1\nadd: 1 1 -> 0 1\n").unwrap();
        assert_eq!(s.kind, Kind::Hyperfield);
        assert_eq!(s.name, "K");
        assert!(s.as_finite().unwrap() == &krasner());
    }

    #[test]
    fn missing_sum() {
        let e = parse_structure("hyperfield K\nelements: 0 1\n").unwrap_err();
        assert_eq!(e, syntax(2, "missing add entry 1 1"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("hypergroup H\nelements: 0 1\n\nadd: 1 2 -> 0\n", 4),
            ("hypergroup H\nelements: 0 1\nadd: 1 1 ->\n", 3),
            (
                "hypergroup H\nelements: 0 1\nadd: 1 1 -> 0\nadd: 1 1 -> 1\n",
                4,
            ),
            (
                "hypergroup H\nelements: 0 1\nadd: 1 1 -> 0\nmul: 1 1 -> 1\n",
                4,
            ),
            ("# c\nhyperfield F\nelements: 0 0\n", 3),
            ("hyperfield F\nwhat\n", 2),
        ];
        for (text, line) in cases {
            match parse_structure(text).unwrap_err() {
                ParseError::Syntax { line: l, .. } | ParseError::Build { line: l, .. } => {
                    assert_eq!(l, line, "{text}")
                }
            }
        }
    }

    #[test]
    fn quotient_directive() {
        let s = parse_structure("construct: quotient GF(5) {1,4}").unwrap();
        let t = s.as_finite().unwrap();
        assert_eq!(t.n(), 3);
        assert!(t.check_hyperfield().unwrap().passed);
    }

    #[test]
    fn builtin_directive() {
        let s = parse_structure("hyperfield sign\nbuiltin: S\n").unwrap();
        assert_eq!(s.name, "sign");
        assert!(s.as_finite().unwrap() == &sign());
        assert!(matches!(
            parse_structure("builtin: layer(S,Q)").unwrap().body,
            Body::Symbolic(_)
        ));
        assert!(matches!(
            parse_structure("builtin: nope"),
            Err(ParseError::Build { line: 1, .. })
        ));
    }

    #[test]
    fn skew_tables_are_kept() {
        let s = parse_structure("hypergroup H\nelements: 0 a b\nadd: a a -> b\nadd: a b -> 0\nadd: b a -> a b\nadd: b b -> a\n")
            .unwrap();
        let t = s.as_finite().unwrap();
        assert_ne!(t.add(1, 2), t.add(2, 1));
    }
}
