//! Problem files.
//!
//! ```text
//! # Z/4 over Z/2 on an ordinary elliptic curve
//! group H = C2
//! group G = perm 4; r = (1 2 3 4)
//! extension {
//!   source = G
//!   images = [g1]
//! }
//! cover { group = H; p = 2; g_X = 1; delta = ordinary }
//! options { seed = 7 }
//! ```
//!
//! `group` lines name groups (a library name or a `perm` spec). The
//! extension is one of: `source` + `images` (generator images as words in
//! the target), `kernel` + `action` (a semidirect product, one list of
//! kernel-generator words per target generator), or a `module { ... }` block
//! with an optional `cocycle { ... }` block. `target` defaults to the
//! cover's group and vice versa. Words use `g1, g2, ...` or perm generator
//! names, `*` for products, `^k` for powers and `e` for the identity.
//! A cover of the trivial group may give `gamma` (the Hasse-Witt invariant)
//! in place of `g_X` and `delta`.

use std::collections::BTreeMap;

use crate::cohomology::{extension_from_cocycle, TwoCocycle};
use crate::embedding::EmbeddingProblem;
use crate::error::{Error, Result};
use crate::group::{library, parse_group, semidirect_product, Automorphism, ExtensionData, FiniteGroup, GroupHom};
use crate::hasse_witt::CoverDatum;
use crate::modrep::GModule;
use crate::settings::Settings;

#[derive(Clone, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
enum Value {
    Atom(String),
    List(Vec<Value>),
    /// Raw lines of a nested block, with the position of its first line.
    Block(String, Pos),
}

#[derive(Clone, Debug)]
struct Entry {
    key: String,
    value: Value,
    pos: Pos,
}

#[derive(Clone, Debug)]
struct Section {
    name: String,
    entries: Vec<Entry>,
    pos: Pos,
}

#[derive(Clone, Debug)]
struct NamedGroup {
    group: FiniteGroup,
    /// Generator names beyond the default `g<i>`.
    names: Vec<String>,
}

struct Scanner {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn new(src: &str) -> Scanner {
        Scanner { chars: src.chars().collect(), i: 0, line: 1, col: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col, msg)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_comment(&mut self) {
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    /// Skips blanks and comments; newlines too when `newlines` is set.
    fn skip_space(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            if c == '#' {
                self.skip_comment();
            } else if c == '\n' && !newlines {
                break;
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> Result<String> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return Err(self.err(match self.peek() {
                Some(c) => format!("expected a name, found {c:?}"),
                None => "expected a name, found end of file".to_string(),
            }));
        }
        Ok(s)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.err(format!("expected {want:?}, found end of file"))),
        }
    }

    fn rest_of_line(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c == '\n' || c == '#' {
                break;
            }
            s.push(c);
            self.bump();
        }
        s.trim().to_string()
    }

    /// Raw text up to the matching `}`.
    fn raw_block(&mut self) -> Result<(String, Pos)> {
        let start = self.pos();
        self.expect('{')?;
        let mut depth = 1;
        let mut s = String::new();
        loop {
            let c = self.bump().ok_or_else(|| Error::parse(start.line, start.col, "unclosed `{`"))?;
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            s.push(c);
        }
        Ok((s, start))
    }

    fn value(&mut self) -> Result<Value> {
        self.skip_space(false);
        match self.peek() {
            Some('[') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_space(true);
                    match self.peek() {
                        Some(']') => {
                            self.bump();
                            break;
                        }
                        Some(',') => {
                            self.bump();
                        }
                        Some(_) => items.push(self.value()?),
                        None => return Err(self.err("unclosed `[`")),
                    }
                }
                Ok(Value::List(items))
            }
            Some('{') => {
                let (raw, pos) = self.raw_block()?;
                Ok(Value::Block(raw, pos))
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if matches!(c, ';' | '\n' | '}' | ']' | ',' | '#') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                let s = s.trim().to_string();
                if s.is_empty() {
                    return Err(self.err("missing value"));
                }
                Ok(Value::Atom(s))
            }
            None => Err(self.err("missing value")),
        }
    }

    fn section_body(&mut self) -> Result<Vec<Entry>> {
        self.expect('{')?;
        let mut entries = Vec::new();
        loop {
            self.skip_space(true);
            match self.peek() {
                Some('}') => {
                    self.bump();
                    return Ok(entries);
                }
                Some(';') => {
                    self.bump();
                }
                None => return Err(self.err("unclosed section")),
                Some(_) => {
                    let pos = self.pos();
                    let key = self.ident()?;
                    self.skip_space(false);
                    let value = if self.peek() == Some('{') {
                        self.value()?
                    } else {
                        self.expect('=')?;
                        self.value()?
                    };
                    entries.push(Entry { key, value, pos });
                }
            }
        }
    }
}

fn parse_sections(src: &str) -> Result<(Vec<(String, String, Pos)>, Vec<Section>)> {
    let mut sc = Scanner::new(src);
    let mut groups = Vec::new();
    let mut sections = Vec::new();
    loop {
        sc.skip_space(true);
        if sc.peek().is_none() {
            break;
        }
        let pos = sc.pos();
        let word = sc.ident()?;
        sc.skip_space(false);
        if word == "group" {
            let name = sc.ident()?;
            sc.skip_space(false);
            sc.expect('=')?;
            let spec_pos = sc.pos();
            let spec = sc.rest_of_line();
            if spec.is_empty() {
                return Err(Error::parse(spec_pos.line, spec_pos.col, "missing group description"));
            }
            groups.push((name, spec, spec_pos));
        } else if matches!(word.as_str(), "extension" | "cover" | "options") {
            let entries = sc.section_body()?;
            if sections.iter().any(|s: &Section| s.name == word) {
                return Err(Error::parse(pos.line, pos.col, format!("duplicate `{word}` section")));
            }
            sections.push(Section { name: word, entries, pos });
        } else {
            return Err(Error::parse(pos.line, pos.col, format!("unknown section `{word}`")));
        }
    }
    Ok((groups, sections))
}

fn at(pos: &Pos, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::parse(pos.line, pos.col, other.to_string()),
    }
}

/// Shifts positions reported inside a nested block to file positions.
fn shift(pos: &Pos, e: Error) -> Error {
    match e {
        Error::Parse { line, col, msg } => Error::parse(pos.line + line - 1, col, msg),
        other => at(pos, other),
    }
}

fn perm_generator_names(spec: &str) -> Vec<String> {
    let Some(rest) = spec.trim().strip_prefix("perm") else {
        return Vec::new();
    };
    rest.split(';')
        .skip(1)
        .filter(|p| !p.trim().is_empty())
        .enumerate()
        .map(|(i, p)| match p.split_once('=') {
            Some((n, _)) => n.trim().to_string(),
            None => format!("g{}", i + 1),
        })
        .collect()
}

fn resolve_group(name: &str, groups: &BTreeMap<String, NamedGroup>, pos: &Pos) -> Result<NamedGroup> {
    if let Some(g) = groups.get(name) {
        return Ok(g.clone());
    }
    library(name).map(|group| NamedGroup { group, names: Vec::new() }).map_err(|e| at(pos, e))
}

/// Evaluates a word such as `a*b^2*g1^-1` in `g`.
fn eval_word(word: &str, g: &NamedGroup, pos: &Pos) -> Result<usize> {
    let grp = &g.group;
    let mut x = 0;
    for factor in word.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::parse(pos.line, pos.col, format!("empty factor in word {word:?}")));
        }
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => {
                let e: i64 = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(pos.line, pos.col, format!("bad exponent in {factor:?}")))?;
                (b.trim(), e)
            }
            None => (factor, 1),
        };
        let elem = if base == "e" || base == "1" {
            0
        } else if let Some(i) = g.names.iter().position(|n| n == base) {
            grp.gens()[i]
        } else if let Some(i) = base.strip_prefix('g').and_then(|d| d.parse::<usize>().ok()) {
            if i == 0 || i > grp.num_gens() {
                return Err(Error::parse(pos.line, pos.col, format!("generator {base} out of range")));
            }
            grp.gens()[i - 1]
        } else {
            return Err(Error::parse(pos.line, pos.col, format!("unknown generator {base:?}")));
        };
        let n = grp.order() as i64;
        let e = exp.rem_euclid(n.max(1));
        x = grp.mul(x, grp.pow(elem, e as u64));
    }
    Ok(x)
}

fn atom(e: &Entry) -> Result<&str> {
    match &e.value {
        Value::Atom(s) => Ok(s),
        _ => Err(Error::parse(e.pos.line, e.pos.col, format!("`{}` needs a plain value", e.key))),
    }
}

fn number<T: std::str::FromStr>(e: &Entry) -> Result<T> {
    atom(e)?
        .parse()
        .map_err(|_| Error::parse(e.pos.line, e.pos.col, format!("`{}` needs a nonnegative integer", e.key)))
}

fn list(e: &Entry) -> Result<&[Value]> {
    match &e.value {
        Value::List(v) => Ok(v),
        _ => Err(Error::parse(e.pos.line, e.pos.col, format!("`{}` needs a list [..]", e.key))),
    }
}

fn find<'a>(s: &'a Section, key: &str) -> Option<&'a Entry> {
    s.entries.iter().find(|e| e.key == key)
}

fn check_keys(s: &Section, allowed: &[&str]) -> Result<()> {
    for e in &s.entries {
        if !allowed.contains(&e.key.as_str()) {
            return Err(Error::parse(e.pos.line, e.pos.col, format!("unknown key `{}` in `{}`", e.key, s.name)));
        }
    }
    Ok(())
}

/// A parsed problem, with the settings from its `options` section.
#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub problem: EmbeddingProblem,
    pub settings: Settings,
}

/// Parses a problem file; `base` supplies settings not set by the file.
pub fn parse_problem(src: &str, base: &Settings) -> Result<ProblemFile> {
    let (group_lines, sections) = parse_sections(src)?;
    let mut groups = BTreeMap::new();
    for (name, spec, pos) in group_lines {
        let group = parse_group(&spec).map_err(|e| at(&pos, e))?;
        let names = perm_generator_names(&spec);
        groups.insert(name.clone(), NamedGroup { group: group.named(name), names });
    }
    let section = |n: &str| sections.iter().find(|s| s.name == n);
    let mut settings = base.clone();
    if let Some(opts) = section("options") {
        check_keys(opts, &["seed", "field_cap", "group_cap", "h1_cap", "h2_cap", "meataxe_budget"])?;
        for e in &opts.entries {
            match e.key.as_str() {
                "seed" => settings.seed = number(e)?,
                "field_cap" => settings.field_cap = number(e)?,
                "group_cap" => settings.group_cap = number(e)?,
                "h1_cap" => settings.h1_cap = number(e)?,
                "h2_cap" => settings.h2_cap = number(e)?,
                _ => settings.meataxe_budget = number(e)?,
            }
        }
    }
    let cover_sec = section("cover").ok_or_else(|| Error::parse(1, 1, "missing `cover` section"))?;
    check_keys(cover_sec, &["group", "p", "g_X", "delta", "gamma"])?;
    let ext_sec = section("extension");
    let cover_group = match find(cover_sec, "group") {
        Some(e) => Some(resolve_group(atom(e)?, &groups, &e.pos)?),
        None => None,
    };
    let target = match ext_sec.and_then(|s| find(s, "target")) {
        Some(e) => Some(resolve_group(atom(e)?, &groups, &e.pos)?),
        None => None,
    };
    let h = match (cover_group, target) {
        (Some(a), Some(b)) => {
            if a.group != b.group {
                return Err(Error::parse(
                    cover_sec.pos.line,
                    cover_sec.pos.col,
                    "cover group differs from the extension target",
                ));
            }
            a
        }
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            return Err(Error::parse(cover_sec.pos.line, cover_sec.pos.col, "cover needs `group`"));
        }
    };
    let p_entry =
        find(cover_sec, "p").ok_or_else(|| Error::parse(cover_sec.pos.line, cover_sec.pos.col, "cover needs `p`"))?;
    let p: u32 = number(p_entry)?;
    if !crate::field::is_prime(p as u64) {
        return Err(Error::parse(p_entry.pos.line, p_entry.pos.col, format!("{p} is not prime")));
    }
    let cover = match find(cover_sec, "gamma") {
        Some(gamma_entry) => {
            if h.group.order() != 1 {
                return Err(Error::parse(gamma_entry.pos.line, gamma_entry.pos.col, "`gamma` needs the trivial group"));
            }
            if let Some(e) = find(cover_sec, "delta").or_else(|| find(cover_sec, "g_X")) {
                return Err(Error::parse(e.pos.line, e.pos.col, "give either `gamma` or `g_X` with `delta`"));
            }
            let gamma: u64 = number(gamma_entry)?;
            CoverDatum::from_gamma(p, gamma, &settings).map_err(|e| at(&gamma_entry.pos, e))?
        }
        None => {
            let g_entry = find(cover_sec, "g_X")
                .ok_or_else(|| Error::parse(cover_sec.pos.line, cover_sec.pos.col, "cover needs `g_X`"))?;
            let g_x: u64 = number(g_entry)?;
            let d_entry = find(cover_sec, "delta")
                .ok_or_else(|| Error::parse(cover_sec.pos.line, cover_sec.pos.col, "cover needs `delta`"))?;
            match &d_entry.value {
                Value::Atom(a) if a == "ordinary" => {
                    CoverDatum::ordinary(&h.group, p, g_x, &settings).map_err(|e| at(&d_entry.pos, e))?
                }
                Value::List(items) => {
                    let mut delta = Vec::with_capacity(items.len());
                    for item in items {
                        match item {
                            Value::Atom(a) => delta.push(a.parse::<i64>().map_err(|_| {
                                Error::parse(d_entry.pos.line, d_entry.pos.col, format!("bad coefficient {a:?}"))
                            })?),
                            _ => {
                                return Err(Error::parse(
                                    d_entry.pos.line,
                                    d_entry.pos.col,
                                    "coefficients must be integers",
                                ))
                            }
                        }
                    }
                    CoverDatum::user_supplied(&h.group, p, g_x, delta, &settings).map_err(|e| at(&d_entry.pos, e))?
                }
                _ => return Err(Error::parse(d_entry.pos.line, d_entry.pos.col, "`delta` is `ordinary` or a list")),
            }
        }
    };
    let extension = match ext_sec {
        None => return Err(Error::parse(1, 1, "missing `extension` section")),
        Some(s) => parse_extension(s, &h, &groups, &settings)?,
    };
    let problem = EmbeddingProblem::new(cover, extension).map_err(|e| at(&ext_sec.unwrap().pos, e))?;
    Ok(ProblemFile { problem, settings })
}

fn parse_extension(
    s: &Section,
    h: &NamedGroup,
    groups: &BTreeMap<String, NamedGroup>,
    settings: &Settings,
) -> Result<ExtensionData> {
    check_keys(s, &["target", "source", "images", "kernel", "action", "module", "cocycle"])?;
    if let Some(src) = find(s, "source") {
        let g = resolve_group(atom(src)?, groups, &src.pos)?;
        let img = find(s, "images").ok_or_else(|| Error::parse(s.pos.line, s.pos.col, "`source` needs `images`"))?;
        let words = list(img)?;
        let images = words
            .iter()
            .map(|w| match w {
                Value::Atom(a) => eval_word(a, h, &img.pos),
                _ => Err(Error::parse(img.pos.line, img.pos.col, "images are words")),
            })
            .collect::<Result<Vec<_>>>()?;
        let q = GroupHom::from_gen_images(&g.group, &h.group, &images).map_err(|e| at(&img.pos, e))?;
        return ExtensionData::from_epimorphism(q).map_err(|e| at(&img.pos, e));
    }
    if let Some(k) = find(s, "kernel") {
        let kg = resolve_group(atom(k)?, groups, &k.pos)?;
        let act = find(s, "action").ok_or_else(|| Error::parse(s.pos.line, s.pos.col, "`kernel` needs `action`"))?;
        let per_gen = list(act)?;
        let mut action: Vec<Automorphism> = Vec::with_capacity(per_gen.len());
        for entry in per_gen {
            let Value::List(words) = entry else {
                return Err(Error::parse(act.pos.line, act.pos.col, "action is a list of lists of words"));
            };
            let images = words
                .iter()
                .map(|w| match w {
                    Value::Atom(a) => eval_word(a, &kg, &act.pos),
                    _ => Err(Error::parse(act.pos.line, act.pos.col, "action images are words")),
                })
                .collect::<Result<Vec<_>>>()?;
            let phi = GroupHom::from_gen_images(&kg.group, &kg.group, &images).map_err(|e| at(&act.pos, e))?;
            if !phi.is_injective() {
                return Err(Error::parse(act.pos.line, act.pos.col, "action images do not define an automorphism"));
            }
            action.push(phi.images().to_vec());
        }
        let (_, _, proj) = semidirect_product(&kg.group, &h.group, &action).map_err(|e| at(&act.pos, e))?;
        return ExtensionData::from_epimorphism(proj).map_err(|e| at(&act.pos, e));
    }
    if let Some(m) = find(s, "module") {
        let Value::Block(raw, pos) = &m.value else {
            return Err(Error::parse(m.pos.line, m.pos.col, "`module` needs a { ... } block"));
        };
        let module = GModule::from_text(&h.group, raw).map_err(|e| shift(pos, e))?;
        let cocycle = match find(s, "cocycle") {
            Some(c) => {
                let Value::Block(raw, pos) = &c.value else {
                    return Err(Error::parse(c.pos.line, c.pos.col, "`cocycle` needs a { ... } block"));
                };
                TwoCocycle::from_text(&module, raw).map_err(|e| shift(pos, e))?
            }
            None => TwoCocycle::zero(&module),
        };
        return extension_from_cocycle(&cocycle, settings.group_cap).map_err(|e| at(&m.pos, e));
    }
    Err(Error::parse(s.pos.line, s.pos.col, "extension needs `source`, `kernel` or `module`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Settings {
        Settings::default()
    }

    #[test]
    fn map_extension() {
        let src = "# Z/4 over Z/2\ngroup H = C2\ngroup G = perm 4; r = (1 2 3 4)\nextension {\n  source = G\n  images = [g1]\n}\ncover { group = H; p = 2; g_X = 1; delta = ordinary }\noptions { seed = 9 }\n";
        let pf = parse_problem(src, &s()).unwrap();
        assert_eq!(pf.settings.seed, 9);
        assert_eq!(pf.problem.extension.g.order(), 4);
        assert_eq!(pf.problem.extension.kernel.order(), 2);
        assert_eq!(pf.problem.cover.delta, vec![0]);
    }

    #[test]
    fn semidirect_and_module_forms() {
        let src = "group P = V4\nextension { kernel = P; action = [[g2, g1*g2]] }\ncover { group = C3; p = 2; g_X = 2; delta = ordinary }\n";
        let pf = parse_problem(src, &s()).unwrap();
        assert_eq!(pf.problem.extension.g.order(), 12);
        let src = "extension {\n  module {\n    module dim=1 field=2^1\n    gen 1\n    1\n  }\n  cocycle {\n    f(1,1) = 1\n  }\n}\ncover { group = C2; p = 2; g_X = 2; delta = [1] }\n";
        let pf = parse_problem(src, &s()).unwrap();
        assert_eq!(pf.problem.extension.g.order_census(), vec![1, 2, 4, 4]);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_problem("cover { group = C2; p = 4; g_X = 1; delta = ordinary }\n", &s()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, col: 21, .. }), "{err}");
        let err = parse_problem("group H = C2\n\nwidget { }\n", &s()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, col: 1, .. }), "{err}");
        let err = parse_problem("cover { group = C2; p = 2; g_X = 1; delta = ordinary", &s()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let src = "extension { source = C4; images = [g7] }\ncover { group = C2; p = 2; g_X = 1; delta = ordinary }\n";
        let err = parse_problem(src, &s()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }
}
