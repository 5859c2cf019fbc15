//! Background-knowledge manifests: a small line-based format that selects
//! primitives from the catalog and mints library-local constants.
//!
//! ```text
//! # comment
//! domain dates
//! include group:dates
//! include prim:reverse
//! exclude prim:reverse
//! const dash text "-"
//! const five int 5
//! const sep char '/'
//! ```

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use sha2::{Digest, Sha256};

use crate::catalog::{hex, Catalog};
use crate::term::{Group, Prim, PrimRef, Ty, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    IncludeGroup(String),
    IncludePrim(String),
    ExcludePrim(String),
    ConstText(String, String),
    ConstInt(String, i64),
    ConstChar(String, char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub name: String,
    pub directives: Vec<Directive>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DsbkError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("unknown primitive `{0}`")]
    UnknownPrim(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
}

/// Name given to manifests without a `domain` line.
pub const DEFAULT_MANIFEST_NAME: &str = "custom";

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn unescape(body: &str) -> Result<String, String> {
    let mut out = String::new();
    let mut cs = body.chars();
    while let Some(c) = cs.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match cs.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('\\') => out.push('\\'),
            Some('"') => out.push('"'),
            Some('\'') => out.push('\''),
            other => return Err(format!("bad escape `\\{}`", other.unwrap_or(' '))),
        }
    }
    Ok(out)
}

fn quoted(lit: &str, q: char) -> Result<String, String> {
    lit.strip_prefix(q)
        .and_then(|s| s.strip_suffix(q))
        .filter(|_| lit.len() >= 2)
        .ok_or_else(|| format!("literal must be quoted with {q}"))
        .and_then(unescape)
}

fn escape(s: &str, q: char) -> String {
    let mut out = String::new();
    for c in s.chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\\' => out.push_str("\\\\"),
            c if c == q => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out
}

fn parse_const(rest: &str) -> Result<Directive, String> {
    let mut parts = rest.splitn(3, char::is_whitespace);
    let name = parts.next().unwrap_or("");
    let ty = parts.next().unwrap_or("");
    let lit = parts.next().unwrap_or("").trim();
    if !is_ident(name) {
        return Err(format!("invalid constant name `{name}`"));
    }
    let name = name.to_string();
    match ty {
        "text" => Ok(Directive::ConstText(name, quoted(lit, '"')?)),
        "int" => lit
            .parse()
            .map(|v| Directive::ConstInt(name, v))
            .map_err(|_| format!("invalid integer `{lit}`")),
        "char" => {
            let s = quoted(lit, '\'')?;
            let mut cs = s.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => Ok(Directive::ConstChar(name, c)),
                _ => Err("char literal must hold one character".to_string()),
            }
        }
        "" => Err("missing constant type".to_string()),
        other => Err(format!("unknown constant type `{other}`")),
    }
}

fn parse_line(line: &str) -> Result<Option<Directive>, String> {
    let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
    let rest = rest.trim();
    let target = |rest: &str| -> Result<(String, String), String> {
        let (kind, id) = rest
            .split_once(':')
            .ok_or_else(|| format!("expected group:<name> or prim:<id>, got `{rest}`"))?;
        if id.is_empty() || id.contains(char::is_whitespace) {
            return Err(format!("invalid name `{id}`"));
        }
        Ok((kind.to_string(), id.to_string()))
    };
    match kw {
        "include" => match target(rest)? {
            (k, g) if k == "group" => Ok(Some(Directive::IncludeGroup(g))),
            (k, p) if k == "prim" => Ok(Some(Directive::IncludePrim(p))),
            (k, _) => Err(format!("unknown include kind `{k}`")),
        },
        "exclude" => match target(rest)? {
            (k, p) if k == "prim" => Ok(Some(Directive::ExcludePrim(p))),
            (k, _) => Err(format!("cannot exclude `{k}`")),
        },
        "const" => parse_const(rest).map(Some),
        other => Err(format!("unknown directive `{other}`")),
    }
}

/// Parses manifest text. Line numbers in errors are 1-based.
pub fn parse_manifest(text: &str) -> Result<Manifest, DsbkError> {
    let mut name: Option<String> = None;
    let mut directives = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |reason: String| DsbkError::Parse {
            line: i + 1,
            reason,
        };
        if let Some(rest) = line.strip_prefix("domain") {
            if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                return Err(err(format!("unknown directive `{line}`")));
            }
            let n = rest.trim();
            if n.is_empty() || n.contains(char::is_whitespace) {
                return Err(err("domain needs a single name".into()));
            }
            if name.is_some() {
                return Err(err("duplicate domain line".into()));
            }
            name = Some(n.to_string());
            continue;
        }
        if let Some(d) = parse_line(line).map_err(err)? {
            directives.push(d);
        }
    }
    Ok(Manifest {
        name: name.unwrap_or_else(|| DEFAULT_MANIFEST_NAME.to_string()),
        directives,
    })
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Directive::IncludeGroup(g) => write!(f, "include group:{g}"),
            Directive::IncludePrim(p) => write!(f, "include prim:{p}"),
            Directive::ExcludePrim(p) => write!(f, "exclude prim:{p}"),
            Directive::ConstText(n, s) => write!(f, "const {n} text \"{}\"", escape(s, '"')),
            Directive::ConstInt(n, v) => write!(f, "const {n} int {v}"),
            Directive::ConstChar(n, c) => {
                write!(f, "const {n} char '{}'", escape(&c.to_string(), '\''))
            }
        }
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.name)?;
        for d in &self.directives {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

/// An immutable primitive set; its size is the breadth.
#[derive(Clone)]
pub struct Library {
    name: String,
    prims: Arc<[PrimRef]>,
    fingerprint: String,
}

impl Library {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prims(&self) -> &[PrimRef] {
        &self.prims
    }

    pub fn breadth(&self) -> usize {
        self.prims.len()
    }

    /// Content hash over the catalog fingerprint and the resolved prims.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.prims.iter().map(|p| p.id.as_str())
    }

    /// Builds a library straight from primitives, deduplicating by id.
    /// Used for toy libraries in tests and benches.
    pub fn from_prims(name: &str, prims: impl IntoIterator<Item = PrimRef>) -> Library {
        let mut seen = HashSet::new();
        let prims: Vec<PrimRef> = prims
            .into_iter()
            .filter(|p| seen.insert(p.id.clone()))
            .collect();
        let mut h = Sha256::new();
        h.update(name.as_bytes());
        for p in &prims {
            h.update(p.id.as_bytes());
            h.update([0]);
            h.update(p.ty.to_string().as_bytes());
            h.update([0]);
        }
        Library {
            name: name.to_string(),
            fingerprint: hex(&h.finalize()),
            prims: prims.into(),
        }
    }
}

impl fmt::Debug for Library {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Library")
            .field("name", &self.name)
            .field("breadth", &self.breadth())
            .finish()
    }
}

fn constant(id: &str, ty: Ty, value: Value, doc: String) -> PrimRef {
    PrimRef::new(Prim::constant(id, ty, Group::Local, doc, value))
}

/// Resolves a manifest against the catalog. Directives apply in order,
/// duplicates keep their first position.
pub fn build_library(manifest: &Manifest, catalog: &Catalog) -> Result<Library, DsbkError> {
    let mut prims: Vec<PrimRef> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut consts = String::new();
    fn push(p: PrimRef, prims: &mut Vec<PrimRef>, seen: &mut HashSet<String>) {
        if seen.insert(p.id.clone()) {
            prims.push(p);
        }
    }
    for d in &manifest.directives {
        match d {
            Directive::IncludeGroup(g) => {
                let group: Group = g.parse().map_err(|_| DsbkError::UnknownGroup(g.clone()))?;
                for p in catalog.group(group) {
                    push(p, &mut prims, &mut seen);
                }
            }
            Directive::IncludePrim(id) => {
                let p = catalog
                    .lookup(id)
                    .map_err(|_| DsbkError::UnknownPrim(id.clone()))?;
                push(p.clone(), &mut prims, &mut seen);
            }
            Directive::ExcludePrim(id) => {
                catalog
                    .lookup(id)
                    .map_err(|_| DsbkError::UnknownPrim(id.clone()))?;
                prims.retain(|p| &p.id != id);
                seen.remove(id);
            }
            Directive::ConstText(n, s) => {
                consts.push_str(&format!("{d}\n"));
                let doc = format!("Constant for \"{}\"", escape(s, '"'));
                push(
                    constant(n, Ty::Text, Value::text(s.as_str()), doc),
                    &mut prims,
                    &mut seen,
                );
            }
            Directive::ConstInt(n, v) => {
                consts.push_str(&format!("{d}\n"));
                push(
                    constant(n, Ty::Int, Value::Int(*v), format!("The integer {v}")),
                    &mut prims,
                    &mut seen,
                );
            }
            Directive::ConstChar(n, c) => {
                consts.push_str(&format!("{d}\n"));
                push(
                    constant(n, Ty::Char, Value::Char(*c), format!("The character {c:?}")),
                    &mut prims,
                    &mut seen,
                );
            }
        }
    }
    let mut lib = Library::from_prims(&manifest.name, prims);
    let mut h = Sha256::new();
    h.update(catalog.fingerprint().as_bytes());
    h.update(lib.fingerprint.as_bytes());
    h.update(consts.as_bytes());
    lib.fingerprint = hex(&h.finalize());
    Ok(lib)
}

/// Builtin domain names in report column order.
pub const BUILTIN_DOMAINS: [&str; 9] = [
    "default", "freetext", "dates", "emails", "names", "phones", "times", "units", "all",
];

/// Source text of a bundled manifest.
pub fn builtin_manifest_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "default" => include_str!("../manifests/default.dsbk"),
        "freetext" => include_str!("../manifests/freetext.dsbk"),
        "dates" => include_str!("../manifests/dates.dsbk"),
        "emails" => include_str!("../manifests/emails.dsbk"),
        "names" => include_str!("../manifests/names.dsbk"),
        "phones" => include_str!("../manifests/phones.dsbk"),
        "times" => include_str!("../manifests/times.dsbk"),
        "units" => include_str!("../manifests/units.dsbk"),
        "all" => include_str!("../manifests/all.dsbk"),
        _ => return None,
    })
}

/// One-line description of a builtin domain.
pub fn describe_domain(name: &str) -> &'static str {
    match name {
        "default" => "Generic list, character, boolean and arithmetic functions",
        "freetext" => "Generic functions plus string manipulation",
        "dates" => "Day, month and year extraction, reformatting and punctuation",
        "emails" => "Splitting and building e-mail addresses",
        "names" => "Initials, honorifics and reduced personal names",
        "phones" => "Country prefixes, extraction and formatting of phone numbers",
        "times" => "Time extraction, 12/24-hour formats, hour arithmetic and time zones",
        "units" => "Units of measure, dimensions and conversions",
        "all" => "Every group together",
        _ => "Custom manifest",
    }
}

/// Builds every builtin manifest over `catalog`.
pub fn builtin_domains_with(catalog: &Catalog) -> Vec<Library> {
    BUILTIN_DOMAINS
        .iter()
        .map(|name| {
            let text = builtin_manifest_text(name).expect("bundled manifest");
            let manifest = parse_manifest(text).expect("bundled manifest parses");
            build_library(&manifest, catalog).expect("bundled manifest resolves")
        })
        .collect()
}

/// The nine builtin libraries over the builtin catalog.
pub fn builtin_domains() -> Vec<Library> {
    static SHARED: OnceLock<Vec<Library>> = OnceLock::new();
    SHARED
        .get_or_init(|| builtin_domains_with(&Catalog::builtin()))
        .clone()
}

/// A builtin library by name.
pub fn builtin_domain(name: &str) -> Result<Library, DsbkError> {
    builtin_domains()
        .into_iter()
        .find(|l| l.name() == name)
        .ok_or_else(|| DsbkError::UnknownDomain(name.to_string()))
}
