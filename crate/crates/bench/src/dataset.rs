use std::fs;
use std::path::{Path, PathBuf};

/// One benchmark problem: rows of input and expected output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    /// Suite id, or 0 for a file outside the suite naming scheme.
    pub id: u32,
    pub domain: String,
    pub description: String,
    pub rows: Vec<(String, String)>,
}

impl Dataset {
    pub fn inputs(&self) -> impl Iterator<Item = &str> {
        self.rows.iter().map(|(x, _)| x.as_str())
    }

    /// The first `n` rows.
    pub fn examples(&self, n: usize) -> &[(String, String)] {
        &self.rows[..n.min(self.rows.len())]
    }

    /// Everything after the first `n` rows.
    pub fn held_out(&self, n: usize) -> &[(String, String)] {
        &self.rows[n.min(self.rows.len())..]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{path}:{line}: {reason}")]
    Line {
        path: String,
        line: u64,
        reason: String,
    },
}

impl FormatError {
    fn line(path: &Path, line: u64, reason: impl Into<String>) -> FormatError {
        FormatError::Line {
            path: path.display().to_string(),
            line,
            reason: reason.into(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> FormatError {
        FormatError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        }
    }
}

/// Id encoded in a `ds<id>_<slug>.csv` file name.
pub fn id_from_file_name(path: &Path) -> Option<u32> {
    let stem = path.file_stem()?.to_str()?;
    let rest = stem.strip_prefix("ds")?;
    let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return None;
    }
    match &rest[digits.len()..] {
        "" => digits.parse().ok(),
        tail if tail.starts_with('_') => digits.parse().ok(),
        _ => None,
    }
}

fn index_of(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim() == name)
}

/// Parses dataset CSV text with an `input,expected` header.
pub fn parse_dataset(text: &str, path: &Path) -> Result<Dataset, FormatError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.trim_start_matches('\u{feff}').as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| FormatError::line(path, 1, e.to_string()))?
        .clone();
    let input = index_of(&headers, "input")
        .ok_or_else(|| FormatError::line(path, 1, "missing `input` column"))?;
    let expected = index_of(&headers, "expected")
        .ok_or_else(|| FormatError::line(path, 1, "missing `expected` column"))?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            FormatError::line(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let x = rec
            .get(input)
            .ok_or_else(|| FormatError::line(path, line, "row has no input field"))?;
        let y = rec
            .get(expected)
            .ok_or_else(|| FormatError::line(path, line, "row has no expected field"))?;
        rows.push((x.to_string(), y.to_string()));
    }
    if rows.len() < 2 {
        return Err(FormatError::line(
            path,
            1,
            format!("need at least 2 rows, found {}", rows.len()),
        ));
    }
    Ok(Dataset {
        id: id_from_file_name(path).unwrap_or(0),
        domain: String::new(),
        description: String::new(),
        rows,
    })
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, FormatError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_dataset(&text, path)
}

/// A row of `suite.csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteEntry {
    pub id: u32,
    pub domain: String,
    pub file: PathBuf,
    pub description: String,
}

pub const SUITE_MANIFEST: &str = "suite.csv";

pub fn load_suite_manifest(dir: impl AsRef<Path>) -> Result<Vec<SuiteEntry>, FormatError> {
    let dir = dir.as_ref();
    let path = dir.join(SUITE_MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| FormatError::io(&path, e))?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| FormatError::line(&path, 1, e.to_string()))?
        .clone();
    let col = |name: &str| {
        index_of(&headers, name)
            .ok_or_else(|| FormatError::line(&path, 1, format!("missing `{name}` column")))
    };
    let (id, domain, file, desc) = (
        col("id")?,
        col("domain")?,
        col("file")?,
        col("description")?,
    );
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            FormatError::line(&path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or("").trim().to_string();
        let parsed_id = field(id)
            .parse()
            .map_err(|_| FormatError::line(&path, line, format!("bad id `{}`", field(id))))?;
        out.push(SuiteEntry {
            id: parsed_id,
            domain: field(domain),
            file: dir.join(field(file)),
            description: field(desc),
        });
    }
    if out.is_empty() {
        return Err(FormatError::line(&path, 1, "suite lists no datasets"));
    }
    Ok(out)
}

/// Loads every dataset listed in `dir/suite.csv`, in manifest order.
pub fn load_suite(dir: impl AsRef<Path>) -> Result<Vec<Dataset>, FormatError> {
    load_suite_manifest(dir)?
        .into_iter()
        .map(|e| {
            let mut ds = load_dataset(&e.file)?;
            ds.id = e.id;
            ds.domain = e.domain;
            ds.description = e.description;
            Ok(ds)
        })
        .collect()
}
