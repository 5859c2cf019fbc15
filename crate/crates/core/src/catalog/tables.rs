use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, OnceLock};

/// Read-only key/value table loaded from a TSV resource.
///
/// Format: one `key<TAB>value` pair per line, UTF-8, blank lines and lines
/// starting with `#` ignored. Keys must be unique after lowercasing.
#[derive(Debug, Clone)]
pub struct LookupTable {
    name: String,
    entries: Vec<(String, String)>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("{table}:{line}: {reason}")]
    Format {
        table: String,
        line: usize,
        reason: String,
    },
    #[error("{table}: {reason}")]
    Io { table: String, reason: String },
}

impl LookupTable {
    pub fn parse_tsv(name: &str, text: &str) -> Result<LookupTable, TableError> {
        let mut entries = Vec::new();
        let mut index = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |reason: &str| TableError::Format {
                table: name.to_string(),
                line: n + 1,
                reason: reason.to_string(),
            };
            let (key, value) = line.split_once('\t').ok_or_else(|| err("missing TAB"))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(err("empty key"));
            }
            let norm = key.to_lowercase();
            if index.contains_key(&norm) {
                return Err(err("duplicate key"));
            }
            index.insert(norm, entries.len());
            entries.push((key.to_string(), value.trim().to_string()));
        }
        Ok(LookupTable {
            name: name.to_string(),
            entries,
            index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Case-insensitive lookup.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.index
            .get(&key.trim().to_lowercase())
            .map(|&i| self.entries[i].1.as_str())
    }

    /// Case-sensitive lookup on the key as written in the file.
    pub fn get_exact(&self, key: &str) -> Option<&str> {
        self.index
            .get(&key.to_lowercase())
            .filter(|&&i| self.entries[i].0 == key)
            .map(|&i| self.entries[i].1.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

pub const MONTHS: &str = "months";
pub const COUNTRIES: &str = "countries";
pub const UNIT_DIMENSIONS: &str = "unit_dimensions";
pub const UNIT_FACTORS: &str = "unit_factors";
pub const HONORIFICS: &str = "honorifics";
pub const TIMEZONES: &str = "timezones";

const BUILTIN: [(&str, &str); 6] = [
    (MONTHS, include_str!("../../resources/months.tsv")),
    (COUNTRIES, include_str!("../../resources/countries.tsv")),
    (
        UNIT_DIMENSIONS,
        include_str!("../../resources/unit_dimensions.tsv"),
    ),
    (
        UNIT_FACTORS,
        include_str!("../../resources/unit_factors.tsv"),
    ),
    (HONORIFICS, include_str!("../../resources/honorifics.tsv")),
    (TIMEZONES, include_str!("../../resources/timezones.tsv")),
];

/// All lookup tables by name.
#[derive(Debug, Clone)]
pub struct Tables(BTreeMap<String, LookupTable>);

impl Tables {
    pub fn builtin() -> Tables {
        let map = BUILTIN
            .iter()
            .map(|(name, text)| {
                let table = LookupTable::parse_tsv(name, text).expect("bundled table parses");
                (name.to_string(), table)
            })
            .collect();
        Tables(map)
    }

    /// Process-wide copy of the bundled tables.
    pub fn builtin_shared() -> Arc<Tables> {
        static SHARED: OnceLock<Arc<Tables>> = OnceLock::new();
        SHARED.get_or_init(|| Arc::new(Tables::builtin())).clone()
    }

    /// Builtin tables, with any `<name>.tsv` found in `dir` replacing the
    /// bundled table of the same name.
    pub fn with_overrides(dir: &Path) -> Result<Tables, TableError> {
        let mut tables = Tables::builtin();
        for (name, _) in BUILTIN {
            let path = dir.join(format!("{name}.tsv"));
            if !path.exists() {
                continue;
            }
            let text = std::fs::read_to_string(&path).map_err(|e| TableError::Io {
                table: name.to_string(),
                reason: e.to_string(),
            })?;
            tables
                .0
                .insert(name.to_string(), LookupTable::parse_tsv(name, &text)?);
        }
        Ok(tables)
    }

    pub fn get(&self, name: &str) -> Option<&LookupTable> {
        self.0.get(name)
    }

    pub(crate) fn table(&self, name: &str) -> &LookupTable {
        self.0
            .get(name)
            .unwrap_or_else(|| panic!("lookup table `{name}` is not loaded"))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub(crate) fn fingerprint_text(&self) -> String {
        let mut s = String::new();
        for (name, t) in &self.0 {
            s.push_str(name);
            for (k, v) in t.entries() {
                s.push_str(k);
                s.push('\t');
                s.push_str(v);
                s.push('\n');
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_pairs() {
        let t = LookupTable::parse_tsv("t", "# c\nSpain\t34\n\nTaiwan\t886\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get("spain"), Some("34"));
        assert_eq!(t.get_exact("spain"), None);
        assert_eq!(t.get_exact("Spain"), Some("34"));
    }

    #[test]
    fn rejects_case_duplicates() {
        let err = LookupTable::parse_tsv("t", "a\t1\nA\t2\n").unwrap_err();
        assert!(matches!(err, TableError::Format { line: 2, .. }));
    }

    #[test]
    fn rejects_missing_tab() {
        assert!(LookupTable::parse_tsv("t", "novalue\n").is_err());
    }

    #[test]
    fn builtin_tables_cover_fixture_countries() {
        let tables = Tables::builtin();
        let c = tables.table(COUNTRIES);
        assert!(c.len() >= 50);
        for (k, v) in [
            ("Taiwan", "886"),
            ("Spain", "34"),
            ("Panama", "507"),
            ("Chile", "56"),
        ] {
            assert_eq!(c.get(k), Some(v));
        }
    }
}
