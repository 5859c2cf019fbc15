//! The executable primitive inventory: generic string functions plus one
//! group per data domain, and the lookup tables those groups consult.

mod dates;
mod emails;
mod names;
mod phones;
mod tables;
mod text;
mod times;
mod units;

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use sha2::{Digest, Sha256};

use crate::term::{EvalError, Evaluator, Group, Prim, PrimRef, Ty, UnknownGroup, Value};

pub use dates::{parse_date_fields, DateFields};
pub use tables::{LookupTable, TableError, Tables};
pub use units::convert_value;

/// Bumped whenever primitive semantics change; part of the fingerprint.
pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("no primitive with id `{0}`")]
    NotFound(String),
    #[error(transparent)]
    UnknownGroup(#[from] UnknownGroup),
}

pub struct Catalog {
    prims: Vec<PrimRef>,
    by_id: HashMap<String, usize>,
    tables: Arc<Tables>,
    fingerprint: String,
}

impl Catalog {
    /// The bundled inventory over the bundled lookup tables.
    pub fn builtin() -> Arc<Catalog> {
        static SHARED: OnceLock<Arc<Catalog>> = OnceLock::new();
        SHARED
            .get_or_init(|| Arc::new(Catalog::from_shared(Tables::builtin_shared())))
            .clone()
    }

    /// The bundled inventory with TSV overrides read from `dir`.
    pub fn with_table_dir(dir: &Path) -> Result<Catalog, TableError> {
        Ok(Catalog::with_tables(Tables::with_overrides(dir)?))
    }

    pub fn with_tables(tables: Tables) -> Catalog {
        Catalog::from_shared(Arc::new(tables))
    }

    fn from_shared(tables: Arc<Tables>) -> Catalog {
        let mut b = Builder::new(tables.clone());
        text::register_default(&mut b);
        text::register_freetext(&mut b);
        dates::register(&mut b);
        emails::register(&mut b);
        names::register(&mut b);
        phones::register(&mut b);
        times::register(&mut b);
        units::register(&mut b);
        let prims = b.prims;

        let mut by_id = HashMap::new();
        for (i, p) in prims.iter().enumerate() {
            let prev = by_id.insert(p.id.clone(), i);
            assert!(prev.is_none(), "duplicate primitive id `{}`", p.id);
        }

        let mut h = Sha256::new();
        h.update(CATALOG_VERSION.to_le_bytes());
        for p in &prims {
            h.update(p.id.as_bytes());
            h.update(p.ty.to_string().as_bytes());
            h.update([0u8]);
        }
        h.update(tables.fingerprint_text().as_bytes());
        let fingerprint = hex(&h.finalize());

        Catalog {
            prims,
            by_id,
            tables,
            fingerprint,
        }
    }

    pub fn lookup(&self, id: &str) -> Result<&PrimRef, CatalogError> {
        self.by_id
            .get(id)
            .map(|&i| &self.prims[i])
            .ok_or_else(|| CatalogError::NotFound(id.to_string()))
    }

    /// Primitives of one group in registration order.
    pub fn group(&self, group: Group) -> Vec<PrimRef> {
        self.prims
            .iter()
            .filter(|p| p.group == group)
            .cloned()
            .collect()
    }

    pub fn list_group(&self, group: &str) -> Result<Vec<PrimRef>, CatalogError> {
        Ok(self.group(group.parse()?))
    }

    pub fn prims(&self) -> &[PrimRef] {
        &self.prims
    }

    pub fn len(&self) -> usize {
        self.prims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prims.is_empty()
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) type R = Result<Value, EvalError>;

pub(crate) fn fail(reason: &'static str) -> EvalError {
    EvalError::fail(reason)
}

pub(crate) fn text_arg(args: &[Value], i: usize) -> Result<&str, EvalError> {
    match args.get(i) {
        Some(Value::Text(s)) => Ok(s),
        _ => Err(EvalError::IllTyped("expected Text argument")),
    }
}

pub(crate) fn int_arg(args: &[Value], i: usize) -> Result<i64, EvalError> {
    match args.get(i) {
        Some(Value::Int(n)) => Ok(*n),
        _ => Err(EvalError::IllTyped("expected Int argument")),
    }
}

pub(crate) fn bool_arg(args: &[Value], i: usize) -> Result<bool, EvalError> {
    match args.get(i) {
        Some(Value::Bool(b)) => Ok(*b),
        _ => Err(EvalError::IllTyped("expected Bool argument")),
    }
}

pub(crate) fn char_arg(args: &[Value], i: usize) -> Result<char, EvalError> {
    match args.get(i) {
        Some(Value::Char(c)) => Ok(*c),
        _ => Err(EvalError::IllTyped("expected Char argument")),
    }
}

pub(crate) fn list_arg(args: &[Value], i: usize) -> Result<&[Value], EvalError> {
    match args.get(i) {
        Some(Value::List { items, .. }) => Ok(items),
        _ => Err(EvalError::IllTyped("expected list argument")),
    }
}

pub(crate) fn t() -> Ty {
    Ty::Text
}

/// Registration helper; primitives are numbered in registration order.
pub(crate) struct Builder {
    prims: Vec<PrimRef>,
    group: Group,
    tables: Arc<Tables>,
}

impl Builder {
    fn new(tables: Arc<Tables>) -> Builder {
        Builder {
            prims: Vec::new(),
            group: Group::Default,
            tables,
        }
    }

    pub(crate) fn set_group(&mut self, group: Group) {
        self.group = group;
    }

    pub(crate) fn tables(&self) -> Arc<Tables> {
        self.tables.clone()
    }

    pub(crate) fn add(
        &mut self,
        id: &str,
        name: &str,
        ty: Ty,
        doc: &str,
        f: impl Fn(&[Value], &mut Evaluator) -> R + Send + Sync + 'static,
    ) {
        self.prims.push(PrimRef::new(Prim::new(
            id,
            name,
            ty,
            self.group,
            doc,
            Arc::new(f),
        )));
    }

    pub(crate) fn op(
        &mut self,
        id: &str,
        ty: Ty,
        doc: &str,
        f: impl Fn(&[Value], &mut Evaluator) -> R + Send + Sync + 'static,
    ) {
        self.add(id, id, ty, doc, f);
    }

    pub(crate) fn constant(&mut self, id: &str, ty: Ty, doc: &str, value: Value) {
        self.prims
            .push(PrimRef::new(Prim::constant(id, ty, self.group, doc, value)));
    }

    pub(crate) fn text_const(&mut self, id: &str, lit: &str, doc: &str) {
        self.constant(id, t(), doc, Value::text(lit));
    }

    /// `Text -> Text`
    pub(crate) fn t1(
        &mut self,
        id: &str,
        doc: &str,
        f: impl Fn(&str) -> Result<String, EvalError> + Send + Sync + 'static,
    ) {
        self.op(id, Ty::func(t(), t()), doc, move |a, _| {
            f(text_arg(a, 0)?).map(Value::from)
        });
    }

    /// `Text -> Text -> Text`
    pub(crate) fn t2(
        &mut self,
        id: &str,
        doc: &str,
        f: impl Fn(&str, &str) -> Result<String, EvalError> + Send + Sync + 'static,
    ) {
        self.op(id, Ty::chain([t(), t()], t()), doc, move |a, _| {
            f(text_arg(a, 0)?, text_arg(a, 1)?).map(Value::from)
        });
    }

    /// `Text -> Text -> Text -> Text`
    pub(crate) fn t3(
        &mut self,
        id: &str,
        doc: &str,
        f: impl Fn(&str, &str, &str) -> Result<String, EvalError> + Send + Sync + 'static,
    ) {
        self.op(id, Ty::chain([t(), t(), t()], t()), doc, move |a, _| {
            f(text_arg(a, 0)?, text_arg(a, 1)?, text_arg(a, 2)?).map(Value::from)
        });
    }

    /// `Text -> Bool`
    pub(crate) fn tb(
        &mut self,
        id: &str,
        doc: &str,
        f: impl Fn(&str) -> bool + Send + Sync + 'static,
    ) {
        self.op(id, Ty::func(t(), Ty::Bool), doc, move |a, _| {
            Ok(Value::Bool(f(text_arg(a, 0)?)))
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{evaluate, EvalBudget, Expr};

    pub(crate) fn call(cat: &Catalog, id: &str, args: Vec<Value>) -> R {
        let p = cat.lookup(id).expect("prim exists");
        let e = Expr::apply(Expr::prim(p), (0..args.len()).rev().map(Expr::Var));
        evaluate(
            &e,
            &args.into_iter().rev().collect::<Vec<_>>(),
            EvalBudget::default(),
        )
    }

    fn txt(cat: &Catalog, id: &str, args: &[&str]) -> Result<String, EvalError> {
        call(cat, id, args.iter().map(|s| Value::from(*s)).collect())
            .map(|v| v.as_text().expect("text result").to_string())
    }

    #[test]
    fn lookup_signatures() {
        let cat = Catalog::builtin();
        assert_eq!(
            cat.lookup("changePunctuationString").unwrap().ty,
            Ty::chain([t(), t(), t()], t())
        );
        assert_eq!(
            cat.lookup("isDigit").unwrap().ty,
            Ty::func(Ty::Char, Ty::Bool)
        );
        assert_eq!(
            cat.lookup("noSuchPrim").unwrap_err(),
            CatalogError::NotFound("noSuchPrim".into())
        );
    }

    #[test]
    fn invoke_examples() {
        let cat = Catalog::builtin();
        assert_eq!(
            txt(&cat, "changePunctuationString", &["25-03-74", "-", "/"]).unwrap(),
            "25/03/74"
        );
        assert_eq!(
            txt(&cat, "prefixForCountry", &["235-7654", "Taiwan"]).unwrap(),
            "(886) 235-7654"
        );
        assert_eq!(txt(&cat, "unitDimension", &["84Kg"]).unwrap(), "Mass");
        assert_eq!(txt(&cat, "dayOrdinal", &["3/29/86"]).unwrap(), "29th");
        assert_eq!(
            txt(&cat, "afterAt", &["Nancy.FreeHafer@fourthcoffee.com"]).unwrap(),
            "fourthcoffee.com"
        );
        let hours = call(
            &cat,
            "addHoursMod24",
            vec![Value::from("21:20"), Value::Int(5)],
        )
        .unwrap();
        assert_eq!(hours.as_text(), Some("02:20"));
        assert_eq!(txt(&cat, "monthToNumber", &["September"]).unwrap(), "09");
    }

    #[test]
    fn list_group_examples() {
        let cat = Catalog::builtin();
        let ids = |g: &str| -> Vec<String> {
            cat.list_group(g)
                .unwrap()
                .iter()
                .map(|p| p.id.clone())
                .collect()
        };
        let dates = ids("dates");
        for id in ["dayOrdinal", "monthToNumber", "expandYear", "isMonthName"] {
            assert!(dates.contains(&id.to_string()), "{id}");
        }
        let emails = ids("emails");
        for id in ["afterAt", "beforeAt", "joinWithAt", "appendAt"] {
            assert!(emails.contains(&id.to_string()), "{id}");
        }
        assert!(matches!(
            cat.list_group("unknown"),
            Err(CatalogError::UnknownGroup(_))
        ));
        // Registration order is stable.
        assert_eq!(ids("dates"), dates);
    }

    #[test]
    fn prim_types_end_in_base_types() {
        let cat = Catalog::builtin();
        for p in cat.prims() {
            let (_, ret) = p.ty.uncurry();
            assert!(!ret.is_func(), "{}", p.id);
            assert!(!p.doc.is_empty(), "{} lacks a doc line", p.id);
        }
    }

    #[test]
    fn fingerprint_is_stable() {
        let a = Catalog::with_tables(Tables::builtin());
        let b = Catalog::with_tables(Tables::builtin());
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 64);
    }
}
