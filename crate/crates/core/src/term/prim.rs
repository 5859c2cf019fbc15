use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use super::eval::{EvalError, Evaluator};
use super::types::Ty;
use super::value::Value;

/// Library group a primitive belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Default,
    Freetext,
    Dates,
    Emails,
    Names,
    Phones,
    Times,
    Units,
    /// Constants minted by a manifest `const` directive.
    Local,
}

impl Group {
    pub const CATALOG: [Group; 8] = [
        Group::Default,
        Group::Freetext,
        Group::Dates,
        Group::Emails,
        Group::Names,
        Group::Phones,
        Group::Times,
        Group::Units,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Default => "default",
            Group::Freetext => "freetext",
            Group::Dates => "dates",
            Group::Emails => "emails",
            Group::Names => "names",
            Group::Phones => "phones",
            Group::Times => "times",
            Group::Units => "units",
            Group::Local => "local",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown group `{0}`")]
pub struct UnknownGroup(pub String);

impl FromStr for Group {
    type Err = UnknownGroup;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::CATALOG
            .iter()
            .copied()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| UnknownGroup(s.to_string()))
    }
}

/// Executable meaning of a primitive. Receives exactly `arity` arguments
/// and the evaluator, which higher-order primitives use to call closures.
pub type Semantics =
    Arc<dyn Fn(&[Value], &mut Evaluator) -> Result<Value, EvalError> + Send + Sync>;

pub struct Prim {
    pub id: String,
    pub name: String,
    pub ty: Ty,
    pub group: Group,
    pub doc: String,
    arity: usize,
    semantics: Semantics,
}

impl Prim {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        ty: Ty,
        group: Group,
        doc: impl Into<String>,
        semantics: Semantics,
    ) -> Prim {
        let arity = ty.arity();
        Prim {
            id: id.into(),
            name: name.into(),
            ty,
            group,
            doc: doc.into(),
            arity,
            semantics,
        }
    }

    /// A zero-argument primitive that always yields `value`.
    pub fn constant(
        id: impl Into<String>,
        ty: Ty,
        group: Group,
        doc: impl Into<String>,
        value: Value,
    ) -> Prim {
        let id = id.into();
        Prim::new(
            id.clone(),
            id,
            ty,
            group,
            doc,
            Arc::new(move |_, _| Ok(value.clone())),
        )
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Runs the semantics on a saturated argument list. Failures are tagged
    /// with this primitive's id.
    pub fn call(&self, args: &[Value], ev: &mut Evaluator) -> Result<Value, EvalError> {
        debug_assert_eq!(args.len(), self.arity);
        (self.semantics)(args, ev).map_err(|e| match e {
            EvalError::PrimFailure { prim: None, reason } => EvalError::PrimFailure {
                prim: Some(self.id.clone().into()),
                reason,
            },
            other => other,
        })
    }
}

impl fmt::Debug for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Prim")
            .field("id", &self.id)
            .field("ty", &self.ty)
            .field("group", &self.group)
            .finish()
    }
}

/// Shared handle to a primitive. Identity is the primitive id.
#[derive(Clone)]
pub struct PrimRef(pub Arc<Prim>);

impl PrimRef {
    pub fn new(prim: Prim) -> PrimRef {
        PrimRef(Arc::new(prim))
    }
}

impl std::ops::Deref for PrimRef {
    type Target = Prim;

    fn deref(&self) -> &Prim {
        &self.0
    }
}

impl PartialEq for PrimRef {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.id == other.0.id
    }
}

impl Eq for PrimRef {}

impl Hash for PrimRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for PrimRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.id)
    }
}
