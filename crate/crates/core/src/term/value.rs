use std::fmt;
use std::sync::Arc;

use super::eval::Env;
use super::expr::Expr;
use super::prim::PrimRef;
use super::typecheck::type_check;
use super::types::Ty;

#[derive(Clone)]
pub enum Value {
    Text(Arc<str>),
    Char(char),
    Int(i64),
    Bool(bool),
    List { elem: Ty, items: Arc<[Value]> },
    Func(Arc<FuncValue>),
}

/// Function values: lambda closures and partially applied primitives.
pub enum FuncValue {
    Closure {
        param: Ty,
        body: Arc<Expr>,
        env: Env,
    },
    Partial {
        prim: PrimRef,
        args: Vec<Value>,
    },
}

impl Value {
    pub fn text(s: impl Into<Arc<str>>) -> Value {
        Value::Text(s.into())
    }

    pub fn list(elem: Ty, items: Vec<Value>) -> Value {
        Value::List {
            elem,
            items: items.into(),
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }

    /// The type derivable from the value's shape.
    pub fn ty(&self) -> Ty {
        match self {
            Value::Text(_) => Ty::Text,
            Value::Char(_) => Ty::Char,
            Value::Int(_) => Ty::Int,
            Value::Bool(_) => Ty::Bool,
            Value::List { elem, .. } => Ty::list(elem.clone()),
            Value::Func(f) => match &**f {
                FuncValue::Closure { param, body, env } => {
                    let mut tys: Vec<Ty> = vec![param.clone()];
                    tys.extend(env.iter().map(|v| v.ty()));
                    match type_check(body, &tys) {
                        Ok(ret) => Ty::func(param.clone(), ret),
                        Err(_) => Ty::func(param.clone(), Ty::Text),
                    }
                }
                FuncValue::Partial { prim, args } => {
                    let mut ty = &prim.ty;
                    for _ in args {
                        if let Ty::Func(_, r) = ty {
                            ty = r;
                        }
                    }
                    ty.clone()
                }
            },
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Text(a), Value::Text(b)) => a == b,
            (Value::Char(a), Value::Char(b)) => a == b,
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::List { elem: ea, items: a }, Value::List { elem: eb, items: b }) => {
                ea == eb && a == b
            }
            (Value::Func(a), Value::Func(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Text(s) => write!(f, "{s:?}"),
            Value::Char(c) => write!(f, "{c:?}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::List { items, .. } => f.debug_list().entries(items.iter()).finish(),
            Value::Func(func) => match &**func {
                FuncValue::Closure { body, .. } => write!(f, "<closure {body:?}>"),
                FuncValue::Partial { prim, args } => write!(f, "<{} {args:?}>", prim.id),
            },
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Value {
        Value::Text(s.into())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Value {
        Value::Text(s.into())
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Value {
        Value::Int(i)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Value {
        Value::Bool(b)
    }
}
