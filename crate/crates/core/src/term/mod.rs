//! The typed term language: simple types, de Bruijn expressions, a type
//! checker and a strict interpreter bounded by step fuel.

mod eval;
mod expr;
mod prim;
mod typecheck;
mod types;
mod value;

pub use eval::{
    apply_program, evaluate, run_program, Env, EvalBudget, EvalError, Evaluator, FillResult,
    DEFAULT_FUEL,
};
pub use expr::{Expr, Program};
pub use prim::{Group, Prim, PrimRef, Semantics, UnknownGroup};
pub use typecheck::{type_check, TypeError};
pub use types::Ty;
pub use value::{FuncValue, Value};
