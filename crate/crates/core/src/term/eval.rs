use std::borrow::Cow;
use std::sync::Arc;

use super::expr::{Expr, Program};
use super::value::{FuncValue, Value};

/// Default interpreter step budget per evaluation.
pub const DEFAULT_FUEL: u64 = 100_000;

/// Step budget: one step is one application reduction or one primitive
/// invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    fuel: u64,
}

impl EvalBudget {
    pub fn new(fuel: u64) -> EvalBudget {
        assert!(fuel > 0, "fuel must be positive");
        EvalBudget { fuel }
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget { fuel: DEFAULT_FUEL }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("primitive {} failed: {reason}", prim.as_deref().unwrap_or("?"))]
    PrimFailure {
        prim: Option<Arc<str>>,
        reason: Cow<'static, str>,
    },
    #[error("ill-typed application: {0}")]
    IllTyped(&'static str),
    #[error("variable #{0} is out of scope")]
    UnboundVar(usize),
}

impl EvalError {
    /// A failure raised from inside a primitive's semantics; the caller
    /// tags it with the primitive id.
    pub fn fail(reason: impl Into<Cow<'static, str>>) -> EvalError {
        EvalError::PrimFailure {
            prim: None,
            reason: reason.into(),
        }
    }
}

/// Persistent environment; index 0 is the innermost binding.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<EnvNode>>);

struct EnvNode {
    value: Value,
    next: Env,
}

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    /// `values[0]` becomes index 0.
    pub fn from_slice(values: &[Value]) -> Env {
        values
            .iter()
            .rev()
            .fold(Env::empty(), |env, v| env.push(v.clone()))
    }

    pub fn push(&self, value: Value) -> Env {
        Env(Some(Arc::new(EnvNode {
            value,
            next: self.clone(),
        })))
    }

    pub fn get(&self, index: usize) -> Option<&Value> {
        let mut cur = self.0.as_ref()?;
        for _ in 0..index {
            cur = cur.next.0.as_ref()?;
        }
        Some(&cur.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Value> {
        let mut cur = self.0.as_deref();
        std::iter::from_fn(move || {
            let node = cur?;
            cur = node.next.0.as_deref();
            Some(&node.value)
        })
    }
}

/// Strict, fuel-bounded interpreter state.
pub struct Evaluator {
    fuel: u64,
    used: u64,
}

impl Evaluator {
    pub fn new(budget: EvalBudget) -> Evaluator {
        Evaluator {
            fuel: budget.fuel(),
            used: 0,
        }
    }

    /// Steps consumed so far.
    pub fn used(&self) -> u64 {
        self.used
    }

    /// Charges `n` steps up front.
    pub fn charge(&mut self, n: u64) -> Result<(), EvalError> {
        self.used = self.used.saturating_add(n);
        if self.used > self.fuel {
            Err(EvalError::FuelExhausted)
        } else {
            Ok(())
        }
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.charge(1)
    }

    pub fn eval(&mut self, expr: &Expr, env: &Env) -> Result<Value, EvalError> {
        match expr {
            Expr::Var(i) => env.get(*i).cloned().ok_or(EvalError::UnboundVar(*i)),
            Expr::Prim(p) => {
                if p.arity() == 0 {
                    self.tick()?;
                    p.call(&[], self)
                } else {
                    Ok(Value::Func(Arc::new(FuncValue::Partial {
                        prim: p.clone(),
                        args: Vec::new(),
                    })))
                }
            }
            Expr::App(f, a) => {
                let fv = self.eval(f, env)?;
                let av = self.eval(a, env)?;
                self.apply(&fv, av)
            }
            Expr::Lam(param, body) => Ok(Value::Func(Arc::new(FuncValue::Closure {
                param: param.clone(),
                body: body.clone(),
                env: env.clone(),
            }))),
        }
    }

    /// Applies a function value to one argument (one reduction step).
    pub fn apply(&mut self, f: &Value, arg: Value) -> Result<Value, EvalError> {
        self.tick()?;
        let Value::Func(func) = f else {
            return Err(EvalError::IllTyped("applied a non-function value"));
        };
        match &**func {
            FuncValue::Closure { body, env, .. } => {
                let env = env.push(arg);
                self.eval(body, &env)
            }
            FuncValue::Partial { prim, args } => {
                let mut args = args.clone();
                args.push(arg);
                if args.len() == prim.arity() {
                    self.tick()?;
                    prim.call(&args, self)
                } else {
                    Ok(Value::Func(Arc::new(FuncValue::Partial {
                        prim: prim.clone(),
                        args,
                    })))
                }
            }
        }
    }

    /// Applies a predicate-like function and expects a boolean back.
    pub fn apply_bool(&mut self, f: &Value, arg: Value) -> Result<bool, EvalError> {
        match self.apply(f, arg)? {
            Value::Bool(b) => Ok(b),
            _ => Err(EvalError::IllTyped("predicate did not return Bool")),
        }
    }
}

/// Evaluates `expr` where `env[i]` binds `Var(i)`.
pub fn evaluate(expr: &Expr, env: &[Value], budget: EvalBudget) -> Result<Value, EvalError> {
    let mut ev = Evaluator::new(budget);
    ev.eval(expr, &Env::from_slice(env))
}

/// Outcome of applying a program to one row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FillResult {
    Ok(String),
    Failed(EvalError),
}

impl FillResult {
    pub fn text(&self) -> Option<&str> {
        match self {
            FillResult::Ok(s) => Some(s),
            FillResult::Failed(_) => None,
        }
    }
}

/// Runs `program` on a single input text.
pub fn run_program(program: &Program, input: &str, budget: EvalBudget) -> FillResult {
    let mut ev = Evaluator::new(budget);
    let result = ev
        .eval(program.expr(), &Env::empty())
        .and_then(|f| ev.apply(&f, Value::text(input)));
    match result {
        Ok(Value::Text(s)) => FillResult::Ok(s.to_string()),
        Ok(_) => FillResult::Failed(EvalError::IllTyped("program returned a non-text value")),
        Err(e) => FillResult::Failed(e),
    }
}

/// Applies `program` to every input, preserving order.
pub fn apply_program<S: AsRef<str>>(
    program: &Program,
    inputs: &[S],
    budget: EvalBudget,
) -> Vec<FillResult> {
    inputs
        .iter()
        .map(|s| run_program(program, s.as_ref(), budget))
        .collect()
}
