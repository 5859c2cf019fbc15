use super::expr::Expr;
use super::types::Ty;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { expected: Ty, found: Ty },
    #[error("applied a non-function of type {0}")]
    NotAFunction(Ty),
    /// The term itself is malformed; well-formed callers never produce it.
    #[error("variable #{index} is out of scope (environment has {env_len} entries)")]
    UnboundVar { index: usize, env_len: usize },
}

/// Infers the type of `expr` where `env[i]` is the type of `Var(i)`.
pub fn type_check(expr: &Expr, env: &[Ty]) -> Result<Ty, TypeError> {
    let mut scope: Vec<Ty> = env.iter().rev().cloned().collect();
    check(expr, &mut scope)
}

// `scope` holds the environment innermost-last.
fn check(expr: &Expr, scope: &mut Vec<Ty>) -> Result<Ty, TypeError> {
    match expr {
        Expr::Var(i) => scope
            .len()
            .checked_sub(i + 1)
            .map(|k| scope[k].clone())
            .ok_or(TypeError::UnboundVar {
                index: *i,
                env_len: scope.len(),
            }),
        Expr::Prim(p) => Ok(p.ty.clone()),
        Expr::App(f, a) => {
            let fty = check(f, scope)?;
            let aty = check(a, scope)?;
            match fty {
                Ty::Func(param, ret) => {
                    if *param == aty {
                        Ok(*ret)
                    } else {
                        Err(TypeError::Mismatch {
                            expected: *param,
                            found: aty,
                        })
                    }
                }
                other => Err(TypeError::NotAFunction(other)),
            }
        }
        Expr::Lam(param, body) => {
            scope.push(param.clone());
            let ret = check(body, scope);
            scope.pop();
            Ok(Ty::func(param.clone(), ret?))
        }
    }
}
