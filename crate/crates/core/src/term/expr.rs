use std::fmt;
use std::sync::Arc;

use super::prim::PrimRef;
use super::typecheck::{type_check, TypeError};
use super::types::Ty;

/// Terms in de Bruijn form: `Var(0)` is the innermost bound variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    Prim(PrimRef),
    App(Arc<Expr>, Arc<Expr>),
    Lam(Ty, Arc<Expr>),
}

impl Expr {
    pub fn var(index: usize) -> Expr {
        Expr::Var(index)
    }

    pub fn prim(p: &PrimRef) -> Expr {
        Expr::Prim(p.clone())
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Arc::new(f), Arc::new(a))
    }

    pub fn lam(param: Ty, body: Expr) -> Expr {
        Expr::Lam(param, Arc::new(body))
    }

    /// `head a1 a2 ... an` as a left-nested application spine.
    pub fn apply(head: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
        args.into_iter().fold(head, Expr::app)
    }

    /// Number of primitive occurrences.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Prim(_) => 1,
            Expr::App(f, a) => f.depth() + a.depth(),
            Expr::Lam(_, b) => b.depth(),
        }
    }

    /// Whether de Bruijn index `index` (relative to this node) occurs free.
    pub fn has_free(&self, index: usize) -> bool {
        match self {
            Expr::Var(i) => *i == index,
            Expr::Prim(_) => false,
            Expr::App(f, a) => f.has_free(index) || a.has_free(index),
            Expr::Lam(_, b) => b.has_free(index + 1),
        }
    }

    /// Smallest environment length under which the term is closed.
    pub fn scope_needed(&self) -> usize {
        match self {
            Expr::Var(i) => i + 1,
            Expr::Prim(_) => 0,
            Expr::App(f, a) => f.scope_needed().max(a.scope_needed()),
            Expr::Lam(_, b) => b.scope_needed().saturating_sub(1),
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Expr, Vec<&Expr>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Expr::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Canonical text form: prefix application, `\x ->` lambda heads, and
    /// inner lambdas of the shape `\y -> f .. y` shown as `f ..`.
    pub fn render(&self) -> String {
        let mut names = Vec::new();
        let mut out = String::new();
        render_top(self, &mut names, &mut out);
        out
    }
}

const VAR_NAMES: [&str; 6] = ["x", "y", "z", "w", "v", "u"];

fn var_name(level: usize) -> String {
    VAR_NAMES
        .get(level)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("x{level}"))
}

fn render_top(e: &Expr, names: &mut Vec<String>, out: &mut String) {
    match e {
        Expr::Lam(_, body) => {
            let name = var_name(names.len());
            out.push('\\');
            out.push_str(&name);
            out.push_str(" -> ");
            names.push(name);
            render_top(body, names, out);
            names.pop();
        }
        _ => render(e, names, out),
    }
}

/// Returns the spine `f a1 .. a(n-1)` when `body` is `f a1 .. an` with
/// `an == Var(0)` and index 0 not free elsewhere.
fn eta_reducible(body: &Expr) -> Option<(&Expr, Vec<&Expr>)> {
    let (head, args) = body.spine();
    let (last, rest) = args.split_last()?;
    if **last != Expr::Var(0) || head.has_free(0) || rest.iter().any(|a| a.has_free(0)) {
        return None;
    }
    if matches!(head, Expr::Lam(..)) {
        return None;
    }
    Some((head, rest.to_vec()))
}

fn render(e: &Expr, names: &mut Vec<String>, out: &mut String) {
    match e {
        Expr::Var(i) => {
            let name = names
                .len()
                .checked_sub(i + 1)
                .map(|k| names[k].clone())
                .unwrap_or_else(|| format!("#{i}"));
            out.push_str(&name);
        }
        Expr::Prim(p) => out.push_str(&p.name),
        Expr::App(..) => {
            let (head, args) = e.spine();
            render_atom(head, names, out);
            for a in args {
                out.push(' ');
                render_atom(a, names, out);
            }
        }
        Expr::Lam(_, body) => {
            if let Some((head, args)) = eta_reducible(body) {
                // Var(0) does not occur, but the name stack must still line up.
                names.push(String::from("_"));
                render_atom(head, names, out);
                for a in args {
                    out.push(' ');
                    render_atom(a, names, out);
                }
                names.pop();
            } else {
                let name = var_name(names.len());
                out.push('\\');
                out.push_str(&name);
                out.push_str(" -> ");
                names.push(name);
                render(body, names, out);
                names.pop();
            }
        }
    }
}

fn render_atom(e: &Expr, names: &mut Vec<String>, out: &mut String) {
    let atomic = match e {
        Expr::Var(_) | Expr::Prim(_) => true,
        Expr::Lam(_, body) => eta_reducible(body).is_some_and(|(_, args)| args.is_empty()),
        Expr::App(..) => false,
    };
    if atomic {
        render(e, names, out);
    } else {
        out.push('(');
        render(e, names, out);
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A closed `Text -> Text` term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    expr: Arc<Expr>,
    depth: usize,
    rendering: String,
}

impl Program {
    pub fn new(expr: Expr) -> Result<Program, TypeError> {
        let ty = type_check(&expr, &[])?;
        let want = Ty::func(Ty::Text, Ty::Text);
        if ty != want {
            return Err(TypeError::Mismatch {
                expected: want,
                found: ty,
            });
        }
        let depth = expr.depth();
        let rendering = expr.render();
        Ok(Program {
            expr: Arc::new(expr),
            depth,
            rendering,
        })
    }

    pub fn identity() -> Program {
        Program::new(Expr::lam(Ty::Text, Expr::Var(0))).expect("identity is well typed")
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn rendering(&self) -> &str {
        &self.rendering
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendering)
    }
}
