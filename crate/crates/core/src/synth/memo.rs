use std::collections::HashMap;
use std::sync::Arc;

use crate::par::{self, Parallelism};
use crate::term::{Env, EvalBudget, Evaluator, Expr, FuncValue, Ty, Value};

use super::space::{Block, Head, PoolId, SpaceView, ROOT_ENV};

/// Value of one pool entry on one example, with the interpreter steps the
/// plain evaluator would spend on it. `None` covers every failure.
#[derive(Debug, Clone)]
pub(crate) struct Cell {
    pub value: Option<Value>,
    pub steps: u64,
}

const FAILED: Cell = Cell {
    value: None,
    steps: 0,
};

/// Per-example values of root-scope pools, entry-major (`idx * n + e`),
/// plus closures for lambda slots.
type ClosureKey = (PoolId, Arc<[Ty]>);

pub(crate) struct MemoTable {
    n: usize,
    cells: HashMap<PoolId, Arc<[Cell]>>,
    closures: HashMap<ClosureKey, Arc<[Value]>>,
}

impl MemoTable {
    pub fn new(n: usize) -> MemoTable {
        MemoTable {
            n,
            cells: HashMap::new(),
            closures: HashMap::new(),
        }
    }

    pub fn has(&self, pool: PoolId) -> bool {
        self.cells.contains_key(&pool)
    }

    pub fn insert(&mut self, pool: PoolId, cells: Vec<Cell>) {
        self.cells.insert(pool, cells.into());
    }

    pub fn cells(&self, pool: PoolId) -> &[Cell] {
        &self.cells[&pool]
    }

    /// Builds closures for every lambda slot of `pool`'s blocks that lacks
    /// them. `bodies` yields the materialized entries of a body pool.
    pub fn ensure_closures(
        &mut self,
        view: &SpaceView,
        pool: PoolId,
        envs: &[Env],
        bodies: &mut dyn FnMut(PoolId) -> Arc<[Arc<Expr>]>,
    ) {
        for block in &view.pool(pool).blocks {
            for slot in &block.args {
                if slot.params.is_empty() {
                    continue;
                }
                let key = (slot.pool, slot.params.clone());
                if self.closures.contains_key(&key) {
                    continue;
                }
                let body_exprs = bodies(slot.pool);
                let (first, rest) = slot.params.split_first().expect("lambda slot");
                let mut values = Vec::with_capacity(body_exprs.len() * self.n);
                for body in body_exprs.iter() {
                    let inner: Arc<Expr> = if rest.is_empty() {
                        body.clone()
                    } else {
                        Arc::new(
                            rest.iter()
                                .rev()
                                .fold((**body).clone(), |acc, ty| Expr::lam(ty.clone(), acc)),
                        )
                    };
                    for env in envs {
                        values.push(Value::Func(Arc::new(FuncValue::Closure {
                            param: first.clone(),
                            body: inner.clone(),
                            env: env.clone(),
                        })));
                    }
                }
                self.closures.insert(key, values.into());
            }
        }
    }

    fn closure(&self, pool: PoolId, params: &Arc<[Ty]>, idx: u64, e: usize) -> &Value {
        &self.closures[&(pool, params.clone())][idx as usize * self.n + e]
    }
}

/// Outcome of one entry on one example.
pub(crate) enum Step {
    Done(Value, u64),
    /// Argument `j` failed; every entry sharing the first `j + 1`
    /// arguments fails the same way.
    ArgFailed(usize),
    Failed,
}

/// Evaluates pool entries from memoized argument values.
pub(crate) struct Evaluate<'a> {
    pub view: &'a SpaceView<'a>,
    pub memo: &'a MemoTable,
    pub inputs: &'a [Vec<Value>],
    pub fuel: u64,
}

impl Evaluate<'_> {
    pub fn n(&self) -> usize {
        self.inputs.len()
    }

    pub fn step(&self, block: &Block, tuple: &[u64], e: usize, buf: &mut Vec<Value>) -> Step {
        match block.head {
            Head::Var(i) => match self.inputs[e].get(i as usize) {
                Some(v) => Step::Done(v.clone(), 0),
                None => Step::Failed,
            },
            Head::Prim(k) => {
                buf.clear();
                let n = self.n();
                let mut acc: u64 = 0;
                for (j, (slot, &idx)) in block.args.iter().zip(tuple).enumerate() {
                    if slot.params.is_empty() {
                        let cell = &self.memo.cells(slot.pool)[idx as usize * n + e];
                        match &cell.value {
                            Some(v) => {
                                buf.push(v.clone());
                                acc += cell.steps;
                            }
                            None => return Step::ArgFailed(j),
                        }
                    } else {
                        buf.push(self.memo.closure(slot.pool, &slot.params, idx, e).clone());
                    }
                }
                let prim = &self.view.library.prims()[k as usize];
                let mut ev = Evaluator::new(EvalBudget::new(self.fuel));
                if ev.charge(acc + block.args.len() as u64 + 1).is_err() {
                    return Step::Failed;
                }
                match prim.call(buf, &mut ev) {
                    Ok(v) => Step::Done(v, ev.used()),
                    Err(_) => Step::Failed,
                }
            }
        }
    }

    /// Cells for entries `range` of `pool`, in order.
    pub fn cells(&self, pool: PoolId, range: std::ops::Range<u64>) -> Vec<Cell> {
        let p = self.view.pool(pool);
        let n = self.n();
        let mut out = Vec::with_capacity((range.end - range.start) as usize * n);
        let mut tuple = Vec::new();
        let mut buf = Vec::new();
        for idx in range {
            let (b, off) = p.locate(p.raw_index(idx));
            let block = &p.blocks[b];
            self.view.decode(block, off, &mut tuple);
            for e in 0..n {
                out.push(match self.step(block, &tuple, e, &mut buf) {
                    Step::Done(v, steps) if steps <= self.fuel => Cell {
                        value: Some(v),
                        steps,
                    },
                    _ => FAILED,
                });
            }
        }
        out
    }

    /// Cells for every entry of `pool`, computed in parallel chunks.
    pub fn all_cells(&self, pool: PoolId, mode: Parallelism) -> Vec<Cell> {
        let count = self.view.pool(pool).count();
        par::map_chunks(mode, 0..count, CHUNK, |r| self.cells(pool, r))
            .into_iter()
            .flatten()
            .collect()
    }
}

pub(crate) const CHUNK: u64 = 2048;

/// Hashable rendering of a first-order value.
fn value_key(v: &Value, out: &mut String) {
    match v {
        Value::Text(s) => {
            out.push('t');
            out.push_str(&s.len().to_string());
            out.push(':');
            out.push_str(s);
        }
        Value::Char(c) => {
            out.push('c');
            out.push(*c);
        }
        Value::Int(i) => {
            out.push('i');
            out.push_str(&i.to_string());
        }
        Value::Bool(b) => out.push(if *b { 'T' } else { 'F' }),
        Value::List { items, .. } => {
            out.push('[');
            for it in items.iter() {
                value_key(it, out);
                out.push(',');
            }
            out.push(']');
        }
        Value::Func(f) => {
            out.push('f');
            out.push_str(&format!("{:p}", Arc::as_ptr(f)));
        }
    }
}

/// Probe-value signature of every raw entry of `pool`; the memo must hold
/// the (pruned) argument pools already. Returns the cells too so the caller
/// can keep the survivors.
pub(crate) fn probe_cells(
    view: &SpaceView,
    pool: PoolId,
    inputs: &[Vec<Value>],
    memo: &mut MemoTable,
) -> (Vec<String>, Vec<Cell>) {
    let envs: Vec<Env> = inputs.iter().map(|v| Env::from_slice(v)).collect();
    memo.ensure_closures(view, pool, &envs, &mut |p| {
        let n = view.pool(p).count();
        (0..n).map(|i| Arc::new(view.expr_in(p, i))).collect()
    });
    debug_assert_eq!(view.pool(pool).env, ROOT_ENV);
    let ev = Evaluate {
        view,
        memo,
        inputs,
        fuel: crate::term::DEFAULT_FUEL,
    };
    let cells = ev.all_cells(pool, Parallelism::Parallel);
    let n = inputs.len().max(1);
    let keys = cells
        .chunks(n)
        .map(|row| {
            let mut k = String::new();
            for c in row {
                match &c.value {
                    Some(v) => value_key(v, &mut k),
                    None => k.push('!'),
                }
                k.push('|');
            }
            k
        })
        .collect();
    (keys, cells)
}
