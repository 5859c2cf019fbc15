use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::dsbk::Library;
use crate::term::{Expr, Program, Ty, Value};

use super::memo::{probe_cells, MemoTable};

pub(crate) type PoolId = u32;
pub(crate) type EnvId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Head {
    Var(u32),
    /// Index into the library's primitive list.
    Prim(u32),
}

/// One argument position of a block. `params` is empty for base-typed
/// slots; otherwise the slot is filled by `\p1 .. pm -> body` with the body
/// drawn from `pool`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ArgSlot {
    pub pool: PoolId,
    pub params: Arc<[Ty]>,
}

/// All terms `head a1 .. ak` whose arguments come from fixed pools. Entries
/// are the argument tuples in lexicographic order, first argument slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Block {
    pub head: Head,
    pub args: Vec<ArgSlot>,
    pub count: u64,
}

/// Every canonical term of one base type and exact depth in one scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Pool {
    pub env: EnvId,
    pub ty: Ty,
    pub depth: u32,
    pub blocks: Vec<Block>,
    /// Running start index of each block.
    pub starts: Vec<u64>,
    /// Raw entry count before pruning.
    pub raw_count: u64,
    /// Surviving raw indices when observational pruning ran on the pool.
    pub kept: Option<Arc<[u64]>>,
}

impl Pool {
    pub fn count(&self) -> u64 {
        match &self.kept {
            Some(k) => k.len() as u64,
            None => self.raw_count,
        }
    }

    pub fn raw_index(&self, idx: u64) -> u64 {
        match &self.kept {
            Some(k) => k[idx as usize],
            None => idx,
        }
    }

    /// Block holding raw entry `raw` and the offset inside it.
    pub fn locate(&self, raw: u64) -> (usize, u64) {
        let b = self.starts.partition_point(|&s| s <= raw) - 1;
        (b, raw - self.starts[b])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumError {
    #[error("generation budget of {limit} candidates exceeded; space is partial up to depth {}", partial.complete_depth())]
    BudgetExceeded {
        limit: u64,
        partial: Box<CandidateSpace>,
    },
    #[error("d_max must be at least 1")]
    ZeroDepth,
    #[error("primitive `{0}` takes a higher-order function argument, which enumeration does not support")]
    UnsupportedPrim(String),
}

/// Knobs for phase one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumOptions {
    /// Stop once the candidate count would exceed this many.
    pub max_candidates: Option<u64>,
    /// Inputs for observational-equivalence pruning of argument pools.
    /// `None` keeps the full space.
    pub prune_probes: Option<Vec<String>>,
}

impl EnumOptions {
    pub(crate) fn cache_key(&self) -> String {
        let mut s = format!("max={:?}", self.max_candidates);
        if let Some(p) = &self.prune_probes {
            s.push_str(";probes=");
            for x in p {
                s.push_str(&format!("{}:{x}", x.len()));
            }
        }
        s
    }
}

pub(crate) type BodyExprs = Arc<[Arc<Expr>]>;

/// Phase one result: every canonical term of the target type up to `d_max`,
/// stored implicitly as pools of blocks so entries cost no memory.
#[derive(Clone)]
pub struct CandidateSpace {
    pub(crate) library: Library,
    pub(crate) target: Ty,
    pub(crate) d_max: u32,
    pub(crate) envs: Vec<Arc<[Ty]>>,
    pub(crate) pools: Vec<Pool>,
    /// Root pool for each completed depth, index = depth.
    pub(crate) roots: Vec<PoolId>,
    pub(crate) partial: bool,
    pub(crate) options: EnumOptions,
    pub(crate) bodies: Arc<Vec<OnceLock<BodyExprs>>>,
}

impl PartialEq for CandidateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.library.fingerprint() == other.library.fingerprint()
            && self.target == other.target
            && self.d_max == other.d_max
            && self.envs == other.envs
            && self.pools == other.pools
            && self.roots == other.roots
            && self.partial == other.partial
    }
}

impl Eq for CandidateSpace {}

impl fmt::Debug for CandidateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CandidateSpace")
            .field("library", &self.library.name())
            .field("d_max", &self.d_max)
            .field("counts", &self.counts())
            .field("partial", &self.partial)
            .finish()
    }
}

pub(crate) const ROOT_ENV: EnvId = 0;

impl CandidateSpace {
    pub fn library(&self) -> &Library {
        &self.library
    }

    pub fn target(&self) -> &Ty {
        &self.target
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn options(&self) -> &EnumOptions {
        &self.options
    }

    /// Deepest level fully present in the space.
    pub fn complete_depth(&self) -> usize {
        self.roots.len().saturating_sub(1)
    }

    /// Candidate count at each depth `0..=d_max`.
    pub fn counts(&self) -> Vec<u64> {
        self.roots
            .iter()
            .map(|&r| self.pools[r as usize].count())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts().iter().sum()
    }

    /// Number of pools, a proxy for generation work.
    pub fn pool_count(&self) -> usize {
        self.pools.len()
    }

    pub(crate) fn pool(&self, id: PoolId) -> &Pool {
        &self.pools[id as usize]
    }

    pub(crate) fn view(&self) -> SpaceView<'_> {
        SpaceView {
            library: &self.library,
            pools: &self.pools,
        }
    }

    pub(crate) fn expr_in(&self, pool: PoolId, idx: u64) -> Expr {
        self.view().expr_in(pool, idx)
    }

    /// All entries of a pool as expressions, built once.
    pub(crate) fn bodies(&self, pool: PoolId) -> Arc<[Arc<Expr>]> {
        self.bodies[pool as usize]
            .get_or_init(|| {
                (0..self.pool(pool).count())
                    .map(|i| Arc::new(self.expr_in(pool, i)))
                    .collect()
            })
            .clone()
    }

    /// Closed expression of candidate `idx` at `depth`.
    pub fn expr(&self, depth: usize, idx: u64) -> Expr {
        let body = self.expr_in(self.roots[depth], idx);
        let (params, _) = self.target.uncurry();
        params
            .iter()
            .rev()
            .fold(body, |acc, ty| Expr::lam((*ty).clone(), acc))
    }

    /// Candidate `idx` at `depth` as a program; the target must be
    /// `Text -> Text`.
    pub fn program(&self, depth: usize, idx: u64) -> Program {
        Program::new(self.expr(depth, idx)).expect("enumerated terms are well typed")
    }

    /// Every candidate in canonical order. Intended for small spaces.
    pub fn iter_exprs(&self) -> impl Iterator<Item = (usize, Expr)> + '_ {
        self.counts()
            .into_iter()
            .enumerate()
            .flat_map(move |(d, n)| (0..n).map(move |i| (d, self.expr(d, i))))
    }

    pub(crate) fn root_env_values(&self) -> usize {
        self.envs[ROOT_ENV as usize].len()
    }

    pub(crate) fn is_text_fn(&self) -> bool {
        self.target == Ty::func(Ty::Text, Ty::Text)
    }
}

/// Compositions of `total` into `parts` non-negative parts, ascending
/// lexicographically.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=total {
            cur.push(first);
            go(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

struct Signature {
    ret: Ty,
    slots: Vec<(Arc<[Ty]>, Ty)>,
}

struct Gen<'a> {
    library: &'a Library,
    sigs: Vec<Signature>,
    envs: Vec<Arc<[Ty]>>,
    env_index: HashMap<Arc<[Ty]>, EnvId>,
    pools: Vec<Pool>,
    pool_index: HashMap<(EnvId, Ty, u32), PoolId>,
    d_max: u32,
    probes: Option<(Vec<Vec<Value>>, MemoTable)>,
}

impl Gen<'_> {
    fn env_id(&mut self, env: Arc<[Ty]>) -> EnvId {
        if let Some(&id) = self.env_index.get(&env) {
            return id;
        }
        let id = self.envs.len() as EnvId;
        self.envs.push(env.clone());
        self.env_index.insert(env, id);
        id
    }

    fn extend(&mut self, env: EnvId, params: &[Ty]) -> EnvId {
        let mut tys: Vec<Ty> = params.iter().rev().cloned().collect();
        tys.extend(self.envs[env as usize].iter().cloned());
        self.env_id(tys.into())
    }

    fn pool(&mut self, env: EnvId, ty: &Ty, depth: u32) -> PoolId {
        if let Some(&id) = self.pool_index.get(&(env, ty.clone(), depth)) {
            return id;
        }
        let mut blocks = Vec::new();
        if depth == 0 {
            for (i, var_ty) in self.envs[env as usize].clone().iter().enumerate() {
                if var_ty == ty {
                    blocks.push(Block {
                        head: Head::Var(i as u32),
                        args: Vec::new(),
                        count: 1,
                    });
                }
            }
        } else {
            for k in 0..self.sigs.len() {
                if self.sigs[k].ret != *ty {
                    continue;
                }
                let slots: Vec<(Arc<[Ty]>, Ty)> = self.sigs[k].slots.clone();
                for comp in compositions(depth - 1, slots.len()) {
                    let mut args = Vec::with_capacity(slots.len());
                    let mut count: u64 = 1;
                    for ((params, ret), &d) in slots.iter().zip(&comp) {
                        let scope = if params.is_empty() {
                            env
                        } else {
                            self.extend(env, params)
                        };
                        let pool = self.pool(scope, ret, d);
                        count = count.saturating_mul(self.pools[pool as usize].count());
                        args.push(ArgSlot {
                            pool,
                            params: params.clone(),
                        });
                        if count == 0 {
                            break;
                        }
                    }
                    if count > 0 {
                        blocks.push(Block {
                            head: Head::Prim(k as u32),
                            args,
                            count,
                        });
                    }
                }
            }
        }
        let mut starts = Vec::with_capacity(blocks.len());
        let mut raw_count: u64 = 0;
        for b in &blocks {
            starts.push(raw_count);
            raw_count = raw_count.saturating_add(b.count);
        }
        let id = self.pools.len() as PoolId;
        self.pools.push(Pool {
            env,
            ty: ty.clone(),
            depth,
            blocks,
            starts,
            raw_count,
            kept: None,
        });
        self.pool_index.insert((env, ty.clone(), depth), id);
        if env == ROOT_ENV && depth < self.d_max {
            self.prune(id);
        }
        id
    }

    /// Keeps the first entry of every class of entries that agree on all
    /// probe inputs.
    fn prune(&mut self, id: PoolId) {
        let Some((inputs, mut memo)) = self.probes.take() else {
            return;
        };
        let view = SpaceView {
            library: self.library,
            pools: &self.pools,
        };
        let (keys, cells) = probe_cells(&view, id, &inputs, &mut memo);
        let n = inputs.len().max(1);
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        let mut kept_cells = Vec::new();
        for (i, k) in keys.into_iter().enumerate() {
            if seen.insert(k) {
                kept.push(i as u64);
                kept_cells.extend_from_slice(&cells[i * n..(i + 1) * n]);
            }
        }
        let pool = &mut self.pools[id as usize];
        if (kept.len() as u64) < pool.raw_count {
            pool.kept = Some(kept.into());
        }
        memo.insert(id, kept_cells);
        self.probes = Some((inputs, memo));
    }
}

/// The parts of a space needed to evaluate entries while it is still
/// being generated.
pub(crate) struct SpaceView<'a> {
    pub library: &'a Library,
    pub pools: &'a [Pool],
}

impl SpaceView<'_> {
    pub fn pool(&self, id: PoolId) -> &Pool {
        &self.pools[id as usize]
    }

    /// Argument indices of the entry at offset `off` inside `block`.
    pub fn decode(&self, block: &Block, mut off: u64, out: &mut Vec<u64>) {
        out.clear();
        out.resize(block.args.len(), 0);
        for j in (0..block.args.len()).rev() {
            let n = self.pool(block.args[j].pool).count();
            out[j] = off % n;
            off /= n;
        }
    }

    /// Materializes entry `idx` of a pool.
    pub fn expr_in(&self, pool: PoolId, idx: u64) -> Expr {
        let p = self.pool(pool);
        let (b, off) = p.locate(p.raw_index(idx));
        let block = &p.blocks[b];
        let mut tuple = Vec::new();
        self.decode(block, off, &mut tuple);
        let head = match block.head {
            Head::Var(i) => Expr::Var(i as usize),
            Head::Prim(k) => Expr::prim(&self.library.prims()[k as usize]),
        };
        let args = block.args.iter().zip(&tuple).map(|(slot, &i)| {
            let body = self.expr_in(slot.pool, i);
            slot.params
                .iter()
                .rev()
                .fold(body, |acc, ty| Expr::lam(ty.clone(), acc))
        });
        Expr::apply(head, args)
    }
}

fn check_signature(p: &crate::term::Prim) -> Result<Signature, EnumError> {
    let (args, ret) = p.ty.uncurry();
    let mut slots = Vec::with_capacity(args.len());
    for a in args {
        let (params, r) = a.uncurry();
        if params.iter().any(|t| t.is_func()) {
            return Err(EnumError::UnsupportedPrim(p.id.clone()));
        }
        slots.push((
            params.into_iter().cloned().collect::<Vec<_>>().into(),
            r.clone(),
        ));
    }
    Ok(Signature {
        ret: ret.clone(),
        slots,
    })
}

/// Enumerates every canonical term of type `target` up to `d_max`.
pub fn enumerate(library: &Library, target: &Ty, d_max: u32) -> Result<CandidateSpace, EnumError> {
    enumerate_with(library, target, d_max, &EnumOptions::default())
}

pub fn enumerate_with(
    library: &Library,
    target: &Ty,
    d_max: u32,
    options: &EnumOptions,
) -> Result<CandidateSpace, EnumError> {
    if d_max == 0 {
        return Err(EnumError::ZeroDepth);
    }
    let sigs = library
        .prims()
        .iter()
        .map(|p| check_signature(p))
        .collect::<Result<Vec<_>, _>>()?;
    let (params, ret) = target.uncurry();
    if params.iter().any(|t| t.is_func()) {
        return Err(EnumError::UnsupportedPrim("<target>".into()));
    }
    let root_env: Arc<[Ty]> = params.iter().rev().map(|t| (*t).clone()).collect();
    let probes = options.prune_probes.as_ref().map(|inputs| {
        let envs: Vec<Vec<Value>> = inputs
            .iter()
            .map(|s| vec![Value::text(s.as_str())])
            .collect();
        let memo = MemoTable::new(envs.len());
        (envs, memo)
    });
    let mut g = Gen {
        library,
        sigs,
        envs: Vec::new(),
        env_index: HashMap::new(),
        pools: Vec::new(),
        pool_index: HashMap::new(),
        d_max,
        probes,
    };
    g.env_id(root_env);
    let ret = ret.clone();
    let mut roots = Vec::new();
    let mut total: u64 = 0;
    let mut exceeded = false;
    for d in 0..=d_max {
        let id = g.pool(ROOT_ENV, &ret, d);
        total = total.saturating_add(g.pools[id as usize].count());
        if options.max_candidates.is_some_and(|m| total > m) {
            exceeded = true;
            break;
        }
        roots.push(id);
    }
    let n_pools = g.pools.len();
    let space = CandidateSpace {
        library: library.clone(),
        target: target.clone(),
        d_max,
        envs: g.envs,
        pools: g.pools,
        roots,
        partial: exceeded,
        options: options.clone(),
        bodies: Arc::new((0..n_pools).map(|_| OnceLock::new()).collect()),
    };
    if exceeded {
        return Err(EnumError::BudgetExceeded {
            limit: options.max_candidates.unwrap_or(0),
            partial: Box::new(space),
        });
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_are_lexicographic() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
        assert!(compositions(1, 0).is_empty());
        assert_eq!(compositions(3, 3).len(), 10);
    }
}
