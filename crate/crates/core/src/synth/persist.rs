//! Binary blobs for candidate spaces. The library itself is not stored;
//! decoding needs the library whose fingerprint the blob records.

use std::sync::{Arc, OnceLock};

use crate::dsbk::Library;
use crate::term::Ty;

use super::space::{ArgSlot, Block, CandidateSpace, EnumOptions, Head, Pool};

const MAGIC: &[u8; 8] = b"DSISPACE";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PersistError {
    #[error("not a candidate-space blob")]
    BadMagic,
    #[error("blob version {0} is not supported")]
    Version(u32),
    #[error("blob was built for library fingerprint {0}")]
    Fingerprint(String),
    #[error("blob is truncated or corrupt")]
    Corrupt,
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.0.extend_from_slice(s.as_bytes());
    }
    fn ty(&mut self, t: &Ty) {
        match t {
            Ty::Text => self.u8(0),
            Ty::Char => self.u8(1),
            Ty::Int => self.u8(2),
            Ty::Bool => self.u8(3),
            Ty::List(e) => {
                self.u8(4);
                self.ty(e);
            }
            Ty::Func(a, r) => {
                self.u8(5);
                self.ty(a);
                self.ty(r);
            }
        }
    }
    fn tys(&mut self, ts: &[Ty]) {
        self.u32(ts.len() as u32);
        for t in ts {
            self.ty(t);
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

type R<T> = Result<T, PersistError>;

impl Reader<'_> {
    fn take(&mut self, n: usize) -> R<&[u8]> {
        let end = self.pos.checked_add(n).ok_or(PersistError::Corrupt)?;
        let s = self.buf.get(self.pos..end).ok_or(PersistError::Corrupt)?;
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> R<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> R<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> R<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn len(&mut self) -> R<usize> {
        let n = self.u32()? as usize;
        if n > self.buf.len() - self.pos {
            return Err(PersistError::Corrupt);
        }
        Ok(n)
    }
    fn str(&mut self) -> R<String> {
        let n = self.len()?;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| PersistError::Corrupt)
    }
    fn ty(&mut self) -> R<Ty> {
        self.ty_at(0)
    }
    fn ty_at(&mut self, nest: usize) -> R<Ty> {
        if nest > 64 {
            return Err(PersistError::Corrupt);
        }
        Ok(match self.u8()? {
            0 => Ty::Text,
            1 => Ty::Char,
            2 => Ty::Int,
            3 => Ty::Bool,
            4 => Ty::list(self.ty_at(nest + 1)?),
            5 => {
                let a = self.ty_at(nest + 1)?;
                Ty::func(a, self.ty_at(nest + 1)?)
            }
            _ => return Err(PersistError::Corrupt),
        })
    }
    fn tys(&mut self) -> R<Arc<[Ty]>> {
        let n = self.len()?;
        (0..n).map(|_| self.ty()).collect()
    }
}

pub fn encode_space(space: &CandidateSpace) -> Vec<u8> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(MAGIC);
    w.u32(FORMAT_VERSION);
    w.str(space.library.fingerprint());
    w.ty(&space.target);
    w.u32(space.d_max);
    w.u8(space.partial as u8);
    match space.options.max_candidates {
        Some(m) => {
            w.u8(1);
            w.u64(m);
        }
        None => w.u8(0),
    }
    match &space.options.prune_probes {
        Some(p) => {
            w.u8(1);
            w.u32(p.len() as u32);
            for s in p {
                w.str(s);
            }
        }
        None => w.u8(0),
    }
    w.u32(space.envs.len() as u32);
    for e in &space.envs {
        w.tys(e);
    }
    w.u32(space.pools.len() as u32);
    for p in &space.pools {
        w.u32(p.env);
        w.ty(&p.ty);
        w.u32(p.depth);
        w.u64(p.raw_count);
        w.u32(p.blocks.len() as u32);
        for b in &p.blocks {
            match b.head {
                Head::Var(i) => {
                    w.u8(0);
                    w.u32(i);
                }
                Head::Prim(k) => {
                    w.u8(1);
                    w.u32(k);
                }
            }
            w.u64(b.count);
            w.u32(b.args.len() as u32);
            for a in &b.args {
                w.u32(a.pool);
                w.tys(&a.params);
            }
        }
        match &p.kept {
            Some(k) => {
                w.u8(1);
                w.u32(k.len() as u32);
                for &i in k.iter() {
                    w.u64(i);
                }
            }
            None => w.u8(0),
        }
    }
    w.u32(space.roots.len() as u32);
    for &r in &space.roots {
        w.u32(r);
    }
    w.0
}

pub fn decode_space(bytes: &[u8], library: &Library) -> Result<CandidateSpace, PersistError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(8).map_err(|_| PersistError::BadMagic)? != MAGIC {
        return Err(PersistError::BadMagic);
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(PersistError::Version(version));
    }
    let fp = r.str()?;
    if fp != library.fingerprint() {
        return Err(PersistError::Fingerprint(fp));
    }
    let target = r.ty()?;
    let d_max = r.u32()?;
    let partial = r.u8()? != 0;
    let max_candidates = match r.u8()? {
        0 => None,
        _ => Some(r.u64()?),
    };
    let prune_probes = match r.u8()? {
        0 => None,
        _ => {
            let n = r.len()?;
            Some((0..n).map(|_| r.str()).collect::<R<Vec<_>>>()?)
        }
    };
    let n_envs = r.len()?;
    let envs = (0..n_envs).map(|_| r.tys()).collect::<R<Vec<_>>>()?;
    let n_pools = r.len()?;
    let n_prims = library.prims().len() as u32;
    let mut pools = Vec::with_capacity(n_pools);
    for _ in 0..n_pools {
        let env = r.u32()?;
        let ty = r.ty()?;
        let depth = r.u32()?;
        let raw_count = r.u64()?;
        let n_blocks = r.len()?;
        let mut blocks = Vec::with_capacity(n_blocks);
        let mut starts = Vec::with_capacity(n_blocks);
        let mut at: u64 = 0;
        for _ in 0..n_blocks {
            let head = match r.u8()? {
                0 => Head::Var(r.u32()?),
                1 => {
                    let k = r.u32()?;
                    if k >= n_prims {
                        return Err(PersistError::Corrupt);
                    }
                    Head::Prim(k)
                }
                _ => return Err(PersistError::Corrupt),
            };
            let count = r.u64()?;
            let n_args = r.len()?;
            let mut args = Vec::with_capacity(n_args);
            for _ in 0..n_args {
                let pool = r.u32()?;
                if pool as usize >= pools.len() {
                    return Err(PersistError::Corrupt);
                }
                args.push(ArgSlot {
                    pool,
                    params: r.tys()?,
                });
            }
            starts.push(at);
            at = at.saturating_add(count);
            blocks.push(Block { head, args, count });
        }
        if at != raw_count || env as usize >= envs.len() {
            return Err(PersistError::Corrupt);
        }
        let kept = match r.u8()? {
            0 => None,
            _ => {
                let n = r.len()?;
                let k = (0..n).map(|_| r.u64()).collect::<R<Vec<_>>>()?;
                if k.iter().any(|&i| i >= raw_count) {
                    return Err(PersistError::Corrupt);
                }
                Some(k.into())
            }
        };
        pools.push(Pool {
            env,
            ty,
            depth,
            blocks,
            starts,
            raw_count,
            kept,
        });
    }
    let n_roots = r.len()?;
    let roots = (0..n_roots)
        .map(|_| {
            let id = r.u32()?;
            if id as usize >= pools.len() {
                return Err(PersistError::Corrupt);
            }
            Ok(id)
        })
        .collect::<R<Vec<_>>>()?;
    if r.pos != bytes.len() {
        return Err(PersistError::Corrupt);
    }
    Ok(CandidateSpace {
        library: library.clone(),
        target,
        d_max,
        envs,
        bodies: Arc::new((0..pools.len()).map(|_| OnceLock::new()).collect()),
        pools,
        roots,
        partial,
        options: EnumOptions {
            max_candidates,
            prune_probes,
        },
    })
}
