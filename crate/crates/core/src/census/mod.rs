//! Enumeration of small elements and a persistent store of the values they
//! reach.
//!
//! A run walks cursors `0, 1, 2, …` of an [`Enumerator`] in fixed-size
//! chunks. Each chunk is evaluated in parallel and written in cursor order,
//! then the checkpoint is replaced atomically. Killing a run at any point
//! and resuming it therefore produces the same bytes as an uninterrupted
//! run, whatever the worker count.

pub mod enumerate;
mod store;
pub mod verify;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::check_necessary;
use crate::detengine::factored_determinant;
use crate::groups::{GroupRingElement, GroupSpec};
use crate::par;

pub use enumerate::Enumerator;
pub use store::{compact_path, compact_store, read_store, Checkpoint, CHECKPOINT_VERSION};
pub use verify::{census_verify, census_verify_with, Recheck, VerifyMode, VerifyOptions, VerifyReport};

pub const DEFAULT_CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("invalid census configuration: {0}")]
    InvalidConfig(String),
    #[error("no space left writing {0}")]
    StorageFull(PathBuf),
    #[error("checkpoint unusable ({0}); rerun with --restart to start over")]
    CorruptCheckpoint(String),
    #[error("store {path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("bad store record at line {line}: {msg}")]
    BadRecord { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub group: GroupSpec,
    /// Every coefficient lies in `[−coeff_bound, coeff_bound]`.
    pub coeff_bound: u32,
    pub support_bound: usize,
    /// Only values with `|D| ≤ det_bound` are stored; zero stores all.
    pub det_bound: BigInt,
    pub workers: usize,
    pub checkpoint_path: PathBuf,
    pub store_path: PathBuf,
    /// Stop after this many cursors.
    pub limit: Option<u64>,
    pub chunk_size: u64,
    /// Skip elements that are not the first of their orbit under left
    /// multiplication by powers of `X`.
    pub canonical_only: bool,
}

impl CensusConfig {
    pub fn new(group: GroupSpec, coeff_bound: u32, support_bound: usize, store_path: impl Into<PathBuf>) -> Self {
        let store_path = store_path.into();
        let checkpoint_path = store::default_checkpoint(&store_path);
        CensusConfig {
            group,
            coeff_bound,
            support_bound,
            det_bound: BigInt::zero(),
            workers: 1,
            checkpoint_path,
            store_path,
            limit: None,
            chunk_size: DEFAULT_CHUNK,
            canonical_only: false,
        }
    }

    pub fn validate(&self) -> Result<(), CensusError> {
        if self.workers == 0 {
            return Err(CensusError::InvalidConfig("workers must be at least 1".into()));
        }
        if self.chunk_size == 0 {
            return Err(CensusError::InvalidConfig("chunk size must be at least 1".into()));
        }
        if self.det_bound.is_negative() {
            return Err(CensusError::InvalidConfig("det bound must be non-negative".into()));
        }
        if self.coeff_bound > 1000 {
            return Err(CensusError::InvalidConfig("coefficient bound above 1000".into()));
        }
        Ok(())
    }

    pub fn enumerator(&self) -> Enumerator {
        Enumerator::new(self.group.order(), self.coeff_bound, self.support_bound)
    }

    /// Number of cursors the run will visit.
    pub fn end_cursor(&self) -> u64 {
        let total = self.enumerator().total();
        self.limit.map_or(total, |l| l.min(total))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub cursor: u64,
    #[serde(rename = "D", with = "store::big")]
    pub d: BigInt,
    #[serde(rename = "A", with = "store::big")]
    pub a: BigInt,
    #[serde(rename = "B", with = "store::big")]
    pub b: BigInt,
    pub element: String,
    /// Result of the necessary-condition check run before emission.
    pub necessary_ok: bool,
}

/// Cooperative cancellation, checked between chunks.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::SeqCst);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::SeqCst)
    }

    pub fn flag(&self) -> Arc<AtomicBool> {
        self.0.clone()
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Discard any checkpoint and store and start from cursor 0.
    pub restart: bool,
    pub cancel: Option<CancelToken>,
    /// Stop cleanly after this many chunks, as if interrupted.
    pub stop_after_chunks: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub next_cursor: u64,
    pub end_cursor: u64,
    pub records: u64,
    pub violations: u64,
    pub complete: bool,
    pub resumed_from: Option<u64>,
    pub compact_path: Option<PathBuf>,
}

fn evaluate(cfg: &CensusConfig, en: &Enumerator, cursor: u64) -> Option<CensusRecord> {
    let g = &cfg.group;
    let v = en.unrank(cursor);
    if cfg.canonical_only && !enumerate::is_x_canonical(&v, g.p(), g.n()) {
        return None;
    }
    let e = GroupRingElement::from_flat(g, enumerate::to_bigints(&v));
    let rep = factored_determinant(&e, g).expect("coset representatives are units");
    if !cfg.det_bound.is_zero() && rep.d.abs() > cfg.det_bound {
        return None;
    }
    let necessary_ok = check_necessary(&rep).all_ok();
    Some(CensusRecord { cursor, d: rep.d, a: rep.a, b: rep.b, element: e.to_text(), necessary_ok })
}

/// Runs (or resumes) the census described by `cfg`.
pub fn census_run(cfg: &CensusConfig) -> Result<CensusSummary, CensusError> {
    census_run_with(cfg, &RunOptions::default(), |_| {})
}

/// As [`census_run`], handing every newly stored record to `sink`.
pub fn census_run_with(
    cfg: &CensusConfig,
    opts: &RunOptions,
    mut sink: impl FnMut(&CensusRecord),
) -> Result<CensusSummary, CensusError> {
    cfg.validate()?;
    let en = cfg.enumerator();
    let end = cfg.end_cursor();
    let resume = store::open_run(cfg, opts.restart)?;
    let mut ck = resume.checkpoint;
    let resumed_from = resume.resumed.then_some(ck.next_cursor);
    let mut writer = resume.writer;
    let mut chunks = 0u64;

    while ck.next_cursor < end {
        if opts.cancel.as_ref().is_some_and(CancelToken::is_cancelled) {
            break;
        }
        if opts.stop_after_chunks.is_some_and(|s| chunks >= s) {
            break;
        }
        let hi = ck.next_cursor.saturating_add(cfg.chunk_size).min(end);
        let batch = par::map_range(ck.next_cursor..hi, cfg.workers, |k| evaluate(cfg, &en, k));
        for rec in batch.into_iter().flatten() {
            writer.append(&rec)?;
            ck.records += 1;
            ck.violations += u64::from(!rec.necessary_ok);
            sink(&rec);
        }
        writer.sync()?;
        ck.next_cursor = hi;
        ck.store_bytes = writer.bytes();
        store::write_checkpoint(&cfg.checkpoint_path, &ck)?;
        chunks += 1;
    }

    let complete = ck.next_cursor >= end;
    if ck.complete != complete {
        ck.complete = complete;
        store::write_checkpoint(&cfg.checkpoint_path, &ck)?;
    }
    let compact = if complete { Some(compact_store(&cfg.store_path)?) } else { None };
    Ok(CensusSummary {
        next_cursor: ck.next_cursor,
        end_cursor: end,
        records: ck.records,
        violations: ck.violations,
        complete: ck.complete,
        resumed_from,
        compact_path: compact,
    })
}

/// Loads a checkpoint file, for status reporting.
pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, CensusError> {
    store::read_checkpoint(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::make_group;

    fn cfg(dir: &Path, c: u32, s: usize) -> CensusConfig {
        let g = make_group(5, 2, 4).unwrap();
        let mut cfg = CensusConfig::new(g, c, s, dir.join("store.jsonl"));
        cfg.chunk_size = 64;
        cfg
    }

    #[test]
    fn small_run_reaches_known_values() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = cfg(dir.path(), 1, 3);
        let sum = census_run(&cfg).unwrap();
        assert!(sum.complete);
        assert_eq!(sum.violations, 0);
        let recs = read_store(&cfg.store_path).unwrap();
        assert_eq!(recs.len() as u64, sum.records);
        let ds: std::collections::BTreeSet<BigInt> = recs.iter().map(|r| r.d.clone()).collect();
        for v in [0, 1, -1, 3125] {
            assert!(ds.contains(&BigInt::from(v)), "missing {v}");
        }
        assert_eq!(recs[0].element, "0");
        assert_eq!(recs[0].d, BigInt::zero());
        let compact = read_store(&sum.compact_path.unwrap()).unwrap();
        assert_eq!(compact.len(), ds.len());
        assert!(compact.windows(2).all(|w| w[0].d < w[1].d));
    }

    #[test]
    fn zero_bound_gives_the_zero_element() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = cfg(dir.path(), 0, 20);
        census_run(&cfg).unwrap();
        let recs = read_store(&cfg.store_path).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!((recs[0].d.clone(), recs[0].a.clone(), recs[0].b.clone()), (BigInt::zero(), BigInt::zero(), BigInt::zero()));
    }

    #[test]
    fn det_bound_filters() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = cfg(dir.path(), 1, 2);
        cfg.det_bound = BigInt::from(100);
        census_run(&cfg).unwrap();
        assert!(read_store(&cfg.store_path).unwrap().iter().all(|r| r.d.abs() <= BigInt::from(100)));
    }

    #[test]
    fn canonical_only_keeps_every_value() {
        let dir = tempfile::tempdir().unwrap();
        let full = cfg(dir.path(), 1, 2);
        let mut canon = cfg(dir.path(), 1, 2);
        canon.store_path = dir.path().join("canon.jsonl");
        canon.checkpoint_path = dir.path().join("canon.ckpt.json");
        canon.canonical_only = true;
        let a = census_run(&full).unwrap();
        let b = census_run(&canon).unwrap();
        assert!(b.records < a.records);
        let values = |p: &Path| read_store(p).unwrap().into_iter().map(|r| r.d).collect::<Vec<_>>();
        assert_eq!(values(&a.compact_path.unwrap()), values(&b.compact_path.unwrap()));
    }

    #[test]
    fn invalid_configs() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg(dir.path(), 1, 2);
        c.workers = 0;
        assert!(matches!(census_run(&c), Err(CensusError::InvalidConfig(_))));
    }
}
