use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CensusConfig, CensusError, CensusRecord};

pub const CHECKPOINT_VERSION: u32 = 1;

/// Big integers travel as decimal strings.
pub(crate) mod big {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))
    }
}

/// The parts of a configuration that change which records a run writes.
/// Worker count, chunk size and limit may differ between resumptions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunKey {
    pub group: [usize; 3],
    pub coeff_bound: u32,
    pub support_bound: usize,
    pub det_bound: String,
    pub canonical_only: bool,
}

impl RunKey {
    fn of(cfg: &CensusConfig) -> Self {
        let g = &cfg.group;
        RunKey {
            group: [g.p(), g.r(), g.n()],
            coeff_bound: cfg.coeff_bound,
            support_bound: cfg.support_bound.min(g.order()),
            det_bound: cfg.det_bound.to_string(),
            canonical_only: cfg.canonical_only,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub key: RunKey,
    pub next_cursor: u64,
    pub store_bytes: u64,
    pub records: u64,
    pub violations: u64,
    pub complete: bool,
}

pub(crate) fn default_checkpoint(store: &Path) -> PathBuf {
    let mut s = store.as_os_str().to_owned();
    s.push(".ckpt.json");
    PathBuf::from(s)
}

/// `foo.jsonl` → `foo.compact.jsonl`.
pub fn compact_path(store: &Path) -> PathBuf {
    let s = store.to_string_lossy();
    match s.strip_suffix(".jsonl") {
        Some(stem) => PathBuf::from(format!("{stem}.compact.jsonl")),
        None => PathBuf::from(format!("{s}.compact.jsonl")),
    }
}

fn io_err(path: &Path, e: io::Error) -> CensusError {
    if e.kind() == io::ErrorKind::StorageFull {
        CensusError::StorageFull(path.to_path_buf())
    } else {
        CensusError::Io { path: path.to_path_buf(), msg: e.to_string() }
    }
}

pub(crate) struct StoreWriter {
    out: BufWriter<File>,
    path: PathBuf,
    bytes: u64,
}

impl StoreWriter {
    pub(crate) fn append(&mut self, rec: &CensusRecord) -> Result<(), CensusError> {
        let mut line = serde_json::to_string(rec).expect("records serialize");
        line.push('\n');
        self.out.write_all(line.as_bytes()).map_err(|e| io_err(&self.path, e))?;
        self.bytes += line.len() as u64;
        Ok(())
    }

    pub(crate) fn sync(&mut self) -> Result<(), CensusError> {
        self.out.flush().map_err(|e| io_err(&self.path, e))?;
        self.out.get_ref().sync_data().map_err(|e| io_err(&self.path, e))
    }

    pub(crate) fn bytes(&self) -> u64 {
        self.bytes
    }
}

pub(crate) struct Resume {
    pub checkpoint: Checkpoint,
    pub writer: StoreWriter,
    pub resumed: bool,
}

pub(crate) fn read_checkpoint(path: &Path) -> Result<Checkpoint, CensusError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let ck: Checkpoint =
        serde_json::from_str(&text).map_err(|e| CensusError::CorruptCheckpoint(format!("{}: {e}", path.display())))?;
    if ck.version != CHECKPOINT_VERSION {
        return Err(CensusError::CorruptCheckpoint(format!("unknown checkpoint version {}", ck.version)));
    }
    Ok(ck)
}

pub(crate) fn open_run(cfg: &CensusConfig, restart: bool) -> Result<Resume, CensusError> {
    let key = RunKey::of(cfg);
    let ck_path = &cfg.checkpoint_path;
    let store = &cfg.store_path;
    if !restart && ck_path.exists() {
        let ck = read_checkpoint(ck_path)?;
        if ck.key != key {
            return Err(CensusError::CorruptCheckpoint(format!(
                "{} was written for a different configuration",
                ck_path.display()
            )));
        }
        let file = OpenOptions::new().read(true).write(true).open(store).map_err(|e| io_err(store, e))?;
        let len = file.metadata().map_err(|e| io_err(store, e))?.len();
        if len < ck.store_bytes {
            return Err(CensusError::CorruptCheckpoint(format!(
                "store holds {len} bytes but the checkpoint expects {}",
                ck.store_bytes
            )));
        }
        file.set_len(ck.store_bytes).map_err(|e| io_err(store, e))?;
        drop(file);
        let file = OpenOptions::new().append(true).open(store).map_err(|e| io_err(store, e))?;
        let writer = StoreWriter { out: BufWriter::new(file), path: store.clone(), bytes: ck.store_bytes };
        return Ok(Resume { checkpoint: ck, writer, resumed: true });
    }
    if restart {
        match fs::remove_file(ck_path) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(io_err(ck_path, e)),
        }
    }
    let file = File::create(store).map_err(|e| io_err(store, e))?;
    let checkpoint = Checkpoint {
        version: CHECKPOINT_VERSION,
        key,
        next_cursor: 0,
        store_bytes: 0,
        records: 0,
        violations: 0,
        complete: false,
    };
    Ok(Resume { checkpoint, writer: StoreWriter { out: BufWriter::new(file), path: store.clone(), bytes: 0 }, resumed: false })
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CensusError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
    f.write_all(bytes).map_err(|e| io_err(&tmp, e))?;
    f.sync_all().map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        // best effort: make the rename itself durable
        if let Ok(d) = File::open(dir) {
            let _ = d.sync_all();
        }
    }
    Ok(())
}

pub(crate) fn write_checkpoint(path: &Path, ck: &Checkpoint) -> Result<(), CensusError> {
    let text = serde_json::to_string_pretty(ck).expect("checkpoint serializes");
    write_atomic(path, text.as_bytes())
}

pub fn read_store(path: &Path) -> Result<Vec<CensusRecord>, CensusError> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| CensusError::BadRecord { line: i + 1, msg: e.to_string() })?;
        out.push(rec);
    }
    Ok(out)
}

/// Writes one record per distinct `D` (the earliest cursor), sorted by
/// `D`, next to the store. Returns the compacted path.
pub fn compact_store(store: &Path) -> Result<PathBuf, CensusError> {
    let mut best: BTreeMap<num_bigint::BigInt, CensusRecord> = BTreeMap::new();
    for rec in read_store(store)? {
        match best.get(&rec.d) {
            Some(old) if old.cursor <= rec.cursor => {}
            _ => {
                best.insert(rec.d.clone(), rec);
            }
        }
    }
    let mut text = String::new();
    for rec in best.values() {
        text.push_str(&serde_json::to_string(rec).expect("records serialize"));
        text.push('\n');
    }
    let out = compact_path(store);
    write_atomic(&out, text.as_bytes())?;
    Ok(out)
}
