//! On-disk cache of character tables, re-validated by both orthogonality relations on load.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{CycField, CycNum, Rat};
use crate::chartab::{CharacterTable, ChartabError, ClassContext};
use crate::groups::{ConjClassData, GroupInstance, GroupLabel};
use crate::instance::instance_modulus;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "GGLAT_CACHE_DIR";

pub const CACHE_FORMAT: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O error at {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("CacheCorrupt: {}: {reason}", path.display())]
    CacheCorrupt { path: PathBuf, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    /// The entry failed validation and the table was recomputed.
    CorruptRecomputed,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    format: u32,
    group: GroupLabel,
    q: u32,
    modulus: u32,
    reps: Vec<u32>,
    /// `characters[i][c]` is the power-basis coordinate list of `chi_i` at class `c`.
    characters: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub file: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> TableCache {
        TableCache { dir: dir.into() }
    }

    /// The cache named by an explicit path, or else by the environment variable.
    pub fn resolve(explicit: Option<&Path>) -> Option<TableCache> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(TableCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, label: GroupLabel, q: u32) -> PathBuf {
        self.dir.join(format!("{}-q{q}.json", label.name().to_ascii_lowercase()))
    }

    /// Reads and re-validates the table for `g`; `Ok(None)` when there is no entry.
    pub fn load(&self, g: &GroupInstance, cc: &ConjClassData, field: &Arc<CycField>) -> Result<Option<CharacterTable>, CacheError> {
        let path = self.path(g.label(), g.q());
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        decode(&text, g, cc, field).map(Some).map_err(|reason| CacheError::CacheCorrupt { path, reason })
    }

    /// Writes through a temporary file and a rename so readers never see a partial entry.
    pub fn store(&self, g: &GroupInstance, cc: &ConjClassData, table: &CharacterTable) -> Result<(), CacheError> {
        let path = self.path(g.label(), g.q());
        let io = |source| CacheError::Io { path: path.clone(), source };
        fs::create_dir_all(&self.dir).map_err(io)?;
        let file = TableFile {
            format: CACHE_FORMAT,
            group: g.label(),
            q: g.q(),
            modulus: instance_modulus(g.p(), g.q()),
            reps: cc.reps().to_vec(),
            characters: table
                .chars()
                .iter()
                .map(|chi| chi.values().iter().map(|v| v.coords().iter().map(Rat::to_string).collect()).collect())
                .collect(),
        };
        let text = serde_json::to_string(&file).expect("table entries serialize");
        let tmp = self.dir.join(format!(".{}.{}.tmp", path.file_name().unwrap().to_string_lossy(), std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(text.as_bytes()).and_then(|_| f.sync_all()).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }

    /// Loads the table, recomputing (and rewriting) it when the entry is missing or corrupt.
    pub fn table_for(
        &self,
        g: &GroupInstance,
        cc: &ConjClassData,
        field: &Arc<CycField>,
        modulus: u32,
    ) -> Result<(CharacterTable, CacheStatus, Option<CacheError>), ChartabError> {
        let (status, err) = match self.load(g, cc, field) {
            Ok(Some(t)) => return Ok((t, CacheStatus::Hit, None)),
            Ok(None) => (CacheStatus::Miss, None),
            Err(e @ CacheError::CacheCorrupt { .. }) => (CacheStatus::CorruptRecomputed, Some(e)),
            Err(e) => (CacheStatus::Miss, Some(e)),
        };
        let table = CharacterTable::compute(g, cc, field, modulus)?;
        let err = self.store(g, cc, &table).err().or(err);
        Ok((table, status, err))
    }

    pub fn entries(&self) -> Result<Vec<PathBuf>, CacheError> {
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(source) => return Err(CacheError::Io { path: self.dir.clone(), source }),
        };
        let mut out = Vec::new();
        for entry in rd {
            let path = entry.map_err(|source| CacheError::Io { path: self.dir.clone(), source })?.path();
            let name = path.file_name().unwrap_or_default().to_string_lossy();
            if path.extension().is_some_and(|e| e == "json") && !name.starts_with('.') {
                out.push(path);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Removes every entry, returning how many were deleted.
    pub fn clear(&self) -> Result<usize, CacheError> {
        let entries = self.entries()?;
        for path in &entries {
            fs::remove_file(path).map_err(|source| CacheError::Io { path: path.clone(), source })?;
        }
        Ok(entries.len())
    }

    /// Re-checks every entry against freshly enumerated classes.
    pub fn validate(&self) -> Result<Vec<EntryReport>, CacheError> {
        let mut out = Vec::new();
        for path in self.entries()? {
            let file = path.file_name().unwrap().to_string_lossy().into_owned();
            let result = fs::read_to_string(&path).map_err(|e| e.to_string()).and_then(|text| {
                let head: TableFile = serde_json::from_str(&text).map_err(|e| format!("unreadable: {e}"))?;
                let g = GroupInstance::build(head.group, head.q).map_err(|e| e.to_string())?;
                if path != self.path(g.label(), g.q()) {
                    return Err(format!("entry for {}(q={}) stored under the wrong name", g.label(), g.q()));
                }
                let cc = g.conjugacy_classes();
                let field = CycField::get(instance_modulus(g.p(), g.q()));
                decode(&text, &g, &cc, &field).map(|t| format!("{}(q={}): {} characters", g.label(), g.q(), t.len()))
            });
            out.push(match result {
                Ok(detail) => EntryReport { file, ok: true, detail },
                Err(reason) => EntryReport { file, ok: false, detail: format!("CacheCorrupt: {reason}") },
            });
        }
        Ok(out)
    }
}

fn decode(text: &str, g: &GroupInstance, cc: &ConjClassData, field: &Arc<CycField>) -> Result<CharacterTable, String> {
    let file: TableFile = serde_json::from_str(text).map_err(|e| format!("unreadable: {e}"))?;
    if file.format != CACHE_FORMAT {
        return Err(format!("format {} (expected {CACHE_FORMAT})", file.format));
    }
    if (file.group, file.q) != (g.label(), g.q()) {
        return Err(format!("entry is for {}(q={})", file.group, file.q));
    }
    if file.modulus != instance_modulus(g.p(), g.q()) || file.reps != cc.reps() {
        return Err("class data does not match this build".into());
    }
    let mut values = Vec::with_capacity(file.characters.len());
    for (i, row) in file.characters.iter().enumerate() {
        if row.len() != cc.len() {
            return Err(format!("character {i} has {} values", row.len()));
        }
        let mut out = Vec::with_capacity(row.len());
        for coords in row {
            let coords: Vec<Rat> = coords
                .iter()
                .map(|c| c.parse::<Rat>().map_err(|e| format!("character {i}: bad coordinate '{c}': {e}")))
                .collect::<Result<_, _>>()?;
            out.push(CycNum::from_coords(field, &coords).map_err(|e| format!("character {i}: {e}"))?);
        }
        values.push(out);
    }
    CharacterTable::from_values(ClassContext::new(g, cc, field), values).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group() -> (GroupInstance, ConjClassData, Arc<CycField>) {
        let g = GroupInstance::build(GroupLabel::SL2, 3).unwrap();
        let cc = g.conjugacy_classes();
        let field = CycField::get(instance_modulus(3, 3));
        (g, cc, field)
    }

    #[test]
    fn round_trip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path());
        let (g, cc, field) = group();
        let (t, status, err) = cache.table_for(&g, &cc, &field, instance_modulus(3, 3)).unwrap();
        assert_eq!((status, err.is_none()), (CacheStatus::Miss, true));
        let (t2, status, _) = cache.table_for(&g, &cc, &field, instance_modulus(3, 3)).unwrap();
        assert_eq!(status, CacheStatus::Hit);
        assert_eq!(t.chars(), t2.chars());
        assert!(cache.validate().unwrap().iter().all(|e| e.ok));

        let path = cache.path(g.label(), g.q());
        let text = fs::read_to_string(&path).unwrap();
        let mut file: TableFile = serde_json::from_str(&text).unwrap();
        file.characters[1][0][0] = "7".into();
        fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        let report = cache.validate().unwrap();
        assert!(!report[0].ok && report[0].detail.starts_with("CacheCorrupt"), "{report:?}");
        assert!(matches!(cache.load(&g, &cc, &field), Err(CacheError::CacheCorrupt { .. })));
        let (t3, status, _) = cache.table_for(&g, &cc, &field, instance_modulus(3, 3)).unwrap();
        assert_eq!(status, CacheStatus::CorruptRecomputed);
        assert_eq!(t.chars(), t3.chars());

        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.validate().unwrap().is_empty());
    }

    #[test]
    fn missing_dir_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path().join("absent"));
        assert!(cache.validate().unwrap().is_empty());
        assert_eq!(cache.clear().unwrap(), 0);
    }
}
