//! Basis-table persistence under `MZV_CACHE_DIR`: one JSON array per basis
//! per weight, loaded into the shared basis cache before computing.

use std::fs;
use std::path::{Path, PathBuf};

use mzv_core::bases::BasisEntryJson;
use mzv_core::{BasisId, BasisTable};

use crate::CliError;

pub const ENV: &str = "MZV_CACHE_DIR";

pub fn dir() -> Option<PathBuf> {
    std::env::var_os(ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn file(dir: &Path, id: BasisId, weight: usize) -> PathBuf {
    dir.join(format!("{}_{}_{weight}.json", id.kind().name(), id.alphabet().name()))
}

fn load(path: &Path, id: BasisId, weight: usize) -> Option<BasisTable> {
    let text = fs::read_to_string(path).ok()?;
    let rows: Vec<BasisEntryJson> = match serde_json::from_str(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("warning: ignoring unreadable cache file {}: {e}", path.display());
            return None;
        }
    };
    match BasisTable::from_json(id, weight, false, &rows) {
        Ok(t) => Some(t),
        Err(e) => {
            eprintln!("warning: ignoring cache file {}: {e}", path.display());
            None
        }
    }
}

/// The full table of `id` at `weight`, from the cache directory when present
/// there; freshly built tables are written back.
pub fn table(id: BasisId, weight: usize) -> Result<BasisTable, CliError> {
    let Some(dir) = dir() else {
        return Ok(BasisTable::build(id, weight, false)?);
    };
    let path = file(&dir, id, weight);
    if let Some(t) = load(&path, id, weight) {
        t.install();
        return Ok(t);
    }
    let t = BasisTable::build(id, weight, false)?;
    fs::create_dir_all(&dir)?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(&t.to_json())?)?;
    fs::rename(&tmp, &path)?;
    Ok(t)
}

/// Load or build every table the relation generators read at `weight`.
pub fn warm(weight: usize) -> Result<(), CliError> {
    if dir().is_none() {
        return Ok(());
    }
    for id in [BasisId::p(mzv_core::Alphabet::X), BasisId::s(mzv_core::Alphabet::X), BasisId::pi(), BasisId::sigma()] {
        table(id, weight)?;
    }
    Ok(())
}
