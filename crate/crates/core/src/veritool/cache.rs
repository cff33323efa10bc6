//! On-disk class group cache: one JSON file per field, replaced atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::classgroup::ClassGroupData;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::numberfield::{FieldKind, FieldLabel, NumberFieldOrder};

pub const SCHEMA_VERSION: u32 = 1;

/// Enough of the order to detect an entry written for a different basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub degree: usize,
    pub defining_poly: Vec<i128>,
    pub basis: Mat,
    pub denominator: i128,
    pub discriminant: i128,
}

impl OrderSummary {
    pub fn of(order: &NumberFieldOrder) -> Self {
        OrderSummary {
            degree: order.degree,
            defining_poly: order.defining_poly.clone(),
            basis: order.basis.clone(),
            denominator: order.denominator,
            discriminant: order.discriminant,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub field: FieldLabel,
    pub order: OrderSummary,
    /// Factor base, relations, SNF, certificate, and the seed/effort used.
    pub class_group: ClassGroupData,
}

impl CacheEntry {
    pub fn new(order: &NumberFieldOrder, class_group: ClassGroupData) -> Self {
        CacheEntry { schema_version: SCHEMA_VERSION, field: order.label, order: OrderSummary::of(order), class_group }
    }
}

#[derive(Debug)]
pub enum Lookup {
    Hit(Box<CacheEntry>),
    Miss,
    /// Written under another schema version; recompute silently.
    Stale(u32),
    /// Unreadable or inconsistent; recompute and warn.
    Corrupt(String),
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, field: FieldLabel) -> PathBuf {
        let tag = match field.kind {
            FieldKind::Cubic => "L",
            FieldKind::Sextic => "k",
        };
        self.dir.join(format!("{tag}-{}.json", field.d))
    }

    /// `order` is the freshly built order the entry must describe.
    pub fn load(&self, order: &NumberFieldOrder) -> Lookup {
        let path = self.path(order.label);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        #[derive(Deserialize)]
        struct Version {
            schema_version: u32,
        }
        match serde_json::from_str::<Version>(&text) {
            Ok(v) if v.schema_version != SCHEMA_VERSION => return Lookup::Stale(v.schema_version),
            Ok(_) => {}
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        }
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => return Lookup::Corrupt(format!("{}: {e}", path.display())),
        };
        if entry.field != order.label || entry.class_group.field != order.label {
            return Lookup::Corrupt(format!("{}: entry is for {}", path.display(), entry.field));
        }
        if entry.order != OrderSummary::of(order) {
            return Lookup::Corrupt(format!("{}: integral basis differs", path.display()));
        }
        Lookup::Hit(Box::new(entry))
    }

    /// Write to a private temporary file, then rename over the target, so
    /// readers never see a partial entry and concurrent writers of one key
    /// resolve to whichever renamed last.
    pub fn store(&self, entry: &CacheEntry) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(format!("{}: {e}", self.dir.display())))?;
        let path = self.path(entry.field);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("entry"),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let text = serde_json::to_string(entry).map_err(|e| Error::Cache(e.to_string()))?;
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        };
        write().map_err(|e| {
            let _ = fs::remove_file(&tmp);
            Error::Cache(format!("{}: {e}", path.display()))
        })?;
        Ok(path)
    }
}
