//! Lazily built group data, with the named class report cached on disk.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use delpezzo_core::weyl::{simple_reflections, GROUP_ORDER};
use delpezzo_core::{named_classes, ClassData, ClassReport, ClassTable, WeylElement, WeylGroup};
use sha2::{Digest, Sha256};

use crate::CliError;

const CACHE_FORMAT: &str = "class-report-v1";

pub struct Context {
    pub data: ClassData,
    cache_dir: Option<PathBuf>,
    group: OnceLock<(WeylGroup, ClassTable)>,
    report: OnceLock<ClassReport>,
}

/// `$XDG_CACHE_HOME/delpezzo`, else `~/.cache/delpezzo`.
pub fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")))?;
    Some(base.join("delpezzo"))
}

/// Hash of the generator matrices and the embedded tables, which together
/// determine the named class report.
pub fn cache_key(data: &ClassData) -> Result<String, CliError> {
    let mut h = Sha256::new();
    h.update(CACHE_FORMAT);
    for s in simple_reflections() {
        for row in s.matrix() {
            for x in row {
                h.update(x.to_le_bytes());
            }
        }
    }
    h.update(serde_json::to_vec(data)?);
    Ok(hex::encode(&h.finalize()[..8]))
}

impl Context {
    /// `cache_dir = None` disables the cache.
    pub fn new(cache_dir: Option<PathBuf>) -> Result<Self, CliError> {
        let data = ClassData::embedded()?;
        data.validate()?;
        Ok(Context {
            data,
            cache_dir,
            group: OnceLock::new(),
            report: OnceLock::new(),
        })
    }

    fn cache_path(&self) -> Result<Option<PathBuf>, CliError> {
        match &self.cache_dir {
            Some(dir) => Ok(Some(dir.join(format!("classes-{}.json", cache_key(&self.data)?)))),
            None => Ok(None),
        }
    }

    /// The enumerated group with validated class names.
    pub fn group(&self) -> Result<&(WeylGroup, ClassTable), CliError> {
        if let Some(g) = self.group.get() {
            return Ok(g);
        }
        let group = WeylGroup::enumerate()?;
        let (table, _) = named_classes(&group, &self.data)?;
        Ok(self.group.get_or_init(|| (group, table)))
    }

    pub fn report(&self) -> Result<&ClassReport, CliError> {
        if let Some(r) = self.report.get() {
            return Ok(r);
        }
        let path = self.cache_path()?;
        if let Some(r) = path.as_deref().and_then(load_report) {
            return Ok(self.report.get_or_init(|| r));
        }
        let report = self.group()?.1.report();
        if let Some(path) = path {
            // A cache that cannot be written only costs time.
            let _ = store_report(&path, &report);
        }
        Ok(self.report.get_or_init(|| report))
    }

    /// Signed label of the class of `w`.
    pub fn identify(&self, w: &WeylElement) -> Result<String, CliError> {
        Ok(self.report()?.identify(w)?.name.clone())
    }
}

fn load_report(path: &Path) -> Option<ClassReport> {
    let text = fs::read_to_string(path).ok()?;
    let report: ClassReport = serde_json::from_str(&text).ok()?;
    let plausible = report.names_resolved
        && report.classes.len() == 60
        && report.group_order == GROUP_ORDER
        && report.classes.iter().map(|c| c.size).sum::<usize>() == GROUP_ORDER;
    plausible.then_some(report)
}

fn store_report(path: &Path, report: &ClassReport) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec_pretty(report)?)?;
    fs::rename(tmp, path)
}
