//! Generator data for the shipped reflection groups.
//!
//! Entries are embedded at build time. Setting `LOGARR_CATALOG` to a
//! directory of `*.json` files replaces the embedded set.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Matrix;
use crate::scalar::CycNum;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub rank: usize,
    pub cyclotomic_order: u32,
    pub generators: Vec<Matrix<CycNum>>,
}

const EMBEDDED: &[(&str, &str)] = &[
    ("I2_3", include_str!("../../catalog/I2_3.json")),
    ("I2_4", include_str!("../../catalog/I2_4.json")),
    ("I2_5", include_str!("../../catalog/I2_5.json")),
    ("I2_6", include_str!("../../catalog/I2_6.json")),
    ("A3", include_str!("../../catalog/A3.json")),
    ("G4", include_str!("../../catalog/G4.json")),
];

pub const CATALOG_ENV: &str = "LOGARR_CATALOG";

fn parse(key: &str, text: &str) -> Result<CatalogEntry> {
    let e: CatalogEntry = serde_json::from_str(text).map_err(|err| Error::Catalog(format!("{key}: {err}")))?;
    if e.generators.is_empty() {
        return Err(Error::Catalog(format!("{key}: no generators")));
    }
    for g in &e.generators {
        if g.len() != e.rank || g.iter().any(|r| r.len() != e.rank) {
            return Err(Error::Catalog(format!("{key}: generator is not {0}x{0}", e.rank)));
        }
        for v in g.iter().flatten() {
            if e.cyclotomic_order % v.order() != 0 {
                return Err(Error::Catalog(format!(
                    "{key}: entry of order {} outside Q(zeta_{})",
                    v.order(),
                    e.cyclotomic_order
                )));
            }
        }
    }
    Ok(e)
}

/// All catalog entries, sorted by file key.
pub fn entries() -> Result<Vec<(String, CatalogEntry)>> {
    match std::env::var_os(CATALOG_ENV) {
        Some(dir) => from_dir(Path::new(&dir)),
        None => EMBEDDED
            .iter()
            .map(|(k, t)| Ok((k.to_string(), parse(k, t)?)))
            .collect(),
    }
}

fn from_dir(dir: &Path) -> Result<Vec<(String, CatalogEntry)>> {
    let rd = std::fs::read_dir(dir).map_err(|e| Error::Catalog(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for ent in rd {
        let path = ent.map_err(|e| Error::Catalog(e.to_string()))?.path();
        if path.extension().and_then(|s| s.to_str()) != Some("json") {
            continue;
        }
        let key = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
        out.push((key.clone(), parse(&key, &text)?));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn canon(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_uppercase())
        .collect()
}

/// Looks a group up by file key, name or alias, ignoring case and
/// punctuation (`B2`, `I2(4)` and `i2_4` name the same entry).
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let want = canon(name);
    entries()?
        .into_iter()
        .find(|(k, e)| canon(k) == want || canon(&e.name) == want || e.aliases.iter().any(|a| canon(a) == want))
        .map(|(_, e)| e)
        .ok_or_else(|| Error::UnknownGroup(name.to_string()))
}

/// Display names of all entries.
pub fn names() -> Result<Vec<String>> {
    Ok(entries()?.into_iter().map(|(_, e)| e.name).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_entries_parse() {
        let all = entries().unwrap();
        assert_eq!(all.len(), 6);
        assert_eq!(lookup("b2").unwrap().name, "I2(4)");
        assert_eq!(lookup("I2(6)").unwrap().aliases, vec!["G2".to_string()]);
        assert!(matches!(lookup("E8"), Err(Error::UnknownGroup(_))));
    }
}
