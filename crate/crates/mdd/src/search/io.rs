//! Catalogue persistence and search checkpoints.
//!
//! Catalogue files are a single header line followed by newline-delimited
//! graph6 records (the canonical form of each member, in sorted order):
//!
//! ```text
//! #mdd-catalogue v1 delta=3 D=3 defect=4 complete=1 sha=<hex>
//! <graph6>
//! ...
//! ```
//!
//! The sha256 covers the member lines exactly as written. A sidecar
//! `<path>.meta.json` carries provenance (version + option hash); it has
//! no timestamps so identical runs produce identical bytes.

use super::{hex_string, Catalogue, Provenance, SearchError};
use crate::graph6;
use crate::metrics::{check_spec, GraphSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

pub fn save_catalogue(cat: &Catalogue, path: &Path) -> Result<(), SearchError> {
    let lines = cat.canonical_lines();
    let body: String = lines.iter().map(|l| format!("{l}\n")).collect();
    let sha = hex_string(&Sha256::digest(body.as_bytes()));
    let header = format!(
        "#mdd-catalogue v1 delta={} D={} defect={} complete={} sha={}\n",
        cat.spec.delta,
        cat.spec.diameter,
        cat.spec.defect,
        u8::from(cat.complete),
        sha
    );
    let mut file = std::fs::File::create(path)?;
    file.write_all(header.as_bytes())?;
    file.write_all(body.as_bytes())?;

    let meta = MetaFile {
        provenance: cat.provenance.clone(),
        members: lines.len(),
        complete: cat.complete,
    };
    let meta_path = sidecar_path(path);
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

pub fn load_catalogue(path: &Path) -> Result<Catalogue, SearchError> {
    let content = std::fs::read_to_string(path)?;
    let mut lines = content.lines();
    let header = lines
        .next()
        .ok_or_else(|| SearchError::CorruptCatalogue("empty file".into()))?;
    let (spec, complete, sha) = parse_header(header)?;
    let member_lines: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();

    let body: String = member_lines.iter().map(|l| format!("{l}\n")).collect();
    let actual_sha = hex_string(&Sha256::digest(body.as_bytes()));
    if actual_sha != sha {
        return Err(SearchError::CorruptCatalogue(format!(
            "checksum mismatch: header {sha}, actual {actual_sha}"
        )));
    }

    let mut members = Vec::with_capacity(member_lines.len());
    let mut previous: Option<&str> = None;
    for line in &member_lines {
        if let Some(prev) = previous {
            if prev >= line {
                return Err(SearchError::CorruptCatalogue(
                    "members out of canonical order or duplicated".into(),
                ));
            }
        }
        previous = Some(line);
        let g = graph6::parse_graph6(line.as_bytes())
            .map_err(|e| SearchError::CorruptCatalogue(format!("bad member line: {e}")))?;
        let canonical = crate::canon::canonical_form(&g);
        if canonical.as_str() != *line {
            return Err(SearchError::CorruptCatalogue(
                "member line is not a canonical representative".into(),
            ));
        }
        if !check_spec(&g, spec).ok {
            return Err(SearchError::CorruptCatalogue(format!(
                "member does not satisfy the header spec {spec}"
            )));
        }
        members.push(g);
    }

    let meta_path = sidecar_path(path);
    let provenance = match std::fs::read_to_string(&meta_path) {
        Ok(text) => serde_json::from_str::<MetaFile>(&text)
            .map(|m| m.provenance)
            .unwrap_or_else(|_| unknown_provenance()),
        Err(_) => unknown_provenance(),
    };

    Ok(Catalogue {
        spec,
        members,
        complete,
        provenance,
    })
}

fn unknown_provenance() -> Provenance {
    Provenance {
        version: "unknown".into(),
        options_hash: "unknown".into(),
        strategy: "unknown".into(),
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn parse_header(header: &str) -> Result<(GraphSpec, bool, String), SearchError> {
    let corrupt = |msg: &str| SearchError::CorruptCatalogue(msg.into());
    let rest = header
        .strip_prefix("#mdd-catalogue v1 ")
        .ok_or_else(|| corrupt("missing #mdd-catalogue v1 header"))?;
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for item in rest.split_whitespace() {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| corrupt("malformed header field"))?;
        fields.insert(k, v);
    }
    let get = |k: &str| -> Result<&str, SearchError> {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| corrupt(&format!("header missing {k}")))
    };
    let num = |k: &str| -> Result<usize, SearchError> {
        get(k)?
            .parse::<usize>()
            .map_err(|_| corrupt(&format!("header field {k} is not a number")))
    };
    let spec = GraphSpec::new(num("delta")?, num("D")?, num("defect")?)
        .map_err(|e| corrupt(&format!("header spec invalid: {e}")))?;
    let complete = match get("complete")? {
        "1" => true,
        "0" => false,
        _ => return Err(corrupt("complete must be 0 or 1")),
    };
    Ok((spec, complete, get("sha")?.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
struct MetaFile {
    provenance: Provenance,
    members: usize,
    complete: bool,
}

impl From<serde_json::Error> for SearchError {
    fn from(e: serde_json::Error) -> Self {
        SearchError::CorruptCatalogue(format!("meta json: {e}"))
    }
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

/// Frontier checkpoint: subtree keys that have finished, with the member
/// lines they produced. Resume skips completed subtrees; the final merge
/// is deterministic because members are re-sorted globally.
pub(crate) struct CheckpointHandle {
    path: PathBuf,
    state: Mutex<CheckpointData>,
}

#[derive(Debug, Serialize, Deserialize, Default)]
struct CheckpointData {
    options_hash: String,
    done: BTreeMap<String, Vec<String>>,
}

impl CheckpointHandle {
    pub fn load_or_new(path: &Path, options_hash: &str) -> Result<Self, SearchError> {
        let data = match std::fs::read_to_string(path) {
            Ok(text) => {
                let data: CheckpointData = serde_json::from_str(&text)
                    .map_err(|e| SearchError::CorruptCatalogue(format!("checkpoint: {e}")))?;
                if data.options_hash != options_hash {
                    // Different search; start over rather than mixing runs.
                    CheckpointData {
                        options_hash: options_hash.to_string(),
                        done: BTreeMap::new(),
                    }
                } else {
                    data
                }
            }
            Err(_) => CheckpointData {
                options_hash: options_hash.to_string(),
                done: BTreeMap::new(),
            },
        };
        Ok(CheckpointHandle {
            path: path.to_path_buf(),
            state: Mutex::new(data),
        })
    }

    pub fn completed(&self, key: &str) -> Option<Vec<String>> {
        self.state.lock().unwrap().done.get(key).cloned()
    }

    pub fn mark_done(&self, key: &str, members: &[String]) -> Result<(), SearchError> {
        let mut state = self.state.lock().unwrap();
        state.done.insert(key.to_string(), members.to_vec());
        let tmp = self.path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(&*state)?)?;
        std::fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate, SearchOptions};
    use super::*;

    #[test]
    fn roundtrip_preserves_members() {
        let spec = GraphSpec::new(3, 2, 2).unwrap();
        let cat = enumerate(&SearchOptions::new(spec)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("claw.cat");
        save_catalogue(&cat, &path).unwrap();
        let loaded = load_catalogue(&path).unwrap();
        assert_eq!(loaded.spec, cat.spec);
        assert_eq!(loaded.complete, cat.complete);
        assert_eq!(loaded.canonical_lines(), cat.canonical_lines());
        assert_eq!(loaded.provenance, cat.provenance);
    }

    #[test]
    fn tampered_member_is_detected() {
        let spec = GraphSpec::new(3, 2, 2).unwrap();
        let cat = enumerate(&SearchOptions::new(spec)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("claw.cat");
        save_catalogue(&cat, &path).unwrap();
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("Cl\n"); // extra member invalidates the checksum
        std::fs::write(&path, text).unwrap();
        assert!(matches!(
            load_catalogue(&path),
            Err(SearchError::CorruptCatalogue(_))
        ));
    }

    #[test]
    fn mismatched_spec_header_is_detected() {
        let spec = GraphSpec::new(3, 2, 2).unwrap();
        let cat = enumerate(&SearchOptions::new(spec)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("claw.cat");
        save_catalogue(&cat, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        // Claim the members belong to (4,2,-2); re-sign the body so only
        // the spec check can catch it.
        let body: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        let sha = hex_string(&Sha256::digest(body.as_bytes()));
        let forged = format!("#mdd-catalogue v1 delta=4 D=2 defect=2 complete=1 sha={sha}\n{body}");
        std::fs::write(&path, forged).unwrap();
        let err = load_catalogue(&path).unwrap_err();
        assert!(matches!(err, SearchError::CorruptCatalogue(msg) if msg.contains("spec")));
    }
}
