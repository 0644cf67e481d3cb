//! On-disk cache of quotient groups, keyed by presentation hash and depth.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::QuotientGroup;
use crate::error::{Error, Result};
use crate::selfsim::Presentation;

pub const CACHE_SCHEMA: &str = "treetwist.quotient/1";

#[derive(Serialize, Deserialize)]
struct Header {
    schema: String,
    presentation: String,
    depth: usize,
    order: usize,
    generators: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Record {
    /// Breadth-first label images, hex encoded.
    key: String,
    rep_word: String,
    parent: u32,
    letter: u16,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    header: Header,
    elements: Vec<Record>,
}

pub fn cache_path(dir: &Path, p: &Presentation, depth: usize) -> PathBuf {
    dir.join(format!("{}-d{depth}.json", p.hash()))
}

pub fn save(dir: &Path, p: &Presentation, q: &QuotientGroup) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let elements = (0..q.order())
        .map(|id| {
            let (parent, letter) = q.parent_record(id);
            Record {
                key: hex::encode(q.key(id)),
                rep_word: q.rep_word(id).to_string(),
                parent,
                letter,
            }
        })
        .collect();
    let file = CacheFile {
        header: Header {
            schema: CACHE_SCHEMA.into(),
            presentation: q.presentation_hash().to_string(),
            depth: q.depth(),
            order: q.order(),
            generators: q.generator_names().to_vec(),
        },
        elements,
    };
    let path = cache_path(dir, p, q.depth());
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(&file)?)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads a cached quotient. A missing file is `Ok(None)`; a file whose
/// header does not match `p` and `depth`, or whose contents fail the
/// closure checks, is an error.
pub fn load(dir: &Path, p: &Presentation, depth: usize) -> Result<Option<QuotientGroup>> {
    let path = cache_path(dir, p, depth);
    let bytes = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let file: CacheFile = serde_json::from_slice(&bytes)?;
    let h = &file.header;
    let mismatch = |what: &str| Error::invalid("quotient cache", format!("{}: {what} mismatch", path.display()));
    if h.schema != CACHE_SCHEMA {
        return Err(mismatch("schema"));
    }
    if h.presentation != p.hash() {
        return Err(mismatch("presentation hash"));
    }
    if h.depth != depth {
        return Err(mismatch("depth"));
    }
    if h.generators != p.generator_names() || h.order != file.elements.len() {
        return Err(mismatch("header"));
    }
    let mut keys = Vec::with_capacity(file.elements.len());
    let mut parents = Vec::with_capacity(file.elements.len());
    for r in &file.elements {
        let key = hex::decode(&r.key).map_err(|e| Error::invalid("quotient cache", e))?;
        keys.push(key.into_boxed_slice());
        parents.push((r.parent, r.letter));
    }
    let q = QuotientGroup::from_parts(p, depth, keys, parents)?;
    for (id, r) in file.elements.iter().enumerate() {
        if q.rep_word(id).to_string() != r.rep_word {
            return Err(mismatch("rep_word"));
        }
    }
    Ok(Some(q))
}

/// Loads from `dir` if present, otherwise builds and stores.
pub fn build_cached(dir: Option<&Path>, p: &Presentation, depth: usize, cap: usize) -> Result<QuotientGroup> {
    let Some(dir) = dir else {
        return QuotientGroup::build(p, depth, cap);
    };
    if let Some(q) = load(dir, p, depth)? {
        return Ok(q);
    }
    let q = QuotientGroup::build(p, depth, cap)?;
    save(dir, p, &q)?;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::DEFAULT_CAP;
    use crate::selfsim::{grigorchuk, gupta_sidki};

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = grigorchuk();
        let built = build_cached(Some(dir.path()), &p, 3, DEFAULT_CAP).unwrap();
        let loaded = load(dir.path(), &p, 3).unwrap().unwrap();
        assert_eq!(loaded.order(), built.order());
        for id in 0..built.order() {
            assert_eq!(loaded.key(id), built.key(id));
            assert_eq!(loaded.rep_word(id), built.rep_word(id));
        }
        assert!(load(dir.path(), &p, 2).unwrap().is_none());
        assert!(load(dir.path(), &gupta_sidki(), 3).unwrap().is_none());
    }

    #[test]
    fn rejects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let p = grigorchuk();
        let q = QuotientGroup::build(&p, 2, DEFAULT_CAP).unwrap();
        let path = save(dir.path(), &p, &q).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen("\"depth\":2", "\"depth\":3", 1)).unwrap();
        assert!(load(dir.path(), &p, 2).is_err());
    }
}
