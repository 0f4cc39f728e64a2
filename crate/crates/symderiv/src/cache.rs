//! On-disk caching of expensive bases.
//!
//! One file per entry.  An entry is a list of sparse rows; each row is a
//! block of text lines
//!
//! ```text
//! degree=4 dim=3 space=sympl:2
//! 1,5,2,6:-3/2
//! ...
//! ```
//!
//! with `dim` the number of coefficient lines in the block, generator
//! indices 1-based, rationals in lowest terms, and lines sorted by the
//! word's canonical index.  Serialization is deterministic, so reloading
//! and re-saving reproduces the bytes exactly.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{Rationals, Scalar, SparseVec};
use crate::tensor::Space;

pub struct CacheStore {
    dir: Option<PathBuf>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl CacheStore {
    /// A cache that never stores anything.
    pub fn disabled() -> CacheStore {
        CacheStore {
            dir: None,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn at(dir: PathBuf) -> Result<CacheStore> {
        fs::create_dir_all(&dir)?;
        Ok(CacheStore {
            dir: Some(dir),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        })
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    fn path_for(&self, key: &str) -> Option<PathBuf> {
        debug_assert!(key
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'));
        self.dir.as_ref().map(|d| d.join(format!("{key}.sdcache")))
    }

    pub fn save_rows(
        &self,
        key: &str,
        space: Space,
        degree: usize,
        rows: &[SparseVec<Scalar>],
    ) -> Result<()> {
        let Some(path) = self.path_for(key) else {
            return Ok(());
        };
        let text = serialize_rows(space, degree, rows);
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load_rows(
        &self,
        key: &str,
        space: Space,
        degree: usize,
    ) -> Option<Vec<SparseVec<Scalar>>> {
        let Some(path) = self.path_for(key) else {
            self.misses.fetch_add(1, Ordering::Relaxed);
            return None;
        };
        let Ok(text) = fs::read_to_string(path) else {
            self.misses.fetch_add(1, Ordering::Relaxed);
            return None;
        };
        match parse_rows(&text, space, degree) {
            Ok(rows) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(rows)
            }
            Err(_) => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }
}

fn space_tag(space: Space) -> String {
    match space {
        Space::Symplectic { genus } => format!("sympl:{genus}"),
        Space::Plain { dim } => format!("plain:{dim}"),
    }
}

fn parse_space_tag(tag: &str) -> Result<Space> {
    let bad = || Error::MalformedCache(format!("bad space tag {tag}"));
    let (kind, param) = tag.split_once(':').ok_or_else(bad)?;
    let param: u16 = param.parse().map_err(|_| bad())?;
    match kind {
        "sympl" => Ok(Space::symplectic(param)),
        "plain" => Ok(Space::plain(param)),
        _ => Err(bad()),
    }
}

pub fn serialize_rows(space: Space, degree: usize, rows: &[SparseVec<Scalar>]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&format!(
            "degree={degree} dim={} space={}\n",
            row.len(),
            space_tag(space)
        ));
        for (index, coeff) in row.iter() {
            let w = space.decode(*index, degree);
            let indices: Vec<String> = w.iter().map(|&l| (l as u32 + 1).to_string()).collect();
            out.push_str(&format!("{}:{}\n", indices.join(","), coeff));
        }
    }
    out
}

pub fn parse_rows(text: &str, space: Space, degree: usize) -> Result<Vec<SparseVec<Scalar>>> {
    let mut rows = Vec::new();
    let mut lines = text.lines().peekable();
    while let Some(header) = lines.next() {
        if header.trim().is_empty() {
            continue;
        }
        let mut deg = None;
        let mut dim = None;
        let mut sp = None;
        for field in header.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::MalformedCache(format!("bad header field {field}")))?;
            match k {
                "degree" => deg = Some(v.parse::<usize>().map_err(|_| bad_header(header))?),
                "dim" => dim = Some(v.parse::<usize>().map_err(|_| bad_header(header))?),
                "space" => sp = Some(parse_space_tag(v)?),
                _ => return Err(bad_header(header)),
            }
        }
        let (deg, dim, sp) = match (deg, dim, sp) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(bad_header(header)),
        };
        if deg != degree || sp != space {
            return Err(Error::MalformedCache(format!(
                "entry is for degree {deg} over {}, expected degree {degree} over {}",
                space_tag(sp),
                space_tag(space)
            )));
        }
        let mut entries = Vec::with_capacity(dim);
        for _ in 0..dim {
            let line = lines
                .next()
                .ok_or_else(|| Error::MalformedCache("truncated block".into()))?;
            let (word_part, coeff_part) = line
                .split_once(':')
                .ok_or_else(|| Error::MalformedCache(format!("bad line {line}")))?;
            let mut letters = Vec::new();
            for piece in word_part.split(',') {
                let i: u32 = piece
                    .parse()
                    .map_err(|_| Error::MalformedCache(format!("bad index in {line}")))?;
                if i == 0 || i > space.dim() as u32 {
                    return Err(Error::MalformedCache(format!("index out of range in {line}")));
                }
                letters.push((i - 1) as u8);
            }
            if letters.len() != degree {
                return Err(Error::MalformedCache(format!("wrong word length in {line}")));
            }
            let coeff = parse_rational(coeff_part)?;
            entries.push((space.encode(&crate::tensor::word(&letters)), coeff));
        }
        rows.push(SparseVec::from_pairs(&Rationals, entries));
    }
    Ok(rows)
}

fn bad_header(header: &str) -> Error {
    Error::MalformedCache(format!("bad header {header}"))
}

fn parse_rational(text: &str) -> Result<Scalar> {
    let bad = || Error::MalformedCache(format!("bad rational {text}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            Ok(Scalar::new(n, d))
        }
        None => {
            let n = BigInt::from_str(text).map_err(|_| bad())?;
            Ok(Scalar::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, sc};
    use crate::tensor::{invariant_subspace, Space};

    #[test]
    fn roundtrip_is_byte_identical() {
        let space = Space::symplectic(2);
        let rows: Vec<SparseVec<Scalar>> = invariant_subspace(space, 3)
            .rows()
            .cloned()
            .collect();
        let text = serialize_rows(space, 3, &rows);
        let parsed = parse_rows(&text, space, 3).unwrap();
        assert_eq!(parsed, rows);
        assert_eq!(serialize_rows(space, 3, &parsed), text);
    }

    #[test]
    fn fractions_survive_the_roundtrip() {
        let space = Space::plain(3);
        let row = SparseVec::from_pairs(
            &Rationals,
            vec![(0u32, ratio(-3, 2)), (5, sc(7)), (8, ratio(1, 9))],
        );
        let text = serialize_rows(space, 2, &[row.clone()]);
        assert!(text.contains("-3/2"));
        let parsed = parse_rows(&text, space, 2).unwrap();
        assert_eq!(parsed, vec![row]);
    }

    #[test]
    fn store_roundtrip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let store = CacheStore::at(dir.path().to_path_buf()).unwrap();
        let space = Space::symplectic(2);
        let rows: Vec<SparseVec<Scalar>> = invariant_subspace(space, 3)
            .rows()
            .cloned()
            .collect();
        assert!(store.load_rows("inv-g2-deg3", space, 3).is_none());
        assert_eq!(store.misses(), 1);
        store.save_rows("inv-g2-deg3", space, 3, &rows).unwrap();
        let loaded = store.load_rows("inv-g2-deg3", space, 3).unwrap();
        assert_eq!(loaded, rows);
        assert_eq!(store.hits(), 1);
    }

    #[test]
    fn mismatched_degree_is_rejected() {
        let space = Space::symplectic(2);
        let rows: Vec<SparseVec<Scalar>> =
            invariant_subspace(space, 3).rows().cloned().collect();
        let text = serialize_rows(space, 3, &rows);
        assert!(parse_rows(&text, space, 4).is_err());
    }
}
