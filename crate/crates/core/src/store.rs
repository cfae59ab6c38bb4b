//! Append-only cache of computed values.
//!
//! One record per line, `kind pattern param mode value status witness`, for
//! example `g 2,1 8 strict 4 exact 1,2,3,5`. Witnesses are re-checked on
//! every load and every insert, so a hand-edited or corrupted file cannot
//! smuggle in a wrong value.

use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Permutation;
use crate::solvers::{Coloring, ColoringResult, DensityResult, Status};
use crate::waves::{find_wave, IntSet, Mode};

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "WAVELAB_CACHE";
pub const DEFAULT_CACHE_FILE: &str = "wavelab-cache.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Largest wave-free subset of `[n]`.
    G,
    /// Least `M` forcing a monochromatic wave in every `r`-coloring.
    P,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::G => "g",
            Kind::P => "p",
        })
    }
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "g" => Ok(Kind::G),
            "p" => Ok(Kind::P),
            other => Err(format!("unknown kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Exact,
    LowerBound,
}

impl From<Status> for Bound {
    fn from(s: Status) -> Self {
        match s {
            Status::Exact => Bound::Exact,
            Status::Incomplete => Bound::LowerBound,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Exact => "exact",
            Bound::LowerBound => "lower-bound",
        })
    }
}

impl FromStr for Bound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Bound::Exact),
            "lower-bound" => Ok(Bound::LowerBound),
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Wave-free subset of `[n]` of size `value`.
    Set(IntSet),
    /// Wave-free coloring of `[value - 1]`.
    Coloring(Coloring),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Witness::Set(s) => s.to_string(),
            Witness::Coloring(c) => c.to_string(),
        };
        f.write_str(if text.is_empty() { "-" } else { &text })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub kind: Kind,
    pub pattern: Permutation,
    /// `n` for kind g, `r` for kind p.
    pub param: u64,
    pub mode: Mode,
    pub value: u64,
    pub status: Bound,
    pub witness: Witness,
}

impl Record {
    pub fn from_density(r: &DensityResult) -> Record {
        Record {
            kind: Kind::G,
            pattern: r.pattern.clone(),
            param: r.n,
            mode: r.mode,
            value: r.value as u64,
            status: r.status.into(),
            witness: Witness::Set(r.witness.clone()),
        }
    }

    pub fn from_coloring(r: &ColoringResult) -> Record {
        Record {
            kind: Kind::P,
            pattern: r.pattern.clone(),
            param: r.r as u64,
            mode: r.mode,
            value: r.value,
            status: r.status.into(),
            witness: Witness::Coloring(r.extremal.clone()),
        }
    }

    /// Checks that the witness certifies the value.
    pub fn verify(&self) -> Result<(), String> {
        match (&self.kind, &self.witness) {
            (Kind::G, Witness::Set(set)) => {
                if set.universe() != self.param {
                    return Err(format!("witness universe {} differs from n = {}", set.universe(), self.param));
                }
                if set.len() as u64 != self.value {
                    return Err(format!("witness has {} points, value is {}", set.len(), self.value));
                }
                if let Some(w) = find_wave(set, &self.pattern, self.mode) {
                    return Err(format!("witness contains the wave {w}"));
                }
            }
            (Kind::P, Witness::Coloring(c)) => {
                if c.palette() as u64 != self.param {
                    return Err(format!("witness palette {} differs from r = {}", c.palette(), self.param));
                }
                if c.domain_size() as u64 + 1 != self.value {
                    return Err(format!("witness colors {} points, value is {}", c.domain_size(), self.value));
                }
                if let Some((color, w)) = c.monochromatic_wave(&self.pattern, self.mode) {
                    return Err(format!("witness has the wave {w} in color {color}"));
                }
            }
            _ => return Err("witness type does not match kind".to_string()),
        }
        Ok(())
    }

    fn key(&self) -> (Kind, &Permutation, u64, Mode) {
        (self.kind, &self.pattern, self.param, self.mode)
    }

    /// Parses one line of the cache format.
    pub fn parse_line(line: &str) -> Result<Record, String> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [kind, pattern, param, mode, value, status, witness] = fields[..] else {
            return Err(format!("expected 7 fields, found {}", fields.len()));
        };
        let kind: Kind = kind.parse()?;
        let pattern: Permutation = pattern.parse().map_err(|e| format!("{e}"))?;
        let param: u64 = param.parse().map_err(|_| format!("bad parameter {param:?}"))?;
        let mode: Mode = mode.parse()?;
        let value: u64 = value.parse().map_err(|_| format!("bad value {value:?}"))?;
        let status: Bound = status.parse()?;
        let witness_text = if witness == "-" { "" } else { witness };
        let witness = match kind {
            Kind::G => Witness::Set(IntSet::parse(witness_text, Some(param)).map_err(|e| format!("{e}"))?),
            Kind::P => {
                let palette = u32::try_from(param).map_err(|_| format!("palette {param} too large"))?;
                Witness::Coloring(Coloring::parse(witness_text, Some(palette)).map_err(|e| format!("{e}"))?)
            }
        };
        Ok(Record {
            kind,
            pattern,
            param,
            mode,
            value,
            status,
            witness,
        })
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {} {}",
            self.kind, self.pattern, self.param, self.mode, self.value, self.status, self.witness
        )
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("record `{record}` fails verification: {reason}")]
    Verification { record: String, reason: String },
    #[error("record `{new}` conflicts with stored `{stored}`")]
    Conflict { stored: String, new: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PutOutcome {
    Stored,
    AlreadyPresent,
}

/// Verified records, optionally backed by a file.
#[derive(Debug, Default)]
pub struct Store {
    path: Option<PathBuf>,
    records: Vec<Record>,
}

impl Store {
    /// A store that is never written to disk.
    pub fn in_memory() -> Store {
        Store::default()
    }

    /// `$WAVELAB_CACHE`, or `./wavelab-cache.txt`.
    pub fn default_path() -> PathBuf {
        std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_FILE))
    }

    /// Loads `path` if it exists; later puts append to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Store, StoreError> {
        let path = path.as_ref().to_path_buf();
        let mut store = Store {
            path: None,
            records: Vec::new(),
        };
        match fs::read_to_string(&path) {
            Ok(text) => {
                for (i, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let rec = Record::parse_line(line).map_err(|reason| StoreError::Parse { line: i + 1, reason })?;
                    store.put(rec)?;
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(source) => return Err(StoreError::Io { path, source }),
        }
        store.path = Some(path);
        Ok(store)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// Verifies `rec` and appends it, unless an equal-valued record with the
    /// same status is already present. Two exact records with different
    /// values, or a lower bound above an exact value, are rejected.
    pub fn put(&mut self, rec: Record) -> Result<PutOutcome, StoreError> {
        rec.verify().map_err(|reason| StoreError::Verification {
            record: rec.to_string(),
            reason,
        })?;
        for old in self.records.iter().filter(|r| r.key() == rec.key()) {
            let clash = match (old.status, rec.status) {
                (Bound::Exact, Bound::Exact) => old.value != rec.value,
                (Bound::Exact, Bound::LowerBound) => rec.value > old.value,
                (Bound::LowerBound, Bound::Exact) => old.value > rec.value,
                (Bound::LowerBound, Bound::LowerBound) => false,
            };
            if clash {
                return Err(StoreError::Conflict {
                    stored: old.to_string(),
                    new: rec.to_string(),
                });
            }
            if old.status == rec.status && old.value == rec.value {
                return Ok(PutOutcome::AlreadyPresent);
            }
        }
        if let Some(path) = &self.path {
            let io_err = |source| StoreError::Io {
                path: path.clone(),
                source,
            };
            let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
            file.write_all(format!("{rec}\n").as_bytes()).map_err(io_err)?;
            file.flush().map_err(io_err)?;
        }
        self.records.push(rec);
        Ok(PutOutcome::Stored)
    }

    /// The exact record for the key if any, otherwise the highest lower
    /// bound. Lookup is literal: reversed patterns are separate keys.
    pub fn get(&self, kind: Kind, pattern: &Permutation, param: u64, mode: Mode) -> Option<&Record> {
        let matching = self.records.iter().filter(|r| r.key() == (kind, pattern, param, mode));
        matching.max_by_key(|r| (r.status == Bound::Exact, r.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_record(value: u64, witness: &str, status: Bound) -> Record {
        Record {
            kind: Kind::G,
            pattern: "21".parse().unwrap(),
            param: 8,
            mode: Mode::Strict,
            value,
            status,
            witness: Witness::Set(IntSet::parse(witness, Some(8)).unwrap()),
        }
    }

    #[test]
    fn put_get_and_conflicts() {
        let mut store = Store::in_memory();
        let pi: Permutation = "21".parse().unwrap();
        assert_eq!(store.put(g_record(4, "1,2,4,8", Bound::Exact)).unwrap(), PutOutcome::Stored);
        assert_eq!(store.get(Kind::G, &pi, 8, Mode::Strict).unwrap().value, 4);
        assert!(store.get(Kind::G, &pi, 9, Mode::Strict).is_none());
        assert!(store.get(Kind::G, &"12".parse().unwrap(), 8, Mode::Strict).is_none());
        assert_eq!(store.put(g_record(4, "1,2,3,5", Bound::Exact)).unwrap(), PutOutcome::AlreadyPresent);
        assert_eq!(store.put(g_record(3, "1,2,3", Bound::LowerBound)).unwrap(), PutOutcome::Stored);
        assert_eq!(store.get(Kind::G, &pi, 8, Mode::Strict).unwrap().status, Bound::Exact);
    }

    #[test]
    fn conflicting_exact_value_is_rejected() {
        let mut store = Store::in_memory();
        store.put(g_record(4, "1,2,4,8", Bound::Exact)).unwrap();
        // A size-3 witness for a claimed exact value 3.
        let err = store.put(g_record(3, "1,2,4", Bound::Exact)).unwrap_err();
        assert!(matches!(err, StoreError::Conflict { .. }));
    }

    #[test]
    fn bad_witnesses_are_rejected() {
        let mut store = Store::in_memory();
        // {1,3,4} holds the 2,1-wave (1,3,4).
        let err = store.put(g_record(3, "1,3,4", Bound::Exact)).unwrap_err();
        assert!(matches!(err, StoreError::Verification { .. }));
        let err = store.put(g_record(5, "1,2,4,8", Bound::Exact)).unwrap_err();
        assert!(matches!(err, StoreError::Verification { .. }));
    }

    #[test]
    fn coloring_records() {
        let mut store = Store::in_memory();
        let rec = Record::parse_line("p 1 3 strict 4 exact 1,2,3").unwrap();
        store.put(rec.clone()).unwrap();
        assert_eq!(store.get(Kind::P, &"1".parse().unwrap(), 3, Mode::Strict), Some(&rec));
        assert!(Store::in_memory().put(Record::parse_line("p 1 3 strict 4 exact 1,1,3").unwrap()).is_err());
    }

    #[test]
    fn line_round_trip() {
        for line in ["g 2,1 8 strict 4 exact 1,2,4,8", "p 1,2 2 weak 7 lower-bound 1,1,2,2,1,1", "g 1,3,2 1 weak 1 exact 1"] {
            assert_eq!(Record::parse_line(line).unwrap().to_string(), line);
        }
        assert!(Record::parse_line("g 21 8 strict 4 exact").is_err());
        assert!(Record::parse_line("q 21 8 strict 4 exact 1").is_err());
    }

    #[test]
    fn file_survives_reopen() {
        let dir = std::env::temp_dir().join(format!("wavelab-store-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.txt");
        let _ = fs::remove_file(&path);
        {
            let mut store = Store::open(&path).unwrap();
            store.put(g_record(4, "1,2,4,8", Bound::Exact)).unwrap();
            store.put(Record::parse_line("p 1 3 strict 4 exact 1,2,3").unwrap()).unwrap();
        }
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "g 2,1 8 strict 4 exact 1,2,4,8\np 1 3 strict 4 exact 1,2,3\n");
        let store = Store::open(&path).unwrap();
        assert_eq!(store.records().len(), 2);

        fs::write(&path, "g 2,1 8 strict 3 exact 1,3,4\n").unwrap();
        assert!(matches!(Store::open(&path), Err(StoreError::Verification { .. })));
        fs::write(&path, "g 2,1 8 strict\n").unwrap();
        assert!(matches!(Store::open(&path), Err(StoreError::Parse { line: 1, .. })));
        fs::remove_dir_all(&dir).unwrap();
    }
}
