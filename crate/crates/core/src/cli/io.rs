//! Graph, explicit-family and weight files.
//!
//! ```text
//! graph:    {"n": 3, "edges": [[0, 1], [1, 2]]}
//! explicit: {"elements": ["a", "b", "ab"], "leq": [[0, 2], [1, 2]], "top": 2}
//! weights:  {"kind": "vertex-induced", "weights": {"0": 1.0, "0,2": 2.0, ...}}
//! ```
//!
//! Weight keys are the canonical element keys of the family (sorted vertex
//! or edge indices joined by commas, or explicit labels). Writing emits
//! elements in id order and numbers in shortest round-trip form, so reading
//! a written file gives back the same bits.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::error::Error;
use crate::lattice::{ExplicitPoset, Family, Graph};
use crate::weights::WeightFn;

#[derive(Debug)]
pub enum InputError {
    Io(PathBuf, std::io::Error),
    Json(PathBuf, serde_json::Error),
    Invalid(PathBuf, String),
    Lib(PathBuf, Error),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            InputError::Json(p, e) => write!(f, "{}: malformed JSON: {e}", p.display()),
            InputError::Invalid(p, msg) => write!(f, "{}: {msg}", p.display()),
            InputError::Lib(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl std::error::Error for InputError {}

type Result<T> = std::result::Result<T, InputError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| InputError::Io(path.into(), e))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| InputError::Json(path.into(), e))
}

pub fn parse_graph(path: &Path) -> Result<Graph> {
    parse_json(path)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExplicit {
    elements: Vec<String>,
    #[serde(default)]
    leq: Vec<[usize; 2]>,
    #[serde(default)]
    top: Option<usize>,
}

pub fn parse_explicit(path: &Path) -> Result<ExplicitPoset> {
    let raw: RawExplicit = parse_json(path)?;
    Ok(ExplicitPoset {
        labels: raw.elements,
        leq: raw.leq.into_iter().map(|[i, j]| (i, j)).collect(),
        top: raw.top,
    })
}

/// Map entries in file order, duplicates kept.
struct Entries(Vec<(String, serde_json::Value)>);

impl<'de> Deserialize<'de> for Entries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Entries;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object from element keys to weights")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<Entries, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = map.next_entry()? {
                    out.push(entry);
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    kind: String,
    weights: Entries,
}

pub fn parse_weights(path: &Path, family: &Family) -> Result<WeightFn> {
    let raw: RawWeights = parse_json(path)?;
    let bad = |msg: String| InputError::Invalid(path.into(), msg);
    if raw.kind != family.kind().name() {
        return Err(bad(format!(
            "weights are for a {} family, expected {}",
            raw.kind,
            family.kind().name()
        )));
    }
    let mut values: Vec<Option<f64>> = vec![None; family.len()];
    for (key, value) in raw.weights.0 {
        let id = family
            .find_key(&key)
            .ok_or_else(|| bad(format!("unknown element key \"{key}\"")))?;
        let v = value
            .as_f64()
            .ok_or_else(|| bad(format!("weight of \"{key}\" is not a number")))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(bad(format!(
                "weight of \"{key}\" is {v}, weights must be ≥ 0"
            )));
        }
        // keys may be spelled in any vertex order, so compare by id
        if values[id].replace(v).is_some() {
            return Err(bad(format!(
                "duplicate key for element \"{}\"",
                family.element_key(id)
            )));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(id, v)| {
            v.ok_or_else(|| {
                bad(format!(
                    "missing weight for element \"{}\"",
                    family.element_key(id)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    WeightFn::new(family, values).map_err(|e| InputError::Lib(path.into(), e))
}

pub fn weights_json(family: &Family, w: &WeightFn) -> String {
    let weights: serde_json::Map<String, serde_json::Value> = family
        .ids()
        .map(|id| (family.element_key(id), serde_json::Value::from(w[id])))
        .collect();
    let doc = serde_json::json!({ "kind": family.kind().name(), "weights": weights });
    let mut s = serde_json::to_string_pretty(&doc).expect("weights serialize");
    s.push('\n');
    s
}

pub fn write_weights(path: &Path, family: &Family, w: &WeightFn) -> std::io::Result<()> {
    write_atomic(path, weights_json(family, w).as_bytes())
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let name = path.file_name().ok_or_else(|| {
        std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            "output path has no file name",
        )
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}
