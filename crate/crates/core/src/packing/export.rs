use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::circle::AccRow;
use crate::config::{AccMatrix, ConfigFile};
use crate::error::{Error, Result};
use crate::group::GroupWord;
use crate::rational;

use super::{CircleRecord, Packing, PackingKind};

/// `{seed, kind, depth, circles: [{key, bbar, b, w1, w2, word, level}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingFile {
    pub seed: ConfigFile,
    pub kind: String,
    pub depth: usize,
    pub circles: Vec<CircleEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircleEntry {
    /// The orientation-normalized row as text, unique within a file.
    pub key: String,
    pub bbar: Value,
    pub b: Value,
    pub w1: Value,
    pub w2: Value,
    pub word: String,
    pub level: usize,
}

/// A packing read back from disk.
#[derive(Clone, Debug)]
pub struct LoadedPacking {
    pub seed: AccMatrix,
    pub kind: PackingKind,
    pub depth: usize,
    pub circles: Vec<CircleRecord>,
}

fn key_text(row: &AccRow) -> String {
    row.canonical()
        .to_array()
        .iter()
        .map(rational::format)
        .collect::<Vec<_>>()
        .join(",")
}

impl Packing {
    pub fn to_file(&self) -> PackingFile {
        PackingFile {
            seed: ConfigFile::from(&self.seed),
            kind: self.kind.name().to_string(),
            depth: self.depth,
            circles: self
                .circles
                .values()
                .map(|c| CircleEntry {
                    key: key_text(&c.row),
                    bbar: rational::to_json(&c.row.co_curvature),
                    b: rational::to_json(&c.row.curvature),
                    w1: rational::to_json(&c.row.w1),
                    w2: rational::to_json(&c.row.w2),
                    word: c.word.to_string(),
                    level: c.level,
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("packing serializes")
    }
}

impl LoadedPacking {
    pub fn from_file(f: &PackingFile) -> Result<Self> {
        let seed = AccMatrix::new(f.seed.to_matrix()?)?;
        let kind: PackingKind = f.kind.parse()?;
        let circles = f
            .circles
            .iter()
            .map(|c| {
                let row = AccRow::new(
                    rational::from_json(&c.bbar)?,
                    rational::from_json(&c.b)?,
                    rational::from_json(&c.w1)?,
                    rational::from_json(&c.w2)?,
                )?;
                if key_text(&row) != c.key {
                    return Err(Error::Parse(format!("circle key {:?} does not match its row", c.key)));
                }
                Ok(CircleRecord {
                    row,
                    word: c.word.parse::<GroupWord>()?,
                    level: c.level,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LoadedPacking {
            seed,
            kind,
            depth: f.depth,
            circles,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let f: PackingFile = serde_json::from_str(s)?;
        LoadedPacking::from_file(&f)
    }
}
