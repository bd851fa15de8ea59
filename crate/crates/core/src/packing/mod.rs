//! Orbits of a seed configuration under the Apollonian, dual Apollonian and
//! super-Apollonian groups, and the circle sets they sweep out.

mod checks;
mod dimension;
mod export;

pub use checks::*;
pub use dimension::*;
pub use export::*;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use crate::circle::{AccRow, FloatRow};
use crate::config::AccMatrix;
use crate::error::{Error, Result};
use crate::group::{adjacent_allowed, Generator, GroupWord};
use crate::limits::Limits;
use crate::rational::{self, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PackingKind {
    Apollonian,
    DualApollonian,
    SuperApollonian,
}

impl PackingKind {
    pub fn alphabet(self) -> &'static [Generator] {
        match self {
            PackingKind::Apollonian => &Generator::APOLLONIAN,
            PackingKind::DualApollonian => &Generator::DUAL,
            PackingKind::SuperApollonian => &Generator::ALL,
        }
    }

    /// May `g` be prepended to a word whose last-applied letter is `first`?
    fn extends(self, g: Generator, first: Option<Generator>) -> bool {
        match first {
            None => true,
            Some(f) => match self {
                PackingKind::SuperApollonian => adjacent_allowed(g, f),
                _ => g != f,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PackingKind::Apollonian => "apollonian",
            PackingKind::DualApollonian => "dual",
            PackingKind::SuperApollonian => "super",
        }
    }
}

impl fmt::Display for PackingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PackingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "apollonian" | "a" => Ok(PackingKind::Apollonian),
            "dual" | "dual-apollonian" => Ok(PackingKind::DualApollonian),
            "super" | "super-apollonian" => Ok(PackingKind::SuperApollonian),
            _ => Err(Error::Parse(format!(
                "unknown packing kind {s:?} (apollonian, dual, super)"
            ))),
        }
    }
}

/// One configuration of the orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigNode {
    pub word: GroupWord,
    pub level: usize,
    pub matrix: AccMatrix,
}

/// A deduplicated circle with the orientation and word of its first
/// appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleRecord {
    pub row: AccRow,
    pub word: GroupWord,
    pub level: usize,
}

impl CircleRecord {
    pub fn key(&self) -> AccRow {
        self.row.canonical()
    }

    pub fn float(&self) -> FloatRow {
        FloatRow::from(&self.row)
    }
}

#[derive(Clone, Debug)]
pub struct Packing {
    pub seed: AccMatrix,
    pub kind: PackingKind,
    pub depth: usize,
    /// Breadth-first, so configurations of one level are contiguous.
    pub configs: Vec<ConfigNode>,
    /// Keyed by the orientation-normalized row.
    pub circles: IndexMap<AccRow, CircleRecord>,
    /// Set when an Apollonian seed had negative orientation and was negated.
    pub auto_negated: bool,
}

/// Builds the orbit of `seed` over all admissible words of length `≤ depth`.
///
/// Apollonian and dual words have no equal neighbours; super words are the
/// normal forms.
pub fn generate(seed: &AccMatrix, kind: PackingKind, depth: usize, limits: &Limits) -> Result<Packing> {
    limits.check_packing_depth(depth)?;
    let mut auto_negated = false;
    let start = if kind == PackingKind::Apollonian && seed.total_orientation() < 0 {
        auto_negated = true;
        seed.reversed()
    } else {
        seed.clone()
    };

    let mut configs = vec![ConfigNode {
        word: GroupWord::empty(),
        level: 0,
        matrix: start.clone(),
    }];
    let mut level_start = 0;
    for level in 1..=depth {
        let level_end = configs.len();
        for idx in level_start..level_end {
            let parent_first = configs[idx].word.first();
            for &g in kind.alphabet() {
                if !kind.extends(g, parent_first) {
                    continue;
                }
                let parent = &configs[idx];
                let child = AccMatrix::new_unchecked(g.apply_left(parent.matrix.matrix()));
                let word = parent.word.prepend(g);
                configs.push(ConfigNode {
                    word,
                    level,
                    matrix: child,
                });
            }
        }
        level_start = level_end;
    }

    let mut circles: IndexMap<AccRow, CircleRecord> = IndexMap::new();
    for node in &configs {
        for row in node.matrix.rows() {
            circles.entry(row.canonical()).or_insert_with(|| CircleRecord {
                row,
                word: node.word.clone(),
                level: node.level,
            });
        }
    }

    Ok(Packing {
        seed: start,
        kind,
        depth,
        configs,
        circles,
        auto_negated,
    })
}

impl Packing {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn circle_records(&self) -> impl Iterator<Item = &CircleRecord> {
        self.circles.values()
    }

    pub fn float_rows(&self) -> Vec<FloatRow> {
        self.circles.values().map(CircleRecord::float).collect()
    }

    /// Number of circles first seen at each level.
    pub fn new_circles_per_level(&self) -> Vec<usize> {
        let mut out = vec![0; self.depth + 1];
        for c in self.circles.values() {
            out[c.level] += 1;
        }
        out
    }

    /// Configurations at the deepest level.
    pub fn leaves(&self) -> impl Iterator<Item = &ConfigNode> {
        self.configs.iter().filter(move |c| c.level == self.depth)
    }

    pub fn spectrum(&self) -> Spectrum {
        curvature_spectrum(self.circles.values())
    }
}

/// `2(3^m + 1)`, the Apollonian circle count at depth `m`.
pub fn expected_apollonian_circles(depth: usize) -> u128 {
    2 * (3u128.pow(depth as u32) + 1)
}

/// Curvature of the circle that `S_i` swaps in for circle `i`:
/// `2·Σ_{j≠i} b_j - b_i`. `i` is 0-based.
pub fn new_circle_curvature(config: &AccMatrix, i: usize) -> Rat {
    let b = config.curvatures();
    let others: Rat = (0..4).filter(|&j| j != i).map(|j| b[j].clone()).sum();
    others * rational::int(2) - &b[i]
}

/// Curvature multiset, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub counts: BTreeMap<Rat, usize>,
    pub all_integral: bool,
}

impl Spectrum {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn multiplicity(&self, curvature: &Rat) -> usize {
        self.counts.get(curvature).copied().unwrap_or(0)
    }

    /// True if `sub` (with repeats) is contained in the multiset.
    pub fn contains_multiset(&self, sub: &[Rat]) -> bool {
        let mut need: BTreeMap<&Rat, usize> = BTreeMap::new();
        for c in sub {
            *need.entry(c).or_default() += 1;
        }
        need.into_iter().all(|(c, n)| self.multiplicity(c) >= n)
    }

    /// `curvature,count` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("curvature,count\n");
        for (c, n) in &self.counts {
            s.push_str(&format!("{},{}\n", rational::format(c), n));
        }
        s
    }
}

pub fn curvature_spectrum<'a>(circles: impl IntoIterator<Item = &'a CircleRecord>) -> Spectrum {
    let mut counts = BTreeMap::new();
    for c in circles {
        *counts.entry(c.row.curvature.clone()).or_insert(0) += 1;
    }
    let all_integral = counts.keys().all(|c: &Rat| c.is_integer());
    Spectrum {
        counts,
        all_integral,
    }
}

/// Columns 2..4 integral.
pub fn is_strongly_integral(w: &AccMatrix) -> bool {
    w.is_strongly_integral()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub configs_checked: usize,
}

/// Every configuration in the super-Apollonian orbit of an integral seed is
/// an integer matrix.
pub fn strong_integrality_propagation(
    seed: &AccMatrix,
    depth: usize,
    limits: &Limits,
) -> Result<IntegralityReport> {
    if !(seed.is_strongly_integral() && seed.first_column_integral()) {
        return Err(Error::Precondition(
            "seed must be an integer matrix".into(),
        ));
    }
    let p = generate(seed, PackingKind::SuperApollonian, depth, limits)?;
    for node in &p.configs {
        if node.matrix.matrix().to_integer().is_none() {
            return Err(Error::IntegralityViolation(node.word.to_string()));
        }
    }
    Ok(IntegralityReport {
        configs_checked: p.configs.len(),
    })
}
