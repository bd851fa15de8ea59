use std::collections::HashSet;
use std::fmt;

use crate::circle::{FloatRow, SpherePoint};
use crate::config::AccMatrix;
use crate::error::{Error, Result};
use crate::geometry::{crossing_depth, interior_overlap, same_curve, tangency, Touch};
use crate::limits::Limits;
use crate::matrix::Matrix;
use crate::rational::{self, Rat};

use super::{Packing, PackingKind};

/// Length tolerance for tangency and overlap decisions.
pub const GEOMETRY_TOL: f64 = 1e-9;
/// Length tolerance for residual-set membership.
pub const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct PairViolation {
    pub first: usize,
    pub second: usize,
    pub first_word: String,
    pub second_word: String,
    /// Overlap or crossing depth in length units.
    pub amount: f64,
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "circles #{} (word {:?}) and #{} (word {:?}) by {:.3e}",
            self.first, self.first_word, self.second, self.second_word, self.amount
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeometryReport {
    pub pairs_checked: usize,
    pub violations: Vec<PairViolation>,
}

impl GeometryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn pairwise(
    rows: &[FloatRow],
    words: &[String],
    tol: f64,
    amount: impl Fn(&FloatRow, &FloatRow) -> Option<f64>,
) -> GeometryReport {
    let mut report = GeometryReport::default();
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            report.pairs_checked += 1;
            if let Some(a) = amount(&rows[i], &rows[j]) {
                if a > tol {
                    report.violations.push(PairViolation {
                        first: i,
                        second: j,
                        first_word: words.get(i).cloned().unwrap_or_default(),
                        second_word: words.get(j).cloned().unwrap_or_default(),
                        amount: a,
                    });
                }
            }
        }
    }
    report
}

/// No two oriented interiors overlap by more than `tol`.
pub fn disjoint_interiors(rows: &[FloatRow], words: &[String], tol: f64) -> GeometryReport {
    pairwise(rows, words, tol, |a, b| Some(interior_overlap(a, b)))
}

/// No two distinct curves cross by more than `tol`. Coincident curves are
/// skipped.
pub fn no_crossing(rows: &[FloatRow], words: &[String], tol: f64) -> GeometryReport {
    pairwise(rows, words, tol, |a, b| {
        (!same_curve(a, b, tol)).then(|| crossing_depth(a, b))
    })
}

fn words_of(p: &Packing) -> Vec<String> {
    p.circles.values().map(|c| c.word.to_string()).collect()
}

pub fn check_disjoint_interiors(p: &Packing) -> Result<GeometryReport> {
    if p.kind != PackingKind::Apollonian {
        return Err(Error::Precondition(
            "disjoint interiors are only claimed for Apollonian packings".into(),
        ));
    }
    Ok(disjoint_interiors(&p.float_rows(), &words_of(p), GEOMETRY_TOL))
}

pub fn check_no_crossing(p: &Packing) -> Result<GeometryReport> {
    if p.kind == PackingKind::Apollonian {
        return Err(Error::Precondition(
            "the no-crossing check is for dual and super packings".into(),
        ));
    }
    Ok(no_crossing(&p.float_rows(), &words_of(p), GEOMETRY_TOL))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub configs: usize,
    pub distinct_unordered: usize,
}

impl OrbitReport {
    pub fn injective(&self) -> bool {
        self.configs == self.distinct_unordered
    }
}

/// Each word yields a different unordered, unoriented configuration.
pub fn orbit_distinctness(p: &Packing) -> Result<OrbitReport> {
    if p.kind != PackingKind::Apollonian {
        return Err(Error::Precondition("orbit distinctness is for Apollonian packings".into()));
    }
    let distinct: HashSet<Matrix<Rat>> = p.configs.iter().map(|c| c.matrix.canonical_form()).collect();
    Ok(OrbitReport {
        configs: p.configs.len(),
        distinct_unordered: distinct.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetReport {
    pub orbits: usize,
    /// Distinct exact matrices across all seeded orbits.
    pub ordered_oriented: usize,
    /// Distinct canonical forms.
    pub unordered: usize,
    /// Every seeded orbit has the same canonical-form set.
    pub orbits_agree: bool,
}

pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|x| p.contains(&x)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Apollonian orbits of the 48 seeds `P_σ·(±W)`.
pub fn coset_orbits(seed: &AccMatrix, depth: usize, limits: &Limits) -> Result<CosetReport> {
    let mut ordered = HashSet::new();
    let mut reference: Option<HashSet<Matrix<Rat>>> = None;
    let mut agree = true;
    let mut orbits = 0;
    for sign in [false, true] {
        for sigma in permutations4() {
            let mut s = seed.permute_rows(sigma);
            if sign {
                s = s.reversed();
            }
            // The orbit is taken as is: a negatively oriented seed keeps its
            // orientation, so no auto-negation here.
            let configs = apollonian_orbit(&s, depth, limits)?;
            let canon: HashSet<Matrix<Rat>> = configs.iter().map(|c| c.canonical_form()).collect();
            ordered.extend(configs.into_iter().map(AccMatrix::into_matrix));
            match &reference {
                None => reference = Some(canon),
                Some(r) => agree &= *r == canon,
            }
            orbits += 1;
        }
    }
    Ok(CosetReport {
        orbits,
        ordered_oriented: ordered.len(),
        unordered: reference.map_or(0, |r| r.len()),
        orbits_agree: agree,
    })
}

fn apollonian_orbit(seed: &AccMatrix, depth: usize, limits: &Limits) -> Result<Vec<AccMatrix>> {
    limits.check_packing_depth(depth)?;
    let mut out = vec![(seed.clone(), None)];
    let mut start = 0;
    for _ in 0..depth {
        let end = out.len();
        for idx in start..end {
            for g in crate::group::Generator::APOLLONIAN {
                if out[idx].1 == Some(g) {
                    continue;
                }
                let child = AccMatrix::new_unchecked(g.apply_left(out[idx].0.matrix()));
                out.push((child, Some(g)));
            }
        }
        start = end;
    }
    Ok(out.into_iter().map(|(m, _)| m).collect())
}

/// Tangency points of a packing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResidualSample {
    pub points: Vec<(f64, f64)>,
    pub includes_infinity: bool,
    /// Points found as tangencies inside generated configurations.
    pub from_configs: usize,
    /// Extra points found geometrically between circles of different
    /// configurations.
    pub cross_config: usize,
}

impl ResidualSample {
    /// Finite points plus the point at infinity when present.
    pub fn len(&self) -> usize {
        self.points.len() + usize::from(self.includes_infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: f64, y: f64, tol: f64) -> bool {
        self.points
            .iter()
            .any(|&(px, py)| (px - x).abs() < tol && (py - y).abs() < tol)
    }
}

/// All tangency points: exact ones from the six pairs of every configuration,
/// plus, for dual and super packings, pairs of circles found tangent
/// geometrically. In an Apollonian packing every tangent pair already shares
/// a generated configuration.
pub fn tangency_points(p: &Packing) -> ResidualSample {
    let mut exact: HashSet<SpherePoint> = HashSet::new();
    let mut ordered: Vec<SpherePoint> = Vec::new();
    for node in &p.configs {
        let rows = node.matrix.rows();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let pt = rows[i].tangency_sphere_point(&rows[j]);
                if exact.insert(pt.clone()) {
                    ordered.push(pt);
                }
            }
        }
    }
    let mut sample = ResidualSample::default();
    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    for pt in ordered {
        match pt {
            SpherePoint::Infinity => sample.includes_infinity = true,
            SpherePoint::Finite(x, y) => {
                let (x, y) = (rational::to_f64(&x), rational::to_f64(&y));
                seen.insert(quantize(x, y));
                sample.points.push((x, y));
            }
        }
    }
    sample.from_configs = sample.len();

    if p.kind != PackingKind::Apollonian {
        let rows = p.float_rows();
        for i in 0..rows.len() {
            for j in (i + 1)..rows.len() {
                match tangency(&rows[i], &rows[j], GEOMETRY_TOL) {
                    Some(Touch::At(x, y)) => {
                        if seen.insert(quantize(x, y)) {
                            sample.points.push((x, y));
                            sample.cross_config += 1;
                        }
                    }
                    Some(Touch::AtInfinity) => {
                        if !sample.includes_infinity {
                            sample.includes_infinity = true;
                            sample.cross_config += 1;
                        }
                    }
                    None => {}
                }
            }
        }
    }
    sample
}

fn quantize(x: f64, y: f64) -> (i64, i64) {
    const GRID: f64 = 1e-8;
    ((x / GRID).round() as i64, (y / GRID).round() as i64)
}

/// True unless the point lies strictly inside some circle's interior by more
/// than `tol`.
pub fn residual_membership(point: (f64, f64), circles: &[FloatRow], tol: f64) -> bool {
    // interior_value is about twice the signed distance near the boundary.
    circles
        .iter()
        .all(|c| c.interior_value(point.0, point.1) >= -2.0 * tol)
}

/// The point at infinity is interior to every circle of negative curvature.
pub fn infinity_in_residual(circles: &[FloatRow]) -> bool {
    circles.iter().all(|c| c.curvature >= 0.0)
}

impl Packing {
    pub fn residual_contains(&self, point: (f64, f64), tol: f64) -> bool {
        residual_membership(point, &self.float_rows(), tol)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InscribedReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// For configurations at levels `1..=max_level`, the circle swapped in by the
/// last letter is geometrically tangent to the three circles it joins and
/// differs from the circle it replaced.
pub fn verify_inscribed_circles(p: &Packing, max_level: usize) -> InscribedReport {
    let mut report = InscribedReport::default();
    let index: std::collections::HashMap<&crate::group::GroupWord, usize> =
        p.configs.iter().enumerate().map(|(i, c)| (&c.word, i)).collect();
    for node in p.configs.iter().filter(|c| c.level >= 1 && c.level <= max_level) {
        let g = node.word.first().expect("level >= 1");
        let i = g.index();
        let parent_word = crate::group::GroupWord(node.word.letters()[1..].to_vec());
        let parent = &p.configs[index[&parent_word]];
        let rows: Vec<FloatRow> = node.matrix.rows().iter().map(FloatRow::from).collect();
        let old = FloatRow::from(&parent.matrix.row(i));
        report.checked += 1;
        for j in (0..4).filter(|&j| j != i) {
            if tangency(&rows[i], &rows[j], GEOMETRY_TOL).is_none() {
                report
                    .failures
                    .push(format!("word {}: new circle not tangent to circle {}", node.word, j + 1));
            }
        }
        if same_curve(&rows[i], &old, GEOMETRY_TOL) {
            report
                .failures
                .push(format!("word {}: new circle equals the replaced one", node.word));
        }
    }
    report
}
