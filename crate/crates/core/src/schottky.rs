//! The parabolic Schottky pair attached to the unit gasket and the four
//! inversive generators behind it.
//!
//! Matrix identities are checked over the Gaussian rationals. Limit-set
//! samples are float orbits of parabolic fixed points.

use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::circle::FloatRow;
use crate::config::AccMatrix;
use crate::error::{Error, Result};
use crate::group::Generator;
use crate::limits::Limits;
use crate::moebius::{apply_moebius, on_curve, MoebiusElement, Point};
use crate::rational::{self, int, Rat};

pub type GaussRat = Complex<Rat>;

fn g(re: i64, im: i64) -> GaussRat {
    Complex::new(int(re), int(im))
}

/// A 2×2 matrix over the Gaussian rationals, `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2C {
    pub a: GaussRat,
    pub b: GaussRat,
    pub c: GaussRat,
    pub d: GaussRat,
}

impl Mat2C {
    pub fn new(a: GaussRat, b: GaussRat, c: GaussRat, d: GaussRat) -> Self {
        Mat2C { a, b, c, d }
    }

    /// Entries given as `(re, im)` integer pairs.
    pub fn from_ints(e: [(i64, i64); 4]) -> Self {
        Mat2C::new(g(e[0].0, e[0].1), g(e[1].0, e[1].1), g(e[2].0, e[2].1), g(e[3].0, e[3].1))
    }

    pub fn identity() -> Self {
        Mat2C::from_ints([(1, 0), (0, 0), (0, 0), (1, 0)])
    }

    pub fn det(&self) -> GaussRat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> GaussRat {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Mat2C::new(
            &self.d / &det,
            -&self.b / &det,
            -&self.c / &det,
            &self.a / &det,
        ))
    }

    /// Trace `±2` with determinant 1 and not `±I`.
    pub fn is_parabolic(&self) -> bool {
        let two = g(2, 0);
        self.det().is_one()
            && (self.trace() == two || self.trace() == -two)
            && *self != Mat2C::identity()
            && *self != -Mat2C::identity()
    }

    /// The unique fixed point of a parabolic map; `None` is infinity.
    pub fn parabolic_fixed_point(&self) -> Result<Option<GaussRat>> {
        if !self.is_parabolic() {
            return Err(Error::Precondition("fixed point requested for a non-parabolic matrix".into()));
        }
        if self.c.is_zero() {
            return Ok(None);
        }
        Ok(Some((&self.a - &self.d) / (&self.c * int(2))))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Mat2C::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    pub fn to_element(&self) -> Result<MoebiusElement> {
        let f = |z: &GaussRat| Complex64::new(rational::to_f64(&z.re), rational::to_f64(&z.im));
        MoebiusElement::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }
}

impl Mul for &Mat2C {
    type Output = Mat2C;

    fn mul(self, o: &Mat2C) -> Mat2C {
        Mat2C::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;

    fn neg(self) -> Mat2C {
        Mat2C::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl fmt::Display for Mat2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = |z: &GaussRat| format!("{}{:+}i", rational::format(&z.re), rational::to_f64(&z.im));
        write!(f, "[[{}, {}], [{}, {}]]", z(&self.a), z(&self.b), z(&self.c), z(&self.d))
    }
}

/// `P₁ = [[1-i, 1], [1, 1+i]]`, `P₂ = [[1, 0], [-2i, 1]]`.
pub fn schottky_generators() -> (Mat2C, Mat2C) {
    (
        Mat2C::from_ints([(1, -1), (1, 0), (1, 0), (1, 1)]),
        Mat2C::from_ints([(1, 0), (0, 0), (0, -2), (1, 0)]),
    )
}

/// `[A, B] = A B A⁻¹ B⁻¹`.
pub fn commutator(a: &Mat2C, b: &Mat2C) -> Result<Mat2C> {
    Ok(&(&(a * b) * &a.inverse()?) * &b.inverse()?)
}

/// `p₁ … p₄`; the map `sᵢ(z) = pᵢ(z̄)` is an inversion.
pub fn inversive_generators() -> [Mat2C; 4] {
    [
        Mat2C::from_ints([(1, -1), (0, -1), (0, 1), (1, 1)]),
        Mat2C::from_ints([(1, 1), (0, -1), (0, 1), (1, -1)]),
        Mat2C::from_ints([(1, 0), (0, 0), (0, 4), (1, 0)]),
        Mat2C::identity(),
    ]
}

/// The anti-holomorphic map `z ↦ p(z̄)`.
pub fn inversion_element(p: &Mat2C) -> Result<MoebiusElement> {
    let mut e = p.to_element()?;
    e.conjugate = true;
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub traces: [GaussRat; 3],
    pub all_parabolic: bool,
    /// `p₃ = P₂⁻²`.
    pub p3_is_p2_inverse_squared: bool,
    /// `s₁⁻¹ ∘ s₂ = -P₁⁻²` for the maps `sᵢ(z) = pᵢ(z̄)`; the composite
    /// has matrix `p̄₁⁻¹ p̄₂`.
    pub p1_inv_p2_is_minus_p1_inverse_squared: bool,
    /// The same identity read as a plain matrix product `p₁⁻¹ p₂`. False.
    pub literal_p1_inv_p2: bool,
    /// `p₂² = -[P₁, P₂]`.
    pub p2_squared_is_minus_commutator: bool,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.all_parabolic
            && self.p3_is_p2_inverse_squared
            && self.p1_inv_p2_is_minus_p1_inverse_squared
            && self.p2_squared_is_minus_commutator
    }
}

pub fn verify_relations() -> Result<RelationReport> {
    let (p1, p2) = schottky_generators();
    let k = commutator(&p1, &p2)?;
    let [q1, q2, q3, _] = inversive_generators();
    let p1i = p1.inverse()?;
    let p2i = p2.inverse()?;
    Ok(RelationReport {
        traces: [p1.trace(), p2.trace(), k.trace()],
        all_parabolic: p1.is_parabolic() && p2.is_parabolic() && k.is_parabolic(),
        p3_is_p2_inverse_squared: q3 == &p2i * &p2i,
        p1_inv_p2_is_minus_p1_inverse_squared: &q1.conj().inverse()? * &q2.conj()
            == -(&p1i * &p1i),
        literal_p1_inv_p2: &q1.inverse()? * &q2 == -(&p1i * &p1i),
        p2_squared_is_minus_commutator: &q2 * &q2 == -k,
    })
}

/// For each inversive generator: which circle of the dual configuration of
/// the unit gasket it fixes, and whether its action on the gasket matches the
/// corresponding Apollonian generator.
#[derive(Clone, Debug, PartialEq)]
pub struct InversionReport {
    /// 1-based dual row fixed by `sᵢ`, if any.
    pub fixed_dual_row: [Option<usize>; 4],
    /// `sᵢ` applied to the gasket equals `S_k W` with `k` the fixed row.
    pub matches_left_action: [bool; 4],
    /// Largest entry difference seen in the comparison.
    pub max_deviation: f64,
}

impl InversionReport {
    pub fn passed(&self) -> bool {
        self.fixed_dual_row.iter().all(Option::is_some) && self.matches_left_action.iter().all(|&m| m)
    }

    /// `k(i)` as 1-based indices, when every generator was matched.
    pub fn mapping(&self) -> Option<[usize; 4]> {
        let mut out = [0; 4];
        for (o, k) in out.iter_mut().zip(self.fixed_dual_row) {
            *o = k?;
        }
        Some(out)
    }
}

fn curve_samples(row: &FloatRow) -> Vec<Point> {
    let ts = [-2.0, -0.7, 0.0, 0.4, 1.3, 3.0];
    match row.center() {
        Some((cx, cy)) => ts
            .iter()
            .map(|t: &f64| Some(Complex64::new(cx, cy) + Complex64::from_polar(row.radius(), *t)))
            .collect(),
        None => {
            let (nx, ny) = (row.w1, row.w2);
            let m = row.co_curvature / 2.0;
            ts.iter()
                .map(|t| Some(Complex64::new(m * nx - t * ny, m * ny + t * nx)))
                .collect()
        }
    }
}

fn row_array(r: &FloatRow) -> [f64; 4] {
    [r.co_curvature, r.curvature, r.w1, r.w2]
}

fn fixes_curve(s: &MoebiusElement, row: &FloatRow) -> bool {
    let arr = row_array(row);
    curve_samples(row).into_iter().all(|p| {
        on_curve(&arr, p, 1e-9) && on_curve(&arr, s.apply(p), 1e-9)
    })
}

pub fn verify_inversion_geometry() -> Result<InversionReport> {
    let d0 = AccMatrix::unit_gasket();
    let dual = d0.dual();
    let dual_rows: Vec<FloatRow> = dual.rows().iter().map(FloatRow::from).collect();
    let mut report = InversionReport {
        fixed_dual_row: [None; 4],
        matches_left_action: [false; 4],
        max_deviation: 0.0,
    };
    for (i, p) in inversive_generators().iter().enumerate() {
        let s = inversion_element(p)?;
        let Some(k) = dual_rows.iter().position(|r| fixes_curve(&s, r)) else {
            continue;
        };
        report.fixed_dual_row[i] = Some(k + 1);
        let moved = apply_moebius(&s, &d0)?;
        let left = Generator::new(k, false).apply_left(d0.matrix()).to_f64();
        let dev = moved.max_abs_diff(&left);
        report.max_deviation = report.max_deviation.max(dev);
        report.matches_left_action[i] = dev < 1e-9;
    }
    Ok(report)
}

/// Letters `a = P₁`, `A = P₁⁻¹`, `b = P₂`, `B = P₂⁻¹`.
pub const LETTERS: [char; 4] = ['a', 'A', 'b', 'B'];

fn inverse_letter(c: char) -> char {
    match c {
        'a' => 'A',
        'A' => 'a',
        'b' => 'B',
        _ => 'b',
    }
}

/// Freely reduced words of length exactly `n`, in lexicographic order of
/// the letter sequence `a < A < b < B`.
pub fn reduced_words(n: usize) -> Vec<String> {
    let mut words = vec![String::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(words.len() * 3);
        for w in &words {
            for &c in &LETTERS {
                if w.chars().last().is_some_and(|l| inverse_letter(l) == c) {
                    continue;
                }
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        words = next;
    }
    words
}

pub fn word_matrix(word: &str) -> Result<Mat2C> {
    let (p1, p2) = schottky_generators();
    let table = [p1.clone(), p1.inverse()?, p2.clone(), p2.inverse()?];
    word.chars().try_fold(Mat2C::identity(), |acc, c| {
        let i = LETTERS
            .iter()
            .position(|&l| l == c)
            .ok_or_else(|| Error::Parse(format!("unknown Schottky letter {c:?}")))?;
        Ok(&acc * &table[i])
    })
}

/// Fixed points of `P₂`, `P₁` and `[P₁, P₂]`: `0`, `-i`, `1`.
pub fn parabolic_fixed_points() -> Result<Vec<Complex64>> {
    let (p1, p2) = schottky_generators();
    let k = commutator(&p1, &p2)?;
    [p2, p1, k]
        .iter()
        .map(|m| {
            let z = m
                .parabolic_fixed_point()?
                .ok_or_else(|| Error::Precondition("fixed point at infinity".into()))?;
            Ok(Complex64::new(rational::to_f64(&z.re), rational::to_f64(&z.im)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitSample {
    pub depth: usize,
    /// Image point and the word that produced it; seeds cycle fastest.
    pub points: Vec<(Complex64, String)>,
}

impl LimitSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,word\n");
        for (z, w) in &self.points {
            out.push_str(&format!("{},{},{}\n", z.re, z.im, w));
        }
        out
    }

    /// Every point within `radius + tol` of `center`.
    pub fn bounded_by(&self, center: Complex64, radius: f64, tol: f64) -> bool {
        self.points.iter().all(|(z, _)| (z - center).norm() <= radius + tol)
    }
}

/// Images of `seeds` under every reduced word of length `depth`.
pub fn sample_limit_set(depth: usize, seeds: &[Complex64], limits: &Limits) -> Result<LimitSample> {
    limits.check_limit_depth(depth)?;
    let mut points = Vec::new();
    for word in reduced_words(depth) {
        let m = word_matrix(&word)?.to_element()?;
        for &s in seeds {
            if let Some(z) = m.apply(Some(s)) {
                points.push((z, word.clone()));
            }
        }
    }
    Ok(LimitSample { depth, points })
}
