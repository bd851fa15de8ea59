//! Möbius maps acting on the right of augmented curvature-center matrices.
//!
//! For a Möbius map `g` there is a unique `V_g` preserving `Q_W` with
//! `W_{g(D)} = W_D V_g⁻¹`. The matrix that multiplies on the right,
//! `R_g = V_g⁻¹`, is what [`action_matrix`] returns; [`moebius_to_autqw`]
//! returns `V_g` itself. Composition reverses: `R_{g∘h} = R_h R_g`.
//!
//! Rational translations, dilations and rotations stay exact through
//! [`ExactChain`]. Arbitrary complex coefficients go through [`MoebiusElement`]
//! in `f64`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::config::AccMatrix;
use crate::error::{Error, Result};
use crate::forms::{Form4, Sqrt2Scaled};
use crate::matrix::{Field, Matrix, Scalar};
use crate::rational::{self, Rat};

/// Tolerance for float identities between 4×4 matrices of moderate size.
pub const FLOAT_TOL: f64 = 1e-9;

/// A point of the Riemann sphere; `None` is infinity.
pub type Point = Option<Complex64>;

/// `z ↦ (a w + b)/(c w + d)` with `w = z̄` when `conjugate` is set, times the
/// orientation flip `-I` when `reflection_sign` is `-1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusElement {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub conjugate: bool,
    pub reflection_sign: i8,
}

impl MoebiusElement {
    /// Normalizes to `ad - bc = 1`.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() < 1e-12 {
            return Err(Error::Singular);
        }
        let s = det.sqrt();
        Ok(MoebiusElement {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
            conjugate: false,
            reflection_sign: 1,
        })
    }

    pub fn identity() -> Self {
        MoebiusElement {
            a: Complex64::one(),
            b: Complex64::zero(),
            c: Complex64::zero(),
            d: Complex64::one(),
            conjugate: false,
            reflection_sign: 1,
        }
    }

    pub fn translation(z0: Complex64) -> Self {
        MoebiusElement {
            b: z0,
            ..Self::identity()
        }
    }

    /// `z ↦ λ z`.
    pub fn dilation(lambda: Complex64) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroDilation);
        }
        let s = lambda.sqrt();
        Ok(MoebiusElement {
            a: s,
            d: s.inv(),
            ..Self::identity()
        })
    }

    /// `z ↦ z̄`.
    pub fn conjugation() -> Self {
        MoebiusElement {
            conjugate: true,
            ..Self::identity()
        }
    }

    /// Inversion in the unit circle, `z ↦ 1/z̄`.
    pub fn unit_inversion() -> Self {
        let mi = Complex64::new(0.0, -1.0);
        MoebiusElement {
            a: Complex64::zero(),
            b: mi,
            c: mi,
            d: Complex64::zero(),
            conjugate: true,
            reflection_sign: 1,
        }
    }

    /// The identity map with every orientation reversed.
    pub fn flip() -> Self {
        MoebiusElement {
            reflection_sign: -1,
            ..Self::identity()
        }
    }

    pub fn with_flip(mut self) -> Self {
        self.reflection_sign = -self.reflection_sign;
        self
    }

    pub fn is_conformal(&self) -> bool {
        !self.conjugate && self.reflection_sign == 1
    }

    fn holomorphic(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusElement) -> MoebiusElement {
        let [a, b, c, d] = self.holomorphic();
        let [mut p, mut q, mut r, mut s] = other.holomorphic();
        if self.conjugate {
            p = p.conj();
            q = q.conj();
            r = r.conj();
            s = s.conj();
        }
        MoebiusElement {
            a: a * p + b * r,
            b: a * q + b * s,
            c: c * p + d * r,
            d: c * q + d * s,
            conjugate: self.conjugate ^ other.conjugate,
            reflection_sign: self.reflection_sign * other.reflection_sign,
        }
    }

    pub fn inverse(&self) -> MoebiusElement {
        let mut inv = [self.d, -self.b, -self.c, self.a];
        if self.conjugate {
            inv = inv.map(|x| x.conj());
        }
        MoebiusElement {
            a: inv[0],
            b: inv[1],
            c: inv[2],
            d: inv[3],
            ..*self
        }
    }

    pub fn apply(&self, z: Point) -> Point {
        let w = if self.conjugate { z.map(|z| z.conj()) } else { z };
        let scale = self.holomorphic().iter().map(|x| x.norm()).fold(0.0, f64::max);
        match w {
            None => (self.c.norm() > 1e-14 * scale).then(|| self.a / self.c),
            Some(w) => {
                let den = self.c * w + self.d;
                if den.norm() <= 1e-14 * scale * (1.0 + w.norm()) {
                    None
                } else {
                    Some((self.a * w + self.b) / den)
                }
            }
        }
    }
}

impl fmt::Display for MoebiusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)?;
        if self.conjugate {
            write!(f, " ∘ conj")?;
        }
        if self.reflection_sign < 0 {
            write!(f, " (flipped)")?;
        }
        Ok(())
    }
}

/// Entries uniform in `[-2, 2] + [-2, 2]i`, redrawn while nearly singular.
pub fn random_element<R: Rng>(rng: &mut R) -> MoebiusElement {
    loop {
        let mut z = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (a, b, c, d) = (z(), z(), z(), z());
        if (a * d - b * c).norm() > 0.1 {
            return MoebiusElement::new(a, b, c, d).expect("determinant bounded away from 0");
        }
    }
}

fn translation_generic<T: Scalar>(x: T, y: T) -> Matrix<T> {
    let two = T::one() + T::one();
    let (o, z) = (T::one(), T::zero());
    let n = x.clone() * x.clone() + y.clone() * y.clone();
    Matrix::from_rows(&[
        [o.clone(), z.clone(), z.clone(), z.clone()],
        [n, o.clone(), x.clone(), y.clone()],
        [two.clone() * x, z.clone(), o.clone(), z.clone()],
        [two * y, z.clone(), z, o],
    ])
}

fn dilation_generic<T: Field>(r: T, cos: T, sin: T) -> Matrix<T> {
    let z = T::zero();
    let inv = T::one() / r.clone();
    Matrix::from_rows(&[
        [r, z.clone(), z.clone(), z.clone()],
        [z.clone(), inv, z.clone(), z.clone()],
        [z.clone(), z.clone(), cos.clone(), sin.clone()],
        [z.clone(), z, -sin, cos],
    ])
}

/// Right-action matrix of `z ↦ z + x + iy`.
pub fn translation_matrix(x: &Rat, y: &Rat) -> Matrix<Rat> {
    translation_generic(x.clone(), y.clone())
}

/// Right-action matrix of `z ↦ r(cos + i sin) z`; needs `r > 0` and
/// `cos² + sin² = 1`.
pub fn dilation_matrix(r: &Rat, cos: &Rat, sin: &Rat) -> Result<Matrix<Rat>> {
    if r.is_zero() {
        return Err(Error::ZeroDilation);
    }
    if r.is_negative() {
        return Err(Error::Precondition("dilation modulus must be positive".into()));
    }
    if cos * cos + sin * sin != Rat::one() {
        return Err(Error::NonUnitNormal);
    }
    Ok(dilation_generic(r.clone(), cos.clone(), sin.clone()))
}

pub fn translation_matrix_f64(z0: Complex64) -> Matrix<f64> {
    translation_generic(z0.re, z0.im)
}

pub fn dilation_matrix_f64(lambda: Complex64) -> Result<Matrix<f64>> {
    let r = lambda.norm();
    if r == 0.0 {
        return Err(Error::ZeroDilation);
    }
    Ok(dilation_generic(r, lambda.re / r, lambda.im / r))
}

/// `(b̄, b, w1, w2) ↦ (b̄, b, w1, -w2)`.
pub fn conjugation_matrix<T: Scalar>() -> Matrix<T> {
    Matrix::diagonal(&[T::one(), T::one(), T::one(), -T::one()])
}

/// Inversion in the unit circle swaps `b̄` and `b`.
pub fn inversion_matrix<T: Scalar>() -> Matrix<T> {
    crate::matrix::permutation_matrix(&[1, 0, 2, 3])
}

pub(crate) fn on_curve(row: &[f64], p: Point, tol: f64) -> bool {
    let norm = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    match p {
        None => row[1].abs() <= tol * norm,
        Some(p) => {
            let (x, y) = (p.re, p.im);
            let q = row[1] * (x * x + y * y) - 2.0 * (row[2] * x + row[3] * y) + row[0];
            let scale = row[1].abs() * (x * x + y * y)
                + 2.0 * (row[2].abs() * x.abs() + row[3].abs() * y.abs())
                + row[0].abs()
                + norm;
            q.abs() <= tol * scale
        }
    }
}

fn holomorphic_action(g: &MoebiusElement) -> Result<Matrix<f64>> {
    let [a, b, c, d] = g.holomorphic();
    let scale = g.holomorphic().iter().map(|x| x.norm()).fold(0.0, f64::max);
    if c.norm() <= 1e-14 * scale {
        // g = t_{b/d} ∘ d_{a/d}
        Ok(&dilation_matrix_f64(a / d)? * &translation_matrix_f64(b / d))
    } else {
        // g = t_{a/c} ∘ d_{-1/c²} ∘ (z ↦ 1/z) ∘ t_{d/c}
        let recip = &inversion_matrix::<f64>() * &conjugation_matrix::<f64>();
        let m = &translation_matrix_f64(d / c) * &recip;
        let m = &m * &dilation_matrix_f64(-(c * c).inv())?;
        Ok(&m * &translation_matrix_f64(a / c))
    }
}

/// `R_g = V_g⁻¹`, the matrix with `W_{g(D)} = W_D R_g`.
///
/// The holomorphic factor is checked by mapping the real axis and the unit
/// circle and comparing with the images of three points on each.
pub fn action_matrix(g: &MoebiusElement) -> Result<Matrix<f64>> {
    let hol = MoebiusElement {
        conjugate: false,
        reflection_sign: 1,
        ..*g
    };
    let r = holomorphic_action(&hol)?;
    let one = Complex64::one();
    let i = Complex64::i();
    let checks: [([f64; 4], [Point; 3]); 2] = [
        ([0.0, 0.0, 0.0, 1.0], [Some(Complex64::zero()), Some(one), None]),
        ([-1.0, 1.0, 0.0, 0.0], [Some(one), Some(-one), Some(i)]),
    ];
    for (row, pts) in checks {
        let image = &Matrix::from_rows(&[row]) * &r;
        for p in pts {
            if !on_curve(image.row(0), hol.apply(p), 1e-8) {
                return Err(Error::NumericInstability(format!(
                    "decomposition of {g} does not reproduce the image of {p:?}"
                )));
            }
        }
    }
    let mut r = if g.conjugate { &conjugation_matrix::<f64>() * &r } else { r };
    if g.reflection_sign < 0 {
        r = -&r;
    }
    Ok(r)
}

/// `V_g`, the image of `g` in the automorphism group of `Q_W`.
pub fn moebius_to_autqw(g: &MoebiusElement) -> Result<Matrix<f64>> {
    action_matrix(g)?.inverse()
}

/// Largest entry of `Wᵀ Q_D W - Q_W`, relative to the size of `W`.
pub fn validity_defect(w: &Matrix<f64>) -> f64 {
    let q = Form4::descartes().matrix().to_f64();
    let gram = q.congruence(w);
    let scale = 1.0 + w.max_abs().powi(2);
    gram.max_abs_diff(&Form4::wilker().matrix().to_f64()) / scale
}

/// Sign of the curvature sum.
pub fn total_orientation_f64(w: &Matrix<f64>) -> i8 {
    if w.column(1).iter().sum::<f64>() > 0.0 {
        1
    } else {
        -1
    }
}

/// `W_{g(D)} = W_D R_g`, in floating point.
pub fn apply_moebius(g: &MoebiusElement, w: &AccMatrix) -> Result<Matrix<f64>> {
    let out = &w.matrix().to_f64() * &action_matrix(g)?;
    let defect = validity_defect(&out);
    if defect > FLOAT_TOL {
        return Err(Error::NumericInstability(format!(
            "image configuration misses Q_W by {defect:e}"
        )));
    }
    Ok(out)
}

/// The explicit isomorphism onto the proper orthochronous Lorentz group,
/// with the time coordinate first.
pub fn wilker_lorentz_map(g: &MoebiusElement) -> Result<Matrix<f64>> {
    if g.conjugate {
        return Err(Error::Precondition("the Lorentz map takes holomorphic elements".into()));
    }
    let [a, b, c, d] = g.holomorphic();
    let (na, nb, nc, nd) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr(), d.norm_sqr());
    let ac = a * c.conj();
    let bd = b * d.conj();
    let ab = a * b.conj();
    let cd = c * d.conj();
    let ad = a * d.conj();
    let bc = b * c.conj();
    Ok(Matrix::from_rows(&[
        [0.5 * (na + nb + nc + nd), (ac + bd).im, 0.5 * (na + nb - nc - nd), (ac + bd).re],
        [(-ab - cd).im, (ad - bc).re, (-ab + cd).im, (-ad + bc).im],
        [0.5 * (na - nb + nc - nd), (ac - bd).im, 0.5 * (na - nb - nc + nd), (ac - bd).re],
        [(ab + cd).re, (ad + bc).im, (ab - cd).re, (ad + bc).re],
    ]))
}

/// Largest entry of `Lᵀ Q_L L - Q_L`.
pub fn lorentz_defect(l: &Matrix<f64>) -> f64 {
    let q = Form4::lorentz().matrix().to_f64();
    q.congruence(l).max_abs_diff(&q)
}

/// Distance from `x` to the nearer of `±y`, relative to the size of `y`.
pub fn deviation_up_to_sign(x: &Matrix<f64>, y: &Matrix<f64>) -> f64 {
    let d = x.max_abs_diff(y).min(x.max_abs_diff(&-y));
    d / (1.0 + y.max_abs())
}

/// Outcome of comparing the chain through `Z` with the explicit Lorentz map.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConjugacyReport {
    pub checked: usize,
    /// Worst `Q_L` defect of `Z V_g Z⁻¹`.
    pub lorentz_defect: f64,
    /// Worst distance between `Z V_g Z⁻¹` and `±` the explicit map.
    pub direct_deviation: f64,
    /// Worst distance between `Z' R_g Z'⁻¹` and `±` the explicit map, where
    /// `Z' = diag(1,-1,1,-1) Z`.
    pub adjusted_deviation: f64,
    /// Indices of samples failing either the Lorentz or the adjusted check.
    pub failures: Vec<usize>,
}

impl ConjugacyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn direct_z_agrees(&self) -> bool {
        self.direct_deviation <= FLOAT_TOL
    }
}

/// `diag(1,-1,1,-1)`, the coordinate sign change relating `Z` to the
/// intertwiner under which the explicit Lorentz map is a conjugation.
pub fn lorentz_sign_change() -> Matrix<f64> {
    Matrix::diagonal(&[1.0, -1.0, 1.0, -1.0])
}

pub fn verify_conjugacy_chain(samples: &[MoebiusElement]) -> Result<ConjugacyReport> {
    let z = Sqrt2Scaled::z();
    let s = lorentz_sign_change();
    let mut report = ConjugacyReport::default();
    for (k, g) in samples.iter().enumerate() {
        let r = action_matrix(g)?;
        let v = r.inverse()?;
        let lv = z.conjugate_f64(&v)?;
        let explicit = wilker_lorentz_map(g)?;
        let adjusted = &(&s * &z.conjugate_f64(&r)?) * &s;

        let ld = lorentz_defect(&lv) / (1.0 + lv.max_abs().powi(2));
        let pd = deviation_up_to_sign(&lv, &explicit);
        let ad = deviation_up_to_sign(&adjusted, &explicit);
        report.lorentz_defect = report.lorentz_defect.max(ld);
        report.direct_deviation = report.direct_deviation.max(pd);
        report.adjusted_deviation = report.adjusted_deviation.max(ad);
        if ld > FLOAT_TOL || ad > FLOAT_TOL {
            report.failures.push(k);
        }
        report.checked += 1;
    }
    Ok(report)
}

/// One exactly representable step of a rational Möbius chain.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactOp {
    Translate(Rat, Rat),
    Dilate(Rat),
    /// Rotation by the unit complex number `cos + i sin`.
    Rotate(Rat, Rat),
    Conjugate,
    Invert,
    Flip,
}

impl ExactOp {
    pub fn action_matrix(&self) -> Result<Matrix<Rat>> {
        let one = Rat::one();
        let zero = Rat::zero();
        Ok(match self {
            ExactOp::Translate(x, y) => translation_matrix(x, y),
            ExactOp::Dilate(r) => dilation_matrix(r, &one, &zero)?,
            ExactOp::Rotate(c, s) => dilation_matrix(&one, c, s)?,
            ExactOp::Conjugate => conjugation_matrix(),
            ExactOp::Invert => inversion_matrix(),
            ExactOp::Flip => -&Matrix::identity(4),
        })
    }

    pub fn element(&self) -> Result<MoebiusElement> {
        let f = rational::to_f64;
        Ok(match self {
            ExactOp::Translate(x, y) => MoebiusElement::translation(Complex64::new(f(x), f(y))),
            ExactOp::Dilate(r) => MoebiusElement::dilation(Complex64::new(f(r), 0.0))?,
            ExactOp::Rotate(c, s) => MoebiusElement::dilation(Complex64::new(f(c), f(s)))?,
            ExactOp::Conjugate => MoebiusElement::conjugation(),
            ExactOp::Invert => MoebiusElement::unit_inversion(),
            ExactOp::Flip => MoebiusElement::flip(),
        })
    }
}

impl FromStr for ExactOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<Rat> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',').map(|a| rational::parse(a.trim())).collect::<Result<_>>()?
        };
        let bad = || Error::Parse(format!("cannot read Möbius step {s:?}"));
        match (head.trim(), args.as_slice()) {
            ("t", [x]) => Ok(ExactOp::Translate(x.clone(), Rat::zero())),
            ("t", [x, y]) => Ok(ExactOp::Translate(x.clone(), y.clone())),
            ("d", [r]) => Ok(ExactOp::Dilate(r.clone())),
            ("r", [c, s]) => Ok(ExactOp::Rotate(c.clone(), s.clone())),
            ("c", []) => Ok(ExactOp::Conjugate),
            ("j", []) => Ok(ExactOp::Invert),
            ("flip", []) => Ok(ExactOp::Flip),
            _ => Err(bad()),
        }
    }
}

/// Steps applied left to right: `"t:1,0; d:2"` translates, then dilates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactChain(pub Vec<ExactOp>);

impl ExactChain {
    /// `R_1 R_2 ⋯ R_k`.
    pub fn action_matrix(&self) -> Result<Matrix<Rat>> {
        self.0
            .iter()
            .try_fold(Matrix::identity(4), |acc, op| Ok(&acc * &op.action_matrix()?))
    }

    /// The composed map `op_k ∘ ⋯ ∘ op_1`.
    pub fn element(&self) -> Result<MoebiusElement> {
        self.0
            .iter()
            .try_fold(MoebiusElement::identity(), |acc, op| Ok(op.element()?.compose(&acc)))
    }

    pub fn apply(&self, w: &AccMatrix) -> Result<AccMatrix> {
        w.right_mul(&self.action_matrix()?)
    }
}

impl FromStr for ExactChain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(';')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(ExactChain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::AccRow;
    use crate::forms::is_automorph;
    use crate::matrix::rat_matrix;
    use crate::rational::{frac, int};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn row_times(row: [i64; 4], m: &Matrix<Rat>) -> Vec<Rat> {
        (&rat_matrix(&[row]) * m).row(0).to_vec()
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn translation_rows() {
        let t1 = translation_matrix(&int(1), &int(0));
        assert_eq!(row_times([1, 1, 1, 1], &t1), ints(&[4, 1, 2, 1]));
        // Centre (2, 1), radius 1.
        let geo = AccRow::from_circle((int(2), int(1)), int(1)).unwrap();
        assert_eq!(geo.to_array().to_vec(), ints(&[4, 1, 2, 1]));

        let ti = translation_matrix(&int(0), &int(1));
        assert_eq!(row_times([0, 2, 0, 1], &ti), ints(&[4, 2, 0, 3]));
        let geo = AccRow::from_circle((int(0), frac(3, 2)), frac(1, 2)).unwrap();
        assert_eq!(geo.to_array().to_vec(), ints(&[4, 2, 0, 3]));

        assert!(translation_matrix(&int(0), &int(0)).is_identity());
    }

    #[test]
    fn dilation_rows() {
        let d2 = dilation_matrix(&int(2), &int(1), &int(0)).unwrap();
        assert_eq!(row_times([1, 1, 1, 1], &d2), vec![int(2), frac(1, 2), int(1), int(1)]);
        let di = dilation_matrix(&int(1), &int(0), &int(1)).unwrap();
        assert_eq!(row_times([0, 2, 0, 1], &di), ints(&[0, 2, -1, 0]));
        assert!(dilation_matrix(&int(1), &int(1), &int(0)).unwrap().is_identity());
        assert!(matches!(dilation_matrix(&int(0), &int(1), &int(0)), Err(Error::ZeroDilation)));
        assert!(dilation_matrix(&int(1), &int(1), &int(1)).is_err());
        assert!(dilation_matrix_f64(Complex64::zero()).is_err());
    }

    #[test]
    fn conjugation_and_inversion() {
        let c = conjugation_matrix::<Rat>();
        let j = inversion_matrix::<Rat>();
        assert_eq!(row_times([0, 2, 0, 1], &c), ints(&[0, 2, 0, -1]));
        assert_eq!(row_times([2, 0, 0, 1], &j), ints(&[0, 2, 0, 1]));
        assert!((&c * &c).is_identity());
        assert!((&j * &j).is_identity());
    }

    #[test]
    fn generators_preserve_wilker_form() {
        let q = Form4::wilker();
        let rot = dilation_matrix(&frac(3, 2), &frac(3, 5), &frac(-4, 5)).unwrap();
        for m in [
            translation_matrix(&frac(1, 3), &frac(-7, 2)),
            rot,
            conjugation_matrix(),
            inversion_matrix(),
        ] {
            assert!(is_automorph(&m, &q));
        }
    }

    #[test]
    fn translation_by_one() {
        let g = MoebiusElement::translation(Complex64::new(1.0, 0.0));
        let r = action_matrix(&g).unwrap();
        assert!(r.max_abs_diff(&translation_matrix(&int(1), &int(0)).to_f64()) < 1e-12);
        let v = moebius_to_autqw(&g).unwrap();
        assert!(v.max_abs_diff(&translation_matrix(&int(-1), &int(0)).to_f64()) < 1e-12);
        assert!(action_matrix(&MoebiusElement::identity()).unwrap().max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn translated_strip_moves_every_circle() {
        let w0 = AccMatrix::strip();
        let g = MoebiusElement::translation(Complex64::new(1.0, 0.0));
        let out = apply_moebius(&g, &w0).unwrap();
        for (i, row) in w0.rows().iter().enumerate() {
            let shifted = FloatShift::of(row);
            for (k, x) in shifted.iter().enumerate() {
                assert!((out[(i, k)] - x).abs() < 1e-12);
            }
        }
        assert_eq!(total_orientation_f64(&out), w0.total_orientation());
    }

    struct FloatShift;

    impl FloatShift {
        /// Row of the same oriented circle moved by `(1, 0)`, from geometry.
        fn of(row: &AccRow) -> [f64; 4] {
            use crate::circle::CircleGeometry;
            let shifted = match row.geometry().unwrap() {
                CircleGeometry::Circle {
                    center: (x, y),
                    oriented_radius,
                } => AccRow::from_circle((x + int(1), y), oriented_radius).unwrap(),
                CircleGeometry::Line { unit_normal, offset } => {
                    let off = offset + &unit_normal.0;
                    AccRow::from_line(unit_normal, off).unwrap()
                }
            };
            shifted.to_f64()
        }
    }

    #[test]
    fn flip_negates() {
        let d0 = AccMatrix::unit_gasket();
        let out = apply_moebius(&MoebiusElement::flip(), &d0).unwrap();
        assert!(out.max_abs_diff(&-&d0.matrix().to_f64()) < 1e-12);
        assert_eq!(total_orientation_f64(&out), -d0.total_orientation());
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let mut g = random_element(&mut rng);
            let mut h = random_element(&mut rng);
            if rng.gen_bool(0.5) {
                g.conjugate = true;
            }
            if rng.gen_bool(0.5) {
                h = h.with_flip();
            }
            let lhs = moebius_to_autqw(&g.compose(&h)).unwrap();
            let rhs = &moebius_to_autqw(&g).unwrap() * &moebius_to_autqw(&h).unwrap();
            assert!(lhs.max_abs_diff(&rhs) / (1.0 + rhs.max_abs()) < 1e-9);
        }
    }

    #[test]
    fn inverse_and_apply_agree() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let mut g = random_element(&mut rng);
            g.conjugate = rng.gen_bool(0.5);
            let z = Complex64::new(0.3, -0.7);
            let back = g.inverse().apply(g.apply(Some(z))).unwrap();
            assert!((back - z).norm() < 1e-9);
        }
    }

    #[test]
    fn conformal_maps_keep_validity_and_orientation() {
        let mut rng = StdRng::seed_from_u64(11);
        let d0 = AccMatrix::unit_gasket();
        for _ in 0..50 {
            let g = random_element(&mut rng);
            let out = apply_moebius(&g, &d0).unwrap();
            assert!(validity_defect(&out) < 1e-9);
            assert_eq!(total_orientation_f64(&out), d0.total_orientation());
        }
    }

    #[test]
    fn exact_chain_matches_float_decomposition() {
        let chain: ExactChain = "t:1/2,-3; d:5/2; r:3/5,4/5; j; c".parse().unwrap();
        let exact = chain.action_matrix().unwrap().to_f64();
        let float = action_matrix(&chain.element().unwrap()).unwrap();
        assert!(exact.max_abs_diff(&float) < 1e-9);
        assert!(is_automorph(&chain.action_matrix().unwrap(), &Form4::wilker()));
        let out = chain.apply(&AccMatrix::unit_gasket()).unwrap();
        assert_eq!(out.total_orientation(), 1);
        assert!("t:1,2,3".parse::<ExactChain>().is_err());
        assert!("q".parse::<ExactChain>().is_err());
    }

    #[test]
    fn lorentz_map_basics() {
        assert!(wilker_lorentz_map(&MoebiusElement::identity())
            .unwrap()
            .max_abs_diff(&Matrix::identity(4))
            < 1e-12);
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let g = random_element(&mut rng);
            let neg = MoebiusElement {
                a: -g.a,
                b: -g.b,
                c: -g.c,
                d: -g.d,
                ..g
            };
            let l = wilker_lorentz_map(&g).unwrap();
            assert!(l.max_abs_diff(&wilker_lorentz_map(&neg).unwrap()) < 1e-12);
            assert!(lorentz_defect(&l) / (1.0 + l.max_abs().powi(2)) < 1e-9);
            assert!((l.det() - 1.0).abs() < 1e-6 * l.max_abs().powi(4));
            assert!(l[(0, 0)] > 0.0);
        }
        assert!(wilker_lorentz_map(&MoebiusElement::conjugation()).is_err());
    }

    #[test]
    fn conjugacy_chain() {
        let mut rng = StdRng::seed_from_u64(13);
        let mut samples = vec![
            MoebiusElement::identity(),
            MoebiusElement::translation(Complex64::new(1.0, 0.0)),
        ];
        samples.extend((0..50).map(|_| random_element(&mut rng)));
        let report = verify_conjugacy_chain(&samples).unwrap();
        assert_eq!(report.checked, 52);
        assert!(report.passed(), "{report:?}");
        // The intertwiner taken as is agrees only up to a sign change of two
        // coordinates.
        assert!(!report.direct_z_agrees());
    }
}
