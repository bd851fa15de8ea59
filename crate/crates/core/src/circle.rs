//! Oriented circles and lines in augmented curvature-center coordinates
//! `(b̄, b, w1, w2) = (b̄, b, b·x, b·y)`.
//!
//! The interior of an oriented circle is the side its normal points into.
//! For a line `(2m, 0, n1, n2)` that is the half-plane `p·n > m`. Every row
//! has the same interior test: `b|p|² - 2w·p + b̄ < 0`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, frac, half, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AccRow {
    pub co_curvature: Rat,
    pub curvature: Rat,
    pub w1: Rat,
    pub w2: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CircleGeometry {
    Circle {
        center: (Rat, Rat),
        /// Negative when the interior is the outside of the disk.
        oriented_radius: Rat,
    },
    Line {
        unit_normal: (Rat, Rat),
        /// The line is `p·n = offset`; the interior is `p·n > offset`.
        offset: Rat,
    },
}

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpherePoint {
    Finite(Rat, Rat),
    Infinity,
}

impl AccRow {
    /// Checked constructor.
    pub fn new(co_curvature: Rat, curvature: Rat, w1: Rat, w2: Rat) -> Result<Self> {
        let row = AccRow::new_unchecked(co_curvature, curvature, w1, w2);
        let r = row.residual();
        if !r.is_one() {
            return Err(Error::NotACircleRow(rational::format(&r)));
        }
        Ok(row)
    }

    pub fn new_unchecked(co_curvature: Rat, curvature: Rat, w1: Rat, w2: Rat) -> Self {
        AccRow {
            co_curvature,
            curvature,
            w1,
            w2,
        }
    }

    pub fn from_slice(v: &[Rat]) -> Result<Self> {
        match v {
            [a, b, c, d] => AccRow::new(a.clone(), b.clone(), c.clone(), d.clone()),
            _ => Err(Error::InconsistentInput("a circle row has 4 entries".into())),
        }
    }

    pub fn from_ints(v: [i64; 4]) -> Result<Self> {
        let [a, b, c, d] = v.map(rational::int);
        AccRow::new(a, b, c, d)
    }

    /// `b̄ = (x² + y² - r²)/r` with the signed radius.
    pub fn from_circle(center: (Rat, Rat), oriented_radius: Rat) -> Result<Self> {
        if oriented_radius.is_zero() {
            return Err(Error::DegenerateCircle);
        }
        let (x, y) = center;
        let r = oriented_radius;
        let b = r.recip();
        let bbar = (&x * &x + &y * &y - &r * &r) / &r;
        Ok(AccRow::new_unchecked(bbar, b.clone(), &b * x, &b * y))
    }

    pub fn from_line(unit_normal: (Rat, Rat), offset: Rat) -> Result<Self> {
        let (c, s) = unit_normal;
        if !(&c * &c + &s * &s).is_one() {
            return Err(Error::NonUnitNormal);
        }
        Ok(AccRow::new_unchecked(
            offset * rational::int(2),
            Rat::zero(),
            c,
            s,
        ))
    }

    /// `w1² + w2² - b̄·b`, which is 1 for a genuine circle row.
    pub fn residual(&self) -> Rat {
        &self.w1 * &self.w1 + &self.w2 * &self.w2 - &self.co_curvature * &self.curvature
    }

    pub fn is_valid(&self) -> bool {
        self.residual().is_one()
    }

    pub fn geometry(&self) -> Result<CircleGeometry> {
        if !self.is_valid() {
            return Err(Error::NotACircleRow(rational::format(&self.residual())));
        }
        Ok(if self.curvature.is_zero() {
            CircleGeometry::Line {
                unit_normal: (self.w1.clone(), self.w2.clone()),
                offset: &self.co_curvature * half(),
            }
        } else {
            CircleGeometry::Circle {
                center: (&self.w1 / &self.curvature, &self.w2 / &self.curvature),
                oriented_radius: self.curvature.recip(),
            }
        })
    }

    /// Image under inversion in the unit circle: swap `b̄` and `b`.
    pub fn inverted(&self) -> Self {
        AccRow::new_unchecked(
            self.curvature.clone(),
            self.co_curvature.clone(),
            self.w1.clone(),
            self.w2.clone(),
        )
    }

    pub fn negated(&self) -> Self {
        AccRow::new_unchecked(
            -&self.co_curvature,
            -&self.curvature,
            -&self.w1,
            -&self.w2,
        )
    }

    /// `a·Q_W⁻¹·bᵀ`: ½ for a row with itself, -½ for two tangent rows of a
    /// Descartes configuration.
    pub fn tangency_value(&self, other: &AccRow) -> Rat {
        frac(-1, 4)
            * (&self.co_curvature * &other.curvature + &self.curvature * &other.co_curvature)
            + half() * (&self.w1 * &other.w1 + &self.w2 * &other.w2)
    }

    /// Curvature-weighted mean of centers. Works for internal tangency and for
    /// a line touching a circle.
    pub fn tangency_point(&self, other: &AccRow) -> Result<(Rat, Rat)> {
        let s = &self.curvature + &other.curvature;
        if s.is_zero() {
            return Err(Error::TangencyAtInfinity);
        }
        Ok(((&self.w1 + &other.w1) / &s, (&self.w2 + &other.w2) / &s))
    }

    /// Like [`AccRow::tangency_point`] but maps a zero curvature sum to the
    /// point at infinity.
    pub fn tangency_sphere_point(&self, other: &AccRow) -> SpherePoint {
        match self.tangency_point(other) {
            Ok((x, y)) => SpherePoint::Finite(x, y),
            Err(_) => SpherePoint::Infinity,
        }
    }

    pub fn to_array(&self) -> [Rat; 4] {
        [
            self.co_curvature.clone(),
            self.curvature.clone(),
            self.w1.clone(),
            self.w2.clone(),
        ]
    }

    pub fn to_f64(&self) -> [f64; 4] {
        self.to_array().map(|x| rational::to_f64(&x))
    }

    /// Orientation-normalized copy: positive curvature, or for lines a
    /// lexicographically positive normal.
    pub fn canonical(&self) -> Self {
        let flip = if self.curvature.is_zero() {
            self.w1.is_negative() || (self.w1.is_zero() && self.w2.is_negative())
        } else {
            self.curvature.is_negative()
        };
        if flip {
            self.negated()
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for AccRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            rational::format(&self.co_curvature),
            rational::format(&self.curvature),
            rational::format(&self.w1),
            rational::format(&self.w2)
        )
    }
}

/// Float version of a row, for geometric checks and rendering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatRow {
    pub co_curvature: f64,
    pub curvature: f64,
    pub w1: f64,
    pub w2: f64,
}

impl FloatRow {
    pub fn from_array([co_curvature, curvature, w1, w2]: [f64; 4]) -> Self {
        FloatRow {
            co_curvature,
            curvature,
            w1,
            w2,
        }
    }

    /// `b|p|² - 2w·p + b̄`. Negative exactly on the interior; for a circle
    /// near its boundary this is about twice the signed distance.
    pub fn interior_value(&self, x: f64, y: f64) -> f64 {
        self.curvature * (x * x + y * y) - 2.0 * (self.w1 * x + self.w2 * y) + self.co_curvature
    }

    pub fn is_line(&self) -> bool {
        self.curvature == 0.0
    }

    pub fn center(&self) -> Option<(f64, f64)> {
        (!self.is_line()).then(|| (self.w1 / self.curvature, self.w2 / self.curvature))
    }

    /// Unsigned radius; infinite for lines.
    pub fn radius(&self) -> f64 {
        (1.0 / self.curvature).abs()
    }
}

impl From<&AccRow> for FloatRow {
    fn from(r: &AccRow) -> Self {
        FloatRow::from_array(r.to_f64())
    }
}
