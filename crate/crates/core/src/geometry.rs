//! Floating-point relations between circles: interior overlap, crossing,
//! tangency. Used only for checks and sampling; exact work lives elsewhere.

use crate::circle::FloatRow;

/// The oriented interior of a circle row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Interior {
    Disk { cx: f64, cy: f64, r: f64 },
    /// Outside of the disk of radius `r`.
    Exterior { cx: f64, cy: f64, r: f64 },
    /// `p·n > m`.
    HalfPlane { nx: f64, ny: f64, m: f64 },
}

/// The underlying unoriented curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curve {
    Circle { cx: f64, cy: f64, r: f64 },
    Line { nx: f64, ny: f64, m: f64 },
}

impl FloatRow {
    pub fn from_circle(cx: f64, cy: f64, oriented_radius: f64) -> Self {
        let b = 1.0 / oriented_radius;
        FloatRow {
            co_curvature: (cx * cx + cy * cy - oriented_radius * oriented_radius) / oriented_radius,
            curvature: b,
            w1: b * cx,
            w2: b * cy,
        }
    }

    /// Same center and orientation, radius multiplied by `k`.
    pub fn with_scaled_radius(&self, k: f64) -> Self {
        let (cx, cy) = self.center().expect("lines have no radius");
        FloatRow::from_circle(cx, cy, k / self.curvature)
    }

    pub fn interior(&self) -> Interior {
        if self.is_line() {
            Interior::HalfPlane {
                nx: self.w1,
                ny: self.w2,
                m: self.co_curvature / 2.0,
            }
        } else {
            let (cx, cy) = (self.w1 / self.curvature, self.w2 / self.curvature);
            let r = self.radius();
            if self.curvature > 0.0 {
                Interior::Disk { cx, cy, r }
            } else {
                Interior::Exterior { cx, cy, r }
            }
        }
    }

    pub fn curve(&self) -> Curve {
        match self.interior() {
            Interior::Disk { cx, cy, r } | Interior::Exterior { cx, cy, r } => {
                Curve::Circle { cx, cy, r }
            }
            Interior::HalfPlane { nx, ny, m } => Curve::Line { nx, ny, m },
        }
    }
}

/// How far two oriented interiors overlap, in length units. Positive means a
/// genuine overlap; tangent interiors give about zero; infinite when the two
/// regions are unbounded in incompatible ways.
pub fn interior_overlap(a: &FloatRow, b: &FloatRow) -> f64 {
    use Interior::*;
    match (a.interior(), b.interior()) {
        (Disk { cx, cy, r }, Disk { cx: dx, cy: dy, r: s }) => r + s - dist(cx, cy, dx, dy),
        (Disk { cx, cy, r }, Exterior { cx: ox, cy: oy, r: big })
        | (Exterior { cx: ox, cy: oy, r: big }, Disk { cx, cy, r }) => {
            dist(cx, cy, ox, oy) + r - big
        }
        (Disk { cx, cy, r }, HalfPlane { nx, ny, m }) | (HalfPlane { nx, ny, m }, Disk { cx, cy, r }) => {
            nx * cx + ny * cy + r - m
        }
        (HalfPlane { nx, ny, m }, HalfPlane { nx: px, ny: py, m: q })
            if (nx + px).abs() < 1e-12 && (ny + py).abs() < 1e-12 =>
        {
            -(m + q)
        }
        _ => f64::INFINITY,
    }
}

/// How far two curves cross, in length units. Positive means the curves meet
/// transversally at two points.
pub fn crossing_depth(a: &FloatRow, b: &FloatRow) -> f64 {
    use Curve::*;
    match (a.curve(), b.curve()) {
        (Circle { cx, cy, r }, Circle { cx: dx, cy: dy, r: s }) => {
            let d = dist(cx, cy, dx, dy);
            // Positive inside the open annulus |r - s| < d < r + s.
            (d - (r - s).abs()).min(r + s - d)
        }
        (Circle { cx, cy, r }, Line { nx, ny, m }) | (Line { nx, ny, m }, Circle { cx, cy, r }) => {
            r - (nx * cx + ny * cy - m).abs()
        }
        (Line { nx, ny, .. }, Line { nx: px, ny: py, .. }) => {
            if (nx * py - ny * px).abs() > 1e-12 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        }
    }
}

/// Whether two curves coincide as point sets.
pub fn same_curve(a: &FloatRow, b: &FloatRow, tol: f64) -> bool {
    use Curve::*;
    match (a.curve(), b.curve()) {
        (Circle { cx, cy, r }, Circle { cx: dx, cy: dy, r: s }) => {
            dist(cx, cy, dx, dy) < tol && (r - s).abs() < tol
        }
        (Line { nx, ny, m }, Line { nx: px, ny: py, m: q }) => {
            ((nx - px).abs() < tol && (ny - py).abs() < tol && (m - q).abs() < tol)
                || ((nx + px).abs() < tol && (ny + py).abs() < tol && (m + q).abs() < tol)
        }
        _ => false,
    }
}

/// A tangency between two distinct curves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Touch {
    At(f64, f64),
    AtInfinity,
}

/// The point where two distinct curves touch, if they are tangent within
/// `tol`.
pub fn tangency(a: &FloatRow, b: &FloatRow, tol: f64) -> Option<Touch> {
    use Curve::*;
    if same_curve(a, b, tol) {
        return None;
    }
    match (a.curve(), b.curve()) {
        (Circle { cx, cy, r }, Circle { cx: dx, cy: dy, r: s }) => {
            let d = dist(cx, cy, dx, dy);
            if d < tol {
                return None;
            }
            let (ux, uy) = ((dx - cx) / d, (dy - cy) / d);
            if (d - (r + s)).abs() < tol {
                Some(Touch::At(cx + r * ux, cy + r * uy))
            } else if (d - (r - s).abs()).abs() < tol {
                if r >= s {
                    Some(Touch::At(cx + r * ux, cy + r * uy))
                } else {
                    Some(Touch::At(dx - s * ux, dy - s * uy))
                }
            } else {
                None
            }
        }
        (Circle { cx, cy, r }, Line { nx, ny, m }) | (Line { nx, ny, m }, Circle { cx, cy, r }) => {
            let h = nx * cx + ny * cy - m;
            ((h.abs() - r).abs() < tol).then_some(Touch::At(cx - h * nx, cy - h * ny))
        }
        (Line { nx, ny, .. }, Line { nx: px, ny: py, .. }) => {
            ((nx * py - ny * px).abs() < tol).then_some(Touch::AtInfinity)
        }
    }
}

fn dist(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    (ax - bx).hypot(ay - by)
}
