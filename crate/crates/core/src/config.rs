//! Ordered, oriented Descartes configurations.
//!
//! A configuration is stored as its 4×4 augmented curvature-center matrix
//! `W`, one [`AccRow`] per circle. Validity is `Wᵀ Q_D W = Q_W`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::circle::AccRow;
use crate::error::{Error, Result};
use crate::forms::{duality_operator, j0, Form4};
use crate::matrix::{permutation_matrix, rat_matrix, Matrix};
use crate::rational::{self, int, Rat};

/// Which of the four connected components a configuration lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConfigClass {
    pub determinant_sign: i8,
    pub total_orientation: i8,
}

impl fmt::Display for ConfigClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let det = if self.determinant_sign > 0 { '+' } else { '-' };
        let arrow = if self.total_orientation > 0 { "up" } else { "down" };
        write!(f, "M{det} ({arrow})")
    }
}

/// Checks `Wᵀ Q_D W = Q_W`, `det W = ±8` and a nonzero curvature sum.
pub fn validate_acc(w: &Matrix<Rat>) -> Result<ConfigClass> {
    if w.nrows() != 4 || w.ncols() != 4 {
        return Err(Error::NotDescartes(format!(
            "expected 4×4, got {}×{}",
            w.nrows(),
            w.ncols()
        )));
    }
    if Form4::descartes().matrix().congruence(w) != *Form4::wilker().matrix() {
        return Err(Error::NotDescartes("Wᵀ Q_D W differs from Q_W".into()));
    }
    let det = w.det();
    let determinant_sign = if det == int(8) {
        1
    } else if det == int(-8) {
        -1
    } else {
        return Err(Error::NotDescartes(format!(
            "determinant {} is not ±8",
            rational::format(&det)
        )));
    };
    let sum = curvature_sum(w);
    if sum.is_zero() {
        return Err(Error::InvalidOrientationSum);
    }
    Ok(ConfigClass {
        determinant_sign,
        total_orientation: rational::sign(&sum),
    })
}

fn curvature_sum(w: &Matrix<Rat>) -> Rat {
    (0..w.nrows()).map(|i| w[(i, 1)].clone()).sum()
}

/// `bᵀ Q_D b = 0`, i.e. `Σb² = ½(Σb)²`.
pub fn descartes_circle_check(b: &[Rat; 4]) -> bool {
    Form4::descartes().evaluate(b).is_zero()
}

/// A validated augmented curvature-center matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AccMatrix(Matrix<Rat>);

impl AccMatrix {
    pub fn new(w: Matrix<Rat>) -> Result<Self> {
        validate_acc(&w)?;
        Ok(AccMatrix(w))
    }

    /// For matrices known valid by construction (group images of a valid
    /// matrix).
    pub(crate) fn new_unchecked(w: Matrix<Rat>) -> Self {
        AccMatrix(w)
    }

    pub fn from_int_rows(rows: [[i64; 4]; 4]) -> Result<Self> {
        AccMatrix::new(rat_matrix(&rows))
    }

    /// Two lines `y = ±1` and two unit circles centred at `(±1, 0)`.
    pub fn strip() -> Self {
        AccMatrix(rat_matrix(&[
            [2, 0, 0, 1],
            [2, 0, 0, -1],
            [0, 1, 1, 0],
            [0, 1, -1, 0],
        ]))
    }

    /// The unit disk (curvature -1) holding circles of curvature 2, 2, 3.
    pub fn unit_gasket() -> Self {
        AccMatrix(rat_matrix(&[
            [1, -1, 0, 0],
            [0, 2, 1, 0],
            [0, 2, -1, 0],
            [1, 3, 0, -2],
        ]))
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<Rat> {
        self.0
    }

    pub fn row(&self, i: usize) -> AccRow {
        let r = self.0.row(i);
        AccRow::new_unchecked(r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone())
    }

    pub fn rows(&self) -> [AccRow; 4] {
        [self.row(0), self.row(1), self.row(2), self.row(3)]
    }

    pub fn curvatures(&self) -> [Rat; 4] {
        [0, 1, 2, 3].map(|i| self.0[(i, 1)].clone())
    }

    pub fn class(&self) -> ConfigClass {
        validate_acc(&self.0).expect("AccMatrix is validated on construction")
    }

    pub fn total_orientation(&self) -> i8 {
        rational::sign(&curvature_sum(&self.0))
    }

    /// `D·W`: the four circles through the tangency points.
    pub fn dual(&self) -> Self {
        AccMatrix(&duality_operator() * &self.0)
    }

    /// Row `i` of the result is row `sigma[i]` of `self`.
    pub fn permute_rows(&self, sigma: [usize; 4]) -> Self {
        AccMatrix(&permutation_matrix(&sigma) * &self.0)
    }

    pub fn reversed(&self) -> Self {
        AccMatrix(-&self.0)
    }

    /// Last three columns.
    pub fn curvature_center(&self) -> CcMatrix {
        CcMatrix(Matrix::from_fn(4, 3, |i, j| self.0[(i, j + 1)].clone()))
    }

    /// Left action by a 4×4 matrix; validity is rechecked.
    pub fn left_mul(&self, u: &Matrix<Rat>) -> Result<Self> {
        AccMatrix::new(u * &self.0)
    }

    /// Right action by a 4×4 matrix; validity is rechecked.
    pub fn right_mul(&self, v: &Matrix<Rat>) -> Result<Self> {
        AccMatrix::new(&self.0 * v)
    }

    /// Columns 2..4 are integers.
    pub fn is_strongly_integral(&self) -> bool {
        (0..4).all(|i| (1..4).all(|j| self.0[(i, j)].is_integer()))
    }

    pub fn first_column_integral(&self) -> bool {
        (0..4).all(|i| self.0[(i, 0)].is_integer())
    }

    /// Unordered, unoriented representative: positive curvature sum, rows
    /// sorted lexicographically.
    pub fn canonical_form(&self) -> Matrix<Rat> {
        let m = if self.total_orientation() < 0 {
            -&self.0
        } else {
            self.0.clone()
        };
        let mut rows: Vec<Vec<Rat>> = m.rows().map(|r| r.to_vec()).collect();
        rows.sort();
        Matrix::from_rows(&rows)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(ConfigFile::from(self)).expect("config serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let file: ConfigFile = serde_json::from_value(v.clone())?;
        file.to_matrix().and_then(AccMatrix::new)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)?;
        AccMatrix::from_json(&v)
    }
}

impl fmt::Display for AccMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// On-disk form: `{"rows": [[b̄, b, w1, w2], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigFile {
    pub rows: Vec<Vec<Value>>,
}

impl ConfigFile {
    /// Parses the entries without checking validity.
    pub fn to_matrix(&self) -> Result<Matrix<Rat>> {
        if self.rows.len() != 4 || self.rows.iter().any(|r| r.len() != 4) {
            return Err(Error::Parse("configuration must have 4 rows of 4 entries".into()));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(rational::from_json).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(&rows))
    }
}

impl ConfigFile {
    /// `{"rows": [...]}` with one row per line.
    pub fn to_pretty_string(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(Value::to_string).collect();
                format!("    [{}]", cells.join(", "))
            })
            .collect();
        format!("{{\n  \"rows\": [\n{}\n  ]\n}}", rows.join(",\n"))
    }
}

impl From<&AccMatrix> for ConfigFile {
    fn from(w: &AccMatrix) -> Self {
        ConfigFile {
            rows: w
                .0
                .rows()
                .map(|r| r.iter().map(rational::to_json).collect())
                .collect(),
        }
    }
}

/// A 4×3 curvature-center matrix, rows `(b, b·x, b·y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcMatrix(Matrix<Rat>);

impl CcMatrix {
    pub fn new(m: Matrix<Rat>) -> Result<Self> {
        if !validate_ccm(&m) {
            return Err(Error::InvalidCcm(
                "needs Mᵀ Q_D M = diag(0,2,2) and a nonzero first column".into(),
            ));
        }
        Ok(CcMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.0
    }
}

fn ccm_gram() -> Matrix<Rat> {
    rat_matrix(&[[0, 0, 0], [0, 2, 0], [0, 0, 2]])
}

/// True iff `Mᵀ Q_D M = diag(0, 2, 2)` and the first column is not zero.
pub fn validate_ccm(m: &Matrix<Rat>) -> bool {
    satisfies_ccm_relation(m) && (0..4).any(|i| !m[(i, 0)].is_zero())
}

/// The quadratic relation alone, without the first-column rule.
pub fn satisfies_ccm_relation(m: &Matrix<Rat>) -> bool {
    m.nrows() == 4 && m.ncols() == 3 && Form4::descartes().matrix().congruence(m) == ccm_gram()
}

/// Recovers the unique `W` whose last three columns are `M`.
///
/// With `M̃ = J₀M` and `T` upper triangular making row 1 of `K = M̃T` equal to
/// `(1,0,0)`, the matrix `[x₀ | K]` with `x₀ = (2, -2K₂₁, -2K₃₁, -2K₄₁)` has
/// Wilker Gram matrix `Q_W`. Undoing `T` on the last three columns forces the
/// first column to be `[x₀ | K]·(a, (b²+c²)/a, -2b, -2c)` where `(a, b, c)` is
/// row 1 of `T`. Everything stays rational.
pub fn lift_ccm_to_acc(m: &CcMatrix) -> Result<AccMatrix> {
    let mt = &j0() * &m.0;
    let m11 = mt[(0, 0)].clone();
    if m11.is_zero() {
        return Err(Error::InconsistentInput(
            "first entry of J₀M vanishes".into(),
        ));
    }
    let a = m11.recip();
    let b = -&mt[(0, 1)] / &m11;
    let c = -&mt[(0, 2)] / &m11;
    let t = Matrix::from_rows(&[
        [a.clone(), b.clone(), c.clone()],
        [int(0), int(1), int(0)],
        [int(0), int(0), int(1)],
    ]);
    let k = &mt * &t;
    debug_assert!(k[(0, 0)].is_one() && k[(0, 1)].is_zero() && k[(0, 2)].is_zero());

    let block = Matrix::from_fn(3, 3, |i, j| k[(i + 1, j)].clone());
    let expected = Matrix::diagonal(&[int(1), int(2), int(2)]);
    if &block.transpose() * &block != expected {
        return Err(Error::InvalidCcm(
            "lower block of J₀MT is not orthogonal in the required scaling".into(),
        ));
    }

    let x0 = [int(2), -&k[(1, 0)] * int(2), -&k[(2, 0)] * int(2), -&k[(3, 0)] * int(2)];
    let y = [a.clone(), (&b * &b + &c * &c) / &a, -&b * int(2), -&c * int(2)];
    let first: Vec<Rat> = (0..4)
        .map(|i| {
            &x0[i] * &y[0] + &k[(i, 0)] * &y[1] + &k[(i, 1)] * &y[2] + &k[(i, 2)] * &y[3]
        })
        .collect();
    let wt = Matrix::from_fn(4, 4, |i, j| {
        if j == 0 {
            first[i].clone()
        } else {
            mt[(i, j - 1)].clone()
        }
    });
    let w = &j0() * &wt;
    AccMatrix::new(w).map_err(|e| Error::InvalidCcm(format!("lifted matrix rejected: {e}")))
}

/// Sanity check on the curvature column: every valid configuration satisfies
/// the Descartes relation.
pub fn curvature_relation_holds(w: &AccMatrix) -> bool {
    descartes_circle_check(&w.curvatures())
}

/// All six pairwise tangency values are -½ and all four self values are ½.
pub fn pairwise_tangency_holds(w: &AccMatrix) -> bool {
    let rows = w.rows();
    let half = rational::half();
    (0..4).all(|i| {
        (0..4).all(|j| {
            let v = rows[i].tangency_value(&rows[j]);
            if i == j {
                v == half
            } else {
                v == -&half
            }
        })
    })
}
