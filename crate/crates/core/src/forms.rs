//! The Descartes, Wilker and Lorentz quadratic forms and the matrices that
//! intertwine them.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::{int_matrix, rat_matrix, Matrix};
use crate::rational::{half, Rat};

/// A symmetric 4×4 rational matrix viewed as a quadratic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form4(Matrix<Rat>);

impl Form4 {
    pub fn new(m: Matrix<Rat>) -> Result<Self> {
        if m.nrows() != 4 || m.ncols() != 4 {
            return Err(Error::InconsistentInput("form must be 4×4".into()));
        }
        if !m.is_symmetric() {
            return Err(Error::InconsistentInput("form must be symmetric".into()));
        }
        Ok(Form4(m))
    }

    /// `Q_D = I - ½·𝟙𝟙ᵀ`.
    pub fn descartes() -> Self {
        Form4(Matrix::from_fn(4, 4, |i, j| {
            if i == j {
                half()
            } else {
                -half()
            }
        }))
    }

    pub fn wilker() -> Self {
        Form4(rat_matrix(&[
            [0, -4, 0, 0],
            [-4, 0, 0, 0],
            [0, 0, 2, 0],
            [0, 0, 0, 2],
        ]))
    }

    /// `diag(-1, 1, 1, 1)`.
    pub fn lorentz() -> Self {
        Form4(rat_matrix(&[
            [-1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ]))
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.0
    }

    pub fn det(&self) -> Rat {
        self.0.det()
    }

    /// `vᵀ Q v`.
    pub fn evaluate(&self, v: &[Rat]) -> Rat {
        assert_eq!(v.len(), 4);
        let mut acc = Rat::from_integer(0.into());
        for i in 0..4 {
            for j in 0..4 {
                acc += &v[i] * &self.0[(i, j)] * &v[j];
            }
        }
        acc
    }
}

/// `Wᵀ Q W`, exact.
pub fn congruence(w: &Matrix<Rat>, q: &Form4) -> Form4 {
    Form4(q.0.congruence(w))
}

/// True iff `Uᵀ Q U = Q` exactly.
pub fn is_automorph(u: &Matrix<Rat>, q: &Form4) -> bool {
    u.nrows() == 4 && u.ncols() == 4 && q.0.congruence(u) == q.0
}

pub fn is_automorph_int(u: &Matrix<BigInt>, q: &Form4) -> bool {
    is_automorph(&u.to_rational(), q)
}

/// `(det Q_D, det Q_L, det Q_W)`, computed.
pub fn form_determinants() -> (Rat, Rat, Rat) {
    (
        Form4::descartes().det(),
        Form4::lorentz().det(),
        Form4::wilker().det(),
    )
}

/// `J₀`, symmetric and involutory, with `J₀ᵀ Q_L J₀ = Q_D`.
pub fn j0() -> Matrix<Rat> {
    rat_matrix(&[[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]).scale(&half())
}

/// `A = J₀·W₀`, with `Aᵀ Q_L A = Q_W`.
pub fn a_matrix() -> Matrix<Rat> {
    rat_matrix(&[[2, 1, 0, 0], [2, -1, 0, 0], [0, 0, 1, 1], [0, 0, -1, 1]])
}

/// The duality operator `D = -Q_D`.
pub fn duality_operator() -> Matrix<Rat> {
    -Form4::descartes().matrix()
}

/// A matrix `√2 · M` with `M` integral. Only the integer part is stored; the
/// factor cancels in conjugation and squares to 2 in congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sqrt2Scaled {
    integer: Matrix<BigInt>,
}

impl Sqrt2Scaled {
    /// The Wilker-to-Lorentz intertwiner `Z`, with `Zᵀ Q_L Z = Q_W`.
    pub fn z() -> Self {
        Sqrt2Scaled {
            integer: int_matrix(&[[1, 1, 0, 0], [0, 0, 0, -1], [1, -1, 0, 0], [0, 0, -1, 0]]),
        }
    }

    pub fn integer_part(&self) -> &Matrix<BigInt> {
        &self.integer
    }

    /// `(√2 M)ᵀ Q (√2 M) = 2·Mᵀ Q M`.
    pub fn gram(&self, q: &Form4) -> Matrix<Rat> {
        q.matrix()
            .congruence(&self.integer.to_rational())
            .scale(&Rat::from_integer(2.into()))
    }

    /// `(√2 M) X (√2 M)⁻¹ = M X M⁻¹`.
    pub fn conjugate(&self, x: &Matrix<Rat>) -> Result<Matrix<Rat>> {
        let m = self.integer.to_rational();
        Ok(&(&m * x) * &m.inverse()?)
    }

    pub fn conjugate_f64(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        let m = self.integer.to_rational().to_f64();
        Ok(&(&m * x) * &m.inverse()?)
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.integer
            .to_rational()
            .to_f64()
            .scale(&std::f64::consts::SQRT_2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn congruence_examples() {
        let qd = Form4::descartes();
        assert_eq!(congruence(&Matrix::identity(4), &qd), qd);
        assert_eq!(congruence(&j0(), &Form4::lorentz()), qd);
        assert_eq!(congruence(&a_matrix(), &Form4::lorentz()), Form4::wilker());
    }

    #[test]
    fn automorph_examples() {
        let qd = Form4::descartes();
        assert!(is_automorph(&Matrix::identity(4), &qd));
        let s1 = rat_matrix(&[[-1, 2, 2, 2], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        assert!(is_automorph(&s1, &qd));
        let d = Matrix::diagonal(&[int(2), int(1), int(1), int(1)]);
        assert!(!is_automorph(&d, &qd));
    }

    #[test]
    fn determinants() {
        assert_eq!(form_determinants(), (int(-1), int(-1), int(-64)));
        assert_eq!(Matrix::<Rat>::identity(4).det(), int(1));
        let qd = Form4::descartes().det();
        assert_eq!(&qd * &qd, int(1));
    }

    #[test]
    fn descartes_form_is_involution() {
        let q = Form4::descartes().matrix().clone();
        assert!((&q * &q).is_identity());
    }

    #[test]
    fn j0_is_symmetric_involution() {
        let j = j0();
        assert!(j.is_symmetric());
        assert!((&j * &j).is_identity());
    }

    #[test]
    fn z_intertwines_wilker_and_lorentz() {
        let z = Sqrt2Scaled::z();
        assert_eq!(&z.gram(&Form4::lorentz()), Form4::wilker().matrix());
        let zf = z.to_f64();
        let direct = Form4::lorentz().matrix().to_f64().congruence(&zf);
        assert!(direct.max_abs_diff(&Form4::wilker().matrix().to_f64()) < 1e-12);
    }

    #[test]
    fn duality_operator_is_involution() {
        let d = duality_operator();
        assert!((&d * &d).is_identity());
        assert!(is_automorph(&d, &Form4::descartes()));
    }
}
