//! Small dense determinants: fraction-free elimination for exact rationals and
//! partial-pivot LU for floats.

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::qmath::Rational;

/// Bareiss elimination. Every intermediate value is a minor of the input, so no
/// fractions grow beyond what the entries already carry.
pub fn det_bareiss(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::from_integer(1.into());
    }
    let mut sign = 1i32;
    let mut prev = Rational::from_integer(1.into());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn det_lu(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    DMatrix::from_fn(n, n, |i, j| m[i][j]).lu().determinant()
}
