//! Scalar special functions: the ₀F₁ series and a few removable
//! singularities evaluated by short Taylor branches.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this argument magnitude the removable singularities switch to
/// their Taylor expansions.
pub const SERIES_SWITCH: f64 = 1e-4;

const HYP_RTOL: f64 = 1e-15;
const HYP_MAX_TERMS: usize = 100_000;

/// `₀F₁(;a;x) = Σ_k x^k / ((a)_k k!)`.
///
/// Summed until the running term drops below `1e-15` of the partial sum
/// and the term ratio has started shrinking.
pub fn hyp0f1(a: f64, x: Complex64) -> Result<Complex64> {
    if !a.is_finite() || (a <= 0.0 && a.fract() == 0.0) {
        return Err(Error::input(format!("0F1 parameter {a} is not admissible")));
    }
    if !x.re.is_finite() || !x.im.is_finite() {
        return Err(Error::numeric("non-finite 0F1 argument"));
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..HYP_MAX_TERMS {
        let kf = k as f64;
        term *= x / ((a + kf) * (kf + 1.0));
        sum += term;
        // ratio |x|/((a+k)(k+1)) < 1 means the tail is bounded by a geometric series
        let ratio = x.norm() / ((a + kf + 1.0) * (kf + 2.0)).abs();
        if ratio < 0.5 && term.norm() <= HYP_RTOL * sum.norm() {
            return Ok(sum);
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::numeric(format!("0F1(;{a};{x}) did not converge")))
}

/// `sin(z)/z`, entire.
pub fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_SWITCH {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0
    } else {
        z.sin() / z
    }
}

/// `sinh(z)/z`, entire.
pub fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_SWITCH {
        let z2 = z * z;
        1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0
    } else {
        z.sinh() / z
    }
}

/// `(e^{as} − 1)/a`, with the value `s` at `a = 0`.
pub fn expm1_over(a: Complex64, s: f64) -> Complex64 {
    let z = a * s;
    if z.norm() < SERIES_SWITCH {
        s * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0)
    } else {
        (z.exp() - 1.0) / a
    }
}
