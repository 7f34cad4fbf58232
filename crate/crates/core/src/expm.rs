//! Dense complex matrix exponential by scaling and squaring around a
//! degree-13 Padé approximant (Higham 2005).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const THETA_13: f64 = 5.371920351148152;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn norm_1(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` for a square complex matrix.
pub fn expm(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if !a.is_square() {
        return Err(Error::input(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::numeric(
            "non-finite entry in matrix exponential input",
        ));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(a.clone());
    }

    let nrm = norm_1(a);
    let s = if nrm > THETA_13 {
        (nrm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(0.5f64.powi(s));

    let b = |k: usize| Complex64::new(PADE_13[k], 0.0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| Error::numeric("singular Padé denominator"))?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::numeric("matrix exponential overflowed"));
    }
    Ok(r)
}
