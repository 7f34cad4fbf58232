//! The Padé scaling-and-squaring exponential on its own: a rotation
//! generator and a nilpotent matrix, both with exact answers.

use hopf_exp::expm::expm;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn main() -> hopf_exp::Result<()> {
    let theta = 2.5;
    let rot = DMatrix::from_row_slice(2, 2, &[0.0, -theta, theta, 0.0]).map(Complex64::from);
    let e = expm(&rot)?;
    println!(
        "exp of rotation generator (real part):{:.6}",
        e.map(|z| z.re)
    );
    println!(
        "largest imaginary part {:.1e}",
        e.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    );
    println!("cos, sin = {:.6}, {:.6}", theta.cos(), theta.sin());

    let nil = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
        .map(Complex64::from);
    println!(
        "exp of a nilpotent shift (real part):{:.6}",
        expm(&nil)?.map(|z| z.re)
    );
    Ok(())
}
