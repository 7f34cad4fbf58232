//! Diffusion on ℤ from the non-real field `X⁺ = X⁻ = −λ`: the solution
//! `f(n, t) = e^{−2λt} I_n(2λt)` keeps unit mass and spreads out.

use hopf_exp::expmap::z_diffusion;
use hopf_exp::group::IntWindow;

fn main() -> hopf_exp::Result<()> {
    let w = IntWindow::new(64)?;
    let lambda = 1.0;
    println!("t     f(0)     f(1)     f(2)     f(4)     mass");
    for k in 0..=10 {
        let t = 0.5 * k as f64;
        let f = z_diffusion(lambda, t, w)?;
        let mass: f64 = f.coeffs().iter().map(|z| z.re).sum();
        println!(
            "{t:<5} {:.5}  {:.5}  {:.5}  {:.5}  {mass:.12}",
            f.at_integer(0).re,
            f.at_integer(1).re,
            f.at_integer(2).re,
            f.at_integer(4).re
        );
    }
    Ok(())
}
