//! ℂ_q[SU₂]: evolving the generator `a` under a real field
//! `X = γe₊ − q·conj(γ)e₋`, checked against the dual power series; the
//! state value `ψ_t(1)` stays at `q²/(1+q²)`.

use hopf_exp::qsu2::{
    evolve_generator, evolve_series, real_delta, state_value, Generator, NuCombination, QSU2Element,
};
use num_complex::Complex64;

fn main() -> hopf_exp::Result<()> {
    let q = 0.9;
    let gamma = Complex64::new(0.3, -0.9);
    let delta = real_delta(gamma, q);
    let x = NuCombination::field(q, gamma, delta);
    let a = QSU2Element::generator(q, Generator::A)?;
    let one = QSU2Element::one(q)?;

    for t in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let m = evolve_generator(Generator::A, gamma, delta, t, q)?;
        let series = evolve_series(&a, &x, t, 40)?;
        let psi = state_value(&m, &one)?;
        println!("t = {t}: m = {m}");
        println!(
            "    series gap {:.1e}, psi(1) = {:.12}",
            m.max_abs_diff(&series),
            psi.re
        );
    }
    println!("q^2/(1+q^2) = {:.12}", q * q / (1.0 + q * q));
    Ok(())
}
