//! Sweedler–Taft: `m(s)` from `m(0) = t + x` and its state functional
//! `h ↦ φ(m h m*)` with `φ(tx) = λ`.

use hopf_exp::sweedler::{
    evolve, exp_closed, exp_series, state_functional, vector_field_on_d, Basis, SweedlerElement,
};
use num_complex::Complex64;

fn main() {
    let (a, b) = (Complex64::new(0.3, 0.7), Complex64::new(-0.4, 0.25));
    let lambda = Complex64::i();
    let m0 = SweedlerElement::basis(Basis::T) + SweedlerElement::basis(Basis::X);

    let s = 0.9;
    println!(
        "closed vs series {:.1e}",
        exp_closed(a, b, s).max_abs_diff(&exp_series(a, b, s, 30))
    );

    for s in [0.0, 0.5, 1.0, 2.0] {
        let m = evolve(&m0, a, b, s);
        let h = 1e-5;
        let deriv = (evolve(&m0, a, b, s + h) + evolve(&m0, a, b, s - h).scale((-1.0).into()))
            .scale((0.5 / h).into());
        let residual = (deriv + vector_field_on_d(&m, a, b)).max_abs_diff(&SweedlerElement::zero());
        let psi = state_functional(&m, lambda);
        println!("s = {s}: flow residual {residual:.1e}");
        for basis in Basis::ALL {
            println!(
                "    m[{:>2}] = {:.6}    psi[delta_{:<2}] = {:.6}",
                basis.label(),
                m.coeff(basis),
                basis.label(),
                psi.coeff(basis)
            );
        }
    }
}
