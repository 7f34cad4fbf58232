//! The exponential walk on ℤ with `X⁺ = 1`, `X⁻ = −1`: the weights are
//! `J_n(2t)²`, and `w₀` vanishes at the first zero of `J₀(2t)`.

use hopf_exp::expmap::{z_closed_form, z_state_weights};
use hopf_exp::group::IntWindow;
use num_complex::Complex64;

fn main() -> hopf_exp::Result<()> {
    let w = IntWindow::new(64)?;
    let (xp, xm) = (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));

    println!("t     w_-2     w_-1     w_0      w_1      w_2      total");
    for k in 0..=10 {
        let t = 0.5 * k as f64;
        let d = z_state_weights(xp, xm, t, w)?;
        let shown: Vec<String> = (-2..=2)
            .map(|n| format!("{:.5}", d.weight_at_integer(n)))
            .collect();
        println!("{t:<5} {}  {:.12}", shown.join("  "), d.total());
    }

    // the amplitude at 0 is J₀(2t); bisect for its first zero
    let amp = |t: f64| z_closed_form(xp, xm, -t, w).map(|v| v.at_integer(0).re);
    let (mut lo, mut hi) = (1.0, 1.4);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if amp(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    println!("\nfirst zero of w_0 at t = {:.10}", 0.5 * (lo + hi));
    Ok(())
}
