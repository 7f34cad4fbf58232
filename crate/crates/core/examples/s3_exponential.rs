//! Exponential of `X = i(p e_u + q e_v + r e_w)` on S₃: three routes to
//! `exp(t·X∘ω)` and the state weights over time.

use hopf_exp::calculus::InvariantVectorField;
use hopf_exp::expmap::{s3_closed_form, series_exp_dual_scaled, state_density, TransferMatrix};
use hopf_exp::hopf::DualVector;

fn main() -> hopf_exp::Result<()> {
    let (p, q, r) = (1.0, 1.0 / 3.0, 0.5);
    let x = InvariantVectorField::s3_imaginary(p, q, r);
    let tm = TransferMatrix::from_field(&x);
    let eps = DualVector::counit(tm.domain().clone());

    let t = 2.0;
    let closed = s3_closed_form(p.into(), q.into(), r.into(), t);
    let matrix = tm.apply_exp(t, &eps)?;
    let series = series_exp_dual_scaled(&x.x_circ_omega(), t, 40)?.value;
    println!("closed vs matrix  {:.1e}", closed.max_abs_diff(&matrix));
    println!("closed vs series  {:.1e}", closed.max_abs_diff(&series));
    println!("L2 norm           {:.15}", closed.norm_l2());

    let labels = x.calculus().group().labels().join("\t");
    println!("\nt\t{labels}");
    for k in 0..=7 {
        let d = state_density(&x, k as f64)?;
        let w: Vec<String> = d.weights.iter().map(|w| format!("{w:.4}")).collect();
        println!("{k}\t{}", w.join("\t"));
    }
    Ok(())
}
