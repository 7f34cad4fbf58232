//! A group read from a plain-text table: ℤ/6 with 𝒞 = {1, 5} and the real
//! field `X¹ = X⁵ = i`. The weights form a probability density.

use std::sync::Arc;

use hopf_exp::calculus::{GroupCalculus, InvariantVectorField};
use hopf_exp::expmap::{state_density, TransferMatrix};
use hopf_exp::group::FiniteGroup;
use num_complex::Complex64;

fn main() -> hopf_exp::Result<()> {
    let mut text = String::from("# cyclic group of order 6\n0 1 2 3 4 5\n");
    for i in 0..6 {
        let row: Vec<String> = (0..6).map(|j| ((i + j) % 6).to_string()).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    let group = Arc::new(FiniteGroup::parse_table("Z6", &text)?);
    let calc = GroupCalculus::from_labels(group, &["1", "5"])?;
    let x = InvariantVectorField::new(calc, vec![Complex64::i(), Complex64::i()])?;

    println!("real field: {}", x.is_real()?);
    println!("divergence residual {:.1e}", x.divergence_check());
    println!(
        "skew residual {:.1e}",
        TransferMatrix::from_field(&x).skew_residual()
    );
    for t in [0.0, 0.5, 1.0, 2.0] {
        let d = state_density(&x, t)?;
        let w: Vec<String> = d.weights.iter().map(|w| format!("{w:.4}")).collect();
        println!("t = {t}: [{}] total {:.12}", w.join(", "), d.total());
    }
    Ok(())
}
