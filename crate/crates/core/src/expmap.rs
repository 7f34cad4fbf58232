//! Exponentials of `X∘ω` in the dual algebra, by three independent routes:
//! the transfer matrix, the convolution power series, and closed forms
//! (S₃ and ℤ). States are read off from `exp(−t·X∘ω)`.
//!
//! Sign conventions: `α_t = exp(t·X∘ω)` solves `α̇ = Tα`, while the
//! evolving element is `m(t) = m(0)₍₁₎ exp(−t·X∘ω)(m(0)₍₂₎)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::calculus::{IntVectorField, InvariantVectorField};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::group::{s3, IntWindow};
use crate::hopf::{Domain, DualVector, FunctionElement};
use crate::special::{hyp0f1, sinc};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Matrix of convolution by a fixed dual element `v` on the right:
/// `T_ik = v(δ_{g_k⁻¹ g_i})`, so `(α∗v) = Tα`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    domain: Domain,
    entries: DMatrix<Complex64>,
}

impl TransferMatrix {
    /// On a ℤ window the entries whose offset leaves the window are zero,
    /// which truncates the banded operator.
    pub fn from_dual(v: &DualVector) -> Self {
        let domain = v.domain().clone();
        let n = domain.len();
        let entries = match &domain {
            Domain::Finite(g) => DMatrix::from_fn(n, n, |i, k| {
                v.coeffs()[g.mul_unchecked(g.inv_unchecked(k), i)]
            }),
            Domain::Integers(w) => DMatrix::from_fn(n, n, |i, k| {
                let off = w.value_at(i) - w.value_at(k);
                w.position(off).map_or(ZERO, |p| v.coeffs()[p])
            }),
        };
        TransferMatrix { domain, entries }
    }

    pub fn from_field(x: &InvariantVectorField) -> Self {
        Self::from_dual(&x.x_circ_omega())
    }

    /// The truncation of `−X⁺N₋₁ + (X⁺+X⁻)N₀ − X⁻N₁` to the window.
    pub fn banded(x: &IntVectorField, window: IntWindow) -> Self {
        Self::from_dual(&x.x_circ_omega(window))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `‖T† + T‖_max`.
    pub fn skew_residual(&self) -> f64 {
        let s = self.entries.adjoint() + &self.entries;
        s.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_skew_adjoint(&self, tol: f64) -> bool {
        self.skew_residual() <= tol
    }

    /// `exp(tT)` as a dense matrix.
    pub fn exp(&self, t: f64) -> Result<DMatrix<Complex64>> {
        if !t.is_finite() {
            return Err(Error::numeric("non-finite time"));
        }
        expm(&(&self.entries * Complex64::new(t, 0.0)))
    }

    /// `exp(tT)·v`.
    pub fn apply_exp(&self, t: f64, v: &DualVector) -> Result<DualVector> {
        if *v.domain() != self.domain {
            return Err(Error::input(
                "vector and transfer matrix live on different domains",
            ));
        }
        let e = self.exp(t)?;
        let out = e * DVector::from_column_slice(v.coeffs());
        DualVector::new(self.domain.clone(), out.iter().copied().collect())
    }
}

/// `exp(tT)·v`.
pub fn matexp_apply(t_mat: &TransferMatrix, t: f64, v: &DualVector) -> Result<DualVector> {
    t_mat.apply_exp(t, v)
}

/// The closed form of `exp(t·X∘ω)` on S₃ for `X = i(p e_u + q e_v + r e_w)`,
/// with `γ = √(p²+q²+r²−pq−pr−qr)` evaluated at `(tp, tq, tr)`. Valid for
/// complex `p, q, r`; the result does not depend on the branch of `γ`.
pub fn s3_closed_form(p: Complex64, q: Complex64, r: Complex64, t: f64) -> DualVector {
    let (p, q, r) = (p * t, q * t, r * t);
    let s = p + q + r;
    let gamma = (p * p + q * q + r * r - p * q - p * r - q * r).sqrt();
    let sg = sinc(gamma);
    let i = Complex64::i();
    let (cg, cs, ss) = (gamma.cos(), s.cos(), s.sin());
    let pre = (i * s).exp() / 3.0;
    let coeffs = [
        2.0 * cg + cs,
        cs - cg,
        cs - cg,
        -i * (sg * (2.0 * p - q - r) + ss),
        -i * (sg * (2.0 * q - p - r) + ss),
        -i * (sg * (2.0 * r - p - q) + ss),
    ]
    .iter()
    .map(|z| pre * z)
    .collect();
    DualVector::new(Domain::finite(s3()), coeffs).expect("six entries")
}

/// Output of the dual-algebra power series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExp {
    pub value: DualVector,
    /// `‖t^{n−1} v^{∗(n−1)}/(n−1)!‖₂` for the last term kept.
    pub last_term_norm: f64,
}

/// `Σ_{k<nterms} t^k v^{∗k}/k!` under convolution.
pub fn series_exp_dual(v: &DualVector, t: f64, nterms: usize) -> Result<SeriesExp> {
    let mut term = DualVector::counit(v.domain().clone());
    let mut sum = term.clone();
    let mut last = term.norm_l2();
    for k in 1..nterms {
        term = term.convolve(v)?.scale(Complex64::new(t / k as f64, 0.0));
        sum = sum.add(&term)?;
        last = term.norm_l2();
    }
    if sum
        .coeffs()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::numeric("power series overflowed"));
    }
    Ok(SeriesExp {
        value: sum,
        last_term_norm: last,
    })
}

/// The power series at `t/2^s`, squared `s` times under convolution, with
/// `s` chosen so that `‖(t/2^s)v‖₁ ≤ 1/2`. The plain series loses all
/// accuracy to cancellation once `‖tv‖₁` reaches the tens.
pub fn series_exp_dual_scaled(v: &DualVector, t: f64, nterms: usize) -> Result<SeriesExp> {
    let nrm = (t * v.norm_l1()).abs();
    let s = if nrm > 0.5 {
        (nrm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let mut out = series_exp_dual(v, t * 0.5f64.powi(s), nterms)?;
    for _ in 0..s {
        out.value = out.value.convolve(&out.value)?;
    }
    Ok(out)
}

/// A probability-style density over the domain; `weights[k]` belongs to
/// the element at position `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDensity {
    pub domain: Domain,
    pub weights: Vec<f64>,
    pub time: f64,
}

impl StateDensity {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `ψ_t(f) = Σ_h f(h)·w_h`.
    pub fn psi(&self, f: &FunctionElement) -> Result<Complex64> {
        if *f.domain() != self.domain {
            return Err(Error::input("function lives on a different domain"));
        }
        Ok(f.values()
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .sum())
    }

    pub fn weight_at_integer(&self, n: i64) -> f64 {
        match &self.domain {
            Domain::Integers(w) => w.position(n).map_or(0.0, |p| self.weights[p]),
            Domain::Finite(_) => 0.0,
        }
    }
}

fn density_from_exp(e: &DualVector, t: f64) -> StateDensity {
    let d = e.domain().clone();
    let weights = (0..d.len())
        .map(|h| e.coeffs()[d.inverse_position(h)].norm_sqr())
        .collect();
    StateDensity {
        domain: d,
        weights,
        time: t,
    }
}

/// State reached from `m(0) = δ_e`: the weight at `h` is
/// `|exp(−t·X∘ω)(δ_{h⁻¹})|²`. Non-real fields are accepted with a warning;
/// their weights need not sum to one.
pub fn state_density(x: &InvariantVectorField, t: f64) -> Result<StateDensity> {
    if !matches!(x.is_real(), Ok(true)) {
        log::warn!("state density requested for a vector field that is not real");
    }
    let tm = TransferMatrix::from_field(x);
    let e = tm.apply_exp(-t, &DualVector::counit(tm.domain().clone()))?;
    Ok(density_from_exp(&e, t))
}

/// `m(t) = m(0)₍₁₎ exp(−t·X∘ω)(m(0)₍₂₎)`, i.e.
/// `m(t)(y) = Σ_g m(0)(g) E(δ_{y⁻¹g})` with `E = exp(−t·X∘ω)`.
pub fn evolve_function(
    x: &InvariantVectorField,
    t: f64,
    m0: &FunctionElement,
) -> Result<FunctionElement> {
    let d = x.calculus().domain();
    if *m0.domain() != d {
        return Err(Error::input("initial element lives on a different group"));
    }
    let g = x.calculus().group();
    let tm = TransferMatrix::from_field(x);
    let e = tm.apply_exp(-t, &DualVector::counit(d.clone()))?;
    let n = g.order();
    let values = (0..n)
        .map(|y| {
            let yinv = g.inv_unchecked(y);
            (0..n)
                .map(|h| m0.values()[h] * e.coeffs()[g.mul_unchecked(yinv, h)])
                .sum()
        })
        .collect();
    FunctionElement::new(d, values)
}

/// `c^n/n!` without forming either factor separately.
fn power_over_factorial(c: Complex64, n: usize) -> Complex64 {
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * c / k as f64)
}

/// `exp(t·X∘ω)` on ℤ from the ₀F₁ closed form, sampled on the window:
/// `e^{t(X⁺+X⁻)} ₀F₁(;1;t²X⁺X⁻)` at 0, and
/// `e^{t(X⁺+X⁻)} ₀F₁(;n+1;t²X⁺X⁻)(−tX⁻)ⁿ/n!` at `n`,
/// `e^{t(X⁺+X⁻)} ₀F₁(;n+1;t²X⁺X⁻)(−tX⁺)ⁿ/n!` at `−n`.
pub fn z_closed_form(
    xp: Complex64,
    xm: Complex64,
    t: f64,
    window: IntWindow,
) -> Result<DualVector> {
    let pre = (t * (xp + xm)).exp();
    let arg = t * t * xp * xm;
    let mut coeffs = vec![ZERO; window.size()];
    let center = window.position(0).expect("window contains 0");
    coeffs[center] = pre * hyp0f1(1.0, arg)?;
    for n in 1..=window.radius() {
        let f = pre * hyp0f1(n as f64 + 1.0, arg)?;
        coeffs[center + n] = f * power_over_factorial(-t * xm, n);
        coeffs[center - n] = f * power_over_factorial(-t * xp, n);
    }
    if coeffs
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::numeric("closed form overflowed"));
    }
    DualVector::new(Domain::Integers(window), coeffs)
}

/// State on ℤ reached from `δ₀`: weight `|exp(−t·X∘ω)(δ_{−n})|²` at `n`.
pub fn z_state_weights(
    xp: Complex64,
    xm: Complex64,
    t: f64,
    window: IntWindow,
) -> Result<StateDensity> {
    if !IntVectorField::new(xp, xm).is_real() {
        return Err(Error::unsupported(
            "state weights need a real field; use the diffusion solution instead",
        ));
    }
    let e = z_closed_form(xp, xm, -t, window)?;
    Ok(density_from_exp(&e, t))
}

/// `f = exp(t·X∘ω)z₀` for `X⁺ = X⁻ = −λ`, the solution of
/// `ḟ(n) = −λ(2f(n) − f(n−1) − f(n+1))` from `f = z₀`.
pub fn z_diffusion(lambda: f64, t: f64, window: IntWindow) -> Result<DualVector> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::input("diffusion rate must be positive"));
    }
    let x = Complex64::new(-lambda, 0.0);
    z_closed_form(x, x, t, window)
}

/// `m(t)` on ℤ from `m(0) = δ₀`: `m(t)(n) = exp(−t·X∘ω)(δ_{−n})`.
pub fn z_evolve_delta(x: &IntVectorField, t: f64, window: IntWindow) -> Result<FunctionElement> {
    let e = z_closed_form(x.plus, x.minus, -t, window)?;
    let values = window.values().map(|n| e.at_integer(-n)).collect();
    FunctionElement::new(Domain::Integers(window), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::GroupCalculus;
    use crate::group::s3_index::*;
    use nalgebra::linalg::SymmetricEigen;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn s3_eps() -> DualVector {
        DualVector::counit(Domain::finite(s3()))
    }

    /// exp(tT) via the eigendecomposition of the Hermitian matrix iT.
    fn eig_exp(t_mat: &TransferMatrix, t: f64) -> DMatrix<Complex64> {
        let h = t_mat.entries() * Complex64::i();
        let eig = SymmetricEigen::new(h);
        let phases = eig.eigenvalues.map(|l| (Complex64::new(0.0, -t * l)).exp());
        &eig.eigenvectors * DMatrix::from_diagonal(&phases) * eig.eigenvectors.adjoint()
    }

    #[test]
    fn transfer_matrix_pattern() {
        let (xu, xv, xw) = (c(1.0, 0.0), c(10.0, 0.0), c(100.0, 0.0));
        let x = InvariantVectorField::new(GroupCalculus::s3_transpositions(), vec![xu, xv, xw])
            .unwrap();
        let t = TransferMatrix::from_field(&x);
        let diag = xu + xv + xw;
        // rows/cols ordered e, (123), (132), u, v, w
        let want = [
            [diag, ZERO, ZERO, -xu, -xv, -xw],
            [ZERO, diag, ZERO, -xv, -xw, -xu],
            [ZERO, ZERO, diag, -xw, -xu, -xv],
            [-xu, -xv, -xw, diag, ZERO, ZERO],
            [-xv, -xw, -xu, ZERO, diag, ZERO],
            [-xw, -xu, -xv, ZERO, ZERO, diag],
        ];
        for i in 0..6 {
            for k in 0..6 {
                assert_eq!(t.entries()[(i, k)], want[i][k], "entry ({i},{k})");
            }
        }
        let zero =
            InvariantVectorField::new(GroupCalculus::s3_transpositions(), vec![ZERO; 3]).unwrap();
        assert!(TransferMatrix::from_field(&zero)
            .entries()
            .iter()
            .all(|z| *z == ZERO));
    }

    #[test]
    fn transfer_is_convolution() {
        let x = InvariantVectorField::new(
            GroupCalculus::new(std::sync::Arc::new(s3()), vec![U, C123]).unwrap(),
            vec![c(0.3, 1.0), c(-1.0, 0.2)],
        )
        .unwrap();
        let v = x.x_circ_omega();
        let tm = TransferMatrix::from_field(&x);
        for g in 0..6 {
            let a = DualVector::group_like(v.domain().clone(), g).unwrap();
            let conv = a.convolve(&v).unwrap();
            let col: Vec<_> = tm.entries().column(g).iter().copied().collect();
            assert_eq!(conv.coeffs(), &col[..]);
        }
    }

    #[test]
    fn skew_adjoint_for_real_fields() {
        let x = InvariantVectorField::s3_imaginary(0.4, -1.3, 2.2);
        assert!(TransferMatrix::from_field(&x).skew_residual() < 1e-14);
        let tz = TransferMatrix::banded(&IntVectorField::unit_real(), IntWindow::new(5).unwrap());
        assert!(tz.skew_residual() < 1e-14);
    }

    #[test]
    fn matexp_basics() {
        let x = InvariantVectorField::s3_imaginary(1.0, 0.0, 0.0);
        let tm = TransferMatrix::from_field(&x);
        let eps = s3_eps();
        assert!(tm.apply_exp(0.0, &eps).unwrap().max_abs_diff(&eps) == 0.0);

        let got = tm.apply_exp(1.0, &eps).unwrap();
        let ph = Complex64::i().exp();
        let want = [
            ph * 1f64.cos(),
            ZERO,
            ZERO,
            ph * c(0.0, -(1f64.sin())),
            ZERO,
            ZERO,
        ];
        for k in 0..6 {
            assert!((got.coeffs()[k] - want[k]).norm() < 1e-13);
        }
    }

    #[test]
    fn matexp_agrees_with_eigen_oracle() {
        let x = InvariantVectorField::s3_imaginary(0.7, -2.1, 1.4);
        let tm = TransferMatrix::from_field(&x);
        for &t in &[0.3, 1.0, 4.0, 7.0] {
            let a = tm.exp(t).unwrap();
            let b = eig_exp(&tm, t);
            let d = a
                .iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(d < 1e-12, "t = {t}: {d}");
        }
        let tz = TransferMatrix::banded(
            &IntVectorField::new(c(0.6, 0.8), c(-0.6, 0.8)),
            IntWindow::new(20).unwrap(),
        );
        let d = tz
            .exp(3.0)
            .unwrap()
            .iter()
            .zip(eig_exp(&tz, 3.0).iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(d < 1e-12);
    }

    #[test]
    fn closed_form_special_values() {
        let cf = s3_closed_form(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), 0.0);
        assert!(cf.max_abs_diff(&s3_eps()) < 1e-15);

        let pi = std::f64::consts::PI;
        let cf = s3_closed_form(c(pi, 0.0), c(pi, 0.0), c(pi, 0.0), 1.0);
        let want = [-1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 0.0, 0.0, 0.0];
        for k in 0..6 {
            assert!((cf.coeffs()[k] - c(want[k], 0.0)).norm() < 1e-14);
        }
        let x = InvariantVectorField::s3_imaginary(pi, pi, pi);
        let m = TransferMatrix::from_field(&x)
            .apply_exp(1.0, &s3_eps())
            .unwrap();
        assert!(m.max_abs_diff(&cf) < 1e-12);
    }

    #[test]
    fn closed_form_generic_and_complex() {
        let (p, q, r) = (1.0, 1.0 / 3.0, 0.5);
        let cf = s3_closed_form(c(p, 0.0), c(q, 0.0), c(r, 0.0), 1.0);
        let x = InvariantVectorField::s3_imaginary(p, q, r);
        let m = TransferMatrix::from_field(&x)
            .apply_exp(1.0, &s3_eps())
            .unwrap();
        assert!(cf.max_abs_diff(&m) < 1e-12);
        assert!((cf.norm_l2() - 1.0).abs() < 1e-13);

        // complex parameters: X^u = i p etc. with p complex
        let (p, q, r) = (c(0.5, 0.2), c(-1.0, 0.4), c(0.1, -0.3));
        let i = Complex64::i();
        let x = InvariantVectorField::new(
            GroupCalculus::s3_transpositions(),
            vec![i * p, i * q, i * r],
        )
        .unwrap();
        let m = TransferMatrix::from_field(&x)
            .apply_exp(1.7, &s3_eps())
            .unwrap();
        assert!(s3_closed_form(p, q, r, 1.7).max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn series_matches_matrix() {
        let x = InvariantVectorField::s3_imaginary(1.0, 0.0, 0.0);
        let v = x.x_circ_omega();
        let s = series_exp_dual(&v, 1.0, 64).unwrap();
        let m = TransferMatrix::from_field(&x)
            .apply_exp(1.0, &s3_eps())
            .unwrap();
        assert!(s.value.max_abs_diff(&m) < 1e-12);
        assert!(s.last_term_norm < 1e-60);
        assert_eq!(series_exp_dual(&v, 0.0, 10).unwrap().value, s3_eps());
    }

    #[test]
    fn scaled_series_at_large_time() {
        let x = InvariantVectorField::s3_imaginary(3.0, -3.0, 2.9);
        let v = x.x_circ_omega();
        let m = TransferMatrix::from_field(&x)
            .apply_exp(7.0, &s3_eps())
            .unwrap();
        let s = series_exp_dual_scaled(&v, 7.0, 30).unwrap();
        assert!(s.value.max_abs_diff(&m) < 1e-11);
    }

    #[test]
    fn state_density_values() {
        let x = InvariantVectorField::s3_imaginary(1.0, 0.0, 0.0);
        let d0 = state_density(&x, 0.0).unwrap();
        assert_eq!(d0.weights, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        for &t in &[0.2, 1.0, 2.7] {
            let d = state_density(&x, t).unwrap();
            assert!((d.weights[E] - t.cos().powi(2)).abs() < 1e-13);
            assert!((d.weights[U] - t.sin().powi(2)).abs() < 1e-13);
            assert!(d.weights[V] + d.weights[W] + d.weights[C123] + d.weights[C132] < 1e-26);
            let one = FunctionElement::constant(d.domain.clone(), c(1.0, 0.0));
            assert!((d.psi(&one).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn evolution_solves_the_flow() {
        let x = InvariantVectorField::new(
            GroupCalculus::new(std::sync::Arc::new(s3()), vec![U, C123, C132]).unwrap(),
            vec![c(0.0, 0.7), c(0.3, -0.2), c(-0.3, -0.2)],
        )
        .unwrap();
        let d = x.calculus().domain();
        let m0 =
            FunctionElement::new(d, (0..6).map(|k| c(k as f64, 1.0 - k as f64)).collect()).unwrap();
        assert!(evolve_function(&x, 0.0, &m0)
            .unwrap()
            .values()
            .iter()
            .zip(m0.values())
            .all(|(a, b)| (a - b).norm() < 1e-14));
        let (t, h) = (0.8, 1e-5);
        let fwd = evolve_function(&x, t + h, &m0).unwrap();
        let bwd = evolve_function(&x, t - h, &m0).unwrap();
        let mid = evolve_function(&x, t, &m0).unwrap();
        let xdm = x.apply_to_differential(&mid).unwrap();
        for k in 0..6 {
            let deriv = (fwd.values()[k] - bwd.values()[k]) / (2.0 * h);
            assert!((deriv + xdm.values()[k]).norm() < 1e-7);
        }
    }

    #[test]
    fn z_closed_form_vs_truncation() {
        let w = IntWindow::new(64).unwrap();
        let eps = DualVector::counit(Domain::Integers(w));
        for (xp, xm) in [(c(1.0, 0.0), c(-1.0, 0.0)), (c(0.3, -1.2), c(0.8, 0.5))] {
            let tm = TransferMatrix::banded(&IntVectorField::new(xp, xm), w);
            for &t in &[0.0, 0.5, 2.0, 5.0] {
                let cf = z_closed_form(xp, xm, t, w).unwrap();
                let mx = tm.apply_exp(t, &eps).unwrap();
                let d = (-8..=8)
                    .map(|n| (cf.at_integer(n) - mx.at_integer(n)).norm())
                    .fold(0.0, f64::max);
                assert!(d < 1e-9 * cf.norm_l2().max(1.0), "t={t} d={d}");
            }
        }
        assert_eq!(
            z_closed_form(c(1.0, 0.0), c(2.0, 0.0), 0.0, w).unwrap(),
            eps
        );
    }

    #[test]
    fn z_weights() {
        let w = IntWindow::new(64).unwrap();
        let d = z_state_weights(c(1.0, 0.0), c(-1.0, 0.0), 1.0, w).unwrap();
        let j0 = 0.22389077914123567f64;
        assert!((d.weight_at_integer(0) - j0 * j0).abs() < 1e-15);
        for n in 1..10 {
            assert!((d.weight_at_integer(n) - d.weight_at_integer(-n)).abs() < 1e-15);
        }
        for &t in &[0.5, 2.5, 5.0] {
            let d = z_state_weights(c(0.6, 0.8), c(-0.6, 0.8), t, w).unwrap();
            assert!((1.0 - d.total()).abs() < 1e-10);
        }
        assert!(
            z_state_weights(c(0.0, 0.0), c(0.0, 0.0), 0.0, w)
                .unwrap()
                .weight_at_integer(0)
                == 1.0
        );
        assert!(matches!(
            z_state_weights(c(-1.0, 0.0), c(-1.0, 0.0), 1.0, w),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn z_diffusion_values() {
        let w = IntWindow::new(64).unwrap();
        let f = z_diffusion(1.0, 1.0, w).unwrap();
        assert!((f.at_integer(0).re - 2.2795853023360673 * (-2.0f64).exp()).abs() < 1e-14);
        assert!(f.coeffs().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
        for &t in &[0.0, 1.0, 5.0] {
            let mass: Complex64 = z_diffusion(1.0, t, w).unwrap().coeffs().iter().sum();
            assert!((mass - c(1.0, 0.0)).norm() < 1e-10);
        }
        // general λ is a time rescaling
        let a = z_diffusion(2.5, 0.4, w).unwrap();
        let b = z_diffusion(1.0, 1.0, w).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14);
        assert!(z_diffusion(0.0, 1.0, w).is_err());
    }

    #[test]
    fn z_flow_residual() {
        let w = IntWindow::new(40).unwrap();
        let x = IntVectorField::new(c(0.6, 0.8), c(-0.6, 0.8));
        let (t, h) = (1.3, 1e-5);
        let fwd = z_evolve_delta(&x, t + h, w).unwrap();
        let bwd = z_evolve_delta(&x, t - h, w).unwrap();
        let xdm = x
            .apply_to_differential(&z_evolve_delta(&x, t, w).unwrap())
            .unwrap();
        for k in 0..w.size() {
            let deriv = (fwd.values()[k] - bwd.values()[k]) / (2.0 * h);
            assert!((deriv + xdm.values()[k]).norm() < 1e-7);
        }
    }

    #[test]
    fn window_enlargement_is_stable() {
        let small =
            z_closed_form(c(0.5, 0.1), c(-0.2, 0.9), 2.0, IntWindow::new(16).unwrap()).unwrap();
        let large =
            z_closed_form(c(0.5, 0.1), c(-0.2, 0.9), 2.0, IntWindow::new(64).unwrap()).unwrap();
        for n in -16..=16 {
            assert_eq!(large.at_integer(n), small.at_integer(n));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn routes_agree(p in -3.0..3.0f64, q in -3.0..3.0f64, r in -3.0..3.0f64, t in 0.0..7.0f64) {
            let x = InvariantVectorField::s3_imaginary(p, q, r);
            let cf = s3_closed_form(c(p, 0.0), c(q, 0.0), c(r, 0.0), t);
            let m = TransferMatrix::from_field(&x).apply_exp(t, &s3_eps()).unwrap();
            let s = series_exp_dual_scaled(&x.x_circ_omega(), t, 30).unwrap().value;
            prop_assert!(cf.max_abs_diff(&m) < 1e-9);
            prop_assert!(cf.max_abs_diff(&s) < 1e-9);
            prop_assert!((m.norm_l2() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn one_parameter_group(p in -2.0..2.0f64, q in -2.0..2.0f64, r in -2.0..2.0f64,
                               s in 0.0..3.0f64, t in 0.0..3.0f64) {
            let v = InvariantVectorField::s3_imaginary(p, q, r).x_circ_omega();
            let lhs = series_exp_dual_scaled(&v, s + t, 30).unwrap().value;
            let rhs = series_exp_dual_scaled(&v, s, 30).unwrap().value
                .convolve(&series_exp_dual_scaled(&v, t, 30).unwrap().value).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }

        #[test]
        fn real_fields_give_unit_mass(p in -3.0..3.0f64, q in -3.0..3.0f64, r in -3.0..3.0f64, t in -7.0..7.0f64) {
            let d = state_density(&InvariantVectorField::s3_imaginary(p, q, r), t).unwrap();
            prop_assert!((d.total() - 1.0).abs() < 1e-10);
        }
    }
}
