//! Left-covariant first-order calculi on ℂ[G] and their invariant vector
//! fields.
//!
//! A calculus is fixed by a subset 𝒞 ⊆ G∖{e}. The invariant forms `e^a`
//! (a ∈ 𝒞) satisfy `e^a·f = R_a(f)·e^a` and `df = Σ_a (R_a f − f)·e^a`. A
//! vector field `X = Σ_a X^a e_a` pairs with them as `X(e^a) = X^a`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{s3, s3_index, FiniteGroup, IntWindow};
use crate::hopf::{haar_finite, Domain, DualVector, FunctionElement};

/// Tolerance for identities that hold exactly in exact arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// A calculus on ℂ[G] given by the subset 𝒞.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCalculus {
    group: Arc<FiniteGroup>,
    cset: Vec<usize>,
    star_closed: bool,
}

impl GroupCalculus {
    pub fn new(group: Arc<FiniteGroup>, cset: Vec<usize>) -> Result<Self> {
        for (k, &a) in cset.iter().enumerate() {
            group.label(a)?;
            if a == group.identity() {
                return Err(Error::input(
                    "the identity cannot belong to the calculus set",
                ));
            }
            if cset[..k].contains(&a) {
                return Err(Error::input(format!(
                    "repeated element {}",
                    group.labels()[a]
                )));
            }
        }
        let star_closed = cset.iter().all(|&a| cset.contains(&group.inv_unchecked(a)));
        Ok(GroupCalculus {
            group,
            cset,
            star_closed,
        })
    }

    pub fn from_labels(group: Arc<FiniteGroup>, labels: &[&str]) -> Result<Self> {
        let cset = labels
            .iter()
            .map(|l| {
                group
                    .index_of(l)
                    .ok_or_else(|| Error::input(format!("unknown element {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, cset)
    }

    /// S₃ with 𝒞 = {u, v, w}, the three transpositions.
    pub fn s3_transpositions() -> Self {
        Self::new(Arc::new(s3()), vec![s3_index::U, s3_index::V, s3_index::W])
            .expect("transpositions form a valid calculus set")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn domain(&self) -> Domain {
        Domain::Finite(self.group.clone())
    }

    pub fn cset(&self) -> &[usize] {
        &self.cset
    }

    pub fn is_star_closed(&self) -> bool {
        self.star_closed
    }

    /// Coefficients of ω(δ_g) on the basis `e^a`, in the order of 𝒞:
    /// all ones at the identity, `−1` on `e^a` when `g⁻¹ = a`, else zero.
    pub fn omega_delta(&self, g: usize) -> Result<Vec<Complex64>> {
        self.group.label(g)?;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        if g == self.group.identity() {
            return Ok(vec![one; self.cset.len()]);
        }
        let ginv = self.group.inv_unchecked(g);
        Ok(self
            .cset
            .iter()
            .map(|&a| if a == ginv { -one } else { zero })
            .collect())
    }
}

/// Config form of a calculus: `{"group": "S3", "cset": ["u", "v", "w"]}`.
/// `group` is either the built-in name `S3` or a path to a table file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalculusConfig {
    pub group: String,
    pub cset: Vec<String>,
}

impl CalculusConfig {
    pub fn resolve(&self) -> Result<GroupCalculus> {
        let group = if self.group.eq_ignore_ascii_case("s3") {
            s3()
        } else {
            FiniteGroup::load_table(&self.group)?
        };
        let labels: Vec<&str> = self.cset.iter().map(String::as_str).collect();
        GroupCalculus::from_labels(Arc::new(group), &labels)
    }
}

/// A left-invariant vector field `X = Σ_a X^a e_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantVectorField {
    calculus: GroupCalculus,
    coeffs: Vec<Complex64>,
}

impl InvariantVectorField {
    pub fn new(calculus: GroupCalculus, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != calculus.cset.len() {
            return Err(Error::input(format!(
                "expected {} field coefficients, got {}",
                calculus.cset.len(),
                coeffs.len()
            )));
        }
        Ok(InvariantVectorField { calculus, coeffs })
    }

    /// `X = i(p·e_u + q·e_v + r·e_w)` on S₃ with 𝒞 = {u, v, w}.
    pub fn s3_imaginary(p: f64, q: f64, r: f64) -> Self {
        let i = Complex64::i();
        Self::new(
            GroupCalculus::s3_transpositions(),
            vec![i * p, i * q, i * r],
        )
        .expect("three coefficients")
    }

    pub fn calculus(&self) -> &GroupCalculus {
        &self.calculus
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scale(&self, c: Complex64) -> Self {
        InvariantVectorField {
            calculus: self.calculus.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// The composite `X∘ω` as an element of the dual: `Σ_a X^a` at the
    /// identity, `−X^a` at `a⁻¹`, zero elsewhere.
    pub fn x_circ_omega(&self) -> DualVector {
        let g = &self.calculus.group;
        let mut v = vec![Complex64::new(0.0, 0.0); g.order()];
        v[g.identity()] = self.coeffs.iter().sum();
        for (&a, &x) in self.calculus.cset.iter().zip(&self.coeffs) {
            v[g.inv_unchecked(a)] -= x;
        }
        DualVector::new(self.calculus.domain(), v).expect("length matches group order")
    }

    /// Reality test `conj(X^a) = −X^{a⁻¹}` for every `a ∈ 𝒞`.
    pub fn is_real(&self) -> Result<bool> {
        if !self.calculus.star_closed {
            return Err(Error::unsupported(
                "reality needs a calculus set closed under inversion",
            ));
        }
        let g = &self.calculus.group;
        let cset = &self.calculus.cset;
        Ok(cset.iter().enumerate().all(|(k, &a)| {
            let j = cset
                .iter()
                .position(|&b| b == g.inv_unchecked(a))
                .expect("star-closed");
            (self.coeffs[k].conj() + self.coeffs[j]).norm() <= EXACT_TOL
        }))
    }

    /// `X(df)` for a function `f`. Moving each `e^a` to the left of its
    /// coefficient turns `df = Σ_a (R_a f − f)e^a` into
    /// `Σ_a e^a (f − R_{a⁻¹} f)`, so `X(df) = Σ_a X^a (f − R_{a⁻¹} f)`.
    pub fn apply_to_differential(&self, f: &FunctionElement) -> Result<FunctionElement> {
        if *f.domain() != self.calculus.domain() {
            return Err(Error::input("function lives on a different group"));
        }
        let g = &self.calculus.group;
        let mut out = FunctionElement::constant(f.domain().clone(), Complex64::new(0.0, 0.0));
        for (&a, &x) in self.calculus.cset.iter().zip(&self.coeffs) {
            let shifted = f.right_translate(g.inv_unchecked(a))?;
            let diff = f.add(&shifted.scale(Complex64::new(-1.0, 0.0)))?;
            out = out.add(&diff.scale(x))?;
        }
        Ok(out)
    }

    /// Largest `|φ(X(dδ_g))|` over the δ-basis; zero for every invariant
    /// field since φ is a right Haar integral.
    pub fn divergence_check(&self) -> f64 {
        let d = self.calculus.domain();
        (0..self.calculus.group.order())
            .map(|g| {
                let delta = FunctionElement::delta(d.clone(), g).expect("in range");
                let xdf = self.apply_to_differential(&delta).expect("same domain");
                haar_finite(&xdf).expect("finite group").norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Vector field `X = X⁺e₊ + X⁻e₋` for the calculus 𝒞 = {+1, −1} on ℤ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntVectorField {
    pub plus: Complex64,
    pub minus: Complex64,
}

impl IntVectorField {
    pub fn new(plus: Complex64, minus: Complex64) -> Self {
        IntVectorField { plus, minus }
    }

    /// The real field `X⁺ = 1, X⁻ = −1`, with `|X⁺| = 1`.
    pub fn unit_real() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
    }

    /// The field `X⁺ = X⁻ = −λ` whose flow is the heat equation on ℤ.
    pub fn diffusion(lambda: f64) -> Self {
        let x = Complex64::new(-lambda, 0.0);
        Self::new(x, x)
    }

    /// `conj(X⁺) = −X⁻`.
    pub fn is_real(&self) -> bool {
        (self.plus.conj() + self.minus).norm() <= EXACT_TOL
    }

    /// `X∘ω` on the window: `X⁺+X⁻` at 0, `−X⁻` at 1, `−X⁺` at −1.
    pub fn x_circ_omega(&self, window: IntWindow) -> DualVector {
        let mut v = DualVector::zeros(Domain::Integers(window)).into_coeffs();
        let at = |n| window.position(n).expect("radius ≥ 1");
        v[at(0)] = self.plus + self.minus;
        v[at(1)] = -self.minus;
        v[at(-1)] = -self.plus;
        DualVector::new(Domain::Integers(window), v).expect("window length")
    }

    /// `X(df)(n) = X⁺(f(n) − f(n−1)) + X⁻(f(n) − f(n+1))`, with `f`
    /// taken as zero outside the window.
    pub fn apply_to_differential(&self, f: &FunctionElement) -> Result<FunctionElement> {
        let Domain::Integers(w) = f.domain() else {
            return Err(Error::input("expected a function on a ℤ window"));
        };
        let get = |n: i64| {
            w.position(n)
                .map(|p| f.values()[p])
                .unwrap_or(Complex64::new(0.0, 0.0))
        };
        let values = w
            .values()
            .map(|n| self.plus * (get(n) - get(n - 1)) + self.minus * (get(n) - get(n + 1)))
            .collect();
        FunctionElement::new(f.domain().clone(), values)
    }
}
