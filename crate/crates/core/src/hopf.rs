//! The function algebra ℂ[G] on the δ-basis and its dual, the group algebra
//! ℂG, as a convolution algebra.
//!
//! A [`DualVector`] stores `β(δ_g)` for every element `g` of its domain; the
//! group-like element `g ∈ ℂG` is the unit vector at `g`. On ℤ only a
//! symmetric window is stored and convolutions that would leave the window
//! are rejected.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, IntWindow};

/// The group a vector or function lives on.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Finite(Arc<FiniteGroup>),
    Integers(IntWindow),
}

impl Domain {
    pub fn finite(group: FiniteGroup) -> Self {
        Domain::Finite(Arc::new(group))
    }

    pub fn len(&self) -> usize {
        match self {
            Domain::Finite(g) => g.order(),
            Domain::Integers(w) => w.size(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self) -> String {
        match self {
            Domain::Finite(g) => g.name().to_owned(),
            Domain::Integers(_) => "Z".to_owned(),
        }
    }

    /// Label of the element stored at position `i`.
    pub fn label(&self, i: usize) -> String {
        match self {
            Domain::Finite(g) => g.labels()[i].clone(),
            Domain::Integers(w) => w.value_at(i).to_string(),
        }
    }

    pub fn identity_position(&self) -> usize {
        match self {
            Domain::Finite(g) => g.identity(),
            Domain::Integers(w) => w.radius(),
        }
    }

    /// Position of the inverse of the element stored at `i`.
    pub fn inverse_position(&self, i: usize) -> usize {
        match self {
            Domain::Finite(g) => g.inv_unchecked(i),
            Domain::Integers(w) => w.size() - 1 - i,
        }
    }

    pub fn as_finite(&self) -> Option<&Arc<FiniteGroup>> {
        match self {
            Domain::Finite(g) => Some(g),
            Domain::Integers(_) => None,
        }
    }
}

/// An element of the dual Hopf algebra, stored as its values on the δ-basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    domain: Domain,
    coeffs: Vec<Complex64>,
}

impl DualVector {
    pub fn new(domain: Domain, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != domain.len() {
            return Err(Error::input(format!(
                "expected {} coefficients, got {}",
                domain.len(),
                coeffs.len()
            )));
        }
        Ok(DualVector { domain, coeffs })
    }

    pub fn zeros(domain: Domain) -> Self {
        let coeffs = vec![Complex64::new(0.0, 0.0); domain.len()];
        DualVector { domain, coeffs }
    }

    /// The group-like element at position `i` (the unit vector there).
    pub fn group_like(domain: Domain, i: usize) -> Result<Self> {
        if i >= domain.len() {
            return Err(Error::input(format!("position {i} out of range")));
        }
        let mut v = Self::zeros(domain);
        v.coeffs[i] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// The counit ε, which is the unit of the dual algebra.
    pub fn counit(domain: Domain) -> Self {
        let e = domain.identity_position();
        Self::group_like(domain, e).expect("identity position is in range")
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at the integer `n`; zero outside the window. Only for ℤ.
    pub fn at_integer(&self, n: i64) -> Complex64 {
        match &self.domain {
            Domain::Integers(w) => w
                .position(n)
                .map(|p| self.coeffs[p])
                .unwrap_or(Complex64::new(0.0, 0.0)),
            Domain::Finite(_) => panic!("at_integer on a finite-group vector"),
        }
    }

    /// Convolution product `(α∗β)(δ_g) = Σ_{xy=g} α(δ_x)β(δ_y)`.
    pub fn convolve(&self, other: &DualVector) -> Result<DualVector> {
        self.same_domain(other)?;
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![zero; self.len()];
        match &self.domain {
            Domain::Finite(g) => {
                for (x, &ax) in self.coeffs.iter().enumerate() {
                    if ax == zero {
                        continue;
                    }
                    for (y, &by) in other.coeffs.iter().enumerate() {
                        out[g.mul_unchecked(x, y)] += ax * by;
                    }
                }
            }
            Domain::Integers(w) => {
                for (px, &ax) in self.coeffs.iter().enumerate() {
                    if ax == zero {
                        continue;
                    }
                    for (py, &by) in other.coeffs.iter().enumerate() {
                        if by == zero {
                            continue;
                        }
                        let n = w.value_at(px) + w.value_at(py);
                        let pos = w.position(n).ok_or_else(|| {
                            Error::input(format!(
                                "convolution support reaches {n}, outside window radius {}",
                                w.radius()
                            ))
                        })?;
                        out[pos] += ax * by;
                    }
                }
            }
        }
        Ok(DualVector {
            domain: self.domain.clone(),
            coeffs: out,
        })
    }

    /// Evaluates the pairing `⟨β, f⟩ = Σ_g β(δ_g) f(g)`.
    pub fn pair(&self, f: &FunctionElement) -> Result<Complex64> {
        if self.domain != f.domain {
            return Err(Error::input("pairing across different domains"));
        }
        Ok(self.coeffs.iter().zip(&f.values).map(|(a, b)| a * b).sum())
    }

    pub fn add(&self, other: &DualVector) -> Result<DualVector> {
        self.same_domain(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &DualVector) -> Result<DualVector> {
        self.same_domain(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, c: Complex64) -> DualVector {
        DualVector {
            domain: self.domain.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Largest componentwise distance; `∞` when the domains differ.
    pub fn max_abs_diff(&self, other: &DualVector) -> f64 {
        if self.domain != other.domain {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Re-embeds a ℤ vector into another window; entries that would fall
    /// outside a smaller window must be zero.
    pub fn reembed(&self, window: IntWindow) -> Result<DualVector> {
        let Domain::Integers(own) = &self.domain else {
            return Err(Error::input("re-embedding needs a vector on ℤ"));
        };
        let mut out = DualVector::zeros(Domain::Integers(window));
        for (p, &c) in self.coeffs.iter().enumerate() {
            let n = own.value_at(p);
            match window.position(n) {
                Some(q) => out.coeffs[q] = c,
                None if c == Complex64::new(0.0, 0.0) => {}
                None => {
                    return Err(Error::input(format!(
                        "nonzero entry at {n} does not fit radius {}",
                        window.radius()
                    )))
                }
            }
        }
        Ok(out)
    }

    fn same_domain(&self, other: &DualVector) -> Result<()> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::input(format!(
                "domain mismatch: {} vs {}",
                self.domain.name(),
                other.domain.name()
            )))
        }
    }

    fn zip_with(&self, other: &DualVector, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        DualVector {
            domain: self.domain.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// JSON form `{"group": name, "coeffs": [[re, im], …]}`.
    pub fn to_json(&self) -> Result<String> {
        let doc = DualVectorDoc {
            group: self.domain.name(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    /// Reads the JSON form back onto a known domain; the group name and
    /// length must match.
    pub fn from_json(domain: Domain, json: &str) -> Result<Self> {
        let doc: DualVectorDoc = serde_json::from_str(json)?;
        if doc.group != domain.name() {
            return Err(Error::input(format!(
                "vector is on {}, expected {}",
                doc.group,
                domain.name()
            )));
        }
        let coeffs = doc
            .coeffs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        Self::new(domain, coeffs)
    }

    /// CSV rows `label,re,im`, one per element.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["element", "re", "im"])?;
        for (i, c) in self.coeffs.iter().enumerate() {
            w.write_record([self.domain.label(i), c.re.to_string(), c.im.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DualVectorDoc {
    group: String,
    coeffs: Vec<[f64; 2]>,
}

/// A function on the group, `Σ_g f(g) δ_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionElement {
    domain: Domain,
    values: Vec<Complex64>,
}

impl FunctionElement {
    pub fn new(domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::input("one value per element required"));
        }
        Ok(FunctionElement { domain, values })
    }

    pub fn constant(domain: Domain, c: Complex64) -> Self {
        let values = vec![c; domain.len()];
        FunctionElement { domain, values }
    }

    pub fn delta(domain: Domain, i: usize) -> Result<Self> {
        if i >= domain.len() {
            return Err(Error::input(format!("position {i} out of range")));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); domain.len()];
        values[i] = Complex64::new(1.0, 0.0);
        Ok(FunctionElement { domain, values })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise product.
    pub fn mul(&self, other: &FunctionElement) -> Result<FunctionElement> {
        if self.domain != other.domain {
            return Err(Error::input("product across different domains"));
        }
        Ok(FunctionElement {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Pointwise complex conjugate.
    pub fn star(&self) -> FunctionElement {
        FunctionElement {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Right translation `R_a f (g) = f(g·a)` on a finite group.
    pub fn right_translate(&self, a: usize) -> Result<FunctionElement> {
        let g = self
            .domain
            .as_finite()
            .ok_or_else(|| Error::unsupported("right translation on a ℤ window"))?;
        g.label(a)?;
        let values = (0..g.order())
            .map(|x| self.values[g.mul_unchecked(x, a)])
            .collect();
        Ok(FunctionElement {
            domain: self.domain.clone(),
            values,
        })
    }

    pub fn add(&self, other: &FunctionElement) -> Result<FunctionElement> {
        if self.domain != other.domain {
            return Err(Error::input("sum across different domains"));
        }
        Ok(FunctionElement {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> FunctionElement {
        FunctionElement {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

/// Normalised Haar integral on a finite group, `φ(f) = (1/|G|) Σ_g f(g)`.
pub fn haar_finite(f: &FunctionElement) -> Result<Complex64> {
    let Domain::Finite(g) = f.domain() else {
        return Err(Error::input("haar_finite needs a finite group"));
    };
    Ok(f.values.iter().sum::<Complex64>() / g.order() as f64)
}

/// Un-normalised Haar integral on ℤ, `φ(f) = Σ_n f(n)` over the window.
pub fn haar_z(f: &FunctionElement) -> Result<Complex64> {
    let Domain::Integers(_) = f.domain() else {
        return Err(Error::input("haar_z needs a ℤ window"));
    };
    Ok(f.values.iter().sum())
}

/// Terms of `Δδ_g = Σ_{xy=g} δ_x ⊗ δ_y` as index pairs `(x, y)`.
pub fn coproduct_delta(group: &FiniteGroup, g: usize) -> Result<Vec<(usize, usize)>> {
    group.label(g)?;
    Ok((0..group.order())
        .map(|x| (x, group.mul_unchecked(group.inv_unchecked(x), g)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{s3, s3_index::*};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn s3d() -> Domain {
        Domain::finite(s3())
    }

    #[test]
    fn counit_is_unit() {
        let d = s3d();
        let eps = DualVector::counit(d.clone());
        assert_eq!(eps.coeffs()[0], c(1.0, 0.0));
        assert!(eps.coeffs()[1..].iter().all(|z| z.norm() == 0.0));
        let beta = DualVector::new(d, (0..6).map(|k| c(k as f64, -1.0)).collect()).unwrap();
        assert_eq!(eps.convolve(&beta).unwrap(), beta);
        assert_eq!(beta.convolve(&eps).unwrap(), beta);
        assert_eq!(eps.convolve(&eps).unwrap(), eps);

        let w = IntWindow::new(2).unwrap();
        let z0 = DualVector::counit(Domain::Integers(w));
        assert_eq!(z0.at_integer(0), c(1.0, 0.0));
        assert_eq!(z0.coeffs()[2], c(1.0, 0.0));
    }

    #[test]
    fn group_likes_multiply_by_group_law() {
        let d = s3d();
        let g = d.as_finite().unwrap().clone();
        for i in 0..6 {
            for j in 0..6 {
                let zi = DualVector::group_like(d.clone(), i).unwrap();
                let zj = DualVector::group_like(d.clone(), j).unwrap();
                let expected = DualVector::group_like(d.clone(), g.mul(i, j).unwrap()).unwrap();
                assert_eq!(zi.convolve(&zj).unwrap(), expected);
            }
        }
        let zu = DualVector::group_like(d.clone(), U).unwrap();
        assert_eq!(zu.convolve(&zu).unwrap(), DualVector::counit(d));
    }

    #[test]
    fn convolution_associative_on_basis() {
        let d = s3d();
        let basis: Vec<_> = (0..6)
            .map(|i| DualVector::group_like(d.clone(), i).unwrap())
            .collect();
        for a in &basis {
            for b in &basis {
                for cc in &basis {
                    let l = a.convolve(b).unwrap().convolve(cc).unwrap();
                    let r = a.convolve(&b.convolve(cc).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn z_convolution_overflow_is_error() {
        let w = IntWindow::new(2).unwrap();
        let d = Domain::Integers(w);
        let z2 = DualVector::group_like(d.clone(), w.position(2).unwrap()).unwrap();
        let z1 = DualVector::group_like(d.clone(), w.position(1).unwrap()).unwrap();
        let zm1 = DualVector::group_like(d, w.position(-1).unwrap()).unwrap();
        assert!(matches!(z2.convolve(&z1), Err(Error::Input(_))));
        let back = z2.convolve(&zm1).unwrap();
        assert_eq!(back.at_integer(1), c(1.0, 0.0));
    }

    #[test]
    fn mismatched_domains_rejected() {
        let a = DualVector::counit(s3d());
        let b = DualVector::counit(Domain::Integers(IntWindow::new(3).unwrap()));
        assert!(a.convolve(&b).is_err());
    }

    #[test]
    fn haar_values() {
        let d = s3d();
        let one = FunctionElement::constant(d.clone(), c(1.0, 0.0));
        assert!((haar_finite(&one).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        for g in 0..6 {
            let dg = FunctionElement::delta(d.clone(), g).unwrap();
            assert!((haar_finite(&dg).unwrap() - c(1.0 / 6.0, 0.0)).norm() < 1e-15);
        }
        let f =
            FunctionElement::new(d, (0..6).map(|k| c(k as f64, (k * k) as f64)).collect()).unwrap();
        assert!((haar_finite(&f.star()).unwrap() - haar_finite(&f).unwrap().conj()).norm() < 1e-15);

        let w = IntWindow::new(4).unwrap();
        let dz = Domain::Integers(w);
        let one = FunctionElement::constant(dz.clone(), c(1.0, 0.0));
        assert_eq!(haar_z(&one).unwrap(), c(9.0, 0.0));
        let d3 = FunctionElement::delta(dz.clone(), 3).unwrap();
        assert_eq!(haar_z(&d3).unwrap(), c(1.0, 0.0));
        let f = FunctionElement::new(dz, (0..9).map(|k| c(1.0, k as f64)).collect()).unwrap();
        assert_eq!(haar_z(&f.star()).unwrap(), haar_z(&f).unwrap().conj());
        assert!(haar_z(&FunctionElement::constant(s3d(), c(1.0, 0.0))).is_err());
    }

    #[test]
    fn right_integral_property() {
        // Σ_{xy=g} φ(δ_x) δ_y = φ(δ_g) · 1
        let g = s3();
        for h in 0..6 {
            let mut acc = [0.0f64; 6];
            for (x, y) in coproduct_delta(&g, h).unwrap() {
                assert_eq!(g.mul(x, y).unwrap(), h);
                acc[y] += 1.0 / 6.0;
            }
            assert!(acc.iter().all(|v| (v - 1.0 / 6.0).abs() < 1e-15));
        }
    }

    #[test]
    fn pairing_is_identity_matrix() {
        let d = s3d();
        for i in 0..6 {
            let z = DualVector::group_like(d.clone(), i).unwrap();
            for j in 0..6 {
                let f = FunctionElement::delta(d.clone(), j).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(z.pair(&f).unwrap(), c(expect, 0.0));
            }
        }
    }

    #[test]
    fn json_and_csv() {
        let d = s3d();
        let v =
            DualVector::new(d.clone(), (0..6).map(|k| c(k as f64 * 0.5, -1.0)).collect()).unwrap();
        let json = v.to_json().unwrap();
        assert!(json.starts_with(r#"{"group":"S3","coeffs":[[0.0,-1.0]"#));
        assert_eq!(DualVector::from_json(d, &json).unwrap(), v);
        let mut buf = Vec::new();
        v.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("element,re,im\ne,0,-1\n(123),0.5,-1\n"));
    }

    #[test]
    fn reembed_window() {
        let small = IntWindow::new(2).unwrap();
        let big = IntWindow::new(5).unwrap();
        let v = DualVector::group_like(Domain::Integers(small), 4).unwrap();
        let e = v.reembed(big).unwrap();
        assert_eq!(e.at_integer(2), c(1.0, 0.0));
        assert!(e.reembed(IntWindow::new(1).unwrap()).is_err());
    }
}
