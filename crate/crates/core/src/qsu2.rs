//! ℂ_q[SU₂] at a numeric real `q > 0`.
//!
//! Elements are kept in the normal form `aⁿbʳcˢ` / `dᵐbʳcˢ`, using
//!
//! ```text
//! ba = q ab   ca = q ac   bd = q⁻¹ db   cd = q⁻¹ dc   cb = bc
//! ad = 1 + q⁻¹ bc         da = 1 + q bc
//! ```
//!
//! The 3D calculus has invariant forms `e⁰, e⁺, e⁻`; the dual elements
//! `ν₀, ν₊, ν₋` (with `ν_i = e_i∘ω`) are evaluated through their product
//! rule, never as formal elements of U_q(su₂).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::sinhc;

/// Budget of single-generator rewrite steps per multiplication.
pub const REWRITE_FUEL: usize = 1_000_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    A,
    B,
    C,
    D,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::A, Generator::B, Generator::C, Generator::D];

    /// `|a| = |c| = 1`, `|b| = |d| = −1`.
    pub fn grade(self) -> i64 {
        match self {
            Generator::A | Generator::C => 1,
            Generator::B | Generator::D => -1,
        }
    }

    pub fn counit(self) -> f64 {
        match self {
            Generator::A | Generator::D => 1.0,
            Generator::B | Generator::C => 0.0,
        }
    }

    /// Position `(i, j)` in the matrix `t = [[a, b], [c, d]]`.
    pub fn matrix_index(self) -> (usize, usize) {
        match self {
            Generator::A => (0, 0),
            Generator::B => (0, 1),
            Generator::C => (1, 0),
            Generator::D => (1, 1),
        }
    }

    fn coproduct(self) -> [(Generator, Generator); 2] {
        use Generator::*;
        match self {
            A => [(A, A), (B, C)],
            B => [(B, D), (A, B)],
            C => [(C, A), (D, C)],
            D => [(D, D), (C, B)],
        }
    }

    pub fn from_name(s: &str) -> Option<Generator> {
        match s {
            "a" => Some(Generator::A),
            "b" => Some(Generator::B),
            "c" => Some(Generator::C),
            "d" => Some(Generator::D),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::A => "a",
            Generator::B => "b",
            Generator::C => "c",
            Generator::D => "d",
        }
    }
}

/// A normal-ordered monomial: `a^ad bʳ cˢ` when `ad ≥ 0`, `d^{−ad} bʳ cˢ`
/// when `ad < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    ad: i32,
    b: u32,
    c: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { ad: 0, b: 0, c: 0 };

    /// `ad > 0` is a power of `a`, `ad < 0` a power of `d`.
    pub fn new(ad: i32, b: u32, c: u32) -> Self {
        Monomial { ad, b, c }
    }

    pub fn generator(g: Generator) -> Self {
        match g {
            Generator::A => Monomial::new(1, 0, 0),
            Generator::B => Monomial::new(0, 1, 0),
            Generator::C => Monomial::new(0, 0, 1),
            Generator::D => Monomial::new(-1, 0, 0),
        }
    }

    pub fn ad_exponent(&self) -> i32 {
        self.ad
    }

    pub fn b_exponent(&self) -> u32 {
        self.b
    }

    pub fn c_exponent(&self) -> u32 {
        self.c
    }

    pub fn grade(&self) -> i64 {
        self.ad as i64 - self.b as i64 + self.c as i64
    }

    pub fn degree(&self) -> u32 {
        self.ad.unsigned_abs() + self.b + self.c
    }

    pub fn counit(&self) -> f64 {
        if self.b == 0 && self.c == 0 {
            1.0
        } else {
            0.0
        }
    }

    /// The generators of the monomial, left to right.
    pub fn word(&self) -> Vec<Generator> {
        let lead = if self.ad >= 0 {
            Generator::A
        } else {
            Generator::D
        };
        std::iter::repeat_n(lead, self.ad.unsigned_abs() as usize)
            .chain(std::iter::repeat_n(Generator::B, self.b as usize))
            .chain(std::iter::repeat_n(Generator::C, self.c as usize))
            .collect()
    }

    /// `self · g` in normal form; at most two monomials.
    fn times_generator(self, g: Generator, q: f64) -> ([(Monomial, f64); 2], usize) {
        let rs = (self.b + self.c) as i32;
        let Monomial { ad, b, c } = self;
        let none = (Monomial::ONE, 0.0);
        match g {
            Generator::B => ([(Monomial::new(ad, b + 1, c), 1.0), none], 1),
            Generator::C => ([(Monomial::new(ad, b, c + 1), 1.0), none], 1),
            Generator::A => {
                let f = q.powi(rs);
                if ad >= 0 {
                    ([(Monomial::new(ad + 1, b, c), f), none], 1)
                } else {
                    // d^m a = d^{m−1}(1 + q bc)
                    (
                        [
                            (Monomial::new(ad + 1, b, c), f),
                            (Monomial::new(ad + 1, b + 1, c + 1), f * q),
                        ],
                        2,
                    )
                }
            }
            Generator::D => {
                let f = q.powi(-rs);
                if ad <= 0 {
                    ([(Monomial::new(ad - 1, b, c), f), none], 1)
                } else {
                    // a^n d = a^{n−1}(1 + q⁻¹ bc)
                    (
                        [
                            (Monomial::new(ad - 1, b, c), f),
                            (Monomial::new(ad - 1, b + 1, c + 1), f / q),
                        ],
                        2,
                    )
                }
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |name: &str, e: u32| match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        };
        if self.ad >= 0 {
            push("a", self.ad as u32);
        } else {
            push("d", self.ad.unsigned_abs());
        }
        push("b", self.b);
        push("c", self.c);
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

type Terms = BTreeMap<Monomial, Complex64>;

fn add_term(terms: &mut Terms, m: Monomial, c: Complex64) {
    *terms.entry(m).or_insert(ZERO) += c;
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 {
        Ok(())
    } else {
        Err(Error::input(format!("q must be a positive real, got {q}")))
    }
}

/// Product of two monomials as normal-ordered terms with real coefficients.
fn monomial_product(
    m: Monomial,
    n: Monomial,
    q: f64,
    fuel: &mut usize,
) -> Result<Vec<(Monomial, f64)>> {
    let mut cur = vec![(m, 1.0)];
    for g in n.word() {
        let mut next: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (mono, c) in cur {
            if *fuel == 0 {
                return Err(Error::RewriteFuel(REWRITE_FUEL));
            }
            *fuel -= 1;
            let (out, len) = mono.times_generator(g, q);
            for &(m2, f) in &out[..len] {
                *next.entry(m2).or_insert(0.0) += c * f;
            }
        }
        cur = next.into_iter().collect();
    }
    Ok(cur)
}

/// A finite combination of normal-ordered monomials at a fixed `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSU2Element {
    q: f64,
    terms: Terms,
}

impl QSU2Element {
    pub fn zero(q: f64) -> Result<Self> {
        check_q(q)?;
        Ok(QSU2Element {
            q,
            terms: Terms::new(),
        })
    }

    pub fn one(q: f64) -> Result<Self> {
        Self::monomial(q, Monomial::ONE, Complex64::new(1.0, 0.0))
    }

    pub fn generator(q: f64, g: Generator) -> Result<Self> {
        Self::monomial(q, Monomial::generator(g), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(q: f64, m: Monomial, c: Complex64) -> Result<Self> {
        let mut x = Self::zero(q)?;
        x.terms.insert(m, c);
        Ok(x)
    }

    /// Normal form of an arbitrary word in the generators.
    pub fn word(q: f64, word: &[Generator]) -> Result<Self> {
        let mut x = Self::one(q)?;
        for &g in word {
            x = x.try_mul(&Self::generator(q, g)?)?;
        }
        Ok(x)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or(ZERO)
    }

    fn same_q(&self, other: &Self) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::input(format!(
                "q mismatch: {} vs {}",
                self.q, other.q
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_q(other)?;
        let mut terms = self.terms.clone();
        for (&m, &c) in &other.terms {
            add_term(&mut terms, m, c);
        }
        Ok(QSU2Element { q: self.q, terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        QSU2Element {
            q: self.q,
            terms: self.terms.iter().map(|(&m, &v)| (m, v * c)).collect(),
        }
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (m, c) in &self.terms {
            d = d.max((c - other.coeff(m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                d = d.max(c.norm());
            }
        }
        d
    }

    /// Normal-ordered product, failing if the rewrite budget runs out.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_q(other)?;
        let mut fuel = REWRITE_FUEL;
        let mut terms = Terms::new();
        for (&m, &cm) in &self.terms {
            for (&n, &cn) in &other.terms {
                for (p, f) in monomial_product(m, n, self.q, &mut fuel)? {
                    add_term(&mut terms, p, cm * cn * f);
                }
            }
        }
        Ok(QSU2Element { q: self.q, terms })
    }

    /// Applies an antimultiplicative map given on generators as
    /// `g ↦ scalar·generator`.
    fn anti_map(&self, on_gen: impl Fn(Generator) -> (f64, Generator), conj: bool) -> Result<Self> {
        let mut out = Self::zero(self.q)?;
        for (m, &c) in &self.terms {
            let mut x = Self::monomial(self.q, Monomial::ONE, if conj { c.conj() } else { c })?;
            for g in m.word().into_iter().rev() {
                let (s, h) = on_gen(g);
                x = x.try_mul(&Self::monomial(
                    self.q,
                    Monomial::generator(h),
                    Complex64::new(s, 0.0),
                )?)?;
            }
            out = out.add(&x)?;
        }
        Ok(out)
    }

    /// `a* = d`, `d* = a`, `b* = −q⁻¹c`, `c* = −qb`, extended
    /// antimultiplicatively and conjugate-linearly.
    pub fn star(&self) -> Result<Self> {
        let q = self.q;
        self.anti_map(
            |g| match g {
                Generator::A => (1.0, Generator::D),
                Generator::D => (1.0, Generator::A),
                Generator::B => (-1.0 / q, Generator::C),
                Generator::C => (-q, Generator::B),
            },
            true,
        )
    }

    /// `S(a) = d`, `S(d) = a`, `S(b) = −qb`, `S(c) = −q⁻¹c`, extended
    /// antimultiplicatively.
    pub fn antipode(&self) -> Result<Self> {
        let q = self.q;
        self.anti_map(
            |g| match g {
                Generator::A => (1.0, Generator::D),
                Generator::D => (1.0, Generator::A),
                Generator::B => (-q, Generator::B),
                Generator::C => (-1.0 / q, Generator::C),
            },
            false,
        )
    }

    pub fn counit(&self) -> Complex64 {
        self.terms.iter().map(|(m, c)| c * m.counit()).sum()
    }

    pub fn coproduct(&self) -> Result<Tensor> {
        let mut terms = BTreeMap::new();
        for (&m, &c) in &self.terms {
            for ((l, r), f) in monomial_coproduct(m, self.q)? {
                *terms.entry((l, r)).or_insert(ZERO) += c * f;
            }
        }
        Ok(Tensor { q: self.q, terms })
    }
}

impl Mul for &QSU2Element {
    type Output = QSU2Element;

    /// Panics on a q mismatch or an exhausted rewrite budget; use
    /// [`QSU2Element::try_mul`] to handle those.
    fn mul(self, rhs: &QSU2Element) -> QSU2Element {
        self.try_mul(rhs).expect("qsu2 multiplication")
    }
}

impl fmt::Display for QSU2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero: Vec<_> = self.terms.iter().filter(|(_, c)| c.norm() != 0.0).collect();
        if nonzero.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = nonzero.iter().map(|(m, c)| format!("({c})·{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn monomial_coproduct(m: Monomial, q: f64) -> Result<Vec<((Monomial, Monomial), f64)>> {
    let mut fuel = REWRITE_FUEL;
    let mut cur: BTreeMap<(Monomial, Monomial), f64> = BTreeMap::new();
    cur.insert((Monomial::ONE, Monomial::ONE), 1.0);
    for g in m.word() {
        let mut next = BTreeMap::new();
        for ((l, r), c) in cur {
            for (g1, g2) in g.coproduct() {
                for (l2, f1) in monomial_product(l, Monomial::generator(g1), q, &mut fuel)? {
                    for (r2, f2) in monomial_product(r, Monomial::generator(g2), q, &mut fuel)? {
                        *next.entry((l2, r2)).or_insert(0.0) += c * f1 * f2;
                    }
                }
            }
        }
        cur = next;
    }
    Ok(cur.into_iter().filter(|(_, c)| *c != 0.0).collect())
}

/// An element of ℂ_q[SU₂] ⊗ ℂ_q[SU₂] in the monomial ⊗ monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    q: f64,
    terms: BTreeMap<(Monomial, Monomial), Complex64>,
}

impl Tensor {
    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Complex64)> {
        self.terms.iter()
    }

    /// `(ε ⊗ id)`.
    pub fn counit_left(&self) -> Result<QSU2Element> {
        let mut out = QSU2Element::zero(self.q)?;
        for (&(l, r), &c) in &self.terms {
            add_term(&mut out.terms, r, c * l.counit());
        }
        Ok(out)
    }

    /// `(id ⊗ ε)`.
    pub fn counit_right(&self) -> Result<QSU2Element> {
        let mut out = QSU2Element::zero(self.q)?;
        for (&(l, r), &c) in &self.terms {
            add_term(&mut out.terms, l, c * r.counit());
        }
        Ok(out)
    }

    /// `Σ L·f(R)` over the terms `L ⊗ R`.
    pub fn contract_right(&self, f: impl Fn(&Monomial) -> Complex64) -> Result<QSU2Element> {
        let mut out = QSU2Element::zero(self.q)?;
        for (&(l, r), &c) in &self.terms {
            add_term(&mut out.terms, l, c * f(&r));
        }
        Ok(out)
    }

    /// Leg-wise product `(x⊗y)(x'⊗y') = xx' ⊗ yy'`.
    pub fn try_mul(&self, other: &Tensor) -> Result<Tensor> {
        if self.q != other.q {
            return Err(Error::input("q mismatch"));
        }
        let mut fuel = REWRITE_FUEL;
        let mut terms = BTreeMap::new();
        for (&(l1, r1), &c1) in &self.terms {
            for (&(l2, r2), &c2) in &other.terms {
                let ls = monomial_product(l1, l2, self.q, &mut fuel)?;
                let rs = monomial_product(r1, r2, self.q, &mut fuel)?;
                for &(l, fl) in &ls {
                    for &(r, fr) in &rs {
                        *terms.entry((l, r)).or_insert(ZERO) += c1 * c2 * fl * fr;
                    }
                }
            }
        }
        Ok(Tensor { q: self.q, terms })
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        let get = |t: &Tensor, k: &(Monomial, Monomial)| t.terms.get(k).copied().unwrap_or(ZERO);
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|k| (get(self, k) - get(other, k)).norm())
            .fold(0.0, f64::max)
    }
}

/// `[n]_{q²} = (1 − q^{2n})/(1 − q²)`, equal to `n` at `q = 1`.
pub fn q2_integer(n: i64, q: f64) -> f64 {
    if q == 1.0 {
        n as f64
    } else {
        let q2 = q * q;
        (1.0 - q2.powi(n as i32)) / (1.0 - q2)
    }
}

/// Haar integral: `φ((bc)ʳ) = (−1)ʳqʳ/[r+1]_{q²}`, zero on every other
/// normal-ordered monomial.
pub fn haar(x: &QSU2Element) -> Complex64 {
    x.terms.iter().map(|(m, c)| c * haar_monomial(m, x.q)).sum()
}

pub fn haar_monomial(m: &Monomial, q: f64) -> f64 {
    if m.ad == 0 && m.b == m.c {
        let r = m.b as i32;
        (-q).powi(r) / q2_integer(r as i64 + 1, q)
    } else {
        0.0
    }
}

/// Coefficients of an invariant 1-form on `(e⁰, e⁺, e⁻)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantForm {
    pub e0: f64,
    pub plus: f64,
    pub minus: f64,
}

/// `ω(a) = q⁻²e⁰`, `ω(b) = q⁻¹e⁻`, `ω(c) = q²e⁺`, `ω(d) = −e⁰`.
pub fn omega_generator(g: Generator, q: f64) -> InvariantForm {
    let f = |e0, plus, minus| InvariantForm { e0, plus, minus };
    match g {
        Generator::A => f(q.powi(-2), 0.0, 0.0),
        Generator::B => f(0.0, 0.0, 1.0 / q),
        Generator::C => f(0.0, q * q, 0.0),
        Generator::D => f(-1.0, 0.0, 0.0),
    }
}

pub fn omega_generators(q: f64) -> [(Generator, InvariantForm); 4] {
    Generator::ALL.map(|g| (g, omega_generator(g, q)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NuKind {
    Zero,
    Plus,
    Minus,
}

impl NuKind {
    /// Exponent `k` in the commutation `P e^i = q^{−k|P|} e^i P`.
    fn k(self) -> i32 {
        match self {
            NuKind::Zero => 2,
            NuKind::Plus | NuKind::Minus => 1,
        }
    }

    fn of_form(self, w: InvariantForm) -> f64 {
        match self {
            NuKind::Zero => w.e0,
            NuKind::Plus => w.plus,
            NuKind::Minus => w.minus,
        }
    }
}

/// One of `ν₀ = e₀∘ω`, `ν₊ = e₊∘ω`, `ν₋ = e₋∘ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuElement {
    pub kind: NuKind,
    pub q: f64,
}

impl NuElement {
    pub fn new(kind: NuKind, q: f64) -> Self {
        NuElement { kind, q }
    }

    pub fn on_generator(&self, g: Generator) -> f64 {
        self.kind.of_form(omega_generator(g, self.q))
    }

    /// Product rule `ν(gh) = ν(g)ε(h) + q^{−k|g|}ε(g)ν(h)` run along the
    /// word of the monomial.
    pub fn apply_monomial(&self, m: &Monomial) -> f64 {
        let (mut eps, mut nu, mut grade) = (1.0, 0.0, 0i64);
        for g in m.word() {
            nu = nu * g.counit()
                + self.q.powi(-self.kind.k() * grade as i32) * eps * self.on_generator(g);
            eps *= g.counit();
            grade += g.grade();
        }
        nu
    }

    pub fn apply(&self, x: &QSU2Element) -> Complex64 {
        x.terms
            .iter()
            .map(|(m, c)| c * self.apply_monomial(m))
            .sum()
    }

    /// `ρ(ν)` in the spin-½ representation, built from
    /// `ρ(q^{H/2}) = diag(r, 1/r)`, `r = √q`:
    /// `ν₀ = (1 − q^{−2H})/(q² − 1)`, `ν₊ = r³q^{−H/2}X₋`, `ν₋ = r⁻¹q^{−H/2}X₊`.
    pub fn rho(&self) -> [[f64; 2]; 2] {
        let q = self.q;
        let r = q.sqrt();
        let q_half_inv = [1.0 / r, r];
        match self.kind {
            NuKind::Zero => {
                // q^{−2H} = (q^{H/2})^{−4}
                let d = |x: f64| (1.0 - x.powi(-4)) / (q * q - 1.0);
                [[d(r), 0.0], [0.0, d(1.0 / r)]]
            }
            NuKind::Plus => [[0.0, 0.0], [r.powi(3) * q_half_inv[1], 0.0]],
            NuKind::Minus => [[0.0, q_half_inv[0] / r], [0.0, 0.0]],
        }
    }
}

/// `x = ζν₀ + γν₊ + δν₋`, the dual element `X∘ω` of the field
/// `X = ζe₀ + γe₊ + δe₋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuCombination {
    pub q: f64,
    pub zero: Complex64,
    pub plus: Complex64,
    pub minus: Complex64,
}

impl NuCombination {
    pub fn new(q: f64, zero: Complex64, plus: Complex64, minus: Complex64) -> Self {
        NuCombination {
            q,
            zero,
            plus,
            minus,
        }
    }

    pub fn field(q: f64, gamma: Complex64, delta: Complex64) -> Self {
        Self::new(q, ZERO, gamma, delta)
    }

    pub fn nu0(q: f64) -> Self {
        Self::new(q, Complex64::new(1.0, 0.0), ZERO, ZERO)
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Complex64 {
        let nu = |k| NuElement::new(k, self.q).apply_monomial(m);
        self.zero * nu(NuKind::Zero) + self.plus * nu(NuKind::Plus) + self.minus * nu(NuKind::Minus)
    }
}

/// Evaluates `Σ_{k<nterms} z^k/k! · x^k(y)` for every monomial `y` of a
/// seed set, where `x^k(h) = x(h₍₁₎) x^{k−1}(h₍₂₎)`.
fn series_exp_table(
    x: &NuCombination,
    z: Complex64,
    seeds: impl IntoIterator<Item = Monomial>,
    nterms: usize,
) -> Result<HashMap<Monomial, Complex64>> {
    // reduced coproducts: y ↦ [(x(L)·coef, R)]
    let mut reduced: HashMap<Monomial, Vec<(Complex64, Monomial)>> = HashMap::new();
    let mut stack: Vec<Monomial> = seeds.into_iter().collect();
    let roots = stack.clone();
    while let Some(m) = stack.pop() {
        if reduced.contains_key(&m) {
            continue;
        }
        let mut by_right: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for ((l, r), c) in monomial_coproduct(m, x.q)? {
            let w = x.apply_monomial(&l) * c;
            if w != ZERO {
                *by_right.entry(r).or_insert(ZERO) += w;
            }
        }
        let list: Vec<_> = by_right.into_iter().map(|(r, w)| (w, r)).collect();
        for &(_, r) in &list {
            if !reduced.contains_key(&r) {
                stack.push(r);
            }
        }
        reduced.insert(m, list);
    }

    let keys: Vec<Monomial> = reduced.keys().copied().collect();
    let mut power: HashMap<Monomial, Complex64> = keys
        .iter()
        .map(|m| (*m, Complex64::new(m.counit(), 0.0)))
        .collect();
    let mut sum = power.clone();
    let mut coef = Complex64::new(1.0, 0.0);
    for k in 1..nterms {
        coef *= z / k as f64;
        let next: HashMap<Monomial, Complex64> = keys
            .iter()
            .map(|m| (*m, reduced[m].iter().map(|(w, r)| w * power[r]).sum()))
            .collect();
        for m in &keys {
            *sum.get_mut(m).expect("key") += coef * next[m];
        }
        power = next;
    }
    if sum.values().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::numeric("dual power series overflowed"));
    }
    Ok(roots.into_iter().map(|m| (m, sum[&m])).collect())
}

/// `exp(z·x)(y) = Σ_k z^k/k! · x^k(y)`, truncated after `nterms` terms.
pub fn series_exp_apply(
    x: &NuCombination,
    z: Complex64,
    y: &QSU2Element,
    nterms: usize,
) -> Result<Complex64> {
    let table = series_exp_table(x, z, y.terms.keys().copied(), nterms)?;
    Ok(y.terms.iter().map(|(m, c)| c * table[m]).sum())
}

/// `exp(itν₀)(y) = exp(−it[−|y|]_{q²}) ε(y)`.
pub fn exp_nu0(q: f64, t: f64, y: &Monomial) -> Complex64 {
    let phase = Complex64::new(0.0, -t * q2_integer(-y.grade(), q));
    phase.exp() * y.counit()
}

/// `m(t)` from `m(0) = g` under `X = γe₊ + δe₋`, with `κ = √(qγδ)`:
///
/// ```text
/// a ↦ a cosh(tκ) − b (q²γ/κ) sinh(tκ)      b ↦ b cosh(tκ) − a (q⁻¹δ/κ) sinh(tκ)
/// c ↦ c cosh(tκ) − d (q²γ/κ) sinh(tκ)      d ↦ d cosh(tκ) − c (q⁻¹δ/κ) sinh(tκ)
/// ```
///
/// `sinh(tκ)/κ` is evaluated as `t·sinhc(tκ)`, so `γδ = 0` is covered and
/// the branch of the square root drops out.
pub fn evolve_generator(
    g: Generator,
    gamma: Complex64,
    delta: Complex64,
    t: f64,
    q: f64,
) -> Result<QSU2Element> {
    check_q(q)?;
    let kappa = (q * gamma * delta).sqrt();
    let ch = (t * kappa).cosh();
    let sh_over = t * sinhc(t * kappa);
    let (partner, coef) = match g {
        Generator::A => (Generator::B, q * q * gamma),
        Generator::B => (Generator::A, delta / q),
        Generator::C => (Generator::D, q * q * gamma),
        Generator::D => (Generator::C, delta / q),
    };
    QSU2Element::monomial(q, Monomial::generator(g), ch)?.add(&QSU2Element::monomial(
        q,
        Monomial::generator(partner),
        -coef * sh_over,
    )?)
}

/// `γ`-field partner making `γe₊ + δe₋` real: `δ = −q·conj(γ)`.
pub fn real_delta(gamma: Complex64, q: f64) -> Complex64 {
    -q * gamma.conj()
}

/// `m(t) = m(0)₍₁₎ exp(−t·x)(m(0)₍₂₎)` by the truncated series.
pub fn evolve_series(
    m0: &QSU2Element,
    x: &NuCombination,
    t: f64,
    nterms: usize,
) -> Result<QSU2Element> {
    let cop = m0.coproduct()?;
    let table = series_exp_table(
        x,
        Complex64::new(-t, 0.0),
        cop.terms.keys().map(|(_, r)| *r),
        nterms,
    )?;
    cop.contract_right(|r| table[r])
}

/// `φ(m h m*)`.
pub fn state_value(m: &QSU2Element, h: &QSU2Element) -> Result<Complex64> {
    Ok(haar(&m.try_mul(h)?.try_mul(&m.star()?)?))
}

/// `dg = Σ_i h_i e^i` for a generator, as `(form, coefficient, generator)`.
fn differential_generator(g: Generator, q: f64) -> [(NuKind, f64, Generator); 2] {
    use Generator::*;
    match g {
        A => [(NuKind::Zero, 1.0, A), (NuKind::Plus, q, B)],
        B => [(NuKind::Minus, 1.0, A), (NuKind::Zero, -1.0 / (q * q), B)],
        C => [(NuKind::Zero, 1.0, C), (NuKind::Plus, q, D)],
        D => [(NuKind::Minus, 1.0, C), (NuKind::Zero, -1.0 / (q * q), D)],
    }
}

/// `X(dm)` for `X = ζe₀ + γe₊ + δe₋`, from the calculus relations alone.
///
/// `d(g₁⋯g_k) = Σ_j g₁⋯g_{j−1}(dg_j)g_{j+1}⋯g_k`; each form is moved to
/// the left with `P e^i = q^{−k_i|P|} e^i P` and then paired with `X`.
pub fn vector_field_on_d(m: &QSU2Element, x: &NuCombination) -> Result<QSU2Element> {
    let q = m.q;
    let xval = |k: NuKind| match k {
        NuKind::Zero => x.zero,
        NuKind::Plus => x.plus,
        NuKind::Minus => x.minus,
    };
    let mut out = QSU2Element::zero(q)?;
    for (mono, &c) in &m.terms {
        let word = mono.word();
        for j in 0..word.len() {
            let prefix = QSU2Element::word(q, &word[..j])?;
            let suffix = QSU2Element::word(q, &word[j + 1..])?;
            let prefix_grade: i64 = word[..j].iter().map(|g| g.grade()).sum();
            for (kind, s, h) in differential_generator(word[j], q) {
                let grade = prefix_grade + h.grade();
                let f = c * s * q.powi(-kind.k() * grade as i32) * xval(kind);
                if f == ZERO {
                    continue;
                }
                let term = prefix
                    .try_mul(&QSU2Element::generator(q, h)?)?
                    .try_mul(&suffix)?
                    .scale(f);
                out = out.add(&term)?;
            }
        }
    }
    Ok(out)
}
