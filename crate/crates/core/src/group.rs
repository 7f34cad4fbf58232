//! Finite groups given by multiplication tables, plus a symmetric window on ℤ.
//!
//! Group elements are addressed by their index in a fixed element list. The
//! table is validated on construction (closure, associativity, identity and
//! inverses), so every [`FiniteGroup`] value is a group.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// How products of permutations are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Composition {
    /// `g·h` means apply `h` first, then `g` (composition of functions).
    #[default]
    RightToLeft,
    /// `g·h` means apply `g` first, then `h`.
    LeftToRight,
}

/// A finite group presented by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    /// Row-major `order × order` table: `mul_table[i * order + j]` is `gᵢ·gⱼ`.
    mul_table: Vec<usize>,
    inv_table: Vec<usize>,
    identity: usize,
}

impl FiniteGroup {
    /// Builds a group from labels and a table of product indices.
    ///
    /// Fails unless the table defines an associative operation with a
    /// two-sided identity and two-sided inverses.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let order = labels.len();
        if order == 0 {
            return Err(Error::input("group must have at least one element"));
        }
        if table.len() != order || table.iter().any(|row| row.len() != order) {
            return Err(Error::input(format!(
                "multiplication table must be {order}×{order}"
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::input(format!("duplicate element label {l:?}")));
            }
        }
        let mul_table: Vec<usize> = table.into_iter().flatten().collect();
        if let Some(&bad) = mul_table.iter().find(|&&k| k >= order) {
            return Err(Error::input(format!("table entry {bad} out of range")));
        }
        let m = |i: usize, j: usize| mul_table[i * order + j];

        let identity = (0..order)
            .find(|&e| (0..order).all(|g| m(e, g) == g && m(g, e) == g))
            .ok_or_else(|| Error::input("table has no two-sided identity"))?;

        for i in 0..order {
            for j in 0..order {
                for k in 0..order {
                    if m(m(i, j), k) != m(i, m(j, k)) {
                        return Err(Error::input(format!(
                            "not associative at ({}, {}, {})",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }

        let mut inv_table = Vec::with_capacity(order);
        for i in 0..order {
            let right: Vec<usize> = (0..order).filter(|&j| m(i, j) == identity).collect();
            match right.as_slice() {
                [j] if m(*j, i) == identity => inv_table.push(*j),
                _ => {
                    return Err(Error::input(format!(
                        "element {} has no unique two-sided inverse",
                        labels[i]
                    )))
                }
            }
        }

        Ok(FiniteGroup {
            name: name.into(),
            labels,
            mul_table,
            inv_table,
            identity,
        })
    }

    /// Builds the group generated by composing the given permutations of
    /// `{0, …, n−1}`; the list must already be closed under composition.
    pub fn from_permutations(
        name: impl Into<String>,
        labels: Vec<String>,
        perms: &[Vec<usize>],
        composition: Composition,
    ) -> Result<Self> {
        if labels.len() != perms.len() {
            return Err(Error::input("one label per permutation required"));
        }
        let compose = |g: &[usize], h: &[usize]| -> Vec<usize> {
            match composition {
                Composition::RightToLeft => h.iter().map(|&x| g[x]).collect(),
                Composition::LeftToRight => g.iter().map(|&x| h[x]).collect(),
            }
        };
        let mut table = vec![vec![0; perms.len()]; perms.len()];
        for (i, g) in perms.iter().enumerate() {
            for (j, h) in perms.iter().enumerate() {
                let gh = compose(g, h);
                table[i][j] = perms
                    .iter()
                    .position(|p| *p == gh)
                    .ok_or_else(|| Error::input("permutation list not closed"))?;
            }
        }
        Self::from_table(name, labels, table)
    }

    /// Parses a plain-text table: the first non-comment line lists labels,
    /// then one line per element `gᵢ` lists the labels of `gᵢ·gⱼ`.
    /// Lines starting with `#` and blank lines are ignored.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let labels: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::input("empty group table"))?
            .split_whitespace()
            .map(str::to_owned)
            .collect();
        let lookup = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::input(format!("unknown element label {l:?}")))
        };
        let table = lines
            .map(|line| {
                line.split_whitespace()
                    .map(lookup)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(name, labels, table)
    }

    pub fn load_table(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "group".to_owned());
        Self::parse_table(name, &text)
    }

    /// Renders the group in the format read by [`FiniteGroup::parse_table`].
    pub fn to_table_string(&self) -> String {
        let mut out = format!("# group {}\n{}\n", self.name, self.labels.join(" "));
        for i in 0..self.order() {
            let row: Vec<&str> = (0..self.order())
                .map(|j| self.labels[self.mul_unchecked(i, j)].as_str())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Result<&str> {
        self.check(i)?;
        Ok(&self.labels[i])
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Index of `gᵢ·gⱼ`.
    pub fn mul(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.mul_unchecked(i, j))
    }

    pub fn inv(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.inv_table[i])
    }

    pub(crate) fn mul_unchecked(&self, i: usize, j: usize) -> usize {
        self.mul_table[i * self.order() + j]
    }

    pub(crate) fn inv_unchecked(&self, i: usize) -> usize {
        self.inv_table[i]
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.order() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "element index {i} out of range for group of order {}",
                self.order()
            )))
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order())
    }
}

/// Indices of the S₃ elements in the order used throughout the crate:
/// `e, (1,2,3), (1,3,2), u=(1,2), v=(2,3), w=(1,3)`.
pub mod s3_index {
    pub const E: usize = 0;
    pub const C123: usize = 1;
    pub const C132: usize = 2;
    pub const U: usize = 3;
    pub const V: usize = 4;
    pub const W: usize = 5;
}

/// The symmetric group S₃ with function composition.
pub fn s3() -> FiniteGroup {
    s3_with(Composition::RightToLeft)
}

/// S₃ with an explicit composition convention. Element order is fixed
/// (see [`s3_index`]); only the table changes.
pub fn s3_with(composition: Composition) -> FiniteGroup {
    // images of (1,2,3), zero-based
    let perms = vec![
        vec![0, 1, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![1, 0, 2],
        vec![0, 2, 1],
        vec![2, 1, 0],
    ];
    let labels = ["e", "(123)", "(132)", "u", "v", "w"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_permutations("S3", labels, &perms, composition)
        .expect("S3 permutation table is a group")
}

/// The integers −N…N stored at positions 0…2N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntWindow {
    radius: usize,
}

impl IntWindow {
    pub fn new(radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::input("window radius must be positive"));
        }
        Ok(IntWindow { radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn size(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn contains(&self, n: i64) -> bool {
        n.unsigned_abs() as usize <= self.radius
    }

    /// Storage position of the integer `n`, if it lies in the window.
    pub fn position(&self, n: i64) -> Option<usize> {
        self.contains(n).then(|| (n + self.radius as i64) as usize)
    }

    /// The integer stored at `pos`.
    pub fn value_at(&self, pos: usize) -> i64 {
        pos as i64 - self.radius as i64
    }

    pub fn values(&self) -> impl Iterator<Item = i64> {
        let r = self.radius as i64;
        -r..=r
    }
}
