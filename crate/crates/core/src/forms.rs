//! Homogeneous binary forms over `F_p` and the `GL_2` substitution action.
//!
//! Coefficients are stored in descending powers of `a`: `coeffs[i]`
//! multiplies `a^(m-i) b^i`. Substitution by `M` replaces `(a, b)` with
//! `(m11 a + m12 b, m21 a + m22 b)`, so `f.substitute(M).substitute(N) ==
//! f.substitute(M * N)` and `f.substitute(M).evaluate(v) == f.evaluate(M v)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: FieldContext,
    coeffs: Vec<u32>,
}

impl BinaryForm {
    /// Builds a form from integer coefficients (descending powers of `a`).
    /// An empty slice is rejected: the degree-0 form needs one coefficient.
    pub fn new(field: FieldContext, coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "a form needs at least one coefficient".into(),
            ));
        }
        Ok(BinaryForm {
            field,
            coeffs: coeffs.iter().map(|&c| field.reduce(c)).collect(),
        })
    }

    pub(crate) fn from_residues(field: FieldContext, coeffs: Vec<u32>) -> Self {
        debug_assert!(!coeffs.is_empty());
        debug_assert!(coeffs.iter().all(|&c| c < field.p()));
        BinaryForm { field, coeffs }
    }

    pub fn zero(field: FieldContext, degree: usize) -> Self {
        BinaryForm {
            field,
            coeffs: vec![0; degree + 1],
        }
    }

    /// The monomial `c a^(degree-i) b^i`.
    pub fn monomial(field: FieldContext, degree: usize, i: usize, c: i64) -> Self {
        let mut f = Self::zero(field, degree);
        f.coeffs[i] = field.reduce(c);
        f
    }

    pub fn field(&self) -> FieldContext {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.elem(self.coeffs[i] as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ContextMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let f = self.field;
        Ok(BinaryForm {
            field: f,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| f.add(x, y))
                .collect(),
        })
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        BinaryForm {
            field: f,
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    /// `c1 * self + c2 * other`.
    pub fn combine(&self, c1: u32, other: &Self, c2: u32) -> Result<Self> {
        self.same_shape(other)?;
        let f = self.field;
        Ok(BinaryForm {
            field: f,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| f.add(f.mul(c1, x), f.mul(c2, y)))
                .collect(),
        })
    }

    /// Product of forms; degrees add.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::ContextMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        let f = self.field;
        let mut out = vec![0u32; self.degree() + other.degree() + 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Ok(BinaryForm {
            field: f,
            coeffs: out,
        })
    }

    /// Evaluates at the affine pair `(s, t)`.
    pub fn evaluate(&self, s: u32, t: u32) -> FieldElement {
        let f = self.field;
        let m = self.degree() as u64;
        let mut acc = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = f.mul(c, f.mul(f.pow(s, m - i as u64), f.pow(t, i as u64)));
            acc = f.add(acc, term);
        }
        f.elem(acc as i64)
    }

    pub fn evaluate_at(&self, pt: ProjectivePoint) -> FieldElement {
        self.evaluate(pt.s, pt.t)
    }

    /// `f(m11 a + m12 b, m21 a + m22 b)`, expanded.
    pub fn substitute(&self, m: &Matrix2) -> Result<Self> {
        if m.field != self.field {
            return Err(Error::ContextMismatch {
                left: self.field.p(),
                right: m.field.p(),
            });
        }
        if m.det() == 0 {
            return Err(Error::SingularMatrix);
        }
        Ok(self.substitute_unchecked(m))
    }

    pub(crate) fn substitute_unchecked(&self, m: &Matrix2) -> Self {
        let f = self.field;
        let deg = self.degree();
        let first = BinaryForm::from_residues(f, vec![m.e[0][0], m.e[0][1]]);
        let second = BinaryForm::from_residues(f, vec![m.e[1][0], m.e[1][1]]);
        let mut first_pows = vec![BinaryForm::from_residues(f, vec![1])];
        let mut second_pows = vec![BinaryForm::from_residues(f, vec![1])];
        for k in 0..deg {
            first_pows.push(first_pows[k].try_mul(&first).unwrap());
            second_pows.push(second_pows[k].try_mul(&second).unwrap());
        }
        let mut out = BinaryForm::zero(f, deg);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = first_pows[deg - i]
                .try_mul(&second_pows[i])
                .unwrap()
                .scale(c);
            out = out.try_add(&term).unwrap();
        }
        out
    }

    /// All projective zeros, in [`ProjectivePoint::all`] order.
    pub fn rational_roots(&self) -> Vec<ProjectivePoint> {
        ProjectivePoint::all(self.field)
            .filter(|pt| self.evaluate_at(*pt).is_zero())
            .collect()
    }

    /// First projective point (in [`ProjectivePoint::all`] order) where both
    /// forms vanish.
    pub fn common_rational_root(&self, other: &Self) -> Result<Option<ProjectivePoint>> {
        self.same_shape(other)?;
        Ok(ProjectivePoint::all(self.field)
            .find(|pt| self.evaluate_at(*pt).is_zero() && other.evaluate_at(*pt).is_zero()))
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.field.p())
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.degree();
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut mono = String::new();
            for (var, e) in [("a", m - i), ("b", i)] {
                match e {
                    0 => {}
                    1 => mono.push_str(var),
                    _ => mono.push_str(&format!("{var}^{e}")),
                }
            }
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Serialize for BinaryForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// Expands `prod (r_i a + q_i b)`.
pub fn product_of_linear_forms(
    field: FieldContext,
    factors: &[(FieldElement, FieldElement)],
) -> Result<BinaryForm> {
    if factors.is_empty() {
        return Err(Error::InvalidParameter(
            "empty product of linear forms".into(),
        ));
    }
    let mut acc = BinaryForm::from_residues(field, vec![1]);
    for (r, q) in factors {
        let lin = BinaryForm::from_residues(field, vec![r.value(), q.value()]);
        acc = acc.try_mul(&lin)?;
    }
    Ok(acc)
}

/// A point of `P^1(F_p)`, normalized so the first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjectivePoint {
    s: u32,
    t: u32,
}

impl ProjectivePoint {
    pub fn new(field: FieldContext, s: i64, t: i64) -> Result<Self> {
        let (s, t) = (field.reduce(s), field.reduce(t));
        if s == 0 && t == 0 {
            return Err(Error::InvalidParameter(
                "(0, 0) is not a projective point".into(),
            ));
        }
        if s == 0 {
            return Ok(ProjectivePoint { s: 0, t: 1 });
        }
        let inv = field.inv(s)?;
        Ok(ProjectivePoint {
            s: 1,
            t: field.mul(t, inv),
        })
    }

    pub fn coords(&self) -> (u32, u32) {
        (self.s, self.t)
    }

    /// All `p + 1` points in lexicographic order: `(0,1), (1,0), ..., (1,p-1)`.
    pub fn all(field: FieldContext) -> impl Iterator<Item = ProjectivePoint> {
        std::iter::once(ProjectivePoint { s: 0, t: 1 })
            .chain((0..field.p()).map(|t| ProjectivePoint { s: 1, t }))
    }
}

/// A 2x2 matrix over `F_p`, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    field: FieldContext,
    pub(crate) e: [[u32; 2]; 2],
}

impl Matrix2 {
    pub fn new(field: FieldContext, entries: [[i64; 2]; 2]) -> Self {
        Matrix2 {
            field,
            e: entries.map(|row| row.map(|x| field.reduce(x))),
        }
    }

    pub(crate) fn from_residues(field: FieldContext, e: [[u32; 2]; 2]) -> Self {
        Matrix2 { field, e }
    }

    /// Parses a row-major 4-list.
    pub fn from_row_major(field: FieldContext, v: &[i64]) -> Result<Self> {
        match v {
            [a, b, c, d] => Ok(Self::new(field, [[*a, *b], [*c, *d]])),
            _ => Err(Error::Parse(format!(
                "matrix needs 4 entries, got {}",
                v.len()
            ))),
        }
    }

    pub fn identity(field: FieldContext) -> Self {
        Self::new(field, [[1, 0], [0, 1]])
    }

    pub fn field(&self) -> FieldContext {
        self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(self.e[i][j] as i64)
    }

    pub fn row_major(&self) -> [u32; 4] {
        [self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]]
    }

    pub fn det(&self) -> u32 {
        let f = self.field;
        f.sub(
            f.mul(self.e[0][0], self.e[1][1]),
            f.mul(self.e[0][1], self.e[1][0]),
        )
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    pub fn mul(&self, other: &Matrix2) -> Matrix2 {
        let f = self.field;
        let mut e = [[0u32; 2]; 2];
        for (i, row) in e.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f.add(
                    f.mul(self.e[i][0], other.e[0][j]),
                    f.mul(self.e[i][1], other.e[1][j]),
                );
            }
        }
        Matrix2 { field: f, e }
    }

    pub fn inverse(&self) -> Result<Matrix2> {
        let f = self.field;
        let d = f.inv(self.det()).map_err(|_| Error::SingularMatrix)?;
        Ok(Matrix2 {
            field: f,
            e: [
                [f.mul(d, self.e[1][1]), f.mul(d, f.neg(self.e[0][1]))],
                [f.mul(d, f.neg(self.e[1][0])), f.mul(d, self.e[0][0])],
            ],
        })
    }

    /// `M v` for a column vector `v = (s, t)`.
    pub fn apply(&self, s: u32, t: u32) -> (u32, u32) {
        let f = self.field;
        (
            f.add(f.mul(self.e[0][0], s), f.mul(self.e[0][1], t)),
            f.add(f.mul(self.e[1][0], s), f.mul(self.e[1][1], t)),
        )
    }
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.e, self.field.p())
    }
}

impl Serialize for Matrix2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_major().serialize(s)
    }
}
