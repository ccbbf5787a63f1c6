//! Two-sided equivalence of pairs of binary forms.
//!
//! A matrix `S` with `det S = ±1` acts on the left by recombining the two
//! components, `S·(Q1, Q2) = (s11 Q1 + s12 Q2, s21 Q1 + s22 Q2)`; a matrix
//! `R ∈ GL_2` acts on the right by substituting the variables of both
//! components. The actions commute.

mod oracle;
mod orbits;

pub use oracle::{brute_force_equivalent, brute_force_witness};
pub use orbits::{
    enumerate_realizable_pairs, orbit_labels, orbit_representative, orbit_summary, OrbitSummary,
};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ClassIndex, FieldContext, FieldElement};
use crate::forms::{BinaryForm, Matrix2, ProjectivePoint};
use crate::Limits;

/// An ordered pair of equal-degree binary forms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormPair {
    q1: BinaryForm,
    q2: BinaryForm,
}

impl FormPair {
    pub fn new(q1: BinaryForm, q2: BinaryForm) -> Result<Self> {
        if q1.field() != q2.field() {
            return Err(Error::ContextMismatch {
                left: q1.field().p(),
                right: q2.field().p(),
            });
        }
        if q1.degree() != q2.degree() {
            return Err(Error::DegreeMismatch(q1.degree(), q2.degree()));
        }
        Ok(FormPair { q1, q2 })
    }

    pub fn from_coeffs(field: FieldContext, q1: &[i64], q2: &[i64]) -> Result<Self> {
        Self::new(BinaryForm::new(field, q1)?, BinaryForm::new(field, q2)?)
    }

    /// `(a^2 + w b^2, 2ab)`.
    pub fn standard(field: FieldContext, w: u32) -> Self {
        FormPair {
            q1: BinaryForm::from_residues(field, vec![1, 0, w % field.p()]),
            q2: BinaryForm::from_residues(field, vec![0, 2, 0]),
        }
    }

    pub fn field(&self) -> FieldContext {
        self.q1.field()
    }

    pub fn degree(&self) -> usize {
        self.q1.degree()
    }

    pub fn q1(&self) -> &BinaryForm {
        &self.q1
    }

    pub fn q2(&self) -> &BinaryForm {
        &self.q2
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::ContextMismatch {
                left: self.field().p(),
                right: other.field().p(),
            });
        }
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }

    /// Left action by a matrix of determinant `±1`.
    pub fn left_act(&self, m: &Matrix2) -> Result<Self> {
        if !LeftGroup::SlPm2.contains(m) {
            return Err(Error::InvalidLeftMatrix { det: m.det() });
        }
        Ok(self.left_act_unchecked(m))
    }

    pub(crate) fn left_act_unchecked(&self, m: &Matrix2) -> Self {
        let e = &m.e;
        FormPair {
            q1: self.q1.combine(e[0][0], &self.q2, e[0][1]).unwrap(),
            q2: self.q1.combine(e[1][0], &self.q2, e[1][1]).unwrap(),
        }
    }

    /// Right action: substitute both components by the same invertible matrix.
    pub fn right_act(&self, m: &Matrix2) -> Result<Self> {
        Ok(FormPair {
            q1: self.q1.substitute(m)?,
            q2: self.q2.substitute(m)?,
        })
    }

    /// The two components span a 2-dimensional space of forms.
    pub fn components_independent(&self) -> bool {
        let f = self.field();
        let (a, b) = (self.q1.coeffs(), self.q2.coeffs());
        match a.iter().position(|&c| c != 0) {
            None => false,
            Some(i) => {
                let lambda = f.div(b[i], a[i]).unwrap();
                a.iter().zip(b).any(|(&x, &y)| f.mul(lambda, x) != y)
            }
        }
    }

    /// Whether the pair can be the k-invariant of a free action: the
    /// components are linearly independent and share no rational
    /// projective zero. Both conditions are invariant under the left and
    /// right actions.
    pub fn is_realizable(&self) -> bool {
        self.components_independent() && self.q1.common_rational_root(&self.q2).unwrap().is_none()
    }

    /// Coefficients `[[q1...], [q2...]]`.
    pub fn to_lists(&self) -> [Vec<u32>; 2] {
        [self.q1.coeffs().to_vec(), self.q2.coeffs().to_vec()]
    }
}

impl fmt::Debug for FormPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) (mod {})", self.q1, self.q2, self.field().p())
    }
}

impl fmt::Display for FormPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q1, self.q2)
    }
}

impl Serialize for FormPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (&self.q1, &self.q2).serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeftGroup {
    /// Determinant `+1`.
    Sl2,
    /// Determinant `±1`.
    SlPm2,
}

impl LeftGroup {
    pub fn contains(&self, m: &Matrix2) -> bool {
        let d = m.det();
        match self {
            LeftGroup::Sl2 => d == 1,
            LeftGroup::SlPm2 => d == 1 || d == m.field().p() - 1,
        }
    }

    pub fn generators(&self, field: FieldContext) -> Vec<Matrix2> {
        let mut gens = vec![
            Matrix2::new(field, [[1, 1], [0, 1]]),
            Matrix2::new(field, [[1, 0], [1, 1]]),
        ];
        if *self == LeftGroup::SlPm2 {
            gens.push(Matrix2::new(field, [[0, 1], [1, 0]]));
        }
        gens
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RightGroup {
    Trivial,
    Gl2,
}

impl RightGroup {
    pub fn contains(&self, m: &Matrix2) -> bool {
        match self {
            RightGroup::Trivial => *m == Matrix2::identity(m.field()),
            RightGroup::Gl2 => m.is_invertible(),
        }
    }

    pub fn generators(&self, field: FieldContext) -> Vec<Matrix2> {
        match self {
            RightGroup::Trivial => Vec::new(),
            RightGroup::Gl2 => vec![
                Matrix2::new(field, [[1, 1], [0, 1]]),
                Matrix2::new(field, [[1, 0], [1, 1]]),
                Matrix2::new(field, [[field.primitive_root() as i64, 0], [0, 1]]),
            ],
        }
    }
}

/// Which groups act on each side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EquivalenceMode {
    pub left: LeftGroup,
    pub right: RightGroup,
}

impl EquivalenceMode {
    /// `SL±2` on the left, `GL2` on the right: homotopy type of the quotient.
    pub const FULL: Self = EquivalenceMode {
        left: LeftGroup::SlPm2,
        right: RightGroup::Gl2,
    };
    /// `SL±2` on the left only: a fixed identification of the fundamental group.
    pub const FIXED_PI1: Self = EquivalenceMode {
        left: LeftGroup::SlPm2,
        right: RightGroup::Trivial,
    };
    /// `SL2` on the left, `GL2` on the right.
    pub const ORIENTED: Self = EquivalenceMode {
        left: LeftGroup::Sl2,
        right: RightGroup::Gl2,
    };

    pub fn name(&self) -> &'static str {
        match (self.left, self.right) {
            (LeftGroup::SlPm2, RightGroup::Gl2) => "full",
            (LeftGroup::SlPm2, RightGroup::Trivial) => "fixed-pi1",
            (LeftGroup::Sl2, RightGroup::Gl2) => "oriented",
            (LeftGroup::Sl2, RightGroup::Trivial) => "oriented-fixed-pi1",
        }
    }

    pub fn admits(&self, w: &TransformWitness) -> bool {
        self.left.contains(&w.left) && self.right.contains(&w.right)
    }
}

/// `(S, R)` sending a source pair `P` to `S·(P·R)`.
#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransformWitness {
    pub left: Matrix2,
    pub right: Matrix2,
}

impl fmt::Debug for TransformWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S={:?} R={:?}",
            self.left.row_major(),
            self.right.row_major()
        )
    }
}

impl TransformWitness {
    pub fn identity(field: FieldContext) -> Self {
        TransformWitness {
            left: Matrix2::identity(field),
            right: Matrix2::identity(field),
        }
    }

    pub fn left_only(m: Matrix2) -> Self {
        TransformWitness {
            left: m,
            right: Matrix2::identity(m.field()),
        }
    }

    pub fn right_only(m: Matrix2) -> Self {
        TransformWitness {
            left: Matrix2::identity(m.field()),
            right: m,
        }
    }

    pub fn apply(&self, pair: &FormPair) -> Result<FormPair> {
        pair.right_act(&self.right)?.left_act(&self.left)
    }

    /// Applies `self` first, then `next`.
    pub fn then(&self, next: &TransformWitness) -> TransformWitness {
        TransformWitness {
            left: next.left.mul(&self.left),
            right: self.right.mul(&next.right),
        }
    }

    pub fn inverse(&self) -> Result<TransformWitness> {
        Ok(TransformWitness {
            left: self.left.inverse()?,
            right: self.right.inverse()?,
        })
    }

    /// True iff the witness carries `source` exactly onto `target`.
    pub fn verifies(&self, source: &FormPair, target: &FormPair) -> bool {
        self.apply(source)
            .map(|img| img == *target)
            .unwrap_or(false)
    }
}

/// Canonical representative of a degree-2 pair under the full action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "w", rename_all = "snake_case")]
pub enum NormalForm {
    NonRealizable,
    /// The pair `(a^2 + w b^2, 2ab)` with `w` the smallest element of its
    /// fourth-power class.
    StandardClass(FieldElement),
}

fn check_classifiable(pair: &FormPair) -> Result<()> {
    if pair.degree() != 2 {
        return Err(Error::UnsupportedDegree(pair.degree()));
    }
    if pair.field().p() <= 3 {
        return Err(Error::UnsupportedPrime(pair.field().p()));
    }
    Ok(())
}

/// Projective zeros of a split nondegenerate quadratic `α a² + β ab + γ b²`.
fn split_roots(f: FieldContext, alpha: u32, beta: u32, gamma: u32) -> [(u32, u32); 2] {
    let disc = f.sub(f.mul(beta, beta), f.mul(4, f.mul(alpha, gamma)));
    let delta = f.sqrt(disc).expect("split member has square discriminant");
    if gamma == 0 {
        [(0, 1), (1, f.neg(f.div(alpha, beta).unwrap()))]
    } else {
        let inv = f.inv(f.mul(2, gamma)).unwrap();
        let minus_beta = f.neg(beta);
        [
            (1, f.mul(f.add(minus_beta, delta), inv)),
            (1, f.mul(f.sub(minus_beta, delta), inv)),
        ]
    }
}

/// Reduces a realizable degree-2 pair to `(a^2 + w b^2, 2ab)`, returning
/// `w` and the witness.
fn reduce_to_standard(pair: &FormPair) -> (u32, TransformWitness) {
    let f = pair.field();
    let mut witness = TransformWitness::identity(f);
    let mut cur = pair.clone();
    let mut step = |cur: &mut FormPair, w: TransformWitness| {
        *cur = w
            .apply(cur)
            .expect("reduction steps are valid group elements");
        witness = witness.then(&w);
    };

    // A realizable pencil always contains a product of two distinct rational
    // linear forms; move the first such member into the second slot.
    let (s, t) = ProjectivePoint::all(f)
        .map(|pt| pt.coords())
        .find(|&(s, t)| {
            let m = cur.q1.combine(s, &cur.q2, t).unwrap();
            let c = m.coeffs();
            let disc = f.sub(f.mul(c[1], c[1]), f.mul(4, f.mul(c[0], c[2])));
            f.legendre(disc) == 1
        })
        .expect("realizable pencil has a split member");
    let row1 = if t != 0 {
        [f.inv(t).unwrap(), 0]
    } else {
        [0, f.neg(f.inv(s).unwrap())]
    };
    step(
        &mut cur,
        TransformWitness::left_only(Matrix2::from_residues(f, [row1, [s, t]])),
    );

    // Send the two linear factors of the split member to a and b.
    let c = cur.q2.coeffs().to_vec();
    let [(s1, t1), (s2, t2)] = split_roots(f, c[0], c[1], c[2]);
    let factors = Matrix2::from_residues(f, [[t1, f.neg(s1)], [t2, f.neg(s2)]]);
    step(
        &mut cur,
        TransformWitness::right_only(factors.inverse().unwrap()),
    );
    debug_assert!(cur.q2.coeffs()[0] == 0 && cur.q2.coeffs()[2] == 0);

    // Normalize the second component to 2ab and clear the ab term of the first.
    let k = cur.q2.coeffs()[1];
    let half_k = f.div(k, 2).unwrap();
    let scale = Matrix2::from_residues(f, [[half_k, 0], [0, f.inv(half_k).unwrap()]]);
    step(&mut cur, TransformWitness::left_only(scale));
    let beta = cur.q1.coeffs()[1];
    let shear = Matrix2::from_residues(f, [[1, f.neg(f.div(beta, 2).unwrap())], [0, 1]]);
    step(&mut cur, TransformWitness::left_only(shear));

    // (α a² + γ b², 2ab) ~ (a² + γ/α³ b², 2ab) via b -> b/α and a left rescale.
    let alpha = cur.q1.coeffs()[0];
    debug_assert!(alpha != 0 && cur.q1.coeffs()[2] != 0);
    let inv_alpha = f.inv(alpha).unwrap();
    step(
        &mut cur,
        TransformWitness {
            left: Matrix2::from_residues(f, [[inv_alpha, 0], [0, alpha]]),
            right: Matrix2::from_residues(f, [[1, 0], [0, inv_alpha]]),
        },
    );
    let w = cur.q1.coeffs()[2];
    debug_assert_eq!(cur, FormPair::standard(f, w));
    (w, witness)
}

/// Matrices `(R, S)` with `(a² + δw⁴b², 2ab)·R = S·(a² + δb², 2ab)`,
/// `det R = -1/w`, `det S = 1`, built from the smallest solution of
/// `δ r1² - r2² = 1/w³`.
pub fn fourth_power_equivalence(
    field: FieldContext,
    delta: u32,
    w: u32,
) -> Result<(Matrix2, Matrix2)> {
    let f = field;
    let (r1, r2) = f.solve_conic(delta, w)?;
    let w2 = f.mul(w, w);
    let w4 = f.mul(w2, w2);
    let r = Matrix2::from_residues(f, [[f.mul(w2, r2), f.mul(delta, f.mul(w2, r1))], [r1, r2]]);
    let d_r1_sq = f.mul(delta, f.mul(r1, r1));
    let r2_sq = f.mul(r2, r2);
    let two_r1r2 = f.mul(2, f.mul(r1, r2));
    let s = Matrix2::from_residues(
        f,
        [
            [
                f.mul(w4, f.add(d_r1_sq, r2_sq)),
                f.mul(delta, f.mul(w4, two_r1r2)),
            ],
            [f.mul(w2, two_r1r2), f.mul(w2, f.add(d_r1_sq, r2_sq))],
        ],
    );
    Ok((r, s))
}

/// Witness from `(a², w b²)` to `(a² + 4w² b², 2ab)`: substitute
/// `a -> a/(2w) - b`, `b -> a + 2wb`, then undo the `SL2` matrix
/// `[[1/(4w²), -1/(2w)], [w, 2w²]]`.
pub fn diagonal_to_standard(field: FieldContext, w: u32) -> Result<TransformWitness> {
    let f = field;
    if w.is_multiple_of(f.p()) {
        return Err(Error::InvalidParameter("w must be nonzero".into()));
    }
    let inv_2w = f.inv(f.mul(2, w))?;
    let w2 = f.mul(w, w);
    let right = Matrix2::from_residues(f, [[inv_2w, f.neg(1)], [1, f.mul(2, w)]]);
    let m = Matrix2::from_residues(
        f,
        [[f.mul(inv_2w, inv_2w), f.neg(inv_2w)], [w, f.mul(2, w2)]],
    );
    Ok(TransformWitness {
        left: m.inverse()?,
        right,
    })
}

/// Canonical form of a degree-2 pair under [`EquivalenceMode::FULL`],
/// with a witness carrying the input onto the representative.
pub fn canonical_form(pair: &FormPair) -> Result<(NormalForm, Option<TransformWitness>)> {
    check_classifiable(pair)?;
    if !pair.is_realizable() {
        return Ok((NormalForm::NonRealizable, None));
    }
    let f = pair.field();
    let (w, mut witness) = reduce_to_standard(pair);
    let class = f.fourth_power_class(w)?;
    let w0 = f.class_representatives()[class.0].value();
    if w0 != w {
        let t = f
            .fourth_root(f.div(w0, w)?)
            .expect("same class differs by a fourth power");
        let (r, s) = fourth_power_equivalence(f, w, t)?;
        witness = witness.then(&TransformWitness {
            left: s,
            right: r.inverse()?,
        });
    }
    Ok((NormalForm::StandardClass(f.elem(w0 as i64)), Some(witness)))
}

/// Fourth-power class of the canonical `w`; a complete invariant of
/// realizable degree-2 pairs under the full action.
pub fn fourth_power_invariant(pair: &FormPair) -> Result<ClassIndex> {
    match canonical_form(pair)?.0 {
        NormalForm::NonRealizable => Err(Error::NonRealizable),
        NormalForm::StandardClass(w) => w.fourth_power_class(),
    }
}

/// Decides whether `p1` and `p2` are equivalent in `mode`, returning a
/// witness `(S, R)` with `S·(p1·R) = p2`.
///
/// Realizable degree-2 pairs under the full action are decided by the
/// fourth-power invariant; everything else falls back to an orbit search
/// bounded by `limits`.
pub fn decide_equivalent(
    p1: &FormPair,
    p2: &FormPair,
    mode: EquivalenceMode,
    limits: &Limits,
) -> Result<Option<TransformWitness>> {
    p1.check_compatible(p2)?;
    if p1 == p2 {
        return Ok(Some(TransformWitness::identity(p1.field())));
    }
    if mode == EquivalenceMode::FULL && check_classifiable(p1).is_ok() {
        match (p1.is_realizable(), p2.is_realizable()) {
            (true, true) => {
                let (n1, w1) = canonical_form(p1)?;
                let (n2, w2) = canonical_form(p2)?;
                if n1 != n2 {
                    return Ok(None);
                }
                let (w1, w2) = (w1.unwrap(), w2.unwrap());
                return Ok(Some(w1.then(&w2.inverse()?)));
            }
            (false, false) => {}
            _ => return Ok(None),
        }
    }
    orbits::find_transform(p1, p2, mode, limits)
}
