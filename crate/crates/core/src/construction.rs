//! Linear `(Z/p)^2` actions on `S^(2n-1) x S^(2n-1)` by coordinatewise
//! rotations, and their k-invariants.

use serde::{Deserialize, Serialize};

use crate::equivalence::{fourth_power_invariant, FormPair};
use crate::error::{Error, Result};
use crate::field::{ClassIndex, FieldContext, FieldElement};
use crate::forms::product_of_linear_forms;

/// Rotation numbers of the two generators. The first generator rotates the
/// `i`-th complex coordinate of the first sphere by `r[i]` and of the second
/// sphere by `r[n + i]`; likewise `q` for the second generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationData {
    field: FieldContext,
    n: usize,
    r: Vec<u32>,
    q: Vec<u32>,
}

/// Wire format `{"n": n, "R": [...], "Q": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSpec {
    pub n: usize,
    #[serde(rename = "R")]
    pub r: Vec<i64>,
    #[serde(rename = "Q")]
    pub q: Vec<i64>,
}

impl RotationData {
    pub fn new(field: FieldContext, n: usize, r: &[i64], q: &[i64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if r.len() != 2 * n || q.len() != 2 * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} rotation numbers per generator, got {} and {}",
                2 * n,
                r.len(),
                q.len()
            )));
        }
        let r: Vec<u32> = r.iter().map(|&x| field.reduce(x)).collect();
        let q: Vec<u32> = q.iter().map(|&x| field.reduce(x)).collect();
        if !independent(field, &r, &q) {
            return Err(Error::InvalidParameter(
                "rotation vectors do not generate a rank-2 subgroup".into(),
            ));
        }
        Ok(RotationData { field, n, r, q })
    }

    pub fn from_spec(field: FieldContext, spec: &RotationSpec) -> Result<Self> {
        Self::new(field, spec.n, &spec.r, &spec.q)
    }

    pub fn to_spec(&self) -> RotationSpec {
        RotationSpec {
            n: self.n,
            r: self.r.iter().map(|&x| x as i64).collect(),
            q: self.q.iter().map(|&x| x as i64).collect(),
        }
    }

    pub fn field(&self) -> FieldContext {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn q(&self) -> &[u32] {
        &self.q
    }

    /// Whether every nonzero group element moves every point. The element
    /// `g^s h^t` fixes a point iff some coordinate of each sphere has zero
    /// total rotation `s r_i + t q_i`.
    pub fn is_free(&self) -> bool {
        let f = self.field;
        let n = self.n;
        let has_fixed_axis = |s: u32, t: u32, range: std::ops::Range<usize>| {
            range
                .into_iter()
                .any(|i| f.add(f.mul(s, self.r[i]), f.mul(t, self.q[i])) == 0)
        };
        (0..f.p()).all(|s| {
            (0..f.p()).all(|t| {
                (s == 0 && t == 0)
                    || !(has_fixed_axis(s, t, 0..n) && has_fixed_axis(s, t, n..2 * n))
            })
        })
    }

    /// `(prod (r_i a + q_i b), prod (r'_i a + q'_i b))`; requires `p > n`.
    pub fn k_invariant(&self) -> Result<FormPair> {
        let f = self.field;
        if f.p() as usize <= self.n {
            return Err(Error::HypothesisViolation(format!(
                "k-invariant formula needs p > n (p = {}, n = {})",
                f.p(),
                self.n
            )));
        }
        let factors = |range: std::ops::Range<usize>| -> Vec<(FieldElement, FieldElement)> {
            range
                .map(|i| (f.elem(self.r[i] as i64), f.elem(self.q[i] as i64)))
                .collect()
        };
        FormPair::new(
            product_of_linear_forms(f, &factors(0..self.n))?,
            product_of_linear_forms(f, &factors(self.n..2 * self.n))?,
        )
    }
}

fn independent(f: FieldContext, r: &[u32], q: &[u32]) -> bool {
    match r.iter().position(|&x| x != 0) {
        None => false,
        Some(i) => {
            let lambda = f.div(q[i], r[i]).unwrap();
            r.iter().zip(q).any(|(&x, &y)| f.mul(lambda, x) != y)
        }
    }
}

/// `R = (1, 1, 2, 0)`, `Q = (1, w, 0, 1)`, with k-invariant
/// `((a + b)(a + wb), 2ab)`. Free iff `w != 0`.
pub fn standard_example(w: FieldElement) -> RotationData {
    RotationData::new(w.context(), 2, &[1, 1, 2, 0], &[1, w.value() as i64, 0, 1])
        .expect("(1,1,2,0) and (1,w,0,1) are independent")
}

/// Product of the lens spaces `L(p; 1, x)` and `L(p; 1, y)`, one generator
/// per factor. k-invariant `(x a^2, y b^2)`.
pub fn lens_product(x: FieldElement, y: FieldElement) -> Result<RotationData> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::NotFree(
            "lens rotation numbers must be nonzero".into(),
        ));
    }
    RotationData::new(
        x.context(),
        2,
        &[1, x.value() as i64, 0, 0],
        &[0, 0, 1, y.value() as i64],
    )
}

/// Class of `(x a^2, y b^2)` without running the reduction: it is equivalent
/// to `(a^2 + w b^2, 2ab)` with `w = (2y/x)^2` up to fourth powers, so only
/// whether `2y/x` is a square matters, and only when `p = 1 mod 4`.
pub fn lens_product_class(x: FieldElement, y: FieldElement) -> Result<ClassIndex> {
    let f = x.context();
    if x.is_zero() || y.is_zero() {
        return Err(Error::NotFree(
            "lens rotation numbers must be nonzero".into(),
        ));
    }
    if f.p() <= 3 {
        return Err(Error::UnsupportedPrime(f.p()));
    }
    let ratio = f.div(f.mul(2, y.value()), x.value())?;
    f.fourth_power_class(f.mul(ratio, ratio))
}

/// Invariant of a lens product computed through the k-invariant pipeline.
pub fn lens_product_invariant(x: FieldElement, y: FieldElement) -> Result<ClassIndex> {
    fourth_power_invariant(&lens_product(x, y)?.k_invariant()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldContext {
        FieldContext::new(p).unwrap()
    }

    #[test]
    fn standard_example_invariant() {
        let fp = f(5);
        let k = standard_example(fp.elem(1)).k_invariant().unwrap();
        assert_eq!(
            k,
            FormPair::from_coeffs(fp, &[1, 2, 1], &[0, 2, 0]).unwrap()
        );
        for w in 0..5 {
            let k = standard_example(fp.elem(w)).k_invariant().unwrap();
            assert_eq!(
                k,
                FormPair::from_coeffs(fp, &[1, 1 + w, w], &[0, 2, 0]).unwrap()
            );
        }
    }

    #[test]
    fn all_ones() {
        let fp = f(7);
        // Only (1,...,1) for both generators would be dependent; perturb Q.
        let rot = RotationData::new(fp, 3, &[1; 6], &[1, 1, 1, 1, 1, 2]).unwrap();
        assert_eq!(rot.k_invariant().unwrap().q1().coeffs(), &[1, 3, 3, 1]);
        assert!(RotationData::new(fp, 2, &[1; 4], &[1; 4]).is_err());
    }

    #[test]
    fn hypothesis() {
        let fp = f(3);
        let rot = RotationData::new(fp, 3, &[1, 0, 0, 1, 0, 0], &[0, 1, 0, 0, 1, 0]).unwrap();
        assert!(matches!(
            rot.k_invariant(),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn freeness_examples() {
        let fp = f(5);
        assert!(!standard_example(fp.zero()).is_free());
        assert!(standard_example(fp.one()).is_free());
        for x in 1..5 {
            for y in 1..5 {
                assert!(lens_product(fp.elem(x), fp.elem(y)).unwrap().is_free());
            }
        }
        assert!(matches!(
            lens_product(fp.zero(), fp.one()),
            Err(Error::NotFree(_))
        ));
    }

    #[test]
    fn lens_invariant() {
        let fp = f(7);
        let k = lens_product(fp.elem(3), fp.elem(5))
            .unwrap()
            .k_invariant()
            .unwrap();
        assert_eq!(
            k,
            FormPair::from_coeffs(fp, &[3, 0, 0], &[0, 0, 5]).unwrap()
        );
        assert_eq!(
            lens_product_class(fp.elem(3), fp.elem(5)).unwrap(),
            lens_product_class(fp.one(), fp.one()).unwrap()
        );
        let f5 = f(5);
        assert_ne!(
            lens_product_class(f5.one(), f5.one()).unwrap(),
            lens_product_class(f5.one(), f5.elem(2)).unwrap()
        );
    }

    #[test]
    fn closed_form_matches_pipeline() {
        for p in [5u64, 7, 11, 13] {
            let fp = f(p);
            for x in 1..p as i64 {
                for y in 1..p as i64 {
                    let (x, y) = (fp.elem(x), fp.elem(y));
                    assert_eq!(
                        lens_product_class(x, y),
                        lens_product_invariant(x, y),
                        "p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn rotation_serde_round_trip() {
        let json = r#"{"n":2,"R":[1,1,2,0],"Q":[1,1,0,1]}"#;
        let spec: RotationSpec = serde_json::from_str(json).unwrap();
        let rot = RotationData::from_spec(f(5), &spec).unwrap();
        assert_eq!(serde_json::to_string(&rot.to_spec()).unwrap(), json);
    }
}
