//! Restrictions on the transgression `d_{n+1}` of a free action, and the
//! `Qd(p)` coefficient obstruction.

use std::fmt;

use serde::Serialize;

use crate::equivalence::FormPair;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::forms::BinaryForm;
use crate::Limits;

/// The images `(d(α), d(γ))` of the two sphere classes, of degree `(n+1)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransgressionPair {
    n: usize,
    pair: FormPair,
}

impl TransgressionPair {
    pub fn new(n: usize, pair: FormPair) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "n must be odd and at least 3, got {n}"
            )));
        }
        if 2 * pair.degree() != n + 1 {
            return Err(Error::DegreeMismatch(pair.degree(), n.div_ceil(2)));
        }
        Ok(TransgressionPair { n, pair })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair(&self) -> &FormPair {
        &self.pair
    }
}

/// The `a^m` coefficients are not both zero, and neither are the `b^m`
/// coefficients.
pub fn satisfies_top_bottom(tp: &TransgressionPair) -> bool {
    let (q1, q2) = (tp.pair.q1().coeffs(), tp.pair.q2().coeffs());
    let m = q1.len() - 1;
    (q1[0], q2[0]) != (0, 0) && (q1[m], q2[m]) != (0, 0)
}

/// The top/bottom condition after every automorphism of the group: no
/// rational projective point where both forms vanish, and neither form zero.
pub fn satisfies_right_twists(tp: &TransgressionPair) -> bool {
    let (q1, q2) = (tp.pair.q1(), tp.pair.q2());
    !q1.is_zero() && !q2.is_zero() && q1.common_rational_root(q2).unwrap().is_none()
}

/// The twisted condition closed under recombining the two sphere classes as
/// well: no common rational root and linearly independent components. This
/// is what [`FormPair::is_realizable`] checks.
pub fn satisfies_all_twists(tp: &TransgressionPair) -> bool {
    tp.pair.is_realizable()
}

/// The literal quotient reading: there is no linear form `λ` with both
/// components scalar multiples of `λ^m`. Strictly weaker than the twisted
/// condition; kept for comparison.
pub fn satisfies_literal_quotient(tp: &TransgressionPair) -> bool {
    let f = tp.pair.field();
    let m = tp.pair.degree();
    let in_span = |form: &BinaryForm, power: &BinaryForm| -> bool {
        let (a, b) = (form.coeffs(), power.coeffs());
        let i = b
            .iter()
            .position(|&c| c != 0)
            .expect("powers of a nonzero form are nonzero");
        let c = f.div(a[i], b[i]).unwrap();
        a.iter().zip(b).all(|(&x, &y)| f.mul(c, y) == x)
    };
    let lambdas = std::iter::once([1u32, 0]).chain((0..f.p()).map(|t| [t, 1]));
    !lambdas.into_iter().any(|lam| {
        let lin = BinaryForm::from_residues(f, lam.to_vec());
        let mut power = BinaryForm::from_residues(f, vec![1]);
        for _ in 0..m {
            power = power.try_mul(&lin).unwrap();
        }
        in_span(tp.pair.q1(), &power) && in_span(tp.pair.q2(), &power)
    })
}

/// `ζ^k` with `ζ = x y^p - y x^p`, stored as a binary form in `x, y` of
/// degree `k(p+1)` (descending powers of `x`).
#[derive(Clone, PartialEq, Eq)]
pub struct ZetaForm {
    k: usize,
    form: BinaryForm,
}

impl ZetaForm {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    /// Coefficient of `x^i y^j` (`i + j` must be the degree).
    pub fn coeff(&self, i: usize, j: usize) -> u32 {
        if i + j != self.degree() {
            return 0;
        }
        self.form.coeffs()[j]
    }

    /// Coefficients of `x^d` and `y^d`.
    pub fn pure_power_coeffs(&self) -> (u32, u32) {
        let d = self.degree();
        (self.coeff(d, 0), self.coeff(0, d))
    }

    pub fn divisible_by_xy(&self) -> bool {
        self.pure_power_coeffs() == (0, 0)
    }

    /// Nonzero terms `(i, j, c)` for `c x^i y^j`, by descending power of `x`.
    pub fn terms(&self) -> Vec<(usize, usize, u32)> {
        let d = self.degree();
        self.form
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (d - j, j, c))
            .collect()
    }
}

impl fmt::Display for ZetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.form.to_string().replace('a', "x").replace('b', "y");
        write!(f, "{s}")
    }
}

impl fmt::Debug for ZetaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta^{} = {}", self.k, self)
    }
}

pub fn zeta_power(field: FieldContext, k: usize, limits: &Limits) -> Result<ZetaForm> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let p = field.p() as usize;
    let degree = k.saturating_mul(p + 1);
    if degree > limits.max_zeta_degree {
        return Err(Error::ResourceLimit(format!(
            "zeta^{k} has degree {degree}, above the limit {}",
            limits.max_zeta_degree
        )));
    }
    let mut zeta = vec![0u32; p + 2];
    zeta[p] = 1;
    zeta[1] = field.neg(1);
    let zeta = BinaryForm::from_residues(field, zeta);
    let mut acc = zeta.clone();
    for _ in 1..k {
        acc = acc.try_mul(&zeta)?;
    }
    Ok(ZetaForm { k, form: acc })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Obstructed,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Evidence {
    Obstructed {
        generator: String,
        generator_degree: usize,
        x_pure_coeff: u32,
        y_pure_coeff: u32,
        divisible_by_xy: bool,
        generator_pair_top_bottom: bool,
    },
    NotApplicable {
        reason: String,
    },
}

/// `{"status", "k", "evidence"}`; `k` is 0 when not applicable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub k: usize,
    pub evidence: Evidence,
}

/// Checks whether the ideal generated by `ζ^k`, `k = (n+1)/(2(p+1))`, can
/// contain a transgression pair passing the top/bottom condition.
pub fn qd_obstruction(field: FieldContext, n: usize, limits: &Limits) -> Result<Verdict> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "n must be odd and at least 3, got {n}"
        )));
    }
    let step = 2 * (field.p() as usize + 1);
    if !(n + 1).is_multiple_of(step) {
        return Ok(Verdict {
            status: VerdictStatus::NotApplicable,
            k: 0,
            evidence: Evidence::NotApplicable {
                reason: format!("2(p+1) = {step} does not divide n+1 = {}", n + 1),
            },
        });
    }
    let k = (n + 1) / step;
    let z = zeta_power(field, k, limits)?;
    let (xc, yc) = z.pure_power_coeffs();
    // In degree (n+1)/2 the ideal is spanned by ζ^k alone.
    let pair = FormPair::new(z.form.clone(), z.form.clone())?;
    let top_bottom = satisfies_top_bottom(&TransgressionPair::new(n, pair)?);
    let status = if !top_bottom {
        VerdictStatus::Obstructed
    } else {
        VerdictStatus::NotApplicable
    };
    Ok(Verdict {
        status,
        k,
        evidence: Evidence::Obstructed {
            generator: z.to_string(),
            generator_degree: z.degree(),
            x_pure_coeff: xc,
            y_pure_coeff: yc,
            divisible_by_xy: z.divisible_by_xy(),
            generator_pair_top_bottom: top_bottom,
        },
    })
}
