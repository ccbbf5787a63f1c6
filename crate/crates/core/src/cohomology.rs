//! Integral and mod-`p` cohomology of `B(Z/p x Z/p)`.
//!
//! Integral cohomology is `Z` in degree 0 and `F_p[a,b] ⊗ Λ(c)` in positive
//! degrees (`|a| = |b| = 2`, `|c| = 3`). Mod-`p` cohomology is
//! `F_p[x,y] ⊗ Λ(u,v)` (`|x| = |y| = 2`, `|u| = |v| = 1`). The two are tied
//! together by the Bocksteins `β` (mod `p`), `β̃` (integral) and reduction
//! `ρ`, with `ρ ∘ β̃ = β`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldContext;

/// Ranks of a finitely generated abelian group `Z^free ⊕ (Z/p)^p_rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GroupRank {
    pub free_rank: usize,
    pub p_rank: usize,
}

const fn rank(free_rank: usize, p_rank: usize) -> GroupRank {
    GroupRank { free_rank, p_rank }
}

/// `H^k(Z/p x Z/p; Z)`.
pub fn dim_cohomology(k: usize) -> GroupRank {
    match k {
        0 => rank(1, 0),
        1 => rank(0, 0),
        k if k % 2 == 1 => rank(0, (k - 1) / 2),
        k => rank(0, (k + 2) / 2),
    }
}

/// `H_k(Z/p x Z/p; Z)`.
pub fn dim_homology(k: usize) -> GroupRank {
    match k {
        0 => rank(1, 0),
        k if k % 2 == 1 => rank(0, (k + 3) / 2),
        k => rank(0, k / 2),
    }
}

/// A monomial `a^i b^j c^ε` of the integral cohomology ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
    pub c: bool,
}

impl Monomial {
    pub fn degree(&self) -> usize {
        2 * (self.a + self.b) as usize + if self.c { 3 } else { 0 }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (var, e) in [("a", self.a), ("b", self.b)] {
            match e {
                0 => {}
                1 => s.push_str(var),
                _ => s.push_str(&format!("{var}^{e}")),
            }
        }
        if self.c {
            s.push('c');
        }
        if s.is_empty() {
            s.push('1');
        }
        write!(f, "{s}")
    }
}

/// Monomial basis of `H^k`, by descending power of `a`.
pub fn basis_of_degree(k: usize) -> Vec<Monomial> {
    let (c, rest) = if k.is_multiple_of(2) {
        (false, k)
    } else if k >= 3 {
        (true, k - 3)
    } else {
        return Vec::new();
    };
    let total = (rest / 2) as u32;
    (0..=total)
        .rev()
        .map(|a| Monomial { a, b: total - a, c })
        .collect()
}

/// Sparse bivariate polynomial over `F_p`, keyed by exponent pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), u32>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(i: u32, j: u32, coeff: u32) -> Self {
        let mut p = Self::zero();
        if coeff != 0 {
            p.terms.insert((i, j), coeff);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> u32 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    fn add_term(&mut self, f: FieldContext, key: (u32, u32), c: u32) {
        let entry = self.terms.entry(key).or_insert(0);
        *entry = f.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, f: FieldContext, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.terms() {
            out.add_term(f, k, v);
        }
        out
    }

    pub fn scale(&self, f: FieldContext, c: u32) -> Self {
        let mut out = Self::zero();
        for (k, v) in self.terms() {
            out.add_term(f, k, f.mul(v, c));
        }
        out
    }

    pub fn mul(&self, f: FieldContext, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in other.terms() {
                out.add_term(f, (i1 + i2, j1 + j2), f.mul(c1, c2));
            }
        }
        out
    }

    /// Multiplies by `x^i y^j`.
    fn shift(&self, i: u32, j: u32) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), &c)| ((a + i, b + j), c))
                .collect(),
        }
    }

    fn fmt_with(&self, vars: (&str, &str)) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(i, j), &c)| {
                let mut m = String::new();
                for (var, e) in [(vars.0, i), (vars.1, j)] {
                    match e {
                        0 => {}
                        1 => m.push_str(var),
                        _ => m.push_str(&format!("{var}^{e}")),
                    }
                }
                match (c, m.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => m,
                    _ => format!("{c}{m}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// An integral cohomology class `n + P(a,b) + c·C(a,b)`.
///
/// `free` is the degree-0 integer part; `poly` holds only positive-degree
/// terms (a constant key `(0,0)` never appears) and is reduced mod `p`,
/// as is `cpart`. There is no `c^2` component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralClass {
    field: FieldContext,
    free: i64,
    poly: Poly2,
    cpart: Poly2,
}

impl IntegralClass {
    pub fn zero(field: FieldContext) -> Self {
        IntegralClass {
            field,
            free: 0,
            poly: Poly2::zero(),
            cpart: Poly2::zero(),
        }
    }

    pub fn integer(field: FieldContext, n: i64) -> Self {
        IntegralClass {
            free: n,
            ..Self::zero(field)
        }
    }

    pub fn a(field: FieldContext) -> Self {
        Self::from_monomial(
            field,
            Monomial {
                a: 1,
                b: 0,
                c: false,
            },
            1,
        )
    }

    pub fn b(field: FieldContext) -> Self {
        Self::from_monomial(
            field,
            Monomial {
                a: 0,
                b: 1,
                c: false,
            },
            1,
        )
    }

    pub fn c(field: FieldContext) -> Self {
        Self::from_monomial(
            field,
            Monomial {
                a: 0,
                b: 0,
                c: true,
            },
            1,
        )
    }

    pub fn from_monomial(field: FieldContext, m: Monomial, coeff: i64) -> Self {
        if !m.c && m.a == 0 && m.b == 0 {
            return Self::integer(field, coeff);
        }
        let c = field.reduce(coeff);
        let mut out = Self::zero(field);
        if m.c {
            out.cpart = Poly2::monomial(m.a, m.b, c);
        } else {
            out.poly = Poly2::monomial(m.a, m.b, c);
        }
        out
    }

    pub(crate) fn from_parts(field: FieldContext, poly: Poly2, cpart: Poly2) -> Self {
        let mut out = IntegralClass {
            field,
            free: 0,
            poly,
            cpart,
        };
        let constant = out.poly.coeff(0, 0);
        if constant != 0 {
            // A torsion constant would live in degree 0, where the group is Z.
            out.poly.terms.remove(&(0, 0));
            out.free = constant as i64;
        }
        out
    }

    pub fn field(&self) -> FieldContext {
        self.field
    }

    pub fn free_part(&self) -> i64 {
        self.free
    }

    pub fn poly(&self) -> &Poly2 {
        &self.poly
    }

    pub fn cpart(&self) -> &Poly2 {
        &self.cpart
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.poly.is_zero() && self.cpart.is_zero()
    }

    fn check(&self, other: &Self) -> Result<FieldContext> {
        if self.field != other.field {
            return Err(Error::ContextMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        Ok(self.field)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        Ok(IntegralClass {
            field: f,
            free: self.free + other.free,
            poly: self.poly.add(f, &other.poly),
            cpart: self.cpart.add(f, &other.cpart),
        })
    }

    /// Ring product; `c^2 = 0`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        let n1 = f.reduce(self.free);
        let n2 = f.reduce(other.free);
        let poly = self
            .poly
            .mul(f, &other.poly)
            .add(f, &self.poly.scale(f, n2))
            .add(f, &other.poly.scale(f, n1));
        // (P + cC)(P' + cC') = PP' + c(PC' + CP') since the polynomial parts
        // have even degree and commute with c.
        let full1 = self.poly.add(f, &Poly2::monomial(0, 0, n1));
        let full2 = other.poly.add(f, &Poly2::monomial(0, 0, n2));
        let cpart = full1
            .mul(f, &other.cpart)
            .add(f, &self.cpart.mul(f, &full2));
        Ok(IntegralClass {
            field: f,
            free: self.free * other.free,
            poly,
            cpart,
        })
    }

    /// Reduction mod `p`: `a -> x`, `b -> y`, `c -> xv - yu`.
    pub fn reduce_mod_p(&self) -> ModPClass {
        let f = self.field;
        let mut one = self.poly.clone();
        let n = f.reduce(self.free);
        if n != 0 {
            one.add_term(f, (0, 0), n);
        }
        ModPClass {
            field: f,
            one,
            u: self.cpart.shift(0, 1).scale(f, f.neg(1)),
            v: self.cpart.shift(1, 0),
            uv: Poly2::zero(),
        }
    }
}

impl fmt::Display for IntegralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free != 0 {
            parts.push(self.free.to_string());
        }
        if !self.poly.is_zero() {
            parts.push(self.poly.fmt_with(("a", "b")));
        }
        if !self.cpart.is_zero() {
            parts.push(format!("c({})", self.cpart.fmt_with(("a", "b"))));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A mod-`p` class `P₁ + P_u·u + P_v·v + P_uv·uv` with `P_*` in `F_p[x,y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPClass {
    field: FieldContext,
    pub one: Poly2,
    pub u: Poly2,
    pub v: Poly2,
    pub uv: Poly2,
}

impl ModPClass {
    pub fn zero(field: FieldContext) -> Self {
        ModPClass {
            field,
            one: Poly2::zero(),
            u: Poly2::zero(),
            v: Poly2::zero(),
            uv: Poly2::zero(),
        }
    }

    pub fn field(&self) -> FieldContext {
        self.field
    }

    pub fn x(field: FieldContext) -> Self {
        ModPClass {
            one: Poly2::monomial(1, 0, 1),
            ..Self::zero(field)
        }
    }

    pub fn y(field: FieldContext) -> Self {
        ModPClass {
            one: Poly2::monomial(0, 1, 1),
            ..Self::zero(field)
        }
    }

    pub fn u(field: FieldContext) -> Self {
        ModPClass {
            u: Poly2::monomial(0, 0, 1),
            ..Self::zero(field)
        }
    }

    pub fn v(field: FieldContext) -> Self {
        ModPClass {
            v: Poly2::monomial(0, 0, 1),
            ..Self::zero(field)
        }
    }

    pub fn uv(field: FieldContext) -> Self {
        ModPClass {
            uv: Poly2::monomial(0, 0, 1),
            ..Self::zero(field)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.u.is_zero() && self.v.is_zero() && self.uv.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        Ok(ModPClass {
            field: f,
            one: self.one.add(f, &other.one),
            u: self.u.add(f, &other.u),
            v: self.v.add(f, &other.v),
            uv: self.uv.add(f, &other.uv),
        })
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        ModPClass {
            field: f,
            one: self.one.scale(f, c),
            u: self.u.scale(f, c),
            v: self.v.scale(f, c),
            uv: self.uv.scale(f, c),
        }
    }

    fn check(&self, other: &Self) -> Result<FieldContext> {
        if self.field != other.field {
            return Err(Error::ContextMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        Ok(self.field)
    }

    /// Graded-commutative product with `u^2 = v^2 = 0`, `vu = -uv`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        let m = |p: &Poly2, q: &Poly2| p.mul(f, q);
        let minus = |p: Poly2| p.scale(f, f.neg(1));
        let one = m(&self.one, &other.one);
        let u = m(&self.one, &other.u).add(f, &m(&self.u, &other.one));
        let v = m(&self.one, &other.v).add(f, &m(&self.v, &other.one));
        let uv = m(&self.one, &other.uv)
            .add(f, &m(&self.uv, &other.one))
            .add(f, &m(&self.u, &other.v))
            .add(f, &minus(m(&self.v, &other.u)));
        Ok(ModPClass {
            field: f,
            one,
            u,
            v,
            uv,
        })
    }

    /// Mod-`p` Bockstein: `β(u) = x`, `β(v) = y`, `β(uv) = xv - yu`,
    /// `β(P·ε) = P·β(ε)`.
    pub fn bockstein_modp(&self) -> ModPClass {
        let f = self.field;
        ModPClass {
            field: f,
            one: self.u.shift(1, 0).add(f, &self.v.shift(0, 1)),
            u: self.uv.shift(0, 1).scale(f, f.neg(1)),
            v: self.uv.shift(1, 0),
            uv: Poly2::zero(),
        }
    }

    /// Integral Bockstein: `β̃(u) = a`, `β̃(v) = b`, `β̃(uv) = c`,
    /// `β̃(P·ε) = P(a,b)·β̃(ε)`.
    pub fn bockstein_integral(&self) -> IntegralClass {
        let f = self.field;
        IntegralClass::from_parts(
            f,
            self.u.shift(1, 0).add(f, &self.v.shift(0, 1)),
            self.uv.clone(),
        )
    }

    /// Monomial basis of `H^k(-; F_p)`: `x^i y^j` times `1`, `u`, `v`, `uv`.
    pub fn basis_of_degree(field: FieldContext, k: usize) -> Vec<ModPClass> {
        let mut out = Vec::new();
        for (ext_deg, slot) in [(0usize, 0usize), (1, 1), (1, 2), (2, 3)] {
            if k < ext_deg || !(k - ext_deg).is_multiple_of(2) {
                continue;
            }
            let total = ((k - ext_deg) / 2) as u32;
            for i in (0..=total).rev() {
                let mono = Poly2::monomial(i, total - i, 1);
                let mut class = ModPClass::zero(field);
                match slot {
                    0 => class.one = mono,
                    1 => class.u = mono,
                    2 => class.v = mono,
                    _ => class.uv = mono,
                }
                out.push(class);
            }
        }
        out
    }
}

impl fmt::Display for ModPClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (poly, suffix) in [
            (&self.one, ""),
            (&self.u, "u"),
            (&self.v, "v"),
            (&self.uv, "uv"),
        ] {
            if poly.is_zero() {
                continue;
            }
            let body = poly.fmt_with(("x", "y"));
            parts.push(if suffix.is_empty() {
                body
            } else if body == "1" {
                suffix.to_string()
            } else {
                format!("({body}){suffix}")
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}
