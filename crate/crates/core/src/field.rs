//! Exact arithmetic in the prime field `Z/p`.
//!
//! [`FieldContext`] carries the modulus and exposes arithmetic on raw
//! canonical residues (`u32` in `[0, p)`); the hot loops of the orbit engine
//! work directly on those. [`FieldElement`] is the checked, typed view used
//! by the public API.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd prime modulus `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u32")]
pub struct FieldContext {
    p: u32,
}

impl TryFrom<u64> for FieldContext {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        FieldContext::new(p)
    }
}

impl From<FieldContext> for u32 {
    fn from(f: FieldContext) -> u32 {
        f.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldContext {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::ModulusTooLarge(p));
        }
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(FieldContext { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary integer to its canonical residue.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let mut result = 1 % self.p;
        let mut b = base % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.reduce(t0))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn elem(&self, x: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(x),
            p: self.p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// Iterates over all `p` residues in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(move |v| FieldElement {
            value: v,
            p: self.p,
        })
    }

    /// Legendre symbol by Euler's criterion.
    pub fn legendre(&self, a: u32) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Smallest positive quadratic nonresidue.
    pub fn find_nonresidue(&self) -> u32 {
        (2..self.p)
            .find(|&z| self.legendre(z) == -1)
            .expect("odd prime has a nonresidue")
    }

    /// Square root by Tonelli–Shanks; returns the root `r` with `r <= p - r`.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.p as u64;
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self.find_nonresidue();
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r.min(self.p - r))
    }

    /// Smallest generator of the unit group.
    pub fn primitive_root(&self) -> u32 {
        let order = self.p as u64 - 1;
        let mut primes = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                primes.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        (1..self.p)
            .find(|&g| primes.iter().all(|&q| self.pow(g, order / q) != 1))
            .expect("unit group of a prime field is cyclic")
    }

    /// Number of cosets of the fourth powers in the unit group: `gcd(4, p - 1)`.
    pub fn fourth_power_class_count(&self) -> usize {
        if self.p % 4 == 1 {
            4
        } else {
            2
        }
    }

    pub fn is_fourth_power(&self, a: u32) -> bool {
        let a = a % self.p;
        a != 0
            && self.pow(
                a,
                (self.p as u64 - 1) / self.fourth_power_class_count() as u64,
            ) == 1
    }

    /// Smallest element of each fourth-power coset, in increasing order.
    pub fn class_representatives(&self) -> Vec<FieldElement> {
        let count = self.fourth_power_class_count();
        let mut reps: Vec<u32> = Vec::with_capacity(count);
        for v in 1..self.p {
            if reps.len() == count {
                break;
            }
            let known = reps
                .iter()
                .any(|&r| self.is_fourth_power(self.mul(v, self.inv(r).unwrap())));
            if !known {
                reps.push(v);
            }
        }
        reps.into_iter().map(|v| self.elem(v as i64)).collect()
    }

    /// Index into [`class_representatives`](Self::class_representatives) of
    /// the fourth-power coset containing `a`.
    pub fn fourth_power_class(&self, a: u32) -> Result<ClassIndex> {
        if a.is_multiple_of(self.p) {
            return Err(Error::NotAUnit);
        }
        let reps = self.class_representatives();
        let idx = reps
            .iter()
            .position(|r| self.is_fourth_power(self.mul(a, self.inv(r.value).unwrap())))
            .expect("cosets partition the unit group");
        Ok(ClassIndex(idx))
    }

    /// Some `t` with `t^4 = a`, or `None` when `a` is not a fourth power.
    pub fn fourth_root(&self, a: u32) -> Option<u32> {
        if !self.is_fourth_power(a) {
            return None;
        }
        let s = self.sqrt(a)?;
        self.sqrt(s).or_else(|| self.sqrt(self.neg(s)))
    }

    /// Lexicographically smallest `(r1, r2)` with `delta*r1^2 - r2^2 = w^-3`.
    pub fn solve_conic(&self, delta: u32, w: u32) -> Result<(u32, u32)> {
        if delta.is_multiple_of(self.p) || w.is_multiple_of(self.p) {
            return Err(Error::InvalidParameter(
                "conic needs nonzero delta and w".into(),
            ));
        }
        let target = self.inv(self.pow(w, 3))?;
        for r1 in 0..self.p {
            let sq = self.sub(self.mul(delta, self.mul(r1, r1)), target);
            if let Some(r2) = self.sqrt(sq) {
                return Ok((r1, r2));
            }
        }
        unreachable!("a nondegenerate conic over F_p has p - (delta/p) > 0 points")
    }

    /// Number of solutions of `delta*r1^2 - r2^2 = c` for any nonzero `c`.
    pub fn count_conic_solutions(&self, delta: u32) -> Result<u64> {
        if delta.is_multiple_of(self.p) {
            return Err(Error::InvalidParameter("conic needs nonzero delta".into()));
        }
        Ok((self.p as i64 - self.legendre(delta) as i64) as u64)
    }
}

/// Position of a fourth-power coset in [`FieldContext::class_representatives`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassIndex(pub usize);

/// A canonical residue in `[0, p)` tagged with its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    p: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn context(&self) -> FieldContext {
        FieldContext { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Self) -> Result<FieldContext> {
        if self.p != other.p {
            return Err(Error::ContextMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(self.context())
    }

    fn with(&self, value: u32) -> Self {
        FieldElement { value, p: self.p }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        Ok(self.with(f.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        Ok(self.with(f.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let f = self.check(other)?;
        Ok(self.with(f.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.context().inv(self.value)?))
    }

    pub fn pow(&self, exp: u64) -> Self {
        self.with(self.context().pow(self.value, exp))
    }

    pub fn legendre(&self) -> i8 {
        self.context().legendre(self.value)
    }

    pub fn sqrt(&self) -> Option<Self> {
        self.context().sqrt(self.value).map(|r| self.with(r))
    }

    pub fn fourth_power_class(&self) -> Result<ClassIndex> {
        self.context().fourth_power_class(self.value)
    }
}

// Operator impls panic on mismatched moduli; use the `try_*` methods when
// operands may come from different fields.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("field mismatch")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("field mismatch")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("field mismatch")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        self.with(self.context().neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldContext {
        FieldContext::new(p).unwrap()
    }

    fn squares(p: u64) -> Vec<u32> {
        let mut s: Vec<u32> = (1..p).map(|x| ((x * x) % p) as u32).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(FieldContext::new(2), Err(Error::NotOddPrime(2)));
        assert_eq!(FieldContext::new(9), Err(Error::NotOddPrime(9)));
        assert_eq!(FieldContext::new(1), Err(Error::NotOddPrime(1)));
        assert!(matches!(
            FieldContext::new(1 << 31),
            Err(Error::ModulusTooLarge(_))
        ));
        assert!(FieldContext::new(2_147_483_647).is_ok());
    }

    #[test]
    fn basic_arithmetic() {
        let f7 = f(7);
        assert_eq!((f7.elem(3) + f7.elem(5)).value(), 1);
        assert_eq!((f7.elem(0) * f7.elem(6)).value(), 0);
        let f5 = f(5);
        assert_eq!((-f5.elem(2)).value(), 3);
        assert_eq!(f5.elem(-2).value(), 3);
    }

    #[test]
    fn mismatched_contexts_error() {
        let a = f(5).elem(1);
        let b = f(7).elem(1);
        assert_eq!(
            a.try_add(&b),
            Err(Error::ContextMismatch { left: 5, right: 7 })
        );
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_sub(&b).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(f(7).elem(3).inv().unwrap().value(), 5);
        assert_eq!(f(5).elem(1).inv().unwrap().value(), 1);
        assert_eq!(f(5).elem(3).inv().unwrap().value(), 2);
        assert_eq!(f(5).elem(0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        // Squares mod 7 = {1, 2, 4}.
        assert_eq!(squares(7), vec![1, 2, 4]);
        assert_eq!(f(7).legendre(2), 1);
        assert_eq!(f(7).legendre(3), -1);
        assert_eq!(f(5).legendre(0), 0);
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let sq = squares(p);
            for x in 1..p as u32 {
                let expected = if sq.contains(&x) { 1 } else { -1 };
                assert_eq!(f(p).legendre(x), expected, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn nonresidues() {
        assert_eq!(f(5).find_nonresidue(), 2);
        assert_eq!(f(7).find_nonresidue(), 3);
        assert_eq!(squares(13), vec![1, 3, 4, 9, 10, 12]);
        assert_eq!(f(13).find_nonresidue(), 2);
    }

    #[test]
    fn square_roots() {
        assert_eq!(f(7).sqrt(2), Some(3));
        assert_eq!(f(7).sqrt(3), None);
        assert_eq!(f(5).sqrt(0), Some(0));
        // p = 17 has 2-adic valuation 4 in p-1, exercising the Tonelli-Shanks loop.
        let f17 = f(17);
        for x in 0..17 {
            match f17.sqrt(x) {
                Some(r) => {
                    assert_eq!(f17.mul(r, r), x);
                    assert!(r <= 17 - r || r == 0);
                }
                None => assert_eq!(f17.legendre(x), -1),
            }
        }
    }

    #[test]
    fn fourth_power_classes() {
        // Fourth powers mod 13: {1, 3, 9}.
        let f13 = f(13);
        let fourth: Vec<u32> = {
            let mut v: Vec<u32> = (1..13u32).map(|x| f13.pow(x, 4)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        assert_eq!(fourth, vec![1, 3, 9]);
        let reps: Vec<u32> = f13
            .class_representatives()
            .iter()
            .map(|e| e.value())
            .collect();
        assert_eq!(reps, vec![1, 2, 4, 7]);

        let reps5: Vec<u32> = f(5)
            .class_representatives()
            .iter()
            .map(|e| e.value())
            .collect();
        assert_eq!(reps5, vec![1, 2, 3, 4]);
        let reps7: Vec<u32> = f(7)
            .class_representatives()
            .iter()
            .map(|e| e.value())
            .collect();
        assert_eq!(reps7, vec![1, 3]);

        assert_eq!(f13.fourth_power_class(0), Err(Error::NotAUnit));
        assert_eq!(f13.fourth_power_class(3), Ok(ClassIndex(0)));
        assert_eq!(f13.fourth_power_class(12), f13.fourth_power_class(4));
    }

    #[test]
    fn fourth_roots() {
        for p in [5u64, 7, 11, 13, 17] {
            let fp = f(p);
            for t in 1..p as u32 {
                let a = fp.pow(t, 4);
                let r = fp.fourth_root(a).unwrap();
                assert_eq!(fp.pow(r, 4), a);
            }
        }
        assert_eq!(f(5).fourth_root(2), None);
    }

    #[test]
    fn conic_examples() {
        let f5 = f(5);
        // 1/8 = 2 (mod 5); exhaustive search gives (1, 2): 1 - 4 = -3 = 2.
        assert_eq!(f5.solve_conic(1, 2), Ok((1, 2)));
        assert_eq!(f5.count_conic_solutions(1), Ok(4));
        assert_eq!(f(7).count_conic_solutions(3), Ok(8));
        assert!(f5.solve_conic(0, 1).is_err());
        assert!(f5.solve_conic(1, 0).is_err());
        assert!(f5.count_conic_solutions(0).is_err());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(f(5).primitive_root(), 2);
        assert_eq!(f(7).primitive_root(), 3);
        assert_eq!(f(13).primitive_root(), 2);
        assert_eq!(f(17).primitive_root(), 3);
    }
}
