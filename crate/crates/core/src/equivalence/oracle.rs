//! Exhaustive search over the acting groups. Slow but independent of the
//! canonical-form reduction; used to cross-check it at small primes.

use super::{EquivalenceMode, FormPair, RightGroup, TransformWitness};
use crate::error::{Error, Result};
use crate::forms::Matrix2;
use crate::Limits;

fn right_candidates(pair: &FormPair, group: RightGroup) -> Vec<Matrix2> {
    let f = pair.field();
    match group {
        RightGroup::Trivial => vec![Matrix2::identity(f)],
        RightGroup::Gl2 => {
            let p = f.p();
            let mut out = Vec::new();
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        for d in 0..p {
                            let m = Matrix2::from_residues(f, [[a, b], [c, d]]);
                            if m.is_invertible() {
                                out.push(m);
                            }
                        }
                    }
                }
            }
            out
        }
    }
}

/// First `(S, R)` in lexicographic order with `S·(p1·R) = p2`, scanning all
/// of `GL2` (or the identity) on the right and solving for `S` row by row.
pub fn brute_force_witness(
    p1: &FormPair,
    p2: &FormPair,
    mode: EquivalenceMode,
    limits: &Limits,
) -> Result<Option<TransformWitness>> {
    let f = p1.field();
    if f != p2.field() {
        return Err(Error::ContextMismatch {
            left: f.p(),
            right: p2.field().p(),
        });
    }
    if p1.degree() != p2.degree() {
        return Err(Error::DegreeMismatch(p1.degree(), p2.degree()));
    }
    if f.p() > limits.max_brute_force_prime {
        return Err(Error::ResourceLimit(format!(
            "brute force is limited to p <= {}, got {}",
            limits.max_brute_force_prime,
            f.p()
        )));
    }
    let p = f.p();
    for r in right_candidates(p1, mode.right) {
        let a = p1.q1().substitute_unchecked(&r);
        let b = p1.q2().substitute_unchecked(&r);
        let rows_for = |target: &[u32]| -> Vec<[u32; 2]> {
            let mut rows = Vec::new();
            for x in 0..p {
                for y in 0..p {
                    let hit = a
                        .coeffs()
                        .iter()
                        .zip(b.coeffs())
                        .zip(target)
                        .all(|((&ca, &cb), &ct)| f.add(f.mul(x, ca), f.mul(y, cb)) == ct);
                    if hit {
                        rows.push([x, y]);
                    }
                }
            }
            rows
        };
        let first = rows_for(p2.q1().coeffs());
        if first.is_empty() {
            continue;
        }
        let second = rows_for(p2.q2().coeffs());
        for r1 in &first {
            for r2 in &second {
                let s = Matrix2::from_residues(f, [*r1, *r2]);
                if mode.left.contains(&s) {
                    return Ok(Some(TransformWitness { left: s, right: r }));
                }
            }
        }
    }
    Ok(None)
}

pub fn brute_force_equivalent(
    p1: &FormPair,
    p2: &FormPair,
    mode: EquivalenceMode,
    limits: &Limits,
) -> Result<bool> {
    Ok(brute_force_witness(p1, p2, mode, limits)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    #[test]
    fn finds_lens_equivalence() {
        let f = FieldContext::new(5).unwrap();
        let a = FormPair::from_coeffs(f, &[1, 0, 0], &[0, 0, 1]).unwrap();
        let b = FormPair::standard(f, 4);
        let w = brute_force_witness(&a, &b, EquivalenceMode::FULL, &Limits::default())
            .unwrap()
            .unwrap();
        assert!(w.verifies(&a, &b));
        assert!(!brute_force_equivalent(
            &a,
            &FormPair::standard(f, 1),
            EquivalenceMode::FULL,
            &Limits::default()
        )
        .unwrap());
    }

    #[test]
    fn trivial_right_group_only_recombines() {
        let f = FieldContext::new(5).unwrap();
        let a = FormPair::from_coeffs(f, &[1, 0, 0], &[0, 0, 1]).unwrap();
        let swapped = FormPair::from_coeffs(f, &[0, 0, 1], &[1, 0, 0]).unwrap();
        assert!(brute_force_equivalent(
            &a,
            &swapped,
            EquivalenceMode::FIXED_PI1,
            &Limits::default()
        )
        .unwrap());
        // Without the swap on the left, the right action still exchanges a and b.
        let w = brute_force_witness(&a, &swapped, EquivalenceMode::ORIENTED, &Limits::default())
            .unwrap()
            .unwrap();
        assert_eq!(w.left.det(), 1);
        assert!(w.verifies(&a, &swapped));
    }

    #[test]
    fn prime_limit() {
        let f = FieldContext::new(13).unwrap();
        let a = FormPair::standard(f, 1);
        assert!(matches!(
            brute_force_witness(&a, &a, EquivalenceMode::FULL, &Limits::default()),
            Err(Error::ResourceLimit(_))
        ));
    }
}
