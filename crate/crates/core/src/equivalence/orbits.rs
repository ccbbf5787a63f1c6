//! Exhaustive orbit enumeration over all pairs of a given degree.
//!
//! A pair is packed into a `u64`, one byte per coefficient, and indexed
//! lexicographically by `(q1[0], ..., q1[d], q2[0], ..., q2[d])`. Orbits are
//! traced by depth-first search over group generators with a visited bitset.

use std::collections::HashMap;

use serde::Serialize;

use super::{EquivalenceMode, FormPair, TransformWitness};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::forms::{BinaryForm, Matrix2};
use crate::Limits;

const MAX_DEGREE: usize = 3;

/// A generator acting on packed states.
struct PackedGen {
    witness: TransformWitness,
    left: Option<[[u32; 2]; 2]>,
    /// `(out, in, coeff)` triples of the substitution matrix on coefficients.
    right: Vec<(usize, usize, u32)>,
}

pub(crate) struct PackedSpace {
    field: FieldContext,
    p: u32,
    width: usize,
    total: u64,
    mul: Vec<u8>,
    gens: Vec<PackedGen>,
}

impl PackedSpace {
    pub(crate) fn new(
        field: FieldContext,
        degree: usize,
        mode: EquivalenceMode,
        limits: &Limits,
    ) -> Result<Self> {
        let p = field.p();
        if p >= 256 {
            return Err(Error::ResourceLimit(format!(
                "orbit enumeration needs p < 256, got {p}"
            )));
        }
        if degree > MAX_DEGREE {
            return Err(Error::ResourceLimit(format!(
                "orbit enumeration supports degree <= {MAX_DEGREE}, got {degree}"
            )));
        }
        let width = degree + 1;
        let total = (p as u64)
            .checked_pow(2 * width as u32)
            .filter(|&t| t <= limits.max_pairs)
            .ok_or_else(|| {
                Error::ResourceLimit(format!(
                    "{p}^{} pairs exceeds the limit of {}",
                    2 * width,
                    limits.max_pairs
                ))
            })?;
        let mut mul = vec![0u8; (p * p) as usize];
        for a in 0..p {
            for b in 0..p {
                mul[(a * p + b) as usize] = field.mul(a, b) as u8;
            }
        }
        let mut gens = Vec::new();
        for m in mode.left.generators(field) {
            gens.push(PackedGen {
                witness: TransformWitness::left_only(m),
                left: Some(m.e),
                right: Vec::new(),
            });
        }
        for m in mode.right.generators(field) {
            gens.push(PackedGen {
                witness: TransformWitness::right_only(m),
                left: None,
                right: substitution_matrix(field, degree, &m),
            });
        }
        Ok(PackedSpace {
            field,
            p,
            width,
            total,
            mul,
            gens,
        })
    }

    pub(crate) fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.p + b) as usize] as u32
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn get(&self, state: u64, k: usize) -> u32 {
        ((state >> (8 * k)) & 0xff) as u32
    }

    pub(crate) fn decode(&self, mut index: u64) -> u64 {
        let p = self.p as u64;
        let mut state = 0u64;
        for k in (0..2 * self.width).rev() {
            state |= (index % p) << (8 * k);
            index /= p;
        }
        state
    }

    pub(crate) fn encode(&self, state: u64) -> u64 {
        (0..2 * self.width).fold(0, |acc, k| acc * self.p as u64 + self.get(state, k) as u64)
    }

    pub(crate) fn pack(&self, pair: &FormPair) -> u64 {
        pair.q1()
            .coeffs()
            .iter()
            .chain(pair.q2().coeffs())
            .enumerate()
            .fold(0, |acc, (k, &c)| acc | (c as u64) << (8 * k))
    }

    pub(crate) fn unpack(&self, state: u64) -> FormPair {
        let coeffs = |off: usize| (0..self.width).map(|i| self.get(state, off + i)).collect();
        FormPair::new(
            BinaryForm::from_residues(self.field, coeffs(0)),
            BinaryForm::from_residues(self.field, coeffs(self.width)),
        )
        .unwrap()
    }

    fn apply(&self, g: &PackedGen, state: u64) -> u64 {
        let w = self.width;
        let mut out = 0u64;
        if let Some(m) = g.left {
            for i in 0..w {
                let (a, b) = (self.get(state, i), self.get(state, w + i));
                let c1 = self.add(self.mul(m[0][0], a), self.mul(m[0][1], b));
                let c2 = self.add(self.mul(m[1][0], a), self.mul(m[1][1], b));
                out |= (c1 as u64) << (8 * i) | (c2 as u64) << (8 * (w + i));
            }
        } else {
            let mut buf = [0u32; 2 * (MAX_DEGREE + 1)];
            for &(o, i, c) in &g.right {
                buf[o] = self.add(buf[o], self.mul(c, self.get(state, i)));
                buf[w + o] = self.add(buf[w + o], self.mul(c, self.get(state, w + i)));
            }
            for (k, &c) in buf[..2 * w].iter().enumerate() {
                out |= (c as u64) << (8 * k);
            }
        }
        out
    }

    fn eval(&self, state: u64, off: usize, s: u32, t: u32) -> u32 {
        // Points are (0,1) or (1,t).
        if s == 0 {
            return self.get(state, off + self.width - 1);
        }
        let mut acc = 0;
        for i in (0..self.width).rev() {
            acc = self.add(self.mul(acc, t), self.get(state, off + i));
        }
        acc
    }

    /// Packed equivalent of [`FormPair::is_realizable`].
    pub(crate) fn is_realizable(&self, state: u64) -> bool {
        let w = self.width;
        let lead = (0..w).find(|&i| self.get(state, i) != 0);
        let Some(i) = lead else { return false };
        let lambda = self
            .field
            .div(self.get(state, w + i), self.get(state, i))
            .unwrap();
        if (0..w).all(|j| self.mul(lambda, self.get(state, j)) == self.get(state, w + j)) {
            return false;
        }
        let point_ok = |s, t| self.eval(state, 0, s, t) != 0 || self.eval(state, w, s, t) != 0;
        point_ok(0, 1) && (0..self.p).all(|t| point_ok(1, t))
    }
}

/// Coefficient matrix of `f -> f.substitute(m)` on forms of `degree`.
fn substitution_matrix(
    field: FieldContext,
    degree: usize,
    m: &Matrix2,
) -> Vec<(usize, usize, u32)> {
    let mut out = Vec::new();
    for i in 0..=degree {
        let image = BinaryForm::monomial(field, degree, i, 1).substitute_unchecked(m);
        for (o, &c) in image.coeffs().iter().enumerate() {
            if c != 0 {
                out.push((o, i, c));
            }
        }
    }
    out
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(n: u64) -> Self {
        Bitset(vec![0; n.div_ceil(64) as usize])
    }

    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Sets bit `i`, returning whether it was previously clear.
    fn insert(&mut self, i: u64) -> bool {
        let word = &mut self.0[(i / 64) as usize];
        let mask = 1 << (i % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }
}

/// Orbits of realizable pairs, each represented by its lexicographically
/// smallest member.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub representatives: Vec<FormPair>,
    pub sizes: Vec<u64>,
    pub realizable_pairs: u64,
}

impl OrbitSummary {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// Calls `visit(orbit_id, index)` for every realizable pair index.
fn for_each_orbit(space: &PackedSpace, mut visit: impl FnMut(usize, u64)) {
    let mut seen = Bitset::new(space.total());
    let mut stack = Vec::new();
    let mut orbit = 0;
    for idx in 0..space.total() {
        if seen.get(idx) {
            continue;
        }
        let state = space.decode(idx);
        if !space.is_realizable(state) {
            continue;
        }
        seen.insert(idx);
        visit(orbit, idx);
        stack.push(state);
        while let Some(s) = stack.pop() {
            for g in &space.gens {
                let next = space.apply(g, s);
                let ni = space.encode(next);
                if seen.insert(ni) {
                    visit(orbit, ni);
                    stack.push(next);
                }
            }
        }
        orbit += 1;
    }
}

pub fn orbit_summary(
    field: FieldContext,
    degree: usize,
    mode: EquivalenceMode,
    limits: &Limits,
) -> Result<OrbitSummary> {
    let space = PackedSpace::new(field, degree, mode, limits)?;
    let mut reps = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    for_each_orbit(&space, |orbit, idx| {
        if orbit == sizes.len() {
            reps.push(space.unpack(space.decode(idx)));
            sizes.push(0);
        }
        sizes[orbit] += 1;
    });
    Ok(OrbitSummary {
        representatives: reps,
        realizable_pairs: sizes.iter().sum(),
        sizes,
    })
}

/// Orbit label of every pair index, `None` for non-realizable pairs.
pub fn orbit_labels(
    field: FieldContext,
    degree: usize,
    mode: EquivalenceMode,
    limits: &Limits,
) -> Result<Vec<Option<u32>>> {
    let space = PackedSpace::new(field, degree, mode, limits)?;
    let mut labels = vec![None; space.total() as usize];
    for_each_orbit(&space, |orbit, idx| {
        labels[idx as usize] = Some(orbit as u32)
    });
    Ok(labels)
}

/// All realizable pairs of `degree`, in lexicographic coefficient order.
pub fn enumerate_realizable_pairs(
    field: FieldContext,
    degree: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = FormPair>> {
    let space = PackedSpace::new(field, degree, EquivalenceMode::FIXED_PI1, limits)?;
    Ok((0..space.total()).filter_map(move |idx| {
        let s = space.decode(idx);
        space.is_realizable(s).then(|| space.unpack(s))
    }))
}

type Parents = HashMap<u64, (u64, usize)>;

/// Breadth-first search from `start`, stopping early when `goal` is reached.
/// Returns the parent pointers of every state discovered.
fn bfs(space: &PackedSpace, start: u64, goal: Option<u64>) -> Parents {
    let mut parent = Parents::new();
    let mut queue = std::collections::VecDeque::from([start]);
    let mut seen = Bitset::new(space.total());
    seen.insert(space.encode(start));
    while let Some(s) = queue.pop_front() {
        if Some(s) == goal {
            break;
        }
        for (gi, g) in space.gens.iter().enumerate() {
            let next = space.apply(g, s);
            if seen.insert(space.encode(next)) {
                parent.insert(next, (s, gi));
                queue.push_back(next);
            }
        }
    }
    parent
}

fn path_witness(space: &PackedSpace, parent: &Parents, start: u64, end: u64) -> TransformWitness {
    let mut witness = TransformWitness::identity(space.field);
    let mut cur = end;
    while cur != start {
        let (prev, g) = parent[&cur];
        witness = space.gens[g].witness.then(&witness);
        cur = prev;
    }
    witness
}

/// Orbit search for a witness carrying `from` to `to`.
pub(crate) fn find_transform(
    from: &FormPair,
    to: &FormPair,
    mode: EquivalenceMode,
    limits: &Limits,
) -> Result<Option<TransformWitness>> {
    let space = PackedSpace::new(from.field(), from.degree(), mode, limits)?;
    let (start, goal) = (space.pack(from), space.pack(to));
    if start == goal {
        return Ok(Some(TransformWitness::identity(from.field())));
    }
    let parent = bfs(&space, start, Some(goal));
    Ok(parent
        .contains_key(&goal)
        .then(|| path_witness(&space, &parent, start, goal)))
}

/// The lexicographically smallest member of the orbit of `pair`, a witness
/// reaching it, and the orbit size.
pub fn orbit_representative(
    pair: &FormPair,
    mode: EquivalenceMode,
    limits: &Limits,
) -> Result<(FormPair, TransformWitness, u64)> {
    let space = PackedSpace::new(pair.field(), pair.degree(), mode, limits)?;
    let start = space.pack(pair);
    let parent = bfs(&space, start, None);
    let size = parent.len() as u64 + u64::from(!parent.contains_key(&start));
    let best = parent
        .keys()
        .copied()
        .chain([start])
        .min_by_key(|&s| space.encode(s))
        .unwrap();
    Ok((
        space.unpack(best),
        path_witness(&space, &parent, start, best),
        size,
    ))
}
