//! Completing a balanced tuple of coordinate maps (g_1, ..., g_t) to a
//! permutation f = Σ_{i≤t} u_i g_i + Σ_{i>t} u_i f_i by assigning the tail
//! coordinates bijectively inside each fiber of (g_1, ..., g_t).

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bases::OrderedBasis;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Scalar};
use crate::funcspace::{next_permutation, Codomain, FuncTable};
use crate::report::factorial;

/// Fibers of (g_1, ..., g_t), each of size q^{n-t}.
#[derive(Debug, Clone)]
pub struct JointFibers {
    /// Fiber members in canonical order; fibers listed by tuple with g_1
    /// most significant.
    members: Vec<Vec<Elem>>,
    /// Σ_{i≤t} u_i g_i(x) per element.
    head: Vec<Elem>,
    /// Σ_{i>t} u_i b_i for each tail vector (b_{t+1}, ..., b_n), tail
    /// vectors in little-endian order.
    tails: Vec<Elem>,
}

impl JointFibers {
    /// Fails with `NotKToOne` unless every tuple has exactly q^{n-t} preimages.
    pub fn new(field: &Field, g: &[FuncTable], u: &OrderedBasis) -> Result<Self> {
        let n = field.n() as usize;
        let t = g.len();
        if t == 0 || t > n {
            return Err(Error::Precondition(format!("need 1 <= t <= {n}, got t = {t}")));
        }
        if u.len() != n {
            return Err(Error::WrongLength { expected: n, got: u.len() });
        }
        if !u.is_verified() {
            return Err(Error::NotABasis);
        }
        for gi in g {
            if gi.len() != field.size() as usize {
                return Err(Error::FieldMismatch("g_i does not match the field".into()));
            }
            if gi.codomain() != Codomain::Sub {
                return Err(Error::CodomainMismatch("g_i must map into F_q".into()));
            }
        }
        let q = field.q() as usize;
        let fiber_size = q.pow((n - t) as u32);
        let mut members: Vec<Vec<Elem>> = vec![Vec::new(); q.pow(t as u32)];
        for x in field.elements() {
            let key = g.iter().fold(0usize, |acc, gi| acc * q + gi.values()[x.index()] as usize);
            members[key].push(x);
        }
        if members.iter().any(|b| b.len() != fiber_size) {
            return Err(Error::NotKToOne(fiber_size as u64));
        }
        let head = field
            .elements()
            .map(|x| {
                g.iter()
                    .zip(u.elems())
                    .fold(Elem::ZERO, |acc, (gi, &ui)| field.add(acc, field.scale(gi.scalar_at(x), ui)))
            })
            .collect();
        let tails = (0..fiber_size)
            .map(|mut j| {
                u.elems()[t..].iter().fold(Elem::ZERO, |acc, &ui| {
                    let b = Scalar((j % q) as u32);
                    j /= q;
                    field.add(acc, field.scale(b, ui))
                })
            })
            .collect();
        Ok(JointFibers { members, head, tails })
    }

    pub fn fiber_size(&self) -> usize {
        self.tails.len()
    }

    pub fn fiber_count(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Vec<Elem>] {
        &self.members
    }

    fn identity_assignment(&self) -> Vec<Vec<usize>> {
        vec![(0..self.fiber_size()).collect(); self.members.len()]
    }

    /// The k-th member of fiber j goes to head + tails[assign[j][k]].
    fn build(&self, field: &Field, assign: &[Vec<usize>]) -> FuncTable {
        let mut values = vec![0u32; self.head.len()];
        for (fiber, perm) in self.members.iter().zip(assign) {
            for (&x, &k) in fiber.iter().zip(perm) {
                values[x.index()] = field.add(self.head[x.index()], self.tails[k]).0;
            }
        }
        FuncTable::from_values_unchecked(Codomain::Ext, values)
    }
}

/// The deterministic extension: inside each fiber, members and tail vectors
/// are paired in canonical order.
pub fn extend_to_pp(field: &Field, g: &[FuncTable], u: &OrderedBasis) -> Result<FuncTable> {
    let fibers = JointFibers::new(field, g, u)?;
    Ok(fibers.build(field, &fibers.identity_assignment()))
}

/// (q^{n-t}!)^{q^t}, the number of extensions of a balanced t-tuple.
pub fn extension_count(q: u64, n: u32, t: u32) -> u128 {
    factorial(q.pow(n - t)).pow(q.pow(t) as u32)
}

/// Calls `visit` on every extension (all per-fiber bijections, odometer
/// order) and returns how many were visited. Fails if there are more than
/// `limit`.
pub fn for_each_extension(
    field: &Field,
    fibers: &JointFibers,
    limit: u128,
    mut visit: impl FnMut(&FuncTable),
) -> Result<u128> {
    let total = factorial(fibers.fiber_size() as u64)
        .checked_pow(fibers.members.len() as u32)
        .unwrap_or(u128::MAX);
    if total > limit {
        return Err(Error::SearchTooLarge(total));
    }
    let mut assign = fibers.identity_assignment();
    let mut count = 0u128;
    loop {
        visit(&fibers.build(field, &assign));
        count += 1;
        // next_permutation resets a fiber to sorted order when it wraps.
        let wrapped = assign.iter_mut().all(|perm| !next_permutation(perm));
        if wrapped {
            break;
        }
    }
    Ok(count)
}

/// One extension chosen uniformly at random.
pub fn random_extension<R: Rng>(field: &Field, fibers: &JointFibers, rng: &mut R) -> FuncTable {
    let mut assign = fibers.identity_assignment();
    for perm in assign.iter_mut() {
        perm.shuffle(rng);
    }
    fibers.build(field, &assign)
}
