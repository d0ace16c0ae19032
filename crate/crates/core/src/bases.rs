//! Ordered bases of F_{q^n} over F_q, dual bases under the trace form, and
//! coordinates x = Σ u_i Tr(v_i x).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, Scalar};
use crate::linalg;

/// An ordered n-tuple of elements of F_{q^n}. `verified` is set only after a
/// rank check. Serializes as an array of element indices; deserialized
/// bases start unverified.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedBasis {
    elems: Vec<Elem>,
    verified: bool,
}

impl Serialize for OrderedBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderedBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<Elem>::deserialize(d).map(OrderedBasis::unverified)
    }
}

impl OrderedBasis {
    /// Checks linear independence and returns a verified basis.
    pub fn new(field: &Field, elems: Vec<Elem>) -> Result<Self> {
        if is_basis(field, &elems)? {
            Ok(OrderedBasis { elems, verified: true })
        } else {
            Err(Error::NotABasis)
        }
    }

    pub fn unverified(elems: Vec<Elem>) -> Self {
        OrderedBasis { elems, verified: false }
    }

    /// The polynomial basis 1, y, ..., y^{n-1}.
    pub fn standard(field: &Field) -> Self {
        let q = field.q();
        let elems = (0..field.n()).map(|i| Elem(q.pow(i))).collect();
        OrderedBasis { elems, verified: true }
    }

    /// Smallest-index basis whose last element is `last`.
    pub fn completing(field: &Field, last: Elem) -> Result<Self> {
        let n = field.n() as usize;
        let mut chosen: Vec<Elem> = Vec::with_capacity(n);
        for x in field.elements() {
            if chosen.len() + 1 == n {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(x);
            trial.push(last);
            if rank_of(field, &trial) == trial.len() {
                chosen.push(x);
            }
        }
        chosen.push(last);
        OrderedBasis::new(field, chosen)
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }
}

fn rank_of(field: &Field, elems: &[Elem]) -> usize {
    let rows: linalg::Matrix = elems.iter().map(|&x| field.components(x)).collect();
    linalg::rank(field.scalars(), &rows)
}

/// True iff `candidate` is F_q-linearly independent.
pub fn is_basis(field: &Field, candidate: &[Elem]) -> Result<bool> {
    let n = field.n() as usize;
    if candidate.len() != n {
        return Err(Error::WrongLength { expected: n, got: candidate.len() });
    }
    for x in candidate {
        field.elem(x.0 as u64)?;
    }
    Ok(rank_of(field, candidate) == n)
}

/// The basis v with Tr(u_i v_j) = δ_ij.
pub fn dual_basis(field: &Field, u: &OrderedBasis) -> Result<OrderedBasis> {
    if !u.verified {
        return Err(Error::Precondition("dual_basis needs a verified basis".into()));
    }
    let s = field.scalars();
    let gram: linalg::Matrix = u
        .elems
        .iter()
        .map(|&a| u.elems.iter().map(|&b| field.trace(field.mul(a, b))).collect())
        .collect();
    // v_j = Σ_k M_jk u_k with M = G^{-1}.
    let m = linalg::inverse(s, &gram).ok_or_else(|| Error::Internal("singular trace Gram matrix".into()))?;
    let elems = m
        .iter()
        .map(|row| {
            row.iter()
                .zip(&u.elems)
                .fold(Elem::ZERO, |acc, (&c, &b)| field.add(acc, field.scale(c, b)))
        })
        .collect();
    Ok(OrderedBasis { elems, verified: true })
}

/// A verified dual pair (u, v).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualPair {
    u: OrderedBasis,
    v: OrderedBasis,
}

impl DualPair {
    pub fn new(field: &Field, u: OrderedBasis) -> Result<Self> {
        let u = if u.verified { u } else { OrderedBasis::new(field, u.elems)? };
        let v = dual_basis(field, &u)?;
        Ok(DualPair { u, v })
    }

    pub fn standard(field: &Field) -> Self {
        Self::new(field, OrderedBasis::standard(field)).expect("polynomial basis is a basis")
    }

    /// Accepts an externally supplied pair after checking Tr(u_i v_j) = δ_ij.
    pub fn from_parts(field: &Field, u: OrderedBasis, v: OrderedBasis) -> Result<Self> {
        let n = field.n() as usize;
        if u.len() != n || v.len() != n {
            return Err(Error::WrongLength { expected: n, got: u.len().min(v.len()) });
        }
        for (i, &a) in u.elems.iter().enumerate() {
            for (j, &b) in v.elems.iter().enumerate() {
                let want = if i == j { Scalar::ONE } else { Scalar::ZERO };
                if field.trace(field.mul(a, b)) != want {
                    return Err(Error::NotDual);
                }
            }
        }
        Ok(DualPair {
            u: OrderedBasis { elems: u.elems, verified: true },
            v: OrderedBasis { elems: v.elems, verified: true },
        })
    }

    pub fn u(&self) -> &OrderedBasis {
        &self.u
    }

    pub fn v(&self) -> &OrderedBasis {
        &self.v
    }

    /// (Tr(v_1 x), ..., Tr(v_n x)).
    pub fn coordinates(&self, field: &Field, x: Elem) -> Vec<Scalar> {
        self.v.elems.iter().map(|&v| field.trace(field.mul(v, x))).collect()
    }

    pub fn reconstruct(&self, field: &Field, coords: &[Scalar]) -> Result<Elem> {
        reconstruct(field, coords, &self.u)
    }
}

/// Σ u_i · c_i.
pub fn reconstruct(field: &Field, coords: &[Scalar], u: &OrderedBasis) -> Result<Elem> {
    if coords.len() != u.len() {
        return Err(Error::WrongLength { expected: u.len(), got: coords.len() });
    }
    Ok(coords
        .iter()
        .zip(&u.elems)
        .fold(Elem::ZERO, |acc, (&c, &b)| field.add(acc, field.scale(c, b))))
}

/// Number of ordered bases: (q^n - 1)(q^n - q)...(q^n - q^{n-1}).
pub fn basis_count(q: u64, n: u32) -> u128 {
    let qn = (q as u128).pow(n);
    (0..n).map(|i| qn - (q as u128).pow(i)).product()
}

/// Every ordered basis, in lexicographic order of index tuples.
pub fn all_bases(field: &Field) -> Vec<OrderedBasis> {
    let n = field.n() as usize;
    let size = field.size();
    let mut out = Vec::new();
    let mut tuple = vec![0u32; n];
    // Extend a partial independent prefix only, so the scan stays near the
    // number of bases.
    fn rec(field: &Field, depth: usize, tuple: &mut Vec<u32>, size: u32, out: &mut Vec<OrderedBasis>) {
        if depth == tuple.len() {
            let elems: Vec<Elem> = tuple.iter().map(|&i| Elem(i)).collect();
            out.push(OrderedBasis { elems, verified: true });
            return;
        }
        for x in 1..size {
            tuple[depth] = x;
            let prefix: Vec<Elem> = tuple[..=depth].iter().map(|&i| Elem(i)).collect();
            if rank_of(field, &prefix) == depth + 1 {
                rec(field, depth + 1, tuple, size, out);
            }
        }
    }
    rec(field, 0, &mut tuple, size, &mut out);
    out
}
