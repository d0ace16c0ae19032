//! Structure of maps along a dual pair: f(x) = Σ u_i f_i(x) with
//! f_i(x) = Tr(v_i f(x)), and the permutation criteria phrased in terms of
//! the coordinate maps f_i.

use std::collections::BTreeSet;

use serde_json::json;

use crate::bases::{is_basis, DualPair};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Scalar};
use crate::funcspace::{fibers_are_k_to_1, image_size, is_permutation, FuncTable};
use crate::report::Report;

mod extend;
mod linear;
mod theorem12;

pub use extend::{extend_to_pp, extension_count, for_each_extension, random_extension, JointFibers};
pub use linear::{
    linear_pp_census, linear_pp_from_bases, monomial_family, LinearOutcome, MonomialConditions,
    MonomialOutcome,
};
pub use theorem12::{
    theorem12_build, theorem12_census, theorem12_inverse, theorem12_sweep, SweepReport,
    Theorem12Conditions, Theorem12Instance, Theorem12Outcome,
};

/// Coordinate maps of `f` along a dual pair.
#[derive(Debug, Clone)]
pub struct CoordinateDecomposition {
    f: FuncTable,
    pair: DualPair,
    coords: Vec<FuncTable>,
    images: Vec<BTreeSet<Scalar>>,
}

impl CoordinateDecomposition {
    pub fn source(&self) -> &FuncTable {
        &self.f
    }

    pub fn pair(&self) -> &DualPair {
        &self.pair
    }

    /// f_1, ..., f_n as maps into F_q.
    pub fn coords(&self) -> &[FuncTable] {
        &self.coords
    }

    /// A_i = image of f_i.
    pub fn images(&self) -> &[BTreeSet<Scalar>] {
        &self.images
    }

    /// Index of (f_1(x), ..., f_t(x)) with f_1 most significant.
    fn tuple_key(&self, q: u64, t: usize, x: Elem) -> u64 {
        self.coords[..t].iter().fold(0u64, |acc, c| acc * q + c.values()[x.index()] as u64)
    }
}

pub fn decompose(field: &Field, f: &FuncTable, pair: &DualPair) -> Result<CoordinateDecomposition> {
    if f.len() != field.size() as usize {
        return Err(Error::FieldMismatch("map does not match the field".into()));
    }
    if f.codomain() != crate::funcspace::Codomain::Ext {
        return Err(Error::CodomainMismatch("decompose needs a map into F_q^n".into()));
    }
    let coords: Vec<FuncTable> = pair
        .v()
        .elems()
        .iter()
        .map(|&v| FuncTable::from_scalar_fn(field, |x| field.trace(field.mul(v, f.at(x)))))
        .collect();
    let images = coords.iter().map(|c| c.values().iter().map(|&s| Scalar(s)).collect()).collect();
    let d = CoordinateDecomposition { f: f.clone(), pair: pair.clone(), coords, images };
    for x in field.elements() {
        let c: Vec<Scalar> = d.coords.iter().map(|t| t.scalar_at(x)).collect();
        if pair.reconstruct(field, &c)? != f.at(x) {
            return Err(Error::Internal("reconstruction identity failed".into()));
        }
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageBound {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

/// ♯Im f ≤ Π ♯A_i.
pub fn image_bound(field: &Field, d: &CoordinateDecomposition) -> Result<ImageBound> {
    let lhs = image_size(field, &d.f)? as u64;
    let rhs = d.images.iter().map(|a| a.len() as u64).product();
    Ok(ImageBound { lhs, rhs, holds: lhs <= rhs })
}

/// Every tuple (a_1, ..., a_n) ∈ F_q^n has exactly one x with f_i(x) = a_i
/// for all i.
pub fn fiber_criterion(field: &Field, d: &CoordinateDecomposition) -> bool {
    let q = field.q() as u64;
    let n = d.coords.len();
    let mut counts = vec![0u32; q.pow(n as u32) as usize];
    for x in field.elements() {
        counts[d.tuple_key(q, n, x) as usize] += 1;
    }
    counts.iter().all(|&c| c == 1)
}

/// Whether (f_1, ..., f_t) is q^{n-t}-to-1 into F_q^t.
pub fn projection_profile(field: &Field, d: &CoordinateDecomposition, t: usize) -> Result<bool> {
    let n = d.coords.len();
    if t == 0 || t > n {
        return Err(Error::Precondition(format!("t = {t} outside 1..={n}")));
    }
    let q = field.q() as u64;
    let mut counts = vec![0u64; q.pow(t as u32) as usize];
    for x in field.elements() {
        counts[d.tuple_key(q, t, x) as usize] += 1;
    }
    fibers_are_k_to_1(counts, field.size() as u64, q.pow((n - t) as u32))
}

/// A_i = F_q for every i.
pub fn images_are_full(field: &Field, d: &CoordinateDecomposition) -> bool {
    d.images.iter().all(|a| a.len() == field.q() as usize)
}

#[derive(Debug, Clone)]
pub struct Recombination {
    pub table: FuncTable,
    pub is_pp: bool,
    pub b_is_basis: bool,
    pub falsification: Option<Report>,
}

/// g(x) = Σ b_i f_i(x) for a permutation f; g is a PP iff b is a basis.
pub fn recombine(field: &Field, d: &CoordinateDecomposition, b: &[Elem]) -> Result<Recombination> {
    if !is_permutation(field, &d.f)? {
        return Err(Error::NotPermutation);
    }
    let b_is_basis = is_basis(field, b)?;
    let table = FuncTable::from_fn(field, |x| {
        d.coords
            .iter()
            .zip(b)
            .fold(Elem::ZERO, |acc, (c, &bi)| field.add(acc, field.scale(c.scalar_at(x), bi)))
    });
    let is_pp = is_permutation(field, &table)?;
    let falsification = (is_pp != b_is_basis).then(|| {
        Report::new("recombination is a PP iff b is a basis", b_is_basis, is_pp)
            .with_witness(json!({ "b": b }))
    });
    Ok(Recombination { table, is_pp, b_is_basis, falsification })
}

/// The map F_q^n → F_{q^n}, (c_1, ..., c_n) ↦ f^{-1}(Σ u_i c_i), which
/// satisfies F(f_1(x), ..., f_n(x)) = x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateInverse {
    q: u32,
    n: usize,
    values: Vec<u32>,
}

impl CoordinateInverse {
    /// Values indexed by tuples in lexicographic order (c_1 most significant).
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn eval(&self, coords: &[Scalar]) -> Result<Elem> {
        if coords.len() != self.n {
            return Err(Error::WrongLength { expected: self.n, got: coords.len() });
        }
        let key = coords.iter().fold(0usize, |acc, c| acc * self.q as usize + c.index());
        Ok(Elem(self.values[key]))
    }
}

pub fn inverse_coordinate_map(field: &Field, f: &FuncTable, pair: &DualPair) -> Result<CoordinateInverse> {
    let finv = crate::funcspace::invert_table(field, f)?;
    let q = field.q();
    let n = field.n() as usize;
    let total = (q as usize).pow(n as u32);
    let values = (0..total)
        .map(|mut key| {
            let mut c = vec![Scalar::ZERO; n];
            for slot in c.iter_mut().rev() {
                *slot = Scalar((key % q as usize) as u32);
                key /= q as usize;
            }
            pair.reconstruct(field, &c).map(|y| finv.at(y).0)
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(CoordinateInverse { q, n, values })
}
