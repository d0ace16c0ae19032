//! Total maps on F_{q^n} as dense tables indexed by canonical element order,
//! plus the sparse polynomial form used for I/O and worked examples.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, Scalar};

/// Additivity is checked on all pairs up to this field size.
const EXHAUSTIVE_PAIR_LIMIT: u32 = 256;
/// Homogeneity is checked for every scalar while q · q^n stays below this.
const EXHAUSTIVE_SCALE_LIMIT: u64 = 1 << 22;
const LINEARITY_SEED: u64 = 0x5eed_11ea;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Codomain {
    /// F_{q^n}
    #[serde(rename = "qn")]
    Ext,
    /// F_q
    #[serde(rename = "q")]
    Sub,
}

/// A map F_{q^n} → codomain, one entry per element in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FuncTable {
    codomain: Codomain,
    values: Vec<u32>,
}

impl FuncTable {
    /// Validates length and entry range against `field`.
    pub fn new(field: &Field, codomain: Codomain, values: Vec<u32>) -> Result<Self> {
        let size = field.size() as usize;
        if values.len() != size {
            return Err(Error::WrongLength { expected: size, got: values.len() });
        }
        let bound = match codomain {
            Codomain::Ext => field.size(),
            Codomain::Sub => field.q(),
        };
        if let Some(&bad) = values.iter().find(|&&v| v >= bound) {
            return Err(Error::OutOfRange { index: bad as u64, size: bound as u64 });
        }
        Ok(FuncTable { codomain, values })
    }

    pub(crate) fn from_values_unchecked(codomain: Codomain, values: Vec<u32>) -> Self {
        FuncTable { codomain, values }
    }

    pub fn from_fn(field: &Field, f: impl Fn(Elem) -> Elem) -> Self {
        FuncTable { codomain: Codomain::Ext, values: field.elements().map(|x| f(x).0).collect() }
    }

    pub fn from_scalar_fn(field: &Field, f: impl Fn(Elem) -> Scalar) -> Self {
        FuncTable { codomain: Codomain::Sub, values: field.elements().map(|x| f(x).0).collect() }
    }

    pub fn identity(field: &Field) -> Self {
        Self::from_fn(field, |x| x)
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::from_fn(field, |_| c)
    }

    /// x ↦ Tr(x).
    pub fn trace(field: &Field) -> Self {
        Self::from_scalar_fn(field, |x| field.trace(x))
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, x: Elem) -> Elem {
        Elem(self.values[x.index()])
    }

    #[inline]
    pub fn scalar_at(&self, x: Elem) -> Scalar {
        Scalar(self.values[x.index()])
    }

    fn check_domain(&self, field: &Field) -> Result<()> {
        if self.values.len() != field.size() as usize {
            return Err(Error::FieldMismatch(format!(
                "table has {} entries, field has {}",
                self.values.len(),
                field.size()
            )));
        }
        Ok(())
    }

    fn require_ext(&self, what: &str) -> Result<()> {
        if self.codomain != Codomain::Ext {
            return Err(Error::CodomainMismatch(format!("{what} needs a map into F_q^n")));
        }
        Ok(())
    }
}

/// A map F_q → F_q as a length-q table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScalarMap(pub Vec<u32>);

impl ScalarMap {
    pub fn identity(q: u32) -> Self {
        ScalarMap((0..q).collect())
    }

    #[inline]
    pub fn at(&self, s: Scalar) -> Scalar {
        Scalar(self.0[s.index()])
    }

    pub fn is_permutation(&self) -> bool {
        distinct_all(&self.0, self.0.len())
    }

    pub fn inverse(&self) -> Result<ScalarMap> {
        if !self.is_permutation() {
            return Err(Error::NotPermutation);
        }
        let mut inv = vec![0u32; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Ok(ScalarMap(inv))
    }

    /// All q^q maps F_q → F_q in odometer order (entry 0 fastest).
    pub fn all(q: u32) -> Vec<ScalarMap> {
        let total = (q as usize).pow(q);
        (0..total)
            .map(|mut k| {
                ScalarMap(
                    (0..q)
                        .map(|_| {
                            let d = (k % q as usize) as u32;
                            k /= q as usize;
                            d
                        })
                        .collect(),
                )
            })
            .collect()
    }

    /// All q! permutations of F_q in lexicographic order.
    pub fn permutations(q: u32) -> Vec<ScalarMap> {
        let mut cur: Vec<u32> = (0..q).collect();
        let mut out = vec![ScalarMap(cur.clone())];
        while next_permutation(&mut cur) {
            out.push(ScalarMap(cur.clone()));
        }
        out
    }
}

/// Advances to the next lexicographic permutation; false after the last.
pub(crate) fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn distinct_all(values: &[u32], bound: usize) -> bool {
    let mut seen = vec![false; bound];
    values.iter().all(|&v| {
        let v = v as usize;
        v < bound && !std::mem::replace(&mut seen[v], true)
    })
}

/// Sparse polynomial Σ c·x^k over F_{q^n}: sorted exponents, no zero terms.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PolyRep {
    terms: Vec<(Elem, u64)>,
}

/// x^k as a map: k > 0 reduces to 1 + (k-1) mod (q^n - 1); 0 stays 0.
pub fn reduce_exponent(field: &Field, k: u64) -> u64 {
    if k == 0 {
        0
    } else {
        1 + (k - 1) % (field.size() as u64 - 1)
    }
}

impl PolyRep {
    /// Collects terms, merging equal exponents and dropping zeros. Exponents
    /// are kept as given.
    pub fn new(field: &Field, terms: impl IntoIterator<Item = (Elem, u64)>) -> Self {
        let mut acc: BTreeMap<u64, Elem> = BTreeMap::new();
        for (c, k) in terms {
            let slot = acc.entry(k).or_insert(Elem::ZERO);
            *slot = field.add(*slot, c);
        }
        PolyRep { terms: acc.into_iter().filter(|(_, c)| *c != Elem::ZERO).map(|(k, c)| (c, k)).collect() }
    }

    /// Integer coefficients mapped into the prime field.
    pub fn from_ints(field: &Field, terms: &[(i64, u64)]) -> Self {
        Self::new(field, terms.iter().map(|&(c, k)| (field.from_int(c), k)))
    }

    pub fn x() -> Self {
        PolyRep { terms: vec![(Elem::ONE, 1)] }
    }

    pub fn terms(&self) -> &[(Elem, u64)] {
        &self.terms
    }

    /// Same map with every exponent below q^n.
    pub fn reduced(&self, field: &Field) -> Self {
        Self::new(field, self.terms.iter().map(|&(c, k)| (c, reduce_exponent(field, k))))
    }

    pub fn eval(&self, field: &Field, x: Elem) -> Elem {
        self.terms
            .iter()
            .fold(Elem::ZERO, |acc, &(c, k)| field.add(acc, field.mul(c, field.pow(x, k))))
    }

    pub fn add(&self, field: &Field, other: &PolyRep) -> Self {
        Self::new(field, self.terms.iter().chain(&other.terms).copied())
    }

    pub fn scale(&self, field: &Field, c: Elem) -> Self {
        Self::new(field, self.terms.iter().map(|&(a, k)| (field.mul(a, c), k)))
    }

    /// Product as maps; exponents are reduced.
    pub fn mul(&self, field: &Field, other: &PolyRep) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(a, i) in &self.terms {
            for &(b, j) in &other.terms {
                out.push((field.mul(a, b), reduce_exponent(field, i + j)));
            }
        }
        Self::new(field, out)
    }

    pub fn pow(&self, field: &Field, mut e: u64) -> Self {
        let mut result = PolyRep { terms: vec![(Elem::ONE, 0)] };
        let mut base = self.reduced(field);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(field, &base);
            }
            base = base.mul(field, &base);
            e >>= 1;
        }
        result
    }
}

pub fn eval_poly(field: &Field, p: &PolyRep) -> Result<FuncTable> {
    for &(c, _) in &p.terms {
        field.elem(c.0 as u64)?;
    }
    Ok(FuncTable::from_fn(field, |x| p.eval(field, x)))
}

/// The unique polynomial of degree < q^n with the given values:
/// c_0 = t(0) and c_k = -Σ_{a≠0} t(a)·a^{-k} for k ≥ 1, with t(0) also
/// contributing to c_{q^n-1}.
pub fn interpolate(field: &Field, t: &FuncTable) -> Result<PolyRep> {
    t.check_domain(field)?;
    t.require_ext("interpolate")?;
    let size = field.size() as u64;
    let mut terms = Vec::new();
    terms.push((t.at(Elem::ZERO), 0));
    for k in 1..size {
        let mut sum = Elem::ZERO;
        for a in field.elements().skip(1) {
            let v = t.at(a);
            if v != Elem::ZERO {
                sum = field.add(sum, field.mul(v, field.pow(a, size - 1 - k)));
            }
        }
        if k == size - 1 {
            sum = field.add(sum, t.at(Elem::ZERO));
        }
        terms.push((field.neg(sum), k));
    }
    Ok(PolyRep::new(field, terms))
}

pub fn is_permutation(field: &Field, t: &FuncTable) -> Result<bool> {
    t.check_domain(field)?;
    t.require_ext("is_permutation")?;
    Ok(distinct_all(&t.values, field.size() as usize))
}

fn codomain_size(field: &Field, t: &FuncTable) -> usize {
    match t.codomain {
        Codomain::Ext => field.size() as usize,
        Codomain::Sub => field.q() as usize,
    }
}

pub fn fiber_sizes(field: &Field, t: &FuncTable) -> Vec<u64> {
    let mut counts = vec![0u64; codomain_size(field, t)];
    for &v in &t.values {
        counts[v as usize] += 1;
    }
    counts
}

/// The k-to-1 test on a histogram of fiber sizes over a domain of size
/// `domain`: if k | domain every fiber has k or 0 elements; otherwise all
/// but one attained value has k preimages and the exception has domain mod k.
pub fn fibers_are_k_to_1(fibers: impl IntoIterator<Item = u64>, domain: u64, k: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let rest = domain % k;
    let mut exceptions = 0;
    for size in fibers {
        if size == 0 || size == k {
            continue;
        }
        if rest != 0 && size == rest {
            exceptions += 1;
        } else {
            return Ok(false);
        }
    }
    Ok(if rest == 0 { exceptions == 0 } else { exceptions == 1 })
}

pub fn is_k_to_1(field: &Field, t: &FuncTable, k: u64) -> Result<bool> {
    t.check_domain(field)?;
    fibers_are_k_to_1(fiber_sizes(field, t), field.size() as u64, k)
}

pub fn image_size(field: &Field, t: &FuncTable) -> Result<usize> {
    t.check_domain(field)?;
    Ok(fiber_sizes(field, t).iter().filter(|&&c| c > 0).count())
}

/// Semantic F_q-linearity: additivity and F_q-homogeneity.
pub fn is_linearized(field: &Field, t: &FuncTable) -> Result<bool> {
    t.check_domain(field)?;
    t.require_ext("is_linearized")?;
    if t.at(Elem::ZERO) != Elem::ZERO {
        return Ok(false);
    }
    let size = field.size();
    let additive_at = |x: Elem, y: Elem| t.at(field.add(x, y)) == field.add(t.at(x), t.at(y));
    if size <= EXHAUSTIVE_PAIR_LIMIT {
        for x in field.elements() {
            for y in field.elements() {
                if !additive_at(x, y) {
                    return Ok(false);
                }
            }
        }
    } else {
        // Random pairs, then the exact test against the images of the F_p basis
        // p^0, p^1, ... (an additive map is determined by those images).
        let mut rng = ChaCha8Rng::seed_from_u64(LINEARITY_SEED);
        for _ in 0..10 * size as u64 {
            let x = Elem(rng.gen_range(0..size));
            let y = Elem(rng.gen_range(0..size));
            if !additive_at(x, y) {
                return Ok(false);
            }
        }
        let p = field.characteristic();
        let digits = (field.e() * field.n()) as usize;
        let gens: Vec<Elem> = (0..digits).map(|i| t.at(Elem(p.pow(i as u32)))).collect();
        for x in field.elements() {
            let mut rest = x.0;
            let mut acc = Elem::ZERO;
            for g in &gens {
                let d = rest % p;
                rest /= p;
                for _ in 0..d {
                    acc = field.add(acc, *g);
                }
            }
            if acc != t.at(x) {
                return Ok(false);
            }
        }
    }
    let q = field.q();
    let scalars: Vec<Scalar> = if q as u64 * size as u64 <= EXHAUSTIVE_SCALE_LIMIT {
        field.scalars().elements().collect()
    } else {
        // Additivity plus homogeneity under a generator of F_q^* covers F_q.
        vec![field.project(field.pow(field.generator(), ((size - 1) / (q - 1)) as u64))?]
    };
    for c in scalars {
        for x in field.elements() {
            if t.at(field.scale(c, x)) != field.scale(c, t.at(x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// outer ∘ inner.
pub fn compose(field: &Field, outer: &FuncTable, inner: &FuncTable) -> Result<FuncTable> {
    outer.check_domain(field)?;
    inner.check_domain(field)?;
    inner.require_ext("compose (inner)")?;
    Ok(FuncTable {
        codomain: outer.codomain,
        values: inner.values.iter().map(|&v| outer.values[v as usize]).collect(),
    })
}

pub fn invert_table(field: &Field, t: &FuncTable) -> Result<FuncTable> {
    if !is_permutation(field, t)? {
        return Err(Error::NotPermutation);
    }
    let mut inv = vec![0u32; t.values.len()];
    for (i, &v) in t.values.iter().enumerate() {
        inv[v as usize] = i as u32;
    }
    Ok(FuncTable { codomain: Codomain::Ext, values: inv })
}
