//! The field tower F_p ⊆ F_q ⊆ F_{q^n}.
//!
//! F_q is F_p[x]/(m_q) and F_{q^n} is F_q[y]/(m_qn), where each modulus is
//! the monic irreducible with the smallest little-endian coefficient index.
//! Every element is identified with the base-p integer of its flattened
//! coefficient vector (constant term least significant), so index 0 is zero
//! and index 1 is one at both levels, and F_q sits inside F_{q^n} as the
//! indices below q.
//!
//! Multiplication goes through discrete log tables built once from a
//! primitive element; addition is digit-wise mod p.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, CoeffField, PrimeField};

/// Default bound on q^n. Dense tables over the big field stay below a few MB.
pub const DEFAULT_SIZE_CAP: u64 = 1 << 20;

/// Fields up to this size get a dense addition table.
const DENSE_ADD_LIMIT: u32 = 256;

/// An element of F_{q^n}, by canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

/// An element of F_q, by canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Scalar(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// (p, e) with q = p^e, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut e = 0u32;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p as u32, e))
}

pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Digit-wise addition of base-p integers with a fixed digit count.
#[derive(Debug, Clone)]
struct Digits {
    p: u32,
    pows: Vec<u32>,
    dense: Option<Vec<u32>>,
    size: u32,
}

impl Digits {
    fn new(p: u32, count: usize) -> Self {
        let pows: Vec<u32> = (0..count).map(|i| p.pow(i as u32)).collect();
        let size = p.pow(count as u32);
        let mut d = Digits { p, pows, dense: None, size };
        if p != 2 && size <= DENSE_ADD_LIMIT {
            let mut table = vec![0u32; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    table[(a * size + b) as usize] = d.add_slow(a, b);
                }
            }
            d.dense = Some(table);
        }
        d
    }

    fn add_slow(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        for &pw in &self.pows {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * pw;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.dense {
            Some(t) => t[(a * self.size + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    fn neg(&self, mut a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut out = 0;
        for &pw in &self.pows {
            let d = a % self.p;
            if d != 0 {
                out += (self.p - d) * pw;
            }
            a /= self.p;
        }
        out
    }

    fn to_digits(&self, mut a: u32) -> Vec<u32> {
        self.pows
            .iter()
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().zip(&self.pows).map(|(d, pw)| d * pw).sum()
    }
}

#[derive(Debug, Clone)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl LogTables {
    /// Finds the smallest primitive element by index and tabulates its powers.
    fn build(size: u32, mul: impl Fn(u32, u32) -> u32) -> Result<Self> {
        let order = (size - 1) as u64;
        let pow = |g: u32, mut e: u64| {
            let mut r = 1u32;
            let mut b = g;
            while e > 0 {
                if e & 1 == 1 {
                    r = mul(r, b);
                }
                b = mul(b, b);
                e >>= 1;
            }
            r
        };
        let factors = prime_factors(order);
        let g = (1..size)
            .find(|&g| factors.iter().all(|&r| pow(g, order / r) != 1))
            .ok_or_else(|| Error::Internal("no primitive element".into()))?;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = 1u32;
        for k in 0..order as u32 {
            if log[cur as usize] != u32::MAX {
                return Err(Error::Internal("modulus is not irreducible".into()));
            }
            exp.push(cur);
            log[cur as usize] = k;
            cur = mul(cur, g);
        }
        if cur != 1 {
            return Err(Error::Internal("primitive element has wrong order".into()));
        }
        Ok(LogTables { exp, log })
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.exp.len();
        let s = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[if s >= order { s - order } else { s }]
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.exp.len();
        let l = self.log[a as usize] as usize;
        Some(self.exp[(order - l) % order])
    }

    fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.exp.len() as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (k % order)) % order) as usize]
    }
}

/// F_q = F_p[x]/(m_q).
#[derive(Debug, Clone)]
pub struct ScalarField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    digits: Digits,
    logs: LogTables,
}

impl ScalarField {
    fn new(p: u32, e: u32) -> Result<Self> {
        let prime = PrimeField { p };
        let modulus = poly::smallest_monic_irreducible(&prime, e as usize)
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {e} over F_{p}")))?;
        let q = p.pow(e);
        let digits = Digits::new(p, e as usize);
        let slow_mul = |a: u32, b: u32| {
            let r = poly::mulmod(&prime, &digits.to_digits(a), &digits.to_digits(b), &modulus);
            digits.from_digits(&r)
        };
        let logs = LogTables::build(q, slow_mul)?;
        Ok(ScalarField { p, e, q, modulus, digits, logs })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    /// Monic modulus over F_p, little-endian.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.q).map(Scalar)
    }

    pub fn scalar(&self, index: u64) -> Result<Scalar> {
        if index < self.q as u64 {
            Ok(Scalar(index as u32))
        } else {
            Err(Error::OutOfRange { index, size: self.q as u64 })
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Scalar {
        Scalar(v.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.digits.add(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.digits.neg(a.0))
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.logs.mul(a.0, b.0))
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        self.logs.inv(a.0).map(Scalar).ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Scalar, k: u64) -> Scalar {
        Scalar(self.logs.pow(a.0, k))
    }
}

impl CoeffField for ScalarField {
    fn order(&self) -> u32 {
        self.q
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        self.digits.add(a, b)
    }
    fn neg(&self, a: u32) -> u32 {
        self.digits.neg(a)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.logs.mul(a, b)
    }
    fn inv(&self, a: u32) -> u32 {
        self.logs.inv(a).expect("inverse of zero")
    }
}

/// Arithmetic operations selectable at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

/// The tower F_p ⊆ F_q ⊆ F_{q^n}, with lookup tables for F_{q^n}.
#[derive(Debug, Clone)]
pub struct Field {
    scalars: ScalarField,
    n: u32,
    size: u32,
    modulus: Vec<u32>,
    digits: Digits,
    logs: LogTables,
    trace: Vec<u32>,
}

impl Field {
    /// Builds the tower with the default size cap.
    pub fn new(p: u32, e: u32, n: u32) -> Result<Self> {
        Self::with_cap(p, e, n, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(p: u32, e: u32, n: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || n == 0 {
            return Err(Error::ZeroDegree);
        }
        let size = (p as u128).checked_pow(e.checked_mul(n).ok_or(Error::TooLarge { size: u128::MAX, cap })?);
        let size = match size {
            Some(s) if s <= cap as u128 && s <= u32::MAX as u128 => s as u32,
            Some(s) => return Err(Error::TooLarge { size: s, cap }),
            None => return Err(Error::TooLarge { size: u128::MAX, cap }),
        };
        let scalars = ScalarField::new(p, e)?;
        let modulus = poly::smallest_monic_irreducible(&scalars, n as usize)
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {n} over F_q")))?;
        let digits = Digits::new(p, (e * n) as usize);
        let q = scalars.q;
        let split = |a: u32| -> Vec<u32> {
            let mut a = a;
            (0..n)
                .map(|_| {
                    let d = a % q;
                    a /= q;
                    d
                })
                .collect()
        };
        let join = |c: &[u32]| -> u32 { c.iter().rev().fold(0u32, |acc, &d| acc * q + d) };
        let slow_mul = |a: u32, b: u32| join(&poly::mulmod(&scalars, &split(a), &split(b), &modulus));
        let logs = LogTables::build(size, slow_mul)?;
        let mut field = Field { scalars, n, size, modulus, digits, logs, trace: Vec::new() };
        field.trace = field.build_trace()?;
        Ok(field)
    }

    fn build_trace(&self) -> Result<Vec<u32>> {
        let q = self.scalars.q as u64;
        (0..self.size)
            .map(|x| {
                let mut term = x;
                let mut acc = x;
                for _ in 1..self.n {
                    term = self.logs.pow(term, q);
                    acc = self.digits.add(acc, term);
                }
                // Tr(x) is fixed by Frobenius and so must be a constant.
                if acc >= self.scalars.q || self.logs.pow(acc, q) != acc {
                    return Err(Error::Internal(format!("trace of {x} left F_q")));
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn characteristic(&self) -> u32 {
        self.scalars.p
    }

    /// Degree of F_q over F_p.
    pub fn e(&self) -> u32 {
        self.scalars.e
    }

    /// Degree of F_{q^n} over F_q.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.scalars.q
    }

    /// q^n.
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn scalars(&self) -> &ScalarField {
        &self.scalars
    }

    /// Monic modulus of F_{q^n} over F_q, coefficients as F_q indices.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element underlying the log tables.
    pub fn generator(&self) -> Elem {
        Elem(if self.size == 2 { 1 } else { self.logs.exp[1] })
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(Elem)
    }

    pub fn elem(&self, index: u64) -> Result<Elem> {
        if index < self.size as u64 {
            Ok(Elem(index as u32))
        } else {
            Err(Error::OutOfRange { index, size: self.size as u64 })
        }
    }

    pub fn from_int(&self, v: i64) -> Elem {
        self.embed(self.scalars.from_int(v))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.digits.add(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.digits.neg(a.0))
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.logs.mul(a.0, b.0))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        self.logs.inv(a.0).map(Elem).ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    #[inline]
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        Elem(self.logs.pow(a.0, k))
    }

    /// x ↦ x^q.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.scalars.q as u64)
    }

    pub fn arith(&self, a: Elem, b: Elem, op: ArithOp) -> Result<Elem> {
        self.elem(a.0 as u64)?;
        self.elem(b.0 as u64)?;
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Neg => self.neg(a),
            ArithOp::Inv => self.inv(a)?,
            ArithOp::Pow(k) => self.pow(a, k),
        })
    }

    /// Tr(x) = x + x^q + ... + x^{q^{n-1}}.
    #[inline]
    pub fn trace(&self, a: Elem) -> Scalar {
        Scalar(self.trace[a.index()])
    }

    #[inline]
    pub fn embed(&self, a: Scalar) -> Elem {
        Elem(a.0)
    }

    pub fn project(&self, a: Elem) -> Result<Scalar> {
        if a.0 < self.scalars.q && self.frobenius(a) == a {
            Ok(Scalar(a.0))
        } else {
            Err(Error::NotInSubfield(a.0))
        }
    }

    /// c · x for c in F_q.
    #[inline]
    pub fn scale(&self, c: Scalar, x: Elem) -> Elem {
        self.mul(self.embed(c), x)
    }

    /// Coordinates of `a` in the polynomial basis 1, y, ..., y^{n-1} over F_q.
    pub fn components(&self, a: Elem) -> Vec<Scalar> {
        let q = self.scalars.q;
        let mut a = a.0;
        (0..self.n)
            .map(|_| {
                let d = a % q;
                a /= q;
                Scalar(d)
            })
            .collect()
    }

    pub fn from_components(&self, c: &[Scalar]) -> Result<Elem> {
        if c.len() != self.n as usize {
            return Err(Error::WrongLength { expected: self.n as usize, got: c.len() });
        }
        let q = self.scalars.q;
        Ok(Elem(c.iter().rev().fold(0u32, |acc, s| acc * q + s.0)))
    }

    /// Human-readable name: 0, 1, ω, ω^2, ... in powers of the generator.
    pub fn name(&self, a: Elem) -> String {
        match a.0 {
            0 => "0".into(),
            1 => "1".into(),
            _ => match self.logs.log[a.index()] {
                1 => "ω".into(),
                k => format!("ω^{k}"),
            },
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} over F_{}", self.q(), self.n, self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_basics() {
        let f = Field::new(2, 1, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = Elem(2);
        assert_eq!(f.mul(w, w), Elem(3));
        assert_eq!(f.inv(w).unwrap(), Elem(3));
        assert_eq!(f.trace(w), Scalar(1));
        assert_eq!(f.trace(Elem(0)), Scalar(0));
        assert_eq!(f.name(w), "ω");
        assert_eq!(f.name(Elem(3)), "ω^2");
    }

    #[test]
    fn f9_basics() {
        let f = Field::new(3, 1, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let i = Elem(3);
        assert_eq!(f.trace(i), Scalar(0));
        assert_eq!(f.mul(i, i), Elem(2));
        assert_eq!(f.project(i), Err(Error::NotInSubfield(3)));
        assert_eq!(f.project(Elem(2)), Ok(Scalar(2)));
        assert_eq!(f.embed(Scalar(1)), Elem::ONE);
    }

    #[test]
    fn f16_over_f4_modulus() {
        let f = Field::new(2, 2, 2).unwrap();
        assert_eq!(f.scalars().modulus(), &[1, 1, 1]);
        // Over F_4 = {0,1,w,w+1}: x^2+x+w has no root; candidates with smaller
        // index all have one.
        assert_eq!(f.modulus(), &[2, 1, 1]);
    }

    #[test]
    fn errors() {
        assert_eq!(Field::new(4, 1, 2).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(2, 1, 21), Err(Error::TooLarge { .. })));
        assert!(Field::with_cap(2, 1, 21, 1 << 21).is_ok());
        let f = Field::new(2, 1, 2).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
        assert!(f.arith(Elem(4), Elem(1), ArithOp::Add).is_err());
    }
}
