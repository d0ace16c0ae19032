//! Test-only oracles: schoolbook tower arithmetic built straight from the
//! published moduli, plus random generators for tables, bases and PPs.
#![allow(dead_code)]

use ppkit::bases::{is_basis, OrderedBasis};
use ppkit::funcspace::{Codomain, FuncTable, ScalarMap};
use ppkit::serial::FieldDoc;
use ppkit::{Elem, Field};
use rand::seq::SliceRandom;
use rand::Rng;

/// F_q = F_p[x]/(m_q), F_{q^n} = F_q[y]/(m_qn), multiplication by
/// polynomial long multiplication and reduction. No tables.
pub struct Oracle {
    pub p: u32,
    pub e: usize,
    pub n: usize,
    pub q: u32,
    pub size: u32,
    mq: Vec<u32>,
    mqn: Vec<u32>,
}

fn digits(mut v: u32, base: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = v % base;
            v /= base;
            d
        })
        .collect()
}

fn undigits(d: &[u32], base: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * base + x)
}

impl Oracle {
    pub fn new(field: &Field) -> Self {
        let doc = FieldDoc::of(field);
        let (p, e, n) = (doc.p, doc.e as usize, doc.n as usize);
        let q = p.pow(e as u32);
        let mq = doc.modulus_q.unwrap();
        let mqn = doc.modulus_qn.unwrap().iter().map(|c| undigits(c, p)).collect();
        Oracle { p, e, n, q, size: q.pow(n as u32), mq, mqn }
    }

    pub fn fq_add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (digits(a, self.p, self.e), digits(b, self.p, self.e));
        undigits(&x.iter().zip(&y).map(|(s, t)| (s + t) % self.p).collect::<Vec<_>>(), self.p)
    }

    pub fn fq_neg(&self, a: u32) -> u32 {
        let x = digits(a, self.p, self.e);
        undigits(&x.iter().map(|s| (self.p - s) % self.p).collect::<Vec<_>>(), self.p)
    }

    pub fn fq_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let (x, y) = (digits(a, self.p, self.e), digits(b, self.p, self.e));
        let mut prod = vec![0u64; 2 * self.e];
        for (i, &s) in x.iter().enumerate() {
            for (j, &t) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + s as u64 * t as u64) % p;
            }
        }
        // Reduce with the monic modulus of degree e.
        for k in (self.e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.mq.iter().enumerate() {
                let idx = k - self.e + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        undigits(&prod[..self.e].iter().map(|&v| v as u32).collect::<Vec<_>>(), self.p)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (digits(a, self.q, self.n), digits(b, self.q, self.n));
        undigits(&x.iter().zip(&y).map(|(&s, &t)| self.fq_add(s, t)).collect::<Vec<_>>(), self.q)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let x = digits(a, self.q, self.n);
        undigits(&x.iter().map(|&s| self.fq_neg(s)).collect::<Vec<_>>(), self.q)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (digits(a, self.q, self.n), digits(b, self.q, self.n));
        let mut prod = vec![0u32; 2 * self.n];
        for (i, &s) in x.iter().enumerate() {
            for (j, &t) in y.iter().enumerate() {
                prod[i + j] = self.fq_add(prod[i + j], self.fq_mul(s, t));
            }
        }
        for k in (self.n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            let nc = self.fq_neg(c);
            for (i, &m) in self.mqn.iter().enumerate() {
                let idx = k - self.n + i;
                prod[idx] = self.fq_add(prod[idx], self.fq_mul(nc, m));
            }
        }
        undigits(&prod[..self.n], self.q)
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn trace(&self, a: u32) -> u32 {
        let mut term = a;
        let mut acc = a;
        for _ in 1..self.n {
            term = self.pow(term, self.q as u64);
            acc = self.add(acc, term);
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (1..self.size).find(|&b| self.mul(a, b) == 1)
    }
}

pub fn random_pp<R: Rng>(field: &Field, rng: &mut R) -> FuncTable {
    let mut v: Vec<u32> = (0..field.size()).collect();
    v.shuffle(rng);
    FuncTable::new(field, Codomain::Ext, v).unwrap()
}

pub fn random_table<R: Rng>(field: &Field, rng: &mut R) -> FuncTable {
    let v = (0..field.size()).map(|_| rng.gen_range(0..field.size())).collect();
    FuncTable::new(field, Codomain::Ext, v).unwrap()
}

pub fn random_basis<R: Rng>(field: &Field, rng: &mut R) -> OrderedBasis {
    loop {
        let v: Vec<Elem> = (0..field.n()).map(|_| Elem(rng.gen_range(1..field.size()))).collect();
        if is_basis(field, &v).unwrap() {
            return OrderedBasis::new(field, v).unwrap();
        }
    }
}

pub fn random_scalar_perm<R: Rng>(q: u32, rng: &mut R) -> ScalarMap {
    let mut v: Vec<u32> = (0..q).collect();
    v.shuffle(rng);
    ScalarMap(v)
}

/// Independent bijectivity check.
pub fn bijective(values: &[u32]) -> bool {
    let mut s = values.to_vec();
    s.sort_unstable();
    s.iter().enumerate().all(|(i, &v)| v == i as u32)
}

/// Fiber sizes counted directly.
pub fn fiber_histogram(values: &[u32], codomain: u32) -> Vec<usize> {
    let mut h = vec![0usize; codomain as usize];
    for &v in values {
        h[v as usize] += 1;
    }
    h
}
