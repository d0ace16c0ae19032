//! Dense univariate polynomials over a small coefficient field, used to
//! build the field tower: modular multiplication and the irreducibility
//! search for moduli.
//!
//! Polynomials are little-endian coefficient vectors of field indices.

/// Arithmetic on the coefficient field of a polynomial ring.
pub(crate) trait CoeffField {
    fn order(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    /// Caller guarantees `a != 0`.
    fn inv(&self, a: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
}

/// The prime field F_p with plain modular arithmetic.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PrimeField {
    pub p: u32,
}

impl CoeffField for PrimeField {
    fn order(&self) -> u32 {
        self.p
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        // Fermat: a^(p-2)
        let mut result = 1u64;
        let mut base = a as u64 % self.p as u64;
        let m = self.p as u64;
        let mut e = self.p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        result as u32
    }
}

pub(crate) fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn mul<F: CoeffField>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem<F: CoeffField>(f: &F, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = degree(m).expect("modulus must be nonzero");
    let lead_inv = f.inv(m[dm]);
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let factor = f.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (j, &c) in m.iter().enumerate().take(dm + 1) {
            if c != 0 {
                r[shift + j] = f.sub(r[shift + j], f.mul(factor, c));
            }
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mulmod<F: CoeffField>(f: &F, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(f, &mul(f, a, b), m)
}

pub(crate) fn powmod<F: CoeffField>(f: &F, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    rem(f, &result, m)
}

pub(crate) fn gcd<F: CoeffField>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn eval<F: CoeffField>(f: &F, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Irreducibility of a monic `m`: root scan for degree <= 3, otherwise
/// `gcd(x^{r^k} - x, m) = 1` for every `k <= deg/2`, where `r` is the
/// order of the coefficient field.
pub(crate) fn is_irreducible<F: CoeffField>(f: &F, m: &[u32]) -> bool {
    let d = match degree(m) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    if d <= 3 {
        return (0..f.order()).all(|x| eval(f, m, x) != 0);
    }
    let x = vec![0u32, 1];
    let mut frob = x.clone();
    for _ in 0..d / 2 {
        frob = powmod(f, &frob, f.order() as u64, m);
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = f.sub(diff[1], 1);
        let g = gcd(f, &trim(diff), m);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// The monic irreducible of the given degree whose lower coefficients,
/// read as a little-endian base-`order` integer, are smallest.
pub(crate) fn smallest_monic_irreducible<F: CoeffField>(f: &F, deg: usize) -> Option<Vec<u32>> {
    let r = f.order() as u64;
    let count = r.checked_pow(deg as u32)?;
    (0..count).find_map(|idx| {
        let mut m = Vec::with_capacity(deg + 1);
        let mut rest = idx;
        for _ in 0..deg {
            m.push((rest % r) as u32);
            rest /= r;
        }
        m.push(1);
        is_irreducible(f, &m).then_some(m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_over_f3_is_x2_plus_1() {
        let f = PrimeField { p: 3 };
        assert_eq!(smallest_monic_irreducible(&f, 2), Some(vec![1, 0, 1]));
    }

    #[test]
    fn quadratic_over_f2() {
        let f = PrimeField { p: 2 };
        assert_eq!(smallest_monic_irreducible(&f, 2), Some(vec![1, 1, 1]));
    }

    #[test]
    fn degree_one_is_x() {
        let f = PrimeField { p: 5 };
        assert_eq!(smallest_monic_irreducible(&f, 1), Some(vec![0, 1]));
    }

    #[test]
    fn gcd_test_agrees_with_root_scan_on_quartics_over_f2() {
        // x^4+x+1 irreducible, x^4+x^2+1 = (x^2+x+1)^2 is not and has no roots.
        let f = PrimeField { p: 2 };
        assert!(is_irreducible(&f, &[1, 1, 0, 0, 1]));
        assert!(!is_irreducible(&f, &[1, 0, 1, 0, 1]));
        assert_eq!(smallest_monic_irreducible(&f, 4), Some(vec![1, 1, 0, 0, 1]));
    }

    #[test]
    fn count_irreducibles_matches_necklace_formula() {
        // Number of monic irreducibles of degree 4 over F_3 is (81 - 9)/4 = 18.
        let f = PrimeField { p: 3 };
        let mut count = 0;
        for idx in 0..81u32 {
            let m = vec![idx % 3, idx / 3 % 3, idx / 9 % 3, idx / 27, 1];
            if is_irreducible(&f, &m) {
                count += 1;
            }
        }
        assert_eq!(count, 18);
    }
}
