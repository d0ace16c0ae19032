//! F(x) = Σ a_i h_i(f_i(x)) for a permutation f and maps h_i: F_q → F_q,
//! and its inverse F^{-1}(x) = f^{-1}(Σ u_i h_i^{-1}(Tr(b_i x))) with b the
//! dual of a.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bases::{all_bases, basis_count, dual_basis, is_basis, DualPair, OrderedBasis};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Scalar};
use crate::funcspace::{invert_table, is_permutation, FuncTable, ScalarMap};
use crate::report::{big, factorial, Report};

use super::decompose;

/// Upper bound on candidate tables for the exhaustive routines.
const MAX_CANDIDATES: u128 = 1 << 24;

#[derive(Debug, Clone)]
pub struct Theorem12Instance {
    pub base: FuncTable,
    pub pair: DualPair,
    pub h: Vec<ScalarMap>,
    pub a: Vec<Elem>,
    pub table: FuncTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Theorem12Conditions {
    pub a_is_basis: bool,
    pub all_h_pp: bool,
}

impl Theorem12Conditions {
    pub fn both(&self) -> bool {
        self.a_is_basis && self.all_h_pp
    }
}

#[derive(Debug, Clone)]
pub struct Theorem12Outcome {
    pub instance: Theorem12Instance,
    pub is_pp: bool,
    pub conditions: Theorem12Conditions,
    pub falsification: Option<Report>,
}

fn check_maps(field: &Field, h: &[ScalarMap], a: &[Elem]) -> Result<()> {
    let n = field.n() as usize;
    if h.len() != n {
        return Err(Error::WrongLength { expected: n, got: h.len() });
    }
    if a.len() != n {
        return Err(Error::WrongLength { expected: n, got: a.len() });
    }
    for hi in h {
        if hi.0.len() != field.q() as usize {
            return Err(Error::WrongLength { expected: field.q() as usize, got: hi.0.len() });
        }
        if hi.0.iter().any(|&v| v >= field.q()) {
            return Err(Error::FieldMismatch("h_i value outside F_q".into()));
        }
    }
    for x in a {
        field.elem(x.0 as u64)?;
    }
    Ok(())
}

pub fn theorem12_build(
    field: &Field,
    f: &FuncTable,
    pair: &DualPair,
    h: &[ScalarMap],
    a: &[Elem],
) -> Result<Theorem12Outcome> {
    if !is_permutation(field, f)? {
        return Err(Error::NotPermutation);
    }
    check_maps(field, h, a)?;
    let d = decompose(field, f, pair)?;
    let table = FuncTable::from_fn(field, |x| {
        d.coords().iter().zip(h).zip(a).fold(Elem::ZERO, |acc, ((c, hi), &ai)| {
            field.add(acc, field.scale(hi.at(c.scalar_at(x)), ai))
        })
    });
    let conditions = Theorem12Conditions {
        a_is_basis: is_basis(field, a)?,
        all_h_pp: h.iter().all(ScalarMap::is_permutation),
    };
    let is_pp = is_permutation(field, &table)?;
    let falsification = (is_pp != conditions.both()).then(|| {
        Report::new("F is a PP iff a is a basis and every h_i is a PP", conditions.both(), is_pp)
            .with_witness(json!({ "a": a, "h": h, "conditions": conditions }))
    });
    Ok(Theorem12Outcome {
        instance: Theorem12Instance { base: f.clone(), pair: pair.clone(), h: h.to_vec(), a: a.to_vec(), table },
        is_pp,
        conditions,
        falsification,
    })
}

/// Inverse through the closed form, never through table inversion of F.
pub fn theorem12_inverse(field: &Field, inst: &Theorem12Instance) -> Result<FuncTable> {
    if !is_permutation(field, &inst.table)? {
        return Err(Error::NotPermutation);
    }
    let a = OrderedBasis::new(field, inst.a.clone())?;
    let b = dual_basis(field, &a)?;
    let h_inv = inst.h.iter().map(ScalarMap::inverse).collect::<Result<Vec<_>>>()?;
    let f_inv = invert_table(field, &inst.base)?;
    let u = inst.pair.u();
    Ok(FuncTable::from_fn(field, |x| {
        let inner = b
            .elems()
            .iter()
            .zip(&h_inv)
            .zip(u.elems())
            .fold(Elem::ZERO, |acc, ((&bi, hi), &ui)| {
                field.add(acc, field.scale(hi.at(field.trace(field.mul(bi, x))), ui))
            });
        f_inv.at(inner)
    }))
}

/// Outcome of checking the PP criterion over every (a, h) pair.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub checked: u64,
    pub pp_count: u64,
    pub counterexamples: u64,
    pub witnesses: Vec<serde_json::Value>,
}

/// Enumerates every a ∈ (F_{q^n})^n and every tuple of maps h_i: F_q → F_q
/// and checks that F is a PP exactly when a is a basis and all h_i are PPs.
pub fn theorem12_sweep(field: &Field, f: &FuncTable, pair: &DualPair) -> Result<SweepReport> {
    if !is_permutation(field, f)? {
        return Err(Error::NotPermutation);
    }
    let n = field.n() as usize;
    let q = field.q() as usize;
    let size = field.size() as usize;
    let a_count = (size as u128).pow(n as u32);
    let maps = ScalarMap::all(q as u32);
    let h_count = (maps.len() as u128).pow(n as u32);
    if a_count * h_count * size as u128 > 1 << 32 {
        return Err(Error::SearchTooLarge(a_count * h_count));
    }
    let d = decompose(field, f, pair)?;
    let coords: Vec<&[u32]> = d.coords().iter().map(|c| c.values()).collect();
    // scaled[a * q + s] = a · s
    let scaled: Vec<u32> = (0..size)
        .flat_map(|a| (0..q).map(move |s| (a, s)))
        .map(|(a, s)| field.scale(Scalar(s as u32), Elem(a as u32)).0)
        .collect();
    let map_pp: Vec<bool> = maps.iter().map(ScalarMap::is_permutation).collect();

    let results: Vec<(u64, u64, Vec<serde_json::Value>)> = (0..a_count as u64)
        .into_par_iter()
        .map(|a_idx| {
            let a: Vec<usize> = (0..n).map(|i| (a_idx as usize / size.pow(i as u32)) % size).collect();
            let a_elems: Vec<Elem> = a.iter().map(|&x| Elem(x as u32)).collect();
            let a_basis = is_basis(field, &a_elems).expect("length checked");
            let mut seen = vec![u32::MAX; size];
            let mut pp = 0u64;
            let mut bad = 0u64;
            let mut witnesses = Vec::new();
            for h_idx in 0..h_count as u64 {
                let mut rest = h_idx as usize;
                let h: Vec<usize> = (0..n)
                    .map(|_| {
                        let k = rest % maps.len();
                        rest /= maps.len();
                        k
                    })
                    .collect();
                let mut injective = true;
                for x in 0..size {
                    let mut acc = Elem::ZERO;
                    for i in 0..n {
                        let s = maps[h[i]].0[coords[i][x] as usize] as usize;
                        acc = field.add(acc, Elem(scaled[a[i] * q + s]));
                    }
                    let slot = &mut seen[acc.index()];
                    if *slot == h_idx as u32 {
                        injective = false;
                        break;
                    }
                    *slot = h_idx as u32;
                }
                let predicted = a_basis && h.iter().all(|&k| map_pp[k]);
                if injective {
                    pp += 1;
                }
                if injective != predicted {
                    bad += 1;
                    if witnesses.len() < 4 {
                        let hs: Vec<&ScalarMap> = h.iter().map(|&k| &maps[k]).collect();
                        witnesses.push(json!({ "a": a_elems, "h": hs, "is_pp": injective }));
                    }
                }
            }
            (pp, bad, witnesses)
        })
        .collect();
    let mut report = SweepReport { checked: (a_count * h_count) as u64, pp_count: 0, counterexamples: 0, witnesses: Vec::new() };
    for (pp, bad, w) in results {
        report.pp_count += pp;
        report.counterexamples += bad;
        report.witnesses.extend(w);
    }
    report.witnesses.truncate(8);
    Ok(report)
}

/// Runs every construction for fixed f and (u, v): all ordered bases a and
/// all tuples of permutations h_i. Reports the count formula
/// (q^n - 1)...(q^n - q^{n-1}) (q!)^n against the number of distinct
/// tables; the number of constructions goes in `details`.
pub fn theorem12_census(field: &Field, f: &FuncTable, pair: &DualPair) -> Result<Report> {
    if !is_permutation(field, f)? {
        return Err(Error::NotPermutation);
    }
    let q = field.q();
    let n = field.n();
    let formula = basis_count(q as u64, n) * factorial(q as u64).pow(n);
    if formula > MAX_CANDIDATES {
        return Err(Error::SearchTooLarge(formula));
    }
    let bases = all_bases(field);
    let perms = ScalarMap::permutations(q);
    let h_count = perms.len().pow(n);
    let d = decompose(field, f, pair)?;

    let (tables, constructions, all_pp) = bases
        .par_iter()
        .map(|a| {
            let mut set = HashSet::new();
            let mut all_pp = true;
            for h_idx in 0..h_count {
                let mut rest = h_idx;
                let h: Vec<&ScalarMap> = (0..n)
                    .map(|_| {
                        let p = &perms[rest % perms.len()];
                        rest /= perms.len();
                        p
                    })
                    .collect();
                let values: Vec<u32> = field
                    .elements()
                    .map(|x| {
                        d.coords()
                            .iter()
                            .zip(&h)
                            .zip(a.elems())
                            .fold(Elem::ZERO, |acc, ((c, hi), &ai)| {
                                field.add(acc, field.scale(hi.at(c.scalar_at(x)), ai))
                            })
                            .0
                    })
                    .collect();
                let t = FuncTable::new(field, crate::funcspace::Codomain::Ext, values).expect("in range");
                all_pp &= is_permutation(field, &t).expect("domain checked");
                set.insert(t.values().to_vec());
            }
            (set, h_count as u64, all_pp)
        })
        .reduce(
            || (HashSet::new(), 0u64, true),
            |(mut s1, c1, p1), (s2, c2, p2)| {
                s1.extend(s2);
                (s1, c1 + c2, p1 && p2)
            },
        );
    Ok(Report::new(
        "number of PPs a_1 h_1(f_1) + ... + a_n h_n(f_n) equals (q^n-1)...(q^n-q^{n-1}) (q!)^n",
        big(formula),
        tables.len() as u64,
    )
    .with_details(json!({
        "constructions": constructions,
        "distinct_tables": tables.len(),
        "all_constructions_pp": all_pp,
    })))
}
