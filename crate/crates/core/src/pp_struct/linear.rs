//! Trace-form linear maps L(x) = Σ ω_i Tr(θ_i x) and the power family
//! F(x) = Σ a_i Tr(θ_i x)^{m_i}.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::json;

use crate::bases::{all_bases, basis_count, is_basis, OrderedBasis};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::funcspace::{is_permutation, FuncTable};
use crate::report::{big, Report};

/// Above this many (θ, ω) pairs the census fixes ω to the polynomial basis.
const PAIR_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct LinearOutcome {
    pub table: FuncTable,
    pub is_pp: bool,
    pub theta_is_basis: bool,
    pub omega_is_basis: bool,
    pub falsification: Option<Report>,
}

fn trace_form(field: &Field, theta: &[Elem], coeffs: &[Elem], power: impl Fn(usize) -> u64) -> FuncTable {
    FuncTable::from_fn(field, |x| {
        theta.iter().zip(coeffs).enumerate().fold(Elem::ZERO, |acc, (i, (&t, &c))| {
            let s = field.scalars().pow(field.trace(field.mul(t, x)), power(i));
            field.add(acc, field.scale(s, c))
        })
    })
}

/// Builds L and checks: with θ a basis, L is a PP iff ω is one, and
/// symmetrically with ω a basis.
pub fn linear_pp_from_bases(field: &Field, theta: &[Elem], omega: &[Elem]) -> Result<LinearOutcome> {
    let theta_is_basis = is_basis(field, theta)?;
    let omega_is_basis = is_basis(field, omega)?;
    let table = trace_form(field, theta, omega, |_| 1);
    let is_pp = is_permutation(field, &table)?;
    let mut falsification = None;
    if (theta_is_basis && is_pp != omega_is_basis) || (omega_is_basis && is_pp != theta_is_basis) {
        falsification = Some(
            Report::new("L is a PP iff both θ and ω are bases", theta_is_basis && omega_is_basis, is_pp)
                .with_witness(json!({ "theta": theta, "omega": omega })),
        );
    }
    Ok(LinearOutcome { table, is_pp, theta_is_basis, omega_is_basis, falsification })
}

/// Distinct linear PPs Σ ω_i Tr(θ_i x) over all basis pairs, against
/// (q^n - 1)(q^n - q)...(q^n - q^{n-1}).
pub fn linear_pp_census(field: &Field) -> Result<Report> {
    let bases = all_bases(field);
    let omegas: Vec<OrderedBasis> = if bases.len().saturating_mul(bases.len()) <= PAIR_LIMIT {
        bases.clone()
    } else {
        vec![OrderedBasis::standard(field)]
    };
    let mut tables = HashSet::new();
    let mut witnesses = Vec::new();
    for theta in &bases {
        for omega in &omegas {
            let out = linear_pp_from_bases(field, theta.elems(), omega.elems())?;
            if let Some(r) = out.falsification {
                witnesses.push(serde_json::to_value(r).expect("report serializes"));
            }
            if out.is_pp {
                tables.insert(out.table.values().to_vec());
            }
        }
    }
    let formula = basis_count(field.q() as u64, field.n());
    let mut r = Report::new("number of linear PPs equals (q^n-1)(q^n-q)...(q^n-q^{n-1})", big(formula), tables.len() as u64)
        .with_details(json!({ "theta_bases": bases.len(), "omega_bases": omegas.len() }));
    r.witnesses = witnesses;
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonomialConditions {
    pub gcd_ok: bool,
    pub a_basis: bool,
    pub theta_basis: bool,
}

impl MonomialConditions {
    pub fn all(&self) -> bool {
        self.gcd_ok && self.a_basis && self.theta_basis
    }
}

#[derive(Debug, Clone)]
pub struct MonomialOutcome {
    pub table: FuncTable,
    pub is_pp: bool,
    pub conditions: MonomialConditions,
    pub falsification: Option<Report>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// F(x) = Σ a_i Tr(θ_i x)^{m_i}, a PP iff gcd(m_1...m_n, q - 1) = 1 and
/// both a and θ are bases.
pub fn monomial_family(field: &Field, theta: &[Elem], a: &[Elem], m: &[u64]) -> Result<MonomialOutcome> {
    let n = field.n() as usize;
    if m.len() != n {
        return Err(Error::WrongLength { expected: n, got: m.len() });
    }
    if m.contains(&0) {
        return Err(Error::Precondition("exponents must be positive".into()));
    }
    let q1 = field.q() as u64 - 1;
    let conditions = MonomialConditions {
        // gcd of the product is 1 iff each factor is coprime to q - 1.
        gcd_ok: m.iter().all(|&mi| gcd(mi, q1) == 1),
        a_basis: is_basis(field, a)?,
        theta_basis: is_basis(field, theta)?,
    };
    let table = trace_form(field, theta, a, |i| m[i]);
    let is_pp = is_permutation(field, &table)?;
    let falsification = (is_pp != conditions.all()).then(|| {
        Report::new("F is a PP iff gcd(m_1...m_n, q-1) = 1 and a, θ are bases", conditions.all(), is_pp)
            .with_witness(json!({ "theta": theta, "a": a, "m": m }))
    });
    Ok(MonomialOutcome { table, is_pp, conditions, falsification })
}
