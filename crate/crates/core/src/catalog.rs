//! Worked polynomial families over F_{q^2} with their predicted PP
//! conditions. Each entry builds the polynomial, evaluates it on the whole
//! field and compares the verdict with the prediction.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{prime_power, Elem, Field};
use crate::funcspace::{eval_poly, is_permutation, PolyRep};
use crate::serial::FieldDoc;

/// Registered example ids and the parameters each one takes.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("cubic", "q"),
    ("quintic", "q"),
    ("x11-general", "q"),
    ("x11", "m"),
    ("pr2", "q, r"),
    ("char2", "r, t"),
    ("omega", "q, m"),
];

#[derive(Debug, Clone, Default)]
pub struct ExampleParams {
    pub q: Option<u64>,
    pub m: Option<u64>,
    pub r: Option<u32>,
    pub t: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleResult {
    pub example: String,
    pub params: Value,
    pub field: FieldDoc,
    pub polynomial: PolyRep,
    pub condition: String,
    /// None when the stated condition makes no claim for these parameters.
    pub predicted: Option<bool>,
    pub is_pp: bool,
    pub matches: bool,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn need<T: Copy>(v: Option<T>, name: &str, id: &str) -> Result<T> {
    v.ok_or_else(|| Error::Precondition(format!("example {id} needs parameter {name}")))
}

fn quadratic_over(q: u64) -> Result<Field> {
    let (p, e) = prime_power(q).ok_or_else(|| Error::Precondition(format!("q = {q} is not a prime power")))?;
    Field::new(p, e, 2)
}

/// The smallest root of y^2 + y + 1 in F_{q^2} outside F_q.
fn cube_root_of_unity(field: &Field) -> Result<Elem> {
    field
        .elements()
        .find(|&w| w.0 >= field.q() && field.add(field.add(field.mul(w, w), w), Elem::ONE) == Elem::ZERO)
        .ok_or_else(|| Error::Precondition("y^2 + y + 1 has no root outside F_q".into()))
}

fn binomial_family(q: u64, m: u64, coeffs: &[i64]) -> Vec<(i64, u64)> {
    // x^{m-2j} x^{2jq} for j = 0..
    coeffs.iter().enumerate().map(|(j, &c)| (c, m - 2 * j as u64 + 2 * j as u64 * q)).collect()
}

pub fn reproduce(id: &str, params: &ExampleParams) -> Result<ExampleResult> {
    let (field, poly, condition, predicted, shown) = match id {
        "cubic" | "quintic" | "x11-general" => {
            let q = need(params.q, "q", id)?;
            let (m, coeffs): (u64, &[i64]) = match id {
                "cubic" => (3, &[1, 3]),
                "quintic" => (5, &[1, 10, 5]),
                _ => (11, &[1, 55, 330, 462, 165, 11]),
            };
            let field = quadratic_over(q)?;
            let poly = PolyRep::from_ints(&field, &binomial_family(q, m, coeffs));
            let pred = q % 4 == 3 && gcd(m, q - 1) == 1;
            (field, poly, format!("q ≡ 3 mod 4 and gcd({m}, q-1) = 1"), Some(pred), json!({ "q": q }))
        }
        "x11" => {
            let m = need(params.m, "m", id)?;
            let e = u32::try_from(m).map_err(|_| Error::SearchTooLarge(m as u128))?;
            let field = Field::new(3, e, 2)?;
            let q = 3u64.pow(e);
            let poly = PolyRep::from_ints(&field, &[(1, 11), (1, 9 + 2 * q), (-1, 1 + 10 * q)]);
            (field, poly, "gcd(m, 10) = 1".to_string(), Some(gcd(m, 10) == 1), json!({ "m": m }))
        }
        "pr2" => {
            let q = need(params.q, "q", id)?;
            let r = need(params.r, "r", id)?;
            let field = quadratic_over(q)?;
            let pr = (field.characteristic() as u64).pow(r);
            let m = pr + 2;
            let poly = PolyRep::from_ints(&field, &[(1, pr + 2), (1, pr + 2 * q), (2, 1 + (pr + 1) * q)]);
            let claim = m < q && q % 4 == 3 && gcd(m, q - 1) == 1;
            (
                field,
                poly,
                "p^r + 2 < q, q ≡ 3 mod 4 and gcd(p^r + 2, q-1) = 1 imply a PP".to_string(),
                claim.then_some(true),
                json!({ "q": q, "r": r }),
            )
        }
        "char2" => {
            let r = need(params.r, "r", id)?;
            let t = need(params.t, "t", id)?;
            let field = Field::new(2, t, 2)?;
            let q = 1u64 << t;
            let w = cube_root_of_unity(&field)?;
            let k = 1u64 << r;
            let poly = PolyRep::new(
                &field,
                [(Elem::ONE, k + 1), (Elem::ONE, q * (k + 1)), (field.mul(w, w), k + q)],
            );
            let claim = r % 2 == 1 && t % 2 == 1;
            (field, poly, "r and t odd imply a PP".to_string(), claim.then_some(true), json!({ "r": r, "t": t }))
        }
        "omega" => {
            let q = need(params.q, "q", id)?;
            let m = need(params.m, "m", id)?;
            let field = quadratic_over(q)?;
            let w = cube_root_of_unity(&field)?;
            let qn = field.q() as u64;
            // Tr(x) = x + x^q and Tr(ωx) = ωx + ω^q x^q.
            let tr = PolyRep::new(&field, [(Elem::ONE, 1), (Elem::ONE, qn)]);
            let tr_w = PolyRep::new(&field, [(w, 1), (field.pow(w, qn), qn)]);
            let poly = tr
                .pow(&field, m)
                .add(&field, &tr_w.pow(&field, m).scale(&field, field.neg(w)))
                .reduced(&field);
            let q_ok = q % 12 == 5 || q % 12 == 11 || (q.is_power_of_two() && q.trailing_zeros() % 2 == 1);
            let claim = (q_ok && m % 2 == 1).then_some(gcd(m, q - 1) == 1);
            (
                field,
                poly,
                "for odd m and q ≡ 5, 11 mod 12 or q = 2^t with t odd: PP iff gcd(m, q-1) = 1".to_string(),
                claim,
                json!({ "q": q, "m": m }),
            )
        }
        _ => {
            let known: Vec<&str> = EXAMPLES.iter().map(|(k, _)| *k).collect();
            return Err(Error::Precondition(format!("unknown example {id:?}; known: {}", known.join(", "))));
        }
    };
    let table = eval_poly(&field, &poly)?;
    let is_pp = is_permutation(&field, &table)?;
    Ok(ExampleResult {
        example: id.to_string(),
        params: shown,
        field: FieldDoc::of(&field),
        polynomial: poly,
        condition,
        predicted,
        is_pp,
        matches: predicted.is_none_or(|p| p == is_pp),
    })
}
