//! Permutations of the shape F(x) = G(x) + γ·Tr(H(x)).
//!
//! When Tr∘H is q^{n-1}-to-1 the PPs Σ_{i<n} u_i f_i(x) + γTr(H(x)) are
//! exactly the per-fiber bijections of the tail coordinates, so they can be
//! counted and enumerated. `balance_trace` corrects an arbitrary H with
//! non-constant trace into that situation, and `solve_open_problem` emits
//! PPs whose G part is neither a permutation nor linearized.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bases::{basis_count, OrderedBasis};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, Scalar};
use crate::funcspace::{fiber_sizes, fibers_are_k_to_1, is_linearized, is_permutation, Codomain, FuncTable};
use crate::pp_struct::{extension_count, for_each_extension, random_extension, JointFibers};
use crate::report::{big, Report};

/// Brute force over all coordinate-map tuples stays below this many candidates.
const ALL_MAPS_LIMIT: u128 = 1 << 22;
/// Cap on fiber-assignment enumeration.
const ASSIGNMENT_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "F_is_pp")]
    pub f_is_pp: bool,
    #[serde(rename = "G_is_pp")]
    pub g_is_pp: bool,
    #[serde(rename = "G_is_linearized")]
    pub g_is_linearized: bool,
}

impl Certificate {
    /// F is a PP while G is neither a PP nor linearized.
    pub fn answers_open_problem(&self) -> bool {
        self.f_is_pp && !self.g_is_pp && !self.g_is_linearized
    }
}

#[derive(Debug, Clone)]
pub struct TraceShiftInstance {
    pub g: FuncTable,
    pub gamma: Elem,
    pub h: FuncTable,
    pub f: FuncTable,
    pub certificate: Certificate,
}

impl TraceShiftInstance {
    pub fn is_degenerate(&self) -> bool {
        self.gamma == Elem::ZERO
    }
}

fn require_ext(field: &Field, t: &FuncTable, name: &str) -> Result<()> {
    if t.len() != field.size() as usize {
        return Err(Error::FieldMismatch(format!("{name} does not match the field")));
    }
    if t.codomain() != Codomain::Ext {
        return Err(Error::CodomainMismatch(format!("{name} must map into F_q^n")));
    }
    Ok(())
}

fn trace_of(field: &Field, h: &FuncTable) -> FuncTable {
    FuncTable::from_scalar_fn(field, |x| field.trace(h.at(x)))
}

/// F(x) = G(x) + γ·Tr(H(x)) with its certificate. γ = 0 is allowed (F = G).
pub fn build_shape(field: &Field, g: &FuncTable, gamma: Elem, h: &FuncTable) -> Result<TraceShiftInstance> {
    require_ext(field, g, "G")?;
    require_ext(field, h, "H")?;
    field.elem(gamma.0 as u64)?;
    let f = FuncTable::from_fn(field, |x| field.add(g.at(x), field.scale(field.trace(h.at(x)), gamma)));
    let certificate = Certificate {
        f_is_pp: is_permutation(field, &f)?,
        g_is_pp: is_permutation(field, g)?,
        g_is_linearized: is_linearized(field, g)?,
    };
    Ok(TraceShiftInstance { g: g.clone(), gamma, h: h.clone(), f, certificate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceBranch {
    /// Tr∘H was already q^{n-1}-to-1; H_1 = 0.
    AlreadyBalanced,
    /// H_1 = w(0) on the retained set M_1(a) ∪ M_1(b), and a trace-fixing
    /// correction everywhere else.
    ProofGluing,
    /// H_1(x) = w(Tr(x)) - H(x) on the whole field.
    DirectCorrection,
}

/// H together with a correction H_1 such that T = Tr∘(H + H_1) is
/// q^{n-1}-to-1.
#[derive(Debug, Clone)]
pub struct BalancedPair {
    pub h: FuncTable,
    pub h1: FuncTable,
    pub t: FuncTable,
    pub branch: BalanceBranch,
}

fn is_balanced(field: &Field, t: &FuncTable) -> bool {
    let k = (field.q() as u64).pow(field.n() - 1);
    fibers_are_k_to_1(fiber_sizes(field, t), field.size() as u64, k).expect("k >= 1")
}

/// Produces H_1 with Tr∘(H + H_1) balanced.
///
/// With M(c) = {x : Tr(H(x)) = c}, a the smallest value with ♯M(a) > q^{n-1}
/// and b the smallest other value with M(b) nonempty, the retained set is
/// the first q^{n-1} elements of M(a) plus the first min(q^{n-1}, ♯M(b))
/// elements of M(b). There H_1 = w(0), so T keeps the value Tr(H(x)).
/// Every other x receives a target value T₀(x), filling each value's fiber
/// up to q^{n-1} in canonical order, and H_1(x) = w(T₀(x)) - H(x), where
/// w(c) is the smallest element of trace c.
pub fn balance_trace(field: &Field, h: &FuncTable) -> Result<BalancedPair> {
    require_ext(field, h, "H")?;
    let q = field.q() as usize;
    let k = (q as u64).pow(field.n() - 1) as usize;
    let th = trace_of(field, h);
    if is_balanced(field, &th) {
        return Ok(BalancedPair {
            h: h.clone(),
            h1: FuncTable::constant(field, Elem::ZERO),
            t: th,
            branch: BalanceBranch::AlreadyBalanced,
        });
    }
    let mut fibers: Vec<Vec<Elem>> = vec![Vec::new(); q];
    for x in field.elements() {
        fibers[th.values()[x.index()] as usize].push(x);
    }
    if fibers.iter().filter(|m| !m.is_empty()).count() < 2 {
        return Err(Error::ConstantTrace);
    }
    let mut w = vec![None; q];
    for x in field.elements() {
        let slot = &mut w[field.trace(x).index()];
        if slot.is_none() {
            *slot = Some(x);
        }
    }
    let w: Vec<Elem> = w.into_iter().map(|e| e.expect("trace is onto F_q")).collect();

    let heavy = (0..q).find(|&c| fibers[c].len() > k).expect("unbalanced fibers sum to q^n");
    let other = (0..q).find(|&c| c != heavy && !fibers[c].is_empty()).expect("trace is not constant");
    let mut retained = vec![false; field.size() as usize];
    let mut need = vec![k; q];
    for &c in &[heavy, other] {
        for &x in fibers[c].iter().take(k) {
            retained[x.index()] = true;
            need[c] -= 1;
        }
    }
    let mut h1 = vec![0u32; field.size() as usize];
    let mut target = 0usize;
    for x in field.elements() {
        if retained[x.index()] {
            h1[x.index()] = w[0].0;
            continue;
        }
        while need[target] == 0 {
            target += 1;
        }
        need[target] -= 1;
        h1[x.index()] = field.sub(w[target], h.at(x)).0;
    }
    let h1 = FuncTable::new(field, Codomain::Ext, h1)?;
    let t = FuncTable::from_scalar_fn(field, |x| field.trace(field.add(h.at(x), h1.at(x))));
    if is_balanced(field, &t) {
        return Ok(BalancedPair { h: h.clone(), h1, t, branch: BalanceBranch::ProofGluing });
    }

    let h1 = FuncTable::from_fn(field, |x| field.sub(w[field.trace(x).index()], h.at(x)));
    let t = FuncTable::from_scalar_fn(field, |x| field.trace(field.add(h.at(x), h1.at(x))));
    if !is_balanced(field, &t) {
        return Err(Error::Internal("balanced trace correction failed".into()));
    }
    Ok(BalancedPair { h: h.clone(), h1, t, branch: BalanceBranch::DirectCorrection })
}

/// (q^{n-1}!)^q.
pub fn shape_family_formula(q: u64, n: u32) -> u128 {
    extension_count(q, n, 1)
}

/// Counts the PPs Σ_{i<n} u_i f_i(x) + γTr(H(x)) over all tuples of maps
/// f_i: F_{q^n} → F_q, for the basis `u` (last element γ; chosen
/// canonically when `None`).
pub fn count_shape_family(field: &Field, h: &FuncTable, gamma: Elem, u: Option<&OrderedBasis>) -> Result<Report> {
    require_ext(field, h, "H")?;
    if gamma == Elem::ZERO {
        return Err(Error::Precondition("γ must be nonzero".into()));
    }
    let th = trace_of(field, h);
    if !is_balanced(field, &th) {
        return Err(Error::Precondition("Tr(H(x)) is not q^{n-1}-to-1".into()));
    }
    let u = match u {
        Some(b) => shape_basis(field, b, gamma)?,
        None => OrderedBasis::completing(field, gamma)?,
    };
    let q = field.q() as u64;
    let n = field.n();
    let formula = shape_family_formula(q, n);
    let tail_count = q.pow(n - 1) as usize;
    let size = field.size();
    let all_maps = (tail_count as u128).checked_pow(size).unwrap_or(u128::MAX);

    let (observed, method, examined) = if all_maps <= ALL_MAPS_LIMIT {
        // z(x) indexes the tail vector (f_1(x), ..., f_{n-1}(x)).
        let tails: Vec<Elem> = (0..tail_count)
            .map(|mut j| {
                u.elems()[..n as usize - 1].iter().fold(Elem::ZERO, |acc, &ui| {
                    let b = Scalar((j as u64 % q) as u32);
                    j /= q as usize;
                    field.add(acc, field.scale(b, ui))
                })
            })
            .collect();
        let shift: Vec<Elem> = field.elements().map(|x| field.scale(th.scalar_at(x), gamma)).collect();
        let mut z = vec![0usize; size as usize];
        let mut seen = vec![u64::MAX; size as usize];
        let mut count = 0u128;
        let mut stamp = 0u64;
        loop {
            let mut injective = true;
            for x in 0..size as usize {
                let y = field.add(tails[z[x]], shift[x]).index();
                if seen[y] == stamp {
                    injective = false;
                    break;
                }
                seen[y] = stamp;
            }
            if injective {
                count += 1;
            }
            stamp += 1;
            let mut i = 0;
            while i < z.len() {
                z[i] += 1;
                if z[i] < tail_count {
                    break;
                }
                z[i] = 0;
                i += 1;
            }
            if i == z.len() {
                break;
            }
        }
        (count, "all-maps", all_maps)
    } else {
        let reordered = gamma_first(field, &u)?;
        let fibers = JointFibers::new(field, std::slice::from_ref(&th), &reordered)?;
        let mut count = 0u128;
        let examined = for_each_extension(field, &fibers, ASSIGNMENT_LIMIT, |t| {
            if is_permutation(field, t).expect("domain matches") {
                count += 1;
            }
        })?;
        (count, "fiber-assignments", examined)
    };
    Ok(Report::new(
        "number of PPs u_1 f_1 + ... + u_{n-1} f_{n-1} + γTr(H) equals (q^{n-1}!)^q",
        big(formula),
        big(observed),
    )
    .with_details(json!({ "method": method, "candidates": big(examined), "basis": u.elems() })))
}

fn shape_basis(field: &Field, u: &OrderedBasis, gamma: Elem) -> Result<OrderedBasis> {
    if u.elems().last() != Some(&gamma) {
        return Err(Error::Precondition("the last basis element must be γ".into()));
    }
    OrderedBasis::new(field, u.elems().to_vec())
}

/// (γ, u_1, ..., u_{n-1}) from (u_1, ..., u_{n-1}, γ).
fn gamma_first(field: &Field, u: &OrderedBasis) -> Result<OrderedBasis> {
    let e = u.elems();
    let mut out = vec![e[e.len() - 1]];
    out.extend_from_slice(&e[..e.len() - 1]);
    OrderedBasis::new(field, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

#[derive(Debug, Clone)]
pub struct OpenProblemResult {
    pub balanced: BalancedPair,
    pub instances: Vec<TraceShiftInstance>,
    /// Candidate PPs F examined.
    pub examined: u128,
    /// (q^{n-1}!)^q - (q^n - q)...(q^n - q^{n-1}), reported in exhaustive mode.
    pub lower_bound: Option<u128>,
}

/// (q^{n-1}!)^q - (q^n - q)(q^n - q^2)...(q^n - q^{n-1}), floored at 0.
pub fn open_problem_lower_bound(q: u64, n: u32) -> u128 {
    let linear = basis_count(q, n) / ((q as u128).pow(n) - 1);
    shape_family_formula(q, n).saturating_sub(linear)
}

/// PPs F = G + γTr(H) with G = Σ_{i<n} u_i f_i + γTr(H_1) neither a PP nor
/// linearized. `u` must be a basis ending in γ.
pub fn solve_open_problem(
    field: &Field,
    h: &FuncTable,
    gamma: Elem,
    u: &OrderedBasis,
    mode: SearchMode,
) -> Result<OpenProblemResult> {
    require_ext(field, h, "H")?;
    if gamma == Elem::ZERO {
        return Err(Error::Precondition("γ must be nonzero".into()));
    }
    let u = shape_basis(field, u, gamma)?;
    let balanced = balance_trace(field, h)?;
    let fibers = JointFibers::new(field, std::slice::from_ref(&balanced.t), &gamma_first(field, &u)?)?;
    let shift: Vec<Elem> = field.elements().map(|x| field.scale(field.trace(h.at(x)), gamma)).collect();

    let mut instances = Vec::new();
    let mut seen = HashSet::new();
    let mut consider = |f_table: &FuncTable| {
        if !seen.insert(f_table.values().to_vec()) {
            return;
        }
        let g = FuncTable::from_fn(field, |x| field.sub(f_table.at(x), shift[x.index()]));
        let inst = build_shape(field, &g, gamma, h).expect("tables match the field");
        debug_assert_eq!(&inst.f, f_table);
        if inst.certificate.answers_open_problem() {
            instances.push(inst);
        }
    };
    let (examined, lower_bound) = match mode {
        SearchMode::Exhaustive => {
            let n = for_each_extension(field, &fibers, ASSIGNMENT_LIMIT, &mut consider)?;
            (n, Some(open_problem_lower_bound(field.q() as u64, field.n())))
        }
        SearchMode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                consider(&random_extension(field, &fibers, &mut rng));
            }
            (samples as u128, None)
        }
    };
    Ok(OpenProblemResult { balanced, instances, examined, lower_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(2, 1, 2).unwrap()
    }

    #[test]
    fn zero_gamma_gives_g() {
        let f = f4();
        let g = FuncTable::from_fn(&f, |x| f.pow(x, 3));
        let inst = build_shape(&f, &g, Elem::ZERO, &FuncTable::identity(&f)).unwrap();
        assert_eq!(inst.f, g);
        assert!(inst.is_degenerate());
    }

    #[test]
    fn translation_by_constant_trace() {
        let f = Field::new(3, 1, 2).unwrap();
        let h = FuncTable::constant(&f, Elem(1));
        let gamma = Elem(4);
        let inst = build_shape(&f, &FuncTable::identity(&f), gamma, &h).unwrap();
        let c = f.embed(f.trace(Elem(1)));
        assert_eq!(inst.f, FuncTable::from_fn(&f, |x| f.add(x, f.mul(gamma, c))));
        assert!(inst.certificate.f_is_pp);
    }

    #[test]
    fn already_balanced_needs_no_correction() {
        let f = f4();
        let b = balance_trace(&f, &FuncTable::identity(&f)).unwrap();
        assert_eq!(b.branch, BalanceBranch::AlreadyBalanced);
        assert_eq!(b.h1, FuncTable::constant(&f, Elem::ZERO));
        assert_eq!(b.t, FuncTable::trace(&f));
    }

    #[test]
    fn near_constant_h_on_f4() {
        // Tr(1) = 0 and Tr(ω) = 1 on F_4.
        let f = f4();
        let h = FuncTable::new(&f, Codomain::Ext, vec![2, 2, 2, 1]).unwrap();
        let b = balance_trace(&f, &h).unwrap();
        assert_eq!(b.branch, BalanceBranch::ProofGluing);
        assert_eq!(b.t.values(), &[1, 1, 0, 0]);
        for x in f.elements() {
            assert_eq!(b.t.scalar_at(x), f.trace(f.add(h.at(x), b.h1.at(x))));
        }
        // Tr∘H_1 is unbalanced: the retained set maps to w(0).
        assert!(!is_balanced(&f, &trace_of(&f, &b.h1)));
    }

    #[test]
    fn constant_trace_is_rejected() {
        let f = f4();
        let h = FuncTable::constant(&f, Elem(1));
        assert_eq!(balance_trace(&f, &h).unwrap_err(), Error::ConstantTrace);
        let u = OrderedBasis::completing(&f, Elem(2)).unwrap();
        assert_eq!(
            solve_open_problem(&f, &h, Elem(2), &u, SearchMode::Exhaustive).unwrap_err(),
            Error::ConstantTrace
        );
    }

    #[test]
    fn count_on_f4() {
        let f = f4();
        let r = count_shape_family(&f, &FuncTable::identity(&f), Elem(2), None).unwrap();
        assert_eq!(r.formula_value, json!(4));
        assert_eq!(r.observed_value, json!(4));
        let unbalanced = FuncTable::constant(&f, Elem(1));
        assert!(matches!(count_shape_family(&f, &unbalanced, Elem(2), None), Err(Error::Precondition(_))));
    }

    #[test]
    fn open_problem_on_f4() {
        let f = f4();
        let gamma = Elem(2);
        let u = OrderedBasis::completing(&f, gamma).unwrap();
        let h = FuncTable::new(&f, Codomain::Ext, vec![2, 2, 2, 1]).unwrap();
        let res = solve_open_problem(&f, &h, gamma, &u, SearchMode::Exhaustive).unwrap();
        assert_eq!(res.lower_bound, Some(2));
        assert_eq!(res.examined, 4);
        assert!(res.instances.len() >= 2);
        for inst in &res.instances {
            assert!(inst.certificate.answers_open_problem());
        }
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(open_problem_lower_bound(2, 2), 2);
        assert_eq!(open_problem_lower_bound(3, 2), 216 - 6);
        assert_eq!(open_problem_lower_bound(2, 3), 576 - 24);
    }
}
