use std::collections::HashSet;

use ppkit::bases::{DualPair, OrderedBasis};
use ppkit::catalog::{reproduce, ExampleParams};
use ppkit::funcspace::{
    eval_poly, image_size, invert_table, is_k_to_1, is_linearized, is_permutation, Codomain, FuncTable, ScalarMap,
};
use ppkit::pp_struct::{
    decompose, extend_to_pp, extension_count, fiber_criterion, for_each_extension, linear_pp_census,
    linear_pp_from_bases, monomial_family, projection_profile, theorem12_build, theorem12_census, theorem12_inverse,
    JointFibers,
};
use ppkit::report::Report;
use ppkit::serial::{FieldDoc, InstanceDoc, PolyDoc, TableDoc};
use ppkit::trace_shift::{count_shape_family, solve_open_problem, SearchMode};
use ppkit::{Elem, Error, Field, Result};
use serde_json::{json, Map, Value};

use crate::{Claim, Cli, Command, Kind, Outcome};

/// Largest field the census runs on.
const CENSUS_LIMIT: u32 = 16;
/// Cap on enumerated extensions for `construct --kind extend --exhaustive`.
const EXTENSION_LIMIT: u128 = 1 << 20;

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Field => field(cli),
        Command::Verify { k } => verify(cli, *k),
        Command::Construct { kind, samples } => construct(cli, *kind, *samples),
        Command::Inverse => inverse(cli),
        Command::Census { claim } => census(cli, *claim),
        Command::Reproduce { example, q, m, r, t } => {
            let params = ExampleParams { q: *q, m: *m, r: *r, t: *t };
            let res = reproduce(example, &params)?;
            let ok = res.matches;
            Ok(Outcome { body: to_value(&res), ok, field: None })
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outputs serialize")
}

fn require_field(cli: &Cli) -> Result<Field> {
    cli.field()?.ok_or_else(|| Error::Precondition("this command needs --p and --n".into()))
}

fn field(cli: &Cli) -> Result<Outcome> {
    let f = require_field(cli)?;
    let mut body = json!({
        "field": FieldDoc::of(&f),
        "q": f.q(),
        "size": f.size(),
        "generator": f.generator(),
    });
    if f.size() <= 1024 {
        let elems: Vec<Value> = f
            .elements()
            .map(|x| json!({ "index": x, "name": f.name(x), "trace": f.trace(x) }))
            .collect();
        body["elements"] = Value::Array(elems);
    }
    Ok(Outcome { body, ok: true, field: Some(f) })
}

/// A table or polynomial document, checked against the --p/--e/--n field
/// when one is given.
fn load_map(cli: &Cli) -> Result<(Field, FuncTable)> {
    let input = cli.input()?.ok_or_else(|| Error::Precondition("--input is required".into()))?;
    let flags = cli.field()?;
    if input.get("terms").is_some() {
        let doc: PolyDoc = serde_json::from_value(input).map_err(|e| Error::Parse(e.to_string()))?;
        let f = match (&doc.field, flags) {
            (Some(d), _) => d.build()?,
            (None, Some(f)) => f,
            (None, None) => return Err(Error::Precondition("polynomial input needs a field".into())),
        };
        let t = eval_poly(&f, &doc.poly_in(&f)?)?;
        return Ok((f, t));
    }
    let doc: TableDoc = serde_json::from_value(input).map_err(|e| Error::Parse(e.to_string()))?;
    match flags {
        Some(f) => {
            let t = doc.table_in(&f)?;
            Ok((f, t))
        }
        None => doc.build(),
    }
}

fn verify(cli: &Cli, k: Option<u64>) -> Result<Outcome> {
    let (f, t) = load_map(cli)?;
    let mut body = Map::new();
    body.insert("codomain".into(), to_value(&t.codomain()));
    body.insert("image_size".into(), json!(image_size(&f, &t)?));
    let primary = match t.codomain() {
        Codomain::Ext => {
            let is_pp = is_permutation(&f, &t)?;
            body.insert("is_pp".into(), json!(is_pp));
            body.insert("is_linearized".into(), json!(is_linearized(&f, &t)?));
            let d = decompose(&f, &t, &DualPair::standard(&f))?;
            body.insert("fiber_criterion".into(), json!(fiber_criterion(&f, &d)));
            let profile = (1..=f.n() as usize)
                .map(|s| projection_profile(&f, &d, s))
                .collect::<Result<Vec<bool>>>()?;
            body.insert("projection_profile".into(), json!(profile));
            is_pp
        }
        Codomain::Sub => {
            let balanced = is_k_to_1(&f, &t, (f.q() as u64).pow(f.n() - 1))?;
            body.insert("balanced".into(), json!(balanced));
            balanced
        }
    };
    let ok = match k {
        Some(k) => {
            let holds = is_k_to_1(&f, &t, k)?;
            body.insert("k_to_1".into(), json!({ "k": k, "holds": holds }));
            holds
        }
        None => primary,
    };
    Ok(Outcome { body: Value::Object(body), ok, field: Some(f) })
}

fn inverse(cli: &Cli) -> Result<Outcome> {
    let (f, t) = load_map(cli)?;
    if t.codomain() != Codomain::Ext || !is_permutation(&f, &t)? {
        return Ok(Outcome { body: json!({ "is_pp": false }), ok: false, field: Some(f) });
    }
    let inv = invert_table(&f, &t)?;
    let body = json!({ "is_pp": true, "inverse": TableDoc::of(&f, &inv) });
    Ok(Outcome { body, ok: true, field: Some(f) })
}

/// Field from the parameter document's "field" entry, else from the flags.
fn param_field(cli: &Cli, params: &Value) -> Result<Field> {
    match params.get("field") {
        Some(v) => {
            let doc: FieldDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            let f = doc.build()?;
            if let Some(g) = cli.field()? {
                if g.size() != f.size() || g.q() != f.q() {
                    return Err(Error::FieldMismatch("--p/--e/--n disagree with the parameter file".into()));
                }
            }
            Ok(f)
        }
        None => require_field(cli),
    }
}

fn parse<T: serde::de::DeserializeOwned>(v: &Value, name: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

fn elems(f: &Field, v: &Value, name: &str) -> Result<Vec<Elem>> {
    parse::<Vec<u64>>(v, name)?.into_iter().map(|i| f.elem(i)).collect()
}

/// A table given either as a full document or as a bare array of indices.
fn table(f: &Field, v: &Value, codomain: Codomain, name: &str) -> Result<FuncTable> {
    if v.is_array() {
        FuncTable::new(f, codomain, parse(v, name)?)
    } else {
        let doc: TableDoc = parse(v, name)?;
        doc.table_in(f)
    }
}

fn basis_or(f: &Field, params: &Value, key: &str, default: OrderedBasis) -> Result<OrderedBasis> {
    match params.get(key) {
        Some(v) => OrderedBasis::new(f, elems(f, v, key)?),
        None => Ok(default),
    }
}

fn construct(cli: &Cli, kind: Kind, samples: usize) -> Result<Outcome> {
    let params = cli.input()?.unwrap_or_else(|| json!({}));
    if !params.is_object() {
        return Err(Error::Parse("parameters must be a JSON object".into()));
    }
    let f = param_field(cli, &params)?;
    let (body, ok) = match kind {
        Kind::Theorem12 => construct_theorem12(&f, &params)?,
        Kind::Extend => construct_extend(cli, &f, &params)?,
        Kind::OpenProblem => construct_open_problem(cli, &f, &params, samples)?,
        Kind::Linear => {
            let theta = elems(&f, params.get("theta").unwrap_or(&Value::Null), "theta")?;
            let omega = elems(&f, params.get("omega").unwrap_or(&Value::Null), "omega")?;
            let out = linear_pp_from_bases(&f, &theta, &omega)?;
            let ok = out.is_pp && out.falsification.is_none();
            let body = json!({
                "L": TableDoc::of(&f, &out.table),
                "is_pp": out.is_pp,
                "theta_is_basis": out.theta_is_basis,
                "omega_is_basis": out.omega_is_basis,
                "falsification": out.falsification,
            });
            (body, ok)
        }
        Kind::Monomial => {
            let std = OrderedBasis::standard(&f).elems().to_vec();
            let theta = match params.get("theta") {
                Some(v) => elems(&f, v, "theta")?,
                None => std.clone(),
            };
            let a = match params.get("a") {
                Some(v) => elems(&f, v, "a")?,
                None => std,
            };
            let m: Vec<u64> = parse(params.get("m").unwrap_or(&Value::Null), "m")?;
            let out = monomial_family(&f, &theta, &a, &m)?;
            let ok = out.is_pp && out.falsification.is_none();
            let body = json!({
                "F": TableDoc::of(&f, &out.table),
                "is_pp": out.is_pp,
                "conditions": out.conditions,
                "falsification": out.falsification,
            });
            (body, ok)
        }
    };
    Ok(Outcome { body, ok, field: Some(f) })
}

fn construct_theorem12(f: &Field, params: &Value) -> Result<(Value, bool)> {
    let base = match params.get("f") {
        Some(v) => table(f, v, Codomain::Ext, "f")?,
        None => FuncTable::identity(f),
    };
    let u = basis_or(f, params, "u", OrderedBasis::standard(f))?;
    let pair = DualPair::new(f, u)?;
    let n = f.n() as usize;
    let h: Vec<ScalarMap> = match params.get("h") {
        Some(v) => parse::<Vec<Vec<u32>>>(v, "h")?.into_iter().map(ScalarMap).collect(),
        None => vec![ScalarMap::identity(f.q()); n],
    };
    let a = match params.get("a") {
        Some(v) => elems(f, v, "a")?,
        None => pair.u().elems().to_vec(),
    };
    let out = theorem12_build(f, &base, &pair, &h, &a)?;
    let verdict = Report::new(
        "F is a PP iff a is a basis and every h_i is a PP",
        out.conditions.both(),
        out.is_pp,
    )
    .with_witness(json!({ "conditions": out.conditions }));
    let mut body = json!({
        "F": TableDoc::of(f, &out.instance.table),
        "is_pp": out.is_pp,
        "conditions": out.conditions,
        "dual_pair": pair,
        "report": verdict,
        "falsification": out.falsification,
    });
    if out.is_pp {
        let inv = theorem12_inverse(f, &out.instance)?;
        body["inverse"] = to_value(&TableDoc::of(f, &inv));
        body["inverse_matches_table"] = json!(inv == invert_table(f, &out.instance.table)?);
    }
    let ok = out.is_pp && out.falsification.is_none();
    Ok((body, ok))
}

fn construct_extend(cli: &Cli, f: &Field, params: &Value) -> Result<(Value, bool)> {
    let g: Vec<FuncTable> = match params.get("g") {
        Some(Value::Array(items)) => {
            items.iter().enumerate().map(|(i, v)| table(f, v, Codomain::Sub, &format!("g[{i}]"))).collect::<Result<_>>()?
        }
        Some(_) => return Err(Error::Parse("g must be an array of tables".into())),
        None => vec![FuncTable::trace(f)],
    };
    let u = basis_or(f, params, "u", OrderedBasis::standard(f))?;
    let ext = extend_to_pp(f, &g, &u)?;
    let is_pp = is_permutation(f, &ext)?;
    let count = extension_count(f.q() as u64, f.n(), g.len() as u32);
    let mut body = json!({
        "F": TableDoc::of(f, &ext),
        "is_pp": is_pp,
        "extension_count": count_value(count),
    });
    let mut ok = is_pp;
    if cli.exhaustive {
        let fibers = JointFibers::new(f, &g, &u)?;
        let mut distinct = HashSet::new();
        let mut all_pp = true;
        for_each_extension(f, &fibers, EXTENSION_LIMIT, |t| {
            all_pp &= is_permutation(f, t).expect("tables match the field");
            distinct.insert(t.values().to_vec());
        })?;
        body["enumerated"] = json!({ "distinct": distinct.len(), "all_pp": all_pp });
        ok &= all_pp && distinct.len() as u128 == count;
    }
    Ok((body, ok))
}

fn construct_open_problem(cli: &Cli, f: &Field, params: &Value, samples: usize) -> Result<(Value, bool)> {
    let h = match params.get("H") {
        Some(v) => table(f, v, Codomain::Ext, "H")?,
        None => FuncTable::identity(f),
    };
    let gamma = match params.get("gamma") {
        Some(v) => f.elem(parse(v, "gamma")?)?,
        None => default_gamma(f),
    };
    let u = match params.get("u") {
        Some(v) => OrderedBasis::new(f, elems(f, v, "u")?)?,
        None => OrderedBasis::completing(f, gamma)?,
    };
    let mode = if cli.exhaustive { SearchMode::Exhaustive } else { SearchMode::Sampled { seed: cli.seed, samples } };
    let res = solve_open_problem(f, &h, gamma, &u, mode)?;
    let branch = res.balanced.branch;
    let instances: Vec<InstanceDoc> = res.instances.iter().map(|i| InstanceDoc::of(f, i, Some(branch))).collect();
    let body = json!({
        "mode": if cli.exhaustive { "exhaustive" } else { "sampled" },
        "seed": if cli.exhaustive { None } else { Some(cli.seed) },
        "gamma": gamma,
        "basis": u,
        "balanced": {
            "H1": TableDoc::of(f, &res.balanced.h1),
            "T": TableDoc::of(f, &res.balanced.t),
            "branch": branch,
        },
        "examined": count_value(res.examined),
        "lower_bound": res.lower_bound.map(count_value),
        "instance_count": instances.len(),
        "instances": instances,
    });
    Ok((body, !res.instances.is_empty()))
}

/// y, the first element outside F_q (1 when n = 1).
fn default_gamma(f: &Field) -> Elem {
    if f.n() > 1 {
        Elem(f.q())
    } else {
        Elem::ONE
    }
}

fn count_value(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(s) => json!(s),
        Err(_) => json!(v.to_string()),
    }
}

fn census(cli: &Cli, claim: Claim) -> Result<Outcome> {
    let f = require_field(cli)?;
    if f.size() > CENSUS_LIMIT {
        return Err(Error::SearchTooLarge(f.size() as u128));
    }
    let wants = |c: Claim| claim == Claim::All || claim == c;
    let mut entries = Vec::new();
    let mut ok = true;
    let mut push = |name: &str, r: Report, counts: bool| {
        let matches = r.holds();
        if counts {
            ok &= matches;
        }
        entries.push(json!({ "name": name, "report": r, "matches": matches, "informational": !counts }));
    };
    if wants(Claim::Linear) {
        push("linear", linear_pp_census(&f)?, true);
    }
    if wants(Claim::Theorem12) {
        let pair = DualPair::standard(&f);
        let distinct = theorem12_census(&f, &FuncTable::identity(&f), &pair)?;
        let details = distinct.details.clone().unwrap_or(Value::Null);
        let constructions = Report::new(
            "number of constructions a_1 h_1(f_1) + ... + a_n h_n(f_n) equals (q^n-1)...(q^n-q^{n-1}) (q!)^n",
            distinct.formula_value.clone(),
            details["constructions"].clone(),
        )
        .with_details(json!({ "all_constructions_pp": details["all_constructions_pp"] }));
        push("theorem12-constructions", constructions, false);
        push("theorem12-distinct", distinct, false);
    }
    if wants(Claim::Extension) {
        let fibers = JointFibers::new(&f, &[FuncTable::trace(&f)], &OrderedBasis::standard(&f))?;
        let mut distinct = HashSet::new();
        for_each_extension(&f, &fibers, 1 << 24, |t| {
            if is_permutation(&f, t).expect("tables match the field") {
                distinct.insert(t.values().to_vec());
            }
        })?;
        let formula = extension_count(f.q() as u64, f.n(), 1);
        let r = Report::new(
            "extensions of g_1 = Tr to a PP number (q^{n-1}!)^q",
            count_value(formula),
            distinct.len() as u64,
        );
        push("extension", r, true);
    }
    if wants(Claim::Shape) {
        push("shape", count_shape_family(&f, &FuncTable::identity(&f), default_gamma(&f), None)?, true);
    }
    let body = json!({ "field": FieldDoc::of(&f), "reports": entries, "all_match": ok });
    Ok(Outcome { body, ok, field: Some(f) })
}
