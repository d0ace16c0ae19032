use ppkit::bases::{dual_basis, DualPair, OrderedBasis};
use ppkit::catalog::{reproduce, ExampleParams};
use ppkit::funcspace::{eval_poly, image_size, invert_table, is_linearized, is_permutation, FuncTable, PolyRep};
use ppkit::pp_struct::{decompose, fiber_criterion, image_bound, projection_profile, recombine, theorem12_census};
use ppkit::{Elem, Field};

fn f4() -> Field {
    Field::new(2, 1, 2).unwrap()
}

#[test]
fn decomposition_of_identity_on_f4() {
    let f = f4();
    let pair = DualPair::new(&f, OrderedBasis::new(&f, vec![Elem(1), Elem(2)]).unwrap()).unwrap();
    assert_eq!(pair.v().elems(), &[Elem(3), Elem(1)]);
    let d = decompose(&f, &FuncTable::identity(&f), &pair).unwrap();
    assert_eq!(d.coords()[0].values(), &[0, 1, 0, 1]);
    assert_eq!(d.coords()[1].values(), &[0, 0, 1, 1]);
    assert!(projection_profile(&f, &d, 1).unwrap());

    let zero = decompose(&f, &FuncTable::constant(&f, Elem::ZERO), &pair).unwrap();
    assert!(!fiber_criterion(&f, &zero));
    assert!(!projection_profile(&f, &zero, 1).unwrap());
    let b = image_bound(&f, &zero).unwrap();
    assert_eq!((b.lhs, b.rhs, b.holds), (1, 1, true));
}

#[test]
fn recombination_on_f4() {
    let f = f4();
    let d = decompose(&f, &FuncTable::identity(&f), &DualPair::standard(&f)).unwrap();
    let r = recombine(&f, &d, &[Elem(1), Elem(1)]).unwrap();
    assert!(!r.is_pp && !r.b_is_basis);
    let r = recombine(&f, &d, &[Elem(2), Elem(3)]).unwrap();
    assert!(r.is_pp && r.b_is_basis);
    let r = recombine(&f, &d, d.pair().u().elems()).unwrap();
    assert_eq!(r.table, FuncTable::identity(&f));
}

#[test]
fn trace_image_bound_on_f4() {
    let f = f4();
    let t = FuncTable::from_fn(&f, |x| f.embed(f.trace(x)));
    let d = decompose(&f, &t, &DualPair::standard(&f)).unwrap();
    let b = image_bound(&f, &d).unwrap();
    assert_eq!(b.lhs, 2);
    assert!(b.holds);
}

#[test]
fn cube_map_on_f9() {
    let f = Field::new(3, 1, 2).unwrap();
    let cube = eval_poly(&f, &PolyRep::from_ints(&f, &[(1, 3)])).unwrap();
    assert_eq!(cube, FuncTable::from_fn(&f, |x| f.frobenius(x)));
    assert!(is_permutation(&f, &cube).unwrap());
    assert!(is_linearized(&f, &cube).unwrap());
    assert_eq!(invert_table(&f, &cube).unwrap(), cube);
    let d = decompose(&f, &cube, &DualPair::standard(&f)).unwrap();
    assert!(fiber_criterion(&f, &d));

    let sq = eval_poly(&f, &PolyRep::from_ints(&f, &[(1, 2)])).unwrap();
    assert_eq!(image_size(&f, &sq).unwrap(), 5);
}

#[test]
fn f9_dual_of_one_and_i() {
    let f = Field::new(3, 1, 2).unwrap();
    let u = OrderedBasis::new(&f, vec![Elem(1), Elem(3)]).unwrap();
    assert_eq!(dual_basis(&f, &u).unwrap().elems(), &[Elem(2), Elem(3)]);
}

/// The count (q^n - 1)...(q^n - q^{n-1})(q!)^n counts constructions; on
/// F_9 and F_16 many constructions coincide.
#[test]
fn construction_count_exceeds_distinct_tables() {
    for (p, e, n, constructions, distinct) in [(2, 1, 2, 24, 24), (3, 1, 2, 1728, 432), (2, 2, 2, 103680, 11520)] {
        let f = Field::new(p, e, n).unwrap();
        let r = theorem12_census(&f, &FuncTable::identity(&f), &DualPair::standard(&f)).unwrap();
        let d = r.details.unwrap();
        assert_eq!(d["constructions"], constructions);
        assert_eq!(d["distinct_tables"], distinct);
        assert_eq!(d["all_constructions_pp"], true);
    }
}

/// For q ≡ 1 mod 4 the families are still PPs when gcd(m, q - 1) = 1, so
/// the "only if q ≡ 3 mod 4" half of the stated condition does not hold.
#[test]
fn family_conditions_are_only_sufficient() {
    let q = |v| ExampleParams { q: Some(v), ..Default::default() };
    for (id, v) in [("cubic", 5), ("cubic", 9), ("cubic", 17), ("quintic", 13), ("x11-general", 5)] {
        let r = reproduce(id, &q(v)).unwrap();
        assert_eq!(r.predicted, Some(false), "{id} q={v}");
        assert!(r.is_pp && !r.matches, "{id} q={v}");
    }
    for m in [2, 4] {
        let r = reproduce("x11", &ExampleParams { m: Some(m), ..Default::default() }).unwrap();
        assert!(r.is_pp && !r.matches, "x11 m={m}");
    }
    let r = reproduce("x11", &ExampleParams { m: Some(5), ..Default::default() }).unwrap();
    assert!(!r.is_pp && r.matches);
}

#[test]
fn omega_family() {
    for (qv, m, pp) in [(5, 3, true), (11, 5, false), (11, 7, true), (8, 3, true)] {
        let r = reproduce("omega", &ExampleParams { q: Some(qv), m: Some(m), ..Default::default() }).unwrap();
        assert_eq!(r.is_pp, pp, "q={qv} m={m}");
        assert!(r.matches);
    }
}
