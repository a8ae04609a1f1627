//! The structure maps of the derived Hom complexes: actions, gamma, eta,
//! kappa, their cocycle degrees, the commuting squares, and the
//! quasi-isomorphism verdicts on identity bimodules.

mod common;

use hochcat::dgcat::identity_bimodule;
use hochcat::graded::{is_quasi_iso_in_window, GradedMap};
use hochcat::hochschild::{
    alpha, beta, compose_maps, eta, gamma, is_cocycle_map, is_cocycle_within_weight,
    kappa_a, maps_equal_within_weight, realize, HochComplex, Shape,
};
use hochcat::linalg::Field;
use hochcat::zoo;
use std::sync::Arc;

struct Setup {
    hc_a: HochComplex,   // C(A)
    hc_ci: HochComplex,  // C(I_A)
    hc_di: HochComplex,  // D(I_A)
}

fn setup(cat: &hochcat::dgcat::CatRef, n: usize) -> Setup {
    let i = Arc::new(identity_bimodule(cat));
    Setup {
        hc_a: realize(&Shape::cat(cat), n).unwrap(),
        hc_ci: realize(&Shape::c_bimod(vec![i.clone()], i.clone()), n).unwrap(),
        hc_di: realize(&Shape::d_bimod(vec![i.clone()], i.clone()), n).unwrap(),
    }
}

#[test]
fn actions_and_gamma_are_cocycles() {
    for cat in [zoo::point(Field::Q), zoo::t2(Field::Q)] {
        let s = setup(&cat, 4);
        let a = alpha(&s.hc_a, &s.hc_ci);
        assert!(is_cocycle_map(&a, &s.hc_a, &s.hc_ci), "alpha cocycle");
        let b = beta(&s.hc_a, &s.hc_ci);
        assert!(is_cocycle_map(&b, &s.hc_a, &s.hc_ci), "beta cocycle");
        let g = gamma(&s.hc_ci, &s.hc_a);
        // gamma lowers weight, so its cocycle identity holds below the edge
        assert!(
            is_cocycle_within_weight(&g, &s.hc_ci, &s.hc_a, 3),
            "gamma cocycle"
        );
        let k = kappa_a(&s.hc_a, &s.hc_di);
        assert_eq!(k.degree, 0);
        let e = eta(&s.hc_ci, &s.hc_di);
        assert!(is_cocycle_map(&e, &s.hc_ci, &s.hc_di), "eta cocycle");
    }
}

#[test]
fn gamma_unit_identities() {
    // gamma o alpha = 1 = gamma o beta on C_{<=N}(T2)
    let cat = zoo::t2(Field::Q);
    let s = setup(&cat, 4);
    let a = alpha(&s.hc_a, &s.hc_ci);
    let b = beta(&s.hc_a, &s.hc_ci);
    let g = gamma(&s.hc_ci, &s.hc_a);
    let ga = compose_maps(&g, &a, &s.hc_a, &s.hc_ci, &s.hc_a).unwrap();
    let gb = compose_maps(&g, &b, &s.hc_a, &s.hc_ci, &s.hc_a).unwrap();
    let id = GradedMap::identity(&s.hc_a.complex.space);
    // exact except at the truncation edge (alpha raises weight by one)
    assert!(
        maps_equal_within_weight(&ga, &id, &s.hc_a, &s.hc_a.complex.space, 3),
        "gamma alpha = 1"
    );
    assert!(
        maps_equal_within_weight(&gb, &id, &s.hc_a, &s.hc_a.complex.space, 3),
        "gamma beta = 1"
    );
}

#[test]
fn alpha_identity_bimodule_quasi_iso() {
    // alpha_{I_A} is a quasi-isomorphism in the certified window, A = k x k
    let cat = zoo::k_times_k(Field::Q);
    let s = setup(&cat, 4);
    let a = alpha(&s.hc_a, &s.hc_ci);
    let hi = s.hc_a.certified_hi.unwrap().min(s.hc_ci.certified_hi.unwrap());
    assert!(hi >= 2, "window too small: {hi}");
    let qi = is_quasi_iso_in_window(&a, &s.hc_a.complex, &s.hc_ci.complex, 0, hi).unwrap();
    assert!(qi, "alpha_I quasi-iso in window");
    let b = beta(&s.hc_a, &s.hc_ci);
    let qib = is_quasi_iso_in_window(&b, &s.hc_a.complex, &s.hc_ci.complex, 0, hi).unwrap();
    assert!(qib, "beta_I quasi-iso in window");
}

#[test]
fn kappa_delta_ledger_identity() {
    // kappa_A delta_{C(A)} = tilde-alpha_{I_A} - tilde-beta_{I_A} + delta_{D(I_A)} kappa_A
    for cat in [zoo::point(Field::Q), zoo::t2(Field::Q), zoo::dual_numbers(Field::Q)] {
        let s = setup(&cat, 4);
        let k = kappa_a(&s.hc_a, &s.hc_di);
        let e = eta(&s.hc_ci, &s.hc_di);
        let a_t = compose_maps(&e, &alpha(&s.hc_a, &s.hc_ci), &s.hc_a, &s.hc_ci, &s.hc_di).unwrap();
        let b_t = compose_maps(&e, &beta(&s.hc_a, &s.hc_ci), &s.hc_a, &s.hc_ci, &s.hc_di).unwrap();
        // lhs: kappa o delta
        let lhs = k
            .compose(
                &s.hc_a.complex.d,
                &s.hc_a.complex.space,
                &s.hc_a.complex.space,
                &s.hc_di.complex.space,
            )
            .unwrap();
        // rhs: tilde-alpha - tilde-beta + delta o kappa
        let dk = s
            .hc_di
            .complex
            .d
            .compose(
                &k,
                &s.hc_a.complex.space,
                &s.hc_di.complex.space,
                &s.hc_di.complex.space,
            )
            .unwrap();
        let rhs = a_t.sub(&b_t).unwrap().add(&dk).unwrap();
        assert!(
            maps_equal_within_weight(&lhs, &rhs, &s.hc_a, &s.hc_di.complex.space, 3),
            "kappa-delta ledger identity for {}",
            cat.name
        );
    }
}

#[test]
fn tilde_maps_are_one_cocycles() {
    let cat = zoo::t2(Field::Q);
    let s = setup(&cat, 4);
    let e = eta(&s.hc_ci, &s.hc_di);
    let a_t = compose_maps(&e, &alpha(&s.hc_a, &s.hc_ci), &s.hc_a, &s.hc_ci, &s.hc_di).unwrap();
    assert_eq!(a_t.degree, 1);
    assert!(is_cocycle_map(&a_t, &s.hc_a, &s.hc_di), "tilde-alpha 1-cocycle");
    let b_t = compose_maps(&e, &beta(&s.hc_a, &s.hc_ci), &s.hc_a, &s.hc_ci, &s.hc_di).unwrap();
    assert!(is_cocycle_map(&b_t, &s.hc_a, &s.hc_di), "tilde-beta 1-cocycle");
}

#[test]
fn c_bimod_over_point_dims_match_t2_pattern() {
    // C(I,I) over the point has dim 1 per arity per matching degree (the
    // D(I_k) part of C(T2) has dim n in degree n; the C part 2)
    let pt = zoo::point(Field::Q);
    let i = Arc::new(identity_bimodule(&pt));
    let hd = realize(&Shape::d_bimod(vec![i.clone()], i), 4).unwrap();
    for n in 1..=4i64 {
        assert_eq!(hd.dim(n) as i64, n, "D(I_k) degree {n}");
    }
}
