//! The theta-maps between Hochschild complexes of triangular categories:
//! chain-map and retraction identities, the kappa ledger identities, and
//! quasi-isomorphism verdicts in the certified windows.

mod common;

use hochcat::dgcat::{DgBimodule, Elt, Pairing};
use hochcat::graded::{is_chain_map, is_quasi_iso_in_window, GradedMap};
use hochcat::hochschild::{
    alpha, apply_map, beta, beta_multi, compose_maps, cup, eta, eta_inv, kappa_a, kappa_x_left,
    maps_equal_within_weight, realize, restriction, HochComplex, Shape,
};
use hochcat::linalg::Field;
use hochcat::triangular::{
    decompose, inclusion_outer, sub_inclusion, theta_a, theta_a2, theta_x, theta_x_prime,
    triangular, TriangularCategory,
};
use hochcat::zoo;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn identity_setup(
    cat: &hochcat::dgcat::CatRef,
    n: usize,
) -> (TriangularCategory, HochComplex, hochcat::triangular::BlockDecomposition, HochComplex) {
    let i = Arc::new(hochcat::dgcat::identity_bimodule(cat));
    let t = triangular(vec![cat.clone(), cat.clone()], vec![i]).unwrap();
    let hc_t = realize(&Shape::cat(&t.cat), n).unwrap();
    let dec = decompose(&t, &hc_t).unwrap();
    let hc_a = realize(&Shape::cat(cat), n).unwrap();
    (t, hc_t, dec, hc_a)
}

#[test]
fn theta_a_identities() {
    for cat in [zoo::point(Field::Q), zoo::t2(Field::Q)] {
        let n = 4;
        let (t, hc_t, dec, hc_a) = identity_setup(&cat, n);
        let th = theta_a(&hc_a, &hc_t, &dec).unwrap();
        // chain map (0-cocycle)
        assert!(
            is_chain_map(&th.map, &hc_a.complex, &hc_t.complex),
            "theta_A chain map for {}",
            cat.name
        );
        // iota_i^* theta = 1
        let r1 = restriction(&t.inclusions[0], &hc_t, &hc_a).unwrap();
        let r2 = restriction(&t.inclusions[1], &hc_t, &hc_a).unwrap();
        let id = GradedMap::identity(&hc_a.complex.space);
        for (i, r) in [(1, &r1), (2, &r2)] {
            let c = compose_maps(r, &th.map, &hc_a, &hc_t, &hc_a).unwrap();
            assert_eq!(c, id, "iota{i}* theta_A = 1 for {}", cat.name);
        }
        // quasi-iso in the certified window
        let hi = hc_a.certified_hi.unwrap().min(hc_t.certified_hi.unwrap());
        assert!(hi >= 2);
        assert!(
            is_quasi_iso_in_window(&th.map, &hc_a.complex, &hc_t.complex, 0, hi).unwrap(),
            "theta_A quasi-iso for {}",
            cat.name
        );
        // iota_i^* are fibrations (degreewise surjective restrictions)
        let flags = hochcat::graded::classify_map(&r1, &hc_t.complex, &hc_a.complex).unwrap();
        assert!(flags.is_fibration, "iota1* surjective");
    }
}

#[test]
fn theta_a2_identities() {
    let cat = zoo::point(Field::Q);
    let n = 4;
    let i = Arc::new(hochcat::dgcat::identity_bimodule(&cat));
    let t = triangular(
        vec![cat.clone(), cat.clone(), cat.clone()],
        vec![i.clone(), i.clone()],
    )
    .unwrap();
    let hc_t = realize(&Shape::cat(&t.cat), n).unwrap();
    let dec = decompose(&t, &hc_t).unwrap();
    let hc_a = realize(&Shape::cat(&cat), n).unwrap();
    let th = theta_a2(&t, &hc_a, &hc_t, &dec).unwrap();
    assert!(is_chain_map(&th.map, &hc_a.complex, &hc_t.complex), "theta_A^2 chain map");
    let id = GradedMap::identity(&hc_a.complex.space);
    for b in 0..3usize {
        let r = restriction(&t.inclusions[b], &hc_t, &hc_a).unwrap();
        let c = compose_maps(&r, &th.map, &hc_a, &hc_t, &hc_a).unwrap();
        assert_eq!(c, id, "iota{}* theta_A^2 = 1", b + 1);
    }
    let hi = hc_a.certified_hi.unwrap().min(hc_t.certified_hi.unwrap());
    assert!(
        is_quasi_iso_in_window(&th.map, &hc_a.complex, &hc_t.complex, 0, hi).unwrap(),
        "theta_A^2 quasi-iso"
    );
}

fn point_bimodule(pt: &hochcat::dgcat::CatRef, c: &hochcat::graded::Complex, name: &str) -> DgBimodule {
    DgBimodule::new(
        name,
        pt.clone(),
        pt.clone(),
        [((0usize, 0usize), c.clone())].into(),
        [(
            (0usize, 0usize, 0usize),
            Pairing::from_basis_fn(pt.hom(0, 0), c, c, |_, _, dr, ir| {
                Elt::basis(&c.space, dr, ir).coords
            }),
        )]
        .into(),
        [(
            (0usize, 0usize, 0usize),
            Pairing::from_basis_fn(c, pt.hom(0, 0), c, |dl, il, _, _| {
                Elt::basis(&c.space, dl, il).coords
            }),
        )]
        .into(),
    )
}

fn theta_x_setup(
    x: Arc<DgBimodule>,
    n: usize,
) -> (
    TriangularCategory, // T_X
    HochComplex,
    hochcat::triangular::BlockDecomposition,
    TriangularCategory, // T_{X,I_B}
    HochComplex,
    hochcat::triangular::BlockDecomposition,
) {
    let a_cat = x.left_cat.clone();
    let b_cat = x.right_cat.clone();
    let t_src = triangular(vec![a_cat.clone(), b_cat.clone()], vec![x.clone()]).unwrap();
    let ib = Arc::new(hochcat::dgcat::identity_bimodule(&b_cat));
    let t_tgt = triangular(
        vec![a_cat.clone(), b_cat.clone(), b_cat.clone()],
        vec![x.clone(), ib],
    )
    .unwrap();
    let hc_src = realize(&Shape::cat(&t_src.cat), n).unwrap();
    let dec_src = decompose(&t_src, &hc_src).unwrap();
    let hc_tgt = realize(&Shape::cat(&t_tgt.cat), n).unwrap();
    let dec_tgt = decompose(&t_tgt, &hc_tgt).unwrap();
    (t_src, hc_src, dec_src, t_tgt, hc_tgt, dec_tgt)
}

#[test]
fn theta_x_identities() {
    let pt = zoo::point(Field::Q);
    for (name, c) in [
        ("line", zoo::build_from_summands(Field::Q, &[(0, false)])),
        ("disk", zoo::build_from_summands(Field::Q, &[(0, true)])),
    ] {
        let x = Arc::new(point_bimodule(&pt, &c, name));
        let n = 3;
        let (t_src, hc_src, dec_src, t_tgt, hc_tgt, dec_tgt) = theta_x_setup(x.clone(), n);
        let th = theta_x(&t_tgt, &dec_src, &hc_src, &dec_tgt, &hc_tgt).unwrap();
        assert!(
            is_chain_map(&th.map, &hc_src.complex, &hc_tgt.complex),
            "theta_X chain map ({name})"
        );
        // iota_{12}* theta_X = 1
        let (_, i12) = sub_inclusion(&t_tgt, 0, 1).unwrap();
        let r12 = restriction(&i12, &hc_tgt, &hc_src).unwrap();
        let id = GradedMap::identity(&hc_src.complex.space);
        let c12 = compose_maps(&r12, &th.map, &hc_src, &hc_tgt, &hc_src).unwrap();
        assert_eq!(c12, id, "iota12* theta_X = 1 ({name})");
        // iota_{13}* theta_X = 1
        let emb = hocha_unit_right(&t_tgt, &x);
        let i13 = inclusion_outer(&t_src, &t_tgt, &emb).unwrap();
        i13.validate().unwrap();
        let r13 = restriction(&i13, &hc_tgt, &hc_src).unwrap();
        let c13 = compose_maps(&r13, &th.map, &hc_src, &hc_tgt, &hc_src).unwrap();
        assert_eq!(c13, id, "iota13* theta_X = 1 ({name})");
        // quasi-iso in window
        let hi = hc_src.certified_hi.unwrap().min(hc_tgt.certified_hi.unwrap());
        assert!(
            is_quasi_iso_in_window(&th.map, &hc_src.complex, &hc_tgt.complex, 0, hi).unwrap(),
            "theta_X quasi-iso ({name})"
        );
        let _ = t_src;
    }
}

fn hocha_unit_right(
    t_tgt: &TriangularCategory,
    x: &Arc<DgBimodule>,
) -> hochcat::dgcat::BimoduleMap {
    hochcat::dgcat::unit_right_embed(&t_tgt.tds[&(2usize, 0usize)], x)
}

#[test]
fn theta_x_prime_identities() {
    let pt = zoo::point(Field::Q);
    let c = zoo::build_from_summands(Field::Q, &[(0, false)]);
    let x = Arc::new(point_bimodule(&pt, &c, "k"));
    let n = 3;
    let a_cat = x.left_cat.clone();
    let b_cat = x.right_cat.clone();
    let t_src = triangular(vec![a_cat.clone(), b_cat.clone()], vec![x.clone()]).unwrap();
    let ia = Arc::new(hochcat::dgcat::identity_bimodule(&a_cat));
    let t_tgt = triangular(
        vec![a_cat.clone(), a_cat.clone(), b_cat.clone()],
        vec![ia, x.clone()],
    )
    .unwrap();
    let hc_src = realize(&Shape::cat(&t_src.cat), n).unwrap();
    let dec_src = decompose(&t_src, &hc_src).unwrap();
    let hc_tgt = realize(&Shape::cat(&t_tgt.cat), n).unwrap();
    let dec_tgt = decompose(&t_tgt, &hc_tgt).unwrap();
    let th = theta_x_prime(&t_tgt, &dec_src, &hc_src, &dec_tgt, &hc_tgt).unwrap();
    assert!(is_chain_map(&th.map, &hc_src.complex, &hc_tgt.complex), "theta'_X chain map");
    // iota_{23}* theta'_X = 1
    let (_, i23) = sub_inclusion(&t_tgt, 1, 2).unwrap();
    let r23 = restriction(&i23, &hc_tgt, &hc_src).unwrap();
    let id = GradedMap::identity(&hc_src.complex.space);
    assert_eq!(
        compose_maps(&r23, &th.map, &hc_src, &hc_tgt, &hc_src).unwrap(),
        id,
        "iota23* theta'_X = 1"
    );
    // iota_{13}* theta'_X = 1
    let emb = hochcat::dgcat::unit_left_embed(&t_tgt.tds[&(2usize, 0usize)], &x);
    let i13 = inclusion_outer(&t_src, &t_tgt, &emb).unwrap();
    i13.validate().unwrap();
    let r13 = restriction(&i13, &hc_tgt, &hc_src).unwrap();
    assert_eq!(
        compose_maps(&r13, &th.map, &hc_src, &hc_tgt, &hc_src).unwrap(),
        id,
        "iota13* theta'_X = 1"
    );
    let hi = hc_src.certified_hi.unwrap().min(hc_tgt.certified_hi.unwrap());
    assert!(
        is_quasi_iso_in_window(&th.map, &hc_src.complex, &hc_tgt.complex, 0, hi).unwrap(),
        "theta'_X quasi-iso"
    );
}

#[test]
fn kappa_cup_ledger() {
    // kappa(phi cup psi) = kappa(phi) cup psi + phi cup kappa(psi)
    let cat = zoo::t2(Field::Q);
    let n = 4;
    let hc_a = realize(&Shape::cat(&cat), n).unwrap();
    let i = Arc::new(hochcat::dgcat::identity_bimodule(&cat));
    let hc_di = realize(&Shape::d_bimod(vec![i.clone()], i.clone()), n).unwrap();
    let k = kappa_a(&hc_a, &hc_di);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (dp, dq) in [(1i64, 1i64), (1, 2), (2, 1), (2, 2)] {
        let phi = hc_a.random_cochain(&mut rng, dp);
        let psi = hc_a.random_cochain(&mut rng, dq);
        let cup_ab = hochcat::hochschild::cup_cat(&hc_a, &phi, &psi).unwrap();
        let lhs = apply_map(&k, &hc_a, &hc_di, &cup_ab);
        let k_phi = apply_map(&k, &hc_a, &hc_di, &phi);
        let k_psi = apply_map(&k, &hc_a, &hc_di, &psi);
        let t1 = cup(&hc_di, &k_phi, &hc_a, &psi, &hc_di, None).unwrap();
        let t2 = cup(&hc_a, &phi, &hc_di, &k_psi, &hc_di, None).unwrap();
        let rhs = t1.add(&t2).unwrap();
        assert!(
            lhs.eq_within_guarantee(&rhs, &hc_di),
            "kappa-cup ledger at ({dp},{dq})"
        );
    }
}

#[test]
fn kappa_x_left_ledger_identities() {
    // kappa_X^l tilde-alpha_X = 0 and kappa_X^l tilde-beta_X = tilde-beta_{X|I} kappa_B
    let pt = zoo::point(Field::Q);
    let c = zoo::build_from_summands(Field::Q, &[(0, false)]);
    let x = Arc::new(point_bimodule(&pt, &c, "k"));
    let n = 3;
    let b_cat = x.right_cat.clone();
    let ib = Arc::new(hochcat::dgcat::identity_bimodule(&b_cat));
    let td_xi = Arc::new(hochcat::dgcat::bimodule_tensor(&x, &ib).unwrap());
    let xi = Arc::new(td_xi.module.clone());
    let hc_a = realize(&Shape::cat(&pt), n).unwrap();
    let hc_b = realize(&Shape::cat(&b_cat), n).unwrap();
    let hc_cx = realize(&Shape::c_bimod(vec![x.clone()], x.clone()), n).unwrap();
    let hc_dx = realize(&Shape::d_bimod(vec![x.clone()], x.clone()), n).unwrap();
    let hc_cxi = realize(&Shape::c_bimod(vec![x.clone(), ib.clone()], xi.clone()), n).unwrap();
    let hc_dxi = realize(&Shape::d_bimod(vec![x.clone(), ib.clone()], xi.clone()), n).unwrap();
    let hc_cib = realize(&Shape::c_bimod(vec![ib.clone()], ib.clone()), n).unwrap();
    let hc_dib = realize(&Shape::d_bimod(vec![ib.clone()], ib.clone()), n).unwrap();
    let kxl = kappa_x_left(&hc_dx, &hc_dxi, &td_xi);
    // tilde-alpha_X = eta alpha
    let e_x = eta(&hc_cx, &hc_dx);
    let at = compose_maps(&e_x, &alpha(&hc_a, &hc_cx), &hc_a, &hc_cx, &hc_dx).unwrap();
    let comp0 = compose_maps(&kxl, &at, &hc_a, &hc_dx, &hc_dxi).unwrap();
    assert!(comp0.is_zero(), "kappa_X^l tilde-alpha_X = 0");
    // the commuting square
    let bt = compose_maps(&e_x, &beta(&hc_b, &hc_cx), &hc_b, &hc_cx, &hc_dx).unwrap();
    let lhs = compose_maps(&kxl, &bt, &hc_b, &hc_dx, &hc_dxi).unwrap();
    let kb = kappa_a(&hc_b, &hc_dib);
    let bm = beta_multi(&hc_cib, &hc_cxi, &x, &td_xi);
    let e_xi = eta(&hc_cxi, &hc_dxi);
    let e_ib_inv = eta_inv(&hc_dib, &hc_cib);
    let bt_multi = compose_maps(
        &compose_maps(&e_xi, &bm, &hc_cib, &hc_cxi, &hc_dxi).unwrap(),
        &e_ib_inv,
        &hc_dib,
        &hc_cib,
        &hc_dxi,
    )
    .unwrap();
    let rhs = compose_maps(&bt_multi, &kb, &hc_b, &hc_dib, &hc_dxi).unwrap();
    assert!(
        maps_equal_within_weight(&lhs, &rhs, &hc_b, &hc_dxi.complex.space, (n - 1) as i64),
        "kappa-beta commuting square"
    );
}
