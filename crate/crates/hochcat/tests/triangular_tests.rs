//! Upper triangular categories and the block decompositions of their
//! Hochschild complexes, checked entry by entry against the independently
//! built structure maps.

mod common;

use hochcat::dgcat::{identity_bimodule, BimoduleMap, DgBimodule, Elt, Pairing};
use hochcat::graded::Complex;
use hochcat::hochschild::{
    alpha, beta, compose_maps, eta, eta_inv, maps_equal_within_weight, mu_i, realize, Shape,
};
use hochcat::linalg::Field;
use hochcat::triangular::{decompose, triangular, TriangularCategory};
use hochcat::zoo;
use std::sync::Arc;

fn point_bimodule(pt: &hochcat::dgcat::CatRef, c: &Complex, name: &str) -> DgBimodule {
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

fn point_line_bimodule(field: Field) -> (hochcat::dgcat::CatRef, Arc<DgBimodule>) {
    let pt = zoo::point(field);
    let c = zoo::build_from_summands(field, &[(0, false)]);
    let x = Arc::new(point_bimodule(&pt, &c, "k"));
    (pt, x)
}

#[test]
fn t_of_unit_bimodule_is_t2() {
    let (pt, x) = point_line_bimodule(Field::Q);
    let t = triangular(vec![pt.clone(), pt.clone()], vec![x]).unwrap();
    t.cat.validate().unwrap();
    let t2 = zoo::t2(Field::Q);
    assert_eq!(t.cat.n_objects(), 2);
    assert_eq!(t.cat.total_hom_dim(), t2.total_hom_dim());
    for a in 0..2 {
        for b in 0..2 {
            assert!(t.cat.hom(a, b).space.same_dims(&t2.hom(a, b).space));
        }
    }
    // iota_i fully faithful
    for inc in &t.inclusions {
        inc.validate().unwrap();
        let flags = hochcat::dgcat::functor_predicates(inc).unwrap();
        assert!(flags.fully_faithful);
    }
}

#[test]
fn triangular_m2_and_m3_validate() {
    let (pt, x) = point_line_bimodule(Field::Q);
    let t2m = triangular(vec![pt.clone(), pt.clone(), pt.clone()], vec![x.clone(), x.clone()])
        .unwrap();
    t2m.cat.validate().unwrap();
    assert_eq!(t2m.cat.n_objects(), 3);
    let t3m = triangular(
        vec![pt.clone(), pt.clone(), pt.clone(), pt.clone()],
        vec![x.clone(), x.clone(), x.clone()],
    )
    .unwrap();
    t3m.cat.validate().unwrap();
    assert_eq!(t3m.cat.n_objects(), 4);
    // object count = sum of block object counts
    let kk = zoo::k_times_k(Field::Q);
    let ikk = Arc::new(identity_bimodule(&kk));
    let tk = triangular(vec![kk.clone(), kk.clone()], vec![ikk]).unwrap();
    tk.cat.validate().unwrap();
    assert_eq!(tk.cat.n_objects(), 4);
}

#[test]
fn triangular_graded_bimodule_validates() {
    // a disk-shaped bimodule exercises all signs in the glueing
    let pt = zoo::point(Field::Q);
    let c = zoo::build_from_summands(Field::Q, &[(0, true), (1, false)]);
    let x = Arc::new(point_bimodule(&pt, &c, "D"));
    let t = triangular(vec![pt.clone(), pt.clone()], vec![x]).unwrap();
    t.cat.validate().unwrap();
    let hc = realize(&Shape::cat(&t.cat), 3).unwrap();
    assert!(hc.complex.total_dim() > 0);
}

/// Shared m=1 fixture: T_X over points with X = k.
struct M1 {
    t: TriangularCategory,
    hc_t: hochcat::hochschild::HochComplex,
    dec: hochcat::triangular::BlockDecomposition,
}

fn m1(n: usize) -> M1 {
    let (pt, x) = point_line_bimodule(Field::Q);
    let t = triangular(vec![pt.clone(), pt.clone()], vec![x]).unwrap();
    let hc_t = realize(&Shape::cat(&t.cat), n).unwrap();
    let dec = decompose(&t, &hc_t).unwrap();
    M1 { t, hc_t, dec }
}

#[test]
fn decompose_m1_matches_cited_blocks() {
    let m = m1(4);
    assert_eq!(m.dec.summands.len(), 3);
    m.dec.check_lower_triangular(&m.hc_t).unwrap();
    // diagonal blocks equal the block differentials
    for si in 0..3 {
        let d_block = m.dec.block_entry(&m.hc_t, si, si);
        let own = &m.dec.summands[si].hc.complex.d;
        assert_eq!(&d_block, own, "diagonal block {si}");
    }
    // off-diagonal: tilde-alpha_X into D(X) from C(A), -tilde-beta_X from C(B)
    let hc_a = &m.dec.summands[0].hc;
    let hc_b = &m.dec.summands[1].hc;
    let hc_d = &m.dec.summands[2].hc;
    let x = m.t.hom_modules[&(1usize, 0usize)].clone();
    let shape_cx = Shape::c_bimod(vec![x.clone()], x.clone());
    let hc_cx = realize(&shape_cx, 4).unwrap();
    let e = eta(&hc_cx, hc_d);
    let at = compose_maps(&e, &alpha(hc_a, &hc_cx), hc_a, &hc_cx, hc_d).unwrap();
    let bt = compose_maps(&e, &beta(hc_b, &hc_cx), hc_b, &hc_cx, hc_d).unwrap();
    let entry_a = m.dec.block_entry(&m.hc_t, 2, 0);
    let entry_b = m.dec.block_entry(&m.hc_t, 2, 1);
    assert!(
        maps_equal_within_weight(&entry_a, &at, hc_a, &hc_d.complex.space, 3),
        "block (D(X), C(A)) = tilde-alpha"
    );
    let neg_bt = bt.scale(&-&Field::Q.one());
    assert!(
        maps_equal_within_weight(&entry_b, &neg_bt, hc_b, &hc_d.complex.space, 3),
        "block (D(X), C(B)) = -tilde-beta"
    );
    // the (C(A), C(B)) and upper blocks are zero
    assert!(m.dec.block_entry(&m.hc_t, 0, 1).is_zero());
    assert!(m.dec.block_entry(&m.hc_t, 1, 0).is_zero());
    assert!(m.dec.block_entry(&m.hc_t, 0, 2).is_zero());
    assert!(m.dec.block_entry(&m.hc_t, 1, 2).is_zero());
}

#[test]
fn decompose_m1_graded_bimodule() {
    // same block comparison with a graded bimodule (nontrivial d_X)
    let pt = zoo::point(Field::Q);
    let c = zoo::build_from_summands(Field::Q, &[(0, true)]);
    let x = Arc::new(point_bimodule(&pt, &c, "D0"));
    let t = triangular(vec![pt.clone(), pt.clone()], vec![x.clone()]).unwrap();
    let hc_t = realize(&Shape::cat(&t.cat), 3).unwrap();
    let dec = decompose(&t, &hc_t).unwrap();
    dec.check_lower_triangular(&hc_t).unwrap();
    let hc_a = &dec.summands[0].hc;
    let hc_b = &dec.summands[1].hc;
    let hc_d = &dec.summands[2].hc;
    let shape_cx = Shape::c_bimod(vec![x.clone()], x.clone());
    let hc_cx = realize(&shape_cx, 3).unwrap();
    let e = eta(&hc_cx, hc_d);
    let at = compose_maps(&e, &alpha(hc_a, &hc_cx), hc_a, &hc_cx, hc_d).unwrap();
    let bt = compose_maps(&e, &beta(hc_b, &hc_cx), hc_b, &hc_cx, hc_d).unwrap();
    assert!(maps_equal_within_weight(
        &dec.block_entry(&hc_t, 2, 0),
        &at,
        hc_a,
        &hc_d.complex.space,
        2
    ));
    assert!(maps_equal_within_weight(
        &dec.block_entry(&hc_t, 2, 1),
        &bt.scale(&-&Field::Q.one()),
        hc_b,
        &hc_d.complex.space,
        2
    ));
}

#[test]
fn decompose_m2_matches_cited_blocks() {
    // T_{X,Y} with X = Y = I_k over the point: all 7 diagonal and 6
    // sub-diagonal blocks match the cited matrix
    let (pt, x) = point_line_bimodule(Field::Q);
    let t = triangular(
        vec![pt.clone(), pt.clone(), pt.clone()],
        vec![x.clone(), x.clone()],
    )
    .unwrap();
    let n = 4;
    let hc_t = realize(&Shape::cat(&t.cat), n).unwrap();
    let dec = decompose(&t, &hc_t).unwrap();
    assert_eq!(dec.summands.len(), 7);
    dec.check_lower_triangular(&hc_t).unwrap();
    // summand order: C(A) C(B) C(C) D(X) D(Y) D(X(x)Y) D(X|Y)
    let names: Vec<&str> = dec.summands.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names[0], "C(k)");
    for si in 0..7 {
        let own = &dec.summands[si].hc.complex.d;
        assert_eq!(&dec.block_entry(&hc_t, si, si), own, "diag {si}");
    }
    let w = (n - 1) as i64;
    let field = Field::Q;
    let hc_a = &dec.summands[0].hc;
    let hc_b = &dec.summands[1].hc;
    let hc_c = &dec.summands[2].hc;
    let hc_dx = &dec.summands[3].hc;
    let hc_dy = &dec.summands[4].hc;
    let hc_dxy = &dec.summands[5].hc;
    let hc_dxy2 = &dec.summands[6].hc;
    let y = x.clone();
    let xy = t.hom_modules[&(2usize, 0usize)].clone();
    let td = t.tds[&(2usize, 0usize)].clone();
    // C(X), C(Y), C(X(x)Y), C(X|Y) realizations for the eta conjugations
    let hc_cx = realize(&Shape::c_bimod(vec![x.clone()], x.clone()), n).unwrap();
    let hc_cy = realize(&Shape::c_bimod(vec![y.clone()], y.clone()), n).unwrap();
    let hc_cxy = realize(&Shape::c_bimod(vec![xy.clone()], xy.clone()), n).unwrap();
    let hc_cxy2 = realize(&Shape::c_bimod(vec![x.clone(), y.clone()], xy.clone()), n).unwrap();
    // row D(X): tilde-alpha_X from C(A), -tilde-beta_X from C(B)
    let ex = eta(&hc_cx, hc_dx);
    let at_x = compose_maps(&ex, &alpha(hc_a, &hc_cx), hc_a, &hc_cx, hc_dx).unwrap();
    let bt_x = compose_maps(&ex, &beta(hc_b, &hc_cx), hc_b, &hc_cx, hc_dx).unwrap();
    assert!(maps_equal_within_weight(&dec.block_entry(&hc_t, 3, 0), &at_x, hc_a, &hc_dx.complex.space, w));
    assert!(maps_equal_within_weight(&dec.block_entry(&hc_t, 3, 1), &bt_x.scale(&-&field.one()), hc_b, &hc_dx.complex.space, w));
    // row D(Y): tilde-alpha_Y from C(B), -tilde-beta_Y from C(C)
    let ey = eta(&hc_cy, hc_dy);
    let at_y = compose_maps(&ey, &alpha(hc_b, &hc_cy), hc_b, &hc_cy, hc_dy).unwrap();
    let bt_y = compose_maps(&ey, &beta(hc_c, &hc_cy), hc_c, &hc_cy, hc_dy).unwrap();
    assert!(maps_equal_within_weight(&dec.block_entry(&hc_t, 4, 1), &at_y, hc_b, &hc_dy.complex.space, w));
    assert!(maps_equal_within_weight(&dec.block_entry(&hc_t, 4, 2), &bt_y.scale(&-&field.one()), hc_c, &hc_dy.complex.space, w));
    // row D(X (x) Y): tilde-alpha from C(A), -tilde-beta from C(C)
    let exy = eta(&hc_cxy, hc_dxy);
    let at_xy = compose_maps(&exy, &alpha(hc_a, &hc_cxy), hc_a, &hc_cxy, hc_dxy).unwrap();
    let bt_xy = compose_maps(&exy, &beta(hc_c, &hc_cxy), hc_c, &hc_cxy, hc_dxy).unwrap();
    assert!(maps_equal_within_weight(&dec.block_entry(&hc_t, 5, 0), &at_xy, hc_a, &hc_dxy.complex.space, w));
    assert!(maps_equal_within_weight(&dec.block_entry(&hc_t, 5, 2), &bt_xy.scale(&-&field.one()), hc_c, &hc_dxy.complex.space, w));
    assert!(dec.block_entry(&hc_t, 5, 1).is_zero());
    // row D(X|Y): -tilde-alpha_{X|Y} from D(X), -tilde-beta_{X|Y} from D(Y),
    // tilde-mu^1 from D(X (x) Y)
    let e_xy2 = eta(&hc_cxy2, hc_dxy2);
    let am = hochcat::hochschild::alpha_multi(&hc_cx, &hc_cxy2, &y, &td);
    let at_m = compose_maps(
        &compose_maps(&e_xy2, &am, &hc_cx, &hc_cxy2, hc_dxy2).unwrap(),
        &eta_inv(hc_dx, &hc_cx),
        hc_dx,
        &hc_cx,
        hc_dxy2,
    )
    .unwrap();
    assert!(
        maps_equal_within_weight(
            &dec.block_entry(&hc_t, 6, 3),
            &at_m.scale(&-&field.one()),
            hc_dx,
            &hc_dxy2.complex.space,
            w
        ),
        "-tilde-alpha_X|Y block"
    );
    let bm = hochcat::hochschild::beta_multi(&hc_cy, &hc_cxy2, &x, &td);
    let bt_m = compose_maps(
        &compose_maps(&e_xy2, &bm, &hc_cy, &hc_cxy2, hc_dxy2).unwrap(),
        &eta_inv(hc_dy, &hc_cy),
        hc_dy,
        &hc_cy,
        hc_dxy2,
    )
    .unwrap();
    assert!(
        maps_equal_within_weight(
            &dec.block_entry(&hc_t, 6, 4),
            &bt_m.scale(&-&field.one()),
            hc_dy,
            &hc_dxy2.complex.space,
            w
        ),
        "-tilde-beta_X|Y block"
    );
    let mu = mu_i(&hc_cxy, &hc_cxy2, 1, &td);
    let mu_t = compose_maps(
        &compose_maps(&e_xy2, &mu, &hc_cxy, &hc_cxy2, hc_dxy2).unwrap(),
        &eta_inv(hc_dxy, &hc_cxy),
        hc_dxy,
        &hc_cxy,
        hc_dxy2,
    )
    .unwrap();
    assert!(
        maps_equal_within_weight(
            &dec.block_entry(&hc_t, 6, 5),
            &mu_t,
            hc_dxy,
            &hc_dxy2.complex.space,
            w
        ),
        "tilde-mu^1 block"
    );
}

#[test]
fn decompose_m3_lower_triangular() {
    let (pt, x) = point_line_bimodule(Field::Q);
    let t = triangular(
        vec![pt.clone(), pt.clone(), pt.clone(), pt.clone()],
        vec![x.clone(), x.clone(), x.clone()],
    )
    .unwrap();
    let hc_t = realize(&Shape::cat(&t.cat), 4).unwrap();
    let dec = decompose(&t, &hc_t).unwrap();
    assert_eq!(dec.summands.len(), 15);
    dec.check_lower_triangular(&hc_t).unwrap();
    for si in 0..15 {
        let own = &dec.summands[si].hc.complex.d;
        assert_eq!(&dec.block_entry(&hc_t, si, si), own, "diag {si}");
    }
}

#[test]
fn t_functor_identity_and_scaling() {
    let (pt, x) = point_line_bimodule(Field::Q);
    let t = triangular(vec![pt.clone(), pt.clone()], vec![x.clone()]).unwrap();
    let idm = BimoduleMap::identity(&x);
    let f = hochcat::triangular::t_functor(&t, &t, &[&idm]).unwrap();
    f.validate().unwrap();
    let flags = hochcat::dgcat::functor_predicates(&f).unwrap();
    assert!(flags.fully_faithful && flags.quasi_equivalence);
    // a scaling isomorphism gives a dg isomorphism of T's
    let mut maps = std::collections::BTreeMap::new();
    let two = Field::Q.from_i64(2);
    for (&(b, a), c) in x.spaces() {
        maps.insert((b, a), hochcat::graded::GradedMap::identity(&c.space).scale(&two));
    }
    let scale = BimoduleMap { name: "x2".into(), maps };
    scale.validate(&x, &x).unwrap();
    let g = hochcat::triangular::t_functor(&t, &t, &[&scale]).unwrap();
    g.validate().unwrap();
    assert!(hochcat::dgcat::functor_predicates(&g).unwrap().fully_faithful);
}

#[test]
fn ac_complex_acyclic_over_point() {
    let (_, x) = point_line_bimodule(Field::Q);
    let ac = hochcat::triangular::ac_complex(&x, &x, 4).unwrap();
    let hi = ac.certified_hi.unwrap();
    assert!(hi >= 2, "certified window too small: {hi}");
    assert!(ac.acyclic_in_window(-1, hi).unwrap(), "ac(k|k) acyclic");
    // triangle realized via cone: cone(-s mu-tilde) ~ s(ac)
    let s_mu = {
        // -s o mu: D(X(x)Y) -> s D(X|Y); as a degree-0 chain map into the shift
        let shifted = hochcat::graded::shift(&ac.hc_dxy2.complex, 1);
        let mut m = hochcat::graded::GradedMap::zero(Field::Q, 0);
        for (deg, blk) in ac.mu_tilde.blocks() {
            // mu_tilde degree +1: block deg -> deg+1 of D(X|Y) = deg of shift
            m.set_block(*deg, blk.scale(&-&Field::Q.one()));
        }
        let cone = hochcat::graded::cone(&m, &ac.hc_dxy.complex, &shifted).unwrap();
        cone.complex
    };
    let s_ac = hochcat::graded::shift(&ac.complex, 1);
    assert!(s_mu.space.same_dims(&s_ac.space));
    let iso = hochcat::graded::find_chain_iso(&s_mu, &s_ac).unwrap();
    assert!(iso.is_some(), "cone(-s mu) ~ s ac(X|Y)");
}

#[test]
fn ac_complex_zero_module() {
    let pt = zoo::point(Field::Q);
    let zero = DgBimodule::new(
        "0",
        pt.clone(),
        pt.clone(),
        std::collections::BTreeMap::new(),
        std::collections::BTreeMap::new(),
        std::collections::BTreeMap::new(),
    );
    let z = Arc::new(zero);
    let (_, x) = point_line_bimodule(Field::Q);
    let ac = hochcat::triangular::ac_complex(&z, &x, 3).unwrap();
    assert_eq!(ac.complex.total_dim(), 0);
    assert!(ac.acyclic_in_window(-2, 2).unwrap());
}

#[test]
fn bar_complex_exactness() {
    let (pt, x) = point_line_bimodule(Field::Q);
    let t = triangular(
        vec![pt.clone(), pt.clone(), pt.clone()],
        vec![x.clone(), x.clone()],
    )
    .unwrap();
    let n = 4;
    let hc_t = realize(&Shape::cat(&t.cat), n).unwrap();
    let dec = decompose(&t, &hc_t).unwrap();
    let bar = hochcat::triangular::bar_complex(&t, &hc_t, &dec).unwrap();
    // the projection is a chain map and (over the point) a quasi-iso in window
    assert!(hochcat::graded::is_chain_map(
        &bar.projection,
        &hc_t.complex,
        &bar.complex
    ));
    let hi = hc_t.certified_hi.unwrap() - 1;
    assert!(
        hochcat::graded::is_quasi_iso_in_window(&bar.projection, &hc_t.complex, &bar.complex, 0, hi)
            .unwrap(),
        "projection quasi-iso over the point"
    );
    // rank identity: dim Cbar^n = dim C(T_X)^n + dim C(T_Y)^n - dim C(B)^n
    let (tx, _itx) = hochcat::triangular::sub_inclusion(&t, 0, 1).unwrap();
    let (ty, _ity) = hochcat::triangular::sub_inclusion(&t, 1, 2).unwrap();
    let hc_tx = realize(&Shape::cat(&tx.cat), n).unwrap();
    let hc_ty = realize(&Shape::cat(&ty.cat), n).unwrap();
    let hc_b = realize(&Shape::cat(&t.blocks[1]), n).unwrap();
    for deg in bar.complex.space.support() {
        assert_eq!(
            bar.complex.space.dim(deg) + hc_b.dim(deg),
            hc_tx.dim(deg) + hc_ty.dim(deg),
            "rank identity at degree {deg}"
        );
    }
    // exactness: the five bar summands [0],[1],[2],[1,0],[2,1] match the
    // union of T_X blocks ([0],[1],[1,0] relabeled) and T_Y blocks minus C(B)
    // projection on arity 0: section s with proj o s = id on weight 0
    // (the arity-0 part of Cbar is the arity-0 part of C(T))
    let deg0_t: usize = hc_t.dim(0);
    assert_eq!(bar.complex.space.dim(0), deg0_t);
}
