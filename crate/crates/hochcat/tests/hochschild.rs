//! Realization of the Hochschild-type complexes: structural checks,
//! dimensions against hand counts, cohomology against the classical
//! oracle, and the cup/brace identities.

mod common;

use common::ClassicalHochschild;
use hochcat::dgcat::{bimodule_tensor, identity_bimodule};
use hochcat::graded::{cohomology, is_chain_map, shift};
use hochcat::hochschild::{
    brace, check_delta_parts, check_filtration_stable, cup_cat, eta, is_cocycle_map, realize,
    Cochain, Shape,
};
use hochcat::linalg::Field;
use hochcat::zoo;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[test]
fn dims_of_c_point() {
    // dim C^n(k) = 1 in degree n for every n <= N
    let pt = zoo::point(Field::Q);
    let hc = realize(&Shape::cat(&pt), 5).unwrap();
    for n in 0..=5i64 {
        assert_eq!(hc.dim(n), 1, "C^{n}(k)");
    }
}

#[test]
fn dims_of_c_t2() {
    // dim C^n(T2) in degree n is n + 2 (paths of length n in the quiver)
    let t2 = zoo::t2(Field::Q);
    let hc = realize(&Shape::cat(&t2), 4).unwrap();
    for n in 0..=4i64 {
        assert_eq!(hc.dim(n) as i64, n + 2, "C^{n}(T2)");
    }
}

#[test]
fn delta_squared_zero_zoo() {
    // realize() re-checks d^2 = 0 exactly on construction
    for cat in [
        zoo::point(Field::Q),
        zoo::k_times_k(Field::Q),
        zoo::t2(Field::Q),
        zoo::dual_numbers(Field::Q),
    ] {
        let hc = realize(&Shape::cat(&cat), 4).unwrap();
        check_filtration_stable(&hc).unwrap();
        check_delta_parts(&hc).unwrap();
    }
}

#[test]
fn delta_squared_zero_graded_homs() {
    // a dg category with homs in several degrees: all Koszul signs live here
    let v = zoo::build_from_summands(Field::Q, &[(0, true), (1, false)]);
    let w = zoo::build_from_summands(Field::Q, &[(1, true)]);
    let cat = zoo::two_complex_dg_category(Field::Q, &v, &w);
    let hc = realize(&Shape::cat(&cat), 3).unwrap();
    check_filtration_stable(&hc).unwrap();
    check_delta_parts(&hc).unwrap();
    assert!(hc.complex.total_dim() > 0);
}

#[test]
fn bimodule_shapes_delta_squared() {
    let pt = zoo::point(Field::Q);
    let i = Arc::new(identity_bimodule(&pt));
    // C(I,I) over the point: dim 1 per arity in the matching degree
    let hc = realize(&Shape::c_bimod(vec![i.clone()], i.clone()), 4).unwrap();
    for n in 0..=3i64 {
        assert_eq!(hc.dim(n), n as usize + 1, "C^{n}(I,I) over k");
    }
    check_delta_parts(&hc).unwrap();
    // D version
    let hd = realize(&Shape::d_bimod(vec![i.clone()], i.clone()), 4).unwrap();
    check_delta_parts(&hd).unwrap();
    // bimodule with graded fibers over the point
    let x = {
        let c = zoo::build_from_summands(Field::Q, &[(0, true), (1, false)]);
        point_bimodule(&pt, &c)
    };
    let x = Arc::new(x);
    let hx = realize(&Shape::c_bimod(vec![x.clone()], x.clone()), 3).unwrap();
    check_delta_parts(&hx).unwrap();
    let hxd = realize(&Shape::d_bimod(vec![x.clone()], x.clone()), 3).unwrap();
    check_delta_parts(&hxd).unwrap();
    // two-module shape C(X|X, X (x) X)
    let xt = bimodule_tensor(&x, &x).unwrap();
    let hxx = realize(
        &Shape::c_bimod(vec![x.clone(), x.clone()], Arc::new(xt.module)),
        3,
    )
    .unwrap();
    check_delta_parts(&hxx).unwrap();
}

/// A bimodule over (point, point) whose only space is the given complex.
fn point_bimodule(pt: &hochcat::dgcat::CatRef, c: &hochcat::graded::Complex) -> hochcat::dgcat::DgBimodule {
    use hochcat::dgcat::{DgBimodule, Elt, Pairing};
    DgBimodule::new(
        format!("M{}", c.total_dim()),
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

#[test]
fn hochschild_cohomology_matches_oracle() {
    // HH^0(T2) = k
    let t2 = zoo::t2(Field::Q);
    let hc = realize(&Shape::cat(&t2), 5).unwrap();
    hc.check_window(0, 3).unwrap();
    let h = cohomology(&hc.complex, 0, 3).unwrap();
    assert_eq!(h[&0].0, 1, "HH^0(T2)");
    assert_eq!(h[&1].0, 0);
    assert_eq!(h[&2].0, 0);
    assert_eq!(h[&3].0, 0);

    // HH^0(k x k) = k^2
    let kk = zoo::k_times_k(Field::Q);
    let hkk = realize(&Shape::cat(&kk), 4).unwrap();
    let h = cohomology(&hkk.complex, 0, 2).unwrap();
    assert_eq!(h[&0].0, 2, "HH^0(kxk)");

    // HH^n(k) = 0 for 1 <= n <= 3, HH^0(k) = k
    let pt = zoo::point(Field::Q);
    let hp = realize(&Shape::cat(&pt), 5).unwrap();
    let h = cohomology(&hp.complex, 0, 3).unwrap();
    assert_eq!(h[&0].0, 1);
    for n in 1..=3i64 {
        assert_eq!(h[&n].0, 0, "HH^{n}(k)");
    }

    // dual numbers: (2,1,1,1) against the classical oracle
    let dual = zoo::dual_numbers(Field::Q);
    let oracle = ClassicalHochschild::new(&dual);
    let expected = oracle.hh_dims(3);
    assert_eq!(expected, vec![2, 1, 1, 1], "oracle values recomputed");
    let hd = realize(&Shape::cat(&dual), 5).unwrap();
    hd.check_window(0, 3).unwrap();
    let h = cohomology(&hd.complex, 0, 3).unwrap();
    for n in 0..=3usize {
        assert_eq!(h[&(n as i64)].0, expected[n], "HH^{n}(k[x]/x^2)");
    }
}

#[test]
fn safe_window_rule() {
    // for an ordinary algebra, HH^n at truncation N agrees with N+1 for
    // all n <= N - 1
    let dual = zoo::dual_numbers(Field::Q);
    let h4 = realize(&Shape::cat(&dual), 4).unwrap();
    let h5 = realize(&Shape::cat(&dual), 5).unwrap();
    let a = cohomology(&h4.complex, 0, 3).unwrap();
    let b = cohomology(&h5.complex, 0, 3).unwrap();
    for n in 0..=3i64 {
        assert_eq!(a[&n].0, b[&n].0, "safe window at degree {n}");
    }
    assert!(h4.check_window(0, 3).is_ok());
    assert!(h4.check_window(0, 4).is_err());
}

#[test]
fn cup_unit_and_point_generators() {
    let pt = zoo::point(Field::Q);
    let hc = realize(&Shape::cat(&pt), 5).unwrap();
    let unit = hc.unit_cochain().unwrap();
    // generators of C(k) in each degree
    let gen = |n: i64| {
        let g = hc.gens[&n][0].clone();
        Cochain::from_gen(&hc, &g).unwrap()
    };
    for n in 0..=4i64 {
        let phi = gen(n);
        let lhs = cup_cat(&hc, &unit, &phi).unwrap();
        assert!(lhs.eq_within_guarantee(&phi, &hc), "1 cup phi = phi at {n}");
        let rhs = cup_cat(&hc, &phi, &unit).unwrap();
        assert!(rhs.eq_within_guarantee(&phi, &hc), "phi cup 1 = phi at {n}");
    }
    // cup of degree-n and degree-m generators is +-(the degree n+m one)
    for n in 1..=2i64 {
        for m in 1..=2i64 {
            let prod = cup_cat(&hc, &gen(n), &gen(m)).unwrap();
            assert_eq!(prod.degree, n + m);
            assert_eq!(prod.coords.len(), 1);
            let (_, c) = &prod.coords[0];
            assert!(c.is_one() || (-c).is_one());
        }
    }
}

#[test]
fn cup_leibniz_on_t2() {
    let t2 = zoo::t2(Field::Q);
    let hc = realize(&Shape::cat(&t2), 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for (dp, dq) in [(0i64, 0i64), (0, 1), (1, 1), (1, 2), (2, 1)] {
        let phi = hc.random_cochain(&mut rng, dp);
        let psi = hc.random_cochain(&mut rng, dq);
        // delta(phi cup psi) = delta phi cup psi + (-1)^{|phi|} phi cup delta psi
        let lhs = hc.delta(&cup_cat(&hc, &phi, &psi).unwrap());
        let t1 = cup_cat(&hc, &hc.delta(&phi), &psi).unwrap();
        let t2_ = cup_cat(&hc, &phi, &hc.delta(&psi)).unwrap();
        let sgn = hochcat::linalg::sign(Field::Q, dp);
        let rhs = t1.add(&t2_.scale(&sgn)).unwrap();
        assert!(lhs.eq_within_guarantee(&rhs, &hc), "Leibniz at ({dp},{dq})");
    }
}

#[test]
fn cup_associative_on_dual() {
    let dual = zoo::dual_numbers(Field::Q);
    let hc = realize(&Shape::cat(&dual), 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let a = hc.random_cochain(&mut rng, 1);
        let b = hc.random_cochain(&mut rng, 1);
        let c = hc.random_cochain(&mut rng, 2);
        let lhs = cup_cat(&hc, &cup_cat(&hc, &a, &b).unwrap(), &c).unwrap();
        let rhs = cup_cat(&hc, &a, &cup_cat(&hc, &b, &c).unwrap()).unwrap();
        assert!(lhs.eq_within_guarantee(&rhs, &hc));
    }
}

#[test]
fn brace_conventions_and_bookkeeping() {
    let t2 = zoo::t2(Field::Q);
    let hc = realize(&Shape::cat(&t2), 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let phi = hc.random_cochain(&mut rng, 2);
    // phi{} = phi
    let same = brace(&hc, &phi, &[], &hc).unwrap();
    assert_eq!(same, phi);
    // arity bookkeeping: degree of phi{psi} is |phi| + |psi| - 1 and the
    // guarantee drops by one
    let psi = hc.random_cochain(&mut rng, 1);
    let b = brace(&hc, &phi, &[(&hc, &psi)], &hc).unwrap();
    assert_eq!(b.degree, 2 + 1 - 1);
    assert_eq!(b.guarantee, 3);
}

#[test]
fn brace_pre_jacobi() {
    // x{y}{z} = x{y{z}} + x{y,z} + (-1)^{(|y|-1)(|z|-1)} x{z,y}
    let t2 = zoo::t2(Field::Q);
    let hc = realize(&Shape::cat(&t2), 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (dx, dy, dz) in [(2i64, 1i64, 1i64), (2, 1, 2), (1, 1, 1), (2, 2, 1)] {
        let x = hc.random_cochain(&mut rng, dx);
        let y = hc.random_cochain(&mut rng, dy);
        let z = hc.random_cochain(&mut rng, dz);
        let lhs = brace(&hc, &brace(&hc, &x, &[(&hc, &y)], &hc).unwrap(), &[(&hc, &z)], &hc).unwrap();
        let t1 = brace(&hc, &x, &[(&hc, &brace(&hc, &y, &[(&hc, &z)], &hc).unwrap())], &hc).unwrap();
        let t2_ = brace(&hc, &x, &[(&hc, &y), (&hc, &z)], &hc).unwrap();
        let t3 = brace(&hc, &x, &[(&hc, &z), (&hc, &y)], &hc).unwrap();
        let sgn = hochcat::linalg::sign(Field::Q, (dy - 1) * (dz - 1));
        let rhs = t1.add(&t2_).unwrap().add(&t3.scale(&sgn)).unwrap();
        assert!(
            lhs.eq_within_guarantee(&rhs, &hc),
            "pre-Jacobi at ({dx},{dy},{dz})"
        );
    }
}

#[test]
fn eta_is_cocycle_and_shift_iso() {
    let pt = zoo::point(Field::Q);
    let x = Arc::new(point_bimodule(
        &pt,
        &zoo::build_from_summands(Field::Q, &[(0, true), (0, false)]),
    ));
    let hc = realize(&Shape::c_bimod(vec![x.clone()], x.clone()), 3).unwrap();
    let hd = realize(&Shape::d_bimod(vec![x.clone()], x.clone()), 3).unwrap();
    let e = eta(&hc, &hd);
    // 1-cocycle in Hom(C(X), D(X))
    assert!(is_cocycle_map(&e, &hc, &hd), "eta is a cocycle");
    // eta induces D(X,X') ~ s^{-1} C(X,X') as complexes
    let s_inv = shift(&hc.complex, -1);
    assert!(s_inv.space.same_dims(&hd.complex.space));
    // the sign-adjusted identity map out of the shift is exactly eta; as a
    // sanity check, eta's blocks are invertible degreewise
    for deg in hc.complex.space.support() {
        let b = e.block(&hc.complex.space, &hd.complex.space, deg);
        assert!(b.is_invertible(), "eta block at {deg}");
    }
    let _ = is_chain_map; // (referenced for doc purposes)
}

#[test]
fn rejects_empty_module_list() {
    // the m = 0 degenerate bimodule shape is rejected
    let result = std::panic::catch_unwind(|| {
        let pt = zoo::point(Field::Q);
        let i = Arc::new(identity_bimodule(&pt));
        Shape::c_bimod(vec![], i)
    });
    assert!(result.is_err());
}
