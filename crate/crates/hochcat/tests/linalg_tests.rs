//! The exact linear algebra kernel against independent oracles and
//! property-based invariants.

mod common;

use common::{bareiss_rank_fp, bareiss_rank_int};
use hochcat::linalg::{pullback_linear, Field, Matrix, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_f5_ranks_match_bareiss() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..25 {
        let mut entries = Vec::new();
        let mut triplets = Vec::new();
        for r in 0..6usize {
            for c in 0..6usize {
                let v: u64 = rng.gen_range(0..5);
                if v != 0 {
                    entries.push((r, c, v));
                    triplets.push((r, c, Scalar::Fp { p: 5, v }));
                }
            }
        }
        let m = Matrix::from_triplets(Field::Fp(5), 6, 6, triplets).unwrap();
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank, bareiss_rank_fp(5, 6, 6, &entries), "rank vs oracle");
        assert_eq!(rank + kernel.len(), 6);
        for v in &kernel {
            let img = m.apply(v).unwrap();
            assert!(img.iter().all(|x| x.is_zero()), "kernel vector");
        }
    }
}

#[test]
fn random_integer_ranks_match_bareiss() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..15 {
        let mut entries = Vec::new();
        let mut triplets = Vec::new();
        for r in 0..5usize {
            for c in 0..7usize {
                let v: i64 = rng.gen_range(-3..=3);
                if v != 0 {
                    entries.push((r, c, v as i128));
                    triplets.push((r, c, Field::Q.from_i64(v)));
                }
            }
        }
        let m = Matrix::from_triplets(Field::Q, 5, 7, triplets).unwrap();
        assert_eq!(m.rank(), bareiss_rank_int(5, 7, &entries));
    }
}

#[test]
fn pullback_dim_example() {
    // f : k^2 -> k the sum map, g = id_k: dim P = 2
    let f = Matrix::from_triplets(
        Field::Q,
        1,
        2,
        vec![(0, 0, Field::Q.one()), (0, 1, Field::Q.one())],
    )
    .unwrap();
    let g = Matrix::identity(Field::Q, 1);
    let pb = pullback_linear(&f, &g).unwrap();
    assert_eq!(pb.dim, 2);
    // f p1 = g p2
    assert_eq!(f.mul(&pb.p1).unwrap(), g.mul(&pb.p2).unwrap());
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-4i64..=4, rows * cols).prop_map(move |vals| {
        let mut triplets = Vec::new();
        for (k, v) in vals.into_iter().enumerate() {
            if v != 0 {
                triplets.push((k / cols, k % cols, Field::Q.from_i64(v)));
            }
        }
        Matrix::from_triplets(Field::Q, rows, cols, triplets).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_equals_rank_of_transpose(m in arb_matrix(4, 5)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn solve_iff_rank_condition(m in arb_matrix(4, 3), b in proptest::collection::vec(-4i64..=4, 4)) {
        let rhs: Vec<Scalar> = b.iter().map(|&v| Field::Q.from_i64(v)).collect();
        let rhs_m = Matrix::from_columns(Field::Q, 4, &[rhs.clone()]);
        let aug = m.hstack(&rhs_m).unwrap();
        let solvable = m.solve(&rhs).unwrap().is_some();
        prop_assert_eq!(solvable, m.rank() == aug.rank());
        if let Some(x) = m.solve(&rhs).unwrap() {
            prop_assert_eq!(m.apply(&x).unwrap(), rhs);
        }
    }

    #[test]
    fn pullback_dimension_formula(f in arb_matrix(3, 4), g in arb_matrix(3, 2)) {
        // dim P = dim U + dim V - rank(stacked difference matrix)
        let pb = pullback_linear(&f, &g).unwrap();
        let stacked = f.hstack(&g.scale(&-&Field::Q.one())).unwrap();
        prop_assert_eq!(pb.dim, 4 + 2 - stacked.rank());
        prop_assert_eq!(f.mul(&pb.p1).unwrap(), g.mul(&pb.p2).unwrap());
    }
}
