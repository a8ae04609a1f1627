use super::realize::{
    slots_of, target_complex, Gen, HochComplex, Profile, SlotRef,
};
use super::{Shape, Target};
use crate::dgcat::{basis_iter, BimoduleMap, BimoduleTensor, DgBimodule, DgFunctor, Elt};
use crate::graded::{is_chain_map, GradedMap};
use crate::linalg::{Matrix, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Build a graded map column-wise: `f(src_gen)` lists (target gen, coeff).
pub fn map_from_cols(
    src: &HochComplex,
    tgt: &HochComplex,
    degree: i64,
    f: impl Fn(&Gen) -> Vec<(Gen, Scalar)>,
) -> GradedMap {
    let field = src.field();
    let mut blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&deg, gens) in &src.gens {
        for (col, g) in gens.iter().enumerate() {
            for (tg, c) in f(g) {
                if c.is_zero() {
                    continue;
                }
                let Some((tdeg, row)) = tgt.position(&tg) else {
                    continue; // weight overflow
                };
                debug_assert_eq!(tdeg, deg + degree);
                blocks
                    .entry(deg)
                    .or_insert_with(|| {
                        Matrix::zero(field, tgt.dim(deg + degree), src.dim(deg))
                    })
                    .add_to(row, col, &c);
            }
        }
    }
    let mut m = GradedMap::zero(field, degree);
    for (deg, b) in blocks {
        if !b.is_zero() {
            m.set_block(deg, b);
        }
    }
    m
}

/// Build a graded map row-wise: `f(tgt_gen)` lists (source gen, coeff).
pub fn map_from_rows(
    src: &HochComplex,
    tgt: &HochComplex,
    degree: i64,
    f: impl Fn(&Gen) -> Vec<(Gen, Scalar)>,
) -> GradedMap {
    let field = src.field();
    let mut blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (&tdeg, gens) in &tgt.gens {
        for (row, g) in gens.iter().enumerate() {
            for (sg, c) in f(g) {
                if c.is_zero() {
                    continue;
                }
                let Some((sdeg, col)) = src.position(&sg) else {
                    continue;
                };
                debug_assert_eq!(tdeg, sdeg + degree);
                blocks
                    .entry(sdeg)
                    .or_insert_with(|| {
                        Matrix::zero(field, tgt.dim(sdeg + degree), src.dim(sdeg))
                    })
                    .add_to(row, col, &c);
            }
        }
    }
    let mut m = GradedMap::zero(field, degree);
    for (deg, b) in blocks {
        if !b.is_zero() {
            m.set_block(deg, b);
        }
    }
    m
}

/// Is the map a cocycle of its degree in Hom(src, tgt)?
pub fn is_cocycle_map(f: &GradedMap, src: &HochComplex, tgt: &HochComplex) -> bool {
    is_chain_map(f, &src.complex, &tgt.complex)
}

/// Cocycle check restricted to source columns of weight <= w. Needed for
/// weight-lowering maps (like gamma), whose compatibility with the
/// truncated differential can only hold below the truncation edge.
pub fn is_cocycle_within_weight(
    f: &GradedMap,
    src: &HochComplex,
    tgt: &HochComplex,
    w: i64,
) -> bool {
    let lhs = match tgt.complex.d.compose(
        f,
        &src.complex.space,
        &tgt.complex.space,
        &tgt.complex.space,
    ) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let rhs = match f.compose(
        &src.complex.d,
        &src.complex.space,
        &src.complex.space,
        &tgt.complex.space,
    ) {
        Ok(m) => m.scale(&crate::linalg::sign(src.field(), f.degree)),
        Err(_) => return false,
    };
    maps_equal_within_weight(&lhs, &rhs, src, &tgt.complex.space, w)
}

/// The shift morphism eta: C(...) -> D(...) of degree m. On generators it
/// is the identity with the sign (-1)^sigma, sigma = m|phi| + sum of
/// (m - j) * sdeg over arm-j hom slots and module slots x_{j+1}.
pub fn eta(hc_c: &HochComplex, hc_d: &HochComplex) -> GradedMap {
    let m = hc_d.shape.n_modules() as i64;
    map_from_cols(hc_c, hc_d, m, |g| {
        let t = g.degree(&hc_c.shape);
        let sigma = m * t + eta_slot_parity(&hc_d.shape, g);
        vec![(g.clone(), crate::linalg::sign(hc_c.field(), sigma))]
    })
}

/// The inverse of eta (same generators, inverse signs).
pub fn eta_inv(hc_d: &HochComplex, hc_c: &HochComplex) -> GradedMap {
    let m = hc_d.shape.n_modules() as i64;
    map_from_cols(hc_d, hc_c, -m, |g| {
        let t = g.degree(&hc_c.shape); // degree on the C side
        let sigma = m * t + eta_slot_parity(&hc_d.shape, g);
        vec![(g.clone(), crate::linalg::sign(hc_c.field(), sigma))]
    })
}

fn eta_slot_parity(shape_d: &Shape, g: &Gen) -> i64 {
    let m = shape_d.n_modules() as i64;
    let slots = slots_of(shape_d, &g.profile);
    let mut sigma = 0i64;
    for (s, &(d, _)) in slots.iter().zip(&g.inputs) {
        let factor = match s {
            SlotRef::ArmHom { arm, .. } => m - *arm as i64,
            SlotRef::Module { idx, .. } => m - *idx as i64 - 1,
        };
        // sdeg on the D side (module slots shifted)
        let sd = d - 1;
        sigma += factor * sd;
    }
    sigma
}

/// The left action alpha_X : C(A) -> C(X) (X an A-B-bimodule):
/// (alpha phi)(sa_{1,n} (x) x) = phi(sa_{1,n}) . x.
pub fn alpha(hc_src: &HochComplex, hc_tgt: &HochComplex) -> GradedMap {
    let Target::Bimod(x) = hc_tgt.shape.target.clone() else {
        panic!("alpha target must be a bimodule shape");
    };
    let b_cat = x.right_cat.clone();
    map_from_cols(hc_src, hc_tgt, 0, |g| {
        let path = &g.profile.paths[0];
        let (a0, an) = (path[0], *path.last().unwrap());
        let tgt_o = target_complex(&hc_src.shape, &g.profile);
        let o = Elt::basis(&tgt_o.space, g.out.0, g.out.1);
        let mut out = Vec::new();
        for b in 0..b_cat.n_objects() {
            let xc = x.space(b, a0);
            if xc.total_dim() == 0 {
                continue;
            }
            for (dx, ix) in basis_iter(xc) {
                let xe = Elt::basis(&xc.space, dx, ix);
                let prod = x.act_left(a0, an, b, &o, &xe);
                if prod.is_zero() {
                    continue;
                }
                let profile = Profile {
                    paths: vec![path.clone(), vec![b]],
                };
                let mut inputs = g.inputs.clone();
                inputs.push((dx, ix));
                for (r, v) in prod.coords.iter().enumerate() {
                    if !v.is_zero() {
                        out.push((
                            Gen {
                                profile: profile.clone(),
                                inputs: inputs.clone(),
                                out: (prod.degree, r),
                            },
                            v.clone(),
                        ));
                    }
                }
            }
        }
        out
    })
}

/// The right action beta_X : C(B) -> C(X):
/// (beta phi)(x (x) sb_{1,n}) = (-1)^{|phi||x|} x . phi(sb_{1,n}).
pub fn beta(hc_src: &HochComplex, hc_tgt: &HochComplex) -> GradedMap {
    let Target::Bimod(x) = hc_tgt.shape.target.clone() else {
        panic!("beta target must be a bimodule shape");
    };
    let a_cat = x.left_cat.clone();
    let field = hc_src.field();
    map_from_cols(hc_src, hc_tgt, 0, |g| {
        let t = g.degree(&hc_src.shape);
        let path = &g.profile.paths[0];
        let (b0, bn) = (path[0], *path.last().unwrap());
        let tgt_o = target_complex(&hc_src.shape, &g.profile);
        let o = Elt::basis(&tgt_o.space, g.out.0, g.out.1);
        let mut out = Vec::new();
        for a in 0..a_cat.n_objects() {
            let xc = x.space(bn, a);
            if xc.total_dim() == 0 {
                continue;
            }
            for (dx, ix) in basis_iter(xc) {
                let xe = Elt::basis(&xc.space, dx, ix);
                let prod = x.act_right(b0, bn, a, &xe, &o);
                if prod.is_zero() {
                    continue;
                }
                let sgn = crate::linalg::sign(field, t * dx);
                let profile = Profile {
                    paths: vec![vec![a], path.clone()],
                };
                let mut inputs = vec![(dx, ix)];
                inputs.extend_from_slice(&g.inputs);
                for (r, v) in prod.coords.iter().enumerate() {
                    if !v.is_zero() {
                        out.push((
                            Gen {
                                profile: profile.clone(),
                                inputs: inputs.clone(),
                                out: (prod.degree, r),
                            },
                            v * &sgn,
                        ));
                    }
                }
            }
        }
        out
    })
}

/// gamma_A : C(I_A) -> C(A), inserting units into the module slot.
pub fn gamma(hc_src: &HochComplex, hc_tgt: &HochComplex) -> GradedMap {
    let cat = hc_tgt.shape.arms[0].clone();
    map_from_cols(hc_src, hc_tgt, 0, |g| {
        // module slot must sit at an object pair (c, c) and the input must
        // pair with the unit of c
        let b = *g.profile.paths[1].last().unwrap();
        let a = g.profile.paths[0][0];
        if a != b {
            return Vec::new();
        }
        // the module slot is at formula position l0 (after arm-0 homs)
        let l0 = g.profile.paths[0].len() - 1;
        let (dm, im) = g.inputs[l0];
        if dm != 0 {
            return Vec::new();
        }
        let coeff = cat.unit(a).coords[im].clone();
        if coeff.is_zero() {
            return Vec::new();
        }
        let mut path = g.profile.paths[1].clone();
        path.extend_from_slice(&g.profile.paths[0][1..]);
        let mut inputs = g.inputs.clone();
        inputs.remove(l0);
        vec![(
            Gen {
                profile: Profile { paths: vec![path] },
                inputs,
                out: g.out,
            },
            coeff,
        )]
    })
}

/// kappa_A : C(A) -> D(I_A): reinterpret one input slot as the module slot,
/// summed over all positions. Degree 0, coefficient +1.
pub fn kappa_a(hc_src: &HochComplex, hc_tgt: &HochComplex) -> GradedMap {
    let one = hc_src.field().one();
    map_from_cols(hc_src, hc_tgt, 0, move |g| kappa_splits(g, 1, &one))
}

/// kappa_A^m : C(A) -> D(I_A | ... | I_A) with m module slots.
pub fn kappa_a_m(hc_src: &HochComplex, hc_tgt: &HochComplex, m: usize) -> GradedMap {
    let one = hc_src.field().one();
    map_from_cols(hc_src, hc_tgt, 0, move |g| kappa_splits(g, m, &one))
}

fn kappa_splits(g: &Gen, m: usize, one: &Scalar) -> Vec<(Gen, Scalar)> {
    let path = &g.profile.paths[0];
    let n = path.len() - 1;
    if n < m {
        return Vec::new();
    }
    let mut out = Vec::new();
    // choose m of the n slots (1-based formula positions) to become modules
    let mut picks: Vec<usize> = (1..=m).collect();
    loop {
        // formula slots 1..n; slot j is the arrow path[n-j] -> path[n-j+1].
        // chosen slots become module slots; the arm paths are the runs
        // between them. Arms in formula order: arm 0 = slots before
        // picks[0], arm 1 = between picks[0] and picks[1], ...
        let mut paths: Vec<Vec<usize>> = Vec::new();
        let mut bounds = vec![0usize];
        bounds.extend(picks.iter().copied());
        bounds.push(n + 1);
        // arm r covers formula slots strictly between bounds[r] and bounds[r+1]
        for r in 0..=m {
            let lo = bounds[r] + 1;
            let hi = bounds[r + 1];
            // the arm's path runs from path[n+1-hi] to path[n+1-lo]
            let (plo, phi_) = (n + 1 - hi, n + 1 - lo);
            paths.push(path[plo..=phi_].to_vec());
        }
        out.push((
            Gen {
                profile: Profile { paths },
                inputs: g.inputs.clone(),
                out: g.out,
            },
            one.clone(),
        ));
        // next combination
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if picks[i] < n - (m - 1 - i) {
                picks[i] += 1;
                for j in i + 1..m {
                    picks[j] = picks[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// alpha_{X_1|...|X_m}: C(X_1|..|X_{m-1}, X') -> C(X_1|..|X_m, X' (x) X_m):
/// append the module X_m; output is the pure tensor through the quotient.
pub fn alpha_multi(
    hc_src: &HochComplex,
    hc_tgt: &HochComplex,
    xm: &DgBimodule,
    td: &BimoduleTensor,
) -> GradedMap {
    map_from_cols(hc_src, hc_tgt, 0, |g| {
        let a_mid = g.profile.global_start();
        let a_out = g.profile.global_end();
        let tgt_o = target_complex(&hc_src.shape, &g.profile);
        let mut out = Vec::new();
        for b in 0..xm.right_cat.n_objects() {
            let xc = xm.space(b, a_mid);
            if xc.total_dim() == 0 {
                continue;
            }
            let Some((lay, q)) = td.quotients.get(&(b, a_out)) else {
                continue;
            };
            let Some(pos) = lay.middles.iter().position(|&mm| mm == a_mid) else {
                continue;
            };
            for (dx, ix) in basis_iter(xc) {
                let deg_free = g.out.0 + dx;
                let (_, idx) = lay.index(pos, g.out.0, g.out.1, dx, ix);
                let proj = q.proj.block(&lay.space, &q.complex.space, deg_free);
                let mut profile = g.profile.clone();
                profile.paths.push(vec![b]);
                let mut inputs = g.inputs.clone();
                inputs.push((dx, ix));
                for r in 0..proj.rows {
                    let v = proj.get(r, idx);
                    if !v.is_zero() {
                        out.push((
                            Gen {
                                profile: profile.clone(),
                                inputs: inputs.clone(),
                                out: (deg_free, r),
                            },
                            v,
                        ));
                    }
                }
            }
        }
        let _ = tgt_o;
        out
    })
}

/// beta_{X_1|...|X_m}: C(X_2|..|X_m, X') -> C(X_1|X_2|..|X_m, X_1 (x) X'):
/// prepend the module X_1 with the sign (-1)^{|phi||x_1|}.
pub fn beta_multi(
    hc_src: &HochComplex,
    hc_tgt: &HochComplex,
    x1: &DgBimodule,
    td: &BimoduleTensor,
) -> GradedMap {
    let field = hc_src.field();
    map_from_cols(hc_src, hc_tgt, 0, |g| {
        let t = g.degree(&hc_src.shape);
        let b_mid = *g.profile.paths[0].last().unwrap();
        let c_out = g.profile.global_start();
        let mut out = Vec::new();
        for a in 0..x1.left_cat.n_objects() {
            let xc = x1.space(b_mid, a);
            if xc.total_dim() == 0 {
                continue;
            }
            let Some((lay, q)) = td.quotients.get(&(c_out, a)) else {
                continue;
            };
            let Some(pos) = lay.middles.iter().position(|&mm| mm == b_mid) else {
                continue;
            };
            for (dx, ix) in basis_iter(xc) {
                let sgn = crate::linalg::sign(field, t * dx);
                let deg_free = dx + g.out.0;
                let (_, idx) = lay.index(pos, dx, ix, g.out.0, g.out.1);
                let proj = q.proj.block(&lay.space, &q.complex.space, deg_free);
                let mut paths = vec![vec![a]];
                paths.extend(g.profile.paths.iter().cloned());
                let mut inputs = vec![(dx, ix)];
                inputs.extend_from_slice(&g.inputs);
                for r in 0..proj.rows {
                    let v = proj.get(r, idx);
                    if !v.is_zero() {
                        out.push((
                            Gen {
                                profile: Profile { paths: paths.clone() },
                                inputs: inputs.clone(),
                                out: (deg_free, r),
                            },
                            &v * &sgn,
                        ));
                    }
                }
            }
        }
        out
    })
}

/// mu^i : C(X_1|..|(X_i (x) X_{i+1})|..) -> C(X_1|..|X_m): contract the two
/// module slots through the quotient class. `i` is 1-based; `td` realizes
/// X_i (x) X_{i+1}.
pub fn mu_i(
    hc_src: &HochComplex,
    hc_tgt: &HochComplex,
    i: usize,
    td: &BimoduleTensor,
) -> GradedMap {
    map_from_rows(hc_src, hc_tgt, 0, |g| {
        // target gen: arm i must have a single object
        if g.profile.paths[i].len() != 1 {
            return Vec::new();
        }
        let v = g.profile.paths[i][0];
        let b_obj = *g.profile.paths[i + 1].last().unwrap();
        let a_obj = g.profile.paths[i - 1][0];
        // module slots: idx i-1 at formula position p1, idx i at p2
        let slots = slots_of(&hc_tgt.shape, &g.profile);
        let p1 = slots
            .iter()
            .position(|s| matches!(s, SlotRef::Module { idx, .. } if *idx == i - 1))
            .unwrap();
        let p2 = slots
            .iter()
            .position(|s| matches!(s, SlotRef::Module { idx, .. } if *idx == i))
            .unwrap();
        debug_assert_eq!(p2, p1 + 1);
        let (d1, i1) = g.inputs[p1];
        let (d2, i2) = g.inputs[p2];
        let Some((lay, q)) = td.quotients.get(&(b_obj, a_obj)) else {
            return Vec::new();
        };
        let Some(pos) = lay.middles.iter().position(|&mm| mm == v) else {
            return Vec::new();
        };
        let (deg_free, idx) = lay.index(pos, d1, i1, d2, i2);
        let proj = q.proj.block(&lay.space, &q.complex.space, deg_free);
        let mut paths = g.profile.paths.clone();
        paths.remove(i);
        let mut out = Vec::new();
        for r in 0..proj.rows {
            let coeff = proj.get(r, idx);
            if coeff.is_zero() {
                continue;
            }
            let mut inputs = g.inputs.clone();
            inputs.remove(p2);
            inputs[p1] = (deg_free, r);
            out.push((
                Gen {
                    profile: Profile { paths: paths.clone() },
                    inputs,
                    out: g.out,
                },
                coeff,
            ));
        }
        out
    })
}

/// kappa_X^l : D(X) -> D(X|I_B): reinterpret one arm-1 hom slot as the I_B
/// module slot; the output passes through the unit embedding X -> X (x) I_B.
pub fn kappa_x_left(
    hc_src: &HochComplex,
    hc_tgt: &HochComplex,
    td: &BimoduleTensor,
) -> GradedMap {
    let Target::Bimod(x) = hc_src.shape.target.clone() else {
        panic!("kappa_x_left source must be D(X)");
    };
    map_from_cols(hc_src, hc_tgt, 0, |g| {
        let path1 = &g.profile.paths[1];
        let l1 = path1.len() - 1;
        if l1 == 0 {
            return Vec::new();
        }
        let l0 = g.profile.paths[0].len() - 1;
        // output embedding: o in X(b0, a_end) -> [o (x) 1_{b0}]
        let b0 = path1[0];
        let a_end = g.profile.global_end();
        let emb = embed_unit_right(&x, td, b0, a_end, g.out);
        let mut out = Vec::new();
        for t in 1..=l1 {
            // arm-1 slot t becomes the module; arm1 path splits
            let arm1 = path1[l1 - t + 1..].to_vec();
            let arm2 = path1[..=l1 - t].to_vec();
            let profile = Profile {
                paths: vec![g.profile.paths[0].clone(), arm1, arm2],
            };
            for (r, v) in emb.coords.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                out.push((
                    Gen {
                        profile: profile.clone(),
                        inputs: g.inputs.clone(),
                        out: (emb.degree, r),
                    },
                    v.clone(),
                ));
            }
            let _ = l0;
        }
        out
    })
}

/// kappa_X^r : D(X) -> D(I_A|X): reinterpret one arm-0 hom slot as the I_A
/// module slot; the output passes through the unit embedding X -> I_A (x) X.
pub fn kappa_x_right(
    hc_src: &HochComplex,
    hc_tgt: &HochComplex,
    td: &BimoduleTensor,
) -> GradedMap {
    let Target::Bimod(x) = hc_src.shape.target.clone() else {
        panic!("kappa_x_right source must be D(X)");
    };
    map_from_cols(hc_src, hc_tgt, 0, |g| {
        let path0 = &g.profile.paths[0];
        let l0 = path0.len() - 1;
        if l0 == 0 {
            return Vec::new();
        }
        let b_start = g.profile.global_start();
        let a_end = g.profile.global_end();
        let emb = embed_unit_left(&x, td, b_start, a_end, g.out);
        let mut out = Vec::new();
        for t in 1..=l0 {
            let arm0 = path0[l0 - t + 1..].to_vec();
            let arm1 = path0[..=l0 - t].to_vec();
            let mut paths = vec![arm0, arm1];
            paths.extend(g.profile.paths[1..].iter().cloned());
            let profile = Profile { paths };
            for (r, v) in emb.coords.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                out.push((
                    Gen {
                        profile: profile.clone(),
                        inputs: g.inputs.clone(),
                        out: (emb.degree, r),
                    },
                    v.clone(),
                ));
            }
        }
        out
    })
}

/// Embed o in X(b,a) as the class [o (x) 1_b] in (X (x) I_B)(b,a).
fn embed_unit_right(
    x: &DgBimodule,
    td: &BimoduleTensor,
    b: usize,
    a: usize,
    out: (i64, usize),
) -> Elt {
    let (lay, q) = &td.quotients[&(b, a)];
    let field = x.field();
    let pos = lay
        .middles
        .iter()
        .position(|&m| m == b)
        .expect("diagonal middle object");
    let unit = x.right_cat.unit(b);
    let mut coords = vec![field.zero(); q.complex.space.dim(out.0)];
    for (iu, cu) in unit.coords.iter().enumerate() {
        if cu.is_zero() {
            continue;
        }
        let (deg_free, idx) = lay.index(pos, out.0, out.1, 0, iu);
        let proj = q.proj.block(&lay.space, &q.complex.space, deg_free);
        for r in 0..proj.rows {
            let v = proj.get(r, idx);
            if !v.is_zero() {
                coords[r] = &coords[r] + &(&v * cu);
            }
        }
    }
    Elt {
        degree: out.0,
        coords,
    }
}

/// Embed o in X(b,a) as the class [1_a (x) o] in (I_A (x) X)(b,a).
fn embed_unit_left(
    x: &DgBimodule,
    td: &BimoduleTensor,
    b: usize,
    a: usize,
    out: (i64, usize),
) -> Elt {
    let (lay, q) = &td.quotients[&(b, a)];
    let field = x.field();
    let pos = lay
        .middles
        .iter()
        .position(|&m| m == a)
        .expect("diagonal middle object");
    let unit = x.left_cat.unit(a);
    let mut coords = vec![field.zero(); q.complex.space.dim(out.0)];
    for (iu, cu) in unit.coords.iter().enumerate() {
        if cu.is_zero() {
            continue;
        }
        let (deg_free, idx) = lay.index(pos, 0, iu, out.0, out.1);
        let proj = q.proj.block(&lay.space, &q.complex.space, deg_free);
        for r in 0..proj.rows {
            let v = proj.get(r, idx);
            if !v.is_zero() {
                coords[r] = &coords[r] + &(&v * cu);
            }
        }
    }
    Elt {
        degree: out.0,
        coords,
    }
}

/// Restriction along a fully faithful dg functor F : A -> B:
/// (F* phi)(sa...) = F^{-1}(phi(sFa...)). Both complexes are C(cat) shapes.
pub fn restriction(f: &DgFunctor, hc_src: &HochComplex, hc_tgt: &HochComplex) -> Result<GradedMap> {
    let flags = crate::dgcat::functor_predicates(f)?;
    if !flags.fully_faithful {
        return Err(Error::NotFullyFaithful(f.name.clone()));
    }
    // caches for inverse hom blocks
    let inv_cache: std::cell::RefCell<BTreeMap<(usize, usize, i64), Matrix>> =
        std::cell::RefCell::new(BTreeMap::new());
    let inv = |a: usize, b: usize, d: i64| -> Matrix {
        if let Some(m) = inv_cache.borrow().get(&(a, b, d)) {
            return m.clone();
        }
        let src = f.source.hom(a, b);
        let tgt = f.target.hom(f.object_map[a], f.object_map[b]);
        let blk = f.map(a, b).block(&src.space, &tgt.space, d);
        let m = blk.inverse().expect("fully faithful block invertible");
        inv_cache.borrow_mut().insert((a, b, d), m.clone());
        m
    };
    let map = map_from_rows(hc_src, hc_tgt, 0, |g| {
        // g is a target gen: path P in A, slots e, out (od, oi)
        let p = &g.profile.paths[0];
        let fp: Vec<usize> = p.iter().map(|&a| f.object_map[a]).collect();
        // expand F(e): product over slots of the functor applied to basis
        let n = p.len() - 1;
        let mut expansions: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for (s, &(d, i)) in g.inputs.iter().enumerate() {
            let from = p[n - (s + 1)];
            let to = p[n - s];
            let src_hom = f.source.hom(from, to);
            let e = Elt::basis(&src_hom.space, d, i);
            let fe = f.apply(from, to, &e);
            let opts: Vec<(usize, Scalar)> = fe
                .coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j, c.clone()))
                .collect();
            expansions.push(opts);
        }
        // F^{-1} on the output: rows of the inverse block
        let (a0, an) = (p[0], *p.last().unwrap());
        let invm = inv(a0, an, g.out.0);
        // column oi of F e_out... we need: coefficient of (F^{-1} o_B) on
        // basis oi, i.e. entry (oi, o_B) of invm.
        let mut out = Vec::new();
        let mut stack = vec![0usize; expansions.len()];
        if expansions.iter().any(|v| v.is_empty()) {
            return out;
        }
        loop {
            let mut coeff = hc_src.field().one();
            let mut inputs = Vec::new();
            for (s, &k) in stack.iter().enumerate() {
                let (j, ref c) = expansions[s][k];
                coeff = &coeff * c;
                inputs.push((g.inputs[s].0, j));
            }
            for ob in 0..invm.cols {
                let v = invm.get(g.out.1, ob);
                if v.is_zero() {
                    continue;
                }
                out.push((
                    Gen {
                        profile: Profile {
                            paths: vec![fp.clone()],
                        },
                        inputs: inputs.clone(),
                        out: (g.out.0, ob),
                    },
                    &coeff * &v,
                ));
            }
            if expansions.is_empty() {
                break;
            }
            let mut i = 0;
            loop {
                if i == expansions.len() {
                    return out;
                }
                stack[i] += 1;
                if stack[i] < expansions[i].len() {
                    break;
                }
                stack[i] = 0;
                i += 1;
            }
        }
        out
    });
    Ok(map)
}

/// Transport a realized complex along bimodule isomorphisms: same arms,
/// module j replaced via iso_j : X_j -> X'_j, target via iso_out. On a
/// target generator, each module input is pulled back through iso_j^{-1}
/// and the output pushed through iso_out.
pub fn transport(
    hc_src: &HochComplex,
    hc_tgt: &HochComplex,
    module_isos: &[&BimoduleMap],
    target_iso: &BimoduleMap,
) -> GradedMap {
    let src_modules: Vec<_> = hc_src.shape.modules.clone();
    let tgt_modules: Vec<_> = hc_tgt.shape.modules.clone();
    let Target::Bimod(src_t) = hc_src.shape.target.clone() else {
        panic!("transport needs bimodule targets");
    };
    let Target::Bimod(tgt_t) = hc_tgt.shape.target.clone() else {
        panic!("transport needs bimodule targets");
    };
    map_from_rows(hc_src, hc_tgt, 0, |g| {
        let slots = slots_of(&hc_tgt.shape, &g.profile);
        // pull each module input through iso^{-1}
        let mut expansions: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for (s, &(d, i)) in slots.iter().zip(&g.inputs) {
            match s {
                SlotRef::ArmHom { .. } => expansions.push(vec![(i, hc_src.field().one())]),
                SlotRef::Module { idx, b, a } => {
                    let src_sp = src_modules[*idx].space(*b, *a);
                    let tgt_sp = tgt_modules[*idx].space(*b, *a);
                    let blk = module_isos[*idx]
                        .map(*b, *a)
                        .expect("module iso block")
                        .block(&src_sp.space, &tgt_sp.space, d);
                    let inv = blk.inverse().expect("module iso invertible");
                    let opts: Vec<(usize, Scalar)> = (0..inv.rows)
                        .map(|r| (r, inv.get(r, i)))
                        .filter(|(_, c)| !c.is_zero())
                        .collect();
                    expansions.push(opts);
                }
            }
        }
        // push the output through iso_out
        let (bo, ao) = (g.profile.global_start(), g.profile.global_end());
        let ot_src = src_t.space(bo, ao);
        let ot_tgt = tgt_t.space(bo, ao);
        let out_blk = target_iso
            .map(bo, ao)
            .expect("target iso block")
            .block(&ot_src.space, &ot_tgt.space, g.out.0);
        let mut out = Vec::new();
        if expansions.iter().any(|v| v.is_empty()) {
            return out;
        }
        let mut stack = vec![0usize; expansions.len()];
        loop {
            let mut coeff = hc_src.field().one();
            let mut inputs = Vec::new();
            for (s, &k) in stack.iter().enumerate() {
                let (j, ref c) = expansions[s][k];
                coeff = &coeff * c;
                inputs.push((g.inputs[s].0, j));
            }
            for oc in 0..out_blk.cols {
                let v = out_blk.get(g.out.1, oc);
                if v.is_zero() {
                    continue;
                }
                out.push((
                    Gen {
                        profile: g.profile.clone(),
                        inputs: inputs.clone(),
                        out: (g.out.0, oc),
                    },
                    &coeff * &v,
                ));
            }
            if expansions.is_empty() {
                break;
            }
            let mut i = 0;
            loop {
                if i == expansions.len() {
                    return out;
                }
                stack[i] += 1;
                if stack[i] < expansions[i].len() {
                    break;
                }
                stack[i] = 0;
                i += 1;
            }
        }
        out
    })
}

/// Apply a structure map to a cochain (sparse matrix-vector product).
pub fn apply_map(
    f: &GradedMap,
    src: &HochComplex,
    tgt: &HochComplex,
    phi: &super::Cochain,
) -> super::Cochain {
    let block = f.block(&src.complex.space, &tgt.complex.space, phi.degree);
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (p, c) in &phi.coords {
        for ((r, cc), v) in block.entries() {
            if cc == p {
                let add = v * c;
                let cur = acc.get(r).cloned().unwrap_or_else(|| src.field().zero());
                let nv = &cur + &add;
                if nv.is_zero() {
                    acc.remove(r);
                } else {
                    acc.insert(*r, nv);
                }
            }
        }
    }
    super::Cochain {
        degree: phi.degree + f.degree,
        coords: acc.into_iter().collect(),
        guarantee: phi.guarantee,
    }
}

/// Compose graded maps between realized complexes (g after f).
pub fn compose_maps(
    g: &GradedMap,
    f: &GradedMap,
    src: &HochComplex,
    mid: &HochComplex,
    tgt: &HochComplex,
) -> Result<GradedMap> {
    g.compose(f, &src.complex.space, &mid.complex.space, &tgt.complex.space)
}

/// Compare two maps out of a realized complex on all columns whose source
/// generator has weight <= w. Weight-raising composites are exact only up
/// to the truncation, so identities are asserted within this bound.
pub fn maps_equal_within_weight(
    f: &GradedMap,
    g: &GradedMap,
    src: &HochComplex,
    tgt_dims: &crate::graded::GradedVectorSpace,
    w: i64,
) -> bool {
    if f.degree != g.degree {
        return false;
    }
    let m = src.shape.n_modules();
    for (&deg, gens) in &src.gens {
        let bf = f.block(&src.complex.space, tgt_dims, deg);
        let bg = g.block(&src.complex.space, tgt_dims, deg);
        for (col, gen) in gens.iter().enumerate() {
            if gen.weight(m) as i64 > w {
                continue;
            }
            for r in 0..bf.rows {
                if bf.get(r, col) != bg.get(r, col) {
                    return false;
                }
            }
        }
    }
    true
}
