//! Upper triangular matrix dg categories T_{X_1,...,X_m} (m <= 3), their
//! fully faithful inclusions, the block decompositions of their Hochschild
//! cochain complexes, the complexes ac(X|Y) and Cbar(T_{X,Y}), and the
//! theta-maps with their ledger identities.

use crate::dgcat::{
    bimodule_tensor, BimoduleMap, BimoduleTensor, CatRef, DgBimodule, DgCategory, DgFunctor, Elt,
    Pairing,
};
use crate::graded::{Complex, GradedMap, GradedVectorSpace};
use crate::hochschild::{realize, Gen, HochComplex, Profile, Shape};
use crate::linalg::{Field, Matrix, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A triangular category remembers its constituents: the block categories,
/// the gluing bimodules, the chosen tensor quotients for the longer
/// crossings, and the block inclusions.
pub struct TriangularCategory {
    pub cat: CatRef,
    pub blocks: Vec<CatRef>,
    pub modules: Vec<Arc<DgBimodule>>,
    /// T-object -> (block, index within the block)
    pub block_of: Vec<(usize, usize)>,
    /// block -> T-object ids
    pub objects_of_block: Vec<Vec<usize>>,
    /// (hi, lo) with hi > lo: the bimodule whose spaces are the T-homs
    /// from block hi objects to block lo objects.
    pub hom_modules: BTreeMap<(usize, usize), Arc<DgBimodule>>,
    /// (hi, lo) with hi - lo >= 2: the quotient presenting hom(hi, lo) as
    /// hom(hi-1, lo) (x) X_hi.
    pub tds: BTreeMap<(usize, usize), Arc<BimoduleTensor>>,
    pub inclusions: Vec<DgFunctor>,
}

/// Build T_{X_1,...,X_m} from blocks A_0..A_m and bimodules X_i (an
/// A_{i-1}-A_i-bimodule each), m in {1,2,3}.
pub fn triangular(blocks: Vec<CatRef>, modules: Vec<Arc<DgBimodule>>) -> Result<TriangularCategory> {
    let m = modules.len();
    if !(1..=3).contains(&m) || blocks.len() != m + 1 {
        return Err(Error::ShapeMismatch(
            "triangular needs m in 1..=3 bimodules and m+1 blocks".into(),
        ));
    }
    let field = blocks[0].field;
    for (i, x) in modules.iter().enumerate() {
        if x.left_cat.name != blocks[i].name || x.right_cat.name != blocks[i + 1].name {
            return Err(Error::ShapeMismatch(format!(
                "module {} must be a {}-{} bimodule",
                x.name,
                blocks[i].name,
                blocks[i + 1].name
            )));
        }
        if x.field() != field {
            return Err(Error::FieldMismatch("triangular blocks".into()));
        }
    }
    // hom modules per (hi, lo)
    let mut hom_modules: BTreeMap<(usize, usize), Arc<DgBimodule>> = BTreeMap::new();
    let mut tds: BTreeMap<(usize, usize), Arc<BimoduleTensor>> = BTreeMap::new();
    for lo in 0..m {
        hom_modules.insert((lo + 1, lo), modules[lo].clone());
    }
    for dist in 2..=m {
        for lo in 0..=(m - dist) {
            let hi = lo + dist;
            let left = hom_modules[&(hi - 1, lo)].clone();
            let td = Arc::new(bimodule_tensor(&left, &modules[hi - 1])?);
            hom_modules.insert((hi, lo), Arc::new(td.module.clone()));
            tds.insert((hi, lo), td);
        }
    }
    // objects
    let mut objects = Vec::new();
    let mut block_of = Vec::new();
    let mut objects_of_block = Vec::new();
    for (b, cat) in blocks.iter().enumerate() {
        let mut ids = Vec::new();
        for (i, name) in cat.objects.iter().enumerate() {
            ids.push(objects.len());
            block_of.push((b, i));
            objects.push(format!("{b}.{name}"));
        }
        objects_of_block.push(ids);
    }
    let n = objects.len();
    // homs
    let zero = Complex::zero(field);
    let mut homs: Vec<Vec<Complex>> = vec![vec![zero; n]; n];
    for from in 0..n {
        for to in 0..n {
            let (bf, of) = block_of[from];
            let (bt, ot) = block_of[to];
            homs[from][to] = if bf == bt {
                blocks[bf].hom(of, ot).clone()
            } else if bf > bt {
                hom_modules[&(bf, bt)].space(of, ot).clone()
            } else {
                Complex::zero(field)
            };
        }
    }
    // compositions
    let mut comp: BTreeMap<(usize, usize, usize), Pairing> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let left = homs[b][c].clone();
                let right = homs[a][b].clone();
                let target = homs[a][c].clone();
                if left.total_dim() == 0 || right.total_dim() == 0 || target.total_dim() == 0 {
                    continue;
                }
                let p = compose_pairing(
                    &blocks,
                    &modules,
                    &hom_modules,
                    &tds,
                    &block_of,
                    (a, b, c),
                    &right,
                    &left,
                    &target,
                )?;
                comp.insert((a, b, c), p);
            }
        }
    }
    let mut units = Vec::new();
    for o in 0..n {
        let (b, i) = block_of[o];
        units.push(blocks[b].unit(i).clone());
    }
    let name = format!(
        "T[{}]",
        modules
            .iter()
            .map(|x| x.name.as_str())
            .collect::<Vec<_>>()
            .join(",")
    );
    let cat: CatRef = Arc::new(DgCategory::new(name, field, objects, homs, comp, units));
    // inclusions
    let mut inclusions = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        let mut maps = BTreeMap::new();
        for x in 0..block.n_objects() {
            for y in 0..block.n_objects() {
                maps.insert((x, y), GradedMap::identity(&block.hom(x, y).space));
            }
        }
        inclusions.push(DgFunctor {
            name: format!("iota{}", b + 1),
            source: block.clone(),
            target: cat.clone(),
            object_map: objects_of_block[b].clone(),
            maps,
        });
    }
    Ok(TriangularCategory {
        cat,
        blocks,
        modules,
        block_of,
        objects_of_block,
        hom_modules,
        tds,
        inclusions,
    })
}

#[allow(clippy::too_many_arguments)]
fn compose_pairing(
    blocks: &[CatRef],
    modules: &[Arc<DgBimodule>],
    hom_modules: &BTreeMap<(usize, usize), Arc<DgBimodule>>,
    tds: &BTreeMap<(usize, usize), Arc<BimoduleTensor>>,
    block_of: &[(usize, usize)],
    (a, b, c): (usize, usize, usize),
    right: &Complex,
    left: &Complex,
    target: &Complex,
) -> Result<Pairing> {
    let (ba, oa) = block_of[a];
    let (bb, ob) = block_of[b];
    let (bc, oc) = block_of[c];
    let blocks = blocks.to_vec();
    let modules = modules.to_vec();
    let hom_modules = hom_modules.clone();
    let tds = tds.clone();
    let left_c = left.clone();
    let right_c = right.clone();
    Ok(Pairing::from_basis_fn(left, right, target, move |dg, ig, df, ifx| {
        // g : b -> c, f : a -> b in the triangular category
        let g = Elt::basis(&left_c.space, dg, ig);
        let f = Elt::basis(&right_c.space, df, ifx);
        let out = compose_elements(
            &blocks,
            &modules,
            &hom_modules,
            &tds,
            (ba, oa),
            (bb, ob),
            (bc, oc),
            &g,
            &f,
        );
        out.coords
    }))
}

/// Compose two triangular-category elements given their block data.
#[allow(clippy::too_many_arguments)]
fn compose_elements(
    blocks: &[CatRef],
    modules: &[Arc<DgBimodule>],
    hom_modules: &BTreeMap<(usize, usize), Arc<DgBimodule>>,
    tds: &BTreeMap<(usize, usize), Arc<BimoduleTensor>>,
    (ba, oa): (usize, usize),
    (bb, ob): (usize, usize),
    (bc, oc): (usize, usize),
    g: &Elt,
    f: &Elt,
) -> Elt {
    let field = blocks[0].field;
    if ba == bb && bb == bc {
        return blocks[ba].compose(oa, ob, oc, g, f);
    }
    if bb == bc {
        // g diagonal in block bc, f a crossing: left action
        let x = &hom_modules[&(ba, bc)];
        return x.act_left(ob, oc, oa, g, f);
    }
    if ba == bb {
        // f diagonal, g crossing: right action
        let x = &hom_modules[&(bb, bc)];
        return x.act_right(oa, ob, oc, g, f);
    }
    // both crossings: ba > bb > bc
    let dist_f = ba - bb;
    if dist_f == 1 {
        // f in X_{ba} = modules[ba-1]: embed (g, f) into td[(ba, bc)]
        return tensor_concat(tds, (ba, bc), bb, ob, oa, oc, g, f, field);
    }
    // dist_f == 2 (only for m = 3): section f, two steps
    let td_f = &tds[&(ba, bb)];
    let (lay, q) = &td_f.quotients[&(oa, ob)];
    let qc = &q.complex;
    let sec = q.section.block(&qc.space, &lay.space, f.degree);
    let mut acc: Option<Elt> = None;
    for (col, cf) in f.coords.iter().enumerate() {
        if cf.is_zero() {
            continue;
        }
        for r in 0..sec.rows {
            let cv = sec.get(r, col);
            if cv.is_zero() {
                continue;
            }
            let (pos, dy, iy, dz, iz) = decompose_middle(lay, f.degree, r);
            let w = lay.middles[pos];
            // y in X_{bb+1}(w, ob') with left cat block bb; z in X_{ba}(oa, w)
            let y = Elt {
                degree: dy,
                coords: basis_vec(field, modules[bb].space(w, ob).space.dim(dy), iy),
            };
            let z = Elt {
                degree: dz,
                coords: basis_vec(field, modules[ba - 1].space(oa, w).space.dim(dz), iz),
            };
            // step 1: g o y : block bb+1 -> bc
            let gy = tensor_concat(tds, (bb + 1, bc), bb, ob, w, oc, &g, &y, field);
            // step 2: (g o y) o z
            let gyz = tensor_concat(tds, (ba, bc), bb + 1, w, oa, oc, &gy, &z, field);
            let coeff = &(cf * &cv);
            match &mut acc {
                None => {
                    acc = Some(Elt {
                        degree: gyz.degree,
                        coords: gyz.coords.iter().map(|v| v * coeff).collect(),
                    })
                }
                Some(a) => {
                    for (k, v) in gyz.coords.iter().enumerate() {
                        a.coords[k] = &a.coords[k] + &(v * coeff);
                    }
                }
            }
        }
    }
    acc.unwrap_or_else(|| {
        let tgt = &hom_modules[&(ba, bc)];
        Elt::zero(&tgt.space(oa, oc).space, g.degree + f.degree)
    })
}

fn basis_vec(field: Field, dim: usize, idx: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); dim];
    v[idx] = field.one();
    v
}

/// Embed (g (x) f) into the quotient td[(hi, lo)] whose left factor
/// contains g (an element of hom(hi-1, lo) at objects (mid_obj, to_obj))
/// and right factor f (in X_hi at (from_obj, mid_obj)).
#[allow(clippy::too_many_arguments)]
fn tensor_concat(
    tds: &BTreeMap<(usize, usize), Arc<BimoduleTensor>>,
    key: (usize, usize),
    _mid_block: usize,
    mid_obj: usize,
    from_obj: usize,
    to_obj: usize,
    g: &Elt,
    f: &Elt,
    field: Field,
) -> Elt {
    let td = &tds[&key];
    let (lay, q) = &td.quotients[&(from_obj, to_obj)];
    let pos = lay
        .middles
        .iter()
        .position(|&m| m == mid_obj)
        .expect("middle object in tensor layout");
    let deg = g.degree + f.degree;
    let mut coords = vec![field.zero(); q.complex.space.dim(deg)];
    for (ig, cg) in g.coords.iter().enumerate() {
        if cg.is_zero() {
            continue;
        }
        for (iff, cf) in f.coords.iter().enumerate() {
            if cf.is_zero() {
                continue;
            }
            let (dd, idx) = lay.index(pos, g.degree, ig, f.degree, iff);
            debug_assert_eq!(dd, deg);
            let proj = q.proj.block(&lay.space, &q.complex.space, deg);
            for r in 0..proj.rows {
                let v = proj.get(r, idx);
                if !v.is_zero() {
                    coords[r] = &coords[r] + &(&(cg * cf) * &v);
                }
            }
        }
    }
    Elt { degree: deg, coords }
}

fn decompose_middle(
    lay: &crate::dgcat::MiddleSum,
    deg: i64,
    idx: usize,
) -> (usize, i64, usize, i64, usize) {
    for pos in 0..lay.middles.len() {
        let off = lay.offset(pos, deg);
        let dim = lay.layouts[pos].dim(deg);
        if idx >= off && idx < off + dim {
            let (dx, ix, dy, iy) = lay.layouts[pos].decompose(deg, idx - off);
            return (pos, dx, ix, dy, iy);
        }
    }
    panic!("middle sum index out of range");
}

/// The dg functor T_{f_1,...,f_m} induced by bimodule morphisms.
pub fn t_functor(
    src: &TriangularCategory,
    tgt: &TriangularCategory,
    fs: &[&BimoduleMap],
) -> Result<DgFunctor> {
    let m = src.modules.len();
    if fs.len() != m || tgt.modules.len() != m {
        return Err(Error::ShapeMismatch("t_functor arity".into()));
    }
    let n = src.cat.n_objects();
    let mut maps = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let (ba, oa) = src.block_of[a];
            let (bb, ob) = src.block_of[b];
            let shom = src.cat.hom(a, b);
            let thom = tgt.cat.hom(a, b);
            let g = if ba == bb || shom.total_dim() == 0 {
                GradedMap::identity(&shom.space)
            } else {
                // ba > bb: crossing, distance ba - bb
                cross_map(src, tgt, fs, ba, bb, oa, ob)?
            };
            let _ = thom;
            maps.insert((a, b), g);
        }
    }
    Ok(DgFunctor {
        name: format!("T[{}]", fs.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join(",")),
        source: src.cat.clone(),
        target: tgt.cat.clone(),
        object_map: (0..n).collect(),
        maps,
    })
}

/// The induced map hom_src(hi,lo)(oa,ob) -> hom_tgt(hi,lo)(oa,ob).
fn cross_map(
    src: &TriangularCategory,
    tgt: &TriangularCategory,
    fs: &[&BimoduleMap],
    hi: usize,
    lo: usize,
    oa: usize,
    ob: usize,
) -> Result<GradedMap> {
    let dist = hi - lo;
    if dist == 1 {
        let f = fs[lo];
        return Ok(f
            .map(oa, ob)
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(src.cat.field, 0)));
    }
    // distance >= 2: map the quotient via sections: [u (x) x] -> [F(u) (x) f(x)]
    let td_s = &src.tds[&(hi, lo)];
    let td_t = &tgt.tds[&(hi, lo)];
    let (lay_s, q_s) = &td_s.quotients[&(oa, ob)];
    let (lay_t, q_t) = &td_t.quotients[&(oa, ob)];
    let field = src.cat.field;
    let sq = &q_s.complex;
    let tq = &q_t.complex;
    let mut out = GradedMap::zero(field, 0);
    for deg in sq.space.support() {
        let cols = sq.space.dim(deg);
        let rows = tq.space.dim(deg);
        let mut mtx = Matrix::zero(field, rows, cols);
        let sec = q_s.section.block(&sq.space, &lay_s.space, deg);
        for col in 0..cols {
            for r in 0..sec.rows {
                let cv = sec.get(r, col);
                if cv.is_zero() {
                    continue;
                }
                let (pos, du, iu, dx, ix) = decompose_middle(lay_s, deg, r);
                let w = lay_s.middles[pos];
                // left factor: hom_src(hi-1, lo)(w, ob); apply recursively
                let inner = cross_map(src, tgt, fs, hi - 1, lo, w, ob)?;
                let lsrc = src.hom_modules[&(hi - 1, lo)].space(w, ob);
                let ltgt = tgt.hom_modules[&(hi - 1, lo)].space(w, ob);
                let ib = inner.block(&lsrc.space, &ltgt.space, du);
                // right factor: modules[hi-1] morphism
                let f = fs[hi - 1];
                let rsrc = src.modules[hi - 1].space(oa, w);
                let rtgt = tgt.modules[hi - 1].space(oa, w);
                let rb = f
                    .map(oa, w)
                    .cloned()
                    .unwrap_or_else(|| GradedMap::zero(field, 0))
                    .block(&rsrc.space, &rtgt.space, dx);
                let Some(tpos) = lay_t.middles.iter().position(|&mm| mm == w) else {
                    continue;
                };
                for ru in 0..ib.rows {
                    let cu = ib.get(ru, iu);
                    if cu.is_zero() {
                        continue;
                    }
                    for rx in 0..rb.rows {
                        let cx = rb.get(rx, ix);
                        if cx.is_zero() {
                            continue;
                        }
                        let (dd, idx) = lay_t.index(tpos, du, ru, dx, rx);
                        let proj = q_t.proj.block(&lay_t.space, &tq.space, dd);
                        for rr in 0..proj.rows {
                            let pv = proj.get(rr, idx);
                            if !pv.is_zero() {
                                mtx.add_to(rr, col, &(&(&(&cv * &cu) * &cx) * &pv));
                            }
                        }
                    }
                }
            }
        }
        if !mtx.is_zero() {
            out.set_block(deg, mtx);
        }
    }
    Ok(out)
}

/// One block summand of the decomposition of C(T).
pub struct BlockSummand {
    /// blocks visited by the paths, high to low; length 1 = a C(A_b) block
    pub key: Vec<usize>,
    pub name: String,
    pub hc: HochComplex,
}

/// The block decomposition of a realized C(T): a partition of its
/// generators into the realized block complexes.
pub struct BlockDecomposition {
    pub summands: Vec<BlockSummand>,
    /// (degree, position) in C(T) -> (summand, degree, position)
    pub fwd: BTreeMap<(i64, usize), (usize, i64, usize)>,
    /// per summand: (degree, position) -> (degree, position) in C(T)
    pub bwd: Vec<BTreeMap<(i64, usize), (i64, usize)>>,
}

/// The descending block sequence visited by a T-path profile.
fn visited_blocks(t: &TriangularCategory, path: &[usize]) -> Vec<usize> {
    let mut out = vec![t.block_of[path[0]].0];
    for &o in &path[1..] {
        let b = t.block_of[o].0;
        if b != *out.last().unwrap() {
            out.push(b);
        }
    }
    out
}

/// Translate a C(T) generator into the corresponding block-shape generator.
fn translate_gen(t: &TriangularCategory, g: &Gen) -> (Vec<usize>, Gen) {
    let path = &g.profile.paths[0];
    let key = visited_blocks(t, path);
    // key is descending (path high -> low); arms of the block shape are
    // ordered low -> high, each arm's path is a run of same-block objects
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut cur_block = t.block_of[path[0]].0;
    let mut cur = vec![t.block_of[path[0]].1];
    for &o in &path[1..] {
        let (b, loc) = t.block_of[o];
        if b == cur_block {
            cur.push(loc);
        } else {
            runs.push(std::mem::take(&mut cur));
            cur_block = b;
            cur = vec![loc];
        }
    }
    runs.push(cur);
    // runs are in path order = block high..low; arms are low..high = reversed
    let paths: Vec<Vec<usize>> = runs.into_iter().rev().collect();
    (
        key,
        Gen {
            profile: Profile { paths },
            inputs: g.inputs.clone(),
            out: g.out,
        },
    )
}

/// The inverse translation, given the summand key.
#[allow(dead_code)]
fn untranslate_gen(t: &TriangularCategory, key: &[usize], g: &Gen) -> Gen {
    // arms low..high; T path = concatenation high..low of the arm paths,
    // with local objects mapped to T objects
    let mut path = Vec::new();
    for (r, arm_path) in g.profile.paths.iter().enumerate().rev() {
        let block = key[key.len() - 1 - r];
        for &loc in arm_path {
            path.push(t.objects_of_block[block][loc]);
        }
    }
    Gen {
        profile: Profile { paths: vec![path] },
        inputs: g.inputs.clone(),
        out: g.out,
    }
}

/// The shape of the block summand for a visited-block key.
fn block_shape(t: &TriangularCategory, key: &[usize]) -> Shape {
    if key.len() == 1 {
        return Shape::cat(&t.blocks[key[0]]);
    }
    // arms low..high: key is high..low; modules in shape order connect
    // arms[r] (block key[k-r]) and arms[r+1] (block key[k-r-1])
    let mut mods = Vec::new();
    let k = key.len() - 1;
    for r in 0..k {
        let lo = key[k - r];
        let hi = key[k - r - 1];
        mods.push(t.hom_modules[&(hi, lo)].clone());
    }
    let target = t.hom_modules[&(key[0], key[k])].clone();
    Shape::d_bimod(mods, target)
}

/// Decompose the realized C(T) into its block summands, in the canonical
/// order (single blocks first, then by crossing count and key).
pub fn decompose(t: &TriangularCategory, hc_t: &HochComplex) -> Result<BlockDecomposition> {
    // collect keys actually present plus all single blocks
    let mut keys: Vec<Vec<usize>> = Vec::new();
    for b in 0..t.blocks.len() {
        keys.push(vec![b]);
    }
    let m = t.blocks.len();
    // all strictly descending sequences of length >= 2
    fn descending(m: usize, len: usize) -> Vec<Vec<usize>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for rest in descending(m, len - 1) {
            let min_next = rest.last().map_or(m, |&x| x);
            for b in 0..min_next {
                let mut v = rest.clone();
                v.push(b);
                out.push(v);
            }
        }
        out
    }
    let mut longer: Vec<Vec<usize>> = Vec::new();
    for len in 2..=m {
        longer.extend(descending(m, len));
    }
    // order: by (#crossings, then the paper's enumeration = by span then key)
    longer.sort_by_key(|k| {
        (
            k.len(),
            k[0] as i64 - *k.last().unwrap() as i64,
            k.clone(),
        )
    });
    keys.extend(longer);
    let mut summands = Vec::new();
    for key in keys {
        let shape = block_shape(t, &key);
        let hc = realize(&shape, hc_t.n_max)?;
        let name = if key.len() == 1 {
            format!("C({})", t.blocks[key[0]].name)
        } else {
            shape.describe()
        };
        summands.push(BlockSummand { key, name, hc });
    }
    let mut fwd = BTreeMap::new();
    let mut bwd: Vec<BTreeMap<(i64, usize), (i64, usize)>> =
        vec![BTreeMap::new(); summands.len()];
    for (&deg, gens) in &hc_t.gens {
        for (posn, g) in gens.iter().enumerate() {
            let (key, bg) = translate_gen(t, g);
            let si = summands
                .iter()
                .position(|s| s.key == key)
                .ok_or_else(|| Error::ShapeMismatch(format!("unknown block key {key:?}")))?;
            let (bdeg, bpos) = summands[si].hc.position(&bg).ok_or_else(|| {
                Error::ShapeMismatch("block generator missing in summand".into())
            })?;
            debug_assert_eq!(bdeg, deg);
            fwd.insert((deg, posn), (si, bdeg, bpos));
            bwd[si].insert((bdeg, bpos), (deg, posn));
        }
    }
    // the translation must be a bijection: every block generator is hit
    for (si, s) in summands.iter().enumerate() {
        let total: usize = s.hc.complex.space.support().map(|d| s.hc.dim(d)).sum();
        if total != bwd[si].len() {
            return Err(Error::ShapeMismatch(format!(
                "block {} has {} generators but {} matched",
                s.name,
                total,
                bwd[si].len()
            )));
        }
    }
    Ok(BlockDecomposition { summands, fwd, bwd })
}

impl BlockDecomposition {
    /// The (row, col) block of the differential of C(T), as a map between
    /// the summand complexes (degree +1).
    pub fn block_entry(&self, hc_t: &HochComplex, row: usize, col: usize) -> GradedMap {
        let field = hc_t.field();
        let mut out = GradedMap::zero(field, 1);
        let mut blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (&deg, _) in &hc_t.gens {
            let d = hc_t
                .complex
                .d
                .block(&hc_t.complex.space, &hc_t.complex.space, deg);
            for ((r, c), v) in d.entries() {
                let (si_r, rdeg, rpos) = self.fwd[&(deg + 1, *r)];
                let (si_c, cdeg, cpos) = self.fwd[&(deg, *c)];
                if si_r != row || si_c != col {
                    continue;
                }
                let mtx = blocks.entry(cdeg).or_insert_with(|| {
                    Matrix::zero(
                        field,
                        self.summands[row].hc.dim(cdeg + 1),
                        self.summands[col].hc.dim(cdeg),
                    )
                });
                debug_assert_eq!(rdeg, cdeg + 1);
                mtx.add_to(rpos, cpos, v);
            }
        }
        for (deg, m) in blocks {
            if !m.is_zero() {
                out.set_block(deg, m);
            }
        }
        out
    }

    /// Verify the block differential is lower triangular in summand order.
    pub fn check_lower_triangular(&self, hc_t: &HochComplex) -> Result<()> {
        for (&deg, _) in &hc_t.gens {
            let d = hc_t
                .complex
                .d
                .block(&hc_t.complex.space, &hc_t.complex.space, deg);
            for ((r, c), _) in d.entries() {
                let (si_r, _, _) = self.fwd[&(deg + 1, *r)];
                let (si_c, _, _) = self.fwd[&(deg, *c)];
                if si_r < si_c {
                    return Err(Error::axiom(
                        "block-lower-triangular",
                        format!(
                            "entry from {} to {}",
                            self.summands[si_c].name, self.summands[si_r].name
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Embed a block summand into C(T) (degree-0 index map).
    pub fn embed(&self, hc_t: &HochComplex, si: usize) -> GradedMap {
        let field = hc_t.field();
        let mut out = GradedMap::zero(field, 0);
        let s = &self.summands[si];
        for deg in s.hc.complex.space.support() {
            let rows = hc_t.dim(deg);
            let cols = s.hc.dim(deg);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(field, rows, cols);
            for c in 0..cols {
                if let Some(&(tdeg, tpos)) = self.bwd[si].get(&(deg, c)) {
                    debug_assert_eq!(tdeg, deg);
                    m.set(tpos, c, field.one());
                }
            }
            out.set_block(deg, m);
        }
        out
    }

    /// Project C(T) onto a block summand (degree-0 index map).
    pub fn project(&self, hc_t: &HochComplex, si: usize) -> GradedMap {
        let field = hc_t.field();
        let mut out = GradedMap::zero(field, 0);
        let s = &self.summands[si];
        for deg in hc_t.complex.space.support() {
            let rows = s.hc.dim(deg);
            let cols = hc_t.dim(deg);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(field, rows, cols);
            for c in 0..cols {
                let (sj, bdeg, bpos) = self.fwd[&(deg, c)];
                if sj == si {
                    debug_assert_eq!(bdeg, deg);
                    m.set(bpos, c, field.one());
                }
            }
            out.set_block(deg, m);
        }
        out
    }

    /// Restrict a cochain of C(T) to a block summand.
    pub fn restrict_cochain(
        &self,
        hc_t: &HochComplex,
        si: usize,
        phi: &crate::hochschild::Cochain,
    ) -> crate::hochschild::Cochain {
        let mut coords = Vec::new();
        for (p, c) in &phi.coords {
            let (sj, bdeg, bpos) = self.fwd[&(phi.degree, *p)];
            if sj == si {
                debug_assert_eq!(bdeg, phi.degree);
                coords.push((bpos, c.clone()));
            }
        }
        coords.sort_by_key(|(p, _)| *p);
        let _ = hc_t;
        crate::hochschild::Cochain {
            degree: phi.degree,
            coords,
            guarantee: phi.guarantee,
        }
    }

    /// Assemble a C(T)-cochain from block components.
    pub fn assemble_cochain(
        &self,
        hc_t: &HochComplex,
        parts: &[(usize, &crate::hochschild::Cochain)],
        degree: i64,
        guarantee: i64,
    ) -> crate::hochschild::Cochain {
        let mut coords: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (si, part) in parts {
            for (p, c) in &part.coords {
                let (tdeg, tpos) = self.bwd[*si][&(part.degree, *p)];
                debug_assert_eq!(tdeg, degree);
                let cur = coords.get(&tpos).cloned();
                let v = match cur {
                    None => c.clone(),
                    Some(x) => &x + c,
                };
                coords.insert(tpos, v);
            }
        }
        let _ = hc_t;
        crate::hochschild::Cochain {
            degree,
            coords: coords.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            guarantee,
        }
    }
}

/// Glue a list of complexes along strictly lower-triangular degree-1
/// entries: d = diag(d_i) + sum of entries[(r, c)] with r > c.
pub fn assemble_blocks(
    parts: &[&Complex],
    entries: &[(usize, usize, GradedMap)],
) -> Result<Complex> {
    let field = parts[0].field();
    let mut degrees = std::collections::BTreeSet::new();
    for p in parts {
        degrees.extend(p.space.support());
    }
    let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for &deg in &degrees {
        let mut names = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            names.extend(
                p.space
                    .labels_at(deg)
                    .iter()
                    .map(|l| format!("b{i}.{l}")),
            );
        }
        if !names.is_empty() {
            labels.insert(deg, names);
        }
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let offset = |deg: i64, i: usize| -> usize {
        parts[..i].iter().map(|p| p.space.dim(deg)).sum()
    };
    let mut d = GradedMap::zero(field, 1);
    for &deg in &degrees {
        let rows = space.dim(deg + 1);
        let cols = space.dim(deg);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(field, rows, cols);
        for (i, p) in parts.iter().enumerate() {
            let b = p.d.block(&p.space, &p.space, deg);
            let (ro, co) = (offset(deg + 1, i), offset(deg, i));
            for ((r, c), v) in b.entries() {
                m.set(r + ro, c + co, v.clone());
            }
        }
        for (r, c, f) in entries {
            if *r <= *c {
                return Err(Error::ShapeMismatch("entries must be strictly lower".into()));
            }
            let b = f.block(&parts[*c].space, &parts[*r].space, deg);
            let (ro, co) = (offset(deg + 1, *r), offset(deg, *c));
            for ((rr, cc), v) in b.entries() {
                m.add_to(rr + ro, cc + co, v);
            }
        }
        if !m.is_zero() {
            d.set_block(deg, m);
        }
    }
    Complex::new(space, d)
}

/// The complex ac(X|Y) = D(X (x) Y) + D(X|Y) glued along tilde-mu^1, with
/// the data needed to certify acyclicity in a window.
pub struct AcComplex {
    pub complex: Complex,
    pub hc_dxy: HochComplex,
    pub hc_dxy2: HochComplex,
    pub mu_tilde: GradedMap,
    pub certified_hi: Option<i64>,
}

/// Build ac(X|Y) for composable bimodules at a weight truncation.
pub fn ac_complex(x: &Arc<DgBimodule>, y: &Arc<DgBimodule>, n: usize) -> Result<AcComplex> {
    let td = Arc::new(bimodule_tensor(x, y)?);
    let xy = Arc::new(td.module.clone());
    if xy.is_zero() || x.is_zero() || y.is_zero() {
        // degenerate: everything vanishes
        let z = Complex::zero(x.field());
        let hc0 = realize(&Shape::cat(&crate::zoo::point(x.field())), 0)?;
        let mu = GradedMap::zero(x.field(), 1);
        return Ok(AcComplex {
            complex: z,
            hc_dxy: hc0,
            hc_dxy2: realize(&Shape::cat(&crate::zoo::point(x.field())), 0)?,
            mu_tilde: mu,
            certified_hi: None,
        });
    }
    let hc_cxy = realize(&Shape::c_bimod(vec![xy.clone()], xy.clone()), n)?;
    let hc_cxy2 = realize(&Shape::c_bimod(vec![x.clone(), y.clone()], xy.clone()), n)?;
    let hc_dxy = realize(&Shape::d_bimod(vec![xy.clone()], xy.clone()), n)?;
    let hc_dxy2 = realize(&Shape::d_bimod(vec![x.clone(), y.clone()], xy.clone()), n)?;
    let mu = crate::hochschild::mu_i(&hc_cxy, &hc_cxy2, 1, &td);
    let e2 = crate::hochschild::eta(&hc_cxy2, &hc_dxy2);
    let e1_inv = crate::hochschild::eta_inv(&hc_dxy, &hc_cxy);
    let mu_tilde = e2
        .compose(
            &mu,
            &hc_cxy.complex.space,
            &hc_cxy2.complex.space,
            &hc_dxy2.complex.space,
        )?
        .compose(
            &e1_inv,
            &hc_dxy.complex.space,
            &hc_cxy.complex.space,
            &hc_dxy2.complex.space,
        )?;
    let complex = assemble_blocks(
        &[&hc_dxy.complex, &hc_dxy2.complex],
        &[(1, 0, mu_tilde.clone())],
    )?;
    let certified_hi = match (hc_dxy.certified_hi, hc_dxy2.certified_hi) {
        (Some(a), Some(b)) => Some(a.min(b) - 1),
        _ => None,
    };
    Ok(AcComplex {
        complex,
        hc_dxy,
        hc_dxy2,
        mu_tilde,
        certified_hi,
    })
}

impl AcComplex {
    /// Acyclicity verdict in the certified window intersected with [lo, hi].
    pub fn acyclic_in_window(&self, lo: i64, hi: i64) -> Result<bool> {
        if self.complex.total_dim() == 0 {
            return Ok(true);
        }
        let ch = self
            .certified_hi
            .ok_or_else(|| Error::GuaranteeExceeded("ac window".into()))?;
        if hi > ch {
            return Err(Error::GuaranteeExceeded(format!(
                "ac(X|Y) window [{lo},{hi}] beyond certified {ch}"
            )));
        }
        crate::graded::is_acyclic_in_window(&self.complex, lo, hi)
    }
}

/// Cbar(T_{X,Y}): the 5-summand quotient of C(T_{X,Y}), its differential
/// assembled from the decomposition's own blocks, and the projection.
pub struct BarComplex {
    pub complex: Complex,
    pub projection: GradedMap,
    /// offsets: per degree, where each of the 5 summands starts
    pub summand_count: usize,
}

pub fn bar_complex(
    t: &TriangularCategory,
    hc_t: &HochComplex,
    dec: &BlockDecomposition,
) -> Result<BarComplex> {
    if t.modules.len() != 2 {
        return Err(Error::ShapeMismatch("bar complex needs m = 2".into()));
    }
    let parts: Vec<&Complex> = (0..5).map(|i| &dec.summands[i].hc.complex).collect();
    let mut entries = Vec::new();
    for (r, c) in [(3usize, 0usize), (3, 1), (4, 1), (4, 2)] {
        entries.push((r, c, dec.block_entry(hc_t, r, c)));
    }
    let complex = assemble_blocks(&parts, &entries)?;
    // projection C(T) -> Cbar: stack the five block projections
    let field = hc_t.field();
    let mut projection = GradedMap::zero(field, 0);
    for deg in hc_t.complex.space.support() {
        let rows = complex.space.dim(deg);
        let cols = hc_t.dim(deg);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(field, rows, cols);
        for col in 0..cols {
            let (si, bdeg, bpos) = dec.fwd[&(deg, col)];
            if si < 5 {
                debug_assert_eq!(bdeg, deg);
                let off: usize = (0..si).map(|j| dec.summands[j].hc.dim(deg)).sum();
                m.set(off + bpos, col, field.one());
            }
        }
        projection.set_block(deg, m);
    }
    Ok(BarComplex {
        complex,
        projection,
        summand_count: 5,
    })
}

/// The inclusion of the triangular subcategory on a consecutive block
/// range [lo..=hi] (the functor iota_{lo+1 ... hi+1} in 1-based labels).
pub fn sub_inclusion(
    t: &TriangularCategory,
    lo: usize,
    hi: usize,
) -> Result<(TriangularCategory, DgFunctor)> {
    let sub = triangular(
        t.blocks[lo..=hi].to_vec(),
        t.modules[lo..hi].to_vec(),
    )?;
    let mut object_map = Vec::new();
    for b in lo..=hi {
        object_map.extend(t.objects_of_block[b].iter().copied());
    }
    let n = sub.cat.n_objects();
    let mut maps = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            // hom complexes are literally equal (same deterministic build)
            debug_assert!(sub
                .cat
                .hom(a, b)
                .space
                .same_dims(&t.cat.hom(object_map[a], object_map[b]).space));
            maps.insert((a, b), GradedMap::identity(&sub.cat.hom(a, b).space));
        }
    }
    let f = DgFunctor {
        name: format!("iota{}{}", lo + 1, hi + 1),
        source: sub.cat.clone(),
        target: t.cat.clone(),
        object_map,
        maps,
    };
    Ok((sub, f))
}

/// A theta map: a strict candidate B-infinity morphism from a realized
/// C(cat) complex into a realized C(T) complex, assembled block by block.
pub struct Theta {
    pub map: GradedMap,
}

/// theta_A = (1, 1, kappa_A)^T : C(A) -> C(T_{I_A}).
pub fn theta_a(
    hc_a: &HochComplex,
    hc_t: &HochComplex,
    dec: &BlockDecomposition,
) -> Result<Theta> {
    let k = crate::hochschild::kappa_a(hc_a, &dec.summands[2].hc);
    let mut map = dec
        .embed(hc_t, 0)
        .compose(
            &GradedMap::identity(&hc_a.complex.space),
            &hc_a.complex.space,
            &hc_a.complex.space,
            &hc_t.complex.space,
        )?;
    map = map.add(&dec.embed(hc_t, 1))?;
    let emb2 = dec.embed(hc_t, 2).compose(
        &k,
        &hc_a.complex.space,
        &dec.summands[2].hc.complex.space,
        &hc_t.complex.space,
    )?;
    map = map.add(&emb2)?;
    Ok(Theta { map })
}

/// theta_A^2 = (1,1,1,kappa,kappa,kappa,kappa^2)^T : C(A) -> C(T_{I_A,I_A}).
pub fn theta_a2(
    t: &TriangularCategory,
    hc_a: &HochComplex,
    hc_t: &HochComplex,
    dec: &BlockDecomposition,
) -> Result<Theta> {
    let mut map = dec.embed(hc_t, 0);
    map = map.add(&dec.embed(hc_t, 1))?;
    map = map.add(&dec.embed(hc_t, 2))?;
    // kappa into D(I_A) summands [1,0] and [2,1]
    for si in [3usize, 4] {
        let k = crate::hochschild::kappa_a(hc_a, &dec.summands[si].hc);
        map = map.add(&dec.embed(hc_t, si).compose(
            &k,
            &hc_a.complex.space,
            &dec.summands[si].hc.complex.space,
            &hc_t.complex.space,
        )?)?;
    }
    // summand [2,0]: D(I (x) I): kappa followed by the transport along the
    // unit embedding I -> I (x) I
    {
        let i_mod = t.modules[0].clone();
        let td = t.tds[&(2usize, 0usize)].clone();
        let shape_di = Shape::d_bimod(vec![i_mod.clone()], i_mod.clone());
        let hc_di = realize(&shape_di, hc_t.n_max)?;
        let k = crate::hochschild::kappa_a(hc_a, &hc_di);
        let emb = crate::dgcat::unit_right_embed(&td, &i_mod);
        let tr = crate::hochschild::transport(&hc_di, &dec.summands[5].hc, &[&emb], &emb);
        let k_tr = tr.compose(
            &k,
            &hc_a.complex.space,
            &hc_di.complex.space,
            &dec.summands[5].hc.complex.space,
        )?;
        map = map.add(&dec.embed(hc_t, 5).compose(
            &k_tr,
            &hc_a.complex.space,
            &dec.summands[5].hc.complex.space,
            &hc_t.complex.space,
        )?)?;
    }
    // summand [2,1,0]: D(I|I): kappa^2
    {
        let k2 = crate::hochschild::kappa_a_m(hc_a, &dec.summands[6].hc, 2);
        map = map.add(&dec.embed(hc_t, 6).compose(
            &k2,
            &hc_a.complex.space,
            &dec.summands[6].hc.complex.space,
            &hc_t.complex.space,
        )?)?;
    }
    Ok(Theta { map })
}

/// theta_X : C(T_X) -> C(T_{X,I_B}) (the 7-row matrix with kappa_B and
/// kappa_X^l), given the decompositions of both sides.
pub fn theta_x(
    t_tgt: &TriangularCategory,
    dec_src: &BlockDecomposition,
    hc_src: &HochComplex,
    dec_tgt: &BlockDecomposition,
    hc_tgt: &HochComplex,
) -> Result<Theta> {
    let field = hc_src.field();
    let x = t_tgt.modules[0].clone();
    let ib = t_tgt.modules[1].clone();
    let td20 = t_tgt.tds[&(2usize, 0usize)].clone();
    // columns: project C(T_X) onto its blocks
    let pr_a = dec_src.project(hc_src, 0);
    let pr_b = dec_src.project(hc_src, 1);
    let pr_dx = dec_src.project(hc_src, 2);
    let hc_a = &dec_src.summands[0].hc;
    let hc_b = &dec_src.summands[1].hc;
    let hc_dx = &dec_src.summands[2].hc;
    let comp = |emb: GradedMap, inner: GradedMap, src_hc: &HochComplex, mid_hc: &HochComplex, pr: &GradedMap| -> Result<GradedMap> {
        // emb o inner o pr : C(T_X) -> C(T_{X,I_B})
        let first = inner.compose(
            pr,
            &hc_src.complex.space,
            &src_hc.complex.space,
            &mid_hc.complex.space,
        )?;
        emb.compose(
            &first,
            &hc_src.complex.space,
            &mid_hc.complex.space,
            &hc_tgt.complex.space,
        )
    };
    // rows in summand order of T_{X,I_B}: [0]=C(A) [1]=C(B) [2]=C(B)
    // [1,0]=D(X) [2,1]=D(I_B) [2,0]=D(X (x) I_B) [2,1,0]=D(X|I_B)
    let mut map = comp(
        dec_tgt.embed(hc_tgt, 0),
        GradedMap::identity(&hc_a.complex.space),
        hc_a,
        hc_a,
        &pr_a,
    )?;
    for si in [1usize, 2] {
        map = map.add(&comp(
            dec_tgt.embed(hc_tgt, si),
            GradedMap::identity(&hc_b.complex.space),
            hc_b,
            hc_b,
            &pr_b,
        )?)?;
    }
    map = map.add(&comp(
        dec_tgt.embed(hc_tgt, 3),
        GradedMap::identity(&hc_dx.complex.space),
        hc_dx,
        hc_dx,
        &pr_dx,
    )?)?;
    // kappa_B : C(B) -> D(I_B) = summand [2,1]
    map = map.add(&comp(
        dec_tgt.embed(hc_tgt, 4),
        crate::hochschild::kappa_a(hc_b, &dec_tgt.summands[4].hc),
        hc_b,
        &dec_tgt.summands[4].hc,
        &pr_b,
    )?)?;
    // transport D(X) -> D(X (x) I_B) = summand [2,0]
    {
        let emb = crate::dgcat::unit_right_embed(&td20, &x);
        let tr = crate::hochschild::transport(hc_dx, &dec_tgt.summands[5].hc, &[&emb], &emb);
        map = map.add(&comp(
            dec_tgt.embed(hc_tgt, 5),
            tr,
            hc_dx,
            &dec_tgt.summands[5].hc,
            &pr_dx,
        )?)?;
    }
    // kappa_X^l : D(X) -> D(X|I_B) = summand [2,1,0]
    {
        let k = crate::hochschild::kappa_x_left(hc_dx, &dec_tgt.summands[6].hc, &td20);
        map = map.add(&comp(
            dec_tgt.embed(hc_tgt, 6),
            k,
            hc_dx,
            &dec_tgt.summands[6].hc,
            &pr_dx,
        )?)?;
    }
    let _ = (field, ib);
    Ok(Theta { map })
}

/// theta'_X : C(T_X) -> C(T_{I_A,X}) (the 7-row matrix with kappa_A and
/// kappa_X^r).
pub fn theta_x_prime(
    t_tgt: &TriangularCategory,
    dec_src: &BlockDecomposition,
    hc_src: &HochComplex,
    dec_tgt: &BlockDecomposition,
    hc_tgt: &HochComplex,
) -> Result<Theta> {
    let ia = t_tgt.modules[0].clone();
    let x = t_tgt.modules[1].clone();
    let td20 = t_tgt.tds[&(2usize, 0usize)].clone();
    let pr_a = dec_src.project(hc_src, 0);
    let pr_b = dec_src.project(hc_src, 1);
    let pr_dx = dec_src.project(hc_src, 2);
    let hc_a = &dec_src.summands[0].hc;
    let hc_b = &dec_src.summands[1].hc;
    let hc_dx = &dec_src.summands[2].hc;
    let comp = |emb: GradedMap, inner: GradedMap, src_hc: &HochComplex, mid_hc: &HochComplex, pr: &GradedMap| -> Result<GradedMap> {
        let first = inner.compose(
            pr,
            &hc_src.complex.space,
            &src_hc.complex.space,
            &mid_hc.complex.space,
        )?;
        emb.compose(
            &first,
            &hc_src.complex.space,
            &mid_hc.complex.space,
            &hc_tgt.complex.space,
        )
    };
    // target summands: [0]=C(A) [1]=C(A) [2]=C(B) [1,0]=D(I_A) [2,1]=D(X)
    // [2,0]=D(I_A (x) X) [2,1,0]=D(I_A|X)
    let mut map = comp(
        dec_tgt.embed(hc_tgt, 0),
        GradedMap::identity(&hc_a.complex.space),
        hc_a,
        hc_a,
        &pr_a,
    )?;
    map = map.add(&comp(
        dec_tgt.embed(hc_tgt, 1),
        GradedMap::identity(&hc_a.complex.space),
        hc_a,
        hc_a,
        &pr_a,
    )?)?;
    map = map.add(&comp(
        dec_tgt.embed(hc_tgt, 2),
        GradedMap::identity(&hc_b.complex.space),
        hc_b,
        hc_b,
        &pr_b,
    )?)?;
    map = map.add(&comp(
        dec_tgt.embed(hc_tgt, 3),
        crate::hochschild::kappa_a(hc_a, &dec_tgt.summands[3].hc),
        hc_a,
        &dec_tgt.summands[3].hc,
        &pr_a,
    )?)?;
    map = map.add(&comp(
        dec_tgt.embed(hc_tgt, 4),
        GradedMap::identity(&hc_dx.complex.space),
        hc_dx,
        hc_dx,
        &pr_dx,
    )?)?;
    {
        let emb = crate::dgcat::unit_left_embed(&td20, &x);
        let tr = crate::hochschild::transport(hc_dx, &dec_tgt.summands[5].hc, &[&emb], &emb);
        map = map.add(&comp(
            dec_tgt.embed(hc_tgt, 5),
            tr,
            hc_dx,
            &dec_tgt.summands[5].hc,
            &pr_dx,
        )?)?;
    }
    {
        let k = crate::hochschild::kappa_x_right(hc_dx, &dec_tgt.summands[6].hc, &td20);
        map = map.add(&comp(
            dec_tgt.embed(hc_tgt, 6),
            k,
            hc_dx,
            &dec_tgt.summands[6].hc,
            &pr_dx,
        )?)?;
    }
    let _ = ia;
    Ok(Theta { map })
}

/// The inclusion of a 2-block triangular category onto the OUTER blocks
/// (0 and last) of a 3-block one, with the crossing hom embedded by the
/// given bimodule map (e.g. the unit embedding X -> X (x) I_B).
pub fn inclusion_outer(
    t_src: &TriangularCategory,
    t_tgt: &TriangularCategory,
    embed: &BimoduleMap,
) -> Result<DgFunctor> {
    if t_src.modules.len() != 1 || t_tgt.modules.len() != 2 {
        return Err(Error::ShapeMismatch("inclusion_outer expects m=1 into m=2".into()));
    }
    let last = t_tgt.blocks.len() - 1;
    let mut object_map = Vec::new();
    for &o in &t_src.objects_of_block[0] {
        let (_, loc) = t_src.block_of[o];
        object_map.push(t_tgt.objects_of_block[0][loc]);
    }
    for &o in &t_src.objects_of_block[1] {
        let (_, loc) = t_src.block_of[o];
        object_map.push(t_tgt.objects_of_block[last][loc]);
    }
    let n = t_src.cat.n_objects();
    let mut maps = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let (ba, oa) = t_src.block_of[a];
            let (bb, ob) = t_src.block_of[b];
            let g = if ba == bb {
                GradedMap::identity(&t_src.cat.hom(a, b).space)
            } else if ba > bb {
                // crossing: X(oa, ob) -> hom_tgt(last, 0)(oa, ob)
                embed
                    .map(oa, ob)
                    .cloned()
                    .unwrap_or_else(|| GradedMap::zero(t_src.cat.field, 0))
            } else {
                GradedMap::zero(t_src.cat.field, 0)
            };
            maps.insert((a, b), g);
        }
    }
    Ok(DgFunctor {
        name: "iota13".into(),
        source: t_src.cat.clone(),
        target: t_tgt.cat.clone(),
        object_map,
        maps,
    })
}
