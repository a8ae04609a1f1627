//! Finite dg categories, dg functors, dg bimodules, and their basic
//! constructions: opposite and tensor categories, identity and restricted
//! bimodules, and the tensor product of bimodules over a middle category
//! realized as an explicit cokernel with a deterministic quotient basis.

use crate::graded::{
    classify_map, cohomology, is_chain_map, tensor, Complex, GradedMap, GradedVectorSpace,
    TensorLayout,
};
use crate::linalg::{Field, Matrix, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

pub type CatRef = Arc<DgCategory>;

/// An element of a hom complex (or bimodule space): a homogeneous vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elt {
    pub degree: i64,
    pub coords: Vec<Scalar>,
}

impl Elt {
    pub fn basis(space: &GradedVectorSpace, degree: i64, idx: usize) -> Elt {
        let mut coords = vec![space.field.zero(); space.dim(degree)];
        coords[idx] = space.field.one();
        Elt { degree, coords }
    }

    pub fn zero(space: &GradedVectorSpace, degree: i64) -> Elt {
        Elt {
            degree,
            coords: vec![space.field.zero(); space.dim(degree)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// A bilinear pairing `left (x) right -> target` of complexes, stored as a
/// degree-0 graded map out of the tensor complex. Used for compositions
/// and bimodule actions.
#[derive(Debug, Clone)]
pub struct Pairing {
    pub left: Complex,
    pub right: Complex,
    pub target: Complex,
    layout: TensorLayout,
    source_dims: GradedVectorSpace,
    pub map: GradedMap,
}

impl Pairing {
    /// Build from a function on basis pairs; `f(dl, il, dr, ir)` returns the
    /// coordinates of the product in `target` at degree `dl + dr`.
    pub fn from_basis_fn(
        left: &Complex,
        right: &Complex,
        target: &Complex,
        f: impl Fn(i64, usize, i64, usize) -> Vec<Scalar>,
    ) -> Pairing {
        let field = left.field();
        let layout = TensorLayout::new(&left.space, &right.space);
        let mut map = GradedMap::zero(field, 0);
        for (&total, blocks) in &layout.blocks {
            let rows = target.space.dim(total);
            let cols = layout.dim(total);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(field, rows, cols);
            for &(dl, dr, nl, nr, _) in blocks {
                for il in 0..nl {
                    for ir in 0..nr {
                        let out = f(dl, il, dr, ir);
                        debug_assert_eq!(out.len(), rows);
                        let col = layout.index(dl, il, dr, ir);
                        for (r, v) in out.iter().enumerate() {
                            if !v.is_zero() {
                                m.add_to(r, col, v);
                            }
                        }
                    }
                }
            }
            if !m.is_zero() {
                map.set_block(total, m);
            }
        }
        let source_dims = tensor_space_dims(field, &layout);
        Pairing {
            left: left.clone(),
            right: right.clone(),
            target: target.clone(),
            layout,
            source_dims,
            map,
        }
    }

    pub fn eval_basis(&self, dl: i64, il: usize, dr: i64, ir: usize) -> Elt {
        let total = dl + dr;
        let idx = self.layout.index(dl, il, dr, ir);
        let block = self.map.block(&self.source_dims, &self.target.space, total);
        let mut coords = vec![self.left.field().zero(); self.target.space.dim(total)];
        for r in 0..block.rows {
            coords[r] = block.get(r, idx);
        }
        Elt {
            degree: total,
            coords,
        }
    }

    /// Bilinear evaluation on homogeneous elements.
    pub fn eval(&self, l: &Elt, r: &Elt) -> Elt {
        let total = l.degree + r.degree;
        let field = self.left.field();
        let mut coords = vec![field.zero(); self.target.space.dim(total)];
        for (il, cl) in l.coords.iter().enumerate() {
            if cl.is_zero() {
                continue;
            }
            for (ir, cr) in r.coords.iter().enumerate() {
                if cr.is_zero() {
                    continue;
                }
                let b = self.eval_basis(l.degree, il, r.degree, ir);
                let s = cl * cr;
                for (k, v) in b.coords.iter().enumerate() {
                    if !v.is_zero() {
                        coords[k] = &coords[k] + &(v * &s);
                    }
                }
            }
        }
        Elt {
            degree: total,
            coords,
        }
    }

    /// Is the pairing a chain map out of the Koszul-signed tensor complex?
    pub fn is_chain_pairing(&self) -> Result<bool> {
        let t = tensor(&self.left, &self.right)?;
        Ok(is_chain_map(&self.map, &t, &self.target))
    }
}

fn tensor_space_dims(field: Field, layout: &TensorLayout) -> GradedVectorSpace {
    // Internal helper: a space with the layout's dimensions (labels unused).
    let dims: Vec<(i64, usize)> = layout
        .blocks
        .keys()
        .map(|&t| (t, layout.dim(t)))
        .collect();
    GradedVectorSpace::from_dims(field, &dims)
}

/// A finite dg category with explicit hom complexes, composition pairings,
/// and unit cocycles.
#[derive(Debug, Clone)]
pub struct DgCategory {
    pub name: String,
    pub field: Field,
    pub objects: Vec<String>,
    homs: Vec<Vec<Complex>>,
    comp: BTreeMap<(usize, usize, usize), Pairing>,
    units: Vec<Elt>,
}

impl DgCategory {
    pub fn new(
        name: impl Into<String>,
        field: Field,
        objects: Vec<String>,
        homs: Vec<Vec<Complex>>,
        comp: BTreeMap<(usize, usize, usize), Pairing>,
        units: Vec<Elt>,
    ) -> DgCategory {
        DgCategory {
            name: name.into(),
            field,
            objects,
            homs,
            comp,
            units,
        }
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn hom(&self, a: usize, b: usize) -> &Complex {
        &self.homs[a][b]
    }

    pub fn unit(&self, a: usize) -> &Elt {
        &self.units[a]
    }

    pub fn composition(&self, a: usize, b: usize, c: usize) -> Option<&Pairing> {
        self.comp.get(&(a, b, c))
    }

    /// g o f for g : b -> c and f : a -> b.
    pub fn compose(&self, a: usize, b: usize, c: usize, g: &Elt, f: &Elt) -> Elt {
        match self.comp.get(&(a, b, c)) {
            Some(p) => p.eval(g, f),
            None => Elt::zero(&self.homs[a][c].space, g.degree + f.degree),
        }
    }

    pub fn total_hom_dim(&self) -> usize {
        self.homs
            .iter()
            .flat_map(|row| row.iter())
            .map(|c| c.total_dim())
            .sum()
    }

    /// Check all dg category axioms exactly; the first violation is
    /// reported with a witness.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_objects();
        for a in 0..n {
            // units: degree 0 cocycles with d(1_a) = 0
            let u = &self.units[a];
            if u.degree != 0 {
                return Err(Error::axiom("unit-degree", format!("object {a}")));
            }
            let d = self.homs[a][a].d.block(
                &self.homs[a][a].space,
                &self.homs[a][a].space,
                0,
            );
            let du = d.apply(&u.coords)?;
            if du.iter().any(|v| !v.is_zero()) {
                return Err(Error::axiom("unit-cocycle", format!("object {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if let Some(p) = self.comp.get(&(a, b, c)) {
                        if !p.is_chain_pairing()? {
                            return Err(Error::axiom(
                                "composition-chain-map",
                                format!("triple ({a},{b},{c})"),
                            ));
                        }
                    }
                }
            }
        }
        // unit laws on basis elements
        for a in 0..n {
            for b in 0..n {
                let h = &self.homs[a][b];
                for deg in h.space.support() {
                    for i in 0..h.space.dim(deg) {
                        let f = Elt::basis(&h.space, deg, i);
                        let lf = self.compose(a, b, b, &self.units[b], &f);
                        let rf = self.compose(a, a, b, &f, &self.units[a]);
                        if lf != f || rf != f {
                            return Err(Error::axiom(
                                "unit-law",
                                format!("{}({a},{b}) basis {deg}:{i}", self.name),
                            ));
                        }
                    }
                }
            }
        }
        // associativity on basis triples
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let hab = &self.homs[a][b];
                        let hbc = &self.homs[b][c];
                        let hcd = &self.homs[c][d];
                        for (df, idf) in basis_iter(hab) {
                            for (dg, idg) in basis_iter(hbc) {
                                for (dh, idh) in basis_iter(hcd) {
                                    let f = Elt::basis(&hab.space, df, idf);
                                    let g = Elt::basis(&hbc.space, dg, idg);
                                    let h = Elt::basis(&hcd.space, dh, idh);
                                    let gf = self.compose(a, b, c, &g, &f);
                                    let hg = self.compose(b, c, d, &h, &g);
                                    let left = self.compose(a, c, d, &h, &gf);
                                    let right = self.compose(a, b, d, &hg, &f);
                                    if left != right {
                                        return Err(Error::axiom(
                                            "associativity",
                                            format!(
                                                "({a},{b},{c},{d}) basis ({df}:{idf},{dg}:{idg},{dh}:{idh})"
                                            ),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn basis_iter(c: &Complex) -> Vec<(i64, usize)> {
    c.space
        .support()
        .flat_map(|d| (0..c.space.dim(d)).map(move |i| (d, i)))
        .collect()
}

/// The opposite dg category: homs swapped, composition with the Koszul
/// sign (-1)^{|f||g|}.
pub fn opposite(cat: &DgCategory) -> DgCategory {
    let n = cat.n_objects();
    let homs: Vec<Vec<Complex>> = (0..n)
        .map(|a| (0..n).map(|b| cat.hom(b, a).clone()).collect())
        .collect();
    let mut comp = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // op-comp (a,b,c): op(b,c) (x) op(a,b) -> op(a,c)
                //  = C(c,b) (x) C(b,a) -> C(c,a): (g,f) -> (-1)^{|f||g|} f o g
                let left = &homs[b][c];
                let right = &homs[a][b];
                let target = &homs[a][c];
                if left.total_dim() == 0 || right.total_dim() == 0 || target.total_dim() == 0 {
                    continue;
                }
                let p = Pairing::from_basis_fn(left, right, target, |dg, ig, df, ifx| {
                    let g = Elt::basis(&left.space, dg, ig);
                    let f = Elt::basis(&right.space, df, ifx);
                    let mut out = cat.compose(c, b, a, &f, &g);
                    let sgn = crate::linalg::sign(cat.field, dg * df);
                    for v in out.coords.iter_mut() {
                        *v = &*v * &sgn;
                    }
                    out.coords
                });
                comp.insert((a, b, c), p);
            }
        }
    }
    DgCategory {
        name: format!("{}^op", cat.name),
        field: cat.field,
        objects: cat.objects.clone(),
        homs,
        comp,
        units: cat.units.clone(),
    }
}

/// Tensor product of dg categories, with the Koszul sign
/// (g (x) g') o (f (x) f') = (-1)^{|g'||f|} (g o f) (x) (g' o f').
pub fn tensor_categories(a: &DgCategory, b: &DgCategory) -> Result<DgCategory> {
    if a.field != b.field {
        return Err(Error::FieldMismatch("tensor of categories".into()));
    }
    let na = a.n_objects();
    let nb = b.n_objects();
    let obj_idx = |i: usize, j: usize| i * nb + j;
    let mut objects = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            objects.push(format!("({},{})", a.objects[i], b.objects[j]));
        }
    }
    let mut homs: Vec<Vec<Complex>> = Vec::new();
    for _ in 0..na * nb {
        homs.push(vec![Complex::zero(a.field); na * nb]);
    }
    for i in 0..na {
        for j in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let t = tensor(a.hom(i, i2), b.hom(j, j2))?;
                    homs[obj_idx(i, j)][obj_idx(i2, j2)] = t;
                }
            }
        }
    }
    let mut comp = BTreeMap::new();
    for i0 in 0..na {
        for j0 in 0..nb {
            for i1 in 0..na {
                for j1 in 0..nb {
                    for i2 in 0..na {
                        for j2 in 0..nb {
                            let o0 = obj_idx(i0, j0);
                            let o1 = obj_idx(i1, j1);
                            let o2 = obj_idx(i2, j2);
                            let left = homs[o1][o2].clone();
                            let right = homs[o0][o1].clone();
                            let target = homs[o0][o2].clone();
                            if left.total_dim() == 0
                                || right.total_dim() == 0
                                || target.total_dim() == 0
                            {
                                continue;
                            }
                            let lay_l = TensorLayout::new(
                                &a.hom(i1, i2).space,
                                &b.hom(j1, j2).space,
                            );
                            let lay_r = TensorLayout::new(
                                &a.hom(i0, i1).space,
                                &b.hom(j0, j1).space,
                            );
                            let lay_t = TensorLayout::new(
                                &a.hom(i0, i2).space,
                                &b.hom(j0, j2).space,
                            );
                            let p = Pairing::from_basis_fn(
                                &left,
                                &right,
                                &target,
                                |dg, ig, df, ifx| {
                                    let (dga, iga, dgb, igb) = lay_l.decompose(dg, ig);
                                    let (dfa, ifa, dfb, ifb) = lay_r.decompose(df, ifx);
                                    let ga = Elt::basis(&a.hom(i1, i2).space, dga, iga);
                                    let fa = Elt::basis(&a.hom(i0, i1).space, dfa, ifa);
                                    let gb = Elt::basis(&b.hom(j1, j2).space, dgb, igb);
                                    let fb = Elt::basis(&b.hom(j0, j1).space, dfb, ifb);
                                    let ca = a.compose(i0, i1, i2, &ga, &fa);
                                    let cb = b.compose(j0, j1, j2, &gb, &fb);
                                    let sgn = crate::linalg::sign(a.field, dgb * dfa);
                                    let mut out =
                                        vec![a.field.zero(); target.space.dim(dg + df)];
                                    for (ia, va) in ca.coords.iter().enumerate() {
                                        if va.is_zero() {
                                            continue;
                                        }
                                        for (ib, vb) in cb.coords.iter().enumerate() {
                                            if vb.is_zero() {
                                                continue;
                                            }
                                            let idx = lay_t.index(
                                                ca.degree, ia, cb.degree, ib,
                                            );
                                            out[idx] = &out[idx] + &(&(va * vb) * &sgn);
                                        }
                                    }
                                    out
                                },
                            );
                            comp.insert((o0, o1, o2), p);
                        }
                    }
                }
            }
        }
    }
    let mut units = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            let o = obj_idx(i, j);
            let lay = TensorLayout::new(&a.hom(i, i).space, &b.hom(j, j).space);
            let mut coords = vec![a.field.zero(); homs[o][o].space.dim(0)];
            let ua = a.unit(i);
            let ub = b.unit(j);
            for (ia, va) in ua.coords.iter().enumerate() {
                if va.is_zero() {
                    continue;
                }
                for (ib, vb) in ub.coords.iter().enumerate() {
                    if vb.is_zero() {
                        continue;
                    }
                    let idx = lay.index(0, ia, 0, ib);
                    coords[idx] = &coords[idx] + &(va * vb);
                }
            }
            units.push(Elt { degree: 0, coords });
        }
    }
    Ok(DgCategory {
        name: format!("{}(x){}", a.name, b.name),
        field: a.field,
        objects,
        homs,
        comp,
        units,
    })
}

/// A dg functor between finite dg categories.
#[derive(Debug, Clone)]
pub struct DgFunctor {
    pub name: String,
    pub source: CatRef,
    pub target: CatRef,
    pub object_map: Vec<usize>,
    /// maps[(a,b)] : source(a,b) -> target(Fa,Fb), degree 0.
    pub maps: BTreeMap<(usize, usize), GradedMap>,
}

impl DgFunctor {
    pub fn identity(cat: &CatRef) -> DgFunctor {
        let n = cat.n_objects();
        let mut maps = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                maps.insert((a, b), GradedMap::identity(&cat.hom(a, b).space));
            }
        }
        DgFunctor {
            name: format!("id_{}", cat.name),
            source: cat.clone(),
            target: cat.clone(),
            object_map: (0..n).collect(),
            maps,
        }
    }

    pub fn map(&self, a: usize, b: usize) -> &GradedMap {
        &self.maps[&(a, b)]
    }

    pub fn apply(&self, a: usize, b: usize, f: &Elt) -> Elt {
        let (fa, fb) = (self.object_map[a], self.object_map[b]);
        let src = self.source.hom(a, b);
        let tgt = self.target.hom(fa, fb);
        let block = self.map(a, b).block(&src.space, &tgt.space, f.degree);
        Elt {
            degree: f.degree,
            coords: block.apply(&f.coords).expect("functor block shape"),
        }
    }

    pub fn compose(first: &DgFunctor, second: &DgFunctor) -> Result<DgFunctor> {
        // second o first
        let n = first.source.n_objects();
        let mut maps = BTreeMap::new();
        let mut object_map = Vec::new();
        for a in 0..n {
            object_map.push(second.object_map[first.object_map[a]]);
        }
        for a in 0..n {
            for b in 0..n {
                let (fa, fb) = (first.object_map[a], first.object_map[b]);
                let m = second.map(fa, fb).compose(
                    first.map(a, b),
                    &first.source.hom(a, b).space,
                    &first.target.hom(fa, fb).space,
                    &second.target.hom(object_map[a], object_map[b]).space,
                )?;
                maps.insert((a, b), m);
            }
        }
        Ok(DgFunctor {
            name: format!("{}o{}", second.name, first.name),
            source: first.source.clone(),
            target: second.target.clone(),
            object_map,
            maps,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.source.n_objects();
        for a in 0..n {
            for b in 0..n {
                let (fa, fb) = (self.object_map[a], self.object_map[b]);
                if !is_chain_map(
                    self.map(a, b),
                    self.source.hom(a, b),
                    self.target.hom(fa, fb),
                ) {
                    return Err(Error::axiom("functor-chain-map", format!("pair ({a},{b})")));
                }
            }
        }
        for a in 0..n {
            let ua = self.apply(a, a, self.source.unit(a));
            if &ua != self.target.unit(self.object_map[a]) {
                return Err(Error::axiom("functor-unit", format!("object {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for (df, idf) in basis_iter(self.source.hom(a, b)) {
                        for (dg, idg) in basis_iter(self.source.hom(b, c)) {
                            let f = Elt::basis(&self.source.hom(a, b).space, df, idf);
                            let g = Elt::basis(&self.source.hom(b, c).space, dg, idg);
                            let gf = self.source.compose(a, b, c, &g, &f);
                            let lhs = self.apply(a, c, &gf);
                            let rhs = self.target.compose(
                                self.object_map[a],
                                self.object_map[b],
                                self.object_map[c],
                                &self.apply(b, c, &g),
                                &self.apply(a, b, &f),
                            );
                            if lhs != rhs {
                                return Err(Error::axiom(
                                    "functor-composition",
                                    format!("({a},{b},{c}) basis ({df}:{idf},{dg}:{idg})"),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Predicate flags for a dg functor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctorFlags {
    pub fully_faithful: bool,
    pub quasi_fully_faithful: bool,
    pub quasi_equivalence: bool,
}

pub fn functor_predicates(f: &DgFunctor) -> Result<FunctorFlags> {
    let n = f.source.n_objects();
    let mut ff = true;
    let mut qff = true;
    for a in 0..n {
        for b in 0..n {
            let (fa, fb) = (f.object_map[a], f.object_map[b]);
            let src = f.source.hom(a, b);
            let tgt = f.target.hom(fa, fb);
            let flags = classify_map(f.map(a, b), src, tgt)?;
            if !(flags.is_injective && flags.is_surjective) {
                ff = false;
            }
            if !flags.is_quasi_iso {
                qff = false;
            }
        }
    }
    let qe = qff && h0_essentially_surjective(f)?;
    Ok(FunctorFlags {
        fully_faithful: ff,
        quasi_fully_faithful: qff,
        quasi_equivalence: qe,
    })
}

/// Brute-force H^0 essential surjectivity: for every target object search a
/// source object and an H^0-isomorphism. Candidates u range over integer
/// coefficient vectors in {-1,0,1} on H^0 class representatives (documented
/// complexity bound: 3^dim per pair); the inverse v is solved linearly.
fn h0_essentially_surjective(f: &DgFunctor) -> Result<bool> {
    let tgt = &f.target;
    'targets: for b in 0..tgt.n_objects() {
        for a in 0..f.source.n_objects() {
            let fa = f.object_map[a];
            if h0_isomorphic(tgt, fa, b)? {
                continue 'targets;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Are two objects isomorphic in H^0 of the dg category?
pub fn h0_isomorphic(cat: &DgCategory, x: usize, y: usize) -> Result<bool> {
    if x == y {
        return Ok(true);
    }
    let hxy = cat.hom(x, y);
    let hyx = cat.hom(y, x);
    if hxy.space.dim(0) == 0 || hyx.space.dim(0) == 0 {
        return Ok(false);
    }
    let h = cohomology(hxy, 0, 0)?;
    let (_, reps) = &h[&0];
    if reps.is_empty() {
        return Ok(false);
    }
    let coeffs = [-1i64, 0, 1];
    let k = reps.len();
    let mut choice = vec![0usize; k];
    loop {
        let mut u = Elt::zero(&hxy.space, 0);
        for (i, rep) in reps.iter().enumerate() {
            let c = cat.field.from_i64(coeffs[choice[i]]);
            for (j, v) in rep.iter().enumerate() {
                u.coords[j] = &u.coords[j] + &(v * &c);
            }
        }
        if !u.is_zero() && h0_inverse_exists(cat, x, y, &u)? {
            return Ok(true);
        }
        // increment multi-index
        let mut i = 0;
        loop {
            if i == k {
                return Ok(false);
            }
            choice[i] += 1;
            if choice[i] < coeffs.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Given a degree-0 cocycle u : x -> y, solve linearly for v : y -> x with
/// d v = 0, v o u ~ 1_x and u o v ~ 1_y (modulo boundaries).
fn h0_inverse_exists(cat: &DgCategory, x: usize, y: usize, u: &Elt) -> Result<bool> {
    let field = cat.field;
    let hyx = cat.hom(y, x);
    let hxx = cat.hom(x, x);
    let hyy = cat.hom(y, y);
    let nv = hyx.space.dim(0);
    let nw1 = hxx.space.dim(-1);
    let nw2 = hyy.space.dim(-1);
    let unknowns = nv + nw1 + nw2;
    // rows: d(v) = 0 ; v o u - d(w1) = 1_x ; u o v - d(w2) = 1_y
    let rows_dv = hyx.space.dim(1);
    let rows_xx = hxx.space.dim(0);
    let rows_yy = hyy.space.dim(0);
    let mut m = Matrix::zero(field, rows_dv + rows_xx + rows_yy, unknowns);
    let dv = hyx.d.block(&hyx.space, &hyx.space, 0);
    for ((r, c), s) in dv.entries() {
        m.set(*r, *c, s.clone());
    }
    for j in 0..nv {
        let basis_v = Elt::basis(&hyx.space, 0, j);
        let vu = cat.compose(x, y, x, &basis_v, u);
        for (r, s) in vu.coords.iter().enumerate() {
            if !s.is_zero() {
                m.add_to(rows_dv + r, j, s);
            }
        }
        let uv = cat.compose(y, x, y, u, &basis_v);
        for (r, s) in uv.coords.iter().enumerate() {
            if !s.is_zero() {
                m.add_to(rows_dv + rows_xx + r, j, s);
            }
        }
    }
    let dxx = hxx.d.block(&hxx.space, &hxx.space, -1);
    for ((r, c), s) in dxx.entries() {
        m.add_to(rows_dv + r, nv + c, &-s);
    }
    let dyy = hyy.d.block(&hyy.space, &hyy.space, -1);
    for ((r, c), s) in dyy.entries() {
        m.add_to(rows_dv + rows_xx + r, nv + nw1 + c, &-s);
    }
    let mut rhs = vec![field.zero(); rows_dv + rows_xx + rows_yy];
    for (r, s) in cat.unit(x).coords.iter().enumerate() {
        rhs[rows_dv + r] = s.clone();
    }
    for (r, s) in cat.unit(y).coords.iter().enumerate() {
        rhs[rows_dv + rows_xx + r] = s.clone();
    }
    Ok(m.solve(&rhs)?.is_some())
}

/// A dg A-B-bimodule: complexes X(b,a) (b an object of B, a of A) with
/// chain-map actions. Left action: A(a,a') (x) X(b,a) -> X(b,a').
/// Right action: X(b',a) (x) B(b,b') -> X(b,a).
#[derive(Debug, Clone)]
pub struct DgBimodule {
    pub name: String,
    pub left_cat: CatRef,
    pub right_cat: CatRef,
    spaces: BTreeMap<(usize, usize), Complex>, // (b, a) -> X(b,a)
    left_action: BTreeMap<(usize, usize, usize), Pairing>, // (a, a2, b)
    right_action: BTreeMap<(usize, usize, usize), Pairing>, // (b, b2, a)
}

impl DgBimodule {
    pub fn new(
        name: impl Into<String>,
        left_cat: CatRef,
        right_cat: CatRef,
        spaces: BTreeMap<(usize, usize), Complex>,
        left_action: BTreeMap<(usize, usize, usize), Pairing>,
        right_action: BTreeMap<(usize, usize, usize), Pairing>,
    ) -> DgBimodule {
        DgBimodule {
            name: name.into(),
            left_cat,
            right_cat,
            spaces,
            left_action,
            right_action,
        }
    }

    pub fn field(&self) -> Field {
        self.left_cat.field
    }

    pub fn space(&self, b: usize, a: usize) -> &Complex {
        static EMPTY: std::sync::OnceLock<Complex> = std::sync::OnceLock::new();
        self.spaces
            .get(&(b, a))
            .unwrap_or_else(|| EMPTY.get_or_init(|| Complex::zero(Field::Q)))
    }

    pub fn spaces(&self) -> impl Iterator<Item = (&(usize, usize), &Complex)> {
        self.spaces.iter()
    }

    /// a . x for a in A(a1,a2), x in X(b,a1); result in X(b,a2).
    pub fn act_left(&self, a1: usize, a2: usize, b: usize, a: &Elt, x: &Elt) -> Elt {
        match self.left_action.get(&(a1, a2, b)) {
            Some(p) => p.eval(a, x),
            None => Elt::zero(&self.space(b, a2).space, a.degree + x.degree),
        }
    }

    /// x . m for x in X(b2,a), m in B(b1,b2); result in X(b1,a).
    pub fn act_right(&self, b1: usize, b2: usize, a: usize, x: &Elt, m: &Elt) -> Elt {
        match self.right_action.get(&(b1, b2, a)) {
            Some(p) => p.eval(x, m),
            None => Elt::zero(&self.space(b1, a).space, x.degree + m.degree),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|c| c.total_dim()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.spaces.values().all(|c| c.total_dim() == 0)
    }

    pub fn validate(&self) -> Result<()> {
        // actions are chain maps
        for p in self.left_action.values().chain(self.right_action.values()) {
            if !p.is_chain_pairing()? {
                return Err(Error::axiom("action-chain-map", self.name.clone()));
            }
        }
        let la = &self.left_cat;
        let rb = &self.right_cat;
        // unit laws
        for (&(b, a), x) in &self.spaces {
            for (d, i) in basis_iter(x) {
                let xe = Elt::basis(&x.space, d, i);
                let lu = self.act_left(a, a, b, la.unit(a), &xe);
                let ru = self.act_right(b, b, a, &xe, rb.unit(b));
                if lu != xe || ru != xe {
                    return Err(Error::axiom(
                        "bimodule-unit",
                        format!("{} at ({b},{a}) basis {d}:{i}", self.name),
                    ));
                }
            }
        }
        // left associativity: a2 . (a1 . x) = (a2 o a1) . x
        for (&(b, a0), x) in &self.spaces {
            for a1 in 0..la.n_objects() {
                for a2 in 0..la.n_objects() {
                    for (dx, ix) in basis_iter(x) {
                        for (d1, i1) in basis_iter(la.hom(a0, a1)) {
                            for (d2, i2) in basis_iter(la.hom(a1, a2)) {
                                let xe = Elt::basis(&x.space, dx, ix);
                                let f1 = Elt::basis(&la.hom(a0, a1).space, d1, i1);
                                let f2 = Elt::basis(&la.hom(a1, a2).space, d2, i2);
                                let lhs = self.act_left(
                                    a1,
                                    a2,
                                    b,
                                    &f2,
                                    &self.act_left(a0, a1, b, &f1, &xe),
                                );
                                let rhs = self.act_left(
                                    a0,
                                    a2,
                                    b,
                                    &la.compose(a0, a1, a2, &f2, &f1),
                                    &xe,
                                );
                                if lhs != rhs {
                                    return Err(Error::axiom(
                                        "bimodule-left-assoc",
                                        format!("{} at ({b},{a0})", self.name),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        // right associativity: (x . m2) . m1 = x . (m2 o m1)
        for (&(b2, a), x) in &self.spaces {
            for b1 in 0..rb.n_objects() {
                for b0 in 0..rb.n_objects() {
                    for (dx, ix) in basis_iter(x) {
                        for (d2, i2) in basis_iter(rb.hom(b1, b2)) {
                            for (d1, i1) in basis_iter(rb.hom(b0, b1)) {
                                let xe = Elt::basis(&x.space, dx, ix);
                                let m2 = Elt::basis(&rb.hom(b1, b2).space, d2, i2);
                                let m1 = Elt::basis(&rb.hom(b0, b1).space, d1, i1);
                                let lhs = self.act_right(
                                    b0,
                                    b1,
                                    a,
                                    &self.act_right(b1, b2, a, &xe, &m2),
                                    &m1,
                                );
                                let rhs = self.act_right(
                                    b0,
                                    b2,
                                    a,
                                    &xe,
                                    &rb.compose(b0, b1, b2, &m2, &m1),
                                );
                                if lhs != rhs {
                                    return Err(Error::axiom(
                                        "bimodule-right-assoc",
                                        format!("{} at ({b2},{a})", self.name),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        // actions commute: (a . x) . m = a . (x . m)
        for (&(b1, a0), x) in &self.spaces {
            for a1 in 0..la.n_objects() {
                for b0 in 0..rb.n_objects() {
                    for (dx, ix) in basis_iter(x) {
                        for (da, ia) in basis_iter(la.hom(a0, a1)) {
                            for (dm, im) in basis_iter(rb.hom(b0, b1)) {
                                let xe = Elt::basis(&x.space, dx, ix);
                                let ae = Elt::basis(&la.hom(a0, a1).space, da, ia);
                                let me = Elt::basis(&rb.hom(b0, b1).space, dm, im);
                                let lhs = self.act_right(
                                    b0,
                                    b1,
                                    a1,
                                    &self.act_left(a0, a1, b1, &ae, &xe),
                                    &me,
                                );
                                let rhs = self.act_left(
                                    a0,
                                    a1,
                                    b0,
                                    &ae,
                                    &self.act_right(b0, b1, a0, &xe, &me),
                                );
                                if lhs != rhs {
                                    return Err(Error::axiom(
                                        "bimodule-commute",
                                        format!("{} at ({b1},{a0})", self.name),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The identity bimodule I_A: I(b,a) = A(b,a), actions by composition.
pub fn identity_bimodule(cat: &CatRef) -> DgBimodule {
    let n = cat.n_objects();
    let mut spaces = BTreeMap::new();
    for b in 0..n {
        for a in 0..n {
            if cat.hom(b, a).total_dim() > 0 {
                spaces.insert((b, a), cat.hom(b, a).clone());
            }
        }
    }
    let mut left_action = BTreeMap::new();
    let mut right_action = BTreeMap::new();
    for a1 in 0..n {
        for a2 in 0..n {
            for b in 0..n {
                if let Some(p) = cat.composition(b, a1, a2) {
                    left_action.insert((a1, a2, b), p.clone());
                }
            }
        }
    }
    for b1 in 0..n {
        for b2 in 0..n {
            for a in 0..n {
                if let Some(p) = cat.composition(b1, b2, a) {
                    right_action.insert((b1, b2, a), p.clone());
                }
            }
        }
    }
    DgBimodule {
        name: format!("I_{}", cat.name),
        left_cat: cat.clone(),
        right_cat: cat.clone(),
        spaces,
        left_action,
        right_action,
    }
}

/// The restricted bimodule X_F of a dg functor F : A -> B:
/// X_F(b,a) = B(b, Fa), left action through F, right action by composition.
pub fn restricted_bimodule(f: &DgFunctor) -> DgBimodule {
    let a_cat = f.source.clone();
    let b_cat = f.target.clone();
    let na = a_cat.n_objects();
    let nb = b_cat.n_objects();
    let mut spaces = BTreeMap::new();
    for b in 0..nb {
        for a in 0..na {
            let c = b_cat.hom(b, f.object_map[a]);
            if c.total_dim() > 0 {
                spaces.insert((b, a), c.clone());
            }
        }
    }
    let mut left_action = BTreeMap::new();
    for a1 in 0..na {
        for a2 in 0..na {
            for b in 0..nb {
                let (fa1, fa2) = (f.object_map[a1], f.object_map[a2]);
                let left = a_cat.hom(a1, a2);
                let right = b_cat.hom(b, fa1);
                let target = b_cat.hom(b, fa2);
                if left.total_dim() == 0 || right.total_dim() == 0 || target.total_dim() == 0 {
                    continue;
                }
                let fc = f.clone();
                let b_c = b_cat.clone();
                let p = Pairing::from_basis_fn(left, right, target, move |da, ia, dx, ix| {
                    let ae = Elt::basis(&fc.source.hom(a1, a2).space, da, ia);
                    let fa = fc.apply(a1, a2, &ae);
                    let xe = Elt::basis(&b_c.hom(b, fa1).space, dx, ix);
                    b_c.compose(b, fa1, fa2, &fa, &xe).coords
                });
                left_action.insert((a1, a2, b), p);
            }
        }
    }
    let mut right_action = BTreeMap::new();
    for b1 in 0..nb {
        for b2 in 0..nb {
            for a in 0..na {
                let fa = f.object_map[a];
                if let Some(p) = b_cat.composition(b1, b2, fa) {
                    right_action.insert((b1, b2, a), p.clone());
                }
            }
        }
    }
    DgBimodule {
        name: format!("X_{}", f.name),
        left_cat: a_cat,
        right_cat: b_cat,
        spaces,
        left_action,
        right_action,
    }
}

/// Deterministic quotient of a complex by a degreewise-generated, d-stable
/// subspace: the quotient basis is the complement of the pivot coordinates
/// of the column-reduced generator matrix.
pub struct Quotient {
    pub complex: Complex,
    pub proj: GradedMap,
    pub section: GradedMap,
}

pub fn quotient_complex(t: &Complex, gens: &BTreeMap<i64, Matrix>) -> Result<Quotient> {
    let field = t.field();
    let mut proj = GradedMap::zero(field, 0);
    let mut section = GradedMap::zero(field, 0);
    let mut labels = BTreeMap::new();
    for deg in t.space.support() {
        let n = t.space.dim(deg);
        let gen = gens
            .get(&deg)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(field, n, 0));
        // Reduced basis of the subspace: row-echelon of the transpose gives
        // reduced row vectors; transpose back to columns.
        let (rows, pivots) = {
            let tm = gen.transpose();
            let mut dense: Vec<Vec<Scalar>> = Vec::new();
            let mut piv = Vec::new();
            // reuse Matrix::echelon via rank_kernel machinery: re-do echelon here
            let (r, p) = echelon_rows(&tm);
            dense.extend(r);
            piv.extend(p);
            (dense, piv)
        };
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free: Vec<usize> = (0..n).filter(|i| !pivot_cols.contains(i)).collect();
        let q = free.len();
        // projection: v -> coordinates on free indices after reduction
        let mut pm = Matrix::zero(field, q, n);
        for (j, &fi) in free.iter().enumerate() {
            pm.set(j, fi, field.one());
        }
        for (pi, &(pr, pc)) in pivots.iter().enumerate() {
            let _ = pi;
            // subtract v[pc] * (reduced row pr) restricted to free coords
            for (j, &fi) in free.iter().enumerate() {
                let val = &rows[pr][fi];
                if !val.is_zero() {
                    pm.add_to(j, pc, &-val);
                }
            }
        }
        let mut sm = Matrix::zero(field, n, q);
        for (j, &fi) in free.iter().enumerate() {
            sm.set(fi, j, field.one());
        }
        if q > 0 {
            labels.insert(
                deg,
                free.iter()
                    .map(|&i| format!("[{}]", t.space.label(deg, i)))
                    .collect::<Vec<_>>(),
            );
        }
        proj.set_block(deg, pm);
        section.set_block(deg, sm);
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let mut d = GradedMap::zero(field, 1);
    for deg in t.space.support() {
        let rows = space.dim(deg + 1);
        let cols = space.dim(deg);
        if rows == 0 || cols == 0 {
            continue;
        }
        let m = proj
            .block(&t.space, &space, deg + 1)
            .mul(&t.d.block(&t.space, &t.space, deg))?
            .mul(&section.block(&space, &t.space, deg))?;
        if !m.is_zero() {
            d.set_block(deg, m);
        }
    }
    let complex = Complex::new(space, d)?;
    Ok(Quotient {
        complex,
        proj,
        section,
    })
}

fn echelon_rows(m: &Matrix) -> (Vec<Vec<Scalar>>, Vec<(usize, usize)>) {
    // Row echelon with deterministic pivoting (same rule as Matrix::echelon,
    // reimplemented here because the dense rows are needed).
    let field = m.field;
    let zero = field.zero();
    let mut rows: Vec<Vec<Scalar>> = vec![vec![zero; m.cols]; m.rows];
    for ((r, c), v) in m.entries() {
        rows[*r][*c] = v.clone();
    }
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..m.cols {
        let Some(pr) = (next..m.rows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, pr);
        let inv = rows[next][col].inv();
        for c in col..m.cols {
            rows[next][c] = &rows[next][c] * &inv;
        }
        for r in 0..m.rows {
            if r != next && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..m.cols {
                    let delta = &f * &rows[next][c];
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        pivots.push((next, col));
        next += 1;
        if next == m.rows {
            break;
        }
    }
    (rows, pivots)
}

/// Layout of a direct sum over middle objects of tensor complexes
/// X(b,a) (x) Y(c,b): used to realize (X (x)_B Y)(c,a).
pub struct MiddleSum {
    pub middles: Vec<usize>,
    pub layouts: Vec<TensorLayout>,
    pub space: GradedVectorSpace,
    offsets: Vec<BTreeMap<i64, usize>>,
}

impl MiddleSum {
    pub fn new(field: Field, parts: Vec<(usize, TensorLayout, Vec<(i64, Vec<String>)>)>) -> Self {
        let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
        for (_, lay, _) in &parts {
            degrees.extend(lay.blocks.keys().copied());
        }
        let mut offsets: Vec<BTreeMap<i64, usize>> = vec![BTreeMap::new(); parts.len()];
        let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for &deg in &degrees {
            let mut off = 0usize;
            for (i, (_, lay, part_labels)) in parts.iter().enumerate() {
                offsets[i].insert(deg, off);
                off += lay.dim(deg);
                if let Some((_, ls)) = part_labels.iter().find(|(d, _)| *d == deg) {
                    labels.entry(deg).or_default().extend(ls.iter().cloned());
                }
            }
        }
        MiddleSum {
            middles: parts.iter().map(|(b, _, _)| *b).collect(),
            layouts: parts.into_iter().map(|(_, l, _)| l).collect(),
            space: GradedVectorSpace::from_labels(field, labels),
            offsets,
        }
    }

    pub fn index(&self, mid_pos: usize, dx: i64, ix: usize, dy: i64, iy: usize) -> (i64, usize) {
        let deg = dx + dy;
        (
            deg,
            self.offsets[mid_pos][&deg] + self.layouts[mid_pos].index(dx, ix, dy, iy),
        )
    }

    pub fn offset(&self, mid_pos: usize, deg: i64) -> usize {
        self.offsets[mid_pos].get(&deg).copied().unwrap_or(0)
    }
}

/// The tensor product of bimodules over the middle category, with its
/// quotient data per object pair.
pub struct BimoduleTensor {
    pub module: DgBimodule,
    pub quotients: BTreeMap<(usize, usize), (MiddleSum, Quotient)>,
}

/// X (x)_B Y for X an A-B-bimodule and Y a B-C-bimodule.
pub fn bimodule_tensor(x: &DgBimodule, y: &DgBimodule) -> Result<BimoduleTensor> {
    if !Arc::ptr_eq(&x.right_cat, &y.left_cat) && x.right_cat.name != y.left_cat.name {
        return Err(Error::ShapeMismatch(format!(
            "middle categories differ: {} vs {}",
            x.right_cat.name, y.left_cat.name
        )));
    }
    let field = x.field();
    let a_cat = x.left_cat.clone();
    let b_cat = x.right_cat.clone();
    let c_cat = y.right_cat.clone();
    let mut spaces = BTreeMap::new();
    let mut quotients = BTreeMap::new();
    for c in 0..c_cat.n_objects() {
        for a in 0..a_cat.n_objects() {
            // assemble the free sum over middle objects
            let mut parts = Vec::new();
            let mut part_complexes = Vec::new();
            for b in 0..b_cat.n_objects() {
                let xc = x.space(b, a);
                let yc = y.space(c, b);
                if xc.total_dim() == 0 || yc.total_dim() == 0 {
                    continue;
                }
                let lay = TensorLayout::new(&xc.space, &yc.space);
                let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
                for (&deg, blocks) in &lay.blocks {
                    let mut names = Vec::new();
                    for &(di, dj, ni, nj, _) in blocks {
                        for ii in 0..ni {
                            for jj in 0..nj {
                                names.push(format!(
                                    "{}(x){}@{}",
                                    xc.space.label(di, ii),
                                    yc.space.label(dj, jj),
                                    b_cat.objects[b]
                                ));
                            }
                        }
                    }
                    if !names.is_empty() {
                        labels.insert(deg, names);
                    }
                }
                parts.push((b, lay, labels.into_iter().collect::<Vec<_>>()));
                part_complexes.push((b, tensor(xc, yc)?));
            }
            let sum_layout = MiddleSum::new(field, parts);
            // free complex differential
            let mut dfree = GradedMap::zero(field, 1);
            for deg in sum_layout.space.support() {
                let rows = sum_layout.space.dim(deg + 1);
                let cols = sum_layout.space.dim(deg);
                if rows == 0 || cols == 0 {
                    continue;
                }
                let mut m = Matrix::zero(field, rows, cols);
                for (pos, (b, part)) in part_complexes.iter().enumerate() {
                    let _ = b;
                    let blk = part.d.block(&part.space, &part.space, deg);
                    let coff = sum_layout.offsets[pos][&deg];
                    let roff = sum_layout.offsets[pos][&(deg + 1)];
                    for ((r, cc), v) in blk.entries() {
                        m.set(r + roff, cc + coff, v.clone());
                    }
                }
                if !m.is_zero() {
                    dfree.set_block(deg, m);
                }
            }
            let free = Complex::new(sum_layout.space.clone(), dfree)?;
            // relation generators: xm (x) y - x (x) my over all basis triples
            let mut gens: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
            for (pos_b, &b) in sum_layout.middles.iter().enumerate() {
                for (pos_b2, &b2) in sum_layout.middles.iter().enumerate() {
                    let hb = b_cat.hom(b, b2);
                    if hb.total_dim() == 0 {
                        continue;
                    }
                    let xb2 = x.space(b2, a);
                    let yb = y.space(c, b);
                    for (dx, ix) in basis_iter(xb2) {
                        for (dm, im) in basis_iter(hb) {
                            for (dy, iy) in basis_iter(yb) {
                                let deg = dx + dm + dy;
                                let xe = Elt::basis(&xb2.space, dx, ix);
                                let me = Elt::basis(&hb.space, dm, im);
                                let ye = Elt::basis(&yb.space, dy, iy);
                                let xm = x.act_right(b, b2, a, &xe, &me);
                                let my = y.act_left(b, b2, c, &me, &ye);
                                let mut v = vec![field.zero(); free.space.dim(deg)];
                                // xm (x) y lands in the b summand
                                for (i, s) in xm.coords.iter().enumerate() {
                                    if s.is_zero() {
                                        continue;
                                    }
                                    let (dd, idx) =
                                        sum_layout.index(pos_b, xm.degree, i, dy, iy);
                                    debug_assert_eq!(dd, deg);
                                    v[idx] = &v[idx] + s;
                                }
                                // - x (x) my lands in the b2 summand
                                for (j, s) in my.coords.iter().enumerate() {
                                    if s.is_zero() {
                                        continue;
                                    }
                                    let (dd, idx) =
                                        sum_layout.index(pos_b2, dx, ix, my.degree, j);
                                    debug_assert_eq!(dd, deg);
                                    v[idx] = &v[idx] - s;
                                }
                                if v.iter().any(|s| !s.is_zero()) {
                                    gens.entry(deg).or_default().push(v);
                                }
                            }
                        }
                    }
                }
            }
            let gen_mats: BTreeMap<i64, Matrix> = gens
                .into_iter()
                .map(|(deg, cols)| {
                    (
                        deg,
                        Matrix::from_columns(field, free.space.dim(deg), &cols),
                    )
                })
                .collect();
            let q = quotient_complex(&free, &gen_mats)?;
            if q.complex.total_dim() > 0 {
                spaces.insert((c, a), q.complex.clone());
            }
            quotients.insert((c, a), (sum_layout, q));
        }
    }
    // induced actions through section / project
    let mut left_action = BTreeMap::new();
    for a1 in 0..a_cat.n_objects() {
        for a2 in 0..a_cat.n_objects() {
            for c in 0..c_cat.n_objects() {
                let hom = a_cat.hom(a1, a2);
                let src = spaces.get(&(c, a1));
                let tgt = spaces.get(&(c, a2));
                let (Some(src), Some(tgt)) = (src, tgt) else {
                    continue;
                };
                if hom.total_dim() == 0 {
                    continue;
                }
                let p = induced_action_left(x, (a1, a2, c), hom, src, tgt, &quotients)?;
                left_action.insert((a1, a2, c), p);
            }
        }
    }
    let mut right_action = BTreeMap::new();
    for c1 in 0..c_cat.n_objects() {
        for c2 in 0..c_cat.n_objects() {
            for a in 0..a_cat.n_objects() {
                let hom = c_cat.hom(c1, c2);
                let src = spaces.get(&(c2, a));
                let tgt = spaces.get(&(c1, a));
                let (Some(src), Some(tgt)) = (src, tgt) else {
                    continue;
                };
                if hom.total_dim() == 0 {
                    continue;
                }
                let p = induced_action_right(y, (c1, c2, a), hom, src, tgt, &quotients)?;
                right_action.insert((c1, c2, a), p);
            }
        }
    }
    let module = DgBimodule {
        name: format!("{}(x){}", x.name, y.name),
        left_cat: a_cat,
        right_cat: c_cat,
        spaces,
        left_action,
        right_action,
    };
    Ok(BimoduleTensor { module, quotients })
}

fn induced_action_left(
    x: &DgBimodule,
    key: (usize, usize, usize),
    hom: &Complex,
    src: &Complex,
    tgt: &Complex,
    quotients: &BTreeMap<(usize, usize), (MiddleSum, Quotient)>,
) -> Result<Pairing> {
    let (a1, a2, c) = key;
    let field = x.field();
    let (lay_src, q_src) = &quotients[&(c, a1)];
    let (lay_tgt, q_tgt) = &quotients[&(c, a2)];
    let p = Pairing::from_basis_fn(hom, src, tgt, |da, ia, dq, iq| {
        // lift the quotient basis element to the free sum, act on the X
        // factor, project back
        let sec = q_src
            .section
            .block(&q_src.complex.space, &lay_src.space, dq);
        let mut out = vec![field.zero(); tgt.space.dim(da + dq)];
        for r in 0..sec.rows {
            let coeff = sec.get(r, iq);
            if coeff.is_zero() {
                continue;
            }
            // locate summand and tensor indices
            let (pos, dx, ix, dy, iy) = decompose_sum(lay_src, dq, r);
            let b = lay_src.middles[pos];
            let ae = Elt::basis(&hom.space, da, ia);
            let xe = Elt::basis(&x.space(b, a1).space, dx, ix);
            let ax = x.act_left(a1, a2, b, &ae, &xe);
            // re-embed (ax) (x) y in the target free sum (same middle b)
            let tgt_pos = lay_tgt.middles.iter().position(|&m| m == b);
            let Some(tgt_pos) = tgt_pos else { continue };
            for (i, s) in ax.coords.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let (deg_free, idx_free) = lay_tgt.index(tgt_pos, ax.degree, i, dy, iy);
                let proj = q_tgt
                    .proj
                    .block(&lay_tgt.space, &q_tgt.complex.space, deg_free);
                for rr in 0..proj.rows {
                    let pv = proj.get(rr, idx_free);
                    if !pv.is_zero() {
                        out[rr] = &out[rr] + &(&(&coeff * s) * &pv);
                    }
                }
            }
        }
        out
    });
    Ok(p)
}

fn induced_action_right(
    y: &DgBimodule,
    key: (usize, usize, usize),
    hom: &Complex,
    src: &Complex,
    tgt: &Complex,
    quotients: &BTreeMap<(usize, usize), (MiddleSum, Quotient)>,
) -> Result<Pairing> {
    let (c1, c2, a) = key;
    let field = y.field();
    let (lay_src, q_src) = &quotients[&(c2, a)];
    let (lay_tgt, q_tgt) = &quotients[&(c1, a)];
    let p = Pairing::from_basis_fn(src, hom, tgt, |dq, iq, dm, im| {
        let sec = q_src
            .section
            .block(&q_src.complex.space, &lay_src.space, dq);
        let mut out = vec![field.zero(); tgt.space.dim(dq + dm)];
        for r in 0..sec.rows {
            let coeff = sec.get(r, iq);
            if coeff.is_zero() {
                continue;
            }
            let (pos, dx, ix, dy, iy) = decompose_sum(lay_src, dq, r);
            let b = lay_src.middles[pos];
            let me = Elt::basis(&hom.space, dm, im);
            let ye = Elt::basis(&y.space(c2, b).space, dy, iy);
            let ym = y.act_right(c1, c2, b, &ye, &me);
            let tgt_pos = lay_tgt.middles.iter().position(|&m| m == b);
            let Some(tgt_pos) = tgt_pos else { continue };
            for (j, s) in ym.coords.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let (deg_free, idx_free) = lay_tgt.index(tgt_pos, dx, ix, ym.degree, j);
                let proj = q_tgt
                    .proj
                    .block(&lay_tgt.space, &q_tgt.complex.space, deg_free);
                for rr in 0..proj.rows {
                    let pv = proj.get(rr, idx_free);
                    if !pv.is_zero() {
                        out[rr] = &out[rr] + &(&(&coeff * s) * &pv);
                    }
                }
            }
        }
        out
    });
    Ok(p)
}

fn decompose_sum(lay: &MiddleSum, deg: i64, idx: usize) -> (usize, i64, usize, i64, usize) {
    for pos in 0..lay.middles.len() {
        let off = lay.offsets[pos].get(&deg).copied().unwrap_or(0);
        let dim = lay.layouts[pos].dim(deg);
        if idx >= off && idx < off + dim {
            let (dx, ix, dy, iy) = lay.layouts[pos].decompose(deg, idx - off);
            return (pos, dx, ix, dy, iy);
        }
    }
    panic!("sum index out of range");
}

/// A morphism of bimodules: degree-0 chain maps per object pair commuting
/// with both actions.
#[derive(Debug, Clone)]
pub struct BimoduleMap {
    pub name: String,
    pub maps: BTreeMap<(usize, usize), GradedMap>,
}

impl BimoduleMap {
    pub fn identity(x: &DgBimodule) -> BimoduleMap {
        let maps = x
            .spaces()
            .map(|(&k, c)| (k, GradedMap::identity(&c.space)))
            .collect();
        BimoduleMap {
            name: format!("id_{}", x.name),
            maps,
        }
    }

    pub fn map(&self, b: usize, a: usize) -> Option<&GradedMap> {
        self.maps.get(&(b, a))
    }

    pub fn apply(&self, src: &DgBimodule, tgt: &DgBimodule, b: usize, a: usize, x: &Elt) -> Elt {
        match self.maps.get(&(b, a)) {
            None => Elt::zero(&tgt.space(b, a).space, x.degree),
            Some(m) => {
                let blk = m.block(&src.space(b, a).space, &tgt.space(b, a).space, x.degree);
                Elt {
                    degree: x.degree,
                    coords: blk.apply(&x.coords).expect("bimodule map shape"),
                }
            }
        }
    }

    pub fn validate(&self, src: &DgBimodule, tgt: &DgBimodule) -> Result<()> {
        for (&(b, a), _) in src.spaces() {
            let m = self
                .maps
                .get(&(b, a))
                .cloned()
                .unwrap_or_else(|| GradedMap::zero(src.field(), 0));
            if !is_chain_map(&m, src.space(b, a), tgt.space(b, a)) {
                return Err(Error::NotAChainMap(format!(
                    "bimodule map {} at ({b},{a})",
                    self.name
                )));
            }
        }
        let la = &src.left_cat;
        let rb = &src.right_cat;
        for (&(b, a), xc) in src.spaces() {
            for a2 in 0..la.n_objects() {
                for (da, ia) in basis_iter(la.hom(a, a2)) {
                    for (dx, ix) in basis_iter(xc) {
                        let ae = Elt::basis(&la.hom(a, a2).space, da, ia);
                        let xe = Elt::basis(&xc.space, dx, ix);
                        let lhs = self.apply(src, tgt, b, a2, &src.act_left(a, a2, b, &ae, &xe));
                        let rhs = tgt.act_left(a, a2, b, &ae, &self.apply(src, tgt, b, a, &xe));
                        if lhs != rhs {
                            return Err(Error::axiom(
                                "bimodule-map-left",
                                format!("{} at ({b},{a})", self.name),
                            ));
                        }
                    }
                }
            }
            for b0 in 0..rb.n_objects() {
                for (dm, im) in basis_iter(rb.hom(b0, b)) {
                    for (dx, ix) in basis_iter(xc) {
                        let me = Elt::basis(&rb.hom(b0, b).space, dm, im);
                        let xe = Elt::basis(&xc.space, dx, ix);
                        let lhs =
                            self.apply(src, tgt, b0, a, &src.act_right(b0, b, a, &xe, &me));
                        let rhs = tgt.act_right(b0, b, a, &self.apply(src, tgt, b, a, &xe), &me);
                        if lhs != rhs {
                            return Err(Error::axiom(
                                "bimodule-map-right",
                                format!("{} at ({b},{a})", self.name),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Classify the per-pair chain maps jointly (quasi-iso iff all pairs are).
    pub fn classify(&self, src: &DgBimodule, tgt: &DgBimodule) -> Result<crate::graded::MapFlags> {
        let mut qi = true;
        let mut surj = true;
        let mut inj = true;
        for (&(b, a), c) in src.spaces() {
            let m = self
                .maps
                .get(&(b, a))
                .cloned()
                .unwrap_or_else(|| GradedMap::zero(src.field(), 0));
            let f = classify_map(&m, c, tgt.space(b, a))?;
            qi &= f.is_quasi_iso;
            surj &= f.is_surjective;
            inj &= f.is_injective;
        }
        Ok(crate::graded::MapFlags {
            is_quasi_iso: qi,
            is_surjective: surj,
            is_injective: inj,
            is_fibration: surj,
            is_acyclic_fibration: surj && qi,
        })
    }
}

/// Build a bimodule map out of a tensor product from its values on free
/// pure tensors: `f(b_mid, x-basis, y-basis) -> Elt of target(c,a)`.
/// The quotient relations must be respected; `validate` is the caller's
/// check for that.
pub fn map_from_tensor(
    xt: &BimoduleTensor,
    target: &DgBimodule,
    name: impl Into<String>,
    f: impl Fn(usize, usize, usize, (i64, usize), (i64, usize)) -> Elt,
) -> BimoduleMap {
    let field = xt.module.field();
    let mut maps = BTreeMap::new();
    for (&(c, a), qc) in xt.module.spaces() {
        let (lay, q) = &xt.quotients[&(c, a)];
        let mut g = GradedMap::zero(field, 0);
        for deg in qc.space.support() {
            let rows = target.space(c, a).space.dim(deg);
            let cols = qc.space.dim(deg);
            let mut m = Matrix::zero(field, rows, cols);
            let sec = q.section.block(&qc.space, &lay.space, deg);
            for col in 0..cols {
                for r in 0..sec.rows {
                    let coeff = sec.get(r, col);
                    if coeff.is_zero() {
                        continue;
                    }
                    let (pos, dx, ix, dy, iy) = decompose_sum(lay, deg, r);
                    let b = lay.middles[pos];
                    let out = f(b, c, a, (dx, ix), (dy, iy));
                    for (rr, v) in out.coords.iter().enumerate() {
                        if !v.is_zero() {
                            m.add_to(rr, col, &(&coeff * v));
                        }
                    }
                }
            }
            if !m.is_zero() {
                g.set_block(deg, m);
            }
        }
        maps.insert((c, a), g);
    }
    BimoduleMap {
        name: name.into(),
        maps,
    }
}

/// The canonical map X (x)_B I_B -> X, x (x) m -> x.m.
pub fn unit_right_iso(xt: &BimoduleTensor, x: &DgBimodule) -> BimoduleMap {
    map_from_tensor(xt, x, format!("runit_{}", x.name), |b_mid, c, a, xb, mb| {
        // here the Y factor is I_B: m in B(c, b_mid)
        let xe = Elt::basis(&x.space(b_mid, a).space, xb.0, xb.1);
        let me = Elt::basis(&x.right_cat.hom(c, b_mid).space, mb.0, mb.1);
        x.act_right(c, b_mid, a, &xe, &me)
    })
}

/// The canonical map I_A (x)_A X -> X, m (x) x -> m.x.
pub fn unit_left_iso(xt: &BimoduleTensor, x: &DgBimodule) -> BimoduleMap {
    map_from_tensor(xt, x, format!("lunit_{}", x.name), |b_mid, c, a, mb, xb| {
        // the left factor is I_A: m in A(b_mid, a); the right factor X(c, b_mid)
        let me = Elt::basis(&x.left_cat.hom(b_mid, a).space, mb.0, mb.1);
        let xe = Elt::basis(&x.space(c, b_mid).space, xb.0, xb.1);
        x.act_left(b_mid, a, c, &me, &xe)
    })
}

/// The canonical embedding X -> X (x)_B I_B, x -> [x (x) 1]. Inverse of
/// `unit_right_iso`.
pub fn unit_right_embed(xt: &BimoduleTensor, x: &DgBimodule) -> BimoduleMap {
    let field = x.field();
    let mut maps = BTreeMap::new();
    for (&(b, a), xc) in x.spaces() {
        let (lay, q) = &xt.quotients[&(b, a)];
        let Some(pos) = lay.middles.iter().position(|&m| m == b) else {
            continue;
        };
        let unit = x.right_cat.unit(b);
        let mut g = GradedMap::zero(field, 0);
        for deg in xc.space.support() {
            let rows = q.complex.space.dim(deg);
            let cols = xc.space.dim(deg);
            let mut m = Matrix::zero(field, rows, cols);
            for c in 0..cols {
                for (iu, cu) in unit.coords.iter().enumerate() {
                    if cu.is_zero() {
                        continue;
                    }
                    let (dd, idx) = lay.index(pos, deg, c, 0, iu);
                    let proj = q.proj.block(&lay.space, &q.complex.space, dd);
                    for r in 0..proj.rows {
                        let v = proj.get(r, idx);
                        if !v.is_zero() {
                            m.add_to(r, c, &(&v * cu));
                        }
                    }
                }
            }
            g.set_block(deg, m);
        }
        maps.insert((b, a), g);
    }
    BimoduleMap {
        name: format!("emb_r_{}", x.name),
        maps,
    }
}

/// The canonical embedding X -> I_A (x)_A X, x -> [1 (x) x]. Inverse of
/// `unit_left_iso`.
pub fn unit_left_embed(xt: &BimoduleTensor, x: &DgBimodule) -> BimoduleMap {
    let field = x.field();
    let mut maps = BTreeMap::new();
    for (&(b, a), xc) in x.spaces() {
        let (lay, q) = &xt.quotients[&(b, a)];
        let Some(pos) = lay.middles.iter().position(|&m| m == a) else {
            continue;
        };
        let unit = x.left_cat.unit(a);
        let mut g = GradedMap::zero(field, 0);
        for deg in xc.space.support() {
            let rows = q.complex.space.dim(deg);
            let cols = xc.space.dim(deg);
            let mut m = Matrix::zero(field, rows, cols);
            for c in 0..cols {
                for (iu, cu) in unit.coords.iter().enumerate() {
                    if cu.is_zero() {
                        continue;
                    }
                    let (dd, idx) = lay.index(pos, 0, iu, deg, c);
                    let proj = q.proj.block(&lay.space, &q.complex.space, dd);
                    for r in 0..proj.rows {
                        let v = proj.get(r, idx);
                        if !v.is_zero() {
                            m.add_to(r, c, &(&v * cu));
                        }
                    }
                }
            }
            g.set_block(deg, m);
        }
        maps.insert((b, a), g);
    }
    BimoduleMap {
        name: format!("emb_l_{}", x.name),
        maps,
    }
}

/// The canonical map X_F (x)_B X_G -> X_{G o F}: for x in B(b, Fa) and
/// y in C(c, Gb), x (x) y -> G(x) o y.
pub fn restricted_compose_map(
    xt: &BimoduleTensor,
    f: &DgFunctor,
    g: &DgFunctor,
    target: &DgBimodule,
) -> BimoduleMap {
    let c_cat = g.target.clone();
    map_from_tensor(
        xt,
        target,
        format!("xf_{}{}", f.name, g.name),
        move |b_mid, c, a, xb, yb| {
            let fa = f.object_map[a];
            let xe = Elt::basis(&f.target.hom(b_mid, fa).space, xb.0, xb.1);
            let gx = g.apply(b_mid, fa, &xe);
            let ye = Elt::basis(&c_cat.hom(c, g.object_map[b_mid]).space, yb.0, yb.1);
            c_cat.compose(c, g.object_map[b_mid], g.object_map[fa], &gx, &ye)
        },
    )
}

/// Search for an isomorphism of bimodules X ~ Y (used by the unit-law
/// examples X (x) I ~ X). Works pairwise with `find_chain_iso` and then
/// verifies action compatibility.
pub fn find_bimodule_iso(x: &DgBimodule, y: &DgBimodule) -> Result<Option<BimoduleMap>> {
    let mut maps = BTreeMap::new();
    for (&(b, a), xc) in x.spaces() {
        let yc = y.space(b, a);
        match crate::graded::find_chain_iso(xc, yc)? {
            None => return Ok(None),
            Some(m) => {
                maps.insert((b, a), m);
            }
        }
    }
    let cand = BimoduleMap {
        name: format!("iso_{}~{}", x.name, y.name),
        maps,
    };
    match cand.validate(x, y) {
        Ok(()) => Ok(Some(cand)),
        Err(_) => Ok(None),
    }
}
