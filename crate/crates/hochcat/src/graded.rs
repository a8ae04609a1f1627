//! Graded vector spaces, complexes of vector spaces, Koszul-signed tensor
//! and Hom complexes, shift, cone, cohomology, and the model-structure
//! predicates on maps of complexes (fibration = degreewise surjection,
//! weak equivalence = quasi-isomorphism).

use crate::linalg::{Field, Matrix, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// How the differential of a shifted complex is signed. The crate-wide
/// default is `Negate` (d_{sV} = -d_V reindexed); it is the single global
/// sign knob, and all sign-sensitive identities are tested under it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftSign {
    Negate,
    Keep,
}

pub const DEFAULT_SHIFT_SIGN: ShiftSign = ShiftSign::Negate;

/// A finitely supported Z-graded vector space with labelled bases.
/// Degrees with dimension 0 are absent from the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVectorSpace {
    pub field: Field,
    labels: BTreeMap<i64, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn zero(field: Field) -> Self {
        GradedVectorSpace {
            field,
            labels: BTreeMap::new(),
        }
    }

    pub fn from_labels(field: Field, labels: BTreeMap<i64, Vec<String>>) -> Self {
        let labels = labels.into_iter().filter(|(_, l)| !l.is_empty()).collect();
        GradedVectorSpace { field, labels }
    }

    /// `dims[i]` in degree `degrees[i]`, labels generated as `e{deg}_{i}`.
    pub fn from_dims(field: Field, dims: &[(i64, usize)]) -> Self {
        let mut labels = BTreeMap::new();
        for (deg, n) in dims {
            if *n > 0 {
                labels.insert(*deg, (0..*n).map(|i| format!("e{deg}_{i}")).collect());
            }
        }
        GradedVectorSpace { field, labels }
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.labels.get(&degree).map_or(0, |l| l.len())
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(|l| l.len()).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.labels.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.labels.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.labels.keys().next_back().copied()
    }

    pub fn label(&self, degree: i64, idx: usize) -> &str {
        &self.labels[&degree][idx]
    }

    pub fn labels_at(&self, degree: i64) -> &[String] {
        self.labels.get(&degree).map_or(&[], |v| v.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.labels.is_empty()
    }

    /// Same field and dimensions in every degree (labels ignored).
    pub fn same_dims(&self, other: &GradedVectorSpace) -> bool {
        self.field == other.field
            && self.support().collect::<Vec<_>>() == other.support().collect::<Vec<_>>()
            && self.support().all(|d| self.dim(d) == other.dim(d))
    }
}

/// A graded map of a fixed degree: per-degree matrices
/// `blocks[d] : source^d -> target^{d+degree}`. Missing blocks are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub field: Field,
    pub degree: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    pub fn zero(field: Field, degree: i64) -> Self {
        GradedMap {
            field,
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let mut m = GradedMap::zero(space.field, 0);
        for d in space.support() {
            m.set_block(d, Matrix::identity(space.field, space.dim(d)));
        }
        m
    }

    pub fn set_block(&mut self, source_degree: i64, m: Matrix) {
        if m.is_zero() && m.rows == 0 && m.cols == 0 {
            return;
        }
        if m.is_zero() {
            // keep shape-carrying zero blocks out of the map
            self.blocks.remove(&source_degree);
            return;
        }
        self.blocks.insert(source_degree, m);
    }

    pub fn block(&self, source: &GradedVectorSpace, target: &GradedVectorSpace, d: i64) -> Matrix {
        self.blocks.get(&d).cloned().unwrap_or_else(|| {
            Matrix::zero(self.field, target.dim(d + self.degree), source.dim(d))
        })
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&i64, &Matrix)> {
        self.blocks.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.degree != other.degree {
            return Err(Error::ShapeMismatch("graded map degrees differ".into()));
        }
        let mut out = self.clone();
        for (d, m) in &other.blocks {
            match out.blocks.get_mut(d) {
                None => {
                    out.blocks.insert(*d, m.clone());
                }
                Some(cur) => *cur = cur.add(m)?,
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> GradedMap {
        let mut out = GradedMap::zero(self.field, self.degree);
        for (d, m) in &self.blocks {
            out.set_block(*d, m.scale(s));
        }
        out
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.scale(&-&self.field.one()))
    }

    /// `self` after `other`: (self o other)(x) = self(other(x)).
    pub fn compose(
        &self,
        other: &GradedMap,
        other_source: &GradedVectorSpace,
        mid: &GradedVectorSpace,
        target: &GradedVectorSpace,
    ) -> Result<GradedMap> {
        let mut out = GradedMap::zero(self.field, self.degree + other.degree);
        for d in other_source.support() {
            let first = other.block(other_source, mid, d);
            let second = self.block(mid, target, d + other.degree);
            let m = second.mul(&first)?;
            if !m.is_zero() {
                out.set_block(d, m);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, degree: i64, v: &[Scalar], source: &GradedVectorSpace, target: &GradedVectorSpace) -> Result<Vec<Scalar>> {
        self.block(source, target, degree).apply(v)
    }
}

/// A complex of vector spaces: a graded space with a degree +1 square-zero
/// differential, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    pub space: GradedVectorSpace,
    pub d: GradedMap,
}

impl Complex {
    pub fn new(space: GradedVectorSpace, d: GradedMap) -> Result<Self> {
        if d.degree != 1 {
            return Err(Error::ShapeMismatch("differential must have degree 1".into()));
        }
        if d.field != space.field {
            return Err(Error::FieldMismatch("differential vs carrier".into()));
        }
        for deg in space.support() {
            let b = d.block(&space, &space, deg);
            if b.rows != space.dim(deg + 1) || b.cols != space.dim(deg) {
                return Err(Error::ShapeMismatch(format!(
                    "differential block at degree {deg} has shape {}x{}, expected {}x{}",
                    b.rows,
                    b.cols,
                    space.dim(deg + 1),
                    space.dim(deg)
                )));
            }
        }
        let c = Complex { space, d };
        for deg in c.space.support() {
            let b1 = c.d.block(&c.space, &c.space, deg);
            let b2 = c.d.block(&c.space, &c.space, deg + 1);
            if !b2.mul(&b1)?.is_zero() {
                return Err(Error::axiom(
                    "d-squared",
                    format!("d^2 != 0 starting at degree {deg}"),
                ));
            }
        }
        Ok(c)
    }

    pub fn zero(field: Field) -> Self {
        Complex {
            space: GradedVectorSpace::zero(field),
            d: GradedMap::zero(field, 1),
        }
    }

    /// The one-dimensional complex `k` concentrated in `degree`.
    pub fn point(field: Field, degree: i64) -> Self {
        Complex {
            space: GradedVectorSpace::from_dims(field, &[(degree, 1)]),
            d: GradedMap::zero(field, 1),
        }
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.space.dim(degree)
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space
            .support()
            .map(|d| {
                let n = self.space.dim(d) as i64;
                if d.rem_euclid(2) == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }
}

/// Shift with an explicit sign convention: `(s^n V)^m = V^{m+n}` and the
/// differential picks up `(-1)^n` under `Negate`.
pub fn shift_with(v: &Complex, n: i64, mode: ShiftSign) -> Complex {
    let field = v.field();
    let mut labels = BTreeMap::new();
    for d in v.space.support() {
        labels.insert(d - n, v.space.labels_at(d).to_vec());
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let mut d_map = GradedMap::zero(field, 1);
    let sgn = match mode {
        ShiftSign::Negate => crate::linalg::sign(field, n),
        ShiftSign::Keep => field.one(),
    };
    for deg in v.space.support() {
        let b = v.d.block(&v.space, &v.space, deg);
        if !b.is_zero() {
            d_map.set_block(deg - n, b.scale(&sgn));
        }
    }
    Complex::new(space, d_map).expect("shift preserves d^2 = 0")
}

/// Shift with the crate default sign convention.
pub fn shift(v: &Complex, n: i64) -> Complex {
    shift_with(v, n, DEFAULT_SHIFT_SIGN)
}

/// Layout of `V (x) W`: for each total degree, the list of (degV, degW)
/// blocks in increasing degV order, with index offsets.
#[derive(Debug, Clone)]
pub struct TensorLayout {
    pub blocks: BTreeMap<i64, Vec<(i64, i64, usize, usize, usize)>>, // total -> (i, j, dimV_i, dimW_j, offset)
}

impl TensorLayout {
    pub fn new(v: &GradedVectorSpace, w: &GradedVectorSpace) -> Self {
        let mut blocks: BTreeMap<i64, Vec<(i64, i64, usize, usize, usize)>> = BTreeMap::new();
        for i in v.support() {
            for j in w.support() {
                blocks.entry(i + j).or_default().push((i, j, v.dim(i), w.dim(j), 0));
            }
        }
        for list in blocks.values_mut() {
            list.sort_by_key(|&(i, _, _, _, _)| i);
            let mut off = 0;
            for b in list.iter_mut() {
                b.4 = off;
                off += b.2 * b.3;
            }
        }
        TensorLayout { blocks }
    }

    pub fn dim(&self, total: i64) -> usize {
        self.blocks
            .get(&total)
            .map_or(0, |l| l.iter().map(|b| b.2 * b.3).sum())
    }

    /// Index of the basis tensor e_i^{(degV)} (x) e_j^{(degW)} within the
    /// total-degree part.
    pub fn index(&self, deg_v: i64, i: usize, deg_w: i64, j: usize) -> usize {
        let list = &self.blocks[&(deg_v + deg_w)];
        let b = list
            .iter()
            .find(|&&(di, dj, _, _, _)| di == deg_v && dj == deg_w)
            .expect("tensor block exists");
        b.4 + i * b.3 + j
    }

    pub fn decompose(&self, total: i64, idx: usize) -> (i64, usize, i64, usize) {
        let list = &self.blocks[&total];
        for &(i, j, dv, dw, off) in list {
            if idx < off + dv * dw {
                let rel = idx - off;
                return (i, rel / dw, j, rel % dw);
            }
        }
        panic!("tensor index out of range");
    }
}

/// Tensor product of complexes with the Koszul-signed differential
/// d(v (x) w) = dv (x) w + (-1)^{|v|} v (x) dw.
pub fn tensor(v: &Complex, w: &Complex) -> Result<Complex> {
    if v.field() != w.field() {
        return Err(Error::FieldMismatch("tensor of complexes".into()));
    }
    let field = v.field();
    let layout = TensorLayout::new(&v.space, &w.space);
    let mut labels = BTreeMap::new();
    for (total, list) in &layout.blocks {
        let mut names = Vec::new();
        for &(i, j, dv, dw, _) in list {
            for a in 0..dv {
                for b in 0..dw {
                    names.push(format!(
                        "{}(x){}",
                        v.space.label(i, a),
                        w.space.label(j, b)
                    ));
                }
            }
        }
        if !names.is_empty() {
            labels.insert(*total, names);
        }
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let mut d = GradedMap::zero(field, 1);
    for (&total, list) in &layout.blocks {
        let rows = layout.dim(total + 1);
        let cols = layout.dim(total);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(field, rows, cols);
        for &(i, j, dv, dw, _) in list {
            let dv_block = v.d.block(&v.space, &v.space, i);
            let dw_block = w.d.block(&w.space, &w.space, j);
            for a in 0..dv {
                for b in 0..dw {
                    let col = layout.index(i, a, j, b);
                    // dv (x) w
                    for r in 0..dv_block.rows {
                        let c = dv_block.get(r, a);
                        if !c.is_zero() {
                            m.add_to(layout.index(i + 1, r, j, b), col, &c);
                        }
                    }
                    // (-1)^{|v|} v (x) dw
                    let sgn = crate::linalg::sign(field, i);
                    for r in 0..dw_block.rows {
                        let c = dw_block.get(r, b);
                        if !c.is_zero() {
                            m.add_to(layout.index(i, a, j + 1, r), col, &(&c * &sgn));
                        }
                    }
                }
            }
        }
        if !m.is_zero() {
            d.set_block(total, m);
        }
    }
    Complex::new(space, d)
}

/// Layout of the internal Hom complex: the degree-n part is the direct sum
/// over source degrees d of Hom(V^d, W^{d+n}), ordered by (d, source
/// column, target row).
#[derive(Debug, Clone)]
pub struct HomLayout {
    pub blocks: BTreeMap<i64, Vec<(i64, usize, usize, usize)>>, // n -> (d, dimV_d, dimW_{d+n}, offset)
}

impl HomLayout {
    pub fn new(v: &GradedVectorSpace, w: &GradedVectorSpace) -> Self {
        let mut blocks: BTreeMap<i64, Vec<(i64, usize, usize, usize)>> = BTreeMap::new();
        for d in v.support() {
            for e in w.support() {
                let n = e - d;
                blocks.entry(n).or_default().push((d, v.dim(d), w.dim(e), 0));
            }
        }
        for list in blocks.values_mut() {
            list.sort_by_key(|&(d, _, _, _)| d);
            let mut off = 0;
            for b in list.iter_mut() {
                b.3 = off;
                off += b.1 * b.2;
            }
        }
        HomLayout { blocks }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.blocks
            .get(&n)
            .map_or(0, |l| l.iter().map(|b| b.1 * b.2).sum())
    }

    /// Index of the elementary map E_{r,c} : V^d -> W^{d+n} sending basis
    /// column c to basis row r.
    pub fn index(&self, n: i64, d: i64, c: usize, r: usize) -> usize {
        let list = &self.blocks[&n];
        let b = list.iter().find(|&&(bd, _, _, _)| bd == d).expect("hom block");
        b.3 + c * b.2 + r
    }

    pub fn decompose(&self, n: i64, idx: usize) -> (i64, usize, usize) {
        let list = &self.blocks[&n];
        for &(d, dv, dw, off) in list {
            if idx < off + dv * dw {
                let rel = idx - off;
                return (d, rel / dw, rel % dw); // (source degree, col, row)
            }
        }
        panic!("hom index out of range");
    }
}

/// Internal Hom complex with differential d(f) = d_W o f - (-1)^{|f|} f o d_V.
pub fn hom_complex(v: &Complex, w: &Complex) -> Result<Complex> {
    if v.field() != w.field() {
        return Err(Error::FieldMismatch("hom of complexes".into()));
    }
    let field = v.field();
    let layout = HomLayout::new(&v.space, &w.space);
    let mut labels = BTreeMap::new();
    for (n, list) in &layout.blocks {
        let mut names = Vec::new();
        for &(d, dv, dw, _) in list {
            for c in 0..dv {
                for r in 0..dw {
                    names.push(format!(
                        "[{}=>{}]",
                        v.space.label(d, c),
                        w.space.label(d + n, r)
                    ));
                }
            }
        }
        if !names.is_empty() {
            labels.insert(*n, names);
        }
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let mut dmap = GradedMap::zero(field, 1);
    for (&n, list) in &layout.blocks {
        let rows = layout.dim(n + 1);
        let cols = layout.dim(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(field, rows, cols);
        let sgn = crate::linalg::sign(field, n + 1); // -(-1)^n
        for &(d, dv, dw, _) in list {
            let dw_block = w.d.block(&w.space, &w.space, d + n);
            let dv_block = v.d.block(&v.space, &v.space, d - 1);
            for c in 0..dv {
                for r in 0..dw {
                    let col = layout.index(n, d, c, r);
                    // d_W o f : E_{r,c} contributes into block at source degree d
                    for rr in 0..dw_block.rows {
                        let a = dw_block.get(rr, r);
                        if !a.is_zero() {
                            m.add_to(layout.index(n + 1, d, c, rr), col, &a);
                        }
                    }
                    // -(-1)^{|f|} f o d_V : contributes into block at source degree d-1
                    for cc in 0..dv_block.cols {
                        let a = dv_block.get(c, cc);
                        if !a.is_zero() {
                            m.add_to(layout.index(n + 1, d - 1, cc, r), col, &(&a * &sgn));
                        }
                    }
                }
            }
        }
        if !m.is_zero() {
            dmap.set_block(n, m);
        }
    }
    Complex::new(space, dmap)
}

/// Direct sum of complexes, first summand's basis first.
pub fn direct_sum(a: &Complex, b: &Complex) -> Result<Complex> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch("direct sum".into()));
    }
    let field = a.field();
    let mut labels = BTreeMap::new();
    let degrees: std::collections::BTreeSet<i64> =
        a.space.support().chain(b.space.support()).collect();
    for &deg in &degrees {
        let mut names: Vec<String> = a
            .space
            .labels_at(deg)
            .iter()
            .map(|l| format!("L.{l}"))
            .collect();
        names.extend(b.space.labels_at(deg).iter().map(|l| format!("R.{l}")));
        labels.insert(deg, names);
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let mut d = GradedMap::zero(field, 1);
    for &deg in &degrees {
        let rows = space.dim(deg + 1);
        let cols = space.dim(deg);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(field, rows, cols);
        let ba = a.d.block(&a.space, &a.space, deg);
        for ((r, c), v) in ba.entries() {
            m.set(*r, *c, v.clone());
        }
        let bb = b.d.block(&b.space, &b.space, deg);
        let roff = a.space.dim(deg + 1);
        let coff = a.space.dim(deg);
        for ((r, c), v) in bb.entries() {
            m.set(r + roff, c + coff, v.clone());
        }
        if !m.is_zero() {
            d.set_block(deg, m);
        }
    }
    Complex::new(space, d)
}

/// Is `f` a chain map of the given degree? (a cocycle of the Hom complex:
/// d_W o f = (-1)^{|f|} f o d_V).
pub fn is_chain_map(f: &GradedMap, v: &Complex, w: &Complex) -> bool {
    let field = v.field();
    let sgn = crate::linalg::sign(field, f.degree);
    for deg in v.space.support() {
        let lhs = w
            .d
            .block(&w.space, &w.space, deg + f.degree)
            .mul(&f.block(&v.space, &w.space, deg));
        let rhs = f
            .block(&v.space, &w.space, deg + 1)
            .mul(&v.d.block(&v.space, &v.space, deg));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                if l.sub(&r.scale(&sgn)).map(|m| !m.is_zero()).unwrap_or(true) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Per-degree cohomology: dimension and a basis of representative cocycles
/// (columns in the degree's coordinates).
pub fn cohomology(v: &Complex, lo: i64, hi: i64) -> Result<BTreeMap<i64, (usize, Vec<Vec<Scalar>>)>> {
    if v.space.is_zero() {
        return Ok((lo..=hi).map(|d| (d, (0, Vec::new()))).collect());
    }
    let min = v.space.min_degree().unwrap();
    let max = v.space.max_degree().unwrap();
    if lo < min - 1 || hi > max + 1 {
        return Err(Error::GuaranteeExceeded(format!(
            "cohomology window [{lo},{hi}] outside carrier support [{min},{max}] padded by 1"
        )));
    }
    let mut out = BTreeMap::new();
    for n in lo..=hi {
        let dn = v.d.block(&v.space, &v.space, n);
        let dprev = v.d.block(&v.space, &v.space, n - 1);
        let (_, kernel) = dn.rank_kernel();
        let im_cols = dprev.pivot_columns();
        let im_basis = dprev.select_columns(&im_cols);
        let kernel_m = Matrix::from_columns(v.field(), v.space.dim(n), &kernel);
        let stacked = im_basis.hstack(&kernel_m)?;
        let pivots = stacked.pivot_columns();
        let reps: Vec<Vec<Scalar>> = pivots
            .iter()
            .filter(|&&c| c >= im_basis.cols)
            .map(|&c| kernel[c - im_basis.cols].clone())
            .collect();
        out.insert(n, (reps.len(), reps));
    }
    Ok(out)
}

/// Total cohomology dimensions over the full (finite) support.
pub fn cohomology_all(v: &Complex) -> Result<BTreeMap<i64, usize>> {
    if v.space.is_zero() {
        return Ok(BTreeMap::new());
    }
    let lo = v.space.min_degree().unwrap() - 1;
    let hi = v.space.max_degree().unwrap() + 1;
    Ok(cohomology(v, lo, hi)?
        .into_iter()
        .map(|(d, (n, _))| (d, n))
        .collect())
}

pub fn is_acyclic(v: &Complex) -> bool {
    cohomology_all(v).map(|h| h.values().all(|&n| n == 0)).unwrap_or(false)
}

/// Acyclicity checked only in a degree window.
pub fn is_acyclic_in_window(v: &Complex, lo: i64, hi: i64) -> Result<bool> {
    if v.space.is_zero() {
        return Ok(true);
    }
    let clo = lo.max(v.space.min_degree().unwrap() - 1);
    let chi = hi.min(v.space.max_degree().unwrap() + 1);
    if clo > chi {
        return Ok(true);
    }
    Ok(cohomology(v, clo, chi)?.values().all(|(n, _)| *n == 0))
}

/// The mapping cone of a degree-0 chain map together with the two triangle
/// maps: cone(f)^n = V^{n+1} + W^n, d = [[-d_V, 0], [f, d_W]],
/// inject : W -> cone, project : cone -> sV.
pub struct Cone {
    pub complex: Complex,
    pub inject: GradedMap,
    pub project: GradedMap,
}

pub fn cone(f: &GradedMap, v: &Complex, w: &Complex) -> Result<Cone> {
    if f.degree != 0 {
        return Err(Error::NotAChainMap("cone expects a degree-0 map".into()));
    }
    if !is_chain_map(f, v, w) {
        return Err(Error::NotAChainMap("cone argument".into()));
    }
    let field = v.field();
    let sv = shift(v, 1);
    let mut labels = BTreeMap::new();
    let degrees: std::collections::BTreeSet<i64> =
        sv.space.support().chain(w.space.support()).collect();
    for &deg in &degrees {
        let mut names: Vec<String> = sv
            .space
            .labels_at(deg)
            .iter()
            .map(|l| format!("s.{l}"))
            .collect();
        names.extend(w.space.labels_at(deg).iter().map(|l| format!("w.{l}")));
        labels.insert(deg, names);
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let mut d = GradedMap::zero(field, 1);
    for &deg in &degrees {
        let rows = space.dim(deg + 1);
        let cols = space.dim(deg);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(field, rows, cols);
        // -d_V on the shifted part (this is d_{sV} under the default knob).
        let dsv = sv.d.block(&sv.space, &sv.space, deg);
        for ((r, c), val) in dsv.entries() {
            m.set(*r, *c, val.clone());
        }
        // f : V^{deg+1} -> W^{deg+1}
        let fb = f.block(&v.space, &w.space, deg + 1);
        let roff = sv.space.dim(deg + 1);
        for ((r, c), val) in fb.entries() {
            m.set(r + roff, *c, val.clone());
        }
        // d_W
        let dw = w.d.block(&w.space, &w.space, deg);
        let coff = sv.space.dim(deg);
        for ((r, c), val) in dw.entries() {
            m.set(r + roff, c + coff, val.clone());
        }
        if !m.is_zero() {
            d.set_block(deg, m);
        }
    }
    let complex = Complex::new(space, d)?;
    let mut inject = GradedMap::zero(field, 0);
    for deg in w.space.support() {
        let mut m = Matrix::zero(field, complex.space.dim(deg), w.space.dim(deg));
        let off = sv.space.dim(deg);
        for i in 0..w.space.dim(deg) {
            m.set(off + i, i, field.one());
        }
        inject.set_block(deg, m);
    }
    let mut project = GradedMap::zero(field, 0);
    for deg in complex.space.support() {
        let rows = sv.space.dim(deg);
        if rows == 0 {
            continue;
        }
        let mut m = Matrix::zero(field, rows, complex.space.dim(deg));
        for i in 0..rows {
            m.set(i, i, field.one());
        }
        project.set_block(deg, m);
    }
    Ok(Cone {
        complex,
        inject,
        project,
    })
}

/// Classification flags for a degree-0 chain map of bounded complexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapFlags {
    pub is_quasi_iso: bool,
    pub is_surjective: bool,
    pub is_injective: bool,
    pub is_fibration: bool,
    pub is_acyclic_fibration: bool,
}

pub fn classify_map(f: &GradedMap, v: &Complex, w: &Complex) -> Result<MapFlags> {
    if f.degree != 0 {
        return Err(Error::NotAChainMap("classify expects degree 0".into()));
    }
    if !is_chain_map(f, v, w) {
        return Err(Error::NotAChainMap("classify argument".into()));
    }
    let mut surj = true;
    let mut inj = true;
    let degrees: std::collections::BTreeSet<i64> =
        v.space.support().chain(w.space.support()).collect();
    for &deg in &degrees {
        let b = f.block(&v.space, &w.space, deg);
        let rank = b.rank();
        if rank < w.space.dim(deg) {
            surj = false;
        }
        if rank < v.space.dim(deg) {
            inj = false;
        }
    }
    let qi = is_acyclic(&cone(f, v, w)?.complex);
    Ok(MapFlags {
        is_quasi_iso: qi,
        is_surjective: surj,
        is_injective: inj,
        is_fibration: surj,
        is_acyclic_fibration: surj && qi,
    })
}

/// Quasi-isomorphism verdict restricted to a certified degree window: the
/// cone must be acyclic in [lo, hi].
pub fn is_quasi_iso_in_window(f: &GradedMap, v: &Complex, w: &Complex, lo: i64, hi: i64) -> Result<bool> {
    let c = cone(f, v, w)?;
    is_acyclic_in_window(&c.complex, lo, hi)
}

/// A basis of the space of degree-0 chain maps v -> w.
pub fn chain_map_basis(v: &Complex, w: &Complex) -> Result<Vec<GradedMap>> {
    let hom = hom_complex(v, w)?;
    let layout = HomLayout::new(&v.space, &w.space);
    let d0 = hom.d.block(&hom.space, &hom.space, 0);
    let (_, kernel) = d0.rank_kernel();
    let mut out = Vec::new();
    for vec in kernel {
        let mut g = GradedMap::zero(v.field(), 0);
        let mut blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (idx, s) in vec.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let (d, c, r) = layout.decompose(0, idx);
            blocks
                .entry(d)
                .or_insert_with(|| Matrix::zero(v.field(), w.space.dim(d), v.space.dim(d)))
                .add_to(r, c, s);
        }
        for (d, m) in blocks {
            g.set_block(d, m);
        }
        out.push(g);
    }
    Ok(out)
}

/// Search for a chain isomorphism v ~ w: try each basis chain map, then
/// the sum of all, then small integer combinations. Deterministic.
pub fn find_chain_iso(v: &Complex, w: &Complex) -> Result<Option<GradedMap>> {
    if !v.space.same_dims(&w.space) {
        return Ok(None);
    }
    // the identity is often the witness (equal complexes up to labels)
    let id = GradedMap::identity(&v.space);
    if is_chain_map(&id, v, w) {
        return Ok(Some(id));
    }
    let basis = chain_map_basis(v, w)?;
    if basis.is_empty() {
        return Ok(if v.space.is_zero() {
            Some(GradedMap::zero(v.field(), 0))
        } else {
            None
        });
    }
    let invertible = |g: &GradedMap| -> bool {
        v.space.support().all(|d| {
            let b = g.block(&v.space, &w.space, d);
            b.is_invertible()
        })
    };
    for g in &basis {
        if invertible(g) {
            return Ok(Some(g.clone()));
        }
    }
    let mut sum = GradedMap::zero(v.field(), 0);
    for g in &basis {
        sum = sum.add(g)?;
    }
    if invertible(&sum) {
        return Ok(Some(sum));
    }
    // Small deterministic coefficient sweep: c_i in {1..=3} cyclically shifted.
    for shift_by in 0..basis.len().min(8) {
        let mut g = GradedMap::zero(v.field(), 0);
        for (i, b) in basis.iter().enumerate() {
            let c = ((i + shift_by) % 3 + 1) as i64;
            g = g.add(&b.scale(&v.field().from_i64(c)))?;
        }
        if invertible(&g) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(field: Field, top: i64) -> Complex {
        // k --id--> k in degrees (top-1, top); acyclic.
        let space = GradedVectorSpace::from_dims(field, &[(top - 1, 1), (top, 1)]);
        let mut d = GradedMap::zero(field, 1);
        d.set_block(top - 1, Matrix::identity(field, 1));
        Complex::new(space, d).unwrap()
    }

    #[test]
    fn shift_moves_degrees() {
        let v = Complex::point(Field::Q, 0);
        let s = shift(&v, 1);
        assert_eq!(s.dim(-1), 1);
        assert_eq!(s.dim(0), 0);
        let back = shift(&s, -1);
        assert!(back.space.same_dims(&v.space));
    }

    #[test]
    fn tensor_unit_and_dims() {
        let v = disk(Field::Q, 0);
        let unit = Complex::point(Field::Q, 0);
        let t = tensor(&v, &unit).unwrap();
        assert!(t.space.same_dims(&v.space));
        let t2 = tensor(&v, &v).unwrap();
        assert_eq!(t2.dim(-2), 1);
        assert_eq!(t2.dim(-1), 2);
        assert_eq!(t2.dim(0), 1);
    }

    #[test]
    fn hom_point_is_identity() {
        let v = disk(Field::Q, 0);
        let unit = Complex::point(Field::Q, 0);
        let h = hom_complex(&unit, &v).unwrap();
        assert!(h.space.same_dims(&v.space));
    }

    #[test]
    fn cone_of_identity_acyclic() {
        let v = disk(Field::Q, 1);
        let id = GradedMap::identity(&v.space);
        let c = cone(&id, &v, &v).unwrap();
        assert!(is_acyclic(&c.complex));
    }

    #[test]
    fn cone_of_zero_from_zero() {
        let v = Complex::point(Field::Q, 0);
        let zero = Complex::zero(Field::Q);
        let f = GradedMap::zero(Field::Q, 0);
        let c = cone(&f, &zero, &v).unwrap();
        assert!(c.complex.space.same_dims(&v.space));
    }

    #[test]
    fn classify_identity() {
        let v = disk(Field::Q, 0);
        let id = GradedMap::identity(&v.space);
        let flags = classify_map(&id, &v, &v).unwrap();
        assert!(flags.is_quasi_iso && flags.is_surjective && flags.is_injective);
        assert!(flags.is_acyclic_fibration);
    }

    #[test]
    fn classify_disk_onto_sphere() {
        // disk in degrees [-1,0] surjects onto k placed in degree -1
        // (the chain-map-compatible placement).
        let v = disk(Field::Q, 0);
        let w = Complex::point(Field::Q, -1);
        let mut f = GradedMap::zero(Field::Q, 0);
        f.set_block(-1, Matrix::identity(Field::Q, 1));
        let flags = classify_map(&f, &v, &w).unwrap();
        assert!(flags.is_fibration);
        assert!(!flags.is_quasi_iso);
    }

    #[test]
    fn inclusion_of_zero() {
        let v = Complex::point(Field::Q, 0);
        let zero = Complex::zero(Field::Q);
        let f = GradedMap::zero(Field::Q, 0);
        let flags = classify_map(&f, &zero, &v).unwrap();
        assert!(flags.is_injective);
        assert!(!flags.is_surjective);
    }

    #[test]
    fn cohomology_of_point_and_disk() {
        let p = Complex::point(Field::Q, 0);
        let h = cohomology_all(&p).unwrap();
        assert_eq!(h.get(&0), Some(&1));
        let d = disk(Field::Q, 3);
        assert!(is_acyclic(&d));
    }

    #[test]
    fn window_guard() {
        let p = Complex::point(Field::Q, 0);
        assert!(cohomology(&p, -5, 5).is_err());
        assert!(cohomology(&p, -1, 1).is_ok());
    }
}
