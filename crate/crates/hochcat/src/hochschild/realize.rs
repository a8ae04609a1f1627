use super::{Shape, Target};
use crate::dgcat::{basis_iter, Elt};
use crate::graded::{Complex, GradedMap, GradedVectorSpace};
use crate::linalg::{Field, Matrix, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// An object profile: one path of objects per arm, in path order. The
/// module slot j connects paths[j+1].last() -> paths[j].first().
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    pub paths: Vec<Vec<usize>>,
}

impl Profile {
    pub fn weight(&self, n_modules: usize) -> usize {
        self.paths.iter().map(|p| p.len() - 1).sum::<usize>() + n_modules
    }

    /// Start object of the global path (in the last arm's category).
    pub fn global_start(&self) -> usize {
        self.paths.last().unwrap()[0]
    }

    /// End object of the global path (in arm 0's category).
    pub fn global_end(&self) -> usize {
        *self.paths[0].last().unwrap()
    }
}

/// One input slot of a profile, in formula order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotRef {
    /// An s-shifted hom slot of the given arm, the arrow `from -> to`.
    ArmHom { arm: usize, from: usize, to: usize },
    /// The module slot `modules[idx]`, an element of X(b, a).
    Module { idx: usize, b: usize, a: usize },
}

/// Formula-order slots of a profile: arm-0 homs (reversed path order),
/// module 0, arm-1 homs, module 1, ...
pub fn slots_of(shape: &Shape, p: &Profile) -> Vec<SlotRef> {
    let mut out = Vec::new();
    for (arm, path) in p.paths.iter().enumerate() {
        let l = path.len() - 1;
        for s in 1..=l {
            out.push(SlotRef::ArmHom {
                arm,
                from: path[l - s],
                to: path[l - s + 1],
            });
        }
        if arm < shape.n_modules() {
            out.push(SlotRef::Module {
                idx: arm,
                b: p.paths[arm + 1][p.paths[arm + 1].len() - 1],
                a: p.paths[arm][0],
            });
        }
    }
    out
}

pub fn slot_complex<'a>(shape: &'a Shape, s: &SlotRef) -> &'a Complex {
    match s {
        SlotRef::ArmHom { arm, from, to } => shape.arms[*arm].hom(*from, *to),
        SlotRef::Module { idx, b, a } => shape.modules[*idx].space(*b, *a),
    }
}

pub fn target_complex<'a>(shape: &'a Shape, p: &Profile) -> &'a Complex {
    match &shape.target {
        Target::CatHom => shape.arms[0].hom(p.paths[0][0], *p.paths[0].last().unwrap()),
        Target::Bimod(x) => x.space(p.global_start(), p.global_end()),
    }
}

/// Is a slot s-shifted under this shape?
pub fn slot_shifted(shape: &Shape, s: &SlotRef) -> bool {
    match s {
        SlotRef::ArmHom { .. } => true,
        SlotRef::Module { .. } => shape.shifted,
    }
}

/// Shifted degree of a slot entry.
pub fn sdeg(shape: &Shape, s: &SlotRef, deg: i64) -> i64 {
    if slot_shifted(shape, s) {
        deg - 1
    } else {
        deg
    }
}

/// A basis generator of the realized complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub profile: Profile,
    /// per slot: (degree in the slot complex, basis index)
    pub inputs: Vec<(i64, usize)>,
    pub out: (i64, usize),
}

impl Gen {
    pub fn weight(&self, n_modules: usize) -> usize {
        self.profile.weight(n_modules)
    }

    pub fn degree(&self, shape: &Shape) -> i64 {
        let slots = slots_of(shape, &self.profile);
        let insum: i64 = slots
            .iter()
            .zip(&self.inputs)
            .map(|(s, &(d, _))| sdeg(shape, s, d))
            .sum();
        self.out.0 - insum
    }
}

/// A realized truncated Hochschild-type complex.
pub struct HochComplex {
    pub shape: Shape,
    pub n_max: usize,
    pub complex: Complex,
    pub gens: BTreeMap<i64, Vec<Gen>>,
    index: BTreeMap<Gen, (i64, usize)>,
    /// Degrees in which cohomology of the truncation agrees with the
    /// untruncated complex: all t <= certified_hi (and everything below
    /// the realized support). `None` means no degree is certified.
    pub certified_hi: Option<i64>,
}

impl HochComplex {
    pub fn field(&self) -> Field {
        self.shape.field()
    }

    pub fn position(&self, g: &Gen) -> Option<(i64, usize)> {
        self.index.get(g).copied()
    }

    pub fn gen_at(&self, degree: i64, pos: usize) -> &Gen {
        &self.gens[&degree][pos]
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.complex.dim(degree)
    }

    /// All (profile, inputs) pairs, deduplicated, with their slot lists.
    pub fn tensors(&self) -> Vec<(Profile, Vec<(i64, usize)>)> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for gens in self.gens.values() {
            for g in gens {
                let key = (g.profile.clone(), g.inputs.clone());
                if seen.insert(key.clone()) {
                    out.push(key);
                }
            }
        }
        out
    }

    /// Check the requested cohomology window against the certification.
    pub fn check_window(&self, lo: i64, hi: i64) -> Result<()> {
        match self.certified_hi {
            Some(ch) if hi <= ch => Ok(()),
            Some(ch) => Err(Error::GuaranteeExceeded(format!(
                "window [{lo},{hi}] exceeds certified degree {ch} of {} at weight {}",
                self.shape.describe(),
                self.n_max
            ))),
            None => Err(Error::GuaranteeExceeded(format!(
                "no certified window for {} at weight {}",
                self.shape.describe(),
                self.n_max
            ))),
        }
    }
}

/// Enumerate all paths of a given length in a category along nonzero homs.
fn paths_of_len(cat: &crate::dgcat::DgCategory, len: usize) -> Vec<Vec<usize>> {
    let n = cat.n_objects();
    let mut cur: Vec<Vec<usize>> = (0..n).map(|a| vec![a]).collect();
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &cur {
            let last = *p.last().unwrap();
            for b in 0..n {
                if cat.hom(last, b).total_dim() > 0 {
                    let mut q = p.clone();
                    q.push(b);
                    next.push(q);
                }
            }
        }
        cur = next;
    }
    cur
}

/// Enumerate all profiles of weight <= n_max with nonzero slot and target
/// complexes.
fn enumerate_profiles(shape: &Shape, n_max: usize) -> Vec<Profile> {
    let m = shape.n_modules();
    let mut profiles = Vec::new();
    // distribute hom-slot counts over arms: total <= n_max - m
    let budget = n_max.saturating_sub(m);
    let n_arms = shape.n_arms();
    let mut lens = vec![0usize; n_arms];
    loop {
        let total: usize = lens.iter().sum();
        if total <= budget {
            // all combinations of paths with these lengths
            let mut arm_paths: Vec<Vec<Vec<usize>>> = Vec::new();
            for (arm, &l) in lens.iter().enumerate() {
                arm_paths.push(paths_of_len(&shape.arms[arm], l));
            }
            let mut stack = vec![0usize; n_arms];
            'combo: loop {
                let paths: Vec<Vec<usize>> = stack
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| arm_paths[i][k].clone())
                    .collect();
                let p = Profile { paths };
                // modules and target must be nonzero
                let slots = slots_of(shape, &p);
                let ok = slots
                    .iter()
                    .all(|s| slot_complex(shape, s).total_dim() > 0)
                    && target_complex(shape, &p).total_dim() > 0;
                if ok {
                    profiles.push(p);
                }
                // increment
                let mut i = 0;
                loop {
                    if i == n_arms {
                        break 'combo;
                    }
                    stack[i] += 1;
                    if stack[i] < arm_paths[i].len() {
                        break;
                    }
                    stack[i] = 0;
                    i += 1;
                }
                if arm_paths.iter().any(|v| v.is_empty()) {
                    break;
                }
            }
        }
        // next length vector with sum <= budget (odometer)
        let mut i = 0;
        loop {
            if i == n_arms {
                return profiles;
            }
            lens[i] += 1;
            if lens.iter().sum::<usize>() <= budget {
                break;
            }
            lens[i] = 0;
            i += 1;
        }
    }
}

/// Build the realized complex of a shape at weight truncation `n_max`.
pub fn realize(shape: &Shape, n_max: usize) -> Result<HochComplex> {
    let field = shape.field();
    let mut gens_by_degree: BTreeMap<i64, Vec<Gen>> = BTreeMap::new();
    for profile in enumerate_profiles(shape, n_max) {
        let slots = slots_of(shape, &profile);
        let target = target_complex(shape, &profile);
        // enumerate slot basis combinations
        let slot_bases: Vec<Vec<(i64, usize)>> = slots
            .iter()
            .map(|s| basis_iter(slot_complex(shape, s)))
            .collect();
        let mut stack = vec![0usize; slots.len()];
        'combo: loop {
            let inputs: Vec<(i64, usize)> = stack
                .iter()
                .enumerate()
                .map(|(i, &k)| slot_bases[i][k])
                .collect();
            for (od, oi) in basis_iter(target) {
                let g = Gen {
                    profile: profile.clone(),
                    inputs: inputs.clone(),
                    out: (od, oi),
                };
                let deg = g.degree(shape);
                gens_by_degree.entry(deg).or_default().push(g);
            }
            if slots.is_empty() {
                break;
            }
            let mut i = 0;
            loop {
                if i == slots.len() {
                    break 'combo;
                }
                stack[i] += 1;
                if stack[i] < slot_bases[i].len() {
                    break;
                }
                stack[i] = 0;
                i += 1;
            }
        }
    }
    let m = shape.n_modules();
    for gens in gens_by_degree.values_mut() {
        gens.sort_by(|a, b| {
            (a.weight(m), &a.profile, &a.inputs, a.out)
                .cmp(&(b.weight(m), &b.profile, &b.inputs, b.out))
        });
    }
    let mut index = BTreeMap::new();
    let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for (&deg, gens) in &gens_by_degree {
        let mut names = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            index.insert(g.clone(), (deg, i));
            names.push(format!(
                "g{}w{}#{}",
                deg,
                g.weight(m),
                i
            ));
        }
        labels.insert(deg, names);
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let mut hc = HochComplex {
        shape: shape.clone(),
        n_max,
        complex: Complex {
            space: space.clone(),
            d: GradedMap::zero(field, 1),
        },
        gens: gens_by_degree,
        index,
        certified_hi: certified_hi(shape, n_max),
    };
    let d = build_differential(&hc)?;
    // Complex::new re-checks d^2 = 0 exactly.
    hc.complex = Complex::new(space, d)?;
    Ok(hc)
}

/// The highest degree t for which H^t of the truncation is certified to
/// agree with the untruncated complex (degrees t-1, t, t+1 contain no
/// dropped components).
fn certified_hi(shape: &Shape, n_max: usize) -> Option<i64> {
    // max shifted degree contributed by one extra arm-hom slot
    let mut c_arm: Option<i64> = None;
    for arm in &shape.arms {
        for a in 0..arm.n_objects() {
            for b in 0..arm.n_objects() {
                if let Some(d) = arm.hom(a, b).space.max_degree() {
                    c_arm = Some(c_arm.map_or(d - 1, |c| c.max(d - 1)));
                }
            }
        }
    }
    let c_arm = c_arm?;
    // fixed contribution of the module slots (they are present in every
    // component of every weight)
    let mut mod_max = 0i64;
    for m in &shape.modules {
        let mut mm: Option<i64> = None;
        for (_, c) in m.spaces() {
            if let Some(d) = c.space.max_degree() {
                mm = Some(mm.map_or(d, |x: i64| x.max(d)));
            }
        }
        let mm = mm?;
        mod_max += if shape.shifted { mm - 1 } else { mm };
    }
    let t_min = match &shape.target {
        Target::CatHom => {
            let mut t: Option<i64> = None;
            let arm = &shape.arms[0];
            for a in 0..arm.n_objects() {
                for b in 0..arm.n_objects() {
                    if let Some(d) = arm.hom(a, b).space.min_degree() {
                        t = Some(t.map_or(d, |x: i64| x.min(d)));
                    }
                }
            }
            t?
        }
        Target::Bimod(x) => {
            let mut t: Option<i64> = None;
            for (_, c) in x.spaces() {
                if let Some(d) = c.space.min_degree() {
                    t = Some(t.map_or(d, |x: i64| x.min(d)));
                }
            }
            t?
        }
    };
    if c_arm > 0 {
        return None; // arbitrarily high weights reach arbitrarily low degrees
    }
    let m = shape.n_modules() as i64;
    let extra_homs = n_max as i64 + 1 - m; // hom slots of the lightest dropped weight
    let dropped_min = t_min - mod_max - extra_homs * c_arm;
    Some(dropped_min - 2)
}

/// One term of the differential applied to an output tensor: the cochain
/// is evaluated on `tensor` (an expansion over basis inputs of `profile`)
/// and the value is post-processed by `post`.
pub(super) struct DeltaTerm {
    pub profile: Profile,
    /// expansion: (inputs, coefficient)
    pub tensor: Vec<(Vec<(i64, usize)>, Scalar)>,
    /// parity a, phi-parity factor eps: total sign = (-1)^{a + eps*|phi|}
    pub parity: i64,
    pub phi_parity: i64,
    pub post: Post,
}

pub(super) enum Post {
    Identity,
    DTarget,
    /// Left action (or composition) by the given slot element on the output.
    ActLeft { arm_from: usize, arm_to: usize, elt: (i64, usize) },
    /// Right action (or composition) by the given slot element.
    ActRight { arm_from: usize, arm_to: usize, elt: (i64, usize) },
}

/// All differential terms for an output (profile, tensor) pair.
pub(super) fn delta_terms(shape: &Shape, p: &Profile, u: &[(i64, usize)]) -> Vec<DeltaTerm> {
    let slots = slots_of(shape, p);
    let n = slots.len();
    let mut terms = Vec::new();
    let sd = |j: usize| sdeg(shape, &slots[j], u[j].0);
    let pre = |j: usize| -> i64 { (0..j).map(sd).sum() };

    // internal: d on the target
    terms.push(DeltaTerm {
        profile: p.clone(),
        tensor: vec![(u.to_vec(), shape.field().one())],
        parity: 0,
        phi_parity: 0,
        post: Post::DTarget,
    });
    // internal: insert d into each slot
    for j in 0..n {
        let sc = slot_complex(shape, &slots[j]);
        let db = sc.d.block(&sc.space, &sc.space, u[j].0);
        let mut expansion = Vec::new();
        for r in 0..db.rows {
            let c = db.get(r, u[j].1);
            if !c.is_zero() {
                let mut v = u.to_vec();
                v[j] = (u[j].0 + 1, r);
                expansion.push((v, c));
            }
        }
        if expansion.is_empty() {
            continue;
        }
        let extra = if slot_shifted(shape, &slots[j]) { 0 } else { 1 };
        terms.push(DeltaTerm {
            profile: p.clone(),
            tensor: expansion,
            parity: pre(j) + extra,
            phi_parity: 1,
            post: Post::Identity,
        });
    }
    if n == 0 {
        return terms;
    }
    // external: out-left (first slot must be an arm-0 hom)
    if let SlotRef::ArmHom { arm: 0, from, to } = slots[0] {
        let mut q = p.clone();
        q.paths[0].pop();
        terms.push(DeltaTerm {
            profile: q,
            tensor: vec![(u[1..].to_vec(), shape.field().one())],
            parity: 1,
            phi_parity: sd(0).rem_euclid(2),
            post: Post::ActLeft {
                arm_from: from,
                arm_to: to,
                elt: u[0],
            },
        });
    }
    // external: out-right (last slot must be a last-arm hom)
    let last_arm = shape.n_arms() - 1;
    if let SlotRef::ArmHom { arm, from, to } = slots[n - 1] {
        if arm == last_arm {
            let mut q = p.clone();
            q.paths[last_arm].remove(0);
            terms.push(DeltaTerm {
                profile: q,
                tensor: vec![(u[..n - 1].to_vec(), shape.field().one())],
                parity: pre(n - 1),
                phi_parity: 1,
                post: Post::ActRight {
                    arm_from: from,
                    arm_to: to,
                    elt: u[n - 1],
                },
            });
        }
    }
    // external: merges of adjacent slots
    for j in 0..n - 1 {
        match (&slots[j], &slots[j + 1]) {
            (
                SlotRef::ArmHom { arm: a1, from: f1, to: t1 },
                SlotRef::ArmHom { arm: a2, from: f2, to: t2 },
            ) if a1 == a2 => {
                debug_assert_eq!(f1, t2);
                let cat = &shape.arms[*a1];
                let g = Elt::basis(&cat.hom(*f1, *t1).space, u[j].0, u[j].1);
                let f = Elt::basis(&cat.hom(*f2, *t2).space, u[j + 1].0, u[j + 1].1);
                let prod = cat.compose(*f2, *f1, *t1, &g, &f);
                let mut q = p.clone();
                // remove the middle object f1 (= t2) from the arm path
                let path = &mut q.paths[*a1];
                let l = path.len() - 1;
                // slot j is the arrow path[l-(j-offset)] ... recompute position:
                // slots within this arm start at index `arm_start`
                let arm_start = slot_arm_start(shape, p, *a1);
                let s = j - arm_start + 1; // 1-based slot within arm
                path.remove(l - s); // middle object of arrows s, s+1
                let mut expansion = Vec::new();
                for (r, c) in prod.coords.iter().enumerate() {
                    if !c.is_zero() {
                        let mut v = u.to_vec();
                        v.remove(j + 1);
                        v[j] = (prod.degree, r);
                        expansion.push((v, c.clone()));
                    }
                }
                if !expansion.is_empty() {
                    terms.push(DeltaTerm {
                        profile: q,
                        tensor: expansion,
                        parity: pre(j + 1) + 1,
                        phi_parity: 1,
                        post: Post::Identity,
                    });
                }
            }
            (
                SlotRef::ArmHom { arm, from, to },
                SlotRef::Module { idx, b, a },
            ) => {
                debug_assert_eq!(*arm, *idx);
                debug_assert_eq!(a, from);
                let module = &shape.modules[*idx];
                let ae = Elt::basis(&shape.arms[*arm].hom(*from, *to).space, u[j].0, u[j].1);
                let xe = Elt::basis(&module.space(*b, *a).space, u[j + 1].0, u[j + 1].1);
                let prod = module.act_left(*from, *to, *b, &ae, &xe);
                let mut q = p.clone();
                q.paths[*arm].remove(0);
                let mut expansion = Vec::new();
                for (r, c) in prod.coords.iter().enumerate() {
                    if !c.is_zero() {
                        let mut v = u.to_vec();
                        v.remove(j + 1);
                        v[j] = (prod.degree, r);
                        expansion.push((v, c.clone()));
                    }
                }
                if !expansion.is_empty() {
                    // Shifted module slots (D shapes) follow the same prefix
                    // rule as hom merges; for unshifted slots (C shapes) the
                    // consumed hom's own degree drops out of the prefix (the
                    // sign is pinned by the eta-cocycle relation between the
                    // C and D differentials).
                    let parity = if shape.shifted { pre(j + 1) + 1 } else { pre(j) };
                    terms.push(DeltaTerm {
                        profile: q,
                        tensor: expansion,
                        parity,
                        phi_parity: 1,
                        post: Post::Identity,
                    });
                }
            }
            (
                SlotRef::Module { idx, b, a },
                SlotRef::ArmHom { arm, from, to },
            ) => {
                debug_assert_eq!(*arm, idx + 1);
                debug_assert_eq!(b, to);
                let module = &shape.modules[*idx];
                let xe = Elt::basis(&module.space(*b, *a).space, u[j].0, u[j].1);
                let me = Elt::basis(&shape.arms[*arm].hom(*from, *to).space, u[j + 1].0, u[j + 1].1);
                let prod = module.act_right(*from, *to, *a, &xe, &me);
                let mut q = p.clone();
                q.paths[*arm].pop();
                let mut expansion = Vec::new();
                for (r, c) in prod.coords.iter().enumerate() {
                    if !c.is_zero() {
                        let mut v = u.to_vec();
                        v.remove(j + 1);
                        v[j] = (prod.degree, r);
                        expansion.push((v, c.clone()));
                    }
                }
                if !expansion.is_empty() {
                    terms.push(DeltaTerm {
                        profile: q,
                        tensor: expansion,
                        parity: pre(j + 1) + 1,
                        phi_parity: 1,
                        post: Post::Identity,
                    });
                }
            }
            _ => {} // module-module: no action term
        }
    }
    terms
}

/// Index (into the formula-order slot list) of the first slot of an arm.
fn slot_arm_start(shape: &Shape, p: &Profile, arm: usize) -> usize {
    let mut idx = 0;
    for a in 0..arm {
        idx += p.paths[a].len() - 1;
        if a < shape.n_modules() {
            idx += 1;
        }
    }
    idx
}

/// Apply a post-transform to an output basis element of `profile`'s target.
pub(super) fn apply_post(
    shape: &Shape,
    phi_profile: &Profile,
    post: &Post,
    out: (i64, usize),
) -> Elt {
    let tgt = target_complex(shape, phi_profile);
    match post {
        Post::Identity => Elt::basis(&tgt.space, out.0, out.1),
        Post::DTarget => {
            let db = tgt.d.block(&tgt.space, &tgt.space, out.0);
            let mut coords = vec![shape.field().zero(); tgt.space.dim(out.0 + 1)];
            for r in 0..db.rows {
                coords[r] = db.get(r, out.1);
            }
            Elt {
                degree: out.0 + 1,
                coords,
            }
        }
        Post::ActLeft { arm_from, arm_to, elt } => {
            let o = Elt::basis(&tgt.space, out.0, out.1);
            let a = Elt::basis(
                &shape.arms[0].hom(*arm_from, *arm_to).space,
                elt.0,
                elt.1,
            );
            match &shape.target {
                Target::CatHom => shape.arms[0].compose(
                    phi_profile.paths[0][0],
                    *arm_from,
                    *arm_to,
                    &a,
                    &o,
                ),
                Target::Bimod(x) => {
                    x.act_left(*arm_from, *arm_to, phi_profile.global_start(), &a, &o)
                }
            }
        }
        Post::ActRight { arm_from, arm_to, elt } => {
            let o = Elt::basis(&tgt.space, out.0, out.1);
            let last = shape.n_arms() - 1;
            let m = Elt::basis(
                &shape.arms[last].hom(*arm_from, *arm_to).space,
                elt.0,
                elt.1,
            );
            match &shape.target {
                Target::CatHom => shape.arms[0].compose(
                    *arm_from,
                    *arm_to,
                    *phi_profile.paths[0].last().unwrap(),
                    &o,
                    &m,
                ),
                Target::Bimod(x) => {
                    x.act_right(*arm_from, *arm_to, phi_profile.global_end(), &o, &m)
                }
            }
        }
    }
}

/// Build the full differential matrix of the realized complex.
fn build_differential(hc: &HochComplex) -> Result<GradedMap> {
    let shape = &hc.shape;
    let field = shape.field();
    let mut blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (p_out, u) in hc.tensors() {
        let terms = delta_terms(shape, &p_out, &u);
        for term in terms {
            for (e_in, c1) in &term.tensor {
                let phi_target = target_complex(shape, &term.profile);
                for (od, oi) in basis_iter(phi_target) {
                    let col_gen = Gen {
                        profile: term.profile.clone(),
                        inputs: e_in.clone(),
                        out: (od, oi),
                    };
                    let Some((t_col, col)) = hc.position(&col_gen) else {
                        continue; // weight overflow: quotient by high weights
                    };
                    let w = apply_post(shape, &term.profile, &term.post, (od, oi));
                    if w.is_zero() {
                        continue;
                    }
                    let sgn = crate::linalg::sign(
                        field,
                        term.parity + term.phi_parity * t_col,
                    );
                    for (ri, c2) in w.coords.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        let row_gen = Gen {
                            profile: p_out.clone(),
                            inputs: u.clone(),
                            out: (w.degree, ri),
                        };
                        let Some((t_row, row)) = hc.position(&row_gen) else {
                            continue;
                        };
                        debug_assert_eq!(t_row, t_col + 1);
                        let entry = &(&(c1 * c2) * &sgn);
                        blocks
                            .entry(t_col)
                            .or_insert_with(|| {
                                Matrix::zero(
                                    field,
                                    hc.complex.space.dim(t_col + 1),
                                    hc.complex.space.dim(t_col),
                                )
                            })
                            .add_to(row, col, entry);
                    }
                }
            }
        }
    }
    let mut d = GradedMap::zero(field, 1);
    for (deg, m) in blocks {
        if !m.is_zero() {
            d.set_block(deg, m);
        }
    }
    Ok(d)
}
