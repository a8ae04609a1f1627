use super::realize::{slots_of, Gen, HochComplex, Profile, SlotRef};
use super::{Shape, Target};
use crate::dgcat::{BimoduleTensor, Elt};
use crate::linalg::Scalar;
use crate::{Error, Result};
use rand::Rng;
use std::collections::BTreeMap;

/// A homogeneous element of a realized complex with a truncation
/// guarantee: only components of weight <= guarantee are semantically
/// trusted to agree with the untruncated object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub degree: i64,
    /// sparse (position, coefficient), sorted by position
    pub coords: Vec<(usize, Scalar)>,
    pub guarantee: i64,
}

impl Cochain {
    pub fn zero(degree: i64, guarantee: i64) -> Cochain {
        Cochain {
            degree,
            coords: Vec::new(),
            guarantee,
        }
    }

    pub fn from_gen(hc: &HochComplex, g: &Gen) -> Option<Cochain> {
        let (deg, pos) = hc.position(g)?;
        Some(Cochain {
            degree: deg,
            coords: vec![(pos, hc.field().one())],
            guarantee: hc.n_max as i64,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|(_, c)| c.is_zero())
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        Cochain {
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .map(|(p, c)| (*p, c * s))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            guarantee: self.guarantee,
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        if self.degree != other.degree {
            return Err(Error::ShapeMismatch("cochain degrees differ".into()));
        }
        let mut map: BTreeMap<usize, Scalar> = self.coords.iter().cloned().collect();
        for (p, c) in &other.coords {
            let cur = map.get(p).cloned();
            let v = match cur {
                None => c.clone(),
                Some(x) => &x + c,
            };
            if v.is_zero() {
                map.remove(p);
            } else {
                map.insert(*p, v);
            }
        }
        Ok(Cochain {
            degree: self.degree,
            coords: map.into_iter().collect(),
            guarantee: self.guarantee.min(other.guarantee),
        })
    }

    pub fn sub(&self, other: &Cochain, hc: &HochComplex) -> Result<Cochain> {
        self.add(&other.scale(&-&hc.field().one()))
    }

    /// Restrict to components of weight <= w.
    pub fn truncate_weight(&self, hc: &HochComplex, w: i64) -> Cochain {
        let m = hc.shape.n_modules();
        Cochain {
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .filter(|(p, _)| hc.gen_at(self.degree, *p).weight(m) as i64 <= w)
                .cloned()
                .collect(),
            guarantee: self.guarantee,
        }
    }

    /// Equality within the joint guarantee: trusted components must agree.
    pub fn eq_within_guarantee(&self, other: &Cochain, hc: &HochComplex) -> bool {
        if self.degree != other.degree {
            return self.is_zero() && other.is_zero();
        }
        let g = self.guarantee.min(other.guarantee);
        let a = self.truncate_weight(hc, g);
        let b = other.truncate_weight(hc, g);
        a.coords == b.coords
    }

    /// Dense coordinates at the cochain's degree.
    pub fn dense(&self, hc: &HochComplex) -> Vec<Scalar> {
        let mut v = vec![hc.field().zero(); hc.dim(self.degree)];
        for (p, c) in &self.coords {
            v[*p] = c.clone();
        }
        v
    }

    pub fn from_dense(_hc: &HochComplex, degree: i64, v: &[Scalar], guarantee: i64) -> Cochain {
        Cochain {
            degree,
            coords: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (p, c.clone()))
                .collect(),
            guarantee,
        }
    }
}

impl HochComplex {
    /// The differential applied to a cochain (guarantee preserved).
    pub fn delta(&self, phi: &Cochain) -> Cochain {
        let block = self
            .complex
            .d
            .block(&self.complex.space, &self.complex.space, phi.degree);
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (p, c) in &phi.coords {
            for ((r, cc), v) in block.entries() {
                if cc == p {
                    let add = v * c;
                    let cur = acc.get(r).cloned().unwrap_or_else(|| self.field().zero());
                    let nv = &cur + &add;
                    if nv.is_zero() {
                        acc.remove(r);
                    } else {
                        acc.insert(*r, nv);
                    }
                }
            }
        }
        Cochain {
            degree: phi.degree + 1,
            coords: acc.into_iter().collect(),
            guarantee: phi.guarantee,
        }
    }

    /// A seeded random cochain of the given degree, with small integer
    /// coefficients and full guarantee.
    pub fn random_cochain(&self, rng: &mut impl Rng, degree: i64) -> Cochain {
        let n = self.dim(degree);
        let mut coords = Vec::new();
        for p in 0..n {
            let c: i64 = rng.gen_range(-2..=2);
            if c != 0 {
                coords.push((p, self.field().from_i64(c)));
            }
        }
        Cochain {
            degree,
            coords,
            guarantee: self.n_max as i64,
        }
    }

    /// The arity-0 unit cochain of a C(A) shape: picks out the units.
    pub fn unit_cochain(&self) -> Result<Cochain> {
        match self.shape.target {
            Target::CatHom => {}
            _ => {
                return Err(Error::ShapeMismatch(
                    "unit cochain lives on C(A) shapes".into(),
                ))
            }
        }
        let cat = &self.shape.arms[0];
        let mut out = Cochain::zero(0, self.n_max as i64);
        for a in 0..cat.n_objects() {
            let u = cat.unit(a);
            for (i, c) in u.coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let g = Gen {
                    profile: Profile {
                        paths: vec![vec![a]],
                    },
                    inputs: Vec::new(),
                    out: (0, i),
                };
                if let Some((deg, pos)) = self.position(&g) {
                    debug_assert_eq!(deg, 0);
                    out = out.add(&Cochain {
                        degree: 0,
                        coords: vec![(pos, c.clone())],
                        guarantee: self.n_max as i64,
                    })?;
                }
            }
        }
        Ok(out)
    }
}

/// How the outputs of two cochains multiply under the cup product.
fn cup_out(
    shape_phi: &Shape,
    shape_psi: &Shape,
    shape_out: &Shape,
    tensor_data: Option<&BimoduleTensor>,
    g_phi: &Gen,
    g_psi: &Gen,
) -> Elt {
    let phi_tgt = super::realize::target_complex(shape_phi, &g_phi.profile);
    let psi_tgt = super::realize::target_complex(shape_psi, &g_psi.profile);
    let o_phi = Elt::basis(&phi_tgt.space, g_phi.out.0, g_phi.out.1);
    let o_psi = Elt::basis(&psi_tgt.space, g_psi.out.0, g_psi.out.1);
    match (&shape_phi.target, &shape_psi.target) {
        (Target::CatHom, Target::CatHom) => {
            // composition o_phi o o_psi in the shared category
            let cat = &shape_phi.arms[0];
            let s2 = g_psi.profile.paths[0][0];
            let e2 = g_psi.profile.global_end();
            let e1 = g_phi.profile.global_end();
            cat.compose(s2, e2, e1, &o_phi, &o_psi)
        }
        (Target::Bimod(x), Target::CatHom) => {
            // right action
            let b_new = g_psi.profile.paths[0][0];
            let b_old = g_phi.profile.global_start();
            let a = g_phi.profile.global_end();
            x.act_right(b_new, b_old, a, &o_phi, &o_psi)
        }
        (Target::CatHom, Target::Bimod(y)) => {
            // left action
            let a_from = g_psi.profile.global_end();
            let a_to = g_phi.profile.global_end();
            let b = g_psi.profile.global_start();
            y.act_left(a_from, a_to, b, &o_phi, &o_psi)
        }
        (Target::Bimod(_), Target::Bimod(_)) => {
            // pure tensor into the quotient target
            let td = tensor_data.expect("cup of bimodule targets needs tensor data");
            debug_assert!(matches!(shape_out.target, Target::Bimod(_)));
            let b_mid = g_phi.profile.global_start();
            let c = g_psi.profile.global_start();
            let a = g_phi.profile.global_end();
            let (lay, q) = &td.quotients[&(c, a)];
            let pos = lay
                .middles
                .iter()
                .position(|&m| m == b_mid)
                .expect("middle object present in tensor layout");
            let deg_free = o_phi.degree + o_psi.degree;
            let (_, idx0) = lay.index(pos, o_phi.degree, g_phi.out.1, o_psi.degree, g_psi.out.1);
            let proj = q.proj.block(&lay.space, &q.complex.space, deg_free);
            let mut coords = vec![shape_phi.field().zero(); q.complex.space.dim(deg_free)];
            for r in 0..proj.rows {
                let v = proj.get(r, idx0);
                if !v.is_zero() {
                    coords[r] = v;
                }
            }
            Elt {
                degree: deg_free,
                coords,
            }
        }
    }
}

/// Splice ψ's arm-0 path onto φ's last arm: the merged profile of the cup.
fn cup_profile(g_phi: &Profile, g_psi: &Profile) -> Profile {
    let mut paths = g_phi.paths.clone();
    let last = paths.len() - 1;
    // merged arm: psi's arm-0 path then phi's last-arm path
    let mut merged = g_psi.paths[0].clone();
    merged.extend_from_slice(&paths[last][1..]);
    paths[last] = merged;
    for p in &g_psi.paths[1..] {
        paths.push(p.clone());
    }
    Profile { paths }
}

/// The generic cup product. The output shape concatenates the inputs'
/// shapes (last arm of φ merged with first arm of ψ); for two bimodule
/// targets the output target is their tensor product and `tensor_data`
/// must supply its quotient structure.
pub fn cup(
    hc_phi: &HochComplex,
    phi: &Cochain,
    hc_psi: &HochComplex,
    psi: &Cochain,
    hc_out: &HochComplex,
    tensor_data: Option<&BimoduleTensor>,
) -> Result<Cochain> {
    let field = hc_out.field();
    let mut out = Cochain::zero(
        phi.degree + psi.degree,
        phi.guarantee.min(psi.guarantee),
    );
    for (p_phi, c_phi) in &phi.coords {
        let g_phi = hc_phi.gen_at(phi.degree, *p_phi);
        for (p_psi, c_psi) in &psi.coords {
            let g_psi = hc_psi.gen_at(psi.degree, *p_psi);
            // composability: psi's global end = phi's global start
            if g_psi.profile.global_end() != g_phi.profile.global_start() {
                continue;
            }
            let prod = cup_out(
                &hc_phi.shape,
                &hc_psi.shape,
                &hc_out.shape,
                tensor_data,
                g_phi,
                g_psi,
            );
            if prod.is_zero() {
                continue;
            }
            let profile = cup_profile(&g_phi.profile, &g_psi.profile);
            let mut inputs = g_phi.inputs.clone();
            inputs.extend_from_slice(&g_psi.inputs);
            // sign: (-1)^{|phi-block sdeg| * |psi|}
            let phi_slots = slots_of(&hc_phi.shape, &g_phi.profile);
            let block_sdeg: i64 = phi_slots
                .iter()
                .zip(&g_phi.inputs)
                .map(|(s, &(d, _))| super::realize::sdeg(&hc_phi.shape, s, d))
                .sum();
            let sgn = crate::linalg::sign(field, block_sdeg * psi.degree);
            for (r, v) in prod.coords.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let gen = Gen {
                    profile: profile.clone(),
                    inputs: inputs.clone(),
                    out: (prod.degree, r),
                };
                let Some((deg, pos)) = hc_out.position(&gen) else {
                    continue; // weight overflow
                };
                debug_assert_eq!(deg, out.degree);
                let coeff = &(&(c_phi * c_psi) * v) * &sgn;
                out = out.add(&Cochain {
                    degree: out.degree,
                    coords: vec![(pos, coeff)],
                    guarantee: out.guarantee,
                })?;
            }
        }
    }
    Ok(out)
}

/// Cup on a single C(A)-shaped complex (both factors and output live there).
pub fn cup_cat(hc: &HochComplex, phi: &Cochain, psi: &Cochain) -> Result<Cochain> {
    cup(hc, phi, hc, psi, hc, None)
}

/// The generic brace operation phi{psi_1, ..., psi_k}. The arguments fill
/// slots of phi in order: an argument with CatHom target over arm r fills
/// an arm-r hom slot, an argument with target X_i fills the i-th module
/// slot. k = 0 returns phi unchanged.
pub fn brace(
    hc_phi: &HochComplex,
    phi: &Cochain,
    args: &[(&HochComplex, &Cochain)],
    hc_out: &HochComplex,
) -> Result<Cochain> {
    let plain: Vec<(&HochComplex, &Cochain, Option<usize>)> =
        args.iter().map(|&(h, c)| (h, c, None)).collect();
    brace_at(hc_phi, phi, &plain, hc_out)
}

/// Brace with explicit slot designations: `Some(r)` restricts a CatHom
/// argument to arm-r hom slots (and a bimodule argument to the module-r
/// slot). Needed by the block formulas when distinct arms carry the same
/// category, which shape matching alone cannot separate.
pub fn brace_at(
    hc_phi: &HochComplex,
    phi: &Cochain,
    args: &[(&HochComplex, &Cochain, Option<usize>)],
    hc_out: &HochComplex,
) -> Result<Cochain> {
    if args.is_empty() {
        return Ok(phi.clone());
    }
    let k = args.len() as i64;
    let mut g_out = phi.guarantee - k;
    for (_, psi, _) in args {
        g_out = g_out.min(psi.guarantee);
    }
    if g_out < 0 {
        return Err(Error::GuaranteeExceeded(format!(
            "brace with {k} arguments on guarantee {}",
            phi.guarantee
        )));
    }
    let field = hc_out.field();
    let out_degree = phi.degree + args.iter().map(|(_, c, _)| c.degree - 1).sum::<i64>();
    let mut out = Cochain::zero(out_degree, g_out);
    for (p_phi, c_phi) in &phi.coords {
        let g_phi = hc_phi.gen_at(phi.degree, *p_phi);
        let slots = slots_of(&hc_phi.shape, &g_phi.profile);
        let n = slots.len();
        if n < args.len() {
            continue;
        }
        // choose increasing positions for the k arguments
        let mut positions: Vec<usize> = (0..args.len()).collect();
        'subsets: loop {
            brace_fill(
                hc_phi, g_phi, c_phi, &slots, &positions, args, hc_out, &mut out, field,
            )?;
            // next k-subset of 0..n in lexicographic order
            let kk = positions.len();
            let mut i = kk;
            loop {
                if i == 0 {
                    break 'subsets;
                }
                i -= 1;
                if positions[i] < n - (kk - i) {
                    positions[i] += 1;
                    for j in i + 1..kk {
                        positions[j] = positions[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn brace_fill(
    hc_phi: &HochComplex,
    g_phi: &Gen,
    c_phi: &Scalar,
    slots: &[SlotRef],
    positions: &[usize],
    args: &[(&HochComplex, &Cochain, Option<usize>)],
    hc_out: &HochComplex,
    out: &mut Cochain,
    field: crate::linalg::Field,
) -> Result<()> {
    // check shape compatibility of each argument with its slot
    for (j, &pos) in positions.iter().enumerate() {
        let (hc_psi, _, designation) = args[j];
        match (&slots[pos], &hc_psi.shape.target) {
            (SlotRef::ArmHom { arm, .. }, Target::CatHom) => {
                if hc_psi.shape.arms[0].name != hc_phi.shape.arms[*arm].name {
                    return Ok(());
                }
                if let Some(r) = designation {
                    if r != *arm {
                        return Ok(());
                    }
                }
            }
            (SlotRef::Module { idx, .. }, Target::Bimod(t)) => {
                if t.name != hc_phi.shape.modules[*idx].name {
                    return Ok(());
                }
                if let Some(r) = designation {
                    if r != *idx {
                        return Ok(());
                    }
                }
            }
            _ => return Ok(()),
        }
    }
    // iterate over support of each argument, requiring out == slot entry
    let mut choices: Vec<Vec<(usize, &Gen, Scalar)>> = Vec::new();
    for (j, &pos) in positions.iter().enumerate() {
        let (hc_psi, psi, _) = args[j];
        let want = g_phi.inputs[pos];
        let (want_from, want_to) = match &slots[pos] {
            SlotRef::ArmHom { from, to, .. } => (*from, *to),
            SlotRef::Module { b, a, .. } => (*b, *a),
        };
        let mut opts = Vec::new();
        for (p_psi, c_psi) in &psi.coords {
            let g_psi = hc_psi.gen_at(psi.degree, *p_psi);
            if g_psi.out != want {
                continue;
            }
            if g_psi.profile.global_start() != want_from
                || g_psi.profile.global_end() != want_to
            {
                continue;
            }
            opts.push((*p_psi, g_psi, c_psi.clone()));
        }
        if opts.is_empty() {
            return Ok(());
        }
        choices.push(opts);
    }
    let mut stack = vec![0usize; choices.len()];
    loop {
        // assemble the result generator
        let picked: Vec<&(usize, &Gen, Scalar)> = stack
            .iter()
            .enumerate()
            .map(|(j, &s)| &choices[j][s])
            .collect();
        if let Some((gen, sign_parity)) = splice_gen(
            hc_phi,
            g_phi,
            slots,
            positions,
            &picked.iter().map(|t| t.1).collect::<Vec<_>>(),
            args,
        ) {
            if let Some((deg, pos_out)) = hc_out.position(&gen) {
                debug_assert_eq!(deg, out.degree);
                let mut coeff = c_phi.clone();
                for t in &picked {
                    coeff = &coeff * &t.2;
                }
                coeff = &coeff * &crate::linalg::sign(field, sign_parity);
                let add = Cochain {
                    degree: out.degree,
                    coords: vec![(pos_out, coeff)],
                    guarantee: out.guarantee,
                };
                *out = out.add(&add)?;
            }
        }
        let mut i = 0;
        loop {
            if i == choices.len() {
                return Ok(());
            }
            stack[i] += 1;
            if stack[i] < choices[i].len() {
                break;
            }
            stack[i] = 0;
            i += 1;
        }
    }
}

/// Build the spliced generator for a brace insertion and its Koszul parity.
fn splice_gen(
    hc_phi: &HochComplex,
    g_phi: &Gen,
    slots: &[SlotRef],
    positions: &[usize],
    psis: &[&Gen],
    args: &[(&HochComplex, &Cochain, Option<usize>)],
) -> Option<(Gen, i64)> {
    let shape = &hc_phi.shape;
    // Koszul sign: sum over j of |s psi_j| * (sdeg of everything before
    // psi_j's block in the result); the prefix is phi's slots before the
    // position, with earlier filled slots replaced by their psi blocks.
    let mut parity = 0i64;
    for (j, &pos) in positions.iter().enumerate() {
        let (hc_psi, psi, _) = args[j];
        let psi_sdeg = psi.degree - 1;
        let mut prefix = 0i64;
        for s in 0..pos {
            if let Some(jj) = positions.iter().position(|&p| p == s) {
                // an earlier psi block occupies this slot
                let (hc2, _, _) = args[jj];
                let g2 = psis[jj];
                let slots2 = slots_of(&hc2.shape, &g2.profile);
                prefix += slots2
                    .iter()
                    .zip(&g2.inputs)
                    .map(|(sr, &(d, _))| super::realize::sdeg(&hc2.shape, sr, d))
                    .sum::<i64>();
            } else {
                prefix += super::realize::sdeg(shape, &slots[s], g_phi.inputs[s].0);
            }
        }
        let _ = hc_psi;
        parity += psi_sdeg * prefix;
    }
    // splice profile and inputs
    let mut paths = g_phi.profile.paths.clone();
    let mut new_inputs: Vec<Vec<(i64, usize)>> = g_phi
        .inputs
        .iter()
        .map(|&x| vec![x])
        .collect();
    // positions must be processed; arm path splices tracked per arm with
    // an offset bookkeeping. We rebuild paths via edits keyed by slot.
    // For arm slots: slot s of arm r (1-based within arm, formula order)
    // corresponds to the arrow path[l-s] -> path[l-s+1].
    // We perform splices from the last position to the first so earlier
    // indices stay valid.
    let mut arm_edits: Vec<(usize, usize, Vec<usize>)> = Vec::new(); // (arm, gap_lo_index, inserted objects)
    let mut module_edits: Vec<(usize, &Gen, usize)> = Vec::new(); // (module idx, psi gen, arg index)
    for (j, &pos) in positions.iter().enumerate() {
        let g_psi = psis[j];
        match slots[pos] {
            SlotRef::ArmHom { arm, .. } => {
                // the slot's arrow spans (q, q+1) in path order
                let arm_start = arm_slot_start(shape, &g_phi.profile, arm);
                let s = pos - arm_start + 1;
                let l = g_phi.profile.paths[arm].len() - 1;
                let q = l - s;
                // psi is a C(cat) gen: single path from -> to
                arm_edits.push((arm, q, g_psi.profile.paths[0].clone()));
                new_inputs[pos] = g_psi.inputs.clone();
            }
            SlotRef::Module { idx, .. } => {
                module_edits.push((idx, g_psi, j));
                new_inputs[pos] = g_psi.inputs.clone();
            }
        }
    }
    // apply arm edits (replace the gap between q and q+1 by the psi path)
    arm_edits.sort_by(|a, b| (a.0, std::cmp::Reverse(a.1)).cmp(&(b.0, std::cmp::Reverse(b.1))));
    for (arm, q, psi_path) in arm_edits {
        let path = &mut paths[arm];
        // path[q] = psi_path.first, path[q+1] = psi_path.last
        let mut new_path = path[..=q].to_vec();
        new_path.extend_from_slice(&psi_path[1..]);
        new_path.extend_from_slice(&path[q + 2..]);
        *path = new_path;
    }
    // apply module edits: module idx sits between arm idx and arm idx+1.
    // psi may itself have several arms (its target is then a tensor of
    // modules); its outer arms merge into the neighbours and its inner
    // arms are spliced in as new arms. Process in decreasing idx so the
    // insertions do not disturb earlier positions.
    module_edits.sort_by_key(|(idx, _, _)| std::cmp::Reverse(*idx));
    for (idx, g_psi, _) in module_edits {
        let psi_paths = &g_psi.profile.paths;
        let last = psi_paths.len() - 1;
        // merged arm idx: psi arm-0 path then old arm-idx path
        let mut merged_prev = psi_paths[0].clone();
        merged_prev.extend_from_slice(&paths[idx][1..]);
        paths[idx] = merged_prev;
        // merged arm idx+1: old arm-(idx+1) path then psi last-arm path
        let mut merged_next = paths[idx + 1].clone();
        merged_next.extend_from_slice(&psi_paths[last][1..]);
        paths[idx + 1] = merged_next;
        // splice psi's inner arms between them
        for (k, inner) in psi_paths[1..last].iter().enumerate() {
            paths.insert(idx + 1 + k, inner.clone());
        }
    }
    let gen = Gen {
        profile: Profile { paths },
        inputs: new_inputs.into_iter().flatten().collect(),
        out: g_phi.out,
    };
    Some((gen, parity))
}

fn arm_slot_start(shape: &Shape, p: &Profile, arm: usize) -> usize {
    let mut idx = 0;
    for a in 0..arm {
        idx += p.paths[a].len() - 1;
        if a < shape.n_modules() {
            idx += 1;
        }
    }
    idx
}

/// Sanity helper: the weight distribution of a complex per degree.
pub fn dims_by_weight(hc: &HochComplex) -> BTreeMap<(i64, usize), usize> {
    let m = hc.shape.n_modules();
    let mut out = BTreeMap::new();
    for (&deg, gens) in &hc.gens {
        for g in gens {
            *out.entry((deg, g.weight(m))).or_insert(0) += 1;
        }
    }
    out
}

/// The arity filtration is stable under the differential: no entry of d
/// maps a generator to one of smaller weight.
pub fn check_filtration_stable(hc: &HochComplex) -> Result<()> {
    let m = hc.shape.n_modules();
    for deg in hc.complex.space.support() {
        let block = hc
            .complex
            .d
            .block(&hc.complex.space, &hc.complex.space, deg);
        for ((r, c), _) in block.entries() {
            let w_in = hc.gen_at(deg, *c).weight(m);
            let w_out = hc.gen_at(deg + 1, *r).weight(m);
            if w_out < w_in {
                return Err(Error::axiom(
                    "arity-filtration",
                    format!("d lowers weight at degree {deg}: {w_in} -> {w_out}"),
                ));
            }
        }
    }
    Ok(())
}

/// Split the differential into its weight-preserving (internal) and
/// weight-raising (external) parts and check the graded pieces of d^2 = 0.
pub fn check_delta_parts(hc: &HochComplex) -> Result<()> {
    use crate::graded::GradedMap;
    let m = hc.shape.n_modules();
    let field = hc.field();
    let mut din = GradedMap::zero(field, 1);
    let mut dex = GradedMap::zero(field, 1);
    for deg in hc.complex.space.support() {
        let block = hc
            .complex
            .d
            .block(&hc.complex.space, &hc.complex.space, deg);
        let mut min = crate::linalg::Matrix::zero(field, block.rows, block.cols);
        let mut mex = crate::linalg::Matrix::zero(field, block.rows, block.cols);
        for ((r, c), v) in block.entries() {
            let w_in = hc.gen_at(deg, *c).weight(m);
            let w_out = hc.gen_at(deg + 1, *r).weight(m);
            if w_out == w_in {
                min.set(*r, *c, v.clone());
            } else {
                mex.set(*r, *c, v.clone());
            }
        }
        din.set_block(deg, min);
        dex.set_block(deg, mex);
    }
    let sp = &hc.complex.space;
    for deg in sp.support() {
        let din1 = din.block(sp, sp, deg);
        let din2 = din.block(sp, sp, deg + 1);
        let dex1 = dex.block(sp, sp, deg);
        let dex2 = dex.block(sp, sp, deg + 1);
        if !din2.mul(&din1)?.is_zero() {
            return Err(Error::axiom("din-squared", format!("degree {deg}")));
        }
        if !dex2.mul(&dex1)?.is_zero() {
            return Err(Error::axiom("dex-squared", format!("degree {deg}")));
        }
        let anti = din2.mul(&dex1)?.add(&dex2.mul(&din1)?)?;
        if !anti.is_zero() {
            return Err(Error::axiom("din-dex-anticommute", format!("degree {deg}")));
        }
    }
    Ok(())
}
