//! The workspace file format and the command surface: named categories,
//! functors, bimodules and morphisms built from a JSON description, plus
//! the subcommands that run computations and verification tasks over
//! them. Reports are deterministic for a fixed seed; exit codes are
//! 0 = pass, 1 = check failure, 2 = input error.

use crate::dgcat::{
    identity_bimodule, restricted_bimodule, BimoduleMap, CatRef, DgBimodule, DgFunctor, Elt,
};
use crate::graded::{cohomology, Complex, GradedMap, GradedVectorSpace};
use crate::hochschild::{realize, Shape};
use crate::linalg::{Field, Matrix, Scalar};
use crate::verify::{lemma_ids, run_all, run_lemma, LemmaResult};
use crate::zoo;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// The serialized workspace: a field, named objects, and optional tasks.
/// Matrices are triplet lists; scalars are strings ("2", "-1/3").
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WorkspaceFile {
    pub schema: String,
    pub field: FieldSpec,
    #[serde(default)]
    pub categories: BTreeMap<String, CategorySpec>,
    #[serde(default)]
    pub functors: BTreeMap<String, FunctorSpec>,
    #[serde(default)]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, MorphismSpec>,
    #[serde(default)]
    pub cofibrant: Vec<String>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

impl FieldSpec {
    pub fn to_field(&self) -> Field {
        match self {
            FieldSpec::Q => Field::Q,
            FieldSpec::Fp(p) => Field::Fp(*p),
        }
    }
}

/// A category is either a named builtin or an explicit presentation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CategorySpec {
    Builtin { builtin: String },
    Explicit(ExplicitCategory),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExplicitCategory {
    pub objects: Vec<String>,
    /// "a->b" keyed hom presentations
    pub homs: BTreeMap<String, ComplexSpec>,
    /// "c|b|a" keyed composition tables: entries (g_deg, g_idx, f_deg,
    /// f_idx, out_idx, coeff) with out in hom degree g_deg + f_deg
    pub comp: BTreeMap<String, Vec<(i64, usize, i64, usize, usize, String)>>,
    /// unit coordinates per object in hom degree 0
    pub units: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComplexSpec {
    /// basis labels per degree
    pub basis: BTreeMap<String, Vec<String>>,
    /// differential triplets (degree, row, col, coeff)
    #[serde(default)]
    pub d: Vec<(i64, usize, usize, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FunctorSpec {
    pub source: String,
    pub target: String,
    pub kind: FunctorKind,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum FunctorKind {
    Identity,
    /// object map + per-pair blocks (a, b, degree, row, col, coeff)
    Explicit {
        object_map: Vec<usize>,
        blocks: Vec<(usize, usize, i64, usize, usize, String)>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum BimoduleSpec {
    /// the identity bimodule of a category
    Identity { cat: String },
    /// the restricted bimodule of a functor
    Restricted { functor: String },
    /// a bimodule over (point, point) given by a complex of summands
    PointComplex { summands: Vec<(i64, bool)> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum MorphismSpec {
    Identity { bimodule: String },
    Scale { bimodule: String, by: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum TaskSpec {
    Verify { lemma: String },
    Hh { cat: String, max_degree: i64 },
}

/// The built workspace: resolved objects ready for computation.
pub struct Workspace {
    pub field: Field,
    pub file: WorkspaceFile,
    pub categories: BTreeMap<String, CatRef>,
    pub functors: BTreeMap<String, DgFunctor>,
    pub bimodules: BTreeMap<String, Arc<DgBimodule>>,
    pub morphisms: BTreeMap<String, (String, String, BimoduleMap)>,
}

fn parse_scalar(field: Field, s: &str, at: &str) -> Result<Scalar> {
    Scalar::parse(field, s).ok_or_else(|| Error::ParseError {
        at: at.to_string(),
        msg: format!("bad scalar {s:?}"),
    })
}

fn build_complex(field: Field, spec: &ComplexSpec, at: &str) -> Result<Complex> {
    let mut labels = BTreeMap::new();
    for (deg, names) in &spec.basis {
        let d: i64 = deg.parse().map_err(|_| Error::ParseError {
            at: at.to_string(),
            msg: format!("bad degree key {deg:?}"),
        })?;
        labels.insert(d, names.clone());
    }
    let space = GradedVectorSpace::from_labels(field, labels);
    let mut dmap = GradedMap::zero(field, 1);
    let mut blocks: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (deg, r, c, coeff) in &spec.d {
        let v = parse_scalar(field, coeff, at)?;
        let m = blocks
            .entry(*deg)
            .or_insert_with(|| Matrix::zero(field, space.dim(deg + 1), space.dim(*deg)));
        if *r >= m.rows || *c >= m.cols {
            return Err(Error::ParseError {
                at: at.to_string(),
                msg: format!("differential entry ({deg},{r},{c}) out of range"),
            });
        }
        m.add_to(*r, *c, &v);
    }
    for (deg, m) in blocks {
        dmap.set_block(deg, m);
    }
    Complex::new(space, dmap)
}

fn parse_pair(key: &str, at: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = key.split("->").collect();
    if parts.len() != 2 {
        return Err(Error::ParseError {
            at: at.to_string(),
            msg: format!("bad hom key {key:?} (want \"a->b\")"),
        });
    }
    Ok((
        parts[0].trim().parse().map_err(|_| Error::ParseError {
            at: at.to_string(),
            msg: format!("bad object index in {key:?}"),
        })?,
        parts[1].trim().parse().map_err(|_| Error::ParseError {
            at: at.to_string(),
            msg: format!("bad object index in {key:?}"),
        })?,
    ))
}

fn build_category(field: Field, name: &str, spec: &CategorySpec) -> Result<CatRef> {
    match spec {
        CategorySpec::Builtin { builtin } => match builtin.as_str() {
            "point" => Ok(zoo::point(field)),
            "kxk" => Ok(zoo::k_times_k(field)),
            "t2" => Ok(zoo::t2(field)),
            "dual" => Ok(zoo::dual_numbers(field)),
            "cubic" => Ok(zoo::truncated_cubic(field)),
            other => Err(Error::ParseError {
                at: format!("categories.{name}"),
                msg: format!("unknown builtin {other:?}"),
            }),
        },
        CategorySpec::Explicit(ex) => {
            let at = format!("categories.{name}");
            let n = ex.objects.len();
            let mut homs: Vec<Vec<Complex>> = vec![vec![Complex::zero(field); n]; n];
            for (key, cs) in &ex.homs {
                let (a, b) = parse_pair(key, &at)?;
                if a >= n || b >= n {
                    return Err(Error::ParseError {
                        at,
                        msg: format!("hom key {key:?} out of range"),
                    });
                }
                homs[a][b] = build_complex(field, cs, &at)?;
            }
            let mut comp = BTreeMap::new();
            for (key, entries) in &ex.comp {
                let parts: Vec<&str> = key.split('|').collect();
                if parts.len() != 3 {
                    return Err(Error::ParseError {
                        at,
                        msg: format!("bad comp key {key:?} (want \"a|b|c\")"),
                    });
                }
                let a: usize = parts[0].parse().unwrap_or(usize::MAX);
                let b: usize = parts[1].parse().unwrap_or(usize::MAX);
                let c: usize = parts[2].parse().unwrap_or(usize::MAX);
                if a >= n || b >= n || c >= n {
                    return Err(Error::ParseError {
                        at,
                        msg: format!("comp key {key:?} out of range"),
                    });
                }
                let left = homs[b][c].clone();
                let right = homs[a][b].clone();
                let target = homs[a][c].clone();
                let mut table: BTreeMap<(i64, usize, i64, usize), Vec<(usize, Scalar)>> =
                    BTreeMap::new();
                for (dg, ig, df, ifx, oi, coeff) in entries {
                    let v = parse_scalar(field, coeff, &at)?;
                    table.entry((*dg, *ig, *df, *ifx)).or_default().push((*oi, v));
                }
                let tspace = target.space.clone();
                let p = crate::dgcat::Pairing::from_basis_fn(
                    &left,
                    &right,
                    &target,
                    move |dg, ig, df, ifx| {
                        let mut out = vec![tspace.field.zero(); tspace.dim(dg + df)];
                        if let Some(list) = table.get(&(dg, ig, df, ifx)) {
                            for (oi, v) in list {
                                out[*oi] = &out[*oi] + v;
                            }
                        }
                        out
                    },
                );
                comp.insert((a, b, c), p);
            }
            let mut units = Vec::new();
            for (i, obj) in ex.objects.iter().enumerate() {
                let coords_s = ex.units.get(obj).ok_or_else(|| Error::ParseError {
                    at: format!("categories.{name}.units"),
                    msg: format!("missing unit for object {obj:?}"),
                })?;
                let mut coords = Vec::new();
                for c in coords_s {
                    coords.push(parse_scalar(field, c, &at)?);
                }
                if coords.len() != homs[i][i].space.dim(0) {
                    return Err(Error::ParseError {
                        at,
                        msg: format!("unit for {obj:?} has the wrong length"),
                    });
                }
                units.push(Elt { degree: 0, coords });
            }
            let cat = crate::dgcat::DgCategory::new(
                name,
                field,
                ex.objects.clone(),
                homs,
                comp,
                units,
            );
            cat.validate()?;
            Ok(Arc::new(cat))
        }
    }
}

/// Parse and fully validate a workspace file.
pub fn parse_workspace(text: &str) -> Result<Workspace> {
    let file: WorkspaceFile = serde_json::from_str(text).map_err(|e| Error::ParseError {
        at: format!("line {}", e.line()),
        msg: e.to_string(),
    })?;
    if file.schema != "hochcat-workspace/1" {
        return Err(Error::ParseError {
            at: "schema".into(),
            msg: format!("unsupported schema {:?}", file.schema),
        });
    }
    build_workspace(file)
}

pub fn build_workspace(file: WorkspaceFile) -> Result<Workspace> {
    let field = file.field.to_field();
    let mut categories = BTreeMap::new();
    for (name, spec) in &file.categories {
        let cat = build_category(field, name, spec)?;
        categories.insert(name.clone(), cat);
    }
    let mut functors = BTreeMap::new();
    for (name, spec) in &file.functors {
        let src = categories.get(&spec.source).ok_or_else(|| Error::ParseError {
            at: format!("functors.{name}"),
            msg: format!("unknown source category {:?}", spec.source),
        })?;
        let tgt = categories.get(&spec.target).ok_or_else(|| Error::ParseError {
            at: format!("functors.{name}"),
            msg: format!("unknown target category {:?}", spec.target),
        })?;
        let f = match &spec.kind {
            FunctorKind::Identity => {
                if spec.source != spec.target {
                    return Err(Error::ParseError {
                        at: format!("functors.{name}"),
                        msg: "identity functor needs source = target".into(),
                    });
                }
                DgFunctor::identity(src)
            }
            FunctorKind::Explicit { object_map, blocks } => {
                let mut maps: BTreeMap<(usize, usize), GradedMap> = BTreeMap::new();
                for a in 0..src.n_objects() {
                    for b in 0..src.n_objects() {
                        maps.insert((a, b), GradedMap::zero(field, 0));
                    }
                }
                let mut mats: BTreeMap<(usize, usize, i64), Matrix> = BTreeMap::new();
                for (a, b, deg, r, c, coeff) in blocks {
                    let (fa, fb) = (object_map[*a], object_map[*b]);
                    let m = mats.entry((*a, *b, *deg)).or_insert_with(|| {
                        Matrix::zero(
                            field,
                            tgt.hom(fa, fb).space.dim(*deg),
                            src.hom(*a, *b).space.dim(*deg),
                        )
                    });
                    m.add_to(*r, *c, &parse_scalar(field, coeff, name)?);
                }
                for ((a, b, deg), m) in mats {
                    let g = maps.get_mut(&(a, b)).unwrap();
                    g.set_block(deg, m);
                }
                DgFunctor {
                    name: name.clone(),
                    source: src.clone(),
                    target: tgt.clone(),
                    object_map: object_map.clone(),
                    maps,
                }
            }
        };
        f.validate()?;
        functors.insert(name.clone(), f);
    }
    let mut bimodules = BTreeMap::new();
    for (name, spec) in &file.bimodules {
        let x = match spec {
            BimoduleSpec::Identity { cat } => {
                let c = categories.get(cat).ok_or_else(|| Error::ParseError {
                    at: format!("bimodules.{name}"),
                    msg: format!("unknown category {cat:?}"),
                })?;
                identity_bimodule(c)
            }
            BimoduleSpec::Restricted { functor } => {
                let f = functors.get(functor).ok_or_else(|| Error::ParseError {
                    at: format!("bimodules.{name}"),
                    msg: format!("unknown functor {functor:?}"),
                })?;
                restricted_bimodule(f)
            }
            BimoduleSpec::PointComplex { summands } => {
                let pt = zoo::point(field);
                let c = zoo::build_from_summands(field, summands);
                crate::verify::point_bimodule(&pt, &c, name)
            }
        };
        x.validate()?;
        bimodules.insert(name.clone(), Arc::new(x));
    }
    let mut morphisms = BTreeMap::new();
    for (name, spec) in &file.morphisms {
        let (src_name, m) = match spec {
            MorphismSpec::Identity { bimodule } => {
                let x = bimodules.get(bimodule).ok_or_else(|| Error::ParseError {
                    at: format!("morphisms.{name}"),
                    msg: format!("unknown bimodule {bimodule:?}"),
                })?;
                (bimodule.clone(), BimoduleMap::identity(x))
            }
            MorphismSpec::Scale { bimodule, by } => {
                let x = bimodules.get(bimodule).ok_or_else(|| Error::ParseError {
                    at: format!("morphisms.{name}"),
                    msg: format!("unknown bimodule {bimodule:?}"),
                })?;
                let s = parse_scalar(field, by, name)?;
                let maps = x
                    .spaces()
                    .map(|(&k, c)| (k, GradedMap::identity(&c.space).scale(&s)))
                    .collect();
                (
                    bimodule.clone(),
                    BimoduleMap {
                        name: name.clone(),
                        maps,
                    },
                )
            }
        };
        let x = &bimodules[&src_name];
        m.validate(x, x)?;
        morphisms.insert(name.clone(), (src_name.clone(), src_name, m));
    }
    for t in &file.tasks {
        if let TaskSpec::Verify { lemma } = t {
            if !lemma_ids().contains(&lemma.as_str()) && lemma != "all" {
                return Err(Error::UnknownLemma(lemma.clone()));
            }
        }
    }
    Ok(Workspace {
        field,
        file,
        categories,
        functors,
        bimodules,
        morphisms,
    })
}

/// The default workspace: the bundled corpus.
pub fn default_workspace() -> Workspace {
    let mut file = WorkspaceFile {
        schema: "hochcat-workspace/1".into(),
        field: FieldSpec::Q,
        categories: BTreeMap::new(),
        functors: BTreeMap::new(),
        bimodules: BTreeMap::new(),
        morphisms: BTreeMap::new(),
        cofibrant: vec!["k".into(), "I_T2".into()],
        tasks: Vec::new(),
    };
    for (name, builtin) in [
        ("k", "point"),
        ("kxk", "kxk"),
        ("T2", "t2"),
        ("dual", "dual"),
    ] {
        file.categories.insert(
            name.into(),
            CategorySpec::Builtin {
                builtin: builtin.into(),
            },
        );
    }
    file.functors.insert(
        "id_T2".into(),
        FunctorSpec {
            source: "T2".into(),
            target: "T2".into(),
            kind: FunctorKind::Identity,
        },
    );
    file.bimodules.insert(
        "I_T2".into(),
        BimoduleSpec::Identity { cat: "T2".into() },
    );
    file.bimodules.insert(
        "k".into(),
        BimoduleSpec::PointComplex {
            summands: vec![(0, false)],
        },
    );
    file.bimodules.insert(
        "disk".into(),
        BimoduleSpec::PointComplex {
            summands: vec![(0, true)],
        },
    );
    file.morphisms.insert(
        "id_k".into(),
        MorphismSpec::Identity {
            bimodule: "k".into(),
        },
    );
    build_workspace(file).expect("default workspace builds")
}

/// A report: ordered task results, serialized deterministically.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub seed: u64,
    pub pass: bool,
    pub tasks: Vec<ReportTask>,
}

#[derive(Debug, Serialize)]
pub struct ReportTask {
    pub name: String,
    pub pass: bool,
    pub details: Vec<(String, String)>,
}

impl Report {
    pub fn new(seed: u64) -> Report {
        Report {
            schema: "hochcat-report/1".into(),
            seed,
            pass: true,
            tasks: Vec::new(),
        }
    }

    pub fn push_lemma(&mut self, r: LemmaResult) {
        self.pass &= r.pass;
        self.tasks.push(ReportTask {
            name: format!("verify {}", r.id),
            pass: r.pass,
            details: r.details,
        });
    }

    pub fn push(&mut self, name: &str, pass: bool, details: Vec<(String, String)>) {
        self.pass &= pass;
        self.tasks.push(ReportTask {
            name: name.to_string(),
            pass,
            details,
        });
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(self).expect("report serializes") + "\n"
        } else {
            let mut out = String::new();
            for t in &self.tasks {
                out.push_str(&format!(
                    "[{}] {}\n",
                    if t.pass { "pass" } else { "FAIL" },
                    t.name
                ));
                for (k, v) in &t.details {
                    out.push_str(&format!("    {k}: {v}\n"));
                }
            }
            out.push_str(&format!(
                "overall: {}\n",
                if self.pass { "pass" } else { "FAIL" }
            ));
            out
        }
    }
}

/// Run the `hh` command: Hochschild cohomology dimensions of a category.
pub fn run_hh(ws: &Workspace, cat: &str, max_degree: i64, truncation: usize) -> Result<ReportTask> {
    let c = ws.categories.get(cat).ok_or_else(|| Error::ParseError {
        at: "hh".into(),
        msg: format!("unknown category {cat:?}"),
    })?;
    let n = truncation.max((max_degree + 2) as usize);
    let hc = realize(&Shape::cat(c), n)?;
    hc.check_window(0, max_degree)?;
    let h = cohomology(&hc.complex, 0, max_degree)?;
    let dims: Vec<usize> = (0..=max_degree).map(|d| h[&d].0).collect();
    Ok(ReportTask {
        name: format!("hh {cat} --max-degree {max_degree}"),
        pass: true,
        details: vec![
            ("truncation".into(), n.to_string()),
            ("dims".into(), format!("{dims:?}")),
        ],
    })
}

/// Run the `gerstenhaber` command.
pub fn run_gerstenhaber(ws: &Workspace, cat: &str, seed: u64) -> Result<ReportTask> {
    let c = ws.categories.get(cat).ok_or_else(|| Error::ParseError {
        at: "gerstenhaber".into(),
        msg: format!("unknown category {cat:?}"),
    })?;
    let hc = realize(&Shape::cat(c), 5)?;
    let s = crate::binf::BraceBInf { hc: &hc };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    use rand::SeedableRng;
    let g = crate::binf::cohomology_gerstenhaber(&s, 0, 3, &mut rng)?;
    let dims: Vec<usize> = (0..=3).map(|d| g.reps.get(&d).map_or(0, |r| r.len())).collect();
    let mut details = vec![
        ("HH dims 0..3".into(), format!("{dims:?}")),
        ("violations".into(), g.violations.len().to_string()),
    ];
    let mut cup_table = Vec::new();
    for ((da, ia, db, ib), cls) in &g.cup {
        let entries: Vec<String> = cls.iter().map(|c| c.to_string()).collect();
        cup_table.push(format!("({da},{ia})({db},{ib})=[{}]", entries.join(",")));
    }
    details.push(("cup".into(), cup_table.join(" ")));
    let mut br_table = Vec::new();
    for ((da, ia, db, ib), cls) in &g.bracket {
        if cls.iter().any(|c| !c.is_zero()) {
            let entries: Vec<String> = cls.iter().map(|c| c.to_string()).collect();
            br_table.push(format!("[({da},{ia}),({db},{ib})]=[{}]", entries.join(",")));
        }
    }
    details.push(("bracket (nonzero)".into(), br_table.join(" ")));
    Ok(ReportTask {
        name: format!("gerstenhaber {cat}"),
        pass: g.violations.is_empty(),
        details,
    })
}

/// Run the `binf-axioms` command.
pub fn run_binf_axioms(
    ws: &Workspace,
    cat: &str,
    stasheff: usize,
    indices: usize,
) -> Result<ReportTask> {
    let c = ws.categories.get(cat).ok_or_else(|| Error::ParseError {
        at: "binf-axioms".into(),
        msg: format!("unknown category {cat:?}"),
    })?;
    let hc = realize(&Shape::cat(c), 4)?;
    let s = crate::binf::BraceBInf { hc: &hc };
    let va = crate::binf::check_a_infinity(&s, stasheff);
    let vb = crate::binf::check_b_infinity(&s, indices);
    let pass = va.is_empty() && vb.is_empty();
    Ok(ReportTask {
        name: format!("binf-axioms {cat}"),
        pass,
        details: vec![
            ("stasheff bound".into(), stasheff.to_string()),
            ("index bound".into(), indices.to_string()),
            ("violations".into(), format!("{}", va.len() + vb.len())),
        ],
    })
}

/// Run the `span` command: a named randomized span check.
pub fn run_span(expr: &str, seed: u64) -> Result<ReportTask> {
    let lemma = match expr {
        "compose" | "pullback-fib" => "pullback-fib",
        "pentagon" | "unity" | "interchange" | "suite" => "bicat-suite",
        "h-colax" => "h-colax",
        other => {
            return Err(Error::ParseError {
                at: "span".into(),
                msg: format!("unknown span expression {other:?} (compose|suite|h-colax)"),
            })
        }
    };
    let r = run_lemma(lemma, seed)?;
    Ok(ReportTask {
        name: format!("span {expr}"),
        pass: r.pass,
        details: r.details,
    })
}

/// Run the `lax-c` command.
pub fn run_lax_c(ws: &Workspace, mode: &str, args: &[String], seed: u64) -> Result<ReportTask> {
    let _ = seed;
    let n = 4;
    match mode {
        "on-object" => {
            let cat = args.first().ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: "on-object needs a category".into(),
            })?;
            let c = ws.categories.get(cat).ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: format!("unknown category {cat:?}"),
            })?;
            let hc = realize(&Shape::cat(c), n)?;
            let dims: Vec<(i64, usize)> = hc
                .complex
                .space
                .support()
                .map(|d| (d, hc.dim(d)))
                .collect();
            Ok(ReportTask {
                name: format!("lax-c on-object {cat}"),
                pass: true,
                details: vec![("C dims".into(), format!("{dims:?}"))],
            })
        }
        "on-one-cell" => {
            let name = args.first().ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: "on-one-cell needs a bimodule".into(),
            })?;
            let x = ws.bimodules.get(name).ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: format!("unknown bimodule {name:?}"),
            })?;
            let one = crate::spans::lax_on_one_cell(x, n)?;
            let (fl, fr) = one.span.validate(false)?;
            Ok(ReportTask {
                name: format!("lax-c on-one-cell {name}"),
                pass: fl.is_surjective && fr.is_surjective,
                details: vec![
                    ("apex dim".into(), one.span.apex.total_dim().to_string()),
                    ("legs surjective".into(), "checked".into()),
                ],
            })
        }
        "on-two-cell" => {
            let name = args.first().ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: "on-two-cell needs a bimodule morphism".into(),
            })?;
            let (src, _tgt, m) = ws.morphisms.get(name).ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: format!("unknown morphism {name:?}"),
            })?;
            let x = &ws.bimodules[src];
            let two = crate::spans::lax_on_two_cell(x, x, m, 3)?;
            Ok(ReportTask {
                name: format!("lax-c on-two-cell {name}"),
                pass: two.up_leg_ok,
                details: vec![
                    ("apex dim".into(), two.cell.apex.total_dim().to_string()),
                    ("window".into(), format!("{:?}", two.window)),
                ],
            })
        }
        "constraint-c2" => {
            let (a, b) = (
                args.first().ok_or_else(|| Error::ParseError {
                    at: "lax-c".into(),
                    msg: "constraint-c2 needs two bimodules".into(),
                })?,
                args.get(1).ok_or_else(|| Error::ParseError {
                    at: "lax-c".into(),
                    msg: "constraint-c2 needs two bimodules".into(),
                })?,
            );
            let x = ws.bimodules.get(a).ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: format!("unknown bimodule {a:?}"),
            })?;
            let y = ws.bimodules.get(b).ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: format!("unknown bimodule {b:?}"),
            })?;
            let c2 = crate::spans::lax_constraint_2(x, y, n)?;
            let (lo, hi) = c2.window;
            let ok = c2.bar_is_pullback && crate::spans::validate_in_window(&c2.cell, lo, hi)?;
            Ok(ReportTask {
                name: format!("lax-c constraint-c2 {a} {b}"),
                pass: ok,
                details: vec![
                    ("window".into(), format!("[{lo},{hi}]")),
                    ("bar = pullback dims".into(), c2.bar_is_pullback.to_string()),
                ],
            })
        }
        "constraint-c0" => {
            let cat = args.first().ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: "constraint-c0 needs a category".into(),
            })?;
            let c = ws.categories.get(cat).ok_or_else(|| Error::ParseError {
                at: "lax-c".into(),
                msg: format!("unknown category {cat:?}"),
            })?;
            let (cell, _) = crate::spans::lax_constraint_0(c, n)?;
            Ok(ReportTask {
                name: format!("lax-c constraint-c0 {cat}"),
                pass: cell.validate().is_ok(),
                details: vec![("apex dim".into(), cell.apex.total_dim().to_string())],
            })
        }
        other => Err(Error::ParseError {
            at: "lax-c".into(),
            msg: format!("unknown mode {other:?}"),
        }),
    }
}

/// Run verify tasks (a lemma id or "all").
pub fn run_verify(which: &str, seed: u64, report: &mut Report) -> Result<()> {
    if which == "all" {
        for r in run_all(seed)? {
            report.push_lemma(r);
        }
    } else {
        report.push_lemma(run_lemma(which, seed)?);
    }
    Ok(())
}

/// Run the tasks listed in a workspace file.
pub fn run_tasks(ws: &Workspace, seed: u64, report: &mut Report) -> Result<()> {
    for t in &ws.file.tasks {
        match t {
            TaskSpec::Verify { lemma } => run_verify(lemma, seed, report)?,
            TaskSpec::Hh { cat, max_degree } => {
                let task = run_hh(ws, cat, *max_degree, 5)?;
                report.pass &= task.pass;
                report.tasks.push(task);
            }
        }
    }
    Ok(())
}

/// `validate`: every named object validates on load; report the counts.
pub fn run_validate(ws: &Workspace) -> ReportTask {
    ReportTask {
        name: "validate".into(),
        pass: true,
        details: vec![
            ("categories".into(), ws.categories.len().to_string()),
            ("functors".into(), ws.functors.len().to_string()),
            ("bimodules".into(), ws.bimodules.len().to_string()),
            ("morphisms".into(), ws.morphisms.len().to_string()),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_workspace_builds_and_roundtrips() {
        let ws = default_workspace();
        let text = serde_json::to_string_pretty(&ws.file).unwrap();
        let ws2 = parse_workspace(&text).unwrap();
        assert_eq!(ws.file, ws2.file);
        let text2 = serde_json::to_string_pretty(&ws2.file).unwrap();
        assert_eq!(text, text2);
    }

    #[test]
    fn duplicate_and_bad_names_rejected() {
        let mut f = default_workspace().file;
        f.tasks.push(TaskSpec::Verify {
            lemma: "no-such-lemma".into(),
        });
        assert!(build_workspace(f).is_err());
        // JSON with a bad schema
        let err = parse_workspace("{\"schema\": \"nope\", \"field\": \"Q\"}");
        assert!(err.is_err());
    }

    #[test]
    fn hh_of_t2() {
        let ws = default_workspace();
        let t = run_hh(&ws, "T2", 2, 5).unwrap();
        assert!(t.details.iter().any(|(k, v)| k == "dims" && v == "[1, 0, 0]"));
    }
}
