//! Structure files: a JSON object mapping names to declarations.
//!
//! A declaration is either an object (an inline definition) or a string naming
//! another declaration of the same file. Names are resolved on demand, in name
//! order, with cycle detection.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use gamma_core::filtration::{check_filtration, filtration_from_grading, Filtration};
use gamma_core::grading::{
    graded_ideal_check, graded_semigroup_ring, monomial_grading, opposite_grading, product_grading,
    GradedGammaRing, InternalGrading,
};
use gamma_core::group::split_index;
use gamma_core::hom::{check_hom, ModuleHom};
use gamma_core::module::{
    check_bimodule, check_filtered_module, check_module_axioms, Bimodule, FilteredModule, GammaModule,
    GradedGammaModule, ModuleSide,
};
use gamma_core::ring::{
    check_automorphism, check_axioms, direct_product, matrix_gamma_ring, opposite, polynomial_ring,
    quotient_by_ideal, Ideal, Side,
};
use gamma_core::{
    Budget, Elem, Error, FiniteAbelianGroup, FiniteSemigroup, GammaRing, SemigroupMap, Subgroup, Tuple, Verdict,
    Witness,
};
use serde_json::{Map, Value};
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unresolved reference \"{name}\" in {context}")]
    Unresolved { name: String, context: String },

    #[error("cyclic definition: {}", .cycle.join(" -> "))]
    Cycle { cycle: Vec<String> },

    #[error("{context}: {message}")]
    Malformed { context: String, message: String },

    #[error("{context}: expected {expected}, found {found}")]
    Type { context: String, expected: &'static str, found: &'static str },

    #[error("{context}: {source}")]
    Invalid { context: String, source: Error },
}

impl LoadError {
    /// The witness of a validator failure, if that is what this is.
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            LoadError::Invalid { source: Error::Rejected { witness, .. }, .. } => Some(witness),
            _ => None,
        }
    }
}

type Result<T> = std::result::Result<T, LoadError>;

fn malformed(context: &str, message: impl Into<String>) -> LoadError {
    LoadError::Malformed { context: context.to_string(), message: message.into() }
}

fn invalid(context: &str) -> impl FnOnce(Error) -> LoadError + '_ {
    move |source| LoadError::Invalid { context: context.to_string(), source }
}

fn rejected(context: &str, what: &str, verdict: Verdict) -> Result<()> {
    match verdict {
        Verdict::Pass => Ok(()),
        Verdict::Fail(witness) => Err(LoadError::Invalid {
            context: context.to_string(),
            source: Error::Rejected { what: what.to_string(), witness },
        }),
    }
}

/// A Γ-ring, with the grading its construction carries if any.
#[derive(Clone, Debug)]
pub struct RingEntry {
    pub ring: GammaRing,
    pub grading: Option<GradedGammaRing>,
}

/// A declared grading; `graded` is `None` when the candidate is not a grading
/// (possible only under lazy loading).
#[derive(Clone, Debug)]
pub struct GradedEntry {
    pub candidate: InternalGrading,
    pub graded: Option<GradedGammaRing>,
}

#[derive(Clone, Debug)]
pub struct GradedModuleEntry {
    pub ring: GradedGammaRing,
    pub module: GammaModule,
    pub components: Vec<Subgroup>,
    pub graded: Option<GradedGammaModule>,
}

#[derive(Clone, Debug)]
pub struct HomEntry {
    pub hom: ModuleHom,
    pub phi: Option<Vec<Elem>>,
    pub source: Option<GradedGammaModule>,
    pub target: Option<GradedGammaModule>,
}

#[derive(Clone, Debug)]
pub enum Structure {
    Group(Arc<FiniteAbelianGroup>),
    Semigroup(Arc<FiniteSemigroup>),
    SemigroupMap(SemigroupMap),
    Ring(RingEntry),
    Graded(GradedEntry),
    Subgroup(Subgroup),
    Ideal(Ideal),
    Filtration(Filtration),
    Module(GammaModule),
    GradedModule(GradedModuleEntry),
    FilteredModule(FilteredModule),
    Hom(HomEntry),
    Bimodule(Bimodule),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Group(_) => "group",
            Structure::Semigroup(_) => "semigroup",
            Structure::SemigroupMap(_) => "semigroup map",
            Structure::Ring(_) => "ring",
            Structure::Graded(_) => "graded ring",
            Structure::Subgroup(_) => "subgroup",
            Structure::Ideal(_) => "ideal",
            Structure::Filtration(_) => "filtration",
            Structure::Module(_) => "module",
            Structure::GradedModule(_) => "graded module",
            Structure::FilteredModule(_) => "filtered module",
            Structure::Hom(_) => "homomorphism",
            Structure::Bimodule(_) => "bimodule",
        }
    }

    pub fn as_ring(&self) -> Option<GammaRing> {
        match self {
            Structure::Ring(r) => Some(r.ring.clone()),
            Structure::Graded(g) => Some(g.candidate.ring.clone()),
            _ => None,
        }
    }

    pub fn as_graded(&self) -> Option<GradedGammaRing> {
        match self {
            Structure::Ring(r) => r.grading.clone(),
            Structure::Graded(g) => g.graded.clone(),
            _ => None,
        }
    }

    pub fn as_group(&self) -> Option<Arc<FiniteAbelianGroup>> {
        match self {
            Structure::Group(g) => Some(g.clone()),
            Structure::Ring(_) | Structure::Graded(_) => self.as_ring().map(|r| r.carrier().clone()),
            Structure::Module(_) | Structure::GradedModule(_) | Structure::FilteredModule(_) => {
                self.as_module().map(|m| m.carrier().clone())
            }
            _ => None,
        }
    }

    pub fn as_module(&self) -> Option<GammaModule> {
        match self {
            Structure::Module(m) => Some(m.clone()),
            Structure::GradedModule(g) => Some(g.module.clone()),
            Structure::FilteredModule(f) => Some(f.module().clone()),
            _ => None,
        }
    }

    pub fn as_graded_module(&self) -> Option<GradedGammaModule> {
        match self {
            Structure::GradedModule(g) => g.graded.clone(),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    pub lazy: bool,
    pub budget: Budget,
}

/// The resolved name table of a structure file.
#[derive(Clone, Debug, Default)]
pub struct StructureSet {
    decls: Map<String, Value>,
    entries: BTreeMap<String, Structure>,
    options: LoadOptions,
}

pub fn load(path: &Path, options: LoadOptions) -> Result<StructureSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    parse(&text, options)
}

pub fn parse(text: &str, options: LoadOptions) -> Result<StructureSet> {
    let mut set = StructureSet { decls: Map::new(), entries: BTreeMap::new(), options };
    if text.trim().is_empty() {
        return Ok(set);
    }
    let value: Value = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(decls) = value else {
        return Err(LoadError::Parse { line: 1, column: 1, message: "a structure file is a JSON object".into() });
    };
    set.decls = decls;
    let mut names: Vec<String> = set.decls.keys().cloned().collect();
    names.sort();
    for name in names {
        set.resolver().named(&name, &name)?;
    }
    Ok(set)
}

impl StructureSet {
    fn resolver(&mut self) -> Resolver<'_> {
        Resolver { decls: &self.decls, entries: &mut self.entries, stack: Vec::new(), options: self.options }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&Structure> {
        self.entries.get(name)
    }

    pub fn options(&self) -> LoadOptions {
        self.options
    }

    /// Resolves a command-line value: a declared name, or inline JSON.
    pub fn resolve_arg(&mut self, arg: &str) -> Result<Structure> {
        if let Some(s) = self.entries.get(arg) {
            return Ok(s.clone());
        }
        let value: Value = serde_json::from_str(arg).map_err(|_| LoadError::Unresolved {
            name: arg.to_string(),
            context: "command line".into(),
        })?;
        self.resolver().structure(&value, "command line")
    }

    /// Elements of a group given on the command line as a subgroup name or a
    /// JSON list of tuples.
    pub fn elements_arg(&mut self, group: &Arc<FiniteAbelianGroup>, arg: &str) -> Result<Vec<Elem>> {
        if let Some(Structure::Subgroup(s)) = self.entries.get(arg) {
            if s.parent() != group {
                return Err(malformed(arg, "subgroup of a different group"));
            }
            return Ok(s.elements().to_vec());
        }
        if let Some(Structure::Ideal(i)) = self.entries.get(arg) {
            return Ok(i.subgroup().elements().to_vec());
        }
        let value: Value = serde_json::from_str(arg).map_err(|_| LoadError::Unresolved {
            name: arg.to_string(),
            context: "command line".into(),
        })?;
        elements(group, &value, "command line")
    }

    pub fn typed<T>(
        &self,
        name: &str,
        expected: &'static str,
        pick: impl Fn(&Structure) -> Option<T>,
    ) -> Result<T> {
        let s = self
            .entries
            .get(name)
            .ok_or_else(|| LoadError::Unresolved { name: name.to_string(), context: "command line".into() })?;
        pick(s).ok_or(LoadError::Type { context: name.to_string(), expected, found: s.kind() })
    }
}

struct Resolver<'a> {
    decls: &'a Map<String, Value>,
    entries: &'a mut BTreeMap<String, Structure>,
    stack: Vec<String>,
    options: LoadOptions,
}

impl Resolver<'_> {
    fn named(&mut self, name: &str, context: &str) -> Result<Structure> {
        if let Some(s) = self.entries.get(name) {
            return Ok(s.clone());
        }
        if let Some(pos) = self.stack.iter().position(|n| n == name) {
            let mut cycle = self.stack[pos..].to_vec();
            cycle.push(name.to_string());
            return Err(LoadError::Cycle { cycle });
        }
        let decl = self
            .decls
            .get(name)
            .ok_or_else(|| LoadError::Unresolved { name: name.to_string(), context: context.to_string() })?;
        self.stack.push(name.to_string());
        let built = self.build(decl, name);
        self.stack.pop();
        let built = built?;
        self.entries.insert(name.to_string(), built.clone());
        Ok(built)
    }

    fn structure(&mut self, value: &Value, context: &str) -> Result<Structure> {
        match value {
            Value::String(name) => self.named(name, context),
            Value::Object(_) => self.build(value, context),
            _ => Err(malformed(context, "expected a name or an inline declaration")),
        }
    }

    fn typed<T>(
        &mut self,
        value: &Value,
        context: &str,
        expected: &'static str,
        pick: impl Fn(&Structure) -> Option<T>,
    ) -> Result<T> {
        let s = self.structure(value, context)?;
        pick(&s).ok_or(LoadError::Type { context: context.to_string(), expected, found: s.kind() })
    }

    fn group(&mut self, value: &Value, context: &str) -> Result<Arc<FiniteAbelianGroup>> {
        self.typed(value, context, "group", Structure::as_group)
    }

    fn semigroup(&mut self, value: &Value, context: &str) -> Result<Arc<FiniteSemigroup>> {
        self.typed(value, context, "semigroup", |s| match s {
            Structure::Semigroup(g) => Some(g.clone()),
            _ => None,
        })
    }

    fn ring_entry(&mut self, value: &Value, context: &str) -> Result<RingEntry> {
        self.typed(value, context, "ring", |s| {
            s.as_ring().map(|ring| RingEntry { ring, grading: s.as_graded() })
        })
    }

    fn ring(&mut self, value: &Value, context: &str) -> Result<GammaRing> {
        self.typed(value, context, "ring", Structure::as_ring)
    }

    fn graded(&mut self, value: &Value, context: &str) -> Result<GradedGammaRing> {
        self.typed(value, context, "graded ring", Structure::as_graded)
    }

    fn module(&mut self, value: &Value, context: &str) -> Result<Structure> {
        let s = self.structure(value, context)?;
        match s.as_module() {
            Some(_) => Ok(s),
            None => Err(LoadError::Type { context: context.to_string(), expected: "module", found: s.kind() }),
        }
    }

    fn build(&mut self, value: &Value, context: &str) -> Result<Structure> {
        let Value::Object(obj) = value else {
            return Err(malformed(context, "expected a declaration object"));
        };
        let kind = match obj.get("kind") {
            Some(Value::String(k)) => k.as_str(),
            Some(_) => return Err(malformed(context, "\"kind\" must be a string")),
            None if obj.contains_key("moduli") || obj.contains_key("add") => "group",
            None if obj.contains_key("labels") => "semigroup",
            None => return Err(malformed(context, "missing \"kind\"")),
        };
        let d = Decl { obj, context };
        let lazy = self.options.lazy;
        let budget = self.options.budget;
        let built = match kind {
            "group" => Structure::Group(Arc::new(group_decl(&d)?)),
            "semigroup" => Structure::Semigroup(Arc::new(semigroup_decl(&d)?)),
            "cyclic" => {
                let n = d.uint("n")?;
                if n == 0 {
                    return Err(malformed(context, "cyclic group of order 0"));
                }
                Structure::Semigroup(Arc::new(FiniteSemigroup::cyclic(n)))
            }
            "segment" => Structure::Semigroup(Arc::new(FiniteSemigroup::segment(d.uint("D")?))),
            "semigroup_map" => {
                let from = self.semigroup(d.field("from")?, &d.sub("from"))?;
                let to = self.semigroup(d.field("to")?, &d.sub("to"))?;
                let images = d
                    .object("images")?
                    .iter()
                    .map(|(k, v)| match v {
                        Value::String(s) => Ok((k.clone(), s.clone())),
                        _ => Err(malformed(&d.sub("images"), "images are labels")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Structure::SemigroupMap(SemigroupMap::from_labels(from, to, &images).map_err(invalid(context))?)
            }
            "subgroup" => {
                let parent = self.group(d.field("of")?, &d.sub("of"))?;
                let elems = elements(&parent, d.field("elements")?, &d.sub("elements"))?;
                Structure::Subgroup(Subgroup::from_elements(&parent, elems).map_err(invalid(context))?)
            }
            "ideal" => {
                let ring = self.ring(d.field("ring")?, &d.sub("ring"))?;
                let side = side(d.obj.get("side"), &d.sub("side"))?;
                Structure::Ideal(ideal(&ring, d.field("elements")?, side, context)?)
            }
            "zn" | "table" | "matrix" | "semigroup_ring" | "product" | "opposite" | "polynomial" | "quotient" => {
                let entry = self.ring_decl(kind, &d)?;
                if !lazy {
                    let verdict = check_axioms(&entry.ring, &budget).map_err(invalid(context))?;
                    rejected(context, "ring", verdict)?;
                }
                Structure::Ring(entry)
            }
            "graded" | "internal_grading" | "trivial_grading" => {
                let candidate = self.grading_decl(kind, &d)?;
                if !lazy {
                    let verdict = check_axioms(&candidate.ring, &budget).map_err(invalid(context))?;
                    rejected(context, "ring", verdict)?;
                }
                let graded = match GradedGammaRing::from_internal(candidate.clone()) {
                    Ok(g) => Some(g),
                    Err(_) if lazy => None,
                    Err(e) => return Err(invalid(context)(e)),
                };
                Structure::Graded(GradedEntry { candidate, graded })
            }
            "filtration" => {
                let f = if let Some(g) = d.obj.get("graded") {
                    let graded = self.graded(g, &d.sub("graded"))?;
                    filtration_from_grading(&graded).map_err(invalid(context))?
                } else {
                    let ring = self.ring(d.field("ring")?, &d.sub("ring"))?;
                    let chain = chain(ring.carrier(), d.field("chain")?, &d.sub("chain"))?;
                    Filtration::new(&ring, chain).map_err(invalid(context))?
                };
                if !lazy {
                    rejected(context, "filtration", check_filtration(&f))?;
                }
                Structure::Filtration(f)
            }
            "module" | "regular" | "zero_module" => {
                let m = self.module_decl(kind, &d)?;
                if !lazy {
                    rejected(context, "module", check_module_axioms(&m))?;
                }
                Structure::Module(m)
            }
            "graded_module" => Structure::GradedModule(self.graded_module_decl(&d)?),
            "filtered_module" => {
                let fm = self.filtered_module_decl(&d)?;
                if !lazy {
                    rejected(context, "filtered module", check_filtered_module(&fm))?;
                }
                Structure::FilteredModule(fm)
            }
            "hom" => {
                let entry = self.hom_decl(&d)?;
                if !lazy {
                    let verdict = check_hom(&entry.hom, entry.phi.as_deref()).map_err(invalid(context))?;
                    rejected(context, "homomorphism", verdict)?;
                }
                Structure::Hom(entry)
            }
            "bimodule" => {
                let left = self.module(d.field("left")?, &d.sub("left"))?.as_module().expect("module");
                let right = self.module(d.field("right")?, &d.sub("right"))?.as_module().expect("module");
                let b = Bimodule { left, right };
                if !lazy {
                    let verdict = check_bimodule(&b, None).map_err(invalid(context))?;
                    rejected(context, "bimodule", verdict)?;
                }
                Structure::Bimodule(b)
            }
            other => return Err(malformed(context, format!("unknown kind \"{other}\""))),
        };
        Ok(built)
    }

    fn ring_decl(&mut self, kind: &str, d: &Decl<'_>) -> Result<RingEntry> {
        let context = d.context;
        let budget = Budget::unlimited();
        let plain = |ring| RingEntry { ring, grading: None };
        Ok(match kind {
            "zn" => plain(GammaRing::modular(d.uint("n")? as u32).map_err(invalid(context))?),
            "table" => {
                let carrier = self.group(d.field("carrier")?, &d.sub("carrier"))?;
                let gamma = self.group(d.field("gamma")?, &d.sub("gamma"))?;
                let ctx = d.sub("products");
                let mut entries = Vec::new();
                for row in d.list("products")? {
                    let row = row_of(row, 4, &ctx)?;
                    let x = tuple(row[0], &ctx)?;
                    let a = tuple(row[1], &ctx)?;
                    let y = tuple(row[2], &ctx)?;
                    let v = tuple(row[3], &ctx)?;
                    entries.push((x, a, y, v));
                }
                plain(GammaRing::from_entries(carrier, gamma, &entries).map_err(invalid(context))?)
            }
            "matrix" => {
                let k = d.uint("k")? as u32;
                plain(matrix_gamma_ring(k, d.uint("m")?, d.uint("n")?, &budget).map_err(invalid(context))?)
            }
            "semigroup_ring" => {
                let base = self.ring(d.field("base")?, &d.sub("base"))?;
                let g = self.semigroup(d.field("G")?, &d.sub("G"))?;
                let graded = graded_semigroup_ring(&base, &g, &budget).map_err(invalid(context))?;
                RingEntry { ring: graded.ring().clone(), grading: Some(graded) }
            }
            "product" => {
                let ctx = d.sub("factors");
                let mut factors = Vec::new();
                for f in d.list("factors")? {
                    factors.push(self.ring_entry(f, &ctx)?);
                }
                let rings: Vec<GammaRing> = factors.iter().map(|f| f.ring.clone()).collect();
                let ring = direct_product(&rings).map_err(invalid(context))?;
                let gradings: Option<Vec<GradedGammaRing>> = factors.iter().map(|f| f.grading.clone()).collect();
                let grading = gradings.and_then(|gs| product_grading(&gs).ok());
                RingEntry { ring, grading }
            }
            "opposite" => {
                let of = self.ring_entry(d.field("of")?, &d.sub("of"))?;
                let grading = of.grading.as_ref().and_then(|g| opposite_grading(g).ok());
                RingEntry { ring: opposite(&of.ring), grading }
            }
            "polynomial" => {
                let base = self.ring(d.field("base")?, &d.sub("base"))?;
                let poly = polynomial_ring(&base, d.uint("D")?, &budget).map_err(invalid(context))?;
                let graded = monomial_grading(&poly).map_err(invalid(context))?;
                RingEntry { ring: poly.ring().clone(), grading: Some(graded) }
            }
            "quotient" => {
                let of = self.ring_entry(d.field("of")?, &d.sub("of"))?;
                let i = ideal(&of.ring, d.field("ideal")?, Side::TwoSided, context)?;
                let ring = quotient_by_ideal(&of.ring, &i).map_err(invalid(context))?;
                let grading = of
                    .grading
                    .as_ref()
                    .and_then(|g| graded_ideal_check(g, &i).ok())
                    .and_then(|report| report.quotient);
                RingEntry { ring, grading }
            }
            _ => unreachable!("ring kinds are listed by the caller"),
        })
    }

    fn grading_decl(&mut self, kind: &str, d: &Decl<'_>) -> Result<InternalGrading> {
        let context = d.context;
        let semigroup = self.semigroup(d.field("G")?, &d.sub("G"))?;
        match kind {
            "internal_grading" => {
                let ring = self.ring(d.field("ring")?, &d.sub("ring"))?;
                let assignment = d.object("assignment")?;
                let ctx = d.sub("assignment");
                for label in assignment.keys() {
                    semigroup.index_of(label).map_err(invalid(&ctx))?;
                }
                let parts = semigroup
                    .labels()
                    .iter()
                    .map(|label| match assignment.get(label) {
                        None => Ok(Subgroup::trivial(ring.carrier())),
                        Some(v) => {
                            let elems = elements(ring.carrier(), v, &ctx)?;
                            Subgroup::from_elements(ring.carrier(), elems).map_err(invalid(&ctx))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(InternalGrading { ring, semigroup, assignment: parts })
            }
            "trivial_grading" => {
                let ring = self.ring(d.field("ring")?, &d.sub("ring"))?;
                let graded = GradedGammaRing::trivial(&ring, semigroup).map_err(invalid(context))?;
                Ok(graded.internal())
            }
            "graded" => {
                let gamma = self.group(d.field("gamma")?, &d.sub("gamma"))?;
                let declared = d.object("components")?;
                let ctx = d.sub("components");
                for label in declared.keys() {
                    semigroup.index_of(label).map_err(invalid(&ctx))?;
                }
                let mut components = Vec::with_capacity(semigroup.order());
                for label in semigroup.labels() {
                    components.push(match declared.get(label) {
                        None => Arc::new(FiniteAbelianGroup::trivial()),
                        Some(v) => self.group(v, &format!("{ctx}.{label}"))?,
                    });
                }
                let ctx = d.sub("products");
                let mut pieces: HashMap<(usize, Elem, Elem, usize, Elem), Elem> = HashMap::new();
                let rows = match d.obj.get("products") {
                    None => &[][..],
                    Some(Value::Array(rows)) => &rows[..],
                    Some(_) => return Err(malformed(&ctx, "expected a list")),
                };
                for row in rows {
                    let row = row_of(row, 6, &ctx)?;
                    let g = semigroup.index_of(label_of(row[0], &ctx)?).map_err(invalid(&ctx))?;
                    let h = semigroup.index_of(label_of(row[3], &ctx)?).map_err(invalid(&ctx))?;
                    let x = elem(&components[g], row[1], &ctx)?;
                    let a = elem(&gamma, row[2], &ctx)?;
                    let y = elem(&components[h], row[4], &ctx)?;
                    let z = elem(&components[semigroup.mul(g, h)], row[5], &ctx)?;
                    pieces.insert((g, x, a, h, y), z);
                }
                flatten_external(semigroup, gamma, &components, &pieces).map_err(invalid(context))
            }
            _ => unreachable!("grading kinds are listed by the caller"),
        }
    }

    fn module_decl(&mut self, kind: &str, d: &Decl<'_>) -> Result<GammaModule> {
        let context = d.context;
        let ring = self.ring(d.field("ring")?, &d.sub("ring"))?;
        let side = module_side(d.obj.get("side"), &d.sub("side"))?;
        match kind {
            "regular" => GammaModule::regular(&ring, side).map_err(invalid(context)),
            "zero_module" => {
                let carrier = self.group(d.field("carrier")?, &d.sub("carrier"))?;
                GammaModule::zero(&ring, carrier).map_err(invalid(context))
            }
            _ => {
                let carrier = self.group(d.field("carrier")?, &d.sub("carrier"))?;
                let ctx = d.sub("action");
                let mut entries = Vec::new();
                for row in d.list("action")? {
                    let row = row_of(row, 4, &ctx)?;
                    entries.push((
                        elem(ring.carrier(), row[0], &ctx)?,
                        elem(ring.gamma(), row[1], &ctx)?,
                        elem(&carrier, row[2], &ctx)?,
                        elem(&carrier, row[3], &ctx)?,
                    ));
                }
                GammaModule::from_entries(&ring, carrier, side, &entries).map_err(invalid(context))
            }
        }
    }

    fn graded_module_decl(&mut self, d: &Decl<'_>) -> Result<GradedModuleEntry> {
        let context = d.context;
        let ring = self.graded(d.field("ring")?, &d.sub("ring"))?;
        let module = match d.obj.get("module") {
            Some(v) => self.module(v, &d.sub("module"))?.as_module().expect("module"),
            None => GammaModule::regular(ring.ring(), ModuleSide::Left).map_err(invalid(context))?,
        };
        let components = match d.obj.get("components") {
            Some(Value::Object(map)) => {
                let ctx = d.sub("components");
                for label in map.keys() {
                    ring.semigroup().index_of(label).map_err(invalid(&ctx))?;
                }
                ring.semigroup()
                    .labels()
                    .iter()
                    .map(|label| match map.get(label) {
                        None => Ok(Subgroup::trivial(module.carrier())),
                        Some(v) => {
                            let elems = elements(module.carrier(), v, &ctx)?;
                            Subgroup::from_elements(module.carrier(), elems).map_err(invalid(&ctx))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            Some(_) => return Err(malformed(&d.sub("components"), "expected an object")),
            None if d.obj.contains_key("module") => {
                let e = ring
                    .semigroup()
                    .identity()
                    .ok_or_else(|| malformed(context, "the default grading needs a monoid"))?;
                ring.semigroup()
                    .elements()
                    .map(|g| {
                        if g == e {
                            Subgroup::whole(module.carrier())
                        } else {
                            Subgroup::trivial(module.carrier())
                        }
                    })
                    .collect()
            }
            None => ring.components().to_vec(),
        };
        let graded = match GradedGammaModule::new(&ring, module.clone(), components.clone()) {
            Ok(g) => Some(g),
            Err(_) if self.options.lazy => None,
            Err(e) => return Err(invalid(context)(e)),
        };
        Ok(GradedModuleEntry { ring, module, components, graded })
    }

    fn filtered_module_decl(&mut self, d: &Decl<'_>) -> Result<FilteredModule> {
        let context = d.context;
        if let Some(v) = d.obj.get("graded") {
            let ctx = d.sub("graded");
            let graded = self.typed(v, &ctx, "graded module", Structure::as_graded_module)?;
            return FilteredModule::from_graded(&graded).map_err(invalid(context));
        }
        let filtration = self.typed(d.field("filtration")?, &d.sub("filtration"), "filtration", |s| match s {
            Structure::Filtration(f) => Some(f.clone()),
            _ => None,
        })?;
        let module = match d.obj.get("module") {
            Some(v) => self.module(v, &d.sub("module"))?.as_module().expect("module"),
            None => GammaModule::regular(filtration.ring(), ModuleSide::Left).map_err(invalid(context))?,
        };
        let chain = match d.obj.get("chain") {
            Some(v) => chain(module.carrier(), v, &d.sub("chain"))?,
            None if module.carrier() == filtration.ring().carrier() => filtration.chain().to_vec(),
            None => return Err(malformed(context, "\"chain\" is required for a module other than the ring")),
        };
        FilteredModule::new(&filtration, &module, chain).map_err(invalid(context))
    }

    fn hom_decl(&mut self, d: &Decl<'_>) -> Result<HomEntry> {
        let context = d.context;
        let source = self.module(d.field("source")?, &d.sub("source"))?;
        let target = self.module(d.field("target")?, &d.sub("target"))?;
        let (src, tgt) = (source.as_module().expect("module"), target.as_module().expect("module"));
        let values = if let Some(v) = d.obj.get("values") {
            let ctx = d.sub("values");
            let values = elements(tgt.carrier(), v, &ctx)?;
            if values.len() != src.order() {
                return Err(malformed(&ctx, "one value per source element, in element order"));
            }
            values
        } else {
            let ctx = d.sub("map");
            let mut values = vec![None; src.order()];
            for row in d.list("map")? {
                let row = row_of(row, 2, &ctx)?;
                values[elem(src.carrier(), row[0], &ctx)?] = Some(elem(tgt.carrier(), row[1], &ctx)?);
            }
            values.into_iter().map(|v| v.unwrap_or(0)).collect()
        };
        let hom = ModuleHom::new(&src, &tgt, values).map_err(invalid(context))?;
        let phi = match d.obj.get("phi") {
            None => None,
            Some(v) => {
                let ctx = d.sub("phi");
                let gamma = src.ring().gamma();
                let mut table = vec![None; gamma.order()];
                let Value::Array(rows) = v else {
                    return Err(malformed(&ctx, "expected a list of [gamma, image] pairs"));
                };
                for row in rows {
                    let row = row_of(row, 2, &ctx)?;
                    table[elem(gamma, row[0], &ctx)?] = Some(elem(gamma, row[1], &ctx)?);
                }
                let table: Vec<Elem> = table
                    .into_iter()
                    .enumerate()
                    .map(|(a, v)| v.ok_or_else(|| malformed(&ctx, format!("no image for gamma element {a}"))))
                    .collect::<Result<_>>()?;
                check_automorphism(gamma, &table).map_err(invalid(&ctx))?;
                Some(table)
            }
        };
        Ok(HomEntry { hom, phi, source: source.as_graded_module(), target: target.as_graded_module() })
    }
}

/// Flat form of an external grading: the carrier is the product of the
/// components in label order and `R_g` is the `g`-th coordinate subgroup.
fn flatten_external(
    semigroup: Arc<FiniteSemigroup>,
    gamma: Arc<FiniteAbelianGroup>,
    components: &[Arc<FiniteAbelianGroup>],
    pieces: &HashMap<(usize, Elem, Elem, usize, Elem), Elem>,
) -> gamma_core::Result<InternalGrading> {
    semigroup.require_abelian()?;
    let refs: Vec<&FiniteAbelianGroup> = components.iter().map(|c| &**c).collect();
    let carrier = Arc::new(FiniteAbelianGroup::direct_product(&refs)?);
    let radices: Vec<usize> = components.iter().map(|c| c.order()).collect();
    let k = components.len();
    let ring = GammaRing::from_fn(carrier.clone(), gamma, |x, al, y| {
        let xs = split_index(x, &radices);
        let ys = split_index(y, &radices);
        let mut out = vec![0; k];
        for g in (0..k).filter(|&g| xs[g] != 0) {
            for h in (0..k).filter(|&h| ys[h] != 0) {
                let gh = semigroup.mul(g, h);
                let z = pieces.get(&(g, xs[g], al, h, ys[h])).copied().unwrap_or(0);
                out[gh] = components[gh].add(out[gh], z);
            }
        }
        gamma_core::group::join_index(&out, &radices)
    })?;
    let assignment = (0..k)
        .map(|g| {
            let members = carrier.elements().filter(|&x| {
                split_index(x, &radices).iter().enumerate().all(|(i, &d)| i == g || d == 0)
            });
            Subgroup::from_elements(&carrier, members)
        })
        .collect::<gamma_core::Result<Vec<_>>>()?;
    Ok(InternalGrading { ring, semigroup, assignment })
}

struct Decl<'a> {
    obj: &'a Map<String, Value>,
    context: &'a str,
}

impl Decl<'_> {
    fn sub(&self, key: &str) -> String {
        format!("{}.{key}", self.context)
    }

    fn field(&self, key: &str) -> Result<&Value> {
        self.obj.get(key).ok_or_else(|| malformed(self.context, format!("missing \"{key}\"")))
    }

    fn uint(&self, key: &str) -> Result<usize> {
        self.field(key)?
            .as_u64()
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| malformed(&self.sub(key), "expected a non-negative integer"))
    }

    fn list(&self, key: &str) -> Result<&Vec<Value>> {
        match self.field(key)? {
            Value::Array(a) => Ok(a),
            _ => Err(malformed(&self.sub(key), "expected a list")),
        }
    }

    fn object(&self, key: &str) -> Result<&Map<String, Value>> {
        match self.field(key)? {
            Value::Object(m) => Ok(m),
            _ => Err(malformed(&self.sub(key), "expected an object")),
        }
    }
}

fn group_decl(d: &Decl<'_>) -> Result<FiniteAbelianGroup> {
    if let Some(m) = d.obj.get("moduli") {
        let moduli = ints(m, &d.sub("moduli"))?;
        return FiniteAbelianGroup::cyclic(&moduli).map_err(invalid(d.context));
    }
    let labels = d.list("elements")?.iter().map(|v| tuple(v, &d.sub("elements"))).collect::<Result<Vec<_>>>()?;
    let ctx = d.sub("add");
    let add = d
        .list("add")?
        .iter()
        .map(|row| match row {
            Value::Array(r) => r
                .iter()
                .map(|v| v.as_u64().map(|n| n as usize).ok_or_else(|| malformed(&ctx, "expected indices")))
                .collect(),
            _ => Err(malformed(&ctx, "expected rows of indices")),
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    FiniteAbelianGroup::from_table(labels, add).map_err(invalid(d.context))
}

fn semigroup_decl(d: &Decl<'_>) -> Result<FiniteSemigroup> {
    let ctx = d.sub("labels");
    let labels = d.list("labels")?.iter().map(|v| label_of(v, &ctx).map(str::to_string)).collect::<Result<_>>()?;
    let ctx = d.sub("table");
    let table = d
        .list("table")?
        .iter()
        .map(|row| match row {
            Value::Array(r) => r.iter().map(|v| label_of(v, &ctx).map(str::to_string)).collect(),
            _ => Err(malformed(&ctx, "expected rows of labels")),
        })
        .collect::<Result<Vec<Vec<String>>>>()?;
    FiniteSemigroup::from_label_table(labels, &table).map_err(invalid(d.context))
}

fn ideal(ring: &GammaRing, value: &Value, side: Side, context: &str) -> Result<Ideal> {
    let elems = elements(ring.carrier(), value, context)?;
    let sub = Subgroup::from_elements(ring.carrier(), elems).map_err(invalid(context))?;
    Ideal::new(ring, sub, side).map_err(invalid(context))
}

fn side(value: Option<&Value>, context: &str) -> Result<Side> {
    match value.and_then(Value::as_str) {
        None if value.is_none() => Ok(Side::TwoSided),
        Some("left") => Ok(Side::Left),
        Some("right") => Ok(Side::Right),
        Some("two_sided") => Ok(Side::TwoSided),
        _ => Err(malformed(context, "expected \"left\", \"right\" or \"two_sided\"")),
    }
}

fn module_side(value: Option<&Value>, context: &str) -> Result<ModuleSide> {
    match value.and_then(Value::as_str) {
        None if value.is_none() => Ok(ModuleSide::Left),
        Some("left") => Ok(ModuleSide::Left),
        Some("right") => Ok(ModuleSide::Right),
        _ => Err(malformed(context, "expected \"left\" or \"right\"")),
    }
}

fn chain(group: &Arc<FiniteAbelianGroup>, value: &Value, context: &str) -> Result<Vec<Subgroup>> {
    let Value::Array(terms) = value else {
        return Err(malformed(context, "expected a list of element lists"));
    };
    terms
        .iter()
        .map(|t| {
            let elems = elements(group, t, context)?;
            Subgroup::from_elements(group, elems).map_err(invalid(context))
        })
        .collect()
}

fn row_of<'v>(row: &'v Value, len: usize, context: &str) -> Result<Vec<&'v Value>> {
    match row {
        Value::Array(r) if r.len() == len => Ok(r.iter().collect()),
        _ => Err(malformed(context, format!("expected rows of {len} entries"))),
    }
}

fn label_of<'v>(value: &'v Value, context: &str) -> Result<&'v str> {
    value.as_str().ok_or_else(|| malformed(context, "expected a label string"))
}

fn ints(value: &Value, context: &str) -> Result<Vec<u32>> {
    let Value::Array(items) = value else {
        return Err(malformed(context, "expected a list of integers"));
    };
    items
        .iter()
        .map(|v| {
            v.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| malformed(context, "expected a list of integers"))
        })
        .collect()
}

/// An element tuple; a bare integer is a 1-tuple.
pub fn tuple(value: &Value, context: &str) -> Result<Tuple> {
    match value {
        Value::Number(_) => ints(&Value::Array(vec![value.clone()]), context),
        Value::Array(_) => ints(value, context),
        _ => Err(malformed(context, "expected an element tuple")),
    }
}

pub fn elem(group: &FiniteAbelianGroup, value: &Value, context: &str) -> Result<Elem> {
    group.index_of(&tuple(value, context)?).map_err(invalid(context))
}

pub fn elements(group: &FiniteAbelianGroup, value: &Value, context: &str) -> Result<Vec<Elem>> {
    let Value::Array(items) = value else {
        return Err(malformed(context, "expected a list of elements"));
    };
    items.iter().map(|v| elem(group, v, context)).collect()
}
