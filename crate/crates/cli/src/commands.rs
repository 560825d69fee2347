//! Verbs: argument definitions and dispatch onto the library checks.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gamma_core::filtration::{adic_chain, associated_graded, check_descending, check_filtration};
use gamma_core::grading::{
    check_internal_grading, coarsen_by_quotient, crossed_product_check, regrade_epimorphism, restrict_subsemigroup,
    strongly_graded_check, GradedGammaRing,
};
use gamma_core::hom::{check_hom, decompose_hom, degree_of_hom, endomorphism_graded_ring, enumerate_homs};
use gamma_core::module::{
    check_bimodule, check_filtered_module, check_finitely_generated, check_graded_module, check_module_axioms,
    check_module_zero_laws, check_submodule, gr_module, is_graded_submodule, maximal_graded_submodule,
    quotient_module, GammaModule, GradedGammaModule,
};
use gamma_core::ring::{check_axioms, find_unities, is_ideal, Ideal, Side};
use gamma_core::{Budget, Datum, Error, FiniteSemigroup, Subgroup, Verdict};
use serde_json::{json, Value};

use crate::emit;
use crate::loader::{LoadError, Structure, StructureSet};
use crate::report::Record;

#[derive(Debug, Parser)]
#[command(name = "gammalib", version, about = "Exhaustive verification of finite gamma rings, gradings and modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Structure file to load.
    #[arg(long, short = 'f', global = true)]
    pub file: Option<PathBuf>,

    /// Print the report as JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,

    /// Print the report as text (the default).
    #[arg(long, global = true)]
    pub text: bool,

    /// Write the computed structure (or, for pure checks, the report) here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Budget of primitive checks per exhaustive scan.
    #[arg(long = "max-enum", global = true, default_value_t = 1_000_000)]
    pub max_enum: u64,

    /// Load declarations without validating them.
    #[arg(long, global = true)]
    pub lazy: bool,

    /// Record wall-clock time per check.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Decide a property of declared structures.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Push a grading forward along a semigroup epimorphism.
    Regrade {
        target: String,
        #[arg(long)]
        phi: String,
    },
    /// Restrict a grading to a subsemigroup containing its support.
    Restrict {
        target: String,
        #[arg(long = "H")]
        h: String,
    },
    /// Coarsen a group grading by a subgroup.
    Coarsen {
        target: String,
        #[arg(long = "N")]
        n: String,
    },
    /// Associated graded ring of a filtration.
    Gr { target: String },
    /// I-adic chain of an ideal.
    Adic {
        target: String,
        #[arg(long)]
        ideal: String,
    },
    /// Associated graded module of a filtered module.
    GrModule { target: String },
    /// Quotient of a graded module by a submodule.
    QuotientModule {
        target: String,
        #[arg(long = "K")]
        k: String,
    },
    /// Largest graded submodule inside a submodule.
    #[command(name = "K-prime")]
    KPrime {
        target: String,
        #[arg(long = "K")]
        k: String,
    },
    /// Module homomorphisms.
    #[command(subcommand)]
    Hom(HomCommand),
    /// Graded endomorphism ring of a graded module.
    EndRing { target: String },
}

#[derive(Debug, Clone, Subcommand)]
pub enum CheckCommand {
    /// Gamma-ring axioms of each ring
    Axioms { targets: Vec<String> },
    /// Direct-sum and degree conditions of each grading
    Grading { targets: Vec<String> },
    /// Whether each grading is strong
    Strong { targets: Vec<String> },
    /// Whether each grading is a crossed product, once per unity
    Crossed { targets: Vec<String> },
    /// Chain and product conditions of each filtration
    Filtration { targets: Vec<String> },
    /// Module axioms and zero laws
    Module { targets: Vec<String> },
    /// Grading conditions of each graded module
    GradedModule { targets: Vec<String> },
    /// Filtration conditions of each filtered module
    FilteredModule { targets: Vec<String> },
    /// Left and right actions and their compatibility
    Bimodule { targets: Vec<String> },
    /// Whether a subgroup is a submodule
    Submodule {
        target: String,
        #[arg(long = "K")]
        k: String,
    },
    /// Whether a subgroup is an ideal on the given side
    Ideal {
        target: String,
        #[arg(long = "I")]
        i: String,
        #[arg(long, default_value = "two_sided", value_parser = ["left", "right", "two_sided"])]
        side: String,
    },
    /// Whether the given elements generate the module
    FinitelyGenerated {
        target: String,
        #[arg(long)]
        gens: String,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum HomCommand {
    /// Additivity and equivariance of each homomorphism
    Check { targets: Vec<String> },
    /// Whether a homomorphism has the given degree
    Degree {
        target: String,
        #[arg(long)]
        h: String,
    },
    /// Homogeneous components of a homomorphism
    Decompose { target: String },
    /// All homomorphisms between two modules
    Enumerate { source: String, target: String },
}

/// A structure produced by a verb, ready to be written as a one-entry file.
#[derive(Clone, Debug)]
pub struct Emitted {
    pub name: String,
    pub decl: Value,
}

#[derive(Clone, Debug, Default)]
pub struct Execution {
    pub records: Vec<Record>,
    pub emitted: Option<Emitted>,
}

struct Ctx<'a> {
    set: &'a mut StructureSet,
    budget: Budget,
    timing: bool,
    out: Execution,
}

type Step = Result<Record, Error>;

impl Ctx<'_> {
    fn record(&mut self, id: String, target: &str, step: impl FnOnce(&mut Self) -> Step) {
        let start = Instant::now();
        let mut record = step(self).unwrap_or_else(|e| Record::from_error(id.clone(), target, &e));
        record.id = id;
        record.target = target.to_string();
        if self.timing {
            record.timing_us = Some(start.elapsed().as_micros() as u64);
        }
        self.out.records.push(record);
    }

    fn emit(&mut self, name: String, decl: Value) {
        self.out.emitted = Some(Emitted { name, decl });
    }

    fn get(&self, name: &str) -> Result<Structure, LoadError> {
        self.set.typed(name, "structure", |s| Some(s.clone()))
    }
}

fn done(verdict: &Verdict) -> Step {
    Ok(Record::new("", "", verdict))
}

fn pick<T>(s: &Structure, what: &'static str, f: impl Fn(&Structure) -> Option<T>) -> Result<T, Error> {
    f(s).ok_or_else(|| Error::Precondition(format!("expected a {what}, found a {}", s.kind())))
}

fn graded_of(s: &Structure) -> Result<GradedGammaRing, Error> {
    match s {
        Structure::Graded(entry) if entry.graded.is_none() => {
            Err(Error::Precondition("the declared assignment is not a grading".into()))
        }
        _ => pick(s, "graded ring", Structure::as_graded),
    }
}

fn graded_module_of(s: &Structure) -> Result<GradedGammaModule, Error> {
    match s {
        Structure::GradedModule(entry) if entry.graded.is_none() => {
            Err(Error::Precondition("the declared components do not grade the module".into()))
        }
        _ => pick(s, "graded module", Structure::as_graded_module),
    }
}

fn module_of(s: &Structure) -> Result<GammaModule, Error> {
    pick(s, "module", Structure::as_module)
}

fn load_error(e: LoadError) -> Error {
    Error::Precondition(e.to_string())
}

fn labels(semigroup: &FiniteSemigroup, arg: &str) -> Result<Vec<usize>, Error> {
    let names: Vec<String> = if arg.trim_start().starts_with('[') {
        serde_json::from_str(arg).map_err(|e| Error::Precondition(format!("label list: {e}")))?
    } else {
        arg.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    };
    names.iter().map(|n| semigroup.index_of(n)).collect()
}

fn degree_labels(semigroup: &FiniteSemigroup, degrees: &[usize]) -> Value {
    json!(degrees.iter().map(|&g| semigroup.label(g)).collect::<Vec<_>>())
}

fn datum(d: Datum) -> Value {
    serde_json::to_value(d).expect("datum serializes")
}

/// Runs one verb against a loaded structure set. Unknown names are reported
/// as load errors; failures of individual checks become records.
pub fn execute(command: &Command, set: &mut StructureSet, budget: Budget, timing: bool) -> Result<Execution, LoadError> {
    let mut cx = Ctx { set, budget, timing, out: Execution::default() };
    match command {
        Command::Check(check) => run_check(&mut cx, check)?,
        Command::Regrade { target, phi } => {
            let s = cx.get(target)?;
            let map = match cx.set.resolve_arg(phi)? {
                Structure::SemigroupMap(m) => m,
                other => {
                    return Err(LoadError::Type { context: phi.clone(), expected: "semigroup map", found: other.kind() })
                }
            };
            cx.record(format!("regrade/{target}"), target, |cx| {
                let out = regrade_epimorphism(&graded_of(&s)?, &map)?;
                let verdict = check_internal_grading(&out.internal())?;
                cx.emit(format!("{target}_regraded"), emit::graded(&out));
                done(&verdict)
            });
        }
        Command::Restrict { target, h } => {
            let s = cx.get(target)?;
            cx.record(format!("restrict/{target}"), target, |cx| {
                let graded = graded_of(&s)?;
                let subset = labels(graded.semigroup(), h)?;
                let out = restrict_subsemigroup(&graded, &subset)?;
                let verdict = check_internal_grading(&out.internal())?;
                cx.emit(format!("{target}_restricted"), emit::graded(&out));
                done(&verdict)
            });
        }
        Command::Coarsen { target, n } => {
            let s = cx.get(target)?;
            cx.record(format!("coarsen/{target}"), target, |cx| {
                let graded = graded_of(&s)?;
                let subgroup = labels(graded.semigroup(), n)?;
                let out = coarsen_by_quotient(&graded, &subgroup)?;
                let verdict = check_internal_grading(&out.internal())?;
                cx.emit(format!("{target}_coarsened"), emit::graded(&out));
                done(&verdict)
            });
        }
        Command::Gr { target } => {
            let s = cx.get(target)?;
            cx.record(format!("gr/{target}"), target, |cx| {
                let f = pick(&s, "filtration", |s| match s {
                    Structure::Filtration(f) => Some(f.clone()),
                    _ => None,
                })?;
                let gr = associated_graded(&f, &cx.budget)?;
                let graded = gr.graded();
                let verdict = check_axioms(graded.ring(), &cx.budget)?;
                let verdict = match verdict {
                    Verdict::Pass => check_internal_grading(&graded.internal())?,
                    fail => fail,
                };
                let layers: Vec<usize> = (0..=gr.top()).map(|k| gr.layer_order(k)).collect();
                cx.emit(format!("{target}_gr"), emit::graded(graded));
                Ok(Record::new("", "", &verdict)
                    .with_details(json!({ "layer_orders": layers, "resamplings": gr.resamplings() as u64 })))
            });
        }
        Command::Adic { target, ideal } => {
            let s = cx.get(target)?;
            let ring = s.as_ring().ok_or(LoadError::Type { context: target.clone(), expected: "ring", found: s.kind() })?;
            let given = match cx.set.get(ideal) {
                Some(Structure::Ideal(i)) => Ok(i.clone()),
                _ => Err(cx.set.elements_arg(ring.carrier(), ideal)?),
            };
            cx.record(format!("adic/{target}"), target, |_| {
                let ideal = match given {
                    Ok(i) => i,
                    Err(elems) => {
                        let sub = Subgroup::from_elements(ring.carrier(), elems)?;
                        Ideal::new(&ring, sub, Side::TwoSided)?
                    }
                };
                let chain = adic_chain(&ring, &ideal)?;
                let verdict = check_descending(&ring, &chain.chain);
                let terms: Vec<Value> = chain.chain.iter().map(|t| json!(t.labels())).collect();
                Ok(Record::new("", "", &verdict)
                    .with_details(json!({ "chain": terms, "stabilization": chain.stabilization })))
            });
        }
        Command::GrModule { target } => {
            let s = cx.get(target)?;
            cx.record(format!("gr-module/{target}"), target, |cx| {
                let fm = pick(&s, "filtered module", |s| match s {
                    Structure::FilteredModule(f) => Some(f.clone()),
                    _ => None,
                })?;
                let gm = gr_module(&fm, &cx.budget)?;
                let graded = gm.module();
                let verdict = check_graded_module(gm.ring().graded(), graded.module(), graded.components())?;
                let layers: Vec<usize> = (0..=fm.top().max(gm.ring().top())).map(|k| gm.layer_order(k)).collect();
                cx.emit(format!("{target}_gr"), emit::graded_module(graded));
                Ok(Record::new("", "", &verdict).with_details(json!({ "layer_orders": layers })))
            });
        }
        Command::QuotientModule { target, k } => {
            let s = cx.get(target)?;
            let elems = module_of(&s).map(|m| cx.set.elements_arg(m.carrier(), k));
            cx.record(format!("quotient-module/{target}"), target, |cx| {
                let gm = graded_module_of(&s)?;
                let sub = Subgroup::from_elements(gm.module().carrier(), elems?.map_err(load_error)?)?;
                let report = quotient_module(&gm, &sub)?;
                let semigroup = gm.ring().semigroup();
                let orders: serde_json::Map<String, Value> = report
                    .expected_orders
                    .iter()
                    .enumerate()
                    .map(|(g, &n)| (semigroup.label(g).to_string(), json!(n)))
                    .collect();
                match &report.graded {
                    Some(q) => cx.emit(format!("{target}_quotient"), emit::graded_module(q)),
                    None => cx.emit(format!("{target}_quotient"), emit::module(&report.module)),
                }
                Ok(Record::new("", "", &report.direct)
                    .with_details(json!({ "order": report.module.order(), "component_orders": orders })))
            });
        }
        Command::KPrime { target, k } => {
            let s = cx.get(target)?;
            let elems = module_of(&s).map(|m| cx.set.elements_arg(m.carrier(), k));
            cx.record(format!("K-prime/{target}"), target, |cx| {
                let gm = graded_module_of(&s)?;
                let sub = Subgroup::from_elements(gm.module().carrier(), elems?.map_err(load_error)?)?;
                let kp = maximal_graded_submodule(&gm, &sub, &cx.budget)?;
                let verdict = is_graded_submodule(&gm, &kp).and_then(|| check_submodule(gm.module(), &kp));
                Ok(Record::new("", "", &verdict).with_details(json!({ "elements": kp.labels() })))
            });
        }
        Command::Hom(hom) => run_hom(&mut cx, hom)?,
        Command::EndRing { target } => {
            let s = cx.get(target)?;
            cx.record(format!("end-ring/{target}"), target, |cx| {
                let gm = graded_module_of(&s)?;
                let end = endomorphism_graded_ring(&gm, &cx.budget)?;
                let semigroup = gm.ring().semigroup();
                let sizes: serde_json::Map<String, Value> = end
                    .components
                    .iter()
                    .enumerate()
                    .map(|(g, c)| (semigroup.label(g).to_string(), json!(c.len())))
                    .collect();
                let maps: Vec<Value> = end.maps.iter().map(|f| datum(f.render())).collect();
                Ok(Record::new("", "", &Verdict::Pass)
                    .with_details(json!({ "order": end.len(), "component_orders": sizes, "maps": maps })))
            });
        }
    }
    Ok(cx.out)
}

fn run_check(cx: &mut Ctx<'_>, check: &CheckCommand) -> Result<(), LoadError> {
    match check {
        CheckCommand::Axioms { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                cx.record(format!("axioms/{t}"), &t, |cx| {
                    let ring = pick(&s, "ring", Structure::as_ring)?;
                    done(&check_axioms(&ring, &cx.budget)?)
                });
            }
        }
        CheckCommand::Grading { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                cx.record(format!("grading/{t}"), &t, |_| {
                    let candidate = match &s {
                        Structure::Graded(entry) => entry.candidate.clone(),
                        other => pick(other, "graded ring", Structure::as_graded)?.internal(),
                    };
                    done(&check_internal_grading(&candidate)?)
                });
            }
        }
        CheckCommand::Strong { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                cx.record(format!("strong/{t}"), &t, |_| done(&strongly_graded_check(&graded_of(&s)?)));
            }
        }
        CheckCommand::Crossed { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                let graded = graded_of(&s);
                let unities = graded.as_ref().map_err(Clone::clone).and_then(|g| find_unities(g.ring()));
                match (graded, unities) {
                    (Ok(graded), Ok(unities)) if !unities.is_empty() => {
                        let many = unities.len() > 1;
                        for (i, unity) in unities.into_iter().enumerate() {
                            let id = if many { format!("crossed/{t}/{i}") } else { format!("crossed/{t}") };
                            cx.record(id, &t, |_| {
                                let report = crossed_product_check(&graded, unity)?;
                                let g = graded.semigroup();
                                let details = json!({
                                    "unity": [datum(graded.ring().elem(unity.one)), datum(graded.ring().gam(unity.gamma0))],
                                    "support": degree_labels(g, &report.support),
                                    "unit_support": degree_labels(g, &report.unit_support),
                                    "strongly_graded": report.strongly_graded.is_pass(),
                                });
                                Ok(Record::new("", "", &report.crossed_product).with_details(details))
                            });
                        }
                    }
                    (Ok(_), Ok(_)) => {
                        cx.record(format!("crossed/{t}"), &t, |_| Err(Error::Precondition("the ring has no unity".into())))
                    }
                    (Err(e), _) | (_, Err(e)) => cx.record(format!("crossed/{t}"), &t, |_| Err(e)),
                }
            }
        }
        CheckCommand::Filtration { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                cx.record(format!("filtration/{t}"), &t, |_| {
                    let f = pick(&s, "filtration", |s| match s {
                        Structure::Filtration(f) => Some(f.clone()),
                        _ => None,
                    })?;
                    done(&check_filtration(&f))
                });
            }
        }
        CheckCommand::Module { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                cx.record(format!("module/{t}"), &t, |_| {
                    let m = module_of(&s)?;
                    done(&check_module_axioms(&m).and_then(|| check_module_zero_laws(&m)))
                });
            }
        }
        CheckCommand::GradedModule { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                cx.record(format!("graded-module/{t}"), &t, |_| match &s {
                    Structure::GradedModule(e) => done(&check_graded_module(&e.ring, &e.module, &e.components)?),
                    other => Err(Error::Precondition(format!("expected a graded module, found a {}", other.kind()))),
                });
            }
        }
        CheckCommand::FilteredModule { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                cx.record(format!("filtered-module/{t}"), &t, |_| {
                    let fm = pick(&s, "filtered module", |s| match s {
                        Structure::FilteredModule(f) => Some(f.clone()),
                        _ => None,
                    })?;
                    done(&check_filtered_module(&fm))
                });
            }
        }
        CheckCommand::Bimodule { targets } => {
            for t in targets.clone() {
                let s = cx.get(&t)?;
                cx.record(format!("bimodule/{t}"), &t, |_| {
                    let b = pick(&s, "bimodule", |s| match s {
                        Structure::Bimodule(b) => Some(b.clone()),
                        _ => None,
                    })?;
                    done(&check_bimodule(&b, None)?)
                });
            }
        }
        CheckCommand::Submodule { target, k } => {
            let s = cx.get(target)?;
            let elems = module_of(&s).map(|m| cx.set.elements_arg(m.carrier(), k));
            cx.record(format!("submodule/{target}"), target, |_| {
                let m = module_of(&s)?;
                let sub = Subgroup::from_elements(m.carrier(), elems?.map_err(load_error)?)?;
                done(&check_submodule(&m, &sub))
            });
        }
        CheckCommand::Ideal { target, i, side } => {
            let s = cx.get(target)?;
            let elems = pick(&s, "ring", Structure::as_ring).map(|r| cx.set.elements_arg(r.carrier(), i));
            let side = match side.as_str() {
                "left" => Side::Left,
                "right" => Side::Right,
                _ => Side::TwoSided,
            };
            cx.record(format!("ideal/{target}"), target, |_| {
                let ring = pick(&s, "ring", Structure::as_ring)?;
                let sub = Subgroup::from_elements(ring.carrier(), elems?.map_err(load_error)?)?;
                done(&is_ideal(&ring, &sub, side))
            });
        }
        CheckCommand::FinitelyGenerated { target, gens } => {
            let s = cx.get(target)?;
            let elems = module_of(&s).map(|m| cx.set.elements_arg(m.carrier(), gens));
            cx.record(format!("finitely-generated/{target}"), target, |_| {
                let m = module_of(&s)?;
                let (verdict, reached) = check_finitely_generated(&m, &elems?.map_err(load_error)?)?;
                Ok(Record::new("", "", &verdict).with_details(json!({ "reached_order": reached.order() })))
            });
        }
    }
    Ok(())
}

fn run_hom(cx: &mut Ctx<'_>, hom: &HomCommand) -> Result<(), LoadError> {
    let entry_of = |s: &Structure| match s {
        Structure::Hom(h) => Ok(h.clone()),
        other => Err(Error::Precondition(format!("expected a homomorphism, found a {}", other.kind()))),
    };
    let graded_pair = |e: &crate::loader::HomEntry| match (&e.source, &e.target) {
        (Some(s), Some(t)) => Ok((s.clone(), t.clone())),
        _ => Err(Error::Precondition("source and target must be graded modules".into())),
    };
    match hom {
        HomCommand::Check { targets } => {
            for t in targets {
                let s = cx.get(t)?;
                cx.record(format!("hom-check/{t}"), t, |_| {
                    let e = entry_of(&s)?;
                    done(&check_hom(&e.hom, e.phi.as_deref())?)
                });
            }
        }
        HomCommand::Degree { target, h } => {
            let s = cx.get(target)?;
            cx.record(format!("hom-degree/{target}"), target, |_| {
                let e = entry_of(&s)?;
                let (src, tgt) = graded_pair(&e)?;
                let degree = src.ring().semigroup().index_of(h)?;
                done(&degree_of_hom(&e.hom, &src, &tgt, degree)?)
            });
        }
        HomCommand::Decompose { target } => {
            let s = cx.get(target)?;
            cx.record(format!("hom-decompose/{target}"), target, |_| {
                let e = entry_of(&s)?;
                let (src, tgt) = graded_pair(&e)?;
                let parts = decompose_hom(&e.hom, &src, &tgt)?;
                let semigroup = src.ring().semigroup();
                let parts: serde_json::Map<String, Value> = parts
                    .parts
                    .iter()
                    .map(|(g, f)| (semigroup.label(*g).to_string(), datum(f.render())))
                    .collect();
                Ok(Record::new("", "", &Verdict::Pass).with_details(json!({ "components": parts })))
            });
        }
        HomCommand::Enumerate { source, target } => {
            let (s, t) = (cx.get(source)?, cx.get(target)?);
            cx.record(format!("hom-enumerate/{source}/{target}"), &format!("{source},{target}"), |cx| {
                let (src, tgt) = (module_of(&s)?, module_of(&t)?);
                let homs = enumerate_homs(&src, &tgt, &cx.budget)?;
                let maps: Vec<Value> = homs.iter().map(|f| datum(f.render())).collect();
                Ok(Record::new("", "", &Verdict::Pass).with_details(json!({ "count": homs.len(), "maps": maps })))
            });
        }
    }
    Ok(())
}
