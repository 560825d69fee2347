//! Filtered Γ-modules, `gr(M)` over `gr(R)`, and intersections of chains.

use std::sync::Arc;

use super::{check_submodule, GammaModule, GradedGammaModule, ModuleSide};
use crate::filtration::{
    associated_graded_to, check_filtration, descending_chain, filtration_from_grading, AssociatedGraded,
    DescendingChain, Filtration,
};
use crate::grading::coordinate_subgroups;
use crate::group::{join_index, split_index, Elem, FiniteAbelianGroup, QuotientGroup, Subgroup};
use crate::ring::{Ideal, Side};
use crate::verdict::{Budget, Datum, Verdict, Witness};
use crate::{Error, Result};

/// `M^0 ⊆ … ⊆ M^N = M` over a filtered ring with `R^i Γ M^j ⊆ M^{i+j}`.
#[derive(Clone, Debug)]
pub struct FilteredModule {
    filtration: Filtration,
    module: GammaModule,
    chain: Vec<Subgroup>,
}

impl FilteredModule {
    pub fn new(filtration: &Filtration, module: &GammaModule, chain: Vec<Subgroup>) -> Result<Self> {
        if module.side() != ModuleSide::Left {
            return Err(Error::Unsupported("filtered modules are left modules".into()));
        }
        if module.ring().carrier() != filtration.ring().carrier() || module.ring().gamma() != filtration.ring().gamma()
        {
            return Err(Error::Incompatible("module is over a different ring".into()));
        }
        if chain.is_empty() {
            return Err(Error::Precondition("a filtration needs at least one term".into()));
        }
        if chain.iter().any(|s| s.parent() != module.carrier()) {
            return Err(Error::Incompatible("filtration terms must be subgroups of the module".into()));
        }
        Ok(FilteredModule { filtration: filtration.clone(), module: module.clone(), chain })
    }

    /// `M^k = ⊕_{j ≤ k} M_j` for a module graded over a ring graded by `{0..D}`.
    pub fn from_graded(graded: &GradedGammaModule) -> Result<Self> {
        let filtration = filtration_from_grading(graded.ring())?;
        let ring = graded.ring();
        let d = ring.semigroup().order() - 1;
        let module = graded.module();
        for i in 0..=d {
            for j in (0..=d).filter(|&j| i + j > d) {
                for &r in ring.component(i).elements() {
                    for a in ring.ring().gamma().elements() {
                        for &m in graded.component(j).elements() {
                            if module.act(r, a, m) != 0 {
                                let w = Witness::new("truncation")
                                    .with("i", Datum::Index(i))
                                    .with("j", Datum::Index(j))
                                    .with("r", ring.ring().elem(r))
                                    .with("alpha", ring.ring().gam(a))
                                    .with("m", module.elem(m));
                                return Err(Error::rejected("grading with vanishing overflow actions", w));
                            }
                        }
                    }
                }
            }
        }
        let mut chain: Vec<Subgroup> = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let next = match chain.last() {
                None => graded.component(0).clone(),
                Some(prev) => prev.join(graded.component(k)),
            };
            chain.push(next);
        }
        Self::new(&filtration, module, chain)
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn module(&self) -> &GammaModule {
        &self.module
    }

    pub fn chain(&self) -> &[Subgroup] {
        &self.chain
    }

    pub fn top(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn level(&self, k: usize) -> &Subgroup {
        &self.chain[k.min(self.top())]
    }
}

/// The ring filtration, monotone containment, `M^N = M`, and `R^i Γ M^j ⊆ M^{i+j}`.
pub fn check_filtered_module(candidate: &FilteredModule) -> Verdict {
    let module = candidate.module();
    let ring = module.ring();
    check_filtration(candidate.filtration()).and_then(|| {
        for (i, pair) in candidate.chain.windows(2).enumerate() {
            if let Some(&x) = pair[0].elements().iter().find(|&&x| !pair[1].contains(x)) {
                return Verdict::Fail(Witness::new("monotone").with("i", Datum::Index(i)).with("m", module.elem(x)));
            }
        }
        let top = candidate.level(candidate.top());
        if let Some(x) = module.carrier().elements().find(|&x| !top.contains(x)) {
            return Verdict::Fail(Witness::new("exhaustive").with("m", module.elem(x)));
        }
        for i in 0..=candidate.filtration().top() {
            for j in 0..=candidate.top() {
                let target = candidate.level(i + j);
                for &r in candidate.filtration().level(i).elements() {
                    for a in ring.gamma().elements() {
                        for &m in candidate.chain[j].elements() {
                            if !target.contains(module.act(r, a, m)) {
                                return Verdict::Fail(
                                    Witness::new("action_containment")
                                        .with("i", Datum::Index(i))
                                        .with("j", Datum::Index(j))
                                        .with("r", ring.elem(r))
                                        .with("alpha", ring.gam(a))
                                        .with("m", module.elem(m)),
                                );
                            }
                        }
                    }
                }
            }
        }
        Verdict::Pass
    })
}

/// `gr(M) = ⊕ M^k / M^{k-1}` as a graded module over `gr(R)`.
#[derive(Clone, Debug)]
pub struct GrModule {
    ring: AssociatedGraded,
    module: GradedGammaModule,
    layers: Vec<QuotientGroup>,
    levels: Vec<Subgroup>,
    resamplings: u128,
}

impl GrModule {
    pub fn ring(&self) -> &AssociatedGraded {
        &self.ring
    }

    pub fn module(&self) -> &GradedGammaModule {
        &self.module
    }

    pub fn layer_order(&self, k: usize) -> usize {
        self.layers[k].order()
    }

    pub fn resamplings(&self) -> u128 {
        self.resamplings
    }

    /// The element `x + M^{k-1}` of `gr(M)`, for `x ∈ M^k`.
    pub fn class_of(&self, k: usize, x: Elem) -> Option<Elem> {
        let local = self.levels[k].local_index(x)?;
        let radices: Vec<usize> = self.layers.iter().map(|l| l.order()).collect();
        let mut digits = vec![0; radices.len()];
        digits[k] = self.layers[k].class(local);
        Some(join_index(&digits, &radices))
    }
}

/// Builds `gr(M)` up to degree `max(N_R, N_M)`, checking that the induced action
/// does not depend on representatives.
pub fn gr_module(candidate: &FilteredModule, budget: &Budget) -> Result<GrModule> {
    if let Verdict::Fail(w) = check_filtered_module(candidate) {
        return Err(Error::rejected("filtered module", w));
    }
    let top = candidate.top().max(candidate.filtration().top());
    let gr = associated_graded_to(candidate.filtration(), top, budget)?;
    let module = candidate.module();
    let ring = module.ring();
    let levels: Vec<Subgroup> = (0..=top).map(|k| candidate.level(k).clone()).collect();
    let layers: Vec<QuotientGroup> = (0..=top)
        .map(|k| {
            let local = Arc::new(levels[k].as_group());
            let below = match k {
                0 => Subgroup::trivial(&local),
                _ => levels[k].restrict(&levels[k - 1], &local)?,
            };
            Ok(QuotientGroup::new(&below))
        })
        .collect::<Result<_>>()?;
    let class = |k: usize, x: Elem| -> usize {
        layers[k].class(levels[k].local_index(x).expect("action lies in the filtration level"))
    };
    let rep = |k: usize, digit: usize| -> Elem { levels[k].elements()[layers[k].rep(digit)] };

    let mut cost: u128 = 0;
    for m in 0..=top {
        for n in (0..=top).filter(|&n| m + n <= top) {
            cost += candidate.filtration().level(m).order() as u128
                * ring.gamma().order() as u128
                * levels[n].order() as u128;
        }
    }
    budget.charge(cost)?;
    let mut resamplings = 0u128;
    for m in 0..=top {
        for n in (0..=top).filter(|&n| m + n <= top) {
            for &r in candidate.filtration().level(m).elements() {
                let rep_r = gr.representative(m, gr.class_of(m, r).expect("r lies in R^m"));
                for a in ring.gamma().elements() {
                    for &x in levels[n].elements() {
                        let rep_x = rep(n, class(n, x));
                        resamplings += 1;
                        if class(m + n, module.act(r, a, x)) != class(m + n, module.act(rep_r, a, rep_x)) {
                            return Err(Error::Consistency(format!(
                                "induced action depends on representatives at ({}, {}, {})",
                                ring.elem(r),
                                ring.gam(a),
                                module.elem(x)
                            )));
                        }
                    }
                }
            }
        }
    }

    let radices: Vec<usize> = layers.iter().map(|l| l.order()).collect();
    let parts: Vec<&FiniteAbelianGroup> = layers.iter().map(|l| &**l.group()).collect();
    let carrier = Arc::new(FiniteAbelianGroup::direct_product(&parts)?);
    let graded_ring = gr.graded();
    let act = |r: Elem, a: Elem, x: Elem| -> Elem {
        let xs = split_index(x, &radices);
        let mut out = vec![0; radices.len()];
        for m in (0..=top).filter(|&m| graded_ring.coordinate(r, m) != 0) {
            let rep_r = gr.representative(m, r);
            for n in (0..=top).filter(|&n| xs[n] != 0 && m + n <= top) {
                let v = class(m + n, module.act(rep_r, a, rep(n, xs[n])));
                out[m + n] = layers[m + n].group().add(out[m + n], v);
            }
        }
        join_index(&out, &radices)
    };
    let flat = GammaModule::from_fn(graded_ring.ring(), carrier.clone(), ModuleSide::Left, act)?;
    let components = coordinate_subgroups(&carrier, &radices);
    let graded = GradedGammaModule::new(graded_ring, flat, components)?;
    Ok(GrModule { ring: gr, module: graded, layers, levels, resamplings })
}

/// `∩ M^k` for any chain of subgroups, with the verdict of the submodule check.
pub fn intersect_chain(module: &GammaModule, chain: &[Subgroup]) -> Result<(Subgroup, Verdict)> {
    let first = chain.first().ok_or_else(|| Error::Precondition("empty chain".into()))?;
    let meet = chain.iter().skip(1).fold(first.clone(), |acc, s| acc.intersection(s));
    let verdict = check_submodule(module, &meet);
    Ok((meet, verdict))
}

/// `M ⊇ IΓM ⊇ IΓ(IΓM) ⊇ …`, each term the generated subgroup, until it repeats.
pub fn adic_module_chain(module: &GammaModule, ideal: &Ideal) -> Result<DescendingChain> {
    if ideal.side() != Side::TwoSided {
        return Err(Error::Precondition("adic chains use a two-sided ideal".into()));
    }
    if ideal.ring().carrier() != module.ring().carrier() {
        return Err(Error::Incompatible("ideal of a different ring".into()));
    }
    let step = |prev: &Subgroup| {
        Subgroup::generated(
            module.carrier(),
            ideal.subgroup().elements().iter().flat_map(|&i| {
                module
                    .ring()
                    .gamma()
                    .elements()
                    .flat_map(move |a| prev.elements().iter().map(move |&m| module.act(i, a, m)))
            }),
        )
    };
    let whole = Subgroup::whole(module.carrier());
    let first = step(&whole);
    Ok(descending_chain(whole, first, step))
}
