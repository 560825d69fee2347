//! Graded Γ-modules, graded submodules and quotients.

use std::collections::BTreeSet;

use super::{check_module_axioms, check_submodule, GammaModule, ModuleSide};
use crate::grading::{direct_sum_coordinates, GradedGammaRing};
use crate::group::{Elem, QuotientGroup, Subgroup};
use crate::verdict::{Budget, Verdict, Witness};
use crate::{Error, Result};

/// A module over a graded ring with `M = ⊕ M_g` and `R_g Γ M_h ⊆ M_{gh}`.
#[derive(Clone, Debug)]
pub struct GradedGammaModule {
    ring: GradedGammaRing,
    module: GammaModule,
    components: Vec<Subgroup>,
    coords: Vec<Elem>,
}

/// Direct sum, containment `R_g Γ M_h ⊆ M_{gh}`, and the module axioms.
pub fn check_graded_module(ring: &GradedGammaRing, module: &GammaModule, components: &[Subgroup]) -> Result<Verdict> {
    if module.side() != ModuleSide::Left {
        return Err(Error::Unsupported("graded modules are left modules".into()));
    }
    if module.ring().carrier() != ring.ring().carrier() || module.ring().gamma() != ring.ring().gamma() {
        return Err(Error::Incompatible("module is over a different ring".into()));
    }
    let semigroup = ring.semigroup();
    if components.len() != semigroup.order() {
        return Err(Error::Precondition("one component per semigroup element is required".into()));
    }
    if components.iter().any(|c| c.parent() != module.carrier()) {
        return Err(Error::Incompatible("component does not live in the module carrier".into()));
    }
    if let Verdict::Fail(w) = check_module_axioms(module) {
        return Ok(Verdict::Fail(w));
    }
    if let Err(w) = direct_sum_coordinates(module.carrier(), components, |g| semigroup.degree(g)) {
        return Ok(Verdict::Fail(w));
    }
    let flat = module.ring();
    for g in semigroup.elements() {
        for h in semigroup.elements() {
            let target = &components[semigroup.mul(g, h)];
            for &r in ring.component(g).elements() {
                for a in flat.gamma().elements() {
                    for &m in components[h].elements() {
                        if !target.contains(module.act(r, a, m)) {
                            return Ok(Verdict::Fail(
                                Witness::new("graded_containment")
                                    .with("g", semigroup.degree(g))
                                    .with("h", semigroup.degree(h))
                                    .with("r", flat.elem(r))
                                    .with("alpha", flat.gam(a))
                                    .with("m", module.elem(m)),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

impl GradedGammaModule {
    pub fn new(ring: &GradedGammaRing, module: GammaModule, components: Vec<Subgroup>) -> Result<Self> {
        if let Verdict::Fail(w) = check_graded_module(ring, &module, &components)? {
            return Err(Error::rejected("graded module", w));
        }
        let coords = direct_sum_coordinates(module.carrier(), &components, |g| ring.semigroup().degree(g))
            .expect("direct sum verified");
        Ok(GradedGammaModule { ring: ring.clone(), module, components, coords })
    }

    /// The ring as a graded module over itself.
    pub fn regular(ring: &GradedGammaRing) -> Result<Self> {
        let module = GammaModule::regular(ring.ring(), ModuleSide::Left)?;
        Self::new(ring, module, ring.components().to_vec())
    }

    /// `M_e = M`, all other components zero.
    pub fn trivial(ring: &GradedGammaRing, module: GammaModule) -> Result<Self> {
        let e = ring
            .semigroup()
            .identity()
            .ok_or_else(|| Error::Precondition("trivial grading needs a semigroup with identity".into()))?;
        let components = ring
            .semigroup()
            .elements()
            .map(|g| if g == e { Subgroup::whole(module.carrier()) } else { Subgroup::trivial(module.carrier()) })
            .collect();
        Self::new(ring, module, components)
    }

    pub fn ring(&self) -> &GradedGammaRing {
        &self.ring
    }

    pub fn module(&self) -> &GammaModule {
        &self.module
    }

    pub fn components(&self) -> &[Subgroup] {
        &self.components
    }

    pub fn component(&self, g: usize) -> &Subgroup {
        &self.components[g]
    }

    pub fn coordinate(&self, m: Elem, g: usize) -> Elem {
        self.coords[m * self.components.len() + g]
    }

    pub fn decompose(&self, m: Elem) -> Vec<(usize, Elem)> {
        (0..self.components.len()).map(|g| (g, self.coordinate(m, g))).filter(|&(_, c)| c != 0).collect()
    }

    pub fn homogeneous_degree(&self, m: Elem) -> Option<usize> {
        match self.decompose(m).as_slice() {
            [(g, _)] => Some(*g),
            _ => None,
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.components.len()).filter(|&g| !self.components[g].is_trivial()).collect()
    }
}

/// `N = ⊕ (N ∩ M_g)`: a submodule containing the homogeneous components of its elements.
pub fn is_graded_submodule(module: &GradedGammaModule, sub: &Subgroup) -> Verdict {
    check_submodule(module.module(), sub).and_then(|| {
        for &x in sub.elements() {
            if let Some((g, c)) = module.decompose(x).into_iter().find(|&(_, c)| !sub.contains(c)) {
                return Verdict::Fail(
                    Witness::new("homogeneous_components")
                        .with("x", module.module().elem(x))
                        .with("degree", module.ring().semigroup().degree(g))
                        .with("component", module.module().elem(c)),
                );
            }
        }
        Verdict::Pass
    })
}

#[derive(Clone, Debug)]
pub struct QuotientModuleReport {
    pub module: GammaModule,
    pub quotient: QuotientGroup,
    /// `(M_g + K)/K` inside `M/K`.
    pub components: Vec<Subgroup>,
    /// `|M_g / (K ∩ M_g)|` for each degree.
    pub expected_orders: Vec<usize>,
    /// Whether `M/K = ⊕ (M_g + K)/K`.
    pub direct: Verdict,
    /// Present when the sum is direct.
    pub graded: Option<GradedGammaModule>,
}

/// `M/K` with components `(M_g + K)/K`, reporting whether their sum is direct.
pub fn quotient_module(module: &GradedGammaModule, k: &Subgroup) -> Result<QuotientModuleReport> {
    let (quotient_module, quotient) = module.module().quotient(k)?;
    let semigroup = module.ring().semigroup();
    let components: Vec<Subgroup> =
        module.components().iter().map(|c| c.image(quotient_module.carrier(), |x| quotient.class(x))).collect();
    let expected_orders: Vec<usize> =
        module.components().iter().map(|c| c.order() / c.intersection(k).order()).collect();
    for (g, (c, &n)) in components.iter().zip(&expected_orders).enumerate() {
        if c.order() != n {
            return Err(Error::Consistency(format!(
                "(M_g + K)/K and M_g/(K ∩ M_g) differ in size at degree {}",
                semigroup.label(g)
            )));
        }
    }
    let direct: Verdict = direct_sum_coordinates(quotient_module.carrier(), &components, |g| semigroup.degree(g))
        .err()
        .into();
    let graded = match direct {
        Verdict::Pass => Some(GradedGammaModule::new(module.ring(), quotient_module.clone(), components.clone())?),
        Verdict::Fail(_) => None,
    };
    Ok(QuotientModuleReport { module: quotient_module, quotient, components, expected_orders, direct, graded })
}

/// `K' = ⊕ K_g` with `K_g` generated by the homogeneous elements of degree `g` in `K`;
/// verified to be the largest graded submodule inside `K` by enumerating every
/// subgroup between `K'` and `K`.
pub fn maximal_graded_submodule(module: &GradedGammaModule, k: &Subgroup, budget: &Budget) -> Result<Subgroup> {
    if let Verdict::Fail(w) = check_submodule(module.module(), k) {
        return Err(Error::rejected("submodule", w));
    }
    let carrier = module.module().carrier();
    let pieces = module.components().iter().map(|c| c.intersection(k));
    let prime = Subgroup::generated(carrier, pieces.flat_map(|p| p.elements().to_vec()));
    if !prime.is_subset_of(k) {
        return Err(Error::Consistency("K' is not contained in K".into()));
    }
    if let Verdict::Fail(w) = is_graded_submodule(module, &prime) {
        return Err(Error::Consistency(format!("K' is not a graded submodule: {w}")));
    }
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut frontier = vec![prime.clone()];
    seen.insert(prime.elements().to_vec());
    while let Some(current) = frontier.pop() {
        for &x in k.elements().iter().filter(|&&x| !current.contains(x)) {
            budget.charge(seen.len() as u128)?;
            let bigger = current.join(&Subgroup::generated(carrier, [x]));
            if seen.insert(bigger.elements().to_vec()) {
                if is_graded_submodule(module, &bigger).is_pass() {
                    return Err(Error::Consistency(format!(
                        "graded submodule {} inside K is larger than K'",
                        module.module().carrier().render(x)
                    )));
                }
                frontier.push(bigger);
            }
        }
    }
    Ok(prime)
}

/// `R_g Γ M_h = M_{gh}` for all pairs, reading the left side as a generated subgroup.
pub fn strongly_graded_module_check(module: &GradedGammaModule) -> Verdict {
    let ring = module.ring();
    let semigroup = ring.semigroup();
    let flat = module.module();
    for g in semigroup.elements() {
        for h in semigroup.elements() {
            let products = ring.component(g).elements().iter().flat_map(|&r| {
                flat.ring()
                    .gamma()
                    .elements()
                    .flat_map(move |a| module.component(h).elements().iter().map(move |&m| flat.act(r, a, m)))
            });
            let generated = Subgroup::generated(flat.carrier(), products);
            if &generated != module.component(semigroup.mul(g, h)) {
                return Verdict::Fail(
                    Witness::new("strong_grading").with("g", semigroup.degree(g)).with("h", semigroup.degree(h)),
                );
            }
        }
    }
    Verdict::Pass
}
