//! Γ-module homomorphisms, homogeneous components, and the graded ring of endomorphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::grading::direct_sum_coordinates;
use crate::group::{Elem, FiniteAbelianGroup, Subgroup};
use crate::module::{check_finitely_generated, GammaModule, GradedGammaModule};
use crate::ring::check_automorphism;
use crate::verdict::{Budget, Datum, Verdict, Witness};
use crate::{Error, Result};

/// A map between the carriers of two modules over the same ring.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    source: GammaModule,
    target: GammaModule,
    values: Vec<Elem>,
}

impl ModuleHom {
    pub fn new(source: &GammaModule, target: &GammaModule, values: Vec<Elem>) -> Result<Self> {
        if source.ring().carrier() != target.ring().carrier() || source.ring().gamma() != target.ring().gamma() {
            return Err(Error::Incompatible("modules over different rings".into()));
        }
        if source.side() != target.side() {
            return Err(Error::Incompatible("modules on different sides".into()));
        }
        if values.len() != source.order() {
            return Err(Error::Precondition("one value per source element is required".into()));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= target.order()) {
            return Err(Error::Precondition(format!("value index {v} outside the target")));
        }
        Ok(ModuleHom { source: source.clone(), target: target.clone(), values })
    }

    pub fn zero(source: &GammaModule, target: &GammaModule) -> Result<Self> {
        Self::new(source, target, vec![0; source.order()])
    }

    pub fn identity(module: &GammaModule) -> Self {
        ModuleHom { source: module.clone(), target: module.clone(), values: module.carrier().elements().collect() }
    }

    pub fn source(&self) -> &GammaModule {
        &self.source
    }

    pub fn target(&self) -> &GammaModule {
        &self.target
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.values[x]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        let t = self.target.carrier();
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| t.add(a, b)).collect();
        ModuleHom { values, ..self.clone() }
    }

    pub fn neg(&self) -> ModuleHom {
        let t = self.target.carrier();
        ModuleHom { values: self.values.iter().map(|&a| t.neg(a)).collect(), ..self.clone() }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ModuleHom) -> Result<ModuleHom> {
        if self.target.carrier() != next.source.carrier() {
            return Err(Error::Incompatible("maps do not compose".into()));
        }
        let values = self.values.iter().map(|&v| next.values[v]).collect();
        Ok(ModuleHom { source: self.source.clone(), target: next.target.clone(), values })
    }

    pub fn render(&self) -> Datum {
        Datum::Elements(self.values.iter().map(|&v| self.target.carrier().label(v)).collect())
    }
}

/// `f(x + y) = f(x) + f(y)` and `f(rγx) = rφ(γ)f(x)`.
pub fn check_hom(f: &ModuleHom, phi: Option<&[Elem]>) -> Result<Verdict> {
    let ring = f.source.ring();
    if let Some(phi) = phi {
        check_automorphism(ring.gamma(), phi)?;
    }
    let (s, t) = (f.source.carrier(), f.target.carrier());
    for x in s.elements() {
        for y in s.elements() {
            if f.apply(s.add(x, y)) != t.add(f.apply(x), f.apply(y)) {
                return Ok(Verdict::Fail(
                    Witness::new("additivity").with("x", s.render(x)).with("y", s.render(y)),
                ));
            }
        }
    }
    for r in ring.carrier().elements() {
        for a in ring.gamma().elements() {
            let twisted = phi.map_or(a, |p| p[a]);
            for x in s.elements() {
                if f.apply(f.source.act(r, a, x)) != f.target.act(r, twisted, f.apply(x)) {
                    return Ok(Verdict::Fail(
                        Witness::new("equivariance")
                            .with("r", ring.elem(r))
                            .with("alpha", ring.gam(a))
                            .with("x", s.render(x)),
                    ));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

fn require_pair(f: &ModuleHom, source: &GradedGammaModule, target: &GradedGammaModule) -> Result<()> {
    if source.module().carrier() != f.source.carrier() || target.module().carrier() != f.target.carrier() {
        return Err(Error::Incompatible("gradings are not on the map's modules".into()));
    }
    if source.ring().semigroup() != target.ring().semigroup() {
        return Err(Error::Incompatible("gradings use different semigroups".into()));
    }
    Ok(())
}

/// `f(M_g) ⊆ K_{hg}` for every `g`.
pub fn degree_of_hom(f: &ModuleHom, source: &GradedGammaModule, target: &GradedGammaModule, h: usize) -> Result<Verdict> {
    require_pair(f, source, target)?;
    let semigroup = source.ring().semigroup();
    if h >= semigroup.order() {
        return Err(Error::Precondition(format!("degree index {h} outside the semigroup")));
    }
    for g in semigroup.elements() {
        let allowed = target.component(semigroup.mul(h, g));
        if let Some(&m) = source.component(g).elements().iter().find(|&&m| !allowed.contains(f.apply(m))) {
            return Ok(Verdict::Fail(
                Witness::new("homogeneous_degree")
                    .with("g", semigroup.degree(g))
                    .with("m", f.source.elem(m))
                    .with("image", f.target.elem(f.apply(m))),
            ));
        }
    }
    Ok(Verdict::Pass)
}

/// `f_g(m) = Σ_h (f(m_{hg⁻¹}))_h`, verified to be a homomorphism of degree `g`.
pub fn component(f: &ModuleHom, source: &GradedGammaModule, target: &GradedGammaModule, g: usize) -> Result<ModuleHom> {
    require_pair(f, source, target)?;
    let semigroup = source.ring().semigroup();
    semigroup.require_group("homogeneous components of a homomorphism")?;
    let g_inv = semigroup.inverse(g).ok_or_else(|| Error::Precondition(format!("degree index {g} outside the group")))?;
    let t = f.target.carrier();
    let values = f
        .source
        .carrier()
        .elements()
        .map(|m| {
            t.sum(semigroup.elements().map(|h| {
                let piece = source.coordinate(m, semigroup.mul(h, g_inv));
                target.coordinate(f.apply(piece), h)
            }))
        })
        .collect();
    let part = ModuleHom::new(&f.source, &f.target, values)?;
    if let Verdict::Fail(w) = check_hom(&part, None)? {
        return Err(Error::Consistency(format!("component is not a homomorphism: {w}")));
    }
    if let Verdict::Fail(w) = degree_of_hom(&part, source, target, g)? {
        return Err(Error::Consistency(format!("component has the wrong degree: {w}")));
    }
    Ok(part)
}

/// `f = Σ_g f_g` with the nonzero parts listed by degree.
#[derive(Clone, Debug)]
pub struct HomDecomposition {
    pub parts: Vec<(usize, ModuleHom)>,
}

/// Splits a homomorphism out of a finitely generated group-graded module into
/// homogeneous components and checks the sum and its directness.
pub fn decompose_hom(f: &ModuleHom, source: &GradedGammaModule, target: &GradedGammaModule) -> Result<HomDecomposition> {
    require_pair(f, source, target)?;
    let semigroup = source.ring().semigroup();
    semigroup.require_group("decomposition of homomorphisms")?;
    if let Verdict::Fail(w) = check_hom(f, None)? {
        return Err(Error::rejected("module homomorphism", w));
    }
    let everything: Vec<Elem> = f.source.carrier().elements().collect();
    if let (Verdict::Fail(w), _) = check_finitely_generated(&f.source, &everything)? {
        return Err(Error::Precondition(format!("source module is not finitely generated: {w}")));
    }
    let mut parts = Vec::new();
    let mut total = ModuleHom::zero(&f.source, &f.target)?;
    for g in semigroup.elements() {
        let part = component(f, source, target, g)?;
        total = total.add(&part);
        if !part.is_zero() {
            for h in semigroup.elements().filter(|&h| h != g) {
                if degree_of_hom(&part, source, target, h)?.is_pass() {
                    return Err(Error::Consistency(format!(
                        "nonzero component homogeneous of degrees {} and {}",
                        semigroup.label(g),
                        semigroup.label(h)
                    )));
                }
            }
            parts.push((g, part));
        }
    }
    if total.values != f.values {
        return Err(Error::Consistency("components do not sum to the map".into()));
    }
    Ok(HomDecomposition { parts })
}

/// Smallest-index generators, each outside the span of the earlier ones.
fn greedy_generators(group: &Arc<FiniteAbelianGroup>) -> Vec<Elem> {
    let mut span = Subgroup::trivial(group);
    let mut gens = Vec::new();
    for x in group.elements() {
        if !span.contains(x) {
            gens.push(x);
            span = span.join(&Subgroup::generated(group, [x]));
        }
    }
    gens
}

/// Every homomorphism `M → K`, sorted by value table; the set is checked to be
/// closed under addition and negation. Additive maps are fixed by the images of
/// a generating set of `M`; equivariance is tested on generators of `R`, `Γ` and
/// `M` first, which suffices because both sides are additive in each argument.
pub fn enumerate_homs(source: &GammaModule, target: &GammaModule, budget: &Budget) -> Result<Vec<ModuleHom>> {
    let (s, t) = (source.carrier(), target.carrier());
    let gens = greedy_generators(s);
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&g| {
            let order = s.element_order(g);
            t.elements().filter(|&y| order % t.element_order(y) == 0).collect()
        })
        .collect();
    let choices = candidates.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128)).unwrap_or(u128::MAX);
    budget.charge(choices)?;
    let ring = source.ring();
    let ring_gens = greedy_generators(ring.carrier());
    let gamma_gens = greedy_generators(ring.gamma());
    let equivariant_on_generators = |values: &[Elem]| {
        ring_gens.iter().all(|&r| {
            gamma_gens.iter().all(|&a| gens.iter().all(|&x| values[source.act(r, a, x)] == target.act(r, a, values[x])))
        })
    };

    let mut found = Vec::new();
    let mut pick = vec![0usize; gens.len()];
    'choices: loop {
        let images: Vec<Elem> = pick.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(values) = extend_additively(s, t, &gens, &images) {
            if equivariant_on_generators(&values) {
                let f = ModuleHom::new(source, target, values)?;
                if let Verdict::Fail(w) = check_hom(&f, None)? {
                    return Err(Error::Consistency(format!("map equivariant on generators only: {w}")));
                }
                found.push(f);
            }
        }
        for slot in (0..pick.len()).rev() {
            pick[slot] += 1;
            if pick[slot] < candidates[slot].len() {
                continue 'choices;
            }
            pick[slot] = 0;
        }
        break;
    }
    found.sort_by(|a, b| a.values.cmp(&b.values));
    let index: BTreeMap<&[Elem], usize> = found.iter().enumerate().map(|(i, f)| (f.values(), i)).collect();
    for f in &found {
        if !index.contains_key(f.neg().values()) {
            return Err(Error::Consistency("homomorphisms are not closed under negation".into()));
        }
        for g in &found {
            if !index.contains_key(f.add(g).values()) {
                return Err(Error::Consistency("homomorphisms are not closed under addition".into()));
            }
        }
    }
    Ok(found)
}

/// The additive map sending `gens[i]` to `images[i]`, if the relations allow it.
fn extend_additively(
    s: &FiniteAbelianGroup,
    t: &FiniteAbelianGroup,
    gens: &[Elem],
    images: &[Elem],
) -> Option<Vec<Elem>> {
    let mut values = vec![usize::MAX; s.order()];
    values[0] = 0;
    let mut queue = vec![0];
    while let Some(x) = queue.pop() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = s.add(x, g);
            let v = t.add(values[x], img);
            if values[y] == usize::MAX {
                values[y] = v;
                queue.push(y);
            } else if values[y] != v {
                return None;
            }
        }
    }
    Some(values)
}

/// `End(M)` under pointwise addition and composition, graded by degree.
#[derive(Clone, Debug)]
pub struct EndomorphismRing {
    pub maps: Vec<ModuleHom>,
    /// `add[a][b]` is the index of `maps[a] + maps[b]`.
    pub add: Vec<Vec<usize>>,
    /// `compose[a][b]` is the index of `maps[a] ∘ maps[b]`.
    pub compose: Vec<Vec<usize>>,
    /// Indices of the maps homogeneous of each degree, the zero map included.
    pub components: Vec<Vec<usize>>,
}

impl EndomorphismRing {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Degree of a nonzero homogeneous endomorphism.
    pub fn degree(&self, a: usize) -> Option<usize> {
        let mut found = self.components.iter().enumerate().filter(|(_, c)| c.contains(&a)).map(|(g, _)| g);
        match (found.next(), found.next()) {
            (Some(g), None) => Some(g),
            _ => None,
        }
    }
}

/// Builds `End(M)` and verifies the ring axioms, the direct sum of its
/// homogeneous components, and that degrees multiply under composition.
pub fn endomorphism_graded_ring(module: &GradedGammaModule, budget: &Budget) -> Result<EndomorphismRing> {
    let semigroup = module.ring().semigroup();
    semigroup.require_group("graded endomorphism ring")?;
    let flat = module.module();
    let everything: Vec<Elem> = flat.carrier().elements().collect();
    if let (Verdict::Fail(w), _) = check_finitely_generated(flat, &everything)? {
        return Err(Error::Precondition(format!("module is not finitely generated: {w}")));
    }
    let maps = enumerate_homs(flat, flat, budget)?;
    let n = maps.len();
    budget.charge((n as u128).pow(3))?;
    let index: BTreeMap<&[Elem], usize> = maps.iter().enumerate().map(|(i, f)| (f.values(), i)).collect();
    let lookup = |f: &ModuleHom| index[f.values()];
    let add: Vec<Vec<usize>> = maps.iter().map(|a| maps.iter().map(|b| lookup(&a.add(b))).collect()).collect();
    let compose: Vec<Vec<usize>> = maps
        .iter()
        .map(|a| maps.iter().map(|b| b.then(a).map(|c| index.get(c.values()).copied())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Consistency("endomorphisms are not closed under composition".into()))?;

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if compose[compose[a][b]][c] != compose[a][compose[b][c]]
                    || compose[a][add[b][c]] != add[compose[a][b]][compose[a][c]]
                    || compose[add[a][b]][c] != add[compose[a][c]][compose[b][c]]
                {
                    return Err(Error::Consistency("endomorphisms violate a ring axiom".into()));
                }
            }
        }
    }

    let components: Vec<Vec<usize>> = semigroup
        .elements()
        .map(|g| {
            (0..n)
                .filter_map(|a| match degree_of_hom(&maps[a], module, module, g) {
                    Ok(v) if v.is_pass() => Some(Ok(a)),
                    Ok(_) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let labels = (0..n).map(|i| vec![i as u32]).collect();
    let group = Arc::new(FiniteAbelianGroup::from_table(labels, add.clone())?);
    let parts = components
        .iter()
        .map(|c| Subgroup::from_elements(&group, c.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    if let Err(w) = direct_sum_coordinates(&group, &parts, |g| semigroup.degree(g)) {
        return Err(Error::Consistency(format!("homogeneous endomorphisms do not give a direct sum: {w}")));
    }
    for h1 in semigroup.elements() {
        for h2 in semigroup.elements() {
            let target = &parts[semigroup.mul(h1, h2)];
            for &a in &components[h1] {
                for &b in &components[h2] {
                    if !target.contains(compose[a][b]) {
                        return Err(Error::Consistency(format!(
                            "composition of degrees {} and {} leaves degree {}",
                            semigroup.label(h1),
                            semigroup.label(h2),
                            semigroup.label(semigroup.mul(h1, h2))
                        )));
                    }
                }
            }
        }
    }
    Ok(EndomorphismRing { maps, add, compose, components })
}
