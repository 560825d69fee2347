//! Ascending filtrations, the associated graded Γ-ring, and descending adic chains.
//!
//! A chain `R^0 ⊆ … ⊆ R^N` stands for the infinite filtration with `R^k = R^N`
//! for `k ≥ N`; indices past the end clamp to `N` and `R^{-1} = 0`.

use std::sync::Arc;

use crate::grading::GradedGammaRing;
use crate::group::{join_index, Elem, QuotientGroup, Subgroup};
use crate::ring::{check_phi_homomorphism, GammaRing, Ideal, Side};
use crate::semigroup::FiniteSemigroup;
use crate::verdict::{Budget, Verdict, Witness};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Filtration {
    ring: GammaRing,
    chain: Vec<Subgroup>,
}

impl Filtration {
    pub fn new(ring: &GammaRing, chain: Vec<Subgroup>) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::Precondition("a filtration needs at least one term".into()));
        }
        if chain.iter().any(|s| s.parent() != ring.carrier()) {
            return Err(Error::Incompatible("filtration terms must be subgroups of the carrier".into()));
        }
        Ok(Filtration { ring: ring.clone(), chain })
    }

    /// `R^k = R` for all `k`.
    pub fn trivial(ring: &GammaRing) -> Self {
        Filtration { ring: ring.clone(), chain: vec![Subgroup::whole(ring.carrier())] }
    }

    pub fn ring(&self) -> &GammaRing {
        &self.ring
    }

    pub fn chain(&self) -> &[Subgroup] {
        &self.chain
    }

    /// The clamp index `N`.
    pub fn top(&self) -> usize {
        self.chain.len() - 1
    }

    /// `R^k` with `k` clamped to `N`.
    pub fn level(&self, k: usize) -> &Subgroup {
        &self.chain[k.min(self.top())]
    }
}

/// Monotone containment, `R^N = R`, and `R^i Γ R^j ⊆ R^{i+j}` for all `i, j ≤ N`.
pub fn check_filtration(candidate: &Filtration) -> Verdict {
    let ring = candidate.ring();
    for (i, pair) in candidate.chain.windows(2).enumerate() {
        if let Some(&x) = pair[0].elements().iter().find(|&&x| !pair[1].contains(x)) {
            return Verdict::Fail(
                Witness::new("monotone").with("i", crate::Datum::Index(i)).with("x", ring.elem(x)),
            );
        }
    }
    let top = candidate.level(candidate.top());
    if let Some(x) = ring.carrier().elements().find(|&x| !top.contains(x)) {
        return Verdict::Fail(Witness::new("exhaustive").with("x", ring.elem(x)));
    }
    let n = candidate.top();
    for i in 0..=n {
        for j in 0..=n {
            let target = candidate.level(i + j);
            for &x in candidate.chain[i].elements() {
                for alpha in ring.gamma().elements() {
                    for &y in candidate.chain[j].elements() {
                        if !target.contains(ring.product(x, alpha, y)) {
                            return Verdict::Fail(
                                Witness::new("product_containment")
                                    .with("i", crate::Datum::Index(i))
                                    .with("j", crate::Datum::Index(j))
                                    .with("x", ring.elem(x))
                                    .with("alpha", ring.gam(alpha))
                                    .with("y", ring.elem(y)),
                            );
                        }
                    }
                }
            }
        }
    }
    Verdict::Pass
}

/// `R^k = ⊕_{j ≤ k} R_j` for a ring graded by the segment `{0..D}`.
pub fn filtration_from_grading(graded: &GradedGammaRing) -> Result<Filtration> {
    let semigroup = graded.semigroup();
    let d = semigroup
        .as_segment()
        .ok_or_else(|| Error::Unsupported("filtrations come from gradings by a segment 0..D".into()))?;
    let ring = graded.ring();
    for i in 0..=d {
        for j in (0..=d).filter(|&j| i + j > d) {
            for &x in graded.component(i).elements() {
                for alpha in ring.gamma().elements() {
                    for &y in graded.component(j).elements() {
                        let p = ring.product(x, alpha, y);
                        if p != 0 {
                            let w = Witness::new("truncation")
                                .with("i", semigroup.degree(i))
                                .with("j", semigroup.degree(j))
                                .with("x", ring.elem(x))
                                .with("alpha", ring.gam(alpha))
                                .with("y", ring.elem(y));
                            return Err(Error::rejected("grading with vanishing overflow products", w));
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
    let filtration = Filtration::new(ring, chain)?;
    if let Verdict::Fail(w) = check_filtration(&filtration) {
        return Err(Error::Consistency(format!("cumulative chain of a grading is not a filtration: {w}")));
    }
    Ok(filtration)
}

/// `gr R = ⊕ R^k / R^{k-1}` with its flattened graded Γ-ring.
#[derive(Clone, Debug)]
pub struct AssociatedGraded {
    source: Filtration,
    top: usize,
    layers: Vec<Layer>,
    graded: GradedGammaRing,
    resamplings: u128,
}

#[derive(Clone, Debug)]
struct Layer {
    /// `R^k / R^{k-1}` over the local indices of `R^k`.
    quotient: QuotientGroup,
}

impl AssociatedGraded {
    pub fn source(&self) -> &Filtration {
        &self.source
    }

    /// Highest degree; components beyond the chain are trivial.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn graded(&self) -> &GradedGammaRing {
        &self.graded
    }

    pub fn layer_order(&self, k: usize) -> usize {
        self.layers[k].quotient.order()
    }

    /// Representative products recomputed during the well-definedness check.
    pub fn resamplings(&self) -> u128 {
        self.resamplings
    }

    fn class_index(&self, k: usize, r: Elem) -> Option<usize> {
        let local = self.source.level(k).local_index(r)?;
        Some(self.layers[k].quotient.class(local))
    }

    /// The element `r + R^{k-1}` of `gr R`, for `r ∈ R^k`.
    pub fn class_of(&self, k: usize, r: Elem) -> Option<Elem> {
        let c = self.class_index(k, r)?;
        let radices: Vec<usize> = self.layers.iter().map(|l| l.quotient.order()).collect();
        let mut digits = vec![0; radices.len()];
        digits[k] = c;
        Some(join_index(&digits, &radices))
    }

    /// A representative in `R^k` of the degree-`k` coordinate of a `gr R` element.
    pub fn representative(&self, k: usize, x: Elem) -> Elem {
        let c = self.graded.coordinate(x, k);
        let radices: Vec<usize> = self.layers.iter().map(|l| l.quotient.order()).collect();
        let digit = crate::group::split_index(c, &radices)[k];
        self.source.level(k).elements()[self.layers[k].quotient.rep(digit)]
    }
}

/// Builds `gr R` up to degree `N`.
pub fn associated_graded(filtration: &Filtration, budget: &Budget) -> Result<AssociatedGraded> {
    associated_graded_to(filtration, filtration.top(), budget)
}

/// Builds `gr R` up to degree `top ≥ N`, with trivial components past `N`.
pub fn associated_graded_to(filtration: &Filtration, top: usize, budget: &Budget) -> Result<AssociatedGraded> {
    if top < filtration.top() {
        return Err(Error::Precondition("top degree below the filtration length".into()));
    }
    if let Verdict::Fail(w) = check_filtration(filtration) {
        return Err(Error::rejected("filtration", w));
    }
    let ring = filtration.ring();
    let layers: Vec<Layer> = (0..=top)
        .map(|k| {
            let here = filtration.level(k);
            let local = Arc::new(here.as_group());
            let below = match k {
                0 => Subgroup::trivial(&local),
                _ => here.restrict(filtration.level(k - 1), &local)?,
            };
            Ok(Layer { quotient: QuotientGroup::new(&below) })
        })
        .collect::<Result<_>>()?;

    let mut cost: u128 = 0;
    for m in 0..=top {
        for n in (0..=top).filter(|&n| m + n <= top) {
            cost += filtration.level(m).order() as u128
                * ring.gamma().order() as u128
                * filtration.level(n).order() as u128;
        }
    }
    budget.charge(cost)?;

    let class = |k: usize, r: Elem| -> usize {
        let local = filtration.level(k).local_index(r).expect("product lies in the filtration level");
        layers[k].quotient.class(local)
    };
    let mut resamplings = 0u128;
    for m in 0..=top {
        for n in (0..=top).filter(|&n| m + n <= top) {
            let (lm, ln) = (filtration.level(m), filtration.level(n));
            for alpha in ring.gamma().elements() {
                for (a, &r) in lm.elements().iter().enumerate() {
                    let rep_r = lm.elements()[layers[m].quotient.reduce(a)];
                    for (b, &s) in ln.elements().iter().enumerate() {
                        let rep_s = ln.elements()[layers[n].quotient.reduce(b)];
                        resamplings += 1;
                        if class(m + n, ring.product(r, alpha, s)) != class(m + n, ring.product(rep_r, alpha, rep_s)) {
                            return Err(Error::Consistency(format!(
                                "induced product depends on representatives at ({}, {}, {})",
                                ring.elem(r),
                                ring.gam(alpha),
                                ring.elem(s)
                            )));
                        }
                    }
                }
            }
        }
    }

    let components: Vec<Arc<_>> = layers.iter().map(|l| l.quotient.group().clone()).collect();
    let piece = |m: usize, a: Elem, alpha: Elem, n: usize, b: Elem| -> Elem {
        if m + n > top {
            return 0;
        }
        let r = filtration.level(m).elements()[layers[m].quotient.rep(a)];
        let s = filtration.level(n).elements()[layers[n].quotient.rep(b)];
        class(m + n, ring.product(r, alpha, s))
    };
    let graded = GradedGammaRing::external(
        Arc::new(FiniteSemigroup::segment(top)),
        ring.gamma().clone(),
        components,
        piece,
        budget,
    )?;
    Ok(AssociatedGraded { source: filtration.clone(), top, layers, graded, resamplings })
}

/// For a grading by `{0..D}`: the map `R → gr R`, `r_k ↦ r_k + R^{k-1}` on each
/// component, verified to be a degree-preserving Γ-ring isomorphism.
pub fn grading_roundtrip_iso(graded: &GradedGammaRing, budget: &Budget) -> Result<Vec<Elem>> {
    let filtration = filtration_from_grading(graded)?;
    let gr = associated_graded(&filtration, budget)?;
    let target = gr.graded();
    let carrier = target.ring().carrier();
    let map: Vec<Elem> = graded
        .ring()
        .carrier()
        .elements()
        .map(|x| {
            graded
                .decompose(x)
                .into_iter()
                .map(|(k, c)| gr.class_of(k, c).expect("component lies in its filtration level"))
                .fold(0, |acc, y| carrier.add(acc, y))
        })
        .collect();
    let mut hit = vec![false; carrier.order()];
    for &y in &map {
        if std::mem::replace(&mut hit[y], true) {
            return Err(Error::Consistency(format!("{} has two preimages", target.ring().elem(y))));
        }
    }
    if map.len() != carrier.order() {
        return Err(Error::Consistency("gr R and R differ in size".into()));
    }
    if let Verdict::Fail(w) = check_phi_homomorphism(graded.ring(), target.ring(), &map, None)? {
        return Err(Error::Consistency(format!("canonical map is not a homomorphism: {w}")));
    }
    for k in graded.semigroup().elements() {
        if graded.component(k).elements().iter().any(|&x| !target.component(k).contains(map[x])) {
            return Err(Error::Consistency(format!("canonical map moves degree {k}")));
        }
    }
    Ok(map)
}

/// `R^0 = R ⊇ R^1 = I ⊇ R^2 ⊇ …` with `R^k` generated by `R^{k-1} Γ I`.
#[derive(Clone, Debug)]
pub struct DescendingChain {
    pub chain: Vec<Subgroup>,
    /// Least `k ≥ 1` with `R^{k+1} = R^k`; the chain stops there.
    pub stabilization: usize,
}

pub fn adic_chain(ring: &GammaRing, ideal: &Ideal) -> Result<DescendingChain> {
    if ideal.side() != Side::TwoSided {
        return Err(Error::Precondition("adic chains use a two-sided ideal".into()));
    }
    let chain = descending_chain(Subgroup::whole(ring.carrier()), ideal.subgroup().clone(), |prev| {
        Subgroup::generated(
            ring.carrier(),
            prev.elements().iter().flat_map(|&x| {
                ring.gamma()
                    .elements()
                    .flat_map(move |a| ideal.subgroup().elements().iter().map(move |&i| ring.product(x, a, i)))
            }),
        )
    });
    if let Verdict::Fail(w) = check_descending(ring, &chain.chain) {
        return Err(Error::Consistency(format!("adic chain violates product containment: {w}")));
    }
    Ok(chain)
}

/// Iterates `next` from `first` until it repeats.
pub(crate) fn descending_chain(
    whole: Subgroup,
    first: Subgroup,
    next: impl Fn(&Subgroup) -> Subgroup,
) -> DescendingChain {
    let mut chain = vec![whole, first];
    loop {
        let following = next(chain.last().unwrap());
        if &following == chain.last().unwrap() {
            break;
        }
        chain.push(following);
    }
    let stabilization = chain.len() - 1;
    DescendingChain { chain, stabilization }
}

/// Descending containment and `R^i Γ R^j ⊆ R^{i+j}` with indices clamped to the end.
pub fn check_descending(ring: &GammaRing, chain: &[Subgroup]) -> Verdict {
    for (i, pair) in chain.windows(2).enumerate() {
        if let Some(&x) = pair[1].elements().iter().find(|&&x| !pair[0].contains(x)) {
            return Verdict::Fail(Witness::new("descending").with("i", crate::Datum::Index(i)).with("x", ring.elem(x)));
        }
    }
    let n = chain.len() - 1;
    for i in 0..=n {
        for j in 0..=n {
            let target = &chain[(i + j).min(n)];
            for &x in chain[i].elements() {
                for alpha in ring.gamma().elements() {
                    for &y in chain[j].elements() {
                        if !target.contains(ring.product(x, alpha, y)) {
                            return Verdict::Fail(
                                Witness::new("product_containment")
                                    .with("i", crate::Datum::Index(i))
                                    .with("j", crate::Datum::Index(j))
                                    .with("x", ring.elem(x))
                                    .with("alpha", ring.gam(alpha))
                                    .with("y", ring.elem(y)),
                            );
                        }
                    }
                }
            }
        }
    }
    Verdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{check_internal_grading, monomial_grading};
    use crate::group::FiniteAbelianGroup;
    use crate::ring::{check_axioms, polynomial_ring};

    fn z(n: u32) -> GammaRing {
        GammaRing::modular(n).unwrap()
    }

    fn sub(ring: &GammaRing, elems: &[Elem]) -> Subgroup {
        Subgroup::from_elements(ring.carrier(), elems.iter().copied()).unwrap()
    }

    #[test]
    fn z4_filtration() {
        let r = z(4);
        let f = Filtration::new(&r, vec![sub(&r, &[0, 2]), sub(&r, &[0, 1, 2, 3])]).unwrap();
        assert!(check_filtration(&f).is_pass());
        assert!(check_filtration(&Filtration::trivial(&r)).is_pass());
        assert!(matches!(Subgroup::from_elements(r.carrier(), [0, 1]), Err(Error::InvalidSubgroup(_))));

        let gr = associated_graded(&f, &Budget::default()).unwrap();
        assert_eq!((gr.layer_order(0), gr.layer_order(1)), (2, 2));
        let g = gr.graded();
        let two = gr.class_of(0, 2).unwrap();
        assert_ne!(two, 0);
        let one = r.carrier().elements().find(|&a| r.product(1, a, 1) == 1).unwrap();
        assert_eq!(g.ring().product(two, one, two), 0);
        assert!(check_axioms(g.ring(), &Budget::default()).unwrap().is_pass());
        assert!(check_internal_grading(&g.internal()).unwrap().is_pass());
        assert!(gr.resamplings() > 0);
    }

    #[test]
    fn failing_filtrations() {
        let r = z(4);
        let f = Filtration::new(&r, vec![sub(&r, &[0, 2])]).unwrap();
        assert_eq!(check_filtration(&f).witness().unwrap().law, "exhaustive");
        let f = Filtration::new(&r, vec![sub(&r, &[0, 1, 2, 3]), sub(&r, &[0, 2]), sub(&r, &[0, 1, 2, 3])]).unwrap();
        assert_eq!(check_filtration(&f).witness().unwrap().law, "monotone");
        let rc2 = crate::ring::semigroup_gamma_ring(&z(2), &Arc::new(FiniteSemigroup::cyclic(2)), &Budget::default())
            .unwrap();
        let f = Filtration::new(&rc2, vec![sub(&rc2, &[0, 1]), Subgroup::whole(rc2.carrier())]).unwrap();
        let w = check_filtration(&f).witness().cloned().unwrap();
        assert_eq!(w.law, "product_containment");
        assert_eq!(w.get("x"), Some(&crate::Datum::Element(vec![0, 1])));
        assert!(associated_graded(&f, &Budget::default()).is_err());
    }

    #[test]
    fn trivial_filtration_gr() {
        let r = z(4);
        let gr = associated_graded(&Filtration::trivial(&r), &Budget::default()).unwrap();
        assert_eq!(gr.layer_order(0), 4);
        let flat = gr.graded().ring();
        assert!(r.triples().all(|(x, a, y)| flat.product(x, a, y) == r.product(x, a, y)));
        let extended = associated_graded_to(&Filtration::trivial(&r), 2, &Budget::default()).unwrap();
        assert_eq!((extended.layer_order(1), extended.layer_order(2)), (1, 1));
    }

    #[test]
    fn polynomial_filtrations() {
        let budget = Budget::default();
        let p2 = polynomial_ring(&z(2), 2, &budget).unwrap();
        let graded = monomial_grading(&p2).unwrap();
        let f = filtration_from_grading(&graded).unwrap();
        let sizes: Vec<usize> = f.chain().iter().map(|s| s.order()).collect();
        assert_eq!(sizes, vec![2, 4, 8]);
        let gr = associated_graded(&f, &budget).unwrap();
        assert_eq!((0..3).map(|k| gr.layer_order(k)).collect::<Vec<_>>(), vec![2, 2, 2]);
        let map = grading_roundtrip_iso(&graded, &budget).unwrap();
        assert_eq!(map.len(), 8);

        let p3 = polynomial_ring(&z(2), 3, &budget).unwrap();
        let f = filtration_from_grading(&monomial_grading(&p3).unwrap()).unwrap();
        assert_eq!(f.chain().len(), 4);

        let single = GradedGammaRing::trivial(&z(4), Arc::new(FiniteSemigroup::segment(0))).unwrap();
        let f = filtration_from_grading(&single).unwrap();
        assert_eq!(f.chain().len(), 1);
        assert!(f.chain()[0].is_whole());
        assert_eq!(grading_roundtrip_iso(&single, &budget).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn zero_cross_products_roundtrip() {
        let z2 = Arc::new(FiniteAbelianGroup::cyclic(&[2]).unwrap());
        let graded = GradedGammaRing::external(
            Arc::new(FiniteSemigroup::segment(1)),
            z2.clone(),
            vec![z2.clone(), z2],
            |g, a, al, h, b| if g == 0 && h == 0 { a * al * b } else { 0 },
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(grading_roundtrip_iso(&graded, &Budget::default()).unwrap().len(), 4);
    }

    #[test]
    fn non_segment_gradings() {
        let rc2 = crate::grading::graded_semigroup_ring(
            &z(2),
            &Arc::new(FiniteSemigroup::cyclic(2)),
            &Budget::default(),
        )
        .unwrap();
        assert!(matches!(filtration_from_grading(&rc2), Err(Error::Unsupported(_))));
        let seg = GradedGammaRing::external(
            Arc::new(FiniteSemigroup::segment(1)),
            Arc::new(FiniteAbelianGroup::cyclic(&[2]).unwrap()),
            {
                let z2 = Arc::new(FiniteAbelianGroup::cyclic(&[2]).unwrap());
                vec![z2.clone(), z2]
            },
            |_, a, al, _, b| a * al * b,
            &Budget::default(),
        )
        .unwrap();
        assert!(matches!(filtration_from_grading(&seg), Err(Error::Rejected { .. })));
    }

    #[test]
    fn adic_chains() {
        let r = z(4);
        let i = Ideal::new(&r, sub(&r, &[0, 2]), Side::TwoSided).unwrap();
        let c = adic_chain(&r, &i).unwrap();
        let sizes: Vec<usize> = c.chain.iter().map(|s| s.order()).collect();
        assert_eq!(sizes, vec![4, 2, 1]);
        assert_eq!(c.stabilization, 2);

        let zero = Ideal::new(&r, Subgroup::trivial(r.carrier()), Side::TwoSided).unwrap();
        let c = adic_chain(&r, &zero).unwrap();
        assert_eq!(c.chain.len(), 2);
        assert_eq!(c.stabilization, 1);

        let r2 = z(2);
        let whole = Ideal::new(&r2, Subgroup::whole(r2.carrier()), Side::TwoSided).unwrap();
        let c = adic_chain(&r2, &whole).unwrap();
        assert_eq!(c.stabilization, 1);
        assert!(c.chain[1].is_whole());
    }
}
