//! Graded Γ-rings of type `G`: `R = ⊕ R_g` with `R_g Γ R_h ⊆ R_{gh}`.
//!
//! A [`GradedGammaRing`] always carries a verified internal grading of a flat
//! ring together with the coordinate table of the direct sum. Externally given
//! gradings (component groups plus per-degree products) are flattened by
//! [`GradedGammaRing::external`]; [`GradedGammaRing::internal`] goes back.

mod strong;
mod structure;

use std::sync::Arc;

pub use strong::{
    crossed_product_check, strong_criterion_unit, strong_pushforward_check, strongly_graded_check,
    CrossedProductReport, StrongCriterion,
};
pub use structure::{
    coarsen_by_quotient, graded_ideal_check, homogeneous_inverse_check, identity_component_facts,
    opposite_grading, product_grading, regrade_epimorphism, restrict_subsemigroup, GradedIdealReport,
    IdentityComponentReport,
};

use crate::group::{join_index, Elem, FiniteAbelianGroup, Subgroup};
use crate::ring::{self, check_axioms, GammaRing, PolynomialGammaRing};
use crate::semigroup::FiniteSemigroup;
use crate::verdict::{Budget, Datum, Verdict, Witness};
use crate::{Error, Result};

/// A candidate grading: one subgroup of the carrier per element of `G`.
#[derive(Clone, Debug)]
pub struct InternalGrading {
    pub ring: GammaRing,
    pub semigroup: Arc<FiniteSemigroup>,
    pub assignment: Vec<Subgroup>,
}

/// Coordinates of every carrier element in a direct sum of subgroups, or the
/// reason the sum is not direct.
pub(crate) fn direct_sum_coordinates(
    carrier: &Arc<FiniteAbelianGroup>,
    parts: &[Subgroup],
    degree: impl Fn(usize) -> Datum,
) -> std::result::Result<Vec<Elem>, Witness> {
    for (i, a) in parts.iter().enumerate() {
        for (j, b) in parts.iter().enumerate().skip(i + 1) {
            if let Some(&x) = a.intersection(b).elements().iter().find(|&&x| x != 0) {
                return Err(Witness::new("direct_sum_intersection")
                    .with("g", degree(i))
                    .with("h", degree(j))
                    .with("x", carrier.render(x)));
            }
        }
    }
    let sizes: Vec<usize> = parts.iter().map(|p| p.order()).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    if total != Some(carrier.order()) {
        return Err(Witness::new("direct_sum_cardinality")
            .with("product_of_orders", Datum::Index(total.unwrap_or(usize::MAX)))
            .with("carrier_order", Datum::Index(carrier.order())));
    }
    let k = parts.len();
    let mut coords = vec![usize::MAX; carrier.order() * k];
    for combo in 0..carrier.order() {
        let digits = crate::group::split_index(combo, &sizes);
        let picks: Vec<Elem> = digits.iter().zip(parts).map(|(&d, p)| p.elements()[d]).collect();
        let x = carrier.sum(picks.iter().copied());
        if coords[x * k] != usize::MAX {
            return Err(Witness::new("direct_sum_independence").with("x", carrier.render(x)));
        }
        coords[x * k..(x + 1) * k].copy_from_slice(&picks);
    }
    Ok(coords)
}

/// Checks that the assignment is an internal direct sum and that
/// `R_g Γ R_h ⊆ R_{gh}` for all degrees.
pub fn check_internal_grading(candidate: &InternalGrading) -> Result<Verdict> {
    let InternalGrading { ring, semigroup, assignment } = candidate;
    semigroup.require_abelian()?;
    if assignment.len() != semigroup.order() {
        return Err(Error::Precondition("one subgroup per semigroup element is required".into()));
    }
    if assignment.iter().any(|s| s.parent() != ring.carrier()) {
        return Err(Error::Incompatible("assigned subgroup does not live in the ring carrier".into()));
    }
    if let Err(w) = direct_sum_coordinates(ring.carrier(), assignment, |g| semigroup.degree(g)) {
        return Ok(Verdict::Fail(w));
    }
    Ok(containment_witness(ring, semigroup, assignment).into())
}

fn containment_witness(ring: &GammaRing, semigroup: &FiniteSemigroup, parts: &[Subgroup]) -> Option<Witness> {
    for g in semigroup.elements() {
        for h in semigroup.elements() {
            let target = &parts[semigroup.mul(g, h)];
            for &x in parts[g].elements() {
                for a in ring.gamma().elements() {
                    for &y in parts[h].elements() {
                        if !target.contains(ring.product(x, a, y)) {
                            return Some(
                                Witness::new("graded_containment")
                                    .with("g", semigroup.degree(g))
                                    .with("h", semigroup.degree(h))
                                    .with("x", ring.elem(x))
                                    .with("alpha", ring.gam(a))
                                    .with("y", ring.elem(y)),
                            );
                        }
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct GradedGammaRing {
    ring: GammaRing,
    semigroup: Arc<FiniteSemigroup>,
    components: Vec<Subgroup>,
    coords: Arc<Vec<Elem>>,
}

impl GradedGammaRing {
    /// Validates an internal grading.
    pub fn from_internal(candidate: InternalGrading) -> Result<Self> {
        if let Verdict::Fail(w) = check_internal_grading(&candidate)? {
            return Err(Error::rejected("grading", w));
        }
        let InternalGrading { ring, semigroup, assignment } = candidate;
        let coords = direct_sum_coordinates(ring.carrier(), &assignment, |g| semigroup.degree(g))
            .expect("direct sum verified");
        Ok(GradedGammaRing { ring, semigroup, components: assignment, coords: Arc::new(coords) })
    }

    /// Flattens an external grading: component groups `R_g` and products
    /// `piece(g, a, γ, h, b) ∈ R_{gh}` for `a ∈ R_g`, `b ∈ R_h`. The flat
    /// carrier is `Π R_g` in label order of `G`; the flat product is checked
    /// against the Γ-ring axioms.
    pub fn external(
        semigroup: Arc<FiniteSemigroup>,
        gamma: Arc<FiniteAbelianGroup>,
        components: Vec<Arc<FiniteAbelianGroup>>,
        piece: impl Fn(usize, Elem, Elem, usize, Elem) -> Elem,
        budget: &Budget,
    ) -> Result<Self> {
        semigroup.require_abelian()?;
        if components.len() != semigroup.order() {
            return Err(Error::Precondition("one component group per semigroup element is required".into()));
        }
        let refs: Vec<&FiniteAbelianGroup> = components.iter().map(|c| &**c).collect();
        let carrier = Arc::new(FiniteAbelianGroup::direct_product(&refs)?);
        let radices: Vec<usize> = components.iter().map(|c| c.order()).collect();
        let k = semigroup.order();
        for g in 0..k {
            for h in 0..k {
                let gh = semigroup.mul(g, h);
                for a in components[g].elements() {
                    for al in gamma.elements() {
                        for b in components[h].elements() {
                            if piece(g, a, al, h, b) >= components[gh].order() {
                                let w = Witness::new("component_closure")
                                    .with("g", semigroup.degree(g))
                                    .with("h", semigroup.degree(h))
                                    .with("x", components[g].render(a))
                                    .with("alpha", gamma.render(al))
                                    .with("y", components[h].render(b));
                                return Err(Error::rejected("graded product", w));
                            }
                        }
                    }
                }
            }
        }
        let ring = GammaRing::from_fn(carrier.clone(), gamma, |x, al, y| {
            let xs = crate::group::split_index(x, &radices);
            let ys = crate::group::split_index(y, &radices);
            let mut out = vec![0; k];
            for g in (0..k).filter(|&g| xs[g] != 0) {
                for h in (0..k).filter(|&h| ys[h] != 0) {
                    let gh = semigroup.mul(g, h);
                    out[gh] = components[gh].add(out[gh], piece(g, xs[g], al, h, ys[h]));
                }
            }
            join_index(&out, &radices)
        })?;
        if let Verdict::Fail(w) = check_axioms(&ring, budget)? {
            return Err(Error::rejected("flattened graded ring", w));
        }
        let assignment = coordinate_subgroups(&carrier, &radices);
        Self::from_internal(InternalGrading { ring, semigroup, assignment })
    }

    /// `R_e = R`, every other component zero.
    pub fn trivial(ring: &GammaRing, semigroup: Arc<FiniteSemigroup>) -> Result<Self> {
        let e = semigroup
            .identity()
            .ok_or_else(|| Error::Precondition("trivial grading needs a semigroup with identity".into()))?;
        let assignment = semigroup
            .elements()
            .map(|g| if g == e { Subgroup::whole(ring.carrier()) } else { Subgroup::trivial(ring.carrier()) })
            .collect();
        Self::from_internal(InternalGrading { ring: ring.clone(), semigroup, assignment })
    }

    pub fn ring(&self) -> &GammaRing {
        &self.ring
    }

    pub fn semigroup(&self) -> &Arc<FiniteSemigroup> {
        &self.semigroup
    }

    pub fn components(&self) -> &[Subgroup] {
        &self.components
    }

    pub fn component(&self, g: usize) -> &Subgroup {
        &self.components[g]
    }

    pub fn internal(&self) -> InternalGrading {
        InternalGrading {
            ring: self.ring.clone(),
            semigroup: self.semigroup.clone(),
            assignment: self.components.clone(),
        }
    }

    /// The component `R_g` as a group of its own (external view).
    pub fn component_group(&self, g: usize) -> FiniteAbelianGroup {
        self.components[g].as_group()
    }

    /// Per-degree product in local indices of the component groups.
    pub fn piece_product(&self, g: usize, a: Elem, alpha: Elem, h: usize, b: Elem) -> Elem {
        let x = self.components[g].elements()[a];
        let y = self.components[h].elements()[b];
        let gh = self.semigroup.mul(g, h);
        self.components[gh]
            .local_index(self.ring.product(x, alpha, y))
            .expect("graded product lands in R_gh")
    }

    /// Homogeneous component of `x` in degree `g`.
    pub fn coordinate(&self, x: Elem, g: usize) -> Elem {
        self.coords[x * self.semigroup.order() + g]
    }

    /// Nonzero homogeneous components of `x`, by degree.
    pub fn decompose(&self, x: Elem) -> Vec<(usize, Elem)> {
        self.semigroup
            .elements()
            .map(|g| (g, self.coordinate(x, g)))
            .filter(|&(_, c)| c != 0)
            .collect()
    }

    pub fn flatten(&self, parts: &[(usize, Elem)]) -> Result<Elem> {
        for &(g, c) in parts {
            if g >= self.semigroup.order() || !self.components[g].contains(c) {
                return Err(Error::Precondition("component is not homogeneous of its degree".into()));
            }
        }
        Ok(self.ring.carrier().sum(parts.iter().map(|&(_, c)| c)))
    }

    /// Degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, x: Elem) -> Option<usize> {
        match self.decompose(x).as_slice() {
            [(g, _)] => Some(*g),
            _ => None,
        }
    }

    /// `G_R`, the degrees with a nonzero component.
    pub fn support(&self) -> Vec<usize> {
        self.semigroup.elements().filter(|&g| !self.components[g].is_trivial()).collect()
    }

    pub fn same_components(&self, other: &GradedGammaRing) -> bool {
        self.semigroup == other.semigroup && self.components == other.components
    }

    pub fn render_decomposition(&self, x: Elem) -> Vec<(String, Datum)> {
        self.decompose(x)
            .into_iter()
            .map(|(g, c)| (self.semigroup.label(g).to_string(), self.ring.elem(c)))
            .collect()
    }
}

/// For a carrier `Π G_i`, the subgroups `0 × .. × G_i × .. × 0`.
pub(crate) fn coordinate_subgroups(carrier: &Arc<FiniteAbelianGroup>, radices: &[usize]) -> Vec<Subgroup> {
    (0..radices.len())
        .map(|i| {
            let elems = (0..radices[i]).map(|b| {
                let mut digits = vec![0; radices.len()];
                digits[i] = b;
                join_index(&digits, radices)
            });
            Subgroup::from_elements(carrier, elems).expect("coordinate subgroup")
        })
        .collect()
}

/// `RG` with its canonical grading `(RG)_g = R·g`.
pub fn graded_semigroup_ring(base: &GammaRing, semigroup: &Arc<FiniteSemigroup>, budget: &Budget) -> Result<GradedGammaRing> {
    let ring = ring::semigroup_gamma_ring(base, semigroup, budget)?;
    let radices = vec![base.order(); semigroup.order()];
    let assignment = coordinate_subgroups(ring.carrier(), &radices);
    GradedGammaRing::from_internal(InternalGrading { ring, semigroup: semigroup.clone(), assignment })
}

/// The truncated polynomial ring graded by monomial degree over `{0..D}`.
pub fn monomial_grading(poly: &PolynomialGammaRing) -> Result<GradedGammaRing> {
    let radices = vec![poly.base().order(); poly.degree() + 1];
    let assignment = coordinate_subgroups(poly.ring().carrier(), &radices);
    GradedGammaRing::from_internal(InternalGrading {
        ring: poly.ring().clone(),
        semigroup: Arc::new(FiniteSemigroup::segment(poly.degree())),
        assignment,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn z2() -> GammaRing {
        GammaRing::modular(2).unwrap()
    }

    pub fn cyclic(n: usize) -> Arc<FiniteSemigroup> {
        Arc::new(FiniteSemigroup::cyclic(n))
    }

    pub fn rc2() -> GradedGammaRing {
        graded_semigroup_ring(&z2(), &cyclic(2), &Budget::default()).unwrap()
    }

    pub fn rc4() -> GradedGammaRing {
        graded_semigroup_ring(&z2(), &cyclic(4), &Budget::default()).unwrap()
    }

    pub fn trivial_c2() -> GradedGammaRing {
        GradedGammaRing::trivial(&z2(), cyclic(2)).unwrap()
    }

    pub fn el(ring: &GammaRing, t: &[u32]) -> Elem {
        ring.carrier().index_of(t).unwrap()
    }
}
