//! Regradings, restrictions, coarsenings, the identity component, homogeneous
//! inverses, graded ideals and the opposite/product gradings.

use std::sync::Arc;

use super::{GradedGammaRing, InternalGrading};
use crate::group::{join_index, split_index, Elem, QuotientGroup, Subgroup};
use crate::ring::{self, find_unities, is_subring, quotient_by_ideal, unit_group, Ideal, Side, Unity};
use crate::semigroup::SemigroupMap;
use crate::verdict::{Verdict, Witness};
use crate::{Error, Result};

/// Regrading along an epimorphism `φ: G → H`: `S_h = ⊕_{g ∈ φ⁻¹(h)} R_g`.
pub fn regrade_epimorphism(graded: &GradedGammaRing, phi: &SemigroupMap) -> Result<GradedGammaRing> {
    if **phi.domain() != **graded.semigroup() {
        return Err(Error::Incompatible("epimorphism domain is not the grading semigroup".into()));
    }
    if !phi.is_surjective() {
        return Err(Error::Precondition("semigroup map is not onto".into()));
    }
    let carrier = graded.ring().carrier();
    let assignment = phi
        .codomain()
        .elements()
        .map(|h| {
            Subgroup::generated(
                carrier,
                phi.fiber(h).into_iter().flat_map(|g| graded.component(g).elements().to_vec()),
            )
        })
        .collect();
    GradedGammaRing::from_internal(InternalGrading {
        ring: graded.ring().clone(),
        semigroup: phi.codomain().clone(),
        assignment,
    })
}

/// `R^(H) = ⊕_{h ∈ H} R_h` for a subsemigroup `H`, as a graded sub-Γ-ring.
pub fn restrict_subsemigroup(graded: &GradedGammaRing, subset: &[usize]) -> Result<GradedGammaRing> {
    let (sub_semigroup, members) = graded.semigroup().subsemigroup(subset)?;
    let carrier = graded.ring().carrier();
    let total = Subgroup::generated(
        carrier,
        members.iter().flat_map(|&h| graded.component(h).elements().to_vec()),
    );
    let ring = graded.ring().subring(&total)?;
    let local = ring.carrier().clone();
    let assignment = members
        .iter()
        .map(|&h| total.restrict(graded.component(h), &local))
        .collect::<Result<Vec<_>>>()?;
    GradedGammaRing::from_internal(InternalGrading { ring, semigroup: Arc::new(sub_semigroup), assignment })
}

/// Regrading by `G/N` for a group `G`: `R_{gN} = ⊕_{n ∈ N} R_{gn}`.
pub fn coarsen_by_quotient(graded: &GradedGammaRing, subgroup: &[usize]) -> Result<GradedGammaRing> {
    graded.semigroup().require_group("coarsening by a quotient")?;
    let projection = graded.semigroup().quotient_by_subgroup(subgroup)?;
    regrade_epimorphism(graded, &projection)
}

#[derive(Clone, Debug)]
pub struct IdentityComponentReport {
    /// `R_e` is closed under subtraction and every product.
    pub subring: Verdict,
    /// For each unity of the ring: whether it lies in `R_e`.
    pub unities: Vec<(Unity, Verdict)>,
}

/// Checks that `R_e` is a sub-Γ-ring and that every unity is concentrated in degree `e`.
pub fn identity_component_facts(graded: &GradedGammaRing) -> Result<IdentityComponentReport> {
    let e = graded
        .semigroup()
        .identity()
        .ok_or_else(|| Error::Precondition("grading semigroup has no identity".into()))?;
    let ring = graded.ring();
    let subring = is_subring(ring, graded.component(e));
    let unities = find_unities(ring)?
        .into_iter()
        .map(|u| {
            let stray = graded.decompose(u.one).into_iter().find(|&(g, _)| g != e);
            let verdict = match stray {
                None => Verdict::Pass,
                Some((g, c)) => Verdict::Fail(
                    Witness::new("unity_in_identity_component")
                        .with("one", ring.elem(u.one))
                        .with("degree", graded.semigroup().degree(g))
                        .with("component", ring.elem(c)),
                ),
            };
            (u, verdict)
        })
        .collect();
    Ok(IdentityComponentReport { subring, unities })
}

/// For a homogeneous unit `r` of degree `g` in a group-graded ring, computes
/// `r⁻¹`, checks it is homogeneous, and returns its degree (which must be `g⁻¹`).
pub fn homogeneous_inverse_check(graded: &GradedGammaRing, unity: Unity, r: Elem) -> Result<usize> {
    let semigroup = graded.semigroup();
    semigroup.require_group("homogeneous inverse check")?;
    let ring = graded.ring();
    let g = graded
        .homogeneous_degree(r)
        .ok_or_else(|| Error::Precondition(format!("{} is not homogeneous", ring.elem(r))))?;
    let units = unit_group(ring, unity)?;
    let inv = units
        .inverse(r)
        .ok_or_else(|| Error::Precondition(format!("{} is not invertible", ring.elem(r))))?;
    let degree = graded
        .homogeneous_degree(inv)
        .ok_or_else(|| Error::Consistency(format!("inverse {} is not homogeneous", ring.elem(inv))))?;
    if Some(degree) != semigroup.inverse(g) {
        return Err(Error::Consistency(format!(
            "inverse of a degree-{} unit has degree {}",
            semigroup.label(g),
            semigroup.label(degree)
        )));
    }
    Ok(degree)
}

#[derive(Clone, Debug)]
pub struct GradedIdealReport {
    pub verdict: Verdict,
    /// `I_g = I ∩ R_g`.
    pub pieces: Vec<Subgroup>,
    /// `R/I = ⊕ (R_g + I)/I` when the ideal is graded.
    pub quotient: Option<GradedGammaRing>,
}

/// Decides whether a two-sided ideal is graded and, if so, grades `R/I`.
pub fn graded_ideal_check(graded: &GradedGammaRing, ideal: &Ideal) -> Result<GradedIdealReport> {
    if ideal.side() != Side::TwoSided {
        return Err(Error::Precondition("graded ideals are two-sided".into()));
    }
    let ring = graded.ring();
    let members = ideal.subgroup();
    let pieces: Vec<Subgroup> = graded.components().iter().map(|c| c.intersection(members)).collect();
    let stray = members.elements().iter().find_map(|&x| {
        graded.decompose(x).into_iter().find(|&(_, c)| !members.contains(c)).map(|(g, c)| (x, g, c))
    });
    if let Some((x, g, c)) = stray {
        let w = Witness::new("homogeneous_components")
            .with("x", ring.elem(x))
            .with("degree", graded.semigroup().degree(g))
            .with("component", ring.elem(c));
        return Ok(GradedIdealReport { verdict: Verdict::Fail(w), pieces, quotient: None });
    }
    let q = quotient_by_ideal(ring, ideal)?;
    let classes = QuotientGroup::new(members);
    let assignment: Vec<Subgroup> = graded
        .components()
        .iter()
        .map(|c| c.image(q.carrier(), |x| classes.class(x)))
        .collect();
    for (g, (image, piece)) in assignment.iter().zip(&pieces).enumerate() {
        if image.order() * piece.order() != graded.component(g).order() {
            return Err(Error::Consistency(format!(
                "(R_g + I)/I and R_g/(R_g ∩ I) differ in size at degree {}",
                graded.semigroup().label(g)
            )));
        }
    }
    let quotient =
        GradedGammaRing::from_internal(InternalGrading { ring: q, semigroup: graded.semigroup().clone(), assignment })?;
    Ok(GradedIdealReport { verdict: Verdict::Pass, pieces, quotient: Some(quotient) })
}

/// The opposite ring graded by `(R⁰)_g = R_{g⁻¹}`.
pub fn opposite_grading(graded: &GradedGammaRing) -> Result<GradedGammaRing> {
    let semigroup = graded.semigroup();
    semigroup.require_group("opposite grading")?;
    let assignment = semigroup
        .elements()
        .map(|g| graded.component(semigroup.inverse(g).unwrap()).clone())
        .collect();
    GradedGammaRing::from_internal(InternalGrading {
        ring: ring::opposite(graded.ring()),
        semigroup: semigroup.clone(),
        assignment,
    })
}

/// `(Π R_i)_g = Π (R_i)_g` for rings graded by the same `G` over the same `Γ`.
pub fn product_grading(factors: &[GradedGammaRing]) -> Result<GradedGammaRing> {
    let first = factors.first().ok_or_else(|| Error::Precondition("empty product".into()))?;
    if factors.iter().any(|f| f.semigroup() != first.semigroup()) {
        return Err(Error::Incompatible("factors are graded by different semigroups".into()));
    }
    let rings: Vec<_> = factors.iter().map(|f| f.ring().clone()).collect();
    let product = ring::direct_product(&rings)?;
    let radices: Vec<usize> = rings.iter().map(|r| r.order()).collect();
    let assignment = first
        .semigroup()
        .elements()
        .map(|g| {
            let sizes: Vec<usize> = factors.iter().map(|f| f.component(g).order()).collect();
            let count: usize = sizes.iter().product();
            let elems = (0..count).map(|i| {
                let picks: Vec<Elem> = split_index(i, &sizes)
                    .into_iter()
                    .zip(factors)
                    .map(|(d, f)| f.component(g).elements()[d])
                    .collect();
                join_index(&picks, &radices)
            });
            Subgroup::from_elements(product.carrier(), elems)
        })
        .collect::<Result<Vec<_>>>()?;
    GradedGammaRing::from_internal(InternalGrading { ring: product, semigroup: first.semigroup().clone(), assignment })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{check_internal_grading, graded_semigroup_ring};
    use super::*;
    use crate::semigroup::FiniteSemigroup;
    use crate::verdict::{Budget, Datum};

    #[test]
    fn regrade_examples() {
        let rc4 = rc4();
        let c4 = cyclic(4);
        let c2 = cyclic(2);
        let collapse = SemigroupMap::new(c4.clone(), c2.clone(), vec![0, 1, 0, 1]).unwrap();
        let s = regrade_epimorphism(&rc4, &collapse).unwrap();
        assert!(check_internal_grading(&s.internal()).unwrap().is_pass());
        assert_eq!(s.component(0).order(), 4);

        let rc2 = rc2();
        let id = SemigroupMap::identity(c2.clone());
        assert!(regrade_epimorphism(&rc2, &id).unwrap().same_components(&rc2));

        let one = Arc::new(FiniteSemigroup::trivial());
        let to_one = SemigroupMap::new(c2.clone(), one, vec![0, 0]).unwrap();
        let t = regrade_epimorphism(&rc2, &to_one).unwrap();
        assert!(t.component(0).is_whole());

        let not_onto = SemigroupMap::new(c2.clone(), c2, vec![0, 0]).unwrap();
        assert!(matches!(regrade_epimorphism(&rc2, &not_onto), Err(Error::Precondition(_))));
    }

    #[test]
    fn regrade_composition() {
        let rc4 = rc4();
        let c4 = cyclic(4);
        let c2 = cyclic(2);
        let one = Arc::new(FiniteSemigroup::trivial());
        let phi = SemigroupMap::new(c4, c2.clone(), vec![0, 1, 0, 1]).unwrap();
        let psi = SemigroupMap::new(c2, one, vec![0, 0]).unwrap();
        let direct = regrade_epimorphism(&rc4, &phi.then(&psi).unwrap()).unwrap();
        let stepwise = regrade_epimorphism(&regrade_epimorphism(&rc4, &phi).unwrap(), &psi).unwrap();
        assert!(direct.same_components(&stepwise));
    }

    #[test]
    fn restriction_examples() {
        let rc2 = rc2();
        let re = restrict_subsemigroup(&rc2, &[0]).unwrap();
        assert_eq!(re.ring().order(), 2);
        assert_eq!(re.ring().product(1, 1, 1), 1);
        assert_eq!(re.ring().product(1, 0, 1), 0);

        let rc4 = rc4();
        let half = restrict_subsemigroup(&rc4, &[0, 2]).unwrap();
        assert_eq!(half.ring().order(), 4);
        assert_eq!(half.semigroup().order(), 2);
        assert!(half.semigroup().is_group());

        let all = restrict_subsemigroup(&rc2, &[0, 1]).unwrap();
        assert_eq!(all.ring().order(), 4);
        assert!(matches!(restrict_subsemigroup(&rc4, &[0, 1]), Err(Error::Precondition(_))));
    }

    #[test]
    fn coarsening_examples() {
        let rc4 = rc4();
        let c = coarsen_by_quotient(&rc4, &[0, 2]).unwrap();
        assert_eq!(c.semigroup().order(), 2);
        assert!(c.components().iter().all(|s| s.order() == 4));
        let same = coarsen_by_quotient(&rc4, &[0]).unwrap();
        assert_eq!(same.semigroup().order(), 4);
        assert_eq!(same.components(), rc4.components());
        let triv = coarsen_by_quotient(&rc4, &[0, 1, 2, 3]).unwrap();
        assert!(triv.component(0).is_whole());

        let seg = GradedGammaRing::trivial(&z2(), Arc::new(FiniteSemigroup::segment(1))).unwrap();
        assert!(matches!(coarsen_by_quotient(&seg, &[0]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn identity_component() {
        for graded in [rc2(), trivial_c2(), rc4()] {
            let report = identity_component_facts(&graded).unwrap();
            assert!(report.subring.is_pass());
            assert!(!report.unities.is_empty());
            assert!(report.unities.iter().all(|(_, v)| v.is_pass()));
        }
        let re = restrict_subsemigroup(&rc4(), &[0]).unwrap();
        assert_eq!(re.ring().order(), 2);
    }

    #[test]
    fn homogeneous_inverses() {
        let rc2 = rc2();
        let r = rc2.ring().clone();
        let unity = Unity { one: el(&r, &[1, 0]), gamma0: 1 };
        assert_eq!(homogeneous_inverse_check(&rc2, unity, el(&r, &[0, 1])).unwrap(), 1);
        assert_eq!(homogeneous_inverse_check(&rc2, unity, el(&r, &[1, 0])).unwrap(), 0);

        let rc4 = rc4();
        let r = rc4.ring().clone();
        let unity = Unity { one: el(&r, &[1, 0, 0, 0]), gamma0: 1 };
        assert_eq!(homogeneous_inverse_check(&rc4, unity, el(&r, &[0, 1, 0, 0])).unwrap(), 3);
        assert!(matches!(
            homogeneous_inverse_check(&rc4, unity, el(&r, &[1, 1, 0, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn graded_ideals() {
        let rc2 = rc2();
        let r = rc2.ring().clone();
        let i = Subgroup::from_tuples(r.carrier(), &[vec![0, 0], vec![1, 1]]).unwrap();
        let report = graded_ideal_check(&rc2, &Ideal::new(&r, i, Side::TwoSided).unwrap()).unwrap();
        let w = report.verdict.witness().unwrap();
        assert_eq!(w.get("component"), Some(&Datum::Element(vec![1, 0])));
        assert!(report.quotient.is_none());

        let zero = Ideal::new(&r, Subgroup::trivial(r.carrier()), Side::TwoSided).unwrap();
        let report = graded_ideal_check(&rc2, &zero).unwrap();
        let q = report.quotient.unwrap();
        assert_eq!(q.ring().order(), 4);
        assert!(check_internal_grading(&q.internal()).unwrap().is_pass());

        let prod = product_grading(&[rc2.clone(), rc2.clone()]).unwrap();
        let p = prod.ring().clone();
        let first = Subgroup::from_elements(p.carrier(), (0..4).map(|a| a * 4)).unwrap();
        let report = graded_ideal_check(&prod, &Ideal::new(&p, first, Side::TwoSided).unwrap()).unwrap();
        assert!(report.verdict.is_pass());
        let q = report.quotient.unwrap();
        assert_eq!(q.ring().order(), 4);
        assert!(q.components().iter().all(|c| c.order() == 2));
    }

    #[test]
    fn derived_gradings() {
        let op = opposite_grading(&rc2()).unwrap();
        assert!(check_internal_grading(&op.internal()).unwrap().is_pass());
        let rc4 = rc4();
        let op4 = opposite_grading(&rc4).unwrap();
        assert_eq!(op4.component(1), rc4.component(3));
        assert!(check_internal_grading(&op4.internal()).unwrap().is_pass());

        let prod = product_grading(&[rc2(), rc2()]).unwrap();
        assert!(check_internal_grading(&prod.internal()).unwrap().is_pass());
        let r = prod.ring().clone();
        // ((1e),(1g)) splits into degree e and degree g parts
        let x = el(&r, &[1, 0, 0, 1]);
        assert_eq!(prod.decompose(x), vec![(0, el(&r, &[1, 0, 0, 0])), (1, el(&r, &[0, 0, 0, 1]))]);

        let c4ring = graded_semigroup_ring(&z2(), &cyclic(4), &Budget::default()).unwrap();
        assert!(matches!(product_grading(&[rc2(), c4ring]), Err(Error::Incompatible(_))));
    }
}
