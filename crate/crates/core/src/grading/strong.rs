//! Strongly graded Γ-rings and crossed products.

use super::GradedGammaRing;
use crate::group::{Elem, Subgroup};
use crate::ring::{check_phi_homomorphism, unit_group, Unity};
use crate::verdict::{Verdict, Witness};
use crate::{Error, Result};

/// The subgroup generated by `R_g Γ R_h`.
fn span(graded: &GradedGammaRing, g: usize, h: usize) -> Subgroup {
    let ring = graded.ring();
    let left = graded.component(g).elements();
    let right = graded.component(h).elements();
    let products = left.iter().flat_map(|&x| {
        ring.gamma().elements().flat_map(move |a| right.iter().map(move |&y| ring.product(x, a, y)))
    });
    Subgroup::generated(ring.carrier(), products)
}

/// `R_g Γ R_h = R_{gh}` for every pair, reading the left side as a generated subgroup.
pub fn strongly_graded_check(graded: &GradedGammaRing) -> Verdict {
    let semigroup = graded.semigroup();
    for g in semigroup.elements() {
        for h in semigroup.elements() {
            let gh = semigroup.mul(g, h);
            let generated = span(graded, g, h);
            if &generated != graded.component(gh) {
                let missing = graded.component(gh).elements().iter().find(|&&x| !generated.contains(x));
                let mut w = Witness::new("strong_grading")
                    .with("g", semigroup.degree(g))
                    .with("h", semigroup.degree(h))
                    .with("generated", generated.render());
                if let Some(&x) = missing {
                    w = w.with("missing", graded.ring().elem(x));
                }
                return Verdict::Fail(w);
            }
        }
    }
    Verdict::Pass
}

#[derive(Clone, Debug)]
pub struct StrongCriterion {
    /// `1 ∈ R_g Γ R_{g⁻¹}` for every `g`.
    pub criterion: bool,
    pub strongly_graded: Verdict,
    /// First degree at which the criterion fails.
    pub failing_degree: Option<usize>,
}

/// The unity criterion for strong grading, returned alongside the direct check.
pub fn strong_criterion_unit(graded: &GradedGammaRing, unity: Unity) -> Result<StrongCriterion> {
    let semigroup = graded.semigroup();
    semigroup.require_group("strong grading criterion")?;
    if !unity.holds(graded.ring()) {
        return Err(Error::Precondition("not a unity of this ring".into()));
    }
    let failing_degree =
        semigroup.elements().find(|&g| !span(graded, g, semigroup.inverse(g).unwrap()).contains(unity.one));
    Ok(StrongCriterion {
        criterion: failing_degree.is_none(),
        strongly_graded: strongly_graded_check(graded),
        failing_degree,
    })
}

#[derive(Clone, Debug)]
pub struct CrossedProductReport {
    /// Degrees with a nonzero component.
    pub support: Vec<usize>,
    /// Degrees containing an invertible element.
    pub unit_support: Vec<usize>,
    pub unit_support_is_subgroup: bool,
    pub crossed_product: Verdict,
    pub strongly_graded: Verdict,
}

/// Computes the supports of `R` and of its units and decides whether `R` is a crossed product.
pub fn crossed_product_check(graded: &GradedGammaRing, unity: Unity) -> Result<CrossedProductReport> {
    let semigroup = graded.semigroup();
    semigroup.require_group("crossed product check")?;
    let units = unit_group(graded.ring(), unity)?;
    let support = graded.support();
    let unit_support: Vec<usize> = semigroup
        .elements()
        .filter(|&g| graded.component(g).elements().iter().any(|&x| units.contains(x)))
        .collect();
    let closed = unit_support.iter().all(|&g| {
        unit_support.iter().all(|&h| unit_support.contains(&semigroup.mul(g, h)))
            && unit_support.contains(&semigroup.inverse(g).unwrap())
    });
    if !closed {
        return Err(Error::Consistency("degrees of homogeneous units do not form a subgroup".into()));
    }
    let crossed_product = match semigroup.elements().find(|g| !unit_support.contains(g)) {
        None => Verdict::Pass,
        Some(g) => Verdict::Fail(Witness::new("crossed_product").with("degree", semigroup.degree(g))),
    };
    let strongly_graded = strongly_graded_check(graded);
    if crossed_product.is_pass() && !strongly_graded.is_pass() {
        return Err(Error::Consistency("crossed product that is not strongly graded".into()));
    }
    if strongly_graded.is_pass() && support.len() != semigroup.order() {
        return Err(Error::Consistency("strongly graded ring with proper support".into()));
    }
    Ok(CrossedProductReport {
        support,
        unit_support,
        unit_support_is_subgroup: closed,
        crossed_product,
        strongly_graded,
    })
}

/// For an onto, degree-preserving homomorphism `f` out of a strongly graded ring
/// with unity, checks that the target is strongly graded.
pub fn strong_pushforward_check(
    source: &GradedGammaRing,
    target: &GradedGammaRing,
    f: &[Elem],
    unity: Unity,
) -> Result<Verdict> {
    if source.semigroup() != target.semigroup() {
        return Err(Error::Incompatible("gradings use different semigroups".into()));
    }
    if let Verdict::Fail(w) = check_phi_homomorphism(source.ring(), target.ring(), f, None)? {
        return Err(Error::rejected("homomorphism", w));
    }
    for g in source.semigroup().elements() {
        if let Some(&x) = source.component(g).elements().iter().find(|&&x| !target.component(g).contains(f[x])) {
            let w = Witness::new("degree_preserving")
                .with("degree", source.semigroup().degree(g))
                .with("x", source.ring().elem(x))
                .with("image", target.ring().elem(f[x]));
            return Err(Error::rejected("degree-preserving map", w));
        }
    }
    let mut hit = vec![false; target.ring().order()];
    f.iter().for_each(|&y| hit[y] = true);
    if let Some(y) = hit.iter().position(|&h| !h) {
        let w = Witness::new("surjectivity").with("y", target.ring().elem(y));
        return Err(Error::rejected("surjective map", w));
    }
    if let Verdict::Fail(w) = strongly_graded_check(source) {
        return Err(Error::rejected("strongly graded source", w));
    }
    let image = Unity { one: f[unity.one], gamma0: unity.gamma0 };
    if !unity.holds(source.ring()) || !image.holds(target.ring()) {
        return Err(Error::Precondition("unity is not carried to a unity".into()));
    }
    let verdict = strongly_graded_check(target);
    if !verdict.is_pass() {
        return Err(Error::Consistency("image of a strongly graded ring is not strongly graded".into()));
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{check_internal_grading, product_grading, InternalGrading};
    use super::*;
    use crate::group::Subgroup;
    use crate::ring::{quotient_by_ideal, Ideal, Side};
    use crate::verdict::Datum;

    fn unity_of(graded: &GradedGammaRing, one: &[u32]) -> Unity {
        Unity { one: el(graded.ring(), one), gamma0: 1 }
    }

    #[test]
    fn strong_examples() {
        assert!(strongly_graded_check(&rc2()).is_pass());
        assert!(strongly_graded_check(&rc4()).is_pass());
        let w = strongly_graded_check(&trivial_c2()).witness().cloned().unwrap();
        assert_eq!(w.get("g"), Some(&Datum::Degree("g".into())));
        assert_eq!(w.get("h"), Some(&Datum::Degree("g".into())));
    }

    #[test]
    fn unit_criterion_matches() {
        let c = strong_criterion_unit(&rc2(), unity_of(&rc2(), &[1, 0])).unwrap();
        assert!(c.criterion && c.strongly_graded.is_pass());
        let t = trivial_c2();
        let c = strong_criterion_unit(&t, unity_of(&t, &[1])).unwrap();
        assert!(!c.criterion && !c.strongly_graded.is_pass());
        assert_eq!(c.failing_degree, Some(1));
        let c = strong_criterion_unit(&rc4(), unity_of(&rc4(), &[1, 0, 0, 0])).unwrap();
        assert!(c.criterion && c.strongly_graded.is_pass());
        assert!(strong_criterion_unit(&rc2(), Unity { one: 0, gamma0: 1 }).is_err());
    }

    #[test]
    fn crossed_products() {
        let r = crossed_product_check(&rc2(), unity_of(&rc2(), &[1, 0])).unwrap();
        assert_eq!(r.unit_support, vec![0, 1]);
        assert!(r.crossed_product.is_pass() && r.strongly_graded.is_pass());
        let t = trivial_c2();
        let r = crossed_product_check(&t, unity_of(&t, &[1])).unwrap();
        assert_eq!(r.unit_support, vec![0]);
        assert_eq!(r.support, vec![0]);
        assert!(!r.crossed_product.is_pass());
        let r = crossed_product_check(&rc4(), unity_of(&rc4(), &[1, 0, 0, 0])).unwrap();
        assert_eq!(r.unit_support, vec![0, 1, 2, 3]);
        assert!(r.crossed_product.is_pass());
    }

    #[test]
    fn pushforwards() {
        let rc2 = rc2();
        let unity = unity_of(&rc2, &[1, 0]);
        let id: Vec<Elem> = rc2.ring().carrier().elements().collect();
        assert!(strong_pushforward_check(&rc2, &rc2, &id, unity).unwrap().is_pass());

        let r = rc2.ring();
        let zero = Ideal::new(r, Subgroup::trivial(r.carrier()), Side::TwoSided).unwrap();
        let q = quotient_by_ideal(r, &zero).unwrap();
        let qg = GradedGammaRing::from_internal(InternalGrading {
            ring: q.clone(),
            semigroup: rc2.semigroup().clone(),
            assignment: rc2.components().iter().map(|c| c.image(q.carrier(), |x| x)).collect(),
        })
        .unwrap();
        assert!(strong_pushforward_check(&rc2, &qg, &id, unity).unwrap().is_pass());

        let prod = product_grading(&[rc2.clone(), rc2.clone()]).unwrap();
        assert!(check_internal_grading(&prod.internal()).unwrap().is_pass());
        let second: Vec<Elem> = prod.ring().carrier().elements().map(|x| x % 4).collect();
        let one = el(prod.ring(), &[1, 0, 1, 0]);
        let verdict = strong_pushforward_check(&prod, &rc2, &second, Unity { one, gamma0: 1 }).unwrap();
        assert!(verdict.is_pass());

        let t = trivial_c2();
        let err = strong_pushforward_check(&t, &t, &[0, 1], unity_of(&t, &[1])).unwrap_err();
        assert!(matches!(err, Error::Rejected { .. }));
    }
}
