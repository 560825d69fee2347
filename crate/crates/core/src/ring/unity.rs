use super::GammaRing;
use crate::group::Elem;
use crate::{Error, Result};

/// An element `1` with `aγ₀1 = 1γ₀a = a` for every `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unity {
    pub one: Elem,
    pub gamma0: Elem,
}

impl Unity {
    pub fn holds(&self, ring: &GammaRing) -> bool {
        ring.carrier()
            .elements()
            .all(|a| ring.product(a, self.gamma0, self.one) == a && ring.product(self.one, self.gamma0, a) == a)
    }
}

/// Every `(1, γ₀)` pair satisfying the unity law. For a fixed `γ₀` at most one
/// unity can exist; finding two is reported as a consistency violation.
pub fn find_unities(ring: &GammaRing) -> Result<Vec<Unity>> {
    let mut found = Vec::new();
    for gamma0 in ring.gamma().elements() {
        let mut for_gamma = ring
            .carrier()
            .elements()
            .map(|one| Unity { one, gamma0 })
            .filter(|u| u.holds(ring));
        if let Some(u) = for_gamma.next() {
            if let Some(other) = for_gamma.next() {
                return Err(Error::Consistency(format!(
                    "two unities {} and {} for gamma0 = {}",
                    ring.elem(u.one),
                    ring.elem(other.one),
                    ring.gam(gamma0)
                )));
            }
            found.push(u);
        }
    }
    Ok(found)
}

/// The invertible elements with respect to a unity, `r⁻¹γ₀r = rγ₀r⁻¹ = 1`.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    unity: Unity,
    units: Vec<(Elem, Elem)>,
}

impl UnitGroup {
    pub fn unity(&self) -> Unity {
        self.unity
    }

    /// `(r, r⁻¹)` pairs sorted by `r`.
    pub fn units(&self) -> &[(Elem, Elem)] {
        &self.units
    }

    pub fn inverse(&self, r: Elem) -> Option<Elem> {
        self.units.binary_search_by_key(&r, |&(u, _)| u).ok().map(|i| self.units[i].1)
    }

    pub fn contains(&self, r: Elem) -> bool {
        self.inverse(r).is_some()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }
}

/// Collects all units and verifies they form a group under `mγ₀n`.
pub fn unit_group(ring: &GammaRing, unity: Unity) -> Result<UnitGroup> {
    if !unity.holds(ring) {
        return Err(Error::Precondition("not a unity of this ring".into()));
    }
    let Unity { one, gamma0 } = unity;
    let units: Vec<(Elem, Elem)> = ring
        .carrier()
        .elements()
        .filter_map(|r| {
            ring.carrier()
                .elements()
                .find(|&s| ring.product(r, gamma0, s) == one && ring.product(s, gamma0, r) == one)
                .map(|s| (r, s))
        })
        .collect();
    let group = UnitGroup { unity, units };
    for &(m, _) in &group.units {
        for &(n, _) in &group.units {
            let mn = ring.product(m, gamma0, n);
            if !group.contains(mn) {
                return Err(Error::Consistency(format!(
                    "units not closed: {} γ0 {} = {}",
                    ring.elem(m),
                    ring.elem(n),
                    ring.elem(mn)
                )));
            }
        }
    }
    Ok(group)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::ring::semigroup_gamma_ring;
    use crate::semigroup::FiniteSemigroup;
    use crate::verdict::Budget;

    #[test]
    fn unities_of_small_rings() {
        let z2 = GammaRing::modular(2).unwrap();
        assert_eq!(find_unities(&z2).unwrap(), vec![Unity { one: 1, gamma0: 1 }]);

        let zero = GammaRing::zero_product(z2.carrier().clone(), z2.gamma().clone());
        assert!(find_unities(&zero).unwrap().is_empty());

        let rc2 = semigroup_gamma_ring(&z2, &Arc::new(FiniteSemigroup::cyclic(2)), &Budget::default()).unwrap();
        let e1 = rc2.carrier().index_of(&[1, 0]).unwrap();
        assert_eq!(find_unities(&rc2).unwrap(), vec![Unity { one: e1, gamma0: 1 }]);
    }

    #[test]
    fn unit_groups() {
        let z4 = GammaRing::modular(4).unwrap();
        let u = find_unities(&z4).unwrap();
        // γ0 = 1 gives unity 1, γ0 = 3 gives unity 3
        assert_eq!(u, vec![Unity { one: 1, gamma0: 1 }, Unity { one: 3, gamma0: 3 }]);
        let units = unit_group(&z4, u[0]).unwrap();
        assert_eq!(units.units(), &[(1, 1), (3, 3)]);

        let z2 = GammaRing::modular(2).unwrap();
        assert_eq!(unit_group(&z2, Unity { one: 1, gamma0: 1 }).unwrap().units(), &[(1, 1)]);

        let rc2 = semigroup_gamma_ring(&z2, &Arc::new(FiniteSemigroup::cyclic(2)), &Budget::default()).unwrap();
        let e1 = rc2.carrier().index_of(&[1, 0]).unwrap();
        let g1 = rc2.carrier().index_of(&[0, 1]).unwrap();
        let units = unit_group(&rc2, Unity { one: e1, gamma0: 1 }).unwrap();
        assert_eq!(units.len(), 2);
        assert_eq!(units.inverse(g1), Some(g1));
        assert_eq!(units.inverse(e1), Some(e1));
    }

    #[test]
    fn rejects_non_unity() {
        let g = Arc::new(FiniteAbelianGroup::cyclic(&[2]).unwrap());
        let zero = GammaRing::zero_product(g.clone(), g);
        assert!(unit_group(&zero, Unity { one: 1, gamma0: 1 }).is_err());
    }
}
