//! Γ-modules: the action `R × Γ × M → M`, submodules, quotients, bimodules and
//! finite generation.
//!
//! Right modules store `mγr` under the key `(r, γ, m)` and are checked as left
//! modules over the opposite ring.

mod filtered;
mod graded;

use std::sync::Arc;

pub use filtered::{adic_module_chain, check_filtered_module, gr_module, intersect_chain, FilteredModule, GrModule};
pub use graded::{
    check_graded_module, is_graded_submodule, maximal_graded_submodule, quotient_module, strongly_graded_module_check,
    GradedGammaModule, QuotientModuleReport,
};

use crate::grading::GradedGammaRing;
use crate::group::{Elem, FiniteAbelianGroup, QuotientGroup, Subgroup};
use crate::ring::{self, GammaRing, Unity, DENSE_TABLE_LIMIT};
use crate::verdict::{Datum, Verdict, Witness};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleSide {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct GammaModule {
    ring: GammaRing,
    carrier: Arc<FiniteAbelianGroup>,
    side: ModuleSide,
    table: Arc<Vec<Elem>>,
}

impl GammaModule {
    /// Tabulates the action; `act(r, γ, m)` is `rγm` for left and `mγr` for right modules.
    pub fn from_fn(
        ring: &GammaRing,
        carrier: Arc<FiniteAbelianGroup>,
        side: ModuleSide,
        act: impl Fn(Elem, Elem, Elem) -> Elem,
    ) -> Result<Self> {
        let (nr, ng, nm) = (ring.order(), ring.gamma().order(), carrier.order());
        let needed = nr as u128 * ng as u128 * nm as u128;
        if needed > DENSE_TABLE_LIMIT as u128 {
            return Err(Error::Budget { needed, limit: DENSE_TABLE_LIMIT as u64 });
        }
        let mut table = Vec::with_capacity(needed as usize);
        for r in 0..nr {
            for a in 0..ng {
                for m in 0..nm {
                    let v = act(r, a, m);
                    if v >= nm {
                        let w = Witness::new("action_closure")
                            .with("r", ring.elem(r))
                            .with("alpha", ring.gam(a))
                            .with("m", carrier.render(m));
                        return Err(Error::rejected("module action", w));
                    }
                    table.push(v);
                }
            }
        }
        Ok(GammaModule { ring: ring.clone(), carrier, side, table: Arc::new(table) })
    }

    /// Action given by explicit entries, zero elsewhere.
    pub fn from_entries(
        ring: &GammaRing,
        carrier: Arc<FiniteAbelianGroup>,
        side: ModuleSide,
        entries: &[(Elem, Elem, Elem, Elem)],
    ) -> Result<Self> {
        let (ng, nm) = (ring.gamma().order(), carrier.order());
        let mut map = std::collections::HashMap::new();
        for &(r, a, m, v) in entries {
            if r >= ring.order() || a >= ng || m >= nm {
                return Err(Error::Precondition("action entry outside the ring, gamma or module".into()));
            }
            if map.insert((r, a, m), v).is_some_and(|old| old != v) {
                return Err(Error::Precondition("conflicting action entries".into()));
            }
        }
        Self::from_fn(ring, carrier, side, |r, a, m| map.get(&(r, a, m)).copied().unwrap_or(0))
    }

    /// `rγm = 0` throughout.
    pub fn zero(ring: &GammaRing, carrier: Arc<FiniteAbelianGroup>) -> Result<Self> {
        Self::from_fn(ring, carrier, ModuleSide::Left, |_, _, _| 0)
    }

    /// `R` acting on itself by its product, on the given side.
    pub fn regular(ring: &GammaRing, side: ModuleSide) -> Result<Self> {
        Self::from_fn(ring, ring.carrier().clone(), side, |r, a, m| match side {
            ModuleSide::Left => ring.product(r, a, m),
            ModuleSide::Right => ring.product(m, a, r),
        })
    }

    pub fn ring(&self) -> &GammaRing {
        &self.ring
    }

    pub fn carrier(&self) -> &Arc<FiniteAbelianGroup> {
        &self.carrier
    }

    pub fn side(&self) -> ModuleSide {
        self.side
    }

    pub fn order(&self) -> usize {
        self.carrier.order()
    }

    pub fn act(&self, r: Elem, alpha: Elem, m: Elem) -> Elem {
        let ng = self.ring.gamma().order();
        self.table[(r * ng + alpha) * self.carrier.order() + m]
    }

    /// The ring whose left action this is: `R` or its opposite.
    pub fn scalar_ring(&self) -> GammaRing {
        match self.side {
            ModuleSide::Left => self.ring.clone(),
            ModuleSide::Right => ring::opposite(&self.ring),
        }
    }

    pub fn elem(&self, m: Elem) -> Datum {
        self.carrier.render(m)
    }

    pub fn same_action(&self, other: &GammaModule) -> bool {
        self.carrier == other.carrier && self.side == other.side && self.table == other.table
    }

    /// The submodule `N` as a module of its own, on local indices of `N`.
    pub fn submodule(&self, sub: &Subgroup) -> Result<GammaModule> {
        if let Verdict::Fail(w) = check_submodule(self, sub) {
            return Err(Error::rejected("submodule", w));
        }
        let local = Arc::new(sub.as_group());
        Self::from_fn(&self.ring, local, self.side, |r, a, i| {
            sub.local_index(self.act(r, a, sub.elements()[i])).expect("submodule is closed")
        })
    }

    /// `M/K` with `(r, γ, m + K) ↦ rγm + K`, checked on every representative.
    pub fn quotient(&self, sub: &Subgroup) -> Result<(GammaModule, QuotientGroup)> {
        if let Verdict::Fail(w) = check_submodule(self, sub) {
            return Err(Error::rejected("submodule", w));
        }
        let q = QuotientGroup::new(sub);
        for r in self.ring.carrier().elements() {
            for a in self.ring.gamma().elements() {
                for m in self.carrier.elements() {
                    if q.class(self.act(r, a, m)) != q.class(self.act(r, a, q.reduce(m))) {
                        return Err(Error::Consistency(format!(
                            "quotient action depends on representatives at ({}, {}, {})",
                            self.ring.elem(r),
                            self.ring.gam(a),
                            self.elem(m)
                        )));
                    }
                }
            }
        }
        let module = Self::from_fn(&self.ring, q.group().clone(), self.side, |r, a, c| {
            q.class(self.act(r, a, q.rep(c)))
        })?;
        Ok((module, q))
    }

    /// The same action restricted to scalars from a sub-Γ-ring `S ⊆ R`.
    pub fn restrict_scalars(&self, sub: &Subgroup) -> Result<GammaModule> {
        let ring = self.ring.subring(sub)?;
        Self::from_fn(&ring, self.carrier.clone(), self.side, |r, a, m| self.act(sub.elements()[r], a, m))
    }

    /// A pair `(1, γ0)` with `1γ0m = m` for all `m`, if one exists.
    pub fn unitary(&self) -> Option<Unity> {
        self.ring.carrier().elements().find_map(|r| {
            self.ring
                .gamma()
                .elements()
                .find(|&a| self.carrier.elements().all(|m| self.act(r, a, m) == m))
                .map(|a| Unity { one: r, gamma0: a })
        })
    }
}

pub const MODULE_AXIOMS: [&str; 4] =
    ["module_additivity", "scalar_additivity", "gamma_additivity", "module_associativity"];

/// Axioms (i)–(iv) in order, first witness in lexicographic order.
pub fn check_module_axioms(module: &GammaModule) -> Verdict {
    let ring = module.scalar_ring();
    let m_group = module.carrier();
    let r_group = ring.carrier();
    let gamma = ring.gamma();
    let act = |r, a, m| module.act(r, a, m);
    let rs = || r_group.elements();
    let gs = || gamma.elements();
    let ms = || m_group.elements();
    for r in rs() {
        for a in gs() {
            for m1 in ms() {
                for m2 in ms() {
                    if act(r, a, m_group.add(m1, m2)) != m_group.add(act(r, a, m1), act(r, a, m2)) {
                        return Verdict::Fail(
                            Witness::new(MODULE_AXIOMS[0])
                                .with("r", ring.elem(r))
                                .with("alpha", ring.gam(a))
                                .with("m1", module.elem(m1))
                                .with("m2", module.elem(m2)),
                        );
                    }
                }
            }
        }
    }
    for r1 in rs() {
        for r2 in rs() {
            for a in gs() {
                for m in ms() {
                    if act(r_group.add(r1, r2), a, m) != m_group.add(act(r1, a, m), act(r2, a, m)) {
                        return Verdict::Fail(
                            Witness::new(MODULE_AXIOMS[1])
                                .with("r1", ring.elem(r1))
                                .with("r2", ring.elem(r2))
                                .with("alpha", ring.gam(a))
                                .with("m", module.elem(m)),
                        );
                    }
                }
            }
        }
    }
    for r in rs() {
        for a in gs() {
            for b in gs() {
                for m in ms() {
                    if act(r, gamma.add(a, b), m) != m_group.add(act(r, a, m), act(r, b, m)) {
                        return Verdict::Fail(
                            Witness::new(MODULE_AXIOMS[2])
                                .with("r", ring.elem(r))
                                .with("alpha", ring.gam(a))
                                .with("beta", ring.gam(b))
                                .with("m", module.elem(m)),
                        );
                    }
                }
            }
        }
    }
    for r1 in rs() {
        for a in gs() {
            for r2 in rs() {
                for b in gs() {
                    let left_inner = ring.product(r1, a, r2);
                    for m in ms() {
                        if act(r1, a, act(r2, b, m)) != act(left_inner, b, m) {
                            return Verdict::Fail(
                                Witness::new(MODULE_AXIOMS[3])
                                    .with("r1", ring.elem(r1))
                                    .with("alpha", ring.gam(a))
                                    .with("r2", ring.elem(r2))
                                    .with("beta", ring.gam(b))
                                    .with("m", module.elem(m)),
                            );
                        }
                    }
                }
            }
        }
    }
    Verdict::Pass
}

/// `0γm = r0m = rγ0 = 0`.
pub fn check_module_zero_laws(module: &GammaModule) -> Verdict {
    let ring = module.ring();
    for r in ring.carrier().elements() {
        for a in ring.gamma().elements() {
            for m in module.carrier().elements() {
                let zero_involved = r == 0 || a == 0 || m == 0;
                if zero_involved && module.act(r, a, m) != 0 {
                    return Verdict::Fail(
                        Witness::new("zero_action")
                            .with("r", ring.elem(r))
                            .with("alpha", ring.gam(a))
                            .with("m", module.elem(m)),
                    );
                }
            }
        }
    }
    Verdict::Pass
}

/// `RΓN ⊆ N`.
pub fn check_submodule(module: &GammaModule, sub: &Subgroup) -> Verdict {
    let ring = module.ring();
    if sub.parent() != module.carrier() {
        return Verdict::Fail(Witness::new("subgroup_of_carrier"));
    }
    for r in ring.carrier().elements() {
        for a in ring.gamma().elements() {
            for &m in sub.elements() {
                if !sub.contains(module.act(r, a, m)) {
                    return Verdict::Fail(
                        Witness::new("submodule_closure")
                            .with("r", ring.elem(r))
                            .with("alpha", ring.gam(a))
                            .with("m", module.elem(m)),
                    );
                }
            }
        }
    }
    Verdict::Pass
}

/// The subgroup of sums `r1γ1m1 + … + rkγkmk`, and whether it is all of `M`.
pub fn check_finitely_generated(module: &GammaModule, generators: &[Elem]) -> Result<(Verdict, Subgroup)> {
    if let Some(&g) = generators.iter().find(|&&g| g >= module.order()) {
        return Err(Error::Precondition(format!("generator index {g} outside the module")));
    }
    let ring = module.ring();
    let values = generators.iter().flat_map(|&m| {
        ring.carrier().elements().flat_map(move |r| ring.gamma().elements().map(move |a| module.act(r, a, m)))
    });
    let reached = Subgroup::generated(module.carrier(), values);
    let verdict = match module.carrier().elements().find(|&x| !reached.contains(x)) {
        None => Verdict::Pass,
        Some(x) => Verdict::Fail(Witness::new("finite_generation").with("unreached", module.elem(x))),
    };
    Ok((verdict, reached))
}

/// A left `R`-action and a right `S`-action on one group.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub left: GammaModule,
    pub right: GammaModule,
}

/// Gradings for the triple containment `R_g Γ M_h Γ S_k ⊆ M_{ghk}`.
#[derive(Clone, Copy, Debug)]
pub struct BimoduleGrading<'a> {
    pub left: &'a GradedGammaRing,
    pub components: &'a [Subgroup],
    pub right: &'a GradedGammaRing,
}

/// Both module axiom sets, `(rαm)βs = rα(mβs)`, and the graded containment if given.
pub fn check_bimodule(candidate: &Bimodule, grading: Option<BimoduleGrading<'_>>) -> Result<Verdict> {
    let Bimodule { left, right } = candidate;
    if left.side() != ModuleSide::Left || right.side() != ModuleSide::Right {
        return Err(Error::Precondition("bimodule needs a left and a right action".into()));
    }
    if left.carrier() != right.carrier() {
        return Err(Error::Incompatible("actions live on different groups".into()));
    }
    if left.ring().gamma() != right.ring().gamma() {
        return Err(Error::Incompatible("rings do not share a gamma group".into()));
    }
    for side in [left, right] {
        if let Verdict::Fail(w) = check_module_axioms(side) {
            return Ok(Verdict::Fail(w));
        }
    }
    let (r_ring, s_ring) = (left.ring(), right.ring());
    let gamma = r_ring.gamma();
    for r in r_ring.carrier().elements() {
        for a in gamma.elements() {
            for m in left.carrier().elements() {
                for b in gamma.elements() {
                    for s in s_ring.carrier().elements() {
                        if right.act(s, b, left.act(r, a, m)) != left.act(r, a, right.act(s, b, m)) {
                            return Ok(Verdict::Fail(
                                Witness::new("bimodule_compatibility")
                                    .with("r", r_ring.elem(r))
                                    .with("alpha", r_ring.gam(a))
                                    .with("m", left.elem(m))
                                    .with("beta", s_ring.gam(b))
                                    .with("s", s_ring.elem(s)),
                            ));
                        }
                    }
                }
            }
        }
    }
    if let Some(BimoduleGrading { left: lg, components, right: rg }) = grading {
        let semigroup = lg.semigroup();
        if rg.semigroup() != semigroup || components.len() != semigroup.order() {
            return Err(Error::Incompatible("gradings use different semigroups".into()));
        }
        if lg.ring().carrier() != r_ring.carrier() || rg.ring().carrier() != s_ring.carrier() {
            return Err(Error::Incompatible("gradings do not match the acting rings".into()));
        }
        for g in semigroup.elements() {
            for h in semigroup.elements() {
                for k in semigroup.elements() {
                    let target = &components[semigroup.mul(semigroup.mul(g, h), k)];
                    for &r in lg.component(g).elements() {
                        for &m in components[h].elements() {
                            for &s in rg.component(k).elements() {
                                for a in gamma.elements() {
                                    for b in gamma.elements() {
                                        let v = right.act(s, b, left.act(r, a, m));
                                        if !target.contains(v) {
                                            return Ok(Verdict::Fail(
                                                Witness::new("graded_bimodule_containment")
                                                    .with("g", semigroup.degree(g))
                                                    .with("h", semigroup.degree(h))
                                                    .with("k", semigroup.degree(k))
                                                    .with("r", r_ring.elem(r))
                                                    .with("m", left.elem(m))
                                                    .with("s", s_ring.elem(s)),
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::grading::fixtures::rc2;

    pub fn rc2_module() -> GradedGammaModule {
        GradedGammaModule::regular(&rc2()).unwrap()
    }

    pub fn sub(module: &GammaModule, tuples: &[&[u32]]) -> Subgroup {
        let t: Vec<Vec<u32>> = tuples.iter().map(|t| t.to_vec()).collect();
        Subgroup::from_tuples(module.carrier(), &t).unwrap()
    }
}
