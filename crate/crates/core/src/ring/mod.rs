//! Gamma rings in the sense of Barnes: an abelian group `R`, an abelian group
//! `Γ` and a tri-additive product `R × Γ × R → R` with `(xαy)βz = xα(yβz)`.

mod constructions;
mod ideal;
mod morphism;
mod unity;

use std::fmt;
use std::sync::Arc;

pub use constructions::{
    direct_product, matrix_gamma_ring, opposite, polynomial_ring, semigroup_gamma_ring, PolynomialGammaRing,
};
pub use ideal::{is_ideal, is_subring, quotient_by_ideal, Ideal, Side};
pub use morphism::{check_automorphism, check_phi_homomorphism};
pub use unity::{find_unities, unit_group, UnitGroup, Unity};

use crate::group::{join_index, split_index, Elem, FiniteAbelianGroup, QuotientGroup, Subgroup, Tuple};
use crate::semigroup::FiniteSemigroup;
use crate::verdict::{Budget, Datum, Verdict, Witness};
use crate::{Error, Result};

/// Largest dense product table (|R|²·|Γ| entries) that is ever materialized.
pub const DENSE_TABLE_LIMIT: usize = 1_000_000;

pub(crate) enum Rule {
    Table(Vec<u32>),
    Zero,
    Modular { n: usize },
    Matrix { k: usize, m: usize, n: usize },
    Product(Vec<GammaRing>),
    Opposite(GammaRing),
    Quotient { of: GammaRing, quotient: QuotientGroup },
    Convolution { base: GammaRing, semigroup: Arc<FiniteSemigroup> },
    Polynomial { base: GammaRing, degree: usize },
    Sub { of: GammaRing, sub: Subgroup },
}

impl Rule {
    fn name(&self) -> &'static str {
        match self {
            Rule::Table(_) => "table",
            Rule::Zero => "zero",
            Rule::Modular { .. } => "modular",
            Rule::Matrix { .. } => "matrix",
            Rule::Product(_) => "product",
            Rule::Opposite(_) => "opposite",
            Rule::Quotient { .. } => "quotient",
            Rule::Convolution { .. } => "semigroup_ring",
            Rule::Polynomial { .. } => "polynomial",
            Rule::Sub { .. } => "subring",
        }
    }
}

#[derive(Clone)]
pub struct GammaRing {
    carrier: Arc<FiniteAbelianGroup>,
    gamma: Arc<FiniteAbelianGroup>,
    rule: Arc<Rule>,
}

impl fmt::Debug for GammaRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaRing")
            .field("carrier_order", &self.carrier.order())
            .field("gamma_order", &self.gamma.order())
            .field("rule", &self.rule.name())
            .finish()
    }
}

impl GammaRing {
    pub(crate) fn with_rule(carrier: Arc<FiniteAbelianGroup>, gamma: Arc<FiniteAbelianGroup>, rule: Rule) -> Self {
        GammaRing { carrier, gamma, rule: Arc::new(rule) }
    }

    /// A dense product table built from `product`; every value must lie in the carrier.
    pub fn from_fn(
        carrier: Arc<FiniteAbelianGroup>,
        gamma: Arc<FiniteAbelianGroup>,
        product: impl Fn(Elem, Elem, Elem) -> Elem,
    ) -> Result<Self> {
        let (n, g) = (carrier.order(), gamma.order());
        let entries = n * n * g;
        if entries > DENSE_TABLE_LIMIT {
            return Err(Error::Budget { needed: entries as u128, limit: DENSE_TABLE_LIMIT as u64 });
        }
        let mut table = Vec::with_capacity(entries);
        for x in 0..n {
            for a in 0..g {
                for y in 0..n {
                    let v = product(x, a, y);
                    if v >= n {
                        return Err(Error::rejected(
                            "product closure",
                            Witness::new("closure")
                                .with("x", carrier.render(x))
                                .with("alpha", gamma.render(a))
                                .with("y", carrier.render(y)),
                        ));
                    }
                    table.push(v as u32);
                }
            }
        }
        Ok(Self::with_rule(carrier, gamma, Rule::Table(table)))
    }

    /// Product given by explicit `(x, γ, y, xγy)` entries; omitted entries are 0.
    pub fn from_entries(
        carrier: Arc<FiniteAbelianGroup>,
        gamma: Arc<FiniteAbelianGroup>,
        entries: &[(Tuple, Tuple, Tuple, Tuple)],
    ) -> Result<Self> {
        let mut table = std::collections::HashMap::new();
        for (x, a, y, v) in entries {
            let key = (carrier.index_of(x)?, gamma.index_of(a)?, carrier.index_of(y)?);
            let v = carrier.index_of(v)?;
            table.insert(key, v);
        }
        Self::from_fn(carrier, gamma, |x, a, y| table.get(&(x, a, y)).copied().unwrap_or(0))
    }

    /// The product that is identically zero.
    pub fn zero_product(carrier: Arc<FiniteAbelianGroup>, gamma: Arc<FiniteAbelianGroup>) -> Self {
        Self::with_rule(carrier, gamma, Rule::Zero)
    }

    /// `Z_n` as a `Z_n`-ring: `xγy` is the integer product mod `n`.
    pub fn modular(n: u32) -> Result<Self> {
        let z = Arc::new(FiniteAbelianGroup::cyclic(&[n])?);
        Ok(Self::with_rule(z.clone(), z, Rule::Modular { n: n as usize }))
    }

    pub fn carrier(&self) -> &Arc<FiniteAbelianGroup> {
        &self.carrier
    }

    pub fn gamma(&self) -> &Arc<FiniteAbelianGroup> {
        &self.gamma
    }

    pub fn order(&self) -> usize {
        self.carrier.order()
    }

    pub fn rule_name(&self) -> &'static str {
        self.rule.name()
    }

    pub fn product(&self, x: Elem, alpha: Elem, y: Elem) -> Elem {
        match &*self.rule {
            Rule::Table(t) => {
                let (n, g) = (self.carrier.order(), self.gamma.order());
                t[(x * g + alpha) * n + y] as usize
            }
            Rule::Zero => 0,
            Rule::Modular { n } => x * alpha % n * y % n,
            Rule::Matrix { k, m, n } => {
                let xs = self.carrier.label(x);
                let al = self.gamma.label(alpha);
                let ys = self.carrier.label(y);
                let (k, m, n) = (*k as u64, *m, *n);
                // xα is m×m, then (xα)y is m×n
                let mut xa = vec![0u64; m * m];
                for i in 0..m {
                    for j in 0..m {
                        xa[i * m + j] = (0..n).map(|l| xs[i * n + l] as u64 * al[l * m + j] as u64).sum::<u64>() % k;
                    }
                }
                let out: Tuple = (0..m * n)
                    .map(|ij| {
                        let (i, j) = (ij / n, ij % n);
                        ((0..m).map(|l| xa[i * m + l] * ys[l * n + j] as u64).sum::<u64>() % k) as u32
                    })
                    .collect();
                self.carrier.index_of(&out).expect("matrix product stays reduced")
            }
            Rule::Product(factors) => {
                let radices: Vec<usize> = factors.iter().map(|f| f.order()).collect();
                let xs = split_index(x, &radices);
                let ys = split_index(y, &radices);
                let out: Vec<Elem> =
                    factors.iter().enumerate().map(|(i, f)| f.product(xs[i], alpha, ys[i])).collect();
                join_index(&out, &radices)
            }
            Rule::Opposite(of) => of.product(y, alpha, x),
            Rule::Quotient { of, quotient } => {
                quotient.class(of.product(quotient.rep(x), alpha, quotient.rep(y)))
            }
            Rule::Convolution { base, semigroup } => {
                let radices = vec![base.order(); semigroup.order()];
                let xs = split_index(x, &radices);
                let ys = split_index(y, &radices);
                let mut out = vec![0; radices.len()];
                for (g, &a) in xs.iter().enumerate().filter(|(_, &a)| a != 0) {
                    for (h, &b) in ys.iter().enumerate().filter(|(_, &b)| b != 0) {
                        let gh = semigroup.mul(g, h);
                        out[gh] = base.carrier.add(out[gh], base.product(a, alpha, b));
                    }
                }
                join_index(&out, &radices)
            }
            Rule::Polynomial { base, degree } => {
                let radices = vec![base.order(); degree + 1];
                let xs = split_index(x, &radices);
                let ys = split_index(y, &radices);
                let mut out = vec![0; radices.len()];
                for (i, &a) in xs.iter().enumerate().filter(|(_, &a)| a != 0) {
                    for (j, &b) in ys.iter().enumerate().take(degree + 1 - i).filter(|(_, &b)| b != 0) {
                        out[i + j] = base.carrier.add(out[i + j], base.product(a, alpha, b));
                    }
                }
                join_index(&out, &radices)
            }
            Rule::Sub { of, sub } => {
                let v = of.product(sub.elements()[x], alpha, sub.elements()[y]);
                sub.local_index(v).expect("sub-gamma-ring closed under products")
            }
        }
    }

    /// Evaluates every product once and stores the result as a dense table.
    pub fn densify(&self) -> Result<GammaRing> {
        if matches!(*self.rule, Rule::Table(_)) {
            return Ok(self.clone());
        }
        Self::from_fn(self.carrier.clone(), self.gamma.clone(), |x, a, y| self.product(x, a, y))
    }

    /// True when both rings have the same carrier, Γ and product on every triple.
    pub fn same_products(&self, other: &GammaRing) -> bool {
        self.carrier == other.carrier
            && self.gamma == other.gamma
            && self.triples().all(|(x, a, y)| self.product(x, a, y) == other.product(x, a, y))
    }

    /// All `(x, γ, y)` in lexicographic order.
    pub fn triples(&self) -> impl Iterator<Item = (Elem, Elem, Elem)> + '_ {
        let (n, g) = (self.carrier.order(), self.gamma.order());
        (0..n).flat_map(move |x| (0..g).flat_map(move |a| (0..n).map(move |y| (x, a, y))))
    }

    /// For rings built as a sub-Γ-ring, the embedding into the parent carrier.
    pub fn embedding(&self) -> Option<(&GammaRing, &[Elem])> {
        match &*self.rule {
            Rule::Sub { of, sub } => Some((of, sub.elements())),
            _ => None,
        }
    }

    pub fn elem(&self, x: Elem) -> Datum {
        self.carrier.render(x)
    }

    pub fn gam(&self, a: Elem) -> Datum {
        self.gamma.render(a)
    }

    /// The sub-Γ-ring carried by `sub`; fails with a witness when `sub` is not
    /// closed under products.
    pub fn subring(&self, sub: &Subgroup) -> Result<GammaRing> {
        if let Verdict::Fail(w) = is_subring(self, sub) {
            return Err(Error::rejected("sub-gamma-ring", w));
        }
        Ok(Self::with_rule(Arc::new(sub.as_group()), self.gamma.clone(), Rule::Sub { of: self.clone(), sub: sub.clone() }))
    }
}

/// Names of the four defining identities, in the order they are checked.
pub const AXIOMS: [&str; 4] =
    ["left_distributivity", "gamma_distributivity", "right_distributivity", "associativity"];

/// Number of primitive comparisons performed by [`check_axioms`].
pub fn axiom_cost(ring: &GammaRing) -> u128 {
    let n = ring.order() as u128;
    let g = ring.gamma.order() as u128;
    2 * n * n * n * g + n * n * g * g + n * n * n * g * g
}

/// Exhaustively checks tri-additivity and the associativity law. On failure the
/// witness is the lexicographically first violating tuple of the first failing law.
pub fn check_axioms(ring: &GammaRing, budget: &Budget) -> Result<Verdict> {
    budget.charge(axiom_cost(ring))?;
    let dense = ring.densify()?;
    let r = &*ring.carrier;
    let gm = &*ring.gamma;
    let (n, g) = (r.order(), gm.order());
    let p = |x, a, y| dense.product(x, a, y);

    for x in 0..n {
        for y in 0..n {
            for a in 0..g {
                for z in 0..n {
                    if p(r.add(x, y), a, z) != r.add(p(x, a, z), p(y, a, z)) {
                        return Ok(Verdict::Fail(
                            Witness::new(AXIOMS[0])
                                .with("x", r.render(x))
                                .with("y", r.render(y))
                                .with("alpha", gm.render(a))
                                .with("z", r.render(z)),
                        ));
                    }
                }
            }
        }
    }
    for x in 0..n {
        for a in 0..g {
            for b in 0..g {
                for z in 0..n {
                    if p(x, gm.add(a, b), z) != r.add(p(x, a, z), p(x, b, z)) {
                        return Ok(Verdict::Fail(
                            Witness::new(AXIOMS[1])
                                .with("x", r.render(x))
                                .with("alpha", gm.render(a))
                                .with("beta", gm.render(b))
                                .with("z", r.render(z)),
                        ));
                    }
                }
            }
        }
    }
    for x in 0..n {
        for a in 0..g {
            for y in 0..n {
                for z in 0..n {
                    if p(x, a, r.add(y, z)) != r.add(p(x, a, y), p(x, a, z)) {
                        return Ok(Verdict::Fail(
                            Witness::new(AXIOMS[2])
                                .with("x", r.render(x))
                                .with("alpha", gm.render(a))
                                .with("y", r.render(y))
                                .with("z", r.render(z)),
                        ));
                    }
                }
            }
        }
    }
    for x in 0..n {
        for a in 0..g {
            for y in 0..n {
                let xay = p(x, a, y);
                for b in 0..g {
                    for z in 0..n {
                        if p(xay, b, z) != p(x, a, p(y, b, z)) {
                            return Ok(Verdict::Fail(
                                Witness::new(AXIOMS[3])
                                    .with("x", r.render(x))
                                    .with("alpha", gm.render(a))
                                    .with("y", r.render(y))
                                    .with("beta", gm.render(b))
                                    .with("z", r.render(z)),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Checks `0γm = r0m = rγ0 = 0` for every input.
pub fn check_zero_laws(ring: &GammaRing) -> Verdict {
    for (x, a, y) in ring.triples() {
        if (x == 0 || a == 0 || y == 0) && ring.product(x, a, y) != 0 {
            return Verdict::Fail(
                Witness::new("zero_absorption")
                    .with("x", ring.elem(x))
                    .with("alpha", ring.gam(a))
                    .with("y", ring.elem(y)),
            );
        }
    }
    Verdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn z2gamma() -> GammaRing {
        GammaRing::modular(2).unwrap()
    }

    #[test]
    fn modular_ring_passes() {
        assert!(check_axioms(&z2gamma(), &Budget::default()).unwrap().is_pass());
        assert!(check_axioms(&GammaRing::modular(4).unwrap(), &Budget::default()).unwrap().is_pass());
    }

    #[test]
    fn flipped_entry_fails_left_distributivity() {
        let z2 = Arc::new(FiniteAbelianGroup::cyclic(&[2]).unwrap());
        let ring = GammaRing::from_fn(z2.clone(), z2, |x, a, y| if (x, a, y) == (0, 1, 1) { 1 } else { x * a * y }).unwrap();
        let v = check_axioms(&ring, &Budget::default()).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.law, "left_distributivity");
        assert_eq!(w.get("x"), Some(&Datum::Element(vec![0])));
        assert_eq!(w.get("y"), Some(&Datum::Element(vec![0])));
        assert_eq!(w.get("alpha"), Some(&Datum::Element(vec![1])));
        assert_eq!(w.get("z"), Some(&Datum::Element(vec![1])));
    }

    #[test]
    fn zero_product_passes() {
        let g = Arc::new(FiniteAbelianGroup::cyclic(&[3, 2]).unwrap());
        let ring = GammaRing::zero_product(g.clone(), g);
        assert!(check_axioms(&ring, &Budget::default()).unwrap().is_pass());
    }

    #[test]
    fn budget_is_enforced() {
        let err = check_axioms(&z2gamma(), &Budget::new(10)).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn closure_violation_is_reported() {
        let z2 = Arc::new(FiniteAbelianGroup::cyclic(&[2]).unwrap());
        assert!(GammaRing::from_fn(z2.clone(), z2, |_, _, _| 5).is_err());
    }

    #[test]
    fn zero_laws_hold_for_modular() {
        assert!(check_zero_laws(&GammaRing::modular(4).unwrap()).is_pass());
    }
}
