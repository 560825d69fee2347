use std::sync::Arc;

use super::{GammaRing, Rule};
use crate::group::{QuotientGroup, Subgroup};
use crate::verdict::{Verdict, Witness};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

/// An additive subgroup absorbing products from the declared side(s).
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: GammaRing,
    subgroup: Subgroup,
    side: Side,
}

impl Ideal {
    pub fn new(ring: &GammaRing, subgroup: Subgroup, side: Side) -> Result<Self> {
        if subgroup.parent() != ring.carrier() {
            return Err(Error::Incompatible("ideal is not a subgroup of the ring carrier".into()));
        }
        if let Verdict::Fail(w) = is_ideal(ring, &subgroup, side) {
            return Err(Error::rejected("ideal", w));
        }
        Ok(Ideal { ring: ring.clone(), subgroup, side })
    }

    pub fn ring(&self) -> &GammaRing {
        &self.ring
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn side(&self) -> Side {
        self.side
    }
}

/// Checks `RΓI ⊆ I` (left) and/or `IΓR ⊆ I` (right) exhaustively.
pub fn is_ideal(ring: &GammaRing, subgroup: &Subgroup, side: Side) -> Verdict {
    let n = ring.order();
    let g = ring.gamma().order();
    if matches!(side, Side::Left | Side::TwoSided) {
        for r in 0..n {
            for a in 0..g {
                for &x in subgroup.elements() {
                    if !subgroup.contains(ring.product(r, a, x)) {
                        return Verdict::Fail(
                            Witness::new("left_absorption")
                                .with("r", ring.elem(r))
                                .with("alpha", ring.gam(a))
                                .with("a", ring.elem(x)),
                        );
                    }
                }
            }
        }
    }
    if matches!(side, Side::Right | Side::TwoSided) {
        for &x in subgroup.elements() {
            for a in 0..g {
                for r in 0..n {
                    if !subgroup.contains(ring.product(x, a, r)) {
                        return Verdict::Fail(
                            Witness::new("right_absorption")
                                .with("a", ring.elem(x))
                                .with("alpha", ring.gam(a))
                                .with("r", ring.elem(r)),
                        );
                    }
                }
            }
        }
    }
    Verdict::Pass
}

/// A subgroup is a sub-Γ-ring when it is closed under every product.
pub fn is_subring(ring: &GammaRing, subgroup: &Subgroup) -> Verdict {
    for &x in subgroup.elements() {
        for a in ring.gamma().elements() {
            for &y in subgroup.elements() {
                if !subgroup.contains(ring.product(x, a, y)) {
                    return Verdict::Fail(
                        Witness::new("product_closure")
                            .with("x", ring.elem(x))
                            .with("alpha", ring.gam(a))
                            .with("y", ring.elem(y)),
                    );
                }
            }
        }
    }
    Verdict::Pass
}

/// `R/I` on canonical coset representatives with `(x+I)γ(y+I) = xγy + I`.
pub fn quotient_by_ideal(ring: &GammaRing, ideal: &Ideal) -> Result<GammaRing> {
    if let Verdict::Fail(w) = is_ideal(ring, ideal.subgroup(), Side::TwoSided) {
        return Err(Error::rejected("two-sided ideal", w));
    }
    let quotient = QuotientGroup::new(ideal.subgroup());
    for (x, a, y) in ring.triples() {
        let direct = quotient.class(ring.product(x, a, y));
        let via_reps = quotient.class(ring.product(quotient.reduce(x), a, quotient.reduce(y)));
        if direct != via_reps {
            return Err(Error::Consistency(format!(
                "quotient product depends on representatives at ({}, {}, {})",
                ring.elem(x),
                ring.gam(a),
                ring.elem(y)
            )));
        }
    }
    let carrier: Arc<_> = quotient.group().clone();
    Ok(GammaRing::with_rule(carrier, ring.gamma().clone(), Rule::Quotient { of: ring.clone(), quotient }))
}
