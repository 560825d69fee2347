use std::sync::Arc;

use super::{GammaRing, Rule};
use crate::group::FiniteAbelianGroup;
use crate::semigroup::FiniteSemigroup;
use crate::verdict::Budget;
use crate::{Error, Result};

fn power_order(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// `m×n` matrices over `Z_k` as a Γ-ring with `Γ` the `n×m` matrices over `Z_k`.
pub fn matrix_gamma_ring(k: u32, m: usize, n: usize, budget: &Budget) -> Result<GammaRing> {
    if k == 0 || m == 0 || n == 0 {
        return Err(Error::Precondition("matrix ring needs k, m, n >= 1".into()));
    }
    budget.charge(power_order(k as usize, m * n))?;
    let carrier = Arc::new(FiniteAbelianGroup::cyclic(&vec![k; m * n])?);
    let gamma = Arc::new(FiniteAbelianGroup::cyclic(&vec![k; n * m])?);
    Ok(GammaRing::with_rule(carrier, gamma, Rule::Matrix { k: k as usize, m, n }))
}

/// Componentwise product `(r_i)γ(s_i) = (r_i γ s_i)` of rings over a common Γ.
pub fn direct_product(factors: &[GammaRing]) -> Result<GammaRing> {
    let first = factors.first().ok_or_else(|| Error::Precondition("empty direct product".into()))?;
    if let Some(i) = factors.iter().position(|f| f.gamma != first.gamma) {
        return Err(Error::Incompatible(format!("factor {i} has a different gamma group")));
    }
    let carriers: Vec<&FiniteAbelianGroup> = factors.iter().map(|f| &*f.carrier).collect();
    let carrier = Arc::new(FiniteAbelianGroup::direct_product(&carriers)?);
    Ok(GammaRing::with_rule(carrier, first.gamma.clone(), Rule::Product(factors.to_vec())))
}

/// Same groups, product `x∘γ∘y = yγx`.
pub fn opposite(ring: &GammaRing) -> GammaRing {
    GammaRing::with_rule(ring.carrier.clone(), ring.gamma.clone(), Rule::Opposite(ring.clone()))
}

/// `RG`: functions `G → R` with the convolution `αγβ = Σ (a_g γ b_h) gh`.
///
/// The carrier tuple concatenates the coefficient tuples in the label order of `G`.
pub fn semigroup_gamma_ring(base: &GammaRing, semigroup: &Arc<FiniteSemigroup>, budget: &Budget) -> Result<GammaRing> {
    semigroup.require_abelian()?;
    budget.charge(power_order(base.order(), semigroup.order()))?;
    let factors = vec![&*base.carrier; semigroup.order()];
    let carrier = Arc::new(FiniteAbelianGroup::direct_product(&factors)?);
    Ok(GammaRing::with_rule(
        carrier,
        base.gamma.clone(),
        Rule::Convolution { base: base.clone(), semigroup: semigroup.clone() },
    ))
}

/// Polynomials of degree at most `D` with the Cauchy product truncated above `D`.
#[derive(Clone, Debug)]
pub struct PolynomialGammaRing {
    ring: GammaRing,
    base: GammaRing,
    degree: usize,
}

impl PolynomialGammaRing {
    pub fn ring(&self) -> &GammaRing {
        &self.ring
    }

    pub fn base(&self) -> &GammaRing {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Element with the given coefficients `(a_0, ..., a_D)` (base indices).
    pub fn from_coefficients(&self, coeffs: &[usize]) -> Result<usize> {
        if coeffs.len() != self.degree + 1 || coeffs.iter().any(|&c| c >= self.base.order()) {
            return Err(Error::Precondition("coefficient list does not match the ring".into()));
        }
        Ok(crate::group::join_index(coeffs, &vec![self.base.order(); self.degree + 1]))
    }

    pub fn coefficients(&self, p: usize) -> Vec<usize> {
        crate::group::split_index(p, &vec![self.base.order(); self.degree + 1])
    }
}

pub fn polynomial_ring(base: &GammaRing, degree: usize, budget: &Budget) -> Result<PolynomialGammaRing> {
    budget.charge(power_order(base.order(), degree + 1))?;
    let factors = vec![&*base.carrier; degree + 1];
    let carrier = Arc::new(FiniteAbelianGroup::direct_product(&factors)?);
    let ring = GammaRing::with_rule(carrier, base.gamma.clone(), Rule::Polynomial { base: base.clone(), degree });
    Ok(PolynomialGammaRing { ring, base: base.clone(), degree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::check_axioms;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn matrix_ring_sizes_and_product() {
        let m = matrix_gamma_ring(2, 1, 2, &budget()).unwrap();
        assert_eq!(m.order(), 4);
        assert_eq!(m.gamma().order(), 4);
        let x = m.carrier().index_of(&[1, 0]).unwrap();
        let a = m.gamma().index_of(&[1, 1]).unwrap();
        let y = m.carrier().index_of(&[1, 1]).unwrap();
        assert_eq!(m.carrier().label(m.product(x, a, y)), vec![1, 1]);
        assert!(check_axioms(&m, &budget()).unwrap().is_pass());
    }

    #[test]
    fn matrix_budget() {
        assert!(matches!(matrix_gamma_ring(2, 3, 3, &Budget::new(100)), Err(Error::Budget { .. })));
    }

    #[test]
    fn larger_matrix_rings_pass() {
        for (k, m, n) in [(2, 2, 1), (3, 1, 2), (2, 2, 2)] {
            let ring = matrix_gamma_ring(k, m, n, &budget()).unwrap();
            assert!(check_axioms(&ring, &Budget::unlimited()).unwrap().is_pass(), "{k} {m} {n}");
        }
    }

    #[test]
    fn opposite_matrix_differs() {
        let m = matrix_gamma_ring(2, 1, 2, &budget()).unwrap();
        let op = opposite(&m);
        let x = m.carrier().index_of(&[1, 0]).unwrap();
        let a = m.gamma().index_of(&[0, 1]).unwrap();
        let y = m.carrier().index_of(&[0, 1]).unwrap();
        assert_ne!(m.product(x, a, y), op.product(x, a, y));
        assert_eq!(m.carrier().label(op.product(x, a, y)), vec![1, 0]);
        assert!(opposite(&op).same_products(&m));
        assert!(check_axioms(&op, &budget()).unwrap().is_pass());
    }

    #[test]
    fn direct_products() {
        let z2 = GammaRing::modular(2).unwrap();
        let p = direct_product(&[z2.clone(), z2.clone()]).unwrap();
        let x = p.carrier().index_of(&[1, 0]).unwrap();
        let y = p.carrier().index_of(&[1, 1]).unwrap();
        assert_eq!(p.carrier().label(p.product(x, 1, y)), vec![1, 0]);
        assert!(check_axioms(&p, &budget()).unwrap().is_pass());
        assert!(direct_product(std::slice::from_ref(&z2)).unwrap().same_products(&z2));
        let z4 = GammaRing::modular(4).unwrap();
        assert!(matches!(direct_product(&[z2, z4]), Err(Error::Incompatible(_))));
        assert!(direct_product(&[]).is_err());
    }

    #[test]
    fn group_ring_c2() {
        let z2 = GammaRing::modular(2).unwrap();
        let c2 = Arc::new(FiniteSemigroup::cyclic(2));
        let rc2 = semigroup_gamma_ring(&z2, &c2, &budget()).unwrap();
        assert_eq!(rc2.order(), 4);
        let e1 = rc2.carrier().index_of(&[1, 0]).unwrap();
        let g1 = rc2.carrier().index_of(&[0, 1]).unwrap();
        let both = rc2.carrier().index_of(&[1, 1]).unwrap();
        assert_eq!(rc2.product(e1, 1, g1), g1);
        assert_eq!(rc2.product(both, 1, both), 0);
        assert!(check_axioms(&rc2, &budget()).unwrap().is_pass());
    }

    #[test]
    fn truncated_polynomials() {
        let z2 = GammaRing::modular(2).unwrap();
        let p = polynomial_ring(&z2, 2, &budget()).unwrap();
        let one_plus_x = p.from_coefficients(&[1, 1, 0]).unwrap();
        let sq = p.ring().product(one_plus_x, 1, one_plus_x);
        assert_eq!(p.coefficients(sq), vec![1, 0, 1]);
        for q in p.ring().carrier().elements() {
            for a in 0..2 {
                assert_eq!(p.ring().product(q, a, 0), 0);
            }
        }
        assert!(check_axioms(p.ring(), &budget()).unwrap().is_pass());
        // x^2 · x = 0 after truncation
        let x2 = p.from_coefficients(&[0, 0, 1]).unwrap();
        let x = p.from_coefficients(&[0, 1, 0]).unwrap();
        assert_eq!(p.ring().product(x2, 1, x), 0);
    }
}
