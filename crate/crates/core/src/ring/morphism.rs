use super::GammaRing;
use crate::group::{Elem, FiniteAbelianGroup};
use crate::verdict::{Verdict, Witness};
use crate::{Error, Result};

/// Verifies that `phi` is a bijective additive self-map of `gamma`.
pub fn check_automorphism(gamma: &FiniteAbelianGroup, phi: &[Elem]) -> Result<()> {
    if phi.len() != gamma.order() || phi.iter().any(|&v| v >= gamma.order()) {
        return Err(Error::InvalidAutomorphism("map does not match the gamma group".into()));
    }
    let mut hit = vec![false; gamma.order()];
    for &v in phi {
        if std::mem::replace(&mut hit[v], true) {
            return Err(Error::InvalidAutomorphism(format!("{} has two preimages", gamma.render(v))));
        }
    }
    for a in gamma.elements() {
        for b in gamma.elements() {
            if phi[gamma.add(a, b)] != gamma.add(phi[a], phi[b]) {
                return Err(Error::InvalidAutomorphism(format!(
                    "not additive at ({}, {})",
                    gamma.render(a),
                    gamma.render(b)
                )));
            }
        }
    }
    Ok(())
}

/// Checks `f(x+y) = f(x)+f(y)` and `f(xγy) = f(x)φ(γ)f(y)`. Without `phi` this is
/// the plain homomorphism check.
pub fn check_phi_homomorphism(
    source: &GammaRing,
    target: &GammaRing,
    f: &[Elem],
    phi: Option<&[Elem]>,
) -> Result<Verdict> {
    if source.gamma() != target.gamma() {
        return Err(Error::Incompatible("rings do not share a gamma group".into()));
    }
    if f.len() != source.order() || f.iter().any(|&v| v >= target.order()) {
        return Err(Error::Precondition("map does not match source and target".into()));
    }
    let identity: Vec<Elem>;
    let phi = match phi {
        Some(p) => {
            check_automorphism(source.gamma(), p)?;
            p
        }
        None => {
            identity = source.gamma().elements().collect();
            &identity
        }
    };
    let (r, t) = (source.carrier(), target.carrier());
    for x in r.elements() {
        for y in r.elements() {
            if f[r.add(x, y)] != t.add(f[x], f[y]) {
                return Ok(Verdict::Fail(
                    Witness::new("additivity").with("x", r.render(x)).with("y", r.render(y)),
                ));
            }
        }
    }
    for (x, a, y) in source.triples() {
        if f[source.product(x, a, y)] != target.product(f[x], phi[a], f[y]) {
            return Ok(Verdict::Fail(
                Witness::new("multiplicativity")
                    .with("x", source.elem(x))
                    .with("alpha", source.gam(a))
                    .with("y", source.elem(y)),
            ));
        }
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Datum;

    #[test]
    fn identity_is_homomorphism() {
        let z2 = GammaRing::modular(2).unwrap();
        assert!(check_phi_homomorphism(&z2, &z2, &[0, 1], None).unwrap().is_pass());
    }

    #[test]
    fn tripling_needs_twisted_gamma() {
        let z4 = GammaRing::modular(4).unwrap();
        let triple: Vec<Elem> = (0..4).map(|x| 3 * x % 4).collect();
        assert!(check_phi_homomorphism(&z4, &z4, &triple, Some(&triple)).unwrap().is_pass());
        let v = check_phi_homomorphism(&z4, &z4, &triple, None).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.law, "multiplicativity");
        assert_eq!(w.get("x"), Some(&Datum::Element(vec![1])));
        assert_eq!(w.get("alpha"), Some(&Datum::Element(vec![1])));
        assert_eq!(w.get("y"), Some(&Datum::Element(vec![1])));
    }

    #[test]
    fn bad_automorphism() {
        let z4 = GammaRing::modular(4).unwrap();
        let id: Vec<Elem> = (0..4).collect();
        let err = check_phi_homomorphism(&z4, &z4, &id, Some(&[0, 2, 0, 2])).unwrap_err();
        assert!(matches!(err, Error::InvalidAutomorphism(_)));
    }
}
