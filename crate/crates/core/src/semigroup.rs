//! Finite semigroups presented by Cayley tables, and homomorphisms between them.

use std::sync::Arc;

use crate::verdict::{Datum, Witness};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemigroup {
    labels: Vec<String>,
    table: Vec<usize>,
    commutative: bool,
    identity: Option<usize>,
    inverses: Option<Vec<usize>>,
}

impl FiniteSemigroup {
    /// Validates a Cayley table given by element indices. Associativity is
    /// checked exhaustively; commutativity, identity and inverses are detected.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidSemigroup("no elements".into()));
        }
        let mut seen = labels.clone();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSemigroup("duplicate labels".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidSemigroup(format!("table must be {n}x{n}")));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(Error::InvalidSemigroup("table entry is not a declared label".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        let w = Witness::new("associativity")
                            .with("a", Datum::Degree(labels[a].clone()))
                            .with("b", Datum::Degree(labels[b].clone()))
                            .with("c", Datum::Degree(labels[c].clone()));
                        return Err(Error::rejected("semigroup table", w));
                    }
                }
            }
        }
        Ok(Self::assemble(labels, flat))
    }

    /// Same as [`FiniteSemigroup::from_table`] with the table spelled in labels.
    pub fn from_label_table(labels: Vec<String>, table: &[Vec<String>]) -> Result<Self> {
        let idx = table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|l| {
                        labels.iter().position(|x| x == l).ok_or_else(|| {
                            Error::InvalidSemigroup(format!("table entry {l:?} is not a declared label"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(labels, idx)
    }

    fn assemble(labels: Vec<String>, table: Vec<usize>) -> Self {
        let n = labels.len();
        let mul = |a: usize, b: usize| table[a * n + b];
        let commutative = (0..n).all(|a| (0..n).all(|b| mul(a, b) == mul(b, a)));
        let identity = (0..n).find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a));
        let inverses = identity.and_then(|e| {
            (0..n)
                .map(|a| (0..n).find(|&b| mul(a, b) == e && mul(b, a) == e))
                .collect::<Option<Vec<_>>>()
        });
        FiniteSemigroup { labels, table, commutative, identity, inverses }
    }

    /// The cyclic group `C_n` with labels `e, g, g2, ..., g{n-1}`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                k => format!("g{k}"),
            })
            .collect();
        let table = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        Self::assemble(labels, table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The additive segment `{0, ..., d}` with sums clamped at `d`.
    pub fn segment(d: usize) -> Self {
        let labels = (0..=d).map(|k| k.to_string()).collect();
        let table = (0..=d).flat_map(|a| (0..=d).map(move |b| (a + b).min(d))).collect();
        Self::assemble(labels, table)
    }

    /// `Some(d)` when this is (literally) the clamped segment `{0..d}`.
    pub fn as_segment(&self) -> Option<usize> {
        let d = self.order() - 1;
        let labelled = self.labels.iter().enumerate().all(|(i, l)| *l == i.to_string());
        let clamped = (0..=d).all(|a| (0..=d).all(|b| self.mul(a, b) == (a + b).min(d)));
        (labelled && clamped).then_some(d)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn degree(&self, g: usize) -> Datum {
        Datum::Degree(self.labels[g].clone())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Precondition(format!("unknown semigroup element {label:?}")))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn identity(&self) -> Option<usize> {
        self.identity
    }

    pub fn is_group(&self) -> bool {
        self.inverses.is_some()
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        self.inverses.as_ref().map(|inv| inv[a])
    }

    /// Rejects a non-commutative table with the first non-commuting pair.
    pub fn require_abelian(&self) -> Result<()> {
        for a in self.elements() {
            for b in self.elements() {
                if self.mul(a, b) != self.mul(b, a) {
                    let w = Witness::new("commutativity")
                        .with("a", self.degree(a))
                        .with("b", self.degree(b));
                    return Err(Error::rejected("abelian semigroup", w));
                }
            }
        }
        Ok(())
    }

    pub fn require_group(&self, context: &str) -> Result<()> {
        if self.is_group() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{context} requires the grading semigroup to be a group")))
        }
    }

    /// First pair of `subset` whose product leaves it.
    pub fn closure_witness(&self, subset: &[usize]) -> Option<(usize, usize)> {
        subset.iter().find_map(|&a| {
            subset.iter().find(|&&b| !subset.contains(&self.mul(a, b))).map(|&b| (a, b))
        })
    }

    /// The subsemigroup on a closed subset, with its embedding.
    pub fn subsemigroup(&self, subset: &[usize]) -> Result<(FiniteSemigroup, Vec<usize>)> {
        let mut sub = subset.to_vec();
        sub.sort_unstable();
        sub.dedup();
        if sub.is_empty() || sub.iter().any(|&g| g >= self.order()) {
            return Err(Error::Precondition("subsemigroup must be a nonempty set of elements".into()));
        }
        if let Some((a, b)) = self.closure_witness(&sub) {
            return Err(Error::Precondition(format!(
                "subset not closed: {}*{} = {}",
                self.label(a),
                self.label(b),
                self.label(self.mul(a, b))
            )));
        }
        let labels = sub.iter().map(|&g| self.labels[g].clone()).collect();
        let table = sub
            .iter()
            .flat_map(|&a| sub.iter().map(move |&b| (a, b)))
            .map(|(a, b)| sub.iter().position(|&x| x == self.mul(a, b)).unwrap())
            .collect();
        Ok((Self::assemble(labels, table), sub))
    }

    /// `G/N` for a group `G` and subgroup `N`; each coset is labelled by its
    /// first member in the order of `G`.
    pub fn quotient_by_subgroup(self: &Arc<Self>, subgroup: &[usize]) -> Result<SemigroupMap> {
        self.require_group("quotient by a subgroup")?;
        let e = self.identity.unwrap();
        let (_, members) = self.subsemigroup(subgroup)?;
        if !members.contains(&e) || members.iter().any(|&n| !members.contains(&self.inverse(n).unwrap())) {
            return Err(Error::Precondition("N is not a subgroup".into()));
        }
        let n = self.order();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if class[g] == usize::MAX {
                for &m in &members {
                    class[self.mul(g, m)] = reps.len();
                }
                reps.push(g);
            }
        }
        let labels = reps.iter().map(|&r| self.labels[r].clone()).collect();
        let table = reps
            .iter()
            .flat_map(|&a| reps.iter().map(move |&b| (a, b)))
            .map(|(a, b)| class[self.mul(a, b)])
            .collect();
        let quotient = Arc::new(Self::assemble(labels, table));
        SemigroupMap::new(self.clone(), quotient, class)
    }
}

/// A map between finite semigroups, verified multiplicative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupMap {
    domain: Arc<FiniteSemigroup>,
    codomain: Arc<FiniteSemigroup>,
    images: Vec<usize>,
    surjective: bool,
}

impl SemigroupMap {
    pub fn new(domain: Arc<FiniteSemigroup>, codomain: Arc<FiniteSemigroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.order() || images.iter().any(|&h| h >= codomain.order()) {
            return Err(Error::Precondition("image table does not match domain and codomain".into()));
        }
        for a in domain.elements() {
            for b in domain.elements() {
                if images[domain.mul(a, b)] != codomain.mul(images[a], images[b]) {
                    let w = Witness::new("multiplicativity")
                        .with("g", domain.degree(a))
                        .with("h", domain.degree(b));
                    return Err(Error::rejected("semigroup homomorphism", w));
                }
            }
        }
        let surjective = codomain.elements().all(|h| images.contains(&h));
        Ok(SemigroupMap { domain, codomain, images, surjective })
    }

    pub fn from_labels(
        domain: Arc<FiniteSemigroup>,
        codomain: Arc<FiniteSemigroup>,
        images: &[(String, String)],
    ) -> Result<Self> {
        let mut table = vec![usize::MAX; domain.order()];
        for (g, h) in images {
            table[domain.index_of(g)?] = codomain.index_of(h)?;
        }
        if let Some(g) = table.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Precondition(format!("no image given for {}", domain.label(g))));
        }
        Self::new(domain, codomain, table)
    }

    pub fn identity(g: Arc<FiniteSemigroup>) -> Self {
        let images = g.elements().collect();
        SemigroupMap { domain: g.clone(), codomain: g, images, surjective: true }
    }

    pub fn domain(&self) -> &Arc<FiniteSemigroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteSemigroup> {
        &self.codomain
    }

    pub fn image(&self, g: usize) -> usize {
        self.images[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn fiber(&self, h: usize) -> Vec<usize> {
        self.domain.elements().filter(|&g| self.images[g] == h).collect()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SemigroupMap) -> Result<SemigroupMap> {
        if *next.domain != *self.codomain {
            return Err(Error::Incompatible("maps do not compose".into()));
        }
        let images = self.images.iter().map(|&h| next.images[h]).collect();
        SemigroupMap::new(self.domain.clone(), next.codomain.clone(), images)
    }
}
