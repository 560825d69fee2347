//! Finite abelian groups in cyclic-product form, their subgroups and quotients.
//!
//! Elements are addressed by their index in lexicographic order of the residue
//! tuples, so `0` is always the zero element and comparing indices compares
//! tuples lexicographically. Groups obtained from subgroups and quotients keep
//! the tuples of their parent as labels and therefore share that ordering.

use std::sync::Arc;

use crate::verdict::{Datum, Witness};
use crate::{Error, Result};

/// Residue tuple of an element, the external spelling of a group element.
pub type Tuple = Vec<u32>;

/// Index of an element inside its group.
pub type Elem = usize;

/// Hard cap on carrier sizes; anything larger is far outside desk scale.
pub const MAX_ORDER: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Law {
    Cyclic { moduli: Vec<u32> },
    Tabled { labels: Vec<Tuple>, add: Vec<u32>, neg: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    law: Law,
    order: usize,
}

/// Splits a mixed-radix index into digits, most significant first.
pub fn split_index(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = idx % r;
        idx /= r;
    }
    digits
}

/// Inverse of [`split_index`].
pub fn join_index(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

fn checked_order(sizes: impl IntoIterator<Item = usize>) -> Result<usize> {
    let mut order: usize = 1;
    for s in sizes {
        order = order
            .checked_mul(s)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(Error::Budget { needed: u128::MAX, limit: MAX_ORDER as u64 })?;
    }
    Ok(order)
}

impl FiniteAbelianGroup {
    /// `Z_{n1} x ... x Z_{nk}`. An empty list gives the trivial group.
    pub fn cyclic(moduli: &[u32]) -> Result<Self> {
        if let Some(bad) = moduli.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidGroup(format!("modulus {bad} is not >= 1")));
        }
        let order = checked_order(moduli.iter().map(|&n| n as usize))?;
        Ok(FiniteAbelianGroup { law: Law::Cyclic { moduli: moduli.to_vec() }, order })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { law: Law::Cyclic { moduli: Vec::new() }, order: 1 }
    }

    /// A group given by its element tuples (strictly increasing, the first one
    /// all zeros) and an addition table over element indices. Every group axiom
    /// is checked.
    pub fn from_table(labels: Vec<Tuple>, add: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidGroup("no elements".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::Budget { needed: n as u128, limit: MAX_ORDER as u64 });
        }
        let arity = labels[0].len();
        if labels.iter().any(|l| l.len() != arity) {
            return Err(Error::InvalidGroup("element tuples differ in length".into()));
        }
        if labels[0].iter().any(|&v| v != 0) {
            return Err(Error::InvalidGroup("first element must be the all-zero tuple".into()));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGroup("element tuples must be strictly increasing".into()));
        }
        if add.len() != n || add.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup(format!("addition table must be {n}x{n}")));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &add {
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidGroup(format!("table entry {v} out of range")));
                }
                flat.push(v as u32);
            }
        }
        let at = |a: usize, b: usize| flat[a * n + b] as usize;
        for a in 0..n {
            if at(0, a) != a {
                return Err(Error::InvalidGroup(format!("zero is not neutral for element {a}")));
            }
            for b in 0..n {
                if at(a, b) != at(b, a) {
                    return Err(Error::InvalidGroup(format!("not commutative at ({a},{b})")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let neg = (0..n)
            .map(|a| match (0..n).find(|&b| at(a, b) == 0) {
                Some(b) => Ok(b as u32),
                None => Err(Error::InvalidGroup(format!("element {a} has no inverse"))),
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(FiniteAbelianGroup { law: Law::Tabled { labels, add: flat, neg }, order: n })
    }

    /// Builds a tabled group from already-consistent data.
    fn tabled(labels: Vec<Tuple>, add: impl Fn(usize, usize) -> usize) -> Self {
        let n = labels.len();
        let mut flat = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                flat.push(add(a, b) as u32);
            }
        }
        let mut neg = vec![0u32; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| flat[a * n + b] == 0).expect("group element without inverse") as u32;
        }
        FiniteAbelianGroup { law: Law::Tabled { labels, add: flat, neg }, order: n }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// The invariant moduli when the group is stored in cyclic-product form.
    pub fn moduli(&self) -> Option<&[u32]> {
        match &self.law {
            Law::Cyclic { moduli } => Some(moduli),
            Law::Tabled { .. } => None,
        }
    }

    /// Length of the element tuples.
    pub fn arity(&self) -> usize {
        match &self.law {
            Law::Cyclic { moduli } => moduli.len(),
            Law::Tabled { labels, .. } => labels[0].len(),
        }
    }

    fn radices(moduli: &[u32]) -> Vec<usize> {
        moduli.iter().map(|&m| m as usize).collect()
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.law {
            Law::Cyclic { moduli } => {
                let (mut x, mut y, mut place, mut out) = (a, b, 1usize, 0usize);
                for &m in moduli.iter().rev() {
                    let m = m as usize;
                    out += ((x % m + y % m) % m) * place;
                    place *= m;
                    x /= m;
                    y /= m;
                }
                out
            }
            Law::Tabled { add, .. } => add[a * self.order + b] as usize,
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match &self.law {
            Law::Cyclic { moduli } => {
                let (mut x, mut place, mut out) = (a, 1usize, 0usize);
                for &m in moduli.iter().rev() {
                    let m = m as usize;
                    out += ((m - x % m) % m) * place;
                    place *= m;
                    x /= m;
                }
                out
            }
            Law::Tabled { neg, .. } => neg[a] as usize,
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `k * a` for a non-negative integer `k`.
    pub fn times(&self, k: usize, a: Elem) -> Elem {
        let mut acc = 0;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    pub fn label(&self, a: Elem) -> Tuple {
        match &self.law {
            Law::Cyclic { moduli } => {
                split_index(a, &Self::radices(moduli)).into_iter().map(|d| d as u32).collect()
            }
            Law::Tabled { labels, .. } => labels[a].clone(),
        }
    }

    pub fn index_of(&self, tuple: &[u32]) -> Result<Elem> {
        let malformed = |reason: &str| Error::MalformedElement {
            tuple: tuple.to_vec(),
            reason: reason.to_string(),
        };
        match &self.law {
            Law::Cyclic { moduli } => {
                if tuple.len() != moduli.len() {
                    return Err(malformed(&format!("expected {} entries", moduli.len())));
                }
                if tuple.iter().zip(moduli).any(|(&v, &m)| v >= m) {
                    return Err(malformed(&format!("entries must be reduced mod {moduli:?}")));
                }
                let digits: Vec<usize> = tuple.iter().map(|&v| v as usize).collect();
                Ok(join_index(&digits, &Self::radices(moduli)))
            }
            Law::Tabled { labels, .. } => labels
                .binary_search_by(|l| l.as_slice().cmp(tuple))
                .map_err(|_| malformed("not an element of this group")),
        }
    }

    /// Direct product; the element index is the mixed-radix combination of the
    /// factor indices, first factor most significant.
    pub fn direct_product(factors: &[&FiniteAbelianGroup]) -> Result<Self> {
        if factors.iter().all(|f| f.moduli().is_some()) {
            let moduli: Vec<u32> =
                factors.iter().flat_map(|f| f.moduli().unwrap().iter().copied()).collect();
            return Self::cyclic(&moduli);
        }
        let radices: Vec<usize> = factors.iter().map(|f| f.order()).collect();
        let order = checked_order(radices.iter().copied())?;
        let labels: Vec<Tuple> = (0..order)
            .map(|i| {
                split_index(i, &radices)
                    .iter()
                    .zip(factors)
                    .flat_map(|(&d, f)| f.label(d))
                    .collect()
            })
            .collect();
        Ok(Self::tabled(labels, |a, b| {
            let x = split_index(a, &radices);
            let y = split_index(b, &radices);
            let s: Vec<usize> =
                factors.iter().enumerate().map(|(i, f)| f.add(x[i], y[i])).collect();
            join_index(&s, &radices)
        }))
    }

    pub fn render(&self, a: Elem) -> Datum {
        Datum::Element(self.label(a))
    }
}

/// A subgroup stored extensionally as a sorted element set of its parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<FiniteAbelianGroup>,
    elements: Vec<Elem>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.parent == other.parent
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    fn from_sorted(parent: Arc<FiniteAbelianGroup>, elements: Vec<Elem>) -> Self {
        let mut mask = vec![false; parent.order()];
        for &e in &elements {
            mask[e] = true;
        }
        Subgroup { parent, elements, mask }
    }

    pub fn trivial(parent: &Arc<FiniteAbelianGroup>) -> Self {
        Self::from_sorted(parent.clone(), vec![0])
    }

    pub fn whole(parent: &Arc<FiniteAbelianGroup>) -> Self {
        Self::from_sorted(parent.clone(), parent.elements().collect())
    }

    /// Smallest subgroup containing `generators`, by closure under addition.
    pub fn generated<I: IntoIterator<Item = Elem>>(parent: &Arc<FiniteAbelianGroup>, generators: I) -> Self {
        let mut gens: Vec<Elem> = generators.into_iter().filter(|&g| g != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        let mut mask = vec![false; parent.order()];
        mask[0] = true;
        let mut elements = vec![0];
        let mut i = 0;
        while i < elements.len() {
            let x = elements[i];
            for &g in &gens {
                let y = parent.add(x, g);
                if !mask[y] {
                    mask[y] = true;
                    elements.push(y);
                }
            }
            i += 1;
        }
        elements.sort_unstable();
        Subgroup { parent: parent.clone(), elements, mask }
    }

    /// Validates an explicit element set as a subgroup.
    pub fn from_elements<I: IntoIterator<Item = Elem>>(parent: &Arc<FiniteAbelianGroup>, elements: I) -> Result<Self> {
        let mut elements: Vec<Elem> = elements.into_iter().collect();
        if let Some(&bad) = elements.iter().find(|&&e| e >= parent.order()) {
            return Err(Error::InvalidSubgroup(format!("index {bad} outside the parent group")));
        }
        elements.sort_unstable();
        elements.dedup();
        let sub = Self::from_sorted(parent.clone(), elements);
        if !sub.mask[0] {
            return Err(Error::InvalidSubgroup("does not contain zero".into()));
        }
        for &a in &sub.elements {
            for &b in &sub.elements {
                let s = parent.add(a, b);
                if !sub.mask[s] {
                    return Err(Error::InvalidSubgroup(format!(
                        "not closed: {} + {} = {}",
                        parent.render(a),
                        parent.render(b),
                        parent.render(s)
                    )));
                }
            }
        }
        Ok(sub)
    }

    pub fn from_tuples(parent: &Arc<FiniteAbelianGroup>, tuples: &[Tuple]) -> Result<Self> {
        let elems = tuples.iter().map(|t| parent.index_of(t)).collect::<Result<Vec<_>>>()?;
        Self::from_elements(parent, elems)
    }

    pub fn parent(&self) -> &Arc<FiniteAbelianGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Self::from_sorted(self.parent.clone(), elements)
    }

    /// `self + other`, the subgroup generated by the union.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        Self::generated(&self.parent, self.elements.iter().chain(&other.elements).copied())
    }

    pub fn labels(&self) -> Vec<Tuple> {
        self.elements.iter().map(|&e| self.parent.label(e)).collect()
    }

    pub fn render(&self) -> Datum {
        Datum::Elements(self.labels())
    }

    /// Position of a parent element inside the sorted element list.
    pub fn local_index(&self, x: Elem) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// The subgroup as a group in its own right. Local index `i` corresponds to
    /// parent element `self.elements()[i]`.
    pub fn as_group(&self) -> FiniteAbelianGroup {
        let labels = self.labels();
        FiniteAbelianGroup::tabled(labels, |a, b| {
            let s = self.parent.add(self.elements[a], self.elements[b]);
            self.local_index(s).expect("subgroup closed under addition")
        })
    }

    /// Re-expresses a subgroup of the parent lying inside `self` in local indices.
    pub fn restrict(&self, inner: &Subgroup, local: &Arc<FiniteAbelianGroup>) -> Result<Subgroup> {
        let elems = inner
            .elements
            .iter()
            .map(|&x| {
                self.local_index(x)
                    .ok_or_else(|| Error::InvalidSubgroup("not contained in the ambient subgroup".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_sorted(local.clone(), elems))
    }

    /// Image of a subgroup under an additive map into `target`.
    pub fn image(&self, target: &Arc<FiniteAbelianGroup>, map: impl Fn(Elem) -> Elem) -> Subgroup {
        Subgroup::generated(target, self.elements.iter().map(|&x| map(x)))
    }
}

/// `G / K` with the lexicographically least tuple of each coset as representative.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    kernel: Subgroup,
    class_of: Vec<usize>,
    reps: Vec<Elem>,
    group: Arc<FiniteAbelianGroup>,
}

impl QuotientGroup {
    pub fn new(kernel: &Subgroup) -> Self {
        let parent = kernel.parent().clone();
        let n = parent.order();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::with_capacity(n / kernel.order());
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &k in kernel.elements() {
                class_of[parent.add(x, k)] = c;
            }
        }
        let labels = reps.iter().map(|&r| parent.label(r)).collect();
        let group = FiniteAbelianGroup::tabled(labels, |a, b| class_of[parent.add(reps[a], reps[b])]);
        QuotientGroup { kernel: kernel.clone(), class_of, reps, group: Arc::new(group) }
    }

    pub fn parent(&self) -> &Arc<FiniteAbelianGroup> {
        self.kernel.parent()
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// The quotient as a group; element `c` is the coset with representative `rep(c)`.
    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn class(&self, x: Elem) -> usize {
        self.class_of[x]
    }

    pub fn rep(&self, class: usize) -> Elem {
        self.reps[class]
    }

    pub fn reps(&self) -> &[Elem] {
        &self.reps
    }

    /// Canonical representative of the coset of `x`.
    pub fn reduce(&self, x: Elem) -> Elem {
        self.reps[self.class_of[x]]
    }

    /// All parent elements of a coset.
    pub fn coset(&self, class: usize) -> Vec<Elem> {
        let parent = self.parent();
        let mut v: Vec<Elem> =
            self.kernel.elements().iter().map(|&k| parent.add(self.reps[class], k)).collect();
        v.sort_unstable();
        v
    }
}

/// Exhaustively verifies the abelian group laws of `group`, returning the first
/// violation. Used to cross-check stored groups.
pub fn check_group_laws(group: &FiniteAbelianGroup) -> Option<Witness> {
    let n = group.order();
    for a in 0..n {
        if group.add(a, group.neg(a)) != 0 {
            return Some(Witness::new("inverse").with("a", group.render(a)));
        }
        for b in 0..n {
            if group.add(a, b) != group.add(b, a) {
                return Some(
                    Witness::new("commutativity").with("a", group.render(a)).with("b", group.render(b)),
                );
            }
            for c in 0..n {
                if group.add(group.add(a, b), c) != group.add(a, group.add(b, c)) {
                    return Some(
                        Witness::new("associativity")
                            .with("a", group.render(a))
                            .with("b", group.render(b))
                            .with("c", group.render(c)),
                    );
                }
            }
        }
    }
    None
}
